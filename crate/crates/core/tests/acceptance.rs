//! Acceptance suite. Prints one PASS/FAIL line per criterion with its
//! runtime and exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use gasket_core::config::Config;
use gasket_core::dynamics::{branch_gap, dphi_minus, forward_map, phi_minus, phi_minus_iter, phi_plus};
use gasket_core::gaps::{
    finite_gap_dirichlet, table1, verify_full_level_minimum, verify_induction_step, verify_key1,
    verify_key2, verify_min_gap_theorem, verify_pre_lowest,
};
use gasket_core::limits::{check_interval_separation, check_sum_closure, gap_ratios, increment_ratios};
use gasket_core::oracle::cross_check;
use gasket_core::scalar::{Ball, Certified, Dyadic};
use gasket_core::spectra::{self, BoundaryCondition, Seed};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const BCS: [BoundaryCondition; 2] = [BoundaryCondition::Dirichlet, BoundaryCondition::Neumann];
const P: u32 = 128;

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn oracle_equivalence() -> Outcome {
    let mut worst = 0.0f64;
    for m in 1..=5 {
        for bc in BCS {
            let r = cross_check(m, bc, 1e-8).map_err(|e| format!("m={m} {bc}: {e}"))?;
            ensure(r.hausdorff <= 1e-8, || format!("m={m} {bc}: distance {}", r.hausdorff))?;
            worst = worst.max(r.hausdorff);
        }
    }
    Ok(format!("max Hausdorff distance {worst:.2e}"))
}

/// Reference four-digit values; entry 4 is checked separately.
const TABLE1: [&str; 11] = [
    "0.0000", "0.0164", "0.0061", "", "0.0758", "0.0303", "0.0039", "0.0149", "0.0395", "0.0108",
    "0.0005",
];

/// Rounding half-even or truncating at the printed digits reproduces `shown`.
fn matches_printed(x: &Dyadic, shown: &str) -> bool {
    let digits = shown.len() - shown.find('.').map_or(shown.len(), |i| i + 1);
    x.to_decimal(digits as u32) == shown || x.to_decimal_truncated(digits as u32) == shown
}

fn table1_reproduction() -> Outcome {
    let rows = table1(P).map_err(|e| e.to_string())?;
    ensure(rows.len() == 11, || format!("{} rows", rows.len()))?;
    for (row, shown) in rows.iter().zip(TABLE1) {
        let d = &row.difference;
        if row.index == 4 {
            let small = Ball::from_f64(1e-5, P).unwrap();
            ensure(d.is_positive() && d.certified_cmp(&small) == Certified::Less, || {
                format!("entry 4 = {d}")
            })?;
        } else {
            ensure(matches_printed(d.mid(), shown) && d.radius_f64() < 1e-12, || {
                format!("entry {} = {} vs {shown}", row.index, d.mid_decimal(8))
            })?;
        }
    }
    Ok(format!(
        "11 entries; entry 4 = {} (flagged)",
        rows[3].difference.mid().to_scientific(5)
    ))
}

fn large_gap_ratios() -> Outcome {
    let (r1, r2) = gap_ratios(&Config::default()).map_err(|e| e.to_string())?;
    for (r, shown) in [(&r1, "2.425"), (&r2, "1.271")] {
        let width = r.upper().sub(&r.lower()).to_f64_up();
        ensure(width < 1e-4, || format!("width {width}"))?;
        ensure(matches_printed(&r.lower(), shown) && matches_printed(&r.upper(), shown), || {
            format!("{} vs {shown}", r.mid_decimal(6))
        })?;
    }
    Ok(format!("r1 = {}, r2 = {}", r1.mid_decimal(6), r2.mid_decimal(6)))
}

fn theorem_at_truncation() -> Outcome {
    let cfg = Config::default();
    let mut witness = None;
    let mut gap: Option<Ball> = None;
    for l in 4..=8 {
        let r = verify_min_gap_theorem(l, BoundaryCondition::Dirichlet, &cfg).map_err(|e| e.to_string())?;
        ensure(r.is_certified(), || format!("Dirichlet L={l}: {:?}", r.notes))?;
        let this_gap = limits_gap(&r)?;
        if let Some(g) = &gap {
            ensure(g.overlaps(&this_gap), || format!("Dirichlet L={l}: gap moved"))?;
        }
        gap = Some(this_gap);
        witness.get_or_insert_with(|| r.witness.clone());
    }
    for l in 1..=8 {
        let r = verify_min_gap_theorem(l, BoundaryCondition::Neumann, &cfg).map_err(|e| e.to_string())?;
        ensure(r.is_certified(), || format!("Neumann L={l}: {:?}", r.notes))?;
    }
    Ok(format!(
        "Dirichlet L=4..8 gap {} witness {:?}; Neumann L=1..8",
        gap.unwrap().mid_decimal(6),
        witness.flatten().unwrap()
    ))
}

fn limits_gap(r: &gasket_core::GapReport) -> Result<Ball, String> {
    use gasket_core::limits::{named_constant, NamedConstant};
    let c = Config::with_precision(r.precision_bits);
    let hi = named_constant(NamedConstant::Lambda0Five, &c).map_err(|e| e.to_string())?;
    let lo = named_constant(NamedConstant::Lambda0Two, &c).map_err(|e| e.to_string())?;
    Ok(hi.sub(&lo))
}

fn lemma_sweeps() -> Outcome {
    let cfg = Config::default();
    let mut count = 0;
    let mut check = |r: gasket_core::Result<gasket_core::GapReport>, what: String| {
        count += 1;
        match r {
            Ok(r) if r.is_certified() => Ok(()),
            Ok(r) => Err(format!("{what}: {:?}", r.notes)),
            Err(e) => Err(format!("{what}: {e}")),
        }
    };
    for m in 1..=40 {
        check(verify_key1(m, &cfg), format!("key1 m={m}"))?;
        check(verify_key2(m, &cfg), format!("key2 m={m}"))?;
    }
    for m in 3..=10 {
        check(verify_induction_step(m, &cfg), format!("induction m={m}"))?;
    }
    for m in 3..=6 {
        for k in 2..=5 {
            check(verify_pre_lowest(m, k, &cfg), format!("prelowest ({m},{k})"))?;
        }
    }
    for m in 1..=10 {
        for bc in BCS {
            check(verify_full_level_minimum(m, bc, &cfg), format!("fullmin {bc} m={m}"))?;
        }
    }
    Ok(format!("{count} instances certified"))
}

fn random_point(rng: &mut StdRng, hi: i64) -> Ball {
    let k: i64 = rng.gen_range(0..=hi << 40);
    Ball::from_dyadic(Dyadic::new(k.into(), -40), P)
}

fn ok(b: bool) -> Result<(), String> {
    ensure(b, || "violated".into())
}

fn dynamics_properties(rng: &mut StdRng) -> Result<(), String> {
    const N: usize = 1000;
    let e = |x: gasket_core::Error| x.to_string();
    for _ in 0..N {
        let z = random_point(rng, 6);
        let zd = z.mid().clone();
        let (lo, hi) = (phi_minus(&z).map_err(e)?, phi_plus(&z).map_err(e)?);
        ok(forward_map(&lo).contains(&zd) && forward_map(&hi).contains(&zd))
            .map_err(|m| format!("inverse identity at {z}: {m}"))?;
        ok(lo.certified_cmp(&hi) == Certified::Less
            && lo.upper() <= Dyadic::from_int(2)
            && hi.lower() >= Dyadic::from_int(3)
            && hi.upper() <= Dyadic::from_int(5))
        .map_err(|m| format!("branch separation at {z}: {m}"))?;
        ok(hi.sub(&lo).overlaps(&branch_gap(&z).map_err(e)?))
            .map_err(|m| format!("gap identity at {z}: {m}"))?;
    }
    for _ in 0..N {
        let (a, b) = (random_point(rng, 6), random_point(rng, 6));
        let (x, y) = if a.mid() <= b.mid() { (a, b) } else { (b, a) };
        let left = phi_minus(&y).map_err(e)?.sub(&phi_minus(&x).map_err(e)?);
        let right = phi_plus(&x).map_err(e)?.sub(&phi_plus(&y).map_err(e)?);
        ok(left.overlaps(&right)).map_err(|m| format!("equidistance at {x}, {y}: {m}"))?;
    }
    for _ in 0..N {
        let mut p: Vec<Ball> = (0..4).map(|_| random_point(rng, 6)).collect();
        p.sort_by(|a, b| a.mid().cmp(b.mid()));
        let (w, x, y, z) = (&p[0], &p[1], &p[2], &p[3]);
        let d = |a: &Ball, b: &Ball| -> Result<Ball, String> {
            Ok(phi_minus(b).map_err(e)?.sub(&phi_minus(a).map_err(e)?))
        };
        let near = d(w, x)?;
        ok(near.certified_cmp(&x.sub(w)) != Certified::Greater)
            .map_err(|m| format!("contraction at {w}, {x}: {m}"))?;
        if x.sub(w).mid() <= z.sub(y).mid() {
            ok(near.certified_cmp(&d(y, z)?) != Certified::Greater)
                .map_err(|m| format!("convexity at {w}..{z}: {m}"))?;
        }
    }
    let h = Ball::from_dyadic(Dyadic::new(1.into(), -20), P);
    for _ in 0..N {
        let z = random_point(rng, 5);
        let fd = phi_minus(&z.add(&h)).map_err(e)?.sub(&phi_minus(&z).map_err(e)?).div(&h).map_err(e)?;
        // |Φ-''| ≤ 2 on [0, 6], so the forward difference is within h of Φ-'.
        let err = fd.sub(&dphi_minus(&z).map_err(e)?).abs_upper();
        ok(err <= h.mid().clone()).map_err(|m| format!("derivative at {z}: {m}"))?;
    }
    Ok(())
}

fn spectra_properties() -> Result<(), String> {
    let e = |x: gasket_core::Error| x.to_string();
    for bc in BCS {
        let first = if bc == BoundaryCondition::Dirichlet { 1 } else { 0 };
        for m in first..=12 {
            let level = spectra::level(bc, m, P).map_err(e)?;
            let expected_len = match (bc, m) {
                (BoundaryCondition::Dirichlet, 1) => 2,
                (BoundaryCondition::Neumann, 0) => 2,
                (BoundaryCondition::Neumann, 1) => 3,
                _ => {
                    let prev = spectra::level(bc, m - 1, P).map_err(e)?;
                    let extra = if bc == BoundaryCondition::Dirichlet && m >= 3 { 3 } else { 2 };
                    2 * prev.without_six().count() + extra
                }
            };
            ensure(level.len() == expected_len, || format!("{bc} m={m}: size {}", level.len()))?;
            for entry in &level.entries {
                let fresh = entry.descriptor.evaluate(P).map_err(e)?;
                ensure(fresh.overlaps(&entry.value), || format!("{}", entry.descriptor))?;
                ensure(entry.descriptor.level() == m, || {
                    format!("level of {}", entry.descriptor)
                })?;
            }
            if m >= 2 || (bc == BoundaryCondition::Neumann && m == 1) {
                let prev = spectra::level(bc, m - 1, P).map_err(e)?;
                for parent in prev.without_six() {
                    let child = parent.descriptor.child(gasket_core::Branch::Minus);
                    let pos = level.position(&child).ok_or_else(|| format!("{bc} m={m}: {child} missing"))?;
                    let back = forward_map(&level.entries[pos].value);
                    ensure(back.overlaps(&parent.value), || format!("{child} does not map back"))?;
                }
            }
            let values = level.values();
            let k = m.saturating_sub(1);
            match bc {
                BoundaryCondition::Dirichlet => {
                    let min = phi_minus_iter(&Ball::from_int(2, P), k).map_err(e)?;
                    let second = phi_minus_iter(&Ball::from_int(5, P), k).map_err(e)?;
                    ensure(values[0].overlaps(&min) && values[1].overlaps(&second), || {
                        format!("Dirichlet m={m}: lowest pair")
                    })?;
                    finite_gap_dirichlet(m, P).map_err(e)?;
                }
                BoundaryCondition::Neumann if m >= 1 => {
                    let min = phi_minus_iter(&Ball::from_int(3, P), k).map_err(e)?;
                    ensure(values[0].certainly_equal(&Ball::zero(P)) && values[1].overlaps(&min), || {
                        format!("Neumann m={m}: lowest pair")
                    })?;
                }
                BoundaryCondition::Neumann => {}
            }
        }
    }
    Ok(())
}

fn property_suites() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    dynamics_properties(&mut rng)?;
    spectra_properties()?;
    Ok("6 dynamics properties x 1000 samples; spectra invariants m <= 12".into())
}

fn convergence_diagnostics() -> Outcome {
    let mut seen = Vec::new();
    for seed in [Seed::Two.value(), 3, Seed::Five.value()] {
        let ratios = increment_ratios(&Ball::from_int(seed, 256), 1, 30).map_err(|e| e.to_string())?;
        for (k, r) in ratios.iter().enumerate().skip(10) {
            let x = r.to_f64();
            ensure((0.18..=0.22).contains(&x) && r.radius_f64() < 1e-6, || {
                format!("seed {seed}, k={k}: ratio {x}")
            })?;
        }
        seen.push(format!("{seed}: {:.6}", ratios.last().unwrap().to_f64()));
    }
    Ok(format!("ratios at k=30 {}", seen.join(", ")))
}

fn dyadic_propositions() -> Outcome {
    let cfg = Config::default();
    let mut count = 0;
    for m in 2..=8 {
        for m2 in m..=8 {
            if m < m2 {
                let r = check_interval_separation(m, m2, &cfg).map_err(|e| e.to_string())?;
                ensure(r.is_certified(), || format!("separation ({m},{m2})"))?;
                count += 1;
            }
            let r = check_sum_closure(m, m2, &cfg).map_err(|e| e.to_string())?;
            ensure(r.is_certified(), || format!("sum closure ({m},{m2})"))?;
            count += 1;
        }
    }
    Ok(format!("{count} instances certified"))
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "oracle equivalence", budget: Duration::from_secs(30), run: oracle_equivalence },
        Criterion { id: 2, name: "table 1 reproduction", budget: Duration::from_secs(1), run: table1_reproduction },
        Criterion { id: 3, name: "large-gap ratios", budget: Duration::from_secs(1), run: large_gap_ratios },
        Criterion { id: 4, name: "theorem at truncation", budget: Duration::from_secs(10), run: theorem_at_truncation },
        Criterion { id: 5, name: "lemma sweeps", budget: Duration::from_secs(60), run: lemma_sweeps },
        Criterion { id: 6, name: "property suites", budget: Duration::MAX, run: property_suites },
        Criterion { id: 7, name: "convergence diagnostics", budget: Duration::MAX, run: convergence_diagnostics },
        Criterion { id: 8, name: "dyadic propositions", budget: Duration::MAX, run: dyadic_propositions },
    ];
    let mut failed = 0;
    for c in criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if elapsed > c.budget => Err(format!("{msg}; over budget {:?}", c.budget)),
            other => other,
        };
        let (tag, msg) = match &outcome {
            Ok(m) => ("PASS", m),
            Err(m) => ("FAIL", m),
        };
        if outcome.is_err() {
            failed += 1;
        }
        println!("{tag} criterion {} ({}) [{:.2?}]: {msg}", c.id, c.name, elapsed);
    }
    if failed == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criterion(s) failed");
        ExitCode::FAILURE
    }
}
