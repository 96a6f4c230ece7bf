//! Certified minimal spacings: finite-level spectral gaps, the two ratio
//! inequalities, the pulled-back minimum lemmas, full-level minima and the
//! minimal gap of the limit spectrum.
//!
//! Every verifier returns a [`GapReport`] and retries at doubled precision
//! until the report certifies or the configured cap is reached.

use crate::config::Config;
use crate::dynamics::{branch_gap, phi_minus, phi_minus_iter, phi_plus, Branch};
use crate::error::{Error, Result};
use crate::limits::{self, eigenvalues_up_to_fixation, NamedConstant};
use crate::report::{escalate, GapReport};
use crate::scalar::{Ball, Certified};
use crate::spectra::{self, BoundaryCondition, EigenDescriptor, Seed, SpectrumEntry};

/// Smallest adjacent difference of a sorted list of values.
#[derive(Clone, Debug, PartialEq)]
pub struct Spacing {
    pub gap: Ball,
    /// Indices `(i, i + 1)` of the attaining pair.
    pub witness: (usize, usize),
    /// Lower indices of other adjacent pairs whose difference could not be
    /// separated from `gap`.
    pub ties: Vec<usize>,
    /// Smallest difference among the remaining pairs.
    pub runner_up: Option<Ball>,
    /// Every adjacent difference is certified positive.
    pub ordered: bool,
    /// Every tie is exactly equal to `gap`.
    pub ties_exact: bool,
}

impl Spacing {
    /// True when the reported pair is certified minimal: ties, if any, are
    /// exact and equal to the minimum.
    pub fn certified(&self) -> bool {
        self.ordered && (self.ties.is_empty() || self.ties_exact)
    }

    /// `runner_up - gap`, or the gap itself when no other pair is left.
    pub fn margin(&self) -> Ball {
        match &self.runner_up {
            Some(r) => r.sub(&self.gap),
            None => self.gap.clone(),
        }
    }
}

fn adjacent_differences(values: &[Ball]) -> Vec<Ball> {
    values.windows(2).map(|w| w[1].sub(&w[0])).collect()
}

/// Minimal adjacent spacing of `values`, assumed sorted increasingly.
pub fn min_spacing(values: &[Ball]) -> Result<Spacing> {
    if values.len() < 2 {
        return Err(Error::InsufficientValues(values.len()));
    }
    let diffs = adjacent_differences(values);
    let best = diffs
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.mid().cmp(b.1.mid()))
        .map(|(i, _)| i)
        .expect("at least one difference");
    let close: Vec<usize> = (0..diffs.len())
        .filter(|&j| j == best || diffs[j].certified_cmp(&diffs[best]) != Certified::Greater)
        .collect();
    let witness = close[0];
    let ties: Vec<usize> = close.iter().copied().filter(|&j| j != witness).collect();
    let runner_up = diffs
        .iter()
        .enumerate()
        .filter(|(j, _)| !close.contains(j))
        .map(|(_, d)| d)
        .min_by(|a, b| a.mid().cmp(b.mid()))
        .cloned();
    let ties_exact = ties.iter().all(|&j| diffs[j].certainly_equal(&diffs[witness]));
    Ok(Spacing {
        gap: diffs[witness].clone(),
        witness: (witness, witness + 1),
        ties,
        runner_up,
        ordered: diffs.iter().all(Ball::is_positive),
        ties_exact,
    })
}

/// Minimal spacing of labelled values, with ties resolved where possible.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledSpacing {
    pub spacing: Spacing,
    pub lower: EigenDescriptor,
    pub upper: EigenDescriptor,
    /// Ties that are neither exact nor the mirror image of the witness.
    pub unresolved_ties: Vec<(EigenDescriptor, EigenDescriptor)>,
}

impl LabeledSpacing {
    pub fn is_certified(&self) -> bool {
        self.spacing.ordered && self.unresolved_ties.is_empty()
    }

    pub fn witness_matches(&self, lower: &EigenDescriptor, upper: &EigenDescriptor) -> bool {
        &self.lower == lower && &self.upper == upper
    }
}

/// The pair `(Φ+(y), Φ+(x))` for a pair `(Φ-(x), Φ-(y))` and vice versa.
/// Both differences are equal because the two branches are equidistant.
pub fn mirror_pair(
    lower: &EigenDescriptor,
    upper: &EigenDescriptor,
) -> Option<(EigenDescriptor, EigenDescriptor)> {
    let flip = match (lower.word.last()?, upper.word.last()?) {
        (Branch::Minus, Branch::Minus) => Branch::Plus,
        (Branch::Plus, Branch::Plus) => Branch::Minus,
        _ => return None,
    };
    let swap = |d: &EigenDescriptor| {
        d.word
            .with_last(flip)
            .map(|w| EigenDescriptor::new(d.seed, d.birth, w))
    };
    Some((swap(upper)?, swap(lower)?))
}

pub fn labeled_min_spacing(entries: &[SpectrumEntry]) -> Result<LabeledSpacing> {
    let values: Vec<Ball> = entries.iter().map(|e| e.value.clone()).collect();
    let spacing = min_spacing(&values)?;
    let (i, j) = spacing.witness;
    let lower = entries[i].descriptor.clone();
    let upper = entries[j].descriptor.clone();
    let mirrored = mirror_pair(&lower, &upper);
    let unresolved_ties = spacing
        .ties
        .iter()
        .filter(|&&t| {
            let exact = values[t + 1].sub(&values[t]).certainly_equal(&spacing.gap);
            let pair = (entries[t].descriptor.clone(), entries[t + 1].descriptor.clone());
            !(exact || mirrored.as_ref() == Some(&pair))
        })
        .map(|&t| (entries[t].descriptor.clone(), entries[t + 1].descriptor.clone()))
        .collect();
    Ok(LabeledSpacing {
        spacing,
        lower,
        upper,
        unresolved_ties,
    })
}

/// `Φ-^(k)(x) - Φ-^(k)(y)` for integer seeds.
fn iterate_difference(hi: i64, lo: i64, k: usize, prec: u32) -> Result<Ball> {
    let a = phi_minus_iter(&Ball::from_int(hi, prec), k)?;
    let b = phi_minus_iter(&Ball::from_int(lo, prec), k)?;
    Ok(a.sub(&b))
}

/// `Φ-^(j)(5) - Φ-^(j)(2)`.
pub fn dirichlet_gap_closed_form(j: usize, prec: u32) -> Result<Ball> {
    iterate_difference(5, 2, j, prec)
}

/// Dirichlet spectral gap of level `m`, `Φ-^(m-1)(5) - Φ-^(m-1)(2)`,
/// cross-checked against the two lowest entries of the constructed level.
pub fn finite_gap_dirichlet(m: usize, prec: u32) -> Result<Ball> {
    if m < 1 {
        return Err(Error::InvalidParameter("level must be at least 1".into()));
    }
    let closed = dirichlet_gap_closed_form(m - 1, prec)?;
    let level = spectra::dirichlet_level(m, prec)?;
    let built = level.entries[1].value.sub(&level.entries[0].value);
    if !built.overlaps(&closed) {
        return Err(Error::Mismatch(format!(
            "Dirichlet level {m}: closed form {closed} against constructed {built}"
        )));
    }
    Ok(closed)
}

/// Neumann spectral gap of level `m`, `Φ-^(m-1)(3)`, cross-checked against
/// the smallest nonzero entry of the constructed level.
pub fn finite_gap_neumann(m: usize, prec: u32) -> Result<Ball> {
    if m < 1 {
        return Err(Error::InvalidParameter("level must be at least 1".into()));
    }
    let closed = phi_minus_iter(&Ball::from_int(3, prec), m - 1)?;
    let level = spectra::neumann_level(m, prec)?;
    let built = level
        .entries
        .iter()
        .map(|e| &e.value)
        .find(|v| !(v.is_exact() && v.mid().is_zero()))
        .ok_or_else(|| Error::Mismatch(format!("Neumann level {m} has no nonzero value")))?;
    if !built.overlaps(&closed) {
        return Err(Error::Mismatch(format!(
            "Neumann level {m}: closed form {closed} against constructed {built}"
        )));
    }
    Ok(closed)
}

/// `Φ-^(j)(seed)` for `j = 0..=n`.
fn orbit(seed: i64, n: usize, prec: u32) -> Result<Vec<Ball>> {
    let mut out = Vec::with_capacity(n + 1);
    let mut x = Ball::from_int(seed, prec);
    out.push(x.clone());
    for _ in 0..n {
        x = phi_minus(&x)?;
        out.push(x.clone());
    }
    Ok(out)
}

fn require(m: usize, min: usize, what: &str) -> Result<()> {
    if m < min {
        return Err(Error::InvalidParameter(format!(
            "{what} needs m ≥ {min}, got {m}"
        )));
    }
    Ok(())
}

/// `Φ-^(m-1)(5) / (Φ-^(m)(5) - Φ-^(m)(2)) < Φ-^(m)(5) / (Φ-^(m+1)(5) - Φ-^(m+1)(2))`,
/// together with the equivalent reduction `Φ-^(m)(5) < 6`.
pub fn verify_key2(m: usize, cfg: &Config) -> Result<GapReport> {
    require(m, 1, "key2")?;
    escalate(cfg, |c| {
        let p = c.precision_bits;
        let five = orbit(5, m + 1, p)?;
        let two = orbit(2, m + 1, p)?;
        let lhs = five[m - 1].div(&five[m].sub(&two[m]))?;
        let rhs = five[m].div(&five[m + 1].sub(&two[m + 1]))?;
        let six = Ball::from_int(6, p);
        let reduction = five[m].certified_cmp(&six) == Certified::Less;
        Ok(GapReport::from_checks(
            "key2",
            &[("m", m as i64)],
            rhs.sub(&lhs),
            &[(reduction, "iterate of 5 below 6")],
        ))
    })
}

/// `ρ(m) = Φ-^(m-1)(2) / (Φ-^(m+1)(5) - Φ-^(m+1)(2))`.
pub fn key1_ratio(m: usize, prec: u32) -> Result<Ball> {
    require(m, 1, "key1 ratio")?;
    let two = phi_minus_iter(&Ball::from_int(2, prec), m - 1)?;
    two.div(&dirichlet_gap_closed_form(m + 1, prec)?)
}

/// `ρ(m + 1) > ρ(m)`; the margin is the increment `ρ(m + 1) - ρ(m)`.
pub fn verify_key1(m: usize, cfg: &Config) -> Result<GapReport> {
    require(m, 1, "key1")?;
    escalate(cfg, |c| {
        let p = c.precision_bits;
        let next = key1_ratio(m + 1, p)?;
        let here = key1_ratio(m, p)?;
        Ok(GapReport::from_checks("key1", &[("m", m as i64)], next.sub(&here), &[])
            .with_note(format!("ratio {}", next.mid().to_scientific(12))))
    })
}

/// `Φ-^(k)(A_m \ {6})` for Dirichlet level `m`, in increasing order.
pub fn pulled_back_set(m: usize, k: usize, prec: u32) -> Result<Vec<SpectrumEntry>> {
    let level = spectra::dirichlet_level(m, prec)?;
    level
        .without_six()
        .map(|e| {
            Ok(SpectrumEntry {
                value: phi_minus_iter(&e.value, k)?,
                descriptor: e.descriptor.descend_minus(k),
            })
        })
        .collect()
}

/// The explicit constant of the induction step's last case,
/// `Φ-^(3)(2) / (Φ-^(5)(5) - Φ-^(5)(2))` divided by
/// `√(25 - 4 Φ-Φ+Φ-^(2)(2)) · √(25 - 4 Φ+Φ-^(2)(2))`.
pub fn induction_auxiliary_constant(prec: u32) -> Result<Ball> {
    let two = orbit(2, 3, prec)?;
    let ratio = two[3].div(&dirichlet_gap_closed_form(5, prec)?)?;
    let up = phi_plus(&two[2])?;
    let down_up = phi_minus(&up)?;
    let roots = branch_gap(&down_up)?.mul(&branch_gap(&up)?);
    ratio.div(&roots)
}

fn two_series_minus(power: usize) -> EigenDescriptor {
    EigenDescriptor::seed(Seed::Two, 1).descend_minus(power)
}

fn five_series_minus(power: usize) -> EigenDescriptor {
    EigenDescriptor::seed(Seed::Five, 1).descend_minus(power)
}

fn pulled_back_report(claim: &str, m: usize, k: usize, c: &Config) -> Result<GapReport> {
    let p = c.precision_bits;
    let set = pulled_back_set(m, k, p)?;
    let found = labeled_min_spacing(&set)?;
    let j = m + k - 1;
    let expected = dirichlet_gap_closed_form(j, p)?;
    let (lo, hi) = (two_series_minus(j), five_series_minus(j));
    let margin = found.spacing.margin();
    let report = GapReport::from_checks(
        claim,
        &[("m", m as i64), ("k", k as i64)],
        margin,
        &[
            (found.is_certified(), "minimum separated from other spacings"),
            (found.witness_matches(&lo, &hi), "witness is the lowest 2/5 pair"),
            (found.spacing.gap.overlaps(&expected), "minimum equals the closed form"),
        ],
    );
    Ok(report.with_witness(&found.lower, &found.upper))
}

/// Minimal spacing of `Φ-^(2)(A_m \ {6})` is `Φ-^(m+1)(5) - Φ-^(m+1)(2)`,
/// attained at that pair, plus the auxiliary constant exceeding 1.
pub fn verify_induction_step(m: usize, cfg: &Config) -> Result<GapReport> {
    require(m, 3, "induction step")?;
    escalate(cfg, |c| {
        let aux = induction_auxiliary_constant(c.precision_bits)?;
        let one = Ball::from_int(1, c.precision_bits);
        let report = pulled_back_report("induction", m, 2, c)?;
        let aux_ok = aux.certified_cmp(&one) == Certified::Greater;
        Ok(if aux_ok {
            report
        } else {
            GapReport {
                status: crate::report::Status::Inconclusive,
                ..report
            }
            .with_note("failed: auxiliary constant > 1")
        }
        .with_note(format!("auxiliary constant {}", aux.mid().to_scientific(12))))
    })
}

/// Minimal spacing of `Φ-^(k)(A_m \ {6})` is `Φ-^(m+k-1)(5) - Φ-^(m+k-1)(2)`.
pub fn verify_pre_lowest(m: usize, k: usize, cfg: &Config) -> Result<GapReport> {
    require(m, 3, "pre-lowest")?;
    if k < 2 {
        return Err(Error::InvalidParameter(format!("pre-lowest needs k ≥ 2, got {k}")));
    }
    escalate(cfg, |c| pulled_back_report("prelowest", m, k, c))
}

/// Minimal spacing of `Φ-^(k)(A_m \ {6})` for any `k`, reported without
/// asserting which pair attains it.
pub fn pulled_back_minimum(m: usize, k: usize, prec: u32) -> Result<LabeledSpacing> {
    labeled_min_spacing(&pulled_back_set(m, k, prec)?)
}

/// Minimal spacing over the whole level-`m` spectrum.
///
/// Dirichlet (`m ≥ 2`): `Φ-^(m-1)(2)` at `(Φ+Φ-^(m-2)(2), 5)`, strictly below
/// the spectral gap, with `5 - Φ+Φ-^(m-2)(2) = Φ-^(m-1)(2)`. At `m = 1` the
/// only spacing is the spectral gap `3`, and `2 < 3` is certified instead.
///
/// Neumann: `Φ-^(m-1)(3)` at `(0, Φ-^(m-1)(3))`.
pub fn verify_full_level_minimum(m: usize, bc: BoundaryCondition, cfg: &Config) -> Result<GapReport> {
    require(m, 1, "full-level minimum")?;
    escalate(cfg, |c| match bc {
        BoundaryCondition::Dirichlet => dirichlet_full_minimum(m, c),
        BoundaryCondition::Neumann => neumann_full_minimum(m, c),
    })
}

fn dirichlet_full_minimum(m: usize, c: &Config) -> Result<GapReport> {
    let p = c.precision_bits;
    let level = spectra::dirichlet_level(m, p)?;
    let found = labeled_min_spacing(&level.entries)?;
    let params = [("m", m as i64)];
    let spectral = dirichlet_gap_closed_form(m - 1, p)?;
    if m == 1 {
        let two = Ball::from_int(2, p);
        return Ok(GapReport::from_checks(
            "fullmin",
            &params,
            spectral.sub(&two),
            &[(found.spacing.gap.certainly_equal(&spectral), "only spacing is the spectral gap")],
        )
        .with_witness(&found.lower, &found.upper)
        .with_note("m = 1: minimum is the spectral gap 3, and 2 < 5 - 2"));
    }
    let expected = phi_minus_iter(&Ball::from_int(2, p), m - 1)?;
    let near_five = phi_plus(&phi_minus_iter(&Ball::from_int(2, p), m - 2)?)?;
    let identity = Ball::from_int(5, p).sub(&near_five);
    let lo = two_series_minus(m - 2).child(Branch::Plus);
    let hi = EigenDescriptor::seed(Seed::Five, m);
    let margin = found.spacing.margin();
    let strict = spectral.sub(&expected);
    Ok(GapReport::from_checks(
        "fullmin",
        &params,
        margin,
        &[
            (found.is_certified(), "minimum separated from other spacings"),
            (found.witness_matches(&lo, &hi), "witness is (Φ+Φ-^(m-2)(2), 5)"),
            (found.spacing.gap.overlaps(&expected), "minimum equals Φ-^(m-1)(2)"),
            (identity.overlaps(&expected), "5 - Φ+Φ-^(m-2)(2) = Φ-^(m-1)(2)"),
            (strict.is_positive(), "strictly below the spectral gap"),
        ],
    )
    .with_witness(&found.lower, &found.upper))
}

/// `Φ+(5) - 3`, the spacing to the right of `3` from level 2 on.
pub fn neumann_auxiliary(prec: u32) -> Result<Ball> {
    Ok(phi_plus(&Ball::from_int(5, prec))?.sub(&Ball::from_int(3, prec)))
}

fn neumann_full_minimum(m: usize, c: &Config) -> Result<GapReport> {
    let p = c.precision_bits;
    let level = spectra::neumann_level(m, p)?;
    let found = labeled_min_spacing(&level.entries)?;
    let expected = phi_minus_iter(&Ball::from_int(3, p), m - 1)?;
    let zero = EigenDescriptor::seed(Seed::Zero, 0).descend_minus(m);
    let gap_lineage = EigenDescriptor::new(Seed::Six, 0, "+".parse()?).descend_minus(m - 1);
    let margin = found.spacing.margin();
    let mut checks = vec![
        (found.is_certified(), "minimum separated from other spacings"),
        (found.witness_matches(&zero, &gap_lineage), "witness is (0, Φ-^(m-1)(3))"),
        (found.spacing.gap.overlaps(&expected), "minimum equals Φ-^(m-1)(3)"),
    ];
    if m >= 3 {
        let aux = neumann_auxiliary(p)?;
        checks.push((
            aux.certified_cmp(&expected) == Certified::Greater,
            "Φ+(5) - 3 exceeds the minimum",
        ));
    }
    let mut report = GapReport::from_checks("fullmin", &[("m", m as i64)], margin, &checks)
        .with_witness(&found.lower, &found.upper);
    if !found.spacing.ties.is_empty() {
        report = report.with_note(format!(
            "{} tied spacing(s), equal exactly or by equidistance of the branches",
            found.spacing.ties.len()
        ));
    }
    Ok(report)
}

/// Minimal spacing of the limit eigenvalues with fixation at most `L`.
///
/// Dirichlet (`L ≥ 3`): equals `λ0_5 - λ0_2`, attained at that pair.
/// Neumann (`L ≥ 1`): equals the lowest nonzero eigenvalue `F_1(3)`,
/// attained at `(0, F_1(3))`; `F_1(3) = λ6 / 25`.
pub fn verify_min_gap_theorem(l: usize, bc: BoundaryCondition, cfg: &Config) -> Result<GapReport> {
    match bc {
        BoundaryCondition::Dirichlet => require(l, 3, "Dirichlet minimal gap")?,
        BoundaryCondition::Neumann => require(l, 1, "Neumann minimal gap")?,
    }
    escalate(cfg, |c| {
        let limits = eigenvalues_up_to_fixation(l, bc, c)?;
        let entries: Vec<SpectrumEntry> = limits
            .into_iter()
            .map(|e| SpectrumEntry {
                value: e.value,
                descriptor: e.descriptor,
            })
            .collect();
        let found = labeled_min_spacing(&entries)?;
        let margin = found.spacing.margin();
        let params = [("fixation", l as i64)];
        let report = match bc {
            BoundaryCondition::Dirichlet => {
                let expected = limits::named_constant(NamedConstant::Lambda0Five, c)?
                    .sub(&limits::named_constant(NamedConstant::Lambda0Two, c)?);
                let (lo, hi) = (two_series_minus(l - 1), five_series_minus(l - 1));
                GapReport::from_checks(
                    "theorem",
                    &params,
                    margin,
                    &[
                        (found.is_certified(), "minimum separated from other spacings"),
                        (found.witness_matches(&lo, &hi), "witness is (λ0_2, λ0_5)"),
                        (found.spacing.gap.overlaps(&expected), "minimum equals λ0_5 - λ0_2"),
                    ],
                )
            }
            BoundaryCondition::Neumann => {
                let l6 = limits::named_constant(NamedConstant::Lambda6, c)?;
                let lowest = &entries[1].value;
                let zero = EigenDescriptor::seed(Seed::Zero, 0).descend_minus(l);
                GapReport::from_checks(
                    "theorem",
                    &params,
                    margin,
                    &[
                        (found.is_certified(), "minimum separated from other spacings"),
                        (found.lower == zero, "witness starts at 0"),
                        (found.spacing.gap.overlaps(lowest), "minimum equals lowest nonzero"),
                        (lowest.scale_pow5(2).overlaps(&l6), "lowest nonzero is λ6 / 25"),
                    ],
                )
                .with_note("gap normalized as F_1(3) = lambda6 / 25")
            }
        };
        Ok(report
            .with_witness(&found.lower, &found.upper)
            .with_note(format!("gap {}", found.spacing.gap.mid().to_scientific(25))))
    })
}

/// One row of the base-case comparison: the `index`-th spacing of
/// `Φ-^(2)(A_3 \ {6})` and its excess over the level-5 spectral gap.
#[derive(Clone, Debug, PartialEq)]
pub struct Table1Row {
    pub index: usize,
    pub lower: EigenDescriptor,
    pub upper: EigenDescriptor,
    pub spacing: Ball,
    pub difference: Ball,
}

/// The 11 spacings of `Φ-^(2)(A_3 \ {6})` minus the level-5 spectral gap.
/// The first spacing is the spectral gap itself, so its difference is an
/// exact zero.
pub fn table1(prec: u32) -> Result<Vec<Table1Row>> {
    let set = pulled_back_set(3, 2, prec)?;
    let spectral = dirichlet_gap_closed_form(4, prec)?;
    let first = (two_series_minus(4), five_series_minus(4));
    set.windows(2)
        .enumerate()
        .map(|(i, w)| {
            let spacing = w[1].value.sub(&w[0].value);
            let pair = (w[0].descriptor.clone(), w[1].descriptor.clone());
            let difference = if pair == first {
                if !spacing.overlaps(&spectral) {
                    return Err(Error::Mismatch(format!(
                        "first spacing {spacing} is not the spectral gap {spectral}"
                    )));
                }
                Ball::zero(prec)
            } else {
                spacing.sub(&spectral)
            };
            Ok(Table1Row {
                index: i + 1,
                lower: pair.0,
                upper: pair.1,
                spacing,
                difference,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 128;

    fn ints(v: &[i64]) -> Vec<Ball> {
        v.iter().map(|&x| Ball::from_int(x, P)).collect()
    }

    #[test]
    fn spacing_of_small_sets() {
        let s = min_spacing(&ints(&[0, 3, 6])).unwrap();
        assert!(s.gap.certainly_equal(&Ball::from_int(3, P)));
        assert_eq!(s.witness, (0, 1));
        assert_eq!(s.ties, vec![1]);
        assert!(s.certified());
        let s = min_spacing(&ints(&[0, 4, 5, 9])).unwrap();
        assert_eq!(s.witness, (1, 2));
        assert!(s.ties.is_empty());
        assert!(s.margin().certainly_equal(&Ball::from_int(3, P)));
        assert!(matches!(min_spacing(&ints(&[1])), Err(Error::InsufficientValues(1))));
    }

    #[test]
    fn closed_form_gaps() {
        assert!(finite_gap_dirichlet(1, P).unwrap().certainly_equal(&Ball::from_int(3, P)));
        assert!(finite_gap_neumann(1, P).unwrap().certainly_equal(&Ball::from_int(3, P)));
        let g = finite_gap_dirichlet(5, P).unwrap();
        assert!((g.to_f64() - 0.008328434537124503).abs() < 1e-17);
        assert!(finite_gap_dirichlet(0, P).is_err());
    }

    #[test]
    fn mirror_of_pairs() {
        let a: EigenDescriptor = EigenDescriptor::new(Seed::Zero, 0, "-".parse().unwrap());
        let b = EigenDescriptor::new(Seed::Six, 0, "+-".parse().unwrap());
        let (c, d) = mirror_pair(&a, &b).unwrap();
        assert_eq!(c.to_string(), "6@0:++");
        assert_eq!(d.to_string(), "0@0:+");
        assert_eq!(mirror_pair(&c, &d).unwrap(), (a.clone(), b.clone()));
        let e = EigenDescriptor::seed(Seed::Five, 2);
        assert!(mirror_pair(&a, &e).is_none());
    }

    #[test]
    fn neumann_level_two_spacing() {
        let level = spectra::neumann_level(2, P).unwrap();
        let s = labeled_min_spacing(&level.entries).unwrap();
        assert!(s.is_certified());
        assert_eq!(s.spacing.ties.len(), 1);
        assert!((s.spacing.gap.to_f64() - 0.6972243622680054).abs() < 1e-15);
        assert_eq!(s.lower.to_string(), "0@0:--");
    }

    #[test]
    fn dirichlet_level_six_minimum() {
        let level = spectra::dirichlet_level(6, P).unwrap();
        let s = labeled_min_spacing(&level.entries).unwrap();
        assert_eq!(s.lower.to_string(), "2@1:----+");
        assert_eq!(s.upper.to_string(), "5@6");
        assert!((s.spacing.gap.to_f64() - 0.000717456880521204).abs() < 1e-17);
    }

    #[test]
    fn auxiliary_constants() {
        let aux = induction_auxiliary_constant(P).unwrap();
        assert!((aux.to_f64() - 1.0810857744629).abs() < 1e-12);
        let n = neumann_auxiliary(P).unwrap();
        assert!((n.to_f64() - 0.6180339887498949).abs() < 1e-15);
    }

    #[test]
    fn table1_first_difference_is_zero() {
        let rows = table1(P).unwrap();
        assert_eq!(rows.len(), 11);
        assert!(rows[0].difference.is_exact() && rows[0].difference.mid().is_zero());
        assert!(rows[1..].iter().all(|r| r.difference.is_positive()));
    }

    #[test]
    fn preconditions() {
        let c = Config::default();
        assert!(verify_key1(0, &c).is_err());
        assert!(verify_induction_step(2, &c).is_err());
        assert!(verify_pre_lowest(3, 1, &c).is_err());
        assert!(verify_min_gap_theorem(2, BoundaryCondition::Dirichlet, &c).is_err());
    }
}
