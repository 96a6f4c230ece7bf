//! Eigenvalues of the limit Laplacian as renormalized limits
//!
//! `F_ℓ(a) = lim_k 5^{ℓ+k} Φ-^(k)(a)`,
//!
//! together with the named constants built from them, the ratios of the
//! recurrent large gaps and the dyadic-interval decomposition.
//!
//! The partial values `5^{ℓ+k} x_k` (with `x_k = Φ-^(k)(a)`) increase, and
//! their increments are `5^{ℓ+k} x_{k+1}^2` because `5Φ-(z) - z = Φ-(z)^2`.
//! Once `x_k < 1` consecutive increments shrink by at least `1/4`, so the tail
//! is bounded by `4/3 · 5^{ℓ+k} x_{k+1}^2`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::Config;
use crate::dynamics::{phi_minus, Branch, BranchWord};
use crate::error::{Error, Result};
use crate::report::GapReport;
use crate::scalar::{Ball, Certified, Dyadic};
use crate::spectra::{self, BoundaryCondition, EigenDescriptor, Seed};

/// Iteration cap for a single limit evaluation.
const MAX_LIMIT_STEPS: usize = 20_000;

/// A limit eigenvalue with the lineage it was computed from.
#[derive(Clone, Debug, PartialEq)]
pub struct LimitEigenvalue {
    pub value: Ball,
    pub descriptor: EigenDescriptor,
    /// Level whose value was pushed to the limit.
    pub fixation_level: usize,
}

/// `F_ℓ(a)` at the precision of `a`, with radius at most `tol`.
///
/// Fails with [`Error::ToleranceNotReached`] when the working precision of
/// `a` is not enough; see [`renormalized_limit_with`] for automatic
/// escalation.
pub fn renormalized_limit(a: &Ball, level: u32, tol: f64) -> Result<Ball> {
    let prec = a.precision();
    if a.lower().is_negative() || a.upper() >= Dyadic::from_int(6) {
        return Err(Error::Domain(format!(
            "renormalized limit needs a point of [0, 6), got {a}"
        )));
    }
    let tol_d = Dyadic::from_f64(tol)
        .filter(|t| t.is_positive())
        .ok_or_else(|| Error::InvalidParameter(format!("tolerance {tol} is not positive")))?;
    if a.is_exact() && a.mid().is_zero() {
        return Ok(Ball::zero(prec));
    }
    let not_reached = || Error::ToleranceNotReached {
        tolerance: tol,
        cap_bits: prec,
    };
    let one = Dyadic::from_int(1);
    let five = BigInt::from(5);
    let mut scale = BigInt::from(5).pow(level);
    let mut x = a.clone();
    for _ in 0..MAX_LIMIT_STEPS {
        let partial = x.mul_int(&scale);
        if partial.rad() > &tol_d {
            return Err(not_reached());
        }
        let next = phi_minus(&x)?;
        if x.upper() < one {
            let y_up = next.upper();
            let increment = Ball::from_dyadic(y_up.mul(&y_up), prec).mul_int(&scale);
            let tail = increment
                .mul_int(&BigInt::from(4))
                .div(&Ball::from_int(3, prec))?
                .upper();
            let lo = partial.lower();
            let hi = partial.upper().add(&tail);
            if hi.sub(&lo).shift(-1) <= tol_d {
                let out = Ball::from_bounds(&lo, &hi, prec)?;
                if out.rad() <= &tol_d {
                    return Ok(out);
                }
            }
        }
        x = next;
        scale *= &five;
    }
    Err(not_reached())
}

/// `F_ℓ(a)` where `point(p)` produces `a` at precision `p`; precision is
/// doubled until the tolerance is met or the cap is hit.
pub fn renormalized_limit_with<F>(point: F, level: u32, cfg: &Config) -> Result<Ball>
where
    F: Fn(u32) -> Result<Ball>,
{
    for p in cfg.precision_ladder() {
        match renormalized_limit(&point(p)?, level, cfg.limit_tolerance) {
            Err(Error::ToleranceNotReached { .. }) => continue,
            other => return other,
        }
    }
    Err(Error::ToleranceNotReached {
        tolerance: cfg.limit_tolerance,
        cap_bits: cfg.precision_cap,
    })
}

/// Limit eigenvalue of the lineage `d`, pushed to the limit from its level.
pub fn limit_of(d: &EigenDescriptor, cfg: &Config) -> Result<LimitEigenvalue> {
    if d.is_terminal_six() {
        return Err(Error::Domain(format!(
            "{d} is the value 6, which has no renormalized limit"
        )));
    }
    let level = d.level();
    let value = renormalized_limit_with(|p| d.evaluate(p), level as u32, cfg)?;
    Ok(LimitEigenvalue {
        value,
        descriptor: d.clone(),
        fixation_level: level,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum NamedConstant {
    /// Lowest 2-series Dirichlet eigenvalue, `F_1(2)`.
    #[serde(rename = "lambda0_2")]
    Lambda0Two,
    /// Lowest 5-series Dirichlet eigenvalue, `F_1(5)`.
    #[serde(rename = "lambda0_5")]
    Lambda0Five,
    /// Second-lowest 5-series eigenvalue of birth 1, `F_2(Φ+(5))`.
    #[serde(rename = "lambda1_5")]
    Lambda1Five,
    /// Lowest 6-series Dirichlet eigenvalue, `F_3(3)`.
    #[serde(rename = "lambda6")]
    Lambda6,
}

impl NamedConstant {
    pub const ALL: [NamedConstant; 4] = [
        NamedConstant::Lambda0Two,
        NamedConstant::Lambda0Five,
        NamedConstant::Lambda1Five,
        NamedConstant::Lambda6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Lambda0Two => "lambda0_2",
            Self::Lambda0Five => "lambda0_5",
            Self::Lambda1Five => "lambda1_5",
            Self::Lambda6 => "lambda6",
        }
    }

    pub fn descriptor(self) -> EigenDescriptor {
        let plus = || BranchWord::from(vec![Branch::Plus]);
        match self {
            Self::Lambda0Two => EigenDescriptor::seed(Seed::Two, 1),
            Self::Lambda0Five => EigenDescriptor::seed(Seed::Five, 1),
            Self::Lambda1Five => EigenDescriptor::new(Seed::Five, 1, plus()),
            Self::Lambda6 => EigenDescriptor::new(Seed::Six, 2, plus()),
        }
    }
}

impl fmt::Display for NamedConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NamedConstant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown constant {s:?}")))
    }
}

type ConstantKey = (NamedConstant, u32, u32, u64);

fn constant_cache() -> &'static Mutex<HashMap<ConstantKey, Ball>> {
    static CACHE: OnceLock<Mutex<HashMap<ConstantKey, Ball>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The named constant at the given settings. Results are cached; concurrent
/// writers compute identical enclosures, so the last insert wins.
pub fn named_constant(c: NamedConstant, cfg: &Config) -> Result<Ball> {
    let key = (
        c,
        cfg.precision_bits,
        cfg.precision_cap,
        cfg.limit_tolerance.to_bits(),
    );
    if let Some(v) = constant_cache().lock().unwrap().get(&key) {
        return Ok(v.clone());
    }
    let v = limit_of(&c.descriptor(), cfg)?.value;
    constant_cache().lock().unwrap().insert(key, v.clone());
    Ok(v)
}

/// `(λ6 / (5 λ0_5), 5 λ1_5 / λ6)`: the ratios across the two recurrent
/// largest gaps.
pub fn gap_ratios(cfg: &Config) -> Result<(Ball, Ball)> {
    let l05 = named_constant(NamedConstant::Lambda0Five, cfg)?;
    let l15 = named_constant(NamedConstant::Lambda1Five, cfg)?;
    let l6 = named_constant(NamedConstant::Lambda6, cfg)?;
    let r1 = l6.div(&l05.scale_pow5(1))?;
    let r2 = l15.scale_pow5(1).div(&l6)?;
    Ok((r1, r2))
}

/// Ordered eigenvalue `λ_(N_m) = 5^{m-2} λ6`, the lowest 6-series eigenvalue
/// of birth `m`.
pub fn lambda_n(m: u32, cfg: &Config) -> Result<Ball> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!("λ_(N_m) needs m ≥ 2, got {m}")));
    }
    Ok(named_constant(NamedConstant::Lambda6, cfg)?.scale_pow5(m - 2))
}

/// `λ_(N_m - N_{m-1}) = 5^{m-1} λ0_5`, the lowest 5-series eigenvalue of
/// birth `m` and the largest eigenvalue of `B_m`.
pub fn lowest_five_series(m: u32, cfg: &Config) -> Result<Ball> {
    if m < 1 {
        return Err(Error::InvalidParameter("birth must be at least 1".into()));
    }
    Ok(named_constant(NamedConstant::Lambda0Five, cfg)?.scale_pow5(m - 1))
}

#[derive(Clone, Debug, PartialEq)]
pub struct DyadicInterval {
    pub index: u32,
    pub lower: Ball,
    pub upper: Ball,
}

/// `B_2 = [0, λ_(N_2))`, `B_m = [λ_(N_{m-1}), λ_(N_m))` for `m ≥ 3`.
pub fn dyadic_interval(m: u32, cfg: &Config) -> Result<DyadicInterval> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!(
            "dyadic intervals start at index 2, got {m}"
        )));
    }
    let upper = lambda_n(m, cfg)?;
    let lower = if m == 2 {
        Ball::zero(upper.precision())
    } else {
        lambda_n(m - 1, cfg)?
    };
    Ok(DyadicInterval {
        index: m,
        lower,
        upper,
    })
}

/// `g_0 = λ6 / (5 λ0_5)`; both dyadic propositions need `g_0 > 2`.
pub fn g0(cfg: &Config) -> Result<Ball> {
    Ok(gap_ratios(cfg)?.0)
}

/// Distance between `B_m` and `B_{m'}` exceeds `λ_(N_{m'-1}) / 2`, checked in
/// the binding case `λ_(N_{m'-1}) - λ_(N_m - N_{m-1}) > λ_(N_{m'-1}) / 2`.
pub fn check_interval_separation(m: u32, m2: u32, cfg: &Config) -> Result<GapReport> {
    if !(2 <= m && m < m2) {
        return Err(Error::InvalidParameter(format!(
            "interval separation needs 2 ≤ m < m', got ({m}, {m2})"
        )));
    }
    let start = lambda_n(m2 - 1, cfg)?;
    let top = lowest_five_series(m, cfg)?;
    let margin = start.sub(&top).sub(&start.shift(-1));
    let g = g0(cfg)?;
    let two = Ball::from_int(2, g.precision());
    let g0_ok = g.certified_cmp(&two) == Certified::Greater;
    Ok(GapReport::from_checks(
        "dyadic-separation",
        &[("m", m as i64), ("m_prime", m2 as i64)],
        margin,
        &[(g0_ok, "g0 > 2")],
    ))
}

/// `λ + λ' ∈ B_{m'}` for eigenvalues `λ ∈ B_m`, `λ' ∈ B_{m'}`.
///
/// The largest eigenvalue of `B_j` is `5^{j-1} λ0_5`, so the upper end is
/// checked at `λ = 5^{m-1} λ0_5`, `λ' = 5^{m'-1} λ0_5`; the lower end holds
/// because every eigenvalue is at least `λ0_2 > 0`. The chain bound
/// `2 / g_0 < 1` is checked alongside.
pub fn check_sum_closure(m: u32, m2: u32, cfg: &Config) -> Result<GapReport> {
    if !(2 <= m && m <= m2) {
        return Err(Error::InvalidParameter(format!(
            "sum closure needs 2 ≤ m ≤ m', got ({m}, {m2})"
        )));
    }
    let interval = dyadic_interval(m2, cfg)?;
    let sum = lowest_five_series(m, cfg)?.add(&lowest_five_series(m2, cfg)?);
    let margin = interval.upper.sub(&sum);
    let smallest = named_constant(NamedConstant::Lambda0Two, cfg)?;
    let g = g0(cfg)?;
    let one = Ball::from_int(1, g.precision());
    let chain = Ball::from_int(2, g.precision()).div(&g)?;
    Ok(GapReport::from_checks(
        "dyadic-sum",
        &[("m", m as i64), ("m_prime", m2 as i64)],
        margin,
        &[
            (smallest.is_positive(), "eigenvalues are positive"),
            (chain.certified_cmp(&one) == Certified::Less, "2 / g0 < 1"),
        ],
    ))
}

/// `{F_L(a) : a ∈ A_L \ {6}}`, the limit eigenvalues whose generation of
/// fixation is at most `L`, in increasing order.
pub fn eigenvalues_up_to_fixation(
    l: usize,
    bc: BoundaryCondition,
    cfg: &Config,
) -> Result<Vec<LimitEigenvalue>> {
    if bc == BoundaryCondition::Dirichlet && l == 0 {
        return Err(Error::InvalidParameter(
            "Dirichlet fixation level must be at least 1".into(),
        ));
    }
    let spectrum = spectra::level(bc, l, cfg.precision_bits)?;
    let descriptors: Vec<&EigenDescriptor> =
        spectrum.without_six().map(|e| &e.descriptor).collect();
    let mut out = descriptors
        .par_iter()
        .map(|d| limit_of(d, cfg))
        .collect::<Result<Vec<_>>>()?;
    out.sort_by(|a, b| a.value.mid().cmp(b.value.mid()));
    if let Some(w) = out
        .windows(2)
        .find(|w| w[0].value.certified_cmp(&w[1].value) != Certified::Less)
    {
        return Err(Error::PrecisionExhausted {
            what: format!(
                "limits of {} and {} are not separated",
                w[0].descriptor, w[1].descriptor
            ),
            cap_bits: cfg.precision_cap,
        });
    }
    Ok(out)
}

/// Ratios `δ_{k+1} / δ_k` of consecutive increments
/// `δ_k = 5^{ℓ+k+1} Φ-^(k+1)(a) - 5^{ℓ+k} Φ-^(k)(a)` for `k < count`,
/// evaluated by direct subtraction.
pub fn increment_ratios(a: &Ball, level: u32, count: usize) -> Result<Vec<Ball>> {
    let mut partials = Vec::with_capacity(count + 2);
    let mut x = a.clone();
    let mut scale = BigInt::from(5).pow(level);
    for _ in 0..count + 2 {
        partials.push(x.mul_int(&scale));
        x = phi_minus(&x)?;
        scale *= 5;
    }
    let inc: Vec<Ball> = partials.windows(2).map(|w| w[1].sub(&w[0])).collect();
    inc.windows(2).map(|w| w[1].div(&w[0])).collect()
}
