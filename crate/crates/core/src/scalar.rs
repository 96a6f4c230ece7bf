//! Midpoint-radius ball arithmetic over binary floating point numbers of
//! arbitrary precision.
//!
//! A [`Ball`] represents the closed interval `[mid - rad, mid + rad]`. Every
//! operation returns a ball that contains the exact image of every point of
//! the input balls: midpoints are rounded to the working precision and the
//! rounding error is folded into the radius, and radii are always rounded
//! upwards.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default mantissa precision in bits.
pub const DEFAULT_PRECISION: u32 = 128;

/// Mantissa bits kept for radii (rounded up).
const RADIUS_BITS: u64 = 64;

/// An exact binary rational `mantissa * 2^exponent`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn zero() -> Self {
        Self {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn new(mant: BigInt, exp: i64) -> Self {
        Self { mant, exp }.normalized()
    }

    pub fn from_int(v: i64) -> Self {
        Self::new(BigInt::from(v), 0)
    }

    /// Exact conversion; every finite `f64` is a dyadic rational.
    pub fn from_f64(x: f64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        if x == 0.0 {
            return Some(Self::zero());
        }
        let bits = x.to_bits();
        let negative = bits >> 63 == 1;
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        let mant = if negative {
            -BigInt::from(m)
        } else {
            BigInt::from(m)
        };
        Some(Self::new(mant, e))
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    /// Number of significant bits of the mantissa.
    pub fn bits(&self) -> u64 {
        self.mant.bits()
    }

    fn normalized(mut self) -> Self {
        if self.mant.is_zero() {
            self.exp = 0;
            return self;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
        self
    }

    pub fn neg(&self) -> Self {
        Self {
            mant: -&self.mant,
            exp: self.exp,
        }
    }

    pub fn abs(&self) -> Self {
        Self {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    /// Multiplies by `2^k` exactly.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self {
            mant: self.mant.clone(),
            exp: self.exp + k,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        Self::new(a + b, e)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        Self::new(&self.mant * k, self.exp)
    }

    /// Rounds to at most `prec` mantissa bits (toward negative infinity) and
    /// returns the rounded value together with an upper bound on the absolute
    /// rounding error.
    fn round_to(&self, prec: u32) -> (Self, Self) {
        let bits = self.bits();
        if bits <= prec as u64 {
            return (self.clone(), Self::zero());
        }
        let shift = bits - prec as u64;
        let rounded = Self::new(&self.mant >> shift, self.exp + shift as i64);
        let err = self.sub(&rounded).abs();
        (rounded, err)
    }

    /// Rounds a non-negative value upwards to `bits` mantissa bits.
    fn round_up(&self, bits: u64) -> Self {
        debug_assert!(!self.is_negative());
        let have = self.bits();
        if have <= bits {
            return self.clone();
        }
        let shift = have - bits;
        let (q, r) = self.mant.div_rem(&(BigInt::one() << shift));
        let q = if r.is_zero() { q } else { q + 1 };
        Self::new(q, self.exp + shift as i64)
    }

    /// Upper bound of `self / other` for non-negative `self` and positive
    /// `other`, with about [`RADIUS_BITS`] bits.
    fn div_up(&self, other: &Self) -> Self {
        debug_assert!(!self.is_negative() && other.is_positive());
        if self.is_zero() {
            return Self::zero();
        }
        let s = (RADIUS_BITS + 2 + other.bits()).saturating_sub(self.bits());
        let num = &self.mant << s;
        let (q, r) = num.div_rem(&other.mant);
        let q = if r.is_zero() { q } else { q + 1 };
        Self::new(q, self.exp - other.exp - s as i64)
    }

    /// Upper bound of the square root of a non-negative value.
    fn sqrt_up(&self) -> Self {
        debug_assert!(!self.is_negative());
        if self.is_zero() {
            return Self::zero();
        }
        let (mut m, mut e) = (self.mant.clone(), self.exp);
        if e.is_odd() {
            m <<= 1u32;
            e -= 1;
        }
        let want = 2 * RADIUS_BITS + 2;
        let mut s = want.saturating_sub(m.bits());
        if s % 2 == 1 {
            s += 1;
        }
        let n = m << s;
        let r = n.sqrt();
        let r = if &r * &r == n { r } else { r + 1 };
        Self::new(r, (e - s as i64) / 2)
    }

    /// Approximate conversion (nearest-ish; not used for certification).
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.bits();
        let (m, e) = if bits > 60 {
            let shift = bits - 60;
            (&self.mant >> shift, self.exp + shift as i64)
        } else {
            (self.mant.clone(), self.exp)
        };
        let m = m.to_f64().unwrap_or(0.0);
        let e = e.clamp(-4000, 4000) as i32;
        // Two steps so that neither factor over- or underflows prematurely.
        let half = e / 2;
        m * 2f64.powi(half) * 2f64.powi(e - half)
    }

    /// Upward-rounded conversion for a non-negative value.
    pub fn to_f64_up(&self) -> f64 {
        let x = self.round_up(50).to_f64();
        if x == 0.0 && !self.is_zero() {
            f64::MIN_POSITIVE
        } else {
            x
        }
    }

    /// Decimal string with `digits` digits after the point, rounded half to
    /// even.
    pub fn to_decimal(&self, digits: u32) -> String {
        let scaled = self.mant.clone() * BigInt::from(10u32).pow(digits);
        let q = if self.exp >= 0 {
            scaled << self.exp as u64
        } else {
            round_half_even(&scaled, &(BigInt::one() << (-self.exp) as u64))
        };
        format_fixed(&q, digits)
    }

    /// Scientific notation with `sig` significant digits, rounded half to
    /// even, e.g. `7.9131e-7`.
    pub fn to_scientific(&self, sig: u32) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let sig = sig.max(1);
        let mut e10 = self.to_f64().abs().log10().floor() as i64;
        loop {
            let shift = sig as i64 - 1 - e10;
            let (num, den) = if shift >= 0 {
                (self.mant.abs() * BigInt::from(10u32).pow(shift as u32), BigInt::one())
            } else {
                (self.mant.abs(), BigInt::from(10u32).pow((-shift) as u32))
            };
            let (num, den) = if self.exp >= 0 {
                (num << self.exp as u64, den)
            } else {
                (num, den << (-self.exp) as u64)
            };
            let q = round_half_even(&num, &den);
            let digits = q.to_string();
            if digits.len() as u32 > sig {
                e10 += 1;
                continue;
            }
            if (digits.len() as u32) < sig {
                e10 -= 1;
                continue;
            }
            let sign = if self.is_negative() { "-" } else { "" };
            let (lead, rest) = digits.split_at(1);
            return if rest.is_empty() {
                format!("{sign}{lead}e{e10}")
            } else {
                format!("{sign}{lead}.{rest}e{e10}")
            };
        }
    }

    /// Decimal string truncated toward zero at `digits` digits.
    pub fn to_decimal_truncated(&self, digits: u32) -> String {
        let scaled = self.mant.clone() * BigInt::from(10u32).pow(digits);
        let q = if self.exp >= 0 {
            scaled << self.exp as u64
        } else {
            // BigInt division truncates toward zero.
            scaled / (BigInt::one() << (-self.exp) as u64)
        };
        format_fixed(&q, digits)
    }
}

fn round_half_even(num: &BigInt, den: &BigInt) -> BigInt {
    let (q, r) = num.div_mod_floor(den);
    let twice: BigInt = &r * 2;
    match twice.cmp(den) {
        Ordering::Less => q,
        Ordering::Greater => q + 1,
        Ordering::Equal => {
            if q.is_even() {
                q
            } else {
                q + 1
            }
        }
    }
}

fn format_fixed(q: &BigInt, digits: u32) -> String {
    let negative = q.is_negative();
    let s = q.abs().to_string();
    let d = digits as usize;
    let body = if d == 0 {
        s
    } else if s.len() <= d {
        format!("0.{}{}", "0".repeat(d - s.len()), s)
    } else {
        let (int, frac) = s.split_at(s.len() - d);
        format!("{int}.{frac}")
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.sub(other).mant.sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Outcome of a certified comparison of two balls.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Certified {
    /// Every point of the left ball is below every point of the right one.
    Less,
    /// Every point of the left ball is above every point of the right one.
    Greater,
    /// The balls intersect; nothing strict can be concluded.
    Overlap,
}

/// A real number enclosed by a midpoint and an error radius.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    mid: Dyadic,
    rad: Dyadic,
    prec: u32,
}

impl Ball {
    /// Ball around `d`; exact when `d` fits in `prec` bits.
    pub fn from_dyadic(d: Dyadic, prec: u32) -> Self {
        let (mid, err) = d.round_to(prec);
        Self {
            mid,
            rad: err.round_up(RADIUS_BITS),
            prec,
        }
    }

    pub fn from_int(v: i64, prec: u32) -> Self {
        Self::from_dyadic(Dyadic::from_int(v), prec)
    }

    pub fn from_bigint(v: BigInt, prec: u32) -> Self {
        Self::from_dyadic(Dyadic::new(v, 0), prec)
    }

    pub fn zero(prec: u32) -> Self {
        Self::from_int(0, prec)
    }

    /// The ball `mid ± rad`. The midpoint is rounded to `prec` bits and the
    /// rounding error is added to the radius.
    pub fn with_radius(mid: Dyadic, rad: Dyadic, prec: u32) -> Result<Self> {
        if rad.is_negative() {
            return Err(Error::Domain("negative radius".into()));
        }
        let (m, err) = mid.round_to(prec);
        Ok(Self {
            mid: m,
            rad: rad.add(&err).round_up(RADIUS_BITS),
            prec,
        })
    }

    /// Smallest representable ball containing `[lo, hi]`.
    pub fn from_bounds(lo: &Dyadic, hi: &Dyadic, prec: u32) -> Result<Self> {
        if lo > hi {
            return Err(Error::Domain("empty interval".into()));
        }
        let mid = lo.add(hi).shift(-1);
        let rad = hi.sub(lo).shift(-1);
        Self::with_radius(mid, rad, prec)
    }

    /// Ball enclosing the rational `num / den`.
    pub fn from_ratio(num: i64, den: i64, prec: u32) -> Result<Self> {
        Self::from_int(num, prec).div(&Self::from_int(den, prec))
    }

    pub fn from_f64(x: f64, prec: u32) -> Result<Self> {
        let d = Dyadic::from_f64(x).ok_or_else(|| Error::Domain(format!("non-finite {x}")))?;
        Ok(Self::from_dyadic(d, prec))
    }

    pub fn mid(&self) -> &Dyadic {
        &self.mid
    }

    pub fn rad(&self) -> &Dyadic {
        &self.rad
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn lower(&self) -> Dyadic {
        self.mid.sub(&self.rad)
    }

    pub fn upper(&self) -> Dyadic {
        self.mid.add(&self.rad)
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    /// Re-rounds to another precision.
    pub fn with_precision(&self, prec: u32) -> Self {
        let (mid, err) = self.mid.round_to(prec);
        Self {
            mid,
            rad: self.rad.add(&err).round_up(RADIUS_BITS),
            prec,
        }
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        self.lower() <= *x && *x <= self.upper()
    }

    /// True when `other` lies entirely inside `self`.
    pub fn encloses(&self, other: &Ball) -> bool {
        self.lower() <= other.lower() && other.upper() <= self.upper()
    }

    pub fn overlaps(&self, other: &Ball) -> bool {
        self.certified_cmp(other) == Certified::Overlap
    }

    pub fn certified_cmp(&self, other: &Ball) -> Certified {
        if self.upper() < other.lower() {
            Certified::Less
        } else if self.lower() > other.upper() {
            Certified::Greater
        } else {
            Certified::Overlap
        }
    }

    /// Both balls are exact and equal, so equality is certain.
    pub fn certainly_equal(&self, other: &Ball) -> bool {
        self.is_exact() && other.is_exact() && self.mid == other.mid
    }

    pub fn is_positive(&self) -> bool {
        self.lower().is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.upper().is_negative()
    }

    fn finish(mid: Dyadic, rad: Dyadic, prec: u32) -> Self {
        let (m, err) = mid.round_to(prec);
        Self {
            mid: m,
            rad: rad.add(&err).round_up(RADIUS_BITS),
            prec,
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            mid: self.mid.neg(),
            rad: self.rad.clone(),
            prec: self.prec,
        }
    }

    pub fn abs_upper(&self) -> Dyadic {
        self.mid.abs().add(&self.rad)
    }

    pub fn add(&self, other: &Ball) -> Ball {
        let prec = self.prec.max(other.prec);
        Self::finish(self.mid.add(&other.mid), self.rad.add(&other.rad), prec)
    }

    pub fn sub(&self, other: &Ball) -> Ball {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Ball) -> Ball {
        let prec = self.prec.max(other.prec);
        let rad = self
            .mid
            .abs()
            .mul(&other.rad)
            .add(&other.mid.abs().mul(&self.rad))
            .add(&self.rad.mul(&other.rad));
        Self::finish(self.mid.mul(&other.mid), rad, prec)
    }

    /// Multiplication by an exact integer.
    pub fn mul_int(&self, k: &BigInt) -> Ball {
        let rad = self.rad.mul_int(&k.abs());
        Self::finish(self.mid.mul_int(k), rad, self.prec)
    }

    /// Multiplication by `5^n`.
    pub fn scale_pow5(&self, n: u32) -> Ball {
        self.mul_int(&BigInt::from(5u32).pow(n))
    }

    /// Multiplication by `2^k` (exact).
    pub fn shift(&self, k: i64) -> Ball {
        Self {
            mid: self.mid.shift(k),
            rad: self.rad.shift(k),
            prec: self.prec,
        }
    }

    pub fn div(&self, other: &Ball) -> Result<Ball> {
        let prec = self.prec.max(other.prec);
        let denom_low = other.mid.abs().sub(&other.rad);
        if !denom_low.is_positive() {
            return Err(Error::Domain("division by a ball containing zero".into()));
        }
        // Quotient of the midpoints, truncated to prec + 2 bits.
        let (q, q_err) = if self.mid.is_zero() {
            (Dyadic::zero(), Dyadic::zero())
        } else {
            let s = (prec as u64 + 2 + other.mid.bits()).saturating_sub(self.mid.bits());
            let num = self.mid.mant.clone() << s;
            let (qm, r) = num.div_rem(&other.mid.mant);
            let qe = self.mid.exp - other.mid.exp - s as i64;
            let err = if r.is_zero() {
                Dyadic::zero()
            } else {
                Dyadic::new(BigInt::one(), qe)
            };
            (Dyadic::new(qm, qe), err)
        };
        // |a/b - am/bm| <= (ra + |am/bm| rb) / (|bm| - rb)
        let q_abs = q.abs().add(&q_err);
        let prop = self.rad.add(&q_abs.mul(&other.rad)).div_up(&denom_low);
        Ok(Self::finish(q, prop.add(&q_err), prec))
    }

    pub fn sqrt(&self) -> Result<Ball> {
        let prec = self.prec;
        if self.lower().is_negative() {
            return Err(Error::Domain("square root of a ball meeting negatives".into()));
        }
        if self.mid.is_zero() {
            // The lower bound check forces rad == 0 here.
            return Ok(Self::zero(prec));
        }
        let (mut m, mut e) = (self.mid.mant.clone(), self.mid.exp);
        if e.is_odd() {
            m <<= 1u32;
            e -= 1;
        }
        let want = 2 * prec as u64 + 4;
        let mut s = want.saturating_sub(m.bits());
        if s % 2 == 1 {
            s += 1;
        }
        let n = m << s;
        let r = n.sqrt();
        let re = (e - s as i64) / 2;
        let exact = &r * &r == n;
        let root_lo = Dyadic::new(r, re);
        let mut rad = if exact {
            Dyadic::zero()
        } else {
            Dyadic::new(BigInt::one(), re)
        };
        if !self.rad.is_zero() {
            // |sqrt(x) - sqrt(m)| <= min(r / sqrt(m), sqrt(r))
            let by_root = self.rad.sqrt_up();
            let prop = if root_lo.is_positive() {
                std::cmp::min(self.rad.div_up(&root_lo), by_root)
            } else {
                by_root
            };
            rad = rad.add(&prop);
        }
        Ok(Self::finish(root_lo, rad, prec))
    }

    /// Smallest ball containing both inputs.
    pub fn hull(&self, other: &Ball) -> Ball {
        let lo = std::cmp::min(self.lower(), other.lower());
        let hi = std::cmp::max(self.upper(), other.upper());
        Self::from_bounds(&lo, &hi, self.prec.max(other.prec)).expect("ordered bounds")
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    /// Upward-rounded radius as `f64`.
    pub fn radius_f64(&self) -> f64 {
        self.rad.to_f64_up()
    }

    /// Midpoint as a decimal string with `digits` fractional digits.
    pub fn mid_decimal(&self, digits: u32) -> String {
        self.mid.to_decimal(digits)
    }

    /// Radius in scientific notation, rounded upwards.
    pub fn rad_decimal(&self) -> String {
        format!("{:.3e}", self.radius_f64() * (1.0 + 4.0 * f64::EPSILON))
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ± {}", self.mid.to_decimal(20), self.rad_decimal())
    }
}

impl std::ops::Add for &Ball {
    type Output = Ball;
    fn add(self, rhs: &Ball) -> Ball {
        Ball::add(self, rhs)
    }
}

impl std::ops::Sub for &Ball {
    type Output = Ball;
    fn sub(self, rhs: &Ball) -> Ball {
        Ball::sub(self, rhs)
    }
}

impl std::ops::Mul for &Ball {
    type Output = Ball;
    fn mul(self, rhs: &Ball) -> Ball {
        Ball::mul(self, rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = DEFAULT_PRECISION;

    #[test]
    fn exact_integer_arithmetic() {
        let s = Ball::from_int(2, P).add(&Ball::from_int(3, P));
        assert_eq!(s.mid(), &Dyadic::from_int(5));
        assert!(s.is_exact());
        let p = Ball::from_int(5, P).mul(&Ball::from_int(5, P));
        assert!(p.certainly_equal(&Ball::from_int(25, P)));
    }

    #[test]
    fn perfect_square_root_is_exact() {
        let r = Ball::from_int(25, P).sqrt().unwrap();
        assert_eq!(r.mid(), &Dyadic::from_int(5));
        assert!(r.is_exact());
        assert!(Ball::zero(P).sqrt().unwrap().is_exact());
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(
            Ball::from_int(-1, P).sqrt(),
            Err(Error::Domain(_))
        ));
        let straddle = Ball::with_radius(Dyadic::from_int(0), Dyadic::from_int(1), P).unwrap();
        assert!(Ball::from_int(1, P).div(&straddle).is_err());
        assert!(Ball::from_int(1, P).div(&Ball::zero(P)).is_err());
        assert!(straddle.sqrt().is_err());
    }

    #[test]
    fn compare_basics() {
        let one = Ball::from_int(1, P);
        let two = Ball::from_int(2, P);
        assert_eq!(one.certified_cmp(&two), Certified::Less);
        assert_eq!(two.certified_cmp(&one), Certified::Greater);
        let a = Ball::from_bounds(&Dyadic::from_int(1), &Dyadic::from_int(3), P).unwrap();
        let b = Ball::from_bounds(&Dyadic::from_int(2), &Dyadic::from_int(4), P).unwrap();
        assert_eq!(a.certified_cmp(&b), Certified::Overlap);
        assert_eq!(b.certified_cmp(&a), Certified::Overlap);
    }

    #[test]
    fn decimal_rounding_is_half_even() {
        let d = Dyadic::new(BigInt::from(5), -4); // 0.3125
        assert_eq!(d.to_decimal(3), "0.312");
        let d = Dyadic::new(BigInt::from(7), -4); // 0.4375
        assert_eq!(d.to_decimal(3), "0.438");
        assert_eq!(d.to_decimal_truncated(3), "0.437");
        assert_eq!(Dyadic::from_int(-3).to_decimal(2), "-3.00");
        assert_eq!(Dyadic::new(BigInt::from(1), -1).to_decimal(0), "0");
        assert_eq!(Dyadic::new(BigInt::from(3), -1).to_decimal(0), "2");
        assert_eq!(Dyadic::from_int(1000).to_scientific(3), "1.00e3");
        assert_eq!(Dyadic::new(BigInt::from(-3), -4).to_scientific(2), "-1.9e-1");
        assert_eq!(Dyadic::from_int(9999).to_scientific(2), "1.0e4");
    }

    #[test]
    fn f64_round_trip() {
        for x in [0.0, 1.0, -2.5, 1e-300, 3.141592653589793, 6.0e20] {
            let d = Dyadic::from_f64(x).unwrap();
            assert_eq!(d.to_f64(), x);
        }
        assert!(Dyadic::from_f64(f64::NAN).is_none());
    }

    #[test]
    fn division_encloses_one_third() {
        let third = Ball::from_ratio(1, 3, 64).unwrap();
        // 3 * third must contain 1
        let back = third.mul_int(&BigInt::from(3));
        assert!(back.contains(&Dyadic::from_int(1)));
        assert!(third.radius_f64() < 1e-18);
    }
}
