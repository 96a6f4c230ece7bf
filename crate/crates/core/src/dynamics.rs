//! The decimation map `R(z) = z(5 - z)` and its two inverse branches
//! `Φ±(z) = (5 ± √(25 - 4z)) / 2`.
//!
//! `Φ-` is evaluated as `2z / (5 + √(25 - 4z))`, which is algebraically
//! identical but does not cancel for small `z`; the iterates `Φ-^(n)` decay
//! like `5^-n` and would otherwise lose all significant bits.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Ball, Dyadic};

/// One of the two inverse branches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Branch {
    Minus,
    Plus,
}

impl Branch {
    pub fn symbol(self) -> char {
        match self {
            Branch::Minus => '-',
            Branch::Plus => '+',
        }
    }
}

/// A finite word `w_1 … w_k` over `{-, +}`.
///
/// `w_1` is applied first, so the word denotes `Φ_{w_k} ∘ … ∘ Φ_{w_1}`. The
/// textual form lists the letters in application order: `"+--"` means
/// `Φ- ∘ Φ- ∘ Φ+`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BranchWord(Vec<Branch>);

impl BranchWord {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn minus_power(n: usize) -> Self {
        Self(vec![Branch::Minus; n])
    }

    pub fn letters(&self) -> &[Branch] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> Option<Branch> {
        self.0.last().copied()
    }

    /// The word followed by one more letter (applied last).
    pub fn then(&self, b: Branch) -> Self {
        let mut v = self.0.clone();
        v.push(b);
        Self(v)
    }

    /// The word followed by `n` further `-` letters.
    pub fn then_minus(&self, n: usize) -> Self {
        let mut v = self.0.clone();
        v.extend(std::iter::repeat(Branch::Minus).take(n));
        Self(v)
    }

    /// Word with its final letter replaced.
    pub fn with_last(&self, b: Branch) -> Option<Self> {
        let mut v = self.0.clone();
        *v.last_mut()? = b;
        Some(Self(v))
    }

    /// 1-based position of the last `+`, if any.
    pub fn last_plus(&self) -> Option<usize> {
        self.0.iter().rposition(|&b| b == Branch::Plus).map(|i| i + 1)
    }
}

impl From<Vec<Branch>> for BranchWord {
    fn from(v: Vec<Branch>) -> Self {
        Self(v)
    }
}

impl fmt::Display for BranchWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{}", b.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for BranchWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '-' => Ok(Branch::Minus),
                '+' => Ok(Branch::Plus),
                other => Err(Error::InvalidParameter(format!(
                    "branch word letter {other:?} is not '-' or '+'"
                ))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }
}

impl Serialize for BranchWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BranchWord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn quarter_of_25() -> Dyadic {
    Dyadic::new(25.into(), -2)
}

/// `R(z) = z (5 - z)`.
pub fn forward_map(z: &Ball) -> Ball {
    let five = Ball::from_int(5, z.precision());
    z.mul(&five.sub(z))
}

fn check_domain(z: &Ball) -> Result<()> {
    if z.lower().is_negative() || z.upper() > quarter_of_25() {
        return Err(Error::Domain(format!(
            "inverse branch argument {z} is not inside [0, 25/4]"
        )));
    }
    Ok(())
}

/// `√(25 - 4z)`, the distance between the two branches.
pub fn branch_gap(z: &Ball) -> Result<Ball> {
    check_domain(z)?;
    let p = z.precision();
    Ball::from_int(25, p).sub(&z.shift(2)).sqrt()
}

/// `Φ±(z)` for `z ∈ [0, 25/4]`.
pub fn phi(branch: Branch, z: &Ball) -> Result<Ball> {
    let root = branch_gap(z)?;
    let five = Ball::from_int(5, z.precision());
    match branch {
        Branch::Plus => Ok(five.add(&root).shift(-1)),
        Branch::Minus => z.shift(1).div(&five.add(&root)),
    }
}

pub fn phi_minus(z: &Ball) -> Result<Ball> {
    phi(Branch::Minus, z)
}

pub fn phi_plus(z: &Ball) -> Result<Ball> {
    phi(Branch::Plus, z)
}

/// `Φ_{w_k} ∘ … ∘ Φ_{w_1}(seed)`.
pub fn phi_word(w: &BranchWord, seed: &Ball) -> Result<Ball> {
    w.letters()
        .iter()
        .try_fold(seed.clone(), |z, &b| phi(b, &z))
}

/// `Φ-^(n)(z)`.
pub fn phi_minus_iter(z: &Ball, n: usize) -> Result<Ball> {
    (0..n).try_fold(z.clone(), |x, _| phi_minus(&x))
}

/// `Φ-'(z) = (25 - 4z)^(-1/2)` for `z ∈ [0, 25/4)`.
pub fn dphi_minus(z: &Ball) -> Result<Ball> {
    let root = branch_gap(z)?;
    if !root.is_positive() {
        return Err(Error::Domain(format!(
            "derivative of the inverse branch is unbounded at {z}"
        )));
    }
    Ball::from_int(1, z.precision()).div(&root)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Certified;

    const P: u32 = 128;

    fn int(v: i64) -> Ball {
        Ball::from_int(v, P)
    }

    fn close(b: &Ball, x: f64, tol: f64) -> bool {
        (b.to_f64() - x).abs() <= tol
    }

    #[test]
    fn forward_map_values() {
        assert!(forward_map(&int(0)).certainly_equal(&int(0)));
        assert!(forward_map(&int(2)).certainly_equal(&int(6)));
        let back = forward_map(&phi_minus(&int(2)).unwrap());
        assert!(back.contains(&Dyadic::from_int(2)));
    }

    #[test]
    fn branch_values_at_integers() {
        assert!(phi_minus(&int(6)).unwrap().certainly_equal(&int(2)));
        assert!(phi_plus(&int(6)).unwrap().certainly_equal(&int(3)));
        assert!(phi_plus(&int(0)).unwrap().certainly_equal(&int(5)));
        assert!(phi_minus(&int(0)).unwrap().certainly_equal(&int(0)));
        let v = phi_minus(&int(3)).unwrap();
        assert!(close(&v, 0.6972, 5e-5));
        assert_eq!(
            v.certified_cmp(&Ball::from_ratio(7, 10, P).unwrap()),
            Certified::Less
        );
    }

    #[test]
    fn domain_is_enforced() {
        assert!(phi_minus(&int(-1)).is_err());
        assert!(phi_plus(&int(7)).is_err());
        let edge = Ball::from_ratio(25, 4, P).unwrap();
        assert!(phi_plus(&edge).is_ok());
        assert!(dphi_minus(&edge).is_err());
    }

    #[test]
    fn derivative_at_integers() {
        assert!(dphi_minus(&int(0))
            .unwrap()
            .encloses(&Ball::from_ratio(1, 5, P).unwrap()));
        assert!(dphi_minus(&int(6)).unwrap().certainly_equal(&int(1)));
        assert!(dphi_minus(&int(4))
            .unwrap()
            .overlaps(&Ball::from_ratio(1, 3, P).unwrap()));
    }

    #[test]
    fn word_serialization() {
        let w: BranchWord = "+--".parse().unwrap();
        assert_eq!(w.letters(), &[Branch::Plus, Branch::Minus, Branch::Minus]);
        assert_eq!(w.to_string(), "+--");
        assert_eq!(w.last_plus(), Some(1));
        assert!("+x".parse::<BranchWord>().is_err());
        assert_eq!(BranchWord::empty().to_string(), "");
    }

    #[test]
    fn empty_word_is_identity() {
        let s = int(5);
        assert_eq!(phi_word(&BranchWord::empty(), &s).unwrap(), s);
    }

    #[test]
    fn word_applies_first_letter_first() {
        // "+-" = Φ- ∘ Φ+
        let w: BranchWord = "+-".parse().unwrap();
        let v = phi_word(&w, &int(2)).unwrap();
        let direct = phi_minus(&phi_plus(&int(2)).unwrap()).unwrap();
        assert!(v.overlaps(&direct));
        assert!(close(&v, 1.200597372947411, 1e-14));
    }
}
