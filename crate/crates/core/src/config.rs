use crate::error::{Error, Result};
use crate::scalar::DEFAULT_PRECISION;

/// Numerical settings shared by every certified computation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Config {
    /// Starting mantissa precision in bits.
    pub precision_bits: u32,
    /// Precision is doubled on inconclusive results, up to this many bits.
    pub precision_cap: u32,
    /// Absolute radius requested for renormalized limits.
    pub limit_tolerance: f64,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            precision_bits: DEFAULT_PRECISION,
            precision_cap: 4096,
            limit_tolerance: 1e-30,
        }
    }
}

impl Config {
    pub fn with_precision(precision_bits: u32) -> Self {
        Self {
            precision_bits,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.precision_bits < 64 {
            return Err(Error::InvalidParameter(format!(
                "precision must be at least 64 bits, got {}",
                self.precision_bits
            )));
        }
        if self.precision_cap < self.precision_bits {
            return Err(Error::InvalidParameter(
                "precision cap is below the starting precision".into(),
            ));
        }
        if !(self.limit_tolerance > 0.0 && self.limit_tolerance.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "tolerance must be positive, got {}",
                self.limit_tolerance
            )));
        }
        Ok(())
    }

    /// The escalation ladder `p, 2p, 4p, …` up to the cap.
    pub fn precision_ladder(&self) -> impl Iterator<Item = u32> {
        let cap = self.precision_cap;
        std::iter::successors(Some(self.precision_bits), move |&p| {
            p.checked_mul(2).filter(|&q| q <= cap)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_doubles_to_cap() {
        let c = Config {
            precision_bits: 128,
            precision_cap: 1024,
            ..Config::default()
        };
        assert_eq!(c.precision_ladder().collect::<Vec<_>>(), vec![128, 256, 512, 1024]);
    }

    #[test]
    fn validation() {
        assert!(Config::default().validate().is_ok());
        assert!(Config::with_precision(32).validate().is_err());
        let c = Config {
            limit_tolerance: 0.0,
            ..Config::default()
        };
        assert!(c.validate().is_err());
    }
}
