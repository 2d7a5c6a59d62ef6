use crate::error::{Error, Result};

/// Numerical thresholds shared by every check in the crate.
///
/// `eq_tol` is the Frobenius tolerance for matrix equalities and inequality
/// slack, `rank_cutoff` is the absolute eigenvalue threshold below which an
/// eigenvalue counts as zero, and `log_base` fixes the unit of every entropy
/// (2 gives bits).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    pub eq_tol: f64,
    pub rank_cutoff: f64,
    pub log_base: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self { eq_tol: 1e-9, rank_cutoff: 1e-12, log_base: 2.0 }
    }
}

impl ToleranceConfig {
    pub fn new(eq_tol: f64, rank_cutoff: f64, log_base: f64) -> Result<Self> {
        let cfg = Self { eq_tol, rank_cutoff, log_base };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eq_tol.is_finite() && self.eq_tol > 0.0) {
            return Err(Error::InvalidTolerance(format!("eq_tol must be positive, got {}", self.eq_tol)));
        }
        if !(self.rank_cutoff.is_finite() && self.rank_cutoff > 0.0) {
            return Err(Error::InvalidTolerance(format!(
                "rank_cutoff must be positive, got {}",
                self.rank_cutoff
            )));
        }
        if !(self.log_base.is_finite() && self.log_base > 1.0) {
            return Err(Error::InvalidTolerance(format!("log_base must exceed 1, got {}", self.log_base)));
        }
        Ok(())
    }

    /// Logarithm in the configured base.
    pub fn log(&self, x: f64) -> f64 {
        x.ln() / self.log_base.ln()
    }

    /// Threshold used to call an inequality saturated.
    pub fn saturation_tol(&self) -> f64 {
        10.0 * self.eq_tol
    }
}
