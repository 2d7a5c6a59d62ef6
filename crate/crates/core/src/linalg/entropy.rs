use super::decomp::hermitian_eig;
use super::matrix::ComplexMatrix;
use super::tolerance::ToleranceConfig;
use crate::error::{Error, Result};

/// `-sum x log x` over entries at or above the rank cutoff.
pub(crate) fn spectral_entropy(values: &[f64], tol: &ToleranceConfig) -> f64 {
    let s: f64 = values.iter().filter(|&&x| x >= tol.rank_cutoff).map(|&x| -x * tol.log(x)).sum();
    // -0.0 for pure states reads badly in reports.
    s.max(0.0)
}

pub fn shannon_entropy(p: &[f64], tol: &ToleranceConfig) -> Result<f64> {
    if let Some((index, &value)) = p.iter().enumerate().find(|(_, &x)| !x.is_finite() || x < -tol.rank_cutoff)
    {
        return Err(Error::ZeroProbability { index, value });
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > tol.eq_tol {
        return Err(Error::NotNormalized { total });
    }
    Ok(spectral_entropy(p, tol))
}

/// `h(p) = -p log p - (1 - p) log(1 - p)`, clamping `p` into `[0, 1]`.
pub fn binary_entropy(p: f64, tol: &ToleranceConfig) -> f64 {
    let p = p.clamp(0.0, 1.0);
    let term = |x: f64| if x > 0.0 { -x * tol.log(x) } else { 0.0 };
    term(p) + term(1.0 - p)
}

pub fn von_neumann_entropy(rho: &ComplexMatrix, tol: &ToleranceConfig) -> Result<f64> {
    rho.ensure_square("density operator")?;
    let trace = rho.trace();
    if (trace.re - 1.0).abs() > tol.eq_tol || trace.im.abs() > tol.eq_tol {
        return Err(Error::BadTrace { trace: trace.re });
    }
    let spectrum = hermitian_eig(rho, tol)?;
    if let Some(&min) = spectrum.eigenvalues.last() {
        if min < -tol.rank_cutoff {
            return Err(Error::NotPositive { eigenvalue: min });
        }
    }
    Ok(spectral_entropy(&spectrum.eigenvalues, tol))
}
