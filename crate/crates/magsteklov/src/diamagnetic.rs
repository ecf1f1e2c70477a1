//! The quadratic diamagnetic upper bound σ₀ + c₁t + c₂t² on B^{2n} and the
//! certification that the first magnetic Steklov eigenvalue violates the
//! diamagnetic inequality σ^{tη}₁ ≥ σ₁.

use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre_unit;
use crate::spectra::{self, B4ExactVariant, Domain, MagneticParameter, ModeIndex, DEFAULT_K_MAX};

use serde::{Deserialize, Serialize};

/// Coefficients of the quadratic upper bound σ₀ + c₁t + c₂t² for the first
/// 1-form Steklov eigenvalue on B^{2n}.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BoundCoefficients {
    /// Non-magnetic first eigenvalue σ₀ = (n+1)/n.
    pub sigma0: f64,
    /// Linear coefficient, −2·‖ω̂‖²_{L²(M)}/‖ω̂‖²_{L²(∂M)} (< 0: the Lie
    /// derivative term contributes Im⟨L_η ω̂, ω̂⟩ = −|ω̂|² pointwise).
    pub c1: f64,
    /// Quadratic coefficient, ‖ω̂‖²_{L²(M)}·‖η‖²_∞/‖ω̂‖²_{L²(∂M)} with
    /// ‖η‖_∞ = 1 on the unit ball.
    pub c2: f64,
    /// Ball half-dimension.
    pub n: u32,
}

const QUADRATURE_POINTS: usize = 64;

/// Computes the bound coefficients for B^{2n}, n ∈ {1, 2}, by 1-D Gauss
/// quadrature of the radial factors of the harmonic extension
/// ω̂ = (2n−1)/(2n)·((1−r²)φ̄ dr + (r + r³/(2n−1)) d^Sφ̄).
///
/// The spherical factor ∫|φ̄|² divides out of the interior/boundary ratio
/// after using ∫|d^Sφ̄|² = (2n−1)∫|φ̄|² for the first-eigenvalue
/// eigenfunction, leaving
///   ratio = ∫₀¹ [(1−r²)² + (2n−1)(r + r³/(2n−1))²/r²] r^{2n−1} dr
///           / [(2n/(2n−1))²·(2n−1)].
pub fn bound_coefficients_b2n(n: u32) -> Result<BoundCoefficients> {
    if !(n == 1 || n == 2) {
        return Err(Error::InvalidArgument(
            "bound coefficients supported for n ∈ {1, 2}".into(),
        ));
    }
    let m = (2 * n - 1) as f64; // 2n − 1
    let rule = gauss_legendre_unit(QUADRATURE_POINTS);
    let interior: f64 = rule
        .iter()
        .map(|&(r, w)| {
            let radial = (1.0 - r * r) * (1.0 - r * r);
            let angular_factor = r + r * r * r / m;
            let angular = m * angular_factor * angular_factor / (r * r);
            w * (radial + angular) * r.powi(2 * n as i32 - 1)
        })
        .sum();
    let boundary = (2.0 * n as f64 / m) * (2.0 * n as f64 / m) * m;
    let ratio = interior / boundary;
    Ok(BoundCoefficients {
        sigma0: (n as f64 + 1.0) / n as f64,
        c1: -2.0 * ratio,
        c2: ratio,
        n,
    })
}

/// σ₀ + c₁t + c₂t² over a grid.
pub fn bound_curve(n: u32, t_grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    if t_grid.is_empty() {
        return Err(Error::InvalidArgument("empty t grid".into()));
    }
    let b = bound_coefficients_b2n(n)?;
    t_grid
        .iter()
        .map(|&t| {
            if !t.is_finite() || t < 0.0 {
                return Err(Error::InvalidArgument(format!("bad grid point t = {t}")));
            }
            Ok((t, b.sigma0 + b.c1 * t + b.c2 * t * t))
        })
        .collect()
}

/// One grid row of the violation report.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ViolationRow {
    pub t: f64,
    /// Quadratic upper bound at t.
    pub bound: f64,
    /// First eigenvalue of the closed-form spectrum at t.
    pub actual: f64,
    /// Whether actual < σ₀ (the diamagnetic inequality fails here).
    pub violated: bool,
    /// Whether actual ≤ bound + 1e-9 (the upper bound dominates, as the
    /// inequality it derives from requires).
    pub dominated: bool,
    pub mode: ModeIndex,
}

/// Violation certificate over a t grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ViolationReport {
    pub domain: Domain,
    pub sigma0: f64,
    pub rows: Vec<ViolationRow>,
    /// Largest grid t at which actual < σ₀.
    pub largest_violating_t: Option<f64>,
    /// For B⁴: location t* of the crossing of the exact (k=1, p=0) branch
    /// through σ₀ = 3/2, found by bisection near the end of the violation
    /// window (≈ 2.997).
    pub crossing: Option<f64>,
}

fn b4_lowest_curve(t: f64) -> Result<f64> {
    spectra::b4_steklov_exact(1, 0, MagneticParameter::new(t)?, B4ExactVariant::ProofQPrime)
}

/// Bisection for the B⁴ crossing of 3/2 by the exact (k=1, p=0) branch.
pub fn b4_crossing() -> Result<f64> {
    let f = |t: f64| -> Result<f64> { Ok(b4_lowest_curve(t)? - 1.5) };
    let (mut lo, mut hi) = (2.5, 3.5);
    if !(f(lo)? < 0.0 && f(hi)? > 0.0) {
        return Err(Error::InvalidArgument(
            "crossing bracket [2.5, 3.5] does not straddle 3/2".into(),
        ));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-12 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Checks the diamagnetic violation σ^{tη}₁ < σ₁ against the closed-form
/// spectra over a t grid, and that the quadratic bound dominates the actual
/// first-eigenvalue curve.
pub fn check_violation(domain: Domain, t_grid: &[f64]) -> Result<ViolationReport> {
    let n = match domain {
        Domain::B2 => 1,
        Domain::B4 => 2,
        other => {
            return Err(Error::InvalidArgument(format!(
                "diamagnetic check applies to balls, not {other}"
            )))
        }
    };
    let coeffs = bound_coefficients_b2n(n)?;
    let mut rows = Vec::with_capacity(t_grid.len());
    let mut largest = None;
    for &t in t_grid {
        let mp = MagneticParameter::new(t)?;
        let (actual, mode) = spectra::first_eigenvalue(domain, mp, DEFAULT_K_MAX)?;
        let bound = coeffs.sigma0 + coeffs.c1 * t + coeffs.c2 * t * t;
        let violated = t > 0.0 && actual < coeffs.sigma0;
        if violated {
            largest = Some(t);
        }
        rows.push(ViolationRow {
            t,
            bound,
            actual,
            violated,
            dominated: actual <= bound + 1e-9,
            mode,
        });
    }
    let crossing = match domain {
        Domain::B4 => Some(b4_crossing()?),
        _ => None,
    };
    Ok(ViolationReport {
        domain,
        sigma0: coeffs.sigma0,
        rows,
        largest_violating_t: largest,
        crossing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_rel(actual: f64, expected: f64, tol: f64) {
        assert!(
            ((actual - expected) / expected.abs().max(1e-300)).abs() < tol,
            "got {actual:e}, expected {expected:e}"
        );
    }

    #[test]
    fn coefficients_match_exact_integrals() {
        // The defining quotient of integrals reduces to 1/3 (n = 1) and
        // 7/32 (n = 2); the quadrature must land on the exact rationals.
        let b1 = bound_coefficients_b2n(1).unwrap();
        assert_eq!(b1.sigma0, 2.0);
        assert_rel(b1.c2, 1.0 / 3.0, 1e-13);
        assert_rel(b1.c1, -2.0 / 3.0, 1e-13);
        let b2 = bound_coefficients_b2n(2).unwrap();
        assert_eq!(b2.sigma0, 1.5);
        assert_rel(b2.c2, 7.0 / 32.0, 1e-13);
        assert_rel(b2.c1, -7.0 / 16.0, 1e-13);
        assert!(bound_coefficients_b2n(3).is_err());
    }

    #[test]
    fn bound_curve_evaluates_the_quadratic() {
        let pts = bound_curve(1, &[0.0, 1.0, 3.0]).unwrap();
        assert_eq!(pts[0], (0.0, 2.0));
        assert_rel(pts[1].1, 2.0 - 2.0 / 3.0 + 1.0 / 3.0, 1e-13);
        assert_rel(pts[2].1, 2.0 - 2.0 + 3.0, 1e-13);
    }

    #[test]
    fn b2_violates_everywhere_on_the_positive_axis() {
        let grid: Vec<f64> = (1..=40).map(|i| 0.1 * i as f64).collect();
        let report = check_violation(Domain::B2, &grid).unwrap();
        assert_eq!(report.sigma0, 2.0);
        assert!(report.rows.iter().all(|row| row.violated));
        assert_eq!(report.largest_violating_t, Some(4.0));
        assert!(report.crossing.is_none());
        // The quadratic is a genuine Rayleigh upper bound, so it dominates
        // the true curve, with a gap shrinking to 0 as t → 0.
        assert!(report.rows.iter().all(|row| row.dominated));
        let gap = report.rows[0].bound - report.rows[0].actual;
        assert!(gap > 0.0 && gap < 1e-2, "gap {gap}");
    }

    #[test]
    fn b4_crossing_splits_domination() {
        let crossing = b4_crossing().unwrap();
        assert_rel(crossing, 2.997_499_248_551_18, 1e-9);
        let report = check_violation(Domain::B4, &[0.2, 0.4, crossing + 0.2]).unwrap();
        assert_eq!(report.sigma0, 1.5);
        // The first eigenvalue dips below the non-magnetic 3/2 at small t,
        // while the quadratic Rayleigh bound dominates it everywhere; the
        // crossing marks where the lowest exact branch returns above 3/2.
        assert!(report.rows.iter().all(|row| row.violated && row.dominated));
        assert_rel(report.crossing.unwrap(), crossing, 1e-12);
    }

    #[test]
    fn unsupported_domain_is_rejected() {
        assert!(check_violation(Domain::S3, &[1.0]).is_err());
    }
}
