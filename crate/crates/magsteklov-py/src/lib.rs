//! Python bindings for the magsteklov library.
//!
//! Build with `cargo build -p magsteklov-py`, then rename the produced
//! cdylib to `magsteklov.so` (see python/smoke_test.py).

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use magsteklov::oracle::{
    rayleigh_galerkin_b2, steklov_eigenvalue_oracle, verify_harmonic_extension_b2n,
    GalerkinConfig, RadialSystemSpec,
};
use magsteklov::specfun::{self, LaguerreArgs};
use magsteklov::spectra::{self, B4ExactVariant, CoexactSign, MagneticParameter};
use magsteklov::{diamagnetic, Domain};

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_domain(domain: &str) -> PyResult<Domain> {
    domain.parse().map_err(err)
}

fn parse_sign(sign: &str) -> PyResult<CoexactSign> {
    match sign {
        "plus" | "+" => Ok(CoexactSign::Plus),
        "minus" | "-" => Ok(CoexactSign::Minus),
        other => Err(PyValueError::new_err(format!(
            "sign must be 'plus' or 'minus', got {other:?}"
        ))),
    }
}

fn mp(t: f64) -> PyResult<MagneticParameter> {
    MagneticParameter::new(t).map_err(err)
}

#[pyfunction]
fn laguerre(nu: f64, alpha: f64, x: f64) -> PyResult<f64> {
    specfun::laguerre(LaguerreArgs::new(nu, alpha, x)).map_err(err)
}

#[pyfunction]
fn regularized_kummer(a: f64, b: f64, x: f64) -> PyResult<f64> {
    specfun::regularized_kummer(a, b, x).map_err(err)
}

#[pyfunction]
fn exp_taylor_remainder(k: u32, t: f64) -> PyResult<f64> {
    specfun::exp_taylor_remainder(k, t).map_err(err)
}

/// Full spectrum as (records, excluded): records are
/// (value, family, k, p, multiplicity) tuples sorted ascending, excluded is a
/// list of (family, k, p) mode indices dropped at eigenvalue-curve poles.
#[pyfunction]
#[pyo3(signature = (domain, t, k_max = spectra::DEFAULT_K_MAX))]
#[allow(clippy::type_complexity)]
fn spectrum(
    domain: &str,
    t: f64,
    k_max: u32,
) -> PyResult<(
    Vec<(f64, String, u32, Option<u32>, Option<u32>)>,
    Vec<(String, u32, Option<u32>)>,
)> {
    let spec = spectra::spectrum(parse_domain(domain)?, mp(t)?, k_max).map_err(err)?;
    let records = spec
        .records
        .iter()
        .map(|r| {
            (
                r.value,
                r.mode.family.as_str().to_string(),
                r.mode.k,
                r.mode.p,
                r.multiplicity,
            )
        })
        .collect();
    let excluded = spec
        .excluded
        .iter()
        .map(|m| (m.family.as_str().to_string(), m.k, m.p))
        .collect();
    Ok((records, excluded))
}

/// Smallest eigenvalue as (value, family, k, p).
#[pyfunction]
#[pyo3(signature = (domain, t, k_max = spectra::DEFAULT_K_MAX))]
fn first_eigenvalue(domain: &str, t: f64, k_max: u32) -> PyResult<(f64, String, u32, Option<u32>)> {
    let (value, mode) =
        spectra::first_eigenvalue(parse_domain(domain)?, mp(t)?, k_max).map_err(err)?;
    Ok((value, mode.family.as_str().to_string(), mode.k, mode.p))
}

/// B² eigenvalue; conjugate=False is the plus branch, True the minus branch.
#[pyfunction]
#[pyo3(signature = (k, t, conjugate = false))]
fn b2_eigenvalue(k: u32, t: f64, conjugate: bool) -> PyResult<f64> {
    let family = magsteklov::oracle::b2_family_for(conjugate, k);
    spectra::b2_steklov_eigenvalue(k, family, mp(t)?).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (k, p, t, variant = "theorem"))]
fn b4_exact_eigenvalue(k: u32, p: u32, t: f64, variant: &str) -> PyResult<f64> {
    let variant = match variant {
        "theorem" => B4ExactVariant::TheoremStatement,
        "proof" => B4ExactVariant::ProofQPrime,
        other => {
            return Err(PyValueError::new_err(format!(
                "variant must be 'theorem' or 'proof', got {other:?}"
            )))
        }
    };
    spectra::b4_steklov_exact(k, p, mp(t)?, variant).map_err(err)
}

#[pyfunction]
fn b4_coexact_eigenvalue(k: u32, p: u32, sign: &str, t: f64) -> PyResult<f64> {
    spectra::b4_steklov_coexact(k, p, parse_sign(sign)?, mp(t)?).map_err(err)
}

/// Lowest B⁴ curve as (value, printed_verbatim): the certified (k=1, p=0)
/// exact branch and the printed expression evaluated verbatim.
#[pyfunction]
fn b4_lowest_eigenvalue(t: f64) -> PyResult<(f64, f64)> {
    let lowest = spectra::b4_lowest_eigenvalue(mp(t)?).map_err(err)?;
    Ok((lowest.value, lowest.printed_verbatim))
}

/// Power-series ODE oracle for the same eigenvalues (independent of the
/// closed forms). domain is "b2", "b4-exact", or "b4-coexact".
#[pyfunction]
#[pyo3(signature = (domain, k, t, p = 0, conjugate = false, sign = "minus"))]
fn oracle_eigenvalue(
    domain: &str,
    k: u32,
    t: f64,
    p: u32,
    conjugate: bool,
    sign: &str,
) -> PyResult<f64> {
    let spec = match domain {
        "b2" => RadialSystemSpec::b2(k, t, conjugate),
        "b4-exact" => RadialSystemSpec::b4_exact(k, p, t),
        "b4-coexact" => RadialSystemSpec::b4_coexact(k, p, parse_sign(sign)?, t),
        other => {
            return Err(PyValueError::new_err(format!(
                "oracle domain must be 'b2', 'b4-exact' or 'b4-coexact', got {other:?}"
            )))
        }
    };
    steklov_eigenvalue_oracle(&spec).map_err(err)
}

/// Rayleigh upper bound from a Galerkin trial space of the given size.
#[pyfunction]
fn galerkin_b2(k: u32, t: f64, basis_size: usize) -> PyResult<f64> {
    rayleigh_galerkin_b2(&GalerkinConfig::new(k, t, basis_size)).map_err(err)
}

/// Quadratic diamagnetic-bound coefficients (sigma0, c1, c2) on B^{2n}.
#[pyfunction]
fn bound_coefficients(n: u32) -> PyResult<(f64, f64, f64)> {
    let c = diamagnetic::bound_coefficients_b2n(n).map_err(err)?;
    Ok((c.sigma0, c.c1, c.c2))
}

/// Diamagnetic comparison rows (t, bound, actual, violated, dominated) and
/// the B⁴ crossing point (None on B²).
#[pyfunction]
#[allow(clippy::type_complexity)]
fn diamagnetic_report(
    domain: &str,
    grid: Vec<f64>,
) -> PyResult<(Vec<(f64, f64, f64, bool, bool)>, Option<f64>)> {
    let report = diamagnetic::check_violation(parse_domain(domain)?, &grid).map_err(err)?;
    let rows = report
        .rows
        .iter()
        .map(|r| (r.t, r.bound, r.actual, r.violated, r.dominated))
        .collect();
    Ok((rows, report.crossing))
}

#[pyfunction]
fn b4_crossing() -> PyResult<f64> {
    diamagnetic::b4_crossing().map_err(err)
}

/// Max Laplacian / Lie-flow / boundary residuals of the harmonic extension
/// audit at the given interior points (each a vector in R^{2n}).
#[pyfunction]
fn harmonic_extension_residuals(n: usize, points: Vec<Vec<f64>>) -> PyResult<(f64, f64, f64)> {
    let report = verify_harmonic_extension_b2n(n, &points).map_err(err)?;
    Ok((
        report.max_laplacian_residual,
        report.max_lie_residual,
        report.max_eta_residual,
    ))
}

#[pymodule]
fn magsteklov_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(laguerre, m)?)?;
    m.add_function(wrap_pyfunction!(regularized_kummer, m)?)?;
    m.add_function(wrap_pyfunction!(exp_taylor_remainder, m)?)?;
    m.add_function(wrap_pyfunction!(spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(first_eigenvalue, m)?)?;
    m.add_function(wrap_pyfunction!(b2_eigenvalue, m)?)?;
    m.add_function(wrap_pyfunction!(b4_exact_eigenvalue, m)?)?;
    m.add_function(wrap_pyfunction!(b4_coexact_eigenvalue, m)?)?;
    m.add_function(wrap_pyfunction!(b4_lowest_eigenvalue, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_eigenvalue, m)?)?;
    m.add_function(wrap_pyfunction!(galerkin_b2, m)?)?;
    m.add_function(wrap_pyfunction!(bound_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(diamagnetic_report, m)?)?;
    m.add_function(wrap_pyfunction!(b4_crossing, m)?)?;
    m.add_function(wrap_pyfunction!(harmonic_extension_residuals, m)?)?;
    Ok(())
}
