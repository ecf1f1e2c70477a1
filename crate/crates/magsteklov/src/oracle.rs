//! Independent verification engines: Frobenius power-series solutions of the
//! radial ODE boundary-value systems, residual audits, a Galerkin
//! Rayleigh-quotient minimizer realizing the min-max principle on B², the
//! Cartesian harmonic-extension audit, and the reconciliation of the two
//! printed B⁴ exact-family formulas.

use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre_unit;
use crate::spectra::{self, B4ExactVariant, CoexactSign, Family, MagneticParameter};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Which radial boundary-value problem to solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RadialDomain {
    B2,
    B4Exact,
    B4Coexact,
}

/// A radial system instance.
///
/// `conjugate` selects the sign of the linear-in-t zeroth-order coefficient:
/// `false` is the orientation whose B² eigenvalue is the lower (plus) branch
/// t^{k+1}/(k!(e^t−Σ)), and for B⁴ co-exact the minus-sign printed formula;
/// `true` flips it (for B² the (−t)^{k+1} branch, for B⁴ co-exact the
/// plus-sign formula).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialSystemSpec {
    pub domain: RadialDomain,
    pub k: u32,
    /// Secondary index; unused for B2.
    pub p: u32,
    pub t: f64,
    pub conjugate: bool,
}

impl RadialSystemSpec {
    pub fn b2(k: u32, t: f64, conjugate: bool) -> Self {
        Self {
            domain: RadialDomain::B2,
            k,
            p: 0,
            t,
            conjugate,
        }
    }

    pub fn b4_exact(k: u32, p: u32, t: f64) -> Self {
        Self {
            domain: RadialDomain::B4Exact,
            k,
            p,
            t,
            conjugate: false,
        }
    }

    pub fn b4_coexact(k: u32, p: u32, sign: CoexactSign, t: f64) -> Self {
        Self {
            domain: RadialDomain::B4Coexact,
            k,
            p,
            t,
            conjugate: sign == CoexactSign::Plus,
        }
    }

    fn validate(&self) -> Result<()> {
        if !self.t.is_finite() || self.t < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "radial system needs finite t >= 0, got {}",
                self.t
            )));
        }
        match self.domain {
            RadialDomain::B2 => Ok(()),
            RadialDomain::B4Exact | RadialDomain::B4Coexact => {
                if self.k < 1 || self.p > self.k {
                    Err(Error::InvalidArgument(format!(
                        "B⁴ system needs k >= 1 and p <= k, got (k={}, p={})",
                        self.k, self.p
                    )))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Linear-in-t zeroth-order constant A of the hatted scalar ODEs.
    fn linear_coefficient(&self) -> f64 {
        let (k, p, t) = (self.k as f64, self.p as f64, self.t);
        match self.domain {
            RadialDomain::B2 => {
                if self.conjugate {
                    2.0 * k * t
                } else {
                    -2.0 * k * t
                }
            }
            RadialDomain::B4Exact => {
                let a = 2.0 * (2.0 * p - k) * t;
                if self.conjugate {
                    -a
                } else {
                    a
                }
            }
            RadialDomain::B4Coexact => {
                if self.conjugate {
                    2.0 * t * (2.0 * p - k - 1.0)
                } else {
                    2.0 * t * (2.0 * p - k + 1.0)
                }
            }
        }
    }
}

/// Truncated even-power series solution of a radial system: the radial
/// functions of the 1-form ansatz, P = r^{sP}·Σ a_j r^{2j}, Q = r^{sQ}·Σ b_j r^{2j}.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RadialProfile {
    pub indicial_exponent_p: i32,
    pub indicial_exponent_q: i32,
    pub coeffs_p: Vec<f64>,
    pub coeffs_q: Vec<f64>,
}

fn eval_series(s: i32, coeffs: &[f64], r: f64, derivative: u32) -> f64 {
    let mut acc = 0.0;
    for (j, &c) in coeffs.iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        let e = s + 2 * j as i32;
        let mut factor = 1.0;
        let mut ee = e;
        for _ in 0..derivative {
            factor *= ee as f64;
            ee -= 1;
        }
        if factor == 0.0 {
            continue;
        }
        acc += c * factor * r.powi(ee);
    }
    acc
}

impl RadialProfile {
    pub fn eval_p(&self, r: f64) -> f64 {
        eval_series(self.indicial_exponent_p, &self.coeffs_p, r, 0)
    }

    pub fn eval_q(&self, r: f64) -> f64 {
        eval_series(self.indicial_exponent_q, &self.coeffs_q, r, 0)
    }

    pub fn eval_p_prime(&self, r: f64) -> f64 {
        eval_series(self.indicial_exponent_p, &self.coeffs_p, r, 1)
    }

    pub fn eval_q_prime(&self, r: f64) -> f64 {
        eval_series(self.indicial_exponent_q, &self.coeffs_q, r, 1)
    }

    fn eval_p_second(&self, r: f64) -> f64 {
        eval_series(self.indicial_exponent_p, &self.coeffs_p, r, 2)
    }

    fn eval_q_second(&self, r: f64) -> f64 {
        eval_series(self.indicial_exponent_q, &self.coeffs_q, r, 2)
    }

    fn scaled(&self, factor: f64) -> RadialProfile {
        RadialProfile {
            indicial_exponent_p: self.indicial_exponent_p,
            indicial_exponent_q: self.indicial_exponent_q,
            coeffs_p: self.coeffs_p.iter().map(|c| c * factor).collect(),
            coeffs_q: self.coeffs_q.iter().map(|c| c * factor).collect(),
        }
    }
}

/// Coefficients a_j of û = r^s Σ a_j r^{2j} solving
/// û″ + (c/r)û′ − (q/r² + A + B r²)û = 0, normalized a_0 = 1.
/// The recurrence a_j = (A a_{j−1} + B a_{j−2}) / D_j with
/// D_j = (s+2j)(s+2j+c−1) − q is exact; the tail at r = 1 must fall below
/// 1e-14 of the coefficient mass.
fn frobenius_series(s: f64, c: f64, q: f64, a_lin: f64, b_quad: f64, n_terms: usize) -> Result<Vec<f64>> {
    let mut a = Vec::with_capacity(n_terms);
    a.push(1.0);
    for j in 1..n_terms {
        let jf = j as f64;
        let d = (s + 2.0 * jf) * (s + 2.0 * jf + c - 1.0) - q;
        let prev2 = if j >= 2 { a[j - 2] } else { 0.0 };
        a.push((a_lin * a[j - 1] + b_quad * prev2) / d);
    }
    let mass: f64 = a.iter().map(|x| x.abs()).sum();
    let tail = (a[n_terms - 1].abs() + a[n_terms - 2].abs()) / mass.max(f64::MIN_POSITIVE);
    if tail > 1e-14 {
        return Err(Error::Truncation { tail });
    }
    Ok(a)
}

/// Both fundamental regular-at-0 branches of the radial system, as
/// (P, Q) profiles: the Z- and W-branch for the coupled systems, and the
/// single regular branch (second slot None) for the scalar ODEs (B² k = 0 and
/// the B⁴ co-exact family).
///
/// Normalization: the Z-branch hatted series starts at 2 (so its P and Q
/// components start at 1 for B², and at k·(k+2)/(k+1)-free scalings for B⁴),
/// the W-branch hatted series has leading coefficient 1.
pub fn series_solve(spec: &RadialSystemSpec, n_terms: usize) -> Result<(RadialProfile, Option<RadialProfile>)> {
    spec.validate()?;
    if n_terms < 20 {
        return Err(Error::InvalidArgument(
            "series_solve needs n_terms >= 20".into(),
        ));
    }
    let k = spec.k as f64;
    let ki = spec.k as i32;
    let t = spec.t;
    let a_lin = spec.linear_coefficient();
    let b_quad = t * t;
    match spec.domain {
        RadialDomain::B2 if spec.k == 0 => {
            // Scalar ODE for Q alone: Q″ − Q′/r − t²r²Q = 0, Q = r²·Σ.
            let q_coeffs = frobenius_series(2.0, -1.0, 0.0, 0.0, b_quad, n_terms)?;
            Ok((
                RadialProfile {
                    indicial_exponent_p: 0,
                    indicial_exponent_q: 2,
                    coeffs_p: vec![0.0],
                    coeffs_q: q_coeffs,
                },
                None,
            ))
        }
        RadialDomain::B2 => {
            // Hatted system decouples into Ẑ (s=0) and Ŵ (s=2) with
            // P̂ = (Ẑ+Ŵ)/2, Q̂ = (Ẑ−Ŵ)/2; P = r^{k−1}P̂, Q = r^k Q̂.
            let z = frobenius_series(0.0, 2.0 * k - 1.0, 0.0, a_lin, b_quad, n_terms)?;
            let w = frobenius_series(2.0, 2.0 * k - 1.0, 4.0 * k, a_lin, b_quad, n_terms)?;
            let z_profile = RadialProfile {
                indicial_exponent_p: ki - 1,
                indicial_exponent_q: ki,
                coeffs_p: z.clone(),
                coeffs_q: z,
            };
            let mut w_shift = vec![0.0];
            w_shift.extend_from_slice(&w);
            let w_profile = RadialProfile {
                indicial_exponent_p: ki - 1,
                indicial_exponent_q: ki,
                coeffs_p: w_shift.clone(),
                coeffs_q: w_shift.iter().map(|c| -c).collect(),
            };
            Ok((z_profile, Some(w_profile)))
        }
        RadialDomain::B4Exact => {
            // Ẑ (s=0, c=2k+1) and Ŵ (s=2, c=2k+1, q=4k+4) with
            // P̂ ∝ kẐ + (k+2)Ŵ and Q̂ ∝ Ẑ − Ŵ.
            let z = frobenius_series(0.0, 2.0 * k + 1.0, 0.0, a_lin, b_quad, n_terms)?;
            let w = frobenius_series(2.0, 2.0 * k + 1.0, 4.0 * k + 4.0, a_lin, b_quad, n_terms)?;
            let z_profile = RadialProfile {
                indicial_exponent_p: ki - 1,
                indicial_exponent_q: ki,
                coeffs_p: z.iter().map(|c| k * c).collect(),
                coeffs_q: z,
            };
            let mut w_shift = vec![0.0];
            w_shift.extend_from_slice(&w);
            let w_profile = RadialProfile {
                indicial_exponent_p: ki - 1,
                indicial_exponent_q: ki,
                coeffs_p: w_shift.iter().map(|c| (k + 2.0) * c).collect(),
                coeffs_q: w_shift.iter().map(|c| -c).collect(),
            };
            Ok((z_profile, Some(w_profile)))
        }
        RadialDomain::B4Coexact => {
            // Scalar ODE: Q″ + Q′/r − ((k+1)²/r² + A + t²r²)Q = 0, Q = r^{k+1}·Σ.
            let q_coeffs = frobenius_series(
                k + 1.0,
                1.0,
                (k + 1.0) * (k + 1.0),
                a_lin,
                b_quad,
                n_terms,
            )?;
            Ok((
                RadialProfile {
                    indicial_exponent_p: 0,
                    indicial_exponent_q: ki + 1,
                    coeffs_p: vec![0.0],
                    coeffs_q: q_coeffs,
                },
                None,
            ))
        }
    }
}

fn combine(alpha: f64, z: &RadialProfile, beta: f64, w: &RadialProfile) -> RadialProfile {
    let n = z.coeffs_p.len().max(w.coeffs_p.len());
    let mut coeffs_p = vec![0.0; n];
    let mut coeffs_q = vec![0.0; n];
    for j in 0..n {
        let zp = z.coeffs_p.get(j).copied().unwrap_or(0.0);
        let wp = w.coeffs_p.get(j).copied().unwrap_or(0.0);
        let zq = z.coeffs_q.get(j).copied().unwrap_or(0.0);
        let wq = w.coeffs_q.get(j).copied().unwrap_or(0.0);
        coeffs_p[j] = alpha * zp + beta * wp;
        coeffs_q[j] = alpha * zq + beta * wq;
    }
    RadialProfile {
        indicial_exponent_p: z.indicial_exponent_p,
        indicial_exponent_q: z.indicial_exponent_q,
        coeffs_p,
        coeffs_q,
    }
}

const ORACLE_SERIES_TERMS: usize = 160;

/// Eigen-profile of the boundary-value problem: the combination of regular
/// branches with P(1) = 0, normalized to Q(1) = 1, together with its Steklov
/// eigenvalue Q'(1).
pub fn steklov_eigen_profile(spec: &RadialSystemSpec) -> Result<(f64, RadialProfile)> {
    let (z, w) = series_solve(spec, ORACLE_SERIES_TERMS)?;
    let combined = match w {
        None => {
            // Scalar branch: P ≡ 0 already satisfies the boundary condition.
            z
        }
        Some(w) => {
            let zp1 = z.eval_p(1.0);
            let wp1 = w.eval_p(1.0);
            if zp1.abs() < 1e-14 && wp1.abs() < 1e-14 {
                return Err(Error::DegenerateBranches);
            }
            // alpha·P_Z(1) + beta·P_W(1) = 0.
            combine(wp1, &z, -zp1, &w)
        }
    };
    let q1 = combined.eval_q(1.0);
    if q1.abs() < 1e-12 {
        return Err(Error::Normalization(q1.abs()));
    }
    let normalized = combined.scaled(1.0 / q1);
    let eigenvalue = normalized.eval_q_prime(1.0);
    Ok((eigenvalue, normalized))
}

/// Steklov eigenvalue from the series boundary-value solve (the independent
/// arbiter for the closed-form spectra).
pub fn steklov_eigenvalue_oracle(spec: &RadialSystemSpec) -> Result<f64> {
    steklov_eigen_profile(spec).map(|(ev, _)| ev)
}

/// Max over the sample radii of the (P, Q) system residual, scaled by the
/// local solution magnitude.
pub fn ode_residual(profile: &RadialProfile, spec: &RadialSystemSpec, sample_r: &[f64]) -> f64 {
    let k = spec.k as f64;
    let t = spec.t;
    let a_lin = spec.linear_coefficient();
    let mut worst = 0.0f64;
    for &r in sample_r {
        let p = profile.eval_p(r);
        let q = profile.eval_q(r);
        let dp = profile.eval_p_prime(r);
        let dq = profile.eval_q_prime(r);
        let d2p = profile.eval_p_second(r);
        let d2q = profile.eval_q_second(r);
        let zero_order = a_lin + t * t * r * r;
        let (res_q, res_p) = match spec.domain {
            RadialDomain::B2 if spec.k == 0 => (d2q - dq / r - t * t * r * r * q, 0.0),
            RadialDomain::B2 => (
                k * k * q / (r * r) - (d2q - dq / r) - 2.0 * k * p / r + zero_order * q,
                k * k * p / (r * r) - (d2p + dp / r - p / (r * r)) - 2.0 * k * q / (r * r * r)
                    + zero_order * p,
            ),
            RadialDomain::B4Exact => (
                k * (k + 2.0) * q / (r * r) - (d2q + dq / r) - 2.0 * p / r + zero_order * q,
                k * (k + 2.0) * p / (r * r) - (d2p + 3.0 * dp / r - 3.0 * p / (r * r))
                    - 2.0 * k * (k + 2.0) * q / (r * r * r)
                    + zero_order * p,
            ),
            RadialDomain::B4Coexact => (
                d2q + dq / r - ((k + 1.0) * (k + 1.0) / (r * r) + zero_order) * q,
                0.0,
            ),
        };
        let scale = p
            .abs()
            .max(q.abs())
            .max(dp.abs())
            .max(dq.abs())
            .max(1e-30);
        worst = worst.max(res_q.abs().max(res_p.abs()) / scale);
    }
    worst
}

/// The boundary-value eigen-profile of the B² problem built from the
/// closed-form hatted branches (Ẑ = 2e^{±tr²/2} and the exponential-tail Ŵ)
/// expanded as power series — used to audit the printed closed forms against
/// the ODE by residual.
pub fn b2_closed_form_profile(k: u32, t: f64, conjugate: bool, n_terms: usize) -> Result<RadialProfile> {
    if k < 1 {
        return Err(Error::InvalidArgument(
            "closed-form profile needs k >= 1".into(),
        ));
    }
    let ki = k as i32;
    let st = if conjugate { t } else { -t }; // sign of tr²/2 in Ẑ
    // Ẑ = 2·e^{st·r²/2}: coefficients 2(st/2)^j/j!.
    let mut z_hat = Vec::with_capacity(n_terms);
    let mut c = 2.0;
    z_hat.push(c);
    for j in 1..n_terms {
        c *= 0.5 * st / j as f64;
        z_hat.push(c);
    }
    // Ŵ ∝ e^{st·r²/2}·R_k(−st·r²)/r^{2k} where R_k is the exponential Taylor
    // tail; R_k(−st·r²)/r^{2k} = r²·Σ_m (−st)^{k+1+m} r^{2m}/(k+1+m)!.
    let mut tail = Vec::with_capacity(n_terms);
    let mut c = 1.0;
    for j in 1..=(k + 1) as usize {
        c *= -st / j as f64;
    }
    tail.push(c);
    for m in 1..n_terms {
        c *= -st / (k as usize + 1 + m) as f64;
        tail.push(c);
    }
    // Convolve the exponential series with the tail series.
    let mut w_hat = vec![0.0; n_terms];
    for (i, zi) in z_hat.iter().enumerate() {
        for (m, tm) in tail.iter().enumerate() {
            if i + m < n_terms {
                w_hat[i + m] += 0.5 * zi * tm;
            }
        }
    }
    // Scale Ŵ to leading coefficient 1 (the overall constant is free).
    let lead = w_hat[0];
    if lead == 0.0 {
        return Err(Error::InvalidArgument(
            "degenerate closed-form W branch (t = 0?)".into(),
        ));
    }
    for c in &mut w_hat {
        *c /= lead;
    }
    // Assemble P̂ = (Ẑ+Ŵ)/2, Q̂ = (Ẑ−Ŵ)/2 branches and combine with P(1)=0.
    let z_profile = RadialProfile {
        indicial_exponent_p: ki - 1,
        indicial_exponent_q: ki,
        coeffs_p: z_hat.iter().map(|c| 0.5 * c).collect(),
        coeffs_q: z_hat.iter().map(|c| 0.5 * c).collect(),
    };
    let mut w_shift = vec![0.0];
    w_shift.extend_from_slice(&w_hat[..n_terms - 1]);
    let w_profile = RadialProfile {
        indicial_exponent_p: ki - 1,
        indicial_exponent_q: ki,
        coeffs_p: w_shift.iter().map(|c| 0.5 * c).collect(),
        coeffs_q: w_shift.iter().map(|c| -0.5 * c).collect(),
    };
    let zp1 = z_profile.eval_p(1.0);
    let wp1 = w_profile.eval_p(1.0);
    let combined = combine(wp1, &z_profile, -zp1, &w_profile);
    let q1 = combined.eval_q(1.0);
    if q1.abs() < 1e-12 {
        return Err(Error::Normalization(q1.abs()));
    }
    Ok(combined.scaled(1.0 / q1))
}

// ---------------------------------------------------------------------------
// Galerkin min-max on B²
// ---------------------------------------------------------------------------

/// Configuration of the B² Rayleigh-quotient minimizer.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GalerkinConfig {
    /// Fourier mode |k| of the boundary trace.
    pub k: u32,
    pub t: f64,
    /// Number of paired trial elements N.
    pub basis_size: usize,
    /// Number of Gauss–Legendre points on [0, 1].
    pub quadrature_order: usize,
}

impl GalerkinConfig {
    /// Default quadrature: exact for every polynomial integrand the trial
    /// space produces.
    pub fn new(k: u32, t: f64, basis_size: usize) -> Self {
        Self {
            k,
            t,
            basis_size,
            quadrature_order: 2 * basis_size + k as usize + 8,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.basis_size < 2 {
            return Err(Error::Config("Galerkin basis size must be >= 2".into()));
        }
        // Exactness for degree >= 2N + 6 requires at least N + 4 points.
        if self.quadrature_order < self.basis_size + 4 {
            return Err(Error::Config(
                "quadrature order too low for the trial space".into(),
            ));
        }
        if !self.t.is_finite() || self.t < 0.0 {
            return Err(Error::Config("Galerkin t must be finite and >= 0".into()));
        }
        Ok(())
    }
}

/// Min-max upper bound for the first B² Steklov eigenvalue in Fourier mode k:
/// minimizes the magnetic Dirichlet energy
/// ∫₀¹ [ |Q′ − kP + t r² P|²/r + |(rP)′/r − kQ/r² + tQ|²·r ] dr
/// over polynomial trial pairs with built-in P(1) = 0, normalized by the
/// boundary norm Q(1)². The orientation of the linear t-terms targets the
/// lower (plus) branch; validated against the closed-form spectrum (t = 0,
/// k = 1 must give 2; k = 1, t = 1 must give t²/(e^t−1−t)).
///
/// The boundary form is rank one (b_ij = Q_i(1)Q_j(1)), so the smallest
/// generalized eigenvalue reduces to 1/(cᵀ A⁻¹ c) with c_i = Q_i(1).
pub fn rayleigh_galerkin_b2(config: &GalerkinConfig) -> Result<f64> {
    config.validate()?;
    let n = config.basis_size;
    let k = config.k as f64;
    let t = config.t;
    let rule = gauss_legendre_unit(config.quadrature_order);

    // Trial basis: for k >= 1, paired elements e_j = (P = r^{k−1+2j}(1−r²),
    // Q = r^{k+2j}) for j < N plus Q-only elements (0, r^{k+2m}) for
    // 1 <= m < N; pairing the leading coefficients keeps every integrand
    // polynomial. For k = 0 the trial space is Q ∈ span{r^{2+2m}} with P ≡ 0.
    struct Trial {
        p_pow: Option<i32>, // P = r^{p_pow}(1 − r²); None means P ≡ 0
        q_pow: i32,
    }
    let trials: Vec<Trial> = if config.k == 0 {
        (0..n)
            .map(|m| Trial {
                p_pow: None,
                q_pow: 2 + 2 * m as i32,
            })
            .collect()
    } else {
        let ki = config.k as i32;
        (0..n)
            .map(|j| Trial {
                p_pow: Some(ki - 1 + 2 * j as i32),
                q_pow: ki + 2 * j as i32,
            })
            .chain((1..n).map(|m| Trial {
                p_pow: None,
                q_pow: ki + 2 * m as i32,
            }))
            .collect()
    };
    let dim = trials.len();

    // d-component (Q′ − kP + tr²P)/√r and δ-component ((rP)′/r − kQ/r² + tQ)·√r
    // evaluated at the quadrature nodes, per trial element.
    let mut d_rows = vec![vec![0.0; rule.len()]; dim];
    let mut del_rows = vec![vec![0.0; rule.len()]; dim];
    for (i, trial) in trials.iter().enumerate() {
        for (s, &(r, _)) in rule.iter().enumerate() {
            let (p, rp_prime_over_r) = match trial.p_pow {
                Some(e) => {
                    let p = r.powi(e) - r.powi(e + 2);
                    // (rP)′/r for P = r^e − r^{e+2}.
                    let d = (e + 1) as f64 * r.powi(e - 1) - (e + 3) as f64 * r.powi(e + 1);
                    (p, d)
                }
                None => (0.0, 0.0),
            };
            let q = r.powi(trial.q_pow);
            let dq = trial.q_pow as f64 * r.powi(trial.q_pow - 1);
            d_rows[i][s] = (dq - k * p + t * r * r * p) / r.sqrt();
            del_rows[i][s] = (rp_prime_over_r - k * q / (r * r) + t * q) * r.sqrt();
        }
    }

    let mut a = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in i..dim {
            let mut acc = 0.0;
            for (s, &(_, w)) in rule.iter().enumerate() {
                acc += w * (d_rows[i][s] * d_rows[j][s] + del_rows[i][s] * del_rows[j][s]);
            }
            a[(i, j)] = acc;
            a[(j, i)] = acc;
        }
    }
    // Boundary values Q_i(1) = 1 for every trial element. The monomial basis
    // makes A Hilbert-like, so solve with partial-pivot LU (a Cholesky pivot
    // can go nonpositive from roundoff well before the answer degrades) and
    // fall back to positivity of the rank-one pairing as the sanity check.
    let c = DVector::from_element(dim, 1.0);
    let x = a.lu().solve(&c).ok_or_else(|| {
        Error::Config("energy form is singular on the trial space".into())
    })?;
    let denom = c.dot(&x);
    if !(denom.is_finite() && denom > 0.0) {
        return Err(Error::Config("singular boundary pairing".into()));
    }
    Ok(1.0 / denom)
}

// ---------------------------------------------------------------------------
// Harmonic-extension audit (Cartesian, B^{2n})
// ---------------------------------------------------------------------------

/// Outcome of the Cartesian finite-difference audit of the harmonic extension
/// ω̂ = (2n−1)/(2n)·((1−r²)φ̄ dr + (r + r³/(2n−1)) d^Sφ̄) for φ̄ = x₁ − i y₁.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct HarmonicExtensionReport {
    /// max over points/components of |Δ ω̂| (componentwise, central FD).
    pub max_laplacian_residual: f64,
    /// max over points/components of |L_η ω̂ + i ω̂| (flow finite difference).
    pub max_lie_residual: f64,
    /// max over points of |η(φ̄) + i φ̄| (algebraic identity, exact to rounding).
    pub max_eta_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

const FD_STEP: f64 = 1e-5;

/// Step for the Laplacian stencil. The ω̂ components are quadratic
/// polynomials, so the central second difference has no truncation error and
/// a wider step only shrinks the 1/h² roundoff amplification.
const LAPLACE_STEP: f64 = 1e-3;

/// Covector components of ω̂ at x ∈ ℝ^{2n}; simplifying the radial/spherical
/// split leaves the polynomial form
/// ω̂_i = c·(−(2n/(2n−1))·φ̄·x_i + (1 + r²/(2n−1))·dφ̄_i), c = (2n−1)/(2n).
fn omega_hat(n: usize, x: &[f64]) -> Vec<Complex64> {
    let dim = 2 * n;
    debug_assert_eq!(x.len(), dim);
    let m = (2 * n - 1) as f64;
    let c = m / (2.0 * n as f64);
    let phi = Complex64::new(x[0], -x[1]);
    let r2: f64 = x.iter().map(|v| v * v).sum();
    let radial = -(2.0 * n as f64 / m) * phi;
    let angular = 1.0 + r2 / m;
    (0..dim)
        .map(|i| {
            let dphi = match i {
                0 => Complex64::new(1.0, 0.0),
                1 => Complex64::new(0.0, -1.0),
                _ => Complex64::new(0.0, 0.0),
            };
            c * (radial * x[i] + angular * dphi)
        })
        .collect()
}

/// Rotate every (x_{2j}, x_{2j+1}) pair by angle s — the flow of the Killing
/// field η = Σ(−y_j ∂x_j + x_j ∂y_j).
fn rotate(x: &[f64], s: f64) -> Vec<f64> {
    let (cs, sn) = (s.cos(), s.sin());
    let mut out = vec![0.0; x.len()];
    for j in 0..x.len() / 2 {
        out[2 * j] = cs * x[2 * j] - sn * x[2 * j + 1];
        out[2 * j + 1] = sn * x[2 * j] + cs * x[2 * j + 1];
    }
    out
}

/// Pullback (ψ_s^* ω̂)_i(x) = Σ_a ω̂_a(ψ_s x) · ∂(ψ_s x)_a/∂x_i.
fn pullback(n: usize, x: &[f64], s: f64) -> Vec<Complex64> {
    let y = rotate(x, s);
    let w = omega_hat(n, &y);
    let (cs, sn) = (s.cos(), s.sin());
    let mut out = vec![Complex64::new(0.0, 0.0); x.len()];
    for j in 0..x.len() / 2 {
        // d(ψ_s)ᵀ on the (x, y) pair.
        out[2 * j] = cs * w[2 * j] + sn * w[2 * j + 1];
        out[2 * j + 1] = -sn * w[2 * j] + cs * w[2 * j + 1];
    }
    out
}

/// Audits the harmonic extension at the given interior sample points
/// (0 < |x| < 1, with finite-difference margin): componentwise harmonicity,
/// the Lie-derivative eigen-relation L_η ω̂ = −i ω̂, and η(φ̄) = −i φ̄.
pub fn verify_harmonic_extension_b2n(n: usize, sample_points: &[Vec<f64>]) -> Result<HarmonicExtensionReport> {
    if !(n == 1 || n == 2) {
        return Err(Error::InvalidArgument(
            "harmonic-extension audit supports n ∈ {1, 2}".into(),
        ));
    }
    let dim = 2 * n;
    let tolerance = 1e-6;
    let mut max_lap = 0.0f64;
    let mut max_lie = 0.0f64;
    let mut max_eta = 0.0f64;
    for x in sample_points {
        if x.len() != dim {
            return Err(Error::InvalidArgument(format!(
                "sample point has dimension {}, expected {dim}",
                x.len()
            )));
        }
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if r < 10.0 * LAPLACE_STEP || r > 1.0 - 10.0 * LAPLACE_STEP {
            return Err(Error::InvalidArgument(
                "sample too close to the origin or boundary for the FD stencil".into(),
            ));
        }
        // (a) componentwise Laplacian of ω̂ (harmonic extension ⇒ 0).
        let center = omega_hat(n, x);
        let mut lap = vec![Complex64::new(0.0, 0.0); dim];
        for axis in 0..dim {
            let mut plus = x.clone();
            let mut minus = x.clone();
            plus[axis] += LAPLACE_STEP;
            minus[axis] -= LAPLACE_STEP;
            let wp = omega_hat(n, &plus);
            let wm = omega_hat(n, &minus);
            for comp in 0..dim {
                lap[comp] +=
                    (wp[comp] - 2.0 * center[comp] + wm[comp]) / (LAPLACE_STEP * LAPLACE_STEP);
            }
        }
        for comp in 0..dim {
            max_lap = max_lap.max(lap[comp].norm());
        }
        // (b) Lie derivative along η by flow finite difference vs −i ω̂.
        let fwd = pullback(n, x, FD_STEP);
        let bwd = pullback(n, x, -FD_STEP);
        for comp in 0..dim {
            let lie = (fwd[comp] - bwd[comp]) / (2.0 * FD_STEP);
            let expected = Complex64::new(0.0, -1.0) * center[comp];
            max_lie = max_lie.max((lie - expected).norm());
        }
        // (c) η(φ̄) = −i φ̄ exactly: η·∇φ̄ = −y₁ − i x₁.
        let phi = Complex64::new(x[0], -x[1]);
        let eta_phi = Complex64::new(-x[1], -x[0]);
        max_eta = max_eta.max((eta_phi - Complex64::new(0.0, -1.0) * phi).norm());
    }
    Ok(HarmonicExtensionReport {
        max_laplacian_residual: max_lap,
        max_lie_residual: max_lie,
        max_eta_residual: max_eta,
        tolerance,
        pass: max_lap < tolerance && max_lie < tolerance && max_eta < 1e-12,
    })
}

// ---------------------------------------------------------------------------
// B⁴ exact-family reconciliation
// ---------------------------------------------------------------------------

/// One reconciliation verdict for the two printed B⁴ exact-family forms.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct B4ExactReconciliation {
    pub k: u32,
    pub p: u32,
    pub t: f64,
    pub theorem: f64,
    pub proof: f64,
    pub oracle: f64,
    pub theorem_matches: bool,
    pub proof_matches: bool,
    pub tolerance: f64,
}

/// Evaluates both printed B⁴ exact-family expressions and the series oracle,
/// and records which of the two printed forms agrees (1e-6 relative).
pub fn reconcile_b4_exact(k: u32, p: u32, t: f64) -> Result<B4ExactReconciliation> {
    let tol = 1e-6;
    let mp = MagneticParameter::new(t)?;
    let theorem = spectra::b4_steklov_exact(k, p, mp, B4ExactVariant::TheoremStatement)?;
    let proof = spectra::b4_steklov_exact(k, p, mp, B4ExactVariant::ProofQPrime)?;
    let oracle = steklov_eigenvalue_oracle(&RadialSystemSpec::b4_exact(k, p, t))?;
    let rel = |v: f64| (v - oracle).abs() / oracle.abs().max(1.0);
    Ok(B4ExactReconciliation {
        k,
        p,
        t,
        theorem,
        proof,
        oracle,
        theorem_matches: rel(theorem) < tol,
        proof_matches: rel(proof) < tol,
        tolerance: tol,
    })
}

/// Closed-form B² family corresponding to a conjugate flag (used by the
/// oracle-vs-closed-form sweeps).
pub fn b2_family_for(conjugate: bool, k: u32) -> Family {
    if k == 0 {
        Family::B2KZero
    } else if conjugate {
        Family::B2Minus
    } else {
        Family::B2Plus
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::{
        b2_steklov_eigenvalue, b4_steklov_coexact, b4_steklov_exact, B4ExactVariant,
        MagneticParameter,
    };

    fn assert_rel(actual: f64, expected: f64, tol: f64) {
        assert!(
            ((actual - expected) / expected.abs().max(1e-300)).abs() < tol,
            "got {actual:e}, expected {expected:e}"
        );
    }

    const SAMPLE_R: [f64; 5] = [0.15, 0.35, 0.5, 0.75, 1.0];

    #[test]
    fn b2_nonmagnetic_profile_is_the_polynomial_solution() {
        // At t = 0 the eigen-profile must be P ∝ r^{k-1}(1 − r²),
        // Q ∝ r^k(1 + r²) with eigenvalue k + 1.
        for k in 1..=4u32 {
            let spec = RadialSystemSpec::b2(k, 0.0, false);
            let (ev, profile) = steklov_eigen_profile(&spec).unwrap();
            assert_rel(ev, k as f64 + 1.0, 1e-13);
            for &r in &[0.3f64, 0.6, 0.9] {
                let expected_q = r.powi(k as i32) * (1.0 + r * r) / 2.0;
                assert_rel(profile.eval_q(r), expected_q, 1e-13);
                let p_scale = profile.eval_p(0.5) / (0.5f64.powi(k as i32 - 1) * 0.75);
                let expected_p = p_scale * r.powi(k as i32 - 1) * (1.0 - r * r);
                assert_rel(profile.eval_p(r), expected_p, 1e-12);
            }
            assert!(profile.eval_p(1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn b2_z_branch_is_twice_exponential() {
        // The regular first branch of the hatted B² system is Ẑ = 2e^{tr²/2}
        // on the conjugate orientation; its Q component is r^k·Ẑ/2... the
        // unnormalized series carries Ẑ with a_0 = 1, so compare ratios.
        let spec = RadialSystemSpec::b2(1, 1.0, true);
        let (z, _) = series_solve(&spec, 160).unwrap();
        for &r in &[0.3f64, 0.7, 1.0] {
            let expected = r * (0.5 * r * r).exp(); // r^k e^{tr²/2}
            assert_rel(z.eval_q(r), expected, 1e-12);
            assert_rel(z.eval_p(r), expected / r, 1e-12);
        }
    }

    #[test]
    fn b2_k_zero_profile_is_hyperbolic_sine() {
        let spec = RadialSystemSpec::b2(0, 2.0, false);
        let (profile, w) = series_solve(&spec, 160).unwrap();
        assert!(w.is_none());
        // Q solves Q″ − Q′/r − t²r²Q = 0, regular solution sinh(tr²/2).
        let scale = profile.eval_q(1.0) / (1.0f64).sinh();
        for &r in &[0.25, 0.5, 0.85] {
            assert_rel(profile.eval_q(r), scale * (r * r).sinh(), 1e-13);
        }
    }

    #[test]
    fn b2_oracle_matches_closed_form() {
        let e = std::f64::consts::E;
        let spec = RadialSystemSpec::b2(1, 1.0, false);
        assert_rel(steklov_eigenvalue_oracle(&spec).unwrap(), 1.0 / (e - 2.0), 1e-12);
        let spec = RadialSystemSpec::b2(1, 1.0, true);
        assert_rel(steklov_eigenvalue_oracle(&spec).unwrap(), e, 1e-12);
        let spec = RadialSystemSpec::b2(0, 2.0, false);
        assert_rel(
            steklov_eigenvalue_oracle(&spec).unwrap(),
            2.626_070_570_998_662_607_3,
            1e-12,
        );
        // Broader sweep against the tail-form evaluation.
        for k in 1..=8u32 {
            for &t in &[0.1, 0.5, 2.0, 5.0] {
                for conjugate in [false, true] {
                    let spec = RadialSystemSpec::b2(k, t, conjugate);
                    let closed = b2_steklov_eigenvalue(
                        k,
                        b2_family_for(conjugate, k),
                        MagneticParameter::new(t).unwrap(),
                    )
                    .unwrap();
                    let oracle = steklov_eigenvalue_oracle(&spec).unwrap();
                    assert_rel(oracle, closed, 1e-10);
                }
            }
        }
    }

    #[test]
    fn b4_oracle_matches_closed_forms() {
        for k in 1..=4u32 {
            for p in 0..=k {
                for &t in &[0.3, 1.0, 2.5] {
                    let tp = MagneticParameter::new(t).unwrap();
                    let spec = RadialSystemSpec::b4_exact(k, p, t);
                    let closed =
                        b4_steklov_exact(k, p, tp, B4ExactVariant::ProofQPrime).unwrap();
                    assert_rel(steklov_eigenvalue_oracle(&spec).unwrap(), closed, 1e-9);
                    for sign in [CoexactSign::Plus, CoexactSign::Minus] {
                        let spec = RadialSystemSpec::b4_coexact(k, p, sign, t);
                        let closed = b4_steklov_coexact(k, p, sign, tp).unwrap();
                        assert_rel(steklov_eigenvalue_oracle(&spec).unwrap(), closed, 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn eigen_profiles_satisfy_the_ode() {
        let mut specs = vec![RadialSystemSpec::b2(0, 1.5, false)];
        for k in 1..=5u32 {
            for &t in &[0.2, 1.0, 4.0] {
                specs.push(RadialSystemSpec::b2(k, t, false));
                specs.push(RadialSystemSpec::b2(k, t, true));
                let p = k / 2;
                specs.push(RadialSystemSpec::b4_exact(k, p, t));
                specs.push(RadialSystemSpec::b4_coexact(k, p, CoexactSign::Minus, t));
            }
        }
        for spec in &specs {
            let (_, profile) = steklov_eigen_profile(spec).unwrap();
            let res = ode_residual(&profile, spec, &SAMPLE_R);
            assert!(res < 1e-10, "{spec:?}: residual {res:e}");
        }
    }

    #[test]
    fn closed_form_profile_satisfies_the_ode() {
        for k in 1..=6u32 {
            for &t in &[0.5, 2.0, 5.0] {
                for conjugate in [false, true] {
                    let profile = b2_closed_form_profile(k, t, conjugate, 160).unwrap();
                    let spec = RadialSystemSpec::b2(k, t, conjugate);
                    let res = ode_residual(&profile, &spec, &SAMPLE_R);
                    assert!(res < 1e-9, "k = {k}, t = {t}: residual {res:e}");
                    // Its boundary slope reproduces the closed-form eigenvalue.
                    let closed = b2_steklov_eigenvalue(
                        k,
                        b2_family_for(conjugate, k),
                        MagneticParameter::new(t).unwrap(),
                    )
                    .unwrap();
                    assert_rel(profile.eval_q_prime(1.0), closed, 1e-10);
                }
            }
        }
    }

    #[test]
    fn w_branch_matches_direct_tail_evaluation() {
        // The series W branch must be proportional to the closed form
        // e^{st·r²/2}·R_k(−st·r²)/r^{2k} with a constant ratio in r.
        for k in 1..=4u32 {
            for &(t, conjugate) in &[(0.7, false), (0.7, true), (3.0, false)] {
                let spec = RadialSystemSpec::b2(k, t, conjugate);
                let (_, w) = series_solve(&spec, 160).unwrap();
                let w = w.unwrap();
                let st = if conjugate { t } else { -t };
                let direct = |r: f64| -> f64 {
                    let tail =
                        crate::specfun::exp_taylor_remainder(k, -st * r * r).unwrap();
                    (0.5 * st * r * r).exp() * tail / r.powi(2 * k as i32)
                };
                // Q component carries −Ŵ/2·r^k.
                let base = w.eval_q(0.3) / (-0.5 * 0.3f64.powi(k as i32) * direct(0.3));
                for &r in &[0.55, 0.8, 1.0] {
                    let ratio = w.eval_q(r) / (-0.5 * r.powi(k as i32) * direct(r));
                    assert_rel(ratio, base, 1e-9);
                }
            }
        }
    }

    #[test]
    fn reconcile_agrees_at_reference_points() {
        for &(k, p, t) in &[(1u32, 0u32, 1.0f64), (2, 1, 0.5), (3, 3, 2.0)] {
            let rec = reconcile_b4_exact(k, p, t).unwrap();
            assert!(rec.theorem_matches, "{rec:?}");
            assert!(rec.proof_matches, "{rec:?}");
        }
    }

    #[test]
    fn galerkin_converges_to_closed_form() {
        let v = rayleigh_galerkin_b2(&GalerkinConfig::new(1, 0.0, 10)).unwrap();
        assert_rel(v, 2.0, 1e-6);
        let v = rayleigh_galerkin_b2(&GalerkinConfig::new(1, 1.0, 40)).unwrap();
        assert_rel(v, 1.0 / (std::f64::consts::E - 2.0), 1e-6);
        let v = rayleigh_galerkin_b2(&GalerkinConfig::new(0, 2.0, 40)).unwrap();
        assert_rel(v, 2.626_070_570_998_662_607_3, 1e-6);
    }

    #[test]
    fn galerkin_is_monotone_from_above() {
        let exact = 1.0 / (std::f64::consts::E - 2.0);
        let mut prev = f64::INFINITY;
        for n in [4usize, 8, 16, 32] {
            let v = rayleigh_galerkin_b2(&GalerkinConfig::new(1, 1.0, n)).unwrap();
            assert!(v >= exact - 1e-9, "N = {n}: {v}");
            assert!(v <= prev + 1e-12, "N = {n}: {v} after {prev}");
            prev = v;
        }
    }

    fn lcg_points(n_dim: usize, count: usize) -> Vec<Vec<f64>> {
        // Deterministic interior sample points in the ball of radius 0.9.
        let mut state = 0x2545F4914F6CDD1Du64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64) / ((1u64 << 53) as f64) * 2.0 - 1.0
        };
        let mut points = Vec::new();
        while points.len() < count {
            let x: Vec<f64> = (0..2 * n_dim).map(|_| next()).collect();
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm > 1e-3 {
                points.push(x.iter().map(|v| 0.9 * v / norm * 0.9).collect());
            }
        }
        points
    }

    #[test]
    fn harmonic_extension_audit_passes() {
        for n in 1..=2usize {
            let report = verify_harmonic_extension_b2n(n, &lcg_points(n, 20)).unwrap();
            assert!(report.pass, "{report:?}");
            assert!(report.max_laplacian_residual < 1e-6);
            assert!(report.max_lie_residual < 1e-6);
            assert!(report.max_eta_residual < 1e-12);
        }
    }

    #[test]
    fn series_solve_rejects_short_truncation() {
        assert!(series_solve(&RadialSystemSpec::b2(1, 1.0, false), 10).is_err());
    }
}
