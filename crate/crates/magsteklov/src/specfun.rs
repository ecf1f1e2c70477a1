//! Special functions backing the closed-form spectra: log-gamma with sign
//! tracking, the regularized Kummer series, generalized Laguerre functions of
//! real degree (possibly negative integer upper index), and tail-form
//! exponential Taylor remainders.

use crate::error::{Error, Result};

use std::f64::consts::PI;

/// Lanczos approximation, g = 7, 9 coefficients (double precision).
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

const LANCZOS_G: f64 = 7.0;

fn lanczos_ln_gamma(x: f64) -> f64 {
    // Valid for x >= 0.5.
    let z = x - 1.0;
    let mut a = LANCZOS_COEFFS[0];
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        a += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + a.ln()
}

/// ln |Gamma(x)| together with the sign of Gamma(x).
///
/// Negative non-integer arguments go through the reflection formula
/// Gamma(x) Gamma(1-x) = pi / sin(pi x) with the sign tracked separately.
/// At the poles (non-positive integers) returns (inf, 0.0).
pub fn ln_gamma_sign(x: f64) -> (f64, f64) {
    if x >= 0.5 {
        return (lanczos_ln_gamma(x), 1.0);
    }
    let n = x.floor();
    let frac = x - n;
    if frac == 0.0 {
        return (f64::INFINITY, 0.0);
    }
    // sin(pi x) = (-1)^n sin(pi frac), and Gamma(1-x) > 0 here.
    let sin_frac = (PI * frac).sin();
    let sign = if (n as i64).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let ln = PI.ln() - sin_frac.ln() - lanczos_ln_gamma(1.0 - x);
    (ln, sign)
}

/// 1/Gamma(x), entire in x (0 at the poles).
pub fn inv_gamma(x: f64) -> f64 {
    let (ln, sign) = ln_gamma_sign(x);
    if sign == 0.0 {
        return 0.0;
    }
    sign * (-ln).exp()
}

const KUMMER_MAX_TERMS: usize = 10_000;
const KUMMER_REL_TOL: f64 = 1e-16;

/// Regularized confluent hypergeometric series
/// M(a,b,x) = sum_{n>=0} (a)_n x^n / (Gamma(b+n) n!).
///
/// Entire in b: terms where b+n is a non-positive integer contribute zero
/// through 1/Gamma. Summation stops once the tail bound drops below 1e-16
/// relative, with a hard cap of 10 000 terms.
pub fn regularized_kummer(a: f64, b: f64, x: f64) -> Result<f64> {
    regularized_kummer_scaled(a, b, x).map(|(v, _)| v)
}

/// As regularized_kummer, but also returns the largest absolute term of the
/// series — the natural scale against which a small sum indicates genuine
/// cancellation rather than a small no-cancellation value.
pub(crate) fn regularized_kummer_scaled(a: f64, b: f64, x: f64) -> Result<(f64, f64)> {
    if !a.is_finite() || !b.is_finite() || !x.is_finite() || x < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "regularized_kummer requires finite a, b and x >= 0, got ({a}, {b}, {x})"
        )));
    }
    if x == 0.0 {
        let v = inv_gamma(b);
        return Ok((v, v.abs()));
    }
    // The 1/Gamma(b+n) factors are carried by the recursion
    // g_{n+1} = g_n/(b+n) from a single gamma evaluation; per-term gamma
    // calls would inject independent ~1e-14 errors that the alternating sum
    // amplifies by its cancellation factor. For non-positive integer b the
    // leading terms vanish exactly through 1/Gamma, so summation starts at
    // n0 = 1-b where Gamma(b+n0) = Gamma(1) = 1; past that point b+n > 0 and
    // the recursion never divides by zero (nor does it for non-integer b).
    let (n0, mut g) = if b <= 0.0 && b == b.floor() {
        ((1.0 - b) as usize, 1.0)
    } else {
        (0, inv_gamma(b))
    };
    // c = (a)_n x^n / n!, carried as one factor to avoid overflow of (a)_n alone.
    let mut c = 1.0;
    for j in 0..n0 {
        let jf = j as f64;
        // (a)_{n0} hit zero: every surviving term vanishes.
        if a + jf == 0.0 {
            return Ok((0.0, 0.0));
        }
        c *= (a + jf) * x / (jf + 1.0);
    }
    let mut sum = 0.0;
    let mut scale: f64 = 0.0;
    let mut last_tail = f64::INFINITY;
    for n in n0..KUMMER_MAX_TERMS {
        let nf = n as f64;
        let term = c * g;
        sum += term;
        scale = scale.max(term.abs());
        // Terminating series: (a)_{n+1} = 0.
        if a + nf == 0.0 {
            return Ok((sum, scale));
        }
        c *= (a + nf) * x / (nf + 1.0);
        g /= b + nf;
        // Tail estimate |t_{n+1}|/(1 - rho) with term ratio rho; only trusted
        // once b+n has passed all 1/Gamma zeros, so no later term can revive.
        if b + nf + 1.0 > 1.0 {
            let next = (c * g).abs();
            let rho = (x * (a + nf + 1.0) / ((nf + 2.0) * (b + nf + 1.0))).abs();
            if rho < 0.5 {
                last_tail = next / (1.0 - rho);
                if last_tail <= KUMMER_REL_TOL * sum.abs().max(f64::MIN_POSITIVE) {
                    return Ok((sum, scale));
                }
            }
        }
    }
    Err(Error::Accuracy {
        tail: last_tail,
        terms: KUMMER_MAX_TERMS,
    })
}

/// Arguments of a generalized Laguerre function L_nu^(alpha)(x).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaguerreArgs {
    /// Real degree; half-integers (possibly negative) in all in-scope uses.
    pub nu: f64,
    /// Real upper index; integers (possibly negative) in all in-scope uses.
    pub alpha: f64,
    /// Argument, >= 0.
    pub x: f64,
}

impl LaguerreArgs {
    pub fn new(nu: f64, alpha: f64, x: f64) -> Self {
        Self { nu, alpha, x }
    }
}

/// Generalized Laguerre function of real degree,
/// L_nu^(alpha)(x) = [Gamma(nu+alpha+1)/Gamma(nu+1)] M(-nu, alpha+1, x).
///
/// nu+1 and nu+alpha+1 must not be non-positive integers (gamma poles); the
/// in-scope eigenvalue formulas only use half-integer nu, which never hits
/// them.
pub fn laguerre(args: LaguerreArgs) -> Result<f64> {
    laguerre_scaled(args).map(|(v, _)| v)
}

/// As laguerre, but also returns the largest absolute term of the underlying
/// sum (with the gamma prefactor applied). A value tiny against that scale
/// means the sum cancelled — the signature of a genuine Laguerre zero.
pub fn laguerre_scaled(args: LaguerreArgs) -> Result<(f64, f64)> {
    let LaguerreArgs { nu, alpha, x } = args;
    if !nu.is_finite() || !alpha.is_finite() || !x.is_finite() || x < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "laguerre requires finite nu, alpha and x >= 0, got ({nu}, {alpha}, {x})"
        )));
    }
    if nu >= 0.0 && nu == nu.floor() && nu <= 170.0 {
        // Non-negative integer degree: ordinary Laguerre polynomial. The
        // terminating sum sidesteps the gamma-ratio poles that the general
        // representation hits at integer nu with very negative alpha.
        let deg = nu as usize;
        let mut sum = 0.0;
        let mut scale: f64 = 0.0;
        for i in 0..=deg {
            // binom(nu+alpha, nu-i) = prod_{m=1}^{nu-i} (alpha+i+m)/m.
            let mut binom = 1.0;
            for m in 1..=(deg - i) {
                binom *= (alpha + (i + m) as f64) / m as f64;
            }
            let mut xpow_fact = 1.0;
            for m in 1..=i {
                xpow_fact *= x / m as f64;
            }
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            let term = sign * binom * xpow_fact;
            sum += term;
            scale = scale.max(term.abs());
        }
        return Ok((sum, scale));
    }
    let (ln_num, s_num) = ln_gamma_sign(nu + alpha + 1.0);
    if s_num == 0.0 {
        return Err(Error::GammaPole(nu + alpha + 1.0));
    }
    let (ln_den, s_den) = ln_gamma_sign(nu + 1.0);
    if s_den == 0.0 {
        return Err(Error::GammaPole(nu + 1.0));
    }
    let (m, m_scale) = regularized_kummer_scaled(-nu, alpha + 1.0, x)?;
    let prefactor = (ln_num - ln_den).exp();
    Ok((s_num * s_den * prefactor * m, prefactor * m_scale))
}

/// d/dx L_nu^(alpha)(x) = -L_{nu-1}^(alpha+1)(x).
pub fn laguerre_dx(args: LaguerreArgs) -> Result<f64> {
    laguerre(LaguerreArgs::new(args.nu - 1.0, args.alpha + 1.0, args.x)).map(|v| -v)
}

const EXP_REMAINDER_MAX_K: u32 = 170;

/// Taylor remainder of the exponential, e^t - sum_{j<=k} t^j/j!, computed as
/// the tail series sum_{j>k} t^j/j! — never as the catastrophic subtraction.
///
/// For t < 0 the tail itself alternates, so it is evaluated through the
/// Kummer transformation 1F1(1,k+2,t) = e^t 1F1(k+1,k+2,-t), whose series has
/// all-positive terms. Accurate to ~1e-14 relative for |t| <= 50.
pub fn exp_taylor_remainder(k: u32, t: f64) -> Result<f64> {
    if k > EXP_REMAINDER_MAX_K {
        return Err(Error::InvalidArgument(format!(
            "exp_taylor_remainder requires k <= {EXP_REMAINDER_MAX_K}, got {k}"
        )));
    }
    if !t.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "exp_taylor_remainder requires finite t, got {t}"
        )));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    // t^{k+1}/(k+1)! as an iterated product, then the strictly positive
    // confluent factor; the sign lives entirely in the leading power.
    let mut lead = 1.0;
    for j in 1..=(k + 1) {
        lead *= t / j as f64;
    }
    Ok(lead * exp_tail_factor(k, t))
}

/// The positive factor F with sum_{j>k} t^j/j! = t^{k+1}/(k+1)! * F,
/// i.e. F = 1F1(1, k+2, t). Strictly positive for all real t.
pub(crate) fn exp_tail_factor(k: u32, t: f64) -> f64 {
    let kp1 = (k + 1) as f64;
    if t == 0.0 {
        return 1.0;
    }
    if t > 0.0 {
        // All-positive series: term_{m} = term_{m-1} * t/(k+1+m).
        let mut f = 1.0;
        let mut term = 1.0;
        let mut m = 1.0;
        while m < 10_000.0 {
            term *= t / (kp1 + m);
            f += term;
            if term < 1e-17 * f {
                break;
            }
            m += 1.0;
        }
        f
    } else {
        // Kummer transform: 1F1(1,k+2,t) = e^t sum_m (k+1)/(k+1+m) (-t)^m/m!,
        // again all-positive terms.
        let s = -t;
        let mut f = 1.0;
        let mut base = 1.0;
        let mut m = 1.0;
        while m < 10_000.0 {
            base *= s / m;
            let term = kp1 / (kp1 + m) * base;
            f += term;
            if term < 1e-17 * f && m > s {
                break;
            }
            m += 1.0;
        }
        f * t.exp()
    }
}
