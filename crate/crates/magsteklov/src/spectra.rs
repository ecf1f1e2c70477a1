//! Closed-form eigenvalue families: magnetic Hodge Laplacian on S¹ and S³,
//! magnetic Steklov operator on 1-forms over B² and B⁴, spectrum enumeration
//! with multiplicities, and first-eigenvalue extraction.

use crate::error::{Error, Result};
use crate::specfun::{self, LaguerreArgs};

use serde::{Deserialize, Serialize};

/// Default enumeration cutoff for first-eigenvalue queries. For t <= 12 the
/// minimizing k grows roughly linearly in t, so 50 leaves ample margin; the
/// argmin-not-at-cutoff check guards it a posteriori.
pub const DEFAULT_K_MAX: u32 = 50;

/// The real coupling strength t >= 0 multiplying the fixed Killing potential.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct MagneticParameter(f64);

impl MagneticParameter {
    pub fn new(t: f64) -> Result<Self> {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "magnetic parameter must be finite and >= 0, got {t}"
            )));
        }
        Ok(Self(t))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Model space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    S1,
    S3,
    B2,
    B4,
}

impl std::str::FromStr for Domain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "s1" => Ok(Domain::S1),
            "s3" => Ok(Domain::S3),
            "b2" => Ok(Domain::B2),
            "b4" => Ok(Domain::B4),
            other => Err(Error::InvalidArgument(format!("unknown domain: {other}"))),
        }
    }
}

impl std::fmt::Display for Domain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Domain::S1 => "s1",
            Domain::S3 => "s3",
            Domain::B2 => "b2",
            Domain::B4 => "b4",
        };
        f.write_str(s)
    }
}

/// Eigenvalue branch families across all model spaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    S1Function,
    S1VolumeForm,
    S3Exact,
    S3CoexactPlus,
    S3CoexactMinus,
    B2KZero,
    B2Plus,
    B2Minus,
    B4Exact,
    B4CoexactPlus,
    B4CoexactMinus,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::S1Function => "s1_function",
            Family::S1VolumeForm => "s1_volume_form",
            Family::S3Exact => "s3_exact",
            Family::S3CoexactPlus => "s3_coexact_plus",
            Family::S3CoexactMinus => "s3_coexact_minus",
            Family::B2KZero => "b2_k_zero",
            Family::B2Plus => "b2_plus",
            Family::B2Minus => "b2_minus",
            Family::B4Exact => "b4_exact",
            Family::B4CoexactPlus => "b4_coexact_plus",
            Family::B4CoexactMinus => "b4_coexact_minus",
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Sign selector for the co-exact branch pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoexactSign {
    Plus,
    Minus,
}

/// Which printed form of the B⁴ exact-family eigenvalue to evaluate. The two
/// are reconciled against the radial ODE oracle (module `oracle`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum B4ExactVariant {
    /// The bracketed expression as stated with the theorem.
    TheoremStatement,
    /// The Q'(1) expression from the accompanying derivation.
    ProofQPrime,
}

/// Discrete label of an eigenvalue branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModeIndex {
    pub family: Family,
    pub k: u32,
    /// Secondary index, 0 <= p <= k where present (S³ and B⁴ families).
    pub p: Option<u32>,
}

/// One eigenvalue with its branch label and multiplicity (None = the source
/// material specifies no multiplicity, as for the B⁴ families).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenvalueRecord {
    pub value: f64,
    pub mode: ModeIndex,
    pub multiplicity: Option<u32>,
}

/// Sorted multiset of eigenvalue records below an enumeration cutoff.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Spectrum {
    /// Records sorted ascending by value.
    pub records: Vec<EigenvalueRecord>,
    /// Enumeration bound k_max used to build the list.
    pub cutoff: u32,
    /// Modes excluded because a Laguerre denominator vanished at this t
    /// (reported, never interpolated over).
    pub excluded: Vec<ModeIndex>,
}

impl Spectrum {
    fn finish(mut records: Vec<EigenvalueRecord>, cutoff: u32, excluded: Vec<ModeIndex>) -> Self {
        records.sort_by(|a, b| a.value.total_cmp(&b.value));
        Spectrum {
            records,
            cutoff,
            excluded,
        }
    }

    /// Smallest record, with the cutoff-insufficiency check: if the argmin
    /// sits at k = k_max the true minimum may lie beyond the enumeration.
    pub fn min_record(&self) -> Result<EigenvalueRecord> {
        let rec = self
            .records
            .first()
            .copied()
            .ok_or_else(|| Error::InvalidArgument("empty spectrum".into()))?;
        if rec.mode.k == self.cutoff {
            return Err(Error::CutoffInsufficient { k_max: self.cutoff });
        }
        Ok(rec)
    }
}

fn check_kp(k: u32, p: u32) -> Result<()> {
    if p > k {
        return Err(Error::InvalidArgument(format!(
            "secondary index out of range: p = {p} > k = {k}"
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// S¹
// ---------------------------------------------------------------------------

/// Magnetic Hodge-Laplacian spectrum on S¹: (k ± t)² for 0 <= k <= k_max.
/// For degree 1 the k = 0 entry is the volume-form eigenvalue t².
pub fn s1_hodge_spectrum(t: MagneticParameter, k_max: u32, degree: u8) -> Result<Spectrum> {
    if degree > 1 {
        return Err(Error::InvalidArgument(format!(
            "S¹ degree must be 0 or 1, got {degree}"
        )));
    }
    let t = t.value();
    let mut records = Vec::with_capacity(2 * k_max as usize + 1);
    let zero_family = if degree == 1 {
        Family::S1VolumeForm
    } else {
        Family::S1Function
    };
    records.push(EigenvalueRecord {
        value: t * t,
        mode: ModeIndex {
            family: zero_family,
            k: 0,
            p: None,
        },
        multiplicity: Some(1),
    });
    for k in 1..=k_max {
        let kf = k as f64;
        for value in [(kf + t) * (kf + t), (kf - t) * (kf - t)] {
            records.push(EigenvalueRecord {
                value,
                mode: ModeIndex {
                    family: Family::S1Function,
                    k,
                    p: None,
                },
                multiplicity: Some(1),
            });
        }
    }
    Ok(Spectrum::finish(records, k_max, Vec::new()))
}

// ---------------------------------------------------------------------------
// S³
// ---------------------------------------------------------------------------

/// Magnetic Hodge-Laplacian eigenvalue on S³ functions:
/// k(k+2) + 2(2p-k)t + t².
pub fn s3_function_eigenvalue(k: u32, p: u32, t: MagneticParameter) -> Result<f64> {
    check_kp(k, p)?;
    let (kf, pf, t) = (k as f64, p as f64, t.value());
    Ok(kf * (kf + 2.0) + 2.0 * (2.0 * pf - kf) * t + t * t)
}

/// Exact-family 1-form eigenvalue on S³ (k >= 1): same closed form as the
/// function spectrum.
pub fn s3_oneform_exact(k: u32, p: u32, t: MagneticParameter) -> Result<f64> {
    if k < 1 {
        return Err(Error::InvalidArgument("S³ exact family needs k >= 1".into()));
    }
    s3_function_eigenvalue(k, p, t)
}

/// Co-exact 1-form eigenvalue on S³ (k >= 1): (k+1)² + 2t(2p-k±1) + t².
pub fn s3_oneform_coexact(k: u32, p: u32, sign: CoexactSign, t: MagneticParameter) -> Result<f64> {
    if k < 1 {
        return Err(Error::InvalidArgument(
            "S³ co-exact family needs k >= 1".into(),
        ));
    }
    check_kp(k, p)?;
    let (kf, pf, t) = (k as f64, p as f64, t.value());
    let s = match sign {
        CoexactSign::Plus => 1.0,
        CoexactSign::Minus => -1.0,
    };
    Ok((kf + 1.0) * (kf + 1.0) + 2.0 * t * (2.0 * pf - kf + s) + t * t)
}

/// Full 1-form spectrum on S³ up to the cutoff, with multiplicities k(k+2).
pub fn s3_oneform_spectrum(t: MagneticParameter, k_max: u32) -> Result<Spectrum> {
    if k_max < 1 {
        return Err(Error::InvalidArgument("S³ spectrum needs k_max >= 1".into()));
    }
    let mut records = Vec::new();
    for k in 1..=k_max {
        let mult = Some(k * (k + 2));
        for p in 0..=k {
            records.push(EigenvalueRecord {
                value: s3_oneform_exact(k, p, t)?,
                mode: ModeIndex {
                    family: Family::S3Exact,
                    k,
                    p: Some(p),
                },
                multiplicity: mult,
            });
            for (family, sign) in [
                (Family::S3CoexactPlus, CoexactSign::Plus),
                (Family::S3CoexactMinus, CoexactSign::Minus),
            ] {
                records.push(EigenvalueRecord {
                    value: s3_oneform_coexact(k, p, sign, t)?,
                    mode: ModeIndex {
                        family,
                        k,
                        p: Some(p),
                    },
                    multiplicity: mult,
                });
            }
        }
    }
    Ok(Spectrum::finish(records, k_max, Vec::new()))
}

/// First 1-form eigenvalue on S³.
pub fn s3_first_eigenvalue(t: MagneticParameter, k_max: u32) -> Result<(f64, ModeIndex)> {
    let rec = s3_oneform_spectrum(t, k_max)?.min_record()?;
    Ok((rec.value, rec.mode))
}

// ---------------------------------------------------------------------------
// B²
// ---------------------------------------------------------------------------

/// Magnetic Steklov eigenvalue on B² 1-forms.
///
/// k = 0: t·coth(t/2); k >= 1: (±t)^{k+1} / (k!·(e^{±t} − Σ_{j<=k}(±t)^j/j!)),
/// with the denominator in tail form. Writing the tail as
/// (±t)^{k+1}/(k+1)!·F(k,±t) with the strictly positive confluent factor F
/// reduces both branches to (k+1)/F(k,±t), which keeps them manifestly
/// positive and overflow-free. At t = 0 the limits are 2 and k+1.
pub fn b2_steklov_eigenvalue(k: u32, family: Family, t: MagneticParameter) -> Result<f64> {
    let t = t.value();
    match family {
        Family::B2KZero => {
            if k != 0 {
                return Err(Error::InvalidArgument(
                    "B2KZero is the k = 0 branch only".into(),
                ));
            }
            if t < 1e-7 {
                // t·coth(t/2) = 2 + t²/6 + O(t⁴).
                Ok(2.0 + t * t / 6.0)
            } else {
                Ok(t * (0.5 * t).cosh() / (0.5 * t).sinh())
            }
        }
        Family::B2Plus | Family::B2Minus => {
            if k < 1 {
                return Err(Error::InvalidArgument(
                    "B² signed branches need k >= 1".into(),
                ));
            }
            let signed_t = if family == Family::B2Plus { t } else { -t };
            Ok((k as f64 + 1.0) / specfun::exp_tail_factor(k, signed_t))
        }
        other => Err(Error::InvalidArgument(format!(
            "not a B² family: {other:?}"
        ))),
    }
}

/// Full B² Steklov spectrum up to the cutoff: the k = 0 branch plus both
/// signed branches for each k >= 1, all simple.
pub fn b2_steklov_spectrum(t: MagneticParameter, k_max: u32) -> Result<Spectrum> {
    let mut records = vec![EigenvalueRecord {
        value: b2_steklov_eigenvalue(0, Family::B2KZero, t)?,
        mode: ModeIndex {
            family: Family::B2KZero,
            k: 0,
            p: None,
        },
        multiplicity: Some(1),
    }];
    for k in 1..=k_max {
        for family in [Family::B2Plus, Family::B2Minus] {
            records.push(EigenvalueRecord {
                value: b2_steklov_eigenvalue(k, family, t)?,
                mode: ModeIndex { family, k, p: None },
                multiplicity: Some(1),
            });
        }
    }
    Ok(Spectrum::finish(records, k_max, Vec::new()))
}

// ---------------------------------------------------------------------------
// B⁴
// ---------------------------------------------------------------------------

fn lag(nu: f64, alpha: f64, x: f64) -> Result<(f64, f64)> {
    specfun::laguerre_scaled(LaguerreArgs::new(nu, alpha, x))
}

/// Ratio num/den for (value, series-scale) pairs, with the pole guard
/// |den| < 1e-12·scale. The scale is the largest term of the denominator's
/// defining sum, so a small-t denominator that is genuinely ~t^m (computed
/// without cancellation) passes, while a cancellation zero at moderate t
/// trips the guard.
fn lag_ratio(num: (f64, f64), den: (f64, f64), t: f64) -> Result<f64> {
    if den.0.abs() < 1e-12 * den.1.max(f64::MIN_POSITIVE) {
        return Err(Error::Pole { t });
    }
    Ok(num.0 / den.0)
}

/// Magnetic Steklov eigenvalue on B⁴, exact family, k >= 1, 0 <= p <= k.
///
/// Both printed forms are evaluated verbatim so they can be reconciled
/// against the radial ODE oracle; agreement (established there) makes either
/// usable as the canonical curve. At t = 0 both degenerate to 0/0 and the
/// analytic limit k(k+2)/(k+1) is returned instead.
pub fn b4_steklov_exact(
    k: u32,
    p: u32,
    t: MagneticParameter,
    variant: B4ExactVariant,
) -> Result<f64> {
    if k < 1 {
        return Err(Error::InvalidArgument("B⁴ exact family needs k >= 1".into()));
    }
    check_kp(k, p)?;
    let t = t.value();
    let (kf, pf) = (k as f64, p as f64);
    if t == 0.0 {
        return Ok(kf * (kf + 2.0) / (kf + 1.0));
    }
    match variant {
        B4ExactVariant::ProofQPrime => {
            let r1 = lag_ratio(
                lag(kf - 1.5 - pf, 1.0 - kf, t)?,
                lag(kf - 0.5 - pf, -kf, t)?,
                t,
            )?;
            let r2 = lag_ratio(
                lag(kf - 0.5 - pf, -(kf + 1.0), t)?,
                lag(kf + 0.5 - pf, -(kf + 2.0), t)?,
                t,
            )?;
            Ok(-(kf + 2.0) * t * r1 / (kf + 1.0)
                - kf * t * r2 / (kf + 1.0)
                - (kf * kf + kf * t + 2.0 * kf + t) / (kf + 1.0))
        }
        B4ExactVariant::TheoremStatement => {
            let r1 = lag_ratio(
                lag(kf - 0.5 - pf, -(kf + 2.0), t)?,
                lag(kf + 0.5 - pf, -(kf + 2.0), t)?,
                t,
            )?;
            let r2 = lag_ratio(
                lag(kf - 1.5 - pf, -kf, t)?,
                lag(kf - 0.5 - pf, -kf, t)?,
                t,
            )?;
            Ok((kf * (pf + 1.5) * r1 + (kf + 2.0) * (pf + 0.5) * r2 + kf * kf
                - (2.0 * pf + t) * (kf + 1.0)
                - 1.0)
                / (kf + 1.0))
        }
    }
}

/// Magnetic Steklov eigenvalue on B⁴, co-exact family, k >= 1, 0 <= p <= k:
/// −2t·L^{(−k)}_{k−1±1/2−p}(t) / L^{(−(k+1))}_{k±1/2−p}(t) − (k+t+1).
/// At t = 0 the analytic limit is k+1.
pub fn b4_steklov_coexact(k: u32, p: u32, sign: CoexactSign, t: MagneticParameter) -> Result<f64> {
    if k < 1 {
        return Err(Error::InvalidArgument(
            "B⁴ co-exact family needs k >= 1".into(),
        ));
    }
    check_kp(k, p)?;
    let t = t.value();
    let (kf, pf) = (k as f64, p as f64);
    if t == 0.0 {
        return Ok(kf + 1.0);
    }
    let half = match sign {
        CoexactSign::Plus => 0.5,
        CoexactSign::Minus => -0.5,
    };
    let ratio = lag_ratio(
        lag(kf - 1.0 + half - pf, -kf, t)?,
        lag(kf + half - pf, -(kf + 1.0), t)?,
        t,
    )?;
    Ok(-2.0 * t * ratio - (kf + t + 1.0))
}

/// Full B⁴ Steklov 1-form spectrum up to the cutoff. Multiplicities are not
/// specified by the source formulas and are emitted as None; modes whose
/// Laguerre denominator vanishes at this t are reported as excluded.
pub fn b4_steklov_spectrum(t: MagneticParameter, k_max: u32) -> Result<Spectrum> {
    if k_max < 1 {
        return Err(Error::InvalidArgument("B⁴ spectrum needs k_max >= 1".into()));
    }
    let mut records = Vec::new();
    let mut excluded = Vec::new();
    let mut push = |value: Result<f64>, mode: ModeIndex, excluded: &mut Vec<ModeIndex>| match value
    {
        Ok(value) => {
            records.push(EigenvalueRecord {
                value,
                mode,
                multiplicity: None,
            });
            Ok(())
        }
        Err(Error::Pole { .. }) => {
            excluded.push(mode);
            Ok(())
        }
        Err(e) => Err(e),
    };
    for k in 1..=k_max {
        for p in 0..=k {
            push(
                b4_steklov_exact(k, p, t, B4ExactVariant::ProofQPrime),
                ModeIndex {
                    family: Family::B4Exact,
                    k,
                    p: Some(p),
                },
                &mut excluded,
            )?;
            for (family, sign) in [
                (Family::B4CoexactPlus, CoexactSign::Plus),
                (Family::B4CoexactMinus, CoexactSign::Minus),
            ] {
                push(
                    b4_steklov_coexact(k, p, sign, t),
                    ModeIndex {
                        family,
                        k,
                        p: Some(p),
                    },
                    &mut excluded,
                )?;
            }
        }
    }
    Ok(Spectrum::finish(records, k_max, excluded))
}

/// The B⁴ lowest-eigenvalue threshold data.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct B4Lowest {
    /// Oracle-certified curve for the (k=1, p=0) exact branch — the branch
    /// whose crossing of 3/2 defines the t* ≈ 2.99 threshold.
    pub value: f64,
    /// The printed lowest-eigenvalue expression taken verbatim, including its
    /// L^{(−1)}_{−1/2} denominator (which the derivation writes as
    /// L^{(−1)}_{1/2}; the verbatim form shares the t→0 limit 3/2 but departs
    /// from the certified curve for larger t).
    pub printed_verbatim: f64,
    /// Minimum over all enumerated B⁴ branches at the default cutoff, as a
    /// consistency check.
    pub enumerated_min: f64,
    pub enumerated_mode: ModeIndex,
}

/// Lowest-eigenvalue bundle for B⁴ at coupling t.
pub fn b4_lowest_eigenvalue(t: MagneticParameter) -> Result<B4Lowest> {
    let value = b4_steklov_exact(1, 0, t, B4ExactVariant::ProofQPrime)?;
    let tv = t.value();
    let printed_verbatim = if tv == 0.0 {
        1.5
    } else {
        // −(3t/2)·L^{(0)}_{−1/2}/L^{(−1)}_{−1/2} − (t/2)·L^{(−2)}_{1/2}/L^{(−3)}_{3/2} − (2t+3)/2
        let r1 = lag_ratio(lag(-0.5, 0.0, tv)?, lag(-0.5, -1.0, tv)?, tv)?;
        let r2 = lag_ratio(lag(0.5, -2.0, tv)?, lag(1.5, -3.0, tv)?, tv)?;
        -1.5 * tv * r1 - 0.5 * tv * r2 - (2.0 * tv + 3.0) / 2.0
    };
    let rec = b4_steklov_spectrum(t, DEFAULT_K_MAX)?.min_record()?;
    Ok(B4Lowest {
        value,
        printed_verbatim,
        enumerated_min: rec.value,
        enumerated_mode: rec.mode,
    })
}

// ---------------------------------------------------------------------------
// Uniform front-end
// ---------------------------------------------------------------------------

/// Spectrum enumeration for any model space (S¹ defaults to degree 1, whose
/// record set coincides with degree 0 except for the volume-form label).
pub fn spectrum(domain: Domain, t: MagneticParameter, k_max: u32) -> Result<Spectrum> {
    match domain {
        Domain::S1 => s1_hodge_spectrum(t, k_max, 1),
        Domain::S3 => s3_oneform_spectrum(t, k_max),
        Domain::B2 => b2_steklov_spectrum(t, k_max),
        Domain::B4 => b4_steklov_spectrum(t, k_max),
    }
}

/// First eigenvalue over all branches of the domain, with its mode. Errors
/// with cutoff-insufficient if the argmin sits at k = k_max.
pub fn first_eigenvalue(domain: Domain, t: MagneticParameter, k_max: u32) -> Result<(f64, ModeIndex)> {
    let rec = spectrum(domain, t, k_max)?.min_record()?;
    Ok((rec.value, rec.mode))
}
