//! Figure-data regeneration: eigenvalue branch curves over t, exported as
//! CSV (and rendered to SVG by the CLI). Keeping the sampling and
//! serialization here lets the regeneration be audited bit-exactly against
//! direct formula evaluation.

use crate::error::{Error, Result};
use crate::spectra::{
    self, CoexactSign, Family, MagneticParameter, DEFAULT_K_MAX,
};

use serde::{Deserialize, Serialize};

/// Which figure to regenerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FigureKind {
    /// S³ 1-form branch curves over t ∈ [0, 5].
    Fig1Left,
    /// S³ first-eigenvalue curve over t ∈ [0, 12].
    Fig1Right,
    /// B² Steklov branch curves over t ∈ [0, 10].
    Fig2,
}

impl std::str::FromStr for FigureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fig1-left" => Ok(FigureKind::Fig1Left),
            "fig1-right" => Ok(FigureKind::Fig1Right),
            "fig2" => Ok(FigureKind::Fig2),
            other => Err(Error::InvalidArgument(format!("unknown figure: {other}"))),
        }
    }
}

impl FigureKind {
    /// Default t range (start, stop) of the figure.
    pub fn default_range(self) -> (f64, f64) {
        match self {
            FigureKind::Fig1Left => (0.0, 5.0),
            FigureKind::Fig1Right => (0.0, 12.0),
            FigureKind::Fig2 => (0.0, 10.0),
        }
    }

    /// Default branch cutoff for the multi-branch figures.
    pub fn default_k_max(self) -> u32 {
        match self {
            FigureKind::Fig1Left => 3,
            FigureKind::Fig1Right => DEFAULT_K_MAX,
            FigureKind::Fig2 => 5,
        }
    }
}

/// Default number of t samples per curve.
pub const DEFAULT_SAMPLES: usize = 256;

/// Sampled curve table; `None` cells mark excluded (pole) points, which break
/// the plotted polyline.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FigureData {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

/// Uniform sample grid, endpoints included.
pub fn sample_grid(start: f64, stop: f64, steps: usize) -> Result<Vec<f64>> {
    if steps < 2 || !start.is_finite() || !stop.is_finite() || stop <= start {
        return Err(Error::Config(format!(
            "bad sweep range [{start}, {stop}] with {steps} steps"
        )));
    }
    Ok((0..steps)
        .map(|i| start + i as f64 * (stop - start) / (steps - 1) as f64)
        .collect())
}

/// Regenerates the data behind one figure.
pub fn figure_data(
    kind: FigureKind,
    k_max: u32,
    t_start: f64,
    t_stop: f64,
    steps: usize,
) -> Result<FigureData> {
    let grid = sample_grid(t_start, t_stop, steps)?;
    match kind {
        FigureKind::Fig1Left => {
            let mut header = vec!["t".to_string()];
            let mut branches: Vec<(Family, u32, u32)> = Vec::new();
            for k in 1..=k_max {
                for p in 0..=k {
                    for family in [
                        Family::S3Exact,
                        Family::S3CoexactPlus,
                        Family::S3CoexactMinus,
                    ] {
                        header.push(format!("{}_k{}_p{}", short_family(family), k, p));
                        branches.push((family, k, p));
                    }
                }
            }
            let mut rows = Vec::with_capacity(grid.len());
            for &t in &grid {
                let mp = MagneticParameter::new(t)?;
                let mut row = Vec::with_capacity(branches.len() + 1);
                row.push(Some(t));
                for &(family, k, p) in &branches {
                    row.push(Some(s3_branch_value(family, k, p, mp)?));
                }
                rows.push(row);
            }
            Ok(FigureData { header, rows })
        }
        FigureKind::Fig1Right => {
            let header = vec![
                "t".to_string(),
                "value".to_string(),
                "family".to_string(),
                "k".to_string(),
                "p".to_string(),
            ];
            // The non-numeric label columns ride along as side data; store
            // numerically (family index) is avoided — instead emit the label
            // rows separately through to_csv via a parallel vector.
            let mut rows = Vec::with_capacity(grid.len());
            let mut labels = Vec::with_capacity(grid.len());
            for &t in &grid {
                let mp = MagneticParameter::new(t)?;
                let (value, mode) = spectra::s3_first_eigenvalue(mp, k_max)?;
                rows.push(vec![
                    Some(t),
                    Some(value),
                    None,
                    Some(mode.k as f64),
                    Some(mode.p.unwrap_or(0) as f64),
                ]);
                labels.push(mode.family.as_str().to_string());
            }
            Ok(FigureData {
                header,
                rows: attach_labels(rows, labels),
            })
        }
        FigureKind::Fig2 => {
            let mut header = vec!["t".to_string(), "k0".to_string()];
            for k in 1..=k_max {
                header.push(format!("plus_k{k}"));
                header.push(format!("minus_k{k}"));
            }
            let mut rows = Vec::with_capacity(grid.len());
            for &t in &grid {
                let mp = MagneticParameter::new(t)?;
                let mut row = Vec::with_capacity(2 * k_max as usize + 2);
                row.push(Some(t));
                row.push(Some(spectra::b2_steklov_eigenvalue(0, Family::B2KZero, mp)?));
                for k in 1..=k_max {
                    row.push(Some(spectra::b2_steklov_eigenvalue(k, Family::B2Plus, mp)?));
                    row.push(Some(spectra::b2_steklov_eigenvalue(k, Family::B2Minus, mp)?));
                }
                rows.push(row);
            }
            Ok(FigureData { header, rows })
        }
    }
}

fn short_family(family: Family) -> &'static str {
    match family {
        Family::S3Exact => "exact",
        Family::S3CoexactPlus => "coplus",
        Family::S3CoexactMinus => "cominus",
        other => other.as_str(),
    }
}

/// Direct single-branch evaluation used both by the figure sampler and by
/// the regeneration audit.
pub fn s3_branch_value(family: Family, k: u32, p: u32, t: MagneticParameter) -> Result<f64> {
    match family {
        Family::S3Exact => spectra::s3_oneform_exact(k, p, t),
        Family::S3CoexactPlus => spectra::s3_oneform_coexact(k, p, CoexactSign::Plus, t),
        Family::S3CoexactMinus => spectra::s3_oneform_coexact(k, p, CoexactSign::Minus, t),
        other => Err(Error::InvalidArgument(format!(
            "not an S³ 1-form family: {other:?}"
        ))),
    }
}

fn attach_labels(rows: Vec<Vec<Option<f64>>>, labels: Vec<String>) -> Vec<Vec<Option<f64>>> {
    // Encode the family label as an index into FAMILY_ORDER so the cell stays
    // numeric; to_csv turns it back into the string.
    rows.into_iter()
        .zip(labels)
        .map(|(mut row, label)| {
            let idx = FAMILY_ORDER
                .iter()
                .position(|f| f.as_str() == label)
                .expect("known family");
            row[2] = Some(idx as f64);
            row
        })
        .collect()
}

const FAMILY_ORDER: [Family; 11] = [
    Family::S1Function,
    Family::S1VolumeForm,
    Family::S3Exact,
    Family::S3CoexactPlus,
    Family::S3CoexactMinus,
    Family::B2KZero,
    Family::B2Plus,
    Family::B2Minus,
    Family::B4Exact,
    Family::B4CoexactPlus,
    Family::B4CoexactMinus,
];

/// Serializes figure data as CSV. Floats use the shortest round-trip
/// representation (lossless re-parse); missing cells are empty; the family
/// column of fig1-right is emitted as its label string.
pub fn to_csv(data: &FigureData) -> String {
    let family_col = data.header.iter().position(|h| h == "family");
    let mut out = String::new();
    out.push_str(&data.header.join(","));
    out.push('\n');
    for row in &data.rows {
        let mut fields = Vec::with_capacity(row.len());
        for (i, cell) in row.iter().enumerate() {
            match cell {
                None => fields.push(String::new()),
                Some(v) => {
                    if Some(i) == family_col {
                        fields.push(FAMILY_ORDER[*v as usize].as_str().to_string());
                    } else if data.header[i] == "k" || data.header[i] == "p" {
                        fields.push(format!("{}", *v as i64));
                    } else {
                        fields.push(format!("{v}"));
                    }
                }
            }
        }
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}
