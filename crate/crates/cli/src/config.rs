//! Config-file loading, flag merging and gap-ratio resolution.
//!
//! A JSON config file may supply any flag by its long name; command-line
//! flags override file values. The dimensionless gap ratio may be spelled
//! four ways (`x`, `alpha`, the `epsilon`/`kT` pair, or `gamma`); exactly
//! one spelling must survive the merge. A gap source given on the command
//! line replaces every gap source from the file, so a file default can be
//! overridden under a different spelling without editing the file.

use erasure_core::reservoir::{alpha_from_gap_ratio, gamma_from_alpha};
use erasure_core::Error as CoreError;
use std::fmt;
use std::path::Path;
use thiserror::Error;

/// CLI failure classified by exit code: 1 verification, 2 usage,
/// 3 numerical.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numerical(String),
    #[error("{0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> Self {
        match err {
            CoreError::NoConvergence { .. } | CoreError::ToleranceNotMet { .. } => {
                CliError::Numerical(err.to_string())
            }
            _ => CliError::Usage(err.to_string()),
        }
    }
}

/// Values read from `--config PATH`, keyed by long flag name.
#[derive(Debug, Default)]
pub struct FileConfig {
    values: serde_json::Map<String, serde_json::Value>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let raw = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let parsed: serde_json::Value = serde_json::from_str(&raw)
            .map_err(|e| CliError::Usage(format!("invalid JSON in {}: {e}", path.display())))?;
        match parsed {
            serde_json::Value::Object(values) => Ok(Self { values }),
            _ => Err(CliError::Usage(format!(
                "config {} must hold a single JSON object",
                path.display()
            ))),
        }
    }

    pub fn f64(&self, key: &str) -> Result<Option<f64>, CliError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(serde_json::Value::Number(n)) => Ok(n.as_f64()),
            Some(other) => Err(bad_type(key, "a number", other)),
        }
    }

    pub fn usize(&self, key: &str) -> Result<Option<usize>, CliError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(serde_json::Value::Number(n)) => {
                n.as_u64().map(|v| Some(v as usize)).ok_or_else(|| {
                    bad_type(key, "a nonnegative integer", self.values.get(key).unwrap())
                })
            }
            Some(other) => Err(bad_type(key, "a nonnegative integer", other)),
        }
    }

    pub fn u64(&self, key: &str) -> Result<Option<u64>, CliError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(serde_json::Value::Number(n)) => n.as_u64().map(Some).ok_or_else(|| {
                bad_type(key, "a nonnegative integer", self.values.get(key).unwrap())
            }),
            Some(other) => Err(bad_type(key, "a nonnegative integer", other)),
        }
    }

    pub fn bool(&self, key: &str) -> Result<Option<bool>, CliError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(serde_json::Value::Bool(b)) => Ok(Some(*b)),
            Some(other) => Err(bad_type(key, "a boolean", other)),
        }
    }

    pub fn string(&self, key: &str) -> Result<Option<String>, CliError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(serde_json::Value::String(s)) => Ok(Some(s.clone())),
            Some(other) => Err(bad_type(key, "a string", other)),
        }
    }

    /// A list of numbers, or a single number treated as a one-element list.
    pub fn f64_list(&self, key: &str) -> Result<Option<Vec<f64>>, CliError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(serde_json::Value::Number(n)) => Ok(n.as_f64().map(|v| vec![v])),
            Some(serde_json::Value::Array(items)) => {
                let mut out = Vec::with_capacity(items.len());
                for item in items {
                    match item.as_f64() {
                        Some(v) => out.push(v),
                        None => return Err(bad_type(key, "numbers", item)),
                    }
                }
                Ok(Some(out))
            }
            Some(other) => Err(bad_type(key, "a number or list of numbers", other)),
        }
    }
}

fn bad_type(key: &str, wanted: &str, got: &serde_json::Value) -> CliError {
    CliError::Usage(format!("config key {key:?} must be {wanted}, got {got}"))
}

/// Take the CLI value when present, the file value otherwise.
pub fn merge<T>(cli: Option<T>, file: Option<T>) -> Option<T> {
    cli.or(file)
}

/// The four spellings of the gap ratio, after merging.
#[derive(Debug, Clone, Copy, Default)]
pub struct GapInputs {
    pub x: Option<f64>,
    pub alpha: Option<f64>,
    pub epsilon: Option<f64>,
    pub k_t: Option<f64>,
    pub gamma: Option<f64>,
}

impl GapInputs {
    fn any_source(&self) -> bool {
        self.x.is_some()
            || self.alpha.is_some()
            || self.gamma.is_some()
            || (self.epsilon.is_some() && self.k_t.is_some())
    }

    /// Layered merge: any CLI-side gap source shadows every file-side one.
    pub fn merged_with(self, file: GapInputs) -> GapInputs {
        if self.any_source() {
            self
        } else {
            GapInputs {
                x: self.x.or(file.x),
                alpha: self.alpha.or(file.alpha),
                epsilon: self.epsilon.or(file.epsilon),
                k_t: self.k_t.or(file.k_t),
                gamma: self.gamma.or(file.gamma),
            }
        }
    }
}

/// A resolved gap ratio, remembering the spelling it came from so energy
/// scales stay available.
#[derive(Debug, Clone, Copy)]
pub struct ResolvedGap {
    pub x: f64,
    /// Explicit Zeeman splitting, when the user supplied one.
    pub epsilon: Option<f64>,
}

impl fmt::Display for ResolvedGap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x = {}", self.x)
    }
}

/// Enforces the exactly-one-spelling rule and converts to `x`.
/// `hbar = 1` for CLI purposes: all paper results depend on `x` alone.
pub fn resolve_gap(inputs: &GapInputs) -> Result<ResolvedGap, CliError> {
    let mut sources: Vec<(&str, f64)> = Vec::new();
    if let Some(x) = inputs.x {
        sources.push(("x", x));
    }
    if let Some(alpha) = inputs.alpha {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(CliError::Usage(format!(
                "alpha must be in (0,1), got {alpha}"
            )));
        }
        sources.push((
            "alpha",
            gamma_from_alpha(alpha, 1.0).map_err(CliError::from)?,
        ));
    }
    if let Some(gamma) = inputs.gamma {
        sources.push(("gamma", gamma));
    }
    match (inputs.epsilon, inputs.k_t) {
        (Some(epsilon), Some(k_t)) => {
            if !(k_t > 0.0) {
                return Err(CliError::Usage(format!("kT must be positive, got {k_t}")));
            }
            sources.push(("epsilon/kT", epsilon / k_t));
        }
        (None, Some(_)) => {
            return Err(CliError::Usage(
                "kT without epsilon does not determine a gap ratio; give both".into(),
            ));
        }
        _ => {}
    }

    match sources.len() {
        0 => Err(CliError::Usage(
            "no gap ratio given: supply one of --x, --alpha, --epsilon with --kT, or --gamma"
                .into(),
        )),
        1 => Ok(ResolvedGap {
            x: sources[0].1,
            epsilon: inputs.epsilon,
        }),
        _ => Err(CliError::Usage(format!(
            "conflicting gap-ratio specifications ({}); give exactly one",
            sources
                .iter()
                .map(|(n, _)| *n)
                .collect::<Vec<_>>()
                .join(", ")
        ))),
    }
}

/// `alpha` for reporting alongside a resolved `x`.
pub fn alpha_of(x: f64) -> f64 {
    alpha_from_gap_ratio(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exactly_one_source_accepted() {
        let gap = resolve_gap(&GapInputs {
            x: Some(0.7),
            ..Default::default()
        })
        .unwrap();
        assert_eq!(gap.x, 0.7);

        let gap = resolve_gap(&GapInputs {
            epsilon: Some(2.0),
            k_t: Some(4.0),
            ..Default::default()
        })
        .unwrap();
        assert_eq!(gap.x, 0.5);
        assert_eq!(gap.epsilon, Some(2.0));

        let gap = resolve_gap(&GapInputs {
            gamma: Some(1.3),
            ..Default::default()
        })
        .unwrap();
        assert_eq!(gap.x, 1.3);

        // alpha = 1/3 gives x = ln 2.
        let gap = resolve_gap(&GapInputs {
            alpha: Some(1.0 / 3.0),
            ..Default::default()
        })
        .unwrap();
        assert!((gap.x - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn conflicts_and_gaps_rejected() {
        assert!(resolve_gap(&GapInputs::default()).is_err());
        assert!(resolve_gap(&GapInputs {
            x: Some(1.0),
            gamma: Some(1.0),
            ..Default::default()
        })
        .is_err());
        assert!(resolve_gap(&GapInputs {
            k_t: Some(1.0),
            ..Default::default()
        })
        .is_err());
        // epsilon alone is a unit scale, not a gap source.
        assert!(resolve_gap(&GapInputs {
            epsilon: Some(1.0),
            ..Default::default()
        })
        .is_err());
        assert!(resolve_gap(&GapInputs {
            x: Some(1.0),
            epsilon: Some(2.0),
            k_t: Some(1.0),
            ..Default::default()
        })
        .is_err());
    }

    #[test]
    fn cli_gap_shadows_file_gap() {
        let cli = GapInputs {
            x: Some(0.5),
            ..Default::default()
        };
        let file = GapInputs {
            alpha: Some(0.25),
            ..Default::default()
        };
        let merged = cli.merged_with(file);
        assert_eq!(merged.x, Some(0.5));
        assert!(merged.alpha.is_none());

        // No CLI gap source: the file's spelling survives.
        let merged = GapInputs::default().merged_with(GapInputs {
            gamma: Some(2.0),
            ..Default::default()
        });
        assert_eq!(merged.gamma, Some(2.0));
    }

    #[test]
    fn epsilon_scale_travels_with_the_pair() {
        let gap = resolve_gap(&GapInputs {
            x: Some(1.0),
            epsilon: Some(3.0),
            ..Default::default()
        })
        .unwrap();
        // epsilon without kT is a pure scale and not a second source.
        assert_eq!(gap.epsilon, Some(3.0));
    }
}
