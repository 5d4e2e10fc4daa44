use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use billiards_core::melnikov::check_resonance_indices;
use billiards_core::{Perturbation, RadialCurve, SurfaceKind};
use serde::{Deserialize, Serialize};

pub const DEFAULT_GRID: usize = 256;
pub const DEFAULT_STEPS: usize = 1000;
pub const DEFAULT_EPS_LIST: [f64; 3] = [1e-2, 5e-3, 2.5e-3];
pub const MIN_GRID: usize = 64;
pub const MAX_GRID: usize = 65_536;
pub const MAX_STEPS: usize = 10_000_000;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("field `{field}`{}: {message}", line.map(|l| format!(" (line {l})")).unwrap_or_default())]
    Field {
        field: String,
        line: Option<usize>,
        message: String,
    },
}

impl ConfigError {
    pub fn field(&self) -> Option<&str> {
        match self {
            ConfigError::Field { field, .. } => Some(field),
            _ => None,
        }
    }

    pub fn line(&self) -> Option<usize> {
        match self {
            ConfigError::Syntax { line, .. } => Some(*line),
            ConfigError::Field { line, .. } => *line,
            ConfigError::Read { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Surface {
    Euclidean,
    Sphere,
    Hyperbolic,
}

impl Surface {
    pub fn kind(self) -> SurfaceKind {
        match self {
            Surface::Euclidean => SurfaceKind::Euclidean,
            Surface::Sphere => SurfaceKind::Sphere,
            Surface::Hyperbolic => SurfaceKind::Hyperbolic,
        }
    }
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind().name())
    }
}

/// One Fourier term `Re(c·e^{ijθ})` of the radial perturbation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub j: i64,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ResonanceIndices {
    pub m: u32,
    pub n: u32,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    surface: Surface,
    rho0: f64,
    #[serde(default)]
    perturbation: Vec<Term>,
    #[serde(default)]
    epsilon: f64,
    m: Option<u32>,
    n: Option<u32>,
    grid: Option<usize>,
    steps: Option<usize>,
    eps_list: Option<Vec<f64>>,
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    theta0: f64,
    psi0: Option<f64>,
}

/// A validated experiment description.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub surface: Surface,
    pub rho0: f64,
    pub perturbation: Vec<Term>,
    pub epsilon: f64,
    pub resonance: Option<ResonanceIndices>,
    pub grid: usize,
    pub steps: usize,
    pub eps_list: Vec<f64>,
    pub seed: u64,
    pub theta0: f64,
    pub psi0: Option<f64>,
}

impl ExperimentConfig {
    pub fn kind(&self) -> SurfaceKind {
        self.surface.kind()
    }

    pub fn perturbation(&self) -> Perturbation {
        Perturbation::from_terms(self.perturbation.iter().map(|t| (t.j, t.re, t.im)))
    }

    /// The curve `ρ₀ + ε·ρ₁` described by the config.
    pub fn curve(&self) -> RadialCurve {
        RadialCurve::new(self.kind(), self.rho0, self.perturbation(), self.epsilon)
            .expect("validated configs describe admissible curves")
    }

    /// The same curve at `ε = 0`, used as the family for ε sweeps.
    pub fn family(&self) -> RadialCurve {
        RadialCurve::new(self.kind(), self.rho0, self.perturbation(), 0.0)
            .expect("validated configs describe admissible curves")
    }

    pub fn require_resonance(&self) -> Result<ResonanceIndices, ConfigError> {
        self.resonance.ok_or_else(|| ConfigError::Field {
            field: "m".into(),
            line: None,
            message: "this command needs the resonance indices `m` and `n`".into(),
        })
    }

    pub fn require_psi0(&self) -> Result<f64, ConfigError> {
        self.psi0.ok_or_else(|| ConfigError::Field {
            field: "psi0".into(),
            line: None,
            message: "this command needs an initial angle `psi0`".into(),
        })
    }
}

/// Line of the first `"key":` occurrence, for diagnostics.
fn locate(text: &str, key: &str) -> Option<usize> {
    let quoted = format!("\"{key}\"");
    text.lines().position(|line| {
        line.match_indices(&quoted)
            .any(|(i, _)| line[i + quoted.len()..].trim_start().starts_with(':'))
    })
    .map(|i| i + 1)
}

/// Strict parse and validation of a JSON experiment config.
pub fn parse_config(bytes: &[u8]) -> Result<ExperimentConfig, ConfigError> {
    let text = std::str::from_utf8(bytes).map_err(|e| ConfigError::Syntax {
        line: 1,
        column: e.valid_up_to() + 1,
        message: format!("config is not UTF-8: {e}"),
    })?;
    let raw: RawConfig = serde_json::from_str(text).map_err(|e| ConfigError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let fail = |field: &str, message: String| ConfigError::Field {
        field: field.to_string(),
        line: locate(text, field),
        message,
    };

    if !(raw.rho0.is_finite() && raw.rho0 > 0.0) {
        return Err(fail("rho0", format!("{} must be positive and finite", raw.rho0)));
    }
    if raw.surface == Surface::Sphere && raw.rho0 >= FRAC_PI_2 {
        return Err(fail(
            "rho0",
            format!("{} violates the hemisphere bound rho0 < pi/2", raw.rho0),
        ));
    }
    if !raw.epsilon.is_finite() {
        return Err(fail("epsilon", "must be finite".into()));
    }
    for (i, t) in raw.perturbation.iter().enumerate() {
        if !(t.re.is_finite() && t.im.is_finite()) {
            return Err(fail("perturbation", format!("term {i} has a non-finite coefficient")));
        }
        if t.j.unsigned_abs() > u32::MAX as u64 {
            return Err(fail("perturbation", format!("term {i} has wave number {} out of range", t.j)));
        }
    }
    let resonance = match (raw.m, raw.n) {
        (None, None) => None,
        (Some(m), Some(n)) => {
            check_resonance_indices(m, n).map_err(|e| fail("m", e.to_string()))?;
            Some(ResonanceIndices { m, n })
        }
        (Some(_), None) => return Err(fail("m", "`m` given without `n`".into())),
        (None, Some(_)) => return Err(fail("n", "`n` given without `m`".into())),
    };
    let grid = raw.grid.unwrap_or(DEFAULT_GRID);
    if !(MIN_GRID..=MAX_GRID).contains(&grid) {
        return Err(fail("grid", format!("{grid} is outside [{MIN_GRID}, {MAX_GRID}]")));
    }
    let steps = raw.steps.unwrap_or(DEFAULT_STEPS);
    if !(1..=MAX_STEPS).contains(&steps) {
        return Err(fail("steps", format!("{steps} is outside [1, {MAX_STEPS}]")));
    }
    let eps_list = raw.eps_list.unwrap_or_else(|| DEFAULT_EPS_LIST.to_vec());
    if eps_list.is_empty() || eps_list.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
        return Err(fail("eps_list", "must be a non-empty list of positive numbers".into()));
    }
    if eps_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(fail("eps_list", "must be strictly decreasing".into()));
    }
    if !raw.theta0.is_finite() {
        return Err(fail("theta0", "must be finite".into()));
    }
    if let Some(psi) = raw.psi0 {
        if !(psi > 0.0 && psi < PI) {
            return Err(fail("psi0", format!("{psi} is outside (0, pi)")));
        }
    }

    let config = ExperimentConfig {
        surface: raw.surface,
        rho0: raw.rho0,
        perturbation: raw.perturbation,
        epsilon: raw.epsilon,
        resonance,
        grid,
        steps,
        eps_list,
        seed: raw.seed,
        theta0: raw.theta0,
        psi0: raw.psi0,
    };
    let family = RadialCurve::new(config.kind(), config.rho0, config.perturbation(), 0.0)
        .map_err(|e| fail("perturbation", e.to_string()))?;
    family
        .with_epsilon(config.epsilon)
        .map_err(|e| fail("epsilon", e.to_string()))?;
    family
        .with_epsilon(config.eps_list[0])
        .map_err(|e| fail("eps_list", e.to_string()))?;
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn locate_finds_keys_not_values() {
        let text = "{\n  \"surface\": \"sphere\",\n  \"rho0\": 1.6\n}";
        assert_eq!(locate(text, "rho0"), Some(3));
        assert_eq!(locate(text, "sphere"), None);
    }

    #[test]
    fn negative_wave_numbers_are_conjugated() {
        let cfg = parse_config(
            br#"{"surface": "euclidean", "rho0": 1, "perturbation": [{"j": -2, "re": 1, "im": 1}]}"#,
        )
        .unwrap();
        let a = cfg.perturbation().coefficient(2);
        assert!((a.re - 0.5).abs() < 1e-15 && (a.im + 0.5).abs() < 1e-15);
    }
}
