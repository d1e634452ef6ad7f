//! JSON-shaped input specs: channels, experiment descriptions, and the
//! run-level error type carrying the process exit code.

use serde::Deserialize;

use wiretap_core::channels::{
    depolarizing_environment_channel, CQChannel, DepolarizingSpec, Distribution,
};
use wiretap_core::hermitian::{C64, CMat, DensityMatrix};
use wiretap_core::Error as CoreError;

/// Process exit codes: 0 pass, 2 verification failure, 3 spec error, 4 budget.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn spec(msg: impl Into<String>) -> Self {
        Self { code: 3, message: msg.into() }
    }

    pub fn budget(msg: impl Into<String>) -> Self {
        Self { code: 4, message: msg.into() }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::BudgetExceeded { .. } => CliError::budget(e.to_string()),
            other => CliError::spec(other.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Output unit for rates and entropic quantities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Units {
    Bits,
    Nats,
}

impl Units {
    pub fn from_nats(self, x: f64) -> f64 {
        match self {
            Units::Bits => x / std::f64::consts::LN_2,
            Units::Nats => x,
        }
    }

    pub fn to_nats(self, x: f64) -> f64 {
        match self {
            Units::Bits => x * std::f64::consts::LN_2,
            Units::Nats => x,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Units::Bits => "bits",
            Units::Nats => "nats",
        }
    }
}

/// A complex matrix given as explicit real and imaginary parts.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixSpec {
    pub re: Vec<Vec<f64>>,
    #[serde(default)]
    pub im: Option<Vec<Vec<f64>>>,
}

impl MatrixSpec {
    pub fn build(&self) -> CliResult<DensityMatrix> {
        let n = self.re.len();
        if self.re.iter().any(|row| row.len() != n) {
            return Err(CliError::spec("matrix `re` is not square"));
        }
        if let Some(im) = &self.im {
            if im.len() != n || im.iter().any(|row| row.len() != n) {
                return Err(CliError::spec("matrix `im` does not match `re` in shape"));
            }
        }
        let mat = CMat::from_fn(n, n, |i, j| {
            C64::new(self.re[i][j], self.im.as_ref().map_or(0.0, |im| im[i][j]))
        });
        DensityMatrix::from_matrix(mat).map_err(|e| CliError::spec(format!("state: {e}")))
    }
}

/// Channel constructors accepted in configs.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ChannelSpec {
    /// Row-stochastic transition matrix embedded as commuting states.
    Classical { rows: Vec<Vec<f64>> },
    /// One explicit density matrix per input letter.
    Explicit { states: Vec<MatrixSpec> },
    /// Environment channel of the generalized Pauli (depolarizing) family.
    Depolarizing {
        d: usize,
        #[serde(default)]
        pxz: Option<Vec<f64>>,
        #[serde(default)]
        px: Option<Vec<f64>>,
        #[serde(default)]
        pz: Option<Vec<f64>>,
    },
}

impl ChannelSpec {
    pub fn depolarizing_spec(&self) -> CliResult<Option<DepolarizingSpec>> {
        let ChannelSpec::Depolarizing { d, pxz, px, pz } = self else {
            return Ok(None);
        };
        let spec = match (pxz, px, pz) {
            (Some(joint), None, None) => {
                DepolarizingSpec::new(*d, Distribution::new(joint.clone())?)?
            }
            (None, Some(px), Some(pz)) => DepolarizingSpec::independent(
                *d,
                &Distribution::new(px.clone())?,
                &Distribution::new(pz.clone())?,
            )?,
            _ => {
                return Err(CliError::spec(
                    "depolarizing channel needs either `pxz` or both `px` and `pz`",
                ))
            }
        };
        Ok(Some(spec))
    }

    pub fn build(&self) -> CliResult<CQChannel> {
        match self {
            ChannelSpec::Classical { rows } => Ok(CQChannel::classical(rows)?),
            ChannelSpec::Explicit { states } => {
                let states: Vec<DensityMatrix> =
                    states.iter().map(|m| m.build()).collect::<CliResult<_>>()?;
                Ok(CQChannel::new(states)?)
            }
            ChannelSpec::Depolarizing { .. } => {
                let spec = self.depolarizing_spec()?.expect("depolarizing variant");
                Ok(depolarizing_environment_channel(&spec))
            }
        }
    }
}

/// Rate sweep in the output units.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RateGrid {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl RateGrid {
    pub fn points(&self) -> CliResult<Vec<f64>> {
        if !(self.step > 0.0) || self.max < self.min {
            return Err(CliError::spec("rate grid requires step > 0 and max >= min"));
        }
        let n = ((self.max - self.min) / self.step).round() as usize;
        Ok((0..=n).map(|i| self.min + i as f64 * self.step).collect())
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExponentsConfig {
    pub eve: ChannelSpec,
    pub p: Vec<f64>,
    pub rates: RateGrid,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsConfig {
    pub bob: ChannelSpec,
    pub eve: ChannelSpec,
    pub p: Vec<f64>,
    /// Per-symbol message count; blocklength n uses M^n messages.
    pub m: usize,
    /// Local randomness: uniform of size `l`, or an explicit distribution `q`.
    #[serde(default)]
    pub l: Option<usize>,
    #[serde(default)]
    pub q: Option<Vec<f64>>,
    pub n: Vec<u32>,
    #[serde(default)]
    pub corollary: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilySpec {
    PartitionPermutation { domain: usize, range: usize },
    Toeplitz { q: u64, l2: usize, rows: usize },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "experiment", rename_all = "snake_case", deny_unknown_fields)]
pub enum SimulateConfig {
    Lee1 {
        channel: ChannelSpec,
        p: Vec<f64>,
        pa: Vec<f64>,
        s_grid: Vec<f64>,
        #[serde(default = "default_trials")]
        trials: usize,
    },
    Lee2 {
        channel: ChannelSpec,
        q: u64,
        k: usize,
        l: usize,
        s_grid: Vec<f64>,
        #[serde(default = "default_trials")]
        trials: usize,
    },
    Lee3 {
        channel: ChannelSpec,
        q: u64,
        k: usize,
        l: usize,
        pa: Vec<f64>,
        s_grid: Vec<f64>,
        #[serde(default = "default_trials")]
        trials: usize,
    },
    PrivacyAmp {
        probs: Vec<f64>,
        states: Vec<MatrixSpec>,
        family: FamilySpec,
        s: f64,
    },
}

fn default_trials() -> usize {
    2000
}

pub fn load_config<T: serde::de::DeserializeOwned>(path: &std::path::Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::spec(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        CliError::spec(format!("{} line {} column {}: {e}", path.display(), e.line(), e.column()))
    })
}
