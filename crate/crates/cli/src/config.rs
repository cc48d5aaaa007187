//! Run configuration: an optional JSON file merged under command-line flags.

use std::path::{Path, PathBuf};

use eapkit::certificates::Generator;
use eapkit::constructions::{Domain, Kind, Rule};
use eapkit::error::{EapError, Result};
use eapkit::fourier::{default_lambda_grid, parse_lambda_grid, Lambda};
use eapkit::means::{Horizons, Normalization, Quantity};
use eapkit::rational::{self, Rational};
use eapkit::report::MAX_K;
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = EapError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(EapError::config("format", format!("expected json|csv, got `{other}`"))),
        }
    }
}

/// A number given either as a JSON number or as a string such as `"3/10"`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Num {
    fn to_rational(&self, field: &str) -> Result<Rational> {
        match self {
            Num::Int(n) => Ok(rational::int(*n)),
            Num::Float(x) => rational::parse(&x.to_string()).map_err(|e| EapError::config(field, e.to_string())),
            Num::Text(s) => rational::parse(s).map_err(|e| EapError::config(field, e.to_string())),
        }
    }
}

/// Every field a run may set. Unset fields fall back to per-command defaults.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<String>,
    pub rule: Option<String>,
    #[serde(rename = "K", alias = "k")]
    pub k: Option<i64>,
    pub kind: Option<String>,
    pub domain: Option<String>,
    pub quantity: Option<String>,
    pub normalization: Option<String>,
    pub horizons: Option<String>,
    pub offset: Option<Num>,
    pub q_list: Option<Vec<i64>>,
    pub epsilon: Option<Num>,
    pub generator: Option<String>,
    pub lambda_grid: Option<String>,
    #[serde(rename = "T")]
    pub horizon: Option<Vec<Num>>,
    pub seed: Option<u64>,
    pub output_path: Option<PathBuf>,
    pub format: Option<String>,
}

macro_rules! overlay {
    ($dst:ident, $src:ident, $($f:ident),*) => {
        $( if $src.$f.is_some() { $dst.$f = $src.$f; } )*
    };
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| EapError::config("config", format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| EapError::config("config", e.to_string()))
    }

    /// Fields set in `flags` replace those in `self`.
    pub fn merge(mut self, flags: RunConfig) -> Self {
        overlay!(
            self, flags, command, rule, k, kind, domain, quantity, normalization, horizons, offset, q_list, epsilon, generator,
            lambda_grid, horizon, seed, output_path, format
        );
        self
    }

    pub fn rule(&self) -> Result<Rule> {
        self.rule.as_deref().map_or(Ok(Rule::Corrected), str::parse)
    }

    /// `K`, checked against `1 ..= 200`.
    pub fn k_or(&self, default: usize) -> Result<usize> {
        let k = self.k.unwrap_or(default as i64);
        if k < 1 {
            return Err(EapError::config("K", "K must be ≥ 1"));
        }
        if k > MAX_K as i64 {
            return Err(EapError::config("K", format!("K must be ≤ {MAX_K}")));
        }
        Ok(k as usize)
    }

    pub fn kind_or(&self, default: Kind) -> Result<Kind> {
        self.kind.as_deref().map_or(Ok(default), str::parse)
    }

    pub fn domain(&self) -> Result<Domain> {
        self.domain.as_deref().map_or(Ok(Domain::HalfLine), str::parse)
    }

    pub fn quantity(&self) -> Result<Quantity> {
        self.quantity.as_deref().map_or(Ok(Quantity::Norm), str::parse)
    }

    pub fn normalization(&self) -> Result<Normalization> {
        self.normalization.as_deref().map_or(Ok(Normalization::Plus), str::parse)
    }

    pub fn horizons(&self) -> Result<Horizons> {
        self.horizons
            .as_deref()
            .ok_or_else(|| EapError::config("horizons", "required, e.g. beta_even:1..10"))?
            .parse()
    }

    pub fn offset(&self) -> Result<Rational> {
        self.offset.as_ref().map_or(Ok(Rational::from_integer(0.into())), |n| n.to_rational("offset"))
    }

    pub fn q_list_or(&self, default: &[usize]) -> Result<Vec<usize>> {
        match &self.q_list {
            None => Ok(default.to_vec()),
            Some(v) if v.is_empty() => Err(EapError::config("q_list", "must not be empty")),
            Some(v) => v
                .iter()
                .map(|&q| usize::try_from(q).ok().filter(|&q| q > 0).ok_or_else(|| EapError::config("q_list", format!("q must be ≥ 1, got {q}"))))
                .collect(),
        }
    }

    pub fn epsilon(&self) -> Result<Option<Rational>> {
        let Some(n) = &self.epsilon else { return Ok(None) };
        let e = n.to_rational("epsilon")?;
        if e <= Rational::from_integer(0.into()) {
            return Err(EapError::config("epsilon", "must be positive"));
        }
        Ok(Some(e))
    }

    pub fn generator(&self) -> Result<Generator> {
        self.generator.as_deref().map_or(Ok(Generator::default()), str::parse)
    }

    pub fn lambda_grid_or(&self, default: Vec<Lambda>) -> Result<Vec<Lambda>> {
        self.lambda_grid.as_deref().map_or(Ok(default), parse_lambda_grid)
    }

    pub fn default_lambda_grid() -> Vec<Lambda> {
        default_lambda_grid()
    }

    pub fn horizon_list(&self) -> Result<Option<Vec<Rational>>> {
        let Some(v) = &self.horizon else { return Ok(None) };
        if v.is_empty() {
            return Err(EapError::config("T", "must not be empty"));
        }
        let mut out = v.iter().map(|n| n.to_rational("T")).collect::<Result<Vec<_>>>()?;
        if out.iter().any(|t| t <= &Rational::from_integer(0.into())) {
            return Err(EapError::config("T", "horizons must be positive"));
        }
        out.sort();
        out.dedup();
        Ok(Some(out))
    }

    pub fn format(&self) -> Result<Format> {
        self.format.as_deref().map_or(Ok(Format::Json), str::parse)
    }
}
