//! Run configuration: a TOML-serializable record of every knob, merged from
//! an optional config file and command-line flags (flags win), with all
//! defaults resolved before dispatch.

use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use eigenrest::experiments::{degree_ladder_in, SystemFamily, TProfile};
use eigenrest::exponents::Exponent;
use eigenrest::{Error, Result};

/// Degree-ladder specification: endpoints, optional point count, and spacing.
/// Without `count` the built-in half-octave ladder is filtered to [min, max].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LGridSpec {
    pub min: u32,
    pub max: u32,
    #[serde(default)]
    pub count: Option<u32>,
    #[serde(default = "default_true")]
    pub geometric: bool,
}

fn default_true() -> bool {
    true
}

impl LGridSpec {
    pub fn resolve(&self, d: u32) -> Result<Vec<u32>> {
        if self.min < 1 {
            return Err(Error::config("lgrid.min must be >= 1"));
        }
        if self.max < self.min {
            return Err(Error::config(format!(
                "lgrid.max = {} below lgrid.min = {}",
                self.max, self.min
            )));
        }
        let ladder = match self.count {
            None => degree_ladder_in(d, self.min, self.max),
            Some(c) => {
                if c < 2 {
                    return Err(Error::config("lgrid.count must be >= 2"));
                }
                let (lo, hi) = (f64::from(self.min), f64::from(self.max));
                let mut v: Vec<u32> = (0..c)
                    .map(|i| {
                        let s = f64::from(i) / f64::from(c - 1);
                        let x = if self.geometric {
                            lo * (hi / lo).powf(s)
                        } else {
                            lo + (hi - lo) * s
                        };
                        x.round().max(1.0) as u32
                    })
                    .collect();
                v.dedup();
                v
            }
        };
        if ladder.is_empty() {
            return Err(Error::config(format!(
                "lgrid [{}, {}] selects no degrees",
                self.min, self.max
            )));
        }
        Ok(ladder)
    }
}

/// Union of all experiment knobs. Every field is optional so that a config
/// file may specify any subset and flags may override; `resolve_*` helpers
/// apply per-experiment defaults. Unknown keys are rejected at parse time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub experiment: Option<String>,
    pub d: Option<u32>,
    pub k: Option<u32>,
    /// Lebesgue exponent as "8", "8/3", "2.5", or "inf".
    pub p: Option<String>,
    /// Optional sequence-norm exponent override (same syntax as p).
    pub alpha: Option<String>,
    pub beta: Option<f64>,
    pub tau: Option<f64>,
    /// Separation constant for zonal packings.
    pub c: Option<f64>,
    pub family: Option<String>,
    pub profile: Option<String>,
    pub l: Option<u32>,
    pub n_draws: Option<u32>,
    pub n_samples: Option<u64>,
    pub n_functions: Option<u32>,
    pub draws: Option<u32>,
    pub seed: Option<u64>,
    /// Exponent grid for the table printer: "2:16" or "2,4,8/3,inf".
    pub p_grid: Option<String>,
    pub lgrid: Option<LGridSpec>,
    /// Grid-resolution policy. The only supported value is "auto": every
    /// experiment doubles its quadrature resolution until reported norms move
    /// by less than 1% (and records that check in its verdict).
    pub resolution: Option<String>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    /// Parse a TOML document; unknown keys, duplicate keys, and type errors
    /// are reported with the parser's position diagnostics.
    pub fn parse_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::config(format!("config parse error: {e}")))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::config(format!("config echo error: {e}")))
    }

    /// Overlay: any field set in `over` replaces the value from `self`.
    pub fn merged_with(&self, over: &RunConfig) -> RunConfig {
        macro_rules! pick {
            ($f:ident) => {
                over.$f.clone().or_else(|| self.$f.clone())
            };
        }
        RunConfig {
            experiment: pick!(experiment),
            d: pick!(d),
            k: pick!(k),
            p: pick!(p),
            alpha: pick!(alpha),
            beta: pick!(beta),
            tau: pick!(tau),
            c: pick!(c),
            family: pick!(family),
            profile: pick!(profile),
            l: pick!(l),
            n_draws: pick!(n_draws),
            n_samples: pick!(n_samples),
            n_functions: pick!(n_functions),
            draws: pick!(draws),
            seed: pick!(seed),
            p_grid: pick!(p_grid),
            lgrid: pick!(lgrid),
            resolution: pick!(resolution),
            out: pick!(out),
        }
    }

    /// The grid-resolution policy knob accepts only its documented value.
    pub fn validate_resolution(&self) -> Result<()> {
        match self.resolution.as_deref() {
            None | Some("auto") => Ok(()),
            Some(other) => Err(Error::config(format!(
                "unknown resolution policy '{other}' (the only supported value is \"auto\")"
            ))),
        }
    }

    pub fn require_p(&self) -> Result<Exponent> {
        let s = self
            .p
            .as_deref()
            .ok_or_else(|| Error::config("missing required field: p"))?;
        Exponent::from_str(s)
    }

    pub fn lgrid_or_default(&self, d: u32, lo: u32, hi: u32) -> Result<Vec<u32>> {
        match &self.lgrid {
            Some(spec) => spec.resolve(d),
            None => Ok(degree_ladder_in(d, lo, hi)),
        }
    }

    /// The system family for scaling runs, built from `family` plus the
    /// auxiliary knobs it needs.
    pub fn resolve_family(&self) -> Result<SystemFamily> {
        let tau = self.tau.unwrap_or(0.5);
        let name = self.family.as_deref().unwrap_or("zonal");
        match name {
            "zonal" => Ok(SystemFamily::SingleZonal),
            "eigenspace" => Ok(SystemFamily::FullEigenspace),
            "window-low" => Ok(SystemFamily::WindowLow { tau }),
            "window-high" => Ok(SystemFamily::WindowHigh { tau }),
            "random" => Ok(SystemFamily::Random {
                n_functions: self.n_functions.unwrap_or(16) as usize,
                draws: self.draws.unwrap_or(20),
                seed: self.seed.unwrap_or(1),
            }),
            other => Err(Error::config(format!(
                "unknown family '{other}' (expected zonal, eigenspace, window-low, window-high, random)"
            ))),
        }
    }

    pub fn resolve_profile(&self) -> Result<TProfile> {
        let name = self.profile.as_deref().unwrap_or("ones");
        if name == "ones" {
            Ok(TProfile::Ones)
        } else if name == "spike" {
            Ok(TProfile::Spike)
        } else if name == "geom" {
            Ok(TProfile::Geometric { ratio: 0.7 })
        } else if let Some(r) = name.strip_prefix("geom:") {
            let ratio: f64 = r
                .parse()
                .map_err(|_| Error::config(format!("bad geometric ratio '{r}'")))?;
            if !(ratio > 0.0 && ratio < 1.0) {
                return Err(Error::config(format!("geometric ratio {ratio} must lie in (0, 1)")));
            }
            Ok(TProfile::Geometric { ratio })
        } else {
            Err(Error::config(format!(
                "unknown profile '{name}' (expected ones, spike, geom, geom:<ratio>)"
            )))
        }
    }
}

/// Parse a p-grid token: "a:b" (integer range, inclusive) or a comma list of
/// exponent tokens.
pub fn parse_p_grid(text: &str) -> Result<Vec<Exponent>> {
    if let Some((a, b)) = text.split_once(':') {
        let lo: i64 = a
            .trim()
            .parse()
            .map_err(|_| Error::config(format!("bad p-grid endpoint '{a}'")))?;
        let hi: i64 = b
            .trim()
            .parse()
            .map_err(|_| Error::config(format!("bad p-grid endpoint '{b}'")))?;
        if lo < 2 || hi < lo {
            return Err(Error::config(format!("p-grid {lo}:{hi} must satisfy 2 <= lo <= hi")));
        }
        Ok((lo..=hi).map(Exponent::from_int).collect())
    } else {
        text.split(',')
            .map(|tok| Exponent::from_str(tok.trim()))
            .collect()
    }
}
