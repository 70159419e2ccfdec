//! Run configuration shared by every suite and the command line.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::json::character_from_json;
use crate::sample::Sampler;
use crate::series::Character;
use crate::weyl::{standard_ordering, OrderingPreset, WeylOrdering};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub p: u32,
    pub n: usize,
    pub precision: u32,
    pub seed: u64,
    /// Per-suite default when absent.
    pub trials: Option<u64>,
    pub preset: OrderingPreset,
    /// Character JSON; a generic character is used when absent.
    pub chi: Option<Value>,
    pub valwindow: i64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            p: 3,
            n: 3,
            precision: crate::padic::DEFAULT_PRECISION,
            seed: 0,
            trials: None,
            preset: OrderingPreset::Default,
            chi: None,
            valwindow: 2,
        }
    }
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

impl RunConfig {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let cfg: RunConfig =
            serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if !is_prime(self.p) {
            return Err(Error::InvalidInput(format!("p = {} is not prime", self.p)));
        }
        if self.n < 2 || self.n > 8 {
            return Err(Error::InvalidInput(format!("n = {} outside 2..=8", self.n)));
        }
        if self.precision == 0 {
            return Err(Error::InvalidInput("precision must be positive".into()));
        }
        if self.valwindow < 0 {
            return Err(Error::InvalidInput("valwindow must be non-negative".into()));
        }
        Ok(())
    }

    pub fn trials_or(&self, default: u64) -> u64 {
        self.trials.unwrap_or(default)
    }

    pub fn sampler(&self) -> Sampler {
        Sampler::new(self.p, self.precision, self.valwindow)
    }

    pub fn ordering(&self) -> Result<WeylOrdering> {
        standard_ordering(self.n, self.preset)
    }

    /// The configured character, or `c_i = 1 + (i mod (p-1))`,
    /// `e_i = i mod (p-1)` (zero-based `i`) over `F_p`.
    pub fn character(&self) -> Result<Arc<Character>> {
        let chi = match &self.chi {
            Some(v) => character_from_json(v)?,
            None => {
                let q = self.p as u64 - 1;
                let cs: Vec<i64> = (0..self.n as u64).map(|i| 1 + (i % q) as i64).collect();
                let es: Vec<u64> = (0..self.n as u64).map(|i| i % q).collect();
                Character::over_prime_field(self.p, &cs, &es)?
            }
        };
        if chi.prime() != self.p {
            return Err(Error::PrimeMismatch(chi.prime(), self.p));
        }
        if chi.n() != self.n {
            return Err(Error::DimensionMismatch(self.n, chi.n()));
        }
        Ok(Arc::new(chi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn round_trip() {
        let cfg = RunConfig {
            p: 5,
            n: 4,
            trials: Some(7),
            preset: OrderingPreset::PaperN3,
            chi: Some(json!({"p": 5, "m": 1, "chi": [{"c": "1", "e": 0}]})),
            ..RunConfig::default()
        };
        let text = serde_json::to_string(&cfg).unwrap();
        assert!(text.contains("\"paper-n3\""));
        assert_eq!(RunConfig::from_json_str(&text).unwrap(), cfg);
    }

    #[test]
    fn partial_and_bad_configs() {
        let cfg = RunConfig::from_json_str(r#"{"p": 5}"#).unwrap();
        assert_eq!(cfg.n, 3);
        assert_eq!(cfg.precision, 64);
        assert!(RunConfig::from_json_str(r#"{"p": 4}"#).is_err());
        assert!(RunConfig::from_json_str(r#"{"q": 4}"#).is_err());
        assert!(RunConfig::from_json_str(r#"{"preset": "nope"}"#).is_err());
    }

    #[test]
    fn default_character() {
        let chi = RunConfig { p: 5, n: 4, ..RunConfig::default() }.character().unwrap();
        let es: Vec<u64> = chi.components().iter().map(|c| c.e).collect();
        assert_eq!(es, vec![0, 1, 2, 3]);
        assert!(chi.ratios_nontrivial_on_units());
        let bad = RunConfig {
            p: 3,
            chi: Some(json!({"p": 5, "m": 1, "chi": [{"c": "1", "e": 0}]})),
            ..RunConfig::default()
        };
        assert!(matches!(bad.character(), Err(Error::PrimeMismatch(5, 3))));
    }
}
