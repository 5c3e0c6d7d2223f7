use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::depmodel::{GSetting, LossParams, ModelKind};
use crate::error::{Error, Result};
use crate::optim::Engine;
use crate::repair::{Method, RepairParams, SolverLimits, DEFAULT_ORACLE_LIMIT};

/// Every knob of a repair run. Round-trips through TOML.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub method: Method,
    pub gamma: f64,
    pub kappa: usize,
    pub k: usize,
    #[serde(with = "g_field")]
    pub g: GSetting,
    pub model: ModelKind,
    /// Model pool size; `None` means one model set per tuple.
    #[serde(with = "pool_field")]
    pub m: Option<usize>,
    pub seed: u64,
    pub epsilon: f64,
    pub engine: Engine,
}

impl Default for RunConfig {
    fn default() -> Self {
        let loss = LossParams::default();
        RunConfig {
            method: Method::Clique,
            gamma: loss.gamma,
            kappa: loss.kappa,
            k: loss.k,
            g: GSetting::Auto,
            model: ModelKind::Linear,
            m: None,
            seed: 0,
            epsilon: 1e-6,
            engine: Engine::Auto,
        }
    }
}

mod g_field {
    use super::*;

    pub fn serialize<S: Serializer>(g: &GSetting, s: S) -> std::result::Result<S::Ok, S::Error> {
        match g {
            GSetting::Auto => s.serialize_str("auto"),
            GSetting::Fixed(v) => s.serialize_f64(*v),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<GSetting, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(GSetting::Fixed(v)),
            Raw::Int(v) => Ok(GSetting::Fixed(v as f64)),
            Raw::Text(t) => parse_g(&t).map_err(de::Error::custom),
        }
    }
}

mod pool_field {
    use super::*;

    pub fn serialize<S: Serializer>(m: &Option<usize>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match m {
            None => s.serialize_str("all"),
            Some(v) => s.serialize_u64(*v as u64),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<usize>, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(u64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(Some(v as usize)),
            Raw::Text(t) => parse_pool(&t).map_err(de::Error::custom),
        }
    }
}

/// `auto` or a real.
pub fn parse_g(text: &str) -> Result<GSetting> {
    let t = text.trim();
    if t.eq_ignore_ascii_case("auto") {
        return Ok(GSetting::Auto);
    }
    t.parse()
        .map(GSetting::Fixed)
        .map_err(|_| Error::Config(format!("G must be `auto` or a real, got `{t}`")))
}

/// `all` or a positive integer.
pub fn parse_pool(text: &str) -> Result<Option<usize>> {
    let t = text.trim();
    if t.eq_ignore_ascii_case("all") {
        return Ok(None);
    }
    t.parse()
        .map(Some)
        .map_err(|_| Error::Config(format!("m must be `all` or an integer, got `{t}`")))
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let c: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        self.loss_params().validate()?;
        if !(self.epsilon > 0.0 && self.epsilon < 0.5) {
            return Err(Error::Config(format!(
                "epsilon must lie in (0, 0.5), got {}",
                self.epsilon
            )));
        }
        Ok(())
    }

    pub fn loss_params(&self) -> LossParams {
        LossParams {
            gamma: self.gamma,
            kappa: self.kappa,
            k: self.k,
            g: self.g,
            model: self.model,
            pool: self.m,
        }
    }

    pub fn repair_params(&self, limits: SolverLimits) -> RepairParams {
        RepairParams {
            loss: self.loss_params(),
            epsilon: self.epsilon,
            seed: self.seed,
            limits: SolverLimits {
                engine: self.engine,
                ..limits
            },
            oracle_limit: DEFAULT_ORACLE_LIMIT,
        }
    }
}
