//! Scenario files: TOML with one scalar per key, grouped into `[system]`,
//! `[geometry]`, `[fading]`, `[sweep]` and `[mc]`.
//!
//! Omitted keys take the reference values except `geometry.d_12` and
//! `geometry.d_13`, which have no published default and must be given.
//! Unknown keys are rejected.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::channel::RicianShadowedParams;
use crate::error::{Error, Result};
use crate::montecarlo::McSettings;
use crate::outage::{FadingSet, Node, NodeGeometry, Scheme, SystemConfig};

use super::SweepSpec;

/// A validated scenario file.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub system: SystemConfig,
    pub sweep: SweepSpec,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    #[serde(default)]
    system: RawSystem,
    geometry: RawGeometry,
    #[serde(default)]
    fading: RawFading,
    #[serde(default)]
    sweep: RawSweep,
    #[serde(default)]
    mc: RawMc,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSystem {
    r_oma: Option<f64>,
    a_gs2: Option<f64>,
    beta: Option<f64>,
    phase_noise_dbm: Option<f64>,
    noise_dbm: Option<f64>,
    epsilon: Option<f64>,
    k_tr: Option<u32>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGeometry {
    d_1g: Option<f64>,
    d_g2: Option<f64>,
    d_g3: Option<f64>,
    d_12: f64,
    d_13: f64,
    pathloss_exp: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFading {
    k_1g: Option<f64>,
    m_1g: Option<f64>,
    k_si: Option<f64>,
    m_si: Option<f64>,
    k_g2: Option<f64>,
    m_g2: Option<f64>,
    k_g3: Option<f64>,
    m_g3: Option<f64>,
    k_12: Option<f64>,
    m_12: Option<f64>,
    k_13: Option<f64>,
    m_13: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    pt_start_db: Option<f64>,
    pt_stop_db: Option<f64>,
    pt_step_db: Option<f64>,
    /// Comma-separated scheme names.
    schemes: Option<String>,
    /// Comma-separated node names.
    nodes: Option<String>,
    with_mc: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMc {
    num_samples: Option<u64>,
    seed: Option<u64>,
    antithetic: Option<bool>,
}

fn shape(reference: RicianShadowedParams, k: Option<f64>, m: Option<f64>) -> Result<RicianShadowedParams> {
    RicianShadowedParams::new(1.0, k.unwrap_or(reference.k_factor()), m.unwrap_or(reference.m()))
}

fn parse_list<T: std::str::FromStr<Err = Error> + Ord>(text: &str) -> Result<BTreeSet<T>> {
    let set = text
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(str::parse)
        .collect::<Result<BTreeSet<T>>>()?;
    if set.is_empty() {
        return Err(Error::invalid(format!("empty list '{text}'")));
    }
    Ok(set)
}

impl RawScenario {
    fn build(self) -> Result<Scenario> {
        let d = SystemConfig::reference();
        let (s, g, f) = (self.system, self.geometry, self.fading);
        let rf = FadingSet::reference();
        let rg = NodeGeometry::reference();
        let system = SystemConfig {
            r_oma: s.r_oma.unwrap_or(d.r_oma),
            a_gs2: s.a_gs2.unwrap_or(d.a_gs2),
            beta: s.beta.unwrap_or(d.beta),
            phase_noise_dbm: s.phase_noise_dbm.unwrap_or(d.phase_noise_dbm),
            noise_dbm: s.noise_dbm.unwrap_or(d.noise_dbm),
            epsilon: s.epsilon.unwrap_or(d.epsilon),
            k_tr: s.k_tr.unwrap_or(d.k_tr),
            geometry: NodeGeometry {
                d_1g: g.d_1g.unwrap_or(rg.d_1g),
                d_g2: g.d_g2.unwrap_or(rg.d_g2),
                d_g3: g.d_g3.unwrap_or(rg.d_g3),
                d_12: g.d_12,
                d_13: g.d_13,
                pathloss_exp: g.pathloss_exp.unwrap_or(rg.pathloss_exp),
            },
            fading: FadingSet {
                uav1_gs: shape(rf.uav1_gs, f.k_1g, f.m_1g)?,
                self_interference: shape(rf.self_interference, f.k_si, f.m_si)?,
                gs_uav2: shape(rf.gs_uav2, f.k_g2, f.m_g2)?,
                gs_uav3: shape(rf.gs_uav3, f.k_g3, f.m_g3)?,
                uav1_uav2: shape(rf.uav1_uav2, f.k_12, f.m_12)?,
                uav1_uav3: shape(rf.uav1_uav3, f.k_13, f.m_13)?,
            },
            ..d
        };

        let sw = self.sweep;
        let mc_default = McSettings::default();
        let sweep = SweepSpec {
            pt_start_db: sw.pt_start_db.unwrap_or(0.0),
            pt_stop_db: sw.pt_stop_db.unwrap_or(60.0),
            pt_step_db: sw.pt_step_db.unwrap_or(5.0),
            schemes: match sw.schemes {
                Some(text) => parse_list(&text)?,
                None => Scheme::ALL.into_iter().collect(),
            },
            nodes: match sw.nodes {
                Some(text) => parse_list(&text)?,
                None => Node::ALL.into_iter().collect(),
            },
            with_mc: sw.with_mc.unwrap_or(false),
            mc: McSettings {
                num_samples: self.mc.num_samples.unwrap_or(mc_default.num_samples),
                seed: self.mc.seed.unwrap_or(mc_default.seed),
                antithetic: self.mc.antithetic.unwrap_or(mc_default.antithetic),
            },
        };

        let system = system.with_pt_db(sweep.pt_start_db);
        system.validate()?;
        sweep.validate()?;
        Ok(Scenario { system, sweep })
    }
}

fn config_error(path: &Path, detail: impl Into<String>) -> Error {
    Error::Config {
        path: path.to_path_buf(),
        detail: detail.into(),
    }
}

/// Parses scenario text; `path` only labels errors.
pub fn parse_config(text: &str, path: &Path) -> Result<Scenario> {
    let raw: RawScenario = toml::from_str(text).map_err(|e| {
        let line = e.span().map(|s| text[..s.start].matches('\n').count() + 1);
        let msg = e.message();
        match line {
            Some(l) => config_error(path, format!("line {l}: {msg}")),
            None => config_error(path, msg),
        }
    })?;
    raw.build().map_err(|e| match e {
        Error::InvalidParameter(detail) => config_error(path, detail),
        other => other,
    })
}

pub fn load_config(path: impl AsRef<Path>) -> Result<Scenario> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| config_error(path, format!("cannot read: {e}")))?;
    parse_config(&text, path)
}

/// The reference scenario shipped with the crate.
pub fn reference_config_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/reference.toml")
}
