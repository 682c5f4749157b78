//! Closed-form (truncated series) outage probabilities for every
//! (scheme, node) pair.
//!
//! | scheme  | GS                                  | UAV-2 / UAV-3                              |
//! |---------|-------------------------------------|--------------------------------------------|
//! | FD-NOMA | uplink vs. two residual-SI terms    | NOMA threshold vs. uplink UAV interference |
//! | HD-NOMA | uplink CDF at the HD threshold      | CDF at the NOMA threshold                  |
//! | HD-OMA  | uplink CDF at the OMA threshold     | CDF at the OMA threshold                   |

use std::fmt;
use std::str::FromStr;

use crate::channel::{PowerMoments, SeriesOutcome};
use crate::error::{Error, Result};

mod series;
mod system;
mod threshold;

pub use series::series_outage;
pub use system::{db_to_linear, FadingSet, LinkBudget, LinkPowers, NodeGeometry, ResidualSiMeans, SystemConfig};
pub use threshold::{noma_effective_threshold, rate_for, sinr_threshold, Threshold};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    FdNoma,
    HdNoma,
    HdOma,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::FdNoma, Scheme::HdNoma, Scheme::HdOma];

    pub fn as_str(&self) -> &'static str {
        match self {
            Scheme::FdNoma => "fd-noma",
            Scheme::HdNoma => "hd-noma",
            Scheme::HdOma => "hd-oma",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Gs,
    Uav2,
    Uav3,
}

impl Node {
    pub const ALL: [Node; 3] = [Node::Gs, Node::Uav2, Node::Uav3];

    pub fn as_str(&self) -> &'static str {
        match self {
            Node::Gs => "gs",
            Node::Uav2 => "uav2",
            Node::Uav3 => "uav3",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "fd-noma" | "fd" => Ok(Scheme::FdNoma),
            "hd-noma" | "hd" => Ok(Scheme::HdNoma),
            "hd-oma" | "oma" => Ok(Scheme::HdOma),
            other => Err(Error::invalid(format!("unknown scheme '{other}'"))),
        }
    }
}

impl FromStr for Node {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "gs" => Ok(Node::Gs),
            "uav2" => Ok(Node::Uav2),
            "uav3" => Ok(Node::Uav3),
            other => Err(Error::invalid(format!("unknown node '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageResult {
    pub scheme: Scheme,
    pub node: Node,
    /// In [0, 1]; exactly 1 when `threshold` is infinite.
    pub probability: f64,
    pub threshold: Threshold,
    pub converged: bool,
    /// Residual-SI means used at the full-duplex GS (ε applied once).
    pub residual_si: Option<ResidualSiMeans>,
}

impl OutageResult {
    fn new(scheme: Scheme, node: Node, threshold: Threshold, series: SeriesOutcome) -> Self {
        OutageResult {
            scheme,
            node,
            probability: series.probability,
            threshold,
            converged: series.converged,
            residual_si: None,
        }
    }
}

/// SIC user (UAV-2) keeps a β fraction of the UAV-3 signal; the
/// interference-ignorant UAV-3 sees all of UAV-2's.
fn downlink_threshold(cfg: &SystemConfig, node: Node, gamma: f64) -> Result<Threshold> {
    match node {
        Node::Uav2 => Ok(noma_effective_threshold(gamma, cfg.a_gs2, cfg.beta)),
        Node::Uav3 => Ok(noma_effective_threshold(gamma, cfg.a_gs3(), 1.0)),
        Node::Gs => Err(Error::invalid("downlink outage requested for the ground station")),
    }
}

fn scheme_threshold(cfg: &SystemConfig, scheme: Scheme) -> f64 {
    sinr_threshold(rate_for(scheme, cfg.r_oma))
}

/// Full-duplex GS: uplink signal against phase-noise SI (Rician shadowed) and
/// estimation-error SI (exponential).
pub fn outage_fd_gs(cfg: &SystemConfig) -> Result<OutageResult> {
    let links = cfg.link_powers()?;
    let threshold = Threshold::Finite(scheme_threshold(cfg, Scheme::FdNoma));
    let mut interferers: Vec<&dyn PowerMoments> = vec![&links.si_phase_noise];
    if let Some(est) = &links.si_estimation_error {
        interferers.push(est);
    }
    let series = series_outage(&links.uav1_gs, &interferers, threshold, cfg.k_tr)?;
    Ok(OutageResult {
        residual_si: Some(links.residual_si),
        ..OutageResult::new(Scheme::FdNoma, Node::Gs, threshold, series)
    })
}

/// Full-duplex downlink UAV: NOMA-adjusted threshold, uplink UAV-1 as the
/// single interferer.
pub fn outage_fd_uav(cfg: &SystemConfig, node: Node) -> Result<OutageResult> {
    let links = cfg.link_powers()?;
    let threshold = downlink_threshold(cfg, node, scheme_threshold(cfg, Scheme::FdNoma))?;
    let (desired, uplink) = match node {
        Node::Uav2 => (&links.gs_uav2, &links.uav1_uav2),
        _ => (&links.gs_uav3, &links.uav1_uav3),
    };
    let series = series_outage(desired, &[uplink], threshold, cfg.k_tr)?;
    Ok(OutageResult::new(Scheme::FdNoma, node, threshold, series))
}

pub fn outage_hd_gs(cfg: &SystemConfig) -> Result<OutageResult> {
    interference_free_gs(cfg, Scheme::HdNoma)
}

/// Half-duplex NOMA downlink: no uplink interference, NOMA threshold only.
pub fn outage_hd_uav(cfg: &SystemConfig, node: Node) -> Result<OutageResult> {
    let links = cfg.link_powers()?;
    let threshold = downlink_threshold(cfg, node, scheme_threshold(cfg, Scheme::HdNoma))?;
    let desired = if node == Node::Uav2 {
        &links.gs_uav2
    } else {
        &links.gs_uav3
    };
    let series = series_outage(desired, &[], threshold, cfg.k_tr)?;
    Ok(OutageResult::new(Scheme::HdNoma, node, threshold, series))
}

pub fn outage_oma_gs(cfg: &SystemConfig) -> Result<OutageResult> {
    interference_free_gs(cfg, Scheme::HdOma)
}

pub fn outage_oma_uav(cfg: &SystemConfig, node: Node) -> Result<OutageResult> {
    let links = cfg.link_powers()?;
    let desired = match node {
        Node::Uav2 => &links.gs_uav2,
        Node::Uav3 => &links.gs_uav3,
        Node::Gs => return Err(Error::invalid("downlink outage requested for the ground station")),
    };
    let gamma = scheme_threshold(cfg, Scheme::HdOma);
    let series = desired.cdf_truncated(gamma, cfg.k_tr)?;
    Ok(OutageResult::new(Scheme::HdOma, node, Threshold::Finite(gamma), series))
}

fn interference_free_gs(cfg: &SystemConfig, scheme: Scheme) -> Result<OutageResult> {
    let links = cfg.link_powers()?;
    let gamma = scheme_threshold(cfg, scheme);
    let series = links.uav1_gs.cdf_truncated(gamma, cfg.k_tr)?;
    Ok(OutageResult::new(scheme, Node::Gs, Threshold::Finite(gamma), series))
}

/// Dispatches to the evaluator for `(scheme, node)`.
pub fn closed_form_outage(cfg: &SystemConfig, scheme: Scheme, node: Node) -> Result<OutageResult> {
    match (scheme, node) {
        (Scheme::FdNoma, Node::Gs) => outage_fd_gs(cfg),
        (Scheme::FdNoma, n) => outage_fd_uav(cfg, n),
        (Scheme::HdNoma, Node::Gs) => outage_hd_gs(cfg),
        (Scheme::HdNoma, n) => outage_hd_uav(cfg, n),
        (Scheme::HdOma, Node::Gs) => outage_oma_gs(cfg),
        (Scheme::HdOma, n) => outage_oma_uav(cfg, n),
    }
}
