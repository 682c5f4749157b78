//! Transmit-power sweeps over every requested (scheme, node) pair, with the
//! closed form and optionally the Monte Carlo oracle side by side.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::montecarlo::{mc_outage, McSettings};
use crate::outage::{closed_form_outage, Node, Scheme, SystemConfig};

mod config;
mod output;

pub use config::{load_config, parse_config, reference_config_path, Scenario};
pub use output::{emit_csv, emit_plot_data, format_sig, write_csv, write_plot_data, CSV_HEADER};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub pt_start_db: f64,
    pub pt_stop_db: f64,
    pub pt_step_db: f64,
    pub schemes: BTreeSet<Scheme>,
    pub nodes: BTreeSet<Node>,
    pub with_mc: bool,
    pub mc: McSettings,
}

impl SweepSpec {
    /// One point at `pt_db` for every scheme and node, no simulation.
    pub fn single(pt_db: f64) -> Self {
        SweepSpec {
            pt_start_db: pt_db,
            pt_stop_db: pt_db,
            pt_step_db: 1.0,
            schemes: Scheme::ALL.into_iter().collect(),
            nodes: Node::ALL.into_iter().collect(),
            with_mc: false,
            mc: McSettings::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.pt_step_db > 0.0 && self.pt_step_db.is_finite()) {
            return Err(Error::invalid(format!(
                "pt_step_db must be > 0, got {}",
                self.pt_step_db
            )));
        }
        if !(self.pt_start_db.is_finite() && self.pt_stop_db.is_finite()) {
            return Err(Error::invalid("pt_start_db and pt_stop_db must be finite"));
        }
        if self.pt_start_db > self.pt_stop_db {
            return Err(Error::invalid(format!(
                "sweep requires pt_start_db <= pt_stop_db, got {} > {}",
                self.pt_start_db, self.pt_stop_db
            )));
        }
        if self.schemes.is_empty() || self.nodes.is_empty() {
            return Err(Error::invalid("sweep needs at least one scheme and one node"));
        }
        self.mc.validate()
    }

    /// start, start + step, … up to stop (inclusive, with a small tolerance
    /// so that decimal steps land on the end point).
    pub fn power_points(&self) -> Vec<f64> {
        let span = (self.pt_stop_db - self.pt_start_db) / self.pt_step_db;
        let count = (span + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|i| self.pt_start_db + i as f64 * self.pt_step_db)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub scheme: Scheme,
    pub node: Node,
    pub pt_db: f64,
    /// `None` when the closed form failed; see `error`.
    pub closed_form: Option<f64>,
    pub converged: bool,
    pub mc_probability: Option<f64>,
    pub mc_std_error: Option<f64>,
    pub error: Option<String>,
}

impl SweepRow {
    pub fn failed(&self) -> bool {
        self.error.is_some()
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepTable {
    /// Sorted by (scheme, node, pt_db).
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    /// True when every row evaluated and its series converged.
    pub fn all_converged(&self) -> bool {
        self.rows.iter().all(|r| !r.failed() && r.converged)
    }
}

/// Evaluates one row. Closed-form and simulation errors are recorded on the
/// row rather than returned.
pub fn evaluate_point(cfg: &SystemConfig, scheme: Scheme, node: Node, pt_db: f64, mc: Option<&McSettings>) -> SweepRow {
    let cfg = cfg.with_pt_db(pt_db);
    let mut row = SweepRow {
        scheme,
        node,
        pt_db,
        closed_form: None,
        converged: false,
        mc_probability: None,
        mc_std_error: None,
        error: None,
    };
    let mut errors = Vec::new();
    match closed_form_outage(&cfg, scheme, node) {
        Ok(r) => {
            row.closed_form = Some(r.probability);
            row.converged = r.converged;
        }
        Err(e) => errors.push(format!("closed form: {e}")),
    }
    if let Some(mc) = mc {
        match mc_outage(&cfg, scheme, node, mc) {
            Ok(e) => {
                row.mc_probability = Some(e.probability);
                row.mc_std_error = Some(e.std_error);
            }
            Err(e) => errors.push(format!("monte carlo: {e}")),
        }
    }
    if !errors.is_empty() {
        row.error = Some(errors.join("; "));
    }
    row
}

pub fn run_sweep(cfg: &SystemConfig, spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    let mc = spec.with_mc.then_some(&spec.mc);
    let points = spec.power_points();
    let tasks: Vec<(Scheme, Node, f64)> = spec
        .schemes
        .iter()
        .flat_map(|&s| spec.nodes.iter().map(move |&n| (s, n)))
        .flat_map(|(s, n)| points.iter().map(move |&p| (s, n, p)))
        .collect();
    let mut rows: Vec<SweepRow> = tasks
        .par_iter()
        .map(|&(s, n, p)| evaluate_point(cfg, s, n, p, mc))
        .collect();
    rows.sort_by(|a, b| {
        (a.scheme, a.node)
            .cmp(&(b.scheme, b.node))
            .then(a.pt_db.total_cmp(&b.pt_db))
    });
    Ok(SweepTable { rows })
}
