//! Scenario parameters shared by the closed-form evaluators and the simulator.

use crate::channel::{ExponentialParams, RicianShadowedParams, DEFAULT_TRUNCATION_ORDER, MAX_TRUNCATION_ORDER};
use crate::error::{Error, Result};

/// Euclidean distances (km) between the ground station (g) and UAVs 1–3.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeGeometry {
    pub d_1g: f64,
    pub d_g2: f64,
    pub d_g3: f64,
    pub d_12: f64,
    pub d_13: f64,
    pub pathloss_exp: f64,
}

impl NodeGeometry {
    /// Reference layout; the inter-UAV distances are example values.
    pub fn reference() -> Self {
        NodeGeometry {
            d_1g: 3.0,
            d_g2: 2.0,
            d_g3: 3.0,
            d_12: 2.0,
            d_13: 3.0,
            pathloss_exp: 2.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, d) in [
            ("d_1g", self.d_1g),
            ("d_g2", self.d_g2),
            ("d_g3", self.d_g3),
            ("d_12", self.d_12),
            ("d_13", self.d_13),
        ] {
            if d.is_nan() || d <= 0.0 {
                return Err(Error::invalid(format!("{name} must be > 0 km, got {d}")));
            }
        }
        if self.d_g2 >= self.d_g3 {
            return Err(Error::invalid(format!(
                "geometry requires 0 < d_g2 < d_g3, got d_g2 = {}, d_g3 = {}",
                self.d_g2, self.d_g3
            )));
        }
        if !(self.pathloss_exp >= 1.0 && self.pathloss_exp.is_finite()) {
            return Err(Error::invalid(format!(
                "pathloss_exp must be >= 1, got {}",
                self.pathloss_exp
            )));
        }
        Ok(())
    }
}

/// Fading shape (K, m) per link, each with unit mean power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingSet {
    pub uav1_gs: RicianShadowedParams,
    /// SI channel before phase-noise scaling.
    pub self_interference: RicianShadowedParams,
    pub gs_uav2: RicianShadowedParams,
    pub gs_uav3: RicianShadowedParams,
    pub uav1_uav2: RicianShadowedParams,
    pub uav1_uav3: RicianShadowedParams,
}

impl FadingSet {
    /// Suburban reference: K = 10 on every link, heavier shadowing (m = 3)
    /// on the links into UAV-2, m = 10 elsewhere.
    pub fn reference() -> Self {
        let light = RicianShadowedParams::new(1.0, 10.0, 10.0).expect("valid");
        let heavy = RicianShadowedParams::new(1.0, 10.0, 3.0).expect("valid");
        FadingSet {
            uav1_gs: light,
            self_interference: light,
            gs_uav2: heavy,
            gs_uav3: light,
            uav1_uav2: heavy,
            uav1_uav3: light,
        }
    }
}

/// Complete scenario at one transmit power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConfig {
    /// Transmit power in dB relative to the receiver noise floor.
    pub p_t_db: f64,
    /// Half-duplex OMA rate in bit/s/Hz; the NOMA schemes derive theirs.
    pub r_oma: f64,
    /// Downlink power fraction for UAV-2 (UAV-3 gets the rest).
    pub a_gs2: f64,
    /// Residual interference left by imperfect SIC at UAV-2.
    pub beta: f64,
    /// Phase-noise strength γ_φ² in dBm.
    pub phase_noise_dbm: f64,
    /// Receiver noise σ² in dBm.
    pub noise_dbm: f64,
    /// Variance scale of the SI channel estimation error.
    pub epsilon: f64,
    pub k_tr: u32,
    pub geometry: NodeGeometry,
    pub fading: FadingSet,
}

impl Default for SystemConfig {
    fn default() -> Self {
        Self::reference()
    }
}

impl SystemConfig {
    pub fn reference() -> Self {
        SystemConfig {
            p_t_db: 10.0,
            r_oma: 0.2,
            a_gs2: 0.5,
            beta: 0.1,
            phase_noise_dbm: -140.0,
            noise_dbm: -131.0,
            epsilon: 0.1,
            k_tr: DEFAULT_TRUNCATION_ORDER,
            geometry: NodeGeometry::reference(),
            fading: FadingSet::reference(),
        }
    }

    pub fn with_pt_db(&self, p_t_db: f64) -> Self {
        SystemConfig { p_t_db, ..*self }
    }

    pub fn with_k_tr(&self, k_tr: u32) -> Self {
        SystemConfig { k_tr, ..*self }
    }

    pub fn a_gs3(&self) -> f64 {
        1.0 - self.a_gs2
    }

    pub fn validate(&self) -> Result<()> {
        if !self.p_t_db.is_finite() {
            return Err(Error::invalid(format!("p_t_db must be finite, got {}", self.p_t_db)));
        }
        if !(self.r_oma >= 0.0 && self.r_oma.is_finite()) {
            return Err(Error::invalid(format!("r_oma must be >= 0, got {}", self.r_oma)));
        }
        if !(self.a_gs2 > 0.0 && self.a_gs2 < 1.0) {
            return Err(Error::invalid(format!(
                "a_gs2 must satisfy 0 < a_gs2 < 1, got {}",
                self.a_gs2
            )));
        }
        if !(0.0..=1.0).contains(&self.beta) {
            return Err(Error::invalid(format!(
                "beta must satisfy 0 <= beta <= 1, got {}",
                self.beta
            )));
        }
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return Err(Error::invalid(format!("epsilon must be >= 0, got {}", self.epsilon)));
        }
        if !(self.phase_noise_dbm.is_finite() && self.noise_dbm.is_finite()) {
            return Err(Error::invalid("phase_noise_dbm and noise_dbm must be finite"));
        }
        if self.k_tr > MAX_TRUNCATION_ORDER {
            return Err(Error::invalid(format!(
                "k_tr must be <= {MAX_TRUNCATION_ORDER}, got {}",
                self.k_tr
            )));
        }
        self.geometry.validate()
    }

    /// The single place where dB quantities become linear.
    pub fn link_budget(&self) -> LinkBudget {
        LinkBudget {
            transmit_power: db_to_linear(self.p_t_db),
            pathloss_exp: self.geometry.pathloss_exp,
            phase_noise_to_noise: db_to_linear(self.phase_noise_dbm - self.noise_dbm),
        }
    }

    /// Mean-scaled power distribution of every link at this transmit power.
    pub fn link_powers(&self) -> Result<LinkPowers> {
        self.validate()?;
        let budget = self.link_budget();
        let g = &self.geometry;
        let f = &self.fading;
        let scaled = |shape: &RicianShadowedParams, d: f64| shape.with_mean_power(budget.received(d));
        let si = budget.residual_si(self.epsilon);
        Ok(LinkPowers {
            uav1_gs: scaled(&f.uav1_gs, g.d_1g)?,
            si_phase_noise: f.self_interference.with_mean_power(si.phase_noise_mean)?,
            si_estimation_error: (si.estimation_error_mean > 0.0)
                .then(|| ExponentialParams::new(si.estimation_error_mean))
                .transpose()?,
            gs_uav2: scaled(&f.gs_uav2, g.d_g2)?,
            gs_uav3: scaled(&f.gs_uav3, g.d_g3)?,
            uav1_uav2: scaled(&f.uav1_uav2, g.d_12)?,
            uav1_uav3: scaled(&f.uav1_uav3, g.d_13)?,
            residual_si: si,
        })
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Noise-normalised received-power scaling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    /// P_t / σ², linear.
    pub transmit_power: f64,
    pub pathloss_exp: f64,
    /// γ_φ² / σ², linear.
    pub phase_noise_to_noise: f64,
}

impl LinkBudget {
    /// P_t / d^n.
    pub fn received(&self, distance_km: f64) -> f64 {
        self.transmit_power / distance_km.powf(self.pathloss_exp)
    }

    /// Mean powers of the two residual self-interference terms; the SI power
    /// equals the transmit power and the SI channel has unit mean. ε scales the
    /// estimation-error power once.
    pub fn residual_si(&self, epsilon: f64) -> ResidualSiMeans {
        ResidualSiMeans {
            phase_noise_mean: self.transmit_power * self.phase_noise_to_noise,
            estimation_error_mean: self.transmit_power * epsilon,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualSiMeans {
    /// Mean of P_si·γ_φ²·|h_si|² (Rician shadowed).
    pub phase_noise_mean: f64,
    /// Mean of P_si·ε·|h̃_si|² (exponential).
    pub estimation_error_mean: f64,
}

/// Received-power distributions of every link at one operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkPowers {
    pub uav1_gs: RicianShadowedParams,
    pub si_phase_noise: RicianShadowedParams,
    /// `None` when ε = 0.
    pub si_estimation_error: Option<ExponentialParams>,
    pub gs_uav2: RicianShadowedParams,
    pub gs_uav3: RicianShadowedParams,
    pub uav1_uav2: RicianShadowedParams,
    pub uav1_uav3: RicianShadowedParams,
    pub residual_si: ResidualSiMeans,
}
