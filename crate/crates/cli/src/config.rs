use std::fs;
use std::path::{Path, PathBuf};

use lienard::cycles::CycleOptions;
use lienard::rotate::{ConstructOptions, Slot, SlotSweep};
use lienard::{Sign, SystemSpec};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Sweep plan as read from JSON; the template is any system spec.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanSpec {
    pub template: SystemSpec,
    pub order: Vec<SlotSweep<f64>>,
}

/// Every key a run can use. Config files and flags fill the same fields;
/// flags win.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub system: Option<SystemSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_escape: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_return: Option<f64>,

    // index
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,

    // construct / certify
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_odd: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub even_signs: Option<Vec<Sign>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub leading: Option<Sign>,

    // sweep
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plan: Option<PlanSpec>,

    // certify
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slot: Option<Slot>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,

    // portrait
    #[serde(skip_serializing_if = "Option::is_none")]
    pub starts: Option<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv_dir: Option<PathBuf>,
}

macro_rules! overlay {
    ($dst:ident, $src:ident; $($f:ident),* $(,)?) => {
        $( if $src.$f.is_some() { $dst.$f = $src.$f; } )*
    };
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Fields set in `over` replace ours.
    pub fn overlay(mut self, over: RunConfig) -> Self {
        overlay!(self, over;
            system, seed, tol, samples, r_min, r_max, r_escape, t_return,
            x, y, radius, k, l, beta_odd, even_signs, ratio, budget, leading,
            plan, slot, values, starts, t_max, csv_dir,
        );
        self
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let positive = [
            ("tol", self.tol),
            ("r_min", self.r_min),
            ("r_max", self.r_max),
            ("r_escape", self.r_escape),
            ("t_return", self.t_return),
            ("radius", self.radius),
            ("ratio", self.ratio),
        ];
        for (name, v) in positive {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(CliError::Config(format!("{name} must be positive and finite, got {v}")));
                }
            }
        }
        if self.samples == Some(0) {
            return Err(CliError::Config("samples must be at least 1".into()));
        }
        if let (Some(a), Some(b)) = (self.r_min, self.r_max) {
            if a > b {
                return Err(CliError::Config(format!("r_min {a} exceeds r_max {b}")));
            }
        }
        Ok(())
    }

    pub fn system(&self) -> Result<lienard::System64, CliError> {
        let spec = self.system.as_ref().ok_or_else(|| CliError::Config("no system given".into()))?;
        spec.to_system().map_err(|e| CliError::Config(e.to_string()))
    }

    /// Cycle options with every default made explicit, written back so the
    /// report carries the values actually used.
    pub fn resolve_cycle_options(&mut self) -> CycleOptions<f64> {
        let d = CycleOptions::default();
        let tol = *self.tol.get_or_insert(d.tol);
        let samples = *self.samples.get_or_insert(d.n_samples);
        let r_min = *self.r_min.get_or_insert(d.r_min);
        let t_return = *self.t_return.get_or_insert(d.t_return);
        CycleOptions { tol, n_samples: samples, r_min, r_max: self.r_max, r_escape: self.r_escape, t_return, ..d }
    }

    pub fn resolve_construct_options(&mut self) -> ConstructOptions<f64> {
        let d = ConstructOptions::default();
        ConstructOptions {
            ratio: *self.ratio.get_or_insert(d.ratio),
            budget: *self.budget.get_or_insert(d.budget),
            leading: *self.leading.get_or_insert(d.leading),
            ..d
        }
    }
}
