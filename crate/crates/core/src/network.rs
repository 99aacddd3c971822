//! Three-rail controlled-Z network built from two sequential collisions.
//!
//! A photon enters the propagating rail of the first collision and meets a
//! spin wave stored in its stationary rail. Each collision either transmits
//! the photon (amplitude `t`) or swaps photon and spin wave between the two
//! rails (amplitude `h`). Feedback routes send a photon leaving one rail into
//! the input of another, so that after a first swap the photon can collide
//! again with the spin wave, which now sits in the former photon rail.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modes::{mode_average, ChannelGeometry, GaussianChannel, ModeAverage, ModeOptions};
use crate::params::ModelParams;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Collision {
    /// Rail holding the spin wave.
    pub stationary: String,
    /// Rail carrying the photon.
    pub propagating: String,
    pub geometry: ChannelGeometry,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Feedback {
    pub from: String,
    pub to: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RailNetwork {
    pub rails: Vec<String>,
    pub collisions: Vec<Collision>,
    #[serde(default)]
    pub feedback: Vec<Feedback>,
}

impl RailNetwork {
    /// Rails A, B, C on a line with spacing `separation`: the spin wave starts
    /// in A, the photon enters B, and the output of A feeds C.
    pub fn three_rail(separation: f64, waist: f64) -> Result<Self> {
        let a = GaussianChannel::new([separation, 0.0], waist)?;
        let b = GaussianChannel::new([0.0, 0.0], waist)?;
        let c = GaussianChannel::new([-separation, 0.0], waist)?;
        Ok(RailNetwork {
            rails: vec!["A".into(), "B".into(), "C".into()],
            collisions: vec![
                Collision {
                    stationary: "A".into(),
                    propagating: "B".into(),
                    geometry: ChannelGeometry::new(b, a),
                },
                Collision {
                    stationary: "B".into(),
                    propagating: "C".into(),
                    geometry: ChannelGeometry::new(c, b),
                },
            ],
            feedback: vec![Feedback {
                from: "A".into(),
                to: "C".into(),
            }],
        })
    }

    pub fn validate(&self) -> Result<()> {
        let rails: BTreeSet<&str> = self.rails.iter().map(String::as_str).collect();
        if rails.len() != self.rails.len() {
            return Err(Error::Configuration("duplicate rail name".into()));
        }
        if self.collisions.is_empty() {
            return Err(Error::Configuration("network has no collisions".into()));
        }
        let known = |r: &str| {
            if rails.contains(r) {
                Ok(())
            } else {
                Err(Error::Configuration(format!("unknown rail '{r}'")))
            }
        };
        for c in &self.collisions {
            known(&c.stationary)?;
            known(&c.propagating)?;
            if c.stationary == c.propagating {
                return Err(Error::Configuration(format!(
                    "collision within a single rail '{}'",
                    c.stationary
                )));
            }
        }
        let mut routes = BTreeMap::new();
        for f in &self.feedback {
            known(&f.from)?;
            known(&f.to)?;
            if routes.insert(f.from.as_str(), f.to.as_str()).is_some() {
                return Err(Error::Configuration(format!(
                    "rail '{}' has more than one feedback route",
                    f.from
                )));
            }
        }
        for start in routes.keys() {
            let mut seen = BTreeSet::new();
            let mut at = *start;
            while let Some(next) = routes.get(at) {
                if !seen.insert(at) {
                    return Err(Error::Configuration(format!(
                        "feedback routing from '{start}' is cyclic"
                    )));
                }
                at = next;
            }
        }
        Ok(())
    }

    fn route(&self, rail: &str) -> String {
        let mut at = rail;
        while let Some(f) = self.feedback.iter().find(|f| f.from == at) {
            at = &f.to;
        }
        at.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    NoSwap,
    SingleSwap,
    DoubleSwap,
    /// More than two swaps, only possible in longer networks.
    MultiSwap(usize),
}

impl Branch {
    fn from_swaps(n: usize) -> Self {
        match n {
            0 => Branch::NoSwap,
            1 => Branch::SingleSwap,
            2 => Branch::DoubleSwap,
            n => Branch::MultiSwap(n),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Branch::NoSwap => "no-swap".into(),
            Branch::SingleSwap => "single-swap".into(),
            Branch::DoubleSwap => "double-swap".into(),
            Branch::MultiSwap(n) => format!("{n}-swap"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkOutcome {
    pub branch: Branch,
    pub amplitude: Complex64,
    pub probability: f64,
    pub photon_rail: String,
    pub spin_wave_rail: String,
    /// `arg(amplitude)` in `[0, 2 pi)`.
    pub phase: f64,
}

/// Mode-averaged amplitudes of one collision.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollisionAmplitudes {
    pub t_bar: Complex64,
    pub h_bar: Complex64,
    pub h2_bar: Complex64,
}

impl From<ModeAverage> for CollisionAmplitudes {
    fn from(m: ModeAverage) -> Self {
        CollisionAmplitudes {
            t_bar: m.t_bar,
            h_bar: m.h_bar,
            h2_bar: m.h2_bar,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkReport {
    pub collisions: Vec<CollisionAmplitudes>,
    pub outcomes: Vec<NetworkOutcome>,
    /// Norm missing from all branches.
    pub loss: f64,
    /// `|<H^2>|^2` of the first collision, the single-average figure of merit.
    pub figure_of_merit: f64,
    /// `|<H>|^4` of the first collision; equals the figure of merit at zero
    /// width.
    pub sequential_figure_of_merit: f64,
}

impl NetworkReport {
    pub fn branch(&self, b: Branch) -> Option<&NetworkOutcome> {
        self.outcomes.iter().find(|o| o.branch == b)
    }
}

pub fn wrap_phase(z: Complex64) -> f64 {
    let p = z.arg();
    if p < 0.0 {
        p + 2.0 * PI
    } else {
        p
    }
}

/// Branch ledger of a network with given per-collision amplitudes.
pub fn compose(
    net: &RailNetwork,
    amplitudes: &[CollisionAmplitudes],
) -> Result<Vec<NetworkOutcome>> {
    net.validate()?;
    if amplitudes.len() != net.collisions.len() {
        return Err(Error::Configuration(format!(
            "{} collision amplitudes for {} collisions",
            amplitudes.len(),
            net.collisions.len()
        )));
    }
    struct State {
        photon: String,
        spin: String,
        amplitude: Complex64,
        swaps: usize,
    }
    let first = &net.collisions[0];
    let mut states = vec![State {
        photon: first.propagating.clone(),
        spin: first.stationary.clone(),
        amplitude: Complex64::new(1.0, 0.0),
        swaps: 0,
    }];
    for (c, amp) in net.collisions.iter().zip(amplitudes) {
        let mut next = Vec::with_capacity(2 * states.len());
        for s in states {
            if s.photon != c.propagating || s.spin != c.stationary {
                next.push(s);
                continue;
            }
            next.push(State {
                photon: net.route(&c.propagating),
                spin: s.spin.clone(),
                amplitude: s.amplitude * amp.t_bar,
                swaps: s.swaps,
            });
            next.push(State {
                photon: net.route(&c.stationary),
                spin: c.propagating.clone(),
                amplitude: s.amplitude * amp.h_bar,
                swaps: s.swaps + 1,
            });
        }
        states = next;
        states.retain(|s| s.amplitude != Complex64::new(0.0, 0.0));
    }
    Ok(states
        .into_iter()
        .map(|s| NetworkOutcome {
            branch: Branch::from_swaps(s.swaps),
            amplitude: s.amplitude,
            probability: s.amplitude.norm_sqr(),
            phase: wrap_phase(s.amplitude),
            photon_rail: s.photon,
            spin_wave_rail: s.spin,
        })
        .collect())
}

/// Computes collision amplitudes from the model and composes the branches.
pub fn simulate_network(
    net: &RailNetwork,
    model: &ModelParams,
    opts: &ModeOptions,
) -> Result<NetworkReport> {
    net.validate()?;
    let collisions = net
        .collisions
        .iter()
        .map(|c| mode_average(model, &c.geometry, opts).map(CollisionAmplitudes::from))
        .collect::<Result<Vec<_>>>()?;
    let outcomes = compose(net, &collisions)?;
    let total: f64 = outcomes.iter().map(|o| o.probability).sum();
    let first = collisions[0];
    Ok(NetworkReport {
        loss: (1.0 - total).max(0.0),
        figure_of_merit: first.h2_bar.norm_sqr(),
        sequential_figure_of_merit: first.h_bar.norm_sqr().powi(2),
        collisions,
        outcomes,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthTableRow {
    /// Photon and spin-wave polarisation, e.g. `"RL"`.
    pub input: String,
    pub amplitude: Complex64,
    pub phase: f64,
    pub fidelity: f64,
    /// Network branch realising this row, absent for bypassing components.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch: Option<Branch>,
}

/// Controlled-Z truth table: only the `RR` component enters the network.
///
/// The `RR` row reports the double-swap branch, or the no-swap branch when no
/// exchange occurs at all.
pub fn cz_truth_table(
    net: &RailNetwork,
    model: &ModelParams,
    opts: &ModeOptions,
) -> Result<Vec<TruthTableRow>> {
    let report = simulate_network(net, model, opts)?;
    Ok(truth_table_from(&report))
}

pub fn truth_table_from(report: &NetworkReport) -> Vec<TruthTableRow> {
    let mut rows: Vec<TruthTableRow> = ["LL", "LR", "RL"]
        .iter()
        .map(|s| TruthTableRow {
            input: s.to_string(),
            amplitude: Complex64::new(1.0, 0.0),
            phase: 0.0,
            fidelity: 1.0,
            branch: None,
        })
        .collect();
    let rr = report
        .branch(Branch::DoubleSwap)
        .or_else(|| report.branch(Branch::NoSwap));
    rows.push(match rr {
        Some(o) => TruthTableRow {
            input: "RR".into(),
            amplitude: o.amplitude,
            phase: o.phase,
            fidelity: o.probability,
            branch: Some(o.branch),
        },
        None => TruthTableRow {
            input: "RR".into(),
            amplitude: Complex64::new(0.0, 0.0),
            phase: 0.0,
            fidelity: 0.0,
            branch: None,
        },
    });
    rows
}
