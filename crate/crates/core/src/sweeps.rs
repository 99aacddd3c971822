//! Separation sweeps, optimal rail separation and power-law fits.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_nonnegative, Error, Result};
use crate::modes::{
    mode_average_with_table, ChannelGeometry, ModeAverage, ModeOptions, RadialTable,
};
use crate::params::ModelParams;
use crate::scattering::scattering_amplitudes;

/// Golden-section termination width.
const SEPARATION_TOLERANCE: f64 = 1e-4;
/// Points of the coarse scan that locates the bracketing triple.
const COARSE_POINTS: usize = 41;
const MAX_EXPANSIONS: usize = 8;

/// One row of a parameter sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub d_b: f64,
    pub separation: f64,
    pub waist: f64,
    pub eta: Option<f64>,
    pub figure_of_merit: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub optimal_separation: Option<f64>,
    pub rtol: f64,
    pub truncation_estimate: f64,
    /// Solver failure at this point; the sweep continues past it.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl SweepRecord {
    fn new(
        model: &ModelParams,
        separation: f64,
        waist: f64,
        opts: &ModeOptions,
        m: Result<ModeAverage>,
    ) -> Self {
        let mut rec = SweepRecord {
            d_b: model.d_b,
            separation,
            waist,
            eta: None,
            figure_of_merit: None,
            optimal_separation: None,
            rtol: opts.solver.rtol,
            truncation_estimate: 0.0,
            error: None,
        };
        match m {
            Ok(m) => {
                rec.eta = Some(m.efficiency());
                rec.figure_of_merit = Some(m.figure_of_merit());
                rec.truncation_estimate = m.truncation_estimate;
            }
            Err(e) => rec.error = Some(e.to_string()),
        }
        rec
    }
}

/// Evaluates mode averages at varying separation for a fixed waist.
#[derive(Debug, Clone)]
pub struct SeparationEvaluator {
    model: ModelParams,
    waist: f64,
    opts: ModeOptions,
    table: Option<RadialTable>,
}

impl SeparationEvaluator {
    /// Prepares evaluation for separations up to `max_separation`.
    pub fn new(
        model: &ModelParams,
        waist: f64,
        max_separation: f64,
        opts: &ModeOptions,
    ) -> Result<Self> {
        ensure_nonnegative("waist", waist)?;
        ensure_nonnegative("separation", max_separation)?;
        let table = if waist > 0.0 {
            Some(RadialTable::build(
                model,
                max_separation + 8.0 * waist + 4.0,
                opts,
            )?)
        } else {
            None
        };
        Ok(SeparationEvaluator {
            model: *model,
            waist,
            opts: *opts,
            table,
        })
    }

    pub fn max_separation(&self) -> f64 {
        match &self.table {
            Some(t) => t.range() - 8.0 * self.waist - 4.0,
            None => f64::INFINITY,
        }
    }

    pub fn evaluate(&self, separation: f64) -> Result<ModeAverage> {
        ensure_nonnegative("separation", separation)?;
        match &self.table {
            Some(table) => {
                let g = ChannelGeometry::symmetric(separation, self.waist)?;
                mode_average_with_table(table, &g, &self.opts)
            }
            None => {
                let s = scattering_amplitudes(&self.model, separation, &self.opts.solver)?;
                Ok(ModeAverage {
                    t_bar: s.t,
                    h_bar: s.h,
                    h2_bar: s.h * s.h,
                    quadrature_error: 0.0,
                    interpolation_error: 0.0,
                    truncation_estimate: s.truncation_estimate,
                })
            }
        }
    }

    pub fn efficiency(&self, separation: f64) -> Result<f64> {
        self.evaluate(separation).map(|m| m.efficiency())
    }
}

/// Exchange efficiency and figure of merit over a grid of separations.
///
/// Failures at individual points are recorded in the row instead of aborting.
pub fn sweep_separation(
    model: &ModelParams,
    separations: &[f64],
    waist: f64,
    opts: &ModeOptions,
) -> Result<Vec<SweepRecord>> {
    for (k, &l) in separations.iter().enumerate() {
        ensure_nonnegative("separation", l)?;
        if k > 0 && l < separations[k - 1] {
            return Err(Error::Configuration(
                "separation grid must be sorted".into(),
            ));
        }
    }
    let Some(&l_max) = separations.last() else {
        return Ok(Vec::new());
    };
    let eval = SeparationEvaluator::new(model, waist, l_max, opts)?;
    let rows = crate::par_map(separations, |&l| {
        SweepRecord::new(model, l, waist, opts, eval.evaluate(l))
    });
    Ok(rows)
}

/// Maximum of the exchange efficiency over the rail separation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Optimum {
    pub separation: f64,
    pub eta: f64,
    pub figure_of_merit: f64,
    /// Final bracket searched, after any expansion.
    pub bracket: (f64, f64),
    pub evaluations: usize,
}

/// Default search interval; the optimum sits near the hopping radius for
/// strong interactions and near one blockade radius for weak ones.
pub fn default_bracket(d_b: f64) -> (f64, f64) {
    (0.0, 2.0 + 2.0 * d_b.sqrt())
}

/// Separation maximising the exchange efficiency.
///
/// A coarse scan locates the best grid point (expanding the interval while the
/// maximum sits on its right edge), then golden-section search refines it.
pub fn optimal_separation(
    model: &ModelParams,
    waist: f64,
    bracket: Option<(f64, f64)>,
    opts: &ModeOptions,
) -> Result<Optimum> {
    let (lo, mut hi) = bracket.unwrap_or_else(|| default_bracket(model.d_b));
    ensure_nonnegative("bracket lower end", lo)?;
    if !hi.is_finite() || hi <= lo {
        return Err(Error::Bracket { lo, hi });
    }
    if model.d_b == 0.0 {
        return Err(Error::Bracket { lo, hi });
    }

    let mut evaluations = 0;
    let mut expansions = 0;
    let (eval, grid, values) = loop {
        let eval = SeparationEvaluator::new(model, waist, hi, opts)?;
        let grid: Vec<f64> = (0..COARSE_POINTS)
            .map(|k| lo + (hi - lo) * k as f64 / (COARSE_POINTS - 1) as f64)
            .collect();
        let values = crate::par_map(&grid, |&l| eval.efficiency(l))
            .into_iter()
            .collect::<Result<Vec<f64>>>()?;
        evaluations += COARSE_POINTS;
        let best = argmax(&values);
        if best + 1 < COARSE_POINTS {
            break (eval, grid, values);
        }
        expansions += 1;
        if expansions > MAX_EXPANSIONS {
            return Err(Error::Bracket { lo, hi });
        }
        hi = lo + 2.0 * (hi - lo);
    };

    let best = argmax(&values);
    if best == 0 {
        return Err(Error::Bracket { lo, hi });
    }
    let (mut a, mut b) = (grid[best - 1], grid[best + 1]);
    let inv_phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = eval.efficiency(x1)?;
    let mut f2 = eval.efficiency(x2)?;
    evaluations += 2;
    while b - a > SEPARATION_TOLERANCE {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = eval.efficiency(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = eval.efficiency(x2)?;
        }
        evaluations += 1;
    }
    let mut separation = 0.5 * (a + b);
    let mut m = eval.evaluate(separation)?;
    evaluations += 1;
    // keep the coarse grid point if refinement somehow lost to it
    if values[best] > m.efficiency() {
        separation = grid[best];
        m = eval.evaluate(separation)?;
    }
    Ok(Optimum {
        separation,
        eta: m.efficiency(),
        figure_of_merit: m.figure_of_merit(),
        bracket: (lo, hi),
        evaluations,
    })
}

fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (k, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = k;
        }
    }
    best
}

/// Least-squares line through `(ln x, ln y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub prefactor: f64,
    /// Smallest and largest abscissa used.
    pub window: (f64, f64),
    /// RMS residual in natural-log space.
    pub residual: f64,
}

impl PowerLawFit {
    pub fn eval(&self, x: f64) -> f64 {
        self.prefactor * x.powf(self.exponent)
    }
}

/// Fits `y = c x^alpha`.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<PowerLawFit> {
    if points.len() < 4 {
        return Err(Error::Configuration(format!(
            "power-law fit needs at least 4 points, got {}",
            points.len()
        )));
    }
    for &(x, y) in points {
        for (field, v) in [("abscissa", x), ("value", y)] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::Domain {
                    field,
                    value: v,
                    reason: "power-law data must be positive",
                });
            }
        }
    }
    let n = points.len() as f64;
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Configuration(
            "power-law fit needs distinct abscissae".into(),
        ));
    }
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let residual = (logs
        .iter()
        .map(|p| (p.1 - intercept - exponent * p.0).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    let xs = points.iter().map(|p| p.0);
    let window = (
        xs.clone().fold(f64::INFINITY, f64::min),
        xs.fold(f64::NEG_INFINITY, f64::max),
    );
    Ok(PowerLawFit {
        exponent,
        prefactor: intercept.exp(),
        window,
        residual,
    })
}

/// `n` logarithmically spaced values from `a` to `b` inclusive.
pub fn logspace(a: f64, b: f64, n: usize) -> Result<Vec<f64>> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::Configuration(format!(
            "logspace endpoints must be positive, got ({a}, {b})"
        )));
    }
    Ok(match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n)
            .map(|k| {
                if k == 0 {
                    a
                } else if k + 1 == n {
                    b
                } else {
                    (a.ln() + (b.ln() - a.ln()) * k as f64 / (n - 1) as f64).exp()
                }
            })
            .collect(),
    })
}

/// Scaling study settings: optimum per `d_b` on a log grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingWindow {
    pub d_b_min: f64,
    pub d_b_max: f64,
    pub points: usize,
    pub waist: f64,
}

impl Default for ScalingWindow {
    fn default() -> Self {
        ScalingWindow {
            d_b_min: 50.0,
            d_b_max: 1000.0,
            points: 12,
            waist: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingStudy {
    pub window: ScalingWindow,
    pub optima: Vec<(f64, Optimum)>,
    /// `L_opt` against `d_b`.
    pub separation_fit: PowerLawFit,
    /// `1 - F` at `L_opt` against `d_b`.
    pub infidelity_fit: PowerLawFit,
}

pub fn scaling_study(
    window: &ScalingWindow,
    sign: crate::params::Sign,
    opts: &ModeOptions,
) -> Result<ScalingStudy> {
    let d_bs = logspace(window.d_b_min, window.d_b_max, window.points)?;
    let mut optima = Vec::with_capacity(d_bs.len());
    for &d_b in &d_bs {
        let model = ModelParams::dimensionless(d_b, sign)?;
        optima.push((d_b, optimal_separation(&model, window.waist, None, opts)?));
    }
    let separation_fit = fit_power_law(
        &optima
            .iter()
            .map(|(d, o)| (*d, o.separation))
            .collect::<Vec<_>>(),
    )?;
    let infidelity_fit = fit_power_law(
        &optima
            .iter()
            .map(|(d, o)| (*d, 1.0 - o.figure_of_merit))
            .collect::<Vec<_>>(),
    )?;
    Ok(ScalingStudy {
        window: *window,
        optima,
        separation_fit,
        infidelity_fit,
    })
}
