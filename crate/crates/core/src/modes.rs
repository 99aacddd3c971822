//! Gaussian rails and mode-averaged observables.
//!
//! A rail carries a Gaussian transverse mode with field
//! `sqrt(2 / (pi w^2)) exp(-|r - c|^2 / w^2)`, so `w` is the field 1/e
//! radius. For a photon in one rail and a spin wave in the other, the
//! relative-coordinate density of the product input state is again Gaussian,
//! centred on the separation vector with `w_eff^2 = (w_photon^2 + w_spin^2) / 2`.
//! Mode averages of `T`, `H` and `H^2` over that density give the exchange
//! efficiency `eta = |<H>|^2` and the double-exchange figure of merit
//! `F = |<H^2>|^2`.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_nonnegative, ensure_positive, Error, Result};
use crate::params::ModelParams;
use crate::quadrature::{GaussKronrod, Integrand};
use crate::scattering::{scattering_amplitudes, SolverOptions};
use crate::spline::CubicSpline;

/// Extent of the relative-density quadrature disc, in effective waists.
const DISC_RADIUS_IN_WAISTS: f64 = 7.0;
/// Number of direct solves used to estimate the table interpolation error.
const INTERPOLATION_PROBES: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianChannel {
    pub center: [f64; 2],
    /// Field 1/e radius. Zero denotes the zero-width limit.
    pub waist: f64,
}

impl GaussianChannel {
    pub fn new(center: [f64; 2], waist: f64) -> Result<Self> {
        ensure_nonnegative("waist", waist)?;
        for c in center {
            if !c.is_finite() {
                return Err(Error::Domain {
                    field: "center",
                    value: c,
                    reason: "must be finite",
                });
            }
        }
        Ok(GaussianChannel { center, waist })
    }

    /// Normalised mode field at `r` (requires a finite waist).
    pub fn field(&self, r: [f64; 2]) -> f64 {
        let w2 = self.waist * self.waist;
        let d2 = (r[0] - self.center[0]).powi(2) + (r[1] - self.center[1]).powi(2);
        (2.0 / (PI * w2)).sqrt() * (-d2 / w2).exp()
    }
}

/// Photon rail and spin-wave rail of one collision.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelGeometry {
    pub photon: GaussianChannel,
    pub spin_wave: GaussianChannel,
}

impl ChannelGeometry {
    pub fn new(photon: GaussianChannel, spin_wave: GaussianChannel) -> Self {
        ChannelGeometry { photon, spin_wave }
    }

    /// Two rails on the x axis, spin wave (rail A) at `+L/2`, photon (rail B)
    /// at `-L/2`, equal waists.
    pub fn symmetric(separation: f64, waist: f64) -> Result<Self> {
        ensure_nonnegative("separation", separation)?;
        Ok(ChannelGeometry {
            photon: GaussianChannel::new([-separation / 2.0, 0.0], waist)?,
            spin_wave: GaussianChannel::new([separation / 2.0, 0.0], waist)?,
        })
    }

    /// Photon centre minus spin-wave centre.
    pub fn offset(&self) -> [f64; 2] {
        [
            self.photon.center[0] - self.spin_wave.center[0],
            self.photon.center[1] - self.spin_wave.center[1],
        ]
    }

    pub fn separation(&self) -> f64 {
        let d = self.offset();
        d[0].hypot(d[1])
    }

    pub fn effective_waist(&self) -> f64 {
        ((self.photon.waist.powi(2) + self.spin_wave.waist.powi(2)) / 2.0).sqrt()
    }
}

/// Density of the relative transverse coordinate for a product input state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelativeDensity {
    pub offset: [f64; 2],
    pub effective_waist: f64,
}

impl RelativeDensity {
    pub fn eval(&self, r: [f64; 2]) -> f64 {
        let w2 = self.effective_waist * self.effective_waist;
        let d2 = (r[0] - self.offset[0]).powi(2) + (r[1] - self.offset[1]).powi(2);
        (-d2 / w2).exp() / (PI * w2)
    }
}

pub fn relative_density(g: &ChannelGeometry) -> RelativeDensity {
    RelativeDensity {
        offset: g.offset(),
        effective_waist: g.effective_waist(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeOptions {
    pub solver: SolverOptions,
    /// Chebyshev nodes of the radial amplitude table.
    pub table_nodes: usize,
    pub quad_abs_tol: f64,
    pub quad_rel_tol: f64,
}

impl Default for ModeOptions {
    fn default() -> Self {
        ModeOptions {
            solver: SolverOptions::default(),
            table_nodes: 2048,
            quad_abs_tol: 1e-12,
            quad_rel_tol: 1e-10,
        }
    }
}

/// Spline tables of `T(r)` and `H(r)` on `[0, range]`.
#[derive(Debug, Clone)]
pub struct RadialTable {
    t: CubicSpline<Complex64>,
    h: CubicSpline<Complex64>,
    /// Largest deviation from direct solves at probe points between nodes.
    pub interpolation_error: f64,
    pub truncation_estimate: f64,
}

impl RadialTable {
    pub fn build(model: &ModelParams, range: f64, opts: &ModeOptions) -> Result<Self> {
        ensure_positive("table range", range)?;
        let n = opts.table_nodes;
        if n < 8 {
            return Err(Error::Configuration(format!(
                "radial table needs at least 8 nodes, got {n}"
            )));
        }
        let nodes: Vec<f64> = (0..n)
            .map(|k| 0.5 * range * (1.0 - (PI * k as f64 / (n - 1) as f64).cos()))
            .collect();
        let solves = crate::par_map(&nodes, |&r| scattering_amplitudes(model, r, &opts.solver));
        let mut t = Vec::with_capacity(n);
        let mut h = Vec::with_capacity(n);
        let mut truncation_estimate: f64 = 0.0;
        for s in solves {
            let s = s?;
            t.push(s.t);
            h.push(s.h);
            truncation_estimate = truncation_estimate.max(s.truncation_estimate);
        }
        let mut table = RadialTable {
            t: CubicSpline::new(nodes.clone(), t)?,
            h: CubicSpline::new(nodes.clone(), h)?,
            interpolation_error: 0.0,
            truncation_estimate,
        };

        let probes: Vec<f64> = (0..INTERPOLATION_PROBES)
            .map(|j| {
                let k = (j * (n - 2)) / (INTERPOLATION_PROBES - 1);
                0.5 * (nodes[k] + nodes[k + 1])
            })
            .collect();
        let direct = crate::par_map(&probes, |&r| scattering_amplitudes(model, r, &opts.solver));
        for (r, s) in probes.iter().zip(direct) {
            let s = s?;
            let err = (table.t(*r) - s.t).norm().max((table.h(*r) - s.h).norm());
            table.interpolation_error = table.interpolation_error.max(err);
        }
        Ok(table)
    }

    /// Table covering every separation a geometry can probe.
    pub fn for_geometry(
        model: &ModelParams,
        g: &ChannelGeometry,
        opts: &ModeOptions,
    ) -> Result<Self> {
        Self::build(
            model,
            g.separation() + 8.0 * g.effective_waist() + 4.0,
            opts,
        )
    }

    pub fn range(&self) -> f64 {
        self.t.domain().1
    }

    pub fn t(&self, r: f64) -> Complex64 {
        self.t.eval(r)
    }

    pub fn h(&self, r: f64) -> Complex64 {
        self.h.eval(r)
    }
}

/// Mode averages of one collision.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeAverage {
    /// `<T>` over the relative density.
    pub t_bar: Complex64,
    /// `<H>`.
    pub h_bar: Complex64,
    /// `<H^2>`.
    pub h2_bar: Complex64,
    pub quadrature_error: f64,
    pub interpolation_error: f64,
    pub truncation_estimate: f64,
}

impl ModeAverage {
    /// Exchange efficiency `|<H>|^2`.
    pub fn efficiency(&self) -> f64 {
        self.h_bar.norm_sqr()
    }

    /// Double-exchange figure of merit `|<H^2>|^2`.
    pub fn figure_of_merit(&self) -> f64 {
        self.h2_bar.norm_sqr()
    }
}

#[derive(Debug, Clone, Copy)]
struct Triple([Complex64; 3]);

impl Add for Triple {
    type Output = Triple;
    fn add(self, o: Triple) -> Triple {
        Triple([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}
impl Sub for Triple {
    type Output = Triple;
    fn sub(self, o: Triple) -> Triple {
        Triple([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}
impl Mul<f64> for Triple {
    type Output = Triple;
    fn mul(self, s: f64) -> Triple {
        Triple([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }
}
impl Integrand for Triple {
    fn zero() -> Self {
        Triple([Complex64::new(0.0, 0.0); 3])
    }
    fn magnitude(&self) -> f64 {
        self.0.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Mode averages using a prebuilt table; zero-width geometries are point
/// evaluations of the table.
pub fn mode_average_with_table(
    table: &RadialTable,
    g: &ChannelGeometry,
    opts: &ModeOptions,
) -> Result<ModeAverage> {
    let l = g.separation();
    let w = g.effective_waist();
    if w == 0.0 {
        let (t, h) = (table.t(l), table.h(l));
        return Ok(ModeAverage {
            t_bar: t,
            h_bar: h,
            h2_bar: h * h,
            quadrature_error: 0.0,
            interpolation_error: table.interpolation_error,
            truncation_estimate: table.truncation_estimate,
        });
    }
    let disc = DISC_RADIUS_IN_WAISTS * w;
    if l + disc > table.range() {
        return Err(Error::Configuration(format!(
            "radial table covers r <= {}, geometry needs {}",
            table.range(),
            l + disc
        )));
    }

    // Polar coordinates around the density centre; the integrand is even in
    // the angle measured from the offset direction.
    let radial = |r: f64| {
        let h = table.h(r);
        Triple([table.t(r), h, h * h])
    };
    let inner_q = GaussKronrod::new(opts.quad_abs_tol * 0.1, opts.quad_rel_tol * 0.1);
    let outer_q = GaussKronrod::new(opts.quad_abs_tol, opts.quad_rel_tol);
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let inner_error = RefCell::new(0.0_f64);
    let w2 = w * w;

    let ring = |s: f64| -> Triple {
        let angular = inner_q.integrate(
            |theta: f64| radial((l * l + s * s + 2.0 * l * s * theta.cos()).max(0.0).sqrt()),
            0.0,
            PI,
        );
        match angular {
            Ok(e) => {
                let weight = 2.0 * s * (-s * s / w2).exp() / (PI * w2);
                *inner_error.borrow_mut() += e.error * weight;
                e.value * weight
            }
            Err(err) => {
                failure.borrow_mut().get_or_insert(err);
                Triple::zero()
            }
        }
    };
    let breaks: Vec<f64> = (0..=7).map(|k| k as f64 * disc / 7.0).collect();
    let outer = outer_q.integrate_with_breaks(ring, &breaks)?;
    if let Some(err) = failure.into_inner() {
        return Err(err);
    }
    Ok(ModeAverage {
        t_bar: outer.value.0[0],
        h_bar: outer.value.0[1],
        h2_bar: outer.value.0[2],
        quadrature_error: outer.error + inner_error.into_inner(),
        interpolation_error: table.interpolation_error,
        truncation_estimate: table.truncation_estimate,
    })
}

/// Mode-averaged amplitudes of one collision.
pub fn mode_average(
    model: &ModelParams,
    g: &ChannelGeometry,
    opts: &ModeOptions,
) -> Result<ModeAverage> {
    if g.effective_waist() == 0.0 {
        let s = scattering_amplitudes(model, g.separation(), &opts.solver)?;
        return Ok(ModeAverage {
            t_bar: s.t,
            h_bar: s.h,
            h2_bar: s.h * s.h,
            quadrature_error: 0.0,
            interpolation_error: 0.0,
            truncation_estimate: s.truncation_estimate,
        });
    }
    let table = RadialTable::for_geometry(model, g, opts)?;
    mode_average_with_table(&table, g, opts)
}

/// Exchange efficiency `eta = |<H>|^2`.
pub fn exchange_efficiency(
    model: &ModelParams,
    g: &ChannelGeometry,
    opts: &ModeOptions,
) -> Result<f64> {
    mode_average(model, g, opts).map(|m| m.efficiency())
}

/// Double-exchange figure of merit `F = |<H^2>|^2`.
pub fn gate_figure_of_merit(
    model: &ModelParams,
    g: &ChannelGeometry,
    opts: &ModeOptions,
) -> Result<f64> {
    mode_average(model, g, opts).map(|m| m.figure_of_merit())
}

/// Square sampling grid for density maps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub center: [f64; 2],
    pub half_width: f64,
    pub step: f64,
}

impl GridSpec {
    /// Grid centred between the rails, extending five waists past each.
    pub fn around(g: &ChannelGeometry) -> Result<Self> {
        let w_max = g.photon.waist.max(g.spin_wave.waist);
        let w_min = g.photon.waist.min(g.spin_wave.waist);
        ensure_positive("waist", w_min)?;
        let c = [
            0.5 * (g.photon.center[0] + g.spin_wave.center[0]),
            0.5 * (g.photon.center[1] + g.spin_wave.center[1]),
        ];
        Ok(GridSpec {
            center: c,
            half_width: 0.5 * g.separation() + 5.0 * w_max,
            step: w_min / 5.0,
        })
    }

    pub fn points_per_axis(&self) -> usize {
        (2.0 * self.half_width / self.step).round() as usize + 1
    }

    pub fn coordinate(&self, i: usize) -> [f64; 2] {
        let n = self.points_per_axis();
        let (ix, iy) = (i % n, i / n);
        [
            self.center[0] - self.half_width + ix as f64 * self.step,
            self.center[1] - self.half_width + iy as f64 * self.step,
        ]
    }

    fn validate(&self, g: &ChannelGeometry) -> Result<()> {
        ensure_positive("half_width", self.half_width)?;
        ensure_positive("step", self.step)?;
        for ch in [&g.photon, &g.spin_wave] {
            ensure_positive("waist", ch.waist)?;
            let reach = (ch.center[0] - self.center[0])
                .abs()
                .max((ch.center[1] - self.center[1]).abs())
                + 3.0 * ch.waist;
            if reach > self.half_width {
                return Err(Error::Configuration(format!(
                    "grid half-width {} does not cover the channel at {:?} (needs {reach})",
                    self.half_width, ch.center
                )));
            }
        }
        if self.points_per_axis() > 1001 {
            return Err(Error::Configuration(format!(
                "grid of {} points per axis is too fine",
                self.points_per_axis()
            )));
        }
        Ok(())
    }
}

/// Output photon and spin-wave densities on a grid (row-major, x fastest).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityMap {
    pub grid: GridSpec,
    pub points_per_axis: usize,
    pub photon_density: Vec<f64>,
    pub spin_wave_density: Vec<f64>,
    pub photon_norm: f64,
    pub spin_wave_norm: f64,
}

/// Summary of a density within one region of the map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionProfile {
    pub norm: f64,
    pub centroid: [f64; 2],
    /// Waist of the Gaussian with the same second moment.
    pub waist: f64,
}

impl DensityMap {
    /// Profile of `density` restricted to points where `inside` holds.
    pub fn profile(&self, density: &[f64], inside: impl Fn([f64; 2]) -> bool) -> RegionProfile {
        let da = self.grid.step * self.grid.step;
        let (mut norm, mut mx, mut my) = (0.0, 0.0, 0.0);
        for (i, d) in density.iter().enumerate() {
            let r = self.grid.coordinate(i);
            if inside(r) {
                norm += d * da;
                mx += d * da * r[0];
                my += d * da * r[1];
            }
        }
        let centroid = if norm > 0.0 {
            [mx / norm, my / norm]
        } else {
            [0.0, 0.0]
        };
        let mut second = 0.0;
        for (i, d) in density.iter().enumerate() {
            let r = self.grid.coordinate(i);
            if inside(r) {
                second += d * da * ((r[0] - centroid[0]).powi(2) + (r[1] - centroid[1]).powi(2));
            }
        }
        // intensity exp(-2 r^2 / w^2) has <r^2> = w^2 / 2 in two dimensions
        let waist = if norm > 0.0 {
            (2.0 * second / norm).sqrt()
        } else {
            0.0
        };
        RegionProfile {
            norm,
            centroid,
            waist,
        }
    }

    /// Norm of `density` within `radius` of `center`.
    pub fn norm_within(&self, density: &[f64], center: [f64; 2], radius: f64) -> f64 {
        self.profile(density, |r| {
            (r[0] - center[0]).hypot(r[1] - center[1]) <= radius
        })
        .norm
    }
}

/// Output densities for a product input `E(r1) C(r2)`.
///
/// The output amplitude is `T(|r1 - r2|) E(r1) C(r2) + H(|r1 - r2|) E(r2) C(r1)`;
/// the photon density marginalises over the spin-wave position and vice
/// versa. Both marginals are grid sums over the same discretised state, so
/// their norms agree up to rounding.
pub fn density_maps(
    model: &ModelParams,
    g: &ChannelGeometry,
    grid: &GridSpec,
    opts: &ModeOptions,
) -> Result<DensityMap> {
    grid.validate(g)?;
    let n = grid.points_per_axis();
    let max_distance = grid.step * (n - 1) as f64 * std::f64::consts::SQRT_2;
    let table = RadialTable::build(model, max_distance + grid.step, opts)?;
    density_maps_with_table(&table, g, grid)
}

pub fn density_maps_with_table(
    table: &RadialTable,
    g: &ChannelGeometry,
    grid: &GridSpec,
) -> Result<DensityMap> {
    grid.validate(g)?;
    let n = grid.points_per_axis();
    let max_distance = grid.step * (n - 1) as f64 * std::f64::consts::SQRT_2;
    if max_distance > table.range() + grid.step {
        return Err(Error::Configuration(format!(
            "radial table covers r <= {}, grid needs {max_distance}",
            table.range()
        )));
    }
    let points = n * n;

    // Amplitudes depend on |di|, |dj| only.
    let mut t_off = vec![Complex64::new(0.0, 0.0); points];
    let mut h_off = vec![Complex64::new(0.0, 0.0); points];
    for dj in 0..n {
        for di in 0..n {
            let r = grid.step * (di as f64).hypot(dj as f64);
            t_off[dj * n + di] = table.t(r);
            h_off[dj * n + di] = table.h(r);
        }
    }

    let e: Vec<f64> = (0..points)
        .map(|i| g.photon.field(grid.coordinate(i)))
        .collect();
    let c: Vec<f64> = (0..points)
        .map(|i| g.spin_wave.field(grid.coordinate(i)))
        .collect();
    let peak = e.iter().chain(&c).fold(0.0_f64, |m, v| m.max(*v));
    let active: Vec<usize> = (0..points)
        .filter(|&i| e[i].max(c[i]) > 1e-10 * peak)
        .collect();

    let da = grid.step * grid.step;
    let amplitude = |i: usize, j: usize| {
        let (ix, iy) = ((i % n) as isize, (i / n) as isize);
        let (jx, jy) = ((j % n) as isize, (j / n) as isize);
        let k = (ix - jx).unsigned_abs() + n * (iy - jy).unsigned_abs();
        t_off[k] * (e[i] * c[j]) + h_off[k] * (e[j] * c[i])
    };

    let photon_active = crate::par_map(&active, |&i| {
        active
            .iter()
            .map(|&j| amplitude(i, j).norm_sqr())
            .sum::<f64>()
            * da
    });
    let spin_active = crate::par_map(&active, |&j| {
        active
            .iter()
            .map(|&i| amplitude(i, j).norm_sqr())
            .sum::<f64>()
            * da
    });

    let mut photon_density = vec![0.0; points];
    let mut spin_wave_density = vec![0.0; points];
    for (k, &i) in active.iter().enumerate() {
        photon_density[i] = photon_active[k];
        spin_wave_density[i] = spin_active[k];
    }
    let photon_norm = photon_density.iter().sum::<f64>() * da;
    let spin_wave_norm = spin_wave_density.iter().sum::<f64>() * da;

    Ok(DensityMap {
        grid: *grid,
        points_per_axis: n,
        photon_density,
        spin_wave_density,
        photon_norm,
        spin_wave_norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::Sign;
    use approx::assert_relative_eq;

    fn model(d_b: f64) -> ModelParams {
        ModelParams::dimensionless(d_b, Sign::Positive).unwrap()
    }

    fn quick() -> ModeOptions {
        ModeOptions {
            table_nodes: 256,
            ..Default::default()
        }
    }

    #[test]
    fn effective_waist_and_offset() {
        let g = ChannelGeometry::symmetric(2.0, 0.3).unwrap();
        assert_eq!(g.effective_waist(), 0.3);
        assert_eq!(g.offset(), [-2.0, 0.0]);
        let g = ChannelGeometry::new(
            GaussianChannel::new([0.0, 1.0], 0.1).unwrap(),
            GaussianChannel::new([0.0, 0.0], 0.7).unwrap(),
        );
        assert_relative_eq!(g.effective_waist(), 0.5, max_relative = 1e-15);
        assert_eq!(g.separation(), 1.0);
    }

    #[test]
    fn mode_is_normalised() {
        let ch = GaussianChannel::new([0.3, -0.2], 0.25).unwrap();
        let (n, h) = (400, 0.01);
        let mut sum = 0.0;
        for i in 0..n {
            for j in 0..n {
                let r = [-1.7 + i as f64 * h, -2.2 + j as f64 * h];
                sum += ch.field(r).powi(2) * h * h;
            }
        }
        assert_relative_eq!(sum, 1.0, max_relative = 1e-10);
    }

    #[test]
    fn non_interacting_averages() {
        let g = ChannelGeometry::symmetric(1.0, 0.2).unwrap();
        let m = mode_average(&ModelParams::non_interacting(), &g, &quick()).unwrap();
        assert!((m.t_bar - 1.0).norm() < 1e-9);
        assert_eq!(m.efficiency(), 0.0);
        assert_eq!(m.figure_of_merit(), 0.0);
    }

    #[test]
    fn zero_width_is_point_evaluation() {
        let g = ChannelGeometry::symmetric(1.5, 0.0).unwrap();
        let m = mode_average(&model(3.0), &g, &quick()).unwrap();
        let s = scattering_amplitudes(&model(3.0), 1.5, &SolverOptions::default()).unwrap();
        assert_eq!(m.h_bar, s.h);
        assert_eq!(m.figure_of_merit(), s.h.norm_sqr().powi(2));
    }

    #[test]
    fn figure_of_merit_below_efficiency() {
        let g = ChannelGeometry::symmetric(1.2, 0.3).unwrap();
        let m = mode_average(&model(4.0), &g, &quick()).unwrap();
        assert!(m.figure_of_merit() <= m.efficiency());
        assert!(m.efficiency() <= 1.0);
        assert!(m.interpolation_error < 1e-6, "{}", m.interpolation_error);
    }

    #[test]
    fn far_rails_do_not_exchange() {
        let g = ChannelGeometry::symmetric(20.0, 0.2).unwrap();
        let eta = exchange_efficiency(&model(5.0), &g, &quick()).unwrap();
        assert!(eta < 1e-3, "{eta}");
    }

    #[test]
    fn density_map_without_interaction_reproduces_inputs() {
        let g = ChannelGeometry::symmetric(2.0, 0.2).unwrap();
        let grid = GridSpec {
            step: 0.05,
            ..GridSpec::around(&g).unwrap()
        };
        let map = density_maps(&ModelParams::non_interacting(), &g, &grid, &quick()).unwrap();
        for i in 0..map.photon_density.len() {
            let r = grid.coordinate(i);
            assert!((map.photon_density[i] - g.photon.field(r).powi(2)).abs() < 1e-9);
            assert!((map.spin_wave_density[i] - g.spin_wave.field(r).powi(2)).abs() < 1e-9);
        }
        assert_relative_eq!(map.photon_norm, 1.0, max_relative = 1e-9);
    }

    #[test]
    fn grid_must_cover_channels() {
        let g = ChannelGeometry::symmetric(2.0, 0.2).unwrap();
        let grid = GridSpec {
            center: [0.0, 0.0],
            half_width: 1.0,
            step: 0.05,
        };
        assert!(matches!(
            density_maps(&model(1.0), &g, &grid, &quick()),
            Err(Error::Configuration(_))
        ));
    }
}
