//! Two-polariton scattering in the continuous-wave limit.
//!
//! Writing `f(z) = psi(z, r_perp)` and `g(z) = psi(-z, -r_perp)`, the
//! nonlocal propagation equation becomes the local, traceless system
//!
//! ```text
//! f' =  A f + i B g
//! g' = -i B f - A g
//! ```
//!
//! whose transfer matrix `M` maps `(f, g)` at `z = -Z` to `z = +Z`. With the
//! boundary conditions `f(-Z) = psi_in(r_perp)`, `g(+Z) = psi_in(-r_perp)`
//! the transmission and exchange amplitudes are `T = 1/m22` and
//! `H = m12/m22`.
//!
//! The fundamental matrix grows like `exp(int |A| dz)`, which overflows for
//! large optical depths near `r_perp = 0`. The integration is therefore cut
//! into segments of bounded growth. The amplitudes are assembled from the
//! segments twice: as a rescaled matrix product, and by composing segment
//! scattering matrices (Redheffer star product), which is stable for
//! arbitrary growth. The two routes must agree.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coefficients::cw_coefficients;
use crate::error::{ensure_nonnegative, Error, Result};
use crate::ode::{DormandPrince, Observed, StepStats};
use crate::params::ModelParams;
use crate::quadrature::GaussKronrod;

type Mat2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const IDENTITY: Mat2 = [[ONE, ZERO], [ZERO, ONE]];

/// Entry magnitude at which a segment is closed and a new one started.
const SEGMENT_GROWTH: f64 = 8.0;
const MIN_HALF_LENGTH: f64 = 50.0;
const MAX_HALF_LENGTH: f64 = 1e5;
const CONSISTENCY_TOLERANCE: f64 = 1e-8;
const SINGULAR_M22: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Relative tolerance of the adaptive integrator.
    pub rtol: f64,
    /// Absolute tolerance of the adaptive integrator.
    pub atol: f64,
    /// Target size of the neglected exchange tail, sets the domain length.
    pub tail_epsilon: f64,
    /// Explicit half-length of the integration domain (overrides `tail_epsilon`).
    #[serde(default)]
    pub half_length: Option<f64>,
    /// Drop the loss coefficient `A` (loss-free oracle mode).
    #[serde(default)]
    pub loss_free: bool,
    pub max_steps: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            rtol: 1e-11,
            atol: 1e-14,
            tail_epsilon: 1e-6,
            half_length: None,
            loss_free: false,
            max_steps: 5_000_000,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.rtol > 1e-13 && self.rtol < 1e-3) {
            return Err(Error::Domain {
                field: "rtol",
                value: self.rtol,
                reason: "must lie in (1e-13, 1e-3)",
            });
        }
        if !(self.atol > 0.0 && self.atol.is_finite()) {
            return Err(Error::Domain {
                field: "atol",
                value: self.atol,
                reason: "must be positive",
            });
        }
        if !(self.tail_epsilon > 0.0 && self.tail_epsilon.is_finite()) {
            return Err(Error::Domain {
                field: "tail_epsilon",
                value: self.tail_epsilon,
                reason: "must be positive",
            });
        }
        if let Some(z) = self.half_length {
            if !(z > 0.0 && z.is_finite()) {
                return Err(Error::Domain {
                    field: "half_length",
                    value: z,
                    reason: "must be positive",
                });
            }
        }
        Ok(())
    }

    pub fn loss_free(mut self) -> Self {
        self.loss_free = true;
        self
    }

    /// Half-length `Z` of the integration domain for the given optical depth.
    pub fn domain_half_length(&self, d_b: f64) -> f64 {
        self.half_length.unwrap_or_else(|| {
            (d_b / self.tail_epsilon)
                .sqrt()
                .clamp(MIN_HALF_LENGTH, MAX_HALF_LENGTH)
        })
    }
}

/// Propagator of the local system from `z = -Z` to `z = +Z`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferMatrix {
    /// Normalised entries; the propagator is `exp(log_scale) * m`.
    pub m: Mat2,
    pub log_scale: f64,
    /// Product of the segment determinants.
    pub determinant: Complex64,
    pub half_length: f64,
    /// Bound on the exchange and loss integrals outside `[-Z, Z]`.
    pub truncation_estimate: f64,
    pub segments: usize,
    pub steps: usize,
}

impl TransferMatrix {
    /// Entry `(i, j)` of the unnormalised propagator (may overflow).
    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.m[i][j] * self.log_scale.exp()
    }
    pub fn m11(&self) -> Complex64 {
        self.entry(0, 0)
    }
    pub fn m12(&self) -> Complex64 {
        self.entry(0, 1)
    }
    pub fn m21(&self) -> Complex64 {
        self.entry(1, 0)
    }
    pub fn m22(&self) -> Complex64 {
        self.entry(1, 1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatteringResult {
    pub r_perp: f64,
    /// Transmission amplitude (photon stays in its channel).
    pub t: Complex64,
    /// Exchange amplitude (photon hops to the other channel).
    pub h: Complex64,
    /// `|T|^2 + |H|^2`.
    pub flux: f64,
    pub steps: usize,
    pub tolerance: f64,
    pub truncation_estimate: f64,
}

impl ScatteringResult {
    fn new(r_perp: f64, t: Complex64, h: Complex64) -> Self {
        ScatteringResult {
            r_perp,
            t,
            h,
            flux: t.norm_sqr() + h.norm_sqr(),
            steps: 0,
            tolerance: 0.0,
            truncation_estimate: 0.0,
        }
    }
}

/// Scattering matrix of a slab: `f_right = t f_left + h g_right`,
/// `g_left = r f_left + tp g_right`.
#[derive(Debug, Clone, Copy)]
struct Slab {
    t: Complex64,
    h: Complex64,
    r: Complex64,
    tp: Complex64,
}

impl Slab {
    const CLEAR: Slab = Slab {
        t: ONE,
        h: ZERO,
        r: ZERO,
        tp: ONE,
    };

    fn from_propagator(y: &Mat2) -> Slab {
        let inv = 1.0 / y[1][1];
        Slab {
            t: det(y) * inv,
            h: y[0][1] * inv,
            r: -y[1][0] * inv,
            tp: inv,
        }
    }

    /// `self` on the left, `right` on the right.
    fn then(self, right: Slab) -> Slab {
        let d = 1.0 / (ONE - self.h * right.r);
        Slab {
            t: self.t * right.t * d,
            h: right.h + right.t * self.h * right.tp * d,
            r: self.r + self.tp * right.r * self.t * d,
            tp: self.tp * right.tp * d,
        }
    }
}

fn det(m: &Mat2) -> Complex64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

fn mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// `exp([[a, i b], [-i b, -a]])` for real `a`, `b`.
fn traceless_exp(a: f64, b: f64) -> Mat2 {
    let kappa = a.hypot(b);
    let (c, s) = if kappa == 0.0 {
        (1.0, 1.0)
    } else {
        (kappa.cosh(), kappa.sinh() / kappa)
    };
    let i = Complex64::i();
    [
        [Complex64::new(c + s * a, 0.0), i * (s * b)],
        [-i * (s * b), Complex64::new(c - s * a, 0.0)],
    ]
}

struct Propagation {
    /// Segment propagators in order of increasing z, tails included.
    segments: Vec<Mat2>,
    half_length: f64,
    truncation_estimate: f64,
    stats: StepStats,
}

fn check_inputs(model: &ModelParams, r_perp: f64, opts: &SolverOptions) -> Result<()> {
    ensure_nonnegative("d_b", model.d_b)?;
    ensure_nonnegative("r_perp", r_perp)?;
    opts.validate()
}

fn propagate(model: &ModelParams, r_perp: f64, opts: &SolverOptions) -> Result<Propagation> {
    check_inputs(model, r_perp, opts)?;
    let d_b = model.d_b;
    let sign = model.sign.value();
    let loss = if opts.loss_free { 0.0 } else { 1.0 };
    let half_length = opts.domain_half_length(d_b);

    let coefficients = |z: f64| {
        let (a, b) = cw_coefficients(d_b, sign, z, r_perp);
        (loss * a, b)
    };

    // Tails beyond +-Z, applied as first-order propagators.
    let q = GaussKronrod::new(1e-16, 1e-12);
    let a_tail = if loss == 0.0 || d_b == 0.0 {
        0.0
    } else {
        q.integrate_to_infinity(|z| coefficients(z).0, half_length)?
            .value
    };
    let b_tail = if d_b == 0.0 {
        0.0
    } else {
        q.integrate_to_infinity(|z| coefficients(z).1, half_length)?
            .value
    };
    let tail = traceless_exp(a_tail, b_tail);
    let truncation_estimate = d_b / (half_length * half_length) + 2.0 * a_tail.abs();

    let rhs = |z: f64, y: &[Complex64; 4]| {
        let (a, b) = coefficients(z);
        let ib = Complex64::new(0.0, b);
        [
            y[0] * a + ib * y[2],
            y[1] * a + ib * y[3],
            -ib * y[0] - y[2] * a,
            -ib * y[1] - y[3] * a,
        ]
    };

    let mut segments = vec![tail];
    let integrator = DormandPrince {
        rtol: opts.rtol,
        atol: opts.atol,
        max_steps: opts.max_steps,
    };
    let identity = [ONE, ZERO, ZERO, ONE];
    let (last, stats) =
        integrator.integrate(rhs, -half_length, half_length, identity, |_, y| {
            if y.iter().any(|v| v.norm() > SEGMENT_GROWTH) {
                segments.push([[y[0], y[1]], [y[2], y[3]]]);
                *y = identity;
                Observed::Modified
            } else {
                Observed::Unchanged
            }
        })?;
    segments.push([[last[0], last[1]], [last[2], last[3]]]);
    segments.push(tail);

    Ok(Propagation {
        segments,
        half_length,
        truncation_estimate,
        stats,
    })
}

fn assemble(p: &Propagation) -> TransferMatrix {
    let mut m = IDENTITY;
    let mut log_scale = 0.0;
    let mut determinant = ONE;
    for seg in &p.segments {
        m = mul(seg, &m);
        determinant *= det(seg);
        let s = m.iter().flatten().map(|v| v.norm()).fold(0.0_f64, f64::max);
        if s > 0.0 && s.is_finite() {
            for v in m.iter_mut().flatten() {
                *v /= s;
            }
            log_scale += s.ln();
        }
    }
    TransferMatrix {
        m,
        log_scale,
        determinant,
        half_length: p.half_length,
        truncation_estimate: p.truncation_estimate,
        segments: p.segments.len(),
        steps: p.stats.accepted,
    }
}

/// Transfer matrix of the local two-component system across the collision.
pub fn transfer_matrix(
    model: &ModelParams,
    r_perp: f64,
    opts: &SolverOptions,
) -> Result<TransferMatrix> {
    propagate(model, r_perp, opts).map(|p| assemble(&p))
}

fn agree(x: Complex64, y: Complex64) -> f64 {
    (x - y).norm() / x.norm().max(y.norm()).max(1e-300)
}

/// Transmission and exchange amplitudes at transverse separation `r_perp`.
pub fn scattering_amplitudes(
    model: &ModelParams,
    r_perp: f64,
    opts: &SolverOptions,
) -> Result<ScatteringResult> {
    let p = propagate(model, r_perp, opts)?;
    let tm = assemble(&p);

    let m22_magnitude = (tm.log_scale + tm.m[1][1].norm().ln()).exp();
    if m22_magnitude.is_nan() || m22_magnitude < SINGULAR_M22 {
        return Err(Error::SingularTransfer {
            magnitude: m22_magnitude,
        });
    }
    let t_product = (-tm.log_scale).exp() / tm.m[1][1];
    let h_product = tm.m[0][1] / tm.m[1][1];

    let slab = p
        .segments
        .iter()
        .map(Slab::from_propagator)
        .fold(Slab::CLEAR, Slab::then);

    let mut discrepancy = agree(slab.t, t_product).max(agree(slab.h, h_product));
    // The determinant-free expression cancels catastrophically once the
    // propagator has grown; only use it while it is well conditioned.
    if tm.log_scale < 4.0 {
        let t_direct = tm.m11() - tm.m12() * tm.m21() / tm.m22();
        discrepancy = discrepancy.max(agree(t_direct, slab.t));
    }
    if discrepancy > CONSISTENCY_TOLERANCE {
        return Err(Error::InternalConsistency {
            what: "transmission amplitude from product and composition routes",
            discrepancy,
        });
    }

    Ok(ScatteringResult {
        steps: p.stats.accepted,
        tolerance: opts.rtol,
        truncation_estimate: p.truncation_estimate,
        ..ScatteringResult::new(r_perp, slab.t, slab.h)
    })
}

/// Same as [`scattering_amplitudes`] for a transverse separation vector.
pub fn scattering_amplitudes_at(
    model: &ModelParams,
    r_perp: [f64; 2],
    opts: &SolverOptions,
) -> Result<ScatteringResult> {
    scattering_amplitudes(model, r_perp[0].hypot(r_perp[1]), opts)
}

/// Total exchange phase `phi(r_perp) = int B(z, r_perp) dz` over the whole line.
pub fn exchange_phase_integral(model: &ModelParams, r_perp: f64) -> Result<f64> {
    ensure_nonnegative("d_b", model.d_b)?;
    ensure_nonnegative("r_perp", r_perp)?;
    if model.d_b == 0.0 {
        return Ok(0.0);
    }
    Ok(-model.d_b * model.sign.value() * unit_phase_integral(r_perp)?)
}

/// `int_{-inf}^{inf} r^3 / (1 + r^6) dz` with `r^2 = z^2 + r_perp^2`.
fn unit_phase_integral(r_perp: f64) -> Result<f64> {
    let cut = (10.0 * (r_perp + 1.0)).max(50.0);
    let mut breaks = vec![0.0];
    let mut x = 0.25;
    while x < cut {
        breaks.push(x);
        x *= 2.0;
    }
    breaks.push(cut);

    let l2 = r_perp * r_perp;
    let core = GaussKronrod::new(1e-15, 1e-14).integrate_with_breaks(
        |z: f64| {
            let r2 = z * z + l2;
            r2 * r2.sqrt() / (1.0 + r2 * r2 * r2)
        },
        &breaks,
    )?;
    // r^3/(1+r^6) = r^-3 - r^-9 + ..., the r^-3 tail integrates in closed form
    // and the remainder is below 1/(8 cut^8).
    let s = (cut * cut + l2).sqrt();
    let tail = 1.0 / (s * (s + cut));
    let remainder_bound = 1.0 / (8.0 * cut.powi(8));
    let error = core.error + remainder_bound;
    if error > 1e-12 * core.value.abs().max(1e-300) + 1e-14 {
        return Err(Error::Convergence {
            what: "exchange phase integral",
            achieved: error,
            requested: 1e-12,
        });
    }
    Ok(2.0 * (core.value + tail))
}

/// Zeroth-order (loss-free) amplitudes `T = sech(phi)`, `H = i tanh(phi)`.
pub fn lossfree_amplitudes(model: &ModelParams, r_perp: f64) -> Result<ScatteringResult> {
    let phi = exchange_phase_integral(model, r_perp)?;
    Ok(ScatteringResult::new(
        r_perp,
        Complex64::new(1.0 / phi.cosh(), 0.0),
        Complex64::new(0.0, phi.tanh()),
    ))
}

/// Amplitudes on a grid of transverse separations, in input order.
pub fn amplitude_profile(
    model: &ModelParams,
    r_perps: &[f64],
    opts: &SolverOptions,
) -> Vec<Result<ScatteringResult>> {
    crate::par_map(r_perps, |&r| scattering_amplitudes(model, r, opts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::Sign;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn model(d_b: f64) -> ModelParams {
        ModelParams::dimensionless(d_b, Sign::Positive).unwrap()
    }

    #[test]
    fn no_interaction_is_identity() {
        let m0 = ModelParams::non_interacting();
        let tm = transfer_matrix(&m0, 0.5, &SolverOptions::default()).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((tm.entry(i, j) - expect).norm() < 1e-15);
            }
        }
        let s = scattering_amplitudes(&m0, 0.5, &SolverOptions::default()).unwrap();
        assert_eq!(s.t, ONE);
        assert_eq!(s.h, ZERO);
    }

    #[test]
    fn loss_free_transfer_matrix_is_hyperbolic_rotation() {
        for (d_b, l) in [(0.5, 0.0), (2.0, 1.0), (5.0, 0.5)] {
            let phi = exchange_phase_integral(&model(d_b), l).unwrap();
            let tm =
                transfer_matrix(&model(d_b), l, &SolverOptions::default().loss_free()).unwrap();
            let i = Complex64::i();
            let expect = [
                [ONE * phi.cosh(), i * phi.sinh()],
                [-i * phi.sinh(), ONE * phi.cosh()],
            ];
            for (r, row) in expect.iter().enumerate() {
                for (c, want) in row.iter().enumerate() {
                    let err = (tm.entry(r, c) - want).norm();
                    assert!(
                        err < 1e-8 * phi.cosh(),
                        "d_b={d_b} L={l} ({r},{c}) err {err:e}"
                    );
                }
            }
        }
    }

    #[test]
    fn determinant_is_one() {
        for (d_b, l) in [(1.0, 0.0), (20.0, 0.3), (100.0, 0.0), (300.0, 1.0)] {
            let tm = transfer_matrix(&model(d_b), l, &SolverOptions::default()).unwrap();
            assert!(
                (tm.determinant - 1.0).norm() < 1e-8,
                "d_b={d_b}: det = {}",
                tm.determinant
            );
        }
    }

    #[test]
    fn resonant_transfer_matrix_structure() {
        let tm = transfer_matrix(&model(3.0), 0.7, &SolverOptions::default()).unwrap();
        assert!(tm.m[0][0].im.abs() < 1e-8 && tm.m[1][1].im.abs() < 1e-8);
        assert!(tm.m[0][1].re.abs() < 1e-8 && tm.m[1][0].re.abs() < 1e-8);
    }

    #[test]
    fn phase_integral_on_axis() {
        let phi = exchange_phase_integral(&model(1.0), 0.0).unwrap();
        assert_relative_eq!(phi, -2.0 * PI / (3.0 * 3f64.sqrt()), max_relative = 1e-12);
        let phi2 = exchange_phase_integral(&model(2.0), 0.0).unwrap();
        assert_eq!(phi2, 2.0 * phi);
    }

    #[test]
    fn phase_integral_far_field() {
        for l in [10.0, 20.0, 40.0] {
            let phi = exchange_phase_integral(&model(3.0), l).unwrap();
            assert_relative_eq!(phi, -2.0 * 3.0 / (l * l), max_relative = 1e-2);
        }
    }

    #[test]
    fn lossfree_oracle_values() {
        let s = lossfree_amplitudes(&ModelParams::non_interacting(), 1.0).unwrap();
        assert_eq!((s.t, s.h), (ONE, ZERO));
        let s = lossfree_amplitudes(&model(1.0), 0.0).unwrap();
        // tanh^2(2 pi / (3 sqrt 3))
        assert_relative_eq!(
            s.h.norm_sqr(),
            0.699_630_580_698_111_6,
            max_relative = 1e-12
        );
        assert_relative_eq!(s.flux, 1.0, epsilon = 1e-15);
        assert!(s.h.im < 0.0);
    }

    #[test]
    fn lossy_collision_is_passive_with_quarter_phase() {
        let s = scattering_amplitudes(&model(5.0), 2.0, &SolverOptions::default()).unwrap();
        assert!(s.flux < 1.0);
        assert!(s.h.re.abs() <= 1e-7 * s.h.norm());
        assert!(s.t.im.abs() <= 1e-7 * s.t.norm());
        assert_relative_eq!(s.h.arg().abs(), PI / 2.0, epsilon = 1e-7);
    }

    #[test]
    fn huge_growth_is_handled() {
        // exp(int |A|) ~ exp(2000) overflows a plain matrix product
        let s = scattering_amplitudes(&model(1000.0), 0.0, &SolverOptions::default()).unwrap();
        assert!(s.flux <= 1.0 + 1e-9);
        assert!(s.t.norm() < 1e-300);
        assert!(s.h.norm().is_finite());
    }

    #[test]
    fn sign_changes_phase_not_magnitude() {
        let opts = SolverOptions::default();
        let p = scattering_amplitudes(&model(4.0), 1.3, &opts).unwrap();
        let n = scattering_amplitudes(&model(4.0).with_sign(Sign::Negative), 1.3, &opts).unwrap();
        assert_relative_eq!(p.h.norm(), n.h.norm(), max_relative = 1e-10);
        assert_relative_eq!(p.t.norm(), n.t.norm(), max_relative = 1e-10);
        assert!(p.h.im * n.h.im < 0.0);
    }

    #[test]
    fn doubling_domain_is_within_truncation_estimate() {
        let base = SolverOptions::default();
        let a = scattering_amplitudes(&model(5.0), 1.0, &base).unwrap();
        let z = base.domain_half_length(5.0);
        let doubled = SolverOptions {
            half_length: Some(2.0 * z),
            ..base
        };
        let b = scattering_amplitudes(&model(5.0), 1.0, &doubled).unwrap();
        let change = (a.h.norm_sqr() - b.h.norm_sqr()).abs();
        assert!(change < 1e-8_f64.max(a.truncation_estimate), "{change:e}");
    }

    #[test]
    fn domain_length_rule() {
        let o = SolverOptions::default();
        assert_eq!(o.domain_half_length(1e-4), 50.0);
        assert_relative_eq!(o.domain_half_length(4.0), 2000.0, max_relative = 1e-15);
        assert_eq!(o.domain_half_length(1e6), 1e5);
    }

    #[test]
    fn rejects_bad_options() {
        let bad = SolverOptions {
            rtol: 1e-2,
            ..Default::default()
        };
        assert!(matches!(
            scattering_amplitudes(&model(1.0), 0.0, &bad),
            Err(Error::Domain { field: "rtol", .. })
        ));
        assert!(scattering_amplitudes(&model(1.0), -1.0, &SolverOptions::default()).is_err());
    }

    #[test]
    fn slab_composition_matches_product() {
        let a = traceless_exp(-0.3, 0.8);
        let b = traceless_exp(-0.1, -0.4);
        let direct = Slab::from_propagator(&mul(&b, &a));
        let composed = Slab::from_propagator(&a).then(Slab::from_propagator(&b));
        for (x, y) in [
            (direct.t, composed.t),
            (direct.h, composed.h),
            (direct.r, composed.r),
            (direct.tp, composed.tp),
        ] {
            assert!((x - y).norm() < 1e-14);
        }
    }
}
