//! Interaction, loss and exchange coefficients of the effective
//! propagation equation.
//!
//! In blockade units the scaled interaction is `U = sign / r^3` with
//! `r = sqrt(z^2 + r_perp^2)`, and
//!
//! ```text
//! A = -d_b U^2 / (1 + U^2),    B = -d_b U / (1 + U^2).
//! ```
//!
//! Both are evaluated in the equivalent form `A = -d_b / (1 + r^6)`,
//! `B = -d_b sign r^3 / (1 + r^6)`, which stays finite at coincidence.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_nonnegative, Error, Result};
use crate::params::{ModelParams, PhysicalParams, Sign};

/// Radius of the ball around coincidence where the analytic limits
/// `A = -d_b`, `B = 0` are substituted.
pub const COINCIDENCE_RADIUS: f64 = 1e-6;

/// Pole-proximity threshold for the spectral denominator, in units of
/// `Gamma_EIT^2`.
pub const POLE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSample {
    pub z: f64,
    pub r_perp: f64,
    /// Interaction scaled by the EIT linewidth.
    pub u: f64,
    /// Loss coefficient, per blockade radius.
    pub a: Complex64,
    /// Exchange coefficient, per blockade radius.
    pub b: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralPoint {
    pub z: f64,
    pub r_perp: f64,
    /// Centre-of-mass longitudinal momentum, in `1/r_b`.
    pub k: f64,
    /// Detuning in units of `Gamma_EIT`.
    pub omega: f64,
    pub a_bar: Complex64,
    pub b_bar: Complex64,
}

fn check_point(z: f64, r_perp: f64) -> Result<()> {
    if !z.is_finite() {
        return Err(Error::Domain {
            field: "z",
            value: z,
            reason: "must be finite",
        });
    }
    ensure_nonnegative("r_perp", r_perp)?;
    if z == 0.0 && r_perp == 0.0 {
        return Err(Error::Singularity { z, r_perp });
    }
    Ok(())
}

/// Dipolar interaction scaled by the EIT linewidth, in blockade units.
pub fn scaled_interaction(z: f64, r_perp: f64, sign: Sign) -> Result<f64> {
    check_point(z, r_perp)?;
    let r2 = z * z + r_perp * r_perp;
    Ok(sign.value() / (r2 * r2.sqrt()))
}

/// Loss and exchange coefficients at a relative position.
pub fn loss_exchange(z: f64, r_perp: f64, model: &ModelParams) -> Result<CoefficientSample> {
    check_point(z, r_perp)?;
    let u = scaled_interaction(z, r_perp, model.sign)?;
    let (a, b) = cw_coefficients(model.d_b, model.sign.value(), z, r_perp);
    Ok(CoefficientSample {
        z,
        r_perp,
        u,
        a: Complex64::new(a, 0.0),
        b: Complex64::new(b, 0.0),
    })
}

/// `(A, B)` at exact resonance in the continuous-wave limit.
///
/// Inside [`COINCIDENCE_RADIUS`] the analytic limits are returned.
#[inline]
pub(crate) fn cw_coefficients(d_b: f64, sign: f64, z: f64, r_perp: f64) -> (f64, f64) {
    let r2 = z * z + r_perp * r_perp;
    if r2 < COINCIDENCE_RADIUS * COINCIDENCE_RADIUS {
        return (-d_b, 0.0);
    }
    let r6 = r2 * r2 * r2;
    let inv = 1.0 / (1.0 + r6);
    (-d_b * inv, -d_b * sign * r2 * r2.sqrt() * inv)
}

/// Full momentum- and frequency-dependent coefficients.
///
/// Inputs are in blockade units: `z`, `r_perp` in `r_b`, `k` in `1/r_b` and
/// `omega` in units of the EIT linewidth. The coefficients are returned per
/// blockade radius. At `k = omega = 0` they reduce to [`loss_exchange`].
pub fn spectral_coefficients(
    z: f64,
    r_perp: f64,
    k: f64,
    omega: f64,
    physical: &PhysicalParams,
) -> Result<SpectralPoint> {
    physical.validate()?;
    check_point(z, r_perp)?;
    for (field, v) in [("K", k), ("omega", omega)] {
        if !v.is_finite() {
            return Err(Error::Domain {
                field,
                value: v,
                reason: "must be finite",
            });
        }
    }

    let i = Complex64::i();
    let gamma_eit = physical.eit_linewidth();
    let r_b = physical.blockade_radius();
    let (g, rabi, decay, c) = (
        physical.coupling,
        physical.rabi,
        physical.decay,
        physical.speed_of_light,
    );

    let w = omega * gamma_eit;
    let k_phys = k / r_b;
    let v = physical.potential(r_b * (z * z + r_perp * r_perp).sqrt());

    let w_c = Complex64::new(w, -decay);
    let dressed = w - rabi * rabi / w_c;
    let denom = dressed * dressed - v * v;
    let magnitude = denom.norm() / (gamma_eit * gamma_eit);
    if magnitude < POLE_TOLERANCE {
        return Err(Error::PoleProximity { magnitude });
    }
    let prefactor = g * g * rabi * rabi / (c * w_c * w_c);

    // the single-particle and pair terms cancel to O(V^2) far from the
    // blockade; combined over the common denominator they read
    // i G^2 (w D - V^2) / (c w_c (D^2 - V^2))
    let a_bar =
        -i * w / c - i * k_phys / 2.0 + i * g * g * (w * dressed - v * v) / (c * w_c * denom);
    let b_bar = -prefactor * v / denom;

    Ok(SpectralPoint {
        z,
        r_perp,
        k,
        omega,
        a_bar: a_bar * r_b,
        b_bar: b_bar * r_b,
    })
}
