//! Physical parameters and the dimensionless model derived from them.
//!
//! Every other module works in blockade units: lengths in units of the
//! blockade radius `r_b`, rates in units of the EIT linewidth. The only
//! parameters that survive the rescaling are the blockaded optical depth
//! `d_b` and the sign of the dipolar coefficient.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Error, Result};

/// Sign of the dipolar exchange coefficient `C3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Positive => 1.0,
            Sign::Negative => -1.0,
        }
    }

    pub fn of(x: f64) -> Sign {
        if x < 0.0 {
            Sign::Negative
        } else {
            Sign::Positive
        }
    }
}

impl TryFrom<i8> for Sign {
    type Error = String;

    fn try_from(v: i8) -> std::result::Result<Self, Self::Error> {
        match v {
            1 => Ok(Sign::Positive),
            -1 => Ok(Sign::Negative),
            other => Err(format!("sign must be +1 or -1, got {other}")),
        }
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        match s {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }
}

/// Atomic and optical parameters in SI-like units (rates in rad/s).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    /// Collectively enhanced probe coupling.
    #[serde(rename = "G")]
    pub coupling: f64,
    /// Control-field Rabi frequency.
    #[serde(rename = "Omega")]
    pub rabi: f64,
    /// Decay rate of the intermediate state.
    #[serde(rename = "gamma")]
    pub decay: f64,
    /// Signed dipolar coefficient, `V(r) = C3 / r^3`.
    #[serde(rename = "C3")]
    pub c3: f64,
    /// Vacuum speed of light.
    #[serde(rename = "c")]
    pub speed_of_light: f64,
}

impl PhysicalParams {
    pub fn validate(&self) -> Result<()> {
        ensure_positive("G", self.coupling)?;
        ensure_positive("Omega", self.rabi)?;
        ensure_positive("gamma", self.decay)?;
        ensure_positive("c", self.speed_of_light)?;
        if !self.c3.is_finite() || self.c3 == 0.0 {
            return Err(Error::Domain {
                field: "C3",
                value: self.c3,
                reason: "must be finite and non-zero",
            });
        }
        Ok(())
    }

    /// EIT linewidth `Omega^2 / gamma`.
    pub fn eit_linewidth(&self) -> f64 {
        self.rabi * self.rabi / self.decay
    }

    /// Blockade radius, defined by `|V(r_b)| = Gamma_EIT`.
    pub fn blockade_radius(&self) -> f64 {
        (self.c3.abs() / self.eit_linewidth()).cbrt()
    }

    /// Dipolar potential at distance `r`.
    pub fn potential(&self, r: f64) -> f64 {
        self.c3 / (r * r * r)
    }
}

/// Dimensionless description of the medium.
///
/// The optional fields are only present when the model was derived from a
/// [`PhysicalParams`] set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Blockaded optical depth (optical depth per blockade radius).
    pub d_b: f64,
    pub sign: Sign,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_b: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_eit: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_h: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v_g: Option<f64>,
}

impl ModelParams {
    /// Builds a model directly in blockade units.
    pub fn dimensionless(d_b: f64, sign: Sign) -> Result<Self> {
        ensure_positive("d_b", d_b)?;
        Ok(Self::unchecked(d_b, sign))
    }

    /// A model with no interactions. Used as the trivial reference point of
    /// most routines; not reachable through [`ModelParams::dimensionless`].
    pub fn non_interacting() -> Self {
        Self::unchecked(0.0, Sign::Positive)
    }

    pub(crate) fn unchecked(d_b: f64, sign: Sign) -> Self {
        ModelParams {
            d_b,
            sign,
            r_b: None,
            gamma_eit: None,
            r_h: None,
            v_g: None,
        }
    }

    /// Hopping radius in blockade units, `sqrt(d_b)`.
    pub fn hopping_radius(&self) -> f64 {
        self.d_b.sqrt()
    }

    /// Same model with the sign of the interaction flipped.
    pub fn with_sign(mut self, sign: Sign) -> Self {
        self.sign = sign;
        self
    }
}

/// Maps physical parameters onto the dimensionless model.
pub fn derive_model(p: &PhysicalParams) -> Result<ModelParams> {
    p.validate()?;
    if p.rabi > p.coupling {
        return Err(Error::Domain {
            field: "Omega",
            value: p.rabi,
            reason: "must not exceed G, otherwise v_g = c Omega^2/G^2 exceeds c",
        });
    }
    let gamma_eit = p.eit_linewidth();
    let r_b = p.blockade_radius();
    let d_b = p.coupling * p.coupling * r_b / (p.speed_of_light * p.decay);
    let v_g = p.speed_of_light * p.rabi * p.rabi / (p.coupling * p.coupling);
    Ok(ModelParams {
        d_b,
        sign: Sign::of(p.c3),
        r_b: Some(r_b),
        gamma_eit: Some(gamma_eit),
        r_h: Some(d_b.sqrt() * r_b),
        v_g: Some(v_g),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unity() -> PhysicalParams {
        PhysicalParams {
            coupling: 1.0,
            rabi: 1.0,
            decay: 1.0,
            c3: 1.0,
            speed_of_light: 1.0,
        }
    }

    #[test]
    fn all_unity_parameters() {
        let m = derive_model(&unity()).unwrap();
        assert_eq!(m.gamma_eit, Some(1.0));
        assert_eq!(m.r_b, Some(1.0));
        assert_eq!(m.d_b, 1.0);
        assert_eq!(m.r_h, Some(1.0));
        assert_eq!(m.v_g, Some(1.0));
        assert_eq!(m.sign, Sign::Positive);
    }

    #[test]
    fn blockade_radius_from_linewidth() {
        let p = PhysicalParams {
            coupling: 2.0,
            rabi: 2.0,
            decay: 1.0,
            c3: 32.0,
            speed_of_light: 1.0,
        };
        let m = derive_model(&p).unwrap();
        assert_eq!(m.gamma_eit, Some(4.0));
        assert!((m.r_b.unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn hopping_radius_scales_with_root_optical_depth() {
        // G^2 r_b / (c gamma) = 4 with r_b = 1
        let p = PhysicalParams {
            coupling: 2.0,
            ..unity()
        };
        let m = derive_model(&p).unwrap();
        assert!((m.d_b - 4.0).abs() < 1e-15);
        assert!((m.r_h.unwrap() - 2.0 * m.r_b.unwrap()).abs() < 1e-15);
        assert!(m.v_g.unwrap() <= p.speed_of_light);
    }

    #[test]
    fn negative_c3_flips_sign_only() {
        let p = PhysicalParams {
            c3: -1.0,
            ..unity()
        };
        let m = derive_model(&p).unwrap();
        assert_eq!(m.sign, Sign::Negative);
        assert_eq!(m.r_b, Some(1.0));
    }

    #[test]
    fn rejects_bad_fields_by_name() {
        let cases: [(PhysicalParams, &str); 5] = [
            (
                PhysicalParams {
                    coupling: 0.0,
                    ..unity()
                },
                "G",
            ),
            (
                PhysicalParams {
                    rabi: -1.0,
                    ..unity()
                },
                "Omega",
            ),
            (
                PhysicalParams {
                    decay: 0.0,
                    ..unity()
                },
                "gamma",
            ),
            (PhysicalParams { c3: 0.0, ..unity() }, "C3"),
            (
                PhysicalParams {
                    speed_of_light: f64::NAN,
                    ..unity()
                },
                "c",
            ),
        ];
        for (p, name) in cases {
            match derive_model(&p) {
                Err(Error::Domain { field, .. }) => assert_eq!(field, name),
                other => panic!("expected domain error for {name}, got {other:?}"),
            }
        }
    }

    #[test]
    fn dimensionless_construction() {
        let m = ModelParams::dimensionless(5.0, Sign::Positive).unwrap();
        assert_eq!(m.d_b, 5.0);
        assert!(m.r_b.is_none() && m.v_g.is_none());
        let m = ModelParams::dimensionless(2.0, Sign::Negative).unwrap();
        assert_eq!(m.sign.value(), -1.0);
        assert!(ModelParams::dimensionless(0.0, Sign::Positive).is_err());
        assert!(ModelParams::dimensionless(-1.0, Sign::Positive).is_err());
    }

    #[test]
    fn json_field_names() {
        let p: PhysicalParams =
            serde_json::from_str(r#"{"G":3.0,"Omega":1.0,"gamma":2.0,"C3":-5.0,"c":1.0}"#).unwrap();
        assert_eq!(p.coupling, 3.0);
        assert_eq!(p.c3, -5.0);
        let m: ModelParams = serde_json::from_str(r#"{"d_b":2.5,"sign":-1}"#).unwrap();
        assert_eq!(m.sign, Sign::Negative);
        assert!(serde_json::from_str::<ModelParams>(r#"{"d_b":2.5,"sign":3}"#).is_err());
    }
}
