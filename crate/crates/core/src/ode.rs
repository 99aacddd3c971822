//! Embedded Dormand–Prince 5(4) integrator for complex-valued systems of
//! fixed dimension.

use num_complex::Complex64;

use crate::error::{Error, Result};

type State<const N: usize> = [Complex64; N];

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// fifth-order weights minus embedded fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DormandPrince {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
}

/// What the step observer asks of the integrator after an accepted step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observed {
    Unchanged,
    /// The observer overwrote the state; derivatives must be recomputed.
    Modified,
}

impl Default for DormandPrince {
    fn default() -> Self {
        DormandPrince {
            rtol: 1e-9,
            atol: 1e-12,
            max_steps: 5_000_000,
        }
    }
}

#[inline]
fn axpy<const N: usize>(y: &State<N>, h: f64, terms: &[(f64, &State<N>)]) -> State<N> {
    let mut out = *y;
    for (coef, k) in terms {
        let s = h * coef;
        for (o, ki) in out.iter_mut().zip(k.iter()) {
            *o += ki * s;
        }
    }
    out
}

impl DormandPrince {
    pub fn new(rtol: f64, atol: f64) -> Self {
        DormandPrince {
            rtol,
            atol,
            ..Default::default()
        }
    }

    /// Integrates `y' = f(z, y)` from `z0` to `z1` (either direction).
    ///
    /// `observe` runs after each accepted step with the new position and a
    /// mutable view of the state.
    pub fn integrate<const N: usize, F, O>(
        &self,
        mut f: F,
        z0: f64,
        z1: f64,
        y0: State<N>,
        mut observe: O,
    ) -> Result<(State<N>, StepStats)>
    where
        F: FnMut(f64, &State<N>) -> State<N>,
        O: FnMut(f64, &mut State<N>) -> Observed,
    {
        let mut stats = StepStats::default();
        let span = z1 - z0;
        if span == 0.0 {
            return Ok((y0, stats));
        }
        let dir = span.signum();

        let mut z = z0;
        let mut y = y0;
        let mut k1 = f(z, &y);
        let mut h = dir * self.initial_step(&y, &k1, span.abs());

        loop {
            let remaining = z1 - z;
            if remaining * dir <= 0.0 {
                break;
            }
            let last = (h * dir) >= remaining * dir;
            if last {
                h = remaining;
            }
            let h_floor = 64.0 * f64::EPSILON * z.abs().max(1.0);
            if h.abs() < h_floor {
                return Err(Error::Stiffness { z, step: h.abs() });
            }
            if stats.accepted + stats.rejected >= self.max_steps {
                return Err(Error::Convergence {
                    what: "ODE integration (step budget)",
                    achieved: (z - z0).abs(),
                    requested: span.abs(),
                });
            }

            let k2 = f(z + C2 * h, &axpy(&y, h, &[(A21, &k1)]));
            let k3 = f(z + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
            let k4 = f(
                z + C4 * h,
                &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
            );
            let k5 = f(
                z + C5 * h,
                &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
            );
            let k6 = f(
                z + h,
                &axpy(
                    &y,
                    h,
                    &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
                ),
            );
            let y_new = axpy(
                &y,
                h,
                &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
            );
            let z_new = if last { z1 } else { z + h };
            let k7 = f(z_new, &y_new);

            let mut acc = 0.0;
            for i in 0..N {
                let e =
                    (k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6 + k7[i] * E7)
                        * h;
                let scale = self.atol + self.rtol * y[i].norm().max(y_new[i].norm());
                let r = e.norm() / scale;
                acc += r * r;
            }
            let err = (acc / N as f64).sqrt();
            if !err.is_finite() {
                return Err(Error::Convergence {
                    what: "ODE integration (non-finite state)",
                    achieved: err,
                    requested: 1.0,
                });
            }

            let factor = if err == 0.0 {
                MAX_FACTOR
            } else {
                (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR)
            };

            if err <= 1.0 {
                stats.accepted += 1;
                z = z_new;
                y = y_new;
                k1 = match observe(z, &mut y) {
                    Observed::Unchanged => k7,
                    Observed::Modified => f(z, &y),
                };
                if last {
                    break;
                }
                h *= factor;
            } else {
                stats.rejected += 1;
                h *= factor.min(1.0);
            }
        }
        Ok((y, stats))
    }

    fn initial_step<const N: usize>(&self, y: &State<N>, dy: &State<N>, span: f64) -> f64 {
        let mut d0 = 0.0;
        let mut d1 = 0.0;
        for i in 0..N {
            let sc = self.atol + self.rtol * y[i].norm();
            d0 += (y[i].norm() / sc).powi(2);
            d1 += (dy[i].norm() / sc).powi(2);
        }
        let (d0, d1) = ((d0 / N as f64).sqrt(), (d1 / N as f64).sqrt());
        let h = if d0 < 1e-5 || d1 < 1e-5 {
            1e-6 * span.max(1.0)
        } else {
            0.01 * d0 / d1
        };
        h.min(span)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn complex_exponential() {
        // y' = (i - 0.1) y
        let lambda = Complex64::new(-0.1, 1.0);
        let dp = DormandPrince::new(1e-10, 1e-14);
        let (y, stats) = dp
            .integrate(
                |_, y: &[Complex64; 1]| [lambda * y[0]],
                0.0,
                10.0,
                [Complex64::new(1.0, 0.0)],
                |_, _| Observed::Unchanged,
            )
            .unwrap();
        let exact = (lambda * 10.0).exp();
        assert!((y[0] - exact).norm() < 1e-8, "{:?} vs {:?}", y[0], exact);
        assert!(stats.accepted > 10);
    }

    #[test]
    fn backwards_integration() {
        let dp = DormandPrince::new(1e-10, 1e-14);
        let (y, _) = dp
            .integrate(
                |z, _: &[Complex64; 1]| [Complex64::new(z.cos(), 0.0)],
                3.0,
                0.0,
                [Complex64::new(3.0_f64.sin(), 0.0)],
                |_, _| Observed::Unchanged,
            )
            .unwrap();
        assert!(y[0].norm() < 1e-9);
    }

    #[test]
    fn observer_can_rescale() {
        let dp = DormandPrince::new(1e-10, 1e-14);
        let mut log_scale = 0.0;
        let (y, _) = dp
            .integrate(
                |_, y: &[Complex64; 1]| [y[0] * 2.0],
                0.0,
                50.0,
                [Complex64::new(1.0, 0.0)],
                |_, y| {
                    let n = y[0].norm();
                    if n > 10.0 {
                        log_scale += n.ln();
                        y[0] /= n;
                        Observed::Modified
                    } else {
                        Observed::Unchanged
                    }
                },
            )
            .unwrap();
        assert_relative_eq!(log_scale + y[0].norm().ln(), 100.0, max_relative = 1e-8);
    }

    #[test]
    fn step_budget_exhaustion_is_reported() {
        let dp = DormandPrince {
            max_steps: 5,
            ..DormandPrince::new(1e-12, 1e-14)
        };
        let r = dp.integrate(
            |z, _: &[Complex64; 1]| [Complex64::new((50.0 * z).sin(), 0.0)],
            0.0,
            100.0,
            [Complex64::new(0.0, 0.0)],
            |_, _| Observed::Unchanged,
        );
        assert!(matches!(r, Err(Error::Convergence { .. })));
    }
}
