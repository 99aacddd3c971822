//! Globally adaptive Gauss–Kronrod (7, 15) quadrature for real and complex
//! integrands.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Values that can be integrated.
pub trait Integrand:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl Integrand for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Integrand for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussKronrod {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for GaussKronrod {
    fn default() -> Self {
        GaussKronrod {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_intervals: 4000,
        }
    }
}

struct Piece<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

impl<T> PartialEq for Piece<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl<T> Eq for Piece<T> {}
impl<T> PartialOrd for Piece<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Piece<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn kronrod<T: Integrand, F: FnMut(f64) -> T>(f: &mut F, a: f64, b: f64) -> (T, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let sum = f(center - dx) + f(center + dx);
        k = k + sum * WGK[j];
        if j % 2 == 1 {
            g = g + sum * WG[j / 2];
        }
    }
    let k = k * half;
    let g = g * half;
    (k, (k - g).magnitude())
}

impl GaussKronrod {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Self {
        GaussKronrod {
            abs_tol,
            rel_tol,
            ..Default::default()
        }
    }

    /// Integrates `f` over `[a, b]`, pre-split at the given breakpoints.
    pub fn integrate_with_breaks<T, F>(&self, mut f: F, breaks: &[f64]) -> Result<Estimate<T>>
    where
        T: Integrand,
        F: FnMut(f64) -> T,
    {
        let mut heap = BinaryHeap::new();
        let mut evaluations = 0;
        for w in breaks.windows(2) {
            if w[1] == w[0] {
                continue;
            }
            let (value, error) = kronrod(&mut f, w[0], w[1]);
            evaluations += 15;
            heap.push(Piece {
                a: w[0],
                b: w[1],
                value,
                error,
            });
        }

        loop {
            let (total, err) = Self::totals(&heap);
            if err <= self.abs_tol.max(self.rel_tol * total.magnitude()) {
                return Ok(Estimate {
                    value: total,
                    error: err,
                    evaluations,
                });
            }
            if heap.len() >= self.max_intervals {
                return Err(Error::Convergence {
                    what: "adaptive quadrature",
                    achieved: err,
                    requested: self.abs_tol.max(self.rel_tol * total.magnitude()),
                });
            }
            let worst = match heap.pop() {
                Some(p) => p,
                None => {
                    return Ok(Estimate {
                        value: T::zero(),
                        error: 0.0,
                        evaluations,
                    })
                }
            };
            let mid = 0.5 * (worst.a + worst.b);
            if mid <= worst.a || mid >= worst.b {
                // interval cannot be split any further
                return Err(Error::Convergence {
                    what: "adaptive quadrature (interval underflow)",
                    achieved: err,
                    requested: self.abs_tol.max(self.rel_tol * total.magnitude()),
                });
            }
            for (a, b) in [(worst.a, mid), (mid, worst.b)] {
                let (value, error) = kronrod(&mut f, a, b);
                evaluations += 15;
                heap.push(Piece { a, b, value, error });
            }
        }
    }

    pub fn integrate<T, F>(&self, f: F, a: f64, b: f64) -> Result<Estimate<T>>
    where
        T: Integrand,
        F: FnMut(f64) -> T,
    {
        self.integrate_with_breaks(f, &[a, b])
    }

    /// Integrates over `[a, inf)` through the map `x = a + t / (1 - t)`.
    pub fn integrate_to_infinity<T, F>(&self, mut f: F, a: f64) -> Result<Estimate<T>>
    where
        T: Integrand,
        F: FnMut(f64) -> T,
    {
        self.integrate(
            |t| {
                let s = 1.0 - t;
                f(a + t / s) * (1.0 / (s * s))
            },
            0.0,
            1.0,
        )
    }

    // Summed in order of position so the result does not depend on heap layout.
    fn totals<T: Integrand>(heap: &BinaryHeap<Piece<T>>) -> (T, f64) {
        let mut pieces: Vec<&Piece<T>> = heap.iter().collect();
        pieces.sort_by(|x, y| x.a.total_cmp(&y.a));
        let mut total = T::zero();
        let mut err = 0.0;
        for p in pieces {
            total = total + p.value;
            err += p.error;
        }
        (total, err)
    }
}
