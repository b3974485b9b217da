//! Bandlimited functions on the unit circle: trigonometric-polynomial
//! signals held as Fourier coefficients, uniform sampling, and the Dirichlet
//! reproducing kernel with exact derivatives and quadrature norms.

use num_complex::Complex64;
use rand::Rng;
use std::f64::consts::TAU;

use crate::{Error, Result};

/// Below this magnitude of sin(x/2) the kernel switches from the sine-ratio
/// closed form to the finite Fourier sum (removable singularity at multiples
/// of 2π).
const SINGULARITY_THRESHOLD: f64 = 1e-6;

/// Tolerance for the Hermitian-symmetry check on input coefficients.
const HERMITIAN_TOL: f64 = 1e-12;

/// One real harmonic `cos_amp * cos(k t) + sin_amp * sin(k t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Harmonic {
    pub k: usize,
    pub cos_amp: f64,
    pub sin_amp: f64,
}

/// A real-valued K-bandlimited function on the circle, stored as Fourier
/// coefficients `c_k` for k = -K..K with `c_{-k} = conj(c_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusSignal {
    bandwidth: usize,
    /// Index `i` holds the coefficient for frequency `i - bandwidth`.
    coefficients: Vec<Complex64>,
}

impl TorusSignal {
    /// Builds a signal from the full coefficient vector `c_{-K}..c_K`.
    ///
    /// Fails unless the vector has length `2K + 1` and is Hermitian
    /// symmetric (so the function is real-valued).
    pub fn new(bandwidth: usize, coefficients: Vec<Complex64>) -> Result<Self> {
        let expected = 2 * bandwidth + 1;
        if coefficients.len() != expected {
            return Err(Error::CoefficientLength {
                bandwidth,
                expected,
                got: coefficients.len(),
            });
        }
        for k in 0..=bandwidth {
            let pos = coefficients[bandwidth + k];
            let neg = coefficients[bandwidth - k];
            let deviation = (neg - pos.conj()).norm();
            if deviation > HERMITIAN_TOL {
                return Err(Error::NotRealValued { k, deviation });
            }
        }
        Ok(Self {
            bandwidth,
            coefficients,
        })
    }

    /// The constant function with value `c0` (bandwidth 0).
    pub fn constant(c0: f64) -> Self {
        Self {
            bandwidth: 0,
            coefficients: vec![Complex64::new(c0, 0.0)],
        }
    }

    /// Builds `constant + Σ cos_amp_k cos(kt) + sin_amp_k sin(kt)` with exact
    /// coefficient entry.
    pub fn from_harmonics(bandwidth: usize, constant: f64, harmonics: &[Harmonic]) -> Result<Self> {
        let mut coefficients = vec![Complex64::new(0.0, 0.0); 2 * bandwidth + 1];
        coefficients[bandwidth] = Complex64::new(constant, 0.0);
        for h in harmonics {
            if h.k == 0 || h.k > bandwidth {
                return Err(Error::HarmonicOutOfBand {
                    k: h.k,
                    bandwidth,
                });
            }
            // a cos(kt) + b sin(kt) = c e^{ikt} + conj(c) e^{-ikt}, c = (a - ib)/2
            let c = Complex64::new(h.cos_amp / 2.0, -h.sin_amp / 2.0);
            coefficients[bandwidth + h.k] += c;
            coefficients[bandwidth - h.k] += c.conj();
        }
        Ok(Self {
            bandwidth,
            coefficients,
        })
    }

    /// A random real trigonometric polynomial with mildly decaying
    /// coefficients; callers scale it afterwards to the amplitude they need.
    pub fn random<R: Rng>(rng: &mut R, bandwidth: usize) -> Self {
        let mut coefficients = vec![Complex64::new(0.0, 0.0); 2 * bandwidth + 1];
        coefficients[bandwidth] = Complex64::new(rng.gen_range(-1.0..1.0), 0.0);
        for k in 1..=bandwidth {
            let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                / (k as f64).sqrt();
            coefficients[bandwidth + k] = c;
            coefficients[bandwidth - k] = c.conj();
        }
        Self {
            bandwidth,
            coefficients,
        }
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    /// Coefficient `c_k`; zero outside the band.
    pub fn coefficient(&self, k: i64) -> Complex64 {
        let idx = k + self.bandwidth as i64;
        if idx < 0 || idx >= self.coefficients.len() as i64 {
            Complex64::new(0.0, 0.0)
        } else {
            self.coefficients[idx as usize]
        }
    }

    /// Full Fourier synthesis `Σ_k c_k e^{ikt}` without discarding the
    /// imaginary residue.
    pub fn evaluate_complex(&self, t: f64) -> Complex64 {
        let kk = self.bandwidth as i64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, c) in self.coefficients.iter().enumerate() {
            let k = i as i64 - kk;
            acc += c * Complex64::from_polar(1.0, k as f64 * t);
        }
        acc
    }

    /// Evaluates the signal at angle `t`, discarding the (tiny) imaginary
    /// residue of the synthesis.
    pub fn evaluate(&self, t: f64) -> f64 {
        self.evaluate_complex(t).re
    }

    /// Uniform samples `y_n = f(2πn/N)` for n = 0..N-1.
    ///
    /// Requires `N >= 2K + 1` so the samples determine the signal.
    pub fn sample(&self, n: usize) -> Result<SampleGrid> {
        let min = 2 * self.bandwidth + 1;
        if n < min {
            return Err(Error::Undersampled {
                n,
                bandwidth: self.bandwidth,
                min,
            });
        }
        let values = (0..n)
            .map(|i| self.evaluate(TAU * i as f64 / n as f64))
            .collect();
        Ok(SampleGrid {
            values,
            source_bandwidth: self.bandwidth,
        })
    }

    /// The signal shifted by a constant: only `c_0` changes.
    pub fn shifted(&self, delta: f64) -> Self {
        let mut out = self.clone();
        out.coefficients[self.bandwidth] += Complex64::new(delta, 0.0);
        out
    }

    /// The signal with all coefficients multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for c in &mut out.coefficients {
            *c *= factor;
        }
        out
    }
}

/// N uniform samples of a bandlimited signal.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleGrid {
    values: Vec<f64>,
    source_bandwidth: usize,
}

impl SampleGrid {
    /// Wraps raw sample values; `N >= 2K + 1` must hold for the declared
    /// source bandwidth.
    pub fn from_values(values: Vec<f64>, source_bandwidth: usize) -> Result<Self> {
        let min = 2 * source_bandwidth + 1;
        if values.len() < min {
            return Err(Error::Undersampled {
                n: values.len(),
                bandwidth: source_bandwidth,
                min,
            });
        }
        Ok(Self {
            values,
            source_bandwidth,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn source_bandwidth(&self) -> usize {
        self.source_bandwidth
    }

    /// Oversampling parameter λ = (N - 1) / (2K); infinite for constants.
    pub fn oversampling(&self) -> f64 {
        if self.source_bandwidth == 0 {
            f64::INFINITY
        } else {
            (self.values.len() - 1) as f64 / (2 * self.source_bandwidth) as f64
        }
    }

    /// max_n |y_n|
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Every sample shifted by the same constant.
    pub fn shifted(&self, delta: f64) -> Self {
        Self {
            values: self.values.iter().map(|v| v + delta).collect(),
            source_bandwidth: self.source_bandwidth,
        }
    }
}

/// L¹ norm over one period and sup norm of a kernel derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelNorms {
    pub l1: f64,
    pub sup: f64,
}

/// The Dirichlet kernel `sin((2K+1)x/2) / sin(x/2)`, the reproducing kernel
/// of K-bandlimited functions on the circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DirichletKernel {
    bandwidth: usize,
}

impl DirichletKernel {
    pub fn new(bandwidth: usize) -> Self {
        Self { bandwidth }
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    /// Term-by-term evaluation of the `order`-th derivative of the finite
    /// Fourier sum Σ_{|k| <= K} e^{ikx}; order 0 is the kernel itself.
    pub(crate) fn fourier_form(&self, order: usize, x: f64) -> f64 {
        let mut acc = if order == 0 { 1.0 } else { 0.0 };
        for k in 1..=self.bandwidth {
            let kf = k as f64;
            let scale = 2.0 * kf.powi(order as i32);
            let (s, c) = (kf * x).sin_cos();
            acc += scale
                * match order % 4 {
                    0 => c,
                    1 => -s,
                    2 => -c,
                    _ => s,
                };
        }
        acc
    }

    /// Kernel value; the removable singularity at multiples of 2π is
    /// evaluated through the finite Fourier sum.
    pub fn value(&self, x: f64) -> f64 {
        let half = 0.5 * x;
        let denom = half.sin();
        if denom.abs() < SINGULARITY_THRESHOLD {
            self.fourier_form(0, x)
        } else {
            ((2 * self.bandwidth + 1) as f64 * half).sin() / denom
        }
    }

    /// Exact `order`-th derivative via term-by-term differentiation of the
    /// Fourier sum. Quotient-rule forms of the sine ratio cancel
    /// catastrophically near the peak; the sum does not.
    pub fn derivative(&self, order: usize, x: f64) -> f64 {
        assert!(order >= 1, "derivative order must be at least 1");
        self.fourier_form(order, x)
    }

    /// L¹ and sup norms of the `derivative_order`-th derivative over one
    /// period, by composite Simpson quadrature and grid maximisation on
    /// 50(2K+1) intervals, refined ×2 until the relative change drops below
    /// 1e-6.
    pub fn norms(&self, derivative_order: usize) -> KernelNorms {
        let f = |x: f64| {
            if derivative_order == 0 {
                self.value(x)
            } else {
                self.fourier_form(derivative_order, x)
            }
        };
        let mut intervals = 50 * (2 * self.bandwidth + 1);
        let (mut l1, mut sup) = simpson_abs_and_sup(&f, intervals);
        for _ in 0..12 {
            intervals *= 2;
            let (l1_next, sup_next) = simpson_abs_and_sup(&f, intervals);
            let dl = (l1_next - l1).abs() / l1_next.abs().max(f64::MIN_POSITIVE);
            let ds = (sup_next - sup).abs() / sup_next.abs().max(f64::MIN_POSITIVE);
            l1 = l1_next;
            sup = sup_next;
            if dl < 1e-6 && ds < 1e-6 {
                break;
            }
        }
        KernelNorms { l1, sup }
    }
}

/// Composite Simpson integral of |f| over [0, 2π] together with the grid
/// maximum of |f|. `intervals` must be even.
fn simpson_abs_and_sup(f: &dyn Fn(f64) -> f64, intervals: usize) -> (f64, f64) {
    debug_assert!(intervals.is_multiple_of(2));
    let h = TAU / intervals as f64;
    let mut sup: f64 = 0.0;
    let mut sum = 0.0;
    for i in 0..=intervals {
        let v = f(i as f64 * h).abs();
        sup = sup.max(v);
        let w = if i == 0 || i == intervals {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        sum += w * v;
    }
    (sum * h / 3.0, sup)
}
