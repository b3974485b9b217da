//! m-th-order one-bit sigma-delta quantization with the greedy sign rule:
//! minimal-support feedback filters, the derived state filter g, the
//! sufficient stability criterion, and full state traces.

use crate::analysis;
use crate::bandlimited::SampleGrid;
use crate::{Error, Result};

/// Absolute tolerance for the cross-check between the two remainder routes
/// (state-trace difference vs sample/bit sums) and for the tap-sum and
/// finite-support checks during filter derivation.
const IDENTITY_TOL: f64 = 1e-9;

/// Strictly causal feedback filter h driving `v_n = (h*v)_n + y_n - q_n`.
/// The leading tap is zero, so the recurrence uses only past state.
#[derive(Debug, Clone, PartialEq)]
pub struct FeedbackFilter {
    order: usize,
    taps: Vec<f64>,
}

impl FeedbackFilter {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn taps(&self) -> &[f64] {
        &self.taps
    }

    /// Number of feedback taps k (filter length minus the leading zero).
    pub fn tap_count(&self) -> usize {
        self.taps.len().saturating_sub(1)
    }

    pub fn l1_norm(&self) -> f64 {
        self.taps.iter().map(|t| t.abs()).sum()
    }
}

/// Finitely supported sequence g whose m-fold backward difference equals
/// δ⁰ - h; it converts the v-state into the u-state via u = g * v.
#[derive(Debug, Clone, PartialEq)]
pub struct GFilter {
    taps: Vec<f64>,
}

impl GFilter {
    pub fn taps(&self) -> &[f64] {
        &self.taps
    }

    /// ℓ¹ norm of the first backward difference of g, taken over the full
    /// (zero-extended) support. Bounds |Δu_n| for any |v| < 1 input.
    pub fn difference_l1_norm(&self) -> f64 {
        let mut prev = 0.0;
        let mut acc = 0.0;
        for &g in &self.taps {
            acc += (g - prev).abs();
            prev = g;
        }
        acc + prev.abs()
    }
}

/// One run of the quantizer: the bit sequence and both state traces, plus
/// the boundary remainder diagnostics.
#[derive(Debug, Clone)]
pub struct QuantizationRun {
    pub order: usize,
    /// Quantized values, each +1 or -1.
    pub bits: Vec<i8>,
    /// Recurrence state v_n.
    pub v: Vec<f64>,
    /// Accumulated state u_n = (g*v)_n.
    pub u: Vec<f64>,
    /// Number of +1 bits.
    pub plus_count: usize,
    /// Boundary remainder Δ^{m-1} u_{N-1}; equals Σy - Σq.
    pub remainder: f64,
    /// Whether the sufficient stability criterion held for the input.
    pub stability_ok: bool,
}

impl QuantizationRun {
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits_f64(&self) -> Vec<f64> {
        self.bits.iter().map(|&b| b as f64).collect()
    }

    pub fn bit_sum(&self) -> i64 {
        self.bits.iter().map(|&b| b as i64).sum()
    }

    /// sup_n |u_n|
    pub fn state_sup(&self) -> f64 {
        self.u.iter().fold(0.0, |acc, &x| acc.max(x.abs()))
    }
}

/// A quantization scheme: feedback filter plus its derived state filter.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaDeltaScheme {
    filter: FeedbackFilter,
    g: GFilter,
}

impl SigmaDeltaScheme {
    /// The first-order scheme with feedback filter (0, 1); here u = v.
    pub fn first_order() -> Self {
        Self::from_taps(1, vec![0.0, 1.0]).expect("first-order filter is valid")
    }

    /// The minimal-support second-order scheme with k taps:
    /// h = (0, k/(k-1), 0, ..., 0, 1 - k/(k-1)).
    pub fn second_order(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidTapCount { k });
        }
        let h1 = k as f64 / (k - 1) as f64;
        let mut taps = vec![0.0; k + 1];
        taps[1] = h1;
        taps[k] += 1.0 - h1;
        Self::from_taps(2, taps)
    }

    /// Builds a scheme of the given order from explicit feedback taps.
    ///
    /// The taps must be strictly causal (leading zero) and sum to 1, and the
    /// m-fold cumulative sums of δ⁰ - h must terminate (vanishing moments),
    /// otherwise no finitely supported state filter exists.
    pub fn from_taps(order: usize, taps: Vec<f64>) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidOrder);
        }
        if taps.len() < 2 {
            return Err(Error::InvalidTapCount { k: taps.len() });
        }
        if taps[0] != 0.0 {
            return Err(Error::FilterNotCausal { tap: taps[0] });
        }
        let sum: f64 = taps.iter().sum();
        if (sum - 1.0).abs() > IDENTITY_TOL {
            return Err(Error::FilterTapSum { sum });
        }
        let g = derive_state_filter(order, &taps)?;
        Ok(Self {
            filter: FeedbackFilter { order, taps },
            g: GFilter { taps: g },
        })
    }

    pub fn order(&self) -> usize {
        self.filter.order
    }

    pub fn filter(&self) -> &FeedbackFilter {
        &self.filter
    }

    pub fn g_filter(&self) -> &GFilter {
        &self.g
    }

    /// Stability margin μ = 2 - ‖h‖₁: inputs with sup below μ keep the state
    /// bounded.
    pub fn stability_margin(&self) -> f64 {
        2.0 - self.filter.l1_norm()
    }

    /// Sufficient stability criterion ‖h‖₁ + ‖y‖_∞ <= 2.
    pub fn check_stability(&self, grid: &SampleGrid) -> bool {
        grid.sup_norm() <= self.stability_margin()
    }

    /// Runs the greedy one-bit recurrence over the grid with zero state
    /// history, recording the bit sequence and both state traces.
    ///
    /// A violated stability criterion does not abort the run (the criterion
    /// is sufficient, not necessary); the run is flagged instead.
    pub fn quantize(&self, grid: &SampleGrid) -> Result<QuantizationRun> {
        let y = grid.values();
        let n = y.len();
        if n == 0 {
            return Err(Error::EmptyGrid);
        }
        let taps = &self.filter.taps;
        let k = taps.len() - 1;
        let mut v = vec![0.0f64; n];
        let mut bits = vec![0i8; n];
        for i in 0..n {
            let mut feedback = 0.0;
            for j in 1..=k {
                if j > i {
                    break; // zero history
                }
                feedback += taps[j] * v[i - j];
            }
            let arg = feedback + y[i];
            let q: i8 = if arg > 0.0 { 1 } else { -1 };
            bits[i] = q;
            v[i] = arg - q as f64;
        }

        let g = &self.g.taps;
        let mut u = vec![0.0f64; n];
        for i in 0..n {
            let mut acc = 0.0;
            for (j, &gj) in g.iter().enumerate() {
                if j > i {
                    break;
                }
                acc += gj * v[i - j];
            }
            u[i] = acc;
        }

        let m = self.filter.order;
        let remainder = analysis::backward_difference_at(&u, m - 1, n - 1);
        let sum_y: f64 = y.iter().sum();
        let sum_q: i64 = bits.iter().map(|&b| b as i64).sum();
        let crosscheck = sum_y - sum_q as f64;
        // drift guard: rounding in the u-trace scales with the state size,
        // so unstable runs get proportionally more headroom
        let state_sup = u.iter().fold(0.0f64, |acc, &x| acc.max(x.abs()));
        assert!(
            (remainder - crosscheck).abs() <= IDENTITY_TOL * state_sup.max(1.0),
            "state remainder {remainder} drifted from the sample/bit sum {crosscheck}"
        );
        let plus_count = bits.iter().filter(|&&b| b == 1).count();
        Ok(QuantizationRun {
            order: m,
            bits,
            v,
            u,
            plus_count,
            remainder,
            stability_ok: self.check_stability(grid),
        })
    }
}

/// Repeated cumulative summation of δ⁰ - h. Each pass must end at zero for
/// the support to stay finite; the vanishing tail is snapped to exact zero
/// and dropped.
fn derive_state_filter(order: usize, taps: &[f64]) -> Result<Vec<f64>> {
    let mut seq: Vec<f64> = taps.iter().map(|t| -t).collect();
    seq[0] += 1.0;
    for pass in 1..=order {
        let mut acc = 0.0;
        for x in seq.iter_mut() {
            acc += *x;
            *x = acc;
        }
        let tail = *seq.last().expect("sequence nonempty");
        if tail.abs() > IDENTITY_TOL {
            return Err(Error::NoFiniteStateFilter { pass, tail });
        }
        // the leading entry of every pass is 1, so the support never
        // shrinks past length one before the tail check fires
        seq.pop();
    }
    Ok(seq)
}
