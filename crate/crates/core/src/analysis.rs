//! Finite-difference operators on sample traces, the theoretical
//! reconstruction-error bound assembled from a run's state trace and kernel
//! norms, a mean-value containment check for kernel differences, and the
//! log-log slope fit used for decay-rate experiments.

use std::f64::consts::TAU;

use crate::bandlimited::{DirichletKernel, KernelNorms};
use crate::quantizer::QuantizationRun;

/// Direction of a finite difference.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// (Δu)_n = u_n - u_{n-1}
    Backward,
    /// (Δ̄u)_n = u_{n+1} - u_n
    Forward,
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// `order`-fold finite difference of a sequence with zero-padded history
/// (backward) or zero-padded future (forward), matching the quantizer's
/// zero state initialization.
pub fn finite_difference(seq: &[f64], order: usize, direction: Direction) -> Vec<f64> {
    assert!(order >= 1, "difference order must be at least 1");
    match direction {
        Direction::Backward => (0..seq.len())
            .map(|n| backward_difference_at(seq, order, n))
            .collect(),
        Direction::Forward => (0..seq.len())
            .map(|n| {
                let mut acc = 0.0;
                for j in 0..=order {
                    let sign = if (order - j).is_multiple_of(2) { 1.0 } else { -1.0 };
                    let v = seq.get(n + j).copied().unwrap_or(0.0);
                    acc += sign * binomial(order, j) * v;
                }
                acc
            })
            .collect(),
    }
}

/// Backward difference Δ^order at a single index, with zero history below
/// index 0; order 0 is the identity.
pub fn backward_difference_at(seq: &[f64], order: usize, index: usize) -> f64 {
    let mut acc = 0.0;
    for j in 0..=order {
        if j > index {
            break;
        }
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * binomial(order, j) * seq[index - j];
    }
    acc
}

/// The assembled theoretical bound on the sup reconstruction error of a run.
#[derive(Debug, Clone)]
pub struct ErrorBound {
    pub order: usize,
    /// sup_n |u_n| of the run's state trace.
    pub state_sup: f64,
    /// Boundary remainders entering the bound: |u_{N-1}| for order 1,
    /// |Δ^{m-k} u_{N-1}| for k = 1..m-1 otherwise.
    pub boundary_terms: Vec<f64>,
    /// Kernel norms for derivative orders 0..=m, in that order.
    pub kernel_norms: Vec<KernelNorms>,
    pub value: f64,
}

/// Assembles the sup-error bound for an order-m run from its state trace and
/// the kernel-derivative norms.
///
/// For order 1 the bound is
/// `(sup|u| · ‖φ'‖_L1 + |u_{N-1}| · ‖φ‖_∞) / N`;
/// for order m >= 2 it is the `(2π)^{m-1}/N^m` main term plus the boundary
/// sum of the remaining difference remainders at the last index.
pub fn reconstruction_error_bound(
    run: &QuantizationRun,
    kernel: &DirichletKernel,
    n: usize,
) -> ErrorBound {
    assert_eq!(run.len(), n, "run length and sample count disagree");
    let m = run.order;
    let norms: Vec<KernelNorms> = (0..=m).map(|d| kernel.norms(d)).collect();
    let state_sup = run.u.iter().fold(0.0f64, |acc, &x| acc.max(x.abs()));
    let nf = n as f64;
    let (boundary_terms, value) = if m == 1 {
        let tail = run.u[n - 1].abs();
        let value = (state_sup * norms[1].l1 + tail * norms[0].sup) / nf;
        (vec![tail], value)
    } else {
        let mut boundary_terms = Vec::with_capacity(m - 1);
        let mut boundary_sum = 0.0;
        for k in 1..m {
            let term = backward_difference_at(&run.u, m - k, n - 1).abs();
            boundary_terms.push(term);
            boundary_sum += (TAU / nf).powi(k as i32 - 1) * term * norms[k - 1].sup;
        }
        let main = TAU.powi(m as i32 - 1) * state_sup / nf.powi(m as i32)
            * (norms[m].l1 + norms[m - 1].sup);
        (boundary_terms, main + boundary_sum / nf)
    };
    ErrorBound {
        order: m,
        state_sup,
        boundary_terms,
        kernel_norms: norms,
        value,
    }
}

/// Result of checking that a k-fold kernel difference equals
/// `(-1)^k (2π/N)^k` times a derivative value attained inside the stencil.
#[derive(Debug, Clone)]
pub struct ContainmentCheck {
    /// Δ^k of n ↦ φ(t - 2πn/N) at index k.
    pub difference: f64,
    /// The derivative value implied by the difference: difference / ((-1)^k (2π/N)^k).
    pub implied_derivative: f64,
    /// Range of the k-th derivative over the full k-step stencil (t - 2πk/N, t).
    pub stencil_range: (f64, f64),
    /// Range of the k-th derivative over the single step (t - 2π/N, t).
    pub single_step_range: (f64, f64),
    /// Containment over the full stencil interval.
    pub contained: bool,
    /// Containment over the single-step interval.
    pub contained_single_step: bool,
}

/// Mean-value containment for the k-fold backward difference of the sampled
/// kernel: the implied derivative value must lie in the range of the k-th
/// derivative over the stencil. The nested-interval structure of the k-fold
/// difference spans up to k steps, so containment is checked over the full
/// stencil; the single-step interval is reported alongside.
pub fn mean_value_containment(
    kernel: &DirichletKernel,
    k: usize,
    t: f64,
    n: usize,
) -> ContainmentCheck {
    assert!(k >= 1, "difference order must be at least 1");
    let step = TAU / n as f64;
    let samples: Vec<f64> = (0..=k).map(|j| kernel.value(t - step * j as f64)).collect();
    let difference = backward_difference_at(&samples, k, k);
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let implied_derivative = difference / (sign * step.powi(k as i32));

    let derivative_range = |a: f64, b: f64| {
        const SAMPLES: usize = 4096;
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..=SAMPLES {
            let x = a + (b - a) * i as f64 / SAMPLES as f64;
            let d = kernel.derivative(k, x);
            lo = lo.min(d);
            hi = hi.max(d);
        }
        // headroom for extrema the sampling grid missed
        let margin = 1e-9 * (1.0 + lo.abs().max(hi.abs()));
        (lo - margin, hi + margin)
    };
    let stencil_range = derivative_range(t - step * k as f64, t);
    let single_step_range = derivative_range(t - step, t);
    ContainmentCheck {
        difference,
        implied_derivative,
        stencil_range,
        single_step_range,
        contained: implied_derivative >= stencil_range.0 && implied_derivative <= stencil_range.1,
        contained_single_step: implied_derivative >= single_step_range.0
            && implied_derivative <= single_step_range.1,
    }
}

/// Ordinary-least-squares slope of ln(error) against ln(n). Points with a
/// nonpositive coordinate are skipped.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(n, e)| *n > 0.0 && *e > 0.0)
        .map(|(n, e)| (n.ln(), e.ln()))
        .collect();
    assert!(pts.len() >= 2, "need at least two positive points");
    let len = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / len;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / len;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn backward_difference_with_zero_history() {
        let d = finite_difference(&[1.0, 2.0, 3.0, 4.0], 1, Direction::Backward);
        assert_eq!(d, vec![1.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn forward_and_backward_agree_up_to_shift() {
        let seq = [0.3, -1.2, 2.4, 0.7, -0.1, 1.8, 0.0, -2.2];
        for order in 1..=3 {
            let fwd = finite_difference(&seq, order, Direction::Forward);
            let bwd = finite_difference(&seq, order, Direction::Backward);
            for n in 0..seq.len() - order {
                assert!(
                    (fwd[n] - bwd[n + order]).abs() < 1e-12,
                    "order {order}, n {n}"
                );
            }
        }
    }

    #[test]
    fn higher_order_difference_composes() {
        let seq: Vec<f64> = (0..50).map(|i| ((i * i) as f64 * 0.37).sin()).collect();
        let direct = finite_difference(&seq, 3, Direction::Backward);
        let mut iterated = seq.clone();
        for _ in 0..3 {
            iterated = finite_difference(&iterated, 1, Direction::Backward);
        }
        for (a, b) in direct.iter().zip(&iterated) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn difference_at_index_matches_full_pass() {
        let seq: Vec<f64> = (0..20).map(|i| (i as f64 * 0.9).cos()).collect();
        for order in 1..=3 {
            let full = finite_difference(&seq, order, Direction::Backward);
            for idx in 0..seq.len() {
                assert!((backward_difference_at(&seq, order, idx) - full[idx]).abs() < 1e-13);
            }
        }
        assert_eq!(backward_difference_at(&seq, 0, 7), seq[7]);
    }

    #[test]
    fn containment_first_order_is_mean_value_theorem() {
        let kernel = DirichletKernel::new(15);
        for (t, n) in [(1.0, 9002), (0.4, 311), (5.9, 1201)] {
            let check = mean_value_containment(&kernel, 1, t, n);
            assert!(check.contained, "t={t}, n={n}: {check:?}");
            assert!(check.contained_single_step);
        }
    }

    #[test]
    fn containment_second_order() {
        let kernel = DirichletKernel::new(15);
        let check = mean_value_containment(&kernel, 2, 1.0, 9002);
        assert!(check.contained, "{check:?}");
    }

    #[test]
    fn first_difference_of_linear_sequence_is_scaled_slope() {
        // on a linear function the difference is exactly -(step)·slope
        let n = 100usize;
        let step = TAU / n as f64;
        let slope = 2.5;
        let t = 1.3;
        let samples = [t * slope, (t - step) * slope];
        let diff = backward_difference_at(&samples, 1, 1);
        assert!((diff + step * slope).abs() < 1e-14);
    }

    #[test]
    fn slope_fit_recovers_exact_power_law() {
        let pts: Vec<(f64, f64)> = (1..=8)
            .map(|i| {
                let n = (100 * i) as f64;
                (n, 3.7 * n.powf(-1.5))
            })
            .collect();
        assert!((log_log_slope(&pts) + 1.5).abs() < 1e-12);
    }
}
