//! The constant update: shift every sample by δ = -Δ^{m-1}u_{N-1}/N and
//! re-quantize. For first- and second-order schemes the shifted run's
//! boundary remainder vanishes exactly, removing the wrap-around error
//! term; for higher orders the remainder is recorded without a zero
//! guarantee.

use crate::bandlimited::SampleGrid;
use crate::quantizer::{QuantizationRun, SigmaDeltaScheme};
use crate::{Error, Result};

/// Tolerance for the remainder identities checked after the update pass.
const REMAINDER_TOL: f64 = 1e-9;

/// A baseline run, the constant shift derived from it, and the re-quantized
/// run on the shifted samples.
#[derive(Debug, Clone)]
pub struct UpdatePlan {
    pub order: usize,
    /// The constant shift δ = -r/N added to every sample.
    pub delta: f64,
    pub baseline_run: QuantizationRun,
    /// Boundary remainder of the baseline run.
    pub baseline_remainder: f64,
    pub shifted_grid: SampleGrid,
    pub updated_run: QuantizationRun,
    /// Boundary remainder of the updated run; zero for orders 1 and 2 under
    /// the stability hypotheses.
    pub updated_remainder: f64,
    /// Nearest even integer to the updated remainder. The bit-count identity
    /// makes the exact value an even integer, so this doubles as a
    /// diagnostic for numerical drift.
    pub updated_remainder_even: i64,
    /// Change in the number of +1 bits between baseline and updated runs;
    /// the updated remainder equals twice this value.
    pub plus_count_change: i64,
}

/// The constant update δ = -Δ^{m-1}u_{N-1} / N for a run produced from the
/// given grid. Under stability |δ| <= 2/N for orders 1 and 2.
pub fn compute_update(run: &QuantizationRun, grid: &SampleGrid) -> f64 {
    debug_assert_eq!(run.len(), grid.len(), "run was not produced from grid");
    -run.remainder / grid.len() as f64
}

/// Quantizes the grid, derives the constant update from the remainder,
/// shifts, and re-quantizes.
///
/// For order 2 the shifted samples must still satisfy the stability
/// criterion; otherwise the zero-remainder guarantee is gone and the call
/// fails with [`Error::StabilityLost`]. For order 1 with samples in [-1, 1]
/// the shifted samples stay within the admissible window automatically.
pub fn apply_update(scheme: &SigmaDeltaScheme, grid: &SampleGrid) -> Result<UpdatePlan> {
    let baseline_run = scheme.quantize(grid)?;
    let delta = compute_update(&baseline_run, grid);
    let shifted_grid = grid.shifted(delta);
    let m = scheme.order();

    if m == 2 && !scheme.check_stability(&shifted_grid) {
        return Err(Error::StabilityLost {
            total: scheme.filter().l1_norm() + shifted_grid.sup_norm(),
        });
    }
    let baseline_admissible = grid.sup_norm() <= 1.0;
    if m == 1 && baseline_admissible {
        // |u_{N-1}| <= 1 forces |δ| <= 1/N, so the shift cannot leave the
        // admissible window
        let limit = 1.0 + 1.0 / grid.len() as f64 + 1e-12;
        assert!(
            shifted_grid.sup_norm() <= limit,
            "shifted samples left [-1 - 1/N, 1 + 1/N]"
        );
    }

    let updated_run = scheme.quantize(&shifted_grid)?;
    let plus_count_change = baseline_run.plus_count as i64 - updated_run.plus_count as i64;
    let updated_remainder = updated_run.remainder;

    // the updated remainder is the difference of the two bit sums, an even
    // integer, for every order and every input
    let parity_value = 2.0 * plus_count_change as f64;
    assert!(
        (updated_remainder - parity_value).abs() <= REMAINDER_TOL,
        "updated remainder {updated_remainder} disagrees with bit-count value {parity_value}"
    );

    if m == 1 && baseline_admissible {
        assert!(
            updated_remainder.abs() <= REMAINDER_TOL,
            "first-order updated remainder {updated_remainder} did not vanish"
        );
    }
    if m == 2 && scheme.g_filter().difference_l1_norm() <= 2.0 + 1e-9 {
        assert!(
            updated_remainder.abs() <= REMAINDER_TOL,
            "second-order updated remainder {updated_remainder} did not vanish"
        );
    }

    let updated_remainder_even = 2 * (updated_remainder / 2.0).round() as i64;
    Ok(UpdatePlan {
        order: m,
        delta,
        baseline_remainder: baseline_run.remainder,
        baseline_run,
        shifted_grid,
        updated_run,
        updated_remainder,
        updated_remainder_even,
        plus_count_change,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bandlimited::{Harmonic, TorusSignal};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn reference_signal() -> TorusSignal {
        TorusSignal::from_harmonics(
            15,
            0.2,
            &[
                Harmonic {
                    k: 15,
                    cos_amp: 0.0,
                    sin_amp: 0.05,
                },
                Harmonic {
                    k: 5,
                    cos_amp: 0.0,
                    sin_amp: -0.05,
                },
            ],
        )
        .unwrap()
    }

    #[test]
    fn update_formula() {
        let scheme = SigmaDeltaScheme::first_order();
        let grid = reference_signal().sample(100).unwrap();
        let run = scheme.quantize(&grid).unwrap();
        let delta = compute_update(&run, &grid);
        assert!((delta + run.remainder / 100.0).abs() < 1e-15);
        assert!(delta.abs() <= 2.0 / 100.0);
    }

    #[test]
    fn zero_remainder_means_zero_update() {
        // the alternating zero-input pattern ends balanced for even N
        let scheme = SigmaDeltaScheme::first_order();
        let grid = SampleGrid::from_values(vec![0.0; 8], 0).unwrap();
        let plan = apply_update(&scheme, &grid).unwrap();
        assert_eq!(plan.delta, 0.0);
        assert_eq!(plan.baseline_run.bits, plan.updated_run.bits);
        assert_eq!(plan.updated_remainder, 0.0);
    }

    #[test]
    fn first_order_update_zeroes_the_remainder() {
        let scheme = SigmaDeltaScheme::first_order();
        let grid = reference_signal().sample(9002).unwrap();
        let plan = apply_update(&scheme, &grid).unwrap();
        assert!(plan.updated_remainder.abs() < 1e-9);
        let direct = plan.shifted_grid.sum() - plan.updated_run.bit_sum() as f64;
        assert!(direct.abs() < 1e-9);
    }

    #[test]
    fn second_order_update_zeroes_the_difference_remainder() {
        let scheme = SigmaDeltaScheme::second_order(4).unwrap();
        let grid = reference_signal().sample(9002).unwrap();
        let plan = apply_update(&scheme, &grid).unwrap();
        assert!(plan.updated_remainder.abs() < 1e-9);
        assert!(plan.delta.abs() < 2.0 / 9002.0);
    }

    #[test]
    fn second_order_update_rejects_unstable_shift() {
        // samples right at the margin: any nonzero shift pushes them out
        let scheme = SigmaDeltaScheme::second_order(4).unwrap();
        let margin = scheme.stability_margin();
        let mut values = vec![margin; 40];
        // ensure a nonzero baseline remainder so δ != 0
        values[0] = 0.0;
        let grid = SampleGrid::from_values(values, 0).unwrap();
        let baseline = scheme.quantize(&grid).unwrap();
        assert!(baseline.remainder.abs() > 1e-6);
        assert!(matches!(
            apply_update(&scheme, &grid),
            Err(Error::StabilityLost { .. })
        ));
    }

    #[test]
    fn parity_identity_for_higher_order() {
        let scheme = SigmaDeltaScheme::from_taps(3, vec![0.0, 3.0, -3.0, 1.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..10 {
            let n = rng.gen_range(40..200);
            let values: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.2..0.2)).collect();
            let grid = SampleGrid::from_values(values, 0).unwrap();
            let plan = apply_update(&scheme, &grid).unwrap();
            assert_eq!(
                plan.updated_remainder_even,
                2 * plan.plus_count_change,
                "nearest even integer must match the bit-count difference"
            );
            assert!(
                (plan.updated_remainder - 2.0 * plan.plus_count_change as f64).abs() < 1e-9
            );
        }
    }

    #[test]
    fn shifted_signal_evaluates_with_offset() {
        let signal = reference_signal();
        let delta = -0.0123;
        let shifted = signal.shifted(delta);
        for i in 0..20 {
            let t = i as f64 * 0.3;
            assert!((shifted.evaluate(t) - signal.evaluate(t) - delta).abs() < 1e-12);
        }
    }
}
