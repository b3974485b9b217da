//! Shared fixtures for the integration suites.
#![allow(dead_code)] // each test target uses a different subset

use rand::Rng;
use sdcircle_core::bandlimited::{Harmonic, SampleGrid, TorusSignal};
use sdcircle_core::quantizer::SigmaDeltaScheme;

/// 0.1 sin(5t) cos(10t) + 0.2 as an exact trigonometric polynomial:
/// 0.05 sin(15t) - 0.05 sin(5t) + 0.2, bandwidth 15.
pub fn reference_signal() -> TorusSignal {
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
    .expect("reference signal is valid")
}

/// A stable third-order scheme: taps at positions 1, 5 and 25 solving the
/// vanishing-moment conditions, l1 norm 1.625 (margin 0.375).
pub fn third_order_scheme() -> SigmaDeltaScheme {
    let mut taps = vec![0.0; 26];
    taps[1] = 125.0 / 96.0;
    taps[5] = -5.0 / 16.0;
    taps[25] = 1.0 / 96.0;
    SigmaDeltaScheme::from_taps(3, taps).expect("spread third-order taps are valid")
}

/// A random bandlimited signal together with its N-point grid, scaled so
/// that the sample sup norm is exactly `target_sup * 0.999`.
pub fn random_scaled_grid<R: Rng>(
    rng: &mut R,
    bandwidth: usize,
    n: usize,
    target_sup: f64,
) -> (TorusSignal, SampleGrid) {
    loop {
        let raw = TorusSignal::random(rng, bandwidth);
        let grid = raw.sample(n).expect("n chosen above the minimum");
        let sup = grid.sup_norm();
        if sup > 1e-9 {
            let factor = 0.999 * target_sup / sup;
            let signal = raw.scaled(factor);
            let grid = signal.sample(n).expect("same n");
            return (signal, grid);
        }
    }
}
