//! Declarative experiment configuration: a TOML file with CLI flag
//! overrides. Every run is fully determined by the resolved configuration
//! plus the seed.
//!
//! Schema (all keys optional; flags override file values):
//!
//! ```toml
//! preset = "paper-fig1"    # or "zero"; fills signal, n, schemes, sweep
//! seed = 7                 # RNG seed for the randomized verification suites
//! n = 9002                 # sample count for single-run commands
//! grid_resolution = 90020  # evaluation grid; defaults to 10*n
//! update = true            # apply the constant-shift update
//! out_dir = "out"
//!
//! [signal]
//! bandwidth = 15
//! constant = 0.2
//! harmonics = [ { k = 15, sin = 0.05 }, { k = 5, sin = -0.05 } ]
//!
//! [[schemes]]
//! order = 1
//!
//! [[schemes]]
//! order = 2
//! tap_count = 4            # second-order filter with k taps
//!
//! # [[schemes]]
//! # order = 3
//! # taps = [0.0, 1.3020833333333333, 0.0, 0.0, 0.0, -0.3125, ...]
//!
//! [sweep]
//! lambdas = [10, 20, 40, 80, 160, 320]   # or: ns = [301, 601, ...]
//! ```

use anyhow::{bail, Context, Result};
use serde::Deserialize;
use std::path::{Path, PathBuf};

use sdcircle_core::bandlimited::{Harmonic, TorusSignal};
use sdcircle_core::quantizer::SigmaDeltaScheme;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub preset: Option<String>,
    pub seed: Option<u64>,
    pub n: Option<usize>,
    pub grid_resolution: Option<usize>,
    pub update: Option<bool>,
    pub out_dir: Option<String>,
    pub signal: Option<SignalSpec>,
    pub schemes: Option<Vec<SchemeSpec>>,
    pub sweep: Option<SweepSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignalSpec {
    pub bandwidth: usize,
    #[serde(default)]
    pub constant: f64,
    #[serde(default)]
    pub harmonics: Vec<HarmonicSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HarmonicSpec {
    pub k: usize,
    #[serde(default)]
    pub cos: f64,
    #[serde(default)]
    pub sin: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeSpec {
    pub order: usize,
    pub tap_count: Option<usize>,
    pub taps: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub lambdas: Option<Vec<f64>>,
    pub ns: Option<Vec<usize>>,
}

/// CLI flag values that override the file configuration.
#[derive(Debug, Default)]
pub struct Overrides {
    pub preset: Option<String>,
    pub order: Option<usize>,
    pub tabs: Option<usize>,
    pub n: Option<usize>,
    pub sweep: Option<Vec<f64>>,
    pub update: Option<bool>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub grid_resolution: Option<usize>,
}

/// A scheme ready to run, with a stable label for file names and reports.
#[derive(Debug, Clone)]
pub struct ResolvedScheme {
    pub label: String,
    pub scheme: SigmaDeltaScheme,
}

#[derive(Debug, Clone)]
pub struct ResolvedConfig {
    pub signal: TorusSignal,
    pub n: usize,
    pub grid_resolution: Option<usize>,
    pub update: bool,
    pub schemes: Vec<ResolvedScheme>,
    pub sweep_ns: Vec<usize>,
    pub out_dir: PathBuf,
    pub seed: u64,
}

impl ResolvedConfig {
    /// Effective evaluation-grid size for a run of `n` samples.
    pub fn resolution_for(&self, n: usize) -> usize {
        self.grid_resolution.unwrap_or(10 * n).max(n)
    }
}

pub fn load_file(path: &Path) -> Result<FileConfig> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn preset_signal_paper() -> SignalSpec {
    // 0.1 sin(5t) cos(10t) + 0.2 written out as exact harmonics
    SignalSpec {
        bandwidth: 15,
        constant: 0.2,
        harmonics: vec![
            HarmonicSpec {
                k: 15,
                cos: 0.0,
                sin: 0.05,
            },
            HarmonicSpec {
                k: 5,
                cos: 0.0,
                sin: -0.05,
            },
        ],
    }
}

fn apply_preset(name: &str, file: &mut FileConfig) -> Result<()> {
    match name {
        "paper-fig1" => {
            file.signal.get_or_insert_with(preset_signal_paper);
            file.n.get_or_insert(9002);
            file.schemes.get_or_insert_with(|| {
                vec![
                    SchemeSpec {
                        order: 1,
                        tap_count: None,
                        taps: None,
                    },
                    SchemeSpec {
                        order: 2,
                        tap_count: Some(4),
                        taps: None,
                    },
                ]
            });
        }
        "zero" => {
            file.signal.get_or_insert(SignalSpec {
                bandwidth: 15,
                constant: 0.0,
                harmonics: vec![],
            });
            file.n.get_or_insert(9002);
            file.schemes.get_or_insert_with(|| {
                vec![
                    SchemeSpec {
                        order: 1,
                        tap_count: None,
                        taps: None,
                    },
                    SchemeSpec {
                        order: 2,
                        tap_count: Some(4),
                        taps: None,
                    },
                ]
            });
        }
        other => bail!("unknown preset {other:?} (available: paper-fig1, zero)"),
    }
    Ok(())
}

fn build_scheme(spec: &SchemeSpec) -> Result<ResolvedScheme> {
    let (label, scheme) = match (spec.order, &spec.taps, spec.tap_count) {
        (1, None, None) => ("order1".to_string(), SigmaDeltaScheme::first_order()),
        (2, None, count) => {
            let k = count.unwrap_or(4);
            (format!("order2_k{k}"), SigmaDeltaScheme::second_order(k)?)
        }
        (order, Some(taps), _) => (
            format!("order{order}_custom"),
            SigmaDeltaScheme::from_taps(order, taps.clone())?,
        ),
        (order, None, _) => bail!("a scheme of order {order} needs explicit taps"),
    };
    Ok(ResolvedScheme { label, scheme })
}

/// Merges defaults, preset, file values, and flag overrides into a runnable
/// configuration.
pub fn resolve(mut file: FileConfig, overrides: Overrides) -> Result<ResolvedConfig> {
    if let Some(preset) = overrides.preset.clone() {
        file.preset = Some(preset);
    }
    // default to the reference preset when nothing specifies a signal
    let preset = file
        .preset
        .clone()
        .or_else(|| file.signal.is_none().then(|| "paper-fig1".to_string()));
    if let Some(name) = preset {
        apply_preset(&name, &mut file)?;
    }

    let spec = file.signal.as_ref().expect("preset guarantees a signal");
    let harmonics: Vec<Harmonic> = spec
        .harmonics
        .iter()
        .map(|h| Harmonic {
            k: h.k,
            cos_amp: h.cos,
            sin_amp: h.sin,
        })
        .collect();
    let signal = TorusSignal::from_harmonics(spec.bandwidth, spec.constant, &harmonics)?;

    let n = overrides.n.or(file.n).unwrap_or(9002);
    if n < 2 * spec.bandwidth + 1 {
        bail!(
            "n = {n} undersamples a bandwidth-{} signal (minimum {})",
            spec.bandwidth,
            2 * spec.bandwidth + 1
        );
    }

    let mut scheme_specs = file.schemes.unwrap_or_default();
    if let Some(order) = overrides.order {
        scheme_specs = vec![SchemeSpec {
            order,
            tap_count: overrides.tabs,
            taps: scheme_specs
                .iter()
                .find(|s| s.order == order)
                .and_then(|s| s.taps.clone()),
        }];
    } else if let Some(k) = overrides.tabs {
        for s in scheme_specs.iter_mut().filter(|s| s.order == 2) {
            s.tap_count = Some(k);
        }
    }
    if scheme_specs.is_empty() {
        bail!("no schemes configured; set [[schemes]] or pass --order");
    }
    let schemes = scheme_specs
        .iter()
        .map(build_scheme)
        .collect::<Result<Vec<_>>>()?;

    let sweep_ns = {
        let to_n = |lambda: f64| (2.0 * lambda * spec.bandwidth as f64).round() as usize + 1;
        if let Some(lambdas) = overrides.sweep.as_ref() {
            lambdas.iter().map(|&l| to_n(l)).collect()
        } else if let Some(sweep) = file.sweep.as_ref() {
            match (&sweep.ns, &sweep.lambdas) {
                (Some(ns), _) => ns.clone(),
                (None, Some(lambdas)) => lambdas.iter().map(|&l| to_n(l)).collect(),
                (None, None) => bail!("[sweep] needs either ns or lambdas"),
            }
        } else {
            // λ doubling from 10 to 320
            [10.0, 20.0, 40.0, 80.0, 160.0, 320.0]
                .iter()
                .map(|&l| to_n(l))
                .collect()
        }
    };
    for &sweep_n in &sweep_ns {
        if sweep_n < 2 * spec.bandwidth + 1 {
            bail!("sweep point n = {sweep_n} undersamples the signal");
        }
    }

    let grid_resolution = overrides.grid_resolution.or(file.grid_resolution);
    if let Some(r) = grid_resolution {
        if r < n {
            bail!("grid_resolution = {r} is coarser than the sample grid n = {n}");
        }
    }

    Ok(ResolvedConfig {
        signal,
        n,
        grid_resolution,
        update: overrides.update.or(file.update).unwrap_or(true),
        schemes,
        sweep_ns,
        out_dir: overrides
            .out
            .or_else(|| file.out_dir.map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("out")),
        seed: overrides.seed.or(file.seed).unwrap_or(7),
    })
}
