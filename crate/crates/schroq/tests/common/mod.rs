//! Helpers shared by the integration suites.

#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use schroq::experiments::{preset, InitialState};
use schroq::phase_estimation::{phase_estimate, random_state_average, SpectrumResult};
use schroq::reference::initial_state_library;
use schroq::StateVector;

pub fn random_state(q: usize, rng: &mut impl Rng) -> StateVector {
    let raw: Vec<Complex64> = (0..1usize << q)
        .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect();
    let norm: f64 = raw.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    StateVector::from_amplitudes(raw.into_iter().map(|a| a / norm).collect()).unwrap()
}

/// Runs a named experiment preset end to end.
pub fn run_preset(name: &str) -> SpectrumResult {
    let p = preset(name).unwrap();
    let cfg = p.config.phase_config().unwrap();
    match p.config.initial {
        InitialState::Named(ref state_name) => {
            let initial = initial_state_library(state_name, cfg.mesh()).unwrap();
            phase_estimate(&initial, &p.config.potential, &cfg).unwrap()
        }
        InitialState::Random { count, seed } => {
            random_state_average(&p.config.potential, &cfg, count, seed).unwrap()
        }
    }
}

/// Total probability of bins within `width` of `energy`.
pub fn mass_near(spectrum: &SpectrumResult, energy: f64, width: f64) -> f64 {
    spectrum
        .bins()
        .iter()
        .filter(|b| (b.energy - energy).abs() <= width)
        .map(|b| b.probability)
        .sum()
}

/// Bin indices that are strict local maxima of the distribution.
pub fn local_maxima(spectrum: &SpectrumResult) -> Vec<usize> {
    let p: Vec<f64> = spectrum.bins().iter().map(|b| b.probability).collect();
    (0..p.len())
        .filter(|&m| {
            let left = if m == 0 { 0.0 } else { p[m - 1] };
            let right = if m + 1 == p.len() { 0.0 } else { p[m + 1] };
            p[m] > left && p[m] > right
        })
        .collect()
}

pub fn median_probability(spectrum: &SpectrumResult) -> f64 {
    let mut p: Vec<f64> = spectrum.bins().iter().map(|b| b.probability).collect();
    p.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = p.len();
    0.5 * (p[n / 2 - 1] + p[n / 2])
}
