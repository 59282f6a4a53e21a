//! Distributional checks of the samplers.

use rainbow_hc::models::{derive_seed, sample_colored, CoupledInstance, SampleMode};

/// Upper `alpha` quantile of chi-square with `df` degrees of freedom
/// (Wilson-Hilferty), with `z` the matching normal quantile.
fn chi_square_critical(df: f64, z: f64) -> f64 {
    let a = 2.0 / (9.0 * df);
    df * (1.0 - a + z * a.sqrt()).powi(3)
}

fn edge_count_histogram(mode: SampleMode, samples: u64, salt: u64) -> Vec<u64> {
    let mut hist = vec![0u64; 57];
    for i in 0..samples {
        let h = sample_colored(8, 3, 0.3, 4, derive_seed(&[salt, i]), mode).unwrap();
        hist[h.edge_count()] += 1;
    }
    hist
}

#[test]
fn enumerate_and_binomial_edge_counts_agree() {
    let samples = 10_000;
    let a = edge_count_histogram(SampleMode::Enumerate, samples, 1);
    let b = edge_count_histogram(SampleMode::Binomial, samples, 2);
    // merge adjacent counts until each bin expects at least 5 per sampler
    let mut bins: Vec<(u64, u64)> = Vec::new();
    let mut acc = (0, 0);
    for (x, y) in a.iter().zip(&b) {
        acc = (acc.0 + x, acc.1 + y);
        if acc.0 + acc.1 >= 10 {
            bins.push(acc);
            acc = (0, 0);
        }
    }
    if let Some(last) = bins.last_mut() {
        *last = (last.0 + acc.0, last.1 + acc.1);
    }
    let total = 2.0 * samples as f64;
    let mut stat = 0.0;
    for &(x, y) in &bins {
        let expected = (x + y) as f64 / 2.0;
        stat += (x as f64 - expected).powi(2) / expected + (y as f64 - expected).powi(2) / expected;
    }
    let df = (bins.len() - 1) as f64;
    let critical = chi_square_critical(df, 3.090);
    assert!(
        stat < critical,
        "chi-square {stat} >= {critical} on {df} df ({total} samples)"
    );
}

#[test]
fn colors_are_uniform() {
    let mut counts = [0u64; 4];
    for i in 0..2000 {
        let h = sample_colored(8, 3, 0.5, 4, derive_seed(&[3, i]), SampleMode::Enumerate).unwrap();
        for e in h.colored_edges() {
            counts[e.color as usize - 1] += 1;
        }
    }
    let total: u64 = counts.iter().sum();
    let expected = total as f64 / 4.0;
    let stat: f64 = counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    assert!(stat < chi_square_critical(3.0, 3.090), "{counts:?}");
}

#[test]
fn coupled_realizations_are_nested_and_calibrated() {
    let mut present = 0usize;
    let trials = 2000;
    for t in 0..trials {
        let ci = CoupledInstance::new(8, 3, 4, derive_seed(&[4, t])).unwrap();
        let sparse = ci.realize(0.2);
        let dense = ci.realize(0.6);
        for (e, cs) in sparse.edges() {
            assert_eq!(dense.colors_of(e), Some(cs));
        }
        present += sparse.edge_count();
    }
    let mean = present as f64 / trials as f64;
    let (expected, sd) = (56.0 * 0.2, (56.0f64 * 0.2 * 0.8 / trials as f64).sqrt());
    assert!((mean - expected).abs() < 4.0 * sd, "{mean}");
}
