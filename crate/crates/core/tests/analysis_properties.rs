mod common;

use irsa::analysis::{density_evolution_trajectory, prior_moments_from_success};
use irsa::{decode_pmf, density_evolution_pe, waterfall_threshold, DegreeDistribution, DensityEvolutionParams};
use proptest::prelude::*;

use common::{monte_carlo_moments, prior_pairs, study_distributions};

#[test]
fn loss_is_monotone_in_load() {
    let params = DensityEvolutionParams::default();
    for lambda in study_distributions() {
        let mut prev = 0.0;
        for i in 1..=50 {
            let g = i as f64 / 50.0;
            let de = density_evolution_pe(&lambda, g, &params).unwrap();
            assert!((0.0..=1.0).contains(&de.p_loss) && (0.0..=1.0).contains(&de.p_edge));
            assert!(de.p_loss >= prev - 1e-12, "{lambda} at G={g}: {} < {prev}", de.p_loss);
            prev = de.p_loss;
        }
    }
}

#[test]
fn degree_two_threshold_matches_bifurcation() {
    // p = 1 - exp(-2 G p) leaves p = 0 as the only fixed point iff 2G <= 1
    let lambda = DegreeDistribution::regular(2).unwrap();
    let est = waterfall_threshold(&lambda, &DensityEvolutionParams::default()).unwrap();
    assert!((est.g_star - 0.5).abs() <= 0.01, "{}", est.g_star);
}

#[test]
fn pmf_normalizes_on_grid() {
    for k in 0..=64 {
        for i in 0..=100 {
            let pmf = decode_pmf(i as f64 / 100.0, k).unwrap();
            assert_eq!(pmf.len(), k + 1);
            assert!(pmf.iter().all(|&x| (0.0..=1.0).contains(&x)));
            let total: f64 = pmf.iter().sum();
            assert!((total - 1.0).abs() <= 1e-12, "K={k} p={i}/100: {total}");
        }
    }
}

#[test]
fn prior_moments_track_monte_carlo() {
    for (i, (k, p)) in prior_pairs().into_iter().enumerate() {
        let prior = prior_moments_from_success(p, k, 1.0);
        let (mean, var) = monte_carlo_moments(k, p, 1.0, 200_000, i as u64);
        assert!((prior.mu - mean).abs() <= 0.15, "K={k} p={p}: {} vs {mean}", prior.mu);
        assert!((prior.sigma2 - var).abs() <= 0.1, "K={k} p={p}: {} vs {var}", prior.sigma2);
    }
}

#[test]
fn prior_of_half_success_five_packets() {
    let prior = prior_moments_from_success(0.5, 5, 1.0);
    assert!((prior.mu - 3.5_f64.ln()).abs() < 1e-12);
    assert!((prior.sigma2 - 1.25 / 12.25).abs() < 1e-12);
}

fn lambda_strategy() -> impl Strategy<Value = DegreeDistribution> {
    prop::collection::vec((1usize..=8, 0.01f64..1.0), 1..4).prop_map(|raw| {
        let total: f64 = raw.iter().map(|(_, w)| w).sum();
        let mut terms: Vec<(usize, f64)> = raw.iter().map(|&(d, w)| (d, w / total)).collect();
        let head: f64 = terms[..terms.len() - 1].iter().map(|(_, p)| p).sum();
        terms.last_mut().unwrap().1 = 1.0 - head;
        DegreeDistribution::new(terms).unwrap()
    })
}

proptest! {
    #[test]
    fn mean_prior_is_bounded(k in 1usize..=64, p in 0.0f64..=1.0, w in 0.0f64..5.0) {
        let prior = prior_moments_from_success(p, k, w);
        prop_assert!(prior.mu >= 0.0);
        prop_assert!(prior.mu <= w * (k as f64).ln_1p() + 1e-12);
        prop_assert!(prior.sigma2 >= 0.0);
    }

    #[test]
    fn edge_erasure_never_increases(lambda in lambda_strategy(), g in 0.01f64..=1.0) {
        let path = density_evolution_trajectory(&lambda, g, &DensityEvolutionParams::default()).unwrap();
        prop_assert_eq!(path[0], 1.0);
        for pair in path.windows(2) {
            prop_assert!(pair[1] <= pair[0], "{:?}", pair);
            prop_assert!((0.0..=1.0).contains(&pair[1]));
        }
    }

    #[test]
    fn de_outputs_are_probabilities(lambda in lambda_strategy(), g in 1e-6f64..=1.0) {
        let de = density_evolution_pe(&lambda, g, &DensityEvolutionParams::default()).unwrap();
        prop_assert!((0.0..=1.0).contains(&de.p_loss));
        prop_assert!((0.0..=1.0).contains(&de.p_edge));
    }
}
