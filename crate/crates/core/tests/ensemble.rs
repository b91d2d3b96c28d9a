mod common;

use common::bessel_quadrature;
use qkr_core::distribution::OrderMetric;
use qkr_core::{
    ensemble_distribution, loschmidt_train, periodic_train, run, InitialEnsemble, PulseTrain,
    QuantumState,
};

const FWHM_PER_SIGMA: f64 = 2.354_820_045_030_949;

#[test]
fn empty_train_returns_the_sampled_gaussian() {
    let ens = InitialEnsemble::gaussian(0.215, 201).unwrap();
    let d = ensemble_distribution(&PulseTrain::empty(), &ens, 32, false)
        .unwrap()
        .final_distribution;
    assert_eq!(d, ens.initial_distribution(32).unwrap());
    let sigma = d.fwhm_central_peak().unwrap() / FWHM_PER_SIGMA;
    assert!((sigma - 0.215).abs() / 0.215 < 0.01, "σ = {sigma}");
}

#[test]
fn single_member_single_kick_gives_bessel_heights() {
    let ens = InitialEnsemble::gaussian(0.05, 1).unwrap();
    let d = ensemble_distribution(&periodic_train(1, 0.0, 2.0).unwrap(), &ens, 64, false)
        .unwrap()
        .final_distribution;
    assert_eq!(d.spacing(), 2.0);
    for (p, mass) in d.grid().iter().zip(d.point_masses()) {
        let n = (p / 2.0).round() as i64;
        assert_eq!(2.0 * n as f64, *p);
        assert!((mass - bessel_quadrature(n, 2.0).powi(2)).abs() < 1e-10);
    }
}

#[test]
fn single_member_pipeline_reproduces_state_populations() {
    let train = loschmidt_train(10, 1.0, 2.0).unwrap();
    let ens = InitialEnsemble::gaussian(0.3, 1).unwrap();
    let d = ensemble_distribution(&train, &ens, 128, false)
        .unwrap()
        .final_distribution;
    let s = run(
        &QuantumState::plane_wave(0, 0.0, 128).unwrap(),
        &train,
        false,
    )
    .unwrap()
    .state;
    for (mass, pop) in d.point_masses().iter().zip(s.populations()) {
        assert_eq!(*mass, pop);
    }
}

#[test]
fn ensemble_is_linear_in_weights() {
    let train = loschmidt_train(10, 1.0, 2.0).unwrap();
    let ens = InitialEnsemble::gaussian(0.05, 101).unwrap();
    let full = ensemble_distribution(&train, &ens, 128, false)
        .unwrap()
        .final_distribution;

    let w = ens.weights();
    let even: Vec<f64> = w
        .iter()
        .enumerate()
        .map(|(j, w)| if j % 2 == 0 { *w } else { 0.0 })
        .collect();
    let odd: Vec<f64> = w
        .iter()
        .enumerate()
        .map(|(j, w)| if j % 2 == 1 { *w } else { 0.0 })
        .collect();
    let (se, so): (f64, f64) = (even.iter().sum(), odd.iter().sum());
    let de = ensemble_distribution(&train, &ens.with_weights(even).unwrap(), 128, false).unwrap();
    let do_ = ensemble_distribution(&train, &ens.with_weights(odd).unwrap(), 128, false).unwrap();
    let sum = de
        .final_distribution
        .scaled(se)
        .add(&do_.final_distribution.scaled(so))
        .unwrap();
    for (a, b) in sum.density().iter().zip(full.density()) {
        assert!((a - b).abs() <= 1e-12 * b.max(1.0));
    }

    // Two half-weighted copies of the same run.
    let half = full.scaled(0.5);
    let twice = half.add(&half).unwrap();
    for (a, b) in twice.density().iter().zip(full.density()) {
        assert!((a - b).abs() <= 1e-12 * b.max(1.0));
    }
}

#[test]
fn symmetric_train_and_ensemble_give_symmetric_distribution() {
    let ens = InitialEnsemble::gaussian(0.05, 201).unwrap();
    let d = ensemble_distribution(&loschmidt_train(10, 1.0, 2.0).unwrap(), &ens, 128, false)
        .unwrap()
        .final_distribution;
    for (&p, &v) in d.grid().iter().zip(d.density()) {
        if p.abs() < 200.0 {
            let mirror = d.density_near(-p).unwrap();
            assert!((v - mirror).abs() <= 1e-10, "p = {p}");
        }
    }
}

#[test]
fn echo_distribution_has_narrow_center_and_pedestal() {
    let ens = InitialEnsemble::gaussian(0.05, 201).unwrap();
    let initial = ens.initial_distribution(128).unwrap();
    let d = ensemble_distribution(&loschmidt_train(10, 1.0, 2.0).unwrap(), &ens, 128, false)
        .unwrap()
        .final_distribution;
    let zero = d.zero_index().unwrap();
    let max = d.density().iter().cloned().fold(0.0, f64::max);
    assert_eq!(d.density()[zero], max);
    assert!(d.fwhm_central_peak().unwrap() < initial.fwhm_central_peak().unwrap());
    let heights = d.order_heights(OrderMetric::Height);
    let h = |n: i64| heights.iter().find(|(k, _)| *k == n).unwrap().1;
    assert!(
        h(1) > 0.01 * h(0) && h(-1) > 0.01 * h(0),
        "h1 = {}, h0 = {}",
        h(1),
        h(0)
    );
    assert!((h(1) - h(-1)).abs() <= 1e-10 * h(0));
}

#[test]
fn w_at_zero_returns_to_one_after_the_echo() {
    let ens = InitialEnsemble::gaussian(0.05, 201).unwrap();
    let initial = ens.initial_distribution(128).unwrap();
    let d = ensemble_distribution(&loschmidt_train(10, 2.0, 2.5).unwrap(), &ens, 128, false)
        .unwrap()
        .final_distribution;
    let w = d.normalize_w(&initial).unwrap();
    assert!((w.density()[w.zero_index().unwrap()] - 1.0).abs() < 1e-10);
}

#[test]
fn per_kick_distributions_are_recorded() {
    let ens = InitialEnsemble::gaussian(0.05, 21).unwrap();
    let out =
        ensemble_distribution(&loschmidt_train(10, 1.0, 2.0).unwrap(), &ens, 64, true).unwrap();
    assert_eq!(out.per_kick.len(), 10);
    assert_eq!(out.per_kick[9], out.final_distribution);
    for d in &out.per_kick {
        assert!((d.total_mass() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn aliasing_is_tagged_with_member() {
    let ens = InitialEnsemble::gaussian(0.05, 3).unwrap();
    let err = ensemble_distribution(
        &periodic_train(10, 4.0 * std::f64::consts::PI, 3.0).unwrap(),
        &ens,
        16,
        false,
    )
    .unwrap_err();
    assert!(err.is_numerical_guard());
    assert!(err.to_string().starts_with("ensemble member"), "{err}");
}
