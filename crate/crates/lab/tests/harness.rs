use multidraw_core::channel::{beta_blue, beta_green};
use multidraw_lab::config::{
    CapacityConfig, ChannelSpec, DistributionSpec, E2eConfig, Lemma1Config, Lemma2Config, RateScale, RegimeCurvesConfig,
};
use multidraw_lab::experiments::{
    run_capacity, run_e2e_sweep, run_lemma1, run_lemma2, run_lemma3_fuzz, run_regime_curves, Lemma3Fuzz,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn capacity_forms_agree_on_random_sweep() {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    for _ in 0..100 {
        let len = rng.gen_range(2..8);
        let w: Vec<f64> = (0..len).map(|_| rng.gen::<f64>() + 1e-3).collect();
        let total: f64 = w.iter().sum();
        let cfg = CapacityConfig {
            p: rng.gen(),
            beta: rng.gen_range(0.5..30.0),
            distribution: DistributionSpec::Pmf(w.iter().map(|x| x / total).collect()),
            ..Default::default()
        };
        let r = run_capacity(&cfg).unwrap();
        assert!((r.capacity - r.capacity_via_expected_bec).abs() <= 1e-12);
        assert!((r.expected_bec_capacity - (1.0 - r.p_eff)).abs() <= 1e-12);
    }
}

#[test]
fn regime_rows_follow_the_formulas() {
    let rows = run_regime_curves(&RegimeCurvesConfig {
        p_min: 0.05,
        p_max: 0.5,
        points: 40,
        out: None,
        experiment: None,
    })
    .unwrap();
    assert_eq!(rows.len(), 40);
    assert_eq!(rows[39].beta_blue, 8.0);
    for r in &rows {
        assert_eq!(r.beta_blue, beta_blue(r.p));
        assert_eq!(r.beta_green, beta_green(r.p));
        assert!(r.beta_blue > r.beta_green);
    }
    assert!(rows.windows(2).all(|w| w[1].p > w[0].p));
}

#[test]
fn lemma1_half_rows_is_certain() {
    let rows = run_lemma1(&Lemma1Config {
        b_list: vec![200],
        delta_list: vec![0.5],
        trials: 20,
        ..Default::default()
    })
    .unwrap();
    assert!(1.0 - rows[0].exact < 2f64.powi(-99) + f64::EPSILON);
    assert_eq!(rows[0].hits, 20);
    assert_eq!(rows[0].rows, 100);
}

#[test]
fn lemma1_cells_within_four_standard_errors() {
    let rows = run_lemma1(&Lemma1Config {
        b_list: vec![20, 100],
        delta_list: vec![0.0, 0.1, 0.5],
        trials: 3000,
        seed: 8,
        ..Default::default()
    })
    .unwrap();
    for r in rows {
        let tol = 4.0 * r.std_error.max(1.0 / r.trials as f64);
        assert!((r.empirical - r.exact).abs() <= tol, "{r:?}");
    }
}

#[test]
fn lemma2_single_draw_has_no_correct_edges() {
    let rows = run_lemma2(&Lemma2Config {
        m_list: vec![8, 32],
        distribution: DistributionSpec::Fixed { n: 1 },
        trials: 50,
        ..Default::default()
    })
    .unwrap();
    assert!(rows.iter().all(|r| r.correct_mean == 0.0));
    assert!(rows.iter().all(|r| r.correct_bound == r.m as f64 / 2.0));
}

#[test]
fn lemma3_fuzz_is_small_and_complete() {
    let recs = run_lemma3_fuzz(&Lemma3Fuzz {
        instances: 40,
        seed: 3,
        ..Default::default()
    })
    .unwrap();
    assert_eq!(recs.len(), 40);
    for r in recs {
        assert!(r.edges <= 20 && r.reads <= 12);
        assert!(r.clusterings <= 1 << r.edges);
        assert!(r.clusterings_in_range <= r.clusterings);
        if r.true_in_range {
            assert!(r.true_found, "{r:?}");
        }
    }
}

#[test]
fn e2e_rates_above_one_always_fail() {
    let out = run_e2e_sweep(&E2eConfig {
        rates: vec![1.1, 2.0],
        rate_scale: RateScale::Absolute,
        trials: 10,
        budget: Some(1000),
        ..Default::default()
    })
    .unwrap();
    for row in out.rows {
        assert_eq!(row.error_rate, Some(1.0));
        assert_eq!(row.genie_error_rate, 1.0);
    }
}

#[test]
fn e2e_noiseless_genie_never_fails() {
    let out = run_e2e_sweep(&E2eConfig {
        channel: ChannelSpec {
            m: 4,
            l: Some(16),
            beta: None,
            p: 0.0,
        },
        rates: vec![0.2, 0.5, 0.7],
        rate_scale: RateScale::Absolute,
        trials: 60,
        budget: Some(100_000),
        seed: 12,
        ..Default::default()
    })
    .unwrap();
    for row in &out.rows {
        // 1 - 1/beta = 0.875
        assert!(row.feasible);
        assert_eq!(row.genie_errors, 0, "{row:?}");
        assert_eq!(row.disagreements, 0);
    }
}

#[test]
fn error_rate_grows_with_rate() {
    let out = run_e2e_sweep(&E2eConfig {
        rates: vec![0.6, 0.8, 0.95, 1.0, 1.05],
        rate_scale: RateScale::Capacity,
        trials: 200,
        seed: 5,
        budget: Some(1_000_000),
        first_hit: false,
        ..Default::default()
    })
    .unwrap();
    let err: Vec<f64> = out.rows.iter().map(|r| r.error_rate.unwrap()).collect();
    let genie: Vec<f64> = out.rows.iter().map(|r| r.genie_error_rate).collect();
    for series in [&err, &genie] {
        // each step may dip by at most two binomial standard deviations
        for w in series.windows(2) {
            let sd = ((w[0] * (1.0 - w[0]) + w[1] * (1.0 - w[1])) / 200.0).sqrt();
            assert!(w[1] >= w[0] - 2.0 * sd.max(0.01), "{series:?}");
        }
        assert!(series[4] > series[0], "{series:?}");
    }
    assert!(out.rows.iter().all(|r| r.budget_exhausted == 0 && r.disagreements == 0));
}

#[test]
fn incorrect_edges_scale_like_the_bound() {
    let rows = run_lemma2(&Lemma2Config {
        trials: 300,
        seed: 21,
        ..Default::default()
    })
    .unwrap();
    let ratios: Vec<f64> = rows.iter().map(|r| r.z_over_scale_mean).collect();
    for r in &rows {
        assert!(r.z_p95 <= (r.m as f64).powf(2.5 - r.gamma), "{r:?}");
        assert!(r.correct_mean <= r.correct_bound * 1.05, "{r:?}");
    }
    let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().cloned().fold(0.0, f64::max);
    assert!(hi <= 2.0 * lo, "{ratios:?}");
    assert!(ratios[3] <= 1.5 * ratios[0], "{ratios:?}");
}
