use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vcx_core::lattice::{
    coarse_grain, init_state, run_experiment, sample_schedule, simulate_replica, AutomatonState,
    SimConfig, COFFEE, CREAM,
};
use vcx_core::DiffusionSolution;

fn counts(s: &AutomatonState) -> (usize, usize) {
    let cream = s.cream_count();
    (cream, 2 * s.segments() - cream)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 10, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn particles_are_conserved(seed in any::<u64>(), n in 2usize..120, split_frac in 0.0f64..=1.0) {
        let split = 1 + ((n - 1) as f64 * split_frac).round() as usize;
        let cfg = SimConfig::new(n, 2000, split, seed, 1).unwrap();
        let mut state = init_state(&cfg);
        let start = counts(&state);
        let mut next = state.clone();
        let mut lights = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..cfg.total_steps {
            state.step_into(&mut rng, &mut lights, &mut next);
            std::mem::swap(&mut state, &mut next);
            prop_assert_eq!(counts(&state), start);
            prop_assert_eq!(state.right.len(), n - 1);
            prop_assert!(state.right.iter().chain(&state.left).all(|&p| p == CREAM || p == COFFEE));
        }
        prop_assert_eq!(state.time, cfg.total_steps);
    }
}

#[test]
fn same_seed_same_run() {
    let times = sample_schedule(3000, 250).unwrap();
    let cfg = SimConfig::new(81, 3000, 41, 77, 8).unwrap();
    let a = run_experiment(&cfg, 20, 12, &times).unwrap();
    let b = run_experiment(&cfg, 20, 12, &times).unwrap();
    assert_eq!(a, b);
    let other = SimConfig {
        seed: 78 + 8,
        ..cfg
    };
    let c = run_experiment(&other, 20, 12, &times).unwrap();
    assert_ne!(a.mean_profiles, c.mean_profiles);
}

#[test]
fn replicas_do_not_depend_on_thread_count() {
    let times = sample_schedule(1000, 500).unwrap();
    let cfg = SimConfig::new(41, 1000, 21, 5, 6).unwrap();
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| run_experiment(&cfg, 20, 12, &times).unwrap());
    assert_eq!(single, run_experiment(&cfg, 20, 12, &times).unwrap());
}

#[test]
fn long_run_spreads_cream_evenly() {
    // t = 2T/S² = 12.5, far past the slowest mode's decay time
    let cfg = SimConfig::new(41, 10_000, 21, 9, 10).unwrap();
    let run = run_experiment(&cfg, 20, 12, &[0, 10_000]).unwrap();
    assert_eq!(run.fraction_top[0], 1.0);
    assert!(
        (run.fraction_top[1] - 0.5).abs() < 0.05,
        "{}",
        run.fraction_top[1]
    );
}

/// Group means of `u(·, t)` over the same groups of segments.
fn diffusion_groups(t: f64, segments: usize, groups: usize) -> Vec<f64> {
    let sol = DiffusionSolution::default();
    let per_segment: Vec<f64> = (0..segments)
        .map(|s| {
            let x = -1.0 + 2.0 * (s as f64 + 0.5) / segments as f64;
            sol.u(x, t).unwrap()
        })
        .collect();
    coarse_grain(&per_segment, groups, 12).unwrap().group_means
}

#[test]
fn averaged_profile_follows_the_diffusion_equation() {
    let cfg = SimConfig::new(201, 18_000, 101, 2024, 64).unwrap();
    let times = [1_000, 4_500, 9_000, 18_000];
    let run = run_experiment(&cfg, 20, 12, &times).unwrap();
    for (j, &steps) in times.iter().enumerate() {
        let t = cfg.diffusion_time(steps);
        let expected = diffusion_groups(t, cfg.segments(), 20);
        let worst = run.coarse[j]
            .group_means
            .iter()
            .zip(&expected)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(worst < 0.08, "t={t}: max deviation {worst}");
    }
}

#[test]
fn single_replica_trace_matches_run() {
    let cfg = SimConfig::new(21, 400, 11, 3, 1).unwrap();
    let tr = simulate_replica(&cfg, 0, &[0, 200, 400]).unwrap();
    let run = run_experiment(&cfg, 4, 12, &[0, 200, 400]).unwrap();
    assert_eq!(tr.profiles, run.mean_profiles);
    assert_eq!(tr.fraction_top, run.fraction_top);
}
