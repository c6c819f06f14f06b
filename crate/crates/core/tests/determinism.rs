use farey_renewal::experiments::{
    run_diamond_vaaler, run_ly_uniform_law, run_stable_stability, run_uniform_law, Engine, ExperimentConfig,
};
use proptest::prelude::*;

fn cfg(seed: u64, workers: usize, engine: Engine) -> ExperimentConfig {
    ExperimentConfig {
        master_seed: seed,
        trials: 40,
        horizons: vec![100, 1000],
        workers,
        engine,
        ..Default::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    /// Results depend on the seed and the config, never on the worker count.
    #[test]
    fn worker_count_is_unobservable(seed in any::<u64>(), workers in 2usize..5) {
        for engine in [Engine::Chain, Engine::Mobius] {
            let a = run_uniform_law(&cfg(seed, 1, engine)).unwrap();
            let b = run_uniform_law(&cfg(seed, workers, engine)).unwrap();
            prop_assert_eq!(a, b);
        }
        let a = run_ly_uniform_law(&cfg(seed, 1, Engine::Chain)).unwrap();
        let b = run_ly_uniform_law(&cfg(seed, workers, Engine::Chain)).unwrap();
        prop_assert_eq!(a, b);
        let a = run_stable_stability(&cfg(seed, 1, Engine::Chain)).unwrap();
        let b = run_stable_stability(&cfg(seed, workers, Engine::Chain)).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn rerun_is_identical(seed in any::<u64>()) {
        let c = cfg(seed, 0, Engine::Chain);
        prop_assert_eq!(run_diamond_vaaler(&c).unwrap(), run_diamond_vaaler(&c).unwrap());
    }
}
