use phaselock_core::sampler::estimate_regions;
use phaselock_core::{phase_transition_experiment, FrequencyDistribution, PolytopeSpec, Region};

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(f)
}

#[test]
fn estimates_do_not_depend_on_pool_size() {
    let regions = vec![
        Region::Polytope(PolytopeSpec::c_db(5).unwrap()),
        Region::Polytope("Hull(I_DB(4),I_CS(4))".parse().unwrap()),
        Region::Locked { n: 6 },
    ];
    // not a multiple of the chunk size, so the last chunk is partial
    let m = 3 * 4096 + 17;
    let runs: Vec<Vec<(u64, u64)>> = [1, 2, 8]
        .iter()
        .map(|&t| {
            in_pool(t, || estimate_regions(&regions, m, 99))
                .unwrap()
                .iter()
                .map(|e| (e.value.to_bits(), e.std_error.to_bits()))
                .collect()
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    assert_eq!(runs[0], runs[2]);
}

#[test]
fn transition_curves_do_not_depend_on_pool_size() {
    let dist = FrequencyDistribution::standard_gaussian();
    let run = |t| {
        in_pool(t, || {
            phase_transition_experiment(&dist, &[32, 64], &[0.5, 1.0], 40, 5).unwrap()
        })
    };
    let a = run(1);
    assert_eq!(a, run(2));
    assert_eq!(a, run(8));
}

#[test]
fn different_seeds_differ() {
    let r = [Region::Locked { n: 4 }];
    let a = estimate_regions(&r, 5_000, 1).unwrap();
    let b = estimate_regions(&r, 5_000, 2).unwrap();
    assert_ne!(a[0].value, b[0].value);
}
