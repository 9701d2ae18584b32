use privacy_funnel::sample::dirichlet_joint;
use privacy_funnel::{
    compose, entropy, exact_funnel_optimum, exact_region, greedy_funnel, mutual_information,
    sweep_bottleneck, sweep_funnel, Channel, DEFAULT_CAP,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;

#[test]
fn greedy_never_beats_exhaustive_optimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..40 {
        let joint = dirichlet_joint::<f64, _>(&mut rng, 3, 5);
        let hx = entropy(&joint.col_marginal());
        for frac in [0.0, 0.3, 0.55, 0.8, 1.0] {
            let r = frac * hx;
            let greedy = greedy_funnel(&joint, r).unwrap();
            let best = exact_funnel_optimum(&joint, r, DEFAULT_CAP).unwrap();
            assert!(greedy.ixy() >= r - TOL);
            assert!(
                greedy.isy() >= best.isy - TOL,
                "greedy {} < optimum {}",
                greedy.isy(),
                best.isy
            );
            if frac == 0.0 || frac == 1.0 {
                assert!((greedy.isy() - best.isy).abs() <= TOL);
            }
        }
    }
}

#[test]
fn greedy_points_are_region_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let joint = dirichlet_joint::<f64, _>(&mut rng, 3, 5);
        let region = exact_region(&joint, DEFAULT_CAP).unwrap();
        let hx = entropy(&joint.col_marginal());
        let grid: Vec<f64> = (0..=6).map(|k| hx * k as f64 / 6.0).collect();
        let funnel = sweep_funnel(&joint, &grid).unwrap();
        let isx = mutual_information(&joint);
        let grid: Vec<f64> = (0..=6).map(|k| isx * k as f64 / 6.0).collect();
        let bottleneck = sweep_bottleneck(&joint, &grid).unwrap();
        for p in funnel.iter().chain(bottleneck.iter()) {
            let hit = region.iter().find(|q| q.partition == p.partition).unwrap();
            assert!((hit.ixy - p.ixy).abs() < TOL && (hit.isy - p.isy).abs() < TOL);
            let lo = region
                .iter()
                .filter(|q| q.ixy >= p.ixy - TOL)
                .map(|q| q.isy)
                .fold(f64::INFINITY, f64::min);
            assert!(p.isy >= lo - TOL);
        }
    }
}

#[test]
fn greedy_channel_matches_composition() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..20 {
        let joint = dirichlet_joint::<f64, _>(&mut rng, 4, 7);
        let out = greedy_funnel(&joint, 0.5 * entropy(&joint.col_marginal())).unwrap();
        let channel = Channel::from_partition(&out.partition()).unwrap();
        let (sy, xy) = compose(&joint, &channel).unwrap();
        assert!((mutual_information(&sy) - out.isy()).abs() < TOL);
        assert!((mutual_information(&xy) - out.ixy()).abs() < TOL);
    }
}
