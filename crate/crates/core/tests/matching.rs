use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sdr_core::geometry::Point;
use sdr_core::matching::{chamfer, chamfer_with_mode, rank, Candidate, MatchMode, WeightedCloud};

/// Linear-scan Chamfer written independently of the library's index.
fn brute_chamfer(a: &WeightedCloud, b: &WeightedCloud) -> f64 {
    fn directed(from: &WeightedCloud, to: &WeightedCloud) -> f64 {
        let top = from.weights().iter().cloned().fold(f64::MIN, f64::max);
        let mut num = 0.0;
        let mut den = 0.0;
        for (p, &w) in from.points().iter().zip(from.weights()) {
            let w = w / top;
            let mut best = f64::INFINITY;
            for q in to.points() {
                let d = (p.x - q.x) * (p.x - q.x) + (p.y - q.y) * (p.y - q.y);
                if d < best {
                    best = d;
                }
            }
            num += w * best;
            den += w;
        }
        num / den
    }
    directed(a, b) + directed(b, a)
}

fn random_cloud(rng: &mut ChaCha8Rng, max: usize, weighted: bool) -> WeightedCloud {
    let n = rng.gen_range(1..=max);
    let pts: Vec<Point> = (0..n).map(|_| Point::new(rng.gen(), rng.gen())).collect();
    let w: Vec<f64> = (0..n).map(|i| if weighted && i > 0 { rng.gen() } else { 1.0 }).collect();
    WeightedCloud::new(pts, w).unwrap()
}

#[test]
fn grid_chamfer_equals_brute_force_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for i in 0..200 {
        let a = random_cloud(&mut rng, 256, i % 2 == 0);
        let b = random_cloud(&mut rng, 256, i % 3 == 0);
        let fast = chamfer(&a, &b);
        assert_eq!(fast, brute_chamfer(&a, &b), "pair {i}");
        assert_eq!(fast, chamfer(&b, &a));
        assert!(fast >= 0.0);
        assert_eq!(chamfer(&a, &a), 0.0);
    }
}

#[test]
fn lattice_clouds_with_ties_match_brute_force() {
    let grid = |n: usize, off: f64| {
        WeightedCloud::uniform((0..n * n).map(|i| Point::new((i % n) as f64 * 0.1 + off, (i / n) as f64 * 0.1)).collect()).unwrap()
    };
    for n in 1..12 {
        let a = grid(n, 0.0);
        let b = grid(n + 1, 0.05);
        assert_eq!(chamfer(&a, &b), brute_chamfer(&a, &b));
    }
}

#[test]
fn worked_examples() {
    let c = |pts: &[(f64, f64)]| WeightedCloud::uniform(pts.iter().map(|&(x, y)| Point::new(x, y)).collect()).unwrap();
    assert_eq!(chamfer(&c(&[(0.0, 0.0)]), &c(&[(3.0, 4.0)])), 50.0);
    assert_eq!(chamfer(&c(&[(0.0, 0.0), (2.0, 0.0)]), &c(&[(1.0, 0.0)])), 2.0);
}

#[test]
fn equal_densities_reduce_to_geometry() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..50 {
        let a = random_cloud(&mut rng, 40, false);
        let b = random_cloud(&mut rng, 40, false);
        let rho = rng.gen_range(0.05..1.0);
        let wa = WeightedCloud::new(a.points().to_vec(), vec![rho; a.len()]).unwrap();
        let wb = WeightedCloud::new(b.points().to_vec(), vec![rho; b.len()]).unwrap();
        assert_eq!(
            chamfer_with_mode(&wa, &wb, MatchMode::DensityWeighted),
            chamfer_with_mode(&a, &b, MatchMode::Geometry)
        );
    }
}

fn candidates(rng: &mut ChaCha8Rng, n: usize) -> Vec<Candidate> {
    (0..n)
        .map(|i| Candidate {
            id: format!("entry{i:02}"),
            cloud: random_cloud(rng, 25, false).normalized(),
            has_densities: false,
        })
        .collect()
}

fn transform(c: &WeightedCloud, s: f64, tx: f64, ty: f64) -> WeightedCloud {
    WeightedCloud::uniform(c.points().iter().map(|p| Point::new(p.x * s + tx, p.y * s + ty)).collect()).unwrap()
}

#[test]
fn self_match_survives_translation_and_scale() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let db = candidates(&mut rng, 10);
    for c in &db {
        let r = rank(&c.cloud, &db, MatchMode::Geometry).unwrap();
        assert_eq!(r.best().id, c.id);
        assert!(r.best().distance < 1e-12);
        let shifted = rank(&transform(&c.cloud, 1.0, 0.3, 0.3), &db, MatchMode::Geometry).unwrap();
        assert_eq!(shifted.best().id, c.id);
        assert!(shifted.best().distance < 1e-9);
        let scaled = rank(&transform(&c.cloud, 2.0, 0.0, 0.0), &db, MatchMode::Geometry).unwrap();
        assert_eq!(scaled.best().id, c.id);
        assert!(scaled.best().distance < 1e-9);
    }
}

proptest! {
    #[test]
    fn ranking_invariant_under_similarity(seed in 0u64..1000, s in 0.1f64..10.0, tx in -5.0f64..5.0, ty in -5.0f64..5.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let db = candidates(&mut rng, 6);
        let q = random_cloud(&mut rng, 20, false);
        let ids = |r: sdr_core::matching::MatchResult| r.ranking.into_iter().map(|e| e.id).collect::<Vec<_>>();
        let base = rank(&q, &db, MatchMode::Geometry).unwrap();
        let moved = rank(&transform(&q, s, tx, ty), &db, MatchMode::Geometry).unwrap();
        for (a, b) in base.ranking.iter().zip(&moved.ranking) {
            prop_assert!((a.distance - b.distance).abs() < 1e-9);
        }
        // Compare orders only where distances are separated by more than
        // floating-point noise.
        let separated = base.ranking.windows(2).all(|w| w[1].distance - w[0].distance > 1e-9);
        if separated {
            prop_assert_eq!(ids(base), ids(moved));
        }
    }
}
