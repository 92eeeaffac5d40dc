//! Seeded generators shared by the integration suites.
#![allow(dead_code, clippy::needless_range_loop)]

use genround::{Edge, MetricSpace, Sst, Tree};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random tree: vertex `i` attaches to a uniformly chosen earlier vertex.
pub fn random_tree(rng: &mut ChaCha8Rng, n: usize, wmin: f64, wmax: f64) -> Tree {
    let vertices = (0..n).map(|i| format!("v{i}")).collect();
    let edges = (1..n).map(|i| Edge { u: rng.gen_range(0..i), v: i, w: rng.gen_range(wmin..=wmax) }).collect();
    Tree::new(vertices, edges).unwrap()
}

/// Ultrametric from random agglomerative merges at increasing heights.
pub fn random_ultrametric(rng: &mut ChaCha8Rng, n: usize) -> MetricSpace {
    let mut clusters: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let mut d = vec![vec![0.0; n]; n];
    let mut height = 0.0;
    while clusters.len() > 1 {
        height += rng.gen_range(0.1..2.0);
        clusters.shuffle(rng);
        let a = clusters.pop().unwrap();
        let b = clusters.pop().unwrap();
        for &i in &a {
            for &j in &b {
                d[i][j] = height;
                d[j][i] = height;
            }
        }
        clusters.push([a, b].concat());
    }
    MetricSpace::new(&d).unwrap()
}

/// Points in the plane under the Euclidean or the 1-norm.
pub fn random_plane(rng: &mut ChaCha8Rng, n: usize) -> MetricSpace {
    let pts: Vec<Vec<f64>> = (0..n).map(|_| vec![rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)]).collect();
    let p = if rng.gen_bool(0.5) { 2.0 } else { 1.0 };
    genround::lp_point_set(&pts, p).unwrap()
}

/// Symmetric matrix with off-diagonal entries in [1, 2]; always a metric.
pub fn random_near_equilateral(rng: &mut ChaCha8Rng, n: usize) -> MetricSpace {
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let x = rng.gen_range(1.0..=2.0);
            d[i][j] = x;
            d[j][i] = x;
        }
    }
    MetricSpace::new(&d).unwrap()
}

/// A mix of planar point sets, tree metrics and `[1,2]`-matrices on 2..=max_n points.
pub fn random_space(rng: &mut ChaCha8Rng, max_n: usize) -> MetricSpace {
    let n = rng.gen_range(2..=max_n);
    match rng.gen_range(0..3) {
        0 => random_plane(rng, n),
        1 => random_tree(rng, n, 0.1, 10.0).to_metric().unwrap(),
        _ => random_near_equilateral(rng, n),
    }
}

/// Random SST on at most `max_vertices` vertices satisfying 2 l0 < M_n with a non-trivial degree sequence.
pub fn random_sst(rng: &mut ChaCha8Rng, max_vertices: usize) -> Sst {
    loop {
        let depth = rng.gen_range(2..=5);
        let degrees: Vec<usize> = (0..depth).map(|_| rng.gen_range(1..=3)).collect();
        let lengths: Vec<f64> = (0..depth).map(|_| rng.gen_range(0.2..3.0)).collect();
        let spec = Sst::new(degrees, lengths).unwrap();
        let total: f64 = spec.lengths.iter().sum();
        let ok = spec.vertex_count().is_some_and(|c| c <= max_vertices)
            && spec.degrees.iter().any(|&d| d > 1)
            && 2.0 * spec.lengths[0] < total;
        if ok {
            return spec;
        }
    }
}
