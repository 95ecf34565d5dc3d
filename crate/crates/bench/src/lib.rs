//! Shared inputs for the criterion benchmarks.

use mmds_core::mds::DissimilarityMatrix;
use mmds_core::nalgebra::DMatrix;

/// Distances between `n` points on a planar spiral; deterministic and
/// Euclidean with a spread-out spectrum.
pub fn spiral_distances(n: usize) -> DissimilarityMatrix {
    let pts: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let t = 0.3 * i as f64;
            (t.cos() * (1.0 + 0.1 * t), t.sin() * (1.0 + 0.1 * t))
        })
        .collect();
    let d = DMatrix::from_fn(n, n, |i, j| {
        let (dx, dy) = (pts[i].0 - pts[j].0, pts[i].1 - pts[j].1);
        (dx * dx + dy * dy).sqrt()
    });
    DissimilarityMatrix::new(d).expect("spiral distances are valid")
}
