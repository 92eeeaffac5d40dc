//! Euclidean realization of the metric transform `√(d^p)`.
//!
//! `(X, √(d^p))` embeds isometrically in Euclidean space exactly when the Gower
//! matrix `G = -½ P Dₚ P` is positive semidefinite; the rows of `V Λ^{1/2}`
//! then realize it. When `G` has a negative eigenvalue its eigenvector is a
//! balanced `η` with `Σ d^p ηᵢηⱼ > 0`, which rules out any such embedding.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{jacobi_eigh, tridiagonal_eigh, SquareMatrix};
use crate::metric::FiniteMetricSpace;
use crate::scalar::{dist_pow, Scalar};

/// Coordinates realizing `√(d^p)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct EmbeddingResult<T: Scalar> {
    pub p: T,
    pub labels: Vec<String>,
    /// One row per point; columns follow descending Gram eigenvalues.
    pub coordinates: Vec<Vec<T>>,
    /// All `k` eigenvalues of `G`, descending.
    pub gram_eigenvalues: Vec<T>,
    pub affine_rank: usize,
    pub max_distance_error: T,
}

impl<T: Scalar> EmbeddingResult<T> {
    pub fn dimension(&self) -> usize {
        self.coordinates.first().map_or(0, Vec::len)
    }
}

/// Proof that `√(d^p)` has no isometric Euclidean embedding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct EmbeddingWitness<T: Scalar> {
    pub p: T,
    /// Most negative eigenvalue of `G`.
    pub min_eigenvalue: T,
    /// Balanced unit vector.
    pub eta: Vec<T>,
    /// `Σ d^p ηᵢ ηⱼ`, positive.
    pub form_value: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub enum Embedding<T: Scalar> {
    Embedded(EmbeddingResult<T>),
    NotEmbeddable(EmbeddingWitness<T>),
}

impl<T: Scalar> Embedding<T> {
    pub fn embedded(&self) -> Option<&EmbeddingResult<T>> {
        match self {
            Embedding::Embedded(r) => Some(r),
            Embedding::NotEmbeddable(_) => None,
        }
    }

    pub fn witness(&self) -> Option<&EmbeddingWitness<T>> {
        match self {
            Embedding::Embedded(_) => None,
            Embedding::NotEmbeddable(w) => Some(w),
        }
    }
}

fn rank_floor<T: Scalar>(trace: T, k: usize) -> T {
    T::eig_rel_tol() * (trace / T::from_count(k)).max(T::min_positive_value())
}

/// Classical scaling of the transform `√(d^p)`.
///
/// PSD is decided with tolerance `½ × eig_rel_tol × max|Dₚ|`; coordinates keep
/// only eigenvalues above `eig_rel_tol × trace(G)/k`, which also gives the
/// affine rank.
pub fn schoenberg_embed<T: Scalar>(space: &FiniteMetricSpace<T>, p: T) -> Result<Embedding<T>> {
    if !(p > T::zero()) || !p.is_finite() {
        return Err(Error::NonPositiveExponent(p.to_f64_lossy()));
    }
    let k = space.len();
    let dp = space.power_matrix(p);
    let neg_half = T::lit(-0.5);
    let gram = dp.double_center().map(|x| x * neg_half);
    let eig = tridiagonal_eigh(&gram)?;
    let psd_tol = T::lit(0.5) * T::eig_rel_tol() * dp.max_abs().max(T::min_positive_value());

    let min_eigenvalue = *eig.values.last().expect("non-empty space");
    if min_eigenvalue < -psd_tol {
        let mut eta = eig.vector(k - 1);
        let mean = eta.iter().copied().sum::<T>() / T::from_count(k);
        eta.iter_mut().for_each(|x| *x = *x - mean);
        let form_value = dp.quadratic_form(&eta);
        return Ok(Embedding::NotEmbeddable(EmbeddingWitness { p, min_eigenvalue, eta, form_value }));
    }

    let trace: T = (0..k).map(|i| gram.get(i, i)).sum();
    let floor = rank_floor(trace, k);
    let kept: Vec<usize> = (0..k).filter(|&j| eig.values[j] > floor).collect();
    let coordinates: Vec<Vec<T>> = (0..k)
        .map(|i| kept.iter().map(|&j| eig.vectors.get(i, j) * eig.values[j].sqrt()).collect())
        .collect();
    let max_distance_error = max_distance_error(&coordinates, space, p);
    Ok(Embedding::Embedded(EmbeddingResult {
        p,
        labels: space.labels().to_vec(),
        coordinates,
        gram_eigenvalues: eig.values,
        affine_rank: kept.len(),
        max_distance_error,
    }))
}

fn max_distance_error<T: Scalar>(coords: &[Vec<T>], space: &FiniteMetricSpace<T>, p: T) -> T {
    let half = p / T::lit(2.0);
    let mut worst = T::zero();
    for i in 0..coords.len() {
        for j in (i + 1)..coords.len() {
            let e: T = coords[i].iter().zip(&coords[j]).map(|(&a, &b)| (a - b) * (a - b)).sum::<T>().sqrt();
            worst = worst.max((e - dist_pow(space.d(i, j), half)).abs());
        }
    }
    worst
}

/// Recomputes every pairwise row distance against `d^{p/2}` and the affine rank
/// from the centered coordinates; true iff the error is at most `tol` and the
/// rank matches the reported one.
pub fn verify_embedding<T: Scalar>(result: &EmbeddingResult<T>, space: &FiniteMetricSpace<T>, p: T, tol: T) -> bool {
    let k = space.len();
    if result.coordinates.len() != k || result.coordinates.iter().any(|r| r.len() != result.dimension()) {
        return false;
    }
    if max_distance_error(&result.coordinates, space, p) > tol {
        return false;
    }
    if result.affine_rank + 1 > k.max(1) {
        return false;
    }
    let r = result.dimension();
    let kf = T::from_count(k);
    let mean: Vec<T> = (0..r).map(|c| result.coordinates.iter().map(|row| row[c]).sum::<T>() / kf).collect();
    let scatter = SquareMatrix::from_fn(r, |a, b| {
        result.coordinates.iter().map(|row| (row[a] - mean[a]) * (row[b] - mean[b])).sum()
    });
    let trace: T = (0..r).map(|i| scatter.get(i, i)).sum();
    let floor = rank_floor(trace, k);
    match jacobi_eigh(&scatter) {
        Ok(e) => e.values.iter().filter(|&&v| v > floor).count() == result.affine_rank,
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::validate_metric;
    use crate::negtype::{negative_type_test, quadratic_form};
    use crate::trees::{build_comb, CombSpec};
    use approx::assert_abs_diff_eq;

    fn line3() -> FiniteMetricSpace<f64> {
        validate_metric(&[vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 1.0], vec![2.0, 1.0, 0.0]]).unwrap()
    }

    #[test]
    fn line_at_p_one_embeds_as_right_triangle() {
        let e = schoenberg_embed(&line3(), 1.0).unwrap();
        let r = e.embedded().unwrap();
        assert_eq!(r.affine_rank, 2);
        let dist = |a: usize, b: usize| -> f64 {
            r.coordinates[a].iter().zip(&r.coordinates[b]).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
        };
        assert_abs_diff_eq!(dist(0, 1), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(dist(1, 2), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(dist(0, 2), 2f64.sqrt(), epsilon = 1e-12);
        // G by hand: -½ P D P for D = [[0,1,2],[1,0,1],[2,1,0]] has eigenvalues 1, 1/3, 0.
        assert_abs_diff_eq!(r.gram_eigenvalues[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.gram_eigenvalues[1], 1.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.gram_eigenvalues[2], 0.0, epsilon = 1e-12);
        assert!(verify_embedding(r, &line3(), 1.0, 1e-8));
    }

    #[test]
    fn line_at_p_two_is_one_dimensional() {
        let r = schoenberg_embed(&line3(), 2.0).unwrap();
        assert_eq!(r.embedded().unwrap().affine_rank, 1);
    }

    #[test]
    fn comb_three_has_full_affine_rank() {
        let c3 = build_comb(&CombSpec::<f64>::unit(3)).unwrap().to_metric().unwrap();
        let e = schoenberg_embed(&c3, 1.0).unwrap();
        let r = e.embedded().unwrap();
        assert_eq!(r.affine_rank, 7);
        assert!(r.max_distance_error < 1e-8);
        assert!(verify_embedding(r, &c3, 1.0, 1e-8));
    }

    #[test]
    fn perturbed_coordinates_fail_verification() {
        let mut r = schoenberg_embed(&line3(), 1.0).unwrap().embedded().unwrap().clone();
        r.coordinates[1][0] += 1e-3;
        assert!(!verify_embedding(&r, &line3(), 1.0, 1e-8));
    }

    #[test]
    fn wrong_rank_fails_verification() {
        let mut r = schoenberg_embed(&line3(), 1.0).unwrap().embedded().unwrap().clone();
        r.affine_rank = 1;
        assert!(!verify_embedding(&r, &line3(), 1.0, 1e-8));
    }

    #[test]
    fn failure_witness_above_two() {
        let e = schoenberg_embed(&line3(), 3.0).unwrap();
        let w = e.witness().unwrap();
        assert!(w.min_eigenvalue < 0.0);
        assert!(w.form_value > 0.0);
        assert!(quadratic_form(&line3(), 3.0, &w.eta).unwrap() > 0.0);
        assert!(!negative_type_test(&line3(), 3.0).unwrap().holds);
    }

    #[test]
    fn exponent_must_be_positive() {
        assert!(schoenberg_embed(&line3(), 0.0).is_err());
    }

    #[test]
    fn serializes_with_outcome_tag() {
        let e = schoenberg_embed(&line3(), 3.0).unwrap();
        let v = serde_json::to_value(&e).unwrap();
        assert_eq!(v["outcome"], "not_embeddable");
        let back: Embedding<f64> = serde_json::from_value(v).unwrap();
        assert_eq!(back, e);
    }
}
