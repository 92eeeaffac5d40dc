use crate::error::{Error, Result};
use crate::linalg::SquareMatrix;
use crate::metric::FiniteMetricSpace;
use crate::scalar::Scalar;

/// Points of `ℝ^r` under the Minkowski `p_norm` metric (`p_norm = ∞` gives the max norm).
pub fn lp_point_set<T: Scalar>(points: &[Vec<T>], p_norm: T) -> Result<FiniteMetricSpace<T>> {
    if !(p_norm >= T::one()) {
        return Err(Error::InvalidParameter(format!("p_norm must be at least 1, got {p_norm}")));
    }
    let dim = points.first().map(Vec::len).ok_or(Error::EmptySpace)?;
    if let Some(bad) = points.iter().position(|p| p.len() != dim) {
        return Err(Error::InvalidParameter(format!(
            "point {bad} has dimension {}, expected {dim}",
            points[bad].len()
        )));
    }
    let norm = |a: &[T], b: &[T]| -> T {
        let diffs = a.iter().zip(b).map(|(&x, &y)| (x - y).abs());
        if p_norm.is_infinite() {
            diffs.fold(T::zero(), T::max)
        } else if p_norm == T::one() {
            diffs.sum()
        } else {
            diffs.map(|d| d.powf(p_norm)).sum::<T>().powf(T::one() / p_norm)
        }
    };
    let n = points.len();
    let dist = SquareMatrix::from_fn(n, |i, j| if i == j { T::zero() } else { norm(&points[i], &points[j]) });
    FiniteMetricSpace::from_matrix((0..n).map(|i| format!("p{i}")).collect(), dist)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis() -> Vec<Vec<f64>> {
        vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]
    }

    #[test]
    fn one_and_two_norms() {
        let s = lp_point_set(&basis(), 1.0).unwrap();
        assert_eq!(s.d(1, 2), 2.0);
        assert_eq!(s.d(0, 1), 1.0);
        let s = lp_point_set(&basis(), 2.0).unwrap();
        assert!((s.d(1, 2) - 2f64.sqrt()).abs() < 1e-15);
        let s = lp_point_set(&basis(), f64::INFINITY).unwrap();
        assert_eq!(s.d(1, 2), 1.0);
    }

    #[test]
    fn errors() {
        assert!(lp_point_set(&[vec![0.0], vec![1.0, 2.0]], 2.0).is_err());
        assert!(lp_point_set(&basis(), 0.5).is_err());
        assert!(lp_point_set::<f64>(&[], 2.0).is_err());
        assert!(matches!(lp_point_set(&[vec![1.0], vec![1.0]], 2.0), Err(Error::NonPositive(0, 1))));
    }
}
