//! Finite metric spaces, weighted trees and their path metrics.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::SquareMatrix;
use crate::scalar::{dist_pow, Scalar};

/// A finite metric space given by its full distance matrix.
///
/// Construction always goes through [`FiniteMetricSpace::new`] (or serde, which
/// calls it), so every value satisfies symmetry, a zero diagonal, positivity off
/// the diagonal and the triangle inequality up to [`Scalar::metric_slack`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMetric<T>", into = "RawMetric<T>")]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct FiniteMetricSpace<T: Scalar> {
    labels: Vec<String>,
    dist: SquareMatrix<T>,
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
struct RawMetric<T: Scalar> {
    labels: Vec<String>,
    dist: Vec<Vec<T>>,
}

impl<T: Scalar> TryFrom<RawMetric<T>> for FiniteMetricSpace<T> {
    type Error = Error;
    fn try_from(raw: RawMetric<T>) -> Result<Self> {
        FiniteMetricSpace::with_labels(raw.labels, &raw.dist)
    }
}

impl<T: Scalar> From<FiniteMetricSpace<T>> for RawMetric<T> {
    fn from(space: FiniteMetricSpace<T>) -> Self {
        RawMetric { dist: space.dist.to_rows(), labels: space.labels }
    }
}

/// Checks `rows` against every metric invariant and builds the space with
/// labels `"0"`, `"1"`, ...
pub fn validate_metric<T: Scalar>(rows: &[Vec<T>]) -> Result<FiniteMetricSpace<T>> {
    FiniteMetricSpace::new(rows)
}

impl<T: Scalar> FiniteMetricSpace<T> {
    pub fn new(rows: &[Vec<T>]) -> Result<Self> {
        let labels = (0..rows.len()).map(|i| i.to_string()).collect();
        Self::with_labels(labels, rows)
    }

    pub fn with_labels(labels: Vec<String>, rows: &[Vec<T>]) -> Result<Self> {
        let dist = SquareMatrix::from_rows(rows)?;
        Self::from_matrix(labels, dist)
    }

    pub(crate) fn from_matrix(labels: Vec<String>, dist: SquareMatrix<T>) -> Result<Self> {
        let k = dist.dim();
        if k == 0 {
            return Err(Error::EmptySpace);
        }
        if labels.len() != k {
            return Err(Error::LabelCount { labels: labels.len(), points: k });
        }
        check_invariants(&dist)?;
        Ok(Self { labels, dist })
    }

    /// Number of points.
    pub fn len(&self) -> usize {
        self.dist.dim()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> T {
        self.dist.get(i, j)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn matrix(&self) -> &SquareMatrix<T> {
        &self.dist
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.dist.to_rows()
    }

    /// Largest pairwise distance.
    pub fn diameter(&self) -> T {
        self.dist.max_abs()
    }

    /// Entrywise `d^p` with `0^p = 0`.
    pub fn power_matrix(&self, p: T) -> SquareMatrix<T> {
        self.dist.map(|d| dist_pow(d, p))
    }

    /// Multiplies every distance by `c > 0`.
    pub fn scaled(&self, c: T) -> Result<Self> {
        if !(c > T::zero()) || !c.is_finite() {
            return Err(Error::InvalidParameter(format!("scale factor must be positive, got {c}")));
        }
        Self::from_matrix(self.labels.clone(), self.dist.map(|d| d * c))
    }

    /// True iff `d(i,j) <= max(d(i,l), d(l,j))` for every triple.
    pub fn is_ultrametric(&self) -> bool {
        let k = self.len();
        let slack = T::metric_slack();
        for i in 0..k {
            for j in (i + 1)..k {
                let dij = self.d(i, j);
                for l in 0..k {
                    if dij > self.d(i, l).max(self.d(l, j)) + slack {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Principal submatrix on `indices`, in the given order.
    pub fn restrict(&self, indices: &[usize]) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::EmptySubset);
        }
        let mut seen = HashSet::with_capacity(indices.len());
        for &i in indices {
            if i >= self.len() {
                return Err(Error::IndexOutOfRange { index: i, len: self.len() });
            }
            if !seen.insert(i) {
                return Err(Error::DuplicateIndex(i));
            }
        }
        let labels = indices.iter().map(|&i| self.labels[i].clone()).collect();
        let dist = SquareMatrix::from_fn(indices.len(), |a, b| self.d(indices[a], indices[b]));
        Ok(Self { labels, dist })
    }

    /// Applies `d ↦ d^p` (or `d ↦ d^{p/2}` when `spec.half`).
    ///
    /// With `require_metric` the result is re-validated and a triangle failure is
    /// reported; otherwise the transformed dissimilarity is returned as is (it is
    /// still symmetric with a zero diagonal and positive off-diagonal entries).
    pub fn power_transform(&self, spec: TransformSpec<T>, require_metric: bool) -> Result<Self> {
        let e = spec.effective_exponent()?;
        let dist = self.power_matrix(e);
        if require_metric {
            Self::from_matrix(self.labels.clone(), dist)
        } else {
            Ok(Self { labels: self.labels.clone(), dist })
        }
    }
}

/// Free-function form of [`FiniteMetricSpace::is_ultrametric`].
pub fn is_ultrametric<T: Scalar>(space: &FiniteMetricSpace<T>) -> bool {
    space.is_ultrametric()
}

/// Free-function form of [`FiniteMetricSpace::restrict`].
pub fn restrict<T: Scalar>(space: &FiniteMetricSpace<T>, indices: &[usize]) -> Result<FiniteMetricSpace<T>> {
    space.restrict(indices)
}

/// Free-function form of [`FiniteMetricSpace::power_transform`].
pub fn power_transform<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    spec: TransformSpec<T>,
    require_metric: bool,
) -> Result<FiniteMetricSpace<T>> {
    space.power_transform(spec, require_metric)
}

fn check_invariants<T: Scalar>(dist: &SquareMatrix<T>) -> Result<()> {
    let k = dist.dim();
    let slack = T::metric_slack();
    for i in 0..k {
        for j in 0..k {
            if !dist.get(i, j).is_finite() {
                return Err(Error::NonFinite(i, j));
            }
        }
    }
    for i in 0..k {
        if dist.get(i, i) != T::zero() {
            return Err(Error::NonZeroDiagonal(i));
        }
        for j in (i + 1)..k {
            let (a, b) = (dist.get(i, j), dist.get(j, i));
            if (a - b).abs() > slack * T::one().max(a.abs()) {
                return Err(Error::Asymmetric(i, j));
            }
            if !(a > T::zero()) {
                return Err(Error::NonPositive(i, j));
            }
        }
    }
    for i in 0..k {
        for j in 0..k {
            let dij = dist.get(i, j);
            for l in 0..k {
                if dij > dist.get(i, l) + dist.get(l, j) + slack {
                    return Err(Error::Triangle { i, j, l });
                }
            }
        }
    }
    Ok(())
}

/// Exponent applied by [`FiniteMetricSpace::power_transform`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct TransformSpec<T: Scalar> {
    pub p: T,
    /// Take the square root after exponentiation, giving `√(d^p)`.
    #[serde(default)]
    pub half: bool,
}

impl<T: Scalar> TransformSpec<T> {
    pub fn power(p: T) -> Self {
        Self { p, half: false }
    }

    pub fn sqrt_power(p: T) -> Self {
        Self { p, half: true }
    }

    fn effective_exponent(&self) -> Result<T> {
        if !(self.p >= T::zero()) || !self.p.is_finite() {
            return Err(Error::NegativeExponent(self.p.to_f64_lossy()));
        }
        Ok(if self.half { self.p / T::lit(2.0) } else { self.p })
    }
}

/// An edge of a [`WeightedTree`], by vertex index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge<T> {
    pub u: usize,
    pub v: usize,
    pub w: T,
}

/// A finite tree with positive edge lengths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTree<T>", into = "RawTree<T>")]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct WeightedTree<T: Scalar> {
    vertices: Vec<String>,
    edges: Vec<Edge<T>>,
    adjacency: Vec<Vec<(usize, usize)>>,
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
struct RawTree<T: Scalar> {
    vertices: Vec<String>,
    edges: Vec<RawEdge<T>>,
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
struct RawEdge<T: Scalar> {
    u: String,
    v: String,
    w: T,
}

impl<T: Scalar> TryFrom<RawTree<T>> for WeightedTree<T> {
    type Error = Error;
    fn try_from(raw: RawTree<T>) -> Result<Self> {
        let edges = raw.edges.into_iter().map(|e| (e.u, e.v, e.w)).collect::<Vec<_>>();
        WeightedTree::from_labeled(raw.vertices, &edges)
    }
}

impl<T: Scalar> From<WeightedTree<T>> for RawTree<T> {
    fn from(tree: WeightedTree<T>) -> Self {
        let edges = tree
            .edges
            .iter()
            .map(|e| RawEdge { u: tree.vertices[e.u].clone(), v: tree.vertices[e.v].clone(), w: e.w })
            .collect();
        RawTree { vertices: tree.vertices, edges }
    }
}

impl<T: Scalar> WeightedTree<T> {
    /// Builds a tree from vertex identifiers and index-based edges.
    pub fn new(vertices: Vec<String>, edges: Vec<Edge<T>>) -> Result<Self> {
        let n = vertices.len();
        if n == 0 {
            return Err(Error::EmptyTree);
        }
        let mut ids = HashSet::with_capacity(n);
        for v in &vertices {
            if !ids.insert(v.as_str()) {
                return Err(Error::DuplicateVertex(v.clone()));
            }
        }
        if edges.len() != n - 1 {
            return Err(Error::EdgeCount { vertices: n, edges: edges.len() });
        }
        let mut adjacency = vec![Vec::new(); n];
        for (idx, e) in edges.iter().enumerate() {
            for end in [e.u, e.v] {
                if end >= n {
                    return Err(Error::IndexOutOfRange { index: end, len: n });
                }
            }
            if e.u == e.v {
                return Err(Error::SelfLoop(idx));
            }
            if !(e.w > T::zero()) || !e.w.is_finite() {
                return Err(Error::BadWeight(idx));
            }
            adjacency[e.u].push((e.v, idx));
            adjacency[e.v].push((e.u, idx));
        }
        let tree = Self { vertices, edges, adjacency };
        // n - 1 edges plus connectivity rules out cycles.
        if tree.bfs_order(0).len() != n {
            return Err(Error::Disconnected);
        }
        Ok(tree)
    }

    /// Builds a tree from string identifiers, the JSON representation.
    pub fn from_labeled(vertices: Vec<String>, edges: &[(String, String, T)]) -> Result<Self> {
        let index: HashMap<&str, usize> = vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let lookup = |id: &String| index.get(id.as_str()).copied().ok_or_else(|| Error::UnknownVertex(id.clone()));
        let edges = edges
            .iter()
            .map(|(u, v, w)| Ok(Edge { u: lookup(u)?, v: lookup(v)?, w: *w }))
            .collect::<Result<Vec<_>>>()?;
        Self::new(vertices, edges)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge<T>] {
        &self.edges
    }

    pub fn weights(&self) -> Vec<T> {
        self.edges.iter().map(|e| e.w).collect()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == id)
    }

    /// Same topology with new edge lengths, aligned with [`Self::edges`].
    pub fn with_weights(&self, weights: &[T]) -> Result<Self> {
        if weights.len() != self.edges.len() {
            return Err(Error::WeightCount { expected: self.edges.len(), got: weights.len() });
        }
        let edges = self.edges.iter().zip(weights).map(|(e, &w)| Edge { w, ..*e }).collect();
        Self::new(self.vertices.clone(), edges)
    }

    /// Neighbours of `v` as `(vertex, edge index)` pairs.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    fn bfs_order(&self, root: usize) -> Vec<usize> {
        let mut seen = vec![false; self.vertices.len()];
        let mut order = vec![root];
        seen[root] = true;
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for &(w, _) in &self.adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    order.push(w);
                }
            }
        }
        order
    }

    /// Path distances from `source` under arbitrary per-edge lengths.
    pub fn distances_from(&self, source: usize, weights: &[T]) -> Vec<T> {
        let n = self.len();
        let mut dist = vec![T::zero(); n];
        let mut seen = vec![false; n];
        let mut stack = vec![source];
        seen[source] = true;
        while let Some(v) = stack.pop() {
            for &(w, e) in &self.adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    dist[w] = dist[v] + weights[e];
                    stack.push(w);
                }
            }
        }
        dist
    }

    /// All-pairs path metric under `weights`, one traversal per source.
    pub fn path_matrix(&self, weights: &[T]) -> Result<SquareMatrix<T>> {
        if weights.len() != self.edges.len() {
            return Err(Error::WeightCount { expected: self.edges.len(), got: weights.len() });
        }
        let n = self.len();
        let mut m = SquareMatrix::zeros(n);
        for s in 0..n {
            for (t, d) in self.distances_from(s, weights).into_iter().enumerate() {
                m.set(s, t, d);
            }
        }
        Ok(m)
    }

    /// Shortest-path metric induced by the edge lengths.
    pub fn to_metric(&self) -> Result<FiniteMetricSpace<T>> {
        let m = self.path_matrix(&self.weights())?;
        FiniteMetricSpace::from_matrix(self.vertices.clone(), m)
    }
}

/// Free-function form of [`WeightedTree::to_metric`].
pub fn tree_to_metric<T: Scalar>(tree: &WeightedTree<T>) -> Result<FiniteMetricSpace<T>> {
    tree.to_metric()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn line3() -> FiniteMetricSpace<f64> {
        validate_metric(&[vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 1.0], vec![2.0, 1.0, 0.0]]).unwrap()
    }

    fn unit_path(ids: &[&str]) -> WeightedTree<f64> {
        let vertices = ids.iter().map(|s| s.to_string()).collect();
        let edges = (0..ids.len() - 1).map(|i| Edge { u: i, v: i + 1, w: 1.0 }).collect();
        WeightedTree::new(vertices, edges).unwrap()
    }

    #[test]
    fn validate_examples() {
        assert_eq!(validate_metric(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap().len(), 2);
        let err = validate_metric(&[vec![0.0, 1.0, 3.0], vec![1.0, 0.0, 1.0], vec![3.0, 1.0, 0.0]]).unwrap_err();
        assert_eq!(err, Error::Triangle { i: 0, j: 2, l: 1 });
        let err = validate_metric(&[vec![0.0, 1.0], vec![2.0, 0.0]]).unwrap_err();
        assert_eq!(err, Error::Asymmetric(0, 1));
    }

    #[test]
    fn validate_rejects_other_violations() {
        assert!(matches!(validate_metric::<f64>(&[vec![0.0, 1.0], vec![1.0]]), Err(Error::NotSquare { .. })));
        assert_eq!(validate_metric::<f64>(&[]).unwrap_err(), Error::EmptySpace);
        assert_eq!(validate_metric(&[vec![1.0]]).unwrap_err(), Error::NonZeroDiagonal(0));
        assert_eq!(validate_metric(&[vec![0.0, 0.0], vec![0.0, 0.0]]).unwrap_err(), Error::NonPositive(0, 1));
        assert_eq!(validate_metric(&[vec![0.0, f64::NAN], vec![f64::NAN, 0.0]]).unwrap_err(), Error::NonFinite(0, 1));
    }

    #[test]
    fn triangle_slack_absorbs_rounding() {
        let eps = 1e-13;
        assert!(validate_metric(&[vec![0.0, 1.0, 2.0 + eps], vec![1.0, 0.0, 1.0], vec![2.0 + eps, 1.0, 0.0]]).is_ok());
    }

    #[test]
    fn tree_metric_examples() {
        let path = unit_path(&["y1", "x1", "x2", "y2"]);
        let m = path.to_metric().unwrap();
        assert_eq!(m.d(0, 3), 3.0);

        let star = WeightedTree::from_labeled(
            vec!["c".into(), "u".into(), "v".into()],
            &[("c".into(), "u".into(), 2.0), ("c".into(), "v".into(), 3.0)],
        )
        .unwrap();
        assert_eq!(star.to_metric().unwrap().d(1, 2), 5.0);
    }

    #[test]
    fn tree_validation_errors() {
        let ids = || vec!["a".to_string(), "b".to_string(), "c".to_string()];
        let e = |u, v, w| Edge { u, v, w };
        assert_eq!(WeightedTree::<f64>::new(vec![], vec![]).unwrap_err(), Error::EmptyTree);
        assert_eq!(
            WeightedTree::new(ids(), vec![e(0, 1, 1.0)]).unwrap_err(),
            Error::EdgeCount { vertices: 3, edges: 1 }
        );
        assert_eq!(WeightedTree::new(ids(), vec![e(0, 1, 1.0), e(1, 1, 1.0)]).unwrap_err(), Error::SelfLoop(1));
        assert_eq!(WeightedTree::new(ids(), vec![e(0, 1, 1.0), e(1, 2, 0.0)]).unwrap_err(), Error::BadWeight(1));
        assert_eq!(
            WeightedTree::new(
                vec!["a".into(), "b".into(), "c".into(), "d".into()],
                vec![e(0, 1, 1.0), e(1, 0, 1.0), e(2, 3, 1.0)]
            )
            .unwrap_err(),
            Error::Disconnected
        );
        assert_eq!(
            WeightedTree::new(vec!["a".into(), "a".into()], vec![e(0, 1, 1.0)]).unwrap_err(),
            Error::DuplicateVertex("a".into())
        );
        assert!(matches!(
            WeightedTree::<f64>::from_labeled(vec!["a".into(), "b".into()], &[("a".into(), "z".into(), 1.0)]),
            Err(Error::UnknownVertex(_))
        ));
    }

    #[test]
    fn power_transform_examples() {
        let two = validate_metric(&[vec![0.0, 4.0], vec![4.0, 0.0]]).unwrap();
        let t = two.power_transform(TransformSpec::sqrt_power(1.0), true).unwrap();
        assert_eq!(t.d(0, 1), 2.0);

        let line = line3();
        let same = line.power_transform(TransformSpec::sqrt_power(2.0), true).unwrap();
        assert_eq!(same, line);

        let err = line.power_transform(TransformSpec::power(3.0), true).unwrap_err();
        assert!(matches!(err, Error::Triangle { .. }));
        let raw = line.power_transform(TransformSpec::power(3.0), false).unwrap();
        assert_eq!(raw.d(0, 2), 8.0);
        assert!(line.power_transform(TransformSpec::power(-1.0), false).is_err());
    }

    #[test]
    fn ultrametric_examples() {
        assert!(validate_metric(&[vec![0.0, 7.0], vec![7.0, 0.0]]).unwrap().is_ultrametric());
        let eq = validate_metric(&[vec![0.0, 1.0, 1.0], vec![1.0, 0.0, 1.0], vec![1.0, 1.0, 0.0]]).unwrap();
        assert!(eq.is_ultrametric());
        assert!(!line3().is_ultrametric());
    }

    #[test]
    fn restrict_examples() {
        let line = line3();
        assert_eq!(line.restrict(&[0, 1, 2]).unwrap(), line);
        assert_eq!(line.restrict(&[1]).unwrap().len(), 1);
        assert_eq!(line.restrict(&[]).unwrap_err(), Error::EmptySubset);
        assert_eq!(line.restrict(&[0, 0]).unwrap_err(), Error::DuplicateIndex(0));
        assert_eq!(line.restrict(&[5]).unwrap_err(), Error::IndexOutOfRange { index: 5, len: 3 });

        let c1 = unit_path(&["y1", "x1", "x2", "y2"]).to_metric().unwrap();
        let sub = c1.restrict(&[0, 1, 2]).unwrap();
        assert_eq!(sub.rows(), line.rows());
    }

    #[test]
    fn serde_round_trip_validates() {
        let json = r#"{"labels":["a","b"],"dist":[[0,1],[2,0]]}"#;
        assert!(serde_json::from_str::<FiniteMetricSpace<f64>>(json).is_err());
        let json = r#"{"vertices":["a","b","c"],"edges":[{"u":"a","v":"b","w":1.5},{"u":"b","v":"c","w":2}]}"#;
        let tree: WeightedTree<f64> = serde_json::from_str(json).unwrap();
        assert_abs_diff_eq!(tree.to_metric().unwrap().d(0, 2), 3.5);
        let back: WeightedTree<f64> = serde_json::from_str(&serde_json::to_string(&tree).unwrap()).unwrap();
        assert_eq!(back, tree);
    }

    /// Random tree on `n` vertices: each vertex attaches to an earlier one.
    fn tree_strategy() -> impl Strategy<Value = WeightedTree<f64>> {
        (2usize..12).prop_flat_map(|n| {
            (prop::collection::vec(any::<prop::sample::Index>(), n - 1), prop::collection::vec(0.1f64..10.0, n - 1))
                .prop_map(move |(parents, weights)| {
                    let vertices = (0..n).map(|i| format!("v{i}")).collect();
                    let edges = (1..n).map(|i| Edge { u: parents[i - 1].index(i), v: i, w: weights[i - 1] }).collect();
                    WeightedTree::new(vertices, edges).unwrap()
                })
        })
    }

    proptest! {
        #[test]
        fn tree_metric_is_valid_and_four_point(tree in tree_strategy()) {
            let m = tree.to_metric().unwrap();
            prop_assert!(validate_metric(&m.rows()).is_ok());
            let k = m.len();
            for a in 0..k { for b in 0..k { for c in 0..k { for e in 0..k {
                let mut sums = [m.d(a, b) + m.d(c, e), m.d(a, c) + m.d(b, e), m.d(a, e) + m.d(b, c)];
                sums.sort_by(|x, y| x.partial_cmp(y).unwrap());
                prop_assert!((sums[2] - sums[1]).abs() <= 1e-9 * sums[2].max(1.0));
            }}}}
        }

        #[test]
        fn restrict_commutes_with_power(tree in tree_strategy(), p in 0.1f64..3.0, mask in any::<u16>()) {
            let m = tree.to_metric().unwrap();
            let mut idx: Vec<usize> = (0..m.len()).filter(|i| mask & (1 << i) != 0).collect();
            if idx.is_empty() { idx.push(0); }
            let spec = TransformSpec::power(p);
            let a = m.restrict(&idx).unwrap().power_transform(spec, false).unwrap();
            let b = m.power_transform(spec, false).unwrap().restrict(&idx).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn ultrametric_survives_powers(heights in prop::collection::vec(0.5f64..5.0, 1..6), p in 0.05f64..6.0) {
            // Caterpillar ultrametric: point i joins the cluster of earlier points at height h_i.
            let n = heights.len() + 1;
            let mut hs = heights.clone();
            hs.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|i| (0..n).map(|j| if i == j { 0.0 } else { hs[i.max(j) - 1] }).collect())
                .collect();
            let u = validate_metric(&rows).unwrap();
            prop_assert!(u.is_ultrametric());
            prop_assert!(u.power_transform(TransformSpec::power(p), false).unwrap().is_ultrametric());
        }
    }
}
