use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{Edge, WeightedTree};
use crate::scalar::Scalar;

/// Default cap on the number of vertices [`build_sst`] will materialize.
pub const DEFAULT_VERTEX_CAP: usize = 100_000;

/// A finite spherically symmetric tree: every level-`k` vertex has `degrees[k]`
/// children, joined to it by edges of length `lengths[k]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct SstSpec<T: Scalar> {
    pub degrees: Vec<usize>,
    pub lengths: Vec<T>,
}

impl<T: Scalar> SstSpec<T> {
    pub fn new(degrees: Vec<usize>, lengths: Vec<T>) -> Result<Self> {
        let spec = Self { degrees, lengths };
        spec.validate()?;
        Ok(spec)
    }

    /// Constant degree and unit length over `depth` levels.
    pub fn uniform(degree: usize, depth: usize) -> Self {
        Self { degrees: vec![degree; depth], lengths: vec![T::one(); depth] }
    }

    pub fn validate(&self) -> Result<()> {
        if self.degrees.len() != self.lengths.len() {
            return Err(Error::InvalidParameter(format!(
                "{} degrees but {} lengths",
                self.degrees.len(),
                self.lengths.len()
            )));
        }
        if self.degrees.is_empty() {
            return Err(Error::InvalidParameter("SST depth must be at least 1".into()));
        }
        if let Some(k) = self.degrees.iter().position(|&d| d == 0) {
            return Err(Error::InvalidParameter(format!("degree d{k} must be at least 1")));
        }
        if let Some(k) = self.lengths.iter().position(|&l| !(l > T::zero()) || !l.is_finite()) {
            return Err(Error::InvalidParameter(format!("length l{k} must be positive")));
        }
        Ok(())
    }

    pub fn depth(&self) -> usize {
        self.degrees.len()
    }

    /// Vertices per level, `1, d0, d0 d1, ...`; `None` on overflow.
    pub fn level_sizes(&self) -> Option<Vec<usize>> {
        let mut sizes = vec![1usize];
        for &d in &self.degrees {
            sizes.push(sizes.last()?.checked_mul(d)?);
        }
        Some(sizes)
    }

    /// Total vertex count; `None` on overflow.
    pub fn vertex_count(&self) -> Option<usize> {
        self.level_sizes()?.into_iter().try_fold(0usize, |acc, s| acc.checked_add(s))
    }

    /// `M_0 = 0, M_1 = l0, ..., M_n = l0 + ... + l(n-1)`.
    pub fn partial_sums(&self) -> Vec<T> {
        let mut sums = vec![T::zero()];
        for &l in &self.lengths {
            let last = *sums.last().unwrap();
            sums.push(last + l);
        }
        sums
    }

    fn level_offsets(&self) -> Result<Vec<usize>> {
        let sizes = self.level_sizes().ok_or(Error::VertexCap { cap: usize::MAX, needed: usize::MAX })?;
        let mut offsets = Vec::with_capacity(sizes.len());
        let mut acc = 0usize;
        for s in sizes {
            offsets.push(acc);
            acc += s;
        }
        Ok(offsets)
    }
}

/// Builds the SST rooted at vertex 0 (`l0_0`), level by level.
///
/// Vertex `lK_t` is the `t`-th vertex of level `K`; its children are
/// `l(K+1)_{t·d_K} .. l(K+1)_{t·d_K + d_K - 1}`.
pub fn build_sst<T: Scalar>(spec: &SstSpec<T>, vertex_cap: usize) -> Result<WeightedTree<T>> {
    spec.validate()?;
    let needed = spec.vertex_count().unwrap_or(usize::MAX);
    if needed > vertex_cap {
        return Err(Error::VertexCap { cap: vertex_cap, needed });
    }
    let sizes = spec.level_sizes().expect("checked by vertex_count");
    let offsets = spec.level_offsets()?;
    let mut vertices = Vec::with_capacity(needed);
    for (level, &size) in sizes.iter().enumerate() {
        vertices.extend((0..size).map(|t| format!("l{level}_{t}")));
    }
    let mut edges = Vec::with_capacity(needed - 1);
    for (level, (&d, &l)) in spec.degrees.iter().zip(&spec.lengths).enumerate() {
        for t in 0..sizes[level] {
            for c in 0..d {
                edges.push(Edge { u: offsets[level] + t, v: offsets[level + 1] + t * d + c, w: l });
            }
        }
    }
    WeightedTree::new(vertices, edges)
}

/// Root plus one leaf below each child of each level-`k` vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarConfiguration {
    pub k: usize,
    pub root: usize,
    /// Indices into [`build_sst`]'s vertex order.
    pub leaves: Vec<usize>,
}

/// The `q = d0⋯dk` leaves used by the star simplex: for every child of every
/// level-`k` vertex, the leaf reached by always taking the first child.
pub fn sst_star_configuration<T: Scalar>(spec: &SstSpec<T>, k: usize) -> Result<StarConfiguration> {
    spec.validate()?;
    let n = spec.depth();
    if k >= n {
        return Err(Error::InvalidParameter(format!("star level {k} must be below the depth {n}")));
    }
    let sizes = spec.level_sizes().ok_or(Error::VertexCap { cap: usize::MAX, needed: usize::MAX })?;
    let offsets = spec.level_offsets()?;
    let descend: usize = spec.degrees[k + 1..].iter().product();
    let leaves = (0..sizes[k + 1]).map(|pos| offsets[n] + pos * descend).collect();
    Ok(StarConfiguration { k, root: 0, leaves })
}

/// One admissible term of the star bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct SstBoundTerm<T: Scalar> {
    pub k: usize,
    /// `d0 d1 ⋯ dk`, saturating.
    pub q: u64,
    pub bound: T,
}

/// Upper bounds on the roundness of an SST from its star configurations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct SstBoundReport<T: Scalar> {
    /// `M_1 .. M_n`.
    pub partial_sums: Vec<T>,
    /// Largest `k` with `M_k < M_n / 2`.
    pub m_index: usize,
    pub per_k: Vec<SstBoundTerm<T>>,
    /// Smallest admissible bound, or 2 when no `k` is admissible.
    pub best: T,
    pub best_k: Option<usize>,
}

/// `ln(2 + 2/(q-1)) / ln(2 - 2 M_k/M_n)`.
pub fn star_bound<T: Scalar>(q: T, mk: T, mn: T) -> T {
    let two = T::lit(2.0);
    (two + two / (q - T::one())).ln() / (two - two * mk / mn).ln()
}

/// Evaluates the star bound for every `0 <= k <= m_index` with `d0⋯dk > 1`,
/// taking the empty partial sum `M_0 = 0`.
pub fn sst_upper_bound<T: Scalar>(spec: &SstSpec<T>) -> Result<SstBoundReport<T>> {
    spec.validate()?;
    if spec.degrees.iter().all(|&d| d == 1) {
        return Err(Error::TrivialDegrees);
    }
    let sums = spec.partial_sums();
    let n = spec.depth();
    let mn = sums[n];
    if !(T::lit(2.0) * spec.lengths[0] < mn) {
        return Err(Error::LengthHypothesis);
    }
    let half = mn / T::lit(2.0);
    let m_index = (1..=n).filter(|&k| sums[k] < half).max().unwrap_or(0);

    let mut per_k = Vec::new();
    let mut q_int: u64 = 1;
    let mut q = T::one();
    for k in 0..=m_index {
        q_int = q_int.saturating_mul(spec.degrees[k] as u64);
        q = q * T::from_count(spec.degrees[k]);
        if q > T::one() {
            per_k.push(SstBoundTerm { k, q: q_int, bound: star_bound(q, sums[k], mn) });
        }
    }
    let best_term = per_k.iter().min_by(|a, b| a.bound.partial_cmp(&b.bound).unwrap_or(std::cmp::Ordering::Equal));
    let (best, best_k) = match best_term {
        Some(t) => (t.bound, Some(t.k)),
        None => (T::lit(2.0), None),
    };
    Ok(SstBoundReport { partial_sums: sums[1..].to_vec(), m_index, per_k, best, best_k })
}
