//! Scale isomorphisms between path metrics on a common tree, the local
//! representation of a unit comb inside a weighted comb, and the transport of
//! simplex violations along a scale isomorphism.
//!
//! For two path metrics `d` and `ρ` on the same tree, the ratio `ρ(a,b)/d(a,b)`
//! over all vertex pairs is a weighted average of edge ratios, so its extremes
//! are attained on single edges. Certifying that the identity is a
//! `(1+ε)`-scale isomorphism therefore only needs the edge ratios.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{FiniteMetricSpace, WeightedTree};
use crate::negtype::{simplex_gap, simplex_sides, Simplex};
use crate::scalar::Scalar;
use crate::trees::{build_comb, check_window_params, comb_segment, sub_exponential_window, CombSpec, WeightFunction};

/// Trees up to this size get an exhaustive pairwise check of every certificate.
pub const PAIRWISE_CHECK_LIMIT: usize = 12;

/// An edge at which a ratio extreme is attained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct EdgeWitness<T: Scalar> {
    pub edge: usize,
    pub u: String,
    pub v: String,
    pub ratio: T,
}

/// Extremes of `ρ/d` over the edges of a tree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct RatioExtrema<T: Scalar> {
    /// Smallest edge ratio `m*`.
    pub min: EdgeWitness<T>,
    /// Largest edge ratio `m`.
    pub max: EdgeWitness<T>,
}

fn check_weights<T: Scalar>(tree: &WeightedTree<T>, weights: &[T]) -> Result<()> {
    if weights.len() != tree.edges().len() {
        return Err(Error::WeightCount { expected: tree.edges().len(), got: weights.len() });
    }
    match weights.iter().position(|&w| !(w > T::zero()) || !w.is_finite()) {
        Some(e) => Err(Error::BadWeight(e)),
        None => Ok(()),
    }
}

/// Edge sweep for the extremes of `rho_weights[e] / d_weights[e]`.
///
/// Both weight lists are aligned with `tree.edges()`; the tree's own weights are
/// ignored.
pub fn edge_ratio_extrema<T: Scalar>(
    tree: &WeightedTree<T>,
    d_weights: &[T],
    rho_weights: &[T],
) -> Result<RatioExtrema<T>> {
    check_weights(tree, d_weights)?;
    check_weights(tree, rho_weights)?;
    if d_weights.is_empty() {
        return Err(Error::InvalidParameter("tree has no edges".into()));
    }
    let witness = |e: usize| {
        let edge = tree.edges()[e];
        EdgeWitness {
            edge: e,
            u: tree.vertices()[edge.u].clone(),
            v: tree.vertices()[edge.v].clone(),
            ratio: rho_weights[e] / d_weights[e],
        }
    };
    let (mut lo, mut hi) = (0, 0);
    for e in 1..d_weights.len() {
        let r = rho_weights[e] / d_weights[e];
        if r < rho_weights[lo] / d_weights[lo] {
            lo = e;
        }
        if r > rho_weights[hi] / d_weights[hi] {
            hi = e;
        }
    }
    Ok(RatioExtrema { min: witness(lo), max: witness(hi) })
}

/// Extremes of `ρ(a,b)/d(a,b)` over all distinct vertex pairs, from the two
/// all-pairs path metrics.
pub fn pairwise_ratio_extrema<T: Scalar>(tree: &WeightedTree<T>, d_weights: &[T], rho_weights: &[T]) -> Result<(T, T)> {
    check_weights(tree, d_weights)?;
    check_weights(tree, rho_weights)?;
    let d = tree.path_matrix(d_weights)?;
    let rho = tree.path_matrix(rho_weights)?;
    let (mut lo, mut hi) = (T::infinity(), T::neg_infinity());
    for a in 0..tree.len() {
        for b in (a + 1)..tree.len() {
            let r = rho.get(a, b) / d.get(a, b);
            lo = lo.min(r);
            hi = hi.max(r);
        }
    }
    Ok((lo, hi))
}

/// Evidence that the identity `(T, d) → (T, ρ)` is (or is not) a
/// `(1+ε)`-scale isomorphism.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct ScaleIsoCertificate<T: Scalar> {
    /// Scale constant `n`.
    pub scale: T,
    pub eps: T,
    pub ratio_max: EdgeWitness<T>,
    pub ratio_min: EdgeWitness<T>,
    pub valid: bool,
    /// Outcome of the exhaustive pairwise check; `None` above [`PAIRWISE_CHECK_LIMIT`] vertices.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairwise_verified: Option<bool>,
}

/// Certifies the identity map via the edge criterion.
///
/// Valid iff `m / m* <= (1+ε)/(1-ε)`, i.e. the interval of feasible scales
/// `[m/(1+ε), m*/(1-ε)]` is non-empty. The reported scale is `√(m·m*)` clamped
/// into that interval.
pub fn certify_scale_iso<T: Scalar>(
    tree: &WeightedTree<T>,
    d_weights: &[T],
    rho_weights: &[T],
    eps: T,
) -> Result<ScaleIsoCertificate<T>> {
    if !(eps > T::zero() && eps < T::one()) {
        return Err(Error::InvalidParameter(format!("eps must lie in (0, 1), got {eps}")));
    }
    let ext = edge_ratio_extrema(tree, d_weights, rho_weights)?;
    let (m_star, m) = (ext.min.ratio, ext.max.ratio);
    let (feasible_lo, feasible_hi) = (m / (T::one() + eps), m_star / (T::one() - eps));
    let slack = T::metric_slack() * feasible_hi;
    let valid = feasible_lo <= feasible_hi + slack;
    let mut scale = (m * m_star).sqrt();
    if valid {
        scale = scale.max(feasible_lo).min(feasible_hi.max(feasible_lo));
    }

    let pairwise_verified = if valid && tree.len() <= PAIRWISE_CHECK_LIMIT {
        let (lo, hi) = pairwise_ratio_extrema(tree, d_weights, rho_weights)?;
        let tol = T::metric_slack() * scale.max(T::one());
        Some(lo >= (T::one() - eps) * scale - tol && hi <= (T::one() + eps) * scale + tol)
    } else {
        None
    };

    Ok(ScaleIsoCertificate { scale, eps, ratio_max: ext.max, ratio_min: ext.min, valid, pairwise_verified })
}

/// Smallest `ε` the edge criterion accepts: `(m - m*)/(m + m*)`.
pub fn min_distortion<T: Scalar>(tree: &WeightedTree<T>, d_weights: &[T], rho_weights: &[T]) -> Result<T> {
    let ext = edge_ratio_extrema(tree, d_weights, rho_weights)?;
    let (lo, hi) = (ext.min.ratio, ext.max.ratio);
    Ok((hi - lo) / (hi + lo))
}

/// A unit comb placed inside the weighted comb `C(f)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct CombRepresentation<T: Scalar> {
    /// Start of the sub-exponential window; the image is `x_{n0+k}, y_{n0+k}`.
    pub n0: usize,
    /// Smallest start whose restricted-edge certificate is already valid (`<= n0`).
    pub min_certified_n0: usize,
    /// `C_m(1)` vertex to `C(f)` vertex.
    pub vertex_map: Vec<(String, String)>,
    pub certificate: ScaleIsoCertificate<T>,
}

/// Identifies `C_m(1)` with the segment of `C(f)` starting at the window `n0`
/// and certifies the identification against the segment's actual edge weights.
pub fn comb_local_representation<T: Scalar>(
    f: &WeightFunction<T>,
    m: usize,
    eps: T,
    n_max: usize,
) -> Result<Option<CombRepresentation<T>>> {
    check_window_params(m, eps)?;
    let Some(n0) = sub_exponential_window(f, m, eps, n_max)? else {
        return Ok(None);
    };
    let unit = build_comb(&CombSpec::<T>::unit(m))?;
    let ones = unit.weights();
    let certify = |start: usize| -> Result<(WeightedTree<T>, ScaleIsoCertificate<T>)> {
        let image = comb_segment(f, start, m)?;
        let cert = certify_scale_iso(&unit, &ones, &image.weights(), eps)?;
        Ok((image, cert))
    };
    let (image, certificate) = certify(n0)?;
    let mut min_certified_n0 = n0;
    for start in 1..n0 {
        if certify(start)?.1.valid {
            min_certified_n0 = start;
            break;
        }
    }
    let vertex_map = unit.vertices().iter().cloned().zip(image.vertices().iter().cloned()).collect();
    Ok(Some(CombRepresentation { n0, min_certified_n0, vertex_map, certificate }))
}

/// Carries a violating simplex of `source` along `map` into `target`.
///
/// `map[i]` is the target index of source point `i`. The map must be injective
/// on the simplex points and admit a scale `n` with
/// `(1-ε) n d <= ρ <= (1+ε) n d` there. If `(1-ε)^p·LHS > (1+ε)^p·RHS` for the
/// source simplex, its image violates the simplex inequality in `target`;
/// otherwise `ε` is too coarse and `None` is returned.
pub fn transport_violation<T: Scalar>(
    source: &FiniteMetricSpace<T>,
    s: &Simplex,
    p: T,
    target: &FiniteMetricSpace<T>,
    map: &[usize],
    eps: T,
) -> Result<Option<Simplex>> {
    if !(eps >= T::zero() && eps < T::one()) {
        return Err(Error::InvalidParameter(format!("eps must lie in [0, 1), got {eps}")));
    }
    if map.len() != source.len() {
        return Err(Error::InvalidParameter(format!("map has {} entries for {} points", map.len(), source.len())));
    }
    if let Some(&index) = map.iter().find(|&&t| t >= target.len()) {
        return Err(Error::IndexOutOfRange { index, len: target.len() });
    }
    let sides = simplex_sides(source, s, p)?;
    if !(sides.gap() < T::zero()) {
        return Err(Error::InvalidParameter("source simplex does not violate the inequality".into()));
    }

    let mut pts: Vec<usize> = s.points().collect();
    pts.sort_unstable();
    pts.dedup();
    let (mut lo, mut hi) = (T::infinity(), T::zero());
    for (i, &a) in pts.iter().enumerate() {
        for &b in &pts[i + 1..] {
            if map[a] == map[b] {
                return Err(Error::NotInjective);
            }
            let r = target.d(map[a], map[b]) / source.d(a, b);
            lo = lo.min(r);
            hi = hi.max(r);
        }
    }
    if hi * (T::one() - eps) > lo * (T::one() + eps) * (T::one() + T::metric_slack()) {
        return Err(Error::NotScaleIsomorphism);
    }

    if (T::one() - eps).powf(p) * sides.lhs > (T::one() + eps).powf(p) * sides.rhs {
        let image = Simplex { a: s.a.iter().map(|&i| map[i]).collect(), b: s.b.iter().map(|&i| map[i]).collect() };
        debug_assert!(simplex_gap(target, &image, p)? < T::zero());
        Ok(Some(image))
    } else {
        Ok(None)
    }
}
