//! Negative type, the simplex inequality and the supremal roundness exponent.
//!
//! A space has `p`-negative type when `Σ d(xᵢ,xⱼ)^p ηᵢ ηⱼ <= 0` for every
//! balanced `η`. On the balanced subspace this is negative semidefiniteness of
//! `P Dₚ P`, where `Dₚ` is the entrywise power and `P = I - 11ᵀ/k`, which is
//! what [`negative_type_test`] decides. The same exponents are exactly those for
//! which the simplex inequality
//!
//! ```text
//! Σ_{i<j} d(aᵢ,aⱼ)^p + d(bᵢ,bⱼ)^p  <=  Σ_{i,j} d(aᵢ,bⱼ)^p
//! ```
//!
//! holds over all simplices `[a₁..a_k; b₁..b_k]`, and [`brute_force_simplex_search`]
//! enumerates small simplices directly as an independent check.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{jacobi_eigh, SquareMatrix};
use crate::metric::FiniteMetricSpace;
use crate::scalar::{dist_pow, Scalar};

/// Largest space accepted by [`brute_force_simplex_search`].
pub const MAX_EXHAUSTIVE_POINTS: usize = 8;

/// Default bisection tolerance for [`roundness`].
pub const DEFAULT_TOL: f64 = 1e-6;
/// Default search ceiling for [`roundness`].
pub const DEFAULT_P_CAP: f64 = 64.0;

/// Two equally long lists of point indices, repetitions allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Simplex {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

impl Simplex {
    pub fn new(a: Vec<usize>, b: Vec<usize>) -> Result<Self> {
        if a.len() != b.len() || a.len() < 2 {
            return Err(Error::SimplexShape { a: a.len(), b: b.len() });
        }
        Ok(Self { a, b })
    }

    pub fn k(&self) -> usize {
        self.a.len()
    }

    /// Every index mentioned on either side.
    pub fn points(&self) -> impl Iterator<Item = usize> + '_ {
        self.a.iter().chain(&self.b).copied()
    }

    fn check_indices(&self, len: usize) -> Result<()> {
        if self.a.len() != self.b.len() || self.a.len() < 2 {
            return Err(Error::SimplexShape { a: self.a.len(), b: self.b.len() });
        }
        match self.points().find(|&i| i >= len) {
            Some(index) => Err(Error::IndexOutOfRange { index, len }),
            None => Ok(()),
        }
    }
}

/// Both sides of the simplex inequality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct SimplexSides<T: Scalar> {
    /// `Σ_{i<j} d(aᵢ,aⱼ)^p + d(bᵢ,bⱼ)^p`
    pub lhs: T,
    /// `Σ_{i,j} d(aᵢ,bⱼ)^p`
    pub rhs: T,
}

impl<T: Scalar> SimplexSides<T> {
    pub fn gap(&self) -> T {
        self.rhs - self.lhs
    }
}

/// Evaluates both sides of the simplex inequality at exponent `p`.
pub fn simplex_sides<T: Scalar>(space: &FiniteMetricSpace<T>, s: &Simplex, p: T) -> Result<SimplexSides<T>> {
    check_exponent(p)?;
    s.check_indices(space.len())?;
    let pw = |i: usize, j: usize| dist_pow(space.d(i, j), p);
    let k = s.k();
    let mut lhs = T::zero();
    for i in 0..k {
        for j in (i + 1)..k {
            lhs = lhs + pw(s.a[i], s.a[j]) + pw(s.b[i], s.b[j]);
        }
    }
    let mut rhs = T::zero();
    for &a in &s.a {
        for &b in &s.b {
            rhs = rhs + pw(a, b);
        }
    }
    Ok(SimplexSides { lhs, rhs })
}

/// `RHS - LHS` of the simplex inequality; negative means `p` is not a roundness exponent.
pub fn simplex_gap<T: Scalar>(space: &FiniteMetricSpace<T>, s: &Simplex, p: T) -> Result<T> {
    Ok(simplex_sides(space, s, p)?.gap())
}

/// `Σ_{i,j} d(xᵢ,xⱼ)^p ηᵢ ηⱼ` for a balanced `η`.
pub fn quadratic_form<T: Scalar>(space: &FiniteMetricSpace<T>, p: T, eta: &[T]) -> Result<T> {
    check_exponent(p)?;
    if eta.len() != space.len() {
        return Err(Error::EtaLength { expected: space.len(), got: eta.len() });
    }
    let sum: T = eta.iter().copied().sum();
    let l1: T = eta.iter().map(|x| x.abs()).sum();
    if sum.abs() > T::balance_tol() * l1.max(T::one()) {
        return Err(Error::EtaUnbalanced(sum.to_f64_lossy()));
    }
    Ok(space.power_matrix(p).quadratic_form(eta))
}

/// Outcome of a `p`-negative type test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct NegTypeReport<T: Scalar> {
    pub p: T,
    pub holds: bool,
    pub strict: bool,
    /// Largest eigenvalue of the centered power matrix.
    pub max_form_value: T,
    /// Eigenvalue tolerance the decision used.
    pub tolerance: T,
    /// Balanced unit vector: a violation direction when `holds` is false, a
    /// near-null direction when the type holds but is not strict.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_eta: Option<Vec<T>>,
}

/// Decides `p`-negative type (and strictness) from the spectrum of `P Dₚ P`.
///
/// The decision tolerance is `eig_rel_tol × max|Dₚ|`. `holds` iff the largest
/// eigenvalue is at most the tolerance; `strict` iff additionally exactly one
/// eigenvalue is within the tolerance of zero (the constant direction) and the
/// other `k - 1` are below `-tol`. Both are invariant under rescaling the
/// metric, so the spectrum is computed at unit diameter.
pub fn negative_type_test<T: Scalar>(space: &FiniteMetricSpace<T>, p: T) -> Result<NegTypeReport<T>> {
    check_exponent(p)?;
    let k = space.len();
    // Decide on the unit-diameter copy so large exponents cannot overflow;
    // reported magnitudes are scaled back by diam^p.
    let diam = space.diameter();
    let unit;
    let (space, unscale) = if diam > T::zero() {
        unit = space.scaled(T::one() / diam)?;
        (&unit, dist_pow(diam, p))
    } else {
        (space, T::one())
    };
    let dp = space.power_matrix(p);
    let kf = T::from_count(k);
    let proj = SquareMatrix::from_fn(k, |i, j| if i == j { T::one() - T::one() / kf } else { -T::one() / kf });
    let centered = proj.matmul(&dp).matmul(&proj);
    let centered = SquareMatrix::from_fn(k, |i, j| (centered.get(i, j) + centered.get(j, i)) / T::lit(2.0));
    let tol = T::eig_rel_tol() * dp.max_abs().max(T::min_positive_value());
    let eig = jacobi_eigh(&centered)?;

    let max_form_value = eig.values[0];
    let holds = max_form_value <= tol;
    let near_zero = eig.values.iter().filter(|v| v.abs() < tol).count();
    let negative = eig.values.iter().filter(|&&v| v < -tol).count();
    let strict = holds && near_zero == 1 && negative == k - 1;

    let witness_eta = if !holds {
        Some(balanced_unit(eig.vector(0)))
    } else if !strict {
        // Skip the eigenvector closest to the constant direction.
        let ones = T::one() / kf.sqrt();
        let constant = (0..k)
            .max_by(|&a, &b| {
                let da: T = eig.vector(a).iter().map(|&x| x * ones).sum::<T>().abs();
                let db: T = eig.vector(b).iter().map(|&x| x * ones).sum::<T>().abs();
                da.partial_cmp(&db).unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap_or(0);
        (0..k).find(|&j| j != constant).map(|j| balanced_unit(eig.vector(j)))
    } else {
        None
    };

    Ok(NegTypeReport {
        p,
        holds,
        strict,
        max_form_value: max_form_value * unscale,
        tolerance: tol * unscale,
        witness_eta,
    })
}

fn balanced_unit<T: Scalar>(mut v: Vec<T>) -> Vec<T> {
    let n = T::from_count(v.len());
    let mean = v.iter().copied().sum::<T>() / n;
    v.iter_mut().for_each(|x| *x = *x - mean);
    let norm = v.iter().map(|&x| x * x).sum::<T>().sqrt();
    if norm > T::zero() {
        v.iter_mut().for_each(|x| *x = *x / norm);
    }
    // Re-center after scaling so the rounding in the division does not leak into the sum.
    let mean = v.iter().copied().sum::<T>() / n;
    v.iter_mut().for_each(|x| *x = *x - mean);
    v
}

/// Exhaustively searches simplices with `2 <= k <= k_max` and at most `mult_max`
/// copies of a point per side for one violating the simplex inequality at `p`.
///
/// Each side is enumerated as a multiset and unordered side pairs are visited
/// once, in lexicographic order of the sorted index lists.
///
/// A gap only counts as a violation below `-max(slack × (LHS + RHS), ½ tol |η|²)`,
/// where `η` is the signed count vector and `tol` is the eigenvalue tolerance
/// of [`negative_type_test`]; smaller gaps are rounding or sit inside the
/// tolerance that test already grants.
pub fn brute_force_simplex_search<T: Scalar>(
    space: &FiniteMetricSpace<T>,
    p: T,
    k_max: usize,
    mult_max: usize,
) -> Result<Option<Simplex>> {
    check_exponent(p)?;
    let n = space.len();
    if n > MAX_EXHAUSTIVE_POINTS {
        return Err(Error::SpaceTooLarge { max: MAX_EXHAUSTIVE_POINTS, got: n });
    }
    if k_max < 2 || mult_max == 0 {
        return Err(Error::InvalidParameter(format!("need k_max >= 2 and mult_max >= 1, got {k_max} and {mult_max}")));
    }
    let dp = space.power_matrix(p);
    let form_tol = T::lit(0.5) * T::eig_rel_tol() * dp.max_abs();
    for k in 2..=k_max {
        let sides = multisets(n, k, mult_max);
        let within: Vec<T> = sides.iter().map(|c| within_side(&dp, c)).collect();
        for (ia, ca) in sides.iter().enumerate() {
            for (ib, cb) in sides.iter().enumerate().skip(ia) {
                let mut cross = T::zero();
                for x in 0..n {
                    if ca[x] == 0 {
                        continue;
                    }
                    for y in 0..n {
                        if cb[y] != 0 {
                            cross = cross + T::from_count(ca[x] * cb[y]) * dp.get(x, y);
                        }
                    }
                }
                let gap = cross - within[ia] - within[ib];
                let eta_sq: usize = ca.iter().zip(cb).map(|(&x, &y)| x.abs_diff(y).pow(2)).sum();
                let magnitude = cross + within[ia] + within[ib];
                let threshold = (T::metric_slack() * magnitude).max(form_tol * T::from_count(eta_sq));
                if gap < -threshold {
                    return Ok(Some(Simplex { a: expand(ca), b: expand(cb) }));
                }
            }
        }
    }
    Ok(None)
}

fn within_side<T: Scalar>(dp: &SquareMatrix<T>, counts: &[usize]) -> T {
    let mut acc = T::zero();
    for x in 0..counts.len() {
        for y in (x + 1)..counts.len() {
            if counts[x] != 0 && counts[y] != 0 {
                acc = acc + T::from_count(counts[x] * counts[y]) * dp.get(x, y);
            }
        }
    }
    acc
}

fn expand(counts: &[usize]) -> Vec<usize> {
    counts.iter().enumerate().flat_map(|(i, &c)| std::iter::repeat_n(i, c)).collect()
}

/// Count vectors of all size-`k` multisets over `n` points with multiplicity
/// at most `mult_max`, in lexicographic order of their sorted index lists.
fn multisets(n: usize, k: usize, mult_max: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, left: usize, n: usize, mult_max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            if cur[x] < mult_max {
                cur[x] += 1;
                rec(x, left - 1, n, mult_max, cur, out);
                cur[x] -= 1;
            }
        }
    }
    let mut out = Vec::new();
    rec(0, k, n, mult_max, &mut vec![0; n], &mut out);
    out
}

/// Bracket for the supremal roundness exponent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct RoundnessEstimate<T: Scalar> {
    /// Largest tested exponent that holds. `None` when infinite.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower: Option<T>,
    /// Smallest tested exponent that fails. `None` when infinite.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper: Option<T>,
    pub infinite: bool,
    /// Number of negative type tests performed.
    pub iterations: usize,
    /// Test at `upper`, on the space scaled to unit diameter.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure_certificate: Option<NegTypeReport<T>>,
}

impl<T: Scalar> RoundnessEstimate<T> {
    pub fn lower_or_inf(&self) -> T {
        self.lower.unwrap_or_else(T::infinity)
    }

    pub fn upper_or_inf(&self) -> T {
        self.upper.unwrap_or_else(T::infinity)
    }

    pub fn width(&self) -> T {
        match (self.lower, self.upper) {
            (Some(l), Some(u)) => u - l,
            _ => T::zero(),
        }
    }
}

/// Brackets the supremal exponent to within `tol`.
///
/// Ultrametric spaces (and single points) are reported as infinite. Otherwise
/// the exponents form `[0, ℘]`: starting from 1 the exponent doubles until a test
/// fails (capped at `p_cap`), then the bracket is bisected. A boundary exponent
/// is treated as holding.
///
/// Tests run on the space rescaled to unit diameter, which leaves every
/// decision unchanged and keeps `d^p <= 1` at large exponents. The failure
/// certificate is therefore in those units.
pub fn roundness<T: Scalar>(space: &FiniteMetricSpace<T>, tol: T, p_cap: T) -> Result<RoundnessEstimate<T>> {
    if !(tol > T::zero()) {
        return Err(Error::InvalidParameter(format!("tol must be positive, got {tol}")));
    }
    if !(p_cap >= T::lit(2.0)) || !p_cap.is_finite() {
        return Err(Error::InvalidParameter(format!("p_cap must be a finite value >= 2, got {p_cap}")));
    }
    if space.is_ultrametric() {
        return Ok(RoundnessEstimate { lower: None, upper: None, infinite: true, iterations: 0, failure_certificate: None });
    }
    let unit = space.scaled(T::one() / space.diameter())?;
    let space = &unit;

    let mut iterations = 0;
    let mut lower = T::zero();
    let mut p = T::one();
    let (mut upper, mut failure) = loop {
        iterations += 1;
        let report = negative_type_test(space, p)?;
        if !report.holds {
            break (p, report);
        }
        lower = p;
        if p >= p_cap {
            return Err(Error::Bracketing(p_cap.to_f64_lossy()));
        }
        p = (p + p).min(p_cap);
    };

    let two = T::lit(2.0);
    while upper - lower > tol {
        let mid = (lower + upper) / two;
        if mid <= lower || mid >= upper {
            break;
        }
        iterations += 1;
        let report = negative_type_test(space, mid)?;
        if report.holds {
            lower = mid;
        } else {
            upper = mid;
            failure = report;
        }
    }

    Ok(RoundnessEstimate {
        lower: Some(lower),
        upper: Some(upper),
        infinite: false,
        iterations,
        failure_certificate: Some(failure),
    })
}

fn check_exponent<T: Scalar>(p: T) -> Result<()> {
    if p >= T::zero() && p.is_finite() {
        Ok(())
    } else {
        Err(Error::NegativeExponent(p.to_f64_lossy()))
    }
}
