use serde::{Deserialize, Serialize};

use super::weight::WeightFunction;
use crate::error::{Error, Result};
use crate::metric::{Edge, WeightedTree};
use crate::scalar::Scalar;

/// An `m`-comb with edge weights drawn from `f`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct CombSpec<T: Scalar> {
    pub m: usize,
    pub f: WeightFunction<T>,
}

impl<T: Scalar> CombSpec<T> {
    pub fn new(m: usize, f: WeightFunction<T>) -> Self {
        Self { m, f }
    }

    /// The unit-weight comb `C_m(1)`.
    pub fn unit(m: usize) -> Self {
        Self { m, f: WeightFunction::Constant(T::one()) }
    }
}

/// Builds `C_m(f)`: spine `x_1 .. x_{m+1}`, one tooth `y_j` per spine vertex.
///
/// The spine edge `{x_j, x_{j+1}}` and the tooth `{x_j, y_j}` both weigh `f(j)`.
/// Vertices are ordered `x_1..x_{m+1}, y_1..y_{m+1}`; spine edges precede teeth.
pub fn build_comb<T: Scalar>(spec: &CombSpec<T>) -> Result<WeightedTree<T>> {
    if spec.m == 0 {
        return Err(Error::InvalidParameter("comb size m must be at least 1".into()));
    }
    comb_segment(&spec.f, 1, spec.m)
}

/// The subtree of the infinite comb on `x_{start+k}, y_{start+k}` for `k = 0..=m`,
/// with the weights it inherits from `f`.
pub fn comb_segment<T: Scalar>(f: &WeightFunction<T>, start: usize, m: usize) -> Result<WeightedTree<T>> {
    let spine = m + 1;
    let mut vertices: Vec<String> = (0..spine).map(|k| format!("x{}", start + k)).collect();
    vertices.extend((0..spine).map(|k| format!("y{}", start + k)));
    let mut edges = Vec::with_capacity(2 * m + 1);
    for k in 0..m {
        edges.push(Edge { u: k, v: k + 1, w: f.value(start + k)? });
    }
    for k in 0..spine {
        edges.push(Edge { u: k, v: spine + k, w: f.value(start + k)? });
    }
    WeightedTree::new(vertices, edges)
}
