//! Generalized roundness and negative type of finite metric spaces.
//!
//! The library decides `p`-negative type of a finite metric space, brackets its
//! supremal exponent, builds the weighted trees of interest (combs with weight
//! functions, spherically symmetric trees), certifies scale isomorphisms between
//! path metrics on a tree, and realizes the transform `√(d^p)` in Euclidean
//! space when it exists.
//!
//! All numeric code is generic over [`Scalar`] (`f32` or `f64`). The aliases at
//! the crate root fix the scalar to `f64`, which is what the CLI uses.
//!
//! ```
//! use genround::{roundness, MetricSpace};
//!
//! let line = MetricSpace::new(&[vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 1.0], vec![2.0, 1.0, 0.0]]).unwrap();
//! let est = roundness(&line, 1e-6, 64.0).unwrap();
//! assert!(est.lower.unwrap() <= 2.0 && 2.0 <= est.upper.unwrap());
//! ```

// Negated comparisons reject NaN on purpose; the eigensolvers index like the textbook.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod embed;
pub mod error;
pub mod linalg;
pub mod metric;
pub mod negtype;
pub mod scalar;
pub mod scaleiso;
pub mod trees;

pub use embed::{schoenberg_embed, verify_embedding, Embedding, EmbeddingResult, EmbeddingWitness};
pub use error::{Error, Result};
pub use metric::{
    is_ultrametric, power_transform, restrict, tree_to_metric, validate_metric, Edge, FiniteMetricSpace, TransformSpec,
    WeightedTree,
};
pub use negtype::{
    brute_force_simplex_search, negative_type_test, quadratic_form, roundness, simplex_gap, simplex_sides,
    NegTypeReport, RoundnessEstimate, Simplex, SimplexSides, DEFAULT_P_CAP, DEFAULT_TOL, MAX_EXHAUSTIVE_POINTS,
};
pub use scalar::{dist_pow, Scalar};
pub use scaleiso::{
    certify_scale_iso, comb_local_representation, edge_ratio_extrema, min_distortion, pairwise_ratio_extrema,
    transport_violation, CombRepresentation, EdgeWitness, RatioExtrema, ScaleIsoCertificate,
};
pub use trees::{
    build_comb, build_sst, comb_segment, is_additively_subexponential_sample, lp_point_set, sst_star_configuration,
    sst_upper_bound, sub_exponential_window, CombSpec, SstBoundReport, SstSpec, StarConfiguration, WeightFunction,
    DEFAULT_VERTEX_CAP,
};

pub type MetricSpace = FiniteMetricSpace<f64>;
pub type Tree = WeightedTree<f64>;
pub type Transform = TransformSpec<f64>;
pub type Report = NegTypeReport<f64>;
pub type Estimate = RoundnessEstimate<f64>;
pub type Weight = WeightFunction<f64>;
pub type Comb = CombSpec<f64>;
pub type Sst = SstSpec<f64>;
pub type SstBound = SstBoundReport<f64>;
pub type Certificate = ScaleIsoCertificate<f64>;
pub type Embedded = EmbeddingResult<f64>;

pub type MetricSpaceF32 = FiniteMetricSpace<f32>;
pub type TreeF32 = WeightedTree<f32>;
