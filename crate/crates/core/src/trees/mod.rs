//! Constructors for combs and spherically symmetric trees, the star upper bound
//! for SSTs, and the sub-exponential window search used to place a unit comb
//! inside a weighted one.

mod comb;
mod lp;
mod sst;
mod weight;
mod window;

pub use comb::{build_comb, comb_segment, CombSpec};
pub use lp::lp_point_set;
pub use sst::{
    build_sst, sst_star_configuration, sst_upper_bound, star_bound, SstBoundReport, SstBoundTerm, SstSpec,
    StarConfiguration, DEFAULT_VERTEX_CAP,
};
pub use weight::WeightFunction;
pub use window::{is_additively_subexponential_sample, sub_exponential_window};

pub(crate) use window::check_window_params;
