//! `PSL(2, R)` and `sl(2, R)`: trace form, classification, closed-form
//! exponential and logarithm, normalized axes and their pairings.
//!
//! Orientation convention: the upper half-plane carries its complex
//! orientation, and `E - F` generates counterclockwise rotation about `i`.
//! Elliptic logarithms are counterclockwise generators, so `L(S)` is the unit
//! counterclockwise generator at the fixed point of `S`. With this choice the
//! mixed pairing `B(L(R), L(S)) = -2 sinh(d)` counts `d` positive on the
//! right-hand side of the oriented axis of `R`.

pub mod algebra;
pub mod injectivity;
pub mod pairing;
pub mod plane;

pub use algebra::{
    ad_matrix, axis_vector, classify, is_counterclockwise, killing_form, rotation_angle, sl2_exp,
    sl2_log, trace_form, IsometryClass, Sl2Matrix, Sl2Vector, CLASSIFY_TOL,
};
pub use injectivity::{
    elliptic_pair, elliptic_product, elliptic_product_trace, elliptic_product_trace_closed_form,
    solve_order_q_distance,
};
pub use pairing::{
    decode_geodesic_pairing, elliptic_pair_pairing, geodesic_pair_pairing, log_perturbation,
    mixed_pairing, GeodesicRelation,
};
pub use plane::{
    fixed_point, hyp_distance, isometry_from_pairs, mobius, moving_frame, point_from_i,
    translation_between, HyperbolicPoint,
};
