//! Deterministic numerical kernels shared by every other module.

pub mod linalg;
pub mod minimize;
pub mod par;
pub mod quad;
pub mod rng;
pub mod roots;
pub mod special;

pub use linalg::{
    chol, dot, haar_subspace, norm, qr, solve_spd, sphere_sample, Matrix, Subspace, Vector,
};
pub use minimize::{golden_section_max, minimize_convex, Minimum, MinimizeOptions};
pub use quad::{quad_1d, UpperLimit};
pub use rng::RngStream;
pub use roots::root_find_increasing;
