//! Carathéodory–Fejér interpolation in one and two variables.

pub mod kp;
pub mod onevar;
pub mod sufficient;
pub mod twovar;

pub use kp::{
    cayley_coeffs_1d, cayley_coeffs_2d, cayley_inverse_2d, dslice_enumerate, kp_identity_check, kp_matrix_2d,
    toeplitz_of_blocks, DSliceIndex,
};
pub use onevar::{cf1_construct, cf1_feasible, cf1_toeplitz_svd_norm, minimal_extension, CFProblem1D, RationalFn};
pub use sufficient::{cf2_sufficient_class, sufficient_problem, SufficientCase, SufficientReport};
pub use twovar::{
    assemble, cf2_extend, cf2_necessary, cf2_necessary_report, extremal_value, CFProblem2D, Cf2Extension,
    ExtendStatus, ExtremalValue, Jet2, NecessaryReport, DEFAULT_WINDOW,
};
