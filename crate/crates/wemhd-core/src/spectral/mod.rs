//! Periodic pseudospectral calculus on the unit 3-torus.
//!
//! Fields are band-limited trigonometric polynomials stored as full complex
//! Fourier cubes ([`field`]); derivatives and inverse operators are exact
//! mode multipliers ([`ops`]); nonlinear terms are formed on automatically
//! padded grids so products are exact convolutions ([`product`]); norms use
//! uniform lattice quadrature with fixed summation order ([`norms`]); and
//! [`report`] holds the binary/CSV output formats.

mod fft;
mod field;
mod grid;
mod norms;
mod ops;
mod product;
mod report;

pub use fft::{
    complex_physical_from_spectral, hermitian_defect, hermitian_symmetrize,
    physical_from_spectral, spectral_from_complex_physical, spectral_from_physical,
};
pub use field::{sym_index, ScalarField, SymTensorField, VectorField};
pub use grid::{product_grid, smooth_size, TorusGrid};
pub use norms::{
    lp_of_samples, lp_scalar, lp_tensor, lp_vector, magnitude_samples, outer_time_norm,
    w1p_scalar, w1p_vector, Lp, SYM_WEIGHTS,
};
pub use ops::{
    curl, curl_curl, divergence, divergence_tensor, frac_laplacian, frac_laplacian_scalar,
    gradient, inverse_divergence, inverse_laplacian_scalar, leray_project, project_nonzero,
    project_nonzero_scalar, project_nonzero_tensor, vector_potential,
};
pub use product::{
    dot, joint_grid, multiply, multiply_complex, multiply_on, outer_sym, scalar_times_tensor,
    scalar_times_vector,
};
pub use report::{read_field_dump, write_csv, FieldDump, FieldDumpWriter};
