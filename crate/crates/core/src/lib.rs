//! Exact quadratic forms over `Q`, `F_p` and `R`: diagonalization, Witt
//! cancellation with explicit isometries, Witt decomposition, Witt rings and
//! their ideal filtration, and the degree-wise Milnor comparison maps.

mod arith;
pub mod cancellation;
mod conic;
pub mod error;
pub mod field;
pub mod form;
pub mod gen;
pub mod isotropy;
mod local;
pub mod matrix;
pub mod milnor;
pub mod witt;

pub use cancellation::{cancel_first_algebraic, cancel_first_geometric, homotopy_check, CancellationResult};
pub use error::{Error, Result, Violation};
pub use field::{hilbert_symbol, FieldCtx, Place, Prime, Scalar, SquareClass};
pub use form::{symmetrize, DiagonalForm, GramMatrix, IsometryWitness};
pub use isotropy::{find_isotropic_vector, is_isotropic, split_hyperbolic, witt_decompose, WittDecomposition};
pub use matrix::Matrix;
pub use witt::{
    e0, e1, e2, enumerate_witt_ring, ideal_filtration, is_similar, pfister, pfister_class, wadd, witt_class, wmul, wneg, HasseProfile,
    PfisterForm, WittClass,
};
pub use milnor::{
    galois_cohomology_dims, graded_witt_quotient, milnor_k_mod2, triangle_check, F2Space, PfisterConvention,
    TriangleReport,
};
