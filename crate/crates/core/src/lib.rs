//! Exact linear algebra and based quiver algebras over prime fields, with
//! Hochschild cohomology of the zigzag algebra and its bimodule building blocks.

pub mod clubsuit;
pub mod exactlin;
pub mod koszulhh;
pub mod operators;
pub mod quiver;
pub mod spadesuit;
pub mod sparse;

pub use exactlin::{Field, Homology, LinError, Matrix, Scalar};
pub use quiver::{BasedAlgebra, BasedBimodule, BimoduleMap, Coefficients, Degree, Element, MultiDegree, QuiverError};
pub use sparse::Lin;
pub use operators::{apply_operator, build_hhl, build_hhl_iterated, hilbert_series, Grading, HHLAlgebra, LaurentWindow, OperatorError};
pub use spadesuit::{build_spade, verify_first_principles, SpadeAlgebra, SpadeElement, SpadeError, SpadeKind};
