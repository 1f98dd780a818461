//! Higher-dimensional hypergraph-product codes over GF(2).
//!
//! Codes are built as based chain complexes: a list of binary boundary
//! matrices `A_1, ..., A_m` with `A_j * A_{j+1} = 0`. Level `j` of a complex
//! yields a CSS code with `G_X = A_j` and `G_Z = A_{j+1}^T`. Tensor products
//! of complexes, and in particular repeated products with 1-complexes
//! `K(P)`, give families of quantum LDPC codes whose length, rank and
//! distances follow from those of the factors.
//!
//! - [`gf2`]: bit-packed dense matrices, rank, kernels, products
//! - [`complex`]: chain complexes, homology ranks, extended distances
//! - [`product`]: tensor products, Künneth predictions, distance bounds
//! - [`distance`]: exact homological and classical distances
//! - [`codes`]: CSS extraction, code parameters, seed-matrix ensembles
//! - [`io`]: alist files and complex bundles
//! - [`report`]: per-level parameter reports
//! - [`verify`]: checks of a constructed product against its predictions

pub mod codes;
pub mod complex;
pub mod distance;
pub mod error;
pub mod gf2;
pub mod io;
pub mod product;
pub mod report;
pub mod verify;

#[cfg(any(test, feature = "testing"))]
pub mod testing;

pub use codes::{CodeParameters, CssCode, DistanceInterval, Ensemble, EnsembleSpec};
pub use complex::{ChainComplex, ExtNat, IndexSet};
pub use distance::{DistanceMode, DistanceQuery, DistanceResult};
pub use error::{Error, Result};
pub use gf2::{BinMatrix, BitVec, Ge2Basis};
pub use product::{DistanceBounds, OneComplexParams, ProductLayout};
