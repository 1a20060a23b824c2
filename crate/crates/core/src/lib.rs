//! Exact verification of cyclic Adams operations on Grothendieck groups of
//! bounded complexes of free modules over univariate polynomial rings.
//!
//! The crate is organized bottom-up:
//!
//! * [`field`] — exact arithmetic in F_q and Q(zeta_n);
//! * [`poly`] / [`matrix`] — univariate polynomials, Smith normal form over
//!   F[x], exact kernels;
//! * [`complex`] — bounded complexes of based free F[x]-modules, Koszul
//!   complexes, tensor products, homology, and local Euler characteristics;
//! * [`equivariant`] — signed tensor powers with symmetric/cyclic group
//!   actions, eigenspace and isotypic subcomplexes;
//! * [`adams`] — the cyclic Adams operations and the identity-verification
//!   harness;
//! * [`symrep`] — character-level representation rings of symmetric and
//!   cyclic groups.

pub mod adams;
pub mod complex;
pub mod equivariant;
pub mod error;
pub mod field;
pub mod matrix;
pub mod poly;
// pub mod symrep;

pub use error::{Error, Result};
pub use field::{field_create, scalar_arith, ArithOp, Field, FieldDescriptor, RootOfUnityTable, Scalar};
pub use matrix::{constant_kernel, smith_normal_form, PolyMatrix, ScalarMatrix, SnfResult};
pub use poly::{poly_arith, Poly, PolyOp, Valuation};
