//! Exact integral-lattice model of the degree-4 cohomology of hyperkähler
//! fourfolds of K3^[2]-type.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`]: exact integer/rational matrices, Hermite and Smith normal
//!   forms, lattices with a bilinear form, finite abelian groups.
//! * [`bb`]: the rank-23 Beauville–Bogomolov lattice and class predicates.
//! * [`h4`]: the 276-dimensional model of `H^4(F, Z)` as an overlattice of
//!   `Sym^2` of the BB lattice, the torsion group `T^4` and its structure maps.
//! * [`hodge`]: Picard data, the lattices `V_λ`, the minimality functional and
//!   the minimal-class search.
//! * [`deform`]: the fixed-space linear system of the infinitesimal deformation
//!   argument.
//! * [`cubic`]: the variety-of-lines specialisation.
//! * [`blowup`]: blow-up formulas for fourfold `H^4` lattices and the
//!   correspondence index calculus.
//! * [`suites`]: named verification suites producing [`report::SuiteReport`]s.
//!
//! Everything is exact; there is no floating point anywhere.

pub mod blowup;
pub mod bb;
pub mod cubic;
pub mod deform;
pub mod error;
pub mod h4;
pub mod hodge;
pub mod linalg;
pub mod report;
pub mod sample;
pub mod suites;

pub use error::{Error, Result};
pub use linalg::{FiniteAbelianGroup, Int, Lattice, Mat, Rat};
pub use bb::{BbSpace, ExceptionalClass, H2Class};
pub use h4::{H4Class, H4Lattice, H4Model, T4Group};
pub use hodge::{MinimalityReport, PicardData};
