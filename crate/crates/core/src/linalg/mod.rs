//! Exact integer and rational linear algebra, and lattices in `Q^n`.

pub mod group;
pub mod int;
pub mod lattice;
pub mod mat;
pub(crate) mod smith;

pub use group::FiniteAbelianGroup;
pub use lattice::{Feasibility, Lattice, QuotientMap};
pub use mat::{parse_rat, rat, rat_frac, Mat};

use crate::error::Result;

pub type Int = num_bigint::BigInt;
pub type Rat = num_rational::BigRational;

/// Row-style Hermite normal form of an integer matrix (zero rows dropped).
pub fn hnf(m: &Mat) -> Result<Mat> {
    let rows = m.to_int_rows()?;
    let e = int::hnf(&rows, m.ncols());
    Ok(Mat::from_int_rows(&e.rows, m.ncols()))
}

/// Torsion part of the cokernel of an integer relation matrix (rows are relations).
pub fn snf(m: &Mat) -> Result<FiniteAbelianGroup> {
    let rows = m.to_int_rows()?;
    let (torsion, _free) = smith::cokernel_invariants(&rows, m.ncols());
    FiniteAbelianGroup::new(torsion)
}

pub fn lattice_meet(a: &Lattice, b: &Lattice) -> Result<Lattice> {
    a.meet(b)
}

pub fn lattice_join(a: &Lattice, b: &Lattice) -> Result<Lattice> {
    a.join(b)
}

/// `[sup : sub]`.
pub fn sublattice_index(sub: &Lattice, sup: &Lattice) -> Result<Int> {
    sub.index_in(sup)
}

pub fn quotient_invariants(sub: &Lattice, sup: &Lattice) -> Result<FiniteAbelianGroup> {
    sub.quotient_invariants(sup)
}

pub fn divisibility(v: &[Rat], lat: &Lattice) -> Result<Int> {
    lat.divisibility(v)
}

pub fn coset_feasible(lat: &Lattice, functional: &[Rat], target: &Rat) -> Result<Feasibility> {
    lat.coset_feasible(functional, target)
}
