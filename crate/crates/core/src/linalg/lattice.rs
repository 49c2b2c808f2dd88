use std::sync::Arc;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::group::FiniteAbelianGroup;
use super::int::{self, IntRow};
use super::mat::{clear_denominators, common_denominator, Mat};
use super::smith::smith;
use super::{Int, Rat};
use crate::error::{Error, Result};

/// Integer coordinates of `target` in the echelon basis `rows`, if it lies in their Z-span.
pub(crate) fn echelon_coords(rows: &[IntRow], pivots: &[usize], target: &[Int]) -> Option<Vec<Int>> {
    let mut w = target.to_vec();
    let mut out = Vec::with_capacity(rows.len());
    for (row, &p) in rows.iter().zip(pivots) {
        if w[p].is_zero() {
            out.push(Int::zero());
            continue;
        }
        let (q, r) = w[p].div_rem(&row[p]);
        if !r.is_zero() {
            return None;
        }
        for j in p..w.len() {
            if !row[j].is_zero() {
                w[j] -= &q * &row[j];
            }
        }
        out.push(q);
    }
    if w.iter().all(Zero::is_zero) {
        Some(out)
    } else {
        None
    }
}

/// A free Z-module given by rational basis vectors in `Q^n`, together with a
/// symmetric bilinear form on the ambient space.
///
/// The basis is stored canonically as `rows / den` with `rows` in Hermite
/// normal form, so equality is structural.
#[derive(Clone)]
pub struct Lattice {
    den: Int,
    rows: Vec<IntRow>,
    pivots: Vec<usize>,
    dim: usize,
    form: Arc<Mat>,
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.den == other.den
            && self.rows == other.rows
            && (Arc::ptr_eq(&self.form, &other.form) || self.form == other.form)
    }
}

impl Eq for Lattice {}

impl std::fmt::Debug for Lattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Lattice(rank {} in Q^{}, denominator {})",
            self.rank(),
            self.dim,
            self.den
        )
    }
}

impl Serialize for Lattice {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Lattice", 3)?;
        st.serialize_field("ambient_dim", &self.dim)?;
        st.serialize_field("denominator", &self.den.to_string())?;
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect())
            .collect();
        st.serialize_field("hnf_rows", &rows)?;
        st.end()
    }
}

fn check_form(form: &Mat) -> Result<()> {
    if !form.is_symmetric() {
        return Err(Error::Precondition("ambient form must be symmetric".into()));
    }
    Ok(())
}

impl Lattice {
    fn from_scaled(den: Int, int_rows: &[IntRow], dim: usize, form: Arc<Mat>) -> Lattice {
        let e = int::hnf(int_rows, dim);
        let mut den = den;
        let mut rows = e.rows;
        let g = rows
            .iter()
            .fold(den.clone(), |g, r| r.iter().fold(g, |g, x| g.gcd(x)));
        if !g.is_one() && !g.is_zero() {
            for r in rows.iter_mut() {
                for x in r.iter_mut() {
                    *x = &*x / &g;
                }
            }
            den /= &g;
        }
        if rows.is_empty() {
            den = Int::one();
        }
        Lattice {
            den,
            rows,
            pivots: e.pivots,
            dim,
            form,
        }
    }

    /// Z-span of rational generators (need not be independent).
    pub fn new(generators: &[Vec<Rat>], form: Arc<Mat>) -> Result<Lattice> {
        check_form(&form)?;
        let dim = form.nrows();
        if let Some(g) = generators.iter().find(|g| g.len() != dim) {
            return Err(Error::Dimension(format!(
                "generator of length {} in ambient dimension {dim}",
                g.len()
            )));
        }
        let den = generators
            .iter()
            .fold(Int::one(), |l, g| l.lcm(&common_denominator(g)));
        let int_rows: Vec<IntRow> = generators
            .iter()
            .map(|g| {
                g.iter()
                    .map(|x| x.numer() * (&den / x.denom()))
                    .collect()
            })
            .collect();
        Ok(Self::from_scaled(den, &int_rows, dim, form))
    }

    /// Z-span of integer generators.
    pub fn from_int_rows(rows: &[IntRow], form: Arc<Mat>) -> Result<Lattice> {
        check_form(&form)?;
        let dim = form.nrows();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Dimension("integer generator has wrong length".into()));
        }
        Ok(Self::from_scaled(Int::one(), rows, dim, form))
    }

    /// The standard lattice `Z^n` with the given form.
    pub fn standard(form: Arc<Mat>) -> Result<Lattice> {
        let n = form.nrows();
        let rows: Vec<IntRow> = (0..n)
            .map(|i| (0..n).map(|j| Int::from((i == j) as u8)).collect())
            .collect();
        Self::from_int_rows(&rows, form)
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn form(&self) -> &Arc<Mat> {
        &self.form
    }

    /// Common denominator of the canonical basis.
    pub fn denominator(&self) -> &Int {
        &self.den
    }

    /// Canonical basis scaled by the denominator (Hermite normal form).
    pub fn scaled_rows(&self) -> &[IntRow] {
        &self.rows
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Rat> {
        self.rows[i]
            .iter()
            .map(|x| Rat::new(x.clone(), self.den.clone()))
            .collect()
    }

    pub fn basis_rows(&self) -> Vec<Vec<Rat>> {
        (0..self.rank()).map(|i| self.basis_vector(i)).collect()
    }

    pub fn basis(&self) -> Mat {
        Mat::from_rows(self.basis_rows()).unwrap_or_else(|_| Mat::zeros(0, self.dim))
    }

    fn check_len(&self, v: &[Rat]) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::Dimension(format!(
                "vector of length {} in ambient dimension {}",
                v.len(),
                self.dim
            )));
        }
        Ok(())
    }

    /// Integer coordinates of `v` in the canonical basis.
    pub fn coords(&self, v: &[Rat]) -> Result<Vec<Int>> {
        self.check_len(v)?;
        let mut target = Vec::with_capacity(self.dim);
        for x in v {
            let y = x * &self.den;
            if !y.is_integer() {
                return Err(Error::NotInLattice);
            }
            target.push(y.to_integer());
        }
        echelon_coords(&self.rows, &self.pivots, &target).ok_or(Error::NotInLattice)
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        self.coords(v).is_ok()
    }

    /// Rational coordinates of `v` in the canonical basis; fails if `v` is
    /// outside the rational span.
    pub fn rational_coords(&self, v: &[Rat]) -> Result<Vec<Rat>> {
        self.check_len(v)?;
        let mut w: Vec<Rat> = v.iter().map(|x| x * &self.den).collect();
        let mut out = Vec::with_capacity(self.rank());
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if w[p].is_zero() {
                out.push(Rat::zero());
                continue;
            }
            let c = &w[p] / &row[p];
            for j in p..self.dim {
                if !row[j].is_zero() {
                    w[j] -= &c * &row[j];
                }
            }
            out.push(c);
        }
        if w.iter().all(Zero::is_zero) {
            Ok(out)
        } else {
            Err(Error::NotInLattice)
        }
    }

    /// Vector with the given integer coordinates.
    pub fn combine(&self, coords: &[Int]) -> Result<Vec<Rat>> {
        if coords.len() != self.rank() {
            return Err(Error::Dimension("coordinate length differs from rank".into()));
        }
        let mut acc = vec![Int::zero(); self.dim];
        for (c, row) in coords.iter().zip(&self.rows) {
            if c.is_zero() {
                continue;
            }
            for (a, x) in acc.iter_mut().zip(row) {
                if !x.is_zero() {
                    *a += c * x;
                }
            }
        }
        Ok(acc
            .into_iter()
            .map(|x| Rat::new(x, self.den.clone()))
            .collect())
    }

    pub fn pair(&self, x: &[Rat], y: &[Rat]) -> Result<Rat> {
        self.form.pair(x, y)
    }

    /// Gram matrix of the canonical basis under the ambient form.
    pub fn gram(&self) -> Mat {
        let (fd, f) = self.form.scaled_int();
        let sparse_f: Vec<Vec<(usize, &Int)>> = f
            .iter()
            .map(|r| r.iter().enumerate().filter(|(_, x)| !x.is_zero()).collect())
            .collect();
        let sparse_rows: Vec<Vec<(usize, &Int)>> = self
            .rows
            .iter()
            .map(|r| r.iter().enumerate().filter(|(_, x)| !x.is_zero()).collect())
            .collect();
        let bf: Vec<IntRow> = sparse_rows
            .iter()
            .map(|r| {
                let mut acc = vec![Int::zero(); self.dim];
                for &(i, c) in r {
                    for &(j, x) in &sparse_f[i] {
                        acc[j] += c * x;
                    }
                }
                acc
            })
            .collect();
        let scale = &fd * &self.den * &self.den;
        let k = self.rank();
        let mut g = Mat::zeros(k, k);
        for a in 0..k {
            for b in a..k {
                let mut s = Int::zero();
                for &(j, x) in &sparse_rows[b] {
                    if !bf[a][j].is_zero() {
                        s += &bf[a][j] * x;
                    }
                }
                let v = Rat::new(s, scale.clone());
                g.set(a, b, v.clone());
                g.set(b, a, v);
            }
        }
        g
    }

    fn same_ambient(&self, other: &Lattice) -> Result<()> {
        if self.dim != other.dim
            || !(Arc::ptr_eq(&self.form, &other.form) || self.form == other.form)
        {
            return Err(Error::AmbientMismatch);
        }
        Ok(())
    }

    /// Smallest lattice containing both.
    pub fn join(&self, other: &Lattice) -> Result<Lattice> {
        self.same_ambient(other)?;
        let den = self.den.lcm(&other.den);
        let s1 = &den / &self.den;
        let s2 = &den / &other.den;
        let mut rows: Vec<IntRow> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|x| x * &s1).collect())
            .collect();
        rows.extend(
            other
                .rows
                .iter()
                .map(|r| r.iter().map(|x| x * &s2).collect::<IntRow>()),
        );
        Ok(Self::from_scaled(den, &rows, self.dim, self.form.clone()))
    }

    pub fn is_sublattice_of(&self, sup: &Lattice) -> bool {
        self.same_ambient(sup).is_ok()
            && (0..self.rank()).all(|i| sup.contains(&self.basis_vector(i)))
    }

    /// Basis of the intersection of the rational spans of `self` and `gens`.
    fn span_intersection(&self, gens: &[Vec<Rat>]) -> Result<Vec<Vec<Rat>>> {
        for g in gens {
            self.check_len(g)?;
        }
        if gens.iter().all(|g| self.rational_coords(g).is_ok()) {
            return Ok(gens.to_vec());
        }
        let mut stacked: Vec<Vec<Rat>> = gens.to_vec();
        stacked.extend(self.basis_rows());
        let m = Mat::from_rows(stacked)?;
        let k = gens.len();
        Ok(m.left_nullspace()
            .iter()
            .map(|x| {
                let mut v = vec![Rat::zero(); self.dim];
                for (c, g) in x[..k].iter().zip(gens) {
                    if c.is_zero() {
                        continue;
                    }
                    for (a, y) in v.iter_mut().zip(g) {
                        *a += c * y;
                    }
                }
                v
            })
            .filter(|v| v.iter().any(|x| !x.is_zero()))
            .collect())
    }

    /// Points of `self` whose lattice coordinates lie in the rational row span of `coord_gens`.
    fn integral_points(&self, coord_gens: Vec<Vec<Rat>>) -> Result<Lattice> {
        let k = self.rank();
        if coord_gens.is_empty() || k == 0 {
            return Self::new(&[], self.form.clone());
        }
        let (r, _) = Mat::from_rows(coord_gens)?.rref();
        if r.nrows() == 0 {
            return Self::new(&[], self.form.clone());
        }
        let (d, n) = r.scaled_int();
        let c = int::congruence_kernel(&n, k, &d);
        // each c gives the integral coordinate vector (c * n) / d
        let mut pts: Vec<IntRow> = Vec::with_capacity(c.len());
        for row in &c {
            let mut acc = vec![Int::zero(); k];
            for (ci, nr) in row.iter().zip(&n) {
                if ci.is_zero() {
                    continue;
                }
                for (a, x) in acc.iter_mut().zip(nr) {
                    if !x.is_zero() {
                        *a += ci * x;
                    }
                }
            }
            for a in acc.iter_mut() {
                debug_assert!((&*a % &d).is_zero());
                *a = &*a / &d;
            }
            pts.push(acc);
        }
        let ambient: Vec<IntRow> = pts
            .iter()
            .map(|p| {
                let mut acc = vec![Int::zero(); self.dim];
                for (pi, row) in p.iter().zip(&self.rows) {
                    if pi.is_zero() {
                        continue;
                    }
                    for (a, x) in acc.iter_mut().zip(row) {
                        if !x.is_zero() {
                            *a += pi * x;
                        }
                    }
                }
                acc
            })
            .collect();
        Ok(Self::from_scaled(
            self.den.clone(),
            &ambient,
            self.dim,
            self.form.clone(),
        ))
    }

    /// `self ∩ span_Q(gens)`.
    pub fn saturate_span(&self, gens: &[Vec<Rat>]) -> Result<Lattice> {
        let v = self.span_intersection(gens)?;
        let coords = v
            .iter()
            .map(|g| self.rational_coords(g))
            .collect::<Result<Vec<_>>>()?;
        self.integral_points(coords)
    }

    /// Saturation of `self` inside `sup`: `sup ∩ span_Q(self)`.
    pub fn saturation_in(&self, sup: &Lattice) -> Result<Lattice> {
        self.same_ambient(sup)?;
        sup.saturate_span(&self.basis_rows())
    }

    /// Intersection as sets of vectors.
    pub fn meet(&self, other: &Lattice) -> Result<Lattice> {
        self.same_ambient(other)?;
        let v = self.span_intersection(&other.basis_rows())?;
        if v.is_empty() {
            return Self::new(&[], self.form.clone());
        }
        let a = self.saturate_span(&v)?;
        let b = other.saturate_span(&v)?;
        // w = c·a lies in b iff c·T^{-1} is integral, where b = T·a
        let t = Mat::from_rows(
            (0..b.rank())
                .map(|i| a.rational_coords(&b.basis_vector(i)))
                .collect::<Result<Vec<_>>>()?,
        )?;
        let tinv = t.inverse()?;
        let (d, n) = tinv.scaled_int();
        let c = int::congruence_kernel(&n, tinv.ncols(), &d);
        let gens = c
            .iter()
            .map(|row| a.combine(row))
            .collect::<Result<Vec<_>>>()?;
        Self::new(&gens, self.form.clone())
    }

    fn check_sub(&self, sup: &Lattice) -> Result<Vec<IntRow>> {
        self.same_ambient(sup)?;
        if self.rank() != sup.rank() {
            return Err(Error::RankMismatch(self.rank(), sup.rank()));
        }
        (0..self.rank())
            .map(|i| {
                sup.coords(&self.basis_vector(i))
                    .map_err(|_| Error::NotSublattice)
            })
            .collect()
    }

    /// `[sup : self]`.
    pub fn index_in(&self, sup: &Lattice) -> Result<Int> {
        let c = self.check_sub(sup)?;
        Ok(self.index_from_coords(&c, sup))
    }

    fn index_from_coords(&self, c: &[IntRow], sup: &Lattice) -> Int {
        if self.pivots == sup.pivots {
            // both bases are triangular on the same pivot columns
            let num: Int = self
                .rows
                .iter()
                .zip(&self.pivots)
                .map(|(r, &p)| r[p].clone())
                .product::<Int>()
                * num_traits::pow(sup.den.clone(), sup.rank());
            let den: Int = sup
                .rows
                .iter()
                .zip(&sup.pivots)
                .map(|(r, &p)| r[p].clone())
                .product::<Int>()
                * num_traits::pow(self.den.clone(), self.rank());
            let (q, r) = num.div_rem(&den);
            debug_assert!(r.is_zero());
            q.abs()
        } else {
            int::det_bareiss(c).abs()
        }
    }

    /// `sup / self` with a map from `sup` onto the invariant-factor coordinates.
    pub fn quotient(&self, sup: &Lattice) -> Result<QuotientMap> {
        let c = self.check_sub(sup)?;
        let k = sup.rank();
        let d = self.index_from_coords(&c, sup);
        let mut rows: Vec<IntRow> = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| if i == j { d.clone() } else { Int::zero() })
                    .collect()
            })
            .collect();
        rows.extend(c);
        let h = int::hnf(&rows, k).rows;
        let res = smith(h, k, Some(&d), true);
        let mut factors = Vec::new();
        let mut cols = Vec::new();
        let mut lifts = Vec::new();
        for (t, dt) in res.diag.iter().enumerate() {
            if *dt > Int::one() {
                factors.push(dt.clone());
                cols.push(res.v.iter().map(|row| row[t].clone()).collect::<IntRow>());
                lifts.push(sup.combine(&res.v_inv[t])?);
            }
        }
        let group = FiniteAbelianGroup::new(factors)?.with_lifts(lifts)?;
        Ok(QuotientMap {
            sup: sup.clone(),
            group,
            cols,
        })
    }

    /// Invariant factors of `sup / self`.
    pub fn quotient_invariants(&self, sup: &Lattice) -> Result<FiniteAbelianGroup> {
        Ok(self.quotient(sup)?.group)
    }

    /// Largest `n` with `v / n` in the lattice.
    pub fn divisibility(&self, v: &[Rat]) -> Result<Int> {
        let c = self.coords(v)?;
        let g = int::content(&c);
        if g.is_zero() {
            return Err(Error::ZeroVector);
        }
        Ok(g)
    }

    /// Decide whether some lattice vector has `functional(coords) = target`.
    ///
    /// The image of the functional is `gZ` for a nonnegative rational `g`;
    /// returns `g` and, when feasible, integer coordinates of a witness.
    pub fn coset_feasible(&self, functional: &[Rat], target: &Rat) -> Result<Feasibility> {
        coset_feasible(functional, target).and_then(|f| {
            if functional.len() != self.rank() {
                Err(Error::Dimension("functional length differs from rank".into()))
            } else {
                Ok(f)
            }
        })
    }
}

/// Image generator and witness for a linear functional on `Z^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Feasibility {
    pub generator: Rat,
    pub feasible: bool,
    pub witness: Option<Vec<Int>>,
}

/// `functional(Z^k) = gZ`; decides whether `target ∈ gZ` with a Bezout witness.
pub fn coset_feasible(functional: &[Rat], target: &Rat) -> Result<Feasibility> {
    let (den, nums) = clear_denominators(functional);
    // running Bezout combination: sum x_i nums_i = g
    let mut g = Int::zero();
    let mut x: Vec<Int> = vec![Int::zero(); nums.len()];
    for (i, a) in nums.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let e = g.extended_gcd(a);
        for xi in x.iter_mut().take(i) {
            *xi = &*xi * &e.x;
        }
        x[i] = e.y.clone();
        g = e.gcd;
        if g.is_negative() {
            g = -g;
            for xi in x.iter_mut() {
                *xi = -&*xi;
            }
        }
    }
    let generator = Rat::new(g.clone(), den.clone());
    if g.is_zero() {
        let feasible = target.is_zero();
        return Ok(Feasibility {
            generator,
            feasible,
            witness: feasible.then(|| vec![Int::zero(); nums.len()]),
        });
    }
    let ratio = target / &generator;
    if !ratio.is_integer() {
        return Ok(Feasibility {
            generator,
            feasible: false,
            witness: None,
        });
    }
    let k = ratio.to_integer();
    Ok(Feasibility {
        generator,
        feasible: true,
        witness: Some(x.iter().map(|xi| xi * &k).collect()),
    })
}

/// The projection `sup -> sup / sub` in invariant-factor coordinates.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    sup: Lattice,
    group: FiniteAbelianGroup,
    cols: Vec<IntRow>,
}

impl QuotientMap {
    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn sup(&self) -> &Lattice {
        &self.sup
    }

    /// Image of a vector of `sup`.
    pub fn image(&self, v: &[Rat]) -> Result<Vec<Int>> {
        let c = self.sup.coords(v)?;
        self.image_of_coords(&c)
    }

    pub fn image_of_coords(&self, c: &[Int]) -> Result<Vec<Int>> {
        let raw: Vec<Int> = self
            .cols
            .iter()
            .map(|col| {
                c.iter()
                    .zip(col)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect();
        self.group.reduce(&raw)
    }
}
