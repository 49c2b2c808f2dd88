//! The Beauville–Bogomolov lattice `Λ = U^3 ⊕ E8(-1)^2 ⊕ <-2>`.
//!
//! Basis order (frozen): indices 0..6 are `e1, f1, e2, f2, e3, f3` (three
//! hyperbolic planes), 6..14 and 14..22 are two copies of `E8(-1)` in
//! Bourbaki labelling, and 22 is `δ0` with `b(δ0, δ0) = -2`.
//!
//! The `E8(-1)` block has diagonal `-2` and entry `+1` on the Dynkin edges
//! 1-3, 3-4, 4-5, 5-6, 6-7, 7-8, 2-4.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::{Arc, OnceLock};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{int, rat, Int, Lattice, Mat, Rat};

pub const RANK: usize = 23;
pub const DELTA0: usize = 22;

const E8_EDGES: [(usize, usize); 7] = [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4)];

fn build_gram() -> [[i64; RANK]; RANK] {
    let mut g = [[0i64; RANK]; RANK];
    for k in 0..3 {
        g[2 * k][2 * k + 1] = 1;
        g[2 * k + 1][2 * k] = 1;
    }
    for base in [6, 14] {
        for i in 0..8 {
            g[base + i][base + i] = -2;
        }
        for (a, b) in E8_EDGES {
            g[base + a - 1][base + b - 1] = 1;
            g[base + b - 1][base + a - 1] = 1;
        }
    }
    g[DELTA0][DELTA0] = -2;
    g
}

/// The lattice `Λ` with its frozen Gram matrix.
pub struct BbSpace {
    gram: [[i64; RANK]; RANK],
    form: Arc<Mat>,
    lattice: Lattice,
}

impl BbSpace {
    pub fn get() -> &'static BbSpace {
        static SPACE: OnceLock<BbSpace> = OnceLock::new();
        SPACE.get_or_init(|| {
            let gram = build_gram();
            let rows: Vec<&[i64]> = gram.iter().map(|r| r.as_slice()).collect();
            let form = Arc::new(Mat::from_i64(&rows));
            let lattice = Lattice::standard(form.clone()).expect("symmetric gram");
            BbSpace {
                gram,
                form,
                lattice,
            }
        })
    }

    pub fn gram(&self) -> &Mat {
        &self.form
    }

    pub fn gram_i64(&self) -> &[[i64; RANK]; RANK] {
        &self.gram
    }

    pub fn form(&self) -> Arc<Mat> {
        self.form.clone()
    }

    /// `Λ` as the standard lattice `Z^23`.
    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn delta0(&self) -> ExceptionalClass {
        ExceptionalClass(H2Class::delta0())
    }

    /// `b(a, b)`.
    pub fn pair(&self, a: &H2Class, b: &H2Class) -> i64 {
        let mut s = 0i64;
        for (i, x) in a.0.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                let g = self.gram[i][j];
                if g != 0 && *y != 0 {
                    s += x * g * y;
                }
            }
        }
        s
    }

    /// `G a`, i.e. the pairings `b(a, x_i)` with all basis vectors.
    pub fn pairings(&self, a: &H2Class) -> [i64; RANK] {
        let mut out = [0i64; RANK];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..RANK).map(|j| self.gram[i][j] * a.0[j]).sum();
        }
        out
    }
}

/// Integer vector in the frozen basis of `Λ`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct H2Class([i64; RANK]);

impl TryFrom<Vec<i64>> for H2Class {
    type Error = Error;

    fn try_from(v: Vec<i64>) -> Result<Self> {
        H2Class::new(&v)
    }
}

impl From<H2Class> for Vec<i64> {
    fn from(c: H2Class) -> Self {
        c.0.to_vec()
    }
}

impl fmt::Debug for H2Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H2Class{:?}", self.0)
    }
}

impl H2Class {
    pub fn new(coords: &[i64]) -> Result<Self> {
        let arr: [i64; RANK] = coords.try_into().map_err(|_| {
            Error::Dimension(format!("H2 class needs {RANK} coordinates, got {}", coords.len()))
        })?;
        Ok(H2Class(arr))
    }

    pub fn zero() -> Self {
        H2Class([0; RANK])
    }

    pub fn basis(i: usize) -> Self {
        let mut c = [0; RANK];
        c[i] = 1;
        H2Class(c)
    }

    /// `e_k` of the `k`-th hyperbolic plane, `k` in 1..=3.
    pub fn e(k: usize) -> Self {
        Self::basis(2 * (k - 1))
    }

    /// `f_k` of the `k`-th hyperbolic plane, `k` in 1..=3.
    pub fn f(k: usize) -> Self {
        Self::basis(2 * (k - 1) + 1)
    }

    pub fn delta0() -> Self {
        Self::basis(DELTA0)
    }

    pub fn coords(&self) -> &[i64; RANK] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn scaled(&self, k: i64) -> Self {
        H2Class(self.0.map(|x| x * k))
    }

    pub fn to_rat(&self) -> Vec<Rat> {
        self.0.iter().map(|&x| rat(x)).collect()
    }

    pub fn to_int(&self) -> Vec<Int> {
        self.0.iter().map(|&x| Int::from(x)).collect()
    }

    pub fn content(&self) -> i64 {
        self.0.iter().fold(0i64, |g, x| g.gcd(x))
    }

    /// Self-intersection `b(a, a)`.
    pub fn square(&self) -> i64 {
        bb_form(self, self)
    }
}

impl Add for &H2Class {
    type Output = H2Class;
    fn add(self, o: &H2Class) -> H2Class {
        let mut c = self.0;
        for (a, b) in c.iter_mut().zip(o.0) {
            *a += b;
        }
        H2Class(c)
    }
}

impl Sub for &H2Class {
    type Output = H2Class;
    fn sub(self, o: &H2Class) -> H2Class {
        let mut c = self.0;
        for (a, b) in c.iter_mut().zip(o.0) {
            *a -= b;
        }
        H2Class(c)
    }
}

impl Neg for &H2Class {
    type Output = H2Class;
    fn neg(self) -> H2Class {
        H2Class(self.0.map(|x| -x))
    }
}

/// An exceptional class: primitive, even, of square `-2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ExceptionalClass(H2Class);

impl ExceptionalClass {
    pub fn new(class: H2Class) -> Result<Self> {
        if is_exceptional(&class) {
            Ok(ExceptionalClass(class))
        } else {
            Err(Error::NotExceptional(format!("{class:?}")))
        }
    }

    pub fn class(&self) -> &H2Class {
        &self.0
    }

    pub fn is_delta0(&self) -> bool {
        self.0 == H2Class::delta0()
    }
}

pub fn bb_form(a: &H2Class, b: &H2Class) -> i64 {
    BbSpace::get().pair(a, b)
}

pub fn is_primitive(a: &H2Class) -> Result<bool> {
    if a.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(a.content() == 1)
}

/// Even: all pairings with `Λ` are even. Only defined for primitive classes.
pub fn is_even(a: &H2Class) -> Result<bool> {
    if !is_primitive(a)? {
        return Err(Error::NotPrimitive);
    }
    Ok(BbSpace::get().pairings(a).iter().all(|x| x % 2 == 0))
}

pub fn is_odd(a: &H2Class) -> Result<bool> {
    is_even(a).map(|e| !e)
}

pub fn is_exceptional(a: &H2Class) -> bool {
    matches!(is_primitive(a), Ok(true))
        && a.square() == -2
        && BbSpace::get().pairings(a).iter().all(|x| x % 2 == 0)
}

/// `δ' = 2 a_hat + c δ0` for `a_hat ⊥ δ0`, `c` odd, `2 b(a_hat, a_hat) = c^2 - 1`.
pub fn make_exceptional(a_hat: &H2Class, c: i64) -> Result<ExceptionalClass> {
    if a_hat.coords()[DELTA0] != 0 {
        return Err(Error::Precondition("a_hat must be orthogonal to δ0".into()));
    }
    if c % 2 == 0 {
        return Err(Error::Precondition(format!("c = {c} must be odd")));
    }
    let n = a_hat.square();
    if 2 * n != c * c - 1 {
        return Err(Error::Precondition(format!(
            "2 b(a_hat, a_hat) = {} differs from c^2 - 1 = {}",
            2 * n,
            c * c - 1
        )));
    }
    let d = &a_hat.scaled(2) + &H2Class::delta0().scaled(c);
    ExceptionalClass::new(d)
}

/// The Assumption on a polarization: odd, or even with `(10 + b0)/8` even.
pub fn assumption_holds(l0: &H2Class) -> Result<bool> {
    if !is_primitive(l0)? {
        return Err(Error::NotPrimitive);
    }
    let b0 = l0.square();
    if b0 <= 0 {
        return Err(Error::NotPositive(b0.to_string()));
    }
    if !is_even(l0)? {
        return Ok(true);
    }
    let t = 10 + b0;
    if t % 8 != 0 {
        return Err(Error::CheckFailed(format!(
            "(10 + {b0})/8 is not an integer for an even class"
        )));
    }
    Ok((t / 8) % 2 == 0)
}

/// Integral basis of `d^⊥` in `Λ` (Hermite normal form), with a unimodularity check.
pub fn orth_complement_basis(d: &ExceptionalClass) -> Result<Vec<H2Class>> {
    if !is_exceptional(d.class()) {
        return Err(Error::NotExceptional(format!("{:?}", d.class())));
    }
    let col: Vec<Vec<Int>> = BbSpace::get()
        .pairings(d.class())
        .iter()
        .map(|&x| vec![Int::from(x)])
        .collect();
    let ker = int::left_kernel(&col, 1);
    let basis = ker
        .iter()
        .map(|r| {
            let v: Vec<i64> = r
                .iter()
                .map(|x| i64::try_from(x).map_err(|_| Error::Degenerate("coordinate overflow".into())))
                .collect::<Result<_>>()?;
            H2Class::new(&v)
        })
        .collect::<Result<Vec<_>>>()?;
    if basis.len() != RANK - 1 {
        return Err(Error::Degenerate(format!(
            "orthogonal complement has rank {}",
            basis.len()
        )));
    }
    let det = gram_of(&basis).determinant()?;
    if det != rat(1) && det != rat(-1) {
        return Err(Error::CheckFailed(format!(
            "Gram determinant of the orthogonal complement is {det}"
        )));
    }
    Ok(basis)
}

/// Gram matrix of a list of classes.
pub fn gram_of(classes: &[H2Class]) -> Mat {
    let n = classes.len();
    let mut g = Mat::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = rat(bb_form(&classes[i], &classes[j]));
            g.set(i, j, v.clone());
            g.set(j, i, v);
        }
    }
    g
}

/// Split `a = a_perp + t d` with `a_perp ⊥ d`. Since `Λ = Zd ⊕ d^⊥`, `t = -b(a,d)/2` is integral.
pub fn split_along(d: &ExceptionalClass, a: &H2Class) -> (H2Class, i64) {
    let t = -bb_form(a, d.class()) / 2;
    (a - &d.class().scaled(t), t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gram_shape() {
        let sp = BbSpace::get();
        let g = sp.gram();
        assert!(g.is_symmetric());
        assert_eq!(g.determinant().unwrap(), rat(2));
        assert_eq!(g.signature().unwrap(), (3, 20));
        for i in 0..RANK {
            assert_eq!(sp.gram_i64()[i][i] % 2, 0);
        }
    }

    #[test]
    fn k3_part_is_even_unimodular() {
        let basis = orth_complement_basis(&BbSpace::get().delta0()).unwrap();
        let expected: Vec<H2Class> = (0..22).map(H2Class::basis).collect();
        assert_eq!(basis, expected);
        let g = gram_of(&basis);
        assert_eq!(g.signature().unwrap(), (3, 19));
    }

    #[test]
    fn predicates() {
        let e1 = H2Class::e(1);
        let f1 = H2Class::f(1);
        let d = H2Class::delta0();
        assert_eq!(bb_form(&e1, &f1), 1);
        assert_eq!(bb_form(&d, &d), -2);
        let l = &(&e1 + &f1).scaled(2) + &d;
        assert_eq!(l.square(), 6);
        assert!(is_even(&l).unwrap());
        assert!(!is_even(&(&e1 + &f1)).unwrap());
        assert!(is_even(&e1.scaled(2)).is_err());
        assert!(is_exceptional(&d));
        assert!(!is_exceptional(&e1));
    }

    #[test]
    fn exceptional_construction() {
        let a = &H2Class::e(1) + &H2Class::f(1).scaled(2);
        let d = make_exceptional(&a, 3).unwrap();
        assert_eq!(d.class().square(), -2);
        assert!(make_exceptional(&H2Class::e(1), 3).is_err());
        assert_eq!(make_exceptional(&H2Class::zero(), 1).unwrap(), BbSpace::get().delta0());
        let basis = orth_complement_basis(&d).unwrap();
        assert!(basis.iter().all(|x| bb_form(x, d.class()) == 0));
    }

    #[test]
    fn json_is_integer_array() {
        let s = serde_json::to_string(&H2Class::delta0()).unwrap();
        assert!(s.starts_with("[0,0,"));
        let back: H2Class = serde_json::from_str(&s).unwrap();
        assert_eq!(back, H2Class::delta0());
        assert!(serde_json::from_str::<H2Class>("[1,2]").is_err());
    }
}
