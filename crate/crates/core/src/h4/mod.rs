//! Degree-4 classes as rational vectors in `Sym^2(Λ) ⊗ Q`.
//!
//! Coordinates are indexed by monomials `x_i x_j` with `i <= j`, ordered
//! lexicographically, so there are `23 * 24 / 2 = 276` of them.

mod model;
mod mrho;
mod t4;

pub use model::{build_l, H4Lattice, H4Model};
pub use mrho::{build_m_rho_tilde, explicit_basis_check, ExplicitBasisReport};
pub use t4::{f2_rank, torsion_t4, T4Group};

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::{Arc, OnceLock};

use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bb::{self, BbSpace, ExceptionalClass, H2Class, RANK};
use crate::error::{Error, Result};
use crate::linalg::mat::clear_denominators;
use crate::linalg::{parse_rat, rat, rat_frac, Int, Mat, Rat};

pub const DIM: usize = RANK * (RANK + 1) / 2;

/// Position of the monomial `x_i x_j` (order of `i`, `j` irrelevant).
pub fn pair_index(i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * RANK - i * i.saturating_sub(1) / 2 + (j - i)
}

/// Inverse of [`pair_index`].
pub fn pair_of(idx: usize) -> (usize, usize) {
    static TABLE: OnceLock<Vec<(usize, usize)>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(DIM);
        for i in 0..RANK {
            for j in i..RANK {
                t.push((i, j));
            }
        }
        t
    })[idx]
}

/// A rational class in `Sym^2(Λ) ⊗ Q`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct H4Class(Vec<Rat>);

impl fmt::Debug for H4Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(k, x)| {
                let (i, j) = pair_of(k);
                format!("{x}*x{i}x{j}")
            })
            .collect();
        write!(f, "H4Class({})", terms.join(" + "))
    }
}

impl H4Class {
    pub fn zero() -> Self {
        H4Class(vec![Rat::zero(); DIM])
    }

    pub fn from_coords(coords: Vec<Rat>) -> Result<Self> {
        if coords.len() != DIM {
            return Err(Error::Dimension(format!(
                "H4 class needs {DIM} coordinates, got {}",
                coords.len()
            )));
        }
        Ok(H4Class(coords))
    }

    pub fn monomial(i: usize, j: usize) -> Self {
        let mut c = Self::zero();
        c.0[pair_index(i, j)] = Rat::one();
        c
    }

    pub fn coords(&self) -> &[Rat] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rat> {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.0[pair_index(i, j)]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn scaled(&self, s: &Rat) -> Self {
        H4Class(self.0.iter().map(|x| x * s).collect())
    }

    pub fn scaled_frac(&self, n: i64, d: i64) -> Self {
        self.scaled(&rat_frac(n, d))
    }

    /// Symmetric matrix `U` with `U_ii = u_ii`, `U_ij = u_ij / 2`, scaled to
    /// integers: returns `(s, 2·den·U)` so that `U = M / s`.
    fn sym_matrix(&self) -> (Int, Vec<Vec<Int>>) {
        let (d, num) = clear_denominators(&self.0);
        let mut m = vec![vec![Int::zero(); RANK]; RANK];
        for (k, x) in num.into_iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let (i, j) = pair_of(k);
            if i == j {
                m[i][i] = x * 2;
            } else {
                m[i][j] = x.clone();
                m[j][i] = x;
            }
        }
        (d * 2, m)
    }
}

impl Add for &H4Class {
    type Output = H4Class;
    fn add(self, o: &H4Class) -> H4Class {
        H4Class(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &H4Class {
    type Output = H4Class;
    fn sub(self, o: &H4Class) -> H4Class {
        H4Class(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &H4Class {
    type Output = H4Class;
    fn neg(self) -> H4Class {
        H4Class(self.0.iter().map(|a| -a).collect())
    }
}

impl Serialize for H4Class {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let map: BTreeMap<String, String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(k, x)| {
                let (i, j) = pair_of(k);
                (format!("({i},{j})"), x.to_string())
            })
            .collect();
        map.serialize(s)
    }
}

fn parse_key(k: &str) -> Result<(usize, usize)> {
    let bad = || Error::Parse(format!("bad monomial key {k:?}, expected \"(i,j)\""));
    let inner = k
        .trim()
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(bad)?;
    let (a, b) = inner.split_once(',').ok_or_else(bad)?;
    let i: usize = a.trim().parse().map_err(|_| bad())?;
    let j: usize = b.trim().parse().map_err(|_| bad())?;
    if i >= RANK || j >= RANK {
        return Err(bad());
    }
    Ok((i, j))
}

impl<'de> Deserialize<'de> for H4Class {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let map: BTreeMap<String, String> = BTreeMap::deserialize(d)?;
        let mut c = H4Class::zero();
        for (k, v) in map {
            let (i, j) = parse_key(&k).map_err(D::Error::custom)?;
            c.0[pair_index(i, j)] += parse_rat(&v).map_err(D::Error::custom)?;
        }
        Ok(c)
    }
}

/// The class `a·b` in `Sym^2(Λ)`.
pub fn sym2_embed(a: &H2Class, b: &H2Class) -> H4Class {
    let (a, b) = (a.coords(), b.coords());
    let mut c = vec![0i64; DIM];
    for i in 0..RANK {
        if a[i] == 0 && b[i] == 0 {
            continue;
        }
        c[pair_index(i, i)] += a[i] * b[i];
        for j in i + 1..RANK {
            c[pair_index(i, j)] += a[i] * b[j] + a[j] * b[i];
        }
    }
    H4Class(c.into_iter().map(rat).collect())
}

/// Column-sparse view of the Gram matrix.
fn gram_columns() -> &'static Vec<Vec<(usize, i64)>> {
    static COLS: OnceLock<Vec<Vec<(usize, i64)>>> = OnceLock::new();
    COLS.get_or_init(|| {
        let g = BbSpace::get().gram_i64();
        (0..RANK)
            .map(|c| (0..RANK).filter(|&b| g[b][c] != 0).map(|b| (b, g[b][c])).collect())
            .collect()
    })
}

fn times_gram(m: &[Vec<Int>]) -> Vec<Vec<Int>> {
    let cols = gram_columns();
    m.iter()
        .map(|row| {
            (0..RANK)
                .map(|c| {
                    let mut s = Int::zero();
                    for &(b, g) in &cols[c] {
                        if !row[b].is_zero() {
                            s += &row[b] * g;
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

/// Fujiki pairing on `Sym^2(Λ) ⊗ Q`:
/// `(x_i x_j)(x_k x_l) = G_ij G_kl + G_ik G_jl + G_il G_jk`.
///
/// Evaluated as `tr(UG) tr(VG) + 2 tr(UGVG)` with `U`, `V` the symmetric
/// matrices of the two quadratic forms.
pub fn fujiki_pair(u: &H4Class, v: &H4Class) -> Rat {
    let (su, mu) = u.sym_matrix();
    let (sv, mv) = v.sym_matrix();
    let ug = times_gram(&mu);
    let vg = times_gram(&mv);
    let tr_u: Int = (0..RANK).map(|a| ug[a][a].clone()).sum();
    let tr_v: Int = (0..RANK).map(|a| vg[a][a].clone()).sum();
    let mut cross = Int::zero();
    for a in 0..RANK {
        for c in 0..RANK {
            if !ug[a][c].is_zero() && !vg[c][a].is_zero() {
                cross += &ug[a][c] * &vg[c][a];
            }
        }
    }
    Rat::new(tr_u * tr_v + cross * 2, su * sv)
}

/// Precomputed `v · (α β)` for a fixed `v`:
/// `tr(VG) b(α,β) + 2 (Gα)^T V (Gβ)`.
pub struct ProductPairing {
    scale: Int,
    m: Vec<Vec<Int>>,
    trace: Int,
}

impl ProductPairing {
    pub fn new(v: &H4Class) -> Self {
        let (scale, m) = v.sym_matrix();
        let mg = times_gram(&m);
        let trace = (0..RANK).map(|i| mg[i][i].clone()).sum();
        ProductPairing { scale, m, trace }
    }

    pub fn eval(&self, a: &H2Class, b: &H2Class) -> Rat {
        let sp = BbSpace::get();
        let ga = sp.pairings(a);
        let gb = sp.pairings(b);
        let mut quad = Int::zero();
        for i in 0..RANK {
            if ga[i] == 0 {
                continue;
            }
            for j in 0..RANK {
                if gb[j] != 0 && !self.m[i][j].is_zero() {
                    quad += &self.m[i][j] * (ga[i] * gb[j]);
                }
            }
        }
        Rat::new(&self.trace * bb::bb_form(a, b) + quad * 2, self.scale.clone())
    }
}

/// `v · (α β)` for degree-2 classes `α`, `β`.
pub fn fujiki_with_product(v: &H4Class, a: &H2Class, b: &H2Class) -> Rat {
    ProductPairing::new(v).eval(a, b)
}

/// The Fujiki form as a `276 x 276` matrix on monomial coordinates.
pub fn fujiki_form() -> Arc<Mat> {
    static FORM: OnceLock<Arc<Mat>> = OnceLock::new();
    FORM.get_or_init(|| {
        let g = BbSpace::get().gram_i64();
        let mut data = Vec::with_capacity(DIM * DIM);
        for a in 0..DIM {
            let (i, j) = pair_of(a);
            for b in 0..DIM {
                let (k, l) = pair_of(b);
                data.push(rat(g[i][j] * g[k][l] + g[i][k] * g[j][l] + g[i][l] * g[j][k]));
            }
        }
        Arc::new(Mat::new(DIM, DIM, data).expect("square"))
    })
    .clone()
}

/// `q = Σ (G^{-1})_{ij} x_i x_j`, the class of the inverse BB form.
pub fn build_q() -> H4Class {
    static Q: OnceLock<H4Class> = OnceLock::new();
    Q.get_or_init(|| {
        let ginv = BbSpace::get().gram().inverse().expect("BB form is nondegenerate");
        let mut c = H4Class::zero();
        for i in 0..RANK {
            for j in i..RANK {
                let x = ginv.get(i, j);
                c.0[pair_index(i, j)] = if i == j { x.clone() } else { x * rat(2) };
            }
        }
        c
    })
    .clone()
}

/// `Σ_{i,j} b_ij â_i â_j` over a basis `â` of `δ^⊥` with `B = A^{-1}`.
fn dual_sum(d: &ExceptionalClass) -> Result<H4Class> {
    let basis = bb::orth_complement_basis(d)?;
    let b = bb::gram_of(&basis).inverse()?;
    let mut acc = H4Class::zero();
    for i in 0..basis.len() {
        for j in 0..basis.len() {
            let bij = b.get(i, j);
            if bij.is_zero() {
                continue;
            }
            acc = &acc + &sym2_embed(&basis[i], &basis[j]).scaled(bij);
        }
    }
    Ok(acc)
}

/// `q` computed from an exceptional class: `Σ b_ij â_i â_j − ½ δ²`.
pub fn build_q_from(d: &ExceptionalClass) -> Result<H4Class> {
    let dd = sym2_embed(d.class(), d.class());
    Ok(&dual_sum(d)? - &dd.scaled_frac(1, 2))
}

/// `v_δ(α) = ½ α(α − δ)`.
pub fn build_v_delta(d: &ExceptionalClass, a: &H2Class) -> H4Class {
    (&sym2_embed(a, a) - &sym2_embed(a, d.class())).scaled_frac(1, 2)
}

/// `v_0(δ) = (1/10)(δ² + ½ Σ b_ij â_i â_j)`.
pub fn build_v0(d: &ExceptionalClass) -> Result<H4Class> {
    let dd = sym2_embed(d.class(), d.class());
    let s = dual_sum(d)?;
    Ok((&dd + &s.scaled_frac(1, 2)).scaled_frac(1, 10))
}

/// `(2/5) q`.
pub fn two_fifths_q() -> H4Class {
    build_q().scaled_frac(2, 5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;

    /// Four-index expansion of the Fujiki relation over monomials.
    fn fujiki_oracle(u: &H4Class, v: &H4Class) -> Rat {
        let g = BbSpace::get().gram_i64();
        let mut s = Rat::zero();
        for (a, x) in u.coords().iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let (i, j) = pair_of(a);
            for (b, y) in v.coords().iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let (k, l) = pair_of(b);
                let val = g[i][j] * g[k][l] + g[i][k] * g[j][l] + g[i][l] * g[j][k];
                s += x * y * rat(val);
            }
        }
        s
    }

    #[test]
    fn index_roundtrip() {
        let mut k = 0;
        for i in 0..RANK {
            for j in i..RANK {
                assert_eq!(pair_index(i, j), k);
                assert_eq!(pair_index(j, i), k);
                assert_eq!(pair_of(k), (i, j));
                k += 1;
            }
        }
        assert_eq!(k, DIM);
        assert_eq!(DIM, 276);
    }

    #[test]
    fn embed_examples() {
        let e1 = H2Class::e(1);
        let f1 = H2Class::f(1);
        assert_eq!(sym2_embed(&e1, &e1), H4Class::monomial(0, 0));
        let c = sym2_embed(&(&e1 + &f1), &e1);
        assert_eq!(c, &H4Class::monomial(0, 0) + &H4Class::monomial(0, 1));
    }

    #[test]
    fn fast_pairing_matches_oracle() {
        let mut r = sample::rng(5);
        for _ in 0..20 {
            let a = sample::random_class(&mut r, 3);
            let b = sample::random_class(&mut r, 3);
            let c = sample::random_class(&mut r, 3);
            let d = sample::random_class(&mut r, 3);
            let u = &sym2_embed(&a, &b) + &build_q().scaled_frac(1, 3);
            let v = sym2_embed(&c, &d);
            assert_eq!(fujiki_pair(&u, &v), fujiki_oracle(&u, &v));
            assert_eq!(fujiki_with_product(&u, &c, &d), fujiki_oracle(&u, &v));
        }
    }

    #[test]
    fn basic_constants() {
        let d0 = BbSpace::get().delta0();
        let dd = sym2_embed(d0.class(), d0.class());
        assert_eq!(fujiki_pair(&dd, &dd), rat(12));
        let q = build_q();
        assert_eq!(fujiki_pair(&q, &dd), rat(-50));
        assert_eq!(fujiki_pair(&q, &q), rat(575));
        let tq = two_fifths_q();
        assert_eq!(fujiki_pair(&tq, &tq), rat(92));
        let v0 = build_v0(&d0).unwrap();
        assert_eq!(fujiki_pair(&v0, &dd), rat(-1));
        assert_eq!(fujiki_pair(&v0, &v0), rat(1));
        assert_eq!(build_q_from(&d0).unwrap(), q);
        assert_eq!(v0.scaled(&rat(8)), &tq + &dd);
    }

    #[test]
    fn q_is_delta_independent() {
        let mut r = sample::rng(9);
        for _ in 0..3 {
            let d = sample::random_exceptional(&mut r);
            assert_eq!(build_q_from(&d).unwrap(), build_q());
        }
    }

    #[test]
    fn sparse_json() {
        let c = H4Class::monomial(0, 1).scaled_frac(-3, 4);
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"{"(0,1)":"-3/4"}"#);
        let back: H4Class = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }
}
