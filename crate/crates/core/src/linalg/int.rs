//! Dense integer kernels on rows of `BigInt`.
//!
//! All routines use row vectors. Matrices are `&[IntRow]` with an explicit
//! column count so that empty matrices keep their width.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IntRow = Vec<BigInt>;

/// Row echelon form in Hermite normalisation: positive pivots, entries above
/// a pivot reduced into `[0, pivot)`, zero rows dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon {
    pub rows: Vec<IntRow>,
    pub pivots: Vec<usize>,
    pub ncols: usize,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

fn sub_multiple(v: &mut [BigInt], q: &BigInt, p: &[BigInt], from: usize) {
    for j in from..v.len() {
        if !p[j].is_zero() {
            v[j] -= q * &p[j];
        }
    }
}

fn negate(v: &mut [BigInt]) {
    for x in v.iter_mut() {
        if !x.is_zero() {
            *x = -&*x;
        }
    }
}

/// Reduce the entries of `row` right of `col` modulo the pivots already in
/// `slots`, in increasing column order.
fn reduce_tail(slots: &[Option<IntRow>], row: &mut [BigInt], col: usize) {
    for c in col + 1..row.len() {
        if row[c].is_zero() {
            continue;
        }
        if let Some(p) = &slots[c] {
            let q = row[c].div_floor(&p[c]);
            if !q.is_zero() {
                sub_multiple(row, &q, p, c);
            }
        }
    }
}

fn insert(slots: &mut [Option<IntRow>], mut v: IntRow) {
    let n = v.len();
    let mut c = 0;
    loop {
        while c < n && v[c].is_zero() {
            c += 1;
        }
        if c == n {
            return;
        }
        match slots[c].take() {
            None => {
                if v[c].is_negative() {
                    negate(&mut v);
                }
                reduce_tail(slots, &mut v, c);
                slots[c] = Some(v);
                return;
            }
            Some(p) => {
                let a = p[c].clone();
                let (q, r) = v[c].div_mod_floor(&a);
                if r.is_zero() {
                    sub_multiple(&mut v, &q, &p, c);
                    slots[c] = Some(p);
                } else {
                    let b = v[c].clone();
                    let ext = a.extended_gcd(&b);
                    let (g, x, y) = (ext.gcd, ext.x, ext.y);
                    let a_g = &a / &g;
                    let b_g = &b / &g;
                    let mut new_p = vec![BigInt::zero(); n];
                    let mut new_v = vec![BigInt::zero(); n];
                    for j in c..n {
                        if p[j].is_zero() && v[j].is_zero() {
                            continue;
                        }
                        new_p[j] = &x * &p[j] + &y * &v[j];
                        new_v[j] = &a_g * &v[j] - &b_g * &p[j];
                    }
                    if new_p[c].is_negative() {
                        negate(&mut new_p);
                    }
                    reduce_tail(slots, &mut new_p, c);
                    slots[c] = Some(new_p);
                    v = new_v;
                }
                c += 1;
            }
        }
    }
}

/// Hermite normal form of the Z-row-span of `rows`.
///
/// Rows are inserted in order; putting rows of a known full-rank sublattice
/// (e.g. `D * I`) first keeps intermediate entries bounded by `D`.
pub fn hnf(rows: &[IntRow], ncols: usize) -> Echelon {
    let mut slots: Vec<Option<IntRow>> = vec![None; ncols];
    for r in rows {
        debug_assert_eq!(r.len(), ncols);
        if r.iter().all(Zero::is_zero) {
            continue;
        }
        insert(&mut slots, r.clone());
    }
    let mut out_rows = Vec::new();
    let mut pivots = Vec::new();
    for (c, s) in slots.into_iter().enumerate() {
        if let Some(r) = s {
            out_rows.push(r);
            pivots.push(c);
        }
    }
    for k in 0..out_rows.len() {
        let pc = pivots[k];
        let (head, tail) = out_rows.split_at_mut(k);
        let pivot_row = &tail[0];
        for row in head.iter_mut() {
            let q = row[pc].div_floor(&pivot_row[pc]);
            if !q.is_zero() {
                sub_multiple(row, &q, pivot_row, pc);
            }
        }
    }
    Echelon {
        rows: out_rows,
        pivots,
        ncols,
    }
}

/// Basis of the left kernel `{x in Z^r : x * M = 0}`, saturated in `Z^r`.
pub fn left_kernel(m: &[IntRow], ncols: usize) -> Vec<IntRow> {
    let r = m.len();
    let aug: Vec<IntRow> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut a = row.clone();
            a.extend((0..r).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            a
        })
        .collect();
    let e = hnf(&aug, ncols + r);
    e.rows
        .into_iter()
        .zip(e.pivots)
        .filter(|(_, p)| *p >= ncols)
        .map(|(row, _)| row[ncols..].to_vec())
        .collect()
}

pub fn transpose(m: &[IntRow], ncols: usize) -> Vec<IntRow> {
    (0..ncols)
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

/// Basis of the right kernel `{x in Z^c : M * x = 0}`.
pub fn right_kernel(m: &[IntRow], ncols: usize) -> Vec<IntRow> {
    let t = transpose(m, ncols);
    left_kernel(&t, m.len())
}

/// Determinant by Bareiss fraction-free elimination.
pub fn det_bareiss(m: &[IntRow]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<IntRow> = m.to_vec();
    let mut negative = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    negative = !negative;
                }
                None => return BigInt::zero(),
            }
        }
        let (head, tail) = a.split_at_mut(k + 1);
        let pivot_row = &head[k];
        let pkk = &pivot_row[k];
        let trivial_scale = *pkk == prev;
        for row in tail.iter_mut() {
            let aik = std::mem::take(&mut row[k]);
            if aik.is_zero() {
                if trivial_scale {
                    continue;
                }
                for j in k + 1..n {
                    if !row[j].is_zero() {
                        row[j] = (pkk * &row[j]) / &prev;
                    }
                }
            } else {
                for j in k + 1..n {
                    let t = pkk * &row[j] - &aik * &pivot_row[j];
                    row[j] = if prev.is_one() { t } else { t / &prev };
                }
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negative {
        -d
    } else {
        d
    }
}

/// Fraction-free Gauss–Jordan elimination (Bareiss–Montante).
///
/// On return the first `pivots.len()` rows are the nonzero rows; every pivot
/// column is zero outside its pivot row, and all pivot entries are equal.
pub fn rref_fraction_free(rows: &mut Vec<IntRow>, ncols: usize) -> Vec<usize> {
    let m = rows.len();
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..ncols {
        if r == m {
            break;
        }
        let best = (r..m)
            .filter(|&i| !rows[i][c].is_zero())
            .min_by_key(|&i| rows[i][c].bits());
        let Some(i) = best else { continue };
        rows.swap(r, i);
        let pivot_row = rows[r].clone();
        let p = pivot_row[c].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let aic = std::mem::take(&mut row[c]);
            for j in 0..ncols {
                if j == c {
                    continue;
                }
                if aic.is_zero() {
                    if row[j].is_zero() {
                        continue;
                    }
                    row[j] = (&p * &row[j]) / &prev;
                } else {
                    let t = &p * &row[j] - &aic * &pivot_row[j];
                    row[j] = if prev.is_one() { t } else { t / &prev };
                }
            }
        }
        prev = p;
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Basis (HNF) of `{c in Z^k : c * N ≡ 0 (mod d)}` for a `k x m` integer matrix `N`.
///
/// The result always contains `d * Z^k`, which keeps every intermediate
/// entry below `d`.
pub fn congruence_kernel(n: &[IntRow], ncols: usize, d: &BigInt) -> Vec<IntRow> {
    let k = n.len();
    let scaled_identity: Vec<IntRow> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| if i == j { d.clone() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    let mut basis: Vec<IntRow> = (0..k)
        .map(|i| (0..k).map(|j| BigInt::from((i == j) as u8)).collect())
        .collect();
    if d.is_one() {
        return basis;
    }
    for j in 0..ncols {
        let residues: Vec<BigInt> = basis
            .iter()
            .map(|b| {
                let mut s = BigInt::zero();
                for (bi, row) in b.iter().zip(n) {
                    if !bi.is_zero() && !row[j].is_zero() {
                        s += bi * &row[j];
                    }
                }
                s.mod_floor(d)
            })
            .collect();
        if residues.iter().all(Zero::is_zero) {
            continue;
        }
        let mut col: Vec<IntRow> = residues.into_iter().map(|r| vec![r]).collect();
        col.push(vec![d.clone()]);
        let ker = left_kernel(&col, 1);
        let mut gens = scaled_identity.clone();
        for x in &ker {
            let mut v = vec![BigInt::zero(); k];
            for (xi, b) in x[..k].iter().zip(&basis) {
                if xi.is_zero() {
                    continue;
                }
                for (vj, bj) in v.iter_mut().zip(b) {
                    *vj += xi * bj;
                }
            }
            gens.push(v);
        }
        basis = hnf(&gens, k).rows;
    }
    basis
}

pub fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(v: &[&[i64]]) -> Vec<IntRow> {
        v.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn hnf_of_small_matrix() {
        let e = hnf(&rows(&[&[2, 4], &[6, 8]]), 2);
        assert_eq!(e.rows, rows(&[&[2, 0], &[0, 4]]));
        assert_eq!(e.pivots, vec![0, 1]);
    }

    #[test]
    fn hnf_drops_dependent_rows() {
        let e = hnf(&rows(&[&[1, 2, 3], &[2, 4, 6], &[0, 0, 0]]), 3);
        assert_eq!(e.rows, rows(&[&[1, 2, 3]]));
    }

    #[test]
    fn left_kernel_of_column() {
        let k = left_kernel(&rows(&[&[3], &[5]]), 1);
        assert_eq!(k.len(), 1);
        let x = &k[0];
        assert_eq!(&x[0] * 3 + &x[1] * 5, BigInt::zero());
        assert_eq!(content(x), BigInt::one());
    }

    #[test]
    fn bareiss_matches_cofactor() {
        let m = rows(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]]);
        assert_eq!(det_bareiss(&m), BigInt::from(4));
        let z = rows(&[&[0, 1], &[1, 0]]);
        assert_eq!(det_bareiss(&z), BigInt::from(-1));
        let s = rows(&[&[1, 2], &[2, 4]]);
        assert_eq!(det_bareiss(&s), BigInt::zero());
    }

    #[test]
    fn congruence_kernel_simple() {
        // c * (1, 3) ≡ 0 mod 4 for c in Z^1: c ≡ 0 mod 4
        let b = congruence_kernel(&rows(&[&[1, 3]]), 2, &BigInt::from(4));
        assert_eq!(b, rows(&[&[4]]));
        // c1 + c2 ≡ 0 mod 2
        let b = congruence_kernel(&rows(&[&[1], &[1]]), 1, &BigInt::from(2));
        assert_eq!(b, rows(&[&[1, 1], &[0, 2]]));
    }

    #[test]
    fn rref_fraction_free_rank() {
        let mut m = rows(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        let piv = rref_fraction_free(&mut m, 3);
        assert_eq!(piv, vec![0, 1]);
        assert!(m[0][1].is_zero() && m[1][0].is_zero());
        assert_eq!(m[0][0], m[1][1]);
    }
}
