//! Smith normal form of integer relation matrices, optionally modulo `D`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::int::IntRow;

/// Result of diagonalising a relation matrix `M` (rows are relations in `Z^c`).
///
/// `diag[t]` is the `t`-th elementary divisor (zero for a free summand).
/// When tracked, `v` is the unimodular column transform with `U M V = diag`
/// and `v_inv` its inverse; both are reduced modulo `D` in the modular case.
pub(crate) struct SmithResult {
    pub diag: Vec<BigInt>,
    pub v: Vec<IntRow>,
    pub v_inv: Vec<IntRow>,
}

fn reduce(x: &mut BigInt, modulus: Option<&BigInt>) {
    if let Some(d) = modulus {
        if x.is_negative() || &*x >= d {
            *x = x.mod_floor(d);
        }
    }
}

fn identity(n: usize) -> Vec<IntRow> {
    (0..n)
        .map(|i| (0..n).map(|j| BigInt::from((i == j) as u8)).collect())
        .collect()
}

/// Diagonalise `rows` (`r x ncols`). With `modulus = Some(D)` the relations are
/// taken together with `D * Z^ncols`, which must be contained in their span's
/// saturation for the answer to describe the cokernel.
pub(crate) fn smith(
    rows: Vec<IntRow>,
    ncols: usize,
    modulus: Option<&BigInt>,
    track: bool,
) -> SmithResult {
    let mut a = rows;
    for row in a.iter_mut() {
        for x in row.iter_mut() {
            reduce(x, modulus);
        }
    }
    let r = a.len();
    let mut v = if track { identity(ncols) } else { Vec::new() };
    let mut v_inv = if track { identity(ncols) } else { Vec::new() };
    let mut diag = vec![BigInt::zero(); ncols];

    let mut t = 0;
    while t < ncols {
        // locate the smallest nonzero entry in the active block
        let mut best: Option<(usize, usize)> = None;
        'search: for i in t..r {
            for j in t..ncols {
                let x = &a[i][j];
                if x.is_zero() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bi, bj)) => x.magnitude() < a[bi][bj].magnitude(),
                };
                if better {
                    best = Some((i, j));
                    if x.magnitude().is_one() {
                        break 'search;
                    }
                }
            }
        }
        let Some((pi, pj)) = best else {
            for d in diag.iter_mut().skip(t) {
                *d = modulus.cloned().unwrap_or_default();
            }
            break;
        };
        a.swap(t, pi);
        if pj != t {
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            if track {
                for row in v.iter_mut() {
                    row.swap(t, pj);
                }
                v_inv.swap(t, pj);
            }
        }

        let p = a[t][t].clone();
        let mut dirty = false;
        for i in t + 1..r {
            if a[i][t].is_zero() {
                continue;
            }
            let q = a[i][t].div_floor(&p);
            let (head, tail) = a.split_at_mut(i);
            let pr = &head[t];
            let row = &mut tail[0];
            for j in t..ncols {
                if !pr[j].is_zero() {
                    row[j] -= &q * &pr[j];
                    reduce(&mut row[j], modulus);
                }
            }
            if !row[t].is_zero() {
                dirty = true;
            }
        }
        for j in t + 1..ncols {
            if a[t][j].is_zero() {
                continue;
            }
            let q = a[t][j].div_floor(&p);
            for row in a[t..].iter_mut() {
                if !row[t].is_zero() {
                    let s = &q * &row[t];
                    row[j] -= s;
                    reduce(&mut row[j], modulus);
                }
            }
            if track {
                for row in v.iter_mut() {
                    if !row[t].is_zero() {
                        let s = &q * &row[t];
                        row[j] -= s;
                        reduce(&mut row[j], modulus);
                    }
                }
                // inverse transform: row t of v_inv gains q * row j
                let (lo, hi) = v_inv.split_at_mut(j);
                for (x, y) in lo[t].iter_mut().zip(hi[0].iter()) {
                    if !y.is_zero() {
                        *x += &q * y;
                        reduce(x, modulus);
                    }
                }
            }
            if !a[t][j].is_zero() {
                dirty = true;
            }
        }
        if dirty {
            continue;
        }
        let g = match modulus {
            Some(d) => p.gcd(d),
            None => p.abs(),
        };
        let mut offending = None;
        'div: for i in t + 1..r {
            for j in t + 1..ncols {
                if !a[i][j].is_zero() && !a[i][j].is_multiple_of(&g) {
                    offending = Some(i);
                    break 'div;
                }
            }
        }
        if let Some(i) = offending {
            let (head, tail) = a.split_at_mut(i);
            for (x, y) in head[t].iter_mut().zip(tail[0].iter()) {
                if !y.is_zero() {
                    *x += y;
                    reduce(x, modulus);
                }
            }
            continue;
        }
        diag[t] = g;
        t += 1;
    }
    SmithResult { diag, v, v_inv }
}

/// Torsion invariant factors (> 1) and free rank of `Z^ncols / rowspan(rows)`.
pub fn cokernel_invariants(rows: &[IntRow], ncols: usize) -> (Vec<BigInt>, usize) {
    let res = smith(rows.to_vec(), ncols, None, false);
    let free = res.diag.iter().filter(|d| d.is_zero()).count();
    let torsion = res.diag.into_iter().filter(|d| *d > BigInt::one()).collect();
    (torsion, free)
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
    fn small_cokernels() {
        let (t, f) = cokernel_invariants(&rows(&[&[2, 4], &[6, 8]]), 2);
        assert_eq!(t, vec![BigInt::from(2), BigInt::from(4)]);
        assert_eq!(f, 0);
        let (t, f) = cokernel_invariants(&rows(&[&[2, 0, 0], &[0, 3, 0]]), 3);
        assert_eq!(t, vec![BigInt::from(6)]);
        assert_eq!(f, 1);
    }

    #[test]
    fn modular_matches_plain() {
        let m = rows(&[&[4, 6], &[2, 10]]);
        // determinant 28
        let plain = smith(m.clone(), 2, None, false).diag;
        let modular = smith(m, 2, Some(&BigInt::from(28)), false).diag;
        assert_eq!(plain, modular);
    }
}
