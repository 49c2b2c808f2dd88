//! The torsion group `T^4 = L / Sym^2(Λ)` and its structure maps.

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::{build_v0, build_v_delta, fujiki_with_product, H4Class, H4Lattice, H4Model};
use crate::bb::{ExceptionalClass, H2Class, RANK};
use crate::error::{Error, Result};
use crate::linalg::{FiniteAbelianGroup, Int, Lattice, QuotientMap, Rat};

/// Rank of a matrix over `F_2` (entries 0/1).
pub fn f2_rank(rows: &[Vec<u8>]) -> usize {
    f2_reduce(rows.to_vec()).len()
}

fn f2_reduce(mut rows: Vec<Vec<u8>>) -> Vec<Vec<u8>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] & 1 == 1) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] & 1 == 1 {
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x ^= y;
                }
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

/// Basis of `{x in F_2^n : x M = 0}` for an `n x m` matrix `M` over `F_2`.
pub fn f2_left_kernel(rows: &[Vec<u8>]) -> Vec<Vec<u8>> {
    let n = rows.len();
    let aug: Vec<Vec<u8>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut a: Vec<u8> = r.iter().map(|x| x & 1).collect();
            a.extend((0..n).map(|j| (i == j) as u8));
            a
        })
        .collect();
    let m = rows.first().map_or(0, Vec::len);
    f2_reduce(aug)
        .into_iter()
        .filter(|r| r[..m].iter().all(|&x| x == 0))
        .map(|r| r[m..].to_vec())
        .collect()
}

/// `T^4` with the images `v̄(x_i)`, `v̄_0` and `w̄_0 = 2 v̄_0`.
#[derive(Clone, Debug, Serialize)]
pub struct T4Group {
    group: FiniteAbelianGroup,
    #[serde(serialize_with = "ser_elems")]
    vbar_images: Vec<Vec<Int>>,
    #[serde(serialize_with = "ser_elem")]
    v0bar: Vec<Int>,
    #[serde(serialize_with = "ser_elem")]
    w0bar: Vec<Int>,
    #[serde(skip)]
    quotient: QuotientMap,
    #[serde(skip)]
    delta: ExceptionalClass,
}

fn ser_elem<S: serde::Serializer>(v: &[Int], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

fn ser_elems<S: serde::Serializer>(v: &[Vec<Int>], s: S) -> std::result::Result<S::Ok, S::Error> {
    let strs: Vec<Vec<String>> = v
        .iter()
        .map(|e| e.iter().map(|x| x.to_string()).collect())
        .collect();
    serde::Serialize::serialize(&strs, s)
}

/// Build `T^4` for a lattice `L`; `v̄` and `v̄_0` use the exceptional class `L` was built from.
pub fn torsion_t4(l: &H4Lattice) -> Result<T4Group> {
    let sym2 = Lattice::standard(l.lattice().form().clone())?;
    let quotient = if std::ptr::eq(l, H4Model::get().l()) {
        H4Model::get().quotient().clone()
    } else {
        sym2.quotient(l.lattice())?
    };
    let delta = l.delta_used().clone();
    let vbar_images = (0..RANK)
        .map(|i| quotient.image(build_v_delta(&delta, &H2Class::basis(i)).coords()))
        .collect::<Result<Vec<_>>>()?;
    let group = quotient.group().clone();
    let v0bar = quotient.image(build_v0(&delta)?.coords())?;
    let w0bar = group.scale(&Int::from(2), &v0bar)?;
    Ok(T4Group {
        group,
        vbar_images,
        v0bar,
        w0bar,
        quotient,
        delta,
    })
}

impl T4Group {
    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn order(&self) -> Int {
        self.group.order()
    }

    pub fn delta(&self) -> &ExceptionalClass {
        &self.delta
    }

    /// `v̄(x_i)` for the `i`-th basis vector of `Λ`.
    pub fn vbar_basis(&self, i: usize) -> &[Int] {
        &self.vbar_images[i]
    }

    /// `v̄(α)`, computed additively from the basis images.
    pub fn vbar(&self, a: &H2Class) -> Result<Vec<Int>> {
        let mut acc = self.group.zero();
        for (i, &c) in a.coords().iter().enumerate() {
            if c != 0 {
                let t = self.group.scale(&Int::from(c), &self.vbar_images[i])?;
                acc = self.group.add(&acc, &t)?;
            }
        }
        Ok(acc)
    }

    pub fn v0bar(&self) -> &[Int] {
        &self.v0bar
    }

    pub fn w0bar(&self) -> &[Int] {
        &self.w0bar
    }

    /// Image of a class of `L`.
    pub fn image(&self, c: &H4Class) -> Result<Vec<Int>> {
        self.quotient.image(c.coords())
    }

    /// Coordinates over `F_2` of a 2-torsion element.
    fn two_torsion_bits(&self, x: &[Int]) -> Result<Vec<u8>> {
        let x = self.group.reduce(x)?;
        let mut bits = Vec::new();
        for (xi, d) in x.iter().zip(self.group.invariant_factors()) {
            if d.is_odd() {
                if !xi.is_zero() {
                    return Err(Error::CheckFailed("element is not 2-torsion".into()));
                }
                continue;
            }
            let half = d / 2;
            let (q, r) = xi.div_rem(&half);
            if !r.is_zero() {
                return Err(Error::CheckFailed("element is not 2-torsion".into()));
            }
            bits.push((q.to_u8().unwrap_or(0)) & 1);
        }
        Ok(bits)
    }

    /// Basis over `F_2` of the kernel of `v̄ : Λ/2Λ -> T^4`.
    pub fn vbar_kernel_mod2(&self) -> Result<Vec<Vec<u8>>> {
        let rows = self
            .vbar_images
            .iter()
            .map(|x| self.two_torsion_bits(x))
            .collect::<Result<Vec<_>>>()?;
        Ok(f2_left_kernel(&rows))
    }

    /// `ψ` evaluated on a lift: `α ↦ (θ·α·δ) mod 2` on the basis of `Λ`.
    pub fn psi_of_lift(&self, lift: &H4Class, delta: &ExceptionalClass) -> Result<Vec<u8>> {
        (0..RANK)
            .map(|k| {
                let v = fujiki_with_product(lift, &H2Class::basis(k), delta.class());
                if !v.is_integer() {
                    return Err(Error::NonInteger(format!("pairing {v} on a lift")));
                }
                Ok((v.to_integer().mod_floor(&Int::from(2)).to_u8().unwrap_or(0)) as u8)
            })
            .collect()
    }

    fn generator_lifts(&self) -> Result<Vec<H4Class>> {
        let lifts = self
            .group
            .lifts()
            .ok_or_else(|| Error::Precondition("group has no generator lifts".into()))?;
        lifts
            .iter()
            .map(|v| H4Class::from_coords(v.clone()))
            .collect()
    }

    /// `ψ` on each cyclic generator.
    pub fn psi_generators(&self) -> Result<Vec<Vec<u8>>> {
        self.generator_lifts()?
            .iter()
            .map(|l| self.psi_of_lift(l, &self.delta))
            .collect()
    }

    /// `ψ` of a group element, as the combination of generator values.
    pub fn psi(&self, x: &[Int]) -> Result<Vec<u8>> {
        let x = self.group.reduce(x)?;
        let gens = self.psi_generators()?;
        let mut out = vec![0u8; RANK];
        for (c, g) in x.iter().zip(&gens) {
            if c.is_odd() {
                for (o, b) in out.iter_mut().zip(g) {
                    *o ^= b;
                }
            }
        }
        Ok(out)
    }

    /// `|im ψ| = 2^rank`.
    pub fn psi_image_rank(&self) -> Result<usize> {
        Ok(f2_rank(&self.psi_generators()?))
    }

    /// `|ker ψ| = |T^4| / |im ψ|`.
    pub fn psi_kernel_order(&self) -> Result<Int> {
        let r = self.psi_image_rank()?;
        Ok(self.order() / num_traits::pow(Int::from(2), r))
    }

    /// Image of `φ`, generated by `w̄_0`.
    pub fn phi_image(&self) -> Result<FiniteAbelianGroup> {
        self.group.subgroup(std::slice::from_ref(&self.w0bar))
    }

    /// Whether a lift lands in `L` and reduces to a given element.
    pub fn lift_matches(&self, lift: &[Rat], x: &[Int]) -> Result<bool> {
        Ok(self.quotient.image(lift)? == self.group.reduce(x)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f2_kernel_small() {
        // rows: (1,0), (0,1), (1,1): kernel spanned by (1,1,1)
        let k = f2_left_kernel(&[vec![1, 0], vec![0, 1], vec![1, 1]]);
        assert_eq!(k, vec![vec![1, 1, 1]]);
        assert_eq!(f2_rank(&[vec![1, 1], vec![1, 1]]), 1);
    }
}
