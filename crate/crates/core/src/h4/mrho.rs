//! The comparison matrix `M_ρ̃` and the explicit integral basis of `L`.

use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use super::{build_v0, build_v_delta, sym2_embed, H4Class, H4Lattice, DIM};
use crate::bb::{self, H2Class};
use crate::error::{Error, Result};
use crate::linalg::{rat, Lattice, Mat, Rat};

const K3: usize = 22;

/// The `276 x 276` matrix `M_ρ̃` expressing the images of `â_i²`, `â_iâ_j`
/// (`i < j`), `Δ̃²` and the 22 classes `2u'_i` in the basis
/// `e_i, e_ij, e_0, u'_i`, built from the K3 Gram `A` of `δ0^⊥` and `B = A^{-1}`.
pub fn build_m_rho_tilde() -> Result<Mat> {
    let basis: Vec<H2Class> = (0..K3).map(H2Class::basis).collect();
    let a = bb::gram_of(&basis);
    let b = a.inverse()?;
    let n_pairs = K3 * (K3 - 1) / 2;
    let n = K3 + n_pairs + 1 + K3;
    debug_assert_eq!(n, DIM);
    let e0 = K3 + n_pairs;
    let pair_col = |i: usize, j: usize| -> usize {
        // strict pairs i < j, lexicographic
        K3 + i * (2 * K3 - i - 1) / 2 + (j - i - 1)
    };
    let mut m = Mat::zeros(n, n);
    let mut row = 0;
    for i in 0..K3 {
        m.set(row, i, rat(2));
        m.set(row, e0, a.get(i, i).clone());
        row += 1;
    }
    for i in 0..K3 {
        for j in i + 1..K3 {
            m.set(row, pair_col(i, j), rat(1));
            m.set(row, e0, a.get(i, j).clone());
            row += 1;
        }
    }
    for i in 0..K3 {
        m.set(row, i, -b.get(i, i).clone());
        for j in i + 1..K3 {
            m.set(row, pair_col(i, j), -b.get(i, j).clone());
        }
    }
    m.set(row, e0, rat(-1));
    row += 1;
    for i in 0..K3 {
        m.set(row, e0 + 1 + i, rat(2));
        row += 1;
    }
    debug_assert_eq!(row, n);
    Ok(m)
}

/// Outcome of checking the cup-product table of the explicit basis.
#[derive(Clone, Debug, Serialize)]
pub struct ExplicitBasisReport {
    pub identities_checked: usize,
    pub basis_size: usize,
    pub spans_l: bool,
    /// `10 - ½ tr(BA)`, the `v_0`-coefficient in the formula for `δ²`.
    pub delta_sq_v0_coefficient: String,
}

fn expect_eq(lhs: &H4Class, rhs: &H4Class, what: &str) -> Result<()> {
    if lhs == rhs {
        Ok(())
    } else {
        Err(Error::CheckFailed(what.to_string()))
    }
}

/// Verify the four cup-product formulas in the dictionary
/// `v_i = v_δ(â_i) − (a_ii/2) v_0`, `u_i = δ â_i`, `v_ij = â_i â_j − a_ij v_0`,
/// and that `{v_0, â_iâ_j (i<j), v_δ(â_i), δ â_i}` is a Z-basis of `l`.
pub fn explicit_basis_check(l: &H4Lattice) -> Result<ExplicitBasisReport> {
    let d = l.delta_used().clone();
    let hat = bb::orth_complement_basis(&d)?;
    let a = bb::gram_of(&hat);
    let b = a.inverse()?;
    let v0 = build_v0(&d)?;
    let dd = sym2_embed(d.class(), d.class());
    let half = rat(1) / rat(2);

    let v_i: Vec<H4Class> = (0..K3)
        .map(|i| &build_v_delta(&d, &hat[i]) - &v0.scaled(&(a.get(i, i) * &half)))
        .collect();
    let u_i: Vec<H4Class> = (0..K3).map(|i| sym2_embed(d.class(), &hat[i])).collect();
    let v_ij = |i: usize, j: usize| &sym2_embed(&hat[i], &hat[j]) - &v0.scaled(a.get(i, j));

    let mut checked = 0;
    for i in 0..K3 {
        // â_i δ = u_i
        expect_eq(&sym2_embed(&hat[i], d.class()), &u_i[i], &format!("â_{i}·δ"))?;
        // â_i² = 2 v_i + u_i + a_ii v_0
        let rhs = &(&v_i[i].scaled(&rat(2)) + &u_i[i]) + &v0.scaled(a.get(i, i));
        expect_eq(&sym2_embed(&hat[i], &hat[i]), &rhs, &format!("â_{i}²"))?;
        // â_i(â_i − δ) divisible by 2 in L
        let t = &sym2_embed(&hat[i], &hat[i]) - &sym2_embed(&hat[i], d.class());
        if l.divisibility(&t)?.is_odd() {
            return Err(Error::CheckFailed(format!("â_{i}(â_{i} − δ) not divisible by 2")));
        }
        checked += 3;
        for j in i + 1..K3 {
            let rhs = &v_ij(i, j) + &v0.scaled(a.get(i, j));
            expect_eq(&sym2_embed(&hat[i], &hat[j]), &rhs, &format!("â_{i}·â_{j}"))?;
            checked += 1;
        }
    }
    // δ² = −Σ_{i<j} b_ij v_ij − Σ b_ii v_i − Σ (b_ii/2) u_i + c v_0
    let tr_ba: Rat = b.mul(&a)?.trace();
    let c = rat(10) - &tr_ba * &half;
    let mut rhs = v0.scaled(&c);
    for i in 0..K3 {
        rhs = &rhs - &v_i[i].scaled(b.get(i, i));
        rhs = &rhs - &u_i[i].scaled(&(b.get(i, i) * &half));
        for j in i + 1..K3 {
            if !b.get(i, j).is_zero() {
                rhs = &rhs - &v_ij(i, j).scaled(b.get(i, j));
            }
        }
    }
    expect_eq(&dd, &rhs, "δ·δ")?;
    checked += 1;

    let mut basis: Vec<Vec<Rat>> = vec![v0.coords().to_vec()];
    for i in 0..K3 {
        for j in i + 1..K3 {
            basis.push(sym2_embed(&hat[i], &hat[j]).into_coords());
        }
    }
    for i in 0..K3 {
        basis.push(build_v_delta(&d, &hat[i]).into_coords());
        basis.push(u_i[i].coords().to_vec());
    }
    let basis_size = basis.len();
    let spanned = Lattice::new(&basis, l.lattice().form().clone())?;
    Ok(ExplicitBasisReport {
        identities_checked: checked,
        basis_size,
        spans_l: spanned.rank() == basis_size && &spanned == l.lattice(),
        delta_sq_v0_coefficient: c.to_string(),
    })
}
