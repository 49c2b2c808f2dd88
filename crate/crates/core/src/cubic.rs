//! The variety of lines of a cubic fourfold inside the model: Plücker class
//! `g1`, the class `g2`, and the Pfaffian polarization.

use serde::Serialize;

use crate::bb::{self, ExceptionalClass, H2Class};
use crate::error::{Error, Result};
use crate::h4::{self, fujiki_pair, fujiki_with_product, sym2_embed, H4Class, H4Model};
use crate::hodge::{self, PicardData};
use crate::linalg::{rat, rat_frac, Int, Lattice, Rat};

#[derive(Clone, Debug, Serialize)]
pub struct CubicModel {
    g1: H2Class,
    g2: H4Class,
}

impl CubicModel {
    pub fn g1(&self) -> &H2Class {
        &self.g1
    }

    pub fn g2(&self) -> &H4Class {
        &self.g2
    }

    pub fn g1_sq(&self) -> H4Class {
        sym2_embed(&self.g1, &self.g1)
    }

    /// `(1/3)(g1² − g2)`.
    pub fn lines_class(&self) -> H4Class {
        (&self.g1_sq() - &self.g2).scaled_frac(1, 3)
    }

    pub fn g1_fourth(&self) -> Rat {
        fujiki_pair(&self.g1_sq(), &self.g1_sq())
    }

    pub fn g2_g1_sq(&self) -> Rat {
        fujiki_pair(&self.g2, &self.g1_sq())
    }

    /// `g2·α·β`.
    pub fn g2_against(&self, a: &H2Class, b: &H2Class) -> Rat {
        fujiki_with_product(&self.g2, a, b)
    }
}

/// Build the model with `g2 = (5/8)g1² − (3/20)q` and check its invariants.
pub fn build_cubic_model(g1: H2Class) -> Result<CubicModel> {
    if !bb::is_primitive(&g1)? {
        return Err(Error::NotPrimitive);
    }
    if !bb::is_even(&g1)? {
        return Err(Error::Precondition("g1 must be even".into()));
    }
    let g1_sq = sym2_embed(&g1, &g1);
    // g1⁴ = 3 b0², and the degree 108 forces b0 = 6
    if fujiki_pair(&g1_sq, &g1_sq) != rat(108) {
        return Err(Error::Precondition(format!(
            "g1⁴ = {}, expected 108 (b(g1,g1) = {})",
            fujiki_pair(&g1_sq, &g1_sq),
            g1.square()
        )));
    }
    let q = H4Model::get().q();
    let g2 = &g1_sq.scaled(&rat_frac(5, 8)) - &q.scaled(&rat_frac(3, 20));
    let m = CubicModel { g1, g2 };

    let l = H4Model::get().l();
    if !l.contains(&m.g2) {
        return Err(Error::CheckFailed("g2 not in L".into()));
    }
    let lines = m.lines_class();
    if !l.contains(&lines) || l.divisibility(&lines)? != Int::from(1) {
        return Err(Error::CheckFailed("(1/3)(g1² − g2) not primitive in L".into()));
    }
    if m.g2_g1_sq() != rat(45) {
        return Err(Error::CheckFailed(format!("g2·g1² = {}", m.g2_g1_sq())));
    }
    let lhs = &m.g1_sq().scaled(&rat_frac(1, 6)) - &m.g2.scaled(&rat_frac(4, 15));
    if lhs != q.scaled(&rat_frac(1, 25)) {
        return Err(Error::CheckFailed("(1/6)g1² − (4/15)g2 ≠ (1/25)q".into()));
    }
    Ok(m)
}

/// The Plücker class `2(e1 + f1) + δ0`.
pub fn standard_g1() -> H2Class {
    &(&H2Class::e(1) + &H2Class::f(1)).scaled(2) + &H2Class::delta0()
}

/// `⟨g2, (1/3)(g1² − g2)⟩`, checked against `V_{g1}`.
pub fn lines_hodge_basis(m: &CubicModel) -> Result<Lattice> {
    let lat = Lattice::new(
        &[m.g2.coords().to_vec(), m.lines_class().into_coords()],
        h4::fujiki_form(),
    )?;
    if lat != hodge::v_lambda0(&m.g1)? {
        return Err(Error::CheckFailed("⟨g2, (1/3)(g1² − g2)⟩ ≠ V_g1".into()));
    }
    Ok(lat)
}

/// Basis of the transcendental lattice `g1^⊥` for a rank-1 Picard lattice.
pub fn transcendental_of(m: &CubicModel) -> Result<Vec<H2Class>> {
    hodge::transcendental_basis(&PicardData::rank_one(m.g1.clone())?)
}

#[derive(Clone, Debug, Serialize)]
pub struct PfaffianModel {
    pub b_class: H2Class,
    pub lambda0: H2Class,
}

#[derive(Clone, Debug, Serialize)]
pub struct PfaffianReport {
    pub model: PfaffianModel,
    pub b_square: i64,
    pub b_in_delta0_perp: bool,
    pub lambda0_square: i64,
    pub is_even: bool,
    pub is_primitive: bool,
    pub assumption_holds: bool,
}

/// `λ0 = 2𝔟 − 5δ0` for `𝔟 = e1 + 7f1`.
pub fn pfaffian_check() -> Result<PfaffianReport> {
    let b_class = &H2Class::e(1) + &H2Class::f(1).scaled(7);
    let d0 = H2Class::delta0();
    let lambda0 = &b_class.scaled(2) - &d0.scaled(5);
    Ok(PfaffianReport {
        b_square: b_class.square(),
        b_in_delta0_perp: bb::bb_form(&b_class, &d0) == 0,
        lambda0_square: lambda0.square(),
        is_even: bb::is_even(&lambda0)?,
        is_primitive: bb::is_primitive(&lambda0)?,
        assumption_holds: bb::assumption_holds(&lambda0)?,
        model: PfaffianModel { b_class, lambda0 },
    })
}

/// `(1/3)(24 v0(δ) − 3δ²) = (2/5)q`.
pub fn c2_consistency_for(d: &ExceptionalClass) -> Result<bool> {
    let v0 = h4::build_v0(d)?;
    let dd = sym2_embed(d.class(), d.class());
    let c2 = &v0.scaled(&rat(24)) - &dd.scaled(&rat(3));
    Ok(c2.scaled_frac(1, 3) == h4::two_fifths_q())
}

pub fn c2_consistency(deltas: &[ExceptionalClass]) -> Result<bool> {
    for d in deltas {
        if !c2_consistency_for(d)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;

    #[test]
    fn standard_model() {
        let m = build_cubic_model(standard_g1()).unwrap();
        assert_eq!(m.g1().square(), 6);
        assert_eq!(m.g1_fourth(), rat(108));
        assert_eq!(m.g2_g1_sq(), rat(45));
        // (1/8)((2/5)q + g1²) = (1/3)(g1² − g2)
        let lhs = (&h4::two_fifths_q() + &m.g1_sq()).scaled_frac(1, 8);
        assert_eq!(lhs, m.lines_class());
        lines_hodge_basis(&m).unwrap();
    }

    #[test]
    fn g2_kills_transcendental_pairs() {
        let m = build_cubic_model(standard_g1()).unwrap();
        let t = transcendental_of(&m).unwrap();
        for a in t.iter().take(5) {
            for b in t.iter().take(5) {
                assert_eq!(m.g2_against(a, b), rat(0));
            }
        }
    }

    #[test]
    fn wrong_square_rejected() {
        let g = &H2Class::e(1).scaled(2) + &H2Class::delta0();
        assert!(build_cubic_model(g).is_err());
        assert!(build_cubic_model(H2Class::e(1)).is_err());
    }

    #[test]
    fn pfaffian() {
        let r = pfaffian_check().unwrap();
        assert_eq!(r.b_square, 14);
        assert_eq!(r.lambda0_square, 6);
        assert!(r.is_even && r.assumption_holds && r.b_in_delta0_perp);
    }

    #[test]
    fn c2_random_deltas() {
        let mut r = sample::rng(5);
        let ds: Vec<_> = (0..3).map(|_| sample::random_exceptional(&mut r)).collect();
        assert!(c2_consistency(&ds).unwrap());
        assert!(c2_consistency_for(&bb::BbSpace::get().delta0()).unwrap());
    }
}
