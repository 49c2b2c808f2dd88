use std::sync::OnceLock;

use num_traits::{One, Zero};
use serde::Serialize;

use super::{build_q, build_v0, build_v_delta, fujiki_form, sym2_embed, two_fifths_q, H4Class, DIM};
use crate::bb::{self, BbSpace, ExceptionalClass};
use crate::error::{Error, Result};
use crate::linalg::{int, Int, Lattice, QuotientMap, Rat};

/// The overlattice `L ⊃ Sym^2(Λ)` modelling `H^4(F, Z)`, with the exceptional
/// class used to construct it.
#[derive(Clone, Debug, Serialize)]
pub struct H4Lattice {
    lattice: Lattice,
    delta_used: ExceptionalClass,
}

impl PartialEq for H4Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.lattice == other.lattice
    }
}

impl Eq for H4Lattice {}

impl H4Lattice {
    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn delta_used(&self) -> &ExceptionalClass {
        &self.delta_used
    }

    pub fn contains(&self, c: &H4Class) -> bool {
        self.lattice.contains(c.coords())
    }

    pub fn divisibility(&self, c: &H4Class) -> Result<Int> {
        self.lattice.divisibility(c.coords())
    }

    /// Exact determinant of the Gram matrix under the Fujiki form.
    pub fn gram_determinant(&self) -> Result<Rat> {
        let (d, rows) = self.lattice.gram().scaled_int();
        let det = int::det_bareiss(&rows);
        Ok(Rat::new(det, num_traits::pow(d, DIM)))
    }
}

/// `L(δ) = Sym^2(Λ) + Σ Z v_δ(â_i) + Z v_0(δ)` for a basis `â` of `δ^⊥`.
pub fn build_l(d: &ExceptionalClass) -> Result<H4Lattice> {
    let basis = bb::orth_complement_basis(d)?;
    if let Some(a) = basis.iter().find(|a| a.square() % 2 != 0) {
        return Err(Error::CheckFailed(format!(
            "b(â, â) = {} is odd, v_δ(â) would not be integral",
            a.square()
        )));
    }
    let mut gens: Vec<Vec<Rat>> = (0..DIM)
        .map(|k| {
            let mut v = vec![Rat::zero(); DIM];
            v[k] = Rat::one();
            v
        })
        .collect();
    gens.extend(basis.iter().map(|a| build_v_delta(d, a).into_coords()));
    gens.push(build_v0(d)?.into_coords());
    let lattice = Lattice::new(&gens, fujiki_form())?;
    if lattice.rank() != DIM {
        return Err(Error::Degenerate(format!("L has rank {}", lattice.rank())));
    }
    Ok(H4Lattice {
        lattice,
        delta_used: d.clone(),
    })
}

/// Shared model built once from `δ0`.
pub struct H4Model {
    sym2: Lattice,
    l: H4Lattice,
    quotient: QuotientMap,
    v0: H4Class,
}

impl H4Model {
    pub fn get() -> &'static H4Model {
        static MODEL: OnceLock<H4Model> = OnceLock::new();
        MODEL.get_or_init(|| Self::build().expect("model construction from δ0"))
    }

    fn build() -> Result<H4Model> {
        let d0 = BbSpace::get().delta0();
        let sym2 = Lattice::standard(fujiki_form())?;
        let l = build_l(&d0)?;
        let quotient = sym2.quotient(l.lattice())?;
        let v0 = build_v0(&d0)?;
        Ok(H4Model {
            sym2,
            l,
            quotient,
            v0,
        })
    }

    pub fn sym2(&self) -> &Lattice {
        &self.sym2
    }

    pub fn l(&self) -> &H4Lattice {
        &self.l
    }

    /// Projection `L -> L / Sym^2(Λ)`.
    pub fn quotient(&self) -> &QuotientMap {
        &self.quotient
    }

    pub fn q(&self) -> H4Class {
        build_q()
    }

    pub fn two_fifths_q(&self) -> H4Class {
        two_fifths_q()
    }

    /// `v_0(δ0)`.
    pub fn v0(&self) -> &H4Class {
        &self.v0
    }

    pub fn delta0_sq(&self) -> H4Class {
        let d = BbSpace::get().delta0();
        sym2_embed(d.class(), d.class())
    }

    /// Image in `T^4 = L / Sym^2(Λ)`.
    pub fn t4_image(&self, c: &H4Class) -> Result<Vec<Int>> {
        self.quotient.image(c.coords())
    }
}
