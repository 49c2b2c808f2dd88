//! Picard data, the lattices `V_λ`, the minimality functional and the
//! minimal-class search.
//!
//! The search is restricted to `L ∩ span_Q(Sym^2 P, q)`; that this span
//! contains every minimal Hodge class is taken as given (it needs the
//! complex Hodge decomposition, which the model does not have).

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bb::{self, BbSpace, H2Class, RANK};
use crate::error::{Error, Result};
use crate::h4::{self, sym2_embed, H4Class, H4Model, ProductPairing};
use crate::linalg::{int, FiniteAbelianGroup, Int, Lattice, Rat};

/// A saturated sublattice `P ⊂ Λ` of algebraic classes with a polarization `λ0 ∈ P`.
#[derive(Clone, Debug, Serialize)]
pub struct PicardData {
    basis: Vec<H2Class>,
    lambda0: H2Class,
}

/// JSON form of [`PicardData`]: generators (saturated on ingestion) and `λ0`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PicardSpec {
    #[serde(default)]
    pub basis: Vec<H2Class>,
    pub lambda0: H2Class,
}

fn to_h2(rows: &[Vec<Int>]) -> Result<Vec<H2Class>> {
    rows.iter()
        .map(|r| {
            let v: Vec<i64> = r
                .iter()
                .map(|x| i64::try_from(x).map_err(|_| Error::Degenerate("coordinate overflow".into())))
                .collect::<Result<_>>()?;
            H2Class::new(&v)
        })
        .collect()
}

impl PicardData {
    /// `P = Λ ∩ span_Q(generators, λ0)`.
    pub fn new(generators: &[H2Class], lambda0: H2Class) -> Result<Self> {
        if !bb::is_primitive(&lambda0)? {
            return Err(Error::NotPrimitive);
        }
        let b0 = lambda0.square();
        if b0 <= 0 {
            return Err(Error::NotPositive(b0.to_string()));
        }
        let mut gens: Vec<_> = generators.iter().map(H2Class::to_rat).collect();
        gens.push(lambda0.to_rat());
        let lam = BbSpace::get().lattice();
        let p = lam.saturate_span(&gens)?;
        let basis = to_h2(p.scaled_rows())?;
        if basis.len() >= RANK {
            return Err(Error::Degenerate("P = Λ leaves no transcendental part".into()));
        }
        Ok(PicardData { basis, lambda0 })
    }

    pub fn rank_one(lambda0: H2Class) -> Result<Self> {
        Self::new(&[], lambda0)
    }

    pub fn from_spec(spec: &PicardSpec) -> Result<Self> {
        Self::new(&spec.basis, spec.lambda0.clone())
    }

    pub fn basis(&self) -> &[H2Class] {
        &self.basis
    }

    pub fn lambda0(&self) -> &H2Class {
        &self.lambda0
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }
}

/// Integral basis of `P^⊥` in `Λ` (saturated, since it is an integer kernel).
pub fn transcendental_basis(p: &PicardData) -> Result<Vec<H2Class>> {
    let sp = BbSpace::get();
    // columns: pairings of each P-basis vector with the basis of Λ
    let cols: Vec<Vec<Int>> = (0..RANK)
        .map(|i| {
            p.basis()
                .iter()
                .map(|b| Int::from(sp.pairings(b)[i]))
                .collect()
        })
        .collect();
    let ker = int::left_kernel(&cols, p.rank());
    let t = to_h2(&ker)?;
    if t.is_empty() {
        return Err(Error::Degenerate("transcendental lattice has rank 0".into()));
    }
    Ok(t)
}

pub fn transcendental(p: &PicardData) -> Result<Lattice> {
    let t = transcendental_basis(p)?;
    Lattice::new(
        &t.iter().map(H2Class::to_rat).collect::<Vec<_>>(),
        BbSpace::get().form(),
    )
}

/// `V_λ = span_Q(λ², q) ∩ L`.
pub fn v_lambda0(l0: &H2Class) -> Result<Lattice> {
    check_polarization(l0)?;
    let model = H4Model::get();
    let l2 = sym2_embed(l0, l0);
    model
        .l()
        .lattice()
        .saturate_span(&[l2.into_coords(), model.q().into_coords()])
}

/// The expected basis of `V_λ`: `{λ², (2/5)q}` for odd `λ`,
/// `{λ², (1/8)(λ² + (2/5)q)}` for even `λ`.
pub fn v_lambda0_expected_basis(l0: &H2Class) -> Result<[H4Class; 2]> {
    check_polarization(l0)?;
    let l2 = sym2_embed(l0, l0);
    let tq = h4::two_fifths_q();
    if bb::is_even(l0)? {
        let second = (&l2 + &tq).scaled_frac(1, 8);
        Ok([l2, second])
    } else {
        Ok([l2, tq])
    }
}

fn check_polarization(l0: &H2Class) -> Result<()> {
    if !bb::is_primitive(l0)? {
        return Err(Error::NotPrimitive);
    }
    let b0 = l0.square();
    if b0 <= 0 {
        return Err(Error::NotPositive(b0.to_string()));
    }
    Ok(())
}

/// The scalar `m` with `v·α·β = m b(α,β)` on a basis of `T`.
pub fn minimality_functional(v: &H4Class, t: &[H2Class]) -> Result<Rat> {
    if t.len() < 2 {
        return Err(Error::Degenerate(format!(
            "transcendental lattice of rank {} gives a vacuous condition",
            t.len()
        )));
    }
    let pp = ProductPairing::new(v);
    let mut m: Option<Rat> = None;
    for i in 0..t.len() {
        for j in i..t.len() {
            let val = pp.eval(&t[i], &t[j]);
            let b = bb::bb_form(&t[i], &t[j]);
            if b == 0 {
                if !val.is_zero() {
                    return Err(Error::Precondition(format!(
                        "v·α·β = {val} on an orthogonal transcendental pair"
                    )));
                }
                continue;
            }
            let ratio = val / Rat::from_integer(Int::from(b));
            match &m {
                None => m = Some(ratio),
                Some(prev) if *prev != ratio => {
                    return Err(Error::Precondition(format!(
                        "non-constant ratio {prev} vs {ratio}: class is outside the admissible span"
                    )))
                }
                _ => {}
            }
        }
    }
    m.ok_or_else(|| Error::Degenerate("form vanishes on T".into()))
}

fn sha256_rows<T: Serialize>(v: &T) -> String {
    let bytes = serde_json::to_vec(v).expect("serializable");
    hex::encode(Sha256::digest(bytes))
}

#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    pub delta_used: H2Class,
    pub picard_basis_sha256: String,
    pub transcendental_basis_sha256: String,
    pub search_basis_sha256: String,
}

/// Result of the minimal-class search for one Picard lattice.
#[derive(Clone, Debug, Serialize)]
pub struct MinimalityReport {
    pub search_lattice: Lattice,
    /// `g ≥ 0` with `m(search_lattice) = gZ`.
    #[serde(serialize_with = "ser_rat")]
    pub image_generator: Rat,
    pub feasible: bool,
    pub witness: Option<H4Class>,
    /// `m` on the canonical basis of the search lattice.
    #[serde(serialize_with = "ser_rats")]
    pub functional: Vec<Rat>,
    pub provenance: Provenance,
}

fn ser_rat<S: serde::Serializer>(x: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn ser_rats<S: serde::Serializer>(v: &[Rat], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

impl MinimalityReport {
    /// Whether the image `gZ` lies in `2Z`.
    pub fn image_in_even(&self) -> bool {
        let two_z = &self.image_generator / Rat::from_integer(Int::from(2));
        two_z.is_integer()
    }
}

/// Search `L ∩ span_Q(Sym^2 P, q)` for a class with `m = 1`.
pub fn minimal_class_search(p: &PicardData) -> Result<MinimalityReport> {
    let t = transcendental_basis(p)?;
    if t.len() < 2 {
        return Err(Error::Degenerate("rank T < 2".into()));
    }
    let model = H4Model::get();
    let mut gens: Vec<Vec<Rat>> = Vec::new();
    for a in 0..p.rank() {
        for b in a..p.rank() {
            gens.push(sym2_embed(&p.basis()[a], &p.basis()[b]).into_coords());
        }
    }
    gens.push(model.q().into_coords());
    let search = model.l().lattice().saturate_span(&gens)?;
    let functional = search
        .basis_rows()
        .into_iter()
        .map(|v| minimality_functional(&H4Class::from_coords(v)?, &t))
        .collect::<Result<Vec<_>>>()?;
    let f = search.coset_feasible(&functional, &Rat::one())?;
    let witness = match &f.witness {
        Some(c) => Some(H4Class::from_coords(search.combine(c)?)?),
        None => None,
    };
    let provenance = Provenance {
        delta_used: model.l().delta_used().class().clone(),
        picard_basis_sha256: sha256_rows(&p.basis),
        transcendental_basis_sha256: sha256_rows(&t),
        search_basis_sha256: sha256_rows(&search),
    };
    Ok(MinimalityReport {
        search_lattice: search,
        image_generator: f.generator,
        feasible: f.feasible,
        witness,
        functional,
        provenance,
    })
}

/// Image of `V_λ` in `T^4`.
pub fn hodge_image_in_t4(l0: &H2Class) -> Result<FiniteAbelianGroup> {
    let v = v_lambda0(l0)?;
    let q = H4Model::get().quotient();
    let images = v
        .basis_rows()
        .iter()
        .map(|b| q.image(b))
        .collect::<Result<Vec<_>>>()?;
    q.group().subgroup(&images)
}

/// `c_2 = 24 v_0(δ0) − 3 δ0²`.
pub fn c2_class() -> H4Class {
    let m = H4Model::get();
    &m.v0().scaled(&Rat::from_integer(Int::from(24))) - &m.delta0_sq().scaled(&Rat::from_integer(Int::from(3)))
}

/// `V_λ / <λ², c_2>`.
pub fn z4_quotient_bound(l0: &H2Class) -> Result<FiniteAbelianGroup> {
    let v = v_lambda0(l0)?;
    let sub = Lattice::new(
        &[sym2_embed(l0, l0).into_coords(), c2_class().into_coords()],
        v.form().clone(),
    )?;
    sub.quotient_invariants(&v)
}

/// The equivalent characterisations of an even class, evaluated separately.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EvenConditions {
    pub is_even: bool,
    pub decomposes: bool,
    pub congruent_to_delta: bool,
    pub divisible_by_2: bool,
    pub divisible_by_8: bool,
    pub vbar_zero: bool,
}

impl EvenConditions {
    pub fn agree(&self) -> bool {
        let e = self.is_even;
        self.decomposes == e
            && self.congruent_to_delta == e
            && self.divisible_by_2 == e && self.divisible_by_8 == e && self.vbar_zero == e
    }
}

/// Evaluate the even-class conditions on a primitive `λ` against an exceptional `δ`:
/// `λ = 2â + (2c+1)δ` with `â ⊥ δ`; `λ ≡ δ mod 2Λ`; `λ² − δ²` divisible by 2, by 8 in `L`; `v̄(λ) = 0`.
pub fn even_conditions(l0: &H2Class, delta: &bb::ExceptionalClass) -> Result<EvenConditions> {
    let is_even = bb::is_even(l0)?;
    let (perp, t) = bb::split_along(delta, l0);
    let decomposes = t % 2 != 0 && perp.coords().iter().all(|x| x % 2 == 0);
    let congruent_to_delta = (l0 - delta.class()).coords().iter().all(|x| x % 2 == 0);
    let model = H4Model::get();
    let diff = &sym2_embed(l0, l0) - &sym2_embed(delta.class(), delta.class());
    let div = if diff.is_zero() {
        Int::zero()
    } else {
        model.l().divisibility(&diff)?
    };
    let two = Int::from(2);
    let eight = Int::from(8);
    let divisible = |k: &Int| div.is_zero() || (&div % k).is_zero();
    let v = h4::build_v_delta(delta, l0);
    let vbar_zero = model.t4_image(&v)?.iter().all(Zero::is_zero);
    Ok(EvenConditions {
        is_even,
        decomposes,
        congruent_to_delta,
        divisible_by_2: divisible(&two),
        divisible_by_8: divisible(&eight),
        vbar_zero,
    })
}
