use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{Int, Rat};
use crate::error::{Error, Result};

/// Finite abelian group `Z/d_1 + ... + Z/d_k` with `d_1 | d_2 | ... | d_k`, each `d_i >= 2`.
///
/// Elements are represented as integer vectors reduced modulo the factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteAbelianGroup {
    #[serde(with = "int_vec_str")]
    invariant_factors: Vec<Int>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    #[serde(with = "lift_str")]
    lifts: Option<Vec<Vec<Rat>>>,
}

mod int_vec_str {
    use super::Int;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Int], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Int>, D::Error> {
        let v: Vec<String> = Vec::deserialize(d)?;
        v.iter()
            .map(|x| x.parse().map_err(D::Error::custom))
            .collect()
    }
}

mod lift_str {
    use super::Rat;
    use crate::linalg::mat::parse_rat;
    use serde::{de::Error, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Vec<Vec<Rat>>>, s: S) -> Result<S::Ok, S::Error> {
        let strs: Option<Vec<Vec<String>>> = v
            .as_ref()
            .map(|rows| rows.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect());
        strs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<Vec<Rat>>>, D::Error> {
        let v: Option<Vec<Vec<String>>> = Option::deserialize(d)?;
        v.map(|rows| {
            rows.iter()
                .map(|r| r.iter().map(|x| parse_rat(x).map_err(D::Error::custom)).collect())
                .collect()
        })
        .transpose()
    }
}

impl FiniteAbelianGroup {
    /// Validate and build from invariant factors.
    pub fn new(invariant_factors: Vec<Int>) -> Result<Self> {
        for w in invariant_factors.windows(2) {
            if !w[1].is_multiple_of(&w[0]) {
                return Err(Error::Precondition(format!(
                    "invariant factors {} and {} do not divide",
                    w[0], w[1]
                )));
            }
        }
        if invariant_factors.iter().any(|d| *d < Int::from(2)) {
            return Err(Error::Precondition("invariant factors must be >= 2".into()));
        }
        Ok(FiniteAbelianGroup {
            invariant_factors,
            lifts: None,
        })
    }

    pub fn trivial() -> Self {
        FiniteAbelianGroup {
            invariant_factors: Vec::new(),
            lifts: None,
        }
    }

    pub fn cyclic(n: u64) -> Self {
        if n <= 1 {
            Self::trivial()
        } else {
            FiniteAbelianGroup {
                invariant_factors: vec![Int::from(n)],
                lifts: None,
            }
        }
    }

    /// Attach generator lifts (one rational vector per invariant factor).
    pub fn with_lifts(mut self, lifts: Vec<Vec<Rat>>) -> Result<Self> {
        if lifts.len() != self.invariant_factors.len() {
            return Err(Error::Dimension(format!(
                "{} lifts for {} factors",
                lifts.len(),
                self.invariant_factors.len()
            )));
        }
        self.lifts = Some(lifts);
        Ok(self)
    }

    pub fn invariant_factors(&self) -> &[Int] {
        &self.invariant_factors
    }

    pub fn lifts(&self) -> Option<&[Vec<Rat>]> {
        self.lifts.as_deref()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn order(&self) -> Int {
        self.invariant_factors.iter().product()
    }

    /// Number of cyclic factors.
    pub fn ngens(&self) -> usize {
        self.invariant_factors.len()
    }

    pub fn exponent(&self) -> Int {
        self.invariant_factors.last().cloned().unwrap_or_else(Int::one)
    }

    pub fn reduce(&self, x: &[Int]) -> Result<Vec<Int>> {
        if x.len() != self.ngens() {
            return Err(Error::Dimension(format!(
                "element of length {} in a group with {} factors",
                x.len(),
                self.ngens()
            )));
        }
        Ok(x.iter()
            .zip(&self.invariant_factors)
            .map(|(a, d)| a.mod_floor(d))
            .collect())
    }

    pub fn zero(&self) -> Vec<Int> {
        vec![Int::zero(); self.ngens()]
    }

    pub fn add(&self, x: &[Int], y: &[Int]) -> Result<Vec<Int>> {
        let s: Vec<Int> = x.iter().zip(y).map(|(a, b)| a + b).collect();
        self.reduce(&s)
    }

    pub fn scale(&self, k: &Int, x: &[Int]) -> Result<Vec<Int>> {
        let s: Vec<Int> = x.iter().map(|a| k * a).collect();
        self.reduce(&s)
    }

    pub fn is_zero_elem(&self, x: &[Int]) -> Result<bool> {
        Ok(self.reduce(x)?.iter().all(Zero::is_zero))
    }

    /// Order of an element.
    pub fn element_order(&self, x: &[Int]) -> Result<Int> {
        let x = self.reduce(x)?;
        Ok(x.iter()
            .zip(&self.invariant_factors)
            .fold(Int::one(), |acc, (a, d)| {
                let o = d / a.gcd(d);
                acc.lcm(&o)
            }))
    }

    /// Structure of the subgroup generated by `gens`.
    pub fn subgroup(&self, gens: &[Vec<Int>]) -> Result<FiniteAbelianGroup> {
        let k = self.ngens();
        if k == 0 {
            return Ok(Self::trivial());
        }
        // subgroup = (gens + R) / R with R = diag(d); its structure is the
        // cokernel of R inside the lattice generated by gens and R.
        let mut rows: Vec<Vec<Int>> = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        if i == j {
                            self.invariant_factors[i].clone()
                        } else {
                            Int::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        for g in gens {
            rows.push(self.reduce(g)?);
        }
        let sup = super::int::hnf(&rows, k);
        // express diag(d) in the basis of sup
        let relations: Vec<Vec<Int>> = (0..k)
            .map(|i| {
                let mut target: Vec<Int> = vec![Int::zero(); k];
                target[i] = self.invariant_factors[i].clone();
                super::lattice::echelon_coords(&sup.rows, &sup.pivots, &target)
                    .expect("relation lies in the generated lattice")
            })
            .collect();
        let (torsion, free) = super::smith::cokernel_invariants(&relations, sup.rank());
        debug_assert_eq!(free, 0);
        FiniteAbelianGroup::new(torsion)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(v: &[i64]) -> FiniteAbelianGroup {
        FiniteAbelianGroup::new(v.iter().map(|&x| Int::from(x)).collect()).unwrap()
    }

    fn e(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn validation() {
        assert!(FiniteAbelianGroup::new(vec![Int::from(2), Int::from(3)]).is_err());
        assert!(FiniteAbelianGroup::new(vec![Int::from(1)]).is_err());
        assert_eq!(g(&[2, 10]).order(), Int::from(20));
    }

    #[test]
    fn orders_and_subgroups() {
        let grp = g(&[2, 10]);
        assert_eq!(grp.element_order(&e(&[1, 1])).unwrap(), Int::from(10));
        assert_eq!(grp.element_order(&e(&[0, 5])).unwrap(), Int::from(2));
        let sub = grp.subgroup(&[e(&[0, 2])]).unwrap();
        assert_eq!(sub, g(&[5]));
        let all = grp.subgroup(&[e(&[1, 0]), e(&[0, 1])]).unwrap();
        assert_eq!(all, grp);
        assert!(grp.subgroup(&[]).unwrap().is_trivial());
    }
}
