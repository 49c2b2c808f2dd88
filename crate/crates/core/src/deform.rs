//! The fixed-space system of the deformation argument.
//!
//! For a symmetric invertible `A` (intersection matrix on `H^{1,1}`) and a
//! vector `s` (coordinates of the polarization), find all pairs
//! `(C symmetric, c0)` with `(c0 I − 2 C A) μ = 0` for every `μ` with
//! `sᵀ A μ = 0`. The expected answer is `span{(A^{-1}, 2), (s sᵀ, 0)}`.

use num_traits::Zero;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::mat::clear_denominators;
use crate::linalg::{rat, Mat, Rat};
use crate::sample::SampleRng;

#[derive(Clone, Debug, Serialize)]
pub struct FixInstance {
    n: usize,
    a: Mat,
    #[serde(serialize_with = "ser_rats")]
    s: Vec<Rat>,
}

fn ser_rats<S: serde::Serializer>(v: &[Rat], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

impl FixInstance {
    pub fn new(a: Mat, s: Vec<Rat>) -> Result<Self> {
        let n = a.nrows();
        if !a.is_symmetric() {
            return Err(Error::Precondition("A must be symmetric".into()));
        }
        if s.len() != n {
            return Err(Error::Dimension(format!("s has length {}, A is {n}x{n}", s.len())));
        }
        if s.iter().all(Zero::is_zero) {
            return Err(Error::ZeroVector);
        }
        if a.determinant()?.is_zero() {
            return Err(Error::Singular);
        }
        Ok(FixInstance { n, a, s })
    }

    /// `A = M + Mᵀ + 2n I` with `M` uniform in `[-3, 3]`, `s` uniform in `[-3, 3]` and nonzero.
    pub fn random(rng: &mut SampleRng, n: usize) -> Self {
        loop {
            let m: Vec<Vec<i64>> = (0..n)
                .map(|_| (0..n).map(|_| rng.random_range(-3..=3)).collect())
                .collect();
            let mut a = Mat::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    let mut v = m[i][j] + m[j][i];
                    if i == j {
                        v += 2 * n as i64;
                    }
                    a.set(i, j, rat(v));
                }
            }
            let s: Vec<Rat> = (0..n).map(|_| rat(rng.random_range(-3..=3))).collect();
            if let Ok(inst) = FixInstance::new(a, s) {
                return inst;
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> &Mat {
        &self.a
    }

    pub fn s(&self) -> &[Rat] {
        &self.s
    }

    pub fn with_s(&self, s: Vec<Rat>) -> Result<Self> {
        Self::new(self.a.clone(), s)
    }
}

/// A basis of the solution space, each element a pair `(C, c0)`.
#[derive(Clone, Debug, Serialize)]
pub struct FixSolution {
    pub basis: Vec<FixPair>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixPair {
    pub c: Mat,
    #[serde(serialize_with = "ser_rat")]
    pub c0: Rat,
}

fn ser_rat<S: serde::Serializer>(x: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

impl FixSolution {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

fn n_unknowns(n: usize) -> usize {
    n * (n + 1) / 2 + 1
}

fn sym_index(n: usize, a: usize, b: usize) -> usize {
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    a * n - a * a.saturating_sub(1) / 2 + (b - a)
}

/// Flatten `(C, c0)` to the unknown vector `(C_ab for a ≤ b, c0)`.
pub fn flatten(pair: &FixPair) -> Vec<Rat> {
    let n = pair.c.nrows();
    let mut v = vec![Rat::zero(); n_unknowns(n)];
    for a in 0..n {
        for b in a..n {
            v[sym_index(n, a, b)] = pair.c.get(a, b).clone();
        }
    }
    v[n_unknowns(n) - 1] = pair.c0.clone();
    v
}

fn unflatten(n: usize, v: &[Rat]) -> FixPair {
    let mut c = Mat::zeros(n, n);
    for a in 0..n {
        for b in a..n {
            let x = v[sym_index(n, a, b)].clone();
            c.set(a, b, x.clone());
            c.set(b, a, x);
        }
    }
    FixPair {
        c,
        c0: v[n_unknowns(n) - 1].clone(),
    }
}

/// Basis of `{μ : sᵀ A μ = 0}`.
pub fn kernel_mu(inst: &FixInstance) -> Result<Vec<Vec<Rat>>> {
    let w = inst.a.vec_mul(&inst.s)?;
    if w.iter().all(Zero::is_zero) {
        return Err(Error::ZeroVector);
    }
    let row = Mat::from_rows(vec![w])?;
    Ok(row.nullspace())
}

/// Solve `(c0 I − 2 C A) μ = 0` for all `μ` in [`kernel_mu`] as one linear system.
pub fn solve_fix(inst: &FixInstance) -> Result<FixSolution> {
    let n = inst.n;
    let mus = kernel_mu(inst)?;
    let nu = n_unknowns(n);
    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(mus.len() * n);
    for mu in &mus {
        let (_, mu_int) = clear_denominators(mu);
        let mu: Vec<Rat> = mu_int.into_iter().map(Rat::from_integer).collect();
        // A is symmetric, so (A μ) is μᵀ A
        let amu = inst.a.vec_mul(&mu)?;
        for i in 0..n {
            let mut r = vec![Rat::zero(); nu];
            r[nu - 1] = mu[i].clone();
            for (j, x) in amu.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                // entry (C A μ)_i = Σ_j C_ij (Aμ)_j
                r[sym_index(n, i, j)] -= x * rat(2);
            }
            rows.push(r);
        }
    }
    let sys = Mat::from_rows(rows)?;
    let basis = sys
        .nullspace()
        .iter()
        .map(|v| unflatten(n, v))
        .collect();
    Ok(FixSolution { basis })
}

/// The expected generators `(A^{-1}, 2)` and `(s sᵀ, 0)`.
pub fn expected_generators(inst: &FixInstance) -> Result<[FixPair; 2]> {
    let n = inst.n;
    let b = inst.a.inverse()?;
    let mut sst = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            sst.set(i, j, &inst.s[i] * &inst.s[j]);
        }
    }
    Ok([
        FixPair { c: b, c0: rat(2) },
        FixPair {
            c: sst,
            c0: Rat::zero(),
        },
    ])
}

/// Row-reduced form of the span of a set of pairs.
fn span_rref(pairs: &[FixPair]) -> Result<Mat> {
    if pairs.is_empty() {
        return Ok(Mat::zeros(0, 0));
    }
    Ok(Mat::from_rows(pairs.iter().map(flatten).collect())?.rref().0)
}

/// Whether two families of pairs span the same rational space.
pub fn same_span(a: &[FixPair], b: &[FixPair]) -> Result<bool> {
    Ok(span_rref(a)? == span_rref(b)?)
}

/// Compare the solution space with `span{(A^{-1}, 2), (s sᵀ, 0)}`.
pub fn verify_generators(sol: &FixSolution, inst: &FixInstance) -> Result<bool> {
    let expected = expected_generators(inst)?;
    same_span(&sol.basis, &expected)
}

/// Check that a pair satisfies the system for every μ.
pub fn satisfies(pair: &FixPair, inst: &FixInstance) -> Result<bool> {
    let n = inst.n;
    let ca = pair.c.mul(&inst.a)?;
    let mut lhs = ca.scale(&rat(-2));
    for i in 0..n {
        let v = lhs.get(i, i) + &pair.c0;
        lhs.set(i, i, v);
    }
    for mu in kernel_mu(inst)? {
        let col = Mat::from_rows(vec![mu])?.transpose();
        let out = lhs.mul(&col)?;
        if (0..n).any(|i| !out.get(i, 0).is_zero()) {
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
    fn hand_example() {
        let inst = FixInstance::new(Mat::identity(2), vec![rat(1), rat(0)]).unwrap();
        assert_eq!(kernel_mu(&inst).unwrap(), vec![vec![rat(0), rat(1)]]);
        let sol = solve_fix(&inst).unwrap();
        assert_eq!(sol.dimension(), 2);
        let expected = [
            FixPair {
                c: Mat::identity(2),
                c0: rat(2),
            },
            FixPair {
                c: Mat::from_i64(&[&[1, 0], &[0, 0]]),
                c0: rat(0),
            },
        ];
        assert!(same_span(&sol.basis, &expected).unwrap());
        assert!(verify_generators(&sol, &inst).unwrap());
    }

    #[test]
    fn zero_s_rejected() {
        assert!(FixInstance::new(Mat::identity(2), vec![rat(0), rat(0)]).is_err());
    }

    #[test]
    fn random_small_instances() {
        let mut r = sample::rng(2);
        for n in 3..=6 {
            let inst = FixInstance::random(&mut r, n);
            let sol = solve_fix(&inst).unwrap();
            assert_eq!(sol.dimension(), 2);
            assert!(verify_generators(&sol, &inst).unwrap());
            for p in &sol.basis {
                assert!(satisfies(p, &inst).unwrap());
            }
        }
    }
}
