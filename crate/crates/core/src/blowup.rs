//! Blow-ups of a fourfold's `H^4` lattice and the index calculus of
//! correspondences to surfaces.
//!
//! A correspondence `Γ` from `Y` to a surface `S` has multiplier `e` when
//! `(Γ*x · Γ*y)_S = −e (x·y)_Y` on transcendental classes. Correspondences
//! here are bookkeeping records; only these scalars are modelled.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{rat, Lattice, Mat, Rat};

/// `H^4(Y, Z)` with its (integral) intersection form and transcendental part.
#[derive(Clone, Debug, Serialize)]
pub struct FourfoldH4 {
    gram: Mat,
    transcendental: Lattice,
}

impl FourfoldH4 {
    /// `transcendental` is given by generators in the coordinates of the
    /// standard basis and is saturated.
    pub fn new(gram: Mat, transcendental: &[Vec<Rat>]) -> Result<Self> {
        if !gram.is_symmetric() || !gram.is_integral() {
            return Err(Error::Precondition("gram must be integral symmetric".into()));
        }
        let form = Arc::new(gram.clone());
        let full = Lattice::standard(form.clone())?;
        let transcendental = full.saturate_span(transcendental)?;
        Ok(FourfoldH4 {
            gram,
            transcendental,
        })
    }

    pub fn rank(&self) -> usize {
        self.gram.nrows()
    }

    pub fn gram(&self) -> &Mat {
        &self.gram
    }

    pub fn transcendental(&self) -> &Lattice {
        &self.transcendental
    }

    /// Gram of the transcendental sublattice in its HNF basis.
    pub fn transcendental_gram(&self) -> Mat {
        self.transcendental.gram()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BlowupCenter {
    Point,
    /// A curve whose normal bundle has degree `d`.
    Curve { d: i64 },
    /// A surface with `H^2` Gram and the generators of its transcendental part.
    Surface {
        h2_gram: Mat,
        transcendental_sub: Vec<Vec<i64>>,
    },
}

impl BlowupCenter {
    /// Gram of the summand added by the blow-up.
    pub fn new_block(&self) -> Result<Mat> {
        match self {
            BlowupCenter::Point => Ok(Mat::from_i64(&[&[-1]])),
            BlowupCenter::Curve { d } => Ok(Mat::from_i64(&[&[*d, -1], &[-1, 0]])),
            BlowupCenter::Surface { h2_gram, .. } => {
                if !h2_gram.is_symmetric() {
                    return Err(Error::Precondition("h2_gram must be symmetric".into()));
                }
                Ok(h2_gram.neg())
            }
        }
    }
}

fn pad(v: &[Rat], before: usize, after: usize) -> Vec<Rat> {
    let mut out = vec![rat(0); before];
    out.extend_from_slice(v);
    out.extend(std::iter::repeat_n(rat(0), after));
    out
}

/// `H^4` of the blow-up: orthogonal sum with the new block; the transcendental
/// part is unchanged for points and curves and gains the (negated)
/// transcendental part of a surface center.
pub fn blowup_h4(y: &FourfoldH4, c: &BlowupCenter) -> Result<FourfoldH4> {
    let block = c.new_block()?;
    let n = y.rank();
    let k = block.nrows();
    let gram = Mat::direct_sum(&[&y.gram, &block]);
    let mut gens: Vec<Vec<Rat>> = y
        .transcendental
        .basis_rows()
        .iter()
        .map(|v| pad(v, 0, k))
        .collect();
    if let BlowupCenter::Surface {
        transcendental_sub, ..
    } = c
    {
        for v in transcendental_sub {
            if v.len() != k {
                return Err(Error::Dimension(format!(
                    "transcendental_sub vector of length {}, h2 has rank {k}",
                    v.len()
                )));
            }
            let v: Vec<Rat> = v.iter().map(|&x| rat(x)).collect();
            gens.push(pad(&v, n, 0));
        }
    }
    FourfoldH4::new(gram, &gens)
}

/// Blow up along a sequence of labelled centers; the flag reports whether the
/// sequence is simple (surface centers pairwise distinct).
pub fn blowup_sequence(
    y: &FourfoldH4,
    centers: &[(String, BlowupCenter)],
) -> Result<(FourfoldH4, bool)> {
    let mut cur = y.clone();
    let mut seen = BTreeSet::new();
    let mut simple = true;
    for (label, c) in centers {
        if matches!(c, BlowupCenter::Surface { .. }) && !seen.insert(label.clone()) {
            simple = false;
        }
        cur = blowup_h4(&cur, c)?;
    }
    Ok((cur, simple))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Correspondence {
    pub label: String,
    pub multiplier: i64,
}

impl Correspondence {
    pub fn new(label: impl Into<String>, multiplier: i64) -> Self {
        Correspondence {
            label: label.into(),
            multiplier,
        }
    }
}

/// Integer combination of correspondences to pairwise disjoint surfaces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Combination {
    terms: Vec<(i64, Correspondence)>,
}

impl Combination {
    pub fn new(terms: Vec<(i64, Correspondence)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for (_, c) in &terms {
            if !seen.insert(c.label.as_str()) {
                return Err(Error::Precondition(format!("repeated label {}", c.label)));
            }
        }
        Ok(Combination { terms })
    }

    pub fn terms(&self) -> &[(i64, Correspondence)] {
        &self.terms
    }
}

/// `Σ c_i² e_i`; there are no cross terms between disjoint surfaces.
pub fn combine_pairing(c: &Combination) -> i64 {
    c.terms.iter().map(|(k, t)| k * k * t.multiplier).sum()
}

/// Receiving index on `X` to pairing multiplier on `F`. With
/// `b(Φx, Φy) = −(x·y)` the sign is absorbed and the map is the identity.
pub fn receiving_multiplier_on_f(e_on_x: i64) -> i64 {
    e_on_x
}

/// Multiplier of the Prym family attached to an index-`e` correspondence.
pub fn prym_multiplier(e: i64) -> i64 {
    2 * e
}

/// How the residue correspondence `k·[C]*` scales the pairing.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// Pairings scale by `k²`.
    #[default]
    Quadratic,
    /// Pairings scale by `k`.
    #[serde(rename = "paper")]
    PaperLiteral,
}

impl FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quadratic" => Ok(Convention::Quadratic),
            "paper" | "paper-literal" => Ok(Convention::PaperLiteral),
            _ => Err(Error::Parse(format!("unknown convention {s:?}"))),
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::Quadratic => "quadratic",
            Convention::PaperLiteral => "paper",
        })
    }
}

/// Multiplier of the residue correspondence built from degree-`e` curves,
/// starting from multiplier `e0`.
pub fn residue_transform(e0: i64, e: i64, convention: Convention) -> Result<i64> {
    if e < 2 {
        return Err(Error::Precondition(format!("curve degree e = {e} < 2")));
    }
    let k = 2 * e - 3;
    Ok(match convention {
        Convention::Quadratic => k * k * e0,
        Convention::PaperLiteral => k * e0,
    })
}

/// The reduction step for an odd residue multiplier `r`: subtract
/// `a = (r − 1)/2` copies of the index-2 correspondence of lines meeting a line.
#[derive(Clone, Debug, Serialize)]
pub struct OddIndexReduction {
    pub residue: i64,
    pub a: i64,
    /// `r − 2a`, subtracting multipliers linearly.
    pub linear_total: i64,
    /// `r + 2a²`, the disjoint-union rule of [`combine_pairing`].
    pub quadratic_total: i64,
}

pub fn odd_index_reduction(e0: i64, e: i64, convention: Convention) -> Result<OddIndexReduction> {
    let r = residue_transform(e0, e, convention)?;
    if r.is_even() {
        return Err(Error::Precondition(format!("residue multiplier {r} is even")));
    }
    let a = (r - 1) / 2;
    let comb = Combination::new(vec![
        (1, Correspondence::new("residue", r)),
        (-a, Correspondence::new("lines", 2)),
    ])?;
    Ok(OddIndexReduction {
        residue: r,
        a,
        linear_total: r - 2 * a,
        quadratic_total: combine_pairing(&comb),
    })
}

/// `(φ, φ̃)` index constants for the rational maps through `K(S)`.
pub fn rational_map_indices() -> (i64, i64) {
    (-1, 1)
}

#[derive(Clone, Debug, Serialize)]
pub struct ParityReport {
    pub gcd: i64,
    pub all_even: bool,
    pub all_nonpositive: bool,
    /// Why no solution can exist, when that follows without search.
    pub certificate: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct JacobianSearch {
    pub multipliers: Vec<i64>,
    pub bound: i64,
    /// Coefficient vectors `c` with `Σ c_i² e_i = 1`.
    pub solutions: Vec<Vec<i64>>,
    pub parity: ParityReport,
}

const SEARCH_LIMIT: u128 = 50_000_000;

/// All `c` with `|c_i| ≤ bound` and `Σ c_i² e_i = 1`.
pub fn potential_jacobian_search(multipliers: &[i64], bound: i64) -> Result<JacobianSearch> {
    if bound < 1 {
        return Err(Error::Precondition("coefficient bound must be ≥ 1".into()));
    }
    let k = multipliers.len();
    let width = (2 * bound + 1) as u128;
    if width.checked_pow(k as u32).is_none_or(|n| n > SEARCH_LIMIT) {
        return Err(Error::Precondition(format!(
            "search space ({width}^{k}) too large"
        )));
    }
    let gcd = multipliers.iter().fold(0i64, |g, &e| g.gcd(&e));
    let all_even = multipliers.iter().all(|e| e.is_even());
    let all_nonpositive = multipliers.iter().all(|&e| e <= 0);
    let certificate = if all_even {
        Some("every multiplier is even, so Σ c_i² e_i is even".to_string())
    } else if gcd != 1 {
        Some(format!("{gcd} divides Σ c_i² e_i"))
    } else if all_nonpositive {
        Some("every multiplier is ≤ 0".to_string())
    } else {
        None
    };

    let mut solutions = Vec::new();
    let mut c = vec![-bound; k];
    if k > 0 {
        loop {
            let total: i64 = c.iter().zip(multipliers).map(|(x, e)| x * x * e).sum();
            if total == 1 {
                solutions.push(c.clone());
            }
            let mut i = 0;
            while i < k && c[i] == bound {
                c[i] = -bound;
                i += 1;
            }
            if i == k {
                break;
            }
            c[i] += 1;
        }
    }
    solutions.sort();
    Ok(JacobianSearch {
        multipliers: multipliers.to_vec(),
        bound,
        solutions,
        parity: ParityReport {
            gcd,
            all_even,
            all_nonpositive,
            certificate,
        },
    })
}
