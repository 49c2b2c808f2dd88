use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::int::{self, IntRow};
use super::{Int, Rat};
use crate::error::{Error, Result};

/// Dense matrix over the rationals, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parse `"p"` or `"p/q"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(p, q))
        }
        None => Ok(Rat::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Common denominator of a slice of rationals.
pub fn common_denominator(v: &[Rat]) -> Int {
    v.iter().fold(Int::one(), |l, x| l.lcm(x.denom()))
}

/// Scale a rational vector to a primitive-free integer vector `d * v`, returning `d`.
pub fn clear_denominators(v: &[Rat]) -> (Int, IntRow) {
    let d = common_denominator(v);
    let row = v
        .iter()
        .map(|x| x.numer() * (&d / x.denom()))
        .collect();
    (d, row)
}

pub fn to_rat_row(v: &[Int]) -> Vec<Rat> {
    v.iter().map(|x| Rat::from_integer(x.clone())).collect()
}

impl Mat {
    pub fn new(rows: usize, cols: usize, data: Vec<Rat>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Mat { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Build from integer rows; panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Mat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| rat(x)).collect())
                .collect(),
        )
        .expect("ragged integer matrix")
    }

    pub fn from_int_rows(rows: &[IntRow], cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols);
            data.extend(r.iter().map(|x| Rat::from_integer(x.clone())));
        }
        Mat {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn diagonal(d: &[Rat]) -> Self {
        let mut m = Mat::zeros(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m.set(i, i, x.clone());
        }
        m
    }

    /// Block-diagonal sum.
    pub fn direct_sum(blocks: &[&Mat]) -> Self {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = Mat::zeros(r, c);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.set(r0 + i, c0 + j, b.get(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Result<Mat> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[Rat]) -> Result<Vec<Rat>> {
        if v.len() != self.rows {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} rows",
                v.len(),
                self.rows
            )));
        }
        let mut out = vec![Rat::zero(); self.cols];
        for (i, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let b = self.get(i, j);
                if !b.is_zero() {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Bilinear pairing `x^T M y`.
    pub fn pair(&self, x: &[Rat], y: &[Rat]) -> Result<Rat> {
        if y.len() != self.cols {
            return Err(Error::Dimension("pairing length mismatch".into()));
        }
        let xm = self.vec_mul(x)?;
        Ok(xm.iter().zip(y).map(|(a, b)| a * b).sum())
    }

    pub fn scale(&self, s: &Rat) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn neg(&self) -> Mat {
        self.scale(&rat(-1))
    }

    pub fn add(&self, other: &Mat) -> Result<Mat> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Dimension("shape mismatch in add".into()));
        }
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    pub fn trace(&self) -> Rat {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    /// Integer rows scaled by a common denominator `d`, returning `(d, rows)`.
    pub fn scaled_int(&self) -> (Int, Vec<IntRow>) {
        let d = common_denominator(&self.data);
        let rows = (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|x| x.numer() * (&d / x.denom()))
                    .collect()
            })
            .collect();
        (d, rows)
    }

    /// Integer rows; fails if any entry is non-integral.
    pub fn to_int_rows(&self) -> Result<Vec<IntRow>> {
        if !self.is_integral() {
            return Err(Error::NonInteger("matrix has fractional entries".into()));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.to_integer()).collect())
            .collect())
    }

    pub fn determinant(&self) -> Result<Rat> {
        if !self.is_square() {
            return Err(Error::Dimension("determinant of non-square matrix".into()));
        }
        let (d, rows) = self.scaled_int();
        let det = int::det_bareiss(&rows);
        Ok(Rat::new(det, num_traits::pow(d, self.rows)))
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut rows: Vec<IntRow> = (0..self.rows)
            .map(|i| clear_denominators(self.row(i)).1)
            .collect();
        let pivots = int::rref_fraction_free(&mut rows, self.cols);
        let mut out = Mat::zeros(pivots.len(), self.cols);
        for (r, &p) in pivots.iter().enumerate() {
            let pv = rows[r][p].clone();
            for j in 0..self.cols {
                if !rows[r][j].is_zero() {
                    out.set(r, j, Rat::new(rows[r][j].clone(), pv.clone()));
                }
            }
        }
        (out, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : M x = 0}` as rational vectors, one per free column.
    pub fn nullspace(&self) -> Vec<Vec<Rat>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![Rat::zero(); self.cols];
                x[f] = Rat::one();
                for (i, &p) in pivots.iter().enumerate() {
                    x[p] = -r.get(i, f).clone();
                }
                x
            })
            .collect()
    }

    /// Basis of `{x : x M = 0}`.
    pub fn left_nullspace(&self) -> Vec<Vec<Rat>> {
        self.transpose().nullspace()
    }

    pub fn inverse(&self) -> Result<Mat> {
        if !self.is_square() {
            return Err(Error::Dimension("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut rows: Vec<IntRow> = (0..n)
            .map(|i| {
                let (_, mut r) = clear_denominators(self.row(i));
                let scale = common_denominator(self.row(i));
                r.extend((0..n).map(|j| if i == j { scale.clone() } else { Int::zero() }));
                r
            })
            .collect();
        let pivots = int::rref_fraction_free(&mut rows, 2 * n);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        let mut out = Mat::zeros(n, n);
        for i in 0..n {
            let pv = rows[i][i].clone();
            for j in 0..n {
                let x = &rows[i][n + j];
                if !x.is_zero() {
                    out.set(i, j, Rat::new(x.clone(), pv.clone()));
                }
            }
        }
        Ok(out)
    }

    /// Signature `(positive, negative)` of a symmetric matrix.
    pub fn signature(&self) -> Result<(usize, usize)> {
        if !self.is_symmetric() {
            return Err(Error::Precondition("signature needs a symmetric matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let (mut pos, mut neg) = (0, 0);
        let mut active: Vec<usize> = (0..n).collect();
        while !active.is_empty() {
            let pick = active.iter().position(|&i| !a.get(i, i).is_zero());
            let k = match pick {
                Some(p) => active[p],
                None => {
                    // No usable diagonal entry: mix two coordinates with a nonzero cross term.
                    let mut found = None;
                    'outer: for &i in &active {
                        for &j in &active {
                            if i != j && !a.get(i, j).is_zero() {
                                found = Some((i, j));
                                break 'outer;
                            }
                        }
                    }
                    let Some((i, j)) = found else { break };
                    // e_i <- e_i + e_j
                    for &t in &active {
                        let v = a.get(t, i) + a.get(t, j);
                        a.set(t, i, v);
                    }
                    for &t in &active {
                        let v = a.get(i, t) + a.get(j, t);
                        a.set(i, t, v);
                    }
                    i
                }
            };
            let p = a.get(k, k).clone();
            if p.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            active.retain(|&i| i != k);
            for &i in &active {
                let f = a.get(i, k) / &p;
                if f.is_zero() {
                    continue;
                }
                for &j in &active {
                    let v = a.get(i, j) - &f * a.get(k, j);
                    a.set(i, j, v);
                }
            }
        }
        Ok((pos, neg))
    }
}

impl Serialize for Mat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.to_string()).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Mat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<String>> = Vec::deserialize(d)?;
        let parsed: Vec<Vec<Rat>> = rows
            .iter()
            .map(|r| r.iter().map(|x| parse_rat(x)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()
            .map_err(D::Error::custom)?;
        Mat::from_rows(parsed).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_roundtrip() {
        let m = Mat::from_i64(&[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Mat::identity(2));
        assert!(Mat::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_err());
    }

    #[test]
    fn nullspace_is_killed() {
        let m = Mat::from_i64(&[&[1, 2, 3], &[4, 5, 6]]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        let col = Mat::from_rows(ns.clone()).unwrap().transpose();
        assert_eq!(m.mul(&col).unwrap(), Mat::zeros(2, 1));
    }

    #[test]
    fn determinant_with_fractions() {
        let m = Mat::from_rows(vec![
            vec![rat_frac(1, 2), rat(1)],
            vec![rat(0), rat_frac(2, 3)],
        ])
        .unwrap();
        assert_eq!(m.determinant().unwrap(), rat_frac(1, 3));
    }

    #[test]
    fn signature_of_hyperbolic_plane() {
        let u = Mat::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(u.signature().unwrap(), (1, 1));
        let m = Mat::from_i64(&[&[-2, 1], &[1, -2]]);
        assert_eq!(m.signature().unwrap(), (0, 2));
    }

    #[test]
    fn json_roundtrip() {
        let m = Mat::from_rows(vec![vec![rat_frac(-3, 4), rat(2)]]).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"[["-3/4","2"]]"#);
        let back: Mat = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
    }
}
