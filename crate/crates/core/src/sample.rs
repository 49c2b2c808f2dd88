//! Seeded random generators for classes in `Λ`.
//!
//! All randomness goes through [`Xoshiro256PlusPlus`] seeded with
//! `seed_from_u64`, so a seed fixes every sample.

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::bb::{self, ExceptionalClass, H2Class, DELTA0, RANK};
use crate::error::Result;

pub type SampleRng = Xoshiro256PlusPlus;

pub fn rng(seed: u64) -> SampleRng {
    Xoshiro256PlusPlus::seed_from_u64(seed)
}

/// Random vector supported on the summands other than the first hyperbolic
/// plane and `δ0`, with a few small nonzero entries.
fn random_tail(rng: &mut SampleRng) -> H2Class {
    let mut c = [0i64; RANK];
    let nnz = rng.random_range(0..=4);
    for _ in 0..nnz {
        let i = rng.random_range(2..DELTA0);
        c[i] = rng.random_range(-2..=2);
    }
    H2Class::new(&c).expect("fixed length")
}

/// Arbitrary class with entries in `[-bound, bound]`.
pub fn random_class(rng: &mut SampleRng, bound: i64) -> H2Class {
    let c: Vec<i64> = (0..RANK).map(|_| rng.random_range(-bound..=bound)).collect();
    H2Class::new(&c).expect("fixed length")
}

/// Random primitive class (rejection sampling on small entries).
pub fn random_primitive(rng: &mut SampleRng) -> H2Class {
    loop {
        let mut c = [0i64; RANK];
        let nnz = rng.random_range(1..=6);
        for _ in 0..nnz {
            let i = rng.random_range(0..RANK);
            c[i] = rng.random_range(-4..=4);
        }
        let h = H2Class::new(&c).expect("fixed length");
        if matches!(bb::is_primitive(&h), Ok(true)) {
            return h;
        }
    }
}

/// Exceptional class `2â + cδ0` with `c = 2k+1`, `â = x e1 + y f1 + w`, and
/// `y` solved from `b(â, â) = 2k(k+1)`. The overall sign is random.
pub fn random_exceptional(rng: &mut SampleRng) -> ExceptionalClass {
    loop {
        let k = rng.random_range(0..=3i64);
        let x = if rng.random_bool(0.5) { 1 } else { -1 };
        let w = random_tail(rng);
        let need = 2 * k * (k + 1) - w.square();
        // need is even since Λ is even
        let y = need / (2 * x);
        let a_hat = &(&H2Class::e(1).scaled(x) + &H2Class::f(1).scaled(y)) + &w;
        let c = 2 * k + 1;
        let Ok(d) = bb::make_exceptional(&a_hat, c) else {
            continue;
        };
        if d.is_delta0() || rng.random_bool(0.5) {
            return d;
        }
        return ExceptionalClass::new(-d.class()).expect("negation keeps exceptional");
    }
}

/// Odd primitive class of positive square: coefficient 1 on `e1` pairs oddly with `f1`.
pub fn random_odd_polarization(rng: &mut SampleRng) -> H2Class {
    let w = random_tail(rng);
    let t = rng.random_range(-2..=2i64);
    let rest = w.square() - 2 * t * t;
    // square = 2y + rest; pick y so that the square lands in [2, 2 + 2*extra]
    let extra = rng.random_range(0..=6i64);
    let y = (2 - rest) / 2 + extra;
    let l = &(&(&H2Class::e(1) + &H2Class::f(1).scaled(y)) + &w) + &H2Class::delta0().scaled(t);
    debug_assert!(l.square() > 0 && bb::is_odd(&l).unwrap_or(false));
    l
}

/// Even primitive class `2â + (2c+1)δ0` of positive square.
///
/// With `b(â, â) = 2m` the Assumption holds exactly when `m` is odd;
/// `assumption` forces that parity when given.
pub fn random_even_polarization(rng: &mut SampleRng, assumption: Option<bool>) -> H2Class {
    let c = rng.random_range(-2..=1i64);
    let odd = 2 * c + 1;
    let w = random_tail(rng);
    // â = e1 + y f1 + w, b(â,â) = 2y + b(w,w) = 2m
    let half_w = w.square() / 2;
    // need 8m - 2 odd^2 > 0, i.e. m > odd^2 / 4
    let m_min = (odd * odd) / 4 + 1;
    let mut m = m_min + rng.random_range(0..=4i64);
    match assumption {
        Some(true) if m % 2 == 0 => m += 1,
        Some(false) if m % 2 != 0 => m += 1,
        _ => {}
    }
    let y = m - half_w;
    let a_hat = &(&H2Class::e(1) + &H2Class::f(1).scaled(y)) + &w;
    let l = &a_hat.scaled(2) + &H2Class::delta0().scaled(odd);
    debug_assert!(l.square() > 0 && bb::is_even(&l).unwrap_or(false));
    l
}

/// Even primitive class of square 6, `2â + tδ0` with `t` odd and `b(â,â) = (3 + t²)/2`.
pub fn random_cubic_polarization(rng: &mut SampleRng) -> H2Class {
    let t = [-5i64, -3, -1, 1, 3, 5][rng.random_range(0..6)];
    let m = (3 + t * t) / 4;
    let w = random_tail(rng);
    let y = m - w.square() / 2;
    let x = if rng.random_bool(0.5) { 1 } else { -1 };
    let a_hat = &(&H2Class::e(1).scaled(x) + &H2Class::f(1).scaled(x * y)) + &w;
    let l = &a_hat.scaled(2) + &H2Class::delta0().scaled(t);
    debug_assert!(l.square() == 6 && bb::is_even(&l).unwrap_or(false));
    l
}

/// Rank-1 Picard samples satisfying the Assumption, alternating odd and even.
pub fn random_assumption_polarization(rng: &mut SampleRng, i: usize) -> Result<H2Class> {
    let l = if i.is_multiple_of(2) {
        random_odd_polarization(rng)
    } else {
        random_even_polarization(rng, Some(true))
    };
    debug_assert!(bb::assumption_holds(&l)?);
    Ok(l)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samplers_validate() {
        let mut r = rng(11);
        for _ in 0..200 {
            let d = random_exceptional(&mut r);
            assert!(bb::is_exceptional(d.class()));
            let o = random_odd_polarization(&mut r);
            assert!(o.square() > 0 && bb::is_odd(&o).unwrap());
            let want = r.random_bool(0.5);
            let e = random_even_polarization(&mut r, Some(want));
            assert!(e.square() > 0 && bb::is_even(&e).unwrap());
            assert_eq!(bb::assumption_holds(&e).unwrap(), want);
            let g = random_cubic_polarization(&mut r);
            assert_eq!(g.square(), 6);
            assert!(bb::is_even(&g).unwrap() && bb::is_primitive(&g).unwrap());
        }
    }

    #[test]
    fn determinism() {
        let a: Vec<_> = (0..5).map({
            let mut r = rng(3);
            move |_| random_exceptional(&mut r)
        }).collect();
        let b: Vec<_> = (0..5).map({
            let mut r = rng(3);
            move |_| random_exceptional(&mut r)
        }).collect();
        assert_eq!(a, b);
    }
}
