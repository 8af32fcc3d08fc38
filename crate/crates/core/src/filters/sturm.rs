//! Exact positive-root detection with Sturm sequences.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::univariate::UniPoly;

/// Sturm sequence `p, p', -rem(p, p'), ...`, each entry rescaled by a
/// positive constant to a primitive integer polynomial.
pub fn sturm_sequence(p: &UniPoly) -> Vec<UniPoly> {
    let mut seq = vec![p.clone()];
    let d = primitive(&to_rational(&p.derivative()));
    if d.is_zero() {
        return seq;
    }
    seq.push(d);
    loop {
        let n = seq.len();
        let r = remainder(&to_rational(&seq[n - 2]), &to_rational(&seq[n - 1]));
        if r.iter().all(Zero::is_zero) {
            return seq;
        }
        let neg: Vec<BigRational> = r.into_iter().map(|c| -c).collect();
        seq.push(primitive(&neg));
    }
}

fn to_rational(p: &UniPoly) -> Vec<BigRational> {
    p.coeffs()
        .iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect()
}

/// Remainder of `a` divided by `b` (both low-to-high).
fn remainder(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead = &b[db];
    while r.len() > db {
        let top = r.len() - 1;
        let f = &r[top] / lead;
        if !f.is_zero() {
            let shift = top - db;
            for (i, c) in b.iter().enumerate() {
                r[shift + i] -= &f * c;
            }
        }
        r.pop();
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
    }
    r
}

/// Positive multiple of `p` with coprime integer coefficients.
fn primitive(p: &[BigRational]) -> UniPoly {
    let lcm = p.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = p.iter().map(|q| q.numer() * (&lcm / q.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() {
        return UniPoly::zero();
    }
    UniPoly::new(ints.into_iter().map(|c| c / &g).collect())
}

fn variations<'a>(signs: impl Iterator<Item = &'a BigInt>) -> usize {
    let mut last = 0;
    let mut count = 0;
    for c in signs {
        let s = if c.is_positive() {
            1
        } else if c.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Number of distinct real roots in `(0, +inf)`.
pub fn positive_root_count(p: &UniPoly) -> usize {
    let q = p.strip_low_order();
    if q.degree().unwrap_or(0) == 0 {
        return 0;
    }
    let seq = sturm_sequence(&q);
    let zero = BigInt::zero();
    let at_zero = variations(seq.iter().map(|s| s.coeffs().first().unwrap_or(&zero)));
    let at_inf = variations(seq.iter().filter_map(|s| s.leading()));
    at_zero - at_inf
}

/// Whether `p` vanishes somewhere on `(0, +inf)`; the zero polynomial does.
///
/// After dividing out `x^t`, 0 is not a root, and no root exceeds the Cauchy
/// bound, so the count `V(0) - V(+inf)` covers exactly `(0, B]`.
pub fn sturm_positive_root(p: &UniPoly) -> bool {
    p.is_zero() || positive_root_count(p) > 0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn up(c: &[i64]) -> UniPoly {
        UniPoly::from_i64(c)
    }

    #[test]
    fn fixed_cases() {
        assert!(sturm_positive_root(&up(&[0, -2, 1])));
        assert!(!sturm_positive_root(&up(&[0, 0, 1])));
        assert!(!sturm_positive_root(&up(&[1, 0, 1])));
        assert!(sturm_positive_root(&UniPoly::zero()));
        assert!(!sturm_positive_root(&up(&[5])));
    }

    #[test]
    fn counts_distinct_roots() {
        // (x-1)^2 (x-2) (x+3)
        let p = up(&[-6, 13, -7, -1, 1]);
        assert_eq!(positive_root_count(&p), 2);
        // x^2 - 2 has one positive root
        assert_eq!(positive_root_count(&up(&[-2, 0, 1])), 1);
        // (x+1)(x+2)
        assert_eq!(positive_root_count(&up(&[2, 3, 1])), 0);
    }
}
