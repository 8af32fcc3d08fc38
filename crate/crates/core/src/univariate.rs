//! Dense univariate polynomials with integer coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// `coeffs[i]` is the coefficient of `x^i`. Trailing zeros are trimmed, so the
/// zero polynomial has no coefficients at all.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct UniPoly {
    coeffs: Vec<BigInt>,
}

impl UniPoly {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Single term `coeff * x^degree`.
    pub fn monomial(coeff: BigInt, degree: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); degree + 1];
        coeffs[degree] = coeff;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Adds `coeff * x^degree` in place.
    pub fn add_term(&mut self, coeff: &BigInt, degree: usize) {
        if self.coeffs.len() <= degree {
            self.coeffs.resize(degree + 1, BigInt::zero());
        }
        self.coeffs[degree] += coeff;
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Number of leading zero coefficients, i.e. the multiplicity of the root 0.
    pub fn low_order(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Divides out the largest power of `x` that divides `self`.
    pub fn strip_low_order(&self) -> Self {
        Self::new(self.coeffs[self.low_order()..].to_vec())
    }

    /// Cauchy bound `1 + max |a_i / a_n|`, rounded up to an integer. Every
    /// complex root has modulus strictly below the returned value.
    pub fn cauchy_bound(&self) -> Option<BigInt> {
        let lead = self.leading()?.abs();
        let max = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero);
        let q = BigRational::new(max, lead);
        Some(q.ceil().to_integer() + BigInt::one())
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (deg, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let abs = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            first = false;
            match deg {
                0 => write!(f, "{abs}")?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{abs}*")?;
                    }
                    if deg == 1 {
                        f.write_str("x")?;
                    } else {
                        write!(f, "x^{deg}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trims_and_displays() {
        let p = UniPoly::from_i64(&[0, -2, 1, 0, 0]);
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.to_string(), "x^2 - 2*x");
        assert_eq!(UniPoly::from_i64(&[0, 0]).to_string(), "0");
    }

    #[test]
    fn derivative_and_eval() {
        let p = UniPoly::from_i64(&[1, 0, 3]);
        assert_eq!(p.derivative(), UniPoly::from_i64(&[0, 6]));
        assert_eq!(p.eval(&BigInt::from(2)), BigInt::from(13));
    }

    #[test]
    fn cauchy_bound_exceeds_roots() {
        // roots 2 and 3
        let p = UniPoly::from_i64(&[6, -5, 1]);
        assert_eq!(p.cauchy_bound(), Some(BigInt::from(7)));
        assert_eq!(UniPoly::zero().cauchy_bound(), None);
    }
}
