//! Polynomials with integer coefficients and the equations `P = 0` they define.
//!
//! A [`Polynomial`] is always kept in normalized form: like terms are combined,
//! zero terms are dropped, the variable list holds exactly the variables that
//! occur (sorted in natural order, so `z2 < z10`), and monomials are stored in
//! graded-lex order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::univariate::UniPoly;

/// A single term `coeff * prod x_v^e`. Exponent entries are never zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    coeff: BigInt,
    exponents: BTreeMap<usize, u32>,
}

impl Monomial {
    pub fn coeff(&self) -> &BigInt {
        &self.coeff
    }

    pub fn exponents(&self) -> &BTreeMap<usize, u32> {
        &self.exponents
    }

    pub fn exponent(&self, var: usize) -> u32 {
        self.exponents.get(&var).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.exponents.values().sum()
    }

    pub fn is_constant(&self) -> bool {
        self.exponents.is_empty()
    }

    /// `Some((var, exp))` when the monomial involves exactly one variable.
    pub fn pure_power(&self) -> Option<(usize, u32)> {
        match self.exponents.len() {
            1 => self.exponents.iter().next().map(|(&v, &e)| (v, e)),
            _ => None,
        }
    }

    pub fn variables(&self) -> impl Iterator<Item = usize> + '_ {
        self.exponents.keys().copied()
    }

    /// Exponents as a multiset (one entry per variable occurring).
    pub fn exponent_multiset(&self) -> Vec<u32> {
        self.exponents.values().copied().collect()
    }
}

/// Graded-lex order: higher total degree first, then higher exponent of the
/// earliest variable first.
pub fn grlex_cmp(a: &BTreeMap<usize, u32>, b: &BTreeMap<usize, u32>) -> Ordering {
    let da: u32 = a.values().sum();
    let db: u32 = b.values().sum();
    db.cmp(&da).then_with(|| {
        let mut ia = a.iter().peekable();
        let mut ib = b.iter().peekable();
        loop {
            match (ia.peek(), ib.peek()) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Less,
                (None, Some(_)) => return Ordering::Greater,
                (Some(&(&va, &ea)), Some(&(&vb, &eb))) => {
                    if va != vb {
                        // the side holding the earlier variable has the larger exponent there
                        return va.cmp(&vb);
                    }
                    if ea != eb {
                        return eb.cmp(&ea);
                    }
                    ia.next();
                    ib.next();
                }
            }
        }
    })
}

/// Natural ordering of identifiers: the trailing digit run compares numerically.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    fn split(s: &str) -> (&str, &str) {
        let cut = s.trim_end_matches(|c: char| c.is_ascii_digit()).len();
        (&s[..cut], &s[cut..])
    }
    let (pa, da) = split(a);
    let (pb, db) = split(b);
    pa.cmp(pb)
        .then_with(|| {
            let ta = da.trim_start_matches('0');
            let tb = db.trim_start_matches('0');
            ta.len().cmp(&tb.len()).then_with(|| ta.cmp(tb))
        })
        .then_with(|| a.cmp(b))
}

/// A term described by variable names; repeated names multiply.
pub type NamedTerm = (BigInt, Vec<(String, u32)>);

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    variables: Vec<String>,
    monomials: Vec<Monomial>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Builds a normalized polynomial from named terms.
    pub fn from_named_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = NamedTerm>,
    {
        let mut combined: BTreeMap<Vec<(String, u32)>, BigInt> = BTreeMap::new();
        for (coeff, factors) in terms {
            let mut exps: BTreeMap<String, u32> = BTreeMap::new();
            for (name, e) in factors {
                if e > 0 {
                    *exps.entry(name).or_insert(0) += e;
                }
            }
            let key: Vec<(String, u32)> = exps.into_iter().collect();
            *combined.entry(key).or_insert_with(BigInt::zero) += coeff;
        }
        combined.retain(|_, c| !c.is_zero());

        let mut names: Vec<String> = combined
            .keys()
            .flat_map(|k| k.iter().map(|(n, _)| n.clone()))
            .collect();
        names.sort_by(|a, b| natural_cmp(a, b));
        names.dedup();
        let index: BTreeMap<&str, usize> = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();

        let mut monomials: Vec<Monomial> = combined
            .iter()
            .map(|(key, coeff)| Monomial {
                coeff: coeff.clone(),
                exponents: key.iter().map(|(n, e)| (index[n.as_str()], *e)).collect(),
            })
            .collect();
        monomials.sort_by(|a, b| grlex_cmp(&a.exponents, &b.exponents));
        Self {
            variables: names,
            monomials,
        }
    }

    /// Convenience constructor from `(coeff, [(name, exp)])` with small integers.
    pub fn from_terms(terms: &[(i64, &[(&str, u32)])]) -> Self {
        Self::from_named_terms(terms.iter().map(|(c, fs)| {
            (
                BigInt::from(*c),
                fs.iter().map(|(n, e)| (n.to_string(), *e)).collect(),
            )
        }))
    }

    pub fn named_terms(&self) -> Vec<NamedTerm> {
        self.monomials
            .iter()
            .map(|m| {
                let factors = m
                    .exponents
                    .iter()
                    .map(|(&v, &e)| (self.variables[v].clone(), e))
                    .collect();
                (m.coeff.clone(), factors)
            })
            .collect()
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    pub fn is_zero(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.monomials
            .iter()
            .map(Monomial::degree)
            .max()
            .unwrap_or(0)
    }

    /// Constant term (zero when absent).
    pub fn constant_term(&self) -> BigInt {
        self.monomials
            .iter()
            .find(|m| m.is_constant())
            .map(|m| m.coeff.clone())
            .unwrap_or_else(BigInt::zero)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::from_named_terms(self.named_terms().into_iter().map(|(c, f)| (c * k, f)))
    }

    /// Exact value at an assignment given by variable name.
    pub fn evaluate(&self, assignment: &BTreeMap<String, BigInt>) -> Result<BigInt> {
        let values = self
            .variables
            .iter()
            .map(|v| {
                assignment
                    .get(v)
                    .cloned()
                    .ok_or_else(|| Error::MissingVariable(v.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.evaluate_at(&values))
    }

    /// Exact value at `values[i]` for variable `i`.
    pub fn evaluate_at(&self, values: &[BigInt]) -> BigInt {
        assert_eq!(values.len(), self.variables.len(), "assignment length");
        self.monomials
            .iter()
            .map(|m| {
                m.exponents.iter().fold(m.coeff.clone(), |acc, (&v, &e)| {
                    acc * num_traits::pow(values[v].clone(), e as usize)
                })
            })
            .sum()
    }

    pub fn evaluate_u64(&self, values: &[u64]) -> BigInt {
        let big: Vec<BigInt> = values.iter().map(|&v| BigInt::from(v)).collect();
        self.evaluate_at(&big)
    }

    pub fn is_homogeneous(&self) -> Result<bool> {
        let first = self
            .monomials
            .first()
            .ok_or(Error::ZeroPolynomial)?
            .degree();
        Ok(self.monomials.iter().all(|m| m.degree() == first))
    }

    /// Substitutes the same variable for every variable in the chosen monomials
    /// and combines like powers.
    pub fn collapse_to_univariate(&self, subset: &[usize]) -> Result<UniPoly> {
        if subset.is_empty() {
            return Err(Error::EmptySubset);
        }
        let mut out = UniPoly::zero();
        for &i in subset {
            let m = self.monomials.get(i).ok_or(Error::MonomialIndex {
                index: i,
                len: self.monomials.len(),
            })?;
            out.add_term(&m.coeff, m.degree() as usize);
        }
        Ok(out)
    }

    pub fn collapse_all(&self) -> UniPoly {
        let mut out = UniPoly::zero();
        for m in &self.monomials {
            out.add_term(&m.coeff, m.degree() as usize);
        }
        out
    }

    /// Smallest positive integer `k` with `P(k, ..., k) = 0`, if any.
    pub fn trivial_constant_solution(&self) -> Option<BigInt> {
        smallest_positive_integer_root(&self.collapse_all())
    }
}

/// Smallest positive integer root of `p`; the zero polynomial vanishes at 1.
///
/// After removing the factor `x^t`, any positive integer root divides the
/// constant term and lies below the Cauchy bound, so only those divisors are
/// evaluated.
pub fn smallest_positive_integer_root(p: &UniPoly) -> Option<BigInt> {
    if p.is_zero() {
        return Some(BigInt::one());
    }
    let q = p.strip_low_order();
    if q.degree() == Some(0) {
        return None;
    }
    let c0 = q.coeffs()[0].abs();
    let bound = q.cauchy_bound()?;
    let limit = if bound < c0 {
        bound.clone()
    } else {
        c0.clone()
    };

    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= c0 && d <= limit {
        if (&c0 % &d).is_zero() {
            small.push(d.clone());
            let co = &c0 / &d;
            if co != d && co <= limit {
                large.push(co);
            }
        }
        d += 1;
    }
    small
        .into_iter()
        .chain(large.into_iter().rev())
        .find(|k| q.eval(k).is_zero())
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::from_named_terms(self.named_terms().into_iter().chain(rhs.named_terms()))
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&BigInt::from(-1))
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let a = self.named_terms();
        let b = rhs.named_terms();
        Polynomial::from_named_terms(a.iter().flat_map(|(ca, fa)| {
            b.iter().map(move |(cb, fb)| {
                let mut f = fa.clone();
                f.extend(fb.iter().cloned());
                (ca * cb, f)
            })
        }))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, m) in self.monomials.iter().enumerate() {
            let neg = m.coeff.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = m.coeff.abs();
            if m.is_constant() {
                write!(f, "{abs}")?;
                continue;
            }
            if !abs.is_one() {
                write!(f, "{abs}*")?;
            }
            for (j, (&v, &e)) in m.exponents.iter().enumerate() {
                if j > 0 {
                    f.write_str("*")?;
                }
                f.write_str(&self.variables[v])?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

/// The equation `poly = 0`, with the global sign fixed so that the first
/// monomial in graded-lex order is positive.
#[derive(Debug, Clone, Eq)]
pub struct Equation {
    poly: Polynomial,
    pub source_lhs: Option<String>,
    pub source_rhs: Option<String>,
}

impl Equation {
    pub fn new(poly: Polynomial) -> Self {
        let poly = match poly.monomials.first() {
            Some(m) if m.coeff.is_negative() => -&poly,
            _ => poly,
        };
        Self {
            poly,
            source_lhs: None,
            source_rhs: None,
        }
    }

    /// `lhs = rhs`, i.e. `lhs - rhs = 0`.
    pub fn from_sides(lhs: &Polynomial, rhs: &Polynomial) -> Self {
        Self::new(lhs - rhs)
    }

    pub fn poly(&self) -> &Polynomial {
        &self.poly
    }

    /// Fails on the zero polynomial, which analysis entry points reject.
    pub fn nonzero_poly(&self) -> Result<&Polynomial> {
        if self.poly.is_zero() {
            Err(Error::ZeroPolynomial)
        } else {
            Ok(&self.poly)
        }
    }

    pub fn variables(&self) -> &[String] {
        self.poly.variables()
    }

    pub fn is_linear(&self) -> bool {
        self.poly.total_degree() <= 1
    }
}

impl PartialEq for Equation {
    fn eq(&self, other: &Self) -> bool {
        self.poly == other.poly
    }
}

impl std::hash::Hash for Equation {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.poly.hash(state);
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = 0", self.poly)
    }
}
