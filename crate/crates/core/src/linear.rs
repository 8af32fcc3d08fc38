//! Partition regularity of single linear equations and their two-class
//! asymptotic structure.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    columns_condition, extend_certificate, least_zero_sum_subset, ColumnsCertificate, QMatrix,
    SUBSET_CAP,
};
use crate::model::Equation;

/// Classes `I_1 >> ... >> I_s` of variable indices, largest first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct OrderedPartition {
    classes: Vec<Vec<usize>>,
}

impl OrderedPartition {
    /// Checks that the classes are nonempty, disjoint and cover `0..n`.
    /// Each class is sorted; the order of classes is kept.
    pub fn new(mut classes: Vec<Vec<usize>>, n: usize) -> Result<Self> {
        let mut seen = vec![false; n];
        for class in &mut classes {
            if class.is_empty() {
                return Err(Error::InvalidParameter("empty class".into()));
            }
            class.sort_unstable();
            for &i in class.iter() {
                if i >= n || seen[i] {
                    return Err(Error::InvalidParameter(format!(
                        "index {i} repeated or out of range"
                    )));
                }
                seen[i] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidParameter(
                "classes do not cover every variable".into(),
            ));
        }
        Ok(Self { classes })
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Renders as `{x,z} >> {y}` using the given variable names.
    pub fn render(&self, names: &[String]) -> String {
        self.classes
            .iter()
            .map(|c| {
                let items: Vec<&str> = c
                    .iter()
                    .map(|&i| names.get(i).map_or("?", String::as_str))
                    .collect();
                format!("{{{}}}", items.join(","))
            })
            .collect::<Vec<_>>()
            .join(" >> ")
    }
}

impl fmt::Display for OrderedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.classes.iter().flatten().count())
            .map(|i| format!("v{}", i + 1))
            .collect();
        f.write_str(&self.render(&names))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Pr,
    NotPr,
    Unknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pr => "PR",
            Status::NotPr => "NOT_PR",
            Status::Unknown => "UNKNOWN",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// Zero-sum coefficient subset, 0-based indices plus variable names.
    RadoSubset {
        indices: Vec<usize>,
        variables: Vec<String>,
    },
    Columns {
        blocks: Vec<Vec<usize>>,
    },
    /// `P(k, ..., k) = 0`; `k` is a decimal string.
    ConstantSolution {
        k: String,
    },
    /// Inhomogeneous linear case: both a constant solution and a zero-sum subset.
    ConstantAndRado {
        k: String,
        indices: Vec<usize>,
        variables: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    status: Status,
    certificate: Option<Certificate>,
    reasons: Vec<String>,
    notes: Vec<String>,
}

impl Verdict {
    pub fn pr(certificate: Certificate) -> Self {
        Self {
            status: Status::Pr,
            certificate: Some(certificate),
            reasons: Vec::new(),
            notes: Vec::new(),
        }
    }

    /// # Panics
    /// If `reasons` is empty.
    pub fn not_pr(reasons: Vec<String>) -> Self {
        assert!(!reasons.is_empty(), "NOT_PR needs at least one reason");
        Self {
            status: Status::NotPr,
            certificate: None,
            reasons,
            notes: Vec::new(),
        }
    }

    pub fn unknown() -> Self {
        Self {
            status: Status::Unknown,
            certificate: None,
            reasons: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn push_note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        self.certificate.as_ref()
    }

    pub fn reasons(&self) -> &[String] {
        &self.reasons
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }
}

/// Least nonempty `J` (bitmask order) with `sum_{j in J} a_j = 0`.
pub fn rado_condition(coeffs: &[BigInt]) -> Result<Option<Vec<usize>>> {
    if coeffs.len() > SUBSET_CAP {
        return Err(Error::CapExceeded {
            what: "coefficient count",
            cap: SUBSET_CAP,
        });
    }
    Ok(least_zero_sum_subset(coeffs))
}

/// Coefficients of a linear polynomial, one per variable, plus its constant term.
pub fn linear_coefficients(eq: &Equation) -> Result<(Vec<BigInt>, BigInt)> {
    let poly = eq.nonzero_poly()?;
    let degree = poly.total_degree();
    if degree > 1 {
        return Err(Error::Nonlinear(degree));
    }
    let mut coeffs = vec![BigInt::zero(); poly.num_vars()];
    let mut constant = BigInt::zero();
    for m in poly.monomials() {
        match m.pure_power() {
            Some((v, 1)) => coeffs[v] = m.coeff().clone(),
            _ => constant = m.coeff().clone(),
        }
    }
    Ok((coeffs, constant))
}

fn names(eq: &Equation, indices: &[usize]) -> Vec<String> {
    indices.iter().map(|&i| eq.variables()[i].clone()).collect()
}

pub const INHOMOGENEOUS_NOTE: &str =
    "inhomogeneous linear rule: PR iff there is a positive constant solution, \
     or an integer constant solution together with the Rado condition on the homogeneous part";

/// The integer `k` with `P(k, ..., k) = 0` for a linear `P`, if any.
fn integer_constant_solution(coeffs: &[BigInt], constant: &BigInt) -> Option<BigInt> {
    let s: BigInt = coeffs.iter().sum();
    if s.is_zero() {
        return constant.is_zero().then(BigInt::zero);
    }
    let neg = -constant;
    (&neg % &s).is_zero().then(|| neg / s)
}

/// Exact decision for a single linear equation.
pub fn linear_pr_verdict(eq: &Equation) -> Result<Verdict> {
    let (coeffs, constant) = linear_coefficients(eq)?;
    if coeffs.is_empty() {
        return Ok(Verdict::not_pr(vec!["rado".into()])
            .with_note("nonzero constant equation has no solutions"));
    }
    let subset = rado_condition(&coeffs)?;
    if constant.is_zero() {
        return Ok(match subset {
            Some(j) => Verdict::pr(Certificate::RadoSubset {
                variables: names(eq, &j),
                indices: j,
            }),
            None => Verdict::not_pr(vec!["rado".into()]),
        });
    }
    let k = integer_constant_solution(&coeffs, &constant);
    let verdict = match (k, subset) {
        (Some(k), _) if k.is_positive() => {
            Verdict::pr(Certificate::ConstantSolution { k: k.to_string() })
        }
        (Some(k), Some(j)) => Verdict::pr(Certificate::ConstantAndRado {
            k: k.to_string(),
            variables: names(eq, &j),
            indices: j,
        }),
        (k, j) => {
            let mut v = Verdict::not_pr(vec!["inhomogeneous-rado".into()]);
            match k {
                Some(k) => v.push_note(format!(
                    "only a non-positive constant solution exists (k = {k})"
                )),
                None => v.push_note("no integer constant solution"),
            }
            if j.is_none() {
                v.push_note("homogeneous part has no zero-sum coefficient subset");
            }
            v
        }
    };
    Ok(verdict.with_note(INHOMOGENEOUS_NOTE))
}

/// One candidate class structure per zero-sum coefficient subset `J`:
/// `J >> complement`, or the single class when `J` is everything.
pub fn asymptotic_candidates_linear(eq: &Equation) -> Result<Vec<OrderedPartition>> {
    let (coeffs, constant) = linear_coefficients(eq)?;
    if !constant.is_zero() {
        return Err(Error::InvalidParameter(
            "equation has a constant term".into(),
        ));
    }
    let n = coeffs.len();
    let rationals: Vec<BigRational> = coeffs
        .iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect();
    let subsets = crate::linalg::zero_sum_subsets(&rationals)?;
    if subsets.is_empty() {
        return Err(Error::NotPartitionRegular(
            "no zero-sum coefficient subset".into(),
        ));
    }
    subsets
        .into_iter()
        .map(|j| {
            if j.len() == n {
                OrderedPartition::new(vec![j], n)
            } else {
                let rest: Vec<usize> = (0..n).filter(|i| !j.contains(i)).collect();
                OrderedPartition::new(vec![j, rest], n)
            }
        })
        .collect()
}

/// Slack weights keyed by 1-based variable pairs `(a, b)`.
pub type SlackWeights = BTreeMap<(usize, usize), BigRational>;

/// The 1-based slack pairs of the augmented matrix, in column order.
pub fn slack_pairs(n: usize, k: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for i in 2..=k {
        pairs.push((1, i));
        pairs.push((i, 1));
    }
    for j in k + 2..=n {
        pairs.push((k + 1, j));
        pairs.push((j, k + 1));
    }
    pairs.push((1, k + 1));
    pairs
}

/// `q_{1,k+1} = 1` and `q_{a,b} = N - 1` for every other pair.
pub fn standard_slack_weights(n: usize, k: usize, big_n: u64) -> SlackWeights {
    slack_pairs(n, k)
        .into_iter()
        .map(|p| {
            let q = if p == (1, k + 1) {
                BigRational::one()
            } else {
                BigRational::from_integer((big_n - 1).into())
            };
            (p, q)
        })
        .collect()
}

/// Row and column counts of the augmented matrix, both as constructed and
/// as `2n x (3n-1)`, the count stated alongside the construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HlDimensions {
    pub rows: usize,
    pub cols: usize,
    pub stated_rows: usize,
    pub stated_cols: usize,
}

pub fn hl_dimensions(n: usize) -> HlDimensions {
    HlDimensions {
        rows: 2 * n - 2,
        cols: 3 * n - 3,
        stated_rows: 2 * n,
        stated_cols: 3 * n - 1,
    }
}

/// Augmented matrix forcing `I_1 = {1..k}` and `I_2 = {k+1..n}` to be classes
/// of ratio below `N`, with `I_1` dominating `I_2`.
///
/// Columns are `x_1..x_n` followed by one slack column per entry of
/// [`slack_pairs`]. Rows: the equation; for `i` in `2..=k` the pair
/// `N x_1 - x_i - q_{1,i} z`, `-x_1 + N x_i - q_{i,1} z'`; the same pairs
/// anchored at `x_{k+1}` for `j` in `k+2..=n`; finally `x_1 - x_{k+1} - q_{1,k+1} z''`.
pub fn hl_matrix(coeffs: &[BigInt], k: usize, big_n: u64, q: &SlackWeights) -> Result<QMatrix> {
    let n = coeffs.len();
    if k < 1 || k >= n {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= k < n, got k = {k}, n = {n}"
        )));
    }
    if coeffs.iter().any(Zero::is_zero) {
        return Err(Error::InvalidParameter("zero coefficient".into()));
    }
    if big_n < 2 {
        return Err(Error::InvalidParameter(format!(
            "N must be at least 2, got {big_n}"
        )));
    }
    let pairs = slack_pairs(n, k);
    let dims = hl_dimensions(n);
    debug_assert_eq!(n + pairs.len(), dims.cols);
    let mut m = QMatrix::zeros(dims.rows, dims.cols)?;
    let nq = BigRational::from_integer(big_n.into());
    let one = BigRational::one();

    for (c, a) in coeffs.iter().enumerate() {
        m.set(0, c, BigRational::from_integer(a.clone()));
    }
    let weight = |p: (usize, usize)| -> Result<BigRational> {
        let w = q.get(&p).ok_or_else(|| {
            Error::InvalidParameter(format!("missing slack weight q_{{{},{}}}", p.0, p.1))
        })?;
        if !w.is_positive() {
            return Err(Error::InvalidParameter(format!(
                "slack weight q_{{{},{}}} must be positive",
                p.0, p.1
            )));
        }
        Ok(w.clone())
    };
    let mut row = 1;
    for (s, &(a, b)) in pairs.iter().enumerate() {
        let col = n + s;
        let w = weight((a, b))?;
        if (a, b) == (1, k + 1) {
            m.set(row, 0, one.clone());
            m.set(row, k, -one.clone());
        } else {
            // a is the variable scaled by N, b the one subtracted
            m.set(row, a - 1, nq.clone());
            m.set(row, b - 1, -one.clone());
        }
        m.set(row, col, -w);
        row += 1;
    }
    debug_assert_eq!(row, dims.rows);
    Ok(m)
}

/// Builds the augmented matrix with [`standard_slack_weights`] and returns a
/// columns certificate for it.
///
/// The first block predicted by the construction (the columns of `x_1..x_k`,
/// the first `2(k-1)` slack columns and the last slack column) is tried
/// first; if it is not zero-sum the exhaustive search decides.
pub fn verify_hl_choice(coeffs: &[BigInt], k: usize, big_n: u64) -> Result<ColumnsCertificate> {
    if k < 1 || k >= coeffs.len() {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= k < n, got k = {k}, n = {}",
            coeffs.len()
        )));
    }
    if !coeffs[..k].iter().sum::<BigInt>().is_zero() {
        return Err(Error::InvalidParameter(
            "first k coefficients must sum to zero".into(),
        ));
    }
    let n = coeffs.len();
    let m = hl_matrix(coeffs, k, big_n, &standard_slack_weights(n, k, big_n))?;
    let mut first: Vec<usize> = (0..k).collect();
    first.extend(n..n + 2 * (k - 1));
    first.push(m.cols() - 1);
    if let Some(cert) = extend_certificate(&m, &first)? {
        return Ok(cert);
    }
    columns_condition(&m)?.ok_or_else(|| {
        Error::NotPartitionRegular("augmented matrix fails the columns condition".into())
    })
}
