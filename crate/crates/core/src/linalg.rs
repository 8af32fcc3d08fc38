//! Exact rational linear algebra and the columns condition.

use std::fmt;
use std::ops::AddAssign;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Default largest column count accepted by [`columns_condition`].
pub const DEFAULT_COLUMN_CAP: usize = 22;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigRational>,
}

/// Reduced row-echelon form together with rank and pivot columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub matrix: QMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl QMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigRational>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Matrix(
                "matrix must have at least one row and one column".into(),
            ));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                expected: cols,
                found: bad.len(),
            });
        }
        let n = rows.len();
        Self::new(n, cols, rows.into_iter().flatten().collect())
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|&v| BigRational::from_integer(v.into()))
                        .collect()
                })
                .collect(),
        )
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        Self::new(rows, cols, vec![BigRational::zero(); rows * cols])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigRational {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigRational) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigRational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<BigRational> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * q).collect(),
        }
    }

    /// New matrix whose column `j` is column `order[j]` of `self`.
    pub fn select_columns(&self, order: &[usize]) -> Result<Self> {
        let mut entries = Vec::with_capacity(self.rows * order.len());
        for r in 0..self.rows {
            for &c in order {
                if c >= self.cols {
                    return Err(Error::DimensionMismatch {
                        expected: self.cols,
                        found: c + 1,
                    });
                }
                entries.push(self.get(r, c).clone());
            }
        }
        Self::new(self.rows, order.len(), entries)
    }

    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.entries.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).recip();
            for j in 0..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in 0..m.cols {
                    let v = m.get(i, j) - &f * m.get(r, j);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref {
            matrix: m,
            rank: r,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Parses the text format: one row per line, entries are integers or
    /// `p/q`, separated by whitespace or commas. `#` starts a comment; blank
    /// lines are ignored.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or_default().trim();
            if line.is_empty() {
                continue;
            }
            let row = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|tok| !tok.is_empty())
                .map(|tok| {
                    parse_rational(tok)
                        .map_err(|e| Error::Matrix(format!("line {}: {e}", lineno + 1)))
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(Error::Matrix("no rows".into()));
        }
        let cols = rows[0].len();
        if let Some(i) = rows.iter().position(|r| r.len() != cols) {
            return Err(Error::Matrix(format!(
                "row {} has {} entries, expected {cols}",
                i + 1,
                rows[i].len()
            )));
        }
        Self::from_rows(rows)
    }
}

impl fmt::Display for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let line: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

pub fn parse_rational(tok: &str) -> std::result::Result<BigRational, String> {
    let (num, den) = match tok.split_once('/') {
        Some((n, d)) => (n, d),
        None => (tok, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| format!("bad entry `{tok}`"))?;
    let den: BigInt = den.parse().map_err(|_| format!("bad entry `{tok}`"))?;
    if den.is_zero() {
        return Err(format!("zero denominator in `{tok}`"));
    }
    Ok(BigRational::new(num, den))
}

/// Incrementally built echelon basis of a subspace of `Q^dim`.
#[derive(Debug, Clone, Default)]
pub(crate) struct EchelonBasis {
    rows: Vec<(usize, Vec<BigRational>)>,
}

impl EchelonBasis {
    /// Residual of `v` after eliminating against the basis; zero iff `v` is in the span.
    pub fn reduce(&self, v: &[BigRational]) -> Vec<BigRational> {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= &f * r;
                }
            }
        }
        v
    }

    pub fn insert(&mut self, v: &[BigRational]) {
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return;
        };
        let inv = v[p].recip();
        for x in v.iter_mut() {
            *x *= &inv;
        }
        self.rows.push((p, v));
    }
}

/// Whether `v` is a rational combination of `generators`.
pub fn in_span(generators: &[Vec<BigRational>], v: &[BigRational]) -> Result<bool> {
    for g in generators {
        if g.len() != v.len() {
            return Err(Error::DimensionMismatch {
                expected: v.len(),
                found: g.len(),
            });
        }
    }
    let mut basis = EchelonBasis::default();
    for g in generators {
        basis.insert(g);
    }
    Ok(basis.reduce(v).iter().all(Zero::is_zero))
}

/// Ordered column blocks `D_1, ..., D_r` (0-based column indices).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ColumnsCertificate {
    pub blocks: Vec<Vec<usize>>,
}

impl ColumnsCertificate {
    /// Re-checks the certificate against `m` from scratch, using rank
    /// comparisons rather than the search's elimination routine.
    pub fn verify(&self, m: &QMatrix) -> bool {
        let mut seen = vec![false; m.cols()];
        for block in &self.blocks {
            if block.is_empty() {
                return false;
            }
            for &c in block {
                if c >= m.cols() || seen[c] {
                    return false;
                }
                seen[c] = true;
            }
        }
        if !seen.iter().all(|&s| s) {
            return false;
        }
        let mut consumed: Vec<usize> = Vec::new();
        for (t, block) in self.blocks.iter().enumerate() {
            let sum: Vec<BigRational> = (0..m.rows())
                .map(|r| block.iter().map(|&c| m.get(r, c).clone()).sum())
                .collect();
            if t == 0 {
                if !sum.iter().all(Zero::is_zero) {
                    return false;
                }
            } else {
                let base = m.select_columns(&consumed).expect("valid columns");
                let mut aug = QMatrix::zeros(m.rows(), consumed.len() + 1).expect("nonempty");
                for (r, s) in sum.iter().enumerate() {
                    for j in 0..consumed.len() {
                        aug.set(r, j, base.get(r, j).clone());
                    }
                    aug.set(r, consumed.len(), s.clone());
                }
                if aug.rank() != base.rank() {
                    return false;
                }
            }
            consumed.extend(block.iter().copied());
        }
        true
    }

    /// 1-based rendering such as `D1={1,3} D2={2}`.
    pub fn display_one_based(&self) -> String {
        self.blocks
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let items: Vec<String> = b.iter().map(|c| (c + 1).to_string()).collect();
                format!("D{}={{{}}}", i + 1, items.join(","))
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

trait Accum: Clone + Zero + for<'a> AddAssign<&'a Self> {}
impl<T: Clone + Zero + for<'a> AddAssign<&'a T>> Accum for T {}

/// Integer column vectors, in machine width when overflow is impossible.
enum IntVectors {
    Small(Vec<Vec<i128>>),
    Big(Vec<Vec<BigInt>>),
}

impl IntVectors {
    fn new(vectors: Vec<Vec<BigInt>>) -> Self {
        let limit = BigInt::one() << 120;
        let dim = vectors.first().map_or(0, Vec::len);
        let fits = (0..dim).all(|r| vectors.iter().map(|v| v[r].abs()).sum::<BigInt>() < limit);
        if fits {
            Self::Small(
                vectors
                    .iter()
                    .map(|v| v.iter().map(|x| x.to_i128().expect("bounded")).collect())
                    .collect(),
            )
        } else {
            Self::Big(vectors)
        }
    }

    fn first_zero_sum(&self, allowed: u64) -> Option<u64> {
        match self {
            Self::Small(v) => first_zero_sum(v, allowed),
            Self::Big(v) => first_zero_sum(v, allowed),
        }
    }

    fn all_zero_sums(&self, allowed: u64) -> Vec<u64> {
        let mut out = Vec::new();
        let mut from = 0u64;
        loop {
            let next = match self {
                Self::Small(v) => next_zero_sum(v, allowed, from),
                Self::Big(v) => next_zero_sum(v, allowed, from),
            };
            match next {
                Some(m) => {
                    out.push(m);
                    from = m;
                }
                None => return out,
            }
        }
    }
}

fn first_zero_sum<T: Accum>(vectors: &[Vec<T>], allowed: u64) -> Option<u64> {
    next_zero_sum(vectors, allowed, 0)
}

/// Smallest submask of `allowed` greater than `after` whose vectors sum to zero.
fn next_zero_sum<T: Accum>(vectors: &[Vec<T>], allowed: u64, after: u64) -> Option<u64> {
    let dim = vectors.iter().map(Vec::len).max().unwrap_or(0);
    let mut acc = vec![T::zero(); dim];
    let mut sub = after;
    loop {
        sub = sub.wrapping_sub(allowed) & allowed;
        if sub == 0 {
            return None;
        }
        acc.iter_mut().for_each(|a| *a = T::zero());
        let mut bits = sub;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            for (a, x) in acc.iter_mut().zip(&vectors[i]) {
                *a += x;
            }
        }
        if acc.iter().all(Zero::is_zero) {
            return Some(sub);
        }
    }
}

/// Scales rational vectors by the lcm of all denominators.
fn integerize(vectors: &[Vec<BigRational>]) -> Vec<Vec<BigInt>> {
    let lcm = vectors
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    vectors
        .iter()
        .map(|v| v.iter().map(|q| q.numer() * (&lcm / q.denom())).collect())
        .collect()
}

fn mask_to_indices(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

/// Searches for a columns-condition certificate, rejecting matrices with more
/// than [`DEFAULT_COLUMN_CAP`] columns.
pub fn columns_condition(m: &QMatrix) -> Result<Option<ColumnsCertificate>> {
    columns_condition_with_cap(m, DEFAULT_COLUMN_CAP)
}

/// Exact decision of the columns condition.
///
/// Blocks are chosen one at a time: `D_1` is the least (as a bitmask) nonempty
/// zero-sum column set, and each later block is the least nonempty set of
/// remaining columns whose sum lies in the span of the consumed columns.
/// Committing to any admissible block never removes a certificate, since a
/// certificate `D_1, ..., D_r` can be rewritten as `B, D_1 \ B, ..., D_r \ B`.
/// A dead end is therefore a proof that no certificate exists.
pub fn columns_condition_with_cap(m: &QMatrix, cap: usize) -> Result<Option<ColumnsCertificate>> {
    let n = check_cap(m, cap)?;
    let columns: Vec<Vec<BigRational>> = (0..n).map(|c| m.column(c)).collect();
    let Some(first) = IntVectors::new(integerize(&columns)).first_zero_sum(full_mask(n)) else {
        return Ok(None);
    };
    Ok(complete(m, &columns, first))
}

/// Completes a certificate whose first block is `first`, or returns `None`
/// if `first` is not a nonempty zero-sum column set. Because any admissible
/// first block can be extended whenever some certificate exists, a `None`
/// for a zero-sum `first` means the matrix fails the columns condition.
pub fn extend_certificate(m: &QMatrix, first: &[usize]) -> Result<Option<ColumnsCertificate>> {
    let n = check_cap(m, DEFAULT_COLUMN_CAP)?;
    let mut mask = 0u64;
    for &c in first {
        if c >= n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: c + 1,
            });
        }
        mask |= 1 << c;
    }
    let zero_sum = (0..m.rows()).all(|r| {
        first
            .iter()
            .map(|&c| m.get(r, c))
            .sum::<BigRational>()
            .is_zero()
    });
    if mask == 0 || !zero_sum {
        return Ok(None);
    }
    let columns: Vec<Vec<BigRational>> = (0..n).map(|c| m.column(c)).collect();
    Ok(complete(m, &columns, mask))
}

fn check_cap(m: &QMatrix, cap: usize) -> Result<usize> {
    let n = m.cols();
    if n > cap || n > 63 {
        return Err(Error::CapExceeded {
            what: "column count",
            cap: cap.min(63),
        });
    }
    Ok(n)
}

fn full_mask(n: usize) -> u64 {
    (1u64 << n) - 1
}

fn complete(m: &QMatrix, columns: &[Vec<BigRational>], first: u64) -> Option<ColumnsCertificate> {
    let n = columns.len();
    let full = full_mask(n);
    let mut blocks = vec![mask_to_indices(first)];
    let mut consumed = first;
    let mut basis = EchelonBasis::default();
    for c in mask_to_indices(first) {
        basis.insert(&columns[c]);
    }
    while consumed != full {
        let remaining = full & !consumed;
        let residuals: Vec<Vec<BigRational>> = (0..n)
            .map(|c| {
                if remaining >> c & 1 == 1 {
                    basis.reduce(&columns[c])
                } else {
                    vec![BigRational::zero(); m.rows()]
                }
            })
            .collect();
        let block = IntVectors::new(integerize(&residuals)).first_zero_sum(remaining)?;
        for c in mask_to_indices(block) {
            basis.insert(&columns[c]);
        }
        blocks.push(mask_to_indices(block));
        consumed |= block;
    }
    Some(ColumnsCertificate { blocks })
}

/// Largest coefficient list accepted by [`zero_sum_subsets`].
pub const SUBSET_CAP: usize = 22;

/// All nonempty index sets with zero coefficient sum, in bitmask order.
pub fn zero_sum_subsets(coeffs: &[BigRational]) -> Result<Vec<Vec<usize>>> {
    if coeffs.len() > SUBSET_CAP {
        return Err(Error::CapExceeded {
            what: "coefficient count",
            cap: SUBSET_CAP,
        });
    }
    let vectors: Vec<Vec<BigRational>> = coeffs.iter().map(|c| vec![c.clone()]).collect();
    let full = (1u64 << coeffs.len()) - 1;
    Ok(IntVectors::new(integerize(&vectors))
        .all_zero_sums(full)
        .into_iter()
        .map(mask_to_indices)
        .collect())
}

/// Least (bitmask order) nonempty zero-sum subset of integer coefficients.
pub fn least_zero_sum_subset(coeffs: &[BigInt]) -> Option<Vec<usize>> {
    if coeffs.len() > 63 {
        return None;
    }
    let vectors = coeffs.iter().map(|c| vec![c.clone()]).collect();
    let full = (1u64 << coeffs.len()) - 1;
    IntVectors::new(vectors)
        .first_zero_sum(full)
        .map(mask_to_indices)
}
