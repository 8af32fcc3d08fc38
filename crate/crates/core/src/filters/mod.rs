//! Necessary conditions for partition regularity and the analysis pipeline.
//!
//! Every filter here concerns solutions that are not constant. An equation
//! with a constant solution `(k, ..., k)` is trivially partition regular, so
//! [`analyze`] checks for one before running any filter.

pub mod fermat;
pub mod sturm;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::least_zero_sum_subset;
use crate::linear::{linear_pr_verdict, Certificate, Status, Verdict};
use crate::model::{Equation, Polynomial};
use crate::univariate::UniPoly;

pub use fermat::{filter_fermat_catalan, normalize_fermat_catalan};
pub use sturm::sturm_positive_root;

/// Largest monomial count accepted by [`filter_maximal_root`].
pub const MAXIMAL_ROOT_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FilterResult {
    pub filter_name: &'static str,
    pub applicable: bool,
    pub fired: bool,
    pub evidence: BTreeMap<String, String>,
    pub citation: &'static str,
}

impl FilterResult {
    /// # Panics
    /// If `evidence` is empty.
    pub fn fired(name: &'static str, evidence: BTreeMap<String, String>) -> Self {
        assert!(!evidence.is_empty(), "a firing filter must carry evidence");
        Self {
            filter_name: name,
            applicable: true,
            fired: true,
            evidence,
            citation: citation(name),
        }
    }

    pub fn passed(name: &'static str, evidence: BTreeMap<String, String>) -> Self {
        Self {
            filter_name: name,
            applicable: true,
            fired: false,
            evidence,
            citation: citation(name),
        }
    }

    pub fn inapplicable(name: &'static str) -> Self {
        Self {
            filter_name: name,
            applicable: false,
            fired: false,
            evidence: BTreeMap::new(),
            citation: citation(name),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CatalogueEntry {
    pub name: &'static str,
    pub citation: &'static str,
    pub applies_to: &'static str,
}

const CATALOGUE: &[CatalogueEntry] = &[
    CatalogueEntry {
        name: "rado",
        citation: "linear homogeneous: PR iff some nonempty J has sum_{j in J} a_j = 0",
        applies_to: "linear equations without constant term",
    },
    CatalogueEntry {
        name: "inhomogeneous-rado",
        citation: "linear with constant term: PR iff a positive constant solution exists, or an integer constant solution exists and the homogeneous part satisfies the Rado condition",
        applies_to: "linear equations with a nonzero constant term",
    },
    CatalogueEntry {
        name: "homogeneous-rado",
        citation: "homogeneous P PR => some nonempty set of monomial coefficients sums to 0",
        applies_to: "homogeneous polynomials",
    },
    CatalogueEntry {
        name: "single-variable-leading",
        citation: "P = sum a_i x_i^{d_i} + R, deg R < min d_i (or every monomial in one variable) PR => some nonempty J of equal d_j has sum a_j = 0",
        applies_to: "each variable has a single-variable leading term",
    },
    CatalogueEntry {
        name: "exponent-rado",
        citation: "P PR => some pair of monomials has nonempty exponent sub-multisets with equal sums",
        applies_to: "at least two monomials",
    },
    CatalogueEntry {
        name: "maximal-root",
        citation: "P PR => some nonempty monomial subset, with every variable set to t, vanishes identically or at some t > 0",
        applies_to: "at most 20 monomials",
    },
    CatalogueEntry {
        name: "R1",
        citation: "a x^n + b y^n = P(z), n >= 2, deg P = k not in {n, n-1}, no constant solution => not PR",
        applies_to: "two pure n-th powers and a polynomial in one other variable",
    },
    CatalogueEntry {
        name: "R2",
        citation: "a x^n + b y^n = c z^n, a + b = 0, n > 3 => not PR",
        applies_to: "three pure n-th powers",
    },
    CatalogueEntry {
        name: "R3",
        citation: "a x^n - a y^n = sum P_i(z_i), degrees pairwise distinct and outside {n, n-1} => not PR",
        applies_to: "two pure n-th powers and single-variable polynomials in two or more other variables",
    },
    CatalogueEntry {
        name: "R4",
        citation: "x^n - y^n = prod z_i^{k_i}, no subset sum of the k_i equals n or n-1 => not PR",
        applies_to: "unit-coefficient difference of n-th powers and one monomial",
    },
    CatalogueEntry {
        name: "R5",
        citation: "a x + b y = c w^m z^n, a + b != 0, m, n > 1 => not PR",
        applies_to: "two linear terms and one monomial in two other variables",
    },
];

/// Machine-readable list of every rule the pipeline can cite.
pub fn catalogue() -> &'static [CatalogueEntry] {
    CATALOGUE
}

fn citation(name: &str) -> &'static str {
    CATALOGUE
        .iter()
        .find(|e| e.name == name)
        .map(|e| e.citation)
        .unwrap_or_else(|| panic!("filter `{name}` missing from catalogue"))
}

fn render_subset(poly: &Polynomial, indices: &[usize]) -> String {
    let terms = poly.named_terms();
    Polynomial::from_named_terms(indices.iter().map(|&i| terms[i].clone())).to_string()
}

fn ev(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

/// Fires when a homogeneous polynomial has no zero-sum set of coefficients.
pub fn filter_homogeneous_rado(eq: &Equation) -> FilterResult {
    const NAME: &str = "homogeneous-rado";
    let poly = eq.poly();
    if !poly.is_homogeneous().unwrap_or(false) {
        return FilterResult::inapplicable(NAME);
    }
    let coeffs: Vec<BigInt> = poly.monomials().iter().map(|m| m.coeff().clone()).collect();
    match least_zero_sum_subset(&coeffs) {
        Some(j) => FilterResult::passed(NAME, ev(&[("zero_sum_subset", render_subset(poly, &j))])),
        None => FilterResult::fired(
            NAME,
            ev(&[(
                "coefficients",
                format!(
                    "{:?}",
                    coeffs.iter().map(ToString::to_string).collect::<Vec<_>>()
                ),
            )]),
        ),
    }
}

/// Leading single-variable terms `(monomial index, degree)` under either
/// pattern, with the pattern's name.
fn leading_terms(poly: &Polynomial) -> Option<(Vec<(usize, u32)>, &'static str)> {
    let ms = poly.monomials();
    let nonconstant: Vec<usize> = (0..ms.len()).filter(|&i| !ms[i].is_constant()).collect();
    if nonconstant.is_empty() {
        return None;
    }
    let mut best: BTreeMap<usize, (usize, u32)> = BTreeMap::new();
    for (i, m) in ms.iter().enumerate() {
        if let Some((v, e)) = m.pure_power() {
            let slot = best.entry(v).or_insert((i, e));
            if e > slot.1 {
                *slot = (i, e);
            }
        }
    }
    if nonconstant.iter().all(|&i| ms[i].pure_power().is_some()) {
        return Some((best.into_values().collect(), "univariate"));
    }
    if best.len() != poly.num_vars() {
        return None;
    }
    let leading: Vec<(usize, u32)> = best.into_values().collect();
    let min_d = leading.iter().map(|l| l.1).min()?;
    let chosen: BTreeSet<usize> = leading.iter().map(|l| l.0).collect();
    let rest_degree = (0..ms.len())
        .filter(|i| !chosen.contains(i))
        .map(|i| ms[i].degree())
        .max();
    match rest_degree {
        Some(d) if d >= min_d => None,
        _ => Some((leading, "leading-plus-remainder")),
    }
}

/// Fires when no group of equal-degree leading coefficients has a zero-sum subset.
pub fn filter_single_variable_leading(eq: &Equation) -> FilterResult {
    const NAME: &str = "single-variable-leading";
    let poly = eq.poly();
    let Some((leading, pattern)) = leading_terms(poly) else {
        return FilterResult::inapplicable(NAME);
    };
    let mut groups: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (i, d) in leading {
        groups.entry(d).or_default().push(i);
    }
    for (d, idx) in &groups {
        let coeffs: Vec<BigInt> = idx
            .iter()
            .map(|&i| poly.monomials()[i].coeff().clone())
            .collect();
        if let Some(j) = least_zero_sum_subset(&coeffs) {
            let chosen: Vec<usize> = j.iter().map(|&k| idx[k]).collect();
            return FilterResult::passed(
                NAME,
                ev(&[
                    ("pattern", pattern.into()),
                    ("degree", d.to_string()),
                    ("zero_sum_subset", render_subset(poly, &chosen)),
                ]),
            );
        }
    }
    let listed: Vec<String> = groups
        .iter()
        .map(|(d, idx)| {
            let cs: Vec<String> = idx
                .iter()
                .map(|&i| poly.monomials()[i].coeff().to_string())
                .collect();
            format!("{d}:[{}]", cs.join(","))
        })
        .collect();
    FilterResult::fired(
        NAME,
        ev(&[
            ("pattern", pattern.into()),
            ("leading_groups", listed.join(" ")),
        ]),
    )
}

fn sub_multiset_sums(exps: &[u32]) -> BTreeSet<u32> {
    let mut sums = BTreeSet::new();
    for &e in exps {
        let shifted: Vec<u32> = sums.iter().map(|s| s + e).collect();
        sums.extend(shifted);
        sums.insert(e);
    }
    sums
}

/// Fires when no pair of monomials has equal nonempty exponent sub-multiset sums.
pub fn filter_exponent_rado(eq: &Equation) -> FilterResult {
    const NAME: &str = "exponent-rado";
    let poly = eq.poly();
    let ms = poly.monomials();
    if ms.len() < 2 {
        return FilterResult::inapplicable(NAME);
    }
    let sums: Vec<BTreeSet<u32>> = ms
        .iter()
        .map(|m| sub_multiset_sums(&m.exponent_multiset()))
        .collect();
    for i in 0..ms.len() {
        for j in i + 1..ms.len() {
            if let Some(s) = sums[i].intersection(&sums[j]).next() {
                return FilterResult::passed(
                    NAME,
                    ev(&[
                        ("pair", render_subset(poly, &[i, j])),
                        ("common_sum", s.to_string()),
                    ]),
                );
            }
        }
    }
    let pairs = ms.len() * (ms.len() - 1) / 2;
    FilterResult::fired(NAME, ev(&[("pairs_checked", pairs.to_string())]))
}

/// Fires when every nonempty monomial subset collapses (all variables set to
/// one `t`) to a nonzero polynomial with no root `t > 0`.
pub fn filter_maximal_root(eq: &Equation) -> Result<FilterResult> {
    filter_maximal_root_with_cap(eq, MAXIMAL_ROOT_CAP)
}

pub fn filter_maximal_root_with_cap(eq: &Equation, cap: usize) -> Result<FilterResult> {
    const NAME: &str = "maximal-root";
    let poly = eq.poly();
    let ms = poly.monomials();
    if ms.is_empty() {
        return Ok(FilterResult::inapplicable(NAME));
    }
    if ms.len() > cap.min(63) {
        return Err(Error::CapExceeded {
            what: "monomial count",
            cap,
        });
    }
    let mut cache: HashMap<UniPoly, bool> = HashMap::new();
    let full = (1u64 << ms.len()) - 1;
    for mask in 1..=full {
        let mut collapsed = UniPoly::zero();
        for (i, m) in ms.iter().enumerate() {
            if mask >> i & 1 == 1 {
                collapsed.add_term(m.coeff(), m.degree() as usize);
            }
        }
        let has_root = *cache
            .entry(collapsed.clone())
            .or_insert_with(|| sturm_positive_root(&collapsed));
        if has_root {
            let idx: Vec<usize> = (0..ms.len()).filter(|i| mask >> i & 1 == 1).collect();
            return Ok(FilterResult::passed(
                NAME,
                ev(&[
                    ("subset", render_subset(poly, &idx)),
                    ("collapse", collapsed.to_string()),
                ]),
            ));
        }
    }
    let mut shown: Vec<String> = cache.keys().map(ToString::to_string).collect();
    shown.sort();
    shown.truncate(8);
    Ok(FilterResult::fired(
        NAME,
        ev(&[
            ("subsets_checked", full.to_string()),
            ("distinct_collapses", cache.len().to_string()),
            ("collapses", shown.join("; ")),
        ]),
    ))
}

/// The linear decision packaged as a filter result; fires on NOT_PR.
pub fn filter_linear(eq: &Equation) -> Result<(Verdict, FilterResult)> {
    let verdict = linear_pr_verdict(eq)?;
    let homogeneous = eq.poly().constant_term().is_zero();
    let name = if homogeneous {
        "rado"
    } else {
        "inhomogeneous-rado"
    };
    let mut evidence = BTreeMap::new();
    match verdict.certificate() {
        Some(Certificate::RadoSubset { variables, .. })
        | Some(Certificate::ConstantAndRado { variables, .. }) => {
            evidence.insert("zero_sum_subset".into(), variables.join(","));
        }
        _ => {}
    }
    for (i, note) in verdict.notes().iter().enumerate() {
        evidence.insert(format!("note_{}", i + 1), note.clone());
    }
    if verdict.status() == Status::NotPr {
        evidence
            .entry("result".into())
            .or_insert_with(|| "no zero-sum coefficient subset".into());
        Ok((verdict, FilterResult::fired(name, evidence)))
    } else {
        Ok((verdict, FilterResult::passed(name, evidence)))
    }
}

/// Full analysis: verdict, every filter consulted, and the normalized form
/// when a Fermat-Catalan equivalence applies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Analysis {
    pub verdict: Verdict,
    pub filters: Vec<FilterResult>,
    pub normalized: Option<String>,
}

/// Runs the pipeline: constant solution, then the exact linear decision, then
/// the nonlinear filters.
pub fn analyze(eq: &Equation) -> Result<Analysis> {
    let poly = eq.nonzero_poly()?;
    if let Some(k) = poly.trivial_constant_solution() {
        let verdict = Verdict::pr(Certificate::ConstantSolution { k: k.to_string() })
            .with_note(format!("constant solution: every variable equal to {k}"));
        return Ok(Analysis {
            verdict,
            filters: Vec::new(),
            normalized: None,
        });
    }
    if eq.is_linear() {
        let (verdict, filter) = filter_linear(eq)?;
        return Ok(Analysis {
            verdict,
            filters: vec![filter],
            normalized: None,
        });
    }

    let mut filters = vec![
        filter_homogeneous_rado(eq),
        filter_single_variable_leading(eq),
        filter_exponent_rado(eq),
        filter_maximal_root(eq)?,
    ];
    filters.extend(filter_fermat_catalan(eq));

    let reasons: Vec<String> = filters
        .iter()
        .filter(|f| f.fired)
        .map(|f| f.filter_name.to_string())
        .collect();
    let normalized = normalize_fermat_catalan(eq).filter(|n| n != eq);
    let mut verdict = if reasons.is_empty() {
        Verdict::unknown()
    } else {
        Verdict::not_pr(reasons)
    };
    if let Some(n) = &normalized {
        verdict.push_note(format!("partition regular iff {n} is"));
    }
    if verdict.status() == Status::Unknown {
        let target = normalized.as_ref().unwrap_or(eq);
        for note in table_notes(target) {
            verdict.push_note(note);
        }
        verdict.push_note("no necessary condition fails; no sufficient condition is implemented for nonlinear equations");
    }
    Ok(Analysis {
        verdict,
        filters,
        normalized: normalized.map(|n| n.to_string()),
    })
}

/// Verdict of [`analyze`].
pub fn run_all_filters(eq: &Equation) -> Result<Verdict> {
    Ok(analyze(eq)?.verdict)
}

fn template(terms: &[(i64, &[(&str, u32)])]) -> Polynomial {
    Polynomial::from_terms(terms)
}

/// Whether `poly` equals `t` or `-t` after some renaming of its variables.
pub fn same_up_to_renaming(poly: &Polynomial, t: &Polynomial) -> bool {
    if poly.num_vars() != t.num_vars() || poly.monomials().len() != t.monomials().len() {
        return false;
    }
    let target = t.variables();
    let neg = -t;
    let terms = poly.named_terms();
    let mut perm: Vec<usize> = (0..target.len()).collect();
    loop {
        let renamed = Polynomial::from_named_terms(terms.iter().map(|(c, fs)| {
            let fs = fs
                .iter()
                .map(|(name, e)| {
                    (
                        target[perm[poly.var_index(name).expect("own variable")]].clone(),
                        *e,
                    )
                })
                .collect();
            (c.clone(), fs)
        }));
        if &renamed == t || renamed == neg {
            return true;
        }
        if !next_permutation(&mut perm) {
            return false;
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len())
        .rev()
        .find(|&j| p[j] > p[i - 1])
        .expect("successor exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Notes from the table of known results and open problems.
pub fn table_notes(eq: &Equation) -> Vec<String> {
    let poly = eq.poly();
    let mut notes = Vec::new();
    let d = poly.total_degree();
    let known: Vec<(Polynomial, String)> = vec![
        (
            template(&[(1, &[("x", 1)]), (-1, &[("y", 1)]), (-1, &[("z", d)])]),
            format!("known PR: x - y = z^{d} (polynomial van der Waerden)"),
        ),
        (
            template(&[(1, &[("x", 2)]), (-1, &[("y", 2)]), (-1, &[("z", 1)])]),
            "known PR: x^2 - y^2 = z".into(),
        ),
        (
            template(&[(1, &[("x", 1), ("y", 1)]), (-1, &[("z", 1)])]),
            "known PR: xy = z".into(),
        ),
        (
            template(&[(1, &[("x", 1), ("y", 1)]), (-2, &[("z", 1)])]),
            "known PR: xy = 2z".into(),
        ),
    ];
    for (t, note) in known {
        if same_up_to_renaming(poly, &t) {
            notes.push(note);
        }
    }
    let pythagorean = template(&[(1, &[("x", 2)]), (1, &[("y", 2)]), (-1, &[("z", 2)])]);
    if same_up_to_renaming(poly, &pythagorean) {
        notes.push(
            "open problem: partition regularity of the Pythagorean equation x^2 + y^2 = z^2".into(),
        );
    }
    if d >= 3 {
        let fc = template(&[(1, &[("x", d)]), (-1, &[("y", d)]), (-1, &[("z", d - 1)])]);
        if same_up_to_renaming(poly, &fc) {
            notes.push(format!(
                "open question: whether x^n - y^n = z^(n-1) is partition regular (here n = {d})"
            ));
        }
    }
    notes
}
