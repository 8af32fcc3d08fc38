//! Syntactic rules for equations `a x^n + b y^n = RHS` with `x, y` absent
//! from the right-hand side.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::FilterResult;
use crate::model::{Equation, Polynomial};

/// `a x^n + b y^n` split off from the rest of the polynomial. `rest` holds
/// monomial indices; the right-hand side is their negation.
#[derive(Debug, Clone)]
struct Binding {
    x: usize,
    y: usize,
    n: u32,
    a: BigInt,
    b: BigInt,
    rest: Vec<usize>,
}

fn bindings(poly: &Polynomial) -> Vec<Binding> {
    let ms = poly.monomials();
    let mut occurrences = vec![0usize; poly.num_vars()];
    for m in ms {
        for v in m.variables() {
            occurrences[v] += 1;
        }
    }
    let mut out = Vec::new();
    for i in 0..ms.len() {
        for j in i + 1..ms.len() {
            let (Some((x, n)), Some((y, ny))) = (ms[i].pure_power(), ms[j].pure_power()) else {
                continue;
            };
            if n != ny || x == y || occurrences[x] != 1 || occurrences[y] != 1 {
                continue;
            }
            out.push(Binding {
                x,
                y,
                n,
                a: ms[i].coeff().clone(),
                b: ms[j].coeff().clone(),
                rest: (0..ms.len()).filter(|&k| k != i && k != j).collect(),
            });
        }
    }
    out
}

fn subset_sums(values: &[u32]) -> BTreeSet<u32> {
    let mut sums = BTreeSet::new();
    for &v in values {
        let mut next: BTreeSet<u32> = sums.iter().map(|s| s + v).collect();
        next.insert(v);
        sums.extend(next);
    }
    sums
}

fn render_set(s: &BTreeSet<u32>) -> String {
    let items: Vec<String> = s.iter().map(ToString::to_string).collect();
    format!("{{{}}}", items.join(","))
}

/// Builds the result for one rule: `check` returns `None` when the shape
/// does not match, else whether it fires and its evidence.
fn rule(
    name: &'static str,
    eq: &Equation,
    constant: &Option<BigInt>,
    check: impl Fn(&Binding) -> Option<(bool, BTreeMap<String, String>)>,
) -> FilterResult {
    let poly = eq.poly();
    let names = poly.variables();
    let mut first_match: Option<BTreeMap<String, String>> = None;
    for b in bindings(poly) {
        let Some((fires, mut evidence)) = check(&b) else {
            continue;
        };
        evidence.insert("x".into(), names[b.x].clone());
        evidence.insert("y".into(), names[b.y].clone());
        evidence.insert("n".into(), b.n.to_string());
        evidence.insert("a".into(), b.a.to_string());
        evidence.insert("b".into(), b.b.to_string());
        if let Some(k) = constant {
            evidence.insert("constant_solution".into(), k.to_string());
        }
        if fires && constant.is_none() {
            return FilterResult::fired(name, evidence);
        }
        first_match.get_or_insert(evidence);
    }
    match first_match {
        Some(evidence) => FilterResult::passed(name, evidence),
        None => FilterResult::inapplicable(name),
    }
}

fn ev(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

/// `a x^n + b y^n = P(z)` with `k = deg P` outside `{n, n-1}`.
pub fn rule_r1(eq: &Equation, constant: &Option<BigInt>) -> FilterResult {
    let poly = eq.poly();
    rule("R1", eq, constant, |b| {
        if poly.num_vars() != 3 || b.n < 2 {
            return None;
        }
        let mut z = None;
        let mut k = 0;
        for &i in &b.rest {
            let m = &poly.monomials()[i];
            if m.is_constant() {
                continue;
            }
            let (v, e) = m.pure_power()?;
            if *z.get_or_insert(v) != v {
                return None;
            }
            k = k.max(e);
        }
        z?;
        let fires = k != b.n && k + 1 != b.n;
        Some((fires, ev(&[("k", k.to_string())])))
    })
}

/// `a x^n + b y^n = c z^n` with `a + b = 0` and `n > 3`.
pub fn rule_r2(eq: &Equation, constant: &Option<BigInt>) -> FilterResult {
    let poly = eq.poly();
    rule("R2", eq, constant, |b| {
        let [i] = b.rest[..] else { return None };
        let m = &poly.monomials()[i];
        let (_, e) = m.pure_power()?;
        if e != b.n {
            return None;
        }
        let sum = &b.a + &b.b;
        let fires = sum.is_zero() && b.n > 3;
        Some((
            fires,
            ev(&[
                ("c", (-m.coeff()).to_string()),
                ("a_plus_b", sum.to_string()),
            ]),
        ))
    })
}

/// `a x^n - a y^n = sum P_i(z_i)`, at least two `z_i`, pairwise distinct
/// degrees, none in `{n, n-1}`.
pub fn rule_r3(eq: &Equation, constant: &Option<BigInt>) -> FilterResult {
    let poly = eq.poly();
    rule("R3", eq, constant, |b| {
        if b.n < 2 || (&b.a + &b.b) != BigInt::zero() {
            return None;
        }
        let mut degrees: BTreeMap<usize, u32> = BTreeMap::new();
        for &i in &b.rest {
            let m = &poly.monomials()[i];
            if m.is_constant() {
                continue;
            }
            let (v, e) = m.pure_power()?;
            let d = degrees.entry(v).or_insert(0);
            *d = (*d).max(e);
        }
        if degrees.len() < 2 {
            return None;
        }
        let distinct: BTreeSet<u32> = degrees.values().copied().collect();
        if distinct.len() != degrees.len() {
            return None;
        }
        let fires = distinct.iter().all(|&d| d != b.n && d + 1 != b.n);
        let listed: Vec<String> = degrees
            .iter()
            .map(|(v, d)| format!("{}:{d}", poly.variables()[*v]))
            .collect();
        Some((fires, ev(&[("degrees", listed.join(","))])))
    })
}

/// `x^n - y^n = prod z_i^{k_i}` (unit coefficients) with no subset sum of the
/// `k_i` equal to `n` or `n-1`.
pub fn rule_r4(eq: &Equation, constant: &Option<BigInt>) -> FilterResult {
    let poly = eq.poly();
    rule("R4", eq, constant, |b| {
        let [i] = b.rest[..] else { return None };
        let m = &poly.monomials()[i];
        if b.n < 2
            || !b.a.abs().is_one()
            || (&b.a + &b.b) != BigInt::zero()
            || !m.coeff().abs().is_one()
        {
            return None;
        }
        if m.is_constant() {
            return None;
        }
        let sums = subset_sums(&m.exponent_multiset());
        let fires = !sums.contains(&b.n) && !sums.contains(&(b.n - 1));
        Some((
            fires,
            ev(&[
                ("exponents", format!("{:?}", m.exponent_multiset())),
                ("subset_sums", render_set(&sums)),
            ]),
        ))
    })
}

/// `a x + b y = c w^m z^n` with `a + b != 0` and `m, n > 1`.
pub fn rule_r5(eq: &Equation, constant: &Option<BigInt>) -> FilterResult {
    let poly = eq.poly();
    rule("R5", eq, constant, |b| {
        if b.n != 1 {
            return None;
        }
        let [i] = b.rest[..] else { return None };
        let m = &poly.monomials()[i];
        let exps: Vec<u32> = m.exponents().values().copied().collect();
        let [em, en] = exps[..] else { return None };
        let sum = &b.a + &b.b;
        let fires = !sum.is_zero() && em > 1 && en > 1;
        Some((
            fires,
            ev(&[
                ("a_plus_b", sum.to_string()),
                ("m", em.to_string()),
                ("n_rhs", en.to_string()),
            ]),
        ))
    })
}

/// All five rules in order.
pub fn filter_fermat_catalan(eq: &Equation) -> Vec<FilterResult> {
    let constant = if eq.poly().is_zero() {
        None
    } else {
        eq.poly().trivial_constant_solution()
    };
    vec![
        rule_r1(eq, &constant),
        rule_r2(eq, &constant),
        rule_r3(eq, &constant),
        rule_r4(eq, &constant),
        rule_r5(eq, &constant),
    ]
}

/// Rewrites `a x^n - a y^n = c z^(n-1)` (a, c > 0 after choosing roles) as
/// `x^n - y^n = z^(n-1)`, which is partition regular exactly when the
/// original is.
pub fn normalize_fermat_catalan(eq: &Equation) -> Option<Equation> {
    let poly = eq.poly();
    if poly.num_vars() != 3 {
        return None;
    }
    let names = poly.variables();
    for b in bindings(poly) {
        let [i] = b.rest[..] else { continue };
        let m = &poly.monomials()[i];
        let Some((z, e)) = m.pure_power() else {
            continue;
        };
        if b.n < 2 || e + 1 != b.n || !(&b.a + &b.b).is_zero() {
            continue;
        }
        // the variable whose coefficient has the sign opposite to z's leads
        let (big, small) = if b.a.is_positive() != m.coeff().is_positive() {
            (b.x, b.y)
        } else {
            (b.y, b.x)
        };
        let terms = vec![
            (BigInt::one(), vec![(names[big].clone(), b.n)]),
            (-BigInt::one(), vec![(names[small].clone(), b.n)]),
            (-BigInt::one(), vec![(names[z].clone(), e)]),
        ];
        return Some(Equation::new(Polynomial::from_named_terms(terms)));
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn fired(s: &str) -> Vec<&'static str> {
        filter_fermat_catalan(&parse(s).unwrap())
            .into_iter()
            .filter(|r| r.fired)
            .map(|r| r.filter_name)
            .collect()
    }

    #[test]
    fn rule_examples() {
        assert_eq!(fired("x^2 - y^2 = z^5"), vec!["R1", "R4"]);
        assert!(fired("x^4 - y^4 = z^4").contains(&"R2"));
        assert_eq!(fired("x^2 - y^2 = z1^4 + z2^5 - 3z3^6"), vec!["R3"]);
        assert_eq!(fired("x^4 - y^4 = z1*z2"), vec!["R4"]);
        assert_eq!(fired("2x + 3y = w^2 z^2"), vec!["R5"]);
        for n in 2..=6 {
            assert!(fired(&format!("x^{n} - y^{n} = z^{}", n - 1)).is_empty());
        }
        assert!(fired("x^2 - y^2 = z").is_empty());
    }

    #[test]
    fn constant_solutions_block_rules() {
        // 4*2 + 4*2 = 2^2 * 2^2
        let eq = parse("4x + 4y = w^2 z^2").unwrap();
        let r5 = &filter_fermat_catalan(&eq)[4];
        assert!(r5.applicable && !r5.fired);
        assert_eq!(
            r5.evidence.get("constant_solution").map(String::as_str),
            Some("2")
        );
    }

    #[test]
    fn normalization() {
        let n = normalize_fermat_catalan(&parse("3x^4 - 3y^4 = 5z^3").unwrap()).unwrap();
        assert_eq!(n, parse("x^4 - y^4 = z^3").unwrap());
        let n = normalize_fermat_catalan(&parse("x^4 - y^4 = z^3").unwrap()).unwrap();
        assert_eq!(n, parse("x^4 - y^4 = z^3").unwrap());
        let n = normalize_fermat_catalan(&parse("2y^3 - 2x^3 = 7z^2").unwrap()).unwrap();
        assert_eq!(n, parse("y^3 - x^3 = z^2").unwrap());
        assert!(normalize_fermat_catalan(&parse("x^4 + y^4 = z^3").unwrap()).is_none());
    }
}
