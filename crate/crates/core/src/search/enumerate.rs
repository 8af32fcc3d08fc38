//! Exhaustive search for solutions with every coordinate in `[1, B]`.
//!
//! One variable occurring once with exponent 1 is solved for. The others run
//! over a grid, the innermost by binary search when the equation is monotone
//! in it. Colored searches walk per-color value lists, and pruned searches
//! keep every pair of coordinates either within ratio `1/N` or a factor `N`
//! apart, which every valid profile needs.

use std::sync::atomic::{AtomicBool, Ordering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use super::coloring::ColoringSpec;
use crate::error::{Error, Result};
use crate::model::Polynomial;

/// Largest accepted search bound.
pub const MAX_BOUND: u64 = 50_000_000;

type Iv = (u64, u64);

struct Term {
    big: BigInt,
    small: Option<i128>,
    exps: Vec<(usize, u32)>,
}

impl Term {
    fn exponent(&self, v: usize) -> u32 {
        self.exps
            .iter()
            .find(|(u, _)| *u == v)
            .map_or(0, |(_, e)| *e)
    }

    fn sign(&self) -> bool {
        self.big.is_positive()
    }
}

struct Solved {
    var: usize,
    term: usize,
}

pub(crate) struct Plan {
    n: usize,
    terms: Vec<Term>,
    solved: Option<Solved>,
    /// Loop order over the remaining variables; the last one is innermost.
    loops: Vec<usize>,
}

impl Plan {
    pub(crate) fn new(poly: &Polynomial) -> Plan {
        let n = poly.num_vars();
        let terms: Vec<Term> = poly
            .monomials()
            .iter()
            .map(|m| Term {
                big: m.coeff().clone(),
                small: m.coeff().to_i64().map(i128::from),
                exps: m.exponents().iter().map(|(&v, &e)| (v, e)).collect(),
            })
            .collect();
        let mut occurrences = vec![0usize; n];
        for t in &terms {
            for &(v, _) in &t.exps {
                occurrences[v] += 1;
            }
        }
        let solved = terms
            .iter()
            .enumerate()
            .flat_map(|(ti, t)| {
                let occurrences = &occurrences;
                t.exps
                    .iter()
                    .filter(move |&&(v, e)| e == 1 && occurrences[v] == 1)
                    .map(move |&(v, _)| {
                        let other_degree: u32 = t.exps.iter().map(|(_, e)| e).sum::<u32>() - 1;
                        ((other_degree, t.big.abs(), v), Solved { var: v, term: ti })
                    })
            })
            .min_by(|a, b| a.0.cmp(&b.0))
            .map(|(_, s)| s);
        let mut rest: Vec<usize> = (0..n)
            .filter(|&v| solved.as_ref().is_none_or(|s| s.var != v))
            .collect();
        let skip = solved.as_ref().map(|s| s.term);
        let monotone = |t: usize| {
            let signs: Vec<bool> = terms
                .iter()
                .enumerate()
                .filter(|(i, term)| Some(*i) != skip && term.exponent(t) > 0)
                .map(|(_, term)| term.sign())
                .collect();
            let in_solved = skip.is_some_and(|i| terms[i].exponent(t) > 0);
            !in_solved && !signs.is_empty() && signs.iter().all(|&s| s == signs[0])
        };
        if let Some(pos) = rest.iter().rposition(|&t| monotone(t)) {
            let t = rest.remove(pos);
            rest.push(t);
        }
        Plan {
            n,
            terms,
            solved,
            loops: rest,
        }
    }

    pub(crate) fn solved_var(&self) -> Option<usize> {
        self.solved.as_ref().map(|s| s.var)
    }
}

/// What to search for.
#[derive(Clone, Copy)]
pub(crate) struct Config<'a> {
    pub bound: u64,
    pub coloring: Option<&'a ColoringSpec>,
    /// Skip solutions with a pair of coordinates neither within ratio `1/N`
    /// nor a factor `N` apart. Not every reported solution has a valid profile.
    pub prune: Option<u64>,
}

pub(crate) fn check_bound(bound: u64) -> Result<()> {
    if bound < 1 {
        return Err(Error::InvalidParameter("bound must be at least 1".into()));
    }
    if bound > MAX_BOUND {
        return Err(Error::CapExceeded {
            what: "search bound",
            cap: MAX_BOUND as usize,
        });
    }
    Ok(())
}

struct Domain {
    bound: u64,
    spec: Option<ColoringSpec>,
    classes: Option<Vec<Vec<u64>>>,
}

impl Domain {
    fn new(cfg: &Config) -> Domain {
        let classes = cfg.coloring.map(|spec| {
            let mut classes = vec![Vec::new(); spec.color_bound() as usize];
            for x in 1..=cfg.bound {
                classes[spec.color(x) as usize].push(x);
            }
            classes
        });
        Domain {
            bound: cfg.bound,
            spec: cfg.coloring.copied(),
            classes,
        }
    }

    fn colors(&self) -> Vec<u64> {
        match &self.classes {
            Some(c) => (0..c.len() as u64)
                .filter(|&i| !c[i as usize].is_empty())
                .collect(),
            None => vec![0],
        }
    }

    fn contains(&self, color: u64, x: u64) -> bool {
        (1..=self.bound).contains(&x) && self.spec.is_none_or(|s| s.color(x) == color)
    }

    /// Visits members of the color class inside `[lo, hi]` until `f` returns false.
    fn each(&self, color: u64, (lo, hi): Iv, mut f: impl FnMut(u64) -> bool) -> bool {
        match &self.classes {
            None => (lo..=hi.min(self.bound)).all(f),
            Some(c) => {
                let class = &c[color as usize];
                let a = class.partition_point(|&x| x < lo);
                let b = class.partition_point(|&x| x <= hi);
                class[a..b.max(a)].iter().all(|&x| f(x))
            }
        }
    }
}

/// Values `b` in `[1, bound]` that are within ratio `1/N` of `a` or a factor `N` away.
fn near_or_far(a: u64, big_n: u64, bound: u64) -> Vec<Iv> {
    let a128 = u128::from(a);
    let n128 = u128::from(big_n);
    let mut out = Vec::with_capacity(3);
    let below = (a - 1) / big_n;
    if below >= 1 {
        out.push((1, below.min(bound)));
    }
    let close_lo = (n128 * a128 / (n128 + 1)) as u64 + 1;
    let close_hi = a + (a - 1) / big_n;
    if close_lo <= bound {
        out.push((close_lo, close_hi.min(bound)));
    }
    let above = n128 * a128 + 1;
    if above <= u128::from(bound) {
        out.push((above as u64, bound));
    }
    normalize(out)
}

fn normalize(mut ivs: Vec<Iv>) -> Vec<Iv> {
    ivs.retain(|(lo, hi)| lo <= hi);
    ivs.sort_unstable();
    let mut out: Vec<Iv> = Vec::with_capacity(ivs.len());
    for (lo, hi) in ivs {
        match out.last_mut() {
            Some(last) if lo <= last.1.saturating_add(1) => last.1 = last.1.max(hi),
            _ => out.push((lo, hi)),
        }
    }
    out
}

fn intersect(a: &[Iv], b: &[Iv]) -> Vec<Iv> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let lo = a[i].0.max(b[j].0);
        let hi = a[i].1.min(b[j].1);
        if lo <= hi {
            out.push((lo, hi));
        }
        if a[i].1 < b[j].1 {
            i += 1;
        } else {
            j += 1;
        }
    }
    out
}

fn pow_checked(x: u64, e: u32) -> Option<i128> {
    i128::from(x).checked_pow(e)
}

/// `r0 + sum q t^e`, evaluated once everything except `t` is fixed.
struct Inner {
    r0: i128,
    qs: Vec<(i128, u32)>,
}

impl Inner {
    fn value(&self, t: u64) -> Option<i128> {
        let mut acc = self.r0;
        for &(q, e) in &self.qs {
            acc = acc.checked_add(q.checked_mul(pow_checked(t, e)?)?)?;
        }
        Some(acc)
    }

    /// Saturating version of [`Inner::value`]; monotone whenever the `q` share a sign.
    fn saturating(&self, t: u64) -> i128 {
        let mut acc = self.r0;
        for &(q, e) in &self.qs {
            let p = pow_checked(t, e).unwrap_or(i128::MAX);
            acc = acc.saturating_add(q.saturating_mul(p));
        }
        acc
    }

    /// `(r0, q)` when the value is `r0 + q t` and stays within `i64` for `t <= bound`.
    fn linear(&self, bound: u64) -> Option<(i64, i64)> {
        let [(q, 1)] = self.qs[..] else { return None };
        let limit = i128::from(i64::MAX / 4);
        let reach = q
            .checked_mul(i128::from(bound))?
            .abs()
            .checked_add(self.r0.abs())?;
        (reach < limit).then_some((self.r0 as i64, q as i64))
    }

    fn monotone_sign(&self) -> Option<i128> {
        let first = self.qs.first()?.0.signum();
        self.qs
            .iter()
            .all(|(q, _)| q.signum() == first)
            .then_some(first)
    }
}

/// First `t` in `[lo, hi]` with `pred(t)`, for `pred` false then true.
fn first_true(lo: u64, hi: u64, pred: impl Fn(u64) -> bool) -> Option<u64> {
    if lo > hi || !pred(hi) {
        return None;
    }
    let (mut a, mut b) = (lo, hi);
    while a < b {
        let mid = a + (b - a) / 2;
        if pred(mid) {
            b = mid;
        } else {
            a = mid + 1;
        }
    }
    Some(a)
}

struct Search<'a> {
    plan: &'a Plan,
    cfg: Config<'a>,
    domain: Domain,
    stop: AtomicBool,
    share_stop: bool,
}

impl<'a> Search<'a> {
    fn allowed(&self, vals: &[u64], assigned: &[usize]) -> Vec<Iv> {
        let mut ivs = vec![(1, self.cfg.bound)];
        if let Some(big_n) = self.cfg.prune {
            for &u in assigned {
                ivs = intersect(&ivs, &near_or_far(vals[u], big_n, self.cfg.bound));
                if ivs.is_empty() {
                    break;
                }
            }
        }
        ivs
    }

    fn run<F: FnMut(&[u64]) -> bool>(&self, sink: &mut F, first: Option<u64>) {
        let plan = self.plan;
        let mut vals = vec![0u64; plan.n];
        match (plan.loops.len(), first) {
            (0, _) => {
                self.finish(&mut vals, None, sink);
            }
            (1, _) => {
                for c in self.domain.colors() {
                    if !self.innermost(&mut vals, c, sink) {
                        return;
                    }
                }
            }
            (_, Some(x)) => {
                let c = self.cfg.coloring.map_or(0, |s| s.color(x));
                vals[plan.loops[0]] = x;
                self.descend(1, &mut vals, c, sink);
            }
            (_, None) => unreachable!("outer value required"),
        }
    }

    fn descend<F: FnMut(&[u64]) -> bool>(
        &self,
        depth: usize,
        vals: &mut [u64],
        color: u64,
        sink: &mut F,
    ) -> bool {
        if self.stop.load(Ordering::Relaxed) {
            return false;
        }
        if depth + 1 == self.plan.loops.len() {
            return self.innermost(vals, color, sink);
        }
        let v = self.plan.loops[depth];
        for iv in self.allowed(vals, &self.plan.loops[..depth]) {
            let go = self.domain.each(color, iv, |x| {
                vals[v] = x;
                self.descend(depth + 1, vals, color, sink)
            });
            if !go {
                return false;
            }
        }
        true
    }

    /// Splits the polynomial around the innermost variable `t`. `None` on overflow.
    fn split(&self, vals: &[u64], t: usize) -> Option<(Inner, Option<(i128, u32)>)> {
        let skip = self.plan.solved.as_ref().map(|s| s.term);
        let mut r0 = 0i128;
        let mut qs: Vec<(i128, u32)> = Vec::new();
        let mut den = None;
        for (i, term) in self.plan.terms.iter().enumerate() {
            let mut q = term.small?;
            let mut et = 0;
            for &(u, e) in &term.exps {
                if u == t {
                    et = e;
                } else if Some(u) != self.plan.solved_var() {
                    q = q.checked_mul(pow_checked(vals[u], e)?)?;
                }
            }
            if Some(i) == skip {
                den = Some((q, et));
            } else if et == 0 {
                r0 = r0.checked_add(q)?;
            } else {
                match qs.iter_mut().find(|(_, e)| *e == et) {
                    Some(slot) => slot.0 = slot.0.checked_add(q)?,
                    None => qs.push((q, et)),
                }
            }
        }
        qs.retain(|(q, _)| *q != 0);
        Some((Inner { r0, qs }, den))
    }

    fn innermost<F: FnMut(&[u64]) -> bool>(
        &self,
        vals: &mut [u64],
        color: u64,
        sink: &mut F,
    ) -> bool {
        let loops = &self.plan.loops;
        let t = *loops.last().expect("at least one loop variable");
        let t_allowed = self.allowed(vals, &loops[..loops.len() - 1]);
        if t_allowed.is_empty() {
            return true;
        }
        let Some((inner, den)) = self.split(vals, t) else {
            return self.scan(vals, color, t, &t_allowed, sink);
        };
        match (den, inner.monotone_sign()) {
            (Some((d, 0)), Some(sign)) => {
                // s(t) = -inner(t) / d is monotone in t
                let targets = t_allowed.clone();
                let flip = if d < 0 { -1 } else { 1 };
                let d = d.abs();
                // h(t) = flip * -inner(t) * dir is nondecreasing, where dir orients it
                let dir = -sign * flip;
                let h = |t: u64| inner.saturating(t).saturating_mul(-flip * dir);
                for (slo, shi) in targets {
                    let (a, b) = if dir > 0 {
                        (
                            i128::from(slo).saturating_mul(d),
                            i128::from(shi).saturating_mul(d),
                        )
                    } else {
                        (
                            -(i128::from(shi).saturating_mul(d)),
                            -(i128::from(slo).saturating_mul(d)),
                        )
                    };
                    let Some(t_lo) = first_true(1, self.cfg.bound, |x| h(x) >= a) else {
                        continue;
                    };
                    let t_hi = match first_true(1, self.cfg.bound, |x| h(x) > b) {
                        Some(0) | Some(1) => continue,
                        Some(x) => x - 1,
                        None => self.cfg.bound,
                    };
                    if t_lo > t_hi {
                        continue;
                    }
                    let den = d * flip;
                    let linear = inner
                        .linear(self.cfg.bound)
                        .filter(|_| i64::try_from(den).is_ok());
                    for iv in intersect(&t_allowed, &[(t_lo, t_hi)]) {
                        if let Some((r0, q)) = linear {
                            let den = den as i64;
                            let go = self.domain.each(color, iv, |x| {
                                vals[t] = x;
                                let num = -(r0 + q * x as i64);
                                let s = match den {
                                    1 => num,
                                    -1 => -num,
                                    _ if num % den == 0 => num / den,
                                    _ => return true,
                                };
                                self.emit_small(vals, color, s, sink)
                            });
                            if !go {
                                return false;
                            }
                            continue;
                        }
                        let go = self.domain.each(color, iv, |x| {
                            vals[t] = x;
                            match inner.value(x) {
                                Some(num) => self.emit_quotient(vals, color, -num, d * flip, sink),
                                None => self.finish(vals, Some(color), sink),
                            }
                        });
                        if !go {
                            return false;
                        }
                    }
                }
                true
            }
            (None, Some(sign)) => {
                // no solved variable: inner(t) is monotone and has at most one root
                let h = |x: u64| inner.saturating(x).saturating_mul(sign);
                for &(lo, hi) in &t_allowed {
                    if let Some(x) = first_true(lo, hi, |x| h(x) >= 0) {
                        if inner.value(x) == Some(0) && self.domain.contains(color, x) {
                            vals[t] = x;
                            if !self.finish(vals, Some(color), sink) {
                                return false;
                            }
                        }
                    }
                }
                true
            }
            _ => {
                for &iv in &t_allowed {
                    let go = self.domain.each(color, iv, |x| {
                        vals[t] = x;
                        let Some(value) = inner.value(x) else {
                            return self.finish(vals, Some(color), sink);
                        };
                        match den {
                            None if value == 0 => self.deliver(vals, sink),
                            None => true,
                            Some((d, e)) => {
                                match pow_checked(x, e).and_then(|p| p.checked_mul(d)) {
                                    Some(d) => self.emit_quotient(vals, color, -value, d, sink),
                                    None => self.finish(vals, Some(color), sink),
                                }
                            }
                        }
                    });
                    if !go {
                        return false;
                    }
                }
                true
            }
        }
    }

    fn scan<F: FnMut(&[u64]) -> bool>(
        &self,
        vals: &mut [u64],
        color: u64,
        t: usize,
        ivs: &[Iv],
        sink: &mut F,
    ) -> bool {
        for &iv in ivs {
            let go = self.domain.each(color, iv, |x| {
                vals[t] = x;
                self.finish(vals, Some(color), sink)
            });
            if !go {
                return false;
            }
        }
        true
    }

    fn emit_small<F: FnMut(&[u64]) -> bool>(
        &self,
        vals: &mut [u64],
        color: u64,
        s: i64,
        sink: &mut F,
    ) -> bool {
        if s < 1 || s as u64 > self.cfg.bound || !self.domain.contains(color, s as u64) {
            return true;
        }
        vals[self.plan.solved_var().expect("solved")] = s as u64;
        self.deliver(vals, sink)
    }

    fn emit_quotient<F: FnMut(&[u64]) -> bool>(
        &self,
        vals: &mut [u64],
        color: u64,
        num: i128,
        den: i128,
        sink: &mut F,
    ) -> bool {
        let s = match (i64::try_from(num), i64::try_from(den)) {
            (Ok(n), Ok(1)) => i128::from(n),
            (Ok(n), Ok(d)) if d != 0 && n % d == 0 => i128::from(n / d),
            (Ok(_), Ok(_)) => return true,
            _ if den != 0 && num % den == 0 => num / den,
            _ => return true,
        };
        if s < 1 || s > i128::from(self.cfg.bound) {
            return true;
        }
        let s = s as u64;
        if !self.domain.contains(color, s) {
            return true;
        }
        vals[self.plan.solved_var().expect("solved")] = s;
        self.deliver(vals, sink)
    }

    /// Exact fallback once every loop variable is set: solves for the solved
    /// variable, or checks the equation directly.
    fn finish<F: FnMut(&[u64]) -> bool>(
        &self,
        vals: &mut [u64],
        color: Option<u64>,
        sink: &mut F,
    ) -> bool {
        let plan = self.plan;
        let value = |t: &Term, vals: &[u64], skip: Option<usize>| -> BigInt {
            let mut acc = t.big.clone();
            for &(u, e) in &t.exps {
                if Some(u) != skip {
                    acc *= num_traits::pow(BigInt::from(vals[u]), e as usize);
                }
            }
            acc
        };
        match &plan.solved {
            Some(s) => {
                let mut num = BigInt::zero();
                for (i, t) in plan.terms.iter().enumerate() {
                    if i != s.term {
                        num -= value(t, vals, None);
                    }
                }
                let den = value(&plan.terms[s.term], vals, Some(s.var));
                let (q, r) = num.div_rem(&den);
                if !r.is_zero() {
                    return true;
                }
                let Some(x) = q.to_u64().filter(|x| (1..=self.cfg.bound).contains(x)) else {
                    return true;
                };
                let c = color.unwrap_or_else(|| self.cfg.coloring.map_or(0, |spec| spec.color(x)));
                if !self.domain.contains(c, x) {
                    return true;
                }
                vals[s.var] = x;
            }
            None => {
                let total: BigInt = plan.terms.iter().map(|t| value(t, vals, None)).sum();
                if !total.is_zero() {
                    return true;
                }
            }
        }
        self.deliver(vals, sink)
    }

    fn deliver<F: FnMut(&[u64]) -> bool>(&self, vals: &[u64], sink: &mut F) -> bool {
        if !sink(vals) {
            if self.share_stop {
                self.stop.store(true, Ordering::Relaxed);
            }
            return false;
        }
        true
    }
}

/// Runs the search and folds solutions into per-shard accumulators.
/// `step` returns false to stop the whole search early.
pub(crate) fn fold_solutions<A: Send>(
    poly: &Polynomial,
    cfg: Config,
    init: impl Fn() -> A + Sync + Send,
    step: impl Fn(&mut A, &[u64]) -> bool + Sync + Send,
    merge: impl Fn(A, A) -> A + Sync + Send,
) -> Result<A> {
    validate(poly, &cfg)?;
    let plan = Plan::new(poly);
    let search = Search {
        plan: &plan,
        domain: Domain::new(&cfg),
        cfg,
        stop: AtomicBool::new(false),
        share_stop: true,
    };
    if plan.loops.len() < 2 {
        let mut acc = init();
        search.run(&mut |v: &[u64]| step(&mut acc, v), None);
        return Ok(acc);
    }
    let acc = (1..cfg.bound + 1)
        .into_par_iter()
        .fold(&init, |mut acc, x| {
            if !search.stop.load(Ordering::Relaxed) {
                search.run(&mut |v: &[u64]| step(&mut acc, v), Some(x));
            }
            acc
        })
        .reduce(&init, &merge);
    Ok(acc)
}

fn validate(poly: &Polynomial, cfg: &Config) -> Result<()> {
    check_bound(cfg.bound)?;
    if poly.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if poly.num_vars() > 16 {
        return Err(Error::CapExceeded {
            what: "variables in a search",
            cap: 16,
        });
    }
    Ok(())
}

/// The first solution in search order: outer value ascending, then the
/// order of the inner loops. Independent of the worker count.
pub(crate) fn first_solution(poly: &Polynomial, cfg: Config) -> Result<Option<Vec<u64>>> {
    validate(poly, &cfg)?;
    let plan = Plan::new(poly);
    let search = Search {
        plan: &plan,
        domain: Domain::new(&cfg),
        cfg,
        stop: AtomicBool::new(false),
        share_stop: false,
    };
    let find = |outer: Option<u64>| {
        let mut found = None;
        search.run(
            &mut |v: &[u64]| {
                found = Some(v.to_vec());
                false
            },
            outer,
        );
        found
    };
    if plan.loops.len() < 2 {
        return Ok(find(None));
    }
    const CHUNK: u64 = 1024;
    let mut start = 1;
    while start <= cfg.bound {
        let end = (start + CHUNK - 1).min(cfg.bound);
        let hits: Vec<Option<Vec<u64>>> = (start..end + 1)
            .into_par_iter()
            .map(|x| find(Some(x)))
            .collect();
        if let Some(hit) = hits.into_iter().flatten().next() {
            return Ok(Some(hit));
        }
        start = end + 1;
    }
    Ok(None)
}

/// Every solution with all coordinates in `[1, bound]`, sorted.
pub fn enumerate_solutions(poly: &Polynomial, bound: u64) -> Result<Vec<Vec<u64>>> {
    let cfg = Config {
        bound,
        coloring: None,
        prune: None,
    };
    let mut out = fold_solutions(
        poly,
        cfg,
        Vec::new,
        |acc: &mut Vec<Vec<u64>>, v| {
            acc.push(v.to_vec());
            true
        },
        |mut a, b| {
            a.extend(b);
            a
        },
    )?;
    out.sort_unstable();
    Ok(out)
}
