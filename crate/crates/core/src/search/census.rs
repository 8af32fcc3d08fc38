//! Experiments over monochromatic solutions: profile censuses, standard-head
//! histograms and witness colorings.

use std::collections::BTreeMap;

use serde::Serialize;

use super::coloring::{head_bin, standard_head, ColoringSpec};
use super::enumerate::{first_solution, fold_solutions, Config};
use super::profile::{asymptotic_profile, key_to_partition, profile_key, Profile};
use crate::error::{Error, Result};
use crate::linear::OrderedPartition;
use crate::model::Polynomial;

/// A monochromatic solution with its profile and standard heads.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolutionRecord {
    pub assignment: Vec<u64>,
    pub color: u64,
    pub profile: Option<Profile>,
    /// Base to standard head of each coordinate, as `p/q` strings.
    pub heads: BTreeMap<u64, Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusEntry {
    pub partition: OrderedPartition,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProfileCensus {
    pub coloring: ColoringSpec,
    pub bound: u64,
    pub n: u64,
    /// Sorted by partition.
    pub entries: Vec<CensusEntry>,
    /// Number of monochromatic solutions with a valid profile; the sum of the counts.
    pub valid_solutions: u64,
    /// Monochromatic solutions looked at. With pruning, solutions having a pair
    /// of coordinates neither close nor far are skipped before counting.
    pub examined: u64,
    pub pruned: bool,
}

fn check_n(big_n: u64) -> Result<()> {
    if big_n < 2 {
        return Err(Error::InvalidParameter(format!(
            "N must be at least 2, got {big_n}"
        )));
    }
    Ok(())
}

fn check_base(p: u64) -> Result<()> {
    if p < 2 {
        return Err(Error::InvalidParameter(format!(
            "base must be at least 2, got {p}"
        )));
    }
    Ok(())
}

/// Counts valid profiles at `N` over monochromatic solutions up to `bound`.
pub fn profile_census(
    poly: &Polynomial,
    spec: &ColoringSpec,
    bound: u64,
    big_n: u64,
) -> Result<ProfileCensus> {
    profile_census_with(poly, spec, bound, big_n, true)
}

/// [`profile_census`] with pair pruning switchable; the counts do not depend on it.
pub fn profile_census_with(
    poly: &Polynomial,
    spec: &ColoringSpec,
    bound: u64,
    big_n: u64,
    prune: bool,
) -> Result<ProfileCensus> {
    check_n(big_n)?;
    let cfg = Config {
        bound,
        coloring: Some(spec),
        prune: prune.then_some(big_n),
    };
    // few distinct profiles occur, so a short list beats hashing
    fn bump(counts: &mut Vec<(u64, u64)>, key: u64, by: u64) {
        match counts.iter_mut().find(|(k, _)| *k == key) {
            Some(slot) => slot.1 += by,
            None => counts.push((key, by)),
        }
    }
    type Acc = (Vec<(u64, u64)>, u64);
    let (counts, examined) = fold_solutions(
        poly,
        cfg,
        || (Vec::new(), 0u64),
        |acc: &mut Acc, v| {
            acc.1 += 1;
            if let Some(key) = profile_key(v, big_n) {
                bump(&mut acc.0, key, 1);
            }
            true
        },
        |mut a: Acc, b: Acc| {
            for (k, c) in b.0 {
                bump(&mut a.0, k, c);
            }
            (a.0, a.1 + b.1)
        },
    )?;
    let n = poly.num_vars();
    let mut entries: Vec<CensusEntry> = counts
        .into_iter()
        .map(|(k, count)| CensusEntry {
            partition: key_to_partition(k, n),
            count,
        })
        .collect();
    entries.sort_by(|a, b| a.partition.cmp(&b.partition));
    let valid_solutions = entries.iter().map(|e| e.count).sum();
    Ok(ProfileCensus {
        coloring: *spec,
        bound,
        n: big_n,
        entries,
        valid_solutions,
        examined,
        pruned: prune,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeadHistogram {
    pub coloring: ColoringSpec,
    pub bound: u64,
    pub base: u64,
    /// Bin `i` covers heads in `[1 + i(p-1)/bins, 1 + (i+1)(p-1)/bins)`.
    pub counts: Vec<u64>,
    pub solutions: u64,
    pub coordinates: u64,
    /// Coordinates that are exact powers of the base (head 1).
    pub exact_powers: u64,
    /// Share of coordinates in the first bin.
    pub near_one: f64,
    /// Share of coordinates in the last bin.
    pub near_base: f64,
}

/// Histogram of the standard heads in base `p` of every coordinate of every
/// monochromatic solution up to `bound`.
pub fn head_census(
    poly: &Polynomial,
    spec: &ColoringSpec,
    bound: u64,
    p: u64,
    bins: usize,
) -> Result<HeadHistogram> {
    check_base(p)?;
    if bins == 0 {
        return Err(Error::InvalidParameter("at least one bin is needed".into()));
    }
    let cfg = Config {
        bound,
        coloring: Some(spec),
        prune: None,
    };
    type Acc = (Vec<u64>, u64, u64);
    let (counts, solutions, exact_powers) = fold_solutions(
        poly,
        cfg,
        || (vec![0u64; bins], 0u64, 0u64),
        |acc: &mut Acc, v| {
            acc.1 += 1;
            for &x in v {
                acc.0[head_bin(x, p, bins)] += 1;
                if x == p.pow(x.ilog(p)) {
                    acc.2 += 1;
                }
            }
            true
        },
        |mut a: Acc, b: Acc| {
            for (x, y) in a.0.iter_mut().zip(b.0) {
                *x += y;
            }
            (a.0, a.1 + b.1, a.2 + b.2)
        },
    )?;
    let coordinates: u64 = counts.iter().sum();
    let share = |c: u64| {
        if coordinates == 0 {
            0.0
        } else {
            c as f64 / coordinates as f64
        }
    };
    Ok(HeadHistogram {
        coloring: *spec,
        bound,
        base: p,
        near_one: share(counts[0]),
        near_base: share(counts[bins - 1]),
        counts,
        solutions,
        coordinates,
        exact_powers,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub coloring: ColoringSpec,
    /// No monochromatic solution up to the bound. Evidence against partition
    /// regularity, not a proof.
    pub witness: bool,
    /// First monochromatic solution found, when there is one.
    pub example: Option<Vec<u64>>,
}

/// Checks each coloring of the family for a monochromatic solution up to `bound`.
pub fn witness_search(
    poly: &Polynomial,
    family: &[ColoringSpec],
    bound: u64,
) -> Result<Vec<WitnessReport>> {
    family
        .iter()
        .map(|spec| {
            let example = first_solution(
                poly,
                Config {
                    bound,
                    coloring: Some(spec),
                    prune: None,
                },
            )?;
            Ok(WitnessReport {
                coloring: *spec,
                witness: example.is_none(),
                example,
            })
        })
        .collect()
}

/// The colorings of the family with no monochromatic solution up to `bound`.
pub fn witnesses(
    poly: &Polynomial,
    family: &[ColoringSpec],
    bound: u64,
) -> Result<Vec<ColoringSpec>> {
    Ok(witness_search(poly, family, bound)?
        .into_iter()
        .filter(|w| w.witness)
        .map(|w| w.coloring)
        .collect())
}

/// Monochromatic solutions up to `bound` (all solutions when `spec` is
/// `None`), sorted, at most `limit` of them.
pub fn monochromatic_solutions(
    poly: &Polynomial,
    spec: Option<&ColoringSpec>,
    bound: u64,
    big_n: Option<u64>,
    bases: &[u64],
    limit: usize,
) -> Result<Vec<SolutionRecord>> {
    if let Some(n) = big_n {
        check_n(n)?;
    }
    for &p in bases {
        check_base(p)?;
    }
    let cfg = Config {
        bound,
        coloring: spec,
        prune: None,
    };
    let mut all = fold_solutions(
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
    all.sort_unstable();
    all.truncate(limit);
    Ok(all
        .into_iter()
        .map(|assignment| {
            let color = spec.map_or(0, |s| s.color(assignment[0]));
            let profile = big_n.map(|n| asymptotic_profile(&assignment, n));
            let heads = bases
                .iter()
                .map(|&p| {
                    (
                        p,
                        assignment
                            .iter()
                            .map(|&x| standard_head(x, p).to_string())
                            .collect(),
                    )
                })
                .collect();
            SolutionRecord {
                assignment,
                color,
                profile,
                heads,
            }
        })
        .collect())
}
