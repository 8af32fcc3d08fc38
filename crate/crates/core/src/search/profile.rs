//! Finite-scale asymptotic profiles of solution tuples.

use serde::Serialize;

use crate::linear::OrderedPartition;

/// Greedy ordered partition of a tuple plus whether it meets both
/// tolerance conditions at `N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Profile {
    pub partition: OrderedPartition,
    pub n: u64,
    pub valid: bool,
}

/// `|a/b - 1| < 1/N`, i.e. `N |a - b| < b`.
pub fn ratio_close(a: u64, b: u64, big_n: u64) -> bool {
    u128::from(big_n) * u128::from(a.abs_diff(b)) < u128::from(b)
}

/// `N b < a`.
pub fn far_above(a: u64, b: u64, big_n: u64) -> bool {
    u128::from(big_n) * u128::from(b) < u128::from(a)
}

/// Repeatedly takes the largest unassigned value and groups every unassigned
/// value within ratio `1/N` of it; then checks all pairs.
pub fn asymptotic_profile(values: &[u64], big_n: u64) -> Profile {
    assert!(
        values.iter().all(|&v| v >= 1),
        "profile entries must be positive"
    );
    let mut unassigned: Vec<usize> = (0..values.len()).collect();
    let mut classes = Vec::new();
    while !unassigned.is_empty() {
        let top = *unassigned
            .iter()
            .max_by_key(|&&i| values[i])
            .expect("nonempty");
        let (class, rest): (Vec<usize>, Vec<usize>) = unassigned
            .iter()
            .partition(|&&i| ratio_close(values[top], values[i], big_n));
        classes.push(class);
        unassigned = rest;
    }
    let valid = classes_valid(values, &classes, big_n);
    let partition =
        OrderedPartition::new(classes, values.len()).expect("greedy grouping covers every index");
    Profile {
        partition,
        n: big_n,
        valid,
    }
}

fn classes_valid(values: &[u64], classes: &[Vec<usize>], big_n: u64) -> bool {
    for (ci, class) in classes.iter().enumerate() {
        for &i in class {
            for &j in class {
                if !ratio_close(values[i], values[j], big_n) {
                    return false;
                }
            }
            for later in &classes[ci + 1..] {
                if later
                    .iter()
                    .any(|&j| !far_above(values[i], values[j], big_n))
                {
                    return false;
                }
            }
        }
    }
    true
}

/// Allocation-free profile for up to 16 values: `None` when invalid, else
/// the class index of each position packed 4 bits apiece.
pub(crate) fn profile_key(values: &[u64], big_n: u64) -> Option<u64> {
    let n = values.len();
    debug_assert!(n <= 16);
    let mut order = [0usize; 16];
    for (i, slot) in order.iter_mut().enumerate().take(n) {
        *slot = i;
    }
    let order = &mut order[..n];
    order.sort_unstable_by(|&a, &b| values[b].cmp(&values[a]));
    let mut key = 0u64;
    let mut class = 0u64;
    let mut head = values[order[0]];
    let mut class_min = head;
    for &i in order.iter() {
        let v = values[i];
        if !ratio_close(head, v, big_n) {
            // classes are contiguous in sorted order, so only the boundary pair matters
            if !far_above(class_min, v, big_n) {
                return None;
            }
            class += 1;
            head = v;
        }
        class_min = v;
        key |= class << (4 * i);
    }
    Some(key)
}

pub(crate) fn key_to_partition(key: u64, n: usize) -> OrderedPartition {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        let c = ((key >> (4 * i)) & 0xf) as usize;
        if classes.len() <= c {
            classes.resize(c + 1, Vec::new());
        }
        classes[c].push(i);
    }
    OrderedPartition::new(classes, n).expect("key encodes a partition")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn classes(p: &Profile) -> Vec<Vec<usize>> {
        p.partition.classes().to_vec()
    }

    #[test]
    fn profile_examples() {
        let p = asymptotic_profile(&[1000, 999, 5], 10);
        assert_eq!(classes(&p), vec![vec![0, 1], vec![2]]);
        assert!(p.valid);
        let p = asymptotic_profile(&[2, 2, 4], 2);
        assert_eq!(classes(&p), vec![vec![2], vec![0, 1]]);
        assert!(!p.valid);
        let p = asymptotic_profile(&[7, 7, 7, 7], 3);
        assert_eq!(classes(&p), vec![vec![0, 1, 2, 3]]);
        assert!(p.valid);
    }

    #[test]
    fn key_agrees_with_profile() {
        let cases: &[&[u64]] = &[
            &[1000, 999, 5],
            &[2, 2, 4],
            &[5],
            &[100, 1, 3000, 2],
            &[11, 10, 1],
            &[50, 45, 4, 4],
        ];
        for &vals in cases {
            for big_n in [2, 5, 10] {
                let p = asymptotic_profile(vals, big_n);
                let key = profile_key(vals, big_n);
                assert_eq!(key.is_some(), p.valid, "{vals:?} N={big_n}");
                if let Some(k) = key {
                    assert_eq!(key_to_partition(k, vals.len()), p.partition);
                }
            }
        }
    }
}
