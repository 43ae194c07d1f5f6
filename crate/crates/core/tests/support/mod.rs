//! Shared helpers for the integration suites: seeded instance generators and
//! independent brute-force oracles. The oracles deliberately avoid the
//! library's search machinery: raw color assignments are enumerated with an
//! odometer and partitions with a recursive block-assignment enumerator.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use ramsey_core::catalog::builders::{chain, graph, pure_set, two_class};
use ramsey_core::copies::enumerate_copies;
use ramsey_core::structure::FiniteStructure;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random host from one of the built-in families.
pub fn random_host(rng: &mut ChaCha8Rng) -> FiniteStructure {
    match rng.random_range(0..4) {
        0 => chain(rng.random_range(2..=6)),
        1 => pure_set(rng.random_range(2..=6)),
        2 => two_class(rng.random_range(1..=3), rng.random_range(1..=3)),
        _ => {
            let n = rng.random_range(2..=5);
            let mut edges = Vec::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    if rng.random_bool(0.5) {
                        edges.push((i, j));
                    }
                }
            }
            graph(n, &edges)
        }
    }
}

/// A random nonempty induced substructure with at least `min` and at most
/// `max` elements.
pub fn random_induced(
    rng: &mut ChaCha8Rng,
    host: &FiniteStructure,
    min: usize,
    max: usize,
) -> FiniteStructure {
    let n = host.size();
    let want = rng.random_range(min..=max.min(n));
    let mut elems: Vec<usize> = (0..n).collect();
    elems.shuffle(rng);
    let subset: BTreeSet<usize> = elems.into_iter().take(want).collect();
    host.induced(&subset).unwrap()
}

pub struct Instance {
    pub host: FiniteStructure,
    pub big: FiniteStructure,
    pub pattern: FiniteStructure,
    pub k: usize,
    pub t: usize,
}

/// A random arrow instance whose host is guaranteed to contain the middle
/// structure (it is an induced substructure) and whose A-copy count is capped.
pub fn random_instance(rng: &mut ChaCha8Rng, max_a_copies: usize) -> Option<Instance> {
    let host = random_host(rng);
    if host.size() < 2 {
        return None;
    }
    let big = random_induced(rng, &host, 2, host.size());
    let pattern = random_induced(rng, &big, 1, big.size());
    let n = enumerate_copies(&pattern, &host).ok()?.len();
    if n == 0 || n > max_a_copies {
        return None;
    }
    let k = rng.random_range(2..=3usize);
    let t = rng.random_range(1..=k);
    Some(Instance {
        host,
        big,
        pattern,
        k,
        t,
    })
}

/// Raw arrow oracle: enumerate every one of the k^n color assignments with an
/// odometer and report the verdict plus the first (lexicographically least)
/// defeating assignment.
pub fn raw_arrow(
    host: &FiniteStructure,
    big: &FiniteStructure,
    pattern: &FiniteStructure,
    k: usize,
    t: usize,
) -> (bool, Option<Vec<usize>>) {
    let copies_a = enumerate_copies(pattern, host).unwrap();
    let copies_b = enumerate_copies(big, host).unwrap();
    assert!(!copies_b.is_empty(), "raw oracle needs a host");
    let inside: Vec<Vec<usize>> = copies_b
        .copies()
        .iter()
        .map(|bc| copies_a.indices_inside(bc))
        .collect();
    let n = copies_a.len();
    let total = (k as u128).pow(n as u32);
    assert!(
        total <= 20_000_000,
        "raw oracle instance too large: {}^{}",
        k,
        n
    );
    let mut assignment = vec![0usize; n];
    loop {
        let good = inside.iter().any(|ids| {
            let distinct: BTreeSet<usize> = ids.iter().map(|&i| assignment[i]).collect();
            distinct.len() <= t
        });
        if !good {
            return (false, Some(assignment));
        }
        // Odometer: least-significant position is the last index.
        let mut pos = n;
        loop {
            if pos == 0 {
                return (true, None);
            }
            pos -= 1;
            assignment[pos] += 1;
            if assignment[pos] < k {
                break;
            }
            assignment[pos] = 0;
        }
    }
}

/// Independent partition enumerator: recursively assign each element to an
/// existing block or (if the budget allows) a new one, visiting classes in
/// lexicographic label order.
pub fn for_each_partition<F: FnMut(&[usize]) -> bool>(
    n: usize,
    max_blocks: usize,
    f: &mut F,
) -> bool {
    fn rec<F: FnMut(&[usize]) -> bool>(
        labels: &mut Vec<usize>,
        n: usize,
        max_blocks: usize,
        used: usize,
        f: &mut F,
    ) -> bool {
        if labels.len() == n {
            return f(labels);
        }
        let cap = (used + 1).min(max_blocks);
        for b in 0..cap {
            labels.push(b);
            let next_used = used.max(b + 1);
            if !rec(labels, n, max_blocks, next_used, f) {
                return false;
            }
            labels.pop();
        }
        true
    }
    if n == 0 {
        return f(&[]);
    }
    rec(&mut Vec::new(), n, max_blocks.max(1), 0, f)
}

/// Brute-force saturated min-t: least t such that every partition of the
/// copy set (any block count) leaves some copy of B spanning at most t
/// blocks.
pub fn raw_min_t_saturated(
    host: &FiniteStructure,
    big: &FiniteStructure,
    pattern: &FiniteStructure,
) -> usize {
    let copies_a = enumerate_copies(pattern, host).unwrap();
    let copies_b = enumerate_copies(big, host).unwrap();
    assert!(!copies_b.is_empty());
    let inside: Vec<Vec<usize>> = copies_b
        .copies()
        .iter()
        .map(|bc| copies_a.indices_inside(bc))
        .collect();
    let n = copies_a.len();
    let mut t = 1usize;
    loop {
        let mut all_good = true;
        for_each_partition(n, n.max(1), &mut |labels| {
            let good = inside.iter().any(|ids| {
                let distinct: BTreeSet<usize> = ids.iter().map(|&i| labels[i]).collect();
                distinct.len() <= t
            });
            if !good {
                all_good = false;
                return false;
            }
            true
        });
        if all_good {
            return t;
        }
        t += 1;
    }
}
