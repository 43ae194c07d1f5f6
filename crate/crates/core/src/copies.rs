//! Enumeration of embeddings and of copies (induced isomorphic substructures).

use std::collections::BTreeSet;

use crate::canon::{canonical_form, CanonicalCode};
use crate::error::{Error, Result};
use crate::structure::FiniteStructure;

/// A copy of a pattern inside an ambient structure, identified with its
/// underlying subset. Two copies are equal exactly when their subsets are.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StructCopy {
    subset: Vec<usize>,
}

impl StructCopy {
    pub fn new(mut subset: Vec<usize>) -> Self {
        subset.sort_unstable();
        subset.dedup();
        StructCopy { subset }
    }

    pub fn subset(&self) -> &[usize] {
        &self.subset
    }

    pub fn subset_set(&self) -> BTreeSet<usize> {
        self.subset.iter().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.subset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subset.is_empty()
    }

    /// Whether this copy's subset is contained in `other`'s.
    pub fn contained_in(&self, other: &StructCopy) -> bool {
        let mut it = other.subset.iter().peekable();
        'outer: for x in &self.subset {
            while let Some(&&y) = it.peek() {
                if y == *x {
                    continue 'outer;
                }
                if y > *x {
                    return false;
                }
                it.next();
            }
            return false;
        }
        true
    }
}

/// The exhaustive, lexicographically sorted set of copies of `pattern`
/// inside `ambient`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CopySet {
    ambient: FiniteStructure,
    pattern: FiniteStructure,
    pattern_code: CanonicalCode,
    copies: Vec<StructCopy>,
}

impl CopySet {
    pub fn ambient(&self) -> &FiniteStructure {
        &self.ambient
    }

    pub fn pattern(&self) -> &FiniteStructure {
        &self.pattern
    }

    /// Canonical form shared by the pattern and every copy's induced
    /// substructure.
    pub fn pattern_code(&self) -> &CanonicalCode {
        &self.pattern_code
    }

    pub fn copies(&self) -> &[StructCopy] {
        &self.copies
    }

    pub fn len(&self) -> usize {
        self.copies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.copies.is_empty()
    }

    pub fn copy(&self, idx: usize) -> &StructCopy {
        &self.copies[idx]
    }

    /// Index of a copy by its (sorted) subset.
    pub fn index_of(&self, subset: &[usize]) -> Option<usize> {
        self.copies
            .binary_search_by(|c| c.subset.as_slice().cmp(subset))
            .ok()
    }

    /// Indices of copies whose subset is contained in `outer`.
    pub fn indices_inside(&self, outer: &StructCopy) -> Vec<usize> {
        self.copies
            .iter()
            .enumerate()
            .filter(|(_, c)| c.contained_in(outer))
            .map(|(i, _)| i)
            .collect()
    }
}

/// All embeddings of `a` into `c`, as maps indexed by `a`'s elements, in
/// lexicographic order of the map vector. Backtracking extends partial
/// injections and checks preservation and reflection on the assigned prefix.
pub fn enumerate_embeddings(a: &FiniteStructure, c: &FiniteStructure) -> Result<Vec<Vec<usize>>> {
    if a.signature() != c.signature() {
        return Err(Error::input(
            "signature mismatch between pattern and ambient",
        ));
    }
    let m = a.size();
    let n = c.size();
    let mut out = Vec::new();
    if m > n {
        return Ok(out);
    }
    // Pattern tuples become checkable once their last element is placed.
    let rel_count = a.signature().len();
    let mut a_tuples_by_max: Vec<Vec<(usize, &Vec<usize>)>> = vec![Vec::new(); m.max(1)];
    for idx in 0..rel_count {
        for t in a.tuples(idx) {
            if let Some(&mx) = t.iter().max() {
                a_tuples_by_max[mx].push((idx, t));
            }
        }
    }
    let mut map: Vec<usize> = Vec::with_capacity(m);
    let mut used = vec![false; n];
    let mut inverse: Vec<Option<usize>> = vec![None; n];

    fn extend(
        a: &FiniteStructure,
        c: &FiniteStructure,
        a_tuples_by_max: &[Vec<(usize, &Vec<usize>)>],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        inverse: &mut Vec<Option<usize>>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let i = map.len();
        if i == a.size() {
            out.push(map.clone());
            return;
        }
        'candidate: for y in 0..c.size() {
            if used[y] {
                continue;
            }
            map.push(y);
            used[y] = true;
            inverse[y] = Some(i);
            // Preserve: pattern tuples completed by placing i.
            for &(rel, t) in &a_tuples_by_max[i] {
                let image: Vec<usize> = t.iter().map(|&x| map[x]).collect();
                if !c.holds(rel, &image) {
                    map.pop();
                    used[y] = false;
                    inverse[y] = None;
                    continue 'candidate;
                }
            }
            // Reflect: ambient tuples inside the image that touch y.
            for rel in 0..c.signature().len() {
                for t in c.tuples(rel) {
                    if t.contains(&y) && t.iter().all(|&z| used[z]) {
                        let pre: Vec<usize> = t.iter().map(|&z| inverse[z].unwrap()).collect();
                        if !a.holds(rel, &pre) {
                            map.pop();
                            used[y] = false;
                            inverse[y] = None;
                            continue 'candidate;
                        }
                    }
                }
            }
            extend(a, c, a_tuples_by_max, map, used, inverse, out);
            map.pop();
            used[y] = false;
            inverse[y] = None;
        }
    }

    extend(
        a,
        c,
        &a_tuples_by_max,
        &mut map,
        &mut used,
        &mut inverse,
        &mut out,
    );
    Ok(out)
}

/// Every subset of the ambient universe inducing a substructure isomorphic to
/// the pattern, in sorted order.
pub fn enumerate_copies(pattern: &FiniteStructure, ambient: &FiniteStructure) -> Result<CopySet> {
    let embeddings = enumerate_embeddings(pattern, ambient)?;
    let subsets: BTreeSet<Vec<usize>> = embeddings
        .into_iter()
        .map(|map| {
            let mut s = map;
            s.sort_unstable();
            s
        })
        .collect();
    Ok(CopySet {
        ambient: ambient.clone(),
        pattern: pattern.clone(),
        pattern_code: canonical_form(pattern),
        copies: subsets
            .into_iter()
            .map(|subset| StructCopy { subset })
            .collect(),
    })
}
