//! Canonical labeling, isomorphism testing, and automorphism groups.
//!
//! The canonical form is the lexicographically least "row encoding" over all
//! vertex orderings compatible with an iterated invariant refinement. Two
//! structures over the same signature receive equal codes exactly when they
//! are isomorphic, and the code induces a deterministic total order on
//! isomorphism types (signature, then size, then relation data).

use std::collections::BTreeMap;
use std::fmt;

use crate::copies::enumerate_embeddings;
use crate::structure::FiniteStructure;

/// Canonical encoding of an isomorphism type.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode {
    sig: String,
    size: usize,
    rels: String,
}

impl CanonicalCode {
    pub fn of(s: &FiniteStructure) -> Self {
        canonical_form(s)
    }

    pub fn size(&self) -> usize {
        self.size
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}|{}|{}]", self.sig, self.size, self.rels)
    }
}

fn code_of_labeled(s: &FiniteStructure) -> CanonicalCode {
    let sig = s
        .signature()
        .relations()
        .iter()
        .map(|r| format!("{}/{}", r.name, r.arity))
        .collect::<Vec<_>>()
        .join(",");
    let rels = s
        .signature()
        .relations()
        .iter()
        .enumerate()
        .map(|(idx, _)| {
            s.tuples(idx)
                .iter()
                .map(|t| {
                    t.iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                })
                .collect::<Vec<_>>()
                .join(";")
        })
        .collect::<Vec<_>>()
        .join("|")
        .to_string();
    CanonicalCode {
        sig,
        size: s.size(),
        rels,
    }
}

/// Iterated invariant refinement; returns a rank per vertex. Ranks are
/// assigned by sorted invariant key, so they are comparable across
/// isomorphic structures.
fn refine_colors(s: &FiniteStructure) -> Vec<usize> {
    let n = s.size();
    let mut colors = vec![0usize; n];
    loop {
        // Key: current color plus, per (relation, position), the sorted list
        // of color vectors of incident tuples.
        let mut keys: Vec<Vec<i64>> = Vec::with_capacity(n);
        for v in 0..n {
            let mut key: Vec<i64> = vec![colors[v] as i64];
            for (idx, sym) in s.signature().relations().iter().enumerate() {
                for p in 0..sym.arity {
                    let mut incident: Vec<Vec<i64>> = s
                        .tuples(idx)
                        .iter()
                        .filter(|t| t[p] == v)
                        .map(|t| t.iter().map(|&x| colors[x] as i64).collect())
                        .collect();
                    incident.sort();
                    key.push(-2);
                    key.push(incident.len() as i64);
                    for vec in incident {
                        key.push(-1);
                        key.extend(vec);
                    }
                }
            }
            keys.push(key);
        }
        let mut sorted: Vec<&Vec<i64>> = keys.iter().collect();
        sorted.sort();
        sorted.dedup();
        let rank: BTreeMap<&Vec<i64>, usize> =
            sorted.iter().enumerate().map(|(i, k)| (*k, i)).collect();
        let next: Vec<usize> = keys.iter().map(|k| rank[k]).collect();
        if next == colors {
            return colors;
        }
        colors = next;
    }
}

struct CanonSearch<'a> {
    s: &'a FiniteStructure,
    colors: Vec<usize>,
    /// Tuples of `s` indexed by (relation, tuple), flattened once.
    tuples: Vec<(usize, Vec<usize>)>,
    best: Option<Vec<i64>>,
    best_order: Vec<usize>,
}

impl<'a> CanonSearch<'a> {
    /// Row of tokens contributed by placing old vertex `v` at new index
    /// `placed.len()`: all tuples whose support lies in the new prefix and
    /// touches `v`, rewritten in new indices, sorted, `-1`-terminated.
    fn row(&self, new_pos: &[Option<usize>], v: usize) -> Vec<i64> {
        let mut items: Vec<Vec<i64>> = Vec::new();
        for (rel, t) in &self.tuples {
            if !t.contains(&v) {
                continue;
            }
            if t.iter().all(|&x| x == v || new_pos[x].is_some()) {
                let v_index = new_pos.iter().flatten().count() as i64;
                let mapped: Vec<i64> = std::iter::once(*rel as i64)
                    .chain(t.iter().map(|&x| {
                        if x == v {
                            v_index
                        } else {
                            new_pos[x].unwrap() as i64
                        }
                    }))
                    .collect();
                items.push(mapped);
            }
        }
        items.sort();
        items.dedup();
        let mut out: Vec<i64> = items.into_iter().flatten().collect();
        out.push(-1);
        out
    }

    fn search(
        &mut self,
        stream: &mut Vec<i64>,
        order: &mut Vec<usize>,
        new_pos: &mut Vec<Option<usize>>,
    ) {
        let n = self.s.size();
        let depth = order.len();
        if depth == n {
            if self.best.as_ref().is_none_or(|b| &**stream < b.as_slice()) {
                self.best = Some(stream.clone());
                self.best_order = order.clone();
            }
            return;
        }
        // Candidates: unplaced vertices of the least color among unplaced.
        let min_color = (0..n)
            .filter(|&v| new_pos[v].is_none())
            .map(|v| self.colors[v])
            .min()
            .unwrap();
        let mut rows: Vec<(Vec<i64>, usize)> = (0..n)
            .filter(|&v| new_pos[v].is_none() && self.colors[v] == min_color)
            .map(|v| (self.row(new_pos, v), v))
            .collect();
        rows.sort();
        let min_row = rows[0].0.clone();
        // Prefix bound against the best complete encoding found so far.
        if let Some(best) = &self.best {
            let end = (stream.len() + min_row.len()).min(best.len());
            let mut probe = stream.clone();
            probe.extend_from_slice(&min_row);
            match probe[..end].cmp(&best[..end]) {
                std::cmp::Ordering::Greater => return,
                std::cmp::Ordering::Less | std::cmp::Ordering::Equal => {}
            }
        }
        for (row, v) in rows.iter().filter(|(r, _)| *r == min_row) {
            let mark = stream.len();
            stream.extend_from_slice(row);
            new_pos[*v] = Some(depth);
            order.push(*v);
            self.search(stream, order, new_pos);
            order.pop();
            new_pos[*v] = None;
            stream.truncate(mark);
        }
    }
}

/// The canonical representative of the isomorphism class of `s`: a relabeled
/// copy that is identical for all structures isomorphic to `s`.
pub fn canonicalize(s: &FiniteStructure) -> FiniteStructure {
    let n = s.size();
    if s.tuple_count() == 0 {
        return s.clone();
    }
    let mut tuples = Vec::new();
    for idx in 0..s.signature().len() {
        for t in s.tuples(idx) {
            tuples.push((idx, t.clone()));
        }
    }
    let mut search = CanonSearch {
        s,
        colors: refine_colors(s),
        tuples,
        best: None,
        best_order: Vec::new(),
    };
    search.search(&mut Vec::new(), &mut Vec::new(), &mut vec![None; n]);
    // best_order[i] = old vertex placed at new index i; build old -> new.
    let mut perm = vec![0usize; n];
    for (new, &old) in search.best_order.iter().enumerate() {
        perm[old] = new;
    }
    s.relabel(&perm)
}

/// Canonical encoding; equal codes exactly characterize isomorphism.
pub fn canonical_form(s: &FiniteStructure) -> CanonicalCode {
    code_of_labeled(&canonicalize(s))
}

pub fn are_isomorphic(a: &FiniteStructure, b: &FiniteStructure) -> bool {
    a.signature() == b.signature() && a.size() == b.size() && canonical_form(a) == canonical_form(b)
}

/// The full automorphism group as an explicit, lexicographically sorted list
/// of permutations.
pub fn automorphisms(s: &FiniteStructure) -> Vec<Vec<usize>> {
    enumerate_embeddings(s, s).expect("same signature")
}

pub fn is_rigid(s: &FiniteStructure) -> bool {
    automorphisms(s).len() == 1
}
