//! Partition-arrow statements on finite hosts and fragment-relative Ramsey
//! degree bounds.
//!
//! A statement `C -> (B)^A_{k,t}` holds when every k-coloring of the copies
//! of A in C admits a copy of B whose inner A-copies carry at most t colors.
//! Colorings are enumerated as set partitions of the copy set into at most
//! `min(k, |copies|)` blocks (a coloring only matters through the partition
//! it induces), in lexicographic restricted-growth-string order, optionally
//! pruned to orbit representatives under `Aut(C)`. Counterexamples are always
//! the lexicographically least defeating partition: the least defeating
//! partition is minimal in its orbit, so pruning never changes it.

use std::collections::BTreeSet;

use crate::canon::{automorphisms, canonical_form};
use crate::copies::{enumerate_copies, CopySet, StructCopy};
use crate::error::{Error, Result};
use crate::exec::{map_chunks, scan_first, EngineConfig};
use crate::expansions::ClassFragment;
use crate::partition::{count_rgs, next_rgs, normalize_rgs, num_blocks, rgs_at_rank};
use crate::structure::FiniteStructure;

/// A total coloring of a copy set, carried together with the copy set it
/// colors. The assignment is indexed by copy order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    copy_set: CopySet,
    k: usize,
    assignment: Vec<usize>,
}

impl Coloring {
    pub fn new(copy_set: CopySet, k: usize, assignment: Vec<usize>) -> Result<Self> {
        if k == 0 {
            return Err(Error::input("coloring needs k >= 1"));
        }
        if assignment.len() != copy_set.len() {
            return Err(Error::input(format!(
                "assignment covers {} copies but the copy set has {}",
                assignment.len(),
                copy_set.len()
            )));
        }
        if let Some(&bad) = assignment.iter().find(|&&v| v >= k) {
            return Err(Error::input(format!(
                "color {} out of range [0,{})",
                bad, k
            )));
        }
        Ok(Coloring {
            copy_set,
            k,
            assignment,
        })
    }

    pub fn copy_set(&self) -> &CopySet {
        &self.copy_set
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn color_of(&self, copy_idx: usize) -> usize {
        self.assignment[copy_idx]
    }

    /// The partition the coloring induces, in RGS normal form.
    pub fn induced_partition(&self) -> Vec<usize> {
        normalize_rgs(&self.assignment)
    }

    pub fn colors_used(&self) -> BTreeSet<usize> {
        self.assignment.iter().copied().collect()
    }

    pub fn assignment_string(&self) -> String {
        self.assignment
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// `C -> (B)^A_{k,t}` with everything over one signature and `1 <= t <= k`.
#[derive(Debug, Clone)]
pub struct ArrowStatement {
    pub host: FiniteStructure,
    pub big: FiniteStructure,
    pub pattern: FiniteStructure,
    pub k: usize,
    pub t: usize,
}

impl ArrowStatement {
    pub fn new(
        host: FiniteStructure,
        big: FiniteStructure,
        pattern: FiniteStructure,
        k: usize,
        t: usize,
    ) -> Result<Self> {
        if host.signature() != big.signature() || host.signature() != pattern.signature() {
            return Err(Error::input(
                "arrow statement requires one shared signature",
            ));
        }
        if k == 0 || t == 0 {
            return Err(Error::input("arrow statement requires k >= 1 and t >= 1"));
        }
        if t > k {
            return Err(Error::input(format!(
                "arrow statement requires t <= k, got t={} k={}",
                t, k
            )));
        }
        Ok(ArrowStatement {
            host,
            big,
            pattern,
            k,
            t,
        })
    }
}

/// Verdict of an arrow check. When the statement fails, `counterexample` is
/// the canonical defeating coloring and has been re-verified to realize at
/// least `t+1` colors on every copy of B in C.
#[derive(Debug, Clone)]
pub struct ArrowVerdict {
    pub holds: bool,
    pub counterexample: Option<Coloring>,
    /// Optional evidence for a holding verdict: per enumerated coloring class
    /// (as an RGS string), one copy of B spanning at most t colors.
    pub good_copy_witnesses: Option<Vec<(String, StructCopy)>>,
}

/// Shared search state for one arrow instance.
struct ArrowSpace {
    copies_a: CopySet,
    copies_b: CopySet,
    /// Per B-copy, the indices of A-copies inside it.
    inside: Vec<Vec<usize>>,
    /// Aut(C) acting on A-copy indices (identity omitted); empty when
    /// pruning is off.
    copy_perms: Vec<Vec<usize>>,
}

impl ArrowSpace {
    fn build(
        host: &FiniteStructure,
        big: &FiniteStructure,
        pattern: &FiniteStructure,
        cfg: &EngineConfig,
    ) -> Result<Self> {
        let copies_a = enumerate_copies(pattern, host)?;
        let copies_b = enumerate_copies(big, host)?;
        if copies_b.is_empty() {
            return Err(Error::no_host(format!("no copy of {} in {}", big, host)));
        }
        let inside: Vec<Vec<usize>> = copies_b
            .copies()
            .iter()
            .map(|bc| copies_a.indices_inside(bc))
            .collect();
        let auts = automorphisms(host);
        let copy_perms = if auts.len() > 1 && auts.len() <= cfg.max_aut_for_pruning {
            auts.iter()
                .filter(|a| a.iter().enumerate().any(|(i, &v)| i != v))
                .map(|aut| {
                    copies_a
                        .copies()
                        .iter()
                        .map(|c| {
                            let mut image: Vec<usize> =
                                c.subset().iter().map(|&x| aut[x]).collect();
                            image.sort_unstable();
                            copies_a
                                .index_of(&image)
                                .expect("automorphism permutes copies")
                        })
                        .collect()
                })
                .collect()
        } else {
            Vec::new()
        };
        Ok(ArrowSpace {
            copies_a,
            copies_b,
            inside,
            copy_perms,
        })
    }

    /// Whether `rgs` is the lexicographically least element of its
    /// Aut(C)-orbit.
    fn is_canonical(&self, rgs: &[usize]) -> bool {
        if self.copy_perms.is_empty() {
            return true;
        }
        let mut relabeled = vec![0usize; rgs.len()];
        for perm in &self.copy_perms {
            for (i, &p) in perm.iter().enumerate() {
                relabeled[p] = rgs[i];
            }
            if normalize_rgs(&relabeled) < rgs.to_vec() {
                return false;
            }
        }
        true
    }

    /// Index of some copy of B spanning at most `t` blocks of `rgs`, if any.
    fn good_copy(&self, rgs: &[usize], t: usize) -> Option<usize> {
        let mut seen = vec![false; num_blocks(rgs).max(1)];
        'outer: for (j, ids) in self.inside.iter().enumerate() {
            for s in seen.iter_mut() {
                *s = false;
            }
            let mut distinct = 0usize;
            for &i in ids {
                let b = rgs[i];
                if !seen[b] {
                    seen[b] = true;
                    distinct += 1;
                    if distinct > t {
                        continue 'outer;
                    }
                }
            }
            return Some(j);
        }
        None
    }
}

/// Decide the arrow statement.
pub fn check_arrow(stmt: &ArrowStatement, cfg: &EngineConfig) -> Result<ArrowVerdict> {
    check_arrow_impl(stmt, cfg, None)
}

/// As `check_arrow`, additionally collecting up to `max_witnesses` good-copy
/// witnesses per coloring class when the statement holds.
pub fn check_arrow_with_witnesses(
    stmt: &ArrowStatement,
    cfg: &EngineConfig,
    max_witnesses: usize,
) -> Result<ArrowVerdict> {
    check_arrow_impl(stmt, cfg, Some(max_witnesses))
}

fn check_arrow_impl(
    stmt: &ArrowStatement,
    cfg: &EngineConfig,
    witnesses: Option<usize>,
) -> Result<ArrowVerdict> {
    let space = ArrowSpace::build(&stmt.host, &stmt.big, &stmt.pattern, cfg)?;
    let n = space.copies_a.len();
    let kmax = stmt.k.min(n.max(1));
    let total = count_rgs(n, kmax);
    if total > cfg.max_colorings {
        return Err(Error::guard(format!(
            "{} coloring partitions exceed the limit of {} (set RAMSEY_MAX_COLORINGS to raise)",
            total, cfg.max_colorings
        )));
    }
    let defeat = scan_first(total, cfg.workers, |start, end| {
        let mut rgs = rgs_at_rank(n, kmax, start);
        let mut rank = start;
        while rank < end {
            if space.is_canonical(&rgs) && space.good_copy(&rgs, stmt.t).is_none() {
                return Some(rgs.clone());
            }
            rank += 1;
            if rank < end && !next_rgs(&mut rgs, kmax) {
                break;
            }
        }
        None
    });
    if let Some(rgs) = defeat {
        let coloring = Coloring::new(space.copies_a.clone(), stmt.k, rgs)?;
        verify_defeats(&coloring, &space, stmt.t);
        return Ok(ArrowVerdict {
            holds: false,
            counterexample: Some(coloring),
            good_copy_witnesses: None,
        });
    }
    let good_copy_witnesses = witnesses.map(|cap| {
        let per_chunk = map_chunks(total, cfg.workers, |start, end| {
            let mut out = Vec::new();
            let mut rgs = rgs_at_rank(n, kmax, start);
            let mut rank = start;
            while rank < end && out.len() < cap {
                if space.is_canonical(&rgs) {
                    if let Some(j) = space.good_copy(&rgs, stmt.t) {
                        let label = rgs
                            .iter()
                            .map(|v| v.to_string())
                            .collect::<Vec<_>>()
                            .join(",");
                        out.push((label, space.copies_b.copy(j).clone()));
                    }
                }
                rank += 1;
                if rank < end && !next_rgs(&mut rgs, kmax) {
                    break;
                }
            }
            out
        });
        let mut all: Vec<(String, StructCopy)> = per_chunk.into_iter().flatten().collect();
        all.truncate(cap);
        all
    });
    Ok(ArrowVerdict {
        holds: true,
        counterexample: None,
        good_copy_witnesses,
    })
}

/// Counterexamples must realize at least t+1 colors on every copy of B;
/// violation would mean the search itself is broken.
fn verify_defeats(coloring: &Coloring, space: &ArrowSpace, t: usize) {
    for ids in &space.inside {
        let distinct: BTreeSet<usize> = ids.iter().map(|&i| coloring.color_of(i)).collect();
        assert!(
            distinct.len() > t,
            "internal error: emitted counterexample spans only {} colors on some copy",
            distinct.len()
        );
    }
}

/// The set of colors a coloring of binom(C, A) takes on the A-copies inside
/// one copy of `big` in C.
pub fn colors_on_copy(
    coloring: &Coloring,
    big: &FiniteStructure,
    b_copy: &StructCopy,
) -> Result<BTreeSet<usize>> {
    let ambient = coloring.copy_set().ambient();
    if big.signature() != ambient.signature() {
        return Err(Error::input(
            "signature mismatch between B and the colored ambient",
        ));
    }
    let subset = b_copy.subset_set();
    if let Some(&bad) = subset.iter().find(|&&x| x >= ambient.size()) {
        return Err(Error::input(format!(
            "copy element {} outside the ambient universe",
            bad
        )));
    }
    let induced = ambient.induced(&subset)?;
    if canonical_form(&induced) != canonical_form(big) {
        return Err(Error::input(format!(
            "subset {:?} does not induce a copy of {}",
            b_copy.subset(),
            big
        )));
    }
    Ok(coloring
        .copy_set()
        .indices_inside(b_copy)
        .into_iter()
        .map(|i| coloring.color_of(i))
        .collect())
}

/// The color-count policy a `min_t` search runs under.
///
/// On a fixed finite host the arrow for `k = |binom(C,A)|` is defeated by the
/// injective coloring whenever `t < |binom(B,A)|`, so the all-k quantity
/// degenerates to `|binom(B,A)|`. The classical threshold `k = t + 1` is the
/// informative fragment statistic and is the default.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinTPolicy {
    /// Least t such that the arrow holds at `k = t + 1`.
    ColorThreshold,
    /// Least t such that the arrow holds at `k = |binom(C,A)|` (equivalently
    /// for every k simultaneously).
    SaturatedColors,
}

#[derive(Debug, Clone)]
pub struct MinTResult {
    pub t: usize,
    pub policy: MinTPolicy,
    /// Canonical defeating coloring at `t - 1`, absent when t = 1.
    pub witness: Option<Coloring>,
}

/// Least tolerated color count for `C -> (B)^A` under the given policy.
pub fn min_t(
    host: &FiniteStructure,
    big: &FiniteStructure,
    pattern: &FiniteStructure,
    policy: MinTPolicy,
    cfg: &EngineConfig,
) -> Result<MinTResult> {
    let copies_b = enumerate_copies(big, host)?;
    if copies_b.is_empty() {
        return Err(Error::no_host(format!("no copy of {} in {}", big, host)));
    }
    let inner = enumerate_copies(pattern, big)?.len();
    let ambient_copies = enumerate_copies(pattern, host)?.len();
    let mut witness: Option<Coloring> = None;
    for t in 1..=inner.max(1) {
        if t >= inner {
            // Every copy of B sees at most `inner` colors.
            return Ok(MinTResult { t, policy, witness });
        }
        let k = match policy {
            MinTPolicy::ColorThreshold => t + 1,
            MinTPolicy::SaturatedColors => ambient_copies.max(t + 1),
        };
        let stmt = ArrowStatement::new(host.clone(), big.clone(), pattern.clone(), k, t)?;
        let verdict = check_arrow(&stmt, cfg)?;
        if verdict.holds {
            return Ok(MinTResult { t, policy, witness });
        }
        witness = verdict.counterexample;
    }
    unreachable!("the arrow holds once t reaches |binom(B,A)|")
}

/// Fragment evidence for the Ramsey degree of `pattern`.
#[derive(Debug, Clone)]
pub struct DegreeBounds {
    pub lower: usize,
    /// (B index, weakest host index, defeating coloring at lower-1) for the
    /// pattern B attaining the lower bound.
    pub lower_witness: Option<(usize, usize, Option<Coloring>)>,
    /// None means "unbounded within fragment": some candidate pattern could
    /// not be certified under the configured resource guards.
    pub upper: Option<usize>,
    /// Host scheme: per candidate B, (B index, best host index, min_t value).
    pub scheme: Vec<(usize, usize, usize)>,
}

/// Bracket the degree of `pattern` over a fragment: for every member B with
/// at most `size_limit` elements, take the best value `min_t(C, B, A)` over
/// all fragment hosts C; the bound is the worst such value. Values are
/// fragment-relative evidence, not statements about any infinite class.
pub fn degree_bounds(
    pattern: &FiniteStructure,
    fragment: &ClassFragment,
    size_limit: usize,
    cfg: &EngineConfig,
) -> Result<DegreeBounds> {
    let code = canonical_form(pattern);
    if !fragment.contains_code(&code) {
        return Err(Error::input(format!(
            "pattern {} is not a fragment member",
            pattern
        )));
    }
    let members = fragment.members();
    let mut lower = 1usize;
    let mut lower_witness: Option<(usize, usize, Option<Coloring>)> = None;
    let mut scheme = Vec::new();
    let mut guarded = false;
    for (bi, big) in members.iter().enumerate() {
        if big.size() > size_limit {
            continue;
        }
        // min over hosts of min_t, with the defeating coloring of the winner.
        let mut best: Option<(usize, MinTResult)> = None;
        for (ci, host) in members.iter().enumerate() {
            let has_host = !enumerate_copies(big, host)?.is_empty();
            if !has_host {
                continue;
            }
            match min_t(host, big, pattern, MinTPolicy::ColorThreshold, cfg) {
                Ok(res) => {
                    if best.as_ref().is_none_or(|(_, b)| res.t < b.t) {
                        best = Some((ci, res));
                    }
                }
                Err(Error::ResourceGuard(_)) => {
                    guarded = true;
                }
                Err(e) => return Err(e),
            }
        }
        match best {
            Some((ci, res)) => {
                scheme.push((bi, ci, res.t));
                if res.t > lower {
                    lower = res.t;
                    lower_witness = Some((bi, ci, res.witness));
                }
            }
            None => {
                // Every host for this B tripped a guard (C = B always hosts
                // B, so absence of hosts means guards, not geometry).
                guarded = true;
            }
        }
    }
    let upper = if guarded { None } else { Some(lower) };
    Ok(DegreeBounds {
        lower,
        lower_witness,
        upper,
        scheme,
    })
}
