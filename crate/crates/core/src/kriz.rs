//! Equivalence-constrained Ramsey checking and the product-coloring
//! reduction.
//!
//! `B` is E-A-Ramsey in a host `C` when every coloring of binom(C, A) admits
//! an embedding of B transporting E-equivalent A-copies to equal colors. If
//! every relation with at most t blocks has a defeating coloring, the product
//! of those witnesses realizes at least t+1 colors on every copy of B: along
//! any embedding the induced relation disagrees with each enumerated relation
//! on some pair, so it has more than t classes.

use std::collections::BTreeSet;

use crate::arrows::Coloring;
use crate::canon::canonical_form;
use crate::copies::{enumerate_copies, enumerate_embeddings, CopySet};
use crate::error::{Error, Result};
use crate::exec::{scan_first, EngineConfig};
use crate::partition::{
    blocks_of, count_rgs, first_rgs, next_rgs, normalize_rgs, num_blocks, rgs_at_rank,
};
use crate::structure::{Embedding, FiniteStructure};

/// A partition of a copy set into nonempty blocks, stored as a normalized
/// restricted growth string over the copy order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivRelation {
    base: CopySet,
    rgs: Vec<usize>,
}

impl EquivRelation {
    pub fn from_rgs(base: CopySet, rgs: Vec<usize>) -> Result<Self> {
        if rgs.len() != base.len() {
            return Err(Error::input(format!(
                "relation string covers {} copies but the base has {}",
                rgs.len(),
                base.len()
            )));
        }
        if normalize_rgs(&rgs) != rgs {
            return Err(Error::input(format!(
                "labels {:?} are not in restricted-growth normal form",
                rgs
            )));
        }
        Ok(EquivRelation { base, rgs })
    }

    /// One block containing everything (no blocks on an empty base).
    pub fn full(base: CopySet) -> Self {
        let rgs = first_rgs(base.len());
        EquivRelation { base, rgs }
    }

    /// Every copy in its own block.
    pub fn discrete(base: CopySet) -> Self {
        let rgs = (0..base.len()).collect();
        EquivRelation { base, rgs }
    }

    pub fn base(&self) -> &CopySet {
        &self.base
    }

    pub fn rgs(&self) -> &[usize] {
        &self.rgs
    }

    pub fn num_blocks(&self) -> usize {
        num_blocks(&self.rgs)
    }

    /// Blocks in first-occurrence order as copy-index lists.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        blocks_of(&self.rgs)
    }

    pub fn same_block(&self, i: usize, j: usize) -> bool {
        self.rgs[i] == self.rgs[j]
    }

    /// Serialization over the documented copy order, e.g. `0,0,1`.
    pub fn rgs_string(&self) -> String {
        self.rgs
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn parse_rgs(text: &str) -> Result<Vec<usize>> {
        if text.trim().is_empty() {
            return Ok(Vec::new());
        }
        text.split(',')
            .map(|s| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::parse(format!("bad relation label {:?}", s)))
            })
            .collect()
    }
}

/// Verdict of an E-A-Ramsey check.
#[derive(Debug, Clone)]
pub struct EVerdict {
    pub holds: bool,
    /// The color budget the check ran at.
    pub k: usize,
    /// Canonical defeating coloring when the check fails.
    pub defeating: Option<Coloring>,
    /// Number of coloring classes examined.
    pub classes_checked: u128,
}

/// Search state shared by the E-Ramsey routines.
struct ESpace {
    copies_ambient: CopySet,
    /// Per embedding of B into C, the ambient copy index of each base copy.
    transports: Vec<Vec<usize>>,
    /// Non-singleton blocks of E (singleton blocks are vacuous).
    blocks: Vec<Vec<usize>>,
}

impl ESpace {
    fn build(
        host: &FiniteStructure,
        big: &FiniteStructure,
        pattern: &FiniteStructure,
        relation: &EquivRelation,
    ) -> Result<Self> {
        if host.signature() != big.signature() || host.signature() != pattern.signature() {
            return Err(Error::input("E-Ramsey check requires one shared signature"));
        }
        if relation.base().ambient() != big {
            return Err(Error::input("relation must partition the copies of A in B"));
        }
        if canonical_form(relation.base().pattern()) != canonical_form(pattern) {
            return Err(Error::input("relation base pattern does not match A"));
        }
        let embeddings = enumerate_embeddings(big, host)?;
        if embeddings.is_empty() {
            return Err(Error::no_host(format!(
                "no embedding of {} into {}",
                big, host
            )));
        }
        let copies_ambient = enumerate_copies(pattern, host)?;
        let transports = embeddings
            .iter()
            .map(|map| {
                relation
                    .base()
                    .copies()
                    .iter()
                    .map(|c| {
                        let mut image: Vec<usize> = c.subset().iter().map(|&x| map[x]).collect();
                        image.sort_unstable();
                        copies_ambient
                            .index_of(&image)
                            .expect("embedding transports copies to copies")
                    })
                    .collect()
            })
            .collect();
        let blocks = relation
            .blocks()
            .into_iter()
            .filter(|b| b.len() > 1)
            .collect();
        Ok(ESpace {
            copies_ambient,
            transports,
            blocks,
        })
    }

    /// Does some embedding make every block of E monochromatic under `rgs`?
    fn has_good_embedding(&self, rgs: &[usize]) -> bool {
        self.transports.iter().any(|tr| {
            self.blocks.iter().all(|block| {
                let first = rgs[tr[block[0]]];
                block[1..].iter().all(|&i| rgs[tr[i]] == first)
            })
        })
    }
}

/// Decide whether `big` is `relation`-`pattern`-Ramsey inside `host` for
/// k-colorings. Colorings are enumerated exactly as in `check_arrow`.
pub fn check_e_ramsey(
    host: &FiniteStructure,
    big: &FiniteStructure,
    pattern: &FiniteStructure,
    relation: &EquivRelation,
    k: usize,
    cfg: &EngineConfig,
) -> Result<EVerdict> {
    if k == 0 {
        return Err(Error::input("E-Ramsey check requires k >= 1"));
    }
    let space = ESpace::build(host, big, pattern, relation)?;
    let n = space.copies_ambient.len();
    if space.blocks.is_empty() {
        // Only singleton blocks: the condition is vacuous.
        return Ok(EVerdict {
            holds: true,
            k,
            defeating: None,
            classes_checked: 0,
        });
    }
    let kmax = k.min(n.max(1));
    let total = count_rgs(n, kmax);
    if total > cfg.max_colorings {
        return Err(Error::guard(format!(
            "{} coloring partitions exceed the limit of {}",
            total, cfg.max_colorings
        )));
    }
    let defeat = scan_first(total, cfg.workers, |start, end| {
        let mut rgs = rgs_at_rank(n, kmax, start);
        let mut rank = start;
        while rank < end {
            if !space.has_good_embedding(&rgs) {
                return Some(rgs.clone());
            }
            rank += 1;
            if rank < end && !next_rgs(&mut rgs, kmax) {
                break;
            }
        }
        None
    });
    match defeat {
        Some(rgs) => {
            let coloring = Coloring::new(space.copies_ambient.clone(), k, rgs)?;
            Ok(EVerdict {
                holds: false,
                k,
                defeating: Some(coloring),
                classes_checked: total,
            })
        }
        None => Ok(EVerdict {
            holds: true,
            k,
            defeating: None,
            classes_checked: total,
        }),
    }
}

/// Search k = 1, 2, ... up to saturation (or `k_max`) for a coloring
/// defeating `relation`; returns the lexicographically least defeating
/// partition at the least defeating block count, or None when the relation
/// is E-A-Ramsey at saturation.
pub fn find_defeating_coloring(
    host: &FiniteStructure,
    big: &FiniteStructure,
    pattern: &FiniteStructure,
    relation: &EquivRelation,
    k_max: Option<usize>,
    cfg: &EngineConfig,
) -> Result<Option<Coloring>> {
    let space = ESpace::build(host, big, pattern, relation)?;
    if space.blocks.is_empty() {
        return Ok(None);
    }
    let n = space.copies_ambient.len();
    let cap = k_max.unwrap_or(n).min(n.max(1));
    for blocks in 1..=cap {
        let total = count_rgs(n, blocks);
        if total > cfg.max_colorings {
            return Err(Error::guard(format!(
                "{} coloring partitions exceed the limit of {}",
                total, cfg.max_colorings
            )));
        }
        let defeat = scan_first(total, cfg.workers, |start, end| {
            let mut rgs = rgs_at_rank(n, blocks, start);
            let mut rank = start;
            while rank < end {
                // Partitions with fewer blocks were scanned at smaller k.
                if num_blocks(&rgs) == blocks && !space.has_good_embedding(&rgs) {
                    return Some(rgs.clone());
                }
                rank += 1;
                if rank < end && !next_rgs(&mut rgs, blocks) {
                    break;
                }
            }
            None
        });
        if let Some(rgs) = defeat {
            return Ok(Some(Coloring::new(
                space.copies_ambient.clone(),
                blocks,
                rgs,
            )?));
        }
    }
    Ok(None)
}

/// A family of defeating colorings, one per equivalence relation, validated
/// on construction: no embedding of B may monochromatize all blocks of the
/// paired relation.
#[derive(Debug, Clone)]
pub struct WitnessFamily {
    host: FiniteStructure,
    big: FiniteStructure,
    pattern: FiniteStructure,
    entries: Vec<(EquivRelation, Coloring)>,
}

impl WitnessFamily {
    pub fn new(
        host: FiniteStructure,
        big: FiniteStructure,
        pattern: FiniteStructure,
        mut entries: Vec<(EquivRelation, Coloring)>,
    ) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::input("witness family must be nonempty"));
        }
        entries.sort_by(|(a, _), (b, _)| a.rgs().cmp(b.rgs()));
        for (relation, coloring) in &entries {
            if coloring.copy_set().ambient() != &host {
                return Err(Error::input("witness coloring is not over the family host"));
            }
            let space = ESpace::build(&host, &big, &pattern, relation)?;
            let good = space.has_good_embedding(coloring.assignment());
            if good {
                return Err(Error::input(format!(
                    "coloring {} does not defeat relation {}",
                    coloring.assignment_string(),
                    relation.rgs_string()
                )));
            }
        }
        Ok(WitnessFamily {
            host,
            big,
            pattern,
            entries,
        })
    }

    pub fn entries(&self) -> &[(EquivRelation, Coloring)] {
        &self.entries
    }

    pub fn host(&self) -> &FiniteStructure {
        &self.host
    }

    pub fn big(&self) -> &FiniteStructure {
        &self.big
    }

    pub fn pattern(&self) -> &FiniteStructure {
        &self.pattern
    }
}

/// The product of the family's colorings: each copy gets the tuple of its
/// component colors, re-indexed densely in lexicographic tuple order.
pub fn product_coloring(family: &WitnessFamily) -> Result<Coloring> {
    let first = &family.entries[0].1;
    let copy_set = first.copy_set().clone();
    for (_, coloring) in &family.entries {
        if coloring.copy_set() != &copy_set {
            return Err(Error::input("witness colorings must share one copy set"));
        }
    }
    let tuples: Vec<Vec<usize>> = (0..copy_set.len())
        .map(|i| family.entries.iter().map(|(_, c)| c.color_of(i)).collect())
        .collect();
    let mut distinct: Vec<Vec<usize>> = tuples
        .iter()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    distinct.sort();
    let k = distinct.len().max(1);
    let assignment = tuples
        .iter()
        .map(|t| distinct.binary_search(t).expect("tuple present"))
        .collect();
    Coloring::new(copy_set, k, assignment)
}

/// The relation induced on binom(B, A) by transporting a coloring of
/// binom(C, A) along an embedding: copies are related when their images get
/// equal colors.
pub fn induced_relation(embedding: &Embedding, coloring: &Coloring) -> Result<EquivRelation> {
    if embedding.codomain() != coloring.copy_set().ambient() {
        return Err(Error::input(
            "embedding codomain is not the colored ambient",
        ));
    }
    let pattern = coloring.copy_set().pattern();
    let base = enumerate_copies(pattern, embedding.domain())?;
    let labels: Vec<usize> = base
        .copies()
        .iter()
        .map(|c| {
            let mut image: Vec<usize> = c.subset().iter().map(|&x| embedding.apply(x)).collect();
            image.sort_unstable();
            let idx = coloring
                .copy_set()
                .index_of(&image)
                .expect("embedding transports copies to copies");
            coloring.color_of(idx)
        })
        .collect();
    let rgs = normalize_rgs(&labels);
    EquivRelation::from_rgs(base, rgs)
}

/// Outcome of the reduction from t-tolerance to relation-constrained Ramsey
/// statements.
#[derive(Debug)]
pub enum KrizOutcome {
    /// Some relation with at most t blocks is E-A-Ramsey at saturation; the
    /// canonically least one is returned with its certificate.
    ERamsey {
        relation: EquivRelation,
        certificate: EVerdict,
    },
    /// Every relation with at most t blocks is defeated; the product of the
    /// witnesses realizes at least t+1 colors on every copy of B in C
    /// (re-verified before returning).
    Defeated {
        witnesses: WitnessFamily,
        product: Coloring,
    },
}

/// Enumerate every equivalence relation with at most `t` blocks on
/// binom(B, A) in canonical order and look for one that is E-A-Ramsey in the
/// host; on total failure assemble the product coloring.
pub fn kriz_reduce(
    host: &FiniteStructure,
    big: &FiniteStructure,
    pattern: &FiniteStructure,
    t: usize,
    cfg: &EngineConfig,
) -> Result<KrizOutcome> {
    kriz_reduce_capped(host, big, pattern, t, None, cfg)
}

/// As `kriz_reduce`, with an explicit bound on the color budget of the
/// defeating-coloring searches.
///
/// `None` saturates at |binom(C,A)|: exact for the all-k reading, where on a
/// fixed finite host only relations whose non-singleton blocks survive an
/// injective coloring (i.e. none) can win, so success means the discrete
/// relation fits. A cap of `t + 1` is the classical informative budget: a
/// relation surviving it certifies the arrow at `k = t + 1`.
pub fn kriz_reduce_capped(
    host: &FiniteStructure,
    big: &FiniteStructure,
    pattern: &FiniteStructure,
    t: usize,
    k_cap: Option<usize>,
    cfg: &EngineConfig,
) -> Result<KrizOutcome> {
    if t == 0 {
        return Err(Error::input("kriz reduction requires t >= 1"));
    }
    let base = enumerate_copies(pattern, big)?;
    let m = base.len();
    if m > cfg.max_relation_base {
        return Err(Error::guard(format!(
            "relations over {} copies exceed the base limit of {} (set RAMSEY_MAX_RELATION_BASE to raise)",
            m, cfg.max_relation_base
        )));
    }
    let relation_count = count_rgs(m, t.min(m.max(1)));
    if relation_count > cfg.max_relations {
        return Err(Error::guard(format!(
            "{} equivalence relations exceed the limit of {}",
            relation_count, cfg.max_relations
        )));
    }
    // Surface the no-host case before any search.
    if enumerate_embeddings(big, host)?.is_empty() {
        return Err(Error::no_host(format!(
            "no embedding of {} into {}",
            big, host
        )));
    }
    let saturated = enumerate_copies(pattern, host)?.len().max(1);

    let budget = k_cap.unwrap_or(saturated).min(saturated).max(1);
    let mut witnesses: Vec<(EquivRelation, Coloring)> = Vec::new();
    let mut rgs = first_rgs(m);
    loop {
        let relation = EquivRelation::from_rgs(base.clone(), rgs.clone())?;
        match find_defeating_coloring(host, big, pattern, &relation, Some(budget), cfg)? {
            None => {
                let certificate = check_e_ramsey(host, big, pattern, &relation, budget, cfg)?;
                assert!(
                    certificate.holds,
                    "internal error: surviving relation failed its certificate"
                );
                return Ok(KrizOutcome::ERamsey {
                    relation,
                    certificate,
                });
            }
            Some(coloring) => witnesses.push((relation, coloring)),
        }
        if m == 0 || !next_rgs(&mut rgs, t.min(m)) {
            break;
        }
    }
    let family = WitnessFamily::new(host.clone(), big.clone(), pattern.clone(), witnesses)?;
    let product = product_coloring(&family)?;
    // The t+1 guarantee, re-verified copy by copy before returning.
    let copies_b = enumerate_copies(big, host)?;
    for bc in copies_b.copies() {
        let colors: BTreeSet<usize> = product
            .copy_set()
            .indices_inside(bc)
            .into_iter()
            .map(|i| product.color_of(i))
            .collect();
        assert!(
            colors.len() > t,
            "internal error: product coloring spans only {} colors on {:?}",
            colors.len(),
            bc.subset()
        );
    }
    Ok(KrizOutcome::Defeated {
        witnesses: family,
        product,
    })
}
