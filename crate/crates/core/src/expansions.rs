//! Predicate-plus-order expansions of finite fragments, with precompactness,
//! lower-bound, expansion-property, reasonability, Ramsey, and rigidity
//! checks.
//!
//! A class predicate `P_{A,i}` marks copies of the pattern A: it holds on all
//! enumerations of a marked copy's subset or on none, which keeps expanded
//! structures ordinary relational structures and isomorphism testing
//! standard. All verdicts here are fragment-relative; a missing witness is
//! reported as such, never as a refutation.

use std::collections::{BTreeMap, BTreeSet};

use crate::arrows::{check_arrow, ArrowStatement};
use crate::canon::{automorphisms, canonical_form, canonicalize, CanonicalCode};
use crate::copies::{enumerate_copies, enumerate_embeddings};
use crate::error::{Error, Result};
use crate::exec::EngineConfig;
use crate::kriz::EquivRelation;
use crate::structure::{FiniteStructure, RelationSymbol, Signature};

/// Class predicates for one pattern: `predicates[i]` names the symbol of the
/// i-th class, each of arity |pattern|.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternClasses {
    pub pattern: FiniteStructure,
    pub predicates: Vec<String>,
}

/// A relational expansion of a base signature by class predicates and an
/// optional strict linear order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpansionSignature {
    base: Signature,
    patterns: Vec<PatternClasses>,
    order_symbol: Option<String>,
}

impl ExpansionSignature {
    pub fn new(
        base: Signature,
        patterns: Vec<PatternClasses>,
        order_symbol: Option<String>,
    ) -> Result<Self> {
        let mut names: BTreeSet<String> = base.relations().iter().map(|r| r.name.clone()).collect();
        for pc in &patterns {
            if pc.pattern.size() == 0 {
                return Err(Error::input(
                    "the empty pattern admits no class predicates (arity would be 0)",
                ));
            }
            if pc.predicates.is_empty() {
                return Err(Error::input(
                    "each declared pattern needs at least one class",
                ));
            }
            for p in &pc.predicates {
                if !names.insert(p.clone()) {
                    return Err(Error::input(format!(
                        "expansion symbol {:?} is not fresh",
                        p
                    )));
                }
            }
        }
        if let Some(sym) = &order_symbol {
            if !names.insert(sym.clone()) {
                return Err(Error::input(format!("order symbol {:?} is not fresh", sym)));
            }
        }
        Ok(ExpansionSignature {
            base,
            patterns,
            order_symbol,
        })
    }

    /// Default predicate names for pattern index `idx`: `P{idx}_0`, ...
    pub fn default_names(idx: usize, classes: usize) -> Vec<String> {
        (0..classes).map(|i| format!("P{}_{}", idx, i)).collect()
    }

    pub fn base(&self) -> &Signature {
        &self.base
    }

    pub fn patterns(&self) -> &[PatternClasses] {
        &self.patterns
    }

    pub fn order_symbol(&self) -> Option<&str> {
        self.order_symbol.as_deref()
    }

    /// Base symbols, then class predicates in declaration order, then the
    /// order symbol.
    pub fn full_signature(&self) -> Result<Signature> {
        let mut symbols: Vec<RelationSymbol> = self.base.relations().to_vec();
        for pc in &self.patterns {
            for p in &pc.predicates {
                symbols.push(RelationSymbol::new(p.clone(), pc.pattern.size()));
            }
        }
        if let Some(sym) = &self.order_symbol {
            symbols.push(RelationSymbol::new(sym.clone(), 2));
        }
        Signature::new(symbols)
    }
}

/// A structure over an expansion signature, validated against the predicate
/// conventions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpandedStructure {
    sig: ExpansionSignature,
    structure: FiniteStructure,
}

/// Drop every non-base relation.
pub fn reduct(structure: &FiniteStructure, base: &Signature) -> Result<FiniteStructure> {
    let mut tuples = BTreeMap::new();
    for (idx, sym) in base.relations().iter().enumerate() {
        let full_idx = structure
            .signature()
            .index_of(&sym.name)
            .ok_or_else(|| Error::input(format!("missing base relation {:?}", sym.name)))?;
        let _ = idx;
        tuples.insert(
            sym.name.clone(),
            structure
                .tuples(full_idx)
                .iter()
                .cloned()
                .collect::<Vec<_>>(),
        );
    }
    FiniteStructure::new(base.clone(), structure.size(), tuples)
}

fn permutations_of(elems: &[usize]) -> Vec<Vec<usize>> {
    if elems.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &e) in elems.iter().enumerate() {
        let mut rest: Vec<usize> = elems.to_vec();
        rest.remove(i);
        for mut tail in permutations_of(&rest) {
            let mut perm = vec![e];
            perm.append(&mut tail);
            out.push(perm);
        }
    }
    out
}

impl ExpandedStructure {
    pub fn new(sig: ExpansionSignature, structure: FiniteStructure) -> Result<Self> {
        let full = sig.full_signature()?;
        if structure.signature() != &full {
            return Err(Error::input(
                "structure signature does not match the expansion signature",
            ));
        }
        let base_reduct = reduct(&structure, sig.base())?;
        for pc in sig.patterns() {
            let copies = enumerate_copies(&pc.pattern, &base_reduct)?;
            let mut class_of: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
            for (i, pred) in pc.predicates.iter().enumerate() {
                let idx = full.index_of(pred).unwrap();
                let mut marked: BTreeSet<Vec<usize>> = BTreeSet::new();
                for t in structure.tuples(idx) {
                    let mut sorted = t.clone();
                    sorted.sort_unstable();
                    sorted.dedup();
                    if sorted.len() != t.len() {
                        return Err(Error::input(format!(
                            "class predicate {:?} holds on a tuple with repeated entries: {:?}",
                            pred, t
                        )));
                    }
                    marked.insert(sorted);
                }
                for subset in marked {
                    // Enumeration invariance: all |A|! orderings must hold.
                    for perm in permutations_of(&subset) {
                        if !structure.holds(idx, &perm) {
                            return Err(Error::input(format!(
                                "class predicate {:?} is not closed under tuple reorderings on {:?}",
                                pred, subset
                            )));
                        }
                    }
                    if copies.index_of(&subset).is_none() {
                        return Err(Error::input(format!(
                            "class predicate {:?} marks {:?}, which is not a copy of its pattern",
                            pred, subset
                        )));
                    }
                    if let Some(prev) = class_of.insert(subset.clone(), i) {
                        if prev != i {
                            return Err(Error::input(format!(
                                "copy {:?} carries two class predicates",
                                subset
                            )));
                        }
                    }
                }
            }
        }
        if let Some(sym) = sig.order_symbol() {
            let idx = full.index_of(sym).unwrap();
            let n = structure.size();
            for x in 0..n {
                for y in 0..n {
                    let xy = structure.holds(idx, &[x, y]);
                    let yx = structure.holds(idx, &[y, x]);
                    if x == y {
                        if xy {
                            return Err(Error::input("order symbol must be irreflexive"));
                        }
                    } else if xy == yx {
                        return Err(Error::input(format!(
                            "order symbol must linearly order the universe; {} vs {} undecided or doubled",
                            x, y
                        )));
                    }
                }
            }
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        if structure.holds(idx, &[x, y])
                            && structure.holds(idx, &[y, z])
                            && !structure.holds(idx, &[x, z])
                        {
                            return Err(Error::input("order symbol must be transitive"));
                        }
                    }
                }
            }
        }
        Ok(ExpandedStructure { sig, structure })
    }

    pub fn signature(&self) -> &ExpansionSignature {
        &self.sig
    }

    pub fn structure(&self) -> &FiniteStructure {
        &self.structure
    }

    pub fn reduct(&self) -> Result<FiniteStructure> {
        reduct(&self.structure, self.sig.base())
    }

    /// Class index carried by a copy (as a subset), per pattern index.
    pub fn class_of_copy(&self, pattern_idx: usize, subset: &[usize]) -> Result<Option<usize>> {
        let pc = &self.sig.patterns()[pattern_idx];
        let full = self.sig.full_signature()?;
        for (i, pred) in pc.predicates.iter().enumerate() {
            let idx = full.index_of(pred).unwrap();
            if self.structure.holds(idx, subset) {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// A full expansion marks every copy of every declared pattern with
    /// exactly one class and, when an order symbol is declared, carries a
    /// total order.
    pub fn is_full(&self) -> Result<bool> {
        let base_reduct = self.reduct()?;
        for (pi, pc) in self.sig.patterns().iter().enumerate() {
            let copies = enumerate_copies(&pc.pattern, &base_reduct)?;
            for c in copies.copies() {
                if self.class_of_copy(pi, c.subset())?.is_none() {
                    return Ok(false);
                }
            }
        }
        if let Some(sym) = self.sig.order_symbol() {
            let full = self.sig.full_signature()?;
            let idx = full.index_of(sym).unwrap();
            let n = self.structure.size();
            if self.structure.tuples(idx).len() != n * (n - 1) / 2 {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Expand a structure by one pattern's partition: predicate `P_{A,i}` holds
/// on all enumerations of the copies in block i. An order given as an
/// element sequence (least first) is copied verbatim.
pub fn expand_by_partition(
    base_structure: &FiniteStructure,
    pattern: &FiniteStructure,
    relation: &EquivRelation,
    order: Option<(&str, &[usize])>,
    declared_classes: Option<usize>,
) -> Result<ExpandedStructure> {
    if relation.base().ambient() != base_structure {
        return Err(Error::input(
            "relation must partition the copies of the pattern in the structure",
        ));
    }
    if canonical_form(relation.base().pattern()) != canonical_form(pattern) {
        return Err(Error::input(
            "relation base pattern does not match the given pattern",
        ));
    }
    let blocks = relation.blocks();
    let classes = declared_classes.unwrap_or_else(|| blocks.len().max(1));
    if blocks.len() > classes {
        return Err(Error::input(format!(
            "partition has {} blocks but only {} classes are declared",
            blocks.len(),
            classes
        )));
    }
    let sig = ExpansionSignature::new(
        base_structure.signature().clone(),
        vec![PatternClasses {
            pattern: canonicalize(pattern),
            predicates: ExpansionSignature::default_names(0, classes),
        }],
        order.map(|(sym, _)| sym.to_string()),
    )?;
    let full = sig.full_signature()?;
    let mut out = FiniteStructure::empty_relations(full.clone(), base_structure.size());
    for (idx, sym) in base_structure.signature().relations().iter().enumerate() {
        let _ = sym;
        for t in base_structure.tuples(idx) {
            out.insert_tuple(idx, t.clone())?;
        }
    }
    let base_len = base_structure.signature().len();
    for (i, block) in blocks.iter().enumerate() {
        for &copy_idx in block {
            let subset = relation.base().copy(copy_idx).subset().to_vec();
            for perm in permutations_of(&subset) {
                out.insert_tuple(base_len + i, perm)?;
            }
        }
    }
    if let Some((_, sequence)) = order {
        let mut seen = vec![false; base_structure.size()];
        if sequence.len() != base_structure.size() {
            return Err(Error::input(
                "order sequence must list every element exactly once",
            ));
        }
        for &x in sequence {
            if x >= base_structure.size() || seen[x] {
                return Err(Error::input(
                    "order sequence must list every element exactly once",
                ));
            }
            seen[x] = true;
        }
        let order_idx = full.len() - 1;
        for i in 0..sequence.len() {
            for j in (i + 1)..sequence.len() {
                out.insert_tuple(order_idx, vec![sequence[i], sequence[j]])?;
            }
        }
    }
    ExpandedStructure::new(sig, out)
}

/// Either a plain signature or an expansion signature; fragments carry one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FragmentSignature {
    Base(Signature),
    Expanded(ExpansionSignature),
}

impl FragmentSignature {
    pub fn full_signature(&self) -> Result<Signature> {
        match self {
            FragmentSignature::Base(s) => Ok(s.clone()),
            FragmentSignature::Expanded(e) => e.full_signature(),
        }
    }

    pub fn expansion(&self) -> Option<&ExpansionSignature> {
        match self {
            FragmentSignature::Base(_) => None,
            FragmentSignature::Expanded(e) => Some(e),
        }
    }
}

/// A finite set of canonical structures over one signature, sorted by
/// canonical code. Hereditary closure is a discipline checked by
/// `catalog::validate_fragment`, not enforced here, so that violations can be
/// loaded and reported.
#[derive(Debug, Clone)]
pub struct ClassFragment {
    sig: FragmentSignature,
    members: Vec<FiniteStructure>,
    codes: Vec<CanonicalCode>,
}

impl ClassFragment {
    pub fn new(sig: FragmentSignature, members: Vec<FiniteStructure>) -> Result<Self> {
        let full = sig.full_signature()?;
        let mut canonical: BTreeMap<CanonicalCode, FiniteStructure> = BTreeMap::new();
        for m in members {
            if m.signature() != &full {
                return Err(Error::input(format!(
                    "member {} does not match the fragment signature",
                    m
                )));
            }
            if let FragmentSignature::Expanded(exp) = &sig {
                // Validate the expansion conventions member by member.
                ExpandedStructure::new(exp.clone(), m.clone())?;
            }
            let c = canonicalize(&m);
            canonical.insert(canonical_form(&c), c);
        }
        let (codes, members): (Vec<_>, Vec<_>) = canonical.into_iter().unzip();
        Ok(ClassFragment {
            sig,
            members,
            codes,
        })
    }

    pub fn signature(&self) -> &FragmentSignature {
        &self.sig
    }

    pub fn full_signature(&self) -> Result<Signature> {
        self.sig.full_signature()
    }

    pub fn members(&self) -> &[FiniteStructure] {
        &self.members
    }

    pub fn codes(&self) -> &[CanonicalCode] {
        &self.codes
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains_code(&self, code: &CanonicalCode) -> bool {
        self.codes.binary_search(code).is_ok()
    }

    pub fn member_index(&self, code: &CanonicalCode) -> Option<usize> {
        self.codes.binary_search(code).ok()
    }
}

/// The substructure closure of one structure, as a fragment.
pub fn age_fragment(structure: &FiniteStructure, sig: FragmentSignature) -> Result<ClassFragment> {
    let n = structure.size();
    if n > 16 {
        return Err(Error::guard(format!(
            "age of a {}-element structure is too large",
            n
        )));
    }
    let mut members = Vec::new();
    for mask in 0u32..(1u32 << n) {
        let subset: BTreeSet<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        members.push(structure.induced(&subset)?);
    }
    ClassFragment::new(sig, members)
}

/// Members of the expanded fragment whose reduct is isomorphic to `base`.
pub fn enumerate_expansions(
    base: &FiniteStructure,
    k_star: &ClassFragment,
) -> Result<Vec<FiniteStructure>> {
    let exp = k_star
        .signature()
        .expansion()
        .ok_or_else(|| Error::input("expansion enumeration needs an expanded fragment"))?;
    if base.signature() != exp.base() {
        return Err(Error::input(
            "structure is not over the fragment's base signature",
        ));
    }
    let target = canonical_form(base);
    let mut out = Vec::new();
    for m in k_star.members() {
        let r = reduct(m, exp.base())?;
        if canonical_form(&r) == target {
            out.push(m.clone());
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct PrecompactnessRow {
    pub member: CanonicalCode,
    pub expansion_count: usize,
    pub violation: bool,
}

/// Count the expansions of every base member; a bound, when given, flags
/// members exceeding it.
pub fn check_precompactness(
    k: &ClassFragment,
    k_star: &ClassFragment,
    bound: Option<usize>,
) -> Result<Vec<PrecompactnessRow>> {
    let mut rows = Vec::new();
    for m in k.members() {
        let count = enumerate_expansions(m, k_star)?.len();
        rows.push(PrecompactnessRow {
            member: canonical_form(m),
            expansion_count: count,
            violation: bound.is_some_and(|b| count > b),
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone)]
pub struct LowerBoundRow {
    pub expansion: CanonicalCode,
    pub distinct_inner_expansions: usize,
}

#[derive(Debug, Clone)]
pub struct LowerBoundReport {
    pub holds: bool,
    pub required: usize,
    pub rows: Vec<LowerBoundRow>,
}

/// Check that every expansion of `big` in the fragment contains at least `t`
/// pairwise non-isomorphic expansions of `pattern` among its induced
/// substructures.
pub fn check_lower_bound(
    pattern: &FiniteStructure,
    big: &FiniteStructure,
    k_star: &ClassFragment,
    t: usize,
) -> Result<LowerBoundReport> {
    let expansions_b = enumerate_expansions(big, k_star)?;
    if expansions_b.is_empty() {
        return Err(Error::no_host(format!(
            "{} has no expansion in the fragment",
            big
        )));
    }
    let exp = k_star.signature().expansion().unwrap();
    let target = canonical_form(pattern);
    let mut rows = Vec::new();
    for b_star in &expansions_b {
        let mut distinct: BTreeSet<CanonicalCode> = BTreeSet::new();
        let n = b_star.size();
        for mask in 0u32..(1u32 << n) {
            if (mask.count_ones() as usize) != pattern.size() {
                continue;
            }
            let subset: BTreeSet<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let induced = b_star.induced(&subset)?;
            if canonical_form(&reduct(&induced, exp.base())?) == target {
                distinct.insert(canonical_form(&induced));
            }
        }
        rows.push(LowerBoundRow {
            expansion: canonical_form(b_star),
            distinct_inner_expansions: distinct.len(),
        });
    }
    Ok(LowerBoundReport {
        holds: rows.iter().all(|r| r.distinct_inner_expansions >= t),
        required: t,
        rows,
    })
}

/// Witness status for one base member in the expansion-property report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExpansionWitness {
    /// Canonically least B such that every expansion of A embeds into every
    /// expansion of B.
    Witness(CanonicalCode),
    /// A has no expansion in the fragment at all.
    NoExpansions,
    /// No member of the fragment works; fragment-relative, not a refutation.
    NoWitnessWithinFragment,
}

#[derive(Debug, Clone)]
pub struct ExpansionPropertyRow {
    pub member: CanonicalCode,
    pub witness: ExpansionWitness,
}

pub fn check_expansion_property(
    k: &ClassFragment,
    k_star: &ClassFragment,
) -> Result<Vec<ExpansionPropertyRow>> {
    let mut rows = Vec::new();
    for a in k.members() {
        let expansions_a = enumerate_expansions(a, k_star)?;
        if expansions_a.is_empty() {
            rows.push(ExpansionPropertyRow {
                member: canonical_form(a),
                witness: ExpansionWitness::NoExpansions,
            });
            continue;
        }
        let mut witness = ExpansionWitness::NoWitnessWithinFragment;
        'candidates: for b in k.members() {
            let expansions_b = enumerate_expansions(b, k_star)?;
            if expansions_b.is_empty() {
                continue;
            }
            for a_star in &expansions_a {
                for b_star in &expansions_b {
                    if enumerate_embeddings(a_star, b_star)?.is_empty() {
                        continue 'candidates;
                    }
                }
            }
            witness = ExpansionWitness::Witness(canonical_form(b));
            break;
        }
        rows.push(ExpansionPropertyRow {
            member: canonical_form(a),
            witness,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone)]
pub struct ReasonabilityReport {
    pub holds: bool,
    /// (A code, B code, embedding, expansion of A) with no matching
    /// expansion of B.
    pub counterexample: Option<(CanonicalCode, CanonicalCode, Vec<usize>, FiniteStructure)>,
}

/// Concrete expansions of `base` on its own universe: fragment members with
/// matching reduct, transported along every isomorphism.
fn concrete_expansions(
    base: &FiniteStructure,
    k_star: &ClassFragment,
) -> Result<Vec<FiniteStructure>> {
    let exp = k_star.signature().expansion().unwrap();
    let mut out: BTreeSet<FiniteStructure> = BTreeSet::new();
    for member in enumerate_expansions(base, k_star)? {
        let member_reduct = reduct(&member, exp.base())?;
        for iso in enumerate_embeddings(&member_reduct, base)? {
            out.insert(member.relabel(&iso));
        }
    }
    Ok(out.into_iter().collect())
}

/// For every embedding between base members (up to automorphism equivalence
/// of the pair) and every expansion of the domain, some expansion of the
/// codomain must make the same map an embedding of expanded structures.
pub fn check_reasonability(
    k: &ClassFragment,
    k_star: &ClassFragment,
) -> Result<ReasonabilityReport> {
    use crate::structure::is_embedding;
    for a in k.members() {
        let expansions_a = concrete_expansions(a, k_star)?;
        if expansions_a.is_empty() {
            continue;
        }
        let auts_a = automorphisms(a);
        for b in k.members() {
            let embeddings = enumerate_embeddings(a, b)?;
            if embeddings.is_empty() {
                continue;
            }
            let auts_b = automorphisms(b);
            // Double-coset representatives: keep maps that are minimal in
            // their Aut(A) x Aut(B) orbit.
            let mut reps: BTreeSet<Vec<usize>> = BTreeSet::new();
            for pi in &embeddings {
                let mut orbit_min = pi.clone();
                for sa in &auts_a {
                    for sb in &auts_b {
                        let composed: Vec<usize> = (0..a.size()).map(|x| sb[pi[sa[x]]]).collect();
                        if composed < orbit_min {
                            orbit_min = composed;
                        }
                    }
                }
                reps.insert(orbit_min);
            }
            let expansions_b = concrete_expansions(b, k_star)?;
            for pi in &reps {
                for a_star in &expansions_a {
                    let lifted = expansions_b
                        .iter()
                        .any(|b_star| is_embedding(pi, a_star, b_star).unwrap_or(false));
                    if !lifted {
                        return Ok(ReasonabilityReport {
                            holds: false,
                            counterexample: Some((
                                canonical_form(a),
                                canonical_form(b),
                                pi.clone(),
                                a_star.clone(),
                            )),
                        });
                    }
                }
            }
        }
    }
    Ok(ReasonabilityReport {
        holds: true,
        counterexample: None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RamseyPairVerdict {
    Holds { host: CanonicalCode },
    UndecidedWithinFragment,
}

#[derive(Debug, Clone)]
pub struct RamseyPairRow {
    pub pattern: CanonicalCode,
    pub big: CanonicalCode,
    pub verdict: RamseyPairVerdict,
}

/// Arrow verdicts at t = 1 (and the classical color budget k = 2) for every
/// embeddable pair of fragment members, using fragment members up to
/// `host_limit` elements as hosts.
pub fn check_ramsey_property(
    k_star: &ClassFragment,
    host_limit: usize,
    cfg: &EngineConfig,
) -> Result<Vec<RamseyPairRow>> {
    let mut rows = Vec::new();
    for a_star in k_star.members() {
        for b_star in k_star.members() {
            if a_star.size() > b_star.size() {
                continue;
            }
            if enumerate_embeddings(a_star, b_star)?.is_empty() {
                continue;
            }
            let mut verdict = RamseyPairVerdict::UndecidedWithinFragment;
            for host in k_star.members() {
                if host.size() > host_limit {
                    continue;
                }
                if enumerate_copies(b_star, host)?.is_empty() {
                    continue;
                }
                let stmt = ArrowStatement::new(host.clone(), b_star.clone(), a_star.clone(), 2, 1)?;
                if check_arrow(&stmt, cfg)?.holds {
                    verdict = RamseyPairVerdict::Holds {
                        host: canonical_form(host),
                    };
                    break;
                }
            }
            rows.push(RamseyPairRow {
                pattern: canonical_form(a_star),
                big: canonical_form(b_star),
                verdict,
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone)]
pub struct RigidityReport {
    pub rigid: bool,
    pub non_rigid_member: Option<CanonicalCode>,
}

/// True when every member has a trivial automorphism group; otherwise the
/// canonically first non-rigid member is reported.
pub fn check_rigidity(k_star: &ClassFragment) -> Result<RigidityReport> {
    for m in k_star.members() {
        if automorphisms(m).len() > 1 {
            return Ok(RigidityReport {
                rigid: false,
                non_rigid_member: Some(canonical_form(m)),
            });
        }
    }
    Ok(RigidityReport {
        rigid: true,
        non_rigid_member: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::builders::{pure_set, two_class};
    use crate::kriz::EquivRelation;

    fn point() -> FiniteStructure {
        two_class(1, 0)
    }

    /// The two-class fragment expanded by side predicates: expand 3+3 along
    /// the same-side partition of its points and take the substructure
    /// closure.
    fn side_fragment(order: bool) -> (ClassFragment, ClassFragment) {
        let top = two_class(3, 3);
        let base = enumerate_copies(&point(), &top).unwrap();
        let same_side = EquivRelation::from_rgs(base, vec![0, 0, 0, 1, 1, 1]).unwrap();
        let order_seq: Vec<usize> = (0..6).collect();
        let expanded = expand_by_partition(
            &top,
            &point(),
            &same_side,
            order.then_some(("lt", order_seq.as_slice())),
            Some(2),
        )
        .unwrap();
        let k_star = age_fragment(
            expanded.structure(),
            FragmentSignature::Expanded(expanded.signature().clone()),
        )
        .unwrap();
        let k = age_fragment(&top, FragmentSignature::Base(top.signature().clone())).unwrap();
        (k, k_star)
    }

    #[test]
    fn expand_full_relation_marks_everything() {
        let s = pure_set(3);
        let base = enumerate_copies(&pure_set(1), &s).unwrap();
        let full = EquivRelation::full(base);
        let expanded = expand_by_partition(&s, &pure_set(1), &full, None, None).unwrap();
        let st = expanded.structure();
        assert_eq!(st.signature().len(), 1);
        assert_eq!(st.tuples(0).len(), 3);
        assert!(expanded.is_full().unwrap());
    }

    #[test]
    fn expand_two_sides_marks_each_side() {
        let s = two_class(2, 2);
        let base = enumerate_copies(&point(), &s).unwrap();
        let same_side = EquivRelation::from_rgs(base, vec![0, 0, 1, 1]).unwrap();
        let expanded = expand_by_partition(&s, &point(), &same_side, None, None).unwrap();
        let st = expanded.structure();
        let p0 = st.tuples_by_name("P0_0").unwrap();
        let p1 = st.tuples_by_name("P0_1").unwrap();
        assert_eq!(
            p0.iter().cloned().collect::<Vec<_>>(),
            vec![vec![0], vec![1]]
        );
        assert_eq!(
            p1.iter().cloned().collect::<Vec<_>>(),
            vec![vec![2], vec![3]]
        );
    }

    #[test]
    fn expand_discrete_marks_one_copy_each() {
        let s = pure_set(3);
        let base = enumerate_copies(&pure_set(1), &s).unwrap();
        let discrete = EquivRelation::discrete(base);
        let expanded = expand_by_partition(&s, &pure_set(1), &discrete, None, None).unwrap();
        for i in 0..3 {
            let p = expanded
                .structure()
                .tuples_by_name(&format!("P0_{}", i))
                .unwrap();
            assert_eq!(p.len(), 1);
        }
    }

    #[test]
    fn declared_class_bound_is_checked() {
        let s = pure_set(3);
        let base = enumerate_copies(&pure_set(1), &s).unwrap();
        let discrete = EquivRelation::discrete(base);
        assert!(expand_by_partition(&s, &pure_set(1), &discrete, None, Some(2)).is_err());
    }

    #[test]
    fn reduct_round_trip() {
        let s = two_class(2, 2);
        let base = enumerate_copies(&point(), &s).unwrap();
        let same_side = EquivRelation::from_rgs(base, vec![0, 0, 1, 1]).unwrap();
        let order: Vec<usize> = vec![2, 0, 3, 1];
        let expanded = expand_by_partition(
            &s,
            &point(),
            &same_side,
            Some(("lt", order.as_slice())),
            None,
        )
        .unwrap();
        assert_eq!(expanded.reduct().unwrap(), s);
    }

    #[test]
    fn expansions_of_point_in_side_fragment() {
        let (_, k_star) = side_fragment(false);
        let exps = enumerate_expansions(&point(), &k_star).unwrap();
        assert_eq!(exps.len(), 2);
        // A structure with no expansion in the fragment: a 4+0 class is too
        // big for the age of 3+3.
        let missing = enumerate_expansions(&two_class(4, 0), &k_star).unwrap();
        assert!(missing.is_empty());
    }

    #[test]
    fn precompactness_counts() {
        let (k, k_star) = side_fragment(false);
        let rows = check_precompactness(&k, &k_star, Some(2)).unwrap();
        assert!(rows.iter().all(|r| !r.violation));
        // The empty structure has exactly one expansion.
        let empty_row = rows
            .iter()
            .find(|r| r.member == canonical_form(&two_class(0, 0)))
            .unwrap();
        assert_eq!(empty_row.expansion_count, 1);
        let point_row = rows
            .iter()
            .find(|r| r.member == canonical_form(&point()))
            .unwrap();
        assert_eq!(point_row.expansion_count, 2);
    }

    #[test]
    fn lower_bound_on_side_fragment() {
        let (_, k_star) = side_fragment(false);
        let report = check_lower_bound(&point(), &two_class(1, 1), &k_star, 2).unwrap();
        assert!(report.holds);
        // A single point carries one predicate, so t = 2 fails.
        let report = check_lower_bound(&point(), &point(), &k_star, 2).unwrap();
        assert!(!report.holds);
        // t = 1 is trivial whenever the expansion contains a copy.
        let report = check_lower_bound(&point(), &two_class(2, 1), &k_star, 1).unwrap();
        assert!(report.holds);
        // No-host error when B has no expansion at all.
        assert!(matches!(
            check_lower_bound(&point(), &two_class(4, 4), &k_star, 1),
            Err(Error::NoHost(_))
        ));
    }

    #[test]
    fn expansion_property_on_side_fragment() {
        let (k, k_star) = side_fragment(false);
        let rows = check_expansion_property(&k, &k_star).unwrap();
        let point_row = rows
            .iter()
            .find(|r| r.member == canonical_form(&point()))
            .unwrap();
        assert_eq!(
            point_row.witness,
            ExpansionWitness::Witness(canonical_form(&two_class(1, 1)))
        );
    }

    #[test]
    fn ordered_pure_sets_have_unique_expansions() {
        // All linear orders of a pure set are isomorphic, so every member of
        // the base fragment has exactly one expansion.
        use crate::catalog::{generate_fragment, FamilySpec};
        let k = generate_fragment(&FamilySpec::parse("pure_sets:3").unwrap()).unwrap();
        let k_star = generate_fragment(&FamilySpec::parse("ordered:pure_sets:3").unwrap()).unwrap();
        let exps = enumerate_expansions(&pure_set(2), &k_star).unwrap();
        assert_eq!(exps.len(), 1);
        for row in check_precompactness(&k, &k_star, Some(1)).unwrap() {
            assert_eq!(row.expansion_count, 1);
            assert!(!row.violation);
        }
    }

    #[test]
    fn expansion_property_ordered_pure_sets() {
        // Base pure sets, expanded to chains: expansions are unique up to
        // isomorphism, so each member witnesses itself.
        use crate::catalog::{generate_fragment, FamilySpec};
        let k = generate_fragment(&FamilySpec::parse("pure_sets:3").unwrap()).unwrap();
        let k_star = generate_fragment(&FamilySpec::parse("ordered:pure_sets:3").unwrap()).unwrap();
        let rows = check_expansion_property(&k, &k_star).unwrap();
        for row in &rows {
            assert_eq!(row.witness, ExpansionWitness::Witness(row.member.clone()));
        }
    }

    #[test]
    fn reasonability_on_side_fragment() {
        let (k, k_star) = side_fragment(false);
        let report = check_reasonability(&k, &k_star).unwrap();
        assert!(report.holds);
    }

    #[test]
    fn reasonability_of_order_expansions() {
        // Any order on the domain extends along any embedding of pure sets.
        use crate::catalog::{generate_fragment, FamilySpec};
        let k = generate_fragment(&FamilySpec::parse("pure_sets:3").unwrap()).unwrap();
        let k_star = generate_fragment(&FamilySpec::parse("ordered:pure_sets:3").unwrap()).unwrap();
        let report = check_reasonability(&k, &k_star).unwrap();
        assert!(report.holds);
    }

    #[test]
    fn truncation_below_every_witness_is_reported() {
        // Keep only the empty structure and the single points: no member can
        // host both point expansions, so the point has no witness.
        let (k, k_star) = side_fragment(false);
        let k_small = ClassFragment::new(
            k.signature().clone(),
            k.members()
                .iter()
                .filter(|m| m.size() <= 1)
                .cloned()
                .collect(),
        )
        .unwrap();
        let k_star_small = ClassFragment::new(
            k_star.signature().clone(),
            k_star
                .members()
                .iter()
                .filter(|m| m.size() <= 1)
                .cloned()
                .collect(),
        )
        .unwrap();
        let rows = check_expansion_property(&k_small, &k_star_small).unwrap();
        let point_row = rows
            .iter()
            .find(|r| r.member == canonical_form(&point()))
            .unwrap();
        assert_eq!(point_row.witness, ExpansionWitness::NoWitnessWithinFragment);
    }

    #[test]
    fn reasonability_fails_on_truncated_fragment() {
        // Drop one required expansion of the cross pair: keep only members
        // whose P0_1 side is empty. The point expansion P0_1 then cannot be
        // lifted along point -> 1+1.
        let (k, k_star) = side_fragment(false);
        let keep: Vec<FiniteStructure> = k_star
            .members()
            .iter()
            .filter(|m| {
                let p1 = m.tuples_by_name("P0_1").unwrap();
                p1.is_empty() || m.size() == 1
            })
            .cloned()
            .collect();
        let truncated = ClassFragment::new(k_star.signature().clone(), keep).unwrap();
        let report = check_reasonability(&k, &truncated).unwrap();
        assert!(!report.holds);
        let (_, b_code, _, _) = report.counterexample.unwrap();
        // The offending codomain is one whose expansions were dropped.
        assert_eq!(b_code, canonical_form(&two_class(1, 1)));
    }

    #[test]
    fn rigidity_needs_the_order() {
        let (_, k_star_plain) = side_fragment(false);
        let report = check_rigidity(&k_star_plain).unwrap();
        assert!(!report.rigid);
        let (_, k_star_ordered) = side_fragment(true);
        let report = check_rigidity(&k_star_ordered).unwrap();
        assert!(report.rigid);
    }

    #[test]
    fn first_non_rigid_member_is_reported() {
        use crate::catalog::{generate_fragment, FamilySpec};
        let frag = generate_fragment(&FamilySpec::parse("pure_sets:3").unwrap()).unwrap();
        let report = check_rigidity(&frag).unwrap();
        assert!(!report.rigid);
        assert_eq!(report.non_rigid_member, Some(canonical_form(&pure_set(2))));
        // The empty fragment is vacuously rigid.
        let empty = ClassFragment::new(frag.signature().clone(), Vec::new()).unwrap();
        assert!(check_rigidity(&empty).unwrap().rigid);
    }

    #[test]
    fn ramsey_property_of_chains() {
        use crate::catalog::{generate_fragment, FamilySpec};
        let k_star = generate_fragment(&FamilySpec::parse("ordered:pure_sets:3").unwrap()).unwrap();
        let rows = check_ramsey_property(&k_star, 3, &EngineConfig::default()).unwrap();
        use crate::catalog::builders::chain;
        let point_pair = rows
            .iter()
            .find(|r| r.pattern == canonical_form(&chain(1)) && r.big == canonical_form(&chain(2)))
            .unwrap();
        assert_eq!(
            point_pair.verdict,
            RamseyPairVerdict::Holds {
                host: canonical_form(&chain(3))
            }
        );
        // Host limit below any working host: (2-chain, 3-chain) needs a
        // 6-chain.
        let pair23 = rows
            .iter()
            .find(|r| r.pattern == canonical_form(&chain(2)) && r.big == canonical_form(&chain(3)))
            .unwrap();
        assert_eq!(pair23.verdict, RamseyPairVerdict::UndecidedWithinFragment);
    }

    #[test]
    fn age_inclusion_after_reduct() {
        // Every member of the expanded fragment reduces to a member of the
        // base fragment.
        let (k, k_star) = side_fragment(false);
        let exp = k_star.signature().expansion().unwrap().clone();
        for m in k_star.members() {
            let r = reduct(m, exp.base()).unwrap();
            assert!(k.contains_code(&canonical_form(&r)));
        }
    }
}
