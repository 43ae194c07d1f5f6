//! Finite relational structures: signatures, structures, embeddings.
//!
//! Universes are always the initial segment `{0, ..., n-1}`; restricting to a
//! subset re-indexes its elements in ascending order. Signatures are purely
//! relational, so every subset of a universe carries an induced substructure.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

/// A named relation symbol with its arity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RelationSymbol {
    pub name: String,
    pub arity: usize,
}

impl RelationSymbol {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        RelationSymbol {
            name: name.into(),
            arity,
        }
    }
}

/// An ordered sequence of relation symbols with pairwise distinct names.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Signature {
    relations: Vec<RelationSymbol>,
}

impl Signature {
    /// The empty signature (pure sets).
    pub fn empty() -> Self {
        Signature {
            relations: Vec::new(),
        }
    }

    pub fn new(relations: Vec<RelationSymbol>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for sym in &relations {
            if sym.arity == 0 {
                return Err(Error::input(format!(
                    "relation {:?} has arity 0; arities must be >= 1",
                    sym.name
                )));
            }
            if !seen.insert(sym.name.clone()) {
                return Err(Error::input(format!(
                    "duplicate relation name {:?}",
                    sym.name
                )));
            }
        }
        Ok(Signature { relations })
    }

    /// Convenience constructor from `(name, arity)` pairs.
    pub fn from_pairs(pairs: &[(&str, usize)]) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .map(|(n, a)| RelationSymbol::new(*n, *a))
                .collect(),
        )
    }

    pub fn relations(&self) -> &[RelationSymbol] {
        &self.relations
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.relations.iter().position(|r| r.name == name)
    }
}

/// A finite relational structure over an explicit signature.
///
/// The universe is `{0, ..., size-1}`; relation extents are stored per symbol
/// in signature order as sorted sets of tuples, so two structures are equal
/// exactly when they agree as labeled objects.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FiniteStructure {
    signature: Signature,
    size: usize,
    /// Index-aligned with `signature.relations()`.
    relations: Vec<BTreeSet<Vec<usize>>>,
}

impl FiniteStructure {
    pub fn new(
        signature: Signature,
        size: usize,
        tuples: BTreeMap<String, Vec<Vec<usize>>>,
    ) -> Result<Self> {
        let mut relations = vec![BTreeSet::new(); signature.len()];
        for (name, tups) in tuples {
            let idx = signature
                .index_of(&name)
                .ok_or_else(|| Error::input(format!("relation {:?} not in signature", name)))?;
            let arity = signature.relations()[idx].arity;
            for t in tups {
                if t.len() != arity {
                    return Err(Error::input(format!(
                        "tuple {:?} has wrong arity for relation {:?} (expected {})",
                        t, name, arity
                    )));
                }
                if let Some(&bad) = t.iter().find(|&&x| x >= size) {
                    return Err(Error::input(format!(
                        "tuple {:?} of relation {:?} mentions element {} outside universe of size {}",
                        t, name, bad, size
                    )));
                }
                relations[idx].insert(t);
            }
        }
        Ok(FiniteStructure {
            signature,
            size,
            relations,
        })
    }

    /// A structure with no tuples at all.
    pub fn empty_relations(signature: Signature, size: usize) -> Self {
        let relations = vec![BTreeSet::new(); signature.len()];
        FiniteStructure {
            signature,
            size,
            relations,
        }
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn universe(&self) -> impl Iterator<Item = usize> {
        0..self.size
    }

    /// Tuple set of the relation at `rel_idx` (signature order).
    pub fn tuples(&self, rel_idx: usize) -> &BTreeSet<Vec<usize>> {
        &self.relations[rel_idx]
    }

    pub fn tuples_by_name(&self, name: &str) -> Option<&BTreeSet<Vec<usize>>> {
        self.signature.index_of(name).map(|i| &self.relations[i])
    }

    pub fn holds(&self, rel_idx: usize, tuple: &[usize]) -> bool {
        self.relations[rel_idx].contains(tuple)
    }

    pub fn insert_tuple(&mut self, rel_idx: usize, tuple: Vec<usize>) -> Result<()> {
        let arity = self.signature.relations()[rel_idx].arity;
        if tuple.len() != arity {
            return Err(Error::input(format!(
                "tuple {:?} has wrong arity {}",
                tuple, arity
            )));
        }
        if let Some(&bad) = tuple.iter().find(|&&x| x >= self.size) {
            return Err(Error::input(format!("element {} outside universe", bad)));
        }
        self.relations[rel_idx].insert(tuple);
        Ok(())
    }

    /// Total number of tuples across all relations.
    pub fn tuple_count(&self) -> usize {
        self.relations.iter().map(|s| s.len()).sum()
    }

    /// The substructure induced on `subset`, re-indexed in ascending element
    /// order. Tuples survive exactly when all their entries lie in `subset`.
    pub fn induced(&self, subset: &BTreeSet<usize>) -> Result<FiniteStructure> {
        if let Some(&bad) = subset.iter().find(|&&x| x >= self.size) {
            return Err(Error::input(format!(
                "element {} outside universe of size {}",
                bad, self.size
            )));
        }
        let order: Vec<usize> = subset.iter().copied().collect();
        let mut reindex = BTreeMap::new();
        for (new, &old) in order.iter().enumerate() {
            reindex.insert(old, new);
        }
        let relations = self
            .relations
            .iter()
            .map(|tups| {
                tups.iter()
                    .filter(|t| t.iter().all(|x| reindex.contains_key(x)))
                    .map(|t| t.iter().map(|x| reindex[x]).collect::<Vec<usize>>())
                    .collect::<BTreeSet<_>>()
            })
            .collect();
        Ok(FiniteStructure {
            signature: self.signature.clone(),
            size: order.len(),
            relations,
        })
    }

    /// Relabel along a permutation: element `x` becomes `perm[x]`.
    pub fn relabel(&self, perm: &[usize]) -> FiniteStructure {
        debug_assert_eq!(perm.len(), self.size);
        let relations = self
            .relations
            .iter()
            .map(|tups| {
                tups.iter()
                    .map(|t| t.iter().map(|&x| perm[x]).collect::<Vec<usize>>())
                    .collect::<BTreeSet<_>>()
            })
            .collect();
        FiniteStructure {
            signature: self.signature.clone(),
            size: self.size,
            relations,
        }
    }
}

impl fmt::Display for FiniteStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "structure(n={}", self.size)?;
        for (sym, tups) in self.signature.relations().iter().zip(&self.relations) {
            write!(f, ", {}:{}", sym.name, tups.len())?;
        }
        write!(f, ")")
    }
}

/// Checks that `map` (total on `domain`'s universe) is injective and both
/// preserves and reflects every relation.
pub fn is_embedding(
    map: &[usize],
    domain: &FiniteStructure,
    codomain: &FiniteStructure,
) -> Result<bool> {
    if domain.signature() != codomain.signature() {
        return Err(Error::input(
            "signature mismatch between domain and codomain",
        ));
    }
    if map.len() != domain.size() {
        return Err(Error::input(format!(
            "map has {} entries but domain has {} elements",
            map.len(),
            domain.size()
        )));
    }
    if let Some(&bad) = map.iter().find(|&&x| x >= codomain.size()) {
        return Err(Error::input(format!(
            "map value {} outside codomain universe",
            bad
        )));
    }
    let mut seen = vec![false; codomain.size()];
    for &v in map {
        if seen[v] {
            return Ok(false);
        }
        seen[v] = true;
    }
    // Preserve: every domain tuple maps into the codomain relation.
    for (idx, sym) in domain.signature().relations().iter().enumerate() {
        let _ = sym;
        for t in domain.tuples(idx) {
            let image: Vec<usize> = t.iter().map(|&x| map[x]).collect();
            if !codomain.holds(idx, &image) {
                return Ok(false);
            }
        }
        // Reflect: every codomain tuple inside the image pulls back.
        for t in codomain.tuples(idx) {
            if t.iter().all(|&y| seen[y]) {
                let pre: Vec<usize> = t
                    .iter()
                    .map(|&y| map.iter().position(|&m| m == y).unwrap())
                    .collect();
                if !domain.holds(idx, &pre) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// An embedding between two concrete structures, validated on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    domain: FiniteStructure,
    codomain: FiniteStructure,
    map: Vec<usize>,
}

impl Embedding {
    pub fn new(
        domain: FiniteStructure,
        codomain: FiniteStructure,
        map: Vec<usize>,
    ) -> Result<Self> {
        if !is_embedding(&map, &domain, &codomain)? {
            return Err(Error::input(format!("{:?} is not an embedding", map)));
        }
        Ok(Embedding {
            domain,
            codomain,
            map,
        })
    }

    pub fn domain(&self) -> &FiniteStructure {
        &self.domain
    }

    pub fn codomain(&self) -> &FiniteStructure {
        &self.codomain
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// Image of a subset of the domain universe.
    pub fn image(&self, subset: &BTreeSet<usize>) -> BTreeSet<usize> {
        subset.iter().map(|&x| self.map[x]).collect()
    }
}
