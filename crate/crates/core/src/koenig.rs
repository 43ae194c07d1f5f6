//! Finite-depth branch search over coherent equivalence relations.
//!
//! A level chain fixes nested substructures B_0 ⊆ ... ⊆ B_d inside a top
//! structure together with a pattern A and an ambient host C. The tree at
//! tolerance t has, at level m, the admissible relations with at most t
//! blocks on binom(B_m, A); edges connect relations whose restriction to the
//! level below agrees. The tree is finitely branching by construction, and a
//! branch is a coherent choice of one relation per level.

use std::collections::BTreeSet;

use crate::copies::enumerate_copies;
use crate::error::{Error, Result};
use crate::exec::EngineConfig;
use crate::kriz::{check_e_ramsey, EquivRelation};
use crate::partition::{count_rgs, first_rgs, next_rgs, normalize_rgs};
use crate::structure::FiniteStructure;

/// Nested substructures of a top structure, with the pattern and the ambient
/// host used for admissibility tests.
#[derive(Debug, Clone)]
pub struct LevelChain {
    top: FiniteStructure,
    /// Increasing subsets of the top universe; the last one is the full
    /// universe, so level d is the top structure itself.
    levels: Vec<BTreeSet<usize>>,
    pattern: FiniteStructure,
    ambient: FiniteStructure,
}

impl LevelChain {
    pub fn new(
        top: FiniteStructure,
        levels: Vec<BTreeSet<usize>>,
        pattern: FiniteStructure,
        ambient: FiniteStructure,
    ) -> Result<Self> {
        if top.signature() != pattern.signature() || top.signature() != ambient.signature() {
            return Err(Error::input("level chain requires one shared signature"));
        }
        if levels.is_empty() {
            return Err(Error::input("level chain needs at least one level"));
        }
        for w in levels.windows(2) {
            if !w[0].is_subset(&w[1]) {
                return Err(Error::input("levels must be increasing subsets"));
            }
        }
        let full: BTreeSet<usize> = top.universe().collect();
        let last = levels.last().unwrap();
        if !last.is_subset(&full) {
            return Err(Error::input(
                "levels mention elements outside the top universe",
            ));
        }
        if *last != full {
            return Err(Error::input(
                "the last level must be the whole top structure",
            ));
        }
        Ok(LevelChain {
            top,
            levels,
            pattern,
            ambient,
        })
    }

    /// Depth d: levels are indexed 0..=d.
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn top(&self) -> &FiniteStructure {
        &self.top
    }

    pub fn pattern(&self) -> &FiniteStructure {
        &self.pattern
    }

    pub fn ambient(&self) -> &FiniteStructure {
        &self.ambient
    }

    pub fn level_subset(&self, m: usize) -> &BTreeSet<usize> {
        &self.levels[m]
    }

    /// The structure induced at level m (re-indexed ascending).
    pub fn level_structure(&self, m: usize) -> Result<FiniteStructure> {
        self.top.induced(&self.levels[m])
    }

    /// Positions of level-m elements inside the level-(m+1) universe after
    /// its re-indexing.
    fn subset_within_next(&self, m: usize) -> BTreeSet<usize> {
        let next: Vec<usize> = self.levels[m + 1].iter().copied().collect();
        self.levels[m]
            .iter()
            .map(|x| next.binary_search(x).expect("nested levels"))
            .collect()
    }
}

/// Restrict a relation on binom(B, A) to the copies lying inside a subset of
/// B's universe. Blocks are intersected with the surviving copies and empty
/// blocks are dropped.
pub fn restrict_relation(
    relation: &EquivRelation,
    subset: &BTreeSet<usize>,
) -> Result<EquivRelation> {
    let big = relation.base().ambient();
    if let Some(&bad) = subset.iter().find(|&&x| x >= big.size()) {
        return Err(Error::input(format!(
            "element {} outside the relation's base structure",
            bad
        )));
    }
    let sub_structure = big.induced(subset)?;
    let order: Vec<usize> = subset.iter().copied().collect();
    let base = enumerate_copies(relation.base().pattern(), &sub_structure)?;
    let labels: Vec<usize> = base
        .copies()
        .iter()
        .map(|c| {
            let original: Vec<usize> = c.subset().iter().map(|&x| order[x]).collect();
            let idx = relation
                .base()
                .index_of(&original)
                .expect("copies inside the subset are copies of the base");
            relation.rgs()[idx]
        })
        .collect();
    EquivRelation::from_rgs(base, normalize_rgs(&labels))
}

/// Chooses which relations count as nodes of the tree.
pub trait AdmissibilityOracle: Sync {
    fn admits(
        &self,
        chain: &LevelChain,
        level: usize,
        relation: &EquivRelation,
        t: usize,
        cfg: &EngineConfig,
    ) -> Result<bool>;

    fn describe(&self) -> String;
}

/// Default oracle: the relation must be E-A-Ramsey in the ambient host at
/// `k` colors (`k = t` unless overridden).
///
/// Full saturation would be vacuous here: on any fixed finite ambient the
/// injective coloring defeats every relation with a non-singleton block, so
/// the bounded budget is what keeps finite-depth trees informative.
#[derive(Debug, Clone, Default)]
pub struct DefaultOracle {
    pub k: Option<usize>,
}

impl AdmissibilityOracle for DefaultOracle {
    fn admits(
        &self,
        chain: &LevelChain,
        level: usize,
        relation: &EquivRelation,
        t: usize,
        cfg: &EngineConfig,
    ) -> Result<bool> {
        let k = self.k.unwrap_or(t).max(1);
        let level_structure = chain.level_structure(level)?;
        match check_e_ramsey(
            chain.ambient(),
            &level_structure,
            chain.pattern(),
            relation,
            k,
            cfg,
        ) {
            Ok(verdict) => Ok(verdict.holds),
            // A level structure that does not embed into the ambient has no
            // admissible relations.
            Err(Error::NoHost(_)) => Ok(false),
            Err(e) => Err(e),
        }
    }

    fn describe(&self) -> String {
        match self.k {
            Some(k) => format!("e-ramsey in ambient at k={}", k),
            None => "e-ramsey in ambient at k=t".to_string(),
        }
    }
}

/// Test oracle admitting exactly the relations a closure returns true for.
pub struct FnOracle<F>(pub F, pub String);

impl<F> AdmissibilityOracle for FnOracle<F>
where
    F: Fn(&LevelChain, usize, &EquivRelation) -> bool + Sync,
{
    fn admits(
        &self,
        chain: &LevelChain,
        level: usize,
        relation: &EquivRelation,
        _t: usize,
        _cfg: &EngineConfig,
    ) -> Result<bool> {
        Ok(self.0(chain, level, relation))
    }

    fn describe(&self) -> String {
        self.1.clone()
    }
}

#[derive(Debug, Clone)]
pub struct TreeNode {
    pub level: usize,
    pub relation: EquivRelation,
}

/// The finitely branching tree of admissible relations per level, with edges
/// given by restriction equality.
#[derive(Debug)]
pub struct KoenigTree {
    chain: LevelChain,
    t: usize,
    oracle_description: String,
    /// Nodes per level, in canonical (lex RGS) order.
    levels: Vec<Vec<TreeNode>>,
    /// children[m][i]: indices of level-(m+1) nodes restricting to node i.
    children: Vec<Vec<Vec<usize>>>,
}

impl KoenigTree {
    pub fn chain(&self) -> &LevelChain {
        &self.chain
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn oracle_description(&self) -> &str {
        &self.oracle_description
    }

    pub fn levels(&self) -> &[Vec<TreeNode>] {
        &self.levels
    }

    pub fn children(&self) -> &[Vec<Vec<usize>>] {
        &self.children
    }

    pub fn node_count(&self) -> usize {
        self.levels.iter().map(|l| l.len()).sum()
    }
}

/// Build the tree: level-m nodes are the admissible relations with at most t
/// blocks on binom(B_m, A); an edge joins (m, E) to (m+1, F) when F
/// restricted to B_m equals E.
pub fn build_tree(
    chain: &LevelChain,
    t: usize,
    oracle: &dyn AdmissibilityOracle,
    cfg: &EngineConfig,
) -> Result<KoenigTree> {
    if t == 0 {
        return Err(Error::input("tree tolerance must be >= 1"));
    }
    let mut levels: Vec<Vec<TreeNode>> = Vec::new();
    for m in 0..=chain.depth() {
        let level_structure = chain.level_structure(m)?;
        let base = enumerate_copies(chain.pattern(), &level_structure)?;
        let size = base.len();
        if size > cfg.max_relation_base {
            return Err(Error::guard(format!(
                "level {} has {} copies; relations are capped at base size {}",
                m, size, cfg.max_relation_base
            )));
        }
        if count_rgs(size, t.min(size.max(1))) > cfg.max_relations {
            return Err(Error::guard(format!(
                "too many candidate relations at level {}",
                m
            )));
        }
        let mut nodes = Vec::new();
        let mut rgs = first_rgs(size);
        loop {
            let relation = EquivRelation::from_rgs(base.clone(), rgs.clone())?;
            if oracle.admits(chain, m, &relation, t, cfg)? {
                nodes.push(TreeNode { level: m, relation });
            }
            if size == 0 || !next_rgs(&mut rgs, t.min(size)) {
                break;
            }
        }
        levels.push(nodes);
    }
    let mut children: Vec<Vec<Vec<usize>>> = Vec::new();
    for m in 0..chain.depth() {
        let sub = chain.subset_within_next(m);
        let mut per_node: Vec<Vec<usize>> = vec![Vec::new(); levels[m].len()];
        for (j, upper) in levels[m + 1].iter().enumerate() {
            let restricted = restrict_relation(&upper.relation, &sub)?;
            if let Some(i) = levels[m]
                .iter()
                .position(|n| n.relation.rgs() == restricted.rgs())
            {
                per_node[i].push(j);
            }
        }
        children.push(per_node);
    }
    children.push(vec![Vec::new(); levels.last().map_or(0, |l| l.len())]);
    Ok(KoenigTree {
        chain: chain.clone(),
        t,
        oracle_description: oracle.describe(),
        levels,
        children,
    })
}

/// Depth-first search for a root-to-deepest-level path in canonical child
/// order; the result restricts coherently level by level.
pub fn find_branch(tree: &KoenigTree) -> Option<Vec<EquivRelation>> {
    let depth = tree.chain.depth();
    fn dfs(tree: &KoenigTree, level: usize, node: usize, path: &mut Vec<EquivRelation>) -> bool {
        path.push(tree.levels[level][node].relation.clone());
        if level == tree.chain.depth() {
            return true;
        }
        for &child in &tree.children[level][node] {
            if dfs(tree, level + 1, child, path) {
                return true;
            }
        }
        path.pop();
        false
    }
    let mut path = Vec::new();
    for root in 0..tree.levels.first()?.len() {
        if dfs(tree, 0, root, &mut path) {
            debug_assert_eq!(path.len(), depth + 1);
            return Some(path);
        }
    }
    None
}
