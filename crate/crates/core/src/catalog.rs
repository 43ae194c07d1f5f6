//! Built-in structure families: deterministic generators and fragment
//! validity checks.

use std::collections::BTreeSet;

use crate::canon::{canonical_form, CanonicalCode};
use crate::copies::enumerate_embeddings;
use crate::error::{Error, Result};
use crate::expansions::{ClassFragment, ExpansionSignature, FragmentSignature};
use crate::structure::FiniteStructure;

/// Direct constructors for the concrete structures used throughout the crate.
pub mod builders {
    use std::collections::BTreeMap;

    use crate::structure::{FiniteStructure, Signature};

    /// Strict linear order on `n` elements over the signature `{lt/2}`.
    pub fn chain(n: usize) -> FiniteStructure {
        let sig = Signature::from_pairs(&[("lt", 2)]).unwrap();
        let mut tuples = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                tuples.push(vec![i, j]);
            }
        }
        let mut map = BTreeMap::new();
        map.insert("lt".to_string(), tuples);
        FiniteStructure::new(sig, n, map).unwrap()
    }

    /// `n` elements over the empty signature.
    pub fn pure_set(n: usize) -> FiniteStructure {
        FiniteStructure::empty_relations(Signature::empty(), n)
    }

    /// Simple graph over `{edge/2}`; edges are stored in both directions.
    pub fn graph(n: usize, edges: &[(usize, usize)]) -> FiniteStructure {
        let sig = Signature::from_pairs(&[("edge", 2)]).unwrap();
        let mut tuples = Vec::new();
        for &(u, v) in edges {
            tuples.push(vec![u, v]);
            tuples.push(vec![v, u]);
        }
        let mut map = BTreeMap::new();
        map.insert("edge".to_string(), tuples);
        FiniteStructure::new(sig, n, map).unwrap()
    }

    pub fn triangle() -> FiniteStructure {
        graph(3, &[(0, 1), (0, 2), (1, 2)])
    }

    /// Betweenness of an n-point path over the ternary `{btw/3}`: tuples
    /// (x, y, z) and (z, y, x) whenever y lies strictly between x and z.
    pub fn betweenness(n: usize) -> FiniteStructure {
        let sig = Signature::from_pairs(&[("btw", 3)]).unwrap();
        let mut tuples = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    tuples.push(vec![i, j, k]);
                    tuples.push(vec![k, j, i]);
                }
            }
        }
        let mut map = BTreeMap::new();
        map.insert("btw".to_string(), tuples);
        FiniteStructure::new(sig, n, map).unwrap()
    }

    /// Two equivalence classes of sizes `a` and `b` over `{eq/2}`. Class
    /// membership is the symmetric irreflexive same-class relation: elements
    /// `0..a` form the first class, `a..a+b` the second.
    pub fn two_class(a: usize, b: usize) -> FiniteStructure {
        let sig = Signature::from_pairs(&[("eq", 2)]).unwrap();
        let mut tuples = Vec::new();
        let mut add_clique = |lo: usize, hi: usize| {
            for i in lo..hi {
                for j in lo..hi {
                    if i != j {
                        tuples.push(vec![i, j]);
                    }
                }
            }
        };
        add_clique(0, a);
        add_clique(a, a + b);
        let mut map = BTreeMap::new();
        map.insert("eq".to_string(), tuples);
        FiniteStructure::new(sig, a + b, map).unwrap()
    }
}

/// One of the built-in generator families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    Chains {
        max: usize,
    },
    PureSets {
        max: usize,
    },
    Graphs {
        max: usize,
    },
    TwoClassEquivalence {
        max0: usize,
        max1: usize,
    },
    /// The order expansion of a base family: every member of the base family
    /// with every linear order, up to isomorphism.
    Ordered(Box<Family>),
}

/// A parsed family spec, e.g. `chains:6`, `two_class:3,3`,
/// `ordered:pure_sets:3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySpec {
    pub family: Family,
}

const GRAPH_CAP: usize = 7;
const SIZE_CAP: usize = 12;

impl FamilySpec {
    pub fn parse(text: &str) -> Result<Self> {
        let family = Self::parse_family(text)?;
        Self::check_caps(&family)?;
        Ok(FamilySpec { family })
    }

    fn parse_family(text: &str) -> Result<Family> {
        if let Some(rest) = text.strip_prefix("ordered:") {
            return Ok(Family::Ordered(Box::new(Self::parse_family(rest)?)));
        }
        let (name, args) = text
            .split_once(':')
            .ok_or_else(|| Error::input(format!("family spec {:?} missing parameters", text)))?;
        let nums: Vec<usize> = args
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::input(format!("bad size {:?}", s)))
            })
            .collect::<Result<_>>()?;
        match (name, nums.as_slice()) {
            ("chains", [n]) => Ok(Family::Chains { max: *n }),
            ("pure_sets", [n]) => Ok(Family::PureSets { max: *n }),
            ("graphs", [n]) => Ok(Family::Graphs { max: *n }),
            ("two_class", [a, b]) => Ok(Family::TwoClassEquivalence { max0: *a, max1: *b }),
            _ => Err(Error::input(format!("unknown family spec {:?}", text))),
        }
    }

    fn check_caps(family: &Family) -> Result<()> {
        match family {
            Family::Chains { max } | Family::PureSets { max } => {
                if *max > SIZE_CAP {
                    return Err(Error::input(format!(
                        "size {} exceeds cap {}",
                        max, SIZE_CAP
                    )));
                }
            }
            Family::Graphs { max } => {
                if *max > GRAPH_CAP {
                    return Err(Error::input(format!(
                        "graphs are capped at {} elements, got {}",
                        GRAPH_CAP, max
                    )));
                }
            }
            Family::TwoClassEquivalence { max0, max1 } => {
                if *max0 > SIZE_CAP || *max1 > SIZE_CAP {
                    return Err(Error::input(format!(
                        "class sizes {},{} exceed cap",
                        max0, max1
                    )));
                }
            }
            Family::Ordered(inner) => Self::check_caps(inner)?,
        }
        Ok(())
    }

    pub fn spec_string(&self) -> String {
        fn fmt(f: &Family) -> String {
            match f {
                Family::Chains { max } => format!("chains:{}", max),
                Family::PureSets { max } => format!("pure_sets:{}", max),
                Family::Graphs { max } => format!("graphs:{}", max),
                Family::TwoClassEquivalence { max0, max1 } => {
                    format!("two_class:{},{}", max0, max1)
                }
                Family::Ordered(inner) => format!("ordered:{}", fmt(inner)),
            }
        }
        fmt(&self.family)
    }
}

fn base_members(family: &Family) -> Result<Vec<FiniteStructure>> {
    match family {
        Family::Chains { max } => Ok((0..=*max).map(builders::chain).collect()),
        Family::PureSets { max } => Ok((0..=*max).map(builders::pure_set).collect()),
        Family::TwoClassEquivalence { max0, max1 } => {
            let mut seen = BTreeSet::new();
            let mut out = Vec::new();
            for a in 0..=*max0 {
                for b in 0..=*max1 {
                    let s = builders::two_class(a.max(b), a.min(b));
                    if seen.insert((a.max(b), a.min(b))) {
                        out.push(s);
                    }
                }
            }
            Ok(out)
        }
        Family::Graphs { max } => {
            let mut out = Vec::new();
            for n in 0..=*max {
                let pairs: Vec<(usize, usize)> = (0..n)
                    .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
                    .collect();
                let mut seen: BTreeSet<CanonicalCode> = BTreeSet::new();
                let mut members = Vec::new();
                for mask in 0u64..(1u64 << pairs.len()) {
                    let edges: Vec<(usize, usize)> = pairs
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, &p)| p)
                        .collect();
                    let g = builders::graph(n, &edges);
                    let canon = crate::canon::canonicalize(&g);
                    if seen.insert(canonical_form(&canon)) {
                        members.push(canon);
                    }
                }
                out.extend(members);
            }
            Ok(out)
        }
        Family::Ordered(_) => unreachable!("handled by generate_fragment"),
    }
}

/// All linear-order expansions of `base` (over its signature plus `lt/2`),
/// up to isomorphism.
fn order_expansions(
    base: &FiniteStructure,
    sig: &ExpansionSignature,
) -> Result<Vec<FiniteStructure>> {
    let full = sig.full_signature()?;
    let n = base.size();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        // perm read as: perm[i] is the i-th smallest element.
        let mut s = FiniteStructure::empty_relations(full.clone(), n);
        for (idx, _) in base.signature().relations().iter().enumerate() {
            for t in base.tuples(idx) {
                s.insert_tuple(idx, t.clone())?;
            }
        }
        let lt_idx = full.len() - 1;
        for i in 0..n {
            for j in (i + 1)..n {
                s.insert_tuple(lt_idx, vec![perm[i], perm[j]])?;
            }
        }
        let canon = crate::canon::canonicalize(&s);
        if seen.insert(canonical_form(&canon)) {
            out.push(canon);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(out)
}

fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// Generate every member of the family up to its size caps, canonicalized and
/// closed under induced substructures.
pub fn generate_fragment(spec: &FamilySpec) -> Result<ClassFragment> {
    match &spec.family {
        Family::Ordered(inner) => {
            let base = base_members(inner)?;
            let base_sig = if let Some(first) = base.first() {
                first.signature().clone()
            } else {
                return Err(Error::input("empty base family"));
            };
            let exp_sig = ExpansionSignature::new(base_sig, Vec::new(), Some("lt".to_string()))?;
            let mut members = Vec::new();
            for b in &base {
                members.extend(order_expansions(b, &exp_sig)?);
            }
            ClassFragment::new(FragmentSignature::Expanded(exp_sig), members)
        }
        family => {
            let members = base_members(family)?;
            let sig = if let Some(first) = members.first() {
                first.signature().clone()
            } else {
                return Err(Error::input("empty family"));
            };
            ClassFragment::new(FragmentSignature::Base(sig), members)
        }
    }
}

/// Validity report for a fragment: hereditary closure and fragment-relative
/// joint embedding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FragmentReport {
    pub hereditary: bool,
    /// Pairs of member indices whose proper substructure is missing,
    /// described as (member index, missing substructure code).
    pub hereditary_violations: Vec<(usize, CanonicalCode)>,
    pub jep_within_fragment: bool,
    /// Pairs of member indices with no joint host in the fragment.
    pub jep_unwitnessed: Vec<(usize, usize)>,
}

/// Check that every one-element deletion of a member stays in the fragment
/// (which implies full hereditary closure) and that every pair of members
/// jointly embeds into some member.
pub fn validate_fragment(fragment: &ClassFragment) -> Result<FragmentReport> {
    let members = fragment.members();
    let codes: BTreeSet<CanonicalCode> = members.iter().map(canonical_form).collect();
    let mut hereditary_violations = Vec::new();
    for (i, m) in members.iter().enumerate() {
        for drop in m.universe() {
            let subset: BTreeSet<usize> = m.universe().filter(|&x| x != drop).collect();
            let sub = m.induced(&subset)?;
            let code = canonical_form(&sub);
            if !codes.contains(&code) {
                hereditary_violations.push((i, code));
            }
        }
    }
    hereditary_violations.sort();
    hereditary_violations.dedup();

    let mut jep_unwitnessed = Vec::new();
    for i in 0..members.len() {
        for j in i..members.len() {
            let witnessed = members.iter().any(|w| {
                enumerate_embeddings(&members[i], w)
                    .map(|e| !e.is_empty())
                    .unwrap_or(false)
                    && enumerate_embeddings(&members[j], w)
                        .map(|e| !e.is_empty())
                        .unwrap_or(false)
            });
            if !witnessed {
                jep_unwitnessed.push((i, j));
            }
        }
    }
    Ok(FragmentReport {
        hereditary: hereditary_violations.is_empty(),
        hereditary_violations,
        jep_within_fragment: jep_unwitnessed.is_empty(),
        jep_unwitnessed,
    })
}
