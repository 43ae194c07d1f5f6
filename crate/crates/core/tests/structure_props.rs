//! Property suites for the structure, canonical-form, and copy machinery.

mod support;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::prelude::*;

use ramsey_core::canon::{automorphisms, canonical_form};
use ramsey_core::copies::{enumerate_copies, enumerate_embeddings};
use ramsey_core::io;
use ramsey_core::structure::{FiniteStructure, Signature};

use support::{random_host, random_induced, rng};

#[test]
fn copy_count_times_automorphisms_is_embedding_count() {
    let mut r = rng(11);
    let mut tried = 0;
    while tried < 60 {
        let host = random_host(&mut r);
        if host.size() > 6 || host.size() == 0 {
            continue;
        }
        let pattern = random_induced(&mut r, &host, 1, host.size());
        let copies = enumerate_copies(&pattern, &host).unwrap().len();
        let auts = automorphisms(&pattern).len();
        let embeddings = enumerate_embeddings(&pattern, &host).unwrap().len();
        assert_eq!(copies * auts, embeddings, "pattern {} in {}", pattern, host);
        tried += 1;
    }
}

#[test]
fn canonical_form_is_relabeling_invariant_thousand_times() {
    let mut r = rng(12);
    let mut done = 0;
    while done < 1000 {
        let host = random_host(&mut r);
        let n = host.size();
        if n > 6 {
            continue;
        }
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut r);
        let relabeled = host.relabel(&perm);
        assert_eq!(
            canonical_form(&host),
            canonical_form(&relabeled),
            "{} vs relabeling {:?}",
            host,
            perm
        );
        done += 1;
    }
}

/// Brute-force isomorphism: try every bijection.
fn isomorphic_brute(a: &FiniteStructure, b: &FiniteStructure) -> bool {
    if a.signature() != b.signature() || a.size() != b.size() {
        return false;
    }
    let n = a.size();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        if &a.relabel(&perm) == b {
            return true;
        }
        // Next permutation in lexicographic order.
        let mut i = n.saturating_sub(1);
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
    }
}

#[test]
fn canonical_codes_decide_isomorphism_like_brute_force() {
    use ramsey_core::canon::are_isomorphic;
    let mut r = rng(14);
    let mut done = 0;
    while done < 120 {
        let a = random_host(&mut r);
        if a.size() > 5 {
            continue;
        }
        // Pair with a structure over the same signature: either a shuffled
        // relabeling or an independently drawn one.
        let b = if r.random_bool(0.4) {
            let mut perm: Vec<usize> = (0..a.size()).collect();
            perm.shuffle(&mut r);
            a.relabel(&perm)
        } else {
            let candidate = random_host(&mut r);
            if candidate.signature() != a.signature() || candidate.size() != a.size() {
                continue;
            }
            candidate
        };
        assert_eq!(are_isomorphic(&a, &b), isomorphic_brute(&a, &b), "{} vs {}", a, b);
        done += 1;
    }
}

#[test]
fn canonicalize_returns_an_isomorphic_relabeling() {
    use ramsey_core::canon::canonicalize;
    let mut r = rng(15);
    for _ in 0..60 {
        let a = random_host(&mut r);
        let c = canonicalize(&a);
        assert_eq!(a.size(), c.size());
        assert!(isomorphic_brute(&a, &c) || a.size() > 5, "{} vs {}", a, c);
    }
}

#[test]
fn distinct_small_graphs_get_distinct_codes() {
    // Complementary directions: codes must separate non-isomorphic members.
    use ramsey_core::catalog::{generate_fragment, FamilySpec};
    let frag = generate_fragment(&FamilySpec::parse("graphs:4").unwrap()).unwrap();
    let codes: BTreeSet<_> = frag.members().iter().map(canonical_form).collect();
    assert_eq!(codes.len(), frag.members().len());
}

#[test]
fn graph_census_matches_known_counts() {
    // Canonical dedup over all 2^15 edge masks must land on the known number
    // of isomorphism classes: 1, 1, 2, 4, 11, 34, 156 by vertex count.
    use ramsey_core::catalog::{generate_fragment, FamilySpec};
    let frag = generate_fragment(&FamilySpec::parse("graphs:6").unwrap()).unwrap();
    assert_eq!(frag.members().len(), 209);
    let by_size = |n: usize| frag.members().iter().filter(|m| m.size() == n).count();
    assert_eq!(by_size(5), 34);
    assert_eq!(by_size(6), 156);
}

#[test]
fn copy_enumeration_commutes_with_restriction() {
    let mut r = rng(13);
    let mut done = 0;
    while done < 40 {
        let host = random_host(&mut r);
        if host.size() < 2 {
            continue;
        }
        let pattern = random_induced(&mut r, &host, 1, 3.min(host.size()));
        // Random subset S of the host.
        let subset: BTreeSet<usize> = (0..host.size()).filter(|_| r.random_bool(0.6)).collect();
        let induced = host.induced(&subset).unwrap();
        let order: Vec<usize> = subset.iter().copied().collect();

        let inside: BTreeSet<Vec<usize>> = enumerate_copies(&pattern, &host)
            .unwrap()
            .copies()
            .iter()
            .filter(|c| c.subset().iter().all(|x| subset.contains(x)))
            .map(|c| c.subset().to_vec())
            .collect();
        let renamed: BTreeSet<Vec<usize>> = enumerate_copies(&pattern, &induced)
            .unwrap()
            .copies()
            .iter()
            .map(|c| c.subset().iter().map(|&i| order[i]).collect())
            .collect();
        assert_eq!(inside, renamed);
        done += 1;
    }
}

/// Strategy for arbitrary small structures over a random signature.
fn structure_strategy() -> impl Strategy<Value = FiniteStructure> {
    (1usize..=2, 0usize..=5).prop_flat_map(|(rels, size)| {
        let sig_names: Vec<(String, usize)> = (0..rels)
            .map(|i| (format!("R{}", i), (i % 2) + 1))
            .collect();
        let tuples = prop::collection::vec(
            (
                0usize..rels,
                prop::collection::vec(0usize..size.max(1), 1..=2),
            ),
            0..=8,
        );
        tuples.prop_map(move |raw| {
            let sig = Signature::from_pairs(
                &sig_names
                    .iter()
                    .map(|(n, a)| (n.as_str(), *a))
                    .collect::<Vec<_>>(),
            )
            .unwrap();
            let mut s = FiniteStructure::empty_relations(sig.clone(), size);
            for (rel, tuple) in raw {
                let arity = sig.relations()[rel].arity;
                if size == 0 {
                    continue;
                }
                let mut t = tuple;
                t.truncate(arity);
                while t.len() < arity {
                    t.push(0);
                }
                if t.iter().all(|&x| x < size) {
                    s.insert_tuple(rel, t).unwrap();
                }
            }
            s
        })
    })
}

proptest! {
    #[test]
    fn structure_files_round_trip(s in structure_strategy()) {
        let text = io::structure_to_string(&s);
        let parsed = io::parse_structure(&text).unwrap();
        prop_assert_eq!(&parsed, &s);
        prop_assert_eq!(io::structure_to_string(&parsed), text);
    }

    #[test]
    fn canonicalization_fixes_isomorphism_class(s in structure_strategy(), seed in 0u64..1000) {
        let mut r = rng(seed);
        let n = s.size();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut r);
        let relabeled = s.relabel(&perm);
        prop_assert_eq!(canonical_form(&s), canonical_form(&relabeled));
    }
}
