//! Set partitions as restricted growth strings (RGS).
//!
//! An RGS over `n` elements is a vector `a` with `a[0] = 0` and
//! `a[i] <= max(a[0..i]) + 1`; it names the block of each element with blocks
//! numbered by first occurrence. Lexicographic RGS order is the canonical
//! enumeration order everywhere in this crate. `kmax` bounds the number of
//! blocks.

/// First RGS (everything in one block), or the empty RGS for `n = 0`.
pub fn first_rgs(n: usize) -> Vec<usize> {
    vec![0; n]
}

/// Advance `a` to the next RGS with at most `kmax` blocks, in lexicographic
/// order. Returns false when `a` was the last one.
pub fn next_rgs(a: &mut [usize], kmax: usize) -> bool {
    if a.is_empty() {
        return false;
    }
    let n = a.len();
    let mut prefix_max = vec![0usize; n];
    for i in 1..n {
        prefix_max[i] = prefix_max[i - 1].max(a[i - 1]);
    }
    for i in (1..n).rev() {
        let cap = (prefix_max[i] + 1).min(kmax.saturating_sub(1));
        if a[i] < cap {
            a[i] += 1;
            for x in a.iter_mut().skip(i + 1) {
                *x = 0;
            }
            return true;
        }
    }
    false
}

/// Number of partitions of `n` elements into at most `kmax` blocks
/// (`sum_{b<=kmax} S(n,b)`), saturating at `u128::MAX`.
#[allow(clippy::needless_range_loop)]
pub fn count_rgs(n: usize, kmax: usize) -> u128 {
    if n == 0 {
        return 1;
    }
    if kmax == 0 {
        return 0;
    }
    // completions[m] = number of ways to finish from a state with current
    // maximum block index m; iterate positions from the end.
    let top = kmax - 1;
    let mut completions = vec![1u128; top + 1];
    for _pos in (1..n).rev() {
        let mut next = vec![0u128; top + 1];
        for m in 0..=top {
            let hi = (m + 1).min(top);
            let mut total = 0u128;
            for v in 0..=hi {
                let nm = m.max(v);
                total = total.saturating_add(completions[nm]);
            }
            next[m] = total;
        }
        completions = next;
    }
    completions[0]
}

/// The RGS of the given `rank` (0-based) in lexicographic order among RGS of
/// length `n` with at most `kmax` blocks.
#[allow(clippy::needless_range_loop)]
pub fn rgs_at_rank(n: usize, kmax: usize, mut rank: u128) -> Vec<usize> {
    if n == 0 {
        return Vec::new();
    }
    let top = kmax - 1;
    // completions[pos][m]: ways to fill positions pos..n given current max m.
    let mut table = vec![vec![0u128; top + 1]; n + 1];
    for m in 0..=top {
        table[n][m] = 1;
    }
    for pos in (1..n).rev() {
        for m in 0..=top {
            let hi = (m + 1).min(top);
            let mut total = 0u128;
            for v in 0..=hi {
                total = total.saturating_add(table[pos + 1][m.max(v)]);
            }
            table[pos][m] = total;
        }
    }
    let mut a = vec![0usize; n];
    let mut m = 0usize;
    for pos in 1..n {
        let hi = (m + 1).min(top);
        for v in 0..=hi {
            let ways = table[pos + 1][m.max(v)];
            if rank < ways {
                a[pos] = v;
                m = m.max(v);
                break;
            }
            rank -= ways;
        }
    }
    a
}

/// Renumber arbitrary labels into RGS normal form (first-occurrence order).
pub fn normalize_rgs(labels: &[usize]) -> Vec<usize> {
    let mut seen: Vec<usize> = Vec::new();
    labels
        .iter()
        .map(|&l| {
            if let Some(p) = seen.iter().position(|&s| s == l) {
                p
            } else {
                seen.push(l);
                seen.len() - 1
            }
        })
        .collect()
}

pub fn num_blocks(rgs: &[usize]) -> usize {
    rgs.iter().max().map_or(0, |m| m + 1)
}

/// Blocks in first-occurrence order, each a sorted list of element indices.
pub fn blocks_of(rgs: &[usize]) -> Vec<Vec<usize>> {
    let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); num_blocks(rgs)];
    for (i, &b) in rgs.iter().enumerate() {
        blocks[b].push(i);
    }
    blocks
}

#[cfg(test)]
mod tests {
    use super::*;

    fn collect_all(n: usize, kmax: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut a = first_rgs(n);
        loop {
            out.push(a.clone());
            if !next_rgs(&mut a, kmax) {
                break;
            }
        }
        out
    }

    #[test]
    fn bell_numbers_small() {
        // Bell numbers 1, 1, 2, 5, 15, 52, 203.
        for (n, bell) in [(0, 1), (1, 1), (2, 2), (3, 5), (4, 15), (5, 52), (6, 203)] {
            assert_eq!(count_rgs(n, n.max(1)), bell, "n={}", n);
            if n > 0 {
                assert_eq!(collect_all(n, n).len() as u128, bell);
            }
        }
    }

    #[test]
    fn bounded_block_counts() {
        // S(4,1) + S(4,2) = 1 + 7 = 8.
        assert_eq!(count_rgs(4, 2), 8);
        assert_eq!(collect_all(4, 2).len(), 8);
        // S(15, <=2) = 1 + (2^14 - 1) = 16384.
        assert_eq!(count_rgs(15, 2), 16384);
    }

    #[test]
    fn enumeration_is_sorted_and_valid() {
        let all = collect_all(5, 3);
        for w in all.windows(2) {
            assert!(w[0] < w[1]);
        }
        for a in &all {
            assert_eq!(a[0], 0);
            let mut max = 0;
            for &v in &a[1..] {
                assert!(v <= max + 1);
                assert!(v < 3);
                max = max.max(v);
            }
        }
    }

    #[test]
    fn unranking_matches_enumeration() {
        let all = collect_all(6, 4);
        assert_eq!(all.len() as u128, count_rgs(6, 4));
        for (rank, expect) in all.iter().enumerate() {
            assert_eq!(&rgs_at_rank(6, 4, rank as u128), expect, "rank {}", rank);
        }
    }

    #[test]
    fn normalization() {
        assert_eq!(normalize_rgs(&[5, 5, 2, 5, 2, 7]), vec![0, 0, 1, 0, 1, 2]);
        assert_eq!(normalize_rgs(&[]), Vec::<usize>::new());
    }

    #[test]
    fn blocks_in_first_occurrence_order() {
        assert_eq!(
            blocks_of(&[0, 1, 0, 2, 1]),
            vec![vec![0, 2], vec![1, 4], vec![3]]
        );
        assert_eq!(num_blocks(&[0, 0, 0]), 1);
        assert_eq!(num_blocks(&[]), 0);
    }
}
