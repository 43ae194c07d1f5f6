//! Engine configuration and deterministic chunked parallelism.
//!
//! Searches split their enumeration space into fixed-size chunks scanned by a
//! worker pool; results are committed in chunk order, so verdicts and
//! counterexamples are identical for every worker count.

use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;

/// Tunables shared by every search operation.
#[derive(Debug, Clone)]
pub struct EngineConfig {
    /// Worker threads for coloring scans; 1 means fully sequential.
    pub workers: usize,
    /// Guard on the number of coloring partitions a single check may visit.
    pub max_colorings: u128,
    /// Guard on the size of a copy set over which equivalence relations are
    /// enumerated (Bell numbers grow fast).
    pub max_relation_base: usize,
    /// Guard on the number of equivalence relations enumerated.
    pub max_relations: u128,
    /// Automorphism-group pruning is skipped when |Aut| exceeds this.
    pub max_aut_for_pruning: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            workers: 1,
            max_colorings: 20_000_000,
            max_relation_base: 12,
            max_relations: 5_000_000,
            max_aut_for_pruning: 20_000,
        }
    }
}

impl EngineConfig {
    pub fn with_workers(workers: usize) -> Self {
        EngineConfig {
            workers: workers.max(1),
            ..Default::default()
        }
    }
}

const CHUNK: u64 = 1 << 14;

/// Scan `0..total` in chunks of fixed size; `scan(start, end)` returns the
/// first hit inside its range or None. The overall result is the hit from the
/// lowest-numbered chunk, independent of worker count and scheduling.
pub fn scan_first<T, F>(total: u128, workers: usize, scan: F) -> Option<T>
where
    T: Send,
    F: Fn(u128, u128) -> Option<T> + Sync,
{
    if total == 0 {
        return None;
    }
    let chunks = total.div_ceil(CHUNK as u128);
    if workers <= 1 || chunks <= 1 {
        let mut start = 0u128;
        while start < total {
            let end = (start + CHUNK as u128).min(total);
            if let Some(hit) = scan(start, end) {
                return Some(hit);
            }
            start = end;
        }
        return None;
    }
    let chunks64 = u64::try_from(chunks).expect("guarded search space");
    let next = AtomicU64::new(0);
    // Lowest chunk index with a hit so far; chunks past it are skipped.
    let best_chunk = AtomicU64::new(u64::MAX);
    let results: Mutex<Vec<(u64, T)>> = Mutex::new(Vec::new());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let c = next.fetch_add(1, Ordering::SeqCst);
                if c >= chunks64 || c > best_chunk.load(Ordering::SeqCst) {
                    break;
                }
                let start = c as u128 * CHUNK as u128;
                let end = (start + CHUNK as u128).min(total);
                if let Some(hit) = scan(start, end) {
                    best_chunk.fetch_min(c, Ordering::SeqCst);
                    results.lock().unwrap().push((c, hit));
                }
            });
        }
    });
    let mut found = results.into_inner().unwrap();
    found.sort_by_key(|(c, _)| *c);
    found.into_iter().next().map(|(_, hit)| hit)
}

/// Fold every chunk of `0..total` and combine the per-chunk outputs in chunk
/// order. Used by searches that must visit the whole space.
pub fn map_chunks<T, F>(total: u128, workers: usize, scan: F) -> Vec<T>
where
    T: Send,
    F: Fn(u128, u128) -> T + Sync,
{
    if total == 0 {
        return Vec::new();
    }
    let chunks = total.div_ceil(CHUNK as u128);
    if workers <= 1 || chunks <= 1 {
        let mut out = Vec::new();
        let mut start = 0u128;
        while start < total {
            let end = (start + CHUNK as u128).min(total);
            out.push(scan(start, end));
            start = end;
        }
        return out;
    }
    let chunks64 = u64::try_from(chunks).expect("guarded search space");
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<(u64, T)>> = Mutex::new(Vec::new());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let c = next.fetch_add(1, Ordering::SeqCst) as u64;
                if c >= chunks64 {
                    break;
                }
                let start = c as u128 * CHUNK as u128;
                let end = (start + CHUNK as u128).min(total);
                let value = scan(start, end);
                results.lock().unwrap().push((c, value));
            });
        }
    });
    let mut found = results.into_inner().unwrap();
    found.sort_by_key(|(c, _)| *c);
    found.into_iter().map(|(_, v)| v).collect()
}
