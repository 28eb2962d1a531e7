//! Deterministic data-parallel fill over index ranges.
//!
//! Work is split into contiguous chunks, one per thread, and each element is
//! computed independently from its index, so the result is bit-identical to
//! a sequential evaluation regardless of the thread count.

/// Resolves a requested thread count: 0 means "auto" (available
/// parallelism), anything else is taken literally.
pub(crate) fn resolve_threads(requested: usize) -> usize {
    if requested == 0 {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    } else {
        requested
    }
}

/// Fills `out[i] = f(i)` using up to `threads` worker threads.
pub(crate) fn par_fill<T, F>(out: &mut [T], threads: usize, f: F)
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let threads = resolve_threads(threads).min(out.len().max(1));
    if threads <= 1 || out.len() < 2 {
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = f(i);
        }
        return;
    }
    let chunk_len = out.len().div_ceil(threads);
    std::thread::scope(|scope| {
        for (c, chunk) in out.chunks_mut(chunk_len).enumerate() {
            let f = &f;
            scope.spawn(move || {
                let base = c * chunk_len;
                for (i, slot) in chunk.iter_mut().enumerate() {
                    *slot = f(base + i);
                }
            });
        }
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_fill_matches_sequential() {
        let f = |i: usize| (i as f64).sin() * 3.0 + i as f64;
        let mut seq = vec![0.0; 1001];
        par_fill(&mut seq, 1, f);
        for threads in [2, 3, 8, 64] {
            let mut par = vec![0.0; 1001];
            par_fill(&mut par, threads, f);
            assert_eq!(seq, par);
        }
    }

    #[test]
    fn zero_resolves_to_available() {
        assert!(resolve_threads(0) >= 1);
        assert_eq!(resolve_threads(3), 3);
    }
}
