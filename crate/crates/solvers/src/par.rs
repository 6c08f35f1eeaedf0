//! Frontier expansion, data-parallel when the `parallel` feature is on.

use std::sync::atomic::{AtomicBool, Ordering};

static PARALLEL: AtomicBool = AtomicBool::new(true);

const MIN_PARALLEL_FRONTIER: usize = 2048;
const CHUNK: usize = 512;

/// Turns parallel expansion on or off at runtime. Has no effect without
/// the `parallel` feature.
pub fn set_parallel(on: bool) {
    PARALLEL.store(on, Ordering::Relaxed);
}

pub fn parallel_enabled() -> bool {
    cfg!(feature = "parallel") && PARALLEL.load(Ordering::Relaxed)
}

pub(crate) fn expand<F>(frontier: &[u128], f: F) -> Vec<(u128, u128)>
where
    F: Fn(u128, &mut Vec<(u128, u128)>) + Sync,
{
    #[cfg(feature = "parallel")]
    if parallel_enabled() && frontier.len() >= MIN_PARALLEL_FRONTIER {
        use rayon::prelude::*;
        return frontier
            .par_chunks(CHUNK)
            .flat_map_iter(|chunk| {
                let mut out = Vec::with_capacity(chunk.len() * 4);
                for &c in chunk {
                    f(c, &mut out);
                }
                out
            })
            .collect();
    }
    let mut out = Vec::with_capacity(frontier.len() * 4);
    for &c in frontier {
        f(c, &mut out);
    }
    out
}

/// Maps `f` over `items`, in parallel when enabled.
pub fn map_all<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel_enabled() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    items.iter().map(f).collect()
}
