//! Data-parallel map helpers. With the `parallel` feature the work runs on
//! the rayon global pool; without it everything falls back to a plain
//! sequential loop. Callers that need a runtime toggle (benches, the
//! worker-count CLI flag) use [`map_items`] with an explicit flag.

#[cfg(feature = "parallel")]
pub(crate) fn map_items<I, O, F>(items: Vec<I>, parallel: bool, f: F) -> Vec<O>
where
    I: Send,
    O: Send,
    F: Fn(I) -> O + Sync + Send,
{
    use rayon::prelude::*;
    if parallel {
        items.into_par_iter().map(f).collect()
    } else {
        items.into_iter().map(f).collect()
    }
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_items<I, O, F>(items: Vec<I>, _parallel: bool, f: F) -> Vec<O>
where
    F: Fn(I) -> O,
{
    items.into_iter().map(f).collect()
}

/// Parallel when the feature is enabled, sequential otherwise.
pub(crate) fn par_map<I, O, F>(items: Vec<I>, f: F) -> Vec<O>
where
    I: Send,
    O: Send,
    F: Fn(I) -> O + Sync + Send,
{
    map_items(items, true, f)
}
