//! Execution mode for the data-parallel loops.
//!
//! Every sweep in the crate goes through [`map`], which returns results in
//! index order regardless of how they were scheduled. With the `parallel`
//! feature the default mode is rayon-parallel; [`sequential`] forces the
//! plain iterator path for the calling thread.

use std::cell::Cell;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

thread_local! {
    static MODE: Cell<Option<Exec>> = const { Cell::new(None) };
}

/// Mode in effect on the current thread.
pub fn current() -> Exec {
    MODE.with(|m| m.get()).unwrap_or_default()
}

/// Run `f` with the given mode on this thread, restoring the previous one after.
pub fn with_mode<R>(mode: Exec, f: impl FnOnce() -> R) -> R {
    let prev = MODE.with(|m| m.replace(Some(mode)));
    let out = f();
    MODE.with(|m| m.set(prev));
    out
}

pub fn sequential<R>(f: impl FnOnce() -> R) -> R {
    with_mode(Exec::Sequential, f)
}

/// Evaluate `f(0..n)` and collect in index order.
pub fn map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match current() {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(f).collect()
        }
        _ => (0..n).map(f).collect(),
    }
}

/// Like [`map`] but short-circuits on the first error (by index order of the
/// collected results).
pub fn try_map<T, E, F>(n: usize, f: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(usize) -> Result<T, E> + Sync + Send,
{
    map(n, f).into_iter().collect()
}

/// Configure the global rayon pool. No-op without the `parallel` feature.
pub fn init_threads(threads: Option<usize>) {
    #[cfg(feature = "parallel")]
    if let Some(n) = threads.filter(|&n| n > 0) {
        // an already-initialized pool is fine
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_preserves_order_in_both_modes() {
        let par = with_mode(Exec::Parallel, || map(100, |i| i * i));
        let seq = sequential(|| map(100, |i| i * i));
        assert_eq!(par, seq);
        assert_eq!(seq[7], 49);
    }

    #[test]
    fn mode_is_restored() {
        let before = current();
        sequential(|| assert_eq!(current(), Exec::Sequential));
        assert_eq!(current(), before);
    }
}
