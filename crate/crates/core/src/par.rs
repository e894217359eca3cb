//! Execution strategy for the data-parallel inner loops.
//!
//! Every bulk operation in the crate funnels through [`map_indexed`], which
//! either runs on the rayon pool (`parallel` feature, the default) or
//! falls back to a plain sequential loop. Output order is always the input
//! index order, so the two paths are observationally identical.

/// How to run a bulk loop.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Exec {
    /// Plain sequential loop.
    Seq,
    /// Rayon-backed parallel loop when the `parallel` feature is enabled,
    /// otherwise identical to [`Exec::Seq`].
    #[default]
    Par,
}

#[cfg(feature = "parallel")]
pub(crate) fn map_indexed<T, F>(exec: Exec, len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    match exec {
        Exec::Seq => (0..len).map(f).collect(),
        Exec::Par => (0..len).into_par_iter().map(f).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_indexed<T, F>(_exec: Exec, len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..len).map(f).collect()
}
