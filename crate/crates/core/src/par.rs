//! Optional data parallelism for independent checks.

/// True when `f` holds for every item.
#[cfg(feature = "parallel")]
pub(crate) fn all<T: Sync>(items: &[T], f: impl Fn(&T) -> bool + Sync) -> bool {
    use rayon::prelude::*;
    items.par_iter().all(|x| f(x))
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn all<T: Sync>(items: &[T], f: impl Fn(&T) -> bool + Sync) -> bool {
    items.iter().all(f)
}
