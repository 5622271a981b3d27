//! Data-parallel helpers. With the `parallel` feature these fan out over
//! rayon; without it they run the same closures in order. Results are always
//! collected in index order, so output never depends on the thread count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// `(0..len).map(f).collect()`, possibly in parallel.
pub fn map_indexed<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..len).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..len).map(f).collect()
    }
}

/// Like [`map_indexed`] but each worker gets a reusable scratch value.
pub fn map_indexed_with<T, S, I, F>(len: usize, init: I, f: F) -> Vec<T>
where
    T: Send,
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..len).into_par_iter().map_init(&init, |s, i| f(s, i)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        let mut s = init();
        (0..len).map(|i| f(&mut s, i)).collect()
    }
}

/// Applies `f` to each element of `items` in place.
pub fn for_each_mut<T, F>(items: &mut [T], f: F)
where
    T: Send,
    F: Fn(usize, &mut T) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter_mut().enumerate().for_each(|(i, x)| f(i, x));
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter_mut().enumerate().for_each(|(i, x)| f(i, x));
    }
}

pub fn sort_f64(values: &mut [f64]) {
    #[cfg(feature = "parallel")]
    {
        values.par_sort_unstable_by(f64::total_cmp);
    }
    #[cfg(not(feature = "parallel"))]
    {
        values.sort_unstable_by(f64::total_cmp);
    }
}

/// Number of worker threads the helpers will use.
pub fn threads() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}

/// Sorts `items` by a float key, ties in unspecified order.
pub fn sort_by_f64_key<T, F>(items: &mut [T], key: F)
where
    T: Send,
    F: Fn(&T) -> f64 + Sync,
{
    #[cfg(feature = "parallel")]
    {
        items.par_sort_unstable_by(|a, b| key(a).total_cmp(&key(b)));
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.sort_unstable_by(|a, b| key(a).total_cmp(&key(b)));
    }
}
