//! Index-ordered map that runs on rayon when the `parallel` feature is on.

#[cfg(feature = "parallel")]
pub fn map_range<T, G>(start: usize, end: usize, g: G) -> Vec<T>
where
    T: Send,
    G: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (start..end).into_par_iter().map(g).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_range<T, G>(start: usize, end: usize, g: G) -> Vec<T>
where
    T: Send,
    G: Fn(usize) -> T + Sync + Send,
{
    (start..end).map(g).collect()
}

/// Sequential reference used by benches and determinism tests.
pub fn map_range_seq<T, G>(start: usize, end: usize, g: G) -> Vec<T>
where
    G: Fn(usize) -> T,
{
    (start..end).map(g).collect()
}

pub fn map_slice<S, T, G>(items: &[S], g: G) -> Vec<T>
where
    S: Sync,
    T: Send,
    G: Fn(&S) -> T + Sync + Send,
{
    map_range(0, items.len(), |i| g(&items[i]))
}
