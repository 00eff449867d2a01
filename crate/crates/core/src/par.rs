//! Data-parallel helpers with a sequential fallback.
//!
//! Every helper produces the same output for both execution modes: work is
//! split into independent items and results are concatenated in item order.
//! Without the `parallel` feature, [`Execution::Parallel`] silently runs
//! sequentially.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How data-parallel inner loops are executed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// True when work will actually be spread over the rayon pool.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

// Below this many items the fork/join overhead is not worth paying.
#[cfg(feature = "parallel")]
const MIN_PARALLEL_ITEMS: usize = 64;

/// Maps every index in `0..len` to a vector and concatenates the results in
/// index order.
pub fn flat_map_range<U, F>(exec: Execution, start: usize, end: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> Vec<U> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() && end.saturating_sub(start) >= MIN_PARALLEL_ITEMS {
        return (start..end).into_par_iter().flat_map_iter(f).collect();
    }
    let _ = exec;
    (start..end).flat_map(f).collect()
}

/// Maps every element of `items` and collects the results in order.
pub fn map_slice<T, U, F>(exec: Execution, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() && items.len() >= MIN_PARALLEL_ITEMS {
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Returns the smallest index `i` in `0..len` with `pred(i)`, if any.
///
/// The parallel path still reports the minimal index, so witnesses are the
/// same ones a sequential scan would pick.
pub fn find_first<F>(exec: Execution, len: usize, pred: F) -> Option<usize>
where
    F: Fn(usize) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() && len >= MIN_PARALLEL_ITEMS {
        return (0..len).into_par_iter().find_first(|&i| pred(i));
    }
    let _ = exec;
    (0..len).find(|&i| pred(i))
}

/// True when `pred` holds for every index in `0..len`.
pub fn all_range<F>(exec: Execution, len: usize, pred: F) -> bool
where
    F: Fn(usize) -> bool + Sync + Send,
{
    find_first(exec, len, |i| !pred(i)).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let f = |i: usize| (0..i % 4).map(|k| i * 10 + k).collect::<Vec<_>>();
        let seq = flat_map_range(Execution::Sequential, 0, 500, f);
        let par = flat_map_range(Execution::Parallel, 0, 500, f);
        assert_eq!(seq, par);

        let items: Vec<u32> = (0..300).collect();
        assert_eq!(
            map_slice(Execution::Sequential, &items, |x| x * 3),
            map_slice(Execution::Parallel, &items, |x| x * 3)
        );
    }

    #[test]
    fn find_first_is_minimal() {
        for exec in [Execution::Sequential, Execution::Parallel] {
            assert_eq!(find_first(exec, 1000, |i| i % 97 == 96), Some(96));
            assert_eq!(find_first(exec, 1000, |_| false), None);
            assert!(all_range(exec, 1000, |i| i < 1000));
        }
    }
}
