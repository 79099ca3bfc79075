//! Order-preserving data parallelism.
//!
//! With the `parallel` feature, index ranges are mapped on the current rayon
//! pool; without it everything runs on the calling thread. Results are
//! always collected in index order, and every task is a pure function of its
//! index, so outputs do not depend on the number of workers.

use crate::error::Result;

/// `(0..len).map(f)` collected in order, possibly in parallel.
#[cfg(feature = "parallel")]
pub fn map_indexed<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..len).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T, F>(len: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..len).map(f).collect()
}

/// Fallible variant; the error of the lowest failing index wins.
pub fn try_map_indexed<T, F>(len: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    map_indexed(len, f).into_iter().collect()
}

/// Runs `op` on a pool of `threads` workers (`0` = rayon's default).
#[cfg(feature = "parallel")]
pub fn with_threads<R, OP>(threads: usize, op: OP) -> Result<R>
where
    R: Send,
    OP: FnOnce() -> R + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| {
            crate::error::Error::Config(format!("cannot start {threads} worker threads: {e}"))
        })?;
    Ok(pool.install(op))
}

#[cfg(not(feature = "parallel"))]
pub fn with_threads<R, OP>(threads: usize, op: OP) -> Result<R>
where
    OP: FnOnce() -> R,
{
    if threads > 1 {
        log_sequential_fallback(threads);
    }
    Ok(op())
}

#[cfg(not(feature = "parallel"))]
fn log_sequential_fallback(threads: usize) {
    static ONCE: std::sync::Once = std::sync::Once::new();
    ONCE.call_once(|| {
        eprintln!("lapconc built without the `parallel` feature; ignoring --threads {threads}");
    });
}

/// Whether this build can actually run tasks concurrently.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn preserves_order() {
        let out = with_threads(4, || map_indexed(100, |i| i * i)).unwrap();
        assert_eq!(out, (0..100).map(|i| i * i).collect::<Vec<_>>());
    }

    #[test]
    fn first_error_wins() {
        let r: Result<Vec<usize>> = try_map_indexed(50, |i| {
            if i % 7 == 3 {
                Err(Error::InvalidParameter(format!("{i}")))
            } else {
                Ok(i)
            }
        });
        match r {
            Err(Error::InvalidParameter(s)) => assert_eq!(s, "3"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
