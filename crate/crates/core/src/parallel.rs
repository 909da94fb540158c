//! Data-parallel map over independent work items.
//!
//! With the `parallel` feature, [`Execution::Parallel`] runs on the rayon
//! global pool; without it, both modes run sequentially. Output order always
//! matches input order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::Result;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    #[default]
    Parallel,
    Sequential,
}

impl Execution {
    /// Whether `Parallel` actually runs on more than one thread in this build.
    pub const fn parallel_available() -> bool {
        cfg!(feature = "parallel")
    }
}

pub fn map<T, U, F>(items: &[T], exec: Execution, f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => items.par_iter().map(f).collect(),
        _ => items.iter().map(f).collect(),
    }
}

/// Like [`map`], stopping at an error.
pub fn try_map<T, U, F>(items: &[T], exec: Execution, f: F) -> Result<Vec<U>>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Result<U> + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => items.par_iter().map(f).collect(),
        _ => items.iter().map(f).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn order_preserved_in_both_modes() {
        let items: Vec<u64> = (0..1000).collect();
        let par = map(&items, Execution::Parallel, |x| x * x);
        let seq = map(&items, Execution::Sequential, |x| x * x);
        assert_eq!(par, seq);
        assert_eq!(par[999], 999 * 999);
    }

    #[test]
    fn errors_propagate() {
        let items = [1, 2, 3];
        let r = try_map(&items, Execution::Parallel, |&x| {
            if x == 2 {
                Err(Error::EmptyEnsemble)
            } else {
                Ok(x)
            }
        });
        assert_eq!(r.unwrap_err(), Error::EmptyEnsemble);
    }
}
