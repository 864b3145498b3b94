//! Pluggable execution of the exhaustive searches.
//!
//! Searches hand slices of candidates to an [`Executor`]. Whatever the
//! schedule, an executor must report the *first* hit in slice order, so
//! counterexamples and least witnesses do not depend on worker count.

use alloc::vec::Vec;

use crate::Error;

/// Default search budget, in abstract search-node units.
pub const DEFAULT_MAX_COST: u128 = 2_000_000_000;

/// Number of stream items gathered before a batch goes to the executor.
pub const STREAM_CHUNK: usize = 2048;

pub trait Executor: Sync {
    /// First item (in slice order) for which `f` returns `Some`.
    fn find_map_first<T, R, F>(&self, items: &[T], f: F) -> Option<(usize, R)>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> Option<R> + Sync;

    /// `f` applied to every item, results in slice order.
    fn map<T, U, F>(&self, items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> U + Sync;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn find_map_first<T, R, F>(&self, items: &[T], f: F) -> Option<(usize, R)>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> Option<R> + Sync,
    {
        items.iter().enumerate().find_map(|(i, x)| f(x).map(|r| (i, r)))
    }

    fn map<T, U, F>(&self, items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> U + Sync,
    {
        items.iter().map(f).collect()
    }
}

/// Upper bound on the estimated size of any single search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_cost: u128,
}

impl Default for Budget {
    fn default() -> Self {
        Self { max_cost: DEFAULT_MAX_COST }
    }
}

impl Budget {
    pub fn new(max_cost: u128) -> Self {
        Self { max_cost: max_cost.max(1) }
    }

    pub fn unlimited() -> Self {
        Self { max_cost: u128::MAX }
    }

    pub fn admit(&self, estimate: u128) -> Result<(), Error> {
        if estimate > self.max_cost {
            Err(Error::CostExceeded { estimate, limit: self.max_cost })
        } else {
            Ok(())
        }
    }
}

/// Executor plus budget, threaded through every search.
#[derive(Debug, Clone, Copy, Default)]
pub struct Ctx<E = Sequential> {
    pub exec: E,
    pub budget: Budget,
}

impl<E: Executor> Ctx<E> {
    pub fn new(exec: E, budget: Budget) -> Self {
        Self { exec, budget }
    }

    /// Runs `f` over a stream in chunks and returns the first hit with its
    /// position in the stream.
    pub fn first_in_stream<T, R, I, F>(&self, stream: I, f: F) -> Option<(usize, T, R)>
    where
        I: IntoIterator<Item = T>,
        T: Sync,
        R: Send,
        F: Fn(&T) -> Option<R> + Sync,
    {
        let mut it = stream.into_iter();
        let mut offset = 0;
        loop {
            let chunk: Vec<T> = it.by_ref().take(STREAM_CHUNK).collect();
            if chunk.is_empty() {
                return None;
            }
            if let Some((i, r)) = self.exec.find_map_first(&chunk, &f) {
                let item = chunk.into_iter().nth(i).expect("index from chunk");
                return Some((offset + i, item, r));
            }
            offset += chunk.len();
        }
    }
}

/// `k`-subsets of `0..n` as increasing index vectors, in lexicographic order.
#[derive(Debug, Clone)]
pub struct Combinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
    started: bool,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Self { n, idx: (0..k).collect(), done: k > n || k == 0, started: false }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.idx.clone());
        }
        let k = self.idx.len();
        let mut i = k;
        while i > 0 && self.idx[i - 1] == self.n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            self.done = true;
            return None;
        }
        self.idx[i - 1] += 1;
        for j in i..k {
            self.idx[j] = self.idx[j - 1] + 1;
        }
        Some(self.idx.clone())
    }
}

pub(crate) fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul(n - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

pub(crate) fn pow_sat(base: u128, exp: u32) -> u128 {
    base.checked_pow(exp).unwrap_or(u128::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(32, 3), 4960);
        assert_eq!(binomial(2, 3), 0);
        assert_eq!(binomial(0, 0), 1);
    }

    #[test]
    fn combinations_in_lex_order() {
        let all: Vec<_> = Combinations::new(4, 2).collect();
        assert_eq!(all, [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]);
        assert_eq!(Combinations::new(5, 3).count(), 10);
        assert_eq!(Combinations::new(2, 3).count(), 0);
        assert_eq!(Combinations::new(3, 3).count(), 1);
    }

    #[test]
    fn stream_reports_global_position() {
        let ctx = Ctx::<Sequential>::default();
        let hit = ctx.first_in_stream(0..10_000u32, |&x| (x >= 5000 && x % 7 == 0).then_some(x * 2));
        assert_eq!(hit, Some((5005, 5005, 10010)));
        assert_eq!(ctx.first_in_stream(0..3u32, |_| None::<()>), None);
    }

    #[test]
    fn budget_refuses_large_estimates() {
        let b = Budget::new(10);
        assert!(b.admit(10).is_ok());
        assert!(b.admit(11).unwrap_err().is_cost_guard());
    }
}
