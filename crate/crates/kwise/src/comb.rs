//! Lexicographic d-subset enumeration and small binomial helpers.
//!
//! Subsets of {0..n-1} are ordered lexicographically as sorted index
//! vectors; this order is part of the verification contract (the first
//! counterexample is the canonical one).

/// In-place iterator over size-d subsets of {0..n-1} in lexicographic order.
pub struct SubsetIter {
    n: usize,
    d: usize,
    cur: Vec<usize>,
    started: bool,
    done: bool,
}

impl SubsetIter {
    pub fn new(n: usize, d: usize) -> Self {
        assert!(d <= n);
        SubsetIter {
            n,
            d,
            cur: (0..d).collect(),
            started: false,
            done: false,
        }
    }

    /// Start from the subset with the given lexicographic rank.
    pub fn from_rank(n: usize, d: usize, rank: u64) -> Self {
        let cur = unrank(n, d, rank);
        SubsetIter {
            n,
            d,
            cur,
            started: false,
            done: false,
        }
    }

    /// Advance to the next subset; returns false once exhausted. The first
    /// call yields the initial subset itself.
    pub fn advance(&mut self) -> bool {
        if self.done {
            return false;
        }
        if !self.started {
            self.started = true;
            return true;
        }
        // Rightmost index that can still move up.
        let mut i = self.d;
        loop {
            if i == 0 {
                self.done = true;
                return false;
            }
            i -= 1;
            if self.cur[i] < self.n - self.d + i {
                break;
            }
        }
        self.cur[i] += 1;
        for j in i + 1..self.d {
            self.cur[j] = self.cur[j - 1] + 1;
        }
        true
    }

    pub fn current(&self) -> &[usize] {
        &self.cur
    }
}

/// C(n, k) without overflow; None when the value exceeds u64.
pub fn binomial_u64(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)?;
        acc /= (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// Subset of {0..n-1} with the given lexicographic rank among size-d subsets.
pub fn unrank(n: usize, d: usize, mut rank: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(d);
    let mut lo = 0usize;
    for pos in 0..d {
        let remaining = d - pos - 1;
        let mut v = lo;
        loop {
            let block = binomial_u64((n - 1 - v) as u64, remaining as u64)
                .expect("rank arithmetic stays within u64");
            if rank < block {
                break;
            }
            rank -= block;
            v += 1;
        }
        out.push(v);
        lo = v + 1;
    }
    out
}
