//! Exhaustive, exact verification of d-wise independence, plus the
//! orthonormal witness matrix and Cantelli helpers that make the pairwise
//! lower-bound argument executable.
//!
//! Independence is checked per the definition: for every size-d index
//! subset and every value tuple, the exact joint probability must equal the
//! exact product of the d marginals. Subsets and tuples are scanned in
//! lexicographic order and the first failure is the canonical
//! counterexample. Uniform spaces (every construction in this crate) take
//! an integer-counting fast path; everything else accumulates rationals.

use crate::comb::{binomial_u64, SubsetIter};
use crate::space::{SampleSpace, SpaceError};
use num_bigint::BigUint;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::sync::atomic::{AtomicU64, Ordering};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("independence order {d} out of range 1..={n}")]
    OrderOutOfRange { d: usize, n: usize },
    #[error("operation requires binary variables, got alphabet size {k}")]
    NotBinary { k: usize },
    #[error("marginal of variable {index} is degenerate (probability 0 or 1)")]
    DegenerateMarginal { index: usize },
    #[error("deviation parameter t must be positive")]
    NonPositiveT,
    #[error("variance must be nonnegative")]
    NegativeVariance,
    #[error("k^d tuple count overflows the check")]
    CheckTooLarge,
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// First (subset, value-tuple) pair violating the product rule, with the
/// exact joint probability and marginal product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub subset: Vec<usize>,
    pub values: Vec<u8>,
    pub joint: BigRational,
    pub product: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependenceReport {
    pub d: usize,
    pub holds: bool,
    /// Present iff `holds` is false; lexicographically first violation.
    pub counterexample: Option<Counterexample>,
}

/// Check d-wise independence exhaustively with exact arithmetic.
pub fn check_dwise_independence(
    space: &SampleSpace,
    d: usize,
) -> Result<IndependenceReport, VerifyError> {
    check_dwise_independence_with_threads(space, d, 1)
}

/// Same check, scanning subset ranges on up to `threads` worker threads.
/// The returned counterexample is still the lexicographically first one:
/// workers walk disjoint contiguous rank ranges and the smallest rank wins.
pub fn check_dwise_independence_with_threads(
    space: &SampleSpace,
    d: usize,
    threads: usize,
) -> Result<IndependenceReport, VerifyError> {
    let n = space.n();
    if d < 1 || d > n {
        return Err(VerifyError::OrderOutOfRange { d, n });
    }
    let ctx = CheckContext::new(space, d)?;
    let total = binomial_u64(n as u64, d as u64);
    let found = match (threads.max(1), total) {
        (1, _) | (_, None) => scan_range(&ctx, 0, None, &AtomicU64::new(u64::MAX)),
        (threads, Some(total)) => {
            let threads = threads.min(total.max(1) as usize).max(1);
            if threads == 1 {
                scan_range(&ctx, 0, None, &AtomicU64::new(u64::MAX))
            } else {
                let best = AtomicU64::new(u64::MAX);
                let chunk = total.div_ceil(threads as u64);
                let mut results: Vec<Option<(u64, Counterexample)>> =
                    std::thread::scope(|scope| {
                        let handles: Vec<_> = (0..threads)
                            .map(|w| {
                                let ctx = &ctx;
                                let best = &best;
                                let start = w as u64 * chunk;
                                let end = (start + chunk).min(total);
                                scope.spawn(move || {
                                    if start >= end {
                                        return None;
                                    }
                                    scan_range(ctx, start, Some(end), best)
                                })
                            })
                            .collect();
                        handles.into_iter().map(|h| h.join().unwrap()).collect()
                    });
                results
                    .iter_mut()
                    .filter_map(|r| r.take())
                    .min_by_key(|(rank, _)| *rank)
            }
        }
    };
    Ok(match found {
        None => IndependenceReport {
            d,
            holds: true,
            counterexample: None,
        },
        Some((_, ce)) => IndependenceReport {
            d,
            holds: false,
            counterexample: Some(ce),
        },
    })
}

struct CheckContext<'a> {
    space: &'a SampleSpace,
    d: usize,
    k: usize,
    tuples: u64,
    /// Symbols stored column-major: columns[j][i] = value of variable j at
    /// support point i.
    columns: Vec<Vec<u8>>,
    marginals: Vec<Vec<BigRational>>,
    /// Integer-counting data when all point probabilities are equal.
    uniform: Option<UniformCounts>,
}

struct UniformCounts {
    m: u64,
    marginal_counts: Vec<Vec<u64>>,
}

impl<'a> CheckContext<'a> {
    fn new(space: &'a SampleSpace, d: usize) -> Result<Self, VerifyError> {
        let n = space.n();
        let k = space.k();
        let tuples = (k as u64)
            .checked_pow(d as u32)
            .ok_or(VerifyError::CheckTooLarge)?;
        let m = space.support_size();
        let mut columns = vec![vec![0u8; m]; n];
        for (i, (point, _)) in space.support().iter().enumerate() {
            for (j, &v) in point.iter().enumerate() {
                columns[j][i] = v;
            }
        }
        let marginals: Vec<Vec<BigRational>> = (0..n)
            .map(|j| Ok(space.marginal(j)?.probs().to_vec()))
            .collect::<Result<_, SpaceError>>()?;
        let uniform = if space.is_uniform() {
            let mut marginal_counts = vec![vec![0u64; k]; n];
            for (j, col) in columns.iter().enumerate() {
                for &v in col {
                    marginal_counts[j][v as usize] += 1;
                }
            }
            Some(UniformCounts {
                m: m as u64,
                marginal_counts,
            })
        } else {
            None
        };
        Ok(CheckContext {
            space,
            d,
            k,
            tuples,
            columns,
            marginals,
            uniform,
        })
    }

    /// Exact joint probability of `values` on `subset`, by filtering.
    fn joint_exact(&self, subset: &[usize], values: &[u8]) -> BigRational {
        let mut total = BigRational::zero();
        for (point, prob) in self.space.support() {
            if subset.iter().zip(values).all(|(&j, &v)| point[j] == v) {
                total += prob;
            }
        }
        total
    }

    fn marginal_product(&self, subset: &[usize], values: &[u8]) -> BigRational {
        let mut prod = BigRational::one();
        for (&j, &v) in subset.iter().zip(values) {
            prod *= &self.marginals[j][v as usize];
        }
        prod
    }
}

/// Scan subsets with ranks in [start, end) lexicographically; return the
/// first counterexample, if any. `best` carries the smallest failing rank
/// seen by any worker so later ranges can stop early.
fn scan_range(
    ctx: &CheckContext,
    start: u64,
    end: Option<u64>,
    best: &AtomicU64,
) -> Option<(u64, Counterexample)> {
    let n = ctx.space.n();
    let mut iter = SubsetIter::from_rank(n, ctx.d, start);
    let mut rank = start;
    let mut counts = vec![0u64; ctx.tuples as usize];
    while iter.advance() {
        if let Some(end) = end {
            if rank >= end {
                return None;
            }
        }
        if rank > best.load(Ordering::Relaxed) {
            return None;
        }
        let subset = iter.current();
        let failure = match &ctx.uniform {
            Some(uni) => check_subset_uniform(ctx, uni, subset, &mut counts),
            None => check_subset_exact(ctx, subset),
        };
        if let Some(values) = failure {
            let joint = ctx.joint_exact(subset, &values);
            let product = ctx.marginal_product(subset, &values);
            debug_assert_ne!(joint, product);
            best.fetch_min(rank, Ordering::Relaxed);
            return Some((
                rank,
                Counterexample {
                    subset: subset.to_vec(),
                    values,
                    joint,
                    product,
                },
            ));
        }
        rank += 1;
    }
    None
}

/// Uniform fast path: count support points per value tuple, then compare
/// count/m against the product of marginal counts over m^d by
/// cross-multiplication. Returns the first failing tuple.
fn check_subset_uniform(
    ctx: &CheckContext,
    uni: &UniformCounts,
    subset: &[usize],
    counts: &mut [u64],
) -> Option<Vec<u8>> {
    counts.fill(0);
    let m = uni.m as usize;
    let k = ctx.k;
    if ctx.d == 2 {
        let a = &ctx.columns[subset[0]];
        let b = &ctx.columns[subset[1]];
        for i in 0..m {
            counts[a[i] as usize * k + b[i] as usize] += 1;
        }
    } else {
        let views: Vec<&[u8]> = subset.iter().map(|&j| ctx.columns[j].as_slice()).collect();
        for i in 0..m {
            let mut idx = 0usize;
            for col in &views {
                idx = idx * k + col[i] as usize;
            }
            counts[idx] += 1;
        }
    }
    // m^(d-1), falling back to big integers on overflow.
    let mut scale: Option<u128> = Some(1);
    for _ in 1..ctx.d {
        scale = scale.and_then(|s| s.checked_mul(uni.m as u128));
    }
    for t in 0..ctx.tuples {
        let mut digits = vec![0u8; ctx.d];
        let mut rem = t;
        for pos in (0..ctx.d).rev() {
            digits[pos] = (rem % k as u64) as u8;
            rem /= k as u64;
        }
        let lhs_count = counts[t as usize];
        let mut rhs: Option<u128> = Some(1);
        for (pos, &j) in subset.iter().enumerate() {
            let c = uni.marginal_counts[j][digits[pos] as usize] as u128;
            rhs = rhs.and_then(|r| r.checked_mul(c));
        }
        let equal = match (scale, rhs) {
            (Some(scale), Some(rhs)) => (lhs_count as u128).checked_mul(scale) == Some(rhs),
            _ => {
                let mut lhs_big = BigUint::from(lhs_count);
                lhs_big *= BigUint::from(uni.m).pow(ctx.d as u32 - 1);
                let mut rhs_big = BigUint::one();
                for (pos, &j) in subset.iter().enumerate() {
                    rhs_big *= BigUint::from(uni.marginal_counts[j][digits[pos] as usize]);
                }
                lhs_big == rhs_big
            }
        };
        if !equal {
            return Some(digits);
        }
    }
    None
}

/// General path: accumulate exact joint probabilities over the support in
/// one pass, then compare every tuple against the marginal product.
fn check_subset_exact(ctx: &CheckContext, subset: &[usize]) -> Option<Vec<u8>> {
    use std::collections::BTreeMap;
    let k = ctx.k as u64;
    let mut joint: BTreeMap<u64, BigRational> = BTreeMap::new();
    for (i, (_, prob)) in ctx.space.support().iter().enumerate() {
        let mut idx = 0u64;
        for &j in subset {
            idx = idx * k + ctx.columns[j][i] as u64;
        }
        *joint.entry(idx).or_default() += prob;
    }
    let zero = BigRational::zero();
    for t in 0..ctx.tuples {
        let mut digits = vec![0u8; ctx.d];
        let mut rem = t;
        for pos in (0..ctx.d).rev() {
            digits[pos] = (rem % k) as u8;
            rem /= k;
        }
        let lhs = joint.get(&t).unwrap_or(&zero);
        let rhs = ctx.marginal_product(subset, &digits);
        if *lhs != rhs {
            return Some(digits);
        }
    }
    None
}

/// The m x (n+1) witness matrix of the pairwise lower-bound argument for
/// binary spaces: column 0 holds sqrt(p_i); column j holds
/// -sqrt(p_i q_j/(1-q_j)) where point i has a 0 in variable j and
/// +sqrt(p_i (1-q_j)/q_j) where it has a 1. Its columns are orthonormal
/// exactly when the space is pairwise independent.
#[derive(Debug, Clone)]
pub struct WitnessMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl WitnessMatrix {
    pub(crate) fn from_entries(rows: usize, cols: usize, entries: Vec<Complex64>) -> Self {
        debug_assert_eq!(entries.len(), rows * cols);
        WitnessMatrix {
            rows,
            cols,
            entries,
        }
    }

    /// Support points (one row per point).
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// n + 1 columns: the sqrt-probability column plus one per variable.
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.cols + j]
    }

    pub fn row_norm_sq(&self, i: usize) -> f64 {
        self.entries[i * self.cols..(i + 1) * self.cols]
            .iter()
            .map(|e| e.norm_sqr())
            .sum()
    }

    fn is_real(&self) -> bool {
        self.entries.iter().all(|e| e.im == 0.0)
    }
}

/// Build the binary witness matrix. Fails on non-binary spaces and on
/// degenerate marginals (the construction needs 0 < q_j < 1).
pub fn build_witness_matrix(space: &SampleSpace) -> Result<WitnessMatrix, VerifyError> {
    if space.k() != 2 {
        return Err(VerifyError::NotBinary { k: space.k() });
    }
    let n = space.n();
    let m = space.support_size();
    // Per-variable factors sqrt(q/(1-q)) and sqrt((1-q)/q).
    let mut neg_factor = Vec::with_capacity(n);
    let mut pos_factor = Vec::with_capacity(n);
    for j in 0..n {
        let marginal = space.marginal(j)?;
        let q = marginal.prob(1);
        if q.is_zero() || q.is_one() {
            return Err(VerifyError::DegenerateMarginal { index: j });
        }
        let qf = q.to_f64().expect("probability fits f64");
        neg_factor.push((qf / (1.0 - qf)).sqrt());
        pos_factor.push(((1.0 - qf) / qf).sqrt());
    }
    let mut entries = Vec::with_capacity(m * (n + 1));
    for (point, prob) in space.support() {
        let sp = prob.to_f64().expect("probability fits f64").sqrt();
        entries.push(Complex64::new(sp, 0.0));
        for j in 0..n {
            let value = if point[j] == 0 {
                -sp * neg_factor[j]
            } else {
                sp * pos_factor[j]
            };
            entries.push(Complex64::new(value, 0.0));
        }
    }
    Ok(WitnessMatrix::from_entries(m, n + 1, entries))
}

/// Largest absolute deviation of the column Gram matrix from the identity.
pub fn column_gram_defect(w: &WitnessMatrix) -> f64 {
    let rows = w.rows;
    let cols = w.cols;
    let mut defect = 0.0f64;
    if w.is_real() {
        // Column-major copy for contiguous dot products.
        let mut columns = vec![vec![0.0f64; rows]; cols];
        for i in 0..rows {
            for (j, col) in columns.iter_mut().enumerate() {
                col[i] = w.entries[i * cols + j].re;
            }
        }
        for a in 0..cols {
            for b in a..cols {
                let dot: f64 = columns[a].iter().zip(&columns[b]).map(|(x, y)| x * y).sum();
                let target = if a == b { 1.0 } else { 0.0 };
                defect = defect.max((dot - target).abs());
            }
        }
    } else {
        let mut columns = vec![vec![Complex64::new(0.0, 0.0); rows]; cols];
        for i in 0..rows {
            for (j, col) in columns.iter_mut().enumerate() {
                col[i] = w.entries[i * cols + j];
            }
        }
        for a in 0..cols {
            for b in a..cols {
                let dot: Complex64 = columns[a]
                    .iter()
                    .zip(&columns[b])
                    .map(|(x, y)| x.conj() * y)
                    .sum();
                let target = if a == b { 1.0 } else { 0.0 };
                defect = defect.max((dot - target).norm());
            }
        }
    }
    defect
}

/// One-sided deviation bound: Pr[X <= E X - t] <= 1 / (1 + t^2 / Var X).
/// A zero-variance variable never deviates, so the bound is 0.
pub fn cantelli_bound(variance: f64, t: f64) -> Result<f64, VerifyError> {
    if t.is_nan() || t <= 0.0 {
        return Err(VerifyError::NonPositiveT);
    }
    if variance.is_nan() || variance < 0.0 {
        return Err(VerifyError::NegativeVariance);
    }
    if variance == 0.0 {
        return Ok(0.0);
    }
    Ok(1.0 / (1.0 + t * t / variance))
}

/// Distribution of the odds-sum variable behind the pairwise lower bound:
/// Y = 1 + sum_j of q_j/(1-q_j) where X_j = 0 and (1-q_j)/q_j where
/// X_j = 1. Returns (value, probability) per support point, exactly.
/// Y relates to the witness matrix by: squared norm of row i = p_i * Y(a_i).
pub fn odds_sum_distribution(
    space: &SampleSpace,
) -> Result<Vec<(BigRational, BigRational)>, VerifyError> {
    if space.k() != 2 {
        return Err(VerifyError::NotBinary { k: space.k() });
    }
    let n = space.n();
    let mut odds_zero = Vec::with_capacity(n);
    let mut odds_one = Vec::with_capacity(n);
    for j in 0..n {
        let marginal = space.marginal(j)?;
        let q = marginal.prob(1).clone();
        if q.is_zero() || q.is_one() {
            return Err(VerifyError::DegenerateMarginal { index: j });
        }
        let one_minus = BigRational::one() - &q;
        odds_zero.push(&q / &one_minus);
        odds_one.push(&one_minus / &q);
    }
    Ok(space
        .support()
        .iter()
        .map(|(point, prob)| {
            let mut y = BigRational::one();
            for (j, &v) in point.iter().enumerate() {
                y += if v == 0 { &odds_zero[j] } else { &odds_one[j] };
            }
            (y, prob.clone())
        })
        .collect())
}

/// Exact expectation of a (value, probability) list.
pub fn exact_mean(dist: &[(BigRational, BigRational)]) -> BigRational {
    dist.iter().map(|(v, p)| v * p).sum()
}

/// Exact variance of a (value, probability) list.
pub fn exact_variance(dist: &[(BigRational, BigRational)]) -> BigRational {
    let mean = exact_mean(dist);
    let second: BigRational = dist.iter().map(|(v, p)| v * v * p).sum();
    second - &mean * &mean
}

/// Exact upper-tail mass Pr[value >= threshold].
pub fn exact_tail_ge(dist: &[(BigRational, BigRational)], threshold: &BigRational) -> BigRational {
    dist.iter()
        .filter(|(v, _)| v >= threshold)
        .map(|(_, p)| p.clone())
        .sum()
}
