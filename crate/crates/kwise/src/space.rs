//! Finite sample spaces of n jointly distributed variables over {0..k-1},
//! with exact rational probabilities.
//!
//! A [`SampleSpace`] stores only positive-probability points, sorted
//! lexicographically, so two spaces describing the same distribution compare
//! equal and serialize identically. Normalization and marginal identities
//! are exact (no tolerances); only the entropy values are floats.
//!
//! The alphabet is zero-based: a variable over k symbols takes values in
//! {0, ..., k-1}.

use crate::rational::{format_ratio, log2_ratio, parse_ratio, ratio_to_f64};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported alphabet; points are stored as byte vectors.
pub const MAX_ALPHABET: usize = 256;

#[derive(Debug, Error)]
pub enum SpaceError {
    #[error("variable count must be positive")]
    EmptyVariables,
    #[error("alphabet size {0} out of range (2..={MAX_ALPHABET})")]
    BadAlphabet(usize),
    #[error("support point has length {found}, expected {expected}")]
    PointLength { expected: usize, found: usize },
    #[error("point entry {entry} out of range for alphabet size {k}")]
    EntryOutOfRange { entry: usize, k: usize },
    #[error("negative probability {0}")]
    NegativeProbability(String),
    #[error("duplicate support point")]
    DuplicatePoint,
    #[error("probabilities sum to {0}, expected exactly 1")]
    BadTotalMass(String),
    #[error("variable index {j} out of range for n={n}")]
    IndexOutOfRange { j: usize, n: usize },
    #[error("malformed sample-space JSON: {0}")]
    Json(String),
    #[error("bad probability string: {0}")]
    BadFraction(String),
}

/// Joint distribution of `n` variables over `{0..k-1}` given by its support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleSpace {
    n: usize,
    k: usize,
    support: Vec<(Vec<u8>, BigRational)>,
}

/// Distribution of a single variable: exact probabilities of 0..k-1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Marginal {
    index: usize,
    probs: Vec<BigRational>,
}

impl Marginal {
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn probs(&self) -> &[BigRational] {
        &self.probs
    }

    pub fn prob(&self, value: u8) -> &BigRational {
        &self.probs[value as usize]
    }

    /// Largest value probability and the smallest value attaining it.
    pub fn mode(&self) -> (u8, &BigRational) {
        let mut best = 0usize;
        for v in 1..self.probs.len() {
            if self.probs[v] > self.probs[best] {
                best = v;
            }
        }
        (best as u8, &self.probs[best])
    }
}

impl SampleSpace {
    /// Validate and canonicalize a support list. Zero-probability entries are
    /// dropped; the rest must be distinct, in-range and sum to exactly 1.
    pub fn new(
        n: usize,
        k: usize,
        support: Vec<(Vec<u8>, BigRational)>,
    ) -> Result<Self, SpaceError> {
        if n == 0 {
            return Err(SpaceError::EmptyVariables);
        }
        if !(2..=MAX_ALPHABET).contains(&k) {
            return Err(SpaceError::BadAlphabet(k));
        }
        let mut kept: Vec<(Vec<u8>, BigRational)> = Vec::with_capacity(support.len());
        let mut total = BigRational::zero();
        for (point, prob) in support {
            if point.len() != n {
                return Err(SpaceError::PointLength {
                    expected: n,
                    found: point.len(),
                });
            }
            if let Some(&bad) = point.iter().find(|&&e| (e as usize) >= k) {
                return Err(SpaceError::EntryOutOfRange {
                    entry: bad as usize,
                    k,
                });
            }
            if prob.is_negative() {
                return Err(SpaceError::NegativeProbability(format_ratio(&prob)));
            }
            if prob.is_zero() {
                continue;
            }
            total += &prob;
            kept.push((point, prob));
        }
        if !total.is_one() {
            return Err(SpaceError::BadTotalMass(format_ratio(&total)));
        }
        kept.sort_by(|a, b| a.0.cmp(&b.0));
        if kept.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(SpaceError::DuplicatePoint);
        }
        Ok(SampleSpace { n, k, support: kept })
    }

    /// Uniform distribution over the given points.
    pub fn uniform(n: usize, k: usize, points: Vec<Vec<u8>>) -> Result<Self, SpaceError> {
        let m = points.len();
        if m == 0 {
            return Err(SpaceError::BadTotalMass("0/1".into()));
        }
        let prob = BigRational::new(1.into(), (m as i64).into());
        Self::new(n, k, points.into_iter().map(|p| (p, prob.clone())).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Support in lexicographic point order.
    pub fn support(&self) -> &[(Vec<u8>, BigRational)] {
        &self.support
    }

    pub fn support_size(&self) -> usize {
        self.support.len()
    }

    /// True when every support point carries the same probability.
    pub fn is_uniform(&self) -> bool {
        self.support
            .windows(2)
            .all(|w| w[0].1 == w[1].1)
    }

    /// Exact distribution of variable `j`.
    pub fn marginal(&self, j: usize) -> Result<Marginal, SpaceError> {
        if j >= self.n {
            return Err(SpaceError::IndexOutOfRange { j, n: self.n });
        }
        let mut probs = vec![BigRational::zero(); self.k];
        for (point, prob) in &self.support {
            probs[point[j] as usize] += prob;
        }
        Ok(Marginal { index: j, probs })
    }

    /// Shannon entropy in bits: sum of p*log2(1/p) over the support in
    /// stored order (Neumaier-compensated, so the order fixes the result).
    pub fn shannon_entropy(&self) -> f64 {
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        for (_, prob) in &self.support {
            let p = ratio_to_f64(prob);
            let term = -p * p.log2();
            let t = sum + term;
            if sum.abs() >= term.abs() {
                comp += (sum - t) + term;
            } else {
                comp += (term - t) + sum;
            }
            sum = t;
        }
        sum + comp
    }

    /// Min-entropy in bits: log2 of 1 over the largest point probability.
    /// The maximum is taken over exact rationals before any float conversion.
    pub fn min_entropy(&self) -> f64 {
        -log2_ratio(&self.max_point_probability())
    }

    /// Largest point probability, exact.
    pub fn max_point_probability(&self) -> BigRational {
        self.support
            .iter()
            .map(|(_, p)| p)
            .max()
            .expect("support is nonempty")
            .clone()
    }

    /// Serialize to the sample-space JSON format.
    pub fn to_json(&self) -> String {
        let file = SpaceFile {
            n: self.n,
            k: self.k,
            support: self
                .support
                .iter()
                .map(|(point, prob)| PointFile {
                    point: point.iter().map(|&e| e as u64).collect(),
                    prob: format_ratio(prob),
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&file).expect("serialization cannot fail");
        s.push('\n');
        s
    }

    /// Parse the sample-space JSON format. Points may arrive in any order;
    /// the result is canonicalized.
    pub fn from_json(s: &str) -> Result<Self, SpaceError> {
        let file: SpaceFile =
            serde_json::from_str(s).map_err(|e| SpaceError::Json(e.to_string()))?;
        let mut support = Vec::with_capacity(file.support.len());
        for entry in file.support {
            let prob = parse_ratio(&entry.prob)
                .map_err(|e| SpaceError::BadFraction(e.to_string()))?;
            let mut point = Vec::with_capacity(entry.point.len());
            for &e in &entry.point {
                if e >= MAX_ALPHABET as u64 {
                    return Err(SpaceError::EntryOutOfRange {
                        entry: e as usize,
                        k: file.k,
                    });
                }
                point.push(e as u8);
            }
            support.push((point, prob));
        }
        Self::new(file.n, file.k, support)
    }
}

#[derive(Serialize, Deserialize)]
struct SpaceFile {
    n: usize,
    k: usize,
    support: Vec<PointFile>,
}

#[derive(Serialize, Deserialize)]
struct PointFile {
    point: Vec<u64>,
    prob: String,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn two_point() -> SampleSpace {
        // Uniform on {00, 11}.
        SampleSpace::uniform(2, 2, vec![vec![0, 0], vec![1, 1]]).unwrap()
    }

    fn three_point() -> SampleSpace {
        SampleSpace::new(
            3,
            2,
            vec![
                (vec![0, 0, 0], rat(1, 2)),
                (vec![0, 1, 1], rat(1, 4)),
                (vec![0, 1, 0], rat(1, 4)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn marginal_of_symmetric_two_point_space() {
        let m = two_point().marginal(0).unwrap();
        assert_eq!(m.probs(), &[rat(1, 2), rat(1, 2)]);
    }

    #[test]
    fn marginal_by_direct_summation() {
        // {000: 1/2, 011: 1/4, 010: 1/4}, j=2 -> (3/4, 1/4)
        let m = three_point().marginal(2).unwrap();
        assert_eq!(m.probs(), &[rat(3, 4), rat(1, 4)]);
    }

    #[test]
    fn marginal_index_out_of_range() {
        assert!(matches!(
            two_point().marginal(2),
            Err(SpaceError::IndexOutOfRange { j: 2, n: 2 })
        ));
    }

    #[test]
    fn shannon_entropy_values() {
        let single = SampleSpace::new(1, 2, vec![(vec![1], rat(1, 1))]).unwrap();
        assert_eq!(single.shannon_entropy(), 0.0);

        let uniform4 = SampleSpace::uniform(
            2,
            2,
            vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]],
        )
        .unwrap();
        assert_eq!(uniform4.shannon_entropy(), 2.0);

        // p = (1/2, 1/4, 1/4) -> 1.5 bits
        assert!((three_point().shannon_entropy() - 1.5).abs() < 1e-15);
    }

    #[test]
    fn min_entropy_values() {
        let uniform8 = SampleSpace::uniform(
            3,
            2,
            (0..8u8)
                .map(|v| vec![(v >> 2) & 1, (v >> 1) & 1, v & 1])
                .collect(),
        )
        .unwrap();
        assert_eq!(uniform8.min_entropy(), 3.0);
        assert_eq!(three_point().min_entropy(), 1.0);
        assert_eq!(three_point().max_point_probability(), rat(1, 2));
    }

    #[test]
    fn max_point_probability_uniform() {
        for m in [3usize, 5, 12] {
            let pts: Vec<Vec<u8>> = (0..m).map(|i| vec![(i % 2) as u8, (i / 2) as u8]).collect();
            let space = SampleSpace::uniform(2, MAX_ALPHABET.min(64), pts).unwrap();
            assert_eq!(space.max_point_probability(), rat(1, m as i64));
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            SampleSpace::new(0, 2, vec![]),
            Err(SpaceError::EmptyVariables)
        ));
        assert!(matches!(
            SampleSpace::new(1, 1, vec![(vec![0], rat(1, 1))]),
            Err(SpaceError::BadAlphabet(1))
        ));
        assert!(matches!(
            SampleSpace::new(2, 2, vec![(vec![0], rat(1, 1))]),
            Err(SpaceError::PointLength { .. })
        ));
        assert!(matches!(
            SampleSpace::new(1, 2, vec![(vec![2], rat(1, 1))]),
            Err(SpaceError::EntryOutOfRange { .. })
        ));
        assert!(matches!(
            SampleSpace::new(1, 2, vec![(vec![0], rat(1, 2))]),
            Err(SpaceError::BadTotalMass(_))
        ));
        assert!(matches!(
            SampleSpace::new(
                1,
                2,
                vec![(vec![0], rat(1, 2)), (vec![0], rat(1, 2))]
            ),
            Err(SpaceError::DuplicatePoint)
        ));
        assert!(matches!(
            SampleSpace::new(
                1,
                2,
                vec![(vec![0], rat(3, 2)), (vec![1], rat(-1, 2))]
            ),
            Err(SpaceError::NegativeProbability(_))
        ));
    }

    #[test]
    fn uniform_rejects_empty_point_list() {
        assert!(matches!(
            SampleSpace::uniform(2, 2, vec![]),
            Err(SpaceError::BadTotalMass(_))
        ));
    }

    #[test]
    fn zero_probability_points_are_dropped() {
        let space = SampleSpace::new(
            1,
            2,
            vec![(vec![0], rat(1, 1)), (vec![1], rat(0, 1))],
        )
        .unwrap();
        assert_eq!(space.support_size(), 1);
    }

    #[test]
    fn support_is_sorted_lexicographically() {
        let space = SampleSpace::new(
            2,
            2,
            vec![
                (vec![1, 1], rat(1, 3)),
                (vec![0, 1], rat(1, 3)),
                (vec![1, 0], rat(1, 3)),
            ],
        )
        .unwrap();
        let points: Vec<_> = space.support().iter().map(|(p, _)| p.clone()).collect();
        assert_eq!(points, vec![vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn json_round_trip_preserves_exact_probabilities() {
        let space = three_point();
        let json = space.to_json();
        let back = SampleSpace::from_json(&json).unwrap();
        assert_eq!(space, back);
        assert!(json.contains("\"1/4\""));
    }

    #[test]
    fn json_accepts_any_point_order() {
        let shuffled = r#"{"n":2,"k":2,"support":[
            {"point":[1,1],"prob":"1/2"},
            {"point":[0,0],"prob":"1/2"}]}"#;
        let space = SampleSpace::from_json(shuffled).unwrap();
        assert_eq!(space, two_point());
    }

    #[test]
    fn json_rejects_garbage() {
        assert!(matches!(
            SampleSpace::from_json("{\"n\": 2"),
            Err(SpaceError::Json(_))
        ));
        let dec = r#"{"n":1,"k":2,"support":[{"point":[0],"prob":"0.5"}]}"#;
        assert!(matches!(
            SampleSpace::from_json(dec),
            Err(SpaceError::BadFraction(_))
        ));
    }
}
