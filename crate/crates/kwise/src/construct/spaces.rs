//! Sample spaces from codes and matrices.

use super::{BitMatrix, ConstructError, FieldGF2m, HadamardMatrix};
use crate::comb::SubsetIter;
use crate::space::SampleSpace;
use num_rational::BigRational;
use std::collections::BTreeMap;

/// Largest generator rank that gets materialized (2^rank support points).
pub const MAX_SPACE_RANK: usize = 24;

/// n pairwise independent balanced bits on n+1 points from an order-(n+1)
/// Hadamard matrix: rows whose first entry is -1 are negated, the first
/// column is deleted, and +1/-1 map to 0/1. Each remaining row is a support
/// point of probability 1/(n+1).
pub fn pairwise_space_from_hadamard(
    h: &HadamardMatrix,
) -> Result<SampleSpace, ConstructError> {
    let order = h.order();
    if order < 2 {
        return Err(ConstructError::OrderTooSmall);
    }
    let mut points = Vec::with_capacity(order);
    for r in 0..order {
        let sign = h.entry(r, 0);
        let point: Vec<u8> = (1..order)
            .map(|c| if h.entry(r, c) * sign == -1 { 1 } else { 0 })
            .collect();
        points.push(point);
    }
    Ok(SampleSpace::uniform(order - 1, 2, points)?)
}

/// The (l+1) x 2^l matrix behind the 3-wise construction: an all-ones top
/// row over columns that run through every l-bit vector. Column j carries
/// the big-endian binary expansion of j.
pub fn threewise_matrix(l: u32) -> BitMatrix {
    assert!(l >= 1, "need at least one expansion row");
    let cols = 1usize << l;
    let mut m = BitMatrix::zeros(l as usize + 1, cols);
    for j in 0..cols {
        m.set(0, j, true);
        for r in 0..l as usize {
            let bit = (j >> (l as usize - 1 - r)) & 1 == 1;
            m.set(r + 1, j, bit);
        }
    }
    m
}

/// Uniform space on the row space of [`threewise_matrix`]: n = 2^l 3-wise
/// independent balanced bits on 2^{l+1} points.
pub fn threewise_space(l: u32) -> Result<SampleSpace, ConstructError> {
    if l as usize + 1 > MAX_SPACE_RANK {
        return Err(ConstructError::RankCap {
            rank: l as usize + 1,
            cap: MAX_SPACE_RANK,
        });
    }
    let m = threewise_matrix(l);
    row_space_uniform(&m)
}

/// Parity-check matrix of the length-(2^m - 1) Hamming code: column j
/// (0-based) is the big-endian m-bit expansion of j+1, so the columns run
/// through every nonzero m-bit vector.
pub fn hamming_parity_check(m: u32) -> BitMatrix {
    assert!(m >= 1);
    let cols = (1usize << m) - 1;
    let mut h = BitMatrix::zeros(m as usize, cols);
    for j in 0..cols {
        let value = j + 1;
        for r in 0..m as usize {
            let bit = (value >> (m as usize - 1 - r)) & 1 == 1;
            h.set(r, j, bit);
        }
    }
    h
}

/// Parity-check matrix of the binary BCH code of length 2^m - 1 with
/// designed distance 2t+1. Block b (of t) holds the GF(2) expansion of the
/// row (alpha^{(2b+1) j})_j; within a block, row r is the coefficient of x^r.
/// The mt rows must come out linearly independent, which is verified rather
/// than assumed.
pub fn bch_parity_check(field: &FieldGF2m, t: u32) -> Result<BitMatrix, ConstructError> {
    let m = field.m();
    let cols = (1usize << m) - 1;
    if t == 0 || 2 * t as usize + 1 > cols {
        return Err(ConstructError::DesignedDistanceTooLarge { m, t });
    }
    let rows = (m * t) as usize;
    let mut h = BitMatrix::zeros(rows, cols);
    for b in 0..t {
        let e = (2 * b + 1) as u64;
        for j in 0..cols {
            let elem = field.alpha_pow(e * j as u64);
            for r in 0..m {
                if elem >> r & 1 == 1 {
                    h.set((b * m + r) as usize, j, true);
                }
            }
        }
    }
    let rank = h.rank();
    if rank != rows {
        return Err(ConstructError::RankDeficient {
            expected: rows,
            found: rank,
        });
    }
    Ok(h)
}

/// Extend a parity-check matrix for the odd-d step: a zero column in front
/// and an all-ones row on top, taking an every-(d-1)-columns-independent
/// matrix on 2^m - 1 columns to an every-d-columns-independent matrix on
/// 2^m columns. Extending the Hamming matrix this way reproduces
/// [`threewise_matrix`] exactly.
pub fn extend_for_odd_d(parity_check: &BitMatrix) -> BitMatrix {
    let rows = parity_check.rows();
    let cols = parity_check.cols();
    let mut out = BitMatrix::zeros(rows + 1, cols + 1);
    for c in 0..cols + 1 {
        out.set(0, c, true);
    }
    for r in 0..rows {
        for c in 0..cols {
            if parity_check.get(r, c) {
                out.set(r + 1, c + 1, true);
            }
        }
    }
    out
}

/// Uniform space on the row space of a generator whose every d columns are
/// linearly independent: n = cols variables, 2^rank points, d-wise
/// independent balanced bits with min-entropy exactly rank.
pub fn dwise_space_from_code(
    generator: &BitMatrix,
    d: usize,
) -> Result<SampleSpace, ConstructError> {
    let rows = generator.rows();
    let cols = generator.cols();
    if d < 1 || d > cols {
        return Err(ConstructError::OrderOutOfRange { d, n: cols });
    }
    if rows > MAX_SPACE_RANK {
        return Err(ConstructError::RankCap {
            rank: rows,
            cap: MAX_SPACE_RANK,
        });
    }
    let rank = generator.rank();
    if rank != rows {
        return Err(ConstructError::RankDeficient {
            expected: rows,
            found: rank,
        });
    }
    if let Some(subset) = generator.first_dependent_column_subset(d) {
        return Err(ConstructError::DependentColumns(subset));
    }
    row_space_uniform(generator)
}

/// Enumerate the full row space of a full-rank matrix (Gray-code order) and
/// return the uniform distribution on it.
fn row_space_uniform(m: &BitMatrix) -> Result<SampleSpace, ConstructError> {
    let rows = m.rows();
    let cols = m.cols();
    debug_assert!(rows <= MAX_SPACE_RANK);
    let words = m.words_per_row();
    let mut acc = vec![0u64; words];
    let total = 1usize << rows;
    let mut points = Vec::with_capacity(total);
    points.push(unpack_bits(&acc, cols));
    for i in 1..total {
        let flip = i.trailing_zeros() as usize;
        m.xor_row_into(flip, &mut acc);
        points.push(unpack_bits(&acc, cols));
    }
    Ok(SampleSpace::uniform(cols, 2, points)?)
}

fn unpack_bits(words: &[u64], cols: usize) -> Vec<u8> {
    (0..cols).map(|c| (words[c / 64] >> (c % 64) & 1) as u8).collect()
}

/// Parity lifting: map a d-wise independent binary space to the pairwise
/// independent family of subset parities.
///
/// For even d the output variables are the parities over every nonempty
/// subset of at most d/2 input variables; for odd d, subsets of at most
/// (d-1)/2 variables plus the subsets {0} u s with |s| = (d-1)/2 and 0 not
/// in s. Subsets are ordered by size, lexicographically within a size, and
/// the output inherits each point's exact probability.
pub fn xor_lift(space: &SampleSpace, d: usize) -> Result<SampleSpace, ConstructError> {
    if space.k() != 2 {
        return Err(ConstructError::NonBinarySpace { k: space.k() });
    }
    let n = space.n();
    if d < 2 || d > n {
        return Err(ConstructError::OrderOutOfRange { d, n });
    }
    let mut subsets: Vec<Vec<usize>> = Vec::new();
    let small = if d.is_multiple_of(2) { d / 2 } else { (d - 1) / 2 };
    for size in 1..=small {
        let mut it = SubsetIter::new(n, size);
        while it.advance() {
            subsets.push(it.current().to_vec());
        }
    }
    if d % 2 == 1 {
        // {0} u s over the remaining n-1 variables.
        let size = (d - 1) / 2;
        let mut it = SubsetIter::new(n - 1, size);
        while it.advance() {
            let mut s: Vec<usize> = Vec::with_capacity(size + 1);
            s.push(0);
            s.extend(it.current().iter().map(|&i| i + 1));
            subsets.push(s);
        }
    }
    let m = subsets.len();
    let mut merged: BTreeMap<Vec<u8>, BigRational> = BTreeMap::new();
    for (point, prob) in space.support() {
        let lifted: Vec<u8> = subsets
            .iter()
            .map(|s| s.iter().fold(0u8, |acc, &j| acc ^ point[j]))
            .collect();
        *merged.entry(lifted).or_default() += prob;
    }
    Ok(SampleSpace::new(m, 2, merged.into_iter().collect())?)
}

#[cfg(test)]
mod tests {
    use super::super::{paley_hadamard, sylvester_hadamard};
    use super::*;
    use crate::rational::rat;

    #[test]
    fn hadamard_order_two_gives_one_fair_bit() {
        let h = sylvester_hadamard(1).unwrap();
        let space = pairwise_space_from_hadamard(&h).unwrap();
        assert_eq!(space.n(), 1);
        assert_eq!(space.support_size(), 2);
        assert_eq!(space.marginal(0).unwrap().probs(), &[rat(1, 2), rat(1, 2)]);
    }

    #[test]
    fn hadamard_order_four_space() {
        let h = sylvester_hadamard(2).unwrap();
        let space = pairwise_space_from_hadamard(&h).unwrap();
        assert_eq!(space.n(), 3);
        assert_eq!(space.support_size(), 4);
        assert_eq!(space.max_point_probability(), rat(1, 4));
        assert_eq!(space.min_entropy(), 2.0);
        for j in 0..3 {
            assert_eq!(space.marginal(j).unwrap().probs(), &[rat(1, 2), rat(1, 2)]);
        }
    }

    #[test]
    fn hadamard_normalization_handles_negative_first_column() {
        // Paley matrices have -1 first-column entries below the first row.
        let h = paley_hadamard(3).unwrap();
        let space = pairwise_space_from_hadamard(&h).unwrap();
        assert_eq!(space.n(), 3);
        assert_eq!(space.support_size(), 4);
        for j in 0..3 {
            assert_eq!(space.marginal(j).unwrap().probs(), &[rat(1, 2), rat(1, 2)]);
        }
    }

    #[test]
    fn order_one_matrix_is_rejected() {
        let h = sylvester_hadamard(0).unwrap();
        assert!(matches!(
            pairwise_space_from_hadamard(&h),
            Err(ConstructError::OrderTooSmall)
        ));
    }

    #[test]
    fn threewise_matrix_layout() {
        let m = threewise_matrix(2);
        assert_eq!(m.to_text(), "3 4\n1111\n0011\n0101\n");
    }

    #[test]
    fn threewise_space_size_and_entropy() {
        for l in [2u32, 3] {
            let space = threewise_space(l).unwrap();
            assert_eq!(space.n(), 1 << l);
            assert_eq!(space.support_size(), 1 << (l + 1));
            assert_eq!(space.min_entropy(), (l + 1) as f64);
            assert_eq!(
                space.max_point_probability(),
                rat(1, 1i64 << (l + 1))
            );
        }
    }

    #[test]
    fn hamming_matrix_columns_are_nonzero_vectors() {
        let h = hamming_parity_check(4);
        assert_eq!((h.rows(), h.cols()), (4, 15));
        let mut seen = [false; 16];
        for j in 0..15 {
            let mut v = 0usize;
            for r in 0..4 {
                v = v << 1 | h.get(r, j) as usize;
            }
            assert!(v != 0 && !seen[v]);
            seen[v] = true;
        }
        assert_eq!(h.rank(), 4);
    }

    #[test]
    fn extended_hamming_equals_threewise_matrix() {
        for m in [2u32, 3, 4] {
            let extended = extend_for_odd_d(&hamming_parity_check(m));
            assert_eq!(extended, threewise_matrix(m), "m={m}");
        }
    }

    #[test]
    fn extend_one_by_one() {
        let mut one = BitMatrix::zeros(1, 1);
        one.set(0, 0, true);
        let ext = extend_for_odd_d(&one);
        assert_eq!(ext.to_text(), "2 2\n11\n01\n");
    }

    #[test]
    fn bch_t1_is_hamming_up_to_column_order() {
        let field = FieldGF2m::new(4).unwrap();
        let h = bch_parity_check(&field, 1).unwrap();
        assert_eq!((h.rows(), h.cols()), (4, 15));
        // Columns are alpha^j: all nonzero 4-bit values, each exactly once.
        let mut seen = [false; 16];
        for j in 0..15 {
            let mut v = 0usize;
            for r in 0..4 {
                v |= (h.get(r, j) as usize) << r;
            }
            assert!(v != 0 && !seen[v]);
            seen[v] = true;
        }
    }

    #[test]
    fn bch_m4_t2_rank_eight() {
        let field = FieldGF2m::new(4).unwrap();
        let h = bch_parity_check(&field, 2).unwrap();
        assert_eq!((h.rows(), h.cols()), (8, 15));
        assert_eq!(h.rank(), 8);
    }

    #[test]
    fn bch_m5_t2_rank_ten() {
        let field = FieldGF2m::new(5).unwrap();
        let h = bch_parity_check(&field, 2).unwrap();
        assert_eq!((h.rows(), h.cols()), (10, 31));
        assert_eq!(h.rank(), 10);
    }

    #[test]
    fn bch_rank_deficiency_detected() {
        // alpha^5 lies in the GF(4) subfield for m=4, so its block only
        // contributes two independent rows: mt = 12 rows, rank 10.
        let field = FieldGF2m::new(4).unwrap();
        assert!(matches!(
            bch_parity_check(&field, 3),
            Err(ConstructError::RankDeficient {
                expected: 12,
                found: 10
            })
        ));
    }

    #[test]
    fn bch_designed_distance_cap() {
        let field = FieldGF2m::new(4).unwrap();
        assert!(matches!(
            bch_parity_check(&field, 8),
            Err(ConstructError::DesignedDistanceTooLarge { .. })
        ));
    }

    #[test]
    fn dwise_space_from_identity_is_product_space() {
        let mut id = BitMatrix::zeros(3, 3);
        for i in 0..3 {
            id.set(i, i, true);
        }
        let space = dwise_space_from_code(&id, 3).unwrap();
        assert_eq!(space.n(), 3);
        assert_eq!(space.support_size(), 8);
        assert_eq!(space.min_entropy(), 3.0);
    }

    #[test]
    fn dwise_space_rejects_rank_deficiency_and_dependent_columns() {
        let mut m = BitMatrix::zeros(2, 3);
        m.set(0, 0, true);
        m.set(1, 0, true); // equal rows
        assert!(matches!(
            dwise_space_from_code(&m, 1),
            Err(ConstructError::RankDeficient { .. })
        ));

        // Full rank with column 2 = column 0 + column 1: pairs are fine but
        // the triple is dependent.
        let mut dep = BitMatrix::zeros(2, 3);
        dep.set(0, 0, true);
        dep.set(1, 1, true);
        dep.set(0, 2, true);
        dep.set(1, 2, true);
        assert!(dwise_space_from_code(&dep, 2).is_ok());
        assert!(matches!(
            dwise_space_from_code(&dep, 3),
            Err(ConstructError::DependentColumns(s)) if s == vec![0, 1, 2]
        ));

        // Duplicated column: the pair {0, 2} is dependent.
        let mut dup = BitMatrix::zeros(2, 3);
        dup.set(0, 0, true);
        dup.set(1, 1, true);
        dup.set(0, 2, true);
        assert!(matches!(
            dwise_space_from_code(&dup, 2),
            Err(ConstructError::DependentColumns(s)) if s == vec![0, 2]
        ));
    }

    #[test]
    fn dwise_space_hamming_pairwise() {
        let h = hamming_parity_check(4);
        let space = dwise_space_from_code(&h, 2).unwrap();
        assert_eq!(space.n(), 15);
        assert_eq!(space.support_size(), 16);
        assert_eq!(space.min_entropy(), 4.0);
    }

    #[test]
    fn xor_lift_identity_at_d2() {
        let space = threewise_space(2).unwrap();
        let lifted = xor_lift(&space, 2).unwrap();
        assert_eq!(&lifted, &space);
    }

    #[test]
    fn xor_lift_threewise_gives_seven_variables() {
        let space = threewise_space(2).unwrap();
        let lifted = xor_lift(&space, 3).unwrap();
        assert_eq!(lifted.n(), 7);
        assert_eq!(lifted.support_size(), 8);
        for j in 0..7 {
            assert_eq!(
                lifted.marginal(j).unwrap().probs(),
                &[rat(1, 2), rat(1, 2)]
            );
        }
    }

    #[test]
    fn xor_lift_rejects_non_binary() {
        let trits = SampleSpace::uniform(2, 3, vec![vec![0, 0], vec![1, 1], vec![2, 2]]).unwrap();
        assert!(matches!(
            xor_lift(&trits, 2),
            Err(ConstructError::NonBinarySpace { k: 3 })
        ));
    }
}
