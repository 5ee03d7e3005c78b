//! Hadamard matrices: Sylvester (power-of-two orders) and Paley type I
//! (orders q+1 for primes q = 3 mod 4).

use super::ConstructError;

/// Desk-scale cap on Hadamard order.
pub const MAX_HADAMARD_ORDER: u64 = 1 << 20;

/// Square ±1 matrix with pairwise orthogonal rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HadamardMatrix {
    order: usize,
    entries: Vec<i8>,
}

impl HadamardMatrix {
    /// Wrap raw entries, verifying they are ±1 and the rows orthogonal.
    pub fn new(order: usize, entries: Vec<i8>) -> Result<Self, ConstructError> {
        if order == 0 || entries.len() != order * order {
            return Err(ConstructError::BadDimensions);
        }
        if entries.iter().any(|&e| e != 1 && e != -1) {
            return Err(ConstructError::NotSignMatrix);
        }
        let h = HadamardMatrix { order, entries };
        if !h.is_orthogonal() {
            return Err(ConstructError::NotOrthogonal);
        }
        Ok(h)
    }

    fn from_entries_unchecked(order: usize, entries: Vec<i8>) -> Self {
        HadamardMatrix { order, entries }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn entry(&self, r: usize, c: usize) -> i8 {
        self.entries[r * self.order + c]
    }

    pub fn row(&self, r: usize) -> &[i8] {
        &self.entries[r * self.order..(r + 1) * self.order]
    }

    /// Exact check of H * H^T = order * I. Rows are packed into sign
    /// bitmasks; two ±1 rows of length `order` are orthogonal iff they
    /// differ in exactly order/2 positions.
    pub fn is_orthogonal(&self) -> bool {
        let order = self.order;
        if order == 1 {
            return true;
        }
        if !order.is_multiple_of(2) {
            return false;
        }
        let words = order.div_ceil(64);
        let mut packed = vec![0u64; self.order * words];
        for r in 0..order {
            for c in 0..order {
                if self.entry(r, c) < 0 {
                    packed[r * words + c / 64] |= 1u64 << (c % 64);
                }
            }
        }
        for i in 0..order {
            for j in i + 1..order {
                let differ: u32 = packed[i * words..(i + 1) * words]
                    .iter()
                    .zip(&packed[j * words..(j + 1) * words])
                    .map(|(a, b)| (a ^ b).count_ones())
                    .sum();
                if differ as usize * 2 != order {
                    return false;
                }
            }
        }
        true
    }
}

/// Sylvester matrix of order 2^m: H_1 = [1], H_{2n} = [[H, H], [H, -H]].
pub fn sylvester_hadamard(m: u32) -> Result<HadamardMatrix, ConstructError> {
    if 1u64 << m > MAX_HADAMARD_ORDER {
        return Err(ConstructError::OrderCap {
            order: 1u64 << m,
            cap: MAX_HADAMARD_ORDER,
        });
    }
    let order = 1usize << m;
    let mut entries = vec![1i8; order * order];
    // entry(r, c) = (-1)^(popcount(r & c)) expands the tensor product.
    for r in 0..order {
        for c in 0..order {
            if (r & c).count_ones() % 2 == 1 {
                entries[r * order + c] = -1;
            }
        }
    }
    Ok(HadamardMatrix::from_entries_unchecked(order, entries))
}

/// Paley type-I matrix of order q+1 for a prime q = 3 (mod 4), built from the
/// quadratic-residue character: H = I + C with C the bordered skew
/// Jacobsthal matrix.
pub fn paley_hadamard(q: u64) -> Result<HadamardMatrix, ConstructError> {
    if !is_prime(q) {
        return Err(ConstructError::NotPrime(q));
    }
    if q % 4 != 3 {
        return Err(ConstructError::NotThreeModFour(q));
    }
    if q + 1 > MAX_HADAMARD_ORDER {
        return Err(ConstructError::OrderCap {
            order: q + 1,
            cap: MAX_HADAMARD_ORDER,
        });
    }
    let qu = q as usize;
    let order = qu + 1;
    // chi[x] = +1 for nonzero squares mod q, -1 for non-squares.
    let mut chi = vec![-1i8; qu];
    chi[0] = 0;
    for x in 1..q {
        chi[((x * x) % q) as usize] = 1;
    }
    let mut entries = vec![0i8; order * order];
    for r in 0..order {
        for c in 0..order {
            entries[r * order + c] = if r == c || r == 0 {
                1
            } else if c == 0 {
                -1
            } else {
                let diff = (r as u64 + q - c as u64) % q;
                chi[diff as usize]
            };
        }
    }
    Ok(HadamardMatrix::from_entries_unchecked(order, entries))
}

fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    if q.is_multiple_of(2) {
        return q == 2;
    }
    let mut f = 3;
    while f * f <= q {
        if q.is_multiple_of(f) {
            return false;
        }
        f += 2;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sylvester_base_cases() {
        let h1 = sylvester_hadamard(0).unwrap();
        assert_eq!(h1.order(), 1);
        assert_eq!(h1.entry(0, 0), 1);

        let h2 = sylvester_hadamard(1).unwrap();
        assert_eq!(h2.row(0), &[1, 1]);
        assert_eq!(h2.row(1), &[1, -1]);
    }

    #[test]
    fn sylvester_orthogonality() {
        for m in 0..=6 {
            let h = sylvester_hadamard(m).unwrap();
            assert!(h.is_orthogonal(), "order {}", h.order());
        }
    }

    #[test]
    fn sylvester_matches_tensor_expansion() {
        let h2 = sylvester_hadamard(1).unwrap();
        let h4 = sylvester_hadamard(2).unwrap();
        for r in 0..4 {
            for c in 0..4 {
                let expect = h2.entry(r / 2, c / 2) * h2.entry(r % 2, c % 2);
                assert_eq!(h4.entry(r, c), expect);
            }
        }
    }

    #[test]
    fn sylvester_order_cap() {
        assert!(matches!(
            sylvester_hadamard(21),
            Err(ConstructError::OrderCap { .. })
        ));
    }

    #[test]
    fn paley_orders() {
        for q in [3u64, 7, 11, 19, 23] {
            let h = paley_hadamard(q).unwrap();
            assert_eq!(h.order() as u64, q + 1);
            assert!(h.is_orthogonal(), "q={q}");
        }
    }

    #[test]
    fn paley_rejects_bad_moduli() {
        assert!(matches!(paley_hadamard(9), Err(ConstructError::NotPrime(9))));
        assert!(matches!(
            paley_hadamard(5),
            Err(ConstructError::NotThreeModFour(5))
        ));
        assert!(matches!(paley_hadamard(1), Err(ConstructError::NotPrime(1))));
    }

    #[test]
    fn new_validates_orthogonality() {
        assert!(HadamardMatrix::new(2, vec![1, 1, 1, -1]).is_ok());
        assert!(matches!(
            HadamardMatrix::new(2, vec![1, 1, 1, 1]),
            Err(ConstructError::NotOrthogonal)
        ));
        assert!(matches!(
            HadamardMatrix::new(2, vec![1, 0, 1, -1]),
            Err(ConstructError::NotSignMatrix)
        ));
        assert!(matches!(
            HadamardMatrix::new(2, vec![1, 1]),
            Err(ConstructError::BadDimensions)
        ));
    }
}
