//! GF(2^m) arithmetic via log/antilog tables over a primitive polynomial.

use super::ConstructError;

/// Supported extension degrees for the built-in polynomial table.
pub const MIN_DEGREE: u32 = 2;
pub const MAX_DEGREE: u32 = 16;

/// Lowest-weight, lexicographically least primitive polynomial per degree,
/// stored as a bitmask with both the x^m and constant terms set. Fixing the
/// polynomial makes every generated matrix reproducible across runs.
const PRIMITIVE_POLYS: [u32; (MAX_DEGREE - MIN_DEGREE + 1) as usize] = [
    0x7,     // m=2:  x^2+x+1
    0xB,     // m=3:  x^3+x+1
    0x13,    // m=4:  x^4+x+1
    0x25,    // m=5:  x^5+x^2+1
    0x43,    // m=6:  x^6+x+1
    0x83,    // m=7:  x^7+x+1
    0x11D,   // m=8:  x^8+x^4+x^3+x^2+1
    0x211,   // m=9:  x^9+x^4+1
    0x409,   // m=10: x^10+x^3+1
    0x805,   // m=11: x^11+x^2+1
    0x1053,  // m=12: x^12+x^6+x^4+x+1
    0x201B,  // m=13: x^13+x^4+x^3+x+1
    0x402B,  // m=14: x^14+x^5+x^3+x+1
    0x8003,  // m=15: x^15+x+1
    0x1002D, // m=16: x^16+x^5+x^3+x^2+1
];

/// Arithmetic context for GF(2^m) with a fixed primitive polynomial.
///
/// `alpha` (the residue class of x) generates the full multiplicative group;
/// elements are bitmasks of polynomial coefficients, bit i = coefficient of
/// x^i.
#[derive(Debug, Clone)]
pub struct FieldGF2m {
    m: u32,
    poly: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl FieldGF2m {
    /// Field with the built-in primitive polynomial for degree `m`.
    pub fn new(m: u32) -> Result<Self, ConstructError> {
        if !(MIN_DEGREE..=MAX_DEGREE).contains(&m) {
            return Err(ConstructError::UnsupportedDegree(m));
        }
        Self::with_polynomial(m, PRIMITIVE_POLYS[(m - MIN_DEGREE) as usize])
    }

    /// Field over a caller-chosen polynomial; fails unless x generates the
    /// whole multiplicative group (i.e. the polynomial is primitive).
    pub fn with_polynomial(m: u32, poly: u32) -> Result<Self, ConstructError> {
        if !(MIN_DEGREE..=MAX_DEGREE).contains(&m) {
            return Err(ConstructError::UnsupportedDegree(m));
        }
        if poly >> m != 1 || poly & 1 == 0 {
            return Err(ConstructError::NotPrimitive { m, poly });
        }
        let size = (1u32 << m) - 1;
        let mut exp = vec![0u32; size as usize];
        let mut log = vec![0u32; 1usize << m];
        let mut cur = 1u32;
        for i in 0..size {
            if i > 0 && cur == 1 {
                // x has smaller multiplicative order: not primitive.
                return Err(ConstructError::NotPrimitive { m, poly });
            }
            exp[i as usize] = cur;
            log[cur as usize] = i;
            cur <<= 1;
            if cur >> m & 1 == 1 {
                cur ^= poly;
            }
        }
        if cur != 1 {
            return Err(ConstructError::NotPrimitive { m, poly });
        }
        Ok(FieldGF2m { m, poly, exp, log })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn polynomial(&self) -> u32 {
        self.poly
    }

    /// Order of the multiplicative group, 2^m - 1.
    pub fn group_order(&self) -> u64 {
        (1u64 << self.m) - 1
    }

    /// alpha^e for any exponent (reduced mod 2^m - 1).
    pub fn alpha_pow(&self, e: u64) -> u32 {
        self.exp[(e % self.group_order()) as usize]
    }

    /// Discrete log base alpha of a nonzero element.
    pub fn log(&self, x: u32) -> u32 {
        assert!(x != 0 && x < (1 << self.m), "log of zero or out-of-range element");
        self.log[x as usize]
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let s = (self.log(a) as u64 + self.log(b) as u64) % self.group_order();
        self.exp[s as usize]
    }
}
