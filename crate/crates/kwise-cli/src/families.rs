//! Shared construction dispatch for `construct` and `report`.

use crate::Family;
use kwise::construct::{
    bch_parity_check, dwise_space_from_code, extend_for_odd_d, paley_hadamard,
    pairwise_space_from_hadamard, sylvester_hadamard, threewise_matrix, threewise_space,
    xor_lift, BitMatrix, FieldGF2m, HadamardMatrix,
};
use kwise::SampleSpace;
use std::collections::BTreeMap;

pub struct Construction {
    pub family: &'static str,
    pub params: BTreeMap<&'static str, u64>,
    /// Independence order the construction guarantees.
    pub d: usize,
    pub space: SampleSpace,
    /// Generator/code matrix, when the family has one.
    pub matrix: Option<BitMatrix>,
}

/// Desk-scale caps, enforced analytically before any construction work:
/// at most 2^24 support points and at most 10^9 elementary checks
/// (C(n,d) subsets times k^d value tuples) for anything downstream.
pub const SUPPORT_CAP: u128 = 1 << 24;
pub const CHECK_CAP: u128 = 1_000_000_000;

pub fn support_cap(points: u128) -> Result<(), String> {
    if points > SUPPORT_CAP {
        return Err(format!(
            "cap exceeded: {points} support points is over the 2^24 cap"
        ));
    }
    Ok(())
}

fn binomial_u128(n: u128, d: u128) -> Option<u128> {
    if d > n {
        return Some(0);
    }
    let d = d.min(n - d);
    let mut acc: u128 = 1;
    for i in 0..d {
        acc = acc.checked_mul(n - i)?;
        acc /= i + 1;
    }
    Some(acc)
}

pub fn check_cap(n: usize, d: usize, k: usize) -> Result<(), String> {
    let checks = binomial_u128(n as u128, d as u128).zip((k as u128).checked_pow(d as u32))
        .and_then(|(subsets, tuples)| subsets.checked_mul(tuples));
    if checks.is_none_or(|c| c > CHECK_CAP) {
        return Err(format!(
            "cap exceeded: C({n},{d}) * {k}^{d} is over the 10^9 check budget"
        ));
    }
    Ok(())
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::HadamardSylvester => "hadamard-sylvester",
            Family::HadamardPaley => "hadamard-paley",
            Family::Pairwise => "pairwise",
            Family::Threewise => "threewise",
            Family::BchEven => "bch-even",
            Family::BchOdd => "bch-odd",
            Family::XorLift => "xor-lift",
            Family::Code => "code",
        }
    }
}

fn code_matrix_of_space(space: &SampleSpace) -> BitMatrix {
    let mut m = BitMatrix::zeros(space.support_size(), space.n());
    for (r, (point, _)) in space.support().iter().enumerate() {
        for (c, &bit) in point.iter().enumerate() {
            if bit == 1 {
                m.set(r, c, true);
            }
        }
    }
    m
}

fn hadamard_construction(
    family: &'static str,
    key: &'static str,
    value: u64,
    h: &HadamardMatrix,
) -> Result<Construction, String> {
    let space = pairwise_space_from_hadamard(h).map_err(|e| e.to_string())?;
    let matrix = Some(code_matrix_of_space(&space));
    Ok(Construction {
        family,
        params: BTreeMap::from([(key, value)]),
        d: 2,
        space,
        matrix,
    })
}

pub fn sylvester(m: u32) -> Result<Construction, String> {
    if m >= 64 {
        return Err(format!("cap exceeded: order 2^{m} is over the 2^24 cap"));
    }
    support_cap(1u128 << m)?;
    check_cap((1usize << m) - 1, 2, 2)?;
    let h = sylvester_hadamard(m).map_err(|e| e.to_string())?;
    hadamard_construction("hadamard-sylvester", "m", m as u64, &h)
}

pub fn paley(q: u64) -> Result<Construction, String> {
    support_cap(q as u128 + 1)?;
    check_cap(q as usize, 2, 2)?;
    let h = paley_hadamard(q).map_err(|e| e.to_string())?;
    hadamard_construction("hadamard-paley", "q", q, &h)
}

/// `pairwise --n N` picks a Hadamard source automatically: Sylvester when
/// n+1 is a power of two, Paley when n is a prime congruent to 3 mod 4.
pub fn pairwise(n: u64) -> Result<Construction, String> {
    support_cap(n as u128 + 1)?;
    check_cap(n as usize, 2, 2)?;
    let order = n + 1;
    if order >= 2 && order.is_power_of_two() {
        let h = sylvester_hadamard(order.trailing_zeros()).map_err(|e| e.to_string())?;
        let mut c = hadamard_construction("pairwise", "n", n, &h)?;
        c.params.insert("order", order);
        return Ok(c);
    }
    match paley_hadamard(n) {
        Ok(h) => {
            let mut c = hadamard_construction("pairwise", "n", n, &h)?;
            c.params.insert("order", order);
            Ok(c)
        }
        Err(_) => Err(format!(
            "no built-in Hadamard construction for n={n}: need n+1 a power of two \
             or n a prime congruent to 3 mod 4"
        )),
    }
}

pub fn threewise(l: u32) -> Result<Construction, String> {
    if l >= 64 {
        return Err(format!("cap exceeded: 2^{} support points is over the 2^24 cap", l + 1));
    }
    support_cap(1u128 << (l + 1))?;
    check_cap(1usize << l, 3, 2)?;
    let space = threewise_space(l).map_err(|e| e.to_string())?;
    Ok(Construction {
        family: "threewise",
        params: BTreeMap::from([("l", l as u64)]),
        d: 3,
        space,
        matrix: Some(threewise_matrix(l)),
    })
}

pub fn bch_even(m: u32, t: u32) -> Result<Construction, String> {
    let field = FieldGF2m::new(m).map_err(|e| e.to_string())?;
    let d = 2 * t as usize;
    support_cap(1u128.checked_shl(m * t).unwrap_or(u128::MAX))?;
    check_cap((1usize << m) - 1, d, 2)?;
    let parity = bch_parity_check(&field, t).map_err(|e| e.to_string())?;
    let space = dwise_space_from_code(&parity, d).map_err(|e| e.to_string())?;
    Ok(Construction {
        family: "bch-even",
        params: BTreeMap::from([("m", m as u64), ("t", t as u64)]),
        d,
        space,
        matrix: Some(parity),
    })
}

pub fn bch_odd(m: u32, t: u32) -> Result<Construction, String> {
    let field = FieldGF2m::new(m).map_err(|e| e.to_string())?;
    let d = 2 * t as usize + 1;
    support_cap(1u128.checked_shl(m * t + 1).unwrap_or(u128::MAX))?;
    check_cap(1usize << m, d, 2)?;
    let parity = bch_parity_check(&field, t).map_err(|e| e.to_string())?;
    let extended = extend_for_odd_d(&parity);
    let space = dwise_space_from_code(&extended, d).map_err(|e| e.to_string())?;
    Ok(Construction {
        family: "bch-odd",
        params: BTreeMap::from([("m", m as u64), ("t", t as u64)]),
        d,
        space,
        matrix: Some(extended),
    })
}

/// Lift a d-wise independent input space to its pairwise independent
/// subset parities. The result is a d=2 construction.
pub fn lift(space: &SampleSpace, input_d: usize) -> Result<Construction, String> {
    // Output variable count, checked before materializing anything.
    let n = space.n() as u128;
    let small = if input_d.is_multiple_of(2) { input_d / 2 } else { input_d.saturating_sub(1) / 2 };
    let mut out_vars: Option<u128> = Some(0);
    for size in 1..=small {
        out_vars = out_vars
            .and_then(|v| binomial_u128(n, size as u128).and_then(|b| v.checked_add(b)));
    }
    if input_d % 2 == 1 && n > 0 {
        out_vars = out_vars
            .and_then(|v| binomial_u128(n - 1, small as u128).and_then(|b| v.checked_add(b)));
    }
    match out_vars {
        Some(v) if v <= usize::MAX as u128 => check_cap(v as usize, 2, 2)?,
        _ => return Err("cap exceeded: lifted variable count overflows the check budget".into()),
    }
    let lifted = xor_lift(space, input_d).map_err(|e| e.to_string())?;
    Ok(Construction {
        family: "xor-lift",
        params: BTreeMap::from([("input-d", input_d as u64), ("input-n", space.n() as u64)]),
        d: 2,
        space: lifted,
        matrix: None,
    })
}

/// Build the uniform row-space distribution of a generator matrix read from
/// the text format, claiming d-wise independence (verified against the
/// generator's columns by the library).
pub fn code(matrix: &BitMatrix, d: usize) -> Result<Construction, String> {
    if matrix.rows() >= 64 {
        return Err(format!(
            "cap exceeded: 2^{} support points is over the 2^24 cap",
            matrix.rows()
        ));
    }
    support_cap(1u128 << matrix.rows())?;
    check_cap(matrix.cols(), d, 2)?;
    let space = dwise_space_from_code(matrix, d).map_err(|e| e.to_string())?;
    Ok(Construction {
        family: "code",
        params: BTreeMap::from([("rows", matrix.rows() as u64), ("d", d as u64)]),
        d,
        space,
        matrix: Some(matrix.clone()),
    })
}
