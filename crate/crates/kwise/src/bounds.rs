//! Entropy and min-entropy lower bounds for pairwise and d-wise independent
//! variables, evaluated as formulas.
//!
//! Inner sums (odds ratios, binomial sums, the variance of the odds-sum
//! variable) are computed as exact rationals or big integers; floats enter
//! only inside logarithms and the one-dimensional supremum over t. The
//! supremum is found by a dense scan followed by golden-section refinement
//! of every local bracket — nothing is proved about the shape of the
//! objective, so the scan guards against multimodality.

use crate::rational::{format_ratio, log2_bigint, ratio_to_f64};
use crate::space::{SampleSpace, SpaceError};
use crate::verify::WitnessMatrix;
use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BoundsError {
    #[error("marginal list must be nonempty")]
    EmptyMarginals,
    #[error("marginal q_{index} must satisfy 0 < q < 1")]
    DegenerateQ { index: usize },
    #[error("uniform q must lie in (0, 1/2]")]
    QOutOfRange,
    #[error("w must lie in [1/k, 1); no distribution over {k} values has max probability {w}")]
    WOutOfRange { w: String, k: usize },
    #[error("alphabet size {0} must be at least 2")]
    BadAlphabet(usize),
    #[error("independence order {d} out of range 2..={n}")]
    OrderOutOfRange { d: usize, n: usize },
    #[error("phase-angle preconditions violated: {0}")]
    PhasePrecondition(String),
    #[error("marginal of variable {index} is deterministic")]
    DeterministicMarginal { index: usize },
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// Which lower bound a report carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundName {
    EntropyPairwise,
    EntropyPairwiseUniformQ,
    MinEntropyPairwise,
    MinEntropyFinite,
    MinEntropyDwise,
}

impl BoundName {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundName::EntropyPairwise => "entropy-pairwise",
            BoundName::EntropyPairwiseUniformQ => "entropy-pairwise-uniform-q",
            BoundName::MinEntropyPairwise => "min-entropy-pairwise",
            BoundName::MinEntropyFinite => "min-entropy-finite",
            BoundName::MinEntropyDwise => "min-entropy-dwise",
        }
    }
}

/// How the supremum over t was obtained.
#[derive(Debug, Clone, Serialize)]
pub struct OptimizerInfo {
    /// Maximizer in (0, n]; absent when the supremum is a t -> 0 limit.
    pub t_star: Option<f64>,
    pub iterations: u64,
    /// True when the value is the boundary limit rather than an interior max.
    pub boundary: bool,
}

/// One evaluated lower bound with its inputs.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    #[serde(rename = "bound_name")]
    pub name: BoundName,
    pub n: usize,
    pub d: usize,
    pub value_bits: f64,
    pub params: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub optimizer: Option<OptimizerInfo>,
}

const SCAN_POINTS: usize = 1024;
const T_WIDTH_TOLERANCE: f64 = 1e-12;

struct Maximum {
    t: f64,
    value: f64,
    iterations: u64,
}

/// Golden-section refinement of a maximum inside [lo, hi].
fn golden_max(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> Maximum {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let mut iterations = 0u64;
    let mut c = hi - INVPHI * (hi - lo);
    let mut d = lo + INVPHI * (hi - lo);
    let mut fc = f(c);
    let mut fd = f(d);
    while hi - lo > T_WIDTH_TOLERANCE && iterations < 200 {
        iterations += 1;
        if fc >= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INVPHI * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INVPHI * (hi - lo);
            fd = f(d);
        }
    }
    let t = 0.5 * (lo + hi);
    Maximum {
        t,
        value: f(t),
        iterations,
    }
}

/// Maximize f over (0, hi]: scan SCAN_POINTS grid points, then refine every
/// local bracket.
fn maximize_over_t(f: &dyn Fn(f64) -> f64, hi: f64) -> Maximum {
    let step = hi / SCAN_POINTS as f64;
    let ts: Vec<f64> = (1..=SCAN_POINTS).map(|i| step * i as f64).collect();
    let values: Vec<f64> = ts.iter().map(|&t| f(t)).collect();
    let mut best = Maximum {
        t: ts[0],
        value: values[0],
        iterations: 0,
    };
    let mut total_iterations = 0u64;
    for i in 0..SCAN_POINTS {
        let left_ok = i == 0 || values[i] >= values[i - 1];
        let right_ok = i + 1 == SCAN_POINTS || values[i] >= values[i + 1];
        if !(left_ok && right_ok) {
            continue;
        }
        let lo = if i == 0 { 0.0 } else { ts[i - 1] };
        let hi_bracket = if i + 1 == SCAN_POINTS { hi } else { ts[i + 1] };
        let refined = golden_max(f, lo, hi_bracket);
        total_iterations += refined.iterations;
        if refined.value > best.value {
            best = refined;
        }
    }
    best.iterations = total_iterations;
    best
}

fn validate_marginals(q: &[BigRational]) -> Result<(), BoundsError> {
    if q.is_empty() {
        return Err(BoundsError::EmptyMarginals);
    }
    for (index, qj) in q.iter().enumerate() {
        if !qj.is_positive() || *qj >= BigRational::one() {
            return Err(BoundsError::DegenerateQ { index });
        }
    }
    Ok(())
}

fn q_list_param(q: &[BigRational]) -> String {
    q.iter().map(format_ratio).collect::<Vec<_>>().join(",")
}

/// Entropy lower bound for pairwise independent binary variables with
/// marginals q_j = Pr[X_j = 1]:
///
///   H(X) >= sup over 0 < t <= n of
///     log2(n+1-t) / (1 + (1/t^2) * sum_j (1-2q_j)^2 / (q_j(1-q_j)))
///
/// The inner sum (the variance of the odds-sum variable) is exact. When it
/// vanishes (all q_j = 1/2) the supremum is the t -> 0 limit log2(n+1),
/// reported with the boundary flag instead of a maximizer.
pub fn entropy_bound_pairwise(q: &[BigRational]) -> Result<BoundReport, BoundsError> {
    validate_marginals(q)?;
    let n = q.len();
    let mut variance = BigRational::zero();
    for qj in q {
        let centered = BigRational::one() - qj - qj;
        let denom = qj * &(BigRational::one() - qj);
        variance += &centered * &centered / denom;
    }
    let mut params = BTreeMap::new();
    params.insert("q".into(), q_list_param(q));
    params.insert("odds_sum_variance".into(), format_ratio(&variance));
    if variance.is_zero() {
        return Ok(BoundReport {
            name: BoundName::EntropyPairwise,
            n,
            d: 2,
            value_bits: (n as f64 + 1.0).log2(),
            params,
            optimizer: Some(OptimizerInfo {
                t_star: None,
                iterations: 0,
                boundary: true,
            }),
        });
    }
    let var_f = ratio_to_f64(&variance);
    let nf = n as f64;
    let objective = move |t: f64| (nf + 1.0 - t).log2() / (1.0 + var_f / (t * t));
    let best = maximize_over_t(&objective, nf);
    Ok(BoundReport {
        name: BoundName::EntropyPairwise,
        n,
        d: 2,
        value_bits: best.value,
        params,
        optimizer: Some(OptimizerInfo {
            t_star: Some(best.t),
            iterations: best.iterations,
            boundary: false,
        }),
    })
}

/// Specialized entropy bound when all marginals satisfy q <= q_j <= 1/2:
///
///   H(X) >= sup over 0 < t <= n of log2(n+1-t) / (1 + n/(t^2 q))
///
/// Also evaluates the closed t = n/2 form log2(n/2+1)/(1 + 4/(nq)) for
/// cross-checking (reported in params as `t_half_bits`).
pub fn entropy_bound_pairwise_uniform_q(
    n: usize,
    q: &BigRational,
) -> Result<BoundReport, BoundsError> {
    if n == 0 {
        return Err(BoundsError::EmptyMarginals);
    }
    let half = BigRational::new(1.into(), 2.into());
    if !q.is_positive() || *q > half {
        return Err(BoundsError::QOutOfRange);
    }
    let qf = ratio_to_f64(q);
    let nf = n as f64;
    let objective = move |t: f64| (nf + 1.0 - t).log2() / (1.0 + nf / (t * t * qf));
    let best = maximize_over_t(&objective, nf);
    let t_half_bits = (nf / 2.0 + 1.0).log2() / (1.0 + 4.0 / (nf * qf));
    let mut params = BTreeMap::new();
    params.insert("q".into(), format_ratio(q));
    params.insert("t_half_bits".into(), format!("{t_half_bits}"));
    Ok(BoundReport {
        name: BoundName::EntropyPairwiseUniformQ,
        n,
        d: 2,
        value_bits: best.value,
        params,
        optimizer: Some(OptimizerInfo {
            t_star: Some(best.t),
            iterations: best.iterations,
            boundary: false,
        }),
    })
}

/// Min-entropy lower bound for pairwise independent binary variables:
///
///   Hmin(X) >= log2(1 + sum_j min((1-q_j)/q_j, q_j/(1-q_j)))
///
/// with the inner sum exact.
pub fn min_entropy_bound_pairwise(q: &[BigRational]) -> Result<BoundReport, BoundsError> {
    validate_marginals(q)?;
    let n = q.len();
    let mut odds_sum = BigRational::zero();
    for qj in q {
        let complement = BigRational::one() - qj;
        let a = &complement / qj;
        let b = qj / &complement;
        odds_sum += a.min(b);
    }
    let inner = BigRational::one() + &odds_sum;
    let mut params = BTreeMap::new();
    params.insert("q".into(), q_list_param(q));
    params.insert("odds_sum".into(), format_ratio(&odds_sum));
    Ok(BoundReport {
        name: BoundName::MinEntropyPairwise,
        n,
        d: 2,
        value_bits: crate::rational::log2_ratio(&inner),
        params,
        optimizer: None,
    })
}

/// Min-entropy lower bound for pairwise independent variables over k values
/// whose every value probability is at most w:
///
///   Hmin(X) >= log2((1-w)/w * n + 1)   for w >= 1/2
///   Hmin(X) >= log2(n + 1)             for w <= 1/2
///
/// The two branches agree at w = 1/2. Requires 1/k <= w < 1; smaller w is
/// infeasible for any distribution and is rejected rather than clamped.
pub fn min_entropy_bound_finite(
    n: usize,
    k: usize,
    w: &BigRational,
) -> Result<BoundReport, BoundsError> {
    if n == 0 {
        return Err(BoundsError::EmptyMarginals);
    }
    if k < 2 {
        return Err(BoundsError::BadAlphabet(k));
    }
    let lower = BigRational::new(1.into(), (k as i64).into());
    if *w < lower || *w >= BigRational::one() {
        return Err(BoundsError::WOutOfRange {
            w: format_ratio(w),
            k,
        });
    }
    let half = BigRational::new(1.into(), 2.into());
    let inner = if *w >= half {
        (BigRational::one() - w) / w * BigRational::from_integer((n as i64).into())
            + BigRational::one()
    } else {
        BigRational::from_integer((n as i64 + 1).into())
    };
    let mut params = BTreeMap::new();
    params.insert("w".into(), format_ratio(w));
    params.insert("k".into(), k.to_string());
    Ok(BoundReport {
        name: BoundName::MinEntropyFinite,
        n,
        d: 2,
        value_bits: crate::rational::log2_ratio(&inner),
        params,
        optimizer: None,
    })
}

/// Binomial sum inside the d-wise min-entropy bound, exact.
pub fn dwise_binomial_sum(n: usize, d: usize) -> BigUint {
    let nn = BigUint::from(n);
    let mut sum = BigUint::zero();
    if d.is_multiple_of(2) {
        for i in 0..=d / 2 {
            sum += num_integer::binomial(nn.clone(), BigUint::from(i));
        }
    } else {
        for i in 0..=(d - 1) / 2 {
            sum += num_integer::binomial(nn.clone(), BigUint::from(i));
        }
        sum += num_integer::binomial(BigUint::from(n - 1), BigUint::from((d - 1) / 2));
    }
    sum
}

/// Min-entropy lower bound for d-wise independent unbiased binary
/// variables:
///
///   even d:  Hmin(X) >= log2(sum_{i=0..d/2} C(n, i))
///   odd d:   Hmin(X) >= log2(sum_{i=0..(d-1)/2} C(n, i) + C(n-1, (d-1)/2))
///
/// Binomial sums use arbitrary-precision integers. At d = 3 the odd sum is
/// exactly 2n, and at d = 2 the bound reduces to log2(n+1).
pub fn min_entropy_bound_dwise(n: usize, d: usize) -> Result<BoundReport, BoundsError> {
    if d < 2 || d > n {
        return Err(BoundsError::OrderOutOfRange { d, n });
    }
    let sum = dwise_binomial_sum(n, d);
    let mut params = BTreeMap::new();
    params.insert("binomial_sum".into(), sum.to_string());
    Ok(BoundReport {
        name: BoundName::MinEntropyDwise,
        n,
        d,
        value_bits: log2_bigint(&BigInt::from(sum)),
        params,
        optimizer: None,
    })
}

/// Angles solving sum_{t>=2} e^{i a_t} b_t = b_1.
#[derive(Debug, Clone)]
pub struct PhaseAngles {
    /// One angle per b_2..b_k, in the input order.
    pub angles: Vec<f64>,
}

impl PhaseAngles {
    /// |sum e^{i a_t} b_t - b_1| for the vector the angles were solved for.
    pub fn residual(&self, b: &[f64]) -> f64 {
        let mut acc = Complex64::new(-b[0], 0.0);
        for (angle, &radius) in self.angles.iter().zip(&b[1..]) {
            acc += Complex64::from_polar(radius, *angle);
        }
        acc.norm()
    }
}

/// Constructive solver for the circle-sum claim: given b_1..b_k with
/// sum_{t>=2} b_t >= b_1 and b_t <= b_1 for t >= 2, find angles placing one
/// point on each circle C_{b_t} so the points sum to b_1.
///
/// Circles are processed largest first. At each step the remaining circles
/// span an annulus (Minkowski sum), and the current point is chosen by
/// two-circle intersection so the residual target stays inside it; ties take
/// the nonnegative-imaginary-part branch, which makes the output canonical.
pub fn solve_phase_angles(b: &[f64]) -> Result<PhaseAngles, BoundsError> {
    if b.len() < 2 {
        return Err(BoundsError::PhasePrecondition(
            "need b_1 and at least one further circle".into(),
        ));
    }
    if b.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(BoundsError::PhasePrecondition(
            "radii must be finite and nonnegative".into(),
        ));
    }
    let b1 = b[0];
    let rest = &b[1..];
    // Tiny slack: callers convert exact rationals to floats, which can land
    // a hair on the wrong side of an exact-equality precondition.
    let slack = 1e-9 * b1.max(1.0);
    if rest.iter().any(|&r| r > b1 + slack) {
        return Err(BoundsError::PhasePrecondition(
            "some b_t exceeds b_1".into(),
        ));
    }
    let total: f64 = rest.iter().sum();
    if total < b1 - slack {
        return Err(BoundsError::PhasePrecondition(
            "sum of b_2..b_k is below b_1".into(),
        ));
    }

    let count = rest.len();
    let mut order: Vec<usize> = (0..count).collect();
    order.sort_by(|&a, &c| rest[c].partial_cmp(&rest[a]).unwrap().then(a.cmp(&c)));
    let sorted: Vec<f64> = order.iter().map(|&i| rest[i]).collect();
    let mut suffix_sum = vec![0.0f64; count + 1];
    for i in (0..count).rev() {
        suffix_sum[i] = suffix_sum[i + 1] + sorted[i];
    }

    let mut z = Complex64::new(b1, 0.0);
    let mut placed = vec![0.0f64; count];
    for i in 0..count {
        let r = sorted[i];
        if r == 0.0 {
            continue;
        }
        let rem_sum = suffix_sum[i + 1];
        let zabs = z.norm();
        if rem_sum == 0.0 {
            // Final circle: point it straight at the residual target.
            let theta = if zabs > 0.0 { z.arg() } else { 0.0 };
            placed[i] = theta;
            z -= Complex64::from_polar(r, theta);
            continue;
        }
        let rem_max = sorted[i + 1];
        let rem_lo = (2.0 * rem_max - rem_sum).max(0.0);
        let s_min = rem_lo.max((zabs - r).abs());
        let s_max = rem_sum.min(zabs + r);
        let s = if s_min <= s_max { s_min } else { s_max };
        let theta = if zabs == 0.0 {
            0.0
        } else {
            let cos = ((r * r + zabs * zabs - s * s) / (2.0 * r * zabs)).clamp(-1.0, 1.0);
            z.arg() + cos.acos()
        };
        placed[i] = theta;
        z -= Complex64::from_polar(r, theta);
    }
    let mut angles = vec![0.0f64; count];
    for (pos, &original) in order.iter().enumerate() {
        angles[original] = placed[pos];
    }
    Ok(PhaseAngles { angles })
}

/// Complex witness matrix for pairwise independent finite-outcome spaces.
///
/// For each variable, the most likely value v* (smallest index on ties) gets
/// entries -sqrt(p_i / omega_j); every other value z gets
/// sqrt(p_i omega_j) e^{i a_jz}, where omega_j = max(1, w_j/(1-w_j)) and the
/// angles solve the circle-sum claim for b_1 = w_j/omega_j against the other
/// value probabilities. Columns are orthonormal exactly when the space is
/// pairwise independent, and every row then has squared norm at most 1.
pub fn witness_matrix_finite(space: &SampleSpace) -> Result<WitnessMatrix, BoundsError> {
    let n = space.n();
    let k = space.k();
    struct VarData {
        mode: u8,
        neg: f64,
        pos: f64,
        phases: Vec<f64>,
    }
    let mut vars = Vec::with_capacity(n);
    for j in 0..n {
        let marginal = space.marginal(j)?;
        let (mode, w) = marginal.mode();
        if w.is_one() {
            return Err(BoundsError::DeterministicMarginal { index: j });
        }
        let half = BigRational::new(1.into(), 2.into());
        let omega = if *w >= half {
            w / &(BigRational::one() - w)
        } else {
            BigRational::one()
        };
        let b_head = ratio_to_f64(&(w / &omega));
        let mut b = Vec::with_capacity(k);
        b.push(b_head);
        let mut rest_values = Vec::with_capacity(k - 1);
        for v in 0..k as u16 {
            let v = v as u8;
            if v == mode {
                continue;
            }
            rest_values.push(v);
            b.push(ratio_to_f64(marginal.prob(v)));
        }
        let solved = solve_phase_angles(&b)?;
        let mut phases = vec![0.0f64; k];
        for (value, angle) in rest_values.iter().zip(&solved.angles) {
            phases[*value as usize] = *angle;
        }
        let omega_f = ratio_to_f64(&omega);
        vars.push(VarData {
            mode,
            neg: (1.0 / omega_f).sqrt(),
            pos: omega_f.sqrt(),
            phases,
        });
    }
    let m = space.support_size();
    let mut entries = Vec::with_capacity(m * (n + 1));
    for (point, prob) in space.support() {
        let sp = prob.to_f64().expect("probability fits f64").sqrt();
        entries.push(Complex64::new(sp, 0.0));
        for (j, var) in vars.iter().enumerate() {
            let v = point[j];
            if v == var.mode {
                entries.push(Complex64::new(-sp * var.neg, 0.0));
            } else {
                entries.push(Complex64::from_polar(sp * var.pos, var.phases[v as usize]));
            }
        }
    }
    Ok(WitnessMatrix::from_entries(m, n + 1, entries))
}
