//! Cross-module invariants: oracle agreement for the independence checker,
//! witness/independence equivalence, Cantelli domination, bound
//! monotonicity and dominance over the constructions.

use kwise::bounds::{
    entropy_bound_pairwise, min_entropy_bound_dwise, min_entropy_bound_pairwise,
    solve_phase_angles,
};
use kwise::construct::{
    bch_parity_check, dwise_space_from_code, paley_hadamard, pairwise_space_from_hadamard,
    sylvester_hadamard, threewise_space, xor_lift, BitMatrix, FieldGF2m,
};
use kwise::rational::{rat, ratio_to_f64};
use kwise::verify::{
    build_witness_matrix, check_dwise_independence, column_gram_defect, exact_mean,
    exact_tail_ge, exact_variance, odds_sum_distribution,
};
use kwise::{BigRational, SampleSpace};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

// ---------------------------------------------------------------------------
// Brute-force oracle for d-wise independence: enumerates subsets and tuples
// recursively and recomputes every probability by filtering the support.
// Deliberately shares no code with the library's checker.
// ---------------------------------------------------------------------------

fn oracle_subsets(n: usize, d: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, d: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(v + 1, n, d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, d, &mut Vec::new(), &mut out);
    out
}

fn oracle_tuples(k: usize, d: usize) -> Vec<Vec<u8>> {
    let mut out = vec![vec![]];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..k as u8).map(move |v| {
                    let mut t = t.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}

fn oracle_joint(space: &SampleSpace, subset: &[usize], values: &[u8]) -> BigRational {
    let mut total = BigRational::zero();
    for (point, prob) in space.support() {
        if subset.iter().zip(values).all(|(&j, &v)| point[j] == v) {
            total += prob;
        }
    }
    total
}

fn oracle_marginal(space: &SampleSpace, j: usize, v: u8) -> BigRational {
    let mut total = BigRational::zero();
    for (point, prob) in space.support() {
        if point[j] == v {
            total += prob;
        }
    }
    total
}

#[allow(clippy::type_complexity)]
fn oracle_check(
    space: &SampleSpace,
    d: usize,
) -> (bool, Option<(Vec<usize>, Vec<u8>, BigRational, BigRational)>) {
    for subset in oracle_subsets(space.n(), d) {
        for values in oracle_tuples(space.k(), d) {
            let joint = oracle_joint(space, &subset, &values);
            let mut product = BigRational::one();
            for (&j, &v) in subset.iter().zip(&values) {
                product *= oracle_marginal(space, j, v);
            }
            if joint != product {
                return (false, Some((subset, values, joint, product)));
            }
        }
    }
    (true, None)
}

// ---------------------------------------------------------------------------
// Random-space strategy: distinct points with positive integer weights
// normalized by their total, so probabilities are exact by construction.
// ---------------------------------------------------------------------------

fn arb_space() -> impl Strategy<Value = SampleSpace> {
    (1usize..=6, 2usize..=3).prop_flat_map(|(n, k)| {
        let max_points = (k as u64).pow(n as u32).min(16) as usize;
        prop::collection::btree_map(
            prop::collection::vec(0..k as u8, n),
            1u64..100,
            1..=max_points,
        )
        .prop_map(move |weighted| {
            let total: u64 = weighted.values().sum();
            let support = weighted
                .into_iter()
                .map(|(point, w)| {
                    (
                        point,
                        BigRational::new(BigInt::from(w), BigInt::from(total)),
                    )
                })
                .collect();
            SampleSpace::new(n, k, support).expect("weights normalize exactly")
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn checker_agrees_with_brute_force_oracle(space in arb_space(), d_seed in 1usize..=6) {
        let d = 1 + d_seed % space.n().max(1);
        let d = d.min(space.n());
        let report = check_dwise_independence(&space, d).unwrap();
        let (holds, counterexample) = oracle_check(&space, d);
        prop_assert_eq!(report.holds, holds);
        match (report.counterexample, counterexample) {
            (None, None) => {}
            (Some(got), Some((subset, values, joint, product))) => {
                prop_assert_eq!(got.subset, subset);
                prop_assert_eq!(got.values, values);
                prop_assert_eq!(got.joint, joint);
                prop_assert_eq!(got.product, product);
            }
            (got, want) => prop_assert!(false, "mismatch: {got:?} vs {want:?}"),
        }
    }

    #[test]
    fn min_entropy_never_exceeds_shannon(space in arb_space()) {
        prop_assert!(space.min_entropy() <= space.shannon_entropy() + 1e-12);
    }

    #[test]
    fn marginals_sum_to_exactly_one(space in arb_space()) {
        for j in 0..space.n() {
            let total: BigRational = space.marginal(j).unwrap().probs().iter().sum();
            prop_assert!(total.is_one());
        }
    }

    #[test]
    fn support_order_does_not_affect_results(space in arb_space()) {
        let mut reversed: Vec<_> = space.support().to_vec();
        reversed.reverse();
        let rebuilt = SampleSpace::new(space.n(), space.k(), reversed).unwrap();
        prop_assert_eq!(&rebuilt, &space);
        prop_assert_eq!(rebuilt.shannon_entropy(), space.shannon_entropy());
        prop_assert_eq!(rebuilt.min_entropy(), space.min_entropy());
        prop_assert_eq!(rebuilt.max_point_probability(), space.max_point_probability());
        for j in 0..space.n() {
            prop_assert_eq!(rebuilt.marginal(j).unwrap(), space.marginal(j).unwrap());
        }
    }

    #[test]
    fn uniform_entropy_is_log2_m(m in 1usize..=512) {
        // Points 0..m written in base 2 over 10 variables.
        let points: Vec<Vec<u8>> = (0..m)
            .map(|v| (0..10).map(|b| (v >> (9 - b) & 1) as u8).collect())
            .collect();
        let space = SampleSpace::uniform(10, 2, points).unwrap();
        prop_assert!((space.shannon_entropy() - (m as f64).log2()).abs() < 1e-12);
    }

    #[test]
    fn entropy_bound_is_permutation_invariant(
        mut nums in prop::collection::vec(1i64..16, 2..8),
    ) {
        let q: Vec<BigRational> = nums.iter().map(|&v| rat(v, 16)).collect();
        let before = entropy_bound_pairwise(&q).unwrap().value_bits;
        nums.reverse();
        nums.rotate_left(1);
        let q2: Vec<BigRational> = nums.iter().map(|&v| rat(v, 16)).collect();
        let after = entropy_bound_pairwise(&q2).unwrap().value_bits;
        prop_assert_eq!(before, after);
    }

    #[test]
    fn min_entropy_bound_improves_toward_half(
        nums in prop::collection::vec(1i64..16, 1..8),
        which in 0usize..8,
    ) {
        let q: Vec<BigRational> = nums.iter().map(|&v| rat(v, 16)).collect();
        let before = min_entropy_bound_pairwise(&q).unwrap().value_bits;
        // Move one marginal halfway toward 1/2.
        let mut moved = q.clone();
        let idx = which % q.len();
        let half = rat(1, 2);
        moved[idx] = (&moved[idx] + &half) / rat(2, 1);
        let after = min_entropy_bound_pairwise(&moved).unwrap().value_bits;
        prop_assert!(after >= before - 1e-12);
    }

    #[test]
    fn phase_solver_residual_on_valid_inputs(
        b1 in 0.05f64..2.0,
        fractions in prop::collection::vec(0.0f64..=1.0, 2..8),
    ) {
        let rest: Vec<f64> = fractions.iter().map(|f| f * b1).collect();
        prop_assume!(rest.iter().sum::<f64>() >= b1);
        let mut b = vec![b1];
        b.extend(rest);
        let solved = solve_phase_angles(&b).unwrap();
        prop_assert!(solved.residual(&b) <= 1e-9, "residual {}", solved.residual(&b));
    }
}

// ---------------------------------------------------------------------------
// d-wise independence of a dual-code space is equivalent to d-column
// independence of its generator, both directions.
// ---------------------------------------------------------------------------

#[test]
fn code_space_independence_iff_columns_independent() {
    // All full-rank 3x5 matrices over GF(2) with no zero column, from a
    // deterministic sweep of column patterns.
    let mut tested = 0;
    for seed in 0u32..200 {
        let cols: Vec<u32> = (0..5).map(|c| (seed.wrapping_mul(2654435761) >> (c * 3)) % 8).collect();
        if cols.contains(&0) {
            continue;
        }
        let mut m = BitMatrix::zeros(3, 5);
        for (c, &pattern) in cols.iter().enumerate() {
            for r in 0..3 {
                if pattern >> r & 1 == 1 {
                    m.set(r, c, true);
                }
            }
        }
        if m.rank() != 3 {
            continue;
        }
        let space = dwise_space_from_code(&m, 1).expect("nonzero columns");
        for d in 1..=4usize {
            let columns_ok = m.first_dependent_column_subset(d).is_none();
            let holds = check_dwise_independence(&space, d).unwrap().holds;
            assert_eq!(
                columns_ok, holds,
                "seed={seed} d={d}: column independence and d-wise independence disagree"
            );
        }
        tested += 1;
    }
    assert!(tested >= 20, "sweep produced only {tested} matrices");
}

// ---------------------------------------------------------------------------
// Witness equivalence on constructions and perturbations (the acceptance
// suite runs the full-size version; this covers the small orders).
// ---------------------------------------------------------------------------

fn perturb(space: &SampleSpace, a: usize, b: usize) -> SampleSpace {
    let mut support: Vec<_> = space.support().to_vec();
    let delta = &support[b].1 / rat(2, 1);
    support[a].1 += &delta;
    support[b].1 -= &delta;
    SampleSpace::new(space.n(), space.k(), support).unwrap()
}

#[test]
fn witness_equivalence_small_orders() {
    let mut spaces = Vec::new();
    for m in 2..=5 {
        spaces.push(pairwise_space_from_hadamard(&sylvester_hadamard(m).unwrap()).unwrap());
    }
    for q in [3u64, 7, 11] {
        spaces.push(pairwise_space_from_hadamard(&paley_hadamard(q).unwrap()).unwrap());
    }
    for space in &spaces {
        let report = check_dwise_independence(space, 2).unwrap();
        assert!(report.holds);
        let w = build_witness_matrix(space).unwrap();
        assert!(column_gram_defect(&w) <= 1e-9);
        for i in 0..w.rows() {
            assert!(w.row_norm_sq(i) <= 1.0 + 1e-9);
        }

        // Perturbations must fail the exact check and the Gram test alike.
        for (a, b) in [(0usize, 1usize), (1, 2)] {
            let bad = perturb(space, a, b);
            assert!(!check_dwise_independence(&bad, 2).unwrap().holds);
            let w = build_witness_matrix(&bad).unwrap();
            assert!(column_gram_defect(&w) > 1e-9);
        }
    }
}

// ---------------------------------------------------------------------------
// Cantelli domination with nontrivial variance: biased product spaces are
// pairwise independent with a nonconstant odds-sum variable.
// ---------------------------------------------------------------------------

#[test]
fn cantelli_domination_on_biased_product_spaces() {
    for (num, den) in [(1i64, 3i64), (1, 4), (2, 5)] {
        let q = rat(num, den);
        let n = 5usize;
        let mut support = Vec::new();
        for v in 0..1u32 << n {
            let point: Vec<u8> = (0..n).map(|j| (v >> (n - 1 - j) & 1) as u8).collect();
            let ones = point.iter().filter(|&&b| b == 1).count();
            let mut prob = BigRational::one();
            for _ in 0..ones {
                prob *= &q;
            }
            for _ in ones..n {
                prob *= BigRational::one() - &q;
            }
            support.push((point, prob));
        }
        let space = SampleSpace::new(n, 2, support).unwrap();
        let dist = odds_sum_distribution(&space).unwrap();
        let mean = exact_mean(&dist);
        assert_eq!(mean, rat(n as i64 + 1, 1));
        let variance = exact_variance(&dist);
        assert!(variance > BigRational::zero());

        for i in 1..=20i64 {
            let t = rat(n as i64, 1) * rat(i, 20);
            // Lower bound on the upper tail from the one-sided inequality:
            // Pr[Y >= E Y - t] >= 1 / (1 + Var/t^2), all exact.
            let bound = BigRational::one() / (BigRational::one() + &variance / (&t * &t));
            let tail = exact_tail_ge(&dist, &(&mean - &t));
            let slack = rat(1, 1_000_000_000_000);
            assert!(
                tail >= &bound - &slack,
                "q={num}/{den} t={i}/20*n: tail {} < bound {}",
                ratio_to_f64(&tail),
                ratio_to_f64(&bound)
            );
        }
    }
}

// ---------------------------------------------------------------------------
// The primal BCH code behind the m=4, t=2 parity check: its 2^7 codewords
// all have weight >= 5 (the designed distance), checked by enumerating the
// null space with an elimination written here.
// ---------------------------------------------------------------------------

#[test]
fn bch_primal_code_minimum_distance() {
    let field = FieldGF2m::new(4).unwrap();
    let parity = bch_parity_check(&field, 2).unwrap();
    let (rows, cols) = (parity.rows(), parity.cols());

    // Row-reduce a copy (as u32 masks over 15 columns) to find pivots.
    let mut reduced: Vec<u32> = (0..rows)
        .map(|r| (0..cols).fold(0u32, |acc, c| acc | (u32::from(parity.get(r, c)) << c)))
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| reduced[r] >> c & 1 == 1) else {
            continue;
        };
        reduced.swap(rank, p);
        for r in 0..rows {
            if r != rank && reduced[r] >> c & 1 == 1 {
                reduced[r] ^= reduced[rank];
            }
        }
        pivots.push(c);
        rank += 1;
    }
    assert_eq!(rank, 8);

    // One kernel basis vector per free column.
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    assert_eq!(free.len(), 7);
    let mut basis = Vec::new();
    for &f in &free {
        let mut v = 1u32 << f;
        for (r, &p) in pivots.iter().enumerate() {
            if reduced[r] >> f & 1 == 1 {
                v |= 1 << p;
            }
        }
        basis.push(v);
    }
    // All 2^7 codewords of the primal code: weight >= 5 except the zero word.
    for mask in 1u32..128 {
        let word = basis
            .iter()
            .enumerate()
            .fold(0u32, |acc, (i, &b)| if mask >> i & 1 == 1 { acc ^ b } else { acc });
        // Sanity: really in the null space.
        for r in 0..rows {
            let row = (0..cols).fold(0u32, |acc, c| acc | (u32::from(parity.get(r, c)) << c));
            assert_eq!((row & word).count_ones() % 2, 0);
        }
        assert!(
            word.count_ones() >= 5,
            "codeword {word:#017b} has weight {}",
            word.count_ones()
        );
    }
}

// ---------------------------------------------------------------------------
// Uniform-q entropy bound against a dense grid oracle, including the
// q = 1/n regime.
// ---------------------------------------------------------------------------

#[test]
fn uniform_q_bound_matches_grid_oracle() {
    for (n, q) in [(16usize, rat(1, 2)), (100, rat(1, 7)), (1000, rat(1, 1000))] {
        let report = kwise::bounds::entropy_bound_pairwise_uniform_q(n, &q).unwrap();
        let nf = n as f64;
        let qf = ratio_to_f64(&q);
        let mut oracle = f64::MIN;
        for i in 1..=1_000_000u32 {
            let t = nf * i as f64 / 1_000_000.0;
            let v = (nf + 1.0 - t).log2() / (1.0 + nf / (t * t * qf));
            if v > oracle {
                oracle = v;
            }
        }
        assert!(
            (report.value_bits - oracle).abs() < 1e-6,
            "n={n}: {} vs grid {oracle}",
            report.value_bits
        );
    }
}

// ---------------------------------------------------------------------------
// Exact consistency at d=2 and small counterexample coverage.
// ---------------------------------------------------------------------------

#[test]
fn dwise_bound_at_two_equals_pairwise_bound_exactly() {
    for n in [2usize, 3, 15, 100, 1023] {
        let dwise = min_entropy_bound_dwise(n, 2).unwrap().value_bits;
        let pairwise = min_entropy_bound_pairwise(&vec![rat(1, 2); n])
            .unwrap()
            .value_bits;
        assert_eq!(dwise, pairwise, "n={n}");
        assert_eq!(dwise, ((n + 1) as f64).log2(), "n={n}");
    }
}

#[test]
fn threewise_space_is_not_fourwise() {
    let space = threewise_space(2).unwrap();
    let report = check_dwise_independence(&space, 4).unwrap();
    assert!(!report.holds, "8 points cannot carry 4-wise independence on 4 bits");
    assert!(report.counterexample.is_some());
}

// ---------------------------------------------------------------------------
// Row-norm consequence of the finite-outcome witness: every point
// probability obeys p <= 1/(1 + n/omega_max) on pairwise independent
// spaces.
// ---------------------------------------------------------------------------

#[test]
fn finite_witness_row_norms_bound_point_probabilities() {
    let trits = SampleSpace::uniform(2, 3, (0..9u8).map(|v| vec![v / 3, v % 3]).collect()).unwrap();
    let biased = {
        let q = rat(1, 3);
        let mut support = Vec::new();
        for v in 0..8u8 {
            let point = vec![v >> 2 & 1, v >> 1 & 1, v & 1];
            let ones = point.iter().filter(|&&b| b == 1).count() as i64;
            let mut prob = BigRational::one();
            for _ in 0..ones {
                prob *= &q;
            }
            for _ in ones..3 {
                prob *= BigRational::one() - &q;
            }
            support.push((point, prob));
        }
        SampleSpace::new(3, 2, support).unwrap()
    };
    for space in [&trits, &biased] {
        let witness = kwise::bounds::witness_matrix_finite(space).unwrap();
        let mut omega_max: f64 = 1.0;
        for j in 0..space.n() {
            let marginal = space.marginal(j).unwrap();
            let w = ratio_to_f64(marginal.mode().1);
            omega_max = omega_max.max(w / (1.0 - w));
        }
        let cap = 1.0 / (1.0 + space.n() as f64 / omega_max);
        for (i, (_, prob)) in space.support().iter().enumerate() {
            assert!(witness.row_norm_sq(i) <= 1.0 + 1e-9);
            assert!(ratio_to_f64(prob) <= cap + 1e-9);
        }
    }
}

// ---------------------------------------------------------------------------
// Lower bounds never exceed achieved entropies on the constructions.
// ---------------------------------------------------------------------------

#[test]
fn bounds_dominated_by_constructions() {
    let field = FieldGF2m::new(4).unwrap();
    let bch = bch_parity_check(&field, 2).unwrap();
    let cases: Vec<(SampleSpace, usize)> = vec![
        (
            pairwise_space_from_hadamard(&sylvester_hadamard(3).unwrap()).unwrap(),
            2,
        ),
        (
            pairwise_space_from_hadamard(&paley_hadamard(11).unwrap()).unwrap(),
            2,
        ),
        (threewise_space(3).unwrap(), 3),
        (dwise_space_from_code(&bch, 4).unwrap(), 4),
        (xor_lift(&threewise_space(2).unwrap(), 3).unwrap(), 2),
    ];
    for (space, d) in &cases {
        let hmin = space.min_entropy();
        let shannon = space.shannon_entropy();
        let q: Vec<BigRational> = (0..space.n())
            .map(|j| space.marginal(j).unwrap().prob(1).clone())
            .collect();

        let dwise = min_entropy_bound_dwise(space.n(), *d).unwrap().value_bits;
        assert!(dwise <= hmin + 1e-9, "dwise bound exceeds achieved");

        let pairwise_min = min_entropy_bound_pairwise(&q).unwrap().value_bits;
        assert!(pairwise_min <= hmin + 1e-9);

        let pairwise_entropy = entropy_bound_pairwise(&q).unwrap().value_bits;
        assert!(pairwise_entropy <= shannon + 1e-9);
    }
}

// ---------------------------------------------------------------------------
// The xor lift keeps the support size (it is a re-coordinatization on the
// code-based constructions) and its output is exactly pairwise independent.
// ---------------------------------------------------------------------------

#[test]
fn xor_lift_support_and_pairwise_independence() {
    let field = FieldGF2m::new(4).unwrap();
    let bch = dwise_space_from_code(&bch_parity_check(&field, 2).unwrap(), 4).unwrap();
    let three = threewise_space(3).unwrap();
    for (space, d) in [(&three, 3usize), (&bch, 4usize)] {
        let lifted = xor_lift(space, d).unwrap();
        assert!(lifted.support_size() <= space.support_size());
        assert_eq!(lifted.support_size(), space.support_size());
        assert!(check_dwise_independence(&lifted, 2).unwrap().holds);
        for j in 0..lifted.n() {
            assert_eq!(
                lifted.marginal(j).unwrap().probs(),
                &[rat(1, 2), rat(1, 2)]
            );
        }
    }
}
