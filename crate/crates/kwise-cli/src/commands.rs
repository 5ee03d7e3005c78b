//! The construct / verify / analyze / bounds subcommands.

use crate::families::{self, check_cap};
use crate::{AnalyzeArgs, BoundsArgs, ConstructArgs, Family, Format, VerifyArgs};
use kwise::bounds::{
    entropy_bound_pairwise, entropy_bound_pairwise_uniform_q, min_entropy_bound_dwise,
    min_entropy_bound_finite, min_entropy_bound_pairwise, BoundReport,
};
use kwise::rational::{format_ratio, parse_ratio, rat};
use kwise::verify::check_dwise_independence_with_threads;
use kwise::{BigRational, SampleSpace};
use serde_json::json;
use std::path::Path;

pub fn read_space(path: &Path) -> Result<SampleSpace, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    SampleSpace::from_json(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn require<T>(value: Option<T>, flag: &str, family: &str) -> Result<T, String> {
    value.ok_or_else(|| format!("--family {family} requires {flag}"))
}

fn reject<T>(value: &Option<T>, flag: &str, family: &str) -> Result<(), String> {
    if value.is_some() {
        return Err(format!("--family {family} does not take {flag}"));
    }
    Ok(())
}

pub fn construct(args: ConstructArgs) -> Result<u8, String> {
    let family = args.family.name();
    let built = match args.family {
        Family::HadamardSylvester => {
            reject(&args.q, "--q", family)?;
            families::sylvester(require(args.m, "--m", family)?)?
        }
        Family::HadamardPaley => {
            reject(&args.m, "--m", family)?;
            families::paley(require(args.q, "--q", family)?)?
        }
        Family::Pairwise => families::pairwise(require(args.n, "--n", family)?)?,
        Family::Threewise => families::threewise(require(args.l, "--l", family)?)?,
        Family::BchEven => families::bch_even(
            require(args.m, "--m", family)?,
            require(args.t, "--t", family)?,
        )?,
        Family::BchOdd => families::bch_odd(
            require(args.m, "--m", family)?,
            require(args.t, "--t", family)?,
        )?,
        Family::XorLift => {
            let input = require(args.input.as_deref(), "--in", family)?;
            let space = read_space(input)?;
            families::lift(&space, require(args.d, "--d", family)?)?
        }
        Family::Code => {
            let path = require(args.matrix.as_deref(), "--matrix", family)?;
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            let matrix = kwise::construct::BitMatrix::from_text(&text)
                .map_err(|e| format!("{}: {e}", path.display()))?;
            families::code(&matrix, require(args.d, "--d", family)?)?
        }
    };
    std::fs::write(&args.out, built.space.to_json())
        .map_err(|e| format!("cannot write {}: {e}", args.out.display()))?;
    if let Some(path) = &args.matrix_out {
        match &built.matrix {
            Some(matrix) => std::fs::write(path, matrix.to_text())
                .map_err(|e| format!("cannot write {}: {e}", path.display()))?,
            None => return Err(format!("--family {family} has no matrix to write")),
        }
    }
    println!(
        "n={} d={} support={} Hmin={:.6}",
        built.space.n(),
        built.d,
        built.space.support_size(),
        built.space.min_entropy()
    );
    Ok(0)
}

fn verification_threads() -> Result<usize, String> {
    match std::env::var("KWISE_THREADS") {
        Err(_) => Ok(1),
        Ok(raw) => raw
            .parse::<usize>()
            .ok()
            .filter(|&t| t >= 1)
            .ok_or_else(|| format!("KWISE_THREADS must be a positive integer, got '{raw}'")),
    }
}

pub fn verify(args: VerifyArgs) -> Result<u8, String> {
    if args.format == Format::Csv {
        return Err("csv output is only available for `report`".into());
    }
    let space = read_space(&args.input)?;
    check_cap(space.n(), args.d, space.k())?;
    let threads = verification_threads()?;
    let report = check_dwise_independence_with_threads(&space, args.d, threads)
        .map_err(|e| e.to_string())?;
    match args.format {
        Format::Json => {
            let counterexample = report.counterexample.as_ref().map(|ce| {
                json!({
                    "subset": ce.subset,
                    "values": ce.values,
                    "joint": format_ratio(&ce.joint),
                    "product": format_ratio(&ce.product),
                })
            });
            let body = json!({
                "n": space.n(),
                "k": space.k(),
                "d": args.d,
                "holds": report.holds,
                "counterexample": counterexample,
            });
            println!("{}", serde_json::to_string_pretty(&body).unwrap());
        }
        Format::Text => {
            if report.holds {
                println!("INDEPENDENT n={} d={}", space.n(), args.d);
            } else {
                println!("DEPENDENT n={} d={}", space.n(), args.d);
                let ce = report.counterexample.as_ref().unwrap();
                println!(
                    "counterexample: subset={:?} values={:?} joint={} product={}",
                    ce.subset,
                    ce.values,
                    format_ratio(&ce.joint),
                    format_ratio(&ce.product)
                );
            }
        }
        Format::Csv => unreachable!(),
    }
    Ok(if report.holds { 0 } else { 1 })
}

pub fn analyze(args: AnalyzeArgs) -> Result<u8, String> {
    if args.format == Format::Csv {
        return Err("csv output is only available for `report`".into());
    }
    let space = read_space(&args.input)?;
    let shannon = space.shannon_entropy();
    let min_entropy = space.min_entropy();
    let max_p = space.max_point_probability();
    match args.format {
        Format::Json => {
            let body = json!({
                "n": space.n(),
                "k": space.k(),
                "support": space.support_size(),
                "shannon_entropy_bits": shannon,
                "min_entropy_bits": min_entropy,
                "max_point_probability": format_ratio(&max_p),
            });
            println!("{}", serde_json::to_string_pretty(&body).unwrap());
        }
        Format::Text => {
            println!("n={} k={} support={}", space.n(), space.k(), space.support_size());
            println!("shannon_entropy={shannon:.12}");
            println!("min_entropy={min_entropy:.12}");
            println!("max_point_probability={}", format_ratio(&max_p));
        }
        Format::Csv => unreachable!(),
    }
    Ok(0)
}

fn parse_q_list(raw: &str, n: usize) -> Result<Vec<BigRational>, String> {
    let list: Vec<BigRational> = raw
        .split(',')
        .map(|s| parse_ratio(s).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    if list.len() != n {
        return Err(format!("--q-list has {} entries, expected n={n}", list.len()));
    }
    Ok(list)
}

pub fn bounds(args: BoundsArgs) -> Result<u8, String> {
    if args.format == Format::Csv {
        return Err("csv output is only available for `report`".into());
    }
    if args.n == 0 {
        return Err("--n must be positive".into());
    }
    let mut reports: Vec<BoundReport> = Vec::new();
    let half = rat(1, 2);
    match (&args.q, &args.q_list, &args.w) {
        (_, _, Some(w)) => {
            if args.q.is_some() || args.q_list.is_some() {
                return Err("--w cannot be combined with --q/--q-list".into());
            }
            let k = args
                .k
                .ok_or_else(|| "--w requires --k (alphabet size)".to_string())?;
            let w = parse_ratio(w).map_err(|e| e.to_string())?;
            reports.push(min_entropy_bound_finite(args.n, k, &w).map_err(|e| e.to_string())?);
        }
        (Some(_), Some(_), _) => {
            return Err("--q and --q-list are mutually exclusive".into());
        }
        (Some(q), None, None) => {
            let q = parse_ratio(q).map_err(|e| e.to_string())?;
            if args.d > 2 && q != half {
                return Err(
                    "the d-wise bound needs unbiased variables; use --q 1/2 or drop --q".into(),
                );
            }
            let qs = vec![q.clone(); args.n];
            reports.push(entropy_bound_pairwise(&qs).map_err(|e| e.to_string())?);
            if q <= half {
                reports.push(
                    entropy_bound_pairwise_uniform_q(args.n, &q).map_err(|e| e.to_string())?,
                );
            }
            reports.push(min_entropy_bound_pairwise(&qs).map_err(|e| e.to_string())?);
            if q == half && args.d >= 2 {
                reports.push(min_entropy_bound_dwise(args.n, args.d).map_err(|e| e.to_string())?);
            }
        }
        (None, Some(list), None) => {
            if args.d != 2 {
                return Err("--q-list applies to the pairwise bounds; use --d 2".into());
            }
            let qs = parse_q_list(list, args.n)?;
            reports.push(entropy_bound_pairwise(&qs).map_err(|e| e.to_string())?);
            reports.push(min_entropy_bound_pairwise(&qs).map_err(|e| e.to_string())?);
        }
        (None, None, None) => {
            reports.push(min_entropy_bound_dwise(args.n, args.d).map_err(|e| e.to_string())?);
        }
    }
    match args.format {
        Format::Json => {
            println!("{}", serde_json::to_string_pretty(&reports).unwrap());
        }
        Format::Text => {
            for report in &reports {
                let mut line = format!(
                    "{:<28} n={} d={} bits={:.9}",
                    report.name.as_str(),
                    report.n,
                    report.d,
                    report.value_bits
                );
                if let Some(optimizer) = &report.optimizer {
                    match optimizer.t_star {
                        Some(t) => line.push_str(&format!(" t_star={t:.6}")),
                        None if optimizer.boundary => line.push_str(" t_star=boundary(t->0)"),
                        None => {}
                    }
                }
                println!("{line}");
            }
        }
        Format::Csv => unreachable!(),
    }
    Ok(0)
}
