//! Acceptance suite. Run with `--nocapture` to see one PASS/FAIL line per criterion.

use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pq_bernstein::analysis::{sup_error, Grid, ParamSequence};
use pq_bernstein::{
    apply_operator, apply_operator_original, pq_binomial, trend_experiment, OperatorSpec,
    TargetFunction, TrendVariants,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn random_spec(rng: &mut ChaCha8Rng, max_n: usize) -> OperatorSpec {
    let n = rng.gen_range(1..=max_n);
    let p = rng.gen_range(0.1..=1.0);
    let q = p * rng.gen_range(0.001..0.999);
    OperatorSpec::from_parts(n, p, q).unwrap()
}

fn monomial(m: u8) -> TargetFunction {
    TargetFunction::monomial(m).unwrap()
}

fn cubic() -> TargetFunction {
    TargetFunction::from_name("paper_cubic").unwrap()
}

/// (p,q)-integer straight from the difference quotient.
fn bracket(k: usize, p: f64, q: f64) -> f64 {
    if p == q {
        return k as f64 * p.powi(k as i32 - 1);
    }
    (p.powi(k as i32) - q.powi(k as i32)) / (p - q)
}

fn at_most(label: &str, worst: f64, tol: f64) -> Outcome {
    let line = format!("{label} {worst:.3e} (tol {tol:.0e})");
    if worst <= tol {
        Ok(line)
    } else {
        Err(line)
    }
}

fn timed(limit: Duration, run: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let out = run();
    let elapsed = start.elapsed();
    let suffix = format!(
        ", {:.2}s (limit {}s)",
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    match out {
        Ok(s) if elapsed < limit => Ok(s + &suffix),
        Ok(s) | Err(s) => Err(s + &suffix),
    }
}

fn moment_reproduction(m: u8) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001 + m as u64);
    let f = monomial(m);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let spec = random_spec(&mut rng, 50);
        let x: f64 = rng.gen_range(0.0..=1.0);
        let target = if m == 0 { 1.0 } else { x };
        worst = worst.max((apply_operator(&spec, &f, x).unwrap() - target).abs());
    }
    at_most("max deviation", worst, 1e-12)
}

fn partition_of_unity() -> Outcome {
    timed(Duration::from_secs(5), || moment_reproduction(0))
}

fn first_moment() -> Outcome {
    moment_reproduction(1)
}

fn second_moment_closed_form() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let f = monomial(2);
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let spec = random_spec(&mut rng, 100);
        let (n, p, q) = (spec.n(), spec.p(), spec.q());
        let top = bracket(n, p, q);
        for i in 0..=10 {
            let x = i as f64 / 10.0;
            let closed = p.powi(n as i32 - 1) * x / top + q * bracket(n - 1, p, q) * x * x / top;
            worst = worst.max((apply_operator(&spec, &f, x).unwrap() - closed).abs());
        }
    }
    at_most("max deviation", worst, 1e-11)
}

fn integer_identity() -> Outcome {
    let mut worst = 0.0f64;
    for p in [0.6, 0.8, 0.95, 1.0 - 1e-9] {
        let q = 0.9 * p;
        for n in 1..=60usize {
            let top = bracket(n, p, q);
            let lhs = q * bracket(n - 1, p, q);
            let rhs = top - p.powi(n as i32 - 1);
            worst = worst.max((lhs - rhs).abs() / top);
        }
    }
    at_most("max relative deviation", worst, 1e-13)
}

fn second_moment_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let grid = Grid::default();
    let peak = grid.points().iter().map(|&x| x - x * x).fold(0.0, f64::max);
    let f = monomial(2);
    let (mut excess, mut mismatch) = (f64::NEG_INFINITY, 0.0f64);
    for _ in 0..500 {
        let spec = random_spec(&mut rng, 100);
        let (n, p, q) = (spec.n(), spec.p(), spec.q());
        let scale = p.powi(n as i32 - 1) / bracket(n, p, q);
        let err = sup_error(&spec, &f, &grid).unwrap();
        excess = excess.max(err - 2.0 * scale);
        mismatch = mismatch.max((err - scale * peak).abs());
    }
    let line = format!(
        "max(err - bound) {excess:.3e} (tol 1e-12), analytic mismatch {mismatch:.3e} (tol 1e-11)"
    );
    if excess <= 1e-12 && mismatch <= 1e-11 {
        Ok(line)
    } else {
        Err(line)
    }
}

fn half_harmonic_errors(degrees: &[usize]) -> Vec<f64> {
    let grid = Grid::default();
    degrees
        .iter()
        .map(|&n| {
            let spec = ParamSequence::HalfHarmonic.spec_at(n).unwrap();
            sup_error(&spec, &monomial(2), &grid).unwrap()
        })
        .collect()
}

fn convergence() -> Outcome {
    timed(Duration::from_secs(10), || {
        let errors = half_harmonic_errors(&[10, 50, 100, 200]);
        let decreasing = errors.windows(2).all(|w| w[1] < w[0]);
        let last = errors[3];
        let line = format!("errors {errors:.4?}, strictly decreasing {decreasing}");
        if last <= 0.01 && decreasing {
            Ok(line)
        } else {
            Err(line)
        }
    })
}

fn negative_control() -> Outcome {
    let spec = OperatorSpec::from_parts(200, 0.9, 0.8).unwrap();
    let err = sup_error(&spec, &monomial(2), &Grid::default()).unwrap();
    let line = format!("error at n=200 {err:.4e} (must be >= 1e-2)");
    if err >= 0.01 {
        Ok(line)
    } else {
        Err(line)
    }
}

fn uncorrected_defect() -> Outcome {
    let spec = OperatorSpec::from_parts(2, 0.5, 0.25).unwrap();
    let one = monomial(0);
    let original = apply_operator_original(&spec, &one, 0.0).unwrap();
    let corrected = apply_operator(&spec, &one, 0.0).unwrap();
    let line = format!("uncorrected {original}, corrected {corrected}");
    if (original - 0.5).abs() <= 1e-15 && (corrected - 1.0).abs() <= 1e-15 {
        Ok(line)
    } else {
        Err(line)
    }
}

/// q-Bernstein operator coded from scratch: factorial-ratio binomials and
/// the direct product form of the basis.
fn q_bernstein(n: usize, q: f64, f: &TargetFunction, x: f64) -> f64 {
    let qint = |k: usize| (1.0 - q.powi(k as i32)) / (1.0 - q);
    let qfact = |k: usize| (1..=k).map(qint).product::<f64>();
    let mut total = 0.0;
    for k in 0..=n {
        let binom = qfact(n) / (qfact(k) * qfact(n - k));
        let mut tail = 1.0;
        for s in 0..n - k {
            tail *= 1.0 - q.powi(s as i32) * x;
        }
        total += binom * x.powi(k as i32) * tail * f.eval(qint(k) / qint(n));
    }
    total
}

fn p_one_reduction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009);
    let f = cubic();
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let n = rng.gen_range(1..=30);
        let q = rng.gen_range(0.01..0.99);
        let x = rng.gen_range(0.0..=1.0);
        let spec = OperatorSpec::from_parts(n, 1.0, q).unwrap();
        worst = worst.max((apply_operator(&spec, &f, x).unwrap() - q_bernstein(n, q, &f, x)).abs());
    }
    at_most("max deviation", worst, 1e-12)
}

fn binomial_oracle() -> Outcome {
    let (mut oracle, mut symmetry) = (0.0f64, 0.0f64);
    for p in [0.3, 0.5, 0.7, 0.9, 1.0] {
        for frac in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let q = p * frac;
            let params = pq_bernstein::PQParams::new(p, q).unwrap();
            let fact = |k: usize| (1..=k).map(|j| bracket(j, p, q)).product::<f64>();
            for n in 0..=12usize {
                for k in 0..=n {
                    let rec = pq_binomial(n, k as i64, &params);
                    let reference = fact(n) / (fact(k) * fact(n - k));
                    oracle = oracle.max((rec - reference).abs() / reference);
                    let mirror = pq_binomial(n, (n - k) as i64, &params);
                    symmetry = symmetry.max((rec - mirror).abs() / rec);
                }
            }
        }
    }
    let line = format!("oracle {oracle:.3e}, symmetry {symmetry:.3e} (tol 1e-12 relative)");
    if oracle <= 1e-12 && symmetry <= 1e-12 {
        Ok(line)
    } else {
        Err(line)
    }
}

fn vary_q_trend() -> Outcome {
    let base = OperatorSpec::from_parts(10, 0.95, 0.5).unwrap();
    let variants = TrendVariants::Q(vec![0.5, 0.7, 0.9, 0.94]);
    let report = trend_experiment(&base, &cubic(), &Grid::default(), &variants).unwrap();
    let errors = report.errors();
    let weak = errors.windows(2).all(|w| w[1] <= w[0]);
    let line = format!("errors {errors:.4?}");
    if weak && report.weakly_decreasing {
        Ok(line)
    } else {
        Err(line)
    }
}

fn cli_determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_pqbern"))
            .args(["converge", "--reproducible"])
            .output()
            .expect("binary runs")
    };
    let (a, b) = (run(), run());
    let line = format!("{} bytes, exit {:?}", a.stdout.len(), a.status.code());
    if a.status.success() && b.status.success() && !a.stdout.is_empty() && a.stdout == b.stdout {
        Ok(line)
    } else {
        Err(line)
    }
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 12] = [
        ("partition_of_unity", partition_of_unity),
        ("first_moment", first_moment),
        ("second_moment_closed_form", second_moment_closed_form),
        ("integer_identity", integer_identity),
        ("second_moment_bound", second_moment_bound),
        ("convergence_half_harmonic", convergence),
        ("negative_control_constant_pq", negative_control),
        ("uncorrected_operator_defect", uncorrected_defect),
        ("p_one_reduces_to_q_bernstein", p_one_reduction),
        ("binomial_oracle_and_symmetry", binomial_oracle),
        ("vary_q_trend", vary_q_trend),
        ("cli_determinism", cli_determinism),
    ];
    let mut failed = Vec::new();
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(detail) => {
                println!("FAIL {name}: {detail}");
                failed.push(name);
            }
        }
    }
    println!(
        "{}/{} criteria passed",
        criteria.len() - failed.len(),
        criteria.len()
    );
    assert!(failed.is_empty(), "failed: {failed:?}");
}
