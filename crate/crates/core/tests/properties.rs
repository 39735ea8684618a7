//! Randomised invariants of the operator and the experiments built on it.

use proptest::prelude::*;

use pq_bernstein::analysis::{sup_error, Grid};
use pq_bernstein::{
    apply_operator, apply_operator_original, basis, moment_closed_form, second_moment_bound,
    BernsteinOperator, OperatorSpec, TargetFunction,
};

/// Plain q-Bernstein operator, written from its textbook definition with
/// factorial-ratio binomials and closed-form q-integers.
fn q_bernstein(n: usize, q: f64, f: &TargetFunction, x: f64) -> f64 {
    let qint = |k: usize| (1.0 - q.powi(k as i32)) / (1.0 - q);
    let qfact = |k: usize| (1..=k).map(qint).product::<f64>();
    (0..=n)
        .map(|k| {
            let binom = qfact(n) / (qfact(k) * qfact(n - k));
            let tail: f64 = (0..n - k).map(|s| 1.0 - q.powi(s as i32) * x).product();
            binom * x.powi(k as i32) * tail * f.eval(qint(k) / qint(n))
        })
        .sum()
}

fn spec_strategy(max_n: usize) -> impl Strategy<Value = OperatorSpec> {
    (1..=max_n, 0.1f64..=1.0, 0.001f64..0.999)
        .prop_map(|(n, p, frac)| OperatorSpec::from_parts(n, p, p * frac).unwrap())
}

fn poly_strategy() -> impl Strategy<Value = TargetFunction> {
    prop::collection::vec(-2.0f64..2.0, 1..6).prop_map(|c| TargetFunction::polynomial(c).unwrap())
}

fn named(name: &str) -> TargetFunction {
    TargetFunction::from_name(name).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn partition_of_unity_and_positivity(spec in spec_strategy(50), x in 0.0f64..=1.0) {
        let b = basis(&spec, x).unwrap();
        prop_assert_eq!(b.values().len(), spec.n() + 1);
        prop_assert!((b.total() - 1.0).abs() <= 1e-12);
        prop_assert!(b.values().iter().all(|&v| v >= -1e-15));
    }

    #[test]
    fn moments_match_closed_form(spec in spec_strategy(100), x in 0.0f64..=1.0) {
        for m in 0..=2u8 {
            let f = TargetFunction::monomial(m).unwrap();
            let b = apply_operator(&spec, &f, x).unwrap();
            let closed = moment_closed_form(&spec, m as u32, x).unwrap();
            prop_assert!((b - closed).abs() <= 1e-11, "m={} b={} closed={}", m, b, closed);
        }
    }

    #[test]
    fn linearity(
        spec in spec_strategy(40),
        f in poly_strategy(),
        g in poly_strategy(),
        alpha in -3.0f64..3.0,
        beta in -3.0f64..3.0,
        x in 0.0f64..=1.0,
    ) {
        let (TargetFunction::Polynomial { coeffs: cf, .. }, TargetFunction::Polynomial { coeffs: cg, .. }) = (&f, &g) else {
            unreachable!()
        };
        let len = cf.len().max(cg.len());
        let combined: Vec<f64> = (0..len)
            .map(|i| alpha * cf.get(i).unwrap_or(&0.0) + beta * cg.get(i).unwrap_or(&0.0))
            .collect();
        let h = TargetFunction::polynomial(combined).unwrap();
        let lhs = apply_operator(&spec, &h, x).unwrap();
        let rhs = alpha * apply_operator(&spec, &f, x).unwrap() + beta * apply_operator(&spec, &g, x).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12);
    }

    #[test]
    fn monotone_in_node_values(spec in spec_strategy(40), f in poly_strategy(), shift in 0.0f64..1.0, x in 0.0f64..=1.0) {
        // g = f - shift - (t - 1/2)^2 lies below f at every node
        let TargetFunction::Polynomial { coeffs, .. } = &f else { unreachable!() };
        let mut below = coeffs.clone();
        below.resize(below.len().max(3), 0.0);
        below[0] -= shift + 0.25;
        below[1] += 1.0;
        below[2] -= 1.0;
        let g = TargetFunction::polynomial(below).unwrap();
        let op = BernsteinOperator::new(spec);
        prop_assume!(op.nodes().values().iter().all(|&t| f.eval(t) >= g.eval(t)));
        prop_assert!(op.apply(&f, x).unwrap() >= op.apply(&g, x).unwrap() - 1e-12);
    }

    #[test]
    fn endpoint_interpolation(spec in spec_strategy(200), f in poly_strategy()) {
        for x in [0.0, 1.0] {
            prop_assert!((apply_operator(&spec, &f, x).unwrap() - f.eval(x)).abs() <= 1e-13);
        }
    }

    #[test]
    fn p_one_is_q_bernstein(n in 1usize..=30, q in 0.01f64..0.99, x in 0.0f64..=1.0) {
        let spec = OperatorSpec::from_parts(n, 1.0, q).unwrap();
        let f = named("paper_cubic");
        let ours = apply_operator(&spec, &f, x).unwrap();
        let reference = q_bernstein(n, q, &f, x);
        prop_assert!((ours - reference).abs() <= 1e-12, "{} vs {}", ours, reference);
    }

    #[test]
    fn bound_dominates_second_moment_error(spec in spec_strategy(100)) {
        let grid = Grid::uniform(201).unwrap();
        let err = sup_error(&spec, &TargetFunction::monomial(2).unwrap(), &grid).unwrap();
        prop_assert!(err <= second_moment_bound(&spec) + 1e-12);
    }
}

#[test]
fn uncorrected_operator_visibly_fails_on_constants() {
    let one = TargetFunction::monomial(0).unwrap();
    let grid = Grid::uniform(101).unwrap();
    for p in [0.5, 0.7, 0.9] {
        for n in [2, 5, 10] {
            let spec = OperatorSpec::from_parts(n, p, 0.5 * p).unwrap();
            let worst = grid
                .points()
                .iter()
                .map(|&x| (apply_operator_original(&spec, &one, x).unwrap() - 1.0).abs())
                .fold(0.0, f64::max);
            assert!(worst > 0.01 * (1.0 - p), "n={n} p={p}: {worst}");
        }
    }
}

#[test]
fn sup_error_of_second_moment_has_analytic_form() {
    let grid = Grid::default();
    let peak = grid.points().iter().map(|&x| x - x * x).fold(0.0, f64::max);
    for (n, p, q) in [
        (3, 0.9, 0.8),
        (25, 0.7, 0.2),
        (100, 0.999, 0.99),
        (200, 0.95, 0.5),
    ] {
        let spec = OperatorSpec::from_parts(n, p, q).unwrap();
        let measured = sup_error(&spec, &TargetFunction::monomial(2).unwrap(), &grid).unwrap();
        let analytic = second_moment_bound(&spec) / 2.0 * peak;
        assert!(
            (measured - analytic).abs() <= 1e-11,
            "n={n}: {measured} vs {analytic}"
        );
    }
}

#[test]
fn richer_targets_converge_along_half_harmonic() {
    use pq_bernstein::analysis::ParamSequence;
    let grid = Grid::uniform(401).unwrap();
    for name in ["exp", "sin_pi", "abs_centered", "paper_cubic"] {
        let f = named(name);
        let errors: Vec<f64> = [10, 40, 160]
            .iter()
            .map(|&n| {
                let spec = ParamSequence::HalfHarmonic.spec_at(n).unwrap();
                sup_error(&spec, &f, &grid).unwrap()
            })
            .collect();
        assert!(errors[2] < errors[0], "{name}: {errors:?}");
    }
}
