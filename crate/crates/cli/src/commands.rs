//! Command implementations. Each returns a table plus whether every
//! tolerance it checks was met.

use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context, Result};
use pq_bernstein::analysis::{
    curve_samples_with, figure_data, korovkin_experiment, trend_experiment, Grid, ParamSequence,
    TrendVariants, DEFAULT_CONVERGENCE_THRESHOLD,
};
use pq_bernstein::verify::{run_verification, VerifyConfig, DEFAULT_DEGREES, DEFAULT_PAIRS};
use pq_bernstein::{
    moment_closed_form, BernsteinOperator, Cell, OperatorSpec, Table, TargetFunction, Variant,
};

use crate::args::{
    CommonArgs, ConvergeArgs, EvalArgs, FigureArgs, FunctionArgs, OperatorArgs, TrendArgs,
    VerifyArgs,
};
use crate::config::ConfigFile;
use crate::output::{render, Format};

/// Tolerance for the `moments` command, shared with the verify suite.
pub const MOMENT_TOL: f64 = pq_bernstein::verify::MOMENT_TOL;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    ChecksFailed,
}

impl Outcome {
    fn from_pass(passed: bool) -> Self {
        if passed {
            Outcome::Pass
        } else {
            Outcome::ChecksFailed
        }
    }
}

/// Everything a command produced, ready to be written.
#[derive(Debug)]
pub struct Emission {
    pub table: Table,
    pub outcome: Outcome,
    pub format: Format,
    pub output: Option<std::path::PathBuf>,
}

impl Emission {
    pub fn render(&self) -> Result<String> {
        render(&self.table, self.format)
    }

    /// Writes the rendered table to the output path, or stdout.
    pub fn write(&self) -> Result<()> {
        let text = self.render()?;
        match &self.output {
            Some(path) => {
                std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
            }
            None => {
                use std::io::Write;
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(text.as_bytes())?;
                stdout.flush()?;
            }
        }
        Ok(())
    }
}

/// Resolved plumbing options shared by every command.
struct Plumbing {
    config: ConfigFile,
    grid: Grid,
    format: Format,
    output: Option<std::path::PathBuf>,
    reproducible: bool,
}

impl Plumbing {
    fn resolve(common: &CommonArgs) -> Result<Self> {
        let config = match &common.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let resolution = config
            .resolve(common.grid, "grid")?
            .unwrap_or(Grid::DEFAULT_RESOLUTION);
        Ok(Self {
            grid: Grid::uniform(resolution)?,
            format: config.resolve(common.format, "format")?.unwrap_or_default(),
            output: config.resolve(common.output.clone(), "output")?,
            reproducible: config.switch(common.reproducible, "reproducible")?,
            config,
        })
    }

    fn function(&self, args: &FunctionArgs) -> Result<TargetFunction> {
        let name = self.config.resolve(args.function.clone(), "function")?;
        let poly = self.config.resolve(args.poly.clone(), "poly")?;
        // a flag on the command line beats either key in the file
        let use_poly = match (&args.function, &args.poly) {
            (Some(_), None) => false,
            (None, Some(_)) => true,
            _ => match (&name, &poly) {
                (Some(_), Some(_)) => bail!("both `function` and `poly` are set"),
                (None, Some(_)) => true,
                _ => false,
            },
        };
        Ok(if use_poly {
            TargetFunction::parse_polynomial(poly.as_deref().unwrap_or_default())?
        } else {
            TargetFunction::from_name(name.as_deref().unwrap_or("paper_cubic"))?
        })
    }

    fn spec(&self, args: &OperatorArgs, defaults: (usize, f64, f64)) -> Result<OperatorSpec> {
        let n = self.config.resolve(args.n, "n")?.unwrap_or(defaults.0);
        let p = self.config.resolve(args.p, "p")?.unwrap_or(defaults.1);
        let q = self.config.resolve(args.q, "q")?.unwrap_or(defaults.2);
        Ok(OperatorSpec::from_parts(n, p, q)?)
    }

    fn finish(self, command: &str, mut table: Table, outcome: Outcome) -> Emission {
        let mut header = vec![
            ("tool".to_string(), "pqbern".to_string()),
            ("version".to_string(), env!("CARGO_PKG_VERSION").to_string()),
            ("command".to_string(), command.to_string()),
        ];
        if !self.reproducible {
            let secs = SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0);
            header.push(("generated_unix".to_string(), secs.to_string()));
        }
        header.append(&mut table.params);
        table.params = header;
        Emission {
            table,
            outcome,
            format: self.format,
            output: self.output,
        }
    }
}

const EVAL_DEFAULTS: (usize, f64, f64) = (10, 0.95, 0.9);

fn spec_params(table: &mut Table, spec: &OperatorSpec) {
    table
        .param("n", spec.n())
        .param("p", spec.p())
        .param("q", spec.q());
}

pub fn cmd_eval(args: &EvalArgs) -> Result<Emission> {
    let env = Plumbing::resolve(&args.operator.common)?;
    let spec = env.spec(&args.operator, EVAL_DEFAULTS)?;
    let f = env.function(&args.operator.function)?;
    let use_original = env.config.switch(args.use_original, "use_original")?;

    let curve = curve_samples_with(&BernsteinOperator::new(spec), &f, &env.grid);
    let original = use_original
        .then(|| curve_samples_with(&BernsteinOperator::uncorrected(spec), &f, &env.grid));

    let mut columns = vec!["x", "f", "B"];
    if use_original {
        columns.push("B_original");
    }
    let mut table = Table::new(columns);
    spec_params(&mut table, &spec);
    table
        .param("function", f.name())
        .param("grid", env.grid.resolution())
        .param("use_original", use_original);
    for (i, s) in curve.iter().enumerate() {
        let mut row = vec![Cell::from(s.x), Cell::from(s.f), Cell::from(s.b)];
        if let Some(orig) = &original {
            row.push(Cell::from(orig[i].b));
        }
        table.push_row(row);
    }
    let sup = curve.iter().map(|s| (s.b - s.f).abs()).fold(0.0, f64::max);
    table.verdict("sup_error", sup);
    Ok(env.finish("eval", table, Outcome::Pass))
}

pub fn cmd_moments(args: &OperatorArgs) -> Result<Emission> {
    let env = Plumbing::resolve(&args.common)?;
    let spec = env.spec(args, EVAL_DEFAULTS)?;
    let op = BernsteinOperator::new(spec);
    let monomials: Vec<TargetFunction> = (0..=2)
        .map(|m| TargetFunction::monomial(m).expect("registered"))
        .collect();
    let samples: Vec<Vec<f64>> = monomials.iter().map(|m| op.sample(m)).collect();

    let mut table = Table::new([
        "x",
        "B_m0",
        "B_m1",
        "B_m2",
        "closed_m0",
        "closed_m1",
        "closed_m2",
    ]);
    spec_params(&mut table, &spec);
    table.param("grid", env.grid.resolution());
    let mut max_dev: f64 = 0.0;
    for &x in env.grid.points() {
        let mut row = vec![Cell::from(x)];
        let mut closed = Vec::with_capacity(3);
        for (m, s) in samples.iter().enumerate() {
            let b = op.apply_samples(s, x)?;
            let c = moment_closed_form(&spec, m as u32, x)?;
            max_dev = max_dev.max((b - c).abs());
            row.push(Cell::from(b));
            closed.push(Cell::from(c));
        }
        row.extend(closed);
        table.push_row(row);
    }
    let passed = max_dev <= MOMENT_TOL;
    table
        .verdict("max_deviation", max_dev)
        .verdict("tolerance", MOMENT_TOL)
        .verdict("passed", passed);
    Ok(env.finish("moments", table, Outcome::from_pass(passed)))
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<Emission> {
    let env = Plumbing::resolve(&args.operator.common)?;
    let op = &args.operator;
    let degrees = match env.config.resolve(op.n, "n")? {
        Some(n) => vec![n],
        None => DEFAULT_DEGREES.to_vec(),
    };
    let p = env.config.resolve(op.p, "p")?;
    let q = env.config.resolve(op.q, "q")?;
    let pairs = match (p, q) {
        (Some(p), Some(q)) => vec![(p, q)],
        (None, None) => DEFAULT_PAIRS.to_vec(),
        _ => bail!("--p and --q must be given together"),
    };
    let use_original = env.config.switch(args.use_original, "use_original")?;
    let config = VerifyConfig {
        degrees,
        pairs,
        grid: env.grid.clone(),
        function: env.function(&op.function)?,
        variant: if use_original {
            Variant::Uncorrected
        } else {
            Variant::Corrected
        },
        expect_defect: env.config.switch(args.expect_defect, "expect_defect")?,
    };
    let report = run_verification(&config)?;
    let table = report.to_table(&config);
    Ok(env.finish("verify", table, Outcome::from_pass(report.all_passed())))
}

fn parse_list<T>(text: &str, what: &str) -> Result<Vec<T>>
where
    T: std::str::FromStr,
    T::Err: std::fmt::Display,
{
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<T>()
                .map_err(|e| anyhow::anyhow!("{what}: cannot parse `{}`: {e}", s.trim()))
        })
        .collect()
}

pub fn cmd_converge(args: &ConvergeArgs) -> Result<Emission> {
    let env = Plumbing::resolve(&args.common)?;
    let rule: ParamSequence = env
        .config
        .resolve(args.rule.clone(), "rule")?
        .unwrap_or_else(|| "half_harmonic".into())
        .parse()?;
    let degrees = match env.config.resolve(args.degrees.clone(), "degrees")? {
        Some(list) => parse_list::<usize>(&list, "degrees")?,
        None => {
            let lo = env.config.resolve(args.n_min, "n_min")?.unwrap_or(2);
            let hi = env.config.resolve(args.n_max, "n_max")?.unwrap_or(100);
            let step = env.config.resolve(args.n_step, "n_step")?.unwrap_or(1);
            if step == 0 || lo > hi {
                bail!("empty degree range n_min={lo} n_max={hi} n_step={step}");
            }
            (lo..=hi).step_by(step).collect()
        }
    };
    let threshold = env
        .config
        .resolve(args.threshold, "threshold")?
        .unwrap_or(DEFAULT_CONVERGENCE_THRESHOLD);
    let f = env.function(&args.function)?;
    let report = korovkin_experiment(rule, &degrees, &env.grid, Some(&f), threshold)?;
    let v = &report.verdicts;
    let outcome = Outcome::from_pass(v.low_moments_exact && v.within_bound);
    Ok(env.finish("converge", report.to_table(), outcome))
}

fn parse_variants(kind: &str, text: Option<&str>) -> Result<TrendVariants> {
    Ok(match (kind, text) {
        ("vary_q", Some(t)) => TrendVariants::Q(parse_list(t, "variants")?),
        ("vary_n", Some(t)) => TrendVariants::N(parse_list(t, "variants")?),
        ("vary_pq", Some(t)) => TrendVariants::PQ(
            t.split(',')
                .map(|pair| {
                    let (p, q) = pair
                        .split_once(':')
                        .with_context(|| format!("variants: expected p:q, got `{pair}`"))?;
                    Ok((p.trim().parse()?, q.trim().parse()?))
                })
                .collect::<Result<Vec<_>>>()?,
        ),
        ("vary_q", None) => TrendVariants::Q(vec![0.5, 0.7, 0.9, 0.94]),
        ("vary_n", None) => TrendVariants::N(vec![5, 10, 20, 40]),
        ("vary_pq", None) => {
            TrendVariants::PQ(vec![(0.8, 0.75), (0.9, 0.85), (0.95, 0.9), (0.98, 0.95)])
        }
        (other, _) => bail!("unknown figure id `{other}` (expected vary_q, vary_n or vary_pq)"),
    })
}

/// Base operator used when varying along `kind`.
fn base_defaults(kind: &str) -> (usize, f64, f64) {
    match kind {
        "vary_n" => (10, 0.98, 0.95),
        "vary_pq" => (20, 0.95, 0.9),
        _ => (10, 0.95, 0.5),
    }
}

pub fn cmd_trend(args: &TrendArgs) -> Result<Emission> {
    let env = Plumbing::resolve(&args.operator.common)?;
    let kind = env
        .config
        .resolve(args.kind.clone(), "kind")?
        .unwrap_or_else(|| "vary_q".into());
    let text = env.config.resolve(args.variants.clone(), "variants")?;
    let variants = parse_variants(&kind, text.as_deref())?;
    let base = env.spec(&args.operator, base_defaults(&kind))?;
    let f = env.function(&args.operator.function)?;
    let report = trend_experiment(&base, &f, &env.grid, &variants)?;
    Ok(env.finish("trend", report.to_table(), Outcome::Pass))
}

pub fn cmd_figure(args: &FigureArgs) -> Result<Emission> {
    let env = Plumbing::resolve(&args.operator.common)?;
    let text = env.config.resolve(args.variants.clone(), "variants")?;
    let variants = parse_variants(&args.figure, text.as_deref())?;
    let base = env.spec(&args.operator, base_defaults(&args.figure))?;
    let f = env.function(&args.operator.function)?;
    let figure = figure_data(&base, &f, &env.grid, &variants)?;
    Ok(env.finish("figure", figure.to_table(), Outcome::Pass))
}
