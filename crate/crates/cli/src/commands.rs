use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Subcommand, ValueEnum};
use mebval::aggregate::{candidate_balls_with, solve_minmax};
use mebval::oracle::{exhaustive_factor_with, grid_minmax};
use mebval::scenarios::{Construction, Instance, ScenarioSpec, Strategy};
use mebval::validity::{
    check_bias_bound_tol, check_box, check_c_meb_tol, check_convex, relaxation_factor, safe_meb_empty,
    theoretical_bound, Certificate, Condition,
};
use mebval::{aggregate_with, io, linalg, meb, AggregateOptions, PointSet, Rule};
use rayon::prelude::*;

use crate::report::{Check, Meta, Report, RuleReport, SweepRow};
use crate::{parse_rules, CliError, CliResult, Global, Rules};

fn parse_rule(s: &str) -> Result<Rule, String> {
    s.parse::<Rule>().map_err(|e| e.to_string())
}

#[derive(Debug, Clone)]
pub struct Values(pub Vec<usize>);

/// `a..b` (inclusive), `a,b,c` or a single value.
fn parse_range(s: &str) -> Result<Values, String> {
    let num = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("{x:?}: {e}"));
    if let Some((lo, hi)) = s.split_once("..") {
        let (lo, hi) = (num(lo)?, num(hi.trim_start_matches('='))?);
        if lo > hi {
            return Err(format!("empty range {s}"));
        }
        return Ok(Values((lo..=hi).collect()));
    }
    s.split(',').map(num).collect::<Result<_, _>>().map(Values)
}

fn options(g: &Global) -> AggregateOptions {
    AggregateOptions {
        max_subsets: g.max_subsets,
        ..AggregateOptions::default()
    }
}

fn meta(points: &PointSet, t: usize) -> Meta {
    Meta {
        n: Some(points.len()),
        t: Some(t),
        d: Some(points.dim()),
        ..Meta::default()
    }
}

fn bound_for(rule: Rule, points: &PointSet, t: usize) -> Option<f64> {
    theoretical_bound(rule, points.len(), t, points.dim()).ok()
}

/// Factor of `y` with its source, plus certificates. Labels are used when
/// present unless `exhaustive` is set; otherwise the factor is the worst case
/// over every size-(n-t) designation.
fn certify_output(
    points: &PointSet,
    t: usize,
    y: &[f64],
    c: Option<f64>,
    exhaustive: bool,
    g: &Global,
) -> CliResult<(f64, &'static str, Vec<Certificate>)> {
    points.ensure_dim(y)?;
    if points.labels().is_some() && !exhaustive {
        let honest = points.honest()?;
        let factor = relaxation_factor(y, &meb(&honest)?);
        let mut certs = Vec::new();
        if let Some(c) = c.filter(|&c| c >= 1.0) {
            certs.push(check_c_meb_tol(y, &honest, c, g.tol)?);
        }
        certs.push(check_convex(y, &honest)?);
        certs.push(check_box(y, &honest)?);
        if let Some(c) = c {
            certs.push(check_bias_bound_tol(y, &honest, c, g.tol)?);
        }
        return Ok((factor, "labels", certs));
    }
    let factor = exhaustive_factor_with(points, t, y, g.max_subsets)?;
    let certs = c
        .map(|c| {
            let condition = if c == 1.0 { Condition::Meb } else { Condition::CMeb { c } };
            Certificate {
                condition,
                achieved: factor,
                bound: c,
                pass: factor <= c + g.tol,
                witness: None,
            }
        })
        .into_iter()
        .collect();
    Ok((factor, "exhaustive", certs))
}

fn rule_report(rule: Rule, points: &PointSet, t: usize, g: &Global) -> CliResult<RuleReport> {
    rule_report_with(rule, points, t, g, &options(g))
}

fn rule_report_with(
    rule: Rule,
    points: &PointSet,
    t: usize,
    g: &Global,
    opts: &AggregateOptions,
) -> CliResult<RuleReport> {
    let start = Instant::now();
    let out = aggregate_with(rule, points, t, opts)?;
    let bound = bound_for(rule, points, t);
    let (factor, source, certificates) = certify_output(points, t, &out.output, bound, false, g)?;
    let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(RuleReport {
        rule: rule.name().to_string(),
        output: out.output,
        factor: Some(factor),
        factor_source: Some(source.to_string()),
        bound,
        certificates,
        pass: bound.is_none_or(|b| factor <= b + g.tol),
        wall_time_ms,
    })
}

#[derive(Args, Debug)]
pub struct AggregateArgs {
    /// Point file: CSV (optional trailing honest/byz column) or .json.
    pub input: PathBuf,
    /// Comma-separated rules, or `all`.
    #[arg(long, default_value = "minmax-meb", value_parser = parse_rules)]
    pub rule: Rules,
    /// Number of tolerated Byzantine inputs.
    #[arg(long)]
    pub t: usize,
}

pub fn aggregate(args: &AggregateArgs, g: &Global) -> CliResult<Report> {
    let points = io::read_points(&args.input)?;
    let mut report = Report::new("aggregate", meta(&points, args.t));
    report.instance.seed = Some(g.seed);
    for &rule in &args.rule.0 {
        report.rules.push(rule_report(rule, &points, args.t, g)?);
    }
    Ok(report.finish())
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    pub input: PathBuf,
    /// Output vector to certify, comma-separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub output: Vec<f64>,
    #[arg(long)]
    pub t: usize,
    /// Relaxation factor the output must achieve.
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    /// Ignore labels and take the worst case over all designations.
    #[arg(long)]
    pub exhaustive: bool,
}

pub fn certify(args: &CertifyArgs, g: &Global) -> CliResult<Report> {
    let points = io::read_points(&args.input)?;
    if args.t >= points.len() {
        return Err(mebval::Error::InvalidFaultBudget { n: points.len(), t: args.t }.into());
    }
    let start = Instant::now();
    let (factor, source, certificates) =
        certify_output(&points, args.t, &args.output, Some(args.c), args.exhaustive, g)?;
    let mut report = Report::new("certify", meta(&points, args.t));
    report.instance.seed = Some(g.seed);
    report.rules.push(RuleReport {
        rule: "given".to_string(),
        output: args.output.clone(),
        factor: Some(factor),
        factor_source: Some(source.to_string()),
        bound: Some(args.c),
        certificates,
        pass: factor <= args.c + g.tol,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    });
    Ok(report.finish())
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum StrategyArg {
    UniformFar,
    ClusterCollusion,
    Search,
}

impl StrategyArg {
    fn build(self, rule: Rule, starts: usize) -> Strategy {
        match self {
            StrategyArg::UniformFar => Strategy::UniformFar,
            StrategyArg::ClusterCollusion => Strategy::ClusterCollusion,
            StrategyArg::Search => Strategy::Search { rule, starts },
        }
    }
}

#[derive(Args, Debug)]
pub struct AttackArgs {
    /// Byzantine placement.
    #[arg(long, value_enum, default_value_t = StrategyArg::UniformFar)]
    pub strategy: StrategyArg,
    /// Rule the search strategy attacks.
    #[arg(long, default_value = "medoid", value_parser = parse_rule)]
    pub search_rule: Rule,
    /// Random starts for the search strategy.
    #[arg(long, default_value_t = 8)]
    pub starts: usize,
}

#[derive(Subcommand, Debug)]
pub enum ScenarioKind {
    /// Empty-intersection construction for MinMax-MEB.
    LowerBound {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        t: usize,
    },
    /// Medoid counterexample.
    MedoidCe {
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 10.0)]
        x: f64,
    },
    /// Geometric median impossibility instance.
    GmImpossibilityCe {
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 10.0)]
        x: f64,
    },
    /// Geometric median convex-validity violation.
    GmConvexCe {
        #[arg(long)]
        t: usize,
    },
    /// k+1 mutually tangent unit balls.
    TangentBalls {
        #[arg(long)]
        k: usize,
    },
    /// Honest points only, uniform in a ball.
    RandomHonest {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 1.0)]
        spread: f64,
    },
    /// Honest points plus t Byzantine points.
    Attack {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 1.0)]
        spread: f64,
        #[command(flatten)]
        attack: AttackArgs,
    },
    /// Scenario description read from a JSON file.
    FromFile { path: PathBuf },
}

#[derive(Args, Debug)]
pub struct ScenarioArgs {
    #[command(subcommand)]
    pub kind: ScenarioKind,
    /// Directory for points.csv (or balls.json) and scenario.json.
    #[arg(long, global = true)]
    pub emit: Option<PathBuf>,
    /// Check the construction's defining property.
    #[arg(long, global = true)]
    pub verify: bool,
}

fn scenario_spec(kind: &ScenarioKind, seed: u64) -> CliResult<ScenarioSpec> {
    Ok(match *kind {
        ScenarioKind::LowerBound { d, t } => ScenarioSpec::LowerBound { d, t },
        ScenarioKind::MedoidCe { t, x } => ScenarioSpec::MedoidCE { t, x },
        ScenarioKind::GmImpossibilityCe { t, x } => ScenarioSpec::GMImpossibilityCE { t, x },
        ScenarioKind::GmConvexCe { t } => ScenarioSpec::GMConvexCE { t },
        ScenarioKind::TangentBalls { k } => ScenarioSpec::TangentBalls { k },
        ScenarioKind::RandomHonest { n, t, d, spread } => ScenarioSpec::RandomHonest { n, t, d, spread, seed },
        ScenarioKind::Attack {
            n,
            t,
            d,
            spread,
            ref attack,
        } => ScenarioSpec::Attack {
            n,
            t,
            d,
            spread,
            seed,
            strategy: attack.strategy.build(attack.search_rule, attack.starts),
        },
        ScenarioKind::FromFile { ref path } => serde_json::from_str(&fs::read_to_string(path)?)?,
    })
}

fn kind_name(spec: &ScenarioSpec) -> CliResult<String> {
    let value = serde_json::to_value(spec)?;
    Ok(value["kind"].as_str().unwrap_or_default().to_string())
}

fn write_emit(dir: &Path, spec: &ScenarioSpec, instance: &Instance) -> CliResult<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("scenario.json"), serde_json::to_string_pretty(spec)? + "\n")?;
    match instance {
        Instance::Points(c) => fs::write(dir.join("points.csv"), io::write_csv(&c.points))?,
        Instance::Balls(b) => {
            let balls: Vec<_> = b.balls().collect();
            fs::write(dir.join("balls.json"), serde_json::to_string_pretty(&balls)? + "\n")?
        }
    }
    Ok(())
}

pub fn scenario(args: &ScenarioArgs, g: &Global) -> CliResult<Report> {
    let spec = scenario_spec(&args.kind, g.seed)?;
    let instance = spec.generate()?;
    if let Some(dir) = &args.emit {
        write_emit(dir, &spec, &instance)?;
    }
    let mut report = Report::new("scenario", Meta::default());
    report.instance.scenario = Some(kind_name(&spec)?);
    if let ScenarioSpec::RandomHonest { seed, .. } | ScenarioSpec::Attack { seed, .. } = spec {
        report.instance.seed = Some(seed);
    }
    match &instance {
        Instance::Points(c) => {
            report.instance.n = Some(c.points.len());
            report.instance.t = Some(c.t);
            report.instance.d = Some(c.points.dim());
            if args.verify {
                verify_construction(&spec, c, g, &mut report)?;
            }
        }
        Instance::Balls(balls) => {
            report.instance.n = Some(balls.len());
            report.instance.d = Some(balls.dim());
            if args.verify {
                let ScenarioSpec::TangentBalls { k } = spec else { unreachable!("only tangent balls yield balls") };
                let k = k.min(balls.dim()) as f64;
                let expected = (k - 1.0) / (k + 1.0 + (2.0 * (k + 1.0) * k).sqrt());
                let (_, value) = solve_minmax(balls)?;
                report.checks.push(Check::near("min-max-value", value, expected, 1e-4));
                report.checks.push(Check::near("certified-factor", 1.0 + value, 1.0 + expected, 1e-4));
            }
        }
    }
    Ok(report.finish())
}

fn verify_construction(spec: &ScenarioSpec, c: &Construction, g: &Global, report: &mut Report) -> CliResult<()> {
    let points = &c.points;
    match *spec {
        ScenarioSpec::MedoidCE { .. } => {
            let r = rule_report(Rule::Medoid, points, c.t, g)?;
            let out = r.output.clone();
            let in_b_or_c = out == [1.0, 1.0] || out == [3.0, 1.0];
            let hostile = c.designations[..2]
                .iter()
                .map(|d| linalg::dist(&out, &d.ball.center))
                .fold(f64::NEG_INFINITY, f64::max);
            report.checks.push(Check::flag("output-in-b-or-c", in_b_or_c));
            report.checks.push(Check::near("distance-to-hostile-centre", hostile, 5f64.sqrt(), 1e-9));
            report.rules.push(r);
        }
        ScenarioSpec::GMImpossibilityCE { .. } => {
            let r = rule_report(Rule::GeometricMedian, points, c.t, g)?;
            let fermat = [2.0, 1.0 - 1.0 / 3f64.sqrt()];
            report
                .checks
                .push(Check::near("distance-to-fermat-point", linalg::dist(&r.output, &fermat), 0.0, 0.01));
            report
                .checks
                .push(Check::near("distance-to-unit-centre", linalg::dist(&r.output, &[1.0, 0.0]), 1.0857, 0.01));
            report.rules.push(r);
        }
        ScenarioSpec::GMConvexCE { .. } => {
            let r = rule_report(Rule::GeometricMedian, points, c.t, g)?;
            let cert = check_convex(&r.output, &points.honest()?)?;
            report.checks.push(Check::above("distance-to-honest-hull", cert.achieved, 0.01));
            report.checks.push(Check::flag("convex-validity-fails", !cert.pass));
            report.rules.push(r);
        }
        ScenarioSpec::LowerBound { d, .. } => {
            let balls = candidate_balls_with(points, c.t, g.max_subsets)?;
            let (empty, value) = safe_meb_empty(&balls)?;
            report.checks.push(Check::flag("safe-area-empty", empty));
            report.checks.push(Check::above("min-max-value", value, 1e-3));
            let resolution = match d {
                1 => Some(2000),
                2 => Some(400),
                3 => Some(100),
                _ => None,
            };
            if let Some(res) = resolution {
                let (_, grid) = grid_minmax(&balls, res)?;
                report.checks.push(Check::near("grid-min-max-value", grid.max(0.0), value, 1e-3));
            }
            // Small instances of the construction have n = 2t.
            let opts = AggregateOptions {
                allow_non_resilient: true,
                ..options(g)
            };
            report.rules.push(rule_report_with(Rule::MinmaxMeb, points, c.t, g, &opts)?);
        }
        ScenarioSpec::RandomHonest { .. } | ScenarioSpec::Attack { .. } => {
            for rule in Rule::ALL {
                if rule == Rule::MinmaxMeb && points.len() <= 2 * c.t {
                    continue;
                }
                report.rules.push(rule_report(rule, points, c.t, g)?);
            }
        }
        ScenarioSpec::TangentBalls { .. } => unreachable!("tangent balls carry no points"),
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Comma-separated rules, or `all`.
    #[arg(long, default_value = "mda,medoid,geomedian,minmax-meb", value_parser = parse_rules)]
    pub rules: Rules,
    /// Input counts: `a..b` (inclusive) or a comma list.
    #[arg(long, default_value = "5..9", value_parser = parse_range)]
    pub n: Values,
    /// Fault budgets; defaults to every t with n > 2t.
    #[arg(long, value_parser = parse_range)]
    pub t: Option<Values>,
    #[arg(long, default_value = "2", value_parser = parse_range)]
    pub d: Values,
    /// Seeds per grid point, starting at --seed.
    #[arg(long, default_value_t = 20)]
    pub seeds: u64,
    #[arg(long, default_value_t = 1.0)]
    pub spread: f64,
    #[command(flatten)]
    pub attack: AttackArgs,
}

pub fn bench(args: &BenchArgs, g: &Global) -> CliResult<Report> {
    let rules = &args.rules.0;
    let mut grid = Vec::new();
    for &n in &args.n.0 {
        let ts: Vec<usize> = match &args.t {
            Some(ts) => ts.0.clone(),
            None => (0..n.div_ceil(2)).collect(),
        };
        for &t in ts.iter().filter(|&&t| n > 2 * t) {
            for &d in &args.d.0 {
                grid.push((n, t, d));
            }
        }
    }
    if grid.is_empty() || rules.is_empty() || args.seeds == 0 {
        return Err(CliError::Usage("bench grid is empty".to_string()));
    }
    let strategy = args.attack.strategy.build(args.attack.search_rule, args.attack.starts);
    let jobs: Vec<(usize, u64)> = (0..grid.len())
        .flat_map(|cfg| (0..args.seeds).map(move |s| (cfg, s)))
        .collect();
    let opts = options(g);
    let factors: Vec<Vec<f64>> = jobs
        .par_iter()
        .map(|&(cfg, s)| -> CliResult<Vec<f64>> {
            let (n, t, d) = grid[cfg];
            let points = mebval::scenarios::random_instance(n, t, d, args.spread, g.seed + s, strategy)?;
            let ball = meb(&points.honest()?)?;
            rules
                .iter()
                .map(|&rule| Ok(relaxation_factor(&aggregate_with(rule, &points, t, &opts)?.output, &ball)))
                .collect()
        })
        .collect::<CliResult<_>>()?;

    let mut report = Report::new("bench", Meta { seed: Some(g.seed), ..Meta::default() });
    let per_cfg = args.seeds as usize;
    for (cfg, &(n, t, d)) in grid.iter().enumerate() {
        let block = &factors[cfg * per_cfg..(cfg + 1) * per_cfg];
        for (r, &rule) in rules.iter().enumerate() {
            let values: Vec<f64> = block.iter().map(|f| f[r]).collect();
            let max_factor = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let mean_factor = values.iter().sum::<f64>() / values.len() as f64;
            let bound = theoretical_bound(rule, n, t, d).ok();
            report.sweep.push(SweepRow {
                rule: rule.name().to_string(),
                n,
                t,
                d,
                instances: values.len(),
                max_factor,
                mean_factor,
                bound,
                pass: bound.is_none_or(|b| max_factor <= b + g.tol),
            });
        }
    }
    Ok(report.finish())
}
