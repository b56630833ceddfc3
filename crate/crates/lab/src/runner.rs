//! Experiment orchestration and report emission.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};
use shub_core::ergodic::{
    birkhoff_compare, central_exponent, central_exponent_samples, discrepancy_csv, growth_rate_table, lyapunov_csv,
    lyapunov_spectrum, periodic_discrepancy, random_start, LyapunovEstimate, Method, Observable,
};
use shub_core::periodic::{bowen_clusters, census, FinderConfig, PeriodicCensus};
use shub_core::seed::mix;
use shub_core::semiconj::{h_approx, log_residual_slope, residual_csv, residual_sweep};
use shub_core::torus::torus_distance;
use shub_core::{validate_params, ProductPoint, ShubSystem};
use thiserror::Error;

use crate::config::{ConfigError, Experiment, ExperimentConfig};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{module} ({params}): {message}")]
    Module {
        module: &'static str,
        params: String,
        message: String,
    },
    #[error("writing {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("thread pool: {0}")]
    Pool(String),
}

fn module_err(module: &'static str, params: impl Into<String>) -> impl FnOnce(String) -> RunError {
    let params = params.into();
    move |message| RunError::Module { module, params, message }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageTime {
    pub stage: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub experiment: String,
    pub config: ExperimentConfig,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub artifacts: Vec<String>,
    pub stages: Vec<StageTime>,
    pub metrics: BTreeMap<String, Value>,
}

impl RunReport {
    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Stage {
    Validate,
    Periodic,
    Bowen,
    Growth,
    Equidist,
    Semiconj,
    Lyapunov,
    Contracting,
    Birkhoff,
}

impl Stage {
    fn name(&self) -> &'static str {
        match self {
            Stage::Validate => "validate",
            Stage::Periodic => "periodic",
            Stage::Bowen => "bowen",
            Stage::Growth => "growth",
            Stage::Equidist => "equidist",
            Stage::Semiconj => "semiconj",
            Stage::Lyapunov => "lyapunov",
            Stage::Contracting => "contracting",
            Stage::Birkhoff => "birkhoff",
        }
    }

    /// Stable index used to derive per-stage seeds.
    fn stream(&self) -> u64 {
        *self as u64 + 1
    }
}

fn stages_for(exp: Experiment) -> Vec<Stage> {
    use Stage::*;
    let mut s = match exp {
        Experiment::Validate => vec![],
        Experiment::Periodic => vec![Periodic],
        Experiment::Bowen => vec![Periodic, Bowen],
        Experiment::Growth => vec![Periodic, Growth],
        Experiment::Equidist => vec![Equidist],
        Experiment::Semiconj => vec![Semiconj],
        Experiment::Lyapunov => vec![Lyapunov],
        Experiment::Contracting => vec![Contracting],
        Experiment::Birkhoff => vec![Birkhoff],
        Experiment::All => vec![Periodic, Bowen, Growth, Equidist, Semiconj, Lyapunov, Contracting, Birkhoff],
    };
    s.insert(0, Validate);
    s
}

/// Single funnel for everything written to the output directory.
struct Reporter {
    dir: PathBuf,
    artifacts: Vec<String>,
    checks: Vec<Check>,
    metrics: BTreeMap<String, Value>,
}

impl Reporter {
    fn write(&mut self, name: &str, contents: &str) -> Result<(), RunError> {
        let path = self.dir.join(name);
        std::fs::write(&path, contents).map_err(|source| RunError::Io { path, source })?;
        self.artifacts.push(name.to_string());
        Ok(())
    }

    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    fn metric(&mut self, key: impl Into<String>, value: Value) {
        self.metrics.insert(key.into(), value);
    }
}

struct Context<'a> {
    cfg: &'a ExperimentConfig,
    sys: ShubSystem,
    finder: FinderConfig,
    censuses: BTreeMap<u32, PeriodicCensus>,
}

impl Context<'_> {
    fn seed(&self, stage: Stage) -> u64 {
        mix(self.cfg.master_seed, stage.stream())
    }

    fn census(&mut self, n: u32, rep: &mut Reporter) -> Result<&PeriodicCensus, RunError> {
        if !self.censuses.contains_key(&n) {
            let c = census(&self.sys, n, &self.finder)
                .map_err(|e| module_err("periodic_finder", format!("n={n}"))(e.to_string()))?;
            rep.write(&format!("census_n{n}.csv"), &c.to_csv())?;
            self.censuses.insert(n, c);
        }
        Ok(&self.censuses[&n])
    }
}

/// Runs `cfg.experiment` and the stages it depends on, writing artifacts to
/// `cfg.output_dir` and `report.json` last.
pub fn run(cfg: &ExperimentConfig) -> Result<RunReport, RunError> {
    cfg.check()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.thread_count)
        .build()
        .map_err(|e| RunError::Pool(e.to_string()))?;
    pool.install(|| run_in_pool(cfg))
}

fn run_in_pool(cfg: &ExperimentConfig) -> Result<RunReport, RunError> {
    let dir = cfg.output_dir.clone();
    std::fs::create_dir_all(&dir).map_err(|source| RunError::Io { path: dir.clone(), source })?;
    let mut rep = Reporter {
        dir,
        artifacts: Vec::new(),
        checks: Vec::new(),
        metrics: BTreeMap::new(),
    };
    let sys = validate_params(cfg.system.to_params()).map_err(|e| ConfigError::Invalid {
        field: "system",
        message: e.to_string(),
    })?;
    let mut ctx = Context {
        cfg,
        sys,
        finder: FinderConfig {
            cap: cfg.periodic.cap,
            ..FinderConfig::default()
        },
        censuses: BTreeMap::new(),
    };
    let mut stages = Vec::new();
    for stage in stages_for(cfg.experiment) {
        let t0 = Instant::now();
        match stage {
            Stage::Validate => validate_stage(&ctx, &mut rep),
            Stage::Periodic => periodic_stage(&mut ctx, &mut rep)?,
            Stage::Bowen => bowen_stage(&mut ctx, &mut rep)?,
            Stage::Growth => growth_stage(&mut ctx, &mut rep)?,
            Stage::Equidist => equidist_stage(&mut ctx, &mut rep)?,
            Stage::Semiconj => semiconj_stage(&mut ctx, &mut rep)?,
            Stage::Lyapunov => lyapunov_stage(&ctx, &mut rep)?,
            Stage::Contracting => contracting_stage(&ctx, &mut rep)?,
            Stage::Birkhoff => birkhoff_stage(&ctx, &mut rep)?,
        }
        stages.push(StageTime {
            stage: stage.name().to_string(),
            seconds: t0.elapsed().as_secs_f64(),
        });
    }
    rep.artifacts.push("report.json".to_string());
    let report = RunReport {
        experiment: cfg.experiment.as_str().to_string(),
        config: cfg.clone(),
        passed: rep.checks.iter().all(|c| c.passed),
        checks: rep.checks,
        artifacts: rep.artifacts,
        stages,
        metrics: rep.metrics,
    };
    let path = report_path(&cfg.output_dir);
    let text = serde_json::to_string_pretty(&report).expect("report serialises");
    std::fs::write(&path, text + "\n").map_err(|source| RunError::Io { path, source })?;
    Ok(report)
}

pub fn report_path(dir: &Path) -> PathBuf {
    dir.join("report.json")
}

fn validate_stage(ctx: &Context, rep: &mut Reporter) {
    let s = &ctx.sys;
    rep.metric("gamma", json!(s.gamma()));
    rep.metric("gamma1", json!(s.gamma1()));
    rep.metric("gamma2", json!(s.gamma2()));
    rep.metric("h_top", json!(s.topological_entropy()));
    rep.check(
        "validate: gamma < gamma1",
        s.gamma() < s.gamma1(),
        format!("gamma = {}, gamma1 = {}, gamma2 = lambda_s e^T = {}", s.gamma(), s.gamma1(), s.gamma2()),
    );
}

fn census_range(cfg: &ExperimentConfig) -> std::ops::RangeInclusive<u32> {
    cfg.periodic.n_range[0]..=cfg.periodic.n_range[1]
}

fn periodic_stage(ctx: &mut Context, rep: &mut Reporter) -> Result<(), RunError> {
    let perturbed = ctx.sys.is_perturbed();
    for n in census_range(ctx.cfg) {
        let c = ctx.census(n, rep)?;
        let (prod, skew) = (c.total_product_count, c.total_skew_count);
        let warnings: usize = c.classes.iter().map(|k| k.warnings.len()).sum();
        let sandwich = c.sandwich_holds();
        rep.metric(
            format!("periodic.n{n}"),
            json!({"total_product": prod, "total_skew": skew, "warnings": warnings}),
        );
        rep.check(
            format!("periodic n={n}: sandwich"),
            sandwich,
            format!("{prod} <= {skew} <= {}", 3 * prod),
        );
        if !perturbed {
            rep.check(format!("periodic n={n}: product counts"), skew == prod, format!("{skew} vs {prod}"));
        }
    }
    Ok(())
}

fn bowen_stage(ctx: &mut Context, rep: &mut Reporter) -> Result<(), RunError> {
    let eps = ctx.cfg.bowen.epsilon;
    let mut csv = String::from("n,class_id,solution,size\n");
    for n in census_range(ctx.cfg).filter(|&n| n <= ctx.cfg.bowen.max_n) {
        let c = ctx.census(n, rep)?.clone();
        let clusters = bowen_clusters(&ctx.sys, &c, eps, n as usize)
            .map_err(|e| module_err("periodic_finder", format!("bowen n={n} epsilon={eps}"))(e.to_string()))?;
        let largest = clusters.iter().map(|k| k.size()).max().unwrap_or(0);
        for k in &clusters {
            let _ = writeln!(csv, "{},{},{},{}", n, k.centre.0, k.centre.1, k.size());
        }
        rep.check(
            format!("bowen n={n}: cluster size"),
            largest <= ctx.cfg.bowen.max_cluster,
            format!("largest {largest} at epsilon {eps}"),
        );
    }
    rep.write("bowen.csv", &csv)
}

fn growth_stage(ctx: &mut Context, rep: &mut Reporter) -> Result<(), RunError> {
    let mut cs = Vec::new();
    for n in census_range(ctx.cfg) {
        cs.push(ctx.census(n, rep)?.clone());
    }
    let table = growth_rate_table(&ctx.sys, &cs);
    rep.write("growth.csv", &table.to_csv())?;
    rep.write("growth.plt", &table.gnuplot_script("growth.csv"))?;
    for r in &table.rows {
        let gap = r.skew_rate - r.product_rate;
        rep.check(
            format!("growth n={}: sandwich", r.n),
            gap >= 0.0 && gap <= r.slack + 1e-9,
            format!("skew - product = {gap}, slack {}", r.slack),
        );
        if r.n >= ctx.cfg.growth.min_n {
            let bound = r.slack + ctx.cfg.growth.tolerance;
            rep.check(
                format!("growth n={}: entropy", r.n),
                r.deviation.abs() <= bound,
                format!("|{} - {}| <= {bound}", r.skew_rate, table.h_top),
            );
        }
    }
    Ok(())
}

fn equidist_stage(ctx: &mut Context, rep: &mut Reporter) -> Result<(), RunError> {
    let e = ctx.cfg.equidist.clone();
    let mut reports = Vec::new();
    for n in e.n_range[0]..=e.n_range[1] {
        let c = ctx.census(n, rep)?.clone();
        reports.push(
            periodic_discrepancy(&ctx.sys, &c, e.depth, e.grid)
                .map_err(|err| module_err("semiconjugacy", format!("discrepancy n={n}"))(err.to_string()))?,
        );
    }
    rep.write("discrepancy.csv", &discrepancy_csv(&reports))?;
    rep.write(
        "discrepancy.plt",
        "set datafile separator ','\nset key autotitle columnhead\nset xlabel 'n'\nset ylabel 'discrepancy'\nset logscale y\nplot 'discrepancy.csv' using 1:3 with linespoints title 'discrepancy'\n",
    )?;
    let values: Vec<f64> = reports.iter().map(|r| r.discrepancy).collect();
    let decreasing = values.windows(2).all(|w| w[1] < w[0]);
    rep.metric("equidist.discrepancy", json!(values));
    rep.check(
        "equidist: strictly decreasing",
        decreasing,
        format!("{values:?} for n = {}..={}", e.n_range[0], e.n_range[1]),
    );
    Ok(())
}

fn semiconj_stage(ctx: &mut Context, rep: &mut Reporter) -> Result<(), RunError> {
    let sc = ctx.cfg.semiconj.clone();
    let seed = ctx.seed(Stage::Semiconj);
    let err = |e: shub_core::SystemError| module_err("semiconjugacy", format!("K={}", sc.depth))(e.to_string());
    let mut depths = sc.sweep.clone();
    if !depths.contains(&sc.depth) {
        depths.push(sc.depth);
    }
    depths.sort_unstable();
    let rows = residual_sweep(&ctx.sys, &depths, sc.samples, seed).map_err(err)?;
    rep.write("semiconj.csv", &residual_csv(&rows))?;
    rep.write(
        "semiconj.plt",
        "set datafile separator ','\nset key autotitle columnhead\nset xlabel 'K'\nset logscale y\nplot 'semiconj.csv' using 1:2 with linespoints title 'residual', 'semiconj.csv' using 1:3 with lines title 'bound'\n",
    )?;
    let at_depth = rows.iter().find(|r| r.depth == sc.depth).map(|r| r.residual).unwrap_or(f64::NAN);
    rep.metric("semiconj.residual", json!(at_depth));
    rep.check(
        format!("semiconj: residual at K={}", sc.depth),
        at_depth < sc.residual_threshold,
        format!("{at_depth:e} over {} points", sc.samples),
    );
    if ctx.sys.is_perturbed() {
        let sweep: Vec<_> = rows.iter().filter(|r| sc.sweep.contains(&r.depth)).copied().collect();
        let target = ctx.sys.l().log_lambda_s();
        let slope = log_residual_slope(&sweep);
        rep.metric("semiconj.slope", json!(slope));
        rep.check(
            "semiconj: geometric decay",
            slope.is_some_and(|s| ((s - target) / target).abs() <= sc.slope_tolerance),
            format!("slope {slope:?} vs log lambda_s = {target}"),
        );
    }
    let c = ctx.census(1, rep)?.clone();
    let mut worst: f64 = 0.0;
    for class in c.classes.iter().filter(|k| k.len() == 3) {
        let mid = h_approx(&ctx.sys, class.solutions[1].point(class.base_point), sc.depth).map_err(err)?;
        for s in &class.solutions {
            let img = h_approx(&ctx.sys, s.point(class.base_point), sc.depth).map_err(err)?;
            worst = worst.max(img.distance(&mid));
            worst = worst.max(torus_distance(img.fiber, class.target_fiber));
        }
    }
    rep.check(
        "semiconj: class collapse",
        worst < sc.collapse_tolerance,
        format!("max distance {worst:e}"),
    );
    Ok(())
}

fn lyapunov_stage(ctx: &Context, rep: &mut Reporter) -> Result<(), RunError> {
    let ly = &ctx.cfg.lyapunov;
    let s = &ctx.sys;
    let seed = ctx.seed(Stage::Lyapunov);
    let p = s.params();
    let mut starts: Vec<ProductPoint> = (0..ly.starts as u64).map(|i| random_start(seed, i)).collect();
    let random = starts.len();
    starts.push(ProductPoint::new(p.p, p.theta0));
    starts.push(ProductPoint::new(p.q, p.theta0));
    let err = |e: shub_core::SystemError| module_err("ergodic_analysis", format!("N={}", ly.horizon))(e.to_string());
    let mut all: Vec<LyapunovEstimate> = Vec::new();
    let pairs: Vec<(LyapunovEstimate, LyapunovEstimate)> = {
        use rayon::prelude::*;
        starts
            .par_iter()
            .map(|&st| {
                Ok((
                    lyapunov_spectrum(s, st, ly.horizon, Method::Qr4d)?,
                    lyapunov_spectrum(s, st, ly.horizon, Method::Triangular)?,
                ))
            })
            .collect::<Result<_, shub_core::SystemError>>()
            .map_err(err)?
    };
    for (a, b) in &pairs {
        all.push(*a);
        all.push(*b);
    }
    rep.write("lyapunov.csv", &lyapunov_csv(&all))?;

    let lb = s.phi().log_lambda_u();
    let lu = s.l().log_lambda_u();
    let (lo, hi) = (s.gamma1().ln(), s.gamma2().ln());
    for (i, (qr, tri)) in pairs.iter().take(random).enumerate() {
        let mut rest = qr.exponents.to_vec();
        let mut matched = true;
        for target in [-lb, lu, lb] {
            let (j, d) = rest
                .iter()
                .enumerate()
                .map(|(j, e)| (j, (e - target).abs()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .expect("four exponents");
            matched &= d <= ly.tolerance;
            rest.remove(j);
        }
        let lc = rest[0];
        rep.check(
            format!("lyapunov start {i}: base and unstable exponents"),
            matched,
            format!("{:?} vs {{{}, {lu}, {lb}}}", qr.exponents, -lb),
        );
        rep.check(
            format!("lyapunov start {i}: centre interval"),
            lc >= lo && lc <= hi,
            format!("{lc} in [{lo}, {hi}]"),
        );
        let diff = qr.max_difference(tri);
        rep.check(
            format!("lyapunov start {i}: method agreement"),
            diff < ly.agreement,
            format!("max difference {diff:e}"),
        );
    }
    let ls = s.l().log_lambda_s();
    let at_p = central_exponent(s, ProductPoint::new(p.p, p.theta0), ly.horizon).map_err(err)?;
    rep.check(
        "lyapunov: centre exponent at (p, theta0)",
        (at_p - ls).abs() < 1e-9,
        format!("{at_p} vs log lambda_s = {ls}"),
    );
    let q_central = central_exponent(s, ProductPoint::new(p.q, p.theta0), ly.horizon).map_err(err)?;
    let expect = ls + p.t;
    rep.check(
        "lyapunov: centre exponent at (q, theta0)",
        (q_central - expect).abs() < 1e-6,
        format!("{q_central} vs log(lambda_s e^T) = {expect}"),
    );
    rep.metric("lyapunov.qr4d", json!(pairs[..random].iter().map(|x| x.0.exponents).collect::<Vec<_>>()));
    Ok(())
}

fn contracting_stage(ctx: &Context, rep: &mut Reporter) -> Result<(), RunError> {
    let c = &ctx.cfg.contracting;
    let exps = central_exponent_samples(&ctx.sys, c.samples, c.horizon, ctx.seed(Stage::Contracting))
        .map_err(|e| module_err("ergodic_analysis", format!("contracting N={}", c.horizon))(e.to_string()))?;
    let mut csv = String::from("sample,central_exponent\n");
    for (i, e) in exps.iter().enumerate() {
        let _ = writeln!(csv, "{i},{e}");
    }
    rep.write("contracting.csv", &csv)?;
    let frac = exps.iter().filter(|&&e| e < 0.0).count() as f64 / exps.len() as f64;
    rep.metric("contracting.fraction", json!(frac));
    rep.check(
        "contracting: fraction",
        frac >= c.threshold,
        format!("{frac} of {} starts at N={}", c.samples, c.horizon),
    );
    Ok(())
}

fn birkhoff_stage(ctx: &Context, rep: &mut Reporter) -> Result<(), RunError> {
    let b = &ctx.cfg.birkhoff;
    let obs = Observable::default_set();
    let r = birkhoff_compare(&ctx.sys, b.starts, b.horizon, &obs, ctx.seed(Stage::Birkhoff))
        .map_err(|e| module_err("ergodic_analysis", format!("birkhoff N={}", b.horizon))(e.to_string()))?;
    let mut csv = String::from("start");
    for o in &obs {
        let _ = write!(csv, ",{}", o.name());
    }
    csv.push('\n');
    for (i, a) in r.averages.iter().enumerate() {
        let _ = write!(csv, "{i}");
        for v in a {
            let _ = write!(csv, ",{v}");
        }
        csv.push('\n');
    }
    rep.write("birkhoff.csv", &csv)?;
    rep.metric("birkhoff.max_spread", json!(r.max_spread));
    rep.check(
        "birkhoff: spread",
        r.max_spread < b.spread_threshold,
        format!("{} across {} starts at N={}", r.max_spread, b.starts, b.horizon),
    );
    if !ctx.sys.is_perturbed() {
        let tol = 3.0 / (b.horizon as f64).sqrt();
        let bias = r.max_bias().into_iter().fold(0.0, f64::max);
        rep.check("birkhoff: Lebesgue means", bias < tol, format!("max bias {bias} vs {tol}"));
    }
    Ok(())
}

