//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::f64::consts::E;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use mulfix::conditions::{check_phi, classify, estimate_constants, ClassifyOptions, PhiSpec};
use mulfix::harness::{
    fixture_config, remark_2_5, run_experiment, run_fixture, ExperimentConfig, FixtureReport,
    FIXTURE_NAMES,
};
use mulfix::metric::{verify_axioms, verify_reverse_triangle, BaseMetric, BoxDomain};
use mulfix::sampling::{self, linspace};
use mulfix::sequence::cauchy_indicator;
use mulfix::solver::{picard, verify_bound, SolverConfig, BOUND_TOL};
use mulfix::{
    ConditionId, FixedPointResult, MetricSpec, Point, SelfMapSpec, TraceStatus, ZamfirescuConstants,
};

type Check = Result<String, String>;

fn ensure(ok: bool, msg: String) -> Check {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn run_all(
    metric: &MetricSpec,
    map: &SelfMapSpec,
    starts: &[Point],
    config: &SolverConfig,
) -> Result<Vec<FixedPointResult>, String> {
    starts
        .iter()
        .map(|s| picard(metric, map, s, config).map_err(|e| format!("start {s}: {e}")))
        .collect()
}

fn max_coord_err(results: &[FixedPointResult], target: &[f64]) -> f64 {
    results
        .iter()
        .flat_map(|r| {
            r.point
                .coords()
                .iter()
                .zip(target)
                .map(|(a, b)| (a - b).abs())
        })
        .fold(0.0, f64::max)
}

fn all_converged(results: &[FixedPointResult]) -> bool {
    results.iter().all(|r| r.status == TraceStatus::Converged)
}

fn criterion_1() -> Check {
    let t = Instant::now();
    let cfg = fixture_config("example_3_15").map_err(|e| e.to_string())?;
    let solver = cfg.effective_solver();
    let results = run_all(&cfg.metric, &cfg.map, &solver.starts, &solver)?;
    let sample = sampling::sample(&cfg.domain, cfg.sample_size, cfg.sampling, cfg.seed);
    let xi = estimate_constants(&cfg.metric, &cfg.map, &sample)
        .map_err(|e| e.to_string())?
        .xi;
    let elapsed = t.elapsed();
    let err = max_coord_err(&results, &[0.0, 0.0]);
    let residual = results
        .iter()
        .map(|r| r.residual_logd.value())
        .fold(0.0, f64::max);
    ensure(
        all_converged(&results)
            && err <= 1e-8
            && residual <= 1e-8
            && (xi - 2.0 / 3.0).abs() <= 1e-9
            && elapsed < Duration::from_secs(1),
        format!("|z - (0,0)| = {err:.2e}, residual {residual:.2e}, xi = {xi:.12}, {elapsed:.2?}"),
    )
}

fn criterion_2() -> Check {
    let t = Instant::now();
    let metric = MetricSpec::exp_reciprocal();
    let map = SelfMapSpec::Rational { b: 2.0 };
    let starts: Vec<Point> = [0.1, 0.5, 1.0].map(Point::scalar).to_vec();
    let mut solver = SolverConfig::with_log_eps(1e-10, 10_000, starts.clone());
    solver.domain = Some(BoxDomain::interval(0.1, 1.0).unwrap());
    let results = run_all(&metric, &map, &starts, &solver)?;
    let grid: Vec<Point> = linspace(0.1, 1.0, 50)
        .into_iter()
        .map(Point::scalar)
        .collect();
    let options = ClassifyOptions {
        constants: Some(ZamfirescuConstants::new(0.0, 0.499, 0.499).unwrap()),
        ..Default::default()
    };
    let report = classify(&metric, &map, &grid, &options).map_err(|e| e.to_string())?;
    let elapsed = t.elapsed();
    let err = max_coord_err(&results, &[0.4142135624]);
    let (v2, v3) = (
        report.violations(ConditionId::C2),
        report.violations(ConditionId::C3),
    );
    let pairs = report.records(ConditionId::C2).count();
    ensure(
        all_converged(&results)
            && err <= 1e-8
            && pairs == 50 * 49 / 2
            && v2 == 0
            && v3 == 0
            && elapsed < Duration::from_secs(1),
        format!(
            "|z - 0.4142135624| = {err:.2e}, C2/C3 violations {v2}/{v3} of {pairs} pairs, {elapsed:.2?}"
        ),
    )
}

fn criterion_3() -> Check {
    let metric = MetricSpec::exp_abs(2.0).unwrap();
    let map = SelfMapSpec::ReciprocalSqrt;
    let starts: Vec<Point> = [1.0, 1.5, 2.0].map(Point::scalar).to_vec();
    let solver = SolverConfig::with_log_eps(1e-10, 10_000, starts.clone());
    let results = run_all(&metric, &map, &starts, &solver)?;
    let err = max_coord_err(&results, &[1.0]);
    let grid: Vec<Point> = linspace(1.0, 2.0, 100)
        .into_iter()
        .map(Point::scalar)
        .collect();
    let mut failures = 0;
    let mut checked = 0;
    for u in &grid {
        for v in &grid {
            let ok = check_phi(&metric, &map, &PhiSpec::Example317, u, v)
                .map(|o| o.satisfied)
                .unwrap_or(false);
            checked += 1;
            failures += usize::from(!ok);
        }
    }
    ensure(
        all_converged(&results) && err <= 1e-8 && failures == 0,
        format!("|z - 1| = {err:.2e}, PHI failures {failures} of {checked} ordered pairs"),
    )
}

fn criterion_4() -> Check {
    let (r, _) = remark_2_5().map_err(|e| e.to_string())?;
    let s = &r.star_product_additive;
    let u = &r.usual_multiplicative;
    let triangle_flagged = r.usual_axioms.triangle_violations().count() > 0;
    ensure(
        s.combined == 7.5
            && s.direct == 9.0
            && s.fails
            && u.combined == 3.0
            && u.direct == 4.0
            && u.fails
            && triangle_flagged,
        format!(
            "d*: {} + {} = {} < {}; usual: {} * {} = {} < {}",
            s.legs[0], s.legs[1], s.combined, s.direct, u.legs[0], u.legs[1], u.combined, u.direct
        ),
    )
}

fn criterion_5(reports: &[FixtureReport]) -> Check {
    let mut checked = 0;
    let mut violations = 0;
    for exp in reports.iter().filter_map(|r| r.experiment.as_ref()) {
        let Some(delta) = exp.certified_delta else {
            continue;
        };
        for result in exp.converged_results() {
            let b = verify_bound(result, delta, BOUND_TOL).map_err(|e| e.to_string())?;
            checked += b.checks.len();
            violations += b.violations.len();
        }
    }
    // seeded family of contractions x -> c x + s on [-4, 4], delta certified by classify
    let metric = MetricSpec::exp_abs(2.0).unwrap();
    let domain = BoxDomain::interval(-4.0, 4.0).unwrap();
    let params = sampling::random(
        &BoxDomain::new(vec![(-0.9, 0.9), (-1.0, 1.0)]).unwrap(),
        40,
        5,
    );
    for (k, p) in params.iter().enumerate() {
        let (c, s) = (p.coords()[0], p.coords()[1]);
        let map = SelfMapSpec::Affine {
            matrix: vec![vec![c]],
            offset: vec![s],
        };
        let sample = sampling::sample(&domain, 30, Default::default(), k as u64);
        let report = classify(&metric, &map, &sample, &ClassifyOptions::default())
            .map_err(|e| e.to_string())?;
        let Some(delta) = report.certified_delta() else {
            continue;
        };
        let starts = sampling::random(&domain, 3, 100 + k as u64);
        let solver = SolverConfig::with_log_eps(1e-10, 10_000, starts.clone());
        for r in run_all(&metric, &map, &starts, &solver)? {
            let b = verify_bound(&r, delta, BOUND_TOL).map_err(|e| e.to_string())?;
            checked += b.checks.len();
            violations += b.violations.len();
        }
    }
    ensure(
        checked > 0 && violations == 0,
        format!("{violations} violations over {checked} recorded iterates"),
    )
}

fn criterion_6() -> Check {
    let kinds = [
        (
            MetricSpec::star_product(),
            BoxDomain::interval(0.01, 100.0).unwrap(),
        ),
        (
            MetricSpec::lifted(BaseMetric::Euclidean, 2.0).unwrap(),
            BoxDomain::new(vec![(-10.0, 10.0), (-10.0, 10.0)]).unwrap(),
        ),
        (
            MetricSpec::exp_abs(E).unwrap(),
            BoxDomain::interval(-10.0, 10.0).unwrap(),
        ),
        (
            MetricSpec::exp_reciprocal(),
            BoxDomain::interval(0.05, 10.0).unwrap(),
        ),
        (
            MetricSpec::discrete(2.0).unwrap(),
            BoxDomain::interval(-10.0, 10.0).unwrap(),
        ),
    ];
    let mut parts = Vec::new();
    let mut ok = true;
    for (seed, (metric, domain)) in kinds.iter().enumerate() {
        let sample = sampling::random(domain, 200, 1000 + seed as u64);
        let a = verify_axioms(metric, &sample, 1e-12).map_err(|e| e.to_string())?;
        let r = verify_reverse_triangle(metric, &sample, 1e-12).map_err(|e| e.to_string())?;
        ok &= a.passed() && r.passed();
        parts.push(format!(
            "{} {}/{}",
            metric.kind().name(),
            a.violations.len(),
            r.violations.len()
        ));
    }
    ensure(
        ok,
        format!("axiom/reverse violations: {}", parts.join(", ")),
    )
}

fn criterion_7(reports: &[FixtureReport]) -> Check {
    const N: usize = 10_000;
    let mut parts = Vec::new();
    let mut ok = true;
    for name in ["example_3_16", "example_3_17"] {
        let cfg = fixture_config(name).map_err(|e| e.to_string())?;
        let (lo, hi) = cfg.domain.bounds()[0];
        let cell = (hi - lo) / (N - 1) as f64;
        let mut best = (f64::INFINITY, lo);
        for x in linspace(lo, hi, N) {
            let p = Point::scalar(x);
            let Ok(tx) = cfg.map.apply(&p) else { continue };
            let l = cfg
                .metric
                .log_distance(&p, &tx)
                .map_err(|e| e.to_string())?
                .value();
            if l < best.0 {
                best = (l, x);
            }
        }
        let exp = reports
            .iter()
            .find(|r| r.name == name)
            .and_then(|r| r.experiment.as_ref())
            .ok_or("missing fixture report")?;
        for r in exp.converged_results() {
            let cells = (r.point.coords()[0] - best.1).abs() / cell;
            ok &= cells <= 2.0;
            parts.push(format!("{name} {cells:.3} cells"));
        }
        ok &= exp.converged_results().count() == exp.runs.len();
    }
    ensure(ok, parts.join(", "))
}

fn criterion_8(reports: &[FixtureReport], extra: &[FixedPointResult]) -> Check {
    let ln_eps = 1e-10_f64.exp().ln();
    let mut worst = f64::NEG_INFINITY;
    let mut count = 0;
    let mut ok = true;
    let fixture_runs = reports
        .iter()
        .filter_map(|r| r.experiment.as_ref())
        .flat_map(|e| e.runs.iter().filter_map(|r| r.result.as_ref()));
    for r in fixture_runs.chain(extra) {
        if r.status != TraceStatus::Converged {
            continue;
        }
        let window = 10.min(r.trace.len());
        let c = cauchy_indicator(&r.trace, window).map_err(|e| e.to_string())?;
        count += 1;
        worst = worst.max(c);
        ok &= c <= ln_eps;
    }
    ensure(
        ok && count > 0,
        format!("{count} converged traces, max indicator {worst:.3e} vs ln eps {ln_eps:.3e}"),
    )
}

fn negative_config(
    name: &str,
    map: SelfMapSpec,
    domain: (f64, f64),
    starts: &[f64],
    n: usize,
) -> ExperimentConfig {
    let starts: Vec<Point> = starts.iter().map(|&x| Point::scalar(x)).collect();
    ExperimentConfig {
        name: name.into(),
        metric: MetricSpec::exp_abs(2.0).unwrap(),
        map,
        domain: BoxDomain::interval(domain.0, domain.1).unwrap(),
        sample_size: n,
        sampling: mulfix::sampling::SamplingMode::Grid,
        seed: 0,
        solver: SolverConfig::with_log_eps(1e-10, 200, starts),
        confine_to_domain: true,
        constants: None,
        phi: None,
        strict_margin: 0.0,
        uniqueness_candidates: None,
        expect: mulfix::harness::Expectations {
            unique_fixed_point: Some(true),
            ..Default::default()
        },
        outputs: Default::default(),
    }
}

fn criterion_9() -> Check {
    let swap = SelfMapSpec::swap(Point::scalar(1.0), Point::scalar(-1.0));
    let configs = [
        negative_config(
            "identity",
            SelfMapSpec::Identity,
            (0.0, 1.0),
            &[0.2, 0.7],
            20,
        ),
        negative_config("swap", swap, (-1.0, 1.0), &[1.0, -1.0], 2),
    ];
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut parts = Vec::new();
    let mut ok = true;
    for cfg in &configs {
        let sample = sampling::sample(&cfg.domain, cfg.sample_size, cfg.sampling, cfg.seed);
        let verdict = classify(&cfg.metric, &cfg.map, &sample, &ClassifyOptions::default())
            .map_err(|e| e.to_string())?
            .verdicts
            .summary;
        let report = run_experiment(cfg).map_err(|e| e.to_string())?;
        let path = dir.path().join(format!("{}.json", cfg.name));
        std::fs::write(&path, serde_json::to_string(cfg).unwrap()).map_err(|e| e.to_string())?;
        let status = Command::new(env!("CARGO_BIN_EXE_mulfix"))
            .args(["run", "--config"])
            .arg(&path)
            .output()
            .map_err(|e| e.to_string())?
            .status;
        let statuses: Vec<&str> = report
            .runs
            .iter()
            .map(|r| r.result.as_ref().map_or("error", |r| r.status.as_str()))
            .collect();
        ok &= verdict == "none" && !report.passed && status.code() == Some(1);
        parts.push(format!(
            "{}: verdict {verdict}, runs [{}], start independence {:?}, exit {:?}",
            cfg.name,
            statuses.join(", "),
            report.start_independence.outcome,
            status.code()
        ));
    }
    ensure(ok, parts.join("; "))
}

fn main() -> ExitCode {
    let reports: Vec<FixtureReport> = FIXTURE_NAMES
        .iter()
        .map(|n| run_fixture(n).expect("fixture"))
        .collect();
    // extra converged traces for the Cauchy sweep
    let mut extra = Vec::new();
    let metric = MetricSpec::exp_abs(2.0).unwrap();
    for (k, b) in linspace(0.5, 4.0, 8).into_iter().enumerate() {
        let map = SelfMapSpec::Rational { b };
        let starts = sampling::random(&BoxDomain::interval(0.0, 3.0).unwrap(), 3, k as u64);
        let solver = SolverConfig::with_log_eps(1e-10, 10_000, starts.clone());
        extra.extend(run_all(&metric, &map, &starts, &solver).expect("extra runs"));
    }

    let criteria: Vec<(&str, Check)> = vec![
        ("1 example_3_15 reproduction", criterion_1()),
        ("2 example_3_16 reproduction", criterion_2()),
        ("3 example_3_17 reproduction", criterion_3()),
        ("4 remark_2_5 counterexamples", criterion_4()),
        ("5 a-priori bound", criterion_5(&reports)),
        ("6 axiom suite", criterion_6()),
        ("7 grid oracle equivalence", criterion_7(&reports)),
        ("8 convergent implies Cauchy", criterion_8(&reports, &extra)),
        ("9 negative controls", criterion_9()),
    ];
    let mut failed = 0;
    for (name, result) in &criteria {
        match result {
            Ok(detail) => println!("PASS  criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  criterion {name}: {detail}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
