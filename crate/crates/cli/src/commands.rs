use std::fs;
use std::io::{self, BufRead, BufReader, Read, Write};
use std::path::Path;

use anyhow::{anyhow, bail, ensure, Context, Result};
use rayon::prelude::*;
use serde_json::{json, Value};

use noncollide_core::combinat::{canonical_start, tableau_to_walk, walk_to_tableau, Partition, Ssyt, WalkRecord};
use noncollide_core::diffusion::{
    km_density, simulate_dyson, simulate_inhomogeneous, survival, transition_homogeneous, transition_inhomogeneous, SamplePath,
    SdeOptions, StartPoint, SurvivalMethod, WeylPoint,
};
use noncollide_core::exact::{format_rational, parse_rational, Rational};
use noncollide_core::lgv::{
    brute_force_tuples, check_compatibility, lgv_determinant, walk_label, GraphJson, PathGraph, DEFAULT_ENUMERATION_CAP,
};
use noncollide_core::rmt::{estimate_gamma, for_each_eigen_step, DriftQvAccumulator, LineFit};
use noncollide_core::rng::path_rng;
use noncollide_core::schur::{principal_specialization, schur_bialternant, schur_dual_jt, schur_ssyt_sum, EvalPoint};
use noncollide_core::verify::suite::{run_criterion, SuiteReport, CRITERIA};
use noncollide_core::walks::{
    check_parity, count_canonical, count_vicious, enumerate_vicious, rejection_sample, scaling_check, ConditionedSampler,
    LatticeConfig, DEFAULT_RETRY_CAP,
};

use crate::args::*;
use crate::output::{join, open, parse_header, Header};

/// Runs the parsed command; failed verifications come back as errors.
pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Count(a) => count(cli, a),
        Command::Tableau(c) => tableau(cli, c),
        Command::Schur(a) => schur(cli, a),
        Command::Lgv(a) => lgv(cli, a),
        Command::SampleWalk(a) => sample_walk(cli, a),
        Command::ScalingCheck(a) => scaling(cli, a),
        Command::SimulateDyson(a) => simulate(cli, a, true),
        Command::SimulateInhomogeneous(a) => simulate(cli, a, false),
        Command::SimulateMatrix(a) => simulate_matrix(cli, a),
        Command::Density(a) => density(cli, a),
        Command::Verify(a) => verify(cli, a),
        Command::VerifySde(a) => verify_sde(cli, a),
    }
}

fn write_json(out: &mut dyn Write, v: &Value) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, v)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn strictly_increasing<T: PartialOrd>(v: &[T]) -> bool {
    v.windows(2).all(|w| w[0] < w[1])
}

fn count(cli: &Cli, a: &CountArgs) -> Result<()> {
    check_parity(&a.start, &a.end, a.steps)?;
    ensure!(strictly_increasing(&a.start), "start positions must be strictly increasing: {:?}", a.start);
    ensure!(strictly_increasing(&a.end), "end positions must be strictly increasing: {:?}", a.end);
    let value = match a.method {
        CountMethod::Determinant => count_vicious(&a.start, &a.end, a.steps).to_string(),
        CountMethod::Enumerate => enumerate_vicious(&a.start, &a.end, a.steps, DEFAULT_ENUMERATION_CAP as u64)?.len().to_string(),
        CountMethod::Lgv => {
            let (lo, hi) = (a.start[0], *a.start.last().unwrap_or(&0));
            let t = a.steps as i64;
            if a.end.iter().any(|&y| y < lo - t || y > hi + t) {
                "0".to_string()
            } else {
                let g = PathGraph::vicious_walk(lo, hi, a.steps);
                let s: Vec<String> = a.start.iter().map(|&v| walk_label(v, 0)).collect();
                let e: Vec<String> = a.end.iter().map(|&v| walk_label(v, a.steps)).collect();
                format_rational(&lgv_determinant(&g, &g.vertices_of(&s)?, &g.vertices_of(&e)?)?)
            }
        }
        CountMethod::Schur => {
            ensure!(a.start == canonical_start(a.start.len()), "the schur method needs the start 0,2,...,2(N-1)");
            count_canonical(&a.end, a.steps)?.to_string()
        }
    };
    let mut out = open(cli.out.as_deref())?;
    match cli.format {
        Format::Csv => writeln!(out, "{value}")?,
        Format::Json => write_json(
            &mut out,
            &json!({"start": a.start, "end": a.end, "steps": a.steps, "count": value}),
        )?,
    }
    out.flush()?;
    Ok(())
}

fn read_input(path: Option<&Path>) -> Result<String> {
    match path {
        Some(p) => fs::read_to_string(p).with_context(|| format!("reading {}", p.display())),
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

/// Applies `f` to one JSON record or to each element of an array.
fn map_records(text: &str, f: impl Fn(Value) -> Result<Value>) -> Result<Value> {
    match serde_json::from_str::<Value>(text).context("parsing JSON input")? {
        Value::Array(items) => Ok(Value::Array(items.into_iter().map(f).collect::<Result<_>>()?)),
        one => f(one),
    }
}

fn tableau(cli: &Cli, c: &TableauCommand) -> Result<()> {
    let result = match c {
        TableauCommand::FromWalk { input } => map_records(&read_input(input.as_deref())?, |v| {
            let w: WalkRecord = serde_json::from_value(v).context("walk record")?;
            Ok(serde_json::to_value(walk_to_tableau(&w)?)?)
        })?,
        TableauCommand::ToWalk { input, walkers, steps } => map_records(&read_input(input.as_deref())?, |v| {
            let t: Ssyt = serde_json::from_value(v).context("tableau")?;
            Ok(serde_json::to_value(tableau_to_walk(&t, *walkers, *steps)?)?)
        })?,
    };
    write_json(&mut open(cli.out.as_deref())?, &result)?;
    Ok(())
}

fn parse_shape(parts: &[String]) -> Result<Partition> {
    let parts: Vec<usize> = parts
        .iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse().with_context(|| format!("bad part {s:?}")))
        .collect::<Result<_>>()?;
    Ok(Partition::new(parts)?)
}

fn schur(cli: &Cli, a: &SchurArgs) -> Result<()> {
    let shape = parse_shape(&a.shape)?;
    let points: Vec<Rational> = a
        .points
        .iter()
        .map(|s| parse_rational(s.trim()).ok_or_else(|| anyhow!("bad point {s:?}")))
        .collect::<Result<_>>()?;
    let z = EvalPoint::new(points);
    let value = match a.method {
        SchurMethod::Ssyt => schur_ssyt_sum(&shape, &z),
        SchurMethod::Bialternant => schur_bialternant(&shape, &z)?,
        SchurMethod::Dualjt => schur_dual_jt(&shape, &z),
        SchurMethod::Principal => {
            ensure!(z == EvalPoint::ones(z.len()), "the principal method evaluates at all points equal to 1");
            Rational::from_integer(principal_specialization(&shape, z.len()).into())
        }
    };
    let value = format_rational(&value);
    let mut out = open(cli.out.as_deref())?;
    match cli.format {
        Format::Csv => writeln!(out, "{value}")?,
        Format::Json => write_json(
            &mut out,
            &json!({"shape": shape.parts(), "points": a.points, "method": format!("{:?}", a.method).to_lowercase(), "value": value}),
        )?,
    }
    out.flush()?;
    Ok(())
}

fn lgv(cli: &Cli, a: &LgvArgs) -> Result<()> {
    let text = fs::read_to_string(&a.graph).with_context(|| format!("reading {}", a.graph.display()))?;
    let g = PathGraph::from_json(serde_json::from_str::<GraphJson>(&text).context("graph JSON")?)?;
    let s = g.vertices_of(&a.sources)?;
    let e = g.vertices_of(&a.sinks)?;
    let det = format_rational(&lgv_determinant(&g, &s, &e)?);
    let checked = if a.check {
        let compatible = check_compatibility(&g, &s, &e, DEFAULT_ENUMERATION_CAP)?;
        let brute = brute_force_tuples(&g, &s, &e, true, DEFAULT_ENUMERATION_CAP)?;
        Some((compatible, format_rational(&brute)))
    } else {
        None
    };
    let mut out = open(cli.out.as_deref())?;
    match (cli.format, &checked) {
        (Format::Csv, None) => writeln!(out, "{det}")?,
        (Format::Csv, Some((c, b))) => {
            writeln!(out, "quantity,value")?;
            writeln!(out, "determinant,{det}")?;
            writeln!(out, "compatible,{c}")?;
            writeln!(out, "nonintersecting_sum,{b}")?;
        }
        (Format::Json, _) => {
            let mut v = json!({"sources": a.sources, "sinks": a.sinks, "determinant": det});
            if let Some((c, b)) = checked {
                v["compatible"] = json!(c);
                v["nonintersecting_sum"] = json!(b);
            }
            write_json(&mut out, &v)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn sample_walk(cli: &Cli, a: &SampleWalkArgs) -> Result<()> {
    let x = LatticeConfig::new(a.start.clone())?;
    let samples: Vec<WalkRecord> = match a.method {
        WalkSampler::Exact => ConditionedSampler::new(&x, a.steps)?.sample_many(cli.seed, a.n),
        WalkSampler::Rejection => (0..a.n)
            .into_par_iter()
            .map(|k| rejection_sample(&x, a.steps, &mut path_rng(cli.seed, k as u64), DEFAULT_RETRY_CAP).map(|r| r.0))
            .collect::<Result<_, _>>()?,
    };
    let header = Header::new("sample-walk", cli.seed)
        .param("start", join(&a.start))
        .param("steps", a.steps)
        .param("n", a.n)
        .param("method", format!("{:?}", a.method).to_lowercase());
    let mut out = open(cli.out.as_deref())?;
    match cli.format {
        Format::Csv => {
            writeln!(out, "{}", header.csv_line())?;
            writeln!(out, "sample_id,t,walker_id,position")?;
            for (k, w) in samples.iter().enumerate() {
                for (t, pos) in w.positions().iter().enumerate() {
                    for (i, p) in pos.iter().enumerate() {
                        writeln!(out, "{k},{t},{i},{p}")?;
                    }
                }
            }
        }
        Format::Json => {
            let mut m = header.json();
            m.insert("samples".into(), serde_json::to_value(&samples)?);
            write_json(&mut out, &Value::Object(m))?;
        }
    }
    out.flush()?;
    Ok(())
}

fn scaling(cli: &Cli, a: &ScalingArgs) -> Result<()> {
    let x = LatticeConfig::new(a.start.clone())?;
    let rows: Vec<(f64, _)> = a.scale.iter().map(|&l| scaling_check(&x, a.t, &a.y, l).map(|p| (l, p))).collect::<Result<_, _>>()?;
    let header = Header::new("scaling-check", cli.seed).param("start", join(&a.start)).param("t", a.t).param("y", join(&a.y));
    let mut out = open(cli.out.as_deref())?;
    match cli.format {
        Format::Csv => {
            writeln!(out, "{}", header.csv_line())?;
            writeln!(out, "scale,steps,lhs,rhs,relative_error")?;
            for (l, p) in &rows {
                writeln!(out, "{l},{},{},{},{}", p.steps, p.lhs, p.rhs, p.relative_error())?;
            }
        }
        Format::Json => {
            let mut m = header.json();
            let pts: Vec<Value> = rows
                .iter()
                .map(|(l, p)| json!({"scale": l, "steps": p.steps, "lhs": p.lhs, "rhs": p.rhs, "relative_error": p.relative_error()}))
                .collect();
            m.insert("points".into(), Value::Array(pts));
            write_json(&mut out, &Value::Object(m))?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Recorded `(times, states)` of one path.
type Recorded = (Vec<f64>, Vec<Vec<f64>>);

/// Computes `count` paths in parallel batches and writes them in index
/// order, so the output does not depend on the thread count.
fn write_paths(cli: &Cli, header: &Header, count: usize, path: impl Fn(usize) -> Result<Recorded> + Sync) -> Result<()> {
    const BATCH: usize = 256;
    let mut out = open(cli.out.as_deref())?;
    match cli.format {
        Format::Csv => {
            writeln!(out, "{}", header.csv_line())?;
            writeln!(out, "path_id,t,i,value")?;
        }
        Format::Json => {
            write!(out, "{{")?;
            for (k, v) in header.json() {
                write!(out, "{}:{},", Value::from(k), v)?;
            }
            write!(out, "\"paths\":[")?;
        }
    }
    for lo in (0..count).step_by(BATCH) {
        let hi = (lo + BATCH).min(count);
        let batch: Vec<Recorded> = (lo..hi).into_par_iter().map(&path).collect::<Result<_>>()?;
        for (k, (times, states)) in (lo..hi).zip(batch) {
            match cli.format {
                Format::Csv => {
                    for (t, s) in times.iter().zip(&states) {
                        for (i, v) in s.iter().enumerate() {
                            writeln!(out, "{k},{t},{i},{v}")?;
                        }
                    }
                }
                Format::Json => {
                    if k > 0 {
                        write!(out, ",")?;
                    }
                    write!(out, "{}", json!({"path_id": k, "times": times, "states": states}))?;
                }
            }
        }
    }
    if cli.format == Format::Json {
        writeln!(out, "]}}")?;
    }
    out.flush()?;
    Ok(())
}

fn simulate(cli: &Cli, a: &SimArgs, dyson: bool) -> Result<()> {
    ensure!(a.record_every > 0, "--record-every must be positive");
    let start = match (&a.n, &a.start) {
        (Some(n), _) => StartPoint::Origin(*n),
        (None, Some(v)) => StartPoint::Point(WeylPoint::new(v.clone())?),
        (None, None) => bail!("give either --n or --start"),
    };
    let opts = SdeOptions { record_stride: a.record_every, ..SdeOptions::new(a.t, a.steps) };
    let name = if dyson { "simulate-dyson" } else { "simulate-inhomogeneous" };
    let mut header = Header::new(name, cli.seed);
    header = match &a.start {
        Some(v) => header.param("start", join(v)),
        None => header.param("n", start.dim()).param("start", "origin"),
    };
    let header = header.param("t", a.t).param("steps", a.steps).param("paths", a.paths).param("record_every", a.record_every);
    write_paths(cli, &header, a.paths, |k| {
        let mut rng = path_rng(cli.seed, k as u64);
        let p: SamplePath = if dyson {
            simulate_dyson(&start, &opts, &mut rng)?
        } else {
            simulate_inhomogeneous(&start, &opts, &mut rng)?
        };
        Ok((p.times, p.states))
    })?;
    Ok(())
}

fn simulate_matrix(cli: &Cli, a: &MatrixArgs) -> Result<()> {
    ensure!(a.record_every > 0, "--record-every must be positive");
    let header = Header::new("simulate-matrix", cli.seed)
        .param("n", a.n)
        .param("t", a.t)
        .param("steps", a.steps)
        .param("paths", a.paths)
        .param("record_every", a.record_every);
    write_paths(cli, &header, a.paths, |k| {
        let mut rng = path_rng(cli.seed, k as u64);
        let (mut times, mut states) = (Vec::new(), Vec::new());
        let mut step = 0usize;
        for_each_eigen_step(a.n, a.t, a.steps, &mut rng, |t, v| {
            step += 1;
            if step.is_multiple_of(a.record_every) || step == a.steps {
                times.push(t);
                states.push(v.to_vec());
            }
        })?;
        Ok((times, states))
    })?;
    Ok(())
}

fn survival_method(a: &DensityArgs, seed: u64) -> SurvivalMethod {
    match a.method {
        SurvivalChoice::Pfaffian => SurvivalMethod::Pfaffian,
        SurvivalChoice::Quadrature => SurvivalMethod::Quadrature,
        SurvivalChoice::MonteCarlo => SurvivalMethod::MonteCarlo { samples: a.samples, seed },
        SurvivalChoice::Asymptotic => SurvivalMethod::Asymptotic,
    }
}

fn density(cli: &Cli, a: &DensityArgs) -> Result<()> {
    let x = match (&a.x, a.n) {
        (Some(v), _) => StartPoint::Point(WeylPoint::new(v.clone())?),
        (None, Some(n)) => StartPoint::Origin(n),
        (None, None) => match (&a.grid, &a.y) {
            (Some(_), _) => StartPoint::Origin(2),
            (None, Some(y)) => StartPoint::Origin(y.len()),
            (None, None) => bail!("give --x, --n or --y"),
        },
    };
    let eval = |y: &WeylPoint| -> Result<f64> {
        Ok(match a.kind {
            DensityKind::Km => match &x {
                StartPoint::Point(p) => km_density(a.t - a.s, p, y)?,
                StartPoint::Origin(_) => bail!("the km density needs a starting point --x"),
            },
            DensityKind::G => {
                let horizon = a.horizon.ok_or_else(|| anyhow!("--horizon is required for g"))?;
                transition_inhomogeneous(a.s, &x, a.t, y, horizon)?
            }
            DensityKind::P => transition_homogeneous(a.s, &x, a.t, y)?,
            DensityKind::Survival => unreachable!(),
        })
    };
    let mut out = open(cli.out.as_deref())?;
    if a.kind == DensityKind::Survival {
        let StartPoint::Point(p) = &x else { bail!("survival needs a starting point --x") };
        ensure!(a.grid.is_none(), "--grid is not available for survival");
        let est = survival(a.t, p, survival_method(a, cli.seed))?;
        match cli.format {
            Format::Csv => writeln!(out, "{}", est.value)?,
            Format::Json => write_json(&mut out, &json!({"kind": "survival", "t": a.t, "x": p.coords(), "value": est.value, "error": est.error, "seed": cli.seed}))?,
        }
    } else if let Some(grid) = &a.grid {
        ensure!(grid.len() == 3 && grid[2] >= 1.0 && grid[0] < grid[1], "--grid takes lo,hi,cells");
        ensure!(x.dim() == 2, "grids are two-dimensional");
        let (lo, hi, cells) = (grid[0], grid[1], grid[2] as usize);
        let at = |k: usize| lo + (hi - lo) * k as f64 / cells as f64;
        let mut rows = Vec::new();
        for i in 0..=cells {
            for j in i + 1..=cells {
                let (y1, y2) = (at(i), at(j));
                rows.push((y1, y2, eval(&WeylPoint::new(vec![y1, y2])?)?));
            }
        }
        match cli.format {
            Format::Csv => {
                writeln!(out, "y1,y2,value")?;
                for (y1, y2, v) in rows {
                    writeln!(out, "{y1},{y2},{v}")?;
                }
            }
            Format::Json => {
                let pts: Vec<Value> = rows.iter().map(|(y1, y2, v)| json!([y1, y2, v])).collect();
                write_json(&mut out, &json!({"kind": format!("{:?}", a.kind).to_lowercase(), "grid": pts}))?;
            }
        }
    } else {
        let y = WeylPoint::new(a.y.clone().ok_or_else(|| anyhow!("--y is required"))?)?;
        let v = eval(&y)?;
        match cli.format {
            Format::Csv => writeln!(out, "{v}")?,
            Format::Json => write_json(&mut out, &json!({"kind": format!("{:?}", a.kind).to_lowercase(), "y": y.coords(), "value": v}))?,
        }
    }
    out.flush()?;
    Ok(())
}

fn verify(cli: &Cli, a: &VerifyArgs) -> Result<()> {
    let ids: Vec<u8> = if a.suite.is_some() { CRITERIA.iter().map(|c| c.0).collect() } else { a.criterion.clone() };
    for id in &ids {
        ensure!(CRITERIA.iter().any(|c| c.0 == *id), "no criterion {id}");
    }
    let mut out = open(cli.out.as_deref())?;
    let mut criteria = Vec::new();
    for id in ids {
        let o = run_criterion(id);
        writeln!(out, "{}", o.summary_line())?;
        out.flush()?;
        criteria.push(o);
    }
    let report = SuiteReport { pass: criteria.iter().all(|c| c.pass), criteria };
    writeln!(out, "{}", if report.pass { "all criteria passed" } else { "some criteria FAILED" })?;
    out.flush()?;
    if let Some(p) = &a.report {
        let mut f = open(Some(p))?;
        write_json(&mut f, &serde_json::to_value(&report)?)?;
    }
    if !report.pass {
        bail!("verification failed");
    }
    Ok(())
}

fn ci(center: f64, se: f64) -> [f64; 2] {
    [center - 1.96 * se, center + 1.96 * se]
}

fn fit_json(f: &LineFit) -> Value {
    json!({
        "slope": f.slope,
        "intercept": f.intercept,
        "slope_ci95": ci(f.slope, f.slope_se),
        "intercept_ci95": ci(f.intercept, f.intercept_se),
        "increments": f.count,
    })
}

fn verify_sde(cli: &Cli, a: &VerifySdeArgs) -> Result<()> {
    let file = fs::File::open(&a.input).with_context(|| format!("opening {}", a.input.display()))?;
    let mut reader = BufReader::new(file);
    let mut first = String::new();
    reader.read_line(&mut first)?;
    let meta = parse_header(&first);
    let get = |key: &str| meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.clone());
    ensure!(first.starts_with('#'), "expected a `# seed=...` header line in {}", a.input.display());
    let seed: u64 = get("seed").ok_or_else(|| anyhow!("header has no seed"))?.parse().context("seed")?;

    let mut csv = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(reader);
    let mut acc: Option<DriftQvAccumulator> = None;
    let mut current: Option<(u64, SamplePath)> = None;
    let mut steps_per_path = 0usize;
    let mut finish = |path: SamplePath, acc: &mut Option<DriftQvAccumulator>| -> Result<()> {
        let n = path.terminal().len();
        acc.get_or_insert_with(|| DriftQvAccumulator::new(n)).add_path(&path)?;
        steps_per_path = steps_per_path.max(path.times.len());
        Ok(())
    };
    for row in csv.records() {
        let row = row?;
        ensure!(row.len() == 4, "expected columns path_id,t,i,value");
        let id: u64 = row[0].parse().context("path_id")?;
        let t: f64 = row[1].parse().context("t")?;
        let i: usize = row[2].parse().context("i")?;
        let v: f64 = row[3].parse().context("value")?;
        if current.as_ref().is_some_and(|(c, _)| *c != id) {
            let (_, done) = current.take().expect("checked above");
            finish(done, &mut acc)?;
        }
        let (_, p) = current.get_or_insert_with(|| {
            (id, SamplePath { times: Vec::new(), states: Vec::new(), seed: Some(seed), path_index: Some(id), dt: 0.0, integrator: "file", refined_steps: 0 })
        });
        if i == 0 {
            p.times.push(t);
            p.states.push(Vec::new());
        }
        let state = p.states.last_mut().ok_or_else(|| anyhow!("path {id} does not start with i = 0"))?;
        ensure!(state.len() == i, "path {id}: coordinates out of order at t = {t}");
        state.push(v);
    }
    if let Some((_, done)) = current.take() {
        finish(done, &mut acc)?;
    }
    let acc = acc.ok_or_else(|| anyhow!("{} holds no paths", a.input.display()))?;
    let r = acc.report()?;
    let n = acc.n;
    let gamma_steps = match a.gamma_steps {
        Some(s) => s,
        None => get("steps").and_then(|s| s.parse().ok()).unwrap_or(steps_per_path),
    };
    // a stream no simulated path uses
    let gamma = estimate_gamma(n, gamma_steps, &mut path_rng(seed, u64::MAX), None)?;
    let gamma_rows: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| gamma[(i, j)]).collect()).collect();
    let report = json!({
        "source": a.input.display().to_string(),
        "seed": seed,
        "n": n,
        "paths": r.paths,
        "used_increments": r.used_increments,
        "skipped_increments": r.skipped_increments,
        "pooled": fit_json(&r.pooled),
        "per_coordinate": r.per_coordinate.iter().map(fit_json).collect::<Vec<_>>(),
        "qv": r.qv,
        "qv_ci95": r.qv.iter().zip(&r.qv_se).map(|(q, s)| ci(*q, *s)).collect::<Vec<_>>(),
        "qv_pooled": r.qv_pooled,
        "gamma": gamma_rows,
        "gamma_steps": gamma_steps,
        "gamma_stream": u64::MAX,
    });
    let target = a.report.as_deref().or(cli.out.as_deref());
    write_json(&mut open(target)?, &report)?;
    Ok(())
}
