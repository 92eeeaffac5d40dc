//! Parameter sweeps written as one row per parameter value.

use std::time::Instant;

use clap::{Args, ValueEnum};
use genround::*;
use rayon::prelude::*;
use serde::Serialize;

use crate::failure::{CmdResult, Failure};
use crate::io::{parse, Output};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExperimentName {
    CombConvergence,
    SstSweep,
    BoundTightness,
}

impl ExperimentName {
    fn label(self) -> &'static str {
        match self {
            ExperimentName::CombConvergence => "comb-convergence",
            ExperimentName::SstSweep => "sst-sweep",
            ExperimentName::BoundTightness => "bound-tightness",
        }
    }
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    pub name: ExperimentName,
    #[arg(long, default_value_t = 1)]
    pub m_min: usize,
    #[arg(long, default_value_t = 6)]
    pub m_max: usize,
    /// Comb weight function.
    #[arg(long, default_value = "constant(1)")]
    pub f: String,
    #[arg(long, default_value_t = 3)]
    pub degree: usize,
    #[arg(long, default_value_t = 1.0)]
    pub length: f64,
    #[arg(long, default_value_t = 2)]
    pub n_min: usize,
    #[arg(long, default_value_t = 8)]
    pub n_max: usize,
    /// SST spec JSON for bound-tightness; repeatable. Defaults to degrees (3)x10, lengths (1)x10.
    #[arg(long)]
    pub spec: Vec<String>,
    /// Trees above this many vertices are analysed on their bounding star only.
    #[arg(long, default_value_t = 200)]
    pub exact_cap: usize,
    /// Fill the runtime_ms column. Off by default so output is reproducible.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    /// Bracket of the whole tree.
    Full,
    /// Bracket of the root plus the leaves of the bounding star; only its upper end bounds the tree.
    Star,
    /// Marker: the next parameter exceeded the vertex cap and the sweep stopped.
    CapExceeded,
}

/// One CSV line. Field order is the column order.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentRow {
    pub experiment: &'static str,
    pub descriptor: String,
    pub param: usize,
    pub vertices: usize,
    pub scope: Scope,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub infinite: Option<bool>,
    pub bound: Option<f64>,
    pub gap: Option<f64>,
    pub runtime_ms: Option<f64>,
}

pub const COLUMNS: [&str; 11] =
    ["experiment", "descriptor", "param", "vertices", "scope", "lower", "upper", "infinite", "bound", "gap", "runtime_ms"];

enum Job {
    Comb { m: usize, f: Weight },
    Sst { n: usize, spec: Sst },
}

impl Job {
    fn param(&self) -> usize {
        match self {
            Job::Comb { m, .. } => *m,
            Job::Sst { n, .. } => *n,
        }
    }

    fn descriptor(&self) -> String {
        match self {
            Job::Comb { m, f } => format!("comb(m={m},f={f})"),
            Job::Sst { spec, .. } => {
                let join = |v: Vec<String>| v.join(",");
                format!(
                    "sst(d=[{}],l=[{}])",
                    join(spec.degrees.iter().map(usize::to_string).collect()),
                    join(spec.lengths.iter().map(f64::to_string).collect())
                )
            }
        }
    }

    fn vertices(&self) -> Option<usize> {
        match self {
            Job::Comb { m, .. } => Some(2 * m + 2),
            Job::Sst { spec, .. } => spec.vertex_count(),
        }
    }
}

fn jobs(args: &ExperimentArgs) -> CmdResult<Vec<Job>> {
    match args.name {
        ExperimentName::CombConvergence => {
            if args.m_min == 0 || args.m_min > args.m_max {
                return Err(Failure::invalid("need 1 <= m-min <= m-max"));
            }
            let f: Weight = args.f.parse()?;
            Ok((args.m_min..=args.m_max).map(|m| Job::Comb { m, f: f.clone() }).collect())
        }
        ExperimentName::SstSweep => {
            if args.n_min == 0 || args.n_min > args.n_max {
                return Err(Failure::invalid("need 1 <= n-min <= n-max"));
            }
            (args.n_min..=args.n_max)
                .map(|n| Ok(Job::Sst { n, spec: Sst::new(vec![args.degree; n], vec![args.length; n])? }))
                .collect()
        }
        ExperimentName::BoundTightness => {
            if args.spec.is_empty() {
                return Ok(vec![Job::Sst { n: 10, spec: Sst::uniform(3, 10) }]);
            }
            args.spec
                .iter()
                .map(|s| {
                    let spec: Sst = parse(s)?;
                    spec.validate()?;
                    Ok(Job::Sst { n: spec.depth(), spec })
                })
                .collect()
        }
    }
}

struct Settings {
    tol: f64,
    p_cap: f64,
    vertex_cap: usize,
    exact_cap: usize,
    timing: bool,
}

fn bounding_star(spec: &Sst, tree: &Tree, k: usize) -> CmdResult<MetricSpace> {
    let star = sst_star_configuration(spec, k)?;
    let mut pts = vec![star.root];
    pts.extend(&star.leaves);
    let weights = tree.weights();
    let rows: Vec<Vec<f64>> = pts
        .iter()
        .map(|&s| {
            let all = tree.distances_from(s, &weights);
            pts.iter().map(|&t| all[t]).collect()
        })
        .collect();
    let labels = pts.iter().map(|&i| tree.vertices()[i].clone()).collect();
    Ok(MetricSpace::with_labels(labels, &rows)?)
}

fn run_job(name: ExperimentName, job: &Job, vertices: usize, s: &Settings) -> CmdResult<ExperimentRow> {
    let start = Instant::now();
    let (space, scope, bound) = match job {
        Job::Comb { m, f } => (build_comb(&Comb::new(*m, f.clone()))?.to_metric()?, Scope::Full, None),
        Job::Sst { spec, .. } => {
            let report = sst_upper_bound(spec).ok();
            let tree = build_sst(spec, s.vertex_cap)?;
            let bound = report.as_ref().map(|r| r.best);
            if vertices <= s.exact_cap {
                (tree.to_metric()?, Scope::Full, bound)
            } else {
                let k = report.and_then(|r| r.best_k).unwrap_or(0);
                (bounding_star(spec, &tree, k)?, Scope::Star, bound)
            }
        }
    };
    let est = roundness(&space, s.tol, s.p_cap)?;
    let lower = est.lower;
    Ok(ExperimentRow {
        experiment: name.label(),
        descriptor: job.descriptor(),
        param: job.param(),
        vertices,
        scope,
        lower,
        upper: est.upper,
        infinite: Some(est.infinite),
        bound,
        gap: bound.zip(lower).map(|(b, l)| b - l),
        runtime_ms: s.timing.then(|| start.elapsed().as_secs_f64() * 1e3),
    })
}

/// Runs the sweep. Rows are computed in parallel and returned in parameter
/// order; the second value is true when the sweep stopped at the vertex cap.
pub fn run(args: &ExperimentArgs, tol: f64, p_cap: f64, vertex_cap: usize) -> CmdResult<(Vec<ExperimentRow>, bool)> {
    let s = Settings { tol, p_cap, vertex_cap, exact_cap: args.exact_cap, timing: args.timing };
    let jobs = jobs(args)?;
    let mut admitted = Vec::new();
    let mut marker = None;
    for job in &jobs {
        match job.vertices() {
            Some(v) if v <= vertex_cap => admitted.push((job, v)),
            v => {
                marker = Some(ExperimentRow {
                    experiment: args.name.label(),
                    descriptor: job.descriptor(),
                    param: job.param(),
                    vertices: v.unwrap_or(usize::MAX),
                    scope: Scope::CapExceeded,
                    lower: None,
                    upper: None,
                    infinite: None,
                    bound: None,
                    gap: None,
                    runtime_ms: None,
                });
                break;
            }
        }
    }
    let mut rows = admitted
        .par_iter()
        .map(|(job, v)| run_job(args.name, job, *v, &s))
        .collect::<CmdResult<Vec<_>>>()?;
    let truncated = marker.is_some();
    rows.extend(marker);
    Ok((rows, truncated))
}

pub fn cmd(args: &ExperimentArgs, tol: f64, p_cap: f64, vertex_cap: usize, out: &Output) -> CmdResult {
    let (rows, truncated) = run(args, tol, p_cap, vertex_cap)?;
    out.emit(&rows, |w| {
        if rows.is_empty() {
            w.write_record(COLUMNS)?;
        }
        rows.iter().try_for_each(|r| w.serialize(r))
    })?;
    if truncated {
        let last = rows.last().expect("marker row");
        return Err(Failure::invalid(format!(
            "{} needs {} vertices, above the vertex cap {vertex_cap}; output stops there",
            last.descriptor, last.vertices
        )));
    }
    Ok(())
}
