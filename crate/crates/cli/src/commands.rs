use clap::{Subcommand, ValueEnum};
use genround::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::failure::{CmdResult, Failure};
use crate::io::{opt, parse, read_input, read_tree, Output};

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum GenKind {
    Comb,
    Sst,
    Lp,
}

#[derive(Deserialize)]
struct LpSpec {
    points: Vec<Vec<f64>>,
    p: f64,
}

pub fn gen(kind: GenKind, spec: &str, vertex_cap: usize, out: &Output) -> CmdResult {
    match kind {
        GenKind::Comb => emit_tree(&build_comb(&parse::<Comb>(spec)?)?, out),
        GenKind::Sst => emit_tree(&build_sst(&parse::<Sst>(spec)?, vertex_cap)?, out),
        GenKind::Lp => {
            let s: LpSpec = parse(spec)?;
            emit_space(&lp_point_set(&s.points, s.p)?, out)
        }
    }
}

fn emit_tree(t: &Tree, out: &Output) -> CmdResult {
    out.emit(t, |w| {
        w.write_record(["u", "v", "w"])?;
        for e in t.edges() {
            w.write_record([&t.vertices()[e.u], &t.vertices()[e.v], &e.w.to_string()])?;
        }
        Ok(())
    })
}

fn emit_space(s: &MetricSpace, out: &Output) -> CmdResult {
    out.emit(s, |w| {
        w.write_field("")?;
        w.write_record(s.labels())?;
        for (label, row) in s.labels().iter().zip(s.rows()) {
            w.write_field(label)?;
            w.write_record(row.iter().map(f64::to_string))?;
        }
        Ok(())
    })
}

pub fn roundness_cmd(input: &str, tol: f64, p_cap: f64, out: &Output) -> CmdResult {
    let space = read_input(input)?.into_space()?;
    let est = roundness(&space, tol, p_cap)?;
    out.emit(&est, |w| {
        w.write_record(["lower", "upper", "infinite", "iterations"])?;
        w.write_record([opt(est.lower), opt(est.upper), est.infinite.to_string(), est.iterations.to_string()])
    })
}

pub fn negtype(input: &str, p: f64, out: &Output) -> CmdResult {
    let space = read_input(input)?.into_space()?;
    let r = negative_type_test(&space, p)?;
    out.emit(&r, |w| {
        w.write_record(["p", "holds", "strict", "max_form_value", "tolerance"])?;
        w.write_record([r.p.to_string(), r.holds.to_string(), r.strict.to_string(), r.max_form_value.to_string(), r.tolerance.to_string()])
    })
}

#[derive(Serialize)]
struct SimplexOutcome {
    p: f64,
    violation: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    simplex: Option<Simplex>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lhs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rhs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gap: Option<f64>,
}

pub struct SimplexArgs {
    pub p: f64,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub search: bool,
    pub k_max: usize,
    pub mult_max: usize,
}

pub fn simplex(input: &str, args: SimplexArgs, out: &Output) -> CmdResult {
    let space = read_input(input)?.into_space()?;
    let p = args.p;
    let found = if args.search {
        brute_force_simplex_search(&space, p, args.k_max, args.mult_max)?
    } else {
        if args.a.is_empty() {
            return Err(Failure::invalid("give --a and --b, or --search"));
        }
        Some(Simplex::new(args.a, args.b)?)
    };
    let sides = found.as_ref().map(|s| simplex_sides(&space, s, p)).transpose()?;
    let violation = sides.is_some_and(|s| s.gap() < 0.0);
    let res = SimplexOutcome {
        p,
        violation,
        simplex: found,
        lhs: sides.map(|s| s.lhs),
        rhs: sides.map(|s| s.rhs),
        gap: sides.map(|s| s.gap()),
    };
    out.emit(&res, |w| {
        let side = |v: Option<&Vec<usize>>| {
            v.map(|v| v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")).unwrap_or_default()
        };
        w.write_record(["p", "violation", "a", "b", "lhs", "rhs", "gap"])?;
        w.write_record([
            p.to_string(),
            violation.to_string(),
            side(res.simplex.as_ref().map(|s| &s.a)),
            side(res.simplex.as_ref().map(|s| &s.b)),
            opt(res.lhs),
            opt(res.rhs),
            opt(res.gap),
        ])
    })
}

/// First 16 hex digits of the SHA-256 of the SST spec as compact JSON.
pub fn spec_hash(spec: &Sst) -> String {
    let json = serde_json::to_string(spec).expect("spec serializes");
    Sha256::digest(json.as_bytes()).iter().take(8).map(|b| format!("{b:02x}")).collect()
}

pub fn bound(spec: &str, out: &Output) -> CmdResult {
    let spec: Sst = parse(spec)?;
    let r = sst_upper_bound(&spec)?;
    out.emit(&r, |w| {
        w.write_record(["spec_hash", "n", "m_index", "best"])?;
        w.write_record([spec_hash(&spec), spec.depth().to_string(), r.m_index.to_string(), r.best.to_string()])
    })
}

#[derive(Debug, Subcommand)]
pub enum ScaleIsoCmd {
    /// Certify the identity map between two path weightings of a tree.
    Certify {
        tree: String,
        /// Target edge weights, in the tree's edge order.
        #[arg(long, value_delimiter = ',', required = true)]
        rho: Vec<f64>,
        /// Source edge weights; defaults to the tree's own weights.
        #[arg(long, value_delimiter = ',')]
        d: Vec<f64>,
        #[arg(long)]
        eps: f64,
    },
    /// Smallest eps the edge criterion accepts.
    Distortion {
        tree: String,
        #[arg(long, value_delimiter = ',', required = true)]
        rho: Vec<f64>,
        #[arg(long, value_delimiter = ',')]
        d: Vec<f64>,
    },
    /// Place C_m(1) inside the weighted comb C(f).
    Comb {
        #[arg(long)]
        f: String,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 10_000)]
        n_max: usize,
    },
    /// Sub-exponential window of f, optionally over a decreasing eps schedule.
    Window {
        #[arg(long)]
        f: String,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        eps: Vec<f64>,
        #[arg(long, default_value_t = 10_000)]
        n_max: usize,
    },
}

#[derive(Serialize)]
struct WindowRow {
    eps: f64,
    n0: Option<usize>,
}

#[derive(Serialize)]
struct WindowReport {
    f: String,
    m: usize,
    n_max: usize,
    windows: Vec<WindowRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    subexponential_sample: Option<bool>,
}

fn weights_or_default(tree: &Tree, d: Vec<f64>) -> Vec<f64> {
    if d.is_empty() {
        tree.weights()
    } else {
        d
    }
}

pub fn scaleiso(cmd: ScaleIsoCmd, out: &Output) -> CmdResult {
    match cmd {
        ScaleIsoCmd::Certify { tree, rho, d, eps } => {
            let t = read_tree(&tree)?;
            let d = weights_or_default(&t, d);
            let c = certify_scale_iso(&t, &d, &rho, eps)?;
            out.emit(&c, |w| {
                w.write_record(["scale", "eps", "ratio_min", "ratio_max", "valid", "pairwise_verified"])?;
                w.write_record([
                    c.scale.to_string(),
                    c.eps.to_string(),
                    c.ratio_min.ratio.to_string(),
                    c.ratio_max.ratio.to_string(),
                    c.valid.to_string(),
                    c.pairwise_verified.map(|b| b.to_string()).unwrap_or_default(),
                ])
            })
        }
        ScaleIsoCmd::Distortion { tree, rho, d } => {
            let t = read_tree(&tree)?;
            let d = weights_or_default(&t, d);
            let eps = min_distortion(&t, &d, &rho)?;
            out.emit(&serde_json::json!({ "min_distortion": eps }), |w| {
                w.write_record(["min_distortion"])?;
                w.write_record([eps.to_string()])
            })
        }
        ScaleIsoCmd::Comb { f, m, eps, n_max } => {
            let f: Weight = f.parse()?;
            let rep = comb_local_representation(&f, m, eps, n_max)?;
            out.emit(&rep, |w| {
                w.write_record(["n0", "min_certified_n0", "scale", "valid"])?;
                match &rep {
                    Some(r) => w.write_record([
                        r.n0.to_string(),
                        r.min_certified_n0.to_string(),
                        r.certificate.scale.to_string(),
                        r.certificate.valid.to_string(),
                    ]),
                    None => w.write_record(["", "", "", ""]),
                }
            })
        }
        ScaleIsoCmd::Window { f, m, eps, n_max } => {
            let func: Weight = f.parse()?;
            let windows = eps
                .iter()
                .map(|&e| Ok(WindowRow { eps: e, n0: sub_exponential_window(&func, m, e, n_max)? }))
                .collect::<CmdResult<Vec<_>>>()?;
            let subexponential_sample =
                if eps.len() > 1 { Some(is_additively_subexponential_sample(&func, m, &eps, n_max)?) } else { None };
            let rep = WindowReport { f: func.to_string(), m, n_max, windows, subexponential_sample };
            out.emit(&rep, |w| {
                w.write_record(["eps", "n0"])?;
                for r in &rep.windows {
                    w.write_record([r.eps.to_string(), r.n0.map(|n| n.to_string()).unwrap_or_default()])?;
                }
                Ok(())
            })
        }
    }
}

pub fn embed(input: &str, p: f64, out: &Output) -> CmdResult {
    let space = read_input(input)?.into_space()?;
    let e = schoenberg_embed(&space, p)?;
    out.emit(&e, |w| match &e {
        Embedding::Embedded(r) => {
            let mut header = vec!["label".to_string()];
            header.extend((1..=r.dimension()).map(|c| format!("x{c}")));
            w.write_record(&header)?;
            for (label, row) in r.labels.iter().zip(&r.coordinates) {
                w.write_field(label)?;
                w.write_record(row.iter().map(f64::to_string))?;
            }
            Ok(())
        }
        Embedding::NotEmbeddable(wit) => {
            w.write_record(["label", "eta"])?;
            for (label, x) in space.labels().iter().zip(&wit.eta) {
                w.write_record([label.as_str(), &x.to_string()])?;
            }
            Ok(())
        }
    })
}
