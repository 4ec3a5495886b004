use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cptype::criteria::{
    ball_degree_certificate, excess_profile, generator_growth, partition_certificate,
    perimetric_certificate, series_nash_williams, series_rodin_sullivan, series_t1,
    singleton_partition, GFunction, SeriesVerdict, DEFAULT_BUDGET,
};
use cptype::curvature::{verify_gbf1, verify_gbf2};
use cptype::generators::{
    build_window, comparison_graph, flipped_hexagonal, triangular_mesh, ComparisonGraph,
    ExcessSpec, GraphGenerator, LayerSpec, MeshSpec, RingStack, SquareTiling,
};
use cptype::layered_analysis::{layer_sequences, vel_closed_form};
use cptype::rational::{fmt_q, parse_q, to_f64};
use cptype::regions::main_body_unchecked;
use cptype::sampling::{inner_region, random_connected};
use cptype::selection::SubgraphSelection;
use cptype::vel::{
    flow_energy, levelwise_energy, vel_exact_tiling, vel_solve, water_flow, PathFamily,
    VelSolution,
};
use cptype::{Error, Result, TriangulationWindow, V};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

#[derive(Parser)]
#[command(name = "cptyper", version, about = "Curvature, type criteria and extremal length on planar triangulation windows")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
struct Common {
    /// Generator: hexagonal, layered, ring-stack, mesh, comparison, tiling, flipped.
    #[arg(long, global = true)]
    gen: Option<String>,
    /// Generator spec, as a JSON file or inline JSON.
    #[arg(long, global = true)]
    spec: Option<String>,
    /// Window file in the export format, instead of a generator.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    #[arg(long, global = true)]
    radius: Option<u32>,
    #[arg(long, global = true)]
    nmax: Option<u32>,
    #[arg(long, global = true, default_value_t = 0)]
    root: V,
    #[arg(long, global = true, default_value_t = 1e-6)]
    tolerance: f64,
    /// Solver rounds (vel) or subgraph size cap (certify).
    #[arg(long, global = true)]
    cap: Option<usize>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CertKind {
    Partition,
    BallDegree,
    Perimetric,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a window and write it out.
    Generate {
        /// Include edge and face lists.
        #[arg(long)]
        dumps: bool,
    },
    /// Degree-excess profile with series partial sums.
    Profile,
    /// Gauss-Bonnet residuals on balls, main bodies and random subgraphs.
    GaussBonnet {
        #[arg(long, default_value_t = 0)]
        samples: usize,
        #[arg(long, default_value_t = 12)]
        sample_size: usize,
    },
    /// Vertex extremal length.
    Vel {
        /// Where to write the extremal metric as CSV.
        #[arg(long)]
        metric_out: Option<PathBuf>,
    },
    /// Water flow energies on a ring stack.
    Flow {
        /// Work from the ring sizes alone, for stacks too large to build.
        #[arg(long)]
        levelwise: bool,
    },
    /// Hyperbolicity certificate.
    Certify {
        #[arg(long, value_enum)]
        kind: CertKind,
        /// `ε` as `p/q`.
        #[arg(long, default_value = "1/6")]
        epsilon: String,
        /// Part size bound or ball radius.
        #[arg(long)]
        k: Option<usize>,
        /// JSON list of parts; the singleton partition when absent.
        #[arg(long)]
        partition: Option<String>,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 0.0)]
        beta: f64,
    },
    /// Layer recurrences of a layered spec.
    Layers,
}

struct Loaded {
    window: TriangulationWindow,
    gen: Option<GraphGenerator>,
    tiling: Option<SquareTiling>,
    comparison: Option<(ComparisonGraph, LayerSpec)>,
    mesh: bool,
}

impl Loaded {
    fn plain(window: TriangulationWindow) -> Self {
        Loaded { window, gen: None, tiling: None, comparison: None, mesh: false }
    }
}

fn read_text(s: &str) -> Result<String> {
    let t = s.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        return Ok(s.to_string());
    }
    fs::read_to_string(s).map_err(|e| Error::Parse(format!("{s}: {e}")))
}

fn parse<T: serde::de::DeserializeOwned>(c: &Common) -> Result<T> {
    let s = c.spec.as_deref().ok_or_else(|| Error::InvalidSpec("--spec is required".into()))?;
    serde_json::from_str(&read_text(s)?).map_err(|e| Error::Parse(e.to_string()))
}

fn radius(c: &Common) -> Result<u32> {
    match c.radius {
        Some(0) => Err(Error::InvalidSpec("radius must be at least 1".into())),
        Some(r) => Ok(r),
        None => Err(Error::InvalidSpec("--radius is required".into())),
    }
}

fn load(c: &Common) -> Result<Loaded> {
    if let Some(p) = &c.input {
        let s = fs::read_to_string(p).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?;
        return Ok(Loaded::plain(TriangulationWindow::from_json(&s)?));
    }
    let name = c.gen.as_deref().map(|g| g.replace('-', "_"));
    let gen = match name.as_deref() {
        None => parse::<GraphGenerator>(c)?,
        Some("hexagonal") => GraphGenerator::Hexagonal,
        Some("layered") => GraphGenerator::Layered(parse(c)?),
        Some("ring_stack") => {
            let spec: ExcessSpec = parse(c)?;
            let rs = RingStack::new(&spec, radius(c)?)?;
            return Ok(Loaded {
                window: rs.window().clone(),
                gen: Some(GraphGenerator::RingStack(spec)),
                tiling: None,
                comparison: None,
                mesh: false,
            });
        }
        Some("mesh") => {
            let spec: MeshSpec = parse(c)?;
            let mut l = Loaded::plain(triangular_mesh(&spec)?);
            l.mesh = true;
            return Ok(l);
        }
        Some("tiling") => {
            let v: serde_json::Value = parse(c)?;
            let t = match v.get("rings").and_then(|r| r.as_array()) {
                Some(r) => {
                    let a: Option<Vec<u64>> = r.iter().map(|x| x.as_u64()).collect();
                    SquareTiling::rings(&a.ok_or_else(|| Error::InvalidSpec("rings must be positive integers".into()))?)?
                }
                None => serde_json::from_value(v).map_err(|e| Error::Parse(e.to_string()))?,
            };
            let mut l = Loaded::plain(cptype::generators::square_tiling_contact_graph(&t)?);
            l.tiling = Some(t);
            return Ok(l);
        }
        Some("comparison") => {
            let spec: LayerSpec = parse(c)?;
            let n = c.nmax.unwrap_or(1);
            let cg = comparison_graph(&spec, n)?;
            let mut l = Loaded::plain(cg.window.clone());
            l.comparison = Some((cg, spec));
            return Ok(l);
        }
        Some("flipped") => {
            let flips = match &c.spec {
                Some(_) => {
                    let v: serde_json::Value = parse(c)?;
                    v.get("flips").and_then(|x| x.as_u64()).unwrap_or(0) as usize
                }
                None => 0,
            };
            return Ok(Loaded::plain(flipped_hexagonal(radius(c)?, flips, c.seed)?));
        }
        Some(other) => return Err(Error::InvalidSpec(format!("unknown generator {other}"))),
    };
    let r = radius(c)?;
    let window = build_window(&gen, r)?;
    Ok(Loaded { window, gen: Some(gen), tiling: None, comparison: None, mesh: false })
}

fn emit(c: &Common, text: &str) -> Result<()> {
    match &c.out {
        Some(p) => fs::write(p, text).map_err(|e| Error::Parse(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| Error::Parse(e.to_string()))
        }
    }
}

fn json_text(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json") + "\n"
}

fn budget() -> Result<u64> {
    match std::env::var("CPTYPER_BUDGET") {
        Ok(s) => s.trim().parse().map_err(|_| Error::Parse(format!("CPTYPER_BUDGET={s} is not a count"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn default_nmax(c: &Common, w: &TriangulationWindow) -> u32 {
    c.nmax.unwrap_or_else(|| {
        if w.is_fragment() {
            w.max_dist()
        } else {
            w.complete_radius().saturating_sub(w.dist(c.root) + 1)
        }
    })
}

fn verdict_json(v: &SeriesVerdict) -> serde_json::Value {
    let last = v.last();
    json!({
        "verdict": v.verdict,
        "justification": v.justification,
        "terms": last.map(|p| p.terms),
        "partial_sum": last.map(|p| p.value),
        "error": last.map(|p| p.error),
    })
}

fn cmd_generate(c: &Common, dumps: bool) -> Result<()> {
    let l = load(c)?;
    match c.format.unwrap_or(Format::Json) {
        Format::Json => emit(c, &(l.window.to_json(dumps) + "\n")),
        Format::Csv => {
            let mut s = String::from("u,v\n");
            for (u, v, _) in l.window.edges() {
                s += &format!("{u},{v}\n");
            }
            emit(c, &s)
        }
    }
}

fn cmd_profile(c: &Common) -> Result<()> {
    let l = load(c)?;
    let w = &l.window;
    let p = excess_profile(w, c.root, default_nmax(c, w))?;
    let (gs, ge) = l.gen.as_ref().map(generator_growth).unwrap_or((None, None));
    let rs = series_rodin_sullivan(&p, gs);
    let nw = series_nash_williams(&p, ge);
    match c.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::new();
            for (i, line) in p.csv().lines().enumerate() {
                if i == 0 {
                    s += &format!("{line},sum_inv_sphere,sum_inv_edge_boundary\n");
                } else {
                    let n = i - 1;
                    let a = if n == 0 { 0.0 } else { rs.partial_sums[n - 1].value };
                    s += &format!("{line},{a},{}\n", nw.partial_sums[n].value);
                }
            }
            emit(c, &s)
        }
        Format::Json => {
            let mut v = json!({
                "profile": p,
                "rodin_sullivan": verdict_json(&rs),
                "nash_williams": verdict_json(&nw),
            });
            if let Some(GraphGenerator::RingStack(spec)) = &l.gen {
                let (a, b) = series_t1(spec, p.n_max as usize + 1)?;
                v["sum_inv_a"] = verdict_json(&a);
                v["sum_inv_adjacent_a"] = verdict_json(&b);
            }
            emit(c, &json_text(&v))
        }
    }
}

fn cmd_gauss_bonnet(c: &Common, samples: usize, sample_size: usize) -> Result<()> {
    let l = load(c)?;
    let w = &l.window;
    let nmax = default_nmax(c, w);
    let mut s = String::from("subgraph,n,vertices,kappa,chi,gbf1,gbf2\n");
    let mut bad = 0;
    let mut row = |s: &mut String, name: &str, n: u32, sel: &SubgraphSelection| -> Result<()> {
        let g1 = verify_gbf1(sel)?;
        let g2 = verify_gbf2(sel)?;
        if !g1.residual.numer().eq(&0.into()) || !g2.residual.numer().eq(&0.into()) {
            bad += 1;
        }
        *s += &format!(
            "{name},{n},{},{},{},{},{}\n",
            sel.vertex_count(),
            fmt_q(&g1.kappa),
            g1.chi,
            fmt_q(&g1.residual),
            fmt_q(&g2.residual)
        );
        Ok(())
    };
    for n in 0..=nmax {
        row(&mut s, "ball", n, &SubgraphSelection::ball(w, c.root, n)?)?;
        if w.is_triangulation() {
            let mb = main_body_unchecked(w, c.root, n)?;
            row(&mut s, "main_body", n, &mb.body)?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let region = inner_region(w, 1);
    for i in 0..samples {
        let verts = random_connected(w, &region, sample_size, &mut rng)?;
        row(&mut s, "random", i as u32, &SubgraphSelection::induced(w, verts)?)?;
    }
    emit(c, &s)?;
    if bad > 0 {
        return Err(Error::Hypothesis(format!("{bad} nonzero Gauss-Bonnet residuals")));
    }
    Ok(())
}

fn solution_json(sol: &VelSolution) -> serde_json::Value {
    json!({
        "vel": sol.value,
        "upper": sol.upper,
        "rounds": sol.rounds,
        "witness_paths": sol.witnesses.len(),
    })
}

fn cmd_vel(c: &Common, metric_out: &Option<PathBuf>) -> Result<()> {
    let l = load(c)?;
    let rounds = c.cap.unwrap_or(cptype::vel::DEFAULT_ROUNDS);
    let (sol, mut v) = if let Some(t) = &l.tiling {
        let ex = vel_exact_tiling(t)?;
        let sol = vel_solve(&ex.window, &ex.family, c.tolerance, rounds)?;
        let v = json!({ "exact": fmt_q(&ex.value), "exact_value": to_f64(&ex.value) });
        (sol, v)
    } else if let Some((cg, spec)) = &l.comparison {
        let fam = PathFamily::new(&cg.window, vec![cg.window.root()], cg.terminal.clone())?;
        let sol = vel_solve(&cg.window, &fam, c.tolerance, rounds)?;
        let n = cg.thetas.len();
        let closed = vel_closed_form(&layer_sequences(spec, n)?);
        let last = &closed[n - 1];
        (sol, json!({ "closed_form": fmt_q(last), "closed_form_value": to_f64(last) }))
    } else if l.mesh {
        let w = &l.window;
        let far = w.max_dist();
        let d = w.bfs(w.root(), None);
        let top = (0..w.vertex_count() as V).filter(|&v| d[v as usize] == far).collect();
        let fam = PathFamily::new(w, vec![w.root()], top)?;
        (vel_solve(w, &fam, c.tolerance, rounds)?, json!({}))
    } else {
        let w = &l.window;
        let fam = PathFamily::to_frontier(w, vec![c.root])?;
        let sol = vel_solve(w, &fam, c.tolerance, rounds)?;
        (sol, json!({ "note": "paths end on the frontier; a lower bound for the value at infinity" }))
    };
    for (k, x) in solution_json(&sol).as_object().unwrap() {
        v[k] = x.clone();
    }
    if let Some(p) = metric_out {
        fs::write(p, sol.metric.csv()).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?;
    }
    emit(c, &json_text(&v))
}

fn cmd_flow(c: &Common, levelwise: bool) -> Result<()> {
    let spec: ExcessSpec = match (&c.gen, &c.spec) {
        (_, Some(_)) if c.gen.as_deref().map_or(true, |g| g.replace('-', "_") == "ring_stack") => {
            match parse::<GraphGenerator>(c) {
                Ok(GraphGenerator::RingStack(s)) => s,
                Ok(_) => return Err(Error::InvalidSpec("flows need a ring-stack spec".into())),
                Err(_) => parse(c)?,
            }
        }
        _ => return Err(Error::InvalidSpec("flows need --gen ring-stack with --spec".into())),
    };
    if levelwise {
        let n = c.nmax.or(c.radius).ok_or_else(|| Error::InvalidSpec("--nmax is required".into()))? as usize;
        let a = spec.a_prefix(n + 1)?;
        let le = levelwise_energy(&a)?;
        let mut s = String::from("n,energy,bound,sum_inv_a\n");
        let mut inv = 0.0;
        for k in 0..=n {
            if k >= 1 {
                inv += 1.0 / cptype::sequences::big_to_f64(&a[k - 1]);
            }
            s += &format!("{k},{},{},{inv}\n", le.energy[k], le.bound[k]);
        }
        if !le.edge_counts_match || le.worst_edge_ratio > 1.0 {
            return Err(Error::Hypothesis("edge count or per-edge bound failed".into()));
        }
        return emit(c, &s);
    }
    let rs = RingStack::new(&spec, radius(c)?)?;
    let w = rs.window();
    let flow = water_flow(&rs)?;
    let r = w.complete_radius();
    let bad = flow.conservation_failures(w, &|v| w.dist(v) == r);
    if !bad.is_empty() {
        return Err(Error::Hypothesis(format!("flow not conserved at {} vertices", bad.len())));
    }
    let e = flow_energy(w, &flow, c.nmax.unwrap_or(r - 1).min(r - 1))?;
    match c.format.unwrap_or(Format::Csv) {
        Format::Csv => emit(c, &e.csv()),
        Format::Json => emit(
            c,
            &json_text(&json!({
                "total": fmt_q(&e.total),
                "bound": fmt_q(&e.bound),
                "edge_bound_holds": e.edge_bound_holds(),
                "total_bound_holds": e.total_bound_holds(),
            })),
        ),
    }
}

fn cmd_certify(
    c: &Common,
    kind: CertKind,
    epsilon: &str,
    k: Option<usize>,
    partition: &Option<String>,
    g: GFunction,
) -> Result<()> {
    let l = load(c)?;
    let w = &l.window;
    let cert = match kind {
        CertKind::Partition => {
            let eps = parse_q(epsilon).ok_or_else(|| Error::Parse(format!("bad epsilon {epsilon}")))?;
            let parts: Vec<Vec<V>> = match partition {
                Some(p) => serde_json::from_str(&read_text(p)?).map_err(|e| Error::Parse(e.to_string()))?,
                None => singleton_partition(w),
            };
            partition_certificate(w, &parts, eps, k.unwrap_or(1))?
        }
        CertKind::BallDegree => ball_degree_certificate(w, k.unwrap_or(2) as u32)?,
        CertKind::Perimetric => perimetric_certificate(w, &[c.root], g, c.cap.unwrap_or(12), budget()?)?,
    };
    emit(c, &(cert.to_json() + "\n"))
}

fn cmd_layers(c: &Common) -> Result<()> {
    let spec: LayerSpec = parse(c)?;
    let seq = layer_sequences(&spec, c.nmax.unwrap_or(5) as usize)?;
    emit(c, &seq.csv())
}

fn run(cli: Cli) -> Result<()> {
    let c = &cli.common;
    if !(c.tolerance > 0.0) {
        return Err(Error::InvalidSpec("tolerance must be positive".into()));
    }
    match &cli.cmd {
        Cmd::Generate { dumps } => cmd_generate(c, *dumps),
        Cmd::Profile => cmd_profile(c),
        Cmd::GaussBonnet { samples, sample_size } => cmd_gauss_bonnet(c, *samples, *sample_size),
        Cmd::Vel { metric_out } => cmd_vel(c, metric_out),
        Cmd::Flow { levelwise } => cmd_flow(c, *levelwise),
        Cmd::Certify { kind, epsilon, k, partition, alpha, beta } => {
            cmd_certify(c, *kind, epsilon, *k, partition, GFunction { alpha: *alpha, beta: *beta })
        }
        Cmd::Layers => cmd_layers(c),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
