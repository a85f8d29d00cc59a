use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use flatwall::classify::{verify_flat_certificate, FlatWallCertificate};
use flatwall::genverify::{gen_lowerbound, gen_planted_chain, random_plan, GenError, PlantPlan};
use flatwall::graph::{validate_minor_model, ModelReport};
use flatwall::pipeline::{flat_wall_strong, flat_wall_weak, Outcome, Params, PipelineError};
use flatwall::wall::{identity_wall, subdivided_wall, Wall};
use flatwall::{Graph, MinorModel};

#[derive(Parser)]
#[command(name = "flatwall", version, about = "Clique minors or flat walls from a large wall")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write generated instances.
    #[command(subcommand)]
    Gen(GenCmd),
    /// Run the pipeline on a graph and a wall in it.
    #[command(subcommand)]
    Run(RunCmd),
    /// Check a certificate against a graph.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Subcommand)]
enum GenCmd {
    /// Elementary wall, optionally with subdivided edges.
    Wall {
        #[arg(long)]
        h: usize,
        #[arg(long)]
        w: usize,
        /// Extra vertices on every wall edge.
        #[arg(long, default_value_t = 0)]
        subdivide: usize,
        /// Graph file.
        #[arg(long)]
        out: PathBuf,
        /// Wall file (JSON); defaults to `<out>.wall.json`.
        #[arg(long)]
        wall_out: Option<PathBuf>,
    },
    /// Grid with crossing diagonals in every `wp`-th cell.
    Lowerbound {
        #[arg(long)]
        wp: usize,
        #[arg(long)]
        tp: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Chain of basic walls with prescribed types.
    Planted {
        /// Plan file (JSON with `z`, `tau`, `types`).
        #[arg(long, conflicts_with = "random")]
        plan: Option<PathBuf>,
        /// Random plan over this many interior walls.
        #[arg(long, requires_all = ["z", "tau"])]
        random: Option<usize>,
        #[arg(long)]
        z: Option<usize>,
        #[arg(long)]
        tau: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Chain file (JSON); defaults to `<out>.chain.json`.
        #[arg(long)]
        chain_out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Wall file (JSON).
    #[arg(long)]
    wall: PathBuf,
    #[arg(long)]
    t: usize,
    #[arg(long)]
    w: usize,
    #[arg(long)]
    override_n: Option<usize>,
    #[arg(long)]
    override_z: Option<usize>,
    #[arg(long)]
    override_tau: Option<usize>,
    /// Model or certificate file (JSON).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum RunCmd {
    Weak {
        #[command(flatten)]
        a: RunArgs,
        /// Maximum vertex degree of the graph.
        #[arg(long)]
        d: usize,
    },
    Strong {
        #[command(flatten)]
        a: RunArgs,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    Model {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        model: PathBuf,
    },
    Flat {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        cert: PathBuf,
    },
}

enum Fail {
    Verify(String),
    Param(String),
    Other(String),
}

impl Fail {
    fn code(&self) -> u8 {
        match self {
            Fail::Verify(_) => 2,
            Fail::Param(_) => 3,
            Fail::Other(_) => 1,
        }
    }
}

impl From<GenError> for Fail {
    fn from(e: GenError) -> Self {
        match e {
            GenError::Param(_) | GenError::Plan(_) => Fail::Param(e.to_string()),
            other => Fail::Other(other.to_string()),
        }
    }
}

impl From<PipelineError> for Fail {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::Param(_) | PipelineError::Degree { .. } => Fail::Param(e.to_string()),
            other => Fail::Other(other.to_string()),
        }
    }
}

fn read(p: &Path) -> Result<String, Fail> {
    fs::read_to_string(p).map_err(|e| Fail::Other(format!("{}: {e}", p.display())))
}

fn write(p: &Path, s: &str) -> Result<(), Fail> {
    fs::write(p, s).map_err(|e| Fail::Other(format!("{}: {e}", p.display())))
}

fn json<T: serde::de::DeserializeOwned>(p: &Path) -> Result<T, Fail> {
    serde_json::from_str(&read(p)?).map_err(|e| Fail::Other(format!("{}: {e}", p.display())))
}

fn graph(p: &Path) -> Result<Graph, Fail> {
    Graph::from_text(&read(p)?).map_err(|e| Fail::Other(format!("{}: {e}", p.display())))
}

fn sidecar(out: &Path, given: Option<PathBuf>, ext: &str) -> PathBuf {
    given.unwrap_or_else(|| {
        let mut s = out.as_os_str().to_owned();
        s.push(ext);
        PathBuf::from(s)
    })
}

fn gen(cmd: GenCmd) -> Result<(), Fail> {
    match cmd {
        GenCmd::Wall { h, w, subdivide, out, wall_out } => {
            let made = if subdivide == 0 { identity_wall(h, w) } else { subdivided_wall(h, w, subdivide) };
            let (g, wall) = made.map_err(|e| Fail::Param(e.to_string()))?;
            write(&out, &g.to_text())?;
            write(&sidecar(&out, wall_out, ".wall.json"), &wall.to_json())?;
            println!("wall {h}x{w}: {} vertices, {} edges", g.n(), g.m());
        }
        GenCmd::Lowerbound { wp, tp, out } => {
            let lb = gen_lowerbound(wp, tp)?;
            write(&out, &lb.graph.to_text())?;
            println!("grid side {}, {} cells, max degree {}", lb.side, lb.cells.len(), lb.graph.max_degree());
        }
        GenCmd::Planted { plan, random, z, tau, seed, out, chain_out } => {
            let plan: PlantPlan = match (plan, random) {
                (Some(p), _) => json(&p)?,
                (None, Some(n)) => random_plan(seed, n, z.unwrap(), tau.unwrap()),
                (None, None) => return Err(Fail::Param("give --plan or --random".into())),
            };
            let (g, chain) = gen_planted_chain(&plan)?;
            write(&out, &g.to_text())?;
            write(&sidecar(&out, chain_out, ".chain.json"), &chain.to_json())?;
            println!("planted chain of {} walls, types {:?}", chain.len(), plan.types);
        }
    }
    Ok(())
}

fn run(cmd: RunCmd) -> Result<(), Fail> {
    let (a, weak_d) = match cmd {
        RunCmd::Weak { a, d } => (a, Some(d)),
        RunCmd::Strong { a } => (a, None),
    };
    let g = graph(&a.graph)?;
    let wall: Wall = json(&a.wall)?;
    let mut p = match weak_d {
        Some(d) => Params::weak(a.t, a.w, d)?,
        None => Params::strong(a.t, a.w)?,
    };
    if let Some(n) = a.override_n {
        p = p.override_n(n);
    }
    if let Some(z) = a.override_z {
        p = p.override_z(z);
    }
    if let Some(tau) = a.override_tau {
        p = p.override_tau(tau);
    }
    let out = if weak_d.is_some() { flat_wall_weak(&g, &wall, &p)? } else { flat_wall_strong(&g, &wall, &p)? };
    match &out {
        Outcome::CliqueMinor { model, route, grasped } => {
            write(&a.out, &model.to_json())?;
            println!("clique K{} via {route:?}, grasped: {grasped}", model.pattern.n());
        }
        Outcome::Flat { apex, cert } => {
            write(&a.out, &cert.to_json())?;
            println!("flat wall {}x{}, apex {:?}", cert.wall.h(), cert.wall.r(), apex);
        }
        Outcome::Inconclusive { reason } => {
            write(&a.out, &serde_json::json!({ "inconclusive": reason }).to_string())?;
            println!("inconclusive: {reason}");
        }
    }
    Ok(())
}

fn verify(cmd: VerifyCmd) -> Result<(), Fail> {
    match cmd {
        VerifyCmd::Model { graph: gp, model } => {
            let g = graph(&gp)?;
            let m = MinorModel::from_json(&read(&model)?).map_err(|e| Fail::Other(e.to_string()))?;
            match validate_minor_model(&g, &m).map_err(|e| Fail::Verify(e.to_string()))? {
                ModelReport::Pass => println!("model of a {}-vertex pattern: pass", m.pattern.n()),
                ModelReport::Fail(v) => return Err(Fail::Verify(v.to_string())),
            }
        }
        VerifyCmd::Flat { graph: gp, cert } => {
            let g = graph(&gp)?;
            let c = FlatWallCertificate::from_json(&read(&cert)?).map_err(|e| Fail::Other(e.to_string()))?;
            let rep = verify_flat_certificate(&g, &c);
            if !rep.is_pass() {
                return Err(Fail::Verify(format!("{:?}", rep.failures)));
            }
            println!("flat wall {}x{} with {} apex vertices: pass", c.wall.h(), c.wall.r(), c.apex.len());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { 64 } else { 0 });
        }
    };
    let res = match cli.cmd {
        Cmd::Gen(c) => gen(c),
        Cmd::Run(c) => run(c),
        Cmd::Verify(c) => verify(c),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (Fail::Verify(m) | Fail::Param(m) | Fail::Other(m)) = &f;
            eprintln!("error: {m}");
            ExitCode::from(f.code())
        }
    }
}
