use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use log::info;

use sldg::harness::{
    cfl_sweep, converge, errors_csv, mass_csv, report_text, run_with, sweep_csv, MeshSource,
    Problem, ProblemSpec,
};
use sldg::remap::LimiterConfig;
use sldg::selftest::{self, SelftestConfig};
use sldg::transport::{TraceConfig, UpstreamShape};

#[derive(Parser)]
#[command(name = "sldg", version, about = "Semi-Lagrangian DG transport on triangular meshes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one problem and write fields, mass history and a report.
    Run {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "level:1")]
        mesh: MeshSource,
        /// Write a field dump every N steps (the first and last are always written).
        #[arg(long, default_value_t = 0)]
        dump_every: usize,
    },
    /// Run on levels 1..=N (or the given meshes) and tabulate orders.
    Converge {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 3)]
        levels: usize,
        /// Explicit mesh list overriding --levels.
        #[arg(long, value_delimiter = ',')]
        meshes: Vec<MeshSource>,
    },
    /// Run one mesh at several CFL numbers.
    CflSweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "level:1")]
        mesh: MeshSource,
        #[arg(long, value_delimiter = ',', default_value = "1,10,100")]
        cfls: Vec<f64>,
    },
    /// Write a benchmark mesh in the text format.
    Mesh {
        #[arg(long, default_value = "level:1")]
        mesh: MeshSource,
        /// Apply midpoint refinement this many times.
        #[arg(long, default_value_t = 0)]
        refine: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Geometry and quadrature oracle suites; exits nonzero on failure.
    GeomSelftest {
        /// Monte Carlo samples per curved cell.
        #[arg(long)]
        samples: Option<usize>,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value = "rotation")]
    problem: Problem,
    #[arg(long, default_value_t = 2)]
    degree: usize,
    #[arg(long, default_value_t = 10.0)]
    cfl: f64,
    /// Final time; defaults to the problem's benchmark time.
    #[arg(long)]
    tfinal: Option<f64>,
    #[arg(long)]
    weno: bool,
    #[arg(long)]
    pp: bool,
    /// Fall back to straight upstream triangles for invalid curved cells.
    #[arg(long)]
    relaxed: bool,
    /// Use straight upstream triangles everywhere.
    #[arg(long)]
    straight: bool,
    #[arg(long, default_value_t = 4)]
    substeps: usize,
    /// Worker threads; 1 gives the deterministic reference mode.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

impl Common {
    fn spec(&self, mesh: MeshSource) -> ProblemSpec {
        let mut s = ProblemSpec::new(self.problem, mesh, self.degree, self.cfl);
        if let Some(t) = self.tfinal {
            s.t_final = t;
        }
        s.limiters = LimiterConfig {
            weno: self.weno,
            pp: self.pp,
            ..LimiterConfig::default()
        };
        s.relaxed = self.relaxed;
        s.shape = if self.straight {
            UpstreamShape::Straight
        } else {
            UpstreamShape::Curved
        };
        s.trace = TraceConfig {
            substeps: self.substeps,
        };
        s
    }

    fn setup(&self) -> Result<()> {
        if let Some(n) = self.threads {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .context("configuring thread pool")?;
        }
        fs::create_dir_all(&self.out)
            .with_context(|| format!("creating {}", self.out.display()))?;
        Ok(())
    }
}

fn write(dir: &Path, name: &str, text: &str) -> Result<()> {
    let p = dir.join(name);
    fs::write(&p, text).with_context(|| format!("writing {}", p.display()))?;
    info!("wrote {}", p.display());
    Ok(())
}

fn cmd_run(common: &Common, mesh: MeshSource, dump_every: usize) -> Result<()> {
    common.setup()?;
    let spec = common.spec(mesh);
    let out_dir = common.out.clone();
    let nsteps = {
        let m = spec.mesh.load()?;
        let dt = sldg::harness::compute_dt(&m, &spec.velocity(), spec.cfl, 0.0);
        write(&out_dir, "mesh.txt", &m.to_text())?;
        sldg::harness::time_steps(spec.t_final, dt).len()
    };
    let output = run_with(&spec, |n, field, report| {
        println!("{}", report.log_line(n));
        if n == nsteps || (dump_every > 0 && n % dump_every == 0) {
            field
                .write_dump(out_dir.join(format!("field_{n}.txt")))} else {
            Ok(())
        }
    })?;
    output.initial.write_dump(out_dir.join("field_0.txt"))?;
    write(&out_dir, "mass.csv", &mass_csv(&output.reports))?;
    if let Some(e) = &output.errors {
        let row = sldg::harness::ConvergenceRow {
            elements: output.mesh.len(),
            r_max: output.mesh.r_max(),
            steps: output.steps(),
            l1: e.l1,
            l2: e.l2,
            linf: e.linf,
            order_l1: None,
            order_l2: None,
            order_linf: None,
        };
        write(&out_dir, "errors.csv", &errors_csv(&[row]))?;
    }
    let report = report_text(&output);
    print!("{report}");
    write(&out_dir, "report.txt", &report)
}

fn cmd_converge(common: &Common, levels: usize, meshes: Vec<MeshSource>) -> Result<()> {
    common.setup()?;
    let meshes = if meshes.is_empty() {
        (1..=levels).map(MeshSource::Level).collect()
    } else {
        meshes
    };
    let rows = converge(&common.spec(meshes[0].clone()), &meshes)?;
    let csv = errors_csv(&rows);
    print!("{csv}");
    write(&common.out, "errors.csv", &csv)
}

fn cmd_sweep(common: &Common, mesh: MeshSource, cfls: &[f64]) -> Result<()> {
    common.setup()?;
    let rows = cfl_sweep(&common.spec(mesh), cfls)?;
    let csv = sweep_csv(&rows);
    print!("{csv}");
    write(&common.out, "cfl_sweep.csv", &csv)
}

fn cmd_mesh(mesh: &MeshSource, refine: usize, out: &Path) -> Result<()> {
    let mut m = mesh.load().with_context(|| format!("loading {mesh}"))?;
    for _ in 0..refine {
        m = m.refine_midpoint();
    }
    fs::write(out, m.to_text()).with_context(|| format!("writing {}", out.display()))?;
    println!("{} vertices, {} elements, r_max {:.6}", m.vertices().len(), m.len(), m.r_max());
    Ok(())
}

fn cmd_selftest(samples: Option<usize>) -> Result<bool> {
    let mut cfg = SelftestConfig::from_env().context("reading SLDG_SEED")?;
    if let Some(s) = samples {
        cfg.mc_samples = s;
    }
    let report = selftest::run_all(&cfg)?;
    for line in report.lines() {
        println!("{line}");
    }
    Ok(report.passed())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            common,
            mesh,
            dump_every,
        } => cmd_run(&common, mesh, dump_every).map(|_| true),
        Command::Converge {
            common,
            levels,
            meshes,
        } => {
            if levels < 2 && meshes.len() < 2 {
                Err(anyhow::anyhow!("converge needs at least two levels"))
            } else {
                cmd_converge(&common, levels, meshes).map(|_| true)
            }
        }
        Command::CflSweep { common, mesh, cfls } => {
            if cfls.is_empty() {
                Err(anyhow::anyhow!("no CFL numbers given"))
            } else {
                cmd_sweep(&common, mesh, &cfls).map(|_| true)
            }
        }
        Command::Mesh { mesh, refine, out } => cmd_mesh(&mesh, refine, &out).map(|_| true),
        Command::GeomSelftest { samples } => cmd_selftest(samples),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("selftest failed");
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

