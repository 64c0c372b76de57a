use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use phasecat::config::{Backend, RunConfig};
use phasecat::fincat::{build_gset_category, enumerate_phased_coproducts, hom_counts};
use phasecat::gp::{check_coherence, GpCategory, GpMorphism, GpObject};
use phasecat::harness::{any_failed, run_suite, sample_gp_morphism, summary_markdown, Verdict};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(name = "phasecat", version, about = "Exact checks of phased coproducts and the GP construction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured law suites and write verdicts and a summary.
    Verify {
        config: PathBuf,
        #[command(flatten)]
        run: RunFlags,
    },
    /// Print the GP structure for objects of the given base dimensions.
    Gp {
        config: PathBuf,
        /// Comma-separated base dimensions, e.g. `2,2`.
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        /// Print the pentagon transcript (needs three or four dimensions).
        #[arg(long)]
        assoc: bool,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Exhaustive report on the finite G-Set backend.
    Oracle {
        config: PathBuf,
        #[command(flatten)]
        run: RunFlags,
    },
    /// Re-render a verdict file as a summary; exits 1 if any verdict failed.
    Report { verdicts: PathBuf },
}

#[derive(Args)]
struct RunFlags {
    /// Replaces the configured seed list.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    dims_max: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    /// Directory for the verdict and summary files.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failures mapped onto the exit-code contract.
enum Failure {
    Usage(anyhow::Error),
    Laws,
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify { config, run } => cmd_verify(&config, &run),
        Command::Gp { config, dims, assoc, seed } => cmd_gp(&config, &dims, assoc, seed),
        Command::Oracle { config, run } => cmd_oracle(&config, &run),
        Command::Report { verdicts } => cmd_report(&verdicts),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Laws) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn load(path: &Path, run: Option<&RunFlags>) -> anyhow::Result<RunConfig> {
    let mut cfg = RunConfig::load(path)?;
    if let Some(run) = run {
        if let Some(s) = run.seed {
            cfg.seeds = vec![s];
        }
        if let Some(d) = run.dims_max {
            cfg.dims_max = d;
        }
        if let Some(t) = run.trials {
            cfg.trials = t;
        }
        cfg.validate()?;
    }
    Ok(cfg)
}

fn output_paths(cfg: &RunConfig, run: &RunFlags) -> anyhow::Result<(PathBuf, PathBuf)> {
    let (v, s) = (cfg.output.verdicts.clone(), cfg.output.summary.clone());
    match &run.out {
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            let name = |p: &Path| dir.join(p.file_name().unwrap_or(p.as_os_str()));
            Ok((name(&v), name(&s)))
        }
        None => Ok((v, s)),
    }
}

fn write_reports(verdicts: &[Verdict], summary: &str, paths: &(PathBuf, PathBuf)) -> anyhow::Result<()> {
    let mut lines = String::new();
    for v in verdicts {
        lines.push_str(&v.to_json_line());
        lines.push('\n');
    }
    fs::write(&paths.0, lines).with_context(|| format!("writing {}", paths.0.display()))?;
    fs::write(&paths.1, summary).with_context(|| format!("writing {}", paths.1.display()))?;
    Ok(())
}

fn cmd_verify(path: &Path, run: &RunFlags) -> Result<(), Failure> {
    let cfg = load(path, Some(run))?;
    let verdicts = run_suite(&cfg.suites, &cfg).map_err(anyhow::Error::from)?;
    let title = format!("Verification of {} ({} / {})", path.display(), cfg.ring, cfg.involution);
    let summary = summary_markdown(&title, &verdicts);
    write_reports(&verdicts, &summary, &output_paths(&cfg, run)?)?;
    print!("{summary}");
    if any_failed(&verdicts) {
        return Err(Failure::Laws);
    }
    Ok(())
}

fn cmd_report(path: &Path) -> Result<(), Failure> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let verdicts: Vec<Verdict> = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(i, l)| serde_json::from_str(l).with_context(|| format!("line {}", i + 1)))
        .collect::<anyhow::Result<_>>()?;
    print!("{}", summary_markdown(&format!("Report for {}", path.display()), &verdicts));
    if any_failed(&verdicts) {
        return Err(Failure::Laws);
    }
    Ok(())
}

fn show(label: &str, m: &GpMorphism) {
    println!("{label}: {} -> {}\n  {}", m.dom(), m.cod(), m.rep());
}

fn cmd_gp(path: &Path, dims: &[usize], assoc: bool, seed: u64) -> Result<(), Failure> {
    let cfg = load(path, None)?;
    if cfg.backend != Backend::Mat {
        return Err(anyhow::anyhow!("the gp command needs backend = \"mat\"").into());
    }
    let gp = GpCategory::from_phases(cfg.phase_group().map_err(anyhow::Error::from)?);
    let e = |r: Result<GpMorphism, phasecat::gp::GpError>| r.map_err(anyhow::Error::from);
    let objs: Vec<GpObject> = dims.iter().map(|&n| GpObject::new(n)).collect();
    println!("ring: {}", gp.ring());
    println!("phases: {}", gp.quot().phases().elements().iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", "));
    for o in &objs {
        println!("object {o}: base {} apex {}", o.base_dim, o.apex_dim());
    }
    if dims == [0] {
        let i = gp.initial_object();
        println!("initial object: {i} (apex {})", i.apex_dim());
        println!("kappa_I : I -> 0^ is an isomorphism: {}", gp.initial_unit_is_iso());
        return Ok(());
    }
    if objs.len() >= 2 {
        let (a, b) = (objs[0], objs[1]);
        let s = gp.gp_coproduct(a, b).map_err(anyhow::Error::from)?;
        println!("coproduct {a} + {b}: apex {}", s.apex.apex_dim());
        for (k, m) in s.coprojections.iter().enumerate() {
            show(&format!("coprojection {k}"), m);
        }
        let c = gp.corner_map(a, b).map_err(anyhow::Error::from)?;
        println!("corner map c_{{{a},{b}}}: {}x{}\n  {c}", c.rows(), c.cols());
        let t = gp.tensor_obj(a, b);
        println!("tensor {a} (x) {b} = {t}, apex {}", t.apex_dim());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = sample_gp_morphism(&mut rng, &gp, a.base_dim, a.base_dim, 1);
        let g = sample_gp_morphism(&mut rng, &gp, b.base_dim, b.base_dim, 1);
        show("sample f", &f);
        show("sample g", &g);
        show("f (x) g", &e(gp.gp_tensor(&f, &g))?);
        show("braiding", &e(gp.gp_braiding(a, b))?);
    }
    show("beta", &e(gp.gp_beta())?);
    if objs.len() >= 3 {
        let (a, b, c) = (objs[0], objs[1], objs[2]);
        show("associator", &e(gp.gp_associator(a, b, c))?);
        if assoc {
            let d = objs.get(3).copied().unwrap_or_else(|| gp.unit());
            pentagon_transcript(&gp, [a, b, c, d])?;
            let v = check_coherence(&gp, a, b, c).map_err(anyhow::Error::from)?;
            println!("coherence at ({a}, {b}, {c}): {}", if v.holds() { "holds" } else { "REFUTED" });
            if !v.holds() {
                return Err(Failure::Laws);
            }
        }
    } else if assoc {
        return Err(anyhow::anyhow!("--assoc needs at least three dimensions").into());
    }
    Ok(())
}

fn pentagon_transcript(gp: &GpCategory, [a, b, c, d]: [GpObject; 4]) -> Result<(), Failure> {
    let e = |r: Result<GpMorphism, phasecat::gp::GpError>| r.map_err(anyhow::Error::from);
    let t = |x, y| gp.tensor_obj(x, y);
    println!("pentagon for ({a}, {b}, {c}, {d})");
    let a1 = e(gp.gp_associator(t(a, b), c, d))?;
    let a2 = e(gp.gp_associator(a, b, t(c, d)))?;
    show("  alpha_{AB,C,D}", &a1);
    show("  alpha_{A,B,CD}", &a2);
    let lhs = e(gp.compose(&a2, &a1))?;
    let r1 = e(gp.gp_tensor(&e(gp.gp_associator(a, b, c))?, &gp.identity(d)))?;
    let r2 = e(gp.gp_associator(a, t(b, c), d))?;
    let r3 = e(gp.gp_tensor(&gp.identity(a), &e(gp.gp_associator(b, c, d))?))?;
    show("  alpha_{A,B,C} (x) id_D", &r1);
    show("  alpha_{A,BC,D}", &r2);
    show("  id_A (x) alpha_{B,C,D}", &r3);
    let rhs = e(gp.compose_all(&[&r3, &r2, &r1]))?;
    show("  two-step path", &lhs);
    show("  three-step path", &rhs);
    println!("  paths agree: {}", lhs == rhs);
    if lhs != rhs {
        return Err(Failure::Laws);
    }
    Ok(())
}

fn cmd_oracle(path: &Path, run: &RunFlags) -> Result<(), Failure> {
    let cfg = load(path, Some(run))?;
    if cfg.backend != Backend::Fincat {
        return Err(anyhow::anyhow!("the oracle command needs backend = \"fincat\"").into());
    }
    let group = cfg.group().map_err(anyhow::Error::from)?;
    let gsets = build_gset_category(&group, cfg.fincat.max_set_size).map_err(anyhow::Error::from)?;
    let q = gsets.quotient(true).map_err(anyhow::Error::from)?;
    let n = q.num_objects();

    let mut table = format!(
        "# Finite oracle: G = {}, sets of size at most {}\n\n{} objects, {} morphisms, {} classes modulo translations\n\n",
        group.name(),
        cfg.fincat.max_set_size,
        n,
        gsets.category.num_morphisms(),
        q.num_classes()
    );
    table.push_str("| A | B | size A | size B | candidates | phased coproducts | phase counts |\n|---|---|---|---|---|---|---|\n");
    for a in 0..n {
        for b in a..n {
            let report = enumerate_phased_coproducts(&q, &[a, b]);
            let counts: Vec<String> = report.witnesses.iter().map(|w| w.phases.len().to_string()).collect();
            table.push_str(&format!(
                "| {a} | {b} | {} | {} | {} | {} | {} |\n",
                gsets.size(a),
                gsets.size(b),
                report.candidates,
                report.witnesses.len(),
                counts.join(" ")
            ));
        }
    }
    table.push_str("\n## Hom-class counts\n\n");
    for (a, row) in hom_counts(&q).iter().enumerate() {
        table.push_str(&format!("- from {a}: {row:?}\n"));
    }
    table.push('\n');

    let verdicts = run_suite(&cfg.suites, &cfg).map_err(anyhow::Error::from)?;
    let summary = format!("{table}{}", summary_markdown("Finite laws", &verdicts));
    write_reports(&verdicts, &summary, &output_paths(&cfg, run)?)?;
    print!("{summary}");
    if any_failed(&verdicts) {
        return Err(Failure::Laws);
    }
    Ok(())
}
