//! `fpp`: replay derivations about fake projective planes.
//!
//! Exit codes: 0 expected verdict, 2 inconsistent axioms, 3 unknown or
//! incompatible result/plane, 4 conditional verdict, 1 anything else.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use fpp_core::axioms::{standard_axioms, AxiomSet};
use fpp_core::cohomology::{chi, infer};
use fpp_core::config::{apply_axiom_file, parse_plane_config};
use fpp_core::derived::search_nonstandard;
use fpp_core::group_action::{make_order7_action, LinearAction};
use fpp_core::picard::{FakePlane, PlaneRegistry, TorsionElement};
use fpp_core::reider::CurveFacts;
use fpp_core::replay::{
    export_json, export_text, list_results, render_collection, replay, verify, Report, ReplayError, ReplayOptions,
    VerifyError,
};

#[derive(Parser)]
#[command(name = "fpp", version, about = "Cohomology and derived-category replays on fake projective planes")]
struct Cli {
    /// Extra plane definitions (repeatable).
    #[arg(long, global = true)]
    config: Vec<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Replay a named result on a plane.
    Derive {
        result: String,
        #[arg(long)]
        plane: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Axiom overrides: `id = on|off|<fact> [; citation]` per line.
        #[arg(long)]
        axioms: Option<PathBuf>,
        /// `rank<k>` for the representative order-7 action, or `trivial`.
        #[arg(long)]
        action: Option<String>,
        /// Record wall time in the report (makes output non-reproducible).
        #[arg(long)]
        timing: bool,
    },
    /// Registered planes.
    Plane {
        #[command(subcommand)]
        cmd: PlaneCmd,
    },
    /// Exceptional collections.
    Collection {
        #[command(subcommand)]
        cmd: CollectionCmd,
    },
    /// Known cohomology of one class.
    Cohomology {
        #[arg(long)]
        plane: String,
        #[arg(long, allow_hyphen_values = true)]
        degree: i64,
        /// Comma-separated torsion coordinates; zero by default.
        #[arg(long)]
        torsion: Option<String>,
        #[arg(long)]
        axioms: Option<PathBuf>,
        /// Print the derivation as well.
        #[arg(long)]
        trace: bool,
    },
    /// List the replayable results.
    Results,
    /// Recheck a JSON report and re-execute it.
    Verify {
        report: PathBuf,
        #[arg(long)]
        axioms: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum PlaneCmd {
    List,
    Info { id: String },
}

#[derive(Subcommand)]
enum CollectionCmd {
    Search {
        #[arg(long)]
        plane: String,
        #[arg(long)]
        action: Option<String>,
        #[arg(long)]
        axioms: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

struct Env {
    registry: PlaneRegistry,
    curves: BTreeMap<String, BTreeMap<TorsionElement, CurveFacts>>,
}

impl Env {
    fn load(configs: &[PathBuf]) -> Result<Self> {
        let mut registry = PlaneRegistry::default();
        let mut curves = BTreeMap::new();
        for path in configs {
            let text = read(path)?;
            let cfg = parse_plane_config(&text).with_context(|| format!("in {}", path.display()))?;
            curves.insert(cfg.plane.id().to_string(), cfg.curves);
            registry.insert(cfg.plane);
        }
        Ok(Self { registry, curves })
    }

    fn plane(&self, id: &str) -> Result<&FakePlane, ReplayError> {
        Ok(self.registry.get(id)?)
    }

    fn axioms(&self, plane: &FakePlane, file: Option<&Path>) -> Result<AxiomSet> {
        let base = AxiomSet::new(standard_axioms(plane));
        match file {
            Some(p) => Ok(apply_axiom_file(plane, base, &read(p)?).with_context(|| format!("in {}", p.display()))?),
            None => Ok(base),
        }
    }

    fn options(&self, plane: &FakePlane, axioms: Option<&Path>, action: Option<&str>) -> Result<ReplayOptions> {
        Ok(ReplayOptions {
            axioms: Some(self.axioms(plane, axioms)?),
            curves: self.curves.get(plane.id()).cloned().unwrap_or_default(),
            action: action.map(|a| parse_action(plane, a)).transpose()?,
            timing: false,
        })
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn parse_action(plane: &FakePlane, spec: &str) -> Result<LinearAction> {
    if spec == "trivial" {
        return Ok(LinearAction::identity(plane.torsion_group().clone()));
    }
    let rank: usize = spec
        .strip_prefix("rank")
        .and_then(|r| r.parse().ok())
        .ok_or_else(|| anyhow!("action must be `rank<k>` or `trivial`, got `{spec}`"))?;
    let action = make_order7_action(rank)?;
    if action.group() != plane.torsion_group() {
        bail!("action on {} does not match H1 = {} of {}", action.group(), plane.torsion_group(), plane.id());
    }
    Ok(action)
}

fn exit_for(err: &anyhow::Error) -> u8 {
    if let Some(e) = err.downcast_ref::<ReplayError>() {
        return e.exit_code() as u8;
    }
    match err.downcast_ref::<VerifyError>() {
        Some(VerifyError::Replay(e)) => e.exit_code() as u8,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_for(&e))
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    let env = Env::load(&cli.config)?;
    match cli.cmd {
        Cmd::Derive { result, plane, format, axioms, action, timing } => {
            let plane = env.plane(&plane)?;
            let mut opts = env.options(plane, axioms.as_deref(), action.as_deref())?;
            opts.timing = timing;
            let report = replay(&result, plane, &opts)?;
            match format {
                Format::Text => print!("{}", export_text(&report)),
                Format::Json => print!("{}", export_json(&report)),
            }
            Ok(report.exit_code() as u8)
        }
        Cmd::Plane { cmd: PlaneCmd::List } => {
            for p in env.registry.planes() {
                println!("{:<10} H1 = {:<10} |Tor| = {:<4} Aut = {}", p.id(), p.torsion_group().to_string(), p.torsion_group().size(), p.aut());
            }
            Ok(0)
        }
        Cmd::Plane { cmd: PlaneCmd::Info { id } } => {
            let p = env.plane(&id)?;
            println!("id:     {}", p.id());
            println!("H1:     {}", p.torsion_group());
            println!("|Tor|:  {}", p.torsion_group().size());
            println!("Aut:    {}", p.aut());
            println!("K:      {}", p.canonical());
            println!("K^2 = {}, c2 = {}, p_g = {}, q = {}", FakePlane::K2, FakePlane::C2, FakePlane::PG, FakePlane::Q);
            println!("axioms:");
            for a in standard_axioms(p) {
                println!("  {:<11} {}", a.id, a.citation);
            }
            Ok(0)
        }
        Cmd::Collection { cmd: CollectionCmd::Search { plane, action, axioms, format } } => {
            let plane = env.plane(&plane)?;
            let action = match action {
                Some(a) => parse_action(plane, &a)?,
                None => make_order7_action(plane.torsion_group().rank())
                    .map_err(|_| ReplayError::Incompatible {
                        result: "collection search".into(),
                        plane: plane.id().into(),
                        reason: "no representative order-7 action".into(),
                    })?,
            };
            let set = env.axioms(plane, axioms.as_deref())?;
            let facts: Vec<_> = set.fact_axioms();
            let res = search_nonstandard(plane, &action, &facts).map_err(|e| match e {
                fpp_core::derived::DerivedError::NotKeum(p) => anyhow!(ReplayError::Incompatible {
                    result: "collection search".into(),
                    plane: p,
                    reason: "requires Aut = G21".into(),
                }),
                other => anyhow!(other),
            })?;
            match format {
                Format::Json => {
                    println!("{}", serde_json::to_string_pretty(&res)?);
                }
                Format::Text => {
                    println!("{} nontrivial T examined: {}", res.candidates, res.label);
                    for (i, r) in res.reports.iter().enumerate() {
                        println!("[{i}] {}", render_collection(r));
                    }
                }
            }
            Ok(0)
        }
        Cmd::Cohomology { plane, degree, torsion, axioms, trace } => {
            let plane = env.plane(&plane)?;
            let class = match torsion {
                Some(t) => {
                    let coords: Vec<i64> = t
                        .split(',')
                        .map(|c| c.trim().parse())
                        .collect::<Result<_, _>>()
                        .map_err(|_| anyhow!("torsion must be comma-separated integers"))?;
                    plane.class(degree, &coords)?
                }
                None => plane.untwisted(degree),
            };
            let set = env.axioms(plane, axioms.as_deref())?;
            let inf = infer(plane, &set.fact_axioms(), std::slice::from_ref(&class))
                .map_err(|e| anyhow!(ReplayError::from(e)))?;
            println!(
                "{class}: h0 = {}, h1 = {}, h2 = {}, chi = {}",
                inf.h(&class, 0),
                inf.h(&class, 1),
                inf.h(&class, 2),
                chi(&class)
            );
            if trace {
                print!("{}", inf.derivation.render_text());
            }
            Ok(0)
        }
        Cmd::Results => {
            for s in list_results() {
                let scope = if s.g21_only { "G21" } else { "any" };
                println!("{:<16} {:<4} {}", s.id, scope, s.statement);
            }
            Ok(0)
        }
        Cmd::Verify { report, axioms } => {
            let json = read(&report)?;
            let head: Report = serde_json::from_str(&json).map_err(VerifyError::from)?;
            let plane = env.plane(&head.plane)?;
            let opts = env.options(plane, axioms.as_deref(), None)?;
            let r = verify(&json, &env.registry, &opts)?;
            println!("{} on {}: {} ({} steps recheck)", r.result_id, r.plane, r.verdict, r.steps.len());
            Ok(0)
        }
    }
}
