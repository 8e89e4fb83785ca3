//! The `apartness` command line.
//!
//! Exit status: 0 when the states are equivalent (or a checked object is
//! valid), 1 when they are apart (or it is invalid), 2 on usage, input or
//! parse errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use apartness_core::apartness::Mutation;
use apartness_core::coalgebra::{generic_derivation, greatest_bisimulation, least_apartness_gen};
use apartness_core::{
    derive_with, greatest_bisimilarity, is_bisimulation, least_apartness, verify_detailed, BisimFlavor, Flavor, Lts,
    PairRelation, SearchLimits, StateId,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::aut::{parse_aut, ParseOptions};
use crate::json::{coalgebra_from_json, derivation_from_json, derivation_to_json, pairs_to_json, relation_from_json};
use crate::selftest::{self, SelftestConfig};

pub const EXIT_EQUIVALENT: i32 = 0;
pub const EXIT_APART: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum FlavorArg {
    Weak,
    Branching,
    SemiBranching,
    RootedBranching,
    BranchingAlt,
    BranchingCombined,
}

impl From<FlavorArg> for Flavor {
    fn from(f: FlavorArg) -> Flavor {
        match f {
            FlavorArg::Weak => Flavor::Weak,
            FlavorArg::Branching => Flavor::Branching,
            FlavorArg::SemiBranching => Flavor::SemiBranching,
            FlavorArg::RootedBranching => Flavor::RootedBranching,
            FlavorArg::BranchingAlt => Flavor::BranchingAltA,
            FlavorArg::BranchingCombined => Flavor::BranchingCombined,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum MutationArg {
    None,
    DropTauPremise,
    FirstCaseOnly,
}

#[derive(Parser, Debug)]
#[command(name = "apartness", version, about = "Decide weak and branching bisimilarity through apartness certificates")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Equivalence to decide.
    #[arg(long, global = true, value_enum, default_value = "branching")]
    flavor: FlavorArg,
    /// Label text of the silent step in `.aut` files.
    #[arg(long, global = true, default_value = "tau")]
    tau: String,
    /// Also read the label `i` as the silent step.
    #[arg(long, global = true)]
    accept_i: bool,
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Give up on certificates taller than this.
    #[arg(long, global = true)]
    max_depth: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compare two states of one file (`FILE Q P`) or the initial states of two files (`FILE1 FILE2`).
    Check {
        #[arg(num_args = 2..=3, required = true)]
        args: Vec<String>,
    },
    /// Print the whole apartness relation and its complement.
    Relation {
        file: PathBuf,
        /// Print 0/1 matrices instead of pair lists.
        #[arg(long)]
        matrix: bool,
    },
    /// Emit a certificate for `Q ⊥ P`, or check one with `--verify`.
    Certificate {
        file: PathBuf,
        #[arg(required_unless_present = "verify")]
        q: Option<String>,
        #[arg(required_unless_present = "verify")]
        p: Option<String>,
        /// Certificate JSON to check against FILE.
        #[arg(long, conflicts_with_all = ["q", "p"])]
        verify: Option<PathBuf>,
    },
    /// Greatest-fixpoint bisimilarity, or check a candidate relation given as JSON pairs.
    Oracle {
        file: PathBuf,
        #[arg(long)]
        relation: Option<PathBuf>,
    },
    /// Apartness for a coalgebra in JSON form; with X and Y, decide that pair.
    CoalgCheck { file: PathBuf, x: Option<usize>, y: Option<usize> },
    /// Run the invariant battery on seeded random systems and coalgebras.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        count: usize,
        /// Largest number of states of a generated system.
        #[arg(long, default_value_t = 8)]
        states: usize,
        /// Transition probability; cycles through 0.1, 0.25, 0.4 when absent.
        #[arg(long)]
        density: Option<f64>,
        #[arg(long, value_enum, default_value = "none", hide = true)]
        mutation: MutationArg,
    },
}

struct Failed(String);

impl<E: std::fmt::Display> From<E> for Failed {
    fn from(e: E) -> Self {
        Failed(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failed> {
    std::fs::read_to_string(path).map_err(|e| Failed(format!("{}: {e}", path.display())))
}

fn load(path: &Path, g: &Global) -> Result<Lts, Failed> {
    let opts = ParseOptions { tau_literal: g.tau.clone(), accept_i: g.accept_i };
    parse_aut(&read(path)?, &opts).map_err(|e| Failed(format!("{}: {e}", path.display())))
}

fn state(lts: &Lts, text: &str) -> Result<StateId, Failed> {
    lts.resolve_state(text).ok_or_else(|| Failed(format!("no state `{text}` in a system of {} states", lts.num_states())))
}

fn relation_text(r: &PairRelation, lts: &Lts, matrix: bool) -> String {
    if matrix {
        let n = r.size();
        (0..n)
            .map(|x| (0..n).map(|y| if r.contains(StateId(x), StateId(y)) { '1' } else { '0' }).collect::<String>() + "\n")
            .collect()
    } else {
        r.pairs().filter(|(x, y)| x != y).map(|(x, y)| format!("{} {}\n", lts.state_name(x), lts.state_name(y))).collect()
    }
}

/// Runs the command line; returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_EQUIVALENT };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(Failed(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32, Failed> {
    let g = &cli.global;
    let flavor = Flavor::from(g.flavor);
    let limits = SearchLimits { max_depth: g.max_depth };
    match &cli.command {
        Command::Check { args } => {
            let (lts, q, p) = if args.len() == 3 {
                let lts = load(Path::new(&args[0]), g)?;
                let (q, p) = (state(&lts, &args[1])?, state(&lts, &args[2])?);
                (lts, q, p)
            } else {
                let a = load(Path::new(&args[0]), g)?;
                let b = load(Path::new(&args[1]), g)?;
                let (Some(qa), Some(pb)) = (a.initial(), b.initial()) else {
                    return Err(Failed("both systems need an initial state".into()));
                };
                let (u, off) = a.disjoint_union(&b);
                (u, qa, StateId(pb.0 + off))
            };
            let apart = least_apartness(&lts, flavor);
            if apart.contains(q, p) {
                let cert = derive_with(&lts, flavor, q, p, limits);
                match g.format {
                    Format::Json => {
                        let c = cert.as_ref().map(|d| derivation_to_json(d, &g.tau));
                        writeln!(out, "{}", json!({ "verdict": "apart", "flavor": flavor.name(), "certificate": c }))?;
                    }
                    Format::Text => {
                        writeln!(out, "APART ({} {} {})", lts.state_name(q), flavor.symbol(), lts.state_name(p))?;
                        match cert {
                            Some(d) => write!(out, "{}", d.render(&lts))?,
                            None => writeln!(out, "no certificate within depth {}", g.max_depth.unwrap_or(0))?,
                        }
                    }
                }
                Ok(EXIT_APART)
            } else {
                let witness = apart.complement();
                match g.format {
                    Format::Json => writeln!(
                        out,
                        "{}",
                        json!({ "verdict": "equivalent", "flavor": flavor.name(), "witness": pairs_to_json(&witness) })
                    )?,
                    Format::Text => {
                        writeln!(out, "EQUIVALENT ({} ~ {})", lts.state_name(q), lts.state_name(p))?;
                        let related = witness.pairs().filter(|(x, y)| x != y).count();
                        writeln!(out, "witness relation: {related} pairs of distinct states")?;
                    }
                }
                Ok(EXIT_EQUIVALENT)
            }
        }
        Command::Relation { file, matrix } => {
            let lts = load(file, g)?;
            let apart = least_apartness(&lts, flavor);
            let equiv = apart.complement();
            match g.format {
                Format::Json => writeln!(
                    out,
                    "{}",
                    json!({ "flavor": flavor.name(), "states": lts.num_states(),
                            "apart": pairs_to_json(&apart), "equivalent": pairs_to_json(&equiv) })
                )?,
                Format::Text => {
                    writeln!(out, "apart ({}):", flavor.symbol())?;
                    write!(out, "{}", relation_text(&apart, &lts, *matrix))?;
                    writeln!(out, "equivalent:")?;
                    write!(out, "{}", relation_text(&equiv, &lts, *matrix))?;
                }
            }
            Ok(EXIT_EQUIVALENT)
        }
        Command::Certificate { file, q, p, verify } => {
            let lts = load(file, g)?;
            if let Some(cert) = verify {
                let value: serde_json::Value = serde_json::from_str(&read(cert)?)?;
                let d = derivation_from_json(&value, &g.tau)?;
                let errors = verify_detailed(&lts, flavor, &d);
                if errors.is_empty() {
                    writeln!(out, "VALID")?;
                    return Ok(EXIT_EQUIVALENT);
                }
                writeln!(out, "INVALID")?;
                for e in errors {
                    writeln!(out, "  {e}")?;
                }
                return Ok(EXIT_APART);
            }
            let (q, p) = (state(&lts, q.as_deref().unwrap_or_default())?, state(&lts, p.as_deref().unwrap_or_default())?);
            match derive_with(&lts, flavor, q, p, limits) {
                Some(d) => {
                    match g.format {
                        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&derivation_to_json(&d, &g.tau))?)?,
                        Format::Text => write!(out, "{}", d.render(&lts))?,
                    }
                    Ok(EXIT_EQUIVALENT)
                }
                None => {
                    writeln!(out, "no certificate: states are not apart or need a taller derivation")?;
                    Ok(EXIT_APART)
                }
            }
        }
        Command::Oracle { file, relation } => {
            let lts = load(file, g)?;
            let bf = BisimFlavor::of(flavor);
            if let Some(rel) = relation {
                let r = relation_from_json(&read(rel)?, lts.num_states())?;
                let ok = is_bisimulation(&lts, bf, &r);
                writeln!(out, "{}", if ok { "BISIMULATION" } else { "NOT A BISIMULATION" })?;
                return Ok(if ok { EXIT_EQUIVALENT } else { EXIT_APART });
            }
            let bisim = greatest_bisimilarity(&lts, bf);
            let agrees = bisim == least_apartness(&lts, flavor).complement();
            match g.format {
                Format::Json => {
                    writeln!(out, "{}", json!({ "flavor": flavor.name(), "bisimilar": pairs_to_json(&bisim), "agrees_with_apartness": agrees }))?
                }
                Format::Text => {
                    writeln!(out, "bisimilar pairs:")?;
                    write!(out, "{}", relation_text(&bisim, &lts, false))?;
                    writeln!(out, "complement of apartness: {}", if agrees { "agrees" } else { "DIFFERS" })?;
                }
            }
            Ok(if agrees { EXIT_EQUIVALENT } else { EXIT_APART })
        }
        Command::CoalgCheck { file, x, y } => {
            let c = coalgebra_from_json(&read(file)?)?;
            let apart = least_apartness_gen(&c);
            match (x, y) {
                (Some(x), Some(y)) => {
                    let (x, y) = (StateId(*x), StateId(*y));
                    if x.0 >= c.carrier_size || y.0 >= c.carrier_size {
                        return Err(Failed(format!("carrier has {} elements", c.carrier_size)));
                    }
                    match generic_derivation(&c, x, y) {
                        Some(d) => {
                            match g.format {
                                Format::Json => writeln!(out, "{}", json!({ "verdict": "apart", "certificate": serde_json::to_value(&d)? }))?,
                                Format::Text => writeln!(out, "APART ({x} ⊥ {y}), certificate depth {}", d.depth())?,
                            }
                            Ok(EXIT_APART)
                        }
                        None => {
                            writeln!(out, "EQUIVALENT ({x} ~ {y})")?;
                            Ok(EXIT_EQUIVALENT)
                        }
                    }
                }
                (None, None) => {
                    let agrees = greatest_bisimulation(&c) == apart.complement();
                    match g.format {
                        Format::Json => writeln!(out, "{}", json!({ "apart": pairs_to_json(&apart), "agrees_with_bisimulation": agrees }))?,
                        Format::Text => {
                            for (a, b) in apart.pairs() {
                                writeln!(out, "{a} {b}")?;
                            }
                            writeln!(out, "complement of greatest bisimulation: {}", if agrees { "agrees" } else { "DIFFERS" })?;
                        }
                    }
                    Ok(EXIT_EQUIVALENT)
                }
                _ => Err(Failed("give both X and Y or neither".into())),
            }
        }
        Command::Selftest { seed, count, states, density, mutation } => {
            if let Some(d) = density {
                if !(0.0..=1.0).contains(d) {
                    return Err(Failed("density must lie in [0, 1]".into()));
                }
            }
            if *states == 0 {
                return Err(Failed("--states must be at least 1".into()));
            }
            let cfg = SelftestConfig {
                seed: *seed,
                count: *count,
                max_states: *states,
                density: *density,
                mutation: match mutation {
                    MutationArg::None => Mutation::None,
                    MutationArg::DropTauPremise => Mutation::DropTauPremise,
                    MutationArg::FirstCaseOnly => Mutation::FirstCaseOnly,
                },
                ..Default::default()
            };
            let report = selftest::run(&cfg);
            write!(out, "{}", report.render())?;
            Ok(if report.passed() { EXIT_EQUIVALENT } else { EXIT_APART })
        }
    }
}
