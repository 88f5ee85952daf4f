//! `mermin`: decide, realize, certify and play Mermin-style arrangements.
//!
//! Exit codes: 0 on success, 1 for invalid input, 2 when a produced or
//! supplied certificate fails its checker.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mermin::arrangement::{parse_arrangement, Arrangement, ArrangementFile, Signing};
use mermin::certificate::{check_against, ContractionTrace};
use mermin::corpus::random_arrangement;
use mermin::game::{exact_win_probability, monte_carlo, optimal_classical_strategy, ClassicalStrategy, GameReport, Strategy};
use mermin::graph::IntersectionGraph;
use mermin::planarity::{verify_embedding, verify_witness, WitnessJson};
use mermin::realization::{check_realization, realize, synthesize, MagicVerdict, RealizationFile};
use mermin::sign::Sign;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Seed used by `simulate` and `gen` when `--seed` is not given.
const DEFAULT_SEED: u64 = 1729;

#[derive(Parser)]
#[command(name = "mermin", version, about = "Magic arrangements, their realizations and certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that an arrangement file is well formed.
    Validate {
        #[arg(long)]
        arrangement: PathBuf,
    },
    /// Print `magic` or `not magic`.
    Decide {
        #[arg(long)]
        arrangement: PathBuf,
        /// Write the checked evidence for the verdict here.
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Print the evidence for the verdict: a realization of an odd signing,
    /// or a contraction certificate.
    Synthesize {
        #[arg(long)]
        arrangement: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check a contraction trace or a realization against an arrangement.
    Certify {
        #[arg(long)]
        arrangement: PathBuf,
        /// Contraction trace, bare or inside a `decide --certificate` file.
        #[arg(long, conflicts_with = "realization", required_unless_present = "realization")]
        trace: Option<PathBuf>,
        /// Realization file with operators and signs.
        #[arg(long)]
        realization: Option<PathBuf>,
    },
    /// Play the parity telepathy game.
    Simulate {
        #[arg(long)]
        arrangement: PathBuf,
        /// `quantum`, `classical`, or a path to a strategy file.
        #[arg(long, default_value = "quantum")]
        strategy: String,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Enumerate every query and measurement branch instead of sampling.
        #[arg(long)]
        exact: bool,
        /// Bob measures the assigned operators rather than their transposes.
        #[arg(long)]
        literal_measurements: bool,
    },
    /// Write the intersection graph in Graphviz format.
    ExportDot {
        #[arg(long)]
        arrangement: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Generate a random valid arrangement.
    Gen {
        #[arg(long)]
        hyperedges: usize,
        /// Vertex count; random when omitted.
        #[arg(long)]
        vertices: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Attach a random sign to every hyperedge.
        #[arg(long)]
        signed: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum CliError {
    Input(String),
    Check(String),
}

impl CliError {
    fn input<E: Debug + std::fmt::Display>(context: &str, e: E) -> Self {
        CliError::Input(format!("{context}: [{}] {e}", variant_name(&e)))
    }
}

/// `DegreeError { .. }` → `DegreeError`.
fn variant_name<E: Debug>(e: &E) -> String {
    let debug = format!("{e:?}");
    debug.split(|c: char| !c.is_alphanumeric() && c != '_').next().unwrap_or_default().to_string()
}

type CliResult = Result<String, CliError>;

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn write_or_return(output: Option<&Path>, text: String) -> CliResult {
    match output {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn load(path: &Path) -> Result<(Arrangement, Option<Signing>), CliError> {
    let text = read(path)?;
    let loaded = parse_arrangement(&text).map_err(|e| CliError::input(&path.display().to_string(), e))?;
    for h in loaded.0.singleton_hyperedges() {
        eprintln!("warning: hyperedge `{}` has a single member", loaded.0.hyperedge(h).id());
    }
    Ok(loaded)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Evidence for a verdict, as written by `decide --certificate` and
/// `synthesize`.
#[derive(Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
enum Envelope {
    Magic { witness: WitnessJson, realization: RealizationFile },
    NotMagic { embedding: BTreeMap<String, Vec<String>>, trace: ContractionTrace, classical: BTreeMap<String, Sign> },
}

/// Synthesizes and re-checks the evidence with the independent checkers.
fn checked_envelope(a: &Arrangement) -> Result<(bool, Envelope), CliError> {
    let verdict = synthesize(a).map_err(|e| CliError::Check(e.to_string()))?;
    let g = IntersectionGraph::build(a);
    match verdict {
        MagicVerdict::Magic { signing, realization, witness, .. } => {
            if !verify_witness(&g, &witness) {
                return Err(CliError::Check("Kuratowski witness fails verification".into()));
            }
            if signing.parity() != Sign::Minus || !matches!(check_realization(a, &signing, &realization), Ok(Ok(()))) {
                return Err(CliError::Check("realization fails verification".into()));
            }
            Ok((
                true,
                Envelope::Magic {
                    witness: WitnessJson::from_witness(&g, &witness),
                    realization: RealizationFile::from_realization(a, &signing, &realization),
                },
            ))
        }
        MagicVerdict::NotMagic { rotation, certificate, classical } => {
            if verify_embedding(&g, &rotation) != Ok(true) {
                return Err(CliError::Check("embedding fails Euler's formula".into()));
            }
            let plus = vec![Sign::Plus; g.node_count()];
            if check_against(&g, &rotation, &plus, &certificate) != Ok(Sign::Plus) {
                return Err(CliError::Check("contraction trace fails replay".into()));
            }
            if !classical.satisfies(a, &Signing::all_plus(a)) {
                return Err(CliError::Check("classical realization fails".into()));
            }
            Ok((
                false,
                Envelope::NotMagic { embedding: rotation.to_words(&g), trace: certificate, classical: classical.to_map(a) },
            ))
        }
    }
}

fn validate(path: &Path) -> CliResult {
    let (a, s) = load(path)?;
    let mut out = format!("valid: {} vertices, {} hyperedges", a.vertex_count(), a.hyperedge_count());
    if let Some(s) = s {
        out += &format!(", signing parity {}", s.parity());
    }
    Ok(out + "\n")
}

fn decide(path: &Path, certificate: Option<&Path>) -> CliResult {
    let (a, _) = load(path)?;
    let (magic, envelope) = checked_envelope(&a)?;
    if let Some(out) = certificate {
        write_or_return(Some(out), to_json(&envelope))?;
    }
    Ok(if magic { "magic\n" } else { "not magic\n" }.to_string())
}

fn synthesize_cmd(path: &Path, output: Option<&Path>) -> CliResult {
    let (a, _) = load(path)?;
    let (_, envelope) = checked_envelope(&a)?;
    write_or_return(output, to_json(&envelope))
}

fn certify(path: &Path, trace: Option<&Path>, realization: Option<&Path>) -> CliResult {
    let (a, _) = load(path)?;
    if let Some(rpath) = realization {
        let file = RealizationFile::from_json(&read(rpath)?).map_err(|e| CliError::input(&rpath.display().to_string(), e))?;
        let (s, r) = file.resolve(&a).map_err(|e| CliError::input(&rpath.display().to_string(), e))?;
        return match check_realization(&a, &s, &r) {
            Ok(Ok(())) => Ok(format!("verified: parity {}\n", s.parity())),
            Ok(Err(v)) => Err(CliError::Check(format!("realization rejected: {v:?}"))),
            Err(e) => Err(CliError::input(&rpath.display().to_string(), e)),
        };
    }
    let tpath = trace.expect("clap requires a trace or a realization");
    let value: serde_json::Value =
        serde_json::from_str(&read(tpath)?).map_err(|e| CliError::input(&tpath.display().to_string(), e))?;
    let inner = value.get("trace").cloned().unwrap_or(value);
    let t: ContractionTrace =
        serde_json::from_value(inner).map_err(|e| CliError::input(&tpath.display().to_string(), e))?;
    let g = IntersectionGraph::build(&a);
    match mermin::certificate::check(&g, &t) {
        Ok(sign) => Ok(format!("{sign}\n")),
        Err(e) => Err(CliError::Check(format!("[{}] {e}", variant_name(&e)))),
    }
}

/// Classical strategy file: a color per vertex for Alice and, per hyperedge,
/// a color per member for Bob.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassicalFile {
    alice: BTreeMap<String, Sign>,
    bob: BTreeMap<String, BTreeMap<String, Sign>>,
}

impl ClassicalFile {
    fn resolve(&self, a: &Arrangement) -> Result<ClassicalStrategy, String> {
        let alice = a
            .vertex_ids()
            .iter()
            .map(|v| self.alice.get(v).copied().ok_or(format!("no Alice color for `{v}`")))
            .collect::<Result<_, _>>()?;
        let bob = a
            .hyperedges()
            .iter()
            .map(|h| {
                let colors = self.bob.get(h.id()).ok_or(format!("no Bob coloring for `{}`", h.id()))?;
                h.members()
                    .iter()
                    .map(|&v| colors.get(a.vertex_id(v)).copied().ok_or(format!("no color for `{}` in `{}`", a.vertex_id(v), h.id())))
                    .collect()
            })
            .collect::<Result<_, _>>()?;
        Ok(ClassicalStrategy { alice, bob })
    }
}

/// Signing to play: the file's, else the synthesized odd signing for magic
/// arrangements, else all `+1`.
fn game_signing(a: &Arrangement, from_file: Option<Signing>) -> Result<Signing, CliError> {
    if let Some(s) = from_file {
        return Ok(s);
    }
    match synthesize(a).map_err(|e| CliError::Check(e.to_string()))? {
        MagicVerdict::Magic { signing, .. } => Ok(signing),
        MagicVerdict::NotMagic { .. } => Ok(Signing::all_plus(a)),
    }
}

fn simulate(
    path: &Path,
    strategy: &str,
    trials: u64,
    seed: u64,
    exact: bool,
    literal: bool,
) -> CliResult {
    let (a, file_signing) = load(path)?;
    let (signing, strategy) = match strategy {
        "quantum" => {
            let s = game_signing(&a, file_signing)?;
            let r = realize(&a, &s)
                .map_err(|e| CliError::Check(e.to_string()))?
                .ok_or_else(|| CliError::Input("odd signing of a non-magic arrangement has no quantum realization".into()))?;
            (s, Strategy::Quantum { realization: r, literal })
        }
        "classical" => {
            let s = game_signing(&a, file_signing)?;
            let (_, c) = optimal_classical_strategy(&a, &s).map_err(|e| CliError::input("classical strategy", e))?;
            (s, Strategy::Classical(c))
        }
        file => {
            let text = read(Path::new(file))?;
            if let Ok(rf) = RealizationFile::from_json(&text) {
                let (s, r) = rf.resolve(&a).map_err(|e| CliError::input(file, e))?;
                if !matches!(check_realization(&a, &s, &r), Ok(Ok(()))) {
                    eprintln!("warning: realization in {file} does not verify");
                }
                (s, Strategy::Quantum { realization: r, literal })
            } else {
                let cf: ClassicalFile = serde_json::from_str(&text).map_err(|e| CliError::input(file, e))?;
                let c = cf.resolve(&a).map_err(CliError::Input)?;
                (game_signing(&a, file_signing)?, Strategy::Classical(c))
            }
        }
    };
    if trials == 0 && !exact {
        return Err(CliError::Input("--trials must be at least 1".into()));
    }
    let report: GameReport = if exact {
        exact_win_probability(&a, &signing, &strategy)
    } else {
        monte_carlo(&a, &signing, &strategy, trials, seed)
    }
    .map_err(|e| CliError::input("simulation", e))?;
    Ok(to_json(&report))
}

fn export_dot(path: &Path, output: Option<&Path>) -> CliResult {
    let (a, _) = load(path)?;
    write_or_return(output, IntersectionGraph::build(&a).to_dot())
}

fn gen(hyperedges: usize, vertices: Option<usize>, seed: u64, signed: bool, output: Option<&Path>) -> CliResult {
    if hyperedges < 2 {
        return Err(CliError::Input("--hyperedges must be at least 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = match vertices {
        Some(v) if v + 1 < hyperedges => {
            return Err(CliError::Input(format!("{hyperedges} hyperedges need at least {} vertices", hyperedges - 1)));
        }
        Some(v) => v,
        None => rng.gen_range(hyperedges - 1..=3 * hyperedges),
    };
    let a = random_arrangement(&mut rng, hyperedges, v);
    let signing = signed.then(|| {
        let signs = (0..a.hyperedge_count()).map(|_| Sign::from_bool_negative(rng.gen())).collect();
        Signing::from_signs(&a, signs).expect("one sign per hyperedge")
    });
    let mut text = ArrangementFile::from_arrangement(&a, signing.as_ref()).to_json_pretty();
    text.push('\n');
    write_or_return(output, text)
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Validate { arrangement } => validate(&arrangement),
        Command::Decide { arrangement, certificate } => decide(&arrangement, certificate.as_deref()),
        Command::Synthesize { arrangement, output } => synthesize_cmd(&arrangement, output.as_deref()),
        Command::Certify { arrangement, trace, realization } => {
            certify(&arrangement, trace.as_deref(), realization.as_deref())
        }
        Command::Simulate { arrangement, strategy, trials, seed, exact, literal_measurements } => {
            simulate(&arrangement, &strategy, trials, seed, exact, literal_measurements)
        }
        Command::ExportDot { arrangement, output } => export_dot(&arrangement, output.as_deref()),
        Command::Gen { hyperedges, vertices, seed, signed, output } => {
            gen(hyperedges, vertices, seed, signed, output.as_deref())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(2)
        }
    }
}
