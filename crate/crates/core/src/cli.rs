//! Command-line front end. Exit codes: 0 success or gap pass, 1 gap fail,
//! 2 usage, parse or validation error. Errors go to stderr prefixed `error:`.

use std::ffi::OsString;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::cnf::{ClauseSet, CnfFormula};
use crate::envelope::{parse_merlin_mode, Document, ReducedInstance};
use crate::ff::{Fe, Polynomial};
use crate::oracle::{solve, verify_gap, SolveOptions};
use crate::pcp::{MerlinMode, PcpParams};
use crate::pipeline::{build_pcp_document, reduce, ReduceOptions, Target};
use crate::protocol::{communication_cost, exact_accept_probability, merlin_message, run_protocol, MerlinMessage, ProtocolParams};
use crate::rng;

#[derive(Debug, Parser)]
#[command(name = "pcpvec", version, about = "PCP-Vectors instance compiler, gadget reductions and brute-force gap checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a seeded random k-CNF formula in DIMACS format.
    GenFormula {
        #[arg(short = 'n', long)]
        vars: usize,
        #[arg(short = 'm', long)]
        clauses: usize,
        #[arg(short = 'k', long)]
        width: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Compile a DIMACS formula into a PCP-Vectors instance.
    BuildPcp {
        #[arg(short = 'f', long)]
        formula: PathBuf,
        #[arg(short = 'T', long = "columns", default_value_t = 2)]
        columns: usize,
        #[arg(short = 'R', long = "rounds", default_value_t = 1)]
        rounds: usize,
        #[arg(long)]
        modulus: Option<u64>,
        /// `pairwise-honest` or `bounded-enumeration:<max nonzero coefficients>`.
        #[arg(long, default_value = "pairwise-honest")]
        merlin_mode: String,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Reduce a PCP-Vectors instance to one target problem.
    Reduce {
        #[arg(short = 'i', long)]
        input: PathBuf,
        #[arg(long)]
        target: Target,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
        /// LCS block field size (prime); smallest admissible when omitted.
        #[arg(long)]
        block_field: Option<u64>,
        /// LCS polynomial degree bound.
        #[arg(long, default_value_t = 1)]
        degree: usize,
        /// Collapse the regular-expression alphabet to bits.
        #[arg(long)]
        binary: bool,
        #[arg(long, default_value_t = 0.2)]
        delta: f64,
        #[arg(long, default_value_t = 128)]
        d_code: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Simulate the Set-Disjointness protocol on two subsets of [n].
    RunProtocol {
        #[arg(short = 'n', long)]
        universe: usize,
        #[arg(short = 'T', long = "columns", default_value_t = 2)]
        columns: usize,
        #[arg(short = 'R', long = "rounds", default_value_t = 1)]
        rounds: usize,
        #[arg(long)]
        modulus: Option<u64>,
        /// Comma-separated 0-based elements of Alice's set.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        set_a: Vec<usize>,
        /// Comma-separated 0-based elements of Bob's set.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        set_b: Vec<usize>,
        /// Merlin's polynomial, comma-separated coefficients low degree first; honest when omitted.
        #[arg(long, value_delimiter = ',')]
        merlin: Option<Vec<u64>>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also enumerate every random string and print the exact acceptance probability.
        #[arg(long)]
        exact: bool,
    },
    /// Brute-force optimum of an instance file.
    Solve {
        #[arg(short = 'i', long)]
        input: PathBuf,
        /// Route Max-IP instances through bucketed exact indexes with ceil(N^(1-x)) buckets.
        #[arg(long)]
        bucket_exponent: Option<f64>,
    },
    /// Check an instance lands on the promised side of its gap.
    VerifyGap {
        #[arg(short = 'i', long)]
        input: PathBuf,
        #[arg(short = 'f', long)]
        formula: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Print the protocol's communication cost in bits.
    ReportCost {
        #[arg(short = 'n', long)]
        universe: usize,
        #[arg(short = 'T', long = "columns", default_value_t = 2)]
        columns: usize,
        #[arg(short = 'R', long = "rounds", default_value_t = 1)]
        rounds: usize,
        #[arg(long)]
        modulus: Option<u64>,
    },
}

/// Error carrying the process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

fn fail<E: std::fmt::Display>(e: E) -> CliError {
    CliError { code: 2, message: e.to_string() }
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| fail(format!("{}: {e}", path.display())))
}

fn read_formula(path: &Path) -> Result<CnfFormula, CliError> {
    CnfFormula::parse_dimacs(&read(path)?).map_err(|e| fail(format!("{}: {e}", path.display())))
}

fn read_document(path: &Path) -> Result<(Document, ReducedInstance), CliError> {
    Document::from_json(&read(path)?).map_err(|e| fail(format!("{}: {e}", path.display())))
}

/// Writes through a temporary file in the target directory, then renames it into place.
fn write_output(path: Option<&Path>, contents: &str) -> Result<(), CliError> {
    match path {
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(contents.as_bytes()).map_err(fail)
        }
        Some(p) if p == Path::new("-") => write_output(None, contents),
        Some(p) => {
            let dir = match p.parent() {
                Some(d) if !d.as_os_str().is_empty() => d,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| fail(format!("{}: {e}", dir.display())))?;
            tmp.write_all(contents.as_bytes()).map_err(fail)?;
            #[cfg(unix)]
            {
                use std::os::unix::fs::PermissionsExt;
                std::fs::set_permissions(tmp.path(), std::fs::Permissions::from_mode(0o644)).map_err(fail)?;
            }
            tmp.persist(p).map_err(|e| fail(format!("{}: {}", p.display(), e.error)))?;
            Ok(())
        }
    }
}

fn protocol_params(n: usize, columns: usize, rounds: usize, modulus: Option<u64>) -> Result<ProtocolParams, CliError> {
    match modulus {
        Some(q) => ProtocolParams::with_modulus(n, columns, rounds, q),
        None => ProtocolParams::new(n, columns, rounds),
    }
    .map_err(fail)
}

fn clause_set(n: usize, elems: &[usize], name: &str) -> Result<ClauseSet, CliError> {
    if let Some(&e) = elems.iter().find(|&&e| e >= n) {
        return Err(fail(format!("{name} element {e} outside [0, {n})")));
    }
    Ok(ClauseSet::from_indices(n, elems.iter().copied()))
}

fn execute(cmd: Command) -> Result<i32, CliError> {
    match cmd {
        Command::GenFormula { vars, clauses, width, seed, output } => {
            let f = CnfFormula::random_ksat(vars, clauses, width, seed).map_err(fail)?;
            write_output(output.as_deref(), &f.to_dimacs())?;
        }
        Command::BuildPcp { formula, columns, rounds, modulus, merlin_mode, output } => {
            let f = read_formula(&formula)?;
            let mode: MerlinMode = parse_merlin_mode(&merlin_mode).ok_or_else(|| fail(format!("unknown merlin mode \"{merlin_mode}\"")))?;
            let params = PcpParams::for_formula(&f, columns, rounds, modulus, mode).map_err(fail)?;
            let (doc, _) = build_pcp_document(&f, &params).map_err(fail)?;
            write_output(output.as_deref(), &doc.to_json())?;
        }
        Command::Reduce { input, target, output, block_field, degree, binary, delta, d_code, seed } => {
            let (doc, inst) = read_document(&input)?;
            let ReducedInstance::PcpVectors(pv) = inst else {
                return Err(fail(format!("reduce expects a pcp-vectors document, got {}", doc.kind())));
            };
            let opts = ReduceOptions { block_field, degree, seed, binary, delta, d_code };
            let out = reduce(&pv, doc.expected_gap(), doc.provenance(), target, &opts).map_err(fail)?;
            write_output(output.as_deref(), &out.to_json())?;
        }
        Command::RunProtocol { universe, columns, rounds, modulus, set_a, set_b, merlin, seed, exact } => {
            let params = protocol_params(universe, columns, rounds, modulus)?;
            let a = clause_set(universe, &set_a, "set-a")?;
            let b = clause_set(universe, &set_b, "set-b")?;
            let msg = match merlin {
                Some(c) => MerlinMessage { phi: Polynomial::from_u64s(params.field(), &c) },
                None => merlin_message(&a, &b, &params).map_err(fail)?,
            };
            let mut r = rng::stream(seed, 0x9e7);
            let q = params.modulus();
            let coins: Vec<Fe> = (0..rounds).map(|_| Fe(rand::Rng::gen_range(&mut r, 0..q))).collect();
            let t = run_protocol(&a, &b, &msg, &coins, &params).map_err(fail)?;
            let mut out = t.to_log();
            if exact {
                let p = exact_accept_probability(&a, &b, &msg, &params).map_err(fail)?;
                out.push_str(&format!("exact accept probability {p} = {}\n", p.as_f64()));
            }
            write_output(None, &out)?;
        }
        Command::Solve { input, bucket_exponent } => {
            let (doc, inst) = read_document(&input)?;
            let sol = solve(&inst, SolveOptions { bucket_exponent }).map_err(fail)?;
            let line = serde_json::json!({
                "kind": doc.kind(),
                "measure": doc.expected_gap().measure,
                "objective": doc.expected_gap().objective,
                "value": sol.value,
                "witness": [sol.witness.0, sol.witness.1],
            });
            write_output(None, &format!("{line}\n"))?;
        }
        Command::VerifyGap { input, formula, json } => {
            let (doc, inst) = read_document(&input)?;
            let f = read_formula(&formula)?;
            let report = verify_gap(&doc, &inst, &f).map_err(fail)?;
            let text = if json { format!("{}\n", report.to_json()) } else { report.to_table() };
            write_output(None, &text)?;
            return Ok(if report.passed() { 0 } else { 1 });
        }
        Command::ReportCost { universe, columns, rounds, modulus } => {
            let params = protocol_params(universe, columns, rounds, modulus)?;
            let c = communication_cost(&params);
            let out = format!(
                "protocol n={universe} T={columns} q={} R={rounds}\nmerlin_bits {}\ncoin_bits {}\nbob_bits {}\n",
                params.modulus(),
                c.merlin_bits,
                c.coin_bits,
                c.bob_bits
            );
            write_output(None, &out)?;
        }
    }
    Ok(0)
}
