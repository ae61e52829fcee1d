//! The `iecount` command line.

use std::ffi::OsString;
use std::fmt::Display;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_bigint::BigUint;

use crate::comp::{comp_generators, count_bounded_compositions, CompSpec};
use crate::dnf::{bench_dnf, term_complex, term_from_literals, DnfSpec, Formula, NormalForm};
use crate::engine::ScanOptions;
use crate::error::Error;
use crate::exclusion::{ab_algorithm, n_algorithm, GeneratorSet};
use crate::facecount::{union_face_numbers, union_parity_weight, WeightVector};
use crate::oracles::{self, OracleBudget};
use crate::perm::{block_sf_generators, PermProblem};

#[derive(Debug, Parser)]
#[command(
    name = "iecount",
    version,
    about = "Exact counting by inclusion-exclusion over relevant faces"
)]
pub struct Cli {
    /// Worker threads for face scans.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, clap::Args)]
pub struct Common {
    /// Also run the brute-force oracle and fail on disagreement.
    #[arg(long)]
    pub oracle: bool,

    /// Write the relevant face rows to this file.
    #[arg(long, value_name = "PATH")]
    pub rows_out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Face numbers of the complex cut out by a generator file.
    Faces {
        path: PathBuf,
        /// Comma-separated element weights; prints the even/odd weight table.
        #[arg(long)]
        weights: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Permutations avoiding blocks, or maps satisfying disjunctions.
    CountPerm {
        path: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Solutions of u_1 + .. + u_h = t with u_i < a_i.
    CountComp {
        /// Comma-separated strict upper bounds a_i.
        #[arg(long)]
        bounds: String,
        #[arg(long)]
        target: String,
        #[command(flatten)]
        common: Common,
    },
    /// Models of a DNF file.
    CountDnf {
        path: PathBuf,
        /// Count only models with exactly k true variables.
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Models of a CNF file.
    CountCnf {
        path: PathBuf,
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Times model counts of random DNFs and writes CSV.
    BenchDnf {
        #[arg(long, default_value_t = 50)]
        h: usize,
        #[arg(long, default_value_t = 50)]
        n: usize,
        #[arg(long, default_value_t = 5)]
        n1: usize,
        #[arg(long, default_value_t = 4)]
        n0: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Instances, seeded `seed`, `seed + 1`, ...
        #[arg(long, default_value_t = 1)]
        runs: u64,
        /// CSV destination; standard output if absent.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Input { path: String, source: Error },
    #[error(transparent)]
    Core(#[from] Error),
    #[error("oracle disagrees: computed {computed}, oracle {oracle}")]
    OracleMismatch { computed: String, oracle: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        let core = match self {
            CliError::Input { source, .. } => source,
            CliError::Core(e) => e,
            CliError::OracleMismatch { .. } => return 4,
            CliError::Csv(_) => return 1,
        };
        match core {
            Error::Parse { .. } => 2,
            Error::BudgetExceeded(_) => 3,
            _ => 1,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Core(Error::Io(e))
    }
}

type CliResult<T = ()> = Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Input {
        path: path.display().to_string(),
        source: Error::Io(e),
    })
}

fn parsed<T>(path: &Path, r: crate::Result<T>) -> CliResult<T> {
    r.map_err(|source| CliError::Input {
        path: path.display().to_string(),
        source,
    })
}

fn dump(target: &Option<PathBuf>, rows: impl Display) -> CliResult {
    if let Some(p) = target {
        fs::write(p, rows.to_string())?;
    }
    Ok(())
}

fn agree(computed: &BigUint, oracle: crate::Result<BigUint>) -> CliResult {
    let oracle = oracle?;
    if &oracle != computed {
        return Err(CliError::OracleMismatch {
            computed: computed.to_string(),
            oracle: oracle.to_string(),
        });
    }
    Ok(())
}

fn joined<T: Display>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// Executes one parsed invocation, writing results to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> CliResult {
    let opts = ScanOptions {
        threads: cli.threads.max(1),
    };
    let budget = OracleBudget::default();
    match cli.command {
        Command::Faces { path, weights, common } => {
            let g = parsed(&path, GeneratorSet::parse(&read(&path)?))?;
            let complex = n_algorithm(&g);
            dump(&common.rows_out, &complex)?;
            let f = union_face_numbers(&complex);
            writeln!(out, "f {}", joined(f.as_slice()))?;
            writeln!(out, "total {}", f.total())?;
            if let Some(w) = weights {
                let w = w
                    .split(',')
                    .map(|x| {
                        x.trim()
                            .parse::<BigUint>()
                            .map_err(|_| Error::Invalid(format!("bad weight `{x}`")))
                    })
                    .collect::<crate::Result<Vec<_>>>()?;
                let t = union_parity_weight(&complex, &WeightVector::new(w))?;
                let side = |m: &std::collections::BTreeMap<BigUint, BigUint>| {
                    joined(m.iter().map(|(v, c)| format!("{v}:{c}")))
                };
                writeln!(out, "even {}", side(t.even()))?;
                writeln!(out, "odd {}", side(t.odd()))?;
            }
            if common.oracle {
                let faces = oracles::brute_set_ideal(&g, &budget)?;
                agree(&f.total(), Ok(BigUint::from(faces.len())))?;
                let mut hist = vec![0u64; g.h() + 1];
                for u in &faces {
                    hist[u.len()] += 1;
                }
                let mine: Vec<String> = f.as_slice().iter().map(|c| c.to_string()).collect();
                let theirs: Vec<String> = hist.iter().map(|c| c.to_string()).collect();
                if mine != theirs {
                    return Err(CliError::OracleMismatch {
                        computed: mine.join(" "),
                        oracle: theirs.join(" "),
                    });
                }
            }
        }
        Command::CountPerm { path, common } => {
            let problem = parsed(&path, PermProblem::parse(&read(&path)?))?;
            let count = match &problem {
                PermProblem::Blocks(b) => {
                    dump(&common.rows_out, n_algorithm(&block_sf_generators(b)))?;
                    problem.count()?
                }
                PermProblem::Maps(m) => {
                    match m.clash_graph() {
                        Ok(g) => dump(&common.rows_out, ab_algorithm(&g))?,
                        Err(_) => dump(&common.rows_out, n_algorithm(&m.sf_generators()))?,
                    }
                    problem.count()?
                }
            };
            writeln!(out, "{count}")?;
            if common.oracle {
                let oracle = match &problem {
                    PermProblem::Blocks(b) => oracles::brute_block_permutations(b, &budget),
                    PermProblem::Maps(m) => oracles::brute_constrained_maps(m, &budget),
                };
                agree(&count, oracle)?;
            }
        }
        Command::CountComp { bounds, target, common } => {
            let spec = CompSpec::parse(&bounds, &target)?;
            dump(&common.rows_out, n_algorithm(&comp_generators(&spec)))?;
            let count = count_bounded_compositions(&spec);
            writeln!(out, "{count}")?;
            if common.oracle {
                agree(&count, oracles::dp_oracle(&spec, &budget))?;
                agree(&count, oracles::genfun_oracle(&spec, &budget))?;
            }
        }
        Command::CountDnf { path, k, common } => count_formula(&path, NormalForm::Dnf, k, &common, opts, out)?,
        Command::CountCnf { path, k, common } => count_formula(&path, NormalForm::Cnf, k, &common, opts, out)?,
        Command::BenchDnf {
            h,
            n,
            n1,
            n0,
            seed,
            runs,
            out: target,
        } => {
            let mut buf = Vec::new();
            {
                let mut w = csv::Writer::from_writer(&mut buf);
                for s in seed..seed + runs {
                    w.serialize(bench_dnf(h, n, n1, n0, s, opts)?)?;
                }
                w.flush()?;
            }
            match target {
                Some(p) => fs::write(p, buf)?,
                None => out.write_all(&buf)?,
            }
        }
    }
    Ok(())
}

fn count_formula(
    path: &Path,
    form: NormalForm,
    k: Option<usize>,
    common: &Common,
    opts: ScanOptions,
    out: &mut dyn Write,
) -> CliResult {
    let f = parsed(path, Formula::parse(&read(path)?))?;
    if f.form != form {
        let want = if form == NormalForm::Dnf { "dnf" } else { "cnf" };
        return Err(CliError::Input {
            path: path.display().to_string(),
            source: Error::parse(1, 1, format!("expected a `p {want}` header")),
        });
    }
    dump(&common.rows_out, term_complex(&f.to_dnf()?.deduplicated()))?;
    let count = match k {
        Some(k) => f.model_count_fixed_k(k, opts)?,
        None => f.model_count(opts)?,
    };
    writeln!(out, "{count}")?;
    if common.oracle {
        let budget = OracleBudget::default();
        let mut rows = Vec::new();
        for item in &f.items {
            if let Some(r) = term_from_literals(f.n, item)? {
                rows.push(r);
            }
        }
        let rows = DnfSpec::new(f.n, rows)?;
        let hist = match form {
            NormalForm::Dnf => oracles::brute_dnf_by_weight(&rows, &budget)?,
            NormalForm::Cnf => oracles::brute_cnf_by_weight(&rows, &budget)?,
        };
        let oracle = match k {
            Some(k) => hist.get(k).copied().unwrap_or(0),
            None => hist.iter().sum(),
        };
        agree(&count, Ok(BigUint::from(oracle)))?;
    }
    Ok(())
}

/// Parses `args` (program name first) and runs them, mapping failures to
/// exit codes: 2 for malformed input, 3 for an exhausted oracle budget, 4 for
/// an oracle disagreement, 1 otherwise.
pub fn main_with(args: impl IntoIterator<Item = OsString>) -> ExitCode {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match run(cli, &mut lock) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = lock.flush();
            eprintln!("iecount: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
