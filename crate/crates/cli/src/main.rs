mod document;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use entkit::criteria::{self, CriterionId, DETECTION_TOLERANCE};
use entkit::error::Error;
use entkit::fileio::StateFile;
use entkit::fnf::{self, FnfOptions};
use entkit::matrix::CVector;
use entkit::measures;
use entkit::state::{DensityMatrix, PureState};
use entkit::states;

use document::{AnalysisDocument, CriterionEntry, FnfSummary};
use sweep::SweepDocument;

const ENV_DETECTION_TOL: &str = "ENTKIT_DETECTION_TOL";

#[derive(Parser)]
#[command(
    name = "entkit",
    version,
    about = "Detect and quantify entanglement in bipartite quantum states",
    after_help = "Environment:\n  ENTKIT_DETECTION_TOL  override the default margin tolerance (1e-9) above\n                        which a criterion declares entanglement\n\nExit codes: 0 success, 2 input/usage error, 3 numerical failure.\nEntanglement verdicts are reported in the output document, never in the\nexit status."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a state and write it as a state file
    Gen {
        #[command(subcommand)]
        spec: GenSpec,
    },
    /// Run all separability criteria (and optionally the FNF and measure
    /// bounds) on a state file
    Analyze {
        input: PathBuf,
        /// Also bring the state to its filter normal form and re-run the
        /// criteria there
        #[arg(long)]
        fnf: bool,
        /// Include concurrence/tangle bounds and exact measures
        #[arg(long)]
        bounds: bool,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Find, per criterion, the minimal white-noise weight p at which
    /// ρ(p) = p·state + (1−p)·I/(MN) is detected
    SweepNoise {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = CriterionArg::All)]
        criterion: CriterionArg,
        /// Pre-scan grid intervals used to bracket the crossing
        #[arg(long, default_value_t = 100)]
        resolution: usize,
        #[arg(long, default_value_t = 1e-6)]
        bisect_tol: f64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Emit all applicable measure estimates for a state file
    Bounds {
        input: PathBuf,
        #[command(flatten)]
        output: OutputOpts,
    },
}

#[derive(Subcommand)]
enum GenSpec {
    /// GenTiles2 bound entangled state on M×N (M ≥ 3, N > 3, M ≤ N)
    Gentiles2 {
        m: usize,
        n: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Maximally entangled state (1/√d)Σ|ii⟩ on d×d
    Maxent {
        d: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Random pure state (complex-normal measure)
    RandomPure {
        m: usize,
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Random mixture of pure projectors
    RandomMixed {
        m: usize,
        n: usize,
        #[arg(long, default_value_t = 4)]
        rank: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Random convex mixture of product projectors (separable)
    RandomSeparable {
        m: usize,
        n: usize,
        #[arg(long, default_value_t = 10)]
        terms: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct OutputOpts {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Suppress the timestamp so identical inputs give byte-identical output
    #[arg(long)]
    deterministic: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum CriterionArg {
    Ppt,
    Ccnr,
    Cm,
    CmHs,
    All,
}

impl CriterionArg {
    fn ids(self) -> Vec<CriterionId> {
        match self {
            CriterionArg::Ppt => vec![CriterionId::Ppt],
            CriterionArg::Ccnr => vec![CriterionId::Ccnr],
            CriterionArg::Cm => vec![CriterionId::CmTrace],
            CriterionArg::CmHs => vec![CriterionId::CmHs],
            CriterionArg::All => vec![
                CriterionId::Ppt,
                CriterionId::Ccnr,
                CriterionId::CmTrace,
                CriterionId::CmHs,
            ],
        }
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Numerical(_) | Error::SingularFilter(_) | Error::SingularReduction(_) => 3,
        _ => 2,
    }
}

fn detection_tol() -> Result<f64, Error> {
    match std::env::var(ENV_DETECTION_TOL) {
        Ok(v) => v
            .parse::<f64>()
            .map_err(|_| Error::Parse(format!("{ENV_DETECTION_TOL}={v} is not a number"))),
        Err(_) => Ok(DETECTION_TOLERANCE),
    }
}

fn timestamp(deterministic: bool) -> Option<String> {
    if deterministic {
        return None;
    }
    let secs = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    // days since epoch -> civil date (Gregorian), avoiding a date dependency
    let days = secs / 86_400;
    let (h, mi, s) = ((secs / 3600) % 24, (secs / 60) % 60, secs % 60);
    let mut year = 1970i64;
    let mut remaining = days as i64;
    loop {
        let leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
        let len = if leap { 366 } else { 365 };
        if remaining < len {
            break;
        }
        remaining -= len;
        year += 1;
    }
    let leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
    let month_len = [31, if leap { 29 } else { 28 }, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31];
    let mut month = 0;
    while remaining >= month_len[month] {
        remaining -= month_len[month];
        month += 1;
    }
    Some(format!(
        "{year:04}-{:02}-{:02}T{h:02}:{mi:02}:{s:02}Z",
        month + 1,
        remaining + 1
    ))
}

fn load_state(path: &PathBuf) -> Result<(DensityMatrix, String), Error> {
    let file = StateFile::read(path)?;
    let name = file
        .name
        .clone()
        .unwrap_or_else(|| path.display().to_string());
    Ok((file.to_density()?, name))
}

fn criterion_entries(rho: &DensityMatrix, tol: f64) -> Vec<CriterionEntry> {
    criteria::full_report_with_tol(rho, tol)
        .into_iter()
        .map(|(criterion, result)| match result {
            Ok(report) => CriterionEntry { criterion, report: Some(report), error: None },
            Err(e) => CriterionEntry { criterion, report: None, error: Some(e.to_string()) },
        })
        .collect()
}

/// Dominant eigenvector of a (numerically) pure state.
fn as_pure_state(rho: &DensityMatrix) -> Option<PureState> {
    if (rho.purity() - 1.0).abs() > 1e-10 {
        return None;
    }
    let eig = rho.matrix().clone().symmetric_eigen();
    let (top, _) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())?;
    let amps = CVector::from_iterator(
        rho.total_dim(),
        eig.eigenvectors.column(top).iter().copied(),
    );
    PureState::normalized(rho.dim_a(), rho.dim_b(), amps).ok()
}

fn measure_estimates(rho: &DensityMatrix) -> Result<Vec<measures::MeasureEstimate>, Error> {
    let mut out = Vec::new();
    if let Some(psi) = as_pure_state(rho) {
        out.push(measures::pure_concurrence(&psi));
        out.push(measures::pure_tangle_bloch(&psi)?);
        out.push(measures::pure_tangle_cm(&psi)?);
    }
    out.push(measures::concurrence_lower_caf(rho)?);
    out.push(measures::concurrence_lower_cm(rho)?);
    out.push(measures::tangle_lower_hs(rho)?);
    out.push(measures::tangle_upper(rho)?);
    if rho.dim_a() == 2 && rho.dim_b() == 2 {
        out.push(measures::mnb_measure(rho)?);
        out.push(measures::mnb_from_cm(rho)?);
        out.push(measures::wootters_concurrence(rho)?);
    }
    Ok(out)
}

fn emit(format: Format, text: String, json: String, csv: String) {
    match format {
        Format::Text => print!("{text}"),
        Format::Json => println!("{json}"),
        Format::Csv => print!("{csv}"),
    }
}

fn run_gen(spec: GenSpec) -> Result<(), Error> {
    let (rho, name, seed, output) = match spec {
        GenSpec::Gentiles2 { m, n, output } => {
            (states::gentiles2_state(m, n)?, format!("gentiles2-{m}x{n}"), None, output)
        }
        GenSpec::Maxent { d, output } => {
            (states::max_entangled(d)?.density(), format!("maxent-{d}"), None, output)
        }
        GenSpec::RandomPure { m, n, seed, output } => (
            states::random_pure(m, n, seed)?.density(),
            format!("random-pure-{m}x{n}"),
            Some(seed),
            output,
        ),
        GenSpec::RandomMixed { m, n, rank, seed, output } => (
            states::random_mixed(m, n, rank, seed)?,
            format!("random-mixed-{m}x{n}-r{rank}"),
            Some(seed),
            output,
        ),
        GenSpec::RandomSeparable { m, n, terms, seed, output } => (
            states::random_separable(m, n, terms, seed)?,
            format!("random-separable-{m}x{n}-t{terms}"),
            Some(seed),
            output,
        ),
    };
    let file = StateFile::from_density(&rho, Some(name), seed);
    match output {
        Some(path) => file.write(&path)?,
        None => println!("{}", file.to_json()),
    }
    Ok(())
}

fn run_analyze(
    input: PathBuf,
    with_fnf: bool,
    with_bounds: bool,
    output: OutputOpts,
) -> Result<(), Error> {
    let tol = detection_tol()?;
    let (rho, name) = load_state(&input)?;

    let criteria_entries = criterion_entries(&rho, tol);
    let measures = if with_bounds { measure_estimates(&rho)? } else { Vec::new() };
    let fnf_summary = if with_fnf {
        let res = fnf::filter_normal_form(&rho, FnfOptions { eps: 1e-10, ..Default::default() })?;
        Some(FnfSummary {
            converged: res.converged,
            iterations: res.iterations,
            residual: res.residual,
            criteria: criterion_entries(&res.rho_tilde, tol),
        })
    } else {
        None
    };

    let doc = AnalysisDocument {
        state: name,
        dim_a: rho.dim_a(),
        dim_b: rho.dim_b(),
        criteria: criteria_entries,
        measures,
        fnf: fnf_summary,
        version: document::tool_version(),
        timestamp: timestamp(output.deterministic),
    };
    emit(output.format, doc.to_text(), doc.to_json(), doc.to_csv());
    Ok(())
}

fn run_sweep(
    input: PathBuf,
    criterion: CriterionArg,
    resolution: usize,
    bisect_tol: f64,
    output: OutputOpts,
) -> Result<(), Error> {
    if resolution < 2 {
        return Err(Error::Domain("resolution must be at least 2".into()));
    }
    let tol = detection_tol()?;
    let (rho, name) = load_state(&input)?;
    let mut entries = Vec::new();
    for id in criterion.ids() {
        entries.push(sweep::sweep_criterion(&rho, id, resolution, bisect_tol, tol)?);
    }
    let doc = SweepDocument {
        state: name,
        dim_a: rho.dim_a(),
        dim_b: rho.dim_b(),
        resolution,
        bisect_tol,
        entries,
        version: document::tool_version(),
        timestamp: timestamp(output.deterministic),
    };
    emit(output.format, doc.to_text(), doc.to_json(), doc.to_csv());
    Ok(())
}

fn run_bounds(input: PathBuf, output: OutputOpts) -> Result<(), Error> {
    let tol = detection_tol()?;
    let (rho, name) = load_state(&input)?;
    let doc = AnalysisDocument {
        state: name,
        dim_a: rho.dim_a(),
        dim_b: rho.dim_b(),
        criteria: criterion_entries(&rho, tol),
        measures: measure_estimates(&rho)?,
        fnf: None,
        version: document::tool_version(),
        timestamp: timestamp(output.deterministic),
    };
    emit(output.format, doc.to_text(), doc.to_json(), doc.to_csv());
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders help/version on stdout with success
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(2);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };

    let result = match cli.command {
        Command::Gen { spec } => run_gen(spec),
        Command::Analyze { input, fnf, bounds, output } => run_analyze(input, fnf, bounds, output),
        Command::SweepNoise { input, criterion, resolution, bisect_tol, output } => {
            run_sweep(input, criterion, resolution, bisect_tol, output)
        }
        Command::Bounds { input, output } => run_bounds(input, output),
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
