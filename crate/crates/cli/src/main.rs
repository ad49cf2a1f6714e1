use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use hermclass::files::Timing;
use hermclass::{
    classify, classify_practical, gen_random_system, hermite_determinants, verify_region, Backend, ClassifyOptions,
    Completeness, Error, ResultFile, SystemFile, Variant,
};

/// Exit status for an inconsistent input system.
const EXIT_INCONSISTENT: u8 = 2;
/// Exit status when `--require-complete` meets heuristic sample points.
const EXIT_HEURISTIC: u8 = 3;
/// Exit status when `--verify` finds a region whose count is wrong.
const EXIT_VERIFY: u8 = 4;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "hermclass", version, about = "Classify the real solutions of parametric polynomial systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a system file and write the result file.
    Run(RunArgs),
    /// Write a dense random system file.
    Gen(GenArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    input: PathBuf,
    /// Result file; standard output when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    backend: Option<Backend>,
    #[arg(long)]
    variant: Option<Variant>,
    /// Random points checked with the oracle per region, witnesses aside.
    #[arg(long, value_name = "TRIALS")]
    verify: Option<usize>,
    /// Audit Hermite entries and minors against the generic degree bounds.
    #[arg(long)]
    assume_regular: bool,
    /// Fail with status 3 unless the sample points are guaranteed complete.
    #[arg(long)]
    require_complete: bool,
    /// Only the minors of H_1 and H_{g_i}: no sampling, no regions.
    #[arg(long)]
    dets_only: bool,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    t: usize,
    #[arg(long)]
    s: usize,
    #[arg(long)]
    d: u32,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Run(args) => run(&args),
        Command::Gen(args) => gen(&args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("hermclass: {msg}");
            ExitCode::FAILURE
        }
    }
}

fn run(args: &RunArgs) -> Result<u8, String> {
    let text = fs::read_to_string(&args.input).map_err(|e| format!("{}: {e}", args.input.display()))?;
    let file = SystemFile::from_toml(&text).map_err(|e| format!("{}: {e}", args.input.display()))?;
    let system = file.parse().map_err(|e| describe(&args.input, &text, &e))?;
    let mut opts = system.classify_options(&ClassifyOptions::default());
    if let Some(seed) = args.seed {
        opts.seed = seed;
    }
    if let Some(b) = args.backend {
        opts.backend = b;
    }
    opts.assume_regular = args.assume_regular;
    let variant = args.variant.or(system.options.variant).unwrap_or(Variant::Full);

    let start = Instant::now();
    let (sp, f, g) = (&system.space, &system.equations, &system.inequalities);
    let c = if args.dets_only {
        hermite_determinants(sp, f, g, &opts)
    } else {
        match variant {
            Variant::Full => classify(sp, f, g, &opts),
            Variant::DeterminantsFirst => classify_practical(sp, f, g, &opts),
        }
    }
    .map_err(|e| describe(&args.input, &text, &e))?;
    let seconds = start.elapsed().as_secs_f64();

    let mut status = 0;
    if let Some(trials) = args.verify {
        for (k, r) in c.regions.iter().enumerate() {
            let report = verify_region(r, &c, trials, opts.seed.wrapping_add(k as u64)).map_err(|e| e.to_string())?;
            for m in &report.mismatches {
                let pt: Vec<String> = m.point.iter().map(|x| x.to_string()).collect();
                eprintln!(
                    "hermclass: region {k} claims {} solutions but ({}) has {}{}",
                    m.expected,
                    pt.join(", "),
                    m.found,
                    if report.advisory { " (advisory: heuristic sample points)" } else { "" }
                );
            }
            if !report.ok() && !report.advisory {
                status = EXIT_VERIFY;
            }
        }
    }

    let out = ResultFile::from_classification(&c, Some(Timing { seconds }));
    write_atomically(args.output.as_deref(), &out.to_json())?;
    if status != 0 {
        return Ok(status);
    }
    if c.inconsistent {
        return Ok(EXIT_INCONSISTENT);
    }
    if args.require_complete && c.completeness == Completeness::Heuristic {
        eprintln!("hermclass: sample points are heuristic; rerun with a complete backend");
        return Ok(EXIT_HEURISTIC);
    }
    Ok(0)
}

fn gen(args: &GenArgs) -> Result<u8, String> {
    let file = gen_random_system(args.n, args.t, args.s, args.d, args.seed).map_err(|e| e.to_string())?;
    write_atomically(args.output.as_deref(), &file.to_toml())?;
    Ok(0)
}

/// Error text with a `path:line:column` prefix for expression errors.
fn describe(path: &Path, text: &str, e: &Error) -> String {
    if let Error::Expression { source_text, column, .. } = e {
        for (i, line) in text.lines().enumerate() {
            if let Some(at) = line.find(&format!("\"{source_text}\"")) {
                return format!("{}:{}:{}: {e}", path.display(), i + 1, at + 1 + column);
            }
        }
    }
    format!("{}: {e}", path.display())
}

fn write_atomically(path: Option<&Path>, body: &str) -> Result<(), String> {
    let Some(path) = path else {
        println!("{body}");
        return Ok(());
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let fail = |e: std::io::Error| format!("{}: {e}", path.display());
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(fail)?;
    tmp.write_all(body.as_bytes()).map_err(fail)?;
    tmp.write_all(b"\n").map_err(fail)?;
    tmp.persist(path).map_err(|e| fail(e.error))?;
    Ok(())
}
