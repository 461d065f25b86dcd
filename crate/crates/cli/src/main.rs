//! `sgi`: check derivations, search for them, and extract split-interpolants.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use singular_interp::gen::{GenConfig, Generator};
use singular_interp::geometric::{builtin_theory, compile_theory_file, CompiledTheory, TheorySpec, BUILTIN_NAMES};
use singular_interp::golden::{goldens, run_golden};
use singular_interp::interpolate::{interpolate_with, verify, InterpConfig, InterpError, Mixed, Partition};
use singular_interp::kernel::{check, parse_derivation, print_derivation, Derivation};
use singular_interp::search::{prove, Budget, SearchError};
use singular_interp::syntax::{parse_formula, parse_sequent};

const OK: u8 = 0;
const FAILED: u8 = 1;
const NON_SINGULAR: u8 = 2;
const PARSE_ERROR: u8 = 3;
const BUDGET_EXHAUSTED: u8 = 4;

#[derive(Parser)]
#[command(name = "sgi", version, about = "Split-interpolants for G3c with singular geometric rules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a derivation file against a theory.
    Check {
        file: PathBuf,
        #[arg(long, default_value = "G")]
        theory: String,
    },
    /// Search for a derivation of a sequent.
    Prove {
        sequent: String,
        #[arg(long, default_value = "G")]
        theory: String,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long, default_value_t = 2)]
        witnesses: usize,
        #[arg(long, default_value_t = 64)]
        geo_cap: usize,
        /// Write the derivation here instead of standard output.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Extract an interpolant from a derivation file.
    Interp {
        file: PathBuf,
        /// Sides by occurrence position, e.g. `L:1,2;R:2`.
        #[arg(long, required_unless_present = "all_partitions")]
        partition: Option<String>,
        #[arg(long, default_value = "G")]
        theory: String,
        /// Re-check both witnesses and the language condition.
        #[arg(long)]
        verify: bool,
        /// Write `witness1.deriv` and `witness2.deriv` into this directory.
        #[arg(long)]
        emit_witnesses: Option<PathBuf>,
        /// Print the languages of the interpolant and both sides.
        #[arg(long)]
        report: bool,
        /// Use the existential form in the mixed geometric case.
        #[arg(long)]
        conjunctive: bool,
        #[arg(long, conflicts_with = "partition")]
        all_partitions: bool,
        #[arg(long, default_value_t = 64)]
        max_partitions: usize,
    },
    /// Theory file tools.
    Theory {
        #[command(subcommand)]
        command: TheoryCommand,
    },
    /// Run the built-in golden examples.
    Selftest,
    /// Parse a sequent (or, failing that, a formula) and print it back.
    Parse { text: String },
    /// Print random checked derivations.
    Gen {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = "G")]
        theory: String,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 4)]
        height: usize,
    },
}

#[derive(Subcommand)]
enum TheoryCommand {
    /// Compile axioms into rules and report singularity.
    Compile { file: PathBuf },
}

struct Failure(u8, String);

type Outcome = Result<u8, Failure>;

fn parse_fail(msg: impl std::fmt::Display) -> Failure {
    Failure(PARSE_ERROR, msg.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(FAILED, format!("{}: {e}", path.display())))
}

fn load_theory(name: &str) -> Result<TheorySpec, Failure> {
    if BUILTIN_NAMES.contains(&name) || name.starts_with("rel:") {
        return builtin_theory(name).map_err(parse_fail);
    }
    let src = read(Path::new(name))?;
    let compiled = compile_theory_file(&src).map_err(|e| parse_fail(format!("{name}: {e}")))?;
    for w in &compiled.warnings {
        eprintln!("warning: {w}");
    }
    Ok(compiled.theory)
}

fn load_derivation(path: &Path) -> Result<Derivation, Failure> {
    let src = read(path)?;
    parse_derivation(&src).map_err(|e| parse_fail(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure(FAILED, format!("{}: {e}", path.display())))
}

fn run_check(file: &Path, theory: &str) -> Outcome {
    let t = load_theory(theory)?;
    let d = load_derivation(file)?;
    let r = check(&d, &t);
    if r.ok {
        println!("ok: {} (height {})", d.conclusion, d.height());
        Ok(OK)
    } else {
        for v in &r.violations {
            println!("{v}");
        }
        Ok(FAILED)
    }
}

fn run_prove(sequent: &str, theory: &str, budget: Budget, emit: Option<&Path>) -> Outcome {
    let t = load_theory(theory)?;
    let goal = parse_sequent(sequent).map_err(parse_fail)?;
    match prove(&goal, &t, budget) {
        Ok(d) => {
            let text = print_derivation(&d);
            match emit {
                Some(path) => {
                    write(path, &text)?;
                    println!("found: {goal} (height {}), written to {}", d.height(), path.display());
                }
                None => print!("{text}"),
            }
            Ok(OK)
        }
        Err(e @ SearchError::NotFoundWithinBudget(_)) => Err(Failure(BUDGET_EXHAUSTED, e.to_string())),
        Err(e) => Err(Failure(FAILED, e.to_string())),
    }
}

struct InterpArgs<'a> {
    verify: bool,
    emit: Option<&'a Path>,
    report: bool,
    config: InterpConfig,
}

fn interp_error(e: InterpError) -> Failure {
    match e {
        InterpError::NonSingularTheory(_) => Failure(NON_SINGULAR, e.to_string()),
        InterpError::MalformedPartition(_) => parse_fail(e),
        _ => Failure(FAILED, e.to_string()),
    }
}

fn interp_one(d: &Derivation, p: &Partition, t: &TheorySpec, args: &InterpArgs, prefix: &str) -> Outcome {
    let r = interpolate_with(d, p, t, &args.config).map_err(interp_error)?;
    println!("{prefix}{}", r.interpolant);
    if args.report {
        for (path, case) in &r.geo_cases {
            println!("  {path}: {case}");
        }
        println!("{}", r.report);
    }
    if let Some(dir) = args.emit {
        fs::create_dir_all(dir).map_err(|e| Failure(FAILED, format!("{}: {e}", dir.display())))?;
        write(&dir.join("witness1.deriv"), &print_derivation(&r.witness1))?;
        write(&dir.join("witness2.deriv"), &print_derivation(&r.witness2))?;
    }
    if args.verify {
        let v = verify(&r, &d.conclusion, p, t);
        if !v.ok {
            for x in &v.violations {
                println!("  {x}");
            }
            return Ok(FAILED);
        }
        println!("{prefix}verified");
    }
    Ok(OK)
}

fn run_interp(file: &Path, partition: Option<&str>, theory: &str, args: InterpArgs, all: Option<usize>) -> Outcome {
    let t = load_theory(theory)?;
    let d = load_derivation(file)?;
    match (all, partition) {
        (Some(max), _) => {
            let mut code = OK;
            for p in Partition::enumerate(&d.conclusion, max) {
                code = code.max(interp_one(&d, &p, &t, &args, &format!("{p}  "))?);
            }
            Ok(code)
        }
        (None, Some(spec)) => {
            let p = Partition::parse(spec).map_err(interp_error)?;
            interp_one(&d, &p, &t, &args, "")
        }
        (None, None) => Err(parse_fail("either --partition or --all-partitions is required")),
    }
}

fn print_compiled(c: &CompiledTheory) -> u8 {
    let mut code = OK;
    for w in &c.warnings {
        println!("warning: {w}");
    }
    for r in &c.reports {
        println!("{}: {}", r.id, if r.singular { "singular" } else { "NOT singular" });
        for d in &r.diagnostics {
            println!("  {d}");
        }
        if !r.singular {
            code = NON_SINGULAR;
        }
    }
    code
}

fn run_compile(file: &Path) -> Outcome {
    let src = read(file)?;
    let compiled = compile_theory_file(&src).map_err(|e| parse_fail(format!("{}: {e}", file.display())))?;
    println!("theory {}: {} rules", compiled.theory.name, compiled.theory.rules.len());
    Ok(print_compiled(&compiled))
}

fn run_selftest() -> Outcome {
    let mut code = OK;
    for g in goldens() {
        let o = run_golden(&g);
        let got = o.interpolant.as_ref().map(|c| c.to_string()).unwrap_or_else(|| "-".into());
        if o.passed() {
            println!("PASS {:<14} {got}", o.name);
        } else {
            println!("FAIL {:<14} got {got}, expected {} {}", o.name, o.expected, o.detail);
            code = FAILED;
        }
    }
    Ok(code)
}

fn run_parse(text: &str) -> Outcome {
    if text.contains("=>") {
        println!("{}", parse_sequent(text).map_err(parse_fail)?);
    } else {
        println!("{}", parse_formula(text).map_err(parse_fail)?);
    }
    Ok(OK)
}

fn run_gen(seed: u64, theory: &str, count: usize, height: usize) -> Outcome {
    let t = load_theory(theory)?;
    let mut cfg = GenConfig::for_theory(&t);
    cfg.max_height = height;
    let mut g = Generator::new(seed, &t, cfg);
    for i in 0..count {
        if i > 0 {
            println!();
        }
        print!("{}", print_derivation(&g.derivation()));
    }
    Ok(OK)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Check { file, theory } => run_check(&file, &theory),
        Command::Prove { sequent, theory, depth, witnesses, geo_cap, emit } => {
            let budget = Budget { max_depth: depth, max_term_witnesses: witnesses, max_geo_instantiations_per_node: geo_cap };
            run_prove(&sequent, &theory, budget, emit.as_deref())
        }
        Command::Interp {
            file,
            partition,
            theory,
            verify,
            emit_witnesses,
            report,
            conjunctive,
            all_partitions,
            max_partitions,
        } => {
            let config = InterpConfig { mixed: if conjunctive { Mixed::Conjunctive } else { Mixed::Implicative } };
            let args = InterpArgs { verify, emit: emit_witnesses.as_deref(), report, config };
            run_interp(&file, partition.as_deref(), &theory, args, all_partitions.then_some(max_partitions))
        }
        Command::Theory { command: TheoryCommand::Compile { file } } => run_compile(&file),
        Command::Selftest => run_selftest(),
        Command::Parse { text } => run_parse(&text),
        Command::Gen { seed, theory, count, height } => run_gen(seed, &theory, count, height),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
