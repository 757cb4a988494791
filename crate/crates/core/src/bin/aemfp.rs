use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use aemfp::io::{parse_flow, parse_instance_with_warnings, write_instance, write_result};
use aemfp::oracles::{
    generate_approx_gadget, generate_convex_gadget, generate_random, generate_x3c_gadget, oracle_value,
    ApproxDeviation, DeviationKind, GadgetMeta, RandomParams, X3CInstance,
};
use aemfp::rational::fmt_rational;
use aemfp::{breakpoint_profile, solve, AemfpError, Instance, Method};

#[derive(Parser)]
#[command(name = "aemfp", version, about = "Almost equal maximum flow solver")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve an instance and print λ*, the flow and a minimum-cut certificate.
    Solve {
        file: PathBuf,
        /// Round to an integral flow.
        #[arg(long)]
        integer: bool,
        #[arg(long, default_value = "auto", value_parser = ["auto", "parametric", "concave", "lp"])]
        method: String,
    },
    /// Check a flow file against an instance; exits 1 on any violation.
    Verify { file: PathBuf, flow: PathBuf },
    /// Write a generated instance (and its `.meta` for gadgets).
    Generate {
        #[command(subcommand)]
        what: Gen,
    },
    /// Piecewise-linear profile of F for one constant-shift set, as CSV.
    Breakpoints {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Brute-force optimum.
    Oracle {
        file: PathBuf,
        #[arg(long)]
        integer: bool,
    },
}

#[derive(Subcommand)]
enum Gen {
    /// Hardness gadget from an X3C file (`q p`, then `p` lines of 1-based triples).
    X3c {
        x3c: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Gap-amplifying chain gadget.
    Approx {
        x3c: PathBuf,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, value_enum, default_value_t = ApproxDev::Shift)]
        deviation: ApproxDev,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// X3C gadget with the convex deviation `2x² + 1`.
    Convex {
        x3c: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Seeded random instance; node 0 is the source, node n-1 the sink.
    Random {
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value_t = 12)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 5)]
        cap_max: i64,
        #[arg(long, value_enum, default_value_t = RandomDev::Constant)]
        deviation: RandomDev,
        /// Largest shift for `--deviation constant`.
        #[arg(long, default_value_t = 2)]
        max_shift: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ApproxDev {
    /// `x + 1`
    Shift,
    /// `k·x`
    Scaled,
}

#[derive(Clone, Copy, ValueEnum)]
enum RandomDev {
    Constant,
    Concave,
}

/// Failure of a subcommand with its exit code.
struct Failure {
    code: u8,
    kind: &'static str,
    msg: String,
}

impl From<AemfpError> for Failure {
    fn from(e: AemfpError) -> Self {
        let code = match e {
            AemfpError::Infeasible => 3,
            AemfpError::BudgetExceeded { .. } | AemfpError::UnsupportedDeviation(_) => 4,
            AemfpError::Internal(_) => 1,
            _ => 2,
        };
        Failure { code, kind: e.kind(), msg: e.to_string() }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure { code: 2, kind: "io", msg: format!("{}: {e}", path.display()) }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| io_failure(path, e))
}

fn load(path: &Path) -> Result<Instance, Failure> {
    let (inst, warnings) = parse_instance_with_warnings(&read(path)?)?;
    for w in warnings {
        eprintln!("warning {w}");
    }
    Ok(inst)
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| io_failure(p, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_gadget(output: Option<&Path>, inst: &Instance, meta: &GadgetMeta) -> Result<(), Failure> {
    emit(output, &write_instance(inst))?;
    match output {
        Some(p) => {
            let mut meta_path = p.as_os_str().to_owned();
            meta_path.push(".meta");
            emit(Some(Path::new(&meta_path)), &meta.to_text())
        }
        None => {
            eprint!("{}", meta.to_text());
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.cmd {
        Cmd::Solve { file, integer, method } => {
            let inst = load(&file)?;
            let method: Method = method.parse()?;
            let r = solve(&inst, method, integer)?;
            print!("{}", write_result(&inst, &r)?);
        }
        Cmd::Verify { file, flow } => {
            let inst = load(&file)?;
            let f = parse_flow(&read(&flow)?, &inst)?;
            let violations = inst.violations(&f);
            if violations.is_empty() {
                println!("ok flow_value {}", fmt_rational(&f.flow_value));
                return Ok(0);
            }
            for v in &violations {
                println!("violation {v}");
            }
            return Ok(1);
        }
        Cmd::Generate { what } => match what {
            Gen::X3c { x3c, output } => {
                let (inst, meta) = generate_x3c_gadget(&X3CInstance::parse(&read(&x3c)?)?)?;
                emit_gadget(output.as_deref(), &inst, &meta)?;
            }
            Gen::Approx { x3c, k, deviation, output } => {
                let dev = match deviation {
                    ApproxDev::Shift => ApproxDeviation::ConstantShift,
                    ApproxDev::Scaled => ApproxDeviation::Scaled,
                };
                let (inst, meta) = generate_approx_gadget(&X3CInstance::parse(&read(&x3c)?)?, k, dev)?;
                emit_gadget(output.as_deref(), &inst, &meta)?;
            }
            Gen::Convex { x3c, output } => {
                let (inst, meta) = generate_convex_gadget(&X3CInstance::parse(&read(&x3c)?)?)?;
                emit_gadget(output.as_deref(), &inst, &meta)?;
            }
            Gen::Random { n, m, k, cap_max, deviation, max_shift, seed, output } => {
                let deviation = match deviation {
                    RandomDev::Constant => DeviationKind::Constant { max_shift },
                    RandomDev::Concave => DeviationKind::ConcaveMix,
                };
                let inst = generate_random(&RandomParams { n, m, k, cap_max, deviation, seed })?;
                emit(output.as_deref(), &write_instance(&inst))?;
            }
        },
        Cmd::Breakpoints { file, output } => {
            let inst = load(&file)?;
            emit(output.as_deref(), &breakpoint_profile(&inst)?.to_csv())?;
        }
        Cmd::Oracle { file, integer } => {
            let inst = load(&file)?;
            println!("oracle_value {}", fmt_rational(&oracle_value(&inst, integer)?));
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            if code != 0 {
                let first = e.to_string().lines().next().unwrap_or_default().to_string();
                eprintln!("error usage {}", first.trim_start_matches("error: "));
            }
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error {} {}", f.kind, f.msg);
            ExitCode::from(f.code)
        }
    }
}
