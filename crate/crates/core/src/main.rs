use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use lwcodes::codes::CodeSpec;
use lwcodes::duality::{repair_symbol, verify_duality};
use lwcodes::lwc::{kuznetsov_bounds, singleton_bound};
use lwcodes::sim::{self, SimConfig};
use lwcodes::{analyze, AdditiveCode, BitVector, ChannelState, Error};

/// Locally rewritable codes for memories with stuck-at cells.
///
/// A code is given either as a stock name (flip4, groupflip6, groupflip8-4,
/// hamming7, hamming7-lwc, simplex7, spc5, repetition4, cyclic7:1101) or as a
/// path to a JSON code spec. Bit strings and channel states are read left to
/// right starting at coordinate 0; '*' marks a normal cell in a state.
#[derive(Parser)]
#[command(name = "lwc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CodeArg {
    /// Stock code name or path to a JSON code spec.
    #[arg(long)]
    code: String,
}

#[derive(Subcommand)]
enum Command {
    /// Print d*, r*, per-coordinate locality and bound optimality.
    Analyze(CodeArg),
    /// Store a message into memory with the given stuck cells.
    Encode {
        #[command(flatten)]
        code: CodeArg,
        #[arg(long)]
        msg: String,
        #[arg(long, default_value = "")]
        state: String,
    },
    /// Rewrite a stored word to hold a new message.
    Update {
        #[command(flatten)]
        code: CodeArg,
        #[arg(long)]
        prev: String,
        #[arg(long)]
        msg: String,
        #[arg(long, default_value = "")]
        state: String,
    },
    /// Recover the message from a read-back word.
    Decode {
        #[command(flatten)]
        code: CodeArg,
        #[arg(long)]
        word: String,
    },
    /// Compare the LRC profile of a code with the LWC built from its parity check.
    Duality {
        /// Stock code name or path to a JSON code spec.
        #[arg(long)]
        lrc: String,
    },
    /// Rebuild one erased symbol of an LRC codeword.
    Repair {
        #[command(flatten)]
        code: CodeArg,
        #[arg(long)]
        word: String,
        #[arg(long)]
        erased: usize,
    },
    /// Locality-aware Singleton bound, or the defect-channel bounds with --kuznetsov.
    Bounds {
        #[arg(long)]
        kuznetsov: bool,
        #[arg(long)]
        n: usize,
        #[arg(long, required_unless_present = "kuznetsov")]
        k: Option<usize>,
        #[arg(long, required_unless_present = "kuznetsov")]
        r: Option<usize>,
        #[arg(long, required_if_eq("kuznetsov", "true"))]
        t: Option<usize>,
    },
    /// Run a Monte Carlo cost simulation.
    Simulate {
        /// JSON simulation config.
        #[arg(long)]
        config: PathBuf,
        /// Per-write CSV output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load_spec(arg: &str) -> Result<CodeSpec, Error> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path)?;
        let spec: CodeSpec = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{arg}: {e}")))?;
        spec.validate()?;
        Ok(spec)
    } else {
        CodeSpec::from_name(arg)
    }
}

fn load_code(arg: &CodeArg) -> Result<AdditiveCode, Error> {
    AdditiveCode::build(load_spec(&arg.code)?.g0()?)
}

fn parse_state(text: &str, n: usize) -> Result<ChannelState, Error> {
    if text.is_empty() {
        Ok(ChannelState::clean(n))
    } else {
        text.parse()
    }
}

fn print(value: &serde_json::Value) -> Result<(), Error> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| Error::Io(e.into()))?;
    writeln!(out)?;
    Ok(())
}

fn execute(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Analyze(code) => {
            let code = load_code(&code)?;
            print(&serde_json::to_value(analyze(&code)?).expect("serializable"))
        }
        Command::Encode { code, msg, state } => {
            let code = load_code(&code)?;
            let m: BitVector = msg.parse()?;
            let s = parse_state(&state, code.n())?;
            let enc = code.encode_initial(&m, &s)?;
            print(&json!({ "word": enc.codeword, "report": enc.report }))
        }
        Command::Update { code, prev, msg, state } => {
            let code = load_code(&code)?;
            let prev: BitVector = prev.parse()?;
            let m: BitVector = msg.parse()?;
            let s = parse_state(&state, code.n())?;
            let enc = code.encode_update(&prev, &m, &s)?;
            print(&json!({ "word": enc.codeword, "report": enc.report }))
        }
        Command::Decode { code, word } => {
            let code = load_code(&code)?;
            let y: BitVector = word.parse()?;
            print(&json!({ "message": code.decode(&y)? }))
        }
        Command::Duality { lrc } => {
            let lrc = load_spec(&lrc)?.lrc()?;
            print(&serde_json::to_value(verify_duality(&lrc)?).expect("serializable"))
        }
        Command::Repair { code, word, erased } => {
            let lrc = load_spec(&code.code)?.lrc()?;
            let y: BitVector = word.parse()?;
            let rep = repair_symbol(&lrc, &y, erased)?;
            print(&json!({ "value": u8::from(rep.value), "accessed": rep.accessed }))
        }
        Command::Bounds { kuznetsov: true, n, t, .. } => {
            let t = t.ok_or_else(|| Error::Usage("--kuznetsov needs --t".into()))?;
            let b = kuznetsov_bounds(n, t)?;
            print(&json!({ "n": n, "t": t, "lower": b.lower, "upper": b.upper }))
        }
        Command::Bounds { n, k, r, .. } => {
            let (k, r) = k.zip(r).ok_or_else(|| Error::Usage("bounds needs --k and --r".into()))?;
            print(&json!({ "n": n, "k": k, "r": r, "d_max": singleton_bound(n, k, r)? }))
        }
        Command::Simulate { config, out } => {
            let text = std::fs::read_to_string(&config)?;
            let cfg: SimConfig =
                serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", config.display())))?;
            let result = sim::run(&cfg)?;
            if let Some(path) = out {
                sim::write_csv(&result, BufWriter::new(File::create(path)?))?;
            }
            print(&serde_json::to_value(&result.summary).expect("serializable"))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Error::Masking(failure)) => {
            let _ = print(&json!({ "masking_failure": failure }));
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_usage() { 2 } else { 1 })
        }
    }
}
