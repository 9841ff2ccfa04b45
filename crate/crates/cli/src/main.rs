//! `maskcode` command-line tool.
//!
//! Exit status: 0 success, 1 a checked property does not hold (or tamper
//! alarm, or exhausted search budget), 2 bad input, 3 capacity exceeded.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use maskcode::codebook::{
    gilbert_varshamov_feasible, gv_sum, make_probing_matrix, ops_mask_requirement, table_csv,
    table_lookup, CodeFamily,
};
use maskcode::leakage::leakage_profile_up_to;
use maskcode::masker::{
    fresh_masks, mutual_information, oracle_leaking_subset, MaskSource, OpsScheme,
};
use maskcode::otr::{
    check_and_decode, detection_sweep, encode_otr, gv_pair_check, search_otr, Decoded, OtrCode,
};
use maskcode::{BitVector, CodeError};

/// Largest length for which `verify --oracle` runs the enumeration.
const ORACLE_MAX_N: usize = 16;

#[derive(Parser)]
#[command(
    name = "maskcode",
    version,
    about = "Masking schemes and tamper-detecting codes over GF(2)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a masking scheme from a code family.
    Construct {
        family: Family,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        q: Option<usize>,
        #[arg(long)]
        s: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check probing (and forcing) security of a scheme or code file.
    Verify {
        file: PathBuf,
        #[arg(long)]
        order: usize,
        #[arg(long)]
        forcing: Option<usize>,
        /// Also run the exhaustive mutual-information oracle (n <= 16).
        #[arg(long)]
        oracle: bool,
    },
    /// Worst-case leakage per probe count.
    Leakage {
        file: PathBuf,
        #[arg(long)]
        max_probes: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for a code that resists probing and forcing.
    SearchOtr {
        #[arg(long)]
        j: usize,
        #[arg(long)]
        f: usize,
        #[arg(long)]
        q: usize,
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Encode data bits with seeded masks.
    Encode {
        file: PathBuf,
        #[arg(long)]
        data: String,
        #[arg(long)]
        seed: u64,
    },
    /// Recover data and masks from a codeword.
    Decode {
        file: PathBuf,
        #[arg(long)]
        data: String,
    },
    /// Maximum scheme lengths: full CSV, one cell, or a mask requirement.
    Table {
        #[arg(long, requires = "q", conflicts_with = "k")]
        s: Option<usize>,
        #[arg(long)]
        q: Option<usize>,
        #[arg(long, requires = "q")]
        k: Option<usize>,
    },
    /// Gilbert-Varshamov inequality checks.
    Gv {
        #[command(subcommand)]
        which: GvCommand,
    },
}

#[derive(Subcommand)]
enum GvCommand {
    /// Does an m x n matrix with any l columns independent exist?
    Matrix {
        #[arg(long)]
        l: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
    /// Both inequalities for a code with j data bits, s masks, r check bits.
    Otr {
        #[arg(long)]
        j: usize,
        #[arg(long)]
        f: usize,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        r: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Vernam,
    SingleParity,
    Repetition,
    Hamming,
    Hsiao,
    Qr17,
    Golay23,
    Golay24,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// Why a command did not succeed, mapped onto the exit status.
enum Failure {
    Negative(String),
    Input(String),
    Capacity(String),
}

impl From<CodeError> for Failure {
    fn from(e: CodeError) -> Self {
        match e {
            CodeError::Capacity(_) => Failure::Capacity(e.to_string()),
            CodeError::ProbingInsecure { .. } | CodeError::ForcingInsecure { .. } => {
                Failure::Negative(e.to_string())
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

enum Loaded {
    Ops(OpsScheme),
    Otr(OtrCode),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Negative(msg)) => {
            if !msg.is_empty() {
                println!("{msg}");
            }
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Capacity(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Construct {
            family,
            k,
            q,
            s,
            n,
            out,
        } => construct(family, k, q, s, n, out),
        Command::Verify {
            file,
            order,
            forcing,
            oracle,
        } => verify(&file, order, forcing, oracle),
        Command::Leakage {
            file,
            max_probes,
            format,
            out,
        } => leakage(&file, max_probes, format, out),
        Command::SearchOtr {
            j,
            f,
            q,
            budget,
            seed,
            out,
        } => {
            let Some(code) = search_otr(j, f, q, budget, seed) else {
                return Err(Failure::Negative(format!(
                    "no code found for j={j}, f={f}, q={q} within {budget} iterations"
                )));
            };
            emit(&code.to_text(), out.as_deref())
        }
        Command::Encode { file, data, seed } => encode(&file, &data, seed),
        Command::Decode { file, data } => decode(&file, &data),
        Command::Table { s, q, k } => table(s, q, k),
        Command::Gv { which } => gv(which),
    }
}

fn need(value: Option<usize>, flag: &str, family: &str) -> Result<usize, Failure> {
    value.ok_or_else(|| Failure::Input(format!("{family} needs --{flag}")))
}

fn construct(
    family: Family,
    k: Option<usize>,
    q: Option<usize>,
    s: Option<usize>,
    n: Option<usize>,
    out: Option<PathBuf>,
) -> Outcome {
    let family = match family {
        Family::Vernam => CodeFamily::Vernam {
            k: need(k, "k", "vernam")?,
        },
        Family::SingleParity => CodeFamily::SingleParity {
            k: need(k, "k", "single-parity")?,
        },
        Family::Repetition => CodeFamily::Repetition {
            q: need(q, "q", "repetition")?,
        },
        Family::Hamming => CodeFamily::Hamming {
            s: need(s, "s", "hamming")?,
            n: need(n, "n", "hamming")?,
        },
        Family::Hsiao => CodeFamily::Hsiao {
            s: need(s, "s", "hsiao")?,
            n: need(n, "n", "hsiao")?,
        },
        Family::Qr17 => CodeFamily::Qr17,
        Family::Golay23 => CodeFamily::Golay23,
        Family::Golay24 => CodeFamily::Golay24,
    };
    let scheme = OpsScheme::new(make_probing_matrix(family)?, family.advertised_order())?;
    emit(&scheme.to_text(), out.as_deref())
}

/// Prints `text` and, when asked, writes it to `out` as well.
fn emit(text: &str, out: Option<&Path>) -> Outcome {
    if let Some(path) = out {
        fs::write(path, text)
            .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))?;
    }
    print!("{text}");
    Ok(())
}

fn load(path: &Path) -> Result<Loaded, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    let tag = text.split_whitespace().next().unwrap_or("");
    match tag {
        "OPS" => Ok(Loaded::Ops(OpsScheme::parse_text(&text)?)),
        "OTR" => Ok(Loaded::Otr(OtrCode::parse_text_unverified(&text)?)),
        _ => Err(Failure::Input(format!(
            "{}: expected an OPS or OTR header",
            path.display()
        ))),
    }
}

fn bits(text: &str) -> Result<BitVector, Failure> {
    text.parse()
        .map_err(|e: CodeError| Failure::Input(format!("bad bit string {text:?}: {e}")))
}

fn dashed(indices: &[usize]) -> String {
    indices
        .iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join("-")
}

fn verify(path: &Path, order: usize, forcing: Option<usize>, oracle: bool) -> Outcome {
    // Both file kinds come down to a probing matrix, an encoder for the
    // oracle, and a parity-check matrix for forcing. A scheme's probing
    // matrix doubles as its parity check.
    let (probing, generator, data_bits, parity) = match load(path)? {
        Loaded::Ops(s) => (
            s.probing().clone(),
            s.generator().clone(),
            s.k(),
            s.probing().clone(),
        ),
        Loaded::Otr(c) => (
            c.probing().clone(),
            c.generator().clone(),
            c.j(),
            c.parity_check().clone(),
        ),
    };
    let n = probing.cols();
    if order > n {
        return Err(Failure::Input(format!("order {order} exceeds length {n}")));
    }
    let mut ok = true;

    match probing.find_dependent_columns(order) {
        None => println!("probing order {order}: ok (any {order} columns of P independent)"),
        Some(w) => {
            ok = false;
            println!(
                "probing order {order}: FAIL, dependent columns {}",
                dashed(&w)
            );
        }
    }

    if oracle {
        if n > ORACLE_MAX_N {
            println!("oracle: skipped (n = {n} > {ORACLE_MAX_N})");
        } else {
            match oracle_leaking_subset(&generator, data_bits, order)? {
                None => println!(
                    "oracle order {order}: ok (zero mutual information on every {order}-subset)"
                ),
                Some((w, mi)) => {
                    ok = false;
                    println!(
                        "oracle order {order}: FAIL, probes {} leak {mi:.6} bits",
                        dashed(&w)
                    );
                }
            }
            // Sanity anchor: observing everything reveals all data bits.
            let all: Vec<usize> = (0..n).collect();
            let full = mutual_information(&generator, data_bits, &all)?;
            if (full - data_bits as f64).abs() > 1e-9 {
                ok = false;
                println!("oracle: FAIL, full observation leaks {full} bits instead of {data_bits}");
            }
        }
    }

    if let Some(f) = forcing {
        let report = detection_sweep(&parity, f)?;
        let column_test = parity.find_dependent_columns(f);
        if report.all_detected != column_test.is_none() {
            return Err(Failure::Negative(format!(
                "forcing order {f}: sweep and column test disagree"
            )));
        }
        match report.miss_witness {
            None => println!(
                "forcing order {f}: ok ({} error vectors detected)",
                report.errors_checked
            ),
            Some(e) => {
                ok = false;
                println!("forcing order {f}: FAIL, undetected error {e}");
            }
        }
    }

    if ok {
        Ok(())
    } else {
        Err(Failure::Negative(String::new()))
    }
}

fn leakage(
    path: &Path,
    max_probes: Option<usize>,
    format: Format,
    out: Option<PathBuf>,
) -> Outcome {
    let Loaded::Ops(scheme) = load(path)? else {
        return Err(Failure::Input("leakage needs an OPS scheme file".into()));
    };
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let profile = leakage_profile_up_to(&scheme, &id, max_probes.unwrap_or(scheme.n()))?;
    let text = match format {
        Format::Csv => profile.to_csv(),
        Format::Json => profile.to_json() + "\n",
    };
    emit(&text, out.as_deref())
}

fn encode(path: &Path, data: &str, seed: u64) -> Outcome {
    let x = bits(data)?;
    let y = match load(path)? {
        Loaded::Ops(s) => s.encode(&x, &fresh_masks(&s, seed))?,
        Loaded::Otr(c) => encode_otr(&c, &x, &MaskSource::new(seed).draw(c.s()))?,
    };
    println!("{y}");
    Ok(())
}

fn decode(path: &Path, data: &str) -> Outcome {
    let y = bits(data)?;
    match load(path)? {
        Loaded::Ops(s) => {
            let (x, m) = s.decode(&y)?;
            println!("x={x} m={m}");
        }
        Loaded::Otr(c) => match check_and_decode(&c, &y)? {
            Decoded::Message { x, m } => println!("x={x} m={m}"),
            Decoded::TamperAlarm { syndrome } => {
                return Err(Failure::Negative(format!("TAMPER syndrome={syndrome}")));
            }
        },
    }
    Ok(())
}

fn table(s: Option<usize>, q: Option<usize>, k: Option<usize>) -> Outcome {
    match (s, q, k) {
        (Some(s), Some(q), None) => println!("{}", table_lookup(s, q)?.value),
        (None, Some(q), Some(k)) => println!("{}", ops_mask_requirement(k, q)?),
        (None, None, None) => print!("{}", table_csv()),
        _ => {
            return Err(Failure::Input(
                "use --s with --q, --k with --q, or no options".into(),
            ))
        }
    }
    Ok(())
}

fn gv(which: GvCommand) -> Outcome {
    match which {
        GvCommand::Matrix { l, m, n } => {
            let holds = gilbert_varshamov_feasible(l, m, n)?;
            println!("sum={} bound=2^{m} holds={holds}", gv_sum(l, n));
            if !holds {
                return Err(Failure::Negative(String::new()));
            }
        }
        GvCommand::Otr { j, f, q, s, r } => {
            let (probing, forcing) = gv_pair_check(j, f, q, s, r);
            println!("n={} probing={probing} forcing={forcing}", j + s + r);
            if !(probing && forcing) {
                return Err(Failure::Negative(String::new()));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use clap::CommandFactory;

    use super::*;

    fn status(f: Failure) -> u8 {
        match f {
            Failure::Negative(_) => 1,
            Failure::Input(_) => 2,
            Failure::Capacity(_) => 3,
        }
    }

    #[test]
    fn errors_map_to_exit_status() {
        assert_eq!(status(CodeError::Capacity("x".into()).into()), 3);
        assert_eq!(
            status(
                CodeError::Parse {
                    line: 1,
                    msg: "x".into()
                }
                .into()
            ),
            2
        );
        assert_eq!(status(CodeError::Infeasible("x".into()).into()), 2);
        let insecure = CodeError::ForcingInsecure {
            order: 2,
            witness: vec![0],
        };
        assert_eq!(status(insecure.into()), 1);
    }

    #[test]
    fn witnesses_print_dashed() {
        assert_eq!(dashed(&[0, 4, 5]), "0-4-5");
        assert_eq!(dashed(&[]), "");
    }

    #[test]
    fn bit_strings_parse_left_to_right() {
        assert_eq!(bits("100").ok().map(|b| b.support()), Some(vec![0]));
        assert!(matches!(bits("10x"), Err(Failure::Input(_))));
    }

    #[test]
    fn table_rejects_mixed_options() {
        assert!(matches!(table(Some(3), None, None), Err(Failure::Input(_))));
    }

    #[test]
    fn arguments_parse() {
        Cli::command().debug_assert();
        let cli = Cli::try_parse_from(["maskcode", "verify", "a.ops", "--order", "2", "--oracle"])
            .unwrap();
        assert!(matches!(
            cli.command,
            Command::Verify {
                order: 2,
                oracle: true,
                forcing: None,
                ..
            }
        ));
    }
}
