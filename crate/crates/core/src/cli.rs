//! Command-line surface: parking, enumeration, censuses, constructions, and
//! the verification suites.
//!
//! Exit codes: 0 success, 1 domain failure, 2 usage or parse error, 3 scan
//! bound exceeded. All output is deterministic; identical invocations print
//! byte-identical text regardless of `--jobs`.

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::census::{self, AdmissibleSets, CensusTable, DisplacementFibers};
use crate::construct::{self, ParenString, UnluckyChoiceCode};
use crate::enumeration::{self, Filter, DEFAULT_SCAN_CEILING};
use crate::model::{DisplacementComposition, PreferenceWord, StirlingWord};
use crate::parking::{self, ParkError};
use crate::stats::{self, DEFAULT_GESSEL_SEO_CEILING};
use crate::verify::{self, Suite};

/// Environment variable overriding the default enumeration ceiling.
pub const MAX_N_ENV: &str = "STIRLING_MAX_N";

#[derive(Parser)]
#[command(
    name = "stirling",
    about = "Stirling permutations as parking functions: statistics, censuses, constructions",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Park a preference word and print the outcome as JSON.
    Park {
        /// Word text: "3,3,1,4,4,2,2,1", "3 3 1 4 4 2 2 1", or "33144221".
        word: String,
    },
    /// Stream Stirling words of order n, one per line.
    Enumerate(EnumerateArgs),
    /// Censuses and polynomials from exhaustive scans.
    Stats {
        #[command(subcommand)]
        kind: StatsCommand,
    },
    /// Build words with prescribed lucky behavior.
    Construct {
        #[command(subcommand)]
        kind: ConstructCommand,
    },
    /// Run a verification suite and report per-check results.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct EnumerateArgs {
    /// Order n.
    #[arg(long)]
    n: u32,
    /// all | extremely-lucky | extremely-unlucky | lucky-count=K | lucky-set=S.
    #[arg(long, default_value = "all")]
    filter: String,
    /// Half-open rank range "A..B" to decode instead of all of Q_n.
    #[arg(long, value_name = "A..B")]
    rank_range: Option<String>,
    #[arg(long, value_enum, default_value_t = TextFormat::Text)]
    format: TextFormat,
    /// Proceed past the enumeration ceiling.
    #[arg(long)]
    force: bool,
}

#[derive(Subcommand)]
enum StatsCommand {
    /// Coefficients of the lucky-statistic polynomial over Q_n.
    LuckyPoly(ScanArgs),
    /// All lucky sets realized by Q_n, with witnesses.
    Admissible {
        #[command(flatten)]
        scan: ScanArgs,
        /// Only sets of this cardinality.
        #[arg(long)]
        size: Option<usize>,
    },
    /// Displacement compositions of Q_n and their fibers.
    DispCensus(ScanArgs),
    /// Compare the simulated lucky distribution over all parking functions
    /// of length n with the closed-form product.
    GesselSeo {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value_t = TableFormat::Text)]
        format: TableFormat,
        /// Proceed past the length ceiling.
        #[arg(long)]
        force: bool,
    },
}

#[derive(Args)]
struct ScanArgs {
    /// Order n.
    #[arg(long)]
    n: u32,
    #[arg(long, value_enum, default_value_t = TableFormat::Text)]
    format: TableFormat,
    /// Render polynomials exactly as in the reference tables.
    #[arg(long)]
    paper_style: bool,
    /// Number of parallel scan workers (results do not depend on this).
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Proceed past the enumeration ceiling.
    #[arg(long)]
    force: bool,
}

#[derive(Subcommand)]
enum ConstructCommand {
    /// Extremely unlucky word from a choice code (t_n,...,t_2).
    Unlucky {
        #[arg(long)]
        n: u32,
        /// Comma-separated choices, t_n first.
        #[arg(long)]
        code: String,
        #[arg(long)]
        check: bool,
    },
    /// Extremely lucky word matched with a balanced parenthesization.
    FromParens {
        /// ASCII parentheses, e.g. "()()(()(()))".
        parens: String,
        #[arg(long)]
        check: bool,
    },
    /// Extremely lucky word rebuilt from its displacement composition.
    FromDisvec {
        /// Composition text, e.g. "0,0,0,1,3,0,0,5,7,9".
        disvec: String,
        #[arg(long)]
        check: bool,
    },
    /// Witness word realizing a prescribed lucky set.
    Witness {
        #[arg(long, value_enum)]
        kind: WitnessKind,
        #[arg(long)]
        n: u32,
        /// Second lucky car (two-element witnesses only).
        #[arg(long)]
        i: Option<u32>,
        #[arg(long)]
        check: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum WitnessKind {
    /// Lucky set {1, i}.
    TwoElement,
    /// Lucky set {1, n-1, 2n-2} for even n.
    ThreeElement,
}

#[derive(Args)]
struct VerifyArgs {
    /// tables | theorems | all.
    #[arg(long, default_value = "all")]
    suite: String,
    /// Clamp every check to orders at most this.
    #[arg(long)]
    max_n: Option<u32>,
    #[arg(long, value_enum, default_value_t = TableFormat::Text)]
    format: TableFormat,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TextFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Text,
    Csv,
    Json,
}

#[derive(Debug)]
enum Failure {
    /// Exit 1: a domain-level refusal (parking failure, bad construction).
    Domain(String),
    /// Exit 2: unusable input.
    Usage(String),
    /// Exit 3: scan bound exceeded without --force.
    Bound(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Domain(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Bound(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Domain(m) | Failure::Usage(m) | Failure::Bound(m) => m,
        }
    }
}

type CmdResult = Result<(), Failure>;

/// Parses argv and runs; returns the process exit code.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };

    let outcome = match cli.command {
        Command::Park { word } => cmd_park(&word),
        Command::Enumerate(args) => cmd_enumerate(args),
        Command::Stats { kind } => cmd_stats(kind),
        Command::Construct { kind } => cmd_construct(kind),
        Command::Verify(args) => cmd_verify(args),
    };

    match outcome {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("error: {}", f.message());
            f.code()
        }
    }
}

fn scan_ceiling() -> Result<u32, Failure> {
    match std::env::var(MAX_N_ENV) {
        Ok(text) => text.trim().parse().map_err(|_| {
            Failure::Usage(format!(
                "{MAX_N_ENV} must be a nonnegative integer, got {text:?}"
            ))
        }),
        Err(_) => Ok(DEFAULT_SCAN_CEILING),
    }
}

fn check_scan_bound(n: u32, force: bool) -> Result<(), Failure> {
    let ceiling = scan_ceiling()?;
    if n > ceiling && !force {
        return Err(Failure::Bound(format!(
            "order {n} exceeds the scan ceiling {ceiling}; pass --force to proceed"
        )));
    }
    Ok(())
}

fn parse_word(text: &str) -> Result<PreferenceWord, Failure> {
    text.parse()
        .map_err(|e| Failure::Usage(format!("cannot parse word {text:?}: {e}")))
}

fn cmd_park(text: &str) -> CmdResult {
    let word = parse_word(text)?;
    match parking::park(&word) {
        Ok(outcome) => {
            let json = serde_json::json!({
                "word": word.as_slice(),
                "spots": outcome.spots(),
                "lucky": outcome.lucky().members(),
                "disvec": outcome.disvec().parts(),
                "total": outcome.total_displacement(),
            });
            println!("{json}");
            Ok(())
        }
        Err(e @ ParkError::Failure { car }) => Err(Failure::Domain(format!(
            "{e} (word is not a parking function; first stuck car: {car})"
        ))),
        Err(e) => Err(Failure::Domain(e.to_string())),
    }
}

fn parse_rank_range(text: &str, n: u32) -> Result<(u64, u64), Failure> {
    let (a, b) = text
        .split_once("..")
        .ok_or_else(|| Failure::Usage(format!("rank range must look like A..B, got {text:?}")))?;
    let start: u64 = a
        .parse()
        .map_err(|_| Failure::Usage(format!("bad range start {a:?}")))?;
    let end: u64 = b
        .parse()
        .map_err(|_| Failure::Usage(format!("bad range end {b:?}")))?;
    let size = enumeration::double_factorial_odd(n)
        .ok_or_else(|| Failure::Usage(format!("order {n} exceeds the 64-bit rank space")))?;
    if start > end || end > size {
        return Err(Failure::Usage(format!(
            "range {start}..{end} does not fit inside 0..{size}"
        )));
    }
    Ok((start, end))
}

fn cmd_enumerate(args: EnumerateArgs) -> CmdResult {
    check_scan_bound(args.n, args.force)?;
    let filter: Filter = args
        .filter
        .parse()
        .map_err(|e| Failure::Usage(format!("{e}")))?;
    filter
        .check_against(args.n)
        .map_err(|e| Failure::Usage(e.to_string()))?;

    let (start, end) = match &args.rank_range {
        Some(text) => parse_rank_range(text, args.n)?,
        None => (
            0,
            enumeration::double_factorial_odd(args.n)
                .ok_or_else(|| Failure::Usage("order exceeds the 64-bit rank space".into()))?,
        ),
    };
    let words = enumeration::range(args.n, start, end)
        .map_err(|e| Failure::Usage(e.to_string()))?
        .filter(|w| filter.matches(w));

    match args.format {
        TextFormat::Text => {
            for w in words {
                println!("{w}");
            }
        }
        TextFormat::Json => {
            let items: Vec<serde_json::Value> =
                words.map(|w| serde_json::json!(w.as_slice())).collect();
            println!("{}", serde_json::Value::Array(items));
        }
    }
    Ok(())
}

fn cmd_stats(kind: StatsCommand) -> CmdResult {
    match kind {
        StatsCommand::LuckyPoly(scan) => {
            check_scan_bound(scan.n, scan.force)?;
            let poly = stats::lucky_polynomial_with(scan.n, u32::MAX, scan.jobs)
                .map_err(|e| Failure::Domain(e.to_string()))?;
            let report = stats::unimodality_report(&poly);
            if scan.paper_style {
                println!("{}", poly.paper_style());
                return Ok(());
            }
            match scan.format {
                TableFormat::Text => {
                    println!("T_{}(q) = {}", scan.n, poly.paper_style());
                    match report.mode {
                        Some(mode) => println!(
                            "unimodal: {} (largest coefficient at k = {mode})",
                            report.unimodal
                        ),
                        None => println!("unimodal: {} (no coefficients)", report.unimodal),
                    }
                }
                TableFormat::Csv => {
                    println!("k,count");
                    for k in 1..=scan.n {
                        println!("{k},{}", poly.coefficient(k));
                    }
                }
                TableFormat::Json => {
                    let mut json = poly.to_json();
                    json["unimodal"] = serde_json::json!(report.unimodal);
                    json["mode"] = serde_json::json!(report.mode);
                    println!("{json}");
                }
            }
            Ok(())
        }
        StatsCommand::Admissible { scan, size } => {
            check_scan_bound(scan.n, scan.force)?;
            let table = CensusTable::<AdmissibleSets>::scan_parallel(scan.n, scan.jobs)
                .map_err(|e| Failure::Domain(e.to_string()))?;
            let rows: Vec<_> = table
                .payload()
                .by_size()
                .into_iter()
                .filter(|(set, _)| size.is_none_or(|s| set.len() == s))
                .collect();
            match scan.format {
                TableFormat::Text => {
                    for (set, _) in rows {
                        println!("{set}");
                    }
                }
                TableFormat::Csv => {
                    println!("set,size,count,witness");
                    for (set, rec) in rows {
                        println!("\"{set}\",{},{},\"{}\"", set.len(), rec.count, rec.witness);
                    }
                }
                TableFormat::Json => {
                    let items: Vec<_> = rows
                        .into_iter()
                        .map(|(set, rec)| {
                            serde_json::json!({
                                "set": set.members(),
                                "size": set.len(),
                                "count": rec.count,
                                "witness": rec.witness.as_slice(),
                            })
                        })
                        .collect();
                    let json = serde_json::json!({
                        "n": table.order(),
                        "scanned": table.scanned(),
                        "sets": items,
                    });
                    println!("{json}");
                }
            }
            Ok(())
        }
        StatsCommand::DispCensus(scan) => {
            check_scan_bound(scan.n, scan.force)?;
            let table = CensusTable::<DisplacementFibers>::scan_parallel(scan.n, scan.jobs)
                .map_err(|e| Failure::Domain(e.to_string()))?;
            match scan.format {
                TableFormat::Text => {
                    print!("{}", census::render_displacement_census(&table));
                }
                TableFormat::Csv => {
                    println!("composition,nonzero_parts,count,words");
                    for (comp, words) in table.payload().iter() {
                        let joined: Vec<String> =
                            words.iter().map(|(_, w)| w.to_string()).collect();
                        println!(
                            "\"{comp}\",{},{},\"{}\"",
                            comp.nonzero_parts(),
                            words.len(),
                            joined.join("|")
                        );
                    }
                }
                TableFormat::Json => {
                    let fibers: Vec<_> = table
                        .payload()
                        .iter()
                        .map(|(comp, words)| {
                            serde_json::json!({
                                "composition": comp.parts(),
                                "nonzero_parts": comp.nonzero_parts(),
                                "words": words.iter().map(|(_, w)| w.as_slice()).collect::<Vec<_>>(),
                            })
                        })
                        .collect();
                    let hist: serde_json::Map<String, serde_json::Value> = table
                        .payload()
                        .nonzero_part_histogram()
                        .into_iter()
                        .map(|(k, v)| (k.to_string(), serde_json::Value::from(v)))
                        .collect();
                    let json = serde_json::json!({
                        "n": table.order(),
                        "scanned": table.scanned(),
                        "fibers": fibers,
                        "nonzero_part_histogram": hist,
                    });
                    println!("{json}");
                }
            }
            Ok(())
        }
        StatsCommand::GesselSeo { n, format, force } => {
            let ceiling = if force {
                u32::MAX
            } else {
                DEFAULT_GESSEL_SEO_CEILING
            };
            let check = match stats::gessel_seo_check(n, ceiling) {
                Ok(check) => check,
                Err(stats::StatsError::BoundExceeded { n, ceiling }) => {
                    return Err(Failure::Bound(format!(
                        "length {n} exceeds the cross-check ceiling {ceiling}; pass --force to proceed"
                    )))
                }
                Err(e) => return Err(Failure::Domain(e.to_string())),
            };
            match format {
                TableFormat::Text | TableFormat::Csv => {
                    println!("n = {n}");
                    println!("simulated:   {}", check.computed);
                    println!("closed form: {}", check.closed_form);
                    println!("parking functions: {}", check.computed.sum());
                    println!("equal: {}", check.equal);
                }
                TableFormat::Json => {
                    let json = serde_json::json!({
                        "n": n,
                        "computed": check.computed.to_json(),
                        "closed_form": check.closed_form.to_json(),
                        "equal": check.equal,
                    });
                    println!("{json}");
                }
            }
            if check.equal {
                Ok(())
            } else {
                Err(Failure::Domain(
                    "simulated distribution disagrees with the closed form".into(),
                ))
            }
        }
    }
}

fn print_word(w: &StirlingWord, check: bool) {
    println!("{w}");
    if check {
        println!("lucky: {}", parking::lucky_set(w));
    }
}

fn cmd_construct(kind: ConstructCommand) -> CmdResult {
    match kind {
        ConstructCommand::Unlucky { n, code, check } => {
            let digits: Result<Vec<u32>, _> = code
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(str::parse)
                .collect();
            let digits =
                digits.map_err(|_| Failure::Usage(format!("cannot parse code {code:?}")))?;
            let code =
                UnluckyChoiceCode::new(n, digits).map_err(|e| Failure::Domain(e.to_string()))?;
            print_word(&construct::build_extremely_unlucky(&code), check);
            Ok(())
        }
        ConstructCommand::FromParens { parens, check } => {
            let p: ParenString = parens
                .parse()
                .map_err(|e| Failure::Domain(format!("{e}")))?;
            print_word(&construct::parens_to_extremely_lucky(&p), check);
            Ok(())
        }
        ConstructCommand::FromDisvec { disvec, check } => {
            let m: DisplacementComposition =
                disvec.parse().map_err(|e| Failure::Usage(format!("{e}")))?;
            let w = construct::extremely_lucky_from_disvec(&m)
                .map_err(|e| Failure::Domain(e.to_string()))?;
            print_word(&w, check);
            Ok(())
        }
        ConstructCommand::Witness { kind, n, i, check } => {
            let w = match kind {
                WitnessKind::TwoElement => {
                    let i =
                        i.ok_or_else(|| Failure::Usage("two-element witnesses need --i".into()))?;
                    construct::witness_two_element(n, i)
                        .map_err(|e| Failure::Domain(e.to_string()))?
                }
                WitnessKind::ThreeElement => {
                    construct::witness_1_n1_2n2(n).map_err(|e| Failure::Domain(e.to_string()))?
                }
            };
            print_word(&w, check);
            Ok(())
        }
    }
}

fn cmd_verify(args: VerifyArgs) -> CmdResult {
    let suite: Suite = args.suite.parse().map_err(Failure::Usage)?;
    let report = verify::run_suite(suite, args.max_n, args.jobs.max(1));
    match args.format {
        TableFormat::Text | TableFormat::Csv => println!("{report}"),
        TableFormat::Json => println!("{}", report.to_json()),
    }
    if report.all_passed() {
        Ok(())
    } else {
        Err(Failure::Domain("one or more checks failed".into()))
    }
}
