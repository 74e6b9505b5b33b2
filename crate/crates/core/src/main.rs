//! Command-line front end: sequence generation, Toeplitz tools, factor and
//! frequency scans, the zeta_2 bound, and the verification suite.
//!
//! Exit codes: 0 when everything requested passed, 1 when a hard check or
//! runtime step failed, 2 on usage errors. All outputs are UTF-8 with LF
//! line endings and `.` as the decimal separator.

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use t32::analysis::{factor_set, filtered_counter, FactorMap};
use t32::error::Error;
use t32::numeration::{expand, sum_of_digits};
use t32::padic::{contraction_demo, zeta_k_at, zeta_k_sup};
use t32::substitution::{block_fixed_point, word_to_string, BlockSubstitution, SymbolStream};
use t32::toeplitz::ToeplitzPattern;
use t32::verify::{self, VerifyConfig};
use t32::words::{self, T32Backend};

#[derive(Parser)]
#[command(
    name = "t32",
    version,
    about = "Base-3/2 numeration and the Thue-Morse word t32: generators, factor analytics, filtered counters, and the dyadic spectral bound",
    after_help = "CSV columns:\n  seq      index,symbol\n  freq     N,c,k,count,density,deviation\n  zeta     s,zeta\n  emit     N,count,density\n  factors  factor,count,even,odd,max_gap"
)]
struct Cli {
    /// Prefix length for scans and sequence output.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    length: usize,

    /// Output format where applicable.
    #[arg(long, global = true, value_enum, default_value_t = Format::Raw)]
    format: Format,

    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for the partitionable scans.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    /// Seed for the randomized spectral demos.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Raw,
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Base-3/2 expansion of n: prints (n, expansion, digit sum, parity) as TSV.
    Expand {
        n: u64,
        /// Print every row from 0 up to this value instead of the single n.
        #[arg(long)]
        table: Option<u64>,
    },
    /// Prints a named word (or a fixed point from a substitution rule file).
    Seq {
        /// One of t32, t32bar, tprime, delta-t32, period-doubling-analogue,
        /// kolakoski, thue-morse-base2, slide2-t32, t32-mod - or a path to a
        /// rule file with one `block -> image` line per rule.
        name: String,
        /// Modulus for t32-mod.
        #[arg(long)]
        m: Option<u8>,
        /// Backend for t32 (dfao, block, relations).
        #[arg(long)]
        backend: Option<String>,
        /// Seed symbol for a rule-file fixed point (defaults to the first
        /// symbol of the first rule).
        #[arg(long)]
        seed_symbol: Option<u8>,
        /// Word operators applied in order: delta, complement, slide2.
        #[arg(long = "op")]
        ops: Vec<String>,
    },
    /// Toeplitz word from a hole pattern such as '01?0?10??'.
    Toeplitz {
        #[arg(long)]
        pattern: String,
        /// Print the exact letter frequencies and the complexity exponent
        /// instead of symbols.
        #[arg(long)]
        freqs: bool,
    },
    /// Factor-set scan: complexity, closure and occurrence-parity checks.
    Factors {
        #[arg(long, default_value = "t32")]
        word: String,
        /// Factor length.
        #[arg(long = "len")]
        factor_len: usize,
        /// Scanned prefix length (defaults to --length).
        #[arg(long)]
        prefix: Option<usize>,
        /// Comma-separated checks: complement, reversal, parity.
        #[arg(long, value_delimiter = ',')]
        check: Vec<String>,
        #[arg(long)]
        m: Option<u8>,
    },
    /// Filtered counter table C_n(c, k, N) with densities.
    Freq {
        #[arg(long, default_value = "t32")]
        word: String,
        /// Modulus exponent n (positions are classed mod 2^n).
        #[arg(long, default_value_t = 1)]
        mod_exp: u32,
        /// Shorthand for --format csv --out PATH.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        m: Option<u8>,
    },
    /// Samples zeta_k on a grid and certifies its supremum.
    Zeta {
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long, default_value_t = 1 << 20)]
        grid: usize,
        /// Shorthand for --format csv --out PATH (use '-' for stdout).
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Quadratic-mean contraction of the averaging operator applied twice.
    Contraction {
        #[arg(long, default_value_t = 12)]
        level: u32,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Runs the named check suite.
    Verify {
        /// Run the full suite (default when no --check is given).
        #[arg(long)]
        all: bool,
        /// Run one named check; repeatable.
        #[arg(long = "check")]
        checks: Vec<String>,
        /// Also run the experimental frequency checks.
        #[arg(long)]
        experimental: bool,
        /// Tolerance for the experimental checks.
        #[arg(long, default_value_t = 0.05)]
        tolerance: f64,
        /// Scan length for the frequency monitor.
        #[arg(long, default_value_t = 10_000_000)]
        monitor_length: usize,
        /// List available checks and exit.
        #[arg(long)]
        list: bool,
    },
    /// Running-density CSV for the symbol 0 of a word over N ranges.
    Emit {
        #[arg(long, default_value = "t32")]
        word: String,
        /// Comma-separated inclusive ranges lo:hi of prefix lengths.
        #[arg(long, default_value = "1:2000,14000:15000")]
        ranges: String,
        #[arg(long)]
        m: Option<u8>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            let usage = matches!(
                err,
                Error::UnknownWord(_)
                    | Error::InvalidParameter(_)
                    | Error::Parse(_)
                    | Error::InvalidPattern(_)
                    | Error::InvalidDigit { .. }
                    | Error::EmptyWindow { .. }
            );
            if usage {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), Error> {
    match out {
        Some(path) if path.as_os_str() != "-" => std::fs::write(path, content)
            .map_err(|e| Error::InvalidParameter(format!("cannot write {}: {e}", path.display()))),
        _ => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Error::InvalidParameter(format!("stdout: {e}")))
        }
    }
}

/// Resolves a word argument: a catalog name, `t32` with a backend choice,
/// or a path to a substitution rule file.
fn stream_for(
    name: &str,
    m: Option<u8>,
    backend: Option<&str>,
    seed_symbol: Option<u8>,
) -> Result<SymbolStream, Error> {
    if name == "t32" {
        let backend = match backend.unwrap_or("block") {
            "dfao" => T32Backend::Dfao,
            "block" => T32Backend::Block,
            "relations" => T32Backend::Relations,
            other => {
                return Err(Error::InvalidParameter(format!("unknown t32 backend {other:?}")))
            }
        };
        return Ok(words::t32(backend));
    }
    if std::path::Path::new(name).is_file() {
        let text = std::fs::read_to_string(name)
            .map_err(|e| Error::Parse(format!("cannot read {name}: {e}")))?;
        let beta = BlockSubstitution::parse(&text)?;
        let seed = match seed_symbol {
            Some(s) => s,
            None => first_rule_seed(&text)?,
        };
        return Ok(block_fixed_point(beta, seed));
    }
    words::by_name(name, m)
}

fn apply_ops(stream: SymbolStream, ops: &[String]) -> Result<SymbolStream, Error> {
    let mut current = stream;
    for op in ops {
        current = match op.as_str() {
            "delta" => words::delta(current)?,
            "complement" => words::complement(current)?,
            "slide2" => words::slide2(current)?,
            other => return Err(Error::InvalidParameter(format!("unknown op {other:?}"))),
        };
    }
    Ok(current)
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Expand { n, table } => {
            let mut out = String::new();
            let last = table.unwrap_or(n);
            let first = if table.is_some() { 0 } else { n };
            for i in first..=last {
                let e = expand(i);
                let s = sum_of_digits(i);
                writeln!(out, "{i}\t{e}\t{s}\t{}", s % 2).unwrap();
            }
            emit(&cli.out, &out)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Seq { name, m, backend, seed_symbol, ops } => {
            let base = stream_for(&name, m, backend.as_deref(), seed_symbol)?;
            let mut stream = apply_ops(base, &ops)?;
            let prefix = stream.prefix(cli.length)?;
            let content = match cli.format {
                Format::Raw => {
                    let mut s = word_to_string(prefix);
                    s.push('\n');
                    s
                }
                Format::Csv => {
                    let mut s = String::from("index,symbol\n");
                    for (i, &a) in prefix.iter().enumerate() {
                        writeln!(s, "{i},{a}").unwrap();
                    }
                    s
                }
                Format::Json => {
                    let mut s =
                        serde_json::to_string(&prefix.iter().map(|&a| a as u32).collect::<Vec<_>>())
                            .expect("serializable");
                    s.push('\n');
                    s
                }
            };
            emit(&cli.out, &content)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Toeplitz { pattern, freqs } => {
            let pat = ToeplitzPattern::parse(&pattern)?;
            let content = if freqs {
                let mut s = String::new();
                writeln!(s, "pattern\t{pattern}").unwrap();
                writeln!(s, "p\t{}", pat.p()).unwrap();
                writeln!(s, "q\t{}", pat.q()).unwrap();
                for a in 0..pat.alphabet_size() {
                    writeln!(s, "freq({a})\t{}", pat.letter_frequency(a)).unwrap();
                }
                match pat.complexity_exponent() {
                    Ok(r) => writeln!(s, "complexity_exponent\t{r:.6}").unwrap(),
                    Err(_) => writeln!(s, "complexity_exponent\tundefined (no holes)").unwrap(),
                }
                s
            } else {
                let mut stream = pat.stream();
                let prefix = stream.prefix(cli.length)?;
                match cli.format {
                    Format::Csv => {
                        let mut s = String::from("index,symbol\n");
                        for (i, &a) in prefix.iter().enumerate() {
                            writeln!(s, "{i},{a}").unwrap();
                        }
                        s
                    }
                    _ => {
                        let mut s = word_to_string(prefix);
                        s.push('\n');
                        s
                    }
                }
            };
            emit(&cli.out, &content)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Factors { word, factor_len, prefix, check, m } => {
            let mut stream = stream_for(&word, m, None, None)?;
            let prefix_len = prefix.unwrap_or(cli.length);
            let fs = factor_set(&mut stream, factor_len, prefix_len)?;
            let mut failed = false;
            let content = match cli.format {
                Format::Csv => {
                    let mut s = String::from("factor,count,even,odd,max_gap\n");
                    let mut factors: Vec<_> = fs.factors().collect();
                    factors.sort();
                    for f in factors {
                        let pos = fs.positions(f)?;
                        let (even, odd) = fs.parity_occurrences(f)?;
                        let gap = fs
                            .recurrence_gap(f)
                            .map(|g| g.to_string())
                            .unwrap_or_default();
                        writeln!(s, "{},{},{even},{odd},{gap}", word_to_string(f), pos.len())
                            .unwrap();
                    }
                    s
                }
                _ => {
                    let mut s = String::new();
                    writeln!(s, "word\t{word}").unwrap();
                    writeln!(s, "factor_length\t{factor_len}").unwrap();
                    writeln!(s, "prefix\t{prefix_len}").unwrap();
                    writeln!(s, "count\t{}", fs.count()).unwrap();
                    writeln!(s, "saturated\t{}", fs.is_saturated()).unwrap();
                    for c in &check {
                        match c.as_str() {
                            "complement" | "reversal" => {
                                let map = if c == "complement" {
                                    FactorMap::Complement
                                } else {
                                    FactorMap::Reversal
                                };
                                let report = fs.closed_under(map)?;
                                failed |= !report.closed;
                                let witnesses = if report.witnesses.is_empty() {
                                    String::new()
                                } else {
                                    format!(
                                        "\tmissing images of: {}",
                                        report
                                            .witnesses
                                            .iter()
                                            .take(5)
                                            .map(|w| word_to_string(w))
                                            .collect::<Vec<_>>()
                                            .join(" ")
                                    )
                                };
                                writeln!(s, "closed_under_{c}\t{}{witnesses}", report.closed)
                                    .unwrap();
                            }
                            "parity" => {
                                let bad: Vec<String> = fs
                                    .factors()
                                    .filter_map(|f| {
                                        let (e, o) = fs.parity_occurrences(f).ok()?;
                                        (e == 0 || o == 0).then(|| word_to_string(f))
                                    })
                                    .collect();
                                failed |= !bad.is_empty();
                                if bad.is_empty() {
                                    writeln!(s, "both_parities\ttrue").unwrap();
                                } else {
                                    writeln!(
                                        s,
                                        "both_parities\tfalse\tsingle-parity: {}",
                                        bad.join(" ")
                                    )
                                    .unwrap();
                                }
                            }
                            other => {
                                return Err(Error::InvalidParameter(format!(
                                    "unknown check {other:?}"
                                )))
                            }
                        }
                    }
                    s
                }
            };
            emit(&cli.out, &content)?;
            Ok(if failed { ExitCode::from(1) } else { ExitCode::SUCCESS })
        }

        Command::Freq { word, mod_exp, csv, m } => {
            let mut stream = stream_for(&word, m, None, None)?;
            let table = filtered_counter(&mut stream, mod_exp, cli.length)?;
            let mut s = String::from("N,c,k,count,density,deviation\n");
            for e in table.densities() {
                writeln!(
                    s,
                    "{},{},{},{},{:.10},{:.10}",
                    cli.length, e.symbol, e.residue, e.count, e.density, e.deviation
                )
                .unwrap();
            }
            let out = csv.or(cli.out);
            emit(&out, &s)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Zeta { k, grid, csv } => {
            let sup = zeta_k_sup(k, grid)?;
            let bound = 20.0 / 27.0;
            let summary = format!(
                "# zeta_{k}: grid_max {:.12} at s = {:.9}, certified_sup <= {:.12}, 20/27 = {:.12}, certified < 20/27: {}\n",
                sup.grid_max,
                sup.argmax,
                sup.certified_upper_bound,
                bound,
                sup.certified_upper_bound < bound,
            );
            if csv.is_some() || cli.format == Format::Csv {
                let mut s = String::from("s,zeta\n");
                for i in 0..grid {
                    let x = i as f64 / grid as f64;
                    writeln!(s, "{x:.10},{:.12}", zeta_k_at(k, x)).unwrap();
                }
                s.push_str(&summary);
                let out = csv.filter(|p| p.as_os_str() != "-").or(cli.out);
                emit(&out, &s)?;
            } else {
                emit(&cli.out, &summary)?;
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Contraction { level, trials } => {
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let report = contraction_demo(level, trials, &mut rng)?;
            let ok = report.worst_ratio <= report.bound + 1e-12;
            let content = format!(
                "level\t{}\ntrials\t{}\nworst_ratio\t{:.12}\nbound_20_27\t{:.12}\nwithin_bound\t{ok}\n",
                report.level, report.trials, report.worst_ratio, report.bound
            );
            emit(&cli.out, &content)?;
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }

        Command::Verify { all, checks, experimental, tolerance, monitor_length, list } => {
            if list {
                let mut s = String::new();
                for name in verify::check_names(true) {
                    writeln!(s, "{name}").unwrap();
                }
                emit(&cli.out, &s)?;
                return Ok(ExitCode::SUCCESS);
            }
            let config = VerifyConfig {
                length: cli.length,
                monitor_length,
                seed: cli.seed,
                threads: cli.threads.max(1),
                experimental_tolerance: tolerance,
                experimental,
            };
            let which = if all { Vec::new() } else { checks };
            let report = verify::run(&config, &which)?;
            let content = match cli.format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&report).expect("serializable");
                    s.push('\n');
                    s
                }
                _ => {
                    let mut s = String::new();
                    for c in &report.checks {
                        writeln!(
                            s,
                            "{} {:<22} [{}] {} ({} ms)",
                            if c.passed { "PASS" } else { "FAIL" },
                            c.name,
                            match c.category {
                                verify::Category::Hard => "hard",
                                verify::Category::Soft => "soft",
                                verify::Category::Experimental => "experimental",
                            },
                            c.details,
                            c.elapsed_ms
                        )
                        .unwrap();
                        for w in c.witnesses.iter().take(5) {
                            writeln!(s, "     witness: {w}").unwrap();
                        }
                    }
                    writeln!(
                        s,
                        "{}: {} checks, {} hard failure(s)",
                        if report.all_hard_passed() { "OK" } else { "FAILED" },
                        report.checks.len(),
                        report.hard_failures
                    )
                    .unwrap();
                    s
                }
            };
            emit(&cli.out, &content)?;
            Ok(if report.all_hard_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }

        Command::Emit { word, ranges, m } => {
            let parsed = parse_ranges(&ranges)?;
            let max_n = parsed.iter().map(|&(_, hi)| hi).max().unwrap_or(0);
            let mut stream = stream_for(&word, m, None, None)?;
            let prefix = stream.prefix(max_n)?;
            // running count of the symbol 0
            let mut running = vec![0u64; max_n + 1];
            for i in 0..max_n {
                running[i + 1] = running[i] + u64::from(prefix[i] == 0);
            }
            let mut s = String::from("N,count,density\n");
            for (lo, hi) in parsed {
                for (n, &count) in running.iter().enumerate().take(hi + 1).skip(lo) {
                    writeln!(s, "{n},{count},{:.10}", count as f64 / n as f64).unwrap();
                }
            }
            emit(&cli.out, &s)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn first_rule_seed(text: &str) -> Result<u8, Error> {
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(d) = line.chars().next().and_then(|c| c.to_digit(10)) {
            return Ok(d as u8);
        }
    }
    Err(Error::Parse("no rule line found for the default seed".into()))
}

fn parse_ranges(text: &str) -> Result<Vec<(usize, usize)>, Error> {
    let mut out = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (lo, hi) = part
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("range {part:?} is not lo:hi")))?;
        let lo: usize = lo
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad range bound {lo:?}")))?;
        let hi: usize = hi
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad range bound {hi:?}")))?;
        if lo == 0 || hi < lo {
            return Err(Error::InvalidParameter(format!(
                "range {part:?} must satisfy 1 <= lo <= hi"
            )));
        }
        out.push((lo, hi));
    }
    Ok(out)
}
