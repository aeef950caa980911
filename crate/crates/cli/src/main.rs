use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context as _, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use sgkat::fuzz::{crosscheck, GenConfig};
use sgkat::oracle::{default_bound, inclusion_bounded, Inclusion};
use sgkat::proof::{export_dot, export_json, import_json, render_ascii, stats};
use sgkat::search::{decide_with_stats, equiv, Direction, Equivalence, Outcome, SearchConfig};
use sgkat::syntax::while_height;
use sgkat::{check, parse_expr, parse_test, Alphabet, AtomSet, Expr, Proof, Verdict};

/// Decide inclusion and equivalence of GKAT expressions with cyclic proofs.
#[derive(Parser)]
#[command(name = "sgkat", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an expression and print it back.
    Parse {
        #[command(flatten)]
        alphabet: AlphabetArgs,
        expr: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Decide whether every guarded string of LEFT (starting in the guard) is one of RIGHT.
    Decide {
        #[command(flatten)]
        alphabet: AlphabetArgs,
        #[command(flatten)]
        search: SearchArgs,
        left: String,
        right: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Like decide, but print the proof certificate.
    Prove {
        #[command(flatten)]
        alphabet: AlphabetArgs,
        #[command(flatten)]
        search: SearchArgs,
        left: String,
        right: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Write the certificate here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decide equivalence via inclusion in both directions.
    Equiv {
        #[command(flatten)]
        alphabet: AlphabetArgs,
        #[command(flatten)]
        search: SearchArgs,
        left: String,
        right: String,
    },
    /// Check a JSON proof certificate.
    Check { file: PathBuf },
    /// Look for a counterexample with at most --bound programs.
    Oracle {
        #[command(flatten)]
        alphabet: AlphabetArgs,
        left: String,
        right: String,
        #[arg(long)]
        guard: Option<String>,
        /// Defaults to (|T_e|+1)*(|T_f|+1).
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Cross-check proof search against the oracle on random pairs.
    Fuzz {
        #[command(flatten)]
        alphabet: AlphabetArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 12)]
        size: usize,
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Print statistics of a JSON proof certificate.
    Stats {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Args)]
struct AlphabetArgs {
    /// Primitive tests, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    tests: Vec<String>,
    /// Primitive programs, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    progs: Vec<String>,
}

impl AlphabetArgs {
    fn build(&self) -> Result<Alphabet> {
        Ok(Alphabet::new(&self.tests, &self.progs)?)
    }
}

#[derive(Args)]
struct SearchArgs {
    /// Restrict the first atom to this test (default: all atoms).
    #[arg(long)]
    guard: Option<String>,
    /// Disable k0. Verdicts are experimental.
    #[arg(long)]
    no_k0: bool,
    /// Print one line per search step to stderr.
    #[arg(long)]
    trace: bool,
}

impl SearchArgs {
    fn config(&self) -> SearchConfig {
        SearchConfig {
            enable_k0: !self.no_k0,
            trace: self.trace,
            ..SearchConfig::default()
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

fn expr(text: &str, al: &Alphabet) -> Result<Expr> {
    parse_expr(text, al).with_context(|| format!("in `{text}`"))
}

fn guard(g: Option<&str>, al: &Alphabet) -> Result<AtomSet> {
    match g {
        None => Ok(AtomSet::full(al.test_count())),
        Some(t) => {
            let b = parse_test(t, al).with_context(|| format!("in guard `{t}`"))?;
            Ok(AtomSet::of_test(al.test_count(), &b))
        }
    }
}

fn read_proof(path: &PathBuf) -> Result<Proof> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    import_json(&text).with_context(|| format!("loading {}", path.display()))
}

/// Search recurses once per proof step; give it room.
fn on_big_stack<T: Send + 'static>(f: impl FnOnce() -> T + Send + 'static) -> T {
    std::thread::Builder::new()
        .stack_size(512 << 20)
        .spawn(f)
        .expect("spawn search thread")
        .join()
        .expect("search thread panicked")
}

fn run_search(
    al: &Alphabet,
    args: &SearchArgs,
    left: &str,
    right: &str,
) -> Result<(Alphabet, Outcome)> {
    let e = expr(left, al)?;
    let f = expr(right, al)?;
    let a = guard(args.guard.as_deref(), al)?;
    let cfg = args.config();
    let al2 = al.clone();
    let out = on_big_stack(move || decide_with_stats(&e, &f, &a, &al2, &cfg))?;
    for line in &out.trace {
        eprintln!("{line}");
    }
    Ok((al.clone(), out))
}

fn prefix(args: &SearchArgs) -> &'static str {
    if args.no_k0 {
        "EXPERIMENTAL "
    } else {
        ""
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Parse {
            alphabet,
            expr: text,
            format,
        } => {
            let al = alphabet.build()?;
            let e = expr(&text, &al)?;
            let pretty = e.display(&al).to_string();
            match format {
                Format::Json => println!(
                    "{}",
                    serde_json::json!({"expr": pretty, "size": e.size(), "while_height": while_height(&e)})
                ),
                _ => println!("{pretty}"),
            }
            Ok(0)
        }
        Command::Decide {
            alphabet,
            search,
            left,
            right,
            format,
        } => {
            let al = alphabet.build()?;
            let (al, out) = run_search(&al, &search, &left, &right)?;
            let pre = prefix(&search);
            let (code, json) = match &out.verdict {
                Verdict::Valid(p) => {
                    if format != Format::Json {
                        println!("{pre}valid");
                    }
                    (
                        0,
                        serde_json::json!({"verdict": "valid", "nodes": p.nodes.len(), "backedges": p.backedge_count()}),
                    )
                }
                Verdict::Invalid { witness, .. } => {
                    let w = witness.to_text(&al);
                    if format != Format::Json {
                        println!("{pre}invalid\nwitness: {w}");
                    }
                    (1, serde_json::json!({"verdict": "invalid", "witness": w}))
                }
                Verdict::Unproved { .. } => {
                    if format != Format::Json {
                        println!("{pre}unproved");
                    }
                    (1, serde_json::json!({"verdict": "unproved"}))
                }
            };
            if format == Format::Json {
                let mut json = json;
                json["experimental"] = serde_json::json!(search.no_k0);
                println!("{json}");
            }
            Ok(code)
        }
        Command::Prove {
            alphabet,
            search,
            left,
            right,
            format,
            output,
        } => {
            let al = alphabet.build()?;
            let (al, out) = run_search(&al, &search, &left, &right)?;
            match out.verdict {
                Verdict::Valid(p) => {
                    let text = match format {
                        Format::Json => export_json(&p) + "\n",
                        Format::Dot => export_dot(&p),
                        Format::Text => render_ascii(&p),
                    };
                    match output {
                        Some(path) => fs::write(&path, text)
                            .with_context(|| format!("writing {}", path.display()))?,
                        None => print!("{text}"),
                    }
                    if search.no_k0 {
                        eprintln!("EXPERIMENTAL: proof found without k0");
                    }
                    Ok(0)
                }
                Verdict::Invalid { witness, .. } => {
                    println!(
                        "{}invalid\nwitness: {}",
                        prefix(&search),
                        witness.to_text(&al)
                    );
                    Ok(1)
                }
                Verdict::Unproved { .. } => {
                    println!("{}unproved", prefix(&search));
                    Ok(1)
                }
            }
        }
        Command::Equiv {
            alphabet,
            search,
            left,
            right,
        } => {
            let al = alphabet.build()?;
            let e = expr(&left, &al)?;
            let f = expr(&right, &al)?;
            let a = guard(search.guard.as_deref(), &al)?;
            let cfg = search.config();
            let al2 = al.clone();
            let res = on_big_stack(move || equiv(&e, &f, &a, &al2, &cfg))?;
            let pre = prefix(&search);
            let dir = |d: Direction| match d {
                Direction::LeftToRight => "left is not included in right",
                Direction::RightToLeft => "right is not included in left",
            };
            match res {
                Equivalence::Equivalent(..) => {
                    println!("{pre}equivalent");
                    Ok(0)
                }
                Equivalence::Inequivalent { direction, witness } => {
                    println!(
                        "{pre}inequivalent ({})\nwitness: {}",
                        dir(direction),
                        witness.to_text(&al)
                    );
                    Ok(1)
                }
                Equivalence::Unproved { direction } => {
                    println!("{pre}unproved ({})", dir(direction));
                    Ok(1)
                }
            }
        }
        Command::Check { file } => {
            let p = read_proof(&file)?;
            match check(&p) {
                Ok(()) => {
                    println!("OK");
                    Ok(0)
                }
                Err(errs) => {
                    for e in errs {
                        println!("{e}");
                    }
                    Ok(1)
                }
            }
        }
        Command::Oracle {
            alphabet,
            left,
            right,
            guard: g,
            bound,
        } => {
            let al = alphabet.build()?;
            let e = expr(&left, &al)?;
            let f = expr(&right, &al)?;
            let a = guard(g.as_deref(), &al)?;
            let k = bound.unwrap_or_else(|| default_bound(&e, &f));
            match inclusion_bounded(&e, &f, &a, k, &al)? {
                Inclusion::Ok { bound } => {
                    println!("ok: no counterexample with at most {bound} programs");
                    Ok(0)
                }
                Inclusion::Counterexample(w) => {
                    println!("counterexample: {}", w.to_text(&al));
                    Ok(1)
                }
            }
        }
        Command::Fuzz {
            alphabet,
            seed,
            trials,
            size,
            bound,
        } => {
            let al = alphabet.build()?;
            if size == 0 {
                bail!("--size must be at least 1");
            }
            let cfg = GenConfig {
                trials,
                max_size: size,
                ..GenConfig::new(al, seed)
            };
            let report = on_big_stack(move || crosscheck(&cfg, bound));
            print!("{}", report.json_lines());
            Ok(if report.discrepancies.is_empty() {
                0
            } else {
                1
            })
        }
        Command::Stats { file, format } => {
            let p = read_proof(&file)?;
            let s = stats(&p);
            match format {
                Format::Json => println!("{}", serde_json::to_string(&s)?),
                _ => {
                    println!("distinct sequents:    {}", s.distinct_sequents);
                    println!("distinct antecedents: {}", s.distinct_antecedents);
                    println!("distinct succedents:  {}", s.distinct_succedents);
                    println!("nodes:                {}", s.node_count);
                    println!("back-edges:           {}", s.backedge_count);
                    println!("max depth:            {}", s.max_depth);
                }
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
