use std::path::Path;
use std::process::ExitCode;

use brim::multiplicity::{br_limit_multiplicity, br_multiplicity, closure_approx, Exactness};
use brim::structure::adjoint_of_ideal;
use brim::verify::{example_suite, report, verify_corpus, CorpusConfig, ExampleConfig, ReportOptions};
use brim::{ideals::mixed_multiplicity, Error, Field, Fp, Ideal, Module, Rational, Session};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "brim", version, about = "Lengths, multiplicities and adjoints over k[x,y] localized at (x,y)")]
struct Cli {
    /// Field characteristic: 0 for the rationals, or one of 2147483647,
    /// 1000000007, 998244353.
    #[arg(long = "char", global = true, default_value_t = 2147483647)]
    characteristic: u64,
    /// Largest truncation degree tried without an a-priori bound.
    #[arg(long, global = true, default_value_t = 64)]
    trunc_cap: usize,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Via {
    Presentation,
    Polyhedral,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// λ(R/I).
    Colength { ideal: String },
    /// ord(I).
    Order { ideal: String },
    /// Hilbert-Samuel multiplicity e(I).
    Mult { ideal: String },
    /// Buchsbaum-Rim multiplicity from a minimal reduction.
    BrMult { module: String },
    /// Buchsbaum-Rim multiplicity from lengths of symmetric powers.
    BrLimit {
        module: String,
        #[arg(long, default_value_t = 8)]
        pmax: usize,
    },
    /// Adjoint ideal of an integrally closed ideal.
    Adjoint {
        ideal: String,
        #[arg(long, value_enum, default_value_t = Via::Presentation)]
        via: Via,
    },
    /// Integral closure of an ideal, or of a module given as a JSON file.
    Closure {
        target: String,
        #[arg(long, default_value_t = 12)]
        degree_bound: u32,
    },
    /// Ideal of k x k minors.
    Fitting {
        module: String,
        #[arg(long)]
        k: usize,
    },
    /// Full invariant report with theorem verdicts.
    Report {
        module: String,
        #[arg(long)]
        pmax: Option<usize>,
    },
    /// Report for the family member M(a,b,c).
    Mabc {
        a: u32,
        b: u32,
        c: u32,
        #[arg(long)]
        pmax: Option<usize>,
    },
    /// Mixed multiplicity e₁(I|J).
    Mixed { first: String, second: String },
    /// Verify every verdict on a seeded corpus.
    Verify {
        #[arg(long, default_value_t = 100)]
        corpus_size: usize,
        #[arg(long)]
        hard: bool,
        #[arg(long)]
        pmax: Option<usize>,
    },
    /// Run the worked-example suite.
    Examples,
}

/// What a command produced: the rendering plus whether a verdict failed.
struct Outcome {
    json: Value,
    text: String,
    violation: bool,
}

impl Outcome {
    fn plain(json: Value, text: impl Into<String>) -> Self {
        Outcome { json, text: text.into(), violation: false }
    }
}

fn read_module<F: Field>(path: &str, s: &Session) -> brim::Result<Module<F>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{path}: {e}")))?;
    Module::from_json(&text, s)
}

/// Monomial ideals are printed from their staircase so equal ideals print
/// the same way.
fn render<F: Field>(i: &Ideal<F>) -> String {
    match i.simplified().to_staircase() {
        Some(st) => Ideal::<F>::from_staircase(&st).to_string(),
        None => i.to_string(),
    }
}

fn run<F: Field>(cli: &Cli, s: &Session) -> brim::Result<Outcome> {
    let seed = cli.seed;
    Ok(match &cli.command {
        Command::Colength { ideal } => {
            let c = Ideal::<F>::parse(ideal)?.colength(s)?;
            Outcome::plain(json!({"colength": c.value, "certified_at": c.certified_at}), c.value.to_string())
        }
        Command::Order { ideal } => {
            let o = Ideal::<F>::parse(ideal)?.order();
            Outcome::plain(json!({"order": o}), o.to_string())
        }
        Command::Mult { ideal } => {
            let i = Ideal::<F>::parse(ideal)?;
            let e = i.hs_multiplicity(seed, s)?;
            Outcome::plain(json!({"multiplicity": e}), e.to_string())
        }
        Command::BrMult { module } => {
            let m = read_module::<F>(module, s)?;
            let (core, _) = m.split_free();
            let e = br_multiplicity(&core.minimalized(s)?, seed, s)?;
            Outcome::plain(json!({"br_multiplicity": e}), e.to_string())
        }
        Command::BrLimit { module, pmax } => {
            let e = br_limit_multiplicity(&read_module::<F>(module, s)?, *pmax, s)?;
            Outcome::plain(json!({"br_multiplicity": e, "pmax": pmax}), e.to_string())
        }
        Command::Adjoint { ideal, via } => {
            let i = Ideal::<F>::parse(ideal)?;
            let adj = match via {
                Via::Presentation => adjoint_of_ideal(&i, s)?,
                Via::Polyhedral => {
                    let st = i
                        .simplified()
                        .to_staircase()
                        .ok_or_else(|| Error::Precondition("the polyhedral adjoint needs a monomial ideal".into()))?;
                    Ideal::from_staircase(&st.polyhedral_adjoint()?)
                }
            };
            let text = render(&adj);
            Outcome::plain(json!({"adjoint": text, "colength": adj.colength(s)?.value}), text)
        }
        Command::Closure { target, degree_bound } => {
            let m = if Path::new(target).is_file() {
                read_module::<F>(target, s)?
            } else {
                Module::from_ideal(&Ideal::<F>::parse(target)?)
            };
            let c = closure_approx(&m, *degree_bound, seed, s)?;
            let exact = match c.exact {
                Exactness::Certified => "certified",
                Exactness::WitnessedNotClosed => "witness_not_closed",
                Exactness::Unknown => "unknown",
            };
            let js = c.module.to_json();
            let text = if m.rank() == 1 {
                let gens: Vec<_> = c.module.columns().iter().map(|col| col[0].clone()).collect();
                format!("{}\n{exact}", render(&Ideal::new(gens)?))
            } else {
                format!("{}\n{exact}", serde_json::to_string(&js).expect("module JSON"))
            };
            let witnesses: Vec<Vec<String>> =
                c.witnesses.iter().map(|w| w.iter().map(|f| f.to_string()).collect()).collect();
            Outcome::plain(
                json!({"closure": {"rank": js.rank, "generators": js.generators}, "status": exact,
                       "witnesses": witnesses, "colength": c.module.colength(s)?}),
                text,
            )
        }
        Command::Fitting { module, k } => {
            let i = read_module::<F>(module, s)?.fitting_ideal(*k)?;
            let len = i.colength(s)?.value;
            let text = render(&i);
            Outcome::plain(json!({"ideal": text, "colength": len}), format!("{text}\ncolength {len}"))
        }
        Command::Report { module, pmax } => report_outcome(&read_module::<F>(module, s)?, seed, *pmax, s)?,
        Command::Mabc { a, b, c, pmax } => report_outcome(&Module::<F>::family_mabc(*a, *b, *c)?, seed, *pmax, s)?,
        Command::Mixed { first, second } => {
            let e1 = mixed_multiplicity(&Ideal::<F>::parse(first)?, &Ideal::<F>::parse(second)?, s)?;
            Outcome::plain(json!({"mixed_multiplicity": e1}), e1.to_string())
        }
        Command::Verify { corpus_size, hard, pmax } => {
            let cfg =
                CorpusConfig { size: *corpus_size, seed, hard: *hard, limit_pmax: *pmax, ..CorpusConfig::default() };
            let sum = verify_corpus::<F>(&cfg, s)?;
            if sum.errors > 0 && sum.violations.is_empty() {
                eprintln!("{} corpus items could not be computed", sum.errors);
            }
            let code = sum.exit_code();
            if code == 3 {
                return Err(Error::Inconclusive(format!("{} corpus items failed to compute", sum.errors)));
            }
            Outcome {
                json: serde_json::to_value(&sum).expect("summary JSON"),
                text: sum.to_text(),
                violation: code == 1,
            }
        }
        Command::Examples => {
            let b = example_suite::<F>(&ExampleConfig { seed, ..ExampleConfig::default() }, s)?;
            Outcome {
                json: serde_json::to_value(&b).expect("bundle JSON"),
                text: b.to_text(),
                violation: !b.all_passed(),
            }
        }
    })
}

fn report_outcome<F: Field>(m: &Module<F>, seed: u64, pmax: Option<usize>, s: &Session) -> brim::Result<Outcome> {
    let rep = report(m, ReportOptions { seed, limit_pmax: pmax }, s)?;
    Ok(Outcome {
        json: serde_json::to_value(&rep).expect("report JSON"),
        text: rep.to_text(),
        violation: !rep.verdicts.violations().is_empty(),
    })
}

fn dispatch(cli: &Cli, s: &Session) -> brim::Result<Outcome> {
    match cli.characteristic {
        0 => run::<Rational>(cli, s),
        2147483647 => run::<Fp<2147483647>>(cli, s),
        1000000007 => run::<Fp<1000000007>>(cli, s),
        998244353 => run::<Fp<998244353>>(cli, s),
        p => Err(Error::Invalid(format!("unsupported characteristic {p}; use 0, 2147483647, 1000000007 or 998244353"))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let s = Session::default().with_trunc_cap(cli.trunc_cap);
    match dispatch(&cli, &s) {
        Ok(out) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("JSON output")),
                Format::Text => println!("{}", out.text.trim_end()),
            }
            if out.violation {
                eprintln!("verdict violation");
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
