//! Batch front end: reduction, equality, commutators, division, residues,
//! Følner statistics and seeded verification suites.
//!
//! Exit codes: 0 success; 1 negative answer (unequal elements, failed
//! verification); 2 parse error; 3 domain error.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use metabelian::folner::{
    adaptedness_ratio, folner_ratio_bound, i_window, lattice_basis, z_set, MembershipMode,
    WitnessedN,
};
use metabelian::group::{commutator, eq, normalize, reduce};
use metabelian::jsonio;
use metabelian::laurent::div_rem_multi;
use metabelian::parse;
use metabelian::residue::{residue_witnessed, ResidueSpec};
use metabelian::verify;
use metabelian::{Element, Error, Int, NElem, Poly, Rational};

#[derive(Parser)]
#[command(name = "metabelian", version, about = "Exact arithmetic in free metabelian groups")]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct SpecArgs {
    /// Ambient rank d
    #[arg(short = 'd', long = "rank")]
    rank: usize,
    /// Split index c (variables ≤ c are unconstrained)
    #[arg(long = "split-c")]
    split_c: usize,
    /// Sequence index n
    #[arg(long = "n")]
    n: u64,
    /// Subgroup index t; the modulus is m = n·t
    #[arg(long = "index-t", default_value_t = 1)]
    index_t: u64,
}

impl SpecArgs {
    fn build(&self) -> Result<ResidueSpec, Error> {
        ResidueSpec::new(self.rank, self.split_c, self.n, self.index_t)
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Reduce a word to its normal form (q, n)
    Reduce {
        #[arg(short = 'd', long = "rank")]
        rank: usize,
        word: String,
    },
    /// Test two words for equality in the group
    Eq {
        #[arg(short = 'd', long = "rank")]
        rank: usize,
        w1: String,
        w2: String,
    },
    /// Commutator [w1, w2] as an element of the derived subgroup
    Comm {
        #[arg(short = 'd', long = "rank")]
        rank: usize,
        w1: String,
        w2: String,
    },
    /// Divide by monic univariate polynomials with canonical box remainder
    Divrem {
        #[arg(short = 'd', long = "rank")]
        rank: usize,
        /// Division variable for each divisor, in order
        #[arg(long = "vars", value_delimiter = ',', required = true)]
        vars: Vec<usize>,
        psi: String,
        divisors: Vec<String>,
    },
    /// Canonical residue of a derived-subgroup element modulo O
    Residue {
        #[command(flatten)]
        spec: SpecArgs,
        /// Echo the derived modulus, per-pair windows and generators
        #[arg(long)]
        explain: bool,
        element: String,
    },
    /// Følner-set statistics
    Folner {
        #[command(subcommand)]
        cmd: FolnerCmd,
    },
    /// Run seeded verification suites
    Verify {
        /// Suite name or "all"
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum FolnerCmd {
    /// Sizes, lattice rank, invariance bounds and optional adaptedness
    Stats {
        #[command(flatten)]
        spec: SpecArgs,
        /// Element whose adaptedness ratio to report
        #[arg(long = "g")]
        g: Option<String>,
        /// Box side for the Følner ratio bounds
        #[arg(long, default_value_t = 10)]
        side: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Parse { .. } => ExitCode::from(2),
                _ => ExitCode::from(3),
            }
        }
    }
}

fn emit(format: Format, text: String, payload: Map<String, Value>) {
    match format {
        Format::Text => println!("{text}"),
        Format::Json => println!("{}", jsonio::with_schema(payload)),
    }
}

fn obj(entries: Vec<(&str, Value)>) -> Map<String, Value> {
    entries.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn ratio_text(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    match &cli.cmd {
        Cmd::Reduce { rank, word } => {
            let g: Element = reduce(&parse::parse_word(word, *rank)?);
            let v = jsonio::element_to_json(&g);
            let payload = v.as_object().cloned().expect("object payload");
            let text = format!(
                "q=[{}] n={}",
                g.q().exponents().iter().map(i64::to_string).collect::<Vec<_>>().join(","),
                parse::render_nelement(g.f()),
            );
            emit(cli.format, text, payload);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Eq { rank, w1, w2 } => {
            let g1: Element = reduce(&parse::parse_word(w1, *rank)?);
            let g2: Element = reduce(&parse::parse_word(w2, *rank)?);
            let equal = eq(&g1, &g2)?;
            emit(cli.format, equal.to_string(), obj(vec![("equal", json!(equal))]));
            Ok(if equal { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Cmd::Comm { rank, w1, w2 } => {
            let g1: Element = reduce(&parse::parse_word(w1, *rank)?);
            let g2: Element = reduce(&parse::parse_word(w2, *rank)?);
            let c = commutator(&g1, &g2)?;
            emit(
                cli.format,
                parse::render_nelement(&c),
                obj(vec![("d", json!(rank)), ("n", jsonio::nelement_to_json(&c))]),
            );
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Divrem { rank, vars, psi, divisors } => {
            if vars.len() != divisors.len() {
                return Err(Error::InvalidParameter(format!(
                    "{} divisors but {} variables",
                    divisors.len(),
                    vars.len()
                )));
            }
            let psi: Poly = parse::parse_poly(psi, *rank)?;
            let divs: Vec<(Poly, usize)> = divisors
                .iter()
                .zip(vars)
                .map(|(text, &v)| Ok((parse::parse_poly(text, *rank)?, v)))
                .collect::<Result<_, Error>>()?;
            let (thetas, lambda) = div_rem_multi(&psi, &divs)?;
            let mut lines: Vec<String> = thetas
                .iter()
                .enumerate()
                .map(|(k, t)| format!("theta{}={}", k + 1, parse::render_poly(t)))
                .collect();
            lines.push(format!("lambda={}", parse::render_poly(&lambda)));
            let payload = obj(vec![
                (
                    "thetas",
                    Value::Array(thetas.iter().map(jsonio::poly_to_json).collect()),
                ),
                ("lambda", jsonio::poly_to_json(&lambda)),
            ]);
            emit(cli.format, lines.join("\n"), payload);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Residue { spec, explain, element } => {
            let sp = spec.build()?;
            let raw = parse::parse_nelement::<Int>(element, sp.d())?;
            let f: NElem = normalize(&raw);
            let (r, _witness) = residue_witnessed(&f, &sp)?;
            let mut payload = obj(vec![
                ("residue", jsonio::nelement_to_json(&r)),
                ("in_o", json!(r.is_zero())),
            ]);
            let mut text = format!("residue={}", parse::render_nelement(&r));
            if *explain {
                let mut pairs = Vec::new();
                let mut lines = vec![format!("m={}", sp.m())];
                for i in 1..sp.d() {
                    for j in (i + 1)..=sp.d() {
                        let window = sp.m_window(i, j)?;
                        let gens = sp.o_generators::<Int>(i, j)?;
                        lines.push(format!(
                            "pair ({i},{j}): window [{}] generators [{}]",
                            window
                                .bounds()
                                .iter()
                                .map(|b| b.map_or("inf".to_string(), |x| x.to_string()))
                                .collect::<Vec<_>>()
                                .join(","),
                            gens.iter()
                                .map(|(p, _)| parse::render_poly(p))
                                .collect::<Vec<_>>()
                                .join("; "),
                        ));
                        pairs.push(json!({
                            "i": i,
                            "j": j,
                            "window": window.bounds(),
                            "generators": gens
                                .iter()
                                .map(|(p, v)| json!({"poly": jsonio::poly_to_json(p), "var": v}))
                                .collect::<Vec<_>>(),
                        }));
                    }
                }
                payload.insert("m".into(), json!(sp.m()));
                payload.insert("pairs".into(), Value::Array(pairs));
                text = format!("{}\n{}", lines.join("\n"), text);
            }
            emit(cli.format, text, payload);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Folner { cmd: FolnerCmd::Stats { spec, g, side } } => {
            let sp = spec.build()?;
            let basis = lattice_basis::<Int>(&sp);
            let window = i_window(&sp);
            let z = z_set(&sp);
            let mut lines = vec![
                format!("m={}", sp.m()),
                format!("i_size={}", window.len()),
                format!("z_size={}", z.len()),
                format!("lattice_rank={}", basis.rank()),
            ];
            let mut payload = obj(vec![
                (
                    "params",
                    json!({"d": sp.d(), "c": sp.c(), "n": sp.n(), "t": sp.t(), "m": sp.m()}),
                ),
                ("i_size", json!(window.len())),
                ("z_size", json!(z.len())),
                ("lattice_rank", json!(basis.rank())),
                ("side", json!(side)),
            ]);
            let mut bounds = Vec::new();
            for i in 1..=sp.d() {
                let b: Rational = folner_ratio_bound(i, &sp, *side)?;
                lines.push(format!("folner_bound a{i}={}", ratio_text(&b)));
                bounds.push(json!({"i": i, "ratio": jsonio::rational_to_json(&b)}));
            }
            payload.insert("folner_bounds".into(), Value::Array(bounds));
            if let Some(word) = g {
                let g: Element = reduce(&parse::parse_word(word, sp.d())?);
                let ratio = adaptedness_ratio(
                    &g,
                    &[WitnessedN::zero(sp.d())],
                    &sp,
                    MembershipMode::Witness,
                )?;
                lines.push(format!("adaptedness={}", ratio_text(&ratio)));
                payload.insert("adaptedness".into(), jsonio::rational_to_json(&ratio));
            }
            emit(cli.format, lines.join("\n"), payload);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify { suite, trials, seed } => {
            let reports = verify::run(suite, *trials, *seed)?;
            let all_passed = reports.iter().all(|r| r.passed());
            let mut lines = Vec::new();
            let mut items = Vec::new();
            for r in &reports {
                lines.push(format!(
                    "suite {}: {} trials, {} failures{}",
                    r.suite,
                    r.trials,
                    r.failed,
                    if r.messages.is_empty() {
                        String::new()
                    } else {
                        format!(" ({})", r.messages.join("; "))
                    }
                ));
                items.push(json!({
                    "suite": r.suite,
                    "trials": r.trials,
                    "failed": r.failed,
                    "messages": r.messages,
                }));
            }
            lines.push(format!(
                "seed={} result={}",
                seed,
                if all_passed { "pass" } else { "fail" }
            ));
            let payload = obj(vec![
                ("seed", json!(seed)),
                ("passed", json!(all_passed)),
                ("suites", Value::Array(items)),
            ]);
            emit(cli.format, lines.join("\n"), payload);
            Ok(if all_passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}
