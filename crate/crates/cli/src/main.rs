use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use synthtop::hyper::OpenSet;
use synthtop::oracle::laws::resolve_laws;
use synthtop::oracle::{run_law_suite, FiniteSpace, FiniteSubbase, SuiteConfig};
use synthtop::reals::{decimal_to_cauchy_direct, distance, rational_string, repair_decimal, Decimal};
use synthtop::spaces::{Point, Space};
use synthtop::{Error, Fuel};

#[derive(Parser)]
#[command(name = "synthtop", version, about = "Law suites and exact-real demos for synthetic topology")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run law suites against the finite oracle, one JSON report per line.
    Verify {
        /// `all` or a comma-separated list of law ids.
        #[arg(long, default_value = "all")]
        laws: String,
        #[arg(long, default_value_t = 3)]
        max_size: usize,
        #[arg(long, default_value_t = Fuel::DEFAULT.0)]
        fuel: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Add wall-clock milliseconds to each report.
        #[arg(long)]
        timing: bool,
    },
    /// Repair a decimal expansion such as `0.3(3)` into a Cauchy prefix.
    Repair {
        decimal: String,
        #[arg(long, default_value_t = 20)]
        bits: usize,
        #[arg(long, default_value_t = Fuel::DEFAULT.0)]
        fuel: u64,
    },
    /// Query a finite space or finite subbase given as JSON.
    Spaces { file: PathBuf, query: Query },
}

#[derive(Clone, Copy, ValueEnum)]
enum Query {
    T0,
    Order,
    Tauk,
    DecodeDemo,
}

fn usage(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify { laws, max_size, fuel, seed, timing } => verify(&laws, max_size, Fuel(fuel), seed, timing),
        Command::Repair { decimal, bits, fuel } => repair(&decimal, bits, Fuel(fuel)),
        Command::Spaces { file, query } => spaces(&file, query),
    }
}

fn verify(laws: &str, max_size: usize, fuel: Fuel, seed: u64, timing: bool) -> ExitCode {
    let laws = match resolve_laws(laws) {
        Ok(l) => l,
        Err(e) => return usage(e),
    };
    let cfg = SuiteConfig { max_size, fuel, seed };
    let mut all_passed = true;
    for law in laws {
        let start = Instant::now();
        let report = match run_law_suite(law, &cfg) {
            Ok(r) => r,
            Err(e @ (Error::TooLarge { .. } | Error::UnknownLaw(_))) => return usage(e),
            Err(e) => {
                eprintln!("error: {law}: {e}");
                return ExitCode::from(1);
            }
        };
        all_passed &= report.passed;
        let mut line = serde_json::to_value(&report).expect("reports serialize");
        if timing {
            line["wall_ms"] = json!(start.elapsed().as_millis() as u64);
        }
        println!("{line}");
    }
    if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn repair(input: &str, bits: usize, fuel: Fuel) -> ExitCode {
    let d: Decimal = match input.parse() {
        Ok(d) => d,
        Err(e) => return usage(e),
    };
    let name = d.name();
    let direct = decimal_to_cauchy_direct(&name);
    let out = repair_decimal(&name, bits, fuel);
    let levels: Vec<Value> = out
        .levels
        .iter()
        .enumerate()
        .map(|(i, q)| {
            let k = i as u64 + 1;
            let reference = direct.at(k);
            let delta = distance(q, &reference);
            json!({
                "level": k,
                "value": rational_string(q),
                "direct": rational_string(&reference),
                "delta": rational_string(&delta),
            })
        })
        .collect();
    let mut report = json!({
        "input": input,
        "exact": rational_string(&d.value()),
        "bits": bits,
        "fuel": fuel.0,
        "levels": levels,
        "cauchy": out.levels.iter().map(rational_string).collect::<Vec<_>>(),
        "complete": out.exhausted.is_none(),
    });
    if let Some(e) = &out.exhausted {
        report["deepest_level"] = json!(out.levels.len());
        report["error"] = json!(e.to_string());
    }
    println!("{report}");
    if out.exhausted.is_none() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

enum Instance {
    Space(FiniteSpace),
    Subbase(FiniteSubbase),
}

fn load(file: &PathBuf) -> Result<Instance, Error> {
    let text = std::fs::read_to_string(file).map_err(|e| Error::Parse(format!("{}: {e}", file.display())))?;
    let raw: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    if raw.get("sets").is_some() {
        FiniteSubbase::from_json(&text).map(Instance::Subbase)
    } else {
        FiniteSpace::from_json(&text).map(Instance::Space)
    }
}

fn order_json(fs: &FiniteSpace) -> Value {
    let up = fs.specialization();
    let pairs: Vec<[usize; 2]> = (0..fs.n())
        .flat_map(|x| (0..fs.n()).filter(|&y| up[x] >> y & 1 == 1).map(move |y| [x, y]).collect::<Vec<_>>())
        .collect();
    json!(pairs)
}

fn spaces(file: &PathBuf, query: Query) -> ExitCode {
    let inst = match load(file) {
        Ok(i) => i,
        Err(e) => return usage(e),
    };
    let answer = match (query, &inst) {
        (Query::T0, Instance::Space(fs)) => json!({ "t0": fs.is_t0() }),
        (Query::T0, Instance::Subbase(b)) => {
            json!({ "t0": b.tau_k().is_t0(), "injective": b.is_injective() })
        }
        (Query::Order, Instance::Space(fs)) => json!({ "order": order_json(fs) }),
        (Query::Order, Instance::Subbase(b)) => {
            json!({ "index_order": order_json(b.index()), "order": order_json(&b.tau_k()) })
        }
        (Query::Tauk, Instance::Subbase(b)) => match b.figure1_check() {
            Ok(r) => json!({
                "tau_k": r.tau_k.to_json(),
                "tau_b": r.tau_b.to_json(),
                "tau_inf": r.tau_inf.to_json(),
                "final": r.final_topology.to_json(),
                "chain_holds": r.chain_holds(),
                "injective": r.injective,
            }),
            Err(e) => return usage(e),
        },
        (Query::DecodeDemo, Instance::Subbase(b)) => decode_demo(b),
        (_, Instance::Space(_)) => return usage("this query needs a subbase instance (with `sets`)"),
    };
    println!("{answer}");
    ExitCode::SUCCESS
}

/// Candidate sets of each point's `δ^B`-name as the fuel grows.
fn decode_demo(b: &FiniteSubbase) -> Value {
    let tau_k = b.tau_k();
    let index = Space::Finite(b.index().clone());
    let points: Vec<Value> = (0..b.n())
        .map(|x| {
            let t = b.transpose(x);
            // index y is revealed at step 1 + y
            let name = OpenSet::new(index.clone(), move |y: &Point| match y.as_element() {
                Ok(i) if t >> i & 1 == 1 => synthtop::SValue::accept_at(1 + i as u64),
                _ => synthtop::SValue::bot(),
            });
            let steps: Vec<Value> = (0..=b.sets().len() as u64 + 1)
                .map(|f| json!({ "fuel": f, "candidates": members(b.decode_finite(&name, Fuel(f))) }))
                .collect();
            json!({ "point": x, "trace": steps, "limit": members(tau_k.saturate(1 << x)) })
        })
        .collect();
    json!({ "decode": points })
}

fn members(bits: u64) -> Vec<usize> {
    (0..64).filter(|&i| bits >> i & 1 == 1).collect()
}
