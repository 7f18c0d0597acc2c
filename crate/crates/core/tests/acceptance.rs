//! Runs the eight acceptance criteria and prints one PASS/FAIL line each.

use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use synthtop::oracle::{run_law_suite, LawReport, SuiteConfig};
use synthtop::reals::{decimal_to_cauchy_direct, distance, interval_open_decimal, repair_decimal, Decimal};
use synthtop::Fuel;

type Criterion = fn() -> Result<String, String>;

fn suite(law: &str, max_size: usize) -> Result<LawReport, String> {
    let cfg = SuiteConfig { max_size, ..SuiteConfig::default() };
    run_law_suite(law, &cfg).map_err(|e| e.to_string())
}

fn passed(r: &LawReport) -> Result<String, String> {
    if r.passed {
        Ok(format!("{} instances", r.instances))
    } else {
        Err(format!("counterexample {}", r.counterexample.as_ref().map(|v| v.to_string()).unwrap_or_default()))
    }
}

fn pow2(k: i64) -> BigRational {
    let two = BigRational::from_integer(BigInt::from(2));
    if k >= 0 {
        num_traits::pow(two, k as usize)
    } else {
        num_traits::pow(two, (-k) as usize).recip()
    }
}

fn presubbase() -> Result<String, String> {
    passed(&suite("presubbase-theorem", 3)?)
}

fn hyper() -> Result<String, String> {
    passed(&suite("hyper-ops-vs-oracle", 3)?)
}

fn figure1() -> Result<String, String> {
    passed(&suite("figure1-chain", 3)?)
}

fn galois() -> Result<String, String> {
    let r = suite("galois-roundtrip", 3)?;
    let summary = passed(&r)?;
    if r.instances < 50 {
        return Err(format!("only {} instances", r.instances));
    }
    if r.flagged.len() != 1 {
        return Err(format!("expected one flagged instance, got {}", r.flagged.len()));
    }
    Ok(format!("{summary}, planted instance flagged"))
}

fn completion() -> Result<String, String> {
    passed(&suite("completion-idempotence", 3)?)
}

fn repair() -> Result<String, String> {
    for input in ["0.5", "0.3(3)", "0.142857(142857)", "0.9(9)"] {
        let d: Decimal = input.parse().map_err(|e| format!("{input}: {e}"))?;
        let exact = d.value();
        let name = d.name();
        let direct = decimal_to_cauchy_direct(&name);
        let out = repair_decimal(&name, 20, Fuel::DEFAULT);
        if let Some(e) = out.exhausted {
            return Err(format!("{input}: {e}"));
        }
        if out.levels.len() != 20 {
            return Err(format!("{input}: {} levels", out.levels.len()));
        }
        for (i, q) in out.levels.iter().enumerate() {
            let k = i as i64 + 1;
            if distance(q, &direct.at(k as u64)) >= pow2(1 - k) {
                return Err(format!("{input}: level {k} differs from truncation by 2^{}+", 1 - k));
            }
            if distance(q, &exact) > pow2(-k) {
                return Err(format!("{input}: level {k} is not within 2^-{k} of the value"));
            }
        }
        if distance(&out.levels[19], &direct.at(20)) > pow2(-19) {
            return Err(format!("{input}: level 20 outside 2^-19"));
        }
    }
    let third: Decimal = "0.3(3)".parse().map_err(|e| format!("{e}"))?;
    let u = interval_open_decimal(&BigRational::new(1.into(), 3.into()), &BigRational::from_integer(1.into()))
        .map_err(|e| e.to_string())?;
    if u.chi(&third.point()).accepted_within(Fuel::DEFAULT) {
        return Err("1/3 ∈ (1/3, 1) was accepted".into());
    }
    Ok("4 inputs at 20 bits, boundary query pending".into())
}

fn scheduler() -> Result<String, String> {
    let a = suite("scheduler-fairness", 3)?;
    let b = suite("scheduler-fairness", 3)?;
    let summary = passed(&a)?;
    let (ja, jb) = (serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    if ja != jb {
        return Err("reports differ between runs".into());
    }
    Ok(format!("{summary}, reports byte-identical"))
}

fn enumeration() -> Result<String, String> {
    passed(&suite("enumeration-crosscheck", 4)?)
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 8] = [
        ("presubbase theorem", presubbase),
        ("hyperspace operations", hyper),
        ("figure 1 chain", figure1),
        ("galois connection", galois),
        ("completion idempotence", completion),
        ("decimal repair", repair),
        ("scheduler", scheduler),
        ("enumeration cross-check", enumeration),
    ];
    let mut ok = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(msg) => println!("criterion {} {name}: PASS ({msg}; {secs:.1}s)", i + 1),
            Err(msg) => {
                ok = false;
                println!("criterion {} {name}: FAIL ({msg}; {secs:.1}s)", i + 1);
            }
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
