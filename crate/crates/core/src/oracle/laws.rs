//! Exhaustive law suites run against the finite oracle.
//!
//! Every suite returns a [`LawReport`]; a failing suite carries the first
//! counterexample instance as JSON.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use super::finite::{count_preorders, enumerate_spaces, generate_topology, Bits, FiniteSpace, MAX_ENUM};
use super::hyper_laws::{check_pair, check_view, OPERATIONS};
use super::subbase::{monotone_families, FiniteSubbase};
use super::view::FiniteView;
use crate::bases::finite::{finite_presubbase, open_lattice};
use crate::bases::galois::{enumerate_instances, planted_non_reduction, window_for, FiniteGalois};
use crate::bases::{base_completion, galois_backward, galois_forward, kolmogorov_completion};
use crate::error::{Error, Result};
use crate::hyper::CompactSat;
use crate::kernel::{dovetail, Fuel, Scheduler};
use crate::spaces::{Point, Space};

/// Law ids in report order.
pub const LAWS: [&str; 7] = [
    "completion-idempotence",
    "enumeration-crosscheck",
    "figure1-chain",
    "galois-roundtrip",
    "hyper-ops-vs-oracle",
    "presubbase-theorem",
    "scheduler-fairness",
];

/// Largest `max_size` accepted. Suites whose instance counts explode beyond
/// three points clamp to 3.
pub const SIZE_CAP: usize = MAX_ENUM;

const EXHAUSTIVE_CAP: usize = 3;

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub max_size: usize,
    pub fuel: Fuel,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { max_size: 3, fuel: Fuel::DEFAULT, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LawReport {
    pub law: String,
    pub instances: u64,
    pub passed: bool,
    pub counterexample: Option<Value>,
    /// Instances the suite is expected to reject and did.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub flagged: Vec<Value>,
    pub max_size: usize,
    pub fuel: u64,
    pub seed: u64,
}

struct Tally {
    instances: u64,
    counterexample: Option<Value>,
    flagged: Vec<Value>,
}

impl Tally {
    fn new() -> Self {
        Tally { instances: 0, counterexample: None, flagged: Vec::new() }
    }

    /// Records one instance; returns false once a counterexample is held.
    fn record(&mut self, failure: Option<Value>) -> bool {
        self.instances += 1;
        if self.counterexample.is_none() {
            self.counterexample = failure;
        }
        self.counterexample.is_none()
    }
}

pub fn resolve_laws(ids: &str) -> Result<Vec<&'static str>> {
    if ids == "all" {
        return Ok(LAWS.to_vec());
    }
    let mut out = Vec::new();
    for id in ids.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let law = LAWS.iter().find(|&&l| l == id).ok_or_else(|| Error::UnknownLaw(id.to_string()))?;
        if !out.contains(law) {
            out.push(*law);
        }
    }
    out.sort_unstable();
    if out.is_empty() {
        return Err(Error::UnknownLaw(ids.to_string()));
    }
    Ok(out)
}

pub fn run_law_suite(law: &str, cfg: &SuiteConfig) -> Result<LawReport> {
    if cfg.max_size > SIZE_CAP {
        return Err(Error::TooLarge { size: cfg.max_size, cap: SIZE_CAP });
    }
    let tally = match law {
        "completion-idempotence" => completion_idempotence(cfg)?,
        "enumeration-crosscheck" => enumeration_crosscheck(cfg)?,
        "figure1-chain" => figure1_chain(cfg)?,
        "galois-roundtrip" => galois_roundtrip(cfg)?,
        "hyper-ops-vs-oracle" => hyper_ops(cfg)?,
        "presubbase-theorem" => presubbase_theorem(cfg)?,
        "scheduler-fairness" => scheduler_fairness(cfg),
        other => return Err(Error::UnknownLaw(other.to_string())),
    };
    Ok(LawReport {
        law: law.to_string(),
        instances: tally.instances,
        passed: tally.counterexample.is_none(),
        counterexample: tally.counterexample,
        flagged: tally.flagged,
        max_size: cfg.max_size,
        fuel: cfg.fuel.0,
        seed: cfg.seed,
    })
}

fn small(cfg: &SuiteConfig) -> usize {
    cfg.max_size.min(EXHAUSTIVE_CAP)
}

fn all_spaces(max: usize, t0_only: bool) -> Result<Vec<FiniteSpace>> {
    let mut out = Vec::new();
    for n in 0..=max {
        out.extend(enumerate_spaces(n, t0_only)?);
    }
    Ok(out)
}

fn presubbase_theorem(cfg: &SuiteConfig) -> Result<Tally> {
    let mut t = Tally::new();
    let s = small(cfg);
    for y in all_spaces(s, true)? {
        let index = Arc::new(y);
        let iv = FiniteView::of(&Space::Finite(index.clone()))?;
        for n in 0..=s {
            for b in monotone_families(n, &index) {
                let failure = presubbase_instance(&b, &iv, cfg.fuel)?
                    .map(|why| json!({ "subbase": b.to_json(), "reason": why }));
                if !t.record(failure) {
                    return Ok(t);
                }
            }
        }
    }
    Ok(t)
}

fn presubbase_instance(b: &FiniteSubbase, iv: &FiniteView, fuel: Fuel) -> Result<Option<String>> {
    let tau_k = b.tau_k();
    if tau_k.is_t0() != b.is_injective() {
        return Ok(Some(format!("T0 of tau_K is {} but injectivity is {}", tau_k.is_t0(), b.is_injective())));
    }
    let pb = finite_presubbase(b);
    let carrier = FiniteView::of(pb.carrier())?;
    for (k, want) in b.base_sets() {
        let open = pb.base_open(&iv.compact(k));
        let got = (0..b.n())
            .filter(|&x| open.chi(&pb.point(&carrier.points()[x])).accepted_within(fuel))
            .fold(0, |acc, x| acc | 1 << x);
        if got != want {
            return Ok(Some(format!("base set for K = {k:#b}: accepted {got:#b}, oracle {want:#b}")));
        }
    }
    for x in 0..b.n() {
        let candidates = b.decode_finite(&pb.transpose(&carrier.points()[x]), fuel);
        if candidates != tau_k.saturate(1 << x) {
            return Ok(Some(format!("decoding {x} gives {candidates:#b}")));
        }
    }
    if b.is_injective() && !crate::bases::finite::validate_transpose_inverse(&pb, &carrier, fuel)? {
        return Ok(Some("transpose inverse does not round-trip".into()));
    }
    Ok(None)
}

fn figure1_chain(cfg: &SuiteConfig) -> Result<Tally> {
    let mut t = Tally::new();
    let s = small(cfg);
    for y in all_spaces(s, false)? {
        let index = Arc::new(y);
        for n in 0..=s {
            for b in monotone_families(n, &index) {
                let r = b.figure1_check()?;
                let failure = (!r.ok()).then(|| {
                    json!({
                        "subbase": b.to_json(),
                        "chain": r.chain_holds(),
                        "final_matches": r.final_matches(),
                        "discrete_equal": r.discrete_all_equal(),
                        "t0_iff_injective": r.t0_iff_injective(),
                    })
                });
                if !t.record(failure) {
                    return Ok(t);
                }
            }
        }
    }
    Ok(t)
}

fn hyper_ops(cfg: &SuiteConfig) -> Result<Tally> {
    let mut t = Tally::new();
    let s = small(cfg);
    let leaves: Vec<FiniteView> = all_spaces(s, false)?
        .into_iter()
        .map(|fs| FiniteView::of(&Space::finite(fs)))
        .collect::<Result<_>>()?;
    let report = |m: super::hyper_laws::Mismatch, what: Value| json!({ "operation": m.op, "detail": m.detail, "instance": what });
    for v in &leaves {
        let failure = check_view(v, cfg.fuel).err().map(|m| report(m, v.topology().to_json()));
        if !t.record(failure) {
            return Ok(t);
        }
    }
    for a in &leaves {
        for b in &leaves {
            let pair = || json!({ "left": a.topology().to_json(), "right": b.topology().to_json() });
            let failure = check_pair(a, b, cfg.fuel).err().map(|m| report(m, pair()));
            if !t.record(failure) {
                return Ok(t);
            }
            for space in [
                Space::product(a.space().clone(), b.space().clone()),
                Space::coproduct(a.space().clone(), b.space().clone()),
            ] {
                let view = FiniteView::of(&space)?;
                let failure = check_view(&view, cfg.fuel).err().map(|m| report(m, pair()));
                if !t.record(failure) {
                    return Ok(t);
                }
            }
        }
    }
    Ok(t)
}

/// Names of the operations the hyperspace suite exercises.
pub fn hyper_operations() -> &'static [&'static str] {
    &OPERATIONS
}

fn galois_instances(cfg: &SuiteConfig) -> Result<Vec<FiniteGalois>> {
    let sizes: Vec<usize> = (1..=cfg.max_size.min(2)).collect();
    let mut out = enumerate_instances(&sizes, &[1, 2])?;
    if cfg.max_size >= 3 {
        out.extend(enumerate_instances(&[3], &[1])?.into_iter().filter(|g| g.tau == FiniteSpace::chain(3)));
    }
    Ok(out)
}

fn galois_json(g: &FiniteGalois) -> Value {
    json!({ "tau": g.tau.to_json(), "sets": g.sets.iter().map(|&s| super::finite::list_of(s)).collect::<Vec<_>>() })
}

/// `(reduction, forward, backward)` validity on sampled names.
fn galois_validity(g: &FiniteGalois, seed: u64) -> Result<[bool; 3]> {
    let names = g.sample_names(100, seed);
    let w = window_for(g);
    let red = g.canonical_reduction();
    let fac = galois_forward(&red)?;
    let back = galois_backward(&fac)?;
    Ok([g.validate(&red, &names, w), g.validate(&fac, &names, w), g.validate(&back, &names, w)])
}

fn galois_roundtrip(cfg: &SuiteConfig) -> Result<Tally> {
    let mut t = Tally::new();
    for (i, g) in galois_instances(cfg)?.iter().enumerate() {
        let valid = galois_validity(g, cfg.seed.wrapping_add(i as u64))?;
        let truth = g.holds();
        let failure = valid.iter().any(|&v| v != truth).then(|| {
            json!({ "instance": galois_json(g), "holds": truth, "validated": valid })
        });
        if !t.record(failure) {
            return Ok(t);
        }
    }
    let planted = planted_non_reduction();
    let valid = galois_validity(&planted, cfg.seed)?;
    let flagged = !planted.holds() && valid.iter().all(|&v| !v);
    if flagged {
        t.flagged.push(json!({ "instance": galois_json(&planted), "holds": false, "validated": valid }));
    }
    t.record((!flagged).then(|| json!({ "planted": galois_json(&planted), "validated": valid })));
    Ok(t)
}

fn completion_idempotence(cfg: &SuiteConfig) -> Result<Tally> {
    let mut t = Tally::new();
    for fs in all_spaces(small(cfg), false)? {
        let failure = completion_instance(&fs, cfg.fuel)?.map(|why| json!({ "space": fs.to_json(), "reason": why }));
        if !t.record(failure) {
            break;
        }
    }
    Ok(t)
}

fn completion_instance(fs: &FiniteSpace, fuel: Fuel) -> Result<Option<String>> {
    let x = Space::finite(fs.clone());
    let c1 = match kolmogorov_completion(&x) {
        Ok(c) => c,
        Err(Error::NotT0) if !fs.is_t0() => return Ok(None),
        Err(e) => return Err(e),
    };
    if !fs.is_t0() {
        return Ok(Some("completed a non-T0 space".into()));
    }
    let c2 = kolmogorov_completion(c1.space())?;
    let view = FiniteView::of(&x)?;
    for &u in fs.opens() {
        let uo = view.open(u);
        let once = c1.open_back(&uo)?;
        let twice = c2.open_back(&once)?;
        for (i, p) in view.points().iter().enumerate() {
            let p1 = c1.forward(p)?;
            let p2 = c2.forward(&p1)?;
            let want = u >> i & 1 == 1;
            if once.chi(&p1).accepted_within(fuel) != want || twice.chi(&p2).accepted_within(fuel) != want {
                return Ok(Some(format!("membership of {i} in {u:#b} changes under completion")));
            }
        }
    }

    // base completion twice: ranges of generators and finite intersections
    let index = Arc::new(open_lattice(fs));
    let sub = FiniteSubbase::new(fs.n(), fs.opens().to_vec(), index)?;
    let pb = finite_presubbase(&sub);
    let carrier = FiniteView::of(pb.carrier())?;
    let l1 = base_completion(&pb);
    let l2 = base_completion(&l1.base);
    let p1: Vec<Point> = carrier.points().iter().map(|x| pb.point(x)).collect();
    let p2: Vec<Point> = p1.iter().map(|p| l1.base.point(p)).collect();
    let opens1: Vec<Point> = fs.opens().iter().map(|&u| pb.base_open(&single_up_set(&sub, u)).into_point()).collect();
    let ext = |o: &crate::hyper::OpenSet, pts: &[Point]| -> Bits {
        (0..pts.len()).filter(|&i| o.chi(&pts[i]).accepted_within(fuel)).fold(0, |a, i| a | 1 << i)
    };
    let range1: Vec<Bits> = opens1.iter().map(|u| ext(&l1.base.family(u), &p1)).collect();
    let open_space = Space::open(l1.base.carrier().clone());
    let mut opens2: Vec<Point> = opens1.iter().map(|u| l1.base.generator(u).into_point()).collect();
    for i in 0..opens1.len() {
        for j in i..opens1.len() {
            let k = CompactSat::finite(open_space.clone(), vec![opens1[i].clone(), opens1[j].clone()]);
            opens2.push(l1.base.base_open(&k).into_point());
        }
    }
    let range2: Vec<Bits> = opens2.iter().map(|u| ext(&l2.base.family(u), &p2)).collect();
    let t1 = generate_topology(&range1, fs.n());
    let t2 = generate_topology(&range2, fs.n());
    if t1 != *fs || t2 != t1 {
        return Ok(Some(format!("base completion ranges differ: {:?} then {:?}", t1.opens(), t2.opens())));
    }
    Ok(None)
}

/// `sat{u}` in the open lattice, i.e. the compact saturated index set
/// whose intersection is `u`.
fn single_up_set(sub: &FiniteSubbase, u: Bits) -> CompactSat {
    let index = sub.index().clone();
    let iv = FiniteView::of(&Space::Finite(index.clone())).expect("finite index");
    let pos = sub.sets().iter().position(|&s| s == u).expect("u is listed");
    iv.compact(index.saturate(1 << pos))
}

const PREORDERS: [(usize, usize); 5] = [(1, 1), (1, 1), (4, 3), (29, 19), (355, 219)];

fn enumeration_crosscheck(cfg: &SuiteConfig) -> Result<Tally> {
    let mut t = Tally::new();
    for (n, &frozen) in PREORDERS.iter().enumerate().take(cfg.max_size + 1) {
        let families = (enumerate_spaces(n, false)?.len(), enumerate_spaces(n, true)?.len());
        let posets = count_preorders(n)?;
        let failure = (families != posets || families != frozen).then(|| {
            json!({ "n": n, "families": [families.0, families.1], "preorders": [posets.0, posets.1] })
        });
        if !t.record(failure) {
            break;
        }
    }
    Ok(t)
}

/// Planted indices for the scheduler suite: fixed landmarks up to 10⁴ plus
/// seeded draws.
pub fn planted_tasks(seed: u64) -> Vec<(u64, u64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<(u64, u64)> = [0, 1, 2, 7, 100, 1000, 9999, 10_000].iter().map(|&i| (i, 1 + i % 5)).collect();
    out.extend((0..24).map(|_| (rng.gen_range(0..=10_000), rng.gen_range(1..=8))));
    out
}

fn scheduler_fairness(cfg: &SuiteConfig) -> Tally {
    let mut t = Tally::new();
    for (i, k) in planted_tasks(cfg.seed) {
        let task = |j: u64, f: Fuel| (j == i && f.0 >= k).then_some(k);
        let bound = (i + k) * (i + k);
        let found = dovetail(task, None, Fuel(bound));
        let exact = Scheduler::default().global_step(i, k);
        let tight = dovetail(task, None, Fuel(exact)).is_some() && dovetail(task, None, Fuel(exact - 1)).is_none();
        let sliced = Scheduler { slice: 4 }.search(task, None, Fuel(4 * bound)).map(|(j, _)| j);
        let ok = found == Some((i, exact)) && exact <= bound && tight && sliced == Some(i);
        let failure = (!ok).then(|| json!({ "task": i, "own_step": k, "found": found, "bound": bound }));
        if !t.record(failure) {
            break;
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_and_oversized() {
        assert_eq!(resolve_laws("nope").unwrap_err(), Error::UnknownLaw("nope".into()));
        assert_eq!(resolve_laws("scheduler-fairness,figure1-chain").unwrap(), vec!["figure1-chain", "scheduler-fairness"]);
        let cfg = SuiteConfig { max_size: 5, ..SuiteConfig::default() };
        assert!(matches!(run_law_suite("figure1-chain", &cfg), Err(Error::TooLarge { .. })));
        assert!(matches!(run_law_suite("x", &SuiteConfig::default()), Err(Error::UnknownLaw(_))));
    }

    #[test]
    fn small_suites_pass() {
        let cfg = SuiteConfig { max_size: 2, ..SuiteConfig::default() };
        for law in LAWS {
            let r = run_law_suite(law, &cfg).unwrap();
            assert!(r.passed, "{law}: {:?}", r.counterexample);
            assert!(r.instances > 0, "{law}");
        }
    }

    #[test]
    fn planted_galois_instance_is_reported() {
        let r = run_law_suite("galois-roundtrip", &SuiteConfig { max_size: 1, ..SuiteConfig::default() }).unwrap();
        assert!(r.passed);
        assert_eq!(r.flagged.len(), 1);
    }
}
