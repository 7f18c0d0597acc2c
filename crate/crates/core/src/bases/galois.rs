//! Both sides of `δ ≤ δ^B ⟺ B ≤ B_δ` as name-level witnesses, and the finite
//! instances on which they are checked.
//!
//! A reduction translates `δ`-names into `δ^B`-names, which enumerate
//! `B^T(x)` with the `range(p) − 1` convention. A factorization presents each
//! `B_i` as a semidecidable set of `δ`-names.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hyper::OpenSet;
use crate::kernel::{decode_enum, unpair, Fuel, Name};
use crate::oracle::finite::{members, subset, Bits};
use crate::oracle::FiniteSpace;
use crate::sierpinski::SValue;
use crate::spaces::{Payload, Point, Space};

pub type Translator = Arc<dyn Fn(&Name) -> Name + Send + Sync>;
pub type FactorFamily = Arc<dyn Fn(u64) -> OpenSet + Send + Sync>;

#[derive(Clone)]
pub enum GaloisWitness {
    /// `δ ≤ δ^B`
    Reduction(Translator),
    /// `B ≤ B_δ` for an index of `count` elements (`None` for all of ℕ).
    Factorization { count: Option<u64>, family: FactorFamily },
}

impl fmt::Debug for GaloisWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GaloisWitness::Reduction(_) => f.write_str("Reduction"),
            GaloisWitness::Factorization { count, .. } => write!(f, "Factorization({count:?})"),
        }
    }
}

pub fn name_point(p: &Name) -> Point {
    Point::new(Space::Baire, Payload::Name(p.clone()))
}

/// From a reduction, `B_i = {p : i + 1 occurs in T(p)}`, semidecided by scanning `T(p)`.
pub fn galois_forward(w: &GaloisWitness) -> Result<GaloisWitness> {
    let GaloisWitness::Reduction(t) = w else {
        return Err(Error::shape("Reduction", w));
    };
    let t = t.clone();
    let family: FactorFamily = Arc::new(move |i| {
        let t = t.clone();
        OpenSet::new(Space::Baire, move |p| {
            let Ok(p) = p.as_name() else { return SValue::bot() };
            let tp = t(p);
            SValue::from_fn(move |fuel| (0..fuel.0).find(|&k| tp.at(k) == i + 1).map(|k| k + 1))
        })
    });
    Ok(GaloisWitness::Factorization { count: None, family })
}

/// From a factorization, the translator whose position `k = ⟨i, _⟩` emits
/// `i + 1` once `p ∈ B_i` has been confirmed within `k` steps.
pub fn galois_backward(w: &GaloisWitness) -> Result<GaloisWitness> {
    let GaloisWitness::Factorization { count, family } = w else {
        return Err(Error::shape("Factorization", w));
    };
    let (count, family) = (*count, family.clone());
    let t: Translator = Arc::new(move |p: &Name| {
        let (family, point) = (family.clone(), name_point(p));
        Name::new(move |k| {
            let (i, _) = unpair(k);
            let live = count.is_none_or(|c| i < c);
            if live && family(i).chi(&point).accepted_within(Fuel(k)) {
                i + 1
            } else {
                0
            }
        })
    });
    Ok(GaloisWitness::Reduction(t))
}

/// A finite `δ` (names enumerate the indices of the opens of `τ` around `x`)
/// against a finite family `B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGalois {
    pub tau: FiniteSpace,
    pub sets: Vec<Bits>,
}

impl FiniteGalois {
    pub fn new(tau: FiniteSpace, sets: Vec<Bits>) -> Result<Self> {
        if sets.iter().any(|&s| !subset(s, tau.carrier())) {
            return Err(Error::Malformed("family set outside the carrier".into()));
        }
        Ok(FiniteGalois { tau, sets })
    }

    /// Oracle truth of `δ ≤ δ^B`: every `B_i` is open.
    pub fn holds(&self) -> bool {
        self.sets.iter().all(|&s| self.tau.is_open(s))
    }

    pub fn neighborhoods(&self, x: usize) -> BTreeSet<u64> {
        let opens = self.tau.opens();
        (0..opens.len() as u64).filter(|&j| opens[j as usize] >> x & 1 == 1).collect()
    }

    pub fn b_transpose(&self, x: usize) -> BTreeSet<u64> {
        (0..self.sets.len() as u64).filter(|&i| self.sets[i as usize] >> x & 1 == 1).collect()
    }

    /// A `δ`-name of `x`: its neighborhood indices shuffled, padded with
    /// repeats and gaps, then zeros.
    pub fn sample_name(&self, x: usize, rng: &mut impl Rng) -> Name {
        let mut items: Vec<u64> = self.neighborhoods(x).into_iter().map(|j| j + 1).collect();
        let extra = rng.gen_range(0..=4);
        for _ in 0..extra {
            if rng.gen_bool(0.5) || items.is_empty() {
                items.push(0);
            } else {
                let v = items[rng.gen_range(0..items.len())];
                items.push(v);
            }
        }
        items.shuffle(rng);
        Name::from_prefix(items, 0)
    }

    /// `count` names, cycling through the points.
    pub fn sample_names(&self, count: usize, seed: u64) -> Vec<(usize, Name)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = self.tau.n().max(1);
        (0..count)
            .filter(|_| self.tau.n() > 0)
            .map(|k| {
                let x = k % n;
                (x, self.sample_name(x, &mut rng))
            })
            .collect()
    }

    /// Position `⟨pos, i⟩` emits `i + 1` when the open named at `pos` lies in `B_i`.
    pub fn canonical_reduction(&self) -> GaloisWitness {
        let opens = self.tau.opens().to_vec();
        let sets = self.sets.clone();
        GaloisWitness::Reduction(Arc::new(move |p: &Name| {
            let (p, opens, sets) = (p.clone(), opens.clone(), sets.clone());
            Name::new(move |k| {
                let (pos, i) = unpair(k);
                let v = p.at(pos);
                let hit = v > 0
                    && (i as usize) < sets.len()
                    && opens.get(v as usize - 1).is_some_and(|&u| subset(u, sets[i as usize]));
                if hit {
                    i + 1
                } else {
                    0
                }
            })
        }))
    }

    pub fn validate(&self, w: &GaloisWitness, names: &[(usize, Name)], window: u64) -> bool {
        match w {
            GaloisWitness::Reduction(t) => names
                .iter()
                .all(|(x, p)| decode_enum(&t(p), Fuel(window)) == self.b_transpose(*x)),
            GaloisWitness::Factorization { family, .. } => names.iter().all(|(x, p)| {
                let pt = name_point(p);
                (0..self.sets.len())
                    .all(|i| family(i as u64).chi(&pt).accepted_within(Fuel(window)) == (self.sets[i] >> x & 1 == 1))
            }),
        }
    }
}

/// `(τ, B)` for every T0 topology on `n` points in `sizes` and every family of
/// `m` subsets for `m` in `counts`.
pub fn enumerate_instances(sizes: &[usize], counts: &[usize]) -> Result<Vec<FiniteGalois>> {
    let mut out = Vec::new();
    for &n in sizes {
        for tau in crate::oracle::enumerate_spaces(n, true)? {
            for &m in counts {
                let choices = 1u64 << n;
                for mut code in 0..choices.pow(m as u32) {
                    let sets = (0..m)
                        .map(|_| {
                            let s = code % choices;
                            code /= choices;
                            s
                        })
                        .collect();
                    out.push(FiniteGalois::new(tau.clone(), sets)?);
                }
            }
        }
    }
    Ok(out)
}

/// Sierpiński space against `B = {{0}}`, which is not open.
pub fn planted_non_reduction() -> FiniteGalois {
    FiniteGalois::new(FiniteSpace::sierpinski(), vec![0b01]).expect("valid instance")
}

/// Smallest window that covers every output of the witnesses built here for
/// names of the sampled shape.
pub fn window_for(instance: &FiniteGalois) -> u64 {
    let prefix = instance.tau.opens().len() as u64 + 4;
    let m = instance.sets.len().max(1) as u64;
    let forward = crate::kernel::pair(prefix, m) + 1;
    // backward emits at ⟨i, f⟩ once ⟨i, f⟩ ≥ the forward acceptance step
    (0..m)
        .map(|i| {
            let mut f = 0;
            while crate::kernel::pair(i, f) < forward {
                f += 1;
            }
            crate::kernel::pair(i, f) + 1
        })
        .max()
        .unwrap_or(forward)
        .max(forward)
}

pub fn members_list(bits: Bits) -> Vec<usize> {
    members(bits).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn round_trip(inst: &FiniteGalois) -> (bool, bool, bool) {
        let names = inst.sample_names(100, 7);
        let w = window_for(inst);
        let red = inst.canonical_reduction();
        let fac = galois_forward(&red).unwrap();
        let back = galois_backward(&fac).unwrap();
        (inst.validate(&red, &names, w), inst.validate(&fac, &names, w), inst.validate(&back, &names, w))
    }

    #[test]
    fn identity_family_round_trips() {
        let tau = FiniteSpace::chain(3);
        let inst = FiniteGalois::new(tau.clone(), tau.opens().to_vec()).unwrap();
        assert!(inst.holds());
        assert_eq!(round_trip(&inst), (true, true, true));
    }

    #[test]
    fn coarser_family_round_trips() {
        let inst = FiniteGalois::new(FiniteSpace::discrete(2), vec![0b01]).unwrap();
        assert_eq!(round_trip(&inst), (true, true, true));
    }

    #[test]
    fn planted_instance_is_flagged() {
        let inst = planted_non_reduction();
        assert!(!inst.holds());
        let (a, b, c) = round_trip(&inst);
        assert!(!a && !b && !c);
    }

    #[test]
    fn wrong_direction_is_rejected() {
        let inst = planted_non_reduction();
        let red = inst.canonical_reduction();
        assert!(galois_backward(&red).is_err());
        assert!(galois_forward(&galois_forward(&red).unwrap()).is_err());
    }
}
