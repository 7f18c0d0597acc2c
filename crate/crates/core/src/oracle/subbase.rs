//! Finite families `(B_y)_{y ∈ Y}` over a finite carrier, indexed by a finite
//! preordered space, and the topologies they induce.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::finite::{bits_of, full, generate_topology, list_of, members, subset, Bits, FiniteSpace};
use crate::error::{Error, Result};
use crate::hyper::OpenSet;
use crate::kernel::Fuel;
use crate::spaces::Point;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSubbase {
    n: usize,
    sets: Vec<Bits>,
    index: Arc<FiniteSpace>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SubbaseJson {
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    opens: Option<Vec<Vec<usize>>>,
    sets: Vec<Vec<usize>>,
    index_order: Vec<(usize, usize)>,
}

/// Reflexive-transitive closure of `pairs` as up-set rows.
pub fn preorder_rows(m: usize, pairs: &[(usize, usize)]) -> Result<Vec<Bits>> {
    let mut up: Vec<Bits> = (0..m).map(|i| 1 << i).collect();
    for &(a, b) in pairs {
        if a >= m || b >= m {
            return Err(Error::Malformed(format!("field `index_order`: pair ({a}, {b}) refers to a missing index")));
        }
        up[a] |= 1 << b;
    }
    loop {
        let next: Vec<Bits> = up.iter().map(|&row| members(row).fold(row, |acc, y| acc | up[y])).collect();
        if next == up {
            return Ok(up);
        }
        up = next;
    }
}

/// Ranges and results of the four topologies of a finite presubbase.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Figure1Report {
    pub tau_b: FiniteSpace,
    pub tau_inf: FiniteSpace,
    pub tau_k: FiniteSpace,
    pub final_topology: FiniteSpace,
    pub discrete_index: bool,
    pub injective: bool,
}

fn included(a: &FiniteSpace, b: &FiniteSpace) -> bool {
    a.opens().iter().all(|&u| b.is_open(u))
}

impl Figure1Report {
    pub fn chain_holds(&self) -> bool {
        included(&self.tau_b, &self.tau_inf) && included(&self.tau_inf, &self.tau_k)
    }

    pub fn final_matches(&self) -> bool {
        self.tau_k == self.final_topology
    }

    pub fn discrete_all_equal(&self) -> bool {
        !self.discrete_index || (self.tau_b == self.tau_inf && self.tau_inf == self.tau_k)
    }

    pub fn t0_iff_injective(&self) -> bool {
        self.tau_k.is_t0() == self.injective
    }

    pub fn ok(&self) -> bool {
        self.chain_holds() && self.final_matches() && self.discrete_all_equal() && self.t0_iff_injective()
    }
}

impl FiniteSubbase {
    pub fn new(n: usize, sets: Vec<Bits>, index: Arc<FiniteSpace>) -> Result<Self> {
        if index.n() != sets.len() {
            return Err(Error::Malformed(format!(
                "{} sets but the index space has {} points",
                sets.len(),
                index.n()
            )));
        }
        if let Some(&bad) = sets.iter().find(|&&s| !subset(s, full(n))) {
            return Err(Error::Malformed(format!("set {:?} is not a subset of the carrier", list_of(bad))));
        }
        Ok(FiniteSubbase { n, sets, index })
    }

    pub fn from_order(n: usize, sets: Vec<Bits>, order: &[(usize, usize)]) -> Result<Self> {
        let up = preorder_rows(sets.len(), order)?;
        FiniteSubbase::new(n, sets, Arc::new(FiniteSpace::from_preorder(&up)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sets(&self) -> &[Bits] {
        &self.sets
    }

    pub fn index(&self) -> &Arc<FiniteSpace> {
        &self.index
    }

    /// `y ≤ y' ⟹ B_y ⊆ B_y'`, i.e. `B` is continuous into `O(X)`.
    pub fn is_monotone(&self) -> bool {
        let up = self.index.specialization();
        (0..self.sets.len()).all(|y| members(up[y]).all(|z| subset(self.sets[y], self.sets[z])))
    }

    /// `B^T(x) = {y : x ∈ B_y}` as a bitset over the index.
    pub fn transpose(&self, x: usize) -> Bits {
        self.sets
            .iter()
            .enumerate()
            .filter(|(_, &s)| s >> x & 1 == 1)
            .fold(0, |acc, (y, _)| acc | 1 << y)
    }

    pub fn is_injective(&self) -> bool {
        let ts: Vec<Bits> = (0..self.n).map(|x| self.transpose(x)).collect();
        (0..self.n).all(|a| (a + 1..self.n).all(|b| ts[a] != ts[b]))
    }

    pub fn intersect(&self, ys: Bits) -> Bits {
        members(ys).fold(full(self.n), |acc, y| acc & self.sets[y])
    }

    /// `(K, ⋂_{y∈K} B_y)` for every up-set `K` of the index, the empty one giving `X`.
    pub fn base_sets(&self) -> Vec<(Bits, Bits)> {
        self.index.up_sets().into_iter().map(|k| (k, self.intersect(k))).collect()
    }

    pub fn tau_b(&self) -> FiniteSpace {
        generate_topology(&self.sets, self.n)
    }

    /// Generated by `⋂_{n∈ℕ_∞} B_{y_n}` over convergent sequences. In a finite index
    /// a sequence converges to `l` iff its tail stays in `↑l`, so its range is a
    /// finite prefix set together with `l` and a tail inside `↑l`.
    pub fn tau_inf(&self) -> FiniteSpace {
        let m = self.sets.len();
        let up = self.index.specialization();
        let mut sets = Vec::new();
        for l in 0..m {
            for prefix in 0..=full(m) {
                let mut tail = up[l];
                loop {
                    sets.push(self.intersect(prefix | tail | 1 << l));
                    if tail == 0 {
                        break;
                    }
                    tail = (tail - 1) & up[l];
                }
            }
        }
        sets.sort_unstable();
        sets.dedup();
        generate_topology(&sets, self.n)
    }

    pub fn tau_k(&self) -> FiniteSpace {
        let sets: Vec<Bits> = self.base_sets().into_iter().map(|(_, b)| b).collect();
        generate_topology(&sets, self.n)
    }

    /// Final topology of `δ^B`: preimages under `B^T` of Scott-open families,
    /// which on the finite lattice `O(Y)` are the up-closed families.
    pub fn final_topology(&self) -> Result<FiniteSpace> {
        let lattice = self.index.opens();
        if lattice.len() > 16 {
            return Err(Error::TooLarge { size: lattice.len(), cap: 16 });
        }
        let ts: Vec<Bits> = (0..self.n).map(|x| self.transpose(x)).collect();
        let mut opens = Vec::new();
        for fam in 0u64..1 << lattice.len() {
            let up_closed = members(fam).all(|i| {
                (0..lattice.len()).all(|j| !subset(lattice[i], lattice[j]) || fam >> j & 1 == 1)
            });
            if !up_closed {
                continue;
            }
            let pre = (0..self.n)
                .filter(|&x| members(fam).any(|i| lattice[i] == ts[x]))
                .fold(0, |acc, x| acc | 1 << x);
            opens.push(pre);
        }
        FiniteSpace::new(self.n, opens)
    }

    pub fn figure1_check(&self) -> Result<Figure1Report> {
        if !self.is_monotone() {
            return Err(Error::Malformed("family is not monotone in the index order".into()));
        }
        let m = self.index.n();
        Ok(Figure1Report {
            tau_b: self.tau_b(),
            tau_inf: self.tau_inf(),
            tau_k: self.tau_k(),
            final_topology: self.final_topology()?,
            discrete_index: self.index.specialization().iter().enumerate().all(|(y, &r)| r == 1 << y) || m == 0,
            injective: self.is_injective(),
        })
    }

    /// Candidate carrier points for a `δ^B`-point given as an open of the index:
    /// those `x'` whose transpose contains every index accepted within `fuel`.
    pub fn decode_finite(&self, point: &OpenSet, fuel: Fuel) -> Bits {
        let seen = (0..self.sets.len())
            .filter(|&y| point.chi(&Point::element(&self.index, y)).accepted_within(fuel))
            .fold(0, |acc, y| acc | 1 << y);
        (0..self.n)
            .filter(|&x| subset(seen, self.transpose(x)))
            .fold(0, |acc, x| acc | 1 << x)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: SubbaseJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if raw.n > super::finite::MAX_POINTS {
            return Err(Error::TooLarge { size: raw.n, cap: super::finite::MAX_POINTS });
        }
        let mut sets = Vec::new();
        for (k, s) in raw.sets.iter().enumerate() {
            sets.push(bits_of(raw.n, s, &format!("field `sets[{k}]`"))?);
        }
        if let Some(opens) = &raw.opens {
            let mut bits = Vec::new();
            for (k, o) in opens.iter().enumerate() {
                bits.push(bits_of(raw.n, o, &format!("field `opens[{k}]`"))?);
            }
            let space = FiniteSpace::new(raw.n, bits)?;
            if let Some(k) = sets.iter().position(|&s| !space.is_open(s)) {
                return Err(Error::Malformed(format!("field `sets[{k}]` is not open in the given topology")));
            }
        }
        FiniteSubbase::from_order(raw.n, sets, &raw.index_order)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let up = self.index.specialization();
        let index_order = (0..up.len())
            .flat_map(|a| members(up[a]).filter(move |&b| b != a).map(move |b| (a, b)))
            .collect();
        serde_json::to_value(SubbaseJson {
            n: self.n,
            opens: None,
            sets: self.sets.iter().map(|&s| list_of(s)).collect(),
            index_order,
        })
        .expect("plain data serializes")
    }
}

/// Every monotone family over every index space in `indices` and carrier size `n`.
pub fn monotone_families(n: usize, index: &Arc<FiniteSpace>) -> Vec<FiniteSubbase> {
    let m = index.n();
    let choices = 1u64 << n;
    let total = choices.pow(m as u32);
    (0..total)
        .filter_map(|mut code| {
            let sets = (0..m)
                .map(|_| {
                    let s = code % choices;
                    code /= choices;
                    s
                })
                .collect();
            let b = FiniteSubbase::new(n, sets, index.clone()).ok()?;
            b.is_monotone().then_some(b)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sierpinski::SValue;

    #[test]
    fn chain_index_intersections() {
        // 0 ≤ 1, B_0 = {0} ⊊ B_1 = {0,1}
        let b = FiniteSubbase::from_order(3, vec![0b001, 0b011], &[(0, 1)]).unwrap();
        let bases: Vec<Bits> = b.base_sets().into_iter().map(|(_, s)| s).collect();
        assert_eq!(bases, vec![0b111, 0b011, 0b001]);
        let r = b.figure1_check().unwrap();
        assert!(r.ok());
        assert!(r.injective);
    }

    #[test]
    fn discrete_index_all_equal() {
        let b = FiniteSubbase::from_order(3, vec![0b011, 0b110], &[]).unwrap();
        let r = b.figure1_check().unwrap();
        assert!(r.ok());
        assert_eq!(r.tau_k, r.tau_b);
        assert!(r.injective && r.tau_k.is_t0());
    }

    #[test]
    fn decode_candidates_shrink() {
        let b = FiniteSubbase::from_order(2, vec![0b01, 0b10], &[]).unwrap();
        let idx = b.index().clone();
        let point = OpenSet::new(crate::spaces::Space::Finite(idx), |y| match y.as_element() {
            Ok(0) => SValue::accept_at(5),
            _ => SValue::bot(),
        });
        assert_eq!(b.decode_finite(&point, Fuel(4)), 0b11);
        assert_eq!(b.decode_finite(&point, Fuel(5)), 0b01);
    }

    #[test]
    fn json() {
        let text = r#"{ "n": 2, "sets": [[0],[0,1]], "index_order": [[0,1]] }"#;
        let b = FiniteSubbase::from_json(text).unwrap();
        assert!(b.is_monotone());
        assert_eq!(FiniteSubbase::from_json(&b.to_json().to_string()).unwrap(), b);
        assert!(FiniteSubbase::from_json(r#"{ "n": 2, "sets": [[0]], "index_order": [[0,3]] }"#).is_err());
    }

    #[test]
    fn monotone_family_counts() {
        let chain = Arc::new(FiniteSpace::chain(2));
        // pairs A ⊆ B of subsets of a 2-set: 3^2
        assert_eq!(monotone_families(2, &chain).len(), 9);
    }
}
