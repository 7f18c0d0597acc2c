//! Finite topological spaces on the carrier `{0, …, n−1}` with subsets as
//! bitsets, and two independent enumerators of all topologies.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest carrier accepted by [`enumerate_spaces`].
pub const MAX_ENUM: usize = 4;
/// Largest carrier accepted anywhere (subsets of the carrier are enumerated).
pub const MAX_POINTS: usize = 16;

pub type Bits = u64;

pub fn full(n: usize) -> Bits {
    if n == 64 {
        !0
    } else {
        (1u64 << n) - 1
    }
}

pub fn members(bits: Bits) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| bits >> i & 1 == 1)
}

pub fn subset(a: Bits, b: Bits) -> bool {
    a & !b == 0
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteSpace {
    n: usize,
    opens: Vec<Bits>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpaceJson {
    n: usize,
    opens: Vec<Vec<usize>>,
}

pub(crate) fn bits_of(n: usize, elems: &[usize], what: &str) -> Result<Bits> {
    let mut b = 0;
    for &e in elems {
        if e >= n {
            return Err(Error::Malformed(format!("{what}: element {e} is outside the carrier 0..{n}")));
        }
        b |= 1 << e;
    }
    Ok(b)
}

pub(crate) fn list_of(bits: Bits) -> Vec<usize> {
    members(bits).collect()
}

impl FiniteSpace {
    /// Validates that `opens` contains ∅ and the carrier and is closed under ∪ and ∩.
    pub fn new(n: usize, opens: impl IntoIterator<Item = Bits>) -> Result<Self> {
        if n > MAX_POINTS {
            return Err(Error::TooLarge { size: n, cap: MAX_POINTS });
        }
        let mut opens: Vec<Bits> = opens.into_iter().collect();
        opens.sort_unstable();
        opens.dedup();
        let top = full(n);
        if let Some(&bad) = opens.iter().find(|&&u| !subset(u, top)) {
            return Err(Error::Malformed(format!("open {:?} is not a subset of the carrier", list_of(bad))));
        }
        if opens.binary_search(&0).is_err() {
            return Err(Error::Malformed("opens must contain the empty set".into()));
        }
        if opens.binary_search(&top).is_err() {
            return Err(Error::Malformed("opens must contain the whole carrier".into()));
        }
        for &u in &opens {
            for &v in &opens {
                for w in [u | v, u & v] {
                    if opens.binary_search(&w).is_err() {
                        return Err(Error::Malformed(format!(
                            "opens are not closed under union and intersection: {:?} and {:?}",
                            list_of(u),
                            list_of(v)
                        )));
                    }
                }
            }
        }
        Ok(FiniteSpace { n, opens })
    }

    pub fn discrete(n: usize) -> Self {
        FiniteSpace::new(n, 0..=full(n)).expect("power set is a topology")
    }

    pub fn indiscrete(n: usize) -> Self {
        FiniteSpace::new(n, [0, full(n)]).expect("indiscrete topology")
    }

    /// Two points, `{1}` open.
    pub fn sierpinski() -> Self {
        FiniteSpace::new(2, [0b00, 0b10, 0b11]).expect("sierpinski topology")
    }

    /// `0 ≤ 1 ≤ … ≤ n−1`, opens are the final segments.
    pub fn chain(n: usize) -> Self {
        FiniteSpace::new(n, (0..=n).map(|i| full(n) & !full(i))).expect("chain topology")
    }

    /// The Alexandrov topology of a preorder given by up-set rows, `up[x] ∋ y ⟺ x ≤ y`.
    pub fn from_preorder(up: &[Bits]) -> Self {
        let n = up.len();
        let opens = (0..=full(n)).filter(|&a| members(a).all(|x| subset(up[x], a)));
        FiniteSpace::new(n, opens).expect("up-sets form a topology")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn carrier(&self) -> Bits {
        full(self.n)
    }

    pub fn opens(&self) -> &[Bits] {
        &self.opens
    }

    pub fn is_open(&self, a: Bits) -> bool {
        self.opens.binary_search(&a).is_ok()
    }

    /// `up[x]` is the smallest open containing `x`, i.e. `{y : x ≤ y}`.
    pub fn specialization(&self) -> Vec<Bits> {
        (0..self.n)
            .map(|x| {
                self.opens
                    .iter()
                    .filter(|&&u| u >> x & 1 == 1)
                    .fold(self.carrier(), |acc, &u| acc & u)
            })
            .collect()
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.specialization()[x] >> y & 1 == 1
    }

    pub fn is_t0(&self) -> bool {
        let up = self.specialization();
        (0..self.n).all(|x| (0..self.n).all(|y| x == y || !(up[x] >> y & 1 == 1 && up[y] >> x & 1 == 1)))
    }

    /// Up-closure.
    pub fn saturate(&self, a: Bits) -> Bits {
        let up = self.specialization();
        members(a).fold(0, |acc, x| acc | up[x])
    }

    /// Down-closure, which is the topological closure.
    pub fn closure(&self, a: Bits) -> Bits {
        let up = self.specialization();
        (0..self.n).filter(|&y| up[y] & a != 0).fold(0, |acc, y| acc | 1 << y)
    }

    pub fn interior(&self, a: Bits) -> Bits {
        self.opens.iter().filter(|&&u| subset(u, a)).fold(0, |acc, &u| acc | u)
    }

    /// All saturated sets; for a finite space these are its compact saturated subsets.
    pub fn up_sets(&self) -> Vec<Bits> {
        (0..=self.carrier()).filter(|&a| self.saturate(a) == a).collect()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: SpaceJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if raw.n > MAX_POINTS {
            return Err(Error::TooLarge { size: raw.n, cap: MAX_POINTS });
        }
        let mut opens = Vec::with_capacity(raw.opens.len());
        for (k, o) in raw.opens.iter().enumerate() {
            opens.push(bits_of(raw.n, o, &format!("field `opens[{k}]`"))?);
        }
        FiniteSpace::new(raw.n, opens)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(SpaceJson {
            n: self.n,
            opens: self.opens.iter().map(|&u| list_of(u)).collect(),
        })
        .expect("plain data serializes")
    }
}

/// Smallest topology containing `sets`.
pub fn generate_topology(sets: &[Bits], n: usize) -> FiniteSpace {
    let top = full(n);
    let mut basis: Vec<Bits> = vec![top];
    for &s in sets {
        let s = s & top;
        let more: Vec<Bits> = basis.iter().map(|&b| b & s).collect();
        basis.extend(more);
        basis.push(s);
        basis.sort_unstable();
        basis.dedup();
    }
    let mut opens = vec![0];
    for b in basis {
        let more: Vec<Bits> = opens.iter().map(|&u| u | b).collect();
        opens.extend(more);
        opens.sort_unstable();
        opens.dedup();
    }
    FiniteSpace::new(n, opens).expect("generated family is a topology")
}

/// All topologies on `n ≤ 4` labeled points, by brute force over families of
/// proper nonempty subsets closed under union and intersection.
pub fn enumerate_spaces(n: usize, t0_only: bool) -> Result<Vec<FiniteSpace>> {
    if n > MAX_ENUM {
        return Err(Error::TooLarge { size: n, cap: MAX_ENUM });
    }
    let top = full(n);
    let inner: Vec<Bits> = (1..top).collect();
    let mut out = Vec::new();
    for mask in 0u64..1 << inner.len() {
        let mut fam: Vec<Bits> = members(mask).map(|k| inner[k]).collect();
        fam.push(0);
        fam.push(top);
        let closed = fam.iter().all(|&u| {
            fam.iter()
                .all(|&v| fam.contains(&(u | v)) && fam.contains(&(u & v)))
        });
        if closed {
            let space = FiniteSpace::new(n, fam)?;
            if !t0_only || space.is_t0() {
                out.push(space);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Counts labeled preorders (all, and antisymmetric ones) on `n ≤ 4` points,
/// independently of [`enumerate_spaces`].
pub fn count_preorders(n: usize) -> Result<(usize, usize)> {
    if n > MAX_ENUM {
        return Err(Error::TooLarge { size: n, cap: MAX_ENUM });
    }
    let off: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let (mut all, mut partial) = (0, 0);
    for mask in 0u64..1 << off.len() {
        let mut rel = vec![vec![false; n]; n];
        for (i, row) in rel.iter_mut().enumerate() {
            row[i] = true;
        }
        for k in members(mask) {
            let (i, j) = off[k];
            rel[i][j] = true;
        }
        let transitive = (0..n).all(|a| {
            (0..n).all(|b| (0..n).all(|c| !(rel[a][b] && rel[b][c]) || rel[a][c]))
        });
        if transitive {
            all += 1;
            if (0..n).all(|a| (0..n).all(|b| a == b || !(rel[a][b] && rel[b][a]))) {
                partial += 1;
            }
        }
    }
    Ok((all, partial))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructors() {
        assert_eq!(FiniteSpace::discrete(3).opens().len(), 8);
        assert_eq!(FiniteSpace::indiscrete(3).opens(), &[0, 0b111]);
        assert_eq!(FiniteSpace::chain(3).opens(), &[0, 0b100, 0b110, 0b111]);
        assert!(FiniteSpace::new(2, [0, 0b01]).is_err());
        assert!(FiniteSpace::new(2, [0b01, 0b11]).is_err());
        assert!(FiniteSpace::new(3, [0, 0b001, 0b010, 0b111]).is_err());
    }

    #[test]
    fn order_and_saturation() {
        let s = FiniteSpace::sierpinski();
        assert!(s.leq(0, 1) && !s.leq(1, 0));
        assert_eq!(s.saturate(0b01), 0b11);
        assert_eq!(s.closure(0b10), 0b11);
        assert_eq!(s.closure(0b01), 0b01);
        assert!(s.is_t0());
        assert!(!FiniteSpace::indiscrete(2).is_t0());
        let d = FiniteSpace::discrete(3);
        assert_eq!(d.specialization(), vec![0b001, 0b010, 0b100]);
        assert_eq!(d.up_sets().len(), 8);
    }

    #[test]
    fn generation() {
        assert_eq!(generate_topology(&[], 3), FiniteSpace::indiscrete(3));
        assert_eq!(generate_topology(&[1, 2, 4], 3), FiniteSpace::discrete(3));
        let t = generate_topology(&[0b010, 0b110], 3);
        assert_eq!(t.opens(), &[0, 0b010, 0b110, 0b111]);
        let u = generate_topology(&[0b011, 0b110], 3);
        assert_eq!(u.opens(), &[0, 0b010, 0b011, 0b110, 0b111]);
    }

    #[test]
    fn small_counts() {
        let counts: Vec<usize> = (0..=3).map(|n| enumerate_spaces(n, false).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 4, 29]);
        assert_eq!(enumerate_spaces(2, true).unwrap().len(), 3);
        assert_eq!(count_preorders(3).unwrap(), (29, 19));
        assert!(enumerate_spaces(5, false).is_err());
    }

    #[test]
    fn json_round_trip() {
        let s = FiniteSpace::from_json(r#"{ "n": 3, "opens": [[],[1],[1,2],[0,1,2]] }"#).unwrap();
        assert_eq!(s.opens(), &[0, 0b010, 0b110, 0b111]);
        assert_eq!(FiniteSpace::from_json(&s.to_json().to_string()).unwrap(), s);
        assert!(FiniteSpace::from_json(r#"{ "n": 2, "opens": [[],[5],[0,1]] }"#).is_err());
        assert!(FiniteSpace::from_json(r#"{ "n": 2 }"#).is_err());
    }
}
