//! Integer-stream names, the pairing codecs used to tuple them, and the
//! round-robin scheduler that every semidecision is dovetailed on.
//!
//! A [`Name`] is a total, deterministic map from positions to naturals. It is
//! an intensional process: reading position `i` may cost work, but the value is
//! fixed, so replaying a name always yields the same prefix.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_integer::Roots;

/// Step budget for observing an infinite computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fuel(pub u64);

impl Fuel {
    /// Default budget per semidecision query.
    pub const DEFAULT: Fuel = Fuel(1_000_000);
    /// Budget used when asserting that a constructed process never accepts.
    pub const NEGATIVE: Fuel = Fuel(10_000);

    pub fn steps(self) -> u64 {
        self.0
    }

    pub fn saturating_sub(self, used: u64) -> Fuel {
        Fuel(self.0.saturating_sub(used))
    }
}

/// Cantor pairing `ℕ² → ℕ`.
pub fn pair(m: u64, n: u64) -> u64 {
    let s = m + n;
    s * (s + 1) / 2 + n
}

/// [`pair`], or `None` when the code does not fit in a `u64`.
pub fn checked_pair(m: u64, n: u64) -> Option<u64> {
    let s = m.checked_add(n)?;
    let tri = if s % 2 == 0 { (s / 2).checked_mul(s + 1)? } else { s.checked_mul(s.div_ceil(2))? };
    tri.checked_add(n)
}

/// Inverse of [`pair`].
pub fn unpair(k: u64) -> (u64, u64) {
    let w = (((8 * k as u128) + 1).sqrt() - 1) / 2;
    let w = w as u64;
    let t = w * (w + 1) / 2;
    let n = k - t;
    (w - n, n)
}

#[derive(Clone)]
pub struct Name(Arc<dyn Fn(u64) -> u64 + Send + Sync>);

impl Name {
    pub fn new(f: impl Fn(u64) -> u64 + Send + Sync + 'static) -> Self {
        Name(Arc::new(f))
    }

    pub fn constant(v: u64) -> Self {
        Name::new(move |_| v)
    }

    pub fn zeros() -> Self {
        Name::constant(0)
    }

    /// The name that emits `prefix` and then `fill` forever.
    pub fn from_prefix(prefix: Vec<u64>, fill: u64) -> Self {
        Name::new(move |i| prefix.get(i as usize).copied().unwrap_or(fill))
    }

    /// Eventually periodic stream `prefix · cycle^ω`; an empty cycle repeats zero.
    pub fn eventually_periodic(prefix: Vec<u64>, cycle: Vec<u64>) -> Self {
        Name::new(move |i| {
            let i = i as usize;
            if i < prefix.len() {
                prefix[i]
            } else if cycle.is_empty() {
                0
            } else {
                cycle[(i - prefix.len()) % cycle.len()]
            }
        })
    }

    pub fn at(&self, i: u64) -> u64 {
        (self.0)(i)
    }

    pub fn prefix(&self, len: usize) -> Vec<u64> {
        (0..len as u64).map(|i| self.at(i)).collect()
    }

    pub fn cursor(&self) -> NameCursor {
        NameCursor {
            name: self.clone(),
            emitted: Vec::new(),
        }
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Name{:?}..", self.prefix(8))
    }
}

/// A name being read one value at a time. The emitted prefix only grows.
#[derive(Clone, Debug)]
pub struct NameCursor {
    name: Name,
    emitted: Vec<u64>,
}

impl NameCursor {
    pub fn step(&mut self) -> u64 {
        let v = self.name.at(self.emitted.len() as u64);
        self.emitted.push(v);
        v
    }

    pub fn emitted(&self) -> &[u64] {
        &self.emitted
    }
}

/// Countable tupling: `tuple(ps)(pair(i, j)) = ps(i)(j)`.
pub fn tuple(names: impl Fn(u64) -> Name + Send + Sync + 'static) -> Name {
    Name::new(move |k| {
        let (i, j) = unpair(k);
        names(i).at(j)
    })
}

/// Tuple of finitely many names; components past the end are all-zero.
pub fn tuple_finite(names: Vec<Name>) -> Name {
    tuple(move |i| names.get(i as usize).cloned().unwrap_or_else(Name::zeros))
}

pub fn project(p: &Name, i: u64) -> Name {
    let p = p.clone();
    Name::new(move |j| p.at(pair(i, j)))
}

/// `{n : n + 1 occurs among the first fuel values of p}`.
pub fn decode_enum(p: &Name, fuel: Fuel) -> BTreeSet<u64> {
    (0..fuel.0)
        .map(|i| p.at(i))
        .filter(|&v| v > 0)
        .map(|v| v - 1)
        .collect()
}

/// The name listing `set` (shifted by one) and then zeros.
pub fn enum_name(set: &BTreeSet<u64>) -> Name {
    Name::from_prefix(set.iter().map(|n| n + 1).collect(), 0)
}

/// Round-robin over a growing frontier: round `r` hands `slice` steps to each
/// of the tasks `0..=r`, in index order. Task `i` thus joins at round `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Scheduler {
    pub slice: u64,
}

impl Default for Scheduler {
    fn default() -> Self {
        Scheduler { slice: 1 }
    }
}

impl Scheduler {
    /// Global step (1-based) at which `task` receives its `own`-th step, `own ≥ 1`.
    ///
    /// For `slice = 1` this is `(i+k-1)(i+k)/2 + i + 1 ≤ (i+k)²`.
    pub fn global_step(&self, task: u64, own: u64) -> u64 {
        let own = own.max(1);
        let s = self.slice;
        let round = task + (own - 1) / s;
        let within = own - ((own - 1) / s) * s;
        s.saturating_mul(round.saturating_mul(round + 1) / 2)
            .saturating_add(task.saturating_mul(s))
            .saturating_add(within)
    }

    /// Largest `k` with `global_step(task, k) ≤ fuel`, or 0.
    pub fn own_steps_within(&self, task: u64, fuel: Fuel) -> u64 {
        if self.global_step(task, 1) > fuel.0 {
            return 0;
        }
        let (mut lo, mut hi) = (1u64, 2u64);
        while self.global_step(task, hi) <= fuel.0 {
            lo = hi;
            hi = hi.saturating_mul(2);
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.global_step(task, mid) <= fuel.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// Dovetail a family of tasks. `task(i, budget)` returns the own step count
    /// at which task `i` accepts, if that happens within `budget`. Returns the
    /// earliest acceptor as `(index, global step)`.
    pub fn search(
        &self,
        task: impl Fn(u64, Fuel) -> Option<u64>,
        count: Option<u64>,
        fuel: Fuel,
    ) -> Option<(u64, u64)> {
        let mut best: Option<(u64, u64)> = None;
        let mut i = 0u64;
        while count.is_none_or(|c| i < c) && self.global_step(i, 1) <= fuel.0 {
            if let Some((_, t)) = best {
                // later tasks start after this point
                if self.global_step(i, 1) > t {
                    break;
                }
            }
            let own = self.own_steps_within(i, fuel);
            if let Some(t) = task(i, Fuel(own)) {
                let g = self.global_step(i, t);
                if best.is_none_or(|(_, b)| g < b) {
                    best = Some((i, g));
                }
            }
            i += 1;
        }
        best
    }
}

/// Dovetailing with the default unit slice.
pub fn dovetail(
    task: impl Fn(u64, Fuel) -> Option<u64>,
    count: Option<u64>,
    fuel: Fuel,
) -> Option<(u64, u64)> {
    Scheduler::default().search(task, count, fuel)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairing_basics() {
        assert_eq!(pair(0, 0), 0);
        assert_eq!(unpair(pair(7, 3)), (7, 3));
        let mut seen = std::collections::HashSet::new();
        for i in 0..=100 {
            for j in 0..=100 {
                seen.insert(pair(i, j));
            }
        }
        assert_eq!(seen.len(), 10201);
        for k in 0..5000 {
            let (m, n) = unpair(k);
            assert_eq!(pair(m, n), k);
        }
    }

    #[test]
    fn tuple_projects_components() {
        let p = Name::new(|i| i * 2);
        let q = Name::constant(9);
        let t = tuple_finite(vec![p.clone(), q]);
        assert_eq!(project(&t, 0).prefix(5), p.prefix(5));
        let consts = tuple(Name::constant);
        assert_eq!(project(&consts, 3).prefix(10), vec![3; 10]);
    }

    #[test]
    fn decode_enum_conventions() {
        assert!(decode_enum(&Name::zeros(), Fuel(1000)).is_empty());
        let p = Name::from_prefix(vec![1, 2, 3], 0);
        assert_eq!(decode_enum(&p, Fuel(3)), BTreeSet::from([0, 1, 2]));
        assert_eq!(decode_enum(&p, Fuel(2)), BTreeSet::from([0, 1]));
    }

    #[test]
    fn cursor_prefix_is_append_only() {
        let mut c = Name::new(|i| i + 1).cursor();
        c.step();
        let before = c.emitted().to_vec();
        c.step();
        assert_eq!(&c.emitted()[..1], &before[..]);
        assert_eq!(c.emitted(), &[1, 2]);
    }

    /// Literal simulation of the round-robin schedule.
    fn simulate(slice: u64, task: u64, own: u64) -> u64 {
        let mut received = vec![0u64; (task + 1) as usize];
        let mut global = 0u64;
        let mut round = 0u64;
        loop {
            for i in 0..=round.min(task) {
                for _ in 0..slice {
                    global += 1;
                    received[i as usize] += 1;
                    if i == task && received[i as usize] == own {
                        return global;
                    }
                }
            }
            if round > task {
                // tasks beyond `task` also take their slices this round
                global += slice * (round - task);
            }
            round += 1;
        }
    }

    #[test]
    fn global_step_matches_simulation() {
        for slice in 1..4 {
            let s = Scheduler { slice };
            for task in 0..12 {
                for own in 1..12 {
                    assert_eq!(s.global_step(task, own), simulate(slice, task, own), "{slice} {task} {own}");
                }
            }
        }
    }

    #[test]
    fn dovetail_finds_acceptor_among_divergers() {
        let task = |i: u64, f: Fuel| (i == 1 && f.0 >= 1).then_some(1);
        assert_eq!(dovetail(task, None, Fuel(100)), Some((1, 3)));
        assert_eq!(dovetail(|_, _| None, None, Fuel(10_000)), None);
    }
}
