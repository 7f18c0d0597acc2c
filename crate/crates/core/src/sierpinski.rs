//! Sierpiński space as the type of semidecisions.
//!
//! An [`SValue`] has an intrinsic acceptance step (possibly never). Querying it
//! with fuel `f` reports `Accepted(t)` exactly when that step `t ≤ f`, so
//! acceptance is stable under more fuel. There is no negation.

use std::fmt;
use std::sync::Arc;

use crate::kernel::{dovetail, Fuel};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Accepted(u64),
    /// Not accepted within the budget; carries the steps spent.
    Pending(u64),
}

impl Status {
    pub fn is_accepted(self) -> bool {
        matches!(self, Status::Accepted(_))
    }
}

#[derive(Clone)]
pub struct SValue(Arc<dyn Fn(Fuel) -> Option<u64> + Send + Sync>);

impl SValue {
    /// Wrap a query function. `f(fuel)` must return `Some(t)` with `t ≤ fuel`
    /// iff the process accepts at its `t`-th step, with `t` independent of fuel.
    pub fn from_fn(f: impl Fn(Fuel) -> Option<u64> + Send + Sync + 'static) -> Self {
        SValue(Arc::new(f))
    }

    pub fn top() -> Self {
        SValue::accept_at(0)
    }

    pub fn bot() -> Self {
        SValue::from_fn(|_| None)
    }

    pub fn accept_at(n: u64) -> Self {
        SValue::from_fn(move |f| (f.0 >= n).then_some(n))
    }

    pub fn from_bool(b: bool) -> Self {
        if b {
            SValue::top()
        } else {
            SValue::bot()
        }
    }

    pub fn run(&self, fuel: Fuel) -> Status {
        match (self.0)(fuel) {
            Some(t) if t <= fuel.0 => Status::Accepted(t),
            _ => Status::Pending(fuel.0),
        }
    }

    pub fn acceptance(&self, fuel: Fuel) -> Option<u64> {
        match self.run(fuel) {
            Status::Accepted(t) => Some(t),
            Status::Pending(_) => None,
        }
    }

    pub fn accepted_within(&self, fuel: Fuel) -> bool {
        self.run(fuel).is_accepted()
    }

    /// Same outcome, `n` steps later.
    pub fn delay(self, n: u64) -> Self {
        SValue::from_fn(move |f| {
            let t = (self.0)(f.saturating_sub(n))?;
            Some(t + n)
        })
    }
}

impl fmt::Debug for SValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SValue({:?})", self.run(Fuel(64)))
    }
}

/// Sequential conjunction: accepts after the sum of the inputs' step counts.
pub fn and_finite(vs: Vec<SValue>) -> SValue {
    SValue::from_fn(move |fuel| {
        let mut used = 0u64;
        for v in &vs {
            let t = v.acceptance(fuel.saturating_sub(used))?;
            used += t;
        }
        Some(used)
    })
}

pub fn and2(a: SValue, b: SValue) -> SValue {
    and_finite(vec![a, b])
}

/// Countable disjunction, dovetailed.
pub fn or_countable(vs: impl Fn(u64) -> SValue + Send + Sync + 'static) -> SValue {
    SValue::from_fn(move |fuel| dovetail(|i, f| vs(i).acceptance(f), None, fuel).map(|(_, g)| g))
}

/// Finite disjunction on the same schedule as [`or_countable`].
pub fn or_finite(vs: Vec<SValue>) -> SValue {
    SValue::from_fn(move |fuel| {
        dovetail(|i, f| vs[i as usize].acceptance(f), Some(vs.len() as u64), fuel).map(|(_, g)| g)
    })
}

pub fn or2(a: SValue, b: SValue) -> SValue {
    or_finite(vec![a, b])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Scheduler;

    #[test]
    fn constants() {
        assert_eq!(SValue::top().run(Fuel(0)), Status::Accepted(0));
        assert_eq!(SValue::bot().run(Fuel(1_000_000)), Status::Pending(1_000_000));
        let a = SValue::accept_at(17);
        assert!(!a.accepted_within(Fuel(16)));
        assert_eq!(a.run(Fuel(17)), Status::Accepted(17));
    }

    #[test]
    fn conjunction() {
        assert!(and2(SValue::top(), SValue::top()).accepted_within(Fuel(0)));
        assert!(!and2(SValue::top(), SValue::bot()).accepted_within(Fuel::NEGATIVE));
        // frozen scheduler constant c = 0
        let v = and2(SValue::accept_at(3), SValue::accept_at(5));
        assert_eq!(v.run(Fuel(8)), Status::Accepted(8));
        assert!(!v.accepted_within(Fuel(7)));
        assert!(and_finite(vec![]).accepted_within(Fuel(0)));
    }

    #[test]
    fn disjunction() {
        let v = or_countable(|i| SValue::from_bool(i == 2));
        assert!(v.accepted_within(Fuel(100)));
        assert!(!or_countable(|_| SValue::bot()).accepted_within(Fuel::NEGATIVE));
        let planted = or_countable(|i| SValue::from_bool(i == 512));
        let bound = Scheduler::default().global_step(512, 1);
        assert_eq!(planted.acceptance(Fuel::DEFAULT), Some(bound));
        assert!(!planted.accepted_within(Fuel(bound - 1)));
        assert!(!or_finite(vec![]).accepted_within(Fuel(100)));
    }
}
