//! Convergence of sequences of opens in the Scott topology on `O(X)`, for a
//! finite `X` and eventually periodic sequences `prefix · cycle^ω`.

use super::finite::{members, subset, Bits, FiniteSpace};
use crate::error::{Error, Result};

fn check(space: &FiniteSpace, prefix: &[Bits], cycle: &[Bits], u: Bits) -> Result<()> {
    if cycle.is_empty() {
        return Err(Error::Malformed("sequence needs a nonempty repeating part".into()));
    }
    for &v in prefix.iter().chain(cycle).chain([&u]) {
        if !space.is_open(v) {
            return Err(Error::Malformed(format!("{v:#b} is not open")));
        }
    }
    Ok(())
}

/// `U ⊆ ⋃_k (⋂_{n≥k} U_n)°`, evaluated over every start `k` up to the period.
pub fn scott_converges(space: &FiniteSpace, prefix: &[Bits], cycle: &[Bits], u: Bits) -> Result<bool> {
    check(space, prefix, cycle, u)?;
    let lim_inf = (0..=prefix.len())
        .map(|k| {
            let tail = prefix[k..].iter().chain(cycle).fold(space.carrier(), |acc, &v| acc & v);
            space.interior(tail)
        })
        .fold(0, |acc, i| acc | i);
    Ok(subset(u, lim_inf))
}

/// Convergence read off the definition: every up-closed family of opens that
/// contains `U` eventually contains every `U_n`.
pub fn scott_converges_direct(space: &FiniteSpace, prefix: &[Bits], cycle: &[Bits], u: Bits) -> Result<bool> {
    check(space, prefix, cycle, u)?;
    let lattice = space.opens();
    if lattice.len() > 16 {
        return Err(Error::TooLarge { size: lattice.len(), cap: 16 });
    }
    let at = |v: Bits| lattice.iter().position(|&w| w == v).expect("checked open");
    for fam in 0u64..1 << lattice.len() {
        let up_closed = members(fam)
            .all(|i| (0..lattice.len()).all(|j| !subset(lattice[i], lattice[j]) || fam >> j & 1 == 1));
        if up_closed && fam >> at(u) & 1 == 1 && !cycle.iter().all(|&v| fam >> at(v) & 1 == 1) {
            return Ok(false);
        }
    }
    Ok(true)
}
