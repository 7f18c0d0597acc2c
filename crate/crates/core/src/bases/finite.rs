//! Presubbases over finite carriers and their oracle-scale checks.
//!
//! Inverses here read a finite open by evaluating it on every point at a
//! fixed fuel; a query that has not accepted by then counts as rejected.
//! This is exact for the constructed finite opens, whose acceptance steps are
//! bounded far below the fuel used.

use std::sync::Arc;

use super::{prebase_from_point_closure, Prebase, Presubbase, TransposeInverse};
use crate::error::{Error, Result};
use crate::hyper::{CompactSat, Kolmogorov, OpenSet};
use crate::kernel::Fuel;
use crate::oracle::finite::{members, subset, Bits};
use crate::oracle::{generate_topology, FiniteSpace, FiniteSubbase, FiniteView};
use crate::spaces::{Point, Space};

/// Kolmogorov witness of a finite T0 space: match the accepted opens against
/// each point's neighborhood system.
pub fn finite_kolmogorov(fs: &Arc<FiniteSpace>) -> Result<Kolmogorov> {
    if !fs.is_t0() {
        return Err(Error::NotT0);
    }
    let view = FiniteView::of(&Space::Finite(fs.clone()))?;
    let fs = fs.clone();
    Ok(Arc::new(move |filter: &OpenSet, fuel| {
        let accepted: Vec<Bits> = fs
            .opens()
            .iter()
            .copied()
            .filter(|&u| filter.chi(&view.open(u).into_point()).accepted_within(fuel))
            .collect();
        (0..fs.n())
            .find(|&x| {
                let nbhd: Vec<Bits> = fs.opens().iter().copied().filter(|&u| u >> x & 1 == 1).collect();
                nbhd == accepted
            })
            .map(|x| Point::element(&fs, x))
            .ok_or_else(|| Error::OffRange("no point has this neighborhood filter".into()))
    }))
}

/// The opens of `fs`, ordered by inclusion, as a finite index space.
pub fn open_lattice(fs: &FiniteSpace) -> FiniteSpace {
    let opens = fs.opens();
    let up: Vec<Bits> = opens
        .iter()
        .map(|&u| {
            opens
                .iter()
                .enumerate()
                .filter(|(_, &v)| subset(u, v))
                .fold(0, |acc, (j, _)| acc | 1 << j)
        })
        .collect();
    FiniteSpace::from_preorder(&up)
}

fn table_inverse(index: Arc<FiniteSpace>, carrier: Arc<FiniteSpace>, transposes: Vec<Bits>) -> TransposeInverse {
    Arc::new(move |u: &OpenSet, fuel| {
        let seen = (0..index.n())
            .filter(|&y| u.chi(&Point::element(&index, y)).accepted_within(fuel))
            .fold(0, |acc, y| acc | 1 << y);
        transposes
            .iter()
            .position(|&t| t == seen)
            .map(|x| Point::element(&carrier, x))
            .ok_or_else(|| Error::OffRange("open is not the transpose of any point".into()))
    })
}

/// A finite subbase as a presubbase of its own `τ_K` topology; the transpose
/// inverse is present when the transpose is injective.
pub fn finite_presubbase(b: &FiniteSubbase) -> Presubbase {
    let carrier = Arc::new(b.tau_k());
    let x = Space::Finite(carrier.clone());
    let view = FiniteView::of(&x).expect("finite carrier");
    let index = b.index().clone();
    let sets = b.sets().to_vec();
    let family = move |y: &Point| match y.as_element() {
        Ok(i) if i < sets.len() => view.open(sets[i]),
        _ => OpenSet::empty(view.space().clone()),
    };
    let transposes: Vec<Bits> = (0..b.n()).map(|x| b.transpose(x)).collect();
    let inverse = b.is_injective().then(|| table_inverse(index.clone(), carrier.clone(), transposes));
    Presubbase::new("finite", Space::Finite(index), x, family, inverse)
}

/// `id`-like prebase of a finite T0 space, indexed by its lattice of opens.
pub fn identity_like(fs: &FiniteSpace) -> Result<Prebase> {
    if !fs.is_t0() {
        return Err(Error::NotT0);
    }
    let carrier = Arc::new(fs.clone());
    let index = Arc::new(open_lattice(fs));
    let opens = fs.opens().to_vec();
    let sub = FiniteSubbase::new(fs.n(), opens.clone(), index.clone())?;
    let x = Space::Finite(carrier.clone());
    let view = FiniteView::of(&x)?;
    let family = {
        let (opens, view) = (opens.clone(), view.clone());
        move |y: &Point| match y.as_element() {
            Ok(i) if i < opens.len() => view.open(opens[i]),
            _ => OpenSet::empty(view.space().clone()),
        }
    };
    let transposes: Vec<Bits> = (0..fs.n()).map(|x| sub.transpose(x)).collect();
    let inverse = table_inverse(index.clone(), carrier.clone(), transposes);
    let base = Presubbase::new("open-lattice", Space::Finite(index.clone()), x, family, Some(inverse));
    let b2 = base.clone();
    let resolver = move |k: &CompactSat, fuel: Fuel| -> Result<Point> {
        let cap = (0..carrier.n())
            .filter(|&x| k.forall(&b2.transpose(&Point::element(&carrier, x))).accepted_within(fuel))
            .fold(0, |acc, x| acc | 1 << x);
        let z = opens.iter().position(|&u| u == cap).ok_or(Error::pending(fuel.0))?;
        Ok(Point::element(&index, z))
    };
    Ok(prebase_from_point_closure(&base, resolver))
}

/// Transposes of every carrier point, as bitsets over the index view.
pub fn transposes(b: &Presubbase, index: &FiniteView, carrier: &FiniteView, fuel: Fuel) -> Vec<Bits> {
    carrier.points().iter().map(|x| index.extension(&b.transpose(x), fuel)).collect()
}

/// `τ_K` of a presubbase over finite views: generated by `⋂_{y∈K} B_y` for up-sets `K`.
pub fn induced_topology(b: &Presubbase, index: &FiniteView, carrier: &FiniteView, fuel: Fuel) -> FiniteSpace {
    let ts = transposes(b, index, carrier, fuel);
    let sets: Vec<Bits> = index
        .topology()
        .up_sets()
        .into_iter()
        .map(|k| (0..ts.len()).filter(|&x| subset(k, ts[x])).fold(0, |acc, x| acc | 1 << x))
        .collect();
    generate_topology(&sets, carrier.len())
}

/// Checks `⋂_{y∈K} B_y = ⋃_{y∈R(K)} B_y` for every up-set `K` of the index and
/// that the family covers the carrier. Returns a description of the first failure.
pub fn validate_prebase(p: &Prebase, index: &FiniteView, carrier: &FiniteView, fuel: Fuel) -> Result<Option<String>> {
    let ts = transposes(&p.base, index, carrier, fuel);
    let cover = ts.iter().enumerate().filter(|(_, &t)| t != 0).fold(0, |acc, (x, _)| acc | 1 << x);
    if cover != carrier.topology().carrier() {
        return Ok(Some(format!("family covers only {cover:#b}")));
    }
    for k in index.topology().up_sets() {
        let lhs = (0..ts.len()).filter(|&x| subset(k, ts[x])).fold(0, |acc, x| acc | 1 << x);
        let a = p.resolve(&index.compact(k), fuel)?;
        let rhs = (0..ts.len())
            .filter(|&x| a.exists(&p.base.transpose(&carrier.points()[x])).accepted_within(fuel))
            .fold(0, |acc, x| acc | 1 << x);
        if lhs != rhs {
            return Ok(Some(format!(
                "K = {:?}: intersection {:?} but resolved union {:?}",
                members(k).collect::<Vec<_>>(),
                members(lhs).collect::<Vec<_>>(),
                members(rhs).collect::<Vec<_>>()
            )));
        }
    }
    Ok(None)
}

/// Round trip of the transpose inverse on every carrier point.
pub fn validate_transpose_inverse(b: &Presubbase, carrier: &FiniteView, fuel: Fuel) -> Result<bool> {
    for (i, x) in carrier.points().iter().enumerate() {
        let back = b.invert_transpose(&b.transpose(x), fuel)?;
        if carrier.index_of(&back) != Some(i) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    const F: Fuel = Fuel(100_000);

    #[test]
    fn identity_like_prebases_validate() {
        for fs in [FiniteSpace::sierpinski(), FiniteSpace::chain(3), FiniteSpace::discrete(2)] {
            let p = identity_like(&fs).unwrap();
            let iv = FiniteView::of(p.base.index()).unwrap();
            let xv = FiniteView::of(p.base.carrier()).unwrap();
            assert_eq!(validate_prebase(&p, &iv, &xv, F).unwrap(), None);
            assert!(validate_transpose_inverse(&p.base, &xv, F).unwrap());
            assert_eq!(induced_topology(&p.base, &iv, &xv, F), fs);
        }
        assert_eq!(identity_like(&FiniteSpace::indiscrete(2)).unwrap_err(), Error::NotT0);
    }

    #[test]
    fn kolmogorov_witness_reads_filters() {
        let fs = Arc::new(FiniteSpace::chain(3));
        let k = finite_kolmogorov(&fs).unwrap();
        for x in 0..3 {
            let filter = crate::hyper::neighborhood_filter(&Point::element(&fs, x));
            assert_eq!(k(&filter, F).unwrap().as_element().unwrap(), x);
        }
        let none = OpenSet::empty(Space::open(Space::Finite(fs.clone())));
        assert!(k(&none, F).is_err());
        assert!(finite_kolmogorov(&Arc::new(FiniteSpace::indiscrete(2))).is_err());
    }
}
