//! Re-representation of points by their neighborhood filters.

use std::sync::Arc;

use super::{identity_base, LacombeBase, Presubbase};
use crate::error::{Error, Result};
use crate::hyper::{neighborhood_filter, Kolmogorov, OpenSet};
use crate::oracle::FiniteView;
use crate::sierpinski::SValue;
use crate::spaces::{Payload, Point, Space};

/// `X•`: points of `X` named by names of `U_x ∈ O(O(X))`.
#[derive(Clone, Debug)]
pub struct Completion {
    base: Space,
    space: Space,
}

/// Completes `X`. Finite composites are checked for T0 first.
pub fn kolmogorov_completion(x: &Space) -> Result<Completion> {
    if let Ok(view) = FiniteView::of(x) {
        if !view.topology().is_t0() {
            return Err(Error::NotT0);
        }
    }
    Ok(Completion {
        base: x.clone(),
        space: Space::Completion(Arc::new(x.clone())),
    })
}

impl Completion {
    pub fn base(&self) -> &Space {
        &self.base
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    /// `δ ≤ δ•`, realized by the neighborhood map.
    pub fn forward(&self, x: &Point) -> Result<Point> {
        x.expect_space(&self.base)?;
        Ok(Point::new(self.space.clone(), Payload::Open(neighborhood_filter(x))))
    }

    /// An open of `X` as an open of `X•`, through `x ∈ U ⟺ U ∈ U_x`.
    pub fn open_back(&self, u: &OpenSet) -> Result<OpenSet> {
        if u.over() != &self.base {
            return Err(Error::shape(&self.base, u.over()));
        }
        let u = u.clone().into_point();
        Ok(OpenSet::new(self.space.clone(), move |p| match p.as_open() {
            Ok(filter) => filter.chi(&u),
            Err(_) => SValue::bot(),
        }))
    }

    /// An open of `X•` pulled back along [`Completion::forward`].
    pub fn open_forth(&self, v: &OpenSet) -> Result<OpenSet> {
        if v.over() != &self.space {
            return Err(Error::shape(&self.space, v.over()));
        }
        let (v, me) = (v.clone(), self.clone());
        Ok(OpenSet::new(self.base.clone(), move |x| match me.forward(x) {
            Ok(p) => v.chi(&p),
            Err(_) => SValue::bot(),
        }))
    }

    /// `X•` is a computable Kolmogorov space.
    pub fn kolmogorov(&self) -> Kolmogorov {
        let me = self.clone();
        Arc::new(move |filter: &OpenSet, _fuel| {
            let (me2, filter) = (me.clone(), filter.clone());
            let nbhd = OpenSet::new(Space::open(me.base.clone()), move |u| match u.as_open() {
                Ok(u) => match me2.open_back(u) {
                    Ok(v) => filter.chi(&v.into_point()),
                    Err(_) => SValue::bot(),
                },
                Err(_) => SValue::bot(),
            });
            Ok(Point::new(me.space.clone(), Payload::Open(nbhd)))
        })
    }
}

/// `B• = B_{δ^B}`: the identity base of the presubbase representation.
pub fn base_completion(b: &Presubbase) -> LacombeBase {
    identity_base(&b.space(), Some(b.kolmogorov())).expect("witness supplied")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Fuel;
    use crate::oracle::FiniteSpace;

    #[test]
    fn completion_preserves_membership() {
        let fs = FiniteSpace::chain(3);
        let x = Space::finite(fs.clone());
        let c = kolmogorov_completion(&x).unwrap();
        let view = FiniteView::of(&x).unwrap();
        for &bits in fs.opens() {
            let u = view.open(bits);
            let back = c.open_back(&u).unwrap();
            for p in view.points() {
                let f = Fuel(1000);
                assert_eq!(back.chi(&c.forward(p).unwrap()).accepted_within(f), u.chi(p).accepted_within(f));
            }
        }
        assert_eq!(kolmogorov_completion(&Space::finite(FiniteSpace::indiscrete(2))).unwrap_err(), Error::NotT0);
    }
}
