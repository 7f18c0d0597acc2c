//! Presubbases, prebases and Lacombe bases, the presubbase representation, and
//! the closure operators built from them.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hyper::{
    closed_image, compact_image, compact_intersection, compact_union, overt_union, point_to_closed,
    point_to_compact, CompactSat, Kolmogorov, OpenSet, OvertClosed,
};
use crate::kernel::Fuel;
use crate::sierpinski::SValue;
use crate::spaces::{Payload, Point, Space};

pub mod completion;
pub mod constructions;
pub mod finite;
pub mod galois;

pub use completion::{base_completion, kolmogorov_completion, Completion};
pub use constructions::{coproduct_prebase, meet_prebase, product_prebase, sequence_prebase, subspace_prebase};
pub use galois::{galois_backward, galois_forward, GaloisWitness};

type Family = Arc<dyn Fn(&Point) -> OpenSet + Send + Sync>;
/// Recovers a carrier point from its transpose; the embedding witness.
pub type TransposeInverse = Arc<dyn Fn(&OpenSet, Fuel) -> Result<Point> + Send + Sync>;
/// One selected value of the multivalued `R : K₋(Y) ⇉ A₊(Y)`.
pub type Resolver = Arc<dyn Fn(&CompactSat, Fuel) -> Result<OvertClosed> + Send + Sync>;
/// One selected value of the multivalued inverse of `⋃ : A₊(Y) → O(X)`.
pub type UnionInverse = Arc<dyn Fn(&OpenSet, Fuel) -> Result<OvertClosed> + Send + Sync>;

/// A family `B : Y → O(X)` whose transpose is an embedding.
#[derive(Clone)]
pub struct Presubbase {
    label: String,
    index: Space,
    carrier: Space,
    family: Family,
    transpose_inverse: Option<TransposeInverse>,
}

impl fmt::Debug for Presubbase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Presubbase({}: {:?} -> O({:?}))", self.label, self.index, self.carrier)
    }
}

impl Presubbase {
    pub fn new(
        label: impl Into<String>,
        index: Space,
        carrier: Space,
        family: impl Fn(&Point) -> OpenSet + Send + Sync + 'static,
        transpose_inverse: Option<TransposeInverse>,
    ) -> Self {
        Presubbase {
            label: label.into(),
            index,
            carrier,
            family: Arc::new(family),
            transpose_inverse,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn index(&self) -> &Space {
        &self.index
    }

    pub fn carrier(&self) -> &Space {
        &self.carrier
    }

    /// `B_y`
    pub fn family(&self, y: &Point) -> OpenSet {
        (self.family)(y)
    }

    /// `B` as a point of `C(Y, O(X))`.
    pub fn as_function(&self) -> Point {
        let b = self.clone();
        Point::function(self.index.clone(), Space::open(self.carrier.clone()), move |y| {
            Ok(b.family(y).into_point())
        })
    }

    /// `B^T(x) = {y : x ∈ B_y}`
    pub fn transpose(&self, x: &Point) -> OpenSet {
        let (b, x) = (self.clone(), x.clone());
        OpenSet::new(self.index.clone(), move |y| b.family(y).chi(&x))
    }

    pub fn invert_transpose(&self, u: &OpenSet, fuel: Fuel) -> Result<Point> {
        let inv = self
            .transpose_inverse
            .as_ref()
            .ok_or(Error::MissingWitness("presubbase has no transpose inverse"))?;
        inv(u, fuel)
    }

    pub fn has_transpose_inverse(&self) -> bool {
        self.transpose_inverse.is_some()
    }

    /// The carrier re-represented by `δ^B`.
    pub fn space(&self) -> Space {
        Space::Presubbase {
            label: self.label.clone(),
            index: Arc::new(self.index.clone()),
        }
    }

    /// `x` as a `δ^B`-point.
    pub fn point(&self, x: &Point) -> Point {
        Point::new(self.space(), Payload::Open(self.transpose(x)))
    }

    /// `⋂_{y∈K} B_y` as a semidecidable subset of the `δ^B` space.
    pub fn base_open(&self, k: &CompactSat) -> OpenSet {
        let k = k.clone();
        OpenSet::new(self.space(), move |p| match p.as_open() {
            Ok(u) => k.forall(u),
            Err(_) => SValue::bot(),
        })
    }

    /// `B_y` as an open of the `δ^B` space.
    pub fn generator(&self, y: &Point) -> OpenSet {
        let y = y.clone();
        OpenSet::new(self.space(), move |p| match p.as_open() {
            Ok(u) => u.chi(&y),
            Err(_) => SValue::bot(),
        })
    }

    /// The `δ^B` space is Kolmogorov: `B^T_x = B^{-1}(U_x)`.
    pub fn kolmogorov(&self) -> Kolmogorov {
        let b = self.clone();
        Arc::new(move |filter: &OpenSet, _fuel| {
            let (b2, filter) = (b.clone(), filter.clone());
            let t = OpenSet::new(b.index.clone(), move |y| filter.chi(&b2.generator(y).into_point()));
            Ok(Point::new(b.space(), Payload::Open(t)))
        })
    }
}

/// The space carrying the presubbase representation, with its Kolmogorov witness.
pub fn presubbase_space(b: &Presubbase) -> (Space, Kolmogorov) {
    (b.space(), b.kolmogorov())
}

pub fn transpose(b: &Presubbase, x: &Point) -> OpenSet {
    b.transpose(x)
}

/// A presubbase whose compact intersections are overt unions.
#[derive(Clone, Debug)]
pub struct Prebase {
    pub base: Presubbase,
    resolver: ResolverBox,
}

#[derive(Clone)]
struct ResolverBox(Resolver);

impl fmt::Debug for ResolverBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Resolver")
    }
}

impl Prebase {
    pub fn new(base: Presubbase, resolver: Resolver) -> Self {
        Prebase {
            base,
            resolver: ResolverBox(resolver),
        }
    }

    /// Some `A` with `⋂_{y∈K} B_y = ⋃_{y∈A} B_y`.
    pub fn resolve(&self, k: &CompactSat, fuel: Fuel) -> Result<OvertClosed> {
        (self.resolver.0)(k, fuel)
    }

    /// `⋃_{y∈A} B_y`
    pub fn union(&self, a: &OvertClosed) -> Result<OpenSet> {
        overt_union(&closed_image(&self.base.as_function(), a)?)
    }

    /// `⋂_{y∈K} B_y`, the whole carrier for empty `K`.
    pub fn intersection(&self, k: &CompactSat) -> Result<OpenSet> {
        compact_intersection(&compact_image(&self.base.as_function(), k)?)
    }
}

/// A family whose overt unions computably exhaust `O(X)`.
#[derive(Clone, Debug)]
pub struct LacombeBase {
    pub base: Presubbase,
    union_inverse: UnionInverseBox,
}

#[derive(Clone)]
struct UnionInverseBox(UnionInverse);

impl fmt::Debug for UnionInverseBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("UnionInverse")
    }
}

impl LacombeBase {
    pub fn new(base: Presubbase, union_inverse: UnionInverse) -> Self {
        LacombeBase {
            base,
            union_inverse: UnionInverseBox(union_inverse),
        }
    }

    pub fn union_map(&self, a: &OvertClosed) -> Result<OpenSet> {
        overt_union(&closed_image(&self.base.as_function(), a)?)
    }

    pub fn union_inverse(&self, u: &OpenSet, fuel: Fuel) -> Result<OvertClosed> {
        (self.union_inverse.0)(u, fuel)
    }
}

/// `K ↦ ⋂_{y∈K} B_y` over the index `K₋(Y)`; compact families resolve through `⋃𝒦`.
pub fn prebase_from_presubbase(b: &Presubbase) -> Prebase {
    let index = Space::compact(b.index.clone());
    let b1 = b.clone();
    let family = move |kp: &Point| -> OpenSet {
        let out = kp
            .as_compact()
            .and_then(|k| compact_intersection(&compact_image(&b1.as_function(), k)?));
        out.unwrap_or_else(|_| OpenSet::empty(b1.carrier.clone()))
    };
    let b2 = b.clone();
    let inverse: TransposeInverse = Arc::new(move |u: &OpenSet, fuel| {
        let u = u.clone();
        let t = OpenSet::new(b2.index.clone(), move |y| u.chi(&point_to_compact(y).into_point()));
        b2.invert_transpose(&t, fuel)
    });
    let base = Presubbase::new(
        format!("cap {}", b.label),
        index,
        b.carrier.clone(),
        family,
        b.transpose_inverse.as_ref().map(|_| inverse),
    );
    let resolver: Resolver = Arc::new(|family: &CompactSat, _fuel| {
        Ok(point_to_closed(&compact_union(family)?.into_point()))
    });
    Prebase::new(base, resolver)
}

/// A prebase from a point-valued `R` with `⋂_{y∈K} B_y = B_z` for `z ∈ R(K)`.
pub fn prebase_from_point_closure(
    b: &Presubbase,
    r: impl Fn(&CompactSat, Fuel) -> Result<Point> + Send + Sync + 'static,
) -> Prebase {
    let resolver: Resolver = Arc::new(move |k: &CompactSat, fuel| Ok(point_to_closed(&r(k, fuel)?)));
    Prebase::new(b.clone(), resolver)
}

/// Resolver through the Lacombe inverse: `K ↦ ⋃⁻¹(⋂ sat B(K))`.
pub fn lacombe_to_prebase(l: &LacombeBase) -> Prebase {
    let l2 = l.clone();
    let resolver: Resolver = Arc::new(move |k: &CompactSat, fuel| {
        let cap = compact_intersection(&compact_image(&l2.base.as_function(), k)?)?;
        l2.union_inverse(&cap, fuel)
    });
    Prebase::new(l.base.clone(), resolver)
}

/// `id : O(X) → O(X)`, a Lacombe base exactly when `X` is Kolmogorov.
pub fn identity_base(x: &Space, witness: Option<Kolmogorov>) -> Result<LacombeBase> {
    let witness = witness.ok_or(Error::MissingWitness("identity base needs a Kolmogorov witness"))?;
    let carrier = x.clone();
    let family = {
        let carrier = carrier.clone();
        move |u: &Point| u.as_open().cloned().unwrap_or_else(|_| OpenSet::empty(carrier.clone()))
    };
    let inverse: TransposeInverse = Arc::new(move |filter: &OpenSet, fuel| witness(filter, fuel));
    let base = Presubbase::new("id", Space::open(carrier.clone()), carrier, family, Some(inverse));
    let union_inverse: UnionInverse = Arc::new(|u: &OpenSet, _fuel| Ok(point_to_closed(&u.clone().into_point())));
    Ok(LacombeBase::new(base, union_inverse))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bases::finite::{finite_kolmogorov, identity_like};
    use crate::oracle::{FiniteSpace, FiniteView};

    const F: Fuel = Fuel::NEGATIVE;

    #[test]
    fn transpose_against_constant_families() {
        let fs = Arc::new(FiniteSpace::sierpinski());
        let x = Space::Finite(fs.clone());
        let y = Space::Finite(Arc::new(FiniteSpace::discrete(2)));
        let whole = Presubbase::new("whole", y.clone(), x.clone(), {
            let x = x.clone();
            move |_| OpenSet::whole(x.clone())
        }, None);
        let empty = Presubbase::new("empty", y.clone(), x.clone(), {
            let x = x.clone();
            move |_| OpenSet::empty(x.clone())
        }, None);
        let yv = FiniteView::of(&y).unwrap();
        let p = Point::element(&fs, 0);
        assert_eq!(yv.extension(&whole.transpose(&p), F), 0b11);
        assert_eq!(yv.extension(&empty.transpose(&p), F), 0);
        assert!(whole.invert_transpose(&OpenSet::empty(y), F).is_err());
    }

    #[test]
    fn empty_compact_intersection_is_whole() {
        let fs = FiniteSpace::chain(3);
        let b = identity_like(&fs).unwrap();
        let pre = prebase_from_presubbase(&b.base);
        let empty = CompactSat::finite(b.base.index().clone(), vec![]);
        let u = pre.base.family(&empty.into_point());
        let xv = FiniteView::of(b.base.carrier()).unwrap();
        assert_eq!(xv.extension(&u, F), 0b111);
    }

    #[test]
    fn identity_base_recovers_opens() {
        let fs = Arc::new(FiniteSpace::sierpinski());
        let x = Space::Finite(fs.clone());
        assert!(identity_base(&x, None).is_err());
        let l = identity_base(&x, Some(finite_kolmogorov(&fs).unwrap())).unwrap();
        let xv = FiniteView::of(&x).unwrap();
        for &bits in fs.opens() {
            let a = l.union_inverse(&xv.open(bits), F).unwrap();
            assert_eq!(xv.extension(&l.union_map(&a).unwrap(), F), bits);
        }
        let p = Point::element(&fs, 1);
        let back = l.base.invert_transpose(&l.base.transpose(&p), F).unwrap();
        assert_eq!(back.as_element().unwrap(), 1);
    }
}
