//! Hyperspaces `O(X)`, `A₊(X)`, `A₋(X)`, `K₋(X)`, `A(X)`, `K(X)` and their
//! computable operations.
//!
//! Each hyperspace point is a characteristic transformer into Sierpiński
//! space: an open set semidecides membership, an overt set semidecides "meets
//! this open", a compact saturated set semidecides "is contained in this open".
//! Transformers that receive a point of the wrong shape never accept.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::kernel::Fuel;
use crate::sierpinski::{and2, and_finite, or_finite, SValue};
use crate::spaces::{eval, product_intro, Payload, Point, Space};

type Chi = Arc<dyn Fn(&Point) -> SValue + Send + Sync>;
type SetQuery = Arc<dyn Fn(&OpenSet) -> SValue + Send + Sync>;

/// Recovers a point from (a name of) its neighborhood filter, an open set over
/// `O(X)`. This is the computable-Kolmogorov witness of `X`.
pub type Kolmogorov = Arc<dyn Fn(&OpenSet, Fuel) -> Result<Point> + Send + Sync>;

#[derive(Clone)]
pub struct OpenSet {
    over: Space,
    chi: Chi,
}

impl OpenSet {
    pub fn new(over: Space, chi: impl Fn(&Point) -> SValue + Send + Sync + 'static) -> Self {
        OpenSet {
            over,
            chi: Arc::new(chi),
        }
    }

    pub fn empty(over: Space) -> Self {
        OpenSet::new(over, |_| SValue::bot())
    }

    pub fn whole(over: Space) -> Self {
        OpenSet::new(over, |_| SValue::top())
    }

    pub fn over(&self) -> &Space {
        &self.over
    }

    /// Characteristic map without a shape check.
    pub fn chi(&self, x: &Point) -> SValue {
        (self.chi)(x)
    }

    pub fn into_point(self) -> Point {
        Point::new(Space::open(self.over.clone()), Payload::Open(self))
    }

    /// Same characteristic map, re-tagged to another space over the same points.
    pub fn retag(&self, over: Space) -> OpenSet {
        OpenSet {
            over,
            chi: self.chi.clone(),
        }
    }
}

impl fmt::Debug for OpenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OpenSet over {:?}", self.over)
    }
}

/// A point of `A₊(X)`, given by `∃_A`.
#[derive(Clone)]
pub struct OvertClosed {
    over: Space,
    exists: SetQuery,
}

impl OvertClosed {
    pub fn new(over: Space, exists: impl Fn(&OpenSet) -> SValue + Send + Sync + 'static) -> Self {
        OvertClosed {
            over,
            exists: Arc::new(exists),
        }
    }

    /// Closure of a finite set of points.
    pub fn finite(over: Space, points: Vec<Point>) -> Self {
        OvertClosed::new(over, move |u| or_finite(points.iter().map(|p| u.chi(p)).collect()))
    }

    pub fn over(&self) -> &Space {
        &self.over
    }

    pub fn exists(&self, u: &OpenSet) -> SValue {
        (self.exists)(u)
    }

    pub fn into_point(self) -> Point {
        Point::new(Space::overt(self.over.clone()), Payload::Overt(self))
    }
}

/// A point of `K₋(X)`, given by `∀_K`.
#[derive(Clone)]
pub struct CompactSat {
    over: Space,
    forall: SetQuery,
}

impl CompactSat {
    pub fn new(over: Space, forall: impl Fn(&OpenSet) -> SValue + Send + Sync + 'static) -> Self {
        CompactSat {
            over,
            forall: Arc::new(forall),
        }
    }

    /// Saturation of a finite set of points.
    pub fn finite(over: Space, points: Vec<Point>) -> Self {
        CompactSat::new(over, move |u| and_finite(points.iter().map(|p| u.chi(p)).collect()))
    }

    pub fn over(&self) -> &Space {
        &self.over
    }

    pub fn forall(&self, u: &OpenSet) -> SValue {
        (self.forall)(u)
    }

    pub fn into_point(self) -> Point {
        Point::new(Space::compact(self.over.clone()), Payload::Compact(self))
    }
}

/// A point of `A₋(X)`: the complement of an open set.
#[derive(Clone)]
pub struct ClosedNeg {
    pub complement: OpenSet,
}

impl ClosedNeg {
    pub fn into_point(self) -> Point {
        let over = self.complement.over.clone();
        Point::new(Space::ClosedNeg(Arc::new(over)), Payload::Open(self.complement))
    }
}

/// A point of `A(X) = A₊(X) ⊓ A₋(X)`. Both views must denote the same set.
#[derive(Clone)]
pub struct ClosedBoth {
    pub overt: OvertClosed,
    pub negative: ClosedNeg,
}

impl ClosedBoth {
    pub fn into_point(self) -> Point {
        let over = self.overt.over.clone();
        Point::new(
            Space::Closed(Arc::new(over)),
            Payload::Pair(Box::new(self.overt.into_point()), Box::new(self.negative.into_point())),
        )
    }
}

/// A point of `K(X) = A₊(X) ⊓ K₋(X)`.
#[derive(Clone)]
pub struct CompactBoth {
    pub overt: OvertClosed,
    pub compact: CompactSat,
}

impl CompactBoth {
    pub fn into_point(self) -> Point {
        let over = self.overt.over.clone();
        Point::new(
            Space::CompactClosed(Arc::new(over)),
            Payload::Pair(Box::new(self.overt.into_point()), Box::new(self.compact.into_point())),
        )
    }
}

fn same(expected: &Space, found: &Space) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::shape(expected, found))
    }
}

fn inner(space: &Space, wrap: fn(&Space) -> Option<&Space>) -> Result<Space> {
    wrap(space).cloned().ok_or_else(|| Error::shape("hyperspace", space))
}

fn open_inner(s: &Space) -> Option<&Space> {
    match s {
        Space::Open(x) => Some(x),
        _ => None,
    }
}

fn compact_inner(s: &Space) -> Option<&Space> {
    match s {
        Space::Compact(x) => Some(x),
        _ => None,
    }
}

pub fn membership(u: &OpenSet, x: &Point) -> Result<SValue> {
    x.expect_space(&u.over)?;
    Ok(u.chi(x))
}

/// `x ↦ U_x = {U : x ∈ U}`, an open subset of `O(X)`.
pub fn neighborhood_filter(x: &Point) -> OpenSet {
    let x = x.clone();
    OpenSet::new(Space::open(x.space.clone()), move |u| match u.as_open() {
        Ok(u) => u.chi(&x),
        Err(_) => SValue::bot(),
    })
}

/// `x ↦ cl{x}`
pub fn point_to_closed(x: &Point) -> OvertClosed {
    let x = x.clone();
    OvertClosed::new(x.space.clone(), move |u| u.chi(&x))
}

/// `x ↦ sat{x}`
pub fn point_to_compact(x: &Point) -> CompactSat {
    let x = x.clone();
    CompactSat::new(x.space.clone(), move |u| u.chi(&x))
}

/// `f⁻¹(V)` for a function-space point `f : X → Y`.
pub fn preimage(f: &Point, v: &OpenSet) -> Result<OpenSet> {
    let (dom, cod) = f.space.function_parts()?;
    same(cod, &v.over)?;
    let (f, v) = (f.clone(), v.clone());
    Ok(OpenSet::new(dom.clone(), move |x| match eval(&f, x) {
        Ok(y) => v.chi(&y),
        Err(_) => SValue::bot(),
    }))
}

/// `K ↦ sat f(K)`
pub fn compact_image(f: &Point, k: &CompactSat) -> Result<CompactSat> {
    let (dom, cod) = f.space.function_parts()?;
    same(dom, &k.over)?;
    let (f, k) = (f.clone(), k.clone());
    Ok(CompactSat::new(cod.clone(), move |v| match preimage(&f, v) {
        Ok(pre) => k.forall(&pre),
        Err(_) => SValue::bot(),
    }))
}

/// `A ↦ cl f(A)`
pub fn closed_image(f: &Point, a: &OvertClosed) -> Result<OvertClosed> {
    let (dom, cod) = f.space.function_parts()?;
    same(dom, &a.over)?;
    let (f, a) = (f.clone(), a.clone());
    Ok(OvertClosed::new(cod.clone(), move |v| match preimage(&f, v) {
        Ok(pre) => a.exists(&pre),
        Err(_) => SValue::bot(),
    }))
}

/// `(x, U) ↦ {y : (x, y) ∈ U}`
pub fn section(x: &Point, u: &OpenSet) -> Result<OpenSet> {
    let (xs, ys) = u.over.product_parts()?;
    x.expect_space(xs)?;
    let (x, u) = (x.clone(), u.clone());
    Ok(OpenSet::new(ys.clone(), move |y| u.chi(&product_intro(x.clone(), y.clone()))))
}

/// `(U, y) ↦ {x : (x, y) ∈ U}`
pub fn section_second(u: &OpenSet, y: &Point) -> Result<OpenSet> {
    let (xs, ys) = u.over.product_parts()?;
    y.expect_space(ys)?;
    let (y, u) = (y.clone(), u.clone());
    Ok(OpenSet::new(xs.clone(), move |x| u.chi(&product_intro(x.clone(), y.clone()))))
}

/// `(V, U) ↦ V × U`
pub fn product_open(v: &OpenSet, u: &OpenSet) -> OpenSet {
    let (v, u) = (v.clone(), u.clone());
    let over = Space::product(v.over.clone(), u.over.clone());
    OpenSet::new(over, move |p| match p.as_pair() {
        Ok((x, y)) => and2(v.chi(x), u.chi(y)),
        Err(_) => SValue::bot(),
    })
}

/// `(A, B) ↦ A × B`: the product meets `W` iff some `a ∈ A` has `B ∩ W_a ≠ ∅`.
pub fn product_closed(a: &OvertClosed, b: &OvertClosed) -> OvertClosed {
    let (a, b) = (a.clone(), b.clone());
    let over = Space::product(a.over.clone(), b.over.clone());
    OvertClosed::new(over, move |w| {
        let (b, w) = (b.clone(), w.clone());
        let along = OpenSet::new(a.over.clone(), move |x| match section(x, &w) {
            Ok(wx) => b.exists(&wx),
            Err(_) => SValue::bot(),
        });
        a.exists(&along)
    })
}

/// `𝒜 ↦ ⋃𝒜` for `𝒜 ∈ A₊(O(X))`.
pub fn overt_union(family: &OvertClosed) -> Result<OpenSet> {
    let x_space = inner(&family.over, open_inner)?;
    let family = family.clone();
    Ok(OpenSet::new(x_space, move |x| family.exists(&neighborhood_filter(x))))
}

/// `𝒦 ↦ ⋂𝒦` for `𝒦 ∈ K₋(O(X))`; the empty family gives the whole space.
pub fn compact_intersection(family: &CompactSat) -> Result<OpenSet> {
    let x_space = inner(&family.over, open_inner)?;
    let family = family.clone();
    Ok(OpenSet::new(x_space, move |x| family.forall(&neighborhood_filter(x))))
}

/// `𝒦 ↦ sat ⋃𝒦` for `𝒦 ∈ K₋(K₋(X))`.
pub fn compact_union(family: &CompactSat) -> Result<CompactSat> {
    let x_space = inner(&family.over, compact_inner)?;
    let family = family.clone();
    Ok(CompactSat::new(x_space, move |u| family.forall(&box_embed(u))))
}

/// `K ↦ F_K = {U : K ⊆ U}`
pub fn filter_embed(k: &CompactSat) -> OpenSet {
    let k = k.clone();
    OpenSet::new(Space::open(k.over.clone()), move |u| match u.as_open() {
        Ok(u) => k.forall(u),
        Err(_) => SValue::bot(),
    })
}

pub fn filter_invert(filter: &OpenSet) -> Result<CompactSat> {
    let x_space = inner(&filter.over, open_inner)?;
    let filter = filter.clone();
    Ok(CompactSat::new(x_space, move |u| filter.chi(&u.clone().into_point())))
}

/// `A ↦ T_A = {U : A ∩ U ≠ ∅}`
pub fn trace_embed(a: &OvertClosed) -> OpenSet {
    let a = a.clone();
    OpenSet::new(Space::open(a.over.clone()), move |u| match u.as_open() {
        Ok(u) => a.exists(u),
        Err(_) => SValue::bot(),
    })
}

pub fn trace_invert(trace: &OpenSet) -> Result<OvertClosed> {
    let x_space = inner(&trace.over, open_inner)?;
    let trace = trace.clone();
    Ok(OvertClosed::new(x_space, move |u| trace.chi(&u.clone().into_point())))
}

/// `U ↦ □U = {K : K ⊆ U}`
pub fn box_embed(u: &OpenSet) -> OpenSet {
    let u = u.clone();
    OpenSet::new(Space::compact(u.over.clone()), move |k| match k.as_compact() {
        Ok(k) => k.forall(&u),
        Err(_) => SValue::bot(),
    })
}

/// Uses `x ∈ U ⟺ sat{x} ∈ □U`.
pub fn box_invert(boxed: &OpenSet) -> Result<OpenSet> {
    let x_space = inner(&boxed.over, compact_inner)?;
    let boxed = boxed.clone();
    Ok(OpenSet::new(x_space, move |x| boxed.chi(&point_to_compact(x).into_point())))
}

/// `f ↦ {(K, U) : f(K) ⊆ U}`
pub fn compact_open_embed(f: &Point) -> Result<OpenSet> {
    let (dom, cod) = f.space.function_parts()?;
    let over = Space::product(Space::compact(dom.clone()), Space::open(cod.clone()));
    let f = f.clone();
    Ok(OpenSet::new(over, move |p| {
        let Ok((k, u)) = p.as_pair() else { return SValue::bot() };
        let (Ok(k), Ok(u)) = (k.as_compact(), u.as_open()) else { return SValue::bot() };
        match compact_image(&f, k) {
            Ok(image) => image.forall(u),
            Err(_) => SValue::bot(),
        }
    }))
}

/// Recover `f` from its compact-open set through `f(x) ∈ U ⟺ (sat{x}, U) ∈ W`.
/// Needs the Kolmogorov witness of the codomain.
pub fn compact_open_invert(w: &OpenSet, codomain: Option<&Kolmogorov>, fuel: Fuel) -> Result<Point> {
    let witness = codomain.ok_or(Error::MissingWitness("codomain is not known to be a computable Kolmogorov space"))?;
    let (ks, us) = w.over.product_parts()?;
    let dom = inner(ks, compact_inner)?;
    let cod = inner(us, open_inner)?;
    let (w, witness) = (w.clone(), witness.clone());
    let cod_for_filter = Space::open(cod.clone());
    Ok(Point::function(dom, cod, move |x| {
        let kx = point_to_compact(x).into_point();
        let w = w.clone();
        let filter = OpenSet::new(cod_for_filter.clone(), move |u| {
            w.chi(&product_intro(kx.clone(), u.clone()))
        });
        witness(&filter, fuel)
    }))
}

pub fn forall_eval(k: &CompactSat, u: &OpenSet) -> Result<SValue> {
    same(&k.over, &u.over)?;
    Ok(k.forall(u))
}

pub fn exists_eval(a: &OvertClosed, u: &OpenSet) -> Result<SValue> {
    same(&a.over, &u.over)?;
    Ok(a.exists(u))
}

/// Projection `O(Y × X) → O(Y)` along an overt `X`, given the witness `∃_X`.
pub fn overt_projection(u: &OpenSet, whole: &OvertClosed) -> Result<OpenSet> {
    let (ys, xs) = u.over.product_parts()?;
    same(xs, &whole.over)?;
    let (u, whole) = (u.clone(), whole.clone());
    Ok(OpenSet::new(ys.clone(), move |y| match section(y, &u) {
        Ok(uy) => whole.exists(&uy),
        Err(_) => SValue::bot(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::FiniteSpace;

    fn sierpinski() -> (Arc<FiniteSpace>, Space) {
        let fs = Arc::new(FiniteSpace::sierpinski());
        let s = Space::Finite(fs.clone());
        (fs, s)
    }

    fn open_bits(space: &Space, bits: u64) -> OpenSet {
        OpenSet::new(space.clone(), move |p| {
            SValue::from_bool(p.as_element().is_ok_and(|i| bits >> i & 1 == 1))
        })
    }

    const F: Fuel = Fuel::NEGATIVE;

    #[test]
    fn membership_on_sierpinski() {
        let (fs, s) = sierpinski();
        let u = open_bits(&s, 0b10);
        assert!(membership(&u, &Point::element(&fs, 1)).unwrap().accepted_within(F));
        assert!(!membership(&u, &Point::element(&fs, 0)).unwrap().accepted_within(F));
        assert!(membership(&u, &Point::nat(0)).is_err());
    }

    #[test]
    fn filter_of_points() {
        let (fs, s) = sierpinski();
        let one = neighborhood_filter(&Point::element(&fs, 1));
        let zero = neighborhood_filter(&Point::element(&fs, 0));
        let opens = [0b00, 0b10, 0b11].map(|b| open_bits(&s, b).into_point());
        let acc = |f: &OpenSet| opens.iter().map(|u| f.chi(u).accepted_within(F)).collect::<Vec<_>>();
        assert_eq!(acc(&one), vec![false, true, true]);
        assert_eq!(acc(&zero), vec![false, false, true]);
    }

    #[test]
    fn injections_and_embeddings() {
        let (fs, s) = sierpinski();
        let x = Point::element(&fs, 1);
        assert!(point_to_compact(&x).forall(&OpenSet::whole(s.clone())).accepted_within(F));
        assert!(!point_to_closed(&x).exists(&OpenSet::empty(s.clone())).accepted_within(F));
        let u = open_bits(&s, 0b10);
        let back = box_invert(&box_embed(&u)).unwrap();
        for i in 0..2 {
            let p = Point::element(&fs, i);
            assert_eq!(back.chi(&p).accepted_within(F), u.chi(&p).accepted_within(F));
        }
        let k = point_to_compact(&x);
        let f = filter_embed(&k);
        assert!(f.chi(&u.clone().into_point()).accepted_within(F));
        let k2 = filter_invert(&f).unwrap();
        assert!(k2.forall(&u).accepted_within(F));
    }

    #[test]
    fn shape_errors() {
        let (_, s) = sierpinski();
        let u = open_bits(&s, 0b10);
        assert!(overt_union(&OvertClosed::finite(s.clone(), vec![])).is_err());
        assert!(compact_open_invert(&u, None, F).is_err());
        assert!(section(&Point::nat(0), &u).is_err());
    }
}
