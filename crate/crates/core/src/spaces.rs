//! Represented-space constructors and the cartesian-closed plumbing.
//!
//! Points are shallow: a [`Point`] carries the space it lives in and a payload
//! whose shape is fixed by that space's constructor. Function-space points are
//! transformers; hyperspace points are the characteristic transformers of
//! [`crate::hyper`].

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hyper::{CompactSat, OpenSet, OvertClosed};
use crate::kernel::Name;
use crate::oracle::FiniteSpace;
use crate::sierpinski::SValue;

/// A subset predicate usable only at oracle scale; equality is by label.
#[derive(Clone)]
pub struct Subset {
    pub label: String,
    pub member: Option<Arc<dyn Fn(&Point) -> bool + Send + Sync>>,
}

impl Subset {
    pub fn new(label: impl Into<String>, member: impl Fn(&Point) -> bool + Send + Sync + 'static) -> Self {
        Subset {
            label: label.into(),
            member: Some(Arc::new(member)),
        }
    }

    pub fn whole() -> Self {
        Subset::new("whole", |_| true)
    }

    pub fn contains(&self, x: &Point) -> Option<bool> {
        self.member.as_ref().map(|m| m(x))
    }
}

impl PartialEq for Subset {
    fn eq(&self, other: &Self) -> bool {
        self.label == other.label
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.label)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Space {
    Nat,
    Baire,
    Sierp,
    Product(Arc<Space>, Arc<Space>),
    Coproduct(Arc<Space>, Arc<Space>),
    Meet(Arc<Space>, Arc<Space>),
    Subspace(Arc<Space>, Subset),
    Sequence(Arc<Space>),
    /// Finite words `S*`; the length is part of the name.
    Words(Arc<Space>),
    Function(Arc<Space>, Arc<Space>),
    /// `O(X)`
    Open(Arc<Space>),
    /// `A₊(X)`
    Overt(Arc<Space>),
    /// `K₋(X)`
    Compact(Arc<Space>),
    /// `A₋(X)`, stored as the complementary open.
    ClosedNeg(Arc<Space>),
    /// `A(X) = A₊(X) ⊓ A₋(X)`
    Closed(Arc<Space>),
    /// `K(X) = A₊(X) ⊓ K₋(X)`
    CompactClosed(Arc<Space>),
    /// Carrier with the presubbase representation: points are opens of the index.
    Presubbase { label: String, index: Arc<Space> },
    /// Re-representation by neighborhood filters.
    Completion(Arc<Space>),
    /// Finite carrier; points are carrier elements.
    Finite(Arc<FiniteSpace>),
    /// Reals with the signed decimal representation.
    Decimal,
}

impl Space {
    pub fn product(a: Space, b: Space) -> Space {
        Space::Product(Arc::new(a), Arc::new(b))
    }
    pub fn coproduct(a: Space, b: Space) -> Space {
        Space::Coproduct(Arc::new(a), Arc::new(b))
    }
    pub fn meet(a: Space, b: Space) -> Space {
        Space::Meet(Arc::new(a), Arc::new(b))
    }
    pub fn function(a: Space, b: Space) -> Space {
        Space::Function(Arc::new(a), Arc::new(b))
    }
    pub fn open(a: Space) -> Space {
        Space::Open(Arc::new(a))
    }
    pub fn overt(a: Space) -> Space {
        Space::Overt(Arc::new(a))
    }
    pub fn compact(a: Space) -> Space {
        Space::Compact(Arc::new(a))
    }
    pub fn sequence(a: Space) -> Space {
        Space::Sequence(Arc::new(a))
    }
    pub fn words(a: Space) -> Space {
        Space::Words(Arc::new(a))
    }
    pub fn finite(fs: FiniteSpace) -> Space {
        Space::Finite(Arc::new(fs))
    }

    pub fn function_parts(&self) -> Result<(&Space, &Space)> {
        match self {
            Space::Function(a, b) => Ok((a, b)),
            other => Err(Error::shape("Function(_, _)", other)),
        }
    }

    pub fn product_parts(&self) -> Result<(&Space, &Space)> {
        match self {
            Space::Product(a, b) => Ok((a, b)),
            other => Err(Error::shape("Product(_, _)", other)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

pub type Transformer = Arc<dyn Fn(&Point) -> Result<Point> + Send + Sync>;
pub type SeqFn = Arc<dyn Fn(u64) -> Result<Point> + Send + Sync>;

#[derive(Clone)]
pub enum Payload {
    Name(Name),
    Sierp(SValue),
    Element(usize),
    /// Products, meets, and the two views of `A(X)` / `K(X)`.
    Pair(Box<Point>, Box<Point>),
    Tagged(Side, Box<Point>),
    Seq(SeqFn),
    Word(Vec<Point>),
    Func(Transformer),
    Open(OpenSet),
    Overt(OvertClosed),
    Compact(CompactSat),
}

impl fmt::Debug for Payload {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Payload::Name(n) => write!(f, "{n:?}"),
            Payload::Sierp(s) => write!(f, "{s:?}"),
            Payload::Element(i) => write!(f, "#{i}"),
            Payload::Pair(a, b) => write!(f, "⟨{:?}, {:?}⟩", a.payload, b.payload),
            Payload::Tagged(s, p) => write!(f, "{s:?}({:?})", p.payload),
            Payload::Seq(_) => write!(f, "<sequence>"),
            Payload::Word(w) => write!(f, "{:?}", w.iter().map(|p| &p.payload).collect::<Vec<_>>()),
            Payload::Func(_) => write!(f, "<function>"),
            Payload::Open(_) => write!(f, "<open>"),
            Payload::Overt(_) => write!(f, "<overt>"),
            Payload::Compact(_) => write!(f, "<compact>"),
        }
    }
}

#[derive(Clone)]
pub struct Point {
    pub space: Space,
    pub payload: Payload,
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.payload)
    }
}

impl Point {
    pub fn new(space: Space, payload: Payload) -> Self {
        Point { space, payload }
    }

    pub fn nat(n: u64) -> Self {
        Point::new(Space::Nat, Payload::Name(Name::constant(n)))
    }

    pub fn sierp(v: SValue) -> Self {
        Point::new(Space::Sierp, Payload::Sierp(v))
    }

    pub fn element(space: &Arc<FiniteSpace>, i: usize) -> Self {
        Point::new(Space::Finite(space.clone()), Payload::Element(i))
    }

    /// Build a function-space point from a transformer.
    pub fn function(
        domain: Space,
        codomain: Space,
        f: impl Fn(&Point) -> Result<Point> + Send + Sync + 'static,
    ) -> Self {
        Point::new(Space::function(domain, codomain), Payload::Func(Arc::new(f)))
    }

    pub fn identity(space: Space) -> Self {
        Point::function(space.clone(), space, |x| Ok(x.clone()))
    }

    pub fn expect_space(&self, space: &Space) -> Result<()> {
        if &self.space == space {
            Ok(())
        } else {
            Err(Error::shape(space, &self.space))
        }
    }

    pub fn as_nat(&self) -> Result<u64> {
        match &self.payload {
            Payload::Name(n) => Ok(n.at(0)),
            other => Err(Error::shape("natural", other)),
        }
    }

    pub fn as_name(&self) -> Result<&Name> {
        match &self.payload {
            Payload::Name(n) => Ok(n),
            other => Err(Error::shape("name", other)),
        }
    }

    pub fn as_sierp(&self) -> Result<&SValue> {
        match &self.payload {
            Payload::Sierp(v) => Ok(v),
            other => Err(Error::shape("Sierpinski value", other)),
        }
    }

    pub fn as_element(&self) -> Result<usize> {
        match &self.payload {
            Payload::Element(i) => Ok(*i),
            other => Err(Error::shape("finite element", other)),
        }
    }

    pub fn as_pair(&self) -> Result<(&Point, &Point)> {
        match &self.payload {
            Payload::Pair(a, b) => Ok((a, b)),
            other => Err(Error::shape("pair", other)),
        }
    }

    pub fn as_tagged(&self) -> Result<(Side, &Point)> {
        match &self.payload {
            Payload::Tagged(s, p) => Ok((*s, p)),
            other => Err(Error::shape("tagged", other)),
        }
    }

    pub fn as_word(&self) -> Result<&[Point]> {
        match &self.payload {
            Payload::Word(w) => Ok(w),
            other => Err(Error::shape("word", other)),
        }
    }

    pub fn as_func(&self) -> Result<&Transformer> {
        match &self.payload {
            Payload::Func(f) => Ok(f),
            other => Err(Error::shape("function", other)),
        }
    }

    pub fn as_open(&self) -> Result<&OpenSet> {
        match &self.payload {
            Payload::Open(u) => Ok(u),
            other => Err(Error::shape("open set", other)),
        }
    }

    pub fn as_overt(&self) -> Result<&OvertClosed> {
        match &self.payload {
            Payload::Overt(a) => Ok(a),
            other => Err(Error::shape("overt set", other)),
        }
    }

    pub fn as_compact(&self) -> Result<&CompactSat> {
        match &self.payload {
            Payload::Compact(k) => Ok(k),
            other => Err(Error::shape("compact set", other)),
        }
    }
}

pub fn eval(f: &Point, x: &Point) -> Result<Point> {
    let (dom, _) = f.space.function_parts()?;
    x.expect_space(dom)?;
    (f.as_func()?)(x)
}

/// Exponential transpose `C(X×Y, Z) → C(X, C(Y, Z))`.
pub fn curry(f: &Point) -> Result<Point> {
    let (dom, z) = f.space.function_parts()?;
    let (x_space, y_space) = dom.product_parts()?;
    let (x_space, y_space, z) = (x_space.clone(), y_space.clone(), z.clone());
    let inner_space = Space::function(y_space.clone(), z.clone());
    let f = f.clone();
    Ok(Point::function(x_space, inner_space, move |x| {
        let (f, x) = (f.clone(), x.clone());
        Ok(Point::function(y_space.clone(), z.clone(), move |y| {
            eval(&f, &product_intro(x.clone(), y.clone()))
        }))
    }))
}

pub fn uncurry(g: &Point) -> Result<Point> {
    let (x_space, inner) = g.space.function_parts()?;
    let (y_space, z) = inner.function_parts()?;
    let dom = Space::product(x_space.clone(), y_space.clone());
    let z = z.clone();
    let g = g.clone();
    Ok(Point::function(dom, z, move |p| {
        let (x, y) = p.as_pair()?;
        eval(&eval(&g, x)?, y)
    }))
}

pub fn product_intro(x: Point, y: Point) -> Point {
    Point::new(
        Space::product(x.space.clone(), y.space.clone()),
        Payload::Pair(Box::new(x), Box::new(y)),
    )
}

pub fn product_proj1(p: &Point) -> Result<Point> {
    p.space.product_parts()?;
    Ok(p.as_pair()?.0.clone())
}

pub fn product_proj2(p: &Point) -> Result<Point> {
    p.space.product_parts()?;
    Ok(p.as_pair()?.1.clone())
}

/// Projection `X × Y → X` as a function-space point.
pub fn proj1_map(x: Space, y: Space) -> Point {
    Point::function(Space::product(x.clone(), y), x, product_proj1)
}

pub fn proj2_map(x: Space, y: Space) -> Point {
    Point::function(Space::product(x, y.clone()), y, product_proj2)
}

pub fn coproduct_inj(side: Side, p: Point, other: Space) -> Point {
    let space = match side {
        Side::Left => Space::coproduct(p.space.clone(), other),
        Side::Right => Space::coproduct(other, p.space.clone()),
    };
    Point::new(space, Payload::Tagged(side, Box::new(p)))
}

pub fn coproduct_case(p: &Point, left: &Point, right: &Point) -> Result<Point> {
    match (&p.space, &p.payload) {
        (Space::Coproduct(..), Payload::Tagged(Side::Left, x)) => eval(left, x),
        (Space::Coproduct(..), Payload::Tagged(Side::Right, y)) => eval(right, y),
        (Space::Coproduct(..), other) => Err(Error::Malformed(format!("invalid coproduct tag {other:?}"))),
        (other, _) => Err(Error::shape("Coproduct(_, _)", other)),
    }
}

/// A point of `X ⊓ Y` from its two views. Two finite-carrier views must name
/// the same carrier element.
pub fn meet_intro(as_x: Point, as_y: Point) -> Result<Point> {
    if let (Payload::Element(a), Payload::Element(b)) = (&as_x.payload, &as_y.payload) {
        if a != b {
            return Err(Error::Malformed(format!("meet views disagree: #{a} vs #{b}")));
        }
    }
    Ok(Point::new(
        Space::meet(as_x.space.clone(), as_y.space.clone()),
        Payload::Pair(Box::new(as_x), Box::new(as_y)),
    ))
}

pub fn meet_proj1(p: &Point) -> Result<Point> {
    match &p.space {
        Space::Meet(..) => Ok(p.as_pair()?.0.clone()),
        other => Err(Error::shape("Meet(_, _)", other)),
    }
}

pub fn meet_proj2(p: &Point) -> Result<Point> {
    match &p.space {
        Space::Meet(..) => Ok(p.as_pair()?.1.clone()),
        other => Err(Error::shape("Meet(_, _)", other)),
    }
}

pub fn seq_intro(element: Space, terms: impl Fn(u64) -> Point + Send + Sync + 'static) -> Point {
    Point::new(Space::sequence(element), Payload::Seq(Arc::new(move |n| Ok(terms(n)))))
}

pub fn seq_proj(p: &Point, n: u64) -> Result<Point> {
    match (&p.space, &p.payload) {
        (Space::Sequence(_), Payload::Seq(f)) => f(n),
        (other, _) => Err(Error::shape("Sequence(_)", other)),
    }
}

pub fn word(element: Space, letters: Vec<Point>) -> Point {
    Point::new(Space::words(element), Payload::Word(letters))
}

/// Index into `ℕ_∞ = ℕ ∪ {∞}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NInf {
    At(u64),
    Infinity,
}

/// A sequence together with its designated limit.
#[derive(Clone)]
pub struct ConvSeq {
    terms: SeqFn,
    limit: Box<Point>,
}

impl ConvSeq {
    pub fn new(terms: impl Fn(u64) -> Point + Send + Sync + 'static, limit: Point) -> Self {
        ConvSeq {
            terms: Arc::new(move |n| Ok(terms(n))),
            limit: Box::new(limit),
        }
    }

    pub fn term(&self, i: NInf) -> Result<Point> {
        match i {
            NInf::At(n) => (self.terms)(n),
            NInf::Infinity => Ok((*self.limit).clone()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three() -> Arc<FiniteSpace> {
        Arc::new(FiniteSpace::discrete(3))
    }

    #[test]
    fn products_project() {
        let fs = three();
        let p = product_intro(Point::element(&fs, 1), Point::nat(7));
        assert_eq!(product_proj1(&p).unwrap().as_element().unwrap(), 1);
        assert_eq!(product_proj2(&p).unwrap().as_nat().unwrap(), 7);
        assert!(product_proj1(&Point::nat(3)).is_err());
    }

    #[test]
    fn curry_round_trip_on_pairs() {
        let fs = three();
        let x = Space::Finite(fs.clone());
        let f = proj1_map(x.clone(), Space::Nat);
        let c = curry(&f).unwrap();
        let r = eval(&eval(&c, &Point::element(&fs, 2)).unwrap(), &Point::nat(5)).unwrap();
        assert_eq!(r.as_element().unwrap(), 2);
        let u = uncurry(&c).unwrap();
        assert_eq!(u.space, f.space);
        let p = product_intro(Point::element(&fs, 0), Point::nat(1));
        assert_eq!(eval(&u, &p).unwrap().as_element().unwrap(), 0);
        assert!(eval(&f, &Point::nat(0)).is_err());
    }

    #[test]
    fn coproduct_case_dispatches() {
        let f = Point::function(Space::Nat, Space::Nat, |p| Ok(Point::nat(p.as_nat()? + 1)));
        let g = Point::function(Space::Nat, Space::Nat, |p| Ok(Point::nat(p.as_nat()? * 10)));
        let l = coproduct_inj(Side::Left, Point::nat(4), Space::Nat);
        let r = coproduct_inj(Side::Right, Point::nat(4), Space::Nat);
        assert_eq!(coproduct_case(&l, &f, &g).unwrap().as_nat().unwrap(), 5);
        assert_eq!(coproduct_case(&r, &f, &g).unwrap().as_nat().unwrap(), 40);
        let bad = Point::new(l.space.clone(), Payload::Element(0));
        assert!(matches!(coproduct_case(&bad, &f, &g), Err(Error::Malformed(_))));
    }

    #[test]
    fn meet_rejects_mismatched_views() {
        let fs = three();
        let m = meet_intro(Point::element(&fs, 1), Point::element(&fs, 1)).unwrap();
        assert_eq!(meet_proj2(&m).unwrap().as_element().unwrap(), 1);
        assert!(meet_intro(Point::element(&fs, 1), Point::element(&fs, 2)).is_err());
    }

    #[test]
    fn sequences() {
        let s = seq_intro(Space::Nat, |_| Point::nat(3));
        for n in 0..=32 {
            assert_eq!(seq_proj(&s, n).unwrap().as_nat().unwrap(), 3);
        }
        let c = ConvSeq::new(Point::nat, Point::nat(0));
        assert_eq!(c.term(NInf::At(4)).unwrap().as_nat().unwrap(), 4);
        assert_eq!(c.term(NInf::Infinity).unwrap().as_nat().unwrap(), 0);
    }
}
