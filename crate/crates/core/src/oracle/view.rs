//! Finite shadows of composite spaces: every point of a space built from
//! finite carriers by products and coproducts, with its topology as bitsets.

use std::sync::Arc;

use super::finite::{generate_topology, members, Bits, FiniteSpace};
use crate::error::{Error, Result};
use crate::hyper::{CompactSat, OpenSet, OvertClosed};
use crate::kernel::Fuel;
use crate::sierpinski::SValue;
use crate::spaces::{coproduct_inj, meet_intro, product_intro, Payload, Point, Side, Space};

#[derive(Clone, Debug)]
enum Shape {
    Leaf,
    Product(Box<FiniteView>, Box<FiniteView>),
    Coproduct(Box<FiniteView>, Box<FiniteView>),
    Meet(Box<FiniteView>, Box<FiniteView>),
    Subspace(Box<FiniteView>, Vec<usize>),
}

#[derive(Clone, Debug)]
pub struct FiniteView {
    space: Space,
    points: Vec<Point>,
    topology: Arc<FiniteSpace>,
    shape: Shape,
}

impl FiniteView {
    pub fn of(space: &Space) -> Result<Self> {
        match space {
            Space::Finite(fs) => Ok(FiniteView {
                space: space.clone(),
                points: (0..fs.n()).map(|i| Point::element(fs, i)).collect(),
                topology: fs.clone(),
                shape: Shape::Leaf,
            }),
            Space::Product(a, b) => {
                let (a, b) = (FiniteView::of(a)?, FiniteView::of(b)?);
                let mut points = Vec::new();
                for x in &a.points {
                    for y in &b.points {
                        points.push(product_intro(x.clone(), y.clone()));
                    }
                }
                let nb = b.len();
                let n = a.len() * nb;
                let mut rects = Vec::new();
                for &u in a.topology.opens() {
                    for &v in b.topology.opens() {
                        let r = members(u)
                            .flat_map(|i| members(v).map(move |j| i * nb + j))
                            .fold(0, |acc, k| acc | 1 << k);
                        rects.push(r);
                    }
                }
                Ok(FiniteView {
                    space: space.clone(),
                    points,
                    topology: Arc::new(generate_topology(&rects, n)),
                    shape: Shape::Product(Box::new(a), Box::new(b)),
                })
            }
            Space::Coproduct(a, b) => {
                let (a, b) = (FiniteView::of(a)?, FiniteView::of(b)?);
                let mut points: Vec<Point> =
                    a.points.iter().map(|x| coproduct_inj(Side::Left, x.clone(), b.space.clone())).collect();
                points.extend(b.points.iter().map(|y| coproduct_inj(Side::Right, y.clone(), a.space.clone())));
                let na = a.len();
                let mut opens = Vec::new();
                for &u in a.topology.opens() {
                    for &v in b.topology.opens() {
                        opens.push(u | v << na);
                    }
                }
                Ok(FiniteView {
                    space: space.clone(),
                    topology: Arc::new(FiniteSpace::new(points.len(), opens)?),
                    points,
                    shape: Shape::Coproduct(Box::new(a), Box::new(b)),
                })
            }
            Space::Meet(a, b) => {
                let (a, b) = (FiniteView::of(a)?, FiniteView::of(b)?);
                if a.len() != b.len() {
                    return Err(Error::Malformed("meet of finite carriers of different sizes".into()));
                }
                let points = a
                    .points
                    .iter()
                    .zip(&b.points)
                    .map(|(x, y)| meet_intro(x.clone(), y.clone()))
                    .collect::<Result<Vec<_>>>()?;
                let mut sets = Vec::new();
                for &u in a.topology.opens() {
                    for &v in b.topology.opens() {
                        sets.push(u & v);
                    }
                }
                Ok(FiniteView {
                    space: space.clone(),
                    topology: Arc::new(generate_topology(&sets, points.len())),
                    points,
                    shape: Shape::Meet(Box::new(a), Box::new(b)),
                })
            }
            Space::Subspace(x, z) => {
                let inner = FiniteView::of(x)?;
                let kept: Vec<usize> =
                    (0..inner.len()).filter(|&i| z.contains(&inner.points[i]).unwrap_or(true)).collect();
                let points = kept
                    .iter()
                    .map(|&i| Point::new(space.clone(), inner.points[i].payload.clone()))
                    .collect::<Vec<_>>();
                let restrict = |u: Bits| {
                    kept.iter().enumerate().filter(|(_, &i)| u >> i & 1 == 1).fold(0, |acc, (k, _)| acc | 1 << k)
                };
                let traces: Vec<Bits> = inner.topology.opens().iter().map(|&u| restrict(u)).collect();
                Ok(FiniteView {
                    space: space.clone(),
                    topology: Arc::new(FiniteSpace::new(points.len(), traces)?),
                    points,
                    shape: Shape::Subspace(Box::new(inner), kept),
                })
            }
            other => Err(Error::shape("finite composite", other)),
        }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn topology(&self) -> &Arc<FiniteSpace> {
        &self.topology
    }

    /// Structural position of `p` among [`FiniteView::points`].
    pub fn index_of(&self, p: &Point) -> Option<usize> {
        match (&self.shape, &p.payload) {
            (Shape::Leaf, Payload::Element(i)) => (*i < self.len()).then_some(*i),
            (Shape::Product(a, b), Payload::Pair(x, y)) => Some(a.index_of(x)? * b.len() + b.index_of(y)?),
            (Shape::Coproduct(a, _), Payload::Tagged(Side::Left, x)) => a.index_of(x),
            (Shape::Coproduct(a, b), Payload::Tagged(Side::Right, y)) => Some(a.len() + b.index_of(y)?),
            (Shape::Meet(a, b), Payload::Pair(x, y)) => {
                let i = a.index_of(x)?;
                (b.index_of(y)? == i).then_some(i)
            }
            (Shape::Subspace(inner, kept), _) => {
                let as_inner = Point::new(inner.space.clone(), p.payload.clone());
                let i = inner.index_of(&as_inner)?;
                kept.iter().position(|&k| k == i)
            }
            _ => None,
        }
    }

    pub fn bits_of_points(&self, pts: &[Point]) -> Option<Bits> {
        pts.iter().try_fold(0, |acc, p| Some(acc | 1 << self.index_of(p)?))
    }

    pub fn select(&self, bits: Bits) -> Vec<Point> {
        members(bits).filter(|&i| i < self.len()).map(|i| self.points[i].clone()).collect()
    }

    /// The subset `bits` as an open; its semidecider accepts at step `1 + index`.
    pub fn open(&self, bits: Bits) -> OpenSet {
        let view = self.clone();
        OpenSet::new(self.space.clone(), move |p| match view.index_of(p) {
            Some(i) if bits >> i & 1 == 1 => SValue::accept_at(1 + i as u64),
            _ => SValue::bot(),
        })
    }

    pub fn compact(&self, bits: Bits) -> CompactSat {
        CompactSat::finite(self.space.clone(), self.select(bits))
    }

    pub fn overt(&self, bits: Bits) -> OvertClosed {
        OvertClosed::finite(self.space.clone(), self.select(bits))
    }

    /// Extension of an open set, read off by evaluating every point at `fuel`.
    pub fn extension(&self, u: &OpenSet, fuel: Fuel) -> Bits {
        (0..self.len())
            .filter(|&i| u.chi(&self.points[i]).accepted_within(fuel))
            .fold(0, |acc, i| acc | 1 << i)
    }

    /// `{V open : query(V) accepts}`, as bitsets of the opens.
    pub fn accepted_opens(&self, query: impl Fn(&OpenSet) -> SValue, fuel: Fuel) -> Vec<Bits> {
        self.topology
            .opens()
            .iter()
            .copied()
            .filter(|&v| query(&self.open(v)).accepted_within(fuel))
            .collect()
    }
}
