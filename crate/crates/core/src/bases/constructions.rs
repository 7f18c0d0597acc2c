//! Prebases of products, sequence spaces, subspaces, coproducts and meets,
//! built from prebases with overt index spaces.

use std::sync::Arc;

use super::{Prebase, Presubbase, Resolver, TransposeInverse};
use crate::error::{Error, Result};
use crate::hyper::{compact_image, product_closed, product_open, section, section_second, CompactSat, OpenSet, OvertClosed};
use crate::kernel::dovetail;
use crate::sierpinski::{and2, and_finite, or2, or_finite, SValue};
use crate::spaces::{
    coproduct_inj, meet_intro, meet_proj1, meet_proj2, product_intro, proj1_map, proj2_map, seq_proj, word, Payload,
    Point, Side, Space, Subset,
};

fn check_whole(b: &Prebase, whole: &OvertClosed) -> Result<()> {
    if whole.over() == b.base.index() {
        Ok(())
    } else {
        Err(Error::shape(b.base.index(), whole.over()))
    }
}

/// `{r : ∃s. (r, s) ∈ U}` and `{s : ∃r. (r, s) ∈ U}` along overt factors.
fn projections(u: &OpenSet, r: &Space, s: &Space, whole_r: &OvertClosed, whole_s: &OvertClosed) -> (OpenSet, OpenSet) {
    let (u1, ws) = (u.clone(), whole_s.clone());
    let left = OpenSet::new(r.clone(), move |x| match section(x, &u1) {
        Ok(v) => ws.exists(&v),
        Err(_) => SValue::bot(),
    });
    let (u2, wr) = (u.clone(), whole_r.clone());
    let right = OpenSet::new(s.clone(), move |y| match section_second(&u2, y) {
        Ok(v) => wr.exists(&v),
        Err(_) => SValue::bot(),
    });
    (left, right)
}

fn both_inverses(bx: &Prebase, by: &Prebase) -> bool {
    bx.base.has_transpose_inverse() && by.base.has_transpose_inverse()
}

/// Resolver shared by products and meets: resolve both projections of `K`.
fn pair_resolver(bx: &Prebase, by: &Prebase) -> Resolver {
    let (bx, by) = (bx.clone(), by.clone());
    Arc::new(move |k: &CompactSat, fuel| {
        let (r, s) = (bx.base.index().clone(), by.base.index().clone());
        let k1 = compact_image(&proj1_map(r.clone(), s.clone()), k)?;
        let k2 = compact_image(&proj2_map(r, s), k)?;
        Ok(product_closed(&bx.resolve(&k1, fuel)?, &by.resolve(&k2, fuel)?))
    })
}

/// `(r, s) ↦ B_X(r) × B_Y(s)`
pub fn product_prebase(bx: &Prebase, by: &Prebase, whole_r: &OvertClosed, whole_s: &OvertClosed) -> Result<Prebase> {
    check_whole(bx, whole_r)?;
    check_whole(by, whole_s)?;
    let (r, s) = (bx.base.index().clone(), by.base.index().clone());
    let carrier = Space::product(bx.base.carrier().clone(), by.base.carrier().clone());
    let family = {
        let (bx, by, carrier) = (bx.clone(), by.clone(), carrier.clone());
        move |t: &Point| match t.as_pair() {
            Ok((a, b)) => product_open(&bx.base.family(a), &by.base.family(b)),
            Err(_) => OpenSet::empty(carrier.clone()),
        }
    };
    let inverse: TransposeInverse = {
        let (bx, by, whole_r, whole_s) = (bx.clone(), by.clone(), whole_r.clone(), whole_s.clone());
        let (r, s) = (r.clone(), s.clone());
        Arc::new(move |u: &OpenSet, fuel| {
            let (tx, ty) = projections(u, &r, &s, &whole_r, &whole_s);
            Ok(product_intro(bx.base.invert_transpose(&tx, fuel)?, by.base.invert_transpose(&ty, fuel)?))
        })
    };
    let base = Presubbase::new(
        format!("{} x {}", bx.base.label(), by.base.label()),
        Space::product(r, s),
        carrier,
        family,
        both_inverses(bx, by).then_some(inverse),
    );
    Ok(Prebase::new(base, pair_resolver(bx, by)))
}

/// `∃ s_0 … s_{n-1}` drawn from `sets[i]`, then `w.chi(s_0 … s_{n-1})`.
fn exists_word(sets: &[OvertClosed], letter: &Space, prefix: Vec<Point>, tail: Option<Point>, w: &OpenSet) -> SValue {
    let k = prefix.len();
    if k == sets.len() {
        let mut letters = prefix;
        letters.extend(tail);
        return w.chi(&word(letter.clone(), letters));
    }
    let (rest, letter2, w2, tail2) = (sets.to_vec(), letter.clone(), w.clone(), tail.clone());
    let inner = OpenSet::new(letter.clone(), move |s| {
        let mut next = prefix.clone();
        next.push(s.clone());
        exists_word(&rest, &letter2, next, tail2.clone(), &w2)
    });
    sets[k].exists(&inner)
}

/// `(s_0, …, s_{n-1}) ↦ B_Y(s_0) × … × B_Y(s_{n-1}) × Y^ℕ` over the index `S*`.
pub fn sequence_prebase(by: &Prebase, whole_s: &OvertClosed) -> Result<Prebase> {
    check_whole(by, whole_s)?;
    let s = by.base.index().clone();
    let y = by.base.carrier().clone();
    let carrier = Space::sequence(y.clone());
    let index = Space::words(s.clone());
    let family = {
        let (by, carrier) = (by.clone(), carrier.clone());
        move |w: &Point| {
            let Ok(letters) = w.as_word() else { return OpenSet::empty(carrier.clone()) };
            let (by, letters) = (by.clone(), letters.to_vec());
            OpenSet::new(carrier.clone(), move |seq| {
                let parts = letters
                    .iter()
                    .enumerate()
                    .map(|(i, l)| match seq_proj(seq, i as u64) {
                        Ok(t) => by.base.family(l).chi(&t),
                        Err(_) => SValue::bot(),
                    })
                    .collect();
                and_finite(parts)
            })
        }
    };
    let inverse: TransposeInverse = {
        let (by, whole_s, s, y) = (by.clone(), whole_s.clone(), s.clone(), y.clone());
        Arc::new(move |u: &OpenSet, fuel| {
            let (by, whole_s, s, u) = (by.clone(), whole_s.clone(), s.clone(), u.clone());
            let term = move |n: u64| -> Result<Point> {
                let sets = vec![whole_s.clone(); n as usize];
                let (s2, u2) = (s.clone(), u.clone());
                let t_n = OpenSet::new(s.clone(), move |letter| {
                    exists_word(&sets, &s2, Vec::new(), Some(letter.clone()), &u2)
                });
                by.base.invert_transpose(&t_n, fuel)
            };
            Ok(Point::new(Space::sequence(y.clone()), Payload::Seq(Arc::new(term))))
        })
    };
    let resolver: Resolver = {
        let by = by.clone();
        Arc::new(move |k: &CompactSat, fuel| {
            let words = k.over().clone();
            let bounded = |n: u64| {
                OpenSet::new(words.clone(), move |w| SValue::from_bool(w.as_word().is_ok_and(|l| l.len() as u64 <= n)))
            };
            let (len, _) = dovetail(|n, f| k.forall(&bounded(n)).acceptance(f), None, fuel)
                .ok_or(Error::pending(fuel.0))?;
            let s = by.base.index().clone();
            let mut sets = Vec::new();
            for i in 0..len as usize {
                let (k2, words2) = (k.clone(), words.clone());
                let k_i = CompactSat::new(s.clone(), move |u| {
                    let u = u.clone();
                    k2.forall(&OpenSet::new(words2.clone(), move |w| match w.as_word() {
                        Ok(l) if l.len() <= i => SValue::top(),
                        Ok(l) => u.chi(&l[i]),
                        Err(_) => SValue::bot(),
                    }))
                });
                sets.push(by.resolve(&k_i, fuel)?);
            }
            Ok(OvertClosed::new(words, move |w| exists_word(&sets, &s, Vec::new(), None, w)))
        })
    };
    let base = Presubbase::new(
        format!("{}*", by.base.label()),
        index,
        carrier,
        family,
        by.base.has_transpose_inverse().then_some(inverse),
    );
    Ok(Prebase::new(base, resolver))
}

/// `r ↦ B_X(r) ∩ Z`; the index need not be overt.
pub fn subspace_prebase(bx: &Prebase, z: Subset) -> Prebase {
    let carrier = Space::Subspace(Arc::new(bx.base.carrier().clone()), z);
    let family = {
        let (bx, carrier) = (bx.clone(), carrier.clone());
        move |r: &Point| bx.base.family(r).retag(carrier.clone())
    };
    let inverse: TransposeInverse = {
        let (bx, carrier) = (bx.clone(), carrier.clone());
        Arc::new(move |u: &OpenSet, fuel| {
            let x = bx.base.invert_transpose(u, fuel)?;
            Ok(Point::new(carrier.clone(), x.payload))
        })
    };
    let base = Presubbase::new(
        format!("{} | Z", bx.base.label()),
        bx.base.index().clone(),
        carrier.clone(),
        family,
        bx.base.has_transpose_inverse().then_some(inverse),
    );
    let resolver: Resolver = {
        let bx = bx.clone();
        Arc::new(move |k: &CompactSat, fuel| bx.resolve(k, fuel))
    };
    Prebase::new(base, resolver)
}

fn side_open(side: Side, u: &OpenSet, other: &Space, own: &Space) -> OpenSet {
    let (u, other) = (u.clone(), other.clone());
    OpenSet::new(own.clone(), move |t| u.chi(&coproduct_inj(side, t.clone(), other.clone())))
}

/// `U` on one summand, everything on the other.
fn widen(index: &Space, side: Side, u: &OpenSet) -> OpenSet {
    let u = u.clone();
    OpenSet::new(index.clone(), move |t| match t.as_tagged() {
        Ok((sd, q)) if sd == side => u.chi(q),
        Ok(_) => SValue::top(),
        Err(_) => SValue::bot(),
    })
}

/// `t ↦ B_X(t)` for `t ∈ R`, `B_Y(t)` for `t ∈ S`.
///
/// A compact `K ⊆ R ⊔ S` meeting both summands has empty intersection, and one
/// inside a single summand intersects to a subset of that summand only; the
/// resolver therefore gates each part of `A` on `K ⊆ ∅`, `K ⊆ R`, `K ⊆ S`.
pub fn coproduct_prebase(bx: &Prebase, by: &Prebase, whole_r: &OvertClosed, whole_s: &OvertClosed) -> Result<Prebase> {
    check_whole(bx, whole_r)?;
    check_whole(by, whole_s)?;
    let (r, s) = (bx.base.index().clone(), by.base.index().clone());
    let (x, y) = (bx.base.carrier().clone(), by.base.carrier().clone());
    let index = Space::coproduct(r.clone(), s.clone());
    let carrier = Space::coproduct(x.clone(), y.clone());
    let family = {
        let (bx, by, carrier) = (bx.clone(), by.clone(), carrier.clone());
        move |t: &Point| {
            let Ok((side, inner)) = t.as_tagged() else { return OpenSet::empty(carrier.clone()) };
            let b = match side {
                Side::Left => bx.base.family(inner),
                Side::Right => by.base.family(inner),
            };
            OpenSet::new(carrier.clone(), move |p| match p.as_tagged() {
                Ok((sp, q)) if sp == side => b.chi(q),
                _ => SValue::bot(),
            })
        }
    };
    let inverse: TransposeInverse = {
        let (bx, by, whole_r, whole_s) = (bx.clone(), by.clone(), whole_r.clone(), whole_s.clone());
        let (r, s, x, y) = (r.clone(), s.clone(), x.clone(), y.clone());
        Arc::new(move |u: &OpenSet, fuel| {
            let u0 = side_open(Side::Left, u, &s, &r);
            let u1 = side_open(Side::Right, u, &r, &s);
            let probes = [whole_r.exists(&u0), whole_s.exists(&u1)];
            let (which, _) =
                dovetail(|i, f| probes[i as usize].acceptance(f), Some(2), fuel).ok_or(Error::pending(fuel.0))?;
            if which == 0 {
                Ok(coproduct_inj(Side::Left, bx.base.invert_transpose(&u0, fuel)?, y.clone()))
            } else {
                Ok(coproduct_inj(Side::Right, by.base.invert_transpose(&u1, fuel)?, x.clone()))
            }
        })
    };
    let resolver: Resolver = {
        let (bx, by, whole_r, whole_s) = (bx.clone(), by.clone(), whole_r.clone(), whole_s.clone());
        let (r, s, index) = (r.clone(), s.clone(), index.clone());
        Arc::new(move |k: &CompactSat, fuel| {
            let on = |side: Side| {
                let index = index.clone();
                OpenSet::new(index, move |t| SValue::from_bool(t.as_tagged().is_ok_and(|(sd, _)| sd == side)))
            };
            let (k1, k2, i1, i2) = (k.clone(), k.clone(), index.clone(), index.clone());
            let k_left = CompactSat::new(r.clone(), move |u| k1.forall(&widen(&i1, Side::Left, u)));
            let k_right = CompactSat::new(s.clone(), move |u| k2.forall(&widen(&i2, Side::Right, u)));
            let a0 = bx.resolve(&k_left, fuel)?;
            let a1 = by.resolve(&k_right, fuel)?;
            let gates = [
                k.forall(&OpenSet::empty(index.clone())),
                k.forall(&on(Side::Left)),
                k.forall(&on(Side::Right)),
            ];
            let (r2, s2, wr_, ws_) = (r.clone(), s.clone(), whole_r.clone(), whole_s.clone());
            Ok(OvertClosed::new(index.clone(), move |w| {
                let w0 = side_open(Side::Left, w, &s2, &r2);
                let w1 = side_open(Side::Right, w, &r2, &s2);
                or_finite(vec![
                    and2(gates[0].clone(), or2(wr_.exists(&w0), ws_.exists(&w1))),
                    and2(gates[1].clone(), a0.exists(&w0)),
                    and2(gates[2].clone(), a1.exists(&w1)),
                ])
            }))
        })
    };
    let base = Presubbase::new(
        format!("{} + {}", bx.base.label(), by.base.label()),
        index,
        carrier,
        family,
        both_inverses(bx, by).then_some(inverse),
    );
    Ok(Prebase::new(base, resolver))
}

/// `(r, s) ↦ B_X(r) ∩ B_Y(s)` on `X ⊓ Y`.
pub fn meet_prebase(bx: &Prebase, by: &Prebase, whole_r: &OvertClosed, whole_s: &OvertClosed) -> Result<Prebase> {
    check_whole(bx, whole_r)?;
    check_whole(by, whole_s)?;
    let (r, s) = (bx.base.index().clone(), by.base.index().clone());
    let carrier = Space::meet(bx.base.carrier().clone(), by.base.carrier().clone());
    let family = {
        let (bx, by, carrier) = (bx.clone(), by.clone(), carrier.clone());
        move |t: &Point| {
            let Ok((a, b)) = t.as_pair() else { return OpenSet::empty(carrier.clone()) };
            let (ua, ub) = (bx.base.family(a), by.base.family(b));
            OpenSet::new(carrier.clone(), move |p| match (meet_proj1(p), meet_proj2(p)) {
                (Ok(px), Ok(py)) => and2(ua.chi(&px), ub.chi(&py)),
                _ => SValue::bot(),
            })
        }
    };
    let inverse: TransposeInverse = {
        let (bx, by, whole_r, whole_s) = (bx.clone(), by.clone(), whole_r.clone(), whole_s.clone());
        let (r, s) = (r.clone(), s.clone());
        Arc::new(move |u: &OpenSet, fuel| {
            let (tx, ty) = projections(u, &r, &s, &whole_r, &whole_s);
            meet_intro(bx.base.invert_transpose(&tx, fuel)?, by.base.invert_transpose(&ty, fuel)?)
        })
    };
    let base = Presubbase::new(
        format!("{} & {}", bx.base.label(), by.base.label()),
        Space::product(r, s),
        carrier,
        family,
        both_inverses(bx, by).then_some(inverse),
    );
    Ok(Prebase::new(base, pair_resolver(bx, by)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Fuel;
    use crate::bases::finite::{identity_like, induced_topology, validate_prebase, validate_transpose_inverse};
    use crate::oracle::{FiniteSpace, FiniteView};

    const F: Fuel = Fuel(200_000);

    fn whole(p: &Prebase) -> OvertClosed {
        let v = FiniteView::of(p.base.index()).unwrap();
        OvertClosed::finite(v.space().clone(), v.points().to_vec())
    }

    fn check(p: &Prebase, expected: &FiniteSpace) {
        let iv = FiniteView::of(p.base.index()).unwrap();
        let xv = FiniteView::of(p.base.carrier()).unwrap();
        assert_eq!(&induced_topology(&p.base, &iv, &xv, F), expected);
        assert_eq!(validate_prebase(p, &iv, &xv, F).unwrap(), None);
        assert!(validate_transpose_inverse(&p.base, &xv, F).unwrap());
    }

    #[test]
    fn product_and_coproduct_of_sierpinski() {
        let s = identity_like(&FiniteSpace::sierpinski()).unwrap();
        let w = whole(&s);
        let prod = product_prebase(&s, &s, &w, &w).unwrap();
        let pv = FiniteView::of(prod.base.carrier()).unwrap();
        check(&prod, pv.topology());
        let co = coproduct_prebase(&s, &s, &w, &w).unwrap();
        let cv = FiniteView::of(co.base.carrier()).unwrap();
        check(&co, cv.topology());
    }

    #[test]
    fn meet_and_subspace() {
        let c = identity_like(&FiniteSpace::chain(2)).unwrap();
        let w = whole(&c);
        check(&meet_prebase(&c, &c, &w, &w).unwrap(), &FiniteSpace::chain(2));
        check(&subspace_prebase(&c, Subset::whole()), &FiniteSpace::chain(2));
    }

    #[test]
    fn product_requires_matching_witness() {
        let s = identity_like(&FiniteSpace::sierpinski()).unwrap();
        let wrong = OvertClosed::finite(Space::Nat, vec![]);
        assert!(product_prebase(&s, &s, &wrong, &whole(&s)).is_err());
    }
}
