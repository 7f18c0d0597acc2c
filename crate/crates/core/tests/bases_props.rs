use std::sync::Arc;

use synthtop::bases::finite::finite_presubbase;
use synthtop::bases::{prebase_from_point_closure, prebase_from_presubbase, Presubbase};
use synthtop::hyper::{box_embed, compact_intersection, compact_union, filter_embed, CompactSat, OpenSet};
use synthtop::oracle::finite::members;
use synthtop::oracle::subbase::monotone_families;
use synthtop::oracle::{enumerate_spaces, Bits, FiniteView};
use synthtop::spaces::{Point, Space};
use synthtop::Fuel;

const F: Fuel = Fuel(10_000);

/// Index lists of at most two items, including the empty family.
fn small_families(count: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for i in 0..count {
        out.push(vec![i]);
        for j in i + 1..count {
            out.push(vec![i, j]);
        }
    }
    out
}

fn views() -> Vec<FiniteView> {
    (1..=3)
        .flat_map(|n| enumerate_spaces(n, false).unwrap())
        .map(|fs| FiniteView::of(&Space::finite(fs)).unwrap())
        .collect()
}

/// `⋂_{y∈𝒦} B_y` and the resolved union agree on every carrier point.
fn check_equation(p: &synthtop::bases::Prebase, family: &CompactSat, members: &[Point], carrier: &[Point]) {
    let a = p.resolve(family, F).unwrap();
    for x in carrier {
        let lhs = members.iter().all(|y| p.base.family(y).chi(x).accepted_within(F));
        let rhs = a.exists(&p.base.transpose(x)).accepted_within(F);
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn filter_family_is_a_prebase() {
    for v in views() {
        let x = v.space().clone();
        let b = Presubbase::new(
            "filter",
            Space::compact(x.clone()),
            Space::open(x.clone()),
            |k: &Point| filter_embed(k.as_compact().expect("a compact point")),
            None,
        );
        let p = prebase_from_point_closure(&b, |fam: &CompactSat, _| Ok(compact_union(fam)?.into_point()));
        let ups: Vec<Bits> = v.topology().up_sets();
        let opens: Vec<Point> = v.topology().opens().iter().map(|&u| v.open(u).into_point()).collect();
        for fam in small_families(ups.len()) {
            let pts: Vec<Point> = fam.iter().map(|&i| v.compact(ups[i]).into_point()).collect();
            let family = CompactSat::finite(Space::compact(x.clone()), pts.clone());
            check_equation(&p, &family, &pts, &opens);
        }
    }
}

#[test]
fn box_family_is_a_prebase() {
    for v in views() {
        let x = v.space().clone();
        let b = Presubbase::new(
            "box",
            Space::open(x.clone()),
            Space::compact(x.clone()),
            |u: &Point| box_embed(u.as_open().expect("an open point")),
            None,
        );
        let p = prebase_from_point_closure(&b, |fam: &CompactSat, _| Ok(compact_intersection(fam)?.into_point()));
        let opens: Vec<Bits> = v.topology().opens().to_vec();
        let compacts: Vec<Point> = v.topology().up_sets().iter().map(|&k| v.compact(k).into_point()).collect();
        for fam in small_families(opens.len()) {
            let pts: Vec<Point> = fam.iter().map(|&i| v.open(opens[i]).into_point()).collect();
            let family = CompactSat::finite(Space::open(x.clone()), pts.clone());
            check_equation(&p, &family, &pts, &compacts);
        }
    }
}

#[test]
fn compact_intersections_of_finite_families() {
    for n in 1..=3 {
        for index in enumerate_spaces(2, true).unwrap() {
            let index = Arc::new(index);
            for fb in monotone_families(n, &index) {
                let b = finite_presubbase(&fb);
                let p = prebase_from_presubbase(&b);
                let iv = FiniteView::of(b.index()).unwrap();
                let cv = FiniteView::of(b.carrier()).unwrap();
                let as_bits = |o: &OpenSet| -> Bits {
                    (0..n).filter(|&x| o.chi(&cv.points()[x]).accepted_within(F)).fold(0, |acc, x| acc | 1 << x)
                };
                let whole = as_bits(&p.base.family(&iv.compact(0).into_point()));
                assert_eq!(whole, cv.topology().carrier(), "empty intersection is the carrier");
                for y in 0..index.n() {
                    let k = iv.compact(index.saturate(1 << y)).into_point();
                    assert_eq!(as_bits(&p.base.family(&k)), fb.sets()[y]);
                }
                for k in index.up_sets() {
                    let want = members(k).fold(cv.topology().carrier(), |acc, y| acc & fb.sets()[y]);
                    assert_eq!(as_bits(&p.base.family(&iv.compact(k).into_point())), want);
                }
            }
        }
    }
}
