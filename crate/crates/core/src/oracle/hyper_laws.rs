//! Hyperspace operations against set-theoretic evaluation on finite views.

use std::sync::Arc;

use super::finite::{full, members, subset, Bits, FiniteSpace};
use super::view::FiniteView;
use crate::bases::finite::finite_kolmogorov;
use crate::error::Result;
use crate::hyper::*;
use crate::kernel::Fuel;
use crate::spaces::{product_intro, Point, Space};

/// Operations exercised, in report order.
pub const OPERATIONS: [&str; 17] = [
    "membership",
    "forall",
    "exists",
    "point-closure",
    "point-saturation",
    "neighborhood-filter",
    "overt-union",
    "compact-intersection",
    "compact-union",
    "filter-embedding",
    "trace-embedding",
    "box-embedding",
    "preimage",
    "compact-image",
    "closed-image",
    "sections",
    "products",
];

pub struct Mismatch {
    pub op: &'static str,
    pub detail: String,
}

type Check = std::result::Result<(), Mismatch>;

fn expect(op: &'static str, got: bool, want: bool, detail: impl FnOnce() -> String) -> Check {
    if got == want {
        Ok(())
    } else {
        Err(Mismatch { op, detail: format!("{} (got {got}, expected {want})", detail()) })
    }
}

fn lift(op: &'static str, r: Result<bool>) -> std::result::Result<bool, Mismatch> {
    r.map_err(|e| Mismatch { op, detail: e.to_string() })
}

fn bits_str(b: Bits) -> String {
    format!("{:?}", members(b).collect::<Vec<_>>())
}

/// Deterministic evenly strided sample of at most `cap` items, keeping the last.
fn thin<T: Copy>(items: Vec<T>, cap: usize) -> Vec<T> {
    if items.len() <= cap {
        return items;
    }
    let stride = items.len().div_ceil(cap);
    let last = *items.last().expect("non-empty");
    let mut out: Vec<T> = items.into_iter().step_by(stride).collect();
    out.push(last);
    out
}

/// Index subfamilies of `count` items: all of them when there are at most 8,
/// else singletons and neighboring pairs of a sample.
fn subfamilies(count: usize) -> Vec<Vec<usize>> {
    if count <= 8 {
        return (0..1u64 << count).map(|f| members(f).collect()).collect();
    }
    let picks = thin((0..count).collect(), SAMPLE);
    let mut out = vec![vec![]];
    out.extend(picks.iter().map(|&i| vec![i]));
    out.extend(picks.windows(2).map(|w| w.to_vec()));
    out
}

/// Composite views with more opens or test subsets than this are sampled.
const SAMPLE: usize = 48;

/// Test subsets of a view: every subset of small carriers, else a sample of
/// up-sets, closed sets and singletons.
fn test_subsets(t: &FiniteSpace) -> Vec<Bits> {
    if t.n() <= 4 {
        return (0..=full(t.n())).collect();
    }
    let mut out = thin(t.up_sets(), SAMPLE);
    out.extend(thin(t.opens().iter().map(|&u| t.carrier() & !u).collect(), SAMPLE));
    out.extend((0..t.n()).map(|i| 1 << i));
    out.sort_unstable();
    out.dedup();
    out
}

fn test_opens(t: &FiniteSpace) -> Vec<Bits> {
    thin(t.opens().to_vec(), SAMPLE)
}

/// Every single-space operation on `view`.
pub fn check_view(view: &FiniteView, fuel: Fuel) -> Check {
    let t = view.topology().clone();
    let opens = test_opens(&t);
    let pts = view.points();
    let subsets = test_subsets(&t);
    let acc = |s: crate::sierpinski::SValue| s.accepted_within(fuel);

    for &u in &opens {
        let uo = view.open(u);
        for (i, x) in pts.iter().enumerate() {
            let got = lift("membership", membership(&uo, x).map(acc))?;
            expect("membership", got, u >> i & 1 == 1, || format!("x = {i}, U = {}", bits_str(u)))?;
            expect("point-closure", acc(point_to_closed(x).exists(&uo)), t.closure(1 << i) & u != 0, || {
                format!("x = {i}, U = {}", bits_str(u))
            })?;
            expect("point-saturation", acc(point_to_compact(x).forall(&uo)), subset(t.saturate(1 << i), u), || {
                format!("x = {i}, U = {}", bits_str(u))
            })?;
            let filter = neighborhood_filter(x);
            expect("neighborhood-filter", acc(filter.chi(&uo.clone().into_point())), u >> i & 1 == 1, || {
                format!("x = {i}, U = {}", bits_str(u))
            })?;
        }
        for &k in &subsets {
            let d = || format!("K = {}, U = {}", bits_str(k), bits_str(u));
            let want = subset(k, u);
            expect("forall", lift("forall", forall_eval(&view.compact(k), &uo).map(acc))?, want, d)?;
            expect("forall", acc(view.compact(t.saturate(k)).forall(&uo)), want, d)?;
            let want = k & u != 0;
            expect("exists", lift("exists", exists_eval(&view.overt(k), &uo).map(acc))?, want, d)?;
            expect("exists", acc(view.overt(t.closure(k)).exists(&uo)), want, d)?;
        }
    }

    if t.is_t0() {
        let fs = Arc::new((*t).clone());
        let witness = finite_kolmogorov(&fs).map_err(|e| Mismatch { op: "neighborhood-filter", detail: e.to_string() })?;
        for (i, x) in pts.iter().enumerate() {
            let back = witness(&neighborhood_filter(&Point::element(&fs, i)), fuel)
                .map_err(|e| Mismatch { op: "neighborhood-filter", detail: e.to_string() })?;
            expect("neighborhood-filter", back.as_element().ok() == Some(i), true, || format!("x = {i} ({x:?})"))?;
        }
    }

    // families range over all opens of the view; the test opens are a sample
    let all_opens = t.opens().to_vec();
    let open_space = Space::open(view.space().clone());
    let open_pts: Vec<Point> = all_opens.iter().map(|&u| view.open(u).into_point()).collect();
    for chosen in subfamilies(all_opens.len()) {
        let down: Vec<usize> = (0..all_opens.len())
            .filter(|&j| chosen.iter().any(|&i| subset(all_opens[j], all_opens[i])))
            .collect();
        let up: Vec<usize> = (0..all_opens.len())
            .filter(|&j| chosen.iter().any(|&i| subset(all_opens[i], all_opens[j])))
            .collect();
        let select = |f: &[usize]| f.iter().map(|&j| open_pts[j].clone()).collect::<Vec<_>>();
        let union = chosen.iter().fold(0, |a, &i| a | all_opens[i]);
        let inter = chosen.iter().fold(t.carrier(), |a, &i| a & all_opens[i]);
        let d = || format!("family {:?}", chosen.iter().map(|&i| bits_str(all_opens[i])).collect::<Vec<_>>());
        for f in [&chosen, &down] {
            let got = overt_union(&OvertClosed::finite(open_space.clone(), select(f)))
                .map(|u| view.extension(&u, fuel))
                .map_err(|e| Mismatch { op: "overt-union", detail: e.to_string() })?;
            expect("overt-union", got == union, true, d)?;
        }
        for f in [&chosen, &up] {
            let got = compact_intersection(&CompactSat::finite(open_space.clone(), select(f)))
                .map(|u| view.extension(&u, fuel))
                .map_err(|e| Mismatch { op: "compact-intersection", detail: e.to_string() })?;
            expect("compact-intersection", got == inter, true, d)?;
        }
    }

    let ups = t.up_sets();
    let compact_space = Space::compact(view.space().clone());
    for fam in subfamilies(ups.len()) {
        let ks: Vec<Point> = fam.iter().map(|&j| view.compact(ups[j]).into_point()).collect();
        let all = fam.iter().fold(0, |a, &j| a | ups[j]);
        let cu = compact_union(&CompactSat::finite(compact_space.clone(), ks))
            .map_err(|e| Mismatch { op: "compact-union", detail: e.to_string() })?;
        for &u in &opens {
            expect("compact-union", acc(cu.forall(&view.open(u))), subset(all, u), || {
                format!("family {:?}, U = {}", fam.iter().map(|&j| bits_str(ups[j])).collect::<Vec<_>>(), bits_str(u))
            })?;
        }
    }

    for &u in &opens {
        let uo = view.open(u);
        let up = uo.clone().into_point();
        let boxed = box_embed(&uo);
        for &k in &subsets {
            let d = || format!("K = {}, U = {}", bits_str(k), bits_str(u));
            let kc = view.compact(k);
            let filter = filter_embed(&kc);
            expect("filter-embedding", acc(filter.chi(&up)), subset(k, u), d)?;
            let back = filter_invert(&filter).map_err(|e| Mismatch { op: "filter-embedding", detail: e.to_string() })?;
            expect("filter-embedding", acc(back.forall(&uo)), subset(k, u), d)?;
            let trace = trace_embed(&view.overt(k));
            expect("trace-embedding", acc(trace.chi(&up)), k & u != 0, d)?;
            let back = trace_invert(&trace).map_err(|e| Mismatch { op: "trace-embedding", detail: e.to_string() })?;
            expect("trace-embedding", acc(back.exists(&uo)), k & u != 0, d)?;
            expect("box-embedding", acc(boxed.chi(&kc.into_point())), subset(k, u), d)?;
        }
        let back = box_invert(&boxed).map_err(|e| Mismatch { op: "box-embedding", detail: e.to_string() })?;
        expect("box-embedding", view.extension(&back, fuel) == u, true, || format!("U = {}", bits_str(u)))?;
    }
    Ok(())
}

fn finite_arc(space: &Space) -> Option<Arc<FiniteSpace>> {
    match space {
        Space::Finite(fs) => Some(fs.clone()),
        _ => None,
    }
}

/// Continuous maps between two finite leaf spaces, as tables.
pub fn continuous_maps(a: &FiniteSpace, b: &FiniteSpace) -> Vec<Vec<usize>> {
    let (n, m) = (a.n(), b.n());
    if m == 0 {
        return if n == 0 { vec![vec![]] } else { vec![] };
    }
    let total = m.pow(n as u32);
    (0..total)
        .map(|mut code| {
            (0..n)
                .map(|_| {
                    let v = code % m;
                    code /= m;
                    v
                })
                .collect::<Vec<_>>()
        })
        .filter(|table| {
            b.opens().iter().all(|&v| a.is_open((0..n).filter(|&x| v >> table[x] & 1 == 1).fold(0, |s, x| s | 1 << x)))
        })
        .collect()
}

/// Function-space, product and section operations for leaf spaces `a`, `b`.
pub fn check_pair(a: &FiniteView, b: &FiniteView, fuel: Fuel) -> Check {
    let acc = |s: crate::sierpinski::SValue| s.accepted_within(fuel);
    let (ta, tb) = (a.topology().clone(), b.topology().clone());
    let prod = FiniteView::of(&Space::product(a.space().clone(), b.space().clone()))
        .map_err(|e| Mismatch { op: "products", detail: e.to_string() })?;
    let nb = b.len();
    let rect = |u: Bits, v: Bits| {
        members(u).flat_map(|i| members(v).map(move |j| i * nb + j)).fold(0, |s, k| s | 1 << k)
    };

    if let (Some(fa), Some(fb)) = (finite_arc(a.space()), finite_arc(b.space())) {
        let witness = tb.is_t0().then(|| finite_kolmogorov(&fb).expect("T0"));
        for table in continuous_maps(&ta, &tb) {
            let tab = table.clone();
            let fb2 = fb.clone();
            let f = Point::function(a.space().clone(), b.space().clone(), move |x| {
                Ok(Point::element(&fb2, tab[x.as_element()?]))
            });
            let image = |s: Bits| members(s).fold(0, |acc, x| acc | 1 << table[x]);
            let d = |what: String| format!("f = {table:?}, {what}");
            for &v in tb.opens() {
                let vo = b.open(v);
                let pre = preimage(&f, &vo).map_err(|e| Mismatch { op: "preimage", detail: e.to_string() })?;
                let want = (0..ta.n()).filter(|&x| v >> table[x] & 1 == 1).fold(0, |s, x| s | 1 << x);
                expect("preimage", a.extension(&pre, fuel) == want, true, || d(format!("V = {}", bits_str(v))))?;
                for s in 0..=full(ta.n()) {
                    let ci = compact_image(&f, &a.compact(s))
                        .map_err(|e| Mismatch { op: "compact-image", detail: e.to_string() })?;
                    expect("compact-image", acc(ci.forall(&vo)), subset(image(s), v), || {
                        d(format!("K = {}, V = {}", bits_str(s), bits_str(v)))
                    })?;
                    let cl = closed_image(&f, &a.overt(s))
                        .map_err(|e| Mismatch { op: "closed-image", detail: e.to_string() })?;
                    expect("closed-image", acc(cl.exists(&vo)), image(s) & v != 0, || {
                        d(format!("A = {}, V = {}", bits_str(s), bits_str(v)))
                    })?;
                }
            }
            let w = compact_open_embed(&f).map_err(|e| Mismatch { op: "compact-image", detail: e.to_string() })?;
            for k in ta.up_sets() {
                for &v in tb.opens() {
                    let q = product_intro(a.compact(k).into_point(), b.open(v).into_point());
                    expect("compact-image", acc(w.chi(&q)), subset(image(k), v), || {
                        d(format!("compact-open at K = {}, V = {}", bits_str(k), bits_str(v)))
                    })?;
                }
            }
            if let Some(witness) = &witness {
                let g = compact_open_invert(&w, Some(witness), fuel)
                    .map_err(|e| Mismatch { op: "compact-image", detail: e.to_string() })?;
                for x in 0..fa.n() {
                    let y = crate::spaces::eval(&g, &Point::element(&fa, x)).and_then(|p| p.as_element());
                    expect("compact-image", y.ok() == Some(table[x]), true, || d(format!("compact-open inverse at {x}")))?;
                }
            } else {
                let missing = compact_open_invert(&w, None, fuel).is_err();
                expect("compact-image", missing, true, || d("inverse without a witness".into()))?;
            }
        }
    }

    for &u in ta.opens() {
        for &v in tb.opens() {
            let got = prod.extension(&product_open(&a.open(u), &b.open(v)), fuel);
            expect("products", got == rect(u, v), true, || format!("U = {}, V = {}", bits_str(u), bits_str(v)))?;
        }
    }
    let whole_b = b.overt(tb.carrier());
    for w in test_opens(prod.topology()) {
        let wo = prod.open(w);
        for (i, x) in a.points().iter().enumerate() {
            let want = (0..nb).filter(|&j| w >> (i * nb + j) & 1 == 1).fold(0, |s, j| s | 1 << j);
            let got = section(x, &wo).map(|s| b.extension(&s, fuel));
            expect("sections", got.ok() == Some(want), true, || format!("W = {}, x = {i}", bits_str(w)))?;
        }
        for (j, y) in b.points().iter().enumerate() {
            let want = (0..a.len()).filter(|&i| w >> (i * nb + j) & 1 == 1).fold(0, |s, i| s | 1 << i);
            let got = section_second(&wo, y).map(|s| a.extension(&s, fuel));
            expect("sections", got.ok() == Some(want), true, || format!("W = {}, y = {j}", bits_str(w)))?;
        }
        let want = (0..a.len()).filter(|&i| (0..nb).any(|j| w >> (i * nb + j) & 1 == 1)).fold(0, |s, i| s | 1 << i);
        let got = overt_projection(&wo, &whole_b).map(|p| a.extension(&p, fuel));
        expect("sections", got.ok() == Some(want), true, || format!("projection of W = {}", bits_str(w)))?;
        for s in 0..=full(ta.n()) {
            for r in 0..=full(tb.n()) {
                let got = acc(product_closed(&a.overt(s), &b.overt(r)).exists(&wo));
                expect("products", got, rect(s, r) & w != 0, || {
                    format!("A = {}, B = {}, W = {}", bits_str(s), bits_str(r), bits_str(w))
                })?;
            }
        }
    }
    Ok(())
}
