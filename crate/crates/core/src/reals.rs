//! Exact reals: signed decimal names, fast Cauchy names, the rational-interval
//! subbase, and repair of the decimal representation through its completion.
//!
//! A decimal name `p` has `p(0)` the sign (0 for `+`, 1 for `−`), `p(1)` the
//! integer part and `p(k + 2)` the `k`-th fractional digit. Reading `k` digits
//! pins the value to a closed interval of width `10^{-k}`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::bases::{kolmogorov_completion, Presubbase};
use crate::error::{Error, Result};
use crate::hyper::OpenSet;
use crate::kernel::{checked_pair, dovetail, unpair, Fuel, Name};
use crate::sierpinski::SValue;
use crate::spaces::{Payload, Point, Space};

/// An eventually periodic decimal expansion `±int.prefix(cycle)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decimal {
    pub negative: bool,
    pub int: u64,
    pub prefix: Vec<u8>,
    pub cycle: Vec<u8>,
}

impl FromStr for Decimal {
    type Err = Error;

    /// Accepts `0.5`, `-2.25`, `0.3(3)`, `0.142857(142857)`, `7`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::Parse(format!("{s:?}: {why}"));
        let (negative, rest) = match s.strip_prefix('-') {
            Some(r) => (true, r),
            None => (false, s),
        };
        let (int_part, frac) = rest.split_once('.').unwrap_or((rest, ""));
        if int_part.is_empty() || !int_part.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad("expected an integer part"));
        }
        let int = int_part.parse::<u64>().map_err(|_| bad("integer part too large"))?;
        let (prefix, cycle) = match frac.split_once('(') {
            Some((p, c)) => {
                let c = c.strip_suffix(')').ok_or_else(|| bad("unclosed repetend"))?;
                if c.is_empty() {
                    return Err(bad("empty repetend"));
                }
                (p, c)
            }
            None => (frac, ""),
        };
        let digits = |t: &str| -> Result<Vec<u8>> {
            t.bytes()
                .map(|c| if c.is_ascii_digit() { Ok(c - b'0') } else { Err(bad("unexpected character")) })
                .collect()
        };
        Ok(Decimal {
            negative,
            int,
            prefix: digits(prefix)?,
            cycle: digits(cycle)?,
        })
    }
}

impl Decimal {
    pub fn name(&self) -> Name {
        let head = vec![self.negative as u64, self.int];
        let digits: Vec<u64> = self.prefix.iter().map(|&d| d as u64).collect();
        let cycle: Vec<u64> = self.cycle.iter().map(|&d| d as u64).collect();
        Name::eventually_periodic(head.into_iter().chain(digits).collect(), cycle)
    }

    pub fn point(&self) -> Point {
        decimal_point(&self.name())
    }

    /// The denoted real.
    pub fn value(&self) -> BigRational {
        let ten = BigInt::from(10);
        let to_int = |ds: &[u8]| ds.iter().fold(BigInt::zero(), |acc, &d| acc * &ten + BigInt::from(d));
        let scale = num_traits::pow(ten.clone(), self.prefix.len());
        let mut v = BigRational::from_integer(BigInt::from(self.int))
            + BigRational::new(to_int(&self.prefix), scale.clone());
        if !self.cycle.is_empty() {
            let period = num_traits::pow(ten.clone(), self.cycle.len()) - BigInt::one();
            v += BigRational::new(to_int(&self.cycle), period * scale);
        }
        if self.negative {
            -v
        } else {
            v
        }
    }
}

pub fn decimal_point(name: &Name) -> Point {
    Point::new(Space::Decimal, Payload::Name(name.clone()))
}

fn digit(p: &Name, k: u64) -> u64 {
    p.at(k + 2).min(9)
}

/// `(a, b)` on unsigned magnitudes: accepts after `k` digits once
/// `a < N_k/10^k` and `(N_k + 1)/10^k < b`, tracked by the residuals
/// `s_k = N_k·ad − an·10^k` and `t_k = bn·10^k − (N_k + 1)·bd`.
fn magnitude_in(p: &Name, a: &BigRational, b: &BigRational, fuel: Fuel) -> Option<u64> {
    let (an, ad) = (a.numer(), a.denom());
    let (bn, bd) = (b.numer(), b.denom());
    let n0 = BigInt::from(p.at(1));
    let mut s = &n0 * ad - an;
    let mut t: BigInt = bn - (n0 + 1) * bd;
    let ten = BigInt::from(10);
    for k in 0..=fuel.0 {
        let (lo_ok, hi_ok) = (s.is_positive(), t.is_positive());
        if lo_ok && hi_ok {
            return Some(k);
        }
        // the whole prefix interval already lies beyond an endpoint
        if s < -ad.clone() || t < -bd.clone() {
            return None;
        }
        if k == fuel.0 {
            break;
        }
        let d = BigInt::from(digit(p, k));
        s = if lo_ok { BigInt::one() } else { &s * &ten + &d * ad };
        t = if hi_ok { BigInt::one() } else { &t * &ten + (BigInt::from(9) - &d) * bd };
    }
    None
}

/// `{x : a < x < b}` as an open of the decimal space; acceptance time is the
/// number of fractional digits read.
pub fn interval_open_decimal(a: &BigRational, b: &BigRational) -> Result<OpenSet> {
    if a >= b {
        return Err(Error::Malformed(format!("empty interval ({a}, {b})")));
    }
    let (a, b) = (a.clone(), b.clone());
    Ok(OpenSet::new(Space::Decimal, move |x| {
        let Ok(p) = x.as_name() else { return SValue::bot() };
        let (p, a, b) = (p.clone(), a.clone(), b.clone());
        SValue::from_fn(move |fuel| {
            if p.at(0) == 0 {
                magnitude_in(&p, &a, &b, fuel)
            } else {
                magnitude_in(&p, &-b.clone(), &-a.clone(), fuel)
            }
        })
    }))
}

/// Calkin–Wilf enumeration of the positive rationals, `cw(1) = 1`.
pub fn calkin_wilf(n: u64) -> BigRational {
    assert!(n >= 1, "Calkin-Wilf positions start at 1");
    let (mut a, mut b) = (BigInt::one(), BigInt::one());
    let bits = 63 - n.leading_zeros();
    for i in (0..bits).rev() {
        if n >> i & 1 == 0 {
            b = &a + &b;
        } else {
            a = &a + &b;
        }
    }
    BigRational::new(a, b)
}

/// Position of a positive rational in [`calkin_wilf`], if it fits in 64 bits.
pub fn calkin_wilf_index(q: &BigRational) -> Option<u64> {
    if !q.is_positive() {
        return None;
    }
    let (mut a, mut b) = (q.numer().clone(), q.denom().clone());
    let mut path = Vec::new();
    while a != b {
        if a < b {
            path.push(0);
            b -= &a;
        } else {
            path.push(1);
            a -= &b;
        }
        if path.len() > 62 {
            return None;
        }
    }
    Some(path.iter().rev().fold(1u64, |n, &bit| n << 1 | bit))
}

/// `0, cw(1), −cw(1), cw(2), −cw(2), …`
pub fn signed_rational(i: u64) -> BigRational {
    match i {
        0 => BigRational::zero(),
        i if i % 2 == 1 => calkin_wilf(i.div_ceil(2)),
        i => -calkin_wilf(i / 2),
    }
}

pub fn signed_rational_index(q: &BigRational) -> Option<u64> {
    if q.is_zero() {
        Some(0)
    } else if q.is_positive() {
        Some(2 * calkin_wilf_index(q)? - 1)
    } else {
        Some(2 * calkin_wilf_index(&-q.clone())?)
    }
}

/// A rational open interval `(a, b)`, `a < b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalInterval {
    pub a: BigRational,
    pub b: BigRational,
}

impl RationalInterval {
    /// Index `⟨i, j⟩` names `(q_i, q_i + cw(j + 1))`.
    pub fn from_index(n: u64) -> Self {
        let (i, j) = unpair(n);
        let a = signed_rational(i);
        let b = &a + calkin_wilf(j + 1);
        RationalInterval { a, b }
    }

    pub fn index(&self) -> Option<u64> {
        let i = signed_rational_index(&self.a)?;
        let j = calkin_wilf_index(&(&self.b - &self.a))? - 1;
        checked_pair(i, j)
    }

    pub fn open(&self) -> OpenSet {
        interval_open_decimal(&self.a, &self.b).expect("a < b")
    }
}

/// The countable subbase of rational intervals over the decimal space. It
/// carries no transpose inverse: recovering a decimal name from interval
/// information is exactly what the decimal representation cannot do.
pub fn kw_subbase() -> Presubbase {
    Presubbase::new(
        "rational intervals",
        Space::Nat,
        Space::Decimal,
        |y: &Point| match y.as_nat() {
            Ok(n) => RationalInterval::from_index(n).open(),
            Err(_) => OpenSet::empty(Space::Decimal),
        },
        None,
    )
}

/// A stream of rationals with `|x − q_n| ≤ 2^{−n}`.
#[derive(Clone)]
pub struct CauchyName(Arc<dyn Fn(u64) -> BigRational + Send + Sync>);

impl CauchyName {
    pub fn new(f: impl Fn(u64) -> BigRational + Send + Sync + 'static) -> Self {
        CauchyName(Arc::new(f))
    }

    pub fn at(&self, n: u64) -> BigRational {
        (self.0)(n)
    }

    pub fn prefix(&self, len: u64) -> Vec<BigRational> {
        (0..len).map(|n| self.at(n)).collect()
    }
}

impl fmt::Debug for CauchyName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CauchyName{:?}..", self.prefix(3).iter().map(|q| q.to_string()).collect::<Vec<_>>())
    }
}

/// Truncation to the first `k ≥ 1` digits with `10^{−k} ≤ 2^{−n}`.
pub fn decimal_to_cauchy_direct(d: &Name) -> CauchyName {
    let d = d.clone();
    CauchyName::new(move |n| {
        let two_n = num_traits::pow(BigInt::from(2), n as usize);
        let mut scale = BigInt::one();
        let mut k = 0;
        while k == 0 || scale < two_n {
            scale *= 10;
            k += 1;
        }
        let mut num = BigInt::from(d.at(1));
        for i in 0..k {
            num = num * 10 + digit(&d, i);
        }
        let q = BigRational::new(num, num_traits::pow(BigInt::from(10), k as usize));
        if d.at(0) == 0 {
            q
        } else {
            -q
        }
    })
}

/// Levels produced by [`repair_decimal`] and the reason it stopped early, if it did.
#[derive(Clone, Debug)]
pub struct Repair {
    /// `levels[k − 1]` is the level-`k` approximation, `k = 1, 2, …`.
    pub levels: Vec<BigRational>,
    pub exhausted: Option<Error>,
}

/// Cauchy approximations extracted from the completion of the decimal space.
///
/// Level `k` queries the neighborhood filter of the point on the grid
/// intervals `(m/2^{k+1}, (m+2)/2^{k+1})`, nearest to the previous level
/// first, dovetailed, and outputs the midpoint of the first accepted one.
/// Each level gets `fuel` scheduler steps.
pub fn repair_decimal(d: &Name, bits: usize, fuel: Fuel) -> Repair {
    let completion = kolmogorov_completion(&Space::Decimal).expect("the decimal space is not finite");
    let filter = match completion.forward(&decimal_point(d)) {
        Ok(p) => p,
        Err(e) => return Repair { levels: vec![], exhausted: Some(e) },
    };
    let filter = filter.as_open().expect("completion points are filters").clone();
    let mut levels = Vec::with_capacity(bits);
    let mut previous = BigRational::zero();
    for k in 1..=bits {
        let denom = num_traits::pow(BigInt::from(2), k + 1);
        let centre = (&previous * BigRational::from_integer(denom.clone())).floor().to_integer() - 1;
        let candidate = |i: u64| -> BigInt {
            // 0, +1, −1, +2, −2, …
            let off = BigInt::from(i.div_ceil(2));
            if i % 2 == 1 {
                &centre + off
            } else {
                &centre - off
            }
        };
        let query = |i: u64, f: Fuel| {
            let m = candidate(i);
            let a = BigRational::new(m.clone(), denom.clone());
            let b = BigRational::new(m + 2, denom.clone());
            let u = interval_open_decimal(&a, &b).expect("a < b").into_point();
            filter.chi(&u).acceptance(f)
        };
        match dovetail(query, None, fuel) {
            Some((i, _)) => {
                let mid = BigRational::new(candidate(i) + 1, denom.clone());
                previous = mid.clone();
                levels.push(mid);
            }
            None => {
                return Repair {
                    levels,
                    exhausted: Some(Error::Pending { steps: fuel.0, level: Some(k - 1) }),
                }
            }
        }
    }
    Repair { levels, exhausted: None }
}

pub fn distance(a: &BigRational, b: &BigRational) -> BigRational {
    (a - b).abs()
}

/// `p/q` in lowest terms.
pub fn rational_string(q: &BigRational) -> String {
    let g = q.numer().gcd(q.denom());
    format!("{}/{}", q.numer() / &g, q.denom() / &g)
}
