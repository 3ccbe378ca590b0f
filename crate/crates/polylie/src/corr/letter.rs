use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exactalg::{Rat, SparseVec};

use super::point::{Affine, Monomial, Point};
use super::CorrError;

/// Weight-one letter: a basis element of the multiplicative group of the
/// function field tensored with Q. Signs are torsion and dropped.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WOne {
    /// Primitive non-constant affine form, integral coefficients, first
    /// variable coefficient positive.
    Lin(Affine),
    /// A rational prime.
    Prime(u64),
    /// A named parameter.
    Param(String),
    /// `N1 − N2` for coprime monomials with nonnegative exponents, sorted.
    Binom(Monomial, Monomial),
    /// Difference of two points with no finer factorization available.
    Pair(Point, Point),
}

pub type WOneVec = SparseVec<WOne>;

fn prime_factors(mut n: u64) -> Vec<(u64, i64)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn log_abs_int(n: &BigInt, sign: i64, out: &mut WOneVec) {
    let n = n.abs().to_u64().expect("constant too large to factor");
    for (p, e) in prime_factors(n) {
        out.add_term(WOne::Prime(p), Rat::from_int(e * sign));
    }
}

fn log_constant(c: &Rat, out: &mut WOneVec) {
    assert!(!c.is_zero(), "logarithm of zero");
    log_abs_int(&c.numer(), 1, out);
    log_abs_int(&c.denom(), -1, out);
}

/// Splits a non-constant affine form into content and primitive part.
fn log_affine(a: &Affine, out: &mut WOneVec) {
    if a.is_constant() {
        log_constant(a.constant_term(), out);
        return;
    }
    let all = a.coeffs().values().chain(std::iter::once(a.constant_term()));
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for c in all {
        num = num.gcd(&c.numer());
        den = den.lcm(&c.denom());
    }
    let mut content = Rat::from_big(num_rational::BigRational::new(num, den));
    if a.coeffs().values().next().expect("non-constant").is_negative() {
        content = -content;
    }
    log_constant(&content, out);
    out.add_term(WOne::Lin(a.scale(&content.recip())), Rat::one());
}

fn log_monomial(m: &Monomial, out: &mut WOneVec) {
    for (k, e) in m.exponents() {
        out.add_term(WOne::Param(k.clone()), Rat::from_int(*e as i64));
    }
}

fn log_mono_diff(m1: &Monomial, m2: &Monomial, out: &mut WOneVec) {
    let mut g = Vec::new();
    let mut n1 = Vec::new();
    let mut n2 = Vec::new();
    let keys: std::collections::BTreeSet<&String> = m1.exponents().keys().chain(m2.exponents().keys()).collect();
    for k in keys {
        let a = m1.exponents().get(k).copied().unwrap_or(0);
        let b = m2.exponents().get(k).copied().unwrap_or(0);
        let lo = a.min(b);
        g.push((k.clone(), lo));
        n1.push((k.clone(), a - lo));
        n2.push((k.clone(), b - lo));
    }
    log_monomial(&Monomial::from_exponents(g), out);
    let (n1, n2) = (Monomial::from_exponents(n1), Monomial::from_exponents(n2));
    let (lo, hi) = if n1 <= n2 { (n1, n2) } else { (n2, n1) };
    out.add_term(WOne::Binom(lo, hi), Rat::one());
}

fn opaque(p: &Point, q: &Point, out: &mut WOneVec) {
    let (a, b) = if p <= q { (p, q) } else { (q, p) };
    out.add_term(WOne::Pair(a.clone(), b.clone()), Rat::one());
}

fn log_cross(pts: &[Point; 4], with_one: bool, scale: &Rat, out: &mut WOneVec) {
    let [a, b, c, d] = pts;
    let terms: [(&Point, &Point, i64); 4] = if with_one {
        [(a, c, 1), (b, d, 1), (a, d, -1), (b, c, -1)]
    } else {
        [(a, b, 1), (c, d, 1), (a, d, -1), (c, b, -1)]
    };
    for (p, q, s) in terms {
        out.add_scaled(&log_diff(p, q), &(scale * &Rat::from_int(s)));
    }
}

/// Class of `p − q` in the weight-one space; zero when `p = q` or when
/// either point is infinite.
pub fn log_diff(p: &Point, q: &Point) -> WOneVec {
    let mut out = WOneVec::new();
    if p == q {
        return out;
    }
    match (p, q) {
        (Point::Infinity, _) | (_, Point::Infinity) => {}
        (Point::Affine(a), Point::Affine(b)) => log_affine(&a.sub(b), &mut out),
        (Point::Mono(m), z) | (z, Point::Mono(m)) if z.is_zero() => log_monomial(m, &mut out),
        (Point::Cross(pts), z) | (z, Point::Cross(pts)) if z.is_zero() => log_cross(pts, false, &Rat::one(), &mut out),
        (Point::Cross(pts), o) | (o, Point::Cross(pts)) if o.is_one() => log_cross(pts, true, &Rat::one(), &mut out),
        _ => match (p.as_monomial(), q.as_monomial()) {
            (Some(m1), Some(m2)) => log_mono_diff(&m1, &m2, &mut out),
            _ => opaque(p, q, &mut out),
        },
    }
    out
}

impl WOne {
    /// Two points whose difference is this letter.
    fn endpoints(&self) -> (Point, Point) {
        let pair = |a: Point, b: Point| if a <= b { (a, b) } else { (b, a) };
        match self {
            WOne::Lin(a) => {
                let pos = Affine::from_parts(a.coeffs().iter().filter(|(_, c)| !c.is_negative()).map(|(v, c)| (*v, c.clone())), a.constant_term().clone().max(Rat::zero()));
                let neg = pos.sub(a);
                pair(Point::affine(pos), Point::affine(neg))
            }
            WOne::Prime(p) => (Point::zero(), Point::int(*p as i64)),
            WOne::Param(k) => (Point::zero(), Point::param(k)),
            WOne::Binom(m1, m2) => pair(Point::mono(m1.clone()), Point::mono(m2.clone())),
            WOne::Pair(a, b) => (a.clone(), b.clone()),
        }
    }

    /// Indices `(i, j)` when the letter is `x_i − x_j` or `x_i` (then `j`
    /// is `None`).
    pub fn as_var_difference(&self) -> Option<(u32, Option<u32>)> {
        let WOne::Lin(a) = self else { return None };
        if !a.constant_term().is_zero() {
            return None;
        }
        let c: Vec<(&u32, &Rat)> = a.coeffs().iter().collect();
        match c.as_slice() {
            [(i, x)] if x.is_one() => Some((**i, None)),
            [(i, x), (j, y)] if x.is_one() && (-*y).is_one() => Some((**i, Some(**j))),
            _ => None,
        }
    }
}

impl fmt::Display for WOne {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.endpoints();
        write!(f, "w{{{a},{b}}}")
    }
}

impl fmt::Debug for WOne {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for WOne {
    type Err = CorrError;

    /// Parses `w{p,q}`; the pair must reduce to a single letter.
    fn from_str(s: &str) -> Result<WOne, CorrError> {
        let err = || CorrError::Parse(s.to_string());
        let inner = s.strip_prefix("w{").and_then(|t| t.strip_suffix('}')).ok_or_else(err)?;
        let parts = crate::words::split_top_level(inner, ',');
        let [p, q] = parts.as_slice() else { return Err(err()) };
        let v = log_diff(&p.parse()?, &q.parse()?);
        match v.first() {
            Some((l, c)) if v.len() == 1 && c.is_one() => Ok(l.clone()),
            _ => Err(err()),
        }
    }
}
