use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::exactalg::Rat;
use crate::words::split_top_level;

use super::CorrError;

/// Affine-linear form `Σ c_v x_v + c` with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Affine {
    coeffs: BTreeMap<u32, Rat>,
    constant: Rat,
}

impl Affine {
    pub fn constant(c: Rat) -> Affine {
        Affine { coeffs: BTreeMap::new(), constant: c }
    }

    pub fn var(i: u32) -> Affine {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(i, Rat::one());
        Affine { coeffs, constant: Rat::zero() }
    }

    pub fn from_parts<I: IntoIterator<Item = (u32, Rat)>>(terms: I, constant: Rat) -> Affine {
        let mut coeffs = BTreeMap::new();
        for (v, c) in terms {
            let e: &mut Rat = coeffs.entry(v).or_default();
            *e += &c;
        }
        coeffs.retain(|_, c: &mut Rat| !c.is_zero());
        Affine { coeffs, constant }
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn constant_term(&self) -> &Rat {
        &self.constant
    }

    pub fn coeffs(&self) -> &BTreeMap<u32, Rat> {
        &self.coeffs
    }

    pub fn as_var(&self) -> Option<u32> {
        if self.constant.is_zero() && self.coeffs.len() == 1 {
            let (v, c) = self.coeffs.iter().next()?;
            c.is_one().then_some(*v)
        } else {
            None
        }
    }

    pub fn sub(&self, o: &Affine) -> Affine {
        let terms = self.coeffs.iter().map(|(v, c)| (*v, c.clone())).chain(o.coeffs.iter().map(|(v, c)| (*v, -c)));
        Affine::from_parts(terms, &self.constant - &o.constant)
    }

    pub fn scale(&self, s: &Rat) -> Affine {
        Affine::from_parts(self.coeffs.iter().map(|(v, c)| (*v, c * s)), &self.constant * s)
    }

    /// Substitutes variables by affine forms.
    pub fn compose<F: FnMut(u32) -> Affine>(&self, mut f: F) -> Affine {
        let mut out = Affine::constant(self.constant.clone());
        for (v, c) in &self.coeffs {
            let img = f(*v).scale(c);
            out = out.sub(&img.scale(&Rat::from_int(-1)));
        }
        out
    }

    fn key(&self) -> (bool, Vec<(u32, Rat)>, Rat) {
        (!self.coeffs.is_empty(), self.coeffs.iter().map(|(v, c)| (*v, c.clone())).collect(), self.constant.clone())
    }
}

impl Ord for Affine {
    fn cmp(&self, o: &Affine) -> Ordering {
        self.key().cmp(&o.key())
    }
}

impl PartialOrd for Affine {
    fn partial_cmp(&self, o: &Affine) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "{}", self.constant);
        }
        for (i, (v, c)) in self.coeffs.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if neg {
                write!(f, "-")?;
            } else if i > 0 {
                write!(f, "+")?;
            }
            if !a.is_one() {
                write!(f, "{a}*")?;
            }
            write!(f, "x{v}")?;
        }
        if !self.constant.is_zero() {
            let sign = if self.constant.is_negative() { "-" } else { "+" };
            write!(f, "{sign}{}", self.constant.abs())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Formal Laurent monomial in named parameters.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(BTreeMap<String, i32>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(BTreeMap::new())
    }

    pub fn param(name: &str) -> Monomial {
        let mut m = BTreeMap::new();
        m.insert(name.to_string(), 1);
        Monomial(m)
    }

    pub fn from_exponents<I: IntoIterator<Item = (String, i32)>>(it: I) -> Monomial {
        let mut m = BTreeMap::new();
        for (k, e) in it {
            *m.entry(k).or_insert(0) += e;
        }
        m.retain(|_, e| *e != 0);
        Monomial(m)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponents(&self) -> &BTreeMap<String, i32> {
        &self.0
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial::from_exponents(self.0.iter().chain(o.0.iter()).map(|(k, e)| (k.clone(), *e)))
    }

    pub fn inv(&self) -> Monomial {
        Monomial(self.0.iter().map(|(k, e)| (k.clone(), -e)).collect())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, (k, e)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{k}")?;
            } else {
                write!(f, "{k}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A point of the projective line over the function field generated by
/// indexed variables `x_i` and named parameters.
///
/// Constants and variables are affine forms; parameters and their partial
/// products are monomials; cross-ratios of four points are kept formal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Affine(Affine),
    Mono(Monomial),
    Infinity,
    Cross(Box<[Point; 4]>),
}

impl Point {
    pub fn zero() -> Point {
        Point::Affine(Affine::constant(Rat::zero()))
    }

    pub fn one() -> Point {
        Point::Affine(Affine::constant(Rat::one()))
    }

    pub fn int(c: i64) -> Point {
        Point::Affine(Affine::constant(Rat::from_int(c)))
    }

    pub fn var(i: u32) -> Point {
        Point::Affine(Affine::var(i))
    }

    pub fn param(name: &str) -> Point {
        Point::Mono(Monomial::param(name))
    }

    pub fn mono(m: Monomial) -> Point {
        if m.is_one() {
            Point::one()
        } else {
            Point::Mono(m)
        }
    }

    pub fn affine(a: Affine) -> Point {
        Point::Affine(a)
    }

    /// Cross-ratio `[a,b,c,d] = (a−b)(c−d)/((a−d)(c−b))`; the four points
    /// must be distinct.
    pub fn cross(a: Point, b: Point, c: Point, d: Point) -> Result<Point, CorrError> {
        let pts = [a, b, c, d];
        for i in 0..4 {
            for j in i + 1..4 {
                if pts[i] == pts[j] {
                    return Err(CorrError::DegenerateCrossRatio);
                }
            }
        }
        Ok(Point::Cross(Box::new(pts)))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Point::Affine(a) if a.is_constant() && a.constant_term().is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Point::Affine(a) if a.is_constant() && a.constant_term().is_one())
    }

    pub fn as_var(&self) -> Option<u32> {
        match self {
            Point::Affine(a) => a.as_var(),
            _ => None,
        }
    }

    /// Monomial view: `1` and genuine monomials.
    pub(crate) fn as_monomial(&self) -> Option<Monomial> {
        match self {
            Point::Mono(m) => Some(m.clone()),
            p if p.is_one() => Some(Monomial::one()),
            _ => None,
        }
    }

    /// Product of two points that are monomials (or `1`).
    pub fn mul_mono(&self, o: &Point) -> Option<Point> {
        Some(Point::mono(self.as_monomial()?.mul(&o.as_monomial()?)))
    }

    /// Relabels indexed variables `x_i ↦ x_{f(i)}`.
    pub fn relabel<F: Fn(u32) -> u32 + Copy>(&self, f: F) -> Point {
        match self {
            Point::Affine(a) => Point::Affine(a.compose(|v| Affine::var(f(v)))),
            Point::Cross(b) => Point::Cross(Box::new([b[0].relabel(f), b[1].relabel(f), b[2].relabel(f), b[3].relabel(f)])),
            p => p.clone(),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Affine(a) => write!(f, "{a}"),
            Point::Mono(m) => write!(f, "{m}"),
            Point::Infinity => write!(f, "inf"),
            Point::Cross(b) => write!(f, "[{},{},{},{}]", b[0], b[1], b[2], b[3]),
        }
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn is_var_name(s: &str) -> Option<u32> {
    let d = s.strip_prefix('x')?;
    if d.is_empty() || !d.bytes().all(|b| b.is_ascii_digit()) || (d.len() > 1 && d.starts_with('0')) {
        return None;
    }
    d.parse().ok()
}

fn is_ident(s: &str) -> bool {
    let mut it = s.chars();
    matches!(it.next(), Some(c) if c.is_ascii_alphabetic() || c == '_') && it.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn parse_affine(s: &str) -> Option<Affine> {
    let mut terms = Vec::new();
    let mut constant = Rat::zero();
    let bytes = s.as_bytes();
    let mut start = 0;
    let mut pieces = Vec::new();
    for i in 1..=bytes.len() {
        if i == bytes.len() || ((bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'*' && bytes[i - 1] != b'/') {
            pieces.push(&s[start..i]);
            start = i;
        }
    }
    for p in pieces {
        let (neg, body) = match p.as_bytes().first()? {
            b'+' => (false, &p[1..]),
            b'-' => (true, &p[1..]),
            _ => (false, p),
        };
        let sign = if neg { Rat::from_int(-1) } else { Rat::one() };
        if body.is_empty() {
            return None;
        }
        if let Some((c, v)) = body.split_once('*') {
            let c: Rat = c.parse().ok()?;
            let v = is_var_name(v)?;
            terms.push((v, &c * &sign));
        } else if let Some(v) = is_var_name(body) {
            terms.push((v, sign));
        } else {
            let c: Rat = body.parse().ok()?;
            constant += &c * &sign;
        }
    }
    Some(Affine::from_parts(terms, constant))
}

fn parse_monomial(s: &str) -> Option<Monomial> {
    let mut exps = Vec::new();
    for f in s.split('*') {
        let (name, e) = match f.split_once('^') {
            Some((n, e)) => (n, e.parse::<i32>().ok()?),
            None => (f, 1),
        };
        let reserved = name.strip_prefix('x').is_some_and(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()));
        if !is_ident(name) || reserved || name == "inf" {
            return None;
        }
        exps.push((name.to_string(), e));
    }
    Some(Monomial::from_exponents(exps))
}

impl FromStr for Point {
    type Err = CorrError;

    fn from_str(s: &str) -> Result<Point, CorrError> {
        let err = || CorrError::Parse(s.to_string());
        let s = s.trim();
        if s == "inf" {
            return Ok(Point::Infinity);
        }
        if let Some(inner) = s.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
            let parts = split_top_level(inner, ',');
            if parts.len() != 4 {
                return Err(err());
            }
            let p: Vec<Point> = parts.iter().map(|t| t.parse()).collect::<Result<_, _>>()?;
            let [a, b, c, d]: [Point; 4] = p.try_into().map_err(|_| err())?;
            return Point::cross(a, b, c, d);
        }
        if let Some(a) = parse_affine(s) {
            return Ok(Point::Affine(a));
        }
        if let Some(m) = parse_monomial(s) {
            return Ok(Point::mono(m));
        }
        Err(err())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_text_round_trip() {
        for s in ["0", "1", "x0", "-x3", "x0+x1", "2*x0-1", "1/2*x1+3", "a", "a*b", "a^2*b^-1", "inf", "[inf,x0,x1,x2]", "-1/3"] {
            let p: Point = s.parse().unwrap();
            assert_eq!(p.to_string(), s, "{s}");
        }
        assert!("x01".parse::<Point>().is_err());
        assert!("[x0,x0,x1,x2]".parse::<Point>().is_err());
    }

    #[test]
    fn monomial_one_is_the_constant_one() {
        assert_eq!(Point::mono(Monomial::one()), Point::one());
        let a = Point::param("a");
        assert_eq!(a.mul_mono(&Point::one()), Some(a.clone()));
        assert_eq!(a.mul_mono(&Point::param("b")).unwrap().to_string(), "a*b");
    }

    #[test]
    fn ordering_puts_constants_first() {
        assert!(Point::zero() < Point::one());
        assert!(Point::one() < Point::var(0));
        assert!(Point::var(0) < Point::var(1));
        assert!(Point::var(5) < Point::param("a"));
        assert!(Point::param("a") < Point::Infinity);
    }
}
