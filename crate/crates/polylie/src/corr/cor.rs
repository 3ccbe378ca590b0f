use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use crate::exactalg::{Rat, SparseVec};
use crate::words::split_top_level;

use super::point::Point;
use super::CorrError;

/// Trait bound for correlator points.
pub trait CorPoint: Ord + Clone + Hash + fmt::Debug + Send + Sync + 'static {}
impl<T: Ord + Clone + Hash + fmt::Debug + Send + Sync + 'static> CorPoint for T {}

/// Cyclic tuple of points in its lexicographically minimal rotation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CorTerm<P: CorPoint>(Vec<P>);

impl<P: CorPoint> CorTerm<P> {
    /// Canonical rotation, or `None` for a constant tuple.
    pub fn new(points: &[P]) -> Option<CorTerm<P>> {
        assert!(points.len() >= 2, "correlators need at least two points");
        if points.iter().all(|p| *p == points[0]) {
            return None;
        }
        let n = points.len();
        let best = (0..n)
            .min_by(|&i, &j| {
                let a = points[i..].iter().chain(&points[..i]);
                let b = points[j..].iter().chain(&points[..j]);
                a.cmp(b)
            })
            .expect("nonempty");
        let mut v = points[best..].to_vec();
        v.extend_from_slice(&points[..best]);
        Some(CorTerm(v))
    }

    pub fn points(&self) -> &[P] {
        &self.0
    }

    pub fn weight(&self) -> usize {
        self.0.len() - 1
    }

    pub fn map<Q: CorPoint, F: FnMut(&P) -> Q>(&self, f: F) -> Option<CorTerm<Q>> {
        let pts: Vec<Q> = self.0.iter().map(f).collect();
        CorTerm::new(&pts)
    }
}

impl<P: CorPoint + fmt::Display> fmt::Display for CorTerm<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inner: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "Cor({})", inner.join(","))
    }
}

impl<P: CorPoint> fmt::Debug for CorTerm<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inner: Vec<String> = self.0.iter().map(|p| format!("{p:?}")).collect();
        write!(f, "Cor({})", inner.join(","))
    }
}

impl FromStr for CorTerm<Point> {
    type Err = CorrError;

    /// Parses `Cor(p0,…,pn)`; the tuple must already be canonical.
    fn from_str(s: &str) -> Result<Self, CorrError> {
        let err = || CorrError::Parse(s.to_string());
        let inner = s.strip_prefix("Cor(").and_then(|t| t.strip_suffix(')')).ok_or_else(err)?;
        let pts: Vec<Point> = split_top_level(inner, ',').iter().map(|p| p.parse()).collect::<Result<_, _>>()?;
        if pts.len() < 2 {
            return Err(err());
        }
        let t = CorTerm::new(&pts).ok_or_else(err)?;
        if t.0 != pts {
            return Err(err());
        }
        Ok(t)
    }
}

pub type CorVec<P = Point> = SparseVec<CorTerm<P>>;

/// Correlator `Cor(x0,…,xn)` as a vector; zero for a constant tuple.
pub fn cor<P: CorPoint>(points: &[P]) -> Result<CorVec<P>, CorrError> {
    if points.len() < 2 {
        return Err(CorrError::TooFewPoints(points.len()));
    }
    Ok(CorTerm::new(points).map(CorVec::unit).unwrap_or_default())
}

/// Weight of a homogeneous correlator vector.
pub fn cor_weight<P: CorPoint>(c: &CorVec<P>) -> Result<Option<usize>, CorrError> {
    let mut w = None;
    for t in c.keys() {
        match w {
            None => w = Some(t.weight()),
            Some(x) if x != t.weight() => return Err(CorrError::Inhomogeneous),
            _ => {}
        }
    }
    Ok(w)
}

/// Ordered pair `a ∧ b` of correlator terms with `a < b`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CorWedge<P: CorPoint>(pub CorTerm<P>, pub CorTerm<P>);

pub type CorWedgeVec<P = Point> = SparseVec<CorWedge<P>>;

pub fn cor_wedge<P: CorPoint>(a: &[P], b: &[P], c: &Rat, out: &mut CorWedgeVec<P>) {
    let (Some(x), Some(y)) = (CorTerm::new(a), CorTerm::new(b)) else { return };
    match x.cmp(&y) {
        std::cmp::Ordering::Less => out.add_term(CorWedge(x, y), c.clone()),
        std::cmp::Ordering::Greater => out.add_term(CorWedge(y, x), -c),
        std::cmp::Ordering::Equal => {}
    }
}

/// Cobracket of a single term, restricted to components `(i, n−i)` with
/// `keep(i, n−i)`.
pub fn cobracket_term_filtered<P: CorPoint, F: Fn(usize, usize) -> bool>(t: &CorTerm<P>, c: &Rat, keep: F, out: &mut CorWedgeVec<P>) {
    let x = t.points();
    let n = x.len() - 1;
    for j in 0..=n {
        let rot = |k: usize| &x[(j + k) % (n + 1)];
        for i in 1..n {
            if !keep(i, n - i) {
                continue;
            }
            let left: Vec<P> = (0..=i).map(|k| rot(k).clone()).collect();
            let mut right: Vec<P> = vec![rot(0).clone()];
            right.extend((i + 1..=n).map(|k| rot(k).clone()));
            cor_wedge(&left, &right, c, out);
        }
    }
}

/// `Δ(x0,…,xn) = Σ_cyc Σ_{i=1}^{n−1} (x0,…,xi) ∧ (x0,x_{i+1},…,xn)`;
/// weight-one terms are primitive.
pub fn cobracket<P: CorPoint>(c: &CorVec<P>) -> CorWedgeVec<P> {
    let mut out = CorWedgeVec::new();
    for (t, x) in c {
        cobracket_term_filtered(t, x, |_, _| true, &mut out);
    }
    out
}

/// `I(x0; x1,…,xn; x_{n+1}) = Cor(x1,…,x_{n+1}) − Cor(x0,…,xn)`.
pub fn iterated_integral<P: CorPoint>(x0: &P, mid: &[P], end: &P) -> Result<CorVec<P>, CorrError> {
    if mid.is_empty() {
        return Err(CorrError::TooFewPoints(0));
    }
    let mut a = mid.to_vec();
    a.push(end.clone());
    let mut b = vec![x0.clone()];
    b.extend_from_slice(mid);
    Ok(&cor(&a)? - &cor(&b)?)
}

/// Multiple polylogarithm together with its recorded depth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultipleLi {
    pub value: CorVec,
    pub weight: usize,
    pub depth: usize,
}

/// `Li_{n0; n1,…,nk}(a1,…,ak) = (−1)^k I(0; 0^{n0}, 1, 0^{n1−1}, a1, …,
/// 0^{n(k−1)−1}, a1⋯a(k−1), 0^{nk−1}; a1⋯ak)`, where for `n0 = −1` the
/// base point is the leading `1`.
pub fn multiple_li(n0: i64, ns: &[usize], args: &[Point]) -> Result<MultipleLi, CorrError> {
    if n0 < -1 || ns.is_empty() || ns.len() != args.len() || ns.iter().any(|&n| n == 0) {
        return Err(CorrError::BadPolylogIndices);
    }
    if args.iter().any(|a| a.is_zero()) {
        return Err(CorrError::ZeroArgument);
    }
    let mut seq: Vec<Point> = vec![Point::zero(); (n0 + 1) as usize];
    seq.push(Point::one());
    let mut prod = Point::one();
    let k = ns.len();
    for (j, (n, a)) in ns.iter().zip(args).enumerate() {
        prod = if prod.is_one() { a.clone() } else { prod.mul_mono(a).ok_or(CorrError::NonMonomialArgument)? };
        seq.extend(std::iter::repeat_n(Point::zero(), n - 1));
        if j + 1 < k {
            seq.push(prod.clone());
        }
    }
    let weight = seq.len() - 1;
    let value = iterated_integral(&seq[0], &seq[1..], &prod)?;
    let sign = if k % 2 == 0 { Rat::one() } else { Rat::from_int(-1) };
    Ok(MultipleLi { value: value.scaled(&sign), weight, depth: k })
}

/// Classical polylogarithm `Li_n(a)`.
pub fn li(n: usize, a: &Point) -> Result<CorVec, CorrError> {
    Ok(multiple_li(0, &[n], std::slice::from_ref(a))?.value)
}

/// Direction of a specialization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    ToZero,
    ToInfinity,
}

/// Deformation mode of a [`DeformedPoint`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DeformMode {
    /// The point is `base·t^k`.
    Scale,
    /// The point is `base + shift·t^k`.
    Shift(Point),
}

/// A point over the field of Laurent series in `t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DeformedPoint {
    pub base: Point,
    pub t_exponent: i64,
    pub mode: DeformMode,
}

impl DeformedPoint {
    pub fn scaled(base: Point, k: i64) -> DeformedPoint {
        DeformedPoint { base, t_exponent: k, mode: DeformMode::Scale }
    }

    pub fn shifted(base: Point, shift: Point, k: i64) -> DeformedPoint {
        DeformedPoint { base, t_exponent: k, mode: DeformMode::Shift(shift) }
    }

    pub fn constant(base: Point) -> DeformedPoint {
        DeformedPoint::scaled(base, 0)
    }

    /// Valuation and leading coefficient in the given direction (uniformizer
    /// `t`, or `1/t` at infinity); `None` for the zero point.
    pub fn leading(&self, dir: Direction) -> Result<Option<(i64, Point)>, CorrError> {
        let v = |k: i64| if dir == Direction::ToZero { k } else { -k };
        match &self.mode {
            DeformMode::Scale => {
                if self.base.is_zero() {
                    Ok(None)
                } else if self.base == Point::Infinity {
                    Err(CorrError::InfiniteDeformation)
                } else {
                    Ok(Some((v(self.t_exponent), self.base.clone())))
                }
            }
            DeformMode::Shift(s) => {
                if self.t_exponent == 0 || s.is_zero() || *s == Point::Infinity || self.base == Point::Infinity {
                    return Err(CorrError::InfiniteDeformation);
                }
                let vs = v(self.t_exponent);
                if self.base.is_zero() {
                    Ok(Some((vs, s.clone())))
                } else if vs > 0 {
                    Ok(Some((0, self.base.clone())))
                } else {
                    Ok(Some((vs, s.clone())))
                }
            }
        }
    }
}

/// Specialization of one tuple: points of minimal valuation keep their
/// leading coefficient, the others become zero.
pub fn specialize_points(points: &[DeformedPoint], dir: Direction) -> Result<Vec<Point>, CorrError> {
    let lead: Vec<Option<(i64, Point)>> = points.iter().map(|p| p.leading(dir)).collect::<Result<_, _>>()?;
    let m = lead.iter().flatten().map(|(v, _)| *v).min();
    Ok(lead
        .into_iter()
        .map(|l| match (l, m) {
            (Some((v, p)), Some(m)) if v == m => p,
            _ => Point::zero(),
        })
        .collect())
}

pub fn specialize(c: &CorVec<DeformedPoint>, dir: Direction) -> Result<CorVec, CorrError> {
    let mut out = CorVec::new();
    for (t, x) in c {
        out += &cor(&specialize_points(t.points(), dir)?)?.scaled(x);
    }
    Ok(out)
}

/// Applies specialization on both sides of a wedge.
pub fn specialize_wedges(c: &CorWedgeVec<DeformedPoint>, dir: Direction) -> Result<CorWedgeVec, CorrError> {
    let mut out = CorWedgeVec::new();
    for (CorWedge(a, b), x) in c {
        let pa = specialize_points(a.points(), dir)?;
        let pb = specialize_points(b.points(), dir)?;
        cor_wedge(&pa, &pb, x, &mut out);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Point {
        s.parse().unwrap()
    }

    fn term(xs: &[&str]) -> CorTerm<Point> {
        CorTerm::new(&xs.iter().map(|s| p(s)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn cyclic_normal_form() {
        assert!(cor(&[p("x0"), p("x0"), p("x0")]).unwrap().is_zero());
        assert_eq!(cor(&[p("x0"), p("x1"), p("x2")]).unwrap(), cor(&[p("x1"), p("x2"), p("x0")]).unwrap());
        assert!(matches!(cor(&[p("x0")]), Err(CorrError::TooFewPoints(1))));
        assert_eq!(term(&["x2", "x0", "x1"]).to_string(), "Cor(x0,x1,x2)");
    }

    #[test]
    fn cobracket_weight_two() {
        let c = cor(&[p("x0"), p("x1"), p("x2")]).unwrap();
        let mut expect = CorWedgeVec::new();
        let one = Rat::one();
        cor_wedge(&[p("x0"), p("x1")], &[p("x0"), p("x2")], &one, &mut expect);
        cor_wedge(&[p("x1"), p("x2")], &[p("x1"), p("x0")], &one, &mut expect);
        cor_wedge(&[p("x2"), p("x0")], &[p("x2"), p("x1")], &one, &mut expect);
        assert_eq!(cobracket(&c), expect);
        assert!(cobracket(&cor(&[p("x0"), p("x0"), p("x0")]).unwrap()).is_zero());
        assert!(cobracket(&cor(&[p("x0"), p("x1")]).unwrap()).is_zero());
    }

    #[test]
    fn iterated_integral_definition() {
        let i = iterated_integral(&p("x0"), &[p("x1")], &p("x2")).unwrap();
        let expect = &cor(&[p("x1"), p("x2")]).unwrap() - &cor(&[p("x0"), p("x1")]).unwrap();
        assert_eq!(i, expect);
        assert!(iterated_integral(&p("x0"), &[p("x0"), p("x0")], &p("x0")).unwrap().is_zero());
    }

    #[test]
    fn multiple_li_argument_strings() {
        let l = multiple_li(0, &[1], &[p("a")]).unwrap();
        assert_eq!((l.weight, l.depth), (1, 1));
        assert_eq!(l.value, -&iterated_integral(&Point::zero(), &[Point::one()], &p("a")).unwrap());
        let l = multiple_li(2, &[1, 1], &[p("a"), p("b")]).unwrap();
        assert_eq!(l.weight, 4);
        let expect = iterated_integral(&Point::zero(), &[Point::zero(), Point::zero(), Point::one(), p("a")], &p("a*b")).unwrap();
        assert_eq!(l.value, expect);
        let l = multiple_li(-1, &[2], &[p("a")]).unwrap();
        assert_eq!(l.value, -&iterated_integral(&Point::one(), &[Point::zero()], &p("a")).unwrap());
    }

    #[test]
    fn specialization_examples() {
        let d = |s: &str, k| DeformedPoint::scaled(p(s), k);
        let c = cor(&[d("x0", 1), d("1", 0), d("0", 0)]).unwrap();
        assert_eq!(specialize(&c, Direction::ToZero).unwrap(), cor(&[p("0"), p("1"), p("0")]).unwrap());
        let c = cor(&[d("x0", 1), d("x1", 1)]).unwrap();
        assert_eq!(specialize(&c, Direction::ToZero).unwrap(), cor(&[p("x0"), p("x1")]).unwrap());
        let c = cor(&[d("x0", 1), d("x1", 0)]).unwrap();
        assert_eq!(specialize(&c, Direction::ToInfinity).unwrap(), cor(&[p("x0"), p("0")]).unwrap());
        let merge = DeformedPoint::shifted(p("x4"), p("x9"), 1);
        let c = cor(&[merge, d("x4", 0), d("x1", 0)]).unwrap();
        assert_eq!(specialize(&c, Direction::ToZero).unwrap(), cor(&[p("x4"), p("x4"), p("x1")]).unwrap());
    }
}
