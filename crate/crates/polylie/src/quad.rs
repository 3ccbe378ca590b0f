//! Quadrangular polylogarithms and their functional equation.

use std::collections::BTreeMap;

use crate::corr::{cor, symbol, CorPoint, CorVec, CorrError, Point, WOne};
use crate::exactalg::{rank, Rat, SparseVec};
use crate::par;
use crate::words::{colie_cobracket, wedge_basis, CoLieVec, TenVec};

/// Nondecreasing index sequence together with its sign.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QSeq {
    pub indices: Vec<usize>,
    pub symmetrized: bool,
}

impl QSeq {
    /// `+1` iff the sequence has an even number of even entries.
    pub fn sign(&self) -> i64 {
        if self.indices.iter().filter(|&&i| i % 2 == 0).count() % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

/// All nondecreasing sequences of length `n+k+1` in `0..=2n+1` in which
/// every even number occurs at most once. Unless `symmetrized`, each pair
/// `{2i, 2i+1}` must be hit.
pub fn enum_sequences(n: usize, k: usize, symmetrized: bool) -> Vec<(QSeq, i64)> {
    fn rec(start: usize, top: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..=top {
            if i % 2 == 0 && cur.last() == Some(&i) {
                continue;
            }
            cur.push(i);
            rec(i, top, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut raw = Vec::new();
    rec(0, 2 * n + 1, n + k + 1, &mut Vec::new(), &mut raw);
    raw.into_iter()
        .filter(|s| symmetrized || (0..=n).all(|i| s.contains(&(2 * i)) || s.contains(&(2 * i + 1))))
        .map(|indices| {
            let q = QSeq { indices, symmetrized };
            let sign = q.sign();
            (q, sign)
        })
        .collect()
}

fn pair_count<P>(points: &[P]) -> Result<usize, CorrError> {
    if points.len() < 2 || points.len() % 2 == 1 {
        return Err(CorrError::TooFewPoints(points.len()));
    }
    Ok(points.len() / 2 - 1)
}

fn qli_impl<P: CorPoint>(weight: usize, points: &[P], symmetrized: bool) -> Result<CorVec<P>, CorrError> {
    let n = pair_count(points)?;
    if weight < n || weight == 0 {
        return Err(CorrError::BadWeight(weight));
    }
    let pre = if n % 2 == 0 { -1 } else { 1 };
    let mut out = CorVec::new();
    for (s, sign) in enum_sequences(n, weight - n, symmetrized) {
        let pts: Vec<P> = s.indices.iter().map(|&i| points[i].clone()).collect();
        out.add_scaled(&cor(&pts)?, &Rat::from_int(pre * sign));
    }
    Ok(out)
}

/// `QLi_{n+k}(x0,…,x(2n+1)) = (−1)^{n+1} Σ_{C(n,k)} sign(s)·Cor(x_s)`.
pub fn qli<P: CorPoint>(weight: usize, points: &[P]) -> Result<CorVec<P>, CorrError> {
    qli_impl(weight, points, false)
}

/// Symmetrized version, summed over all sequences.
pub fn qli_sym<P: CorPoint>(weight: usize, points: &[P]) -> Result<CorVec<P>, CorrError> {
    qli_impl(weight, points, true)
}

/// `QLi^{(−)^s}`: unchanged for even `s`, minus the cyclically shifted
/// function for odd `s`.
pub fn qli_signed<P: CorPoint>(s: usize, weight: usize, points: &[P]) -> Result<CorVec<P>, CorrError> {
    if s % 2 == 0 {
        qli(weight, points)
    } else {
        let mut rot = points[1..].to_vec();
        rot.push(points[0].clone());
        Ok(-qli(weight, &rot)?)
    }
}

pub fn vars(n: usize) -> Vec<Point> {
    (0..n as u32).map(Point::var).collect()
}

/// Checks `δS(QLi) = Σ_{i<j, j−i odd} S(QLi^{(−)^i}(xi..xj)) ∧ S(QLi(x0..xi,xj..))`
/// in weight `n+k`, summed over all weight splits. Weight one has nothing
/// to check.
pub fn qli_coproduct_check(n: usize, k: usize) -> Result<bool, CorrError> {
    let w = n + k;
    if w == 0 {
        return Err(CorrError::BadWeight(0));
    }
    if w == 1 {
        return Ok(true);
    }
    let x = vars(2 * n + 2);
    let lhs = colie_cobracket(&symbol(&qli(w, &x)?)?).map_err(|_| CorrError::BadWeight(w))?;
    let mut rhs = SparseVec::new();
    for i in 0..x.len() {
        for j in (i + 1..x.len()).step_by(2) {
            let mut outer = x[..=i].to_vec();
            outer.extend_from_slice(&x[j..]);
            let inner = &x[i..=j];
            for a in 1..w {
                let (Ok(o), Ok(q)) = (qli(a, &outer), qli_signed(i, w - a, inner)) else { continue };
                rhs += &wedge_basis(&symbol(&q)?, &symbol(&o)?);
            }
        }
    }
    Ok(lhs == rhs)
}

/// Left side of the main functional equation in weight `n` on the points
/// `x0..xN`: `Σ_{i0<…<i(2r+1)} (−1)^{Σi} (−1)^{r+1} QLi^sym_n(x_i)`.
///
/// The factor `(−1)^{r+1}` cancels the normalization of `QLi^sym`, so each
/// term is the plain signed correlator sum over all sequences. This sum is
/// zero already as a combination of correlators.
pub fn main_equation_lhs(n: usize, big_n: usize) -> Result<CorVec, CorrError> {
    main_equation_impl(n, big_n, true)
}

/// Same sum with `QLi^sym` taken with its own normalization. Its symbol
/// does not vanish in general.
pub fn main_equation_lhs_normalized(n: usize, big_n: usize) -> Result<CorVec, CorrError> {
    main_equation_impl(n, big_n, false)
}

fn main_equation_impl(n: usize, big_n: usize, unnormalized: bool) -> Result<CorVec, CorrError> {
    if n + 1 >= big_n {
        return Err(CorrError::BadWeight(n));
    }
    let x = vars(big_n + 1);
    let mut tuples = Vec::new();
    for size in (2..=big_n + 1).step_by(2) {
        if size / 2 - 1 > n {
            break;
        }
        subsets(big_n + 1, size, &mut Vec::new(), 0, &mut tuples);
    }
    let parts = par::map(&tuples, |t| -> Result<CorVec, CorrError> {
        let r = t.len() / 2 - 1;
        let mut sign: i64 = if t.iter().sum::<usize>() % 2 == 0 { 1 } else { -1 };
        if unnormalized && r % 2 == 0 {
            sign = -sign;
        }
        let pts: Vec<Point> = t.iter().map(|&i| x[i].clone()).collect();
        Ok(qli_sym(n, &pts)?.scaled(&Rat::from_int(sign)))
    });
    let mut out = CorVec::new();
    for p in parts {
        out += &p?;
    }
    Ok(out)
}

fn subsets(n: usize, size: usize, cur: &mut Vec<usize>, start: usize, out: &mut Vec<Vec<usize>>) {
    if cur.len() == size {
        out.push(cur.clone());
        return;
    }
    for i in start..n {
        if n - i < size - cur.len() {
            break;
        }
        cur.push(i);
        subsets(n, size, cur, i + 1, out);
        cur.pop();
    }
}

/// Increasing tuples of even size `≥ 4` in `0..=m`, the arguments of the
/// quadrangular polylogarithms spanning `Q_n(m)` in weight `n`.
pub fn qli_arguments(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for size in (4..=m + 1).step_by(2) {
        if size / 2 - 1 <= n {
            subsets(m + 1, size, &mut Vec::new(), 0, &mut out);
        }
    }
    out
}

/// Symbols of `QLi_n(x_{i0},…)` over all increasing tuples in `0..=m`.
pub fn qli_symbols(n: usize, m: usize) -> Result<Vec<CoLieVec<WOne>>, CorrError> {
    let x = vars(m + 1);
    let args = qli_arguments(n, m);
    par::map(&args, |t| {
        let pts: Vec<Point> = t.iter().map(|&i| x[i].clone()).collect();
        symbol(&qli(n, &pts)?)
    })
    .into_iter()
    .collect()
}

/// Dimension of the span of the symbols of `QLi_n` on `x0..xm`. Two-point
/// functions are constants in weight `n ≥ 2` and are left out.
pub fn qli_dimension(n: usize, m: usize) -> Result<usize, CorrError> {
    if n < 2 {
        return Err(CorrError::BadWeight(n));
    }
    let syms = qli_symbols(n, m)?;
    let rows: Vec<_> = syms.iter().map(|s| s.normal_form().clone()).collect();
    Ok(rank(&rows))
}

/// Dimension of the quotient of `Q_n(m)` by the images of the cofaces
/// `δ_0,…,δ_(m−1)`, i.e. by the symbols of `QLi_n` on tuples missing one
/// of `0..m−1`.
pub fn cn_dimension(n: usize, m: usize) -> Result<usize, CorrError> {
    if n < 2 {
        return Err(CorrError::BadWeight(n));
    }
    let x = vars(m + 1);
    let args = qli_arguments(n, m);
    let syms: Vec<(bool, TenVec<WOne>)> = par::map(&args, |t| {
        let pts: Vec<Point> = t.iter().map(|&i| x[i].clone()).collect();
        let full = (0..m).all(|i| t.contains(&i));
        symbol(&qli(n, &pts)?).map(|s| (full, s.into_normal_form()))
    })
    .into_iter()
    .collect::<Result<_, _>>()?;
    let images: Vec<TenVec<WOne>> = syms.iter().filter(|(f, _)| !f).map(|(_, s)| s.clone()).collect();
    let all: Vec<TenVec<WOne>> = syms.into_iter().map(|(_, s)| s).collect();
    Ok(rank(&all) - rank(&images))
}

/// Polynomial in `t0..tN` with exponent vectors as keys.
type Poly = SparseVec<Vec<u8>>;

fn poly_mul(a: &Poly, b: &Poly, bound: usize) -> Poly {
    let mut out: BTreeMap<Vec<u8>, Rat> = BTreeMap::new();
    for (e1, c1) in a {
        let d1: usize = e1.iter().map(|&x| x as usize).sum();
        for (e2, c2) in b {
            let d2: usize = e2.iter().map(|&x| x as usize).sum();
            if d1 + d2 > bound {
                continue;
            }
            let e: Vec<u8> = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
            let slot = out.entry(e).or_insert_with(Rat::zero);
            *slot = &*slot + &(c1 * c2);
        }
    }
    out.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

fn one_minus(vars: usize, i: usize) -> Poly {
    let mut e = vec![0u8; vars];
    let mut p = Poly::unit(e.clone());
    e[i] = 1;
    p.add_term(e, Rat::from_int(-1));
    p
}

fn geometric(vars: usize, i: usize, bound: usize) -> Poly {
    (0..=bound)
        .map(|d| {
            let mut e = vec![0u8; vars];
            e[i] = d as u8;
            (e, Rat::one())
        })
        .collect()
}

fn degree(e: &[u8]) -> usize {
    e.iter().map(|&x| x as usize).sum()
}

/// Checks the identity behind the main equation,
/// `Ψ(t0,…,tN)·(1−t1)⋯(1−tN) = (t0−t1)(t1−t2)⋯(t(N−1)−tN)`, where
/// `Ψ = 1 + Σ_{i0<…<i(2r+1)} (−1)^{Σi} ∏(1−t_even)/∏(1−t_odd)` is expanded as a
/// power series up to `degree_bound`. Also checks that `Ψ` has no terms of
/// degree below `N`.
pub fn psi_identity_check(big_n: usize, degree_bound: usize) -> bool {
    assert!(big_n >= 1 && degree_bound > big_n && degree_bound < 256);
    let nv = big_n + 1;
    let mut tuples = Vec::new();
    for size in (2..=nv).step_by(2) {
        subsets(nv, size, &mut Vec::new(), 0, &mut tuples);
    }
    let terms: Vec<Poly> = par::map(&tuples, |t| {
        let mut term = Poly::unit(vec![0u8; nv]);
        for (pos, &i) in t.iter().enumerate() {
            let f = if pos % 2 == 0 { one_minus(nv, i) } else { geometric(nv, i, degree_bound) };
            term = poly_mul(&term, &f, degree_bound);
        }
        let sign = if t.iter().sum::<usize>() % 2 == 0 { 1 } else { -1 };
        term.scaled(&Rat::from_int(sign))
    });
    let mut psi = Poly::unit(vec![0u8; nv]);
    for t in &terms {
        psi += t;
    }
    if psi.keys().any(|e| degree(e) < big_n) {
        return false;
    }
    let mut denom = Poly::unit(vec![0u8; nv]);
    let mut numer = Poly::unit(vec![0u8; nv]);
    for i in 1..nv {
        denom = poly_mul(&denom, &one_minus(nv, i), degree_bound);
        let mut f = Poly::new();
        let mut e = vec![0u8; nv];
        e[i - 1] = 1;
        f.add_term(e, Rat::one());
        let mut e = vec![0u8; nv];
        e[i] = 1;
        f.add_term(e, Rat::from_int(-1));
        numer = poly_mul(&numer, &f, degree_bound);
    }
    poly_mul(&psi, &denom, degree_bound) == numer
}

/// `Σ_{j=lo}^{hi} C(m, j)`.
pub fn binomial_sum(m: usize, lo: usize, hi: usize) -> usize {
    (lo..=hi).map(|j| crate::exactalg::binomial(m as u64, j as u64) as usize).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequence_signs() {
        let s = |v: &[usize]| QSeq { indices: v.to_vec(), symmetrized: false }.sign();
        assert_eq!(s(&[0, 1, 2]), 1);
        assert_eq!(s(&[0, 1, 3]), -1);
    }

    #[test]
    fn c10_has_four_sequences() {
        let c: Vec<Vec<usize>> = enum_sequences(1, 0, false).into_iter().map(|(s, _)| s.indices).collect();
        assert_eq!(c, vec![vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3]]);
    }

    #[test]
    fn qli1_on_four_points() {
        let x = vars(4);
        let q = qli(1, &x).unwrap();
        let c = |i: usize, j: usize| cor(&[x[i].clone(), x[j].clone()]).unwrap();
        let expect = &(&(&c(0, 2) - &c(0, 3)) - &c(1, 2)) + &c(1, 3);
        assert_eq!(q, expect);
    }

    #[test]
    fn weight_below_pair_count_rejected() {
        assert!(qli(1, &vars(6)).is_err());
        assert!(qli(2, &vars(5)).is_err());
    }

    #[test]
    fn psi_small() {
        assert!(psi_identity_check(1, 3));
        assert!(psi_identity_check(3, 6));
    }
}
