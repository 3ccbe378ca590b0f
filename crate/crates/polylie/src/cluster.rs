//! Cluster adjacency and cluster integrability for the type A cluster
//! algebra of `Gr(2, N)`, whose cluster variables are the chords of an
//! `N`-gon.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::corr::WOne;
use crate::exactalg::{kernel, LinSpace, Rat, SparseVec};
use crate::par;
use crate::words::{colie_from_cobracket, is_lyndon, substitute_letters, theta_star, wedge_basis, CoLieVec, TenVec, Word};

/// Default bound on the estimated size of the constraint system built by
/// [`cl_space`].
pub const DEFAULT_GUARD: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClusterError {
    #[error("problem too large: estimated {needed} entries, limit {limit}")]
    TooLarge { needed: usize, limit: usize },
    #[error("unsupported size: weight {weight} on {points} points")]
    Unsupported { weight: usize, points: usize },
    #[error("letter {0} is not a difference of two coordinates")]
    NotPlucker(String),
    #[error("bad chord: {0}")]
    Parse(String),
}

/// The Plücker coordinate `Δ_ij`, `i < j`, a chord or side of the polygon.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chord(u8, u8);

impl Chord {
    pub fn new(i: usize, j: usize) -> Option<Chord> {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => Some(Chord(i as u8, j as u8)),
            std::cmp::Ordering::Greater => Some(Chord(j as u8, i as u8)),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn ends(&self) -> (usize, usize) {
        (self.0 as usize, self.1 as usize)
    }

    /// Whether the two chords cross in the interior of the polygon.
    pub fn crosses(&self, other: &Chord) -> bool {
        let (a, b) = (self.0, self.1);
        let inside = |x: u8| a < x && x < b;
        let (c, d) = (other.0, other.1);
        if c == a || c == b || d == a || d == b {
            return false;
        }
        inside(c) != inside(d)
    }

    fn degree(&self, v: usize) -> i64 {
        (self.0 as usize == v) as i64 + (self.1 as usize == v) as i64
    }
}

impl fmt::Display for Chord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}{}", self.0, self.1)
    }
}

impl fmt::Debug for Chord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Chord {
    type Err = ClusterError;

    fn from_str(s: &str) -> Result<Chord, ClusterError> {
        let err = || ClusterError::Parse(s.to_string());
        let d = s.strip_prefix('p').ok_or_else(err)?;
        let b = d.as_bytes();
        if b.len() != 2 || !b.iter().all(u8::is_ascii_digit) || b[0] >= b[1] {
            return Err(err());
        }
        Ok(Chord(b[0] - b'0', b[1] - b'0'))
    }
}

/// All `C(N, 2)` Plücker coordinates of the `N`-gon.
pub fn chords(points: usize) -> Vec<Chord> {
    (0..points).flat_map(|i| (i + 1..points).map(move |j| Chord(i as u8, j as u8))).collect()
}

/// Weak separation of two Plücker coordinates of `Gr(2, N)`: the chords do
/// not cross.
pub fn weakly_separated(a: &Chord, b: &Chord) -> bool {
    !a.crosses(b)
}

fn word_adjacent(w: &[Chord]) -> bool {
    w.iter().enumerate().all(|(i, a)| w[i + 1..].iter().all(|b| weakly_separated(a, b)))
}

/// Every word has pairwise weakly separated letters, so its letters lie in
/// a common cluster.
pub fn adjacent(t: &TenVec<Chord>) -> bool {
    t.keys().all(|w| word_adjacent(w))
}

/// Antisymmetric tensor `a ∧ b` stored on pairs `a < b`.
pub type Wedge2 = SparseVec<(Chord, Chord)>;

pub fn wedge2(a: &SparseVec<Chord>, b: &SparseVec<Chord>) -> Wedge2 {
    let mut out = Wedge2::new();
    for (x, c) in a {
        for (y, d) in b {
            match x.cmp(y) {
                std::cmp::Ordering::Less => out.add_term((*x, *y), c * d),
                std::cmp::Ordering::Greater => out.add_term((*y, *x), -(c * d)),
                std::cmp::Ordering::Equal => {}
            }
        }
    }
    out
}

/// Weight-two cluster polylogarithms: spanned by `(M1/aa') ∧ (M2/aa')` over
/// the exchange relations `Δik·Δjl = Δij·Δkl + Δil·Δjk`, `i < j < k < l`.
pub fn cl2_space(points: usize) -> LinSpace<(Chord, Chord)> {
    let mut gens = Vec::new();
    for i in 0..points {
        for j in i + 1..points {
            for k in j + 1..points {
                for l in k + 1..points {
                    let c = |a: usize, b: usize| Chord(a as u8, b as u8);
                    let one = |a: Chord| SparseVec::unit(a);
                    let denom = &one(c(i, k)) + &one(c(j, l));
                    let m1 = &(&one(c(i, j)) + &one(c(k, l))) - &denom;
                    let m2 = &(&one(c(i, l)) + &one(c(j, k))) - &denom;
                    gens.push(wedge2(&m1, &m2));
                }
            }
        }
    }
    LinSpace::from_rows(&gens)
}

fn points_of(t: &TenVec<Chord>) -> usize {
    t.keys().flat_map(|w| w.iter().map(|c| c.1 as usize + 1)).max().unwrap_or(0)
}

/// Each antisymmetrized pair of adjacent slots lies in `T ⊗ CL_2 ⊗ T`.
pub fn integrable_cluster(t: &TenVec<Chord>, points: usize) -> bool {
    let cl2 = cl2_space(points.max(points_of(t)));
    let n = crate::words::weight(t).unwrap_or(0);
    for s in 0..n.saturating_sub(1) {
        let mut parts: BTreeMap<(&[Chord], &[Chord]), Wedge2> = BTreeMap::new();
        for (w, c) in t {
            let (a, b) = (w[s], w[s + 1]);
            let e = wedge2(&SparseVec::unit(a), &SparseVec::unit(b));
            parts.entry((&w[..s], &w[s + 2..])).or_default().add_scaled(&e, c);
        }
        if !parts.values().all(|v| cl2.contains(v)) {
            return false;
        }
    }
    true
}

/// Invariance under the torus rescaling the columns: in every slot, each
/// column degree contracts to zero.
pub fn torus_invariant(t: &TenVec<Chord>) -> bool {
    let n = crate::words::weight(t).unwrap_or(0);
    let pts = points_of(t);
    for s in 0..n {
        let mut parts: BTreeMap<(Vec<Chord>, usize), Rat> = BTreeMap::new();
        for (w, c) in t {
            let mut ctx = w.clone();
            let a = ctx.remove(s);
            for v in 0..pts {
                let d = a.degree(v);
                if d != 0 {
                    let slot = parts.entry((ctx.clone(), v)).or_insert_with(Rat::zero);
                    *slot = &*slot + &(c * &Rat::from_int(d));
                }
            }
        }
        if parts.values().any(|c| !c.is_zero()) {
            return false;
        }
    }
    true
}

/// Adjacent Lyndon words of length `n` over the chords of the `N`-gon.
pub fn adjacent_lyndon_words(n: usize, points: usize) -> Vec<Word<Chord>> {
    let alphabet = chords(points);
    let mut out = Vec::new();
    fn rec(alpha: &[Chord], n: usize, cur: &mut Vec<Chord>, out: &mut Vec<Word<Chord>>) {
        if cur.len() == n {
            if is_lyndon(cur) {
                out.push(cur.clone());
            }
            return;
        }
        for a in alpha {
            if cur.first().is_some_and(|f| a < f) || !cur.iter().all(|b| weakly_separated(a, b)) {
                continue;
            }
            cur.push(*a);
            rec(alpha, n, cur, out);
            cur.pop();
        }
    }
    rec(&alphabet, n, &mut Vec::new(), &mut out);
    out
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

// Constraint keys packed into a u64: tag, slot, context letters as chord
// indices, and a trailing index (column or reduced wedge).
fn pack(tag: u64, slot: usize, ctx: &[Chord], last: usize, index: &HashMap<Chord, u64>) -> u64 {
    let mut k = tag;
    k = (k << 3) | slot as u64;
    for c in ctx {
        k = (k << 6) | index[c];
    }
    (k << 10) | last as u64
}

/// Linear conditions cutting out the cluster polylogarithms, evaluated on
/// an element of the Lie coalgebra through its normal form and its
/// canonical tensor.
struct Constraints {
    index: HashMap<Chord, u64>,
    residual: HashMap<(Chord, Chord), Vec<(usize, Rat)>>,
}

impl Constraints {
    fn new(points: usize) -> Constraints {
        let alphabet = chords(points);
        let index = alphabet.iter().enumerate().map(|(i, c)| (*c, i as u64)).collect();
        let cl2 = cl2_space(points);
        let mut pair_index = HashMap::new();
        let mut residual = HashMap::new();
        for (i, a) in alphabet.iter().enumerate() {
            for b in &alphabet[i + 1..] {
                let r = cl2.reduce_vec(&wedge2(&SparseVec::unit(*a), &SparseVec::unit(*b)));
                let coords = r
                    .iter()
                    .map(|(k, c)| {
                        let next = pair_index.len();
                        (*pair_index.entry(*k).or_insert(next), c.clone())
                    })
                    .collect();
                residual.insert((*a, *b), coords);
            }
        }
        Constraints { index, residual }
    }

    /// Values of all conditions on `x`; zero iff `x` is a cluster
    /// polylogarithm.
    fn row(&self, x: &TenVec<Chord>) -> SparseVec<u64> {
        let mut row = SparseVec::new();
        for (w, c) in x {
            if !word_adjacent(w) {
                row.add_term(pack(2, 0, w, 0, &self.index), c.clone());
            }
        }
        for (u, c) in &theta_star(x) {
            self.add_tensor_word(u, c, &mut row);
        }
        row
    }

    fn add_tensor_word(&self, u: &[Chord], c: &Rat, row: &mut SparseVec<u64>) {
        let n = u.len();
        for s in 0..n {
            let mut ctx = u.to_vec();
            let a = ctx.remove(s);
            for v in [a.0 as usize, a.1 as usize] {
                row.add_term(pack(0, s, &ctx, v, &self.index), c.clone());
            }
        }
        for s in 0..n.saturating_sub(1) {
            let (a, b, sign) = match u[s].cmp(&u[s + 1]) {
                std::cmp::Ordering::Less => (u[s], u[s + 1], Rat::one()),
                std::cmp::Ordering::Greater => (u[s + 1], u[s], Rat::from_int(-1)),
                std::cmp::Ordering::Equal => continue,
            };
            let mut ctx = u[..s].to_vec();
            ctx.extend_from_slice(&u[s + 2..]);
            for (k, d) in &self.residual[&(a, b)] {
                row.add_term(pack(1, s, &ctx, *k, &self.index), &(c * &sign) * d);
            }
        }
    }
}

fn check_size(n: usize, points: usize) -> Result<(), ClusterError> {
    // keys hold at most five context letters of six bits each
    if n == 0 || n > 6 || !(4..=10).contains(&points) {
        return Err(ClusterError::Unsupported { weight: n, points });
    }
    Ok(())
}

/// Torus invariant letters: the degree-zero part of the span of the chords.
pub fn cl1_basis(points: usize) -> Vec<SparseVec<Chord>> {
    let alphabet = chords(points);
    let degrees: Vec<SparseVec<usize>> =
        alphabet.iter().map(|c| SparseVec::from_terms([(c.0 as usize, Rat::one()), (c.1 as usize, Rat::one())])).collect();
    kernel(&degrees).rows().map(|r| r.map_basis(|i| alphabet[*i])).collect()
}

fn letters_space(points: usize) -> LinSpace<Word<Chord>> {
    let rows: Vec<TenVec<Chord>> = cl1_basis(points).iter().map(|v| v.map_basis(|c| vec![*c])).collect();
    LinSpace::from_rows(&rows)
}

fn solve(candidates: &[TenVec<Chord>], cons: &Constraints) -> LinSpace<Word<Chord>> {
    let rows = par::map(candidates, |x| cons.row(x));
    let ker = kernel(&rows);
    let basis: Vec<TenVec<Chord>> = ker
        .rows()
        .map(|r| {
            let mut v = TenVec::new();
            for (i, c) in r {
                v.add_scaled(&candidates[*i], c);
            }
            v
        })
        .collect();
    LinSpace::from_rows(&basis)
}

/// Cluster polylogarithms of weight `n` on `M_{0,N}`: the projection to the
/// Lie coalgebra of all cluster adjacent, integrable, torus invariant
/// tensors in the Plücker coordinates of `Gr(2, N)`.
///
/// The space is a sub-Lie-coalgebra and `CL_1` is the torus invariant
/// part of the letters, so the `(n−1, 1)` part of the cobracket of any
/// element lies in `CL_{n−1} ⊗ CL_1`, and the element is rebuilt from it.
/// The candidates `x(y, e)` rebuilt from `y ∧ e` over bases of both factors
/// therefore span a space containing `CL_n`, which is cut out by the
/// linear conditions on the normal form and on `θ*(x)`.
///
/// `guard` bounds the number of candidate tensor terms.
pub fn cl_space(n: usize, points: usize, guard: usize) -> Result<LinSpace<Word<Chord>>, ClusterError> {
    check_size(n, points)?;
    let cl1: Vec<CoLieVec<Chord>> = cl1_basis(points).iter().map(CoLieVec::from_letters).collect();
    let mut level = letters_space(points);
    // CL_(w−1) sits inside the tensor power of CL_1, which bounds the
    // candidate count before anything is computed.
    for w in 2..=n {
        let needed = cl1.len().saturating_pow(w as u32).saturating_mul(factorial(w) * w);
        if needed > guard {
            return Err(ClusterError::TooLarge { needed, limit: guard });
        }
    }
    let cons = Constraints::new(points);
    for w in 2..=n {
        let pairs: Vec<(CoLieVec<Chord>, &CoLieVec<Chord>)> =
            level.rows().flat_map(|y| cl1.iter().map(move |e| (CoLieVec::from_normal_form(y.clone()), e))).collect();
        let candidates: Vec<TenVec<Chord>> =
            par::map(&pairs, |(y, e)| colie_from_cobracket(&wedge_basis(y, e), w).into_normal_form());
        level = solve(&candidates, &cons);
    }
    Ok(level)
}

/// The same space computed directly: unknown coefficients on all adjacent
/// Lyndon words, cut out by the torus and integrability conditions on
/// `θ*(x)`. Much slower than [`cl_space`] beyond weight three.
pub fn cl_space_direct(n: usize, points: usize, guard: usize) -> Result<LinSpace<Word<Chord>>, ClusterError> {
    check_size(n, points)?;
    if n == 1 {
        return Ok(letters_space(points));
    }
    let words = adjacent_lyndon_words(n, points);
    let needed = words.len() * factorial(n) * n;
    if needed > guard {
        return Err(ClusterError::TooLarge { needed, limit: guard });
    }
    let cons = Constraints::new(points);
    let candidates: Vec<TenVec<Chord>> = words.into_iter().map(TenVec::unit).collect();
    Ok(solve(&candidates, &cons))
}

fn check_plucker(t: &TenVec<WOne>) -> Result<(), ClusterError> {
    for w in t.keys() {
        for l in w {
            match l.as_var_difference() {
                Some((i, Some(j))) if i != j && i < 64 && j < 64 => {}
                _ => return Err(ClusterError::NotPlucker(l.to_string())),
            }
        }
    }
    Ok(())
}

fn chord_of(l: &WOne) -> SparseVec<Chord> {
    let (i, j) = l.as_var_difference().expect("checked");
    let j = j.expect("checked");
    SparseVec::unit(Chord::new(i as usize, j as usize).expect("checked"))
}

/// Rewrites a symbol in the letters `x_i − x_j` as an element over the
/// Plücker coordinates `Δ_ij`.
pub fn to_plucker(x: &CoLieVec<WOne>) -> Result<CoLieVec<Chord>, ClusterError> {
    check_plucker(x.normal_form())?;
    Ok(x.substitute(chord_of))
}

/// Same rewrite on a plain tensor.
pub fn to_plucker_tensor(t: &TenVec<WOne>) -> Result<TenVec<Chord>, ClusterError> {
    check_plucker(t)?;
    Ok(substitute_letters(t, chord_of))
}

/// Canonical tensor of a Lie coalgebra element over chords, on which the
/// cluster predicates are evaluated.
pub fn representative(x: &CoLieVec<Chord>) -> TenVec<Chord> {
    theta_star(x.normal_form())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crossing() {
        let c = |i, j| Chord::new(i, j).unwrap();
        assert!(c(0, 2).crosses(&c(1, 3)));
        assert!(!c(0, 2).crosses(&c(2, 4)));
        assert!(!c(0, 3).crosses(&c(1, 2)));
        assert!(!c(0, 1).crosses(&c(2, 4)));
    }

    #[test]
    fn chord_text_round_trip() {
        let c: Chord = "p13".parse().unwrap();
        assert_eq!(c.to_string(), "p13");
        assert!("p31".parse::<Chord>().is_err());
        assert!("q13".parse::<Chord>().is_err());
    }

    #[test]
    fn weight_two_on_pentagon() {
        // five exchange relations, one five-term relation among them
        assert_eq!(cl2_space(5).rank(), 4);
    }

    #[test]
    fn guard_trips() {
        assert!(matches!(cl_space(3, 6, 10), Err(ClusterError::TooLarge { .. })));
        assert!(matches!(cl_space_direct(3, 6, 10), Err(ClusterError::TooLarge { .. })));
    }
}
