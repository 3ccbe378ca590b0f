//! Property checks shared by the command-line harness and the test suites.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::cluster::{adjacent, integrable_cluster, to_plucker_tensor, torus_invariant, ClusterError};
use crate::corr::{
    cobracket, cor, li, specialize, specialize_wedges, symbol, symbol_tensor, CorPoint, CorTerm, CorVec, CorWedge, CorWedgeVec, CorrError,
    DeformedPoint, Direction, Point, WOne,
};
use crate::exactalg::{rank, Rat, SparseVec};
use crate::quad::{qli, qli_sym, vars};
use crate::confspace::{project_pr_tensor, FLetter, Omega};
use crate::words::{colie_cobracket, colie_project, is_lyndon, substitute_letters, theta_star, CoLieVec, TenVec};

/// Sorted triple of correlator terms, an element of `Λ³`.
pub type Wedge3<P> = SparseVec<[CorTerm<P>; 3]>;

fn wedge3<P: CorPoint>(a: &CorTerm<P>, b: &CorTerm<P>, c: &CorTerm<P>, x: &Rat, out: &mut Wedge3<P>) {
    let mut t = [a.clone(), b.clone(), c.clone()];
    let mut sign = 1;
    for i in 0..3 {
        for j in 0..2 - i {
            match t[j].cmp(&t[j + 1]) {
                std::cmp::Ordering::Greater => {
                    t.swap(j, j + 1);
                    sign = -sign;
                }
                std::cmp::Ordering::Equal => return,
                std::cmp::Ordering::Less => {}
            }
        }
    }
    out.add_term(t, if sign > 0 { x.clone() } else { -x });
}

/// `(Δ ⊗ 1 − 1 ⊗ Δ)` applied to `Δc`; zero exactly when coJacobi holds on `c`.
pub fn cobracket_twice<P: CorPoint>(c: &CorVec<P>) -> Wedge3<P> {
    let mut out = Wedge3::new();
    for (CorWedge(a, b), x) in &cobracket(c) {
        for (CorWedge(a1, a2), y) in &cobracket(&CorVec::unit(a.clone())) {
            wedge3(a1, a2, b, &(x * y), &mut out);
        }
        for (CorWedge(b1, b2), y) in &cobracket(&CorVec::unit(b.clone())) {
            wedge3(a, b1, b2, &-(x * y), &mut out);
        }
    }
    out
}

/// All correlators of the given weight on `x0..x(points−1)`, one per cyclic
/// class, constant tuples excluded.
pub fn all_correlators(weight: usize, points: usize) -> Vec<CorTerm<Point>> {
    let x = vars(points);
    let mut out = std::collections::BTreeSet::new();
    let total = points.pow(weight as u32 + 1);
    for mut code in 0..total {
        let mut t = Vec::with_capacity(weight + 1);
        for _ in 0..=weight {
            t.push(x[code % points].clone());
            code /= points;
        }
        if let Some(term) = CorTerm::new(&t) {
            out.insert(term);
        }
    }
    out.into_iter().collect()
}

pub fn random_correlator(rng: &mut ChaCha8Rng, weight: usize, points: usize) -> CorVec {
    let x = vars(points);
    let t: Vec<Point> = (0..=weight).map(|_| x[rng.gen_range(0..points)].clone()).collect();
    cor(&t).expect("at least two points")
}

/// Random tensor with integer coefficients in `[−3, 3]` on letters `0..letters`.
pub fn random_tensor(rng: &mut ChaCha8Rng, weight: usize, letters: u8, terms: usize) -> TenVec<u8> {
    let mut t = TenVec::new();
    for _ in 0..terms {
        let w: Vec<u8> = (0..weight).map(|_| rng.gen_range(0..letters)).collect();
        t.add_term(w, Rat::from_int(rng.gen_range(-3..=3)));
    }
    t
}

/// Whether projecting the normal form of `colie_project(t)` again changes it.
pub fn projection_idempotent(t: &TenVec<u8>) -> bool {
    let p = colie_project(t).expect("homogeneous");
    colie_project(p.normal_form()).expect("homogeneous") == p
}

/// Lyndon words of the given weight on letters `0..letters`, a basis of
/// the Lie coalgebra in that weight.
pub fn lyndon_basis(letters: u8, weight: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let total = (letters as usize).pow(weight as u32);
    for mut code in 0..total {
        let mut w = vec![0u8; weight];
        for i in (0..weight).rev() {
            w[i] = (code % letters as usize) as u8;
            code /= letters as usize;
        }
        if is_lyndon(&w) {
            out.push(w);
        }
    }
    out
}

/// Dimension of the kernel of the cobracket on the weight-`n` Lie
/// coalgebra on `letters` letters.
pub fn cobracket_kernel_dim(letters: u8, weight: usize) -> usize {
    let basis = lyndon_basis(letters, weight);
    let rows: Vec<_> = basis
        .iter()
        .map(|w| colie_cobracket(&CoLieVec::from_normal_form(TenVec::unit(w.clone()))).expect("weight at least two"))
        .collect();
    basis.len() - rank(&rows)
}

/// Symbol of `Σ Cor(t_{i0},…,t_{in})` over nondecreasing tuples in
/// `0..=m+1`.
pub fn nondecreasing_sum_symbol(m: usize, n: usize) -> Result<CoLieVec<WOne>, CorrError> {
    let x = vars(m + 2);
    let mut total = CorVec::new();
    let mut t = vec![0usize; n + 1];
    loop {
        let pts: Vec<Point> = t.iter().map(|&i| x[i].clone()).collect();
        total += &cor(&pts)?;
        let Some(k) = (0..=n).rev().find(|&k| t[k] < m + 1) else { break };
        let v = t[k] + 1;
        for s in t.iter_mut().skip(k) {
            *s = v;
        }
    }
    symbol(&total)
}

/// `S(Li2([x_σ(0),…,x_σ(3)])) − sgn(σ)·S(Li2([x0,…,x3]))` for one
/// permutation `σ` of `0..4`.
pub fn cross_ratio_sign_defect(sigma: [usize; 4]) -> Result<CoLieVec<WOne>, CorrError> {
    let x = vars(4);
    let l2 = |p: [usize; 4]| -> Result<CoLieVec<WOne>, CorrError> {
        symbol(&li(2, &Point::cross(x[p[0]].clone(), x[p[1]].clone(), x[p[2]].clone(), x[p[3]].clone())?)?)
    };
    let mut inv = 0;
    for i in 0..4 {
        for j in i + 1..4 {
            inv += (sigma[i] > sigma[j]) as usize;
        }
    }
    let base = l2([0, 1, 2, 3])?;
    let moved = l2(sigma)?;
    Ok(if inv % 2 == 0 { &moved - &base } else { &moved + &base })
}

pub fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    if (0..4).all(|i| p.contains(&i)) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

fn random_deformed(rng: &mut ChaCha8Rng, vars: u32) -> DeformedPoint {
    match rng.gen_range(0..10) {
        0 => DeformedPoint::constant(Point::zero()),
        1 => DeformedPoint::constant(Point::one()),
        2 | 3 => {
            let (i, j) = (rng.gen_range(0..vars), rng.gen_range(0..vars));
            DeformedPoint::shifted(Point::var(i), Point::var(j), rng.gen_range(1..=2))
        }
        _ => DeformedPoint::scaled(Point::var(rng.gen_range(0..vars)), rng.gen_range(-1..=2)),
    }
}

/// One seeded instance of the specialization check: the cobracket of the
/// specialization equals the specialization of the cobracket, in both
/// directions. Returns the tested correlator and the verdict.
pub fn specialization_case(rng: &mut ChaCha8Rng, weight: usize) -> Result<(CorVec<DeformedPoint>, bool), CorrError> {
    let pts: Vec<DeformedPoint> = (0..=weight).map(|_| random_deformed(rng, 3)).collect();
    let c = cor(&pts)?;
    let d: CorWedgeVec<DeformedPoint> = cobracket(&c);
    let mut ok = true;
    for dir in [Direction::ToZero, Direction::ToInfinity] {
        ok &= cobracket(&specialize(&c, dir)?) == specialize_wedges(&d, dir)?;
    }
    Ok((c, ok))
}

/// Cluster predicates on the symbol of `QLi_{n+k}(x0,…,x(2n+1))`:
/// adjacency, integrability and torus invariance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClusterVerdict {
    pub adjacent: bool,
    pub integrable: bool,
    pub torus: bool,
}

impl ClusterVerdict {
    pub fn all(&self) -> bool {
        self.adjacent && self.integrable && self.torus
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CheckError {
    #[error(transparent)]
    Corr(#[from] CorrError),
    #[error(transparent)]
    Cluster(#[from] ClusterError),
}

/// Evaluated on `θ*` of a tensor symbol, which equals `θ*` of the
/// projected symbol because `θ*` kills shuffles.
pub fn qli_cluster_verdict(n: usize, k: usize) -> Result<ClusterVerdict, CheckError> {
    let points = 2 * n + 2;
    let s = symbol_tensor(&qli(n + k, &vars(points))?)?;
    let t = theta_star(&to_plucker_tensor(&s)?);
    Ok(ClusterVerdict { adjacent: adjacent(&t), integrable: integrable_cluster(&t, points), torus: torus_invariant(&t) })
}

/// The sign `ε` with `S(QLi^sym(x1,…,x(2n+1),x0)) = ε·S(QLi^sym(x0,…,x(2n+1)))`,
/// or `None` if the two symbols are not proportional with sign `±1`.
///
/// Compared through `θ*` over chords, which is injective on the Lie
/// coalgebra.
pub fn cyclic_symmetry_sign(n: usize, k: usize) -> Result<Option<i8>, CheckError> {
    let x = vars(2 * n + 2);
    let mut rot = x[1..].to_vec();
    rot.push(x[0].clone());
    let a = theta_star(&to_plucker_tensor(&symbol_tensor(&qli_sym(n + k, &rot)?)?)?);
    let b = theta_star(&to_plucker_tensor(&symbol_tensor(&qli_sym(n + k, &x)?)?)?);
    Ok(if !b.is_zero() && a == b {
        Some(1)
    } else if !b.is_zero() && a == -&b {
        Some(-1)
    } else {
        None
    })
}

/// The same sign seen through `pr_0` alone: `pr_0` of the rotated symbol
/// against `pr_0` of the original. `pr_0` is a letter substitution, so it
/// commutes with the projection and applies to tensor symbols directly.
pub fn cyclic_symmetry_sign_pr0(n: usize, k: usize) -> Result<Option<i8>, CheckError> {
    let x = vars(2 * n + 2);
    let mut rot = x[1..].to_vec();
    rot.push(x[0].clone());
    let pr0 = |c: &CorVec| -> Result<TenVec<FLetter>, CheckError> {
        let t = symbol_tensor(c)?;
        let omega = substitute_letters(&t, |l| match l.as_var_difference() {
            Some((i, Some(j))) => Omega::new(i as usize, j as usize).map(SparseVec::unit).unwrap_or_default(),
            _ => SparseVec::new(),
        });
        Ok(theta_star(&project_pr_tensor(0, &omega)))
    };
    let a = pr0(&qli_sym(n + k, &rot)?)?;
    let b = pr0(&qli_sym(n + k, &x)?)?;
    Ok(if !b.is_zero() && a == b {
        Some(1)
    } else if !b.is_zero() && a == -&b {
        Some(-1)
    } else {
        None
    })
}
