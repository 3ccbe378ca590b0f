//! The Lie coalgebra of the configuration space of points on the line:
//! Arnold relations, integrability, the projections `pr_i`, and the
//! translation invariant spaces `Inv_n(m)`.

use std::collections::BTreeMap;
use std::fmt;

use crate::corr::WOne;
use crate::exactalg::{kernel, LinSpace, Rat, SparseVec};
use crate::words::{colie_project, shuffle_vec, substitute_letters, theta_star, weight, CoLieVec, TenVec, Word};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfError {
    #[error("tensor is not homogeneous")]
    Inhomogeneous,
    #[error("letter {0} is not a difference of two coordinates")]
    NotConf(String),
    #[error("index out of range: {0}")]
    BadIndex(String),
}

/// `ω_ij = d log(t_i − t_j)`, `i < j`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Omega(u8, u8);

impl Omega {
    pub fn new(i: usize, j: usize) -> Option<Omega> {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => Some(Omega(i as u8, j as u8)),
            std::cmp::Ordering::Greater => Some(Omega(j as u8, i as u8)),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn ends(&self) -> (usize, usize) {
        (self.0 as usize, self.1 as usize)
    }
}

impl fmt::Display for Omega {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "o{{{},{}}}", self.0, self.1)
    }
}

impl fmt::Debug for Omega {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Letters `f_j` of the fibre, plus the translation letter `f`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FLetter {
    F(u8),
    Shift,
}

impl fmt::Display for FLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FLetter::F(i) => write!(f, "f{i}"),
            FLetter::Shift => write!(f, "f"),
        }
    }
}

impl fmt::Debug for FLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub fn omega_letters(points: usize) -> Vec<Omega> {
    (0..points).flat_map(|i| (i + 1..points).map(move |j| Omega(i as u8, j as u8))).collect()
}

fn wedge(a: Omega, b: Omega) -> Option<((Omega, Omega), Rat)> {
    match a.cmp(&b) {
        std::cmp::Ordering::Less => Some(((a, b), Rat::one())),
        std::cmp::Ordering::Greater => Some(((b, a), Rat::from_int(-1))),
        std::cmp::Ordering::Equal => None,
    }
}

/// Span of the Arnold relations `ω_ij∧ω_jk + ω_jk∧ω_ki + ω_ki∧ω_ij` in
/// `Λ²` of the letters.
pub fn arnold_space(points: usize) -> LinSpace<(Omega, Omega)> {
    let mut rows = Vec::new();
    for i in 0..points {
        for j in i + 1..points {
            for k in j + 1..points {
                let (ij, jk, ik) = (Omega::new(i, j).unwrap(), Omega::new(j, k).unwrap(), Omega::new(i, k).unwrap());
                let mut r = SparseVec::new();
                for (a, b) in [(ij, jk), (jk, ik), (ik, ij)] {
                    let (k, c) = wedge(a, b).expect("distinct");
                    r.add_term(k, c);
                }
                rows.push(r);
            }
        }
    }
    LinSpace::from_rows(&rows)
}

fn points_of(t: &TenVec<Omega>) -> usize {
    t.keys().flat_map(|w| w.iter().map(|c| c.1 as usize + 1)).max().unwrap_or(0)
}

/// For every slot, the antisymmetrized pair of adjacent letters lies in the
/// span of the Arnold relations.
pub fn integrable_conf(t: &TenVec<Omega>) -> Result<bool, ConfError> {
    if t.is_zero() {
        return Ok(true);
    }
    let n = weight(t).ok_or(ConfError::Inhomogeneous)?;
    let arnold = arnold_space(points_of(t));
    for s in 0..n.saturating_sub(1) {
        let mut parts: BTreeMap<(&[Omega], &[Omega]), SparseVec<(Omega, Omega)>> = BTreeMap::new();
        for (w, c) in t {
            if let Some((k, sign)) = wedge(w[s], w[s + 1]) {
                parts.entry((&w[..s], &w[s + 2..])).or_default().add_term(k, c * &sign);
            }
        }
        if !parts.values().all(|v| arnold.contains(v)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Integrability of a Lie coalgebra element, tested on `θ*(x)`.
pub fn integrable_conf_colie(x: &CoLieVec<Omega>) -> Result<bool, ConfError> {
    integrable_conf(&theta_star(x.normal_form()))
}

/// Rewrites a symbol in the letters `x_i − x_j` over `ω_ij`.
pub fn to_omega(x: &CoLieVec<WOne>) -> Result<CoLieVec<Omega>, ConfError> {
    for w in x.normal_form().keys() {
        for l in w {
            match l.as_var_difference() {
                Some((i, Some(j))) if i != j && i < 256 && j < 256 => {}
                _ => return Err(ConfError::NotConf(l.to_string())),
            }
        }
    }
    Ok(x.substitute(|l| {
        let (i, j) = l.as_var_difference().expect("checked");
        SparseVec::unit(Omega::new(i as usize, j.expect("checked") as usize).expect("checked"))
    }))
}

/// `pr_i`: keeps the words all of whose letters involve `i` and renames
/// `ω_ij` to `f_j`.
pub fn project_pr(i: usize, c: &CoLieVec<Omega>) -> CoLieVec<FLetter> {
    c.substitute(|l| {
        let (a, b) = l.ends();
        if a == i {
            SparseVec::unit(FLetter::F(b as u8))
        } else if b == i {
            SparseVec::unit(FLetter::F(a as u8))
        } else {
            SparseVec::new()
        }
    })
}

/// Tensor form of `pr_i`.
pub fn project_pr_tensor(i: usize, t: &TenVec<Omega>) -> TenVec<FLetter> {
    substitute_letters(t, |l| {
        let (a, b) = l.ends();
        if a == i {
            SparseVec::unit(FLetter::F(b as u8))
        } else if b == i {
            SparseVec::unit(FLetter::F(a as u8))
        } else {
            SparseVec::new()
        }
    })
}

/// `T_f`: every `f_i` goes to `f_i + f`.
pub fn translate(t: &TenVec<FLetter>) -> TenVec<FLetter> {
    substitute_letters(t, |l| match l {
        FLetter::F(_) => SparseVec::from_terms([(*l, Rat::one()), (FLetter::Shift, Rat::one())]),
        FLetter::Shift => SparseVec::unit(FLetter::Shift),
    })
}

/// Letterwise action of a map on indices; `None` sends the letter to zero.
pub fn act_indices<F: Fn(usize) -> Option<usize>>(t: &TenVec<FLetter>, alpha: F) -> TenVec<FLetter> {
    substitute_letters(t, |l| match l {
        FLetter::F(i) => alpha(*i as usize).map(|j| SparseVec::unit(FLetter::F(j as u8))).unwrap_or_default(),
        FLetter::Shift => SparseVec::unit(FLetter::Shift),
    })
}

/// Coface `δ_i(j) = j` for `j < i`, `j + 1` otherwise.
pub fn coface(i: usize, t: &TenVec<FLetter>) -> TenVec<FLetter> {
    act_indices(t, |j| Some(if j < i { j } else { j + 1 }))
}

/// Codegeneracy `σ_i(j) = j` for `j ≤ i`, `j − 1` otherwise.
pub fn codegeneracy(i: usize, t: &TenVec<FLetter>) -> TenVec<FLetter> {
    act_indices(t, |j| Some(if j <= i { j } else { j - 1 }))
}

/// All words `[f_{i1}|…|f_{in}]` with `i1 ≤ … ≤ in ≤ m`.
pub fn nondecreasing_words(n: usize, m: usize) -> Vec<Word<FLetter>> {
    fn rec(start: usize, m: usize, left: usize, cur: &mut Vec<FLetter>, out: &mut Vec<Word<FLetter>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..=m {
            cur.push(FLetter::F(i as u8));
            rec(i, m, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, n, &mut Vec::new(), &mut out);
    out
}

/// `Inv_n(m)`: elements of the Lie coalgebra on `f_0..f_m` that are
/// represented by nondecreasing words and are fixed by `T_f`. Invariance
/// is imposed exactly over the alphabet enlarged by the fresh letter `f`.
pub fn inv_space(n: usize, m: usize) -> Result<LinSpace<Word<FLetter>>, ConfError> {
    if n < 2 {
        return Err(ConfError::BadIndex(format!("weight {n}")));
    }
    let words = nondecreasing_words(n, m);
    let rows: Vec<TenVec<FLetter>> = words
        .iter()
        .map(|w| {
            let t = TenVec::unit(w.clone());
            let moved = colie_project(&translate(&t)).expect("homogeneous");
            let fixed = colie_project(&t).expect("homogeneous");
            (&moved - &fixed).into_normal_form()
        })
        .collect();
    let ker = kernel(&rows);
    let basis: Vec<TenVec<FLetter>> = ker
        .rows()
        .map(|r| {
            let t: TenVec<FLetter> = r.iter().map(|(i, c)| (words[*i].clone(), c.clone())).collect();
            colie_project(&t).expect("homogeneous").into_normal_form()
        })
        .collect();
    Ok(LinSpace::from_rows(&basis))
}

/// `a_n(m) = Σ_{n0+…+nm = n−m} f0^{n0} ⊗ (f0−f1) ⊗ f1^{n1} ⊗ … ⊗ (f(m−1)−fm) ⊗ fm^{nm}`
/// as a tensor; defined for `1 ≤ m ≤ n`.
pub fn a_tensor(n: usize, m: usize) -> Result<TenVec<FLetter>, ConfError> {
    if m == 0 || m > n {
        return Err(ConfError::BadIndex(format!("a_{n}({m})")));
    }
    let f = |i: usize| FLetter::F(i as u8);
    // Build by runs: state is the tensor so far, indexed by the current block.
    let mut layers: Vec<TenVec<FLetter>> = vec![TenVec::unit(Vec::new())];
    for block in 0..=m {
        let mut next = TenVec::new();
        for layer in &layers {
            for extra in 0..=(n - m) {
                let mut t = layer.clone();
                for _ in 0..extra {
                    t = crate::words::append(&t, &f(block));
                }
                if block < m {
                    let mut d = crate::words::append(&t, &f(block));
                    d -= &crate::words::append(&t, &f(block + 1));
                    t = d;
                }
                next += &t;
            }
        }
        layers = vec![next];
    }
    Ok(layers.pop().unwrap().filter(|w| w.len() == n))
}

/// `a_n(m)` in the Lie coalgebra, for `2 ≤ m ≤ n`.
pub fn a_elem(n: usize, m: usize) -> Result<CoLieVec<FLetter>, ConfError> {
    if m < 2 || m > n {
        return Err(ConfError::BadIndex(format!("a_{n}({m})")));
    }
    Ok(colie_project(&a_tensor(n, m)?).expect("homogeneous"))
}

/// `f^{⊗k}`.
pub fn shift_power(k: usize) -> TenVec<FLetter> {
    TenVec::unit(vec![FLetter::Shift; k])
}

/// Right side of `T_f(a_n(m)) = Σ_{j=0}^{n−m} f^{⊗j} ⧢ a_{n−j}(m)`.
pub fn translated_a_expansion(n: usize, m: usize) -> Result<TenVec<FLetter>, ConfError> {
    let mut out = TenVec::new();
    for j in 0..=(n - m) {
        out += &shuffle_vec(&shift_power(j), &a_tensor(n - j, m)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(i: usize, j: usize) -> Omega {
        Omega::new(i, j).unwrap()
    }

    #[test]
    fn integrability_examples() {
        assert!(integrable_conf(&TenVec::unit(vec![o(0, 1), o(0, 1)])).unwrap());
        assert!(!integrable_conf(&TenVec::unit(vec![o(0, 1), o(2, 3)])).unwrap());
        let mixed = &TenVec::unit(vec![o(0, 1)]) + &TenVec::unit(vec![o(0, 1), o(0, 2)]);
        assert_eq!(integrable_conf(&mixed), Err(ConfError::Inhomogeneous));
    }

    #[test]
    fn projection_examples() {
        let x = colie_project(&TenVec::unit(vec![o(0, 1), o(0, 2)])).unwrap();
        let f = |i: u8| FLetter::F(i);
        assert_eq!(project_pr(0, &x), colie_project(&TenVec::unit(vec![f(1), f(2)])).unwrap());
        let y = colie_project(&TenVec::unit(vec![o(1, 2), o(0, 2)])).unwrap();
        assert!(project_pr(0, &y).is_zero());
    }

    #[test]
    fn a22() {
        let f = |i: u8| FLetter::F(i);
        let expect: TenVec<FLetter> = [(vec![f(0), f(1)], 1), (vec![f(0), f(2)], -1), (vec![f(1), f(2)], 1)]
            .into_iter()
            .map(|(w, c)| (w, Rat::from_int(c)))
            .collect();
        // the tensor also carries −[f1|f1], which vanishes in the Lie coalgebra
        assert_eq!(a_elem(2, 2).unwrap(), colie_project(&expect).unwrap());
        assert!(a_elem(1, 1).is_err());
        assert!(a_elem(2, 3).is_err());
    }

    #[test]
    fn small_inv_dims() {
        assert_eq!(inv_space(2, 2).unwrap().rank(), 1);
        assert_eq!(inv_space(2, 3).unwrap().rank(), 3);
        assert_eq!(inv_space(3, 3).unwrap().rank(), 4);
    }
}
