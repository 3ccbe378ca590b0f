use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU8, Ordering};
use std::sync::Arc;

use dashmap::DashMap;
use once_cell::sync::Lazy;

use crate::exactalg::{Rat, SparseVec};
use crate::par;
use crate::words::{colie_cobracket, colie_from_cobracket, wedge_basis, CoLieVec, TenVec, WedgeVec};

use super::cor::{cobracket_term_filtered, cor_weight, CorTerm, CorVec, CorWedgeVec};
use super::letter::{log_diff, WOne};
use super::point::Point;
use super::CorrError;

type SymbolMemo = DashMap<CorTerm<Point>, Arc<CoLieVec<WOne>>>;
type DeltaBarMemo = DashMap<CorTerm<Point>, Arc<CoLieVec<B2Letter>>>;

static SYMBOLS: Lazy<SymbolMemo> = Lazy::new(DashMap::new);
static DELTA_BAR: Lazy<DeltaBarMemo> = Lazy::new(DashMap::new);

// 0: build default, 1: on, 2: off
static CHECKS: AtomicU8 = AtomicU8::new(0);

/// Enables or disables the cobracket consistency check run on every freshly
/// computed symbol. Defaults to on in builds with debug assertions.
pub fn set_symbol_checks(on: bool) {
    CHECKS.store(if on { 1 } else { 2 }, Ordering::SeqCst);
}

pub fn symbol_checks() -> bool {
    match CHECKS.load(Ordering::SeqCst) {
        0 => cfg!(debug_assertions),
        s => s == 1,
    }
}

pub fn clear_symbol_memo() {
    SYMBOLS.clear();
    DELTA_BAR.clear();
}

/// Symbol of one correlator term.
///
/// Weight one is `ω{p,q}`. In weight `n ≥ 2` the symbol is the unique
/// element whose cobracket is `(S∧S)(Δ)`; only the `(1, n−1)` components
/// are needed to rebuild it, the full identity is re-checked when checks
/// are on.
pub fn symbol_term(t: &CorTerm<Point>) -> Result<Arc<CoLieVec<WOne>>, CorrError> {
    if let Some(hit) = SYMBOLS.get(t).map(|r| r.value().clone()) {
        return Ok(hit);
    }
    let n = t.weight();
    let s = if n == 1 {
        let p = t.points();
        CoLieVec::from_letters(&log_diff(&p[0], &p[1]))
    } else {
        let mut part = CorWedgeVec::new();
        cobracket_term_filtered(t, &Rat::one(), |i, j| n == 2 || i == 1 || j == 1, &mut part);
        let s = colie_from_cobracket(&symbol_wedges(&part)?, n);
        if symbol_checks() {
            let mut full = CorWedgeVec::new();
            cobracket_term_filtered(t, &Rat::one(), |_, _| true, &mut full);
            if colie_cobracket(&s).expect("weight ≥ 2") != symbol_wedges(&full)? {
                return Err(CorrError::SymbolMismatch(format!("{t:?}")));
            }
        }
        s
    };
    let s = Arc::new(s);
    SYMBOLS.insert(t.clone(), s.clone());
    Ok(s)
}

/// `(S∧S)` applied to a combination of correlator wedges.
pub fn symbol_wedges(w: &CorWedgeVec) -> Result<WedgeVec<WOne>, CorrError> {
    let mut out = WedgeVec::new();
    for (super::cor::CorWedge(a, b), c) in w {
        out.add_scaled(&wedge_basis(&*symbol_term(a)?, &*symbol_term(b)?), c);
    }
    Ok(out)
}

/// Symbol of a homogeneous correlator combination.
pub fn symbol(c: &CorVec) -> Result<CoLieVec<WOne>, CorrError> {
    cor_weight(c)?;
    let terms: Vec<(&CorTerm<Point>, &Rat)> = c.iter().collect();
    let parts = par::map(&terms, |(t, x)| symbol_term(t).map(|s| s.scaled(x)));
    let mut out = CoLieVec::zero();
    for p in parts {
        out += &p?;
    }
    Ok(out)
}

/// Tensor whose projection is `symbol(c)`, built term by term from
/// `Cor(x0,…,xn) = I(∞; x1,…,xn; x0)` and the last-letter recursion
/// `S(I(a0; a1..an; a(n+1))) = Σ_i S(I(..âi..)) ⊗ (log(ai − a(i+1)) − log(ai − a(i−1)))`.
///
/// It skips the Lie coalgebra projection, which dominates in high weight.
/// Only shuffle-invariant consumers (such as `θ*`) should use it.
pub fn symbol_tensor(c: &CorVec) -> Result<TenVec<WOne>, CorrError> {
    cor_weight(c)?;
    let terms: Vec<(&CorTerm<Point>, &Rat)> = c.iter().collect();
    let parts = par::map(&terms, |(t, x)| {
        let p = t.points();
        let mut a = Vec::with_capacity(p.len() + 1);
        a.push(Point::Infinity);
        a.extend(p[1..].iter().cloned());
        a.push(p[0].clone());
        let mut memo = HashMap::new();
        integral_tensor(&a, &mut memo).scaled(x)
    });
    let mut out = TenVec::new();
    for p in parts {
        out += &p;
    }
    Ok(out)
}

fn integral_tensor(a: &[Point], memo: &mut HashMap<Vec<Point>, TenVec<WOne>>) -> TenVec<WOne> {
    let n = a.len() - 2;
    if n == 0 {
        return TenVec::unit(Vec::new());
    }
    if let Some(hit) = memo.get(a) {
        return hit.clone();
    }
    let mut out = TenVec::new();
    for i in 1..=n {
        let letter = &log_diff(&a[i], &a[i + 1]) - &log_diff(&a[i], &a[i - 1]);
        if letter.is_zero() {
            continue;
        }
        let mut rest = a.to_vec();
        rest.remove(i);
        for (w, c) in &integral_tensor(&rest, memo) {
            for (l, d) in &letter {
                let mut w2 = w.clone();
                w2.push(l.clone());
                out.add_term(w2, c * d);
            }
        }
    }
    memo.insert(a.to_vec(), out.clone());
    out
}

/// Basis element `[a|b]`, `a < b`, of the weight-two Lie coalgebra over
/// weight-one letters.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct B2Letter(pub WOne, pub WOne);

impl fmt::Display for B2Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}|{}]", self.0, self.1)
    }
}

impl fmt::Debug for B2Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Coordinates of a weight-two symbol in the [`B2Letter`] basis.
pub fn b2_vector(s: &CoLieVec<WOne>) -> SparseVec<B2Letter> {
    s.normal_form()
        .iter()
        .map(|(w, c)| {
            assert_eq!(w.len(), 2, "weight-two symbol expected");
            (B2Letter(w[0].clone(), w[1].clone()), c.clone())
        })
        .collect()
}

fn delta_bar_term(t: &CorTerm<Point>) -> Result<Arc<CoLieVec<B2Letter>>, CorrError> {
    if let Some(hit) = DELTA_BAR.get(t).map(|r| r.value().clone()) {
        return Ok(hit);
    }
    let n = t.weight();
    let d = if n % 2 == 1 {
        CoLieVec::zero()
    } else if n == 2 {
        CoLieVec::from_letters(&b2_vector(&*symbol_term(t)?))
    } else {
        let wedges = |keep: &dyn Fn(usize, usize) -> bool| -> Result<WedgeVec<B2Letter>, CorrError> {
            let mut part = CorWedgeVec::new();
            cobracket_term_filtered(t, &Rat::one(), keep, &mut part);
            let mut out = WedgeVec::new();
            for (super::cor::CorWedge(a, b), c) in &part {
                out.add_scaled(&wedge_basis(&*delta_bar_term(a)?, &*delta_bar_term(b)?), c);
            }
            Ok(out)
        };
        let d = colie_from_cobracket(&wedges(&|i, j| i == 2 || j == 2)?, n / 2);
        if symbol_checks() && colie_cobracket(&d).expect("weight ≥ 2") != wedges(&|i, j| i >= 2 && j >= 2)? {
            return Err(CorrError::SymbolMismatch(format!("truncated coproduct of {t:?}")));
        }
        d
    };
    let d = Arc::new(d);
    DELTA_BAR.insert(t.clone(), d.clone());
    Ok(d)
}

/// Iterated truncated coproduct `Δ̄^{[k−1]}` of a weight-`2k` element,
/// valued in the Lie coalgebra over weight-two symbols. All components with
/// a weight-one factor are dropped at every stage.
pub fn delta_bar_iterated(c: &CorVec, k: usize) -> Result<CoLieVec<B2Letter>, CorrError> {
    if let Some(w) = cor_weight(c)? {
        if w != 2 * k {
            return Err(CorrError::BadWeight(w));
        }
    }
    if k == 0 {
        return Err(CorrError::BadWeight(0));
    }
    let mut out = CoLieVec::zero();
    for (t, x) in c {
        out.add_scaled(&*delta_bar_term(t)?, x);
    }
    Ok(out)
}
