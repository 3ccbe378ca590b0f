//! Tensor algebra over an alphabet, shuffle product, and the cofree Lie
//! coalgebra with its Lyndon normal form and cobracket.

use std::any::{Any, TypeId};
use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::Hash;
use std::sync::{Arc, Mutex};

use dashmap::DashMap;
use once_cell::sync::Lazy;

use crate::exactalg::{Rat, SparseVec};
use crate::par;

/// Alphabet letters: anything totally ordered, hashable and shareable.
pub trait Letter: Ord + Clone + Hash + fmt::Debug + Send + Sync + 'static {}
impl<T: Ord + Clone + Hash + fmt::Debug + Send + Sync + 'static> Letter for T {}

pub type Word<G> = Vec<G>;
pub type TenVec<G> = SparseVec<Word<G>>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WordsError {
    #[error("tensor is not homogeneous")]
    Inhomogeneous,
    #[error("the empty word is not part of the Lie coalgebra")]
    EmptyWord,
    #[error("weight-one elements are primitive")]
    Primitive,
}

/// Common length of all words, or `None` for zero or inhomogeneous input.
pub fn weight<G: Letter>(t: &TenVec<G>) -> Option<usize> {
    let mut it = t.keys().map(|w| w.len());
    let n = it.next()?;
    it.all(|m| m == n).then_some(n)
}

/// Sum over all interleavings of `u` and `v`.
pub fn shuffle<G: Letter>(u: &[G], v: &[G]) -> TenVec<G> {
    let mut out = TenVec::new();
    let mut buf = Vec::with_capacity(u.len() + v.len());
    fn rec<G: Letter>(u: &[G], v: &[G], buf: &mut Vec<G>, out: &mut TenVec<G>) {
        if u.is_empty() || v.is_empty() {
            let mut w = buf.clone();
            w.extend_from_slice(u);
            w.extend_from_slice(v);
            out.add_term(w, Rat::one());
            return;
        }
        buf.push(u[0].clone());
        rec(&u[1..], v, buf, out);
        buf.pop();
        buf.push(v[0].clone());
        rec(u, &v[1..], buf, out);
        buf.pop();
    }
    rec(u, v, &mut buf, &mut out);
    out
}

/// Bilinear extension of [`shuffle`].
pub fn shuffle_vec<G: Letter>(a: &TenVec<G>, b: &TenVec<G>) -> TenVec<G> {
    let mut out = TenVec::new();
    for (u, x) in a {
        for (v, y) in b {
            out.add_scaled(&shuffle(u, v), &(x * y));
        }
    }
    out
}

/// Concatenation product.
pub fn concat<G: Letter>(a: &TenVec<G>, b: &TenVec<G>) -> TenVec<G> {
    let mut out = TenVec::new();
    for (u, x) in a {
        for (v, y) in b {
            let mut w = u.clone();
            w.extend_from_slice(v);
            out.add_term(w, x * y);
        }
    }
    out
}

/// Appends one letter to every word.
pub fn append<G: Letter>(a: &TenVec<G>, g: &G) -> TenVec<G> {
    a.map_basis(|w| {
        let mut w = w.clone();
        w.push(g.clone());
        w
    })
}

/// Deconcatenation coproduct restricted to splits with both parts nonempty.
pub fn reduced_deconcatenation<G: Letter>(a: &TenVec<G>) -> SparseVec<(Word<G>, Word<G>)> {
    let mut out = SparseVec::new();
    for (w, c) in a {
        for p in 1..w.len() {
            out.add_term((w[..p].to_vec(), w[p..].to_vec()), c.clone());
        }
    }
    out
}

/// Chen–Fox–Lyndon factorization (Duval's algorithm), factors nonincreasing.
pub fn lyndon_factorization<G: Ord>(s: &[G]) -> Vec<&[G]> {
    let n = s.len();
    let mut out = Vec::new();
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        let mut k = i;
        while j < n && s[k] <= s[j] {
            if s[k] < s[j] {
                k = i;
            } else {
                k += 1;
            }
            j += 1;
        }
        while i <= k {
            out.push(&s[i..i + j - k]);
            i += j - k;
        }
    }
    out
}

pub fn is_lyndon<G: Ord>(w: &[G]) -> bool {
    !w.is_empty() && lyndon_factorization(w).len() == 1
}

type Memo<G> = DashMap<Word<G>, Arc<TenVec<G>>>;

static REGISTRY: Lazy<Mutex<HashMap<TypeId, &'static (dyn Any + Send + Sync)>>> = Lazy::new(Default::default);

thread_local! {
    static LOCAL: RefCell<HashMap<TypeId, &'static (dyn Any + Send + Sync)>> = RefCell::new(HashMap::new());
}

fn memo<G: Letter>() -> &'static Memo<G> {
    let id = TypeId::of::<G>();
    let any = LOCAL.with(|l| l.borrow().get(&id).copied()).unwrap_or_else(|| {
        let mut reg = REGISTRY.lock().expect("memo registry");
        let any: &'static (dyn Any + Send + Sync) = *reg.entry(id).or_insert_with(|| Box::leak(Box::new(Memo::<G>::new())));
        LOCAL.with(|l| l.borrow_mut().insert(id, any));
        any
    });
    any.downcast_ref::<Memo<G>>().expect("memo type")
}

/// Drops the normal-form memo for one alphabet type.
pub fn clear_memo<G: Letter>() {
    memo::<G>().clear();
}

/// Normal form of a single word: its class modulo nontrivial shuffles,
/// written in the basis of Lyndon words.
///
/// A non-Lyndon word `w` with Lyndon factorization `l1 ≥ … ≥ lk` satisfies
/// `l1 ⧢ … ⧢ lk = α·w + (lexicographically smaller words)`, and the left
/// side is a shuffle, which gives the rewriting rule.
pub fn nf_word<G: Letter>(w: &[G]) -> Arc<TenVec<G>> {
    assert!(!w.is_empty(), "empty word has no normal form");
    if is_lyndon(w) {
        return Arc::new(TenVec::unit(w.to_vec()));
    }
    let table = memo::<G>();
    if let Some(hit) = table.get(w) {
        return hit.value().clone();
    }
    let factors = lyndon_factorization(w);
    let mut prod = TenVec::unit(factors[0].to_vec());
    for f in &factors[1..] {
        prod = shuffle_vec(&prod, &TenVec::unit(f.to_vec()));
    }
    let alpha = prod.remove(&w.to_vec()).expect("leading word of the factor shuffle");
    let scale = -alpha.recip();
    let mut out = TenVec::new();
    for (u, beta) in &prod {
        debug_assert!(u.as_slice() < w);
        out.add_scaled(&nf_word(u), &(beta * &scale));
    }
    let out = Arc::new(out);
    table.insert(w.to_vec(), out.clone());
    out
}

/// Element of the cofree Lie coalgebra, stored in Lyndon normal form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CoLieVec<G: Letter>(TenVec<G>);

impl<G: Letter> Default for CoLieVec<G> {
    fn default() -> Self {
        CoLieVec(TenVec::new())
    }
}

impl<G: Letter> CoLieVec<G> {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Weight-one element from a combination of letters.
    pub fn from_letters(v: &SparseVec<G>) -> Self {
        CoLieVec(v.map_basis(|g| vec![g.clone()]))
    }

    /// Wraps a tensor already known to be supported on Lyndon words.
    pub fn from_normal_form(t: TenVec<G>) -> Self {
        debug_assert!(t.keys().all(|w| is_lyndon(w)));
        CoLieVec(t)
    }

    pub fn normal_form(&self) -> &TenVec<G> {
        &self.0
    }

    pub fn into_normal_form(self) -> TenVec<G> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn weight(&self) -> Option<usize> {
        weight(&self.0)
    }

    pub fn scaled(&self, c: &Rat) -> Self {
        CoLieVec(self.0.scaled(c))
    }

    pub fn add_scaled(&mut self, o: &CoLieVec<G>, c: &Rat) {
        self.0.add_scaled(&o.0, c);
    }

    /// Applies a letter substitution `g ↦ Σ c·h` and renormalizes.
    pub fn substitute<H: Letter, F: FnMut(&G) -> SparseVec<H>>(&self, f: F) -> CoLieVec<H> {
        project_unchecked(&substitute_letters(&self.0, f))
    }
}

impl<G: Letter> std::ops::Add for &CoLieVec<G> {
    type Output = CoLieVec<G>;
    fn add(self, o: &CoLieVec<G>) -> CoLieVec<G> {
        CoLieVec(&self.0 + &o.0)
    }
}

impl<G: Letter> std::ops::Sub for &CoLieVec<G> {
    type Output = CoLieVec<G>;
    fn sub(self, o: &CoLieVec<G>) -> CoLieVec<G> {
        CoLieVec(&self.0 - &o.0)
    }
}

impl<G: Letter> std::ops::AddAssign<&CoLieVec<G>> for CoLieVec<G> {
    fn add_assign(&mut self, o: &CoLieVec<G>) {
        self.0 += &o.0;
    }
}

impl<G: Letter> std::ops::SubAssign<&CoLieVec<G>> for CoLieVec<G> {
    fn sub_assign(&mut self, o: &CoLieVec<G>) {
        self.0 -= &o.0;
    }
}

impl<G: Letter> std::ops::Neg for &CoLieVec<G> {
    type Output = CoLieVec<G>;
    fn neg(self) -> CoLieVec<G> {
        CoLieVec(-&self.0)
    }
}

/// Multilinear letter substitution on tensors.
pub fn substitute_letters<G: Letter, H: Letter, F: FnMut(&G) -> SparseVec<H>>(t: &TenVec<G>, mut f: F) -> TenVec<H> {
    let mut cache: BTreeMap<G, SparseVec<H>> = BTreeMap::new();
    let mut out = TenVec::new();
    for (w, c) in t {
        let mut acc: TenVec<H> = TenVec::unit(Vec::new());
        for g in w {
            let img = cache.entry(g.clone()).or_insert_with(|| f(g)).clone();
            if img.is_zero() {
                acc = TenVec::new();
                break;
            }
            let mut next = TenVec::new();
            for (u, x) in &acc {
                for (h, y) in &img {
                    let mut u2 = u.clone();
                    u2.push(h.clone());
                    next.add_term(u2, x * y);
                }
            }
            acc = next;
        }
        out.add_scaled(&acc, c);
    }
    out
}

fn project_unchecked<G: Letter>(t: &TenVec<G>) -> CoLieVec<G> {
    let terms: Vec<(&Word<G>, &Rat)> = t.iter().collect();
    let parts = par::map(&terms, |(w, c)| (nf_word(w), (*c).clone()));
    let mut out = TenVec::new();
    for (nf, c) in parts {
        out.add_scaled(&nf, &c);
    }
    CoLieVec(out)
}

/// Projection of a homogeneous tensor of weight ≥ 1 to the Lie coalgebra.
pub fn colie_project<G: Letter>(t: &TenVec<G>) -> Result<CoLieVec<G>, WordsError> {
    if t.is_zero() {
        return Ok(CoLieVec::zero());
    }
    match weight(t) {
        None => Err(WordsError::Inhomogeneous),
        Some(0) => Err(WordsError::EmptyWord),
        Some(_) => Ok(project_unchecked(t)),
    }
}

/// Adjoint of left-normed bracketing:
/// `θ*(b) = b`, `θ*(b1…bn) = θ*(b1…b(n-1))·bn − θ*(b2…bn)·b1`.
/// It kills every nontrivial shuffle.
pub fn theta_star_word<G: Letter>(w: &[G]) -> TenVec<G> {
    fn rec<G: Letter>(w: &[G], sign: i64, suffix: &mut Vec<G>, out: &mut BTreeMap<Word<G>, i64>) {
        if w.len() == 1 {
            let mut word = vec![w[0].clone()];
            word.extend(suffix.iter().rev().cloned());
            *out.entry(word).or_insert(0) += sign;
            return;
        }
        let n = w.len();
        suffix.push(w[n - 1].clone());
        rec(&w[..n - 1], sign, suffix, out);
        suffix.pop();
        suffix.push(w[0].clone());
        rec(&w[1..], -sign, suffix, out);
        suffix.pop();
    }
    let mut acc = BTreeMap::new();
    if !w.is_empty() {
        rec(w, 1, &mut Vec::new(), &mut acc);
    }
    acc.into_iter().map(|(w, c)| (w, Rat::from_int(c))).collect()
}

pub fn theta_star<G: Letter>(t: &TenVec<G>) -> TenVec<G> {
    t.map_linear(|w| theta_star_word(w))
}

/// Canonical tensor representative `θ*(x)/n` of a weight-`n` element.
/// It projects back to `x`, depends only on the class, and uses only
/// permutations of the letters of each normal-form word.
pub fn canonical_rep<G: Letter>(x: &CoLieVec<G>) -> TenVec<G> {
    match x.weight() {
        None => TenVec::new(),
        Some(n) => theta_star(&x.0).scaled(&Rat::new(1, n as i64)),
    }
}

/// Basis element `a ∧ b` of Λ² with `a < b`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Wedge<G: Letter>(pub Word<G>, pub Word<G>);

pub type WedgeVec<G> = SparseVec<Wedge<G>>;

/// Signed canonical basis element for `a ∧ b`; `None` when `a = b`.
pub fn wedge_words<G: Letter>(a: &[G], b: &[G]) -> Option<(Wedge<G>, Rat)> {
    match a.cmp(b) {
        std::cmp::Ordering::Equal => None,
        std::cmp::Ordering::Less => Some((Wedge(a.to_vec(), b.to_vec()), Rat::one())),
        std::cmp::Ordering::Greater => Some((Wedge(b.to_vec(), a.to_vec()), Rat::from_int(-1))),
    }
}

fn wedge_tensors<G: Letter>(x: &TenVec<G>, y: &TenVec<G>, scale: &Rat, out: &mut WedgeVec<G>) {
    for (u, a) in x {
        for (v, b) in y {
            if let Some((w, s)) = wedge_words(u, v) {
                out.add_term(w, &(a * b) * &(&s * scale));
            }
        }
    }
}

/// Bilinear expansion of `x ∧ y` over normal-form words.
pub fn wedge_basis<G: Letter>(x: &CoLieVec<G>, y: &CoLieVec<G>) -> WedgeVec<G> {
    let mut out = WedgeVec::new();
    wedge_tensors(&x.0, &y.0, &Rat::one(), &mut out);
    out
}

/// Cobracket of the cofree Lie coalgebra: each normal-form word `w` maps to
/// `Σ_p [w≤p] ∧ [w>p]`, both sides projected.
pub fn colie_cobracket<G: Letter>(c: &CoLieVec<G>) -> Result<WedgeVec<G>, WordsError> {
    if c.is_zero() {
        return Ok(WedgeVec::new());
    }
    match c.weight() {
        None => return Err(WordsError::Inhomogeneous),
        Some(n) if n < 2 => return Err(WordsError::Primitive),
        _ => {}
    }
    let terms: Vec<(&Word<G>, &Rat)> = c.0.iter().collect();
    let parts = par::map(&terms, |(w, coef)| {
        let mut out = WedgeVec::new();
        for p in 1..w.len() {
            wedge_tensors(&nf_word(&w[..p]), &nf_word(&w[p..]), coef, &mut out);
        }
        out
    });
    Ok(WedgeVec::sum_all(parts))
}

/// Reconstructs the unique weight-`n` element whose cobracket is `e`.
///
/// Only the `(n−1, 1)` part `E = Σ_a E_a ⊗ a` of `e` is read; the element
/// is `(1/n) Σ_a θ*(E_a)·a`. The result is meaningful only if `e` lies in
/// the image of the cobracket, which callers must check.
pub fn colie_from_cobracket<G: Letter>(e: &WedgeVec<G>, n: usize) -> CoLieVec<G> {
    assert!(n >= 2);
    let mut parts: BTreeMap<G, TenVec<G>> = BTreeMap::new();
    for (Wedge(y, z), c) in e {
        if n == 2 {
            if y.len() == 1 && z.len() == 1 {
                parts.entry(z[0].clone()).or_default().add_term(y.clone(), c.clone());
                parts.entry(y[0].clone()).or_default().add_term(z.clone(), -c);
            }
        } else if y.len() == n - 1 && z.len() == 1 {
            parts.entry(z[0].clone()).or_default().add_term(y.clone(), c.clone());
        } else if y.len() == 1 && z.len() == n - 1 {
            parts.entry(y[0].clone()).or_default().add_term(z.clone(), -c);
        }
    }
    let mut t = TenVec::new();
    for (a, ea) in &parts {
        t += &append(&theta_star(ea), a);
    }
    project_unchecked(&t).scaled(&Rat::new(1, n as i64))
}

/// Text form `[a|b|c]` of a word.
pub fn fmt_word<G: fmt::Display>(w: &[G]) -> String {
    let inner: Vec<String> = w.iter().map(|g| g.to_string()).collect();
    format!("[{}]", inner.join("|"))
}

/// Parses `[a|b|c]`, splitting on `|` outside of brackets and braces.
pub fn parse_word<G, E, F>(s: &str, mut letter: F) -> Result<Word<G>, String>
where
    E: fmt::Display,
    F: FnMut(&str) -> Result<G, E>,
{
    let inner = s.strip_prefix('[').and_then(|t| t.strip_suffix(']')).ok_or_else(|| format!("malformed word `{s}`"))?;
    split_top_level(inner, '|').into_iter().map(|p| letter(p).map_err(|e| e.to_string())).collect()
}

/// Splits on `sep` at nesting depth zero with respect to `()[]{}`.
pub fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

impl<G: Letter + fmt::Display> fmt::Display for CoLieVec<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_zero() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}*{}", fmt_word(w))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word<char> {
        s.chars().collect()
    }

    fn t(terms: &[(&str, i64)]) -> TenVec<char> {
        terms.iter().map(|(s, c)| (w(s), Rat::from_int(*c))).collect()
    }

    #[test]
    fn shuffle_small_cases() {
        assert_eq!(shuffle(&w("a"), &w("b")), t(&[("ab", 1), ("ba", 1)]));
        assert_eq!(shuffle(&w(""), &w("ab")), t(&[("ab", 1)]));
        assert_eq!(shuffle(&w("ab"), &w("c")), t(&[("abc", 1), ("acb", 1), ("cab", 1)]));
        assert_eq!(shuffle(&w("a"), &w("a")), t(&[("aa", 2)]));
    }

    #[test]
    fn duval_factorization() {
        let s = w("banana");
        let f: Vec<String> = lyndon_factorization(&s).iter().map(|x| x.iter().collect()).collect();
        assert_eq!(f, vec!["b", "an", "an", "a"]);
        assert!(is_lyndon(&w("aab")));
        assert!(is_lyndon(&w("ab")));
        assert!(!is_lyndon(&w("aa")));
        assert!(!is_lyndon(&w("ba")));
        assert!(!is_lyndon(&w("abab")));
    }

    #[test]
    fn projection_examples() {
        assert!(colie_project(&t(&[("ab", 1), ("ba", 1)])).unwrap().is_zero());
        assert_eq!(colie_project(&t(&[("a", 1)])).unwrap().normal_form(), &t(&[("a", 1)]));
        assert_eq!(colie_project(&t(&[("ba", 1)])).unwrap().normal_form(), &t(&[("ab", -1)]));
        assert_eq!(colie_project(&t(&[("a", 1), ("ab", 1)])), Err(WordsError::Inhomogeneous));
        assert!(colie_project(&t(&[("aa", 1)])).unwrap().is_zero());
    }

    #[test]
    fn cobracket_of_two_letter_word() {
        let x = colie_project(&t(&[("ab", 1)])).unwrap();
        let d = colie_cobracket(&x).unwrap();
        assert_eq!(d, WedgeVec::unit(Wedge(w("a"), w("b"))));
        assert!(colie_cobracket(&CoLieVec::<char>::zero()).unwrap().is_zero());
        let one = colie_project(&t(&[("a", 1)])).unwrap();
        assert_eq!(colie_cobracket(&one), Err(WordsError::Primitive));
    }

    #[test]
    fn wedge_is_alternating() {
        let a = colie_project(&t(&[("a", 1)])).unwrap();
        let b = colie_project(&t(&[("b", 1)])).unwrap();
        assert!(wedge_basis(&a, &a).is_zero());
        let s = &wedge_basis(&a, &b) + &wedge_basis(&b, &a);
        assert!(s.is_zero());
    }

    #[test]
    fn theta_star_values() {
        assert_eq!(theta_star_word(&w("ab")), t(&[("ab", 1), ("ba", -1)]));
        assert_eq!(theta_star_word(&w("abc")), t(&[("abc", 1), ("bac", -1), ("bca", -1), ("cba", 1)]));
        assert!(theta_star(&shuffle(&w("ab"), &w("c"))).is_zero());
    }

    #[test]
    fn reconstruction_inverts_cobracket() {
        let x = colie_project(&t(&[("abc", 2), ("acb", -1), ("bca", 3)])).unwrap();
        let e = colie_cobracket(&x).unwrap();
        assert_eq!(colie_from_cobracket(&e, 3), x);
        let y = colie_project(&t(&[("ab", 1), ("cd", 5)])).unwrap();
        assert_eq!(colie_from_cobracket(&colie_cobracket(&y).unwrap(), 2), y);
    }

    #[test]
    fn word_text_round_trip() {
        let s = "[a|b|c]";
        let word = parse_word(s, |p| p.parse::<char>()).unwrap();
        assert_eq!(fmt_word(&word), s);
        assert_eq!(split_top_level("w{a,b}|w{c,d}", '|'), vec!["w{a,b}", "w{c,d}"]);
    }
}
