//! Cross-ratio calculus in `CoLie(P_F)`: the letters `{[a,b,c,d]}` of the
//! quotient of `Q[P¹]` by the six-fold symmetries, the elements `Q` and `S`,
//! label actions, and an audited checker for equality modulo established
//! zeros.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::corr::{li, symbol, Affine, CorVec, CorrError, Point, WOne};
use crate::exactalg::{LinSpace, Rat, SparseVec};
use crate::words::{colie_project, concat, CoLieVec, TenVec};

mod suite;

pub use suite::{gangl_suite, SuiteReport};

pub type Label = u8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GanglError {
    #[error("wrong number of points: expected {expected}, got {got}")]
    Arity { expected: String, got: usize },
    #[error("repeated labels in {0}")]
    RepeatedLabels(String),
    #[error("no ledger entry {0}")]
    UnknownEntry(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("step {step} failed; residual {residual}")]
    StepFailed { step: String, residual: String },
    #[error("unsupported weight {0}")]
    Weight(usize),
    #[error(transparent)]
    Corr(#[from] CorrError),
}

/// A letter `{[a,b,c,d]}` with `a < b < c < d`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pf([Label; 4]);

impl Pf {
    pub fn labels(&self) -> [Label; 4] {
        self.0
    }
}

impl fmt::Display for Pf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "[{a},{b},{c},{d}]")
    }
}

impl fmt::Debug for Pf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Element of `CoLie_k(P_F)` in normal form.
pub type QSVec = CoLieVec<Pf>;

/// Sorted tuple and the sign of the sorting permutation; `None` when two
/// points coincide.
pub fn pf_normalize(p: [Label; 4]) -> Option<(Pf, i64)> {
    let mut s = p;
    let mut sign = 1;
    for i in 0..4 {
        for j in 0..3 - i {
            if s[j] > s[j + 1] {
                s.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if s.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((Pf(s), sign))
}

/// `{[a,b,c,d]}` as a vector of letters.
pub fn pf_letter(p: [Label; 4]) -> SparseVec<Pf> {
    match pf_normalize(p) {
        Some((l, s)) => SparseVec::term(l, Rat::from_int(s)),
        None => SparseVec::new(),
    }
}

fn letter_tensor(v: &SparseVec<Pf>) -> TenVec<Pf> {
    v.map_basis(|l| vec![*l])
}

fn quad(p: &[Label]) -> TenVec<Pf> {
    letter_tensor(&pf_letter([p[0], p[1], p[2], p[3]]))
}

fn omit(p: &[Label], from: usize, to: usize) -> Vec<Label> {
    p[..=from].iter().chain(&p[to..]).copied().collect()
}

/// `Q(x0,…,x_{2k+1})` as a tensor, before projection to the Lie coalgebra.
pub fn q_tensor(p: &[Label]) -> Result<TenVec<Pf>, GanglError> {
    if p.len() < 4 || p.len() % 2 == 1 {
        return Err(GanglError::Arity { expected: "2k+2, k ≥ 1".into(), got: p.len() });
    }
    if p.len() == 4 {
        return Ok(quad(p));
    }
    let mut out = TenVec::new();
    for i in 0..p.len() - 3 {
        out.add_scaled(&concat(&q_tensor(&omit(p, i, i + 3))?, &quad(&p[i..i + 4])), &Rat::one());
    }
    Ok(out)
}

/// `S(x0,…,x_{2k+2})` as a tensor, before projection to the Lie coalgebra.
pub fn s_tensor(p: &[Label]) -> Result<TenVec<Pf>, GanglError> {
    if p.len() < 5 || p.len() % 2 == 0 {
        return Err(GanglError::Arity { expected: "2k+3, k ≥ 1".into(), got: p.len() });
    }
    let mut out = TenVec::new();
    if p.len() == 5 {
        for i in 0..5 {
            let rest: Vec<Label> = p.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, x)| *x).collect();
            out.add_scaled(&quad(&rest), &sign(i));
        }
        return Ok(out);
    }
    for i in 0..p.len() - 3 {
        out.add_scaled(&concat(&s_tensor(&omit(p, i, i + 3))?, &quad(&p[i..i + 4])), &Rat::one());
    }
    for i in 0..p.len() - 4 {
        out.add_scaled(&concat(&q_tensor(&omit(p, i, i + 4))?, &s_tensor(&p[i..i + 5])?), &sign(i));
    }
    Ok(out)
}

fn sign(i: usize) -> Rat {
    Rat::from_int(if i % 2 == 0 { 1 } else { -1 })
}

fn project(t: &TenVec<Pf>) -> QSVec {
    colie_project(t).expect("Q and S tensors are homogeneous")
}

/// `Q(x0,…,x_{2k+1}) ∈ CoLie_k(P_F)`.
pub fn build_q(k: usize, p: &[Label]) -> Result<QSVec, GanglError> {
    if k == 0 || p.len() != 2 * k + 2 {
        return Err(GanglError::Arity { expected: format!("{}", 2 * k + 2), got: p.len() });
    }
    Ok(project(&q_tensor(p)?))
}

/// `S(x0,…,x_{2k+2}) ∈ CoLie_k(P_F)`.
pub fn build_s(k: usize, p: &[Label]) -> Result<QSVec, GanglError> {
    if k == 0 || p.len() != 2 * k + 3 {
        return Err(GanglError::Arity { expected: format!("{}", 2 * k + 3), got: p.len() });
    }
    Ok(project(&s_tensor(p)?))
}

/// `Q(x0,…,x_{2k+1})` as an unexpanded sum of products of base `Q`
/// factors.
pub fn q_products(p: &[Label]) -> Result<QsExpr, GanglError> {
    if p.len() < 4 || p.len() % 2 == 1 {
        return Err(GanglError::Arity { expected: "2k+2, k ≥ 1".into(), got: p.len() });
    }
    if p.len() == 4 {
        return Ok(QsExpr(vec![(1, QsTerm::Product(vec![p.to_vec()]))]));
    }
    let mut out = Vec::new();
    for i in 0..p.len() - 3 {
        for (c, t) in q_products(&omit(p, i, i + 3))?.0 {
            let mut fs = t.factors();
            fs.push(p[i..i + 4].to_vec());
            out.push((c, QsTerm::Product(fs)));
        }
    }
    Ok(QsExpr(out))
}

/// `S(x0,…,x_{2k+2})` as an unexpanded sum of products of base `Q` and `S`
/// factors.
pub fn s_products(p: &[Label]) -> Result<QsExpr, GanglError> {
    if p.len() < 5 || p.len() % 2 == 0 {
        return Err(GanglError::Arity { expected: "2k+3, k ≥ 1".into(), got: p.len() });
    }
    if p.len() == 5 {
        return Ok(QsExpr(vec![(1, QsTerm::Product(vec![p.to_vec()]))]));
    }
    let mut out = Vec::new();
    for i in 0..p.len() - 3 {
        for (c, t) in s_products(&omit(p, i, i + 3))?.0 {
            let mut fs = t.factors();
            fs.push(p[i..i + 4].to_vec());
            out.push((c, QsTerm::Product(fs)));
        }
    }
    for i in 0..p.len() - 4 {
        for (c, t) in q_products(&omit(p, i, i + 4))?.0 {
            let mut fs = t.factors();
            fs.push(p[i..i + 5].to_vec());
            out.push((if i % 2 == 0 { c } else { -c }, QsTerm::Product(fs)));
        }
    }
    Ok(QsExpr(out))
}

/// `Σ_j (−1)^j Q(x0,…,x̂j,…,x_{2k+2})`.
pub fn alternating_q(p: &[Label]) -> Result<QSVec, GanglError> {
    let mut out = TenVec::new();
    for j in 0..p.len() {
        let rest: Vec<Label> = p.iter().enumerate().filter(|(i, _)| *i != j).map(|(_, x)| *x).collect();
        out.add_scaled(&q_tensor(&rest)?, &sign(j));
    }
    Ok(project(&out))
}

/// Tensor product of `Q` and `S` factors, each given by its points: an even
/// number of points is a `Q`, an odd number an `S`.
pub fn qs_product(factors: &[Vec<Label>]) -> Result<QSVec, GanglError> {
    let mut t = TenVec::unit(Vec::new());
    for f in factors {
        let ft = if f.len() % 2 == 0 { q_tensor(f)? } else { s_tensor(f)? };
        t = concat(&t, &ft);
    }
    Ok(project(&t))
}

/// `[[a0,…,a6]] = Q(a0,a1,a5,a4) ⊗ Q(a0,a1,a5,a6) ⊗ S(a0,a1,a6,a2,a3)`.
pub fn bracket(a: &[Label]) -> Result<QSVec, GanglError> {
    if a.len() != 7 {
        return Err(GanglError::Arity { expected: "7".into(), got: a.len() });
    }
    if a.iter().collect::<BTreeSet<_>>().len() != 7 {
        return Err(GanglError::RepeatedLabels(format!("{a:?}")));
    }
    qs_product(&[vec![a[0], a[1], a[5], a[4]], vec![a[0], a[1], a[5], a[6]], vec![a[0], a[1], a[6], a[2], a[3]]])
}

/// A map on labels, `i ↦ images[i]`, identity beyond its length. Covers
/// both permutations and point mergings.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct LabelMap(Vec<Label>);

impl LabelMap {
    pub fn identity() -> LabelMap {
        LabelMap(Vec::new())
    }

    pub fn from_images(images: Vec<Label>) -> LabelMap {
        LabelMap(images).trimmed()
    }

    /// Permutation from disjoint or overlapping cycles, applied right to
    /// left as usual.
    pub fn from_cycles(cycles: &[&[Label]]) -> LabelMap {
        let mut m = LabelMap::identity();
        for c in cycles.iter().rev() {
            let n = c.iter().map(|&x| x as usize + 1).max().unwrap_or(0);
            let mut img: Vec<Label> = (0..n as Label).collect();
            for (i, &x) in c.iter().enumerate() {
                img[x as usize] = c[(i + 1) % c.len()];
            }
            m = LabelMap(img).compose(&m);
        }
        m.trimmed()
    }

    /// Identifies each `from` label with the corresponding `to` label.
    pub fn merging(pairs: &[(Label, Label)]) -> LabelMap {
        let n = pairs.iter().map(|&(a, b)| a.max(b) as usize + 1).max().unwrap_or(0);
        let mut img: Vec<Label> = (0..n as Label).collect();
        for &(a, b) in pairs {
            img[a as usize] = b;
        }
        LabelMap(img).trimmed()
    }

    fn trimmed(mut self) -> LabelMap {
        while let Some(&l) = self.0.last() {
            if l as usize + 1 == self.0.len() {
                self.0.pop();
            } else {
                break;
            }
        }
        self
    }

    pub fn apply(&self, l: Label) -> Label {
        self.0.get(l as usize).copied().unwrap_or(l)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LabelMap) -> LabelMap {
        let n = self.0.len().max(other.0.len());
        LabelMap((0..n as Label).map(|i| self.apply(other.apply(i))).collect()).trimmed()
    }

    pub fn is_permutation(&self) -> bool {
        self.0.iter().collect::<BTreeSet<_>>().len() == self.0.len() && self.0.iter().all(|&l| (l as usize) < self.0.len())
    }

    pub fn inverse(&self) -> Option<LabelMap> {
        if !self.is_permutation() {
            return None;
        }
        let mut img = vec![0; self.0.len()];
        for (i, &l) in self.0.iter().enumerate() {
            img[l as usize] = i as Label;
        }
        Some(LabelMap(img).trimmed())
    }

    pub fn sign(&self) -> Option<i64> {
        if !self.is_permutation() {
            return None;
        }
        let mut seen = vec![false; self.0.len()];
        let mut s = 1;
        for i in 0..self.0.len() {
            if seen[i] {
                continue;
            }
            let mut j = i;
            let mut len = 0;
            while !seen[j] {
                seen[j] = true;
                j = self.0[j] as usize;
                len += 1;
            }
            if len % 2 == 0 {
                s = -s;
            }
        }
        Some(s)
    }

    /// The map sending `from[i]` to `to[i]`, identity elsewhere.
    pub fn sending(from: &[Label], to: &[Label]) -> Option<LabelMap> {
        let n = from.iter().chain(to).map(|&x| x as usize + 1).max().unwrap_or(0);
        let mut img: Vec<Option<Label>> = vec![None; n];
        for (&a, &b) in from.iter().zip(to) {
            match img[a as usize] {
                Some(c) if c != b => return None,
                _ => img[a as usize] = Some(b),
            }
        }
        let used: BTreeSet<Label> = img.iter().flatten().copied().collect();
        let mut free = (0..n as Label).filter(|l| !used.contains(l));
        let img: Vec<Label> = img.into_iter().map(|x| x.unwrap_or_else(|| free.next().unwrap())).collect();
        Some(LabelMap(img).trimmed())
    }
}

impl fmt::Display for LabelMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl FromStr for LabelMap {
    type Err = GanglError;

    /// Accepts an image list `[1,0,2]` or cycles `(13)(46)`, `(0,4)`, `()`.
    fn from_str(s: &str) -> Result<LabelMap, GanglError> {
        let s = s.trim();
        let bad = || GanglError::Parse(s.to_string());
        if let Some(inner) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            if inner.trim().is_empty() {
                return Ok(LabelMap::identity());
            }
            let img = inner.split(',').map(|x| x.trim().parse::<Label>().map_err(|_| bad())).collect::<Result<Vec<_>, _>>()?;
            return Ok(LabelMap::from_images(img));
        }
        let mut cycles = Vec::new();
        let mut rest = s;
        while !rest.is_empty() {
            let r = rest.strip_prefix('(').ok_or_else(bad)?;
            let end = r.find(')').ok_or_else(bad)?;
            let body = &r[..end];
            let c: Vec<Label> = if body.contains(',') {
                body.split(',').map(|x| x.trim().parse::<Label>().map_err(|_| bad())).collect::<Result<_, _>>()?
            } else {
                body.chars().map(|ch| ch.to_digit(10).map(|d| d as Label).ok_or_else(bad)).collect::<Result<_, _>>()?
            };
            if c.iter().collect::<BTreeSet<_>>().len() != c.len() {
                return Err(bad());
            }
            cycles.push(c);
            rest = r[end + 1..].trim_start();
        }
        let refs: Vec<&[Label]> = cycles.iter().map(|c| c.as_slice()).collect();
        Ok(LabelMap::from_cycles(&refs))
    }
}

/// Relabels the points of every letter and renormalizes.
pub fn act_labels(m: &LabelMap, v: &QSVec) -> QSVec {
    v.substitute(|l| {
        let [a, b, c, d] = l.0;
        pf_letter([m.apply(a), m.apply(b), m.apply(c), m.apply(d)])
    })
}

/// Action of a permutation of the labels.
pub fn act_perm(sigma: &LabelMap, v: &QSVec) -> QSVec {
    act_labels(sigma, v)
}

/// Specialization to the divisor where each `from` point equals its `to`
/// point.
pub fn merge_points(v: &QSVec, pairs: &[(Label, Label)]) -> QSVec {
    act_labels(&LabelMap::merging(pairs), v)
}

/// Group generated by the given permutations, identity first, in
/// breadth-first order.
pub fn generated_group(gens: &[LabelMap]) -> Vec<LabelMap> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut queue = VecDeque::from([LabelMap::identity()]);
    seen.insert(LabelMap::identity());
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h = s.compose(&g);
            if seen.insert(h.clone()) {
                queue.push_back(h);
            }
        }
        out.push(g);
    }
    out
}

/// One term of a [`QsExpr`]: a bracket `[[a0,…,a6]]` or a product of `Q`
/// and `S` factors.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum QsTerm {
    Bracket([Label; 7]),
    Product(Vec<Vec<Label>>),
}

impl QsTerm {
    pub fn relabel(&self, m: &LabelMap) -> QsTerm {
        match self {
            QsTerm::Bracket(a) => QsTerm::Bracket(a.map(|l| m.apply(l))),
            QsTerm::Product(fs) => QsTerm::Product(fs.iter().map(|f| f.iter().map(|&l| m.apply(l)).collect()).collect()),
        }
    }

    /// The factors, with a bracket unfolded.
    pub fn factors(&self) -> Vec<Vec<Label>> {
        match self {
            QsTerm::Bracket(a) => vec![vec![a[0], a[1], a[5], a[4]], vec![a[0], a[1], a[5], a[6]], vec![a[0], a[1], a[6], a[2], a[3]]],
            QsTerm::Product(fs) => fs.clone(),
        }
    }

    pub fn eval(&self) -> Result<QSVec, GanglError> {
        match self {
            QsTerm::Bracket(a) => bracket(a),
            QsTerm::Product(fs) => qs_product(fs),
        }
    }
}

/// Integer combination of bracket and product terms, kept unevaluated so
/// that its terms can be inspected.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct QsExpr(pub Vec<(i64, QsTerm)>);

impl QsExpr {
    pub fn relabel(&self, m: &LabelMap) -> QsExpr {
        QsExpr(self.0.iter().map(|(c, t)| (*c, t.relabel(m))).collect())
    }

    pub fn eval(&self) -> Result<QSVec, GanglError> {
        let mut out = QSVec::zero();
        for (c, t) in &self.0 {
            out.add_scaled(&t.eval()?, &Rat::from_int(*c));
        }
        Ok(out)
    }

    pub fn brackets(&self) -> Vec<[Label; 7]> {
        self.0
            .iter()
            .filter_map(|(_, t)| match t {
                QsTerm::Bracket(a) => Some(*a),
                _ => None,
            })
            .collect()
    }
}

impl FromStr for QsExpr {
    type Err = GanglError;

    /// Parses `+Q(0,1,2,3)⊗S(0,1,3,4,5) - 2[2,0,3,1]⊗[2,5,3,1,4] + [[0,…,6]]`.
    /// Square brackets with an even number of points are `Q`, with an odd
    /// number `S`; `*` may replace `⊗`.
    fn from_str(s: &str) -> Result<QsExpr, GanglError> {
        let bad = |m: &str| GanglError::Parse(format!("{m} in {s:?}"));
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect::<String>().replace('⊗', "*");
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut depth = 0i32;
        let mut cur = String::new();
        let mut neg = false;
        for ch in text.chars() {
            match ch {
                '(' | '[' => depth += 1,
                ')' | ']' => depth -= 1,
                _ => {}
            }
            if depth == 0 && (ch == '+' || ch == '-') {
                if !cur.is_empty() {
                    terms.push((neg, std::mem::take(&mut cur)));
                }
                neg = ch == '-';
                continue;
            }
            cur.push(ch);
        }
        if !cur.is_empty() {
            terms.push((neg, cur));
        }
        let mut out = Vec::new();
        for (neg, t) in terms {
            let digits: String = t.chars().take_while(|c| c.is_ascii_digit()).collect();
            let coeff: i64 = if digits.is_empty() { 1 } else { digits.parse().map_err(|_| bad("coefficient"))? };
            let body = &t[digits.len()..];
            let term = if let Some(inner) = body.strip_prefix("[[").and_then(|r| r.strip_suffix("]]")) {
                let a: [Label; 7] = labels(inner).and_then(|v| v.try_into().ok()).ok_or_else(|| bad("bracket"))?;
                QsTerm::Bracket(a)
            } else {
                let mut factors = Vec::new();
                for f in body.split('*') {
                    let inner = f
                        .strip_prefix("Q(")
                        .or_else(|| f.strip_prefix("S("))
                        .and_then(|r| r.strip_suffix(')'))
                        .or_else(|| f.strip_prefix('[').and_then(|r| r.strip_suffix(']')))
                        .ok_or_else(|| bad("factor"))?;
                    let p = labels(inner).ok_or_else(|| bad("labels"))?;
                    if (f.starts_with('Q') && p.len() % 2 == 1) || (f.starts_with('S') && p.len() % 2 == 0) {
                        return Err(bad("arity"));
                    }
                    factors.push(p);
                }
                QsTerm::Product(factors)
            };
            out.push((if neg { -coeff } else { coeff }, term));
        }
        Ok(QsExpr(out))
    }
}

/// Parses and evaluates a [`QsExpr`].
pub fn parse_qs(s: &str) -> Result<QSVec, GanglError> {
    s.parse::<QsExpr>()?.eval()
}

fn labels(s: &str) -> Option<Vec<Label>> {
    s.split(',').map(|x| x.parse().ok()).collect()
}

/// Canonical text of a vector, used for hashing.
pub fn canonical_text(v: &QSVec) -> String {
    v.to_string()
}

pub fn content_hash(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// A family of established zeros: every relabeling or merging of every
/// generator is `≡ 0`.
#[derive(Clone, Debug)]
pub struct LedgerEntry {
    pub id: usize,
    pub label: String,
    pub generators: Vec<QSVec>,
}

/// Append-only list of established zero families.
#[derive(Clone, Debug, Default)]
pub struct ZeroLedger {
    entries: Vec<LedgerEntry>,
}

impl ZeroLedger {
    pub fn new() -> ZeroLedger {
        ZeroLedger::default()
    }

    pub fn push(&mut self, label: &str, generators: Vec<QSVec>) -> usize {
        let id = self.entries.len();
        self.entries.push(LedgerEntry { id, label: label.to_string(), generators });
        id
    }

    pub fn get(&self, id: usize) -> Option<&LedgerEntry> {
        self.entries.get(id)
    }

    pub fn entries(&self) -> &[LedgerEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// All generators of an entry under a label map.
    pub fn instance(&self, u: &Use) -> Result<Vec<QSVec>, GanglError> {
        let e = self.get(u.entry).ok_or(GanglError::UnknownEntry(u.entry))?;
        Ok(e.generators.iter().map(|g| act_labels(&u.map, g)).collect())
    }
}

/// One instance of a ledger family.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Use {
    pub entry: usize,
    pub map: LabelMap,
}

impl Use {
    pub fn new(entry: usize, map: LabelMap) -> Use {
        Use { entry, map }
    }

    pub fn plain(entry: usize) -> Use {
        Use { entry, map: LabelMap::identity() }
    }
}

impl fmt::Display for Use {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.entry, self.map)
    }
}

impl FromStr for Use {
    type Err = GanglError;

    fn from_str(s: &str) -> Result<Use, GanglError> {
        let (e, m) = s.split_once('@').ok_or_else(|| GanglError::Parse(s.to_string()))?;
        Ok(Use { entry: e.parse().map_err(|_| GanglError::Parse(s.to_string()))?, map: m.parse()? })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditRecord {
    pub step_id: String,
    pub claim_hash: String,
    pub ledger_entries_used: Vec<usize>,
    pub instances: Vec<Use>,
    pub verdict: bool,
}

#[derive(Clone, Debug)]
pub struct Equiv {
    pub holds: bool,
    pub residual: QSVec,
    pub audit: AuditRecord,
}

/// Decides `claim ≡ 0` by exact membership in the span of the listed ledger
/// instances. Shuffle relations are built in, since every vector is kept in
/// Lie coalgebra normal form.
pub fn check_equiv(step_id: &str, claim: &QSVec, ledger: &ZeroLedger, uses: &[Use]) -> Result<Equiv, GanglError> {
    let mut rows = Vec::new();
    for u in uses {
        rows.extend(ledger.instance(u)?.into_iter().map(|v| v.into_normal_form()));
    }
    let span = LinSpace::from_rows(rows.iter());
    let residual = QSVec::from_normal_form(span.reduce_vec(claim.normal_form()));
    let holds = residual.is_zero();
    let used: BTreeSet<usize> = uses.iter().map(|u| u.entry).collect();
    let audit = AuditRecord {
        step_id: step_id.to_string(),
        claim_hash: content_hash(&canonical_text(claim)),
        ledger_entries_used: used.into_iter().collect(),
        instances: uses.to_vec(),
        verdict: holds,
    };
    Ok(Equiv { holds, residual, audit })
}

/// Symbol of the difference of the two sides of the Kummer-type equation
/// for `Li_3` on six points exchanged by a projective involution `ψ`. The
/// involution is `ψ(z) = −z` and `x0, x1, x2` are free, so
/// `x3 = −x0, x4 = −x1, x5 = −x2`. `Li_3(1)` has zero symbol and is left out.
pub fn kummer_symbol() -> Result<CoLieVec<WOne>, GanglError> {
    let x: Vec<Point> = (0..6)
        .map(|i| if i < 3 { Point::var(i) } else { Point::affine(Affine::from_parts([(i - 3, Rat::from_int(-1))], Rat::zero())) })
        .collect();
    let l3 = |a: usize, b: usize, c: usize, d: usize| -> Result<_, GanglError> {
        Ok(li(3, &Point::cross(x[a].clone(), x[b].clone(), x[c].clone(), x[d].clone())?)?)
    };
    let lhs = [l3(0, 1, 3, 4)?, l3(0, 2, 3, 5)?, l3(1, 2, 4, 5)?];
    let rhs = [l3(0, 1, 3, 5)?, l3(0, 2, 4, 5)?, l3(1, 2, 4, 3)?, l3(0, 1, 2, 4)?, l3(0, 1, 3, 2)?, l3(2, 0, 5, 1)?];
    let mut total = lhs.into_iter().fold(SparseVec::new(), |acc, v| &acc + &v);
    for v in rhs {
        total.add_scaled(&v, &Rat::from_int(-2));
    }
    Ok(symbol(&total)?)
}

/// Symbol of the difference of the two sides of the six-point `QLi_4`
/// identity in the same involution configuration as [`kummer_symbol`]. The
/// first term carries a stray token in its source display and is read as a
/// plain `QLi_4`. Informational only.
pub fn zagier_configuration_symbol() -> Result<CoLieVec<WOne>, GanglError> {
    let x: Vec<Point> = (0..6)
        .map(|i| if i < 3 { Point::var(i) } else { Point::affine(Affine::from_parts([(i - 3, Rat::from_int(-1))], Rat::zero())) })
        .collect();
    let q4 = |idx: &[usize]| -> Result<CorVec, GanglError> {
        let pts: Vec<Point> = idx.iter().map(|&i| x[i].clone()).collect();
        Ok(crate::quad::qli(4, &pts)?)
    };
    let terms: [(i64, &[usize]); 10] = [
        (2, &[0, 5, 0, 4, 2, 1]),
        (-2, &[5, 4, 0, 2, 3, 4]),
        (-1, &[0, 1, 3, 4]),
        (1, &[0, 2, 3, 5]),
        (-1, &[1, 2, 4, 5]),
        (-2, &[0, 2, 1, 5]),
        (-2, &[0, 4, 3, 5]),
        (2, &[1, 2, 4, 3]),
        (2, &[1, 3, 2, 5]),
        (2, &[2, 3, 4, 5]),
    ];
    let mut total = CorVec::new();
    for (c, idx) in terms {
        total.add_scaled(&q4(idx)?, &Rat::from_int(c));
    }
    Ok(symbol(&total)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: &[Label]) -> QSVec {
        build_q(p.len() / 2 - 1, p).unwrap()
    }

    #[test]
    fn normalize_signs() {
        let (l, s) = pf_normalize([1, 0, 2, 3]).unwrap();
        assert_eq!((l.labels(), s), ([0, 1, 2, 3], -1));
        assert_eq!(pf_normalize([1, 0, 3, 2]).unwrap().1, 1);
        assert!(pf_normalize([0, 0, 2, 3]).is_none());
    }

    #[test]
    fn cycles_and_maps() {
        let m: LabelMap = "(13)(46)".parse().unwrap();
        assert_eq!(m.apply(1), 3);
        assert_eq!(m.apply(6), 4);
        assert_eq!(m.apply(0), 0);
        let c: LabelMap = "(123456)".parse().unwrap();
        assert_eq!(c.apply(6), 1);
        assert_eq!(c.sign(), Some(-1));
        assert_eq!(c.compose(&c.inverse().unwrap()), LabelMap::identity());
        assert_eq!("(0,4)".parse::<LabelMap>().unwrap(), "(04)".parse().unwrap());
        assert_eq!(generated_group(&["(01)".parse().unwrap(), "(012)".parse().unwrap()]).len(), 6);
    }

    #[test]
    fn base_cases_antisymmetric() {
        assert_eq!(act_perm(&"(01)".parse().unwrap(), &q(&[0, 1, 2, 3])), -&q(&[0, 1, 2, 3]));
        for i in 0..5 {
            for j in i + 1..5 {
                let mut p: Vec<Label> = (0..5).collect();
                p[j] = p[i];
                assert!(build_s(1, &p).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn parse_matches_builders() {
        let a = parse_qs("+Q(0,1,2,3)⊗S(0,1,3,4,5) - [0,1,2,3]*[0,1,3,4,5]").unwrap();
        assert!(a.is_zero());
        let b = parse_qs("[[0,1,2,3,4,5,6]]").unwrap();
        assert_eq!(b, qs_product(&[vec![0, 1, 5, 4], vec![0, 1, 5, 6], vec![0, 1, 6, 2, 3]]).unwrap());
    }
}
