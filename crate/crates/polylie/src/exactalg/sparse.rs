use std::collections::btree_map::{self, BTreeMap};
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use super::Rat;

/// Finite formal linear combination of basis symbols with rational
/// coefficients. Zero coefficients are never stored and iteration follows
/// the basis order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SparseVec<B: Ord> {
    entries: BTreeMap<B, Rat>,
}

impl<B: Ord> Default for SparseVec<B> {
    fn default() -> Self {
        SparseVec { entries: BTreeMap::new() }
    }
}

impl<B: Ord + Clone> SparseVec<B> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn unit(b: B) -> Self {
        Self::term(b, Rat::one())
    }

    pub fn term(b: B, c: Rat) -> Self {
        let mut v = Self::new();
        v.add_term(b, c);
        v
    }

    pub fn from_terms<I: IntoIterator<Item = (B, Rat)>>(terms: I) -> Self {
        let mut v = Self::new();
        for (b, c) in terms {
            v.add_term(b, c);
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, b: &B) -> Option<&Rat> {
        self.entries.get(b)
    }

    pub fn coeff(&self, b: &B) -> Rat {
        self.entries.get(b).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> btree_map::Iter<'_, B, Rat> {
        self.entries.iter()
    }

    pub fn keys(&self) -> btree_map::Keys<'_, B, Rat> {
        self.entries.keys()
    }

    pub fn range_keys<'a>(&'a self, r: (std::ops::Bound<&'a B>, std::ops::Bound<&'a B>)) -> impl Iterator<Item = &'a B> + 'a {
        self.entries.range::<B, _>(r).map(|(k, _)| k)
    }

    pub fn first(&self) -> Option<(&B, &Rat)> {
        self.entries.iter().next()
    }

    pub fn last(&self) -> Option<(&B, &Rat)> {
        self.entries.iter().next_back()
    }

    pub fn add_term(&mut self, b: B, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.entries.entry(b) {
            btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_term_ref(&mut self, b: &B, c: &Rat) {
        if c.is_zero() {
            return;
        }
        if let Some(x) = self.entries.get_mut(b) {
            *x += c;
            if x.is_zero() {
                self.entries.remove(b);
            }
        } else {
            self.entries.insert(b.clone(), c.clone());
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &SparseVec<B>, c: &Rat) {
        if c.is_zero() {
            return;
        }
        for (b, x) in other.iter() {
            self.add_term_ref(b, &(x * c));
        }
    }

    pub fn scaled(&self, c: &Rat) -> SparseVec<B> {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec { entries: self.entries.iter().map(|(b, x)| (b.clone(), x * c)).collect() }
    }

    pub fn remove(&mut self, b: &B) -> Option<Rat> {
        self.entries.remove(b)
    }

    /// Applies a linear map given on basis symbols.
    pub fn map_linear<C: Ord + Clone, F: FnMut(&B) -> SparseVec<C>>(&self, mut f: F) -> SparseVec<C> {
        let mut out = SparseVec::new();
        for (b, c) in self.iter() {
            out.add_scaled(&f(b), c);
        }
        out
    }

    /// Relabels basis symbols; colliding images are summed.
    pub fn map_basis<C: Ord + Clone, F: FnMut(&B) -> C>(&self, mut f: F) -> SparseVec<C> {
        SparseVec::from_terms(self.iter().map(|(b, c)| (f(b), c.clone())))
    }

    /// Relabels basis symbols through a partial signed map.
    pub fn map_signed<C: Ord + Clone, F: FnMut(&B) -> Option<(C, Rat)>>(&self, mut f: F) -> SparseVec<C> {
        let mut out = SparseVec::new();
        for (b, c) in self.iter() {
            if let Some((d, s)) = f(b) {
                out.add_term(d, c * &s);
            }
        }
        out
    }

    pub fn filter<F: FnMut(&B) -> bool>(&self, mut keep: F) -> SparseVec<B> {
        SparseVec {
            entries: self.entries.iter().filter(|(b, _)| keep(b)).map(|(b, c)| (b.clone(), c.clone())).collect(),
        }
    }

    /// Scales so that the first coefficient is one; zero stays zero.
    pub fn normalized(&self) -> SparseVec<B> {
        match self.first() {
            Some((_, c)) => self.scaled(&c.recip()),
            None => self.clone(),
        }
    }

    pub fn into_entries(self) -> BTreeMap<B, Rat> {
        self.entries
    }

    pub fn sum_all<I: IntoIterator<Item = SparseVec<B>>>(vs: I) -> SparseVec<B> {
        let mut acc = SparseVec::new();
        for v in vs {
            acc += &v;
        }
        acc
    }
}

impl<B: Ord + Clone> FromIterator<(B, Rat)> for SparseVec<B> {
    fn from_iter<I: IntoIterator<Item = (B, Rat)>>(iter: I) -> Self {
        SparseVec::from_terms(iter)
    }
}

impl<'a, B: Ord> IntoIterator for &'a SparseVec<B> {
    type Item = (&'a B, &'a Rat);
    type IntoIter = btree_map::Iter<'a, B, Rat>;
    fn into_iter(self) -> Self::IntoIter {
        self.entries.iter()
    }
}

impl<B: Ord> IntoIterator for SparseVec<B> {
    type Item = (B, Rat);
    type IntoIter = btree_map::IntoIter<B, Rat>;
    fn into_iter(self) -> Self::IntoIter {
        self.entries.into_iter()
    }
}

impl<B: Ord + Clone> AddAssign<&SparseVec<B>> for SparseVec<B> {
    fn add_assign(&mut self, o: &SparseVec<B>) {
        for (b, c) in o.iter() {
            self.add_term_ref(b, c);
        }
    }
}

impl<B: Ord + Clone> SubAssign<&SparseVec<B>> for SparseVec<B> {
    fn sub_assign(&mut self, o: &SparseVec<B>) {
        for (b, c) in o.iter() {
            self.add_term_ref(b, &-c);
        }
    }
}

impl<B: Ord + Clone> Add<&SparseVec<B>> for &SparseVec<B> {
    type Output = SparseVec<B>;
    fn add(self, o: &SparseVec<B>) -> SparseVec<B> {
        let mut r = self.clone();
        r += o;
        r
    }
}

impl<B: Ord + Clone> Sub<&SparseVec<B>> for &SparseVec<B> {
    type Output = SparseVec<B>;
    fn sub(self, o: &SparseVec<B>) -> SparseVec<B> {
        let mut r = self.clone();
        r -= o;
        r
    }
}

impl<B: Ord + Clone> Add for SparseVec<B> {
    type Output = SparseVec<B>;
    fn add(mut self, o: SparseVec<B>) -> SparseVec<B> {
        self += &o;
        self
    }
}

impl<B: Ord + Clone> Sub for SparseVec<B> {
    type Output = SparseVec<B>;
    fn sub(mut self, o: SparseVec<B>) -> SparseVec<B> {
        self -= &o;
        self
    }
}

impl<B: Ord + Clone> Neg for SparseVec<B> {
    type Output = SparseVec<B>;
    fn neg(self) -> SparseVec<B> {
        self.scaled(&Rat::from_int(-1))
    }
}

impl<B: Ord + Clone> Neg for &SparseVec<B> {
    type Output = SparseVec<B>;
    fn neg(self) -> SparseVec<B> {
        self.scaled(&Rat::from_int(-1))
    }
}

impl<B: Ord + fmt::Display> fmt::Display for SparseVec<B> {
    /// Canonical text form `c*b + c*b + ...`, or `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "0");
        }
        for (i, (b, c)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}*{b}")?;
        }
        Ok(())
    }
}

impl<B: Ord + fmt::Debug> fmt::Debug for SparseVec<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.entries.iter()).finish()
    }
}
