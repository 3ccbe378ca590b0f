use std::collections::BTreeMap;
use std::ops::Bound;

use super::{Rat, SparseVec};

/// Augmented basis used for kernels and intersections. Derived order puts
/// every `Main` symbol before every `Tag`, so pivots land in the main block
/// for as long as it is nonzero.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Aug<B, T> {
    Main(B),
    Tag(T),
}

/// Row echelon form under construction. Rows are keyed by pivot (their
/// smallest symbol, normalized to coefficient one) but not back-reduced.
#[derive(Clone, Debug)]
pub struct Echelon<B: Ord> {
    rows: BTreeMap<B, SparseVec<B>>,
}

impl<B: Ord> Default for Echelon<B> {
    fn default() -> Self {
        Echelon { rows: BTreeMap::new() }
    }
}

fn next_pivot<B: Ord + Clone>(v: &SparseVec<B>, rows: &BTreeMap<B, SparseVec<B>>, after: Option<&B>) -> Option<B> {
    let range = match after {
        Some(a) => v.range_keys((Bound::Excluded(a), Bound::Unbounded)),
        None => v.range_keys((Bound::Unbounded, Bound::Unbounded)),
    };
    for k in range {
        if rows.contains_key(k) {
            return Some(k.clone());
        }
    }
    None
}

impl<B: Ord + Clone> Echelon<B> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Residual of `v` modulo the rows; its symbols avoid every pivot.
    pub fn reduce(&self, v: &SparseVec<B>) -> SparseVec<B> {
        let mut v = v.clone();
        let mut cursor: Option<B> = None;
        while let Some(p) = next_pivot(&v, &self.rows, cursor.as_ref()) {
            let c = -v.coeff(&p);
            v.add_scaled(&self.rows[&p], &c);
            cursor = Some(p);
        }
        v
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: &SparseVec<B>) -> bool {
        let r = self.reduce(v);
        self.insert_reduced(r)
    }

    fn insert_reduced(&mut self, r: SparseVec<B>) -> bool {
        match r.first() {
            None => false,
            Some((p, _)) => {
                let p = p.clone();
                self.rows.insert(p, r.normalized());
                true
            }
        }
    }

    pub fn finish(self) -> LinSpace<B> {
        let mut rows = self.rows;
        let pivots: Vec<B> = rows.keys().rev().cloned().collect();
        for p in pivots {
            let mut row = rows.remove(&p).expect("pivot row");
            let later: Vec<B> = row.range_keys((Bound::Excluded(&p), Bound::Unbounded)).filter(|k| rows.contains_key(*k)).cloned().collect();
            for k in later {
                let c = -row.coeff(&k);
                row.add_scaled(&rows[&k], &c);
            }
            rows.insert(p, row);
        }
        LinSpace { rows }
    }
}

/// Finite-dimensional subspace stored in reduced row echelon form. Two
/// spaces are equal iff their stored rows are identical.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinSpace<B: Ord> {
    rows: BTreeMap<B, SparseVec<B>>,
}

impl<B: Ord> Default for LinSpace<B> {
    fn default() -> Self {
        LinSpace { rows: BTreeMap::new() }
    }
}

impl<B: Ord + Clone> LinSpace<B> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_rows<'a, I>(rows: I) -> Self
    where
        I: IntoIterator<Item = &'a SparseVec<B>>,
        B: 'a,
    {
        let mut e = Echelon::new();
        for r in rows {
            e.insert(r);
        }
        e.finish()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseVec<B>> {
        self.rows.values()
    }

    pub fn pivots(&self) -> impl Iterator<Item = &B> {
        self.rows.keys()
    }

    /// Residual of `v` after eliminating all pivot symbols.
    pub fn reduce_vec(&self, v: &SparseVec<B>) -> SparseVec<B> {
        let mut out = v.clone();
        for (p, c) in v.iter() {
            if let Some(row) = self.rows.get(p) {
                out.add_scaled(row, &-c);
            }
        }
        out
    }

    pub fn contains(&self, v: &SparseVec<B>) -> bool {
        self.reduce_vec(v).is_zero()
    }

    /// Coordinates of a member `v` in the row basis, keyed by pivot; `None`
    /// when `v` is outside the span.
    pub fn coordinates(&self, v: &SparseVec<B>) -> Option<SparseVec<B>> {
        let mut coords = SparseVec::new();
        for (p, c) in v.iter() {
            if self.rows.contains_key(p) {
                coords.add_term(p.clone(), c.clone());
            }
        }
        if self.reduce_vec(v).is_zero() {
            Some(coords)
        } else {
            None
        }
    }

    pub fn sum(&self, other: &LinSpace<B>) -> LinSpace<B> {
        LinSpace::from_rows(self.rows().chain(other.rows()))
    }

    pub fn is_subspace_of(&self, other: &LinSpace<B>) -> bool {
        self.rows().all(|r| other.contains(r))
    }

    /// Linear image under a map given on basis symbols.
    pub fn image<C: Ord + Clone, F: FnMut(&B) -> SparseVec<C>>(&self, mut f: F) -> LinSpace<C> {
        let mut e = Echelon::new();
        for r in self.rows() {
            e.insert(&r.map_linear(&mut f));
        }
        e.finish()
    }
}

/// Row-reduced span of `rows`.
pub fn reduce<B: Ord + Clone>(rows: &[SparseVec<B>]) -> LinSpace<B> {
    LinSpace::from_rows(rows)
}

pub fn member<B: Ord + Clone>(v: &SparseVec<B>, s: &LinSpace<B>) -> bool {
    s.contains(v)
}

/// Intersection by the Zassenhaus construction.
pub fn intersect<B: Ord + Clone>(a: &LinSpace<B>, b: &LinSpace<B>) -> LinSpace<B> {
    let mut e: Echelon<Aug<B, B>> = Echelon::new();
    for r in a.rows() {
        let mut v = r.map_basis(|k| Aug::Main(k.clone()));
        v += &r.map_basis(|k| Aug::Tag(k.clone()));
        e.insert(&v);
    }
    for r in b.rows() {
        e.insert(&r.map_basis(|k| Aug::Main(k.clone())));
    }
    let full = e.finish();
    let tail: Vec<SparseVec<B>> = full
        .rows()
        .filter(|r| matches!(r.first(), Some((Aug::Tag(_), _))))
        .map(|r| {
            r.map_signed(|k| match k {
                Aug::Tag(t) => Some((t.clone(), Rat::one())),
                Aug::Main(_) => None,
            })
        })
        .collect();
    LinSpace::from_rows(&tail)
}

/// Basis of the relation space `{λ : Σ λ_i v_i = 0}` for the given
/// vectors, as vectors over their indices.
pub fn kernel<B: Ord + Clone>(vectors: &[SparseVec<B>]) -> LinSpace<usize> {
    let mut e: Echelon<Aug<B, usize>> = Echelon::new();
    let mut relations = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        let mut row = v.map_basis(|k| Aug::Main(k.clone()));
        row.add_term(Aug::Tag(i), Rat::one());
        let r = e.reduce(&row);
        match r.first() {
            Some((Aug::Main(_), _)) => {
                e.insert_reduced(r);
            }
            Some((Aug::Tag(_), _)) => relations.push(r.map_signed(|k| match k {
                Aug::Tag(t) => Some((*t, Rat::one())),
                Aug::Main(_) => None,
            })),
            None => unreachable!("tag coordinate cannot cancel"),
        }
    }
    LinSpace::from_rows(&relations)
}

/// Rank of a family of vectors.
pub fn rank<B: Ord + Clone>(vectors: &[SparseVec<B>]) -> usize {
    let mut e = Echelon::new();
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(terms: &[(u32, i64)]) -> SparseVec<u32> {
        terms.iter().map(|&(b, c)| (b, Rat::from_int(c))).collect()
    }

    #[test]
    fn proportional_rows_have_rank_one() {
        let s = reduce(&[v(&[(1, 1), (2, 1)]), v(&[(1, 2), (2, 2)])]);
        assert_eq!(s.rank(), 1);
        assert_eq!(reduce::<u32>(&[]).rank(), 0);
    }

    #[test]
    fn membership_basics() {
        let s = reduce(&[v(&[(1, 1), (2, 1)])]);
        assert!(member(&v(&[(1, 1), (2, 1)]), &s));
        assert!(!member(&v(&[(1, 1)]), &LinSpace::new()));
        assert!(member(&SparseVec::new(), &LinSpace::<u32>::new()));
    }

    #[test]
    fn intersection_of_coordinate_planes() {
        let a = reduce(&[v(&[(1, 1)]), v(&[(2, 1)])]);
        let b = reduce(&[v(&[(2, 1)]), v(&[(3, 1)])]);
        let c = intersect(&a, &b);
        assert_eq!(c, reduce(&[v(&[(2, 1)])]));
        assert_eq!(intersect(&a, &a), a);
    }

    #[test]
    fn rref_is_fully_reduced() {
        let s = reduce(&[v(&[(1, 1), (2, 1), (3, 1)]), v(&[(2, 1), (3, 2)]), v(&[(3, 5)])]);
        assert_eq!(s.rank(), 3);
        for r in s.rows() {
            assert_eq!(r.len(), 1);
        }
    }

    #[test]
    fn kernel_of_dependent_family() {
        let k = kernel(&[v(&[(1, 1)]), v(&[(2, 1)]), v(&[(1, 1), (2, 1)])]);
        assert_eq!(k.rank(), 1);
        let rel = k.rows().next().unwrap();
        assert_eq!(rel.coeff(&0), rel.coeff(&1));
        assert_eq!(rel.coeff(&0), -rel.coeff(&2));
    }
}
