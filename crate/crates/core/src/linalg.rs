//! Exact linear algebra over ℚ: echelon forms, nullspaces, affine solving
//! and dimensions of quotients of nested spans.
//!
//! Pivots are always the first nonzero column, so reduced forms and the
//! nullspace bases derived from them are canonical.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::poly::{LinearForm, Unknown};
use crate::rational::Rational;

/// Sparse vector: sorted `(column, value)` pairs, no zeros.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct SparseVec {
    entries: Vec<(usize, Rational)>,
}

impl SparseVec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_dense(values: &[Rational]) -> Self {
        SparseVec {
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| (i, v.clone()))
                .collect(),
        }
    }

    /// Builds from unsorted pairs, summing duplicates.
    pub fn from_pairs<I: IntoIterator<Item = (usize, Rational)>>(pairs: I) -> Self {
        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
        for (c, v) in pairs {
            *acc.entry(c).or_insert_with(Rational::zero) += &v;
        }
        SparseVec { entries: acc.into_iter().filter(|(_, v)| !v.is_zero()).collect() }
    }

    pub fn unit(col: usize) -> Self {
        SparseVec { entries: vec![(col, Rational::one())] }
    }

    pub fn entries(&self) -> &[(usize, Rational)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, col: usize) -> Rational {
        match self.entries.binary_search_by_key(&col, |(c, _)| *c) {
            Ok(i) => self.entries[i].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn leading(&self) -> Option<&(usize, Rational)> {
        self.entries.first()
    }

    pub fn to_dense(&self, ncols: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); ncols];
        for (c, v) in &self.entries {
            out[*c] = v.clone();
        }
        out
    }

    pub fn scale(&self, r: &Rational) -> SparseVec {
        if r.is_zero() {
            return SparseVec::new();
        }
        SparseVec { entries: self.entries.iter().map(|(c, v)| (*c, v * r)).collect() }
    }

    /// `self - k·other`.
    pub fn sub_scaled(&self, k: &Rational, other: &SparseVec) -> SparseVec {
        let (a, b) = (&self.entries, &other.entries);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
            let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
            if take_a {
                out.push(a[i].clone());
                i += 1;
            } else if take_b {
                out.push((b[j].0, -(k * &b[j].1)));
                j += 1;
            } else {
                let v = &a[i].1 - &(k * &b[j].1);
                if !v.is_zero() {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        SparseVec { entries: out }
    }

    pub fn dot_dense(&self, dense: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (c, v) in &self.entries {
            acc += &(v * &dense[*c]);
        }
        acc
    }

    /// Scales so the leading entry is 1.
    pub fn monic(&self) -> SparseVec {
        match self.leading() {
            Some((_, lead)) => self.scale(&lead.recip().expect("nonzero")),
            None => SparseVec::new(),
        }
    }

    fn remap(&self, map: &[usize]) -> SparseVec {
        let mut entries: Vec<_> = self.entries.iter().map(|(c, v)| (map[*c], v.clone())).collect();
        entries.sort_by_key(|(c, _)| *c);
        SparseVec { entries }
    }
}

/// Incrementally built row-echelon basis. Each stored row has leading
/// coefficient 1 at its pivot column.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    /// Adds a row; returns `false` when it was already in the span.
    pub fn insert(&mut self, row: &SparseVec) -> bool {
        let mut r = row.clone();
        while let Some((col, lead)) = r.leading().cloned() {
            match self.rows.get(&col) {
                Some(p) => r = r.sub_scaled(&lead, p),
                None => {
                    self.rows.insert(col, r.monic());
                    return true;
                }
            }
        }
        false
    }

    /// Eliminates every pivot column from `v`. The result is zero iff `v`
    /// lies in the span; for a fully reduced basis it is the canonical
    /// representative of `v` modulo the span.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        self.reduce_from(v, 0)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Back-substitutes into reduced row-echelon form.
    pub fn into_reduced(mut self) -> Echelon {
        let cols: Vec<usize> = self.rows.keys().rev().copied().collect();
        let mut done = Echelon::new();
        for col in cols {
            let row = self.rows.remove(&col).expect("pivot row");
            let reduced = done.reduce_from(&row, col + 1);
            done.rows.insert(col, reduced);
        }
        done
    }

    fn reduce_from(&self, v: &SparseVec, start: usize) -> SparseVec {
        let mut r = v.clone();
        let mut cursor = start;
        loop {
            let next = r
                .entries
                .iter()
                .find(|(c, _)| *c >= cursor && self.rows.contains_key(c))
                .cloned();
            match next {
                Some((col, k)) => {
                    r = r.sub_scaled(&k, &self.rows[&col]);
                    cursor = col + 1;
                }
                None => return r,
            }
        }
    }

    /// Rows in increasing pivot order.
    pub fn rows(&self) -> impl Iterator<Item = &SparseVec> {
        self.rows.values()
    }

    /// Nullspace basis of a reduced echelon system over `ncols` columns,
    /// one vector per free column, in increasing free-column order.
    pub fn nullspace(&self, ncols: usize) -> Vec<SparseVec> {
        let mut per_free: BTreeMap<usize, Vec<(usize, Rational)>> = BTreeMap::new();
        for c in 0..ncols {
            if !self.rows.contains_key(&c) {
                per_free.insert(c, vec![(c, Rational::one())]);
            }
        }
        for (pivot, row) in &self.rows {
            for (c, v) in row.entries().iter().skip(1) {
                if let Some(list) = per_free.get_mut(c) {
                    list.push((*pivot, -v));
                }
            }
        }
        per_free.into_values().map(SparseVec::from_pairs).collect()
    }
}

/// Matrix with labelled columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: Vec<SparseVec>,
    labels: Vec<Unknown>,
}

impl Matrix {
    /// Dense construction; columns labelled `x0, x1, …`.
    pub fn from_dense(rows: &[Vec<Rational>]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged matrix");
        Matrix {
            rows: rows.iter().map(|r| SparseVec::from_dense(r)).collect(),
            labels: (0..ncols as u32).map(Unknown).collect(),
        }
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let dense: Vec<Vec<Rational>> =
            rows.iter().map(|r| r.iter().map(|v| Rational::from_int(*v)).collect()).collect();
        Self::from_dense(&dense)
    }

    pub fn from_sparse(rows: Vec<SparseVec>, labels: Vec<Unknown>) -> Self {
        let ncols = labels.len();
        assert!(
            rows.iter().all(|r| r.entries().last().is_none_or(|(c, _)| *c < ncols)),
            "row wider than label list"
        );
        Matrix { rows, labels }
    }

    pub fn identity(n: usize) -> Self {
        Matrix {
            rows: (0..n).map(SparseVec::unit).collect(),
            labels: (0..n as u32).map(Unknown).collect(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.labels.len()
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn labels(&self) -> &[Unknown] {
        &self.labels
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        self.rows.iter().map(|r| r.to_dense(self.ncols())).collect()
    }

    fn echelon(&self) -> Echelon {
        let mut e = Echelon::new();
        for r in &self.rows {
            e.insert(r);
        }
        e.into_reduced()
    }
}

/// Reduced row-echelon form (zero rows appended to keep the row count) and
/// rank.
pub fn rref(m: &Matrix) -> (Matrix, usize) {
    let e = m.echelon();
    let rank = e.rank();
    let mut rows: Vec<SparseVec> = e.rows().cloned().collect();
    rows.resize(m.nrows().max(rank), SparseVec::new());
    (Matrix { rows, labels: m.labels.clone() }, rank)
}

/// Basis of `{x : m·x = 0}`.
pub fn nullspace(m: &Matrix) -> Vec<Vec<Rational>> {
    m.echelon().nullspace(m.ncols()).iter().map(|v| v.to_dense(m.ncols())).collect()
}

/// Affine solution set `particular + span(nullspace)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionSpace {
    pub particular: Vec<Rational>,
    pub nullspace: Vec<Vec<Rational>>,
    pub labels: Vec<Unknown>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Consistent(SolutionSpace),
    Inconsistent,
}

impl Solution {
    pub fn is_consistent(&self) -> bool {
        matches!(self, Solution::Consistent(_))
    }
}

/// Solves `m·x = rhs`. The particular solution sets every free column to 0.
pub fn solve(m: &Matrix, rhs: &[Rational]) -> Solution {
    assert_eq!(rhs.len(), m.nrows(), "rhs length must equal the row count");
    let n = m.ncols();
    // Augment with the right-hand side as the last column.
    let mut e = Echelon::new();
    for (row, b) in m.rows.iter().zip(rhs) {
        let mut entries = row.entries.clone();
        if !b.is_zero() {
            entries.push((n, b.clone()));
        }
        e.insert(&SparseVec { entries });
    }
    let e = e.into_reduced();
    if e.rows.contains_key(&n) {
        return Solution::Inconsistent;
    }
    let mut particular = vec![Rational::zero(); n];
    for (pivot, row) in &e.rows {
        particular[*pivot] = row.get(n);
    }
    let nullspace = e.nullspace(n + 1);
    let nullspace = nullspace
        .into_iter()
        .filter(|v| v.get(n).is_zero())
        .map(|v| v.to_dense(n))
        .collect();
    Solution::Consistent(SolutionSpace { particular, nullspace, labels: m.labels.clone() })
}

/// Rank of a family of vectors.
pub fn rank_of(vectors: &[SparseVec]) -> usize {
    let mut e = Echelon::new();
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

/// `dim span(big) − dim span(small)`, after checking `span(small) ⊆ span(big)`.
pub fn quotient_dim(big: &[SparseVec], small: &[SparseVec]) -> Result<usize> {
    let mut e = Echelon::new();
    for v in big {
        e.insert(v);
    }
    let big_rank = e.rank();
    if small.iter().any(|v| !e.contains(v)) {
        return Err(Error::NotASubspace);
    }
    Ok(big_rank - rank_of(small))
}

/// Dense-vector convenience wrapper around [`quotient_dim`].
pub fn quotient_dim_dense(big: &[Vec<Rational>], small: &[Vec<Rational>]) -> Result<usize> {
    let b: Vec<SparseVec> = big.iter().map(|v| SparseVec::from_dense(v)).collect();
    let s: Vec<SparseVec> = small.iter().map(|v| SparseVec::from_dense(v)).collect();
    quotient_dim(&b, &s)
}

/// Nullspace of a large sparse homogeneous system over `ncols` columns.
///
/// Duplicate rows are dropped and the system is split into connected
/// blocks (columns linked by a shared row), each eliminated on its own.
/// The result is the canonical reduced-echelon nullspace basis of the whole
/// system, ordered by free column.
pub fn homogeneous_nullspace(ncols: usize, rows: Vec<SparseVec>) -> Vec<SparseVec> {
    let mut unique: BTreeSet<SparseVec> = BTreeSet::new();
    for r in rows {
        if !r.is_zero() {
            unique.insert(r.monic());
        }
    }

    let mut parent: Vec<usize> = (0..ncols).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for r in &unique {
        let mut cols = r.entries().iter().map(|(c, _)| *c);
        if let Some(first) = cols.next() {
            let a = find(&mut parent, first);
            for c in cols {
                let b = find(&mut parent, c);
                if a != b {
                    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                    parent[hi] = lo;
                }
            }
        }
    }
    let roots: Vec<usize> = (0..ncols).map(|c| find(&mut parent, c)).collect();

    let mut blocks: BTreeMap<usize, (Vec<usize>, Vec<SparseVec>)> = BTreeMap::new();
    for (c, root) in roots.iter().enumerate() {
        blocks.entry(*root).or_default().0.push(c);
    }
    for r in unique {
        let root = roots[r.entries()[0].0];
        blocks.get_mut(&root).expect("block").1.push(r);
    }

    let mut basis: Vec<(usize, SparseVec)> = Vec::new();
    let mut local = vec![usize::MAX; ncols];
    for (_, (cols, mut block_rows)) in blocks {
        if block_rows.is_empty() {
            basis.extend(cols.iter().map(|c| (*c, SparseVec::unit(*c))));
            continue;
        }
        for (k, c) in cols.iter().enumerate() {
            local[*c] = k;
        }
        block_rows.sort_by_key(|r| r.nnz());
        let mut e = Echelon::new();
        for r in &block_rows {
            e.insert(&r.remap(&local));
            if e.rank() == cols.len() {
                break;
            }
        }
        let e = e.into_reduced();
        let frees = (0..cols.len()).filter(|k| !e.rows.contains_key(k));
        for (free, v) in frees.zip(e.nullspace(cols.len())) {
            basis.push((cols[free], v.remap(&cols)));
        }
    }
    basis.sort_by_key(|(c, _)| *c);
    basis.into_iter().map(|(_, v)| v).collect()
}

/// Solves `Σ_g x_g · vectors[g] = target` through [`solve`].
pub fn express_in_span(vectors: &[SparseVec], target: &SparseVec, ncols: usize) -> Solution {
    let mut cols: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); ncols];
    for (g, v) in vectors.iter().enumerate() {
        for (c, x) in v.entries() {
            cols[*c].push((g, x.clone()));
        }
    }
    let rows = cols.into_iter().map(SparseVec::from_pairs).collect();
    let m = Matrix::from_sparse(rows, (0..vectors.len() as u32).map(Unknown).collect());
    solve(&m, &target.to_dense(ncols))
}

/// Coefficient row of a linear form over unknown ids; the constant is dropped.
pub fn row_from_form(form: &LinearForm) -> SparseVec {
    SparseVec::from_pairs(form.coefficients().iter().map(|(u, r)| (u.id(), r.clone())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|x| Rational::from_int(*x)).collect()
    }

    /// Textbook dense Gaussian elimination, used as an independent oracle.
    fn oracle_rank(rows: &[Vec<i64>]) -> usize {
        let mut m: Vec<Vec<Rational>> = rows.iter().map(|r| ints(r)).collect();
        let ncols = m.first().map_or(0, |r| r.len());
        let mut rank = 0;
        for col in 0..ncols {
            let Some(p) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
            m.swap(rank, p);
            for r in 0..m.len() {
                if r != rank && !m[r][col].is_zero() {
                    let k = &m[r][col] / &m[rank][col];
                    for c in 0..ncols {
                        let d = &k * &m[rank][c];
                        m[r][c] -= &d;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn rref_examples() {
        let (r, rank) = rref(&Matrix::from_ints(&[&[2, 4], &[1, 2]]));
        assert_eq!(rank, 1);
        assert_eq!(r.to_dense(), vec![ints(&[1, 2]), ints(&[0, 0])]);

        let (r, rank) = rref(&Matrix::identity(3));
        assert_eq!(rank, 3);
        assert_eq!(r, Matrix::identity(3));

        let m = [vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]];
        let (_, rank) = rref(&Matrix::from_ints(&[&m[0], &m[1], &m[2]]));
        assert_eq!(rank, oracle_rank(&m));
        assert_eq!(rank, 2);
    }

    #[test]
    fn nullspace_examples() {
        assert_eq!(nullspace(&Matrix::from_ints(&[&[1, -1]])), vec![ints(&[1, 1])]);
        assert!(nullspace(&Matrix::identity(4)).is_empty());
        let ns = nullspace(&Matrix::from_ints(&[&[1, 2, 3], &[4, 5, 6]]));
        assert_eq!(ns, vec![ints(&[1, -2, 1])]);
    }

    #[test]
    fn solve_examples() {
        match solve(&Matrix::from_ints(&[&[1]]), &ints(&[0])) {
            Solution::Consistent(s) => {
                assert_eq!(s.particular, ints(&[0]));
                assert!(s.nullspace.is_empty());
            }
            Solution::Inconsistent => panic!(),
        }
        match solve(&Matrix::from_ints(&[&[1, 1]]), &ints(&[2])) {
            Solution::Consistent(s) => {
                assert_eq!(s.particular, ints(&[2, 0]));
                assert_eq!(s.nullspace, vec![ints(&[-1, 1])]);
            }
            Solution::Inconsistent => panic!(),
        }
        assert_eq!(solve(&Matrix::from_ints(&[&[1], &[1]]), &ints(&[1, 2])), Solution::Inconsistent);
    }

    #[test]
    fn quotient_examples() {
        let e1 = SparseVec::unit(0);
        let e2 = SparseVec::unit(1);
        let s = SparseVec::from_dense(&ints(&[1, 1]));
        assert_eq!(quotient_dim(&[e1.clone(), e2.clone()], &[e1.clone()]).unwrap(), 1);
        assert_eq!(quotient_dim(&[e1.clone(), e2.clone()], &[e1.clone(), e2.clone()]).unwrap(), 0);
        assert_eq!(quotient_dim(&[e1.clone(), e2.clone(), s], &[]).unwrap(), 2);
        assert_eq!(quotient_dim(&[e1], &[e2]), Err(Error::NotASubspace));
    }

    #[test]
    fn homogeneous_matches_dense() {
        let rows = [vec![1, 2, 0, 0, -1], vec![0, 0, 1, 1, 0], vec![2, 4, 0, 0, -2], vec![0, 0, 0, 3, 0]];
        let dense = Matrix::from_ints(&[&rows[0], &rows[1], &rows[2], &rows[3]]);
        let expected: Vec<SparseVec> = nullspace(&dense).iter().map(|v| SparseVec::from_dense(v)).collect();
        let sparse: Vec<SparseVec> = rows.iter().map(|r| SparseVec::from_dense(&ints(r))).collect();
        assert_eq!(homogeneous_nullspace(5, sparse), expected);
    }

    #[test]
    fn reduction_is_canonical() {
        let mut e = Echelon::new();
        e.insert(&SparseVec::from_dense(&ints(&[1, 1, 0])));
        let e = e.into_reduced();
        let a = e.reduce(&SparseVec::from_dense(&ints(&[0, 1, 5])));
        let b = e.reduce(&SparseVec::from_dense(&ints(&[3, 4, 5])));
        assert_eq!(a, b);
    }
}
