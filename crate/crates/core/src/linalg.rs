//! Exact sparse linear algebra over a [`Field`].
//!
//! Vectors are sorted `(index, value)` lists without stored zeros. Pivoting
//! always takes the first nonzero coordinate in index order, so every echelon
//! basis produced here is reproducible bit for bit.

use std::collections::{BTreeMap, BTreeSet};

use crate::scalar::Field;

#[derive(Debug, Clone, PartialEq)]
pub struct SparseVec<F> {
    entries: Vec<(usize, F)>,
}

impl<F: Field> Default for SparseVec<F> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<F: Field> SparseVec<F> {
    pub fn zero() -> Self {
        Self {
            entries: Vec::new(),
        }
    }

    pub fn unit(index: usize) -> Self {
        Self {
            entries: vec![(index, F::one())],
        }
    }

    /// Builds a vector from unordered entries, summing duplicates and
    /// dropping zeros.
    pub fn from_entries(entries: impl IntoIterator<Item = (usize, F)>) -> Self {
        let mut acc: BTreeMap<usize, F> = BTreeMap::new();
        for (i, v) in entries {
            let slot = acc.entry(i).or_insert_with(F::zero);
            *slot = slot.clone() + v;
        }
        Self::from_map(acc)
    }

    fn from_map(map: BTreeMap<usize, F>) -> Self {
        Self {
            entries: map.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
        }
    }

    pub fn from_dense(values: &[F]) -> Self {
        Self::from_entries(values.iter().cloned().enumerate())
    }

    pub fn entries(&self) -> &[(usize, F)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, index: usize) -> F {
        match self.entries.binary_search_by_key(&index, |(i, _)| *i) {
            Ok(pos) => self.entries[pos].1.clone(),
            Err(_) => F::zero(),
        }
    }

    pub fn leading(&self) -> Option<(usize, &F)> {
        self.entries.first().map(|(i, v)| (*i, v))
    }

    pub fn scaled(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            entries: self
                .entries
                .iter()
                .map(|(i, v)| (*i, v.clone() * c.clone()))
                .collect(),
        }
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, c: &F, other: &Self) -> Self {
        if c.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (
            self.entries.iter().peekable(),
            other.entries.iter().peekable(),
        );
        loop {
            match (a.peek(), b.peek()) {
                (Some((ia, va)), Some((ib, vb))) => {
                    if ia < ib {
                        out.push((*ia, va.clone()));
                        a.next();
                    } else if ib < ia {
                        out.push((*ib, vb.clone() * c.clone()));
                        b.next();
                    } else {
                        let v = va.clone() + vb.clone() * c.clone();
                        if !v.is_zero() {
                            out.push((*ia, v));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some((ia, va)), None) => {
                    out.push((*ia, va.clone()));
                    a.next();
                }
                (None, Some((ib, vb))) => {
                    out.push((*ib, vb.clone() * c.clone()));
                    b.next();
                }
                (None, None) => break,
            }
        }
        Self { entries: out }
    }

    pub fn to_dense(&self, len: usize) -> Vec<F> {
        let mut out = vec![F::zero(); len];
        for (i, v) in &self.entries {
            out[*i] = v.clone();
        }
        out
    }
}

/// A matrix stored by columns. Built from `(row, col, value)` triplets.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix<F> {
    rows: usize,
    columns: Vec<SparseVec<F>>,
}

impl<F: Field> SparseMatrix<F> {
    pub fn from_columns(rows: usize, columns: Vec<SparseVec<F>>) -> Self {
        debug_assert!(columns
            .iter()
            .all(|c| c.entries().last().is_none_or(|(i, _)| *i < rows)));
        Self { rows, columns }
    }

    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, F)>,
    ) -> Self {
        let mut buckets: Vec<Vec<(usize, F)>> = vec![Vec::new(); cols];
        for (r, c, v) in triplets {
            assert!(
                r < rows && c < cols,
                "triplet ({r}, {c}) outside {rows}x{cols}"
            );
            buckets[c].push((r, v));
        }
        Self {
            rows,
            columns: buckets.into_iter().map(SparseVec::from_entries).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[SparseVec<F>] {
        &self.columns
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &F)> {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.entries().iter().map(move |(r, v)| (*r, c, v)))
    }

    pub fn rank(&self) -> usize {
        kernel_and_rank(&self.columns).0
    }

    /// Basis of `{x : A x = 0}` in reduced echelon form.
    pub fn kernel(&self) -> Vec<SparseVec<F>> {
        let (_, kernel) = kernel_and_rank(&self.columns);
        rref_basis(kernel)
    }

    /// Some `x` with `A x = b`, or `None` if `b` is outside the column space.
    pub fn solve(&self, b: &SparseVec<F>) -> Option<SparseVec<F>> {
        let mut ech = Echelon::new();
        for (j, col) in self.columns.iter().enumerate() {
            ech.insert_tagged(col.clone(), SparseVec::unit(j));
        }
        let (residue, combo) = ech.reduce_tracked(b);
        residue.is_zero().then_some(combo)
    }

    /// Solution set of `A x = b` as a particular solution plus a kernel basis.
    pub fn solve_affine(&self, b: &SparseVec<F>) -> Option<(SparseVec<F>, Vec<SparseVec<F>>)> {
        let particular = self.solve(b)?;
        Some((particular, self.kernel()))
    }
}

#[derive(Debug, Clone)]
struct Row<F> {
    vector: SparseVec<F>,
    tag: SparseVec<F>,
}

/// Incrementally maintained echelon basis of a subspace.
///
/// Each stored row has leading coefficient 1 and carries a tag: the
/// combination of inserted vectors it equals. Rows are not reduced against
/// one another until [`Echelon::rref`] is called.
#[derive(Debug, Clone)]
pub struct Echelon<F> {
    rows: BTreeMap<usize, Row<F>>,
}

impl<F: Field> Default for Echelon<F> {
    fn default() -> Self {
        Self::new()
    }
}

impl<F: Field> Echelon<F> {
    pub fn new() -> Self {
        Self {
            rows: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> BTreeSet<usize> {
        self.rows.keys().copied().collect()
    }

    /// Inserts `v`; returns `true` when it was independent of the span.
    pub fn insert(&mut self, v: SparseVec<F>) -> bool {
        self.insert_tagged(v, SparseVec::zero()).is_none()
    }

    /// Inserts `v` labelled by `tag`. If `v` is dependent, returns the
    /// combination of tags that vanishes (`tag − Σ c·tag_row`).
    pub fn insert_tagged(&mut self, v: SparseVec<F>, tag: SparseVec<F>) -> Option<SparseVec<F>> {
        let (residue, combo) = self.reduce_tracked(&v);
        let tag = tag.add_scaled(&-F::one(), &combo);
        match residue.leading() {
            None => Some(tag),
            Some((pivot, lead)) => {
                let inv = F::one() / lead.clone();
                let row = Row {
                    vector: residue.scaled(&inv),
                    tag: tag.scaled(&inv),
                };
                self.rows.insert(pivot, row);
                None
            }
        }
    }

    /// Residue of `v` modulo the span: zero at every pivot position.
    pub fn reduce(&self, v: &SparseVec<F>) -> SparseVec<F> {
        self.reduce_tracked(v).0
    }

    pub fn contains(&self, v: &SparseVec<F>) -> bool {
        self.reduce(v).is_zero()
    }

    /// Returns `(residue, combo)` with `v = residue + Σ combo_j · inserted_j`
    /// (in terms of tags).
    pub fn reduce_tracked(&self, v: &SparseVec<F>) -> (SparseVec<F>, SparseVec<F>) {
        let mut work = v.clone();
        let mut combo = SparseVec::zero();
        let mut cursor = 0usize;
        loop {
            let next = work
                .entries()
                .iter()
                .find(|(i, _)| *i >= cursor && self.rows.contains_key(i))
                .map(|(i, c)| (*i, c.clone()));
            let Some((pivot, c)) = next else { break };
            let row = &self.rows[&pivot];
            work = work.add_scaled(&-c.clone(), &row.vector);
            combo = combo.add_scaled(&c, &row.tag);
            cursor = pivot + 1;
        }
        (work, combo)
    }

    /// Reduced row echelon basis, ordered by pivot.
    pub fn rref(&self) -> Vec<SparseVec<F>> {
        self.rref_tagged().into_iter().map(|(v, _)| v).collect()
    }

    /// Reduced rows together with their tags.
    pub fn rref_tagged(&self) -> Vec<(SparseVec<F>, SparseVec<F>)> {
        self.rows
            .iter()
            .map(|(&pivot, row)| {
                let tail = SparseVec {
                    entries: row.vector.entries()[1..].to_vec(),
                };
                let (residue, combo) = self.reduce_tracked(&tail);
                let vector = SparseVec::unit(pivot).add_scaled(&F::one(), &residue);
                let tag = row.tag.add_scaled(&-F::one(), &combo);
                (vector, tag)
            })
            .collect()
    }
}

/// `(rank, kernel basis)` of the map whose columns are given. The kernel
/// basis is not reduced.
pub fn kernel_and_rank<F: Field>(columns: &[SparseVec<F>]) -> (usize, Vec<SparseVec<F>>) {
    let mut ech = Echelon::new();
    let mut kernel = Vec::new();
    for (j, col) in columns.iter().enumerate() {
        if let Some(relation) = ech.insert_tagged(col.clone(), SparseVec::unit(j)) {
            kernel.push(relation);
        }
    }
    (ech.rank(), kernel)
}

/// Reduced row echelon basis of the span of `vectors`.
pub fn rref_basis<F: Field>(vectors: impl IntoIterator<Item = SparseVec<F>>) -> Vec<SparseVec<F>> {
    let mut ech = Echelon::new();
    for v in vectors {
        ech.insert(v);
    }
    ech.rref()
}
