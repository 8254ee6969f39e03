//! Exact sparse linear algebra over the rationals.
//!
//! Everything here is exact: entries are arbitrary-precision rationals and no
//! operation rounds. Kernels are computed by pivoted Gaussian elimination to
//! reduced row echelon form, one connected block of columns at a time.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

pub use num_rational::BigRational as Rational;

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Shorthand for `num / den`.
pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("index ({row}, {col}) out of bounds for {rows}x{cols} matrix")]
    OutOfBounds {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
}

/// A sparse rational vector. Entries are kept sorted by column with no
/// explicit zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SparseVec {
    dim: usize,
    entries: Vec<(usize, Rational)>,
}

impl SparseVec {
    pub fn zero(dim: usize) -> Self {
        SparseVec {
            dim,
            entries: Vec::new(),
        }
    }

    /// Unit vector `e_col`.
    pub fn unit(dim: usize, col: usize) -> Self {
        assert!(col < dim, "unit vector index {col} out of range {dim}");
        SparseVec {
            dim,
            entries: vec![(col, Rational::one())],
        }
    }

    /// Builds a vector from `(column, value)` pairs in any order. Repeated
    /// columns are summed and zeros dropped.
    pub fn from_entries<I>(dim: usize, entries: I) -> Self
    where
        I: IntoIterator<Item = (usize, Rational)>,
    {
        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
        for (c, v) in entries {
            assert!(c < dim, "entry index {c} out of range {dim}");
            *acc.entry(c).or_insert_with(Rational::zero) += v;
        }
        SparseVec {
            dim,
            entries: acc.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
        }
    }

    pub fn from_dense(values: &[Rational]) -> Self {
        SparseVec::from_entries(values.len(), values.iter().cloned().enumerate())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(usize, Rational)] {
        &self.entries
    }

    pub fn get(&self, col: usize) -> Rational {
        match self.entries.binary_search_by_key(&col, |(c, _)| *c) {
            Ok(pos) => self.entries[pos].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    fn get_ref(&self, col: usize) -> Option<&Rational> {
        self.entries
            .binary_search_by_key(&col, |(c, _)| *c)
            .ok()
            .map(|pos| &self.entries[pos].1)
    }

    /// Column of the first nonzero entry.
    pub fn leading(&self) -> Option<usize> {
        self.entries.first().map(|(c, _)| *c)
    }

    pub fn to_dense(&self) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim];
        for (c, v) in &self.entries {
            out[*c] = v.clone();
        }
        out
    }

    pub fn scale(&self, k: &Rational) -> SparseVec {
        if k.is_zero() {
            return SparseVec::zero(self.dim);
        }
        SparseVec {
            dim: self.dim,
            entries: self.entries.iter().map(|(c, v)| (*c, v * k)).collect(),
        }
    }

    /// `self + k * other`.
    pub fn add_scaled(&self, k: &Rational, other: &SparseVec) -> SparseVec {
        debug_assert_eq!(self.dim, other.dim);
        if k.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.entries, &other.entries);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push((b[j].0, k * &b[j].1));
                j += 1;
            } else {
                let v = &a[i].1 + k * &b[j].1;
                if !v.is_zero() {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        SparseVec {
            dim: self.dim,
            entries: out,
        }
    }

    pub fn dot(&self, other: &SparseVec) -> Rational {
        let mut acc = Rational::zero();
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.entries, &other.entries);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc += &a[i].1 * &b[j].1;
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }

    /// Keeps only the coordinates listed in `cols` (sorted, strictly
    /// increasing), renumbered `0..cols.len()`.
    pub fn restrict(&self, cols: &[usize]) -> SparseVec {
        let entries = cols
            .iter()
            .enumerate()
            .filter_map(|(new, old)| self.get_ref(*old).map(|v| (new, v.clone())))
            .collect();
        SparseVec {
            dim: cols.len(),
            entries,
        }
    }
}

/// A sparse rational matrix stored by rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    col_count: usize,
    rows: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn new(col_count: usize) -> Self {
        SparseMatrix {
            col_count,
            rows: Vec::new(),
        }
    }

    pub fn from_rows(col_count: usize, rows: Vec<SparseVec>) -> Result<Self, LinalgError> {
        for r in &rows {
            if r.dim() != col_count {
                return Err(LinalgError::DimensionMismatch {
                    expected: col_count,
                    found: r.dim(),
                });
            }
        }
        Ok(SparseMatrix { col_count, rows })
    }

    /// Builds a `row_count x col_count` matrix from `(row, col, value)`
    /// triplets; duplicates are summed.
    pub fn from_triplets<I>(row_count: usize, col_count: usize, triplets: I) -> Result<Self, LinalgError>
    where
        I: IntoIterator<Item = (usize, usize, Rational)>,
    {
        let mut per_row: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); row_count];
        for (r, c, v) in triplets {
            if r >= row_count || c >= col_count {
                return Err(LinalgError::OutOfBounds {
                    row: r,
                    col: c,
                    rows: row_count,
                    cols: col_count,
                });
            }
            per_row[r].push((c, v));
        }
        Ok(SparseMatrix {
            col_count,
            rows: per_row
                .into_iter()
                .map(|e| SparseVec::from_entries(col_count, e))
                .collect(),
        })
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix {
            col_count: n,
            rows: (0..n).map(|i| SparseVec::unit(n, i)).collect(),
        }
    }

    pub fn push_row(&mut self, row: SparseVec) {
        assert_eq!(row.dim(), self.col_count, "row dimension mismatch");
        self.rows.push(row);
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.col_count
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(SparseVec::nnz).sum()
    }

    pub fn get(&self, row: usize, col: usize) -> Rational {
        self.rows[row].get(col)
    }

    /// `self * v`.
    pub fn mul_vec(&self, v: &SparseVec) -> Result<SparseVec, LinalgError> {
        if v.dim() != self.col_count {
            return Err(LinalgError::DimensionMismatch {
                expected: self.col_count,
                found: v.dim(),
            });
        }
        Ok(SparseVec::from_entries(
            self.rows.len(),
            self.rows.iter().enumerate().map(|(i, r)| (i, r.dot(v))),
        ))
    }
}

/// Reduced row echelon form of a set of rows: pivot column -> row with a
/// leading one there and zeros in every other pivot column.
#[derive(Debug, Clone, Default)]
struct Echelon {
    pivots: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    /// Subtracts pivot rows until `v` has no entry in any pivot column.
    fn reduce(&self, v: &SparseVec) -> SparseVec {
        let hits: Vec<(usize, Rational)> = v
            .entries()
            .iter()
            .filter(|(c, _)| self.pivots.contains_key(c))
            .cloned()
            .collect();
        // Pivot rows vanish on the other pivot columns, so one pass suffices.
        let mut out = v.clone();
        for (c, coeff) in hits {
            out = out.add_scaled(&-coeff, &self.pivots[&c]);
        }
        out
    }

    fn insert(&mut self, v: &SparseVec) -> bool {
        let r = self.reduce(v);
        let Some(p) = r.leading() else {
            return false;
        };
        let inv = r.get(p).recip();
        let r = r.scale(&inv);
        for row in self.pivots.values_mut() {
            if let Some(k) = row.get_ref(p).cloned() {
                *row = row.add_scaled(&-k, &r);
            }
        }
        self.pivots.insert(p, r);
        true
    }

    fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Groups columns that share a row. Returns, per block, the sorted columns and
/// the indices of the rows touching them. Columns touched by no row are not
/// reported.
fn column_blocks(m: &SparseMatrix) -> Vec<(Vec<usize>, Vec<usize>)> {
    let n = m.col_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut touched = vec![false; n];
    for row in m.rows() {
        let mut it = row.entries().iter().map(|(c, _)| *c);
        if let Some(first) = it.next() {
            touched[first] = true;
            for c in it {
                touched[c] = true;
                let (a, b) = (find(&mut parent, first), find(&mut parent, c));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut block_of: BTreeMap<usize, usize> = BTreeMap::new();
    let mut blocks: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    for (c, _) in touched.iter().enumerate().filter(|(_, t)| **t) {
        let root = find(&mut parent, c);
        let id = *block_of.entry(root).or_insert_with(|| {
            blocks.push((Vec::new(), Vec::new()));
            blocks.len() - 1
        });
        blocks[id].0.push(c);
    }
    for (i, row) in m.rows().iter().enumerate() {
        if let Some(c) = row.leading() {
            let root = find(&mut parent, c);
            blocks[block_of[&root]].1.push(i);
        }
    }
    blocks
}

fn echelon_of(m: &SparseMatrix) -> Echelon {
    let blocks = column_blocks(m);
    let parts: Vec<Echelon> = blocks
        .par_iter()
        .map(|(_, rows)| {
            let mut e = Echelon::default();
            for &r in rows {
                e.insert(&m.rows()[r]);
            }
            e
        })
        .collect();
    let mut all = Echelon::default();
    for p in parts {
        all.pivots.extend(p.pivots);
    }
    all
}

/// A basis of a subspace of `Q^dim`, kept in reduced row echelon form with
/// respect to the natural column order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanBasis {
    dim: usize,
    vectors: Vec<SparseVec>,
}

impl SpanBasis {
    pub fn empty(dim: usize) -> Self {
        SpanBasis {
            dim,
            vectors: Vec::new(),
        }
    }

    /// Row-reduces an arbitrary spanning set.
    pub fn from_vectors(dim: usize, vectors: &[SparseVec]) -> Result<Self, LinalgError> {
        let mut e = Echelon::default();
        for v in vectors {
            if v.dim() != dim {
                return Err(LinalgError::DimensionMismatch {
                    expected: dim,
                    found: v.dim(),
                });
            }
            e.insert(v);
        }
        Ok(SpanBasis {
            dim,
            vectors: e.pivots.into_values().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of basis vectors.
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[SparseVec] {
        &self.vectors
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.vectors.iter().filter_map(SparseVec::leading).collect()
    }

    /// Residue of `v` after eliminating every pivot column of the basis.
    pub fn residue(&self, v: &SparseVec) -> Result<SparseVec, LinalgError> {
        if v.dim() != self.dim {
            return Err(LinalgError::DimensionMismatch {
                expected: self.dim,
                found: v.dim(),
            });
        }
        let mut out = v.clone();
        for b in &self.vectors {
            let p = b.leading().expect("basis vectors are nonzero");
            let k = out.get(p);
            if !k.is_zero() {
                out = out.add_scaled(&-k, b);
            }
        }
        Ok(out)
    }

    pub fn contains(&self, v: &SparseVec) -> Result<bool, LinalgError> {
        Ok(self.residue(v)?.is_zero())
    }

    /// True iff every vector of `other` lies in this span.
    pub fn contains_span(&self, other: &SpanBasis) -> Result<bool, LinalgError> {
        for v in other.vectors() {
            if !self.contains(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Restriction of the span to a coordinate subset, re-reduced.
    pub fn restrict(&self, cols: &[usize]) -> SpanBasis {
        let vs: Vec<SparseVec> = self.vectors.iter().map(|v| v.restrict(cols)).collect();
        SpanBasis::from_vectors(cols.len(), &vs).expect("restricted vectors share dimension")
    }

    /// Expresses `v` in the basis, if it lies in the span. Because the basis
    /// is reduced, the coordinates are read off the pivot columns.
    pub fn coordinates(&self, v: &SparseVec) -> Result<Option<Vec<Rational>>, LinalgError> {
        if !self.contains(v)? {
            return Ok(None);
        }
        Ok(Some(
            self.vectors
                .iter()
                .map(|b| v.get(b.leading().expect("nonzero")))
                .collect(),
        ))
    }
}

/// Reduced-echelon basis of `{v : m v = 0}`.
pub fn kernel_basis(m: &SparseMatrix) -> SpanBasis {
    let n = m.col_count();
    let e = echelon_of(m);
    let mut null = Vec::with_capacity(n - e.rank());
    // Each free column c contributes e_c - sum_p row_p[c] e_p.
    let mut by_free: BTreeMap<usize, Vec<(usize, Rational)>> = BTreeMap::new();
    for c in (0..n).filter(|c| !e.pivots.contains_key(c)) {
        by_free.insert(c, vec![(c, Rational::one())]);
    }
    for (p, row) in &e.pivots {
        for (c, v) in row.entries() {
            if c != p {
                by_free
                    .get_mut(c)
                    .expect("non-pivot entries of a reduced row are free columns")
                    .push((*p, -v.clone()));
            }
        }
    }
    for (_, entries) in by_free {
        null.push(SparseVec::from_entries(n, entries));
    }
    SpanBasis::from_vectors(n, &null).expect("null vectors share dimension")
}

/// Exact rank over the rationals.
pub fn rank(m: &SparseMatrix) -> usize {
    echelon_of(m).rank()
}

/// One solution of `m x = rhs`, with every free unknown set to zero, or
/// `None` when the system is inconsistent.
pub fn solve(m: &SparseMatrix, rhs: &SparseVec) -> Result<Option<SparseVec>, LinalgError> {
    if rhs.dim() != m.row_count() {
        return Err(LinalgError::DimensionMismatch {
            expected: m.row_count(),
            found: rhs.dim(),
        });
    }
    let n = m.col_count();
    let augmented: Vec<SparseVec> = m
        .rows()
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut e = r.entries().to_vec();
            let b = rhs.get(i);
            if !b.is_zero() {
                e.push((n, b));
            }
            SparseVec { dim: n + 1, entries: e }
        })
        .collect();
    let e = echelon_of(&SparseMatrix::from_rows(n + 1, augmented)?);
    if e.pivots.contains_key(&n) {
        return Ok(None);
    }
    Ok(Some(SparseVec::from_entries(
        n,
        e.pivots.iter().map(|(p, row)| (*p, row.get(n))),
    )))
}

/// True iff `v` is an exact rational combination of the basis vectors.
pub fn member_of_span(v: &SparseVec, b: &SpanBasis) -> Result<bool, LinalgError> {
    b.contains(v)
}

/// Serializes a rational as its display string, e.g. `"-3/2"`.
pub fn serialize_rational<S: serde::Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(values: &[i64]) -> SparseVec {
        SparseVec::from_dense(&values.iter().map(|v| rat(*v)).collect::<Vec<_>>())
    }

    fn matrix(rows: &[&[i64]]) -> SparseMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        SparseMatrix::from_rows(cols, rows.iter().map(|r| row(r)).collect()).unwrap()
    }

    #[test]
    fn kernel_of_zero_scalar() {
        let k = kernel_basis(&matrix(&[&[0]]));
        assert_eq!(k.len(), 1);
        assert_eq!(k.vectors()[0], row(&[1]));
    }

    #[test]
    fn kernel_of_identity_is_trivial() {
        assert!(kernel_basis(&SparseMatrix::identity(2)).is_empty());
    }

    #[test]
    fn kernel_of_single_row() {
        let m = matrix(&[&[1, 2, 3]]);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 2);
        for v in k.vectors() {
            let d = v.to_dense();
            assert_eq!(&d[0] + rat(2) * &d[1] + rat(3) * &d[2], rat(0));
            assert!(m.mul_vec(v).unwrap().is_zero());
        }
    }

    #[test]
    fn empty_matrix_has_full_kernel() {
        let k = kernel_basis(&SparseMatrix::new(4));
        assert_eq!(k.len(), 4);
    }

    #[test]
    fn ranks() {
        assert_eq!(rank(&matrix(&[&[0, 0, 0], &[0, 0, 0], &[0, 0, 0]])), 0);
        assert_eq!(rank(&SparseMatrix::identity(3)), 3);
        assert_eq!(rank(&matrix(&[&[1, 2], &[2, 4]])), 1);
    }

    #[test]
    fn membership() {
        let b = SpanBasis::from_vectors(2, &[row(&[0, 1])]).unwrap();
        assert!(member_of_span(&SparseVec::zero(2), &b).unwrap());
        assert!(member_of_span(&b.vectors()[0].clone(), &b).unwrap());
        assert!(!member_of_span(&row(&[1, 0]), &b).unwrap());
        assert_eq!(
            member_of_span(&row(&[1, 0, 0]), &b),
            Err(LinalgError::DimensionMismatch { expected: 2, found: 3 })
        );
    }

    #[test]
    fn basis_is_reduced() {
        let b = SpanBasis::from_vectors(3, &[row(&[2, 4, 6]), row(&[1, 3, 5]), row(&[3, 7, 11])]).unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(b.vectors()[0], row(&[1, 0, -1]));
        assert_eq!(b.vectors()[1], row(&[0, 1, 2]));
        let again = SpanBasis::from_vectors(3, b.vectors()).unwrap();
        assert_eq!(again, b);
    }

    #[test]
    fn coordinates_in_basis() {
        let b = SpanBasis::from_vectors(3, &[row(&[1, 0, -1]), row(&[0, 1, 2])]).unwrap();
        let v = row(&[2, 3, 4]);
        assert_eq!(b.coordinates(&v).unwrap(), Some(vec![rat(2), rat(3)]));
        assert_eq!(b.coordinates(&row(&[1, 0, 0])).unwrap(), None);
    }

    #[test]
    fn solves_consistent_systems() {
        let m = matrix(&[&[1, 1, 0], &[0, 1, 1]]);
        let x = solve(&m, &row(&[3, 5])).unwrap().unwrap();
        assert_eq!(m.mul_vec(&x).unwrap(), row(&[3, 5]));
        let bad = matrix(&[&[1, 1], &[2, 2]]);
        assert_eq!(solve(&bad, &row(&[1, 3])).unwrap(), None);
    }

    #[test]
    fn triplets_sum_and_bounds() {
        let m = SparseMatrix::from_triplets(2, 2, [(0, 0, rat(1)), (0, 0, rat(-1)), (1, 1, rat(3))]).unwrap();
        assert_eq!(m.nnz(), 1);
        assert!(matches!(
            SparseMatrix::from_triplets(1, 1, [(0, 1, rat(1))]),
            Err(LinalgError::OutOfBounds { .. })
        ));
    }
}
