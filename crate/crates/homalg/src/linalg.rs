//! Exact sparse linear algebra over the rationals.
//!
//! This is the only module that touches matrix arithmetic. All coefficients
//! are arbitrary-precision rationals in lowest terms; there is no
//! floating-point representation anywhere. Pivots are chosen scanning columns
//! left to right and rows top to bottom, so reduced forms, kernel bases and
//! image bases are deterministic.

use crate::error::{Error, Result};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// The ground field: arbitrary-precision rationals, always in lowest terms
/// with positive denominator (enforced by `num_rational`).
pub type Rational = num_rational::BigRational;

/// Integer rational.
pub fn qi(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Rational from a numerator/denominator pair.
pub fn qr(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Renders a rational as `p/q`, or `p` when the denominator is one.
pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        format!("{}", x.numer())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses the `p/q` (or bare `p`) form. Rejects zero denominators.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: num_bigint::BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad numerator in rational \"{s}\"")))?;
    let d: num_bigint::BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad denominator in rational \"{s}\"")))?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in rational \"{s}\"")));
    }
    Ok(Rational::new(n, d))
}

/// A sparse column vector of fixed dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseVec {
    dim: usize,
    entries: BTreeMap<usize, Rational>,
}

impl SparseVec {
    pub fn zero(dim: usize) -> Self {
        SparseVec { dim, entries: BTreeMap::new() }
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.set(i, Rational::one());
        v
    }

    pub fn from_entries(dim: usize, entries: impl IntoIterator<Item = (usize, Rational)>) -> Self {
        let mut v = Self::zero(dim);
        for (i, x) in entries {
            v.add_to(i, x);
        }
        v
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize) -> Rational {
        self.entries.get(&i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn set(&mut self, i: usize, x: Rational) {
        assert!(i < self.dim, "index {} out of bounds {}", i, self.dim);
        if x.is_zero() {
            self.entries.remove(&i);
        } else {
            self.entries.insert(i, x);
        }
    }

    pub fn add_to(&mut self, i: usize, x: Rational) {
        let cur = self.get(i);
        self.set(i, cur + x);
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.entries.iter().map(|(i, x)| (*i, x))
    }

    pub fn scale(&self, c: &Rational) -> SparseVec {
        if c.is_zero() {
            return SparseVec::zero(self.dim);
        }
        SparseVec {
            dim: self.dim,
            entries: self.entries.iter().map(|(i, x)| (*i, x * c)).collect(),
        }
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (i, x) in other.iter() {
            out.add_to(i, x.clone());
        }
        out
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        self.add(&other.scale(&-Rational::one()))
    }

    /// Index of the first nonzero entry.
    pub fn leading_index(&self) -> Option<usize> {
        self.entries.keys().next().copied()
    }

    /// True if this is a standard basis vector; returns the index.
    pub fn as_unit(&self) -> Option<usize> {
        if self.entries.len() == 1 {
            let (i, x) = self.entries.iter().next().unwrap();
            if x.is_one() {
                return Some(*i);
            }
        }
        None
    }
}

/// A sparse matrix over the rationals. No zero entries are stored.
/// Entries are keyed column-major, so column extraction is a range query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    /// keyed by (col, row)
    entries: BTreeMap<(usize, usize), Rational>,
}

/// Result of row reduction: the reduced row-echelon form, the pivot columns
/// and the rank.
#[derive(Clone, Debug)]
pub struct Rref {
    pub reduced: SparseMatrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zero(r, c);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, x) in row.into_iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| qi(x)).collect())
                .collect(),
        )
    }

    /// Assembles a matrix whose columns are the given vectors.
    pub fn from_columns(dim: usize, cols: &[SparseVec]) -> Self {
        let mut m = Self::zero(dim, cols.len());
        for (j, v) in cols.iter().enumerate() {
            assert_eq!(v.dim(), dim, "column dimension mismatch");
            for (i, x) in v.iter() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        self.entries.get(&(j, i)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn set(&mut self, i: usize, j: usize, x: Rational) {
        assert!(i < self.rows && j < self.cols, "({i},{j}) out of bounds {}x{}", self.rows, self.cols);
        if x.is_zero() {
            self.entries.remove(&(j, i));
        } else {
            self.entries.insert((j, i), x);
        }
    }

    pub fn add_to(&mut self, i: usize, j: usize, x: Rational) {
        let cur = self.get(i, j);
        self.set(i, j, cur + x);
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.entries.iter().map(|(&(j, i), x)| (i, j, x))
    }

    pub fn column(&self, j: usize) -> SparseVec {
        let mut v = SparseVec::zero(self.rows);
        for (&(_, i), x) in self.entries.range((j, 0)..=(j, usize::MAX)) {
            v.set(i, x.clone());
        }
        v
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut m = SparseMatrix::zero(self.cols, self.rows);
        for (i, j, x) in self.iter() {
            m.set(j, i, x.clone());
        }
        m
    }

    pub fn mul(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in matrix product");
        let mut out = SparseMatrix::zero(self.rows, rhs.cols);
        for (&(j, k), b) in &rhs.entries {
            for (&(_, i), a) in self.entries.range((k, 0)..=(k, usize::MAX)) {
                out.add_to(i, j, a * b);
            }
        }
        out
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        assert_eq!(self.cols, v.dim(), "shape mismatch in matrix-vector product");
        let mut out = SparseVec::zero(self.rows);
        for (j, x) in v.iter() {
            for (&(_, i), a) in self.entries.range((j, 0)..=(j, usize::MAX)) {
                out.add_to(i, a * x);
            }
        }
        out
    }

    pub fn add(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (i, j, x) in rhs.iter() {
            out.add_to(i, j, x.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> SparseMatrix {
        if c.is_zero() {
            return SparseMatrix::zero(self.rows, self.cols);
        }
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|(k, x)| (*k, x * c)).collect(),
        }
    }

    /// Reduced row-echelon form with pivot bookkeeping.
    ///
    /// Pivot selection: first nonzero entry scanning columns left to right,
    /// rows top to bottom, so the output is deterministic.
    pub fn rref(&self) -> Rref {
        let mut rows: Vec<SparseVec> = vec![SparseVec::zero(self.cols); self.rows];
        for (&(j, i), x) in &self.entries {
            rows[i].set(j, x.clone());
        }
        let mut pivots = Vec::new();
        let mut current = 0usize;
        for col in 0..self.cols {
            let Some(pivot_row) = (current..rows.len()).find(|&r| !rows[r].get(col).is_zero()) else {
                continue;
            };
            rows.swap(current, pivot_row);
            let inv = {
                let p = rows[current].get(col);
                Rational::one() / p
            };
            rows[current] = rows[current].scale(&inv);
            for r in 0..rows.len() {
                if r != current {
                    let factor = rows[r].get(col);
                    if !factor.is_zero() {
                        let sub = rows[current].scale(&factor);
                        rows[r] = rows[r].sub(&sub);
                    }
                }
            }
            pivots.push(col);
            current += 1;
            if current == rows.len() {
                break;
            }
        }
        let mut reduced = SparseMatrix::zero(self.rows, self.cols);
        for (i, row) in rows.iter().enumerate() {
            for (j, x) in row.iter() {
                reduced.set(i, j, x.clone());
            }
        }
        let rank = pivots.len();
        Rref { reduced, pivots, rank }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// A deterministic basis of the null space. Each vector carries a `1` at
    /// its free column, so membership tests against this basis are immediate.
    pub fn kernel_basis(&self) -> Vec<SparseVec> {
        let Rref { reduced, pivots, .. } = self.rref();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let free_cols: Vec<usize> = (0..self.cols).filter(|j| !pivot_set.contains(j)).collect();
        let mut basis = Vec::with_capacity(free_cols.len());
        for &free in &free_cols {
            let mut v = SparseVec::zero(self.cols);
            v.set(free, Rational::one());
            for (row, &pc) in pivots.iter().enumerate() {
                let coeff = reduced.get(row, free);
                if !coeff.is_zero() {
                    v.set(pc, -coeff);
                }
            }
            basis.push(v);
        }
        basis
    }

    /// A basis of the column space: the original columns at pivot positions.
    pub fn image_basis(&self) -> Vec<SparseVec> {
        let Rref { pivots, .. } = self.rref();
        pivots.into_iter().map(|j| self.column(j)).collect()
    }
}

impl fmt::Display for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| format_rational(&self.get(i, j))).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// dim(span ambient) − dim(span sub). Errors if some sub vector is outside
/// the ambient span.
pub fn quotient_dimension(sub: &[SparseVec], ambient: &[SparseVec]) -> Result<usize> {
    if sub.is_empty() && ambient.is_empty() {
        return Ok(0);
    }
    let dim = ambient
        .first()
        .or_else(|| sub.first())
        .map(|v| v.dim())
        .unwrap_or(0);
    let ambient_mat = SparseMatrix::from_columns(dim, ambient);
    let ambient_rank = ambient_mat.rank();
    // containment check: rank must not grow when a sub vector is adjoined
    for (k, v) in sub.iter().enumerate() {
        let mut cols: Vec<SparseVec> = ambient.to_vec();
        cols.push(v.clone());
        if SparseMatrix::from_columns(dim, &cols).rank() > ambient_rank {
            return Err(Error::SubNotContained(k));
        }
    }
    let sub_rank = SparseMatrix::from_columns(dim, sub).rank();
    Ok(ambient_rank - sub_rank)
}

/// A subspace given by a spanning set, with row-reduced bookkeeping for fast
/// membership tests and coordinate extraction.
#[derive(Clone, Debug)]
pub struct Span {
    dim: usize,
    /// reduced spanning vectors (echelon over leading indices)
    reduced: Vec<SparseVec>,
    /// leading index of each reduced vector
    leads: Vec<usize>,
}

impl Span {
    pub fn new(dim: usize, vectors: &[SparseVec]) -> Self {
        let mut span = Span { dim, reduced: Vec::new(), leads: Vec::new() };
        for v in vectors {
            span.insert(v.clone());
        }
        span
    }

    pub fn dim_ambient(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.reduced.len()
    }

    /// Reduces `v` against the span; returns the remainder.
    pub fn reduce(&self, mut v: SparseVec) -> SparseVec {
        loop {
            let Some(lead) = v.leading_index() else { return v };
            match self.leads.binary_search(&lead) {
                Ok(pos) => {
                    let c = v.get(lead);
                    v = v.sub(&self.reduced[pos].scale(&c));
                }
                Err(_) => return v,
            }
        }
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v.clone()).is_zero()
    }

    /// Inserts a vector; returns true if it enlarged the span.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let r = self.reduce(v);
        let Some(lead) = r.leading_index() else { return false };
        let inv = Rational::one() / r.get(lead);
        let r = r.scale(&inv);
        // keep existing vectors reduced against the new one
        for w in &mut self.reduced {
            let c = w.get(lead);
            if !c.is_zero() {
                *w = w.sub(&r.scale(&c));
            }
        }
        let pos = self.leads.binary_search(&lead).unwrap_err();
        self.leads.insert(pos, lead);
        self.reduced.insert(pos, r);
        true
    }
}

/// Incremental column solver: columns are added one at a time and kept in a
/// reduced form that remembers how each reduced vector is expressed in the
/// original columns, so many right-hand sides can be solved cheaply.
#[derive(Clone, Debug)]
pub struct SpanSolver {
    dim: usize,
    ncols: usize,
    /// (reduced ambient vector, its expression in original columns)
    reduced: Vec<(SparseVec, BTreeMap<usize, Rational>)>,
    leads: Vec<usize>,
}

impl SpanSolver {
    pub fn new(dim: usize) -> Self {
        SpanSolver { dim, ncols: 0, reduced: Vec::new(), leads: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.reduced.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Adds a column; returns false if it was already in the span.
    pub fn add_column(&mut self, v: SparseVec) -> bool {
        assert_eq!(v.dim(), self.dim);
        let j = self.ncols;
        self.ncols += 1;
        let mut expr: BTreeMap<usize, Rational> = BTreeMap::from([(j, Rational::one())]);
        let mut r = v;
        loop {
            let Some(lead) = r.leading_index() else { return false };
            match self.leads.binary_search(&lead) {
                Ok(pos) => {
                    let c = r.get(lead);
                    r = r.sub(&self.reduced[pos].0.scale(&c));
                    expr_sub(&mut expr, &self.reduced[pos].1, &c);
                }
                Err(pos) => {
                    let inv = Rational::one() / r.get(lead);
                    r = r.scale(&inv);
                    for x in expr.values_mut() {
                        *x *= &inv;
                    }
                    self.leads.insert(pos, lead);
                    self.reduced.insert(pos, (r, expr));
                    return true;
                }
            }
        }
    }

    /// Expresses `target` in the added columns, if possible.
    pub fn solve(&self, target: &SparseVec) -> Option<SparseVec> {
        let mut r = target.clone();
        let mut coords: BTreeMap<usize, Rational> = BTreeMap::new();
        loop {
            let Some(lead) = r.leading_index() else {
                let mut out = SparseVec::zero(self.ncols.max(1));
                for (i, x) in coords {
                    if !x.is_zero() {
                        out.set(i, x);
                    }
                }
                return Some(out);
            };
            let pos = self.leads.binary_search(&lead).ok()?;
            let c = r.get(lead);
            r = r.sub(&self.reduced[pos].0.scale(&c));
            for (i, x) in &self.reduced[pos].1 {
                let e = coords.entry(*i).or_insert_with(Rational::zero);
                *e += x * &c;
            }
        }
    }
}

fn expr_sub(lhs: &mut BTreeMap<usize, Rational>, rhs: &BTreeMap<usize, Rational>, scale: &Rational) {
    for (i, x) in rhs {
        let e = lhs.entry(*i).or_insert_with(Rational::zero);
        *e -= x * scale;
    }
    lhs.retain(|_, v| !v.is_zero());
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rref_identity() {
        let m = SparseMatrix::identity(2);
        let r = m.rref();
        assert_eq!(r.reduced, m);
        assert_eq!(r.pivots, vec![0, 1]);
        assert_eq!(r.rank, 2);
    }

    #[test]
    fn rref_dependent_rows() {
        let m = SparseMatrix::from_int_rows(&[&[1, 2], &[2, 4]]);
        let r = m.rref();
        assert_eq!(r.reduced, SparseMatrix::from_int_rows(&[&[1, 2], &[0, 0]]));
        assert_eq!(r.rank, 1);
    }

    #[test]
    fn rref_empty() {
        let m = SparseMatrix::zero(0, 0);
        let r = m.rref();
        assert_eq!(r.reduced, m);
        assert_eq!(r.rank, 0);
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        assert!(SparseMatrix::identity(3).kernel_basis().is_empty());
    }

    #[test]
    fn kernel_of_zero_matrix() {
        let basis = SparseMatrix::zero(3, 3).kernel_basis();
        assert_eq!(basis.len(), 3);
        for (i, v) in basis.iter().enumerate() {
            assert_eq!(v.as_unit(), Some(i));
        }
    }

    #[test]
    fn kernel_of_sum_row() {
        let m = SparseMatrix::from_int_rows(&[&[1, 1]]);
        let basis = m.kernel_basis();
        assert_eq!(basis.len(), 1);
        // proportional to (1, -1)
        let v = &basis[0];
        assert_eq!(v.get(0) + v.get(1), Rational::zero());
        assert!(!v.get(0).is_zero());
    }

    #[test]
    fn image_of_identity() {
        let basis = SparseMatrix::identity(2).image_basis();
        assert_eq!(basis.len(), 2);
        assert_eq!(basis[0].as_unit(), Some(0));
        assert_eq!(basis[1].as_unit(), Some(1));
    }

    #[test]
    fn image_of_zero_is_empty() {
        assert!(SparseMatrix::zero(3, 2).image_basis().is_empty());
    }

    #[test]
    fn image_of_single_column() {
        let m = SparseMatrix::from_int_rows(&[&[1], &[2]]);
        let basis = m.image_basis();
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0].get(0), qi(1));
        assert_eq!(basis[0].get(1), qi(2));
    }

    #[test]
    fn quotient_dims() {
        let e0 = SparseVec::unit(2, 0);
        let e1 = SparseVec::unit(2, 1);
        let both = vec![e0.clone(), e1.clone()];
        assert_eq!(quotient_dimension(&both, &both).unwrap(), 0);
        assert_eq!(quotient_dimension(&[], &both).unwrap(), 2);
        let diag = SparseVec::from_entries(2, [(0, qi(1)), (1, qi(1))]);
        assert_eq!(quotient_dimension(&[diag], &both).unwrap(), 1);
    }

    #[test]
    fn quotient_rejects_outside_vectors() {
        let e0 = SparseVec::unit(2, 0);
        let e1 = SparseVec::unit(2, 1);
        let err = quotient_dimension(&[e1], &[e0]).unwrap_err();
        assert!(err.to_string().starts_with("sub-not-contained"));
    }

    #[test]
    fn span_solver_solves_and_rejects() {
        let mut s = SpanSolver::new(3);
        assert!(s.add_column(SparseVec::from_entries(3, [(0, qi(1)), (1, qi(1))])));
        assert!(s.add_column(SparseVec::from_entries(3, [(1, qi(2))])));
        assert!(!s.add_column(SparseVec::from_entries(3, [(0, qi(2)), (1, qi(4))])));
        // e0 = col0 − (1/2) col1
        let coords = s.solve(&SparseVec::unit(3, 0)).unwrap();
        assert_eq!(coords.get(0), qi(1));
        assert_eq!(coords.get(1), qr(-1, 2));
        assert!(s.solve(&SparseVec::unit(3, 2)).is_none());
    }

    #[test]
    fn rational_io() {
        assert_eq!(format_rational(&qr(1, 2)), "1/2");
        assert_eq!(format_rational(&qi(-3)), "-3");
        assert_eq!(parse_rational("-4/6").unwrap(), qr(-2, 3));
        assert!(parse_rational("1/0").is_err());
    }

    fn arb_matrix() -> impl Strategy<Value = SparseMatrix> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-4i64..5, r * c).prop_map(move |data| {
                let rows: Vec<Vec<Rational>> = data
                    .chunks(c)
                    .map(|chunk| chunk.iter().map(|&x| qi(x)).collect())
                    .collect();
                SparseMatrix::from_rows(rows)
            })
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in arb_matrix()) {
            let cols = m.cols();
            prop_assert_eq!(m.rank() + m.kernel_basis().len(), cols);
        }

        #[test]
        fn rref_idempotent(m in arb_matrix()) {
            let r = m.rref();
            let r2 = r.reduced.rref();
            prop_assert_eq!(r.reduced, r2.reduced);
        }

        #[test]
        fn kernel_vectors_are_exact(m in arb_matrix()) {
            for v in m.kernel_basis() {
                prop_assert!(m.apply(&v).is_zero());
            }
        }
    }
}
