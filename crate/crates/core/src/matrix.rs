//! Dense matrices over a finite field, with exact elimination.
//!
//! Everything a code construction needs lives here: reduced row echelon form with
//! deterministic pivoting (first nonzero entry scanning down), rank, inversion,
//! linear solving with an explicit three-way outcome, canonical null-space bases,
//! and the two structured generators used throughout: Vandermonde and Moore.

use serde::{Deserialize, Serialize};

use crate::gf::{Field, FieldDescriptor, FiniteField};
use crate::{Error, Result};

#[derive(Clone)]
pub struct CodeMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

/// Result of solving A x = b.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Unique(Vec<u64>),
    NoSolution,
    /// A consistent system with free variables; `particular` sets them to zero.
    Underdetermined { particular: Vec<u64>, nullity: usize },
}

#[derive(Serialize, Deserialize)]
struct MatrixWire {
    field: FieldDescriptor,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl std::fmt::Debug for CodeMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "CodeMatrix {}x{} over {:?}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[r * self.cols..(r + 1) * self.cols])?;
        }
        Ok(())
    }
}

impl PartialEq for CodeMatrix {
    fn eq(&self, other: &Self) -> bool {
        *self.field == *other.field
            && self.rows == other.rows
            && self.cols == other.cols
            && self.data == other.data
    }
}
impl Eq for CodeMatrix {}

impl CodeMatrix {
    pub fn zero(field: Field, rows: usize, cols: usize) -> Self {
        CodeMatrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(field: Field, rows: &[Vec<u64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch("ragged rows".into()));
            }
            for &v in row {
                if !field.contains(v) {
                    return Err(Error::InvalidField(format!("entry {v} out of range")));
                }
                data.push(v);
            }
        }
        Ok(CodeMatrix {
            field,
            rows: r,
            cols: c,
            data,
        })
    }

    pub fn from_flat(field: Field, rows: usize, cols: usize, data: Vec<u64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|&v| !field.contains(v)) {
            return Err(Error::InvalidField("entry out of range".into()));
        }
        Ok(CodeMatrix {
            field,
            rows,
            cols,
            data,
        })
    }

    /// Vandermonde on the given evaluation points: entry (i, j) = points[j]^i,
    /// with 0^0 = 1.
    pub fn vandermonde(field: Field, rows: usize, points: &[u64]) -> Result<Self> {
        let mut m = Self::zero(field.clone(), rows, points.len());
        for (j, &x) in points.iter().enumerate() {
            if !field.contains(x) {
                return Err(Error::InvalidField(format!("point {x} out of range")));
            }
            let mut cur = 1u64;
            for i in 0..rows {
                m.data[i * points.len() + j] = cur;
                cur = field.mul(cur, x);
            }
        }
        Ok(m)
    }

    /// Moore matrix on the given points: entry (i, j) = points[j]^(q^i) for the
    /// field's designated subfield GF(q).
    pub fn moore(field: Field, rows: usize, points: &[u64]) -> Result<Self> {
        let mut m = Self::zero(field.clone(), rows, points.len());
        for (j, &x) in points.iter().enumerate() {
            for i in 0..rows {
                m.data[i * points.len() + j] = field.frobenius(x, i as u32)?;
            }
        }
        Ok(m)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        debug_assert!(self.field.contains(v));
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<u64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn data(&self) -> &[u64] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if *self.field == *other.field {
            Ok(())
        } else {
            Err(Error::MixedFields)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} + {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| self.field.add(a, b))
            .collect();
        Ok(CodeMatrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("shape mismatch in sub".into()));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| self.field.sub(a, b))
            .collect();
        Ok(CodeMatrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zero(self.field.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b == 0 {
                        continue;
                    }
                    let cur = out.get(i, j);
                    out.set(i, j, self.field.add(cur, self.field.mul(a, b)));
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[u64]) -> Result<Vec<u64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        let mut out = vec![0u64; self.rows];
        for i in 0..self.rows {
            let mut acc = 0u64;
            for (j, &x) in v.iter().enumerate() {
                if x != 0 {
                    acc = self.field.add(acc, self.field.mul(self.get(i, j), x));
                }
            }
            out[i] = acc;
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[u64]) -> Result<Vec<u64>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} rows",
                v.len(),
                self.rows
            )));
        }
        let mut out = vec![0u64; self.cols];
        for (i, &x) in v.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for j in 0..self.cols {
                let m = self.get(i, j);
                if m != 0 {
                    out[j] = self.field.add(out[j], self.field.mul(x, m));
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: u64) -> Self {
        let data = self.data.iter().map(|&a| self.field.mul(a, c)).collect();
        CodeMatrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zero(self.field.clone(), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn select_columns(&self, cols: &[usize]) -> Result<Self> {
        let mut out = Self::zero(self.field.clone(), self.rows, cols.len());
        for (jj, &j) in cols.iter().enumerate() {
            if j >= self.cols {
                return Err(Error::DimensionMismatch(format!("column {j} out of range")));
            }
            for i in 0..self.rows {
                out.set(i, jj, self.get(i, j));
            }
        }
        Ok(out)
    }

    pub fn select_rows(&self, rows: &[usize]) -> Result<Self> {
        let mut out = Self::zero(self.field.clone(), rows.len(), self.cols);
        for (ii, &i) in rows.iter().enumerate() {
            if i >= self.rows {
                return Err(Error::DimensionMismatch(format!("row {i} out of range")));
            }
            for j in 0..self.cols {
                out.set(ii, j, self.get(i, j));
            }
        }
        Ok(out)
    }

    pub fn hstack(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch("hstack row mismatch".into()));
        }
        let mut out = Self::zero(self.field.clone(), self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j));
            }
        }
        Ok(out)
    }

    pub fn vstack(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch("vstack column mismatch".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(CodeMatrix {
            field: self.field.clone(),
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Block-diagonal composition of equally-shaped blocks.
    pub fn block_diag(blocks: &[&CodeMatrix]) -> Result<Self> {
        let first = blocks.first().ok_or_else(|| {
            Error::DimensionMismatch("block_diag needs at least one block".into())
        })?;
        let field = first.field.clone();
        let total_r: usize = blocks.iter().map(|b| b.rows).sum();
        let total_c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zero(field.clone(), total_r, total_c);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            if *b.field != *field {
                return Err(Error::MixedFields);
            }
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.get(i, j));
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        Ok(out)
    }

    /// Apply an entry map, reinterpreting the result over a (possibly different) field.
    pub fn map_entries(&self, field: Field, f: impl Fn(u64) -> Result<u64>) -> Result<Self> {
        let mut data = Vec::with_capacity(self.data.len());
        for &v in &self.data {
            data.push(f(v)?);
        }
        Self::from_flat(field, self.rows, self.cols, data)
    }

    /// Reduced row echelon form. Returns the reduced matrix and the pivot column
    /// of each nonzero row, in order. Pivot choice is the first nonzero entry
    /// scanning down the column, so the output is deterministic.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let f = m.field.clone();
        let mut pivots = Vec::new();
        let mut rank = 0usize;
        for col in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let mut pivot = None;
            for r in rank..m.rows {
                if m.get(r, col) != 0 {
                    pivot = Some(r);
                    break;
                }
            }
            let Some(pr) = pivot else { continue };
            if pr != rank {
                for c in 0..m.cols {
                    let tmp = m.get(rank, c);
                    m.set(rank, c, m.get(pr, c));
                    m.set(pr, c, tmp);
                }
            }
            let inv = f.inv(m.get(rank, col)).expect("pivot nonzero");
            for c in 0..m.cols {
                m.set(rank, c, f.mul(m.get(rank, c), inv));
            }
            for r in 0..m.rows {
                if r != rank && m.get(r, col) != 0 {
                    let factor = m.get(r, col);
                    for c in 0..m.cols {
                        let delta = f.mul(factor, m.get(rank, c));
                        m.set(r, c, f.sub(m.get(r, c), delta));
                    }
                }
            }
            pivots.push(col);
            rank += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("inverse of non-square matrix".into()));
        }
        let aug = self.hstack(&Self::identity(self.field.clone(), self.rows))?;
        let (red, pivots) = aug.rref();
        if pivots.len() != self.rows || pivots.iter().any(|&p| p >= self.rows) {
            return Err(Error::SingularMatrix);
        }
        red.select_columns(&(self.rows..2 * self.rows).collect::<Vec<_>>())
    }

    /// Solve A x = b exactly.
    pub fn solve(&self, b: &[u64]) -> Result<SolveOutcome> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "rhs of length {} against {} rows",
                b.len(),
                self.rows
            )));
        }
        let rhs = Self::from_rows(self.field.clone(), &b.iter().map(|&v| vec![v]).collect::<Vec<_>>())?;
        let aug = self.hstack(&rhs)?;
        let (red, pivots) = aug.rref();
        if pivots.last().is_some_and(|&p| p == self.cols) {
            return Ok(SolveOutcome::NoSolution);
        }
        let mut x = vec![0u64; self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = red.get(r, self.cols);
        }
        if pivots.len() == self.cols {
            Ok(SolveOutcome::Unique(x))
        } else {
            Ok(SolveOutcome::Underdetermined {
                particular: x,
                nullity: self.cols - pivots.len(),
            })
        }
    }

    /// Canonical basis of the right null space, one row per basis vector: the
    /// standard free-variable construction read off the reduced echelon form.
    pub fn null_space_basis(&self) -> Self {
        let (red, pivots) = self.rref();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = Some(r);
            }
            v
        };
        let free: Vec<usize> = (0..self.cols).filter(|c| pivot_set[*c].is_none()).collect();
        let mut out = Self::zero(self.field.clone(), free.len(), self.cols);
        for (k, &fc) in free.iter().enumerate() {
            out.set(k, fc, 1);
            for (c, slot) in pivot_set.iter().enumerate() {
                if let Some(r) = slot {
                    out.set(k, c, self.field.neg(red.get(*r, fc)));
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let wire = MatrixWire {
            field: self.field.descriptor(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.clone(),
        };
        serde_json::to_string_pretty(&wire).expect("matrix serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let wire: MatrixWire = serde_json::from_str(s)?;
        let field = FiniteField::from_descriptor(&wire.field)?;
        Self::from_flat(field, wire.rows, wire.cols, wire.data)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f7() -> Field {
        FiniteField::gf(7, 1).unwrap()
    }

    fn f8() -> Field {
        FiniteField::gf(2, 3).unwrap()
    }

    #[test]
    fn vandermonde_over_gf7_matches_hand_computation() {
        let m = CodeMatrix::vandermonde(f7(), 3, &[1, 2, 3]).unwrap();
        assert_eq!(m.row(0), &[1, 1, 1]);
        assert_eq!(m.row(1), &[1, 2, 3]);
        assert_eq!(m.row(2), &[1, 4, 2]);
        // zero point contributes the 0^0 = 1 top entry
        let z = CodeMatrix::vandermonde(f7(), 2, &[0, 5]).unwrap();
        assert_eq!(z.row(0), &[1, 1]);
        assert_eq!(z.row(1), &[0, 5]);
    }

    #[test]
    fn vandermonde_on_distinct_points_is_invertible() {
        let m = CodeMatrix::vandermonde(f8(), 4, &[1, 2, 3, 4]).unwrap();
        assert_eq!(m.rank(), 4);
        let inv = m.inverse().unwrap();
        let prod = m.mul(&inv).unwrap();
        assert_eq!(prod, CodeMatrix::identity(f8(), 4));
    }

    #[test]
    fn rref_produces_identity_leading_block() {
        let m = CodeMatrix::from_rows(f7(), &[vec![2, 1, 3], vec![4, 2, 0], vec![1, 5, 6]]).unwrap();
        let (red, pivots) = m.rref();
        assert_eq!(pivots, vec![0, 1, 2]);
        assert_eq!(red, CodeMatrix::identity(f7(), 3));
    }

    #[test]
    fn solve_distinguishes_all_three_outcomes() {
        // unique
        let a = CodeMatrix::from_rows(f7(), &[vec![1, 1], vec![1, 2]]).unwrap();
        match a.solve(&[3, 5]).unwrap() {
            SolveOutcome::Unique(x) => {
                assert_eq!(a.mul_vec(&x).unwrap(), vec![3, 5]);
                assert_eq!(x, vec![1, 2]);
            }
            other => panic!("expected unique, got {other:?}"),
        }
        // inconsistent
        let b = CodeMatrix::from_rows(f7(), &[vec![1, 1], vec![2, 2]]).unwrap();
        assert_eq!(b.solve(&[1, 3]).unwrap(), SolveOutcome::NoSolution);
        // underdetermined but consistent
        match b.solve(&[1, 2]).unwrap() {
            SolveOutcome::Underdetermined { particular, nullity } => {
                assert_eq!(nullity, 1);
                assert_eq!(b.mul_vec(&particular).unwrap(), vec![1, 2]);
            }
            other => panic!("expected underdetermined, got {other:?}"),
        }
    }

    #[test]
    fn random_square_systems_round_trip() {
        let f = f8();
        let mut state = 424242u64;
        let mut next = move |bound: u64| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) % bound
        };
        let mut solved = 0;
        for _ in 0..1000 {
            let n = 1 + (next(4) as usize);
            let mut rows = Vec::new();
            for _ in 0..n {
                rows.push((0..n).map(|_| next(8)).collect::<Vec<_>>());
            }
            let a = CodeMatrix::from_rows(f.clone(), &rows).unwrap();
            let x: Vec<u64> = (0..n).map(|_| next(8)).collect();
            let b = a.mul_vec(&x).unwrap();
            match a.solve(&b).unwrap() {
                SolveOutcome::Unique(y) => {
                    assert_eq!(y, x);
                    assert_eq!(a.rank(), n);
                    let inv = a.inverse().unwrap();
                    assert_eq!(inv.mul_vec(&b).unwrap(), x);
                    solved += 1;
                }
                SolveOutcome::Underdetermined { particular, .. } => {
                    assert_eq!(a.mul_vec(&particular).unwrap(), b);
                    assert!(a.rank() < n);
                    assert!(a.inverse().is_err());
                }
                SolveOutcome::NoSolution => panic!("consistent by construction"),
            }
        }
        assert!(solved > 500);
    }

    #[test]
    fn null_space_vectors_annihilate_and_span() {
        let f = f7();
        let a = CodeMatrix::from_rows(f.clone(), &[vec![1, 2, 3, 4], vec![0, 1, 1, 1]]).unwrap();
        let ns = a.null_space_basis();
        assert_eq!(ns.rows(), 2);
        for i in 0..ns.rows() {
            let v = ns.row(i).to_vec();
            assert_eq!(a.mul_vec(&v).unwrap(), vec![0, 0]);
        }
        assert_eq!(ns.rank(), 2);
        // rank-nullity across random matrices
        let mut state = 7u64;
        let mut next = move |bound: u64| {
            state = state.wrapping_mul(2862933555777941757).wrapping_add(3037000493);
            (state >> 33) % bound
        };
        for _ in 0..200 {
            let r = 1 + next(3) as usize;
            let c = 1 + next(5) as usize;
            let rows: Vec<Vec<u64>> = (0..r).map(|_| (0..c).map(|_| next(7)).collect()).collect();
            let m = CodeMatrix::from_rows(f.clone(), &rows).unwrap();
            let ns = m.null_space_basis();
            assert_eq!(m.rank() + ns.rows(), c);
            for i in 0..ns.rows() {
                assert!(m.mul_vec(ns.row(i)).unwrap().iter().all(|&v| v == 0));
            }
        }
    }

    #[test]
    fn moore_matrix_uses_subfield_powers() {
        let f = FiniteField::with_subfield(2, 1, 4).unwrap(); // GF(16) over GF(2)
        let m = CodeMatrix::moore(f.clone(), 3, &[2, 3]).unwrap();
        for (i, row) in (0..3).map(|i| (i, m.row(i).to_vec())) {
            assert_eq!(row[0], f.frobenius(2, i as u32).unwrap());
            assert_eq!(row[1], f.frobenius(3, i as u32).unwrap());
        }
        // a Moore matrix on an independent set has full rank
        let big = FiniteField::with_subfield(2, 1, 4).unwrap();
        let pts = [1u64, 2, 4, 8];
        assert!(big.linearly_independent_over_subfield(&pts).unwrap());
        let sq = CodeMatrix::moore(big, 4, &pts).unwrap();
        assert_eq!(sq.rank(), 4);
    }

    #[test]
    fn moore_rank_tracks_subfield_independence() {
        let f = FiniteField::with_subfield(2, 1, 4).unwrap();
        // {1, 2, 3} is dependent over GF(2) since 1 + 2 = 3
        let m = CodeMatrix::moore(f, 3, &[1, 2, 3]).unwrap();
        assert!(m.rank() < 3);
    }

    #[test]
    fn block_diag_and_stacking_shapes() {
        let f = f7();
        let a = CodeMatrix::identity(f.clone(), 2);
        let b = CodeMatrix::from_rows(f.clone(), &[vec![3]]).unwrap();
        let d = CodeMatrix::block_diag(&[&a, &b]).unwrap();
        assert_eq!((d.rows(), d.cols()), (3, 3));
        assert_eq!(d.get(2, 2), 3);
        assert_eq!(d.get(0, 2), 0);
        let h = a.hstack(&a).unwrap();
        assert_eq!((h.rows(), h.cols()), (2, 4));
        let v = a.vstack(&a).unwrap();
        assert_eq!((v.rows(), v.cols()), (4, 2));
        assert_eq!(v.rank(), 2);
    }

    #[test]
    fn json_round_trip_preserves_matrix_and_field() {
        let m = CodeMatrix::vandermonde(f8(), 3, &[1, 2, 3]).unwrap();
        let s = m.to_json();
        let back = CodeMatrix::from_json(&s).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn mixed_field_matrix_ops_are_rejected() {
        let a = CodeMatrix::identity(f7(), 2);
        let b = CodeMatrix::identity(f8(), 2);
        assert!(matches!(a.add(&b), Err(Error::MixedFields)));
        assert!(matches!(a.mul(&b), Err(Error::MixedFields)));
    }
}
