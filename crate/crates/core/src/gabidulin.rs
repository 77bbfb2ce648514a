//! Gabidulin codes over GF(q^M): linear codes whose parity-check matrix is a
//! Moore matrix on GF(q)-independent locators.
//!
//! The locators always parameterize the parity check, not the generator. The
//! property that earns these codes their keep here: multiplying codewords on the
//! right by an invertible matrix over GF(q) yields another Gabidulin code, with
//! locators one can write down in closed form. Puncturing machinery leans on
//! that identity, so it is exposed directly and tested exhaustively.

use crate::gf::Field;
use crate::matrix::CodeMatrix;
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct GabidulinCode {
    field: Field,
    locators: Vec<u64>,
    k: usize,
    h: CodeMatrix,
    g: CodeMatrix,
}

impl GabidulinCode {
    /// Gab(n, k) on the given locators, which must be linearly independent over
    /// the field's designated subfield. The parity check is moore(locators, n-k).
    pub fn new(field: Field, locators: Vec<u64>, k: usize) -> Result<Self> {
        let n = locators.len();
        let cap_m = field.ext_degree()? as usize;
        if n > cap_m {
            return Err(Error::LengthExceedsDegree);
        }
        if k > n {
            return Err(Error::InvalidParameters(format!(
                "dimension {k} exceeds length {n}"
            )));
        }
        if !field.linearly_independent_over_subfield(&locators)? {
            return Err(Error::DependentLocators);
        }
        let h = CodeMatrix::moore(field.clone(), n - k, &locators)?;
        let g = h.null_space_basis();
        debug_assert_eq!(g.rows(), k);
        Ok(GabidulinCode {
            field,
            locators,
            k,
            h,
            g,
        })
    }

    /// The standard choice of locators: the first n powers of x. These are
    /// coordinate-basis vectors of the expansion over the designated subfield,
    /// so their independence never needs a search.
    pub fn with_polynomial_basis(field: Field, n: usize, k: usize) -> Result<Self> {
        field.subfield()?;
        let x = if field.degree() > 1 {
            field.characteristic()
        } else {
            1
        };
        let locators: Vec<u64> = (0..n).map(|j| field.pow(x, j as u128)).collect();
        Self::new(field, locators, k)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn length(&self) -> usize {
        self.locators.len()
    }

    pub fn dimension(&self) -> usize {
        self.k
    }

    pub fn locators(&self) -> &[u64] {
        &self.locators
    }

    /// Moore parity check: row i holds the q^i-th Frobenius powers of the locators.
    pub fn parity_check(&self) -> &CodeMatrix {
        &self.h
    }

    /// Canonical generator: the null-space basis of the Moore parity check.
    pub fn generator(&self) -> &CodeMatrix {
        &self.g
    }

    pub fn encode(&self, message: &[u64]) -> Result<Vec<u64>> {
        if message.len() != self.k {
            return Err(Error::DimensionMismatch(format!(
                "message of length {} for dimension {}",
                message.len(),
                self.k
            )));
        }
        self.g.vec_mul(message)
    }

    pub fn is_codeword(&self, word: &[u64]) -> Result<bool> {
        Ok(self.h.mul_vec(word)?.iter().all(|&v| v == 0))
    }

    /// The Gabidulin code whose codeword set is exactly {c * A : c in self}, for
    /// an invertible A over the designated subfield. Writing b for the locator
    /// row, the new locators satisfy A * b'^T = b^T: moving a parity identity
    /// sum_j b_j^(q^i) c_j = 0 through the substitution c = y * A^(-1) pushes
    /// A^(-1) onto the locator column, with Frobenius passing through the
    /// subfield entries.
    pub fn locator_transform(&self, a: &CodeMatrix) -> Result<GabidulinCode> {
        let n = self.locators.len();
        if a.rows() != n || a.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "{n}-column code against a {}x{} transform",
                a.rows(),
                a.cols()
            )));
        }
        let sub = self.field.subfield()?;
        if **a.field() != *sub {
            return Err(Error::EntriesNotInSubfield);
        }
        let a_inv = a.inverse().map_err(|_| Error::SingularTransform)?;
        let mut moved = vec![0u64; n];
        for (t, slot) in moved.iter_mut().enumerate() {
            let mut acc = 0u64;
            for (j, &b) in self.locators.iter().enumerate() {
                let coef = self.field.embed_from_subfield(a_inv.get(t, j))?;
                acc = self.field.add(acc, self.field.mul(coef, b));
            }
            *slot = acc;
        }
        GabidulinCode::new(self.field.clone(), moved, self.k)
    }
}

/// Apply an invertible subfield matrix to a locator row the same way
/// locator_transform does: out^T = a^(-1) * locators^T.
pub fn transform_locators(field: &Field, locators: &[u64], a: &CodeMatrix) -> Result<Vec<u64>> {
    let n = locators.len();
    if a.rows() != n || a.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "{n} locators against a {}x{} transform",
            a.rows(),
            a.cols()
        )));
    }
    let sub = field.subfield()?;
    if **a.field() != *sub {
        return Err(Error::EntriesNotInSubfield);
    }
    let a_inv = a.inverse().map_err(|_| Error::SingularTransform)?;
    let mut out = vec![0u64; n];
    for (t, slot) in out.iter_mut().enumerate() {
        let mut acc = 0u64;
        for (j, &b) in locators.iter().enumerate() {
            let coef = field.embed_from_subfield(a_inv.get(t, j))?;
            acc = field.add(acc, field.mul(coef, b));
        }
        *slot = acc;
    }
    Ok(out)
}

/// Embed a subfield matrix into the extension field entrywise.
pub fn embed_matrix(big: &Field, m: &CodeMatrix) -> Result<CodeMatrix> {
    let sub = big.subfield()?;
    if **m.field() != *sub {
        return Err(Error::EntriesNotInSubfield);
    }
    m.map_entries(big.clone(), |v| big.embed_from_subfield(v))
}
