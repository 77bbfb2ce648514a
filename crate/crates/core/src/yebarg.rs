//! Single-group MDS array codes with bandwidth-optimal single-node repair.
//! Row a of a codeword is a Reed-Solomon codeword on evaluation points picked
//! per column by the base-b digits of a, so the rows sharing all digits but
//! the failed column's form blocks whose column sums satisfy one joint
//! Vandermonde system: d helpers each ship ell/b block sums instead of their
//! whole column, for d*ell/b symbols against the naive (n-r)*ell.

use serde::{Deserialize, Serialize};

use crate::code::{ArrayCodeword, RepairTranscript};
use crate::gf::Field;
use crate::matrix::{CodeMatrix, SolveOutcome};
use crate::mds::LinearCode;
use crate::util::digits_base;
use crate::{Error, Result};

/// An [n, n-r] array code with subpacketization b^n, b = d + 1 - (n - r),
/// repairing any single column from d helpers at the cut-set bandwidth.
#[derive(Debug, Clone)]
pub struct YeBargCode {
    field: Field,
    n: usize,
    r: usize,
    d: usize,
    b: usize,
    ell: usize,
    betas: Vec<Vec<u64>>,
    rows: Vec<LinearCode>,
}

/// Shape of the evaluation-point table, serialized into code descriptors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BetaTable {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<u64>>,
}

impl YeBargCode {
    /// Build the code. Without an explicit table the evaluation points are
    /// powers of a generator, laid out so the point for digit v at column c
    /// is g^(c + v*n); when the field has exactly bn elements the powers
    /// cannot all be distinct, so the elements are used in integer order
    /// instead.
    pub fn new(field: Field, n: usize, r: usize, d: usize, betas: Option<Vec<Vec<u64>>>) -> Result<Self> {
        if n < 2 || r == 0 || r >= n {
            return Err(Error::InvalidParameters(format!(
                "need 0 < r < n with n >= 2, got n={n} r={r}"
            )));
        }
        if d < n - r || d > n - 1 {
            return Err(Error::InvalidHelpers(format!(
                "helper count must satisfy n-r <= d <= n-1, got d={d} for n={n} r={r}"
            )));
        }
        let b = d + 1 - (n - r);
        let bn = (b * n) as u64;
        if field.size() < bn {
            return Err(Error::FieldTooSmall(format!(
                "{} elements for a table of {bn} distinct points",
                field.size()
            )));
        }
        let betas = match betas {
            Some(table) => {
                if table.len() != b || table.iter().any(|row| row.len() != n) {
                    return Err(Error::DimensionMismatch(format!(
                        "point table must be {b}x{n}"
                    )));
                }
                for row in &table {
                    for &v in row {
                        if !field.contains(v) {
                            return Err(Error::InvalidField(format!(
                                "table entry {v} outside the field"
                            )));
                        }
                    }
                }
                table
            }
            None if field.size() == bn => (0..b)
                .map(|v| (0..n).map(|c| (v * n + c) as u64).collect())
                .collect(),
            None => {
                let g = field.generator();
                (0..b)
                    .map(|v| {
                        (0..n)
                            .map(|c| field.pow(g, (c + v * n) as u128))
                            .collect()
                    })
                    .collect()
            }
        };
        let mut seen = std::collections::BTreeSet::new();
        for row in &betas {
            for &v in row {
                if !seen.insert(v) {
                    return Err(Error::DuplicateBeta);
                }
            }
        }
        let ell = b.checked_pow(n as u32).ok_or_else(|| {
            Error::TooLarge(format!("subpacketization {b}^{n} overflows"))
        })?;
        let mut rows = Vec::with_capacity(ell);
        for a in 0..ell {
            let points: Vec<u64> = digits_base(a, b, n)
                .iter()
                .enumerate()
                .map(|(c, &v)| betas[v][c])
                .collect();
            rows.push(LinearCode::rs_code(field.clone(), &points, n - r)?);
        }
        Ok(YeBargCode {
            field,
            n,
            r,
            d,
            b,
            ell,
            betas,
            rows,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn length(&self) -> usize {
        self.n
    }

    pub fn local_parities(&self) -> usize {
        self.r
    }

    pub fn repair_d(&self) -> usize {
        self.d
    }

    /// Digit radix b = d + 1 - (n - r).
    pub fn radix(&self) -> usize {
        self.b
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn beta(&self, digit: usize, col: usize) -> u64 {
        self.betas[digit][col]
    }

    pub fn betas(&self) -> &[Vec<u64>] {
        &self.betas
    }

    pub fn beta_table(&self) -> BetaTable {
        BetaTable {
            rows: self.b,
            cols: self.n,
            data: self.betas.clone(),
        }
    }

    /// The Reed-Solomon code of row a.
    pub fn row_code(&self, a: usize) -> Result<&LinearCode> {
        self.rows.get(a).ok_or(Error::RowOutOfRange)
    }

    /// Evaluation points of row a, one per column.
    pub fn row_points(&self, a: usize) -> Result<Vec<u64>> {
        if a >= self.ell {
            return Err(Error::RowOutOfRange);
        }
        Ok(digits_base(a, self.b, self.n)
            .iter()
            .enumerate()
            .map(|(c, &v)| self.betas[v][c])
            .collect())
    }

    pub fn encode(&self, message: &CodeMatrix) -> Result<ArrayCodeword> {
        if **message.field() != *self.field {
            return Err(Error::MixedFields);
        }
        if message.rows() != self.ell || message.cols() != self.n - self.r {
            return Err(Error::DimensionMismatch(format!(
                "message of shape {}x{} for a code expecting {}x{}",
                message.rows(),
                message.cols(),
                self.ell,
                self.n - self.r
            )));
        }
        let mut rows = Vec::with_capacity(self.ell);
        for a in 0..self.ell {
            rows.push(self.rows[a].encode(message.row(a))?);
        }
        ArrayCodeword::new(self.field.clone(), rows)
    }

    pub fn is_codeword(&self, word: &ArrayCodeword) -> Result<bool> {
        self.check_shape(word)?;
        for a in 0..self.ell {
            if !self.rows[a].is_codeword(word.row(a))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn extract_message(&self, word: &ArrayCodeword) -> Result<CodeMatrix> {
        self.check_shape(word)?;
        let mut rows = Vec::with_capacity(self.ell);
        for a in 0..self.ell {
            rows.push(self.rows[a].message_from_codeword(word.row(a))?);
        }
        CodeMatrix::from_rows(self.field.clone(), &rows)
    }

    /// Rebuild every erased column by per-row erasure decoding. Values stored
    /// at erased positions are ignored.
    pub fn erasure_decode_columns(
        &self,
        word: &ArrayCodeword,
        erased: &[usize],
    ) -> Result<ArrayCodeword> {
        self.check_shape(word)?;
        if erased.iter().any(|&c| c >= self.n) {
            return Err(Error::InvalidParameters("erased column out of range".into()));
        }
        let mut rows = Vec::with_capacity(self.ell);
        for a in 0..self.ell {
            let mut masked: Vec<Option<u64>> = word.row(a).iter().map(|&v| Some(v)).collect();
            for &c in erased {
                masked[c] = None;
            }
            rows.push(self.rows[a].erasure_decode(&masked).map_err(|e| match e {
                Error::Unrecoverable { .. } => Error::Unrecoverable { row: Some(a) },
                other => other,
            })?);
        }
        ArrayCodeword::new(self.field.clone(), rows)
    }

    /// Rebuild column `failed` from exactly d helper columns. Each helper
    /// contributes its ell/b block sums; the failed entries of every block,
    /// together with the non-helper block sums, are the r unknowns of a
    /// Vandermonde system on distinct points.
    pub fn repair_node(
        &self,
        word: &ArrayCodeword,
        failed: usize,
        helpers: &[usize],
    ) -> Result<(Vec<u64>, RepairTranscript)> {
        self.check_shape(word)?;
        if failed >= self.n {
            return Err(Error::InvalidParameters(format!(
                "failed column {failed} out of range"
            )));
        }
        if helpers.len() != self.d {
            return Err(Error::WrongHelperCount {
                expected: self.d,
                got: helpers.len(),
            });
        }
        let mut helper_sorted = helpers.to_vec();
        helper_sorted.sort_unstable();
        helper_sorted.dedup();
        if helper_sorted.len() != self.d {
            return Err(Error::InvalidHelpers("repeated helper column".into()));
        }
        if helper_sorted.contains(&failed) {
            return Err(Error::HelperContainsFailed);
        }
        if helper_sorted.iter().any(|&j| j >= self.n) {
            return Err(Error::InvalidHelpers("helper column out of range".into()));
        }
        let bystanders: Vec<usize> = (0..self.n)
            .filter(|&j| j != failed && !helper_sorted.contains(&j))
            .collect();

        let f = &self.field;
        let stride = self.b.pow(failed as u32);
        let blocks = self.ell / self.b;
        let mut column = vec![0u64; self.ell];
        for z in 0..blocks {
            // Rows of this block: the digit at `failed` sweeps 0..b with the
            // other digits frozen.
            let low = z % stride;
            let high = z / stride;
            let member = |v: usize| low + stride * (v + self.b * high);
            let shared_digits = digits_base(member(0), self.b, self.n);

            // One equation per parity power t; unknowns are the b failed
            // entries followed by the bystander block sums.
            let width = self.b + bystanders.len();
            debug_assert_eq!(width, self.r);
            let mut system = CodeMatrix::zero(f.clone(), self.r, width);
            for v in 0..self.b {
                let point = self.betas[v][failed];
                for t in 0..self.r {
                    system.set(t, v, f.pow(point, t as u128));
                }
            }
            for (u, &j) in bystanders.iter().enumerate() {
                let point = self.betas[shared_digits[j]][j];
                for t in 0..self.r {
                    system.set(t, self.b + u, f.pow(point, t as u128));
                }
            }
            let mut rhs = vec![0u64; self.r];
            for &j in &helper_sorted {
                let point = self.betas[shared_digits[j]][j];
                let mut sum = 0u64;
                for v in 0..self.b {
                    sum = f.add(sum, word.get(member(v), j));
                }
                for (t, slot) in rhs.iter_mut().enumerate() {
                    *slot = f.add(*slot, f.mul(f.pow(point, t as u128), sum));
                }
            }
            let rhs: Vec<u64> = rhs.into_iter().map(|v| f.neg(v)).collect();
            let solution = match system.solve(&rhs)? {
                SolveOutcome::Unique(x) => x,
                _ => return Err(Error::SingularMatrix),
            };
            for v in 0..self.b {
                column[member(v)] = solution[v];
            }
        }

        let (num, den) = RepairTranscript::cut_set_bound(1, self.d, self.ell, self.n, self.r);
        let transcript = RepairTranscript::new(
            vec![failed],
            helper_sorted,
            vec![blocks as u64; self.d],
            num,
            den,
            true,
            f,
        );
        Ok((column, transcript))
    }

    fn check_shape(&self, word: &ArrayCodeword) -> Result<()> {
        if **word.field() != *self.field {
            return Err(Error::MixedFields);
        }
        if word.rows() != self.ell || word.cols() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "codeword of shape {}x{} for a code expecting {}x{}",
                word.rows(),
                word.cols(),
                self.ell,
                self.n
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FiniteField;
    use crate::util::combinations;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_codeword(code: &YeBargCode, rng: &mut ChaCha8Rng) -> ArrayCodeword {
        let k = code.length() - code.local_parities();
        let mut message = CodeMatrix::zero(code.field().clone(), code.ell(), k);
        for i in 0..code.ell() {
            for j in 0..k {
                message.set(i, j, rng.gen_range(0..code.field().size()));
            }
        }
        code.encode(&message).unwrap()
    }

    #[test]
    fn reference_shape_and_row_codes() {
        let f = FiniteField::gf(2, 6).unwrap();
        let code = YeBargCode::new(f.clone(), 4, 2, 3, None).unwrap();
        assert_eq!(code.radix(), 2);
        assert_eq!(code.ell(), 16);
        // g^(c + v*n) layout: digit v = 1 at column c picks up a factor g^4.
        let g = f.generator();
        assert_eq!(code.beta(0, 0), 1);
        assert_eq!(code.beta(0, 3), f.pow(g, 3));
        assert_eq!(code.beta(1, 0), f.pow(g, 4));
        assert_eq!(code.beta(1, 3), f.pow(g, 7));
        // Row 0 evaluates on the digit-0 points, the last row on digit-1.
        assert_eq!(code.row_points(0).unwrap(), code.betas()[0]);
        assert_eq!(code.row_points(15).unwrap(), code.betas()[1]);
        // a = 11 = 1 + 2 + 8 has digits (1, 1, 0, 1).
        assert_eq!(
            code.row_points(11).unwrap(),
            vec![code.beta(1, 0), code.beta(1, 1), code.beta(0, 2), code.beta(1, 3)]
        );
        for a in 0..code.ell() {
            assert!(code.row_code(a).unwrap().certify_mds());
        }
        assert!(code.row_code(16).is_err());
    }

    #[test]
    fn build_rejections() {
        let f = FiniteField::gf(2, 6).unwrap();
        assert!(matches!(
            YeBargCode::new(f.clone(), 4, 2, 4, None),
            Err(Error::InvalidHelpers(_))
        ));
        assert!(matches!(
            YeBargCode::new(f.clone(), 4, 2, 1, None),
            Err(Error::InvalidHelpers(_))
        ));
        // bn = 12 > 8 elements.
        let small = FiniteField::gf(2, 3).unwrap();
        assert!(matches!(
            YeBargCode::new(small, 4, 3, 3, None),
            Err(Error::FieldTooSmall(_))
        ));
        let dup = vec![vec![1, 2, 3, 4], vec![5, 6, 7, 1]];
        assert!(matches!(
            YeBargCode::new(f.clone(), 4, 2, 3, Some(dup)),
            Err(Error::DuplicateBeta)
        ));
        let ragged = vec![vec![1, 2, 3], vec![4, 5, 6, 7]];
        assert!(matches!(
            YeBargCode::new(f, 4, 2, 3, Some(ragged)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn exact_field_uses_every_element() {
        let f = FiniteField::gf(2, 3).unwrap();
        let code = YeBargCode::new(f, 4, 2, 3, None).unwrap();
        let mut all: Vec<u64> = code.betas().iter().flatten().copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..8).collect::<Vec<u64>>());
        for a in 0..code.ell() {
            assert!(code.row_code(a).unwrap().certify_mds());
        }
    }

    #[test]
    fn encode_round_trips() {
        let f = FiniteField::gf(2, 6).unwrap();
        let code = YeBargCode::new(f.clone(), 4, 2, 3, None).unwrap();
        let zero = CodeMatrix::zero(f.clone(), 16, 2);
        let zero_cw = code.encode(&zero).unwrap();
        assert!(zero_cw.column(0).iter().all(|&v| v == 0));
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let cw = random_codeword(&code, &mut rng);
        assert!(code.is_codeword(&cw).unwrap());

        // Any r = 2 column erasures decode back to the same array.
        for mask in combinations(4, 2) {
            let mut damaged = cw.clone();
            for &c in &mask {
                damaged.set_column(c, &vec![0; 16]).unwrap();
            }
            assert_eq!(code.erasure_decode_columns(&damaged, &mask).unwrap(), cw);
        }
        // Three erasures exceed the redundancy.
        assert!(matches!(
            code.erasure_decode_columns(&cw, &[0, 1, 2]),
            Err(Error::Unrecoverable { row: Some(_) })
        ));
    }

    #[test]
    fn repair_every_column_at_bound() {
        let f = FiniteField::gf(2, 6).unwrap();
        let code = YeBargCode::new(f, 4, 2, 3, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let cw = random_codeword(&code, &mut rng);
            for failed in 0..4 {
                let helpers: Vec<usize> = (0..4).filter(|&j| j != failed).collect();
                // The repair must not read the failed column: feed junk.
                let mut damaged = cw.clone();
                damaged.set_column(failed, &vec![5; 16]).unwrap();
                let (column, transcript) =
                    code.repair_node(&damaged, failed, &helpers).unwrap();
                assert_eq!(column, cw.column(failed));
                assert_eq!(transcript.total, 24);
                assert_eq!(transcript.per_helper, vec![8, 8, 8]);
                assert!(transcript.meets_bound_exactly());
                assert!(transcript.regenerating);
            }
        }
    }

    #[test]
    fn repair_with_fewer_helpers_than_survivors() {
        // n=5, r=3, d=3: b=2, one surviving column sits out and its block
        // sums become unknowns.
        let f = FiniteField::gf(2, 4).unwrap();
        let code = YeBargCode::new(f, 5, 3, 3, None).unwrap();
        assert_eq!(code.ell(), 32);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..5 {
            let cw = random_codeword(&code, &mut rng);
            for failed in 0..5 {
                let survivors: Vec<usize> = (0..5).filter(|&j| j != failed).collect();
                for helpers in combinations(4, 3) {
                    let picked: Vec<usize> = helpers.iter().map(|&j| survivors[j]).collect();
                    let (column, transcript) =
                        code.repair_node(&cw, failed, &picked).unwrap();
                    assert_eq!(column, cw.column(failed));
                    assert_eq!(transcript.total, 3 * 32 / 2);
                    assert!(transcript.meets_bound_exactly());
                }
            }
        }
    }

    #[test]
    fn degenerate_radix_is_erasure_decode_at_bound() {
        // d = n - r gives b = 1: one row, helpers ship their single entry.
        let f = FiniteField::gf(2, 4).unwrap();
        let code = YeBargCode::new(f, 5, 2, 3, None).unwrap();
        assert_eq!(code.ell(), 1);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let cw = random_codeword(&code, &mut rng);
        let (column, transcript) = code.repair_node(&cw, 2, &[0, 1, 3]).unwrap();
        assert_eq!(column, cw.column(2));
        assert_eq!(transcript.total, 3);
        assert!(transcript.meets_bound_exactly());
    }

    #[test]
    fn repair_input_validation() {
        let f = FiniteField::gf(2, 6).unwrap();
        let code = YeBargCode::new(f, 4, 2, 3, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let cw = random_codeword(&code, &mut rng);
        assert!(matches!(
            code.repair_node(&cw, 0, &[1, 2]),
            Err(Error::WrongHelperCount { expected: 3, got: 2 })
        ));
        assert!(matches!(
            code.repair_node(&cw, 0, &[0, 1, 2]),
            Err(Error::HelperContainsFailed)
        ));
        assert!(matches!(
            code.repair_node(&cw, 0, &[1, 2, 9]),
            Err(Error::InvalidHelpers(_))
        ));
        assert!(matches!(
            code.repair_node(&cw, 0, &[1, 1, 2]),
            Err(Error::InvalidHelpers(_))
        ));
    }

    #[test]
    fn larger_radix_repair() {
        // n=3, r=2, d=2: b = 2, ell = 8, bn = 6 over GF(8).
        let f = FiniteField::gf(2, 3).unwrap();
        let code = YeBargCode::new(f, 3, 2, 2, None).unwrap();
        assert_eq!(code.ell(), 8);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let cw = random_codeword(&code, &mut rng);
            for failed in 0..3 {
                let survivors: Vec<usize> = (0..3).filter(|&j| j != failed).collect();
                for pair in combinations(2, 2) {
                    let picked: Vec<usize> = pair.iter().map(|&j| survivors[j]).collect();
                    let (column, transcript) = code.repair_node(&cw, failed, &picked).unwrap();
                    assert_eq!(column, cw.column(failed));
                    assert_eq!(transcript.total, 2 * 8 / 2);
                    assert!(transcript.meets_bound_exactly());
                }
            }
        }
    }
}
