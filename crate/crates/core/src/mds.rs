//! Scalar linear codes defined by a parity-check matrix, with erasure decoding
//! and an exhaustive distance certificate.
//!
//! The workhorse construction is the Reed-Solomon code on distinct evaluation
//! points (Vandermonde parity rows), but arbitrary parity matrices are accepted
//! because a few component codes need shapes Vandermonde cannot produce.

use rand::Rng;

use crate::gf::Field;
use crate::matrix::{CodeMatrix, SolveOutcome};
use crate::util::combinations;
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct LinearCode {
    field: Field,
    n: usize,
    k: usize,
    h: CodeMatrix,
    g: CodeMatrix,
    locators: Option<Vec<u64>>,
}

impl LinearCode {
    /// Code with the given parity-check matrix. Dependent parity rows are
    /// collapsed; the stored check matrix is the reduced echelon form.
    pub fn from_parity(h: CodeMatrix) -> Result<Self> {
        let n = h.cols();
        let (red, pivots) = h.rref();
        let rank = pivots.len();
        let h = red.select_rows(&(0..rank).collect::<Vec<_>>())?;
        let g = h.null_space_basis();
        debug_assert_eq!(g.rows(), n - rank);
        Ok(LinearCode {
            field: h.field().clone(),
            n,
            k: n - rank,
            h,
            g,
            locators: None,
        })
    }

    /// Reed-Solomon code of dimension k on distinct locators: parity rows are
    /// the Vandermonde powers of the locator points.
    pub fn rs_code(field: Field, locators: &[u64], k: usize) -> Result<Self> {
        let n = locators.len();
        if k > n {
            return Err(Error::InvalidParameters(format!(
                "dimension {k} exceeds length {n}"
            )));
        }
        for (i, &a) in locators.iter().enumerate() {
            if locators[..i].contains(&a) {
                return Err(Error::DuplicateLocator);
            }
        }
        let h = CodeMatrix::vandermonde(field, n - k, locators)?;
        let mut code = Self::from_parity(h)?;
        if code.k != k {
            return Err(Error::InvalidParameters(
                "locators do not give the requested dimension".into(),
            ));
        }
        code.locators = Some(locators.to_vec());
        Ok(code)
    }

    /// Generalized Reed-Solomon code with per-column multipliers.
    pub fn grs_code(field: Field, locators: &[u64], multipliers: &[u64], k: usize) -> Result<Self> {
        if multipliers.len() != locators.len() {
            return Err(Error::DimensionMismatch(
                "one multiplier per locator".into(),
            ));
        }
        if multipliers.iter().any(|&v| v == 0) {
            return Err(Error::ZeroElement);
        }
        let n = locators.len();
        for (i, &a) in locators.iter().enumerate() {
            if locators[..i].contains(&a) {
                return Err(Error::DuplicateLocator);
            }
        }
        let mut h = CodeMatrix::vandermonde(field.clone(), n - k, locators)?;
        for j in 0..n {
            for i in 0..n - k {
                h.set(i, j, field.mul(h.get(i, j), multipliers[j]));
            }
        }
        let mut code = Self::from_parity(h)?;
        code.locators = Some(locators.to_vec());
        Ok(code)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn length(&self) -> usize {
        self.n
    }

    pub fn dimension(&self) -> usize {
        self.k
    }

    pub fn parity_check(&self) -> &CodeMatrix {
        &self.h
    }

    pub fn generator(&self) -> &CodeMatrix {
        &self.g
    }

    pub fn locators(&self) -> Option<&[u64]> {
        self.locators.as_deref()
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

    /// Recover the message from a full codeword.
    pub fn message_from_codeword(&self, word: &[u64]) -> Result<Vec<u64>> {
        match self.g.transpose().solve(word)? {
            SolveOutcome::Unique(m) => Ok(m),
            _ => Err(Error::WordNotInCode),
        }
    }

    /// Fill in erased positions (None entries) using the parity checks. Fails
    /// unless the checks pin the erased values uniquely.
    pub fn erasure_decode(&self, word: &[Option<u64>]) -> Result<Vec<u64>> {
        if word.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "word of length {} for code length {}",
                word.len(),
                self.n
            )));
        }
        let erased: Vec<usize> = (0..self.n).filter(|&j| word[j].is_none()).collect();
        let mut known = vec![0u64; self.n];
        for (j, w) in word.iter().enumerate() {
            if let Some(v) = w {
                known[j] = *v;
            }
        }
        let syndrome = self.h.mul_vec(&known)?;
        if erased.is_empty() {
            return if syndrome.iter().all(|&v| v == 0) {
                Ok(known)
            } else {
                Err(Error::WordNotInCode)
            };
        }
        let rhs: Vec<u64> = syndrome.iter().map(|&v| self.field.neg(v)).collect();
        let he = self.h.select_columns(&erased)?;
        match he.solve(&rhs)? {
            SolveOutcome::Unique(vals) => {
                let mut out = known;
                for (idx, &j) in erased.iter().enumerate() {
                    out[j] = vals[idx];
                }
                Ok(out)
            }
            _ => Err(Error::Unrecoverable { row: None }),
        }
    }

    /// First set of n-k columns of the check matrix that fails to be invertible,
    /// in lexicographic order; None means the code meets the Singleton bound.
    pub fn mds_counterexample(&self) -> Option<Vec<usize>> {
        let r = self.n - self.k;
        if r == 0 {
            return None;
        }
        for subset in combinations(self.n, r) {
            let sub = self.h.select_columns(&subset).expect("valid columns");
            if sub.rank() < r {
                return Some(subset);
            }
        }
        None
    }

    pub fn certify_mds(&self) -> bool {
        self.mds_counterexample().is_none()
    }
}

/// Sample a random MDS code of the requested shape (generalized Reed-Solomon on
/// random distinct locators with random nonzero column multipliers), certified
/// before it is returned.
pub fn random_mds_code(field: Field, n: usize, k: usize, rng: &mut impl Rng) -> Result<LinearCode> {
    if (n as u64) > field.size() {
        return Err(Error::FieldTooSmall(format!(
            "length {n} needs at least {n} distinct locators"
        )));
    }
    if k > n {
        return Err(Error::InvalidParameters("dimension exceeds length".into()));
    }
    loop {
        let mut locators = Vec::with_capacity(n);
        while locators.len() < n {
            let cand = rng.gen_range(0..field.size());
            if !locators.contains(&cand) {
                locators.push(cand);
            }
        }
        let multipliers: Vec<u64> = (0..n).map(|_| rng.gen_range(1..field.size())).collect();
        let code = LinearCode::grs_code(field.clone(), &locators, &multipliers, k)?;
        if code.dimension() == k && code.certify_mds() {
            return Ok(code);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FiniteField;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Exhaustive minimum distance by enumerating every nonzero message.
    fn min_distance(code: &LinearCode) -> usize {
        let q = code.field().size();
        let k = code.dimension();
        let total = q.pow(k as u32);
        let mut best = code.length() + 1;
        for idx in 1..total {
            let mut m = Vec::with_capacity(k);
            let mut v = idx;
            for _ in 0..k {
                m.push(v % q);
                v /= q;
            }
            let w = code.encode(&m).unwrap().iter().filter(|&&x| x != 0).count();
            best = best.min(w);
        }
        best
    }

    #[test]
    fn rs_code_over_gf8_is_mds_with_the_right_distance() {
        let f = FiniteField::gf(2, 3).unwrap();
        let code = LinearCode::rs_code(f, &[1, 2, 3, 4, 5, 6, 7], 4).unwrap();
        assert_eq!(code.length(), 7);
        assert_eq!(code.dimension(), 4);
        assert!(code.certify_mds());
        assert_eq!(min_distance(&code), 4);
    }

    #[test]
    fn certificate_agrees_with_exhaustive_distance() {
        let f = FiniteField::gf(3, 1).unwrap();
        let mut state = 31337u64;
        let mut next = move |bound: u64| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) % bound
        };
        let mut seen_mds = 0;
        let mut seen_not = 0;
        for _ in 0..200 {
            let rows: Vec<Vec<u64>> = (0..2).map(|_| (0..4).map(|_| next(3)).collect()).collect();
            let h = CodeMatrix::from_rows(f.clone(), &rows).unwrap();
            if h.rank() < 2 {
                continue;
            }
            let code = LinearCode::from_parity(h).unwrap();
            let is_mds = code.certify_mds();
            let d = min_distance(&code);
            assert_eq!(is_mds, d == code.length() - code.dimension() + 1);
            if is_mds {
                seen_mds += 1;
            } else {
                seen_not += 1;
            }
        }
        assert!(seen_mds > 0 && seen_not > 0, "sample covered both outcomes");
    }

    #[test]
    fn binary_parity_code_is_mds() {
        let f = FiniteField::gf(2, 1).unwrap();
        let h = CodeMatrix::from_rows(f, &[vec![1, 1, 1]]).unwrap();
        let code = LinearCode::from_parity(h).unwrap();
        assert_eq!((code.length(), code.dimension()), (3, 2));
        assert!(code.certify_mds());
        assert_eq!(min_distance(&code), 2);
    }

    #[test]
    fn erasure_decoding_restores_any_tolerable_pattern() {
        let f = FiniteField::gf(2, 3).unwrap();
        let code = LinearCode::rs_code(f.clone(), &[0, 1, 2, 3, 4, 5], 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let msg: Vec<u64> = (0..3).map(|_| rng.gen_range(0..8)).collect();
            let cw = code.encode(&msg).unwrap();
            assert!(code.is_codeword(&cw).unwrap());
            for pattern in combinations(6, 3) {
                let mut word: Vec<Option<u64>> = cw.iter().map(|&v| Some(v)).collect();
                for &j in &pattern {
                    word[j] = None;
                }
                let decoded = code.erasure_decode(&word).unwrap();
                assert_eq!(decoded, cw);
            }
            assert_eq!(code.message_from_codeword(&cw).unwrap(), msg);
        }
        // one erasure beyond the distance is ambiguous
        let cw = code.encode(&[1, 2, 3]).unwrap();
        let mut word: Vec<Option<u64>> = cw.iter().map(|&v| Some(v)).collect();
        for j in 0..4 {
            word[j] = None;
        }
        assert!(matches!(
            code.erasure_decode(&word),
            Err(Error::Unrecoverable { .. })
        ));
    }

    #[test]
    fn corrupted_full_word_is_rejected() {
        let f = FiniteField::gf(2, 3).unwrap();
        let code = LinearCode::rs_code(f, &[1, 2, 3, 4], 2).unwrap();
        let mut cw = code.encode(&[5, 6]).unwrap();
        cw[0] ^= 1;
        let word: Vec<Option<u64>> = cw.iter().map(|&v| Some(v)).collect();
        assert!(matches!(
            code.erasure_decode(&word),
            Err(Error::WordNotInCode)
        ));
    }

    #[test]
    fn duplicate_locators_are_rejected() {
        let f = FiniteField::gf(2, 3).unwrap();
        assert!(matches!(
            LinearCode::rs_code(f, &[1, 2, 2, 3], 2),
            Err(Error::DuplicateLocator)
        ));
    }

    #[test]
    fn random_codes_are_certified_and_decodable() {
        let f = FiniteField::gf(2, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let code = random_mds_code(f, 6, 3, &mut rng).unwrap();
        assert!(code.certify_mds());
        assert_eq!(min_distance(&code), 4);
        let msg = vec![3, 1, 4];
        let cw = code.encode(&msg).unwrap();
        let mut word: Vec<Option<u64>> = cw.iter().map(|&v| Some(v)).collect();
        word[0] = None;
        word[3] = None;
        word[5] = None;
        assert_eq!(code.erasure_decode(&word).unwrap(), cw);
    }

    #[test]
    fn dependent_parity_rows_collapse() {
        let f = FiniteField::gf(3, 1).unwrap();
        let h = CodeMatrix::from_rows(f, &[vec![1, 1, 1], vec![2, 2, 2]]).unwrap();
        let code = LinearCode::from_parity(h).unwrap();
        assert_eq!(code.dimension(), 2);
        assert_eq!(code.parity_check().rows(), 1);
    }
}
