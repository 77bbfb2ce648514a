//! Universal partial-MDS families: maps F taking any [n, n-r] MDS code over
//! GF(q) to a partial-MDS code over GF(q^M) whose every group restricts to
//! exactly that local code. Two recipes are implemented: one encodes with a
//! fixed Gabidulin code and pushes each subblock through the local generator,
//! the other pins the code by a parity check stacking embedded local checks
//! over Frobenius rows of a rank-independent element list. Feeding the map
//! one Ye-Barg row code per row yields an array code whose groups repair a
//! lost column through M parallel base-field repairs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::code::{ArrayCode, ArrayCodeword, LocalMsrCode, PmdsParams, RepairTranscript};
use crate::gabidulin::{embed_matrix, GabidulinCode};
use crate::gf::Field;
use crate::matrix::CodeMatrix;
use crate::mds::LinearCode;
use crate::util::{binomial, combinations};
use crate::yebarg::YeBargCode;
use crate::{Error, Result};

/// How a Gabrys-style family's element list was vetted: every (r+1)s-subset
/// rank-checked, or a seeded random sample when the subset count explodes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndependenceCheck {
    Exhaustive,
    Sampled { count: usize, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    GabidulinBased,
    GabrysBased,
}

#[derive(Clone)]
enum FamilyData {
    Gabidulin { code: GabidulinCode },
    Gabrys { alphas: Vec<u64>, check: IndependenceCheck },
}

/// A family F of partial-MDS codes over GF(q^M), one member per local MDS
/// code: F(L) restricted to any group is exactly the GF(q^M)-span of L.
#[derive(Clone)]
pub struct UniversalFamily {
    field: Field,
    params: PmdsParams,
    data: FamilyData,
}

impl UniversalFamily {
    /// Family built on a fixed Gabidulin code of length mu*(n-r) and
    /// dimension mu*(n-r) - s, with polynomial-basis locators. Needs
    /// M >= mu*(n-r).
    pub fn gabidulin(field: Field, mu: usize, n: usize, r: usize, s: usize) -> Result<Self> {
        let params = PmdsParams::new(mu, n, r, s)?;
        field.subfield()?;
        let code = GabidulinCode::with_polynomial_basis(
            field.clone(),
            params.mu * (params.n - params.r),
            params.dimension(),
        )?;
        Ok(UniversalFamily {
            field,
            params,
            data: FamilyData::Gabidulin { code },
        })
    }

    /// Family pinned by mu*n elements of GF(q^M) in which every (r+1)s-subset
    /// is GF(q)-independent. The independence is verified here: exhaustively
    /// when the subset count is at most 10^5, otherwise on 10^4 seeded random
    /// subsets, and the mode is recorded.
    pub fn gabrys(
        field: Field,
        mu: usize,
        n: usize,
        r: usize,
        s: usize,
        alphas: Vec<u64>,
        seed: u64,
    ) -> Result<Self> {
        let params = PmdsParams::new(mu, n, r, s)?;
        field.subfield()?;
        if alphas.len() != params.length() {
            return Err(Error::DimensionMismatch(format!(
                "{} elements for {} columns",
                alphas.len(),
                params.length()
            )));
        }
        for &a in &alphas {
            if !field.contains(a) {
                return Err(Error::InvalidField(format!(
                    "element {a} outside a field of size {}",
                    field.size()
                )));
            }
        }
        let subset = (r + 1) * s;
        let check = verify_alpha_independence(&field, &alphas, subset, seed)?;
        Ok(UniversalFamily {
            field,
            params,
            data: FamilyData::Gabrys { alphas, check },
        })
    }

    pub fn kind(&self) -> FamilyKind {
        match self.data {
            FamilyData::Gabidulin { .. } => FamilyKind::GabidulinBased,
            FamilyData::Gabrys { .. } => FamilyKind::GabrysBased,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn params(&self) -> PmdsParams {
        self.params
    }

    pub fn subfield(&self) -> Result<Field> {
        self.field.subfield()
    }

    pub fn gabidulin_code(&self) -> Option<&GabidulinCode> {
        match &self.data {
            FamilyData::Gabidulin { code } => Some(code),
            _ => None,
        }
    }

    pub fn alphas(&self) -> Option<&[u64]> {
        match &self.data {
            FamilyData::Gabrys { alphas, .. } => Some(alphas),
            _ => None,
        }
    }

    pub fn independence_check(&self) -> Option<&IndependenceCheck> {
        match &self.data {
            FamilyData::Gabrys { check, .. } => Some(check),
            _ => None,
        }
    }

    fn check_local(&self, local: &LinearCode) -> Result<()> {
        let sub = self.field.subfield()?;
        if **local.field() != *sub {
            return Err(Error::MixedFields);
        }
        if local.length() != self.params.n || local.dimension() != self.params.n - self.params.r {
            return Err(Error::DimensionMismatch(format!(
                "[{}, {}] local code for groups of shape [{}, {}]",
                local.length(),
                local.dimension(),
                self.params.n,
                self.params.n - self.params.r
            )));
        }
        if !local.certify_mds() {
            return Err(Error::LocalNotMds);
        }
        Ok(())
    }

    /// Generator and parity check of the member F(local), in that order.
    pub fn member_pair(&self, local: &LinearCode) -> Result<(CodeMatrix, CodeMatrix)> {
        self.check_local(local)?;
        match &self.data {
            FamilyData::Gabidulin { code } => {
                let emb = embed_matrix(&self.field, local.generator())?;
                let blocks: Vec<&CodeMatrix> = (0..self.params.mu).map(|_| &emb).collect();
                let diag = CodeMatrix::block_diag(&blocks)?;
                let g = code.generator().mul(&diag)?;
                let h = g.null_space_basis();
                Ok((g, h))
            }
            FamilyData::Gabrys { alphas, .. } => {
                let emb = embed_matrix(&self.field, local.parity_check())?;
                let blocks: Vec<&CodeMatrix> = (0..self.params.mu).map(|_| &emb).collect();
                let diag = CodeMatrix::block_diag(&blocks)?;
                let mut rows = Vec::with_capacity(self.params.s);
                for t in 0..self.params.s {
                    let mut row = Vec::with_capacity(self.params.length());
                    for &a in alphas {
                        row.push(self.field.frobenius(a, t as u32)?);
                    }
                    rows.push(row);
                }
                let tail = CodeMatrix::from_rows(self.field.clone(), &rows)?;
                let h = diag.vstack(&tail)?;
                let g = h.null_space_basis();
                if g.rows() != self.params.dimension() {
                    return Err(Error::DependentLocators);
                }
                Ok((g, h))
            }
        }
    }

    pub fn member_generator(&self, local: &LinearCode) -> Result<CodeMatrix> {
        Ok(self.member_pair(local)?.0)
    }

    pub fn member_parity(&self, local: &LinearCode) -> Result<CodeMatrix> {
        Ok(self.member_pair(local)?.1)
    }

    /// Encode one message row into the member F(local).
    pub fn apply(&self, local: &LinearCode, message: &[u64]) -> Result<Vec<u64>> {
        self.member_generator(local)?.vec_mul(message)
    }

    fn descriptor_fragment(&self) -> Value {
        match &self.data {
            FamilyData::Gabidulin { code } => json!({
                "kind": "gabidulin-based",
                "locators": code.locators(),
            }),
            FamilyData::Gabrys { alphas, check } => json!({
                "kind": "gabrys-based",
                "alphas": alphas,
                "independence": check,
            }),
        }
    }
}

/// Encode one message row into F(local). Free-function form of
/// [`UniversalFamily::apply`].
pub fn family_apply(
    family: &UniversalFamily,
    local: &LinearCode,
    message: &[u64],
) -> Result<Vec<u64>> {
    family.apply(local, message)
}

fn verify_alpha_independence(
    field: &Field,
    alphas: &[u64],
    subset: usize,
    seed: u64,
) -> Result<IndependenceCheck> {
    let independent = |idx: &[usize]| -> Result<bool> {
        let elems: Vec<u64> = idx.iter().map(|&i| alphas[i]).collect();
        field.linearly_independent_over_subfield(&elems)
    };
    if binomial(alphas.len(), subset) <= 100_000 {
        for idx in combinations(alphas.len(), subset) {
            if !independent(&idx)? {
                return Err(Error::DependentLocators);
            }
        }
        return Ok(IndependenceCheck::Exhaustive);
    }
    let count = 10_000;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx: Vec<usize> = (0..alphas.len()).collect();
    for _ in 0..count {
        for i in 0..subset {
            let j = rng.gen_range(i..idx.len());
            idx.swap(i, j);
        }
        if !independent(&idx[..subset])? {
            return Err(Error::DependentLocators);
        }
    }
    Ok(IndependenceCheck::Sampled { count, seed })
}

/// Strategy for assembling a Gabrys-style element list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlphaStrategy {
    /// Randomized add-and-rank-check with backtracking.
    Greedy,
    /// Columns of a full Vandermonde parity check over GF(q), composed into
    /// GF(q^M); needs q >= mu*n and M >= (r+1)s.
    CodeBased,
}

/// Produce mu*n elements of GF(q^M) with every (r+1)s-subset
/// GF(q)-independent.
pub fn find_alpha_set(
    field: &Field,
    mu: usize,
    n: usize,
    r: usize,
    s: usize,
    strategy: AlphaStrategy,
    seed: u64,
) -> Result<Vec<u64>> {
    let params = PmdsParams::new(mu, n, r, s)?;
    let count = params.length();
    let subset = (r + 1) * s;
    match strategy {
        AlphaStrategy::Greedy => greedy_alpha_set(field, count, subset, seed),
        AlphaStrategy::CodeBased => code_based_alpha_set(field, count, subset),
    }
}

fn greedy_alpha_set(field: &Field, count: usize, subset: usize, seed: u64) -> Result<Vec<u64>> {
    field.subfield()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen: Vec<u64> = Vec::with_capacity(count);
    let mut attempts = 0usize;
    let budget = 100_000usize;
    let tries_per_slot = 200usize;
    while chosen.len() < count {
        let mut placed = false;
        for _ in 0..tries_per_slot {
            attempts += 1;
            if attempts > budget {
                return Err(Error::SearchExhausted(format!(
                    "no {subset}-wise independent extension after {budget} attempts"
                )));
            }
            let cand = rng.gen_range(1..field.size());
            if chosen.contains(&cand) {
                continue;
            }
            if greedy_extension_ok(field, &chosen, cand, subset)? {
                chosen.push(cand);
                placed = true;
                break;
            }
        }
        if !placed && chosen.pop().is_none() {
            return Err(Error::SearchExhausted(
                "backtracked past the first element".into(),
            ));
        }
    }
    Ok(chosen)
}

/// Every subset-sized set containing the candidate must stay independent;
/// smaller prefixes check their largest possible subsets.
fn greedy_extension_ok(field: &Field, chosen: &[u64], cand: u64, subset: usize) -> Result<bool> {
    let take = (subset - 1).min(chosen.len());
    for idx in combinations(chosen.len(), take) {
        let mut elems: Vec<u64> = idx.iter().map(|&i| chosen[i]).collect();
        elems.push(cand);
        if !field.linearly_independent_over_subfield(&elems)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn code_based_alpha_set(field: &Field, count: usize, subset: usize) -> Result<Vec<u64>> {
    let sub = field.subfield()?;
    let m_deg = field.ext_degree()? as usize;
    if (count as u64) > sub.size() || m_deg < subset {
        return Err(Error::SearchExhausted(format!(
            "no distance-{} parity matrix with {count} columns at q = {}, M = {m_deg}",
            subset + 1,
            sub.size()
        )));
    }
    let points: Vec<u64> = (0..count as u64).collect();
    let h = CodeMatrix::vandermonde(sub.clone(), m_deg, &points)?;
    let mut alphas = Vec::with_capacity(count);
    for j in 0..count {
        alphas.push(compose_from_subfield(field, &h.col(j))?);
    }
    Ok(alphas)
}

/// Inverse of coordinate expansion: rebuild a GF(q^M) element from its M
/// subfield coordinates in the fixed basis {1, x, ..., x^(M-1)}.
pub(crate) fn compose_from_subfield(big: &Field, coords: &[u64]) -> Result<u64> {
    let expected = big.ext_degree()? as usize;
    if coords.len() != expected {
        return Err(Error::DimensionMismatch(format!(
            "{} coordinates for extension degree {expected}",
            coords.len()
        )));
    }
    let x = big.characteristic();
    let mut basis = 1u64;
    let mut out = 0u64;
    for (j, &c) in coords.iter().enumerate() {
        if j > 0 {
            basis = big.mul(basis, x);
        }
        out = big.add(out, big.mul(big.embed_from_subfield(c)?, basis));
    }
    Ok(out)
}

/// Array code over GF(q^M): row a lies in F(C_a) where C_a is the a-th row
/// code of an embedded Ye-Barg code over GF(q). Local repair expands each
/// group into M base-field arrays, repairs them in parallel, and reassembles.
pub struct LocalMsrUniversalPmdsCode {
    family: UniversalFamily,
    local: YeBargCode,
    d: usize,
    row_gens: Vec<CodeMatrix>,
    row_checks: Vec<CodeMatrix>,
}

/// Instantiate the family on every row code of a Ye-Barg code over the
/// subfield. `betas` overrides the default evaluation table.
pub fn build_universal_msr_pmds(
    family: UniversalFamily,
    n: usize,
    r: usize,
    d: usize,
    betas: Option<Vec<Vec<u64>>>,
) -> Result<LocalMsrUniversalPmdsCode> {
    let params = family.params();
    if n != params.n || r != params.r {
        return Err(Error::InvalidParameters(format!(
            "group shape ({n}, {r}) disagrees with the family's ({}, {})",
            params.n, params.r
        )));
    }
    let sub = family.subfield()?;
    let local = YeBargCode::new(sub, n, r, d, betas)?;
    let mut row_gens = Vec::with_capacity(local.ell());
    let mut row_checks = Vec::with_capacity(local.ell());
    for a in 0..local.ell() {
        let (g, h) = family.member_pair(local.row_code(a)?)?;
        row_gens.push(g);
        row_checks.push(h);
    }
    Ok(LocalMsrUniversalPmdsCode {
        family,
        local,
        d,
        row_gens,
        row_checks,
    })
}

impl LocalMsrUniversalPmdsCode {
    pub fn family(&self) -> &UniversalFamily {
        &self.family
    }

    /// The base-field code whose rows the groups restrict to.
    pub fn local_code(&self) -> &YeBargCode {
        &self.local
    }
}

impl ArrayCode for LocalMsrUniversalPmdsCode {
    fn name(&self) -> &str {
        match self.family.kind() {
            FamilyKind::GabidulinBased => "universal-gabidulin",
            FamilyKind::GabrysBased => "universal-gabrys",
        }
    }

    fn field(&self) -> &Field {
        self.family.field()
    }

    fn params(&self) -> PmdsParams {
        self.family.params()
    }

    fn ell(&self) -> usize {
        self.local.ell()
    }

    fn row_generator(&self, a: usize) -> Result<CodeMatrix> {
        self.row_gens.get(a).cloned().ok_or(Error::RowOutOfRange)
    }

    fn row_parity_check(&self, a: usize) -> Result<CodeMatrix> {
        self.row_checks.get(a).cloned().ok_or(Error::RowOutOfRange)
    }

    fn descriptor(&self) -> Value {
        let params = self.params();
        json!({
            "construction": self.name(),
            "field": self.family.field().descriptor(),
            "mu": params.mu,
            "n": params.n,
            "r": params.r,
            "s": params.s,
            "d": self.d,
            "radix": self.local.radix(),
            "ell": self.local.ell(),
            "betas": self.local.beta_table(),
            "family": self.family.descriptor_fragment(),
        })
    }

    fn as_local_msr(&self) -> Option<&dyn LocalMsrCode> {
        Some(self)
    }
}

impl LocalMsrCode for LocalMsrUniversalPmdsCode {
    fn repair_d(&self) -> usize {
        self.d
    }

    /// Repair traffic is counted in base-field symbols.
    fn repair_symbol_field(&self) -> Field {
        self.local.field().clone()
    }

    fn local_row_parity(&self, a: usize, g: usize) -> Result<CodeMatrix> {
        if g >= self.params().mu {
            return Err(Error::InvalidParameters(format!("group {g} out of range")));
        }
        embed_matrix(self.family.field(), self.local.row_code(a)?.parity_check())
    }

    fn repair_in_group(
        &self,
        word: &ArrayCodeword,
        failed: usize,
        helpers: &[usize],
    ) -> Result<(Vec<u64>, RepairTranscript)> {
        self.check_shape(word)?;
        let p = self.params();
        if failed >= p.length() {
            return Err(Error::InvalidParameters(format!(
                "failed column {failed} out of range"
            )));
        }
        let base = p.group_of(failed) * p.n;
        if helpers.iter().any(|&h| h < base || h >= base + p.n) {
            return Err(Error::InvalidHelpers(
                "helpers must come from the failed column's group".into(),
            ));
        }
        let big = self.family.field();
        let sub = self.local.field().clone();
        let m_deg = big.ext_degree()? as usize;
        let ell = self.local.ell();

        // Coordinate slice t of the group restriction is a codeword of the
        // base-field code; repair all M slices with the same helpers.
        let mut slices: Vec<Vec<Vec<u64>>> = vec![vec![vec![0u64; p.n]; ell]; m_deg];
        for a in 0..ell {
            for c in 0..p.n {
                let coords = big.expand_to_subfield(word.get(a, base + c))?;
                for (t, &v) in coords.iter().enumerate() {
                    slices[t][a][c] = v;
                }
            }
        }
        let local_failed = failed - base;
        let local_helpers: Vec<usize> = helpers.iter().map(|&h| h - base).collect();
        let mut slice_columns = Vec::with_capacity(m_deg);
        let mut helper_order: Vec<usize> = Vec::new();
        for slice in slices {
            let slice_word = ArrayCodeword::new(sub.clone(), slice)?;
            let (col, t) = self
                .local
                .repair_node(&slice_word, local_failed, &local_helpers)?;
            helper_order = t.helpers;
            slice_columns.push(col);
        }
        let mut column = Vec::with_capacity(ell);
        for a in 0..ell {
            let coords: Vec<u64> = slice_columns.iter().map(|col| col[a]).collect();
            column.push(compose_from_subfield(big, &coords)?);
        }

        let per = (ell / self.local.radix()) as u64 * m_deg as u64;
        let (num, den) = RepairTranscript::cut_set_bound(1, self.d, m_deg * ell, p.n, p.r);
        let transcript = RepairTranscript::new(
            vec![failed],
            helper_order.iter().map(|&j| j + base).collect(),
            vec![per; self.d],
            num,
            den,
            true,
            &sub,
        );
        Ok((column, transcript))
    }
}

/// Repair a lost column via the M-fold expansion, picking the first d
/// in-group survivors when no helper set is given.
pub fn local_repair_expanded(
    code: &LocalMsrUniversalPmdsCode,
    word: &ArrayCodeword,
    failed: usize,
    helpers: Option<&[usize]>,
) -> Result<(Vec<u64>, RepairTranscript)> {
    match helpers {
        Some(h) => code.repair_in_group(word, failed, h),
        None => {
            let p = code.params();
            let g = p.group_of(failed);
            let chosen: Vec<usize> = p
                .group_columns(g)
                .filter(|&c| c != failed)
                .take(code.repair_d())
                .collect();
            code.repair_in_group(word, failed, &chosen)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::ErasurePattern;
    use crate::gf::FiniteField;
    use crate::mds::random_mds_code;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// GF(256) over GF(4): M = 4.
    fn tower_256_over_4() -> Field {
        FiniteField::with_subfield(2, 2, 4).unwrap()
    }

    /// GF(4096) over GF(8): M = 4, the reference array field.
    fn tower_4096_over_8() -> Field {
        FiniteField::with_subfield(2, 3, 4).unwrap()
    }

    fn correctable(h: &CodeMatrix, erased: &[usize]) -> bool {
        h.select_columns(erased).unwrap().rank() == erased.len()
    }

    #[test]
    fn expansion_composes_back() {
        let big = tower_4096_over_8();
        for v in [0u64, 1, 2, 7, 100, 4095] {
            let coords = big.expand_to_subfield(v).unwrap();
            assert_eq!(coords.len(), 4);
            assert_eq!(compose_from_subfield(&big, &coords).unwrap(), v);
        }
    }

    #[test]
    fn gabidulin_member_restricts_to_exactly_the_local_span() {
        let big = tower_256_over_4();
        let sub = big.subfield().unwrap();
        let family = UniversalFamily::gabidulin(big.clone(), 2, 3, 1, 2).unwrap();

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let l1 = random_mds_code(sub.clone(), 3, 2, &mut rng).unwrap();
        let l2 = loop {
            let cand = random_mds_code(sub.clone(), 3, 2, &mut rng).unwrap();
            let both = embed_matrix(&big, l1.generator())
                .unwrap()
                .vstack(&embed_matrix(&big, cand.generator()).unwrap())
                .unwrap();
            if both.rank() > 2 {
                break cand;
            }
        };

        for (local, other) in [(&l1, &l2), (&l2, &l1)] {
            let g = family.member_generator(local).unwrap();
            assert_eq!(g.rows(), family.params().dimension());
            for group in 0..2 {
                let cols: Vec<usize> = family.params().group_columns(group).collect();
                let restriction = g.select_columns(&cols).unwrap();
                assert_eq!(restriction.rank(), 2);
                let own = embed_matrix(&big, local.generator()).unwrap();
                assert_eq!(restriction.vstack(&own).unwrap().rank(), 2);
                let foreign = embed_matrix(&big, other.generator()).unwrap();
                assert!(restriction.vstack(&foreign).unwrap().rank() > 2);
            }
        }
    }

    #[test]
    fn zero_message_encodes_to_zero() {
        let big = tower_256_over_4();
        let sub = big.subfield().unwrap();
        let family = UniversalFamily::gabidulin(big.clone(), 2, 3, 1, 2).unwrap();
        let local = LinearCode::rs_code(sub, &[0, 1, 2], 2).unwrap();
        let row = family_apply(&family, &local, &[0, 0]).unwrap();
        assert_eq!(row, vec![0; 6]);

        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let message: Vec<u64> = (0..2).map(|_| rng.gen_range(0..big.size())).collect();
        let row = family_apply(&family, &local, &message).unwrap();
        let h_local = embed_matrix(&big, local.parity_check()).unwrap();
        for group in 0..2 {
            let cols: Vec<usize> = family.params().group_columns(group).collect();
            let piece: Vec<u64> = cols.iter().map(|&c| row[c]).collect();
            assert!(h_local.mul_vec(&piece).unwrap().iter().all(|&v| v == 0));
        }
    }

    #[test]
    fn family_rejects_non_mds_locals() {
        let big = tower_256_over_4();
        let sub = big.subfield().unwrap();
        let family = UniversalFamily::gabidulin(big, 2, 3, 1, 2).unwrap();
        let h = CodeMatrix::from_rows(sub, &[vec![1, 0, 0]]).unwrap();
        let weak = LinearCode::from_parity(h).unwrap();
        assert!(matches!(
            family.member_generator(&weak),
            Err(Error::LocalNotMds)
        ));
    }

    #[test]
    fn gabidulin_family_needs_room_for_its_locators() {
        // M = 3 < mu*(n-r) = 4.
        let big = FiniteField::with_subfield(2, 2, 3).unwrap();
        assert!(matches!(
            UniversalFamily::gabidulin(big, 2, 3, 1, 2),
            Err(Error::LengthExceedsDegree)
        ));
    }

    #[test]
    fn gabrys_rows_are_frobenius_iterates() {
        let big = FiniteField::with_subfield(2, 1, 8).unwrap();
        let alphas = find_alpha_set(&big, 2, 3, 1, 2, AlphaStrategy::Greedy, 42).unwrap();
        let family = UniversalFamily::gabrys(big.clone(), 2, 3, 1, 2, alphas, 0).unwrap();
        assert_eq!(
            family.independence_check(),
            Some(&IndependenceCheck::Exhaustive)
        );
        let sub = big.subfield().unwrap();
        let local = {
            let h = CodeMatrix::from_rows(sub, &[vec![1, 1, 1]]).unwrap();
            LinearCode::from_parity(h).unwrap()
        };
        let h = family.member_parity(&local).unwrap();
        assert_eq!((h.rows(), h.cols()), (4, 6));
        for t in 1..2 {
            for c in 0..6 {
                assert_eq!(
                    h.get(2 + t, c),
                    big.frobenius(h.get(2, c), t as u32).unwrap()
                );
            }
        }
    }

    #[test]
    fn scalar_members_decode_every_admissible_pattern() {
        // One member per family kind at mu=2, n=3, r=1, s=2.
        let params = PmdsParams::new(2, 3, 1, 2).unwrap();
        let mut members: Vec<CodeMatrix> = Vec::new();

        let big = tower_256_over_4();
        let sub = big.subfield().unwrap();
        let family = UniversalFamily::gabidulin(big, 2, 3, 1, 2).unwrap();
        let local = LinearCode::rs_code(sub, &[0, 1, 2], 2).unwrap();
        members.push(family.member_parity(&local).unwrap());

        let big = FiniteField::with_subfield(2, 1, 8).unwrap();
        let sub = big.subfield().unwrap();
        let alphas = find_alpha_set(&big, 2, 3, 1, 2, AlphaStrategy::Greedy, 42).unwrap();
        let family = UniversalFamily::gabrys(big, 2, 3, 1, 2, alphas, 0).unwrap();
        let local = {
            let h = CodeMatrix::from_rows(sub, &[vec![1, 1, 1]]).unwrap();
            LinearCode::from_parity(h).unwrap()
        };
        members.push(family.member_parity(&local).unwrap());

        for h in &members {
            for cols in combinations(6, 4) {
                let pattern = ErasurePattern::from_columns(params, &cols).unwrap();
                if !pattern.pmds_admissible() {
                    continue;
                }
                assert!(correctable(h, &cols), "{cols:?}");
            }
        }
    }

    #[test]
    fn greedy_alpha_sets_are_independent_and_deterministic() {
        let big = FiniteField::with_subfield(2, 1, 8).unwrap();
        let alphas = find_alpha_set(&big, 2, 3, 1, 2, AlphaStrategy::Greedy, 7).unwrap();
        assert_eq!(alphas.len(), 6);
        for idx in combinations(6, 4) {
            let elems: Vec<u64> = idx.iter().map(|&i| alphas[i]).collect();
            assert!(big.linearly_independent_over_subfield(&elems).unwrap());
        }
        let again = find_alpha_set(&big, 2, 3, 1, 2, AlphaStrategy::Greedy, 7).unwrap();
        assert_eq!(alphas, again);
        let other = find_alpha_set(&big, 2, 3, 1, 2, AlphaStrategy::Greedy, 8).unwrap();
        assert!(other.iter().all(|&a| big.contains(a)));
    }

    #[test]
    fn code_based_alpha_sets_come_from_vandermonde_columns() {
        let big = tower_4096_over_8();
        let alphas = find_alpha_set(&big, 2, 3, 1, 2, AlphaStrategy::CodeBased, 0).unwrap();
        assert_eq!(alphas.len(), 6);
        for idx in combinations(6, 4) {
            let elems: Vec<u64> = idx.iter().map(|&i| alphas[i]).collect();
            assert!(big.linearly_independent_over_subfield(&elems).unwrap());
        }
        let again = find_alpha_set(&big, 2, 3, 1, 2, AlphaStrategy::CodeBased, 99).unwrap();
        assert_eq!(alphas, again);

        let tiny = FiniteField::with_subfield(2, 1, 8).unwrap();
        assert!(matches!(
            find_alpha_set(&tiny, 2, 3, 1, 2, AlphaStrategy::CodeBased, 0),
            Err(Error::SearchExhausted(_))
        ));
    }

    #[test]
    fn reference_array_code_repairs_at_the_bound() {
        let big = tower_4096_over_8();
        let family = UniversalFamily::gabidulin(big.clone(), 2, 4, 2, 2).unwrap();
        let code = build_universal_msr_pmds(family, 4, 2, 3, None).unwrap();
        assert_eq!(code.name(), "universal-gabidulin");
        assert_eq!(code.ell(), 16);
        assert_eq!(code.dimension(), 2);
        assert_eq!(code.length(), 8);
        assert_eq!(code.local_code().radix(), 2);

        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..2 {
            let word = code.random_codeword(&mut rng).unwrap();
            for failed in 0..code.length() {
                let mut damaged = word.clone();
                let junk: Vec<u64> = (0..code.ell())
                    .map(|_| rng.gen_range(0..big.size()))
                    .collect();
                damaged.set_column(failed, &junk).unwrap();
                let (column, t) = local_repair_expanded(&code, &damaged, failed, None).unwrap();
                assert_eq!(column, word.column(failed));
                assert_eq!(t.total, 96);
                assert_eq!(t.per_helper, vec![32, 32, 32]);
                assert!(t.meets_bound_exactly());
                assert!(t.regenerating);
                assert_eq!(t.symbol_field.p, 2);
                assert_eq!(t.symbol_field.m, 3);
            }
        }
    }

    #[test]
    fn array_words_encode_and_extract() {
        let big = tower_4096_over_8();
        let family = UniversalFamily::gabidulin(big, 2, 4, 2, 2).unwrap();
        let code = build_universal_msr_pmds(family, 4, 2, 3, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let word = code.random_codeword(&mut rng).unwrap();
        assert!(code.is_codeword(&word).unwrap());
        let message = code.extract_message(&word).unwrap();
        assert_eq!(code.encode(&message).unwrap(), word);

        // Fallback group decode reads exactly n - r columns.
        let mut damaged = word.clone();
        let junk: Vec<u64> = (0..code.ell())
            .map(|_| rng.gen_range(0..code.field().size()))
            .collect();
        damaged.set_column(5, &junk).unwrap();
        let (restored, t) = code.repair_by_decode(&damaged, 1, &[5]).unwrap();
        assert_eq!(restored[0].1, word.column(5));
        assert_eq!(t.helpers.len(), 2);
        assert_eq!(t.total, 32);
        assert!(!t.regenerating);
    }
}
