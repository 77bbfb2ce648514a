//! Certifiers for the erasure and repair guarantees of the array codes, and
//! a failure-injection harness that plays fail/repair scenarios against a
//! stored stripe while accounting for every symbol a repair ships.
//!
//! The erasure certifiers walk patterns in lexicographic order: per-group
//! erasure choices first (group 0 most significant), then the extra subset,
//! then the codeword row. A sweep whose (pattern, row) pair count exceeds the
//! budget falls back to deterministic stratified sampling over the same
//! order, and the certificate records which mode ran. Counterexamples are
//! canonical: workers race in parallel but the smallest enumeration index
//! wins, so repeated runs report the same failing case byte for byte.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::code::{
    solve_erasures, ArrayCode, ArrayCodeword, ErasurePattern, LocalMsrCode, PmdsParams,
    RepairTranscript,
};
use crate::gf::Field;
use crate::matrix::CodeMatrix;
use crate::util::{binomial, combinations};
use crate::{Error, Result};

/// Knobs shared by every certifier.
#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    /// Largest number of (pattern, row) pairs a sweep may touch before it
    /// switches to deterministic stratified sampling.
    pub budget: u64,
    /// Seeds the codeword generator of the repair certifiers; stamped into
    /// the certificate either way.
    pub seed: u64,
    /// Random codewords exercised per repair case.
    pub codewords: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            budget: 1_000_000,
            seed: 0,
            codewords: 3,
        }
    }
}

/// The first failing case of a sweep, in the sweep's own enumeration order.
/// Erasure properties fill `per_group` and `extra` with erased column
/// indices and point `row` at the codeword row whose checks broke. Repair
/// properties reuse `row` as the codeword index and name the helpers in the
/// reason.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub per_group: Vec<Vec<usize>>,
    pub extra: Vec<usize>,
    pub row: usize,
    pub reason: String,
}

/// Outcome of one certification sweep. Field order is fixed, so equal inputs
/// serialize to byte-identical JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub descriptor_sha256: String,
    pub property: String,
    pub pattern_count: u64,
    pub mode: String,
    pub seed: u64,
    pub budget: u64,
    pub checked_pairs: u64,
    pub result: String,
    pub counterexample: Option<Counterexample>,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.result == "pass"
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// SHA-256 of the code's descriptor in compact JSON form. Descriptor maps
/// serialize with sorted keys, so the digest identifies the construction.
pub fn descriptor_sha256(code: &dyn ArrayCode) -> String {
    let text = code.descriptor().to_string();
    let mut hasher = Sha256::new();
    hasher.update(text.as_bytes());
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn sat64(v: u128) -> u64 {
    v.min(u64::MAX as u128) as u64
}

/// Which erasure patterns a sweep walks: every combination of per-group
/// choices, or one within-group choice repeated across all groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum PatternFamily {
    Pmds,
    Sd,
}

impl PatternFamily {
    fn property(self) -> &'static str {
        match self {
            PatternFamily::Pmds => "pmds",
            PatternFamily::Sd => "sd",
        }
    }

    fn count(self, params: &PmdsParams) -> Result<u128> {
        let per_group = binomial(params.n, params.r);
        match self {
            PatternFamily::Sd => Ok(per_group),
            PatternFamily::Pmds => {
                let mut acc: u128 = 1;
                for _ in 0..params.mu {
                    acc = acc.checked_mul(per_group).ok_or_else(|| {
                        Error::TooLarge("erasure pattern space exceeds the counting range".into())
                    })?;
                }
                Ok(acc)
            }
        }
    }

    /// Erased columns of pattern `e_idx`, ascending. Group 0 is the most
    /// significant digit, so ascending indices give lexicographic patterns.
    fn erased_columns(
        self,
        params: &PmdsParams,
        group_subsets: &[Vec<usize>],
        e_idx: u128,
    ) -> Vec<usize> {
        let base = group_subsets.len() as u128;
        let mut picks = vec![0usize; params.mu];
        match self {
            PatternFamily::Sd => {
                for p in picks.iter_mut() {
                    *p = e_idx as usize;
                }
            }
            PatternFamily::Pmds => {
                let mut rest = e_idx;
                for g in (0..params.mu).rev() {
                    picks[g] = (rest % base) as usize;
                    rest /= base;
                }
            }
        }
        let mut erased = Vec::with_capacity(params.mu * params.r);
        for (g, &pick) in picks.iter().enumerate() {
            for &local in &group_subsets[pick] {
                erased.push(g * params.n + local);
            }
        }
        erased
    }
}

fn split_by_group(params: &PmdsParams, erased: &[usize]) -> Vec<Vec<usize>> {
    let mut per_group = vec![Vec::new(); params.mu];
    for &c in erased {
        per_group[params.group_of(c)].push(c);
    }
    per_group
}

/// Certify the partial-MDS property: every group restriction is MDS, and for
/// every choice of r erasures per group the punctured code of every row has
/// minimum distance s + 1.
pub fn certify_pmds(code: &dyn ArrayCode, opts: &VerifyOptions) -> Result<Certificate> {
    certify_erasures(code, PatternFamily::Pmds, opts)
}

/// Certify the sector-disk property: as [`certify_pmds`] but the r erased
/// positions are the same within-group indices in every group.
pub fn certify_sd(code: &dyn ArrayCode, opts: &VerifyOptions) -> Result<Certificate> {
    certify_erasures(code, PatternFamily::Sd, opts)
}

fn certify_erasures(
    code: &dyn ArrayCode,
    family: PatternFamily,
    opts: &VerifyOptions,
) -> Result<Certificate> {
    let params = code.params();
    params.validate()?;
    if opts.budget == 0 {
        return Err(Error::BudgetExceeded(
            "a zero budget cannot check anything".into(),
        ));
    }
    let ell = code.ell();
    let checks: Vec<CodeMatrix> = (0..ell)
        .map(|a| code.row_parity_check(a))
        .collect::<Result<_>>()?;
    let gens: Vec<CodeMatrix> = (0..ell)
        .map(|a| code.row_generator(a))
        .collect::<Result<_>>()?;

    let group_subsets = combinations(params.n, params.r);
    let surv_count = params.mu * (params.n - params.r);
    let t_subsets = combinations(surv_count, params.s);
    let t_count = t_subsets.len() as u128;
    let e_count = family.count(&params)?;
    let unit_count = e_count
        .checked_mul(ell as u128)
        .ok_or_else(|| Error::TooLarge("sweep size exceeds the counting range".into()))?;
    let total_pairs = unit_count
        .checked_mul(t_count)
        .ok_or_else(|| Error::TooLarge("sweep size exceeds the counting range".into()))?;
    if unit_count.checked_mul(opts.budget as u128).is_none() {
        return Err(Error::TooLarge(
            "sweep too large for stratified sampling".into(),
        ));
    }

    let exhaustive = total_pairs <= opts.budget as u128;
    let kept_units: u64 = if exhaustive {
        unit_count as u64
    } else {
        sat64((opts.budget as u128 / t_count.max(1)).max(1).min(unit_count))
    };

    // The per-group MDS preamble always runs in full; only the puncturing
    // sweep is subject to the budget.
    let local_cex = check_local_mds(&params, &gens, &group_subsets);

    let sweep_cex = if local_cex.is_some() {
        None
    } else {
        (0..kept_units)
            .into_par_iter()
            .filter_map(|j| {
                let unit = if exhaustive {
                    j as u128
                } else {
                    j as u128 * unit_count / kept_units as u128
                };
                let e_idx = unit / ell as u128;
                let row = (unit % ell as u128) as usize;
                let erased = family.erased_columns(&params, &group_subsets, e_idx);
                check_punctured_row(&params, &checks[row], &t_subsets, &erased, row)
                    .map(|c| (unit, c))
            })
            .min_by_key(|(unit, _)| *unit)
            .map(|(_, c)| c)
    };

    let counterexample = local_cex.or(sweep_cex);
    Ok(Certificate {
        descriptor_sha256: descriptor_sha256(code),
        property: family.property().to_string(),
        pattern_count: sat64(e_count.saturating_mul(t_count)),
        mode: if exhaustive { "exhaustive" } else { "sampled" }.to_string(),
        seed: opts.seed,
        budget: opts.budget,
        checked_pairs: sat64(kept_units as u128 * t_count),
        result: if counterexample.is_none() {
            "pass"
        } else {
            "fail"
        }
        .to_string(),
        counterexample,
    })
}

/// Every group restriction of every row must be an [n, n - r] MDS code:
/// right dimension, and no r columns of its dual dependent.
fn check_local_mds(
    params: &PmdsParams,
    gens: &[CodeMatrix],
    group_subsets: &[Vec<usize>],
) -> Option<Counterexample> {
    let found = (0..gens.len())
        .into_par_iter()
        .filter_map(|a| {
            for g in 0..params.mu {
                let cols: Vec<usize> = params.group_columns(g).collect();
                let local = gens[a]
                    .select_columns(&cols)
                    .expect("group columns are in range");
                let dim = params.n - params.r;
                if local.rank() != dim {
                    let mut per_group = vec![Vec::new(); params.mu];
                    per_group[g] = cols;
                    return Some((
                        a,
                        Counterexample {
                            per_group,
                            extra: Vec::new(),
                            row: a,
                            reason: format!(
                                "restriction to group {g} has dimension {}, expected {dim}",
                                local.rank()
                            ),
                        },
                    ));
                }
                let dual = local.null_space_basis();
                for subset in group_subsets {
                    let picked = dual
                        .select_columns(subset)
                        .expect("subset columns are in range");
                    if picked.rank() != params.r {
                        let mut per_group = vec![Vec::new(); params.mu];
                        per_group[g] = subset.iter().map(|&c| g * params.n + c).collect();
                        return Some((
                            a,
                            Counterexample {
                                per_group: per_group.clone(),
                                extra: Vec::new(),
                                row: a,
                                reason: format!(
                                    "group {g} cannot correct the r erasures {:?}",
                                    per_group[g]
                                ),
                            },
                        ));
                    }
                }
            }
            None
        })
        .min_by_key(|(a, _)| *a);
    found.map(|(_, c)| c)
}

/// One (pattern, row) unit of the puncturing sweep: eliminate the erased
/// columns from the row's checks and test every s-subset of the survivors
/// against the remaining rows.
fn check_punctured_row(
    params: &PmdsParams,
    h: &CodeMatrix,
    t_subsets: &[Vec<usize>],
    erased: &[usize],
    row: usize,
) -> Option<Counterexample> {
    let len = params.length();
    let e_len = erased.len();
    let mut gone = vec![false; len];
    for &c in erased {
        gone[c] = true;
    }
    let survivors: Vec<usize> = (0..len).filter(|&c| !gone[c]).collect();
    let perm: Vec<usize> = erased.iter().chain(survivors.iter()).copied().collect();
    let m = h.select_columns(&perm).expect("columns are in range");
    let (red, pivots) = m.rref();

    let fail = |extra: Vec<usize>, reason: String| Counterexample {
        per_group: split_by_group(params, erased),
        extra,
        row,
        reason,
    };

    if pivots.len() < h.rows() {
        return Some(fail(
            Vec::new(),
            "parity rows of this row code are linearly dependent".into(),
        ));
    }
    let in_e = pivots.iter().take_while(|&&c| c < e_len).count();
    if in_e < e_len {
        return Some(fail(
            Vec::new(),
            "a nonzero codeword is supported entirely on the erased columns".into(),
        ));
    }

    let tail_rows: Vec<usize> = (e_len..h.rows()).collect();
    let s_cols: Vec<usize> = (e_len..m.cols()).collect();
    let punctured = red
        .select_rows(&tail_rows)
        .and_then(|t| t.select_columns(&s_cols))
        .expect("tail rows and survivor columns are in range");
    for t in t_subsets {
        let picked = punctured
            .select_columns(t)
            .expect("subset columns are in range");
        if picked.rank() != params.s {
            let extra: Vec<usize> = t.iter().map(|&slot| survivors[slot]).collect();
            return Some(fail(
                extra.clone(),
                format!("punctured distance falls below s + 1 at columns {extra:?}"),
            ));
        }
    }
    None
}

/// Which repair guarantee [`certify_msr`] exercises.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MsrMode {
    /// Single in-group failure, every group, every d-subset of in-group
    /// helpers.
    Local { d: usize },
    /// Single surviving column after every choice of r punctures per group.
    Global,
}

/// Certify bandwidth-optimal repair: the rebuilt column must match the
/// original data and the transcript must hit the cut-set value exactly, for
/// every case and every sampled codeword. The failed column (and, in global
/// mode, the punctured ones) are overwritten with wrong values first, so a
/// repair that peeks at them fails the data comparison.
pub fn certify_msr(code: &dyn ArrayCode, mode: MsrMode, opts: &VerifyOptions) -> Result<Certificate> {
    match mode {
        MsrMode::Local { d } => certify_msr_local(code, d, opts),
        MsrMode::Global => certify_msr_global(code, opts),
    }
}

fn sample_codewords(code: &dyn ArrayCode, opts: &VerifyOptions) -> Result<Vec<ArrayCodeword>> {
    if opts.codewords == 0 {
        return Err(Error::InvalidParameters(
            "at least one codeword is needed".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    (0..opts.codewords)
        .map(|_| code.random_codeword(&mut rng))
        .collect()
}

/// Overwrite each listed column with values guaranteed to differ from the
/// stored ones.
fn tamper_columns(field: &Field, word: &ArrayCodeword, cols: &[usize]) -> ArrayCodeword {
    let mut out = word.clone();
    for &c in cols {
        for i in 0..word.rows() {
            out.set(i, c, field.add(word.get(i, c), 1));
        }
    }
    out
}

fn stride(j: u64, kept: u64, total: u128, exhaustive: bool) -> u128 {
    if exhaustive {
        j as u128
    } else {
        j as u128 * total / kept as u128
    }
}

fn certify_msr_local(code: &dyn ArrayCode, d: usize, opts: &VerifyOptions) -> Result<Certificate> {
    let msr = code.as_local_msr().ok_or_else(|| {
        Error::InvalidForConstruction("this code has no in-group regenerating repair".into())
    })?;
    if d != msr.repair_d() {
        return Err(Error::InvalidHelpers(format!(
            "repair contacts {} helpers, not {d}",
            msr.repair_d()
        )));
    }
    if opts.budget == 0 {
        return Err(Error::BudgetExceeded(
            "a zero budget cannot check anything".into(),
        ));
    }
    let params = code.params();
    let ell = code.ell();
    let words = sample_codewords(code, opts)?;
    let helper_choices = combinations(params.n - 1, d);
    let per_word = (params.length() as u128) * helper_choices.len() as u128;
    let total = per_word * words.len() as u128;
    let exhaustive = total <= opts.budget as u128;
    let kept: u64 = if exhaustive {
        total as u64
    } else {
        sat64((opts.budget as u128).max(1).min(total))
    };
    let (bound_num, bound_den) = RepairTranscript::cut_set_bound(1, d, ell, params.n, params.r);
    let field = code.field().clone();

    let found = (0..kept)
        .into_par_iter()
        .filter_map(|j| {
            let case = stride(j, kept, total, exhaustive);
            let w = (case / per_word) as usize;
            let rest = case % per_word;
            let failed = (rest / helper_choices.len() as u128) as usize;
            let choice = (rest % helper_choices.len() as u128) as usize;
            let g = params.group_of(failed);
            let in_group: Vec<usize> = params.group_columns(g).filter(|&c| c != failed).collect();
            let helpers: Vec<usize> = helper_choices[choice].iter().map(|&i| in_group[i]).collect();

            let original = &words[w];
            let tampered = tamper_columns(&field, original, &[failed]);
            let verdict = check_one_repair(
                msr.repair_in_group(&tampered, failed, &helpers),
                original,
                failed,
                &helpers,
                bound_num,
                bound_den,
            );
            verdict.map(|reason| {
                let mut per_group = vec![Vec::new(); params.mu];
                per_group[g] = vec![failed];
                (
                    case,
                    Counterexample {
                        per_group,
                        extra: Vec::new(),
                        row: w,
                        reason: format!("helpers {helpers:?}: {reason}"),
                    },
                )
            })
        })
        .min_by_key(|(case, _)| *case);

    Ok(finish_msr_certificate(
        code,
        "msr-local",
        total,
        exhaustive,
        kept,
        opts,
        found.map(|(_, c)| c),
    ))
}

fn certify_msr_global(code: &dyn ArrayCode, opts: &VerifyOptions) -> Result<Certificate> {
    let msr = code.as_global_msr().ok_or_else(|| {
        Error::InvalidForConstruction("this code has no post-puncturing repair".into())
    })?;
    if opts.budget == 0 {
        return Err(Error::BudgetExceeded(
            "a zero budget cannot check anything".into(),
        ));
    }
    let params = code.params();
    let ell = code.ell();
    let words = sample_codewords(code, opts)?;
    let group_subsets = combinations(params.n, params.r);
    let e_count = PatternFamily::Pmds.count(&params)?;
    let surv_count = params.mu * (params.n - params.r);
    let per_word = e_count
        .checked_mul(surv_count as u128)
        .ok_or_else(|| Error::TooLarge("sweep size exceeds the counting range".into()))?;
    let total = per_word * words.len() as u128;
    let exhaustive = total <= opts.budget as u128;
    let kept: u64 = if exhaustive {
        total as u64
    } else {
        sat64((opts.budget as u128).max(1).min(total))
    };
    let (bound_num, bound_den) =
        RepairTranscript::cut_set_bound(1, surv_count - 1, ell, surv_count, params.s);
    let field = code.field().clone();

    let found = (0..kept)
        .into_par_iter()
        .filter_map(|j| {
            let case = stride(j, kept, total, exhaustive);
            let w = (case / per_word) as usize;
            let rest = case % per_word;
            let e_idx = rest / surv_count as u128;
            let slot = (rest % surv_count as u128) as usize;
            let erased =
                PatternFamily::Pmds.erased_columns(&params, &group_subsets, e_idx);
            let pattern = ErasurePattern::new(params, &split_by_group(&params, &erased), &[])
                .expect("per-group r-subsets are admissible");
            let survivors = pattern.survivors();
            let failed = survivors[slot];

            let original = &words[w];
            let mut junked = erased.clone();
            junked.push(failed);
            let tampered = tamper_columns(&field, original, &junked);
            let helpers: Vec<usize> = survivors.iter().copied().filter(|&c| c != failed).collect();
            let verdict = check_one_repair(
                msr.global_repair(&tampered, &pattern, failed),
                original,
                failed,
                &helpers,
                bound_num,
                bound_den,
            );
            verdict.map(|reason| {
                (
                    case,
                    Counterexample {
                        per_group: split_by_group(&params, &erased),
                        extra: vec![failed],
                        row: w,
                        reason,
                    },
                )
            })
        })
        .min_by_key(|(case, _)| *case);

    Ok(finish_msr_certificate(
        code,
        "msr-global",
        total,
        exhaustive,
        kept,
        opts,
        found.map(|(_, c)| c),
    ))
}

/// Shared per-case validation: repaired data, declared helpers, declared
/// bound, and exact bound attainment.
fn check_one_repair(
    outcome: Result<(Vec<u64>, RepairTranscript)>,
    original: &ArrayCodeword,
    failed: usize,
    helpers: &[usize],
    bound_num: u64,
    bound_den: u64,
) -> Option<String> {
    let (column, transcript) = match outcome {
        Ok(pair) => pair,
        Err(e) => return Some(format!("repair failed: {e}")),
    };
    if column != original.column(failed) {
        return Some("repaired column disagrees with the original data".into());
    }
    if transcript.failed != vec![failed] {
        return Some(format!(
            "transcript names failed columns {:?} instead of [{failed}]",
            transcript.failed
        ));
    }
    let mut declared = transcript.helpers.clone();
    declared.sort_unstable();
    let mut expected = helpers.to_vec();
    expected.sort_unstable();
    if declared != expected {
        return Some(format!(
            "transcript names helpers {declared:?} instead of {expected:?}"
        ));
    }
    if transcript.bound_num != bound_num || transcript.bound_den != bound_den {
        return Some(format!(
            "transcript carries cut-set value {}/{} instead of {bound_num}/{bound_den}",
            transcript.bound_num, transcript.bound_den
        ));
    }
    if !transcript.respects_bound() {
        return Some(format!(
            "total {} undercuts the cut-set value {bound_num}/{bound_den}, accounting is broken",
            transcript.total
        ));
    }
    if !transcript.meets_bound_exactly() {
        return Some(format!(
            "total {} exceeds the cut-set value {bound_num}/{bound_den}",
            transcript.total
        ));
    }
    None
}

fn finish_msr_certificate(
    code: &dyn ArrayCode,
    property: &str,
    total: u128,
    exhaustive: bool,
    kept: u64,
    opts: &VerifyOptions,
    counterexample: Option<Counterexample>,
) -> Certificate {
    Certificate {
        descriptor_sha256: descriptor_sha256(code),
        property: property.to_string(),
        pattern_count: sat64(total),
        mode: if exhaustive { "exhaustive" } else { "sampled" }.to_string(),
        seed: opts.seed,
        budget: opts.budget,
        checked_pairs: kept,
        result: if counterexample.is_none() {
            "pass"
        } else {
            "fail"
        }
        .to_string(),
        counterexample,
    }
}

/// The wrapped code with one row of every per-row check matrix forced to
/// zero. Encoding is untouched, so certifiers must reject the result.
pub struct ZeroedParityRow<'a> {
    inner: &'a dyn ArrayCode,
    parity_row: usize,
}

impl<'a> ZeroedParityRow<'a> {
    pub fn new(inner: &'a dyn ArrayCode, parity_row: usize) -> Result<Self> {
        let checks = inner.length() - inner.dimension();
        if parity_row >= checks {
            return Err(Error::RowOutOfRange);
        }
        Ok(ZeroedParityRow { inner, parity_row })
    }
}

impl ArrayCode for ZeroedParityRow<'_> {
    fn name(&self) -> &str {
        "mutated"
    }

    fn field(&self) -> &Field {
        self.inner.field()
    }

    fn params(&self) -> PmdsParams {
        self.inner.params()
    }

    fn ell(&self) -> usize {
        self.inner.ell()
    }

    fn row_generator(&self, a: usize) -> Result<CodeMatrix> {
        self.inner.row_generator(a)
    }

    fn row_parity_check(&self, a: usize) -> Result<CodeMatrix> {
        let mut h = self.inner.row_parity_check(a)?;
        for c in 0..h.cols() {
            h.set(self.parity_row, c, 0);
        }
        Ok(h)
    }

    fn descriptor(&self) -> Value {
        json!({
            "construction": "mutated",
            "zeroed_parity_row": self.parity_row,
            "inner": self.inner.descriptor(),
        })
    }
}

/// The wrapped code repaired the blunt way: read n - r of the given helper
/// columns in full and solve the local checks. Correct data, but the
/// transcript reads (n - r) * ell symbols against a cut-set value of
/// d * ell / b, so [`certify_msr`] rejects it whenever b > 1.
pub struct DecodeRepairCode<'a> {
    inner: &'a dyn LocalMsrCode,
}

impl<'a> DecodeRepairCode<'a> {
    pub fn new(inner: &'a dyn LocalMsrCode) -> Self {
        DecodeRepairCode { inner }
    }
}

impl ArrayCode for DecodeRepairCode<'_> {
    fn name(&self) -> &str {
        "decode-repair"
    }

    fn field(&self) -> &Field {
        self.inner.field()
    }

    fn params(&self) -> PmdsParams {
        self.inner.params()
    }

    fn ell(&self) -> usize {
        self.inner.ell()
    }

    fn row_generator(&self, a: usize) -> Result<CodeMatrix> {
        self.inner.row_generator(a)
    }

    fn row_parity_check(&self, a: usize) -> Result<CodeMatrix> {
        self.inner.row_parity_check(a)
    }

    fn descriptor(&self) -> Value {
        json!({
            "construction": "decode-repair",
            "inner": self.inner.descriptor(),
        })
    }

    fn as_local_msr(&self) -> Option<&dyn LocalMsrCode> {
        Some(self)
    }
}

impl LocalMsrCode for DecodeRepairCode<'_> {
    fn repair_d(&self) -> usize {
        self.inner.repair_d()
    }

    fn local_row_parity(&self, a: usize, g: usize) -> Result<CodeMatrix> {
        self.inner.local_row_parity(a, g)
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
            return Err(Error::InvalidHelpers(format!("column {failed} out of range")));
        }
        let g = p.group_of(failed);
        let d = self.repair_d();
        if helpers.len() != d {
            return Err(Error::WrongHelperCount {
                expected: d,
                got: helpers.len(),
            });
        }
        if helpers.contains(&failed) {
            return Err(Error::HelperContainsFailed);
        }
        let mut distinct = helpers.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() != d || distinct.iter().any(|&c| p.group_of(c) != g) {
            return Err(Error::InvalidHelpers(
                "helpers must be distinct columns of the failed group".into(),
            ));
        }

        let read: Vec<usize> = helpers.iter().copied().take(p.n - p.r).collect();
        let skipped: Vec<usize> = p
            .group_columns(g)
            .filter(|c| !read.contains(c))
            .map(|c| c - g * p.n)
            .collect();
        let ell = self.ell();
        let mut column = Vec::with_capacity(ell);
        for a in 0..ell {
            let h = self.local_row_parity(a, g)?;
            let local_row: Vec<u64> = p.group_columns(g).map(|c| word.get(a, c)).collect();
            let solved = solve_erasures(&h, &local_row, &skipped, a)?;
            column.push(solved[failed - g * p.n]);
        }

        let per_helper: Vec<u64> = helpers
            .iter()
            .map(|c| if read.contains(c) { ell as u64 } else { 0 })
            .collect();
        let (num, den) = RepairTranscript::cut_set_bound(1, d, ell, p.n, p.r);
        let transcript = RepairTranscript::new(
            vec![failed],
            helpers.to_vec(),
            per_helper,
            num,
            den,
            false,
            self.field(),
        );
        Ok((column, transcript))
    }
}

/// One step of a stored-cluster scenario.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "lowercase")]
pub enum ScenarioEvent {
    Fail { node: usize },
    Repair,
}

pub fn parse_scenario(text: &str) -> Result<Vec<ScenarioEvent>> {
    Ok(serde_json::from_str(text)?)
}

/// One repair mechanism fired during a repair event.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepairAction {
    pub mechanism: String,
    pub recovered: Vec<usize>,
    pub symbols_read: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventReport {
    pub index: usize,
    pub event: String,
    pub node: Option<usize>,
    pub actions: Vec<RepairAction>,
    pub data_loss: bool,
    pub failed_after: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterReport {
    pub events: Vec<EventReport>,
    pub total_symbols_read: u64,
    pub data_loss: bool,
    pub data_loss_events: Vec<usize>,
    pub failed_at_end: Vec<usize>,
}

impl ClusterReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Play a fail/repair scenario against one random stripe of the code.
///
/// Failed columns are overwritten with wrong values immediately, so any
/// mechanism that peeks at them corrupts its own output and trips the
/// comparison against the original stripe. A repair event dispatches, in
/// order: single-failure regeneration on a fully punctured stripe (one group
/// r + 1 down, every other group exactly r, codes with a post-puncturing
/// repair only), then per-group work for groups with at most r failures
/// (regenerating repair for a lone failure when the code has one, local
/// erasure decoding otherwise), then one full decode for whatever remains if
/// the leftover pattern is admissible. An inadmissible leftover is recorded
/// as data loss and the columns stay failed.
pub fn simulate_cluster(
    code: &dyn ArrayCode,
    scenario: &[ScenarioEvent],
    seed: u64,
) -> Result<ClusterReport> {
    let params = code.params();
    let ell = code.ell();
    let field = code.field().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let original = code.random_codeword(&mut rng)?;
    let mut word = original.clone();

    // Insertion order matters: the degraded-stripe dispatch regenerates the
    // most recent failure of the overfull group.
    let mut failed: Vec<usize> = Vec::new();
    let mut events = Vec::with_capacity(scenario.len());
    let mut total_symbols: u64 = 0;
    let mut data_loss_events = Vec::new();

    for (index, event) in scenario.iter().enumerate() {
        let mut report = EventReport {
            index,
            event: String::new(),
            node: None,
            actions: Vec::new(),
            data_loss: false,
            failed_after: Vec::new(),
        };
        match event {
            ScenarioEvent::Fail { node } => {
                report.event = "fail".into();
                report.node = Some(*node);
                if *node >= params.length() {
                    return Err(Error::InvalidParameters(format!(
                        "scenario fails node {node}, the code has {} columns",
                        params.length()
                    )));
                }
                if !failed.contains(node) {
                    failed.push(*node);
                    let junk: Vec<u64> = (0..ell)
                        .map(|i| field.add(original.get(i, *node), 1))
                        .collect();
                    word.set_column(*node, &junk)?;
                }
            }
            ScenarioEvent::Repair => {
                report.event = "repair".into();
                let loss = run_repair_event(
                    code,
                    &original,
                    &mut word,
                    &mut failed,
                    &mut report.actions,
                )?;
                report.data_loss = loss;
                if loss {
                    data_loss_events.push(index);
                }
                for action in &report.actions {
                    total_symbols += action.symbols_read;
                }
            }
        }
        report.failed_after = {
            let mut sorted = failed.clone();
            sorted.sort_unstable();
            sorted
        };
        events.push(report);
    }

    let mut failed_at_end = failed;
    failed_at_end.sort_unstable();
    Ok(ClusterReport {
        events,
        total_symbols_read: total_symbols,
        data_loss: !data_loss_events.is_empty(),
        data_loss_events,
        failed_at_end,
    })
}

fn confirm_column(original: &ArrayCodeword, col: usize, values: &[u64]) -> Result<()> {
    if values != original.column(col).as_slice() {
        return Err(Error::Unrecoverable { row: None });
    }
    Ok(())
}

fn run_repair_event(
    code: &dyn ArrayCode,
    original: &ArrayCodeword,
    word: &mut ArrayCodeword,
    failed: &mut Vec<usize>,
    actions: &mut Vec<RepairAction>,
) -> Result<bool> {
    let params = code.params();
    let ell = code.ell();
    if failed.is_empty() {
        return Ok(false);
    }

    let mut by_group: Vec<Vec<usize>> = vec![Vec::new(); params.mu];
    for &c in failed.iter() {
        by_group[params.group_of(c)].push(c);
    }

    // Degraded stripe: one group r + 1 down, all others exactly r. The
    // punctured columns are treated as retired and only the newest failure
    // is rebuilt.
    if let Some(msr) = code.as_global_msr() {
        let overfull: Vec<usize> = (0..params.mu)
            .filter(|&g| by_group[g].len() == params.r + 1)
            .collect();
        let rest_exact = (0..params.mu)
            .filter(|g| !overfull.contains(g))
            .all(|g| by_group[g].len() == params.r);
        if overfull.len() == 1 && rest_exact {
            let target = *by_group[overfull[0]].last().expect("group is overfull");
            let mut per_group = by_group.clone();
            per_group[overfull[0]].retain(|&c| c != target);
            let pattern = ErasurePattern::new(params, &per_group, &[])?;
            let (column, transcript) = msr.global_repair(word, &pattern, target)?;
            confirm_column(original, target, &column)?;
            word.set_column(target, &column)?;
            failed.retain(|&c| c != target);
            actions.push(RepairAction {
                mechanism: "msr-global".into(),
                recovered: vec![target],
                symbols_read: transcript.total,
            });
            return Ok(false);
        }
    }

    // In-group work for lightly hit groups.
    if let Some(msr) = code.as_local_msr() {
        for g in 0..params.mu {
            let count = by_group[g].len();
            if count == 0 || count > params.r {
                continue;
            }
            if count == 1 {
                let lost = by_group[g][0];
                let helpers: Vec<usize> = params
                    .group_columns(g)
                    .filter(|&c| c != lost)
                    .take(msr.repair_d())
                    .collect();
                let (column, transcript) = msr.repair_in_group(word, lost, &helpers)?;
                confirm_column(original, lost, &column)?;
                word.set_column(lost, &column)?;
                failed.retain(|&c| c != lost);
                actions.push(RepairAction {
                    mechanism: "msr-local".into(),
                    recovered: vec![lost],
                    symbols_read: transcript.total,
                });
            } else {
                let mut lost = by_group[g].clone();
                lost.sort_unstable();
                let (columns, transcript) = msr.repair_by_decode(word, g, &lost)?;
                for (col, values) in &columns {
                    confirm_column(original, *col, values)?;
                    word.set_column(*col, values)?;
                }
                failed.retain(|c| !lost.contains(c));
                actions.push(RepairAction {
                    mechanism: "local-decode".into(),
                    recovered: lost,
                    symbols_read: transcript.total,
                });
            }
        }
    }

    // Whatever is left needs the global guarantee.
    if failed.is_empty() {
        return Ok(false);
    }
    let remaining: Vec<usize> = failed.clone();
    let pattern = ErasurePattern::from_columns(params, &remaining)?;
    if !pattern.pmds_admissible() {
        return Ok(true);
    }
    match code.decode_erased(word, &pattern) {
        Ok(decoded) => {
            if decoded != *original {
                return Err(Error::Unrecoverable { row: None });
            }
            let symbols = (pattern.survivors().len() * ell) as u64;
            *word = decoded;
            failed.clear();
            let mut recovered = remaining;
            recovered.sort_unstable();
            actions.push(RepairAction {
                mechanism: "pmds-decode".into(),
                recovered,
                symbols_read: symbols,
            });
            Ok(false)
        }
        Err(Error::Unrecoverable { .. }) | Err(Error::WordNotInCode) => Ok(true),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FiniteField;
    use crate::global::{build_compact_grouping_matrix, build_global_msr_pmds, compact_inner_code};
    use crate::pmds2::{build_pmds2, BlaumRowCode, Pmds2Mode};

    fn reference_pmds2() -> crate::pmds2::LocalMsrPmds2Code {
        let field = FiniteField::gf(2, 6).unwrap();
        build_pmds2(field, 2, 4, 2, 3, Pmds2Mode::Pmds).unwrap()
    }

    #[test]
    fn reference_code_certifies_as_pmds() {
        let code = reference_pmds2();
        let cert = certify_pmds(&code, &VerifyOptions::default()).unwrap();
        assert!(cert.passed(), "{:?}", cert.counterexample);
        assert_eq!(cert.mode, "exhaustive");
        assert_eq!(cert.property, "pmds");
        // C(4,2)^2 per-group choices times C(4,2) extra subsets.
        assert_eq!(cert.pattern_count, 36 * 6);
        assert_eq!(cert.checked_pairs, 36 * 16 * 6);
        assert_eq!(cert.descriptor_sha256.len(), 64);
    }

    #[test]
    fn sd_mode_certifies_and_its_patterns_nest_inside_pmds() {
        let field = FiniteField::gf(2, 5).unwrap();
        let code = build_pmds2(field, 2, 4, 2, 3, Pmds2Mode::Sd).unwrap();
        let cert = certify_sd(&code, &VerifyOptions::default()).unwrap();
        assert!(cert.passed(), "{:?}", cert.counterexample);
        assert_eq!(cert.pattern_count, 6 * 6);

        // Every aligned pattern appears among the free per-group patterns.
        let params = code.params();
        let subsets = combinations(params.n, params.r);
        let pmds: Vec<Vec<usize>> = (0..PatternFamily::Pmds.count(&params).unwrap())
            .map(|e| PatternFamily::Pmds.erased_columns(&params, &subsets, e))
            .collect();
        for e in 0..PatternFamily::Sd.count(&params).unwrap() {
            let aligned = PatternFamily::Sd.erased_columns(&params, &subsets, e);
            assert!(pmds.contains(&aligned));
        }
    }

    #[test]
    fn pmds_certificate_covers_the_sd_certificate() {
        let code = reference_pmds2();
        let opts = VerifyOptions::default();
        assert!(certify_pmds(&code, &opts).unwrap().passed());
        assert!(certify_sd(&code, &opts).unwrap().passed());
    }

    #[test]
    fn scalar_two_parity_code_certifies() {
        let field = FiniteField::gf(2, 4).unwrap();
        let scalar = BlaumRowCode::new(field, 2, 4, 1, &[0, 1, 2, 3], 5, None)
            .unwrap()
            .as_scalar_code()
            .unwrap();
        let cert = certify_pmds(&scalar, &VerifyOptions::default()).unwrap();
        assert!(cert.passed(), "{:?}", cert.counterexample);
        assert_eq!(cert.mode, "exhaustive");
    }

    #[test]
    fn zeroing_any_parity_row_is_caught() {
        let code = reference_pmds2();
        let checks = code.length() - code.dimension();
        for parity_row in 0..checks {
            let mutated = ZeroedParityRow::new(&code, parity_row).unwrap();
            let cert = certify_pmds(&mutated, &VerifyOptions::default()).unwrap();
            assert!(!cert.passed(), "parity row {parity_row} slipped through");
            assert!(cert.counterexample.is_some());
        }
        assert!(ZeroedParityRow::new(&code, checks).is_err());
    }

    #[test]
    fn certificates_are_reproducible_and_sampling_is_deterministic() {
        let code = reference_pmds2();
        let opts = VerifyOptions {
            budget: 500,
            ..VerifyOptions::default()
        };
        let one = certify_pmds(&code, &opts).unwrap();
        let two = certify_pmds(&code, &opts).unwrap();
        assert_eq!(one.mode, "sampled");
        assert!(one.checked_pairs <= 500);
        assert!(one.passed());
        assert_eq!(one.to_json().unwrap(), two.to_json().unwrap());

        let full = certify_pmds(&code, &VerifyOptions::default()).unwrap();
        let again = certify_pmds(&code, &VerifyOptions::default()).unwrap();
        assert_eq!(full.to_json().unwrap(), again.to_json().unwrap());
        assert_eq!(
            full.descriptor_sha256,
            descriptor_sha256(&code),
            "hash must cover the descriptor"
        );
    }

    #[test]
    fn zero_budget_is_rejected() {
        let code = reference_pmds2();
        let opts = VerifyOptions {
            budget: 0,
            ..VerifyOptions::default()
        };
        assert!(matches!(
            certify_pmds(&code, &opts),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn local_repair_certifies_at_the_bound() {
        let code = reference_pmds2();
        let opts = VerifyOptions {
            codewords: 2,
            ..VerifyOptions::default()
        };
        let cert = certify_msr(&code, MsrMode::Local { d: 3 }, &opts).unwrap();
        assert!(cert.passed(), "{:?}", cert.counterexample);
        assert_eq!(cert.property, "msr-local");
        // 8 columns, C(3,3) helper sets, 2 codewords.
        assert_eq!(cert.pattern_count, 16);
        assert!(matches!(
            certify_msr(&code, MsrMode::Local { d: 2 }, &opts),
            Err(Error::InvalidHelpers(_))
        ));
    }

    #[test]
    fn decode_based_repair_fails_the_bound_check() {
        let code = reference_pmds2();
        let naive = DecodeRepairCode::new(&code);
        let opts = VerifyOptions {
            codewords: 1,
            ..VerifyOptions::default()
        };
        let cert = certify_msr(&naive, MsrMode::Local { d: 3 }, &opts).unwrap();
        assert!(!cert.passed());
        let cex = cert.counterexample.unwrap();
        assert!(cex.reason.contains("exceeds"), "{}", cex.reason);

        // The data itself is still right: only the bandwidth is wrong.
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let word = code.random_codeword(&mut rng).unwrap();
        let tampered = tamper_columns(code.field(), &word, &[1]);
        let (col, tr) = naive.repair_in_group(&tampered, 1, &[0, 2, 3]).unwrap();
        assert_eq!(col, word.column(1));
        assert!(tr.respects_bound());
        assert!(!tr.meets_bound_exactly());
        assert_eq!(tr.total, 32);
    }

    #[test]
    fn global_repair_certifies_at_the_bound() {
        let field = FiniteField::with_subfield(3, 1, 6).unwrap();
        let inner = compact_inner_code(&field.subfield().unwrap()).unwrap();
        let b = build_compact_grouping_matrix(&field, 2, &inner).unwrap();
        let params = PmdsParams::new(2, 3, 1, 2).unwrap();
        let code = build_global_msr_pmds(field, params, b, &inner).unwrap();
        let opts = VerifyOptions {
            codewords: 1,
            ..VerifyOptions::default()
        };
        let cert = certify_msr(&code, MsrMode::Global, &opts).unwrap();
        assert!(cert.passed(), "{:?}", cert.counterexample);
        assert_eq!(cert.property, "msr-global");
        // 9 puncturing patterns times 4 survivors.
        assert_eq!(cert.pattern_count, 36);

        let no_global = reference_pmds2();
        assert!(matches!(
            certify_msr(&no_global, MsrMode::Global, &opts),
            Err(Error::InvalidForConstruction(_))
        ));
    }

    #[test]
    fn certifier_agrees_with_the_decode_oracle() {
        let code = reference_pmds2();
        let params = code.params();
        let cert = certify_pmds(&code, &VerifyOptions::default()).unwrap();

        let subsets = combinations(params.n, params.r);
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let words: Vec<ArrayCodeword> = (0..3)
            .map(|_| code.random_codeword(&mut rng).unwrap())
            .collect();
        let mut all_decoded = true;
        for e in 0..PatternFamily::Pmds.count(&params).unwrap() {
            let erased = PatternFamily::Pmds.erased_columns(&params, &subsets, e);
            let survivors: Vec<usize> = (0..params.length())
                .filter(|c| !erased.contains(c))
                .collect();
            for extra in combinations(survivors.len(), params.s) {
                let x: Vec<usize> = extra.iter().map(|&i| survivors[i]).collect();
                let pattern =
                    ErasurePattern::new(params, &split_by_group(&params, &erased), &x).unwrap();
                for word in &words {
                    let gone = pattern.erased();
                    let tampered = tamper_columns(code.field(), word, &gone);
                    match code.decode_erased(&tampered, &pattern) {
                        Ok(decoded) => {
                            if decoded != *word {
                                all_decoded = false;
                            }
                        }
                        Err(_) => all_decoded = false,
                    }
                }
            }
        }
        assert_eq!(cert.passed(), all_decoded);
        assert!(all_decoded);

        // And both sides reject the mutated code.
        let mutated = ZeroedParityRow::new(&code, 0).unwrap();
        let bad_cert = certify_pmds(&mutated, &VerifyOptions::default()).unwrap();
        assert!(!bad_cert.passed());
        let cex = bad_cert.counterexample.unwrap();
        let pattern = ErasurePattern::new(params, &cex.per_group, &cex.extra).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let word = mutated.random_codeword(&mut rng).unwrap();
        let tampered = tamper_columns(mutated.field(), &word, &pattern.erased());
        let oracle = mutated.decode_erased(&tampered, &pattern);
        assert!(oracle.is_err() || oracle.unwrap() != word);
    }

    #[test]
    fn layered_failures_recover_with_layered_mechanisms() {
        // Three groups of five, two local parities each, two global parities:
        // two failures decode locally, a lone failure regenerates, and a
        // group four down leans on the global checks.
        let field = FiniteField::gf(2, 7).unwrap();
        let code = build_pmds2(field, 3, 5, 2, 4, Pmds2Mode::Pmds).unwrap();
        assert_eq!(code.ell(), 32);
        let scenario = parse_scenario(
            r#"[
                {"event":"fail","node":0},{"event":"fail","node":1},
                {"event":"fail","node":5},
                {"event":"fail","node":10},{"event":"fail","node":11},
                {"event":"fail","node":12},{"event":"fail","node":13},
                {"event":"repair"}
            ]"#,
        )
        .unwrap();
        let report = simulate_cluster(&code, &scenario, 7).unwrap();
        assert!(!report.data_loss);
        assert!(report.failed_at_end.is_empty());
        let repair = report.events.last().unwrap();
        let mechanisms: Vec<&str> = repair
            .actions
            .iter()
            .map(|a| a.mechanism.as_str())
            .collect();
        assert_eq!(mechanisms, vec!["local-decode", "msr-local", "pmds-decode"]);
        // (n - r) * ell, d * ell / b, survivors * ell.
        assert_eq!(repair.actions[0].symbols_read, 3 * 32);
        assert_eq!(repair.actions[1].symbols_read, 4 * 32 / 2);
        assert_eq!(repair.actions[2].symbols_read, 11 * 32);
        assert_eq!(report.total_symbols_read, 96 + 64 + 352);
    }

    #[test]
    fn empty_scenario_reads_nothing() {
        let code = reference_pmds2();
        let report = simulate_cluster(&code, &[], 1).unwrap();
        assert_eq!(report.total_symbols_read, 0);
        assert!(report.events.is_empty());
        assert!(!report.data_loss);

        let idle = simulate_cluster(&code, &[ScenarioEvent::Repair], 1).unwrap();
        assert_eq!(idle.total_symbols_read, 0);
        assert!(idle.events[0].actions.is_empty());
    }

    #[test]
    fn concentrated_failures_beyond_the_guarantee_flag_data_loss() {
        let field = FiniteField::gf(2, 7).unwrap();
        let code = build_pmds2(field, 3, 5, 2, 4, Pmds2Mode::Pmds).unwrap();
        // r + s + 1 failures in one group: overflow 3 > s = 2.
        let mut scenario: Vec<ScenarioEvent> =
            (0..5).map(|node| ScenarioEvent::Fail { node }).collect();
        scenario.push(ScenarioEvent::Repair);
        let report = simulate_cluster(&code, &scenario, 3).unwrap();
        assert!(report.data_loss);
        assert_eq!(report.data_loss_events, vec![5]);
        assert_eq!(report.failed_at_end, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn degraded_stripe_uses_the_post_puncturing_repair() {
        let field = FiniteField::with_subfield(3, 1, 6).unwrap();
        let inner = compact_inner_code(&field.subfield().unwrap()).unwrap();
        let b = build_compact_grouping_matrix(&field, 2, &inner).unwrap();
        let params = PmdsParams::new(2, 3, 1, 2).unwrap();
        let code = build_global_msr_pmds(field, params, b, &inner).unwrap();
        // Retire one column per group, then lose one more and repair it.
        let scenario = parse_scenario(
            r#"[
                {"event":"fail","node":0},
                {"event":"fail","node":3},
                {"event":"fail","node":4},
                {"event":"repair"}
            ]"#,
        )
        .unwrap();
        let report = simulate_cluster(&code, &scenario, 11).unwrap();
        assert!(!report.data_loss);
        let repair = report.events.last().unwrap();
        assert_eq!(repair.actions.len(), 1);
        assert_eq!(repair.actions[0].mechanism, "msr-global");
        assert_eq!(repair.actions[0].recovered, vec![4]);
        assert_eq!(repair.actions[0].symbols_read, 96);
        // The retired punctures stay failed.
        assert_eq!(report.failed_at_end, vec![0, 3]);
    }

    #[test]
    fn scenario_wire_format_round_trips() {
        let text = r#"[{"event":"fail","node":3},{"event":"repair"}]"#;
        let scenario = parse_scenario(text).unwrap();
        assert_eq!(
            scenario,
            vec![ScenarioEvent::Fail { node: 3 }, ScenarioEvent::Repair]
        );
        let back = serde_json::to_string(&scenario).unwrap();
        assert_eq!(back, text);

        let code = reference_pmds2();
        let report = simulate_cluster(&code, &scenario, 5).unwrap();
        assert_eq!(report.events[1].actions[0].mechanism, "msr-local");
        assert_eq!(report.events[1].actions[0].symbols_read, 24);
        let parsed: serde_json::Value =
            serde_json::from_str(&report.to_json().unwrap()).unwrap();
        assert_eq!(parsed["total_symbols_read"], 24);
    }

    #[test]
    fn certificate_json_round_trips() {
        let code = reference_pmds2();
        let cert = certify_pmds(&code, &VerifyOptions::default()).unwrap();
        let text = cert.to_json().unwrap();
        let back = Certificate::from_json(&text).unwrap();
        assert_eq!(cert, back);
    }
}
