//! Common shape of every array code in this crate: codewords are ell x (mu*n)
//! arrays over one field, row a of a codeword lives in the a-th row code, and
//! columns are storage nodes grouped into mu local groups of n. The traits
//! here are object safe so the registry can hand out constructions behind
//! `Box<dyn ArrayCode>`, with repair entry points surfaced through the
//! `LocalMsrCode` and `GlobalMsrCode` refinements.

use std::collections::BTreeSet;

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::gf::{Field, FieldDescriptor, FiniteField};
use crate::matrix::{CodeMatrix, SolveOutcome};
use crate::mds::LinearCode;
use crate::{Error, Result};

/// Layout parameters shared by all partial-MDS constructions: mu groups of n
/// columns each, r parities local to every group, s parities spanning groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PmdsParams {
    pub mu: usize,
    pub n: usize,
    pub r: usize,
    pub s: usize,
}

impl PmdsParams {
    pub fn new(mu: usize, n: usize, r: usize, s: usize) -> Result<Self> {
        let params = PmdsParams { mu, n, r, s };
        params.validate()?;
        Ok(params)
    }

    /// Rejects the degenerate shapes (one group, no local or no global
    /// parities) and dimensions that would go nonpositive.
    pub fn validate(&self) -> Result<()> {
        if self.mu < 2 {
            return Err(Error::InvalidParameters(format!(
                "at least two local groups required, got {}",
                self.mu
            )));
        }
        if self.r == 0 || self.r >= self.n {
            return Err(Error::InvalidParameters(format!(
                "local parity count must satisfy 0 < r < n, got r={} n={}",
                self.r, self.n
            )));
        }
        if self.s == 0 || self.s > (self.n - self.r) * (self.mu - 1) {
            return Err(Error::InvalidParameters(format!(
                "global parity count must satisfy 0 < s <= (n-r)(mu-1), got s={}",
                self.s
            )));
        }
        Ok(())
    }

    /// Total number of columns, mu * n.
    pub fn length(&self) -> usize {
        self.mu * self.n
    }

    /// Dimension of the code, mu * (n - r) - s.
    pub fn dimension(&self) -> usize {
        self.mu * (self.n - self.r) - self.s
    }

    /// Dimension of each local group code, n - r.
    pub fn local_dimension(&self) -> usize {
        self.n - self.r
    }

    pub fn group_of(&self, col: usize) -> usize {
        col / self.n
    }

    /// Column indices of group g.
    pub fn group_columns(&self, g: usize) -> std::ops::Range<usize> {
        g * self.n..(g + 1) * self.n
    }
}

/// One stored stripe: an ell x (mu*n) array with one column per storage node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrayCodeword {
    field: Field,
    data: Vec<Vec<u64>>,
    cols: usize,
}

#[derive(Serialize, Deserialize)]
struct CodewordWire {
    field: FieldDescriptor,
    rows: usize,
    cols: usize,
    data: Vec<Vec<u64>>,
}

impl ArrayCodeword {
    pub fn new(field: Field, data: Vec<Vec<u64>>) -> Result<Self> {
        let rows = data.len();
        if rows == 0 {
            return Err(Error::DimensionMismatch("codeword with no rows".into()));
        }
        let cols = data[0].len();
        if cols == 0 {
            return Err(Error::DimensionMismatch("codeword with no columns".into()));
        }
        for row in &data {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "ragged codeword: row of length {} in a {}-column array",
                    row.len(),
                    cols
                )));
            }
            for &v in row {
                if !field.contains(v) {
                    return Err(Error::InvalidField(format!(
                        "entry {v} outside a field of size {}",
                        field.size()
                    )));
                }
            }
        }
        Ok(ArrayCodeword { field, data, cols })
    }

    pub fn zero(field: Field, rows: usize, cols: usize) -> Result<Self> {
        Self::new(field, vec![vec![0; cols]; rows])
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.data.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> u64 {
        self.data[row][col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: u64) {
        debug_assert!(self.field.contains(v));
        self.data[row][col] = v;
    }

    pub fn row(&self, row: usize) -> &[u64] {
        &self.data[row]
    }

    /// The column stored on node `col`, top to bottom.
    pub fn column(&self, col: usize) -> Vec<u64> {
        self.data.iter().map(|row| row[col]).collect()
    }

    /// New array keeping only the listed columns, in the order given.
    pub fn restrict_columns(&self, cols: &[usize]) -> Result<Self> {
        if cols.iter().any(|&c| c >= self.cols) {
            return Err(Error::DimensionMismatch(format!(
                "column selection out of range for width {}",
                self.cols
            )));
        }
        let rows = self
            .data
            .iter()
            .map(|row| cols.iter().map(|&c| row[c]).collect())
            .collect();
        Self::new(self.field.clone(), rows)
    }

    pub fn set_column(&mut self, col: usize, values: &[u64]) -> Result<()> {
        if values.len() != self.rows() {
            return Err(Error::DimensionMismatch(format!(
                "column of length {} for {} rows",
                values.len(),
                self.rows()
            )));
        }
        for (row, &v) in self.data.iter_mut().zip(values) {
            if !self.field.contains(v) {
                return Err(Error::InvalidField(format!(
                    "entry {v} outside a field of size {}",
                    self.field.size()
                )));
            }
            row[col] = v;
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        let wire = CodewordWire {
            field: self.field.descriptor(),
            rows: self.rows(),
            cols: self.cols,
            data: self.data.clone(),
        };
        Ok(serde_json::to_string_pretty(&wire)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let wire: CodewordWire = serde_json::from_str(text)?;
        let field = FiniteField::from_descriptor(&wire.field)?;
        let cw = Self::new(field, wire.data)?;
        if cw.rows() != wire.rows || cw.cols() != wire.cols {
            return Err(Error::BadDescriptor(format!(
                "stated shape {}x{} does not match the data ({}x{})",
                wire.rows,
                wire.cols,
                cw.rows(),
                cw.cols()
            )));
        }
        Ok(cw)
    }
}

/// Which columns are gone: a designated set of at most r per local group,
/// plus spill-over erasures charged against the global parities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErasurePattern {
    params: PmdsParams,
    per_group: Vec<BTreeSet<usize>>,
    extra: BTreeSet<usize>,
}

impl ErasurePattern {
    /// Build a pattern from explicit per-group sets (global column indices)
    /// and extra erasures outside them.
    pub fn new(params: PmdsParams, per_group: &[Vec<usize>], extra: &[usize]) -> Result<Self> {
        params.validate()?;
        if per_group.len() != params.mu {
            return Err(Error::InvalidParameters(format!(
                "{} group sets for {} groups",
                per_group.len(),
                params.mu
            )));
        }
        let mut sets = Vec::with_capacity(params.mu);
        for (g, cols) in per_group.iter().enumerate() {
            let mut set = BTreeSet::new();
            for &c in cols {
                if c >= params.length() {
                    return Err(Error::InvalidParameters(format!(
                        "column {c} out of range"
                    )));
                }
                if params.group_of(c) != g {
                    return Err(Error::InvalidParameters(format!(
                        "column {c} listed under group {g} but belongs to group {}",
                        params.group_of(c)
                    )));
                }
                set.insert(c);
            }
            if set.len() > params.r {
                return Err(Error::InvalidParameters(format!(
                    "{} designated erasures in group {g}, allowed at most {}",
                    set.len(),
                    params.r
                )));
            }
            sets.push(set);
        }
        let mut extra_set = BTreeSet::new();
        for &c in extra {
            if c >= params.length() {
                return Err(Error::InvalidParameters(format!("column {c} out of range")));
            }
            if sets[params.group_of(c)].contains(&c) {
                return Err(Error::InvalidParameters(format!(
                    "column {c} appears both in a group set and in the extra set"
                )));
            }
            extra_set.insert(c);
        }
        Ok(ErasurePattern {
            params,
            per_group: sets,
            extra: extra_set,
        })
    }

    /// Split a flat list of erased columns: the first r per group (in sorted
    /// order) become the group's designated set, the rest spill into the
    /// extra set.
    pub fn from_columns(params: PmdsParams, cols: &[usize]) -> Result<Self> {
        let mut sorted: Vec<usize> = cols.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut per_group = vec![Vec::new(); params.mu];
        let mut extra = Vec::new();
        for c in sorted {
            if c >= params.length() {
                return Err(Error::InvalidParameters(format!("column {c} out of range")));
            }
            let g = params.group_of(c);
            if per_group[g].len() < params.r {
                per_group[g].push(c);
            } else {
                extra.push(c);
            }
        }
        Self::new(params, &per_group, &extra)
    }

    pub fn empty(params: PmdsParams) -> Result<Self> {
        Self::new(params, &vec![Vec::new(); params.mu], &[])
    }

    pub fn params(&self) -> PmdsParams {
        self.params
    }

    pub fn group_set(&self, g: usize) -> &BTreeSet<usize> {
        &self.per_group[g]
    }

    pub fn extra_set(&self) -> &BTreeSet<usize> {
        &self.extra
    }

    /// All erased columns, ascending.
    pub fn erased(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self
            .per_group
            .iter()
            .flat_map(|s| s.iter().copied())
            .chain(self.extra.iter().copied())
            .collect();
        all.sort_unstable();
        all
    }

    pub fn survivors(&self) -> Vec<usize> {
        let gone: BTreeSet<usize> = self.erased().into_iter().collect();
        (0..self.params.length())
            .filter(|c| !gone.contains(c))
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        self.per_group.iter().all(|s| s.is_empty()) && self.extra.is_empty()
    }

    /// Number of erased columns in each group, counting the extra set too.
    pub fn group_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.params.mu];
        for c in self.erased() {
            counts[self.params.group_of(c)] += 1;
        }
        counts
    }

    /// Whether the pattern is covered by the partial-MDS guarantee: charging
    /// r erasures per group locally, the overflow must fit into the s global
    /// parities.
    pub fn pmds_admissible(&self) -> bool {
        let overflow: usize = self
            .group_counts()
            .iter()
            .map(|&f| f.saturating_sub(self.params.r))
            .sum();
        overflow <= self.params.s
    }

    /// Whether the pattern is covered by the sector-disk guarantee, which
    /// spends the local parities on r whole within-group positions shared by
    /// every group. Picking the r positions hit most often is optimal.
    pub fn sd_admissible(&self) -> bool {
        let mut position_counts = vec![0usize; self.params.n];
        let erased = self.erased();
        for &c in &erased {
            position_counts[c % self.params.n] += 1;
        }
        position_counts.sort_unstable_by(|a, b| b.cmp(a));
        let covered: usize = position_counts.iter().take(self.params.r).sum();
        erased.len() - covered <= self.params.s
    }
}

/// Accounting record of one repair: who failed, who helped, how many symbols
/// of `symbol_field` each helper shipped, and the cut-set value the transfer
/// is measured against.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepairTranscript {
    pub failed: Vec<usize>,
    pub helpers: Vec<usize>,
    pub per_helper: Vec<u64>,
    pub total: u64,
    pub bound_num: u64,
    pub bound_den: u64,
    /// False when the repair fell back to plain erasure decoding.
    pub regenerating: bool,
    pub symbol_field: FieldDescriptor,
}

impl RepairTranscript {
    pub fn new(
        failed: Vec<usize>,
        helpers: Vec<usize>,
        per_helper: Vec<u64>,
        bound_num: u64,
        bound_den: u64,
        regenerating: bool,
        symbol_field: &Field,
    ) -> Self {
        debug_assert_eq!(helpers.len(), per_helper.len());
        debug_assert!(bound_den > 0);
        let total = per_helper.iter().sum();
        RepairTranscript {
            failed,
            helpers,
            per_helper,
            total,
            bound_num,
            bound_den,
            regenerating,
            symbol_field: symbol_field.descriptor(),
        }
    }

    /// h*d*ell / (h + d - n + r) as an exact fraction (numerator, denominator)
    /// counted in symbols of the code's own field.
    pub fn cut_set_bound(h: usize, d: usize, ell: usize, n: usize, r: usize) -> (u64, u64) {
        assert!(
            h + d + r > n,
            "cut-set denominator must be positive: h={h} d={d} n={n} r={r}"
        );
        let num = (h as u64) * (d as u64) * (ell as u64);
        let den = (h + d + r - n) as u64;
        (num, den)
    }

    pub fn meets_bound_exactly(&self) -> bool {
        self.total as u128 * self.bound_den as u128 == self.bound_num as u128
    }

    pub fn respects_bound(&self) -> bool {
        self.total as u128 * self.bound_den as u128 >= self.bound_num as u128
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// An array code assembled from per-row linear codes over a single field.
/// Row index a of a codeword lies in the a-th row code; implementations only
/// have to expose the per-row generator/parity pair and a rebuildable
/// descriptor, and inherit encoding, erasure decoding, and message recovery.
pub trait ArrayCode: Send + Sync {
    /// Registry name of the construction this code came from.
    fn name(&self) -> &str;

    fn field(&self) -> &Field;

    fn params(&self) -> PmdsParams;

    /// Subpacketization: number of rows in every codeword array.
    fn ell(&self) -> usize;

    /// Generator matrix of the a-th row code, dimension() x length().
    fn row_generator(&self, a: usize) -> Result<CodeMatrix>;

    /// Parity-check matrix of the a-th row code, (mu*r + s) x length().
    fn row_parity_check(&self, a: usize) -> Result<CodeMatrix>;

    /// Everything needed to rebuild this exact code, as JSON.
    fn descriptor(&self) -> Value;

    fn as_local_msr(&self) -> Option<&dyn LocalMsrCode> {
        None
    }

    fn as_global_msr(&self) -> Option<&dyn GlobalMsrCode> {
        None
    }

    fn length(&self) -> usize {
        self.params().length()
    }

    fn dimension(&self) -> usize {
        self.params().dimension()
    }

    /// Multiply each message row by the matching row generator.
    fn encode(&self, message: &CodeMatrix) -> Result<ArrayCodeword> {
        if **message.field() != **self.field() {
            return Err(Error::MixedFields);
        }
        if message.rows() != self.ell() || message.cols() != self.dimension() {
            return Err(Error::DimensionMismatch(format!(
                "message of shape {}x{} for a code expecting {}x{}",
                message.rows(),
                message.cols(),
                self.ell(),
                self.dimension()
            )));
        }
        let mut rows = Vec::with_capacity(self.ell());
        for a in 0..self.ell() {
            rows.push(self.row_generator(a)?.vec_mul(message.row(a))?);
        }
        ArrayCodeword::new(self.field().clone(), rows)
    }

    fn is_codeword(&self, word: &ArrayCodeword) -> Result<bool> {
        self.check_shape(word)?;
        for a in 0..self.ell() {
            let syndrome = self.row_parity_check(a)?.mul_vec(word.row(a))?;
            if syndrome.iter().any(|&v| v != 0) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Rebuild the erased columns row by row from the parity checks. Values
    /// stored at erased positions are ignored, never read.
    fn decode_erased(
        &self,
        word: &ArrayCodeword,
        pattern: &ErasurePattern,
    ) -> Result<ArrayCodeword> {
        self.check_shape(word)?;
        if pattern.params() != self.params() {
            return Err(Error::InvalidParameters(
                "erasure pattern built for different layout parameters".into(),
            ));
        }
        let erased = pattern.erased();
        let mut rows = Vec::with_capacity(self.ell());
        for a in 0..self.ell() {
            let h = self.row_parity_check(a)?;
            rows.push(solve_erasures(&h, word.row(a), &erased, a)?);
        }
        ArrayCodeword::new(self.field().clone(), rows)
    }

    /// Invert the encoding of a full, intact codeword.
    fn extract_message(&self, word: &ArrayCodeword) -> Result<CodeMatrix> {
        self.check_shape(word)?;
        let mut rows = Vec::with_capacity(self.ell());
        for a in 0..self.ell() {
            match self.row_generator(a)?.transpose().solve(word.row(a))? {
                SolveOutcome::Unique(m) => rows.push(m),
                _ => return Err(Error::WordNotInCode),
            }
        }
        CodeMatrix::from_rows(self.field().clone(), &rows)
    }

    fn random_codeword(&self, rng: &mut dyn RngCore) -> Result<ArrayCodeword> {
        let size = self.field().size();
        let mut message = CodeMatrix::zero(self.field().clone(), self.ell(), self.dimension());
        for i in 0..self.ell() {
            for j in 0..self.dimension() {
                message.set(i, j, rng.gen_range(0..size));
            }
        }
        self.encode(&message)
    }

    fn check_shape(&self, word: &ArrayCodeword) -> Result<()> {
        if **word.field() != **self.field() {
            return Err(Error::MixedFields);
        }
        if word.rows() != self.ell() || word.cols() != self.length() {
            return Err(Error::DimensionMismatch(format!(
                "codeword of shape {}x{} for a code expecting {}x{}",
                word.rows(),
                word.cols(),
                self.ell(),
                self.length()
            )));
        }
        Ok(())
    }
}

/// An array code whose local groups repair a single lost column from d
/// in-group helpers at the cut-set bandwidth.
pub trait LocalMsrCode: ArrayCode {
    /// Number of in-group helpers a repair contacts.
    fn repair_d(&self) -> usize;

    /// Field in which repair traffic is counted; the code's own field unless
    /// the construction ships subfield coordinates.
    fn repair_symbol_field(&self) -> Field {
        self.field().clone()
    }

    /// Rebuild the failed column from the given helper columns, all within
    /// the failed column's group.
    fn repair_in_group(
        &self,
        word: &ArrayCodeword,
        failed: usize,
        helpers: &[usize],
    ) -> Result<(Vec<u64>, RepairTranscript)>;

    /// Parity rows of row `a` that a decoder confined to group `g` can use,
    /// restricted to that group's n columns.
    fn local_row_parity(&self, a: usize, g: usize) -> Result<CodeMatrix>;

    /// Rebuild up to r lost columns of one group by plain erasure decoding:
    /// read exactly n - r surviving group columns in full and solve each
    /// row's local checks. Bandwidth (n - r) * ell symbols, never less, so
    /// the transcript is flagged as not regenerating.
    fn repair_by_decode(
        &self,
        word: &ArrayCodeword,
        group: usize,
        erased: &[usize],
    ) -> Result<(Vec<(usize, Vec<u64>)>, RepairTranscript)> {
        self.check_shape(word)?;
        let p = self.params();
        if group >= p.mu {
            return Err(Error::InvalidParameters(format!(
                "group {group} out of range for mu = {}",
                p.mu
            )));
        }
        let cols = p.group_columns(group);
        let mut lost: Vec<usize> = erased.to_vec();
        lost.sort_unstable();
        lost.dedup();
        if lost.len() != erased.len() || lost.is_empty() {
            return Err(Error::InvalidParameters(
                "erased columns must be distinct and nonempty".into(),
            ));
        }
        if lost.len() > p.r {
            return Err(Error::InvalidParameters(format!(
                "{} erasures exceed the local tolerance r = {}",
                lost.len(),
                p.r
            )));
        }
        if lost.iter().any(|&c| !cols.contains(&c)) {
            return Err(Error::InvalidParameters(
                "erased column outside the group".into(),
            ));
        }

        // Mask extra survivors so exactly n - r columns are ever read.
        let mut masked = lost.clone();
        let mut helpers: Vec<usize> = cols.clone().filter(|c| !masked.contains(c)).collect();
        while masked.len() < p.r {
            let dropped = helpers.pop().expect("n > r leaves a survivor to mask");
            masked.push(dropped);
        }
        masked.sort_unstable();
        let local_masked: Vec<usize> = masked.iter().map(|&c| c - group * p.n).collect();

        let ell = self.ell();
        let mut columns: Vec<Vec<u64>> = vec![Vec::with_capacity(ell); lost.len()];
        for a in 0..ell {
            let h = self.local_row_parity(a, group)?;
            if h.cols() != p.n {
                return Err(Error::DimensionMismatch(format!(
                    "local parity of row {a} has {} columns, group width is {}",
                    h.cols(),
                    p.n
                )));
            }
            let local_row: Vec<u64> = cols.clone().map(|c| word.get(a, c)).collect();
            let solved = solve_erasures(&h, &local_row, &local_masked, a)?;
            for (slot, &c) in lost.iter().enumerate() {
                columns[slot].push(solved[c - group * p.n]);
            }
        }

        // Whole columns of the code's own field are read here, so the count
        // stays in that field even when MSR repair ships subfield symbols.
        let per_helper = vec![ell as u64; helpers.len()];
        let (num, den) = RepairTranscript::cut_set_bound(lost.len(), p.n - p.r, ell, p.n, p.r);
        let transcript = RepairTranscript::new(
            lost.clone(),
            helpers,
            per_helper,
            num,
            den,
            false,
            self.field(),
        );
        Ok((lost.into_iter().zip(columns).collect(), transcript))
    }
}

/// An array code that, once every group is punctured down to n - r columns,
/// repairs any single surviving column from all the others at the cut-set
/// bandwidth of the punctured code.
pub trait GlobalMsrCode: ArrayCode {
    /// Rebuild the failed surviving column. `punctured` must designate
    /// exactly r columns per group, none of them the failed one.
    fn global_repair(
        &self,
        word: &ArrayCodeword,
        punctured: &ErasurePattern,
        failed: usize,
    ) -> Result<(Vec<u64>, RepairTranscript)>;
}

/// Fill the erased positions of one row using its parity-check matrix.
/// Erased slots are zeroed before the syndrome is formed, so stale values
/// never influence the solve.
pub(crate) fn solve_erasures(
    h: &CodeMatrix,
    row: &[u64],
    erased: &[usize],
    row_index: usize,
) -> Result<Vec<u64>> {
    let field = h.field().clone();
    let mut filled = row.to_vec();
    for &j in erased {
        filled[j] = 0;
    }
    let syndrome = h.mul_vec(&filled)?;
    let rhs: Vec<u64> = syndrome.iter().map(|&v| field.neg(v)).collect();
    if erased.is_empty() {
        return if rhs.iter().all(|&v| v == 0) {
            Ok(filled)
        } else {
            Err(Error::WordNotInCode)
        };
    }
    match h.select_columns(erased)?.solve(&rhs)? {
        SolveOutcome::Unique(values) => {
            for (&slot, v) in erased.iter().zip(values) {
                filled[slot] = v;
            }
            Ok(filled)
        }
        SolveOutcome::NoSolution => Err(Error::WordNotInCode),
        SolveOutcome::Underdetermined { .. } => Err(Error::Unrecoverable {
            row: Some(row_index),
        }),
    }
}

/// A subpacketization-one code viewed through the array-code interface: a
/// single scalar codeword per stripe, every row code the same linear code.
pub struct ScalarPmdsCode {
    name: String,
    params: PmdsParams,
    code: LinearCode,
    descriptor: Value,
}

impl ScalarPmdsCode {
    pub fn new(
        name: impl Into<String>,
        params: PmdsParams,
        code: LinearCode,
        descriptor: Value,
    ) -> Result<Self> {
        params.validate()?;
        if code.length() != params.length() || code.dimension() != params.dimension() {
            return Err(Error::DimensionMismatch(format!(
                "[{}, {}] code for a layout needing [{}, {}]",
                code.length(),
                code.dimension(),
                params.length(),
                params.dimension()
            )));
        }
        Ok(ScalarPmdsCode {
            name: name.into(),
            params,
            code,
            descriptor,
        })
    }

    pub fn inner(&self) -> &LinearCode {
        &self.code
    }
}

impl ArrayCode for ScalarPmdsCode {
    fn name(&self) -> &str {
        &self.name
    }

    fn field(&self) -> &Field {
        self.code.field()
    }

    fn params(&self) -> PmdsParams {
        self.params
    }

    fn ell(&self) -> usize {
        1
    }

    fn row_generator(&self, a: usize) -> Result<CodeMatrix> {
        if a != 0 {
            return Err(Error::RowOutOfRange);
        }
        Ok(self.code.generator().clone())
    }

    fn row_parity_check(&self, a: usize) -> Result<CodeMatrix> {
        if a != 0 {
            return Err(Error::RowOutOfRange);
        }
        Ok(self.code.parity_check().clone())
    }

    fn descriptor(&self) -> Value {
        self.descriptor.clone()
    }
}
