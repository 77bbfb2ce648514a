//! Partial-MDS codes with two global parities over binary extension fields,
//! after Blaum, Hetzler, and collaborators: every parity coefficient is a
//! power of one base element, with an exponent set L naming the columns and a
//! spacing modulus N separating the groups in the last check row. The array
//! variant reuses the scalar construction row by row, picking each row's
//! exponents from its base-b digits so that all local groups share one
//! bandwidth-optimal repair code.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::code::{
    ArrayCode, ArrayCodeword, LocalMsrCode, PmdsParams, RepairTranscript, ScalarPmdsCode,
};
use crate::gf::Field;
use crate::matrix::CodeMatrix;
use crate::mds::LinearCode;
use crate::util::digits_base;
use crate::yebarg::YeBargCode;
use crate::{Error, Result};

/// Which guarantee the built array code is sized for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pmds2Mode {
    /// Two global parities, any admissible erasure pattern decodable.
    Pmds,
    /// Two global parities, aligned-sector patterns decodable; smaller field.
    Sd,
    /// One global parity: the two-parity check matrix minus its last row.
    S1,
}

impl Pmds2Mode {
    pub fn s(self) -> usize {
        match self {
            Pmds2Mode::S1 => 1,
            _ => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Pmds2Mode::Pmds => "pmds2",
            Pmds2Mode::Sd => "sd2",
            Pmds2Mode::S1 => "pmds1",
        }
    }

    /// Exponent spacing that secures the mode's guarantee for every row.
    /// Rows draw exponents from [0, rn), so the largest is rn - 1: the
    /// partial-MDS threshold is (r+1)(rn-1-r)+1 and the aligned-sector
    /// threshold is rn.
    pub fn default_modulus(self, n: usize, r: usize) -> u64 {
        match self {
            Pmds2Mode::Sd => (r * n) as u64,
            _ => ((r + 1) * (r * n - 1 - r) + 1) as u64,
        }
    }
}

/// Parity-check matrix shared by the scalar and array constructions: mu
/// diagonal copies of the r-row Vandermonde block on `points`, then one or
/// two global rows. The first global row squares the points up to power r in
/// every group; the second walks their inverses, shifted by beta^(-gN) in
/// group g.
fn assemble_parity(
    field: &Field,
    mu: usize,
    r: usize,
    points: &[u64],
    modulus: u64,
    beta: u64,
    globals: usize,
) -> Result<CodeMatrix> {
    debug_assert!(globals == 1 || globals == 2);
    let local = CodeMatrix::vandermonde(field.clone(), r, points)?;
    let blocks: Vec<&CodeMatrix> = (0..mu).map(|_| &local).collect();
    let diag = CodeMatrix::block_diag(&blocks)?;

    let beta_inv = field.inv(beta)?;
    let mut power_row = Vec::with_capacity(mu * points.len());
    let mut inverse_row = Vec::with_capacity(mu * points.len());
    for g in 0..mu {
        let shift = field.pow(beta_inv, g as u128 * modulus as u128);
        for &p in points {
            power_row.push(field.pow(p, r as u128));
            inverse_row.push(field.mul(shift, field.inv(p)?));
        }
    }
    let mut rows = vec![power_row];
    if globals == 2 {
        rows.push(inverse_row);
    }
    let tail = CodeMatrix::from_rows(field.clone(), &rows)?;
    diag.vstack(&tail)
}

/// Scalar [mu*n, mu*(n-r) - 2] code whose column ξ of group g carries
/// locator beta^L[ξ] in the local checks, beta^(r*L[ξ]) in the first global
/// check, and beta^(-gN - L[ξ]) in the second.
#[derive(Clone)]
pub struct BlaumRowCode {
    field: Field,
    params: PmdsParams,
    exponents: Vec<u64>,
    modulus: u64,
    beta: u64,
    code: LinearCode,
    pmds_guaranteed: bool,
    sd_guaranteed: bool,
}

impl BlaumRowCode {
    /// `beta` defaults to the field's generator. The base element must have
    /// order at least mu * modulus so the group shifts never wrap.
    pub fn new(
        field: Field,
        mu: usize,
        n: usize,
        r: usize,
        exponents: &[u64],
        modulus: u64,
        beta: Option<u64>,
    ) -> Result<Self> {
        if field.characteristic() != 2 {
            return Err(Error::NotCharTwo);
        }
        let params = PmdsParams::new(mu, n, r, 2)?;
        if exponents.len() != n {
            return Err(Error::InvalidParameters(format!(
                "{} exponents for group width {n}",
                exponents.len()
            )));
        }
        let mut seen = exponents.to_vec();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != n {
            return Err(Error::InvalidParameters("repeated exponent".into()));
        }
        if modulus == 0 {
            return Err(Error::InvalidParameters(
                "spacing modulus must be positive".into(),
            ));
        }
        let beta = beta.unwrap_or_else(|| field.generator());
        if !field.contains(beta) {
            return Err(Error::InvalidField(format!(
                "base element {beta} outside a field of size {}",
                field.size()
            )));
        }
        let order = field.element_order(beta)?;
        if (order as u128) < mu as u128 * modulus as u128 {
            return Err(Error::OrderTooSmall(format!(
                "base element of order {order}, need at least mu * N = {}",
                mu as u128 * modulus as u128
            )));
        }

        let points: Vec<u64> = exponents
            .iter()
            .map(|&e| field.pow(beta, e as u128))
            .collect();
        let mut distinct = points.clone();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() != n {
            return Err(Error::DuplicateLocator);
        }

        let h = assemble_parity(&field, mu, r, &points, modulus, beta, 2)?;
        let code = LinearCode::from_parity(h)?;
        if code.dimension() != params.dimension() {
            return Err(Error::InvalidParameters(
                "parity rows are dependent at these parameters".into(),
            ));
        }

        let top = *exponents.iter().max().expect("n > 0") as u128;
        let pmds_guaranteed = modulus as u128 >= (r as u128 + 1) * (top - r as u128) + 1;
        let sd_guaranteed = modulus as u128 >= top + 1;
        Ok(BlaumRowCode {
            field,
            params,
            exponents: exponents.to_vec(),
            modulus,
            beta,
            code,
            pmds_guaranteed,
            sd_guaranteed,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn params(&self) -> PmdsParams {
        self.params
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn beta(&self) -> u64 {
        self.beta
    }

    pub fn code(&self) -> &LinearCode {
        &self.code
    }

    /// True when the modulus clears the threshold (r+1)(max L - r) + 1, so
    /// every admissible erasure pattern is decodable.
    pub fn pmds_guaranteed(&self) -> bool {
        self.pmds_guaranteed
    }

    /// True when the modulus clears max L + 1, enough for patterns whose
    /// heavy columns sit at the same positions in every group.
    pub fn sd_guaranteed(&self) -> bool {
        self.sd_guaranteed
    }

    pub fn descriptor(&self) -> Value {
        json!({
            "construction": "blaum-row",
            "field": self.field.descriptor(),
            "mu": self.params.mu,
            "n": self.params.n,
            "r": self.params.r,
            "s": self.params.s,
            "exponents": self.exponents,
            "modulus": self.modulus,
            "beta": self.beta,
        })
    }

    /// Single-row array view, for the property verifier.
    pub fn as_scalar_code(&self) -> Result<ScalarPmdsCode> {
        ScalarPmdsCode::new("blaum-row", self.params, self.code.clone(), self.descriptor())
    }
}

/// Array code on mu groups of n columns with ell = b^n rows: row a applies
/// the scalar construction to exponents L(a) = { c + a_c * n }, where a_c is
/// the c-th base-b digit of a. Every group's restriction is one shared
/// repair code, so a lost column rebuilds from d in-group helpers at
/// bandwidth d * ell / b.
pub struct LocalMsrPmds2Code {
    field: Field,
    params: PmdsParams,
    mode: Pmds2Mode,
    d: usize,
    modulus: u64,
    beta: u64,
    local: YeBargCode,
    row_codes: Vec<LinearCode>,
}

/// Build the array code for the given mode. Needs characteristic 2 and
/// q > max(mu * N, b * n) with N the mode's modulus and b = d + 1 - (n - r).
pub fn build_pmds2(
    field: Field,
    mu: usize,
    n: usize,
    r: usize,
    d: usize,
    mode: Pmds2Mode,
) -> Result<LocalMsrPmds2Code> {
    if field.characteristic() != 2 {
        return Err(Error::NotCharTwo);
    }
    let params = PmdsParams::new(mu, n, r, mode.s())?;
    if d < n - r || d >= n {
        return Err(Error::InvalidHelpers(format!(
            "helper count d = {d} outside [{}, {}]",
            n - r,
            n - 1
        )));
    }
    let b = d + 1 - (n - r);
    let modulus = mode.default_modulus(n, r);
    let floor = (mu as u128 * modulus as u128).max((b * n) as u128);
    if field.size() as u128 <= floor {
        return Err(Error::FieldTooSmall(format!(
            "field of size {} for a construction needing more than {floor} elements",
            field.size()
        )));
    }

    let beta = field.generator();
    let mut table = vec![vec![0u64; n]; b];
    for (v, row) in table.iter_mut().enumerate() {
        for (c, slot) in row.iter_mut().enumerate() {
            *slot = field.pow(beta, (c + v * n) as u128);
        }
    }
    let local = YeBargCode::new(field.clone(), n, r, d, Some(table))?;

    let mut row_codes = Vec::with_capacity(local.ell());
    for a in 0..local.ell() {
        let points = local.row_points(a)?;
        let h = assemble_parity(&field, mu, r, &points, modulus, beta, mode.s())?;
        let code = LinearCode::from_parity(h)?;
        if code.dimension() != params.dimension() {
            return Err(Error::InvalidParameters(format!(
                "row {a} parity rows are dependent at these parameters"
            )));
        }
        row_codes.push(code);
    }

    Ok(LocalMsrPmds2Code {
        field,
        params,
        mode,
        d,
        modulus,
        beta,
        local,
        row_codes,
    })
}

impl LocalMsrPmds2Code {
    pub fn mode(&self) -> Pmds2Mode {
        self.mode
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn beta(&self) -> u64 {
        self.beta
    }

    /// The repair code every group restricts to.
    pub fn local_code(&self) -> &YeBargCode {
        &self.local
    }

    pub fn row_code(&self, a: usize) -> Result<&LinearCode> {
        self.row_codes.get(a).ok_or(Error::RowOutOfRange)
    }

    /// Exponent set row a draws its locators from: c + a_c * n per column.
    pub fn row_exponents(&self, a: usize) -> Result<Vec<u64>> {
        if a >= self.local.ell() {
            return Err(Error::RowOutOfRange);
        }
        let digits = digits_base(a, self.local.radix(), self.params.n);
        Ok((0..self.params.n)
            .map(|c| (c + digits[c] * self.params.n) as u64)
            .collect())
    }

    /// Decode any admissible erasure pattern using the full check matrix.
    pub fn global_decode(
        &self,
        word: &ArrayCodeword,
        pattern: &crate::code::ErasurePattern,
    ) -> Result<ArrayCodeword> {
        self.decode_erased(word, pattern)
    }
}

impl ArrayCode for LocalMsrPmds2Code {
    fn name(&self) -> &str {
        self.mode.name()
    }

    fn field(&self) -> &Field {
        &self.field
    }

    fn params(&self) -> PmdsParams {
        self.params
    }

    fn ell(&self) -> usize {
        self.local.ell()
    }

    fn row_generator(&self, a: usize) -> Result<CodeMatrix> {
        Ok(self.row_code(a)?.generator().clone())
    }

    fn row_parity_check(&self, a: usize) -> Result<CodeMatrix> {
        Ok(self.row_code(a)?.parity_check().clone())
    }

    fn descriptor(&self) -> Value {
        json!({
            "construction": self.mode.name(),
            "field": self.field.descriptor(),
            "mu": self.params.mu,
            "n": self.params.n,
            "r": self.params.r,
            "s": self.params.s,
            "d": self.d,
            "radix": self.local.radix(),
            "ell": self.local.ell(),
            "modulus": self.modulus,
            "beta": self.beta,
        })
    }

    fn as_local_msr(&self) -> Option<&dyn LocalMsrCode> {
        Some(self)
    }
}

impl LocalMsrCode for LocalMsrPmds2Code {
    fn repair_d(&self) -> usize {
        self.d
    }

    fn local_row_parity(&self, a: usize, g: usize) -> Result<CodeMatrix> {
        if g >= self.params.mu {
            return Err(Error::InvalidParameters(format!("group {g} out of range")));
        }
        let points = self.local.row_points(a)?;
        CodeMatrix::vandermonde(self.field.clone(), self.params.r, &points)
    }

    fn repair_in_group(
        &self,
        word: &ArrayCodeword,
        failed: usize,
        helpers: &[usize],
    ) -> Result<(Vec<u64>, RepairTranscript)> {
        self.check_shape(word)?;
        if failed >= self.params.length() {
            return Err(Error::InvalidParameters(format!(
                "failed column {failed} out of range"
            )));
        }
        let base = self.params.group_of(failed) * self.params.n;
        if helpers
            .iter()
            .any(|&h| h < base || h >= base + self.params.n)
        {
            return Err(Error::InvalidHelpers(
                "helpers must come from the failed column's group".into(),
            ));
        }
        let group_cols: Vec<usize> = (base..base + self.params.n).collect();
        let restricted = word.restrict_columns(&group_cols)?;
        let local_helpers: Vec<usize> = helpers.iter().map(|&h| h - base).collect();
        let (column, t) = self
            .local
            .repair_node(&restricted, failed - base, &local_helpers)?;
        let transcript = RepairTranscript::new(
            vec![failed],
            t.helpers.iter().map(|&j| j + base).collect(),
            t.per_helper.clone(),
            t.bound_num,
            t.bound_den,
            t.regenerating,
            &self.field,
        );
        Ok((column, transcript))
    }
}
