//! Globally regenerating partial-MDS codes. Each array row is a rank-metric
//! code pinned by one row of a shared locator matrix B over GF(q^M), with s
//! linearized parities spanning all groups. Puncturing every local group down
//! to its n - r surviving columns multiplies row codewords by a block-diagonal
//! slice of the local generator, which moves the locators by the inverse of
//! that slice but keeps the rank-metric shape. Single-column repair of the
//! punctured stripe rides on a grouping table: a partition of the rows into
//! sets of s whose locators agree at every helper column and stay independent
//! at the failed one, so each helper ships one aggregated symbol per set
//! instead of s.
//!
//! The module provides the generic subspace-tower locator matrix, a compact
//! hand-searched alternative for [3, 2] locals that keeps the row count at
//! 8^mu, the grouping search itself, puncture certification, and the repair.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::code::{
    ArrayCode, ArrayCodeword, ErasurePattern, GlobalMsrCode, PmdsParams, RepairTranscript,
};
use crate::gabidulin::{embed_matrix, transform_locators, GabidulinCode};
use crate::gf::Field;
use crate::matrix::{CodeMatrix, SolveOutcome};
use crate::mds::LinearCode;
use crate::util::{combinations, digits_base};
use crate::{Error, Result};

/// Hard ceiling on materialized locator rows; the generic tower grows as a
/// double exponential and anything past this is no longer a code object one
/// can test against.
const ROW_CAP: u128 = 1 << 16;

/// An array code whose row a is the rank-metric code with parity locators
/// B[a]: codeword rows y satisfy sum_j B[a][j]^(q^e) y_j = 0 for e < s.
#[derive(Clone)]
pub struct SkewYeBargCode {
    field: Field,
    s: usize,
    b: CodeMatrix,
    row_codes: Vec<GabidulinCode>,
}

/// Wrap a locator matrix into per-row rank-metric codes with s shared
/// linearized parities. Every row of `b` must be independent over the
/// designated subfield; a row that is not is reported by index.
pub fn build_skew_yebarg(field: Field, b: CodeMatrix, s: usize) -> Result<SkewYeBargCode> {
    if **b.field() != *field {
        return Err(Error::MixedFields);
    }
    let m = field.ext_degree()? as usize;
    let cols = b.cols();
    if s == 0 {
        return Err(Error::InvalidParameters(
            "at least one linearized parity required".into(),
        ));
    }
    if s >= cols {
        return Err(Error::InvalidParameters(format!(
            "{s} parities leave no dimension in {cols} columns"
        )));
    }
    if cols > m {
        return Err(Error::LengthExceedsDegree);
    }
    if b.rows() == 0 {
        return Err(Error::InvalidParameters("locator matrix with no rows".into()));
    }
    let mut row_codes = Vec::with_capacity(b.rows());
    for a in 0..b.rows() {
        let code = GabidulinCode::new(field.clone(), b.row(a).to_vec(), cols - s).map_err(
            |e| match e {
                Error::DependentLocators | Error::DuplicateLocator => Error::DependentRow(a),
                other => other,
            },
        )?;
        row_codes.push(code);
    }
    Ok(SkewYeBargCode {
        field,
        s,
        b,
        row_codes,
    })
}

impl SkewYeBargCode {
    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Number of columns.
    pub fn length(&self) -> usize {
        self.b.cols()
    }

    /// Message symbols per row.
    pub fn dimension(&self) -> usize {
        self.b.cols() - self.s
    }

    /// Shared linearized parities per row.
    pub fn global_parities(&self) -> usize {
        self.s
    }

    /// Rows per codeword array.
    pub fn ell(&self) -> usize {
        self.b.rows()
    }

    pub fn locator_matrix(&self) -> &CodeMatrix {
        &self.b
    }

    pub fn row_code(&self, a: usize) -> Result<&GabidulinCode> {
        self.row_codes.get(a).ok_or(Error::RowOutOfRange)
    }

    fn check_shape(&self, word: &ArrayCodeword) -> Result<()> {
        if **word.field() != *self.field {
            return Err(Error::MixedFields);
        }
        if word.rows() != self.ell() || word.cols() != self.length() {
            return Err(Error::DimensionMismatch(format!(
                "array of shape {}x{} for a code expecting {}x{}",
                word.rows(),
                word.cols(),
                self.ell(),
                self.length()
            )));
        }
        Ok(())
    }

    pub fn encode(&self, message: &CodeMatrix) -> Result<ArrayCodeword> {
        if **message.field() != *self.field {
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
            rows.push(self.row_codes[a].encode(message.row(a))?);
        }
        ArrayCodeword::new(self.field.clone(), rows)
    }

    pub fn is_codeword(&self, word: &ArrayCodeword) -> Result<bool> {
        self.check_shape(word)?;
        for a in 0..self.ell() {
            if !self.row_codes[a].is_codeword(word.row(a))? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// A repair partition for one column: `groups` splits the row indices into
/// sets of s that agree at every other column's locator and carry
/// subfield-independent locators at `column` itself.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupingTable {
    pub column: usize,
    pub groups: Vec<Vec<usize>>,
}

impl GroupingTable {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("grouping tables always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// What the grouping search found. A matrix can fail to group for honest
/// structural reasons, most plainly when some class of rows agreeing off the
/// column has size not divisible by s, so that outcome is data, not an error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupingOutcome {
    Grouping(GroupingTable),
    NoGrouping { column: usize, diagnostic: String },
}

/// Search for a repair partition of `b`'s rows at the given column: rows are
/// first classed by their locators away from the column (rows in one group
/// must agree there), then each class is split into s-sets with independent
/// locators at the column by exact backtracking. Classes whose size is not a
/// multiple of s, which includes every case where the row count itself is
/// not, end the search with a NoGrouping outcome naming the first such class.
pub fn find_grouping(b: &CodeMatrix, s: usize, column: usize) -> Result<GroupingOutcome> {
    let field = b.field().clone();
    if s == 0 {
        return Err(Error::InvalidParameters(
            "grouping needs at least one row per set".into(),
        ));
    }
    if column >= b.cols() {
        return Err(Error::InvalidParameters(format!(
            "column {column} out of range for {} columns",
            b.cols()
        )));
    }
    if b.rows() == 0 {
        return Err(Error::InvalidParameters("locator matrix with no rows".into()));
    }
    let mut classes: BTreeMap<Vec<u64>, Vec<usize>> = BTreeMap::new();
    for a in 0..b.rows() {
        let key: Vec<u64> = (0..b.cols())
            .filter(|&j| j != column)
            .map(|j| b.get(a, j))
            .collect();
        classes.entry(key).or_default().push(a);
    }
    for members in classes.values() {
        if members.len() % s != 0 {
            return Ok(GroupingOutcome::NoGrouping {
                column,
                diagnostic: format!(
                    "{} rows agree away from column {column}, which cannot split into sets of {s}",
                    members.len()
                ),
            });
        }
    }
    let mut groups = Vec::with_capacity(b.rows() / s);
    for members in classes.values() {
        let search = GroupSearch {
            field: &field,
            b,
            column,
            s,
            members,
        };
        let mut used = vec![false; members.len()];
        let mut found = Vec::new();
        if !search.split(&mut used, &mut found)? {
            return Ok(GroupingOutcome::NoGrouping {
                column,
                diagnostic: format!(
                    "a class of {} rows admits no partition into independent sets of {s} at column {column}",
                    members.len()
                ),
            });
        }
        groups.append(&mut found);
    }
    groups.sort();
    Ok(GroupingOutcome::Grouping(GroupingTable { column, groups }))
}

/// Exact backtracking splitter for one agreement class.
struct GroupSearch<'a> {
    field: &'a Field,
    b: &'a CodeMatrix,
    column: usize,
    s: usize,
    members: &'a [usize],
}

impl GroupSearch<'_> {
    fn split(&self, used: &mut [bool], groups: &mut Vec<Vec<usize>>) -> Result<bool> {
        let anchor = match (0..self.members.len()).find(|&i| !used[i]) {
            None => return Ok(true),
            Some(i) => i,
        };
        used[anchor] = true;
        let mut partial = Vec::with_capacity(self.s - 1);
        let found = self.extend(used, anchor, anchor + 1, &mut partial, groups)?;
        used[anchor] = false;
        Ok(found)
    }

    fn extend(
        &self,
        used: &mut [bool],
        anchor: usize,
        start: usize,
        partial: &mut Vec<usize>,
        groups: &mut Vec<Vec<usize>>,
    ) -> Result<bool> {
        if partial.len() == self.s - 1 {
            let mut group = Vec::with_capacity(self.s);
            group.push(self.members[anchor]);
            group.extend(partial.iter().map(|&i| self.members[i]));
            let values: Vec<u64> = group.iter().map(|&a| self.b.get(a, self.column)).collect();
            if !self.field.linearly_independent_over_subfield(&values)? {
                return Ok(false);
            }
            groups.push(group);
            if self.split(used, groups)? {
                return Ok(true);
            }
            groups.pop();
            return Ok(false);
        }
        for i in start..self.members.len() {
            if used[i] {
                continue;
            }
            used[i] = true;
            partial.push(i);
            if self.extend(used, anchor, i + 1, partial, groups)? {
                return Ok(true);
            }
            partial.pop();
            used[i] = false;
        }
        Ok(false)
    }
}

/// Number of ordered k-tuples of GF(q)-independent vectors in a dim-dimensional
/// GF(q)-space: prod_{t=0}^{k-1} (q^dim - q^t).
fn ordered_independent_count(q: u128, dim: u32, k: u32) -> u128 {
    let space = q.pow(dim);
    (0..k).map(|t| space - q.pow(t)).product()
}

/// Gaussian binomial coefficient: k-dimensional subspaces of a
/// dim-dimensional GF(q)-space.
fn gaussian_binomial(q: u128, dim: u32, k: u32) -> u128 {
    if k > dim {
        return 0;
    }
    let num = ordered_independent_count(q, dim, k);
    let den = ordered_independent_count(q, k, k);
    debug_assert_eq!(num % den, 0);
    num / den
}

/// The generic locator matrix: mu disjoint coordinate blocks of dimension
/// n - r + s - 1 inside GF(q^M), each contributing every ordered
/// GF(q)-independent (n - r)-tuple of its vectors, and rows running over all
/// concatenations. Per block that is
/// prod_{t=0}^{n-r-1} (q^(n-r+s-1) - q^t) tuples, the count of ordered
/// independent tuples; the product stops at t = n - r - 1, since running it
/// through t = n - r would append the vanishing factor q^(n-r) - q^(n-r).
/// The full row count is that figure to the mu-th power, and anything past
/// 2^16 rows is refused rather than materialized.
pub fn build_grouping_matrix(
    field: &Field,
    mu: usize,
    n: usize,
    r: usize,
    s: usize,
) -> Result<CodeMatrix> {
    if mu == 0 || n == 0 || r >= n || s == 0 {
        return Err(Error::InvalidParameters(format!(
            "locator tower needs mu >= 1, 0 <= r < n, s >= 1, got mu={mu} n={n} r={r} s={s}"
        )));
    }
    let sub = field.subfield()?;
    let q = sub.size();
    let w = n - r;
    let block_dim = w + s - 1;
    let m = field.ext_degree()? as usize;
    if mu * block_dim > m {
        return Err(Error::LengthExceedsDegree);
    }
    let per_block = ordered_independent_count(q as u128, block_dim as u32, w as u32);
    let mut total: u128 = 1;
    for _ in 0..mu {
        total = total
            .checked_mul(per_block)
            .filter(|&t| t <= ROW_CAP)
            .ok_or_else(|| {
                Error::TooLarge(format!(
                    "{per_block}^{mu} locator rows exceed the {ROW_CAP} row cap"
                ))
            })?;
    }

    let x = if field.degree() > 1 {
        field.characteristic()
    } else {
        1
    };
    let embedded: Vec<u64> = (0..q)
        .map(|c| field.embed_from_subfield(c))
        .collect::<Result<Vec<_>>>()?;
    let mut block_sets: Vec<Vec<Vec<u64>>> = Vec::with_capacity(mu);
    for g in 0..mu {
        let basis: Vec<u64> = (0..block_dim)
            .map(|j| field.pow(x, (g * block_dim + j) as u128))
            .collect();
        let mut vectors = Vec::with_capacity((q.pow(block_dim as u32) - 1) as usize);
        for counter in 1..q.pow(block_dim as u32) {
            let mut v = 0;
            let mut rest = counter;
            for &base in &basis {
                v = field.add(v, field.mul(embedded[(rest % q) as usize], base));
                rest /= q;
            }
            vectors.push(v);
        }
        let mut tuples = Vec::new();
        let mut current = Vec::with_capacity(w);
        collect_tuples(field, &vectors, w, &mut current, &mut tuples)?;
        assert_eq!(
            tuples.len() as u128,
            per_block,
            "ordered tuple enumeration disagrees with the closed form"
        );
        assert_eq!(
            per_block,
            gaussian_binomial(q as u128, block_dim as u32, w as u32)
                * ordered_independent_count(q as u128, w as u32, w as u32),
            "tuple count must factor through the subspace count"
        );
        block_sets.push(tuples);
    }

    let total = total as usize;
    let per_block = per_block as usize;
    let mut rows = Vec::with_capacity(total);
    for t in 0..total {
        let digits = digits_base(t, per_block, mu);
        let mut row = Vec::with_capacity(mu * w);
        for g in 0..mu {
            row.extend_from_slice(&block_sets[g][digits[mu - 1 - g]]);
        }
        rows.push(row);
    }
    CodeMatrix::from_rows(field.clone(), &rows)
}

fn collect_tuples(
    field: &Field,
    vectors: &[u64],
    w: usize,
    current: &mut Vec<u64>,
    out: &mut Vec<Vec<u64>>,
) -> Result<()> {
    if current.len() == w {
        out.push(current.clone());
        return Ok(());
    }
    for &v in vectors {
        current.push(v);
        if field.linearly_independent_over_subfield(current)? {
            collect_tuples(field, vectors, w, current, out)?;
        }
        current.pop();
    }
    Ok(())
}

/// The [3, 2] local code the compact locator table is tuned to: coordinates
/// summing to zero. Its derived generator has columns along (1, 1), (1, 0)
/// and (0, 1), the directions the table is searched for.
pub fn compact_inner_code(sub: &Field) -> Result<LinearCode> {
    let h = CodeMatrix::from_rows(sub.clone(), &[vec![1, 1, 1]])?;
    LinearCode::from_parity(h)
}

/// Hand-searched locator matrix for mu groups of [3, 2] locals over
/// GF(q), q >= 3, with s = 2 shared parities: 8^mu rows instead of the
/// generic tower's per-block hundreds. Each coordinate block holds the eight
/// directed edges of a parallelogram (v1, v2, v3, v4 with v1 + v3 = v2 + v4)
/// in a 3-dimensional GF(q)-space, so the matrix needs M >= 3 mu.
///
/// Puncturing one column per group multiplies the block locator pair by the
/// inverse of a 2 x 2 slice of the local generator, and the rows of those
/// inverses are what the grouping search keys on. For `inner`'s generator the
/// key directions are the duals of its columns. Walking directed edges pairs
/// the keys up along (1, 0) and (0, 1) (the two out-edges or in-edges of a
/// vertex, with full-rank pair sums exactly when the diagonal sum v1 + v3 is
/// independent of each vertex) and along (1, -1) (edge differences, matched
/// by opposite sides, full rank when opposite side sums are independent).
/// Any other key direction leaves each edge in a class of its own, which is
/// why the table insists on generator columns along (1, 0), (0, 1) and
/// (1, 1): their duals are precisely the three covered directions.
pub fn build_compact_grouping_matrix(
    field: &Field,
    mu: usize,
    inner: &LinearCode,
) -> Result<CodeMatrix> {
    let sub = field.subfield()?;
    let q = sub.size();
    if q < 3 {
        return Err(Error::FieldTooSmall(
            "the paired-edge table needs q >= 3; over GF(2) opposite side sums of any \
             parallelogram coincide and the pairs collapse"
                .into(),
        ));
    }
    if **inner.field() != *sub {
        return Err(Error::MixedFields);
    }
    if inner.length() != 3 || inner.dimension() != 2 {
        return Err(Error::InvalidForConstruction(format!(
            "compact locator table is built for [3, 2] locals, got [{}, {}]",
            inner.length(),
            inner.dimension()
        )));
    }
    if !inner.certify_mds() {
        return Err(Error::LocalNotMds);
    }
    let gen = inner.generator();
    for j in 0..3 {
        let (g0, g1) = (gen.get(0, j), gen.get(1, j));
        if g0 != 0 && g1 != 0 && g0 != g1 {
            return Err(Error::InvalidForConstruction(format!(
                "compact locator table needs local generator columns along (1,0), (0,1) or \
                 (1,1); column {j} is ({g0}, {g1})"
            )));
        }
    }
    if mu == 0 {
        return Err(Error::InvalidParameters("at least one group required".into()));
    }
    let m = field.ext_degree()? as usize;
    if 3 * mu > m {
        return Err(Error::LengthExceedsDegree);
    }
    if 8u128.checked_pow(mu as u32).filter(|&t| t <= ROW_CAP).is_none() {
        return Err(Error::TooLarge(format!(
            "8^{mu} locator rows exceed the {ROW_CAP} row cap"
        )));
    }

    let vertices = parallelogram_vertices(&sub)?;
    let edges: [(usize, usize); 8] = [
        (0, 1),
        (1, 0),
        (1, 2),
        (2, 1),
        (2, 3),
        (3, 2),
        (3, 0),
        (0, 3),
    ];

    let x = field.characteristic();
    let mut block_pairs: Vec<Vec<(u64, u64)>> = Vec::with_capacity(mu);
    for g in 0..mu {
        let basis: Vec<u64> = (0..3).map(|j| field.pow(x, (3 * g + j) as u128)).collect();
        let elems: Vec<u64> = vertices
            .iter()
            .map(|v| {
                let mut acc = 0;
                for j in 0..3 {
                    acc = field.add(acc, field.mul(field.embed_from_subfield(v[j])?, basis[j]));
                }
                Ok(acc)
            })
            .collect::<Result<Vec<_>>>()?;
        block_pairs.push(edges.iter().map(|&(a, b)| (elems[a], elems[b])).collect());
    }

    let total = 8usize.pow(mu as u32);
    let mut rows = Vec::with_capacity(total);
    for t in 0..total {
        let digits = digits_base(t, 8, mu);
        let mut row = Vec::with_capacity(2 * mu);
        for g in 0..mu {
            let (u, v) = block_pairs[g][digits[mu - 1 - g]];
            row.push(u);
            row.push(v);
        }
        rows.push(row);
    }
    let b = CodeMatrix::from_rows(field.clone(), &rows)?;

    // The vertex conditions above are what make the punctured groupings work;
    // the identity grouping is cheap enough to check outright on every build.
    for column in 0..b.cols() {
        if let GroupingOutcome::NoGrouping { diagnostic, .. } = find_grouping(&b, 2, column)? {
            return Err(Error::GroupingFailed(format!(
                "searched table failed its own grouping at column {column}: {diagnostic}"
            )));
        }
    }
    Ok(b)
}

/// Four parallelogram vertices in GF(q)^3 with every adjacent pair
/// independent, the shared diagonal sum independent of each vertex, and the
/// two opposite-side sums independent. The canonical pick works over every
/// GF(q) with q >= 3; a small exhaustive search backs it up.
fn parallelogram_vertices(sub: &Field) -> Result<[[u64; 3]; 4]> {
    let one = 1;
    let canonical = [
        [one, 0, 0],
        [0, one, 0],
        [0, 0, one],
        [one, sub.neg(one), one],
    ];
    if parallelogram_holds(sub, &canonical) {
        return Ok(canonical);
    }
    let q = sub.size();
    let v1 = [one, 0, 0];
    for c2 in 1..q.pow(3) {
        let v2 = vector_from_counter(c2, q);
        for c3 in 1..q.pow(3) {
            let v3 = vector_from_counter(c3, q);
            let sigma = vec_add(sub, &v1, &v3);
            let v4 = vec_sub(sub, &sigma, &v2);
            let candidate = [v1, v2, v3, v4];
            if parallelogram_holds(sub, &candidate) {
                return Ok(candidate);
            }
        }
    }
    Err(Error::SearchExhausted(format!(
        "no paired-edge vertex set exists over GF({q})"
    )))
}

fn vector_from_counter(counter: u64, q: u64) -> [u64; 3] {
    [counter % q, (counter / q) % q, (counter / (q * q)) % q]
}

fn vec_add(sub: &Field, a: &[u64; 3], b: &[u64; 3]) -> [u64; 3] {
    [
        sub.add(a[0], b[0]),
        sub.add(a[1], b[1]),
        sub.add(a[2], b[2]),
    ]
}

fn vec_sub(sub: &Field, a: &[u64; 3], b: &[u64; 3]) -> [u64; 3] {
    [
        sub.add(a[0], sub.neg(b[0])),
        sub.add(a[1], sub.neg(b[1])),
        sub.add(a[2], sub.neg(b[2])),
    ]
}

/// Proportionality over GF(q), zero vectors counting as proportional to
/// everything: all 2 x 2 minors of the pair vanish.
fn proportional(sub: &Field, a: &[u64; 3], b: &[u64; 3]) -> bool {
    [(0, 1), (0, 2), (1, 2)].iter().all(|&(i, j)| {
        sub.add(sub.mul(a[i], b[j]), sub.neg(sub.mul(a[j], b[i]))) == 0
    })
}

fn parallelogram_holds(sub: &Field, v: &[[u64; 3]; 4]) -> bool {
    let sigma = vec_add(sub, &v[0], &v[2]);
    if sigma != vec_add(sub, &v[1], &v[3]) {
        return false;
    }
    let adjacent = [(0, 1), (1, 2), (2, 3), (3, 0)];
    if adjacent.iter().any(|&(i, j)| proportional(sub, &v[i], &v[j])) {
        return false;
    }
    if v.iter().any(|vi| proportional(sub, &sigma, vi)) {
        return false;
    }
    let side01 = vec_add(sub, &v[0], &v[1]);
    let side23 = vec_add(sub, &v[2], &v[3]);
    let side03 = vec_add(sub, &v[0], &v[3]);
    let side12 = vec_add(sub, &v[1], &v[2]);
    !proportional(sub, &side01, &side23) && !proportional(sub, &side03, &side12)
}

/// Partial-MDS array code that is MSR for whole-stripe repair after
/// puncturing: rows are skew codes over GF(q^M) on a shared locator matrix,
/// local columns are spread by an [n, n - r] MDS code over the subfield.
pub struct GlobalMsrPmdsCode {
    field: Field,
    params: PmdsParams,
    inner: LinearCode,
    skew: SkewYeBargCode,
    row_gens: Vec<CodeMatrix>,
    row_checks: Vec<CodeMatrix>,
}

/// Assemble the code: row a's generator is the skew row generator times a
/// block-diagonal stack of mu copies of the local generator, embedded into
/// the big field. The locator row count must be a multiple of s, or no
/// grouping table can ever partition the rows.
pub fn build_global_msr_pmds(
    field: Field,
    params: PmdsParams,
    b: CodeMatrix,
    inner: &LinearCode,
) -> Result<GlobalMsrPmdsCode> {
    params.validate()?;
    let sub = field.subfield()?;
    if **inner.field() != *sub {
        return Err(Error::MixedFields);
    }
    if inner.length() != params.n || inner.dimension() != params.n - params.r {
        return Err(Error::DimensionMismatch(format!(
            "[{}, {}] local code for groups needing [{}, {}]",
            inner.length(),
            inner.dimension(),
            params.n,
            params.n - params.r
        )));
    }
    if !inner.certify_mds() {
        return Err(Error::LocalNotMds);
    }
    if b.cols() != params.mu * (params.n - params.r) {
        return Err(Error::DimensionMismatch(format!(
            "locator matrix with {} columns for mu (n - r) = {}",
            b.cols(),
            params.mu * (params.n - params.r)
        )));
    }
    if b.rows() % params.s != 0 {
        return Err(Error::InvalidParameters(format!(
            "{} locator rows cannot split into repair sets of s = {}",
            b.rows(),
            params.s
        )));
    }
    let skew = build_skew_yebarg(field.clone(), b, params.s)?;
    let local_gen = embed_matrix(&field, inner.generator())?;
    let blocks: Vec<&CodeMatrix> = (0..params.mu).map(|_| &local_gen).collect();
    let spread = CodeMatrix::block_diag(&blocks)?;
    let mut row_gens = Vec::with_capacity(skew.ell());
    let mut row_checks = Vec::with_capacity(skew.ell());
    for a in 0..skew.ell() {
        let gen = skew.row_code(a)?.generator().mul(&spread)?;
        row_checks.push(gen.null_space_basis());
        row_gens.push(gen);
    }
    Ok(GlobalMsrPmdsCode {
        field,
        params,
        inner: inner.clone(),
        skew,
        row_gens,
        row_checks,
    })
}

impl GlobalMsrPmdsCode {
    pub fn skew(&self) -> &SkewYeBargCode {
        &self.skew
    }

    pub fn inner(&self) -> &LinearCode {
        &self.inner
    }

    pub fn locator_matrix(&self) -> &CodeMatrix {
        self.skew.locator_matrix()
    }

    /// Certify every way of puncturing r columns per group, returning how
    /// many patterns were checked.
    pub fn certify_all_punctures(&self) -> Result<usize> {
        let p = self.params;
        let per_group: Vec<Vec<Vec<usize>>> = (0..p.mu)
            .map(|g| {
                combinations(p.n, p.r)
                    .into_iter()
                    .map(|combo| combo.into_iter().map(|j| g * p.n + j).collect())
                    .collect()
            })
            .collect();
        let choices = per_group[0].len();
        let total = choices.pow(p.mu as u32);
        for t in 0..total {
            let digits = digits_base(t, choices, p.mu);
            let sets: Vec<Vec<usize>> = (0..p.mu)
                .map(|g| per_group[g][digits[p.mu - 1 - g]].clone())
                .collect();
            let pattern = ErasurePattern::new(p, &sets, &[])?;
            puncture_and_certify_global(self, &pattern)?;
        }
        Ok(total)
    }
}

fn matrix_rows(m: &CodeMatrix) -> Vec<Vec<u64>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

impl ArrayCode for GlobalMsrPmdsCode {
    fn name(&self) -> &str {
        "global-msr"
    }

    fn field(&self) -> &Field {
        &self.field
    }

    fn params(&self) -> PmdsParams {
        self.params
    }

    fn ell(&self) -> usize {
        self.skew.ell()
    }

    fn row_generator(&self, a: usize) -> Result<CodeMatrix> {
        self.row_gens.get(a).cloned().ok_or(Error::RowOutOfRange)
    }

    fn row_parity_check(&self, a: usize) -> Result<CodeMatrix> {
        self.row_checks.get(a).cloned().ok_or(Error::RowOutOfRange)
    }

    fn descriptor(&self) -> Value {
        json!({
            "construction": self.name(),
            "field": self.field.descriptor(),
            "mu": self.params.mu,
            "n": self.params.n,
            "r": self.params.r,
            "s": self.params.s,
            "inner_parity": matrix_rows(self.inner.parity_check()),
            "locators": matrix_rows(self.skew.locator_matrix()),
        })
    }

    fn as_global_msr(&self) -> Option<&dyn GlobalMsrCode> {
        Some(self)
    }
}

/// A certified puncturing: the surviving stripe as a skew code with the
/// predicted moved locators, plus one grouping table per surviving column.
pub struct PuncturedGlobal {
    skew: SkewYeBargCode,
    survivors: Vec<usize>,
    groupings: Vec<GroupingTable>,
}

impl PuncturedGlobal {
    pub fn skew(&self) -> &SkewYeBargCode {
        &self.skew
    }

    /// Surviving global column indices, ascending; position in this list is
    /// the column index within the punctured stripe.
    pub fn survivors(&self) -> &[usize] {
        &self.survivors
    }

    pub fn groupings(&self) -> &[GroupingTable] {
        &self.groupings
    }

    pub fn grouping(&self, column: usize) -> Result<&GroupingTable> {
        self.groupings.get(column).ok_or_else(|| {
            Error::InvalidParameters(format!(
                "column {column} outside the punctured stripe of width {}",
                self.groupings.len()
            ))
        })
    }
}

/// Check that puncturing by `pattern` (exactly r columns per group, nothing
/// else) leaves a skew stripe with the locators moved by the inverse of the
/// surviving local generator slice, and that every surviving column admits a
/// grouping table. Both facts are verified against the actual row codes, not
/// assumed.
pub fn puncture_and_certify_global(
    code: &GlobalMsrPmdsCode,
    pattern: &ErasurePattern,
) -> Result<PuncturedGlobal> {
    let p = code.params();
    if pattern.params() != p {
        return Err(Error::InvalidParameters(
            "puncturing pattern built for different layout parameters".into(),
        ));
    }
    if !pattern.extra_set().is_empty() {
        return Err(Error::InvalidParameters(
            "puncturing designates exactly r columns per group, no extra erasures".into(),
        ));
    }
    for g in 0..p.mu {
        if pattern.group_set(g).len() != p.r {
            return Err(Error::InvalidParameters(format!(
                "group {g} punctures {} columns, need exactly r = {}",
                pattern.group_set(g).len(),
                p.r
            )));
        }
    }
    let survivors = pattern.survivors();

    let mut blocks = Vec::with_capacity(p.mu);
    for g in 0..p.mu {
        let local: Vec<usize> = p
            .group_columns(g)
            .filter(|c| !pattern.group_set(g).contains(c))
            .map(|c| c - g * p.n)
            .collect();
        blocks.push(code.inner().generator().select_columns(&local)?);
    }
    let refs: Vec<&CodeMatrix> = blocks.iter().collect();
    let slice = CodeMatrix::block_diag(&refs)?;

    let b = code.locator_matrix();
    let mut moved = Vec::with_capacity(b.rows());
    for a in 0..b.rows() {
        moved.push(transform_locators(code.field(), b.row(a), &slice)?);
    }
    let moved = CodeMatrix::from_rows(code.field().clone(), &moved)?;
    let skew = build_skew_yebarg(code.field().clone(), moved, p.s).map_err(|e| match e {
        Error::DependentRow(a) => Error::GroupingFailed(format!(
            "puncturing left row {a} with dependent locators"
        )),
        other => other,
    })?;

    // Row-code equality: the restricted generator must be annihilated by the
    // predicted parity and still span the full dimension.
    for a in 0..code.ell() {
        let restricted = code.row_generator(a)?.select_columns(&survivors)?;
        let check = skew.row_code(a)?.parity_check();
        for i in 0..restricted.rows() {
            if check.mul_vec(restricted.row(i))?.iter().any(|&v| v != 0) {
                return Err(Error::GroupingFailed(format!(
                    "punctured row {a} is not the predicted skew code"
                )));
            }
        }
        if restricted.rank() != skew.dimension() {
            return Err(Error::GroupingFailed(format!(
                "punctured row {a} lost rank under the puncturing"
            )));
        }
    }

    let mut groupings = Vec::with_capacity(survivors.len());
    for column in 0..survivors.len() {
        match find_grouping(skew.locator_matrix(), p.s, column)? {
            GroupingOutcome::Grouping(table) => groupings.push(table),
            GroupingOutcome::NoGrouping { diagnostic, .. } => {
                return Err(Error::GroupingFailed(format!(
                    "surviving column {column}: {diagnostic}"
                )));
            }
        }
    }
    Ok(PuncturedGlobal {
        skew,
        survivors,
        groupings,
    })
}

fn validate_grouping(
    skew: &SkewYeBargCode,
    grouping: &GroupingTable,
    failed: usize,
) -> Result<()> {
    let s = skew.global_parities();
    let ell = skew.ell();
    if grouping.column != failed {
        return Err(Error::GroupingFailed(format!(
            "table built for column {}, repairing column {failed}",
            grouping.column
        )));
    }
    if ell % s != 0 || grouping.groups.len() != ell / s {
        return Err(Error::GroupingFailed(format!(
            "{} groups cannot cover {ell} rows in sets of {s}",
            grouping.groups.len()
        )));
    }
    let b = skew.locator_matrix();
    let mut seen = vec![false; ell];
    for group in &grouping.groups {
        if group.len() != s {
            return Err(Error::GroupingFailed(format!(
                "group of {} rows where s = {s}",
                group.len()
            )));
        }
        for &a in group {
            if a >= ell || seen[a] {
                return Err(Error::GroupingFailed(format!(
                    "row {a} repeated or out of range"
                )));
            }
            seen[a] = true;
        }
        for j in 0..b.cols() {
            if j == failed {
                continue;
            }
            if group.iter().any(|&a| b.get(a, j) != b.get(group[0], j)) {
                return Err(Error::GroupingFailed(format!(
                    "grouped rows disagree at helper column {j}"
                )));
            }
        }
        let values: Vec<u64> = group.iter().map(|&a| b.get(a, failed)).collect();
        if !skew.field().linearly_independent_over_subfield(&values)? {
            return Err(Error::GroupingFailed(format!(
                "grouped locators at column {failed} are dependent"
            )));
        }
    }
    Ok(())
}

/// Repair one column of a skew stripe from all the others using a grouping
/// table. Each helper column j ships one aggregated symbol per group, the sum
/// of its entries over the group's rows; summing the e-th parity over a
/// group's rows then leaves an s x s Moore system in the failed entries,
/// since the helper locators agree within the group and factor out. Total
/// download is (cols - 1) ell / s symbols against a cut-set bound of the
/// same value. Entries stored at the failed column are never read.
pub fn global_repair(
    skew: &SkewYeBargCode,
    grouping: &GroupingTable,
    word: &ArrayCodeword,
    failed: usize,
) -> Result<(Vec<u64>, RepairTranscript)> {
    skew.check_shape(word)?;
    if failed >= skew.length() {
        return Err(Error::InvalidParameters(format!(
            "failed column {failed} out of range for width {}",
            skew.length()
        )));
    }
    validate_grouping(skew, grouping, failed)?;
    let field = skew.field().clone();
    let b = skew.locator_matrix();
    let s = skew.global_parities();
    let helpers: Vec<usize> = (0..skew.length()).filter(|&j| j != failed).collect();

    let mut column = vec![0u64; skew.ell()];
    for group in &grouping.groups {
        let points: Vec<u64> = group.iter().map(|&a| b.get(a, failed)).collect();
        let moore = CodeMatrix::moore(field.clone(), s, &points)?;
        // One aggregated symbol per helper: the group sum of its column.
        let shipped: Vec<(u64, u64)> = helpers
            .iter()
            .map(|&j| {
                let sigma = group
                    .iter()
                    .fold(0, |sum, &a| field.add(sum, word.get(a, j)));
                (b.get(group[0], j), sigma)
            })
            .collect();
        let mut rhs = Vec::with_capacity(s);
        for e in 0..s {
            let mut acc = 0;
            for &(beta, sigma) in &shipped {
                acc = field.add(acc, field.mul(field.frobenius(beta, e as u32)?, sigma));
            }
            rhs.push(field.neg(acc));
        }
        match moore.solve(&rhs)? {
            SolveOutcome::Unique(values) => {
                for (&a, v) in group.iter().zip(values) {
                    column[a] = v;
                }
            }
            _ => {
                return Err(Error::GroupingFailed(
                    "group repair system was singular".into(),
                ));
            }
        }
    }

    let (num, den) = RepairTranscript::cut_set_bound(
        1,
        skew.length() - 1,
        skew.ell(),
        skew.length(),
        s,
    );
    let per_helper = vec![(skew.ell() / s) as u64; helpers.len()];
    let transcript = RepairTranscript::new(
        vec![failed],
        helpers,
        per_helper,
        num,
        den,
        true,
        skew.field(),
    );
    Ok((column, transcript))
}

impl GlobalMsrCode for GlobalMsrPmdsCode {
    fn global_repair(
        &self,
        word: &ArrayCodeword,
        punctured: &ErasurePattern,
        failed: usize,
    ) -> Result<(Vec<u64>, RepairTranscript)> {
        self.check_shape(word)?;
        let cert = puncture_and_certify_global(self, punctured)?;
        let pos = cert
            .survivors()
            .iter()
            .position(|&c| c == failed)
            .ok_or_else(|| {
                Error::InvalidHelpers(format!(
                    "column {failed} is punctured, repair applies to survivors"
                ))
            })?;
        let restricted = word.restrict_columns(cert.survivors())?;
        let (column, transcript) = global_repair(cert.skew(), cert.grouping(pos)?, &restricted, pos)?;
        let helpers: Vec<usize> = transcript
            .helpers
            .iter()
            .map(|&j| cert.survivors()[j])
            .collect();
        let remapped = RepairTranscript::new(
            vec![failed],
            helpers,
            transcript.per_helper.clone(),
            transcript.bound_num,
            transcript.bound_den,
            true,
            &self.field,
        );
        Ok((column, remapped))
    }
}
