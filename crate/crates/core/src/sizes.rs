//! Closed-form field-size and subpacketization calculators for the six
//! construction families, executable checks of the size-comparison
//! relations, and CSV emission for plotting sweeps.
//!
//! Everything here is exact big-integer arithmetic; no floating point. The
//! one value that can outgrow memory, the doubly exponential Q_E, is capped
//! at a megabit of magnitude and reported as TooLarge beyond that. The
//! comparison sweep never materializes Q_E at all: it shares its base with
//! Q_B, so comparing exponents settles the relation exactly.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{pow, One};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::gf::smallest_prime_power_at_least;
use crate::{Error, Result};

/// Bit cap on materialized values; Q_E beyond this is reported, not built.
const MATERIALIZE_BIT_CAP: u64 = 1 << 20;

/// One parameter point: mu groups of length n, r local parities per group,
/// s global parities, and d helpers for in-group repair.
///
/// The constructor admits s up to mu * (n - r), the widest range any family
/// here accepts; the stricter s <= (n - r)(mu - 1) needed by the locally
/// regenerating families is checked by [`ParamPoint::strictly_valid`] and
/// enforced where those formulas are evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamPoint {
    pub mu: usize,
    pub n: usize,
    pub r: usize,
    pub s: usize,
    pub d: usize,
}

impl ParamPoint {
    pub fn new(mu: usize, n: usize, r: usize, s: usize, d: usize) -> Result<Self> {
        if mu < 2 {
            return Err(Error::InvalidParameters(format!(
                "need at least two groups, got mu = {mu}"
            )));
        }
        if r == 0 || r >= n {
            return Err(Error::InvalidParameters(format!(
                "need 0 < r < n, got r = {r}, n = {n}"
            )));
        }
        if s == 0 || s > mu * (n - r) {
            return Err(Error::InvalidParameters(format!(
                "need 0 < s <= mu(n - r) = {}, got s = {s}",
                mu * (n - r)
            )));
        }
        if d < n - r || d > n - 1 {
            return Err(Error::InvalidParameters(format!(
                "need n - r <= d <= n - 1, got d = {d}"
            )));
        }
        Ok(ParamPoint { mu, n, r, s, d })
    }

    /// Helper surplus b = d + 1 - n + r; b = 1 means repair-by-decode.
    pub fn b(&self) -> usize {
        self.d + 1 + self.r - self.n
    }

    /// Whether s <= (n - r)(mu - 1) holds, the validity range of the
    /// locally regenerating families A through E.
    pub fn strictly_valid(&self) -> bool {
        self.s <= (self.n - self.r) * (self.mu - 1)
    }
}

/// The six construction families the calculators cover.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Construction {
    A,
    B,
    C,
    D,
    E,
    Global,
}

impl Construction {
    pub const ALL: [Construction; 6] = [
        Construction::A,
        Construction::B,
        Construction::C,
        Construction::D,
        Construction::E,
        Construction::Global,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Construction::A => "A",
            Construction::B => "B",
            Construction::C => "C",
            Construction::D => "D",
            Construction::E => "E",
            Construction::Global => "Global",
        }
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Construction {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        match text.trim() {
            "A" | "a" => Ok(Construction::A),
            "B" | "b" => Ok(Construction::B),
            "C" | "c" => Ok(Construction::C),
            "D" | "d" => Ok(Construction::D),
            "E" | "e" => Ok(Construction::E),
            "Global" | "global" | "G" | "g" => Ok(Construction::Global),
            other => Err(Error::InvalidParameters(format!(
                "unknown construction {other:?}, expected one of A, B, C, D, E, Global"
            ))),
        }
    }
}

fn big(v: usize) -> BigUint {
    BigUint::from(v as u64)
}

fn require_strict(point: &ParamPoint, c: Construction) -> Result<()> {
    if !point.strictly_valid() {
        return Err(Error::InvalidForConstruction(format!(
            "construction {c} needs s <= (n - r)(mu - 1) = {}, got s = {}",
            (point.n - point.r) * (point.mu - 1),
            point.s
        )));
    }
    Ok(())
}

/// Smallest and largest field size the family guarantees at this point,
/// inclusive on both ends except Global, whose upper end is exclusive. The
/// exact families B, C, and E return equal ends.
pub fn field_size_bounds(point: &ParamPoint, c: Construction) -> Result<(BigUint, BigUint)> {
    let ParamPoint { mu, n, r, s, .. } = *point;
    let b = point.b();
    match c {
        Construction::A => {
            require_strict(point, c)?;
            if s != 2 {
                return Err(Error::InvalidForConstruction(format!(
                    "construction A exists only for s = 2, got s = {s}"
                )));
            }
            let base = big(mu) * big(r) * big(r * n - r + n - 2);
            Ok((&base + BigUint::one(), base * big(2)))
        }
        Construction::B => {
            require_strict(point, c)?;
            let q = pow(big(b * n), mu * (n - r));
            Ok((q.clone(), q))
        }
        Construction::C => {
            require_strict(point, c)?;
            let q = pow(big((b * n).max(mu + 1)), n - r);
            Ok((q.clone(), q))
        }
        Construction::D => {
            require_strict(point, c)?;
            let e = s * (r + 1) - 1;
            let lower = big(n) * big(b) * pow(big(n * mu), e);
            let upper = big(2 * n) * big(b) * pow(big(2 * n * mu), e);
            Ok((lower, upper))
        }
        Construction::E => {
            require_strict(point, c)?;
            let q = materialize_q_e(point)?;
            Ok((q.clone(), q))
        }
        Construction::Global => {
            let e = mu * (n - r + s - 1);
            Ok((pow(big(n - 1), e), pow(big(2 * (n - 1)), e)))
        }
    }
}

/// Q_E = (bn)^(b^n * mu(n - r)) materialized, or TooLarge past the bit cap.
fn materialize_q_e(point: &ParamPoint) -> Result<BigUint> {
    let exponent = q_e_exponent(point);
    let base_bits = u64::from(usize::BITS - (point.b() * point.n).leading_zeros());
    let bits = &exponent * BigUint::from(base_bits);
    if bits > BigUint::from(MATERIALIZE_BIT_CAP) {
        return Err(Error::TooLarge(format!(
            "Q_E needs about {bits} bits, past the {MATERIALIZE_BIT_CAP}-bit cap"
        )));
    }
    let exponent: u64 = exponent.try_into().expect("capped exponent fits u64");
    Ok(pow(big(point.b() * point.n), exponent as usize))
}

fn q_e_exponent(point: &ParamPoint) -> BigUint {
    pow(big(point.b()), point.n) * big(point.mu * (point.n - point.r))
}

/// Base field the Global family defaults to: the smallest prime power
/// admitting a long enough MDS row code, at least n - 1.
pub fn default_global_base(point: &ParamPoint) -> Result<u64> {
    let (p, m) = smallest_prime_power_at_least(((point.n - 1).max(2)) as u64, None)?;
    Ok(p.pow(m))
}

/// Rows per column of the family's codes. Families A through E share
/// ell = b^n; Global counts, per group, the ordered GF(q)-independent
/// (n - r)-tuples in an (n - r + s - 1)-dimensional space, with the
/// closed-form cap 4^mu * q^(mu(n - r)(n - r + s - 1)) asserted on the way
/// out. The Global count depends on the base field, which defaults to
/// [`default_global_base`].
pub fn subpacketization(point: &ParamPoint, c: Construction) -> Result<BigUint> {
    match c {
        Construction::Global => subpacketization_with_base(point, c, default_global_base(point)?),
        _ => subpacketization_with_base(point, c, 0),
    }
}

/// As [`subpacketization`] with an explicit Global base field q.
pub fn subpacketization_with_base(
    point: &ParamPoint,
    c: Construction,
    q: u64,
) -> Result<BigUint> {
    let ParamPoint { mu, n, r, s, .. } = *point;
    match c {
        Construction::Global => {
            if q < 2 {
                return Err(Error::InvalidParameters(format!(
                    "base field size must be at least 2, got {q}"
                )));
            }
            let dim = n - r + s - 1;
            let mut per_block = BigUint::one();
            for t in 0..n - r {
                per_block *= pow(BigUint::from(q), dim) - pow(BigUint::from(q), t);
            }
            let ell = pow(per_block, mu);
            let cap = pow(big(4), mu) * pow(BigUint::from(q), mu * (n - r) * dim);
            assert!(
                ell <= cap,
                "independent-tuple count exceeds its closed-form cap"
            );
            Ok(ell)
        }
        _ => {
            require_strict(point, c)?;
            Ok(pow(big(point.b()), n))
        }
    }
}

/// Inclusive parameter ranges to sweep; a pinned parameter uses an equal
/// pair. Unset r, s, d default to every value that makes the point valid
/// for the locally regenerating families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sweep {
    pub n: (usize, usize),
    pub mu: (usize, usize),
    pub r: Option<(usize, usize)>,
    pub s: Option<(usize, usize)>,
    pub d: Option<(usize, usize)>,
}

impl Sweep {
    pub fn over(n: (usize, usize), mu: (usize, usize)) -> Self {
        Sweep {
            n,
            mu,
            r: None,
            s: None,
            d: None,
        }
    }

    pub fn with_r(mut self, r: (usize, usize)) -> Self {
        self.r = Some(r);
        self
    }

    pub fn with_s(mut self, s: (usize, usize)) -> Self {
        self.s = Some(s);
        self
    }

    pub fn with_d(mut self, d: (usize, usize)) -> Self {
        self.d = Some(d);
        self
    }

    /// Every strictly valid point in range, ordered by (n, mu, r, s, d).
    pub fn points(&self) -> Vec<ParamPoint> {
        let clamp = |full: (usize, usize), user: Option<(usize, usize)>| match user {
            Some((lo, hi)) => (full.0.max(lo), full.1.min(hi)),
            None => full,
        };
        let mut out = Vec::new();
        for n in self.n.0..=self.n.1 {
            for mu in self.mu.0.max(2)..=self.mu.1 {
                let (r_lo, r_hi) = clamp((1, n.saturating_sub(1)), self.r);
                for r in r_lo..=r_hi {
                    let (s_lo, s_hi) = clamp((1, (n - r) * (mu - 1)), self.s);
                    for s in s_lo..=s_hi {
                        let (d_lo, d_hi) = clamp((n - r, n - 1), self.d);
                        for d in d_lo..=d_hi {
                            if let Ok(point) = ParamPoint::new(mu, n, r, s, d) {
                                out.push(point);
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// One failed size relation, with the compared values in decimal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonViolation {
    pub point: ParamPoint,
    pub relation: String,
    pub detail: String,
}

/// Outcome of sweeping the four size-comparison relations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub sweep: Sweep,
    pub points_checked: u64,
    pub trivial_points_skipped: u64,
    pub relations_checked: u64,
    pub violations: Vec<ComparisonViolation>,
}

impl ComparisonReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Check, over every non-trivial point of the sweep (b > 1; repair-by-decode
/// points prove nothing), that:
///
/// (i)   Q_C < Q_B < Q_E, always;
/// (ii)  for s = 2, Q_A_upper < Q_D_lower, and Q_A_upper < Q_C whenever
///       r < n - 3 and mu <= n^(n - r - 3);
/// (iii) Q_C < Q_D_lower whenever s(r + 1) + 2r - 1 >= 2n;
/// (iv)  Q_D_upper < Q_C whenever 2s(r + 1) + r <= n.
///
/// Q_B < Q_E is settled by comparing exponents over the shared base bn >= 2,
/// so Q_E is never materialized.
pub fn check_comparison_theorem(sweep: &Sweep) -> Result<ComparisonReport> {
    let points = sweep.points();
    let trivial = points.iter().filter(|p| p.b() == 1).count() as u64;
    let work: Vec<ParamPoint> = points.into_iter().filter(|p| p.b() > 1).collect();

    let per_point: Vec<(u64, Vec<ComparisonViolation>)> = work
        .par_iter()
        .map(|point| relations_at(point))
        .collect::<Result<_>>()?;

    let mut relations_checked = 0;
    let mut violations = Vec::new();
    for (count, mut v) in per_point {
        relations_checked += count;
        violations.append(&mut v);
    }
    Ok(ComparisonReport {
        sweep: *sweep,
        points_checked: work.len() as u64,
        trivial_points_skipped: trivial,
        relations_checked,
        violations,
    })
}

fn relations_at(point: &ParamPoint) -> Result<(u64, Vec<ComparisonViolation>)> {
    let ParamPoint { mu, n, r, s, .. } = *point;
    let mut checked = 0;
    let mut violations = Vec::new();
    let mut expect = |relation: &str, lhs: &BigUint, rhs: &BigUint| {
        checked += 1;
        if lhs >= rhs {
            violations.push(ComparisonViolation {
                point: *point,
                relation: relation.to_string(),
                detail: format!("{lhs} >= {rhs}"),
            });
        }
    };

    let (q_b, _) = field_size_bounds(point, Construction::B)?;
    let (q_c, _) = field_size_bounds(point, Construction::C)?;
    let (q_d_lower, q_d_upper) = field_size_bounds(point, Construction::D)?;

    expect("(i) Q_C < Q_B", &q_c, &q_b);
    // Same base bn >= 2 on both sides, so exponents decide.
    let exp_b = big(mu * (n - r));
    let exp_e = q_e_exponent(point);
    expect("(i) Q_B < Q_E", &exp_b, &exp_e);

    if s == 2 {
        let (_, q_a_upper) = field_size_bounds(point, Construction::A)?;
        expect("(ii) Q_A < Q_D", &q_a_upper, &q_d_lower);
        if r + 3 < n && big(mu) <= pow(big(n), n - r - 3) {
            expect("(ii) Q_A < Q_C", &q_a_upper, &q_c);
        }
    }
    if s * (r + 1) + 2 * r >= 2 * n + 1 {
        expect("(iii) Q_C < Q_D", &q_c, &q_d_lower);
    }
    if 2 * s * (r + 1) + r <= n {
        expect("(iv) Q_D < Q_C", &q_d_upper, &q_c);
    }
    Ok((checked, violations))
}

/// CSV over the sweep's points and the given constructions: exact decimal
/// integers under the header `n,mu,r,s,d,construction,q_lower,q_upper,ell`.
/// A construction that does not apply to a point (A away from s = 2) or
/// whose exact value passes the materialization cap (E at large parameters)
/// contributes no row.
pub fn emit_csv(sweep: &Sweep, constructions: &[Construction]) -> Result<String> {
    let mut out = String::from("n,mu,r,s,d,construction,q_lower,q_upper,ell\n");
    for point in sweep.points() {
        for &c in constructions {
            let bounds = match field_size_bounds(&point, c) {
                Ok(b) => b,
                Err(Error::InvalidForConstruction(_)) | Err(Error::TooLarge(_)) => continue,
                Err(e) => return Err(e),
            };
            let ell = subpacketization(&point, c)?;
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                point.n, point.mu, point.r, point.s, point.d, c, bounds.0, bounds.1, ell
            ));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::ArrayCode;
    use crate::gf::FiniteField;
    use crate::pmds2::{build_pmds2, Pmds2Mode};

    fn point(mu: usize, n: usize, r: usize, s: usize, d: usize) -> ParamPoint {
        ParamPoint::new(mu, n, r, s, d).unwrap()
    }

    #[test]
    fn reference_figure_values_are_exact() {
        let a = point(5, 10, 1, 2, 9);
        assert_eq!(
            field_size_bounds(&a, Construction::A).unwrap(),
            (big(86), big(170))
        );
        let edge = point(5, 10, 9, 2, 9);
        assert_eq!(
            field_size_bounds(&edge, Construction::C).unwrap(),
            (big(90), big(90))
        );
        let q_b = BigUint::from(5_904_900_000u64);
        assert_eq!(
            field_size_bounds(&edge, Construction::B).unwrap(),
            (q_b.clone(), q_b)
        );
    }

    #[test]
    fn exact_families_collapse_their_bounds() {
        let p = point(2, 4, 2, 2, 3);
        for c in [Construction::B, Construction::C, Construction::E] {
            let (lo, hi) = field_size_bounds(&p, c).unwrap();
            assert_eq!(lo, hi, "{c} must be exact");
        }
        let (lo, hi) = field_size_bounds(&p, Construction::A).unwrap();
        assert!(lo < hi);
        // b = 2, bn = 8: (bn)^(mu(n-r)) and (bn)^(b^n * mu(n-r)).
        assert_eq!(
            field_size_bounds(&p, Construction::B).unwrap().0,
            pow(big(8), 4)
        );
        assert_eq!(
            field_size_bounds(&p, Construction::E).unwrap().0,
            pow(big(8), 64)
        );
    }

    #[test]
    fn rows_per_column_follow_the_helper_surplus() {
        let p = point(2, 4, 2, 2, 3);
        assert_eq!(subpacketization(&p, Construction::A).unwrap(), big(16));
        assert_eq!(subpacketization(&p, Construction::E).unwrap(), big(16));
        let trivial = point(2, 4, 2, 2, 2);
        assert_eq!(trivial.b(), 1);
        assert_eq!(subpacketization(&trivial, Construction::B).unwrap(), big(1));
    }

    #[test]
    fn family_a_needs_exactly_two_global_parities() {
        let p = point(3, 5, 2, 3, 4);
        assert!(matches!(
            field_size_bounds(&p, Construction::A),
            Err(Error::InvalidForConstruction(_))
        ));
        assert!(field_size_bounds(&p, Construction::D).is_ok());
    }

    #[test]
    fn loose_points_serve_only_the_global_family() {
        // s = 2 > (n - r)(mu - 1) = 1: valid for Global, invalid for A..E.
        let p = point(2, 2, 1, 2, 1);
        assert!(!p.strictly_valid());
        assert!(matches!(
            field_size_bounds(&p, Construction::B),
            Err(Error::InvalidForConstruction(_))
        ));
        assert!(matches!(
            subpacketization(&p, Construction::C),
            Err(Error::InvalidForConstruction(_))
        ));
        assert!(field_size_bounds(&p, Construction::Global).is_ok());
    }

    #[test]
    fn global_family_matches_the_reference_configuration() {
        let p = point(2, 2, 1, 2, 1);
        // Over GF(3), each group contributes 3^2 - 1 independent 1-tuples.
        let ell = subpacketization_with_base(&p, Construction::Global, 3).unwrap();
        assert_eq!(ell, big(64));
        let cap = pow(big(4), 2) * pow(big(3), 4);
        assert!(ell <= cap);
        assert_eq!(cap, big(1296));

        // The default base is the smallest usable prime power.
        assert_eq!(default_global_base(&p).unwrap(), 2);
        assert_eq!(
            subpacketization(&p, Construction::Global).unwrap(),
            big(9)
        );

        let (lo, hi) = field_size_bounds(&p, Construction::Global).unwrap();
        assert_eq!(lo, big(1));
        assert_eq!(hi, big(16));
    }

    #[test]
    fn global_base_respects_the_row_code_length() {
        let p = point(2, 10, 1, 2, 9);
        assert_eq!(default_global_base(&p).unwrap(), 9);
        let q = point(2, 12, 1, 2, 11);
        assert_eq!(default_global_base(&q).unwrap(), 11);
    }

    #[test]
    fn comparison_relations_hold_on_a_small_sweep() {
        let sweep = Sweep::over((3, 6), (2, 3));
        let report = check_comparison_theorem(&sweep).unwrap();
        assert!(report.passed(), "{:?}", report.violations);
        // Sum over n of C(n, 3) non-trivial (r, s, d) combinations, times
        // sum of (mu - 1).
        assert_eq!(report.points_checked, (1 + 4 + 10 + 20) * 3);
        assert!(report.relations_checked >= 2 * report.points_checked);
        assert!(report.trivial_points_skipped > 0);
    }

    #[test]
    fn two_parity_family_beats_d_and_c_where_promised() {
        let p = point(5, 10, 2, 2, 9);
        let (_, q_a_upper) = field_size_bounds(&p, Construction::A).unwrap();
        assert_eq!(q_a_upper, big(520));
        let (q_d_lower, _) = field_size_bounds(&p, Construction::D).unwrap();
        assert_eq!(q_d_lower, BigUint::from(6_250_000_000u64));
        assert!(q_a_upper < q_d_lower);

        // r < n - 3 and mu <= n^(n - r - 3), so A also undercuts C.
        let (q_c, _) = field_size_bounds(&p, Construction::C).unwrap();
        assert_eq!(q_c, pow(big(20), 8));
        assert!(q_a_upper < q_c);
    }

    #[test]
    fn family_d_beats_c_for_few_parities() {
        // 2s(r + 1) + r = 9 <= n = 30.
        let p = point(2, 30, 1, 2, 29);
        let (_, q_d_upper) = field_size_bounds(&p, Construction::D).unwrap();
        assert_eq!(q_d_upper, BigUint::from(103_680_000u64));
        let (q_c, _) = field_size_bounds(&p, Construction::C).unwrap();
        assert_eq!(q_c, pow(big(30), 29));
        assert!(q_d_upper < q_c);
    }

    #[test]
    fn q_e_hits_the_materialization_cap_eventually() {
        let small = point(3, 3, 2, 2, 2);
        assert_eq!(
            field_size_bounds(&small, Construction::E).unwrap().0,
            pow(big(6), 24)
        );
        let huge = point(8, 12, 11, 2, 11);
        assert!(matches!(
            field_size_bounds(&huge, Construction::E),
            Err(Error::TooLarge(_))
        ));
        // The comparison sweep still covers such points without building Q_E.
        let (count, violations) = relations_at(&huge).unwrap();
        assert!(count >= 2);
        assert!(violations.is_empty());
    }

    #[test]
    fn csv_reproduces_the_reference_rows() {
        let sweep = Sweep::over((10, 10), (5, 5)).with_s((2, 2)).with_d((9, 9));
        let csv = emit_csv(
            &sweep,
            &[
                Construction::A,
                Construction::B,
                Construction::C,
                Construction::D,
            ],
        )
        .unwrap();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "n,mu,r,s,d,construction,q_lower,q_upper,ell"
        );
        assert!(csv.contains("\n10,5,1,2,9,A,86,170,1\n"));
        assert!(csv.contains("\n10,5,9,2,9,C,90,90,3486784401\n"));
        assert!(csv.contains("\n10,5,9,2,9,B,5904900000,5904900000,3486784401\n"));
        // Nine r values, four constructions each.
        assert_eq!(csv.lines().count(), 1 + 9 * 4);
    }

    #[test]
    fn csv_of_an_empty_sweep_is_just_the_header() {
        let sweep = Sweep::over((5, 4), (2, 2));
        let csv = emit_csv(&sweep, &Construction::ALL).unwrap();
        assert_eq!(csv, "n,mu,r,s,d,construction,q_lower,q_upper,ell\n");
    }

    #[test]
    fn csv_skips_inapplicable_rows_instead_of_failing() {
        // s = 3 rules out A; E overflows its cap at the large end.
        let sweep = Sweep::over((5, 5), (3, 3)).with_s((3, 3)).with_d((4, 4));
        let csv = emit_csv(&sweep, &Construction::ALL).unwrap();
        assert!(!csv.contains(",A,"));
        assert!(csv.contains(",B,"));
        let far = Sweep::over((12, 12), (8, 8))
            .with_r((11, 11))
            .with_s((2, 2))
            .with_d((11, 11));
        let wide = emit_csv(&far, &[Construction::E]).unwrap();
        assert_eq!(wide.lines().count(), 1);
    }

    #[test]
    fn pinned_sweeps_stay_pinned() {
        let sweep = Sweep::over((10, 10), (5, 5)).with_s((2, 2)).with_d((9, 9));
        let points = sweep.points();
        assert_eq!(points.len(), 9);
        for (i, p) in points.iter().enumerate() {
            assert_eq!((p.n, p.mu, p.s, p.d), (10, 5, 2, 9));
            assert_eq!(p.r, i + 1);
        }
    }

    #[test]
    fn built_reference_field_lands_in_the_predicted_window() {
        let p = point(2, 4, 2, 2, 3);
        let (lo, hi) = field_size_bounds(&p, Construction::A).unwrap();
        assert_eq!((lo.clone(), hi.clone()), (big(33), big(64)));
        let field = FiniteField::gf(2, 6).unwrap();
        let code = build_pmds2(field, 2, 4, 2, 3, Pmds2Mode::Pmds).unwrap();
        let realized = BigUint::from(code.field().size());
        assert!(lo <= realized && realized <= hi);
    }

    #[test]
    fn invalid_points_are_rejected() {
        assert!(ParamPoint::new(1, 4, 2, 2, 3).is_err());
        assert!(ParamPoint::new(2, 4, 0, 2, 3).is_err());
        assert!(ParamPoint::new(2, 4, 4, 2, 3).is_err());
        assert!(ParamPoint::new(2, 4, 2, 5, 3).is_err());
        assert!(ParamPoint::new(2, 4, 2, 2, 1).is_err());
        assert!(ParamPoint::new(2, 4, 2, 2, 4).is_err());
        assert!("Q".parse::<Construction>().is_err());
        assert_eq!("global".parse::<Construction>().unwrap(), Construction::Global);
    }

    #[test]
    fn comparison_report_serializes() {
        let report = check_comparison_theorem(&Sweep::over((4, 4), (2, 2))).unwrap();
        let parsed: serde_json::Value =
            serde_json::from_str(&report.to_json().unwrap()).unwrap();
        assert_eq!(parsed["points_checked"], report.points_checked);
        assert_eq!(parsed["violations"].as_array().unwrap().len(), 0);
    }
}
