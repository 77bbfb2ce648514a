//! Name-keyed catalog of the constructions. Every family sits behind one
//! trait with a parameter-driven builder and a descriptor-driven rebuild, so
//! configuration files and the command line select algorithms at runtime by
//! string instead of by type. Builders pick sane default fields and repair
//! degrees; explicit overrides are passed through and validated by the
//! underlying constructions.

use serde_json::Value;

use crate::code::{ArrayCode, PmdsParams};
use crate::gf::{smallest_prime_power_at_least, Field, FieldDescriptor, FiniteField};
use crate::global::{
    build_compact_grouping_matrix, build_global_msr_pmds, build_grouping_matrix,
    compact_inner_code,
};
use crate::matrix::CodeMatrix;
use crate::mds::LinearCode;
use crate::pmds2::{build_pmds2, BlaumRowCode, Pmds2Mode};
use crate::universal::{build_universal_msr_pmds, find_alpha_set, AlphaStrategy, UniversalFamily};
use crate::{Error, Result};

/// Largest generic locator tower the registry will build; bigger row counts
/// fall back to the compact table when one applies, otherwise the request is
/// refused rather than ground through.
const TOWER_ROW_CAP: u128 = 4096;

/// How many consecutive base-field sizes the tower default will try before
/// giving up on finding one whose row count splits into repair sets.
const BASE_SEARCH_STEPS: usize = 16;

/// What a caller asks a family for. `mu`, `n`, `r`, `s` fix the layout;
/// `d` is the repair degree where one is tunable (default n - 1), `q`
/// overrides the base-field size (the code field for scalar-symbol
/// constructions, the designated subfield elsewhere), and `seed` drives any
/// randomized search a builder runs.
#[derive(Debug, Clone)]
pub struct BuildRequest {
    pub mu: usize,
    pub n: usize,
    pub r: usize,
    pub s: usize,
    pub d: Option<usize>,
    pub q: Option<u64>,
    pub seed: u64,
}

impl BuildRequest {
    pub fn new(mu: usize, n: usize, r: usize, s: usize) -> Self {
        BuildRequest {
            mu,
            n,
            r,
            s,
            d: None,
            q: None,
            seed: 0,
        }
    }

    pub fn with_d(mut self, d: usize) -> Self {
        self.d = Some(d);
        self
    }

    pub fn with_q(mut self, q: u64) -> Self {
        self.q = Some(q);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// One registered construction: a stable name, a one-line account of what it
/// builds, a builder from layout parameters, and a rebuild from the
/// descriptor its codes emit.
pub trait CodeFamily: Send + Sync {
    fn name(&self) -> &'static str;

    fn summary(&self) -> &'static str;

    fn build(&self, req: &BuildRequest) -> Result<Box<dyn ArrayCode>>;

    fn from_descriptor(&self, desc: &Value) -> Result<Box<dyn ArrayCode>>;
}

struct Pmds2Family(Pmds2Mode);
struct BlaumRowFamily;
struct GabidulinFamily;
struct GabrysFamily;
struct GlobalMsrFamily;

static FAMILIES: [&dyn CodeFamily; 7] = [
    &Pmds2Family(Pmds2Mode::Pmds),
    &Pmds2Family(Pmds2Mode::Sd),
    &Pmds2Family(Pmds2Mode::S1),
    &BlaumRowFamily,
    &GabidulinFamily,
    &GabrysFamily,
    &GlobalMsrFamily,
];

/// Every registered family, in catalog order.
pub fn families() -> &'static [&'static dyn CodeFamily] {
    &FAMILIES
}

/// Registered names, in catalog order.
pub fn names() -> Vec<&'static str> {
    FAMILIES.iter().map(|f| f.name()).collect()
}

/// Look a family up by name.
pub fn family(name: &str) -> Result<&'static dyn CodeFamily> {
    FAMILIES
        .iter()
        .copied()
        .find(|f| f.name() == name)
        .ok_or_else(|| {
            Error::UnknownConstruction(format!("{name}; known: {}", names().join(", ")))
        })
}

/// Build by name.
pub fn build(name: &str, req: &BuildRequest) -> Result<Box<dyn ArrayCode>> {
    family(name)?.build(req)
}

/// Rebuild a code from its descriptor, dispatching on the `construction`
/// entry.
pub fn from_descriptor(desc: &Value) -> Result<Box<dyn ArrayCode>> {
    let name = desc
        .get("construction")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::BadDescriptor("no construction entry".into()))?;
    family(name)?.from_descriptor(desc)
}

fn desc_field(desc: &Value) -> Result<Field> {
    let entry = desc
        .get("field")
        .cloned()
        .ok_or_else(|| Error::BadDescriptor("no field entry".into()))?;
    let fd: FieldDescriptor = serde_json::from_value(entry)
        .map_err(|e| Error::BadDescriptor(format!("field entry: {e}")))?;
    FiniteField::from_descriptor(&fd)
}

fn desc_usize(desc: &Value, key: &str) -> Result<usize> {
    desc.get(key)
        .and_then(Value::as_u64)
        .map(|v| v as usize)
        .ok_or_else(|| Error::BadDescriptor(format!("missing or non-integer {key}")))
}

fn desc_u64(desc: &Value, key: &str) -> Result<u64> {
    desc.get(key)
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::BadDescriptor(format!("missing or non-integer {key}")))
}

fn desc_rows(desc: &Value, key: &str) -> Result<Vec<Vec<u64>>> {
    let entry = desc
        .get(key)
        .cloned()
        .ok_or_else(|| Error::BadDescriptor(format!("missing {key}")))?;
    serde_json::from_value(entry).map_err(|e| Error::BadDescriptor(format!("{key}: {e}")))
}

/// Split a claimed prime-power size into (p, t), rejecting anything else.
fn factor_prime_power(q: u64) -> Result<(u64, u32)> {
    if q < 2 {
        return Err(Error::InvalidField(format!("base size {q} is below 2")));
    }
    let (p, t) = smallest_prime_power_at_least(q, None)?;
    if p.checked_pow(t) == Some(q) {
        Ok((p, t))
    } else {
        Err(Error::InvalidField(format!(
            "base size {q} is not a prime power"
        )))
    }
}

/// The binary degree for a requested power-of-two field size.
fn char2_degree(q: u64) -> Result<u32> {
    if q >= 2 && q.is_power_of_two() {
        Ok(q.trailing_zeros())
    } else {
        Err(Error::InvalidField(format!(
            "construction needs a power-of-two field size, got {q}"
        )))
    }
}

/// Smallest power of two at least `floor`, never below 2.
fn two_power_at_least(floor: u64) -> u64 {
    floor.max(2).next_power_of_two()
}

/// Default repair degree, and the shared bounds check: a column rebuilds
/// from d in-group survivors, so d must sit in [n - r, n - 1].
fn resolve_d(req: &BuildRequest) -> Result<usize> {
    let d = req.d.unwrap_or(req.n - 1);
    if d < req.n - req.r || d >= req.n {
        return Err(Error::InvalidHelpers(format!(
            "helper count d = {d} outside [{}, {}]",
            req.n - req.r,
            req.n - 1
        )));
    }
    Ok(d)
}

impl CodeFamily for Pmds2Family {
    fn name(&self) -> &'static str {
        self.0.name()
    }

    fn summary(&self) -> &'static str {
        match self.0 {
            Pmds2Mode::Pmds => {
                "array code with two global parities decoding every admissible pattern, \
                 with optimal-bandwidth in-group repair"
            }
            Pmds2Mode::Sd => {
                "array code with two global parities for aligned-sector patterns, \
                 over a smaller field"
            }
            Pmds2Mode::S1 => "single-global-parity variant of the two-parity array code",
        }
    }

    fn build(&self, req: &BuildRequest) -> Result<Box<dyn ArrayCode>> {
        if req.s != self.0.s() {
            return Err(Error::InvalidParameters(format!(
                "{} always has s = {}, got {}",
                self.name(),
                self.0.s(),
                req.s
            )));
        }
        PmdsParams::new(req.mu, req.n, req.r, req.s)?;
        let d = resolve_d(req)?;
        let field = match req.q {
            Some(q) => FiniteField::gf(2, char2_degree(q)?)?,
            None => {
                let b = d + 1 - (req.n - req.r);
                let modulus = self.0.default_modulus(req.n, req.r);
                let floor = (req.mu as u64 * modulus).max((b * req.n) as u64);
                FiniteField::gf(2, char2_degree(two_power_at_least(floor + 1))?)?
            }
        };
        let code = build_pmds2(field, req.mu, req.n, req.r, d, self.0)?;
        Ok(Box::new(code))
    }

    fn from_descriptor(&self, desc: &Value) -> Result<Box<dyn ArrayCode>> {
        let field = desc_field(desc)?;
        let code = build_pmds2(
            field,
            desc_usize(desc, "mu")?,
            desc_usize(desc, "n")?,
            desc_usize(desc, "r")?,
            desc_usize(desc, "d")?,
            self.0,
        )?;
        if desc_u64(desc, "modulus")? != code.modulus() {
            return Err(Error::BadDescriptor(format!(
                "modulus {} differs from the rebuilt {}",
                desc_u64(desc, "modulus")?,
                code.modulus()
            )));
        }
        if desc_u64(desc, "beta")? != code.beta() {
            return Err(Error::BadDescriptor(format!(
                "base element {} differs from the rebuilt {}",
                desc_u64(desc, "beta")?,
                code.beta()
            )));
        }
        Ok(Box::new(code))
    }
}

impl CodeFamily for BlaumRowFamily {
    fn name(&self) -> &'static str {
        "blaum-row"
    }

    fn summary(&self) -> &'static str {
        "one-row code with two global parities, the scalar base of the array modes"
    }

    fn build(&self, req: &BuildRequest) -> Result<Box<dyn ArrayCode>> {
        if req.s != 2 {
            return Err(Error::InvalidParameters(format!(
                "blaum-row always has s = 2, got {}",
                req.s
            )));
        }
        if req.d.is_some() {
            return Err(Error::InvalidParameters(
                "blaum-row is scalar and has no repair degree; drop d".into(),
            ));
        }
        PmdsParams::new(req.mu, req.n, req.r, req.s)?;
        let exponents: Vec<u64> = (0..req.n as u64).collect();
        let modulus = ((req.r + 1) * (req.n - 1 - req.r) + 1) as u64;
        let field = match req.q {
            Some(q) => FiniteField::gf(2, char2_degree(q)?)?,
            None => {
                let floor = req.mu as u64 * modulus;
                FiniteField::gf(2, char2_degree(two_power_at_least(floor + 1))?)?
            }
        };
        let code = BlaumRowCode::new(field, req.mu, req.n, req.r, &exponents, modulus, None)?;
        Ok(Box::new(code.as_scalar_code()?))
    }

    fn from_descriptor(&self, desc: &Value) -> Result<Box<dyn ArrayCode>> {
        let field = desc_field(desc)?;
        let exponents = desc
            .get("exponents")
            .cloned()
            .ok_or_else(|| Error::BadDescriptor("missing exponents".into()))?;
        let exponents: Vec<u64> = serde_json::from_value(exponents)
            .map_err(|e| Error::BadDescriptor(format!("exponents: {e}")))?;
        let code = BlaumRowCode::new(
            field,
            desc_usize(desc, "mu")?,
            desc_usize(desc, "n")?,
            desc_usize(desc, "r")?,
            &exponents,
            desc_u64(desc, "modulus")?,
            Some(desc_u64(desc, "beta")?),
        )?;
        Ok(Box::new(code.as_scalar_code()?))
    }
}

impl CodeFamily for GabidulinFamily {
    fn name(&self) -> &'static str {
        "universal-gabidulin"
    }

    fn summary(&self) -> &'static str {
        "universal family over GF(q^M) built on a fixed rank-metric code; \
         one member per local MDS code, with in-group regeneration"
    }

    fn build(&self, req: &BuildRequest) -> Result<Box<dyn ArrayCode>> {
        let params = PmdsParams::new(req.mu, req.n, req.r, req.s)?;
        let d = resolve_d(req)?;
        let b = d + 1 - (req.n - req.r);
        let q = req.q.unwrap_or_else(|| two_power_at_least((b * req.n) as u64));
        let (p, t) = factor_prime_power(q)?;
        let big_m = params.mu * (params.n - params.r);
        let field = FiniteField::with_subfield(p, t, big_m as u32)?;
        let family = UniversalFamily::gabidulin(field, req.mu, req.n, req.r, req.s)?;
        Ok(Box::new(build_universal_msr_pmds(family, req.n, req.r, d, None)?))
    }

    fn from_descriptor(&self, desc: &Value) -> Result<Box<dyn ArrayCode>> {
        let field = desc_field(desc)?;
        let (mu, n, r, s) = (
            desc_usize(desc, "mu")?,
            desc_usize(desc, "n")?,
            desc_usize(desc, "r")?,
            desc_usize(desc, "s")?,
        );
        let family = UniversalFamily::gabidulin(field, mu, n, r, s)?;
        let fragment = &desc["family"];
        let claimed: Vec<u64> = serde_json::from_value(fragment["locators"].clone())
            .map_err(|e| Error::BadDescriptor(format!("family locators: {e}")))?;
        let built = family
            .gabidulin_code()
            .map(|c| c.locators().to_vec())
            .unwrap_or_default();
        if claimed != built {
            return Err(Error::BadDescriptor(
                "locators differ from the polynomial-basis rebuild".into(),
            ));
        }
        let betas = beta_rows(desc)?;
        Ok(Box::new(build_universal_msr_pmds(
            family,
            n,
            r,
            desc_usize(desc, "d")?,
            Some(betas),
        )?))
    }
}

impl CodeFamily for GabrysFamily {
    fn name(&self) -> &'static str {
        "universal-gabrys"
    }

    fn summary(&self) -> &'static str {
        "universal family pinned by locator elements with every (r+1)s-subset \
         independent over the base field"
    }

    fn build(&self, req: &BuildRequest) -> Result<Box<dyn ArrayCode>> {
        PmdsParams::new(req.mu, req.n, req.r, req.s)?;
        let d = resolve_d(req)?;
        let b = d + 1 - (req.n - req.r);
        let q = req.q.unwrap_or_else(|| two_power_at_least((b * req.n) as u64));
        let (p, t) = factor_prime_power(q)?;
        let big_m = 2 * (req.r + 1) * req.s;
        let field = FiniteField::with_subfield(p, t, big_m as u32)?;
        let alphas = find_alpha_set(
            &field,
            req.mu,
            req.n,
            req.r,
            req.s,
            AlphaStrategy::Greedy,
            req.seed,
        )?;
        let family = UniversalFamily::gabrys(field, req.mu, req.n, req.r, req.s, alphas, req.seed)?;
        Ok(Box::new(build_universal_msr_pmds(family, req.n, req.r, d, None)?))
    }

    fn from_descriptor(&self, desc: &Value) -> Result<Box<dyn ArrayCode>> {
        let field = desc_field(desc)?;
        let (mu, n, r, s) = (
            desc_usize(desc, "mu")?,
            desc_usize(desc, "n")?,
            desc_usize(desc, "r")?,
            desc_usize(desc, "s")?,
        );
        let alphas: Vec<u64> = serde_json::from_value(desc["family"]["alphas"].clone())
            .map_err(|e| Error::BadDescriptor(format!("family alphas: {e}")))?;
        let family = UniversalFamily::gabrys(field, mu, n, r, s, alphas, 0)?;
        let betas = beta_rows(desc)?;
        Ok(Box::new(build_universal_msr_pmds(
            family,
            n,
            r,
            desc_usize(desc, "d")?,
            Some(betas),
        )?))
    }
}

/// Pull the local beta table out of a universal descriptor.
fn beta_rows(desc: &Value) -> Result<Vec<Vec<u64>>> {
    let data = desc["betas"]["data"].clone();
    serde_json::from_value(data).map_err(|e| Error::BadDescriptor(format!("betas: {e}")))
}

impl CodeFamily for GlobalMsrFamily {
    fn name(&self) -> &'static str {
        "global-msr"
    }

    fn summary(&self) -> &'static str {
        "array code whose stripes stay regenerating after puncturing r columns \
         per group, repairing across groups"
    }

    fn build(&self, req: &BuildRequest) -> Result<Box<dyn ArrayCode>> {
        let params = PmdsParams::new(req.mu, req.n, req.r, req.s)?;
        if req.d.is_some() {
            return Err(Error::InvalidParameters(
                "global-msr derives its repair sets from the locator grouping; drop d".into(),
            ));
        }
        let compact_shape = req.n == 3 && req.r == 1 && req.s == 2;
        let block_dim = (req.n - req.r) + req.s - 1;
        let big_m = (req.mu * block_dim) as u32;

        let build_with = |q: u64, compact: bool| -> Result<Box<dyn ArrayCode>> {
            let (p, t) = factor_prime_power(q)?;
            let field = FiniteField::with_subfield(p, t, big_m)?;
            let sub = field.subfield()?;
            let (b, inner) = if compact {
                let inner = compact_inner_code(&sub)?;
                let b = build_compact_grouping_matrix(&field, req.mu, &inner)?;
                (b, inner)
            } else {
                let locators: Vec<u64> = (0..req.n as u64).collect();
                let inner = LinearCode::rs_code(sub, &locators, req.n - req.r)?;
                let b = build_grouping_matrix(&field, req.mu, req.n, req.r, req.s)?;
                (b, inner)
            };
            Ok(Box::new(build_global_msr_pmds(field, params, b, &inner)?))
        };

        if let Some(q) = req.q {
            return build_with(q, compact_shape && q >= 3);
        }
        if compact_shape {
            return build_with(3, true);
        }
        // Tower default: walk base sizes from max(n, 3) until the row count
        // splits into repair sets of s; row counts only grow with q, so stop
        // for good the moment the cap is passed.
        let mut floor = req.n.max(3) as u64;
        for _ in 0..BASE_SEARCH_STEPS {
            let (p, t) = smallest_prime_power_at_least(floor, None)?;
            let q = p
                .checked_pow(t)
                .ok_or_else(|| Error::TooLarge("base field size exceeds u64".into()))?;
            let rows = tower_rows(q, req.mu, req.n, req.r, req.s)?;
            if rows > TOWER_ROW_CAP {
                return Err(Error::TooLarge(format!(
                    "{rows} locator rows at base size {q} exceed the {TOWER_ROW_CAP} cap, \
                     and no compact table covers n={} r={} s={}",
                    req.n, req.r, req.s
                )));
            }
            if rows % req.s as u128 == 0 {
                return build_with(q, false);
            }
            floor = q + 1;
        }
        Err(Error::InvalidParameters(format!(
            "no base field size in {BASE_SEARCH_STEPS} steps from {} gives locator rows \
             divisible by s = {}",
            req.n.max(3),
            req.s
        )))
    }

    fn from_descriptor(&self, desc: &Value) -> Result<Box<dyn ArrayCode>> {
        let field = desc_field(desc)?;
        let sub = field.subfield()?;
        let params = PmdsParams::new(
            desc_usize(desc, "mu")?,
            desc_usize(desc, "n")?,
            desc_usize(desc, "r")?,
            desc_usize(desc, "s")?,
        )?;
        let inner_parity = CodeMatrix::from_rows(sub, &desc_rows(desc, "inner_parity")?)?;
        let inner = LinearCode::from_parity(inner_parity)?;
        let b = CodeMatrix::from_rows(field.clone(), &desc_rows(desc, "locators")?)?;
        Ok(Box::new(build_global_msr_pmds(field, params, b, &inner)?))
    }
}

/// Row count of the generic locator tower at base size q.
fn tower_rows(q: u64, mu: usize, n: usize, r: usize, s: usize) -> Result<u128> {
    let block_dim = ((n - r) + s - 1) as u32;
    let q = q as u128;
    let top = q
        .checked_pow(block_dim)
        .ok_or_else(|| Error::TooLarge("locator block size exceeds u128".into()))?;
    let mut per_block: u128 = 1;
    for t in 0..(n - r) as u32 {
        let factor = top - q.pow(t);
        per_block = per_block
            .checked_mul(factor)
            .ok_or_else(|| Error::TooLarge("locator tuple count exceeds u128".into()))?;
    }
    per_block
        .checked_pow(mu as u32)
        .ok_or_else(|| Error::TooLarge("locator row count exceeds u128".into()))
}
