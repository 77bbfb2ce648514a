//! Arithmetic for GF(p^m) with an optional designated subfield GF(q), q = p^t, t | m.
//!
//! Elements are canonical integers in [0, p^m): the little-endian base-p digits of the
//! integer are the coefficients of the polynomial representative modulo the field's
//! irreducible modulus. Fields of size up to 2^16 carry discrete-log tables; larger
//! fields fall back to schoolbook polynomial arithmetic.

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Shared handle to an immutable field.
pub type Field = Arc<FiniteField>;

const TABLE_LIMIT: u64 = 1 << 16;

/// The serialized identity of a field: characteristic, degree, modulus
/// (little-endian coefficient list over GF(p)), optional subfield degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u64,
    pub m: u32,
    pub modulus: Vec<u64>,
    pub subfield_degree: Option<u32>,
}

pub struct FiniteField {
    p: u64,
    m: u32,
    modulus: Vec<u64>,
    subfield_degree: Option<u32>,
    size: u64,
    generator: u64,
    order_factors: Vec<u64>,
    exp: Vec<u64>,
    log: Vec<u32>,
    subfield: OnceLock<SubfieldCtx>,
}

struct SubfieldCtx {
    sub: Field,
    /// embed[v] is the image in this field of the subfield element with representation v.
    embed: Vec<u64>,
    /// Inverse of the GF(p)-basis matrix {gamma^i * x^j}, used to expand elements
    /// into subfield coordinates. Row-major m x m over GF(p).
    expand_inv: Vec<u64>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.m)
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.m == other.m
            && self.modulus == other.modulus
            && self.subfield_degree == other.subfield_degree
    }
}
impl Eq for FiniteField {}

impl FiniteField {
    /// Build a field from an explicit modulus. The modulus must be monic of degree m,
    /// irreducible over GF(p).
    pub fn new(p: u64, m: u32, modulus: Vec<u64>, subfield_degree: Option<u32>) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if m == 0 {
            return Err(Error::InvalidField("degree must be positive".into()));
        }
        if modulus.len() != m as usize + 1 || modulus[m as usize] != 1 {
            return Err(Error::InvalidField(
                "modulus must be monic of degree m".into(),
            ));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField("modulus coefficient out of range".into()));
        }
        if let Some(t) = subfield_degree {
            if t == 0 || m % t != 0 {
                return Err(Error::InvalidField(format!(
                    "subfield degree {t} does not divide {m}"
                )));
            }
        }
        let size = checked_pow(p, m)
            .ok_or_else(|| Error::InvalidField("field size exceeds 2^63".into()))?;
        if m > 1 && !is_irreducible(p, &modulus) {
            return Err(Error::NotIrreducible { p });
        }
        let mut field = FiniteField {
            p,
            m,
            modulus,
            subfield_degree,
            size,
            generator: 0,
            order_factors: factor_distinct(size - 1),
            exp: Vec::new(),
            log: Vec::new(),
            subfield: OnceLock::new(),
        };
        field.generator = field.find_generator();
        if size <= TABLE_LIMIT {
            field.build_tables();
        }
        Ok(Arc::new(field))
    }

    /// Build GF(p^m) with the canonical modulus and no designated subfield.
    pub fn gf(p: u64, m: u32) -> Result<Field> {
        Self::new(p, m, canonical_modulus(p, m)?, None)
    }

    /// Build GF(q^big_m) as GF(p^(t*big_m)) with designated subfield GF(q), q = p^t.
    pub fn with_subfield(p: u64, t: u32, big_m: u32) -> Result<Field> {
        let m = t
            .checked_mul(big_m)
            .ok_or_else(|| Error::InvalidField("degree overflow".into()))?;
        Self::new(p, m, canonical_modulus(p, m)?, Some(t))
    }

    pub fn from_descriptor(d: &FieldDescriptor) -> Result<Field> {
        Self::new(d.p, d.m, d.modulus.clone(), d.subfield_degree)
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            p: self.p,
            m: self.m,
            modulus: self.modulus.clone(),
            subfield_degree: self.subfield_degree,
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    /// Smallest primitive element, by integer representation.
    pub fn generator(&self) -> u64 {
        self.generator
    }

    pub fn subfield_degree(&self) -> Option<u32> {
        self.subfield_degree
    }

    /// Order q of the designated subfield.
    pub fn subfield_size(&self) -> Result<u64> {
        let t = self.subfield_degree.ok_or(Error::NoSubfieldDesignated)?;
        Ok(checked_pow(self.p, t).expect("subfield of a valid field fits"))
    }

    /// Extension degree M of this field over its designated subfield.
    pub fn ext_degree(&self) -> Result<u32> {
        let t = self.subfield_degree.ok_or(Error::NoSubfieldDesignated)?;
        Ok(self.m / t)
    }

    pub fn contains(&self, a: u64) -> bool {
        a < self.size
    }

    fn check(&self, a: u64) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(Error::InvalidField(format!(
                "{a} is not an element of GF({}^{})",
                self.p, self.m
            )))
        }
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.size && b < self.size);
        if self.p == 2 {
            return a ^ b;
        }
        let (mut out, mut scale) = (0u64, 1u64);
        let (mut a, mut b) = (a, b);
        while a != 0 || b != 0 {
            let d = (a % self.p + b % self.p) % self.p;
            out += d * scale;
            scale *= self.p;
            a /= self.p;
            b /= self.p;
        }
        out
    }

    pub fn neg(&self, a: u64) -> u64 {
        debug_assert!(a < self.size);
        if self.p == 2 {
            return a;
        }
        let (mut out, mut scale) = (0u64, 1u64);
        let mut a = a;
        while a != 0 {
            let d = (self.p - a % self.p) % self.p;
            out += d * scale;
            scale *= self.p;
            a /= self.p;
        }
        out
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.size && b < self.size);
        if a == 0 || b == 0 {
            return 0;
        }
        if !self.exp.is_empty() {
            let order = self.size - 1;
            let e = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % order;
            return self.exp[e as usize];
        }
        self.mul_generic(a, b)
    }

    pub fn inv(&self, a: u64) -> Result<u64> {
        self.check(a)?;
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        if !self.exp.is_empty() {
            let order = self.size - 1;
            let e = (order - self.log[a as usize] as u64) % order;
            return Ok(self.exp[e as usize]);
        }
        Ok(self.pow(a, (self.size - 2) as u128))
    }

    pub fn div(&self, a: u64, b: u64) -> Result<u64> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// a^e with the convention 0^0 = 1.
    pub fn pow(&self, a: u64, e: u128) -> u64 {
        debug_assert!(a < self.size);
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        if !self.exp.is_empty() {
            let order = (self.size - 1) as u128;
            let e = (self.log[a as usize] as u128 * (e % order)) % order;
            return self.exp[e as usize];
        }
        let mut base = a;
        let mut e = e % (self.size as u128 - 1);
        if e == 0 {
            return 1;
        }
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_generic(acc, base);
            }
            base = self.mul_generic(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, a: u64) -> Result<u64> {
        self.check(a)?;
        if a == 0 {
            return Err(Error::ZeroElement);
        }
        let mut ord = self.size - 1;
        for &f in &self.order_factors {
            while ord % f == 0 && self.pow(a, (ord / f) as u128) == 1 {
                ord /= f;
            }
        }
        Ok(ord)
    }

    /// a^(q^count) for the designated subfield GF(q).
    pub fn frobenius(&self, a: u64, count: u32) -> Result<u64> {
        self.check(a)?;
        let q = self.subfield_size()?;
        if a == 0 {
            return Ok(0);
        }
        if self.size == 2 {
            return Ok(a);
        }
        let e = mod_pow_u128(q as u128, count as u128, (self.size - 1) as u128);
        Ok(self.pow(a, e))
    }

    fn mul_generic(&self, a: u64, b: u64) -> u64 {
        let m = self.m as usize;
        let mut prod = vec![0u64; 2 * m];
        let da = digits(a, self.p, m);
        let db = digits(b, self.p, m);
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        // reduce by the monic modulus
        for d in (m..2 * m).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for (k, &mc) in self.modulus.iter().enumerate().take(m) {
                let idx = d - m + k;
                prod[idx] = (prod[idx] + (self.p - mc % self.p) % self.p * c) % self.p;
            }
        }
        from_digits(&prod[..m], self.p)
    }

    fn find_generator(&self) -> u64 {
        if self.size == 2 {
            return 1;
        }
        'cand: for g in 2..self.size {
            for &f in &self.order_factors {
                if self.pow_no_tables(g, ((self.size - 1) / f) as u128) == 1 {
                    continue 'cand;
                }
            }
            return g;
        }
        unreachable!("every finite field has a primitive element")
    }

    fn pow_no_tables(&self, a: u64, mut e: u128) -> u64 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let mut base = a;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_generic(acc, base);
            }
            base = self.mul_generic(base, base);
            e >>= 1;
        }
        acc
    }

    fn build_tables(&mut self) {
        let order = (self.size - 1) as usize;
        let mut exp = Vec::with_capacity(order);
        let mut log = vec![0u32; self.size as usize];
        let mut cur = 1u64;
        for i in 0..order {
            exp.push(cur);
            log[cur as usize] = i as u32;
            cur = self.mul_generic(cur, self.generator);
        }
        debug_assert_eq!(cur, 1);
        self.exp = exp;
        self.log = log;
    }

    fn subfield_ctx(&self) -> Result<&SubfieldCtx> {
        let t = self.subfield_degree.ok_or(Error::NoSubfieldDesignated)?;
        if let Some(ctx) = self.subfield.get() {
            return Ok(ctx);
        }
        let ctx = self.build_subfield_ctx(t)?;
        let _ = self.subfield.set(ctx);
        Ok(self.subfield.get().expect("just set"))
    }

    fn build_subfield_ctx(&self, t: u32) -> Result<SubfieldCtx> {
        let q = checked_pow(self.p, t).expect("fits");
        let sub = if t == self.m {
            FiniteField::new(self.p, self.m, self.modulus.clone(), None)?
        } else {
            FiniteField::gf(self.p, t)?
        };
        let gamma = if t == 1 {
            1u64
        } else if t == self.m {
            // the class of x is a root of the modulus in the field itself
            self.p
        } else {
            self.find_subfield_root(&sub, q)?
        };
        let mut embed = Vec::with_capacity(q as usize);
        for v in 0..q {
            let mut img = 0u64;
            let ds = digits(v, self.p, t as usize);
            for (i, &d) in ds.iter().enumerate() {
                if d != 0 {
                    img = self.add(img, self.mul(d, self.pow(gamma, i as u128)));
                }
            }
            embed.push(img);
        }
        debug_assert_eq!(embed[0], 0);
        debug_assert_eq!(embed[1], 1);
        let expand_inv = self.build_expand_inverse(gamma, t)?;
        Ok(SubfieldCtx {
            sub,
            embed,
            expand_inv,
        })
    }

    /// Locate the embedding image of the subfield's generator-of-representation:
    /// a root of the subfield modulus inside the unique subfield copy. Prefers the
    /// canonical-generator power map when it lands on a root.
    fn find_subfield_root(&self, sub: &Field, q: u64) -> Result<u64> {
        let n = (self.size - 1) / (q - 1);
        let eval = |y: u64| -> u64 {
            // evaluate the subfield modulus at y; coefficients are prime-field constants
            let mut acc = 0u64;
            for (i, &c) in sub.modulus.iter().enumerate() {
                if c != 0 {
                    acc = self.add(acc, self.mul(c, self.pow(y, i as u128)));
                }
            }
            acc
        };
        let preferred = self.pow(self.p, n as u128);
        if eval(preferred) == 0 {
            return Ok(preferred);
        }
        let delta = self.pow(self.generator, n as u128);
        let mut best: Option<u64> = None;
        let mut cur = 1u64;
        for _ in 0..q - 1 {
            if eval(cur) == 0 && best.map_or(true, |b| cur < b) {
                best = Some(cur);
            }
            cur = self.mul(cur, delta);
        }
        best.ok_or_else(|| {
            Error::InvalidField("subfield modulus has no root in the extension".into())
        })
    }

    fn build_expand_inverse(&self, gamma: u64, t: u32) -> Result<Vec<u64>> {
        let m = self.m as usize;
        let cap_m = m / t as usize;
        // column (j*t + i) holds the GF(p) digits of gamma^i * x^j
        let mut mat = vec![0u64; m * m];
        for j in 0..cap_m {
            for i in 0..t as usize {
                let e = self.mul(
                    self.pow(gamma, i as u128),
                    self.pow(self.p.min(self.size - 1), j as u128),
                );
                // self.p is the representation of x when m > 1; for m == 1 (t == 1
                // and cap_m == 1) the basis is {1} and pow(..,0) == 1 regardless.
                let col = j * t as usize + i;
                for (row, &d) in digits(e, self.p, m).iter().enumerate() {
                    mat[row * m + col] = d;
                }
            }
        }
        invert_mod_p(&mat, m, self.p).ok_or_else(|| {
            Error::InvalidField("subfield coordinate basis is singular".into())
        })
    }

    /// The canonical field object for the designated subfield.
    pub fn subfield(&self) -> Result<Field> {
        Ok(self.subfield_ctx()?.sub.clone())
    }

    /// Image in this field of a designated-subfield element (given in the
    /// subfield's own representation).
    pub fn embed_from_subfield(&self, v: u64) -> Result<u64> {
        let ctx = self.subfield_ctx()?;
        ctx.embed
            .get(v as usize)
            .copied()
            .ok_or_else(|| Error::InvalidField(format!("{v} is not a subfield element")))
    }

    /// Coordinates of an element over the designated subfield, little-endian in the
    /// fixed basis {gamma^i * x^j}; length M.
    pub fn expand_to_subfield(&self, a: u64) -> Result<Vec<u64>> {
        self.check(a)?;
        let ctx = self.subfield_ctx()?;
        let t = self.subfield_degree.unwrap() as usize;
        let m = self.m as usize;
        let cap_m = m / t;
        let d = digits(a, self.p, m);
        let mut coords = Vec::with_capacity(cap_m);
        for j in 0..cap_m {
            let mut v = 0u64;
            for i in (0..t).rev() {
                let row = j * t + i;
                let mut acc = 0u64;
                for (col, &dc) in d.iter().enumerate() {
                    acc = (acc + ctx.expand_inv[row * m + col] * dc) % self.p;
                }
                v = v * self.p + acc;
            }
            coords.push(v);
        }
        Ok(coords)
    }

    /// True when an element lies in the embedded copy of the designated subfield.
    pub fn in_subfield(&self, a: u64) -> Result<bool> {
        let coords = self.expand_to_subfield(a)?;
        Ok(coords.iter().skip(1).all(|&c| c == 0))
    }

    /// Retract an element of the embedded subfield copy back to the subfield's
    /// own representation.
    pub fn retract_to_subfield(&self, a: u64) -> Result<u64> {
        let coords = self.expand_to_subfield(a)?;
        if coords.iter().skip(1).any(|&c| c != 0) {
            return Err(Error::EntriesNotInSubfield);
        }
        Ok(coords[0])
    }

    /// GF(q)-linear independence of elements of this field, via coordinate
    /// expansion and a rank computation over the subfield.
    pub fn linearly_independent_over_subfield(&self, elems: &[u64]) -> Result<bool> {
        let ctx = self.subfield_ctx()?;
        let sub = &ctx.sub;
        let cap_m = self.ext_degree()? as usize;
        if elems.len() > cap_m {
            return Ok(false);
        }
        let mut rows: Vec<Vec<u64>> = Vec::with_capacity(elems.len());
        for &e in elems {
            rows.push(self.expand_to_subfield(e)?);
        }
        Ok(rank_over_field(sub, &mut rows, cap_m) == elems.len())
    }
}

/// Typed element carrying its owning field; arithmetic checks field identity.
#[derive(Clone)]
pub struct FieldElement {
    field: Field,
    value: u64,
}

impl FieldElement {
    pub fn new(field: Field, value: u64) -> Result<Self> {
        if !field.contains(value) {
            return Err(Error::InvalidField(format!(
                "{value} is out of range for {field:?}"
            )));
        }
        Ok(FieldElement { field, value })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if *self.field == *other.field {
            Ok(())
        } else {
            Err(Error::MixedFields)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(FieldElement {
            field: self.field.clone(),
            value: self.field.add(self.value, other.value),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(FieldElement {
            field: self.field.clone(),
            value: self.field.sub(self.value, other.value),
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(FieldElement {
            field: self.field.clone(),
            value: self.field.mul(self.value, other.value),
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(FieldElement {
            field: self.field.clone(),
            value: self.field.div(self.value, other.value)?,
        })
    }

    pub fn pow(&self, e: u128) -> Self {
        FieldElement {
            field: self.field.clone(),
            value: self.field.pow(self.value, e),
        }
    }

    pub fn order(&self) -> Result<u64> {
        self.field.element_order(self.value)
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{:?}", self.value, self.field)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Smallest prime power >= bound, optionally constrained to a given characteristic.
/// Returns (p, m).
pub fn smallest_prime_power_at_least(bound: u64, characteristic: Option<u64>) -> Result<(u64, u32)> {
    let bound = bound.max(2);
    if let Some(p) = characteristic {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        let mut v = p;
        let mut m = 1u32;
        while v < bound {
            v = v
                .checked_mul(p)
                .ok_or_else(|| Error::TooLarge("prime power exceeds u64".into()))?;
            m += 1;
        }
        return Ok((p, m));
    }
    let mut x = bound;
    loop {
        if let Some(pm) = as_prime_power(x) {
            return Ok(pm);
        }
        x = x
            .checked_add(1)
            .ok_or_else(|| Error::TooLarge("prime power exceeds u64".into()))?;
    }
}

fn as_prime_power(x: u64) -> Option<(u64, u32)> {
    if x < 2 {
        return None;
    }
    let p = smallest_prime_factor(x);
    let mut v = x;
    let mut m = 0u32;
    while v % p == 0 {
        v /= p;
        m += 1;
    }
    if v == 1 {
        Some((p, m))
    } else {
        None
    }
}

fn smallest_prime_factor(x: u64) -> u64 {
    if x % 2 == 0 {
        return 2;
    }
    let mut d = 3u64;
    while d * d <= x {
        if x % d == 0 {
            return d;
        }
        d += 2;
    }
    x
}

pub fn is_prime(x: u64) -> bool {
    x >= 2 && smallest_prime_factor(x) == x
}

fn factor_distinct(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn checked_pow(p: u64, m: u32) -> Option<u64> {
    let mut v: u64 = 1;
    for _ in 0..m {
        v = v.checked_mul(p)?;
    }
    Some(v)
}

fn mod_pow_u128(mut base: u128, mut e: u128, modulus: u128) -> u128 {
    if modulus == 1 {
        return 0;
    }
    let mut acc = 1u128;
    base %= modulus;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % modulus;
        }
        base = base * base % modulus;
        e >>= 1;
    }
    acc
}

fn digits(mut v: u64, p: u64, len: usize) -> Vec<u64> {
    let mut out = vec![0u64; len];
    let mut i = 0;
    while v != 0 && i < len {
        out[i] = v % p;
        v /= p;
        i += 1;
    }
    debug_assert_eq!(v, 0);
    out
}

fn from_digits(d: &[u64], p: u64) -> u64 {
    let mut out = 0u64;
    for &c in d.iter().rev() {
        out = out * p + c;
    }
    out
}

/// Conway polynomials for the small fields where the standard tables are pinned;
/// little-endian coefficient lists including the leading 1.
fn conway_table(p: u64, m: u32) -> Option<Vec<u64>> {
    let poly: &[u64] = match (p, m) {
        (2, 1) => &[1, 1],
        (2, 2) => &[1, 1, 1],
        (2, 3) => &[1, 1, 0, 1],
        (2, 4) => &[1, 1, 0, 0, 1],
        (2, 5) => &[1, 0, 1, 0, 0, 1],
        (2, 6) => &[1, 1, 0, 1, 1, 0, 1],
        (2, 7) => &[1, 1, 0, 0, 0, 0, 0, 1],
        (2, 8) => &[1, 0, 1, 1, 1, 0, 0, 0, 1],
        (3, 1) => &[1, 1],
        (3, 2) => &[2, 2, 1],
        (3, 3) => &[1, 2, 0, 1],
        (5, 1) => &[3, 1],
        (7, 1) => &[4, 1],
        _ => return None,
    };
    Some(poly.to_vec())
}

/// The canonical modulus for GF(p^m): the Conway polynomial where tabulated,
/// otherwise the lexicographically smallest irreducible monic polynomial
/// (ordered by the integer value of the non-leading coefficient word).
pub fn canonical_modulus(p: u64, m: u32) -> Result<Vec<u64>> {
    if let Some(poly) = conway_table(p, m) {
        return Ok(poly);
    }
    if m == 1 {
        // x - g for the smallest primitive root g mod p
        let g = smallest_primitive_root(p);
        return Ok(vec![(p - g) % p, 1]);
    }
    let size = checked_pow(p, m).ok_or_else(|| Error::InvalidField("degree too large".into()))?;
    for tail in 0..size {
        let mut poly = digits(tail, p, m as usize);
        poly.push(1);
        if is_irreducible(p, &poly) {
            return Ok(poly);
        }
    }
    unreachable!("irreducible polynomials exist for every degree")
}

fn smallest_primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let factors = factor_distinct(p - 1);
    'cand: for g in 2..p {
        for &f in &factors {
            if mod_pow_u128(g as u128, ((p - 1) / f) as u128, p as u128) == 1 {
                continue 'cand;
            }
        }
        return g;
    }
    unreachable!()
}

/// Irreducibility over GF(p) by trial division against all monic polynomials of
/// degree at most deg/2.
pub fn is_irreducible(p: u64, poly: &[u64]) -> bool {
    let deg = poly.len() - 1;
    if deg == 0 {
        return false;
    }
    if deg == 1 {
        return true;
    }
    if poly[0] == 0 {
        return false; // divisible by x
    }
    for d in 1..=deg / 2 {
        let count = checked_pow(p, d as u32).expect("small");
        for tail in 0..count {
            let mut g = digits(tail, p, d);
            g.push(1);
            if poly_rem_is_zero(p, poly, &g) {
                return false;
            }
        }
    }
    true
}

fn poly_rem_is_zero(p: u64, f: &[u64], g: &[u64]) -> bool {
    let dg = g.len() - 1;
    let mut r: Vec<u64> = f.to_vec();
    for d in (dg..r.len()).rev() {
        let c = r[d];
        if c == 0 {
            continue;
        }
        r[d] = 0;
        for (k, &gc) in g.iter().enumerate().take(dg) {
            let idx = d - dg + k;
            r[idx] = (r[idx] + (p - gc % p) % p * c) % p;
        }
    }
    r.iter().all(|&c| c == 0)
}

/// Rank of a set of row vectors over an arbitrary field, destructive on `rows`.
fn rank_over_field(field: &Field, rows: &mut [Vec<u64>], width: usize) -> usize {
    let mut rank = 0;
    for col in 0..width {
        let mut pivot = None;
        for (i, row) in rows.iter().enumerate().skip(rank) {
            if row[col] != 0 {
                pivot = Some(i);
                break;
            }
        }
        let Some(pi) = pivot else { continue };
        rows.swap(rank, pi);
        let inv = field.inv(rows[rank][col]).expect("pivot nonzero");
        for c in 0..width {
            rows[rank][c] = field.mul(rows[rank][c], inv);
        }
        for i in 0..rows.len() {
            if i != rank && rows[i][col] != 0 {
                let factor = rows[i][col];
                for c in 0..width {
                    let delta = field.mul(factor, rows[rank][c]);
                    rows[i][c] = field.sub(rows[i][c], delta);
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Inverse of an n x n matrix over GF(p) (plain integers mod p), row-major.
fn invert_mod_p(mat: &[u64], n: usize, p: u64) -> Option<Vec<u64>> {
    let mut a: Vec<u64> = mat.to_vec();
    let mut inv: Vec<u64> = vec![0; n * n];
    for i in 0..n {
        inv[i * n + i] = 1;
    }
    let inv_mod = |x: u64| -> u64 { mod_pow_u128(x as u128, (p - 2) as u128, p as u128) as u64 };
    for col in 0..n {
        let pivot = (col..n).find(|&r| a[r * n + col] != 0)?;
        if pivot != col {
            for c in 0..n {
                a.swap(col * n + c, pivot * n + c);
                inv.swap(col * n + c, pivot * n + c);
            }
        }
        let f = inv_mod(a[col * n + col]);
        for c in 0..n {
            a[col * n + c] = a[col * n + c] * f % p;
            inv[col * n + c] = inv[col * n + c] * f % p;
        }
        for r in 0..n {
            if r != col && a[r * n + col] != 0 {
                let f = a[r * n + col];
                for c in 0..n {
                    a[r * n + c] = (a[r * n + c] + (p - f) * a[col * n + c]) % p;
                    inv[r * n + c] = (inv[r * n + c] + (p - f) * inv[col * n + c]) % p;
                }
            }
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent schoolbook oracle: multiply two GF(p^m) representations by
    /// polynomial convolution and long division by the modulus.
    fn oracle_mul(p: u64, modulus: &[u64], a: u64, b: u64) -> u64 {
        let m = modulus.len() - 1;
        let da = digits(a, p, m);
        let db = digits(b, p, m);
        let mut prod = vec![0u64; 2 * m];
        for i in 0..m {
            for j in 0..m {
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
            }
        }
        for d in (m..2 * m).rev() {
            let c = prod[d];
            prod[d] = 0;
            if c != 0 {
                for k in 0..m {
                    prod[d - m + k] = (prod[d - m + k] + c * (p - modulus[k]) % p) % p;
                }
            }
        }
        from_digits(&prod[..m], p)
    }

    #[test]
    fn gf8_multiplication_matches_schoolbook_oracle() {
        let f = FiniteField::gf(2, 3).unwrap();
        assert_eq!(f.descriptor().modulus, vec![1, 1, 0, 1]);
        for a in 0..8 {
            for b in 0..8 {
                assert_eq!(f.mul(a, b), oracle_mul(2, &[1, 1, 0, 1], a, b), "{a}*{b}");
            }
        }
        // x * x^2 = x^3 = x + 1
        assert_eq!(f.mul(2, 4), 3);
    }

    #[test]
    fn gf729_multiplication_matches_schoolbook_oracle() {
        let f = FiniteField::gf(3, 6).unwrap();
        let modulus = f.descriptor().modulus.clone();
        assert!(is_irreducible(3, &modulus));
        // spot-check a deterministic sample against the oracle
        let mut x = 1u64;
        for i in 0..2000u64 {
            let a = x;
            let b = (i * 37 + 11) % 729;
            assert_eq!(f.mul(a, b), oracle_mul(3, &modulus, a, b));
            x = (x * 31 + 7) % 729;
        }
    }

    fn check_axioms(f: &Field) {
        let size = f.size();
        // full inverse table
        for a in 1..size {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1, "inverse of {a}");
        }
        // random triples: associativity + distributivity + commutativity
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state % size
        };
        for _ in 0..10_000 {
            let (a, b, c) = (next(), next(), next());
            assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
            assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            assert_eq!(f.mul(a, b), f.mul(b, a));
            assert_eq!(f.add(a, b), f.add(b, a));
            assert_eq!(f.add(a, f.neg(a)), 0);
        }
    }

    #[test]
    fn field_axioms_hold_for_the_working_fields() {
        for field in [
            FiniteField::gf(2, 2).unwrap(),
            FiniteField::gf(2, 3).unwrap(),
            FiniteField::gf(2, 5).unwrap(),
            FiniteField::gf(2, 6).unwrap(),
            FiniteField::gf(3, 6).unwrap(),
            FiniteField::gf(89, 1).unwrap(),
            FiniteField::with_subfield(2, 3, 4).unwrap(),
        ] {
            check_axioms(&field);
        }
    }

    #[test]
    fn element_orders_by_exhaustive_powering() {
        let f = FiniteField::gf(2, 3).unwrap();
        for a in 1..8 {
            let ord = f.element_order(a).unwrap();
            // oracle: smallest e with a^e = 1
            let mut e = 1;
            let mut cur = a;
            while cur != 1 {
                cur = f.mul(cur, a);
                e += 1;
            }
            assert_eq!(ord, e, "order of {a}");
        }
        assert_eq!(f.element_order(2).unwrap(), 7);
        assert_eq!(f.element_order(1).unwrap(), 1);
        assert!(matches!(f.element_order(0), Err(Error::ZeroElement)));
        let g4 = FiniteField::gf(2, 2).unwrap();
        assert_eq!(g4.element_order(2).unwrap(), 3);
    }

    #[test]
    fn frobenius_is_squaring_over_gf2() {
        let f = FiniteField::with_subfield(2, 1, 2).unwrap(); // GF(4) over GF(2)
        assert_eq!(f.frobenius(2, 1).unwrap(), f.mul(2, 2));
        assert_eq!(f.frobenius(2, 1).unwrap(), 3);
        let f8 = FiniteField::with_subfield(2, 1, 3).unwrap();
        for a in 0..8 {
            assert_eq!(f8.frobenius(a, 1).unwrap(), f8.mul(a, a));
            assert_eq!(f8.frobenius(a, 3).unwrap(), a); // full orbit
        }
    }

    #[test]
    fn frobenius_is_additive_and_fixes_the_subfield() {
        let f = FiniteField::with_subfield(2, 3, 4).unwrap(); // GF(8^4)
        let q = f.subfield_size().unwrap();
        for v in 0..q {
            let img = f.embed_from_subfield(v).unwrap();
            assert_eq!(f.frobenius(img, 1).unwrap(), img);
        }
        let mut state = 12345u64;
        for _ in 0..500 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            let a = state % f.size();
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            let b = state % f.size();
            let fa = f.frobenius(a, 1).unwrap();
            let fb = f.frobenius(b, 1).unwrap();
            assert_eq!(f.frobenius(f.add(a, b), 1).unwrap(), f.add(fa, fb));
            assert_eq!(f.frobenius(f.mul(a, b), 1).unwrap(), f.mul(fa, fb));
        }
    }

    #[test]
    fn embedding_is_a_ring_homomorphism() {
        let f = FiniteField::with_subfield(2, 3, 4).unwrap();
        let sub = f.subfield().unwrap();
        for a in 0..8u64 {
            for b in 0..8u64 {
                let ea = f.embed_from_subfield(a).unwrap();
                let eb = f.embed_from_subfield(b).unwrap();
                assert_eq!(
                    f.embed_from_subfield(sub.add(a, b)).unwrap(),
                    f.add(ea, eb)
                );
                assert_eq!(
                    f.embed_from_subfield(sub.mul(a, b)).unwrap(),
                    f.mul(ea, eb)
                );
            }
        }
    }

    #[test]
    fn expansion_round_trips_through_the_basis() {
        for field in [
            FiniteField::with_subfield(2, 3, 4).unwrap(),
            FiniteField::with_subfield(3, 1, 6).unwrap(),
            FiniteField::with_subfield(2, 2, 3).unwrap(),
        ] {
            let cap_m = field.ext_degree().unwrap() as usize;
            let x = if field.degree() > 1 { field.characteristic() } else { 1 };
            let mut state = 7u64;
            for _ in 0..200 {
                state = state.wrapping_mul(2862933555777941757).wrapping_add(3037000493);
                let a = state % field.size();
                let coords = field.expand_to_subfield(a).unwrap();
                assert_eq!(coords.len(), cap_m);
                let mut back = 0u64;
                for (j, &c) in coords.iter().enumerate() {
                    let img = field.embed_from_subfield(c).unwrap();
                    back = field.add(back, field.mul(img, field.pow(x, j as u128)));
                }
                assert_eq!(back, a);
            }
        }
    }

    #[test]
    fn independence_matches_brute_force_over_small_subfields() {
        // over GF(2) inside GF(16)
        let f = FiniteField::with_subfield(2, 1, 4).unwrap();
        let brute = |f: &Field, elems: &[u64]| -> bool {
            let k = elems.len();
            for mask in 1..(1u64 << k) {
                let mut acc = 0u64;
                for (i, &e) in elems.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        acc = f.add(acc, e);
                    }
                }
                if acc == 0 {
                    return false;
                }
            }
            true
        };
        assert!(f
            .linearly_independent_over_subfield(&[1, 2, 4, 8])
            .unwrap());
        let mut state = 99u64;
        for _ in 0..300 {
            let mut elems = Vec::new();
            for _ in 0..4 {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                elems.push(state % 16);
            }
            assert_eq!(
                f.linearly_independent_over_subfield(&elems).unwrap(),
                brute(&f, &elems),
                "{elems:?}"
            );
        }
        // over GF(3) inside GF(27): brute force all GF(3)-combinations
        let f3 = FiniteField::with_subfield(3, 1, 3).unwrap();
        let brute3 = |f: &Field, elems: &[u64]| -> bool {
            let k = elems.len() as u32;
            for combo in 1..3u64.pow(k) {
                let mut acc = 0u64;
                let mut c = combo;
                for &e in elems {
                    let coef = c % 3;
                    c /= 3;
                    acc = f.add(acc, f.mul(coef, e));
                }
                if acc == 0 {
                    return false;
                }
            }
            true
        };
        let mut state = 5u64;
        for _ in 0..300 {
            let mut elems = Vec::new();
            for _ in 0..3 {
                state = state.wrapping_mul(2862933555777941757).wrapping_add(12345);
                elems.push(state % 27);
            }
            assert_eq!(
                f3.linearly_independent_over_subfield(&elems).unwrap(),
                brute3(&f3, &elems),
                "{elems:?}"
            );
        }
    }

    #[test]
    fn polynomial_basis_is_independent_over_every_tower() {
        let f = FiniteField::with_subfield(2, 3, 4).unwrap();
        let pts: Vec<u64> = (0..4).map(|j| f.pow(2, j as u128)).collect();
        assert!(f.linearly_independent_over_subfield(&pts).unwrap());
    }

    #[test]
    fn mixed_field_operations_are_rejected() {
        let f8 = FiniteField::gf(2, 3).unwrap();
        let f16 = FiniteField::gf(2, 4).unwrap();
        let a = FieldElement::new(f8.clone(), 5).unwrap();
        let b = FieldElement::new(f16.clone(), 5).unwrap();
        assert!(matches!(a.add(&b), Err(Error::MixedFields)));
        assert!(matches!(a.mul(&b), Err(Error::MixedFields)));
        let zero = FieldElement::new(f8.clone(), 0).unwrap();
        let one = FieldElement::new(f8, 1).unwrap();
        assert!(matches!(one.div(&zero), Err(Error::DivisionByZero)));
    }

    #[test]
    fn prime_power_search_matches_frozen_values() {
        assert_eq!(smallest_prime_power_at_least(86, None).unwrap(), (89, 1));
        assert_eq!(smallest_prime_power_at_least(86, Some(2)).unwrap(), (2, 7));
        assert_eq!(smallest_prime_power_at_least(2, None).unwrap(), (2, 1));
        assert_eq!(smallest_prime_power_at_least(90, None).unwrap(), (97, 1));
        assert_eq!(smallest_prime_power_at_least(64, None).unwrap(), (2, 6));
        assert_eq!(smallest_prime_power_at_least(2, Some(3)).unwrap(), (3, 1));
    }

    #[test]
    fn reducible_modulus_is_rejected() {
        // x^2 + 1 = (x+1)^2 over GF(2)
        assert!(matches!(
            FiniteField::new(2, 2, vec![1, 0, 1], None),
            Err(Error::NotIrreducible { p: 2 })
        ));
        assert!(FiniteField::new(4, 1, vec![1, 1], None).is_err());
    }

    #[test]
    fn descriptor_round_trip() {
        let f = FiniteField::with_subfield(2, 3, 4).unwrap();
        let d = f.descriptor();
        let g = FiniteField::from_descriptor(&d).unwrap();
        assert_eq!(*f, *g);
        let json = serde_json::to_string(&d).unwrap();
        let back: FieldDescriptor = serde_json::from_str(&json).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn canonical_moduli_are_irreducible_and_deterministic() {
        for (p, m) in [(2u64, 9u32), (2, 12), (3, 5), (3, 6), (5, 3)] {
            let a = canonical_modulus(p, m).unwrap();
            let b = canonical_modulus(p, m).unwrap();
            assert_eq!(a, b);
            assert!(is_irreducible(p, &a));
            assert_eq!(a.len() as u32, m + 1);
        }
    }

    #[test]
    fn generator_has_full_order() {
        for field in [
            FiniteField::gf(2, 6).unwrap(),
            FiniteField::gf(3, 6).unwrap(),
            FiniteField::gf(2, 5).unwrap(),
        ] {
            let g = field.generator();
            assert_eq!(field.element_order(g).unwrap(), field.size() - 1);
        }
    }
}
