//! Exact arithmetic for the base rings: prime-power fields F_{p^f},
//! truncated polynomial rings F_q[t]/(t^k), and Galois rings GR(p^k, f)
//! (which realize the length-k Witt ring of F_{p^f}; for f = 1 this is
//! Z/p^k). A separate Witt-vector oracle lives in [`witt`].
//!
//! Every element is a fixed-width vector of `u32` digits in canonical
//! (fully reduced) form, so equality is coordinatewise and the digit vector
//! doubles as the element's canonical encoding:
//!
//! - `Field(p, f)`: f digits, digit i = coefficient of x^i, values < p;
//! - `TruncPoly`: k*f digits, block j (digits j*f..(j+1)*f) = the field
//!   coefficient of t^j;
//! - `GaloisRing(p, k, f)`: f digits, digit i = coefficient of x^i,
//!   values < p^k.
//!
//! All orderings are lexicographic on the digit vector, comparing index 0
//! first. Arithmetic works on raw digit slices so that callers can keep
//! elements in flat arenas; the [`Elem`] wrapper offers a checked,
//! descriptor-carrying interface on top.

pub mod poly;
pub mod witt;

use crate::{Error, Result};
use serde_json::{json, Value};

/// Descriptor of F_{p^f} = F_p[x]/(m) with m monic irreducible of degree f.
/// `modulus` stores the low coefficients c_0..c_{f-1} of m; the leading
/// coefficient 1 is implicit. m is the lexicographically smallest monic
/// irreducible of degree f, so the descriptor is determined by (p, f).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FieldDesc {
    pub p: u64,
    pub f: usize,
    pub modulus: Vec<u32>,
}

/// Descriptor of F_q[t]/(t^k) over the field `field`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncPolyDesc {
    pub field: FieldDesc,
    pub k: usize,
}

/// Descriptor of GR(p^k, f) = (Z/p^k)[x]/(m~) where m~ is the monic lift of
/// the degree-f field modulus with the same integer coefficients. For f = 1
/// this is exactly Z/p^k.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GaloisRingDesc {
    pub p: u64,
    pub k: u32,
    pub f: usize,
    /// p^k, the digit radix.
    pub pk: u64,
    /// Low coefficients of the lifted modulus, values < p^k.
    pub modulus: Vec<u32>,
    /// The residue field F_{p^f} = GR / (p).
    pub residue: FieldDesc,
}

/// A finite base ring. All element operations live here and act on digit
/// slices of length [`RingDesc::width`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum RingDesc {
    Field(FieldDesc),
    TruncPoly(TruncPolyDesc),
    GaloisRing(GaloisRingDesc),
}

/// Largest digit radix we accept; keeps every digit in u32 and every
/// digit product in u64.
const MAX_RADIX: u64 = 1 << 31;

/// Stack buffer size for products; rings wider than this fall back to heap
/// scratch (correct but slower, and never hit by the verification suite).
const INLINE_DIGITS: usize = 32;

impl FieldDesc {
    fn new(p: u64, f: usize) -> Result<FieldDesc> {
        if !poly::is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        if f == 0 {
            return Err(Error::BadParameter("extension degree f must be >= 1".into()));
        }
        if p >= MAX_RADIX {
            return Err(Error::BadParameter(format!("prime {p} too large for digit arithmetic")));
        }
        let modulus: Vec<u32> = poly::smallest_irreducible(p, f)
            .into_iter()
            .map(|c| c as u32)
            .collect();
        Ok(FieldDesc { p, f, modulus })
    }

    /// q = p^f, the field size. Guarded at construction: fits in u64 only if
    /// reasonable; callers that enumerate check budgets separately.
    pub fn q(&self) -> u64 {
        self.p.checked_pow(self.f as u32).expect("field size overflows u64")
    }
}

impl RingDesc {
    pub fn field(p: u64, f: usize) -> Result<RingDesc> {
        Ok(RingDesc::Field(FieldDesc::new(p, f)?))
    }

    pub fn trunc_poly(p: u64, f: usize, k: usize) -> Result<RingDesc> {
        if k == 0 {
            return Err(Error::BadParameter("truncation length k must be >= 1".into()));
        }
        Ok(RingDesc::TruncPoly(TruncPolyDesc { field: FieldDesc::new(p, f)?, k }))
    }

    pub fn galois_ring(p: u64, k: u32, f: usize) -> Result<RingDesc> {
        if k == 0 {
            return Err(Error::BadParameter("length k must be >= 1".into()));
        }
        let residue = FieldDesc::new(p, f)?;
        let pk = p
            .checked_pow(k)
            .filter(|&pk| pk < MAX_RADIX)
            .ok_or_else(|| Error::BadParameter(format!("p^k = {p}^{k} too large for digit arithmetic")))?;
        let modulus = residue.modulus.clone();
        Ok(RingDesc::GaloisRing(GaloisRingDesc { p, k, f, pk, modulus, residue }))
    }

    /// Z/p^k as the f = 1 Galois ring.
    pub fn zmod(p: u64, k: u32) -> Result<RingDesc> {
        RingDesc::galois_ring(p, k, 1)
    }

    /// Digits per element.
    pub fn width(&self) -> usize {
        match self {
            RingDesc::Field(fd) => fd.f,
            RingDesc::TruncPoly(td) => td.k * td.field.f,
            RingDesc::GaloisRing(gd) => gd.f,
        }
    }

    /// Upper bound (exclusive) on every digit.
    pub fn radix(&self) -> u64 {
        match self {
            RingDesc::Field(fd) => fd.p,
            RingDesc::TruncPoly(td) => td.field.p,
            RingDesc::GaloisRing(gd) => gd.pk,
        }
    }

    /// The characteristic's prime p.
    pub fn char_p(&self) -> u64 {
        match self {
            RingDesc::Field(fd) => fd.p,
            RingDesc::TruncPoly(td) => td.field.p,
            RingDesc::GaloisRing(gd) => gd.p,
        }
    }

    /// Truncation level: 1 for fields, k otherwise. |R| = q^k with q the
    /// residue field size.
    pub fn level(&self) -> usize {
        match self {
            RingDesc::Field(_) => 1,
            RingDesc::TruncPoly(td) => td.k,
            RingDesc::GaloisRing(gd) => gd.k as usize,
        }
    }

    /// Extension degree f of the residue field.
    pub fn ext_f(&self) -> usize {
        self.residue_field().f
    }

    /// The residue field R/m (= R itself for fields).
    pub fn residue_field(&self) -> &FieldDesc {
        match self {
            RingDesc::Field(fd) => fd,
            RingDesc::TruncPoly(td) => &td.field,
            RingDesc::GaloisRing(gd) => &gd.residue,
        }
    }

    /// Number of elements, if it fits in u128.
    pub fn size(&self) -> Option<u128> {
        let w = u32::try_from(self.width()).ok()?;
        (self.radix() as u128).checked_pow(w)
    }

    /// Number of units, if it fits in u128: q^{(k-1)f'} (q - 1) per residue
    /// coordinate block; concretely |R^x| = |R| (1 - 1/q) with q = p^f.
    pub fn unit_count(&self) -> Option<u128> {
        let q = self.residue_field().q() as u128;
        let size = self.size()?;
        Some(size / q * (q - 1))
    }

    pub fn is_zero(&self, a: &[u32]) -> bool {
        a.iter().all(|&d| d == 0)
    }

    pub fn zero_into(&self, out: &mut [u32]) {
        out.fill(0);
    }

    /// The multiplicative identity: digit 0 is 1 in every representation.
    pub fn one_into(&self, out: &mut [u32]) {
        out.fill(0);
        out[0] = 1;
    }

    pub fn add_into(&self, a: &[u32], b: &[u32], out: &mut [u32]) {
        let m = self.radix();
        for i in 0..out.len() {
            let s = a[i] as u64 + b[i] as u64;
            out[i] = if s >= m { (s - m) as u32 } else { s as u32 };
        }
    }

    pub fn sub_into(&self, a: &[u32], b: &[u32], out: &mut [u32]) {
        let m = self.radix();
        for i in 0..out.len() {
            let s = a[i] as u64 + m - b[i] as u64;
            out[i] = if s >= m { (s - m) as u32 } else { s as u32 };
        }
    }

    pub fn neg_into(&self, a: &[u32], out: &mut [u32]) {
        let m = self.radix();
        for i in 0..out.len() {
            out[i] = if a[i] == 0 { 0 } else { (m - a[i] as u64) as u32 };
        }
    }

    /// out = a * b. `out` must not alias `a` or `b`.
    pub fn mul_into(&self, a: &[u32], b: &[u32], out: &mut [u32]) {
        match self {
            RingDesc::Field(fd) => field_mul(fd, a, b, out),
            RingDesc::GaloisRing(gd) => poly_ring_mul(gd.pk, &gd.modulus, a, b, out),
            RingDesc::TruncPoly(td) => {
                let f = td.field.f;
                if f == 1 {
                    // Prime-field coefficients: plain truncated convolution.
                    let p = td.field.p;
                    if p < (1 << 16) {
                        // Raw accumulation fits u64: k < 32 terms below 2^32.
                        for i in 0..td.k {
                            let mut acc = 0u64;
                            for j in 0..=i {
                                acc += a[j] as u64 * b[i - j] as u64;
                            }
                            out[i] = (acc % p) as u32;
                        }
                    } else {
                        for i in 0..td.k {
                            let mut acc = 0u64;
                            for j in 0..=i {
                                acc += a[j] as u64 * b[i - j] as u64 % p;
                            }
                            out[i] = (acc % p) as u32;
                        }
                    }
                    return;
                }
                let mut tmp_buf = [0u32; INLINE_DIGITS];
                let mut tmp_heap;
                let tmp: &mut [u32] = if f <= INLINE_DIGITS {
                    &mut tmp_buf[..f]
                } else {
                    tmp_heap = vec![0u32; f];
                    &mut tmp_heap[..]
                };
                out.fill(0);
                for i in 0..td.k {
                    for j in 0..=i {
                        let aj = &a[j * f..(j + 1) * f];
                        let bij = &b[(i - j) * f..(i - j + 1) * f];
                        field_mul(&td.field, aj, bij, tmp);
                        let p = td.field.p;
                        for (o, &t) in out[i * f..(i + 1) * f].iter_mut().zip(tmp.iter()) {
                            let s = *o as u64 + t as u64;
                            *o = if s >= p { (s - p) as u32 } else { s as u32 };
                        }
                    }
                }
            }
        }
    }

    /// Units: nonzero residue mod the maximal ideal.
    pub fn is_unit(&self, a: &[u32]) -> bool {
        match self {
            RingDesc::Field(_) => !self.is_zero(a),
            RingDesc::TruncPoly(td) => a[..td.field.f].iter().any(|&d| d != 0),
            RingDesc::GaloisRing(gd) => a.iter().any(|&d| d as u64 % gd.p != 0),
        }
    }

    /// out = a^{-1}; errors on non-units.
    pub fn inv_into(&self, a: &[u32], out: &mut [u32]) -> Result<()> {
        if !self.is_unit(a) {
            return Err(Error::DivisionByNonUnit);
        }
        match self {
            RingDesc::Field(fd) => {
                field_inv(fd, a, out);
                Ok(())
            }
            RingDesc::GaloisRing(gd) => {
                // Hensel: start from the residue-field inverse, then Newton
                // steps z <- z(2 - az) double the p-adic precision.
                let f = gd.f;
                let mut res = vec![0u32; f];
                for i in 0..f {
                    res[i] = (a[i] as u64 % gd.p) as u32;
                }
                let mut z0 = vec![0u32; f];
                field_inv(&gd.residue, &res, &mut z0);
                out.copy_from_slice(&z0);
                let mut az = vec![0u32; f];
                let mut corr = vec![0u32; f];
                let mut next = vec![0u32; f];
                let steps = 64 - (gd.k as u64).leading_zeros(); // ceil(log2 k) + 1
                for _ in 0..steps {
                    self.mul_into(a, out, &mut az);
                    // corr = 2 - az
                    self.neg_into(&az, &mut corr);
                    corr[0] = ((corr[0] as u64 + 2) % gd.pk) as u32;
                    self.mul_into(out, &corr, &mut next);
                    out.copy_from_slice(&next);
                }
                self.mul_into(a, out, &mut az);
                debug_assert!(az[0] == 1 && az[1..].iter().all(|&d| d == 0));
                Ok(())
            }
            RingDesc::TruncPoly(td) => {
                // Power series inversion: b_0 = a_0^{-1},
                // b_i = -b_0 * sum_{j=1..i} a_j b_{i-j}.
                let f = td.field.f;
                let fd = &td.field;
                let mut b0 = vec![0u32; f];
                field_inv(fd, &a[..f], &mut b0);
                out[..f].copy_from_slice(&b0);
                let mut acc = vec![0u32; f];
                let mut tmp = vec![0u32; f];
                for i in 1..td.k {
                    acc.fill(0);
                    for j in 1..=i {
                        field_mul(fd, &a[j * f..(j + 1) * f], &out[(i - j) * f..(i - j + 1) * f], &mut tmp);
                        let sum = acc.clone();
                        field_add(fd, &sum, &tmp, &mut acc);
                    }
                    field_mul(fd, &b0, &acc, &mut tmp);
                    let (done, rest) = out.split_at_mut(i * f);
                    let _ = done;
                    field_neg(fd, &tmp, &mut rest[..f]);
                }
                Ok(())
            }
        }
    }

    /// out = a^e by square and multiply. e = 0 gives the identity.
    pub fn pow_into(&self, a: &[u32], e: u64, out: &mut [u32]) {
        let w = self.width();
        let mut base = a.to_vec();
        let mut tmp = vec![0u32; w];
        self.one_into(out);
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                tmp.copy_from_slice(out);
                self.mul_into(&tmp, &base, out);
            }
            e >>= 1;
            if e > 0 {
                tmp.copy_from_slice(&base);
                self.mul_into(&tmp, &tmp.clone(), &mut base);
            }
        }
    }

    /// Image in the residue field (digit width f).
    pub fn residue_into(&self, a: &[u32], out: &mut [u32]) {
        match self {
            RingDesc::Field(fd) => out.copy_from_slice(&a[..fd.f]),
            RingDesc::TruncPoly(td) => out.copy_from_slice(&a[..td.field.f]),
            RingDesc::GaloisRing(gd) => {
                for i in 0..gd.f {
                    out[i] = (a[i] as u64 % gd.p) as u32;
                }
            }
        }
    }

    /// The canonical preimage of a residue-field element with all higher
    /// "digits" zero (the base point of its lift fiber).
    pub fn embed_residue(&self, res: &[u32], out: &mut [u32]) {
        out.fill(0);
        out[..res.len()].copy_from_slice(res);
    }

    /// Per-digit lift structure: digit value = base + mult * j, j < count,
    /// where base is the embedded residue digit. Fixed digits have count 1.
    pub fn lift_slots(&self) -> Vec<LiftSlot> {
        match self {
            RingDesc::Field(fd) => vec![LiftSlot { mult: 0, count: 1 }; fd.f],
            RingDesc::TruncPoly(td) => {
                let mut slots = vec![LiftSlot { mult: 0, count: 1 }; td.field.f];
                slots.resize(td.k * td.field.f, LiftSlot { mult: 1, count: td.field.p });
                slots
            }
            RingDesc::GaloisRing(gd) => {
                let count = gd.pk / gd.p;
                vec![LiftSlot { mult: gd.p, count }; gd.f]
            }
        }
    }

    /// All elements in ascending lexicographic order of digit vectors.
    pub fn iter_elements(&self) -> ElemIter<'_> {
        ElemIter { ring: self, next: Some(vec![0u32; self.width()]) }
    }

    /// Serializable descriptor: {kind, p, k, f, modulus_coeffs}.
    pub fn descriptor_json(&self) -> Value {
        let (kind, modulus): (&str, &[u32]) = match self {
            RingDesc::Field(fd) => ("field", &fd.modulus),
            RingDesc::TruncPoly(td) => ("trunc-poly", &td.field.modulus),
            RingDesc::GaloisRing(gd) => ("galois-ring", &gd.modulus),
        };
        json!({
            "kind": kind,
            "p": self.char_p(),
            "k": self.level(),
            "f": self.ext_f(),
            "modulus_coeffs": modulus,
        })
    }

    /// Rebuild a descriptor from its JSON form. The modulus is reconstructed
    /// deterministically and must match the stored coefficients.
    pub fn from_json(v: &Value) -> Result<RingDesc> {
        let get = |key: &str| -> Result<u64> {
            v.get(key)
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::BadParameter(format!("ring descriptor missing {key}")))
        };
        let kind = v
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::BadParameter("ring descriptor missing kind".into()))?;
        let (p, k, f) = (get("p")?, get("k")?, get("f")? as usize);
        let ring = match kind {
            "field" => RingDesc::field(p, f)?,
            "trunc-poly" => RingDesc::trunc_poly(p, f, k as usize)?,
            "galois-ring" => RingDesc::galois_ring(
                p,
                u32::try_from(k).map_err(|_| Error::BadParameter("k too large".into()))?,
                f,
            )?,
            other => return Err(Error::BadParameter(format!("unknown ring kind {other}"))),
        };
        if let Some(stored) = v.get("modulus_coeffs").and_then(Value::as_array) {
            let rebuilt: &[u32] = match &ring {
                RingDesc::Field(fd) => &fd.modulus,
                RingDesc::TruncPoly(td) => &td.field.modulus,
                RingDesc::GaloisRing(gd) => &gd.modulus,
            };
            let stored: Vec<u64> = stored.iter().filter_map(Value::as_u64).collect();
            if stored.len() != rebuilt.len()
                || stored.iter().zip(rebuilt).any(|(&s, &r)| s != r as u64)
            {
                return Err(Error::BadParameter("stored modulus does not match deterministic construction".into()));
            }
        }
        Ok(ring)
    }
}

/// Lift fiber structure of one digit position; see [`RingDesc::lift_slots`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LiftSlot {
    pub mult: u64,
    pub count: u64,
}

/// Odometer over all digit vectors of a ring, ascending lexicographic.
pub struct ElemIter<'a> {
    ring: &'a RingDesc,
    next: Option<Vec<u32>>,
}

impl Iterator for ElemIter<'_> {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let current = self.next.take()?;
        let radix = self.ring.radix() as u32;
        let mut succ = current.clone();
        // Lexicographic successor: bump the last digit, carrying left.
        let mut i = succ.len();
        loop {
            if i == 0 {
                self.next = None;
                break;
            }
            i -= 1;
            succ[i] += 1;
            if succ[i] < radix {
                self.next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(current)
    }
}

fn field_add(fd: &FieldDesc, a: &[u32], b: &[u32], out: &mut [u32]) {
    let p = fd.p;
    for i in 0..fd.f {
        let s = a[i] as u64 + b[i] as u64;
        out[i] = if s >= p { (s - p) as u32 } else { s as u32 };
    }
}

fn field_neg(fd: &FieldDesc, a: &[u32], out: &mut [u32]) {
    let p = fd.p;
    for i in 0..fd.f {
        out[i] = if a[i] == 0 { 0 } else { (p - a[i] as u64) as u32 };
    }
}

fn field_mul(fd: &FieldDesc, a: &[u32], b: &[u32], out: &mut [u32]) {
    poly_ring_mul(fd.p, &fd.modulus, a, b, out);
}

/// Shared core of field and Galois-ring multiplication: polynomial product
/// modulo (monic x^f + modulus) with all coefficients mod m.
fn poly_ring_mul(m: u64, modulus: &[u32], a: &[u32], b: &[u32], out: &mut [u32]) {
    let f = modulus.len();
    debug_assert!(a.len() == f && b.len() == f && out.len() == f);
    if f == 1 {
        out[0] = ((a[0] as u64 * b[0] as u64) % m) as u32;
        return;
    }
    let mut conv_buf = [0u64; 2 * INLINE_DIGITS];
    let mut conv_heap;
    let conv: &mut [u64] = if 2 * f - 1 <= 2 * INLINE_DIGITS {
        conv_buf[..2 * f - 1].fill(0);
        &mut conv_buf[..2 * f - 1]
    } else {
        conv_heap = vec![0u64; 2 * f - 1];
        &mut conv_heap[..]
    };
    for i in 0..f {
        let ai = a[i] as u64;
        if ai == 0 {
            continue;
        }
        for j in 0..f {
            let prod = ai as u128 * b[j] as u128;
            let cur = conv[i + j] as u128 + prod % m as u128;
            conv[i + j] = (cur % m as u128) as u64;
        }
    }
    // Reduce x^d for d >= f using x^f = -modulus.
    for d in (f..2 * f - 1).rev() {
        let c = conv[d];
        if c == 0 {
            continue;
        }
        conv[d] = 0;
        for j in 0..f {
            let sub = c as u128 * modulus[j] as u128 % m as u128;
            let cur = conv[d - f + j] as u128 + m as u128 - sub;
            conv[d - f + j] = (cur % m as u128) as u64;
        }
    }
    for i in 0..f {
        out[i] = conv[i] as u32;
    }
}

/// Field inverse by powering: a^{q-2} with q = p^f.
fn field_inv(fd: &FieldDesc, a: &[u32], out: &mut [u32]) {
    debug_assert!(a.iter().any(|&d| d != 0), "inverting zero");
    if fd.f == 1 {
        out[0] = poly::inv_mod_p(a[0] as u64, fd.p) as u32;
        return;
    }
    let q = fd.q();
    let mut base = a.to_vec();
    let mut tmp = vec![0u32; fd.f];
    out.fill(0);
    out[0] = 1;
    let mut e = q - 2;
    while e > 0 {
        if e & 1 == 1 {
            tmp.copy_from_slice(out);
            field_mul(fd, &tmp, &base, out);
        }
        e >>= 1;
        if e > 0 {
            tmp.copy_from_slice(&base);
            let tmp2 = tmp.clone();
            field_mul(fd, &tmp, &tmp2, &mut base);
        }
    }
}

/// A ring element carrying its descriptor: the checked convenience layer
/// over the slice API. Arithmetic verifies descriptor agreement.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Elem<'a> {
    pub ring: &'a RingDesc,
    pub digits: Vec<u32>,
}

impl<'a> Elem<'a> {
    pub fn new(ring: &'a RingDesc, digits: Vec<u32>) -> Result<Elem<'a>> {
        if digits.len() != ring.width() {
            return Err(Error::BadParameter(format!(
                "element has {} digits, ring width is {}",
                digits.len(),
                ring.width()
            )));
        }
        let radix = ring.radix();
        if digits.iter().any(|&d| d as u64 >= radix) {
            return Err(Error::BadParameter("digit out of range".into()));
        }
        Ok(Elem { ring, digits })
    }

    pub fn zero(ring: &'a RingDesc) -> Elem<'a> {
        Elem { ring, digits: vec![0; ring.width()] }
    }

    pub fn one(ring: &'a RingDesc) -> Elem<'a> {
        let mut digits = vec![0; ring.width()];
        digits[0] = 1;
        Elem { ring, digits }
    }

    /// Embed a small integer n -> n * 1.
    pub fn from_u64(ring: &'a RingDesc, n: u64) -> Elem<'a> {
        let mut digits = vec![0; ring.width()];
        digits[0] = (n % char_multiple(ring)) as u32;
        Elem { ring, digits }
    }

    fn bin(&self, other: &Elem<'a>, op: fn(&RingDesc, &[u32], &[u32], &mut [u32])) -> Result<Elem<'a>> {
        if self.ring != other.ring {
            return Err(Error::DescriptorMismatch);
        }
        let mut out = vec![0u32; self.ring.width()];
        op(self.ring, &self.digits, &other.digits, &mut out);
        Ok(Elem { ring: self.ring, digits: out })
    }

    pub fn add(&self, other: &Elem<'a>) -> Result<Elem<'a>> {
        self.bin(other, RingDesc::add_into)
    }

    pub fn sub(&self, other: &Elem<'a>) -> Result<Elem<'a>> {
        self.bin(other, RingDesc::sub_into)
    }

    pub fn mul(&self, other: &Elem<'a>) -> Result<Elem<'a>> {
        self.bin(other, RingDesc::mul_into)
    }

    pub fn neg(&self) -> Elem<'a> {
        let mut out = vec![0u32; self.ring.width()];
        self.ring.neg_into(&self.digits, &mut out);
        Elem { ring: self.ring, digits: out }
    }

    pub fn inv(&self) -> Result<Elem<'a>> {
        let mut out = vec![0u32; self.ring.width()];
        self.ring.inv_into(&self.digits, &mut out)?;
        Ok(Elem { ring: self.ring, digits: out })
    }

    pub fn pow(&self, e: u64) -> Elem<'a> {
        let mut out = vec![0u32; self.ring.width()];
        self.ring.pow_into(&self.digits, e, &mut out);
        Elem { ring: self.ring, digits: out }
    }

    pub fn is_zero(&self) -> bool {
        self.ring.is_zero(&self.digits)
    }

    pub fn is_unit(&self) -> bool {
        self.ring.is_unit(&self.digits)
    }
}

/// Additive order of 1, i.e. the digit-0 radix: p for fields and truncated
/// polynomials, p^k for Galois rings.
fn char_multiple(ring: &RingDesc) -> u64 {
    ring.radix()
}
