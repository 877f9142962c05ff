//! Matrix group schemes over finite truncated rings: point enumeration and
//! conjugacy structure.
//!
//! Elements are flat digit matrices (see [`crate::matrix`]); the canonical
//! encoding of an element is its digit slice, ordered row-major with ring
//! digits ascending. Enumeration always produces elements in strictly
//! increasing canonical order, so arena index is a stable element id and
//! the packed free-coordinate key array is sorted.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::matrix;
use crate::rings::RingDesc;
use crate::{Budgets, Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Scheme {
    Gl,
    Sl,
    UpperUni,
    Heisenberg,
    Diagonal,
}

impl Scheme {
    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Gl => "GL",
            Scheme::Sl => "SL",
            Scheme::UpperUni => "U",
            Scheme::Heisenberg => "Heisenberg",
            Scheme::Diagonal => "Diagonal",
        }
    }

    fn is_unitriangular(&self) -> bool {
        matches!(self, Scheme::UpperUni | Scheme::Heisenberg)
    }
}

#[derive(Clone, Debug)]
pub struct GroupSpec {
    pub scheme: Scheme,
    pub n: usize,
    pub ring: RingDesc,
}

impl GroupSpec {
    pub fn new(scheme: Scheme, n: usize, ring: RingDesc) -> Result<GroupSpec> {
        if n == 0 {
            return Err(Error::BadParameter("matrix size n must be >= 1".into()));
        }
        if scheme == Scheme::Heisenberg && n != 3 {
            return Err(Error::UnsupportedScheme(format!(
                "Heisenberg requires n = 3, got n = {n}"
            )));
        }
        Ok(GroupSpec { scheme, n, ring })
    }

    /// Dimension of the scheme: number of free matrix coordinates.
    pub fn dim(&self) -> usize {
        let n = self.n;
        match self.scheme {
            Scheme::Gl => n * n,
            Scheme::Sl => n * n - 1,
            Scheme::UpperUni | Scheme::Heisenberg => n * (n - 1) / 2,
            Scheme::Diagonal => n,
        }
    }

    /// Row-major list of matrix positions that vary over the scheme.
    /// For SL the list is all n^2 positions (the determinant condition cuts
    /// the variety but every coordinate still varies).
    fn free_positions(&self) -> Vec<(usize, usize)> {
        let n = self.n;
        match self.scheme {
            Scheme::Gl | Scheme::Sl => {
                (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect()
            }
            Scheme::UpperUni | Scheme::Heisenberg => (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .collect(),
            Scheme::Diagonal => (0..n).map(|i| (i, i)).collect(),
        }
    }

    /// Exact group order: |GL_n(F_q)| = prod (q^n - q^i), |SL| = |GL|/(q-1),
    /// |U_n(R)| = |R|^{n(n-1)/2}, |Diag_n(R)| = |R^x|^n; over a level-k ring
    /// the GL/SL counts pick up the lift factor q^{dim (k-1)}.
    pub fn predicted_order(&self) -> Option<u128> {
        let q = self.ring.residue_field().q() as u128;
        let n = self.n as u32;
        let k = self.ring.level() as u32;
        match self.scheme {
            Scheme::Gl | Scheme::Sl => {
                let mut base: u128 = 1;
                let qn = q.checked_pow(n)?;
                for i in 0..n {
                    base = base.checked_mul(qn - q.checked_pow(i)?)?;
                }
                if self.scheme == Scheme::Sl {
                    base /= q - 1;
                }
                let lift = q.checked_pow(self.dim() as u32 * (k - 1))?;
                base.checked_mul(lift)
            }
            Scheme::UpperUni | Scheme::Heisenberg => {
                let r = self.ring.size()?;
                r.checked_pow(n * (n - 1) / 2)
            }
            Scheme::Diagonal => self.ring.unit_count()?.checked_pow(n),
        }
    }

    /// Scheme membership test for a fully assembled matrix.
    fn is_member(&self, mat: &[u32], det_buf: &mut [u32]) -> bool {
        let ring = &self.ring;
        match self.scheme {
            Scheme::Gl => {
                matrix::det_into(ring, self.n, mat, det_buf);
                ring.is_unit(det_buf)
            }
            Scheme::Sl => {
                matrix::det_into(ring, self.n, mat, det_buf);
                let w = ring.width();
                det_buf[0] == 1 && det_buf[1..w].iter().all(|&d| d == 0)
            }
            // construction already guarantees shape
            Scheme::UpperUni | Scheme::Heisenberg | Scheme::Diagonal => true,
        }
    }

    pub fn descriptor_json(&self) -> Value {
        json!({
            "scheme": self.scheme.name(),
            "n": self.n,
            "ring": self.ring.descriptor_json(),
        })
    }

    pub fn from_json(v: &Value) -> Result<GroupSpec> {
        let scheme = match v.get("scheme").and_then(Value::as_str) {
            Some("GL") => Scheme::Gl,
            Some("SL") => Scheme::Sl,
            Some("U") => Scheme::UpperUni,
            Some("Heisenberg") => Scheme::Heisenberg,
            Some("Diagonal") => Scheme::Diagonal,
            Some(other) => return Err(Error::UnsupportedScheme(other.to_string())),
            None => return Err(Error::BadParameter("missing scheme".into())),
        };
        let n = v
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::BadParameter("missing n".into()))? as usize;
        let ring = RingDesc::from_json(
            v.get("ring")
                .ok_or_else(|| Error::BadParameter("missing ring".into()))?,
        )?;
        GroupSpec::new(scheme, n, ring)
    }
}

fn all_ring_elements(ring: &RingDesc) -> Vec<Vec<u32>> {
    ring.iter_elements().collect()
}

fn unit_ring_elements(ring: &RingDesc) -> Vec<Vec<u32>> {
    ring.iter_elements().filter(|e| ring.is_unit(e)).collect()
}

/// Elements of the maximal ideal, in lex order: exactly those with zero
/// residue.
fn ideal_elements(ring: &RingDesc) -> Vec<Vec<u32>> {
    let rw = ring.residue_field().f;
    let mut res = vec![0u32; rw];
    ring.iter_elements()
        .filter(|e| {
            ring.residue_into(e, &mut res);
            res.iter().all(|&d| d == 0)
        })
        .collect()
}

/// Drive `visit` over every group element, in unspecified order (lifted
/// schemes interleave); callers needing canonical order sort afterwards.
fn visit_elements(spec: &GroupSpec, visit: &mut dyn FnMut(&[u32])) -> Result<()> {
    let ring = &spec.ring;
    let n = spec.n;
    let w = ring.width();
    let free = spec.free_positions();
    let mut mat = vec![0u32; n * n * w];
    let mut det = vec![0u32; w];

    // constant part of the matrix
    if spec.scheme.is_unitriangular() {
        matrix::identity_into(ring, n, &mut mat);
    }

    // Level-1 rings and shape-defined schemes iterate free values directly.
    let direct = ring.level() == 1 || !matches!(spec.scheme, Scheme::Gl | Scheme::Sl);
    if direct {
        let values = match spec.scheme {
            Scheme::Diagonal => unit_ring_elements(ring),
            _ => all_ring_elements(ring),
        };
        let mut idx = vec![0usize; free.len()];
        loop {
            for (s, &(i, j)) in free.iter().enumerate() {
                let off = (i * n + j) * w;
                mat[off..off + w].copy_from_slice(&values[idx[s]]);
            }
            if spec.is_member(&mat, &mut det) {
                visit(&mat);
            }
            // odometer, last slot fastest: canonical lex order
            let mut s = free.len();
            loop {
                if s == 0 {
                    return Ok(());
                }
                s -= 1;
                idx[s] += 1;
                if idx[s] < values.len() {
                    break;
                }
                idx[s] = 0;
            }
        }
    }

    // Lifted GL/SL: enumerate the residue group, then filter every lift
    // (canonical lift plus every maximal-ideal offset per entry).
    let res_ring = RingDesc::Field(ring.residue_field().clone());
    let base_spec = GroupSpec::new(spec.scheme, n, res_ring.clone())?;
    let ideal = ideal_elements(ring);
    let rw = res_ring.width();
    let mut embedded = vec![0u32; n * n * w];
    let mut tmp = vec![0u32; w];
    visit_elements(&base_spec, &mut |base: &[u32]| {
        for e in 0..n * n {
            ring.embed_residue(&base[e * rw..(e + 1) * rw], &mut embedded[e * w..(e + 1) * w]);
        }
        let slots = free.len();
        let mut idx = vec![0usize; slots];
        loop {
            for (s, &(i, j)) in free.iter().enumerate() {
                let off = (i * n + j) * w;
                tmp.copy_from_slice(&embedded[off..off + w]);
                ring.add_into(&tmp, &ideal[idx[s]], &mut mat[off..off + w]);
            }
            if spec.is_member(&mat, &mut det) {
                visit(&mat);
            }
            let mut s = slots;
            loop {
                if s == 0 {
                    return;
                }
                s -= 1;
                idx[s] += 1;
                if idx[s] < ideal.len() {
                    break;
                }
                idx[s] = 0;
            }
        }
    })
}

/// Count the scheme's points without materializing them.
pub fn count_points(spec: &GroupSpec) -> Result<u64> {
    let mut count = 0u64;
    visit_elements(spec, &mut |_| count += 1)?;
    Ok(count)
}

/// An enumerated group: the element arena in canonical order.
#[derive(Debug)]
pub struct Group {
    pub spec: GroupSpec,
    pub matw: usize,
    arena: Vec<u32>,
    order: usize,
}

impl Group {
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn elem(&self, i: usize) -> &[u32] {
        &self.arena[i * self.matw..(i + 1) * self.matw]
    }
}

pub fn enumerate_group(spec: &GroupSpec, budgets: &Budgets) -> Result<Group> {
    let predicted = spec
        .predicted_order()
        .ok_or_else(|| Error::BadParameter("group order overflows u128".into()))?;
    if predicted > budgets.max_elements as u128 {
        return Err(Error::ElementBudget {
            predicted: predicted.min(u64::MAX as u128) as u64,
            budget: budgets.max_elements,
        });
    }
    let matw = matrix::mat_width(&spec.ring, spec.n);
    let mut arena: Vec<u32> = Vec::with_capacity(predicted as usize * matw);
    visit_elements(spec, &mut |mat| arena.extend_from_slice(mat))?;
    let order = arena.len() / matw;
    if order as u128 != predicted {
        return Err(Error::ClosureViolation(format!(
            "enumerated {order} elements, predicted {predicted}"
        )));
    }

    // Lifted GL/SL enumeration interleaves fibers; restore canonical order.
    let lifted = spec.ring.level() > 1 && matches!(spec.scheme, Scheme::Gl | Scheme::Sl);
    if lifted {
        let mut indices: Vec<u32> = (0..order as u32).collect();
        indices.sort_unstable_by(|&a, &b| {
            let sa = &arena[a as usize * matw..(a as usize + 1) * matw];
            let sb = &arena[b as usize * matw..(b as usize + 1) * matw];
            sa.cmp(sb)
        });
        let mut sorted = vec![0u32; arena.len()];
        for (pos, &src) in indices.iter().enumerate() {
            sorted[pos * matw..(pos + 1) * matw]
                .copy_from_slice(&arena[src as usize * matw..(src as usize + 1) * matw]);
        }
        arena = sorted;
    }
    debug_assert!((1..order).all(|i| {
        arena[(i - 1) * matw..i * matw] < arena[i * matw..(i + 1) * matw]
    }));

    Ok(Group { spec: spec.clone(), matw, arena, order })
}

/// Packed key over the free coordinates: mixed-radix, most significant
/// digit first, so key order equals canonical element order.
struct KeyPacker {
    offsets: Vec<usize>,
    w: usize,
    radix: u64,
}

impl KeyPacker {
    fn new(spec: &GroupSpec) -> Result<KeyPacker> {
        let w = spec.ring.width();
        let radix = spec.ring.radix();
        let offsets: Vec<usize> = spec
            .free_positions()
            .iter()
            .map(|&(i, j)| (i * spec.n + j) * w)
            .collect();
        let digits = offsets.len() * w;
        let mut space: u128 = 1;
        for _ in 0..digits {
            space = space
                .checked_mul(radix as u128)
                .ok_or_else(|| Error::BadParameter("key space exceeds u64".into()))?;
        }
        if space > u64::MAX as u128 + 1 {
            return Err(Error::BadParameter("key space exceeds u64".into()));
        }
        Ok(KeyPacker { offsets, w, radix })
    }

    #[inline]
    fn key(&self, mat: &[u32]) -> u64 {
        let mut k = 0u64;
        for &off in &self.offsets {
            for d in 0..self.w {
                k = k * self.radix + mat[off + d] as u64;
            }
        }
        k
    }
}

/// Sorted-key lookup with a top-bits bucket directory for O(1) access.
struct KeyIndex {
    keys: Vec<u64>,
    shift: u32,
    buckets: Vec<u32>,
}

impl KeyIndex {
    fn new(keys: Vec<u64>) -> KeyIndex {
        debug_assert!(keys.windows(2).all(|w| w[0] < w[1]));
        let max_key = keys.last().copied().unwrap_or(0);
        let key_bits = 64 - max_key.leading_zeros();
        let want = (keys.len().max(2) as u64).next_power_of_two().trailing_zeros() + 1;
        let bits = want.min(key_bits).min(24);
        let shift = key_bits - bits;
        let nb = 1usize << bits;
        let mut buckets = vec![0u32; nb + 1];
        for &k in &keys {
            buckets[(k >> shift) as usize + 1] += 1;
        }
        for b in 1..=nb {
            buckets[b] += buckets[b - 1];
        }
        KeyIndex { keys, shift, buckets }
    }

    #[inline]
    fn lookup(&self, key: u64) -> Option<u32> {
        let b = (key >> self.shift) as usize;
        if b + 1 >= self.buckets.len() {
            return None;
        }
        let lo = self.buckets[b] as usize;
        let hi = self.buckets[b + 1] as usize;
        for (i, &k) in self.keys[lo..hi].iter().enumerate() {
            if k == key {
                return Some((lo + i) as u32);
            }
            if k > key {
                return None;
            }
        }
        None
    }
}

/// Per-class summary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassInfo {
    /// arena index of the class representative (first element found)
    pub rep: u32,
    pub size: u64,
    pub centralizer: u64,
    pub inverse_class: u32,
}

/// Full conjugacy structure of an enumerated group.
pub struct ConjugacyData {
    pub group: Group,
    pub class_of: Vec<u32>,
    pub classes: Vec<ClassInfo>,
    pub inv_idx: Vec<u32>,
    pub exponent: u64,
    index: KeyIndex,
    packer: KeyPacker,
}

impl ConjugacyData {
    pub fn order(&self) -> u64 {
        self.group.order() as u64
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    /// O(1) element index lookup from the canonical encoding.
    pub fn index_of(&self, mat: &[u32]) -> Result<u32> {
        let key = self.packer.key(mat);
        match self.index.lookup(key) {
            Some(i) if self.group.elem(i as usize) == mat => Ok(i),
            _ => Err(Error::UnknownElement),
        }
    }

    pub fn class_of_elem(&self, mat: &[u32]) -> Result<u32> {
        Ok(self.class_of[self.index_of(mat)? as usize])
    }
}

/// Orbit sweep over the whole group: class 0 is the identity's class by
/// construction; every further class is seeded by the lowest-index
/// unclassified element and closed by conjugating with all group elements.
pub fn conjugacy_classes(group: Group, budgets: &Budgets) -> Result<ConjugacyData> {
    let ring = group.spec.ring.clone();
    let n = group.spec.n;
    let w = group.matw;
    let order = group.order();

    let packer = KeyPacker::new(&group.spec)?;
    let keys: Vec<u64> = (0..order).map(|i| packer.key(group.elem(i))).collect();
    let index = KeyIndex::new(keys);

    let mut ops: u64 = 0;
    let charge = |ops: &mut u64, amount: u64| -> Result<()> {
        *ops += amount;
        if *ops > budgets.max_group_ops {
            return Err(Error::OpsBudget { needed: *ops, budget: budgets.max_group_ops });
        }
        Ok(())
    };

    // inverse of every element; doubles as a full inverse-closure check
    let mut inv_idx = vec![0u32; order];
    let mut buf = vec![0u32; w];
    for i in 0..order {
        matrix::inv_into(&ring, n, group.elem(i), &mut buf)?;
        let key = packer.key(&buf);
        let j = match index.lookup(key) {
            Some(j) if group.elem(j as usize) == &buf[..] => j,
            _ => {
                return Err(Error::ClosureViolation(format!(
                    "inverse of element {i} not in enumeration"
                )))
            }
        };
        inv_idx[i] = j;
    }
    charge(&mut ops, order as u64)?;

    // sampled product-closure check
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0010);
    let mut prod = vec![0u32; w];
    for _ in 0..128 {
        let a = (rng.next_u64() % order as u64) as usize;
        let b = (rng.next_u64() % order as u64) as usize;
        matrix::mul_into(&ring, n, group.elem(a), group.elem(b), &mut prod);
        let key = packer.key(&prod);
        match index.lookup(key) {
            Some(j) if group.elem(j as usize) == &prod[..] => {}
            _ => {
                return Err(Error::ClosureViolation(format!(
                    "product of elements {a}, {b} not in enumeration"
                )))
            }
        }
    }
    charge(&mut ops, 128)?;

    // identity gets class 0
    let mut ident = vec![0u32; w];
    matrix::identity_into(&ring, n, &mut ident);
    let id_idx = match index.lookup(packer.key(&ident)) {
        Some(i) if group.elem(i as usize) == &ident[..] => i as usize,
        _ => return Err(Error::ClosureViolation("identity not in enumeration".into())),
    };

    let mut class_of = vec![u32::MAX; order];
    let mut classes: Vec<ClassInfo> = Vec::new();
    class_of[id_idx] = 0;
    classes.push(ClassInfo { rep: id_idx as u32, size: 1, centralizer: order as u64, inverse_class: 0 });

    let mut half = vec![0u32; w];
    let mut conj = vec![0u32; w];
    for seed in 0..order {
        if class_of[seed] != u32::MAX {
            continue;
        }
        if classes.len() >= budgets.max_classes as usize {
            return Err(Error::ClassBudget {
                classes: classes.len() as u64 + 1,
                budget: budgets.max_classes,
            });
        }
        let c = classes.len() as u32;
        let mut size = 0u64;
        let g = seed * w;
        for u in 0..order {
            matrix::mul_into(&ring, n, group.elem(u), &group.arena[g..g + w], &mut half);
            matrix::mul_into(&ring, n, &half, group.elem(inv_idx[u] as usize), &mut conj);
            let key = packer.key(&conj);
            let t = index.lookup(key).expect("conjugate stays in group") as usize;
            debug_assert_eq!(group.elem(t), &conj[..]);
            if class_of[t] == u32::MAX {
                class_of[t] = c;
                size += 1;
            } else {
                debug_assert_eq!(class_of[t], c);
            }
        }
        charge(&mut ops, 2 * order as u64)?;
        if order as u64 % size != 0 {
            return Err(Error::ClosureViolation(format!(
                "class size {size} does not divide group order {order}"
            )));
        }
        classes.push(ClassInfo {
            rep: seed as u32,
            size,
            centralizer: order as u64 / size,
            inverse_class: 0,
        });
    }

    // inverse-class map
    for c in 0..classes.len() {
        let rep = classes[c].rep as usize;
        classes[c].inverse_class = class_of[inv_idx[rep] as usize];
    }

    // exponent from representative orders (order is a class invariant)
    let mut exponent: u64 = 1;
    let mut pw = ident.clone();
    let mut next = vec![0u32; w];
    for info in &classes {
        let g = info.rep as usize;
        let mut ord: u64 = 1;
        pw.copy_from_slice(group.elem(g));
        while !matrix::is_identity(&ring, n, &pw) {
            matrix::mul_into(&ring, n, &pw, group.elem(g), &mut next);
            pw.copy_from_slice(&next);
            ord += 1;
        }
        charge(&mut ops, ord)?;
        exponent = num_integer::lcm(exponent, ord);
    }

    Ok(ConjugacyData { group, class_of, classes, inv_idx, exponent, index, packer })
}

/// #{(x,y) : xy = yx} = sum over x of |Cent(x)| = |G| * #classes.
pub fn commuting_pair_count(data: &ConjugacyData) -> u128 {
    let mut total: u128 = 0;
    for x in 0..data.group.order() {
        total += data.classes[data.class_of[x] as usize].centralizer as u128;
    }
    total
}

const CACHE_MAGIC: u32 = 0x525a_4343; // "RZCC"
const CACHE_VERSION: u32 = 1;

impl ConjugacyData {
    /// Binary cache payload: header {order, #classes, exponent}, class
    /// table, then the element -> class array in enumeration order.
    /// Elements themselves are re-enumerated on load (deterministic).
    pub fn to_cache_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(32 + self.classes.len() * 28 + self.class_of.len() * 4);
        out.extend_from_slice(&CACHE_MAGIC.to_le_bytes());
        out.extend_from_slice(&CACHE_VERSION.to_le_bytes());
        out.extend_from_slice(&(self.group.order() as u64).to_le_bytes());
        out.extend_from_slice(&(self.classes.len() as u32).to_le_bytes());
        out.extend_from_slice(&self.exponent.to_le_bytes());
        for c in &self.classes {
            out.extend_from_slice(&c.rep.to_le_bytes());
            out.extend_from_slice(&c.size.to_le_bytes());
            out.extend_from_slice(&c.centralizer.to_le_bytes());
            out.extend_from_slice(&c.inverse_class.to_le_bytes());
        }
        for &cl in &self.class_of {
            out.extend_from_slice(&cl.to_le_bytes());
        }
        out
    }

    /// Rebuild from a cache payload plus a freshly enumerated group. The
    /// group must match the payload's order; lookup structures and the
    /// inverse table are recomputed (cheap relative to the sweep).
    pub fn from_cache_bytes(group: Group, bytes: &[u8]) -> Result<ConjugacyData> {
        let bad = || Error::BadParameter("malformed conjugacy cache".into());
        let mut pos = 0usize;
        let mut take = |n: usize| -> Result<&[u8]> {
            let s = bytes.get(pos..pos + n).ok_or_else(bad)?;
            pos += n;
            Ok(s)
        };
        let magic = u32::from_le_bytes(take(4)?.try_into().unwrap());
        let version = u32::from_le_bytes(take(4)?.try_into().unwrap());
        if magic != CACHE_MAGIC || version != CACHE_VERSION {
            return Err(bad());
        }
        let order = u64::from_le_bytes(take(8)?.try_into().unwrap());
        if order != group.order() as u64 {
            return Err(bad());
        }
        let nclasses = u32::from_le_bytes(take(4)?.try_into().unwrap()) as usize;
        let exponent = u64::from_le_bytes(take(8)?.try_into().unwrap());
        let mut classes = Vec::with_capacity(nclasses);
        for _ in 0..nclasses {
            let rep = u32::from_le_bytes(take(4)?.try_into().unwrap());
            let size = u64::from_le_bytes(take(8)?.try_into().unwrap());
            let centralizer = u64::from_le_bytes(take(8)?.try_into().unwrap());
            let inverse_class = u32::from_le_bytes(take(4)?.try_into().unwrap());
            classes.push(ClassInfo { rep, size, centralizer, inverse_class });
        }
        let mut class_of = Vec::with_capacity(order as usize);
        for _ in 0..order {
            class_of.push(u32::from_le_bytes(take(4)?.try_into().unwrap()));
        }
        if pos != bytes.len() {
            return Err(bad());
        }

        let packer = KeyPacker::new(&group.spec)?;
        let keys: Vec<u64> = (0..group.order()).map(|i| packer.key(group.elem(i))).collect();
        let index = KeyIndex::new(keys);
        let ring = group.spec.ring.clone();
        let n = group.spec.n;
        let mut inv_idx = vec![0u32; group.order()];
        let mut buf = vec![0u32; group.matw];
        for i in 0..group.order() {
            matrix::inv_into(&ring, n, group.elem(i), &mut buf)?;
            let j = index.lookup(packer.key(&buf)).ok_or_else(bad)?;
            inv_idx[i] = j;
        }
        Ok(ConjugacyData { group, class_of, classes, inv_idx, exponent, index, packer })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn budgets() -> Budgets {
        Budgets::default()
    }

    fn field(p: u64, f: usize) -> RingDesc {
        RingDesc::field(p, f).unwrap()
    }

    #[test]
    fn sl2_f5_has_120_elements() {
        let spec = GroupSpec::new(Scheme::Sl, 2, field(5, 1)).unwrap();
        assert_eq!(spec.predicted_order(), Some(120));
        let g = enumerate_group(&spec, &budgets()).unwrap();
        assert_eq!(g.order(), 120);
        // duplicate-free ascending order is asserted inside enumerate_group;
        // spot-check determinants
        let mut det = vec![0u32; 1];
        for i in 0..g.order() {
            matrix::det_into(&g.spec.ring, 2, g.elem(i), &mut det);
            assert_eq!(det[0], 1);
        }
    }

    #[test]
    fn gl1_is_the_unit_group() {
        for (p, f) in [(5u64, 1usize), (3, 2), (2, 3)] {
            let spec = GroupSpec::new(Scheme::Gl, 1, field(p, f)).unwrap();
            let g = enumerate_group(&spec, &budgets()).unwrap();
            assert_eq!(g.order() as u64, p.pow(f as u32) - 1);
        }
    }

    #[test]
    fn sl2_lift_counts_match_over_both_families() {
        let tr = RingDesc::trunc_poly(5, 1, 2).unwrap();
        let zm = RingDesc::zmod(5, 2).unwrap();
        for ring in [tr, zm] {
            let spec = GroupSpec::new(Scheme::Sl, 2, ring).unwrap();
            assert_eq!(spec.predicted_order(), Some(15000));
            let g = enumerate_group(&spec, &budgets()).unwrap();
            assert_eq!(g.order(), 15000);
        }
    }

    #[test]
    fn unipotent_orders_are_ring_size_powers() {
        for n in 2..=4usize {
            let ring = RingDesc::field(3, 1).unwrap();
            let spec = GroupSpec::new(Scheme::UpperUni, n, ring).unwrap();
            let g = enumerate_group(&spec, &budgets()).unwrap();
            assert_eq!(g.order() as u64, 3u64.pow((n * (n - 1) / 2) as u32));
        }
        let ring = RingDesc::trunc_poly(2, 2, 2).unwrap(); // F_4[t]/(t^2), 16 elements
        let spec = GroupSpec::new(Scheme::UpperUni, 3, ring).unwrap();
        let g = enumerate_group(&spec, &budgets()).unwrap();
        assert_eq!(g.order(), 16 * 16 * 16);
    }

    #[test]
    fn element_budget_is_enforced() {
        let spec = GroupSpec::new(Scheme::Gl, 2, RingDesc::trunc_poly(5, 1, 3).unwrap()).unwrap();
        let err = enumerate_group(&spec, &budgets()).unwrap_err();
        assert!(matches!(err, Error::ElementBudget { predicted: 187_500_000, budget: _ }));
        assert!(err.is_budget());
    }

    #[test]
    fn gl2_f3_conjugacy_structure() {
        let spec = GroupSpec::new(Scheme::Gl, 2, field(3, 1)).unwrap();
        let g = enumerate_group(&spec, &budgets()).unwrap();
        assert_eq!(g.order(), 48);
        let data = conjugacy_classes(g, &budgets()).unwrap();
        assert_eq!(data.num_classes(), 8);
        let total: u64 = data.classes.iter().map(|c| c.size).sum();
        assert_eq!(total, 48);
        for c in &data.classes {
            assert_eq!(c.size * c.centralizer, 48);
        }
        assert_eq!(data.classes[0].size, 1);
        assert_eq!(commuting_pair_count(&data), 384);
        // inverse-class map is an involution
        for (i, c) in data.classes.iter().enumerate() {
            let ic = c.inverse_class as usize;
            assert_eq!(data.classes[ic].inverse_class as usize, i);
            assert_eq!(data.classes[ic].size, c.size);
        }
    }

    #[test]
    fn heisenberg_f3_conjugacy_structure() {
        let spec = GroupSpec::new(Scheme::Heisenberg, 3, field(3, 1)).unwrap();
        let g = enumerate_group(&spec, &budgets()).unwrap();
        assert_eq!(g.order(), 27);
        let data = conjugacy_classes(g, &budgets()).unwrap();
        assert_eq!(data.num_classes(), 11); // p^2 + p - 1 at p = 3
        assert_eq!(commuting_pair_count(&data), 297);
        assert_eq!(data.exponent, 3);
    }

    #[test]
    fn class_lookup_and_identity_class() {
        let spec = GroupSpec::new(Scheme::Sl, 2, field(3, 1)).unwrap();
        let g = enumerate_group(&spec, &budgets()).unwrap();
        let ring = g.spec.ring.clone();
        let data = conjugacy_classes(g, &budgets()).unwrap();

        let mut ident = vec![0u32; 4];
        matrix::identity_into(&ring, 2, &mut ident);
        assert_eq!(data.class_of_elem(&ident).unwrap(), 0);

        // g and h g h^-1 share a class; g and g^-1 classes are paired
        let mut half = vec![0u32; 4];
        let mut conj = vec![0u32; 4];
        for (gi, hi) in [(5usize, 7usize), (11, 2), (20, 13)] {
            let h_inv = data.inv_idx[hi] as usize;
            matrix::mul_into(&ring, 2, data.group.elem(hi), data.group.elem(gi), &mut half);
            matrix::mul_into(&ring, 2, &half, data.group.elem(h_inv), &mut conj);
            assert_eq!(
                data.class_of[gi],
                data.class_of_elem(&conj).unwrap(),
                "conjugates must share a class"
            );
            let gc = data.class_of[gi] as usize;
            let ginv_class = data.class_of[data.inv_idx[gi] as usize];
            assert_eq!(data.classes[gc].inverse_class, ginv_class);
        }

        // unknown element: the zero matrix is not in SL_2
        let zero = vec![0u32; 4];
        assert_eq!(data.class_of_elem(&zero), Err(Error::UnknownElement));
    }

    #[test]
    fn abelian_groups_have_singleton_classes() {
        let spec = GroupSpec::new(Scheme::Diagonal, 2, field(5, 1)).unwrap();
        let g = enumerate_group(&spec, &budgets()).unwrap();
        assert_eq!(g.order(), 16);
        let data = conjugacy_classes(g, &budgets()).unwrap();
        assert_eq!(data.num_classes(), 16);
        assert_eq!(commuting_pair_count(&data), 256);
    }

    #[test]
    fn trivial_group() {
        let spec = GroupSpec::new(Scheme::UpperUni, 1, field(7, 1)).unwrap();
        let g = enumerate_group(&spec, &budgets()).unwrap();
        assert_eq!(g.order(), 1);
        let data = conjugacy_classes(g, &budgets()).unwrap();
        assert_eq!(data.num_classes(), 1);
        assert_eq!(data.exponent, 1);
    }

    #[test]
    fn cache_round_trip() {
        let spec = GroupSpec::new(Scheme::Sl, 2, field(3, 1)).unwrap();
        let g = enumerate_group(&spec, &budgets()).unwrap();
        let data = conjugacy_classes(g, &budgets()).unwrap();
        let bytes = data.to_cache_bytes();

        let g2 = enumerate_group(&spec, &budgets()).unwrap();
        let restored = ConjugacyData::from_cache_bytes(g2, &bytes).unwrap();
        assert_eq!(restored.class_of, data.class_of);
        assert_eq!(restored.classes, data.classes);
        assert_eq!(restored.exponent, data.exponent);
        assert_eq!(restored.inv_idx, data.inv_idx);

        // corrupted payload is rejected
        let mut bad = bytes.clone();
        bad[0] ^= 0xff;
        let g3 = enumerate_group(&spec, &budgets()).unwrap();
        assert!(ConjugacyData::from_cache_bytes(g3, &bad).is_err());
    }

    #[test]
    fn spec_json_round_trip() {
        let spec = GroupSpec::new(Scheme::Gl, 2, RingDesc::galois_ring(5, 2, 1).unwrap()).unwrap();
        let j = spec.descriptor_json();
        let back = GroupSpec::from_json(&j).unwrap();
        assert_eq!(back.scheme, Scheme::Gl);
        assert_eq!(back.n, 2);
        assert_eq!(back.predicted_order(), spec.predicted_order());
    }
}
