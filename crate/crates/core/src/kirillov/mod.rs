//! Coadjoint orbit method for unitriangular groups. The strictly upper
//! triangular matrices form a nilpotent Lie algebra on which the group acts
//! by conjugation; orbits of the induced action on the dual space have
//! perfect-square sizes whose roots are the irreducible degrees. For
//! characteristic at least n the truncated exp/log pair transports group
//! elements to the algebra, giving exact character values in Z[zeta_p].

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::chartab::DimensionMultiset;
use crate::groups::{Group, GroupSpec, Scheme};
use crate::rings::RingDesc;
use crate::{isqrt_u64, matrix, Budgets, Error, Result};

/// Strictly upper triangular matrices over a truncated ring, with the
/// commutator bracket. Coordinates follow the positions row by row.
pub struct LieAlgebra {
    pub ring: RingDesc,
    pub n: usize,
    pub positions: Vec<(usize, usize)>,
}

impl LieAlgebra {
    pub fn new(spec: &GroupSpec) -> Result<LieAlgebra> {
        match spec.scheme {
            Scheme::UpperUni | Scheme::Heisenberg => {}
            other => return Err(Error::UnsupportedScheme(other.name().to_string())),
        }
        let n = spec.n;
        let positions =
            (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        Ok(LieAlgebra { ring: spec.ring.clone(), n, positions })
    }

    pub fn dim(&self) -> usize {
        self.positions.len()
    }

    /// Matrix with a single 1 at coordinate c.
    pub fn basis_matrix(&self, c: usize) -> Vec<u32> {
        let w = self.ring.width();
        let (i, j) = self.positions[c];
        let mut mat = vec![0u32; matrix::mat_width(&self.ring, self.n)];
        let mut one = vec![0u32; w];
        self.ring.one_into(&mut one);
        mat[(i * self.n + j) * w..(i * self.n + j + 1) * w].copy_from_slice(&one);
        mat
    }

    pub fn is_member(&self, mat: &[u32]) -> bool {
        let w = self.ring.width();
        for i in 0..self.n {
            for j in 0..=i {
                if !self.ring.is_zero(matrix::entry(mat, self.n, w, i, j)) {
                    return false;
                }
            }
        }
        true
    }

    /// Commutator bracket ab - ba.
    pub fn bracket(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let w = matrix::mat_width(&self.ring, self.n);
        let mut ab = vec![0u32; w];
        let mut ba = vec![0u32; w];
        matrix::mul_into(&self.ring, self.n, a, b, &mut ab);
        matrix::mul_into(&self.ring, self.n, b, a, &mut ba);
        let mut out = vec![0u32; w];
        matrix::sub_into(&self.ring, self.n, &ab, &ba, &mut out);
        out
    }

    /// Read the free coordinates of a member matrix.
    pub fn coords(&self, mat: &[u32], out: &mut [u32]) {
        let w = self.ring.width();
        debug_assert!(self.is_member(mat));
        for (c, &(i, j)) in self.positions.iter().enumerate() {
            out[c * w..(c + 1) * w]
                .copy_from_slice(matrix::entry(mat, self.n, w, i, j));
        }
    }
}

/// The ring element m * 1 for a small integer m.
fn ring_int(ring: &RingDesc, m: u64, out: &mut [u32]) {
    let w = ring.width();
    let mut one = vec![0u32; w];
    ring.one_into(&mut one);
    ring.zero_into(out);
    let mut tmp = vec![0u32; w];
    for _ in 0..m {
        tmp.copy_from_slice(out);
        ring.add_into(&tmp, &one, out);
    }
}

/// Scale every entry of a matrix by the ring element s, in place.
fn mat_scale(ring: &RingDesc, n: usize, a: &mut [u32], s: &[u32]) {
    let w = ring.width();
    let mut tmp = vec![0u32; w];
    for e in 0..n * n {
        ring.mul_into(&a[e * w..(e + 1) * w], s, &mut tmp);
        a[e * w..(e + 1) * w].copy_from_slice(&tmp);
    }
}

/// Truncated exponential 1 + x + ... + x^{n-1}/(n-1)! of a nilpotent matrix.
/// Requires characteristic at least n so the factorials are units.
pub fn exp_nilpotent(ring: &RingDesc, n: usize, x: &[u32]) -> Result<Vec<u32>> {
    let p = ring.char_p();
    if p < n as u64 {
        return Err(Error::CharacteristicTooSmall { p, n });
    }
    if !matrix::is_nilpotent(ring, n, x) {
        return Err(Error::NotNilpotent);
    }
    let w = matrix::mat_width(ring, n);
    let rw = ring.width();
    let mut acc = vec![0u32; w];
    matrix::identity_into(ring, n, &mut acc);
    let mut term = vec![0u32; w];
    matrix::identity_into(ring, n, &mut term);
    let mut prod = vec![0u32; w];
    let mut sum = vec![0u32; w];
    let mut scalar = vec![0u32; rw];
    let mut sinv = vec![0u32; rw];
    for m in 1..n as u64 {
        matrix::mul_into(ring, n, &term, x, &mut prod);
        ring_int(ring, m, &mut scalar);
        ring.inv_into(&scalar, &mut sinv)?;
        mat_scale(ring, n, &mut prod, &sinv);
        term.copy_from_slice(&prod);
        matrix::add_into(ring, n, &acc, &term, &mut sum);
        acc.copy_from_slice(&sum);
    }
    Ok(acc)
}

/// Truncated logarithm y - y^2/2 + ... of a unipotent matrix, y = u - 1.
/// Requires characteristic at least n so the denominators are units.
pub fn log_unipotent(ring: &RingDesc, n: usize, u: &[u32]) -> Result<Vec<u32>> {
    let p = ring.char_p();
    if p < n as u64 {
        return Err(Error::CharacteristicTooSmall { p, n });
    }
    if !matrix::is_unipotent(ring, n, u) {
        return Err(Error::NotUnipotent);
    }
    let w = matrix::mat_width(ring, n);
    let rw = ring.width();
    let mut ident = vec![0u32; w];
    matrix::identity_into(ring, n, &mut ident);
    let mut y = vec![0u32; w];
    matrix::sub_into(ring, n, u, &ident, &mut y);
    let mut acc = vec![0u32; w];
    let mut pow = y.clone();
    let mut scaled = vec![0u32; w];
    let mut sum = vec![0u32; w];
    let mut tmp = vec![0u32; w];
    let mut scalar = vec![0u32; rw];
    let mut sinv = vec![0u32; rw];
    for m in 1..n as u64 {
        scaled.copy_from_slice(&pow);
        ring_int(ring, m, &mut scalar);
        ring.inv_into(&scalar, &mut sinv)?;
        mat_scale(ring, n, &mut scaled, &sinv);
        if m % 2 == 1 {
            matrix::add_into(ring, n, &acc, &scaled, &mut sum);
        } else {
            matrix::sub_into(ring, n, &acc, &scaled, &mut sum);
        }
        acc.copy_from_slice(&sum);
        if m + 1 < n as u64 {
            matrix::mul_into(ring, n, &pow, &y, &mut tmp);
            pow.copy_from_slice(&tmp);
        }
    }
    Ok(acc)
}

/// Orbit decomposition of the dual of the Lie algebra under the group
/// acting by (g . f)(x) = f(g^-1 x g). Functionals are identified with
/// coordinate vectors through the dual basis and packed into table indices.
pub struct CoadjointOrbits {
    pub algebra: LieAlgebra,
    /// orbit id of every functional, indexed by packed coordinates
    pub orbit_of: Vec<u32>,
    pub sizes: Vec<u64>,
}

pub fn coadjoint_orbits(spec: &GroupSpec, budgets: &Budgets) -> Result<CoadjointOrbits> {
    let algebra = LieAlgebra::new(spec)?;
    let ring = algebra.ring.clone();
    let n = algebra.n;
    let m = algebra.dim();
    let w = ring.width();
    let radix = ring.radix();
    let digits = m * w;

    let mut total: u128 = 1;
    for _ in 0..digits {
        total = total.saturating_mul(radix as u128);
    }
    if total > budgets.max_elements as u128 {
        return Err(Error::ElementBudget {
            predicted: total.min(u64::MAX as u128) as u64,
            budget: budgets.max_elements,
        });
    }
    let total = total as usize;

    // one action matrix per elementary generator 1 + v E_{ij}: row c lists
    // the coordinates of g^-1 E_c g
    let matw = matrix::mat_width(&ring, n);
    let mut gens: Vec<Vec<u32>> = Vec::new();
    let mut g = vec![0u32; matw];
    let mut ginv = vec![0u32; matw];
    let mut t1 = vec![0u32; matw];
    let mut t2 = vec![0u32; matw];
    for c in 0..m {
        let (i, j) = algebra.positions[c];
        for v in ring.iter_elements() {
            if ring.is_zero(&v) {
                continue;
            }
            matrix::identity_into(&ring, n, &mut g);
            g[(i * n + j) * w..(i * n + j + 1) * w].copy_from_slice(&v);
            matrix::inv_into(&ring, n, &g, &mut ginv)?;
            let mut action = vec![0u32; m * m * w];
            for (cc, row) in action.chunks_mut(m * w).enumerate() {
                let basis = algebra.basis_matrix(cc);
                matrix::mul_into(&ring, n, &ginv, &basis, &mut t1);
                matrix::mul_into(&ring, n, &t1, &g, &mut t2);
                algebra.coords(&t2, row);
            }
            gens.push(action);
        }
    }

    let decode = |idx: usize, f: &mut [u32]| {
        let mut rest = idx as u64;
        for d in f.iter_mut() {
            *d = (rest % radix) as u32;
            rest /= radix;
        }
    };
    let encode = |f: &[u32]| -> usize {
        let mut idx = 0u64;
        for &d in f.iter().rev() {
            idx = idx * radix + d as u64;
        }
        idx as usize
    };

    let mut orbit_of = vec![u32::MAX; total];
    let mut sizes = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    let mut f = vec![0u32; digits];
    let mut img = vec![0u32; digits];
    let mut prod = vec![0u32; w];
    let mut acc = vec![0u32; w];
    let mut sum = vec![0u32; w];
    for seed in 0..total {
        if orbit_of[seed] != u32::MAX {
            continue;
        }
        let id = sizes.len() as u32;
        orbit_of[seed] = id;
        let mut size = 1u64;
        stack.push(seed);
        while let Some(idx) = stack.pop() {
            decode(idx, &mut f);
            for action in &gens {
                for c in 0..m {
                    ring.zero_into(&mut acc);
                    for cp in 0..m {
                        let b = &action[(c * m + cp) * w..(c * m + cp + 1) * w];
                        if ring.is_zero(b) {
                            continue;
                        }
                        ring.mul_into(b, &f[cp * w..(cp + 1) * w], &mut prod);
                        ring.add_into(&acc, &prod, &mut sum);
                        acc.copy_from_slice(&sum);
                    }
                    img[c * w..(c + 1) * w].copy_from_slice(&acc);
                }
                let j = encode(&img);
                if orbit_of[j] == u32::MAX {
                    orbit_of[j] = id;
                    size += 1;
                    stack.push(j);
                }
            }
        }
        sizes.push(size);
    }
    Ok(CoadjointOrbits { algebra, orbit_of, sizes })
}

impl CoadjointOrbits {
    pub fn num_orbits(&self) -> usize {
        self.sizes.len()
    }

    /// Degrees as square roots of the orbit sizes.
    pub fn orbit_degrees(&self) -> Result<DimensionMultiset> {
        let mut degrees: BTreeMap<u64, u64> = BTreeMap::new();
        let mut order: u128 = 0;
        for &s in &self.sizes {
            let d = isqrt_u64(s);
            if d * d != s {
                return Err(Error::NonSquareOrbitSize(s));
            }
            *degrees.entry(d).or_insert(0) += 1;
            order += s as u128;
        }
        let ms = DimensionMultiset {
            order: order as u64,
            classes: self.sizes.len() as u64,
            degrees,
        };
        ms.validate()?;
        Ok(ms)
    }
}

/// Degree multiset straight from the coadjoint orbit sizes.
pub fn orbit_method_degrees(spec: &GroupSpec, budgets: &Budgets) -> Result<DimensionMultiset> {
    coadjoint_orbits(spec, budgets)?.orbit_degrees()
}

/// Exact element of Z[zeta_p] with rational coordinates in the power basis
/// 1, zeta, ..., zeta^{p-2}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicValue {
    pub p: u64,
    pub coeffs: Vec<BigRational>,
}

impl CyclotomicValue {
    pub fn zero(p: u64) -> CyclotomicValue {
        CyclotomicValue { p, coeffs: vec![BigRational::zero(); (p - 1) as usize] }
    }

    pub fn integer(p: u64, v: i64) -> CyclotomicValue {
        let mut out = CyclotomicValue::zero(p);
        out.coeffs[0] = BigRational::from_integer(BigInt::from(v));
        out
    }

    /// Add c * zeta^e, using zeta^{p-1} = -(1 + zeta + ... + zeta^{p-2}).
    fn add_power(&mut self, e: u64, c: &BigRational) {
        let e = (e % self.p) as usize;
        if e == (self.p - 1) as usize {
            for slot in &mut self.coeffs {
                *slot -= c;
            }
        } else {
            self.coeffs[e] += c;
        }
    }

    pub fn root_power(p: u64, e: u64) -> CyclotomicValue {
        let mut out = CyclotomicValue::zero(p);
        out.add_power(e, &BigRational::one());
        out
    }

    pub fn add_assign(&mut self, other: &CyclotomicValue) {
        assert_eq!(self.p, other.p);
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }

    pub fn scale(&mut self, s: &BigRational) {
        for a in &mut self.coeffs {
            *a *= s;
        }
    }

    pub fn mul(&self, other: &CyclotomicValue) -> CyclotomicValue {
        assert_eq!(self.p, other.p);
        let mut out = CyclotomicValue::zero(self.p);
        for (j, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (k, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out.add_power((j + k) as u64, &(a * b));
            }
        }
        out
    }

    /// Complex conjugation zeta -> zeta^{-1}.
    pub fn conj(&self) -> CyclotomicValue {
        let mut out = CyclotomicValue::zero(self.p);
        for (j, a) in self.coeffs.iter().enumerate() {
            if !a.is_zero() {
                out.add_power((self.p - j as u64) % self.p, a);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

/// Exact character table from the orbit decomposition, rows indexed by
/// orbit id and columns by arena index: the value at g is
/// (1/d) sum over the orbit of zeta^{<f, log g>}. Prime fields only.
pub fn character_table(
    orbits: &CoadjointOrbits,
    group: &Group,
) -> Result<Vec<Vec<CyclotomicValue>>> {
    let ring = &orbits.algebra.ring;
    let n = orbits.algebra.n;
    let m = orbits.algebra.dim();
    if ring.width() != 1 || ring.level() != 1 {
        return Err(Error::NotPrimeField);
    }
    let p = ring.char_p();

    // functional coordinate vectors grouped by orbit
    let mut members: Vec<Vec<u32>> = vec![Vec::new(); orbits.num_orbits()];
    for (idx, &o) in orbits.orbit_of.iter().enumerate() {
        members[o as usize].push(idx as u32);
    }
    let scales: Vec<BigRational> = orbits
        .sizes
        .iter()
        .map(|&s| BigRational::new(BigInt::one(), BigInt::from(isqrt_u64(s))))
        .collect();

    let mut table =
        vec![vec![CyclotomicValue::zero(p); group.order()]; orbits.num_orbits()];
    let mut xc = vec![0u32; m];
    for gi in 0..group.order() {
        let x = log_unipotent(ring, n, group.elem(gi))?;
        orbits.algebra.coords(&x, &mut xc);
        for (o, mem) in members.iter().enumerate() {
            let mut acc = CyclotomicValue::zero(p);
            for &fidx in mem {
                let mut rest = fidx as u64;
                let mut pairing = 0u64;
                for &xd in xc.iter() {
                    pairing = (pairing + (rest % p) * xd as u64) % p;
                    rest /= p;
                }
                acc.add_power(pairing, &BigRational::one());
            }
            acc.scale(&scales[o]);
            table[o][gi] = acc;
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chartab::ClassAlgebra;
    use crate::groups::{conjugacy_classes, enumerate_group};

    fn uni_spec(n: usize, ring: RingDesc) -> GroupSpec {
        GroupSpec::new(Scheme::UpperUni, n, ring).unwrap()
    }

    #[test]
    fn bracket_is_antisymmetric_and_satisfies_jacobi() {
        let spec = uni_spec(4, RingDesc::field(5, 1).unwrap());
        let alg = LieAlgebra::new(&spec).unwrap();
        let m = alg.dim();
        assert_eq!(m, 6);
        let ring = alg.ring.clone();
        let n = alg.n;
        let w = matrix::mat_width(&ring, n);
        for a in 0..m {
            for b in 0..m {
                let ea = alg.basis_matrix(a);
                let eb = alg.basis_matrix(b);
                let ab = alg.bracket(&ea, &eb);
                assert!(alg.is_member(&ab) || matrix::is_zero_mat(&ring, n, &ab));
                let ba = alg.bracket(&eb, &ea);
                let mut sum = vec![0u32; w];
                matrix::add_into(&ring, n, &ab, &ba, &mut sum);
                assert!(matrix::is_zero_mat(&ring, n, &sum));
                for c in 0..m {
                    let ec = alg.basis_matrix(c);
                    let j1 = alg.bracket(&ab, &ec);
                    let j2 = alg.bracket(&alg.bracket(&eb, &ec), &ea);
                    let j3 = alg.bracket(&alg.bracket(&ec, &ea), &eb);
                    let mut s = vec![0u32; w];
                    matrix::add_into(&ring, n, &j1, &j2, &mut s);
                    let mut t = vec![0u32; w];
                    matrix::add_into(&ring, n, &s, &j3, &mut t);
                    assert!(matrix::is_zero_mat(&ring, n, &t), "jacobi {a} {b} {c}");
                }
            }
        }
    }

    #[test]
    fn exp_log_round_trip() {
        for ring in [
            RingDesc::field(5, 1).unwrap(),
            RingDesc::zmod(5, 2).unwrap(),
            RingDesc::trunc_poly(3, 1, 2).unwrap(),
        ] {
            let spec = uni_spec(3, ring.clone());
            let budgets = Budgets::default();
            let group = enumerate_group(&spec, &budgets).unwrap();
            for gi in 0..group.order() {
                let u = group.elem(gi);
                let x = log_unipotent(&ring, 3, u).unwrap();
                assert!(matrix::is_nilpotent(&ring, 3, &x));
                let back = exp_nilpotent(&ring, 3, &x).unwrap();
                assert_eq!(&back[..], u);
            }
        }
    }

    #[test]
    fn characteristic_guard_rejects_small_primes() {
        let ring = RingDesc::field(3, 1).unwrap();
        let spec = uni_spec(4, ring.clone());
        let budgets = Budgets::default();
        let group = enumerate_group(&spec, &budgets).unwrap();
        let err = log_unipotent(&ring, 4, group.elem(5)).unwrap_err();
        assert_eq!(err, Error::CharacteristicTooSmall { p: 3, n: 4usize });
    }

    #[test]
    fn heisenberg_orbit_structure() {
        // q^2 singleton orbits and q - 1 orbits of size q^2
        for q in [3u64, 5, 7] {
            let spec = uni_spec(3, RingDesc::field(q, 1).unwrap());
            let orbits = coadjoint_orbits(&spec, &Budgets::default()).unwrap();
            let singles = orbits.sizes.iter().filter(|&&s| s == 1).count() as u64;
            let big = orbits.sizes.iter().filter(|&&s| s == q * q).count() as u64;
            assert_eq!(singles, q * q);
            assert_eq!(big, q - 1);
            assert_eq!(orbits.num_orbits() as u64, q * q + q - 1);
            let ms = orbits.orbit_degrees().unwrap();
            assert_eq!(ms.degrees, [(1, q * q), (q, q - 1)].into_iter().collect());
        }
    }

    #[test]
    fn orbit_count_matches_class_count() {
        for (n, q) in [(3, 3u64), (3, 5), (4, 3)] {
            let spec = uni_spec(n, RingDesc::field(q, 1).unwrap());
            let budgets = Budgets::default();
            let orbits = coadjoint_orbits(&spec, &budgets).unwrap();
            let group = enumerate_group(&spec, &budgets).unwrap();
            let data = conjugacy_classes(group, &budgets).unwrap();
            assert_eq!(orbits.num_orbits(), data.num_classes(), "n={n} q={q}");
        }
    }

    #[test]
    fn orbit_degrees_match_eigenvector_degrees_even_below_the_exp_bound() {
        // nilpotency class 3 with p = 3: no exp/log, but orbit sizes still
        // deliver the degree multiset
        let spec = uni_spec(4, RingDesc::field(3, 1).unwrap());
        let budgets = Budgets::default();
        let orbits = coadjoint_orbits(&spec, &budgets).unwrap();
        for &s in &orbits.sizes {
            let d = isqrt_u64(s);
            assert_eq!(d * d, s, "orbit size {s} is a square");
            assert!(d == 1 || d % 3 == 0);
        }
        let from_orbits = orbits.orbit_degrees().unwrap();
        let group = enumerate_group(&spec, &budgets).unwrap();
        let data = conjugacy_classes(group, &budgets).unwrap();
        let alg = ClassAlgebra::new(&data, &budgets);
        assert_eq!(from_orbits, alg.dixon_degrees().unwrap());
    }

    #[test]
    fn cyclotomic_arithmetic() {
        // 1 + z + z^2 + z^3 + z^4 = 0 for p = 5
        let mut s = CyclotomicValue::integer(5, 1);
        for e in 1..5 {
            s.add_assign(&CyclotomicValue::root_power(5, e));
        }
        assert!(s.is_zero());
        // z^2 * z^3 = 1
        let z2 = CyclotomicValue::root_power(5, 2);
        let z3 = CyclotomicValue::root_power(5, 3);
        assert_eq!(z2.mul(&z3), CyclotomicValue::integer(5, 1));
        // conj(z) = z^4 and z * conj(z) = 1
        assert_eq!(z2.conj(), CyclotomicValue::root_power(5, 3));
        assert_eq!(z2.mul(&z2.conj()), CyclotomicValue::integer(5, 1));
    }

    #[test]
    fn character_rows_are_orthogonal() {
        for q in [3u64, 5] {
            let spec = uni_spec(3, RingDesc::field(q, 1).unwrap());
            let budgets = Budgets::default();
            let orbits = coadjoint_orbits(&spec, &budgets).unwrap();
            let group = enumerate_group(&spec, &budgets).unwrap();
            let order = group.order();
            let table = character_table(&orbits, &group).unwrap();
            // identity column gives the degrees
            let id_col = (0..order)
                .find(|&gi| matrix::is_identity(&spec.ring, 3, group.elem(gi)))
                .unwrap();
            for (o, row) in table.iter().enumerate() {
                let d = isqrt_u64(orbits.sizes[o]);
                assert_eq!(row[id_col], CyclotomicValue::integer(q, d as i64));
            }
            for a in 0..table.len() {
                for b in a..table.len() {
                    let mut acc = CyclotomicValue::zero(q);
                    for gi in 0..order {
                        acc.add_assign(&table[a][gi].mul(&table[b][gi].conj()));
                    }
                    let expect = if a == b { order as i64 } else { 0 };
                    assert_eq!(acc, CyclotomicValue::integer(q, expect), "rows {a} {b}");
                }
            }
        }
    }
}
