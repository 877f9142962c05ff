//! Irreducible degree data from the class algebra. Structure constants give
//! two independent routes to the degree multiset: convolution powers of the
//! commutator distribution (Frobenius counts, inverted through a candidate
//! Vandermonde system) and simultaneous eigenvector splitting of class
//! matrices over a large prime field.

mod linalg;

use std::cell::Cell;
use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::groups::ConjugacyData;
use crate::rings::poly;
use crate::{isqrt_u64, matrix, Budgets, Error, Result};

use linalg::Fl;

/// Multiset of irreducible character degrees, keyed degree -> multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionMultiset {
    pub order: u64,
    pub classes: u64,
    pub degrees: BTreeMap<u64, u64>,
}

impl DimensionMultiset {
    /// Counting invariants every genuine degree multiset satisfies: the
    /// multiplicities sum to the class number, the squares sum to the group
    /// order, and each degree divides the order.
    pub fn validate(&self) -> Result<()> {
        let mut count = 0u64;
        let mut norm: u128 = 0;
        for (&d, &m) in &self.degrees {
            if d == 0 || m == 0 {
                return Err(Error::DegreeRecovery("zero degree or multiplicity".into()));
            }
            if self.order % d != 0 {
                return Err(Error::DegreeRecovery(format!(
                    "degree {d} does not divide the group order {}",
                    self.order
                )));
            }
            count += m;
            norm += m as u128 * d as u128 * d as u128;
        }
        if count != self.classes {
            return Err(Error::DegreeRecovery(format!(
                "multiplicities sum to {count}, expected {} classes",
                self.classes
            )));
        }
        if norm != self.order as u128 {
            return Err(Error::DegreeRecovery(format!(
                "squared degrees sum to {norm}, expected order {}",
                self.order
            )));
        }
        Ok(())
    }

    /// Number of distinct degrees.
    pub fn distinct_count(&self) -> usize {
        self.degrees.len()
    }

    /// Sorted distinct degrees.
    pub fn distinct_degrees(&self) -> Vec<u64> {
        self.degrees.keys().copied().collect()
    }

    pub fn to_json(&self) -> Value {
        let pairs: Vec<Value> = self.degrees.iter().map(|(&d, &m)| json!([d, m])).collect();
        json!({ "order": self.order, "classes": self.classes, "degrees": pairs })
    }

    pub fn from_json(v: &Value) -> Result<DimensionMultiset> {
        let order = v
            .get("order")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::BadParameter("degree multiset: missing order".into()))?;
        let classes = v
            .get("classes")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::BadParameter("degree multiset: missing classes".into()))?;
        let arr = v
            .get("degrees")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::BadParameter("degree multiset: missing degrees".into()))?;
        let mut degrees = BTreeMap::new();
        for pair in arr {
            let p = pair
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| Error::BadParameter("degree multiset: malformed pair".into()))?;
            let (d, m) = match (p[0].as_u64(), p[1].as_u64()) {
                (Some(d), Some(m)) => (d, m),
                _ => return Err(Error::BadParameter("degree multiset: malformed pair".into())),
            };
            if degrees.insert(d, m).is_some() {
                return Err(Error::BadParameter(format!("degree multiset: duplicate degree {d}")));
            }
        }
        let ms = DimensionMultiset { order, classes, degrees };
        ms.validate()?;
        Ok(ms)
    }
}

/// Values of the class function counting commutator pairs: values[k] is the
/// number of (x, y) with x^-1 y^-1 x y equal to the representative of class k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutatorDistribution {
    pub values: Vec<u64>,
}

/// Structure-constant engine over enumerated conjugacy data. Class i, j, k
/// index the classes of the underlying sweep; class 0 is the identity.
pub struct ClassAlgebra<'a> {
    pub data: &'a ConjugacyData,
    starts: Vec<u32>,
    members: Vec<u32>,
    ops_left: Cell<u64>,
    ops_budget: u64,
    max_candidates: u64,
}

impl<'a> ClassAlgebra<'a> {
    pub fn new(data: &'a ConjugacyData, budgets: &Budgets) -> ClassAlgebra<'a> {
        let r = data.num_classes();
        let order = data.group.order();
        // counting sort of arena indices by class
        let mut starts = vec![0u32; r + 1];
        for &c in &data.class_of {
            starts[c as usize + 1] += 1;
        }
        for i in 0..r {
            starts[i + 1] += starts[i];
        }
        let mut cursor: Vec<u32> = starts[..r].to_vec();
        let mut members = vec![0u32; order];
        for (x, &c) in data.class_of.iter().enumerate() {
            members[cursor[c as usize] as usize] = x as u32;
            cursor[c as usize] += 1;
        }
        ClassAlgebra {
            data,
            starts,
            members,
            ops_left: Cell::new(budgets.max_group_ops),
            ops_budget: budgets.max_group_ops,
            max_candidates: budgets.max_candidate_degrees,
        }
    }

    fn charge(&self, amount: u64) -> Result<()> {
        let left = self.ops_left.get();
        if amount > left {
            return Err(Error::OpsBudget {
                needed: self.ops_budget - left + amount,
                budget: self.ops_budget,
            });
        }
        self.ops_left.set(left - amount);
        Ok(())
    }

    /// Arena indices of the members of class i.
    pub fn members(&self, i: usize) -> &[u32] {
        &self.members[self.starts[i] as usize..self.starts[i + 1] as usize]
    }

    fn rep_elem(&self, k: usize) -> &[u32] {
        self.data.group.elem(self.data.classes[k].rep as usize)
    }

    /// Class multiplication matrix N of class i: N[j*r+k] counts the members
    /// x of class i with x^-1 g_k in class j, so column vectors of central
    /// character values are eigenvectors. Inverting x ranges over the
    /// inverse class, so the count scans class i* once.
    pub fn class_matrix(&self, i: usize) -> Result<Vec<u64>> {
        let r = self.data.num_classes();
        let istar = self.data.classes[i].inverse_class as usize;
        self.charge(self.data.classes[i].size * r as u64)?;
        let ring = &self.data.group.spec.ring;
        let n = self.data.group.spec.n;
        let mut prod = vec![0u32; self.data.group.matw];
        let mut n_mat = vec![0u64; r * r];
        for &w_idx in self.members(istar) {
            let w = self.data.group.elem(w_idx as usize);
            for k in 0..r {
                matrix::mul_into(ring, n, w, self.rep_elem(k), &mut prod);
                let j = self.data.class_of_elem(&prod)? as usize;
                n_mat[j * r + k] += 1;
            }
        }
        Ok(n_mat)
    }

    /// Number of pairs (x, y) whose commutator x^-1 y^-1 x y lies at each
    /// class representative: for fixed x the conjugating y form a centralizer
    /// coset, so the count groups by the class of x.
    pub fn commutator_distribution(&self) -> Result<CommutatorDistribution> {
        let r = self.data.num_classes();
        let order = self.data.group.order();
        self.charge(order as u64 * r as u64)?;
        let ring = &self.data.group.spec.ring;
        let n = self.data.group.spec.n;
        let mut prod = vec![0u32; self.data.group.matw];
        let mut acc = vec![0u128; r];
        for x in 0..order {
            let i = self.data.class_of[x] as usize;
            let cent = self.data.classes[i].centralizer as u128;
            let xe = self.data.group.elem(x);
            for k in 0..r {
                matrix::mul_into(ring, n, xe, self.rep_elem(k), &mut prod);
                if self.data.class_of_elem(&prod)? as usize == i {
                    acc[k] += cent;
                }
            }
        }
        // every pair lands somewhere: sum over classes of |C_k| f_k = |G|^2
        let total: u128 = acc
            .iter()
            .zip(&self.data.classes)
            .map(|(&f, c)| f * c.size as u128)
            .sum();
        if total != (order as u128) * (order as u128) {
            return Err(Error::ClosureViolation("commutator pair total mismatch".into()));
        }
        let values = acc.into_iter().map(|f| f as u64).collect();
        Ok(CommutatorDistribution { values })
    }

    /// Matrix B of convolution by the class function f on class-function
    /// values: (f * g)_k = sum_i B[k*r+i] g_i. Built in one scan of the
    /// group, adding f at the class of x^-1 g_k into entry (k, class of x).
    pub fn convolution_operator(&self, f: &[u64]) -> Result<Vec<BigUint>> {
        let r = self.data.num_classes();
        let order = self.data.group.order();
        assert_eq!(f.len(), r);
        self.charge(order as u64 * r as u64)?;
        let ring = &self.data.group.spec.ring;
        let n = self.data.group.spec.n;
        let mut prod = vec![0u32; self.data.group.matw];
        let mut acc = vec![0u128; r * r];
        for x in 0..order {
            let i = self.data.class_of[x] as usize;
            let w = self.data.group.elem(self.data.inv_idx[x] as usize);
            for k in 0..r {
                matrix::mul_into(ring, n, w, self.rep_elem(k), &mut prod);
                let j = self.data.class_of_elem(&prod)? as usize;
                acc[k * r + i] += f[j] as u128;
            }
        }
        Ok(acc.into_iter().map(BigUint::from).collect())
    }

    /// Exact zeta values at even arguments 2, 4, ..., 2*count. The m-fold
    /// convolution of the commutator distribution evaluated at the identity
    /// counts products of m commutators equal to 1, which is
    /// |G|^(2m-1) * zeta(2m-2); one matrix-vector pass per extra factor.
    pub fn zeta_sequence(
        &self,
        dist: &CommutatorDistribution,
        count: usize,
    ) -> Result<Vec<BigRational>> {
        let r = self.data.num_classes();
        let b = self.convolution_operator(&dist.values)?;
        let mut v: Vec<BigUint> = dist.values.iter().map(|&x| BigUint::from(x)).collect();
        let order = BigUint::from(self.data.order());
        let mut denom = order.pow(3);
        let mut out = Vec::with_capacity(count);
        for m in 1..=count {
            let mut next = vec![BigUint::zero(); r];
            for (k, slot) in next.iter_mut().enumerate() {
                let mut s = BigUint::zero();
                for i in 0..r {
                    s += &b[k * r + i] * &v[i];
                }
                *slot = s;
            }
            v = next;
            out.push(BigRational::new(BigInt::from(v[0].clone()), BigInt::from(denom.clone())));
            if m < count {
                denom *= order.pow(2);
            }
        }
        Ok(out)
    }

    /// zeta(2m) for m >= 1; the boundary values zeta(0) = class number and
    /// zeta(-2) = order come straight from the counting identities.
    pub fn frobenius_zeta(&self, dist: &CommutatorDistribution, m: i64) -> Result<BigRational> {
        match m {
            -1 => Ok(BigRational::from_integer(BigInt::from(self.data.order()))),
            0 => Ok(BigRational::from_integer(BigInt::from(self.data.num_classes() as u64))),
            m if m >= 1 => {
                let mut seq = self.zeta_sequence(dist, m as usize)?;
                Ok(seq.pop().expect("nonempty sequence"))
            }
            _ => Err(Error::BadParameter(format!("unsupported zeta argument 2*{m}"))),
        }
    }

    /// Recover the degree multiset from exact zeta values alone. Candidate
    /// degrees are the divisors d of |G| with d^2 <= |G|; the multiplicity
    /// vector is the unique solution of the power-sum system at the points
    /// 1/d^2, extracted per candidate by synthetic division of the master
    /// polynomial (a Lagrange-style elimination of all other points).
    pub fn degrees_from_zeta(&self, dist: &CommutatorDistribution) -> Result<DimensionMultiset> {
        let order = self.data.order();
        let r = self.data.num_classes() as u64;
        let mut divisors = Vec::new();
        for d in 1..=isqrt_u64(order) {
            if order % d == 0 {
                divisors.push(d);
            }
        }
        if divisors.len() as u64 > self.max_candidates {
            return Err(Error::CandidateBudget {
                candidates: divisors.len() as u64,
                budget: self.max_candidates,
            });
        }
        let t = divisors.len();
        // power sums b_m = sum over candidates of m_d (1/d^2)^m, m = 0..t-1
        let mut b = vec![BigRational::from_integer(BigInt::from(r))];
        b.extend(self.zeta_sequence(dist, t - 1)?);
        let xs: Vec<BigRational> = divisors
            .iter()
            .map(|&d| BigRational::new(BigInt::one(), BigInt::from(d * d)))
            .collect();
        // master polynomial, ascending coefficients
        let mut master = vec![BigRational::one()];
        for x in &xs {
            let mut next = vec![BigRational::zero(); master.len() + 1];
            for (m, c) in master.iter().enumerate() {
                next[m + 1] += c;
                next[m] -= c * x;
            }
            master = next;
        }
        let mut degrees = BTreeMap::new();
        let mut count = 0u64;
        let mut norm: u128 = 0;
        for (idx, &d) in divisors.iter().enumerate() {
            let x = &xs[idx];
            // q = master / (z - x) by synthetic division; remainder must vanish
            let mut q = vec![BigRational::zero(); t];
            q[t - 1] = master[t].clone();
            for m in (1..t).rev() {
                q[m - 1] = &master[m] + &(x * &q[m]);
            }
            let rem = &master[0] + &(x * &q[0]);
            if !rem.is_zero() {
                return Err(Error::DegreeRecovery(format!(
                    "synthetic division leaves a remainder at degree {d}"
                )));
            }
            let mut qx = BigRational::zero();
            for m in (0..t).rev() {
                qx = &(&qx * x) + &q[m];
            }
            let mut num = BigRational::zero();
            for m in 0..t {
                num += &q[m] * &b[m];
            }
            let md = num / qx;
            if md.is_negative() || !md.is_integer() {
                return Err(Error::DegreeRecovery(format!(
                    "multiplicity of degree {d} solves to {md}, not a nonnegative integer"
                )));
            }
            let m_u64 = md
                .to_integer()
                .to_u64()
                .ok_or_else(|| Error::DegreeRecovery(format!("multiplicity overflow at {d}")))?;
            if m_u64 > 0 {
                degrees.insert(d, m_u64);
                count += m_u64;
                norm += m_u64 as u128 * d as u128 * d as u128;
            }
        }
        if count != r || norm != order as u128 {
            return Err(Error::DegreeRecovery(format!(
                "recovered {count} characters with square sum {norm}, expected {r} and {order}"
            )));
        }
        let ms = DimensionMultiset { order, classes: r, degrees };
        ms.validate()?;
        Ok(ms)
    }

    /// Degree multiset by simultaneous diagonalization of class matrices
    /// over F_l, l a prime exceeding |G| with l = 1 mod exponent(G) so every
    /// central character takes values in F_l. Common eigenvectors, refined
    /// class by class, are the central characters; degrees come from the
    /// norm identity d^2 * sum_i w_i w_{i*} / |C_i| = |G|, read off exactly
    /// because d^2 <= |G| < l.
    pub fn dixon_degrees(&self) -> Result<DimensionMultiset> {
        let r = self.data.num_classes();
        let order = self.data.order();
        if r == 1 {
            let ms = DimensionMultiset {
                order,
                classes: 1,
                degrees: BTreeMap::from([(1, 1)]),
            };
            ms.validate()?;
            return Ok(ms);
        }
        let e = self.data.exponent;
        let mut l = ((order + e - 1) / e) * e + 1;
        while !poly::is_prime_u64(l) {
            l += e;
        }
        let fl = Fl::new(l);
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0011);

        struct Subspace {
            /// RREF rows spanning the subspace, Montgomery form, dim x r
            basis: Vec<u64>,
            pivots: Vec<usize>,
            dim: usize,
        }
        let mut full = vec![0u64; r * r];
        for i in 0..r {
            full[i * r + i] = fl.one;
        }
        let mut subs = vec![Subspace { basis: full, pivots: (0..r).collect(), dim: r }];

        for i in 1..r {
            if subs.iter().all(|s| s.dim == 1) {
                break;
            }
            let n_mont: Vec<u64> =
                self.class_matrix(i)?.into_iter().map(|c| fl.to(c)).collect();
            let mut next_subs = Vec::with_capacity(subs.len());
            for sub in subs {
                if sub.dim == 1 {
                    next_subs.push(sub);
                    continue;
                }
                let d = sub.dim;
                // restriction M[s*d+t] = (N b_t) at pivot row s; RREF bases
                // make pivot coordinates the expansion coefficients
                let mut m = vec![0u64; d * d];
                if d == r {
                    m.copy_from_slice(&n_mont);
                } else {
                    for t in 0..d {
                        let bt = &sub.basis[t * r..(t + 1) * r];
                        for (s, &p) in sub.pivots.iter().enumerate() {
                            let mut acc = 0u64;
                            for c in 0..r {
                                acc = fl.add(acc, fl.mul(n_mont[p * r + c], bt[c]));
                            }
                            m[s * d + t] = acc;
                        }
                        #[cfg(debug_assertions)]
                        for row in 0..r {
                            let mut acc = 0u64;
                            for c in 0..r {
                                acc = fl.add(acc, fl.mul(n_mont[row * r + c], bt[c]));
                            }
                            let mut rec = 0u64;
                            for s in 0..d {
                                rec = fl.add(rec, fl.mul(m[s * d + t], sub.basis[s * r + row]));
                            }
                            assert_eq!(acc, rec, "class matrix leaves common eigenspace");
                        }
                    }
                }
                let cp = linalg::charpoly(&fl, m.clone(), d);
                // radical gcd(x^l - x, cp) collects the distinct eigenvalues
                let mut xlx = poly::x_pow_mod(l as u128, &cp, l);
                if xlx.len() < 2 {
                    xlx.resize(2, 0);
                }
                xlx[1] = (xlx[1] + l - 1) % l;
                let g = poly::gcd(&xlx, &cp, l);
                if g.len() <= 2 {
                    // single eigenvalue: scalar action, nothing to refine
                    next_subs.push(sub);
                    continue;
                }
                let roots = linalg::linear_roots(&g, l, &mut rng).ok_or(Error::SplitIncomplete)?;
                let mut split_dim = 0usize;
                for &lam in &roots {
                    let lm = fl.to(lam);
                    let mut shifted = m.clone();
                    for t in 0..d {
                        shifted[t * d + t] = fl.sub(shifted[t * d + t], lm);
                    }
                    let kb = linalg::kernel(&fl, &shifted, d);
                    if kb.is_empty() {
                        return Err(Error::SplitIncomplete);
                    }
                    split_dim += kb.len();
                    // map back to ambient coordinates and re-normalize
                    let mut amb = vec![0u64; kb.len() * r];
                    for (row, v) in kb.iter().enumerate() {
                        for (t, &vt) in v.iter().enumerate() {
                            if vt == 0 {
                                continue;
                            }
                            let bt = &sub.basis[t * r..(t + 1) * r];
                            for c in 0..r {
                                amb[row * r + c] = fl.add(amb[row * r + c], fl.mul(vt, bt[c]));
                            }
                        }
                    }
                    let pivots = linalg::rref(&fl, &mut amb, kb.len(), r);
                    if pivots.len() != kb.len() {
                        return Err(Error::SplitIncomplete);
                    }
                    let dim = kb.len();
                    next_subs.push(Subspace { basis: amb, pivots, dim });
                }
                if split_dim != d {
                    return Err(Error::SplitIncomplete);
                }
            }
            subs = next_subs;
        }
        if subs.iter().any(|s| s.dim != 1) {
            return Err(Error::SplitIncomplete);
        }

        let size_inv: Vec<u64> =
            self.data.classes.iter().map(|c| fl.inv(fl.to(c.size))).collect();
        let g_mont = fl.to(order);
        let mut degrees: BTreeMap<u64, u64> = BTreeMap::new();
        for sub in &subs {
            let v = &sub.basis[..r];
            if v[0] == 0 {
                return Err(Error::DegreeRecovery(
                    "eigenvector vanishes at the identity class".into(),
                ));
            }
            let v0inv = fl.inv(v[0]);
            let mut s = 0u64;
            for i in 0..r {
                let istar = self.data.classes[i].inverse_class as usize;
                let wi = fl.mul(v[i], v0inv);
                let wistar = fl.mul(v[istar], v0inv);
                s = fl.add(s, fl.mul(fl.mul(wi, wistar), size_inv[i]));
            }
            if s == 0 {
                return Err(Error::DegreeRecovery("degenerate character norm".into()));
            }
            let d2 = fl.from(fl.mul(g_mont, fl.inv(s)));
            let d = isqrt_u64(d2);
            if d * d != d2 || d == 0 || order % d != 0 {
                return Err(Error::DegreeRecovery(format!(
                    "eigenvector norm gives degree square {d2}"
                )));
            }
            *degrees.entry(d).or_insert(0) += 1;
        }
        let ms = DimensionMultiset { order, classes: r as u64, degrees };
        ms.validate()?;
        Ok(ms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{
        commuting_pair_count, conjugacy_classes, enumerate_group, ConjugacyData, GroupSpec, Scheme,
    };
    use crate::rings::RingDesc;

    fn conj(scheme: Scheme, n: usize, ring: RingDesc) -> ConjugacyData {
        let spec = GroupSpec::new(scheme, n, ring).unwrap();
        let budgets = Budgets::default();
        let group = enumerate_group(&spec, &budgets).unwrap();
        conjugacy_classes(group, &budgets).unwrap()
    }

    fn multiset(pairs: &[(u64, u64)], order: u64, classes: u64) -> DimensionMultiset {
        DimensionMultiset { order, classes, degrees: pairs.iter().copied().collect() }
    }

    /// Brute-force commutator histogram per class: counts pairs (x, y) whose
    /// commutator lands anywhere in class k, so class k carries |C_k| f_k.
    fn brute_commutators(data: &ConjugacyData) -> Vec<u64> {
        let g = &data.group;
        let ring = &g.spec.ring;
        let n = g.spec.n;
        let order = g.order();
        let mut t1 = vec![0u32; g.matw];
        let mut t2 = vec![0u32; g.matw];
        let mut hist = vec![0u64; data.num_classes()];
        for x in 0..order {
            for y in 0..order {
                let xi = g.elem(data.inv_idx[x] as usize);
                let yi = g.elem(data.inv_idx[y] as usize);
                matrix::mul_into(ring, n, xi, yi, &mut t1);
                matrix::mul_into(ring, n, &t1, g.elem(x), &mut t2);
                matrix::mul_into(ring, n, &t2, g.elem(y), &mut t1);
                hist[data.class_of_elem(&t1).unwrap() as usize] += 1;
            }
        }
        hist
    }

    #[test]
    fn cyclic_structure_constants() {
        // the unit group of the four-element field is cyclic of order 3 and
        // its arena order lists the powers of a generator
        let data = conj(Scheme::Gl, 1, RingDesc::field(2, 2).unwrap());
        let alg = ClassAlgebra::new(&data, &Budgets::default());
        let r = 3;
        assert_eq!(data.num_classes(), r);
        for i in 0..r {
            let n_mat = alg.class_matrix(i).unwrap();
            for j in 0..r {
                for k in 0..r {
                    let expect = u64::from((i + j) % 3 == k);
                    assert_eq!(n_mat[j * r + k], expect, "i={i} j={j} k={k}");
                }
            }
        }
    }

    #[test]
    fn structure_constants_satisfy_counting_identity() {
        let data = conj(Scheme::UpperUni, 3, RingDesc::field(3, 1).unwrap());
        let alg = ClassAlgebra::new(&data, &Budgets::default());
        let r = data.num_classes();
        let id = alg.class_matrix(0).unwrap();
        for j in 0..r {
            for k in 0..r {
                assert_eq!(id[j * r + k], u64::from(j == k));
            }
        }
        for i in 0..r {
            let n_mat = alg.class_matrix(i).unwrap();
            for j in 0..r {
                let total: u64 =
                    (0..r).map(|k| n_mat[j * r + k] * data.classes[k].size).sum();
                assert_eq!(total, data.classes[i].size * data.classes[j].size, "i={i} j={j}");
            }
        }
    }

    #[test]
    fn commutator_distribution_matches_brute_force() {
        for (scheme, n, ring) in [
            (Scheme::Gl, 2, RingDesc::field(3, 1).unwrap()),
            (Scheme::UpperUni, 3, RingDesc::field(3, 1).unwrap()),
        ] {
            let data = conj(scheme, n, ring);
            let alg = ClassAlgebra::new(&data, &Budgets::default());
            let dist = alg.commutator_distribution().unwrap();
            let hist = brute_commutators(&data);
            for k in 0..data.num_classes() {
                assert_eq!(hist[k], dist.values[k] * data.classes[k].size, "class {k}");
            }
            assert_eq!(u128::from(dist.values[0]), commuting_pair_count(&data));
        }
    }

    #[test]
    fn abelian_distribution_concentrates_at_identity() {
        let data = conj(Scheme::Diagonal, 2, RingDesc::field(5, 1).unwrap());
        let alg = ClassAlgebra::new(&data, &Budgets::default());
        let dist = alg.commutator_distribution().unwrap();
        assert_eq!(dist.values[0], 16 * 16);
        assert!(dist.values[1..].iter().all(|&v| v == 0));
        // all irreducibles of an abelian group are linear: zeta is constant
        let seq = alg.zeta_sequence(&dist, 2).unwrap();
        let sixteen = BigRational::from_integer(BigInt::from(16));
        assert_eq!(seq, vec![sixteen.clone(), sixteen]);
    }

    #[test]
    fn heisenberg_zeta_values() {
        let data = conj(Scheme::UpperUni, 3, RingDesc::field(3, 1).unwrap());
        let alg = ClassAlgebra::new(&data, &Budgets::default());
        let dist = alg.commutator_distribution().unwrap();
        assert_eq!(
            alg.frobenius_zeta(&dist, -1).unwrap(),
            BigRational::from_integer(BigInt::from(27))
        );
        assert_eq!(
            alg.frobenius_zeta(&dist, 0).unwrap(),
            BigRational::from_integer(BigInt::from(11))
        );
        let seq = alg.zeta_sequence(&dist, 2).unwrap();
        // degrees 1^9 3^2: zeta(2) = 9 + 2/9, zeta(4) = 9 + 2/81
        assert_eq!(seq[0], BigRational::new(BigInt::from(83), BigInt::from(9)));
        assert_eq!(seq[1], BigRational::new(BigInt::from(731), BigInt::from(81)));
        // commutator-square count at the identity: |G|^3 zeta(2)
        let n2 = &seq[0] * BigRational::from_integer(BigInt::from(27u64.pow(3)));
        assert_eq!(n2, BigRational::from_integer(BigInt::from(181521)));
    }

    #[test]
    fn convolution_matches_inverse_pairing_count() {
        for (scheme, n, ring) in [
            (Scheme::UpperUni, 3, RingDesc::field(3, 1).unwrap()),
            (Scheme::Sl, 2, RingDesc::field(3, 1).unwrap()),
        ] {
            let data = conj(scheme, n, ring);
            let alg = ClassAlgebra::new(&data, &Budgets::default());
            let dist = alg.commutator_distribution().unwrap();
            // products of two commutators equal to 1, counted two ways
            let direct: u128 = (0..data.num_classes())
                .map(|k| {
                    let kstar = data.classes[k].inverse_class as usize;
                    data.classes[k].size as u128
                        * dist.values[k] as u128
                        * dist.values[kstar] as u128
                })
                .sum();
            let order = data.order() as u128;
            let n2 = &alg.zeta_sequence(&dist, 1).unwrap()[0]
                * BigRational::from_integer(BigInt::from(order.pow(3)));
            assert_eq!(n2, BigRational::from_integer(BigInt::from(direct)));
        }
    }

    #[test]
    fn eigenvector_degrees_match_frozen_tables() {
        let heis = conj(Scheme::UpperUni, 3, RingDesc::field(3, 1).unwrap());
        let alg = ClassAlgebra::new(&heis, &Budgets::default());
        assert_eq!(alg.dixon_degrees().unwrap(), multiset(&[(1, 9), (3, 2)], 27, 11));

        let gl2 = conj(Scheme::Gl, 2, RingDesc::field(3, 1).unwrap());
        let alg = ClassAlgebra::new(&gl2, &Budgets::default());
        assert_eq!(
            alg.dixon_degrees().unwrap(),
            multiset(&[(1, 2), (2, 3), (3, 2), (4, 1)], 48, 8)
        );
    }

    #[test]
    fn eigenvector_and_zeta_inversion_agree() {
        let sl2 = conj(Scheme::Sl, 2, RingDesc::field(5, 1).unwrap());
        let alg = ClassAlgebra::new(&sl2, &Budgets::default());
        let from_eigen = alg.dixon_degrees().unwrap();
        let dist = alg.commutator_distribution().unwrap();
        let from_zeta = alg.degrees_from_zeta(&dist).unwrap();
        assert_eq!(from_eigen, from_zeta);
        assert_eq!(
            from_eigen,
            multiset(&[(1, 1), (2, 2), (3, 2), (4, 2), (5, 1), (6, 1)], 120, 9)
        );

        let heis = conj(Scheme::UpperUni, 3, RingDesc::field(3, 1).unwrap());
        let alg = ClassAlgebra::new(&heis, &Budgets::default());
        let dist = alg.commutator_distribution().unwrap();
        assert_eq!(alg.degrees_from_zeta(&dist).unwrap(), alg.dixon_degrees().unwrap());
    }

    #[test]
    fn zeta_inversion_small_groups() {
        let trivial = conj(Scheme::Gl, 1, RingDesc::field(2, 1).unwrap());
        let alg = ClassAlgebra::new(&trivial, &Budgets::default());
        let dist = alg.commutator_distribution().unwrap();
        assert_eq!(alg.degrees_from_zeta(&dist).unwrap(), multiset(&[(1, 1)], 1, 1));
        assert_eq!(alg.dixon_degrees().unwrap(), multiset(&[(1, 1)], 1, 1));

        let c6 = conj(Scheme::Gl, 1, RingDesc::field(7, 1).unwrap());
        let alg = ClassAlgebra::new(&c6, &Budgets::default());
        let dist = alg.commutator_distribution().unwrap();
        assert_eq!(alg.degrees_from_zeta(&dist).unwrap(), multiset(&[(1, 6)], 6, 6));
    }

    #[test]
    fn multiset_json_round_trip_and_validation() {
        let ms = multiset(&[(1, 2), (2, 3), (3, 2), (4, 1)], 48, 8);
        assert!(ms.validate().is_ok());
        assert_eq!(ms.distinct_count(), 4);
        assert_eq!(ms.distinct_degrees(), vec![1, 2, 3, 4]);
        let back = DimensionMultiset::from_json(&ms.to_json()).unwrap();
        assert_eq!(back, ms);

        let bad = multiset(&[(1, 2), (2, 3), (3, 2), (4, 1)], 48, 9);
        assert!(matches!(bad.validate(), Err(Error::DegreeRecovery(_))));
        let bad = multiset(&[(5, 1), (1, 23)], 48, 24);
        assert!(matches!(bad.validate(), Err(Error::DegreeRecovery(_))));
    }

    #[test]
    fn operation_budget_is_enforced() {
        let data = conj(Scheme::UpperUni, 3, RingDesc::field(3, 1).unwrap());
        let budgets = Budgets { max_group_ops: 10, ..Budgets::default() };
        let alg = ClassAlgebra::new(&data, &budgets);
        assert!(matches!(
            alg.commutator_distribution(),
            Err(Error::OpsBudget { budget: 10, .. })
        ));
    }
}
