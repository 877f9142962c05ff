//! Zeta-side analysis of degree multisets: exact evaluation of the
//! degree sums, difference expansions in the substitution u = e^s with
//! integer exponent tags, sign-switch root bounds, a finite sampling
//! criterion for equivalence of multisets, and bounded sum sets.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{pow, One, Signed, ToPrimitive, Zero};
use rand_chacha::rand_core::RngCore;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::chartab::DimensionMultiset;
use crate::{Budgets, Error, Result};

/// Read-only handle on a degree multiset for zeta-side computations.
#[derive(Clone, Copy, Debug)]
pub struct ZetaView<'a> {
    pub multiset: &'a DimensionMultiset,
}

/// d^(-s) as an exact rational for integer s.
fn pow_term(d: u64, s: i64) -> BigRational {
    let p = pow(BigInt::from(d), s.unsigned_abs() as usize);
    if s >= 0 {
        BigRational::new(BigInt::one(), p)
    } else {
        BigRational::from_integer(p)
    }
}

impl<'a> ZetaView<'a> {
    pub fn new(multiset: &'a DimensionMultiset) -> Self {
        ZetaView { multiset }
    }

    /// Exact value of sum_d m_d * d^(-s) at an integer argument.  At
    /// s = 0 this is the class count, at s = -2 the group order.
    pub fn eval(&self, s: i64) -> BigRational {
        let mut acc = BigRational::zero();
        for (&d, &m) in &self.multiset.degrees {
            acc += BigRational::from_integer(BigInt::from(m)) * pow_term(d, s);
        }
        acc
    }
}

/// Sparse expansion sum_d c_d * u^(-log d): nonzero rational
/// coefficients keyed by the positive integer tag d, sorted by d.
/// Sorting by d sorts by exponent, since -log is monotone in d.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SemiPolynomial {
    pub terms: Vec<(u64, BigRational)>,
}

impl SemiPolynomial {
    /// Assembles terms, merging duplicate tags and dropping zeros.
    pub fn from_terms(raw: Vec<(u64, BigRational)>) -> Result<SemiPolynomial> {
        let mut merged: BTreeMap<u64, BigRational> = BTreeMap::new();
        for (d, c) in raw {
            if d == 0 {
                return Err(Error::BadParameter("semi-polynomial: tag must be positive".into()));
            }
            let entry = merged.entry(d).or_insert_with(BigRational::zero);
            *entry += c;
        }
        merged.retain(|_, c| !c.is_zero());
        Ok(SemiPolynomial { terms: merged.into_iter().collect() })
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Exact value at integer s under u = e^s, i.e. sum_d c_d * d^(-s).
    pub fn eval(&self, s: i64) -> BigRational {
        let mut acc = BigRational::zero();
        for (d, c) in &self.terms {
            acc += c * pow_term(*d, s);
        }
        acc
    }

    /// Twice the number of adjacent sign switches in the coefficient
    /// list; an upper bound on the distinct positive roots in u.
    pub fn descartes_bound(&self) -> u64 {
        let mut switches = 0;
        for w in self.terms.windows(2) {
            if w[0].1.is_positive() != w[1].1.is_positive() {
                switches += 1;
            }
        }
        2 * switches
    }
}

/// Termwise difference of the two degree sums in the u-variable
/// expansion; zero coefficients are dropped.
pub fn difference_semipoly(z1: &ZetaView, z2: &ZetaView) -> SemiPolynomial {
    let mut raw: Vec<(u64, BigRational)> = Vec::new();
    for (&d, &m) in &z1.multiset.degrees {
        raw.push((d, BigRational::from_integer(BigInt::from(m))));
    }
    for (&d, &m) in &z2.multiset.degrees {
        raw.push((d, -BigRational::from_integer(BigInt::from(m))));
    }
    SemiPolynomial::from_terms(raw).expect("degree tags are positive")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckMode {
    /// Compare the degree multisets directly.
    Direct,
    /// Sample both degree sums on a finite grid of even arguments.
    Prop21,
}

impl CheckMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            CheckMode::Direct => "direct",
            CheckMode::Prop21 => "prop21",
        }
    }
}

/// Outcome of an equivalence check: the distinct-degree counts of both
/// sides, the sampling grid used (empty in direct mode), the verdict,
/// and a witness argument where the sums differ when they do.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub n1: u64,
    pub n2: u64,
    pub mode: CheckMode,
    pub points: Vec<i64>,
    pub equal: bool,
    pub witness_s: Option<i64>,
}

impl Verdict {
    pub fn to_json(&self) -> Value {
        json!({
            "n1": self.n1,
            "n2": self.n2,
            "mode": self.mode.as_str(),
            "points": self.points,
            "equal": self.equal,
            "witness_s": self.witness_s,
        })
    }
}

/// Even arguments 0, 2, ..., 8k.  The difference expansion has at most
/// k positive-coefficient terms, hence at most 2k sign switches and 4k
/// distinct positive roots, so agreement on these 4k + 1 points forces
/// the sums, and with them the multisets, to coincide.
fn sampling_grid(k: u64) -> Vec<i64> {
    (0..=4 * k as i64).map(|i| 2 * i).collect()
}

/// An argument where the two sums provably differ: -2 when the orders
/// (values at -2) differ, otherwise the first differing grid point.
fn find_witness(z1: &ZetaView, z2: &ZetaView, k: u64) -> i64 {
    if z1.multiset.order != z2.multiset.order {
        return -2;
    }
    sampling_grid(k)
        .into_iter()
        .find(|&s| z1.eval(s) != z2.eval(s))
        .expect("unequal multisets differ somewhere on the sampling grid")
}

/// Decides equivalence of two degree multisets.  Direct mode compares
/// the multisets; sampling mode evaluates both sums exactly on the even
/// grid 0..8k with k = n1 and reports equality iff all values agree.
/// The sampled verdict is asserted to match the direct comparison.
pub fn check_equivalence(z1: &ZetaView, z2: &ZetaView, mode: CheckMode) -> Verdict {
    let n1 = z1.multiset.distinct_count() as u64;
    let n2 = z2.multiset.distinct_count() as u64;
    let direct = z1.multiset.degrees == z2.multiset.degrees;
    let (points, equal) = match mode {
        CheckMode::Direct => (Vec::new(), direct),
        CheckMode::Prop21 => {
            let grid = sampling_grid(n1);
            let sampled = grid.iter().all(|&s| z1.eval(s) == z2.eval(s));
            assert_eq!(sampled, direct, "sampled verdict must match direct comparison");
            (grid, sampled)
        }
    };
    let witness_s = if equal { None } else { Some(find_witness(z1, z2, n1)) };
    Verdict { n1, n2, mode, points, equal, witness_s }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertifiedSign {
    Negative,
    Positive,
}

/// Rational enclosure of d^(-s) at rational s with width about
/// 2^(-prec): brackets the b-th root of d^|a| by integer root
/// extraction on a power scaled by 2^(b*prec).
fn power_enclosure(d: u64, s: &BigRational, prec: u32) -> (BigRational, BigRational) {
    let one = || BigRational::one();
    if d == 1 {
        return (one(), one());
    }
    let e = -s.numer().clone();
    if e.is_zero() {
        return (one(), one());
    }
    let b = s.denom().to_u32().expect("probe arguments keep small denominators");
    assert!(b <= 1 << 14, "probe arguments keep small denominators");
    let emag = e.magnitude().to_usize().expect("probe arguments stay bounded");
    let w = pow(BigInt::from(d), emag);
    let scaled = w << (b as usize * prec as usize);
    let root = scaled.nth_root(b);
    let denom = BigInt::one() << prec as usize;
    let lo = BigRational::new(root.clone(), denom.clone());
    let hi = BigRational::new(root + BigInt::one(), denom);
    if e.is_negative() {
        (hi.recip(), lo.recip())
    } else {
        (lo, hi)
    }
}

/// Certifies the sign of the expansion at rational s by interval
/// evaluation, doubling the working precision until the enclosure
/// excludes zero; None once the cap is reached (value may be zero).
pub fn certified_sign(sp: &SemiPolynomial, s: &BigRational, max_prec: u32) -> Option<CertifiedSign> {
    if sp.terms.is_empty() {
        return None;
    }
    let mut prec = 64;
    loop {
        let mut lo = BigRational::zero();
        let mut hi = BigRational::zero();
        for (d, c) in &sp.terms {
            let (plo, phi) = power_enclosure(*d, s, prec);
            if c.is_positive() {
                lo += c * plo;
                hi += c * phi;
            } else {
                lo += c * phi;
                hi += c * plo;
            }
        }
        if lo.is_positive() {
            return Some(CertifiedSign::Positive);
        }
        if hi.is_negative() {
            return Some(CertifiedSign::Negative);
        }
        if prec >= max_prec {
            return None;
        }
        prec *= 2;
    }
}

/// Sign-change bisection on a bracketing grid: certifies signs at the
/// points lo, lo + 2^-halves, ..., hi, then refines every adjacent
/// sign change by bisection to the given depth.  Returns one bracket
/// per change; since each bracket contains at least one root and the
/// brackets are disjoint, the count never exceeds the true number of
/// distinct roots.  Points whose sign cannot be certified are skipped.
pub fn bracket_roots(
    sp: &SemiPolynomial,
    lo: i64,
    hi: i64,
    halves: u32,
    depth: u32,
    max_prec: u32,
) -> Vec<(BigRational, BigRational)> {
    assert!(lo < hi);
    let step = BigRational::new(BigInt::one(), BigInt::one() << halves as usize);
    let mut certified: Vec<(BigRational, CertifiedSign)> = Vec::new();
    let count = ((hi - lo) as usize) << halves as usize;
    for i in 0..=count {
        let s = BigRational::from_integer(BigInt::from(lo)) + BigRational::from_integer(BigInt::from(i as i64)) * &step;
        if let Some(sign) = certified_sign(sp, &s, max_prec) {
            certified.push((s, sign));
        }
    }
    let mut brackets = Vec::new();
    for w in certified.windows(2) {
        let (ref a, sa) = w[0];
        let (ref b, sb) = w[1];
        if sa == sb {
            continue;
        }
        let (mut a, mut b) = (a.clone(), b.clone());
        for _ in 0..depth {
            let mid = (&a + &b) / BigRational::from_integer(BigInt::from(2));
            match certified_sign(sp, &mid, max_prec) {
                Some(sm) if sm == sa => a = mid,
                Some(_) => b = mid,
                None => break,
            }
        }
        brackets.push((a, b));
    }
    brackets
}

/// All sums of at most `m` elements of `a` with repetition.  The result
/// size obeys |result| <= m * |a|^m and is capped by the sigma budget.
pub fn sigma_set(a: &[u64], m: u32, budgets: &Budgets) -> Result<BTreeSet<u64>> {
    if a.is_empty() || m == 0 {
        return Err(Error::BadParameter("sigma set: need a nonempty set and m >= 1".into()));
    }
    if a.contains(&0) {
        return Err(Error::BadParameter("sigma set: elements must be positive".into()));
    }
    let base: BTreeSet<u64> = a.iter().copied().collect();
    let mut result = base.clone();
    let mut frontier = base.clone();
    for _ in 1..m {
        let mut next = BTreeSet::new();
        for &s in &frontier {
            for &x in &base {
                let sum = s
                    .checked_add(x)
                    .ok_or_else(|| Error::BadParameter("sigma set: sum overflow".into()))?;
                next.insert(sum);
            }
        }
        result.extend(next.iter().copied());
        if result.len() as u64 > budgets.max_sigma_size {
            return Err(Error::SigmaBudget { size: result.len() as u64, budget: budgets.max_sigma_size });
        }
        frontier = next;
    }
    Ok(result)
}

/// Deterministic random degree multiset with at most `max_distinct`
/// distinct degrees drawn from 1..=max_degree.  Not group-realizable in
/// general; the order and class fields are the implied sums.
pub fn random_multiset(rng: &mut ChaCha8Rng, max_distinct: u64, max_degree: u64) -> DimensionMultiset {
    let t = 1 + rng.next_u64() % max_distinct;
    let mut degrees = BTreeMap::new();
    while (degrees.len() as u64) < t {
        let d = 1 + rng.next_u64() % max_degree;
        let m = 1 + rng.next_u64() % 999;
        degrees.entry(d).or_insert(m);
    }
    let order = degrees.iter().map(|(d, m)| m * d * d).sum();
    let classes = degrees.values().sum();
    DimensionMultiset { order, classes, degrees }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::rand_core::SeedableRng;

    fn multiset(pairs: &[(u64, u64)]) -> DimensionMultiset {
        let degrees: BTreeMap<u64, u64> = pairs.iter().copied().collect();
        let order = degrees.iter().map(|(d, m)| m * d * d).sum();
        let classes = degrees.values().sum();
        DimensionMultiset { order, classes, degrees }
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn evaluation_at_integer_arguments() {
        let heis = multiset(&[(1, 9), (3, 2)]);
        let z = ZetaView::new(&heis);
        assert_eq!(z.eval(2), rat(83, 9));
        assert_eq!(z.eval(4), rat(731, 81));
        assert_eq!(z.eval(0), rat(11, 1));
        assert_eq!(z.eval(-2), rat(27, 1));
        let abelian = multiset(&[(1, 60)]);
        let za = ZetaView::new(&abelian);
        for s in [-4, -1, 0, 3, 10] {
            assert_eq!(za.eval(s), rat(60, 1));
        }
    }

    #[test]
    fn difference_merges_and_drops_zeros() {
        let a = multiset(&[(2, 2)]);
        let b = multiset(&[(1, 1), (4, 1)]);
        let d = difference_semipoly(&ZetaView::new(&a), &ZetaView::new(&b));
        assert_eq!(
            d.terms,
            vec![(1, rat(-1, 1)), (2, rat(2, 1)), (4, rat(-1, 1))]
        );
        let same = difference_semipoly(&ZetaView::new(&a), &ZetaView::new(&a));
        assert!(same.is_empty());
        assert_eq!(d.eval(0), rat(0, 1));
        assert_eq!(d.eval(1), rat(-1, 4));
    }

    #[test]
    fn sign_switch_bounds() {
        let all_positive = SemiPolynomial::from_terms(vec![(1, rat(2, 1)), (3, rat(1, 2))]).unwrap();
        assert_eq!(all_positive.descartes_bound(), 0);
        let one_switch = SemiPolynomial::from_terms(vec![(1, rat(-1, 1)), (2, rat(1, 1))]).unwrap();
        assert_eq!(one_switch.descartes_bound(), 2);
        let two_switches =
            SemiPolynomial::from_terms(vec![(1, rat(-1, 1)), (2, rat(2, 1)), (4, rat(-1, 1))]).unwrap();
        assert_eq!(two_switches.descartes_bound(), 4);
        let empty = SemiPolynomial::from_terms(vec![(2, rat(1, 1)), (2, rat(-1, 1))]).unwrap();
        assert!(empty.is_empty());
        assert_eq!(empty.descartes_bound(), 0);
    }

    #[test]
    fn certified_signs_at_rational_arguments() {
        // -1 + 2*2^(-s) - 4^(-s) = -(2^(-s) - 1)^2: negative away from
        // s = 0, exactly zero at s = 0.
        let sp =
            SemiPolynomial::from_terms(vec![(1, rat(-1, 1)), (2, rat(2, 1)), (4, rat(-1, 1))]).unwrap();
        assert_eq!(certified_sign(&sp, &rat(1, 1), 1024), Some(CertifiedSign::Negative));
        assert_eq!(certified_sign(&sp, &rat(-3, 2), 1024), Some(CertifiedSign::Negative));
        assert_eq!(certified_sign(&sp, &rat(1, 3), 1024), Some(CertifiedSign::Negative));
        assert_eq!(certified_sign(&sp, &rat(0, 1), 1024), None);
        let up = SemiPolynomial::from_terms(vec![(1, rat(-1, 1)), (2, rat(2, 1))]).unwrap();
        assert_eq!(certified_sign(&up, &rat(1, 2), 1024), Some(CertifiedSign::Positive));
        assert_eq!(certified_sign(&up, &rat(3, 2), 1024), Some(CertifiedSign::Negative));
    }

    #[test]
    fn bisection_brackets_stay_under_the_bound() {
        // -1 + 2*2^(-s): single root at s = 1.  The root is rational, so
        // bisection stalls once a midpoint hits it, but the bracket stays.
        let single = SemiPolynomial::from_terms(vec![(1, rat(-1, 1)), (2, rat(2, 1))]).unwrap();
        let brackets = bracket_roots(&single, -8, 8, 1, 10, 1024);
        assert_eq!(brackets.len(), 1);
        assert!(brackets.len() as u64 <= single.descartes_bound());
        let (lo, hi) = &brackets[0];
        assert!(*lo < rat(1, 1) && rat(1, 1) < *hi);

        // 15 - 8*2^(-s) + 4^(-s) = (2^(-s) - 3)(2^(-s) - 5): roots at
        // s = -log2 3 and s = -log2 5, both irrational, so every
        // bisection midpoint certifies and the brackets shrink fully.
        let two = SemiPolynomial::from_terms(vec![(1, rat(15, 1)), (2, rat(-8, 1)), (4, rat(1, 1))]).unwrap();
        let brackets = bracket_roots(&two, -8, 8, 1, 8, 1024);
        assert_eq!(brackets.len(), 2);
        assert!(brackets.len() as u64 <= two.descartes_bound());
        let factor3 = SemiPolynomial::from_terms(vec![(1, rat(-3, 1)), (2, rat(1, 1))]).unwrap();
        let factor5 = SemiPolynomial::from_terms(vec![(1, rat(-5, 1)), (2, rat(1, 1))]).unwrap();
        for (factor, bracket) in [(&factor5, &brackets[0]), (&factor3, &brackets[1])] {
            let (lo, hi) = bracket;
            assert!(&(hi - lo) <= &rat(1, 256));
            let at_lo = certified_sign(factor, lo, 1024).unwrap();
            let at_hi = certified_sign(factor, hi, 1024).unwrap();
            assert_ne!(at_lo, at_hi);
        }

        // The squared difference never changes sign: no brackets, still
        // under its bound of 4.
        let touch =
            SemiPolynomial::from_terms(vec![(1, rat(-1, 1)), (2, rat(2, 1)), (4, rat(-1, 1))]).unwrap();
        let brackets = bracket_roots(&touch, -8, 8, 1, 10, 512);
        assert!(brackets.len() as u64 <= touch.descartes_bound());
        assert!(brackets.is_empty());
    }

    #[test]
    fn sampled_verdicts_match_direct_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0012);
        for trial in 0..500u32 {
            let a = random_multiset(&mut rng, 3, 64);
            let b = match trial % 4 {
                0 => a.clone(),
                1 => {
                    // Same degrees, shifted multiplicity.
                    let mut degrees = a.degrees.clone();
                    let (&d, &m) = degrees.iter().next().unwrap();
                    degrees.insert(d, m + 1);
                    let order = degrees.iter().map(|(d, m)| m * d * d).sum();
                    let classes = degrees.values().sum();
                    DimensionMultiset { order, classes, degrees }
                }
                _ => random_multiset(&mut rng, 3, 64),
            };
            let za = ZetaView::new(&a);
            let zb = ZetaView::new(&b);
            let direct = check_equivalence(&za, &zb, CheckMode::Direct);
            let sampled = check_equivalence(&za, &zb, CheckMode::Prop21);
            assert_eq!(direct.equal, sampled.equal);
            assert_eq!(sampled.points.len() as u64, 4 * sampled.n1 + 1);
            if !sampled.equal {
                let s = sampled.witness_s.expect("negative verdict carries a witness");
                assert_ne!(za.eval(s), zb.eval(s));
            }
        }
    }

    #[test]
    fn verdict_records_serialize_with_fixed_shape() {
        let a = multiset(&[(1, 1)]);
        let b = multiset(&[(1, 2)]);
        let v = check_equivalence(&ZetaView::new(&a), &ZetaView::new(&b), CheckMode::Direct);
        assert!(!v.equal);
        assert_eq!(v.witness_s, Some(-2));
        let j = v.to_json();
        let keys: Vec<&str> = j.as_object().unwrap().keys().map(|k| k.as_str()).collect();
        assert_eq!(keys, vec!["equal", "mode", "n1", "n2", "points", "witness_s"]);
        assert_eq!(j["mode"], "direct");
        assert_eq!(j["witness_s"], -2);

        let w = check_equivalence(&ZetaView::new(&a), &ZetaView::new(&b), CheckMode::Prop21);
        assert_eq!(w.points, vec![0, 2, 4, 6, 8]);
        assert!(!w.equal);

        // Equal orders but different degrees: the witness lies on the grid.
        let c = multiset(&[(2, 1)]);
        let d = multiset(&[(1, 4)]);
        assert_eq!(c.order, d.order);
        let v = check_equivalence(&ZetaView::new(&c), &ZetaView::new(&d), CheckMode::Prop21);
        assert!(!v.equal);
        assert_eq!(v.witness_s, Some(0));
    }

    #[test]
    fn sum_sets_with_repetition() {
        let budgets = Budgets::default();
        let s = sigma_set(&[1], 3, &budgets).unwrap();
        assert_eq!(s, BTreeSet::from([1, 2, 3]));
        let s = sigma_set(&[1, 2], 2, &budgets).unwrap();
        assert_eq!(s, BTreeSet::from([1, 2, 3, 4]));
        let s = sigma_set(&[2, 3, 5], 3, &budgets).unwrap();
        assert!(s.len() as u64 <= 3 * 27);
        assert!(s.contains(&15) && s.contains(&2) && s.contains(&9));
        assert!(!s.contains(&14) && !s.contains(&1));
        assert!(sigma_set(&[], 2, &budgets).is_err());
        assert!(sigma_set(&[0, 1], 2, &budgets).is_err());
        let tight = Budgets { max_sigma_size: 10, ..Budgets::default() };
        match sigma_set(&[1, 2, 3], 5, &tight) {
            Err(Error::SigmaBudget { size, budget }) => {
                assert!(size > budget);
                assert_eq!(budget, 10);
            }
            other => panic!("expected sigma budget error, got {other:?}"),
        }
    }
}
