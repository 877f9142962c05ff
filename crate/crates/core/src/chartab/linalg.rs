//! Dense linear algebra over F_l for the class-algebra eigenvector method:
//! Montgomery arithmetic, Hessenberg characteristic polynomials, reduced
//! row echelon kernels, and root extraction for fully split polynomials.

use rand_chacha::rand_core::RngCore;
use rand_chacha::ChaCha8Rng;

use crate::rings::poly;

/// Montgomery context for an odd prime l < 2^63. Values are kept in
/// Montgomery form (x * 2^64 mod l) throughout the dense kernels.
pub(crate) struct Fl {
    pub l: u64,
    ninv: u64,
    r2: u64,
    pub one: u64,
}

impl Fl {
    pub fn new(l: u64) -> Fl {
        assert!(l & 1 == 1 && l > 2 && l < 1 << 63);
        // Newton lifting: inv = l^{-1} mod 2^64 (l odd makes l its own
        // inverse mod 8; five doublings reach 2^64).
        let mut inv = l;
        for _ in 0..5 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(l.wrapping_mul(inv)));
        }
        let ninv = inv.wrapping_neg();
        let r = ((1u128 << 64) % l as u128) as u64;
        let r2 = ((r as u128 * r as u128) % l as u128) as u64;
        let fl = Fl { l, ninv, r2, one: 0 };
        let one = fl.to(1);
        Fl { one, ..fl }
    }

    #[inline]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.ninv);
        let s = ((t + m as u128 * self.l as u128) >> 64) as u64;
        if s >= self.l {
            s - self.l
        } else {
            s
        }
    }

    #[inline]
    pub fn to(&self, x: u64) -> u64 {
        self.redc((x % self.l) as u128 * self.r2 as u128)
    }

    #[inline]
    pub fn from(&self, a: u64) -> u64 {
        self.redc(a as u128)
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.l {
            s - self.l
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.l - b
        }
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a;
        let mut acc = self.one;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(a != 0);
        self.pow(a, self.l - 2)
    }
}

/// Characteristic polynomial det(xI - M) of a d x d matrix in Montgomery
/// form, via similarity reduction to upper Hessenberg and the leading-minor
/// recurrence. Returns plain-residue coefficients, ascending, monic.
pub(crate) fn charpoly(fl: &Fl, mut h: Vec<u64>, d: usize) -> Vec<u64> {
    assert_eq!(h.len(), d * d);
    for j in 0..d.saturating_sub(2) {
        let pivot = ((j + 1)..d).find(|&i| h[i * d + j] != 0);
        let Some(pv) = pivot else { continue };
        if pv != j + 1 {
            for c in 0..d {
                h.swap(pv * d + c, (j + 1) * d + c);
            }
            for r in 0..d {
                h.swap(r * d + pv, r * d + j + 1);
            }
        }
        let pinv = fl.inv(h[(j + 1) * d + j]);
        for i in (j + 2)..d {
            let f = fl.mul(h[i * d + j], pinv);
            if f == 0 {
                continue;
            }
            // similarity pair: row_i -= f * row_{j+1}, col_{j+1} += f * col_i
            for c in j..d {
                let t = fl.mul(f, h[(j + 1) * d + c]);
                h[i * d + c] = fl.sub(h[i * d + c], t);
            }
            for r in 0..d {
                let t = fl.mul(f, h[r * d + i]);
                h[r * d + j + 1] = fl.add(h[r * d + j + 1], t);
            }
        }
    }

    // p_0 = 1; p_m = (x - h_mm) p_{m-1} - sum_{i<m} h_im (prod subdiag) p_{i-1}
    let mut polys: Vec<Vec<u64>> = vec![vec![fl.one]];
    for m in 1..=d {
        let pm1 = &polys[m - 1];
        let mut poly = vec![0u64; pm1.len() + 1];
        for (t, &c) in pm1.iter().enumerate() {
            poly[t + 1] = c;
        }
        let hmm = h[(m - 1) * d + (m - 1)];
        if hmm != 0 {
            for (t, &c) in pm1.iter().enumerate() {
                poly[t] = fl.sub(poly[t], fl.mul(hmm, c));
            }
        }
        let mut beta = fl.one;
        for i in (1..m).rev() {
            beta = fl.mul(beta, h[i * d + (i - 1)]);
            if beta == 0 {
                break;
            }
            let coeff = fl.mul(h[(i - 1) * d + (m - 1)], beta);
            if coeff != 0 {
                let pi = &polys[i - 1];
                for t in 0..pi.len() {
                    poly[t] = fl.sub(poly[t], fl.mul(coeff, pi[t]));
                }
            }
        }
        polys.push(poly);
    }
    polys.pop().unwrap().into_iter().map(|c| fl.from(c)).collect()
}

/// In-place reduced row echelon form of a rows x cols matrix in Montgomery
/// form; returns the pivot column indices (one per nonzero row).
pub(crate) fn rref(fl: &Fl, mat: &mut [u64], rows: usize, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut rank = 0usize;
    for col in 0..cols {
        let Some(pr) = (rank..rows).find(|&r| mat[r * cols + col] != 0) else {
            continue;
        };
        if pr != rank {
            for c in 0..cols {
                mat.swap(pr * cols + c, rank * cols + c);
            }
        }
        let pinv = fl.inv(mat[rank * cols + col]);
        for c in col..cols {
            mat[rank * cols + c] = fl.mul(mat[rank * cols + c], pinv);
        }
        for r in 0..rows {
            if r == rank {
                continue;
            }
            let f = mat[r * cols + col];
            if f == 0 {
                continue;
            }
            for c in col..cols {
                let t = fl.mul(f, mat[rank * cols + c]);
                mat[r * cols + c] = fl.sub(mat[r * cols + c], t);
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows {
            break;
        }
    }
    pivots
}

/// Basis of the null space of a d x d matrix in Montgomery form, one vector
/// per free column of its RREF.
pub(crate) fn kernel(fl: &Fl, mat: &[u64], d: usize) -> Vec<Vec<u64>> {
    let mut work = mat.to_vec();
    let pivots = rref(fl, &mut work, d, d);
    let mut is_pivot = vec![false; d];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for f in 0..d {
        if is_pivot[f] {
            continue;
        }
        let mut v = vec![0u64; d];
        v[f] = fl.one;
        for (row, &p) in pivots.iter().enumerate() {
            v[p] = fl.sub(0, work[row * d + f]);
        }
        basis.push(v);
    }
    basis
}

/// All roots, ascending, of a monic squarefree product of linear factors
/// over F_l (plain residues). Splits recursively with random quadratic
/// residue tests; the output is sorted, so the result is independent of the
/// random path. Returns None if a factor refuses to split (the input was
/// not a product of distinct linear factors).
pub(crate) fn linear_roots(g: &[u64], l: u64, rng: &mut ChaCha8Rng) -> Option<Vec<u64>> {
    let mut out = Vec::new();
    if !split_roots(g.to_vec(), l, rng, &mut out) {
        return None;
    }
    out.sort_unstable();
    Some(out)
}

fn split_roots(g: Vec<u64>, l: u64, rng: &mut ChaCha8Rng, out: &mut Vec<u64>) -> bool {
    if g.len() <= 1 {
        return true;
    }
    if g.len() == 2 {
        // monic x + c: root is -c
        out.push((l - g[0]) % l);
        return true;
    }
    // each random shift splits a genuine product of distinct linear factors
    // with probability about 1/2, so 128 misses means bad input
    for _ in 0..128 {
        let a = rng.next_u64() % l;
        // h = (x + a)^{(l-1)/2} mod g; gcd(h - 1, g) collects the roots r
        // with r + a a nonzero quadratic residue
        let mut h = poly::pow_poly_mod(&[a, 1], ((l - 1) / 2) as u128, &g, l);
        if h.is_empty() {
            h = vec![0];
        }
        h[0] = (h[0] + l - 1) % l;
        let d = poly::gcd(&h, &g, l);
        if d.len() > 1 && d.len() < g.len() {
            let (q, r) = poly::divrem(&g, &d, l);
            debug_assert!(r.is_empty(), "factor must divide exactly");
            return split_roots(d, l, rng, out) && split_roots(q, l, rng, out);
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::rand_core::SeedableRng;

    /// Determinant by plain Gaussian elimination, for cross-checking.
    fn det_mont(fl: &Fl, mat: &[u64], d: usize) -> u64 {
        let mut m = mat.to_vec();
        let mut det = fl.one;
        for col in 0..d {
            let Some(pr) = (col..d).find(|&r| m[r * d + col] != 0) else {
                return 0;
            };
            if pr != col {
                for c in 0..d {
                    m.swap(pr * d + c, col * d + c);
                }
                det = fl.sub(0, det);
            }
            det = fl.mul(det, m[col * d + col]);
            let pinv = fl.inv(m[col * d + col]);
            for r in col + 1..d {
                let f = fl.mul(m[r * d + col], pinv);
                for c in col..d {
                    let t = fl.mul(f, m[col * d + c]);
                    m[r * d + c] = fl.sub(m[r * d + c], t);
                }
            }
        }
        det
    }

    #[test]
    fn montgomery_matches_plain_arithmetic() {
        let l = 1_000_000_007u64;
        let fl = Fl::new(l);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let a = rng.next_u64() % l;
            let b = rng.next_u64() % l;
            let am = fl.to(a);
            let bm = fl.to(b);
            assert_eq!(fl.from(fl.mul(am, bm)), ((a as u128 * b as u128) % l as u128) as u64);
            assert_eq!(fl.from(fl.add(am, bm)), (a + b) % l);
            assert_eq!(fl.from(fl.sub(am, bm)), (a + l - b) % l);
            if a != 0 {
                assert_eq!(fl.mul(am, fl.inv(am)), fl.one);
            }
        }
        assert_eq!(fl.from(fl.one), 1);
    }

    #[test]
    fn charpoly_agrees_with_determinant_at_points() {
        let l = 10007u64;
        let fl = Fl::new(l);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for d in 1..=6usize {
            for _ in 0..10 {
                let mat: Vec<u64> = (0..d * d).map(|_| fl.to(rng.next_u64() % l)).collect();
                let cp = charpoly(&fl, mat.clone(), d);
                assert_eq!(cp.len(), d + 1);
                assert_eq!(cp[d], 1, "monic");
                for c in 0..=d as u64 {
                    // det(cI - M) vs charpoly(c)
                    let cm = fl.to(c);
                    let mut shifted = mat.clone();
                    for i in 0..d {
                        shifted[i * d + i] = fl.sub(cm, mat[i * d + i]);
                    }
                    for i in 0..d {
                        for j in 0..d {
                            if i != j {
                                shifted[i * d + j] = fl.sub(0, mat[i * d + j]);
                            }
                        }
                    }
                    let dv = fl.from(det_mont(&fl, &shifted, d));
                    let mut pv = 0u64;
                    for &coef in cp.iter().rev() {
                        pv = ((pv as u128 * c as u128 + coef as u128) % l as u128) as u64;
                    }
                    assert_eq!(pv, dv, "d={d} c={c}");
                }
            }
        }
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let l = 101u64;
        let fl = Fl::new(l);
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for d in 2..=6usize {
            for _ in 0..20 {
                // build a singular matrix: random with a repeated row
                let mut mat: Vec<u64> = (0..d * d).map(|_| fl.to(rng.next_u64() % l)).collect();
                for c in 0..d {
                    mat[(d - 1) * d + c] = mat[c];
                }
                let basis = kernel(&fl, &mat, d);
                assert!(!basis.is_empty());
                for v in &basis {
                    for r in 0..d {
                        let mut acc = 0u64;
                        for c in 0..d {
                            acc = fl.add(acc, fl.mul(mat[r * d + c], v[c]));
                        }
                        assert_eq!(acc, 0, "kernel vector fails row {r}");
                    }
                }
            }
        }
    }

    #[test]
    fn rank_nullity_on_random_matrices() {
        let l = 97u64;
        let fl = Fl::new(l);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for d in 1..=6usize {
            for _ in 0..20 {
                let mat: Vec<u64> = (0..d * d).map(|_| fl.to(rng.next_u64() % 3)).collect();
                let mut work = mat.clone();
                let rank = rref(&fl, &mut work, d, d).len();
                let nullity = kernel(&fl, &mat, d).len();
                assert_eq!(rank + nullity, d);
            }
        }
    }

    #[test]
    fn roots_of_split_polynomials() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let l = 10009u64;
        // (x - 2)(x - 5)(x - 7)(x - 9000)
        let mut g = vec![1u64];
        for r in [2u64, 5, 7, 9000] {
            let mut next = vec![0u64; g.len() + 1];
            for (t, &c) in g.iter().enumerate() {
                next[t + 1] = (next[t + 1] + c) % l;
                next[t] = (next[t] + (l - r) * c % l) % l;
            }
            g = next;
        }
        assert_eq!(linear_roots(&g, l, &mut rng), Some(vec![2, 5, 7, 9000]));
        // single linear factor and empty cases
        assert_eq!(linear_roots(&[l - 3, 1], l, &mut rng), Some(vec![3]));
        assert_eq!(linear_roots(&[1], l, &mut rng), Some(vec![]));
        // an irreducible quadratic x^2 - c, c a nonresidue, refuses to split
        let c = (2..l).find(|&c| poly::pow_mod_p(c, (l - 1) / 2, l) == l - 1).unwrap();
        let bad = vec![l - c, 0, 1];
        assert_eq!(linear_roots(&bad, l, &mut rng), None);
    }
}
