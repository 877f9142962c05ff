//! Flat matrix arithmetic over any ring descriptor. An n x n matrix over a
//! ring of digit width w is a slice of n*n*w digits, row-major: entry (i,j)
//! occupies [(i*n + j)*w .. (i*n + j + 1)*w]. This layout makes the raw
//! digit slice the canonical matrix encoding, so slice comparison is the
//! canonical order and slices can be hashed or packed directly.

use crate::rings::RingDesc;
use crate::{Error, Result};

const INLINE: usize = 32;

/// Fixed-capacity scratch for one ring element; heap fallback for wide rings.
struct ElemBuf {
    inline: [u32; INLINE],
    heap: Vec<u32>,
    w: usize,
}

impl ElemBuf {
    fn new(w: usize) -> ElemBuf {
        ElemBuf {
            inline: [0; INLINE],
            heap: if w > INLINE { vec![0; w] } else { Vec::new() },
            w,
        }
    }

    fn get(&mut self) -> &mut [u32] {
        if self.w <= INLINE {
            &mut self.inline[..self.w]
        } else {
            &mut self.heap
        }
    }
}

#[inline]
pub fn mat_width(ring: &RingDesc, n: usize) -> usize {
    n * n * ring.width()
}

#[inline]
pub fn entry<'a>(a: &'a [u32], n: usize, w: usize, i: usize, j: usize) -> &'a [u32] {
    &a[(i * n + j) * w..(i * n + j + 1) * w]
}

pub fn identity_into(ring: &RingDesc, n: usize, out: &mut [u32]) {
    let w = ring.width();
    out.fill(0);
    for i in 0..n {
        ring.one_into(&mut out[(i * n + i) * w..(i * n + i + 1) * w]);
    }
}

pub fn is_identity(ring: &RingDesc, n: usize, a: &[u32]) -> bool {
    let w = ring.width();
    let mut one = ElemBuf::new(w);
    ring.one_into(one.get());
    for i in 0..n {
        for j in 0..n {
            let e = entry(a, n, w, i, j);
            if i == j {
                if e != &*one.get() {
                    return false;
                }
            } else if !ring.is_zero(e) {
                return false;
            }
        }
    }
    true
}

/// out = a * b. `out` must not alias `a` or `b`.
pub fn mul_into(ring: &RingDesc, n: usize, a: &[u32], b: &[u32], out: &mut [u32]) {
    let w = ring.width();
    debug_assert_eq!(out.len(), n * n * w);
    let mut acc = ElemBuf::new(w);
    let mut prod = ElemBuf::new(w);
    let mut tmp = ElemBuf::new(w);
    for i in 0..n {
        for j in 0..n {
            let acc = acc.get();
            acc.fill(0);
            for k in 0..n {
                ring.mul_into(entry(a, n, w, i, k), entry(b, n, w, k, j), prod.get());
                tmp.get().copy_from_slice(acc);
                ring.add_into(tmp.get(), prod.get(), acc);
            }
            out[(i * n + j) * w..(i * n + j + 1) * w].copy_from_slice(acc);
        }
    }
}

/// Entrywise difference, used for unipotent shifts. `out` may alias `a`.
pub fn sub_into(ring: &RingDesc, n: usize, a: &[u32], b: &[u32], out: &mut [u32]) {
    let w = ring.width();
    let mut tmp = ElemBuf::new(w);
    for e in 0..n * n {
        tmp.get().copy_from_slice(&a[e * w..(e + 1) * w]);
        ring.sub_into(tmp.get(), &b[e * w..(e + 1) * w], &mut out[e * w..(e + 1) * w]);
    }
}

pub fn add_into(ring: &RingDesc, n: usize, a: &[u32], b: &[u32], out: &mut [u32]) {
    let w = ring.width();
    let mut tmp = ElemBuf::new(w);
    for e in 0..n * n {
        tmp.get().copy_from_slice(&a[e * w..(e + 1) * w]);
        ring.add_into(tmp.get(), &b[e * w..(e + 1) * w], &mut out[e * w..(e + 1) * w]);
    }
}

pub fn is_zero_mat(ring: &RingDesc, n: usize, a: &[u32]) -> bool {
    let w = ring.width();
    (0..n * n).all(|e| ring.is_zero(&a[e * w..(e + 1) * w]))
}

/// Determinant. Specialized for n <= 3 (these are the hot filter paths);
/// Laplace expansion along the first row for larger n.
pub fn det_into(ring: &RingDesc, n: usize, a: &[u32], out: &mut [u32]) {
    let w = ring.width();
    match n {
        0 => ring.one_into(out),
        1 => out.copy_from_slice(&a[..w]),
        2 => {
            let mut p1 = ElemBuf::new(w);
            let mut p2 = ElemBuf::new(w);
            ring.mul_into(entry(a, 2, w, 0, 0), entry(a, 2, w, 1, 1), p1.get());
            ring.mul_into(entry(a, 2, w, 0, 1), entry(a, 2, w, 1, 0), p2.get());
            ring.sub_into(p1.get(), p2.get(), out);
        }
        3 => {
            // Cofactor expansion along row 0 with inline 2x2 minors.
            let mut minor = ElemBuf::new(w);
            let mut term = ElemBuf::new(w);
            let mut acc = ElemBuf::new(w);
            let mut tmp = ElemBuf::new(w);
            acc.get().fill(0);
            for j in 0..3 {
                let (c0, c1) = match j {
                    0 => (1, 2),
                    1 => (0, 2),
                    _ => (0, 1),
                };
                let mut p1 = ElemBuf::new(w);
                let mut p2 = ElemBuf::new(w);
                ring.mul_into(entry(a, 3, w, 1, c0), entry(a, 3, w, 2, c1), p1.get());
                ring.mul_into(entry(a, 3, w, 1, c1), entry(a, 3, w, 2, c0), p2.get());
                ring.sub_into(p1.get(), p2.get(), minor.get());
                ring.mul_into(entry(a, 3, w, 0, j), minor.get(), term.get());
                tmp.get().copy_from_slice(acc.get());
                if j == 1 {
                    ring.sub_into(tmp.get(), term.get(), acc.get());
                } else {
                    ring.add_into(tmp.get(), term.get(), acc.get());
                }
            }
            out.copy_from_slice(acc.get());
        }
        _ => {
            let mut acc = vec![0u32; w];
            let mut term = vec![0u32; w];
            let mut tmp = vec![0u32; w];
            let mut sub = vec![0u32; (n - 1) * (n - 1) * w];
            let mut subdet = vec![0u32; w];
            for j in 0..n {
                // minor deleting row 0, column j
                let mut idx = 0;
                for i in 1..n {
                    for c in 0..n {
                        if c == j {
                            continue;
                        }
                        sub[idx * w..(idx + 1) * w].copy_from_slice(entry(a, n, w, i, c));
                        idx += 1;
                    }
                }
                det_into(ring, n - 1, &sub, &mut subdet);
                ring.mul_into(entry(a, n, w, 0, j), &subdet, &mut term);
                tmp.copy_from_slice(&acc);
                if j % 2 == 0 {
                    ring.add_into(&tmp, &term, &mut acc);
                } else {
                    ring.sub_into(&tmp, &term, &mut acc);
                }
            }
            out.copy_from_slice(&acc);
        }
    }
}

/// Matrix inverse. Over the local rings used here a matrix is invertible
/// exactly when its determinant is a unit. n = 1, 2 use the adjugate (hot
/// path); larger n uses Gauss-Jordan elimination with unit-pivot search,
/// which succeeds precisely for invertible matrices over a local ring.
pub fn inv_into(ring: &RingDesc, n: usize, a: &[u32], out: &mut [u32]) -> Result<()> {
    let w = ring.width();
    match n {
        1 => ring.inv_into(&a[..w], out),
        2 => {
            let mut d = ElemBuf::new(w);
            let mut dinv = ElemBuf::new(w);
            let mut t = ElemBuf::new(w);
            det_into(ring, 2, a, d.get());
            ring.inv_into(d.get(), dinv.get())?;
            // adjugate: [d, -b; -c, a]
            ring.mul_into(entry(a, 2, w, 1, 1), dinv.get(), &mut out[0..w]);
            ring.mul_into(entry(a, 2, w, 0, 1), dinv.get(), t.get());
            ring.neg_into(t.get(), &mut out[w..2 * w]);
            ring.mul_into(entry(a, 2, w, 1, 0), dinv.get(), t.get());
            ring.neg_into(t.get(), &mut out[2 * w..3 * w]);
            ring.mul_into(entry(a, 2, w, 0, 0), dinv.get(), &mut out[3 * w..4 * w]);
            Ok(())
        }
        _ => gauss_jordan_inv(ring, n, a, out),
    }
}

fn gauss_jordan_inv(ring: &RingDesc, n: usize, a: &[u32], out: &mut [u32]) -> Result<()> {
    let w = ring.width();
    let mut left = a.to_vec();
    identity_into(ring, n, out);
    let mut pinv = vec![0u32; w];
    let mut factor = vec![0u32; w];
    let mut prod = vec![0u32; w];
    let mut tmp = vec![0u32; w];

    let row_scale = |m: &mut [u32], r: usize, c: &[u32], prod: &mut [u32], tmp: &mut [u32], ring: &RingDesc| {
        for j in 0..n {
            let s = (r * n + j) * w;
            tmp.copy_from_slice(&m[s..s + w]);
            ring.mul_into(tmp, c, prod);
            m[s..s + w].copy_from_slice(prod);
        }
    };
    // row r -= f * row src
    let row_axpy = |m: &mut [u32], r: usize, src: usize, f: &[u32], prod: &mut [u32], tmp: &mut [u32], ring: &RingDesc| {
        for j in 0..n {
            let s = (r * n + j) * w;
            let t = (src * n + j) * w;
            let srcval: Vec<u32> = m[t..t + w].to_vec();
            ring.mul_into(f, &srcval, prod);
            tmp.copy_from_slice(&m[s..s + w]);
            ring.sub_into(tmp, prod, &mut m[s..s + w]);
        }
    };

    for col in 0..n {
        let pivot = (col..n).find(|&r| ring.is_unit(entry(&left, n, w, r, col)));
        let pivot = match pivot {
            Some(r) => r,
            None => return Err(Error::DivisionByNonUnit),
        };
        if pivot != col {
            for j in 0..n {
                let (s, t) = ((pivot * n + j) * w, (col * n + j) * w);
                for d in 0..w {
                    left.swap(s + d, t + d);
                    out.swap(s + d, t + d);
                }
            }
        }
        ring.inv_into(entry(&left, n, w, col, col), &mut pinv)?;
        row_scale(&mut left, col, &pinv, &mut prod, &mut tmp, ring);
        row_scale(out, col, &pinv, &mut prod, &mut tmp, ring);
        for r in 0..n {
            if r == col {
                continue;
            }
            factor.copy_from_slice(entry(&left, n, w, r, col));
            if ring.is_zero(&factor) {
                continue;
            }
            row_axpy(&mut left, r, col, &factor, &mut prod, &mut tmp, ring);
            row_axpy(out, r, col, &factor, &mut prod, &mut tmp, ring);
        }
    }
    Ok(())
}

/// True when a^n = 0, the strict nilpotency used by the truncated exp/log
/// series (strictly upper triangular matrices and their conjugates).
pub fn is_nilpotent(ring: &RingDesc, n: usize, a: &[u32]) -> bool {
    let w = ring.width();
    let mut pow = a.to_vec();
    let mut next = vec![0u32; n * n * w];
    for _ in 1..n {
        if is_zero_mat(ring, n, &pow) {
            return true;
        }
        mul_into(ring, n, &pow, a, &mut next);
        std::mem::swap(&mut pow, &mut next);
    }
    is_zero_mat(ring, n, &pow)
}

/// True when (u - I)^n = 0.
pub fn is_unipotent(ring: &RingDesc, n: usize, u: &[u32]) -> bool {
    let w = ring.width();
    let mut shifted = u.to_vec();
    let mut id = vec![0u32; n * n * w];
    identity_into(ring, n, &mut id);
    let copy = shifted.clone();
    sub_into(ring, n, &copy, &id, &mut shifted);
    is_nilpotent(ring, n, &shifted)
}
