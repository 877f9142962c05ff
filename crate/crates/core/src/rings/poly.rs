//! Dense univariate polynomials over F_p, just enough machinery to find
//! irreducible moduli for field construction. Coefficients are little-endian
//! (index = degree) and always reduced mod p; leading coefficient nonzero.

/// Trims trailing zeros so the invariant deg(a) = a.len() - 1 holds.
fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn mul_mod_p(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// Product of two polynomials over F_p.
pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod_p(ai, bj, p)) % p;
        }
    }
    trim(&mut out);
    out
}

/// Remainder of a modulo m over F_p; m must be nonzero.
pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    assert!(!m.is_empty(), "division by the zero polynomial");
    let mut r: Vec<u64> = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = inv_mod_p(m[dm], p);
    while r.len() > dm {
        let dr = r.len() - 1;
        let c = mul_mod_p(r[dr], lead_inv, p);
        if c != 0 {
            for (i, &mi) in m.iter().enumerate() {
                let idx = dr - dm + i;
                r[idx] = (r[idx] + p - mul_mod_p(c, mi, p) % p) % p;
            }
        }
        r.pop();
        trim(&mut r);
    }
    r
}

/// Monic gcd of a and b over F_p.
pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x: Vec<u64> = a.to_vec();
    let mut y: Vec<u64> = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    if let Some(&lead) = x.last() {
        let li = inv_mod_p(lead, p);
        for c in &mut x {
            *c = mul_mod_p(*c, li, p);
        }
    }
    x
}

/// x^e modulo m over F_p by square and multiply.
pub fn x_pow_mod(e: u128, m: &[u64], p: u64) -> Vec<u64> {
    let mut result = vec![1u64];
    let mut base = rem(&[0, 1], m, p);
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = rem(&mul(&result, &base, p), m, p);
        }
        base = rem(&mul(&base, &base, p), m, p);
        e >>= 1;
    }
    result
}

/// base(x)^e modulo m over F_p by square and multiply.
pub fn pow_poly_mod(base: &[u64], e: u128, m: &[u64], p: u64) -> Vec<u64> {
    let mut result = vec![1u64];
    let mut b = rem(base, m, p);
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = rem(&mul(&result, &b, p), m, p);
        }
        b = rem(&mul(&b, &b, p), m, p);
        e >>= 1;
    }
    result
}

/// Quotient and remainder of a divided by m over F_p; m must be nonzero.
pub fn divrem(a: &[u64], m: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    assert!(!m.is_empty(), "division by the zero polynomial");
    let mut r: Vec<u64> = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    if r.len() <= dm {
        return (Vec::new(), r);
    }
    let lead_inv = inv_mod_p(m[dm], p);
    let mut q = vec![0u64; r.len() - dm];
    while r.len() > dm {
        let dr = r.len() - 1;
        let c = mul_mod_p(r[dr], lead_inv, p);
        q[dr - dm] = c;
        if c != 0 {
            for (i, &mi) in m.iter().enumerate() {
                let idx = dr - dm + i;
                r[idx] = (r[idx] + p - mul_mod_p(c, mi, p)) % p;
            }
        }
        r.pop();
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

/// Inverse of a nonzero residue mod prime p.
pub fn inv_mod_p(a: u64, p: u64) -> u64 {
    pow_mod_p(a % p, p - 2, p)
}

pub fn pow_mod_p(a: u64, mut e: u64, p: u64) -> u64 {
    let mut base = a % p;
    let mut acc = 1u64 % p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod_p(acc, base, p);
        }
        base = mul_mod_p(base, base, p);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, valid for all u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    // This fixed base set decides primality for every n < 2^64.
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u128(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pow_mod_u128(a: u64, mut e: u64, n: u64) -> u64 {
    let mut base = a as u128;
    let mut acc = 1u128;
    let n = n as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % n;
        }
        base = base * base % n;
        e >>= 1;
    }
    acc as u64
}

/// Is the monic polynomial x^f + sum c_i x^i irreducible over F_p?
/// `low` holds c_0..c_{f-1}. Uses the standard criterion: x^{p^f} = x mod m
/// and gcd(x^{p^{f/r}} - x, m) = 1 for every prime r dividing f.
pub fn is_irreducible(low: &[u64], p: u64) -> bool {
    let f = low.len();
    assert!(f >= 1);
    let mut m: Vec<u64> = low.to_vec();
    m.push(1);
    let q_f = (p as u128).pow(f as u32);
    // x^{p^f} - x must vanish mod m.
    let mut t = x_pow_mod(q_f, &m, p);
    // subtract x
    if t.len() < 2 {
        t.resize(2, 0);
    }
    t[1] = (t[1] + p - 1) % p;
    trim(&mut t);
    if !t.is_empty() {
        return false;
    }
    let mut rprimes = Vec::new();
    let mut n = f as u64;
    let mut r = 2u64;
    while r * r <= n {
        if n % r == 0 {
            rprimes.push(r);
            while n % r == 0 {
                n /= r;
            }
        }
        r += 1;
    }
    if n > 1 {
        rprimes.push(n);
    }
    for r in rprimes {
        let e = (p as u128).pow((f as u64 / r) as u32);
        let mut t = x_pow_mod(e, &m, p);
        if t.len() < 2 {
            t.resize(2, 0);
        }
        t[1] = (t[1] + p - 1) % p;
        trim(&mut t);
        let g = gcd(&t, &m, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// The lexicographically smallest monic irreducible of degree f over F_p,
/// returned as its low coefficients c_0..c_{f-1}. Candidates are compared by
/// the coefficient vector (c_0, ..., c_{f-1}), position 0 first.
pub fn smallest_irreducible(p: u64, f: usize) -> Vec<u64> {
    assert!(f >= 1);
    if f == 1 {
        // x itself: every monic degree-1 polynomial is irreducible.
        return vec![0];
    }
    let mut c = vec![0u64; f];
    loop {
        if is_irreducible(&c, p) {
            return c;
        }
        // Advance to the lexicographic successor: bump the last coordinate.
        let mut i = f;
        loop {
            assert!(i > 0, "no irreducible of degree {f} over F_{p}");
            i -= 1;
            c[i] += 1;
            if c[i] < p {
                break;
            }
            c[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_of_coprime_is_one() {
        // (x+1) and (x+2) over F_5
        let g = gcd(&[1, 1], &[2, 1], 5);
        assert_eq!(g, vec![1]);
    }

    #[test]
    fn rem_reduces_squares() {
        // x^2 mod (x^2 + x + 1) over F_2 is x + 1
        let r = rem(&[0, 0, 1], &[1, 1, 1], 2);
        assert_eq!(r, vec![1, 1]);
    }

    #[test]
    fn known_small_irreducibles() {
        assert!(is_irreducible(&[1, 1], 2)); // x^2+x+1
        assert!(!is_irreducible(&[1, 0], 2)); // x^2+1 = (x+1)^2
        assert!(!is_irreducible(&[0, 1], 2)); // x^2+x = x(x+1)
        assert!(is_irreducible(&[1, 0, 1], 2)); // x^3+x^2+1
        assert!(is_irreducible(&[1, 1, 0], 2)); // x^3+x+1
        assert!(!is_irreducible(&[1, 1, 1], 2)); // x^3+x^2+x+1 has root 1
    }

    #[test]
    fn smallest_irreducible_matches_hand_checks() {
        // F_4: the only irreducible quadratic over F_2.
        assert_eq!(smallest_irreducible(2, 2), vec![1, 1]);
        // F_8: (1,0,1) = x^3+x^2+1 precedes (1,1,0) = x^3+x+1 in vector order.
        assert_eq!(smallest_irreducible(2, 3), vec![1, 0, 1]);
        // F_9: scan (0,0), (0,1), (0,2), (1,0): x^2+1 has no root in F_3.
        assert_eq!(smallest_irreducible(3, 2), vec![1, 0]);
        // F_25: (1,0) = x^2+1 has root 2; (1,1) = x^2+x+1 has discriminant
        // -3 = 2, not a square mod 5, so it is the first irreducible.
        assert_eq!(smallest_irreducible(5, 2), vec![1, 1]);
    }

    #[test]
    fn smallest_irreducible_really_is_smallest() {
        // Exhaustive check at p=3, f=3: nothing lexicographically below the
        // returned vector is irreducible.
        let best = smallest_irreducible(3, 3);
        let mut c = vec![0u64; 3];
        while c < best {
            assert!(!is_irreducible(&c, 3), "missed smaller irreducible {c:?}");
            let mut i = 3;
            loop {
                i -= 1;
                c[i] += 1;
                if c[i] < 3 {
                    break;
                }
                c[i] = 0;
            }
        }
    }

    #[test]
    fn prime_test_agrees_with_trial_division() {
        for n in 0u64..2000 {
            let naive = n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(is_prime_u64(n), naive, "disagree at {n}");
        }
        assert!(is_prime_u64(2_147_483_647)); // 2^31 - 1
        assert!(!is_prime_u64(3_215_031_751)); // strong pseudoprime to 2,3,5,7
    }
}
