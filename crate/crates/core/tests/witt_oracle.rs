//! Heavy cross-validation of the Witt-vector oracle against the integer
//! model Z/p^k realized as a width-1 Galois ring.

use repzeta_core::rings::witt::{derive_witt_polynomials, WittRing};
use repzeta_core::rings::RingDesc;

/// The derived structure polynomials must satisfy the ghost-component
/// identities symbolically, with every power re-expanded from scratch.
#[test]
fn ghost_identities_symbolic() {
    for p in [2u64, 3, 5] {
        for k in 1..=4usize {
            let set = derive_witt_polynomials(p, k).unwrap();
            assert!(
                set.ghost_identities_hold(),
                "ghost identity failed at p={p} k={k}"
            );
        }
    }
}

/// witt_to_padic must be a bijection onto Z/p^k that carries Witt addition
/// and multiplication to the Galois-ring operations, on every pair.
#[test]
fn padic_isomorphism_exhaustive() {
    for p in [2u64, 3, 5] {
        for k in [2usize, 3] {
            let witt = WittRing::new(p, 1, k).unwrap();
            let gr = RingDesc::galois_ring(p, k as u32, 1).unwrap();
            let pk = p.pow(k as u32);

            let all = witt.iter_all();
            assert_eq!(all.len(), pk as usize);
            let mut seen = vec![false; pk as usize];
            for w in &all {
                let v = witt.to_padic(w).unwrap() as usize;
                assert!(!seen[v], "collision at p={p} k={k}");
                seen[v] = true;
            }

            let mut out = vec![0u32; gr.width()];
            for a in &all {
                let pa = witt.to_padic(a).unwrap();
                for b in &all {
                    let pb = witt.to_padic(b).unwrap();
                    gr.add_into(&[pa as u32], &[pb as u32], &mut out);
                    let sum = witt.to_padic(&witt.add(a, b).unwrap()).unwrap();
                    assert_eq!(out[0] as u64, sum, "add mismatch p={p} k={k}");
                    gr.mul_into(&[pa as u32], &[pb as u32], &mut out);
                    let prod = witt.to_padic(&witt.mul(a, b).unwrap()).unwrap();
                    assert_eq!(out[0] as u64, prod, "mul mismatch p={p} k={k}");
                }
            }
        }
    }
}
