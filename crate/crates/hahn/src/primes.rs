//! Prime number utilities: the k-th prime (0-indexed) and squarefree
//! factorization, both via a growable sieve. These feed the independence
//! ladders, whose exponents are tagged with square roots of fresh primes.

use std::sync::Mutex;
use std::sync::OnceLock;

struct Sieve {
    primes: Vec<u64>,
    sieved_to: u64,
}

fn sieve() -> &'static Mutex<Sieve> {
    static SIEVE: OnceLock<Mutex<Sieve>> = OnceLock::new();
    SIEVE.get_or_init(|| {
        Mutex::new(Sieve {
            primes: vec![2, 3, 5, 7, 11, 13],
            sieved_to: 13,
        })
    })
}

/// The k-th prime, 0-indexed: `nth_prime(0) = 2`.
pub fn nth_prime(k: usize) -> u64 {
    let mut s = sieve().lock().unwrap();
    while s.primes.len() <= k {
        let lo = s.sieved_to + 1;
        // Keep hi <= sieved_to^2 so the known primes cover all trial divisors.
        let hi = (s.sieved_to * 2).min(s.sieved_to * s.sieved_to);
        let mut is_comp = vec![false; (hi - lo + 1) as usize];
        let mut i = 0;
        while i < s.primes.len() {
            let p = s.primes[i];
            if p * p > hi {
                break;
            }
            let mut m = lo.div_ceil(p) * p;
            while m <= hi {
                if m >= lo {
                    is_comp[(m - lo) as usize] = true;
                }
                m += p;
            }
            i += 1;
        }
        for (off, comp) in is_comp.iter().enumerate() {
            if !comp {
                let n = lo + off as u64;
                s.primes.push(n);
            }
        }
        s.sieved_to = hi;
    }
    s.primes[k]
}

/// The prime index reserved for ladder `seed` at position `n`. Distinct seeds
/// get pairwise disjoint index sets: `index(s, n) = 2^s * (2n + 1) - 1`.
///
/// The index grows as `2^seed`, and with it the size of the sieve needed to
/// reach the prime, so seeds are capped where the cost is still a few
/// megabytes rather than gigabytes.
pub fn ladder_prime_index(seed: u32, n: u64) -> usize {
    assert!(seed < 16, "ladder seed must be below 16");
    ((1u64 << seed) * (2 * n + 1) - 1) as usize
}

/// The unique `(seed, n)` with `nth_prime(ladder_prime_index(seed, n)) == p`,
/// or `None` if `p` is not prime. Every index is claimed by exactly one seed:
/// `index + 1 = 2^seed * odd` determines the pair.
pub fn prime_owner(p: u64) -> Option<(u32, u64)> {
    let mut k = 0usize;
    loop {
        let q = nth_prime(k);
        if q == p {
            let m = (k as u64) + 1;
            let seed = m.trailing_zeros();
            let n = ((m >> seed) - 1) / 2;
            return Some((seed, n));
        }
        if q > p {
            return None;
        }
        k += 1;
    }
}

/// Splits `n >= 1` as `k^2 * f` with `f` squarefree; returns `(k, f)`.
pub fn squarefree_split(n: u64) -> (u64, u64) {
    assert!(n >= 1);
    let mut k = 1u64;
    let mut f = 1u64;
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            for _ in 0..(e / 2) {
                k *= p;
            }
            if e % 2 == 1 {
                f *= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    f *= m;
    (k, f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes() {
        assert_eq!(nth_prime(0), 2);
        assert_eq!(nth_prime(4), 11);
        assert_eq!(nth_prime(99), 541);
        assert_eq!(nth_prime(9), 29);
    }

    #[test]
    fn seed_index_sets_are_disjoint() {
        let mut seen = std::collections::HashSet::new();
        for seed in 0..4 {
            for n in 0..64 {
                assert!(seen.insert(ladder_prime_index(seed, n)));
            }
        }
    }

    #[test]
    fn prime_owner_inverts_the_index_scheme() {
        for seed in 0..5u32 {
            for n in 0..20u64 {
                let p = nth_prime(ladder_prime_index(seed, n));
                assert_eq!(prime_owner(p), Some((seed, n)));
            }
        }
        assert_eq!(prime_owner(4), None);
        assert_eq!(prime_owner(1), None);
    }

    #[test]
    fn squarefree_splitting() {
        assert_eq!(squarefree_split(1), (1, 1));
        assert_eq!(squarefree_split(12), (2, 3));
        assert_eq!(squarefree_split(49), (7, 1));
        assert_eq!(squarefree_split(18), (3, 2));
        assert_eq!(squarefree_split(30), (1, 30));
    }
}
