//! Shared prime table and small integer helpers.
//!
//! The table is built once and grown on demand. Readers get an `Arc` snapshot,
//! so a concurrent extension never invalidates a slice already handed out.

use std::ops::Deref;
use std::sync::{Arc, OnceLock, RwLock};

static TABLE: OnceLock<RwLock<Arc<Sieved>>> = OnceLock::new();

#[derive(Debug)]
struct Sieved {
    limit: u64,
    primes: Vec<u32>,
}

/// The primes `<= bound`, as a view into the shared table.
#[derive(Debug, Clone)]
pub struct Primes {
    table: Arc<Sieved>,
    len: usize,
}

impl Deref for Primes {
    type Target = [u32];

    fn deref(&self) -> &[u32] {
        &self.table.primes[..self.len]
    }
}

/// All primes `p <= bound`, ascending.
pub fn primes_up_to(bound: u64) -> Primes {
    let bound = bound.min(u32::MAX as u64);
    let cell = TABLE.get_or_init(|| RwLock::new(Arc::new(sieve(1 << 16))));
    let snapshot = {
        let guard = cell.read().unwrap_or_else(|e| e.into_inner());
        guard.clone()
    };
    let table = if snapshot.limit >= bound {
        snapshot
    } else {
        let mut guard = cell.write().unwrap_or_else(|e| e.into_inner());
        if guard.limit < bound {
            let target = bound
                .max(guard.limit.saturating_mul(2))
                .min(u32::MAX as u64);
            *guard = Arc::new(sieve(target));
        }
        guard.clone()
    };
    let len = table.primes.partition_point(|&p| (p as u64) <= bound);
    Primes { table, len }
}

/// Primes `<= y` for a real bound `y`.
pub fn primes_up_to_real(y: f64) -> Primes {
    if y < 2.0 {
        return primes_up_to(1);
    }
    primes_up_to(y.floor() as u64)
}

// Odd-only segmented sieve of Eratosthenes.
fn sieve(limit: u64) -> Sieved {
    let mut primes = Vec::new();
    if limit >= 2 {
        primes.push(2u32);
    }
    if limit < 3 {
        return Sieved { limit, primes };
    }
    let root = (limit as f64).sqrt() as u64 + 1;
    let mut small = vec![true; (root / 2 + 1) as usize];
    let mut base = Vec::new();
    let mut i = 1u64;
    while 2 * i + 1 <= root {
        if small[i as usize] {
            let p = 2 * i + 1;
            base.push(p);
            let mut j = p * p / 2;
            while j <= root / 2 {
                small[j as usize] = false;
                j += p;
            }
        }
        i += 1;
    }

    const SEGMENT: u64 = 1 << 18;
    let top = (limit - 1) / 2; // odd index range 1..=top covers 3..=limit
    let mut seg = vec![true; SEGMENT as usize];
    let mut lo = 1u64;
    while lo <= top {
        let hi = (lo + SEGMENT - 1).min(top);
        let span = (hi - lo + 1) as usize;
        seg[..span].iter_mut().for_each(|b| *b = true);
        for &p in &base {
            let sq_idx = p * p / 2;
            if sq_idx > hi {
                break;
            }
            // first odd multiple index >= lo
            let mut start = if sq_idx >= lo {
                sq_idx
            } else {
                let first = (2 * lo + 1).div_ceil(p) * p;
                let first = if first % 2 == 0 { first + p } else { first };
                first / 2
            };
            while start <= hi {
                seg[(start - lo) as usize] = false;
                start += p;
            }
        }
        for (k, &is_p) in seg[..span].iter().enumerate() {
            if is_p {
                primes.push((2 * (lo + k as u64) + 1) as u32);
            }
        }
        lo = hi + 1;
    }
    Sieved { limit, primes }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Prime factorization by trial division, as `(p, e)` pairs with `p` ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .iter()
        .fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

pub fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut acc = 1u128;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (p, e) in factorize(n) {
        let len = divs.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

/// von Mangoldt function.
pub fn von_mangoldt(n: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    let f = factorize(n);
    if f.len() == 1 {
        (f[0].0 as f64).ln()
    } else {
        0.0
    }
}
