//! Dirichlet characters built from the CRT decomposition of `(Z/qZ)*`.
//!
//! Each odd prime power contributes one cyclic factor generated by a primitive
//! root; `2^e` contributes `<-1>` (for `e >= 2`) and `<5>` (for `e >= 3`). A
//! character is an exponent vector against these generators, and its values
//! are kept as exact angles `num / exponent` of a full turn, where `exponent`
//! is the exponent of the group.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::primes::{factorize, gcd, lcm, pow_mod};

/// Largest modulus for which character tables are built.
pub const MAX_MODULUS: u64 = 1_000_000;

const NO_LOG: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    /// Cyclic group of an odd prime power.
    Odd,
    /// The `<-1>` factor of `2^e`, `e >= 2`.
    MinusOne,
    /// The `<5>` factor of `2^e`, `e >= 3`.
    Five,
}

#[derive(Debug)]
struct Component {
    prime: u64,
    exponent: u32,
    prime_power: u64,
    kind: Kind,
    /// Cyclic order of the factor.
    order: u64,
    /// Generator as a residue mod `prime_power`.
    generator: u64,
    /// Discrete log of each residue mod `prime_power`, `NO_LOG` off the unit group.
    logs: Vec<u32>,
}

/// The full character group modulo `q`.
#[derive(Debug)]
pub struct CharacterGroup {
    modulus: u64,
    components: Vec<Component>,
    exponent: u64,
    size: u64,
}

impl CharacterGroup {
    pub fn new(q: u64) -> Result<Arc<Self>> {
        if q == 0 {
            return Err(Error::Domain("modulus must be at least 1".into()));
        }
        if q > MAX_MODULUS {
            return Err(Error::ModulusTooLarge {
                q,
                max: MAX_MODULUS,
            });
        }
        let mut components = Vec::new();
        for (p, e) in factorize(q) {
            let pe = p.pow(e);
            if p == 2 {
                if e >= 2 {
                    components.push(two_adic(pe, e, Kind::MinusOne));
                }
                if e >= 3 {
                    components.push(two_adic(pe, e, Kind::Five));
                }
            } else {
                components.push(odd_prime_power(p, e, pe));
            }
        }
        let exponent = components.iter().fold(1, |acc, c| lcm(acc, c.order));
        let size = components.iter().map(|c| c.order).product();
        Ok(Arc::new(Self {
            modulus: q,
            components,
            exponent,
            size,
        }))
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// `phi(q)`, the number of characters.
    pub fn len(&self) -> u64 {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Exponent of the group; every character value is a root of unity of this order.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// Orders of the cyclic factors, in generator order.
    pub fn factor_orders(&self) -> Vec<u64> {
        self.components.iter().map(|c| c.order).collect()
    }

    /// Generators of the cyclic factors, lifted to residues mod `q`.
    pub fn generators(&self) -> Vec<u64> {
        self.components
            .iter()
            .map(|c| crt_lift(c.generator, c.prime_power, self.modulus))
            .collect()
    }

    /// Discrete logs of `n` against the generators, or `None` if `gcd(n, q) > 1`.
    pub fn discrete_logs(&self, n: u64) -> Option<Vec<u64>> {
        if gcd(n % self.modulus, self.modulus) != 1 && self.modulus != 1 {
            return None;
        }
        Some(
            self.components
                .iter()
                .map(|c| c.logs[(n % c.prime_power) as usize] as u64)
                .collect(),
        )
    }

    /// The character with mixed-radix index `index` (0 is principal).
    pub fn character(self: &Arc<Self>, index: u64) -> Result<DirichletCharacter> {
        if index >= self.size {
            return Err(Error::Domain(format!(
                "character index {index} out of range for modulus {} ({} characters)",
                self.modulus, self.size
            )));
        }
        let mut rest = index;
        let mut exponents = Vec::with_capacity(self.components.len());
        for c in self.components.iter().rev() {
            exponents.push(rest % c.order);
            rest /= c.order;
        }
        exponents.reverse();
        Ok(DirichletCharacter::from_exponents(self.clone(), exponents))
    }

    pub fn principal(self: &Arc<Self>) -> DirichletCharacter {
        DirichletCharacter::from_exponents(self.clone(), vec![0; self.components.len()])
    }

    /// Every character, principal first, in index order.
    pub fn characters(self: &Arc<Self>) -> Vec<DirichletCharacter> {
        (0..self.size)
            .map(|i| self.character(i).expect("index in range"))
            .collect()
    }
}

/// All `phi(q)` characters modulo `q`, principal first.
pub fn character_group(q: u64) -> Result<Vec<DirichletCharacter>> {
    Ok(CharacterGroup::new(q)?.characters())
}

fn odd_prime_power(p: u64, e: u32, pe: u64) -> Component {
    let g = primitive_root_prime_power(p);
    let order = pe / p * (p - 1);
    let mut logs = vec![NO_LOG; pe as usize];
    let mut acc = 1u64;
    for k in 0..order {
        logs[acc as usize] = k as u32;
        acc = acc * g % pe;
    }
    Component {
        prime: p,
        exponent: e,
        prime_power: pe,
        kind: Kind::Odd,
        order,
        generator: g % pe,
        logs,
    }
}

fn two_adic(pe: u64, e: u32, kind: Kind) -> Component {
    // Every odd residue is (-1)^a 5^b with a < 2, b < 2^(e-2).
    let five_order = if e >= 3 { pe / 4 } else { 1 };
    let mut logs = vec![NO_LOG; pe as usize];
    let mut five_pow = 1u64;
    for b in 0..five_order {
        for a in 0..2u64 {
            let n = if a == 0 { five_pow } else { pe - five_pow };
            logs[n as usize] = match kind {
                Kind::MinusOne => a as u32,
                _ => b as u32,
            };
        }
        five_pow = five_pow * 5 % pe;
    }
    let (order, generator) = match kind {
        Kind::MinusOne => (2, pe - 1),
        _ => (five_order, 5 % pe),
    };
    Component {
        prime: 2,
        exponent: e,
        prime_power: pe,
        kind,
        order,
        generator,
        logs,
    }
}

/// A primitive root modulo every power of the odd prime `p`.
fn primitive_root_prime_power(p: u64) -> u64 {
    let factors: Vec<u64> = factorize(p - 1).into_iter().map(|(r, _)| r).collect();
    let g = (2..p)
        .find(|&g| factors.iter().all(|&r| pow_mod(g, (p - 1) / r, p) != 1))
        .unwrap_or(1);
    if pow_mod(g, p - 1, p * p) == 1 {
        g + p
    } else {
        g
    }
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let qt = old_r / r;
        (old_r, r) = (r, old_r - qt * r);
        (old_s, s) = (s, old_s - qt * s);
    }
    old_s.rem_euclid(m as i128) as u64
}

/// The residue mod `q` congruent to `g` mod `pe` and to 1 mod `q / pe`.
fn crt_lift(g: u64, pe: u64, q: u64) -> u64 {
    let rest = q / pe;
    if rest == 1 {
        return g % q;
    }
    let inv = mod_inverse(rest % pe, pe);
    let t = ((g + pe - 1) % pe) as u128 * inv as u128 % pe as u128;
    ((1 + rest as u128 * t) % q as u128) as u64
}

/// An exact root of unity `exp(2 pi i num / den)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Angle {
    pub num: u64,
    pub den: u64,
}

impl Angle {
    pub fn to_complex(self) -> Complex64 {
        let Angle { num, den } = self;
        let num = num % den;
        if num == 0 {
            return Complex64::new(1.0, 0.0);
        }
        if 2 * num == den {
            return Complex64::new(-1.0, 0.0);
        }
        if 4 * num == den {
            return Complex64::new(0.0, 1.0);
        }
        if 4 * num == 3 * den {
            return Complex64::new(0.0, -1.0);
        }
        // Reduce to (-1/2, 1/2] so that conjugate angles give bitwise conjugate values.
        let signed = if 2 * num > den {
            num as f64 - den as f64
        } else {
            num as f64
        };
        let theta = std::f64::consts::TAU * signed / den as f64;
        Complex64::new(theta.cos(), theta.sin())
    }
}

/// A Dirichlet character modulo `q`.
#[derive(Clone)]
pub struct DirichletCharacter {
    group: Arc<CharacterGroup>,
    exponents: Vec<u64>,
    /// `exponents[i] * (group exponent / order_i)`, the angle contributed per unit of log.
    weights: Vec<u64>,
}

impl fmt::Debug for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DirichletCharacter")
            .field("modulus", &self.modulus())
            .field("exponents", &self.exponents)
            .finish()
    }
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.modulus() == other.modulus() && self.exponents == other.exponents
    }
}

impl Eq for DirichletCharacter {}

impl DirichletCharacter {
    fn from_exponents(group: Arc<CharacterGroup>, exponents: Vec<u64>) -> Self {
        let weights = group
            .components
            .iter()
            .zip(&exponents)
            .map(|(c, &k)| (k % c.order) * (group.exponent / c.order))
            .collect();
        Self {
            group,
            exponents,
            weights,
        }
    }

    /// The trivial character modulo 1.
    pub fn trivial() -> Self {
        CharacterGroup::new(1).expect("modulus 1").principal()
    }

    /// The principal character modulo `q`.
    pub fn principal(q: u64) -> Result<Self> {
        Ok(CharacterGroup::new(q)?.principal())
    }

    pub fn group(&self) -> &Arc<CharacterGroup> {
        &self.group
    }

    pub fn modulus(&self) -> u64 {
        self.group.modulus
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    /// Position of this character in [`CharacterGroup::characters`].
    pub fn index(&self) -> u64 {
        self.group
            .components
            .iter()
            .zip(&self.exponents)
            .fold(0, |acc, (c, &k)| acc * c.order + k)
    }

    pub fn is_principal(&self) -> bool {
        self.exponents.iter().all(|&k| k == 0)
    }

    /// `chi(n)` as an exact angle, `None` when `gcd(n, q) > 1`.
    pub fn angle(&self, n: u64) -> Option<Angle> {
        let den = self.group.exponent;
        let mut num = 0u64;
        for (c, &w) in self.group.components.iter().zip(&self.weights) {
            let log = c.logs[(n % c.prime_power) as usize];
            if log == NO_LOG {
                return None;
            }
            num = (num + (w as u128 * log as u128 % den as u128) as u64) % den;
        }
        // The group of 2 has no components but still kills even n.
        if self.group.modulus % 2 == 0 && n % 2 == 0 {
            return None;
        }
        Some(Angle { num, den })
    }

    /// `chi(n)` as a complex number: a root of unity or exactly zero.
    pub fn evaluate(&self, n: u64) -> Complex64 {
        match self.angle(n) {
            Some(a) => a.to_complex(),
            None => Complex64::new(0.0, 0.0),
        }
    }

    pub fn evaluate_signed(&self, n: i64) -> Complex64 {
        self.evaluate(n.rem_euclid(self.modulus() as i64) as u64)
    }

    pub fn conj(&self) -> Self {
        let exps = self
            .group
            .components
            .iter()
            .zip(&self.exponents)
            .map(|(c, &k)| (c.order - k % c.order) % c.order)
            .collect();
        Self::from_exponents(self.group.clone(), exps)
    }

    /// Pointwise product of two characters with the same modulus.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.modulus() != other.modulus() {
            return Err(Error::ModulusMismatch {
                chi: other.modulus(),
                q: self.modulus(),
            });
        }
        let exps = self
            .group
            .components
            .iter()
            .zip(self.exponents.iter().zip(&other.exponents))
            .map(|(c, (&a, &b))| (a + b) % c.order)
            .collect();
        Ok(Self::from_exponents(self.group.clone(), exps))
    }

    pub fn pow(&self, k: u64) -> Self {
        let exps = self
            .group
            .components
            .iter()
            .zip(&self.exponents)
            .map(|(c, &a)| ((a as u128 * k as u128) % c.order as u128) as u64)
            .collect();
        Self::from_exponents(self.group.clone(), exps)
    }

    /// Least `k >= 1` with `chi^k` principal.
    pub fn order(&self) -> u64 {
        self.group
            .components
            .iter()
            .zip(&self.exponents)
            .fold(1, |acc, (c, &k)| lcm(acc, c.order / gcd(k, c.order)))
    }

    /// Smallest `f | q` such that `chi` is induced from a character mod `f`.
    pub fn conductor(&self) -> u64 {
        let comps = &self.group.components;
        let mut f = 1u64;
        let mut i = 0;
        while i < comps.len() {
            let c = &comps[i];
            match c.kind {
                Kind::Odd => {
                    let k = self.exponents[i];
                    if k != 0 {
                        let mut o = c.order / gcd(k, c.order);
                        let mut j = 0;
                        while o % c.prime == 0 {
                            o /= c.prime;
                            j += 1;
                        }
                        f *= c.prime.pow(j + 1);
                    }
                    i += 1;
                }
                Kind::MinusOne => {
                    let minus = self.exponents[i];
                    let five = if c.exponent >= 3 {
                        self.exponents[i + 1]
                    } else {
                        0
                    };
                    if five != 0 {
                        let n5 = comps[i + 1].order;
                        let o = n5 / gcd(five, n5);
                        f *= 4 * o;
                    } else if minus != 0 {
                        f *= 4;
                    }
                    i += if c.exponent >= 3 { 2 } else { 1 };
                }
                Kind::Five => unreachable!("<5> always follows <-1>"),
            }
        }
        f
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor() == self.modulus()
    }

    /// Values on the group generators (lifted mod `q`).
    pub fn generator_values(&self) -> Vec<Angle> {
        self.group
            .generators()
            .into_iter()
            .map(|g| self.angle(g).expect("generators are units"))
            .collect()
    }
}
