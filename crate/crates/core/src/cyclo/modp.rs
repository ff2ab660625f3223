//! Ring homomorphisms ℤ[ζ_N][1/d] → F_p for primes p ≡ 1 (mod N).
//!
//! Reduction never creates a linear relation that is absent over ℚ(ζ_N) in
//! the "kernel gets bigger" direction: rank mod p ≤ exact rank. The linear
//! algebra layer uses this as a sound filter in front of exact computations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::field::{mod_inv, mul_mod, pow_mod, prime_factors};
use super::Cyclotomic;

#[derive(Debug, Clone)]
pub struct ModpMap {
    p: u64,
    n: u32,
    root: u64,
}

impl ModpMap {
    /// A map for conductor `n`, using the largest prime below 2^31 that is 1 mod `n`.
    pub fn new(n: u32) -> Self {
        Self::with_bound(n, 1u64 << 31)
    }

    pub fn with_bound(n: u32, bound: u64) -> Self {
        let step = n as u64;
        let mut p = (bound - 1) / step * step + 1;
        while p >= bound || !is_prime(p) {
            p -= step;
        }
        let root = primitive_root_of_order(p, n as u64);
        ModpMap { p, n, root }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    /// Image of ζ_n^k.
    pub fn root_power(&self, k: i64) -> u64 {
        pow_mod(self.root, k.rem_euclid(self.n as i64) as u64, self.p)
    }

    /// Image of `x`, or `None` when its denominator vanishes mod p.
    /// The conductor of `x` must divide the map's conductor.
    pub fn image(&self, x: &Cyclotomic) -> Option<u64> {
        let d = x.conductor();
        assert!(self.n.is_multiple_of(d), "conductor {d} does not divide {}", self.n);
        let r = pow_mod(self.root, (self.n / d) as u64, self.p);
        let p = self.p;
        if let Some((num, den)) = x.small_parts() {
            let den = (den as i128).rem_euclid(p as i128) as u64;
            if den == 0 {
                return None;
            }
            let mut acc = 0u64;
            let mut rk = 1u64;
            for &c in num {
                if c != 0 {
                    let cr = (c as i128).rem_euclid(p as i128) as u64;
                    acc = (acc + mul_mod(cr, rk, p)) % p;
                }
                rk = mul_mod(rk, r, p);
            }
            return Some(mul_mod(acc, mod_inv(den, p), p));
        }
        let (num, den) = x.big_parts();
        let bp = BigInt::from(p);
        let den = den.mod_floor(&bp).to_u64().unwrap();
        if den == 0 {
            return None;
        }
        let mut acc = 0u64;
        let mut rk = 1u64;
        for c in num {
            let cr = c.mod_floor(&bp).to_u64().unwrap();
            acc = (acc + mul_mod(cr, rk, p)) % p;
            rk = mul_mod(rk, r, p);
        }
        Some(mul_mod(acc, mod_inv(den, p), p))
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.p)
    }

    pub fn inv(&self, a: u64) -> u64 {
        mod_inv(a, self.p)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn primitive_root_of_order(p: u64, n: u64) -> u64 {
    let qs = prime_factors(n as u32);
    for g in 2..p {
        let r = pow_mod(g, (p - 1) / n, p);
        if qs.iter().all(|&q| pow_mod(r, n / q as u64, p) != 1) {
            return r;
        }
    }
    1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn images_respect_arithmetic() {
        let m = ModpMap::new(12);
        assert_eq!((m.prime() - 1) % 12, 0);
        let a = &Cyclotomic::root_of_unity(1, 12) + &Cyclotomic::rational(3, 7).unwrap();
        let b = &Cyclotomic::root_of_unity(5, 12) - &Cyclotomic::root_of_unity(1, 3);
        let (ia, ib) = (m.image(&a).unwrap(), m.image(&b).unwrap());
        assert_eq!(m.image(&(&a * &b)).unwrap(), m.mul(ia, ib));
        assert_eq!(m.image(&(&a + &b)).unwrap(), m.add(ia, ib));
        // Φ_12 vanishes at the chosen root
        let r = m.root_power(1);
        let r2 = m.mul(r, r);
        let r4 = m.mul(r2, r2);
        assert_eq!(m.add(m.sub(r4, r2), 1), 0);
    }

    #[test]
    fn root_has_exact_order() {
        let m = ModpMap::new(1);
        assert_eq!(m.root_power(1), 1);
        let m = ModpMap::new(9);
        assert_ne!(m.root_power(3), 1);
        assert_eq!(m.root_power(9), 1);
    }
}
