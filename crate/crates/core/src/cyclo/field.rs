//! Per-conductor constants: cyclotomic polynomials, Euler phi, Möbius weights.

use std::sync::OnceLock;

/// Largest conductor the field table can hold.
pub const MAX_CONDUCTOR: u32 = 1024;

/// Default cap applied when loading user data.
pub const DEFAULT_CONDUCTOR_CAP: u32 = 120;

/// Modulus used for hash fingerprints (Mersenne prime 2^61 - 1).
pub(crate) const HASH_PRIME: u64 = (1u64 << 61) - 1;

pub(crate) struct FieldData {
    pub phi: usize,
    /// Coefficients of the n-th cyclotomic polynomial, low degree first; monic.
    pub poly: Vec<i64>,
    /// Normalized trace of ζ_n^k for k < phi, as residues mod HASH_PRIME.
    pub trace_weights: Vec<u64>,
}

static FIELDS: [OnceLock<FieldData>; (MAX_CONDUCTOR + 1) as usize] =
    [const { OnceLock::new() }; (MAX_CONDUCTOR + 1) as usize];

pub(crate) fn field(n: u32) -> &'static FieldData {
    assert!(
        (1..=MAX_CONDUCTOR).contains(&n),
        "conductor {n} outside supported range 1..={MAX_CONDUCTOR}"
    );
    FIELDS[n as usize].get_or_init(|| build(n))
}

fn build(n: u32) -> FieldData {
    let poly = cyclotomic_poly(n);
    let phi = poly.len() - 1;
    let trace_weights = (0..phi as u32)
        .map(|k| {
            let d = n / gcd_u32(k, n);
            let mu = mobius(d);
            let w = mod_inv(euler_phi(d) as u64 % HASH_PRIME, HASH_PRIME);
            match mu {
                0 => 0,
                1 => w,
                _ => (HASH_PRIME - w) % HASH_PRIME,
            }
        })
        .collect();
    FieldData { phi, poly, trace_weights }
}

/// Φ_n as integer coefficients, computed by dividing x^n - 1 by Φ_d for proper divisors d.
pub fn cyclotomic_poly(n: u32) -> Vec<i64> {
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let div = if d <= MAX_CONDUCTOR {
                field(d).poly.clone()
            } else {
                cyclotomic_poly(d)
            };
            num = exact_div_monic(&num, &div);
        }
    }
    num
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut quot = vec![0i64; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dn];
        quot[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

pub fn euler_phi(n: u32) -> u32 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

pub fn mobius(n: u32) -> i32 {
    let mut m = n;
    let mut sign = 1;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            m /= p;
            if m.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if m > 1 {
        sign = -sign;
    }
    sign
}

pub fn prime_factors(n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            out.push(p);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

pub fn gcd_u32(a: u32, b: u32) -> u32 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm_u32(a: u32, b: u32) -> u32 {
    a / gcd_u32(a, b) * b
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Inverse modulo a prime.
pub(crate) fn mod_inv(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}
