//! Exact arithmetic in cyclotomic fields ℚ(ζ_N).
//!
//! A [`Cyclotomic`] is stored as integer numerators over a common positive
//! denominator, in the power basis `1, ζ, …, ζ^{φ(N)-1}` after reduction by
//! the N-th cyclotomic polynomial. Values whose numerators fit in `i64` use an
//! inline representation; anything larger falls back to `BigInt`.
//!
//! Values of different conductors may be mixed freely: binary operations embed
//! both operands into the field of the least common multiple conductor.

mod field;
mod modp;
mod serial;

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use smallvec::{smallvec, SmallVec};

pub use field::{
    cyclotomic_poly, euler_phi, gcd_u32, lcm_u32, mobius, prime_factors, DEFAULT_CONDUCTOR_CAP,
    MAX_CONDUCTOR,
};
pub use modp::ModpMap;
pub use serial::CycloText;

use field::{field, mod_inv, mul_mod, FieldData, HASH_PRIME};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CycloError {
    #[error("division by zero in cyclotomic field")]
    DivisionByZero,
    #[error("conductor {0} exceeds the supported maximum")]
    ConductorTooLarge(u64),
    #[error("zero denominator in rational coefficient")]
    ZeroDenominator,
    #[error("malformed cyclotomic encoding: {0}")]
    Malformed(String),
}

type SmallNum = SmallVec<[i64; 4]>;

#[derive(Clone, PartialEq, Eq, Debug)]
enum Repr {
    Small { num: SmallNum, den: i64 },
    Big { num: Vec<BigInt>, den: BigInt },
}

/// An exact element of ℚ(ζ_N).
#[derive(Clone)]
pub struct Cyclotomic {
    n: u32,
    repr: Repr,
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Cyclotomic { n: 1, repr: Repr::Small { num: smallvec![0], den: 1 } }
    }

    pub fn one() -> Self {
        Self::from_i64(1)
    }

    pub fn from_i64(v: i64) -> Self {
        Cyclotomic { n: 1, repr: Repr::Small { num: smallvec![v], den: 1 } }
    }

    /// The rational number `num / den`.
    pub fn rational(num: i64, den: i64) -> Result<Self, CycloError> {
        if den == 0 {
            return Err(CycloError::ZeroDenominator);
        }
        Ok(normalize_i128(1, vec![num as i128], den as i128))
    }

    pub fn from_bigint_ratio(num: BigInt, den: BigInt) -> Result<Self, CycloError> {
        if den.is_zero() {
            return Err(CycloError::ZeroDenominator);
        }
        Ok(normalize_big(1, vec![num], den))
    }

    /// ζ_N^k, with `k` reduced modulo `N`.
    pub fn root_of_unity(k: i64, n: u32) -> Self {
        assert!(n >= 1, "root of unity needs N >= 1");
        let k = k.rem_euclid(n as i64) as usize;
        let mut v = vec![0i128; n as usize];
        v[k] = 1;
        let f = field(n);
        reduce_i128(&mut v, f).expect("power reduction cannot overflow");
        normalize_i128(n, v, 1)
    }

    /// Σ c_k ζ_N^k for rational coefficients `(num, den)` indexed by exponent.
    /// The list may have any length; exponents are taken modulo `N`.
    pub fn from_exponent_coeffs(n: u32, coeffs: &[(BigInt, BigInt)]) -> Result<Self, CycloError> {
        if n == 0 || n > MAX_CONDUCTOR {
            return Err(CycloError::ConductorTooLarge(n as u64));
        }
        let mut den = BigInt::one();
        for (_, d) in coeffs {
            if d.is_zero() {
                return Err(CycloError::ZeroDenominator);
            }
            den = den.lcm(d);
        }
        let mut v = vec![BigInt::zero(); n as usize];
        for (k, (c, d)) in coeffs.iter().enumerate() {
            v[k % n as usize] += c * (&den / d);
        }
        let f = field(n);
        reduce_big(&mut v, f);
        Ok(normalize_big(n, v, den))
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    pub fn degree(&self) -> usize {
        field(self.n).phi
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Small { num, .. } => num.iter().all(|&c| c == 0),
            Repr::Big { num, .. } => num.iter().all(Zero::is_zero),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.repr {
            Repr::Small { num, den } => {
                *den == 1 && num[0] == 1 && num[1..].iter().all(|&c| c == 0)
            }
            Repr::Big { .. } => false,
        }
    }

    /// True when the value lies in ℚ.
    pub fn is_rational(&self) -> bool {
        match &self.repr {
            Repr::Small { num, .. } => num[1..].iter().all(|&c| c == 0),
            Repr::Big { num, .. } => num[1..].iter().all(Zero::is_zero),
        }
    }

    /// The value as a reduced fraction, when rational.
    pub fn to_rational(&self) -> Option<(BigInt, BigInt)> {
        if !self.is_rational() {
            return None;
        }
        Some(match &self.repr {
            Repr::Small { num, den } => (BigInt::from(num[0]), BigInt::from(*den)),
            Repr::Big { num, den } => (num[0].clone(), den.clone()),
        })
    }

    /// Power-basis coefficients as reduced fractions, length φ(N).
    pub fn coeffs(&self) -> Vec<(BigInt, BigInt)> {
        let (num, den) = self.big_parts();
        num.into_iter()
            .map(|c| {
                let g = c.gcd(&den);
                if g.is_zero() {
                    (BigInt::zero(), BigInt::one())
                } else {
                    (c / &g, &den / &g)
                }
            })
            .collect()
    }

    /// Integer numerators and the common denominator.
    pub fn big_parts(&self) -> (Vec<BigInt>, BigInt) {
        match &self.repr {
            Repr::Small { num, den } => {
                (num.iter().map(|&c| BigInt::from(c)).collect(), BigInt::from(*den))
            }
            Repr::Big { num, den } => (num.clone(), den.clone()),
        }
    }

    /// Small-integer view: numerators and denominator when they fit `i64`.
    pub(crate) fn small_parts(&self) -> Option<(&[i64], i64)> {
        match &self.repr {
            Repr::Small { num, den } => Some((num, *den)),
            Repr::Big { .. } => None,
        }
    }

    /// The same value viewed in ℚ(ζ_m); `m` must be a multiple of the conductor.
    pub fn embed(&self, m: u32) -> Self {
        assert!(m.is_multiple_of(self.n), "cannot embed conductor {} into {}", self.n, m);
        if m == self.n {
            return self.clone();
        }
        let step = (m / self.n) as usize;
        let target = field(m);
        match &self.repr {
            Repr::Small { num, den } => {
                if self.is_rational() {
                    let mut v: SmallNum = smallvec![0; target.phi];
                    v[0] = num[0];
                    return Cyclotomic { n: m, repr: Repr::Small { num: v, den: *den } };
                }
                let mut v = vec![0i128; (num.len() - 1) * step + 1];
                for (k, &c) in num.iter().enumerate() {
                    v[k * step] = c as i128;
                }
                if reduce_i128(&mut v, target).is_some() {
                    return normalize_i128(m, v, *den as i128);
                }
                let (bn, bd) = self.big_parts();
                embed_big(m, step, &bn, bd, target)
            }
            Repr::Big { num, den } => embed_big(m, step, num, den.clone(), target),
        }
    }

    /// Galois automorphism ζ ↦ ζ^a (a coprime to the conductor).
    pub fn galois(&self, a: i64) -> Self {
        let n = self.n as i64;
        debug_assert!(n == 1 || a.rem_euclid(n).gcd(&n) == 1);
        let f = field(self.n);
        let (num, den) = self.big_parts();
        let mut v = vec![BigInt::zero(); self.n as usize];
        for (k, c) in num.into_iter().enumerate() {
            let e = (a * k as i64).rem_euclid(n) as usize;
            v[e] += c;
        }
        reduce_big(&mut v, f);
        normalize_big(self.n, v, den)
    }

    pub fn complex_conjugate(&self) -> Self {
        self.galois(-1)
    }

    /// Field norm down to ℚ.
    pub fn norm(&self) -> (BigInt, BigInt) {
        let mut acc = self.clone();
        for a in units(self.n).into_iter().skip(1) {
            acc = &acc * &self.galois(a as i64);
        }
        acc.to_rational().expect("norm of a cyclotomic number is rational")
    }

    pub fn checked_inv(&self) -> Result<Self, CycloError> {
        if self.is_zero() {
            return Err(CycloError::DivisionByZero);
        }
        if self.is_rational() {
            let (p, q) = self.to_rational().unwrap();
            return Ok(normalize_big(self.n, pad_rational(q, self.degree()), p));
        }
        // x^{-1} = (product of the other conjugates) / N(x)
        let mut others = Cyclotomic::one();
        for a in units(self.n).into_iter().skip(1) {
            others = &others * &self.galois(a as i64);
        }
        let norm = (&others * self).to_rational().expect("norm is rational");
        let (num, den) = others.big_parts();
        let num: Vec<BigInt> = num.into_iter().map(|c| c * &norm.1).collect();
        let den = den * norm.0;
        Ok(normalize_big(others.n, num, den))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, CycloError> {
        Ok(self * &other.checked_inv()?)
    }

    pub fn pow(&self, e: i64) -> Self {
        if e < 0 {
            return self.checked_inv().expect("negative power of zero").pow(-e);
        }
        let mut result = Cyclotomic::one();
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Multiplicative order when the value is a root of unity, otherwise `None`.
    pub fn order_as_root_of_unity(&self) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        // roots of unity in ℚ(ζ_N) are the lcm(2, N)-th roots
        let m = lcm_u32(2, self.n);
        let x = self.embed(m);
        (0..m as i64)
            .find(|&k| Cyclotomic::root_of_unity(k, m) == x)
            .map(|k| m / gcd_u32(k as u32, m))
    }

    /// Exponent `k` with `self == ζ_m^k`, if any, for the given `m`.
    pub fn root_exponent(&self, m: u32) -> Option<u32> {
        let ord = self.order_as_root_of_unity()?;
        if !m.is_multiple_of(ord) {
            return None;
        }
        let l = lcm_u32(m, self.n);
        let x = self.embed(l);
        (0..m).find(|&k| Cyclotomic::root_of_unity(k as i64, m).embed(l) == x)
    }

    /// Smallest conductor of a cyclotomic field containing the value.
    pub fn minimal_conductor(&self) -> u32 {
        let n = self.n;
        let mut best = n;
        for d in divisors(n) {
            if d >= best {
                break;
            }
            if self.fixed_by_kernel(d) {
                best = d;
                break;
            }
        }
        best
    }

    /// The same value written in its minimal field.
    pub fn to_minimal(&self) -> Self {
        let d = self.minimal_conductor();
        if d == self.n {
            return self.clone();
        }
        self.descend(d).expect("descent to minimal conductor")
    }

    fn fixed_by_kernel(&self, d: u32) -> bool {
        let n = self.n;
        units(n)
            .into_iter()
            .filter(|&a| a % d == 1 % d)
            .all(|a| self.galois(a as i64) == *self)
    }

    /// Express the value in ℚ(ζ_d) by solving against the embedded power basis.
    fn descend(&self, d: u32) -> Option<Self> {
        let fd = field(d);
        let cols: Vec<Vec<Cyclotomic>> = (0..fd.phi)
            .map(|j| {
                let z = Cyclotomic::root_of_unity(j as i64, d).embed(self.n);
                z.coeffs()
                    .into_iter()
                    .map(|(p, q)| Cyclotomic::from_bigint_ratio(p, q).unwrap())
                    .collect()
            })
            .collect();
        let target: Vec<Cyclotomic> = self
            .coeffs()
            .into_iter()
            .map(|(p, q)| Cyclotomic::from_bigint_ratio(p, q).unwrap())
            .collect();
        let sol = solve_rational(&cols, &target)?;
        let mut num = Vec::with_capacity(fd.phi);
        let mut den = BigInt::one();
        let fr: Vec<(BigInt, BigInt)> = sol.iter().map(|s| s.to_rational().unwrap()).collect();
        for (_, q) in &fr {
            den = den.lcm(q);
        }
        for (p, q) in fr {
            num.push(p * (&den / q));
        }
        Some(normalize_big(d, num, den))
    }

    /// Hash fingerprint: the normalized trace to ℚ reduced modulo a fixed prime.
    /// Independent of the ambient conductor.
    pub fn fingerprint(&self) -> u64 {
        let f = field(self.n);
        let (acc, den) = match &self.repr {
            Repr::Small { num, den } => {
                let mut acc = 0u64;
                for (k, &c) in num.iter().enumerate() {
                    if c != 0 {
                        let r = (c as i128).rem_euclid(HASH_PRIME as i128) as u64;
                        acc = (acc + mul_mod(r, f.trace_weights[k], HASH_PRIME)) % HASH_PRIME;
                    }
                }
                (acc, (*den as u64) % HASH_PRIME)
            }
            Repr::Big { num, den } => {
                let p = BigInt::from(HASH_PRIME);
                let mut acc = 0u64;
                for (k, c) in num.iter().enumerate() {
                    let r = c.mod_floor(&p).to_u64().unwrap();
                    acc = (acc + mul_mod(r, f.trace_weights[k], HASH_PRIME)) % HASH_PRIME;
                }
                (acc, den.mod_floor(&p).to_u64().unwrap())
            }
        };
        if den == 0 {
            return u64::MAX;
        }
        mul_mod(acc, mod_inv(den, HASH_PRIME), HASH_PRIME)
    }

    fn aligned<'a>(
        a: &'a Cyclotomic,
        b: &'a Cyclotomic,
    ) -> (std::borrow::Cow<'a, Cyclotomic>, std::borrow::Cow<'a, Cyclotomic>) {
        use std::borrow::Cow;
        if a.n == b.n {
            (Cow::Borrowed(a), Cow::Borrowed(b))
        } else {
            let m = lcm_u32(a.n, b.n);
            let ea = if a.n == m { Cow::Borrowed(a) } else { Cow::Owned(a.embed(m)) };
            let eb = if b.n == m { Cow::Borrowed(b) } else { Cow::Owned(b.embed(m)) };
            (ea, eb)
        }
    }

    fn add_same(a: &Cyclotomic, b: &Cyclotomic, negate_b: bool) -> Cyclotomic {
        let n = a.n;
        if let (Repr::Small { num: na, den: da }, Repr::Small { num: nb, den: db }) =
            (&a.repr, &b.repr)
        {
            if da == db && *da == 1 {
                let mut out: SmallNum = SmallVec::with_capacity(na.len());
                let mut ok = true;
                for (x, y) in na.iter().zip(nb.iter()) {
                    let r = if negate_b { x.checked_sub(*y) } else { x.checked_add(*y) };
                    match r {
                        Some(v) => out.push(v),
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok {
                    return Cyclotomic { n, repr: Repr::Small { num: out, den: 1 } };
                }
            } else {
                let (da, db) = (*da as i128, *db as i128);
                let v: Vec<i128> = na
                    .iter()
                    .zip(nb.iter())
                    .map(|(&x, &y)| {
                        let l = x as i128 * db;
                        let r = y as i128 * da;
                        if negate_b { l - r } else { l + r }
                    })
                    .collect();
                if let Some(den) = da.checked_mul(db) {
                    return normalize_i128(n, v, den);
                }
            }
        }
        let (na, da) = a.big_parts();
        let (nb, db) = b.big_parts();
        let v: Vec<BigInt> = na
            .iter()
            .zip(nb.iter())
            .map(|(x, y)| {
                if negate_b {
                    x * &db - y * &da
                } else {
                    x * &db + y * &da
                }
            })
            .collect();
        normalize_big(n, v, da * db)
    }

    fn mul_same(a: &Cyclotomic, b: &Cyclotomic) -> Cyclotomic {
        let n = a.n;
        let f = field(n);
        if let (Repr::Small { num: na, den: da }, Repr::Small { num: nb, den: db }) =
            (&a.repr, &b.repr)
        {
            if let Some(c) = mul_small(n, f, na, *da, nb, *db) {
                return c;
            }
        }
        let (na, da) = a.big_parts();
        let (nb, db) = b.big_parts();
        let mut v = vec![BigInt::zero(); na.len() + nb.len() - 1];
        for (i, x) in na.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in nb.iter().enumerate() {
                if !y.is_zero() {
                    v[i + j] += x * y;
                }
            }
        }
        reduce_big(&mut v, f);
        normalize_big(n, v, da * db)
    }

    /// `self * k` for a small integer.
    pub fn scale_i64(&self, k: i64) -> Self {
        self * &Cyclotomic::from_i64(k)
    }
}

fn mul_small(n: u32, f: &FieldData, na: &[i64], da: i64, nb: &[i64], db: i64) -> Option<Cyclotomic> {
    let den = (da as i128).checked_mul(db as i128)?;
    if n == 1 || n == 2 {
        let v = (na[0] as i128).checked_mul(nb[0] as i128)?;
        if den == 1 {
            if let Ok(x) = i64::try_from(v) {
                return Some(Cyclotomic { n, repr: Repr::Small { num: smallvec![x], den: 1 } });
            }
        }
        return Some(normalize_i128(n, vec![v], den));
    }
    let mut v = vec![0i128; na.len() + nb.len() - 1];
    for (i, &x) in na.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in nb.iter().enumerate() {
            if y != 0 {
                v[i + j] = v[i + j].checked_add(x as i128 * y as i128)?;
            }
        }
    }
    reduce_i128(&mut v, f)?;
    Some(normalize_i128(n, v, den))
}

fn pad_rational(q: BigInt, phi: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); phi];
    v[0] = q;
    v
}

fn embed_big(m: u32, step: usize, num: &[BigInt], den: BigInt, target: &FieldData) -> Cyclotomic {
    let mut v = vec![BigInt::zero(); (num.len() - 1) * step + 1];
    for (k, c) in num.iter().enumerate() {
        v[k * step] = c.clone();
    }
    reduce_big(&mut v, target);
    normalize_big(m, v, den)
}

/// Units modulo n in increasing order (1 first).
fn units(n: u32) -> Vec<u32> {
    if n == 1 {
        return vec![1];
    }
    (1..n).filter(|&a| gcd_u32(a, n) == 1).collect()
}

fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Reduce modulo the (monic) cyclotomic polynomial, truncating to length φ.
fn reduce_i128(v: &mut Vec<i128>, f: &FieldData) -> Option<()> {
    let phi = f.phi;
    if v.len() < phi {
        v.resize(phi, 0);
        return Some(());
    }
    for i in (phi..v.len()).rev() {
        let c = v[i];
        if c != 0 {
            let base = i - phi;
            for (j, &pj) in f.poly[..phi].iter().enumerate() {
                if pj != 0 {
                    let t = c.checked_mul(pj as i128)?;
                    v[base + j] = v[base + j].checked_sub(t)?;
                }
            }
            v[i] = 0;
        }
    }
    v.truncate(phi);
    Some(())
}

fn reduce_big(v: &mut Vec<BigInt>, f: &FieldData) {
    let phi = f.phi;
    if v.len() < phi {
        v.resize(phi, BigInt::zero());
        return;
    }
    for i in (phi..v.len()).rev() {
        if v[i].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut v[i]);
        let base = i - phi;
        for (j, &pj) in f.poly[..phi].iter().enumerate() {
            if pj != 0 {
                v[base + j] -= &c * pj;
            }
        }
    }
    v.truncate(phi);
}

fn normalize_i128(n: u32, mut num: Vec<i128>, mut den: i128) -> Cyclotomic {
    debug_assert!(den != 0);
    if den < 0 {
        if den == i128::MIN || num.contains(&i128::MIN) {
            let num = num.into_iter().map(BigInt::from).collect();
            return normalize_big(n, num, BigInt::from(den));
        }
        den = -den;
        for c in num.iter_mut() {
            *c = -*c;
        }
    }
    if den != 1 {
        let mut g = den;
        for &c in &num {
            if g == 1 {
                break;
            }
            if c != 0 {
                g = g.gcd(&c);
            }
        }
        if g > 1 {
            den /= g;
            for c in num.iter_mut() {
                *c /= g;
            }
        }
    }
    let den64 = i64::try_from(den);
    let fits = num.iter().all(|&c| i64::try_from(c).is_ok());
    match den64 {
        Ok(d) if fits => Cyclotomic {
            n,
            repr: Repr::Small { num: num.into_iter().map(|c| c as i64).collect(), den: d },
        },
        _ => Cyclotomic {
            n,
            repr: Repr::Big { num: num.into_iter().map(BigInt::from).collect(), den: BigInt::from(den) },
        },
    }
}

fn normalize_big(n: u32, mut num: Vec<BigInt>, mut den: BigInt) -> Cyclotomic {
    debug_assert!(!den.is_zero());
    if den.is_negative() {
        den = -den;
        for c in num.iter_mut() {
            *c = -std::mem::take(c);
        }
    }
    if !den.is_one() {
        let mut g = den.clone();
        for c in &num {
            if g.is_one() {
                break;
            }
            if !c.is_zero() {
                g = g.gcd(c);
            }
        }
        if !g.is_one() {
            den /= &g;
            for c in num.iter_mut() {
                *c /= &g;
            }
        }
    }
    let small_den = den.to_i64();
    let small_num: Option<SmallNum> = num.iter().map(|c| c.to_i64()).collect();
    match (small_num, small_den) {
        (Some(s), Some(d)) => Cyclotomic { n, repr: Repr::Small { num: s, den: d } },
        _ => Cyclotomic { n, repr: Repr::Big { num, den } },
    }
}

/// Solve `Σ y_j cols[j] = target` over ℚ (all entries rational); `None` if inconsistent.
fn solve_rational(cols: &[Vec<Cyclotomic>], target: &[Cyclotomic]) -> Option<Vec<Cyclotomic>> {
    let rows = target.len();
    let ncols = cols.len();
    let mut m: Vec<Vec<Cyclotomic>> = (0..rows)
        .map(|i| {
            let mut r: Vec<Cyclotomic> = cols.iter().map(|c| c[i].clone()).collect();
            r.push(target[i].clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].checked_inv().ok()?;
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                for j in 0..=ncols {
                    let t = &factor * &m[r][j];
                    m[i][j] = &m[i][j] - &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[ncols].is_zero()) {
        return None;
    }
    let mut sol = vec![Cyclotomic::zero(); ncols];
    for (i, &c) in pivots.iter().enumerate() {
        sol[c] = m[i][ncols].clone();
    }
    Some(sol)
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.n == other.n {
            return self.repr == other.repr;
        }
        let (a, b) = Cyclotomic::aligned(self, other);
        a.repr == b.repr
    }
}

impl Eq for Cyclotomic {}

impl Hash for Cyclotomic {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.fingerprint());
    }
}

impl Default for Cyclotomic {
    fn default() -> Self {
        Cyclotomic::zero()
    }
}

impl From<i64> for Cyclotomic {
    fn from(v: i64) -> Self {
        Cyclotomic::from_i64(v)
    }
}

impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &'a Cyclotomic) -> Cyclotomic {
        let (a, b) = Cyclotomic::aligned(self, rhs);
        Cyclotomic::add_same(&a, &b, false)
    }
}

impl<'a> Sub<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &'a Cyclotomic) -> Cyclotomic {
        let (a, b) = Cyclotomic::aligned(self, rhs);
        Cyclotomic::add_same(&a, &b, true)
    }
}

impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &'a Cyclotomic) -> Cyclotomic {
        let (a, b) = Cyclotomic::aligned(self, rhs);
        Cyclotomic::mul_same(&a, &b)
    }
}

/// Panics on division by zero; use [`Cyclotomic::checked_div`] to get an error instead.
impl<'a> Div<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn div(self, rhs: &'a Cyclotomic) -> Cyclotomic {
        self.checked_div(rhs).expect("cyclotomic division by zero")
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        let repr = match &self.repr {
            Repr::Small { num, den } if num.iter().all(|&c| c != i64::MIN) => {
                Repr::Small { num: num.iter().map(|&c| -c).collect(), den: *den }
            }
            _ => {
                let (num, den) = self.big_parts();
                return normalize_big(self.n, num.into_iter().map(|c| -c).collect(), den);
            }
        };
        Cyclotomic { n: self.n, repr }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: &'a Cyclotomic) -> Cyclotomic {
                (&self).$m(rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(usize, BigInt, BigInt)> = self
            .coeffs()
            .into_iter()
            .enumerate()
            .filter(|(_, (p, _))| !p.is_zero())
            .map(|(k, (p, q))| (k, p, q))
            .collect();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, p, q)) in terms.iter().enumerate() {
            let neg = p.is_negative();
            let abs = p.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let coeff = if q.is_one() { abs.to_string() } else { format!("{abs}/{q}") };
            match k {
                0 => write!(f, "{coeff}")?,
                _ => {
                    if !(abs.is_one() && q.is_one()) {
                        write!(f, "{coeff}*")?;
                    }
                    write!(f, "z{}", self.n)?;
                    if *k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic({self})")
    }
}

/// Total order on encodings in the minimal field, so it depends only on the
/// value; only meaningful for deterministic sorting.
impl Ord for Cyclotomic {
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        fn key(x: &Cyclotomic) -> (u32, Vec<BigInt>, BigInt) {
            if let Some((p, q)) = x.to_rational() {
                return (1, vec![p], q);
            }
            let m = x.to_minimal();
            let (num, den) = m.big_parts();
            (m.n, num, den)
        }
        key(self).cmp(&key(other))
    }
}

impl PartialOrd for Cyclotomic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(k: i64, n: u32) -> Cyclotomic {
        Cyclotomic::root_of_unity(k, n)
    }

    #[test]
    fn root_examples() {
        assert!(z(0, 1).is_one());
        assert_eq!(&z(1, 3) + &z(2, 3), Cyclotomic::from_i64(-1));
        assert_eq!(z(1, 4).pow(2), Cyclotomic::from_i64(-1));
    }

    #[test]
    fn inverse_times_value_is_one() {
        let x = &z(1, 5) + &Cyclotomic::one();
        let inv = x.checked_inv().unwrap();
        assert!((&inv * &x).is_one());
    }

    #[test]
    fn root_order() {
        assert_eq!(z(5, 12).order_as_root_of_unity(), Some(12));
        assert_eq!(z(2, 6).order_as_root_of_unity(), Some(3));
        assert_eq!(Cyclotomic::from_i64(-1).order_as_root_of_unity(), Some(2));
        assert_eq!(Cyclotomic::from_i64(2).order_as_root_of_unity(), None);
        // ζ_3 seen inside ℚ(ζ_3) has -ζ_3 of order 6
        assert_eq!((-z(1, 3)).order_as_root_of_unity(), Some(6));
    }

    #[test]
    fn self_difference_is_zero() {
        let d = &z(1, 3) - &z(1, 3);
        assert!(d.is_zero());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(Cyclotomic::one().checked_div(&Cyclotomic::zero()), Err(CycloError::DivisionByZero));
    }

    #[test]
    fn mixed_conductors_compare_and_hash_equal() {
        let a = z(1, 3);
        let b = z(4, 12);
        assert_eq!(a, b);
        assert_eq!(a.fingerprint(), b.fingerprint());
        assert_eq!(z(2, 4), Cyclotomic::from_i64(-1));
        assert_eq!(z(2, 4).fingerprint(), Cyclotomic::from_i64(-1).fingerprint());
    }

    #[test]
    fn order_ignores_the_ambient_field() {
        let vals = [z(1, 3), z(2, 3), &z(1, 4) + &z(1, 3), Cyclotomic::from_i64(-2), z(1, 12), &z(1, 5) - &z(1, 3)];
        for a in &vals {
            for b in &vals {
                let c = a.cmp(b);
                assert_eq!(a.embed(60).cmp(b), c);
                assert_eq!(a.cmp(&b.embed(60)), c);
                assert_eq!(a.embed(60).cmp(&b.embed(120)), c);
            }
        }
    }

    #[test]
    fn roots_sum_to_zero_and_power_to_one() {
        for n in 1..=60u32 {
            let mut s = Cyclotomic::zero();
            for k in 0..n {
                s = &s + &z(k as i64, n);
            }
            if n == 1 {
                assert!(s.is_one());
            } else {
                assert!(s.is_zero(), "sum of {n}-th roots");
            }
            assert!(z(1, n).pow(n as i64).is_one(), "ζ_{n}^{n}");
        }
    }

    #[test]
    fn big_fallback_round_trips() {
        let big = Cyclotomic::from_i64(i64::MAX);
        let sq = &big * &big;
        assert!(matches!(sq.repr, Repr::Big { .. }));
        let back = sq.checked_div(&big).unwrap();
        assert_eq!(back, big);
        assert!(matches!(back.repr, Repr::Small { .. }));
    }

    #[test]
    fn minimal_conductor_descends() {
        let x = z(4, 12); // = ζ_3
        assert_eq!(x.minimal_conductor(), 3);
        assert_eq!(x.to_minimal().conductor(), 3);
        assert_eq!(x.to_minimal(), z(1, 3));
        let i = z(3, 12);
        assert_eq!(i.minimal_conductor(), 4);
        let r = z(6, 12);
        assert_eq!(r.minimal_conductor(), 1);
        // √5 = 1 + 2(ζ5 + ζ5^4) lives in conductor 5
        let s5 = &Cyclotomic::one() + &(&z(1, 5) + &z(4, 5)).scale_i64(2);
        assert_eq!((&s5 * &s5), Cyclotomic::from_i64(5));
        assert_eq!(s5.minimal_conductor(), 5);
        // ζ_10 generates the same field as ζ_5
        assert_eq!(z(1, 10).minimal_conductor(), 5);
    }

    #[test]
    fn norm_of_one_plus_zeta() {
        let x = &z(1, 5) + &Cyclotomic::one();
        assert_eq!(x.norm(), (BigInt::from(1), BigInt::from(1)));
        let y = &Cyclotomic::one() - &z(1, 5);
        assert_eq!(y.norm(), (BigInt::from(5), BigInt::from(1)));
    }

    #[test]
    fn display_format() {
        let x = &z(1, 3).scale_i64(2) - &Cyclotomic::rational(1, 2).unwrap();
        assert_eq!(x.to_string(), "-1/2 + 2*z3");
    }
}
