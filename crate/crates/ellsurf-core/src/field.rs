//! Field abstraction used throughout the crate.
//!
//! Fields are passed around as cheap context objects ("field descriptors")
//! and elements are plain data. All arithmetic goes through the descriptor,
//! in the style of ring-object libraries: `f.mul(&a, &b)` rather than
//! operator overloading. This keeps one generic polynomial/curve stack
//! working over Q, number fields, F_p, F_{p^m} and residue-field towers.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};


/// A field with exact arithmetic. Implementors are immutable descriptors,
/// safe to share read-only across threads.
pub trait Field: Clone + PartialEq + Debug {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// Characteristic of the field, 0 for characteristic zero.
    fn characteristic(&self) -> u64;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let bi = self.inv(b).expect("division by zero");
        self.mul(a, &bi)
    }

    fn square(&self, a: &Self::Elem) -> Self::Elem {
        self.mul(a, a)
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.square(&base);
            e >>= 1;
        }
        acc
    }

    /// Short human-readable rendering, used by reports and errors.
    fn render(&self, a: &Self::Elem) -> String;

    /// Decide whether an element is a square in this field, when the field
    /// supports it. `None` means the test is unavailable/undecided here.
    fn decide_square(&self, _a: &Self::Elem) -> Option<bool> {
        None
    }

    /// Degree over the prime field (finite fields) or over Q (number
    /// fields); 1 for Q and F_p themselves.
    fn absolute_degree(&self) -> usize {
        1
    }

    /// Exact square root when the field can produce one; None when the
    /// element is not a square or the field has no constructive test.
    fn sqrt_elem(&self, _a: &Self::Elem) -> Option<Self::Elem> {
        None
    }

    /// Draw an element for randomized algorithms (equal-degree splitting,
    /// curve-order sampling). Must range over the whole field for finite
    /// fields; the default only reaches the prime subfield and is
    /// overridden wherever that matters.
    fn random_elem(&self, rng: &mut SplitMix64) -> Self::Elem {
        self.from_i64(rng.next_u64() as i64)
    }

    /// Rescale a nonzero coefficient slice by a unit to keep coefficient
    /// representations small along gcd remainder chains. The default makes
    /// the slice monic; characteristic-zero fields strip the rational
    /// content instead, which is what tames the coefficient swell.
    fn normalize_unit(&self, coeffs: &mut [Self::Elem]) {
        let lead = coeffs.last().cloned().expect("nonzero");
        if self.is_one(&lead) {
            return;
        }
        let inv = self.inv(&lead).expect("leading coefficient invertible");
        for c in coeffs.iter_mut() {
            *c = self.mul(c, &inv);
        }
    }
}

/// Content of a family of rationals: gcd of numerators over lcm of
/// denominators, with the sign of the leading entry.
pub fn rational_content_scale(values: &mut [BigRational]) {
    use num_integer::Integer;
    let mut num_gcd = BigInt::zero();
    let mut den_lcm = BigInt::one();
    for v in values.iter() {
        if v.is_zero() {
            continue;
        }
        num_gcd = num_gcd.gcd(v.numer());
        den_lcm = den_lcm.lcm(v.denom());
    }
    if num_gcd.is_zero() {
        return;
    }
    let mut scale = BigRational::new(den_lcm, num_gcd);
    if let Some(last) = values.iter().rev().find(|v| !v.is_zero()) {
        if (last * &scale).is_negative() {
            scale = -scale;
        }
    }
    if scale.is_one() {
        return;
    }
    for v in values.iter_mut() {
        *v = &*v * &scale;
    }
}

/// The rational numbers.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn render(&self, a: &BigRational) -> String {
        use alloc::format;
        if a.is_integer() {
            format!("{}", a.numer())
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
    fn decide_square(&self, a: &BigRational) -> Option<bool> {
        Some(rational_is_square(a))
    }
    fn sqrt_elem(&self, a: &BigRational) -> Option<BigRational> {
        rational_sqrt(a)
    }
    fn normalize_unit(&self, coeffs: &mut [BigRational]) {
        rational_content_scale(coeffs);
    }
}

pub fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat_of_bigint(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

/// Exact square test for a rational number.
pub fn rational_is_square(a: &BigRational) -> bool {
    if a.is_zero() {
        return true;
    }
    if a.is_negative() {
        return false;
    }
    int_is_square(a.numer()) && int_is_square(a.denom())
}

/// Exact square root of a rational, if one exists.
pub fn rational_sqrt(a: &BigRational) -> Option<BigRational> {
    if a.is_zero() {
        return Some(BigRational::zero());
    }
    if a.is_negative() {
        return None;
    }
    let n = a.numer().sqrt();
    let d = a.denom().sqrt();
    if &(&n * &n) == a.numer() && &(&d * &d) == a.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

pub fn int_is_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &(&r * &r) == n
}

/// Squarefree kernel of a nonzero integer together with its sign:
/// `n = sign * kernel * square`. Works by trial division; inputs in this
/// crate are discriminant-sized, well within range.
pub fn int_squarefree_kernel(n: &BigInt) -> Option<(i8, BigInt)> {
    if n.is_zero() {
        return None;
    }
    let sign: i8 = if n.is_negative() { -1 } else { 1 };
    let mut m = n.abs();
    let mut kernel = BigInt::one();
    let mut p = BigInt::from(2u32);
    while &p * &p <= m {
        let mut mult = 0u32;
        loop {
            let (q, r) = num_integer::Integer::div_rem(&m, &p);
            if r.is_zero() {
                m = q;
                mult += 1;
            } else {
                break;
            }
        }
        if mult % 2 == 1 {
            kernel *= &p;
        }
        p += 1u32;
    }
    // leftover m is prime or 1
    if !m.is_one() {
        kernel *= &m;
    }
    Some((sign, kernel))
}

/// Deterministic splitmix64 stream; used where the algorithms need
/// "random" probes (equal-degree splitting, BSGS sampling) while staying
/// reproducible run to run.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        self.next_u64() % bound
    }
}

/// Helper: collect small primes by sieve, for certificates and trial division.
pub fn small_primes(limit: u64) -> Vec<u64> {
    let limit = limit as usize;
    let mut sieve = alloc::vec![true; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if sieve[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                sieve[j] = false;
                j += i;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squarefree_kernel_basics() {
        // 12 = 2^2 * 3
        let (s, k) = int_squarefree_kernel(&BigInt::from(12)).unwrap();
        assert_eq!((s, k), (1, BigInt::from(3)));
        let (s, k) = int_squarefree_kernel(&BigInt::from(-50)).unwrap();
        assert_eq!((s, k), (-1, BigInt::from(2)));
        assert!(int_squarefree_kernel(&BigInt::zero()).is_none());
    }

    #[test]
    fn rational_square_detection() {
        assert!(rational_is_square(&BigRational::new(
            BigInt::from(4),
            BigInt::from(9)
        )));
        assert!(!rational_is_square(&rat_int(2)));
        assert_eq!(rational_sqrt(&rat_int(49)), Some(rat_int(7)));
    }
}
