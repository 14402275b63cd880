//! Zech-logarithm representation of small finite fields F_q.
//!
//! Nonzero elements are stored as discrete logarithms with respect to a
//! fixed generator, so multiplication and inversion are index arithmetic
//! and addition is one table lookup. The quadratic character is the parity
//! of the logarithm. This is the inner loop of the surface point counts:
//! everything here is u32/u64 arithmetic on precomputed tables.

use alloc::vec::Vec;

use crate::field::Field;
use crate::finite::{ExtField, FFElem};

/// Sentinel log value representing zero.
pub const ZERO: u32 = u32::MAX;

/// F_q with Zech logarithm tables. Practical for q up to ~2^22.
#[derive(Debug)]
pub struct ZechField {
    pub q: u64,
    pub p: u64,
    pub m: usize,
    /// zech[k] = log(1 + g^k), or ZERO when g^k = -1.
    zech: Vec<u32>,
    /// element index (base-p digit encoding) -> log
    log_of_index: Vec<u32>,
    /// log -> element index
    index_of_log: Vec<u32>,
    /// log of -1 (0 when p = 2, (q-1)/2 otherwise)
    log_minus_one: u32,
}

/// A Zech-represented element: the log, or ZERO.
pub type Zel = u32;

impl ZechField {
    /// Build tables from a generic extension field descriptor.
    pub fn build(f: &ExtField) -> Self {
        let q = f.q();
        assert!(q >= 3, "need a field with at least 3 elements");
        assert!(q <= (1 << 24), "Zech tables capped at 2^24 elements");
        let g = find_generator(f);
        let qm1 = (q - 1) as usize;
        let mut log_of_index = alloc::vec![ZERO; q as usize];
        let mut index_of_log = alloc::vec![0u32; qm1];
        let mut acc = f.one();
        for k in 0..qm1 {
            let idx = f.index_of(&acc) as usize;
            debug_assert!(log_of_index[idx] == ZERO);
            log_of_index[idx] = k as u32;
            index_of_log[k] = idx as u32;
            acc = f.mul(&acc, &g);
        }
        debug_assert!(f.is_one(&acc));
        // 1 + g^k for every k
        let one_idx = f.index_of(&f.one());
        let mut zech = alloc::vec![ZERO; qm1];
        for k in 0..qm1 {
            let x = f.from_index(index_of_log[k] as u64);
            let y = f.add(&f.one(), &x);
            if f.is_zero(&y) {
                zech[k] = ZERO;
            } else {
                zech[k] = log_of_index[f.index_of(&y) as usize];
            }
        }
        let _ = one_idx;
        let log_minus_one = if q % 2 == 0 { 0 } else { ((q - 1) / 2) as u32 };
        ZechField {
            q,
            p: f.fp.p,
            m: f.m,
            zech,
            log_of_index,
            index_of_log,
            log_minus_one,
        }
    }

    #[inline]
    pub fn zero(&self) -> Zel {
        ZERO
    }
    #[inline]
    pub fn one(&self) -> Zel {
        0
    }
    #[inline]
    pub fn is_zero(&self, a: Zel) -> bool {
        a == ZERO
    }

    /// Convert from the coefficient-vector index encoding.
    #[inline]
    pub fn from_index(&self, idx: u64) -> Zel {
        if idx == 0 {
            ZERO
        } else {
            self.log_of_index[idx as usize]
        }
    }

    #[inline]
    pub fn to_index(&self, a: Zel) -> u64 {
        if a == ZERO {
            0
        } else {
            self.index_of_log[a as usize] as u64
        }
    }

    pub fn from_elem(&self, f: &ExtField, x: &FFElem) -> Zel {
        self.from_index(f.index_of(x))
    }

    pub fn to_elem(&self, f: &ExtField, a: Zel) -> FFElem {
        f.from_index(self.to_index(a))
    }

    #[inline]
    pub fn mul(&self, a: Zel, b: Zel) -> Zel {
        if a == ZERO || b == ZERO {
            return ZERO;
        }
        let s = a as u64 + b as u64;
        let qm1 = self.q - 1;
        (if s >= qm1 { s - qm1 } else { s }) as u32
    }

    #[inline]
    pub fn inv(&self, a: Zel) -> Zel {
        debug_assert!(a != ZERO);
        if a == 0 {
            0
        } else {
            (self.q - 1 - a as u64) as u32
        }
    }

    #[inline]
    pub fn neg(&self, a: Zel) -> Zel {
        if a == ZERO {
            ZERO
        } else {
            self.mul(a, self.log_minus_one)
        }
    }

    #[inline]
    pub fn add(&self, a: Zel, b: Zel) -> Zel {
        if a == ZERO {
            return b;
        }
        if b == ZERO {
            return a;
        }
        // a + b = a * (1 + b/a)
        let r = self.mul(b, self.inv(a));
        let z = self.zech[r as usize];
        if z == ZERO {
            ZERO
        } else {
            self.mul(a, z)
        }
    }

    #[inline]
    pub fn sub(&self, a: Zel, b: Zel) -> Zel {
        self.add(a, self.neg(b))
    }

    /// Quadratic character from log parity (odd q).
    #[inline]
    pub fn chi(&self, a: Zel) -> i32 {
        if a == ZERO {
            0
        } else if a & 1 == 0 {
            1
        } else {
            -1
        }
    }

    /// Square root: halve the log (odd q). Deterministic: returns the even
    /// choice of the two logs when both halves exist.
    pub fn sqrt(&self, a: Zel) -> Option<Zel> {
        if a == ZERO {
            return Some(ZERO);
        }
        if a & 1 == 1 {
            return None;
        }
        let half = (a / 2) as u64;
        let other = half + (self.q - 1) / 2;
        Some(half.min(other) as u32)
        // both half and half+(q-1)/2 square to a; take the smaller log
    }

    #[inline]
    pub fn pow(&self, a: Zel, e: u64) -> Zel {
        if a == ZERO {
            return if e == 0 { 0 } else { ZERO };
        }
        ((a as u128 * e as u128) % (self.q - 1) as u128) as u32
    }

    /// Arithmetic Frobenius x -> x^p.
    #[inline]
    pub fn frobenius(&self, a: Zel) -> Zel {
        self.pow(a, self.p)
    }

    /// x -> x^(p^e).
    #[inline]
    pub fn frobenius_pow(&self, a: Zel, e: u32) -> Zel {
        if a == ZERO {
            return ZERO;
        }
        let mut exp: u64 = 1;
        for _ in 0..e {
            exp = (exp as u128 * self.p as u128 % (self.q - 1) as u128) as u64;
        }
        self.pow(a, exp)
    }

    /// Smallest d >= 1 (dividing m) with a in F_{p^d}.
    pub fn minimal_degree(&self, a: Zel) -> usize {
        if a == ZERO {
            return 1;
        }
        let mut d = 1;
        loop {
            if self.m % d == 0 && self.frobenius_pow(a, d as u32) == a {
                return d;
            }
            d += 1;
            debug_assert!(d <= self.m);
        }
    }
}

fn find_generator(f: &ExtField) -> FFElem {
    let q = f.q();
    let qm1 = q - 1;
    // factor q - 1 (small)
    let mut fac = Vec::new();
    let mut n = qm1;
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            fac.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        fac.push(n);
    }
    let mut idx = 2u64;
    loop {
        let g = f.from_index(idx);
        if !f.is_zero(&g) {
            let mut ok = true;
            for p in &fac {
                if f.is_one(&f.pow(&g, qm1 / p)) {
                    ok = false;
                    break;
                }
            }
            if ok {
                return g;
            }
        }
        idx += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_field(p: u64, m: usize) {
        let f = ExtField::new(p, m);
        let z = ZechField::build(&f);
        let q = z.q;
        // ring laws against the generic field on every pair for small q
        if q <= 50 {
            for i in 0..q {
                for j in 0..q {
                    let a = f.from_index(i);
                    let b = f.from_index(j);
                    let za = z.from_index(i);
                    let zb = z.from_index(j);
                    assert_eq!(z.to_index(z.add(za, zb)), f.index_of(&f.add(&a, &b)));
                    assert_eq!(z.to_index(z.mul(za, zb)), f.index_of(&f.mul(&a, &b)));
                    assert_eq!(z.to_index(z.sub(za, zb)), f.index_of(&f.sub(&a, &b)));
                }
            }
        }
        // character agrees with the generic one
        for i in 0..q.min(400) {
            let a = f.from_index(i);
            let za = z.from_index(i);
            assert_eq!(z.chi(za), f.quadratic_character(&a));
            if let Some(r) = z.sqrt(za) {
                assert_eq!(z.mul(r, r), za);
            } else {
                assert_eq!(z.chi(za), -1);
            }
        }
    }

    #[test]
    fn zech_tables_match_generic_arithmetic() {
        check_field(5, 1);
        check_field(5, 2);
        check_field(7, 1);
        check_field(17, 1);
        check_field(17, 2);
        check_field(11, 2);
    }

    #[test]
    fn frobenius_and_minimal_degree() {
        let f = ExtField::new(5, 2);
        let z = ZechField::build(&f);
        for i in 0..z.q {
            let a = z.from_index(i);
            assert_eq!(z.frobenius_pow(a, 2), a);
            let d = z.minimal_degree(a);
            assert!(d == 1 || d == 2);
            let generic_d = f.minimal_degree(&f.from_index(i));
            assert_eq!(d, generic_d);
        }
    }
}
