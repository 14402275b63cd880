//! Dense univariate polynomials over any `Field`.
//!
//! The zero polynomial has degree `None` (the spec's "-infinity" sentinel);
//! every other polynomial keeps a nonzero leading coefficient.

use alloc::string::String;
use alloc::vec::Vec;

use crate::field::Field;

#[derive(Clone, PartialEq, Debug)]
pub struct Poly<F: Field> {
    /// Coefficients, constant term first. Invariant: empty or last != 0.
    pub coeffs: Vec<F::Elem>,
}

impl<F: Field> Poly<F> {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn from_coeffs(f: &F, coeffs: Vec<F::Elem>) -> Self {
        let mut p = Poly { coeffs };
        p.normalize(f);
        p
    }

    pub fn constant(f: &F, c: F::Elem) -> Self {
        Poly::from_coeffs(f, alloc::vec![c])
    }

    pub fn one(f: &F) -> Self {
        Poly::constant(f, f.one())
    }

    /// The monomial `c * x^k`.
    pub fn monomial(f: &F, c: F::Elem, k: usize) -> Self {
        let mut coeffs = alloc::vec![f.zero(); k + 1];
        coeffs[k] = c;
        Poly::from_coeffs(f, coeffs)
    }

    /// `x`
    pub fn x(f: &F) -> Self {
        Poly::monomial(f, f.one(), 1)
    }

    pub fn from_i64(f: &F, cs: &[i64]) -> Self {
        Poly::from_coeffs(f, cs.iter().map(|&c| f.from_i64(c)).collect())
    }

    fn normalize(&mut self, f: &F) {
        while let Some(last) = self.coeffs.last() {
            if f.is_zero(last) {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// Degree as isize with zero polynomial mapped to -1 (handy in loops).
    pub fn deg_i(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn leading(&self, f: &F) -> F::Elem {
        self.coeffs.last().cloned().unwrap_or_else(|| f.zero())
    }

    pub fn coeff(&self, f: &F, k: usize) -> F::Elem {
        self.coeffs.get(k).cloned().unwrap_or_else(|| f.zero())
    }

    pub fn is_one(&self, f: &F) -> bool {
        self.coeffs.len() == 1 && f.is_one(&self.coeffs[0])
    }

    pub fn is_monic(&self, f: &F) -> bool {
        self.coeffs.last().map(|c| f.is_one(c)).unwrap_or(false)
    }

    pub fn add(f: &F, a: &Self, b: &Self) -> Self {
        let n = a.coeffs.len().max(b.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            let x = a.coeffs.get(i);
            let y = b.coeffs.get(i);
            coeffs.push(match (x, y) {
                (Some(x), Some(y)) => f.add(x, y),
                (Some(x), None) => x.clone(),
                (None, Some(y)) => y.clone(),
                (None, None) => unreachable!(),
            });
        }
        Poly::from_coeffs(f, coeffs)
    }

    pub fn sub(f: &F, a: &Self, b: &Self) -> Self {
        Poly::add(f, a, &Poly::neg(f, b))
    }

    pub fn neg(f: &F, a: &Self) -> Self {
        Poly {
            coeffs: a.coeffs.iter().map(|c| f.neg(c)).collect(),
        }
    }

    pub fn mul(f: &F, a: &Self, b: &Self) -> Self {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = alloc::vec![f.zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if f.is_zero(y) {
                    continue;
                }
                coeffs[i + j] = f.add(&coeffs[i + j], &f.mul(x, y));
            }
        }
        Poly::from_coeffs(f, coeffs)
    }

    pub fn scale(f: &F, a: &Self, c: &F::Elem) -> Self {
        if f.is_zero(c) {
            return Poly::zero();
        }
        Poly::from_coeffs(f, a.coeffs.iter().map(|x| f.mul(x, c)).collect())
    }

    pub fn pow(f: &F, a: &Self, mut e: u64) -> Self {
        let mut base = a.clone();
        let mut acc = Poly::one(f);
        while e > 0 {
            if e & 1 == 1 {
                acc = Poly::mul(f, &acc, &base);
            }
            base = Poly::mul(f, &base, &base);
            e >>= 1;
        }
        acc
    }

    /// Euclidean division, `a = q*b + r` with `deg r < deg b`.
    pub fn divrem(f: &F, a: &Self, b: &Self) -> (Self, Self) {
        assert!(!b.is_zero(), "division by zero polynomial");
        let db = b.coeffs.len() - 1;
        let lead_inv = f.inv(&b.coeffs[db]).expect("leading coeff invertible");
        let mut rem = a.coeffs.clone();
        if rem.len() <= db {
            return (Poly::zero(), a.clone());
        }
        let mut quot = alloc::vec![f.zero(); rem.len() - db];
        for i in (db..rem.len()).rev() {
            let c = f.mul(&rem[i], &lead_inv);
            if !f.is_zero(&c) {
                quot[i - db] = c.clone();
                for j in 0..=db {
                    let t = f.mul(&c, &b.coeffs[j]);
                    rem[i - db + j] = f.sub(&rem[i - db + j], &t);
                }
            }
        }
        (Poly::from_coeffs(f, quot), Poly::from_coeffs(f, rem))
    }

    pub fn rem(f: &F, a: &Self, b: &Self) -> Self {
        Poly::divrem(f, a, b).1
    }

    /// Exact division; panics if the remainder is nonzero.
    pub fn div_exact(f: &F, a: &Self, b: &Self) -> Self {
        let (q, r) = Poly::divrem(f, a, b);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn divides(f: &F, b: &Self, a: &Self) -> bool {
        if b.is_zero() {
            return a.is_zero();
        }
        Poly::rem(f, a, b).is_zero()
    }

    /// Monic gcd. Remainders are unit-normalized along the way (content
    /// stripping over characteristic zero) to keep coefficients small.
    pub fn gcd(f: &F, a: &Self, b: &Self) -> Self {
        let mut a = a.clone();
        let mut b = b.clone();
        a.unit_normalize(f);
        b.unit_normalize(f);
        while !b.is_zero() {
            let mut r = Poly::rem(f, &a, &b);
            r.unit_normalize(f);
            a = b;
            b = r;
        }
        a.into_monic(f)
    }

    fn unit_normalize(&mut self, f: &F) {
        if !self.coeffs.is_empty() {
            f.normalize_unit(&mut self.coeffs);
        }
    }

    /// Extended gcd: returns (g, u, v) monic g with u*a + v*b = g.
    pub fn xgcd(f: &F, a: &Self, b: &Self) -> (Self, Self, Self) {
        let mut r0 = a.clone();
        let mut r1 = b.clone();
        let mut s0 = Poly::one(f);
        let mut s1 = Poly::zero();
        let mut t0 = Poly::zero();
        let mut t1 = Poly::one(f);
        while !r1.is_zero() {
            let (q, r) = Poly::divrem(f, &r0, &r1);
            let s = Poly::sub(f, &s0, &Poly::mul(f, &q, &s1));
            let t = Poly::sub(f, &t0, &Poly::mul(f, &q, &t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        if r0.is_zero() {
            return (Poly::zero(), Poly::zero(), Poly::zero());
        }
        let lc_inv = f.inv(&r0.leading(f)).unwrap();
        (
            Poly::scale(f, &r0, &lc_inv),
            Poly::scale(f, &s0, &lc_inv),
            Poly::scale(f, &t0, &lc_inv),
        )
    }

    pub fn into_monic(mut self, f: &F) -> Self {
        if let Some(lc) = self.coeffs.last().cloned() {
            if !f.is_one(&lc) {
                let inv = f.inv(&lc).expect("leading coeff invertible");
                for c in &mut self.coeffs {
                    *c = f.mul(c, &inv);
                }
            }
        }
        self
    }

    pub fn derivative(f: &F, a: &Self) -> Self {
        if a.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let coeffs = a
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| f.mul(c, &f.from_i64(i as i64)))
            .collect();
        Poly::from_coeffs(f, coeffs)
    }

    pub fn eval(&self, f: &F, x: &F::Elem) -> F::Elem {
        let mut acc = f.zero();
        for c in self.coeffs.iter().rev() {
            acc = f.add(&f.mul(&acc, x), c);
        }
        acc
    }

    /// Substitute another polynomial: `a(g(x))`.
    pub fn compose(f: &F, a: &Self, g: &Self) -> Self {
        let mut acc = Poly::zero();
        for c in a.coeffs.iter().rev() {
            acc = Poly::mul(f, &acc, g);
            acc = Poly::add(f, &acc, &Poly::constant(f, c.clone()));
        }
        acc
    }

    /// Coefficient reversal: `x^n a(1/x)` for `n = deg a` (zero maps to zero).
    pub fn reverse(f: &F, a: &Self) -> Self {
        let mut coeffs = a.coeffs.clone();
        coeffs.reverse();
        Poly::from_coeffs(f, coeffs)
    }

    /// `a(x) / x^k`, requiring x^k | a.
    pub fn shift_down(f: &F, a: &Self, k: usize) -> Self {
        if a.is_zero() {
            return Poly::zero();
        }
        assert!(a.coeffs.iter().take(k).all(|c| f.is_zero(c)));
        Poly::from_coeffs(f, a.coeffs[k..].to_vec())
    }

    /// Largest k with x^k | a (a nonzero).
    pub fn valuation_at_zero(&self, f: &F) -> usize {
        assert!(!self.is_zero());
        self.coeffs.iter().position(|c| !f.is_zero(c)).unwrap()
    }

    /// Radical: product of the distinct irreducible factors, each once
    /// (characteristic zero).
    pub fn radical(f: &F, a: &Self) -> Self {
        assert!(f.characteristic() == 0, "char-0 radical");
        assert!(!a.is_zero());
        let d = Poly::derivative(f, a);
        if d.is_zero() {
            // constant
            return Poly::one(f);
        }
        let g = Poly::gcd(f, a, &d);
        Poly::div_exact(f, a, &g).into_monic(f)
    }

    /// Odd-multiplicity part: the monic g with a/(lc*g) a perfect square.
    /// This is the square-class representative of a in F(t)*/(F(t)*)^2.
    pub fn odd_part(f: &F, a: &Self) -> Self {
        let mut out = Poly::one(f);
        for (g, m) in Poly::squarefree_decomposition(f, a) {
            if m % 2 == 1 {
                out = Poly::mul(f, &out, &g);
            }
        }
        out
    }

    /// Multiplicity profile: returns list of (g_i, i) with a = lc * prod g_i^i,
    /// g_i squarefree pairwise coprime (Yun's algorithm, characteristic 0).
    pub fn squarefree_decomposition(f: &F, a: &Self) -> Vec<(Self, usize)> {
        assert!(f.characteristic() == 0);
        assert!(!a.is_zero());
        let mut out = Vec::new();
        let a = a.clone().into_monic(f);
        if a.degree() == Some(0) {
            return out;
        }
        let da = Poly::derivative(f, &a);
        let mut g = Poly::gcd(f, &a, &da);
        let mut c = Poly::div_exact(f, &a, &g);
        let mut d = Poly::sub(f, &Poly::div_exact(f, &da, &g), &Poly::derivative(f, &c));
        let mut i = 1;
        loop {
            let p = Poly::gcd(f, &c, &d);
            if p.degree().map(|d| d > 0).unwrap_or(false) {
                out.push((p.clone(), i));
            }
            c = Poly::div_exact(f, &c, &p);
            if c.degree() == Some(0) {
                break;
            }
            d = Poly::sub(f, &Poly::div_exact(f, &d, &p), &Poly::derivative(f, &c));
            i += 1;
        }
        let _ = g.coeffs.drain(..); // g no longer needed
        out
    }

    /// Resultant of a and b via the subresultant-free Euclidean scheme
    /// (fine over fields).
    pub fn resultant(f: &F, a: &Self, b: &Self) -> F::Elem {
        if a.is_zero() || b.is_zero() {
            return f.zero();
        }
        let mut a = a.clone();
        let mut b = b.clone();
        let mut acc = f.one();
        loop {
            let db = match b.degree() {
                None => return f.zero(),
                Some(0) => {
                    let da = a.degree().unwrap() as u64;
                    return f.mul(&acc, &f.pow(&b.coeffs[0], da));
                }
                Some(d) => d,
            };
            let da = a.degree().unwrap();
            if da < db {
                core::mem::swap(&mut a, &mut b);
                if (da * db) % 2 == 1 {
                    acc = f.neg(&acc);
                }
                continue;
            }
            let r = Poly::rem(f, &a, &b);
            let dr = r.deg_i();
            let lb = b.leading(f);
            acc = f.mul(&acc, &f.pow(&lb, (da as i64 - dr.max(0) as i64) as u64));
            if r.is_zero() {
                return if db == 0 { acc } else { f.zero() };
            }
            if (da * db) % 2 == 1 {
                acc = f.neg(&acc);
            }
            a = b;
            b = r;
        }
    }

    pub fn render(&self, f: &F, var: &str) -> String {
        use alloc::format;
        if self.is_zero() {
            return String::from("0");
        }
        let mut parts: Vec<String> = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if f.is_zero(c) {
                continue;
            }
            let cs = f.render(c);
            let term = match i {
                0 => cs,
                1 if f.is_one(c) => format!("{var}"),
                1 => format!("{cs}*{var}"),
                _ if f.is_one(c) => format!("{var}^{i}"),
                _ => format!("{cs}*{var}^{i}"),
            };
            parts.push(term);
        }
        parts.join(" + ")
    }
}
