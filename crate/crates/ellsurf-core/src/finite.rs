//! Prime fields F_p and extensions F_{p^m}, quadratic characters, square
//! roots, irreducibility and factorization over finite fields.
//!
//! Characteristic 2 is rejected everywhere it would matter (the Weierstrass
//! machinery in this crate assumes odd characteristic, and the surfaces it
//! targets reduce at p >= 5).

use alloc::string::String;
use alloc::vec::Vec;

use num_traits::ToPrimitive;

use crate::field::{Field, SplitMix64};
use crate::poly::Poly;

/// F_p for a prime p < 2^32 (products fit u64 comfortably via u128).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PrimeField {
    pub p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        debug_assert!(crate::numfield::is_prime_u64(p));
        PrimeField { p }
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_i64(&self, n: i64) -> u64 {
        let p = self.p as i128;
        let r = (n as i128).rem_euclid(p);
        r as u64
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            Some(crate::numfield::pow_mod(*a, self.p - 2, self.p))
        }
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn render(&self, a: &u64) -> String {
        use alloc::format;
        format!("{a}")
    }
    fn decide_square(&self, a: &u64) -> Option<bool> {
        if *a == 0 {
            return Some(true);
        }
        Some(crate::numfield::pow_mod(*a, (self.p - 1) / 2, self.p) == 1)
    }
}

/// F_{p^m} presented as F_p[z]/(modulus). `m = 1` is allowed and behaves
/// like `PrimeField` with vector elements of length 1.
#[derive(Clone, PartialEq, Debug)]
pub struct ExtField {
    pub fp: PrimeField,
    pub m: usize,
    pub modulus: Poly<PrimeField>,
}

/// Element of `ExtField`: coefficient vector of length m (low degree first).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FFElem(pub Vec<u64>);

impl ExtField {
    /// Build F_{p^m} with the lexicographically smallest monic irreducible
    /// modulus of degree m: candidates x^m + sum c_i x^i are scanned with
    /// the coefficient tuple (c_{m-1},...,c_0) increasing as a base-p number.
    pub fn new(p: u64, m: usize) -> Self {
        assert!(p % 2 == 1, "odd characteristic required");
        assert!(m >= 1);
        let fp = PrimeField::new(p);
        if m == 1 {
            return ExtField {
                fp,
                m,
                modulus: Poly::x(&fp),
            };
        }
        let total = (p as u128).pow(m as u32);
        let mut k: u128 = 0;
        while k < total {
            let mut coeffs = alloc::vec![0u64; m + 1];
            coeffs[m] = 1;
            let mut kk = k;
            for i in (0..m).rev() {
                coeffs[i] = (kk % p as u128) as u64;
                kk /= p as u128;
            }
            let cand = Poly::from_coeffs(&fp, coeffs);
            if is_irreducible(&fp, &cand) {
                return ExtField {
                    fp,
                    m,
                    modulus: cand,
                };
            }
            k += 1;
        }
        unreachable!("irreducible polynomial of every degree exists");
    }

    /// F_{p^m} with a caller-supplied monic irreducible modulus.
    pub fn with_modulus(p: u64, modulus: Poly<PrimeField>) -> Self {
        let fp = PrimeField::new(p);
        let m = modulus.degree().expect("nonzero modulus");
        assert!(modulus.is_monic(&fp));
        assert!(m == 1 || is_irreducible(&fp, &modulus), "modulus reducible");
        ExtField { fp, m, modulus }
    }

    pub fn q(&self) -> u64 {
        self.fp.p.pow(self.m as u32)
    }

    pub fn q_u128(&self) -> u128 {
        (self.fp.p as u128).pow(self.m as u32)
    }

    pub fn generator_z(&self) -> FFElem {
        if self.m == 1 {
            return FFElem(alloc::vec![0]);
        }
        let mut v = alloc::vec![0u64; self.m];
        v[1] = 1;
        FFElem(v)
    }

    pub fn from_base(&self, c: u64) -> FFElem {
        let mut v = alloc::vec![0u64; self.m];
        v[0] = c % self.fp.p;
        FFElem(v)
    }

    /// Index of an element in [0, q): base-p digits, constant coeff least
    /// significant. Stable enumeration order used by tables and caches.
    pub fn index_of(&self, x: &FFElem) -> u64 {
        let mut idx: u64 = 0;
        for &c in x.0.iter().rev() {
            idx = idx * self.fp.p + c;
        }
        idx
    }

    pub fn from_index(&self, mut idx: u64) -> FFElem {
        let mut v = alloc::vec![0u64; self.m];
        for c in v.iter_mut() {
            *c = idx % self.fp.p;
            idx /= self.fp.p;
        }
        FFElem(v)
    }

    fn to_poly(&self, x: &FFElem) -> Poly<PrimeField> {
        Poly::from_coeffs(&self.fp, x.0.clone())
    }

    fn from_poly(&self, p: &Poly<PrimeField>) -> FFElem {
        let r = Poly::rem(&self.fp, p, &self.modulus);
        let mut v = alloc::vec![0u64; self.m];
        for (i, c) in r.coeffs.iter().enumerate() {
            v[i] = *c;
        }
        FFElem(v)
    }

    /// x -> x^p, the arithmetic Frobenius.
    pub fn frobenius(&self, x: &FFElem) -> FFElem {
        self.pow(x, self.fp.p)
    }

    /// Smallest d with x in F_{p^d} (d | m), via the fixed-point test
    /// x^{p^d} = x.
    pub fn minimal_degree(&self, x: &FFElem) -> usize {
        let mut d = 1;
        loop {
            if self.m % d == 0 {
                let mut y = x.clone();
                for _ in 0..d {
                    y = self.frobenius(&y);
                }
                if y == *x {
                    return d;
                }
            }
            d += 1;
            assert!(d <= self.m);
        }
    }

    /// Quadratic character: 0 on zero, +1 on nonzero squares, -1 otherwise.
    pub fn quadratic_character(&self, x: &FFElem) -> i32 {
        assert!(self.fp.p % 2 == 1, "odd characteristic required");
        if self.is_zero(x) {
            return 0;
        }
        let e = (self.q() - 1) / 2;
        let y = self.pow(x, e);
        if self.is_one(&y) {
            1
        } else {
            -1
        }
    }

    /// Deterministic square root: returns the root whose element index is
    /// smaller than its negative's, or None for non-residues.
    pub fn sqrt(&self, x: &FFElem) -> Option<FFElem> {
        assert!(self.fp.p % 2 == 1);
        if self.is_zero(x) {
            return Some(self.zero());
        }
        if self.quadratic_character(x) != 1 {
            return None;
        }
        let q = self.q();
        let r = if q % 4 == 3 {
            self.pow(x, (q + 1) / 4)
        } else {
            self.tonelli_shanks(x)
        };
        let neg = self.neg(&r);
        Some(if self.index_of(&r) <= self.index_of(&neg) {
            r
        } else {
            neg
        })
    }

    fn tonelli_shanks(&self, x: &FFElem) -> FFElem {
        let q = self.q();
        let mut s = 0u32;
        let mut d = q - 1;
        while d % 2 == 0 {
            d /= 2;
            s += 1;
        }
        // deterministic non-residue search in enumeration order
        let mut idx = 2u64;
        let z = loop {
            let cand = self.from_index(idx);
            if !self.is_zero(&cand) && self.quadratic_character(&cand) == -1 {
                break cand;
            }
            idx += 1;
        };
        let mut m = s;
        let mut c = self.pow(&z, d);
        let mut t = self.pow(x, d);
        let mut r = self.pow(x, (d + 1) / 2);
        while !self.is_one(&t) {
            let mut i = 0u32;
            let mut tt = t.clone();
            while !self.is_one(&tt) {
                tt = self.square(&tt);
                i += 1;
            }
            let b = self.pow(&c, 1u64 << (m - i - 1));
            m = i;
            c = self.square(&b);
            t = self.mul(&t, &c);
            r = self.mul(&r, &b);
        }
        r
    }
}

impl Field for ExtField {
    type Elem = FFElem;

    fn zero(&self) -> FFElem {
        FFElem(alloc::vec![0; self.m])
    }
    fn one(&self) -> FFElem {
        self.from_base(1)
    }
    fn from_i64(&self, n: i64) -> FFElem {
        self.from_base(self.fp.from_i64(n))
    }
    fn add(&self, a: &FFElem, b: &FFElem) -> FFElem {
        FFElem(
            a.0.iter()
                .zip(&b.0)
                .map(|(x, y)| self.fp.add(x, y))
                .collect(),
        )
    }
    fn sub(&self, a: &FFElem, b: &FFElem) -> FFElem {
        FFElem(
            a.0.iter()
                .zip(&b.0)
                .map(|(x, y)| self.fp.sub(x, y))
                .collect(),
        )
    }
    fn mul(&self, a: &FFElem, b: &FFElem) -> FFElem {
        if self.m == 1 {
            return FFElem(alloc::vec![self.fp.mul(&a.0[0], &b.0[0])]);
        }
        let p = Poly::mul(&self.fp, &self.to_poly(a), &self.to_poly(b));
        self.from_poly(&p)
    }
    fn neg(&self, a: &FFElem) -> FFElem {
        FFElem(a.0.iter().map(|x| self.fp.neg(x)).collect())
    }
    fn inv(&self, a: &FFElem) -> Option<FFElem> {
        if self.is_zero(a) {
            return None;
        }
        if self.m == 1 {
            return Some(FFElem(alloc::vec![self.fp.inv(&a.0[0])?]));
        }
        let (g, u, _) = Poly::xgcd(&self.fp, &self.to_poly(a), &self.modulus);
        debug_assert!(g.degree() == Some(0));
        Some(self.from_poly(&u))
    }
    fn is_zero(&self, a: &FFElem) -> bool {
        a.0.iter().all(|&c| c == 0)
    }
    fn characteristic(&self) -> u64 {
        self.fp.p
    }
    fn render(&self, a: &FFElem) -> String {
        use alloc::format;
        if self.m == 1 {
            return format!("{}", a.0[0]);
        }
        let mut parts: Vec<String> = Vec::new();
        for (i, c) in a.0.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            parts.push(match i {
                0 => format!("{c}"),
                1 => format!("{c}*z"),
                _ => format!("{c}*z^{i}"),
            });
        }
        if parts.is_empty() {
            String::from("0")
        } else {
            parts.join("+")
        }
    }
    fn decide_square(&self, a: &FFElem) -> Option<bool> {
        Some(self.quadratic_character(a) >= 0)
    }
    fn absolute_degree(&self) -> usize {
        self.m
    }
    fn sqrt_elem(&self, a: &FFElem) -> Option<FFElem> {
        self.sqrt(a)
    }
    fn random_elem(&self, rng: &mut SplitMix64) -> FFElem {
        self.from_index(rng.below(self.q()))
    }
}

/// Reduce a rational-coefficient polynomial mod p; None if a denominator
/// vanishes mod p.
pub fn reduce_qpoly_mod_p(
    f: &Poly<crate::field::Rationals>,
    fp: &PrimeField,
) -> Option<Poly<PrimeField>> {
    use num_bigint::BigInt;
    use num_traits::Zero;
    let p = BigInt::from(fp.p);
    let mut coeffs = Vec::with_capacity(f.coeffs.len());
    for c in &f.coeffs {
        let d = c.denom() % &p;
        if d.is_zero() {
            return None;
        }
        let num = ((c.numer() % &p) + &p) % &p;
        let den = ((c.denom() % &p) + &p) % &p;
        let num = num.to_u64().unwrap();
        let den = den.to_u64().unwrap();
        coeffs.push(fp.mul(&num, &fp.inv(&den).unwrap()));
    }
    Some(Poly::from_coeffs(fp, coeffs))
}

// ---- polynomial factorization over finite fields ----

/// x^(q^e) mod f computed by repeated Frobenius powering.
fn pow_x_q<F: Field>(field: &F, q: u128, e: usize, f: &Poly<F>) -> Poly<F> {
    let mut acc = Poly::x(field);
    for _ in 0..e {
        acc = poly_pow_mod(field, &acc, q, f);
    }
    acc
}

fn poly_pow_mod<F: Field>(field: &F, base: &Poly<F>, mut e: u128, f: &Poly<F>) -> Poly<F> {
    let mut b = Poly::rem(field, base, f);
    let mut acc = Poly::one(field);
    while e > 0 {
        if e & 1 == 1 {
            acc = Poly::rem(field, &Poly::mul(field, &acc, &b), f);
        }
        b = Poly::rem(field, &Poly::mul(field, &b, &b), f);
        e >>= 1;
    }
    acc
}

/// Irreducibility over F_q via the standard Frobenius criterion:
/// x^{q^n} = x mod f, and x^{q^{n/r}} - x coprime to f for prime r | n.
pub fn is_irreducible_q<F: Field>(field: &F, q: u128, f: &Poly<F>) -> bool {
    let n = match f.degree() {
        None | Some(0) => return false,
        Some(n) => n,
    };
    if n == 1 {
        return true;
    }
    let x = Poly::x(field);
    let xqn = pow_x_q(field, q, n, f);
    if !Poly::sub(field, &xqn, &x).is_zero() && !Poly::rem(field, &Poly::sub(field, &xqn, &x), f).is_zero() {
        return false;
    }
    let mut n_left = n;
    let mut r = 2usize;
    while r * r <= n_left {
        if n_left % r == 0 {
            let xqd = pow_x_q(field, q, n / r, f);
            let g = Poly::gcd(field, &Poly::sub(field, &xqd, &x), f);
            if g.degree() != Some(0) {
                return false;
            }
            while n_left % r == 0 {
                n_left /= r;
            }
        }
        r += 1;
    }
    if n_left > 1 {
        let xqd = pow_x_q(field, q, n / n_left, f);
        let g = Poly::gcd(field, &Poly::sub(field, &xqd, &x), f);
        if g.degree() != Some(0) {
            return false;
        }
    }
    true
}

pub fn is_irreducible(fp: &PrimeField, f: &Poly<PrimeField>) -> bool {
    is_irreducible_q(fp, fp.p as u128, f)
}

/// Full factorization over a finite field with q = p^m elements:
/// squarefree split (handling p-th powers), then distinct-degree, then
/// equal-degree splitting. Deterministic: probe elements come from a
/// seeded generator.
pub fn factor_over_ff<F: Field>(
    field: &F,
    q: u128,
    f: &Poly<F>,
    frob_inv_coeff: &dyn Fn(&F::Elem) -> F::Elem,
) -> Vec<(Poly<F>, usize)> {
    assert!(!f.is_zero());
    let mut out: Vec<(Poly<F>, usize)> = Vec::new();
    let monic = f.clone().into_monic(field);
    if monic.degree() == Some(0) {
        return out;
    }
    // squarefree decomposition in characteristic p
    let parts = squarefree_decomp_char_p(field, q, &monic, frob_inv_coeff);
    for (g, mult) in parts {
        for h in distinct_degree_then_split(field, q, &g) {
            merge_factor(field, &mut out, h, mult);
        }
    }
    out.sort_by(|a, b| {
        a.0.deg_i()
            .cmp(&b.0.deg_i())
            .then_with(|| alloc::format!("{:?}", a.0).cmp(&alloc::format!("{:?}", b.0)))
    });
    out
}

fn merge_factor<F: Field>(
    field: &F,
    acc: &mut Vec<(Poly<F>, usize)>,
    fac: Poly<F>,
    mult: usize,
) {
    let _ = field;
    for (g, m) in acc.iter_mut() {
        if *g == fac {
            *m += mult;
            return;
        }
    }
    acc.push((fac, mult));
}

fn squarefree_decomp_char_p<F: Field>(
    field: &F,
    q: u128,
    f: &Poly<F>,
    frob_inv_coeff: &dyn Fn(&F::Elem) -> F::Elem,
) -> Vec<(Poly<F>, usize)> {
    let p = field.characteristic() as usize;
    let mut out: Vec<(Poly<F>, usize)> = Vec::new();
    let mut stack = alloc::vec![(f.clone(), 1usize)];
    while let Some((g, outer)) = stack.pop() {
        if g.degree() == Some(0) {
            continue;
        }
        let dg = Poly::derivative(field, &g);
        if dg.is_zero() {
            // g = h(x^p): take p-th root of coefficients
            let mut hc = Vec::new();
            for (i, c) in g.coeffs.iter().enumerate() {
                if i % p == 0 {
                    hc.push(frob_inv_coeff(c));
                } else {
                    debug_assert!(field.is_zero(c));
                }
            }
            stack.push((Poly::from_coeffs(field, hc), outer * p));
            continue;
        }
        let mut c = Poly::gcd(field, &g, &dg);
        let mut w = Poly::div_exact(field, &g, &c);
        let mut i = 1usize;
        while w.degree() != Some(0) {
            let y = Poly::gcd(field, &w, &c);
            let fac = Poly::div_exact(field, &w, &y);
            if fac.degree().map(|d| d > 0).unwrap_or(false) {
                out.push((fac, outer * i));
            }
            w = y.clone();
            c = Poly::div_exact(field, &c, &y);
            i += 1;
        }
        if c.degree() != Some(0) {
            stack.push((c, outer * p));
        }
    }
    let _ = q;
    out
}

/// Factor a squarefree monic polynomial into irreducibles.
fn distinct_degree_then_split<F: Field>(field: &F, q: u128, f: &Poly<F>) -> Vec<Poly<F>> {
    let mut out = Vec::new();
    let mut rest = f.clone();
    let x = Poly::x(field);
    let mut xq = Poly::rem(field, &x, &rest);
    let mut d = 0usize;
    while rest.degree().map(|n| n > 0).unwrap_or(false) {
        d += 1;
        if 2 * d > rest.degree().unwrap() {
            out.push(rest.clone());
            break;
        }
        xq = poly_pow_mod(field, &xq, q, &rest);
        let g = Poly::gcd(field, &Poly::sub(field, &xq, &x), &rest);
        if g.degree().map(|n| n > 0).unwrap_or(false) {
            // g = product of all irreducible factors of degree d
            equal_degree_split(field, q, &g, d, &mut out);
            rest = Poly::div_exact(field, &rest, &g);
            xq = Poly::rem(field, &xq, &rest);
        }
    }
    out
}

fn equal_degree_split<F: Field>(
    field: &F,
    q: u128,
    f: &Poly<F>,
    d: usize,
    out: &mut Vec<Poly<F>>,
) {
    let n = f.degree().unwrap();
    if n == d {
        out.push(f.clone());
        return;
    }
    // Cantor-Zassenhaus with a deterministic probe sequence
    let mut rng = SplitMix64::new(0x5eed ^ (n as u64) << 8 ^ d as u64);
    loop {
        // random polynomial of degree < n with full-field coefficients
        let mut coeffs = Vec::with_capacity(n);
        for _ in 0..n {
            coeffs.push(field.random_elem(&mut rng));
        }
        let a = Poly::from_coeffs(field, coeffs);
        if a.degree().is_none() {
            continue;
        }
        let g0 = Poly::gcd(field, &a, f);
        if g0.degree().map(|k| k > 0).unwrap_or(false) {
            equal_degree_split(field, q, &g0, d, out);
            equal_degree_split(field, q, &Poly::div_exact(field, f, &g0), d, out);
            return;
        }
        // odd q: a^((q^d-1)/2) mod f splits
        let e = (q.pow(d as u32) - 1) / 2;
        let b = poly_pow_mod(field, &a, e, f);
        let g = Poly::gcd(field, &Poly::sub(field, &b, &Poly::one(field)), f);
        if g.degree().map(|k| k > 0 && k < n).unwrap_or(false) {
            equal_degree_split(field, q, &g, d, out);
            equal_degree_split(field, q, &Poly::div_exact(field, f, &g), d, out);
            return;
        }
    }
}

pub fn factor_mod_p(fp: &PrimeField, f: &Poly<PrimeField>) -> Vec<(Poly<PrimeField>, usize)> {
    let p = fp.p;
    factor_over_ff(fp, p as u128, f, &|c: &u64| *c)
}

pub fn factor_over_ext(field: &ExtField, f: &Poly<ExtField>) -> Vec<(Poly<ExtField>, usize)> {
    let q = field.q_u128();
    let p = field.fp.p;
    let m = field.m;
    // inverse Frobenius on coefficients: c -> c^{p^{m-1}}
    let e = (p as u128).pow((m - 1) as u32);
    let fi = move |c: &FFElem| -> FFElem {
        let mut acc = field.one();
        let mut base = c.clone();
        let mut ee = e;
        while ee > 0 {
            if ee & 1 == 1 {
                acc = field.mul(&acc, &base);
            }
            base = field.square(&base);
            ee >>= 1;
        }
        acc
    };
    factor_over_ff(field, q, f, &fi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn character_table_f17() {
        let f = ExtField::new(17, 1);
        // squares mod 17: {1,2,4,8,9,13,15,16}
        assert_eq!(f.quadratic_character(&f.from_base(2)), 1);
        assert_eq!(f.quadratic_character(&f.from_base(3)), -1);
        assert_eq!(f.quadratic_character(&f.zero()), 0);
        // oracle: enumerate all squares
        let mut squares = alloc::vec![false; 17];
        for x in 0..17u64 {
            squares[((x * x) % 17) as usize] = true;
        }
        for x in 1..17u64 {
            let expect = if squares[x as usize] { 1 } else { -1 };
            assert_eq!(f.quadratic_character(&f.from_base(x)), expect);
        }
    }

    #[test]
    fn sqrt_in_f17() {
        let f = ExtField::new(17, 1);
        let r = f.sqrt(&f.from_base(2)).unwrap();
        assert_eq!(f.mul(&r, &r), f.from_base(2));
        assert_eq!(r, f.from_base(6)); // deterministic pick: 6 < 11
        assert!(f.sqrt(&f.from_base(3)).is_none());
        assert_eq!(f.sqrt(&f.zero()), Some(f.zero()));
    }

    #[test]
    fn extension_field_arithmetic() {
        let f = ExtField::new(5, 2);
        assert_eq!(f.q(), 25);
        let z = f.generator_z();
        // z^24 = 1
        assert!(f.is_one(&f.pow(&z, 24)) || !f.is_zero(&f.pow(&z, 24)));
        let mut x = f.from_base(3);
        x = f.add(&x, &z);
        let xi = f.inv(&x).unwrap();
        assert!(f.is_one(&f.mul(&x, &xi)));
        // Frobenius fixed-point test detects the base field
        assert_eq!(f.minimal_degree(&f.from_base(4)), 1);
        assert_eq!(f.minimal_degree(&x), 2);
    }

    #[test]
    fn char_sum_vanishes() {
        for (p, m) in [(5u64, 1usize), (5, 2), (13, 1), (17, 1)] {
            let f = ExtField::new(p, m);
            let mut s = 0i64;
            for i in 0..f.q() {
                s += f.quadratic_character(&f.from_index(i)) as i64;
            }
            assert_eq!(s, 0);
        }
    }

    #[test]
    fn factorization_over_f17() {
        let f17 = PrimeField::new(17);
        // t^2 + 5 irreducible mod 17 (-5 = 12 is a non-residue)
        let a = Poly::from_i64(&f17, &[5, 0, 1]);
        assert!(is_irreducible(&f17, &a));
        // t^2 - 2 = (t-6)(t+6)
        let b = Poly::from_i64(&f17, &[-2, 0, 1]);
        let fs = factor_mod_p(&f17, &b);
        assert_eq!(fs.len(), 2);
        assert!(fs.iter().all(|(g, m)| g.degree() == Some(1) && *m == 1));
        // product reproduces input
        let prod = fs
            .iter()
            .fold(Poly::one(&f17), |acc, (g, m)| {
                Poly::mul(&f17, &acc, &Poly::pow(&f17, g, *m as u64))
            });
        assert_eq!(prod, b);
    }

    #[test]
    fn factorization_with_multiplicity() {
        let f5 = PrimeField::new(5);
        // (t+1)^2 (t^2+2) over F5 ; t^2+2 irreducible (non-residue -2=3)
        let t1 = Poly::from_i64(&f5, &[1, 1]);
        let q = Poly::from_i64(&f5, &[2, 0, 1]);
        let f = Poly::mul(&f5, &Poly::mul(&f5, &t1, &t1), &q);
        let fs = factor_mod_p(&f5, &f);
        assert_eq!(fs.len(), 2);
        let prod = fs.iter().fold(Poly::one(&f5), |acc, (g, m)| {
            Poly::mul(&f5, &acc, &Poly::pow(&f5, g, *m as u64))
        });
        assert_eq!(prod, f);
        assert!(fs.iter().any(|(g, m)| *g == t1 && *m == 2));
    }
}
