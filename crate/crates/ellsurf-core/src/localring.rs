//! Residue fields, quadratic extension rings and truncated pi-adic series.
//!
//! These are the local tools behind the fiber analysis and the height
//! pairing: expanding section coordinates at a place, taking analytic
//! square roots, and reading off which fiber component a section hits.
//! The quadratic extension K[z]/(z^2-c) is used without deciding whether
//! c is a square; when it is, the ring splits as K x K and coordinate-wise
//! valuations are exactly what the component index needs.

use alloc::string::String;
use alloc::vec::Vec;

use crate::field::Field;
use crate::poly::Poly;
use crate::ratfunc::RatFunc;

/// Simple extension K[t]/(modulus), the residue field at a finite place.
/// The modulus must be irreducible over K; callers certify this.
#[derive(Clone, PartialEq, Debug)]
pub struct SimpleExt<K: Field> {
    pub base: K,
    pub modulus: Poly<K>,
}

impl<K: Field> SimpleExt<K> {
    pub fn new(base: K, modulus: Poly<K>) -> Self {
        assert!(modulus.degree().map(|d| d >= 1).unwrap_or(false));
        SimpleExt { base, modulus }
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap()
    }

    pub fn reduce(&self, p: &Poly<K>) -> Poly<K> {
        Poly::rem(&self.base, p, &self.modulus)
    }

    /// The class of t.
    pub fn gen(&self) -> Poly<K> {
        self.reduce(&Poly::x(&self.base))
    }

    /// Absolute extension degree over the prime field (or over Q).
    pub fn absolute_degree(&self) -> usize {
        self.degree() * self.base.absolute_degree()
    }
}

impl<K: Field> Field for SimpleExt<K> {
    type Elem = Poly<K>;

    fn zero(&self) -> Poly<K> {
        Poly::zero()
    }
    fn one(&self) -> Poly<K> {
        Poly::one(&self.base)
    }
    fn from_i64(&self, n: i64) -> Poly<K> {
        Poly::constant(&self.base, self.base.from_i64(n))
    }
    fn add(&self, a: &Poly<K>, b: &Poly<K>) -> Poly<K> {
        Poly::add(&self.base, a, b)
    }
    fn sub(&self, a: &Poly<K>, b: &Poly<K>) -> Poly<K> {
        Poly::sub(&self.base, a, b)
    }
    fn mul(&self, a: &Poly<K>, b: &Poly<K>) -> Poly<K> {
        self.reduce(&Poly::mul(&self.base, a, b))
    }
    fn neg(&self, a: &Poly<K>) -> Poly<K> {
        Poly::neg(&self.base, a)
    }
    fn inv(&self, a: &Poly<K>) -> Option<Poly<K>> {
        if a.is_zero() {
            return None;
        }
        let (g, u, _) = Poly::xgcd(&self.base, a, &self.modulus);
        if g.degree() != Some(0) {
            return None; // zero divisor: modulus was reducible
        }
        Some(self.reduce(&u))
    }
    fn is_zero(&self, a: &Poly<K>) -> bool {
        a.is_zero()
    }
    fn characteristic(&self) -> u64 {
        self.base.characteristic()
    }
    fn render(&self, a: &Poly<K>) -> String {
        a.render(&self.base, "t")
    }
    fn absolute_degree(&self) -> usize {
        self.degree() * self.base.absolute_degree()
    }
    fn random_elem(&self, rng: &mut crate::field::SplitMix64) -> Poly<K> {
        let mut coeffs = Vec::with_capacity(self.degree());
        for _ in 0..self.degree() {
            coeffs.push(self.base.random_elem(rng));
        }
        Poly::from_coeffs(&self.base, coeffs)
    }
    fn decide_square(&self, a: &Poly<K>) -> Option<bool> {
        if a.is_zero() {
            return Some(true);
        }
        let p = self.characteristic();
        if p > 0 {
            // Euler criterion in F_{p^d}
            let d = self.absolute_degree() as u32;
            let q = (p as u128).pow(d);
            let e = ((q - 1) / 2) as u64;
            // q - 1 may exceed u64 for large towers; the fields used here
            // stay far below that
            assert!(q - 1 <= u64::MAX as u128);
            let y = self.pow(a, e);
            return Some(self.is_one(&y));
        }
        if self.degree() == 1 {
            return self.base.decide_square(&a.coeff(&self.base, 0));
        }
        None
    }
}

/// K[z]/(z^2 - c) with c != 0; a field when c is a non-square, K x K
/// otherwise. Units are exactly the elements of nonzero norm a^2 - c b^2.
#[derive(Clone, PartialEq, Debug)]
pub struct QuadRing<K: Field> {
    pub base: K,
    pub c: K::Elem,
}

/// a + b z
#[derive(Clone, PartialEq, Debug)]
pub struct QuadElem<K: Field>(pub K::Elem, pub K::Elem);

impl<K: Field> QuadRing<K> {
    pub fn new(base: K, c: K::Elem) -> Self {
        assert!(!base.is_zero(&c));
        QuadRing { base, c }
    }

    pub fn embed(&self, a: K::Elem) -> QuadElem<K> {
        QuadElem(a, self.base.zero())
    }

    pub fn z(&self) -> QuadElem<K> {
        QuadElem(self.base.zero(), self.base.one())
    }
}

impl<K: Field> Field for QuadRing<K> {
    type Elem = QuadElem<K>;

    fn zero(&self) -> QuadElem<K> {
        QuadElem(self.base.zero(), self.base.zero())
    }
    fn one(&self) -> QuadElem<K> {
        QuadElem(self.base.one(), self.base.zero())
    }
    fn from_i64(&self, n: i64) -> QuadElem<K> {
        self.embed(self.base.from_i64(n))
    }
    fn add(&self, a: &QuadElem<K>, b: &QuadElem<K>) -> QuadElem<K> {
        QuadElem(self.base.add(&a.0, &b.0), self.base.add(&a.1, &b.1))
    }
    fn sub(&self, a: &QuadElem<K>, b: &QuadElem<K>) -> QuadElem<K> {
        QuadElem(self.base.sub(&a.0, &b.0), self.base.sub(&a.1, &b.1))
    }
    fn mul(&self, a: &QuadElem<K>, b: &QuadElem<K>) -> QuadElem<K> {
        let f = &self.base;
        // (a0 + a1 z)(b0 + b1 z) = a0 b0 + c a1 b1 + (a0 b1 + a1 b0) z
        QuadElem(
            f.add(&f.mul(&a.0, &b.0), &f.mul(&self.c, &f.mul(&a.1, &b.1))),
            f.add(&f.mul(&a.0, &b.1), &f.mul(&a.1, &b.0)),
        )
    }
    fn neg(&self, a: &QuadElem<K>) -> QuadElem<K> {
        QuadElem(self.base.neg(&a.0), self.base.neg(&a.1))
    }
    fn inv(&self, a: &QuadElem<K>) -> Option<QuadElem<K>> {
        let f = &self.base;
        let norm = f.sub(&f.square(&a.0), &f.mul(&self.c, &f.square(&a.1)));
        let ni = f.inv(&norm)?;
        Some(QuadElem(f.mul(&a.0, &ni), f.neg(&f.mul(&a.1, &ni))))
    }
    fn is_zero(&self, a: &QuadElem<K>) -> bool {
        self.base.is_zero(&a.0) && self.base.is_zero(&a.1)
    }
    fn characteristic(&self) -> u64 {
        self.base.characteristic()
    }
    fn render(&self, a: &QuadElem<K>) -> String {
        use alloc::format;
        format!("{} + ({})*z", self.base.render(&a.0), self.base.render(&a.1))
    }
}

/// Truncated power series over a ring R: coefficients of pi^0..pi^{n-1}.
#[derive(Clone, PartialEq, Debug)]
pub struct Series<R: Field> {
    pub coeffs: Vec<R::Elem>,
}

impl<R: Field> Series<R> {
    pub fn truncation(&self) -> usize {
        self.coeffs.len()
    }

    pub fn constant(r: &R, c: R::Elem, n: usize) -> Self {
        let mut coeffs = alloc::vec![r.zero(); n];
        coeffs[0] = c;
        Series { coeffs }
    }

    pub fn zero(r: &R, n: usize) -> Self {
        Series {
            coeffs: alloc::vec![r.zero(); n],
        }
    }

    pub fn add(r: &R, a: &Self, b: &Self) -> Self {
        Series {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| r.add(x, y))
                .collect(),
        }
    }

    pub fn sub(r: &R, a: &Self, b: &Self) -> Self {
        Series {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| r.sub(x, y))
                .collect(),
        }
    }

    pub fn mul(r: &R, a: &Self, b: &Self) -> Self {
        let n = a.coeffs.len().min(b.coeffs.len());
        let mut out = alloc::vec![r.zero(); n];
        for i in 0..n {
            for j in 0..n - i {
                let t = r.mul(&a.coeffs[i], &b.coeffs[j]);
                out[i + j] = r.add(&out[i + j], &t);
            }
        }
        Series { coeffs: out }
    }

    pub fn scale(r: &R, a: &Self, c: &R::Elem) -> Self {
        Series {
            coeffs: a.coeffs.iter().map(|x| r.mul(x, c)).collect(),
        }
    }

    /// Multiplicative inverse of a unit series (leading coefficient a unit).
    pub fn inv(r: &R, a: &Self) -> Self {
        let n = a.coeffs.len();
        let c0 = r.inv(&a.coeffs[0]).expect("unit series");
        let mut out = alloc::vec![r.zero(); n];
        out[0] = c0.clone();
        for k in 1..n {
            // coefficient k of a * out must vanish
            let mut acc = r.zero();
            for j in 0..k {
                acc = r.add(&acc, &r.mul(&a.coeffs[k - j], &out[j]));
            }
            out[k] = r.neg(&r.mul(&acc, &c0));
        }
        Series { coeffs: out }
    }

    pub fn div(r: &R, a: &Self, b: &Self) -> Self {
        Series::mul(r, a, &Series::inv(r, b))
    }

    /// Square root of a series with unit square leading coefficient:
    /// the caller supplies y0 with y0^2 = a_0. Newton iteration.
    pub fn sqrt_with(r: &R, a: &Self, y0: R::Elem) -> Self {
        let n = a.coeffs.len();
        debug_assert!(r.square(&y0) == a.coeffs[0]);
        let half = r
            .inv(&r.from_i64(2))
            .expect("odd or zero characteristic");
        let mut y = Series::constant(r, y0, n);
        // each step doubles precision
        let mut steps = 0usize;
        let mut prec = 1usize;
        while prec < n {
            prec *= 2;
            steps += 1;
            let q = Series::div(r, a, &y);
            y = Series::scale(r, &Series::add(r, &y, &q), &half);
            assert!(steps < 64);
        }
        y
    }

    /// Index of the first nonzero coefficient; None when identically zero
    /// to the truncation depth.
    pub fn valuation(&self, r: &R) -> Option<usize> {
        self.coeffs.iter().position(|c| !r.is_zero(c))
    }
}

/// pi-adic data of a nonzero rational function at a finite place: the
/// valuation e and a unit series u with g = pi^e * u + O(pi^{e+n}).
pub fn expand_at_place<K: Field>(
    k: &K,
    g: &RatFunc<K>,
    pi: &Poly<K>,
    n: usize,
) -> (i64, Series<SimpleExt<K>>) {
    assert!(!g.is_zero());
    let kappa = SimpleExt::new(k.clone(), pi.clone());
    let (vn, sn) = expand_poly(k, &kappa, &g.num, pi, n);
    let (vd, sd) = expand_poly(k, &kappa, &g.den, pi, n);
    (vn - vd, Series::div(&kappa, &sn, &sd))
}

/// Expansion of a polynomial: strips pi powers, then digit-expands.
fn expand_poly<K: Field>(
    k: &K,
    kappa: &SimpleExt<K>,
    f: &Poly<K>,
    pi: &Poly<K>,
    n: usize,
) -> (i64, Series<SimpleExt<K>>) {
    assert!(!f.is_zero());
    let mut f = f.clone();
    let mut v = 0i64;
    loop {
        let (q, r) = Poly::divrem(k, &f, pi);
        if r.is_zero() && !q.is_zero() {
            v += 1;
            f = q;
        } else {
            break;
        }
    }
    let mut coeffs = Vec::with_capacity(n);
    let mut cur = f;
    for _ in 0..n {
        if cur.is_zero() {
            coeffs.push(kappa.zero());
            continue;
        }
        let (q, r) = Poly::divrem(k, &cur, pi);
        coeffs.push(kappa.reduce(&r));
        cur = q;
    }
    (v, Series { coeffs })
}

/// Expansion with the valuation folded in as leading zero coefficients;
/// requires v >= 0 (integral at the place).
pub fn expand_integral_at_place<K: Field>(
    k: &K,
    g: &RatFunc<K>,
    pi: &Poly<K>,
    n: usize,
) -> Option<Series<SimpleExt<K>>> {
    let kappa = SimpleExt::new(k.clone(), pi.clone());
    if g.is_zero() {
        return Some(Series::zero(&kappa, n));
    }
    let (v, u) = expand_at_place(k, g, pi, n);
    if v < 0 {
        return None;
    }
    let v = v as usize;
    if v >= n {
        return Some(Series::zero(&kappa, n));
    }
    let mut coeffs = alloc::vec![kappa.zero(); n];
    for i in 0..(n - v) {
        coeffs[v + i] = u.coeffs[i].clone();
    }
    Some(Series { coeffs })
}
