//! Weierstrass models y^2 = x (x - r)(x - s) and the group law, over any
//! coefficient field: Q, number fields, finite fields, and function fields
//! K(t) through the `FunctionField` wrapper.
//!
//! The factored form is primary: 2-descent and the fiber analysis consume
//! the root data 0, r, s directly. Twisted models u y^2 = x(x-r)(x-s) are
//! normalized into factored form by scaling (x,y) -> (ux, u^2 y).

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::field::Field;
use crate::poly::Poly;
use crate::ratfunc::RatFunc;

/// K(t) as a field object over a base field K.
#[derive(Clone, PartialEq, Debug)]
pub struct FunctionField<K: Field> {
    pub base: K,
}

impl<K: Field> FunctionField<K> {
    pub fn new(base: K) -> Self {
        FunctionField { base }
    }
    pub fn t(&self) -> RatFunc<K> {
        RatFunc::of_poly(&self.base, Poly::x(&self.base))
    }
    pub fn from_base_poly(&self, p: Poly<K>) -> RatFunc<K> {
        RatFunc::of_poly(&self.base, p)
    }
}

impl<K: Field> Field for FunctionField<K> {
    type Elem = RatFunc<K>;

    fn zero(&self) -> RatFunc<K> {
        RatFunc::zero_over(&self.base)
    }
    fn one(&self) -> RatFunc<K> {
        RatFunc::one_over(&self.base)
    }
    fn from_i64(&self, n: i64) -> RatFunc<K> {
        RatFunc::constant(&self.base, self.base.from_i64(n))
    }
    fn add(&self, a: &RatFunc<K>, b: &RatFunc<K>) -> RatFunc<K> {
        RatFunc::add(&self.base, a, b)
    }
    fn sub(&self, a: &RatFunc<K>, b: &RatFunc<K>) -> RatFunc<K> {
        RatFunc::sub(&self.base, a, b)
    }
    fn mul(&self, a: &RatFunc<K>, b: &RatFunc<K>) -> RatFunc<K> {
        RatFunc::mul(&self.base, a, b)
    }
    fn neg(&self, a: &RatFunc<K>) -> RatFunc<K> {
        RatFunc::neg(&self.base, a)
    }
    fn inv(&self, a: &RatFunc<K>) -> Option<RatFunc<K>> {
        RatFunc::inv(&self.base, a)
    }
    fn is_zero(&self, a: &RatFunc<K>) -> bool {
        a.is_zero()
    }
    fn characteristic(&self) -> u64 {
        self.base.characteristic()
    }
    fn render(&self, a: &RatFunc<K>) -> String {
        a.render(&self.base, "t")
    }
}

/// A point of a curve in factored form, over a field F.
#[derive(Clone, PartialEq, Debug)]
pub enum Point<F: Field> {
    Infinity,
    Affine(F::Elem, F::Elem),
}

impl<F: Field> Point<F> {
    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }
    pub fn xy(&self) -> Option<(&F::Elem, &F::Elem)> {
        match self {
            Point::Infinity => None,
            Point::Affine(x, y) => Some((x, y)),
        }
    }
}

/// y^2 = x (x - r)(x - s) over the field carried alongside.
#[derive(Clone, PartialEq, Debug)]
pub struct Curve<F: Field> {
    pub field: F,
    pub r: F::Elem,
    pub s: F::Elem,
}

#[derive(Clone, Debug, PartialEq)]
pub enum CurveError {
    Singular(String),
    ZeroTwist,
    PointsOnDifferentCurves,
    SamePlaceTwice,
    BadReduction(String),
    NotOnCurve,
}

impl<F: Field> Curve<F> {
    pub fn new(field: F, r: F::Elem, s: F::Elem) -> Self {
        Curve { field, r, s }
    }

    /// (discriminant, j-invariant (None when singular), c4, c6)
    pub fn invariants(&self) -> (F::Elem, Option<F::Elem>, F::Elem, F::Elem) {
        let f = &self.field;
        let r = &self.r;
        let s = &self.s;
        let rs = f.mul(r, s);
        let rps = f.add(r, s);
        let rms = f.sub(r, s);
        // Delta = 16 r^2 s^2 (r-s)^2
        let disc = f.mul(
            &f.from_i64(16),
            &f.square(&f.mul(&rs, &rms)),
        );
        // c4 = 16 (r^2 - rs + s^2)
        let c4 = f.mul(
            &f.from_i64(16),
            &f.sub(&f.square(&rps), &f.mul(&f.from_i64(3), &rs)),
        );
        // c6 = 32 (r+s)(2r-s)(r-2s)
        let two = f.from_i64(2);
        let c6 = f.mul(
            &f.mul(&f.from_i64(32), &rps),
            &f.mul(
                &f.sub(&f.mul(&two, r), s),
                &f.sub(r, &f.mul(&two, s)),
            ),
        );
        let j = f.inv(&disc).map(|di| f.mul(&f.mul(&c4, &f.square(&c4)), &di));
        (disc, j, c4, c6)
    }

    pub fn discriminant(&self) -> F::Elem {
        self.invariants().0
    }

    pub fn is_smooth(&self) -> bool {
        !self.field.is_zero(&self.discriminant())
    }

    /// Evaluate the cubic x(x-r)(x-s).
    pub fn rhs(&self, x: &F::Elem) -> F::Elem {
        let f = &self.field;
        f.mul(x, &f.mul(&f.sub(x, &self.r), &f.sub(x, &self.s)))
    }

    pub fn contains(&self, p: &Point<F>) -> bool {
        match p {
            Point::Infinity => true,
            Point::Affine(x, y) => self.field.square(y) == self.rhs(x),
        }
    }

    pub fn neg(&self, p: &Point<F>) -> Point<F> {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => Point::Affine(x.clone(), self.field.neg(y)),
        }
    }

    pub fn add(&self, p: &Point<F>, q: &Point<F>) -> Point<F> {
        let f = &self.field;
        let (x1, y1) = match p {
            Point::Infinity => return q.clone(),
            Point::Affine(x, y) => (x, y),
        };
        let (x2, y2) = match q {
            Point::Infinity => return p.clone(),
            Point::Affine(x, y) => (x, y),
        };
        let lambda = if x1 == x2 {
            if f.is_zero(&f.add(y1, y2)) {
                return Point::Infinity;
            }
            // tangent: (3x^2 + 2 a2 x + a4) / (2y), a2 = -(r+s), a4 = rs
            let a2 = f.neg(&f.add(&self.r, &self.s));
            let a4 = f.mul(&self.r, &self.s);
            let num = f.add(
                &f.add(
                    &f.mul(&f.from_i64(3), &f.square(x1)),
                    &f.mul(&f.mul(&f.from_i64(2), &a2), x1),
                ),
                &a4,
            );
            f.div(&num, &f.mul(&f.from_i64(2), y1))
        } else {
            f.div(&f.sub(y2, y1), &f.sub(x2, x1))
        };
        let a2 = f.neg(&f.add(&self.r, &self.s));
        let x3 = f.sub(&f.sub(&f.sub(&f.square(&lambda), &a2), x1), x2);
        let y3 = f.sub(&f.mul(&lambda, &f.sub(x1, &x3)), y1);
        Point::Affine(x3, y3)
    }

    pub fn sub_pts(&self, p: &Point<F>, q: &Point<F>) -> Point<F> {
        self.add(p, &self.neg(q))
    }

    pub fn scalar_mul(&self, n: i64, p: &Point<F>) -> Point<F> {
        let (mut n, mut base) = if n < 0 {
            ((-n) as u64, self.neg(p))
        } else {
            (n as u64, p.clone())
        };
        let mut acc = Point::Infinity;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            base = self.add(&base, &base);
            n >>= 1;
        }
        acc
    }

    /// The three nontrivial 2-torsion points (0,0), (r,0), (s,0).
    pub fn two_torsion(&self) -> [Point<F>; 3] {
        let f = &self.field;
        [
            Point::Affine(f.zero(), f.zero()),
            Point::Affine(self.r.clone(), f.zero()),
            Point::Affine(self.s.clone(), f.zero()),
        ]
    }

    /// Quadratic twist by u: u y^2 = x(x-r)(x-s), normalized to factored
    /// form y^2 = x(x - ur)(x - us).
    pub fn quadratic_twist(&self, u: &F::Elem) -> Result<Curve<F>, CurveError> {
        if self.field.is_zero(u) {
            return Err(CurveError::ZeroTwist);
        }
        Ok(Curve {
            field: self.field.clone(),
            r: self.field.mul(u, &self.r),
            s: self.field.mul(u, &self.s),
        })
    }
}

// ---- surface models over K(t) ----

pub type SurfaceCurve<K> = Curve<FunctionField<K>>;
pub type Section<K> = Point<FunctionField<K>>;

/// A finite place of P^1 (a monic irreducible polynomial) or infinity.
#[derive(Clone, PartialEq, Debug)]
pub enum Place<K: Field> {
    Finite(Poly<K>),
    Infinity,
}

impl<K: Field> Place<K> {
    pub fn degree(&self) -> usize {
        match self {
            Place::Finite(p) => p.degree().unwrap(),
            Place::Infinity => 1,
        }
    }

    pub fn render(&self, k: &K) -> String {
        match self {
            Place::Finite(p) => p.render(k, "t"),
            Place::Infinity => String::from("inf"),
        }
    }
}

/// Model over K(t) in integral form: r, s polynomials. `scale` is the c
/// with (x, y) -> (c^2 x, c^3 y) mapping the original input model here.
#[derive(Clone, Debug)]
pub struct IntegralModel<K: Field> {
    pub curve: SurfaceCurve<K>,
    pub r_poly: Poly<K>,
    pub s_poly: Poly<K>,
    pub scale: RatFunc<K>,
}

/// Clear denominators and strip common square factors so that r, s are
/// polynomials not both divisible by the square of any place. This is the
/// minimal integral Weierstrass model at every finite place for curves in
/// factored form.
pub fn integral_model<K: Field>(curve: &SurfaceCurve<K>) -> IntegralModel<K> {
    let ff = curve.field.clone();
    let k = ff.base.clone();
    let one = Poly::one(&k);
    // common denominator d: c = d makes c^2 r, c^2 s polynomial
    let mut den = one.clone();
    for q in [&curve.r, &curve.s] {
        if !q.is_zero() {
            let g = Poly::gcd(&k, &den, &q.den);
            den = Poly::div_exact(&k, &Poly::mul(&k, &den, &q.den), &g);
        }
    }
    let mut c = RatFunc::of_poly(&k, den.clone());
    let c2 = RatFunc::mul(&k, &c, &c);
    let mut r = RatFunc::mul(&k, &curve.r, &c2);
    let mut s = RatFunc::mul(&k, &curve.s, &c2);
    debug_assert!(r.is_polynomial() && s.is_polynomial());
    // strip h with h^2 | gcd(r, s)
    if !r.is_zero() && !s.is_zero() && k.characteristic() == 0 {
        let g = Poly::gcd(&k, &r.num, &s.num);
        let mut h = Poly::one(&k);
        for (gi, m) in Poly::squarefree_decomposition(&k, &g) {
            if m >= 2 {
                h = Poly::mul(&k, &h, &Poly::pow(&k, &gi, (m / 2) as u64));
            }
        }
        if h.degree().map(|d| d > 0).unwrap_or(false) {
            let h2 = RatFunc::of_poly(&k, Poly::mul(&k, &h, &h));
            r = RatFunc::div(&k, &r, &h2);
            s = RatFunc::div(&k, &s, &h2);
            c = RatFunc::div(&k, &c, &RatFunc::of_poly(&k, h));
        }
    }
    IntegralModel {
        curve: Curve::new(ff, r.clone(), s.clone()),
        r_poly: r.num.clone(),
        s_poly: s.num.clone(),
        scale: c,
    }
}

impl<K: Field> IntegralModel<K> {
    /// Map a point of the original model to this integral model.
    pub fn map_point(&self, p: &Section<K>) -> Section<K> {
        let ff = &self.curve.field;
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => {
                let c2 = ff.square(&self.scale);
                let c3 = ff.mul(&c2, &self.scale);
                Point::Affine(ff.mul(x, &c2), ff.mul(y, &c3))
            }
        }
    }

    /// Model on the w = 1/t chart: r_inf(w) = w^{2k} r(1/w) for the least
    /// k making both coefficients polynomial.
    pub fn infinity_chart(&self) -> (Poly<K>, Poly<K>, usize) {
        let k = &self.curve.field.base;
        let dr = self.r_poly.deg_i().max(0) as usize;
        let ds = self.s_poly.deg_i().max(0) as usize;
        let kk = dr.max(ds).div_ceil(2);
        let flip = |p: &Poly<K>| -> Poly<K> {
            // w^{2k} p(1/w)
            let mut coeffs = alloc::vec![k.zero(); 2 * kk + 1];
            for (i, c) in p.coeffs.iter().enumerate() {
                coeffs[2 * kk - i] = c.clone();
            }
            Poly::from_coeffs(k, coeffs)
        };
        (flip(&self.r_poly), flip(&self.s_poly), kk)
    }

    /// x-coordinate of a section on the infinity chart: w^{2k} x(1/w).
    pub fn section_on_infinity_chart(&self, p: &Section<K>) -> Option<(RatFunc<K>, RatFunc<K>)> {
        let k = &self.curve.field.base;
        let (x, y) = p.xy()?;
        let (_, _, kk) = self.infinity_chart();
        let w_inv = RatFunc::new(k, Poly::one(k), Poly::x(k));
        let xw = RatFunc::compose(k, x, &w_inv);
        let yw = RatFunc::compose(k, y, &w_inv);
        let wk = RatFunc::of_poly(k, Poly::monomial(k, k.one(), 2 * kk));
        let wk3 = RatFunc::of_poly(k, Poly::monomial(k, k.one(), 3 * kk));
        Some((RatFunc::mul(k, &xw, &wk), RatFunc::mul(k, &yw, &wk3)))
    }
}

/// Specialize a model over K(t) at t = t0; sections map to points.
pub fn specialize<K: Field>(
    curve: &SurfaceCurve<K>,
    t0: &K::Elem,
    points: &[Section<K>],
) -> Result<(Curve<K>, Vec<Point<K>>), CurveError> {
    let k = &curve.field.base;
    let r = curve
        .r
        .eval(k, t0)
        .ok_or_else(|| CurveError::Singular(String::from("pole of r at t0")))?;
    let s = curve
        .s
        .eval(k, t0)
        .ok_or_else(|| CurveError::Singular(String::from("pole of s at t0")))?;
    let fiber = Curve::new(k.clone(), r, s);
    if !fiber.is_smooth() {
        let mut which = Vec::new();
        if k.is_zero(&fiber.r) {
            which.push("r");
        }
        if k.is_zero(&fiber.s) {
            which.push("s");
        }
        if fiber.r == fiber.s {
            which.push("r-s");
        }
        return Err(CurveError::Singular(format!(
            "discriminant vanishes at t0 ({})",
            which.join(",")
        )));
    }
    let mut out = Vec::with_capacity(points.len());
    for p in points {
        let q = match p {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => {
                let xv = x
                    .eval(k, t0)
                    .ok_or_else(|| CurveError::Singular(String::from("section pole at t0")))?;
                let yv = y
                    .eval(k, t0)
                    .ok_or_else(|| CurveError::Singular(String::from("section pole at t0")))?;
                Point::Affine(xv, yv)
            }
        };
        if !fiber.contains(&q) {
            return Err(CurveError::NotOnCurve);
        }
        out.push(q);
    }
    Ok((fiber, out))
}

/// Twist function for a pair of places of P^1: u = c * prod(pi_i) with odd
/// valuation exactly at the two places (infinity enters through the parity
/// of deg u). The constant c fixes the published normalization.
pub fn twist_by_points<K: Field>(
    k: &K,
    p1: &Place<K>,
    p2: &Place<K>,
    c: &K::Elem,
) -> Result<RatFunc<K>, CurveError> {
    if p1 == p2 {
        return Err(CurveError::SamePlaceTwice);
    }
    assert!(!k.is_zero(c));
    let mut u = Poly::constant(k, c.clone());
    let mut finite_deg = 0usize;
    let mut with_inf = false;
    for p in [p1, p2] {
        match p {
            Place::Finite(pi) => {
                finite_deg += pi.degree().unwrap();
                u = Poly::mul(k, &u, pi);
            }
            Place::Infinity => with_inf = true,
        }
    }
    // ord_inf(u) = -deg u must be odd iff infinity is one of the places
    if with_inf != (finite_deg % 2 == 1) {
        return Err(CurveError::Singular(String::from(
            "place degrees incompatible with an odd valuation at infinity",
        )));
    }
    Ok(RatFunc::of_poly(k, u))
}

/// Certify that `twisted` is the quadratic twist of `base` by u, up to the
/// exact normalization used by `quadratic_twist`.
pub fn certify_twist<K: Field>(
    base: &SurfaceCurve<K>,
    twisted: &SurfaceCurve<K>,
    u: &RatFunc<K>,
) -> bool {
    let ff = &base.field;
    if ff.is_zero(u) {
        return false;
    }
    match base.quadratic_twist(u) {
        Ok(t) => t.r == twisted.r && t.s == twisted.s,
        Err(_) => false,
    }
}

/// Reduce a model over Q(t) modulo p into F_{p^e}(t).
pub fn reduce_model_mod_p(
    curve: &SurfaceCurve<crate::field::Rationals>,
    fq: &crate::finite::ExtField,
) -> Result<SurfaceCurve<crate::finite::ExtField>, CurveError> {
    if fq.fp.p == 2 || fq.fp.p == 3 {
        return Err(CurveError::BadReduction(String::from(
            "characteristic 2 and 3 excluded",
        )));
    }
    let q = crate::field::Rationals;
    let reduce_rf = |r: &RatFunc<crate::field::Rationals>| -> Option<RatFunc<crate::finite::ExtField>> {
        let num = reduce_poly_ext(&r.num, fq)?;
        let den = reduce_poly_ext(&r.den, fq)?;
        if den.is_zero() {
            return None;
        }
        Some(RatFunc::new(fq, num, den))
    };
    let _ = q;
    let r = reduce_rf(&curve.r)
        .ok_or_else(|| CurveError::BadReduction(String::from("denominator vanishes mod p")))?;
    let s = reduce_rf(&curve.s)
        .ok_or_else(|| CurveError::BadReduction(String::from("denominator vanishes mod p")))?;
    let ff = FunctionField::new(fq.clone());
    let red = Curve::new(ff.clone(), r.clone(), s.clone());
    // generic fiber must stay nonsingular
    if r.is_zero() || s.is_zero() {
        return Err(CurveError::BadReduction(String::from(
            "a root collapses to zero mod p",
        )));
    }
    if ff.is_zero(&ff.sub(&r, &s)) {
        return Err(CurveError::BadReduction(String::from(
            "roots r and s collide mod p",
        )));
    }
    Ok(red)
}

fn reduce_poly_ext(
    f: &Poly<crate::field::Rationals>,
    fq: &crate::finite::ExtField,
) -> Option<Poly<crate::finite::ExtField>> {
    let fp = crate::finite::PrimeField::new(fq.fp.p);
    let g = crate::finite::reduce_qpoly_mod_p(f, &fp)?;
    Some(Poly::from_coeffs(
        fq,
        g.coeffs.iter().map(|&c| fq.from_base(c)).collect(),
    ))
}

/// Reduce a section over Q(t) along with the model.
pub fn reduce_section_mod_p(
    p: &Section<crate::field::Rationals>,
    fq: &crate::finite::ExtField,
) -> Option<Section<crate::finite::ExtField>> {
    match p {
        Point::Infinity => Some(Point::Infinity),
        Point::Affine(x, y) => {
            let rx = RatFunc::new(fq, reduce_poly_ext(&x.num, fq)?, reduce_poly_ext(&x.den, fq)?);
            let ry = RatFunc::new(fq, reduce_poly_ext(&y.num, fq)?, reduce_poly_ext(&y.den, fq)?);
            Some(Point::Affine(rx, ry))
        }
    }
}

// ---- the parameter map between E_t points and triple curves ----

/// Map a point of E_t : y^2 = x(x-(t^2-1)^2)(x-4t^2) specialized at
/// t = b/(c-a) to the curve y^2 = x(x-a^2)(x-b^2):
/// (x, y) -> (x (a-c)^2 / 4, y (c-a)^3 / 8).
pub fn scale_to_triple(
    pt: &Point<crate::field::Rationals>,
    a: i64,
    c: i64,
) -> Result<Point<crate::field::Rationals>, CurveError> {
    use crate::field::rat_int;
    if a == c {
        return Err(CurveError::Singular(String::from("a = c excluded")));
    }
    let q = crate::field::Rationals;
    match pt {
        Point::Infinity => Ok(Point::Infinity),
        Point::Affine(x, y) => {
            let ac = rat_int(a - c);
            let ca = rat_int(c - a);
            let xs = x * &ac * &ac / rat_int(4);
            let ys = y * &ca * &ca * &ca / rat_int(8);
            let _ = q;
            Ok(Point::Affine(xs, ys))
        }
    }
}

pub fn unscale_from_triple(
    pt: &Point<crate::field::Rationals>,
    a: i64,
    c: i64,
) -> Result<Point<crate::field::Rationals>, CurveError> {
    use crate::field::rat_int;
    if a == c {
        return Err(CurveError::Singular(String::from("a = c excluded")));
    }
    match pt {
        Point::Infinity => Ok(Point::Infinity),
        Point::Affine(x, y) => {
            let ac = rat_int(a - c);
            let ca = rat_int(c - a);
            let xs = x * rat_int(4) / (&ac * &ac);
            let ys = y * rat_int(8) / (&ca * &ca * &ca);
            Ok(Point::Affine(xs, ys))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat_int, Rationals};

    fn e2_model() -> SurfaceCurve<Rationals> {
        // y^2 = x (x - (t^2-1)^2)(x - 4t^2)
        let q = Rationals;
        let ff = FunctionField::new(q);
        let t2m1 = Poly::from_i64(&q, &[-1, 0, 1]);
        let r = RatFunc::of_poly(&q, Poly::mul(&q, &t2m1, &t2m1));
        let s = RatFunc::of_poly(&q, Poly::from_i64(&q, &[0, 0, 4]));
        Curve::new(ff, r, s)
    }

    #[test]
    fn discriminant_of_e2_matches_published_formula() {
        let q = Rationals;
        let e2 = e2_model();
        let (disc, j, _, _) = e2.invariants();
        // Delta(t) = 256 t^4 (t^2-1)^4 (1 - 6t^2 + t^4)^2
        let t4 = Poly::from_i64(&q, &[0, 0, 0, 0, 256]);
        let t2m1 = Poly::from_i64(&q, &[-1, 0, 1]);
        let quart = Poly::from_i64(&q, &[1, 0, -6, 0, 1]);
        let expect = Poly::mul(
            &q,
            &Poly::mul(&q, &t4, &Poly::pow(&q, &t2m1, 4)),
            &Poly::mul(&q, &quart, &quart),
        );
        assert_eq!(disc.num, expect);
        assert!(j.is_some());
    }

    #[test]
    fn triple_curve_discriminant() {
        // (a,b) = (3,4): Delta = 16 (a-b)^2 (a+b)^2 a^4 b^4 by direct expansion
        let q = Rationals;
        let e = Curve::new(q, rat_int(9), rat_int(16));
        let (disc, _, _, _) = e.invariants();
        assert_eq!(disc, rat_int(16 * 1 * 49 * 81 * 256));
        // a = b gives Delta = 0
        let e = Curve::new(Rationals, rat_int(9), rat_int(9));
        assert!(!e.is_smooth());
    }

    #[test]
    fn group_law_two_torsion_sums() {
        // (0,0) + (a^2,0) = (b^2,0) on y^2 = x(x-a^2)(x-b^2)
        let e = Curve::new(Rationals, rat_int(9), rat_int(16));
        let [t0, tr, ts] = e.two_torsion();
        assert_eq!(e.add(&t0, &tr), ts);
        assert_eq!(e.add(&t0, &ts), tr);
        assert_eq!(e.add(&tr, &ts), t0);
        assert_eq!(e.add(&t0, &t0), Point::Infinity);
    }

    #[test]
    fn minus_two_q1_is_the_classical_point() {
        // -2*Q1 = (c^2, abc) on E_{(3,4,5)} with Q1 = ((a+b-c)^2/2, (a+b)(a+b-c)^2/2)
        let e = Curve::new(Rationals, rat_int(9), rat_int(16));
        let q1 = Point::Affine(rat_int(2), rat_int(14));
        assert!(e.contains(&q1));
        let m2 = e.scalar_mul(-2, &q1);
        assert_eq!(m2, Point::Affine(rat_int(25), rat_int(60)));
        assert!(e.contains(&m2));
    }

    #[test]
    fn specialization_of_e2() {
        let e2 = e2_model();
        // t = 2 -> y^2 = x(x-9)(x-16)
        let (fiber, _) = specialize(&e2, &rat_int(2), &[]).unwrap();
        assert_eq!(fiber.r, rat_int(9));
        assert_eq!(fiber.s, rat_int(16));
        // t = 1 is singular
        assert!(matches!(
            specialize(&e2, &rat_int(1), &[]),
            Err(CurveError::Singular(_))
        ));
    }

    #[test]
    fn specialize_commutes_with_add() {
        let q = Rationals;
        let ff = FunctionField::new(q);
        let e2 = e2_model();
        // P2 = (2(t-1)^2, 2(t-1)^2(t^2+2t-1))
        let tm1sq = Poly::from_i64(&q, &[1, -2, 1]);
        let x = RatFunc::of_poly(&q, Poly::scale(&q, &tm1sq, &rat_int(2)));
        let y = RatFunc::of_poly(
            &q,
            Poly::scale(
                &q,
                &Poly::mul(&q, &tm1sq, &Poly::from_i64(&q, &[-1, 2, 1])),
                &rat_int(2),
            ),
        );
        let p2: Section<Rationals> = Point::Affine(x, y);
        assert!(e2.contains(&p2));
        let dbl = e2.add(&p2, &p2);
        let (fiber, pts) = specialize(&e2, &rat_int(2), &[p2.clone(), dbl.clone()]).unwrap();
        assert_eq!(pts[0], Point::Affine(rat_int(2), rat_int(14)));
        let spec_dbl = fiber.add(&pts[0], &pts[0]);
        assert_eq!(spec_dbl, pts[1]);
        let _ = ff;
    }

    #[test]
    fn twist_normalization_and_j_invariance() {
        let q = Rationals;
        let e2 = e2_model();
        let u = RatFunc::of_poly(&q, Poly::from_i64(&q, &[1, 0, -5])); // 1 - 5t^2
        let tw = e2.quadratic_twist(&u).unwrap();
        let (_, j1, _, _) = e2.invariants();
        let (_, j2, _, _) = tw.invariants();
        assert_eq!(j1, j2);
        // twisting twice lands on a model isomorphic to the original (same j)
        let tw2 = tw.quadratic_twist(&u).unwrap();
        let (_, j3, _, _) = tw2.invariants();
        assert_eq!(j1, j3);
        // u = 1 leaves the model unchanged
        let ff = FunctionField::new(q);
        let tw1 = e2.quadratic_twist(&ff.one()).unwrap();
        assert_eq!(tw1.r, e2.r);
    }

    #[test]
    fn twist_functions_for_the_published_models() {
        let q = Rationals;
        // (1/5, inf): u = -5 (t - 1/5) = 1 - 5t
        let p1 = Place::Finite(Poly::from_coeffs(
            &q,
            alloc::vec![rat_int(-1) / rat_int(5), rat_int(1)],
        ));
        let u = twist_by_points(&q, &p1, &Place::Infinity, &rat_int(-5)).unwrap();
        assert_eq!(u.num, Poly::from_i64(&q, &[1, -5]));
        // valuations: odd at t-1/5 and inf, even elsewhere
        assert_eq!(u.valuation(&q, &Poly::from_coeffs(&q, alloc::vec![rat_int(-1)/rat_int(5), rat_int(1)])), 1);
        assert_eq!(u.valuation_at_infinity(), -1);
        // (0, inf) with c = 1: u = t
        let p0 = Place::Finite(Poly::x(&q));
        let u2 = twist_by_points(&q, &p0, &Place::Infinity, &rat_int(1)).unwrap();
        assert_eq!(u2.num, Poly::x(&q));
        // two finite places of odd total degree cannot avoid infinity
        assert!(twist_by_points(&q, &p0, &Place::Finite(Poly::from_i64(&q, &[5, 0, 1])), &rat_int(1)).is_err());
        // same place twice rejected
        assert!(matches!(
            twist_by_points(&q, &Place::<Rationals>::Infinity, &Place::Infinity, &rat_int(1)),
            Err(CurveError::SamePlaceTwice)
        ));
    }

    #[test]
    fn integral_model_of_e3_has_polynomial_coefficients() {
        // E3: r = (u^2-1)^2, s = 4u^2, u = 2t/(5+t^2)
        let q = Rationals;
        let ff = FunctionField::new(q);
        let u = RatFunc::new(
            &q,
            Poly::from_i64(&q, &[0, 2]),
            Poly::from_i64(&q, &[5, 0, 1]),
        );
        let u2 = RatFunc::mul(&q, &u, &u);
        let r = RatFunc::square(&q, &RatFunc::sub(&q, &u2, &ff.one()));
        let s = RatFunc::scale(&q, &u2, &rat_int(4));
        let e3 = Curve::new(ff, r, s);
        let im = integral_model(&e3);
        // r = ((t^2+5)^2 - 4t^2)^2 = (t^2-2t+5)^2 (t^2+2t+5)^2, s = 16 t^2 (t^2+5)^2
        let q1 = Poly::from_i64(&q, &[5, -2, 1]);
        let q2 = Poly::from_i64(&q, &[5, 2, 1]);
        let expect_r = Poly::mul(&q, &Poly::pow(&q, &q1, 2), &Poly::pow(&q, &q2, 2));
        let expect_s = Poly::mul(
            &q,
            &Poly::from_i64(&q, &[0, 0, 16]),
            &Poly::pow(&q, &Poly::from_i64(&q, &[5, 0, 1]), 2),
        );
        assert_eq!(im.r_poly, expect_r);
        assert_eq!(im.s_poly, expect_s);
        // j-invariant is untouched by the rescaling
        let (_, j1, _, _) = e3.invariants();
        let (_, j2, _, _) = im.curve.invariants();
        assert_eq!(j1, j2);
    }

    #[test]
    fn scale_to_triple_roundtrip() {
        let q1 = Point::Affine(rat_int(72), rat_int(-144));
        let back = unscale_from_triple(&q1, -8, 10).unwrap();
        let there = scale_to_triple(&back, -8, 10).unwrap();
        assert_eq!(there, q1);
        // (c^2, abc) for (3,4,5) = (25, 60): 25*16*9 = 3600 = 60^2
        let e = Curve::new(Rationals, rat_int(9), rat_int(16));
        assert!(e.contains(&Point::Affine(rat_int(25), rat_int(60))));
        assert!(scale_to_triple(&Point::Infinity, 3, 3).is_err());
    }

    #[test]
    fn reduction_mod_p() {
        use crate::finite::ExtField;
        let e2 = e2_model();
        let f17 = ExtField::new(17, 1);
        let red = reduce_model_mod_p(&e2, &f17).unwrap();
        assert!(!red.r.is_zero());
        let f2 = ExtField::new(5, 1);
        // E2 reduces fine mod 5 as well
        assert!(reduce_model_mod_p(&e2, &f2).is_ok());
    }
}
