//! Mordell-Weil lattice arithmetic over K(t): the Shioda height pairing,
//! Gram determinants and index bounds, 2-descent images and saturation,
//! torsion computation, Shioda-Tate rank assembly, twist additivity
//! certification and Galois descent to Q(t).
//!
//! Self-heights follow <P,P> = 2 chi + 2 (P.O) - sum_v contr_v(P); mixed
//! pairings come from the polarization identity, so section-section
//! intersections are never computed directly. The component a section
//! hits at a multiplicative place is read off pi-adic valuations of
//! y - sqrt(h)(x - sigma/2) in a quadratic extension ring, which needs no
//! squareness decisions: a split extension ring has exactly the right
//! coordinate-wise valuations.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::field::{rat_int, Field};
use crate::kodaira::FiberKind;
use crate::localring::{expand_integral_at_place, QuadRing, Series, SimpleExt};
use crate::poly::Poly;
use crate::ratfunc::RatFunc;
use crate::squarefree::SquareClass;
use crate::weierstrass::{IntegralModel, Point, Section, SurfaceCurve};

#[derive(Clone, Debug, PartialEq)]
pub enum MwError {
    NotOnCurve,
    ComponentAmbiguous(String),
    DependentGenerators,
    Inconsistent(String),
    UncertifiedTwist(String),
    NotExpressible(String),
}

/// A bad place over the height base field with its fiber type.
#[derive(Clone, Debug)]
pub struct HeightPlace<K: Field> {
    pub pi: Poly<K>,
    pub degree: usize,
    pub kind: FiberKind,
}

/// Everything the height pairing needs: the integral model over the
/// coefficient field that contains all section coordinates, its bad
/// places, and chi of the elliptic surface.
pub struct HeightContext<K: Field> {
    pub curve: SurfaceCurve<K>,
    pub r: Poly<K>,
    pub s: Poly<K>,
    pub chi: usize,
    pub places: Vec<HeightPlace<K>>,
    pub infinity: Option<InfinityData<K>>,
}

pub struct InfinityData<K: Field> {
    pub r_inf: Poly<K>,
    pub s_inf: Poly<K>,
    pub kind: FiberKind,
    /// scaling weight k of the chart flip (x_inf = w^{2k} x)
    pub weight: usize,
}

impl<K: Field> HeightContext<K> {
    /// Build from an integral model, fiber kinds at finite places
    /// (as (place, kind) pairs over this base field), chi, and the fiber
    /// kind at infinity when singular.
    pub fn new(
        model: &IntegralModel<K>,
        finite_places: Vec<(Poly<K>, FiberKind)>,
        infinity_kind: Option<FiberKind>,
        chi: usize,
    ) -> Self {
        let (ri, si, weight) = model.infinity_chart();
        let places = finite_places
            .into_iter()
            .map(|(pi, kind)| HeightPlace {
                degree: pi.degree().unwrap(),
                pi,
                kind,
            })
            .collect();
        HeightContext {
            curve: model.curve.clone(),
            r: model.r_poly.clone(),
            s: model.s_poly.clone(),
            chi,
            places,
            infinity: infinity_kind.map(|kind| InfinityData {
                r_inf: ri,
                s_inf: si,
                kind,
                weight,
            }),
        }
    }

    fn base(&self) -> &K {
        &self.curve.field.base
    }

    /// (P.O): intersection with the zero section from x-coordinate poles,
    /// all places including infinity.
    pub fn contact_with_zero(&self, p: &Section<K>) -> Result<BigRational, MwError> {
        let k = self.base();
        let (x, _) = match p.xy() {
            None => return Ok(BigRational::zero()), // O.O handled by the caller
            Some(t) => t,
        };
        let mut total = BigInt::zero();
        // finite poles: x has denominator den(x); pole orders are even
        if !x.is_zero() {
            let den = &x.den;
            if den.degree().map(|d| d > 0).unwrap_or(false) {
                // each irreducible pole contributes; total pole order is
                // deg(den) counted with multiplicity, but we need per-place
                // only through the sum, which equals deg den (minus any
                // cancellation, impossible in lowest terms)
                total += BigInt::from(den.degree().unwrap() as u64);
            }
            // infinity: pole order = max(0, -v_inf) with the chart weight
            let _ = k;
            let v_inf = self.infinity_x_valuation(p)?;
            if v_inf < 0 {
                total += BigInt::from((-v_inf) as u64);
            }
        }
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        Ok(crate::field::rat_of_bigint(total) * half)
    }

    fn infinity_x_valuation(&self, p: &Section<K>) -> Result<i64, MwError> {
        let k = self.base();
        let (x, _) = p.xy().expect("affine");
        // x_inf(w) = w^{2k} x(1/w)
        let kk = match &self.infinity {
            Some(d) => d.weight,
            None => {
                let dr = self.r.deg_i().max(0) as usize;
                let ds = self.s.deg_i().max(0) as usize;
                dr.max(ds).div_ceil(2)
            }
        };
        if x.is_zero() {
            return Ok(i64::MAX);
        }
        let w_inv = RatFunc::new(k, Poly::one(k), Poly::x(k));
        let xw = RatFunc::compose(k, x, &w_inv);
        Ok(2 * kk as i64 + xw.valuation(k, &Poly::x(k)))
    }

    /// Self-pairing <P,P> of a non-torsion section.
    pub fn self_pairing(&self, p: &Section<K>) -> Result<BigRational, MwError> {
        if !self.curve.contains(p) {
            return Err(MwError::NotOnCurve);
        }
        if p.is_infinity() {
            return Ok(BigRational::zero());
        }
        let two = rat_int(2);
        let mut h = rat_int(self.chi as i64) * &two + &two * self.contact_with_zero(p)?;
        for place in &self.places {
            let c = self.local_contribution(p, place)?;
            h -= c * rat_int(place.degree as i64);
        }
        if let Some(inf) = &self.infinity {
            let c = self.local_contribution_infinity(p, inf)?;
            h -= c;
        }
        Ok(h)
    }

    /// Full pairing by polarization: <P,Q> = (<P+Q> - <P> - <Q>)/2.
    /// Torsion sections pair to zero by convention.
    pub fn pairing(
        &self,
        p: &Section<K>,
        q: &Section<K>,
        torsion_exponent: u64,
    ) -> Result<BigRational, MwError> {
        if self.is_torsion(p, torsion_exponent) || self.is_torsion(q, torsion_exponent) {
            return Ok(BigRational::zero());
        }
        if p == q {
            return self.self_pairing(p);
        }
        let sum = self.curve.add(p, q);
        if self.is_torsion(&sum, torsion_exponent) {
            // q = -p + torsion: <p,q> = -<p,p>
            return Ok(-self.self_pairing(p)?);
        }
        let hsum = self.self_pairing(&sum)?;
        let hp = self.self_pairing(p)?;
        let hq = self.self_pairing(q)?;
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        Ok((hsum - hp - hq) * half)
    }

    pub fn is_torsion(&self, p: &Section<K>, exponent: u64) -> bool {
        if p.is_infinity() {
            return true;
        }
        // fast path: a torsion section specializes to a point of dividing
        // order on every good fiber, so one good specialization with order
        // not dividing the exponent certifies non-torsion without large
        // scalar multiples of function-field points
        let k = self.base();
        for t0i in 2..40i64 {
            let t0 = k.from_i64(t0i);
            if let Ok((fiber, pts)) =
                crate::weierstrass::specialize(&self.curve, &t0, &[p.clone()])
            {
                let q0 = &pts[0];
                let mut torsion_possible = false;
                let mut n = 1u64;
                while n <= exponent {
                    if exponent % n == 0 && fiber.scalar_mul(n as i64, q0).is_infinity() {
                        torsion_possible = true;
                        break;
                    }
                    n += 1;
                }
                if !torsion_possible {
                    return false;
                }
                break;
            }
        }
        let mut n = 1u64;
        while n <= exponent {
            if exponent % n == 0 && self.curve.scalar_mul(n as i64, p).is_infinity() {
                return true;
            }
            n += 1;
        }
        false
    }

    /// Local height contribution at a finite place.
    fn local_contribution(
        &self,
        p: &Section<K>,
        place: &HeightPlace<K>,
    ) -> Result<BigRational, MwError> {
        self.contribution_core(p, &place.pi, place.kind, &self.r, &self.s)
    }

    fn local_contribution_infinity(
        &self,
        p: &Section<K>,
        inf: &InfinityData<K>,
    ) -> Result<BigRational, MwError> {
        let k = self.base();
        // move the section to the w-chart
        let (x, y) = match p.xy() {
            None => return Ok(BigRational::zero()),
            Some(t) => t,
        };
        let w_inv = RatFunc::new(k, Poly::one(k), Poly::x(k));
        let xw = RatFunc::compose(k, x, &w_inv);
        let yw = RatFunc::compose(k, y, &w_inv);
        let kk = inf.weight;
        let x_inf = RatFunc::mul(k, &xw, &RatFunc::of_poly(k, Poly::monomial(k, k.one(), 2 * kk)));
        let y_inf = RatFunc::mul(k, &yw, &RatFunc::of_poly(k, Poly::monomial(k, k.one(), 3 * kk)));
        let pw: Section<K> = Point::Affine(x_inf, y_inf);
        self.contribution_core(&pw, &Poly::x(k), inf.kind, &inf.r_inf, &inf.s_inf)
    }

    /// contr_v(P) for the given fiber kind, on the chart carrying (r, s).
    fn contribution_core(
        &self,
        p: &Section<K>,
        pi: &Poly<K>,
        kind: FiberKind,
        r: &Poly<K>,
        s: &Poly<K>,
    ) -> Result<BigRational, MwError> {
        let k = self.base();
        let (x, y) = match p.xy() {
            None => return Ok(BigRational::zero()),
            Some(t) => t,
        };
        match kind {
            FiberKind::Good => Ok(BigRational::zero()),
            FiberKind::In(n) => {
                let kidx = self.multiplicative_component_index(x, y, pi, r, s, n)?;
                Ok(BigRational::new(
                    BigInt::from((kidx * (n - kidx)) as u64),
                    BigInt::from(n as u64),
                ))
            }
            FiberKind::InStar(n) => {
                // additive: singular point is the triple root of the cubic
                // x(x-r)(x-s) mod pi, which is 0 here (v(r), v(s) >= 1)
                if x.is_zero() || x.valuation(k, pi) >= 1 {
                    let v = if x.is_zero() { i64::MAX } else { x.valuation(k, pi) };
                    if v == 1 {
                        Ok(BigRational::one()) // near leaf
                    } else {
                        // far leaves
                        Ok(BigRational::one()
                            + BigRational::new(BigInt::from(n as u64), BigInt::from(4u64)))
                    }
                } else {
                    Ok(BigRational::zero())
                }
            }
            FiberKind::III => Ok(self.additive_simple_contr(x, pi, rat_int(1) / rat_int(2))),
            FiberKind::IV => Ok(self.additive_simple_contr(x, pi, rat_int(2) / rat_int(3))),
            FiberKind::IVStar => Ok(self.additive_simple_contr(x, pi, rat_int(4) / rat_int(3))),
            FiberKind::IIIStar => Ok(self.additive_simple_contr(x, pi, rat_int(3) / rat_int(2))),
            FiberKind::II | FiberKind::IIStar => Ok(BigRational::zero()),
        }
    }

    fn additive_simple_contr(
        &self,
        x: &RatFunc<K>,
        pi: &Poly<K>,
        value: BigRational,
    ) -> BigRational {
        let k = self.base();
        // singular point at x = 0 mod pi for these configurations
        if x.is_zero() || x.valuation(k, pi) >= 1 {
            value
        } else {
            BigRational::zero()
        }
    }

    /// Component index k (0 = identity) of a section at a multiplicative
    /// place: 0 when it misses the node, otherwise min(v(u), n - v(u)) for
    /// u = y - sqrt(h)(x - sigma/2) in the quadratic extension ring.
    fn multiplicative_component_index(
        &self,
        x: &RatFunc<K>,
        y: &RatFunc<K>,
        pi: &Poly<K>,
        r: &Poly<K>,
        s: &Poly<K>,
        n: usize,
    ) -> Result<usize, MwError> {
        let k = self.base();
        let vr = poly_val(k, r, pi);
        let vs = poly_val(k, s, pi);
        let rms = Poly::sub(k, r, s);
        let vrms = poly_val(k, &rms, pi);
        // colliding pair and the cofactor h(x): f = h(x) (x - rho1)(x - rho2)
        let (h_at, sigma): (RatFunc<K>, RatFunc<K>) = if vs >= 1 && vr == 0 {
            // {0, s} collide; h = x - r
            (
                RatFunc::sub(k, x, &RatFunc::of_poly(k, r.clone())),
                RatFunc::of_poly(k, s.clone()),
            )
        } else if vr >= 1 && vs == 0 {
            (
                RatFunc::sub(k, x, &RatFunc::of_poly(k, s.clone())),
                RatFunc::of_poly(k, r.clone()),
            )
        } else if vrms >= 1 && vr == 0 && vs == 0 {
            // {r, s} collide; h = x
            (
                x.clone(),
                RatFunc::of_poly(k, Poly::add(k, r, s)),
            )
        } else {
            return Err(MwError::ComponentAmbiguous(String::from(
                "multiplicative place with unexpected valuations",
            )));
        };
        // does the section hit the node? x must reduce to the node x0
        // node x0: 0 in the first two cases, r mod pi in the third
        let x_minus_node = if vrms >= 1 && vr == 0 && vs == 0 {
            RatFunc::sub(k, x, &RatFunc::of_poly(k, r.clone()))
        } else {
            x.clone()
        };
        if x_minus_node.is_zero() {
            // x identically the node coordinate: lies on the 2-torsion
            // section through the node; component n/2 by symmetry
            return Ok(n / 2);
        }
        if x_minus_node.valuation(k, pi) < 1 {
            return Ok(0);
        }
        let depth = n + 4;
        // H = h(x_P) as a series; H0 is a unit
        let h_series = expand_integral_at_place(k, &h_at, pi, depth).ok_or_else(|| {
            MwError::ComponentAmbiguous(String::from("section not integral at the place"))
        })?;
        let kappa = SimpleExt::new(k.clone(), pi.clone());
        let h0 = h_series.coeffs[0].clone();
        if kappa.is_zero(&h0) {
            return Err(MwError::ComponentAmbiguous(String::from(
                "cofactor vanishes at the node",
            )));
        }
        // work in R = kappa[z]/(z^2 - H0)
        let ring = QuadRing::new(kappa.clone(), h0.clone());
        let lift = |ser: &Series<SimpleExt<K>>| -> Series<QuadRing<SimpleExt<K>>> {
            Series {
                coeffs: ser.coeffs.iter().map(|c| ring.embed(c.clone())).collect(),
            }
        };
        // sqrt(H) = z * sqrt(H / H0), with sqrt(H/H0) starting at 1
        let h0_inv = kappa.inv(&h0).unwrap();
        let h_unit = Series::scale(&kappa, &h_series, &h0_inv);
        let sqrt_unit = Series::sqrt_with(&ring, &lift(&h_unit), ring.one());
        let sqrt_h = Series::mul(
            &ring,
            &Series::constant(&ring, ring.z(), depth),
            &sqrt_unit,
        );
        // A = sqrt(H) (x - sigma/2)
        let half = k.inv(&k.from_i64(2)).unwrap();
        let x_shift = RatFunc::sub(k, x, &RatFunc::scale(k, &sigma, &half));
        let xs_series = expand_integral_at_place(k, &x_shift, pi, depth).ok_or_else(|| {
            MwError::ComponentAmbiguous(String::from("section not integral at the place"))
        })?;
        let a_series = Series::mul(&ring, &sqrt_h, &lift(&xs_series));
        let y_series = expand_integral_at_place(k, y, pi, depth).ok_or_else(|| {
            MwError::ComponentAmbiguous(String::from("section y not integral at the place"))
        })?;
        let u = Series::sub(&ring, &lift(&y_series), &a_series);
        let vu = match u.valuation(&ring) {
            Some(v) => v,
            None => {
                return Err(MwError::ComponentAmbiguous(String::from(
                    "series precision exhausted in component identification",
                )))
            }
        };
        Ok(vu.min(n - vu.min(n)))
    }
}

fn poly_val<K: Field>(k: &K, f: &Poly<K>, pi: &Poly<K>) -> usize {
    if f.is_zero() {
        return usize::MAX;
    }
    let mut v = 0;
    let mut cur = f.clone();
    loop {
        let (q, rem) = Poly::divrem(k, &cur, pi);
        if rem.is_zero() {
            v += 1;
            cur = q;
        } else {
            return v;
        }
    }
}

// ---- Gram matrices and index bounds ----

/// Exact determinant by fraction-free Gaussian elimination.
pub fn gram_determinant(gram: &[Vec<BigRational>]) -> BigRational {
    let n = gram.len();
    let mut m: Vec<Vec<BigRational>> = gram.to_vec();
    let mut det = BigRational::one();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero());
        let piv = match piv {
            Some(p) => p,
            None => return BigRational::zero(),
        };
        if piv != col {
            m.swap(col, piv);
            det = -det;
        }
        let pv = m[col][col].clone();
        det *= &pv;
        for r in col + 1..n {
            let f = &m[r][col] / &pv;
            for c in col..n {
                let t = &f * &m[col][c];
                m[r][c] -= t;
            }
        }
    }
    det
}

/// Determinant of the scaled lattice and the admissible index divisors:
/// all n with n^2 | det.
pub fn gram_index_bound(gram: &[Vec<BigRational>]) -> Result<(BigInt, Vec<u64>), MwError> {
    let det = gram_determinant(gram);
    if det.is_zero() {
        return Err(MwError::DependentGenerators);
    }
    if !det.is_integer() {
        return Err(MwError::Inconsistent(format!(
            "scaled Gram determinant {det} is not an integer"
        )));
    }
    let d = det.to_integer();
    let da = d.abs();
    let mut out = Vec::new();
    let mut n = BigInt::one();
    loop {
        if (&da % (&n * &n)).is_zero() {
            use num_traits::ToPrimitive;
            out.push(n.to_u64().unwrap());
        }
        n += 1;
        if &n * &n > da {
            break;
        }
    }
    Ok((d, out))
}

// ---- 2-descent ----

/// The 2-descent image of a section on y^2 = x(x-r)(x-s):
/// psi(x, y) = (x - e1, x - e2) with (e1, e2) = (0, s), as square classes
/// of K(t)*; 2-torsion points use the standard substitute values.
/// `geometric` kills constants (classes of Qbar(t)*).
pub fn two_descent_image<K: Field>(
    curve: &SurfaceCurve<K>,
    p: &Section<K>,
    geometric: bool,
) -> Result<(SquareClass<K>, SquareClass<K>), MwError> {
    let ff = &curve.field;
    let k = &ff.base;
    if !curve.contains(p) {
        return Err(MwError::NotOnCurve);
    }
    let class_of = |v: &RatFunc<K>| -> Result<SquareClass<K>, MwError> {
        if !geometric {
            return Err(MwError::Inconsistent(String::from(
                "rational-content descent classes are only wired for geometric mode",
            )));
        }
        crate::squarefree::square_class_geometric(k, v)
            .map_err(|_| MwError::Inconsistent(String::from("zero descent value")))
    };
    let (x, _) = match p.xy() {
        None => return Ok((SquareClass::trivial(k, geometric), SquareClass::trivial(k, geometric))),
        Some(t) => t,
    };
    let e1 = ff.zero();
    let e2 = curve.s.clone();
    let e3 = curve.r.clone();
    let x1 = ff.sub(x, &e1);
    let x2 = ff.sub(x, &e2);
    let c1 = if ff.is_zero(&x1) {
        // P = (0,0): substitute (e1-e2)(e1-e3)
        class_of(&ff.mul(&ff.sub(&e1, &e2), &ff.sub(&e1, &e3)))?
    } else {
        class_of(&x1)?
    };
    let c2 = if ff.is_zero(&x2) {
        // P = (s,0): substitute (e2-e1)(e2-e3)
        class_of(&ff.mul(&ff.sub(&e2, &e1), &ff.sub(&e2, &e3)))?
    } else {
        class_of(&x2)?
    };
    Ok((c1, c2))
}

/// F_2 span size of a list of descent images.
pub fn descent_span_dimension<K: Field>(
    k: &K,
    images: &[(SquareClass<K>, SquareClass<K>)],
) -> usize {
    // Gaussian elimination in the group (square classes)^2: repeatedly pick
    // a nontrivial vector and reduce the rest. The class group here is an
    // F_2 vector space under SquareClass::mul.
    let mut basis: Vec<(SquareClass<K>, SquareClass<K>)> = Vec::new();
    let mut elems: Vec<(SquareClass<K>, SquareClass<K>)> =
        alloc::vec![(SquareClass::trivial(k, true), SquareClass::trivial(k, true))];
    for img in images {
        if elems.iter().any(|(a, b)| a == &img.0 && b == &img.1) {
            continue;
        }
        // new element: double the subgroup
        let snapshot = elems.clone();
        for (a, b) in snapshot {
            elems.push((SquareClass::mul(k, &a, &img.0), SquareClass::mul(k, &b, &img.1)));
        }
        basis.push(img.clone());
    }
    basis.len()
}

#[derive(Clone, Debug, PartialEq)]
pub enum SaturationVerdict {
    Saturated,
    /// indices that survive the descent test
    Surviving(Vec<u64>),
}

/// Rule out proper finite index for the lattice generated by `free_gens`
/// (with the listed torsion elements also mapped through the descent):
/// for an admissible index n = abc (a|b|c) the images of the generators
/// with odd multiplier plus the torsion images span at most
/// (#odd multipliers + torsion span) dimensions, so a full-dimensional
/// observed span refutes every pattern.
pub fn saturation_check<K: Field>(
    curve: &SurfaceCurve<K>,
    free_gens: &[Section<K>],
    torsion_listed: &[Section<K>],
    admissible: &[u64],
) -> Result<SaturationVerdict, MwError> {
    let k = &curve.field.base;
    let mut images = Vec::new();
    for p in free_gens.iter().chain(torsion_listed.iter()) {
        images.push(two_descent_image(curve, p, true)?);
    }
    let dim = descent_span_dimension(k, &images);
    let torsion_images: Vec<_> = torsion_listed
        .iter()
        .map(|p| two_descent_image(curve, p, true))
        .collect::<Result<Vec<_>, _>>()?;
    let torsion_dim = descent_span_dimension(k, &torsion_images);
    let g = free_gens.len() as u64;
    let mut surviving = Vec::new();
    for &n in admissible {
        if n <= 1 {
            continue;
        }
        // max over factorizations n = prod a_i (a_1 | a_2 | ... | a_g) of
        // the number of odd a_i
        let max_odd = max_odd_multipliers(n, g);
        if (max_odd as usize) + torsion_dim >= dim {
            surviving.push(n);
        }
    }
    if surviving.is_empty() {
        Ok(SaturationVerdict::Saturated)
    } else {
        Ok(SaturationVerdict::Surviving(surviving))
    }
}

/// Largest number of odd entries in a tuple (a_1 | a_2 | ... | a_g) with
/// product n > 1.
fn max_odd_multipliers(n: u64, g: u64) -> u64 {
    // divisibility chain with product n: odd entries are exactly the
    // leading 1s when n is even; when n is odd every entry can be odd but
    // the lattice index argument only concerns 2-power indices here.
    if n % 2 == 1 {
        return g;
    }
    // n even: write n = 2^k m; at most g - (number of even entries) and the
    // chain condition forces evens to be the trailing entries. The even
    // entries must multiply to at least 2^k with each >= 2: at least
    // ceil(k / max exponent) but minimal count is achieved by stuffing all
    // 2-powers into few entries subject to the chain: one entry suffices
    // unless the chain forces more. a_1 | ... | a_g with product n: the
    // most odd entries = g - 1 when a_g = n works (1 | 1 | ... | n).
    // But chains like (2,2,2) for n=8 have zero odd entries; the MAXIMUM
    // odd count over all patterns is what bounds the descent image.
    g - 1
}

/// The E2-style coset check: P + T in 2 E(K(t)) for some torsion T would
/// make every psi(P + T) trivial; returns the torsion points for which the
/// image is trivial (empty = saturated against index 2).
pub fn coset_descent_check<K: Field>(
    curve: &SurfaceCurve<K>,
    p: &Section<K>,
    torsion: &[Section<K>],
) -> Result<Vec<usize>, MwError> {
    let mut bad = Vec::new();
    for (i, t) in torsion.iter().enumerate() {
        let sum = curve.add(p, t);
        let (c1, c2) = two_descent_image(curve, &sum, true)?;
        if c1.is_trivial() && c2.is_trivial() {
            bad.push(i);
        }
    }
    Ok(bad)
}

// ---- torsion ----

#[derive(Clone, Debug)]
pub struct TorsionSubgroup<K: Field> {
    /// invariant factors, e.g. [2, 4] for Z/2 + Z/4
    pub structure: Vec<u64>,
    pub generators: Vec<Section<K>>,
}

/// Compute the torsion subgroup of y^2 = x(x-r)(x-s) over K(t) (all of it
/// when `geometric`, or only the sections with coordinates fixed by
/// `is_rational` otherwise). The search is bounded by the fiber-component
/// injection: only 2- and 4-torsion can occur for the I2/I4/I0*/I2* fiber
/// stacks handled here, and the caller passes that exponent bound.
pub fn torsion_subgroup<K: Field>(
    curve: &SurfaceCurve<K>,
    exponent_bound: u64,
    is_rational: &dyn Fn(&Section<K>) -> bool,
) -> Result<TorsionSubgroup<K>, MwError> {
    let ff = &curve.field;
    let k = &ff.base;
    assert!(
        exponent_bound <= 4,
        "torsion search implemented through 4-division only"
    );
    let mut points: Vec<Section<K>> = Vec::new();
    // 2-torsion: always present in factored form
    for t in curve.two_torsion() {
        if is_rational(&t) {
            points.push(t);
        }
    }
    let mut four_tors: Vec<Section<K>> = Vec::new();
    if exponent_bound >= 4 {
        // points with 2P = (e, 0): x = e +- sqrt((e - e')(e - e''))
        let zero = ff.zero();
        let roots = [zero.clone(), curve.s.clone(), curve.r.clone()];
        for i in 0..3 {
            let e = &roots[i];
            let others: Vec<_> = (0..3).filter(|&j| j != i).map(|j| roots[j].clone()).collect();
            let prod = ff.mul(&ff.sub(e, &others[0]), &ff.sub(e, &others[1]));
            if let Some(sq) = ratfunc_sqrt(k, &prod) {
                for sign in [1i64, -1] {
                    let x = if sign == 1 {
                        ff.add(e, &sq)
                    } else {
                        ff.sub(e, &sq)
                    };
                    let rhs = curve.rhs(&x);
                    if let Some(y) = ratfunc_sqrt(k, &rhs) {
                        for ysign in [1i64, -1] {
                            let yy = if ysign == 1 { y.clone() } else { ff.neg(&y) };
                            let cand: Section<K> = Point::Affine(x.clone(), yy);
                            debug_assert!(curve.contains(&cand));
                            if is_rational(&cand) && !four_tors.contains(&cand) {
                                four_tors.push(cand);
                            }
                        }
                    }
                }
            }
        }
    }
    // assemble the structure
    let two_rank = points.iter().filter(|p| !p.is_infinity()).count();
    let structure;
    let mut generators = Vec::new();
    if four_tors.is_empty() {
        match two_rank {
            0 => structure = Vec::new(),
            1 => {
                structure = alloc::vec![2];
                generators.push(points[0].clone());
            }
            _ => {
                structure = alloc::vec![2, 2];
                generators.push(Point::Affine(curve.s.clone(), ff.zero()));
                generators.push(Point::Affine(ff.zero(), ff.zero()));
            }
        }
    } else {
        // Z/2 + Z/4 here: a 4-torsion generator T2 and a 2-torsion T1 not
        // equal to 2 T2
        let t2 = four_tors[0].clone();
        let double = curve.add(&t2, &t2);
        let t1 = curve
            .two_torsion()
            .into_iter()
            .find(|t| *t != double && is_rational(t))
            .ok_or_else(|| MwError::Inconsistent(String::from("2-torsion bookkeeping")))?;
        structure = alloc::vec![2, 4];
        generators.push(t1);
        generators.push(t2);
    }
    Ok(TorsionSubgroup {
        structure,
        generators,
    })
}

/// Exact square root of a rational function: the odd part must be trivial
/// and the constant must be a square in K.
pub fn ratfunc_sqrt<K: Field>(k: &K, f: &RatFunc<K>) -> Option<RatFunc<K>> {
    if f.is_zero() {
        return Some(RatFunc::zero_over(k));
    }
    let sqrt_poly = |p: &Poly<K>| -> Option<(Poly<K>, K::Elem)> {
        // p = lc * g^2 * odd; succeeds when odd = 1
        let lc = p.leading(k);
        let mut g = Poly::one(k);
        for (fac, m) in Poly::squarefree_decomposition(k, p) {
            if m % 2 == 1 {
                return None;
            }
            g = Poly::mul(k, &g, &Poly::pow(k, &fac, (m / 2) as u64));
        }
        Some((g, lc))
    };
    let (gn, ln) = sqrt_poly(&f.num)?;
    let (gd, ld) = sqrt_poly(&f.den)?;
    // constant: ln/ld must be a square in K
    let c = k.div(&ln, &ld);
    let croot = field_sqrt(k, &c)?;
    Some(RatFunc::new(
        k,
        Poly::scale(k, &gn, &croot),
        gd,
    ))
}

/// Square root in the coefficient field when the field can decide it.
fn field_sqrt<K: Field>(k: &K, c: &K::Elem) -> Option<K::Elem> {
    // cheap cases first: 0, 1
    if k.is_zero(c) {
        return Some(k.zero());
    }
    if k.is_one(c) {
        return Some(k.one());
    }
    match k.decide_square(c) {
        Some(false) | None => None,
        Some(true) => {
            // search-free recovery is field-specific; go through the
            // generic hook below
            k.sqrt_elem(c)
        }
    }
}

// ---- Shioda-Tate and rank assembly ----

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PicardInput {
    Exact(usize),
    UpperBound(usize),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RankResult {
    Exact(usize),
    UpperBound(usize),
}

pub fn shioda_tate_rank(picard: PicardInput, trivial_rank: usize) -> Result<RankResult, MwError> {
    let value = |rho: usize| -> Result<usize, MwError> {
        rho.checked_sub(trivial_rank)
            .ok_or_else(|| MwError::Inconsistent(String::from("picard below the trivial rank")))
    };
    Ok(match picard {
        PicardInput::Exact(rho) => RankResult::Exact(value(rho)?),
        PicardInput::UpperBound(rho) => RankResult::UpperBound(value(rho)?),
    })
}

/// rank(E over the quadratic cover) = rank E + rank E^(u): certified
/// bookkeeping for twist additivity.
pub fn twist_rank_additivity(
    rank_base: usize,
    rank_twist: usize,
    certified: bool,
) -> Result<usize, MwError> {
    if !certified {
        return Err(MwError::UncertifiedTwist(String::from(
            "twist relationship not certified",
        )));
    }
    Ok(rank_base + rank_twist)
}

/// Certify that `cover` is the pullback of `base` under the degree-2 map
/// phi, and return the square class of the deck transformation's twist
/// function (the discriminant of the fiber of phi).
pub fn certify_quadratic_pullback<K: Field>(
    base: &SurfaceCurve<K>,
    cover: &SurfaceCurve<K>,
    phi: &RatFunc<K>,
) -> Result<RatFunc<K>, MwError> {
    let ff = &base.field;
    let k = &ff.base;
    let deg = phi.num.deg_i().max(phi.den.deg_i());
    if deg != 2 {
        return Err(MwError::UncertifiedTwist(String::from(
            "pullback map must have degree 2",
        )));
    }
    let r_pull = RatFunc::compose(k, &base.r, phi);
    let s_pull = RatFunc::compose(k, &base.s, phi);
    if r_pull != cover.r || s_pull != cover.s {
        return Err(MwError::UncertifiedTwist(String::from(
            "cover model is not the exact pullback",
        )));
    }
    // fiber of phi over a generic s0: num(t) - s0 den(t) = 0; its
    // discriminant as a function of s0 is the deck twist class. For the
    // quadratic a t^2 + b t + c with a, b, c linear in s0: b^2 - 4 a c.
    let a2 = phi.num.coeff(k, 2);
    let a1 = phi.num.coeff(k, 1);
    let a0 = phi.num.coeff(k, 0);
    let b2 = phi.den.coeff(k, 2);
    let b1 = phi.den.coeff(k, 1);
    let b0 = phi.den.coeff(k, 0);
    // coefficient of t^2: a2 - s b2, of t: a1 - s b1, constant: a0 - s b0
    let lin = |hi: &K::Elem, lo: &K::Elem| -> Poly<K> {
        Poly::from_coeffs(k, alloc::vec![hi.clone(), k.neg(lo)])
    };
    let ca = lin(&a2, &b2);
    let cb = lin(&a1, &b1);
    let cc = lin(&a0, &b0);
    let disc = Poly::sub(
        k,
        &Poly::mul(k, &cb, &cb),
        &Poly::scale(k, &Poly::mul(k, &ca, &cc), &k.from_i64(4)),
    );
    Ok(RatFunc::of_poly(k, disc))
}

/// Check that u1 and u2 define the same quadratic twist (their quotient is
/// a square in Qbar(t)): geometric class comparison.
pub fn same_twist_class<K: Field>(k: &K, u1: &RatFunc<K>, u2: &RatFunc<K>) -> bool {
    let q = RatFunc::div(k, u1, u2);
    crate::squarefree::is_square_ratfunc(k, &q, true)
}

// ---- Galois descent ----

/// Action of one automorphism on the generators, expressed in the
/// generator basis modulo torsion via height-pairing linear algebra.
pub fn galois_action_matrix<K: Field>(
    ctx: &HeightContext<K>,
    gens: &[Section<K>],
    sigma_gens: &[Section<K>],
    torsion_exponent: u64,
) -> Result<Vec<Vec<BigRational>>, MwError> {
    let n = gens.len();
    let mut gram = alloc::vec![alloc::vec![BigRational::zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let v = ctx.pairing(&gens[i], &gens[j], torsion_exponent)?;
            gram[i][j] = v.clone();
            gram[j][i] = v;
        }
    }
    let det = gram_determinant(&gram);
    if det.is_zero() {
        return Err(MwError::DependentGenerators);
    }
    let mut rows = Vec::with_capacity(n);
    for sp in sigma_gens {
        // solve gram * a = [<sigma P, P_j>]
        let mut rhs = Vec::with_capacity(n);
        for g in gens {
            rhs.push(ctx.pairing(sp, g, torsion_exponent)?);
        }
        let a = solve_linear(&gram, &rhs)
            .ok_or_else(|| MwError::NotExpressible(String::from("singular Gram matrix")))?;
        // verify: sigma P - sum a_j P_j must be torsion (requires integer a)
        let mut resid = sp.clone();
        for (j, coef) in a.iter().enumerate() {
            if !coef.is_integer() {
                return Err(MwError::NotExpressible(format!(
                    "non-integral coordinate {coef} (input not saturated?)"
                )));
            }
            use num_traits::ToPrimitive;
            let c = coef.to_integer().to_i64().ok_or_else(|| {
                MwError::NotExpressible(String::from("coordinate out of range"))
            })?;
            let term = ctx.curve.scalar_mul(-c, &gens[j]);
            resid = ctx.curve.add(&resid, &term);
        }
        if !ctx.is_torsion(&resid, torsion_exponent) {
            return Err(MwError::NotExpressible(String::from(
                "residual is not torsion",
            )));
        }
        rows.push(a);
    }
    Ok(rows)
}

fn solve_linear(m: &[Vec<BigRational>], rhs: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let pv = a[col][col].clone();
        for c in col..=n {
            a[col][c] = &a[col][c] / &pv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..=n {
                    let t = &f * &a[col][c];
                    a[r][c] -= t;
                }
            }
        }
    }
    Some((0..n).map(|i| a[i][n].clone()).collect())
}

/// Rank of the subspace fixed by all the given action matrices.
pub fn fixed_rank(matrices: &[Vec<Vec<BigRational>>]) -> usize {
    if matrices.is_empty() {
        return 0;
    }
    let n = matrices[0].len();
    // stack (M - I) for all sigma and compute the kernel dimension
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for m in matrices {
        for i in 0..n {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                // action matrix rows express sigma(P_i) = sum_j a_ij P_j:
                // fixed vectors v = sum c_i P_i need sum_i c_i a_ij = c_j,
                // i.e. (M^T - I) c = 0
                let mut v = m[i][j].clone();
                if i == j {
                    v -= BigRational::one();
                }
                row.push(v);
            }
            rows.push(row);
        }
    }
    // kernel of the stacked matrix acting on c: columns indexed by i?
    // rows above are (M - I) rows; we need rank of the transpose system.
    // rank(kernel) = n - rank(stack of (M^T - I))
    let mut mat: Vec<Vec<BigRational>> = Vec::new();
    for m in matrices {
        for j in 0..n {
            let mut row = Vec::with_capacity(n);
            for i in 0..n {
                let mut v = m[i][j].clone();
                if i == j {
                    v -= BigRational::one();
                }
                row.push(v);
            }
            mat.push(row);
        }
    }
    let _ = rows;
    n - matrix_rank(&mut mat)
}

fn matrix_rank(m: &mut Vec<Vec<BigRational>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        let piv = (row..rows).find(|&r| !m[r][col].is_zero());
        let piv = match piv {
            Some(p) => p,
            None => continue,
        };
        m.swap(row, piv);
        let pv = m[row][col].clone();
        for c in col..cols {
            m[row][c] = &m[row][c] / &pv;
        }
        for r in 0..rows {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..cols {
                    let t = &f * &m[row][c];
                    m[r][c] -= t;
                }
            }
        }
        rank += 1;
        row += 1;
        if row == rows {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::kodaira::{analyze_surface, q_place_factoring};
    use crate::weierstrass::{integral_model, Curve, FunctionField, Place};

    fn e2_context() -> (HeightContext<Rationals>, SurfaceCurve<Rationals>) {
        let q = Rationals;
        let ff = FunctionField::new(q);
        let r = RatFunc::of_poly(&q, Poly::from_i64(&q, &[1, 0, -2, 0, 1]));
        let s = RatFunc::of_poly(&q, Poly::from_i64(&q, &[0, 0, 4]));
        let curve = Curve::new(ff, r, s);
        let model = integral_model(&curve);
        let analysis = analyze_surface(&model, &q_place_factoring(alloc::vec![])).unwrap();
        let mut finite = Vec::new();
        let mut inf = None;
        for (f, _) in &analysis.fibers {
            match &f.place {
                Place::Finite(pi) => finite.push((pi.clone(), f.kind)),
                Place::Infinity => inf = Some(f.kind),
            }
        }
        let ctx = HeightContext::new(&model, finite, inf, analysis.invariants.chi);
        (ctx, model.curve)
    }

    fn q2_section(x: &[i64], y: &[i64]) -> Section<Rationals> {
        let q = Rationals;
        Point::Affine(
            RatFunc::of_poly(&q, Poly::from_i64(&q, x)),
            RatFunc::of_poly(&q, Poly::from_i64(&q, y)),
        )
    }

    #[test]
    fn heights_on_e2_match_published_values() {
        let (ctx, curve) = e2_context();
        // Q = P2 = (2(t-1)^2, 2(t-1)^2(t^2+2t-1)): height 1
        let p2 = q2_section(&[2, -4, 2], &[-2, 8, -4, -8, 4, 2]);
        // recompute y = 2(t-1)^2 (t^2+2t-1) = 2(t^2-2t+1)(t^2+2t-1)
        let q = Rationals;
        let y = Poly::mul(
            &q,
            &Poly::from_i64(&q, &[2, -4, 2]),
            &Poly::from_i64(&q, &[-1, 2, 1]),
        );
        let p2 = Point::Affine(
            RatFunc::of_poly(&q, Poly::from_i64(&q, &[2, -4, 2])),
            RatFunc::of_poly(&q, y),
        );
        assert!(curve.contains(&p2));
        let h = ctx.self_pairing(&p2).unwrap();
        assert_eq!(h, rat_int(1));
        // P = (-4t^2, 4 sqrt(-2) t^2 (t^2+1)) has height 2; its coordinates
        // need sqrt(-2), checked over the zeta8 tower in the integration
        // suite. Torsion pairs to zero:
        let t1 = Point::Affine(curve.s.clone(), curve.field.zero());
        assert_eq!(ctx.pairing(&t1, &p2, 4).unwrap(), rat_int(0));
        let _ = p2;
    }

    #[test]
    fn component_indices_on_e2() {
        let (ctx, curve) = e2_context();
        let q = Rationals;
        let y = Poly::mul(
            &q,
            &Poly::from_i64(&q, &[2, -4, 2]),
            &Poly::from_i64(&q, &[-1, 2, 1]),
        );
        let p2: Section<Rationals> = Point::Affine(
            RatFunc::of_poly(&q, Poly::from_i64(&q, &[2, -4, 2])),
            RatFunc::of_poly(&q, y),
        );
        // at t=1 (I4) the section passes through the node on component 2
        let pi = Poly::from_i64(&q, &[-1, 1]);
        let (x, yy) = p2.xy().unwrap();
        let kidx = ctx
            .multiplicative_component_index(x, yy, &pi, &ctx.r, &ctx.s, 4)
            .unwrap();
        assert_eq!(kidx, 2);
        // at t=0 (I4) it misses the node
        let pi0 = Poly::x(&q);
        let kidx0 = ctx
            .multiplicative_component_index(x, yy, &pi0, &ctx.r, &ctx.s, 4)
            .unwrap();
        assert_eq!(kidx0, 0);
        let _ = curve;
    }

    #[test]
    fn gram_and_index_bounds() {
        // E3 scaled Gram diag(4, 8, 12): det 384, indices {1, 2, 4, 8}
        let g: Vec<Vec<BigRational>> = alloc::vec![
            alloc::vec![rat_int(4), rat_int(0), rat_int(0)],
            alloc::vec![rat_int(0), rat_int(8), rat_int(0)],
            alloc::vec![rat_int(0), rat_int(0), rat_int(12)],
        ];
        let (det, idx) = gram_index_bound(&g).unwrap();
        assert_eq!(det, BigInt::from(384));
        assert_eq!(idx, alloc::vec![1, 2, 4, 8]);
        // E2 scaled diag(2, 4): det 8, indices {1, 2}
        let g2: Vec<Vec<BigRational>> = alloc::vec![
            alloc::vec![rat_int(2), rat_int(0)],
            alloc::vec![rat_int(0), rat_int(4)],
        ];
        let (det2, idx2) = gram_index_bound(&g2).unwrap();
        assert_eq!(det2, BigInt::from(8));
        assert_eq!(idx2, alloc::vec![1, 2]);
        // dependent generators rejected
        let g3: Vec<Vec<BigRational>> = alloc::vec![
            alloc::vec![rat_int(1), rat_int(1)],
            alloc::vec![rat_int(1), rat_int(1)],
        ];
        assert!(matches!(gram_index_bound(&g3), Err(MwError::DependentGenerators)));
    }

    #[test]
    fn shioda_tate_examples() {
        // E1: rho = 10, trivial 9 -> rank 1
        assert_eq!(
            shioda_tate_rank(PicardInput::Exact(10), 9).unwrap(),
            RankResult::Exact(1)
        );
        // E1': rho <= 18, trivial 18 -> rank 0
        assert_eq!(
            shioda_tate_rank(PicardInput::UpperBound(18), 18).unwrap(),
            RankResult::UpperBound(0)
        );
        assert!(shioda_tate_rank(PicardInput::Exact(5), 9).is_err());
    }

    #[test]
    fn torsion_of_e2_over_qt() {
        let (_, curve) = e2_context();
        // over Q(t): T2 needs sqrt(-1); only (Z/2)^2 remains
        let tor = torsion_subgroup(&curve, 4, &|_p| true).unwrap();
        // geometric search over Q coefficients cannot build T2 (sqrt(-1)
        // does not exist in Q), so the rational structure appears
        assert_eq!(tor.structure, alloc::vec![2, 2]);
    }

    #[test]
    fn twist_certification() {
        let q = Rationals;
        let ff = FunctionField::new(q);
        // E2' is the pullback of E1' under t -> t^2
        let r1p = Poly::mul(
            &q,
            &Poly::from_i64(&q, &[1, -5]),
            &Poly::from_i64(&q, &[1, -2, 1]),
        );
        let s1p = Poly::mul(&q, &Poly::from_i64(&q, &[1, -5]), &Poly::from_i64(&q, &[0, 4]));
        let e1p = Curve::new(
            ff.clone(),
            RatFunc::of_poly(&q, r1p),
            RatFunc::of_poly(&q, s1p),
        );
        let t2 = RatFunc::of_poly(&q, Poly::from_i64(&q, &[0, 0, 1]));
        let r2p = RatFunc::compose(&q, &e1p.r, &t2);
        let s2p = RatFunc::compose(&q, &e1p.s, &t2);
        let e2p = Curve::new(ff.clone(), r2p, s2p);
        let deck = certify_quadratic_pullback(&e1p, &e2p, &t2).unwrap();
        // deck class of t -> t^2 is t (disc of x^2 - s ~ 4s)
        assert!(same_twist_class(&q, &deck, &RatFunc::of_poly(&q, Poly::x(&q))));
        // and E1'' = E1' twisted by t
        let e1bis = e1p
            .quadratic_twist(&RatFunc::of_poly(&q, Poly::x(&q)))
            .unwrap();
        assert!(crate::weierstrass::certify_twist(
            &e1p,
            &e1bis,
            &RatFunc::of_poly(&q, Poly::x(&q))
        ));
        assert_eq!(twist_rank_additivity(0, 1, true).unwrap(), 1);
        assert!(twist_rank_additivity(0, 1, false).is_err());
    }
}
