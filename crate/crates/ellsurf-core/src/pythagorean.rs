//! The Diophantine front end: Pythagorean triples, their equivalence
//! classes, the parameter t = b/(c-a), the subfamily selected by
//! u = 2pq/(p^2+5q^2), and the two explicit points on y^2 = x(x-a^2)(x-b^2)
//! with per-triple certification (on-curve, non-torsion, degeneracy).

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::field::{rat_int, rat_of_bigint, Field, Rationals};
use crate::weierstrass::{Curve, Point};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Triple {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum TripleError {
    NotPythagorean,
    Degenerate,
    OnCurveCheckFailed(String),
}

impl Triple {
    pub fn new(a: i64, b: i64, c: i64) -> Result<Triple, TripleError> {
        if a.checked_mul(a)
            .zip(b.checked_mul(b))
            .zip(c.checked_mul(c))
            .map(|((aa, bb), cc)| aa + bb == cc)
            != Some(true)
        {
            return Err(TripleError::NotPythagorean);
        }
        Ok(Triple { a, b, c })
    }

    /// Membership in the set of triples with a smooth curve: ab != 0.
    pub fn in_t(&self) -> bool {
        self.a != 0 && self.b != 0
    }

    /// Canonical representative of the equivalence class: primitive, all
    /// entries positive, a odd and b even.
    pub fn canonicalize(&self) -> Result<Triple, TripleError> {
        if !self.in_t() {
            return Err(TripleError::Degenerate);
        }
        let g = gcd3(self.a.abs(), self.b.abs(), self.c.abs());
        let (mut a, mut b, c) = (self.a.abs() / g, self.b.abs() / g, self.c.abs() / g);
        if a % 2 == 0 {
            core::mem::swap(&mut a, &mut b);
        }
        debug_assert!(a % 2 == 1 && b % 2 == 0);
        Triple::new(a, b, c)
    }

    pub fn equivalent(&self, other: &Triple) -> Result<bool, TripleError> {
        Ok(self.canonicalize()? == other.canonicalize()?)
    }

    /// Parameter t = b/(c - a).
    pub fn parameter(&self) -> Result<BigRational, TripleError> {
        if self.a == self.c {
            return Err(TripleError::Degenerate);
        }
        Ok(BigRational::new(
            BigInt::from(self.b),
            BigInt::from(self.c - self.a),
        ))
    }

    /// The curve y^2 = x (x - a^2)(x - b^2).
    pub fn curve(&self) -> Curve<Rationals> {
        Curve::new(
            Rationals,
            rat_int(self.a) * rat_int(self.a),
            rat_int(self.b) * rat_int(self.b),
        )
    }
}

fn gcd3(a: i64, b: i64, c: i64) -> i64 {
    num_integer::Integer::gcd(&num_integer::Integer::gcd(&a, &b), &c)
}

/// t -> (p^2 - q^2, 2pq, p^2 + q^2) for t = p/q in lowest terms.
pub fn triple_from_parameter(t: &BigRational) -> Result<Triple, TripleError> {
    use num_traits::ToPrimitive;
    if t.is_zero() || t.abs() == BigRational::from_integer(BigInt::from(1)) {
        return Err(TripleError::Degenerate);
    }
    let p = t.numer().to_i64().ok_or(TripleError::Degenerate)?;
    let q = t.denom().to_i64().ok_or(TripleError::Degenerate)?;
    Triple::new(p * p - q * q, 2 * p * q, p * p + q * q)
}

/// The 8-element dihedral orbit of the parameter:
/// {t, -t, 1/t, -1/t, (1+t)/(1-t), (1-t)/(1+t), -(1-t)/(1+t), -(1+t)/(1-t)}.
pub fn parameter_orbit(t: &BigRational) -> Vec<BigRational> {
    let one = BigRational::from_integer(BigInt::from(1));
    let g = (&one + t) / (&one - t);
    let h = (&one - t) / (&one + t);
    alloc::vec![
        t.clone(),
        -t,
        t.recip(),
        -t.recip(),
        g.clone(),
        h.clone(),
        -h,
        -g,
    ]
}

/// Legendre parameter lambda = (2t/(t^2-1))^2.
pub fn legendre_lambda(t: &BigRational) -> BigRational {
    let two_t = rat_int(2) * t;
    let t2m1 = t * t - rat_int(1);
    let r = two_t / t2m1;
    &r * &r
}

/// Membership data for the subfamily: u = 2pq/(p^2 + 5q^2) with the
/// resulting triple and the normalizing data of the theorem.
#[derive(Clone, Debug)]
pub struct SMembership {
    pub p: i64,
    pub q: i64,
    pub u: BigRational,
    /// u = pp/qq in lowest terms
    pub pp: i64,
    pub qq: i64,
    pub k: i64,
    pub triple: Triple,
}

pub fn s_membership(p: i64, q: i64) -> Result<SMembership, TripleError> {
    if p == 0 || q == 0 {
        return Err(TripleError::Degenerate);
    }
    let num = 2 * p * q;
    let den = p * p + 5 * q * q;
    let k = num_integer::Integer::gcd(&num, &den);
    let u = BigRational::new(BigInt::from(num), BigInt::from(den));
    use num_traits::ToPrimitive;
    let pp = u.numer().to_i64().ok_or(TripleError::Degenerate)?;
    let qq = u.denom().to_i64().ok_or(TripleError::Degenerate)?;
    let triple = Triple::new(pp * pp - qq * qq, 2 * pp * qq, pp * pp + qq * qq)?;
    if !triple.in_t() {
        return Err(TripleError::Degenerate);
    }
    Ok(SMembership {
        p,
        q,
        u,
        pp,
        qq,
        k,
        triple,
    })
}

/// The two explicit points of the theorem on y^2 = x(x-a^2)(x-b^2).
#[derive(Clone, Debug)]
pub struct ExplicitPoints {
    pub q1: Point<Rationals>,
    pub q2: Point<Rationals>,
    /// Q2 = Q1 or Q2 = -Q1 at this specialization
    pub degenerate: bool,
    pub q1_non_torsion: bool,
    pub q2_non_torsion: bool,
}

pub fn explicit_points(s: &SMembership) -> Result<ExplicitPoints, TripleError> {
    let (a, b, c) = (s.triple.a, s.triple.b, s.triple.c);
    let curve = s.triple.curve();
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let abc = rat_int(a + b - c);
    let q1 = Point::Affine(&half * &abc * &abc, &half * rat_int(a + b) * &abc * &abc);
    // Q2 = (a(a-c)/2, ab (p^4 - 25 q^4) / (2 k^2))
    let p4 = BigInt::from(s.p).pow(4) - BigInt::from(25) * BigInt::from(s.q).pow(4);
    let k2 = BigInt::from(s.k) * BigInt::from(s.k);
    let q2 = Point::Affine(
        &half * rat_int(a) * rat_int(a - c),
        &half * rat_int(a) * rat_int(b) * rat_of_bigint(p4) / rat_of_bigint(k2),
    );
    for (name, pt) in [("Q1", &q1), ("Q2", &q2)] {
        if !curve.contains(pt) {
            return Err(TripleError::OnCurveCheckFailed(String::from(name)));
        }
    }
    // -2 Q1 = (c^2, abc) (the classical point)
    let m2q1 = curve.scalar_mul(-2, &q1);
    let classical = Point::Affine(rat_int(c) * rat_int(c), rat_int(a) * rat_int(b) * rat_int(c));
    if m2q1 != classical {
        return Err(TripleError::OnCurveCheckFailed(String::from(
            "-2Q1 != (c^2, abc)",
        )));
    }
    let degenerate = q2 == q1 || q2 == curve.neg(&q1);
    Ok(ExplicitPoints {
        q1_non_torsion: certify_non_torsion(&curve, &q1),
        q2_non_torsion: certify_non_torsion(&curve, &q2),
        q1,
        q2,
        degenerate,
    })
}

/// Non-torsion certificate for a rational point: reduce at good primes and
/// compute the point order there; an order beyond 12 settles it (rational
/// torsion orders stop at 12), otherwise the surviving small orders are
/// checked exactly over Q.
pub fn certify_non_torsion(curve: &Curve<Rationals>, p: &Point<Rationals>) -> bool {
    if p.is_infinity() {
        return false;
    }
    let mut candidates: Vec<u64> = (1..=12).filter(|n| *n != 11).collect();
    let mut used = 0;
    let mut prime = 3u64;
    while used < 2 && prime < 2000 {
        prime = crate::numfield::next_prime(prime + 1);
        if let Some((ok, order)) = reduced_order(curve, p, prime) {
            if !ok {
                continue;
            }
            used += 1;
            candidates.retain(|n| n % order == 0 || order % n == 0);
            candidates.retain(|n| n % order == 0);
            if candidates.is_empty() {
                return true;
            }
        }
    }
    // exact check of the surviving candidate orders
    for n in candidates {
        if curve.scalar_mul(n as i64, p).is_infinity() {
            return false;
        }
    }
    true
}

fn reduced_order(
    curve: &Curve<Rationals>,
    p: &Point<Rationals>,
    prime: u64,
) -> Option<(bool, u64)> {
    use crate::finite::ExtField;
    let fq = ExtField::new(prime, 1);
    let q = Rationals;
    let red = |x: &BigRational| -> Option<crate::finite::FFElem> {
        use num_traits::ToPrimitive;
        let den = (x.denom() % BigInt::from(prime)).to_i64()?;
        if den == 0 {
            return None;
        }
        let num = ((x.numer() % BigInt::from(prime)) + BigInt::from(prime)).to_i64()?;
        let d = fq.from_base(den.unsigned_abs() % prime);
        let d = if x.denom().is_negative() { fq.neg(&d) } else { d };
        Some(fq.div(&fq.from_base(num as u64 % prime), &d))
    };
    let r = red(&curve.r)?;
    let s = red(&curve.s)?;
    let redc = Curve::new(fq.clone(), r, s);
    if !redc.is_smooth() {
        return Some((false, 0));
    }
    let (x, y) = p.xy()?;
    let rp = Point::Affine(red(x)?, red(y)?);
    if !redc.contains(&rp) {
        return Some((false, 0));
    }
    // order by successive addition (p + 1 + 2 sqrt p is tiny here)
    let mut acc = rp.clone();
    let mut n = 1u64;
    while !acc.is_infinity() {
        acc = redc.add(&acc, &rp);
        n += 1;
        if n > 2 * prime + 3 {
            return None;
        }
    }
    let _ = q;
    Some((true, n))
}

/// One row of the search report.
#[derive(Clone, Debug)]
pub struct SearchRow {
    pub p: i64,
    pub q: i64,
    pub membership: SMembership,
    pub canonical: Triple,
    pub t_param: BigRational,
    pub points: ExplicitPoints,
    pub rank_lower_bound: u32,
}

/// Enumerate the (p, q) box, group by equivalence class, and certify the
/// points on each class representative.
pub fn search_report(
    p_range: core::ops::RangeInclusive<i64>,
    q_range: core::ops::RangeInclusive<i64>,
) -> Vec<SearchRow> {
    let mut rows: Vec<SearchRow> = Vec::new();
    let mut seen: Vec<Triple> = Vec::new();
    for p in p_range {
        for q in q_range.clone() {
            let s = match s_membership(p, q) {
                Ok(s) => s,
                Err(_) => continue,
            };
            let canonical = match s.triple.canonicalize() {
                Ok(c) => c,
                Err(_) => continue,
            };
            if seen.contains(&canonical) {
                continue;
            }
            let points = match explicit_points(&s) {
                Ok(pts) => pts,
                Err(_) => continue,
            };
            let t_param = match s.triple.parameter() {
                Ok(t) => t,
                Err(_) => continue,
            };
            let rank_lower_bound = if points.q1_non_torsion
                && points.q2_non_torsion
                && !points.degenerate
            {
                2
            } else {
                1
            };
            seen.push(canonical);
            rows.push(SearchRow {
                p,
                q,
                membership: s,
                canonical,
                t_param,
                points,
                rank_lower_bound,
            });
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equivalence_and_canonical_form() {
        let t1 = Triple::new(3, 4, 5).unwrap();
        let t2 = Triple::new(-6, 8, -10).unwrap();
        assert!(t1.equivalent(&t2).unwrap());
        let t3 = Triple::new(4, 3, 5).unwrap();
        assert!(t1.equivalent(&t3).unwrap());
        assert_eq!(t3.canonicalize().unwrap(), Triple::new(3, 4, 5).unwrap());
        // idempotent
        let c = t2.canonicalize().unwrap();
        assert_eq!(c.canonicalize().unwrap(), c);
    }

    #[test]
    fn parameter_roundtrip_and_orbit() {
        let t = Triple::new(3, 4, 5).unwrap();
        assert_eq!(t.parameter().unwrap(), rat_int(2));
        let back = triple_from_parameter(&rat_int(2)).unwrap();
        assert!(back.equivalent(&t).unwrap());
        // (-8, 6, 10) -> t = 6/18 = 1/3
        let t2 = Triple::new(-8, 6, 10).unwrap();
        assert_eq!(
            t2.parameter().unwrap(),
            BigRational::new(BigInt::from(1), BigInt::from(3))
        );
        // orbit of 2: {2,-2,1/2,-1/2,-3,3,-1/3,1/3}
        let orb = parameter_orbit(&rat_int(2));
        let expect: Vec<BigRational> = alloc::vec![
            rat_int(2),
            rat_int(-2),
            BigRational::new(BigInt::from(1), BigInt::from(2)),
            BigRational::new(BigInt::from(-1), BigInt::from(2)),
            rat_int(-3),
            rat_int(3),
            BigRational::new(BigInt::from(-1), BigInt::from(3)),
            BigRational::new(BigInt::from(1), BigInt::from(3)),
        ];
        for e in &expect {
            assert!(orb.contains(e), "missing {e}");
        }
        // lambda(2) = (4/3)^2 = 16/9
        assert_eq!(
            legendre_lambda(&rat_int(2)),
            BigRational::new(BigInt::from(16), BigInt::from(9))
        );
        // identities (t^2-1)/(t^2+1) = a/c and 2t/(t^2+1) = b/c
        let tt = t.parameter().unwrap();
        let t2v = &tt * &tt;
        assert_eq!(
            (&t2v - rat_int(1)) / (&t2v + rat_int(1)),
            rat_int(3) / rat_int(5)
        );
        assert_eq!(
            rat_int(2) * &tt / (&t2v + rat_int(1)),
            rat_int(4) / rat_int(5)
        );
    }

    #[test]
    fn orbit_curves_are_isomorphic() {
        // j-invariant is constant along the 8-element orbit
        let j_of = |t: &BigRational| -> BigRational {
            let trip = triple_from_parameter(t).unwrap();
            let (_, j, _, _) = trip.curve().invariants();
            j.unwrap()
        };
        let base = j_of(&rat_int(2));
        for t in parameter_orbit(&rat_int(2)) {
            assert_eq!(j_of(&t), base);
        }
    }

    #[test]
    fn s_membership_examples() {
        // (1,1): u = 1/3, k = 2, triple (-8, 6, 10)
        let s = s_membership(1, 1).unwrap();
        assert_eq!(s.u, BigRational::new(BigInt::from(1), BigInt::from(3)));
        assert_eq!(s.k, 2);
        assert_eq!(s.triple, Triple::new(-8, 6, 10).unwrap());
        // (1,2): u = 4/21, k = 1, triple (-425, 168, 457)
        let s = s_membership(1, 2).unwrap();
        assert_eq!(s.u, BigRational::new(BigInt::from(4), BigInt::from(21)));
        assert_eq!(s.k, 1);
        assert_eq!(s.triple, Triple::new(-425, 168, 457).unwrap());
        assert_eq!(425i64 * 425 + 168 * 168, 457 * 457);
        // p = 0 rejected
        assert!(s_membership(0, 1).is_err());
    }

    #[test]
    fn explicit_points_and_degeneracy() {
        // (1,1): Q1 = (72, -144), Q2 = (72, 144) on y^2 = x(x-64)(x-36),
        // and Q2 = -Q1 (the degenerate witness)
        let s = s_membership(1, 1).unwrap();
        let pts = explicit_points(&s).unwrap();
        assert_eq!(pts.q1, Point::Affine(rat_int(72), rat_int(-144)));
        assert_eq!(pts.q2, Point::Affine(rat_int(72), rat_int(144)));
        assert!(pts.degenerate);
        assert!(pts.q1_non_torsion);
        // (1,2): non-degenerate
        let s = s_membership(1, 2).unwrap();
        let pts = explicit_points(&s).unwrap();
        assert!(!pts.degenerate);
        assert!(pts.q1_non_torsion && pts.q2_non_torsion);
    }

    #[test]
    fn search_box_finds_many_classes() {
        let rows = search_report(1..=5, 1..=5);
        assert!(rows.len() >= 10, "got {} classes", rows.len());
        for row in &rows {
            let t = &row.membership.triple;
            assert_eq!(
                (t.a as i128) * (t.a as i128) + (t.b as i128) * (t.b as i128),
                (t.c as i128) * (t.c as i128)
            );
            assert!(t.in_t());
            if row.p == 1 && row.q == 1 {
                assert!(row.points.degenerate);
                assert_eq!(row.rank_lower_bound, 1);
            }
        }
        // empty box
        #[allow(clippy::reversed_empty_ranges)]
        let empty = search_report(2..=1, 1..=1);
        assert!(empty.is_empty());
    }
}
