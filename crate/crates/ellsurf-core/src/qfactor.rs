//! Exact factorization over Q for polynomials whose irreducible factors
//! have degree at most 4 (rational roots, quadratic discriminants and the
//! quartic resolvent cubic), plus verification of caller-supplied factors
//! of higher degree. Refinement of Q-irreducible factors over a number
//! field covers the residue towers the height pairing needs.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::field::{rational_sqrt, Field, Rationals};
use crate::numfield::{NfElem, NumberField};
use crate::poly::Poly;

pub type QPoly = Poly<Rationals>;

#[derive(Clone, Debug, PartialEq)]
pub enum QFactorError {
    /// An irreducible factor of degree > 4 remains and no candidate divides it.
    SupplyPlaces(QPoly),
    /// Integer too large for trial-division root candidates.
    ConstantTooLarge,
    /// A supplied candidate was rejected.
    BadCandidate(&'static str),
}

/// Factor f over Q as lc * prod g_i^{e_i} with monic irreducible g_i.
/// `candidates` may supply monic factors of any degree; they are verified
/// by exact division and an irreducibility certificate.
pub fn factor_q(
    f: &QPoly,
    candidates: &[QPoly],
) -> Result<(BigRational, Vec<(QPoly, usize)>), QFactorError> {
    let q = Rationals;
    assert!(!f.is_zero());
    let lc = f.leading(&q);
    let mut out: Vec<(QPoly, usize)> = Vec::new();
    for (g, mult) in Poly::squarefree_decomposition(&q, f) {
        let mut rest = g;
        // peel off supplied candidates first
        for cand in candidates {
            if cand.degree().map(|d| d >= 1).unwrap_or(false)
                && Poly::divides(&q, cand, &rest)
            {
                verify_irreducible(cand)?;
                rest = Poly::div_exact(&q, &rest, cand);
                push_factor(&mut out, cand.clone(), mult);
            }
        }
        for h in split_low_degree(&rest)? {
            push_factor(&mut out, h, mult);
        }
    }
    out.sort_by(|a, b| {
        a.0.deg_i()
            .cmp(&b.0.deg_i())
            .then_with(|| cmp_qpoly(&a.0, &b.0))
    });
    Ok((lc, out))
}

fn cmp_qpoly(a: &QPoly, b: &QPoly) -> core::cmp::Ordering {
    for i in (0..a.coeffs.len().max(b.coeffs.len())).rev() {
        let q = Rationals;
        let ca = a.coeff(&q, i);
        let cb = b.coeff(&q, i);
        match ca.cmp(&cb) {
            core::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    core::cmp::Ordering::Equal
}

fn push_factor(out: &mut Vec<(QPoly, usize)>, g: QPoly, mult: usize) {
    for (h, m) in out.iter_mut() {
        if *h == g {
            *m += mult;
            return;
        }
    }
    out.push((g, mult));
}

/// Split a squarefree monic polynomial whose factors all have degree <= 4.
fn split_low_degree(g: &QPoly) -> Result<Vec<QPoly>, QFactorError> {
    let q = Rationals;
    let mut out = Vec::new();
    let mut rest = g.clone().into_monic(&q);
    if rest.degree() == Some(0) {
        return Ok(out);
    }
    // strip t-powers fast
    let v = rest.valuation_at_zero(&q);
    if v > 0 {
        out.push(Poly::x(&q));
        rest = Poly::shift_down(&q, &rest, v);
    }
    // rational roots
    for r in rational_roots(&rest)? {
        let lin = Poly::from_coeffs(&q, alloc::vec![-r.clone(), BigRational::one()]);
        while Poly::divides(&q, &lin, &rest) {
            rest = Poly::div_exact(&q, &rest, &lin);
            out.push(lin.clone());
        }
    }
    loop {
        match rest.degree() {
            None | Some(0) => break,
            Some(1) => {
                out.push(rest.clone());
                break;
            }
            Some(2) => {
                match split_quadratic(&rest) {
                    Some((l1, l2)) => {
                        out.push(l1);
                        out.push(l2);
                    }
                    None => out.push(rest.clone()),
                }
                break;
            }
            Some(3) => {
                // no rational root survived, so irreducible
                out.push(rest.clone());
                break;
            }
            Some(4) => {
                match split_quartic(&rest) {
                    Some((a, b)) => {
                        // each factor is quadratic; recurse on both
                        for h in [a, b] {
                            match split_quadratic(&h) {
                                Some((l1, l2)) => {
                                    out.push(l1);
                                    out.push(l2);
                                }
                                None => out.push(h),
                            }
                        }
                    }
                    None => out.push(rest.clone()),
                }
                break;
            }
            Some(_) => return Err(QFactorError::SupplyPlaces(rest)),
        }
    }
    Ok(out)
}

fn rational_roots(g: &QPoly) -> Result<Vec<BigRational>, QFactorError> {
    let q = Rationals;
    // clear denominators -> primitive integer polynomial
    let mut den = BigInt::one();
    for c in &g.coeffs {
        den = num_integer::Integer::lcm(&den, c.denom());
    }
    let ints: Vec<BigInt> = g.coeffs.iter().map(|c| (c * crate::field::rat_of_bigint(den.clone())).to_integer()).collect();
    let a0 = ints.first().cloned().unwrap_or_default();
    let an = ints.last().cloned().unwrap();
    if a0.is_zero() {
        // t | g was stripped by the caller
    }
    let num_divs = divisors_bounded(&a0.abs().max(BigInt::one()))?;
    let den_divs = divisors_bounded(&an.abs())?;
    let mut roots = Vec::new();
    for n in &num_divs {
        for d in &den_divs {
            for sign in [1i64, -1] {
                let cand = BigRational::new(n * BigInt::from(sign), d.clone());
                if g.eval(&q, &cand).is_zero() && !roots.contains(&cand) {
                    roots.push(cand.clone());
                }
            }
        }
    }
    Ok(roots)
}

fn divisors_bounded(n: &BigInt) -> Result<Vec<BigInt>, QFactorError> {
    if n.is_zero() {
        return Ok(alloc::vec![BigInt::one()]);
    }
    let mut divs = alloc::vec![BigInt::one()];
    let mut m = n.abs();
    let mut p = BigInt::from(2);
    let mut steps = 0u64;
    while &p * &p <= m {
        steps += 1;
        if steps > 2_000_000 {
            return Err(QFactorError::ConstantTooLarge);
        }
        if (&m % &p).is_zero() {
            let mut powers = alloc::vec![BigInt::one()];
            while (&m % &p).is_zero() {
                m /= &p;
                let last = powers.last().unwrap() * &p;
                powers.push(last);
            }
            let mut next = Vec::with_capacity(divs.len() * powers.len());
            for d in &divs {
                for pw in &powers {
                    next.push(d * pw);
                }
            }
            divs = next;
        }
        p += 1u32;
    }
    if !m.is_one() {
        let mut next = Vec::with_capacity(divs.len() * 2);
        for d in &divs {
            next.push(d.clone());
            next.push(d * &m);
        }
        divs = next;
    }
    Ok(divs)
}

/// Monic quadratic over Q: split into linears when the discriminant is a
/// rational square.
fn split_quadratic(g: &QPoly) -> Option<(QPoly, QPoly)> {
    let q = Rationals;
    debug_assert_eq!(g.degree(), Some(2));
    let g = g.clone().into_monic(&q);
    let b = g.coeffs[1].clone();
    let c = g.coeffs[0].clone();
    let disc = &b * &b - crate::field::rat_int(4) * &c;
    let s = rational_sqrt(&disc)?;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let r1 = (-&b + &s) * &half;
    let r2 = (-&b - &s) * &half;
    Some((
        Poly::from_coeffs(&q, alloc::vec![-r1, BigRational::one()]),
        Poly::from_coeffs(&q, alloc::vec![-r2, BigRational::one()]),
    ))
}

/// Monic quartic with no rational roots: try to write it as a product of
/// two rational quadratics via the resolvent cubic.
fn split_quartic(g: &QPoly) -> Option<(QPoly, QPoly)> {
    let q = Rationals;
    debug_assert_eq!(g.degree(), Some(4));
    let g = g.clone().into_monic(&q);
    let p = g.coeffs[3].clone();
    let qq = g.coeffs[2].clone();
    let r = g.coeffs[1].clone();
    let s = g.coeffs[0].clone();
    // resolvent cubic in z = b + d for g = (t^2+at+b)(t^2+ct+d)
    let four = crate::field::rat_int(4);
    let res = Poly::from_coeffs(
        &q,
        alloc::vec![
            -(&p * &p * &s - &four * &qq * &s + &r * &r),
            &p * &r - &four * &s,
            -qq.clone(),
            BigRational::one(),
        ],
    );
    let roots = rational_roots(&res).ok()?;
    for z in roots {
        if let Some(fs) = reconstruct_quartic_split_q(&p, &qq, &r, &s, &z) {
            return Some(fs);
        }
    }
    None
}

fn reconstruct_quartic_split_q(
    p: &BigRational,
    qq: &BigRational,
    r: &BigRational,
    s: &BigRational,
    z: &BigRational,
) -> Option<(QPoly, QPoly)> {
    let q = Rationals;
    // a + c = p, ac = q - z, b + d = z, bd = s, ad + bc = r
    let ac = qq - z;
    let disc = p * p - crate::field::rat_int(4) * &ac;
    let sq = rational_sqrt(&disc)?;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let a = (p + &sq) * &half;
    let c = (p - &sq) * &half;
    let (b, d) = if a != c {
        // a*d + b*c = r and b + d = z  =>  b(c - a) = r - a z
        let b = (r - &a * z) / (&c - &a);
        let d = z - &b;
        (b, d)
    } else {
        // b, d roots of w^2 - z w + s
        let disc2 = z * z - crate::field::rat_int(4) * s;
        let sq2 = rational_sqrt(&disc2)?;
        ((z + &sq2) * &half, (z - &sq2) * &half)
    };
    if &(&b * &d) != s {
        return None;
    }
    if &(&a * &d + &b * &c) != r {
        return None;
    }
    let f1 = Poly::from_coeffs(&q, alloc::vec![b, a, BigRational::one()]);
    let f2 = Poly::from_coeffs(&q, alloc::vec![d, c, BigRational::one()]);
    Some((f1, f2))
}

/// Decide irreducibility for degree <= 4 with the exact machinery above.
pub fn is_irreducible_deg_le4(g: &QPoly) -> bool {
    let q = Rationals;
    match g.degree() {
        None | Some(0) => false,
        Some(1) => true,
        Some(2) => {
            let m = g.clone().into_monic(&q);
            split_quadratic(&m).is_none()
        }
        Some(3) => rational_roots(g).map(|r| r.is_empty()).unwrap_or(false),
        Some(4) => {
            let m = g.clone().into_monic(&q);
            match rational_roots(&m) {
                Ok(roots) if roots.is_empty() => split_quartic(&m).is_none(),
                _ => false,
            }
        }
        Some(_) => panic!("degree > 4 irreducibility needs a mod-p certificate"),
    }
}

/// Certify irreducibility of a supplied factor: exact low-degree machinery
/// up to quartics, mod-p certificate beyond.
pub fn verify_irreducible(g: &QPoly) -> Result<(), QFactorError> {
    match g.degree() {
        None | Some(0) => Err(QFactorError::BadCandidate("constant candidate")),
        Some(d) if d <= 4 => {
            if is_irreducible_deg_le4(g) {
                Ok(())
            } else {
                Err(QFactorError::BadCandidate("candidate reducible over Q"))
            }
        }
        Some(_) => {
            let mut p = 2u64;
            for _ in 0..200 {
                p = crate::numfield::next_prime(p + 1);
                let fp = crate::finite::PrimeField::new(p);
                if let Some(mp) = crate::finite::reduce_qpoly_mod_p(g, &fp) {
                    if mp.degree() == g.degree() && crate::finite::is_irreducible(&fp, &mp) {
                        return Ok(());
                    }
                }
            }
            Err(QFactorError::BadCandidate("no mod-p irreducibility certificate found"))
        }
    }
}

// ---- refinement over a number field ----

pub type NfPoly = Poly<NumberField>;

pub fn qpoly_to_nf(k: &NumberField, g: &QPoly) -> NfPoly {
    Poly::from_coeffs(
        k,
        g.coeffs.iter().map(|c| k.from_rational(c.clone())).collect(),
    )
}

/// Factor a Q-irreducible monic polynomial of degree <= 4 over a number
/// field K. Complete when [K:Q] has no cubic subfield (true for the
/// quartic cyclotomic tower used here); returns monic K-irreducible factors.
pub fn refine_irreducible_over_nf(k: &NumberField, g: &QPoly) -> Vec<NfPoly> {
    let deg = g.degree().expect("nonzero");
    let gk = qpoly_to_nf(k, g);
    match deg {
        1 => alloc::vec![gk],
        2 => split_quadratic_nf(k, &gk).map_or(alloc::vec![gk], |(a, b)| alloc::vec![a, b]),
        3 => {
            // a cubic acquires a root only in a field of degree divisible
            // by 3; the towers used here have degree 1, 2 or 4
            assert!(k.degree % 3 != 0, "cubic refinement over this field unsupported");
            alloc::vec![gk]
        }
        4 => refine_quartic_nf(k, g),
        _ => panic!("refine only handles degree <= 4"),
    }
}

fn split_quadratic_nf(k: &NumberField, g: &NfPoly) -> Option<(NfPoly, NfPoly)> {
    debug_assert_eq!(g.degree(), Some(2));
    let g = g.clone().into_monic(k);
    let b = g.coeffs[1].clone();
    let c = g.coeffs[0].clone();
    let disc = k.sub(&k.mul(&b, &b), &k.mul(&k.from_i64(4), &c));
    let s = k.sqrt(&disc).ok()??;
    let half = k.inv(&k.from_i64(2)).unwrap();
    let r1 = k.mul(&k.add(&k.neg(&b), &s), &half);
    let r2 = k.mul(&k.sub(&k.neg(&b), &s), &half);
    Some((
        Poly::from_coeffs(k, alloc::vec![k.neg(&r1), k.one()]),
        Poly::from_coeffs(k, alloc::vec![k.neg(&r2), k.one()]),
    ))
}

fn refine_quartic_nf(k: &NumberField, g: &QPoly) -> Vec<NfPoly> {
    let q = Rationals;
    let gm = g.clone().into_monic(&q);
    let p = gm.coeffs[3].clone();
    let qq = gm.coeffs[2].clone();
    let r = gm.coeffs[1].clone();
    let s = gm.coeffs[0].clone();
    let four = crate::field::rat_int(4);
    let res = Poly::from_coeffs(
        &q,
        alloc::vec![
            -(&p * &p * &s - &four * &qq * &s + &r * &r),
            &p * &r - &four * &s,
            -qq.clone(),
            BigRational::one(),
        ],
    );
    // all roots of the resolvent cubic that live in K: rational ones plus
    // roots of its quadratic factors that split in K
    let mut z_candidates: Vec<NfElem> = Vec::new();
    let mut rest = res.clone().into_monic(&q);
    if let Ok(roots) = rational_roots(&rest) {
        for z in roots {
            let lin = Poly::from_coeffs(&q, alloc::vec![-z.clone(), BigRational::one()]);
            while Poly::divides(&q, &lin, &rest) {
                rest = Poly::div_exact(&q, &rest, &lin);
            }
            z_candidates.push(k.from_rational(z));
        }
    }
    if rest.degree() == Some(2) {
        if let Some((l1, l2)) = split_quadratic_nf(k, &qpoly_to_nf(k, &rest)) {
            z_candidates.push(k.neg(&l1.coeffs[0]));
            z_candidates.push(k.neg(&l2.coeffs[0]));
        }
    }
    let pk = k.from_rational(p);
    let qk = k.from_rational(qq);
    let rk = k.from_rational(r);
    let sk = k.from_rational(s);
    for z in z_candidates {
        if let Some((f1, f2)) = reconstruct_quartic_split_nf(k, &pk, &qk, &rk, &sk, &z) {
            let mut out = Vec::new();
            for h in [f1, f2] {
                match split_quadratic_nf(k, &h) {
                    Some((l1, l2)) => {
                        out.push(l1);
                        out.push(l2);
                    }
                    None => out.push(h),
                }
            }
            return out;
        }
    }
    alloc::vec![qpoly_to_nf(k, g)]
}

fn reconstruct_quartic_split_nf(
    k: &NumberField,
    p: &NfElem,
    qq: &NfElem,
    r: &NfElem,
    s: &NfElem,
    z: &NfElem,
) -> Option<(NfPoly, NfPoly)> {
    let ac = k.sub(qq, z);
    let disc = k.sub(&k.mul(p, p), &k.mul(&k.from_i64(4), &ac));
    let sq = k.sqrt(&disc).ok()??;
    let half = k.inv(&k.from_i64(2)).unwrap();
    let a = k.mul(&k.add(p, &sq), &half);
    let c = k.mul(&k.sub(p, &sq), &half);
    let (b, d) = if a != c {
        let b = k.div(&k.sub(r, &k.mul(&a, z)), &k.sub(&c, &a));
        let d = k.sub(z, &b);
        (b, d)
    } else {
        let disc2 = k.sub(&k.mul(z, z), &k.mul(&k.from_i64(4), s));
        let sq2 = k.sqrt(&disc2).ok()??;
        (
            k.mul(&k.add(z, &sq2), &half),
            k.mul(&k.sub(z, &sq2), &half),
        )
    };
    if k.mul(&b, &d) != *s {
        return None;
    }
    if k.add(&k.mul(&a, &d), &k.mul(&b, &c)) != *r {
        return None;
    }
    Some((
        Poly::from_coeffs(k, alloc::vec![b, a, k.one()]),
        Poly::from_coeffs(k, alloc::vec![d, c, k.one()]),
    ))
}

/// Factor a polynomial with rational coefficients embedded in a number
/// field, over that field: factor over Q first (with candidates), then
/// refine each Q-irreducible factor.
pub fn factor_nf_from_q(
    k: &NumberField,
    f: &NfPoly,
    candidates: &[QPoly],
) -> Result<Vec<(NfPoly, usize)>, QFactorError> {
    let mut qc: Vec<BigRational> = Vec::with_capacity(f.coeffs.len());
    for c in &f.coeffs {
        match k.to_rational(c) {
            Some(r) => qc.push(r),
            None => {
                return Err(QFactorError::BadCandidate(
                    "non-rational coefficients in place factorization",
                ))
            }
        }
    }
    let q = Rationals;
    let fq = Poly::from_coeffs(&q, qc);
    let (_, qfactors) = factor_q(&fq, candidates)?;
    let mut out: Vec<(NfPoly, usize)> = Vec::new();
    for (g, m) in qfactors {
        for h in refine_irreducible_over_nf(k, &g) {
            out.push((h, m));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_irreducibility() {
        let q = Rationals;
        // t^2 - 6t + 1: roots 3 +- 2 sqrt2, irreducible over Q
        let g = Poly::from_i64(&q, &[1, -6, 1]);
        assert!(is_irreducible_deg_le4(&g));
        let (lc, fs) = factor_q(&g, &[]).unwrap();
        assert!(lc.is_one());
        assert_eq!(fs, alloc::vec![(g, 1)]);
    }

    #[test]
    fn quartic_splits_and_quartic_irreducible() {
        let q = Rationals;
        // (t^2-2t-1)(t^2+2t-1) = t^4 - 6t^2 + 1
        let g = Poly::from_i64(&q, &[1, 0, -6, 0, 1]);
        let (_, fs) = factor_q(&g, &[]).unwrap();
        assert_eq!(fs.len(), 2);
        assert!(fs.iter().all(|(f, m)| f.degree() == Some(2) && *m == 1));
        let prod = fs.iter().fold(Poly::one(&q), |acc, (f, m)| {
            Poly::mul(&q, &acc, &Poly::pow(&q, f, *m as u64))
        });
        assert_eq!(prod, g);

        // t^4-4t^3+6t^2-20t+25 is irreducible over Q
        let h = Poly::from_i64(&q, &[25, -20, 6, -4, 1]);
        assert!(is_irreducible_deg_le4(&h));
        // x^4 + 1 is irreducible over Q (though reducible mod every prime)
        let c8 = Poly::from_i64(&q, &[1, 0, 0, 0, 1]);
        assert!(is_irreducible_deg_le4(&c8));
    }

    #[test]
    fn multiplicities_and_contents() {
        let q = Rationals;
        // 3 (t-1)^2 (t^2+5)
        let f = Poly::scale(
            &q,
            &Poly::mul(
                &q,
                &Poly::mul(&q, &Poly::from_i64(&q, &[-1, 1]), &Poly::from_i64(&q, &[-1, 1])),
                &Poly::from_i64(&q, &[5, 0, 1]),
            ),
            &crate::field::rat_int(3),
        );
        let (lc, fs) = factor_q(&f, &[]).unwrap();
        assert_eq!(lc, crate::field::rat_int(3));
        assert_eq!(fs.len(), 2);
        assert!(fs.contains(&(Poly::from_i64(&q, &[-1, 1]), 2)));
        assert!(fs.contains(&(Poly::from_i64(&q, &[5, 0, 1]), 1)));
    }

    #[test]
    fn supplied_candidates_are_used_and_verified() {
        let q = Rationals;
        // product of the two quartics from the degree-8 discriminant factor
        let q1 = Poly::from_i64(&q, &[25, -20, 6, -4, 1]);
        let q2 = Poly::from_i64(&q, &[25, 20, 6, 4, 1]);
        let f = Poly::mul(&q, &q1, &q2);
        assert!(matches!(factor_q(&f, &[]), Err(QFactorError::SupplyPlaces(_))));
        let (_, fs) = factor_q(&f, &[q1.clone(), q2.clone()]).unwrap();
        assert_eq!(fs.len(), 2);
        assert!(fs.contains(&(q1, 1)));
        assert!(fs.contains(&(q2, 1)));
    }

    #[test]
    fn quartic_refines_over_zeta8() {
        let k = NumberField::zeta8();
        let q = Rationals;
        let q1 = Poly::from_i64(&q, &[25, -20, 6, -4, 1]);
        let fs = refine_irreducible_over_nf(&k, &q1);
        // q1 = (t^2 - (2+2sqrt2)t + 5)(t^2 - (2-2sqrt2)t + 5) over Q(zeta8)
        assert_eq!(fs.len(), 2);
        assert!(fs.iter().all(|f| f.degree() == Some(2)));
        let prod = fs.iter().fold(Poly::one(&k), |acc, f| Poly::mul(&k, &acc, f));
        assert_eq!(prod, qpoly_to_nf(&k, &q1));
        // and x^2+5 stays irreducible over Q(zeta8) (sqrt(-5) not in the field)
        let g = Poly::from_i64(&q, &[5, 0, 1]);
        let fs = refine_irreducible_over_nf(&k, &g);
        assert_eq!(fs.len(), 1);
    }
}
