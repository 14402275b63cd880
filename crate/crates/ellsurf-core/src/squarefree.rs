//! Square classes in K(t)*/(K(t)*)^2 and exact squareness tests.
//!
//! Polynomial square classes never need irreducible factorization: the
//! squarefree part comes from gcd arithmetic, and class multiplication of
//! squarefree representatives a, b is (a/g)(b/g) with g = gcd(a, b).

use num_bigint::BigInt;
use num_traits::One;

use crate::field::{int_squarefree_kernel, Field};
use crate::poly::Poly;
use crate::ratfunc::RatFunc;

/// A square class of K(t)*: a monic squarefree polynomial together with an
/// optional constant part. `content = None` means constants are quotiented
/// out (classes of Qbar(t)*, the "geometric" 2-descent setting).
#[derive(Clone, PartialEq, Debug)]
pub struct SquareClass<F: Field> {
    pub poly: Poly<F>,
    pub content: Option<(i8, BigInt)>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SquareClassError {
    ZeroInput,
}

impl<F: Field> SquareClass<F> {
    pub fn trivial(f: &F, geometric: bool) -> Self {
        SquareClass {
            poly: Poly::one(f),
            content: if geometric { None } else { Some((1, BigInt::one())) },
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.poly.degree() == Some(0)
            && match &self.content {
                None => true,
                Some((s, k)) => *s == 1 && k.is_one(),
            }
    }

    pub fn mul(f: &F, a: &Self, b: &Self) -> Self {
        let g = Poly::gcd(f, &a.poly, &b.poly);
        let pa = Poly::div_exact(f, &a.poly, &g);
        let pb = Poly::div_exact(f, &b.poly, &g);
        let poly = Poly::mul(f, &pa, &pb).into_monic(f);
        let content = match (&a.content, &b.content) {
            (Some((sa, ka)), Some((sb, kb))) => {
                let (s, k) = int_squarefree_kernel(&(BigInt::from(*sa) * ka * BigInt::from(*sb) * kb))
                    .expect("nonzero contents");
                Some((s, k))
            }
            _ => None,
        };
        SquareClass { poly, content }
    }
}

/// Square-class representative of a nonzero polynomial: the monic product
/// of its odd-multiplicity irreducible factors, so that a divided by it is
/// a perfect square up to a constant.
pub fn squarefree_part_poly<F: Field>(f: &F, a: &Poly<F>) -> Result<Poly<F>, SquareClassError> {
    if a.is_zero() {
        return Err(SquareClassError::ZeroInput);
    }
    Ok(Poly::odd_part(f, a))
}

/// Square class of a nonzero rational number.
pub fn square_class_int(n: &BigInt) -> Result<(i8, BigInt), SquareClassError> {
    int_squarefree_kernel(n).ok_or(SquareClassError::ZeroInput)
}

/// Square class of a nonzero rational function over Q, with the rational
/// content tracked: f = sign * kernel * (monic squarefree) * square.
pub fn square_class_q(
    f: &RatFunc<crate::field::Rationals>,
) -> Result<SquareClass<crate::field::Rationals>, SquareClassError> {
    use num_rational::BigRational;
    use num_traits::Zero;
    let q = crate::field::Rationals;
    if f.is_zero() {
        return Err(SquareClassError::ZeroInput);
    }
    // N = num * den; f differs from N by the square den^2
    let n = Poly::mul(&q, &f.num, &f.den);
    let lc: BigRational = n.leading(&q);
    let sf = Poly::odd_part(&q, &n);
    // N = lc * (monic odd part) * (monic square), so the class of f is
    // lc * sf modulo squares
    debug_assert!(!lc.is_zero());
    let (s, k) = int_squarefree_kernel(&(lc.numer() * lc.denom()))
        .ok_or(SquareClassError::ZeroInput)?;
    Ok(SquareClass {
        poly: sf,
        content: Some((s, k)),
    })
}

/// Geometric square class over any coefficient field: constants are killed.
pub fn square_class_geometric<F: Field>(
    f: &F,
    r: &RatFunc<F>,
) -> Result<SquareClass<F>, SquareClassError> {
    if r.is_zero() {
        return Err(SquareClassError::ZeroInput);
    }
    let n = Poly::mul(f, &r.num, &r.den);
    Ok(SquareClass {
        poly: Poly::odd_part(f, &n),
        content: None,
    })
}

/// Squareness of a rational function in Qbar(t) (geometric) or K(t)
/// (rational). Zero counts as a square by convention.
pub fn is_square_ratfunc<F: Field>(f: &F, r: &RatFunc<F>, geometric: bool) -> bool {
    if r.is_zero() {
        return true;
    }
    let n = Poly::mul(f, &r.num, &r.den);
    let sf = Poly::odd_part(f, &n);
    if sf.degree() != Some(0) {
        return false;
    }
    if geometric {
        return true;
    }
    // rational mode: the leading content must be a square in F
    match f.decide_square(&n.leading(f)) {
        Some(b) => b,
        None => panic!("square test undecided over this coefficient field"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat_int, Rationals};

    #[test]
    fn square_class_of_integers() {
        assert_eq!(square_class_int(&BigInt::from(12)).unwrap(), (1, BigInt::from(3)));
        assert!(square_class_int(&BigInt::from(0)).is_err());
    }

    #[test]
    fn squarefree_part_removes_even_multiplicities() {
        let q = Rationals;
        // (t^2-1)^2 (t-2) -> t-2
        let a = Poly::from_i64(&q, &[-1, 0, 1]);
        let b = Poly::from_i64(&q, &[-2, 1]);
        let f = Poly::mul(&q, &Poly::mul(&q, &a, &a), &b);
        assert_eq!(squarefree_part_poly(&q, &f).unwrap(), b);
        // radical keeps every distinct factor once
        let rad = Poly::radical(&q, &f);
        assert_eq!(rad, Poly::mul(&q, &a, &b).into_monic(&q));
        // t^4-4t^3+6t^2-20t+25 is already squarefree: gcd(f, f') = 1
        let g = Poly::from_i64(&q, &[25, -20, 6, -4, 1]);
        assert_eq!(squarefree_part_poly(&q, &g).unwrap(), g);
        let d = Poly::derivative(&q, &g);
        assert_eq!(Poly::gcd(&q, &g, &d).degree(), Some(0));
    }

    #[test]
    fn ratfunc_square_modes() {
        let q = Rationals;
        // 4(t-1)^2 is a square in both senses
        let f = RatFunc::of_poly(
            &q,
            Poly::scale(
                &q,
                &Poly::mul(
                    &q,
                    &Poly::from_i64(&q, &[-1, 1]),
                    &Poly::from_i64(&q, &[-1, 1]),
                ),
                &rat_int(4),
            ),
        );
        assert!(is_square_ratfunc(&q, &f, true));
        assert!(is_square_ratfunc(&q, &f, false));
        // 2(t-1)^2: geometric square, not a rational one
        let g = RatFunc::scale(&q, &f, &(rat_int(1) / rat_int(2)));
        assert!(is_square_ratfunc(&q, &g, true));
        assert!(!is_square_ratfunc(&q, &g, false));
        // zero is a square by convention
        assert!(is_square_ratfunc(&q, &RatFunc::zero_over(&q), true));
    }

    #[test]
    fn class_multiplication_is_exact() {
        let q = Rationals;
        let a = SquareClass {
            poly: Poly::from_i64(&q, &[0, 1]), // t
            content: None,
        };
        let b = SquareClass {
            poly: Poly::from_i64(&q, &[0, 1, 1]), // t^2 + t = t(t+1)
            content: None,
        };
        let c = SquareClass::mul(&q, &a, &b);
        // t * t(t+1) = t^2 (t+1) ~ (t+1)
        assert_eq!(c.poly, Poly::from_i64(&q, &[1, 1]));
        let d = SquareClass::mul(&q, &a, &a);
        assert!(d.is_trivial());
    }
}
