//! Rational functions in one variable over a field, kept in lowest terms
//! with monic denominator.

use alloc::string::String;

use crate::field::Field;
use crate::poly::Poly;

#[derive(Clone, PartialEq, Debug)]
pub struct RatFunc<F: Field> {
    pub num: Poly<F>,
    pub den: Poly<F>,
}

impl<F: Field> RatFunc<F> {
    pub fn new(f: &F, num: Poly<F>, den: Poly<F>) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut r = RatFunc { num, den };
        r.reduce(f);
        r
    }

    pub fn of_poly(f: &F, num: Poly<F>) -> Self {
        RatFunc {
            num,
            den: Poly::one(f),
        }
    }

    pub fn zero_over(f: &F) -> Self {
        RatFunc {
            num: Poly::zero(),
            den: Poly::one(f),
        }
    }

    pub fn one_over(f: &F) -> Self {
        RatFunc {
            num: Poly::one(f),
            den: Poly::one(f),
        }
    }

    pub fn constant(f: &F, c: F::Elem) -> Self {
        RatFunc {
            num: Poly::constant(f, c),
            den: Poly::one(f),
        }
    }

    fn reduce(&mut self, f: &F) {
        if self.num.is_zero() {
            self.den = Poly::one(f);
            return;
        }
        let g = Poly::gcd(f, &self.num, &self.den);
        if g.degree().map(|d| d > 0).unwrap_or(false) {
            self.num = Poly::div_exact(f, &self.num, &g);
            self.den = Poly::div_exact(f, &self.den, &g);
        }
        let lc = self.den.leading(f);
        if !f.is_one(&lc) {
            let inv = f.inv(&lc).unwrap();
            self.num = Poly::scale(f, &self.num, &inv);
            self.den = Poly::scale(f, &self.den, &inv);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    pub fn add(f: &F, a: &Self, b: &Self) -> Self {
        let num = Poly::add(
            f,
            &Poly::mul(f, &a.num, &b.den),
            &Poly::mul(f, &b.num, &a.den),
        );
        RatFunc::new(f, num, Poly::mul(f, &a.den, &b.den))
    }

    pub fn sub(f: &F, a: &Self, b: &Self) -> Self {
        RatFunc::add(f, a, &RatFunc::neg(f, b))
    }

    pub fn neg(f: &F, a: &Self) -> Self {
        RatFunc {
            num: Poly::neg(f, &a.num),
            den: a.den.clone(),
        }
    }

    pub fn mul(f: &F, a: &Self, b: &Self) -> Self {
        RatFunc::new(
            f,
            Poly::mul(f, &a.num, &b.num),
            Poly::mul(f, &a.den, &b.den),
        )
    }

    pub fn div(f: &F, a: &Self, b: &Self) -> Self {
        assert!(!b.is_zero(), "division by zero rational function");
        RatFunc::new(
            f,
            Poly::mul(f, &a.num, &b.den),
            Poly::mul(f, &a.den, &b.num),
        )
    }

    pub fn inv(f: &F, a: &Self) -> Option<Self> {
        if a.is_zero() {
            None
        } else {
            Some(RatFunc::new(f, a.den.clone(), a.num.clone()))
        }
    }

    pub fn square(f: &F, a: &Self) -> Self {
        RatFunc::mul(f, a, a)
    }

    pub fn pow(f: &F, a: &Self, e: u64) -> Self {
        RatFunc {
            num: Poly::pow(f, &a.num, e),
            den: Poly::pow(f, &a.den, e),
        }
    }

    pub fn scale(f: &F, a: &Self, c: &F::Elem) -> Self {
        RatFunc::new(f, Poly::scale(f, &a.num, c), a.den.clone())
    }

    /// Valuation at the finite place defined by a monic irreducible pi.
    pub fn valuation(&self, f: &F, pi: &Poly<F>) -> i64 {
        assert!(!self.is_zero(), "valuation of zero");
        fn count<F: Field>(f: &F, a: &Poly<F>, pi: &Poly<F>) -> i64 {
            let mut a = a.clone();
            let mut v = 0;
            loop {
                let (q, r) = Poly::divrem(f, &a, pi);
                if r.is_zero() {
                    v += 1;
                    a = q;
                } else {
                    return v;
                }
            }
        }
        count(f, &self.num, pi) - count(f, &self.den, pi)
    }

    /// Valuation at infinity: deg(den) - deg(num).
    pub fn valuation_at_infinity(&self) -> i64 {
        assert!(!self.is_zero());
        self.den.deg_i() as i64 - self.num.deg_i() as i64
    }

    /// Evaluate at a point where the denominator does not vanish.
    pub fn eval(&self, f: &F, x: &F::Elem) -> Option<F::Elem> {
        let d = self.den.eval(f, x);
        if f.is_zero(&d) {
            return None;
        }
        Some(f.div(&self.num.eval(f, x), &d))
    }

    /// Substitute t -> g(t) for a rational function g.
    pub fn compose(f: &F, a: &Self, g: &Self) -> Self {
        // a(num/den): expand with common denominators
        let dn = a.num.deg_i().max(0) as usize;
        let dd = a.den.deg_i().max(0) as usize;
        let d = dn.max(dd);
        let eval_poly = |p: &Poly<F>| -> Poly<F> {
            // p(g) * den^d
            let mut acc = Poly::zero();
            for (i, c) in p.coeffs.iter().enumerate() {
                // c * num^i * den^(d-i)
                let term = Poly::mul(
                    f,
                    &Poly::pow(f, &g.num, i as u64),
                    &Poly::pow(f, &g.den, (d - i) as u64),
                );
                acc = Poly::add(f, &acc, &Poly::scale(f, &term, c));
            }
            acc
        };
        RatFunc::new(f, eval_poly(&a.num), eval_poly(&a.den))
    }

    pub fn render(&self, f: &F, var: &str) -> String {
        use alloc::format;
        if self.is_polynomial() {
            self.num.render(f, var)
        } else {
            format!("({}) / ({})", self.num.render(f, var), self.den.render(f, var))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat_int, Rationals};

    #[test]
    fn reduction_and_valuation() {
        let q = Rationals;
        // (t^2 - 1)/(t - 1) = t + 1
        let num = Poly::from_i64(&q, &[-1, 0, 1]);
        let den = Poly::from_i64(&q, &[-1, 1]);
        let r = RatFunc::new(&q, num, den);
        assert_eq!(r.num, Poly::from_i64(&q, &[1, 1]));
        assert!(r.is_polynomial());

        let pi = Poly::from_i64(&q, &[1, 1]); // t + 1
        assert_eq!(r.valuation(&q, &pi), 1);
        assert_eq!(r.valuation_at_infinity(), -1);
    }

    #[test]
    fn composition() {
        let q = Rationals;
        // a(t) = t^2, g = 1/t  =>  a(g) = 1/t^2
        let a = RatFunc::of_poly(&q, Poly::from_i64(&q, &[0, 0, 1]));
        let g = RatFunc::new(&q, Poly::one(&q), Poly::x(&q));
        let c = RatFunc::compose(&q, &a, &g);
        assert_eq!(c.num, Poly::one(&q));
        assert_eq!(c.den, Poly::from_i64(&q, &[0, 0, 1]));
        assert_eq!(c.eval(&q, &rat_int(2)), Some(crate::field::rat_int(1) / rat_int(4)));
    }
}
