//! From point counts to characteristic polynomials of Frobenius on H^2,
//! and onward to Picard bounds: Newton identities, the trivial-lattice
//! factor from fiber component permutations, completion by the functional
//! equation, cyclotomic eigenvalue counting, and Artin-Tate discriminant
//! classes modulo squares.

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::field::{int_squarefree_kernel, rat_of_bigint, Rationals};
use crate::kodaira::{FiberKind, KodairaFiber, Splitness};
use crate::poly::Poly;

pub type QPoly = Poly<Rationals>;

/// Integer characteristic polynomial of Frobenius on a declared subspace.
#[derive(Clone, Debug, PartialEq)]
pub struct CharPoly {
    /// monic, integer coefficients, degree = subspace dimension
    pub poly: QPoly,
    pub q: u64,
}

impl CharPoly {
    pub fn dim(&self) -> usize {
        self.poly.degree().unwrap_or(0)
    }

    pub fn mul(&self, other: &CharPoly) -> CharPoly {
        assert_eq!(self.q, other.q);
        CharPoly {
            poly: Poly::mul(&Rationals, &self.poly, &other.poly),
            q: self.q,
        }
    }

    /// Multiplicity of (x - c) in the polynomial.
    pub fn root_multiplicity(&self, c: i64) -> usize {
        let q = Rationals;
        let lin = Poly::from_i64(&q, &[-c, 1]);
        let mut m = 0;
        let mut cur = self.poly.clone();
        while Poly::divides(&q, &lin, &cur) {
            cur = Poly::div_exact(&q, &cur, &lin);
            m += 1;
        }
        m
    }

    /// Power sums of the roots (traces of Frobenius powers) from the
    /// coefficients, for m = 1..=k.
    pub fn power_sums(&self, k: usize) -> Vec<BigRational> {
        power_sums_from_coeffs(&self.poly, k)
    }

    /// Verify the Weil coefficient bounds |c_i| <= binom(n, i) q^i.
    pub fn weil_coefficient_bounds(&self) -> bool {
        let n = self.dim();
        let qb = BigInt::from(self.q);
        let mut binom = BigInt::one();
        let mut qpow = BigInt::one();
        for i in 0..=n {
            let c = self.poly.coeff(&Rationals, n - i);
            if c.numer().abs() > &binom * &qpow {
                return false;
            }
            binom = binom * BigInt::from((n - i) as u64) / BigInt::from((i + 1) as u64);
            qpow *= &qb;
        }
        true
    }

    /// Functional equation: x^n p(q^2/x) = eps q^n p(x) for some sign.
    pub fn functional_equation_sign(&self) -> Option<i8> {
        let q = Rationals;
        let n = self.dim();
        let q2 = rat_of_bigint(BigInt::from(self.q) * BigInt::from(self.q));
        // compare c_{n-k} with eps q^{n-2k} c_k
        // writing p = sum a_i x^i, the identity reads a_i q^{2i} = eps q^n a_{n-i}
        for eps in [1i8, -1] {
            let mut ok = true;
            for k in 0..=n {
                let lhs = self.poly.coeff(&q, k) * q2.pow(k as i32);
                let rhs = self.poly.coeff(&q, n - k)
                    * crate::field::rat_int(eps as i64)
                    * rat_of_bigint(BigInt::from(self.q).pow(n as u32));
                if lhs != rhs {
                    ok = false;
                    break;
                }
            }
            if ok {
                return Some(eps);
            }
        }
        None
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SpectraError {
    TraceDataInconsistent(String),
    NeedMoreTraces(String),
    NoConsistentCompletion,
    NotASquare,
    NonScalarCyclotomicPart,
    NotK3,
    NeedTwoPrimes,
    UndecidedSplitness,
}

/// Power sums p_m = sum lambda_i^m from a monic polynomial, via Newton.
pub fn power_sums_from_coeffs(poly: &QPoly, k: usize) -> Vec<BigRational> {
    let q = Rationals;
    let n = poly.degree().unwrap_or(0);
    // e_i = (-1)^i * coeff of x^{n-i}
    let e = |i: usize| -> BigRational {
        if i > n {
            BigRational::zero()
        } else {
            let c = poly.coeff(&q, n - i);
            if i % 2 == 1 {
                -c
            } else {
                c
            }
        }
    };
    let mut p: Vec<BigRational> = Vec::with_capacity(k + 1);
    for m in 1..=k {
        // p_m = e_1 p_{m-1} - e_2 p_{m-2} + ... + (-1)^{m-1} m e_m
        let mut acc = BigRational::zero();
        for i in 1..m {
            let term = e(i) * &p[m - 1 - i];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let last = e(m) * crate::field::rat_int(m as i64);
        if m % 2 == 1 {
            acc += last;
        } else {
            acc -= last;
        }
        p.push(acc);
    }
    p
}

/// Newton's identities: monic degree-n polynomial from the power sums
/// t_1..t_n of its roots. Errors when any coefficient is non-integral.
pub fn traces_to_charpoly(traces: &[BigRational], q: u64) -> Result<CharPoly, SpectraError> {
    let qq = Rationals;
    let n = traces.len();
    let mut e: Vec<BigRational> = alloc::vec![BigRational::one()];
    for k in 1..=n {
        // k e_k = sum_{i=1}^{k} (-1)^{i-1} e_{k-i} t_i
        let mut acc = BigRational::zero();
        for i in 1..=k {
            let term = &e[k - i] * &traces[i - 1];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        e.push(acc / crate::field::rat_int(k as i64));
    }
    let mut coeffs = alloc::vec![BigRational::zero(); n + 1];
    for k in 0..=n {
        let c = if k % 2 == 0 { e[k].clone() } else { -e[k].clone() };
        if !c.is_integer() {
            return Err(SpectraError::TraceDataInconsistent(alloc::format!(
                "coefficient e_{k} = {c} is not integral"
            )));
        }
        coeffs[n - k] = c;
    }
    Ok(CharPoly {
        poly: Poly::from_coeffs(&qq, coeffs),
        q,
    })
}

pub fn traces_to_charpoly_i128(traces: &[i128], q: u64) -> Result<CharPoly, SpectraError> {
    let ts: Vec<BigRational> = traces
        .iter()
        .map(|&t| rat_of_bigint(BigInt::from(t)))
        .collect();
    traces_to_charpoly(&ts, q)
}

// ---- trivial lattice factor ----

/// The factored action of Frobenius on the span of fiber components, the
/// zero section and the general fiber: a product of blocks q * (cyclic
/// permutation of length L), each contributing x^L - q^L.
#[derive(Clone, Debug, PartialEq)]
pub struct TrivialLatticeAction {
    pub q: u64,
    /// (cycle length, multiplicity); multiplicities can be negative for
    /// the one relation per place (fiber components sum to the fiber class)
    pub blocks: Vec<(usize, i64)>,
}

impl TrivialLatticeAction {
    pub fn dimension(&self) -> i64 {
        self.blocks.iter().map(|&(l, m)| l as i64 * m).sum()
    }

    pub fn trace_power(&self, m: usize) -> i128 {
        let mut acc: i128 = 0;
        let q = self.q as i128;
        for &(l, mult) in &self.blocks {
            if m % l == 0 {
                acc += (mult as i128) * (l as i128) * q.pow(m as u32);
            }
        }
        acc
    }

    pub fn char_poly(&self) -> CharPoly {
        let qq = Rationals;
        let mut num = Poly::one(&qq);
        let mut den = Poly::one(&qq);
        for &(l, mult) in &self.blocks {
            // x^l - q^l
            let mut cs = alloc::vec![BigRational::zero(); l + 1];
            cs[0] = -rat_of_bigint(BigInt::from(self.q).pow(l as u32));
            cs[l] = BigRational::one();
            let f = Poly::from_coeffs(&qq, cs);
            if mult >= 0 {
                num = Poly::mul(&qq, &num, &Poly::pow(&qq, &f, mult as u64));
            } else {
                den = Poly::mul(&qq, &den, &Poly::pow(&qq, &f, (-mult) as u64));
            }
        }
        CharPoly {
            poly: Poly::div_exact(&qq, &num, &den),
            q: self.q,
        }
    }
}

/// Cycle type of the Frobenius permutation of the fiber components over
/// the residue field (relative action at the place itself).
fn component_cycles(kind: FiberKind, split: &Splitness) -> Result<Vec<usize>, SpectraError> {
    let need = |s: &Option<bool>| s.ok_or(SpectraError::UndecidedSplitness);
    Ok(match (kind, split) {
        (FiberKind::Good, _) => alloc::vec![1],
        (FiberKind::In(n), Splitness::Split(s)) => {
            if need(s)? {
                alloc::vec![1; n]
            } else {
                // reflection i -> -i on Z/n
                let mut c = alloc::vec![1]; // component 0
                if n % 2 == 0 {
                    c.push(1); // component n/2
                    for _ in 0..(n - 2) / 2 {
                        c.push(2);
                    }
                } else {
                    for _ in 0..(n - 1) / 2 {
                        c.push(2);
                    }
                }
                c
            }
        }
        (FiberKind::InStar(0), Splitness::CubicPattern(p)) => {
            let pat = p.as_ref().ok_or(SpectraError::UndecidedSplitness)?;
            // center + identity leaf fixed, root leaves per the pattern
            let mut c = alloc::vec![1, 1];
            c.extend(pat.iter().copied());
            c
        }
        (FiberKind::InStar(n), Splitness::Split(s)) => {
            // central chain (n+1) and two near leaves always fixed
            let mut c = alloc::vec![1; n + 3];
            if need(s)? {
                c.push(1);
                c.push(1);
            } else {
                c.push(2);
            }
            c
        }
        (FiberKind::II, _) => alloc::vec![1],
        (FiberKind::III, _) => alloc::vec![1, 1],
        (FiberKind::IV, Splitness::Split(s)) => {
            if need(s)? {
                alloc::vec![1, 1, 1]
            } else {
                alloc::vec![1, 2]
            }
        }
        (FiberKind::IVStar, Splitness::Split(s)) => {
            if need(s)? {
                alloc::vec![1; 7]
            } else {
                alloc::vec![1, 1, 1, 2, 2]
            }
        }
        (FiberKind::IIIStar, _) => alloc::vec![1; 8],
        (FiberKind::IIStar, _) => alloc::vec![1; 9],
        _ => return Err(SpectraError::UndecidedSplitness),
    })
}

/// Build the trivial-lattice action from the analyzed fibers: the zero
/// section and general fiber contribute (x-q)^2; each place of degree d
/// contributes its component permutation cycles stretched by d, divided by
/// one copy of x^d - q^d (the per-place fiber-sum relation); each declared
/// extra F_q-rational divisor class adds another x - q.
pub fn trivial_lattice_action(
    fibers: &[(KodairaFiber<crate::finite::ExtField>, usize)],
    q: u64,
    extra_rational_classes: usize,
) -> Result<TrivialLatticeAction, SpectraError> {
    let mut blocks: Vec<(usize, i64)> = Vec::new();
    let mut push = |l: usize, m: i64| {
        match blocks.iter_mut().find(|(bl, _)| *bl == l) {
            Some((_, bm)) => *bm += m,
            None => blocks.push((l, m)),
        }
    };
    push(1, 2 + extra_rational_classes as i64);
    for (f, d) in fibers {
        if f.kind == FiberKind::Good {
            continue;
        }
        for c in component_cycles(f.kind, &f.splitness)? {
            push(c * d, 1);
        }
        push(*d, -1);
    }
    blocks.retain(|&(_, m)| m != 0);
    blocks.sort_unstable();
    Ok(TrivialLatticeAction { q, blocks })
}

// ---- duality completion ----

/// Complete the characteristic polynomial on H^2 from the known factor and
/// the traces of the remaining quotient. The unknown factor of degree
/// u = b2 - dim(known) satisfies the functional equation च_{u-k} =
/// eps q^{u-2k} c_k; ceil(u/2) traces determine the free half. All sign
/// branches that survive integrality, the Weil bounds and the supplied
/// traces are returned.
pub fn duality_complete(
    quotient_traces: &[i128],
    known: &CharPoly,
    b2: usize,
    q: u64,
) -> Result<Vec<CharPoly>, SpectraError> {
    let qq = Rationals;
    let u = b2
        .checked_sub(known.dim())
        .ok_or(SpectraError::NoConsistentCompletion)?;
    if u == 0 {
        return Ok(alloc::vec![known.clone()]);
    }
    let half = u.div_ceil(2);
    if quotient_traces.len() < half {
        return Err(SpectraError::NeedMoreTraces(alloc::format!(
            "need {} traces for an unknown factor of degree {}, got {}",
            half,
            u,
            quotient_traces.len()
        )));
    }
    // Newton for e_1..e_half from the first traces
    let mut e: Vec<BigRational> = alloc::vec![BigRational::one()];
    for k in 1..=half {
        let mut acc = BigRational::zero();
        for i in 1..=k {
            let term = &e[k - i] * rat_of_bigint(BigInt::from(quotient_traces[i - 1]));
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        e.push(acc / crate::field::rat_int(k as i64));
    }
    // c_k = (-1)^k e_k for k <= half
    let mut c: Vec<Option<BigRational>> = alloc::vec![None; u + 1];
    c[0] = Some(BigRational::one());
    for k in 1..=half {
        let v = if k % 2 == 0 { e[k].clone() } else { -e[k].clone() };
        c[k] = Some(v);
    }
    let mut out = Vec::new();
    'branch: for eps in [1i64, -1] {
        let mut cc = c.clone();
        // c_{u-k} = eps q^{u-2k} c_k
        for k in 0..=u / 2 {
            let lower = cc[k].clone();
            if let Some(ck) = lower {
                let exp = (u as i64) - 2 * (k as i64);
                let factor = if exp >= 0 {
                    rat_of_bigint(BigInt::from(q).pow(exp as u32))
                } else {
                    BigRational::new(BigInt::one(), BigInt::from(q).pow((-exp) as u32))
                };
                let val = &ck * factor * crate::field::rat_int(eps);
                match &cc[u - k] {
                    Some(existing) => {
                        if *existing != val {
                            continue 'branch;
                        }
                    }
                    None => cc[u - k] = Some(val),
                }
            }
        }
        let mut coeffs = alloc::vec![BigRational::zero(); u + 1];
        let mut complete = true;
        for k in 0..=u {
            match &cc[k] {
                Some(v) => {
                    if !v.is_integer() {
                        complete = false;
                        break;
                    }
                    coeffs[u - k] = v.clone();
                }
                None => {
                    complete = false;
                    break;
                }
            }
        }
        if !complete {
            continue;
        }
        let unknown = CharPoly {
            poly: Poly::from_coeffs(&qq, coeffs),
            q,
        };
        if !unknown.weil_coefficient_bounds() {
            continue;
        }
        // all supplied traces must be reproduced
        let ps = unknown.power_sums(quotient_traces.len());
        for (m, p) in ps.iter().enumerate() {
            if *p != rat_of_bigint(BigInt::from(quotient_traces[m])) {
                continue 'branch;
            }
        }
        out.push(known.mul(&unknown));
    }
    if out.is_empty() {
        return Err(SpectraError::NoConsistentCompletion);
    }
    Ok(out)
}

// ---- cyclotomic eigenvalue counting ----

/// Cyclotomic polynomials Phi_1..on demand by exact division.
pub fn cyclotomic_polynomial(n: usize) -> QPoly {
    let q = Rationals;
    let mut num = alloc::vec![BigRational::zero(); n + 1];
    num[0] = -BigRational::one();
    num[n] = BigRational::one();
    let mut phi = Poly::from_coeffs(&q, num); // x^n - 1
    for d in 1..n {
        if n % d == 0 {
            phi = Poly::div_exact(&q, &phi, &cyclotomic_polynomial(d));
        }
    }
    phi
}

fn euler_phi(n: usize) -> usize {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Number of roots of the form q * (root of unity), with multiplicity:
/// substitute x -> qx, clear q powers, and take exact gcds with the
/// cyclotomic polynomials.
pub fn cyclotomic_count(p: &CharPoly) -> usize {
    let qq = Rationals;
    let n = p.dim();
    // r(x) = p(qx) / q^n
    let qr = rat_of_bigint(BigInt::from(p.q));
    let mut coeffs = Vec::with_capacity(n + 1);
    let qn = qr.pow(n as i32);
    let mut qp = BigRational::one();
    for i in 0..=n {
        coeffs.push(p.poly.coeff(&qq, i) * &qp / &qn);
        qp *= &qr;
    }
    let mut r = Poly::from_coeffs(&qq, coeffs);
    let mut count = 0;
    for m in 1..=(2 * n).max(6) {
        if euler_phi(m) > n {
            continue;
        }
        let phi = cyclotomic_polynomial(m);
        loop {
            let (quo, rem) = Poly::divrem(&qq, &r, &phi);
            if rem.is_zero() && !quo.is_zero() {
                count += euler_phi(m);
                r = quo;
            } else {
                break;
            }
        }
    }
    count
}

// ---- Artin-Tate ----

/// Squarefree integer class with sign.
pub type DiscriminantClass = (i8, BigInt);

/// The Artin-Tate combination for an elliptic K3 surface over F_q with q a
/// square and all cyclotomic eigenvalues exactly q: the square class of
/// -R(1/q) where det(1 - T Phi) = (1 - qT)^{rho'} R(T). Equals the
/// Neron-Severi lattice discriminant modulo rational squares.
pub fn artin_tate_class(
    p: &CharPoly,
    rho_prime: usize,
) -> Result<DiscriminantClass, SpectraError> {
    let qq = Rationals;
    if p.dim() != 22 {
        return Err(SpectraError::NotK3);
    }
    let qroot = BigInt::from(p.q).sqrt();
    if &qroot * &qroot != BigInt::from(p.q) {
        return Err(SpectraError::NotASquare);
    }
    let mult_q = p.root_multiplicity(p.q as i64);
    if mult_q != rho_prime || cyclotomic_count(p) != rho_prime {
        return Err(SpectraError::NonScalarCyclotomicPart);
    }
    // g = p / (x - q)^{rho'}; class of -R(1/q) = -g(q) / q^{b2 - rho'},
    // and q is a square, so the class is just that of -g(q)
    let lin = Poly::from_coeffs(&qq, alloc::vec![
        -rat_of_bigint(BigInt::from(p.q)),
        BigRational::one()
    ]);
    let mut g = p.poly.clone();
    for _ in 0..rho_prime {
        g = Poly::div_exact(&qq, &g, &lin);
    }
    let val = g.eval(&qq, &rat_of_bigint(BigInt::from(p.q)));
    assert!(!val.is_zero());
    let c = -val;
    let n = c.numer() * c.denom();
    int_squarefree_kernel(&n)
        .map(|(s, k)| (s, k))
        .ok_or(SpectraError::NoConsistentCompletion)
}

#[derive(Clone, Debug, PartialEq)]
pub enum GateVerdict {
    /// Geometric Picard rank is at most bound - 1, witnessed by the two
    /// differing discriminant classes (their indices).
    RankAtMost(usize, (usize, usize)),
    Inconclusive,
}

/// Compare Artin-Tate classes from different primes with a common
/// cyclotomic bound: any two differing classes cut the bound by one.
pub fn discriminant_gate(
    classes: &[DiscriminantClass],
    common_bound: usize,
) -> Result<GateVerdict, SpectraError> {
    if classes.len() < 2 {
        return Err(SpectraError::NeedTwoPrimes);
    }
    for i in 0..classes.len() {
        for j in i + 1..classes.len() {
            if classes[i] != classes[j] {
                return Ok(GateVerdict::RankAtMost(common_bound - 1, (i, j)));
            }
        }
    }
    Ok(GateVerdict::Inconclusive)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> BigRational {
        crate::field::rat_int(n)
    }

    #[test]
    fn newton_small_example() {
        // eigenvalues {2, 3}: traces (5, 13) -> x^2 - 5x + 6
        let cp = traces_to_charpoly(&[rat(5), rat(13)], 3).unwrap();
        assert_eq!(cp.poly, Poly::from_i64(&Rationals, &[6, -5, 1]));
        // zero traces -> x^n
        let cp = traces_to_charpoly(&[rat(0), rat(0), rat(0)], 5).unwrap();
        assert_eq!(cp.poly, Poly::from_i64(&Rationals, &[0, 0, 0, 1]));
        // non-integral data rejected
        assert!(traces_to_charpoly(&[rat(1), rat(2)], 2).is_err());
    }

    #[test]
    fn newton_roundtrip_random_spectra() {
        // charpoly from power sums of a known integer spectrum, both ways
        let mut rng = crate::field::SplitMix64::new(7);
        for _ in 0..20 {
            let deg = 2 + (rng.below(10) as usize);
            let eigs: Vec<i64> = (0..deg).map(|_| rng.below(19) as i64 - 9).collect();
            let traces: Vec<BigRational> = (1..=deg)
                .map(|m| {
                    rat(eigs
                        .iter()
                        .map(|&l| (l as i128).pow(m as u32))
                        .sum::<i128>() as i64)
                })
                .collect();
            let cp = traces_to_charpoly(&traces, 2).unwrap();
            // multiply out the linear factors
            let q = Rationals;
            let mut expect = Poly::one(&q);
            for &l in &eigs {
                expect = Poly::mul(&q, &expect, &Poly::from_i64(&q, &[-l, 1]));
            }
            assert_eq!(cp.poly, expect);
            // and back
            let ps = cp.power_sums(deg);
            assert_eq!(ps, traces);
        }
    }

    #[test]
    fn e1prime_quartic_from_published_counts() {
        // quotient traces from the count table minus 18*17^m and 1 + 17^{2m}
        let counts: [i128; 4] = [604, 88312, 24227740, 6977057176];
        let mut traces = Vec::new();
        for (i, n) in counts.iter().enumerate() {
            let m = (i + 1) as u32;
            let t = n - 1 - 17i128.pow(2 * m) - 18 * 17i128.pow(m);
            traces.push(t);
        }
        assert_eq!(traces[0], 8);
        let cp = traces_to_charpoly_i128(&traces, 17).unwrap();
        assert_eq!(
            cp.poly,
            Poly::from_i64(&Rationals, &[83521, -2312, 238, -8, 1])
        );
        assert!(cp.weil_coefficient_bounds());
        // constant term 83521 = 17^4 and the functional equation holds
        assert_eq!(cp.functional_equation_sign(), Some(1));
        // no roots of the shape 17 zeta
        assert_eq!(cyclotomic_count(&cp), 0);
    }

    #[test]
    fn cyclotomic_counting() {
        let q = Rationals;
        // (x - 17)^18 * quartic: 18 cyclotomic roots
        let quartic = Poly::from_i64(&q, &[83521, -2312, 238, -8, 1]);
        let lin = Poly::from_i64(&q, &[-17, 1]);
        let full = Poly::mul(&q, &Poly::pow(&q, &lin, 18), &quartic);
        let cp = CharPoly { poly: full, q: 17 };
        assert_eq!(cyclotomic_count(&cp), 18);
        // (x - q)(x + q): 2
        let cp = CharPoly {
            poly: Poly::from_i64(&q, &[-25, 0, 1]),
            q: 5,
        };
        assert_eq!(cyclotomic_count(&cp), 2);
        // multiplying by (x - q)^k adds exactly k
        let cp2 = CharPoly {
            poly: Poly::mul(
                &q,
                &Poly::from_i64(&q, &[-25, 0, 1]),
                &Poly::pow(&q, &Poly::from_i64(&q, &[-5, 1]), 3),
            ),
            q: 5,
        };
        assert_eq!(cyclotomic_count(&cp2), 5);
    }

    #[test]
    fn duality_completion_degree_two() {
        // degree-2 unknown with t1 known: x^2 - t1 x + q^2 forced
        let known = CharPoly {
            poly: Poly::pow(
                &Rationals,
                &Poly::from_i64(&Rationals, &[-9, 1]),
                3,
            ),
            q: 9,
        };
        let full = duality_complete(&[4], &known, 5, 9).unwrap();
        assert_eq!(full.len(), 1);
        let unknown = Poly::div_exact(&Rationals, &full[0].poly, &known.poly);
        assert_eq!(unknown, Poly::from_i64(&Rationals, &[81, -4, 1]));
        // too few traces
        assert!(matches!(
            duality_complete(&[], &known, 5, 9),
            Err(SpectraError::NeedMoreTraces(_))
        ));
    }

    #[test]
    fn artin_tate_example_values() {
        let q = Rationals;
        // (x - 121)^20 (x^2 - 158x + 14641) -> -21 mod squares
        let cp = CharPoly {
            poly: Poly::mul(
                &q,
                &Poly::pow(&q, &Poly::from_i64(&q, &[-121, 1]), 20),
                &Poly::from_i64(&q, &[14641, -158, 1]),
            ),
            q: 121,
        };
        assert_eq!(cyclotomic_count(&cp), 20);
        let class = artin_tate_class(&cp, 20).unwrap();
        assert_eq!(class, (-1, BigInt::from(21)));
        // (x - 289)^20 (x^2 + 94x + 83521) -> -42
        let cp = CharPoly {
            poly: Poly::mul(
                &q,
                &Poly::pow(&q, &Poly::from_i64(&q, &[-289, 1]), 20),
                &Poly::from_i64(&q, &[83521, 94, 1]),
            ),
            q: 289,
        };
        let class = artin_tate_class(&cp, 20).unwrap();
        assert_eq!(class, (-1, BigInt::from(42)));
        // q not a square is rejected
        let cp17 = CharPoly {
            poly: Poly::pow(&q, &Poly::from_i64(&q, &[-17, 1]), 22),
            q: 17,
        };
        assert!(matches!(
            artin_tate_class(&cp17, 22),
            Err(SpectraError::NotASquare)
        ));
    }

    #[test]
    fn gate_verdicts() {
        let a = (-1i8, BigInt::from(21));
        let b = (-1i8, BigInt::from(42));
        assert_eq!(
            discriminant_gate(&[a.clone(), b], 20).unwrap(),
            GateVerdict::RankAtMost(19, (0, 1))
        );
        assert_eq!(
            discriminant_gate(&[a.clone(), a.clone()], 20).unwrap(),
            GateVerdict::Inconclusive
        );
        assert!(matches!(
            discriminant_gate(&[a], 20),
            Err(SpectraError::NeedTwoPrimes)
        ));
    }
}
