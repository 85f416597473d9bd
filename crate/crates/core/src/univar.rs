//! Dense univariate polynomials over a field, plus exact root extraction.
//!
//! Coefficient vectors are in ascending order: `p[i]` is the coefficient of
//! `t^i`. Only low degrees occur here (pencil rank-drop forms have degree at
//! most the number of variables), so the algorithms favor exactness and
//! determinism over asymptotics: rational roots come from the rational root
//! theorem on the squarefree part, prime-field roots from a Frobenius gcd
//! with a deterministic splitting sweep.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::field::{Field, PrimeField, Rationals};

pub fn trim<F: Field>(field: &F, p: &mut Vec<F::Elem>) {
    while p.last().is_some_and(|c| field.is_zero(c)) {
        p.pop();
    }
}

pub fn degree<F: Field>(field: &F, p: &[F::Elem]) -> Option<usize> {
    p.iter().rposition(|c| !field.is_zero(c))
}

pub fn eval<F: Field>(field: &F, p: &[F::Elem], x: &F::Elem) -> F::Elem {
    let mut acc = field.zero();
    for c in p.iter().rev() {
        acc = field.add(&field.mul(&acc, x), c);
    }
    acc
}

pub fn derivative<F: Field>(field: &F, p: &[F::Elem]) -> Vec<F::Elem> {
    let mut out = Vec::new();
    for (i, c) in p.iter().enumerate().skip(1) {
        out.push(field.mul(c, &field.from_i64(i as i64)));
    }
    trim(field, &mut out);
    out
}

pub fn mul<F: Field>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![field.zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if field.is_zero(ca) {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            out[i + j] = field.add(&out[i + j], &field.mul(ca, cb));
        }
    }
    trim(field, &mut out);
    out
}

/// Quotient and remainder of `a / b`; `b` must be nonzero.
pub fn divmod<F: Field>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> (Vec<F::Elem>, Vec<F::Elem>) {
    let db = degree(field, b).expect("division by the zero polynomial");
    let lead_inv = field.inv(&b[db]).expect("leading coefficient is nonzero");
    let mut rem: Vec<F::Elem> = a.to_vec();
    trim(field, &mut rem);
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let mut quot = vec![field.zero(); rem.len() - db];
    while let Some(dr) = degree(field, &rem) {
        if dr < db {
            break;
        }
        let c = field.mul(&rem[dr], &lead_inv);
        quot[dr - db] = c.clone();
        for i in 0..=db {
            let t = field.mul(&c, &b[i]);
            rem[dr - db + i] = field.sub(&rem[dr - db + i], &t);
        }
        trim(field, &mut rem);
    }
    trim(field, &mut quot);
    (quot, rem)
}

pub fn make_monic<F: Field>(field: &F, p: &[F::Elem]) -> Vec<F::Elem> {
    let Some(d) = degree(field, p) else {
        return Vec::new();
    };
    let inv = field.inv(&p[d]).expect("nonzero leading coefficient");
    let mut out: Vec<F::Elem> = p[..=d].iter().map(|c| field.mul(c, &inv)).collect();
    trim(field, &mut out);
    out
}

/// Monic gcd via the Euclidean algorithm.
pub fn gcd<F: Field>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let mut x: Vec<F::Elem> = a.to_vec();
    let mut y: Vec<F::Elem> = b.to_vec();
    trim(field, &mut x);
    trim(field, &mut y);
    while !y.is_empty() {
        let (_, r) = divmod(field, &x, &y);
        x = y;
        y = r;
    }
    make_monic(field, &x)
}

/// Result of exact root extraction over a base field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnivarRoots<E> {
    /// Distinct roots lying in the base field, canonically ordered.
    pub roots: Vec<E>,
    /// Squarefree factor of degree >= 1 with no base-field root, when the
    /// polynomial has roots only in a proper extension.
    pub deferred: Option<Vec<E>>,
}

/// Fields over which exact univariate root extraction is available.
pub trait RootField: Field {
    fn univar_roots(&self, poly: &[Self::Elem]) -> UnivarRoots<Self::Elem>;
}

// --- rationals: rational root theorem on the squarefree part ---

impl RootField for Rationals {
    fn univar_roots(&self, poly: &[BigRational]) -> UnivarRoots<BigRational> {
        let f = self;
        let mut p: Vec<BigRational> = poly.to_vec();
        trim(f, &mut p);
        let mut roots: Vec<BigRational> = Vec::new();
        if degree(f, &p).unwrap_or(0) == 0 {
            return UnivarRoots {
                roots,
                deferred: None,
            };
        }
        // squarefree part
        let d = derivative(f, &p);
        let g = gcd(f, &p, &d);
        let (mut s, r) = divmod(f, &p, &g);
        debug_assert!(r.is_empty());
        // strip the root at zero
        if s.first().is_some_and(|c| c.is_zero()) {
            roots.push(BigRational::zero());
            s.remove(0);
            trim(f, &mut s);
        }
        if let Some(ds) = degree(f, &s) {
            if ds >= 1 {
                let int = primitive_integer_coeffs(&s);
                let a0 = int.first().cloned().unwrap_or_else(BigInt::zero);
                let am = int.last().cloned().unwrap_or_else(BigInt::one);
                let num_divs = divisors(&a0.abs());
                let den_divs = divisors(&am.abs());
                for r in &num_divs {
                    for sden in &den_divs {
                        for sign in [1i64, -1] {
                            let cand = BigRational::new(r * BigInt::from(sign), sden.clone());
                            if eval(f, &s, &cand).is_zero() && !roots.contains(&cand) {
                                roots.push(cand);
                            }
                        }
                    }
                }
                // peel the rational roots off for the deferred factor
                let mut rest = s;
                for root in &roots {
                    if root.is_zero() {
                        continue;
                    }
                    let lin = vec![f.neg(root), f.one()];
                    let (q, r) = divmod(f, &rest, &lin);
                    debug_assert!(r.is_empty());
                    rest = q;
                }
                roots.sort();
                if degree(f, &rest).unwrap_or(0) >= 1 {
                    let ints = primitive_integer_coeffs(&rest);
                    let mut canon: Vec<BigRational> = ints
                        .into_iter()
                        .map(BigRational::from_integer)
                        .collect();
                    if canon.last().is_some_and(|c| c.is_negative()) {
                        for c in canon.iter_mut() {
                            *c = -&*c;
                        }
                    }
                    return UnivarRoots {
                        roots,
                        deferred: Some(canon),
                    };
                }
            }
        }
        roots.sort();
        UnivarRoots {
            roots,
            deferred: None,
        }
    }
}

/// Scale to integer coefficients with content 1.
fn primitive_integer_coeffs(p: &[BigRational]) -> Vec<BigInt> {
    let mut den_lcm = BigInt::one();
    for c in p {
        if !c.is_zero() {
            den_lcm = den_lcm.lcm(c.denom());
        }
    }
    let mut ints: Vec<BigInt> = p.iter().map(|c| (&den_lcm / c.denom()) * c.numer()).collect();
    let mut content = BigInt::zero();
    for c in &ints {
        content = content.gcd(c);
    }
    if !content.is_zero() && !content.is_one() {
        for c in ints.iter_mut() {
            *c = &*c / &content;
        }
    }
    ints
}

/// All positive divisors, by complete factorization (trial division then
/// Brent's rho with primality certification on the cofactors).
fn divisors(n: &BigInt) -> Vec<BigInt> {
    if n.is_zero() {
        return vec![BigInt::one()];
    }
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    let mut rest = n.abs();
    for q in 2u64..=100_000 {
        let qb = BigInt::from(q);
        if &qb * &qb > rest {
            break;
        }
        let mut e = 0u32;
        while (&rest % &qb).is_zero() {
            rest /= &qb;
            e += 1;
        }
        if e > 0 {
            factors.push((qb, e));
        }
    }
    let mut stack = Vec::new();
    if rest > BigInt::one() {
        stack.push(rest);
    }
    while let Some(m) = stack.pop() {
        if is_probable_prime(&m) {
            match factors.iter_mut().find(|(p, _)| *p == m) {
                Some((_, e)) => *e += 1,
                None => factors.push((m, 1)),
            }
            continue;
        }
        let d = pollard_rho(&m);
        stack.push(&m / &d);
        stack.push(d);
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in factors {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut acc = d.clone();
            next.push(acc.clone());
            for _ in 0..e {
                acc = &acc * &p;
                next.push(acc.clone());
            }
        }
        divs = next;
    }
    divs.sort();
    divs.dedup();
    divs
}

fn is_probable_prime(n: &BigInt) -> bool {
    if n < &BigInt::from(2) {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let qb = BigInt::from(q);
        if *n == qb {
            return true;
        }
        if (n % qb).is_zero() {
            return false;
        }
    }
    // Miller-Rabin with the first twelve primes: deterministic below 3.3e24,
    // overwhelmingly reliable beyond.
    let one = BigInt::one();
    let nm1 = n - &one;
    let mut d = nm1.clone();
    let mut s = 0u32;
    while (&d % 2u32).is_zero() {
        d /= 2u32;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: &BigInt) -> BigInt {
    // Brent's variant with a deterministic parameter sweep.
    if (n % 2u32).is_zero() {
        return BigInt::from(2);
    }
    let one = BigInt::one();
    for c in 1u64..64 {
        let cb = BigInt::from(c);
        let f = |x: &BigInt| (x * x + &cb) % n;
        let mut x = BigInt::from(2);
        let mut y = BigInt::from(2);
        let mut d = BigInt::one();
        while d == one {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            if diff.is_zero() {
                break;
            }
            d = diff.gcd(n);
        }
        if d != one && &d != n {
            return d;
        }
    }
    unreachable!("rho sweep exhausted on composite input")
}

// --- prime field: Frobenius gcd plus deterministic splitting ---

impl RootField for PrimeField {
    fn univar_roots(&self, poly: &[u64]) -> UnivarRoots<u64> {
        let f = self;
        let p = self.modulus();
        let mut h: Vec<u64> = poly.to_vec();
        trim(f, &mut h);
        let mut roots: Vec<u64> = Vec::new();
        let Some(dh) = degree(f, &h) else {
            return UnivarRoots {
                roots,
                deferred: None,
            };
        };
        if dh == 0 {
            return UnivarRoots {
                roots,
                deferred: None,
            };
        }
        if p <= 16 || (dh as u64) >= p {
            // small fields: test every element
            for t in 0..p {
                if f.is_zero(&eval(f, &h, &t)) {
                    roots.push(t);
                }
            }
        } else {
            // gcd(h, t^p - t) isolates the distinct linear factors
            let monic = make_monic(f, &h);
            let frob = pow_mod_poly(f, &[0, 1], p, &monic);
            let mut frob_minus_t = frob;
            if frob_minus_t.len() < 2 {
                frob_minus_t.resize(2, 0);
            }
            frob_minus_t[1] = f.sub(&frob_minus_t[1], &f.one());
            trim(f, &mut frob_minus_t);
            let lin = gcd(f, &monic, &frob_minus_t);
            split_linear_factors(f, lin, &mut roots);
        }
        roots.sort_unstable();
        // peel roots (with multiplicity) for the deferred factor
        let mut rest = make_monic(f, &h);
        for r in &roots {
            let lin = vec![f.neg(r), f.one()];
            loop {
                let (q, rr) = divmod(f, &rest, &lin);
                if rr.is_empty() && !q.is_empty() {
                    rest = q;
                    if f.is_zero(&eval(f, &rest, r)) {
                        continue;
                    }
                }
                break;
            }
        }
        let deferred = match degree(f, &rest) {
            Some(d) if d >= 1 => Some(make_monic(f, &squarefree_fp(f, &rest))),
            _ => None,
        };
        UnivarRoots { roots, deferred }
    }
}

/// base^exp mod (m) in F_p[t], square-and-multiply.
fn pow_mod_poly(f: &PrimeField, base: &[u64], mut exp: u64, m: &[u64]) -> Vec<u64> {
    let mut acc = vec![f.one()];
    let mut b = divmod(f, base, m).1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = divmod(f, &mul(f, &acc, &b), m).1;
        }
        b = divmod(f, &mul(f, &b, &b), m).1;
        exp >>= 1;
    }
    acc
}

/// Split a monic product of distinct linear factors into its roots, with a
/// deterministic shift sweep in place of random Cantor-Zassenhaus choices.
fn split_linear_factors(f: &PrimeField, g: Vec<u64>, roots: &mut Vec<u64>) {
    let p = f.modulus();
    let Some(d) = degree(f, &g) else { return };
    if d == 0 {
        return;
    }
    if d == 1 {
        roots.push(f.neg(&g[0])); // monic: t + g0
        return;
    }
    for a in 0..p {
        // w = gcd(g, (t+a)^((p-1)/2) - 1)
        let shifted = vec![a, 1];
        let mut w = pow_mod_poly(f, &shifted, (p - 1) / 2, &g);
        if w.is_empty() {
            // t = -a is itself a root of g
            w = vec![f.one()];
        }
        w[0] = f.sub(&w[0], &f.one());
        let mut w = gcd(f, &g, &w);
        trim(f, &mut w);
        let dw = degree(f, &w).unwrap_or(0);
        if dw > 0 && dw < d {
            let (q, r) = divmod(f, &g, &w);
            debug_assert!(r.is_empty());
            split_linear_factors(f, w, roots);
            split_linear_factors(f, q, roots);
            return;
        }
    }
    unreachable!("splitting sweep exhausted the field");
}

fn squarefree_fp(f: &PrimeField, poly: &[u64]) -> Vec<u64> {
    let p = f.modulus();
    let mut h = poly.to_vec();
    trim(f, &mut h);
    loop {
        let d = derivative(f, &h);
        if d.is_empty() {
            if degree(f, &h).unwrap_or(0) == 0 {
                return h;
            }
            // h = g(t^p); in the prime field the p-th root keeps coefficients
            let mut g = Vec::new();
            for (i, c) in h.iter().enumerate() {
                if i % (p as usize) == 0 {
                    g.push(*c);
                } else {
                    debug_assert!(f.is_zero(c));
                }
            }
            h = g;
            continue;
        }
        let g = gcd(f, &h, &d);
        let (q, _) = divmod(f, &h, &g);
        return q;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn q(n: i64) -> BigRational {
        Rationals.from_i64(n)
    }

    fn qr(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn divmod_and_gcd() {
        let f = Rationals;
        // (t-1)(t-2) = t^2 - 3t + 2
        let a = vec![q(2), q(-3), q(1)];
        let b = vec![q(-1), q(1)];
        let (quot, rem) = divmod(&f, &a, &b);
        assert!(rem.is_empty());
        assert_eq!(quot, vec![q(-2), q(1)]);
        let c = vec![q(-2), q(1)];
        let g = gcd(&f, &a, &mul(&f, &b, &c));
        assert_eq!(g, vec![q(2), q(-3), q(1)]);
    }

    #[test]
    fn rational_roots_simple() {
        let f = Rationals;
        // 6t^2 - 5t + 1 = (2t-1)(3t-1)
        let r = f.univar_roots(&[q(1), q(-5), q(6)]);
        assert_eq!(r.roots, vec![qr(1, 3), qr(1, 2)]);
        assert!(r.deferred.is_none());
    }

    #[test]
    fn rational_roots_with_deferred_factor() {
        let f = Rationals;
        // t(t-2)(t^2-2): rational roots 0 and 2, deferred t^2 - 2
        let poly = [q(0), q(-4), q(0), q(2), q(0)];
        // t*(t-2)*(t^2-2) = t^4 - 2t^3 - 2t^2 + 4t
        let poly = {
            let _ = poly;
            vec![q(0), q(4), q(-2), q(-2), q(1)]
        };
        let r = f.univar_roots(&poly);
        assert_eq!(r.roots, vec![q(0), q(2)]);
        assert_eq!(r.deferred, Some(vec![q(-2), q(0), q(1)]));
    }

    #[test]
    fn rational_roots_squarefree_first() {
        let f = Rationals;
        // (t-3)^2 reports the single root 3
        let r = f.univar_roots(&[q(9), q(-6), q(1)]);
        assert_eq!(r.roots, vec![q(3)]);
        assert!(r.deferred.is_none());
    }

    #[test]
    fn prime_field_roots() {
        let f = PrimeField::new(1_000_003).unwrap();
        // (t-5)(t-7)(t^2+1); -1 is a square mod p iff p = 1 mod 4; 1000003 = 3 mod 4
        let a = mul(&f, &[f.neg(&5), 1], &[f.neg(&7), 1]);
        let b = [1u64, 0, 1];
        let h = mul(&f, &a, &b);
        let r = f.univar_roots(&h);
        assert_eq!(r.roots, vec![5, 7]);
        assert_eq!(r.deferred, Some(vec![1, 0, 1]));
    }

    #[test]
    fn tiny_prime_field_roots() {
        let f = PrimeField::new(3).unwrap();
        // t^2 + 1 has roots {?} mod 3: 0^2+1=1, 1+1=2, 4+1=2 -> none
        let r = f.univar_roots(&[1u64, 0, 1]);
        assert!(r.roots.is_empty());
        assert!(r.deferred.is_some());
        let r = f.univar_roots(&[2u64, 0, 1]); // t^2 + 2 = t^2 - 1 = (t-1)(t+1)
        assert_eq!(r.roots, vec![1, 2]);
    }

    #[test]
    fn divisors_of_bigints() {
        let ds = divisors(&BigInt::from(12));
        let vals: Vec<u64> = ds.iter().map(|d| d.to_u64().unwrap()).collect();
        assert_eq!(vals, vec![1, 2, 3, 4, 6, 12]);
        // a product of two large primes still factors
        let n = BigInt::from(1_000_003u64) * BigInt::from(998_244_353u64);
        let ds = divisors(&n);
        assert_eq!(ds.len(), 4);
    }
}
