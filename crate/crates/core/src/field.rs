//! Coefficient fields for exact computation.
//!
//! Every algebraic object in this crate carries a [`Field`] value describing
//! the coefficient domain. Two fields are provided: [`Rationals`] (arbitrary
//! precision, the reference field) and [`PrimeField`] (odd prime modulus below
//! 2^31, used for fast randomized cross-checks). All arithmetic is exact;
//! division by zero is reported, never silently absorbed.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Division by zero in a field operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DivisionByZero;

impl fmt::Display for DivisionByZero {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "division by zero")
    }
}

impl core::error::Error for DivisionByZero {}

/// Rejected prime-field modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldError {
    /// The modulus is not a prime number.
    NotPrime(u64),
    /// The modulus is not below 2^31.
    ModulusTooLarge(u64),
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::NotPrime(p) => write!(f, "modulus {p} is not prime"),
            FieldError::ModulusTooLarge(p) => write!(f, "modulus {p} is not below 2^31"),
        }
    }
}

impl core::error::Error for FieldError {}

/// An exact coefficient field.
///
/// The field is a value (not just a type) so that runtime-selected prime
/// moduli fit the same interface as the rationals. Elements do not know
/// their field; the field value performs all arithmetic.
pub trait Field: Clone + PartialEq + Eq + fmt::Debug {
    type Elem: Clone + PartialEq + Eq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, DivisionByZero>;
    /// Characteristic of the field: 0 for the rationals, p for F_p.
    fn characteristic(&self) -> u64;
    fn from_i64(&self, n: i64) -> Self::Elem;
    /// Image of a nonnegative decimal integer literal.
    fn from_decimal(&self, digits: &str) -> Self::Elem;
    fn elem_to_string(&self, a: &Self::Elem) -> String;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, DivisionByZero> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// Rescale a row by a nonzero constant to keep entries small during
    /// fraction-free elimination. Must not change the span of the row.
    /// Default: leave the row alone.
    fn normalize_row(&self, _row: &mut [Self::Elem]) {}

    /// Cheap one-sided certificate that a row-major `rows x cols` matrix has
    /// full column rank. `Some(true)` is a proof; `None` means undecided.
    fn full_col_rank_certificate(
        &self,
        _entries: &[Self::Elem],
        _rows: usize,
        _cols: usize,
    ) -> Option<bool> {
        None
    }
}

/// The field of rational numbers with arbitrary-precision representation.
///
/// `BigRational` keeps values in lowest terms with a positive denominator,
/// which is exactly the canonical form required here.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn inv(&self, a: &BigRational) -> Result<BigRational, DivisionByZero> {
        if a.is_zero() {
            Err(DivisionByZero)
        } else {
            Ok(a.recip())
        }
    }

    fn characteristic(&self) -> u64 {
        0
    }

    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_decimal(&self, digits: &str) -> BigRational {
        let n = digits.parse::<BigInt>().expect("decimal digits");
        BigRational::from_integer(n)
    }

    fn elem_to_string(&self, a: &BigRational) -> String {
        alloc::format!("{a}")
    }

    fn normalize_row(&self, row: &mut [BigRational]) {
        // Scale by lcm(denominators)/gcd(numerators) so entries become
        // coprime integers; flip signs so the leading entry is positive.
        let mut den_lcm = BigInt::one();
        let mut num_gcd = BigInt::zero();
        for e in row.iter() {
            if !e.is_zero() {
                den_lcm = den_lcm.lcm(e.denom());
                num_gcd = num_gcd.gcd(e.numer());
            }
        }
        if num_gcd.is_zero() {
            return; // all-zero row
        }
        let scale = BigRational::new(den_lcm, num_gcd);
        let mut flip = false;
        let mut seen_nonzero = false;
        for e in row.iter_mut() {
            if !e.is_zero() {
                *e *= &scale;
                if !seen_nonzero {
                    seen_nonzero = true;
                    flip = e.is_negative();
                }
                if flip {
                    *e = -&*e;
                }
            }
        }
    }

    fn full_col_rank_certificate(
        &self,
        entries: &[BigRational],
        rows: usize,
        cols: usize,
    ) -> Option<bool> {
        // Full rank of the reduction mod p lifts to full rank over the
        // rationals (a nonzero maximal minor mod p is nonzero in Z). The
        // converse direction is not certified here.
        const P: u64 = 2_147_483_647; // 2^31 - 1, prime
        if rows < cols {
            return Some(false);
        }
        let mut m = Vec::with_capacity(rows);
        for r in 0..rows {
            let row = &entries[r * cols..(r + 1) * cols];
            let mut den_lcm = BigInt::one();
            for e in row {
                if !e.is_zero() {
                    den_lcm = den_lcm.lcm(e.denom());
                }
            }
            let mut out = Vec::with_capacity(cols);
            for e in row {
                let scaled = (&den_lcm / e.denom()) * e.numer();
                out.push(bigint_mod_u64(&scaled, P));
            }
            m.push(out);
        }
        if rank_mod_p(&mut m, cols, P) == cols {
            Some(true)
        } else {
            None
        }
    }
}

fn bigint_mod_u64(n: &BigInt, p: u64) -> u64 {
    let r = (n % BigInt::from(p)).to_u64_digits();
    let mag = *r.1.first().unwrap_or(&0);
    match r.0 {
        Sign::Minus => (p - mag) % p,
        _ => mag % p,
    }
}

fn rank_mod_p(m: &mut [Vec<u64>], cols: usize, p: u64) -> usize {
    let rows = m.len();
    let mut rank = 0usize;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = mod_pow(m[rank][c], p - 2, p);
        for j in c..cols {
            m[rank][j] = mod_mul(m[rank][j], inv, p);
        }
        for r in 0..rows {
            if r != rank && m[r][c] != 0 {
                let factor = m[r][c];
                for j in c..cols {
                    let t = mod_mul(factor, m[rank][j], p);
                    m[r][j] = (m[r][j] + p - t) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[inline]
fn mod_mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mod_mul(acc, base, p);
        }
        base = mod_mul(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, sufficient for all n < 3,215,031,751.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7] {
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mod_mul(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A prime field F_p with p an odd prime below 2^31.
///
/// Elements are canonical representatives in `[0, p)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p >= 1 << 31 {
            return Err(FieldError::ModulusTooLarge(p));
        }
        if !is_prime_u64(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn element(&self, n: i64) -> u64 {
        self.from_i64(n)
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

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }

    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mod_mul(*a, *b, self.p)
    }

    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }

    fn inv(&self, a: &u64) -> Result<u64, DivisionByZero> {
        if *a == 0 {
            Err(DivisionByZero)
        } else {
            Ok(mod_pow(*a, self.p - 2, self.p))
        }
    }

    fn characteristic(&self) -> u64 {
        self.p
    }

    fn from_i64(&self, n: i64) -> u64 {
        let r = n.rem_euclid(self.p as i64);
        r as u64
    }

    fn from_decimal(&self, digits: &str) -> u64 {
        let mut acc = 0u64;
        for c in digits.bytes() {
            debug_assert!(c.is_ascii_digit());
            acc = (mod_mul(acc, 10, self.p) + (c - b'0') as u64) % self.p;
        }
        acc
    }

    fn elem_to_string(&self, a: &u64) -> String {
        alloc::format!("{a}")
    }
}

/// Reduce a rational to F_p. Fails when the denominator vanishes mod p.
pub fn rational_mod_p(x: &BigRational, fp: &PrimeField) -> Result<u64, DivisionByZero> {
    let p = fp.modulus();
    let num = bigint_mod_u64(x.numer(), p);
    let den = bigint_mod_u64(x.denom(), p);
    fp.div(&num, &den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_canonical_form() {
        let q = Rationals;
        let x = q.div(&q.from_i64(4), &q.from_i64(-6)).unwrap();
        // lowest terms, positive denominator
        assert_eq!(x.numer(), &BigInt::from(-2));
        assert_eq!(x.denom(), &BigInt::from(3));
        assert_eq!(q.elem_to_string(&x), "-2/3");
    }

    #[test]
    fn rational_division_by_zero_reported() {
        let q = Rationals;
        assert_eq!(q.inv(&q.zero()), Err(DivisionByZero));
    }

    #[test]
    fn prime_field_construction() {
        assert!(PrimeField::new(2).is_ok());
        assert!(PrimeField::new(1_000_003).is_ok());
        assert_eq!(PrimeField::new(1), Err(FieldError::NotPrime(1)));
        assert_eq!(PrimeField::new(91), Err(FieldError::NotPrime(91)));
        assert_eq!(
            PrimeField::new(1 << 31),
            Err(FieldError::ModulusTooLarge(1 << 31))
        );
        // 2^31 - 1 is prime and in range
        assert!(PrimeField::new(2_147_483_647).is_ok());
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.from_i64(-1), 6);
        assert_eq!(f.add(&5, &4), 2);
        assert_eq!(f.mul(&5, &4), 6);
        let inv3 = f.inv(&3).unwrap();
        assert_eq!(f.mul(&3, &inv3), 1);
        assert_eq!(f.inv(&0), Err(DivisionByZero));
        assert_eq!(f.from_decimal("123456789"), 123456789 % 7);
    }

    #[test]
    fn normalize_row_makes_coprime_integers() {
        let q = Rationals;
        let mut row = [
            BigRational::new(BigInt::from(-2), BigInt::from(3)),
            q.zero(),
            BigRational::new(BigInt::from(4), BigInt::from(9)),
        ];
        q.normalize_row(&mut row);
        assert_eq!(row[0], q.from_i64(3));
        assert_eq!(row[1], q.zero());
        assert_eq!(row[2], q.from_i64(-2));
    }

    #[test]
    fn rational_mod_p_roundtrip() {
        let q = Rationals;
        let fp = PrimeField::new(101).unwrap();
        let x = q.div(&q.from_i64(7), &q.from_i64(3)).unwrap();
        let r = rational_mod_p(&x, &fp).unwrap();
        assert_eq!(fp.mul(&r, &3), 7);
        // denominator divisible by p is not representable
        let bad = q.div(&q.from_i64(1), &q.from_i64(101)).unwrap();
        assert_eq!(rational_mod_p(&bad, &fp), Err(DivisionByZero));
    }
}
