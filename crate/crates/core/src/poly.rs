//! Sparse homogeneous polynomials and linear coordinate changes.
//!
//! Polynomials live in a fixed number of variables `x_0, ..., x_n` over an
//! exact field; every stored term has the declared total degree and a nonzero
//! coefficient. The zero polynomial keeps an explicit degree so that graded
//! contexts stay well-typed. Monomials are ordered by graded lexicographic
//! order with `x_0 > x_1 > ... > x_n`; all coefficient vectors and displayed
//! forms follow that order, largest monomial first.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::field::Field;
use crate::linalg::ScalarMatrix;

/// Errors from polynomial-level operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolyError {
    VariableCountMismatch { expected: usize, found: usize },
    DegreeMismatch { expected: u32, found: u32 },
    LengthMismatch { expected: usize, found: usize },
    /// F_p coefficients require p > degree of the polynomial.
    CharacteristicTooSmall { p: u64, degree: u32 },
    /// Euler identity is unavailable when the characteristic divides the degree.
    CharacteristicDividesDegree { p: u64, degree: u32 },
    SingularChange,
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyError::VariableCountMismatch { expected, found } => {
                write!(f, "expected {expected} variables, found {found}")
            }
            PolyError::DegreeMismatch { expected, found } => {
                write!(f, "expected degree {expected}, found degree {found}")
            }
            PolyError::LengthMismatch { expected, found } => {
                write!(f, "expected vector of length {expected}, found {found}")
            }
            PolyError::CharacteristicTooSmall { p, degree } => {
                write!(f, "characteristic {p} does not exceed polynomial degree {degree}")
            }
            PolyError::CharacteristicDividesDegree { p, degree } => {
                write!(f, "characteristic {p} divides polynomial degree {degree}")
            }
            PolyError::SingularChange => write!(f, "coordinate change matrix is singular"),
        }
    }
}

impl core::error::Error for PolyError {}

/// A monomial in a fixed set of variables, with cached total degree.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
    degree: u32,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        let degree = exps.iter().sum();
        Monomial { exps, degree }
    }

    pub fn one(n_vars: usize) -> Self {
        Monomial {
            exps: vec![0; n_vars],
            degree: 0,
        }
    }

    pub fn var(n_vars: usize, i: usize) -> Self {
        let mut exps = vec![0; n_vars];
        exps[i] = 1;
        Monomial { exps, degree: 1 }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn n_vars(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.exps[i]
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| a + b)
            .collect();
        Monomial::new(exps)
    }
}

impl Ord for Monomial {
    /// Graded lexicographic with `x_0 > x_1 > ...`; `Greater` means larger
    /// in the monomial order.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials of total degree `d` in `n_vars` variables, in descending
/// monomial order (so `x_0^d` comes first).
pub fn monomials_of_degree(n_vars: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut current = vec![0u32; n_vars];
    fn rec(out: &mut Vec<Monomial>, current: &mut Vec<u32>, pos: usize, rem: u32) {
        if pos + 1 == current.len() {
            current[pos] = rem;
            out.push(Monomial::new(current.clone()));
            return;
        }
        for e in (0..=rem).rev() {
            current[pos] = e;
            rec(out, current, pos + 1, rem - e);
        }
        current[pos] = 0;
    }
    if n_vars == 0 {
        return out;
    }
    rec(&mut out, &mut current, 0, d);
    out
}

/// Dimension of the space of degree-`d` forms in `n_vars` variables.
pub fn graded_dim(n_vars: usize, d: u32) -> usize {
    // C(d + n_vars - 1, n_vars - 1)
    if n_vars == 0 {
        return 0;
    }
    let n = d as u128 + n_vars as u128 - 1;
    let k = n_vars as u128 - 1;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc as usize
}

/// A homogeneous polynomial: sparse term map from monomials to nonzero
/// coefficients, all of one total degree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HomPoly<F: Field> {
    field: F,
    n_vars: usize,
    degree: u32,
    terms: BTreeMap<Monomial, F::Elem>,
}

impl<F: Field> HomPoly<F> {
    /// The zero polynomial of the declared degree.
    pub fn zero(field: F, n_vars: usize, degree: u32) -> Self {
        HomPoly {
            field,
            n_vars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// Build from terms, checking homogeneity and the field restriction
    /// (characteristic must exceed the degree when positive). Duplicate
    /// monomials are summed; zero coefficients dropped.
    pub fn from_terms(
        field: F,
        n_vars: usize,
        degree: u32,
        terms: Vec<(Monomial, F::Elem)>,
    ) -> Result<Self, PolyError> {
        let p = field.characteristic();
        if p > 0 && (degree as u64) >= p {
            return Err(PolyError::CharacteristicTooSmall { p, degree });
        }
        let mut poly = Self::zero(field, n_vars, degree);
        for (m, c) in terms {
            if m.n_vars() != n_vars {
                return Err(PolyError::VariableCountMismatch {
                    expected: n_vars,
                    found: m.n_vars(),
                });
            }
            if m.degree() != degree {
                return Err(PolyError::DegreeMismatch {
                    expected: degree,
                    found: m.degree(),
                });
            }
            poly.add_term(m, c);
        }
        Ok(poly)
    }

    /// Internal constructor without the characteristic restriction; products
    /// built during rank computations may exceed the input-degree bound.
    pub(crate) fn from_terms_raw(
        field: F,
        n_vars: usize,
        degree: u32,
        terms: Vec<(Monomial, F::Elem)>,
    ) -> Self {
        let mut poly = Self::zero(field, n_vars, degree);
        for (m, c) in terms {
            debug_assert_eq!(m.n_vars(), n_vars);
            debug_assert_eq!(m.degree(), degree);
            poly.add_term(m, c);
        }
        poly
    }

    fn add_term(&mut self, m: Monomial, c: F::Elem) {
        if self.field.is_zero(&c) {
            return;
        }
        match self.terms.entry(m) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = self.field.add(e.get(), &c);
                if self.field.is_zero(&sum) {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F::Elem)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, m: &Monomial) -> F::Elem {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    /// True when the coefficient field has characteristic 0 or exceeding the
    /// degree; analysis entry points require this.
    pub fn char_ok(&self) -> bool {
        let p = self.field.characteristic();
        p == 0 || (self.degree as u64) < p
    }

    fn assert_compatible(&self, other: &Self) {
        assert_eq!(self.field, other.field, "mixed coefficient fields");
        assert_eq!(self.n_vars, other.n_vars, "mixed variable counts");
    }

    /// Sum of two polynomials of the same degree.
    pub fn add(&self, other: &Self) -> Self {
        self.assert_compatible(other);
        assert_eq!(self.degree, other.degree, "mixed degrees in add");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = self.field.neg(c);
        }
        out
    }

    pub fn scale(&self, s: &F::Elem) -> Self {
        if self.field.is_zero(s) {
            return Self::zero(self.field.clone(), self.n_vars, self.degree);
        }
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = self.field.mul(c, s);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.assert_compatible(other);
        let mut out = Self::zero(
            self.field.clone(),
            self.n_vars,
            self.degree + other.degree,
        );
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), self.field.mul(c1, c2));
            }
        }
        out
    }

    /// Partial derivative with respect to variable `i`. Exponents that are
    /// multiples of the characteristic annihilate, as they must.
    pub fn partial_derivative(&self, i: usize) -> Self {
        assert!(i < self.n_vars, "variable index out of range");
        let deg = self.degree.saturating_sub(1);
        let mut out = Self::zero(self.field.clone(), self.n_vars, deg);
        for (m, c) in &self.terms {
            let e = m.exp(i);
            if e == 0 {
                continue;
            }
            let mut exps = m.exps().to_vec();
            exps[i] -= 1;
            let coeff = self.field.mul(c, &self.field.from_i64(e as i64));
            out.add_term(Monomial::new(exps), coeff);
        }
        out
    }

    /// All n+1 partial derivatives, in variable order.
    pub fn partials(&self) -> Vec<Self> {
        (0..self.n_vars).map(|i| self.partial_derivative(i)).collect()
    }

    /// Symmetric matrix of second partials, entry (i, j) of degree k-2.
    pub fn hessian(&self) -> Vec<Vec<Self>> {
        let firsts = self.partials();
        (0..self.n_vars)
            .map(|i| {
                (0..self.n_vars)
                    .map(|j| firsts[i].partial_derivative(j))
                    .collect()
            })
            .collect()
    }

    /// Euler operator: sum of x_i * df/dx_i, which equals degree * f when the
    /// characteristic does not divide the degree.
    pub fn euler_apply(&self) -> Result<Self, PolyError> {
        let p = self.field.characteristic();
        if p > 0 && (self.degree as u64) % p == 0 {
            return Err(PolyError::CharacteristicDividesDegree {
                p,
                degree: self.degree,
            });
        }
        let mut out = Self::zero(self.field.clone(), self.n_vars, self.degree);
        for i in 0..self.n_vars {
            let d = self.partial_derivative(i);
            for (m, c) in &d.terms {
                let mut exps = m.exps().to_vec();
                exps[i] += 1;
                out.add_term(Monomial::new(exps), c.clone());
            }
        }
        Ok(out)
    }

    /// Coefficients along the fixed monomial order of the degree-`d` graded
    /// piece. `d` must equal the polynomial's degree.
    pub fn coeff_vector(&self, d: u32) -> Result<Vec<F::Elem>, PolyError> {
        if d != self.degree {
            return Err(PolyError::DegreeMismatch {
                expected: self.degree,
                found: d,
            });
        }
        Ok(monomials_of_degree(self.n_vars, d)
            .iter()
            .map(|m| self.coeff(m))
            .collect())
    }

    /// Inverse of [`HomPoly::coeff_vector`].
    pub fn from_coeff_vector(
        field: F,
        n_vars: usize,
        d: u32,
        coeffs: &[F::Elem],
    ) -> Result<Self, PolyError> {
        let basis = monomials_of_degree(n_vars, d);
        if coeffs.len() != basis.len() {
            return Err(PolyError::LengthMismatch {
                expected: basis.len(),
                found: coeffs.len(),
            });
        }
        let mut out = Self::zero(field, n_vars, d);
        for (m, c) in basis.into_iter().zip(coeffs) {
            out.add_term(m, c.clone());
        }
        Ok(out)
    }

    /// Substitute `x_j <- sum_i A[j][i] X_i` for the matrix of the change.
    pub fn substitute(&self, change: &CoordinateChange<F>) -> Result<Self, PolyError> {
        self.substitute_matrix(change.matrix())
    }

    pub(crate) fn substitute_matrix(&self, a: &ScalarMatrix<F>) -> Result<Self, PolyError> {
        if a.rows() != self.n_vars || a.cols() != self.n_vars {
            return Err(PolyError::VariableCountMismatch {
                expected: self.n_vars,
                found: a.rows(),
            });
        }
        let f = &self.field;
        // linear form replacing x_j, and its powers as needed
        let mut linear_forms: Vec<HomPoly<F>> = Vec::with_capacity(self.n_vars);
        for j in 0..self.n_vars {
            let mut lf = Self::zero(f.clone(), self.n_vars, 1);
            for i in 0..self.n_vars {
                lf.add_term(Monomial::var(self.n_vars, i), a.at(j, i).clone());
            }
            linear_forms.push(lf);
        }
        let mut powers: Vec<Vec<HomPoly<F>>> = linear_forms
            .iter()
            .map(|lf| vec![Self::constant_one(f.clone(), self.n_vars), lf.clone()])
            .collect();
        let mut out = Self::zero(f.clone(), self.n_vars, self.degree);
        for (m, c) in &self.terms {
            let mut acc = Self::constant_one(f.clone(), self.n_vars).scale(c);
            for j in 0..self.n_vars {
                let e = m.exp(j) as usize;
                if e == 0 {
                    continue;
                }
                while powers[j].len() <= e {
                    let next = powers[j].last().unwrap().mul(&linear_forms[j]);
                    powers[j].push(next);
                }
                acc = acc.mul(&powers[j][e]);
            }
            out = out.add(&acc);
        }
        Ok(out)
    }

    fn constant_one(field: F, n_vars: usize) -> Self {
        let one = field.one();
        let mut p = Self::zero(field, n_vars, 0);
        p.add_term(Monomial::one(n_vars), one);
        p
    }

    /// Indices of variables that actually appear.
    pub fn support_vars(&self) -> Vec<usize> {
        let mut seen = vec![false; self.n_vars];
        for m in self.terms.keys() {
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    seen[i] = true;
                }
            }
        }
        seen.iter()
            .enumerate()
            .filter_map(|(i, &s)| s.then_some(i))
            .collect()
    }

    /// Render with explicit variable names (one per variable).
    pub fn format_with(&self, names: &[&str]) -> String {
        assert_eq!(names.len(), self.n_vars, "one name per variable");
        if self.terms.is_empty() {
            return String::from("0");
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms().enumerate() {
            let s = self.field.elem_to_string(c);
            let (neg, mag) = match s.strip_prefix('-') {
                Some(rest) => (true, String::from(rest)),
                None => (false, s),
            };
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if mag != "1" || m.degree() == 0 {
                factors.push(mag);
            }
            for (i, &e) in m.exps().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(String::from(names[i])),
                    _ => factors.push(alloc::format!("{}^{}", names[i], e)),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }

    /// Default variable names: x, y, z, w for up to four variables, x0..xn
    /// beyond that.
    pub fn default_names(n_vars: usize) -> Vec<String> {
        if n_vars <= 4 {
            ["x", "y", "z", "w"][..n_vars]
                .iter()
                .map(|s| String::from(*s))
                .collect()
        } else {
            (0..n_vars).map(|i| alloc::format!("x{i}")).collect()
        }
    }
}

impl<F: Field> fmt::Display for HomPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = Self::default_names(self.n_vars);
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        f.write_str(&self.format_with(&refs))
    }
}

/// An invertible linear change of coordinates on the variables, with the
/// exact inverse cached at construction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoordinateChange<F: Field> {
    matrix: ScalarMatrix<F>,
    inverse: ScalarMatrix<F>,
}

impl<F: Field> CoordinateChange<F> {
    /// Construction fails on non-square or singular input.
    pub fn new(matrix: ScalarMatrix<F>) -> Result<Self, PolyError> {
        if matrix.rows() != matrix.cols() {
            return Err(PolyError::SingularChange);
        }
        let inverse = matrix.inverse().ok_or(PolyError::SingularChange)?;
        Ok(CoordinateChange { matrix, inverse })
    }

    pub fn identity(field: F, n: usize) -> Self {
        let id = ScalarMatrix::identity(field, n);
        CoordinateChange {
            matrix: id.clone(),
            inverse: id,
        }
    }

    pub fn size(&self) -> usize {
        self.matrix.rows()
    }

    pub fn field(&self) -> &F {
        self.matrix.field()
    }

    pub fn matrix(&self) -> &ScalarMatrix<F> {
        &self.matrix
    }

    pub fn inverse_matrix(&self) -> &ScalarMatrix<F> {
        &self.inverse
    }

    /// The change applying `self` first and `other` second:
    /// `f.substitute(&a.compose(&b)) == f.substitute(&a).substitute(&b)`.
    pub fn compose(&self, other: &Self) -> Self {
        CoordinateChange {
            matrix: self.matrix.mul_matrix(&other.matrix),
            inverse: other.inverse.mul_matrix(&self.inverse),
        }
    }

    pub fn inverted(&self) -> Self {
        CoordinateChange {
            matrix: self.inverse.clone(),
            inverse: self.matrix.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        Rationals.from_i64(n)
    }

    fn mono(exps: &[u32]) -> Monomial {
        Monomial::new(exps.to_vec())
    }

    fn p(terms: &[(&[u32], i64)]) -> HomPoly<Rationals> {
        let n = terms[0].0.len();
        let d = terms[0].0.iter().sum();
        HomPoly::from_terms(
            Rationals,
            n,
            d,
            terms.iter().map(|(e, c)| (mono(e), q(*c))).collect(),
        )
        .unwrap()
    }

    fn fermat() -> HomPoly<Rationals> {
        p(&[(&[3, 0, 0], 1), (&[0, 3, 0], 1), (&[0, 0, 3], 1)])
    }

    #[test]
    fn monomial_order_is_graded_lex() {
        // x^2 > x*y > y^2 in two variables
        let x2 = mono(&[2, 0]);
        let xy = mono(&[1, 1]);
        let y2 = mono(&[0, 2]);
        assert!(x2 > xy && xy > y2);
        let order = monomials_of_degree(2, 2);
        assert_eq!(order, vec![x2, xy, y2]);
        assert_eq!(graded_dim(3, 3), 10);
        assert_eq!(monomials_of_degree(3, 3).len(), 10);
    }

    #[test]
    fn derivative_examples() {
        let d = fermat().partial_derivative(0);
        assert_eq!(d, p(&[(&[2, 0, 0], 3)]));
        // d/dy (x^3) = 0, a degree-2 zero polynomial
        let x3 = p(&[(&[3, 0, 0], 1)]);
        let dy = x3.partial_derivative(1);
        assert!(dy.is_zero());
        assert_eq!(dy.degree(), 2);
        // d/dx (x^2 y) = 2 x y
        let d = p(&[(&[2, 1], 1)]).partial_derivative(0);
        assert_eq!(d, p(&[(&[1, 1], 2)]));
    }

    #[test]
    fn mixed_partials_commute() {
        let f = p(&[(&[2, 1, 1], 3), (&[1, 2, 1], -2), (&[0, 0, 4], 5)]);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(
                    f.partial_derivative(i).partial_derivative(j),
                    f.partial_derivative(j).partial_derivative(i)
                );
            }
        }
    }

    #[test]
    fn hessian_examples() {
        let h = fermat().hessian();
        assert_eq!(h[0][0], p(&[(&[1, 0, 0], 6)]));
        assert_eq!(h[1][1], p(&[(&[0, 1, 0], 6)]));
        assert!(h[0][1].is_zero() && h[0][2].is_zero() && h[1][2].is_zero());
        let h = p(&[(&[1, 1, 1], 1)]).hessian();
        assert!(h[0][0].is_zero());
        assert_eq!(h[0][1], p(&[(&[0, 0, 1], 1)]));
        assert_eq!(h[1][2], p(&[(&[1, 0, 0], 1)]));
    }

    #[test]
    fn coeff_vector_examples() {
        // x^2 + 2y^2 along x^2 > xy > y^2 is (1, 0, 2)
        let f = p(&[(&[2, 0], 1), (&[0, 2], 2)]);
        assert_eq!(f.coeff_vector(2).unwrap(), vec![q(1), q(0), q(2)]);
        let z = HomPoly::zero(Rationals, 2, 3);
        assert_eq!(z.coeff_vector(3).unwrap(), vec![q(0); 4]);
        assert!(matches!(
            f.coeff_vector(3),
            Err(PolyError::DegreeMismatch { .. })
        ));
        // round trip
        let g = p(&[(&[4, 0, 0], 2), (&[1, 2, 1], -3), (&[0, 1, 3], 1), (&[2, 2, 0], 7), (&[0, 0, 4], -1)]);
        let v = g.coeff_vector(4).unwrap();
        assert_eq!(HomPoly::from_coeff_vector(Rationals, 3, 4, &v).unwrap(), g);
    }

    #[test]
    fn euler_identity() {
        for f in [fermat(), p(&[(&[1, 1, 1], 1)]), p(&[(&[2, 2, 0], 1)])] {
            let k = f.degree() as i64;
            assert_eq!(f.euler_apply().unwrap(), f.scale(&q(k)));
        }
    }

    #[test]
    fn substitute_examples() {
        let x2 = p(&[(&[2, 0], 1)]);
        let id = CoordinateChange::identity(Rationals, 2);
        assert_eq!(x2.substitute(&id).unwrap(), x2);
        // swap x <-> y fixes xy
        let swap = CoordinateChange::new(ScalarMatrix::from_rows(
            Rationals,
            vec![vec![q(0), q(1)], vec![q(1), q(0)]],
        ))
        .unwrap();
        let xy = p(&[(&[1, 1], 1)]);
        assert_eq!(xy.substitute(&swap).unwrap(), xy);
        // shear x -> X + Y turns x^2 into X^2 + 2XY + Y^2
        let shear = CoordinateChange::new(ScalarMatrix::from_rows(
            Rationals,
            vec![vec![q(1), q(1)], vec![q(0), q(1)]],
        ))
        .unwrap();
        assert_eq!(
            x2.substitute(&shear).unwrap(),
            p(&[(&[2, 0], 1), (&[1, 1], 2), (&[0, 2], 1)])
        );
    }

    #[test]
    fn substitute_composes_and_inverts() {
        let f = p(&[(&[2, 1, 0], 3), (&[0, 1, 2], -1), (&[1, 1, 1], 2)]);
        let a = CoordinateChange::new(ScalarMatrix::from_rows(
            Rationals,
            vec![
                vec![q(1), q(2), q(0)],
                vec![q(0), q(1), q(-1)],
                vec![q(1), q(0), q(1)],
            ],
        ))
        .unwrap();
        let b = CoordinateChange::new(ScalarMatrix::from_rows(
            Rationals,
            vec![
                vec![q(2), q(0), q(1)],
                vec![q(1), q(1), q(0)],
                vec![q(0), q(0), q(1)],
            ],
        ))
        .unwrap();
        let via_compose = f.substitute(&a.compose(&b)).unwrap();
        let stepwise = f.substitute(&a).unwrap().substitute(&b).unwrap();
        assert_eq!(via_compose, stepwise);
        let back = f.substitute(&a).unwrap().substitute(&a.inverted()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn display_is_canonical() {
        assert_eq!(fermat().format_with(&["x", "y", "z"]), "x^3 + y^3 + z^3");
        let f = p(&[(&[2, 1], -1), (&[0, 3], 2)]);
        assert_eq!(f.format_with(&["x", "y"]), "-x^2*y + 2*y^3");
        let half = HomPoly::from_terms(
            Rationals,
            2,
            1,
            vec![(mono(&[1, 0]), BigRational::new(1.into(), 2.into()))],
        )
        .unwrap();
        assert_eq!(half.format_with(&["x", "y"]), "1/2*x");
        assert_eq!(HomPoly::zero(Rationals, 2, 3).format_with(&["x", "y"]), "0");
    }

    #[test]
    fn prime_field_degree_restriction() {
        let f5 = PrimeField::new(5).unwrap();
        let ok = HomPoly::from_terms(f5, 2, 4, vec![(mono(&[4, 0]), 1u64)]);
        assert!(ok.is_ok());
        let bad = HomPoly::from_terms(f5, 2, 5, vec![(mono(&[5, 0]), 1u64)]);
        assert!(matches!(
            bad,
            Err(PolyError::CharacteristicTooSmall { p: 5, degree: 5 })
        ));
        // characteristic annihilates exponent multiples of p
        let f = HomPoly::from_terms(PrimeField::new(5).unwrap(), 2, 4, vec![(mono(&[4, 0]), 1u64)])
            .unwrap();
        let d = f.partial_derivative(0);
        assert_eq!(d.coeff(&mono(&[3, 0])), 4);
    }

    #[test]
    fn euler_rejected_when_char_divides_degree() {
        let f7 = PrimeField::new(7).unwrap();
        let c = HomPoly::zero(f7, 2, 0);
        assert!(matches!(
            c.euler_apply(),
            Err(PolyError::CharacteristicDividesDegree { .. })
        ));
    }
}
