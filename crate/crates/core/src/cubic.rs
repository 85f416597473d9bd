//! Smooth plane cubics: the j = 0 predicate and its agreement with the
//! Sebastiani-Thom detector.
//!
//! A smooth plane cubic has vanishing j-invariant exactly when it is
//! projectively equivalent to the Fermat cubic, which is also exactly the
//! Sebastiani-Thom case in degree 3. Instead of transcribing a classical
//! 25-term formula, the degree-4 invariant of ternary cubics is derived once
//! at run time as the one-dimensional kernel of the trace-zero 3x3 Lie
//! algebra action on quartic polynomials in the 10 cubic coefficients; only
//! the vanishing of the invariant is ever used, which makes the predicate
//! independent of any normalization convention.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use once_cell::race::OnceBox;

use crate::field::{Field, Rationals};
use crate::jacobi::{self, JacobiError};
use crate::linalg::ScalarMatrix;
use crate::poly::{monomials_of_degree, HomPoly, Monomial};
use crate::sebastiani::{self, SebastianiError, StVerdict};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CubicError {
    /// Input must be a cubic form in exactly three variables.
    NotTernaryCubic { n_vars: usize, degree: u32 },
    /// The j-invariant predicate is stated for smooth cubics.
    NotSmooth,
    Jacobi(JacobiError),
    Sebastiani(SebastianiError),
}

impl fmt::Display for CubicError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CubicError::NotTernaryCubic { n_vars, degree } => write!(
                f,
                "expected a ternary cubic, found degree {degree} in {n_vars} variables"
            ),
            CubicError::NotSmooth => {
                write!(f, "singular cubic: j-invariant predicate needs smoothness")
            }
            CubicError::Jacobi(e) => write!(f, "{e}"),
            CubicError::Sebastiani(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for CubicError {}

impl From<JacobiError> for CubicError {
    fn from(e: JacobiError) -> Self {
        CubicError::Jacobi(e)
    }
}

impl From<SebastianiError> for CubicError {
    fn from(e: SebastianiError) -> Self {
        match e {
            SebastianiError::NotSmooth => CubicError::NotSmooth,
            other => CubicError::Sebastiani(other),
        }
    }
}

/// A degree-4 polynomial in the 10 coefficients of a ternary cubic, stored
/// as (sorted index multiset, coefficient) with indices into the descending
/// monomial basis of the degree-3 graded piece.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantPoly {
    pub terms: Vec<([usize; 4], BigRational)>,
}

impl InvariantPoly {
    /// Evaluate at a cubic coefficient vector (length 10, descending
    /// monomial order).
    pub fn evaluate(&self, coeffs: &[BigRational]) -> BigRational {
        assert_eq!(coeffs.len(), 10, "ternary cubics have 10 coefficients");
        let mut acc = BigRational::zero();
        for (idx, c) in &self.terms {
            let mut term = c.clone();
            for &i in idx {
                if coeffs[i].is_zero() {
                    term = BigRational::zero();
                    break;
                }
                term *= &coeffs[i];
            }
            acc += term;
        }
        acc
    }
}

/// The 10x10 integer matrix of a derivation sum_c c * x_a d/dx_b acting on
/// cubic coefficients: entry [target][source].
fn rho_matrix(ops: &[(usize, usize, i64)], basis: &[Monomial]) -> Vec<Vec<i64>> {
    let index_of =
        |m: &Monomial| -> usize { basis.iter().position(|b| b == m).expect("cubic monomial") };
    let mut rho = vec![vec![0i64; 10]; 10];
    for (s, m) in basis.iter().enumerate() {
        for &(a, b, c) in ops {
            let e = m.exp(b);
            if e == 0 {
                continue;
            }
            let mut exps = m.exps().to_vec();
            exps[b] -= 1;
            exps[a] += 1;
            let t = index_of(&Monomial::new(exps));
            rho[t][s] += c * e as i64;
        }
    }
    rho
}

/// All degree-4 coefficient monomials of total weight (4,4,4).
fn weight_balanced_multisets(basis: &[Monomial]) -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for i in 0..10 {
        for j in i..10 {
            for k in j..10 {
                for l in k..10 {
                    let mut w = [0u32; 3];
                    for idx in [i, j, k, l] {
                        for v in 0..3 {
                            w[v] += basis[idx].exp(v);
                        }
                    }
                    if w == [4, 4, 4] {
                        out.push([i, j, k, l]);
                    }
                }
            }
        }
    }
    out
}

/// Rows of the annihilation condition of one operator on the span of the
/// given multisets, keyed by target monomial.
fn operator_rows(rho: &[Vec<i64>], unknowns: &[[usize; 4]]) -> Vec<Vec<BigRational>> {
    let q = Rationals;
    let mut by_target: BTreeMap<[usize; 4], BTreeMap<usize, i64>> = BTreeMap::new();
    for (u, tuple) in unknowns.iter().enumerate() {
        for pos in 0..4 {
            let s = tuple[pos];
            for (t, row) in rho.iter().enumerate() {
                let c = row[s];
                if c == 0 {
                    continue;
                }
                let mut next = *tuple;
                next[pos] = t;
                next.sort_unstable();
                *by_target.entry(next).or_default().entry(u).or_insert(0) += c;
            }
        }
    }
    by_target
        .into_values()
        .map(|coeffs| {
            let mut row = vec![q.zero(); unknowns.len()];
            for (u, c) in coeffs {
                row[u] = q.from_i64(c);
            }
            row
        })
        .filter(|row| row.iter().any(|c| !c.is_zero()))
        .collect()
}

/// Derive the degree-4 invariant of ternary cubics as the kernel of the
/// eight trace-zero Lie algebra operators. The kernel must be exactly
/// one-dimensional; anything else aborts, since every later answer would be
/// meaningless. `reverse_constraint_order` feeds the constraint rows in the
/// opposite order, for reproducibility checks.
pub fn derive_invariant_uncached(reverse_constraint_order: bool) -> InvariantPoly {
    let basis = monomials_of_degree(3, 3);
    let unknowns = weight_balanced_multisets(&basis);
    let operators: [&[(usize, usize, i64)]; 8] = [
        &[(0, 1, 1)],
        &[(0, 2, 1)],
        &[(1, 0, 1)],
        &[(1, 2, 1)],
        &[(2, 0, 1)],
        &[(2, 1, 1)],
        &[(0, 0, 1), (1, 1, -1)],
        &[(1, 1, 1), (2, 2, -1)],
    ];
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for ops in operators {
        rows.extend(operator_rows(&rho_matrix(ops, &basis), &unknowns));
    }
    if reverse_constraint_order {
        rows.reverse();
    }
    let kernel = ScalarMatrix::from_rows(Rationals, rows).kernel();
    assert_eq!(
        kernel.dim(),
        1,
        "internal consistency failure: the degree-4 invariant space of ternary \
         cubics must be one-dimensional"
    );
    let coeffs = kernel.basis_vectors().remove(0);
    let terms = unknowns
        .into_iter()
        .zip(coeffs)
        .filter(|(_, c)| !c.is_zero())
        .collect();
    InvariantPoly { terms }
}

static INVARIANT: OnceBox<InvariantPoly> = OnceBox::new();

/// The cached invariant, derived on first use (single initialization).
pub fn derive_invariant() -> &'static InvariantPoly {
    INVARIANT.get_or_init(|| Box::new(derive_invariant_uncached(false)))
}

/// A ternary cubic's coefficient vector together with the value of the
/// degree-4 invariant at it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TernaryCubicInvariant {
    pub coefficients: Vec<BigRational>,
    pub s_value: BigRational,
}

impl TernaryCubicInvariant {
    pub fn of(f: &HomPoly<Rationals>) -> Result<Self, CubicError> {
        if f.n_vars() != 3 || f.degree() != 3 {
            return Err(CubicError::NotTernaryCubic {
                n_vars: f.n_vars(),
                degree: f.degree(),
            });
        }
        let coefficients = f.coeff_vector(3).expect("checked degree");
        let s_value = derive_invariant().evaluate(&coefficients);
        Ok(TernaryCubicInvariant {
            coefficients,
            s_value,
        })
    }
}

/// Whether the j-invariant of a smooth plane cubic vanishes. Singular or
/// non-cubic input is unsupported.
pub fn j_is_zero(f: &HomPoly<Rationals>) -> Result<bool, CubicError> {
    let inv = TernaryCubicInvariant::of(f)?;
    if !jacobi::is_smooth(f)? {
        return Err(CubicError::NotSmooth);
    }
    Ok(inv.s_value.is_zero())
}

/// Both routes on one smooth cubic: the ST detector and the j = 0 predicate
/// must agree; a disagreement falsifies the implementation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorollaryRecord {
    pub st: bool,
    pub st_space_dim: usize,
    pub j_zero: bool,
    pub agree: bool,
}

pub fn corollary_check(f: &HomPoly<Rationals>) -> Result<CorollaryRecord, CubicError> {
    let j_zero = j_is_zero(f)?;
    let report = sebastiani::is_st(f)?;
    let st = report.verdict == StVerdict::St;
    Ok(CorollaryRecord {
        st,
        st_space_dim: report.st_space_dim,
        j_zero,
        agree: st == j_zero,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::poly::CoordinateChange;

    fn qp(text: &str) -> HomPoly<Rationals> {
        parse_poly(text, &["x", "y", "z"], Rationals).unwrap()
    }

    #[test]
    fn derivation_is_reproducible_across_row_orders() {
        let a = derive_invariant_uncached(false);
        let b = derive_invariant_uncached(true);
        assert_eq!(a, b);
        assert!(!a.terms.is_empty());
    }

    #[test]
    fn invariant_vanishes_on_fermat_but_not_on_hesse_degenerate() {
        let inv = derive_invariant();
        let fermat = qp("x^3 + y^3 + z^3").coeff_vector(3).unwrap();
        assert!(inv.evaluate(&fermat).is_zero());
        let xyz = qp("x*y*z").coeff_vector(3).unwrap();
        assert!(!inv.evaluate(&xyz).is_zero());
    }

    #[test]
    fn invariant_scales_on_weierstrass_family() {
        // on x^3 + a*x*z^2 + b*z^3 - y^2*z the invariant is proportional to a
        let inv = derive_invariant();
        for (a, b) in [(0i64, 1i64), (0, -2), (1, 0), (-1, 0), (2, 3), (-3, 1)] {
            let f = parse_poly(
                &alloc::format!("x^3 + {a}*x*z^2 + {b}*z^3 - y^2*z"),
                &["x", "y", "z"],
                Rationals,
            )
            .unwrap();
            let v = inv.evaluate(&f.coeff_vector(3).unwrap());
            assert_eq!(v.is_zero(), a == 0, "a = {a}, b = {b}");
        }
    }

    #[test]
    fn j_zero_examples() {
        assert!(j_is_zero(&qp("x^3 + y^3 + z^3")).unwrap());
        // visibly split, hence Fermat-equivalent
        assert!(j_is_zero(&qp("x^3 + 2*z^3 - y^2*z")).unwrap());
        assert!(!j_is_zero(&qp("y^2*z - x^3 - x*z^2")).unwrap());
        assert_eq!(j_is_zero(&qp("x*y*z")), Err(CubicError::NotSmooth));
        assert!(matches!(
            j_is_zero(&parse_poly("x^2 + y^2", &["x", "y"], Rationals).unwrap()),
            Err(CubicError::NotTernaryCubic { .. })
        ));
    }

    #[test]
    fn j_zero_invariant_under_coordinate_changes() {
        let q = |n: i64| Rationals.from_i64(n);
        let changes = [
            vec![
                vec![q(1), q(2), q(0)],
                vec![q(0), q(1), q(-1)],
                vec![q(1), q(0), q(1)],
            ],
            vec![
                vec![q(0), q(1), q(0)],
                vec![q(1), q(0), q(3)],
                vec![q(0), q(0), q(1)],
            ],
        ];
        for f in [qp("x^3 + y^3 + z^3"), qp("y^2*z - x^3 - x*z^2")] {
            let expected = j_is_zero(&f).unwrap();
            for rows in &changes {
                let a = CoordinateChange::new(ScalarMatrix::from_rows(Rationals, rows.clone()))
                    .unwrap();
                let g = f.substitute(&a).unwrap();
                assert_eq!(j_is_zero(&g).unwrap(), expected);
            }
        }
    }

    #[test]
    fn corollary_agreement_on_fixed_cubics() {
        let r = corollary_check(&qp("x^3 + y^3 + z^3")).unwrap();
        assert!(r.st && r.j_zero && r.agree);
        let r = corollary_check(&qp("y^2*z - x^3 - x*z^2")).unwrap();
        assert!(!r.st && !r.j_zero && r.agree);
        // a small Weierstrass sweep
        for (a, b) in [(1i64, 1i64), (-1, 1), (2, -1), (0, 1), (0, -3), (3, 2)] {
            let f = parse_poly(
                &alloc::format!("x^3 + {a}*x*z^2 + {b}*z^3 - y^2*z"),
                &["x", "y", "z"],
                Rationals,
            )
            .unwrap();
            if 4 * a.pow(3) + 27 * b.pow(2) == 0 {
                continue;
            }
            let r = corollary_check(&f).unwrap();
            assert!(r.agree, "disagreement at a = {a}, b = {b}");
            assert_eq!(r.st, a == 0);
        }
    }
}
