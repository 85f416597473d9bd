//! Jacobi-ideal computations: the degree k-1 graded piece, an exact
//! smoothness decision, and the graded Hilbert function of the module of
//! polynomial derivations annihilating f.

use alloc::vec::Vec;
use core::fmt;

use crate::field::Field;
use crate::linalg::{ScalarMatrix, Subspace};
use crate::poly::{graded_dim, monomials_of_degree, HomPoly, Monomial};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum JacobiError {
    ZeroPolynomial,
    DegreeZero,
    /// The field characteristic must exceed the polynomial degree.
    UnsupportedCharacteristic { p: u64, degree: u32 },
}

impl fmt::Display for JacobiError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JacobiError::ZeroPolynomial => write!(f, "zero polynomial has no divisor"),
            JacobiError::DegreeZero => write!(f, "degree must be at least 1"),
            JacobiError::UnsupportedCharacteristic { p, degree } => {
                write!(f, "characteristic {p} too small for degree {degree}")
            }
        }
    }
}

impl core::error::Error for JacobiError {}

fn check_input<F: Field>(f: &HomPoly<F>) -> Result<(), JacobiError> {
    if f.degree() == 0 {
        return Err(JacobiError::DegreeZero);
    }
    if f.is_zero() {
        return Err(JacobiError::ZeroPolynomial);
    }
    if !f.char_ok() {
        return Err(JacobiError::UnsupportedCharacteristic {
            p: f.field().characteristic(),
            degree: f.degree(),
        });
    }
    Ok(())
}

/// The degree k-1 piece of the Jacobi ideal: the span of the n+1 partial
/// derivatives inside the graded piece of degree k-1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiPiece<F: Field> {
    pub k: u32,
    pub piece: Subspace<F>,
}

/// Coefficient-vector matrix of a family of degree-`d` polynomials, one row
/// per polynomial.
pub(crate) fn coeff_matrix<F: Field>(polys: &[HomPoly<F>], d: u32) -> ScalarMatrix<F> {
    let field = polys[0].field().clone();
    let rows = polys
        .iter()
        .map(|p| p.coeff_vector(d).expect("caller fixed the degree"))
        .collect();
    ScalarMatrix::from_rows(field, rows)
}

pub fn jacobi_piece<F: Field>(f: &HomPoly<F>) -> Result<JacobiPiece<F>, JacobiError> {
    check_input(f)?;
    let k = f.degree();
    let partials = f.partials();
    let m = coeff_matrix(&partials, k - 1);
    let piece = Subspace::from_span(
        f.field().clone(),
        graded_dim(f.n_vars(), k - 1),
        m.row_vecs(),
    );
    Ok(JacobiPiece { k, piece })
}

/// Whether the n+1 partials are linearly independent. A dependence makes the
/// hypersurface a cone, hence singular.
pub fn partials_independent<F: Field>(f: &HomPoly<F>) -> Result<bool, JacobiError> {
    check_input(f)?;
    let partials = f.partials();
    let m = coeff_matrix(&partials, f.degree() - 1);
    // row rank via the transpose so the modular full-rank certificate applies
    Ok(m.transpose().has_full_col_rank())
}

/// Exact smoothness of the projective hypersurface defined by `f`, valid over
/// the algebraic closure.
///
/// Hyperplanes are smooth; quadrics are smooth exactly when their symmetric
/// coefficient matrix is invertible. For k >= 3 the partials have no common
/// projective zero if and only if their monomial multiples span the full
/// graded piece in degree (n+1)(k-2)+1, the degree just past the socle of the
/// Artinian quotient they cut out when they are a regular sequence.
pub fn is_smooth<F: Field>(f: &HomPoly<F>) -> Result<bool, JacobiError> {
    check_input(f)?;
    let k = f.degree();
    if k == 1 {
        return Ok(true);
    }
    if k == 2 {
        return Ok(quadric_matrix(f).has_full_col_rank());
    }
    Ok(jacobian_spans_socle_degree(f))
}

/// Symmetric matrix B with f = x^T B x (characteristic is 2-free here: the
/// field restriction forces p > 2 whenever k = 2).
fn quadric_matrix<F: Field>(f: &HomPoly<F>) -> ScalarMatrix<F> {
    let field = f.field().clone();
    let n = f.n_vars();
    let half = field
        .inv(&field.from_i64(2))
        .expect("characteristic is not 2");
    ScalarMatrix::from_fn(field.clone(), n, n, |i, j| {
        let mut exps = alloc::vec![0u32; n];
        exps[i] += 1;
        exps[j] += 1;
        let c = f.coeff(&Monomial::new(exps));
        if i == j {
            c
        } else {
            field.mul(&c, &half)
        }
    })
}

/// Fullness of the Jacobian ideal in degree D = (n+1)(k-2)+1.
fn jacobian_spans_socle_degree<F: Field>(f: &HomPoly<F>) -> bool {
    let n_vars = f.n_vars();
    let k = f.degree();
    let socle_plus_one = (n_vars as u32) * (k - 2) + 1;
    let mult_degree = socle_plus_one - (k - 1);
    let target_dim = graded_dim(n_vars, socle_plus_one);
    let partials = f.partials();
    let field = f.field().clone();
    let mut rows = Vec::new();
    for g in &partials {
        if g.is_zero() {
            continue;
        }
        for m in monomials_of_degree(n_vars, mult_degree) {
            let shifted = HomPoly::from_terms_raw(
                field.clone(),
                n_vars,
                mult_degree,
                alloc::vec![(m, field.one())],
            );
            let prod = g.mul(&shifted);
            rows.push(prod.coeff_vector(socle_plus_one).expect("degree fixed"));
        }
    }
    if rows.len() < target_dim {
        return false;
    }
    ScalarMatrix::from_rows(field, rows).has_full_col_rank()
}

/// Hilbert function of the annihilating derivation module, indexed by the
/// coefficient degree d.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertFunction {
    pub dims: Vec<usize>,
}

impl HilbertFunction {
    pub fn entry(&self, d: usize) -> usize {
        self.dims[d]
    }
}

/// Entry d is the kernel dimension of the map sending an (n+1)-tuple of
/// degree-d forms (c_0, ..., c_n) to sum_i c_i * df/dx_i.
pub fn log_derivation_dims<F: Field>(
    f: &HomPoly<F>,
    d_max: u32,
) -> Result<HilbertFunction, JacobiError> {
    check_input(f)?;
    let n_vars = f.n_vars();
    let k = f.degree();
    let partials = f.partials();
    let field = f.field().clone();
    let mut dims = Vec::with_capacity(d_max as usize + 1);
    for d in 0..=d_max {
        let target = d + k - 1;
        let mut rows = Vec::new();
        for g in &partials {
            for m in monomials_of_degree(n_vars, d) {
                let shifted = HomPoly::from_terms_raw(
                    field.clone(),
                    n_vars,
                    d,
                    alloc::vec![(m, field.one())],
                );
                rows.push(g.mul(&shifted).coeff_vector(target).expect("degree fixed"));
            }
        }
        let cols_total = rows.len();
        let rank = ScalarMatrix::from_rows(field.clone(), rows).rank();
        dims.push(cols_total - rank);
    }
    Ok(HilbertFunction { dims })
}
