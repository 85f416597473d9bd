//! Sebastiani-Thom detection and constructive splitting.
//!
//! A form f is of Sebastiani-Thom type when some invertible change of
//! coordinates writes it as f1(X_0..X_l) + f2(X_{l+1}..X_n) with both parts
//! nonzero. For smooth f the detection reduces to one exact kernel problem:
//! the space S(f) of degree-k forms whose partials all lie in the degree k-1
//! piece of the Jacobi ideal of f has dimension >= 2 exactly in the ST case.
//! Extraction walks the constructive chain: pick an independent member g of
//! S(f), locate a pencil member with linearly dependent partials, move its
//! kernel directions to the leading coordinates, express its partials in
//! those of f, unshear with one more change, and read the split off the
//! vanishing mixed Hessian block.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::field::Field;
use crate::jacobi::{self, coeff_matrix, JacobiError};
use crate::linalg::{ScalarMatrix, Subspace};
use crate::poly::{graded_dim, monomials_of_degree, CoordinateChange, HomPoly, Monomial};
use crate::univar::{self, RootField, UnivarRoots};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SebastianiError {
    /// The criterion is stated for smooth divisors only.
    NotSmooth,
    /// Underlying degree/characteristic restriction.
    Jacobi(JacobiError),
    /// Operation needs at least two variables.
    TooFewVariables,
    /// Extraction applies to forms of degree >= 1.
    DegreeZero,
    /// Pencil generators must be independent forms of one degree.
    PencilNotIndependent,
    PencilMismatch,
    /// Every member of the pencil has dependent partials.
    PencilDegenerate,
    /// The characteristic is too small to interpolate the minor forms.
    CharacteristicTooSmallForPencil,
    /// splitting_coordinates given a form with independent partials.
    PartialsIndependent,
    /// A partial of the pencil member is outside the span of the partials
    /// of f; the Step 1 arrangement or membership precondition fails.
    TransferInconsistent { index: usize },
    /// Lower-right transfer block is singular; with smooth f this cannot
    /// happen, so it witnesses an upstream bug or a singular input.
    TransferBlockSingular,
    /// Step 1 arrangement not in force (a leading partial is nonzero).
    NotArranged { index: usize },
    /// Alignment postcondition failed on recomputation.
    AlignmentFailed,
    InternalInconsistency(&'static str),
}

impl fmt::Display for SebastianiError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SebastianiError::NotSmooth => {
                write!(f, "singular divisor: the criterion applies to smooth divisors only")
            }
            SebastianiError::Jacobi(e) => write!(f, "{e}"),
            SebastianiError::TooFewVariables => write!(f, "at least two variables are required"),
            SebastianiError::DegreeZero => write!(f, "degree must be at least 1"),
            SebastianiError::PencilNotIndependent => {
                write!(f, "pencil generators are linearly dependent")
            }
            SebastianiError::PencilMismatch => {
                write!(f, "pencil generators differ in degree or variable count")
            }
            SebastianiError::PencilDegenerate => {
                write!(f, "every pencil member has linearly dependent partials")
            }
            SebastianiError::CharacteristicTooSmallForPencil => {
                write!(f, "field too small to interpolate pencil minors")
            }
            SebastianiError::PartialsIndependent => {
                write!(f, "partials are linearly independent; nothing to split")
            }
            SebastianiError::TransferInconsistent { index } => {
                write!(f, "partial {index} of the member is outside the Jacobi piece")
            }
            SebastianiError::TransferBlockSingular => {
                write!(f, "transfer matrix block is singular (inconsistent with a smooth input)")
            }
            SebastianiError::NotArranged { index } => {
                write!(f, "partial {index} should vanish after the splitting change")
            }
            SebastianiError::AlignmentFailed => write!(f, "alignment postcondition failed"),
            SebastianiError::InternalInconsistency(what) => {
                write!(f, "internal consistency failure: {what}")
            }
        }
    }
}

impl core::error::Error for SebastianiError {}

impl From<JacobiError> for SebastianiError {
    fn from(e: JacobiError) -> Self {
        SebastianiError::Jacobi(e)
    }
}

/// The space S(f) of degree-k forms whose partials lie in the degree k-1
/// Jacobi piece of f. Contains f itself; dimension >= 2 certifies ST type
/// for smooth f.
#[derive(Clone, Debug)]
pub struct STSpace<F: Field> {
    pub f: HomPoly<F>,
    pub space: Subspace<F>,
}

impl<F: Field> STSpace<F> {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Basis of S(f) as polynomials, in canonical order.
    pub fn basis_polys(&self) -> Vec<HomPoly<F>> {
        self.space
            .basis_vectors()
            .into_iter()
            .map(|v| {
                HomPoly::from_coeff_vector(
                    self.f.field().clone(),
                    self.f.n_vars(),
                    self.f.degree(),
                    &v,
                )
                .expect("basis vectors have graded length")
            })
            .collect()
    }
}

/// Degree-k forms with all partials inside the subspace `j` of the degree
/// k-1 graded piece. Shared by `st_space` and divisor reconstruction.
pub(crate) fn forms_with_partials_in<F: Field>(
    field: &F,
    n_vars: usize,
    k: u32,
    j: &Subspace<F>,
) -> Subspace<F> {
    let basis_k = monomials_of_degree(n_vars, k);
    let m_dim = graded_dim(n_vars, k - 1);
    assert_eq!(j.ambient_dim(), m_dim, "subspace lives in the wrong graded piece");
    // Residual of reduction against a fixed RREF basis is linear in the
    // input, so the conditions assemble into one matrix: column per unknown
    // coefficient of g, rows stacked over (variable, residual coordinate).
    let mut cols: Vec<Vec<F::Elem>> = Vec::with_capacity(basis_k.len());
    for m in &basis_k {
        let mono = HomPoly::from_terms_raw(field.clone(), n_vars, k, vec![(m.clone(), field.one())]);
        let mut col = Vec::with_capacity(n_vars * m_dim);
        for v in 0..n_vars {
            let dv = mono.partial_derivative(v);
            let vec = dv.coeff_vector(k - 1).expect("degree fixed");
            col.extend(j.reduce(&vec));
        }
        cols.push(col);
    }
    let rows = n_vars * m_dim;
    ScalarMatrix::from_fn(field.clone(), rows, basis_k.len(), |i, c| cols[c][i].clone()).kernel()
}

/// Compute S(f).
pub fn st_space<F: Field>(f: &HomPoly<F>) -> Result<STSpace<F>, SebastianiError> {
    let jp = jacobi::jacobi_piece(f)?;
    let space = forms_with_partials_in(f.field(), f.n_vars(), f.degree(), &jp.piece);
    let fv = f.coeff_vector(f.degree()).expect("own degree");
    if !space.member(&fv).expect("ambient dims match") {
        return Err(SebastianiError::InternalInconsistency("f must lie in S(f)"));
    }
    Ok(STSpace {
        f: f.clone(),
        space,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StVerdict {
    St,
    NotSt,
}

/// ST verdict with the dimension evidence it rests on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StReport {
    pub verdict: StVerdict,
    pub st_space_dim: usize,
}

/// Decide Sebastiani-Thom type for a smooth form: linear forms always are;
/// for k >= 2 the criterion is dim S(f) >= 2. Singular input is unsupported.
pub fn is_st<F: Field>(f: &HomPoly<F>) -> Result<StReport, SebastianiError> {
    if f.n_vars() < 2 {
        return Err(SebastianiError::TooFewVariables);
    }
    if !jacobi::is_smooth(f)? {
        return Err(SebastianiError::NotSmooth);
    }
    let dim = st_space(f)?.dim();
    let verdict = if f.degree() == 1 || dim >= 2 {
        StVerdict::St
    } else {
        StVerdict::NotSt
    };
    Ok(StReport {
        verdict,
        st_space_dim: dim,
    })
}

/// A point of the pencil (lambda f + mu g) where the partials become
/// linearly dependent, canonicalized so the first nonzero coordinate is 1;
/// or a deferred descriptor for rank-drop points outside the base field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PencilRoot<F: Field> {
    Rational { lambda: F::Elem, mu: F::Elem },
    /// Squarefree polynomial in t = mu/lambda with no base-field roots.
    Deferred { poly: Vec<F::Elem> },
}

/// Determinant by Gaussian elimination with exact division.
fn det_small<F: Field>(field: &F, mut m: Vec<Vec<F::Elem>>) -> F::Elem {
    let n = m.len();
    let mut acc = field.one();
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| !field.is_zero(&m[r][c])) else {
            return field.zero();
        };
        if piv != c {
            m.swap(c, piv);
            acc = field.neg(&acc);
        }
        let pval = m[c][c].clone();
        acc = field.mul(&acc, &pval);
        let pinv = field.inv(&pval).expect("pivot nonzero");
        for r in c + 1..n {
            if field.is_zero(&m[r][c]) {
                continue;
            }
            let factor = field.mul(&m[r][c], &pinv);
            for j in c..n {
                let t = field.mul(&factor, &m[c][j]);
                m[r][j] = field.sub(&m[r][j], &t);
            }
        }
    }
    acc
}

/// Lagrange interpolation through (x_i, y_i) with distinct x_i; ascending
/// coefficients.
fn interpolate<F: Field>(field: &F, points: &[(F::Elem, F::Elem)]) -> Vec<F::Elem> {
    let n = points.len();
    let mut out = vec![field.zero(); n];
    for (j, (xj, yj)) in points.iter().enumerate() {
        // basis_j(t) = prod_{i != j} (t - x_i) / (x_j - x_i)
        let mut basis = vec![field.zero(); n];
        basis[0] = field.one();
        let mut deg = 0usize;
        let mut denom = field.one();
        for (i, (xi, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            // multiply by (t - x_i)
            let mut next = vec![field.zero(); n];
            for d in 0..=deg {
                next[d + 1] = field.add(&next[d + 1], &basis[d]);
                let t = field.mul(&basis[d], xi);
                next[d] = field.sub(&next[d], &t);
            }
            basis = next;
            deg += 1;
            denom = field.mul(&denom, &field.sub(xj, xi));
        }
        let scale = field.div(yj, &denom).expect("nodes distinct");
        for d in 0..n {
            let t = field.mul(&basis[d], &scale);
            out[d] = field.add(&out[d], &t);
        }
    }
    out
}

/// Binary form of one fixed degree, kept as (lambda-valuation, mu-valuation,
/// core univariate polynomial in t = mu/lambda with nonzero ends).
struct BinaryForm<F: Field> {
    v_lambda: usize,
    v_mu: usize,
    core: Vec<F::Elem>,
}

impl<F: Field> BinaryForm<F> {
    /// From ascending coefficients of the dehomogenization at lambda = 1:
    /// c[i] multiplies lambda^(d-i) mu^i.
    fn from_coeffs(field: &F, coeffs: &[F::Elem], degree: usize) -> Option<Self> {
        let lo = coeffs.iter().position(|c| !field.is_zero(c))?;
        let hi = coeffs.iter().rposition(|c| !field.is_zero(c)).unwrap();
        Some(BinaryForm {
            v_lambda: degree - hi,
            v_mu: lo,
            core: coeffs[lo..=hi].to_vec(),
        })
    }

    fn gcd(self, field: &F, other: &Self) -> Self {
        BinaryForm {
            v_lambda: self.v_lambda.min(other.v_lambda),
            v_mu: self.v_mu.min(other.v_mu),
            core: univar::gcd(field, &self.core, &other.core),
        }
    }

    fn is_constant(&self, field: &F) -> bool {
        self.v_lambda == 0
            && self.v_mu == 0
            && univar::degree(field, &self.core).unwrap_or(0) == 0
    }
}

/// Indices of the next (k)-combination in lexicographic order.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - (k - i) {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// All pencil points where the partials of `lambda f + mu g` drop below full
/// rank: the roots of the gcd of the maximal minors of the partial-derivative
/// coefficient pencil. Roots outside the base field are deferred.
///
/// The pencil is first compressed through a row basis of the stacked partial
/// coefficient matrix, which preserves ranks pointwise and keeps the minor
/// count small.
pub fn find_singular_member<F: RootField>(
    f: &HomPoly<F>,
    g: &HomPoly<F>,
) -> Result<Vec<PencilRoot<F>>, SebastianiError>
where
    F::Elem: Ord,
{
    if f.n_vars() != g.n_vars() || f.degree() != g.degree() {
        return Err(SebastianiError::PencilMismatch);
    }
    if f.degree() == 0 {
        return Err(SebastianiError::DegreeZero);
    }
    if !f.char_ok() {
        return Err(SebastianiError::Jacobi(JacobiError::UnsupportedCharacteristic {
            p: f.field().characteristic(),
            degree: f.degree(),
        }));
    }
    let field = f.field().clone();
    let n_vars = f.n_vars();
    let k = f.degree();
    let p = field.characteristic();
    if p > 0 && p < n_vars as u64 + 2 {
        return Err(SebastianiError::CharacteristicTooSmallForPencil);
    }
    // independence of the generators
    let span = ScalarMatrix::from_rows(
        field.clone(),
        vec![
            f.coeff_vector(k).expect("own degree"),
            g.coeff_vector(k).expect("degrees match"),
        ],
    );
    if span.rank() != 2 {
        return Err(SebastianiError::PencilNotIndependent);
    }

    let af = coeff_matrix(&f.partials(), k - 1);
    let ag = coeff_matrix(&g.partials(), k - 1);
    // Compress: rows of both matrices lie in the row space of the stack;
    // with B the RREF row basis (pivot columns unit), the coordinates of any
    // row are just its pivot-column entries.
    let mut stacked = af.row_vecs();
    stacked.extend(ag.row_vecs());
    let ech = ScalarMatrix::from_rows(field.clone(), stacked).rref();
    let r = ech.rank;
    if r < n_vars {
        // even the joint partials do not span n+1 directions
        return Err(SebastianiError::PencilDegenerate);
    }
    let coords = |m: &ScalarMatrix<F>| -> ScalarMatrix<F> {
        ScalarMatrix::from_fn(field.clone(), n_vars, r, |i, j| m.at(i, ech.pivots[j]).clone())
    };
    let uf = coords(&af);
    let ug = coords(&ag);

    // gcd over all (n+1)-column minors of (lambda uf + mu ug), each found by
    // interpolation of the dehomogenized determinant
    let degree = n_vars; // each minor is a binary form of degree n+1 = n_vars
    let nodes: Vec<F::Elem> = (0..=degree as i64).map(|j| field.from_i64(j)).collect();
    let mut running: Option<BinaryForm<F>> = None;
    let mut idx: Vec<usize> = (0..n_vars).collect();
    loop {
        let mut points = Vec::with_capacity(nodes.len());
        for t in &nodes {
            let m: Vec<Vec<F::Elem>> = (0..n_vars)
                .map(|i| {
                    idx.iter()
                        .map(|&c| field.add(uf.at(i, c), &field.mul(t, ug.at(i, c))))
                        .collect()
                })
                .collect();
            points.push((t.clone(), det_small(&field, m)));
        }
        if points.iter().any(|(_, y)| !field.is_zero(y)) {
            let coeffs = interpolate(&field, &points);
            let form = BinaryForm::from_coeffs(&field, &coeffs, degree)
                .expect("nonzero evaluations give a nonzero form");
            running = Some(match running {
                None => form,
                Some(acc) => acc.gcd(&field, &form),
            });
            if running.as_ref().unwrap().is_constant(&field) {
                return Ok(Vec::new());
            }
        }
        if !next_combination(&mut idx, r) {
            break;
        }
    }
    let Some(h) = running else {
        return Err(SebastianiError::PencilDegenerate);
    };

    let mut roots: Vec<PencilRoot<F>> = Vec::new();
    if h.v_mu >= 1 {
        // mu divides the gcd: the member at (1 : 0), i.e. f itself
        roots.push(PencilRoot::Rational {
            lambda: field.one(),
            mu: field.zero(),
        });
    }
    let UnivarRoots { roots: finite, deferred } = field.univar_roots(&h.core);
    for t in finite {
        if !field.is_zero(&t) {
            roots.push(PencilRoot::Rational {
                lambda: field.one(),
                mu: t,
            });
        }
    }
    if h.v_lambda >= 1 {
        roots.push(PencilRoot::Rational {
            lambda: field.zero(),
            mu: field.one(),
        });
    }
    if let Some(poly) = deferred {
        roots.push(PencilRoot::Deferred { poly });
    }
    Ok(roots)
}

/// Step 1 change of coordinates: partial-derivative kernel directions become
/// the leading variables. Returns the change together with
/// l = n - dim span{partials}; after the change the first l+1 partials vanish
/// identically and the remaining n-l are independent.
pub fn splitting_coordinates<F: Field>(
    member: &HomPoly<F>,
) -> Result<(CoordinateChange<F>, usize), SebastianiError> {
    if member.is_zero() {
        return Err(SebastianiError::Jacobi(JacobiError::ZeroPolynomial));
    }
    if member.degree() == 0 {
        return Err(SebastianiError::DegreeZero);
    }
    let field = member.field().clone();
    let n_vars = member.n_vars();
    let partial_rows = coeff_matrix(&member.partials(), member.degree() - 1);
    // directions c with (c . grad) member = 0
    let kern = partial_rows.transpose().kernel();
    if kern.dim() == 0 {
        return Err(SebastianiError::PartialsIndependent);
    }
    let l = kern.dim() - 1;
    // columns 0..=l from the kernel basis; completion by unit vectors at the
    // non-pivot coordinates, in the fixed coordinate order
    let kernel_basis = kern.basis_vectors();
    let mut pivot_coord = vec![false; n_vars];
    for row in &kernel_basis {
        let pc = row
            .iter()
            .position(|e| !field.is_zero(e))
            .expect("basis rows nonzero");
        pivot_coord[pc] = true;
    }
    let mut columns: Vec<Vec<F::Elem>> = kernel_basis;
    for j in 0..n_vars {
        if !pivot_coord[j] {
            let mut e = vec![field.zero(); n_vars];
            e[j] = field.one();
            columns.push(e);
        }
    }
    let matrix = ScalarMatrix::from_fn(field.clone(), n_vars, n_vars, |i, j| columns[j][i].clone());
    let change = CoordinateChange::new(matrix)
        .map_err(|_| SebastianiError::InternalInconsistency("kernel completion must be invertible"))?;
    // defensive recheck of the arrangement
    let moved = member.substitute(&change).expect("same variable count");
    for i in 0..=l {
        if !moved.partial_derivative(i).is_zero() {
            return Err(SebastianiError::InternalInconsistency(
                "leading partials must vanish after the splitting change",
            ));
        }
    }
    Ok((change, l))
}

/// Step 2 transfer matrix: rows a_i with d(member)/dx_i = sum_j a_ij df/dx_j,
/// in coordinates where the first l+1 partials of the member vanish. The
/// lower-right (n-l) x (n-l) block is certified invertible.
pub fn jacobi_transfer_matrix<F: Field>(
    member: &HomPoly<F>,
    f: &HomPoly<F>,
    l: usize,
) -> Result<ScalarMatrix<F>, SebastianiError> {
    if member.n_vars() != f.n_vars() || member.degree() != f.degree() {
        return Err(SebastianiError::PencilMismatch);
    }
    let field = f.field().clone();
    let n_vars = f.n_vars();
    let k = f.degree();
    let member_partials = member.partials();
    for (i, d) in member_partials.iter().enumerate().take(l + 1) {
        if !d.is_zero() {
            return Err(SebastianiError::NotArranged { index: i });
        }
    }
    // solve coeff(d_i member) = sum_j a_ij coeff(d_j f) for each row i
    let basis_t = coeff_matrix(&f.partials(), k - 1).transpose();
    let mut rows: Vec<Vec<F::Elem>> = Vec::with_capacity(n_vars);
    for (i, d) in member_partials.iter().enumerate() {
        if d.is_zero() {
            rows.push(vec![field.zero(); n_vars]);
            continue;
        }
        let rhs = d.coeff_vector(k - 1).expect("degree fixed");
        match basis_t.solve(&rhs) {
            Some(x) => rows.push(x),
            None => return Err(SebastianiError::TransferInconsistent { index: i }),
        }
    }
    let a = ScalarMatrix::from_rows(field.clone(), rows);
    let block = ScalarMatrix::from_fn(field.clone(), n_vars - l - 1, n_vars - l - 1, |i, j| {
        a.at(l + 1 + i, l + 1 + j).clone()
    });
    if block.rank() != n_vars - l - 1 {
        return Err(SebastianiError::TransferBlockSingular);
    }
    Ok(a)
}

/// Step 3 change: shear the leading variables into the trailing ones so that
/// in the new coordinates every trailing partial of f lands inside the
/// Jacobi piece of the member. Both postconditions are recomputed before
/// returning.
pub fn alignment_change<F: Field>(
    f: &HomPoly<F>,
    member: &HomPoly<F>,
    a: &ScalarMatrix<F>,
    l: usize,
) -> Result<CoordinateChange<F>, SebastianiError> {
    let field = f.field().clone();
    let n_vars = f.n_vars();
    let k = f.degree();
    let s = n_vars - l - 1;
    let block = ScalarMatrix::from_fn(field.clone(), s, s, |i, j| a.at(l + 1 + i, l + 1 + j).clone());
    let a21 = ScalarMatrix::from_fn(field.clone(), s, l + 1, |i, j| a.at(l + 1 + i, j).clone());
    let block_inv = block.inverse().ok_or(SebastianiError::TransferBlockSingular)?;
    // b = block^{-1} a21 satisfies sum_{j<=l} b_ij df/dx_j + df/dx_i in J(member)
    let b = block_inv.mul_matrix(&a21);
    let mut matrix = ScalarMatrix::identity(field.clone(), n_vars);
    for j in 0..=l {
        for i in 0..s {
            *matrix.at_mut(j, l + 1 + i) = b.at(i, j).clone();
        }
    }
    let change = CoordinateChange::new(matrix).map_err(|_| SebastianiError::AlignmentFailed)?;
    // postconditions, by explicit recomputation
    let member_new = member.substitute(&change).expect("same variable count");
    for i in 0..=l {
        if !member_new.partial_derivative(i).is_zero() {
            return Err(SebastianiError::AlignmentFailed);
        }
    }
    let f_new = f.substitute(&change).expect("same variable count");
    let member_piece = Subspace::from_span(
        field.clone(),
        graded_dim(n_vars, k - 1),
        coeff_matrix(&member_new.partials(), k - 1).row_vecs(),
    );
    for i in l + 1..n_vars {
        let v = f_new
            .partial_derivative(i)
            .coeff_vector(k - 1)
            .expect("degree fixed");
        if !member_piece.member(&v).expect("same graded piece") {
            return Err(SebastianiError::AlignmentFailed);
        }
    }
    Ok(change)
}

/// A constructed Sebastiani-Thom splitting: an invertible change, a split
/// index l, and the two nonzero parts supported on disjoint variable blocks.
#[derive(Clone, Debug)]
pub struct STDecomposition<F: Field> {
    pub change: CoordinateChange<F>,
    pub split_l: usize,
    pub f1: HomPoly<F>,
    pub f2: HomPoly<F>,
}

/// Check a decomposition from scratch: the substituted polynomial must equal
/// f1 + f2, the parts must be nonzero and supported on the two variable
/// blocks, and the mixed Hessian block must vanish identically (the support
/// test and the Hessian test are independent routes to the same criterion;
/// both must pass).
pub fn verify_decomposition<F: Field>(f: &HomPoly<F>, d: &STDecomposition<F>) -> bool {
    let n_vars = f.n_vars();
    if d.change.size() != n_vars
        || d.split_l + 1 >= n_vars
        || d.f1.n_vars() != n_vars
        || d.f2.n_vars() != n_vars
        || d.f1.degree() != f.degree()
        || d.f2.degree() != f.degree()
    {
        return false;
    }
    let Ok(h) = f.substitute(&d.change) else {
        return false;
    };
    if d.f1.is_zero() || d.f2.is_zero() {
        return false;
    }
    if !h.sub(&d.f1.add(&d.f2)).is_zero() {
        return false;
    }
    let l = d.split_l;
    if d.f1.support_vars().iter().any(|&v| v > l) {
        return false;
    }
    if d.f2.support_vars().iter().any(|&v| v <= l) {
        return false;
    }
    // independent route: the mixed Hessian block of the substituted form
    for i in 0..=l {
        let di = h.partial_derivative(i);
        for j in l + 1..n_vars {
            if !di.partial_derivative(j).is_zero() {
                return false;
            }
        }
    }
    true
}

/// Outcome of constructive extraction.
#[derive(Clone, Debug)]
pub enum Extraction<F: Field> {
    Decomposition(STDecomposition<F>),
    /// dim S(f) >= 2 certifies ST type over the algebraic closure, but every
    /// usable pencil root lives in a proper extension of the base field.
    /// Carries the deferred root polynomials encountered.
    NeedsExtension {
        deferred: Vec<Vec<F::Elem>>,
        attempts: usize,
    },
    NotSt,
}

/// Search budget for extraction. `attempts` bounds the number of candidate
/// members of S(f) examined; `seed` fixes the randomized tail of the
/// candidate sequence.
#[derive(Clone, Copy, Debug)]
pub struct ExtractOptions {
    pub attempts: usize,
    pub seed: u64,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        ExtractOptions {
            attempts: 32,
            seed: 0,
        }
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Extract a Sebastiani-Thom decomposition of a smooth form, or report that
/// none exists (`NotSt`), or that extraction is blocked on irrational pencil
/// roots (`NeedsExtension`).
pub fn extract_decomposition<F: RootField>(
    f: &HomPoly<F>,
    options: ExtractOptions,
) -> Result<Extraction<F>, SebastianiError>
where
    F::Elem: Ord,
{
    if f.n_vars() < 2 {
        return Err(SebastianiError::TooFewVariables);
    }
    if !jacobi::is_smooth(f)? {
        return Err(SebastianiError::NotSmooth);
    }
    if f.degree() == 1 {
        return linear_split(f).map(Extraction::Decomposition);
    }
    let ss = st_space(f)?;
    if ss.dim() < 2 {
        return Ok(Extraction::NotSt);
    }
    let field = f.field().clone();
    let basis = ss.basis_polys();
    let fv = f.coeff_vector(f.degree()).expect("own degree");

    let mut deferred_all: Vec<Vec<F::Elem>> = Vec::new();
    let mut attempts = 0usize;
    let mut rng = options.seed;

    // deterministic candidates first: basis vectors, pair sums, then small
    // shifts of f along the basis; a seeded randomized tail widens the search
    let mut candidates: Vec<HomPoly<F>> = Vec::new();
    candidates.extend(basis.iter().cloned());
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            candidates.push(basis[i].add(&basis[j]));
        }
    }
    for b in &basis {
        for c in [1i64, -1, 2] {
            candidates.push(f.add(&b.scale(&field.from_i64(c))));
        }
    }
    let mut candidate_at = |idx: usize, rng: &mut u64| -> HomPoly<F> {
        if idx < candidates.len() {
            return candidates[idx].clone();
        }
        let mut g = HomPoly::zero(field.clone(), f.n_vars(), f.degree());
        for b in &basis {
            let c = (splitmix64(rng) % 7) as i64 - 3;
            g = g.add(&b.scale(&field.from_i64(c)));
        }
        g
    };

    while attempts < options.attempts {
        let g = candidate_at(attempts, &mut rng);
        attempts += 1;
        if g.is_zero() {
            continue;
        }
        // independence from f
        let pair = ScalarMatrix::from_rows(
            field.clone(),
            vec![fv.clone(), g.coeff_vector(f.degree()).expect("same degree")],
        );
        if pair.rank() != 2 {
            continue;
        }
        if !jacobi::partials_independent(&g).unwrap_or(false) {
            continue;
        }
        if !jacobi::is_smooth(&g).unwrap_or(false) {
            continue;
        }
        let roots = match find_singular_member(f, &g) {
            Ok(r) => r,
            Err(_) => continue,
        };
        for root in roots {
            match root {
                PencilRoot::Rational { lambda, mu } => {
                    let member = f.scale(&lambda).add(&g.scale(&mu));
                    if member.is_zero() {
                        continue;
                    }
                    let d = run_steps(f, &member)?;
                    return Ok(Extraction::Decomposition(d));
                }
                PencilRoot::Deferred { poly } => {
                    if !deferred_all.contains(&poly) {
                        deferred_all.push(poly);
                    }
                }
            }
        }
    }
    Ok(Extraction::NeedsExtension {
        deferred: deferred_all,
        attempts,
    })
}

/// Steps 1-4 for one pencil member with dependent partials. The chain is
/// guaranteed to succeed for smooth f; every failure is surfaced as an
/// internal inconsistency rather than swallowed.
fn run_steps<F: Field>(
    f: &HomPoly<F>,
    member: &HomPoly<F>,
) -> Result<STDecomposition<F>, SebastianiError> {
    let (t1, l) = splitting_coordinates(member)?;
    let member1 = member.substitute(&t1).expect("same variable count");
    let f1 = f.substitute(&t1).expect("same variable count");
    let a = jacobi_transfer_matrix(&member1, &f1, l)?;
    let t2 = alignment_change(&f1, &member1, &a, l)?;
    let change = t1.compose(&t2);
    let h = f.substitute(&change).expect("same variable count");
    split_at(f, &h, l, change)
}

/// Read the split off the transformed polynomial and re-verify everything.
fn split_at<F: Field>(
    f: &HomPoly<F>,
    h: &HomPoly<F>,
    l: usize,
    change: CoordinateChange<F>,
) -> Result<STDecomposition<F>, SebastianiError> {
    let field = f.field().clone();
    let n_vars = f.n_vars();
    let mut part1 = HomPoly::zero(field.clone(), n_vars, f.degree());
    let mut part2 = HomPoly::zero(field.clone(), n_vars, f.degree());
    for (m, c) in h.terms() {
        let in_first = (0..=l).any(|v| m.exp(v) > 0);
        let in_second = (l + 1..n_vars).any(|v| m.exp(v) > 0);
        if in_first && in_second {
            return Err(SebastianiError::InternalInconsistency(
                "mixed-support term survived the alignment",
            ));
        }
        let single = HomPoly::from_terms_raw(
            field.clone(),
            n_vars,
            f.degree(),
            vec![(m.clone(), c.clone())],
        );
        if in_first {
            part1 = part1.add(&single);
        } else {
            part2 = part2.add(&single);
        }
    }
    if part1.is_zero() || part2.is_zero() {
        return Err(SebastianiError::InternalInconsistency(
            "a split part vanished although f is smooth",
        ));
    }
    let d = STDecomposition {
        change,
        split_l: l,
        f1: part1,
        f2: part2,
    };
    if !verify_decomposition(f, &d) {
        return Err(SebastianiError::InternalInconsistency(
            "constructed decomposition failed verification",
        ));
    }
    Ok(d)
}

/// Any nonzero linear form splits: send it to X_0 + X_n by an explicit
/// invertible change.
fn linear_split<F: Field>(f: &HomPoly<F>) -> Result<STDecomposition<F>, SebastianiError> {
    let field = f.field().clone();
    let n_vars = f.n_vars();
    let c = f.coeff_vector(1).expect("linear form");
    // kernel of the covector c, plus one direction hitting 1
    let cov = ScalarMatrix::from_rows(field.clone(), vec![c.clone()]);
    let kern = cov.kernel();
    let j0 = c.iter().position(|e| !field.is_zero(e)).expect("nonzero form");
    let mut lead = vec![field.zero(); n_vars];
    lead[j0] = field.inv(&c[j0]).expect("nonzero coefficient");
    let kernel_basis = kern.basis_vectors();
    // columns: lead, kernel[0..n-1], lead + kernel[n-1]
    let mut columns: Vec<Vec<F::Elem>> = Vec::with_capacity(n_vars);
    columns.push(lead.clone());
    for v in &kernel_basis[..kernel_basis.len() - 1] {
        columns.push(v.clone());
    }
    let last: Vec<F::Elem> = lead
        .iter()
        .zip(kernel_basis.last().expect("n >= 2 gives a kernel"))
        .map(|(a, b)| field.add(a, b))
        .collect();
    columns.push(last);
    let matrix = ScalarMatrix::from_fn(field.clone(), n_vars, n_vars, |i, j| columns[j][i].clone());
    let change = CoordinateChange::new(matrix)
        .map_err(|_| SebastianiError::InternalInconsistency("linear split change singular"))?;
    let h = f.substitute(&change).expect("same variable count");
    let f1 = HomPoly::from_terms_raw(
        field.clone(),
        n_vars,
        1,
        vec![(Monomial::var(n_vars, 0), field.one())],
    );
    let f2 = HomPoly::from_terms_raw(
        field.clone(),
        n_vars,
        1,
        vec![(Monomial::var(n_vars, n_vars - 1), field.one())],
    );
    let d = STDecomposition {
        change,
        split_l: 0,
        f1,
        f2,
    };
    if !verify_decomposition(f, &d) || !h.sub(&d.f1.add(&d.f2)).is_zero() {
        return Err(SebastianiError::InternalInconsistency(
            "linear split failed verification",
        ));
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::parse::parse_poly;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        Rationals.from_i64(n)
    }

    fn qr(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn qp(text: &str, vars: &[&str]) -> HomPoly<Rationals> {
        parse_poly(text, vars, Rationals).unwrap()
    }

    fn fermat() -> HomPoly<Rationals> {
        qp("x^3 + y^3 + z^3", &["x", "y", "z"])
    }

    fn weierstrass() -> HomPoly<Rationals> {
        qp("y^2*z - x^3 - x*z^2", &["x", "y", "z"])
    }

    /// Independent brute-force oracle for S(f): set up the augmented system
    /// over unknowns (g coefficients, expansion coefficients) and project.
    pub(crate) fn st_space_oracle(f: &HomPoly<Rationals>) -> Subspace<Rationals> {
        let field = Rationals;
        let n_vars = f.n_vars();
        let k = f.degree();
        let nk = graded_dim(n_vars, k);
        let partials = f.partials();
        // unknowns: g in A_k (nk of them) plus lambda_{v,i} (n_vars^2);
        // equations: coeff(d_v g) - sum_i lambda_{v,i} coeff(d_i f) = 0
        let total = nk + n_vars * n_vars;
        let mut rows: Vec<Vec<BigRational>> = Vec::new();
        let basis_k = monomials_of_degree(n_vars, k);
        let basis_km1 = monomials_of_degree(n_vars, k - 1);
        for v in 0..n_vars {
            for row_idx in 0..basis_km1.len() {
                let mut row = vec![field.zero(); total];
                for (t, mono) in basis_k.iter().enumerate() {
                    let g = HomPoly::from_terms_raw(
                        field,
                        n_vars,
                        k,
                        vec![(mono.clone(), field.one())],
                    );
                    let dv = g.partial_derivative(v).coeff_vector(k - 1).unwrap();
                    row[t] = dv[row_idx].clone();
                }
                for i in 0..n_vars {
                    let dfi = partials[i].coeff_vector(k - 1).unwrap();
                    row[nk + v * n_vars + i] = field.neg(&dfi[row_idx]);
                }
                rows.push(row);
            }
        }
        let kern = ScalarMatrix::from_rows(field, rows).kernel();
        // project onto the g coordinates
        let projected: Vec<Vec<BigRational>> = kern
            .basis_vectors()
            .into_iter()
            .map(|v| v[..nk].to_vec())
            .collect();
        Subspace::from_span(field, nk, projected)
    }

    #[test]
    fn st_space_fermat_matches_oracle() {
        let s = st_space(&fermat()).unwrap();
        assert_eq!(s.dim(), 3);
        let expected = Subspace::from_span(
            Rationals,
            10,
            ["x^3", "y^3", "z^3"]
                .iter()
                .map(|t| qp(t, &["x", "y", "z"]).coeff_vector(3).unwrap())
                .collect(),
        );
        assert!(s.space.subspace_eq(&expected).unwrap());
        assert!(s.space.subspace_eq(&st_space_oracle(&fermat())).unwrap());
    }

    #[test]
    fn st_space_quadric_is_everything() {
        let f = qp("x^2 + y^2 + z^2", &["x", "y", "z"]);
        let s = st_space(&f).unwrap();
        assert_eq!(s.dim(), 6);
        assert!(s.space.subspace_eq(&st_space_oracle(&f)).unwrap());
    }

    #[test]
    fn st_space_weierstrass_is_a_line() {
        let f = weierstrass();
        let s = st_space(&f).unwrap();
        assert_eq!(s.dim(), 1);
        assert!(s.space.subspace_eq(&st_space_oracle(&f)).unwrap());
    }

    #[test]
    fn is_st_verdicts() {
        assert_eq!(is_st(&fermat()).unwrap().verdict, StVerdict::St);
        assert_eq!(
            is_st(&qp("x^2 + y^2 + z^2", &["x", "y", "z"])).unwrap().verdict,
            StVerdict::St
        );
        assert_eq!(is_st(&weierstrass()).unwrap().verdict, StVerdict::NotSt);
        assert_eq!(
            is_st(&qp("x*y*z", &["x", "y", "z"])),
            Err(SebastianiError::NotSmooth)
        );
        // linear forms are ST
        assert_eq!(
            is_st(&qp("x + 2*y", &["x", "y", "z"])).unwrap().verdict,
            StVerdict::St
        );
    }

    #[test]
    fn pencil_roots_fermat_family() {
        let f = fermat();
        let g = qp("x^3 + 2*y^3 + 2*z^3", &["x", "y", "z"]);
        let roots = find_singular_member(&f, &g).unwrap();
        let expected = [
            (q(1), q(-1)),
            (q(1), qr(-1, 2)), // (2 : -1) canonicalized
        ];
        let rational: Vec<(BigRational, BigRational)> = roots
            .iter()
            .filter_map(|r| match r {
                PencilRoot::Rational { lambda, mu } => Some((lambda.clone(), mu.clone())),
                _ => None,
            })
            .collect();
        assert_eq!(rational.len(), 2);
        for e in &expected {
            assert!(rational.contains(e), "missing root {e:?}");
        }
        // substituting each root yields a member with dependent partials
        for (lambda, mu) in rational {
            let member = f.scale(&lambda).add(&g.scale(&mu));
            assert!(!jacobi::partials_independent(&member).unwrap());
        }
    }

    #[test]
    fn pencil_roots_binary_example() {
        let f = qp("x^2 + y^2", &["x", "y"]);
        let g = qp("x*y", &["x", "y"]);
        let roots = find_singular_member(&f, &g).unwrap();
        let rational: Vec<(BigRational, BigRational)> = roots
            .iter()
            .filter_map(|r| match r {
                PencilRoot::Rational { lambda, mu } => Some((lambda.clone(), mu.clone())),
                _ => None,
            })
            .collect();
        assert_eq!(rational.len(), 2);
        assert!(rational.contains(&(q(1), q(2))));
        assert!(rational.contains(&(q(1), q(-2))));
    }

    #[test]
    fn pencil_requires_independent_generators() {
        let f = fermat();
        let g = f.scale(&q(2));
        assert_eq!(
            find_singular_member(&f, &g),
            Err(SebastianiError::PencilNotIndependent)
        );
    }

    #[test]
    fn pencil_deferred_roots_have_no_rational_root() {
        use crate::univar::RootField as _;
        let f = qp("x^3 + y^3", &["x", "y"]);
        let g = qp("x^3 - 3*x^2*y + y^3", &["x", "y"]);
        let roots = find_singular_member(&f, &g).unwrap();
        for r in &roots {
            if let PencilRoot::Deferred { poly } = r {
                let rs = Rationals.univar_roots(poly);
                assert!(rs.roots.is_empty(), "deferred factor has a rational root");
            }
        }
    }

    #[test]
    fn splitting_single_variable_cube() {
        let member = qp("x^3", &["x", "y", "z"]);
        let (change, l) = splitting_coordinates(&member).unwrap();
        assert_eq!(l, 1);
        let moved = member.substitute(&change).unwrap();
        assert!(moved.partial_derivative(0).is_zero());
        assert!(moved.partial_derivative(1).is_zero());
        assert!(!moved.partial_derivative(2).is_zero());
    }

    #[test]
    fn splitting_sheared_cube() {
        let member = qp("x^3 + 3*x^2*y + 3*x*y^2 + y^3", &["x", "y", "z"]); // (x+y)^3
        let (change, l) = splitting_coordinates(&member).unwrap();
        assert_eq!(l, 1);
        let moved = member.substitute(&change).unwrap();
        assert!(moved.partial_derivative(0).is_zero());
        assert!(moved.partial_derivative(1).is_zero());
        // the member depends only on the last coordinate now
        assert_eq!(moved.support_vars(), vec![2]);
    }

    #[test]
    fn splitting_rejects_independent_partials() {
        assert_eq!(
            splitting_coordinates(&fermat()),
            Err(SebastianiError::PartialsIndependent)
        );
    }

    #[test]
    fn transfer_matrix_examples() {
        let f = fermat();
        // member depending on z alone: a single 1 in the lower-right block
        let member = qp("z^3", &["x", "y", "z"]);
        let a = jacobi_transfer_matrix(&member, &f, 1).unwrap();
        assert_eq!(a.at(2, 2), &q(1));
        for j in 0..2 {
            assert_eq!(a.at(2, j), &q(0));
        }
        // member y^3 + z^3 with l = 0: identity lower-right 2x2 block
        let member = qp("y^3 + z^3", &["x", "y", "z"]);
        let a = jacobi_transfer_matrix(&member, &f, 0).unwrap();
        assert_eq!(a.at(1, 1), &q(1));
        assert_eq!(a.at(2, 2), &q(1));
        assert_eq!(a.at(1, 2), &q(0));
        assert_eq!(a.at(2, 1), &q(0));
        // partial outside the Jacobi piece
        let bad = qp("x*y^2 + z^3", &["x", "y", "z"]);
        assert!(matches!(
            jacobi_transfer_matrix(&bad, &f, 0),
            Err(SebastianiError::TransferInconsistent { .. })
        ));
        // arrangement violated
        assert!(matches!(
            jacobi_transfer_matrix(&qp("x^3", &["x", "y", "z"]), &f, 0),
            Err(SebastianiError::NotArranged { index: 0 })
        ));
    }

    #[test]
    fn alignment_identity_for_already_split() {
        let f = fermat();
        let member = qp("y^3 + z^3", &["x", "y", "z"]);
        let a = jacobi_transfer_matrix(&member, &f, 0).unwrap();
        let change = alignment_change(&f, &member, &a, 0).unwrap();
        assert_eq!(change, CoordinateChange::identity(Rationals, 3));
    }

    #[test]
    fn alignment_unshears() {
        // f = x^3 + (y+x)^3 + z^3, member = (y+x)^3 + z^3
        let f = qp("2*x^3 + 3*x^2*y + 3*x*y^2 + y^3 + z^3", &["x", "y", "z"]);
        let member = qp("x^3 + 3*x^2*y + 3*x*y^2 + y^3 + z^3", &["x", "y", "z"]);
        let (t1, l) = splitting_coordinates(&member).unwrap();
        let m1 = member.substitute(&t1).unwrap();
        let f1 = f.substitute(&t1).unwrap();
        let a = jacobi_transfer_matrix(&m1, &f1, l).unwrap();
        let t2 = alignment_change(&f1, &m1, &a, l).unwrap();
        // postconditions are checked inside; composing must split f
        let total = t1.compose(&t2);
        let h = f.substitute(&total).unwrap();
        let d = split_at(&f, &h, l, total).unwrap();
        assert!(verify_decomposition(&f, &d));
    }

    #[test]
    fn extract_fermat() {
        let out = extract_decomposition(&fermat(), ExtractOptions::default()).unwrap();
        let Extraction::Decomposition(d) = out else {
            panic!("expected a decomposition");
        };
        assert!(verify_decomposition(&fermat(), &d));
    }

    #[test]
    fn extract_not_st() {
        let out = extract_decomposition(&weierstrass(), ExtractOptions::default()).unwrap();
        assert!(matches!(out, Extraction::NotSt));
    }

    #[test]
    fn extract_sheared_split_quartic() {
        // x^4 + (y^4 + z^4), sheared by x -> x + y - z, y -> y + z
        let split = qp("x^4 + y^4 + z^4", &["x", "y", "z"]);
        let shear = CoordinateChange::new(ScalarMatrix::from_rows(
            Rationals,
            vec![
                vec![q(1), q(1), q(-1)],
                vec![q(0), q(1), q(1)],
                vec![q(0), q(0), q(1)],
            ],
        ))
        .unwrap();
        let f = split.substitute(&shear).unwrap();
        let out = extract_decomposition(&f, ExtractOptions::default()).unwrap();
        let Extraction::Decomposition(d) = out else {
            panic!("expected a decomposition, got {out:?}");
        };
        assert!(verify_decomposition(&f, &d));
    }

    #[test]
    fn extract_linear_form() {
        let f = qp("3*x - 2*z", &["x", "y", "z"]);
        let out = extract_decomposition(&f, ExtractOptions::default()).unwrap();
        let Extraction::Decomposition(d) = out else {
            panic!("expected a decomposition");
        };
        assert!(verify_decomposition(&f, &d));
        assert_eq!(d.split_l, 0);
    }

    #[test]
    fn extract_rejects_singular() {
        let f = qp("x*y*z", &["x", "y", "z"]);
        assert_eq!(
            extract_decomposition(&f, ExtractOptions::default()).err(),
            Some(SebastianiError::NotSmooth)
        );
    }

    #[test]
    fn tampered_decomposition_fails_verification() {
        let f = fermat();
        let good = STDecomposition {
            change: CoordinateChange::identity(Rationals, 3),
            split_l: 0,
            f1: qp("x^3", &["x", "y", "z"]),
            f2: qp("y^3 + z^3", &["x", "y", "z"]),
        };
        assert!(verify_decomposition(&f, &good));
        let tampered = STDecomposition {
            f1: qp("x^3 + x*y^2", &["x", "y", "z"]),
            ..good.clone()
        };
        assert!(!verify_decomposition(&f, &tampered));
        let wrong_sum = STDecomposition {
            f1: qp("2*x^3", &["x", "y", "z"]),
            ..good
        };
        assert!(!verify_decomposition(&f, &wrong_sum));
    }

    #[test]
    fn f_always_in_st_space() {
        for t in [
            "x^3 + y^3 + z^3",
            "y^2*z - x^3 - x*z^2",
            "x^4 + x^2*y^2 + z^4",
            "x^3 + 2*x*y*z + z^3",
        ] {
            let f = qp(t, &["x", "y", "z"]);
            let s = st_space(&f).unwrap();
            let fv = f.coeff_vector(f.degree()).unwrap();
            assert!(s.space.member(&fv).unwrap(), "f not in S(f) for {t}");
        }
    }

    #[test]
    fn split_sum_is_st() {
        // f1(x) + f2(y, z) with both parts nonzero is detected as ST
        for t in ["x^3 + y^3 - y*z^2", "x^4 + y^4 + y^2*z^2 + z^4"] {
            let f = qp(t, &["x", "y", "z"]);
            assert!(jacobi::is_smooth(&f).unwrap(), "{t} should be smooth");
            assert_eq!(is_st(&f).unwrap().verdict, StVerdict::St, "{t}");
        }
    }

}
