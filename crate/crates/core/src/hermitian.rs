//! Hermitian/PSD matrix kernel: spectral decomposition, matrix functions on
//! the support, pinching maps, spectral statistics, and the trace norm.
//!
//! All decompositions symmetrize the input as (A + A†)/2 first to absorb
//! round-off, and all pseudo-inverse powers and logarithms act on the support
//! only.

use nalgebra::{Complex, DMatrix, DVector};
use rand::Rng;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;

/// Default relative tolerance for clustering eigenvalues into groups.
pub const DEFAULT_GROUP_TOL: f64 = 1e-9;
/// Support cutoff, relative to the largest eigenvalue.
pub const SUPPORT_TOL_FACTOR: f64 = 1e-12;

/// A complex Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    mat: CMat,
}

impl HermitianOperator {
    /// Checks Hermiticity within 1e-12 relative tolerance and symmetrizes.
    pub fn new(mat: CMat) -> Result<Self> {
        assert_eq!(mat.nrows(), mat.ncols(), "matrix must be square");
        let scale = mat.iter().map(|z| z.norm()).fold(1.0_f64, f64::max);
        let asym = (&mat - mat.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if asym > 1e-12 * scale {
            return Err(Error::NonHermitian(asym / scale));
        }
        Ok(Self::symmetrize(mat))
    }

    /// Takes (A + A†)/2 without a Hermiticity check.
    pub fn symmetrize(mat: CMat) -> Self {
        let sym = (&mat + mat.adjoint()).scale(0.5);
        Self { mat: sym }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { mat: CMat::zeros(dim, dim) }
    }

    pub fn identity(dim: usize) -> Self {
        Self { mat: CMat::identity(dim, dim) }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut mat = CMat::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            mat[(i, i)] = C64::new(d, 0.0);
        }
        Self { mat }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn into_matrix(self) -> CMat {
        self.mat
    }

    pub fn trace(&self) -> f64 {
        self.mat.diagonal().iter().map(|z| z.re).sum()
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self { mat: self.mat.scale(factor) }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(Self { mat: &self.mat + &other.mat })
    }

    /// Tr(AB) for Hermitian A, B; the result is real.
    pub fn trace_product(&self, other: &Self) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        let mut acc = 0.0;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                acc += (self.mat[(i, j)] * other.mat[(j, i)]).re;
            }
        }
        Ok(acc)
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self { mat: self.mat.kronecker(&other.mat) }
    }

    /// Largest singular deviation from PSD: most negative eigenvalue (0 if PSD).
    pub fn min_eigenvalue(&self) -> f64 {
        let decomp = spectral_decompose(self, DEFAULT_GROUP_TOL);
        decomp.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
    }
}

/// Density matrix: PSD within -1e-12 and unit trace within 1e-10.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    op: HermitianOperator,
}

impl DensityMatrix {
    pub fn new(op: HermitianOperator) -> Result<Self> {
        let tr = op.trace();
        if (tr - 1.0).abs() > 1e-10 {
            return Err(Error::InputOutOfRange(format!("trace {tr} != 1")));
        }
        if op.min_eigenvalue() < -1e-12 {
            return Err(Error::InputOutOfRange(format!(
                "negative eigenvalue {}",
                op.min_eigenvalue()
            )));
        }
        Ok(Self { op })
    }

    pub fn from_matrix(mat: CMat) -> Result<Self> {
        Self::new(HermitianOperator::new(mat)?)
    }

    /// |psi><psi| from a (not necessarily normalized) state vector.
    pub fn pure_state(state: &DVector<C64>) -> Self {
        let norm = state.norm();
        let normalized = state.unscale(norm);
        let mat = &normalized * normalized.adjoint();
        Self { op: HermitianOperator::symmetrize(mat) }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self { op: HermitianOperator::identity(dim).scale(1.0 / dim as f64) }
    }

    pub fn from_probabilities(probs: &[f64]) -> Self {
        Self { op: HermitianOperator::from_real_diagonal(probs) }
    }

    pub fn op(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn matrix(&self) -> &CMat {
        self.op.matrix()
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self { op: self.op.kron(&other.op) }
    }
}

/// Eigendecomposition with eigenvalues sorted descending and equal eigenvalues
/// clustered into groups.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Unitary whose columns are the eigenvectors, in eigenvalue order.
    pub eigenvectors: CMat,
    /// Half-open index ranges of equal eigenvalues.
    pub groups: Vec<std::ops::Range<usize>>,
}

impl SpectralDecomposition {
    /// U diag(f(lambda)) U† over the full spectrum.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> HermitianOperator {
        let dim = self.eigenvalues.len();
        let mut diag = CMat::zeros(dim, dim);
        for (i, &l) in self.eigenvalues.iter().enumerate() {
            diag[(i, i)] = C64::new(f(l), 0.0);
        }
        let mat = &self.eigenvectors * diag * self.eigenvectors.adjoint();
        HermitianOperator::symmetrize(mat)
    }

    pub fn reconstruct(&self) -> HermitianOperator {
        self.apply(|l| l)
    }

    /// Projector onto the i-th eigenvalue group.
    pub fn group_projector(&self, i: usize) -> CMat {
        let dim = self.eigenvalues.len();
        let mut proj = CMat::zeros(dim, dim);
        for j in self.groups[i].clone() {
            let col = self.eigenvectors.column(j);
            proj += &col * col.adjoint();
        }
        proj
    }
}

/// Spectral statistics entering the paper-style polynomial factors.
#[derive(Debug, Clone, Copy)]
pub struct SpectralStats {
    /// Number of distinct eigenvalue groups.
    pub v: usize,
    /// log(max) - log(min) over the support of the trace-normalized operator.
    pub lambda_support: f64,
    pub min_eig: f64,
    pub max_eig: f64,
    pub support_dim: usize,
    pub dim: usize,
}

impl SpectralStats {
    /// lambda over the full space; errors when the operator is singular.
    pub fn lambda(&self) -> Result<f64> {
        if self.support_dim < self.dim {
            Err(Error::SingularSpectrum)
        } else {
            Ok(self.lambda_support)
        }
    }
}

/// Eigendecomposition of a Hermitian operator, eigenvalues descending,
/// clustered with tolerance `group_tol` relative to the largest |eigenvalue|.
pub fn spectral_decompose(a: &HermitianOperator, group_tol: f64) -> SpectralDecomposition {
    assert!(group_tol > 0.0, "group_tol must be positive");
    let eig = a.mat.clone().symmetric_eigen();
    let dim = a.dim();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].partial_cmp(&eig.eigenvalues[i]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut eigenvectors = CMat::zeros(dim, dim);
    for (k, &i) in order.iter().enumerate() {
        eigenvectors.set_column(k, &eig.eigenvectors.column(i));
    }
    let scale = eigenvalues.iter().map(|l| l.abs()).fold(0.0_f64, f64::max);
    let abs_tol = group_tol * scale.max(f64::MIN_POSITIVE);
    let mut groups = Vec::new();
    let mut start = 0;
    for i in 1..=dim {
        if i == dim || (eigenvalues[i] - eigenvalues[i - 1]).abs() > abs_tol {
            groups.push(start..i);
            start = i;
        }
    }
    SpectralDecomposition { eigenvalues, eigenvectors, groups }
}

/// Matrix function applied through the spectrum.
#[derive(Debug, Clone, Copy)]
pub enum MatrixFn {
    /// x^alpha; zero eigenvalues map to zero for alpha > 0 and are excluded
    /// from the support for alpha <= 0.
    Power(f64),
    /// Natural log on the support.
    Log,
}

/// Applies `f` to the spectrum of `a`, keeping the eigenvectors. Powers with
/// non-positive exponents and logarithms act on the support only.
pub fn matrix_function(a: &HermitianOperator, f: MatrixFn) -> Result<HermitianOperator> {
    let decomp = spectral_decompose(a, DEFAULT_GROUP_TOL);
    let max_eig = decomp.eigenvalues.iter().cloned().fold(0.0_f64, f64::max);
    let tol = SUPPORT_TOL_FACTOR * max_eig.max(f64::MIN_POSITIVE);
    if decomp.eigenvalues.iter().all(|&l| l <= tol) {
        return Err(Error::EmptySupport);
    }
    let out = match f {
        MatrixFn::Power(alpha) => decomp.apply(|l| {
            if l <= tol {
                0.0
            } else {
                l.powf(alpha)
            }
        }),
        MatrixFn::Log => decomp.apply(|l| if l <= tol { 0.0 } else { l.ln() }),
    };
    Ok(out)
}

/// The pinching map of `sigma` applied to `rho`: sum of E_i rho E_i over the
/// eigenprojectors E_i of sigma.
pub fn pinching(
    sigma: &HermitianOperator,
    rho: &HermitianOperator,
    group_tol: f64,
) -> Result<HermitianOperator> {
    if sigma.dim() != rho.dim() {
        return Err(Error::DimensionMismatch(sigma.dim(), rho.dim()));
    }
    let decomp = spectral_decompose(sigma, group_tol);
    let mut acc = CMat::zeros(rho.dim(), rho.dim());
    for i in 0..decomp.groups.len() {
        let proj = decomp.group_projector(i);
        acc += &proj * rho.matrix() * &proj;
    }
    Ok(HermitianOperator::symmetrize(acc))
}

/// Number of distinct eigenvalues and the log-spread of the normalized spectrum.
pub fn spectral_stats(a: &HermitianOperator, group_tol: f64) -> SpectralStats {
    let decomp = spectral_decompose(a, group_tol);
    let trace: f64 = decomp.eigenvalues.iter().sum();
    let max_eig = decomp.eigenvalues.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min_eig = decomp.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    let tol = SUPPORT_TOL_FACTOR * max_eig.abs().max(f64::MIN_POSITIVE);
    let support: Vec<f64> = decomp
        .eigenvalues
        .iter()
        .filter(|&&l| l > tol)
        .map(|&l| l / trace)
        .collect();
    let lambda_support = if support.is_empty() {
        0.0
    } else {
        let hi = support.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lo = support.iter().cloned().fold(f64::INFINITY, f64::min);
        hi.ln() - lo.ln()
    };
    SpectralStats {
        v: decomp.groups.len(),
        lambda_support,
        min_eig,
        max_eig,
        support_dim: support.len(),
        dim: a.dim(),
    }
}

/// Trace norm ||A||_1 of a Hermitian operator.
pub fn trace_norm(a: &HermitianOperator) -> f64 {
    let decomp = spectral_decompose(a, DEFAULT_GROUP_TOL);
    decomp.eigenvalues.iter().map(|l| l.abs()).sum()
}

/// ||rho - sigma||_1 for density matrices; lies in [0, 2].
pub fn trace_norm_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    let diff = HermitianOperator::symmetrize(a.matrix() - b.matrix());
    Ok(trace_norm(&diff))
}

/// Ginibre-sampled random Hermitian matrix with entries of unit scale.
pub fn random_hermitian(dim: usize, rng: &mut impl Rng) -> HermitianOperator {
    let mat = CMat::from_fn(dim, dim, |_, _| {
        C64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0)
    });
    HermitianOperator::symmetrize(mat)
}

/// Full-rank random density matrix: GG†/Tr(GG†) for Ginibre G.
pub fn random_density(dim: usize, rng: &mut impl Rng) -> DensityMatrix {
    let g = CMat::from_fn(dim, dim, |_, _| {
        C64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0)
    });
    let mut m = &g * g.adjoint();
    // tiny ridge keeps the support full so relative entropies stay finite
    let tr: f64 = m.diagonal().iter().map(|z| z.re).sum();
    for i in 0..dim {
        m[(i, i)] += C64::new(1e-8 * tr, 0.0);
    }
    let tr: f64 = m.diagonal().iter().map(|z| z.re).sum();
    DensityMatrix { op: HermitianOperator::symmetrize(m.unscale(tr)) }
}
