//! Scalar information quantities: relative entropies, the psi / psi-star /
//! phi exponent functions, mutual informations, trace-distance secrecy
//! criteria, and (conditional) Renyi entropies.
//!
//! Everything is evaluated through exact spectral decompositions, in nats.
//! Joint classical-quantum states stay block-diagonal throughout; no dense
//! d_A * d_E matrix is ever formed.

use crate::channels::{CQChannel, Distribution, JointCQState, average_output};
use crate::error::{Error, Result};
use crate::hermitian::{
    DensityMatrix, HermitianOperator, MatrixFn, matrix_function, spectral_decompose, trace_norm,
    DEFAULT_GROUP_TOL,
};

/// Largest admissible weight of rho outside the support of sigma.
const SUPPORT_LEAK_TOL: f64 = 1e-9;
/// Cap on the inner exponent 1/(1-s) of the Gallager-type function.
const PHI_EXPONENT_CAP: f64 = 1e6;

/// Errors with SupportViolation when rho has weight outside supp(sigma).
fn check_support(rho: &HermitianOperator, sigma: &HermitianOperator) -> Result<()> {
    let proj = matrix_function(sigma, MatrixFn::Power(0.0))?;
    let inside = rho.trace_product(&proj)?;
    if (rho.trace() - inside).abs() > SUPPORT_LEAK_TOL {
        return Err(Error::SupportViolation);
    }
    Ok(())
}

/// Tr rho log rho over the support of rho.
fn neg_entropy(rho: &HermitianOperator) -> f64 {
    let decomp = spectral_decompose(rho, DEFAULT_GROUP_TOL);
    let max = decomp.eigenvalues.iter().cloned().fold(0.0_f64, f64::max);
    let tol = 1e-12 * max.max(f64::MIN_POSITIVE);
    decomp.eigenvalues.iter().filter(|&&l| l > tol).map(|&l| l * l.ln()).sum()
}

/// Relative entropy D(rho||sigma) = Tr rho (log rho - log sigma).
pub fn rel_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), sigma.dim()));
    }
    check_support(rho.op(), sigma.op())?;
    let log_sigma = matrix_function(sigma.op(), MatrixFn::Log)?;
    Ok(neg_entropy(rho.op()) - rho.op().trace_product(&log_sigma)?)
}

/// The lower variant: Tr rho log(sigma^{-1/2} rho sigma^{-1/2}).
pub fn rel_entropy_lower(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), sigma.dim()));
    }
    check_support(rho.op(), sigma.op())?;
    let s_inv_half = matrix_function(sigma.op(), MatrixFn::Power(-0.5))?;
    let inner =
        HermitianOperator::symmetrize(s_inv_half.matrix() * rho.matrix() * s_inv_half.matrix());
    let log_inner = matrix_function(&inner, MatrixFn::Log)?;
    rho.op().trace_product(&log_inner)
}

/// psi(s) = log Tr rho^{1+s} sigma^{-s}; psi(0) = 0.
pub fn psi_pair(s: f64, rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if !(-1.0..=1.0).contains(&s) {
        return Err(Error::InputOutOfRange(format!("s = {s} outside [-1, 1]")));
    }
    if s == 0.0 {
        return Ok(0.0);
    }
    if s > 0.0 {
        check_support(rho.op(), sigma.op())?;
    }
    let rho_pow = matrix_function(rho.op(), MatrixFn::Power(1.0 + s))?;
    let sigma_pow = matrix_function(sigma.op(), MatrixFn::Power(-s))?;
    Ok(rho_pow.trace_product(&sigma_pow)?.ln())
}

/// psi-star(s) = log Tr rho (sigma^{-1/2} rho sigma^{-1/2})^s for s in (0, 1].
pub fn psi_star_pair(s: f64, rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if !(0.0..=1.0).contains(&s) || s == 0.0 {
        return Err(Error::InputOutOfRange(format!("s = {s} outside (0, 1]")));
    }
    check_support(rho.op(), sigma.op())?;
    let s_inv_half = matrix_function(sigma.op(), MatrixFn::Power(-0.5))?;
    let inner =
        HermitianOperator::symmetrize(s_inv_half.matrix() * rho.matrix() * s_inv_half.matrix());
    let inner_pow = matrix_function(&inner, MatrixFn::Power(s))?;
    Ok(rho.op().trace_product(&inner_pow)?.ln())
}

/// psi(s|W,p) = log sum_a p_a Tr W_a^{1+s} W_p^{-s}.
pub fn channel_psi(s: f64, w: &CQChannel, p: &Distribution) -> Result<f64> {
    if !(-1.0..=1.0).contains(&s) {
        return Err(Error::InputOutOfRange(format!("s = {s} outside [-1, 1]")));
    }
    if p.support_size() != w.alphabet_size() {
        return Err(Error::SizeMismatch(p.support_size(), w.alphabet_size()));
    }
    if s == 0.0 {
        return Ok(0.0);
    }
    let wp = average_output(w, p)?;
    let wp_pow = matrix_function(wp.op(), MatrixFn::Power(-s))?;
    let mut total = 0.0;
    for (pa, wa) in p.probs().iter().zip(w.outputs()) {
        if *pa == 0.0 {
            continue;
        }
        let wa_pow = matrix_function(wa.op(), MatrixFn::Power(1.0 + s))?;
        total += pa * wa_pow.trace_product(&wp_pow)?;
    }
    Ok(total.ln())
}

/// psi-star(s|W,p) = log sum_a p_a Tr W_a (W_p^{-1/2} W_a W_p^{-1/2})^s.
pub fn channel_psi_star(s: f64, w: &CQChannel, p: &Distribution) -> Result<f64> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::InputOutOfRange(format!("s = {s} outside [0, 1]")));
    }
    if p.support_size() != w.alphabet_size() {
        return Err(Error::SizeMismatch(p.support_size(), w.alphabet_size()));
    }
    if s == 0.0 {
        return Ok(0.0);
    }
    let wp = average_output(w, p)?;
    let wph = matrix_function(wp.op(), MatrixFn::Power(-0.5))?;
    let mut total = 0.0;
    for (pa, wa) in p.probs().iter().zip(w.outputs()) {
        if *pa == 0.0 {
            continue;
        }
        let inner = HermitianOperator::symmetrize(wph.matrix() * wa.matrix() * wph.matrix());
        let inner_pow = matrix_function(&inner, MatrixFn::Power(s))?;
        total += pa * wa.op().trace_product(&inner_pow)?;
    }
    Ok(total.ln())
}

/// phi(s|W,p) = log Tr (sum_x p(x) W_x^{1/(1-s)})^{1-s}, the Gallager-type
/// function; s in [-1, 1) with the inner exponent capped.
pub fn channel_phi(s: f64, w: &CQChannel, p: &Distribution) -> Result<f64> {
    if !(-1.0..1.0).contains(&s) {
        return Err(Error::InputOutOfRange(format!("s = {s} outside [-1, 1)")));
    }
    if p.support_size() != w.alphabet_size() {
        return Err(Error::SizeMismatch(p.support_size(), w.alphabet_size()));
    }
    let alpha = 1.0 / (1.0 - s);
    if alpha > PHI_EXPONENT_CAP {
        return Err(Error::InputOutOfRange(format!("inner exponent 1/(1-s) = {alpha} too large")));
    }
    let dim = w.output_dim();
    let mut acc = HermitianOperator::zeros(dim);
    for (px, wx) in p.probs().iter().zip(w.outputs()) {
        if *px == 0.0 {
            continue;
        }
        let wx_pow = matrix_function(wx.op(), MatrixFn::Power(alpha))?;
        acc = acc.add(&wx_pow.scale(*px))?;
    }
    let outer = matrix_function(&acc, MatrixFn::Power(1.0 - s))?;
    Ok(outer.trace().ln())
}

/// Extended psi(t|W,p,sigma) = log sum_x p(x) Tr W_x^{1+t} sigma^{-t} with a
/// (possibly non-normalized) positive operator sigma.
pub fn psi_extended(
    t: f64,
    w: &CQChannel,
    p: &Distribution,
    sigma: &HermitianOperator,
) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::InputOutOfRange(format!("t = {t} < 0")));
    }
    if p.support_size() != w.alphabet_size() {
        return Err(Error::SizeMismatch(p.support_size(), w.alphabet_size()));
    }
    let sigma_pow = matrix_function(sigma, MatrixFn::Power(-t))?;
    let mut total = 0.0;
    for (px, wx) in p.probs().iter().zip(w.outputs()) {
        if *px == 0.0 {
            continue;
        }
        check_support(wx.op(), sigma)?;
        let wx_pow = matrix_function(wx.op(), MatrixFn::Power(1.0 + t))?;
        total += px * wx_pow.trace_product(&sigma_pow)?;
    }
    Ok(total.ln())
}

/// The state attaining min_sigma psi(t|W,p,sigma):
/// (sum_x p_x W_x^{1+t})^{1/(1+t)}, normalized.
pub fn phi_minimizer(t: f64, w: &CQChannel, p: &Distribution) -> Result<DensityMatrix> {
    if t < 0.0 {
        return Err(Error::InputOutOfRange(format!("t = {t} < 0")));
    }
    let dim = w.output_dim();
    let mut acc = HermitianOperator::zeros(dim);
    for (px, wx) in p.probs().iter().zip(w.outputs()) {
        if *px == 0.0 {
            continue;
        }
        let wx_pow = matrix_function(wx.op(), MatrixFn::Power(1.0 + t))?;
        acc = acc.add(&wx_pow.scale(*px))?;
    }
    let root = matrix_function(&acc, MatrixFn::Power(1.0 / (1.0 + t)))?;
    let tr = root.trace();
    DensityMatrix::new(root.scale(1.0 / tr))
}

/// Which mutual-information variant to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MutualInfoVariant {
    /// I(A:E) = D(rho || rho_A (x) rho_E).
    I,
    /// The lower variant built from the lower relative entropy.
    ILower,
    /// I'(A:E) = D(rho || mixed_A (x) rho_E) = I + D(p || uniform).
    IPrime,
    /// Lower variant of I'.
    ILowerPrime,
}

/// Mutual information between the classical input and the channel output.
pub fn mutual_info(w: &CQChannel, p: &Distribution, variant: MutualInfoVariant) -> Result<f64> {
    if p.support_size() != w.alphabet_size() {
        return Err(Error::SizeMismatch(p.support_size(), w.alphabet_size()));
    }
    let wp = average_output(w, p)?;
    let m = p.support_size() as f64;
    match variant {
        MutualInfoVariant::I => {
            let mut total = 0.0;
            for (pa, wa) in p.probs().iter().zip(w.outputs()) {
                if *pa == 0.0 {
                    continue;
                }
                total += pa * rel_entropy(wa, &wp)?;
            }
            Ok(total)
        }
        MutualInfoVariant::IPrime => {
            let i = mutual_info(w, p, MutualInfoVariant::I)?;
            Ok(i + m.ln() - shannon_entropy(p))
        }
        MutualInfoVariant::ILower | MutualInfoVariant::ILowerPrime => {
            let prime = variant == MutualInfoVariant::ILowerPrime;
            let wph = matrix_function(wp.op(), MatrixFn::Power(-0.5))?;
            let mut total = 0.0;
            for (pa, wa) in p.probs().iter().zip(w.outputs()) {
                if *pa == 0.0 {
                    continue;
                }
                let scale = if prime { m * pa } else { 1.0 };
                let inner = HermitianOperator::symmetrize(
                    (wph.matrix() * wa.matrix() * wph.matrix()).scale(scale),
                );
                let log_inner = matrix_function(&inner, MatrixFn::Log)?;
                total += pa * wa.op().trace_product(&log_inner)?;
            }
            Ok(total)
        }
    }
}

/// Which trace-distance secrecy criterion to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum D1Variant {
    /// ||rho - rho_A (x) rho_E||_1.
    D1,
    /// ||rho - mixed_A (x) rho_E||_1 (Renner-style).
    D1Prime,
}

/// Trace-distance secrecy criterion of a block-diagonal joint state.
pub fn d1_criteria(state: &JointCQState, variant: D1Variant) -> f64 {
    let rho_e = state.quantum_marginal();
    let m = state.classical_size() as f64;
    let mut total = 0.0;
    for (pa, wa) in state.classical_dist.probs().iter().zip(&state.conditional_states) {
        let block = match variant {
            D1Variant::D1 => wa.matrix().scale(*pa) - rho_e.matrix().scale(*pa),
            D1Variant::D1Prime => wa.matrix().scale(*pa) - rho_e.matrix().scale(1.0 / m),
        };
        total += trace_norm(&HermitianOperator::symmetrize(block));
    }
    total
}

/// Shannon entropy of a distribution, in nats.
pub fn shannon_entropy(p: &Distribution) -> f64 {
    -p.probs().iter().filter(|&&q| q > 0.0).map(|&q| q * q.ln()).sum::<f64>()
}

/// Renyi entropy of order 1+s; s = 0 returns the Shannon limit.
pub fn renyi_entropy(p: &Distribution, s: f64) -> f64 {
    if s == 0.0 {
        return shannon_entropy(p);
    }
    let total: f64 = p.probs().iter().filter(|&&q| q > 0.0).map(|&q| q.powf(1.0 + s)).sum();
    -total.ln() / s
}

/// Conditional Renyi entropy of order 1+s of a classical joint table
/// P(a, e) indexed [a][e]; s = 0 returns conditional Shannon entropy.
pub fn cond_renyi_classical(table: &[Vec<f64>], s: f64) -> Result<f64> {
    if table.is_empty() || table[0].is_empty() {
        return Err(Error::InvalidTable);
    }
    let ne = table[0].len();
    let mut total = 0.0;
    for row in table {
        if row.len() != ne {
            return Err(Error::InvalidTable);
        }
        for &q in row {
            if q < 0.0 || !q.is_finite() {
                return Err(Error::InvalidTable);
            }
            total += q;
        }
    }
    if (total - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidTable);
    }
    let p_e: Vec<f64> = (0..ne).map(|e| table.iter().map(|row| row[e]).sum()).collect();
    if s == 0.0 {
        let mut h = 0.0;
        for (e, &pe) in p_e.iter().enumerate() {
            if pe == 0.0 {
                continue;
            }
            for row in table {
                let q = row[e] / pe;
                if q > 0.0 {
                    h -= pe * q * q.ln();
                }
            }
        }
        Ok(h)
    } else {
        let mut acc = 0.0;
        for (e, &pe) in p_e.iter().enumerate() {
            if pe == 0.0 {
                continue;
            }
            let inner: f64 = table
                .iter()
                .map(|row| row[e] / pe)
                .filter(|&q| q > 0.0)
                .map(|q| q.powf(1.0 + s))
                .sum();
            acc += pe * inner;
        }
        Ok(-acc.ln() / s)
    }
}

/// Conditional Renyi entropy relative to sigma:
/// (-1/s) log Tr rho^{1+s} (I (x) sigma^{-s}) for block-diagonal rho[W,p],
/// which reduces to (-1/s) log sum_a p_a^{1+s} Tr W_a^{1+s} sigma^{-s}.
pub fn cond_renyi_sigma(state: &JointCQState, sigma: &DensityMatrix, s: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&s) || s == 0.0 {
        return Err(Error::InputOutOfRange(format!("s = {s} outside (0, 1]")));
    }
    if state.quantum_dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(state.quantum_dim(), sigma.dim()));
    }
    let sigma_pow = matrix_function(sigma.op(), MatrixFn::Power(-s))?;
    let mut total = 0.0;
    for (pa, wa) in state.classical_dist.probs().iter().zip(&state.conditional_states) {
        if *pa == 0.0 {
            continue;
        }
        check_support(wa.op(), sigma.op())?;
        let wa_pow = matrix_function(wa.op(), MatrixFn::Power(1.0 + s))?;
        total += pa.powf(1.0 + s) * wa_pow.trace_product(&sigma_pow)?;
    }
    Ok(-total.ln() / s)
}

/// eta(x, y) = -x log x + x y.
pub fn eta(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        -x * x.ln() + x * y
    }
}
