//! Secrecy-exponent evaluators, finite-blocklength bound calculators,
//! equivocation/capacity computations for degraded pairs, and the
//! depolarizing closed forms with the phase-error comparison suite.
//!
//! All rates and entropies are in nats unless stated otherwise.

use crate::channels::{CQChannel, DepolarizingSpec, Distribution, average_output};
use crate::error::{Error, Result};
use crate::hermitian::{matrix_function, spectral_stats, HermitianOperator, MatrixFn};
use crate::optim::{maximize_1d, maximize_simplex};
use crate::quantities::{
    channel_phi, channel_psi, cond_renyi_classical, mutual_info, renyi_entropy, MutualInfoVariant,
};

/// Default grid size for 1-D s-optimizations.
pub const DEFAULT_S_GRID: usize = 512;
/// Refinement tolerance of the golden-section stage.
pub const S_TOL: f64 = 1e-10;
/// Simplex grid resolution for input-distribution optimizations.
pub const SIMPLEX_STEPS: usize = 50;

/// A labelled rate/exponent curve.
#[derive(Debug, Clone)]
pub struct ExponentCurve {
    pub label: String,
    /// Rates in nats.
    pub rates: Vec<f64>,
    pub values: Vec<f64>,
}

impl ExponentCurve {
    pub fn new(label: impl Into<String>, rates: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if rates.len() != values.len() {
            return Err(Error::SizeMismatch(rates.len(), values.len()));
        }
        for window in rates.windows(2) {
            if window[1] < window[0] {
                return Err(Error::InputOutOfRange("rates must be non-decreasing".into()));
            }
        }
        for (&r, &v) in rates.iter().zip(&values) {
            if v < -1e-12 {
                return Err(Error::InputOutOfRange(format!("negative exponent {v} at rate {r}")));
            }
        }
        Ok(Self { label: label.into(), rates, values })
    }
}

/// max_{0<=s<=1} sR - psi(s|W,p).
pub fn e_psi(r: f64, w: &CQChannel, p: &Distribution) -> Result<f64> {
    e_psi_grid(r, w, p, DEFAULT_S_GRID)
}

pub fn e_psi_grid(r: f64, w: &CQChannel, p: &Distribution, grid: usize) -> Result<f64> {
    Ok(e_psi_with_s(r, w, p, grid)?.0)
}

/// e_psi together with its maximizing s.
pub fn e_psi_with_s(r: f64, w: &CQChannel, p: &Distribution, grid: usize) -> Result<(f64, f64)> {
    if r < 0.0 {
        return Err(Error::InputOutOfRange(format!("rate {r} < 0")));
    }
    let obj = |s: f64| s * r - channel_psi(s, w, p).expect("valid s range");
    channel_psi(0.5, w, p)?; // surface size errors before optimizing
    let opt = maximize_1d(obj, 0.0, 1.0, grid, S_TOL);
    Ok((opt.value.max(0.0), opt.x))
}

/// max_{0<=s<=1} (s/2)R - ((1+s)/2) phi(s/(1+s)|W,p).
pub fn e_phi(r: f64, w: &CQChannel, p: &Distribution) -> Result<f64> {
    e_phi_grid(r, w, p, DEFAULT_S_GRID)
}

pub fn e_phi_grid(r: f64, w: &CQChannel, p: &Distribution, grid: usize) -> Result<f64> {
    Ok(e_phi_with_s(r, w, p, grid)?.0)
}

/// e_phi together with its maximizing s.
pub fn e_phi_with_s(r: f64, w: &CQChannel, p: &Distribution, grid: usize) -> Result<(f64, f64)> {
    if r < 0.0 {
        return Err(Error::InputOutOfRange(format!("rate {r} < 0")));
    }
    channel_phi(0.25, w, p)?;
    let obj = |s: f64| {
        0.5 * s * r - 0.5 * (1.0 + s) * channel_phi(s / (1.0 + s), w, p).expect("s/(1+s) in [0,1/2]")
    };
    let opt = maximize_1d(obj, 0.0, 1.0, grid, S_TOL);
    Ok((opt.value.max(0.0), opt.x))
}

/// The three one-shot bounds with their optimizing exponents.
#[derive(Debug, Clone, Copy)]
pub struct FiniteNBounds {
    /// Bound on Bob's average decoding error.
    pub eps_bound: f64,
    pub s_eps: f64,
    /// Bound on the leaked information (nats).
    pub info_bound: f64,
    pub s_info: f64,
    /// Bound on the trace-distance criterion.
    pub d1_bound: f64,
    pub s_d1: f64,
    pub m: usize,
    pub l: usize,
}

/// One-shot guaranteed-code bounds: error <= c_eps min_s (ML)^s e^{psi(-s|W^B,p)},
/// leak <= c_i min_s v^s e^{-s H_{1+s}(Q) + psi(s|W^E,p)} / s, and the
/// trace-distance analogue with the mu_s spectral factor. The strengthened
/// mode trades |Phi| = M/4 for factors (48, 12, 24) instead of (12, 3, 3).
pub fn finite_n_bounds(
    m: usize,
    q: &Distribution,
    wb: &CQChannel,
    we: &CQChannel,
    p: &Distribution,
    corollary_mode: bool,
) -> Result<FiniteNBounds> {
    finite_n_bounds_grid(m, q, wb, we, p, corollary_mode, DEFAULT_S_GRID)
}

pub fn finite_n_bounds_grid(
    m: usize,
    q: &Distribution,
    wb: &CQChannel,
    we: &CQChannel,
    p: &Distribution,
    corollary_mode: bool,
    grid: usize,
) -> Result<FiniteNBounds> {
    if m < 1 {
        return Err(Error::InputOutOfRange("M must be >= 1".into()));
    }
    let (c_eps, c_info, c_d1) = if corollary_mode { (48.0, 12.0, 24.0) } else { (12.0, 3.0, 3.0) };
    let l = q.support_size();
    let ml = (m * l) as f64;

    channel_psi(0.5, wb, p)?;
    channel_psi(0.5, we, p)?;

    // epsilon: minimize s ln(ML) + psi(-s|W^B,p) over [0,1]
    let eps_opt = maximize_1d(
        |s| -(s * ml.ln() + channel_psi(-s, wb, p).expect("s in [-1,0]")),
        0.0,
        1.0,
        grid,
        S_TOL,
    );
    let eps_bound = c_eps * (-eps_opt.value).exp();

    // information: minimize s ln v - s H_{1+s}(Q) + psi(s|W^E,p) - ln s on (0,1]
    let wep = average_output(we, p)?;
    let v = spectral_stats(wep.op(), 1e-9).v as f64;
    let lo = 1.0 / grid as f64;
    let info_opt = maximize_1d(
        |s| -(s * v.ln() - s * renyi_entropy(q, s) + channel_psi(s, we, p).expect("s in (0,1]") - s.ln()),
        lo,
        1.0,
        grid,
        S_TOL,
    );
    let info_bound = c_info * (-info_opt.value).exp();

    // d1: minimize ln(mu_s) - (s/2) H_{1+s}(Q) + ((1+s)/2) phi(s/(1+s)|W^E,p)
    let d1_obj = |s: f64| -> f64 {
        let mu = mu_factor(we, p, s).expect("spectral stats");
        -(mu.ln() - 0.5 * s * renyi_entropy(q, s)
            + 0.5 * (1.0 + s) * channel_phi(s / (1.0 + s), we, p).expect("phi arg in [0,1/2]"))
    };
    let d1_opt = maximize_1d(d1_obj, lo, 1.0, grid, S_TOL);
    let d1_bound = c_d1 * (-d1_opt.value).exp();

    Ok(FiniteNBounds {
        eps_bound,
        s_eps: eps_opt.x,
        info_bound,
        s_info: info_opt.x,
        d1_bound,
        s_d1: d1_opt.x,
        m,
        l,
    })
}

/// mu_s = min{ 4 + sqrt(v_s), (4 + sqrt(ceil(lambda_s))) e^{s/2} } computed
/// from the spectrum of sum_x p_x (W_x)^{1+s}. The lambda branch is skipped
/// when that operator is singular.
pub fn mu_factor(we: &CQChannel, p: &Distribution, s: f64) -> Result<f64> {
    let dim = we.output_dim();
    let mut acc = HermitianOperator::zeros(dim);
    for (px, wx) in p.probs().iter().zip(we.outputs()) {
        if *px == 0.0 {
            continue;
        }
        let pow = matrix_function(wx.op(), MatrixFn::Power(1.0 + s))?;
        acc = acc.add(&pow.scale(*px))?;
    }
    let stats = spectral_stats(&acc, 1e-9);
    let branch_v = 4.0 + (stats.v as f64).sqrt();
    let mu = match stats.lambda() {
        Ok(lambda) => branch_v.min((4.0 + lambda.ceil().sqrt()) * (0.5 * s).exp()),
        Err(_) => branch_v,
    };
    Ok(mu)
}

/// Bound on the leaked information from the alternative one-shot theorem:
/// log v + (1/s)(log 4 + [psi(s|W^E,p) - s H_{1+s}(Q)]_+), for s in (0,1].
pub fn equivocation_bound(q: &Distribution, we: &CQChannel, p: &Distribution, s: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&s) || s == 0.0 {
        return Err(Error::InputOutOfRange(format!("s = {s} outside (0, 1]")));
    }
    let wep = average_output(we, p)?;
    let v = spectral_stats(wep.op(), 1e-9).v as f64;
    let bracket = (channel_psi(s, we, p)? - s * renyi_entropy(q, s)).max(0.0);
    Ok(v.ln() + (4.0_f64.ln() + bracket) / s)
}

/// Asymptotic leaked-information rate with sacrifice rate R0:
/// max(I(W^E,p) - R0, 0).
pub fn asymptotic_leak_rate(we: &CQChannel, p: &Distribution, r0: f64) -> Result<f64> {
    if r0 < 0.0 {
        return Err(Error::InputOutOfRange(format!("R0 = {r0} < 0")));
    }
    Ok((mutual_info(we, p, MutualInfoVariant::I)? - r0).max(0.0))
}

/// Which optimum to take over the feasible input distributions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquivocationMode {
    Min,
    Max,
}

/// Equivocation rate and the corresponding leaked rate.
#[derive(Debug, Clone, Copy)]
pub struct Equivocation {
    /// H(R): optimized I(W^B,p) - I(W^E,p) over {p : I(W^B,p) >= R}.
    pub h: f64,
    /// R - H(R), clipped to [0, R].
    pub leaked: f64,
}

/// Equivocation rate of a degraded pair at message rate R:
/// opt_{p: I(W^B,p) >= R} I(W^B,p) - I(W^E,p), with `mode` selecting min/max.
pub fn equivocation_rate_degraded(
    wb: &CQChannel,
    we: &CQChannel,
    r: f64,
    mode: EquivocationMode,
) -> Result<Equivocation> {
    if wb.alphabet_size() != we.alphabet_size() {
        return Err(Error::SizeMismatch(wb.alphabet_size(), we.alphabet_size()));
    }
    let n = wb.alphabet_size();
    let ib = |p: &[f64]| {
        let dist = Distribution::from_weights(p).expect("simplex point");
        mutual_info(wb, &dist, MutualInfoVariant::I).expect("sizes match")
    };
    let diff = |p: &[f64]| {
        let dist = Distribution::from_weights(p).expect("simplex point");
        mutual_info(wb, &dist, MutualInfoVariant::I).expect("sizes match")
            - mutual_info(we, &dist, MutualInfoVariant::I).expect("sizes match")
    };
    let max_ib = maximize_simplex(ib, n, SIMPLEX_STEPS, |_| true, 1e-6)
        .expect("unconstrained simplex search")
        .value;
    if r > max_ib + 1e-9 {
        return Err(Error::Infeasible { rate: r, max: max_ib });
    }
    let feasible = |p: &[f64]| ib(p) >= r - 1e-9;
    let h = match mode {
        EquivocationMode::Max => {
            maximize_simplex(diff, n, SIMPLEX_STEPS, feasible, 1e-6)
                .ok_or(Error::Infeasible { rate: r, max: max_ib })?
                .value
        }
        EquivocationMode::Min => {
            -maximize_simplex(|p| -diff(p), n, SIMPLEX_STEPS, feasible, 1e-6)
                .ok_or(Error::Infeasible { rate: r, max: max_ib })?
                .value
        }
    };
    Ok(Equivocation { h, leaked: (r - h).clamp(0.0, r) })
}

/// Secrecy capacity of a degraded pair: max_p I(W^B,p) - I(W^E,p).
pub fn capacity_degraded(wb: &CQChannel, we: &CQChannel) -> Result<f64> {
    if wb.alphabet_size() != we.alphabet_size() {
        return Err(Error::SizeMismatch(wb.alphabet_size(), we.alphabet_size()));
    }
    let n = wb.alphabet_size();
    let diff = |p: &[f64]| {
        let dist = Distribution::from_weights(p).expect("simplex point");
        mutual_info(wb, &dist, MutualInfoVariant::I).expect("sizes match")
            - mutual_info(we, &dist, MutualInfoVariant::I).expect("sizes match")
    };
    let opt = maximize_simplex(diff, n, SIMPLEX_STEPS, |_| true, 1e-6)
        .expect("unconstrained simplex search");
    Ok(opt.value.max(0.0))
}

/// The joint table P(x, z) of a depolarizing spec, rows indexed by x.
fn depolarizing_table(spec: &DepolarizingSpec) -> Vec<Vec<f64>> {
    (0..spec.d)
        .map(|x| (0..spec.d).map(|z| spec.pxz.prob(x * spec.d + z)).collect())
        .collect()
}

/// Closed form psi(s|W^E,P_mix) = s H_{1-s}(X|Z|P^{XZ}) for the depolarizing
/// environment channel.
pub fn depolarizing_psi_closed(s: f64, spec: &DepolarizingSpec) -> Result<f64> {
    if !(0.0..=1.0).contains(&s) || s == 0.0 {
        return Err(Error::InputOutOfRange(format!("s = {s} outside (0, 1]")));
    }
    Ok(s * cond_renyi_classical(&depolarizing_table(spec), -s)?)
}

/// Closed form phi(s/(1+s)|W^E,P_mix) = (s/(1+s)) H_{1/(1+s)}(X|Z|P^{XZ}).
pub fn depolarizing_phi_closed(s: f64, spec: &DepolarizingSpec) -> Result<f64> {
    if !(0.0..=1.0).contains(&s) || s == 0.0 {
        return Err(Error::InputOutOfRange(format!("s = {s} outside (0, 1]")));
    }
    let order_shift = -s / (1.0 + s);
    Ok(s / (1.0 + s) * cond_renyi_classical(&depolarizing_table(spec), order_shift)?)
}

/// Phase-error comparison suite for the independent depolarizing case.
#[derive(Debug, Clone, Copy)]
pub struct TsurumaruReport {
    /// min_s e^{n(-sR + s H_{1/(1+s)}(X|P^X))}, clipped to [0, 1].
    pub phase_err: f64,
    /// h(eps) + n eps log d, in nats.
    pub holevo_bound: f64,
    /// 2 sqrt(2) sqrt(eps).
    pub composability_bound: f64,
    /// Per-symbol decay exponent; equals 2 e_phi(R|W^E,P_mix).
    pub exponent: f64,
}

/// Evaluates the virtual phase-error probability and the security bounds
/// derived from it. Requires an independent P^{XZ}; R in nats.
pub fn tsurumaru_suite(n: u32, r: f64, spec: &DepolarizingSpec) -> Result<TsurumaruReport> {
    let d = spec.d;
    // marginals and the independence check
    let px: Vec<f64> = (0..d).map(|x| (0..d).map(|z| spec.pxz.prob(x * d + z)).sum()).collect();
    let pz: Vec<f64> = (0..d).map(|z| spec.p_z(z)).collect();
    for x in 0..d {
        for z in 0..d {
            if (spec.pxz.prob(x * d + z) - px[x] * pz[z]).abs() > 1e-12 {
                return Err(Error::NotIndependent);
            }
        }
    }
    let px = Distribution::new(px)?;
    // exponent per symbol: max_s s(R - H_{1/(1+s)}(X|P^X))
    let obj = |s: f64| s * (r - renyi_entropy(&px, -s / (1.0 + s)));
    let opt = maximize_1d(obj, 0.0, 1.0, DEFAULT_S_GRID, S_TOL);
    let exponent = opt.value.max(0.0);
    let phase_err = (-(n as f64) * exponent).exp().clamp(0.0, 1.0);
    let h = |x: f64| {
        if x <= 0.0 || x >= 1.0 {
            0.0
        } else {
            -x * x.ln() - (1.0 - x) * (1.0 - x).ln()
        }
    };
    Ok(TsurumaruReport {
        phase_err,
        holevo_bound: h(phase_err) + n as f64 * phase_err * (d as f64).ln(),
        composability_bound: 2.0 * 2.0_f64.sqrt() * phase_err.sqrt(),
        exponent,
    })
}

/// Per-rate verdict of the exponent ordering chain (1/2) e_psi <= e_phi <= e_psi.
#[derive(Debug, Clone, Copy)]
pub struct OrderingVerdict {
    pub rate: f64,
    pub e_psi: f64,
    pub e_phi: f64,
    pub ok: bool,
}

/// Checks the exponent ordering chain on a rate grid.
pub fn exponent_ordering_check(
    w: &CQChannel,
    p: &Distribution,
    r_grid: &[f64],
) -> Result<Vec<OrderingVerdict>> {
    let mut out = Vec::with_capacity(r_grid.len());
    for &r in r_grid {
        let ep = e_psi(r, w, p)?;
        let ef = e_phi(r, w, p)?;
        let ok = 0.5 * ep <= ef + 1e-9 && ef <= ep + 1e-9;
        out.push(OrderingVerdict { rate: r, e_psi: ep, e_phi: ef, ok });
    }
    Ok(out)
}
