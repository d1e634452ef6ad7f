//! Classical-quantum channels, derived channels (averages, tensor powers,
//! stochastic preprocessing), and the Weyl–Heisenberg/depolarizing
//! environment construction.

use nalgebra::DVector;
use rand::Rng;

use crate::error::{Error, Result};
use crate::hermitian::{C64, CMat, DensityMatrix, HermitianOperator};

/// Default cap on alphabet^n * dim^(2n) for tensor powers (complex entries).
pub const DEFAULT_MEMORY_CAP: u128 = 1 << 24;

/// Probability distribution over a finite alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    probs: Vec<f64>,
}

impl Distribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidDistribution("empty support".into()));
        }
        if probs.iter().any(|&p| p < 0.0 || !p.is_finite()) {
            return Err(Error::InvalidDistribution("negative or non-finite entry".into()));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidDistribution(format!("sum {total} != 1")));
        }
        Ok(Self { probs })
    }

    pub fn uniform(n: usize) -> Self {
        Self { probs: vec![1.0 / n as f64; n] }
    }

    pub fn point_mass(n: usize, at: usize) -> Self {
        let mut probs = vec![0.0; n];
        probs[at] = 1.0;
        Self { probs }
    }

    /// Normalizes nonnegative weights.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if total <= 0.0 || !total.is_finite() {
            return Err(Error::InvalidDistribution("weights do not sum to a positive value".into()));
        }
        Self::new(weights.iter().map(|w| w / total).collect())
    }

    pub fn random(n: usize, rng: &mut impl Rng) -> Self {
        let weights: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() + 1e-6).collect();
        Self::from_weights(&weights).expect("positive weights")
    }

    pub fn support_size(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, i: usize) -> f64 {
        self.probs[i]
    }

    /// i.i.d. product distribution on n-letter words (index = base-|A| word,
    /// most significant letter first).
    pub fn tensor_power(&self, n: u32) -> Self {
        let base = self.probs.len();
        let size = base.pow(n);
        let mut probs = vec![1.0; size];
        for (w, q) in probs.iter_mut().enumerate() {
            let mut rem = w;
            for _ in 0..n {
                *q *= self.probs[rem % base];
                rem /= base;
            }
        }
        Self { probs }
    }
}

/// cq channel x -> W_x: a finite family of density matrices of equal dimension.
#[derive(Debug, Clone)]
pub struct CQChannel {
    outputs: Vec<DensityMatrix>,
}

impl CQChannel {
    pub fn new(outputs: Vec<DensityMatrix>) -> Result<Self> {
        if outputs.is_empty() {
            return Err(Error::InvalidDistribution("channel needs at least one output".into()));
        }
        let dim = outputs[0].dim();
        for o in &outputs {
            if o.dim() != dim {
                return Err(Error::DimensionMismatch(dim, o.dim()));
            }
        }
        Ok(Self { outputs })
    }

    /// Classical channel: each stochastic-matrix row becomes a diagonal state.
    pub fn classical(rows: &[Vec<f64>]) -> Result<Self> {
        let mut outputs = Vec::with_capacity(rows.len());
        for row in rows {
            let d = Distribution::new(row.clone()).map_err(|_| Error::NonStochastic)?;
            outputs.push(DensityMatrix::from_probabilities(d.probs()));
        }
        Self::new(outputs)
    }

    pub fn random(alphabet: usize, dim: usize, rng: &mut impl Rng) -> Self {
        let outputs = (0..alphabet).map(|_| crate::hermitian::random_density(dim, rng)).collect();
        Self { outputs }
    }

    pub fn alphabet_size(&self) -> usize {
        self.outputs.len()
    }

    pub fn output_dim(&self) -> usize {
        self.outputs[0].dim()
    }

    pub fn output(&self, x: usize) -> &DensityMatrix {
        &self.outputs[x]
    }

    pub fn outputs(&self) -> &[DensityMatrix] {
        &self.outputs
    }
}

/// Block-diagonal joint state sum_a P(a) |a><a| (x) rho_a.
#[derive(Debug, Clone)]
pub struct JointCQState {
    pub classical_dist: Distribution,
    pub conditional_states: Vec<DensityMatrix>,
}

impl JointCQState {
    pub fn new(classical_dist: Distribution, conditional_states: Vec<DensityMatrix>) -> Result<Self> {
        if classical_dist.support_size() != conditional_states.len() {
            return Err(Error::SizeMismatch(
                classical_dist.support_size(),
                conditional_states.len(),
            ));
        }
        let dim = conditional_states[0].dim();
        for s in &conditional_states {
            if s.dim() != dim {
                return Err(Error::DimensionMismatch(dim, s.dim()));
            }
        }
        Ok(Self { classical_dist, conditional_states })
    }

    pub fn classical_size(&self) -> usize {
        self.classical_dist.support_size()
    }

    pub fn quantum_dim(&self) -> usize {
        self.conditional_states[0].dim()
    }

    pub fn trace(&self) -> f64 {
        self.classical_dist
            .probs()
            .iter()
            .zip(&self.conditional_states)
            .map(|(p, s)| p * s.op().trace())
            .sum()
    }

    /// The reduced state on the quantum system: sum_a P(a) rho_a.
    pub fn quantum_marginal(&self) -> DensityMatrix {
        let dim = self.quantum_dim();
        let mut acc = HermitianOperator::zeros(dim);
        for (p, s) in self.classical_dist.probs().iter().zip(&self.conditional_states) {
            acc = acc.add(&s.op().scale(*p)).expect("equal dims");
        }
        DensityMatrix::new(acc).expect("convex combination of density matrices")
    }
}

/// Parameters of the generalized depolarizing channel of dimension d with a
/// joint distribution P^{XZ} over Z_d x Z_d (index x*d + z).
#[derive(Debug, Clone)]
pub struct DepolarizingSpec {
    pub d: usize,
    pub pxz: Distribution,
}

impl DepolarizingSpec {
    pub fn new(d: usize, pxz: Distribution) -> Result<Self> {
        if d < 2 {
            return Err(Error::InputOutOfRange(format!("dimension {d} < 2")));
        }
        if pxz.support_size() != d * d {
            return Err(Error::SizeMismatch(pxz.support_size(), d * d));
        }
        Ok(Self { d, pxz })
    }

    /// Independent P^{XZ} = P^X x P^Z.
    pub fn independent(d: usize, px: &Distribution, pz: &Distribution) -> Result<Self> {
        if px.support_size() != d || pz.support_size() != d {
            return Err(Error::SizeMismatch(px.support_size(), d));
        }
        let mut probs = vec![0.0; d * d];
        for x in 0..d {
            for z in 0..d {
                probs[x * d + z] = px.prob(x) * pz.prob(z);
            }
        }
        Ok(Self { d, pxz: Distribution::new(probs)? })
    }

    pub fn p_z(&self, z: usize) -> f64 {
        (0..self.d).map(|x| self.pxz.prob(x * self.d + z)).sum()
    }

    pub fn p_x_given_z(&self, x: usize, z: usize) -> f64 {
        self.pxz.prob(x * self.d + z) / self.p_z(z)
    }
}

/// W_p = sum_a p_a W_a.
pub fn average_output(w: &CQChannel, p: &Distribution) -> Result<DensityMatrix> {
    if p.support_size() != w.alphabet_size() {
        return Err(Error::SizeMismatch(p.support_size(), w.alphabet_size()));
    }
    let dim = w.output_dim();
    let mut acc = HermitianOperator::zeros(dim);
    for (pa, wa) in p.probs().iter().zip(w.outputs()) {
        acc = acc.add(&wa.op().scale(*pa))?;
    }
    DensityMatrix::new(acc)
}

/// n-fold memoryless extension: output for word (x_1..x_n) is
/// W_{x_1} (x) ... (x) W_{x_n}, word index base-|A| with x_1 most significant.
pub fn tensor_power_channel(w: &CQChannel, n: u32, memory_cap: u128) -> Result<CQChannel> {
    let a = w.alphabet_size() as u128;
    let d = w.output_dim() as u128;
    let needed = a.pow(n) * d.pow(2 * n);
    if needed > memory_cap {
        return Err(Error::BudgetExceeded { needed, cap: memory_cap });
    }
    let base = w.alphabet_size();
    let words = base.pow(n);
    let mut outputs = Vec::with_capacity(words);
    for word in 0..words {
        // decode most significant letter first so that the state ordering
        // matches W_{x_1} (x) ... (x) W_{x_n}
        let mut letters = Vec::with_capacity(n as usize);
        let mut rem = word;
        for _ in 0..n {
            letters.push(rem % base);
            rem /= base;
        }
        letters.reverse();
        let mut state = w.output(letters[0]).clone();
        for &x in &letters[1..] {
            state = state.kron(w.output(x));
        }
        outputs.push(state);
    }
    CQChannel::new(outputs)
}

/// Pre-processing by a stochastic matrix Q(x|v): (W_Q)_v = sum_x Q(x|v) W_x.
pub fn preprocess(w: &CQChannel, q_rows: &[Vec<f64>]) -> Result<CQChannel> {
    let mut outputs = Vec::with_capacity(q_rows.len());
    for row in q_rows {
        if row.len() != w.alphabet_size() {
            return Err(Error::SizeMismatch(row.len(), w.alphabet_size()));
        }
        let dist = Distribution::new(row.clone()).map_err(|_| Error::NonStochastic)?;
        outputs.push(average_output(w, &dist)?);
    }
    CQChannel::new(outputs)
}

/// Discrete Weyl–Heisenberg unitary sW(x,z) = sX^x sZ^z on C^d, where sX is
/// the cyclic shift and sZ = diag(omega^k) with omega = e^{2 pi i / d}.
pub fn weyl_operator(d: usize, x: i64, z: i64) -> CMat {
    assert!(d >= 2);
    let di = d as i64;
    let x = x.rem_euclid(di) as usize;
    let z = z.rem_euclid(di);
    let mut m = CMat::zeros(d, d);
    for k in 0..d {
        // sZ|k> = omega^{zk}|k>, then sX shifts |k> -> |k + x mod d>
        let phase = 2.0 * std::f64::consts::PI * (z * k as i64) as f64 / d as f64;
        m[((k + x) % d, k)] = C64::new(phase.cos(), phase.sin());
    }
    m
}

/// Eve's channel j -> rho^E_j for the generalized depolarizing channel:
/// rho^E_j = sum_z P^Z(z) |j,z><j,z| with
/// |j,z> = sum_x omega^{jx} sqrt(P^{X|Z}(x|z)) |x,z> on C^{d^2}.
pub fn depolarizing_environment_channel(spec: &DepolarizingSpec) -> CQChannel {
    let d = spec.d;
    let dim = d * d;
    let mut outputs = Vec::with_capacity(d);
    for j in 0..d {
        let mut acc = CMat::zeros(dim, dim);
        for z in 0..d {
            let pz = spec.p_z(z);
            if pz <= 0.0 {
                continue;
            }
            let mut ket = DVector::from_element(dim, C64::new(0.0, 0.0));
            for x in 0..d {
                let amp = spec.p_x_given_z(x, z).sqrt();
                let phase = 2.0 * std::f64::consts::PI * (j * x) as f64 / d as f64;
                ket[x * d + z] = C64::new(phase.cos() * amp, phase.sin() * amp);
            }
            acc += (&ket * ket.adjoint()).scale(pz);
        }
        outputs.push(
            DensityMatrix::new(HermitianOperator::symmetrize(acc))
                .expect("mixture of projectors"),
        );
    }
    CQChannel::new(outputs).expect("d >= 2 outputs")
}

/// The joint state rho[W,p] = sum_a p_a |a><a| (x) W_a (kept block-diagonal).
pub fn cq_state(w: &CQChannel, p: &Distribution) -> Result<JointCQState> {
    if p.support_size() != w.alphabet_size() {
        return Err(Error::SizeMismatch(p.support_size(), w.alphabet_size()));
    }
    JointCQState::new(p.clone(), w.outputs().to_vec())
}
