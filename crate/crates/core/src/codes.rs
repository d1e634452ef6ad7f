//! Explicit wiretap codes (random, coset, affine), exact evaluation of their
//! error and leakage figures, and exhaustive / Monte-Carlo verification of the
//! resolvability and privacy-amplification expectation bounds.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channels::{average_output, CQChannel, Distribution, JointCQState};
use crate::error::{Error, Result};
use crate::gf::{index_to_vec, vec_to_index, GFMatrix, HashFamily, ToeplitzEnsemble};
use crate::hermitian::{
    matrix_function, spectral_decompose, spectral_stats, trace_norm_distance, CMat, DensityMatrix,
    HermitianOperator, MatrixFn, DEFAULT_GROUP_TOL,
};
use crate::optim::maximize_simplex;
use crate::quantities::{
    channel_psi, channel_psi_star, cond_renyi_sigma, d1_criteria, mutual_info,
    rel_entropy, rel_entropy_lower, renyi_entropy, D1Variant, MutualInfoVariant,
};

/// Enumerations above this size switch to Monte-Carlo estimation.
pub const EXHAUSTIVE_BUDGET: u128 = 1_000_000;

const POVM_TOL: f64 = 1e-9;
const COMMUTE_TOL: f64 = 1e-10;

/// A wiretap code: message count, one encoding distribution per message, and
/// a decoder POVM whose outcomes map to messages (None = declared error).
#[derive(Debug, Clone)]
pub struct WiretapCode {
    encoders: Vec<Distribution>,
    povm: Vec<HermitianOperator>,
    outcome_message: Vec<Option<usize>>,
}

impl WiretapCode {
    pub fn new(
        encoders: Vec<Distribution>,
        povm: Vec<HermitianOperator>,
        outcome_message: Vec<Option<usize>>,
    ) -> Result<Self> {
        if encoders.is_empty() || povm.is_empty() {
            return Err(Error::EmptySupport);
        }
        if povm.len() != outcome_message.len() {
            return Err(Error::SizeMismatch(povm.len(), outcome_message.len()));
        }
        let dim = povm[0].dim();
        let mut sum = CMat::zeros(dim, dim);
        for el in &povm {
            if el.dim() != dim {
                return Err(Error::DimensionMismatch(el.dim(), dim));
            }
            if el.min_eigenvalue() < -POVM_TOL {
                return Err(Error::InputOutOfRange(format!(
                    "POVM element has eigenvalue {}",
                    el.min_eigenvalue()
                )));
            }
            sum += el.matrix();
        }
        let resid = (&sum - CMat::identity(dim, dim)).norm();
        if resid > POVM_TOL * dim as f64 {
            return Err(Error::InputOutOfRange(format!("POVM completeness residual {resid}")));
        }
        let m = encoders.len();
        if outcome_message.iter().flatten().any(|&msg| msg >= m) {
            return Err(Error::SizeMismatch(m, m));
        }
        Ok(Self { encoders, povm, outcome_message })
    }

    pub fn message_count(&self) -> usize {
        self.encoders.len()
    }

    pub fn encoders(&self) -> &[Distribution] {
        &self.encoders
    }

    pub fn povm(&self) -> &[HermitianOperator] {
        &self.povm
    }

    pub fn outcome_message(&self) -> &[Option<usize>] {
        &self.outcome_message
    }

    /// Aggregated decoding operator for one message.
    pub fn decoder_for(&self, message: usize) -> HermitianOperator {
        let dim = self.povm[0].dim();
        let mut acc = CMat::zeros(dim, dim);
        for (el, msg) in self.povm.iter().zip(&self.outcome_message) {
            if *msg == Some(message) {
                acc += el.matrix();
            }
        }
        HermitianOperator::symmetrize(acc)
    }
}

/// Exact performance record of a code on a wiretap channel pair.
#[derive(Debug, Clone, Copy)]
pub struct CodeMetrics {
    pub eps: f64,
    pub eps_max: f64,
    pub info: f64,
    pub info_max: f64,
    pub d1: f64,
    pub d1_max: f64,
}

fn sample_index(probs: &[f64], rng: &mut impl Rng) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, &p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    probs.len() - 1
}

/// Common eigenbasis of a commuting Hermitian family, found by iterative
/// block refinement; errors with the worst off-diagonal residual otherwise.
fn simultaneous_eigenbasis(ops: &[&HermitianOperator]) -> Result<CMat> {
    let dim = ops[0].dim();
    let mut u = CMat::identity(dim, dim);
    let mut blocks: Vec<std::ops::Range<usize>> = vec![0..dim];
    for op in ops {
        let mut next_blocks = Vec::new();
        for block in &blocks {
            if block.len() == 1 {
                next_blocks.push(block.clone());
                continue;
            }
            let cols = u.columns(block.start, block.len()).into_owned();
            let compressed = HermitianOperator::symmetrize(cols.adjoint() * op.matrix() * &cols);
            let decomp = spectral_decompose(&compressed, DEFAULT_GROUP_TOL);
            let rotated = &cols * &decomp.eigenvectors;
            for (k, j) in block.clone().enumerate() {
                u.set_column(j, &rotated.column(k));
            }
            for g in &decomp.groups {
                next_blocks.push(block.start + g.start..block.start + g.end);
            }
        }
        blocks = next_blocks;
    }
    // verify the family is actually diagonal in this basis
    let mut worst = 0.0_f64;
    for op in ops {
        let rotated = u.adjoint() * op.matrix() * &u;
        let scale = rotated.iter().map(|c| c.norm()).fold(0.0_f64, f64::max).max(1.0);
        for i in 0..dim {
            for j in 0..dim {
                if i != j {
                    worst = worst.max(rotated[(i, j)].norm() / scale);
                }
            }
        }
    }
    if worst > COMMUTE_TOL {
        return Err(Error::NonCommuting(worst));
    }
    Ok(u)
}

/// Maximum-likelihood decoder in the common eigenbasis of a commuting
/// channel. Each basis outcome decodes to the sub-codeword with the largest
/// weighted likelihood; ties go to the lowest index.
pub fn decode_ml(
    w: &CQChannel,
    entries: &[(f64, Distribution)],
    message_of: &[usize],
    messages: usize,
) -> Result<(Vec<HermitianOperator>, Vec<Option<usize>>)> {
    let ops: Vec<&HermitianOperator> = w.outputs().iter().map(|d| d.op()).collect();
    let u = simultaneous_eigenbasis(&ops)?;
    let dim = w.output_dim();
    // per-letter outcome probabilities in the common basis
    let mut letter: Vec<Vec<f64>> = Vec::with_capacity(w.alphabet_size());
    for x in 0..w.alphabet_size() {
        let rotated = u.adjoint() * w.output(x).matrix() * &u;
        letter.push((0..dim).map(|y| rotated[(y, y)].re.max(0.0)).collect());
    }
    let mut povm = vec![CMat::zeros(dim, dim); messages];
    for y in 0..dim {
        let mut best_j = 0;
        let mut best_v = f64::NEG_INFINITY;
        for (j, (prior, q)) in entries.iter().enumerate() {
            let v: f64 = prior * (0..w.alphabet_size()).map(|x| q.prob(x) * letter[x][y]).sum::<f64>();
            if v > best_v {
                best_v = v;
                best_j = j;
            }
        }
        let col = u.column(y);
        povm[message_of[best_j]] += &col * col.adjoint();
    }
    let povm = povm.into_iter().map(HermitianOperator::symmetrize).collect();
    Ok((povm, (0..messages).map(Some).collect()))
}

/// Pretty-good-measurement decoder: T_j = S^{-1/2} w_j S^{-1/2} grouped by
/// message, completed with a remainder element that declares an error.
pub fn decode_pgm(
    w: &CQChannel,
    entries: &[(f64, Distribution)],
    message_of: &[usize],
    messages: usize,
) -> Result<(Vec<HermitianOperator>, Vec<Option<usize>>)> {
    let dim = w.output_dim();
    let mut weighted = Vec::with_capacity(entries.len());
    let mut s_mat = CMat::zeros(dim, dim);
    for (prior, q) in entries {
        let rho = average_output(w, q)?;
        let wmat = rho.matrix() * nalgebra::Complex::new(*prior, 0.0);
        s_mat += &wmat;
        weighted.push(wmat);
    }
    let s_op = HermitianOperator::symmetrize(s_mat);
    let s_inv_half = matrix_function(&s_op, MatrixFn::Power(-0.5))?;
    let mut povm = vec![CMat::zeros(dim, dim); messages];
    for (j, wmat) in weighted.iter().enumerate() {
        povm[message_of[j]] += s_inv_half.matrix() * wmat * s_inv_half.matrix();
    }
    let mut remainder = CMat::identity(dim, dim);
    for p in &povm {
        remainder -= p;
    }
    let mut out: Vec<HermitianOperator> =
        povm.into_iter().map(HermitianOperator::symmetrize).collect();
    out.push(HermitianOperator::symmetrize(remainder));
    let mut map: Vec<Option<usize>> = (0..messages).map(Some).collect();
    map.push(None);
    Ok((out, map))
}

/// ML for commuting channels, PGM otherwise.
fn build_decoder(
    wb: &CQChannel,
    entries: &[(f64, Distribution)],
    message_of: &[usize],
    messages: usize,
) -> Result<(Vec<HermitianOperator>, Vec<Option<usize>>)> {
    match decode_ml(wb, entries, message_of, messages) {
        Ok(d) => Ok(d),
        Err(Error::NonCommuting(_)) => decode_pgm(wb, entries, message_of, messages),
        Err(e) => Err(e),
    }
}

/// Random code: an L x M codebook sampled i.i.d. from `p`; encoder m is the
/// pushforward of Q through column m, the decoder resolves the (l, m) pair
/// and discards l.
pub fn build_random_code(
    wb: &CQChannel,
    we: &CQChannel,
    m: usize,
    q: &Distribution,
    p: &Distribution,
    seed: u64,
) -> Result<WiretapCode> {
    if wb.alphabet_size() != we.alphabet_size() {
        return Err(Error::DimensionMismatch(wb.alphabet_size(), we.alphabet_size()));
    }
    let l = q.probs().len();
    let nx = wb.alphabet_size();
    if p.probs().len() != nx {
        return Err(Error::SizeMismatch(p.probs().len(), nx));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let codebook: Vec<Vec<usize>> =
        (0..l).map(|_| (0..m).map(|_| sample_index(p.probs(), &mut rng)).collect()).collect();
    let mut encoders = Vec::with_capacity(m);
    for col in 0..m {
        let mut probs = vec![0.0; nx];
        for row in 0..l {
            probs[codebook[row][col]] += q.prob(row);
        }
        encoders.push(Distribution::new(probs)?);
    }
    let mut entries = Vec::with_capacity(l * m);
    let mut message_of = Vec::with_capacity(l * m);
    for col in 0..m {
        for row in 0..l {
            entries.push((q.prob(row) / m as f64, Distribution::point_mass(nx, codebook[row][col])));
            message_of.push(col);
        }
    }
    let (povm, map) = build_decoder(wb, &entries, &message_of, m)?;
    WiretapCode::new(encoders, povm, map)
}

fn gf_add(q: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| (x + y) % q).collect()
}

fn coset_partition(
    q: u64,
    img1: &[Vec<u64>],
    img2: &[Vec<u64>],
) -> Result<Vec<Vec<u128>>> {
    let set1: std::collections::HashSet<u128> =
        img1.iter().map(|v| vec_to_index(q, v)).collect();
    for y in img2 {
        if !set1.contains(&vec_to_index(q, y)) {
            return Err(Error::NotNested);
        }
    }
    let mut seen = std::collections::HashSet::new();
    let mut cosets = Vec::new();
    for x in img1 {
        let idx = vec_to_index(q, x);
        if seen.contains(&idx) {
            continue;
        }
        let mut members: Vec<u128> =
            img2.iter().map(|c| vec_to_index(q, &gf_add(q, x, c))).collect();
        members.sort_unstable();
        for &mem in &members {
            seen.insert(mem);
        }
        cosets.push(members);
    }
    cosets.sort_by_key(|c| c[0]);
    Ok(cosets)
}

/// Coset code: messages are the cosets of C2 in C1, each encoded by the
/// uniform distribution on the coset; the decoder resolves individual
/// codewords and groups them by coset.
pub fn build_coset_code(
    wb: &CQChannel,
    we: &CQChannel,
    c1: &GFMatrix,
    c2: &GFMatrix,
) -> Result<WiretapCode> {
    let q = c1.q();
    let k = c1.rows();
    if c2.q() != q || c2.rows() != k {
        return Err(Error::DimensionMismatch(c2.rows(), k));
    }
    let nx = (q as u128).pow(k as u32);
    if nx != wb.alphabet_size() as u128 || wb.alphabet_size() != we.alphabet_size() {
        return Err(Error::DimensionMismatch(wb.alphabet_size(), nx as usize));
    }
    let img1 = c1.image(EXHAUSTIVE_BUDGET)?;
    let img2 = c2.image(EXHAUSTIVE_BUDGET)?;
    let cosets = coset_partition(q, &img1, &img2)?;
    let m = cosets.len();
    let nx = nx as usize;
    let mut encoders = Vec::with_capacity(m);
    let mut entries = Vec::new();
    let mut message_of = Vec::new();
    for (i, members) in cosets.iter().enumerate() {
        let mut probs = vec![0.0; nx];
        for &x in members {
            probs[x as usize] = 1.0 / members.len() as f64;
            entries.push((1.0 / img1.len() as f64, Distribution::point_mass(nx, x as usize)));
            message_of.push(i);
        }
        encoders.push(Distribution::new(probs)?);
    }
    let (povm, map) = build_decoder(wb, &entries, &message_of, m)?;
    WiretapCode::new(encoders, povm, map)
}

/// Affine code: message i is encoded by pushing Q through a -> f(a) + y + z_i,
/// where f embeds A into C1 and the z_i are coset representatives of C1/f(A).
pub fn build_affine_code(
    wb: &CQChannel,
    we: &CQChannel,
    c1: &GFMatrix,
    f: &GFMatrix,
    reps: &[Vec<u64>],
    q_dist: &Distribution,
    y: &[u64],
) -> Result<WiretapCode> {
    let q = c1.q();
    let k = c1.rows();
    if f.q() != q || f.rows() != k {
        return Err(Error::DimensionMismatch(f.rows(), k));
    }
    let l = f.cols();
    if f.rank() != l {
        return Err(Error::NotInjective);
    }
    for j in 0..l {
        let col: Vec<u64> = (0..k).map(|i| f.get(i, j)).collect();
        if !c1.in_image(&col)? {
            return Err(Error::NotInjective);
        }
    }
    let na = (q as u128).pow(l as u32) as usize;
    if q_dist.probs().len() != na {
        return Err(Error::SizeMismatch(q_dist.probs().len(), na));
    }
    let nx = (q as u128).pow(k as u32);
    if nx != wb.alphabet_size() as u128 || wb.alphabet_size() != we.alphabet_size() {
        return Err(Error::DimensionMismatch(wb.alphabet_size(), nx as usize));
    }
    if y.len() != k {
        return Err(Error::SizeMismatch(y.len(), k));
    }
    let img1 = c1.image(EXHAUSTIVE_BUDGET)?;
    let f_img = f.image(EXHAUSTIVE_BUDGET)?;
    let cosets = coset_partition(q, &img1, &f_img)?;
    let m = cosets.len();
    if reps.len() != m {
        return Err(Error::BadRepresentatives);
    }
    // each representative must lie in C1 and in a distinct coset of f(A)
    let mut hit = vec![false; m];
    for rep in reps {
        if rep.len() != k || !c1.in_image(rep)? {
            return Err(Error::BadRepresentatives);
        }
        let idx = vec_to_index(q, rep);
        let Some(pos) = cosets.iter().position(|c| c.binary_search(&idx).is_ok()) else {
            return Err(Error::BadRepresentatives);
        };
        if hit[pos] {
            return Err(Error::BadRepresentatives);
        }
        hit[pos] = true;
    }
    let nx = nx as usize;
    let mut encoders = Vec::with_capacity(m);
    let mut entries = Vec::new();
    let mut message_of = Vec::new();
    for (i, z) in reps.iter().enumerate() {
        let mut probs = vec![0.0; nx];
        for a_idx in 0..na {
            let a = index_to_vec(q, l, a_idx as u128);
            let word = gf_add(q, &gf_add(q, &f.mul_vec(&a)?, y), z);
            let w_idx = vec_to_index(q, &word) as usize;
            probs[w_idx] += q_dist.prob(a_idx);
            entries.push((q_dist.prob(a_idx) / m as f64, Distribution::point_mass(nx, w_idx)));
            message_of.push(i);
        }
        encoders.push(Distribution::new(probs)?);
    }
    let (povm, map) = build_decoder(wb, &entries, &message_of, m)?;
    WiretapCode::new(encoders, povm, map)
}

/// Eve-side leakage of a set of encoders: (average mutual information,
/// average trace-norm criterion), both against the code-average state.
pub fn eve_metrics(we: &CQChannel, encoders: &[Distribution]) -> Result<(f64, f64)> {
    let m = encoders.len();
    let states: Vec<DensityMatrix> =
        encoders.iter().map(|q| average_output(we, q)).collect::<Result<_>>()?;
    let joint = JointCQState::new(Distribution::uniform(m), states.clone())?;
    let avg = joint.quantum_marginal();
    let mut info = 0.0;
    let mut d1 = 0.0;
    for rho in &states {
        info += rel_entropy(rho, &avg)? / m as f64;
        d1 += trace_norm_distance(rho, &avg)? / m as f64;
    }
    Ok((info, d1))
}

/// Exact evaluation of a code: Bob's average/worst error, Eve's mutual
/// information and trace-norm criteria with their worst-message variants.
pub fn evaluate_code(code: &WiretapCode, wb: &CQChannel, we: &CQChannel) -> Result<CodeMetrics> {
    let m = code.message_count();
    if wb.alphabet_size() != we.alphabet_size() {
        return Err(Error::DimensionMismatch(wb.alphabet_size(), we.alphabet_size()));
    }
    if code.povm()[0].dim() != wb.output_dim() {
        return Err(Error::DimensionMismatch(code.povm()[0].dim(), wb.output_dim()));
    }
    let mut eps = 0.0;
    let mut eps_max = 0.0_f64;
    for i in 0..m {
        let rho_b = average_output(wb, &code.encoders()[i])?;
        let hit = rho_b.op().trace_product(&code.decoder_for(i))?;
        let e = (1.0 - hit).clamp(0.0, 1.0);
        eps += e / m as f64;
        eps_max = eps_max.max(e);
    }
    let eve_states: Vec<DensityMatrix> =
        code.encoders().iter().map(|q| average_output(we, q)).collect::<Result<_>>()?;
    let joint = JointCQState::new(Distribution::uniform(m), eve_states.clone())?;
    let avg = joint.quantum_marginal();
    let mut info = 0.0;
    let mut d1 = 0.0;
    let mut d1_max = 0.0_f64;
    let mut rel_max = 0.0_f64;
    for rho in &eve_states {
        let d = rel_entropy(rho, &avg)?;
        info += d / m as f64;
        rel_max = rel_max.max(d);
        let t = trace_norm_distance(rho, &avg)?;
        d1 += t / m as f64;
        d1_max = d1_max.max(t);
    }
    // I_max = max_p I(W_Q, p) is bracketed by I (uniform prior) from below and
    // max_i D(W_{Q_i} || W_Phi) from above; a simplex search tightens within.
    let eve_channel = CQChannel::new(eve_states)?;
    let searched = maximize_simplex(
        |p| match Distribution::from_weights(p) {
            Ok(dist) => mutual_info(&eve_channel, &dist, MutualInfoVariant::I).unwrap_or(0.0),
            Err(_) => f64::NEG_INFINITY,
        },
        m,
        12,
        |_| true,
        1e-9,
    )
    .map(|o| o.value)
    .unwrap_or(info);
    let info_max = searched.max(info).min(rel_max);
    Ok(CodeMetrics { eps, eps_max, info, info_max, d1, d1_max })
}

/// One bound comparison within an ensemble report.
#[derive(Debug, Clone)]
pub struct BoundCheck {
    pub label: &'static str,
    pub s: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Outcome of an ensemble-expectation experiment.
#[derive(Debug, Clone)]
pub struct EnsembleReport {
    /// True when every member was enumerated with its exact weight.
    pub exhaustive: bool,
    /// Enumerated members, or Monte-Carlo trials.
    pub trials: usize,
    pub seed: Option<u64>,
    /// Mean relative entropy to the target state.
    pub mean_d: f64,
    /// Standard error of `mean_d` (zero in exhaustive mode).
    pub se_d: f64,
    pub checks: Vec<BoundCheck>,
}

impl EnsembleReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// Which resolvability lemma to test, with its ensemble parameters.
#[derive(Debug, Clone)]
pub enum ResolvabilitySpec<'a> {
    /// i.i.d. random map A -> X with letter distribution p.
    Lee1 { w: &'a CQChannel, p: &'a Distribution, pa: &'a Distribution },
    /// Toeplitz submodule ensemble in F_q^k with |C| = q^l, shifted uniformly.
    Lee2 { w: &'a CQChannel, q: u64, k: usize, l: usize },
    /// Uniform injective homomorphisms F_q^l -> F_q^k with uniform shift.
    Lee3 { w: &'a CQChannel, q: u64, k: usize, l: usize, pa: &'a Distribution },
}

fn pushforward(nx: usize, map: impl Fn(usize) -> usize, pa: &Distribution) -> Result<Distribution> {
    let mut probs = vec![0.0; nx];
    for (a, &pr) in pa.probs().iter().enumerate() {
        probs[map(a)] += pr;
    }
    Distribution::new(probs)
}

fn all_injective(q: u64, k: usize, l: usize, budget: u128) -> Result<Vec<GFMatrix>> {
    let total = (q as u128).pow((k * l) as u32);
    if total > budget {
        return Err(Error::BudgetExceeded { needed: total, cap: budget });
    }
    let mut out = Vec::new();
    for idx in 0..total {
        let m = GFMatrix::new(q, k, l, index_to_vec(q, k * l, idx))?;
        if m.rank() == l {
            out.push(m);
        }
    }
    Ok(out)
}

fn sample_injective(q: u64, k: usize, l: usize, rng: &mut impl Rng) -> GFMatrix {
    loop {
        let entries: Vec<u64> = (0..k * l).map(|_| rng.gen_range(0..q)).collect();
        let m = GFMatrix::new(q, k, l, entries).expect("valid entries");
        if m.rank() == l {
            return m;
        }
    }
}

/// Verifies the resolvability expectation bounds for one lemma. Enumerates
/// the ensemble exactly when it fits the budget, otherwise falls back to
/// Monte-Carlo with `mc_trials` samples; exhaustive verdicts are exact.
pub fn resolvability_experiment(
    spec: &ResolvabilitySpec,
    s_grid: &[f64],
    mc_trials: usize,
    seed: u64,
) -> Result<EnsembleReport> {
    for &s in s_grid {
        if !(s > 0.0 && s <= 1.0) {
            return Err(Error::InputOutOfRange(format!("s = {s} outside (0, 1]")));
        }
    }
    // target state, entropy offset and psi arguments per lemma
    let (w, target_p, h_offset): (&CQChannel, Distribution, f64) = match spec {
        ResolvabilitySpec::Lee1 { w, p, pa: _ } => ((*w), (*p).clone(), 0.0),
        ResolvabilitySpec::Lee2 { w, q, k, l } => {
            let nx = (*q as u128).pow(*k as u32) as usize;
            ((*w), Distribution::uniform(nx), (*l as f64) * (*q as f64).ln())
        }
        ResolvabilitySpec::Lee3 { w, q, k, .. } => {
            let nx = (*q as u128).pow(*k as u32) as usize;
            ((*w), Distribution::uniform(nx), 0.0)
        }
    };
    let nx = w.alphabet_size();
    if target_p.probs().len() != nx {
        return Err(Error::SizeMismatch(target_p.probs().len(), nx));
    }
    let target = average_output(w, &target_p)?;
    let v = spectral_stats(target.op(), DEFAULT_GROUP_TOL).v as f64;

    // enumerate (weight, induced distribution); the secondary list carries the
    // unshifted submodule variant used by the pinched exponential bound
    let mut members: Vec<(f64, Distribution)> = Vec::new();
    let mut secondary: Vec<(f64, Distribution)> = Vec::new();
    let mut exhaustive = true;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match spec {
        ResolvabilitySpec::Lee1 { w: _, p, pa } => {
            let na = pa.probs().len();
            let support: Vec<usize> =
                (0..nx).filter(|&x| p.prob(x) > 0.0).collect();
            let count = (support.len() as u128).checked_pow(na as u32);
            match count {
                Some(count) if count <= EXHAUSTIVE_BUDGET => {
                    for idx in 0..count {
                        let map = index_to_vec(support.len() as u64, na, idx);
                        let weight: f64 =
                            map.iter().map(|&i| p.prob(support[i as usize])).product();
                        let dist =
                            pushforward(nx, |a| support[map[a] as usize], pa)?;
                        members.push((weight, dist));
                    }
                }
                _ => {
                    exhaustive = false;
                    for _ in 0..mc_trials {
                        let map: Vec<usize> =
                            (0..na).map(|_| sample_index(p.probs(), &mut rng)).collect();
                        members.push((1.0 / mc_trials as f64, pushforward(nx, |a| map[a], pa)?));
                    }
                }
            }
        }
        ResolvabilitySpec::Lee2 { w: _, q, k, l } => {
            let ens = ToeplitzEnsemble::new(*q, *k - *l, *l)?;
            let n_x = (*q as u128).pow(ens.free_entries() as u32);
            let n_y = (*q as u128).pow(*k as u32);
            if n_x * n_y <= EXHAUSTIVE_BUDGET {
                for x_mat in ens.enumerate(EXHAUSTIVE_BUDGET)? {
                    let gen = GFMatrix::identity(*q, *l)?.vstack(&x_mat)?;
                    let code = gen.image(EXHAUSTIVE_BUDGET)?;
                    let base = Distribution::uniform(code.len());
                    let idx: Vec<usize> =
                        code.iter().map(|c| vec_to_index(*q, c) as usize).collect();
                    secondary.push((
                        1.0 / n_x as f64,
                        pushforward(nx, |i| idx[i], &base)?,
                    ));
                    for y_idx in 0..n_y {
                        let y = index_to_vec(*q, *k, y_idx);
                        let shifted: Vec<usize> = code
                            .iter()
                            .map(|c| vec_to_index(*q, &gf_add(*q, c, &y)) as usize)
                            .collect();
                        members.push((
                            1.0 / (n_x * n_y) as f64,
                            pushforward(nx, |i| shifted[i], &base)?,
                        ));
                    }
                }
            } else {
                exhaustive = false;
                for _ in 0..mc_trials {
                    let x_mat = ens.from_diagonals(
                        &(0..ens.free_entries()).map(|_| rng.gen_range(0..*q)).collect::<Vec<_>>(),
                    )?;
                    let gen = GFMatrix::identity(*q, *l)?.vstack(&x_mat)?;
                    let code = gen.image(EXHAUSTIVE_BUDGET)?;
                    let base = Distribution::uniform(code.len());
                    let y = index_to_vec(*q, *k, rng.gen_range(0..n_y as u64) as u128);
                    let shifted: Vec<usize> = code
                        .iter()
                        .map(|c| vec_to_index(*q, &gf_add(*q, c, &y)) as usize)
                        .collect();
                    members
                        .push((1.0 / mc_trials as f64, pushforward(nx, |i| shifted[i], &base)?));
                }
            }
        }
        ResolvabilitySpec::Lee3 { w: _, q, k, l, pa } => {
            let na = (*q as u128).pow(*l as u32) as usize;
            if pa.probs().len() != na {
                return Err(Error::SizeMismatch(pa.probs().len(), na));
            }
            let n_y = (*q as u128).pow(*k as u32);
            let total = (*q as u128).pow((*k * *l) as u32);
            if total * n_y <= EXHAUSTIVE_BUDGET {
                let fs = all_injective(*q, *k, *l, EXHAUSTIVE_BUDGET)?;
                let count = fs.len() as u128;
                for f in &fs {
                    for y_idx in 0..n_y {
                        let y = index_to_vec(*q, *k, y_idx);
                        let mapped: Vec<usize> = (0..na)
                            .map(|a_idx| {
                                let a = index_to_vec(*q, *l, a_idx as u128);
                                let img = gf_add(*q, &f.mul_vec(&a).expect("sizes"), &y);
                                vec_to_index(*q, &img) as usize
                            })
                            .collect();
                        members.push((
                            1.0 / (count * n_y) as f64,
                            pushforward(nx, |a| mapped[a], pa)?,
                        ));
                    }
                }
            } else {
                exhaustive = false;
                for _ in 0..mc_trials {
                    let f = sample_injective(*q, *k, *l, &mut rng);
                    let y = index_to_vec(*q, *k, rng.gen_range(0..n_y as u64) as u128);
                    let mapped: Vec<usize> = (0..na)
                        .map(|a_idx| {
                            let a = index_to_vec(*q, *l, a_idx as u128);
                            let img = gf_add(*q, &f.mul_vec(&a).expect("sizes"), &y);
                            vec_to_index(*q, &img) as usize
                        })
                        .collect();
                    members.push((1.0 / mc_trials as f64, pushforward(nx, |a| mapped[a], pa)?));
                }
            }
        }
    }

    let h_term = |s: f64| -> f64 {
        match spec {
            ResolvabilitySpec::Lee1 { pa, .. } | ResolvabilitySpec::Lee3 { pa, .. } => {
                renyi_entropy(pa, s)
            }
            ResolvabilitySpec::Lee2 { .. } => h_offset,
        }
    };

    // per-member relative entropies (computed once, deterministic order)
    let eval = |list: &[(f64, Distribution)]| -> Result<Vec<(f64, f64, f64)>> {
        list.iter()
            .map(|(weight, dist)| {
                let mix = average_output(w, dist)?;
                Ok((*weight, rel_entropy(&mix, &target)?, rel_entropy_lower(&mix, &target)?))
            })
            .collect()
    };
    let main = eval(&members)?;
    let second = eval(&secondary)?;

    let mean_d: f64 = main.iter().map(|(wt, d, _)| wt * d).sum();
    let se_d = if exhaustive {
        0.0
    } else {
        let n = main.len() as f64;
        let var: f64 = main.iter().map(|(_, d, _)| (d - mean_d).powi(2)).sum::<f64>() / (n - 1.0);
        (var / n).sqrt()
    };

    let mut checks = Vec::new();
    for &s in s_grid {
        let psi = channel_psi(s, w, &target_p)?;
        let psi_star = channel_psi_star(s, w, &target_p)?;
        let h = h_term(s);
        checks.push(BoundCheck {
            label: "mean-d",
            s,
            lhs: mean_d,
            rhs: v.powf(s) * (-s * h + psi).exp() / s,
            holds: true,
        });
        let lhs_lower: f64 = main.iter().map(|(wt, _, dl)| wt * (s * dl).exp()).sum();
        checks.push(BoundCheck {
            label: "exp-lower",
            s,
            lhs: lhs_lower,
            rhs: 1.0 + (-s * h + psi_star).exp(),
            holds: true,
        });
        let lhs_exp: f64 = main.iter().map(|(wt, d, _)| wt * (s * d).exp()).sum();
        checks.push(BoundCheck {
            label: "exp",
            s,
            lhs: lhs_exp,
            rhs: v.powf(s) * (1.0 + (-s * h + psi).exp()),
            holds: true,
        });
        if !second.is_empty() {
            let total_w: f64 = second.iter().map(|(wt, _, _)| wt).sum();
            let lhs_c: f64 =
                second.iter().map(|(wt, d, _)| wt * (s * d).exp()).sum::<f64>() / total_w;
            checks.push(BoundCheck {
                label: "exp-center",
                s,
                lhs: lhs_c,
                rhs: v.powf(s) * (1.0 + (-s * h + psi).exp()),
                holds: true,
            });
        }
    }
    for c in &mut checks {
        c.holds = c.lhs <= c.rhs + 1e-12;
    }
    Ok(EnsembleReport {
        exhaustive,
        trials: members.len(),
        seed: if exhaustive { None } else { Some(seed) },
        mean_d,
        se_d,
        checks,
    })
}

/// Hashed joint state: pushes the classical register of `state` through `f`.
pub fn hashed_state(state: &JointCQState, f: &[usize], range: usize) -> Result<JointCQState> {
    let mut probs = vec![0.0; range];
    let dim = state.quantum_dim();
    let mut raw: Vec<CMat> = vec![CMat::zeros(dim, dim); range];
    for a in 0..state.classical_size() {
        let p = state.classical_dist.prob(a);
        probs[f[a]] += p;
        raw[f[a]] += state.conditional_states[a].matrix() * nalgebra::Complex::new(p, 0.0);
    }
    let marginal = state.quantum_marginal();
    let states: Vec<DensityMatrix> = probs
        .iter()
        .zip(raw)
        .map(|(&p, mat)| {
            if p > 0.0 {
                DensityMatrix::from_matrix(mat / nalgebra::Complex::new(p, 0.0))
            } else {
                Ok(marginal.clone())
            }
        })
        .collect::<Result<_>>()?;
    JointCQState::new(Distribution::new(probs)?, states)
}

/// Exhaustive privacy-amplification check: mean hashed trace-norm criterion
/// against both spectral-factor bounds built from sigma.
pub fn privacy_amp_experiment(
    state: &JointCQState,
    family: &HashFamily,
    sigma: &DensityMatrix,
    s: f64,
) -> Result<EnsembleReport> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::InputOutOfRange(format!("s = {s} outside (0, 1]")));
    }
    if family.domain != state.classical_size() {
        return Err(Error::SizeMismatch(family.domain, state.classical_size()));
    }
    let members = family.members.len() as u128;
    if members > EXHAUSTIVE_BUDGET {
        return Err(Error::BudgetExceeded { needed: members, cap: EXHAUSTIVE_BUDGET });
    }
    let m = family.range as f64;
    let mut mean_d1 = 0.0;
    for f in &family.members {
        let hashed = hashed_state(state, f, family.range)?;
        mean_d1 += d1_criteria(&hashed, D1Variant::D1Prime) / members as f64;
    }
    let h = cond_renyi_sigma(state, sigma, s)?;
    let stats = spectral_stats(sigma.op(), DEFAULT_GROUP_TOL);
    let rhs_v = (4.0 + (stats.v as f64).sqrt()) * m.powf(s / 2.0) * (-s / 2.0 * h).exp();
    let lambda = stats.lambda()?;
    let rhs_lambda = (4.0 + lambda.ceil().max(0.0).sqrt())
        * m.powf(s / 2.0)
        * (-s / 2.0 * h + s / 2.0).exp();
    let checks = vec![
        BoundCheck {
            label: "d1-spectral-count",
            s,
            lhs: mean_d1,
            rhs: rhs_v,
            holds: mean_d1 <= rhs_v + 1e-12,
        },
        BoundCheck {
            label: "d1-spectral-spread",
            s,
            lhs: mean_d1,
            rhs: rhs_lambda,
            holds: mean_d1 <= rhs_lambda + 1e-12,
        },
    ];
    Ok(EnsembleReport {
        exhaustive: true,
        trials: family.members.len(),
        seed: None,
        mean_d: mean_d1,
        se_d: 0.0,
        checks,
    })
}

/// Ensemble-average leakage bound for the random code construction:
/// mean Eve information over all codebooks vs (v^s/s) e^{-s H_{1+s}(Q)} e^{psi}.
pub fn random_code_leak_ensemble(
    we: &CQChannel,
    m: usize,
    q: &Distribution,
    p: &Distribution,
    s_grid: &[f64],
) -> Result<EnsembleReport> {
    let l = q.probs().len();
    let nx = we.alphabet_size();
    let support: Vec<usize> = (0..nx).filter(|&x| p.prob(x) > 0.0).collect();
    let count = (support.len() as u128)
        .checked_pow((l * m) as u32)
        .filter(|&c| c <= EXHAUSTIVE_BUDGET)
        .ok_or(Error::BudgetExceeded {
            needed: u128::MAX,
            cap: EXHAUSTIVE_BUDGET,
        })?;
    let mut mean_info = 0.0;
    for idx in 0..count {
        let flat = index_to_vec(support.len() as u64, l * m, idx);
        let weight: f64 = flat.iter().map(|&i| p.prob(support[i as usize])).product();
        if weight == 0.0 {
            continue;
        }
        let mut encoders = Vec::with_capacity(m);
        for col in 0..m {
            let mut probs = vec![0.0; nx];
            for row in 0..l {
                probs[support[flat[col * l + row] as usize]] += q.prob(row);
            }
            encoders.push(Distribution::new(probs)?);
        }
        let (info, _) = eve_metrics(we, &encoders)?;
        mean_info += weight * info;
    }
    let avg = average_output(we, p)?;
    let v = spectral_stats(avg.op(), DEFAULT_GROUP_TOL).v as f64;
    let mut checks = Vec::new();
    for &s in s_grid {
        if !(s > 0.0 && s <= 1.0) {
            return Err(Error::InputOutOfRange(format!("s = {s} outside (0, 1]")));
        }
        let psi = channel_psi(s, we, p)?;
        let rhs = v.powf(s) / s * (-s * renyi_entropy(q, s) + psi).exp();
        checks.push(BoundCheck {
            label: "mean-leak",
            s,
            lhs: mean_info,
            rhs,
            holds: mean_info <= rhs + 1e-12,
        });
    }
    Ok(EnsembleReport {
        exhaustive: true,
        trials: count as usize,
        seed: None,
        mean_d: mean_info,
        se_d: 0.0,
        checks,
    })
}
