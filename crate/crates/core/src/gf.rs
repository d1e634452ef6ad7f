//! Prime-field linear algebra and the randomized code/hash ensembles, with
//! exhaustive (never sampled) condition verifiers.

use std::collections::HashSet;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Largest enumeration allowed by the exhaustive verifiers.
pub const VERIFY_BUDGET: u128 = 1_000_000;

fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= q {
        if q % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn inv_mod(a: u64, q: u64) -> u64 {
    // Fermat: a^(q-2) mod q for prime q, a != 0
    let mut base = a % q;
    let mut exp = q - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % q;
        }
        base = base * base % q;
        exp >>= 1;
    }
    acc
}

/// Dense matrix over the prime field F_q, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GFMatrix {
    q: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl GFMatrix {
    pub fn new(q: u64, rows: usize, cols: usize, entries: Vec<u64>) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        if entries.len() != rows * cols {
            return Err(Error::SizeMismatch(entries.len(), rows * cols));
        }
        let data = entries.into_iter().map(|e| e % q).collect();
        Ok(Self { q, rows, cols, data })
    }

    pub fn zeros(q: u64, rows: usize, cols: usize) -> Result<Self> {
        Self::new(q, rows, cols, vec![0; rows * cols])
    }

    pub fn identity(q: u64, n: usize) -> Result<Self> {
        let mut m = Self::zeros(q, n, n)?;
        for i in 0..n {
            m.set(i, i, 1);
        }
        Ok(m)
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.q;
    }

    pub fn mul_vec(&self, v: &[u64]) -> Result<Vec<u64>> {
        if v.len() != self.cols {
            return Err(Error::SizeMismatch(v.len(), self.cols));
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * (v[j] % self.q)).sum::<u64>() % self.q)
            .collect())
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &GFMatrix) -> Result<GFMatrix> {
        if self.cols != other.cols || self.q != other.q {
            return Err(Error::SizeMismatch(self.cols, other.cols));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        GFMatrix::new(self.q, self.rows + other.rows, self.cols, data)
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &GFMatrix) -> Result<GFMatrix> {
        if self.rows != other.rows || self.q != other.q {
            return Err(Error::SizeMismatch(self.rows, other.rows));
        }
        let mut data = Vec::with_capacity(self.data.len() + other.data.len());
        for i in 0..self.rows {
            data.extend((0..self.cols).map(|j| self.get(i, j)));
            data.extend((0..other.cols).map(|j| other.get(i, j)));
        }
        GFMatrix::new(self.q, self.rows, self.cols + other.cols, data)
    }

    /// Rank via Gaussian elimination.
    pub fn rank(&self) -> usize {
        let q = self.q;
        let mut m = self.data.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0;
        for col in 0..cols {
            let pivot = (rank..rows).find(|&r| m[r * cols + col] != 0);
            let Some(pivot) = pivot else { continue };
            if pivot != rank {
                for j in 0..cols {
                    m.swap(pivot * cols + j, rank * cols + j);
                }
            }
            let inv = inv_mod(m[rank * cols + col], q);
            for j in 0..cols {
                m[rank * cols + j] = m[rank * cols + j] * inv % q;
            }
            for r in 0..rows {
                if r != rank && m[r * cols + col] != 0 {
                    let factor = m[r * cols + col];
                    for j in 0..cols {
                        let sub = factor * m[rank * cols + j] % q;
                        m[r * cols + j] = (m[r * cols + j] + q - sub) % q;
                    }
                }
            }
            rank += 1;
            if rank == rows {
                break;
            }
        }
        rank
    }

    /// True when `x` lies in the column span.
    pub fn in_image(&self, x: &[u64]) -> Result<bool> {
        if x.len() != self.rows {
            return Err(Error::SizeMismatch(x.len(), self.rows));
        }
        let col = GFMatrix::new(self.q, self.rows, 1, x.to_vec())?;
        let aug = self.hstack(&col)?;
        Ok(aug.rank() == self.rank())
    }

    /// Enumerates the column span as vectors; size q^cols must fit the budget.
    pub fn image(&self, budget: u128) -> Result<Vec<Vec<u64>>> {
        let size = (self.q as u128).pow(self.cols as u32);
        if size > budget {
            return Err(Error::BudgetExceeded { needed: size, cap: budget });
        }
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for idx in 0..size {
            let a = index_to_vec(self.q, self.cols, idx);
            let y = self.mul_vec(&a)?;
            if seen.insert(y.clone()) {
                out.push(y);
            }
        }
        Ok(out)
    }
}

/// Decodes `idx` as a base-q vector of length n (least significant first).
pub fn index_to_vec(q: u64, n: usize, mut idx: u128) -> Vec<u64> {
    let mut v = Vec::with_capacity(n);
    for _ in 0..n {
        v.push((idx % q as u128) as u64);
        idx /= q as u128;
    }
    v
}

/// Encodes a base-q vector back to its index.
pub fn vec_to_index(q: u64, v: &[u64]) -> u128 {
    v.iter().rev().fold(0u128, |acc, &d| acc * q as u128 + d as u128)
}

/// Descriptor of a Toeplitz-matrix ensemble over F_q.
#[derive(Debug, Clone, Copy)]
pub struct ToeplitzEnsemble {
    pub q: u64,
    pub rows: usize,
    pub cols: usize,
}

impl ToeplitzEnsemble {
    pub fn new(q: u64, rows: usize, cols: usize) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        Ok(Self { q, rows, cols })
    }

    /// Number of defining field elements (first column + first row).
    pub fn free_entries(&self) -> usize {
        (self.rows + self.cols).saturating_sub(1)
    }

    /// Builds the Toeplitz matrix with defining vector c, where entry (i, j)
    /// equals c[i - j + cols - 1].
    pub fn from_diagonals(&self, c: &[u64]) -> Result<GFMatrix> {
        if c.len() != self.free_entries() {
            return Err(Error::SizeMismatch(c.len(), self.free_entries()));
        }
        let mut m = GFMatrix::zeros(self.q, self.rows, self.cols)?;
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, c[i + self.cols - 1 - j]);
            }
        }
        Ok(m)
    }

    /// Enumerates every member of the ensemble within the budget.
    pub fn enumerate(&self, budget: u128) -> Result<Vec<GFMatrix>> {
        let count = (self.q as u128).pow(self.free_entries() as u32);
        if count > budget {
            return Err(Error::BudgetExceeded { needed: count, cap: budget });
        }
        (0..count)
            .map(|idx| self.from_diagonals(&index_to_vec(self.q, self.free_entries(), idx)))
            .collect()
    }
}

/// Seed-deterministic Toeplitz sample.
pub fn sample_toeplitz(ens: &ToeplitzEnsemble, seed: u64) -> GFMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c: Vec<u64> = (0..ens.free_entries()).map(|_| rng.gen_range(0..ens.q)).collect();
    ens.from_diagonals(&c).expect("length matches by construction")
}

/// Generators of a nested code pair: C1 = image of [[I, 0], [X, Z]] and
/// C2 = image of [[I], [X]] with X a seeded (k-l2) x l2 Toeplitz matrix and
/// Z a fixed (k-l2) x (l1-l2) matrix of full column rank.
pub fn code_pair_ensemble(
    q: u64,
    k: usize,
    l1: usize,
    l2: usize,
    z: &GFMatrix,
    seed: u64,
) -> Result<(GFMatrix, GFMatrix)> {
    if !(l2 <= l1 && l1 <= k) {
        return Err(Error::InputOutOfRange(format!("need l2 <= l1 <= k, got {l2}, {l1}, {k}")));
    }
    if z.rows() != k - l2 || z.cols() != l1 - l2 || z.q() != q {
        return Err(Error::SizeMismatch(z.rows(), k - l2));
    }
    if z.rank() != l1 - l2 {
        return Err(Error::RankDeficient);
    }
    let x = sample_toeplitz(&ToeplitzEnsemble::new(q, k - l2, l2)?, seed);
    let c2 = GFMatrix::identity(q, l2)?.vstack(&x)?;
    let top = GFMatrix::identity(q, l2)?.hstack(&GFMatrix::zeros(q, l2, l1 - l2)?)?;
    let bottom = x.hstack(z)?;
    let c1 = top.vstack(&bottom)?;
    Ok((c1, c2))
}

/// Seed-deterministic uniform injective homomorphism F_q^l -> F_q^k, sampled
/// by rejection (uniform k x l matrix, accepted at full column rank). For any
/// a != 0 the image f(a) is uniform over the nonzero vectors, so the ensemble
/// meets the 1/(|X|-1) collision-style bound exactly.
pub fn injective_hom_ensemble(q: u64, k: usize, l: usize, seed: u64) -> Result<GFMatrix> {
    if l > k {
        return Err(Error::InputOutOfRange(format!("l = {l} > k = {k}")));
    }
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let entries: Vec<u64> = (0..k * l).map(|_| rng.gen_range(0..q)).collect();
        let m = GFMatrix::new(q, k, l, entries)?;
        if m.rank() == l {
            return Ok(m);
        }
    }
}

/// Enumerable family of functions {0..domain} -> {0..range}.
#[derive(Debug, Clone)]
pub struct HashFamily {
    pub domain: usize,
    pub range: usize,
    /// members[m][a] = f_m(a).
    pub members: Vec<Vec<usize>>,
}

/// The partition + permutation family: a fixed balanced cell map composed
/// with every permutation of the domain. Universal-2.
pub fn hash_family_partition_permutation(domain: usize, range: usize) -> Result<HashFamily> {
    if domain % range != 0 {
        return Err(Error::IndivisibleDomain(domain, range));
    }
    let factorial: u128 = (1..=domain as u128).product();
    if factorial > VERIFY_BUDGET {
        return Err(Error::BudgetExceeded { needed: factorial, cap: VERIFY_BUDGET });
    }
    let cell = domain / range;
    let members = (0..domain)
        .permutations(domain)
        .map(|perm| (0..domain).map(|a| perm[a] / cell).collect())
        .collect();
    Ok(HashFamily { domain, range, members })
}

/// All (rows x l2) Toeplitz matrices over F_q viewed as maps
/// F_q^{l2} -> F_q^{rows} on index-encoded vectors.
pub fn hash_family_toeplitz_2c(q: u64, l2: usize, rows: usize) -> Result<HashFamily> {
    let ens = ToeplitzEnsemble::new(q, rows, l2)?;
    let domain = (q as u128).pow(l2 as u32);
    let range = (q as u128).pow(rows as u32);
    let count = (q as u128).pow(ens.free_entries() as u32);
    if count * domain > VERIFY_BUDGET {
        return Err(Error::BudgetExceeded { needed: count * domain, cap: VERIFY_BUDGET });
    }
    let members = ens
        .enumerate(VERIFY_BUDGET)?
        .into_iter()
        .map(|g| {
            (0..domain)
                .map(|idx| {
                    let a = index_to_vec(q, l2, idx);
                    vec_to_index(q, &g.mul_vec(&a).expect("sizes match")) as usize
                })
                .collect()
        })
        .collect();
    Ok(HashFamily { domain: domain as usize, range: range as usize, members })
}

/// Verdict of an exhaustive condition check.
#[derive(Debug, Clone, Copy)]
pub struct ConditionReport {
    /// Worst-case probability found across all tested elements.
    pub worst_prob: f64,
    /// The bound it must not exceed.
    pub bound: f64,
    pub holds: bool,
    /// Number of enumerated ensemble members.
    pub members: u128,
}

/// Which condition to verify, with the parameters of the ensemble.
#[derive(Debug, Clone)]
pub enum ConditionSpec<'a> {
    /// Universal-2 collision bound 1/range for a hash family.
    C1 { family: &'a HashFamily },
    /// Submodule ensemble C(X) = image of [[I],[X]], X Toeplitz:
    /// P(x in C(X)) <= L/|X| for x != 0.
    C2 { q: u64, k: usize, l: usize },
    /// Uniform injective homomorphisms: P(f(a) = x) <= 1/(|X|-1).
    C2b { q: u64, k: usize, l: usize },
    /// Toeplitz homomorphism family: P(g(a) = b) = 1/M for a != 0.
    C2c { q: u64, l2: usize, rows: usize },
}

/// Exhaustively verifies a condition; refuses (never samples) beyond `budget`.
pub fn verify_condition(spec: &ConditionSpec, budget: u128) -> Result<ConditionReport> {
    match *spec {
        ConditionSpec::C1 { family } => {
            let members = family.members.len() as u128;
            let pairs = (family.domain * family.domain) as u128;
            if members * pairs > budget {
                return Err(Error::BudgetExceeded { needed: members * pairs, cap: budget });
            }
            let bound = 1.0 / family.range as f64;
            let mut worst = 0.0_f64;
            for a1 in 0..family.domain {
                for a2 in 0..family.domain {
                    if a1 == a2 {
                        continue;
                    }
                    let hits =
                        family.members.iter().filter(|f| f[a1] == f[a2]).count();
                    worst = worst.max(hits as f64 / members as f64);
                }
            }
            Ok(ConditionReport { worst_prob: worst, bound, holds: worst <= bound + 1e-12, members })
        }
        ConditionSpec::C2 { q, k, l } => {
            let ens = ToeplitzEnsemble::new(q, k - l, l)?;
            let members = (q as u128).pow(ens.free_entries() as u32);
            let space = (q as u128).pow(k as u32);
            if members * space > budget {
                return Err(Error::BudgetExceeded { needed: members * space, cap: budget });
            }
            let l_card = (q as f64).powi(l as i32);
            let bound = l_card / (q as f64).powi(k as i32);
            let mut counts = vec![0u64; space as usize];
            for x_mat in ens.enumerate(budget)? {
                let gen = GFMatrix::identity(q, l)?.vstack(&x_mat)?;
                for y in gen.image(budget)? {
                    counts[vec_to_index(q, &y) as usize] += 1;
                }
            }
            let mut worst = 0.0_f64;
            for (idx, &c) in counts.iter().enumerate().skip(1) {
                let _ = idx;
                worst = worst.max(c as f64 / members as f64);
            }
            Ok(ConditionReport { worst_prob: worst, bound, holds: worst <= bound + 1e-12, members })
        }
        ConditionSpec::C2b { q, k, l } => {
            let total = (q as u128).pow((k * l) as u32);
            let space = (q as u128).pow(k as u32);
            let dom = (q as u128).pow(l as u32);
            if total * dom > budget {
                return Err(Error::BudgetExceeded { needed: total * dom, cap: budget });
            }
            let bound = 1.0 / (space as f64 - 1.0);
            // counts[a][x] over all injective matrices
            let mut counts = vec![vec![0u64; space as usize]; dom as usize];
            let mut members = 0u128;
            for idx in 0..total {
                let m = GFMatrix::new(q, k, l, index_to_vec(q, k * l, idx))?;
                if m.rank() != l {
                    continue;
                }
                members += 1;
                for a_idx in 1..dom {
                    let a = index_to_vec(q, l, a_idx);
                    let x = m.mul_vec(&a)?;
                    counts[a_idx as usize][vec_to_index(q, &x) as usize] += 1;
                }
            }
            let mut worst = 0.0_f64;
            for a_idx in 1..dom as usize {
                for x_idx in 1..space as usize {
                    worst = worst.max(counts[a_idx][x_idx] as f64 / members as f64);
                }
            }
            Ok(ConditionReport { worst_prob: worst, bound, holds: worst <= bound + 1e-12, members })
        }
        ConditionSpec::C2c { q, l2, rows } => {
            let family = hash_family_toeplitz_2c(q, l2, rows)?;
            let members = family.members.len() as u128;
            let m_card = family.range as f64;
            let bound = 1.0 / m_card;
            // exact equality required for every a != 0 and b
            let mut worst = 0.0_f64;
            let mut all_equal = true;
            for a in 1..family.domain {
                for b in 0..family.range {
                    let hits = family.members.iter().filter(|f| f[a] == b).count();
                    let p = hits as f64 / members as f64;
                    worst = worst.max(p);
                    if (p - bound).abs() > 1e-12 {
                        all_equal = false;
                    }
                }
            }
            Ok(ConditionReport { worst_prob: worst, bound, holds: all_equal, members })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn rank_and_inverse_basics() {
        let m = GFMatrix::new(2, 2, 2, vec![1, 1, 0, 1]).unwrap();
        assert_eq!(m.rank(), 2);
        let s = GFMatrix::new(3, 2, 2, vec![1, 2, 2, 4]).unwrap();
        assert_eq!(s.rank(), 1);
        assert_eq!(inv_mod(2, 5), 3);
        assert_eq!(inv_mod(4, 7), 2);
        assert!(matches!(GFMatrix::new(4, 1, 1, vec![0]), Err(Error::NotPrime(4))));
    }

    #[test]
    fn image_membership() {
        let gen = GFMatrix::new(2, 3, 1, vec![1, 1, 0]).unwrap();
        assert!(gen.in_image(&[1, 1, 0]).unwrap());
        assert!(gen.in_image(&[0, 0, 0]).unwrap());
        assert!(!gen.in_image(&[1, 0, 0]).unwrap());
        let img = gen.image(VERIFY_BUDGET).unwrap();
        assert_eq!(img.len(), 2);
    }

    #[test]
    fn toeplitz_structure_and_determinism() {
        let ens = ToeplitzEnsemble::new(3, 3, 2).unwrap();
        for seed in 0..100 {
            let m = sample_toeplitz(&ens, seed);
            // constant along diagonals
            for i in 1..3 {
                for j in 1..2 {
                    assert_eq!(m.get(i, j), m.get(i - 1, j - 1));
                }
            }
            assert_eq!(m, sample_toeplitz(&ens, seed));
        }
        // same defining vector -> same matrix
        let a = ens.from_diagonals(&[1, 2, 0, 1]).unwrap();
        let b = ens.from_diagonals(&[1, 2, 0, 1]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn toeplitz_1x1_frequencies() {
        let ens = ToeplitzEnsemble::new(2, 1, 1).unwrap();
        let mut ones = 0usize;
        let n = 10_000;
        for seed in 0..n {
            if sample_toeplitz(&ens, seed as u64).get(0, 0) == 1 {
                ones += 1;
            }
        }
        // chi-square sanity at ~5 sigma for p = 1/2
        let dev = (ones as f64 - n as f64 / 2.0).abs();
        assert!(dev < 5.0 * (n as f64 / 4.0).sqrt(), "ones = {ones}");
    }

    #[test]
    fn code_pair_nesting_and_dims() {
        let q = 2;
        let (k, l1, l2) = (4usize, 2usize, 1usize);
        let z = GFMatrix::new(q, k - l2, l1 - l2, vec![1, 0, 1]).unwrap();
        for seed in 0..20 {
            let (c1, c2) = code_pair_ensemble(q, k, l1, l2, &z, seed).unwrap();
            assert_eq!(c1.rank(), l1);
            assert_eq!(c2.rank(), l2);
            // every generator column of C2 lies in the image of C1
            for j in 0..c2.cols() {
                let col: Vec<u64> = (0..c2.rows()).map(|i| c2.get(i, j)).collect();
                assert!(c1.in_image(&col).unwrap());
            }
        }
        // l1 = l2: C1 = C2
        let z_empty = GFMatrix::zeros(q, k - 1, 0).unwrap();
        let (c1, c2) = code_pair_ensemble(q, k, 1, 1, &z_empty, 5).unwrap();
        assert_eq!(c1, c2);
        // rank-deficient Z rejected
        let z_bad = GFMatrix::zeros(q, k - l2, l1 - l2).unwrap();
        assert!(matches!(
            code_pair_ensemble(q, k, l1, l2, &z_bad, 0),
            Err(Error::RankDeficient)
        ));
    }

    #[test]
    fn code_pair_subspace_closure() {
        let q = 3;
        let z = GFMatrix::new(q, 2, 1, vec![1, 2]).unwrap();
        let (c1, _c2) = code_pair_ensemble(q, 3, 2, 1, &z, 7).unwrap();
        let img = c1.image(VERIFY_BUDGET).unwrap();
        let set: HashSet<Vec<u64>> = img.iter().cloned().collect();
        for a in &img {
            for b in &img {
                let sum: Vec<u64> = a.iter().zip(b).map(|(x, y)| (x + y) % q).collect();
                assert!(set.contains(&sum));
                let scaled: Vec<u64> = a.iter().map(|x| x * 2 % q).collect();
                assert!(set.contains(&scaled));
            }
        }
    }

    #[test]
    fn injective_ensemble_rank_and_determinism() {
        for seed in 0..100 {
            let m = injective_hom_ensemble(2, 4, 2, seed).unwrap();
            assert_eq!(m.rank(), 2);
            assert_eq!(m, injective_hom_ensemble(2, 4, 2, seed).unwrap());
        }
        // l = k: bijective
        let m = injective_hom_ensemble(3, 2, 2, 1).unwrap();
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn condition_c2_small_catalog() {
        // q=2, k=2, l=1: P((1,0) in C) = 1/2 = L/|X|; P((0,1) in C) = 0
        let rep = verify_condition(&ConditionSpec::C2 { q: 2, k: 2, l: 1 }, VERIFY_BUDGET).unwrap();
        assert!(rep.holds);
        assert_abs_diff_eq!(rep.worst_prob, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(rep.bound, 0.5, epsilon = 1e-12);
        // l = k: probability 1 = L/|X|, holds with equality
        let rep2 = verify_condition(&ConditionSpec::C2 { q: 2, k: 2, l: 2 }, VERIFY_BUDGET).unwrap();
        assert!(rep2.holds);
        assert_abs_diff_eq!(rep2.worst_prob, 1.0, epsilon = 1e-12);
        // q=2, k=3, l=1 (the code-pair C2 block is the same ensemble)
        let rep3 = verify_condition(&ConditionSpec::C2 { q: 2, k: 3, l: 1 }, VERIFY_BUDGET).unwrap();
        assert!(rep3.holds);
    }

    #[test]
    fn condition_c2b_small_catalog() {
        let rep = verify_condition(&ConditionSpec::C2b { q: 2, k: 2, l: 1 }, VERIFY_BUDGET).unwrap();
        assert!(rep.holds);
        assert_abs_diff_eq!(rep.bound, 1.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rep.worst_prob, 1.0 / 3.0, epsilon = 1e-12);
        let rep3 = verify_condition(&ConditionSpec::C2b { q: 3, k: 2, l: 1 }, VERIFY_BUDGET).unwrap();
        assert!(rep3.holds);
        assert_abs_diff_eq!(rep3.bound, 1.0 / 8.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rep3.worst_prob, 1.0 / 8.0, epsilon = 1e-12);
    }

    #[test]
    fn condition_c2c_exact() {
        // q=2, l2=2, rows=1: P(g(a) = b) = 1/2 exactly for a != 0
        let rep =
            verify_condition(&ConditionSpec::C2c { q: 2, l2: 2, rows: 1 }, VERIFY_BUDGET).unwrap();
        assert!(rep.holds);
        assert_abs_diff_eq!(rep.worst_prob, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn condition_c1_partition_permutation() {
        let family = hash_family_partition_permutation(4, 2).unwrap();
        assert_eq!(family.members.len(), 24);
        let rep = verify_condition(&ConditionSpec::C1 { family: &family }, VERIFY_BUDGET).unwrap();
        assert!(rep.holds);
        // collision probability (cell-1)/(domain-1) = 1/3 <= 1/2
        assert_abs_diff_eq!(rep.worst_prob, 1.0 / 3.0, epsilon = 1e-12);
        // M = 1: everything collides, bound 1 holds with equality
        let trivial = hash_family_partition_permutation(3, 1).unwrap();
        let rep1 = verify_condition(&ConditionSpec::C1 { family: &trivial }, VERIFY_BUDGET).unwrap();
        assert!(rep1.holds);
        assert_abs_diff_eq!(rep1.worst_prob, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn budget_refusal() {
        assert!(matches!(
            verify_condition(&ConditionSpec::C2b { q: 3, k: 4, l: 3 }, 1000),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(matches!(
            hash_family_partition_permutation(12, 2),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(matches!(
            hash_family_partition_permutation(5, 2),
            Err(Error::IndivisibleDomain(5, 2))
        ));
    }
}
