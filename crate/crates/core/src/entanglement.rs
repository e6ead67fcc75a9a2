//! Reduced density matrices and the entanglement measures built on them.
//!
//! Inside a block the computational basis is ordered with the first listed
//! site as the most significant qubit and `1 = up`, so for two sites the
//! order is `{|↓↓⟩, |↓↑⟩, |↑↓⟩, |↑↑⟩}`. All entropies are in bits.

use nalgebra::{DMatrix, Matrix4, SymmetricEigen};

use crate::hamiltonian::StateVector;
use crate::lattice::LadderSpec;
use crate::{Error, Result};

/// Largest block handled by [`reduced_density_matrix`].
pub const MAX_BLOCK: usize = 14;

/// Eigenvalues below this are treated as zero in entropies.
const EIGEN_FLOOR: f64 = 1e-14;

/// One fixed-magnetization block of a density matrix.
#[derive(Debug, Clone)]
pub struct RdmSector {
    pub up_count: usize,
    /// Block basis indices belonging to this sector, ascending.
    pub indices: Vec<usize>,
    pub matrix: DMatrix<f64>,
}

#[derive(Debug, Clone)]
enum Repr {
    Sectors(Vec<RdmSector>),
    Dense(DMatrix<f64>),
}

/// Real symmetric density matrix of an ordered set of sites.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    sites: Vec<usize>,
    repr: Repr,
}

impl DensityMatrix {
    /// Wrap an explicit `2^l × 2^l` matrix for the sites `0..l`.
    pub fn from_dense(matrix: DMatrix<f64>) -> Result<Self> {
        let n = matrix.nrows();
        if n != matrix.ncols() || !n.is_power_of_two() || n < 2 {
            return Err(Error::DimensionMismatch { expected: n.next_power_of_two().max(2), found: matrix.ncols() });
        }
        if (&matrix - matrix.transpose()).amax() > 1e-10 {
            return Err(Error::Structure("matrix is not symmetric".into()));
        }
        let l = n.trailing_zeros() as usize;
        Ok(DensityMatrix { sites: (0..l).collect(), repr: Repr::Dense(matrix) })
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn block_len(&self) -> usize {
        self.sites.len()
    }

    pub fn dim(&self) -> usize {
        1 << self.sites.len()
    }

    /// Fixed-magnetization blocks, when the matrix was built that way.
    pub fn sectors(&self) -> Option<&[RdmSector]> {
        match &self.repr {
            Repr::Sectors(s) => Some(s),
            Repr::Dense(_) => None,
        }
    }

    pub fn entry(&self, p: usize, q: usize) -> f64 {
        match &self.repr {
            Repr::Dense(m) => m[(p, q)],
            Repr::Sectors(sectors) => {
                if p.count_ones() != q.count_ones() {
                    return 0.0;
                }
                let s = &sectors[p.count_ones() as usize];
                let (Ok(i), Ok(j)) = (s.indices.binary_search(&p), s.indices.binary_search(&q)) else {
                    return 0.0;
                };
                s.matrix[(i, j)]
            }
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        match &self.repr {
            Repr::Dense(m) => m.clone(),
            Repr::Sectors(sectors) => {
                let mut m = DMatrix::zeros(self.dim(), self.dim());
                for s in sectors {
                    for (i, &p) in s.indices.iter().enumerate() {
                        for (j, &q) in s.indices.iter().enumerate() {
                            m[(p, q)] = s.matrix[(i, j)];
                        }
                    }
                }
                m
            }
        }
    }

    pub fn trace(&self) -> f64 {
        match &self.repr {
            Repr::Dense(m) => m.trace(),
            Repr::Sectors(sectors) => sectors.iter().map(|s| s.matrix.trace()).sum(),
        }
    }

    /// All eigenvalues, descending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut vals: Vec<f64> = match &self.repr {
            Repr::Dense(m) => SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect(),
            Repr::Sectors(sectors) => sectors
                .iter()
                .filter(|s| !s.indices.is_empty())
                .flat_map(|s| SymmetricEigen::new(s.matrix.clone()).eigenvalues.iter().copied().collect::<Vec<_>>())
                .collect(),
        };
        vals.sort_by(|a, b| b.total_cmp(a));
        vals
    }

    /// Largest entry connecting different block magnetizations.
    pub fn off_sector_max(&self) -> f64 {
        match &self.repr {
            Repr::Sectors(_) => 0.0,
            Repr::Dense(m) => {
                let mut worst = 0.0f64;
                for p in 0..m.nrows() {
                    for q in 0..m.ncols() {
                        if p.count_ones() != q.count_ones() {
                            worst = worst.max(m[(p, q)].abs());
                        }
                    }
                }
                worst
            }
        }
    }
}

/// `ρ_A = Tr_B |ψ⟩⟨ψ|` for the block `sites`.
///
/// Amplitudes are grouped by their environment configuration; only pairs
/// sharing an environment contribute, and those pairs always sit in the same
/// block magnetization sector because the global magnetization is fixed.
pub fn reduced_density_matrix(state: &StateVector, sites: &[usize]) -> Result<DensityMatrix> {
    let basis = state.basis();
    let n = basis.sites();
    let l = sites.len();
    if l == 0 || l >= n {
        return Err(Error::InvalidBlock(format!("block of {l} sites in a {n}-site system")));
    }
    if l > MAX_BLOCK {
        return Err(Error::InvalidBlock(format!("block of {l} sites exceeds the limit of {MAX_BLOCK}")));
    }
    let mut block_mask = 0u64;
    for &s in sites {
        if s >= n {
            return Err(Error::InvalidBlock(format!("site {s} out of range for {n} sites")));
        }
        if block_mask >> s & 1 == 1 {
            return Err(Error::InvalidBlock(format!("site {s} listed twice")));
        }
        block_mask |= 1 << s;
    }

    let block_index = |config: u64| {
        sites.iter().fold(0usize, |acc, &s| (acc << 1) | ((config >> s) & 1) as usize)
    };

    let mut entries: Vec<(u64, usize, f64)> = basis
        .states()
        .iter()
        .zip(state.amplitudes())
        .filter(|(_, &a)| a != 0.0)
        .map(|(c, &a)| (c.0 & !block_mask, block_index(c.0), a))
        .collect();
    entries.sort_unstable_by_key(|e| (e.0, e.1));

    let dim = 1usize << l;
    let mut position = vec![0usize; dim];
    let mut sectors: Vec<RdmSector> = (0..=l)
        .map(|c| RdmSector { up_count: c, indices: Vec::new(), matrix: DMatrix::zeros(0, 0) })
        .collect();
    for p in 0..dim {
        let s = &mut sectors[p.count_ones() as usize];
        position[p] = s.indices.len();
        s.indices.push(p);
    }
    for s in &mut sectors {
        s.matrix = DMatrix::zeros(s.indices.len(), s.indices.len());
    }

    for group in entries.chunk_by(|a, b| a.0 == b.0) {
        let m = &mut sectors[group[0].1.count_ones() as usize].matrix;
        for &(_, p, ap) in group {
            for &(_, q, aq) in group {
                m[(position[p], position[q])] += ap * aq;
            }
        }
    }

    Ok(DensityMatrix { sites: sites.to_vec(), repr: Repr::Sectors(sectors) })
}

/// `−Σ λ log₂ λ` over the spectrum, dropping eigenvalues below `1e-14`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    entropy_of(&rho.eigenvalues())
}

/// Shannon entropy in bits of a probability list.
pub fn entropy_of(probabilities: &[f64]) -> f64 {
    probabilities.iter().filter(|&&p| p > EIGEN_FLOOR).map(|&p| -p * p.log2()).sum()
}

fn four_by_four(rho: &DensityMatrix) -> Result<Matrix4<f64>> {
    if rho.block_len() != 2 {
        return Err(Error::DimensionMismatch { expected: 4, found: rho.dim() });
    }
    Ok(Matrix4::from_fn(|i, j| rho.entry(i, j)))
}

/// Wootters concurrence `max(λ₁ − λ₂ − λ₃ − λ₄, 0)` of a two-site matrix.
///
/// The `λᵢ` are square roots of the eigenvalues of `ρ ρ̃`, obtained from the
/// symmetric similar matrix `√ρ ρ̃ √ρ`.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    let r = four_by_four(rho)?;
    // σy ⊗ σy is real for this basis ordering.
    let flip = Matrix4::new(
        0.0, 0.0, 0.0, -1.0, //
        0.0, 0.0, 1.0, 0.0, //
        0.0, 1.0, 0.0, 0.0, //
        -1.0, 0.0, 0.0, 0.0,
    );
    let tilde = flip * r * flip;
    let eig = SymmetricEigen::new(r);
    let sqrt_vals = eig.eigenvalues.map(|v| v.max(0.0).sqrt());
    let sqrt_rho = eig.eigenvectors * Matrix4::from_diagonal(&sqrt_vals) * eig.eigenvectors.transpose();
    let m = sqrt_rho * tilde * sqrt_rho;
    let m = (m + m.transpose()) * 0.5;
    let mut lambdas = Vec::with_capacity(4);
    for v in SymmetricEigen::new(m).eigenvalues.iter() {
        if *v < -1e-12 {
            return Err(Error::Structure(format!("ρρ̃ has eigenvalue {v:.3e} < 0")));
        }
        lambdas.push(v.max(0.0).sqrt());
    }
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0))
}

/// Populations and coherence of a magnetization-conserving two-site matrix
///
/// ```text
/// ⎛ u⁺  0   0   0  ⎞
/// ⎜ 0   w₁  z*  0  ⎟
/// ⎜ 0   z   w₂  0  ⎟
/// ⎝ 0   0   0   u⁻ ⎠
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RungRdmParams {
    pub u_plus: f64,
    pub u_minus: f64,
    pub w1: f64,
    pub w2: f64,
    pub z: f64,
}

const PATTERN_TOL: f64 = 1e-10;

pub fn rung_rdm_params(rho: &DensityMatrix) -> Result<RungRdmParams> {
    let r = four_by_four(rho)?;
    for i in 0..4 {
        for j in 0..4 {
            let allowed = i == j || (i, j) == (1, 2) || (i, j) == (2, 1);
            if !allowed && r[(i, j)].abs() > PATTERN_TOL {
                return Err(Error::Structure(format!("entry ({i},{j}) = {:.3e}", r[(i, j)])));
            }
        }
    }
    if (r[(1, 2)] - r[(2, 1)]).abs() > PATTERN_TOL {
        return Err(Error::Structure("coherence is not real".into()));
    }
    Ok(RungRdmParams { u_plus: r[(0, 0)], w1: r[(1, 1)], w2: r[(2, 2)], u_minus: r[(3, 3)], z: r[(2, 1)] })
}

/// Rung entropy of the rotation-invariant two-site matrix, where
/// `u⁺ = u⁻ = (1+2z)/4` and `w₁ = w₂ = (1−2z)/4`: three eigenvalues equal
/// `u⁺` and the fourth is `w₁ − z`.
pub fn rung_entropy_from_z(z: f64) -> Result<f64> {
    const SLACK: f64 = 1e-12;
    if !(-0.5 - SLACK..=1.0 / 6.0 + SLACK).contains(&z) {
        return Err(Error::OutOfRange(format!("z = {z} outside [-1/2, 1/6]")));
    }
    let u = ((1.0 + 2.0 * z) / 4.0).max(0.0);
    let w = (1.0 - 2.0 * z) / 4.0;
    let singlet = (w - z).max(0.0);
    Ok(entropy_of(&[u, u, u, singlet]))
}

/// `⟨ψ| S_i·S_j |ψ⟩` evaluated directly on the configuration basis.
pub fn spin_correlator(state: &StateVector, i: usize, j: usize) -> f64 {
    let basis = state.basis();
    let psi = state.amplitudes();
    basis
        .states()
        .iter()
        .zip(psi)
        .map(|(s, &a)| {
            if s.is_up(i) == s.is_up(j) {
                0.25 * a * a
            } else {
                let partner = psi[basis.index_unchecked(s.exchanged(i, j))];
                a * (-0.25 * a + 0.5 * partner)
            }
        })
        .sum()
}

/// `⟨S_{1,i}·S_{2,i}⟩` on rung `i` (1-based).
pub fn rung_correlator(state: &StateVector, spec: &LadderSpec, rung: usize) -> f64 {
    spin_correlator(state, spec.site(1, rung), spec.site(2, rung))
}

/// `⟨T⟩ = Σ_i ⟨S_{1,i}·S_{2,i}⟩`.
pub fn expectation_t(state: &StateVector, spec: &LadderSpec) -> f64 {
    (1..=spec.rungs()).map(|i| rung_correlator(state, spec, i)).sum()
}

/// Concurrence between two sites of a state.
pub fn pair_concurrence(state: &StateVector, i: usize, j: usize) -> Result<f64> {
    concurrence(&reduced_density_matrix(state, &[i, j])?)
}
