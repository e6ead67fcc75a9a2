//! Closed forms for the zero-magnetization ferromagnetic (Dicke) state.
//!
//! The `Sz = 0` member of the fully polarized multiplet is the uniform
//! superposition of all half-filled configurations. Tracing out all but `l`
//! sites leaves a matrix that is diagonal in the block magnetization, with
//! one nonzero eigenvalue per block up-count `k`:
//!
//! `λ_k = C(l, k) · C(N−l, N/2−k) / C(N, N/2)`,
//!
//! a hypergeometric distribution. It depends on the block only through `l`.

use std::sync::Arc;

use statrs::function::factorial::ln_binomial;

use crate::basis::SectorBasis;
use crate::entanglement::entropy_of;
use crate::hamiltonian::StateVector;
use crate::{Error, Result};

/// Up to this many sites binomials are evaluated exactly in integers.
const EXACT_SITES: usize = 28;

/// Uniform amplitudes `1/√C(N, N/2)` on every `Sz = 0` configuration.
pub fn fm_state(basis: Arc<SectorBasis>) -> Result<StateVector> {
    if basis.two_sz() != 0 {
        return Err(Error::InvalidSector {
            sites: basis.sites(),
            two_sz: basis.two_sz(),
            reason: "ferromagnetic state is built in the Sz = 0 sector".into(),
        });
    }
    let amp = 1.0 / (basis.dim() as f64).sqrt();
    let dim = basis.dim();
    StateVector::new(basis, vec![amp; dim])
}

/// Nonzero block spectrum of the Dicke state.
#[derive(Debug, Clone, PartialEq)]
pub struct FmSpectrum {
    pub sites: usize,
    pub block: usize,
    /// `lambdas[k]` belongs to block magnetization `pz = k − l/2`.
    pub lambdas: Vec<f64>,
}

impl FmSpectrum {
    /// `(pz, λ)` pairs in ascending `pz`.
    pub fn by_magnetization(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = self.block as f64 / 2.0;
        self.lambdas.iter().enumerate().map(move |(k, &l)| (k as f64 - half, l))
    }
}

fn exact_binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k) as u128;
    (0..k).fold(1u128, |acc, i| acc * (n as u128 - i) / (i + 1))
}

fn check_block(sites: usize, block: usize) -> Result<()> {
    if sites < 2 || !sites.is_multiple_of(2) {
        return Err(Error::OutOfRange(format!("need an even site count, got {sites}")));
    }
    if block == 0 || block >= sites {
        return Err(Error::OutOfRange(format!("block size {block} outside 1..{sites}")));
    }
    Ok(())
}

pub fn fm_block_spectrum(sites: usize, block: usize) -> Result<FmSpectrum> {
    check_block(sites, block)?;
    let half = sites / 2;
    let rest = sites - block;
    let lambdas = (0..=block)
        .map(|k| {
            if k > half || half - k > rest {
                return 0.0;
            }
            if sites <= EXACT_SITES {
                let num = exact_binomial(block, k) * exact_binomial(rest, half - k);
                num as f64 / exact_binomial(sites, half) as f64
            } else {
                (ln_binomial(block as u64, k as u64) + ln_binomial(rest as u64, (half - k) as u64)
                    - ln_binomial(sites as u64, half as u64))
                .exp()
            }
        })
        .collect();
    Ok(FmSpectrum { sites, block, lambdas })
}

/// Block entropy of the Dicke state, in bits.
pub fn fm_entropy(sites: usize, block: usize) -> Result<f64> {
    Ok(entropy_of(&fm_block_spectrum(sites, block)?.lambdas))
}

/// Gaussian large-size approximation of [`fm_entropy`]:
/// `−½ log₂(1/l + 1/(N−l)) + ½ log₂(πe/2)`.
pub fn fm_entropy_asymptotic(sites: usize, block: usize) -> Result<f64> {
    check_block(sites, block)?;
    let l = block as f64;
    let rest = (sites - block) as f64;
    Ok(-0.5 * (1.0 / l + 1.0 / rest).log2() + 0.5 * (std::f64::consts::PI * std::f64::consts::E / 2.0).log2())
}

/// Concurrence of any pair of sites in the Dicke state, `1/(N−1)`.
pub fn fm_pair_concurrence(sites: usize) -> Result<f64> {
    if sites < 2 {
        return Err(Error::OutOfRange(format!("need at least two sites, got {sites}")));
    }
    Ok(1.0 / (sites as f64 - 1.0))
}
