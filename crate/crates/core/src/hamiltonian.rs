//! Matrix-free action of the ladder Hamiltonian
//!
//! `H = Jr Σ S1i·S2i + Jl Σ (S1i·S1i+1 + S2i·S2i+1) + K Σ (P + P⁻¹)`
//!
//! on vectors of a [`SectorBasis`]. Every output amplitude is gathered from
//! its own row, so the output can be split into disjoint slices across
//! threads.

use std::sync::Arc;

use crate::basis::{SectorBasis, SpinConfig};
use crate::eigensolver::LinearOperator;
use crate::lattice::{Couplings, LadderSpec, LadderTerms, Plaquette};
use crate::linalg;
use crate::{Error, Result};

/// Real amplitudes over a sector basis.
#[derive(Debug, Clone)]
pub struct StateVector {
    basis: Arc<SectorBasis>,
    amplitudes: Vec<f64>,
}

impl StateVector {
    pub fn new(basis: Arc<SectorBasis>, amplitudes: Vec<f64>) -> Result<Self> {
        if amplitudes.len() != basis.dim() {
            return Err(Error::DimensionMismatch { expected: basis.dim(), found: amplitudes.len() });
        }
        Ok(StateVector { basis, amplitudes })
    }

    /// Single basis configuration with amplitude one.
    pub fn basis_state(basis: Arc<SectorBasis>, config: SpinConfig) -> Result<Self> {
        let k = basis.index_of(config)?;
        let mut amplitudes = vec![0.0; basis.dim()];
        amplitudes[k] = 1.0;
        Ok(StateVector { basis, amplitudes })
    }

    pub fn basis(&self) -> &Arc<SectorBasis> {
        &self.basis
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [f64] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<f64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        linalg::norm(&self.amplitudes)
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            linalg::scale(1.0 / n, &mut self.amplitudes);
        }
    }

    pub fn dot(&self, other: &StateVector) -> f64 {
        linalg::dot(&self.amplitudes, &other.amplitudes)
    }
}

/// Cyclic permutation of the four plaquette spins.
///
/// The forward map takes `|a b; d c⟩` to `|d a; c b⟩`: the old values at
/// `(a, b, c, d)` move to `(b, c, d, a)`. `inverse` applies the opposite cycle.
#[inline]
pub fn apply_ring_permutation(p: &Plaquette, config: SpinConfig, inverse: bool) -> SpinConfig {
    let x = config.0;
    let bit = |s: usize| (x >> s) & 1;
    let (ba, bb, bc, bd) = (bit(p.a), bit(p.b), bit(p.c), bit(p.d));
    let cleared = x & !((1 << p.a) | (1 << p.b) | (1 << p.c) | (1 << p.d));
    let moved = if inverse {
        (bb << p.a) | (bc << p.b) | (bd << p.c) | (ba << p.d)
    } else {
        (bd << p.a) | (ba << p.b) | (bb << p.c) | (bc << p.d)
    };
    SpinConfig(cleared | moved)
}

/// Row `k` of `S_i·S_j` applied to `x`.
#[inline]
fn exchange_row(basis: &SectorBasis, s: SpinConfig, k: usize, i: usize, j: usize, x: &[f64]) -> f64 {
    if s.is_up(i) == s.is_up(j) {
        0.25 * x[k]
    } else {
        -0.25 * x[k] + 0.5 * x[basis.index_unchecked(s.exchanged(i, j))]
    }
}

/// `S_i·S_j` applied to a whole vector.
fn apply_exchange(basis: &SectorBasis, i: usize, j: usize, x: &[f64]) -> Vec<f64> {
    let mut y = vec![0.0; x.len()];
    linalg::fill_rows(&mut y, |k| exchange_row(basis, basis.state(k), k, i, j, x));
    y
}

#[derive(Debug, Clone)]
pub struct LadderHamiltonian {
    spec: LadderSpec,
    couplings: Couplings,
    basis: Arc<SectorBasis>,
    terms: LadderTerms,
    /// `(bit mask of the two sites, coupling)` for every rung and leg bond.
    bonds: Vec<(u64, f64)>,
}

impl LadderHamiltonian {
    pub fn new(spec: LadderSpec, couplings: Couplings, basis: Arc<SectorBasis>) -> Result<Self> {
        if basis.sites() != spec.sites() {
            return Err(Error::DimensionMismatch { expected: spec.sites(), found: basis.sites() });
        }
        let terms = spec.terms();
        let mask = |&(i, j): &(usize, usize)| (1u64 << i) | (1u64 << j);
        let bonds = terms
            .rung_bonds
            .iter()
            .map(|b| (mask(b), couplings.jr))
            .chain(terms.leg_bonds.iter().map(|b| (mask(b), couplings.jl)))
            .collect();
        Ok(LadderHamiltonian { spec, couplings, terms, basis, bonds })
    }

    pub fn spec(&self) -> &LadderSpec {
        &self.spec
    }

    pub fn couplings(&self) -> &Couplings {
        &self.couplings
    }

    pub fn basis(&self) -> &Arc<SectorBasis> {
        &self.basis
    }

    pub fn terms(&self) -> &LadderTerms {
        &self.terms
    }

    fn row(&self, k: usize, x: &[f64]) -> f64 {
        let basis = &*self.basis;
        let s = basis.state(k).0;
        let mut diag = 0.0;
        let mut off = 0.0;
        for &(mask, coupling) in &self.bonds {
            let bits = s & mask;
            if bits == 0 || bits == mask {
                diag += 0.25 * coupling;
            } else {
                diag -= 0.25 * coupling;
                off += 0.5 * coupling * x[basis.index_unchecked(SpinConfig(s ^ mask))];
            }
        }
        let ring = self.couplings.k;
        if ring != 0.0 {
            let mut cyclic = 0.0;
            for p in &self.terms.plaquettes {
                let fwd = apply_ring_permutation(p, SpinConfig(s), false);
                let bwd = apply_ring_permutation(p, SpinConfig(s), true);
                cyclic += x[basis.index_unchecked(fwd)] + x[basis.index_unchecked(bwd)];
            }
            off += ring * cyclic;
        }
        diag * x[k] + off
    }

    /// `y = H x`.
    pub fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.basis.dim());
        assert_eq!(y.len(), self.basis.dim());
        linalg::fill_rows(y, |k| self.row(k, x));
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        self.check(v)?;
        let mut y = vec![0.0; v.amplitudes.len()];
        self.apply_into(&v.amplitudes, &mut y);
        Ok(StateVector { basis: v.basis.clone(), amplitudes: y })
    }

    /// `Σ_p (P_p + P_p⁻¹) x` through the permutation route.
    pub fn apply_ring(&self, x: &[f64]) -> Vec<f64> {
        let basis = &*self.basis;
        let mut y = vec![0.0; x.len()];
        linalg::fill_rows(&mut y, |k| {
            let s = basis.state(k);
            self.terms
                .plaquettes
                .iter()
                .map(|p| {
                    x[basis.index_unchecked(apply_ring_permutation(p, s, false))]
                        + x[basis.index_unchecked(apply_ring_permutation(p, s, true))]
                })
                .sum()
        });
        y
    }

    /// `T x` with `T = Σ_i S1i·S2i`.
    pub fn apply_t(&self, x: &[f64]) -> Vec<f64> {
        apply_t(&self.basis, &self.spec, x)
    }

    /// Diagonal of `H` evaluated directly from the configuration rules.
    pub fn diagonal(&self) -> Vec<f64> {
        let Couplings { jl, jr, k: ring } = self.couplings;
        self.basis
            .states()
            .iter()
            .map(|&s| {
                let zz = |&(i, j): &(usize, usize)| if s.is_up(i) == s.is_up(j) { 0.25 } else { -0.25 };
                let rung: f64 = self.terms.rung_bonds.iter().map(zz).sum();
                let leg: f64 = self.terms.leg_bonds.iter().map(zz).sum();
                let aligned = self
                    .terms
                    .plaquettes
                    .iter()
                    .filter(|p| {
                        let ups = p.sites().iter().filter(|&&q| s.is_up(q)).count();
                        ups == 0 || ups == 4
                    })
                    .count();
                jr * rung + jl * leg + 2.0 * ring * aligned as f64
            })
            .collect()
    }

    fn check(&self, v: &StateVector) -> Result<()> {
        if v.basis.dim() != self.basis.dim() || v.basis.sites() != self.basis.sites() || v.basis.two_sz() != self.basis.two_sz() {
            return Err(Error::DimensionMismatch { expected: self.basis.dim(), found: v.basis.dim() });
        }
        Ok(())
    }
}

impl LinearOperator for LadderHamiltonian {
    fn dim(&self) -> usize {
        self.basis.dim()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.apply_into(x, y)
    }
}

/// `H v` as a free function.
pub fn apply_hamiltonian(ham: &LadderHamiltonian, v: &StateVector) -> Result<StateVector> {
    ham.apply(v)
}

/// `Σ_p (P_p + P_p⁻¹) x` through the bilinear/biquadratic spin expansion
///
/// `1/4 + Σ_perimeter S·S + Sa·Sc + Sb·Sd
///  + 4[(Sa·Sb)(Sc·Sd) + (Sa·Sd)(Sb·Sc) − (Sa·Sc)(Sb·Sd)]`.
///
/// Much slower than [`LadderHamiltonian::apply_ring`]; used to cross-check it.
pub fn apply_ring_decomposed(plaquettes: &[Plaquette], basis: &SectorBasis, x: &[f64]) -> Vec<f64> {
    let ex = |i: usize, j: usize, v: &[f64]| apply_exchange(basis, i, j, v);
    let mut y = vec![0.0; x.len()];
    for p in plaquettes {
        let Plaquette { a, b, c, d } = *p;
        linalg::axpy(0.25, x, &mut y);
        for (i, j) in p.edges().into_iter().chain([(a, c), (b, d)]) {
            linalg::axpy(1.0, &ex(i, j, x), &mut y);
        }
        linalg::axpy(4.0, &ex(a, b, &ex(c, d, x)), &mut y);
        linalg::axpy(4.0, &ex(a, d, &ex(b, c, x)), &mut y);
        linalg::axpy(-4.0, &ex(a, c, &ex(b, d, x)), &mut y);
    }
    y
}

/// `T x` with `T = Σ_i S1i·S2i` summed over rungs.
pub fn apply_t(basis: &SectorBasis, spec: &LadderSpec, x: &[f64]) -> Vec<f64> {
    let rungs = spec.rung_bonds();
    let mut y = vec![0.0; x.len()];
    linalg::fill_rows(&mut y, |k| {
        let s = basis.state(k);
        rungs.iter().map(|&(i, j)| exchange_row(basis, s, k, i, j, x)).sum()
    });
    y
}
