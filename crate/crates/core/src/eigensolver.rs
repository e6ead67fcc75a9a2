//! Lowest eigenpairs of a symmetric operator that is only available through
//! its action on vectors.
//!
//! A block Lanczos iteration with full reorthogonalization inside a bounded
//! Krylov window, restarted by keeping the lowest Ritz vectors. The block
//! holds one seeded random start vector per requested eigenpair, so a
//! degenerate level is resolved up to that multiplicity even though a
//! single-vector Krylov sequence sees only one vector per eigenspace.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{axpy, dot, norm, scale};
use crate::{Error, Result};

/// A real symmetric linear map `y = A x`.
pub trait LinearOperator: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

/// Wraps a closure as a [`LinearOperator`].
pub struct FnOperator<F> {
    dim: usize,
    f: F,
}

impl<F> FnOperator<F>
where
    F: Fn(&[f64], &mut [f64]) + Sync,
{
    pub fn new(dim: usize, f: F) -> Self {
        FnOperator { dim, f }
    }
}

impl<F> LinearOperator for FnOperator<F>
where
    F: Fn(&[f64], &mut [f64]) + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        (self.f)(x, y)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Number of lowest eigenpairs.
    pub k: usize,
    /// Residual target: `‖Hv − Ev‖ ≤ tol · max(1, |E|)`.
    pub tol: f64,
    pub seed: u64,
    /// Processed Krylov vectors per restart cycle (at least `2k + 1`).
    pub subspace: usize,
    /// Ritz vectors carried over a restart.
    pub keep: usize,
    pub max_restarts: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { k: 2, tol: 1e-12, seed: 0x5eed, subspace: 48, keep: 12, max_restarts: 2000 }
    }
}

/// Relative gap below which the two lowest levels count as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct EigenResult {
    /// Ascending.
    pub energies: Vec<f64>,
    /// Unit-norm eigenvectors matching `energies`.
    pub vectors: Vec<Vec<f64>>,
    /// Explicit `‖Hv − Ev‖` per pair.
    pub residuals: Vec<f64>,
    pub degenerate: bool,
    pub matvecs: usize,
}

impl EigenResult {
    pub fn ground_energy(&self) -> f64 {
        self.energies[0]
    }

    pub fn gap(&self) -> Option<f64> {
        (self.energies.len() > 1).then(|| self.energies[1] - self.energies[0])
    }
}

pub fn lowest_eigenpairs<O: LinearOperator + ?Sized>(op: &O, cfg: &SolverConfig) -> Result<EigenResult> {
    let dim = op.dim();
    if cfg.k == 0 || cfg.k > dim {
        return Err(Error::OutOfRange(format!("requested {} eigenpairs of a {dim}-dimensional operator", cfg.k)));
    }
    if !(cfg.tol > 0.0) {
        return Err(Error::OutOfRange("solver needs tol > 0".into()));
    }

    let mut matvecs = 0;
    let pairs = block_thick_restart(op, cfg, &mut matvecs)?;
    let energies: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let degenerate = energies.len() > 1 && energies[1] - energies[0] < DEGENERACY_TOL * energies[0].abs().max(1.0);
    let residuals = pairs.iter().map(|p| p.2).collect();
    let vectors = pairs.into_iter().map(|p| p.1).collect();
    Ok(EigenResult { energies, vectors, residuals, degenerate, matvecs })
}

/// Orthogonalize `w` against `basis` (two classical Gram-Schmidt passes) and
/// return the accumulated coefficients.
fn orthogonalize(w: &mut [f64], basis: &[Vec<f64>]) -> Vec<f64> {
    let mut coeffs = vec![0.0; basis.len()];
    for _ in 0..2 {
        for (c, b) in coeffs.iter_mut().zip(basis) {
            let d = dot(b, w);
            *c += d;
            axpy(-d, b, w);
        }
    }
    coeffs
}

/// `Σ_j coeffs[j] basis[j]`.
fn combine(basis: &[Vec<f64>], coeffs: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut out = vec![0.0; basis[0].len()];
    for (b, c) in basis.iter().zip(coeffs) {
        axpy(c, b, &mut out);
    }
    out
}

/// Append `w` to `basis` as a new orthonormal direction unless it is
/// (numerically) already in the span.
fn push_direction(basis: &mut Vec<Vec<f64>>, mut w: Vec<f64>, reference: f64, dim: usize) -> Option<f64> {
    orthogonalize(&mut w, basis);
    let beta = norm(&w);
    if basis.len() >= dim || beta <= 1e-14 * reference.max(1.0) {
        return None;
    }
    scale(1.0 / beta, &mut w);
    basis.push(w);
    Some(beta)
}

/// Block Krylov iteration with full reorthogonalization and thick restarts.
///
/// The basis holds `processed` vectors whose images under the operator are
/// known, followed by up to `k` unprocessed ones. The projected matrix `t`
/// is complete on the processed block; its rows for the unprocessed vectors
/// carry the residual couplings used in the convergence estimates.
fn block_thick_restart<O: LinearOperator + ?Sized>(
    op: &O,
    cfg: &SolverConfig,
    matvecs: &mut usize,
) -> Result<Vec<(f64, Vec<f64>, f64)>> {
    let dim = op.dim();
    let k = cfg.k;
    let window = cfg.subspace.max(2 * k + 1).min(dim);
    let keep = cfg.keep.max(k).min(window.saturating_sub(1)).max(k);

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(window + k);
    while basis.len() < k {
        let start: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        push_direction(&mut basis, start, 1.0, dim);
    }

    let mut t = DMatrix::<f64>::zeros(window + k, window + k);
    let mut processed = 0;
    let mut w = vec![0.0; dim];
    let mut best = f64::INFINITY;

    for _ in 0..cfg.max_restarts.max(1) {
        while processed < basis.len() && processed < window {
            let j = processed;
            op.apply(&basis[j], &mut w);
            *matvecs += 1;
            let coeffs = orthogonalize(&mut w, &basis);
            for (i, &c) in coeffs.iter().enumerate() {
                t[(i, j)] = c;
                t[(j, i)] = c;
            }
            let beta = norm(&w);
            if basis.len() < dim && beta > 1e-14 * coeffs[j].abs().max(1.0) {
                scale(1.0 / beta, &mut w);
                let n = basis.len();
                t[(n, j)] = beta;
                t[(j, n)] = beta;
                basis.push(w.clone());
            }
            processed += 1;
        }

        let n = processed;
        let pending = basis.len() - n;
        let eig = SymmetricEigen::new(t.view((0, 0), (n, n)).clone_owned());
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let coupling = t.view((n, 0), (pending, n)).clone_owned();

        let estimates: Vec<f64> = order[..k]
            .iter()
            .map(|&c| if pending == 0 { 0.0 } else { (&coupling * eig.eigenvectors.column(c)).norm() })
            .collect();
        let thresholds: Vec<f64> = order[..k].iter().map(|&c| cfg.tol * eig.eigenvalues[c].abs().max(1.0)).collect();
        let worst = estimates.iter().zip(&thresholds).map(|(e, th)| e / th).fold(0.0, f64::max);

        if worst <= 1.0 {
            let mut pairs = Vec::with_capacity(k);
            let mut hx = vec![0.0; dim];
            for &c in &order[..k] {
                let mut x = combine(&basis[..n], eig.eigenvectors.column(c).iter().copied());
                scale(1.0 / norm(&x), &mut x);
                op.apply(&x, &mut hx);
                *matvecs += 1;
                let rayleigh = dot(&x, &hx);
                axpy(-rayleigh, &x, &mut hx);
                pairs.push((rayleigh, x, norm(&hx)));
            }
            let explicit_ok = pairs.iter().all(|(e, _, r)| *r <= cfg.tol * e.abs().max(1.0));
            if explicit_ok {
                pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
                return Ok(pairs);
            }
            best = best.min(pairs.iter().map(|p| p.2).fold(0.0, f64::max));
            if pending == 0 {
                // Closed Krylov space but inaccurate pairs: restart from them.
                basis.clear();
                for (_, x, _) in pairs {
                    push_direction(&mut basis, x, 1.0, dim);
                }
                t.fill(0.0);
                processed = 0;
                continue;
            }
        } else {
            best = best.min(estimates.iter().copied().fold(0.0, f64::max));
        }

        let kept = keep.min(n);
        let mut next: Vec<Vec<f64>> = order[..kept]
            .iter()
            .map(|&c| combine(&basis[..n], eig.eigenvectors.column(c).iter().copied()))
            .collect();
        let new_coupling = &coupling * eig.eigenvectors.select_columns(&order[..kept]);
        next.extend(basis.drain(n..));
        t.fill(0.0);
        for (c, &idx) in order[..kept].iter().enumerate() {
            t[(c, c)] = eig.eigenvalues[idx];
        }
        for m in 0..pending {
            for c in 0..kept {
                t[(kept + m, c)] = new_coupling[(m, c)];
                t[(c, kept + m)] = new_coupling[(m, c)];
            }
        }
        basis = next;
        processed = kept;
    }
    Err(Error::NotConverged { iterations: cfg.max_restarts, best_residual: best })
}

/// Largest dimension the dense oracle will materialize.
pub const DENSE_MAX: usize = 4096;

/// Materialize `op` column by column.
pub fn dense_matrix<O: LinearOperator + ?Sized>(op: &O) -> Result<DMatrix<f64>> {
    let dim = op.dim();
    if dim > DENSE_MAX {
        return Err(Error::TooLarge { dim, max: DENSE_MAX });
    }
    let mut m = DMatrix::zeros(dim, dim);
    let mut e = vec![0.0; dim];
    let mut y = vec![0.0; dim];
    for c in 0..dim {
        e[c] = 1.0;
        op.apply(&e, &mut y);
        e[c] = 0.0;
        m.column_mut(c).copy_from_slice(&y);
    }
    Ok(m)
}

/// Full ascending spectrum by dense symmetric diagonalization.
pub fn dense_oracle<O: LinearOperator + ?Sized>(op: &O) -> Result<Vec<f64>> {
    let m = dense_matrix(op)?;
    let mut vals: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::SectorBasis;
    use crate::hamiltonian::LadderHamiltonian;
    use crate::lattice::{Couplings, LadderSpec};
    use std::f64::consts::PI;
    use std::sync::Arc;

    fn ladder(l: usize, theta: f64) -> LadderHamiltonian {
        let spec = LadderSpec::periodic(l).unwrap();
        let basis = Arc::new(SectorBasis::build(spec.sites(), 0).unwrap());
        LadderHamiltonian::new(spec, Couplings::from_theta(theta), basis).unwrap()
    }

    #[test]
    fn dense_diagonal_operator() {
        let op = FnOperator::new(2, |x: &[f64], y: &mut [f64]| {
            y[0] = 0.0;
            y[1] = x[1];
        });
        assert_eq!(dense_oracle(&op).unwrap(), vec![0.0, 1.0]);
    }

    #[test]
    fn dense_rejects_large() {
        let op = FnOperator::new(DENSE_MAX + 1, |_: &[f64], _: &mut [f64]| {});
        assert!(matches!(dense_oracle(&op), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn single_rung_singlet() {
        let spec = LadderSpec::open(1).unwrap();
        let basis = Arc::new(SectorBasis::build(2, 0).unwrap());
        let h = LadderHamiltonian::new(spec, Couplings::new(0.0, 1.0, 0.0).unwrap(), basis).unwrap();
        let r = lowest_eigenpairs(&h, &SolverConfig::default()).unwrap();
        assert!((r.energies[0] + 0.75).abs() < 1e-14);
        assert!((r.energies[1] - 0.25).abs() < 1e-14);
    }

    #[test]
    fn matches_dense_l3() {
        let h = ladder(3, 0.0);
        let dense = dense_oracle(&h).unwrap();
        let r = lowest_eigenpairs(&h, &SolverConfig::default()).unwrap();
        assert!((r.energies[0] - dense[0]).abs() < 1e-10);
        assert!((r.energies[1] - dense[1]).abs() < 1e-10);
    }

    #[test]
    fn trace_identity() {
        let h = ladder(3, 0.37);
        let sum: f64 = dense_oracle(&h).unwrap().iter().sum();
        let trace: f64 = h.diagonal().iter().sum();
        assert!((sum - trace).abs() < 1e-10);
    }

    #[test]
    fn ferromagnetic_point() {
        let h = ladder(4, PI);
        let r = lowest_eigenpairs(&h, &SolverConfig::default()).unwrap();
        assert!((r.energies[0] + 3.0).abs() < 1e-10);
        assert!(!r.degenerate);
        let dense = dense_oracle(&h).unwrap();
        assert!((dense[0] + 3.0).abs() < 1e-10);
    }

    #[test]
    fn resolves_exact_degeneracy() {
        // diag(0, 0, 1, 2, ...) has a doubly degenerate ground level
        let dim = 60;
        let op = FnOperator::new(dim, |x: &[f64], y: &mut [f64]| {
            for i in 0..x.len() {
                y[i] = i.saturating_sub(1) as f64 * x[i];
            }
        });
        let cfg = SolverConfig { k: 3, subspace: 10, keep: 4, ..Default::default() };
        let r = lowest_eigenpairs(&op, &cfg).unwrap();
        assert!(r.energies[0].abs() < 1e-12 && r.energies[1].abs() < 1e-12);
        assert!((r.energies[2] - 1.0).abs() < 1e-12);
        assert!(r.degenerate);
    }

    #[test]
    fn eigenvectors_orthonormal_with_small_residuals() {
        let h = ladder(5, 0.3);
        let cfg = SolverConfig { k: 4, subspace: 20, keep: 6, ..Default::default() };
        let r = lowest_eigenpairs(&h, &cfg).unwrap();
        for i in 0..4 {
            assert!((norm(&r.vectors[i]) - 1.0).abs() < 1e-12);
            assert!(r.residuals[i] <= 1e-12 * r.energies[i].abs().max(1.0));
            for j in 0..i {
                assert!(dot(&r.vectors[i], &r.vectors[j]).abs() < 1e-8);
            }
        }
        let dense = dense_oracle(&h).unwrap();
        for i in 0..4 {
            assert!((r.energies[i] - dense[i]).abs() < 1e-10, "{i}: {} vs {}", r.energies[i], dense[i]);
        }
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let h = ladder(4, 0.2);
        let cfg = SolverConfig::default();
        let a = lowest_eigenpairs(&h, &cfg).unwrap();
        let b = lowest_eigenpairs(&h, &cfg).unwrap();
        assert_eq!(a.energies[0].to_bits(), b.energies[0].to_bits());
        assert!(a.vectors[0].iter().zip(&b.vectors[0]).all(|(x, y)| x.to_bits() == y.to_bits()));
    }

    #[test]
    fn reports_non_convergence() {
        let h = ladder(5, 0.3);
        let cfg = SolverConfig { subspace: 3, keep: 1, max_restarts: 2, ..Default::default() };
        match lowest_eigenpairs(&h, &cfg) {
            Err(Error::NotConverged { best_residual, .. }) => assert!(best_residual.is_finite()),
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_k() {
        let h = ladder(3, 0.0);
        let cfg = SolverConfig { k: 0, ..Default::default() };
        assert!(lowest_eigenpairs(&h, &cfg).is_err());
        let cfg = SolverConfig { k: 21, ..Default::default() };
        assert!(lowest_eigenpairs(&h, &cfg).is_err());
    }
}
