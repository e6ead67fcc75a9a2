use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ringladder::eigensolver::dense_oracle;
use ringladder::entanglement::pair_concurrence;
use ringladder::hamiltonian::apply_ring_decomposed;
use ringladder::prelude::*;
use ringladder::sweep::{find_extrema, find_zero_crossing, ExtremumKind};

type Outcome = Result<(bool, String)>;

fn theta_c_over_pi() -> f64 {
    0.5f64.atan() / PI
}

fn random_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect()
}

fn l2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn diff_norm(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
}

fn ground_state(spec: LadderSpec, theta_over_pi: f64) -> Result<StateVector> {
    let mut cfg = SweepConfig::new(spec);
    cfg.pairs = PairSelection { rung: false, leg: false, diag: false };
    Ok(solve_point(&cfg, theta_over_pi)?.ground_state)
}

fn sweep(spec: LadderSpec, min: f64, max: f64, step: f64, blocks: &str) -> Result<Vec<SweepRecord>> {
    let mut cfg = SweepConfig::new(spec);
    cfg.theta_min = min;
    cfg.theta_max = max;
    cfg.theta_step = step;
    cfg.blocks = if blocks.is_empty() { Vec::new() } else { BlockSpec::parse_list(blocks)? };
    cfg.pairs = PairSelection { rung: false, leg: false, diag: false };
    run_sweep(&cfg)
}

fn zero_crossing() -> Outcome {
    let target = theta_c_over_pi();
    let step = 0.001;
    let mut found = Vec::new();
    let mut detail = Vec::new();
    for (rungs, half_width) in [(4, 0.05), (6, 0.05), (8, 0.03)] {
        let start = Instant::now();
        let records = sweep(LadderSpec::periodic(rungs)?, 0.15 - half_width, 0.15 + half_width, step, "")?;
        let series: Vec<(f64, f64)> =
            records.iter().filter_map(|r| r.der_dtheta.map(|d| (r.theta_over_pi, d))).collect();
        let crossings = find_zero_crossing(&series);
        let nearest = crossings.iter().copied().min_by(|a, b| (a - target).abs().total_cmp(&(b - target).abs()));
        let elapsed = start.elapsed().as_secs_f64();
        match nearest {
            Some(x) => {
                detail.push(format!("L={rungs}: {x:.6} ({} crossing(s), {elapsed:.0}s)", crossings.len()));
                found.push(x);
            }
            None => return Ok((false, format!("L={rungs}: no zero crossing of dEr/dtheta"))),
        }
    }
    let near = found.iter().all(|x| (x - target).abs() <= step);
    let agree = found.iter().all(|a| found.iter().all(|b| (a - b).abs() <= step));
    Ok((near && agree, format!("target {target:.6}; {}", detail.join(", "))))
}

fn commutator() -> Outcome {
    let spec = LadderSpec::periodic(4)?;
    let basis = Arc::new(SectorBasis::build(spec.sites(), 0)?);
    let ratio = |theta_over_pi: f64, rng: &mut ChaCha8Rng| -> Result<Vec<f64>> {
        let ham = LadderHamiltonian::new(spec, Couplings::from_theta(theta_over_pi * PI), basis.clone())?;
        Ok((0..10)
            .map(|_| {
                let v = random_vector(rng, basis.dim());
                let mut hv = vec![0.0; v.len()];
                ham.apply_into(&v, &mut hv);
                let mut htv = vec![0.0; v.len()];
                ham.apply_into(&ham.apply_t(&v), &mut htv);
                let thv = ham.apply_t(&hv);
                diff_norm(&htv, &thv) / l2(&hv)
            })
            .collect())
    };
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let tc = theta_c_over_pi();
    let at = ratio(tc, &mut rng)?;
    let worst_at = at.iter().copied().fold(0.0, f64::max);
    let reference = worst_at.max(f64::MIN_POSITIVE);
    let mut least_off = f64::INFINITY;
    for shifted in [tc - 0.05, tc + 0.05] {
        least_off = least_off.min(ratio(shifted, &mut rng)?.into_iter().fold(f64::INFINITY, f64::min));
    }
    let pass = worst_at <= 1e-10 && least_off >= 1e6 * reference;
    Ok((pass, format!("max at theta_c {worst_at:.2e}, min at theta_c +- 0.05 {least_off:.2e}")))
}

fn ferromagnetic_point() -> Outcome {
    let mut pass = true;
    let mut detail = Vec::new();
    for rungs in [4, 6] {
        let spec = LadderSpec::periodic(rungs)?;
        let n = spec.sites();
        let psi = ground_state(spec, 1.0)?;
        let expected = 1.0 / (n as f64 - 1.0);
        let mut worst_c: f64 = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                worst_c = worst_c.max((pair_concurrence(&psi, i, j)? - expected).abs());
            }
        }
        let mut worst_family: f64 = 0.0;
        let mut worst_oracle: f64 = 0.0;
        for l in 1..n {
            let entropies: Vec<f64> = BlockFamily::all()
                .into_iter()
                .filter_map(|f| BlockSpec::new(f, l).sites(&spec).ok())
                .filter(|sites| sites.len() <= 14)
                .map(|sites| Ok(von_neumann_entropy(&reduced_density_matrix(&psi, &sites)?)))
                .collect::<Result<_>>()?;
            let oracle = fm_entropy(n, l)?;
            for a in &entropies {
                worst_oracle = worst_oracle.max((a - oracle).abs());
                for b in &entropies {
                    worst_family = worst_family.max((a - b).abs());
                }
            }
        }
        pass &= worst_c <= 1e-8 && worst_family <= 1e-9 && worst_oracle <= 1e-8;
        detail.push(format!("N={n}: dC {worst_c:.1e}, dEv family {worst_family:.1e}, vs closed form {worst_oracle:.1e}"));
    }
    Ok((pass, detail.join("; ")))
}

/// Block eigenvalues with a `((N−l)/2)!` numerator factor, the literal
/// printed variant of the closed form.
fn half_factorial_variant(n: i64, l: i64) -> Vec<f64> {
    let f = |m: i64| -> f64 { (1..=m).map(|i| i as f64).product() };
    (-(l / 2)..=l / 2)
        .map(|pz| {
            f(l) * f((n - l) / 2) * f(n / 2) * f(n / 2)
                / (f(l / 2 - pz) * f(l / 2 + pz) * f((n - l) / 2 - pz) * f((n - l) / 2 + pz) * f(n))
        })
        .collect()
}

fn fm_oracle() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in [4, 8, 12] {
        let psi = fm_state(Arc::new(SectorBasis::build(n, 0)?))?;
        for l in 1..=n / 2 {
            let sites: Vec<usize> = (0..l).collect();
            let traced = reduced_density_matrix(&psi, &sites)?.eigenvalues();
            let mut oracle = fm_block_spectrum(n, l)?.lambdas;
            oracle.sort_by(|a, b| b.total_cmp(a));
            oracle.resize(traced.len(), 0.0);
            for (a, b) in traced.iter().zip(&oracle) {
                worst = worst.max((a - b).abs());
            }
        }
    }
    let printed: f64 = half_factorial_variant(4, 2).iter().sum();
    let pass = worst <= 1e-10 && (printed - 0.5).abs() < 1e-12;
    Ok((pass, format!("max eigenvalue error {worst:.1e}; literal variant sums to {printed}")))
}

fn ring_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    for rungs in 3..=6 {
        let spec = LadderSpec::periodic(rungs)?;
        let basis = Arc::new(SectorBasis::build(spec.sites(), 0)?);
        let ham = LadderHamiltonian::new(spec, Couplings::new(0.0, 0.0, 1.0)?, basis.clone())?;
        for _ in 0..100 {
            let v = random_vector(&mut rng, basis.dim());
            let permuted = ham.apply_ring(&v);
            let decomposed = apply_ring_decomposed(&ham.terms().plaquettes, &basis, &v);
            worst = worst.max(diff_norm(&permuted, &decomposed) / l2(&permuted));
        }
    }
    Ok((worst <= 1e-12, format!("max relative difference {worst:.1e}")))
}

fn solver_vs_dense() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    for rungs in [3, 4] {
        let spec = LadderSpec::periodic(rungs)?;
        let basis = Arc::new(SectorBasis::build(spec.sites(), 0)?);
        for _ in 0..20 {
            let theta = rng.random_range(-PI..PI);
            let ham = LadderHamiltonian::new(spec, Couplings::from_theta(theta), basis.clone())?;
            let krylov = lowest_eigenpairs(&ham, &SolverConfig::default())?.ground_energy();
            worst = worst.max((krylov - dense_oracle(&ham)?[0]).abs());
        }
    }
    Ok((worst <= 1e-10, format!("max ground-energy difference {worst:.1e}")))
}

fn rung_structure() -> Outcome {
    let spec = LadderSpec::periodic(6)?;
    let (mut pattern, mut entropy, mut corr): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for i in 0..=5 {
        let theta_over_pi = 0.10 + 0.02 * i as f64;
        let psi = ground_state(spec, theta_over_pi)?;
        let rho = reduced_density_matrix(&psi, &[spec.site(1, 1), spec.site(2, 1)])?;
        let p = rung_rdm_params(&rho)?;
        pattern = pattern.max((p.u_plus - p.u_minus).abs()).max((p.w1 - p.w2).abs());
        entropy = entropy.max((rung_entropy_from_z(p.z)? - von_neumann_entropy(&rho)).abs());
        corr = corr.max((rung_correlator(&psi, &spec, 1) - 1.5 * p.z).abs());
    }
    let pass = pattern <= 1e-9 && entropy <= 1e-9 && corr <= 1e-9;
    Ok((pass, format!("pattern {pattern:.1e}, entropy {entropy:.1e}, correlator {corr:.1e}")))
}

fn argmax(series: &[(f64, f64)]) -> (f64, f64) {
    series.iter().copied().max_by(|a, b| a.1.total_cmp(&b.1)).unwrap_or((f64::NAN, f64::NAN))
}

fn minima_in(series: &[(f64, f64)], lo: f64, hi: f64) -> Vec<f64> {
    find_extrema(series)
        .into_iter()
        .filter(|e| e.kind == ExtremumKind::Minimum && e.theta >= lo - 1e-9 && e.theta <= hi + 1e-9)
        .map(|e| e.theta)
        .collect()
}

fn qualitative_sixteen_sites() -> Outcome {
    let spec = LadderSpec::periodic(8)?;
    let mut cfg = SweepConfig::new(spec);
    cfg.blocks = BlockSpec::parse_list("B:4,B:6,B:8,C:4,C:6,C:8,D:4,D:6,D:8")?;
    let records = run_sweep(&cfg)?;
    let column = |f: &dyn Fn(&SweepRecord) -> Option<f64>| -> Vec<(f64, f64)> {
        records.iter().filter_map(|r| f(r).map(|v| (r.theta_over_pi, v))).collect()
    };

    let origin = records.iter().find(|r| r.theta_over_pi.abs() < 1e-9).expect("grid contains theta = 0");
    let (cr, cl, cd) = (origin.c_rung.unwrap_or(0.0), origin.c_leg.unwrap_or(0.0), origin.c_diag.unwrap_or(0.0));
    let rung_dominates = cr > cl && cr > cd;
    let (leg_at, leg_max) = argmax(&column(&|r| r.c_leg));
    let (diag_at, diag_max) = argmax(&column(&|r| r.c_diag));
    let leg_ok = (0.06 - 1e-9..=0.15 + 1e-9).contains(&leg_at);
    let diag_ok = (diag_at - 0.85).abs() <= 0.03 + 1e-9;

    let mut family_ok = true;
    let mut minima = Vec::new();
    for (idx, block) in cfg.blocks.iter().enumerate() {
        let series = column(&|r| Some(r.block_entropies[idx]));
        let (lo, hi) = match block.family {
            BlockFamily::Stripe => (0.12, 0.16),
            _ => (0.03, 0.07),
        };
        let found = minima_in(&series, lo, hi);
        family_ok &= !found.is_empty();
        let shown = found.iter().map(|t| format!("{t:.3}")).collect::<Vec<_>>().join("/");
        minima.push(format!("{block}:{}", if shown.is_empty() { "-".into() } else { shown }));
    }

    let pass = rung_dominates && leg_ok && diag_ok && family_ok;
    Ok((
        pass,
        format!(
            "C(0) rung/leg/diag {cr:.3}/{cl:.3}/{cd:.3} [{}]; C_leg max {leg_max:.3} at {leg_at:.3} [{}]; \
             C_diag max {diag_max:.3} at {diag_at:.3} [{}]; minima {} [{}]",
            ok(rung_dominates),
            ok(leg_ok),
            ok(diag_ok),
            minima.join(" "),
            ok(family_ok)
        ),
    ))
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "off"
    }
}

fn complement_symmetry() -> Outcome {
    let spec = LadderSpec::periodic(6)?;
    let n = spec.sites();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    for theta_over_pi in [-0.3, 0.0, 0.15, 0.5, 0.8] {
        let psi = ground_state(spec, theta_over_pi)?;
        for _ in 0..20 {
            let l = rng.random_range(1..n);
            let block = sample(&mut rng, n, l).into_vec();
            let rest: Vec<usize> = (0..n).filter(|s| !block.contains(s)).collect();
            let a = von_neumann_entropy(&reduced_density_matrix(&psi, &block)?);
            let b = von_neumann_entropy(&reduced_density_matrix(&psi, &rest)?);
            worst = worst.max((a - b).abs());
        }
    }
    Ok((worst <= 1e-9, format!("max |Ev(A) - Ev(complement)| {worst:.1e}")))
}

fn gaussian_asymptote() -> Outcome {
    let gap = (fm_entropy(200, 100)? - fm_entropy_asymptotic(200, 100)?).abs();
    let a: Vec<f64> = [8, 16, 32].iter().map(|&l| fm_entropy_asymptotic(10_000, l)).collect::<Result<_>>()?;
    let steps = [a[1] - a[0], a[2] - a[1]];
    let doubling = steps.iter().all(|s| (s - 0.5).abs() <= 1e-3);
    Ok((
        gap <= 0.01 && doubling,
        format!("gap at N=200 l=100 {gap:.4}; doubling steps {:.5}, {:.5}", steps[0], steps[1]),
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("rung entropy derivative crossing", zero_crossing),
        ("commutator with rung operator", commutator),
        ("ferromagnetic point", ferromagnetic_point),
        ("closed-form ferromagnetic spectrum", fm_oracle),
        ("ring exchange routes agree", ring_equivalence),
        ("Krylov vs dense spectrum", solver_vs_dense),
        ("rung density matrix structure", rung_structure),
        ("sixteen-site qualitative features", qualitative_sixteen_sites),
        ("complement symmetry", complement_symmetry),
        ("Gaussian asymptote", gaussian_asymptote),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = match catch_unwind(AssertUnwindSafe(run)) {
            Ok(Ok(outcome)) => outcome,
            Ok(Err(e)) => (false, format!("error: {e}")),
            Err(_) => (false, "panicked".into()),
        };
        failures += usize::from(!pass);
        println!(
            "criterion {:>2} {} {name} ({:.1}s): {detail}",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criterion(s) failed");
        ExitCode::FAILURE
    }
}
