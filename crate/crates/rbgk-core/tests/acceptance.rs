//! End-to-end acceptance battery.
//!
//! Each test certifies one headline property of the library on frozen
//! grids with pinned tolerances and prints a single
//! `ACCEPTANCE <n> <name>: PASS|FAIL` line (visible with `--nocapture`).
//! The tests serialize on a shared lock so that the wall-clock budgets
//! asserted below are measured on an otherwise quiet process.

use std::sync::{Arc, Mutex, MutexGuard};
use std::time::Instant;

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use rbgk_core::bessel::{bessel_k_scaled, inverse_ratio, ratio_k1k2};
use rbgk_core::bgk::init::{equilibrium_column, homogeneous, smooth_wave_profile, two_beam};
use rbgk_core::bgk::{BgkRunConfig, Splitting};
use rbgk_core::juttner::fit::CLOSURE_TOL;
use rbgk_core::juttner::free_energy::free_energy_gap;
use rbgk_core::juttner::verify::equilibrium_identity_residuals;
use rbgk_core::juttner::{fit_equilibrium, JuttnerParams};
use rbgk_core::limits::orderfit::strictly_decreasing;
use rbgk_core::limits::ultrarel::sample_massless;
use rbgk_core::limits::{euler_limit_study, nr_limit_study, ur_limit_study};
use rbgk_core::linop::{
    assemble_compact_part, assemble_hs_matrix, assemble_linearized, assemble_projector,
    evolve_fourier_mode, nonlinear_remainder, taylor_linear_terms,
};
use rbgk_core::phase::grid::energy;
use rbgk_core::{
    apply_projector, bgk_evolve, fitted_order, ClassicalState, CollisionMode, Equilibrium0,
    KineticField1d, MomentumGrid, UltraRelState,
};

/// Serializes the battery so the runtime budgets below see a quiet core.
static GATE: Mutex<()> = Mutex::new(());

/// Prints the verdict line even when the test panics mid-flight.
struct Criterion {
    number: usize,
    name: &'static str,
    passed: bool,
    _gate: MutexGuard<'static, ()>,
}

impl Criterion {
    fn start(number: usize, name: &'static str) -> Self {
        // A panicking sibling poisons the mutex; the lock itself is fine.
        let gate = GATE.lock().unwrap_or_else(|e| e.into_inner());
        Criterion { number, name, passed: false, _gate: gate }
    }

    fn pass(mut self) {
        self.passed = true;
    }
}

impl Drop for Criterion {
    fn drop(&mut self) {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        println!("ACCEPTANCE {} {}: {}", self.number, self.name, verdict);
    }
}

/// Drift direction shared by the identity and closure tables (unit norm).
const DIR: [f64; 3] = [2.0 / 3.0, -1.0 / 3.0, 2.0 / 3.0];
/// Densities cycled across table rows.
const DENSITIES: [f64; 3] = [0.5, 1.0, 2.0];

fn table_params(row: usize, beta: f64, celerity: f64) -> JuttnerParams {
    JuttnerParams {
        density: DENSITIES[row % 3],
        beta,
        velocity: [celerity * DIR[0], celerity * DIR[1], celerity * DIR[2]],
    }
}

/// Counter-streaming beam pair used by the conservation and entropy runs.
fn beam_field(cutoff: f64, nodes: usize) -> KineticField1d {
    let grid = Arc::new(MomentumGrid::new(cutoff, nodes).unwrap());
    let a = JuttnerParams { density: 0.6, beta: 1.5, velocity: [0.5, 0.0, 0.0] };
    let b = JuttnerParams { density: 0.4, beta: 1.2, velocity: [-0.5, 0.0, 0.0] };
    homogeneous(&two_beam(&grid, &a, &b).unwrap()).unwrap()
}

#[test]
fn criterion_01_bessel_kernels() {
    let c = Criterion::start(1, "bessel-kernels");
    let clock = Instant::now();

    let mut last_ratio = 0.0;
    for i in 0..100 {
        let beta = 1e-3 * 1e5f64.powf(i as f64 / 99.0);
        let k0 = bessel_k_scaled(0, beta).unwrap();
        let k1 = bessel_k_scaled(1, beta).unwrap();
        let k2 = bessel_k_scaled(2, beta).unwrap();
        // The exp(beta) scaling cancels in the three-term recurrence.
        let recur = (k2 - (2.0 / beta) * k1 - k0).abs() / k2;
        assert!(recur <= 1e-10, "recurrence residual {recur:.3e} at beta {beta:.6e}");

        let ratio = ratio_k1k2(beta).unwrap();
        assert!(
            ratio > last_ratio && ratio < 1.0,
            "ratio {ratio} breaks monotonicity at beta {beta:.6e}"
        );
        last_ratio = ratio;

        let back = inverse_ratio(ratio).unwrap();
        let round = (back - beta).abs() / beta;
        assert!(round <= 1e-8, "round-trip error {round:.3e} at beta {beta:.6e}");
    }

    let elapsed = clock.elapsed().as_secs_f64();
    assert!(elapsed < 1.0, "bessel battery took {elapsed:.3}s, budget 1s");
    c.pass();
}

/// (beta, celerity, cutoff, nodes) rows certified to hold every moment
/// identity below 1e-7. The grids encode the two quadrature error
/// channels: drift-direction truncation exp(-beta (gamma - |u|) Q) and
/// lattice aliasing exp(-sqrt(beta^2 + (2 pi / h)^2)).
const IDENTITY_GRIDS: [(f64, f64, f64, usize); 12] = [
    (0.5, 0.2, 55.0, 336),
    (0.5, 1.0, 95.0, 584),
    (0.5, 2.0, 150.0, 920),
    (1.0, 0.2, 29.0, 194),
    (1.0, 1.0, 46.0, 310),
    (1.0, 2.0, 80.0, 538),
    (5.0, 0.2, 7.5, 60),
    (5.0, 1.0, 9.5, 76),
    (5.0, 2.0, 16.0, 128),
    (20.0, 0.2, 3.3, 42),
    (20.0, 1.0, 4.2, 54),
    (20.0, 2.0, 6.2, 80),
];

#[test]
fn criterion_02_juttner_identities() {
    let c = Criterion::start(2, "juttner-identities");
    let clock = Instant::now();

    for (row, &(beta, celerity, cutoff, nodes)) in IDENTITY_GRIDS.iter().enumerate() {
        let grid = MomentumGrid::new(cutoff, nodes).unwrap();
        let params = table_params(row, beta, celerity);
        let resid = equilibrium_identity_residuals(&grid, &params).unwrap();
        let worst = resid.max_all();
        assert!(
            worst <= 1e-7,
            "identity residual {worst:.3e} at beta {beta}, celerity {celerity}"
        );
    }

    let elapsed = clock.elapsed().as_secs_f64();
    assert!(elapsed < 30.0, "identity battery took {elapsed:.3}s, budget 30s");
    c.pass();
}

/// Same sweep as the identity table; the fixed-point property of the
/// closure is grid independent, so several rows use smaller grids.
const CLOSURE_GRIDS: [(f64, f64, f64, usize); 12] = [
    (0.5, 0.2, 45.0, 232),
    (0.5, 1.0, 80.0, 300),
    (0.5, 2.0, 110.0, 340),
    (1.0, 0.2, 29.0, 194),
    (1.0, 1.0, 40.0, 200),
    (1.0, 2.0, 70.0, 320),
    (5.0, 0.2, 7.5, 60),
    (5.0, 1.0, 9.5, 76),
    (5.0, 2.0, 16.0, 128),
    (20.0, 0.2, 3.3, 42),
    (20.0, 1.0, 4.2, 54),
    (20.0, 2.0, 6.2, 80),
];

#[test]
fn criterion_03_closure_fixed_point() {
    let c = Criterion::start(3, "closure-fixed-point");

    for (row, &(beta, celerity, cutoff, nodes)) in CLOSURE_GRIDS.iter().enumerate() {
        let grid = MomentumGrid::new(cutoff, nodes).unwrap();
        let params = table_params(row, beta, celerity);
        let f = params.sample_on(&grid).unwrap();
        let out = fit_equilibrium(&grid, &f).unwrap();

        let dn = (out.params.density - params.density).abs() / params.density;
        let db = (out.params.beta - params.beta).abs() / params.beta;
        let mut du2 = 0.0;
        let mut u2 = 0.0;
        for d in 0..3 {
            du2 += (out.params.velocity[d] - params.velocity[d]).powi(2);
            u2 += params.velocity[d].powi(2);
        }
        let du = (du2 / u2).sqrt();
        assert!(
            dn <= 1e-6 && db <= 1e-6 && du <= 1e-6,
            "recovery errors (n, beta, u) = ({dn:.3e}, {db:.3e}, {du:.3e}) \
             at beta {beta}, celerity {celerity}"
        );
    }
    c.pass();
}

#[test]
fn criterion_04_conservation_drift() {
    let c = Criterion::start(4, "conservation-drift");

    // Linear relaxation: the update mixes f with a closure whose grid
    // moments match f, so the five totals move only by roundoff.
    let config = BgkRunConfig {
        epsilon: 1.0,
        dt: 5e-3,
        t_end: 5.0,
        cfl_limit: 0.9,
        collision: CollisionMode::Linear,
        splitting: Splitting::Strang,
        output_every: 0,
    };
    let run = bgk_evolve(beam_field(10.0, 32), &config).unwrap();
    assert_eq!(run.ledger.rows.len(), 1001, "expected 1000 recorded steps");
    let drift = run.ledger.max_relative_drift();
    println!("criterion 4: linear-mode drift {drift:.3e} over 1000 steps");
    assert!(drift <= 1e-8, "linear-mode drift {drift:.3e} over 1000 steps");

    // Exponential relaxation is conservative only up to O((dt/eps)^2) per
    // step; with dt/eps = 2e-6 each step stays inside ten times the
    // closure tolerance.
    let config = BgkRunConfig {
        epsilon: 1.0,
        dt: 2e-6,
        t_end: 2e-3,
        cfl_limit: 0.9,
        collision: CollisionMode::Exponential,
        splitting: Splitting::Strang,
        output_every: 0,
    };
    let run = bgk_evolve(beam_field(10.0, 32), &config).unwrap();
    let rows = &run.ledger.rows;
    assert_eq!(rows.len(), 1001, "expected 1000 recorded steps");
    let mut worst_step = 0.0f64;
    for w in rows.windows(2) {
        let (prev, next) = (&w[0], &w[1]);
        worst_step = worst_step.max((next.mass - prev.mass).abs() / rows[0].mass);
        worst_step = worst_step.max((next.energy - prev.energy).abs() / rows[0].energy);
        for d in 0..3 {
            let scale = rows[0].momentum[d].abs().max(rows[0].mass);
            worst_step = worst_step.max((next.momentum[d] - prev.momentum[d]).abs() / scale);
        }
    }
    let bound = 10.0 * CLOSURE_TOL;
    println!("criterion 4: exponential per-step drift {worst_step:.3e} (bound {bound:.1e})");
    assert!(worst_step <= bound, "exponential per-step drift {worst_step:.3e}");
    c.pass();
}

#[test]
fn criterion_05_h_theorem() {
    let c = Criterion::start(5, "h-theorem");

    // Counter-streaming beams relaxing in a single cell.
    let config = BgkRunConfig {
        epsilon: 0.1,
        dt: 0.01,
        t_end: 2.0,
        cfl_limit: 0.9,
        collision: CollisionMode::Linear,
        splitting: Splitting::Strang,
        output_every: 0,
    };
    let run = bgk_evolve(beam_field(10.0, 32), &config).unwrap();
    assert_eq!(run.ledger.rows.len(), 201, "expected 200 recorded steps");
    let rise = run.ledger.max_entropy_rise();
    println!("criterion 5: two-beam worst H rise {rise:.3e}");
    assert!(rise <= 1e-12, "two-beam H rise {rise:.3e}");

    // Smooth 1D column driving transport and relaxation together.
    let grid = Arc::new(MomentumGrid::new(5.0, 16).unwrap());
    let f0 = equilibrium_column(&grid, 24, 1.0, smooth_wave_profile).unwrap();
    let config = BgkRunConfig {
        epsilon: 0.05,
        dt: 0.03,
        t_end: 0.6,
        cfl_limit: 0.8,
        collision: CollisionMode::Linear,
        splitting: Splitting::Strang,
        output_every: 0,
    };
    let run = bgk_evolve(f0, &config).unwrap();
    let rise = run.ledger.max_entropy_rise();
    println!("criterion 5: column worst H rise {rise:.3e}");
    assert!(rise <= 1e-12, "column H rise {rise:.3e}");
    c.pass();
}

#[test]
fn criterion_06_free_energy_gap() {
    let c = Criterion::start(6, "free-energy-gap");

    let grid = MomentumGrid::new(6.0, 24).unwrap();
    let base = JuttnerParams { density: 1.0, beta: 1.3, velocity: [0.2, -0.1, 0.15] };
    let envelope = base.sample_on(&grid).unwrap();
    for seed in 0..50u64 {
        let mut rng = ChaCha12Rng::seed_from_u64(600 + seed);
        let f: Vec<f64> =
            envelope.iter().map(|&j| j * (0.2 + 1.6 * rng.random::<f64>())).collect();
        let out = fit_equilibrium(&grid, &f).unwrap();
        let gap = free_energy_gap(&grid, &f, &out.equilibrium, out.params.velocity).unwrap();
        assert!(gap >= -1e-9, "free-energy gap {gap:.3e} for seed {seed}");
    }
    c.pass();
}

#[test]
fn criterion_07_nonrelativistic_limit() {
    let c = Criterion::start(7, "nonrelativistic-limit");
    let clock = Instant::now();

    let state = ClassicalState::new(1.2, [0.3, -0.2, 0.1], 1.0).unwrap();
    let ladder = [0.3, 0.2, 0.15, 0.1, 0.05];
    let rows = nr_limit_study(&state, &ladder, 9.5, 48).unwrap();
    let sup: Vec<(f64, f64)> = rows.iter().map(|r| (r.epsilon, r.sup_distance)).collect();
    let gap: Vec<(f64, f64)> = rows.iter().map(|r| (r.epsilon, r.beta_gap)).collect();
    let p_sup = fitted_order(&sup).unwrap();
    let p_gap = fitted_order(&gap).unwrap();
    println!("criterion 7: shape order {p_sup:.3}, temperature order {p_gap:.3}");
    assert!(p_sup >= 1.7, "shape convergence order {p_sup:.3}");
    assert!(p_gap >= 1.7, "temperature convergence order {p_gap:.3}");

    let elapsed = clock.elapsed().as_secs_f64();
    assert!(elapsed < 60.0, "slow-particle ladder took {elapsed:.3}s, budget 60s");
    c.pass();
}

#[test]
fn criterion_08_ultrarelativistic_limit() {
    let c = Criterion::start(8, "ultrarelativistic-limit");

    let grid = MomentumGrid::new(40.0, 96).unwrap();
    let state = UltraRelState::new(1.0, 1.0, [0.3, 0.0, -0.1]).unwrap();
    let f = sample_massless(&state, &grid);
    let ladder = [0.3, 0.1, 0.03, 0.01, 3e-3, 1e-3];
    let rows = ur_limit_study(&grid, &f, &ladder).unwrap();

    let last = rows.last().unwrap();
    println!(
        "criterion 8: energy/pressure surplus {:.3e} at eps {:.0e}",
        last.energy_pressure_gap, last.epsilon
    );
    assert!(
        last.energy_pressure_gap.abs() <= 1e-6,
        "energy/pressure surplus {:.3e}",
        last.energy_pressure_gap
    );

    let gap: Vec<(f64, f64)> = rows.iter().map(|r| (r.epsilon, r.beta_gap)).collect();
    let p = fitted_order(&gap).unwrap();
    println!("criterion 8: temperature convergence order {p:.3}");
    assert!(p >= 0.8, "temperature convergence order {p:.3}");
    c.pass();
}

#[test]
fn criterion_09_euler_residual() {
    let c = Criterion::start(9, "euler-residual");
    let clock = Instant::now();

    let grid = Arc::new(MomentumGrid::new(5.0, 16).unwrap());
    let ladder = [1e-1, 3e-2, 1e-2, 3e-3, 1e-3];
    let rows = euler_limit_study(&grid, 64, &ladder, 0.25, 0.5, 4).unwrap();
    for r in &rows {
        println!(
            "criterion 9: eps {:.0e} -> residuals ({:.3e}, {:.3e}, {:.3e}), \
             entropy audit {:.3e}, drift {:.3e}",
            r.epsilon, r.continuity, r.energy, r.momentum, r.kinetic_entropy_max,
            r.conservation_drift
        );
    }

    let resid: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| (r.epsilon, r.continuity.max(r.energy).max(r.momentum)))
        .collect();
    assert!(strictly_decreasing(&resid), "fluid residuals not monotone: {resid:?}");

    let last = rows.last().unwrap();
    assert!(
        last.kinetic_entropy_max <= 1e-8,
        "entropy audit {:.3e} at the stiffest rung",
        last.kinetic_entropy_max
    );

    let elapsed = clock.elapsed().as_secs_f64();
    assert!(elapsed < 600.0, "euler ladder took {elapsed:.1}s, budget 600s");
    c.pass();
}

#[test]
fn criterion_10_linearized_algebra() {
    let c = Criterion::start(10, "linearized-algebra");

    let grid = Arc::new(MomentumGrid::new(6.0, 12).unwrap());
    let eq = Equilibrium0::from_beta(grid, 1.0).unwrap();
    let g = eq.grid();
    let n = g.total();

    let p = assemble_projector(&eq).unwrap();

    // Idempotence.
    let idem = (&p * &p - &p).amax();
    assert!(idem <= 1e-10, "projector idempotence defect {idem:.3e}");

    // Rank 5 with a hard spectral gap.
    let sv = p.clone().svd(false, false).singular_values;
    let mut s: Vec<f64> = sv.iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    assert!(s[4] > 0.9, "fifth singular value {:.3e} too small", s[4]);
    let gap_ratio = s[4] / s[5].max(f64::MIN_POSITIVE);
    assert!(gap_ratio >= 1e6, "rank gap {:.3e} -> {:.3e} under six orders", s[4], s[5]);

    // Self-adjointness in the energy-weighted inner product:
    // D P symmetric for D = diag(w / q0).
    let mut dp = p.clone();
    for i in 0..n {
        let d = g.weight() / energy(g.node(i));
        let mut row = dp.row_mut(i);
        row *= d;
    }
    let asym = (&dp - &dp.transpose()).amax() / dp.amax();
    assert!(asym <= 1e-10, "weighted asymmetry {asym:.3e}");

    // The five collision invariants are exactly stationary.
    let l = assemble_linearized(&eq).unwrap();
    for b in eq.invariant_basis() {
        let v = DVector::from_column_slice(&b);
        let resid = (&l * &v).amax();
        assert!(
            resid <= 1e-10 * v.amax().max(1.0),
            "linearized operator moves an invariant by {resid:.3e}"
        );
    }

    // Dissipation identity <L f, f> + <(I-P) f, (I-P) f>_w = 0.
    let mut rng = ChaCha12Rng::seed_from_u64(1010);
    for trial in 0..20 {
        let f: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let fv = DVector::from_column_slice(&f);
        let lf = &l * &fv;
        let pf = apply_projector(&eq, &f);
        let r: Vec<f64> = f.iter().zip(&pf).map(|(a, b)| a - b).collect();
        let quad = eq.ip_plain(&f, lf.as_slice());
        let diss = eq.ip_weighted(&r, &r);
        let defect = (quad + diss).abs();
        assert!(
            defect <= 1e-10 * diss.max(1.0),
            "dissipation identity off by {defect:.3e} in trial {trial}"
        );
    }

    // The compact part assembled row-by-row matches the closed-form
    // symmetric kernel evaluated pointwise.
    let k_direct = assemble_compact_part(&eq).unwrap();
    let k_kernel = assemble_hs_matrix(&eq).unwrap();
    let diff = (&k_direct - &k_kernel).amax();
    assert!(diff <= 1e-9, "kernel/matrix mismatch {diff:.3e}");

    c.pass();
}

#[test]
fn criterion_11_gamma_remainder() {
    let c = Criterion::start(11, "gamma-remainder");

    let grid = Arc::new(MomentumGrid::new(22.0, 96).unwrap());
    let eq = Equilibrium0::from_beta(grid, 1.0).unwrap();
    let n = eq.grid().total();

    // A fixed direction under the equilibrium envelope keeps the perturbed
    // state positive for every amplitude on the ladder.
    let mut rng = ChaCha12Rng::seed_from_u64(1111);
    let dir: Vec<f64> =
        (0..n).map(|i| eq.sqrt_j0[i] * rng.random_range(-1.0..1.0)).collect();

    let ladder = [1e-1, 3e-2, 1e-2, 3e-3];
    let mut remainder_pts = Vec::new();
    let mut taylor_pts = Vec::new();
    for &eps in &ladder {
        let f: Vec<f64> = dir.iter().map(|d| eps * d).collect();
        let gamma = nonlinear_remainder(&eq, &f).unwrap();
        remainder_pts.push((eps, eq.norm_plain(&gamma)));

        let lin = taylor_linear_terms(&eq, &f).unwrap();
        let proj = apply_projector(&eq, &f);
        let gap: Vec<f64> = lin.iter().zip(&proj).map(|(a, b)| a - b).collect();
        taylor_pts.push((eps, eq.norm_plain(&gap)));
    }

    let p_rem = fitted_order(&remainder_pts).unwrap();
    let p_tay = fitted_order(&taylor_pts).unwrap();
    println!("criterion 11: remainder order {p_rem:.3}, expansion-gap order {p_tay:.3}");
    assert!(p_rem >= 1.9, "remainder order {p_rem:.3}");
    assert!(p_tay >= 1.9, "expansion-gap order {p_tay:.3}");
    c.pass();
}

#[test]
fn criterion_12_mode_contraction() {
    let c = Criterion::start(12, "mode-contraction");

    let grid = Arc::new(MomentumGrid::new(5.0, 10).unwrap());
    let eq = Equilibrium0::from_beta(grid, 1.0).unwrap();
    let n = eq.grid().total();

    let mut rng = ChaCha12Rng::seed_from_u64(1212);
    for mode in 0..10 {
        // Rejection-sample a frequency in the closed ball of radius 10.
        let zeta = loop {
            let z: [f64; 3] = [
                rng.random_range(-10.0..10.0),
                rng.random_range(-10.0..10.0),
                rng.random_range(-10.0..10.0),
            ];
            if (z[0] * z[0] + z[1] * z[1] + z[2] * z[2]).sqrt() <= 10.0 {
                break z;
            }
        };
        let f0: Vec<Complex64> = (0..n)
            .map(|i| {
                let re = rng.random_range(-1.0..1.0);
                let im = rng.random_range(-1.0..1.0);
                Complex64::new(re, im) * eq.sqrt_j0[i]
            })
            .collect();
        let traj = evolve_fourier_mode(&eq, zeta, &f0, 5.0, 0.25).unwrap();
        assert_eq!(traj.norms.len(), 21, "expected 20 output times");
        let start = traj.norms[0];
        for (k, &norm) in traj.norms.iter().enumerate().skip(1) {
            assert!(
                norm <= start * (1.0 + 1e-10),
                "mode {mode}: norm {norm:.6e} exceeds initial {start:.6e} at output {k}"
            );
        }
    }

    // Zero frequency: data spanned by the five invariants is a fixed point.
    let basis = eq.invariant_basis();
    let weights = [0.4, -0.3, 0.25, 0.2, -0.15];
    let f0: Vec<Complex64> = (0..n)
        .map(|i| {
            let mut v = 0.0;
            for (w, b) in weights.iter().zip(&basis) {
                v += w * b[i];
            }
            Complex64::new(v, 0.0)
        })
        .collect();
    let traj = evolve_fourier_mode(&eq, [0.0; 3], &f0, 5.0, 0.25).unwrap();
    let scale = f0.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    let drift = traj
        .final_state
        .iter()
        .zip(&f0)
        .map(|(a, b)| (*a - *b).norm())
        .fold(0.0f64, f64::max);
    println!("criterion 12: stationary drift {drift:.3e} against amplitude {scale:.3e}");
    assert!(drift <= 1e-10 * scale, "stationary drift {drift:.3e}");
    c.pass();
}
