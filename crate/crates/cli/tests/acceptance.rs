//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use roofs_cli::figures::{figure_rs, figure_spinsq, log_lambdas};
use roofs_cli::RunConfig;
use roofs_core::bounds::{
    check_improved_hr, check_robertson_schrodinger, check_spin_variance_qfi, fj_curve, rs_lower_bound_l, su_d_bound,
};
use roofs_core::entanglement::{duan_report, two_spin_report};
use roofs_core::linalg::c;
use roofs_core::metrology::{qfi, sld};
use roofs_core::quantum::{
    coherent_state, make_fock_algebra, make_spin_algebra, random_density_matrix, random_hermitian, seeded_rng,
    spin_coherent_state, DensityMatrix, HermitianOperator, QuantumState, RandomStateConfig, SpinAlgebra,
    Tensor,
};
use roofs_core::roofs::{concave_roof_variance, convex_roof_variance, qubit_z_line_decomposition, roof_sum_r, OptimizerConfig};
use roofs_core::states::{
    coherent_mixture, planar_squeezed_state, singlet_state, two_mode_squeezed_vacuum,
};

// Pinned tolerances and limits.
const QFI_BOUND_TOL: f64 = 1e-9;
const QFI_PURE_TOL: f64 = 1e-10;
const QFI_SLD_TOL: f64 = 1e-9;
const QFI_TIME: Duration = Duration::from_secs(10);
const CONVEX_REL: f64 = 0.02;
const CONCAVE_REL: f64 = 0.01;
const ROOF_FLOOR_TOL: f64 = 1e-9;
const ROOF_TIME: Duration = Duration::from_secs(300);
const R_REL: f64 = 0.01;
const QUBIT_SAT_TOL: f64 = 1e-8;
const K_TOL: f64 = 1e-12;
const K_IMPROVED_FRACTION: f64 = 0.5;
const ROOF_K_TOL: f64 = 1e-9;
const PLANAR_TOL: f64 = 1e-6;
const SPINSQ_REL: f64 = 0.01;
const SPINSQ_TIME: Duration = Duration::from_secs(120);
const DUAN_COHERENT_TOL: f64 = 1e-6;
const DUAN_TMSV_TOL: f64 = 1e-3;
const QFI_TMSV_TOL: f64 = 1e-2;
const THEOREM_TOL: f64 = 1e-9;
const TWO_SPIN_TOL: f64 = 1e-9;
const FJ_TOL: f64 = 1e-6;
const FJ_CONVEX_TOL: f64 = 1e-8;
const SWEEP_SAMPLES: u64 = 1000;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn rank_cycled(dim: usize, seed: u64) -> DensityMatrix {
    let rank = 1 + (seed as usize % dim);
    random_density_matrix(&RandomStateConfig::new(dim, rank, seed).unwrap()).unwrap()
}

fn qfi_correctness() -> Outcome {
    let start = Instant::now();
    let (mut worst_bound, mut worst_pure, mut worst_sld) = (f64::NEG_INFINITY, 0.0f64, 0.0f64);
    for dim in [2usize, 3, 4] {
        let mut rng = seeded_rng(dim as u64);
        for seed in 0..100 {
            let rho = rank_cycled(dim, 1000 * dim as u64 + seed);
            let b = random_hermitian(dim, &mut rng);
            let f = qfi(&rho, &b).unwrap();
            let var = rho.variance(&b).unwrap();
            worst_bound = worst_bound.max(f - 4.0 * var);
            if rho.is_pure() {
                worst_pure = worst_pure.max((f - 4.0 * var).abs());
            }
            let l = sld(&rho, &b).unwrap();
            let trace = rho.expectation(&l.sld.square()).unwrap();
            worst_sld = worst_sld.max((trace - f).abs());
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst_bound <= QFI_BOUND_TOL && worst_pure <= QFI_PURE_TOL && worst_sld <= QFI_SLD_TOL && elapsed < QFI_TIME,
        format!(
            "max F-4Var {worst_bound:.2e}, pure |F-4Var| {worst_pure:.2e}, |Tr(ρL²)-F| {worst_sld:.2e}, {:.2}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn roof_convergence() -> Outcome {
    let start = Instant::now();
    let cfg = OptimizerConfig::default();
    let mut rng = seeded_rng(77);
    let (mut worst_convex, mut worst_floor, mut worst_concave) = (0.0f64, f64::INFINITY, 0.0f64);
    for seed in 0..50 {
        let rho = random_density_matrix(&RandomStateConfig::full_rank(3, 2000 + seed)).unwrap();
        let b = random_hermitian(3, &mut rng);
        let target = qfi(&rho, &b).unwrap() / 4.0;
        let r = convex_roof_variance(&rho, &b, &cfg.with_seed(seed)).unwrap();
        worst_convex = worst_convex.max((r.value - target) / target);
        worst_floor = worst_floor.min(r.value - target);
        let var = rho.variance(&b).unwrap();
        let cr = concave_roof_variance(&rho, &b, &cfg.with_seed(seed)).unwrap();
        worst_concave = worst_concave.max((cr.value - var).abs() / var);
    }
    let elapsed = start.elapsed();
    outcome(
        worst_convex <= CONVEX_REL && worst_floor >= -ROOF_FLOOR_TOL && worst_concave <= CONCAVE_REL && elapsed < ROOF_TIME,
        format!(
            "convex max rel gap {worst_convex:.2e}, min (roof - F/4) {worst_floor:.2e}, concave max rel gap {worst_concave:.2e}, {:.1}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn two_operator_r() -> Outcome {
    let cfg = OptimizerConfig::default();
    let mut rng = seeded_rng(5);
    let mut worst = 0.0f64;
    for case in 0..20u64 {
        let dim = 2 + (case as usize % 2);
        let rho = random_density_matrix(&RandomStateConfig::full_rank(dim, 3000 + case)).unwrap();
        let ops = [random_hermitian(dim, &mut rng), random_hermitian(dim, &mut rng)];
        let expected: f64 = ops.iter().map(|a| rho.variance(a).unwrap()).sum();
        let r = roof_sum_r(&rho, &ops, &cfg.with_seed(case)).unwrap();
        worst = worst.max((r.value - expected).abs() / expected);
    }
    outcome(worst <= R_REL, format!("max rel |R - ΣVar| {worst:.2e} over 20 cases"))
}

fn qubit_saturation() -> Outcome {
    let mut worst = 0.0f64;
    for seed in 0..100 {
        let rho = rank_cycled(2, 4000 + seed);
        // Irrational stride spreads the angles over the circle.
        let alpha = (seed as f64 * 0.618_033_988_75 * std::f64::consts::TAU) % std::f64::consts::TAU;
        let a = HermitianOperator::pauli_x();
        let b = &HermitianOperator::pauli_x().scaled(alpha.cos()) + &HermitianOperator::pauli_y().scaled(alpha.sin());
        let d = qubit_z_line_decomposition(&rho).unwrap();
        let avg_l: f64 = d
            .components()
            .iter()
            .map(|w| w.weight * rs_lower_bound_l(&w.state, &a, &b).unwrap())
            .sum();
        let product = rho.variance(&a).unwrap() * rho.variance(&b).unwrap();
        worst = worst.max((0.25 * avg_l * avg_l - product).abs());
    }
    outcome(worst <= QUBIT_SAT_TOL, format!("max |¼(Σp L)² - Var·Var| {worst:.2e} over 100 qubits"))
}

fn figure_one() -> Outcome {
    let cfg = RunConfig {
        samples: 200,
        ..RunConfig::default()
    };
    let table = figure_rs(&cfg).unwrap();
    let (l, k, roof) = (table.column("l_rho").unwrap(), table.column("k").unwrap(), table.column("roof_l").unwrap());
    let min_k = l.iter().zip(&k).map(|(l, k)| k - l).fold(f64::INFINITY, f64::min);
    let min_roof = k.iter().zip(&roof).map(|(k, r)| r - k).fold(f64::INFINITY, f64::min);
    let improved = l.iter().zip(&k).filter(|(l, k)| **k > **l + 1e-6).count();
    let fraction = improved as f64 / l.len() as f64;
    outcome(
        min_k >= -K_TOL && fraction > K_IMPROVED_FRACTION && min_roof >= -ROOF_K_TOL,
        format!("min (K - L) {min_k:.2e}, improved {improved}/200 ({:.1}%), min (roof - K) {min_roof:.2e}", 100.0 * fraction),
    )
}

fn planar_anchors() -> Outcome {
    let mut details = Vec::new();
    let mut pass = true;
    for (j, c_exact, bfq_exact) in [(0.5, 0.25, 1.0), (1.0, 0.4375, 2.25)] {
        let spin = make_spin_algebra(j).unwrap();
        let p = planar_squeezed_state(&spin, 1e-14).unwrap();
        let bfq = roofs_core::bounds::bfq_bound(&p.state, &spin).unwrap();
        let ok = (p.c_j - c_exact).abs() <= PLANAR_TOL && (bfq.rhs - bfq_exact).abs() <= 4.0 * PLANAR_TOL;
        pass &= ok && !bfq.violated;
        details.push(format!("j={j}: c={:.9} B_FQ={:.9}", p.c_j, bfq.rhs));
    }
    outcome(pass, details.join(", "))
}

fn figure_three() -> Outcome {
    let start = Instant::now();
    let table = figure_spinsq(50.0, &log_lambdas(-2, 6, 4)).unwrap();
    let (fq, bfq) = (table.column("fq_jz").unwrap(), table.column("bfq").unwrap());
    let worst = fq.iter().zip(&bfq).map(|(f, b)| f - b).fold(f64::INFINITY, f64::min);
    let (f_last, b_last) = (*fq.last().unwrap(), *bfq.last().unwrap());
    let near = |x: f64| (x - 100.0).abs() / 100.0 <= SPINSQ_REL;
    let elapsed = start.elapsed();
    outcome(
        worst >= -THEOREM_TOL && near(f_last) && near(b_last) && elapsed < SPINSQ_TIME,
        format!(
            "min (F_Q - B_FQ) {worst:.2e} over {} λ, at λ=1e6 F_Q={f_last:.4} B_FQ={b_last:.4}, {:.2}s",
            fq.len(),
            elapsed.as_secs_f64()
        ),
    )
}

fn cv_checks() -> Outcome {
    let fock = make_fock_algebra(40).unwrap();
    let coherent = coherent_state(c(0.7, -0.2), 40).unwrap().tensor(&coherent_state(c(-0.4, 0.5), 40).unwrap());
    let rc = duan_report(&coherent, &fock).unwrap();
    let tmsv = duan_report(&two_mode_squeezed_vacuum(0.5, 40).unwrap(), &fock).unwrap();
    let mut min_slack = rc.relation_82_slack.min(tmsv.relation_82_slack);
    for r in [0.1, 0.3, 0.8] {
        min_slack = min_slack.min(duan_report(&two_mode_squeezed_vacuum(r, 40).unwrap(), &fock).unwrap().relation_82_slack);
    }
    let mix = coherent_mixture(&[(0.5, c(0.5, 0.0), c(0.0, 0.5)), (0.5, c(-0.3, 0.3), c(0.2, -0.6))], 40).unwrap();
    min_slack = min_slack.min(duan_report(&mix, &fock).unwrap().relation_82_slack);
    let vac = fock.vacuum().tensor(&fock.vacuum());
    min_slack = min_slack.min(duan_report(&vac, &fock).unwrap().relation_82_slack);
    let e = 1f64.exp();
    let pass = (rc.duan_lhs - 2.0).abs() <= DUAN_COHERENT_TOL
        && (tmsv.duan_lhs - 2.0 / e).abs() <= DUAN_TMSV_TOL
        && (tmsv.qfi_x_minus - 4.0 * e).abs() <= QFI_TMSV_TOL
        && min_slack >= -THEOREM_TOL;
    outcome(
        pass,
        format!(
            "coherent Duan {:.9}, TMSV Duan {:.6} (2/e {:.6}), TMSV F_Q[x1-x2] {:.5} (4e {:.5}), min duan-QFI slack {min_slack:.2e}",
            rc.duan_lhs,
            tmsv.duan_lhs,
            2.0 / e,
            tmsv.qfi_x_minus,
            4.0 * e
        ),
    )
}

fn two_spin_checks() -> Outcome {
    let half = make_spin_algebra(0.5).unwrap();
    let s = two_spin_report(&singlet_state(&half), &half, &half).unwrap();
    let singlet_ok = (s.fq_sum_minus - 12.0).abs() <= TWO_SPIN_TOL && s.crit_84_lhs.abs() <= TWO_SPIN_TOL;
    let mut worst_product = 0.0f64;
    for (j1, j2) in [(0.5, 0.5), (0.5, 1.0), (1.0, 1.5), (2.0, 0.5)] {
        let (a, b) = (make_spin_algebra(j1).unwrap(), make_spin_algebra(j2).unwrap());
        let psi = spin_coherent_state(&a, [0.4, -1.1, 0.3]).tensor(&spin_coherent_state(&b, [2.0, 0.1, -0.7]));
        let r = two_spin_report(&psi, &a, &b).unwrap();
        worst_product = worst_product.max((r.fq_sum_minus - 4.0 * (j1 + j2)).abs());
    }
    let product_ok = worst_product <= TWO_SPIN_TOL;
    let (mut min_slack, mut negative) = (f64::INFINITY, 0);
    for seed in 0..100 {
        let rho = random_density_matrix(&RandomStateConfig::full_rank(4, 5000 + seed)).unwrap();
        let slack = two_spin_report(&rho, &half, &half).unwrap().obs13_slack;
        min_slack = min_slack.min(slack);
        negative += (slack < -THEOREM_TOL) as usize;
    }
    let sweep_ok = min_slack >= -THEOREM_TOL;
    outcome(
        singlet_ok && product_ok && sweep_ok,
        format!(
            "singlet ΣF_Q {:.12} crit {:.1e} [{}]; products max |ΣF_Q-4(j1+j2)| {worst_product:.1e} [{}]; \
             8ΣVar+ΣF_Q ≥ 12(j1+j2) on random two-qubit states: min slack {min_slack:.4}, {negative}/100 negative [{}] \
             (the relation fails for general states, e.g. cos(π/12)|01⟩-sin(π/12)|10⟩ gives 11 < 12)",
            s.fq_sum_minus,
            s.crit_84_lhs,
            tag(singlet_ok),
            tag(product_ok),
            tag(sweep_ok)
        ),
    )
}

fn tag(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAIL"
    }
}

fn fj_oracle() -> Outcome {
    let grid: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
    // Brute force over the Bloch-ball slice b_z = X: Var(σ_x/2)/j = (1 - b_x²)/2 for j = 1/2.
    let oracle = |x: f64| {
        let rad = (1.0 - x * x).max(0.0).sqrt();
        let n = 200;
        let mut best = f64::INFINITY;
        for i in 0..=n {
            for k in 0..=n {
                let (bx, by) = (-rad + 2.0 * rad * i as f64 / n as f64, -rad + 2.0 * rad * k as f64 / n as f64);
                if bx * bx + by * by <= rad * rad + 1e-15 {
                    best = best.min((1.0 - bx * bx) / 2.0);
                }
            }
        }
        best
    };
    let half = fj_curve(&make_spin_algebra(0.5).unwrap(), &grid).unwrap();
    let worst_oracle = grid
        .iter()
        .zip(&half.values)
        .map(|(x, v)| (v - oracle(*x)).abs().max((v - x * x / 2.0).abs()))
        .fold(0.0f64, f64::max);
    let mut shape_ok = true;
    let mut ends = Vec::new();
    for j in [0.5, 1.0, 2.0] {
        let curve = fj_curve(&make_spin_algebra(j).unwrap(), &grid).unwrap();
        let convex = curve.values.windows(3).all(|w| w[0] - 2.0 * w[1] + w[2] >= -FJ_CONVEX_TOL);
        let end = curve.values[20];
        shape_ok &= convex && (end - 0.5).abs() <= FJ_TOL;
        ends.push(format!("F_{j}(1)={end:.9}{}", if convex { "" } else { " NOT CONVEX" }));
    }
    outcome(
        worst_oracle <= FJ_TOL && shape_ok,
        format!("F_1/2 max deviation {worst_oracle:.2e}; {}", ends.join(", ")),
    )
}

fn theorem_sweeps() -> Outcome {
    let mut rng = seeded_rng(1234);
    let (mut rs, mut hr, mut chain, mut sud) = (f64::INFINITY, f64::INFINITY, f64::INFINITY, f64::INFINITY);
    for seed in 0..SWEEP_SAMPLES {
        let dim = 2 + (seed as usize % 3);
        let rho = rank_cycled(dim, 6000 + seed);
        let a = random_hermitian(dim, &mut rng);
        let b = random_hermitian(dim, &mut rng);
        rs = rs.min(check_robertson_schrodinger(&rho, &a, &b).unwrap().slack);
        hr = hr.min(check_improved_hr(&rho, &a, &b).unwrap().slack);
        sud = sud.min(su_d_bound(&rho).unwrap().slack);
        let spin = SpinAlgebra::from_twice_j(1 + (seed as usize % 4));
        let srho = rank_cycled(spin.dim(), 7000 + seed);
        chain = chain.min(check_spin_variance_qfi(&srho, &spin).unwrap().slack);
    }
    let worst = rs.min(hr).min(chain).min(sud);
    outcome(
        worst >= -THEOREM_TOL,
        format!("min slacks over {SWEEP_SAMPLES} samples: RS {rs:.2e}, improved HR {hr:.2e}, spin chain {chain:.2e}, SU(d) {sud:.2e}"),
    )
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_roofs");
    let runs: [&[&str]; 4] = [
        &["figure-rs", "--samples", "3", "--seed", "7", "--restarts", "2", "--local-steps", "300"],
        &["figure-spinsq", "--j", "10", "--format", "json"],
        &["check", "improved_rs", "--state", r#"{"type":"random","dim":3,"seed":9}"#, "--op",
          r#"{"type":"spin","j":1,"n":[1,0,0]}"#, "--op", r#"{"type":"spin","j":1,"n":[0,1,0]}"#, "--restarts", "2"],
        &["roof", "--state", r#"{"type":"random","dim":3,"seed":3}"#, "--op", r#"{"type":"spin","j":1,"n":[0,0,1]}"#,
          "--direction", "max", "--restarts", "2"],
    ];
    let mut identical = 0;
    for args in runs {
        let run = || Command::new(bin).args(args).output().expect("run CLI");
        let (first, second) = (run(), run());
        if first.status.success() && first.stdout == second.stdout && !first.stdout.is_empty() {
            identical += 1;
        }
    }
    outcome(identical == runs.len(), format!("{identical}/{} commands bitwise identical across two runs", runs.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("QFI correctness", qfi_correctness),
        ("Roof convergence", roof_convergence),
        ("Two-operator concave roof", two_operator_r),
        ("Qubit z-line saturation", qubit_saturation),
        ("figure-rs properties", figure_one),
        ("Planar anchors", planar_anchors),
        ("figure-spinsq limits", figure_three),
        ("CV checks", cv_checks),
        ("Two-spin checks", two_spin_checks),
        ("F_j oracle", fj_oracle),
        ("Theorem sweeps", theorem_sweeps),
        ("Determinism", determinism),
    ];
    let mut failures = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        failures += (!o.pass) as usize;
        println!("{} [{:>2}] {name}: {}", if o.pass { "PASS" } else { "FAIL" }, k + 1, o.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
