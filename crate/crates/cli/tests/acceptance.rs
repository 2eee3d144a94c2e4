//! Acceptance suite: one test per criterion, each printing a PASS line
//! with its measured runtime (visible under `--nocapture`). Tolerances are
//! pinned here, not configured elsewhere.
//!
//! Run with: cargo test -p hpurity-cli --test acceptance -- --nocapture

use std::process::Command;
use std::time::Instant;

use hpurity::states::all_up;
use hpurity::{
    bipartite_algebra, estimate_critical, exact_ground, fermion_so_algebra, fermion_u_algebra,
    ghz, h_purity, haar_random, local_qubit_algebra, meyer_wallach, product_state, purity_scan,
    roof_purity_deficit, run_glocc_audit, sector_ground, spin_algebra, theorem_equivalence_suite,
    w_state, werner, wootters_concurrence, AuditOptions, DensityMatrix, PureState, RoofOptions,
    XyParams,
};

fn pass(criterion: usize, what: &str, t0: Instant, budget_s: f64) {
    let elapsed = t0.elapsed().as_secs_f64();
    assert!(
        elapsed < budget_s,
        "criterion {criterion} exceeded its runtime budget: {elapsed:.1}s >= {budget_s}s"
    );
    println!("[acceptance] criterion {criterion} ({what}): PASS in {elapsed:.2}s");
}

#[test]
fn acceptance_01_closed_form_purities() {
    let t0 = Instant::now();
    for n in 2..=10usize {
        let alg = local_qubit_algebra(n).unwrap();
        let up = all_up(n).unwrap();
        assert!(
            (h_purity(&up, &alg).unwrap() - 1.0).abs() < 1e-10,
            "product purity at n={n}"
        );
        // A tilted product state is also exactly unentangled.
        let tilted = product_state(&vec![[0.6, 0.0, 0.8]; n]).unwrap();
        assert!((h_purity(&tilted, &alg).unwrap() - 1.0).abs() < 1e-10);

        assert!(
            h_purity(&ghz(n).unwrap(), &alg).unwrap().abs() < 1e-10,
            "ghz purity at n={n}"
        );
        let expect = ((n as f64 - 2.0) / n as f64).powi(2);
        assert!(
            (h_purity(&w_state(n).unwrap(), &alg).unwrap() - expect).abs() < 1e-10,
            "w purity at n={n}"
        );
    }
    pass(1, "closed-form purities", t0, 1.0);
}

#[test]
fn acceptance_02_meyer_wallach_coincidence() {
    let t0 = Instant::now();
    for n in 2..=6usize {
        let alg = local_qubit_algebra(n).unwrap();
        for sample in 0..500u64 {
            let psi = haar_random(1 << n, 1_000 * n as u64 + sample).unwrap();
            let q = meyer_wallach(&psi).unwrap();
            let p = h_purity(&psi, &alg).unwrap();
            assert!(
                (q - (1.0 - p)).abs() < 1e-10,
                "n={n} sample={sample}: Q={q} vs 1-P={}",
                1.0 - p
            );
        }
    }
    pass(2, "Meyer-Wallach coincidence", t0, 30.0);
}

#[test]
fn acceptance_03_spin_examples() {
    let t0 = Instant::now();
    let spin1 = spin_algebra(1.0, 1).unwrap();
    let plus = PureState::basis_state(3, 0).unwrap();
    let zero = PureState::basis_state(3, 1).unwrap();
    let minus = PureState::basis_state(3, 2).unwrap();
    assert!((h_purity(&plus, &spin1).unwrap() - 1.0).abs() < 1e-10);
    assert!((h_purity(&minus, &spin1).unwrap() - 1.0).abs() < 1e-10);
    assert!(h_purity(&zero, &spin1).unwrap().abs() < 1e-10);

    let coll = spin_algebra(1.0, 2).unwrap();
    let top = PureState::basis_state(9, 0).unwrap(); // |1,1> (x) |1,1>
    let zz = PureState::basis_state(9, 4).unwrap(); // |0> (x) |0>
    assert!((h_purity(&top, &coll).unwrap() - 1.0).abs() < 1e-10);
    assert!(h_purity(&zz, &coll).unwrap().abs() < 1e-10);
    pass(3, "spin-1 and collective spin examples", t0, 5.0);
}

#[test]
fn acceptance_04_theorem_equivalence() {
    let t0 = Instant::now();
    let algebras = [
        local_qubit_algebra(2).unwrap(),
        local_qubit_algebra(3).unwrap(),
        spin_algebra(1.0, 1).unwrap(),
        spin_algebra(1.5, 1).unwrap(),
        bipartite_algebra(2, 2).unwrap(),
        bipartite_algebra(2, 3).unwrap(),
    ];
    for (i, alg) in algebras.iter().enumerate() {
        let report = theorem_equivalence_suite(alg, 100, 100, 40 + i as u64).unwrap();
        assert_eq!(
            report.counterexamples, 0,
            "algebra {} produced counterexamples",
            report.algebra
        );
        assert_eq!(report.cases.len(), 200);
    }
    pass(4, "theorem equivalence suite", t0, 120.0);
}

#[test]
fn acceptance_05_free_fermion_oracle() {
    let t0 = Instant::now();
    for n in [4usize, 6, 8, 10, 12] {
        let u_alg = fermion_u_algebra(n).unwrap();
        for eta in [0.25, 0.5, 1.0] {
            for g in [0.2, 0.8, 1.0, 1.5] {
                let p = XyParams::new(n, g, eta).unwrap();
                let dense = exact_ground(&p).unwrap();
                let free = sector_ground(&p).unwrap();
                assert!(
                    (dense.energy - free.energy).abs() < 1e-8,
                    "energy n={n} eta={eta} g={g}: {} vs {}",
                    dense.energy,
                    free.energy
                );
                let dense_purity = h_purity(&dense.state, &u_alg).unwrap();
                assert!(
                    (dense_purity - free.purity).abs() < 1e-8,
                    "purity n={n} eta={eta} g={g}: {dense_purity} vs {}",
                    free.purity
                );
            }
        }
    }
    // so(2N) purity of the ground state is 1 across the N = 8 subgrid.
    let so_alg = fermion_so_algebra(8).unwrap();
    for eta in [0.25, 0.5, 1.0] {
        for g in [0.2, 0.8, 1.0, 1.5] {
            let p = XyParams::new(8, g, eta).unwrap();
            let dense = exact_ground(&p).unwrap();
            let so_purity = h_purity(&dense.state, &so_alg).unwrap();
            assert!(
                (so_purity - 1.0).abs() < 1e-8,
                "so(16) purity at eta={eta} g={g}: {so_purity}"
            );
        }
    }
    pass(5, "free-fermion vs dense oracle", t0, 300.0);
}

#[test]
fn acceptance_06_criticality() {
    let t0 = Instant::now();
    let grid: Vec<f64> = (0..=400).map(|i| i as f64 * 0.005).collect();
    let scan = purity_scan(&grid, 1.0, 2000).unwrap();
    let est = estimate_critical(std::slice::from_ref(&scan), (0.85, 0.9925)).unwrap();
    assert!(
        (est.g_c_hat - 1.0).abs() < 0.05,
        "g_c_hat = {}",
        est.g_c_hat
    );
    assert!(
        (0.85..=1.15).contains(&est.nu_hat),
        "nu_hat = {}",
        est.nu_hat
    );

    let p0 = hpurity::bcs_purity(&XyParams::new(2000, 0.0, 1.0).unwrap()).unwrap();
    assert!((p0 - 1.0).abs() < 1e-10, "P(g->0) = {p0}");
    let p10 = hpurity::bcs_purity(&XyParams::new(2000, 10.0, 1.0).unwrap()).unwrap();
    assert!((p10 - 0.5).abs() < 5e-3, "P(g=10) = {p10}");
    pass(6, "criticality estimates and limits", t0, 120.0);
}

#[test]
fn acceptance_07_roof_vs_wootters() {
    let t0 = Instant::now();
    let alg = local_qubit_algebra(2).unwrap();
    let opts = RoofOptions::default();

    // Werner family.
    for p in [0.0, 0.25, 0.5, 0.8, 1.0] {
        let rho = werner(p).unwrap();
        let c = wootters_concurrence(&rho).unwrap();
        let roof = roof_purity_deficit(&rho, &alg, &opts).unwrap().value;
        assert!(
            (roof - c * c).abs() < 2e-2,
            "werner p={p}: roof {roof} vs C^2 {}",
            c * c
        );
    }

    // 50 random rank-2 mixtures.
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(0xACC7);
    for trial in 0..50 {
        let a = hpurity::states::haar_random_with(4, &mut rng).unwrap();
        let b = hpurity::states::haar_random_with(4, &mut rng).unwrap();
        let w: f64 = 0.1 + 0.8 * rng.random::<f64>();
        let rho = DensityMatrix::mixture(&[(w, a), (1.0 - w, b)]).unwrap();
        let c = wootters_concurrence(&rho).unwrap();
        let roof = roof_purity_deficit(&rho, &alg, &opts).unwrap().value;
        assert!(
            (roof - c * c).abs() < 2e-2,
            "trial {trial}: roof {roof} vs C^2 {}",
            c * c
        );
    }
    pass(7, "convex roof vs Wootters concurrence", t0, 600.0);
}

#[test]
fn acceptance_08_glocc_monotonicity() {
    let t0 = Instant::now();
    let alg = local_qubit_algebra(2).unwrap();
    let factor = local_qubit_algebra(1).unwrap();
    let factors = [&factor, &factor];
    let opts = AuditOptions {
        trials: 200,
        depth: 2,
        seed: 0x6106c,
        measure_prob: 0.5,
        roof: RoofOptions::default(),
        rerun_factor: 4,
    };
    let report = run_glocc_audit(&alg, &factors, &opts).unwrap();
    assert_eq!(report.rows.len(), 200);
    // At least 95% clean on the first estimate; reruns must clear the rest.
    let reran = report.rows.iter().filter(|r| r.reran).count();
    assert!(
        reran <= 10,
        "{reran} of 200 trials needed re-estimation (>5%)"
    );
    assert_eq!(
        report.violations, 0,
        "violations survived 4x restarts; max excess {} vs tolerance {}",
        report.max_excess, report.tolerance
    );
    pass(8, "GLOCC monotonicity audit", t0, 1200.0);
}

#[test]
fn acceptance_09_deterministic_csv() {
    let t0 = Instant::now();
    let bin = env!("CARGO_BIN_EXE_hpurity");
    let runs: Vec<Vec<&str>> = vec![
        vec![
            "purity", "--algebra", "local-qubits", "--n", "4", "--state", "haar:99",
        ],
        vec![
            "scan-xy", "--n", "200", "--eta", "1", "--gmin", "0", "--gmax", "2", "--steps", "50",
        ],
        vec![
            "theorem-check", "--algebra", "spin", "--j", "1", "--orbit", "20", "--random", "20",
            "--seed", "5",
        ],
        vec![
            "roof", "--algebra", "local-qubits", "--n", "2", "--rho", "werner:0.8",
            "--restarts", "16", "--seed", "21",
        ],
        vec![
            "glocc-check", "--n", "2", "--depth", "2", "--trials", "6", "--seed", "9",
            "--restarts", "8",
        ],
    ];
    for args in runs {
        let a = Command::new(bin).args(&args).output().unwrap();
        let b = Command::new(bin).args(&args).output().unwrap();
        assert!(
            a.status.success() || a.status.code() == Some(1),
            "run failed: {:?}",
            args
        );
        assert_eq!(
            a.stdout, b.stdout,
            "non-identical output for {:?}",
            args
        );
        assert_eq!(a.status.code(), b.status.code());
    }
    pass(9, "byte-identical seeded CSV", t0, 300.0);
}
