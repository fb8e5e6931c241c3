mod common;

use common::{braid, rng};
use num_complex::Complex64;
use permajones::assembly::blow_up;
use permajones::jones::braid_diagram;
use permajones::montecarlo::{estimate_jones_modulus, estimate_permanent, quantum_two_at_fifth_root, EstimateOptions};
use permajones::permanent::{permanent_numeric, NUMERIC_RYSER_BOUND};
use rand::Rng;

fn within(report_mean: Complex64, target: Complex64, se: f64, k: f64) -> bool {
    (report_mean - target).norm() <= k * se.max(1e-12)
}

#[test]
fn unbiased_on_random_matrices() {
    let mut r = rng(41);
    let mut hits = 0;
    for case in 0..20 {
        let n = r.gen_range(2..=6);
        let m: Vec<Vec<Complex64>> = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)))
                    .collect()
            })
            .collect();
        let exact = permanent_numeric(&m, NUMERIC_RYSER_BOUND).unwrap();
        let rep = estimate_permanent(&m, 100_000, 1000 + case).unwrap();
        if within(rep.mean, exact, rep.std_error, 4.0) {
            hits += 1;
        }
    }
    assert!(hits >= 18, "{hits}/20 within 4 standard errors");
}

#[test]
fn all_ones_five() {
    let m = vec![vec![Complex64::new(1.0, 0.0); 5]; 5];
    let rep = estimate_permanent(&m, 1_000_000, 5).unwrap();
    assert!(rep.ci95_re.0 - 2.0 * rep.std_error <= 120.0 && 120.0 <= rep.ci95_re.1 + 2.0 * rep.std_error);
    assert!(within(rep.mean, Complex64::new(120.0, 0.0), rep.std_error, 4.0));
}

#[test]
fn trefoil_matrix_at_fifth_root() {
    let q0 = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 5.0);
    let d = braid_diagram(&braid("2: 1 1 1"));
    let m = blow_up(&d)
        .unwrap()
        .to_matrix()
        .unwrap()
        .try_map(|p| p.eval(q0))
        .unwrap()
        .to_dense();
    let exact = permanent_numeric(&m, NUMERIC_RYSER_BOUND).unwrap();
    let rep = estimate_permanent(&m, 100_000, 7).unwrap();
    assert!(
        within(rep.mean, exact, rep.std_error, 4.0),
        "{} vs {exact} (se {})",
        rep.mean,
        rep.std_error
    );
}

#[test]
fn deterministic_reports() {
    let m: Vec<Vec<Complex64>> = (0..4)
        .map(|i| {
            (0..4)
                .map(|j| Complex64::new(1.0 / (1 + i + j) as f64, (i as f64) - 1.5))
                .collect()
        })
        .collect();
    assert_eq!(
        estimate_permanent(&m, 5000, 3).unwrap(),
        estimate_permanent(&m, 5000, 3).unwrap()
    );
    assert_ne!(
        estimate_permanent(&m, 5000, 3).unwrap().mean,
        estimate_permanent(&m, 5000, 4).unwrap().mean
    );
}

#[test]
fn unknot_modulus() {
    let q0 = Complex64::from_polar(1.0, std::f64::consts::PI / 5.0);
    let rep = estimate_jones_modulus(&braid("1:"), q0, &EstimateOptions::new(50_000, 1)).unwrap();
    let expected = quantum_two_at_fifth_root();
    assert!((expected - 1.618_033_988_749_895).abs() < 1e-12);
    assert!((rep.exact.unwrap() - expected).abs() < 1e-12);
    assert!((rep.modulus - expected).abs() <= 4.0 * rep.std_error.max(1e-12));
}

#[test]
fn trefoil_modulus() {
    let q0 = Complex64::from_polar(1.0, std::f64::consts::PI / 5.0);
    let rep = estimate_jones_modulus(&braid("2: 1 1 1"), q0, &EstimateOptions::new(100_000, 2)).unwrap();
    let exact = rep.exact.unwrap();
    assert!(
        (rep.modulus - exact).abs() <= 4.0 * rep.std_error,
        "{} vs {exact}",
        rep.modulus
    );
}

#[test]
fn exact_modulus_at_one_is_two_for_knots() {
    let one = Complex64::new(1.0, 0.0);
    for s in ["1:", "2: 1 1 1", "3: 1 -2 1 -2", "2: -1 -1 -1"] {
        let rep = estimate_jones_modulus(&braid(s), one, &EstimateOptions::new(10, 0)).unwrap();
        assert!((rep.exact.unwrap() - 2.0).abs() < 1e-12, "{s}");
    }
}
