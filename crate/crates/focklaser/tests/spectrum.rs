mod common;

use focklaser::exact::{self, TruncatedBasis};
use focklaser::spectrum::*;
use focklaser::Error;
use proptest::prelude::*;

fn params(g: f64) -> RabiParams {
    RabiParams::new(g).unwrap()
}

#[test]
fn laguerre_low_orders() {
    assert_eq!(laguerre(0, 7.3).unwrap(), 1.0);
    assert_eq!(laguerre(1, 4.0).unwrap(), -3.0);
}

#[test]
fn laguerre_matches_explicit_series() {
    let v = laguerre(5, 2.5).unwrap();
    assert!((v - common::laguerre_series(5, 2.5).0).abs() < 1e-13);
    // frozen: 1 − 12.5 + 31.25 − 26.041… + 8.138… − 0.8138… = 1.032552083…
    assert!((v - 1.0325520833333335).abs() < 1e-14);
}

#[test]
fn laguerre_overflow_is_signalled() {
    assert!(matches!(laguerre(400, 1e6), Err(Error::Overflow { .. })));
}

#[test]
fn displacement_diagonal_trivial_values() {
    for n in [0, 1, 7, 250] {
        assert_eq!(displacement_diagonal(n, 0.0).unwrap(), 1.0);
    }
    assert!((displacement_diagonal(0, 1.0).unwrap() - (-2.0f64).exp()).abs() < 1e-15);
}

#[test]
fn displacement_diagonal_against_matrix_exponential() {
    let brute = common::dn_bruteforce(3, 1.0, 120);
    let v = displacement_diagonal(3, 1.0).unwrap();
    assert!((v - brute).abs() < 1e-12, "{v} vs {brute}");
    assert!((v - 0.3157823275520963).abs() < 1e-13);
}

#[test]
fn displacement_diagonal_grid_against_oracle() {
    // g ≤ 3 displaces by 6: mean photon number 36, so 300 levels hold every n ≤ 50.
    for &g in &[0.3, 1.0, 2.0, 3.0] {
        let d = common::displacement_expm(2.0 * g, 300);
        for n in 0..=50 {
            let v = displacement_diagonal(n, g).unwrap();
            assert!((v - d[(n, n)]).abs() < 1e-8, "g={g} n={n}: {v} vs {}", d[(n, n)]);
        }
    }
}

#[test]
fn displacement_diagonal_survives_extreme_arguments() {
    for n in (0..=1000).step_by(50) {
        let lr = displacement_diagonal_log(n, 18.0).unwrap();
        assert!(lr.log_abs.is_finite());
        let v = lr.value();
        assert!(v.is_finite());
        // Underflow to zero only for values below 1e-300.
        assert!(v != 0.0 || lr.log_abs < -300.0 * std::f64::consts::LN_10);
    }
}

#[test]
fn energy_examples() {
    let e = energy(0, SpinBranch::Minus, &params(1.0)).unwrap();
    assert!((e + 0.5 * (-2.0f64).exp()).abs() < 1e-15);
    for n in 0..6 {
        assert_eq!(energy(n, SpinBranch::Plus, &params(0.0)).unwrap(), n as f64 + 0.5);
        assert_eq!(energy(n, SpinBranch::Minus, &params(0.0)).unwrap(), n as f64 - 0.5);
    }
}

#[test]
fn energy_with_bias_against_exact_diagonalization() {
    let p = params(2.0).with_lambda(0.1).unwrap();
    let e = energy(5, SpinBranch::Plus, &p).unwrap();
    assert!((e - 4.87076805794159).abs() < 1e-12);
    let basis = TruncatedBasis::new(200).unwrap();
    let es = exact::label_eigenstates(exact::diagonalize(&exact::build_rabi(&p, basis).unwrap()).unwrap(), &p, basis).unwrap();
    let k = es.find_label(5, SpinBranch::Plus).expect("(5,+) labelled");
    // Exact eigenvalues carry the −g² offset.
    let exact_e = es.values[k] + p.g * p.g;
    assert!((exact_e - e).abs() < 0.05, "analytic {e}, exact {exact_e}");
}

#[test]
fn gaps_are_harmonic_at_strong_coupling() {
    let t = excitation_gaps(SpinBranch::Minus, &params(10.0), 6).unwrap();
    assert!((t.levels[5].gap - 1.0).abs() < 1e-10);
    let t0 = excitation_gaps(SpinBranch::Minus, &params(0.0), 20).unwrap();
    assert!(t0.levels.iter().all(|l| l.gap == 1.0));
}

#[test]
fn gaps_near_nine_deviate_at_g3() {
    let t = excitation_gaps(SpinBranch::Minus, &params(3.0), 12).unwrap();
    let dev: Vec<f64> = t.levels.iter().map(|l| (l.gap - 1.0).abs()).collect();
    assert!(dev[..3].iter().all(|d| *d < 1e-3));
    assert!(dev[7..11].iter().all(|d| *d > 0.05), "{dev:?}");
}

#[test]
fn gaps_near_nine_follow_exact_diagonalization() {
    let p = params(3.0);
    let basis = TruncatedBasis::for_coupling(p.g);
    let es = exact::label_eigenstates(exact::diagonalize(&exact::build_rabi(&p, basis).unwrap()).unwrap(), &p, basis).unwrap();
    let t = excitation_gaps(SpinBranch::Minus, &p, 10).unwrap();
    for n in 6..9 {
        let (a, b) = (es.find_label(n, SpinBranch::Minus).unwrap(), es.find_label(n + 1, SpinBranch::Minus).unwrap());
        let exact_gap = es.values[b] - es.values[a];
        assert!((exact_gap - t.levels[n].gap).abs() < 0.05, "n={n}: {exact_gap} vs {}", t.levels[n].gap);
    }
}

#[test]
fn critical_photon_number_examples() {
    let nc10 = critical_photon_number(&params(10.0)).unwrap();
    assert!((85..=115).contains(&nc10), "{nc10}");
    assert!(critical_photon_number(&params(0.01)).unwrap() <= 1);
    let nc5 = critical_photon_number(&params(5.0)).unwrap();
    assert_eq!(nc5, 21);
}

#[test]
fn critical_photon_number_respects_ceiling() {
    let opts = CriticalOptions { ceiling: 10, ..CriticalOptions::default() };
    assert!(matches!(critical_photon_number_with(&params(10.0), &opts), Err(Error::NoCriticalNumber { .. })));
}

#[test]
fn mixing_angle_examples() {
    assert_eq!(mixing_angle(4, &params(1.0)).unwrap(), std::f64::consts::FRAC_PI_2);
    // D_n underflows to zero at g = 18.
    assert!(mixing_angle(0, &params(18.0).with_lambda(0.3).unwrap()).unwrap().abs() < 1e-12);
    let p = params(1.0).with_lambda(0.5).unwrap();
    let expect = (common::dn_bruteforce(3, 1.0, 120) / 0.5).atan();
    let th = mixing_angle(3, &p).unwrap();
    assert!((th - expect).abs() < 1e-12);
    assert!((th - 0.5633060445797315).abs() < 1e-13);
}

#[test]
fn matrix_element_examples() {
    let p = params(2.0);
    for n in 1..6 {
        for s in SpinBranch::BOTH {
            let v = matrix_element_x(n - 1, s, n, s, &p, Quadrature::Bare).unwrap();
            assert!((v - (n as f64).sqrt()).abs() < 1e-14);
        }
        let flip = matrix_element_x(n, SpinBranch::Minus, n, SpinBranch::Plus, &p, Quadrature::Bare).unwrap();
        assert_eq!(flip, -4.0);
        assert_eq!(matrix_element_x(n, SpinBranch::Minus, n, SpinBranch::Plus, &p, Quadrature::Displaced).unwrap(), 0.0);
    }
    let pl = params(2.0).with_lambda(0.3).unwrap();
    let th = mixing_angle(3, &pl).unwrap();
    let flip = matrix_element_x(3, SpinBranch::Minus, 3, SpinBranch::Plus, &pl, Quadrature::Bare).unwrap();
    assert!((flip + 4.0 * th.sin()).abs() < 1e-14);
}

#[test]
fn matrix_elements_match_exact_eigenvectors() {
    // ⟨n′σ′|(a+a†)|nσ⟩ between labelled exact eigenvectors, up to the sign
    // freedom of each eigenvector.
    let p = params(3.0);
    let basis = TruncatedBasis::for_coupling(p.g);
    let es = exact::label_eigenstates(exact::diagonalize(&exact::build_rabi(&p, basis).unwrap()).unwrap(), &p, basis).unwrap();
    let x = exact::bare_quadrature(basis);
    let xe = exact::to_eigenbasis(&x, &es);
    for n in 1..5 {
        let a = es.find_label(n - 1, SpinBranch::Minus).unwrap();
        let b = es.find_label(n, SpinBranch::Minus).unwrap();
        let analytic = matrix_element_x(n - 1, SpinBranch::Minus, n, SpinBranch::Minus, &p, Quadrature::Bare).unwrap();
        assert!((xe[(a, b)].abs() - analytic.abs()).abs() < 0.02, "n={n}: {} vs {analytic}", xe[(a, b)]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn laguerre_recurrence_equals_series(n in 0usize..30, x in 0.0f64..6.0) {
        let v = laguerre(n, x).unwrap();
        let (s, mag) = common::laguerre_series(n, x);
        prop_assert!((v - s).abs() <= 1e-13 * mag.max(1.0), "{} vs {}", v, s);
    }

    #[test]
    fn branch_energies_are_symmetric(n in 0usize..400, g in 0.0f64..12.0, lambda in 0.0f64..1.0) {
        let p = RabiParams::new(g).unwrap().with_lambda(lambda).unwrap();
        let sum = energy(n, SpinBranch::Plus, &p).unwrap() + energy(n, SpinBranch::Minus, &p).unwrap();
        prop_assert_eq!(sum, 2.0 * n as f64);
    }

    #[test]
    fn same_branch_elements_do_not_depend_on_g(n in 1usize..200, g in 0.0f64..10.0, lambda in 0.0f64..0.5) {
        let p = RabiParams::new(g).unwrap().with_lambda(lambda).unwrap();
        for s in SpinBranch::BOTH {
            prop_assert_eq!(matrix_element_x(n - 1, s, n, s, &p, Quadrature::Bare).unwrap(), (n as f64).sqrt());
            prop_assert_eq!(matrix_element_x(n, s, n - 1, s, &p, Quadrature::Displaced).unwrap(), (n as f64).sqrt());
        }
    }

    #[test]
    fn harmonic_plateau(g in 5.0f64..12.0, frac in 0.0f64..0.5) {
        let p = RabiParams::new(g).unwrap();
        let n = (frac * g * g) as usize;
        let t = excitation_gaps(SpinBranch::Minus, &p, n + 1).unwrap();
        prop_assert!((t.levels[n].gap - 1.0).abs() < 1e-3);
    }

    #[test]
    fn mixing_angle_in_range(n in 0usize..100, g in 0.0f64..5.0, lambda in 0.0f64..2.0) {
        let p = RabiParams::new(g).unwrap().with_lambda(lambda).unwrap();
        let th = mixing_angle(n, &p).unwrap();
        prop_assert!((0.0..std::f64::consts::PI).contains(&th));
    }
}
