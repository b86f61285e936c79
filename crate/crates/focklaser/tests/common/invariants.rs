//! Randomized invariant suites. Each runs a fixed number of accepted cases
//! from a deterministic seed and returns the first counterexample, so the
//! same suites back both the property tests and the acceptance report.

use focklaser::emission::{emission_probability, survival_probability, GainParams};
use focklaser::exact::{self, TruncatedBasis};
use focklaser::laser_direct::{steady_state_direct_auto, MultiLevelGain};
use focklaser::laser_rate::{self, RateOptions};
use focklaser::liouvillian::{LiouvillianModel, LiouvillianOptions};
use focklaser::spectrum::{energy, RabiParams, SpinBranch};
use focklaser::{Error, PhotonDistribution};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestError, TestRng, TestRunner};

pub const CASES: u32 = 128;

fn run<S: Strategy>(cases: u32, strategy: S, check: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    let config = Config { cases, max_shrink_iters: 64, failure_persistence: None, ..Config::default() };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner.run(&strategy, check).map_err(|e| match e {
        TestError::Fail(why, input) => format!("{why} at {input:?}"),
        TestError::Abort(why) => format!("aborted: {why}"),
    })
}

fn fail(e: Error) -> TestCaseError {
    TestCaseError::fail(e.to_string())
}

fn rate_case() -> impl Strategy<Value = (f64, f64, f64, f64, f64)> {
    (0.0f64..12.0, 0.0f64..0.3, -5.0f64..-1.0, -4.0f64..-1.5, -1e-3f64..1e-3)
}

fn rate_params((g, lambda, log_r, log_gamma, delta): (f64, f64, f64, f64, f64)) -> (RabiParams, GainParams) {
    let p = RabiParams::new(g).unwrap().with_lambda(lambda).unwrap();
    let gp = GainParams { epsilon: 1e-5, delta, gamma: 10f64.powf(log_gamma), r: 10f64.powf(log_r), kappa: 1e-8 };
    (p, gp)
}

/// Steady state of the rate equation, rejecting pumps that outgrow every
/// truncation (far above threshold with no anharmonicity to stop them).
fn rate_steady_state(p: &RabiParams, gp: &GainParams) -> Result<PhotonDistribution, TestCaseError> {
    match laser_rate::steady_state_auto(p, gp, &RateOptions::default()) {
        Err(Error::TailMass { .. }) => Err(TestCaseError::reject("outgrows the truncation")),
        r => r.map_err(fail),
    }
}

fn is_law(d: &PhotonDistribution) -> bool {
    d.probs.iter().all(|&q| q.is_finite() && q >= 0.0)
}

/// `A_n ρ_{n−1} = C_{n−1} ρ_n` to 1e-12 relative.
pub fn detailed_balance(cases: u32) -> Result<(), String> {
    run(cases, rate_case(), |c| {
        let (p, gp) = rate_params(c);
        let d = rate_steady_state(&p, &gp)?;
        let (a, c) = laser_rate::rates(&p, &gp, d.n_max(), &RateOptions::default()).map_err(fail)?;
        let res = laser_rate::detailed_balance_residual(&d, &a, &c);
        prop_assert!(res < 1e-12, "residual {:e}", res);
        Ok(())
    })
}

/// Every distribution the solvers return sums to one.
pub fn normalization(cases: u32) -> Result<(), String> {
    run(cases, (rate_case(), 0.0f64..1.0), |(c, t)| {
        let (p, gp) = rate_params(c);
        let d = rate_steady_state(&p, &gp)?;
        prop_assert!((d.probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let m = MultiLevelGain::from_gain(&gp, 100.0).map_err(fail)?;
        let direct = steady_state_direct_auto(&p, &gp, &m).map_err(fail)?;
        prop_assert!((direct.probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let start = PhotonDistribution::fock(0, d.n_max()).map_err(fail)?;
        let later = laser_rate::transient(&start, &p, &gp, 1e3 * t, d.n_max()).map_err(fail)?;
        prop_assert!((later.probs.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        Ok(())
    })
}

/// Probabilities never leave [0, 1]; the Liouvillian steady state is a
/// positive semidefinite density operator.
pub fn positivity(cases: u32) -> Result<(), String> {
    let lindblad = (0.05f64..0.4, -2.5f64..-2.0, -2.0f64..-1.0, -3.0f64..-2.3, -1.7f64..-1.0);
    run(cases, (rate_case(), lindblad, 0usize..300, 0.0f64..1e6), |(c, (g, le, lg, lr, lk), n, t)| {
        let (p, gp) = rate_params(c);
        let d = rate_steady_state(&p, &gp)?;
        prop_assert!(is_law(&d));
        let e = emission_probability(n, t, &p, &gp).map_err(fail)?;
        prop_assert!((0.0..=1.0).contains(&e));
        let small = GainParams {
            epsilon: 10f64.powf(le),
            delta: 0.0,
            gamma: 10f64.powf(lg),
            r: 10f64.powf(lr),
            kappa: 10f64.powf(lk),
        };
        let model = LiouvillianModel::new(&RabiParams::new(g).unwrap(), &small, TruncatedBasis::new(10).unwrap(), LiouvillianOptions::default())
            .map_err(fail)?;
        let ss = match model.steady_state() {
            Err(Error::TruncationLoss { .. }) => return Err(TestCaseError::reject("outgrows the truncation")),
            r => r.map_err(fail)?,
        };
        prop_assert!(ss.min_eigenvalue > -1e-10, "min eigenvalue {:e}", ss.min_eigenvalue);
        prop_assert!(is_law(&model.photon_statistics(&ss).map_err(fail)?.distribution));
        Ok(())
    })
}

/// Emission and survival of one transition add up to one.
pub fn complementarity(cases: u32) -> Result<(), String> {
    let strat = (0usize..500, 0.0f64..20.0, 0.0f64..1.0, 0.0f64..1e-2, -1.0f64..1.0, 0.0f64..1e7);
    run(cases, strat, |(n, g, lambda, eps, delta, t)| {
        let p = RabiParams::new(g).unwrap().with_lambda(lambda).unwrap();
        let gp = GainParams { epsilon: eps, delta, gamma: 1e-3, r: 1e-2, kappa: 1e-8 };
        let e = emission_probability(n, t, &p, &gp).map_err(fail)?;
        let s = survival_probability(n, t, &p, &gp).map_err(fail)?;
        prop_assert!((e + s - 1.0).abs() < 1e-14, "{} + {}", e, s);
        Ok(())
    })
}

/// `E(n,+) + E(n,−) = 2nω`, with and without bias.
pub fn branch_symmetry(cases: u32) -> Result<(), String> {
    run(cases, (0usize..1000, 0.0f64..18.0, prop_oneof![Just(0.0), 0.0f64..2.0]), |(n, g, lambda)| {
        let p = RabiParams::new(g).unwrap().with_lambda(lambda).unwrap();
        let sum = energy(n, SpinBranch::Plus, &p).map_err(fail)? + energy(n, SpinBranch::Minus, &p).map_err(fail)?;
        prop_assert_eq!(sum, 2.0 * n as f64);
        Ok(())
    })
}

/// `[b, b†] = 1` below the top tenth of the Fock levels.
pub fn commutator(cases: u32) -> Result<(), String> {
    run(cases, (0.0f64..6.0, 10usize..80), |(g, nf)| {
        let b = exact::displaced_annihilation(g, TruncatedBasis::new(nf).unwrap()).matrix;
        let c = &b * b.transpose() - b.transpose() * &b;
        let keep = |i: usize| i % nf < nf - nf.div_ceil(10);
        for i in (0..2 * nf).filter(|&i| keep(i)) {
            for j in (0..2 * nf).filter(|&j| keep(j)) {
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!((c[(i, j)] - want).abs() < 1e-8, "({}, {}): {}", i, j, c[(i, j)]);
            }
        }
        Ok(())
    })
}

pub const SUITES: [(&str, fn(u32) -> Result<(), String>); 6] = [
    ("detailed balance", detailed_balance),
    ("normalization", normalization),
    ("positivity", positivity),
    ("emission + survival = 1", complementarity),
    ("branch-energy symmetry", branch_symmetry),
    ("commutator [b, b†] = 1", commutator),
];
