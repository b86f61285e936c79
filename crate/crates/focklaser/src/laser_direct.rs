//! Steady state from an explicit multi-level gain medium.
//!
//! Levels: ground `g`, upper lasing `a`, lower lasing `b`, and bath levels `c`,
//! `d` that return population to `g`. The pump drives `g → a`; `a` with `n−1`
//! photons exchanges with `b` with `n` photons through the coupling `V`.

use nalgebra::{Matrix4, SMatrix, SVector, Vector4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::distribution::PhotonDistribution;
use crate::emission::{self, GainParams};
use crate::error::{invalid, Error, Result};
use crate::laser_rate::{self, MAX_AUTO_N, TAIL_LIMIT};
use crate::spectrum::{self, Quadrature, RabiParams, SpinBranch};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiLevelGain {
    pub r: f64,
    pub gamma_a: f64,
    pub gamma_b: f64,
    pub gamma_c: f64,
    pub gamma_d: f64,
    /// Smallest admissible `γ_c/γ_a` and `γ_d/γ_b`.
    pub min_bath_ratio: f64,
    /// Phase of `V`; `|A_n|` must not depend on it.
    pub coupling_phase: f64,
}

impl MultiLevelGain {
    /// `γ_a = γ_b = Γ`, bath levels `ratio` times faster.
    pub fn from_gain(gp: &GainParams, ratio: f64) -> Result<Self> {
        MultiLevelGain {
            r: gp.r,
            gamma_a: gp.gamma,
            gamma_b: gp.gamma,
            gamma_c: ratio * gp.gamma,
            gamma_d: ratio * gp.gamma,
            min_bath_ratio: 100.0,
            coupling_phase: 0.0,
        }
        .validated()
    }

    pub fn validated(self) -> Result<Self> {
        for (name, v) in [
            ("r", self.r),
            ("gamma_a", self.gamma_a),
            ("gamma_b", self.gamma_b),
            ("gamma_c", self.gamma_c),
            ("gamma_d", self.gamma_d),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(invalid(name, format!("must be finite and >= 0, got {v}")));
            }
        }
        if self.gamma_c < self.min_bath_ratio * self.gamma_a {
            return Err(invalid("gamma_c", format!("must be at least {} x gamma_a", self.min_bath_ratio)));
        }
        if self.gamma_d < self.min_bath_ratio * self.gamma_b {
            return Err(invalid("gamma_d", format!("must be at least {} x gamma_b", self.min_bath_ratio)));
        }
        Ok(self)
    }

    /// `r_a = rΓ/(r + Γ)`, the pump seen by the lasing pair once the bath
    /// levels are eliminated. Requires `γ_a = γ_b`.
    pub fn effective_pump(&self) -> Result<f64> {
        if self.gamma_a != self.gamma_b {
            return Err(invalid("gamma_b", "the eliminated pump needs gamma_a == gamma_b"));
        }
        let s = self.r + self.gamma_a;
        Ok(if s > 0.0 { self.r * self.gamma_a / s } else { 0.0 })
    }
}

/// Linear system for `(ρ_aa, ρ_ab, ρ_ba, ρ_bb)` of one photon-number sector,
/// normalized to `ρ_nn = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoherenceBlock {
    pub matrix: Matrix4<Complex64>,
    pub rhs: Vector4<Complex64>,
    pub coupling: Complex64,
}

impl CoherenceBlock {
    /// `delta` is the full detuning `E_a − E_b` of the pair.
    pub fn new(coupling: Complex64, delta: f64, gamma_a: f64, gamma_b: f64, pump: f64) -> Self {
        let v = coupling;
        let vc = v.conj();
        let gbar = Complex64::from(0.5 * (gamma_a + gamma_b));
        let z = Complex64::from(0.0);
        let d = I * delta;
        #[rustfmt::skip]
        let matrix = Matrix4::new(
            gamma_a.into(), -I * v,   I * vc,   z,
            -I * vc,        gbar + d, z,        I * vc,
            I * v,          z,        gbar - d, -I * v,
            z,              I * v,    -I * vc,  gamma_b.into(),
        );
        CoherenceBlock { matrix, rhs: Vector4::new(pump.into(), z, z, z), coupling }
    }

    pub fn solve(&self) -> Result<Vector4<Complex64>> {
        self.matrix
            .lu()
            .solve(&self.rhs)
            .filter(|x| x.iter().all(|c| c.re.is_finite() && c.im.is_finite()))
            .ok_or_else(|| Error::SingularBlock("coherence block is not invertible".into()))
    }

    /// 2-norm condition number.
    pub fn condition(&self) -> f64 {
        let sv = self.matrix.singular_values();
        sv.max() / sv.min()
    }

    /// Population flux `a → b`, `−i(V ρ_ab − V* ρ_ba)`.
    pub fn gain(&self, x: &Vector4<Complex64>) -> Complex64 {
        -I * (self.coupling * x[1] - self.coupling.conj() * x[2])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockGain {
    pub closed_form: f64,
    pub by_inversion: f64,
    pub condition: f64,
}

/// `V = ε⟨n−1,−|(b+b†)|n,−⟩ e^{iφ}`.
pub fn coupling(n: usize, p: &RabiParams, gp: &GainParams, phase: f64) -> Result<Complex64> {
    let x = spectrum::matrix_element_x(n - 1, SpinBranch::Minus, n, SpinBranch::Minus, p, Quadrature::Displaced)?;
    Ok(Complex64::from_polar(gp.epsilon * x, phase))
}

/// Full detuning `E_a − E_b` for photon `n`: twice the Bloch half-splitting.
pub fn pair_detuning(n: usize, p: &RabiParams, gp: &GainParams) -> Result<f64> {
    Ok(2.0 * emission::detuning(n, p, gp)?)
}

/// Closed form `A_n = 2r_a|V|²/(Γ² + 4|V|² + Δ_n²)`.
pub fn closed_form_gain(v2: f64, delta: f64, gamma: f64, pump: f64) -> f64 {
    let den = gamma * gamma + 4.0 * v2 + delta * delta;
    if den > 0.0 {
        2.0 * pump * v2 / den
    } else {
        0.0
    }
}

/// Gain into photon `n` from the eliminated 4×4 block, both by closed form and
/// by explicit inversion.
pub fn block_gain_a(n: usize, p: &RabiParams, gp: &GainParams, mlg: &MultiLevelGain) -> Result<BlockGain> {
    if n < 1 {
        return Err(invalid("n", "gain is defined for n >= 1"));
    }
    let v = coupling(n, p, gp, mlg.coupling_phase)?;
    let delta = pair_detuning(n, p, gp)?;
    block_gain_from(v, delta, mlg)
}

fn block_gain_from(v: Complex64, delta: f64, mlg: &MultiLevelGain) -> Result<BlockGain> {
    if !(mlg.gamma_a > 0.0 && mlg.gamma_b > 0.0) {
        return Err(Error::SingularBlock("lasing-level decay must be positive".into()));
    }
    let pump = mlg.effective_pump()?;
    let block = CoherenceBlock::new(v, delta, mlg.gamma_a, mlg.gamma_b, pump);
    let x = block.solve()?;
    let a = block.gain(&x);
    let closed = closed_form_gain(v.norm_sqr(), delta, mlg.gamma_a, pump);
    let scale = closed.abs().max(a.re.abs());
    if scale > 0.0 && ((a.re - closed).abs() > 1e-10 * scale || a.im.abs() > 1e-10 * scale) {
        return Err(Error::InvalidState(format!("block gain mismatch: inversion {a}, closed form {closed}")));
    }
    Ok(BlockGain { closed_form: closed, by_inversion: a.re, condition: block.condition() })
}

/// Steady populations and coherences of one sector before bath elimination.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FiveLevelState {
    pub g: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub ab: Complex64,
    /// Population flux `a → b`, i.e. the gain into the next photon.
    pub gain: f64,
}

/// Solves the full five-level sector with `ρ_nn = 1`.
///
/// Unknowns `(ρ_g, ρ_a, ρ_ab, ρ_ba, ρ_b, ρ_c, ρ_d)`; the ground-state balance is
/// redundant and replaced by the trace condition.
pub fn solve_five_level(v: Complex64, delta: f64, mlg: &MultiLevelGain) -> Result<FiveLevelState> {
    let (r, ga, gb, gc, gd) = (mlg.r, mlg.gamma_a, mlg.gamma_b, mlg.gamma_c, mlg.gamma_d);
    let c = |x: f64| Complex64::from(x);
    let z = c(0.0);
    let vc = v.conj();
    let gbar = c(0.5 * (ga + gb));
    let d = I * delta;
    #[rustfmt::skip]
    let m = SMatrix::<Complex64, 7, 7>::from_row_slice(&[
        c(1.0), c(1.0),  z,           z,           c(1.0),  c(1.0), c(1.0),
        c(r),   c(-ga),  I * v,       -I * vc,     z,       z,      z,
        z,      I * vc,  -(gbar + d), z,           -I * vc, z,      z,
        z,      -I * v,  z,           d - gbar,    I * v,   z,      z,
        z,      z,       -I * v,      I * vc,      c(-gb),  z,      z,
        z,      c(ga),   z,           z,           z,       c(-gc), z,
        z,      z,       z,           z,           c(gb),   z,      c(-gd),
    ]);
    let mut rhs = SVector::<Complex64, 7>::zeros();
    rhs[0] = c(1.0);
    let x = m
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::SingularBlock("five-level sector is not invertible".into()))?;
    let gain = -I * (v * x[2] - vc * x[3]);
    Ok(FiveLevelState { g: x[0].re, a: x[1].re, ab: x[2], b: x[4].re, c: x[5].re, d: x[6].re, gain: gain.re })
}

/// `C_{n−1} = κ|⟨n−1|(a+a†)|n⟩|²`.
fn loss(n: usize, p: &RabiParams, gp: &GainParams) -> Result<f64> {
    let x = spectrum::matrix_element_x(n - 1, SpinBranch::Minus, n, SpinBranch::Minus, p, Quadrature::Bare)?;
    Ok(gp.kappa * x * x)
}

pub fn steady_state_direct(p: &RabiParams, gp: &GainParams, mlg: &MultiLevelGain, n_max: usize) -> Result<PhotonDistribution> {
    if n_max < 1 {
        return Err(invalid("n_max", "must be >= 1"));
    }
    p.validated()?;
    gp.validated(p)?;
    let mlg = mlg.validated()?;
    let s = spectrum::branch_splittings(n_max, p)?;
    let mut birth = Vec::with_capacity(n_max);
    let mut death = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let v = coupling(n, p, gp, mlg.coupling_phase)?;
        let delta = p.omega * (gp.delta - 0.5 * (s[n - 1] - s[n]));
        birth.push(block_gain_from(v, delta, &mlg)?.by_inversion);
        death.push(loss(n, p, gp)?);
    }
    let dist = laser_rate::birth_death_stationary(&birth, &death)?;
    let mass = *dist.probs.last().unwrap_or(&0.0);
    if mass > TAIL_LIMIT {
        return Err(Error::TailMass { n_max, mass });
    }
    Ok(dist)
}

pub fn steady_state_direct_auto(p: &RabiParams, gp: &GainParams, mlg: &MultiLevelGain) -> Result<PhotonDistribution> {
    laser_rate::grow(laser_rate::default_n_max(p), MAX_AUTO_N, |n| steady_state_direct(p, gp, mlg, n))
}
