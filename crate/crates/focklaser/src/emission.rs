//! Emitter–DSC-photon exchange inside the near-degenerate pair
//! `{|e, m−1⟩, |g, m⟩}` of one pseudo-spin branch.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::spectrum::{self, RabiParams, SpinBranch};

/// Emitter coupling, detuning, linewidth, pump and cavity loss.
///
/// Frequencies and rates share the unit of [`RabiParams::omega`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GainParams {
    pub epsilon: f64,
    /// Emitter detuning in units of ω: `ω₀ᵉᵐ = ω(1 + δ)`.
    pub delta: f64,
    pub gamma: f64,
    pub r: f64,
    pub kappa: f64,
}

impl GainParams {
    pub fn validated(self, p: &RabiParams) -> Result<Self> {
        for (name, v) in [("epsilon", self.epsilon), ("gamma", self.gamma), ("r", self.r), ("kappa", self.kappa)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(invalid(name, format!("must be finite and >= 0, got {v}")));
            }
        }
        if !self.delta.is_finite() {
            return Err(invalid("delta", "must be finite"));
        }
        if self.epsilon / p.omega >= 1e-2 {
            log::warn!("epsilon/omega = {:e} is not small; the degenerate-pair picture is doubtful", self.epsilon / p.omega);
        }
        Ok(self)
    }
}

/// `H_m = E_m I + Δ_m σz + √m ε σx` on the pair feeding photon `m`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubspaceBloch {
    pub m: usize,
    pub shift: f64,
    pub half_splitting: f64,
    /// `U_m = √(Δ_m² + mε²)`.
    pub rabi: f64,
}

impl SubspaceBloch {
    pub fn new(m: usize, p: &RabiParams, gp: &GainParams, branch: SpinBranch) -> Result<Self> {
        if m < 1 {
            return Err(invalid("m", "transition index starts at 1"));
        }
        let s_prev = spectrum::branch_splitting(m - 1, p)?;
        let s = spectrum::branch_splitting(m, p)?;
        let sg = branch.sign();
        // E(|e,m−1⟩) = ω(1+δ)/2 + E_{m−1,σ}; E(|g,m⟩) = −ω(1+δ)/2 + E_{m,σ}, less the
        // common photon energy (m − ½)ω.
        let upper = 0.5 * p.omega * gp.delta + 0.5 * sg * p.omega * s_prev;
        let lower = -0.5 * p.omega * gp.delta + 0.5 * sg * p.omega * s;
        let half = 0.5 * (upper - lower);
        Ok(SubspaceBloch {
            m,
            shift: 0.5 * (upper + lower),
            half_splitting: half,
            rabi: (half * half + m as f64 * gp.epsilon * gp.epsilon).sqrt(),
        })
    }

    pub fn coupling(&self, gp: &GainParams) -> f64 {
        (self.m as f64).sqrt() * gp.epsilon
    }
}

/// Half-detuning `Δ_m` of the transition `m−1 → m` on `branch`.
pub fn detuning_on(m: usize, p: &RabiParams, gp: &GainParams, branch: SpinBranch) -> Result<f64> {
    Ok(SubspaceBloch::new(m, p, gp, branch)?.half_splitting)
}

/// `Δ_m = (ω/2)(δ − ½(s_{m−1} − s_m))` on the σ = −1 ladder.
///
/// This is the single convention for "the detuning of photon `m`"; every
/// method indexes transitions by the photon number they create.
pub fn detuning(m: usize, p: &RabiParams, gp: &GainParams) -> Result<f64> {
    detuning_on(m, p, gp, SpinBranch::Minus)
}

/// Probability that an excited emitter adds photon `n+1` within time `t`.
pub fn emission_probability(n: usize, t: f64, p: &RabiParams, gp: &GainParams) -> Result<f64> {
    let b = SubspaceBloch::new(n + 1, p, gp, SpinBranch::Minus)?;
    Ok(emission_from_bloch(&b, gp, t).0)
}

/// `(P_emit, P_survive)` for one Bloch block.
pub fn emission_from_bloch(b: &SubspaceBloch, gp: &GainParams, t: f64) -> (f64, f64) {
    let v2 = b.m as f64 * gp.epsilon * gp.epsilon;
    let u2 = b.rabi * b.rabi;
    if u2 == 0.0 {
        return (0.0, 1.0);
    }
    let (s, c) = (b.rabi * t).sin_cos();
    let emit = v2 / u2 * s * s;
    let survive = c * c + b.half_splitting * b.half_splitting / u2 * s * s;
    (emit, survive)
}

pub fn survival_probability(n: usize, t: f64, p: &RabiParams, gp: &GainParams) -> Result<f64> {
    let b = SubspaceBloch::new(n + 1, p, gp, SpinBranch::Minus)?;
    Ok(emission_from_bloch(&b, gp, t).1)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockadePoint {
    pub n: usize,
    /// Probability of emitting photon `n+1`.
    pub probability: f64,
}

/// Emission probability against photon number for `n = 0..n_max`.
pub fn blockade_profile(p: &RabiParams, gp: &GainParams, t: f64, n_max: usize) -> Result<Vec<BlockadePoint>> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(invalid("t", "must be finite and >= 0"));
    }
    let s = spectrum::branch_splittings(n_max + 1, p)?;
    let profile = (0..n_max)
        .map(|n| {
            let m = n + 1;
            let half = 0.5 * p.omega * (gp.delta - 0.5 * (s[m - 1] - s[m]));
            let b = SubspaceBloch {
                m,
                shift: 0.0,
                half_splitting: half,
                rabi: (half * half + m as f64 * gp.epsilon * gp.epsilon).sqrt(),
            };
            BlockadePoint { n, probability: emission_from_bloch(&b, gp, t).0 }
        })
        .collect();
    Ok(profile)
}
