//! Analytic DSC ladder of the generalized Rabi model.
//!
//! Energies are returned in units of ħω. Level `n` of branch `σ` sits at
//! `n + σ s_n / 2`, where `s_n = sgn(D_n) √(D_n² + (λ/ω)²)` (with `ω₀ = ω`)
//! is the signed spin splitting and `D_n = e^{-2g²} L_n(4g²)`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Parameters of `½(ω₀σz + λσx) + ω a†a + gω σx(a + a†)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RabiParams {
    pub omega: f64,
    pub omega0: f64,
    pub lambda: f64,
    /// Dimensionless coupling g̃/ω.
    pub g: f64,
}

impl RabiParams {
    /// Resonant qubit, no bias, ω = 1.
    pub fn new(g: f64) -> Result<Self> {
        Self { omega: 1.0, omega0: 1.0, lambda: 0.0, g }.validated()
    }

    pub fn with_lambda(mut self, lambda: f64) -> Result<Self> {
        self.lambda = lambda;
        self.validated()
    }

    pub fn validated(self) -> Result<Self> {
        if !(self.omega.is_finite() && self.omega > 0.0) {
            return Err(invalid("omega", format!("must be finite and > 0, got {}", self.omega)));
        }
        if !(self.omega0.is_finite() && self.omega0 >= 0.0) {
            return Err(invalid("omega0", format!("must be finite and >= 0, got {}", self.omega0)));
        }
        if !(self.g.is_finite() && self.g >= 0.0) {
            return Err(invalid("g", format!("must be finite and >= 0, got {}", self.g)));
        }
        if !(self.lambda.is_finite() && self.lambda >= 0.0) {
            return Err(invalid("lambda", format!("must be finite and >= 0, got {}", self.lambda)));
        }
        Ok(self)
    }

    /// Dimensional coupling g̃ = gω.
    pub fn coupling(&self) -> f64 {
        self.g * self.omega
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SpinBranch {
    Minus,
    Plus,
}

impl SpinBranch {
    pub const BOTH: [SpinBranch; 2] = [SpinBranch::Minus, SpinBranch::Plus];

    pub fn sign(self) -> f64 {
        match self {
            SpinBranch::Plus => 1.0,
            SpinBranch::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            SpinBranch::Plus => SpinBranch::Minus,
            SpinBranch::Minus => SpinBranch::Plus,
        }
    }

    pub fn from_sign(s: i32) -> Option<Self> {
        match s {
            1 => Some(SpinBranch::Plus),
            -1 => Some(SpinBranch::Minus),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumLevel {
    pub n: usize,
    pub sigma: SpinBranch,
    pub energy: f64,
    /// `E_{n+1,σ} − E_{n,σ}`.
    pub gap: f64,
}

/// Levels sorted by `(sigma, n)`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SpectrumTable {
    pub levels: Vec<SpectrumLevel>,
}

impl SpectrumTable {
    pub fn branch(&self, sigma: SpinBranch) -> impl Iterator<Item = &SpectrumLevel> {
        self.levels.iter().filter(move |l| l.sigma == sigma)
    }
}

/// A real number stored as sign and natural-log magnitude.
///
/// Zero has `sign == 0.0` and `log_abs == -inf`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogReal {
    pub sign: f64,
    pub log_abs: f64,
}

impl LogReal {
    pub const ZERO: LogReal = LogReal { sign: 0.0, log_abs: f64::NEG_INFINITY };

    fn from_scaled(mantissa: f64, log_scale: f64) -> Self {
        if mantissa == 0.0 {
            Self::ZERO
        } else {
            LogReal { sign: mantissa.signum(), log_abs: mantissa.abs().ln() + log_scale }
        }
    }

    /// Nearest `f64`; underflows to zero below the subnormal range.
    pub fn value(self) -> f64 {
        if self.sign == 0.0 {
            0.0
        } else {
            self.sign * self.log_abs.exp()
        }
    }
}

const RESCALE_HIGH: f64 = 1e100;
const RESCALE_LOW: f64 = 1e-100;

/// `e^{log_prefactor} L_k(x)` for `k = 0..=n_max`, plus a running absolute
/// rounding-error bound in the same units.
fn scaled_laguerre(n_max: usize, x: f64, log_prefactor: f64) -> (Vec<LogReal>, Vec<f64>) {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut bounds = Vec::with_capacity(n_max + 1);
    let mut scale = log_prefactor;
    let mut prev = 0.0_f64;
    let mut cur = 1.0_f64;
    let mut peak_log = log_prefactor;
    out.push(LogReal::from_scaled(cur, scale));
    bounds.push(f64::EPSILON * log_prefactor.exp());
    for k in 0..n_max {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
        let mag = cur.abs().max(prev.abs());
        if mag > RESCALE_HIGH || (mag < RESCALE_LOW && mag > 0.0) {
            prev /= mag;
            cur /= mag;
            scale += mag.ln();
        }
        let v = LogReal::from_scaled(cur, scale);
        if v.log_abs > peak_log {
            peak_log = v.log_abs;
        }
        out.push(v);
        // Neutral stability: errors accumulate at most linearly in k.
        bounds.push(4.0 * (kf + 2.0) * f64::EPSILON * peak_log.exp());
    }
    (out, bounds)
}

/// `L_n(x)` by the three-term recurrence.
pub fn laguerre(n: usize, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(invalid("x", format!("must be finite, got {x}")));
    }
    // Plain recurrence while it stays comfortably inside double range.
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * cur - kf * prev) / (kf + 1.0);
        (prev, cur) = (cur, next);
        if !(cur.abs() < 1e300) {
            break;
        }
    }
    if cur.abs() < 1e300 {
        return Ok(cur);
    }
    let (vals, _) = scaled_laguerre(n, x, 0.0);
    let v = vals[n];
    if v.log_abs > f64::MAX.ln() {
        return Err(Error::Overflow { n, x });
    }
    Ok(v.value())
}

/// Absolute accuracy demanded of [`displacement_diagonal`].
pub const DEFAULT_DN_TOLERANCE: f64 = 1e-9;

fn check_g(g: f64) -> Result<()> {
    if g.is_finite() && g >= 0.0 {
        Ok(())
    } else {
        Err(invalid("g", format!("must be finite and >= 0, got {g}")))
    }
}

/// `D_n = e^{-2g²} L_n(4g²)` in sign/log-magnitude form.
pub fn displacement_diagonal_log(n: usize, g: f64) -> Result<LogReal> {
    check_g(g)?;
    let x = 4.0 * g * g;
    Ok(scaled_laguerre(n, x, -x / 2.0).0[n])
}

/// `D_n = ⟨n|D(2g)|n⟩`, refusing results whose error bound exceeds `tol`.
pub fn displacement_diagonal_with_tolerance(n: usize, g: f64, tol: f64) -> Result<f64> {
    check_g(g)?;
    let x = 4.0 * g * g;
    let (vals, bounds) = scaled_laguerre(n, x, -x / 2.0);
    if bounds[n] > tol {
        return Err(Error::Precision { n, g, requested: tol, bound: bounds[n] });
    }
    Ok(vals[n].value())
}

pub fn displacement_diagonal(n: usize, g: f64) -> Result<f64> {
    displacement_diagonal_with_tolerance(n, g, DEFAULT_DN_TOLERANCE)
}

/// `D_0..=D_{n_max}` from a single recurrence pass.
pub fn displacement_diagonals(n_max: usize, g: f64) -> Result<Vec<f64>> {
    check_g(g)?;
    let x = 4.0 * g * g;
    let (vals, bounds) = scaled_laguerre(n_max, x, -x / 2.0);
    if bounds[n_max] > DEFAULT_DN_TOLERANCE {
        return Err(Error::Precision {
            n: n_max,
            g,
            requested: DEFAULT_DN_TOLERANCE,
            bound: bounds[n_max],
        });
    }
    Ok(vals.into_iter().map(LogReal::value).collect())
}

fn signed_splitting(d: f64, p: &RabiParams) -> f64 {
    let s = p.omega0 * d;
    let mag = s.hypot(p.lambda) / p.omega;
    if s < 0.0 {
        -mag
    } else {
        mag
    }
}

/// Signed spin splitting `s_n` in units of ω.
///
/// Equals `(ω₀/ω) D_n` at λ = 0; the sign of `D_n` is kept when λ > 0 so that
/// branch labels stay continuous with the unbiased ladder.
pub fn branch_splitting(n: usize, p: &RabiParams) -> Result<f64> {
    Ok(signed_splitting(displacement_diagonal(n, p.g)?, p))
}

/// `s_0..=s_{n_max}`.
pub fn branch_splittings(n_max: usize, p: &RabiParams) -> Result<Vec<f64>> {
    Ok(displacement_diagonals(n_max, p.g)?.into_iter().map(|d| signed_splitting(d, p)).collect())
}

/// `E_{nσ}` in units of ħω.
pub fn energy(n: usize, sigma: SpinBranch, p: &RabiParams) -> Result<f64> {
    Ok(n as f64 + 0.5 * sigma.sign() * branch_splitting(n, p)?)
}

/// One branch of the ladder for `n = 0..n_max`.
pub fn excitation_gaps(sigma: SpinBranch, p: &RabiParams, n_max: usize) -> Result<SpectrumTable> {
    if n_max < 1 {
        return Err(invalid("n_max", "must be >= 1"));
    }
    let s = branch_splittings(n_max, p)?;
    let e = |n: usize| n as f64 + 0.5 * sigma.sign() * s[n];
    let levels = (0..n_max)
        .map(|n| SpectrumLevel { n, sigma, energy: e(n), gap: e(n + 1) - e(n) })
        .collect();
    Ok(SpectrumTable { levels })
}

/// Both branches, `Minus` first.
pub fn spectrum_table(p: &RabiParams, n_max: usize) -> Result<SpectrumTable> {
    let mut levels = excitation_gaps(SpinBranch::Minus, p, n_max)?.levels;
    levels.extend(excitation_gaps(SpinBranch::Plus, p, n_max)?.levels);
    Ok(SpectrumTable { levels })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalOptions {
    /// Relative gap deviation that marks the end of the harmonic ladder.
    pub threshold: f64,
    /// Largest `|ω₀ D_n|/ω` for which the first-order ladder is trusted.
    pub validity: f64,
    pub ceiling: usize,
}

impl Default for CriticalOptions {
    fn default() -> Self {
        CriticalOptions { threshold: 0.01, validity: 0.5, ceiling: 100_000 }
    }
}

/// Estimator of the critical photon number on the σ = −1 ladder.
///
/// Returns the first `n` whose gap deviates from ω by more than
/// `opts.threshold`, or whose splitting is large enough (`opts.validity`) that
/// branches of neighbouring `n` interleave and the harmonic ladder does not
/// exist at all. The second test is what makes weak coupling anharmonic from
/// the first photon.
pub fn critical_photon_number_with(p: &RabiParams, opts: &CriticalOptions) -> Result<usize> {
    if !(p.g > 0.0) {
        return Err(invalid("g", "critical photon number needs g > 0"));
    }
    // Chunked so the scan does not pay for `ceiling` levels when n_c is small.
    let mut chunk = 64usize.max((8.0 * p.g * p.g) as usize);
    loop {
        let top = chunk.min(opts.ceiling);
        let s = branch_splittings(top, p)?;
        for n in 0..top {
            let gap = 1.0 - 0.5 * (s[n + 1] - s[n]);
            if (gap - 1.0).abs() > opts.threshold || s[n].abs() > opts.validity {
                return Ok(n);
            }
        }
        if top == opts.ceiling {
            return Err(Error::NoCriticalNumber { ceiling: opts.ceiling });
        }
        chunk *= 4;
    }
}

pub fn critical_photon_number(p: &RabiParams) -> Result<usize> {
    critical_photon_number_with(p, &CriticalOptions::default())
}

/// `θ_n = atan2(ω₀D_n, λ)` folded into `[0, π)`.
pub fn mixing_angle(n: usize, p: &RabiParams) -> Result<f64> {
    let d = displacement_diagonal(n, p.g)?;
    Ok(fold_angle((p.omega0 * d).atan2(p.lambda)))
}

fn fold_angle(theta: f64) -> f64 {
    if theta < 0.0 {
        theta + std::f64::consts::PI
    } else if theta >= std::f64::consts::PI {
        theta - std::f64::consts::PI
    } else {
        theta
    }
}

/// Which quadrature the matrix element refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Quadrature {
    /// `a + a†`
    Bare,
    /// `b + b†` with `b = a + gσx`
    Displaced,
}

/// `⟨n′σ′|X|nσ⟩` between first-order DSC eigenstates.
pub fn matrix_element_x(
    n_prime: usize,
    sigma_prime: SpinBranch,
    n: usize,
    sigma: SpinBranch,
    p: &RabiParams,
    op: Quadrature,
) -> Result<f64> {
    if n_prime != n {
        let ladder = if sigma_prime != sigma {
            0.0
        } else if n_prime + 1 == n {
            (n as f64).sqrt()
        } else if n_prime == n + 1 {
            (n_prime as f64).sqrt()
        } else {
            0.0
        };
        return Ok(ladder);
    }
    if op == Quadrature::Displaced {
        return Ok(0.0);
    }
    let two_g = 2.0 * p.g;
    if p.lambda == 0.0 {
        return Ok(if sigma_prime == sigma { 0.0 } else { -two_g });
    }
    let theta = mixing_angle(n, p)?;
    Ok(match (sigma_prime, sigma) {
        (SpinBranch::Plus, SpinBranch::Plus) => -two_g * theta.cos(),
        (SpinBranch::Minus, SpinBranch::Minus) => two_g * theta.cos(),
        _ => -two_g * theta.sin(),
    })
}
