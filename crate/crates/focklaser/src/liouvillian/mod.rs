//! Lindblad steady state of one pumped emitter inside the Rabi system.
//!
//! The Rabi Hamiltonian is diagonalized once and the emitter is attached in
//! that eigenbasis. Cavity loss acts through the energy-lowering part of the
//! chosen quadrature, so the vacuum of the coupled system is dark.

mod solver;
mod superop;

pub use solver::{gmres, memory_estimate, secular_split, GmresOptions, SecularSplit, DEGENERATE_SPREAD};
pub use superop::Superoperator;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::distribution::PhotonDistribution;
use crate::emission::GainParams;
use crate::error::{invalid, Error, Result};
use crate::exact::{self, EigenSystem, TruncatedBasis, DEGENERACY_TOLERANCE, TAIL_LEVELS};
use crate::spectrum::{Quadrature, RabiParams, SpinBranch};

/// Steady-state weight allowed on Rabi eigenvectors that the truncation does
/// not resolve.
pub const UNRESOLVED_LIMIT: f64 = 1e-6;
/// Edge mass above which a Rabi eigenvector counts as unresolved.
pub const UNRESOLVED_TAIL: f64 = 1e-4;
/// Unlabelled population above which [`Unpolarized::flagged`] is set.
pub const RESIDUE_LIMIT: f64 = 1e-3;
/// Largest accepted `‖Lρ‖/(‖L‖‖ρ‖)`.
pub const RESIDUAL_LIMIT: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiouvillianOptions {
    /// Quadrature the emitter couples to.
    pub interaction: Quadrature,
    /// Quadrature whose lowering part is the cavity jump.
    pub jump: Quadrature,
    /// Keep only the energy-conserving half of the emitter coupling.
    pub rwa: bool,
    /// Levels closer than this (in units of ω) share a secular cluster.
    pub secular_gap: f64,
    pub memory_budget: usize,
    /// Return a degenerate null space instead of failing.
    pub allow_degenerate: bool,
    pub label_threshold: f64,
    #[serde(skip)]
    pub gmres: GmresOptions,
}

impl Default for LiouvillianOptions {
    fn default() -> Self {
        LiouvillianOptions {
            interaction: Quadrature::Displaced,
            jump: Quadrature::Displaced,
            rwa: true,
            secular_gap: 0.3,
            memory_budget: 2 << 30,
            allow_degenerate: false,
            label_threshold: exact::DEFAULT_LABEL_THRESHOLD,
            gmres: GmresOptions::default(),
        }
    }
}

impl LiouvillianOptions {
    fn validated(self) -> Result<Self> {
        if !(self.secular_gap.is_finite() && self.secular_gap > 0.0) {
            return Err(invalid("secular_gap", "must be finite and > 0"));
        }
        if !(self.label_threshold > 0.0 && self.label_threshold <= 1.0) {
            return Err(invalid("label_threshold", "must lie in (0, 1]"));
        }
        if !(self.gmres.tol > 0.0 && self.gmres.restart > 0) {
            return Err(invalid("gmres", "tolerance and restart length must be positive"));
        }
        Ok(self)
    }
}

/// Emitter ⊗ Rabi system in the product eigenbasis; index `e·K + k` with
/// `e = 0` the excited emitter.
#[derive(Clone, Debug)]
pub struct LiouvillianModel {
    pub params: RabiParams,
    pub gain: GainParams,
    pub basis: TruncatedBasis,
    pub options: LiouvillianOptions,
    /// Labelled Rabi eigen system.
    pub rabi: EigenSystem,
    pub superop: Superoperator,
}

fn quadrature_op(q: Quadrature, p: &RabiParams, basis: TruncatedBasis) -> exact::DenseOperator {
    match q {
        Quadrature::Bare => exact::bare_quadrature(basis),
        Quadrature::Displaced => exact::displaced_quadrature(p.g, basis),
    }
}

/// Bytes for the Rabi diagonalization and the superoperator blocks.
fn model_bytes(n_fock: usize) -> usize {
    let k = 2 * n_fock;
    8 * k * k * 12
}

impl LiouvillianModel {
    pub fn new(p: &RabiParams, gp: &GainParams, basis: TruncatedBasis, options: LiouvillianOptions) -> Result<Self> {
        let p = p.validated()?;
        let gp = gp.validated(&p)?;
        let options = options.validated()?;
        let d = 4 * basis.n_fock;
        let floor = model_bytes(basis.n_fock) + memory_estimate(d, d, options.gmres.restart);
        if floor > options.memory_budget {
            return Err(Error::MemoryBudget { needed: floor, budget: options.memory_budget });
        }
        let h = exact::build_rabi_unchecked(&p, basis);
        let es = exact::diagonalize(&h)?;
        let rabi = exact::label_eigenstates_with(es, &p, basis, options.label_threshold)?;
        let x = quadrature_op(options.interaction, &p, basis);
        let coupling = if options.rwa {
            exact::positive_frequency_eigenbasis(&x, &rabi, DEGENERACY_TOLERANCE)
        } else {
            exact::to_eigenbasis(&x, &rabi)
        } * gp.epsilon;
        let j = quadrature_op(options.jump, &p, basis);
        let jump = exact::positive_frequency_eigenbasis(&j, &rabi, DEGENERACY_TOLERANCE);
        let e0 = rabi.values[0];
        let half = 0.5 * p.omega * (1.0 + gp.delta);
        let energies: Vec<f64> = [half, -half]
            .iter()
            .flat_map(|&em| rabi.values.iter().map(move |v| em + v - e0))
            .collect();
        let superop = Superoperator::new(energies, coupling, jump, gp.r, gp.gamma, gp.kappa);
        Ok(LiouvillianModel { params: p, gain: gp, basis, options, rabi, superop })
    }

    /// Number of Rabi levels `K`.
    pub fn levels(&self) -> usize {
        self.superop.k
    }

    pub fn dim(&self) -> usize {
        self.superop.dim()
    }

    /// Dense `d² × d²` matrix of `L` in the row-major vectorization.
    pub fn dense_superoperator(&self) -> Result<DMatrix<Complex64>> {
        let dd = self.dim() * self.dim();
        let needed = dd * dd * std::mem::size_of::<Complex64>();
        if needed > self.options.memory_budget {
            return Err(Error::MemoryBudget { needed, budget: self.options.memory_budget });
        }
        let mut m = DMatrix::zeros(dd, dd);
        let mut e = vec![Complex64::new(0.0, 0.0); dd];
        for c in 0..dd {
            e[c] = Complex64::new(1.0, 0.0);
            for (r, v) in self.superop.apply(&e).into_iter().enumerate() {
                m[(r, c)] = v;
            }
            e[c] = Complex64::new(0.0, 0.0);
        }
        Ok(m)
    }

    /// Trace of `L(X)` for a random-free probe set; zero for a trace-preserving `L`.
    pub fn trace_defect(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for (i, j) in [(0, 0), (0, d - 1), (d / 2, d / 3), (d - 1, d - 1), (1, d / 2 + 1)] {
            let mut e = vec![Complex64::new(0.0, 0.0); d * d];
            e[i * d + j] = Complex64::new(1.0, 0.0);
            let y = self.superop.apply(&e);
            let tr: Complex64 = (0..d).map(|k| y[k * d + k]).sum();
            worst = worst.max(tr.norm());
        }
        worst
    }

    pub fn steady_state(&self) -> Result<SteadyState> {
        let split = secular_split(&self.superop.energies, self.options.secular_gap);
        let d = self.dim();
        let needed = model_bytes(self.basis.n_fock) + memory_estimate(d, split.secular.len(), self.options.gmres.restart);
        if needed > self.options.memory_budget {
            return Err(Error::MemoryBudget { needed, budget: self.options.memory_budget });
        }
        let nv = solver::null_vector(&self.superop, &split, &self.options.gmres)?;
        let degenerate = nv.spread < DEGENERATE_SPREAD;
        if degenerate && !self.options.allow_degenerate {
            return Err(Error::DegenerateNullSpace { spread: nv.spread });
        }
        let residual = solver::relative_residual(&self.superop, &nv.rho, nv.norm_estimate);
        if !(residual < RESIDUAL_LIMIT) {
            return Err(Error::NonConvergence(format!("steady-state residual {residual:e}")));
        }
        let raw = DMatrix::from_fn(d, d, |i, j| nv.rho[i * d + j]);
        let hermiticity_defect = (&raw - raw.adjoint()).iter().map(|c| c.norm()).fold(0.0, f64::max);
        let rho = (&raw + raw.adjoint()) * Complex64::new(0.5, 0.0);
        let trace = rho.trace().re;
        let min_eigenvalue = SymmetricEigen::new(rho.clone()).eigenvalues.min();
        let ss = SteadyState {
            rho,
            residual,
            trace,
            hermiticity_defect,
            min_eigenvalue,
            singular_values: nv.singular_values,
            spread: nv.spread,
            degenerate,
            secular_size: nv.secular_size,
            applications: nv.applications,
        };
        let lost = self.unresolved_weight(&ss);
        if lost > UNRESOLVED_LIMIT {
            return Err(Error::TruncationLoss { lost });
        }
        Ok(ss)
    }

    /// Steady-state weight on Rabi eigenvectors with more than
    /// [`UNRESOLVED_TAIL`] in the top Fock levels.
    pub fn unresolved_weight(&self, ss: &SteadyState) -> f64 {
        let red = reduced_rabi(&ss.rho, self.levels());
        (0..self.levels())
            .filter(|&k| self.rabi.tail_mass(k, TAIL_LEVELS) > UNRESOLVED_TAIL)
            .map(|k| red[(k, k)].re)
            .sum()
    }

    /// Population outside `|g⟩ ⊗ {n = 0 manifold}`.
    pub fn excited_population(&self, ss: &SteadyState) -> f64 {
        let k = self.levels();
        let ground: Vec<usize> = match SpinBranch::BOTH.iter().map(|&s| self.rabi.find_label(0, s)).collect::<Option<Vec<_>>>() {
            Some(v) => v,
            None => vec![0, 1],
        };
        let kept: f64 = ground.iter().map(|&l| ss.rho[(k + l, k + l)].re).sum();
        ss.trace - kept
    }

    pub fn photon_statistics(&self, ss: &SteadyState) -> Result<Unpolarized> {
        extract_unpolarized(&reduced_rabi(&ss.rho, self.levels()), &self.rabi)
    }
}

#[derive(Clone, Debug)]
pub struct SteadyState {
    /// Hermitian part of the solution, product eigenbasis.
    pub rho: DMatrix<Complex64>,
    pub residual: f64,
    pub trace: f64,
    /// `max |ρ − ρ†|` before symmetrizing.
    pub hermiticity_defect: f64,
    pub min_eigenvalue: f64,
    /// Three smallest singular values of the secular Schur complement.
    pub singular_values: Vec<f64>,
    pub spread: f64,
    pub degenerate: bool,
    pub secular_size: usize,
    pub applications: usize,
}

/// Partial trace over the emitter.
pub fn reduced_rabi(rho: &DMatrix<Complex64>, k: usize) -> DMatrix<Complex64> {
    rho.view((0, 0), (k, k)) + rho.view((k, k), (k, k))
}

#[derive(Clone, Debug, Serialize)]
pub struct Unpolarized {
    /// `P(n) = P(n,+) + P(n,−)` over labelled levels, renormalized.
    pub distribution: PhotonDistribution,
    /// `[P(n,−), P(n,+)]` before renormalization.
    pub branches: Vec<[f64; 2]>,
    /// Population on unlabelled eigenvectors.
    pub residue: f64,
    /// Largest coherence between labelled levels of different `n`.
    pub off_diagonal: f64,
    /// `residue >` [`RESIDUE_LIMIT`]: the labels miss a noticeable share.
    pub flagged: bool,
}

/// Photon-number distribution of a Rabi density matrix in the eigenbasis of `es`.
pub fn extract_unpolarized(rho: &DMatrix<Complex64>, es: &EigenSystem) -> Result<Unpolarized> {
    let k = es.len();
    if rho.nrows() != k || rho.ncols() != k {
        return Err(invalid("rho", "dimension does not match the eigen system"));
    }
    let n_top = es.labels.iter().flatten().map(|l| l.n).max();
    let Some(n_top) = n_top else {
        return Err(Error::InvalidState("no eigenvector carries a label".into()));
    };
    let mut branches = vec![[0.0; 2]; n_top + 1];
    let mut residue = 0.0;
    for (i, l) in es.labels.iter().enumerate() {
        let p = rho[(i, i)].re;
        match l {
            Some(l) => branches[l.n][(l.sigma == SpinBranch::Plus) as usize] += p,
            None => residue += p,
        }
    }
    let mut off_diagonal = 0.0f64;
    for (i, li) in es.labels.iter().enumerate() {
        for (j, lj) in es.labels.iter().enumerate() {
            if let (Some(a), Some(b)) = (li, lj) {
                if a.n != b.n {
                    off_diagonal = off_diagonal.max(rho[(i, j)].norm());
                }
            }
        }
    }
    let weights: Vec<f64> = branches.iter().map(|b| (b[0] + b[1]).max(0.0)).collect();
    let distribution = PhotonDistribution::from_weights(weights)?;
    Ok(Unpolarized { distribution, branches, residue, off_diagonal, flagged: residue > RESIDUE_LIMIT })
}
