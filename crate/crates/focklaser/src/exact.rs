//! Exact diagonalization of the generalized Rabi Hamiltonian in a truncated
//! Fock basis.
//!
//! Composite index is `q * n_fock + n`; the qubit index varies slowest and
//! `q = 0` is the σz = +1 state. Every operator here is real in that basis, so
//! matrices are stored as `f64`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::spectrum::{self, RabiParams, SpinBranch};

/// Energies closer than this (in units of ω) are treated as degenerate.
pub const DEGENERACY_TOLERANCE: f64 = 1e-10;
pub const DEFAULT_LABEL_THRESHOLD: f64 = 0.7;
/// Probability allowed in the top [`TAIL_LEVELS`] Fock levels of a used state.
pub const TAIL_TOLERANCE: f64 = 1e-8;
pub const TAIL_LEVELS: usize = 5;
/// Largest norm a labelling template may lose to the truncation.
pub const TEMPLATE_LOSS: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncatedBasis {
    pub n_fock: usize,
}

impl TruncatedBasis {
    pub const QUBIT_DIM: usize = 2;

    pub fn new(n_fock: usize) -> Result<Self> {
        if n_fock < 2 {
            return Err(invalid("n_fock", "must be >= 2"));
        }
        Ok(TruncatedBasis { n_fock })
    }

    /// Smallest basis obeying the support rule at coupling `g`.
    pub fn for_coupling(g: f64) -> Self {
        TruncatedBasis { n_fock: support_requirement(g) }
    }

    pub fn dim(&self) -> usize {
        Self::QUBIT_DIM * self.n_fock
    }

    pub fn index(&self, q: usize, n: usize) -> usize {
        debug_assert!(q < 2 && n < self.n_fock);
        q * self.n_fock + n
    }

    pub fn check_support(&self, g: f64) -> Result<()> {
        let required = support_requirement(g);
        if self.n_fock < required {
            return Err(Error::SupportRule { n_fock: self.n_fock, g, required });
        }
        Ok(())
    }
}

/// `⌈4g² + 10·2g + 20⌉`: room for a displacement of 2g plus a Poisson tail.
pub fn support_requirement(g: f64) -> usize {
    (4.0 * g * g + 20.0 * g + 20.0).ceil() as usize
}

/// Real square matrix tagged with the basis it acts on.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    pub matrix: DMatrix<f64>,
    pub n_fock: usize,
    /// 1 for a bare oscillator, 2 for the qubit ⊗ oscillator space.
    pub qubit_dim: usize,
}

impl DenseOperator {
    pub fn new(matrix: DMatrix<f64>, n_fock: usize, qubit_dim: usize) -> Result<Self> {
        let d = qubit_dim * n_fock;
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(invalid(
                "matrix",
                format!("expected {d}x{d}, got {}x{}", matrix.nrows(), matrix.ncols()),
            ));
        }
        Ok(DenseOperator { matrix, n_fock, qubit_dim })
    }

    /// As [`DenseOperator::new`], additionally requiring `max|M − Mᵀ| < 1e-12`.
    pub fn hermitian(matrix: DMatrix<f64>, n_fock: usize, qubit_dim: usize) -> Result<Self> {
        let op = Self::new(matrix, n_fock, qubit_dim)?;
        let asym = op.hermiticity_defect();
        if asym >= 1e-12 {
            return Err(invalid("matrix", format!("not Hermitian: max |M - M†| = {asym:e}")));
        }
        Ok(op)
    }

    pub fn hermiticity_defect(&self) -> f64 {
        (&self.matrix - self.matrix.transpose()).amax()
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

pub fn annihilation(n_fock: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n_fock, n_fock, |i, j| if j == i + 1 { (j as f64).sqrt() } else { 0.0 })
}

/// `a + a†` on the bare oscillator: real symmetric tridiagonal.
pub fn quadrature(n_fock: usize) -> DMatrix<f64> {
    let a = annihilation(n_fock);
    &a + a.transpose()
}

pub fn sigma_x() -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0])
}

pub fn sigma_z() -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0])
}

/// Embeds qubit and oscillator factors with the qubit index slowest.
pub fn qubit_oscillator(qubit: &DMatrix<f64>, osc: &DMatrix<f64>) -> DMatrix<f64> {
    qubit.kronecker(osc)
}

fn identity(n: usize) -> DMatrix<f64> {
    DMatrix::identity(n, n)
}

/// `b = a + gσx`.
pub fn displaced_annihilation(g: f64, basis: TruncatedBasis) -> DenseOperator {
    let nf = basis.n_fock;
    let m = qubit_oscillator(&identity(2), &annihilation(nf)) + qubit_oscillator(&sigma_x(), &identity(nf)) * g;
    DenseOperator { matrix: m, n_fock: nf, qubit_dim: 2 }
}

/// `a + a†` on the composite space.
pub fn bare_quadrature(basis: TruncatedBasis) -> DenseOperator {
    let nf = basis.n_fock;
    DenseOperator { matrix: qubit_oscillator(&identity(2), &quadrature(nf)), n_fock: nf, qubit_dim: 2 }
}

/// `b + b† = a + a† + 2gσx`.
pub fn displaced_quadrature(g: f64, basis: TruncatedBasis) -> DenseOperator {
    let mut op = bare_quadrature(basis);
    op.matrix += qubit_oscillator(&sigma_x(), &identity(basis.n_fock)) * (2.0 * g);
    op
}

pub fn build_rabi(p: &RabiParams, basis: TruncatedBasis) -> Result<DenseOperator> {
    p.validated()?;
    basis.check_support(p.g)?;
    Ok(build_rabi_unchecked(p, basis))
}

/// [`build_rabi`] without the support rule, for callers that validate the
/// truncation post hoc.
pub fn build_rabi_unchecked(p: &RabiParams, basis: TruncatedBasis) -> DenseOperator {
    let nf = basis.n_fock;
    let i2 = identity(2);
    let number = DMatrix::from_diagonal(&DVector::from_fn(nf, |n, _| n as f64));
    let mut h = qubit_oscillator(&sigma_z(), &identity(nf)) * (0.5 * p.omega0);
    h += qubit_oscillator(&sigma_x(), &identity(nf)) * (0.5 * p.lambda);
    h += qubit_oscillator(&i2, &number) * p.omega;
    h += qubit_oscillator(&sigma_x(), &quadrature(nf)) * p.coupling();
    DenseOperator { matrix: h, n_fock: nf, qubit_dim: 2 }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateLabel {
    pub n: usize,
    pub sigma: SpinBranch,
    /// Squared overlap with the analytic state.
    pub overlap: f64,
}

#[derive(Clone, Debug)]
pub struct EigenSystem {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `k` belongs to `values[k]`.
    pub vectors: DMatrix<f64>,
    pub labels: Vec<Option<StateLabel>>,
    pub n_fock: usize,
    pub qubit_dim: usize,
}

impl EigenSystem {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Index of the eigenvector carrying `(n, σ)`.
    pub fn find_label(&self, n: usize, sigma: SpinBranch) -> Option<usize> {
        self.labels.iter().position(|l| matches!(l, Some(l) if l.n == n && l.sigma == sigma))
    }

    /// Largest `max |VᵀV − I|`.
    pub fn orthonormality_defect(&self) -> f64 {
        let k = self.vectors.ncols();
        (self.vectors.transpose() * &self.vectors - DMatrix::identity(k, k)).amax()
    }

    /// Probability in the top `levels` Fock states of eigenvector `k`.
    pub fn tail_mass(&self, k: usize, levels: usize) -> f64 {
        let nf = self.n_fock;
        let v = self.vectors.column(k);
        (0..self.qubit_dim)
            .flat_map(|q| (nf.saturating_sub(levels)..nf).map(move |n| q * nf + n))
            .map(|i| v[i] * v[i])
            .sum()
    }
}

/// Full eigendecomposition with ascending eigenvalues and a residual check.
pub fn diagonalize(op: &DenseOperator) -> Result<EigenSystem> {
    let eig = SymmetricEigen::new(op.matrix.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(op.dim(), order.len(), |i, c| eig.eigenvectors[(i, order[c])]);
    let scale = op.matrix.norm().max(f64::MIN_POSITIVE);
    let resid = &op.matrix * &vectors - &vectors * DMatrix::from_diagonal(&DVector::from_vec(values.clone()));
    for (k, col) in resid.column_iter().enumerate() {
        let r = col.norm();
        if r >= 1e-9 * scale {
            return Err(Error::NonConvergence(format!("eigenpair {k} residual {r:e}")));
        }
    }
    Ok(EigenSystem { labels: vec![None; values.len()], values, vectors, n_fock: op.n_fock, qubit_dim: op.qubit_dim })
}

/// Real orthogonal `D(z) = exp(z(a† − a))` on `n_fock` levels.
///
/// Uses `a† − a = i U† X U` with `U = diag(iⁿ)` and `X = a + a†`, so only the
/// real tridiagonal `X` is diagonalized.
pub fn displacement_matrix(z: f64, n_fock: usize) -> DMatrix<f64> {
    let eig = SymmetricEigen::new(quadrature(n_fock));
    let v = &eig.eigenvectors;
    let scaled = |f: fn(f64) -> f64| {
        let mut w = v.clone();
        for (k, mut col) in w.column_iter_mut().enumerate() {
            col *= f(z * eig.eigenvalues[k]);
        }
        &w * v.transpose()
    };
    let c = scaled(f64::cos);
    let s = scaled(f64::sin);
    // D_mn = i^{n-m} (C + iS)_mn, which is real by construction.
    DMatrix::from_fn(n_fock, n_fock, |m, n| {
        let k = (n as i64 - m as i64).rem_euclid(4);
        match k {
            0 => c[(m, n)],
            1 => -s[(m, n)],
            2 => -c[(m, n)],
            _ => s[(m, n)],
        }
    })
}

fn fock_tail(v: &DVector<f64>, levels: usize) -> f64 {
    let n = v.len();
    v.rows(n.saturating_sub(levels), levels.min(n)).norm_squared()
}

/// `D†(z)|n⟩`, rejected if more than 1e-6 of it sits at the truncation edge.
pub fn displaced_fock(n: usize, z: f64, n_fock: usize) -> Result<DVector<f64>> {
    if n >= n_fock {
        return Err(invalid("n", format!("Fock level {n} outside truncation {n_fock}")));
    }
    let d = displacement_matrix(z, n_fock);
    // D†(z) = D(z)ᵀ, so D†(z)|n⟩ is row n of D(z).
    let v: DVector<f64> = d.row(n).transpose();
    let lost = fock_tail(&v, TAIL_LEVELS);
    if lost > 1e-6 {
        return Err(Error::TruncationLoss { lost });
    }
    Ok(v)
}

/// Analytic first-order eigenstate `|nσ⟩` on the composite basis.
///
/// `cos(θ/2)|+x⟩D†(g)|n⟩ + sin(θ/2)|−x⟩D(g)|n⟩` for σ = +1 and the orthogonal
/// combination for σ = −1; `dg` is `D(g)` on the same truncation.
fn analytic_state(n: usize, sigma: SpinBranch, theta: f64, dg: &DMatrix<f64>) -> DVector<f64> {
    let nf = dg.nrows();
    let (ca, cb) = match sigma {
        SpinBranch::Plus => ((theta / 2.0).cos(), (theta / 2.0).sin()),
        SpinBranch::Minus => ((theta / 2.0).sin(), -(theta / 2.0).cos()),
    };
    let va = dg.row(n).transpose();
    let vb = dg.column(n).into_owned();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = DVector::zeros(2 * nf);
    out.rows_mut(0, nf).copy_from(&((&va * ca + &vb * cb) * r));
    out.rows_mut(nf, nf).copy_from(&((&va * ca - &vb * cb) * r));
    out
}

/// Analytic states `(n, σ)` whose photonic factor keeps all but
/// [`TEMPLATE_LOSS`] of its norm inside the truncation, in the order
/// `(0,−), (0,+), (1,−), …`. Each is built on a padded basis, cut back and
/// renormalized, so the edge of the truncation does not distort it.
pub fn analytic_states(p: &RabiParams, basis: TruncatedBasis) -> Result<Vec<(usize, SpinBranch, DVector<f64>)>> {
    let nf = basis.n_fock;
    let padded = nf + support_requirement(p.g);
    let dg = displacement_matrix(p.g, padded);
    let mut out = Vec::new();
    for n in 0..nf {
        let kept: f64 = (0..nf).map(|m| 0.5 * (dg[(n, m)].powi(2) + dg[(m, n)].powi(2))).sum();
        if 1.0 - kept > TEMPLATE_LOSS {
            break;
        }
        let theta = spectrum::mixing_angle(n, p)?;
        for sigma in SpinBranch::BOTH {
            let full = analytic_state(n, sigma, theta, &dg);
            let mut v = DVector::zeros(2 * nf);
            v.rows_mut(0, nf).copy_from(&full.rows(0, nf));
            v.rows_mut(nf, nf).copy_from(&full.rows(padded, nf));
            let norm = v.norm();
            out.push((n, sigma, v / norm));
        }
    }
    Ok(out)
}

/// Assigns `(n, σ)` labels by maximal squared overlap with the analytic
/// states, one-to-one, keeping only overlaps `≥ threshold`.
pub fn label_eigenstates_with(
    mut es: EigenSystem,
    p: &RabiParams,
    basis: TruncatedBasis,
    threshold: f64,
) -> Result<EigenSystem> {
    if es.qubit_dim != 2 || es.n_fock != basis.n_fock {
        return Err(invalid("es", "eigen system does not live on the given composite basis"));
    }
    let templates = analytic_states(p, basis)?;
    let mut candidates = Vec::new();
    for (t, (_, _, tv)) in templates.iter().enumerate() {
        let row = tv.transpose() * &es.vectors;
        for (k, &o) in row.iter().enumerate() {
            let f = o * o;
            if f >= threshold {
                candidates.push((f, t, k));
            }
        }
    }
    candidates.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut used_t = vec![false; templates.len()];
    es.labels = vec![None; es.values.len()];
    for (f, t, k) in candidates {
        if used_t[t] || es.labels[k].is_some() {
            continue;
        }
        used_t[t] = true;
        let (n, sigma, _) = templates[t];
        es.labels[k] = Some(StateLabel { n, sigma, overlap: f });
    }
    Ok(es)
}

pub fn label_eigenstates(es: EigenSystem, p: &RabiParams, basis: TruncatedBasis) -> Result<EigenSystem> {
    label_eigenstates_with(es, p, basis, DEFAULT_LABEL_THRESHOLD)
}

/// `Vᵀ J V`.
pub fn to_eigenbasis(j: &DenseOperator, es: &EigenSystem) -> DMatrix<f64> {
    es.vectors.transpose() * &j.matrix * &es.vectors
}

/// Strictly energy-lowering part of `J`, expressed in the eigenbasis.
pub fn positive_frequency_eigenbasis(j: &DenseOperator, es: &EigenSystem, tie: f64) -> DMatrix<f64> {
    let mut je = to_eigenbasis(j, es);
    let e = &es.values;
    for m in 0..e.len() {
        for n in 0..e.len() {
            if !(e[m] < e[n] - tie) {
                je[(m, n)] = 0.0;
            }
        }
    }
    je
}

/// `J⁽⁺⁾ = Σ_{E_m < E_n} ⟨m|J|n⟩ |m⟩⟨n|` in the original basis.
pub fn positive_frequency_part(j: &DenseOperator, es: &EigenSystem) -> Result<DenseOperator> {
    if j.dim() != es.vectors.nrows() || es.vectors.ncols() != j.dim() {
        return Err(invalid("es", "eigen system must span the space of J"));
    }
    let jp = positive_frequency_eigenbasis(j, es, DEGENERACY_TOLERANCE);
    DenseOperator::new(&es.vectors * jp * es.vectors.transpose(), j.n_fock, j.qubit_dim)
}
