//! Matrix-free Lindblad superoperator on emitter ⊗ Rabi-eigenbasis states.
//!
//! The system index is `e * K + k` with `e = 0` the excited emitter and `k` a
//! Rabi eigenstate. Every operator is real, so a density matrix is carried as
//! separate real and imaginary parts and `L` never forms complex products.

use nalgebra::{DMatrix, DMatrixView, DMatrixViewMut};
use num_complex::Complex64;

/// Rates and operators of one Liouvillian, `K` Rabi levels per emitter state.
#[derive(Clone, Debug)]
pub struct Superoperator {
    pub k: usize,
    /// Diagonal of the uncoupled Hamiltonian, length `2K`.
    pub energies: Vec<f64>,
    /// Block `(e, g)` of the emitter coupling; block `(g, e)` is its transpose.
    pub coupling_eg: DMatrix<f64>,
    pub pump: f64,
    pub decay: f64,
    pub kappa: f64,
    /// Strictly lowering cavity jump in the Rabi eigenbasis.
    pub jump: DMatrix<f64>,
    jump_t: DMatrix<f64>,
    jump_tj: DMatrix<f64>,
    coupling_ge: DMatrix<f64>,
}

fn block(m: &DMatrix<f64>, a: usize, b: usize, k: usize) -> DMatrixView<'_, f64> {
    m.view((a * k, b * k), (k, k))
}

fn block_mut(m: &mut DMatrix<f64>, a: usize, b: usize, k: usize) -> DMatrixViewMut<'_, f64> {
    m.view_mut((a * k, b * k), (k, k))
}

impl Superoperator {
    pub fn new(energies: Vec<f64>, coupling_eg: DMatrix<f64>, jump: DMatrix<f64>, pump: f64, decay: f64, kappa: f64) -> Self {
        let k = jump.nrows();
        assert_eq!(energies.len(), 2 * k);
        let jump_t = jump.transpose();
        let jump_tj = &jump_t * &jump;
        let coupling_ge = coupling_eg.transpose();
        Superoperator { k, energies, coupling_eg, pump, decay, kappa, jump, jump_t, jump_tj, coupling_ge }
    }

    pub fn dim(&self) -> usize {
        2 * self.k
    }

    /// `[H, X]` for real `X`.
    fn commutator(&self, x: &DMatrix<f64>, out: &mut DMatrix<f64>) {
        let k = self.k;
        let h = &self.energies;
        for j in 0..2 * k {
            for i in 0..2 * k {
                out[(i, j)] = (h[i] - h[j]) * x[(i, j)];
            }
        }
        for b in 0..2 {
            // (Hc X)_{e,b} = C_eg X_{g,b}; (Hc X)_{g,b} = C_ge X_{e,b}
            block_mut(out, 0, b, k).gemm(1.0, &self.coupling_eg, &block(x, 1, b, k), 1.0);
            block_mut(out, 1, b, k).gemm(1.0, &self.coupling_ge, &block(x, 0, b, k), 1.0);
        }
        for a in 0..2 {
            // (X Hc)_{a,e} = X_{a,g} C_ge; (X Hc)_{a,g} = X_{a,e} C_eg
            block_mut(out, a, 0, k).gemm(-1.0, &block(x, a, 1, k), &self.coupling_ge, 1.0);
            block_mut(out, a, 1, k).gemm(-1.0, &block(x, a, 0, k), &self.coupling_eg, 1.0);
        }
    }

    /// Adds `Σ rate (O X Oᵀ − ½{OᵀO, X})` to `out`.
    fn dissipate(&self, x: &DMatrix<f64>, out: &mut DMatrix<f64>, scratch: &mut DMatrix<f64>) {
        let k = self.k;
        for a in 0..2 {
            for b in 0..2 {
                let mut w = 0.0;
                if a == 1 {
                    w += 0.5 * self.pump;
                }
                if b == 1 {
                    w += 0.5 * self.pump;
                }
                if a == 0 {
                    w += 0.5 * self.decay;
                }
                if b == 0 {
                    w += 0.5 * self.decay;
                }
                let mut ob = block_mut(out, a, b, k);
                ob -= block(x, a, b, k) * w;
            }
        }
        {
            let mut ee = block_mut(out, 0, 0, k);
            ee += block(x, 1, 1, k) * self.pump;
        }
        {
            let mut gg = block_mut(out, 1, 1, k);
            gg += block(x, 0, 0, k) * self.decay;
        }
        if self.kappa == 0.0 {
            return;
        }
        let kap = self.kappa;
        for a in 0..2 {
            for b in 0..2 {
                let xb = block(x, a, b, k);
                let mut tmp = scratch.view_mut((0, 0), (k, k));
                tmp.gemm(1.0, &self.jump, &xb, 0.0);
                let mut ob = block_mut(out, a, b, k);
                ob.gemm(kap, &tmp, &self.jump_t, 1.0);
                ob.gemm(-0.5 * kap, &self.jump_tj, &xb, 1.0);
                ob.gemm(-0.5 * kap, &xb, &self.jump_tj, 1.0);
            }
        }
    }

    /// `L(X_re + i X_im)` as `(re, im)`.
    pub fn apply_parts(&self, re: &DMatrix<f64>, im: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
        let d = self.dim();
        let mut scratch = DMatrix::zeros(self.k, self.k);
        let mut out_re = DMatrix::zeros(d, d);
        let mut out_im = DMatrix::zeros(d, d);
        // −i[H, X] = [H, X_im] − i[H, X_re]
        self.commutator(im, &mut out_re);
        self.commutator(re, &mut out_im);
        out_im.neg_mut();
        self.dissipate(re, &mut out_re, &mut scratch);
        self.dissipate(im, &mut out_im, &mut scratch);
        (out_re, out_im)
    }

    /// `L` on a row-major vectorized density matrix, `v[i·d + j] = ρ_ij`.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let d = self.dim();
        let re = DMatrix::from_fn(d, d, |i, j| v[i * d + j].re);
        let im = DMatrix::from_fn(d, d, |i, j| v[i * d + j].im);
        let (yr, yi) = self.apply_parts(&re, &im);
        let mut out = vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..d {
            for j in 0..d {
                out[i * d + j] = Complex64::new(yr[(i, j)], yi[(i, j)]);
            }
        }
        out
    }

    /// Diagonal element `⟨E_ij| L |E_ij⟩`.
    pub fn diagonal(&self, i: usize, j: usize) -> Complex64 {
        let k = self.k;
        let (a, kk) = (i / k, i % k);
        let (b, ll) = (j / k, j % k);
        let mut w = 0.0;
        for (side, _) in [(a, kk), (b, ll)] {
            w -= if side == 1 { 0.5 * self.pump } else { 0.5 * self.decay };
        }
        w += self.kappa * (self.jump[(kk, kk)] * self.jump[(ll, ll)] - 0.5 * (self.jump_tj[(kk, kk)] + self.jump_tj[(ll, ll)]));
        Complex64::new(w, -(self.energies[i] - self.energies[j]))
    }
}
