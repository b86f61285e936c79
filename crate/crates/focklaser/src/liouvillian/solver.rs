//! Null vector of `L` by exact reduction onto the secular block.
//!
//! With `κ ≪ ‖L‖` the bordered full system is too ill-conditioned for an
//! iterative solver to return a positive state. The slow dynamics live on the
//! secular coherences, so `L` is split into secular `S` and non-secular `N`
//! index sets and the Schur complement `L_SS − L_SN L_NN⁻¹ L_NS` is formed
//! column by column. `L_NN` is dominated by its oscillating diagonal, where
//! Jacobi-preconditioned GMRES converges in a handful of steps.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::superop::Superoperator;
use crate::error::{Error, Result};

type C = Complex64;
const ZERO: C = C { re: 0.0, im: 0.0 };

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GmresOptions {
    /// Relative residual `‖b − Ax‖/‖b‖`.
    pub tol: f64,
    pub restart: usize,
    pub max_iter: usize,
}

impl Default for GmresOptions {
    fn default() -> Self {
        GmresOptions { tol: 1e-13, restart: 40, max_iter: 2000 }
    }
}

fn dot(a: &[C], b: &[C]) -> C {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[C]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Restarted GMRES with right preconditioning `A M⁻¹ u = b`, `M⁻¹` diagonal.
/// Returns the solution and the number of operator applications.
pub fn gmres(mut apply: impl FnMut(&[C]) -> Vec<C>, minv: &[C], b: &[C], opts: &GmresOptions) -> Result<(Vec<C>, usize)> {
    let n = b.len();
    let bnorm = norm(b);
    let mut x = vec![ZERO; n];
    if bnorm == 0.0 {
        return Ok((x, 0));
    }
    let m = opts.restart.max(1);
    let mut iters = 0;
    loop {
        let ax = apply(&x);
        let r: Vec<C> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
        let beta = norm(&r);
        if beta <= opts.tol * bnorm {
            return Ok((x, iters));
        }
        if iters >= opts.max_iter {
            return Err(Error::NonConvergence(format!("GMRES stalled at relative residual {:e}", beta / bnorm)));
        }
        let mut basis: Vec<Vec<C>> = vec![r.iter().map(|v| v / beta).collect()];
        let mut h = vec![vec![ZERO; m]; m + 1];
        let mut cs = vec![0.0; m];
        let mut sn = vec![ZERO; m];
        let mut g = vec![ZERO; m + 1];
        g[0] = C::from(beta);
        let mut k = 0;
        for j in 0..m {
            let z: Vec<C> = basis[j].iter().zip(minv).map(|(v, p)| v * p).collect();
            let mut w = apply(&z);
            iters += 1;
            for (i, vi) in basis.iter().enumerate() {
                let hij = dot(vi, &w);
                h[i][j] = hij;
                w.iter_mut().zip(vi).for_each(|(wk, vk)| *wk -= hij * vk);
            }
            let hn = norm(&w);
            h[j + 1][j] = C::from(hn);
            for i in 0..j {
                let (a, bb) = (h[i][j], h[i + 1][j]);
                h[i][j] = cs[i] * a + sn[i] * bb;
                h[i + 1][j] = -sn[i].conj() * a + cs[i] * bb;
            }
            let (a, bb) = (h[j][j], h[j + 1][j]);
            let rr = (a.norm_sqr() + bb.norm_sqr()).sqrt();
            if a.norm() == 0.0 {
                cs[j] = 0.0;
                sn[j] = C::from(1.0);
            } else {
                cs[j] = a.norm() / rr;
                sn[j] = (a / a.norm()) * bb.conj() / rr;
            }
            h[j][j] = cs[j] * a + sn[j] * bb;
            h[j + 1][j] = ZERO;
            g[j + 1] = -sn[j].conj() * g[j];
            g[j] *= cs[j];
            k = j + 1;
            if g[j + 1].norm() <= opts.tol * bnorm || hn == 0.0 || iters >= opts.max_iter {
                break;
            }
            basis.push(w.iter().map(|v| v / hn).collect());
        }
        let mut y = vec![ZERO; k];
        for i in (0..k).rev() {
            let s: C = (i + 1..k).map(|l| h[i][l] * y[l]).sum();
            y[i] = (g[i] - s) / h[i][i];
        }
        let mut u = vec![ZERO; n];
        for (yi, vi) in y.iter().zip(&basis) {
            u.iter_mut().zip(vi).for_each(|(uk, vk)| *uk += yi * vk);
        }
        x.iter_mut().zip(u.iter().zip(minv)).for_each(|(xk, (uk, pk))| *xk += uk * pk);
    }
}

/// Secular and non-secular index sets of the row-major vectorization.
#[derive(Clone, Debug)]
pub struct SecularSplit {
    pub secular: Vec<usize>,
    pub non_secular: Vec<usize>,
    /// Cluster id of each system level.
    pub clusters: Vec<usize>,
}

/// Groups levels whose sorted energies are separated by gaps `≤ gap`.
pub fn secular_split(energies: &[f64], gap: f64) -> SecularSplit {
    let d = energies.len();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| energies[a].total_cmp(&energies[b]));
    let mut clusters = vec![0; d];
    let mut id = 0;
    for w in 1..d {
        if energies[order[w]] - energies[order[w - 1]] > gap {
            id += 1;
        }
        clusters[order[w]] = id;
    }
    let mut secular = Vec::new();
    let mut non_secular = Vec::new();
    for i in 0..d {
        for j in 0..d {
            if clusters[i] == clusters[j] {
                secular.push(i * d + j);
            } else {
                non_secular.push(i * d + j);
            }
        }
    }
    SecularSplit { secular, non_secular, clusters }
}

/// Bytes held at the peak of [`null_vector`].
pub fn memory_estimate(d: usize, n_secular: usize, restart: usize) -> usize {
    let c = std::mem::size_of::<C>();
    // Schur complement, its bordered copy and SVD workspace.
    let schur = 4 * n_secular * n_secular * c;
    // Krylov basis plus a few full-length work vectors.
    let krylov = (restart + 8) * d * d * c;
    schur + krylov
}

#[derive(Clone, Debug)]
pub struct NullVector {
    /// Row-major `ρ`, trace 1.
    pub rho: Vec<C>,
    /// Ascending singular values of the Schur complement.
    pub singular_values: Vec<f64>,
    /// `σ₂/σ_max`; a second near-zero value means the null space is not unique.
    pub spread: f64,
    pub norm_estimate: f64,
    pub applications: usize,
    pub secular_size: usize,
}

/// Relative spread below which the null space counts as degenerate.
pub const DEGENERATE_SPREAD: f64 = 1e-14;

pub fn null_vector(op: &Superoperator, split: &SecularSplit, gm: &GmresOptions) -> Result<NullVector> {
    let d = op.dim();
    let dd = d * d;
    let ns = split.secular.len();
    let minv: Vec<C> = split
        .non_secular
        .iter()
        .map(|&idx| {
            let dg = op.diagonal(idx / d, idx % d);
            if dg.norm() > 0.0 {
                1.0 / dg
            } else {
                C::from(1.0)
            }
        })
        .collect();
    let mut applications = 0usize;
    let embed_n = |y: &[C]| {
        let mut v = vec![ZERO; dd];
        for (k, &idx) in split.non_secular.iter().enumerate() {
            v[idx] = y[k];
        }
        v
    };
    let restrict_n = |v: &[C]| split.non_secular.iter().map(|&idx| v[idx]).collect::<Vec<C>>();
    let solve_nn = |b: &[C], count: &mut usize| -> Result<Vec<C>> {
        let (y, it) = gmres(|y| restrict_n(&op.apply(&embed_n(y))), &minv, b, gm)?;
        *count += it;
        Ok(y)
    };

    let mut schur = DMatrix::<C>::zeros(ns, ns);
    let mut diag_scale = 0.0f64;
    for (s, &idx) in split.secular.iter().enumerate() {
        let mut e = vec![ZERO; dd];
        e[idx] = C::from(1.0);
        let col = op.apply(&e);
        applications += 1;
        diag_scale = diag_scale.max(col[idx].norm());
        let b = restrict_n(&col);
        let correction = if norm(&b) > 0.0 {
            let y = solve_nn(&b, &mut applications)?;
            let t = op.apply(&embed_n(&y));
            applications += 1;
            t
        } else {
            vec![ZERO; dd]
        };
        for (r, &ridx) in split.secular.iter().enumerate() {
            schur[(r, s)] = col[ridx] - correction[ridx];
        }
    }
    let mut sv: Vec<f64> = schur.clone().singular_values().iter().copied().collect();
    sv.sort_by(f64::total_cmp);
    let top = *sv.last().unwrap_or(&0.0);
    let spread = if ns > 1 && top > 0.0 { sv[1] / top } else { f64::INFINITY };
    for &idx in &split.non_secular {
        diag_scale = diag_scale.max(op.diagonal(idx / d, idx % d).norm());
    }
    let norm_estimate = top.max(diag_scale);

    // Border with the trace functional: (S + c·t tᵀ) x = c·t.
    let trace: DVector<C> = DVector::from_iterator(
        ns,
        split.secular.iter().map(|&idx| if idx / d == idx % d { C::from(1.0) } else { ZERO }),
    );
    let c = if top > 0.0 { top / d as f64 } else { 1.0 };
    let bordered = &schur + (&trace * trace.transpose()) * C::from(c);
    let rhs = &trace * C::from(c);
    let xs = bordered
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::SingularBlock("bordered secular block is singular".into()))?;

    let mut full = vec![ZERO; dd];
    for (k, &idx) in split.secular.iter().enumerate() {
        full[idx] = xs[k];
    }
    let lx = op.apply(&full);
    applications += 1;
    let b = restrict_n(&lx);
    let y = solve_nn(&b, &mut applications)?;
    for (k, &idx) in split.non_secular.iter().enumerate() {
        full[idx] = -y[k];
    }
    let tr: C = (0..d).map(|i| full[i * d + i]).sum();
    if tr.norm() == 0.0 {
        return Err(Error::SingularBlock("steady state has zero trace".into()));
    }
    full.iter_mut().for_each(|v| *v /= tr);
    Ok(NullVector {
        rho: full,
        singular_values: sv.into_iter().take(3).collect(),
        spread,
        norm_estimate,
        applications,
        secular_size: ns,
    })
}

/// `‖Lv‖ / (‖L‖‖v‖)` with the norm estimate of the solve.
pub fn relative_residual(op: &Superoperator, v: &[C], norm_estimate: f64) -> f64 {
    let lv = op.apply(v);
    norm(&lv) / (norm_estimate * norm(v))
}
