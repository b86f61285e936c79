//! Independent oracles shared by the integration tests. None of these call
//! the routine they check; they rebuild the quantity from its definition.

#![allow(dead_code)]

pub mod invariants;

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;

/// `L_n(x) = Σ_k C(n,k) (−x)^k / k!`, summed directly. Also returns
/// `Σ |terms|`, which bounds the cancellation error of the sum.
pub fn laguerre_series(n: usize, x: f64) -> (f64, f64) {
    let mut term = 1.0; // C(n,0)(−x)^0/0!
    let (mut sum, mut mag) = (1.0, 1.0);
    for k in 0..n {
        term *= -x * (n - k) as f64 / ((k + 1) * (k + 1)) as f64;
        sum += term;
        mag += term.abs();
    }
    (sum, mag)
}

/// Associated Laguerre `L_n^{(α)}(x)` by its explicit sum.
pub fn assoc_laguerre_series(n: usize, alpha: usize, x: f64) -> f64 {
    // Σ_k (−1)^k C(n+α, n−k) x^k / k!
    let binom = |a: usize, b: usize| -> f64 { (0..b).map(|i| (a - i) as f64 / (i + 1) as f64).product() };
    let mut fact = 1.0;
    let mut sum = 0.0;
    for k in 0..=n {
        if k > 0 {
            fact *= k as f64;
        }
        sum += (-1f64).powi(k as i32) * binom(n + alpha, n - k) * x.powi(k as i32) / fact;
    }
    sum
}

pub fn ladder(dim: usize) -> DMatrix<f64> {
    DMatrix::from_fn(dim, dim, |i, j| if j == i + 1 { (j as f64).sqrt() } else { 0.0 })
}

/// `exp(z(a† − a))` by the general matrix exponential on `dim` levels.
pub fn displacement_expm(z: f64, dim: usize) -> DMatrix<f64> {
    let a = ladder(dim);
    ((a.transpose() - &a) * z).exp()
}

/// `⟨n|D(2g)|n⟩` from a matrix exponential on `dim ≥ 100` levels.
pub fn dn_bruteforce(n: usize, g: f64, dim: usize) -> f64 {
    displacement_expm(2.0 * g, dim)[(n, n)]
}

/// `⟨m|D(z)|n⟩` for `m ≥ n`: `√(n!/m!) z^{m−n} e^{−z²/2} L_n^{(m−n)}(z²)`.
pub fn displacement_element_formula(m: usize, n: usize, z: f64) -> f64 {
    assert!(m >= n);
    let ratio: f64 = (n + 1..=m).map(|k| 1.0 / (k as f64).sqrt()).product();
    ratio * z.powi((m - n) as i32) * (-z * z / 2.0).exp() * assoc_laguerre_series(n, m - n, z * z)
}

/// Two-level amplitude evolution under `[[Δ, v], [v, −Δ]]` from the upper
/// state; returns the lower-state probability.
pub fn bloch_transfer(delta: f64, v: f64, t: f64) -> f64 {
    let i = Complex64::new(0.0, 1.0);
    let h = Matrix2::new(Complex64::from(delta), Complex64::from(v), Complex64::from(v), Complex64::from(-delta));
    let u = (h * (-i * t)).exp();
    u[(1, 0)].norm_sqr()
}

/// Dense Lindbladian in the row-major vectorization `v[i·d + j] = ρ_ij`,
/// assembled from Kronecker products: `vec(AXB) = (A ⊗ Bᵀ) vec(X)`.
pub fn dense_lindbladian(h: &DMatrix<f64>, jumps: &[(DMatrix<f64>, f64)]) -> DMatrix<Complex64> {
    let d = h.nrows();
    let c = |m: &DMatrix<f64>| m.map(Complex64::from);
    let id = DMatrix::<Complex64>::identity(d, d);
    let i = Complex64::new(0.0, 1.0);
    let hc = c(h);
    let mut l = (hc.kronecker(&id) - id.kronecker(&hc.transpose())) * (-i);
    for (o, rate) in jumps {
        let oc = c(o);
        let oto = c(&(o.transpose() * o));
        l += (oc.kronecker(&oc) - oto.kronecker(&id) * Complex64::from(0.5) - id.kronecker(&oto.transpose()) * Complex64::from(0.5))
            * Complex64::from(*rate);
    }
    l
}

/// Null vector of a dense Lindbladian: the first row of `Lρ = 0` is replaced
/// by `tr ρ = 1` and the square system solved by LU.
pub fn dense_null_vector(l: &DMatrix<Complex64>, d: usize) -> DMatrix<Complex64> {
    let mut a = l.clone();
    let mut b = nalgebra::DVector::<Complex64>::zeros(d * d);
    a.row_mut(0).fill(Complex64::from(0.0));
    for i in 0..d {
        a[(0, i * d + i)] = Complex64::from(1.0);
    }
    b[0] = Complex64::from(1.0);
    let v = a.lu().solve(&b).expect("unique steady state");
    DMatrix::from_fn(d, d, |i, j| v[i * d + j])
}

pub fn tv(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len().max(b.len());
    let at = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
    0.5 * (0..n).map(|i| (at(a, i) - at(b, i)).abs()).sum::<f64>()
}
