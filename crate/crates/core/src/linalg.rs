//! Small dense linear-algebra helpers over complex matrices.

use nalgebra::{DMatrix, DVector};

use crate::C64;

pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Largest absolute deviation of `m` from its conjugate transpose.
pub fn hermitian_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// `(m + m†)/2`.
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Eigen-decomposition of a Hermitian matrix with eigenvalues ascending.
pub fn eigh(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = nalgebra::SymmetricEigen::new(hermitian_part(m));
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(m.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Singular values, descending.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut sv: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

pub fn spectral_norm(m: &CMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Moore–Penrose pseudo-inverse dropping singular values below
/// `cutoff · σ_max`. Also returns the retained rank and the smallest retained
/// singular value.
pub fn pinv(m: &CMatrix, cutoff: f64) -> (CMatrix, usize, f64) {
    let svd = m.clone().svd(true, true);
    let u = svd.u.expect("u requested");
    let v_t = svd.v_t.expect("v_t requested");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let mut out = CMatrix::zeros(m.ncols(), m.nrows());
    let mut rank = 0;
    let mut smin = f64::INFINITY;
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if smax > 0.0 && s > cutoff * smax {
            rank += 1;
            smin = smin.min(s);
            let inv = C64::new(1.0 / s, 0.0);
            for r in 0..m.ncols() {
                let vr = v_t[(k, r)].conj() * inv;
                for c in 0..m.nrows() {
                    out[(r, c)] += vr * u[(c, k)].conj();
                }
            }
        }
    }
    (out, rank, smin)
}

pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm_sqr(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum()
}

/// `w† m w`.
pub fn quadratic_form(m: &CMatrix, w: &[C64]) -> C64 {
    let n = w.len();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        let mut row = C64::new(0.0, 0.0);
        for j in 0..n {
            row += m[(i, j)] * w[j];
        }
        acc += w[i].conj() * row;
    }
    acc
}
