use super::{HamiltonianDecomposition, SubspaceSelection};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector};
use crate::mbrstate::subspace_matrices;
use crate::qcore::Circuit;
use crate::C64;

/// Default relative eigenvalue cutoff when whitening `F`.
pub const GEP_CUTOFF: f64 = 1e-10;

/// `(H, F)` over the flattened `(b, slot)` index, with
/// `H_{i_b, j_a} = Σ_c ⟨i_b|U_b† h_c U_a|j_a⟩`.
pub fn truncated_hamiltonian(
    decomp: &HamiltonianDecomposition,
    bases: &[Circuit],
    selection: &SubspaceSelection,
) -> Result<(CMatrix, CMatrix)> {
    let total = decomp.total();
    let mut mats = subspace_matrices(bases, &selection.supports, &[Some(&total), None])?;
    let f = mats.pop().unwrap();
    let h = mats.pop().unwrap();
    Ok((h, f))
}

/// `F` followed by one projected matrix per term, so that any linear
/// combination of the terms can be formed without revisiting the register.
pub fn term_matrices(
    decomp: &HamiltonianDecomposition,
    bases: &[Circuit],
    selection: &SubspaceSelection,
) -> Result<(CMatrix, Vec<CMatrix>)> {
    let mut ops = vec![None];
    ops.extend(decomp.terms.iter().map(|t| Some(&t.op)));
    let mut mats = subspace_matrices(bases, &selection.supports, &ops)?;
    let f = mats.remove(0);
    Ok((f, mats))
}

/// Lowest generalized eigenpair of `H c = E F c`.
#[derive(Clone, Debug)]
pub struct GepSolution {
    pub energy: f64,
    /// Coefficients over the original (non-orthogonal) vectors.
    pub coeffs: CVector,
    /// Directions of `F` kept after the cutoff.
    pub effective_dim: usize,
}

/// Whiten with the eigenvectors of `F` whose eigenvalues exceed
/// `cutoff · λ_max`, then solve the ordinary Hermitian problem.
#[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN must take the error path
pub fn solve_gep(h: &CMatrix, f: &CMatrix, cutoff: f64) -> Result<GepSolution> {
    let dim = h.nrows();
    if h.ncols() != dim || f.nrows() != dim || f.ncols() != dim || dim == 0 {
        return Err(Error::invalid("H and F must be square matrices of the same nonzero size"));
    }
    let scale = h.iter().map(|z| z.norm()).fold(1.0f64, f64::max);
    let defect = linalg::hermitian_defect(h);
    if defect > 1e-6 * scale {
        return Err(Error::Numerical(format!("H is not Hermitian (defect {defect:.3e})")));
    }
    let (lam, vecs) = linalg::eigh(f);
    let lmax = lam.last().copied().unwrap_or(0.0);
    if !(lmax > 1e-300) {
        return Err(Error::Numerical("overlap matrix is numerically zero".into()));
    }
    let keep: Vec<usize> = (0..dim).filter(|&k| lam[k] > cutoff * lmax).collect();
    let w = CMatrix::from_fn(dim, keep.len(), |r, c| vecs[(r, keep[c])] / C64::new(lam[keep[c]].sqrt(), 0.0));
    let hw = w.adjoint() * h * &w;
    let (e, y) = linalg::eigh(&hw);
    let coeffs = &w * y.column(0);
    Ok(GepSolution { energy: e[0], coeffs, effective_dim: keep.len() })
}
