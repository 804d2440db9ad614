use super::MbrState;
use crate::error::{check_cap, Error, Result};
use crate::linalg::{self, CMatrix};
use crate::qcore::{dagger, Circuit, PauliSum, DENSE_STATE_CAP};
use crate::{par, C64};

/// Overlap matrix `F_{i_b, j_a} = ⟨i_b|U_b†U_a|j_a⟩` with its block layout.
#[derive(Clone, Debug, PartialEq)]
pub struct GramMatrix {
    matrix: CMatrix,
    offsets: Vec<usize>,
}

impl GramMatrix {
    /// Wrap a matrix with per-basis block sizes. Used for estimated Gram
    /// matrices too, so no structural checks beyond the shape.
    pub fn from_parts(matrix: CMatrix, block_sizes: &[usize]) -> Result<Self> {
        let offsets = offsets_of(block_sizes);
        let dim = *offsets.last().unwrap();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::invalid(format!(
                "Gram matrix is {}x{} but the blocks sum to {dim}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self { matrix, offsets })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn n_blocks(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn block_size(&self, b: usize) -> usize {
        self.offsets[b + 1] - self.offsets[b]
    }

    /// Flat index of support slot `slot` in basis `b`.
    pub fn block_index(&self, b: usize, slot: usize) -> usize {
        debug_assert!(slot < self.block_size(b));
        self.offsets[b] + slot
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// Block `F_{b,a}`.
    pub fn block(&self, b: usize, a: usize) -> CMatrix {
        let (r0, c0) = (self.offsets[b], self.offsets[a]);
        self.matrix.view((r0, c0), (self.block_size(b), self.block_size(a))).into_owned()
    }

    /// Largest deviation of a diagonal block from the identity.
    pub fn diagonal_block_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for b in 0..self.n_blocks() {
            let blk = self.block(b, b);
            for i in 0..blk.nrows() {
                for j in 0..blk.ncols() {
                    let want = if i == j { 1.0 } else { 0.0 };
                    worst = worst.max((blk[(i, j)] - C64::new(want, 0.0)).norm());
                }
            }
        }
        worst
    }

    pub fn hermitian_defect(&self) -> f64 {
        linalg::hermitian_defect(&self.matrix)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        linalg::eigh(&self.matrix).0.first().copied().unwrap_or(0.0)
    }
}

pub(crate) fn offsets_of(block_sizes: &[usize]) -> Vec<usize> {
    let mut offsets = Vec::with_capacity(block_sizes.len() + 1);
    offsets.push(0);
    for &k in block_sizes {
        offsets.push(offsets.last().unwrap() + k);
    }
    offsets
}

/// `⟨i_b|U_b† O_k U_a|j_a⟩` for each requested operator (`None` is the
/// identity), over the flattened supports.
///
/// Works column by column: `U_a|j⟩` is built once, every operator is applied
/// to it, and the rows are read off after `U_b†`. Only a few dense vectors per
/// worker are alive at any time.
pub(crate) fn subspace_matrices(
    bases: &[Circuit],
    supports: &[Vec<usize>],
    ops: &[Option<&PauliSum>],
) -> Result<Vec<CMatrix>> {
    if bases.is_empty() || bases.len() != supports.len() {
        return Err(Error::invalid(format!("{} bases but {} supports", bases.len(), supports.len())));
    }
    let n = bases[0].n_qubits();
    check_cap("subspace matrix", n, DENSE_STATE_CAP)?;
    for u in bases {
        if u.n_qubits() != n {
            return Err(Error::QubitMismatch { expected: n, got: u.n_qubits() });
        }
    }
    for op in ops.iter().flatten() {
        if op.n_qubits() != n {
            return Err(Error::QubitMismatch { expected: n, got: op.n_qubits() });
        }
    }
    let dim = 1usize << n;
    for s in supports {
        let mut seen = std::collections::HashSet::with_capacity(s.len());
        for &i in s {
            if i >= dim {
                return Err(Error::invalid(format!("support index {i} out of range for {n} qubits")));
            }
            if !seen.insert(i) {
                return Err(Error::invalid(format!("support index {i} appears twice in one basis")));
            }
        }
    }

    let daggers: Vec<Circuit> = bases.iter().map(dagger).collect();
    let columns: Vec<(usize, usize)> =
        supports.iter().enumerate().flat_map(|(a, s)| s.iter().map(move |&j| (a, j))).collect();
    let total = columns.len();

    let cols: Vec<Vec<Vec<C64>>> = par::map_range(total, |c| {
        let (a, j) = columns[c];
        let v = bases[a].column(j);
        ops.iter()
            .map(|op| {
                let w = match op {
                    Some(o) => o.apply(&v),
                    None => v.clone(),
                };
                let mut out = Vec::with_capacity(total);
                for (ud, s) in daggers.iter().zip(supports) {
                    let mut t = w.clone();
                    ud.apply_to(&mut t);
                    out.extend(s.iter().map(|&i| t[i]));
                }
                out
            })
            .collect()
    });

    Ok((0..ops.len())
        .map(|k| CMatrix::from_fn(total, total, |r, c| cols[c][k][r]))
        .collect())
}

/// Overlap matrix of an MBR.
pub fn gram(m: &MbrState) -> Result<GramMatrix> {
    gram_of(m.bases(), &m.supports())
}

/// Overlap matrix for arbitrary bases and supports.
pub fn gram_of(bases: &[Circuit], supports: &[Vec<usize>]) -> Result<GramMatrix> {
    let f = subspace_matrices(bases, supports, &[None])?.pop().unwrap();
    let sizes: Vec<usize> = supports.iter().map(Vec::len).collect();
    GramMatrix::from_parts(f, &sizes)
}

/// `F^O_{i_b, j_a} = ⟨i_b|U_b† O U_a|j_a⟩`.
pub fn observable_gram(m: &MbrState, obs: &PauliSum) -> Result<CMatrix> {
    Ok(subspace_matrices(m.bases(), &m.supports(), &[Some(obs)])?.pop().unwrap())
}

/// `⟨ψ|O|ψ⟩ / ⟨ψ|ψ⟩` from precomputed `F^O` and `F`.
pub fn expectation(m: &MbrState, f_obs: &CMatrix, f: &GramMatrix) -> Result<f64> {
    let w = m.weighted_coeffs();
    if f_obs.nrows() != w.len() || f_obs.ncols() != w.len() || f.dim() != w.len() {
        return Err(Error::invalid(format!(
            "matrices of size {} and {} do not match an MBR with {} coefficients",
            f_obs.nrows(),
            f.dim(),
            w.len()
        )));
    }
    let norm = linalg::quadratic_form(f.matrix(), &w).re;
    if norm < 1e-12 {
        return Err(Error::ZeroNorm);
    }
    Ok(linalg::quadratic_form(f_obs, &w).re / norm)
}

/// Singular values above `tol · σ_max`.
pub fn gram_rank(f: &GramMatrix, tol: f64) -> usize {
    let sv = linalg::singular_values(f.matrix());
    let Some(&smax) = sv.first() else { return 0 };
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * smax).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mbrstate::SparseState;

    #[test]
    fn single_basis_gram_is_identity() {
        let s = SparseState::normalized(3, vec![1, 4, 6], vec![C64::new(1.0, 0.0); 3]).unwrap();
        let m = MbrState::new(vec![Circuit::hadamard_all(3)], vec![1.0], vec![s]).unwrap();
        let f = gram(&m).unwrap();
        assert_eq!(f.dim(), 3);
        assert!((f.matrix() - CMatrix::identity(3, 3)).norm() < 1e-12);
        assert_eq!(gram_rank(&f, 1e-9), 3);
    }

    #[test]
    fn duplicate_support_rejected() {
        let r = gram_of(&[Circuit::identity(2)], &[vec![1, 1]]);
        assert!(r.is_err());
    }

    #[test]
    fn block_accessors() {
        let f = gram_of(&[Circuit::identity(2), Circuit::hadamard_all(2)], &[vec![0, 3], vec![0]]).unwrap();
        assert_eq!(f.n_blocks(), 2);
        assert_eq!(f.block_index(1, 0), 2);
        assert_eq!(f.block(0, 1).shape(), (2, 1));
        assert!((f.matrix()[(0, 2)].re - 0.5).abs() < 1e-12);
    }
}
