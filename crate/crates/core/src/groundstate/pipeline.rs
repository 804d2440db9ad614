use super::{
    exact_ground_energy_with, seed_supports_on_lattice, solve_gep, term_matrices, tfim, ExactMethod, GraphSpec,
    SeedStrategy, SubspaceSelection, GEP_CUTOFF,
};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::par;

/// One point of a ground-state sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct GroundRecord {
    pub h: f64,
    pub j: f64,
    pub dh: usize,
    /// Number of (non-orthogonal) vectors spanning the subspace.
    pub n_vectors: usize,
    /// Dimension kept after whitening the overlap matrix.
    pub subspace_dim: usize,
    pub e_mbr: f64,
    pub e_exact: f64,
    /// `e_mbr − e_exact`.
    pub gap: f64,
    /// Some seeds came from a heuristic search.
    pub heuristic_seeds: bool,
    /// Some Hamming ball hit the cap.
    pub truncated: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PipelineOptions {
    /// Per-basis support cap.
    pub cap: usize,
    pub exact: ExactMethod,
    /// `None` picks brute force or local search by size.
    pub seeds: Option<SeedStrategy>,
    pub cutoff: f64,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        Self { cap: 4096, exact: ExactMethod::Auto, seeds: None, cutoff: GEP_CUTOFF }
    }
}

fn sign(x: f64) -> f64 {
    if x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// MBR ground-state estimate of the TFIM on `graph` with the exact baseline.
pub fn mbr_ground_pipeline(graph: &GraphSpec, j: f64, h: f64, dh: usize, cap: usize) -> Result<GroundRecord> {
    let opts = PipelineOptions { cap, ..PipelineOptions::default() };
    Ok(tfim_sweep(graph, j, &[h], &[dh], &opts)?.remove(0))
}

/// Rows for every `(h, dh)` pair, `h`-major, in grid order.
///
/// Seeds depend only on the signs of `J` and `h` (zero counts as positive),
/// so all points with those signs share one subspace and its projected term
/// matrices; only the small generalized eigenproblem is solved per point.
pub fn tfim_sweep(
    graph: &GraphSpec,
    j: f64,
    hs: &[f64],
    dhs: &[usize],
    opts: &PipelineOptions,
) -> Result<Vec<GroundRecord>> {
    if hs.is_empty() || dhs.is_empty() {
        return Err(Error::invalid("sweep needs at least one h and one D_H"));
    }
    if let Some(x) = hs.iter().chain(std::iter::once(&j)).find(|x| !x.is_finite()) {
        return Err(Error::invalid(format!("non-finite coupling {x}")));
    }
    let n = graph.n_nodes();
    let strategy = opts.seeds.unwrap_or_else(|| SeedStrategy::auto(n));
    let unit = tfim(graph, 1.0, 1.0)?;
    let bases = unit.bases();

    // Subspace data per (sign of h, dh).
    struct Projected {
        f: CMatrix,
        terms: Vec<CMatrix>,
        n_vectors: usize,
        heuristic: bool,
        truncated: bool,
    }
    let mut signs: Vec<f64> = hs.iter().map(|&h| sign(h)).collect();
    signs.sort_by(f64::total_cmp);
    signs.dedup();
    let mut projected: Vec<((f64, usize), Projected)> = Vec::new();
    for &s in &signs {
        let seed_decomp = tfim(graph, sign(j), s)?;
        let seeds = seed_supports_on_lattice(&seed_decomp, strategy, graph.lattice_shape())?;
        let heuristic = seeds.iter().any(|s| s.heuristic);
        for &dh in dhs {
            let sel = SubspaceSelection::from_seeds(n, &seeds, dh, opts.cap)?;
            let (f, terms) = term_matrices(&unit, &bases, &sel)?;
            projected.push((
                (s, dh),
                Projected { f, terms, n_vectors: sel.total_size(), heuristic, truncated: sel.truncated },
            ));
        }
    }

    let exact: Vec<f64> = par::try_map_range(hs.len(), |k| {
        let d = tfim(graph, j, hs[k])?;
        exact_ground_energy_with(&d, opts.exact)
    })?;

    let grid: Vec<(usize, usize)> = (0..hs.len()).flat_map(|a| (0..dhs.len()).map(move |b| (a, b))).collect();
    par::try_map_range(grid.len(), |g| {
        let (a, b) = grid[g];
        let (h, dh) = (hs[a], dhs[b]);
        let p = &projected.iter().find(|(key, _)| *key == (sign(h), dh)).expect("projected for every key").1;
        let hm = p.terms[0].scale(j) + p.terms[1].scale(h);
        let sol = solve_gep(&hm, &p.f, opts.cutoff)?;
        Ok(GroundRecord {
            h,
            j,
            dh,
            n_vectors: p.n_vectors,
            subspace_dim: sol.effective_dim,
            e_mbr: sol.energy,
            e_exact: exact[a],
            gap: sol.energy - exact[a],
            heuristic_seeds: p.heuristic,
            truncated: p.truncated,
        })
    })
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect(),
    }
}
