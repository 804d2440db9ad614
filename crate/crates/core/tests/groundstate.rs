mod common;

use common::*;
use mbr_core::groundstate::*;
use mbr_core::linalg::CMatrix;
use mbr_core::qcore::Circuit;
use nalgebra::DMatrix;
use proptest::prelude::*;

/// `J Σ X_iX_j + h Σ Z_i` assembled from Kronecker products, qubit 0 leftmost.
fn tfim_dense(g: &GraphSpec, j: f64, h: f64) -> DMatrix<f64> {
    let n = g.n_nodes();
    let x = vec![vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]];
    let z = vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(-1.0, 0.0)]];
    let string = |ops: &[(usize, &Mat)]| {
        (0..n).fold(vec![vec![c(1.0, 0.0)]], |acc, q| {
            let f = ops.iter().find(|(p, _)| *p == q).map(|(_, m)| (*m).clone()).unwrap_or_else(|| identity(2));
            kron(&acc, &f)
        })
    };
    let dim = 1 << n;
    let mut out = DMatrix::<f64>::zeros(dim, dim);
    let mut add = |m: Mat, w: f64| {
        for r in 0..dim {
            for k in 0..dim {
                out[(r, k)] += w * m[r][k].re;
            }
        }
    };
    for &(a, b) in g.edges() {
        add(string(&[(a, &x), (b, &x)]), j);
    }
    for q in 0..n {
        add(string(&[(q, &z)]), h);
    }
    out
}

fn dense_min(m: DMatrix<f64>) -> f64 {
    m.symmetric_eigen().eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

fn to_cmatrix(rows: &[&[f64]]) -> CMatrix {
    CMatrix::from_fn(rows.len(), rows.len(), |r, k| c(rows[r][k], 0.0))
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn tfim_diagonal_energies() {
    let edge = GraphSpec::new(2, vec![(0, 1)]).unwrap();
    let d = tfim(&edge, 1.0, 0.0).unwrap();
    let e: Vec<f64> = (0..4).map(|i| d.terms[0].energy.energy(i)).collect();
    assert_eq!(e, vec![1.0, -1.0, -1.0, 1.0]);
    let d = tfim(&edge, 0.0, 1.0).unwrap();
    let e: Vec<f64> = (0..4).map(|i| d.terms[1].energy.energy(i)).collect();
    assert_eq!(e, vec![2.0, 0.0, 0.0, -2.0]);
}

#[test]
fn decomposition_matches_kronecker_oracle() {
    let g = GraphSpec::lattice(2, 2).unwrap();
    let d = tfim(&g, 1.0, 0.5).unwrap();
    let m = d.total().matrix().unwrap();
    let want = tfim_dense(&g, 1.0, 0.5);
    assert!(m.iter().zip(want.iter()).all(|(a, b)| (a.re - b).abs() < 1e-10 && a.im.abs() < 1e-10));
    for (off, diag) in d.diagonalization_defects().unwrap() {
        assert!(off < 1e-9 && diag < 1e-9);
    }
    // Diagonal energies reproduce the conjugated operator.
    for t in &d.terms {
        let u = circuit_matrix(&t.circuit);
        let hm = t.op.matrix().unwrap();
        let hmat: Mat = (0..16).map(|r| (0..16).map(|k| hm[(r, k)]).collect()).collect();
        let conj = matmul(&adjoint(&u), &matmul(&hmat, &u));
        for i in 0..16 {
            assert!((conj[i][i].re - t.energy.energy(i)).abs() < 1e-10);
        }
    }
}

#[test]
fn seed_examples() {
    let g = GraphSpec::lattice(2, 2).unwrap();
    let d = tfim(&g, 1.0, 0.7).unwrap();
    let seeds = seed_supports(&d, SeedStrategy::BruteForce).unwrap();
    assert_eq!(seeds[1].indices, vec![15]);
    assert!((seeds[1].energy + 0.7 * 4.0).abs() < 1e-12);

    // Brute-force oracle for the antiferromagnetic bond term.
    let spin = |i: usize, q: usize| if (i >> (3 - q)) & 1 == 1 { -1.0 } else { 1.0 };
    let energy = |i: usize| g.edges().iter().map(|&(a, b)| spin(i, a) * spin(i, b)).sum::<f64>();
    let min = (0..16).map(energy).fold(f64::INFINITY, f64::min);
    let want: Vec<usize> = (0..16).filter(|&i| energy(i) == min).collect();
    assert_eq!(seeds[0].indices, want);
    assert_eq!(want, vec![0b0110, 0b1001]);

    let lat = seed_supports_on_lattice(&d, SeedStrategy::LatticePattern, g.lattice_shape()).unwrap();
    assert_eq!(lat[0].indices, want);

    let path = GraphSpec::new(5, vec![(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
    let s = seed_supports(&tfim(&path, -1.0, 1.0).unwrap(), SeedStrategy::BruteForce).unwrap();
    assert_eq!(s[0].indices, vec![0, 31]);
}

#[test]
fn local_search_finds_the_bipartite_optimum() {
    let g = GraphSpec::lattice(3, 3).unwrap();
    let d = tfim(&g, 1.0, 1.0).unwrap();
    let exact = seed_supports(&d, SeedStrategy::BruteForce).unwrap();
    let heur = seed_supports(&d, SeedStrategy::LocalSearch { restarts: 32, seed: 4 }).unwrap();
    assert!(heur[0].heuristic);
    assert!((heur[0].energy - exact[0].energy).abs() < 1e-12);
}

#[test]
fn hamming_ball_examples() {
    assert_eq!(hamming_ball(3, &[5], 0, 8).unwrap(), (vec![5], false));
    assert_eq!(hamming_ball(3, &[0], 1, 8).unwrap().0, vec![0, 1, 2, 4]);
    assert_eq!(hamming_ball(4, &[0], 2, 100).unwrap().0.len(), 11);
    let (ball, truncated) = hamming_ball(4, &[0], 2, 5).unwrap();
    assert!(truncated && ball.len() == 5);
    assert!(ball.iter().all(|i| i.count_ones() <= 1));
    assert!(hamming_ball(3, &[0, 1], 1, 1).is_err());
}

#[test]
fn truncated_hamiltonian_examples() {
    let g = GraphSpec::new(2, vec![(0, 1)]).unwrap();
    let d = tfim(&g, 0.8, 0.3).unwrap();
    let sel = SubspaceSelection { supports: vec![(0..4).collect()], provenance: vec![vec![Provenance::Seed; 4]], truncated: false };
    let (h, f) = truncated_hamiltonian(&d, &[Circuit::identity(2)], &sel).unwrap();
    let want = tfim_dense(&g, 0.8, 0.3);
    assert!(h.iter().zip(want.iter()).all(|(a, b)| (a.re - b).abs() < 1e-12));
    assert!((f - CMatrix::identity(4, 4)).norm() < 1e-12);

    let g = GraphSpec::new(3, vec![(0, 1), (1, 2)]).unwrap();
    let d = tfim(&g, 1.0, 0.9).unwrap();
    let bases = vec![Circuit::identity(3), Circuit::hadamard_all(3)];
    let supports = vec![vec![0, 7], vec![0, 5]];
    let sel = SubspaceSelection { provenance: vec![vec![Provenance::Seed; 2]; 2], supports: supports.clone(), truncated: false };
    let (h, _) = truncated_hamiltonian(&d, &bases, &sel).unwrap();
    let dense = tfim_dense(&g, 1.0, 0.9);
    let cols: Vec<Vec<f64>> = bases
        .iter()
        .zip(&supports)
        .flat_map(|(u, s)| {
            let m = circuit_matrix(u);
            s.iter().map(move |&i| m.iter().map(|row| row[i].re).collect::<Vec<_>>()).collect::<Vec<_>>()
        })
        .collect();
    for r in 0..4 {
        for k in 0..4 {
            let v = nalgebra::DVector::from_vec(cols[k].clone());
            let sandwich = nalgebra::DVector::from_vec(cols[r].clone()).dot(&(&dense * v));
            assert!((h[(r, k)].re - sandwich).abs() < 1e-10);
        }
    }

    let dup = SubspaceSelection { supports: vec![vec![1, 1]], provenance: vec![vec![Provenance::Seed; 2]], truncated: false };
    assert!(truncated_hamiltonian(&d, &[Circuit::identity(3)], &dup).is_err());
}

#[test]
fn gep_examples() {
    let h = to_cmatrix(&[&[3.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 2.0]]);
    let sol = solve_gep(&h, &CMatrix::identity(3, 3), GEP_CUTOFF).unwrap();
    assert!((sol.energy - 1.0).abs() < 1e-12);
    assert!((sol.coeffs[1].norm() - 1.0).abs() < 1e-12 && sol.coeffs[0].norm() < 1e-12);

    for &(a, b, s) in &[(1.0, -0.5, 0.3), (-2.0, 0.7, -0.6), (0.5, 0.1, 0.9)] {
        let h = to_cmatrix(&[&[a, b], &[b, a]]);
        let f = to_cmatrix(&[&[1.0, s], &[s, 1.0]]);
        let want = f64::min((a + b) / (1.0 + s), (a - b) / (1.0 - s));
        assert!((solve_gep(&h, &f, GEP_CUTOFF).unwrap().energy - want).abs() < 1e-12);
    }

    let h = to_cmatrix(&[&[1.0, 0.4, 1.0], &[0.4, -1.0, 0.4], &[1.0, 0.4, 1.0]]);
    let f = to_cmatrix(&[&[1.0, 0.0, 1.0], &[0.0, 1.0, 0.0], &[1.0, 0.0, 1.0]]);
    let full = solve_gep(&h, &f, GEP_CUTOFF).unwrap();
    let dedup = solve_gep(&to_cmatrix(&[&[1.0, 0.4], &[0.4, -1.0]]), &CMatrix::identity(2, 2), GEP_CUTOFF).unwrap();
    assert_eq!((full.effective_dim, dedup.effective_dim), (2, 2));
    assert!((full.energy - dedup.energy).abs() < 1e-9);

    assert!(solve_gep(&h, &CMatrix::zeros(3, 3), GEP_CUTOFF).is_err());
    let skew = to_cmatrix(&[&[0.0, 1.0], &[0.0, 0.0]]);
    assert!(solve_gep(&skew, &CMatrix::identity(2, 2), GEP_CUTOFF).is_err());
}

#[test]
fn exact_energy_examples() {
    let edge = tfim(&GraphSpec::new(2, vec![(0, 1)]).unwrap(), 1.0, 0.0).unwrap();
    assert!((exact_ground_energy(&edge).unwrap() + 1.0).abs() < 1e-10);
    let single = tfim(&GraphSpec::new(1, vec![]).unwrap(), 1.0, 1.0).unwrap();
    assert!((exact_ground_energy(&single).unwrap() + 1.0).abs() < 1e-10);

    let g = GraphSpec::lattice(3, 3).unwrap();
    let d = tfim(&g, 1.0, 3.0).unwrap();
    let dense = exact_ground_energy_with(&d, ExactMethod::Dense).unwrap();
    let lanczos = exact_ground_energy_with(&d, ExactMethod::Lanczos).unwrap();
    assert!((dense - lanczos).abs() < 1e-7);
    assert!((dense - dense_min(tfim_dense(&g, 1.0, 3.0))).abs() < 1e-9);
}

#[test]
fn pipeline_exact_at_the_extremes() {
    let g = GraphSpec::lattice(2, 2).unwrap();
    let r = mbr_ground_pipeline(&g, 1.0, 0.0, 0, 4096).unwrap();
    assert!(r.gap.abs() < 1e-8, "{r:?}");
    let r = mbr_ground_pipeline(&g, 0.0, 1.3, 0, 4096).unwrap();
    assert!(r.gap.abs() < 1e-8);
    let g = GraphSpec::lattice(2, 3).unwrap();
    for h in [0.4, 2.5, 5.0] {
        let r = mbr_ground_pipeline(&g, 1.0, h, 6, 4096).unwrap();
        assert!(r.gap.abs() < 1e-8);
        assert!((r.e_exact - dense_min(tfim_dense(&g, 1.0, h))).abs() < 1e-9);
    }
}

#[test]
fn basis_order_does_not_change_the_energy() {
    let g = GraphSpec::lattice(2, 3).unwrap();
    let d = tfim(&g, 1.0, 1.7).unwrap();
    let seeds = seed_supports(&d, SeedStrategy::BruteForce).unwrap();
    let sel = SubspaceSelection::from_seeds(6, &seeds, 1, 4096).unwrap();
    let (h, f) = truncated_hamiltonian(&d, &d.bases(), &sel).unwrap();
    let e = solve_gep(&h, &f, GEP_CUTOFF).unwrap().energy;

    let mut rev = sel.clone();
    rev.supports.reverse();
    rev.provenance.reverse();
    for s in &mut rev.supports {
        s.reverse();
    }
    let bases: Vec<Circuit> = d.bases().into_iter().rev().collect();
    let (h2, f2) = truncated_hamiltonian(&d, &bases, &rev).unwrap();
    assert!((solve_gep(&h2, &f2, GEP_CUTOFF).unwrap().energy - e).abs() < 1e-10);
}

#[test]
fn selection_provenance() {
    let d = tfim(&GraphSpec::lattice(2, 2).unwrap(), 1.0, 1.0).unwrap();
    let seeds = seed_supports(&d, SeedStrategy::BruteForce).unwrap();
    let sel = SubspaceSelection::from_seeds(4, &seeds, 1, 4096).unwrap();
    assert_eq!(sel.supports[1].len(), 1 + binom(4, 1));
    for (s, p) in sel.supports[1].iter().zip(&sel.provenance[1]) {
        let want = if *s == 15 { Provenance::Seed } else { Provenance::Hamming(1) };
        assert_eq!(*p, want);
    }
}

#[test]
fn graph_file_format() {
    let g = GraphSpec::parse("nodes 3\n0 1\n# comment\n1 2\n").unwrap();
    assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
    assert!(GraphSpec::parse("nodes 2\n0 2\n").is_err());
    assert!(GraphSpec::parse("nodes 2\n0 1\n1 0\n").is_err());
    assert_eq!(GraphSpec::lattice_from_label("3x4").unwrap().edges().len(), 17);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn variational_and_monotone(rows in 1usize..=2, cols in 2usize..=4, j in -2.0f64..2.0, h in -3.0f64..3.0) {
        let g = GraphSpec::lattice(rows, cols).unwrap();
        let recs = tfim_sweep(&g, j, &[h], &[0, 1, 2], &PipelineOptions::default()).unwrap();
        for r in &recs {
            prop_assert!(r.e_mbr >= r.e_exact - 1e-8);
        }
        prop_assert!(recs[1].e_mbr <= recs[0].e_mbr + 1e-9);
        prop_assert!(recs[2].e_mbr <= recs[1].e_mbr + 1e-9);
    }

    #[test]
    fn hamming_ball_size_is_binomial(n in 1usize..=10, r in 0usize..=4, seed in any::<usize>()) {
        let s = seed & ((1 << n) - 1);
        let (ball, _) = hamming_ball(n, &[s], r, 1 << 12).unwrap();
        let want: usize = (0..=r.min(n)).map(|k| binom(n, k)).sum();
        prop_assert_eq!(ball.len(), want);
        prop_assert!(ball.iter().all(|&i| ((i ^ s).count_ones() as usize) <= r));
    }
}
