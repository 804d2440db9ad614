mod common;

use common::*;
use mbr_core::mub::*;
use mbr_core::qcore::{Circuit, Gate};
use proptest::prelude::*;

/// Carry-less product in `GF(2^l)` reduced by `poly`.
fn gf_mul(mut a: u32, mut b: u32, l: u32, poly: u32) -> u32 {
    let mut out = 0;
    while b != 0 {
        if b & 1 == 1 {
            out ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a >> l & 1 == 1 {
            a ^= poly;
        }
    }
    out
}

/// Absolute trace `x + x² + … + x^{2^{l-1}}`, which lands in `{0, 1}`.
fn gf_trace(x: u32, l: u32, poly: u32) -> u32 {
    let (mut acc, mut p) = (0, x);
    for _ in 0..l {
        acc ^= p;
        p = gf_mul(p, p, l, poly);
    }
    assert!(acc <= 1);
    acc
}

/// Symmetric matrices `Tr(a e_i e_j)` over the monomial basis `e_i = x^i`.
fn trace_form_tables(l: u32, poly: u32) -> Vec<Vec<Vec<u32>>> {
    (0..1u32 << l)
        .map(|a| {
            (0..l)
                .map(|i| (0..l).map(|j| gf_trace(gf_mul(a, gf_pow_x(i + j, l, poly), l, poly), l, poly)).collect())
                .collect()
        })
        .collect()
}

fn gf_pow_x(e: u32, l: u32, poly: u32) -> u32 {
    (0..e).fold(1, |acc, _| gf_mul(acc, 2, l, poly))
}

/// `D_M H^{⊗l}` built straight from the definition, with `yᵀMy` taken mod 4.
fn clifford_matrix(m: &[Vec<u32>]) -> Mat {
    let l = m.len();
    let dim = 1 << l;
    let h = circuit_matrix(&Circuit::hadamard_all(l));
    let phase = |y: usize| {
        let bit = |q: usize| ((y >> (l - 1 - q)) & 1) as u32;
        let e: u32 = (0..l).flat_map(|i| (0..l).map(move |j| (i, j))).map(|(i, j)| bit(i) * m[i][j] * bit(j)).sum();
        [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)][(e % 4) as usize]
    };
    (0..dim).map(|y| h[y].iter().map(|&v| phase(y) * v).collect()).collect()
}

fn max_overlap_dev(a: &Mat, b: &Mat) -> f64 {
    let m = matmul(&adjoint(a), b);
    let t = 1.0 / m.len() as f64;
    m.iter().flatten().map(|z| (z.norm_sqr() - t).abs()).fold(0.0, f64::max)
}

#[test]
fn families_match_the_galois_field_oracle() {
    for (l, poly) in [(1u32, 0b11u32), (2, 0b111), (3, 0b1011)] {
        let fam = complete_mub_set(l as usize).unwrap();
        assert_eq!(fam.bases.len(), (1 << l) + 1);
        assert!(fam.pairwise_verified);
        let oracle: Vec<Mat> = std::iter::once(identity(1 << l))
            .chain(trace_form_tables(l, poly).iter().map(|m| clifford_matrix(m)))
            .collect();
        let got: Vec<Mat> = fam.bases.iter().map(circuit_matrix).collect();
        for o in &oracle {
            let hit = got.iter().any(|g| g.iter().flatten().zip(o.iter().flatten()).all(|(x, y)| (x - y).norm() < 1e-12));
            assert!(hit, "l = {l}: oracle basis missing from the family");
        }
        for a in 0..got.len() {
            for b in a + 1..got.len() {
                assert!(max_overlap_dev(&got[a], &got[b]) < 1e-12);
            }
        }
    }
}

#[test]
fn verify_mub_examples() {
    for n in 1..=5 {
        let r = verify_mub(&Circuit::identity(n), &Circuit::hadamard_all(n), 1e-9).unwrap();
        assert!(r.unbiased && r.max_dev < 1e-12);
        let r = verify_mub(&Circuit::identity(n), &Circuit::identity(n), 1e-9).unwrap();
        assert!(!r.unbiased);
        assert!((r.max_dev - (1.0 - 0.5f64.powi(n as i32))).abs() < 1e-12);
    }
    let cx = Circuit::from_gates(2, vec![Gate::H(0), Gate::CX(0, 1)]).unwrap();
    let r = verify_mub(&Circuit::identity(2), &cx, 1e-9).unwrap();
    assert!(!r.unbiased);
    assert!((r.max_dev - max_overlap_dev(&identity(4), &circuit_matrix(&cx))).abs() < 1e-12);
    assert!(verify_mub(&Circuit::identity(2), &Circuit::identity(3), 1e-9).is_err());
}

#[test]
fn sampled_verification_beyond_exhaustive_range() {
    let r = verify_mub(&Circuit::identity(8), &Circuit::hadamard_all(8), 1e-9).unwrap();
    assert!(r.unbiased);
    assert!(!verify_mub(&Circuit::identity(8), &Circuit::identity(8), 1e-9).unwrap().unbiased);
}

#[test]
fn local_basis_examples() {
    let f1 = complete_mub_set(1).unwrap();
    let id = local_mub_basis(&LocalMubSpec::contiguous(2, 1, vec![0, 0]), &f1).unwrap();
    assert!(id.gates().is_empty());
    let xx = local_mub_basis(&LocalMubSpec::contiguous(2, 1, vec![1, 1]), &f1).unwrap();
    let yy = local_mub_basis(&LocalMubSpec::contiguous(2, 1, vec![2, 2]), &f1).unwrap();
    assert!(verify_mub(&xx, &yy, 1e-9).unwrap().unbiased);

    let f2 = complete_mub_set(2).unwrap();
    let a = LocalMubSpec::contiguous(4, 2, vec![3, 3]);
    let mut b = a.clone();
    b.permutations[1] = vec![1, 0, 2, 3];
    let (ua, ub) = (local_mub_basis(&a, &f2).unwrap(), local_mub_basis(&b, &f2).unwrap());
    let r = verify_mub(&ua, &ub, 1e-9).unwrap();
    assert!(!r.unbiased);
    assert!(matmul(&adjoint(&circuit_matrix(&ua)), &circuit_matrix(&ub)).iter().flatten().any(|z| z.norm_sqr() < 1e-12));
}

#[test]
fn interleaved_blocks_route_to_their_qubits() {
    let f1 = complete_mub_set(1).unwrap();
    let spec = LocalMubSpec { n_qubits: 2, block_size: 1, blocks: vec![vec![1], vec![0]], choices: vec![1, 0], permutations: vec![vec![0, 1]; 2] };
    let u = local_mub_basis(&spec, &f1).unwrap();
    let want = kron(&identity(2), &circuit_matrix(&f1.bases[1]));
    let got = circuit_matrix(&u);
    assert!(got.iter().flatten().zip(want.iter().flatten()).all(|(x, y)| (x - y).norm() < 1e-12));
}

#[test]
fn invalid_specs_are_rejected() {
    let f2 = complete_mub_set(2).unwrap();
    assert!(local_mub_basis(&LocalMubSpec::contiguous(5, 2, vec![0, 0]), &f2).is_err());
    assert!(local_mub_basis(&LocalMubSpec::contiguous(4, 2, vec![0, 7]), &f2).is_err());
    let mut s = LocalMubSpec::contiguous(4, 2, vec![0, 1]);
    s.blocks[1] = vec![0, 3];
    assert!(local_mub_basis(&s, &f2).is_err());
    let mut s = LocalMubSpec::contiguous(4, 2, vec![0, 1]);
    s.permutations[0] = vec![0, 0, 1, 2];
    assert!(local_mub_basis(&s, &f2).is_err());
}

#[test]
fn counting_examples() {
    let c = count_mub_combinatorics(3, 3).unwrap();
    assert!(c.log_partitions.abs() < 1e-12);
    assert!((count_mub_combinatorics(2, 1).unwrap().log_total - 36f64.ln()).abs() < 1e-10);
    assert!((count_mub_combinatorics(4, 2).unwrap().log_total - 43200f64.ln()).abs() < 1e-10);
    assert!(count_mub_combinatorics(5, 2).is_err());

    assert!(c_mkb(4, 8, 4, 3).unwrap().abs() < 1e-10);
    assert!((c_mkb(3, 1, 2, 1).unwrap() - 12f64.ln()).abs() < 1e-10);
    assert!((c_mkb(5, 2, 2, 2).unwrap() - 360f64.ln()).abs() < 1e-10);
    assert!(c_mkb(2, 1, 3, 1).is_err());
    assert!(c_mkb(3, 5, 1, 2).is_err());
}

fn perm_strategy(size: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..size).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn unbiasedness_survives_permutations(
        l in 1usize..=2,
        a in 0usize..9,
        b in 0usize..9,
        p1 in perm_strategy(4),
        p2 in perm_strategy(4),
    ) {
        let fam = complete_mub_set(l).unwrap();
        let nb = fam.bases.len();
        let (a, b) = (a % nb, b % nb);
        prop_assume!(a != b);
        let size = 1 << l;
        let fix = |p: &[usize]| if l == 2 { p.to_vec() } else { p.iter().copied().filter(|&x| x < size).collect() };
        let mut sa = LocalMubSpec::contiguous(l, l, vec![a]);
        let mut sb = LocalMubSpec::contiguous(l, l, vec![b]);
        sa.permutations[0] = fix(&p1);
        sb.permutations[0] = fix(&p2);
        let ua = local_mub_basis(&sa, &fam).unwrap();
        let ub = local_mub_basis(&sb, &fam).unwrap();
        prop_assert!(verify_mub(&ua, &ub, 1e-9).unwrap().unbiased);
    }

    #[test]
    fn tensor_products_of_distinct_choices_are_unbiased(
        choices_a in proptest::collection::vec(0usize..5, 3),
        shift in proptest::collection::vec(1usize..5, 3),
    ) {
        let fam = complete_mub_set(2).unwrap();
        let choices_b: Vec<usize> = choices_a.iter().zip(&shift).map(|(a, s)| (a + s) % 5).collect();
        let ua = local_mub_basis(&LocalMubSpec::contiguous(6, 2, choices_a), &fam).unwrap();
        let ub = local_mub_basis(&LocalMubSpec::contiguous(6, 2, choices_b), &fam).unwrap();
        prop_assert!(verify_mub(&ua, &ub, 1e-9).unwrap().max_dev < 1e-10);
    }
}
