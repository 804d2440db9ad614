//! Oracles and generators shared by the integration tests. Nothing here calls
//! into the library's own linear algebra.
#![allow(dead_code)]

use mbr_core::qcore::{Circuit, Gate, StateVector};
use mbr_core::C64;
use proptest::prelude::*;

pub type Mat = Vec<Vec<C64>>;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(d: usize) -> Mat {
    (0..d).map(|r| (0..d).map(|k| if r == k { c(1.0, 0.0) } else { c(0.0, 0.0) }).collect()).collect()
}

pub fn matmul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let m = b[0].len();
    (0..n).map(|r| (0..m).map(|k| (0..b.len()).map(|j| a[r][j] * b[j][k]).sum()).collect()).collect()
}

pub fn kron(a: &Mat, b: &Mat) -> Mat {
    let (ra, rb) = (a.len(), b.len());
    (0..ra * rb).map(|r| (0..ra * rb).map(|k| a[r / rb][k / rb] * b[r % rb][k % rb]).collect()).collect()
}

pub fn adjoint(a: &Mat) -> Mat {
    (0..a[0].len()).map(|r| (0..a.len()).map(|k| a[k][r].conj()).collect()).collect()
}

pub fn matvec(a: &Mat, v: &[C64]) -> Vec<C64> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

pub fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn one_qubit(g: &Gate) -> Mat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let m = |v: [C64; 4]| vec![vec![v[0], v[1]], vec![v[2], v[3]]];
    let (o, z) = (c(1.0, 0.0), c(0.0, 0.0));
    match g {
        Gate::H(_) => m([c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)]),
        Gate::X(_) => m([z, o, o, z]),
        Gate::Y(_) => m([z, c(0.0, -1.0), c(0.0, 1.0), z]),
        Gate::Z(_) => m([o, z, z, -o]),
        Gate::S(_) => m([o, z, z, c(0.0, 1.0)]),
        Gate::T(_) => m([o, z, z, C64::from_polar(1.0, std::f64::consts::FRAC_PI_4)]),
        Gate::RX(_, t) => m([c((t / 2.0).cos(), 0.0), c(0.0, -(t / 2.0).sin()), c(0.0, -(t / 2.0).sin()), c((t / 2.0).cos(), 0.0)]),
        Gate::RY(_, t) => m([c((t / 2.0).cos(), 0.0), c(-(t / 2.0).sin(), 0.0), c((t / 2.0).sin(), 0.0), c((t / 2.0).cos(), 0.0)]),
        Gate::RZ(_, t) => m([C64::from_polar(1.0, -t / 2.0), z, z, C64::from_polar(1.0, t / 2.0)]),
        Gate::U1Q(_, u) => m(*u),
        _ => panic!("not a one-qubit gate"),
    }
}

/// Full `2^n` matrix of one gate: Kronecker products for one-qubit gates,
/// basis-state enumeration for controlled and swap gates.
pub fn gate_matrix(n: usize, g: &Gate) -> Mat {
    let dim = 1 << n;
    let bit = |i: usize, q: usize| (i >> (n - 1 - q)) & 1;
    let flip = |i: usize, q: usize| i ^ (1 << (n - 1 - q));
    match g {
        Gate::CX(a, b) => {
            let mut m = vec![vec![c(0.0, 0.0); dim]; dim];
            for i in 0..dim {
                let j = if bit(i, *a) == 1 { flip(i, *b) } else { i };
                m[j][i] = c(1.0, 0.0);
            }
            m
        }
        Gate::CZ(a, b) => {
            let mut m = identity(dim);
            for i in 0..dim {
                if bit(i, *a) == 1 && bit(i, *b) == 1 {
                    m[i][i] = c(-1.0, 0.0);
                }
            }
            m
        }
        Gate::U2Q(a, b, u) => {
            // Local index 2·bit(a) + bit(b).
            let mut m = vec![vec![c(0.0, 0.0); dim]; dim];
            for i in 0..dim {
                let base = i & !((1 << (n - 1 - a)) | (1 << (n - 1 - b)));
                let col = 2 * bit(i, *a) + bit(i, *b);
                for row in 0..4 {
                    let j = base | ((row >> 1) << (n - 1 - a)) | ((row & 1) << (n - 1 - b));
                    m[j][i] += u[row * 4 + col];
                }
            }
            m
        }
        Gate::Perm(targets, table) => {
            // |x⟩ on the targets (first target most significant) goes to |table[x]⟩.
            let mut m = vec![vec![c(0.0, 0.0); dim]; dim];
            let k = targets.len();
            for i in 0..dim {
                let x = targets.iter().fold(0, |acc, &q| (acc << 1) | bit(i, q));
                let mut j = i;
                for (pos, &q) in targets.iter().enumerate() {
                    let want = (table[x] >> (k - 1 - pos)) & 1;
                    if bit(j, q) != want {
                        j = flip(j, q);
                    }
                }
                m[j][i] = c(1.0, 0.0);
            }
            m
        }
        Gate::Swap(a, b) => {
            let mut m = vec![vec![c(0.0, 0.0); dim]; dim];
            for i in 0..dim {
                let j = if bit(i, *a) != bit(i, *b) { flip(flip(i, *a), *b) } else { i };
                m[j][i] = c(1.0, 0.0);
            }
            m
        }
        _ => {
            let q = g.targets()[0];
            let mut m = vec![vec![c(1.0, 0.0)]];
            for k in 0..n {
                m = kron(&m, &if k == q { one_qubit(g) } else { identity(2) });
            }
            m
        }
    }
}

pub fn circuit_matrix(circ: &Circuit) -> Mat {
    let n = circ.n_qubits();
    circ.gates().iter().fold(identity(1 << n), |acc, g| matmul(&gate_matrix(n, g), &acc))
}

pub fn gate_strategy(n: usize) -> BoxedStrategy<Gate> {
    let q = 0..n;
    let pair = (0..n, 0..n).prop_filter("distinct", |(a, b)| a != b);
    let angle = -6.3f64..6.3;
    prop_oneof![
        q.clone().prop_map(Gate::H),
        q.clone().prop_map(Gate::X),
        q.clone().prop_map(Gate::Y),
        q.clone().prop_map(Gate::Z),
        q.clone().prop_map(Gate::S),
        q.clone().prop_map(Gate::T),
        (q.clone(), angle.clone()).prop_map(|(q, t)| Gate::RX(q, t)),
        (q.clone(), angle.clone()).prop_map(|(q, t)| Gate::RY(q, t)),
        (q, angle).prop_map(|(q, t)| Gate::RZ(q, t)),
        pair.clone().prop_map(|(a, b)| Gate::CX(a, b)),
        pair.clone().prop_map(|(a, b)| Gate::CZ(a, b)),
        pair.prop_map(|(a, b)| Gate::Swap(a, b)),
    ]
    .boxed()
}

pub fn circuit_strategy(n: usize, max_gates: usize) -> impl Strategy<Value = Circuit> {
    proptest::collection::vec(gate_strategy(n), 0..=max_gates)
        .prop_map(move |g| Circuit::from_gates(n, g).expect("generated gates are valid"))
}

pub fn state_strategy(n: usize) -> impl Strategy<Value = StateVector> {
    any::<u64>().prop_map(move |s| mbr_core::qcore::haar_random_state(n, s).unwrap())
}

/// ψ₊₀ amplitudes from the closed form: peak `(1 + 2^{-n/2})/√(2C)`, the rest
/// `2^{-n/2}/√(2C)` with `C = 1 + 2^{-n/2}`.
pub fn psi_plus_zero_amps(n: usize) -> Vec<f64> {
    let h = 2f64.powf(-(n as f64) / 2.0);
    let norm = (2.0 * (1.0 + h)).sqrt();
    let mut v = vec![h / norm; 1 << n];
    v[0] = (1.0 + h) / norm;
    v
}

/// Random MBR over seeded brickwork bases with random `K`-sparse components.
pub fn random_mbr(n: usize, b: usize, k: usize, seed: u64) -> mbr_core::mbrstate::MbrState {
    use mbr_core::mbrstate::{MbrState, SparseState};
    use rand::Rng;
    let mut r = mbr_core::rng::rng_from(seed, &[77]);
    let bases = (0..b).map(|i| mbr_core::qcore::random_brickwork(n, 2, seed ^ (i as u64 + 1) * 0x9E37)).collect::<Result<Vec<_>, _>>().unwrap();
    let weights = (0..b).map(|_| r.random_range(0.1..1.0)).collect();
    let comps = (0..b)
        .map(|_| {
            let support = rand::seq::index::sample(&mut r, 1 << n, k).into_vec();
            let coeffs = (0..k).map(|_| c(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0))).collect();
            SparseState::normalized(n, support, coeffs).unwrap()
        })
        .collect();
    MbrState::new(bases, weights, comps).unwrap()
}

/// Largest singular value of a 2×2 block via the closed-form eigenvalues of `A†A`.
pub fn sigma_max_2x2(a: [[C64; 2]; 2]) -> f64 {
    let p = a[0][0].norm_sqr() + a[1][0].norm_sqr();
    let q = a[0][1].norm_sqr() + a[1][1].norm_sqr();
    let off = a[0][0].conj() * a[0][1] + a[1][0].conj() * a[1][1];
    let half = (p + q) / 2.0;
    (half + (((p - q) / 2.0).powi(2) + off.norm_sqr()).sqrt()).sqrt()
}
