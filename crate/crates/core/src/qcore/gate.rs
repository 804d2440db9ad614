use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::C64;

const UNITARY_TOL: f64 = 1e-10;

/// One gate of a [`Circuit`](super::Circuit).
///
/// Rotations follow `R_P(θ) = exp(-iθP/2)`. Matrix literals are row-major; for
/// two-qubit literals the first target is the more significant local bit.
/// `Perm` relabels the computational basis of its targets: local state `|i⟩`
/// is sent to `|table[i]⟩`.
#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    H(usize),
    X(usize),
    Y(usize),
    Z(usize),
    S(usize),
    T(usize),
    CX(usize, usize),
    CZ(usize, usize),
    Swap(usize, usize),
    RX(usize, f64),
    RY(usize, f64),
    RZ(usize, f64),
    U1Q(usize, [C64; 4]),
    U2Q(usize, usize, Box<[C64; 16]>),
    Perm(Vec<usize>, Vec<usize>),
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

impl Gate {
    pub fn targets(&self) -> Vec<usize> {
        use Gate::*;
        match self {
            H(q) | X(q) | Y(q) | Z(q) | S(q) | T(q) | RX(q, _) | RY(q, _) | RZ(q, _) | U1Q(q, _) => vec![*q],
            CX(a, b) | CZ(a, b) | Swap(a, b) | U2Q(a, b, _) => vec![*a, *b],
            Perm(t, _) => t.clone(),
        }
    }

    pub fn name(&self) -> &'static str {
        use Gate::*;
        match self {
            H(_) => "H",
            X(_) => "X",
            Y(_) => "Y",
            Z(_) => "Z",
            S(_) => "S",
            T(_) => "T",
            CX(..) => "CX",
            CZ(..) => "CZ",
            Swap(..) => "SWAP",
            RX(..) => "RX",
            RY(..) => "RY",
            RZ(..) => "RZ",
            U1Q(..) => "U1Q",
            U2Q(..) => "U2Q",
            Perm(..) => "PERM",
        }
    }

    /// Check target distinctness, range and unitarity of literals.
    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        let t = self.targets();
        for (k, &q) in t.iter().enumerate() {
            if q >= n_qubits {
                return Err(Error::InvalidGate(format!("{} target {q} out of range for {n_qubits} qubits", self.name())));
            }
            if t[..k].contains(&q) {
                return Err(Error::InvalidGate(format!("{} repeats target {q}", self.name())));
            }
        }
        match self {
            Gate::RX(_, a) | Gate::RY(_, a) | Gate::RZ(_, a) if !a.is_finite() => {
                Err(Error::InvalidGate(format!("{} angle is not finite", self.name())))
            }
            Gate::U1Q(_, m) => check_unitary(m, 2, "U1Q"),
            Gate::U2Q(_, _, m) => check_unitary(&m[..], 4, "U2Q"),
            Gate::Perm(t, table) => {
                if t.is_empty() {
                    return Err(Error::InvalidGate("PERM needs at least one target".into()));
                }
                let dim = 1usize << t.len();
                let mut seen = vec![false; dim];
                if table.len() != dim {
                    return Err(Error::InvalidGate(format!("PERM table needs {dim} entries, got {}", table.len())));
                }
                for &p in table {
                    if p >= dim || seen[p] {
                        return Err(Error::InvalidGate("PERM table is not a bijection".into()));
                    }
                    seen[p] = true;
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Same gate acting on qubit `map[q]` wherever it acted on `q`.
    pub fn relabeled(&self, map: &[usize]) -> Gate {
        use Gate::*;
        let m = |q: &usize| map[*q];
        match self {
            H(q) => H(m(q)),
            X(q) => X(m(q)),
            Y(q) => Y(m(q)),
            Z(q) => Z(m(q)),
            S(q) => S(m(q)),
            T(q) => T(m(q)),
            CX(a, b) => CX(m(a), m(b)),
            CZ(a, b) => CZ(m(a), m(b)),
            Swap(a, b) => Swap(m(a), m(b)),
            RX(q, a) => RX(m(q), *a),
            RY(q, a) => RY(m(q), *a),
            RZ(q, a) => RZ(m(q), *a),
            U1Q(q, u) => U1Q(m(q), *u),
            U2Q(a, b, u) => U2Q(m(a), m(b), u.clone()),
            Perm(t, table) => Perm(t.iter().map(m).collect(), table.clone()),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Gate {
        use Gate::*;
        match self {
            H(_) | X(_) | Y(_) | Z(_) | CX(..) | CZ(..) | Swap(..) => self.clone(),
            S(q) => U1Q(*q, [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, -1.0)]),
            T(q) => U1Q(*q, [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), C64::from_polar(1.0, -std::f64::consts::FRAC_PI_4)]),
            RX(q, a) => RX(*q, -a),
            RY(q, a) => RY(*q, -a),
            RZ(q, a) => RZ(*q, -a),
            U1Q(q, m) => U1Q(*q, adjoint_literal::<4>(m, 2)),
            U2Q(a, b, m) => U2Q(*a, *b, Box::new(adjoint_literal::<16>(&m[..], 4))),
            Perm(t, table) => {
                let mut inv = vec![0; table.len()];
                for (i, &p) in table.iter().enumerate() {
                    inv[p] = i;
                }
                Perm(t.clone(), inv)
            }
        }
    }

    /// 2×2 matrix of a single-qubit gate.
    pub(crate) fn matrix_1q(&self) -> Option<[C64; 4]> {
        use Gate::*;
        let z = c(0.0, 0.0);
        let one = c(1.0, 0.0);
        Some(match self {
            H(_) => [c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0), c(-FRAC_1_SQRT_2, 0.0)],
            X(_) => [z, one, one, z],
            Y(_) => [z, c(0.0, -1.0), c(0.0, 1.0), z],
            Z(_) => [one, z, z, -one],
            S(_) => [one, z, z, c(0.0, 1.0)],
            T(_) => [one, z, z, C64::from_polar(1.0, std::f64::consts::FRAC_PI_4)],
            RX(_, a) => {
                let (s, co) = (a / 2.0).sin_cos();
                [c(co, 0.0), c(0.0, -s), c(0.0, -s), c(co, 0.0)]
            }
            RY(_, a) => {
                let (s, co) = (a / 2.0).sin_cos();
                [c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0)]
            }
            RZ(_, a) => [C64::from_polar(1.0, -a / 2.0), z, z, C64::from_polar(1.0, a / 2.0)],
            U1Q(_, m) => *m,
            _ => return None,
        })
    }

    /// 4×4 matrix of a generic two-qubit literal.
    pub(crate) fn matrix_2q(&self) -> Option<[C64; 16]> {
        match self {
            Gate::U2Q(_, _, m) => Some(**m),
            _ => None,
        }
    }
}

fn adjoint_literal<const L: usize>(m: &[C64], dim: usize) -> [C64; L] {
    let mut out = [C64::new(0.0, 0.0); L];
    for r in 0..dim {
        for k in 0..dim {
            out[r * dim + k] = m[k * dim + r].conj();
        }
    }
    out
}

fn check_unitary(m: &[C64], dim: usize, name: &str) -> Result<()> {
    if m.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
        return Err(Error::InvalidGate(format!("{name} literal has non-finite entries")));
    }
    for r in 0..dim {
        for s in 0..dim {
            let dot: C64 = (0..dim).map(|k| m[k * dim + r].conj() * m[k * dim + s]).sum();
            let want = if r == s { 1.0 } else { 0.0 };
            if (dot - C64::new(want, 0.0)).norm() > UNITARY_TOL {
                return Err(Error::InvalidGate(format!("{name} literal is not unitary within {UNITARY_TOL:e}")));
            }
        }
    }
    Ok(())
}
