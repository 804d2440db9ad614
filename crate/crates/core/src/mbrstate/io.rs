//! JSON documents for MBR states:
//! `{ "n": 3, "bases": ["qubits 3\nH 0\n…"], "weights": [..],
//!    "components": [{ "support": [..], "coeffs": [[re, im], ..] }] }`.
//!
//! Floats are written in shortest round-trip form, so load after save is
//! bit-exact.

use serde::{Deserialize, Serialize};

use super::{MbrState, SparseState};
use crate::error::{Error, Result};
use crate::qcore::{parse_circuit, write_circuit};
use crate::C64;

#[derive(Serialize, Deserialize)]
struct ComponentDoc {
    support: Vec<usize>,
    coeffs: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MbrDoc {
    n: usize,
    bases: Vec<String>,
    weights: Vec<f64>,
    components: Vec<ComponentDoc>,
}

fn to_doc(m: &MbrState) -> MbrDoc {
    MbrDoc {
        n: m.n_qubits(),
        bases: m.bases().iter().map(write_circuit).collect(),
        weights: m.weights().to_vec(),
        components: m
            .components()
            .iter()
            .map(|s| ComponentDoc {
                support: s.support().to_vec(),
                coeffs: s.coeffs().iter().map(|c| [c.re, c.im]).collect(),
            })
            .collect(),
    }
}

pub fn save_mbr(m: &MbrState) -> Result<String> {
    Ok(serde_json::to_string_pretty(&to_doc(m))?)
}

/// The same document as a JSON value, for embedding in reports.
pub fn mbr_to_value(m: &MbrState) -> serde_json::Value {
    serde_json::to_value(to_doc(m)).expect("MBR document always serializes")
}

pub fn load_mbr(text: &str) -> Result<MbrState> {
    let doc: MbrDoc = serde_json::from_str(text)?;
    let bases = doc.bases.iter().map(|b| parse_circuit(b)).collect::<Result<Vec<_>>>()?;
    if let Some(b) = bases.iter().find(|b| b.n_qubits() != doc.n) {
        return Err(Error::QubitMismatch { expected: doc.n, got: b.n_qubits() });
    }
    let components = doc
        .components
        .into_iter()
        .map(|c| SparseState::new(doc.n, c.support, c.coeffs.into_iter().map(|[re, im]| C64::new(re, im)).collect()))
        .collect::<Result<Vec<_>>>()?;
    MbrState::new(bases, doc.weights, components)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::Circuit;

    #[test]
    fn round_trip_is_bit_exact() {
        let c = [C64::new(0.1 + 0.2, -1.0 / 3.0), C64::new(std::f64::consts::PI / 7.0, 0.0)];
        let s = SparseState::normalized(2, vec![2, 1], c.to_vec()).unwrap();
        let m = MbrState::new(vec![Circuit::hadamard_all(2)], vec![1.0 / 3.0], vec![s]).unwrap();
        let back = load_mbr(&save_mbr(&m).unwrap()).unwrap();
        assert_eq!(back, m);
        assert_eq!(save_mbr(&back).unwrap(), save_mbr(&m).unwrap());
    }

    #[test]
    fn rejects_malformed_documents() {
        assert!(load_mbr("{}").is_err());
        let bad_n = r#"{"n":3,"bases":["qubits 2\n"],"weights":[1],"components":[{"support":[0],"coeffs":[[1,0]]}]}"#;
        assert!(load_mbr(bad_n).is_err());
    }
}
