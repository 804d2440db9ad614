//! Line-oriented circuit format.
//!
//! ```text
//! # comment
//! qubits 3
//! H 0
//! CX 0 1
//! RZ 2 1.5707963
//! U1Q 0 a_re a_im b_re b_im c_re c_im d_re d_im
//! U2Q 0 1 <32 floats, row-major re/im pairs>
//! PERM 2 0 1 3 2 1 0
//! ```
//!
//! `PERM k t_1 … t_k p_0 … p_{2^k-1}` lists the target count, the targets and
//! the relabeling table.

use std::fmt::Write as _;

use super::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::C64;

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tok = line.split_whitespace();
        let head = tok.next().expect("non-empty line");
        let rest: Vec<&str> = tok.collect();
        let Some(c) = circuit.as_mut() else {
            if !head.eq_ignore_ascii_case("qubits") || rest.len() != 1 {
                return Err(perr(lineno, "first line must be `qubits N`"));
            }
            let n = rest[0].parse::<usize>().map_err(|e| perr(lineno, format!("bad qubit count: {e}")))?;
            circuit = Some(Circuit::new(n));
            continue;
        };
        let gate = parse_gate(head, &rest).map_err(|msg| perr(lineno, msg))?;
        c.push(gate).map_err(|e| perr(lineno, e.to_string()))?;
    }
    circuit.ok_or_else(|| perr(0, "missing `qubits N` header"))
}

fn parse_gate(head: &str, args: &[&str]) -> std::result::Result<Gate, String> {
    let q = |k: usize| -> std::result::Result<usize, String> {
        args.get(k).ok_or_else(|| format!("{head}: missing qubit argument"))?.parse::<usize>().map_err(|e| format!("{head}: {e}"))
    };
    let f = |k: usize| -> std::result::Result<f64, String> {
        args.get(k).ok_or_else(|| format!("{head}: missing numeric argument"))?.parse::<f64>().map_err(|e| format!("{head}: {e}"))
    };
    let arity = |want: usize| -> std::result::Result<(), String> {
        if args.len() == want {
            Ok(())
        } else {
            Err(format!("{head} takes {want} arguments, got {}", args.len()))
        }
    };
    let name = head.to_ascii_uppercase();
    let gate = match name.as_str() {
        "H" | "X" | "Y" | "Z" | "S" | "T" => {
            arity(1)?;
            let t = q(0)?;
            match name.as_str() {
                "H" => Gate::H(t),
                "X" => Gate::X(t),
                "Y" => Gate::Y(t),
                "Z" => Gate::Z(t),
                "S" => Gate::S(t),
                _ => Gate::T(t),
            }
        }
        "CX" | "CNOT" | "CZ" | "SWAP" => {
            arity(2)?;
            let (a, b) = (q(0)?, q(1)?);
            match name.as_str() {
                "CZ" => Gate::CZ(a, b),
                "SWAP" => Gate::Swap(a, b),
                _ => Gate::CX(a, b),
            }
        }
        "RX" | "RY" | "RZ" => {
            arity(2)?;
            let (t, a) = (q(0)?, f(1)?);
            match name.as_str() {
                "RX" => Gate::RX(t, a),
                "RY" => Gate::RY(t, a),
                _ => Gate::RZ(t, a),
            }
        }
        "U1Q" => {
            arity(9)?;
            let mut m = [C64::new(0.0, 0.0); 4];
            for (k, e) in m.iter_mut().enumerate() {
                *e = C64::new(f(1 + 2 * k)?, f(2 + 2 * k)?);
            }
            Gate::U1Q(q(0)?, m)
        }
        "U2Q" => {
            arity(34)?;
            let mut m = [C64::new(0.0, 0.0); 16];
            for (k, e) in m.iter_mut().enumerate() {
                *e = C64::new(f(2 + 2 * k)?, f(3 + 2 * k)?);
            }
            Gate::U2Q(q(0)?, q(1)?, Box::new(m))
        }
        "PERM" => {
            let k = q(0)?;
            if k == 0 || k > 16 {
                return Err("PERM target count must be in 1..=16".into());
            }
            arity(1 + k + (1 << k))?;
            let targets = (1..=k).map(q).collect::<std::result::Result<Vec<_>, _>>()?;
            let table = (1 + k..1 + k + (1 << k)).map(q).collect::<std::result::Result<Vec<_>, _>>()?;
            Gate::Perm(targets, table)
        }
        other => return Err(format!("unknown gate {other:?}")),
    };
    Ok(gate)
}

/// Render a circuit in the text format; floats use shortest round-trip form.
pub fn write_circuit(c: &Circuit) -> String {
    let mut out = format!("qubits {}\n", c.n_qubits());
    for g in c.gates() {
        let _ = match g {
            Gate::RX(t, a) | Gate::RY(t, a) | Gate::RZ(t, a) => writeln!(out, "{} {t} {a:?}", g.name()),
            Gate::U1Q(t, m) => {
                let nums: Vec<String> = m.iter().flat_map(|z| [format!("{:?}", z.re), format!("{:?}", z.im)]).collect();
                writeln!(out, "U1Q {t} {}", nums.join(" "))
            }
            Gate::U2Q(a, b, m) => {
                let nums: Vec<String> = m.iter().flat_map(|z| [format!("{:?}", z.re), format!("{:?}", z.im)]).collect();
                writeln!(out, "U2Q {a} {b} {}", nums.join(" "))
            }
            Gate::Perm(t, table) => {
                let ts: Vec<String> = t.iter().map(|x| x.to_string()).collect();
                let ps: Vec<String> = table.iter().map(|x| x.to_string()).collect();
                writeln!(out, "PERM {} {} {}", t.len(), ts.join(" "), ps.join(" "))
            }
            other => {
                let ts: Vec<String> = other.targets().iter().map(|x| x.to_string()).collect();
                writeln!(out, "{} {}", other.name(), ts.join(" "))
            }
        };
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_documented_example() {
        let text = "# bell\nqubits 2\nH 0\nCX 0 1\nRZ 1 1.5707963\nU1Q 0 1 0 0 0 0 0 1 0\n";
        let c = parse_circuit(text).unwrap();
        assert_eq!(c.n_qubits(), 2);
        assert_eq!(c.gates().len(), 4);
        assert_eq!(c.gates()[2], Gate::RZ(1, 1.5707963));
    }

    #[test]
    fn reports_errors_with_line_numbers() {
        assert!(matches!(parse_circuit("H 0\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_circuit("qubits 2\nCX 0 2\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_circuit("qubits 1\nFOO 0\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_circuit("qubits 1\nU1Q 0 1 1 0 0 0 0 1 0\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn write_then_parse_is_identity() {
        let mut c = Circuit::new(3);
        c.push(Gate::H(0)).unwrap();
        c.push(Gate::RY(2, 0.1 + 0.2)).unwrap();
        c.push(Gate::S(1)).unwrap();
        c.push(Gate::S(1).adjoint()).unwrap();
        c.push(Gate::Perm(vec![2, 0], vec![1, 2, 3, 0])).unwrap();
        assert_eq!(parse_circuit(&write_circuit(&c)).unwrap(), c);
    }
}
