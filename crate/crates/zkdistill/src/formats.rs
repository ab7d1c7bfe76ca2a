//! Text formats: binary matrices, gate-list circuits and QASM-style export.

use std::fmt::Write as _;

use thiserror::Error;
use zkdistill_core::gf2::{BitMatrix, BitVector};
use zkdistill_core::protosim::{CircuitError, CliffordCircuit, Op};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("matrix rows have different lengths (line {line})")]
    Ragged { line: usize },
    #[error("missing QUBITS header")]
    MissingHeader,
    #[error("invalid circuit: {0}")]
    Circuit(CircuitError),
}

fn parse_err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse { line, message: message.into() }
}

/// One row per line, `0`/`1` characters; blank lines and `#` comments are skipped.
pub fn parse_matrix(text: &str) -> Result<BitMatrix, FormatError> {
    let mut rows = Vec::new();
    let mut cols = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bits = line
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(parse_err(i + 1, format!("unexpected character {other:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        match cols {
            None => cols = Some(bits.len()),
            Some(c) if c != bits.len() => return Err(FormatError::Ragged { line: i + 1 }),
            _ => {}
        }
        rows.push(BitVector::from_bools(&bits));
    }
    Ok(BitMatrix::from_rows(cols.unwrap_or(0), rows).expect("row lengths checked"))
}

pub fn write_matrix(m: &BitMatrix) -> String {
    m.rows().iter().map(|r| format!("{r}\n")).collect()
}

fn mnemonic(op: &Op) -> String {
    match op {
        Op::PrepZero(_) => "PREP_Z".into(),
        Op::PrepPlus(_) => "PREP_X".into(),
        Op::Cnot { .. } => "CNOT".into(),
        Op::H(_) => "H".into(),
        Op::S(_) => "S".into(),
        Op::SDagger(_) => "SDG".into(),
        Op::X(_) => "X".into(),
        Op::Z(_) => "Z".into(),
        Op::MeasureX(_) => "MX".into(),
        Op::MeasureZ(_) => "MZ".into(),
        Op::InjectZk { k, adaptive_correction: false, .. } => format!("INJECT_Z{k}"),
        Op::InjectZk { k, adaptive_correction: true, .. } => format!("CORRECT_Z{k}"),
    }
}

/// Gate list: a `QUBITS n` header, then one `OP q[,q...]` line per op.
pub fn write_gate_list(c: &CliffordCircuit) -> String {
    let mut out = format!("QUBITS {}\n", c.qubit_count());
    for op in c.ops() {
        let qubits: Vec<String> = op.qubits().iter().map(|q| q.to_string()).collect();
        writeln!(out, "{} {}", mnemonic(op), qubits.join(",")).expect("writing to a String");
    }
    out
}

fn single(line: usize, name: &str, qubits: &[usize]) -> Result<usize, FormatError> {
    match qubits {
        [q] => Ok(*q),
        _ => Err(parse_err(line, format!("{name} takes one qubit, got {}", qubits.len()))),
    }
}

fn parse_op(line: usize, name: &str, qubits: &[usize]) -> Result<Op, FormatError> {
    let q = || single(line, name, qubits);
    let op = match name {
        "PREP_Z" => Op::PrepZero(q()?),
        "PREP_X" => Op::PrepPlus(q()?),
        "H" => Op::H(q()?),
        "S" => Op::S(q()?),
        "SDG" => Op::SDagger(q()?),
        "X" => Op::X(q()?),
        "Z" => Op::Z(q()?),
        "MX" => Op::MeasureX(q()?),
        "MZ" => Op::MeasureZ(q()?),
        "CNOT" => match qubits {
            [control, targets @ ..] if !targets.is_empty() => Op::Cnot { control: *control, targets: targets.to_vec() },
            _ => return Err(parse_err(line, "CNOT needs a control and at least one target")),
        },
        other => {
            let (adaptive, k) = if let Some(k) = other.strip_prefix("INJECT_Z") {
                (false, k)
            } else if let Some(k) = other.strip_prefix("CORRECT_Z") {
                (true, k)
            } else {
                return Err(parse_err(line, format!("unknown op {other}")));
            };
            let k: u32 = k.parse().map_err(|_| parse_err(line, format!("bad rotation index in {other}")))?;
            Op::InjectZk { qubit: q()?, k, adaptive_correction: adaptive }
        }
    };
    Ok(op)
}

pub fn parse_gate_list(text: &str) -> Result<CliffordCircuit, FormatError> {
    let mut qubit_count = None;
    let mut ops = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (name, args) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let args = args.trim();
        if name == "QUBITS" {
            if qubit_count.is_some() {
                return Err(parse_err(line_no, "repeated QUBITS header"));
            }
            let n = args.parse().map_err(|_| parse_err(line_no, format!("bad qubit count {args:?}")))?;
            qubit_count = Some(n);
            continue;
        }
        if qubit_count.is_none() {
            return Err(FormatError::MissingHeader);
        }
        let qubits = args
            .split(',')
            .map(|s| s.trim().parse::<usize>().map_err(|_| parse_err(line_no, format!("bad qubit index {s:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        ops.push(parse_op(line_no, name, &qubits)?);
    }
    let n = qubit_count.ok_or(FormatError::MissingHeader)?;
    CliffordCircuit::from_ops(n, ops).map_err(FormatError::Circuit)
}

/// OpenQASM 2.0 flavoured export. Multi-target CNOTs become several `cx`,
/// preparations become `reset` (plus `h`), X measurements get an `h` first,
/// and `Z_k` injections are written as comment macros.
pub fn write_qasm(c: &CliffordCircuit) -> String {
    let mut out = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    let n = c.qubit_count();
    let m = c.measurement_count();
    writeln!(out, "qreg q[{n}];").unwrap();
    if m > 0 {
        writeln!(out, "creg c[{m}];").unwrap();
    }
    let mut bit = 0;
    for op in c.ops() {
        match op {
            Op::PrepZero(q) => writeln!(out, "reset q[{q}];"),
            Op::PrepPlus(q) => writeln!(out, "reset q[{q}];\nh q[{q}];"),
            Op::Cnot { control, targets } => {
                targets.iter().try_for_each(|t| writeln!(out, "cx q[{control}],q[{t}];"))
            }
            Op::H(q) => writeln!(out, "h q[{q}];"),
            Op::S(q) => writeln!(out, "s q[{q}];"),
            Op::SDagger(q) => writeln!(out, "sdg q[{q}];"),
            Op::X(q) => writeln!(out, "x q[{q}];"),
            Op::Z(q) => writeln!(out, "z q[{q}];"),
            Op::MeasureX(q) => {
                bit += 1;
                writeln!(out, "h q[{q}];\nmeasure q[{q}] -> c[{}];", bit - 1)
            }
            Op::MeasureZ(q) => {
                bit += 1;
                writeln!(out, "measure q[{q}] -> c[{}];", bit - 1)
            }
            Op::InjectZk { qubit, k, adaptive_correction: false } => writeln!(
                out,
                "// INJECT_Z{k} q[{qubit}]: prepare m = Z_{k}|+>; cx q[{qubit}],m; measure m; if(m==1) Z_{} q[{qubit}]",
                k.saturating_sub(1)
            ),
            Op::InjectZk { qubit, k, adaptive_correction: true } => {
                writeln!(out, "// CORRECT_Z{k} q[{qubit}]: conditional on the preceding teleport outcome")
            }
        }
        .expect("writing to a String");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use zkdistill_core::protosim::{build_distillation_circuit, build_zk_teleport};

    #[test]
    fn matrix_round_trip() {
        let text = "1111\n0101\n";
        let m = parse_matrix(text).unwrap();
        assert_eq!((m.row_count(), m.col_count()), (2, 4));
        assert_eq!(write_matrix(&m), text);
        assert_eq!(parse_matrix("11\n1\n"), Err(FormatError::Ragged { line: 2 }));
        assert!(matches!(parse_matrix("12\n"), Err(FormatError::Parse { line: 1, .. })));
        let commented = parse_matrix("# header\n1 0 1\n\n011  # trailing\n").unwrap();
        assert_eq!(write_matrix(&commented), "101\n011\n");
    }

    #[test]
    fn gate_list_round_trip() {
        for k in 2..=4 {
            let c = build_distillation_circuit(k).unwrap().circuit;
            let text = write_gate_list(&c);
            let parsed = parse_gate_list(&text).unwrap();
            assert_eq!(parsed, c);
            assert_eq!(write_gate_list(&parsed), text);
        }
        let t = build_zk_teleport(3).unwrap().circuit;
        let text = write_gate_list(&t);
        assert!(text.contains("CORRECT_Z2 0"));
        assert_eq!(parse_gate_list(&text).unwrap(), t);
    }

    #[test]
    fn gate_list_errors() {
        assert_eq!(parse_gate_list("H 0\n"), Err(FormatError::MissingHeader));
        assert!(matches!(parse_gate_list("QUBITS 2\nFOO 1\n"), Err(FormatError::Parse { line: 2, .. })));
        assert!(matches!(parse_gate_list("QUBITS 2\nCNOT 1\n"), Err(FormatError::Parse { .. })));
        assert!(matches!(parse_gate_list("QUBITS 2\nH 0,1\n"), Err(FormatError::Parse { .. })));
        assert!(matches!(parse_gate_list("QUBITS 2\nH 5\n"), Err(FormatError::Circuit(_))));
        assert!(matches!(parse_gate_list("QUBITS 2\nINJECT_Zx 0\n"), Err(FormatError::Parse { .. })));
    }

    #[test]
    fn qasm_export() {
        let c = build_distillation_circuit(2).unwrap().circuit;
        let q = write_qasm(&c);
        assert!(q.starts_with("OPENQASM 2.0;"));
        assert!(q.contains("qreg q[16];"));
        assert!(q.contains("creg c[15];"));
        assert_eq!(q.matches("// INJECT_Z2").count(), 15);
        assert_eq!(q.matches("measure q[").count(), 15);
    }
}
