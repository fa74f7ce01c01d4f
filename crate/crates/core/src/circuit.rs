//! Circuit intermediate representation and parsers.
//!
//! Two input formats are supported:
//!
//! * `ms-text` — the native format: a `qubits <Q>` header followed by one
//!   gate per line, e.g. `MS q[0], q[1]`. `#` starts a comment. `MS` is the
//!   only 2-qubit mnemonic; any other token must take a single operand and
//!   is kept but ignored by mapping.
//! * `qasm2` — an OpenQASM 2 subset: `qreg` declarations (flattened in
//!   declaration order), `ms`/`cx`/`cz` as 2-qubit interactions, any
//!   single-qubit mnemonic, `barrier`/`measure`/`creg`/comments ignored.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Qubit = u32;

/// Unordered qubit pair, stored canonically with `a < b`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct QubitPair {
    a: Qubit,
    b: Qubit,
}

impl QubitPair {
    /// Panics if `x == y`; a gate between a qubit and itself is ill-formed.
    pub fn new(x: Qubit, y: Qubit) -> Self {
        assert_ne!(x, y, "qubit pair requires distinct qubits");
        if x < y {
            QubitPair { a: x, b: y }
        } else {
            QubitPair { a: y, b: x }
        }
    }

    pub fn a(&self) -> Qubit {
        self.a
    }

    pub fn b(&self) -> Qubit {
        self.b
    }

    pub fn contains(&self, q: Qubit) -> bool {
        self.a == q || self.b == q
    }

    pub fn other(&self, q: Qubit) -> Qubit {
        if q == self.a {
            self.b
        } else {
            self.a
        }
    }
}

impl fmt::Debug for QubitPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

/// Gate operands in source order (source order is preserved so that
/// parse -> serialize -> parse round-trips exactly).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Operands {
    Single(Qubit),
    Pair(Qubit, Qubit),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gate {
    /// Uppercased mnemonic, e.g. `MS`, `GPI`.
    pub kind: String,
    pub operands: Operands,
}

impl Gate {
    pub fn ms(x: Qubit, y: Qubit) -> Self {
        Gate { kind: "MS".to_string(), operands: Operands::Pair(x, y) }
    }

    pub fn single(kind: &str, q: Qubit) -> Self {
        Gate { kind: kind.to_uppercase(), operands: Operands::Single(q) }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self.operands, Operands::Pair(_, _))
    }

    /// Canonical unordered pair for a 2-qubit gate.
    pub fn pair(&self) -> Option<QubitPair> {
        match self.operands {
            Operands::Pair(x, y) => Some(QubitPair::new(x, y)),
            Operands::Single(_) => None,
        }
    }

    pub fn qubits(&self) -> impl Iterator<Item = Qubit> {
        let (first, second) = match self.operands {
            Operands::Single(q) => (q, None),
            Operands::Pair(x, y) => (x, Some(y)),
        };
        std::iter::once(first).chain(second)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Circuit {
    pub name: String,
    pub num_qubits: u32,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(name: impl Into<String>, num_qubits: u32, gates: Vec<Gate>) -> Self {
        Circuit { name: name.into(), num_qubits, gates }
    }

    /// Number of 2-qubit gates (the `G` statistic). 1-qubit gates are
    /// excluded from all mapping heuristics.
    pub fn two_qubit_gate_count(&self) -> u32 {
        self.gates.iter().filter(|g| g.is_two_qubit()).count() as u32
    }

    /// 2-qubit gates in program order, with their gate-list index.
    pub fn two_qubit_gates(&self) -> impl Iterator<Item = (usize, QubitPair)> + '_ {
        self.gates
            .iter()
            .enumerate()
            .filter_map(|(i, g)| g.pair().map(|p| (i, p)))
    }

    /// Canonical pair sequence of the 2-qubit gates only.
    pub fn pair_sequence(&self) -> Vec<QubitPair> {
        self.gates.iter().filter_map(|g| g.pair()).collect()
    }

    pub fn validate(&self) -> Result<()> {
        for (i, gate) in self.gates.iter().enumerate() {
            for q in gate.qubits() {
                if q >= self.num_qubits {
                    return Err(Error::InvalidCircuit(format!(
                        "gate {i} references qubit {q} but circuit has {} qubits",
                        self.num_qubits
                    )));
                }
            }
            if let Operands::Pair(x, y) = gate.operands {
                if x == y {
                    return Err(Error::InvalidCircuit(format!(
                        "gate {i} uses qubit {x} twice"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Serialize to ms-text. 2-qubit gates are written as `MS` regardless
    /// of the imported mnemonic; 1-qubit kinds are kept verbatim.
    pub fn to_ms_text(&self) -> String {
        let mut out = String::with_capacity(16 * (self.gates.len() + 1));
        out.push_str(&format!("qubits {}\n", self.num_qubits));
        for gate in &self.gates {
            match gate.operands {
                Operands::Pair(x, y) => {
                    out.push_str(&format!("MS q[{x}], q[{y}]\n"));
                }
                Operands::Single(q) => {
                    out.push_str(&format!("{} q[{q}]\n", gate.kind));
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CircuitFormat {
    MsText,
    Qasm2,
}

impl std::str::FromStr for CircuitFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ms-text" | "ms" | "mstext" => Ok(CircuitFormat::MsText),
            "qasm2" | "qasm" | "qasm2-subset" => Ok(CircuitFormat::Qasm2),
            other => Err(Error::Config(format!("unknown circuit format '{other}'"))),
        }
    }
}

pub fn parse_circuit(text: &str, format: CircuitFormat, name: &str) -> Result<Circuit> {
    match format {
        CircuitFormat::MsText => parse_ms_text(text, name),
        CircuitFormat::Qasm2 => parse_qasm2(text, name),
    }
}

// ---------------------------------------------------------------------------
// ms-text
// ---------------------------------------------------------------------------

fn strip_comment(line: &str, marker: &str) -> String {
    match line.find(marker) {
        Some(pos) => line[..pos].to_string(),
        None => line.to_string(),
    }
}

/// Parse one `q[<idx>]` operand reference.
fn parse_operand(tok: &str, line_no: usize) -> Result<Qubit> {
    let tok = tok.trim();
    let rest = tok
        .strip_prefix("q[")
        .ok_or_else(|| Error::parse(line_no, format!("expected q[<index>], found '{tok}'")))?;
    let idx = rest
        .strip_suffix(']')
        .ok_or_else(|| Error::parse(line_no, format!("missing ']' in operand '{tok}'")))?;
    idx.trim()
        .parse::<u32>()
        .map_err(|_| Error::parse(line_no, format!("invalid qubit index '{idx}'")))
}

pub fn parse_ms_text(text: &str, name: &str) -> Result<Circuit> {
    let mut num_qubits: Option<u32> = None;
    let mut gates = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw, "#");
        let line = line.trim();
        if line.is_empty() {
            continue;
        }

        if num_qubits.is_none() {
            let rest = line
                .strip_prefix("qubits")
                .ok_or_else(|| Error::parse(line_no, "expected header 'qubits <Q>'"))?;
            let q = rest
                .trim()
                .parse::<u32>()
                .map_err(|_| Error::parse(line_no, format!("invalid qubit count '{}'", rest.trim())))?;
            num_qubits = Some(q);
            continue;
        }
        let declared = num_qubits.unwrap();

        let (mnemonic, rest) = match line.find(char::is_whitespace) {
            Some(pos) => (&line[..pos], line[pos..].trim()),
            None => return Err(Error::parse(line_no, format!("expected operands after '{line}'"))),
        };
        if !mnemonic.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
            || !mnemonic.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
        {
            return Err(Error::parse(line_no, format!("invalid gate mnemonic '{mnemonic}'")));
        }
        let kind = mnemonic.to_uppercase();

        let operands: Vec<Qubit> = rest
            .split(',')
            .map(|tok| parse_operand(tok, line_no))
            .collect::<Result<_>>()?;
        for &q in &operands {
            if q >= declared {
                return Err(Error::parse(
                    line_no,
                    format!("qubit index {q} exceeds declared register size {declared}"),
                ));
            }
        }

        let gate = match (kind.as_str(), operands.as_slice()) {
            ("MS", [x, y]) => {
                if x == y {
                    return Err(Error::parse(line_no, format!("duplicate operand q[{x}] in MS gate")));
                }
                Gate { kind, operands: Operands::Pair(*x, *y) }
            }
            ("MS", _) => {
                return Err(Error::parse(line_no, "MS gate requires exactly two operands"));
            }
            (_, [q]) => Gate { kind, operands: Operands::Single(*q) },
            (_, _) => {
                return Err(Error::parse(
                    line_no,
                    format!("'{kind}' is not a known 2-qubit mnemonic (only MS takes two operands)"),
                ));
            }
        };
        gates.push(gate);
    }

    let num_qubits =
        num_qubits.ok_or_else(|| Error::parse(text.lines().count().max(1), "missing 'qubits <Q>' header"))?;
    let circuit = Circuit::new(name, num_qubits, gates);
    circuit.validate()?;
    Ok(circuit)
}

// ---------------------------------------------------------------------------
// OpenQASM 2 subset
// ---------------------------------------------------------------------------

const QASM_TWO_QUBIT: [&str; 3] = ["ms", "cx", "cz"];
const QASM_IGNORED: [&str; 4] = ["barrier", "measure", "creg", "reset"];

pub fn parse_qasm2(text: &str, name: &str) -> Result<Circuit> {
    // register name -> (offset, size), flattened in declaration order
    let mut registers: Vec<(String, u32, u32)> = Vec::new();
    let mut total_qubits: u32 = 0;
    let mut gates = Vec::new();

    let resolve = |registers: &[(String, u32, u32)], arg: &str, line_no: usize| -> Result<Qubit> {
        let arg = arg.trim();
        let open = arg
            .find('[')
            .ok_or_else(|| Error::parse(line_no, format!("expected reg[<index>], found '{arg}'")))?;
        let reg_name = &arg[..open];
        let idx_str = arg[open + 1..]
            .strip_suffix(']')
            .ok_or_else(|| Error::parse(line_no, format!("missing ']' in '{arg}'")))?;
        let idx: u32 = idx_str
            .trim()
            .parse()
            .map_err(|_| Error::parse(line_no, format!("invalid index '{idx_str}'")))?;
        let (_, offset, size) = registers
            .iter()
            .find(|(n, _, _)| n == reg_name)
            .ok_or_else(|| Error::parse(line_no, format!("unknown register '{reg_name}'")))?;
        if idx >= *size {
            return Err(Error::parse(
                line_no,
                format!("qubit index {idx} exceeds declared register size {size}"),
            ));
        }
        Ok(offset + idx)
    };

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw, "//");
        let line = line.trim();
        if line.is_empty() || line.starts_with("OPENQASM") || line.starts_with("include") {
            continue;
        }
        let stmt = line
            .strip_suffix(';')
            .ok_or_else(|| Error::parse(line_no, format!("missing ';' after '{line}'")))?
            .trim();
        if stmt.is_empty() {
            continue;
        }

        let (head, rest) = match stmt.find(char::is_whitespace) {
            Some(pos) => (&stmt[..pos], stmt[pos..].trim()),
            None => (stmt, ""),
        };
        // split `name(params)` into mnemonic + dropped params
        let mnemonic = head.split('(').next().unwrap_or(head).to_ascii_lowercase();

        if mnemonic == "qreg" {
            let open = rest
                .find('[')
                .ok_or_else(|| Error::parse(line_no, "malformed qreg declaration"))?;
            let reg_name = rest[..open].trim().to_string();
            let size: u32 = rest[open + 1..]
                .trim_end_matches(']')
                .trim()
                .parse()
                .map_err(|_| Error::parse(line_no, "invalid qreg size"))?;
            registers.push((reg_name, total_qubits, size));
            total_qubits += size;
            continue;
        }
        if QASM_IGNORED.contains(&mnemonic.as_str()) {
            continue;
        }

        // `u3(0.1,0.2,0.3) q[0]` keeps params inside head when there is no
        // space before the operand; re-split on the closing paren.
        let rest = if rest.is_empty() && head.contains('(') {
            match stmt.rfind(')') {
                Some(p) => stmt[p + 1..].trim(),
                None => return Err(Error::parse(line_no, "unbalanced parentheses")),
            }
        } else {
            rest
        };

        let args: Vec<Qubit> = rest
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| resolve(&registers, s, line_no))
            .collect::<Result<_>>()?;

        match args.len() {
            1 => gates.push(Gate { kind: mnemonic.to_uppercase(), operands: Operands::Single(args[0]) }),
            2 if QASM_TWO_QUBIT.contains(&mnemonic.as_str()) => {
                if args[0] == args[1] {
                    return Err(Error::parse(
                        line_no,
                        format!("duplicate operand q[{}] in {mnemonic} gate", args[0]),
                    ));
                }
                gates.push(Gate {
                    kind: mnemonic.to_uppercase(),
                    operands: Operands::Pair(args[0], args[1]),
                });
            }
            2 => {
                return Err(Error::parse(
                    line_no,
                    format!("unsupported multi-qubit gate '{mnemonic}' (supported: ms, cx, cz)"),
                ));
            }
            0 => return Err(Error::parse(line_no, format!("missing operands for '{mnemonic}'"))),
            n => {
                return Err(Error::parse(
                    line_no,
                    format!("unsupported {n}-operand gate '{mnemonic}'"),
                ));
            }
        }
    }

    if registers.is_empty() {
        return Err(Error::parse(1, "no qreg declaration found"));
    }
    let circuit = Circuit::new(name, total_qubits, gates);
    circuit.validate()?;
    Ok(circuit)
}

// ---------------------------------------------------------------------------
// Reference programs used across the test suites
// ---------------------------------------------------------------------------

/// The 10-gate, 6-qubit MS sample program: edge multiset
/// {(0,1) x4, (1,2) x2, (2,3), (4,5), (3,5), (2,4)}, first gate (0,1),
/// third gate (2,3), dependency depth 6. All re-occurrences fall in the
/// second half of the program.
pub fn sample_program() -> Circuit {
    let pairs = [
        (0, 1),
        (1, 2),
        (2, 3),
        (4, 5),
        (3, 5),
        (0, 1),
        (1, 2),
        (0, 1),
        (0, 1),
        (2, 4),
    ];
    Circuit::new(
        "sample10",
        6,
        pairs.iter().map(|&(x, y)| Gate::ms(x, y)).collect(),
    )
}

/// Same edge multiset as [`sample_program`], ordered so that the 5th and
/// 6th gates are independent, sit in the second layer, and hang off the
/// 1st and 3rd gates respectively.
pub fn layered_sample_program() -> Circuit {
    let pairs = [
        (0, 1),
        (4, 5),
        (2, 3),
        (2, 4),
        (0, 1),
        (3, 5),
        (1, 2),
        (1, 2),
        (0, 1),
        (0, 1),
    ];
    Circuit::new(
        "sample10-layered",
        6,
        pairs.iter().map(|&(x, y)| Gate::ms(x, y)).collect(),
    )
}
