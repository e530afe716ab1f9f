//! Gate-level circuit IR.
//!
//! Gates are stored on physical qubits. A [`CircuitBuilder`] additionally keeps
//! a relabeling frame, so that wire permutations such as ShiftRows cost no
//! gates: builders keep addressing the same logical labels while the frame
//! decides which physical qubit a label denotes.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type QubitId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GateKind {
    PauliX,
    Hadamard,
    PauliZ,
    Cnot,
    Toffoli,
    MultiControlledX,
    MultiControlledZ,
}

impl GateKind {
    pub const ALL: [GateKind; 7] = [
        GateKind::PauliX,
        GateKind::Hadamard,
        GateKind::PauliZ,
        GateKind::Cnot,
        GateKind::Toffoli,
        GateKind::MultiControlledX,
        GateKind::MultiControlledZ,
    ];

    /// Mnemonic used in the text format and in statistics.
    pub const fn mnemonic(self) -> &'static str {
        match self {
            GateKind::PauliX => "x",
            GateKind::Hadamard => "h",
            GateKind::PauliZ => "z",
            GateKind::Cnot => "cx",
            GateKind::Toffoli => "ccx",
            GateKind::MultiControlledX => "mcx",
            GateKind::MultiControlledZ => "mcz",
        }
    }
}

/// A gate. Every kind in this IR is self-inverse.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    X(QubitId),
    H(QubitId),
    Z(QubitId),
    Cx {
        control: QubitId,
        target: QubitId,
    },
    Ccx {
        controls: [QubitId; 2],
        target: QubitId,
    },
    Mcx {
        controls: Vec<QubitId>,
        target: QubitId,
    },
    /// Phase flip on the all-ones state of the operands; stored sorted.
    Mcz(Vec<QubitId>),
}

impl Gate {
    pub fn mcz(qubits: impl IntoIterator<Item = QubitId>) -> Gate {
        let mut q: Vec<_> = qubits.into_iter().collect();
        q.sort_unstable();
        Gate::Mcz(q)
    }

    pub fn kind(&self) -> GateKind {
        match self {
            Gate::X(_) => GateKind::PauliX,
            Gate::H(_) => GateKind::Hadamard,
            Gate::Z(_) => GateKind::PauliZ,
            Gate::Cx { .. } => GateKind::Cnot,
            Gate::Ccx { .. } => GateKind::Toffoli,
            Gate::Mcx { .. } => GateKind::MultiControlledX,
            Gate::Mcz(_) => GateKind::MultiControlledZ,
        }
    }

    /// Controls, or every operand for `Mcz`.
    pub fn controls(&self) -> &[QubitId] {
        match self {
            Gate::X(_) | Gate::H(_) | Gate::Z(_) => &[],
            Gate::Cx { control, .. } => std::slice::from_ref(control),
            Gate::Ccx { controls, .. } => controls,
            Gate::Mcx { controls, .. } => controls,
            Gate::Mcz(q) => q,
        }
    }

    pub fn target(&self) -> Option<QubitId> {
        match *self {
            Gate::X(q) | Gate::H(q) | Gate::Z(q) => Some(q),
            Gate::Cx { target, .. } | Gate::Ccx { target, .. } | Gate::Mcx { target, .. } => Some(target),
            Gate::Mcz(_) => None,
        }
    }

    pub fn qubits(&self) -> impl Iterator<Item = QubitId> + '_ {
        self.controls().iter().copied().chain(self.target())
    }

    pub fn map_qubits(&self, f: impl Fn(QubitId) -> QubitId) -> Gate {
        match self {
            Gate::X(q) => Gate::X(f(*q)),
            Gate::H(q) => Gate::H(f(*q)),
            Gate::Z(q) => Gate::Z(f(*q)),
            Gate::Cx { control, target } => Gate::Cx {
                control: f(*control),
                target: f(*target),
            },
            Gate::Ccx { controls, target } => Gate::Ccx {
                controls: controls.map(&f),
                target: f(*target),
            },
            Gate::Mcx { controls, target } => Gate::Mcx {
                controls: controls.iter().map(|&q| f(q)).collect(),
                target: f(*target),
            },
            Gate::Mcz(q) => Gate::mcz(q.iter().map(|&q| f(q))),
        }
    }

    pub fn validate(&self, qubit_count: usize) -> Result<()> {
        match self {
            Gate::Mcx { controls, .. } if controls.is_empty() => {
                return Err(Error::BadArity {
                    kind: "mcx",
                    expected: "at least 1",
                    got: 0,
                })
            }
            Gate::Mcz(q) if q.is_empty() => {
                return Err(Error::BadArity {
                    kind: "mcz",
                    expected: "at least 1",
                    got: 0,
                })
            }
            _ => {}
        }
        let mut seen = HashSet::new();
        for q in self.qubits() {
            if q >= qubit_count {
                return Err(Error::QubitOutOfRange {
                    qubit: q,
                    count: qubit_count,
                });
            }
            if !seen.insert(q) {
                return Err(Error::OperandOverlap(q));
            }
        }
        Ok(())
    }

    fn to_text(&self) -> String {
        let list = |qs: &[QubitId]| qs.iter().map(|q| format!("q[{q}]")).collect::<Vec<_>>().join(",");
        let operands: Vec<QubitId> = self.qubits().collect();
        format!("{} {}", self.kind().mnemonic(), list(&operands))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Register {
    pub name: String,
    pub qubits: Vec<QubitId>,
}

/// A relabeling applied just before gate `at`.
///
/// `perm[q]` is the label that the qubit formerly addressed as `q` carries
/// from this point on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relabel {
    pub at: usize,
    pub perm: Vec<QubitId>,
}

fn invert_perm(perm: &[QubitId]) -> Vec<QubitId> {
    let mut inv = vec![0; perm.len()];
    for (q, &p) in perm.iter().enumerate() {
        inv[p] = q;
    }
    inv
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Circuit {
    qubit_count: usize,
    gates: Vec<Gate>,
    registers: Vec<Register>,
    relabel_log: Vec<Relabel>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitStats {
    pub qubit_count: usize,
    pub gate_count_by_kind: BTreeMap<String, usize>,
    pub total_gates: usize,
    pub depth: usize,
}

impl Circuit {
    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn register(&self, name: &str) -> Option<&[QubitId]> {
        self.registers
            .iter()
            .find(|r| r.name == name)
            .map(|r| r.qubits.as_slice())
    }

    pub fn relabel_log(&self) -> &[Relabel] {
        &self.relabel_log
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn inverse(&self) -> Circuit {
        let len = self.gates.len();
        Circuit {
            qubit_count: self.qubit_count,
            gates: self.gates.iter().rev().cloned().collect(),
            registers: self.registers.clone(),
            relabel_log: self
                .relabel_log
                .iter()
                .rev()
                .map(|r| Relabel {
                    at: len - r.at,
                    perm: invert_perm(&r.perm),
                })
                .collect(),
        }
    }

    /// Removes gate `index`; meant for building deliberately broken fixtures.
    pub fn remove_gate(&mut self, index: usize) -> Gate {
        for r in &mut self.relabel_log {
            if r.at > index {
                r.at -= 1;
            }
        }
        self.gates.remove(index)
    }

    pub fn stats(&self) -> CircuitStats {
        let mut by_kind = BTreeMap::new();
        let mut frontier = vec![0usize; self.qubit_count];
        let mut depth = 0;
        for g in &self.gates {
            *by_kind.entry(g.kind().mnemonic().to_string()).or_insert(0) += 1;
            let level = 1 + g.qubits().map(|q| frontier[q]).max().unwrap_or(0);
            for q in g.qubits() {
                frontier[q] = level;
            }
            depth = depth.max(level);
        }
        CircuitStats {
            qubit_count: self.qubit_count,
            gate_count_by_kind: by_kind,
            total_gates: self.gates.len(),
            depth,
        }
    }

    /// Line-oriented export. Register ranges are half-open; relabelings
    /// appear as comments listing the moved labels.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "qubits {}", self.qubit_count).unwrap();
        for r in &self.registers {
            writeln!(out, "reg {} {}", r.name, format_qubit_set(&r.qubits)).unwrap();
        }
        let mut log = self.relabel_log.iter().peekable();
        for (i, g) in self.gates.iter().enumerate() {
            while let Some(r) = log.next_if(|r| r.at == i) {
                write_relabel(&mut out, r);
            }
            writeln!(out, "{}", g.to_text()).unwrap();
        }
        for r in log {
            write_relabel(&mut out, r);
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Circuit> {
        let mut lines = text.lines().map(str::trim).enumerate().filter(|(_, l)| !l.is_empty());
        let bad = |n: usize, msg: &str| Error::Parse(format!("line {}: {msg}", n + 1));
        let (n0, header) = lines.next().ok_or_else(|| bad(0, "empty input"))?;
        let qubit_count: usize = header
            .strip_prefix("qubits ")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| bad(n0, "expected `qubits N`"))?;
        let mut c = Circuit {
            qubit_count,
            ..Circuit::default()
        };
        for (n, line) in lines {
            if let Some(rest) = line.strip_prefix("# relabel") {
                let mut perm: Vec<QubitId> = (0..qubit_count).collect();
                for pair in rest.split(',').map(str::trim).filter(|p| !p.is_empty()) {
                    let (a, b) = pair
                        .split_once("->")
                        .ok_or_else(|| bad(n, "relabel entry lacks `->`"))?;
                    let a = parse_qubit(a).ok_or_else(|| bad(n, "bad qubit"))?;
                    let b = parse_qubit(b).ok_or_else(|| bad(n, "bad qubit"))?;
                    if a >= qubit_count || b >= qubit_count {
                        return Err(bad(n, "relabel qubit out of range"));
                    }
                    perm[a] = b;
                }
                let mut seen = vec![false; qubit_count];
                for &p in &perm {
                    if std::mem::replace(&mut seen[p], true) {
                        return Err(Error::NotBijective);
                    }
                }
                c.relabel_log.push(Relabel {
                    at: c.gates.len(),
                    perm,
                });
                continue;
            }
            if line.starts_with('#') {
                continue;
            }
            let (word, rest) = line.split_once(' ').unwrap_or((line, ""));
            if word == "reg" {
                let (name, set) = rest
                    .trim()
                    .split_once(' ')
                    .ok_or_else(|| bad(n, "expected `reg NAME QUBITS`"))?;
                let qubits = parse_qubit_set(set).ok_or_else(|| bad(n, "bad register"))?;
                c.registers.push(Register {
                    name: name.to_string(),
                    qubits,
                });
                continue;
            }
            let qs: Vec<QubitId> = rest
                .split(',')
                .map(|q| parse_qubit(q).ok_or_else(|| bad(n, "bad qubit")))
                .collect::<Result<_>>()?;
            let arity = |k: usize| {
                if qs.len() == k {
                    Ok(())
                } else {
                    Err(bad(n, &format!("`{word}` takes {k} operand(s)")))
                }
            };
            let gate = match word {
                "x" => arity(1).map(|_| Gate::X(qs[0]))?,
                "h" => arity(1).map(|_| Gate::H(qs[0]))?,
                "z" => arity(1).map(|_| Gate::Z(qs[0]))?,
                "cx" => arity(2).map(|_| Gate::Cx {
                    control: qs[0],
                    target: qs[1],
                })?,
                "ccx" => arity(3).map(|_| Gate::Ccx {
                    controls: [qs[0], qs[1]],
                    target: qs[2],
                })?,
                "mcx" => {
                    let (target, controls) = qs.split_last().ok_or_else(|| bad(n, "empty"))?;
                    Gate::Mcx {
                        controls: controls.to_vec(),
                        target: *target,
                    }
                }
                "mcz" => Gate::mcz(qs),
                other => return Err(bad(n, &format!("unknown gate `{other}`"))),
            };
            gate.validate(qubit_count)?;
            c.gates.push(gate);
        }
        Ok(c)
    }
}

fn write_relabel(out: &mut String, r: &Relabel) {
    let moved: Vec<String> = r
        .perm
        .iter()
        .enumerate()
        .filter(|(q, p)| q != *p)
        .map(|(q, p)| format!("q[{q}]->q[{p}]"))
        .collect();
    writeln!(out, "# relabel {}", moved.join(",")).unwrap();
}

fn format_qubit_set(qs: &[QubitId]) -> String {
    let contiguous = qs.windows(2).all(|w| w[1] == w[0] + 1);
    match (qs.first(), contiguous) {
        (Some(&first), true) => format!("q[{}..{}]", first, first + qs.len()),
        _ => qs.iter().map(|q| format!("q[{q}]")).collect::<Vec<_>>().join(","),
    }
}

fn parse_qubit(s: &str) -> Option<QubitId> {
    s.trim().strip_prefix("q[")?.strip_suffix(']')?.parse().ok()
}

fn parse_qubit_set(s: &str) -> Option<Vec<QubitId>> {
    let s = s.trim();
    if let Some(range) = s.strip_prefix("q[").and_then(|r| r.strip_suffix(']')) {
        if let Some((a, b)) = range.split_once("..") {
            let (a, b): (usize, usize) = (a.parse().ok()?, b.parse().ok()?);
            return Some((a..b).collect());
        }
    }
    s.split(',').map(parse_qubit).collect()
}

/// Position in a builder's history, used to replay the inverse of everything
/// appended since. The default value is the start of the history.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Checkpoint {
    gates: usize,
    relabels: usize,
}

/// Exclusively owned circuit under construction.
#[derive(Clone, Debug)]
pub struct CircuitBuilder {
    circuit: Circuit,
    /// `frame[label]` is the physical qubit currently addressed by `label`.
    frame: Vec<QubitId>,
}

impl CircuitBuilder {
    /// Lays registers out consecutively in declaration order.
    pub fn new(spec: &[(&str, usize)]) -> Result<CircuitBuilder> {
        let mut registers: Vec<Register> = Vec::new();
        let mut next = 0;
        for &(name, width) in spec {
            if width == 0 {
                return Err(Error::ZeroWidth(name.to_string()));
            }
            if registers.iter().any(|r| r.name == name) {
                return Err(Error::DuplicateRegister(name.to_string()));
            }
            registers.push(Register {
                name: name.to_string(),
                qubits: (next..next + width).collect(),
            });
            next += width;
        }
        Ok(CircuitBuilder {
            circuit: Circuit {
                qubit_count: next,
                registers,
                ..Circuit::default()
            },
            frame: (0..next).collect(),
        })
    }

    pub fn qubit_count(&self) -> usize {
        self.circuit.qubit_count
    }

    /// Labels of a declared register. Labels coincide with physical qubits
    /// until the first relabeling.
    pub fn register(&self, name: &str) -> Option<&[QubitId]> {
        self.circuit.register(name)
    }

    pub fn gate_count(&self) -> usize {
        self.circuit.gates.len()
    }

    pub fn physical(&self, label: QubitId) -> QubitId {
        self.frame[label]
    }

    pub fn frame(&self) -> &[QubitId] {
        &self.frame
    }

    /// Appends `gate`, whose operands are labels.
    pub fn append(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.qubit_count())?;
        let physical = gate.map_qubits(|q| self.frame[q]);
        self.circuit.gates.push(physical);
        Ok(())
    }

    pub fn x(&mut self, q: QubitId) -> Result<()> {
        self.append(Gate::X(q))
    }

    pub fn h(&mut self, q: QubitId) -> Result<()> {
        self.append(Gate::H(q))
    }

    pub fn cx(&mut self, control: QubitId, target: QubitId) -> Result<()> {
        self.append(Gate::Cx { control, target })
    }

    pub fn ccx(&mut self, a: QubitId, b: QubitId, target: QubitId) -> Result<()> {
        self.append(Gate::Ccx {
            controls: [a, b],
            target,
        })
    }

    /// Multi-controlled X, choosing the narrowest gate kind for the arity.
    pub fn mcx(&mut self, controls: &[QubitId], target: QubitId) -> Result<()> {
        match *controls {
            [] => self.x(target),
            [c] => self.cx(c, target),
            [a, b] => self.ccx(a, b, target),
            _ => self.append(Gate::Mcx {
                controls: controls.to_vec(),
                target,
            }),
        }
    }

    pub fn mcz(&mut self, qubits: &[QubitId]) -> Result<()> {
        match *qubits {
            [q] => self.append(Gate::Z(q)),
            _ => self.append(Gate::mcz(qubits.iter().copied())),
        }
    }

    /// Renames labels: the qubit addressed as `from` is addressed as `to`
    /// afterwards. Unlisted labels keep their meaning; the full map must be
    /// a bijection.
    pub fn relabel(&mut self, map: &[(QubitId, QubitId)]) -> Result<()> {
        let n = self.qubit_count();
        let mut perm: Vec<QubitId> = (0..n).collect();
        let mut assigned = vec![false; n];
        for &(from, to) in map {
            for q in [from, to] {
                if q >= n {
                    return Err(Error::QubitOutOfRange { qubit: q, count: n });
                }
            }
            if std::mem::replace(&mut assigned[from], true) {
                return Err(Error::NotBijective);
            }
            perm[from] = to;
        }
        let mut hit = vec![false; n];
        for &p in &perm {
            if std::mem::replace(&mut hit[p], true) {
                return Err(Error::NotBijective);
            }
        }
        if perm.iter().enumerate().all(|(q, &p)| q == p) {
            return Ok(());
        }
        self.apply_relabel(perm);
        Ok(())
    }

    fn apply_relabel(&mut self, perm: Vec<QubitId>) {
        let old = self.frame.clone();
        for (q, &p) in perm.iter().enumerate() {
            self.frame[p] = old[q];
        }
        self.circuit.relabel_log.push(Relabel {
            at: self.circuit.gates.len(),
            perm,
        });
    }

    pub fn checkpoint(&self) -> Checkpoint {
        Checkpoint {
            gates: self.circuit.gates.len(),
            relabels: self.circuit.relabel_log.len(),
        }
    }

    /// Appends the exact inverse of everything appended since `mark`,
    /// restoring both the qubit values and the relabeling frame.
    pub fn append_inverse_since(&mut self, mark: Checkpoint) {
        let now = self.checkpoint();
        self.append_inverse_between(mark, now);
    }

    /// Appends the inverse of the history between `from` and `to`. The frame
    /// is rewound by that segment's relabelings, so gates appended after `to`
    /// must not have relabeled anything.
    pub fn append_inverse_between(&mut self, from: Checkpoint, to: Checkpoint) {
        let segment: Vec<Gate> = self.circuit.gates[from.gates..to.gates].to_vec();
        let relabels: Vec<Relabel> = self.circuit.relabel_log[from.relabels..to.relabels].to_vec();
        let mut pending = relabels.iter().rev().peekable();
        while let Some(r) = pending.next_if(|r| r.at == to.gates) {
            self.apply_relabel(invert_perm(&r.perm));
        }
        for (offset, gate) in segment.into_iter().enumerate().rev() {
            self.circuit.gates.push(gate);
            let index = from.gates + offset;
            while let Some(r) = pending.next_if(|r| r.at == index) {
                self.apply_relabel(invert_perm(&r.perm));
            }
        }
    }

    pub fn stats(&self) -> CircuitStats {
        self.circuit.stats()
    }

    pub fn finish(self) -> Circuit {
        self.circuit
    }
}
