//! Timed qubit circuits: gate layers between symbolic times `t0 ... tf`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmath::{embed, gates, Ket, Operator, MAX_QUBITS};
use crate::serial::{matrix_from_doc, matrix_to_doc, MatrixDoc};

/// Values for named gate parameters.
pub type Bindings = BTreeMap<String, f64>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Angle {
    Fixed(f64),
    Param(String),
}

impl Angle {
    fn resolve(&self, bindings: &Bindings) -> Result<f64> {
        match self {
            Angle::Fixed(v) => Ok(*v),
            Angle::Param(name) => {
                bindings.get(name).copied().ok_or_else(|| Error::UnboundParameter(name.clone()))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    H(usize),
    X(usize),
    Z(usize),
    Cnot { control: usize, target: usize },
    Cz(usize, usize),
    Rz(usize, Angle),
    Ry(usize, Angle),
    /// Arbitrary unitary on the listed qubits (first listed is most significant).
    Unitary { qubits: Vec<usize>, matrix: Operator },
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::H(q) | Gate::X(q) | Gate::Z(q) | Gate::Rz(q, _) | Gate::Ry(q, _) => vec![*q],
            Gate::Cnot { control, target } => vec![*control, *target],
            Gate::Cz(a, b) => vec![*a, *b],
            Gate::Unitary { qubits, .. } => qubits.clone(),
        }
    }

    pub fn parameter(&self) -> Option<&str> {
        match self {
            Gate::Rz(_, Angle::Param(p)) | Gate::Ry(_, Angle::Param(p)) => Some(p),
            _ => None,
        }
    }

    /// Matrix on the gate's own qubits.
    pub fn local_matrix(&self, bindings: &Bindings) -> Result<Operator> {
        Ok(match self {
            Gate::H(_) => gates::h(),
            Gate::X(_) => gates::x(),
            Gate::Z(_) => gates::z(),
            Gate::Cnot { .. } => gates::cnot(),
            Gate::Cz(..) => gates::cz(),
            Gate::Rz(_, a) => gates::rz(a.resolve(bindings)?),
            Gate::Ry(_, a) => gates::ry(a.resolve(bindings)?),
            Gate::Unitary { matrix, .. } => matrix.clone(),
        })
    }

    /// Matrix on the full `n`-qubit space.
    pub fn matrix(&self, n: usize, bindings: &Bindings) -> Result<Operator> {
        embed(&self.local_matrix(bindings)?, &self.qubits(), n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    Alice,
    Bob,
    Transit,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TimedCircuit {
    n_qubits: usize,
    labels: Vec<String>,
    times: Vec<String>,
    /// `layers[i]` acts between `times[i]` and `times[i + 1]`.
    layers: Vec<Vec<Gate>>,
    /// time label -> qubit label -> region
    regions: BTreeMap<String, BTreeMap<String, Region>>,
}

impl TimedCircuit {
    pub fn new(n_qubits: usize, times: Vec<String>, layers: Vec<Vec<Gate>>) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::InvalidCircuit(format!(
                "{n_qubits} qubits (supported: 1..={MAX_QUBITS})"
            )));
        }
        if times.is_empty() {
            return Err(Error::InvalidCircuit("no time labels".into()));
        }
        let unique: BTreeSet<&String> = times.iter().collect();
        if unique.len() != times.len() {
            return Err(Error::InvalidCircuit("duplicate time label".into()));
        }
        if layers.len() + 1 != times.len() {
            return Err(Error::InvalidCircuit(format!(
                "{} layers for {} times",
                layers.len(),
                times.len()
            )));
        }
        for gate in layers.iter().flatten() {
            let qubits = gate.qubits();
            for (i, &q) in qubits.iter().enumerate() {
                if q >= n_qubits {
                    return Err(Error::QubitOutOfRange { index: q, n_qubits });
                }
                if qubits[..i].contains(&q) {
                    return Err(Error::InvalidCircuit(format!("gate {gate:?} repeats qubit {q}")));
                }
            }
            if let Gate::Unitary { matrix, qubits } = gate {
                if matrix.dim() != 1 << qubits.len() || !matrix.is_unitary(1e-9) {
                    return Err(Error::InvalidCircuit("explicit gate matrix is not unitary".into()));
                }
            }
        }
        let labels = (0..n_qubits).map(|q| format!("q{q}")).collect();
        Ok(Self { n_qubits, labels, times, layers, regions: BTreeMap::new() })
    }

    /// Times labelled `t0 ... t{len}` for the given layers.
    pub fn with_standard_times(n_qubits: usize, layers: Vec<Vec<Gate>>) -> Result<Self> {
        let times = (0..=layers.len()).map(|i| format!("t{i}")).collect();
        Self::new(n_qubits, times, layers)
    }

    pub fn with_labels(mut self, labels: &[&str]) -> Result<Self> {
        if labels.len() != self.n_qubits {
            return Err(Error::InvalidCircuit("one label per qubit required".into()));
        }
        self.labels = labels.iter().map(|s| s.to_string()).collect();
        Ok(self)
    }

    pub fn with_region(mut self, time: &str, qubit: &str, region: Region) -> Result<Self> {
        self.time_index(time)?;
        if !self.labels.iter().any(|l| l == qubit) {
            return Err(Error::UnknownName { what: "qubit", name: qubit.to_string() });
        }
        self.regions.entry(time.to_string()).or_default().insert(qubit.to_string(), region);
        Ok(self)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, qubit: usize) -> &str {
        &self.labels[qubit]
    }

    pub fn qubit_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn times(&self) -> &[String] {
        &self.times
    }

    pub fn layers(&self) -> &[Vec<Gate>] {
        &self.layers
    }

    pub fn regions(&self) -> &BTreeMap<String, BTreeMap<String, Region>> {
        &self.regions
    }

    pub fn region(&self, time: &str, qubit: usize) -> Option<Region> {
        self.regions.get(time)?.get(&self.labels[qubit]).copied()
    }

    pub fn time_index(&self, label: &str) -> Result<usize> {
        self.times.iter().position(|t| t == label).ok_or_else(|| Error::UnknownTime(label.to_string()))
    }

    pub fn initial_time(&self) -> &str {
        &self.times[0]
    }

    pub fn parameters(&self) -> BTreeSet<String> {
        self.layers.iter().flatten().filter_map(|g| g.parameter().map(str::to_string)).collect()
    }

    /// Unitary of layer `i` (gates applied in listed order).
    pub fn layer_operator(&self, i: usize, bindings: &Bindings) -> Result<Operator> {
        let mut u = Operator::identity(self.dim());
        for gate in &self.layers[i] {
            u = &gate.matrix(self.n_qubits, bindings)? * &u;
        }
        Ok(u)
    }

    /// `T(to, from)`, the product of the layers in between, latest layer leftmost.
    pub fn propagator(&self, from: &str, to: &str) -> Result<Operator> {
        self.propagator_with(from, to, &Bindings::new())
    }

    pub fn propagator_with(&self, from: &str, to: &str, bindings: &Bindings) -> Result<Operator> {
        let (i, j) = (self.time_index(from)?, self.time_index(to)?);
        if i > j {
            return Err(Error::TimeOrder { from: from.to_string(), to: to.to_string() });
        }
        let mut u = Operator::identity(self.dim());
        for layer in i..j {
            u = &self.layer_operator(layer, bindings)? * &u;
        }
        Ok(u)
    }

    /// State at `to` for an initial state given at the first time.
    pub fn evolve(&self, psi0: &Ket, to: &str) -> Result<Ket> {
        self.evolve_with(psi0, to, &Bindings::new())
    }

    pub fn evolve_with(&self, psi0: &Ket, to: &str, bindings: &Bindings) -> Result<Ket> {
        if psi0.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: psi0.dim() });
        }
        self.propagator_with(&self.times[0], to, bindings)?.apply(psi0)
    }

    /// Copy with `gate` appended to the layer starting at `time`.
    pub fn with_gate(&self, time: &str, gate: Gate) -> Result<Self> {
        let i = self.time_index(time)?;
        if i >= self.layers.len() {
            return Err(Error::InvalidCircuit(format!("no layer starts at `{time}`")));
        }
        let mut layers = self.layers.clone();
        layers[i].push(gate);
        let mut out = Self::new(self.n_qubits, self.times.clone(), layers)?;
        out.labels = self.labels.clone();
        out.regions = self.regions.clone();
        Ok(out)
    }

    pub fn to_doc(&self) -> CircuitDoc {
        let layers = self
            .layers
            .iter()
            .enumerate()
            .map(|(i, gates)| LayerDoc {
                from: self.times[i].clone(),
                to: self.times[i + 1].clone(),
                gates: gates.iter().map(GateDoc::from_gate).collect(),
            })
            .collect();
        CircuitDoc {
            n_qubits: self.n_qubits,
            labels: Some(self.labels.clone()),
            times: self.times.clone(),
            layers,
            regions: self.regions.clone(),
        }
    }

    pub fn from_doc(doc: &CircuitDoc) -> Result<Self> {
        let mut layers = vec![Vec::new(); doc.times.len().saturating_sub(1)];
        let index = |t: &str| doc.times.iter().position(|x| x == t).ok_or_else(|| Error::UnknownTime(t.to_string()));
        for layer in &doc.layers {
            let (i, j) = (index(&layer.from)?, index(&layer.to)?);
            if j != i + 1 {
                return Err(Error::InvalidCircuit(format!(
                    "layer {} -> {} does not join consecutive times",
                    layer.from, layer.to
                )));
            }
            for g in &layer.gates {
                layers[i].push(g.to_gate()?);
            }
        }
        let mut c = Self::new(doc.n_qubits, doc.times.clone(), layers)?;
        if let Some(labels) = &doc.labels {
            let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
            c = c.with_labels(&refs)?;
        }
        for (time, by_qubit) in &doc.regions {
            for (qubit, region) in by_qubit {
                c = c.with_region(time, qubit, *region)?;
            }
        }
        Ok(c)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitDoc {
    pub n_qubits: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub times: Vec<String>,
    pub layers: Vec<LayerDoc>,
    #[serde(default)]
    pub regions: BTreeMap<String, BTreeMap<String, Region>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayerDoc {
    pub from: String,
    pub to: String,
    pub gates: Vec<GateDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateDoc {
    pub kind: String,
    pub qubits: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub param: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixDoc>,
}

impl GateDoc {
    fn from_gate(g: &Gate) -> Self {
        let (kind, theta, param, matrix) = match g {
            Gate::H(_) => ("H", None, None, None),
            Gate::X(_) => ("X", None, None, None),
            Gate::Z(_) => ("Z", None, None, None),
            Gate::Cnot { .. } => ("CNOT", None, None, None),
            Gate::Cz(..) => ("CZ", None, None, None),
            Gate::Rz(_, a) | Gate::Ry(_, a) => {
                let kind = if matches!(g, Gate::Rz(..)) { "RZ" } else { "RY" };
                match a {
                    Angle::Fixed(v) => (kind, Some(*v), None, None),
                    Angle::Param(p) => (kind, None, Some(p.clone()), None),
                }
            }
            Gate::Unitary { matrix, .. } => ("U", None, None, Some(matrix_to_doc(matrix))),
        };
        Self { kind: kind.to_string(), qubits: g.qubits(), theta, param, matrix }
    }

    fn to_gate(&self) -> Result<Gate> {
        let q = &self.qubits;
        let arity = |n: usize| {
            if q.len() == n {
                Ok(())
            } else {
                Err(Error::InvalidCircuit(format!("{} gate takes {n} qubit(s), got {}", self.kind, q.len())))
            }
        };
        let angle = || match (&self.theta, &self.param) {
            (Some(v), None) => Ok(Angle::Fixed(*v)),
            (None, Some(p)) => Ok(Angle::Param(p.clone())),
            _ => Err(Error::InvalidCircuit(format!("{} gate needs exactly one of theta/param", self.kind))),
        };
        Ok(match self.kind.to_ascii_uppercase().as_str() {
            "H" => {
                arity(1)?;
                Gate::H(q[0])
            }
            "X" => {
                arity(1)?;
                Gate::X(q[0])
            }
            "Z" => {
                arity(1)?;
                Gate::Z(q[0])
            }
            "CNOT" | "CX" => {
                arity(2)?;
                Gate::Cnot { control: q[0], target: q[1] }
            }
            "CZ" => {
                arity(2)?;
                Gate::Cz(q[0], q[1])
            }
            "RZ" => {
                arity(1)?;
                Gate::Rz(q[0], angle()?)
            }
            "RY" => {
                arity(1)?;
                Gate::Ry(q[0], angle()?)
            }
            "U" => {
                let m = self
                    .matrix
                    .as_ref()
                    .ok_or_else(|| Error::InvalidCircuit("U gate without matrix".into()))?;
                Gate::Unitary { qubits: q.clone(), matrix: matrix_from_doc(m)? }
            }
            other => return Err(Error::UnknownName { what: "gate kind", name: other.to_string() }),
        })
    }
}

/// Qubit order of the dense-coding circuit.
pub mod dense {
    pub const A: usize = 0;
    pub const ABAR: usize = 1;
    pub const B: usize = 2;
    pub const C: usize = 3;
}

/// Qubit order of the teleportation circuit.
pub mod teleport {
    pub const A: usize = 0;
    pub const B: usize = 1;
    pub const C: usize = 2;
}

/// Dense coding on qubits `(a, abar, b, c)`, times `t0 ... t8`.
///
/// Bob entangles `b, c` into `B00`, `b` travels to Alice, who writes `abar`
/// with a CNOT and `a` with a CZ, then `b` returns and Bob disentangles.
pub fn dense_coding_circuit() -> TimedCircuit {
    use dense::*;
    let layers = vec![
        vec![Gate::H(B)],
        vec![Gate::Cnot { control: B, target: C }],
        vec![],
        vec![Gate::Cnot { control: ABAR, target: B }],
        vec![Gate::Cz(A, B)],
        vec![],
        vec![Gate::Cnot { control: B, target: C }],
        vec![Gate::H(B)],
    ];
    let mut circuit = TimedCircuit::with_standard_times(4, layers)
        .and_then(|c| c.with_labels(&["a", "abar", "b", "c"]))
        .expect("static circuit");
    for t in 0..=8 {
        let time = format!("t{t}");
        let b_region = match t {
            0 | 1 => Region::Bob,
            2 | 5 | 6 => Region::Transit,
            3 | 4 => Region::Alice,
            _ => Region::Bob,
        };
        for (q, r) in [("a", Region::Alice), ("abar", Region::Alice), ("b", b_region), ("c", Region::Bob)] {
            circuit = circuit.with_region(&time, q, r).expect("known labels");
        }
    }
    circuit
}

/// Teleportation circuit on qubits `(a, b, c)`, times `t0 ... t8`.
///
/// The Bell-basis measurement and the classically controlled corrections are
/// replaced by `CNOT(a->b), H(a)` and `CNOT(b->c), CZ(a,c)`.
pub fn teleportation_circuit() -> TimedCircuit {
    use teleport::*;
    let layers = vec![
        vec![Gate::H(B)],
        vec![Gate::Cnot { control: B, target: C }],
        vec![],
        vec![Gate::Cnot { control: A, target: B }],
        vec![Gate::H(A)],
        vec![],
        vec![Gate::Cnot { control: B, target: C }],
        vec![Gate::Cz(A, C)],
    ];
    let mut circuit = TimedCircuit::with_standard_times(3, layers)
        .and_then(|c| c.with_labels(&["a", "b", "c"]))
        .expect("static circuit");
    for t in 0..=8 {
        let time = format!("t{t}");
        let b_region = match t {
            0 | 1 => Region::Bob,
            2 => Region::Transit,
            _ => Region::Alice,
        };
        for (q, r) in [("a", Region::Alice), ("b", b_region), ("c", Region::Bob)] {
            circuit = circuit.with_region(&time, q, r).expect("known labels");
        }
    }
    circuit
}

pub fn builtin(name: &str) -> Result<TimedCircuit> {
    match name {
        "dense-coding" | "dense_coding" => Ok(dense_coding_circuit()),
        "teleportation" => Ok(teleportation_circuit()),
        other => Err(Error::UnknownName { what: "builtin circuit", name: other.to_string() }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::{kron_kets, states, swap_qubits, EPS_NORM};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn ket(re: &[f64]) -> Ket {
        Ket::from_real(re).unwrap()
    }

    #[test]
    fn propagator_identity_and_composition() {
        let c = dense_coding_circuit();
        assert_eq!(c.propagator("t4", "t4").unwrap(), Operator::identity(16));
        let full = c.propagator("t0", "t8").unwrap();
        for split in 1..8 {
            let mid = format!("t{split}");
            let composed = &c.propagator(&mid, "t8").unwrap() * &c.propagator("t0", &mid).unwrap();
            assert!(full.max_abs_diff(&composed) < 1e-12);
        }
        assert!(full.is_unitary(EPS_NORM));
    }

    #[test]
    fn propagator_errors() {
        let c = teleportation_circuit();
        assert!(matches!(c.propagator("t3", "t1"), Err(Error::TimeOrder { .. })));
        assert!(matches!(c.propagator("t0", "t9"), Err(Error::UnknownTime(_))));
        assert!(matches!(c.evolve(&states::zero(), "t1"), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn dense_coding_bell_state_at_t2() {
        let c = dense_coding_circuit();
        let psi = c.evolve(&Ket::from_bits(&[0, 0, 0, 0]).unwrap(), "t2").unwrap();
        let expected = kron_kets(&[states::zero(), states::zero(), states::bell(0, 0)]).unwrap();
        assert!(psi.max_abs_diff(&expected) < 1e-12);
        let psi5 = c.evolve(&Ket::from_bits(&[0, 0, 0, 0]).unwrap(), "t5").unwrap();
        assert!(psi5.max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn dense_coding_outputs_for_all_inputs() {
        let c = dense_coding_circuit();
        for a in 0..2u8 {
            for abar in 0..2u8 {
                let out = c.evolve(&Ket::from_bits(&[a, abar, 0, 0]).unwrap(), "t8").unwrap();
                let expected = Ket::from_bits(&[a, abar, a, abar]).unwrap();
                assert!(out.ray_eq(&expected, 1e-12), "input ({a},{abar})");
            }
        }
    }

    #[test]
    fn dense_coding_superposed_a_does_not_reemerge() {
        let c = dense_coding_circuit();
        let psi0 = kron_kets(&[states::plus(), states::zero(), states::zero(), states::zero()]).unwrap();
        let out = c.evolve(&psi0, "t8").unwrap();
        let rho_b = crate::qmath::reduced_state(&out, &[dense::B]).unwrap();
        // b ends entangled with a, not in |+>.
        let fidelity = rho_b.expectation(&states::plus()).unwrap().re;
        assert!(fidelity < 0.75);
    }

    #[test]
    fn teleportation_intermediate_and_final_states() {
        let c = teleportation_circuit();
        let (alpha, beta) = (0.6, 0.8);
        let input = ket(&[alpha, beta]);
        let psi0 = kron_kets(&[input.clone(), states::zero(), states::zero()]).unwrap();
        let psi2 = c.evolve(&psi0, "t2").unwrap();
        assert!(psi2.max_abs_diff(&input.kron(&states::bell(0, 0))) < 1e-12);

        // Second form of the t5 expansion, written out by hand.
        let psi5 = c.evolve(&psi0, "t5").unwrap();
        let (a, b) = (alpha / 2.0, beta / 2.0);
        let by_hand = ket(&[a, b, b, a, a, -b, -b, a]);
        assert!(psi5.max_abs_diff(&by_hand) < 1e-12);

        let psi8 = c.evolve(&psi0, "t8").unwrap();
        let expected = kron_kets(&[states::plus(), states::plus(), input]).unwrap();
        assert!(psi8.max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn teleportation_t5_symmetric_under_b_c_swap() {
        let c = teleportation_circuit();
        let input = Ket::new(vec![crate::qmath::c(0.3, 0.1), crate::qmath::c(-0.5, 0.8)]).unwrap().normalized();
        let psi5 = c.evolve(&kron_kets(&[input, states::zero(), states::zero()]).unwrap(), "t5").unwrap();
        let swapped = swap_qubits(3, teleport::B, teleport::C).unwrap().apply(&psi5).unwrap();
        assert!(swapped.max_abs_diff(&psi5) < 1e-12);
    }

    #[test]
    fn computational_input_passes_through() {
        let c = teleportation_circuit();
        let out = c.evolve(&Ket::from_bits(&[0, 0, 0]).unwrap(), "t8").unwrap();
        let rho_c = crate::qmath::reduced_state(&out, &[teleport::C]).unwrap();
        assert!(rho_c.max_abs_diff(&states::zero().outer()) < 1e-12);
        assert!((out.norm() - 1.0).abs() < EPS_NORM);
        let _ = FRAC_1_SQRT_2;
    }

    #[test]
    fn cz_is_symmetric() {
        let a = Gate::Cz(0, 2).matrix(3, &Bindings::new()).unwrap();
        let b = Gate::Cz(2, 0).matrix(3, &Bindings::new()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn unbound_parameter_is_reported() {
        let c = TimedCircuit::with_standard_times(1, vec![vec![Gate::Ry(0, Angle::Param("theta".into()))]]).unwrap();
        assert!(matches!(c.propagator("t0", "t1"), Err(Error::UnboundParameter(_))));
        let mut b = Bindings::new();
        b.insert("theta".into(), 0.4);
        assert!(c.propagator_with("t0", "t1", &b).unwrap().is_unitary(EPS_NORM));
    }

    #[test]
    fn invalid_circuits_are_rejected() {
        assert!(TimedCircuit::with_standard_times(2, vec![vec![Gate::H(2)]]).is_err());
        assert!(TimedCircuit::with_standard_times(2, vec![vec![Gate::Cz(1, 1)]]).is_err());
        assert!(TimedCircuit::new(2, vec!["t0".into()], vec![vec![]]).is_err());
    }

    #[test]
    fn json_round_trip() {
        for c in [dense_coding_circuit(), teleportation_circuit()] {
            let text = serde_json::to_string(&c.to_doc()).unwrap();
            let back = TimedCircuit::from_doc(&serde_json::from_str(&text).unwrap()).unwrap();
            assert_eq!(back, c);
        }
        let param = TimedCircuit::with_standard_times(
            2,
            vec![vec![Gate::Ry(0, Angle::Param("th".into())), Gate::Rz(1, Angle::Fixed(0.25))]],
        )
        .unwrap();
        assert_eq!(TimedCircuit::from_doc(&param.to_doc()).unwrap(), param);
    }
}
