//! History families over a timed circuit: chain kets, consistency, branch
//! probabilities and framework compatibility.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::circuit::{CircuitDoc, TimedCircuit};
use crate::error::{Error, Result};
use crate::qmath::{
    commutator_norm, verify_decomposition, IdentityDecomposition, Ket, Operator, Projector, EPS_NORM,
};
use crate::serial::{ket_from_doc, ket_to_doc, matrix_from_doc, matrix_to_doc, ComplexDoc, MatrixDoc};

/// Default tolerance on chain-ket overlaps.
pub const EPS_CONSISTENCY: f64 = 1e-9;
/// Branches whose chain ket has squared norm below this are dropped.
pub const PRUNE_PROBABILITY: f64 = 1e-12;

/// A decomposition of the identity attached to one circuit time.
#[derive(Clone, Debug, PartialEq)]
pub struct Event {
    pub time: String,
    pub decomposition: IdentityDecomposition,
}

impl Event {
    pub fn new(time: impl Into<String>, decomposition: IdentityDecomposition) -> Self {
        Self { time: time.into(), decomposition }
    }
}

/// One projector choice per event, starting from one initial ket.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BranchChoice {
    pub initial: usize,
    pub events: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Branch {
    pub initial: usize,
    pub events: Vec<usize>,
    pub chain_ket: Ket,
    /// Prior times squared chain-ket norm.
    pub probability: f64,
}

impl Branch {
    pub fn choice(&self) -> BranchChoice {
        BranchChoice { initial: self.initial, events: self.events.clone() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BranchSet {
    pub branches: Vec<Branch>,
    pub pruned: usize,
}

impl BranchSet {
    pub fn total_probability(&self) -> f64 {
        self.branches.iter().map(|b| b.probability).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub consistent: bool,
    pub worst_overlap: f64,
    pub tolerance: f64,
    pub offending: Option<(BranchChoice, BranchChoice)>,
    pub branches: usize,
}

#[derive(Clone, Debug)]
pub struct HistoryFamily {
    name: String,
    circuit: Arc<TimedCircuit>,
    initial: Vec<(f64, Ket)>,
    events: Vec<Event>,
    /// `steps[k]` propagates from the previous event time (or t0) to event `k`.
    steps: Vec<Operator>,
}

impl HistoryFamily {
    pub fn new(
        name: impl Into<String>,
        circuit: Arc<TimedCircuit>,
        initial: Vec<(f64, Ket)>,
        events: Vec<Event>,
    ) -> Result<Self> {
        let dim = circuit.dim();
        if initial.is_empty() {
            return Err(Error::InvalidFamily("no initial states".into()));
        }
        let mut total = 0.0;
        for (i, (prior, ket)) in initial.iter().enumerate() {
            if ket.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: ket.dim() });
            }
            if !(*prior >= 0.0) {
                return Err(Error::InvalidFamily(format!("prior {prior} of initial state {i} is negative")));
            }
            if !ket.is_normalized(EPS_NORM) {
                return Err(Error::InvalidFamily(format!("initial state {i} is not normalized")));
            }
            for (j, (_, other)) in initial[..i].iter().enumerate() {
                let overlap = ket.inner(other)?.norm();
                if overlap > EPS_NORM {
                    return Err(Error::InvalidFamily(format!(
                        "initial states {j} and {i} are not orthogonal (overlap {overlap:.3e})"
                    )));
                }
            }
            total += prior;
        }
        if (total - 1.0).abs() > EPS_NORM {
            return Err(Error::InvalidFamily(format!("priors sum to {total}")));
        }

        let mut last = 0usize;
        let mut steps = Vec::with_capacity(events.len());
        for (k, event) in events.iter().enumerate() {
            let idx = circuit.time_index(&event.time)?;
            if k > 0 && idx <= last {
                return Err(Error::InvalidFamily(format!(
                    "event times must increase strictly (`{}` follows `{}`)",
                    event.time,
                    circuit.times()[last]
                )));
            }
            if event.decomposition.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: event.decomposition.dim() });
            }
            let report = verify_decomposition(&event.decomposition, EPS_NORM);
            if !report.valid {
                return Err(Error::InvalidFamily(format!(
                    "event at `{}` is not a decomposition of the identity: {report:?}",
                    event.time
                )));
            }
            let from = if k == 0 { circuit.initial_time() } else { circuit.times()[last].as_str() };
            steps.push(circuit.propagator(from, &event.time)?);
            last = idx;
        }
        Ok(Self { name: name.into(), circuit, initial, events, steps })
    }

    /// Family with uniform priors over the given initial kets.
    pub fn uniform(
        name: impl Into<String>,
        circuit: Arc<TimedCircuit>,
        kets: Vec<Ket>,
        events: Vec<Event>,
    ) -> Result<Self> {
        let p = 1.0 / kets.len().max(1) as f64;
        Self::new(name, circuit, kets.into_iter().map(|k| (p, k)).collect(), events)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn circuit(&self) -> &TimedCircuit {
        &self.circuit
    }

    pub fn initial(&self) -> &[(f64, Ket)] {
        &self.initial
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn event_index(&self, time: &str) -> Option<usize> {
        self.events.iter().position(|e| e.time == time)
    }

    /// Unnormalized `P_k T ... P_1 T |psi0>` for one branch.
    pub fn chain_ket(&self, choice: &BranchChoice) -> Result<Ket> {
        let (_, psi) = self.initial.get(choice.initial).ok_or_else(|| {
            Error::InvalidBranch(format!("initial index {} of {}", choice.initial, self.initial.len()))
        })?;
        if choice.events.len() != self.events.len() {
            return Err(Error::InvalidBranch(format!(
                "{} projector choices for {} events",
                choice.events.len(),
                self.events.len()
            )));
        }
        let mut ket = psi.clone();
        for (k, (&j, event)) in choice.events.iter().zip(&self.events).enumerate() {
            let p = event.decomposition.members().nth(j).ok_or_else(|| {
                Error::InvalidBranch(format!("projector {j} at `{}`", event.time))
            })?;
            ket = p.op().apply(&self.steps[k].apply(&ket)?)?;
        }
        Ok(ket)
    }

    /// Every branch with non-negligible chain ket, in lexicographic index order.
    fn surviving_branches(&self) -> (Vec<(BranchChoice, Ket)>, usize) {
        let mut out = Vec::new();
        let mut total = 0usize;
        let per_initial: usize = self.events.iter().map(|e| e.decomposition.len()).product();
        for (i, (_, psi)) in self.initial.iter().enumerate() {
            total += per_initial;
            let mut path = Vec::with_capacity(self.events.len());
            self.descend(i, psi.clone(), &mut path, &mut out);
        }
        let pruned = total - out.len();
        (out, pruned)
    }

    fn descend(&self, initial: usize, ket: Ket, path: &mut Vec<usize>, out: &mut Vec<(BranchChoice, Ket)>) {
        let k = path.len();
        if k == self.events.len() {
            out.push((BranchChoice { initial, events: path.clone() }, ket));
            return;
        }
        let evolved = self.steps[k].apply(&ket).expect("dimensions checked at construction");
        for (j, p) in self.events[k].decomposition.members().enumerate() {
            let next = p.op().apply(&evolved).expect("dimensions checked at construction");
            // Projectors never increase the norm, so a negligible partial chain
            // ket stays negligible.
            if next.norm_sqr() < PRUNE_PROBABILITY {
                continue;
            }
            path.push(j);
            self.descend(initial, next, path, out);
            path.pop();
        }
    }

    /// Chain-ket orthogonality for all branch pairs that share an initial ket.
    pub fn consistency_check(&self, eps: f64) -> ConsistencyReport {
        let (branches, _) = self.surviving_branches();
        let mut worst = 0.0f64;
        let mut offending = None;
        for (x, (bx, kx)) in branches.iter().enumerate() {
            for (by, ky) in &branches[x + 1..] {
                if bx.initial != by.initial {
                    continue;
                }
                let overlap = kx.inner(ky).expect("same dimension").norm();
                if overlap > worst {
                    worst = overlap;
                    offending = Some((bx.clone(), by.clone()));
                }
            }
        }
        let consistent = worst <= eps;
        ConsistencyReport {
            consistent,
            worst_overlap: worst,
            tolerance: eps,
            offending: if consistent { None } else { offending },
            branches: branches.len(),
        }
    }

    /// Branches with positive probability; refuses inconsistent families.
    pub fn branch_probabilities(&self, eps: f64) -> Result<BranchSet> {
        let report = self.consistency_check(eps);
        if !report.consistent {
            return Err(Error::Inconsistent(Box::new(report)));
        }
        let (raw, mut pruned) = self.surviving_branches();
        let mut branches = Vec::with_capacity(raw.len());
        for (choice, ket) in raw {
            let probability = self.initial[choice.initial].0 * ket.norm_sqr();
            if probability < PRUNE_PROBABILITY {
                pruned += 1;
                continue;
            }
            branches.push(Branch { initial: choice.initial, events: choice.events, chain_ket: ket, probability });
        }
        Ok(BranchSet { branches, pruned })
    }

    /// Adds `decomposition` at `time`. If the family already has an event
    /// there, the two decompositions must commute and are replaced by their
    /// common refinement; otherwise the query mixes incompatible frameworks.
    pub fn refine(&self, time: &str, decomposition: IdentityDecomposition, eps: f64) -> Result<Self> {
        let idx = self.circuit.time_index(time)?;
        let mut events = self.events.clone();
        match events.iter().position(|e| e.time == time) {
            Some(k) => {
                let existing = &events[k].decomposition;
                if !frameworks_compatible(existing, &decomposition, eps)? {
                    return Err(Error::IncompatibleFrameworks { time: time.to_string() });
                }
                events[k].decomposition = common_refinement(existing, &decomposition, eps)?;
            }
            None => {
                let pos = events
                    .iter()
                    .position(|e| self.circuit.time_index(&e.time).is_ok_and(|i| i > idx))
                    .unwrap_or(events.len());
                events.insert(pos, Event::new(time, decomposition));
            }
        }
        Self::new(self.name.clone(), self.circuit.clone(), self.initial.clone(), events)
    }

    pub fn to_doc(&self) -> FamilyDoc {
        FamilyDoc {
            name: self.name.clone(),
            circuit: self.circuit.to_doc(),
            initial: self
                .initial
                .iter()
                .map(|(prior, ket)| InitialDoc { prior: *prior, ket: Some(ket_to_doc(ket)), basis: None })
                .collect(),
            events: self
                .events
                .iter()
                .map(|e| EventDoc {
                    time: e.time.clone(),
                    projectors: e.decomposition.projectors().iter().map(|p| matrix_to_doc(p.op())).collect(),
                    remainder: e.decomposition.remainder().map(|p| matrix_to_doc(p.op())),
                })
                .collect(),
        }
    }

    pub fn from_doc(doc: &FamilyDoc) -> Result<Self> {
        let circuit = Arc::new(TimedCircuit::from_doc(&doc.circuit)?);
        let mut initial = Vec::with_capacity(doc.initial.len());
        for init in &doc.initial {
            let ket = match (&init.ket, &init.basis) {
                (Some(amps), None) => ket_from_doc(amps)?,
                (None, Some(bits)) => {
                    let bits: Vec<u8> = bits
                        .chars()
                        .map(|ch| match ch {
                            '0' => Ok(0),
                            '1' => Ok(1),
                            _ => Err(Error::InvalidFamily(format!("bad basis label `{bits}`"))),
                        })
                        .collect::<Result<_>>()?;
                    Ket::from_bits(&bits)?
                }
                _ => return Err(Error::InvalidFamily("initial state needs exactly one of ket/basis".into())),
            };
            initial.push((init.prior, ket));
        }
        let mut events = Vec::with_capacity(doc.events.len());
        for e in &doc.events {
            let projectors = e
                .projectors
                .iter()
                .map(|m| Projector::new(matrix_from_doc(m)?, 1e-8))
                .collect::<Result<Vec<_>>>()?;
            let remainder = e.remainder.as_ref().map(|m| Projector::new(matrix_from_doc(m)?, 1e-8)).transpose()?;
            events.push(Event::new(e.time.clone(), IdentityDecomposition::new(projectors, remainder)?));
        }
        Self::new(doc.name.clone(), circuit, initial, events)
    }
}

/// `true` iff every projector of `d1` commutes with every projector of `d2`.
pub fn frameworks_compatible(d1: &IdentityDecomposition, d2: &IdentityDecomposition, eps: f64) -> Result<bool> {
    if d1.dim() != d2.dim() {
        return Err(Error::DimensionMismatch { expected: d1.dim(), got: d2.dim() });
    }
    Ok(d1.members().all(|p| d2.members().all(|q| commutator_norm(p.op(), q.op()) <= eps)))
}

/// Non-zero products `P_i Q_j` of two commuting decompositions.
fn common_refinement(d1: &IdentityDecomposition, d2: &IdentityDecomposition, eps: f64) -> Result<IdentityDecomposition> {
    let mut projectors = Vec::new();
    for p in d1.members() {
        for q in d2.members() {
            let prod = p.op() * q.op();
            if prod.max_abs() > eps {
                projectors.push(Projector::new(prod, 1e-8)?);
            }
        }
    }
    IdentityDecomposition::new(projectors, None)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyDoc {
    pub name: String,
    pub circuit: CircuitDoc,
    pub initial: Vec<InitialDoc>,
    pub events: Vec<EventDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InitialDoc {
    pub prior: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ket: Option<Vec<ComplexDoc>>,
    /// Computational basis label such as `"0100"`, qubit 0 first.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EventDoc {
    pub time: String,
    pub projectors: Vec<MatrixDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub remainder: Option<MatrixDoc>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{dense, dense_coding_circuit, teleportation_circuit};
    use crate::qmath::states;
    use approx::assert_abs_diff_eq;

    fn z_basis_on(q: usize, n: usize) -> IdentityDecomposition {
        IdentityDecomposition::from_basis(&[states::zero(), states::one()]).unwrap().embed(&[q], n).unwrap()
    }

    fn f2(abar_only: Option<(u8, u8)>) -> HistoryFamily {
        let circuit = Arc::new(dense_coding_circuit());
        let inputs: Vec<(u8, u8)> = match abar_only {
            Some(x) => vec![x],
            None => vec![(0, 0), (0, 1), (1, 0), (1, 1)],
        };
        let kets = inputs.iter().map(|&(a, ab)| Ket::from_bits(&[a, ab, 0, 0]).unwrap()).collect();
        let comp = IdentityDecomposition::computational(4);
        let events = ["t2", "t4", "t7"].iter().map(|t| Event::new(*t, comp.clone())).collect();
        HistoryFamily::uniform("F2", circuit, kets, events).unwrap()
    }

    #[test]
    fn unitary_family_chain_ket_is_evolved_state() {
        let circuit = Arc::new(teleportation_circuit());
        let psi0 = Ket::from_bits(&[1, 0, 0]).unwrap();
        let fam = HistoryFamily::uniform(
            "unitary",
            circuit.clone(),
            vec![psi0.clone()],
            vec![Event::new("t8", IdentityDecomposition::trivial(8))],
        )
        .unwrap();
        let k = fam.chain_ket(&BranchChoice { initial: 0, events: vec![0] }).unwrap();
        assert!(k.max_abs_diff(&circuit.evolve(&psi0, "t8").unwrap()) < 1e-12);
        let set = fam.branch_probabilities(EPS_CONSISTENCY).unwrap();
        assert_eq!(set.branches.len(), 1);
        assert_abs_diff_eq!(set.branches[0].probability, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn f2_chain_ket_has_half_weight() {
        let fam = f2(Some((0, 1)));
        // [0,1,0,0]_2 -> index 4, [0,1,1,0]_4 -> index 6, [0,1,1,1]_7 -> index 7
        let k = fam.chain_ket(&BranchChoice { initial: 0, events: vec![4, 6, 7] }).unwrap();
        assert_abs_diff_eq!(k.norm_sqr(), 0.5, epsilon = 1e-12);
        let zero = fam.chain_ket(&BranchChoice { initial: 0, events: vec![5, 6, 7] }).unwrap();
        assert!(zero.norm_sqr() < 1e-24);
    }

    #[test]
    fn f2_is_consistent_with_equal_branches() {
        let fam = f2(None);
        assert!(fam.consistency_check(EPS_CONSISTENCY).consistent);
        let set = fam.branch_probabilities(EPS_CONSISTENCY).unwrap();
        assert_eq!(set.branches.len(), 8);
        for b in &set.branches {
            assert_abs_diff_eq!(b.probability, 0.125, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(set.total_probability(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn f2_with_b_at_t8_is_inconsistent() {
        let fam = f2(None).refine("t8", z_basis_on(dense::B, 4), EPS_NORM).unwrap();
        let report = fam.consistency_check(EPS_CONSISTENCY);
        assert!(!report.consistent);
        assert_abs_diff_eq!(report.worst_overlap, 0.25, epsilon = 1e-12);
        assert!(report.offending.is_some());
        assert!(matches!(fam.branch_probabilities(EPS_CONSISTENCY), Err(Error::Inconsistent(_))));
    }

    #[test]
    fn incompatible_refinement_is_rejected() {
        let fam = f2(None);
        let bell = IdentityDecomposition::from_basis(&states::bell_basis())
            .unwrap()
            .embed(&[dense::B, dense::C], 4)
            .unwrap();
        assert!(matches!(
            fam.refine("t4", bell, EPS_NORM),
            Err(Error::IncompatibleFrameworks { .. })
        ));
        // A coarser commuting decomposition merges into the existing event.
        let merged = fam.refine("t4", z_basis_on(dense::C, 4), EPS_NORM).unwrap();
        assert_eq!(merged.events()[1].decomposition.len(), 16);
    }

    #[test]
    fn compatibility_examples() {
        let sz = IdentityDecomposition::from_basis(&[states::zero(), states::one()]).unwrap();
        let sx = IdentityDecomposition::from_basis(&[states::plus(), states::minus()]).unwrap();
        assert!(!frameworks_compatible(&sz, &sx, EPS_NORM).unwrap());
        assert!(frameworks_compatible(&sx, &sx, EPS_NORM).unwrap());
        let bell = IdentityDecomposition::from_basis(&states::bell_basis()).unwrap();
        let product = IdentityDecomposition::from_basis(&[
            states::zero().kron(&states::plus()),
            states::zero().kron(&states::minus()),
            states::one().kron(&states::plus()),
            states::one().kron(&states::minus()),
        ])
        .unwrap();
        assert!(!frameworks_compatible(&bell, &product, EPS_NORM).unwrap());
        assert!(frameworks_compatible(&sz, &bell, EPS_NORM).is_err());
    }

    #[test]
    fn invalid_families_are_rejected() {
        let circuit = Arc::new(teleportation_circuit());
        let k0 = Ket::from_bits(&[0, 0, 0]).unwrap();
        let plus = states::plus().kron(&states::zero()).kron(&states::zero());
        assert!(HistoryFamily::uniform("x", circuit.clone(), vec![k0.clone(), plus], vec![]).is_err());
        assert!(HistoryFamily::new("x", circuit.clone(), vec![(0.4, k0.clone())], vec![]).is_err());
        let comp = IdentityDecomposition::computational(3);
        let events = vec![Event::new("t4", comp.clone()), Event::new("t2", comp)];
        assert!(HistoryFamily::uniform("x", circuit, vec![k0], events).is_err());
    }

    #[test]
    fn branch_index_errors() {
        let fam = f2(Some((0, 0)));
        assert!(fam.chain_ket(&BranchChoice { initial: 1, events: vec![0, 0, 0] }).is_err());
        assert!(fam.chain_ket(&BranchChoice { initial: 0, events: vec![0, 0] }).is_err());
        assert!(fam.chain_ket(&BranchChoice { initial: 0, events: vec![0, 0, 16] }).is_err());
    }

    #[test]
    fn doc_round_trip_preserves_verdict() {
        let fam = f2(None).refine("t8", z_basis_on(dense::B, 4), EPS_NORM).unwrap();
        let text = serde_json::to_string(&fam.to_doc()).unwrap();
        let back = HistoryFamily::from_doc(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back.events().len(), 4);
        assert!(!back.consistency_check(EPS_CONSISTENCY).consistent);
    }
}
