//! Where the information about which basis state entered a channel resides
//! at a later time.

use serde::Serialize;

use super::distribution::JointDistribution;
use super::lambda::{lambda_basis, LambdaBasis, LambdaGrid};
use crate::circuit::TimedCircuit;
use crate::error::{Error, Result};
use crate::histories::HistoryFamily;
use crate::qmath::{
    gates, reduced_state, states, support_projector, IdentityDecomposition, Ket, Operator, Projector,
    C64, EPS_SUPPORT,
};
use crate::serial::{complex_doc, ComplexDoc};

/// One qubit receives a basis state `|p^m>`; the others start in a fixed
/// environment state.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelPrep {
    pub input_qubit: usize,
    /// State of the remaining qubits, in ascending index order.
    pub environment: Ket,
}

impl ChannelPrep {
    /// Input qubit with every other qubit in `|0>`.
    pub fn with_zero_environment(input_qubit: usize, n_qubits: usize) -> Result<Self> {
        if input_qubit >= n_qubits {
            return Err(Error::QubitOutOfRange { index: input_qubit, n_qubits });
        }
        Ok(Self { input_qubit, environment: Ket::basis(n_qubits - 1, 0)? })
    }

    pub fn n_qubits(&self) -> usize {
        self.environment.n_qubits() + 1
    }

    /// `|p>` placed on the input qubit, tensored with the environment.
    pub fn initial_ket(&self, p: &Ket) -> Result<Ket> {
        if p.dim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: p.dim() });
        }
        let n = self.n_qubits();
        let shift = n - 1 - self.input_qubit;
        let amps = (0..1usize << n)
            .map(|i| {
                let bit = (i >> shift) & 1;
                let env = ((i >> (shift + 1)) << shift) | (i & ((1 << shift) - 1));
                p.amplitudes()[bit] * self.environment.amplitudes()[env]
            })
            .collect();
        Ket::new(amps)
    }

    /// `T(t, t0) |p^m> ⊗ |e0>` for both labels of `basis`.
    pub fn channel_states(&self, circuit: &TimedCircuit, basis: &LambdaBasis, time: &str) -> Result<Vec<Ket>> {
        if circuit.n_qubits() != self.n_qubits() {
            return Err(Error::DimensionMismatch { expected: circuit.n_qubits(), got: self.n_qubits() });
        }
        let u = circuit.propagator(circuit.initial_time(), time)?;
        basis.kets.iter().map(|p| u.apply(&self.initial_ket(p)?)).collect()
    }
}

/// A split of the qubits into a carrier `B` and the rest `F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsystemFactorization {
    b_qubits: Vec<usize>,
    f_qubits: Vec<usize>,
}

impl SubsystemFactorization {
    pub fn new(b_qubits: &[usize], n_qubits: usize) -> Result<Self> {
        if b_qubits.is_empty() {
            return Err(Error::InvalidQubitSet("carrier subsystem is empty".into()));
        }
        let mut b = b_qubits.to_vec();
        b.sort_unstable();
        b.dedup();
        if b.len() != b_qubits.len() {
            return Err(Error::InvalidQubitSet(format!("repeated qubit in {b_qubits:?}")));
        }
        if let Some(&q) = b.iter().find(|&&q| q >= n_qubits) {
            return Err(Error::QubitOutOfRange { index: q, n_qubits });
        }
        let f_qubits = (0..n_qubits).filter(|q| !b.contains(q)).collect();
        Ok(Self { b_qubits: b, f_qubits })
    }

    pub fn b_qubits(&self) -> &[usize] {
        &self.b_qubits
    }

    pub fn f_qubits(&self) -> &[usize] {
        &self.f_qubits
    }

    pub fn n_qubits(&self) -> usize {
        self.b_qubits.len() + self.f_qubits.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChannelTolerance {
    /// Largest entry of `S^m S^n` (m != n) still counted as orthogonal.
    pub eps: f64,
    /// Eigenvalue cutoff for support projectors.
    pub eps_support: f64,
}

impl Default for ChannelTolerance {
    fn default() -> Self {
        Self { eps: EPS_SUPPORT, eps_support: EPS_SUPPORT }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubsystemVerdict {
    pub located: bool,
    /// `S^m ⊗ I_F` plus remainder when located.
    pub projectors: Option<IdentityDecomposition>,
    /// Largest entry of any `S^m S^n`, m != n.
    pub worst_overlap: f64,
}

/// `max_{m,m'} | P^m |Ψ^m'> - δ_{mm'} |Ψ^m> |`.
pub fn recovery_residual(projectors: &[Projector], states: &[Ket]) -> Result<f64> {
    let mut worst = 0.0f64;
    for (m, p) in projectors.iter().enumerate() {
        for (mp, psi) in states.iter().enumerate() {
            let image = p.op().apply(psi)?;
            let target = if m == mp { psi.clone() } else { Ket::zero(psi.dim())? };
            worst = worst.max(image.distance(&target));
        }
    }
    Ok(worst)
}

/// Structural presence test on explicit channel states.
pub fn info_in_states(states: &[Ket], fact: &SubsystemFactorization, tol: ChannelTolerance) -> Result<SubsystemVerdict> {
    let supports = states
        .iter()
        .map(|psi| support_projector(&reduced_state(psi, fact.b_qubits())?, tol.eps_support))
        .collect::<Result<Vec<_>>>()?;
    let mut worst = 0.0f64;
    for (i, si) in supports.iter().enumerate() {
        for sj in &supports[i + 1..] {
            worst = worst.max((si.op() * sj.op()).max_abs());
        }
    }
    if worst > tol.eps {
        return Ok(SubsystemVerdict { located: false, projectors: None, worst_overlap: worst });
    }
    let n = fact.n_qubits();
    let lifted = supports.iter().map(|s| s.embed(fact.b_qubits(), n)).collect::<Result<Vec<_>>>()?;
    let projectors = IdentityDecomposition::with_remainder(lifted, tol.eps.max(1e-8))?;
    Ok(SubsystemVerdict { located: true, projectors: Some(projectors), worst_overlap: worst })
}

/// Whether the channel fed with `basis` at `prep` is located in `fact`'s
/// carrier at `time`.
pub fn info_in_subsystem(
    circuit: &TimedCircuit,
    prep: &ChannelPrep,
    basis: &LambdaBasis,
    time: &str,
    fact: &SubsystemFactorization,
    tol: ChannelTolerance,
) -> Result<SubsystemVerdict> {
    info_in_states(&prep.channel_states(circuit, basis, time)?, fact, tol)
}

/// `P^m = H[p^m]H ⊗ [+] ⊗ I + HZ[p^m]ZH ⊗ [-] ⊗ I` on `(a, b, c)`.
pub fn pair_projectors(lambda: C64) -> Result<IdentityDecomposition> {
    let basis = lambda_basis(lambda)?;
    let h = gates::h();
    let hz = &h * &gates::z();
    let plus = Projector::from_ket(&states::plus());
    let minus = Projector::from_ket(&states::minus());
    let id = Projector::identity(2);
    let projectors = basis
        .kets
        .iter()
        .map(|p| {
            let pm = Projector::from_ket(p);
            let first = pm.conjugated_by(&h)?.kron(&plus).kron(&id);
            let second = pm.conjugated_by(&hz)?.kron(&minus).kron(&id);
            Projector::new(first.op().plus(second.op())?, 1e-12)
        })
        .collect::<Result<Vec<_>>>()?;
    IdentityDecomposition::new(projectors, None)
}

/// Product basis `|00 p^m>, |01 X p^m>, |10 Z p^m>, |11 XZ p^m>`, ordered by
/// the `(a, b)` bits and then `m`.
pub fn contextual_basis(lambda: C64) -> Result<IdentityDecomposition> {
    let basis = lambda_basis(lambda)?;
    let x = gates::x();
    let z = gates::z();
    let xz = &x * &z;
    let corrections = [Operator::identity(2), x, z, xz];
    let mut kets = Vec::with_capacity(8);
    for (jk, u) in corrections.iter().enumerate() {
        let prefix = Ket::basis(2, jk)?;
        for p in &basis.kets {
            kets.push(prefix.kron(&u.apply(p)?));
        }
    }
    IdentityDecomposition::from_basis(&kets)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubsetVerdictDoc {
    pub qubits: Vec<String>,
    #[serde(skip)]
    pub indices: Vec<usize>,
    pub located: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_lambda: Option<ComplexDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChannelLocationReport {
    pub time: String,
    pub input_qubit: String,
    pub construction: String,
    pub subsets: Vec<SubsetVerdictDoc>,
    pub minimal: Vec<Vec<String>>,
    #[serde(skip)]
    pub minimal_indices: Vec<Vec<usize>>,
    pub grid_seed: u64,
    pub grid_size: usize,
    pub eps: f64,
    pub eps_support: f64,
    /// Largest recovery residual over every located subset and λ.
    pub max_residual: f64,
}

impl ChannelLocationReport {
    pub fn verdict(&self, qubits: &[usize]) -> Option<&SubsetVerdictDoc> {
        let mut key = qubits.to_vec();
        key.sort_unstable();
        self.subsets.iter().find(|s| s.indices == key)
    }

    pub fn is_located(&self, qubits: &[usize]) -> bool {
        self.verdict(qubits).is_some_and(|v| v.located)
    }
}

/// Non-empty subsets of `0..n`, by size and then lexicographically.
pub fn ordered_subsets(n: usize) -> Vec<Vec<usize>> {
    let mut subsets: Vec<Vec<usize>> = (1..1usize << n)
        .map(|mask| (0..n).filter(|q| mask >> q & 1 == 1).collect())
        .collect();
    subsets.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
    subsets
}

/// Tests every non-empty subset against every λ in `grid`; a subset is
/// located when no sampled λ fails.
pub fn locate_channel(
    circuit: &TimedCircuit,
    prep: &ChannelPrep,
    time: &str,
    grid: &LambdaGrid,
    tol: ChannelTolerance,
) -> Result<ChannelLocationReport> {
    if grid.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = circuit.n_qubits();
    let subsets = ordered_subsets(n);
    let facts = subsets.iter().map(|s| SubsystemFactorization::new(s, n)).collect::<Result<Vec<_>>>()?;
    let mut witness: Vec<Option<C64>> = vec![None; subsets.len()];
    let mut max_residual = 0.0f64;
    for &lambda in &grid.points {
        let basis = lambda_basis(lambda)?;
        let states = prep.channel_states(circuit, &basis, time)?;
        for (k, fact) in facts.iter().enumerate() {
            if witness[k].is_some() {
                continue;
            }
            let verdict = info_in_states(&states, fact, tol)?;
            match verdict.projectors {
                Some(d) => max_residual = max_residual.max(recovery_residual(d.projectors(), &states)?),
                None => witness[k] = Some(lambda),
            }
        }
    }
    let labels = |s: &[usize]| s.iter().map(|&q| circuit.label(q).to_string()).collect::<Vec<_>>();
    let located: Vec<bool> = witness.iter().map(Option::is_none).collect();
    let minimal_indices: Vec<Vec<usize>> = subsets
        .iter()
        .zip(&located)
        .filter(|&(s, &ok)| {
            ok && !subsets
                .iter()
                .zip(&located)
                .any(|(t, &tok)| tok && t.len() < s.len() && t.iter().all(|q| s.contains(q)))
        })
        .map(|(s, _)| s.clone())
        .collect();
    Ok(ChannelLocationReport {
        time: time.to_string(),
        input_qubit: circuit.label(prep.input_qubit).to_string(),
        construction: "support_projectors".to_string(),
        subsets: subsets
            .iter()
            .zip(&witness)
            .map(|(s, w)| SubsetVerdictDoc {
                qubits: labels(s),
                indices: s.clone(),
                located: w.is_none(),
                witness_lambda: w.map(complex_doc),
            })
            .collect(),
        minimal: minimal_indices.iter().map(|s| labels(s)).collect(),
        minimal_indices,
        grid_seed: grid.seed,
        grid_size: grid.len(),
        eps: tol.eps,
        eps_support: tol.eps_support,
        max_residual,
    })
}

/// Joint distribution of the state label `m` (uniform prior) and the member
/// of `decomposition` that each state lands in.
pub fn decomposition_joint(decomposition: &IdentityDecomposition, states: &[Ket]) -> Result<JointDistribution> {
    let prior = 1.0 / states.len().max(1) as f64;
    let mut triples = Vec::with_capacity(states.len() * decomposition.len());
    for (m, psi) in states.iter().enumerate() {
        for (n, p) in decomposition.members().enumerate() {
            triples.push((m.to_string(), format!("{n:02}"), prior * p.op().apply(psi)?.norm_sqr()));
        }
    }
    JointDistribution::from_triples(triples)
}

/// Joint distribution of a preparation label and a branch label over the
/// branches of a consistent family.
pub fn framework_joint(
    family: &HistoryFamily,
    eps: f64,
    m_of: impl Fn(usize) -> String,
    n_of: impl Fn(&[usize]) -> String,
) -> Result<JointDistribution> {
    let set = family.branch_probabilities(eps)?;
    JointDistribution::from_triples(set.branches.iter().map(|b| (m_of(b.initial), n_of(&b.events), b.probability)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{teleport, teleportation_circuit};
    use crate::qmath::{embed, swap_qubits, verify_decomposition, EPS_NORM};

    fn teleport_prep() -> ChannelPrep {
        ChannelPrep::with_zero_environment(teleport::A, 3).unwrap()
    }

    fn sample_lambdas() -> Vec<C64> {
        vec![
            C64::new(0.0, 0.0),
            C64::new(1.0, 0.0),
            C64::new(0.0, 1.0),
            C64::new(0.3, 0.0),
            C64::from_polar(0.7, std::f64::consts::FRAC_PI_3),
        ]
    }

    #[test]
    fn input_qubit_is_inserted_in_place() {
        let prep = ChannelPrep { input_qubit: 1, environment: Ket::from_bits(&[1, 0]).unwrap() };
        let k = prep.initial_ket(&states::one()).unwrap();
        assert!(k.ray_eq(&Ket::from_bits(&[1, 1, 0]).unwrap(), 1e-15));
    }

    #[test]
    fn located_in_a_before_the_bell_measurement() {
        let circuit = teleportation_circuit();
        let fact = SubsystemFactorization::new(&[teleport::A], 3).unwrap();
        for lambda in sample_lambdas() {
            let basis = lambda_basis(lambda).unwrap();
            let v = info_in_subsystem(&circuit, &teleport_prep(), &basis, "t3", &fact, Default::default()).unwrap();
            assert!(v.located, "λ = {lambda}");
            let d = v.projectors.unwrap();
            assert!(verify_decomposition(&d, EPS_NORM).valid);
            // [p^m] ⊗ I ⊗ I
            for (p, ket) in d.projectors().iter().zip(&basis.kets) {
                let expected = embed(&ket.outer(), &[0], 3).unwrap();
                assert!(p.op().max_abs_diff(&expected) < 1e-10);
            }
        }
    }

    #[test]
    fn not_located_in_a_after_the_bell_rotation() {
        let circuit = teleportation_circuit();
        let fact = SubsystemFactorization::new(&[teleport::A], 3).unwrap();
        let basis = lambda_basis(C64::new(0.3, 0.0)).unwrap();
        let v = info_in_subsystem(&circuit, &teleport_prep(), &basis, "t5", &fact, Default::default()).unwrap();
        assert!(!v.located && v.projectors.is_none());
    }

    #[test]
    fn closed_form_pair_projectors_match_support_construction() {
        let circuit = teleportation_circuit();
        let fact = SubsystemFactorization::new(&[teleport::A, teleport::B], 3).unwrap();
        let swap = swap_qubits(3, teleport::B, teleport::C).unwrap();
        for lambda in sample_lambdas() {
            let closed = pair_projectors(lambda).unwrap();
            let report = verify_decomposition(&closed, EPS_NORM);
            assert!(report.valid && closed.remainder().is_none());
            assert!((closed.projectors()[0].op() * closed.projectors()[1].op()).max_abs() < 1e-12);
            let basis = lambda_basis(lambda).unwrap();
            let states = teleport_prep().channel_states(&circuit, &basis, "t5").unwrap();
            assert!(recovery_residual(closed.projectors(), &states).unwrap() < 1e-10);
            let v = info_in_states(&states, &fact, Default::default()).unwrap();
            let found = v.projectors.unwrap();
            for (x, y) in found.projectors().iter().zip(closed.projectors()) {
                assert!(x.op().max_abs_diff(y.op()) < 1e-10);
            }
            let swapped = closed.conjugated_by(&swap).unwrap();
            assert!(recovery_residual(swapped.projectors(), &states).unwrap() < 1e-10);
        }
    }

    #[test]
    fn teleportation_location_over_time() {
        let circuit = teleportation_circuit();
        let grid = LambdaGrid::standard(42, 16);
        let at = |t: &str| locate_channel(&circuit, &teleport_prep(), t, &grid, Default::default()).unwrap();
        assert_eq!(at("t3").minimal_indices, vec![vec![0]]);
        let t5 = at("t5");
        assert_eq!(t5.minimal_indices, vec![vec![0, 1], vec![0, 2]]);
        assert!(!t5.is_located(&[1, 2]));
        assert!(t5.verdict(&[0]).unwrap().witness_lambda.is_some());
        assert!(t5.max_residual < 1e-10);
        assert_eq!(at("t8").minimal_indices, vec![vec![2]]);
    }

    #[test]
    fn contextual_basis_is_a_product_basis() {
        let d = contextual_basis(C64::new(0.3, 0.0)).unwrap();
        assert_eq!(d.len(), 8);
        assert!(verify_decomposition(&d, EPS_NORM).valid);
        let z = contextual_basis(C64::new(0.0, 0.0)).unwrap();
        let comp = IdentityDecomposition::computational(3);
        for p in z.projectors() {
            assert!(comp.projectors().iter().any(|q| q.op().max_abs_diff(p.op()) < 1e-12));
        }
    }

    #[test]
    fn subsets_are_ordered_by_size_then_lexicographically() {
        assert_eq!(
            ordered_subsets(3),
            vec![vec![0], vec![1], vec![2], vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 1, 2]]
        );
    }

    #[test]
    fn report_serializes_expected_keys() {
        let circuit = teleportation_circuit();
        let grid = LambdaGrid::standard(42, 4);
        let r = locate_channel(&circuit, &teleport_prep(), "t3", &grid, Default::default()).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        for key in ["time", "subsets", "minimal", "grid_seed", "eps"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["minimal"], serde_json::json!([["a"]]));
    }
}
