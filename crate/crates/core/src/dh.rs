//! Heisenberg-picture descriptors and the dependence/accessibility notion of
//! where information about a gate parameter resides.

use serde::Serialize;

use crate::circuit::{dense, dense_coding_circuit, Angle, Bindings, Gate, TimedCircuit};
use crate::error::{Error, Result};
use crate::qmath::{embed, gates::Pauli, reduced_state, Ket, Operator};

pub const DEPENDENCE_STEP: f64 = 1e-6;
pub const DEPENDENCE_THRESHOLD: f64 = 1e-6;
pub const ACCESSIBILITY_TOL: f64 = 1e-9;
/// Offsets from the base angle at which the derivative is estimated.
pub const SAMPLE_OFFSETS: [f64; 3] = [0.0, 0.5, 1.0];

/// `U† σ^α_j U` with `U = T(t, t0)`.
pub fn heisenberg_operator(
    circuit: &TimedCircuit,
    alpha: usize,
    j: Pauli,
    time: &str,
    bindings: &Bindings,
) -> Result<Operator> {
    let n = circuit.n_qubits();
    let u = circuit.propagator_with(circuit.initial_time(), time, bindings)?;
    let sigma = embed(&j.matrix(), &[alpha], n)?;
    sigma.conjugated_by(&u.adjoint())
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeisenbergDescriptor {
    pub qubit: usize,
    pub time: String,
    /// x, y, z in that order.
    pub operators: [Operator; 3],
}

impl HeisenbergDescriptor {
    pub fn new(circuit: &TimedCircuit, alpha: usize, time: &str, bindings: &Bindings) -> Result<Self> {
        let op = |j| heisenberg_operator(circuit, alpha, j, time, bindings);
        Ok(Self {
            qubit: alpha,
            time: time.to_string(),
            operators: [op(Pauli::X)?, op(Pauli::Y)?, op(Pauli::Z)?],
        })
    }
}

/// Largest entry of the central-difference derivative `∂σ̂/∂θ` over the
/// three Paulis, at one point.
pub fn derivative_norm(
    circuit: &TimedCircuit,
    alpha: usize,
    time: &str,
    param: &str,
    bindings: &Bindings,
    dtheta: f64,
) -> Result<f64> {
    let theta = *bindings.get(param).ok_or_else(|| Error::UnboundParameter(param.to_string()))?;
    let at = |value: f64| {
        let mut b = bindings.clone();
        b.insert(param.to_string(), value);
        b
    };
    let (lo, hi) = (at(theta - dtheta), at(theta + dtheta));
    let mut worst = 0.0f64;
    for j in Pauli::ALL {
        let d = heisenberg_operator(circuit, alpha, j, time, &hi)?
            .minus(&heisenberg_operator(circuit, alpha, j, time, &lo)?)?
            .max_abs()
            / (2.0 * dtheta);
        worst = worst.max(d);
    }
    Ok(worst)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Dependence {
    pub depends: bool,
    pub magnitude: f64,
}

/// Whether the Heisenberg operators of `alpha` at `time` vary with `param`
/// near the base bindings.
pub fn parameter_dependence(
    circuit: &TimedCircuit,
    alpha: usize,
    time: &str,
    param: &str,
    theta0: &Bindings,
    dtheta: f64,
) -> Result<Dependence> {
    let base = *theta0.get(param).ok_or_else(|| Error::UnboundParameter(param.to_string()))?;
    let mut magnitude = 0.0f64;
    for offset in SAMPLE_OFFSETS {
        let mut b = theta0.clone();
        b.insert(param.to_string(), base + offset);
        magnitude = magnitude.max(derivative_norm(circuit, alpha, time, param, &b, dtheta)?);
    }
    Ok(Dependence { depends: magnitude > DEPENDENCE_THRESHOLD, magnitude })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Accessibility {
    pub accessible: bool,
    /// Largest entry-wise difference between reduced states across samples.
    pub variation: f64,
}

/// Whether the reduced state of `alpha` at `time`, starting from all `|0>`,
/// changes across the parameter samples.
pub fn accessibility_test(circuit: &TimedCircuit, alpha: usize, time: &str, samples: &[Bindings]) -> Result<Accessibility> {
    if samples.len() < 2 {
        return Err(Error::InvalidFamily("accessibility needs at least two parameter samples".into()));
    }
    let psi0 = Ket::basis(circuit.n_qubits(), 0)?;
    let states = samples
        .iter()
        .map(|b| reduced_state(&circuit.evolve_with(&psi0, time, b)?, &[alpha]))
        .collect::<Result<Vec<_>>>()?;
    let mut variation = 0.0f64;
    for (i, x) in states.iter().enumerate() {
        for y in &states[i + 1..] {
            variation = variation.max(x.max_abs_diff(y));
        }
    }
    Ok(Accessibility { accessible: variation > ACCESSIBILITY_TOL, variation })
}

/// Dense coding with Alice's two bits prepared from `|0>` by `RY(theta_a)` on
/// `a` and `RY(theta_abar)` on `abar`.
pub fn dense_coding_dh_circuit() -> TimedCircuit {
    let c = dense_coding_circuit();
    let t0 = c.initial_time().to_string();
    c.with_gate(&t0, Gate::Ry(dense::A, Angle::Param("theta_a".into())))
        .and_then(|c| c.with_gate(&t0, Gate::Ry(dense::ABAR, Angle::Param("theta_abar".into()))))
        .expect("static circuit")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DhVerdict {
    pub qubit: String,
    pub time: String,
    pub parameter: String,
    pub depends: bool,
    pub magnitude: f64,
    pub accessible: bool,
    pub variation: f64,
}

/// Dependence and accessibility for every qubit at `time`, for `param`
/// around `theta0` (accessibility compares `theta0` with `param` at 0 and π).
pub fn dh_verdicts(circuit: &TimedCircuit, time: &str, param: &str, theta0: &Bindings) -> Result<Vec<DhVerdict>> {
    let sample = |v: f64| {
        let mut b = theta0.clone();
        b.insert(param.to_string(), v);
        b
    };
    let samples = [sample(0.0), sample(std::f64::consts::PI)];
    (0..circuit.n_qubits())
        .map(|q| {
            let d = parameter_dependence(circuit, q, time, param, theta0, DEPENDENCE_STEP)?;
            let a = accessibility_test(circuit, q, time, &samples)?;
            Ok(DhVerdict {
                qubit: circuit.label(q).to_string(),
                time: time.to_string(),
                parameter: param.to_string(),
                depends: d.depends,
                magnitude: d.magnitude,
                accessible: a.accessible,
                variation: a.variation,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::dense::{A, ABAR, B, C};
    use crate::qmath::{gates, EPS_NORM};
    use proptest::prelude::*;

    fn base() -> Bindings {
        [("theta_a".to_string(), 0.4), ("theta_abar".to_string(), 0.9)].into_iter().collect()
    }

    /// Qubits reachable from the gates that carry `param` by the end of the
    /// layer ending at `time`.
    fn light_cone(circuit: &TimedCircuit, param: &str, time: &str) -> Vec<bool> {
        let end = circuit.time_index(time).unwrap();
        let mut reached = vec![false; circuit.n_qubits()];
        for layer in &circuit.layers()[..end] {
            for gate in layer {
                let qs = gate.qubits();
                if gate.parameter() == Some(param) || qs.iter().any(|&q| reached[q]) {
                    for q in qs {
                        reached[q] = true;
                    }
                }
            }
        }
        reached
    }

    #[test]
    fn initial_time_is_identity_conjugation() {
        let c = dense_coding_dh_circuit();
        for j in Pauli::ALL {
            let op = heisenberg_operator(&c, B, j, "t0", &base()).unwrap();
            assert!(op.max_abs_diff(&embed(&j.matrix(), &[B], 4).unwrap()) < 1e-15);
        }
    }

    #[test]
    fn descriptors_keep_the_pauli_algebra() {
        let c = dense_coding_dh_circuit();
        let d = HeisenbergDescriptor::new(&c, B, "t6", &base()).unwrap();
        let id = Operator::identity(16);
        for op in &d.operators {
            assert!(op.is_hermitian(EPS_NORM) && op.is_unitary(EPS_NORM));
            assert!((op * op).max_abs_diff(&id) < EPS_NORM);
        }
    }

    #[test]
    fn unbound_parameter_is_an_error() {
        let c = dense_coding_dh_circuit();
        let err = heisenberg_operator(&c, A, Pauli::Z, "t3", &Bindings::new()).unwrap_err();
        assert!(matches!(err, Error::UnboundParameter(_)));
    }

    #[test]
    fn transit_qubit_depends_but_is_inaccessible() {
        let c = dense_coding_dh_circuit();
        for t in ["t5", "t6"] {
            for param in ["theta_a", "theta_abar"] {
                let d = parameter_dependence(&c, B, t, param, &base(), DEPENDENCE_STEP).unwrap();
                assert!(d.depends, "{t} {param}");
                let samples = [0.0, std::f64::consts::PI].map(|v| {
                    let mut b = base();
                    b.insert(param.into(), v);
                    b
                });
                assert!(!accessibility_test(&c, B, t, &samples).unwrap().accessible);
            }
        }
    }

    #[test]
    fn output_qubit_c_is_accessible_at_the_end() {
        let c = dense_coding_dh_circuit();
        let v = dh_verdicts(&c, "t8", "theta_abar", &base()).unwrap();
        assert!(v[C].depends && v[C].accessible);
    }

    #[test]
    fn no_dependence_outside_the_light_cone() {
        let c = dense_coding_dh_circuit();
        for param in ["theta_a", "theta_abar"] {
            for t in c.times() {
                let cone = light_cone(&c, param, t);
                for q in 0..4 {
                    if !cone[q] {
                        let d = parameter_dependence(&c, q, t, param, &base(), DEPENDENCE_STEP).unwrap();
                        assert!(!d.depends, "{param} {t} qubit {q}");
                    }
                }
            }
        }
        // c is first reached by the encoding only after Bob's final CNOT.
        assert!(!parameter_dependence(&c, C, "t6", "theta_a", &base(), DEPENDENCE_STEP).unwrap().depends);
        assert!(!parameter_dependence(&c, ABAR, "t8", "theta_a", &base(), DEPENDENCE_STEP).unwrap().depends);
    }

    #[test]
    fn rz_at_zero_still_has_a_derivative() {
        let c = TimedCircuit::with_standard_times(1, vec![vec![Gate::Rz(0, Angle::Param("theta".into()))]]).unwrap();
        let b: Bindings = [("theta".to_string(), 0.0)].into_iter().collect();
        let d = derivative_norm(&c, 0, "t1", "theta", &b, DEPENDENCE_STEP).unwrap();
        // d/dθ RZ(θ)† X RZ(θ) at 0 is -Y, whose largest entry has modulus one.
        assert!((d - 1.0).abs() < 1e-6);
        let x = heisenberg_operator(&c, 0, Pauli::X, "t1", &b).unwrap();
        assert!(x.max_abs_diff(&gates::x()) < 1e-15);
    }

    #[test]
    fn untouched_qubit_neither_depends_nor_is_accessible() {
        let c = TimedCircuit::with_standard_times(
            2,
            vec![vec![Gate::Ry(0, Angle::Param("theta".into()))], vec![Gate::H(0)]],
        )
        .unwrap();
        let v = dh_verdicts(&c, "t2", "theta", &[("theta".to_string(), 0.3)].into_iter().collect()).unwrap();
        assert!(!v[1].depends && !v[1].accessible);
        assert!(v[0].depends && v[0].accessible);
    }

    #[derive(Clone, Debug)]
    enum G {
        H(usize),
        Cnot(usize, usize),
        Cz(usize, usize),
        Rz(usize),
        Ry(usize),
    }

    fn gate_strategy(n: usize) -> BoxedStrategy<G> {
        let q = 0..n;
        let single = prop_oneof![q.clone().prop_map(G::H), q.clone().prop_map(G::Rz), q.clone().prop_map(G::Ry)];
        if n == 1 {
            return single.boxed();
        }
        let pair = (0..n, 1..n).prop_map(move |(a, off)| (a, (a + off) % n));
        prop_oneof![
            single,
            pair.clone().prop_map(|(a, b)| G::Cnot(a, b)),
            pair.prop_map(|(a, b)| G::Cz(a, b)),
        ]
        .boxed()
    }

    fn circuit_strategy() -> impl Strategy<Value = (TimedCircuit, Bindings)> {
        (1usize..=3)
            .prop_flat_map(|n| (Just(n), prop::collection::vec(gate_strategy(n), 1..=6), prop::collection::vec(-3.0..3.0f64, 6)))
            .prop_map(|(n, gs, angles)| {
                let mut bindings = Bindings::new();
                let layers = gs
                    .into_iter()
                    .enumerate()
                    .map(|(i, g)| {
                        let name = format!("p{i}");
                        bindings.insert(name.clone(), angles[i]);
                        vec![match g {
                            G::H(q) => Gate::H(q),
                            G::Cnot(a, b) => Gate::Cnot { control: a, target: b },
                            G::Cz(a, b) => Gate::Cz(a, b),
                            G::Rz(q) => Gate::Rz(q, Angle::Param(name)),
                            G::Ry(q) => Gate::Ry(q, Angle::Param(name)),
                        }]
                    })
                    .collect();
                (TimedCircuit::with_standard_times(n, layers).unwrap(), bindings)
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn heisenberg_and_schrodinger_expectations_agree((circuit, bindings) in circuit_strategy()) {
            let n = circuit.n_qubits();
            let last = circuit.times().last().unwrap().clone();
            let psi0 = Ket::basis(n, 0).unwrap();
            let psi = circuit.evolve_with(&psi0, &last, &bindings).unwrap();
            for alpha in 0..n {
                for j in Pauli::ALL {
                    let h = heisenberg_operator(&circuit, alpha, j, &last, &bindings).unwrap();
                    let s = embed(&j.matrix(), &[alpha], n).unwrap();
                    let lhs = h.expectation(&psi0).unwrap();
                    let rhs = s.expectation(&psi).unwrap();
                    prop_assert!((lhs - rhs).norm() < 1e-9);
                }
            }
        }

        #[test]
        fn dependence_is_necessary_for_accessibility((circuit, bindings) in circuit_strategy()) {
            let last = circuit.times().last().unwrap().clone();
            let param = bindings.keys().next().unwrap().clone();
            for v in dh_verdicts(&circuit, &last, &param, &bindings).unwrap() {
                prop_assert!(v.depends || !v.accessible);
            }
        }
    }
}
