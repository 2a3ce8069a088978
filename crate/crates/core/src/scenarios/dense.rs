use std::sync::Arc;

use serde::Serialize;

use super::framework::{trivial, x, z, Framework};
use super::ScenarioReport;
use crate::circuit::{dense, dense_coding_circuit, TimedCircuit};
use crate::config::Config;
use crate::error::Result;
use crate::qmath::{reduced_state, states, IdentityDecomposition, Ket, Operator, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DenseFramework {
    /// Unitary development with the Bell basis for `b, c` at t5 and t6.
    F1,
    /// Computational basis for every qubit at t2, t4, t7.
    F2,
    /// `S_x` for `b, c` at t2 and t5; computational elsewhere.
    F3,
}

/// `(label "a abar", |a abar 0 0>)` for the four inputs.
pub(crate) fn dense_inputs() -> Vec<(String, Ket)> {
    (0..4u8)
        .map(|i| {
            let (a, abar) = (i >> 1, i & 1);
            (format!("{a}{abar}"), Ket::from_bits(&[a, abar, 0, 0]).expect("4 qubits"))
        })
        .collect()
}

fn project(index: usize) -> impl Fn(&str) -> String {
    move |label: &str| label[index..=index].to_string()
}

fn all_z() -> Vec<(&'static str, IdentityDecomposition)> {
    vec![("a", z()), ("abar", z()), ("b", z()), ("c", z())]
}

pub fn dense_coding_report(which: DenseFramework, config: &Config) -> Result<ScenarioReport> {
    let circuit = Arc::new(dense_coding_circuit());
    match which {
        DenseFramework::F1 => f1(circuit, config),
        DenseFramework::F2 => f2(circuit, config),
        DenseFramework::F3 => f3(circuit, config),
    }
}

fn f1(circuit: Arc<TimedCircuit>, config: &Config) -> Result<ScenarioReport> {
    let mut report = ScenarioReport::new("dense-coding-f1", "F1");
    let bell = IdentityDecomposition::from_basis(&states::bell_basis())?;
    let event = || vec![("a", trivial()), ("abar", trivial()), ("bc", bell.clone())];
    let fw = Framework::build(
        "F1",
        circuit.clone(),
        dense_inputs(),
        vec![("t5", event()), ("t6", event())],
        config.eps_consistency,
    )?;
    let mut bell_bits = f64::INFINITY;
    for t in ["t5", "t6"] {
        let j = fw.joint(|m| m.to_string(), |o| o.get(t, "bc").to_string())?;
        bell_bits = bell_bits.min(report.mi(t, "a,abar", &["b", "c"], "Bell index", &j));
    }
    report.claim("dense.f1.bell_index_bits", bell_bits)?;

    let half = Operator::identity(2).scaled(C64::new(0.5, 0.0));
    let mut deviation = 0.0f64;
    for (_, ket) in dense_inputs() {
        let psi = circuit.evolve(&ket, "t5")?;
        deviation = deviation.max(reduced_state(&psi, &[dense::B])?.max_abs_diff(&half));
    }
    report.claim("dense.f1.b_maximally_mixed", deviation)?;
    report.section("consistency", &fw.consistency)?;
    Ok(report)
}

/// Table rows for `m_var` against `b`, `c`, the pair, and `b xor c`.
fn bc_rows(report: &mut ScenarioReport, fw: &Framework, t: &str, m_var: &str, m_index: usize) -> Result<[f64; 4]> {
    let jb = fw.joint(project(m_index), |o| o.get(t, "b").to_string())?;
    let jc = fw.joint(project(m_index), |o| o.get(t, "c").to_string())?;
    let jbc = fw.joint(project(m_index), |o| o.digits(t, &["b", "c"]))?;
    let jx = fw.joint(project(m_index), |o| (o.get(t, "b") ^ o.get(t, "c")).to_string())?;
    Ok([
        report.mi(t, m_var, &["b"], "b", &jb),
        report.mi(t, m_var, &["c"], "c", &jc),
        report.mi(t, m_var, &["b", "c"], "(b,c)", &jbc),
        report.mi(t, m_var, &["b", "c"], "b xor c", &jx),
    ])
}

fn f2(circuit: Arc<TimedCircuit>, config: &Config) -> Result<ScenarioReport> {
    let mut report = ScenarioReport::new("dense-coding-f2", "F2");
    let eps = config.eps_consistency;
    let fw = Framework::build(
        "F2",
        circuit,
        dense_inputs(),
        vec![("t2", all_z()), ("t4", all_z()), ("t7", all_z())],
        eps,
    )?;
    report.claim_bool("dense.f2.consistent", fw.consistency.consistent)?;
    report.claim("dense.f2.branch_probability", fw.conditional_deviation(0.5)?)?;

    let mut at_t4 = [0.0; 4];
    let mut a_t7 = [0.0; 4];
    for t in ["t2", "t4", "t7"] {
        let abar = bc_rows(&mut report, &fw, t, "abar", 1)?;
        let a = bc_rows(&mut report, &fw, t, "a", 0)?;
        if t == "t4" {
            at_t4 = abar;
        }
        if t == "t7" {
            a_t7 = a;
        }
    }
    report.claim("dense.f2.abar_in_b_xor_c_t4", at_t4[3])?;
    report.claim("dense.f2.abar_in_b_t4", at_t4[0])?;
    report.claim("dense.f2.abar_in_c_t4", at_t4[1])?;
    report.claim("dense.f2.a_in_bc_t7", a_t7[2])?;
    let hit = fw.probability(|m, o| o.get("t7", "c").to_string() == project(1)(m))?;
    report.claim("dense.f2.final_c_equals_abar", hit)?;

    let refined = fw.family.refine("t8", z().embed(&[dense::B], 4)?, eps)?;
    let forbidden = refined.consistency_check(eps);
    report.claim_bool("dense.f2.b_at_t8_consistent", forbidden.consistent)?;
    report.claim("dense.f2.b_at_t8_overlap", forbidden.worst_overlap)?;
    report.section("consistency", &fw.consistency)?;
    report.section("forbidden_refinement_b_t8", &forbidden)?;
    Ok(report)
}

fn f3(circuit: Arc<TimedCircuit>, config: &Config) -> Result<ScenarioReport> {
    let mut report = ScenarioReport::new("dense-coding-f3", "F3");
    let eps = config.eps_consistency;
    let early = || vec![("a", z()), ("abar", z()), ("b", x()), ("c", x())];
    let fw = Framework::build(
        "F3",
        circuit,
        dense_inputs(),
        vec![("t2", early()), ("t5", early()), ("t8", vec![("a", z()), ("abar", z()), ("b", z()), ("c", x())])],
        eps,
    )?;
    report.claim_bool("dense.f3.consistent", fw.consistency.consistent)?;
    let mut a_t5 = [0.0; 4];
    let mut abar_t5 = [0.0; 4];
    for t in ["t2", "t5"] {
        let a = bc_rows(&mut report, &fw, t, "a", 0)?;
        let abar = bc_rows(&mut report, &fw, t, "abar", 1)?;
        if t == "t5" {
            a_t5 = a;
            abar_t5 = abar;
        }
    }
    let jb = fw.joint(project(0), |o| o.get("t8", "b").to_string())?;
    report.mi("t8", "a", &["b"], "b", &jb);
    report.claim("dense.f3.a_in_bc_t5", a_t5[3])?;
    report.claim("dense.f3.abar_in_bc_t5", abar_t5[2])?;
    let hit = fw.probability(|m, o| o.get("t8", "b").to_string() == project(0)(m))?;
    report.claim("dense.f3.final_b_equals_a", hit)?;

    let refined = fw.family.refine("t7", z().embed(&[dense::C], 4)?, eps)?;
    let forbidden = refined.consistency_check(eps);
    report.claim_bool("dense.f3.c_at_t7_consistent", forbidden.consistent)?;
    report.section("consistency", &fw.consistency)?;
    report.section("forbidden_refinement_c_t7", &forbidden)?;
    Ok(report)
}
