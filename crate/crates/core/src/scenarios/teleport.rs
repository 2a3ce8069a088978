use std::sync::Arc;

use serde::Serialize;

use super::framework::{x, z, Framework};
use super::ScenarioReport;
use crate::circuit::{teleport, teleportation_circuit, TimedCircuit};
use crate::config::Config;
use crate::error::Result;
use crate::infoloc::{
    contextual_basis, decomposition_joint, recovery_residual, pair_projectors, info_in_states, lambda_basis,
    locate_channel, ChannelPrep, JointDistribution, SubsystemFactorization,
};
use crate::qmath::{embed, swap_qubits, verify_decomposition, IdentityDecomposition, Ket, Operator, C64};
use crate::serial::complex_sig12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TeleportStructure {
    /// Every input basis, with the channel located by subsystem.
    UnitaryChannel,
    /// Computational basis for every qubit, input basis λ = 0.
    ComputationalF,
    /// `S_x` basis throughout except `a` in `S_z` from t5, input basis λ = 1.
    SxF,
    /// Contextual product basis at t5 and its unitary images afterwards.
    Contextual,
}

pub fn teleportation_report(which: TeleportStructure, config: &Config) -> Result<ScenarioReport> {
    let circuit = Arc::new(teleportation_circuit());
    match which {
        TeleportStructure::UnitaryChannel => unitary_channel(&circuit, config),
        TeleportStructure::ComputationalF => computational(circuit, config),
        TeleportStructure::SxF => sx(circuit, config),
        TeleportStructure::Contextual => contextual(circuit, config),
    }
}

pub(crate) fn teleport_prep() -> ChannelPrep {
    ChannelPrep::with_zero_environment(teleport::A, 3).expect("three qubits")
}

/// `("m", |p^m> ⊗ |00>)` for the basis labelled by λ.
fn inputs(lambda: C64) -> Result<Vec<(String, Ket)>> {
    let basis = lambda_basis(lambda)?;
    let prep = teleport_prep();
    basis.kets.iter().enumerate().map(|(m, p)| Ok((m.to_string(), prep.initial_ket(p)?))).collect()
}

fn unitary_channel(circuit: &TimedCircuit, config: &Config) -> Result<ScenarioReport> {
    let mut report = ScenarioReport::new("teleportation-unitary", "unitary_channel");
    let grid = config.grid();
    let tol = config.channel_tolerance();
    let prep = teleport_prep();
    let times: Vec<String> = circuit.times()[1..].to_vec();
    let mut locations = Vec::with_capacity(times.len());
    for t in &times {
        locations.push(locate_channel(circuit, &prep, t, &grid, tol)?);
    }
    let minimal = |t: &str| &locations[circuit.time_index(t).expect("known") - 1].minimal_indices;
    let pairs = vec![vec![0, 1], vec![0, 2]];
    report.claim_bool("teleport.channel.in_a_t1_t3", ["t1", "t2", "t3"].iter().all(|t| *minimal(t) == vec![vec![0]]))?;
    report.claim_bool("teleport.channel.in_ab_and_ac_t4_t5", ["t4", "t5"].iter().all(|t| *minimal(t) == pairs))?;
    report.claim_bool("teleport.channel.not_in_bc_t5", locations[4].is_located(&[1, 2]))?;
    report.claim_bool("teleport.channel.in_c_t8", *minimal("t8") == vec![vec![2]])?;

    let swap = swap_qubits(3, teleport::B, teleport::C)?;
    let ab = SubsystemFactorization::new(&[teleport::A, teleport::B], 3)?;
    let mut agreement = 0.0f64;
    let mut residual = 0.0f64;
    for &lambda in &grid.points {
        let basis = lambda_basis(lambda)?;
        let states = prep.channel_states(circuit, &basis, "t5")?;
        let closed = pair_projectors(lambda)?;
        match info_in_states(&states, &ab, tol)?.projectors {
            Some(found) => {
                for (p, q) in found.projectors().iter().zip(closed.projectors()) {
                    agreement = agreement.max(p.op().max_abs_diff(q.op()));
                }
            }
            None => agreement = f64::INFINITY,
        }
        residual = residual.max(recovery_residual(closed.projectors(), &states)?);
        residual = residual.max(recovery_residual(closed.conjugated_by(&swap)?.projectors(), &states)?);
    }
    report.claim("teleport.channel.closed_form_agreement", agreement)?;
    report.claim("teleport.channel.closed_form_residual", residual)?;

    // Information carried by the located projectors, worst case over the grid.
    let mut located_bits = f64::INFINITY;
    for (t, loc) in times.iter().zip(&locations) {
        for subset in &loc.minimal_indices {
            let fact = SubsystemFactorization::new(subset, 3)?;
            let mut worst: Option<JointDistribution> = None;
            for &lambda in &grid.points {
                let states = prep.channel_states(circuit, &lambda_basis(lambda)?, t)?;
                let Some(d) = info_in_states(&states, &fact, tol)?.projectors else { continue };
                let j = decomposition_joint(&d, &states)?;
                if worst.as_ref().is_none_or(|w| j.mutual_information() < w.mutual_information()) {
                    worst = Some(j);
                }
            }
            if let Some(j) = worst {
                let labels: Vec<&str> = subset.iter().map(|&q| circuit.label(q)).collect();
                located_bits = located_bits.min(report.mi(t, "m", &labels, "located projector (worst λ)", &j));
            }
        }
    }
    report.claim("teleport.channel.located_bits", located_bits)?;
    report.section("location", &locations)?;
    Ok(report)
}

fn all_z() -> Vec<(&'static str, IdentityDecomposition)> {
    vec![("a", z()), ("b", z()), ("c", z())]
}

fn rows(report: &mut ScenarioReport, fw: &Framework, t: &str, carriers: &[&[&str]]) -> Result<Vec<f64>> {
    carriers
        .iter()
        .map(|labels| {
            let j = fw.joint(|m| m.to_string(), |o| o.digits(t, labels))?;
            Ok(report.mi(t, "m", labels, &labels.join(","), &j))
        })
        .collect()
}

fn computational(circuit: Arc<TimedCircuit>, config: &Config) -> Result<ScenarioReport> {
    let mut report = ScenarioReport::new("teleportation-computational", "computational_F");
    let fw = Framework::build(
        "computational",
        circuit,
        inputs(C64::new(0.0, 0.0))?,
        ["t2", "t4", "t5", "t7", "t8"].iter().map(|t| (*t, all_z())).collect(),
        config.eps_consistency,
    )?;
    report.claim_bool("teleport.computational.consistent", fw.consistency.consistent)?;
    rows(&mut report, &fw, "t4", &[&["a"], &["b", "c"]])?;
    let t5 = rows(&mut report, &fw, "t5", &[&["b", "c"], &["a", "b"], &["a", "c"], &["a"]])?;
    rows(&mut report, &fw, "t7", &[&["c"]])?;
    let t8 = rows(&mut report, &fw, "t8", &[&["c"]])?;
    report.claim("teleport.computational.bc_t5", t5[0])?;
    report.claim("teleport.computational.ab_t5", t5[1])?;
    report.claim("teleport.computational.ac_t5", t5[2])?;
    report.claim("teleport.computational.c_t8", t8[0])?;
    report.section("consistency", &fw.consistency)?;
    Ok(report)
}

fn sx(circuit: Arc<TimedCircuit>, config: &Config) -> Result<ScenarioReport> {
    let mut report = ScenarioReport::new("teleportation-sx", "sx_F");
    let all_x = || vec![("a", x()), ("b", x()), ("c", x())];
    let late = || vec![("a", z()), ("b", x()), ("c", x())];
    let fw = Framework::build(
        "sx",
        circuit,
        inputs(C64::new(1.0, 0.0))?,
        vec![("t2", all_x()), ("t4", all_x()), ("t5", late()), ("t7", late()), ("t8", late())],
        config.eps_consistency,
    )?;
    report.claim_bool("teleport.sx.consistent", fw.consistency.consistent)?;
    rows(&mut report, &fw, "t2", &[&["a"]])?;
    let t4 = rows(&mut report, &fw, "t4", &[&["a"], &["a", "b"], &["a", "c"], &["b", "c"]])?;
    let t5 = rows(&mut report, &fw, "t5", &[&["a"], &["a", "c"], &["a", "b"]])?;
    let t7 = rows(&mut report, &fw, "t7", &[&["b"], &["a", "c"]])?;
    let t8 = rows(&mut report, &fw, "t8", &[&["c"]])?;
    report.claim("teleport.sx.a_t4", t4[0])?;
    report.claim("teleport.sx.ab_t4", t4[1])?;
    report.claim("teleport.sx.ac_t5", t5[1])?;
    report.claim("teleport.sx.b_t7", t7[0])?;
    report.claim("teleport.sx.c_t8", t8[0])?;
    report.section("consistency", &fw.consistency)?;
    Ok(report)
}

fn contextual(circuit: Arc<TimedCircuit>, config: &Config) -> Result<ScenarioReport> {
    let mut report = ScenarioReport::new("teleportation-contextual", "contextual");
    let grid = config.grid();
    report.claim_bool(
        "teleport.contextual.basis_valid",
        verify_decomposition(&contextual_basis(C64::new(0.3, 0.0))?, config.eps_norm).valid,
    )?;
    let later = ["t6", "t7", "t8"];
    let images: Vec<Operator> = later.iter().map(|t| circuit.propagator("t5", t)).collect::<Result<_>>()?;
    let (mut ab_max, mut abc_min, mut c_min, mut c_only) = (0.0f64, f64::INFINITY, f64::INFINITY, 0.0f64);
    for (k, &lambda) in grid.points.iter().enumerate() {
        let basis = lambda_basis(lambda)?;
        let ctx = contextual_basis(lambda)?;
        let mut events = vec![("t5".to_string(), ctx.clone())];
        for (t, u) in later.iter().zip(&images) {
            events.push((t.to_string(), ctx.conjugated_by(u)?));
        }
        let final_basis = events.last().expect("t8").1.clone();
        let fw = Framework::from_events("contextual", circuit.clone(), inputs(lambda)?, events, "abc", config.eps_consistency)?;
        let ab = fw.joint(|m| m.to_string(), |o| (o.get("t5", "abc") / 2).to_string())?;
        let abc = fw.joint(|m| m.to_string(), |o| o.get("t5", "abc").to_string())?;
        let c = fw.joint(|m| m.to_string(), |o| (o.get("t8", "abc") % 2).to_string())?;
        if k < grid.structured {
            let tag = format!(" (λ={})", complex_sig12(lambda));
            report.mi("t5", "m", &["a", "b"], &format!("S_z of a,b{tag}"), &ab);
            report.mi("t5", "m", &["a", "b", "c"], &format!("contextual index{tag}"), &abc);
            report.mi("t8", "m", &["c"], &format!("p label of c{tag}"), &c);
        }
        ab_max = ab_max.max(ab.mutual_information());
        abc_min = abc_min.min(abc.mutual_information());
        c_min = c_min.min(c.mutual_information());

        // Summing the t8 members over the (a, b) labels leaves I ⊗ I ⊗ [p^m].
        for (m, p) in basis.kets.iter().enumerate() {
            let mut sum = Operator::zeros(8);
            for (n, q) in final_basis.members().enumerate() {
                if n % 2 == m {
                    sum = sum.plus(q.op())?;
                }
            }
            c_only = c_only.max(sum.max_abs_diff(&embed(&p.outer(), &[teleport::C], 3)?));
        }
    }
    report.claim("teleport.contextual.ab_t5", ab_max)?;
    report.claim("teleport.contextual.abc_t5", abc_min)?;
    report.claim("teleport.contextual.c_t8", c_min)?;
    report.claim("teleport.contextual.c_only_t8", c_only)?;
    Ok(report)
}
