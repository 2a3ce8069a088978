use serde_json::json;

use super::dense::dense_inputs;
use super::teleport::teleport_prep;
use super::{MiEntry, ScenarioReport};
use crate::circuit::{dense, dense_coding_circuit, teleport, teleportation_circuit, Bindings, TimedCircuit};
use crate::classical::{build_slip_model, spin8_exact, to_f64, ExactJoint, SlipKind};
use crate::config::Config;
use crate::dh::{dense_coding_dh_circuit, dh_verdicts, DhVerdict};
use crate::error::Result;
use crate::infoloc::{info_in_states, lambda_basis, SubsystemFactorization};
use crate::qmath::{reduced_state, Ket, Operator};

/// Appends a row computed in exact arithmetic and returns its bits.
fn exact_row(report: &mut ScenarioReport, carrier: &[String], carrier_dim: usize, n_variable: &str, joint: &ExactJoint) -> Result<f64> {
    let bits = to_f64(joint.exact_mutual_information().expect("dyadic distribution"));
    report.mi_table.push(MiEntry {
        time: "-".to_string(),
        m_variable: "M".to_string(),
        carrier: carrier.to_vec(),
        carrier_dim,
        n_variable: n_variable.to_string(),
        bits,
        contains: joint.to_float()?.contains_information(),
    });
    Ok(bits)
}

pub fn classical_slips_report() -> Result<ScenarioReport> {
    let mut report = ScenarioReport::new("classical-slips", "classical");
    let mut models = Vec::new();
    for kind in SlipKind::ALL {
        let model = build_slip_model(kind);
        let n = model.slips.len();
        // Best single slip, best pair, and all slips together.
        let mut by_size = vec![0.0f64; n + 1];
        for subset in crate::infoloc::ordered_subsets(n) {
            let names: Vec<String> = subset.iter().map(|&i| model.slips[i].clone()).collect();
            let bits = exact_row(&mut report, &names, 1 << subset.len(), &format!("{kind} colors"), &model.joint(&subset)?)?;
            by_size[subset.len()] = by_size[subset.len()].max(bits);
        }
        match kind {
            SlipKind::Single => report.claim("classical.single.slip_bits", by_size[1])?,
            SlipKind::PairCorrelation | SlipKind::SharedKey => {
                report.claim(&format!("classical.{kind}.single_slip_bits"), by_size[1])?;
                report.claim(&format!("classical.{kind}.all_slips_bits"), by_size[n])?;
            }
            SlipKind::CharlieFour => {
                report.claim("classical.charlie_four.single_slip_bits", by_size[1])?;
                report.claim("classical.charlie_four.pair_bits", by_size[2])?;
                report.claim("classical.charlie_four.all_slips_bits", by_size[n])?;
            }
        }
        models.push(model);
    }
    report.section("models", &models)?;
    Ok(report)
}

pub fn spin8_report() -> Result<ScenarioReport> {
    let mut report = ScenarioReport::new("spin8", "classical");
    let joint = spin8_exact();
    let carrier = ["x", "y", "z"].map(String::from);
    let bits = exact_row(&mut report, &carrier, 8, "configuration", &joint)?;
    report.claim("classical.spin8.bits", bits)?;
    let eighth = num_rational::Rational64::new(1, 8);
    report.claim_bool("classical.spin8.uniform_config_marginal", joint.marginal_n().iter().all(|&p| p == eighth))?;
    report.section("configurations", &joint.n_labels)?;
    Ok(report)
}

/// Largest entry-wise difference between the `carrier` reduced states of
/// any two of `inputs` at any time up to `last`.
fn downstream_spread(circuit: &TimedCircuit, inputs: &[Ket], carrier: &[usize], last: &str) -> Result<Vec<(String, f64)>> {
    let end = circuit.time_index(last)?;
    circuit.times()[..=end]
        .iter()
        .map(|t| {
            let rhos = inputs
                .iter()
                .map(|k| reduced_state(&circuit.evolve(k, t)?, carrier))
                .collect::<Result<Vec<Operator>>>()?;
            let mut spread = 0.0f64;
            for (i, x) in rhos.iter().enumerate() {
                for y in &rhos[i + 1..] {
                    spread = spread.max(x.max_abs_diff(y));
                }
            }
            Ok((t.clone(), spread))
        })
        .collect()
}

pub fn retrocausality_check(config: &Config) -> Result<ScenarioReport> {
    let mut report = ScenarioReport::new("retrocausality", "unitary");
    let worst = |rows: &[(String, f64)]| rows.iter().map(|r| r.1).fold(0.0, f64::max);

    let dense_kets: Vec<Ket> = dense_inputs().into_iter().map(|(_, k)| k).collect();
    let dense_rows = downstream_spread(&dense_coding_circuit(), &dense_kets, &[dense::B, dense::C], "t3")?;
    report.claim("retro.dense_coding", worst(&dense_rows))?;

    let prep = teleport_prep();
    let mut tele_kets = Vec::new();
    for &lambda in &config.grid().points {
        for p in &lambda_basis(lambda)?.kets {
            tele_kets.push(prep.initial_ket(p)?);
        }
    }
    let tele_rows = downstream_spread(&teleportation_circuit(), &tele_kets, &[teleport::B, teleport::C], "t3")?;
    report.claim("retro.teleportation", worst(&tele_rows))?;
    report.section("dense_coding_bc_spread", &dense_rows)?;
    report.section("teleportation_bc_spread", &tele_rows)?;
    Ok(report)
}

/// Largest excess of any table row over `log2` of its carrier dimension.
pub fn capacity_check(reports: &[ScenarioReport]) -> Result<ScenarioReport> {
    let mut report = ScenarioReport::new("capacity", "all");
    let mut excess = f64::NEG_INFINITY;
    let mut worst = None;
    for r in reports {
        for row in &r.mi_table {
            let e = row.bits - (row.carrier_dim as f64).log2();
            if e > excess {
                excess = e;
                worst = Some((r.scenario.clone(), row.clone()));
            }
        }
    }
    let rows: usize = reports.iter().map(|r| r.mi_table.len()).sum();
    report.claim("capacity.excess_bits", if rows == 0 { 0.0 } else { excess })?;
    report.section("rows_checked", rows)?;
    report.section("tightest", &worst)?;
    Ok(report)
}

pub fn dh_dense_coding_report(config: &Config) -> Result<ScenarioReport> {
    let mut report = ScenarioReport::new("dh-dense-coding", "deutsch_hayden");
    let circuit = dense_coding_dh_circuit();
    let theta0: Bindings = [("theta_a".to_string(), 0.4), ("theta_abar".to_string(), 0.9)].into_iter().collect();
    let mut verdicts: Vec<DhVerdict> = Vec::new();
    for t in ["t5", "t6", "t8"] {
        for param in ["theta_a", "theta_abar"] {
            verdicts.extend(dh_verdicts(&circuit, t, param, &theta0)?);
        }
    }
    let transit: Vec<&DhVerdict> = verdicts.iter().filter(|v| v.qubit == "b" && v.time != "t8").collect();
    report.claim_bool("dh.b_depends_t5_t6", transit.iter().all(|v| v.depends))?;
    report.claim_bool("dh.b_accessible_t5_t6", transit.iter().any(|v| v.accessible))?;
    let c_final = verdicts.iter().find(|v| v.qubit == "c" && v.time == "t8" && v.parameter == "theta_abar");
    report.claim_bool("dh.c_accessible_t8", c_final.is_some_and(|v| v.accessible))?;

    // The same question asked of the histories: where are the four inputs
    // distinguishable at t5 and t6?
    let plain = dense_coding_circuit();
    let tol = config.channel_tolerance();
    let mut frameworks = Vec::new();
    let (mut b_located, mut bc_located) = (false, true);
    for t in ["t5", "t6"] {
        let states = dense_inputs().iter().map(|(_, k)| plain.evolve(k, t)).collect::<Result<Vec<_>>>()?;
        for (name, qubits) in [("b", vec![dense::B]), ("b,c", vec![dense::B, dense::C])] {
            let v = info_in_states(&states, &SubsystemFactorization::new(&qubits, 4)?, tol)?;
            if qubits.len() == 1 {
                b_located |= v.located;
            } else {
                bc_located &= v.located;
            }
            frameworks.push(json!({ "time": t, "carrier": name, "located": v.located, "worst_overlap": v.worst_overlap }));
        }
    }
    report.claim_bool("dh.frameworks_b_located_t5_t6", b_located)?;
    report.claim_bool("dh.frameworks_bc_located_t5_t6", bc_located)?;
    report.section("deutsch_hayden", &verdicts)?;
    report.section("frameworks", &frameworks)?;
    Ok(report)
}
