//! History families assembled from per-qubit bases, with outcome decoding.

use std::sync::Arc;

use crate::circuit::TimedCircuit;
use crate::error::{Error, Result};
use crate::histories::{BranchSet, ConsistencyReport, Event, HistoryFamily};
use crate::infoloc::JointDistribution;
use crate::qmath::{states, IdentityDecomposition, Ket};

pub(crate) fn z() -> IdentityDecomposition {
    IdentityDecomposition::computational(1)
}

pub(crate) fn x() -> IdentityDecomposition {
    IdentityDecomposition::from_basis(&[states::plus(), states::minus()]).expect("two kets")
}

pub(crate) fn trivial() -> IdentityDecomposition {
    IdentityDecomposition::trivial(2)
}

/// Labelled factors of one event, slowest index first.
type Layout = Vec<(String, usize)>;

pub(crate) struct Framework {
    pub family: HistoryFamily,
    pub m_labels: Vec<String>,
    layouts: Vec<(String, Layout)>,
    pub consistency: ConsistencyReport,
    branches: Option<BranchSet>,
}

/// The projector choices of one branch, readable by time and factor label.
pub(crate) struct Outcome<'a> {
    layouts: &'a [(String, Layout)],
    events: &'a [usize],
}

impl Outcome<'_> {
    pub fn get(&self, time: &str, label: &str) -> usize {
        let k = self.layouts.iter().position(|(t, _)| t == time).unwrap_or_else(|| panic!("no event at {time}"));
        let layout = &self.layouts[k].1;
        let mut j = self.events[k];
        let mut values = vec![0; layout.len()];
        for (i, (_, size)) in layout.iter().enumerate().rev() {
            values[i] = j % size;
            j /= size;
        }
        let i = layout.iter().position(|(l, _)| l == label).unwrap_or_else(|| panic!("no factor {label} at {time}"));
        values[i]
    }

    pub fn digits(&self, time: &str, labels: &[&str]) -> String {
        labels.iter().map(|l| self.get(time, l).to_string()).collect()
    }
}

impl Framework {
    /// Uniform priors over `inputs`; each event is the tensor product of its
    /// factors, which must cover the qubits in order.
    pub fn build(
        name: &str,
        circuit: Arc<TimedCircuit>,
        inputs: Vec<(String, Ket)>,
        events: Vec<(&str, Vec<(&str, IdentityDecomposition)>)>,
        eps: f64,
    ) -> Result<Self> {
        let mut layouts = Vec::with_capacity(events.len());
        let mut evs = Vec::with_capacity(events.len());
        for (time, factors) in events {
            let layout = factors.iter().map(|(l, d)| (l.to_string(), d.len())).collect();
            let mut iter = factors.into_iter().map(|(_, d)| d);
            let first = iter.next().ok_or(Error::EmptyInput)?;
            let decomposition = iter.fold(first, |acc, d| acc.tensor(&d));
            layouts.push((time.to_string(), layout));
            evs.push(Event::new(time, decomposition));
        }
        let (m_labels, kets): (Vec<String>, Vec<Ket>) = inputs.into_iter().unzip();
        let family = HistoryFamily::uniform(name, circuit, kets, evs)?;
        Ok(Self::finish(family, m_labels, layouts, eps))
    }

    /// Single-factor events labelled `label`.
    pub fn from_events(
        name: &str,
        circuit: Arc<TimedCircuit>,
        inputs: Vec<(String, Ket)>,
        events: Vec<(String, IdentityDecomposition)>,
        label: &str,
        eps: f64,
    ) -> Result<Self> {
        let layouts = events.iter().map(|(t, d)| (t.clone(), vec![(label.to_string(), d.len())])).collect();
        let evs = events.into_iter().map(|(t, d)| Event::new(t, d)).collect();
        let (m_labels, kets): (Vec<String>, Vec<Ket>) = inputs.into_iter().unzip();
        let family = HistoryFamily::uniform(name, circuit, kets, evs)?;
        Ok(Self::finish(family, m_labels, layouts, eps))
    }

    fn finish(family: HistoryFamily, m_labels: Vec<String>, layouts: Vec<(String, Layout)>, eps: f64) -> Self {
        let consistency = family.consistency_check(eps);
        let branches = family.branch_probabilities(eps).ok();
        Self { family, m_labels, layouts, consistency, branches }
    }

    fn branches(&self) -> Result<&BranchSet> {
        self.branches.as_ref().ok_or_else(|| Error::Inconsistent(Box::new(self.consistency.clone())))
    }

    pub fn joint(&self, m: impl Fn(&str) -> String, n: impl Fn(&Outcome) -> String) -> Result<JointDistribution> {
        let set = self.branches()?;
        JointDistribution::from_triples(set.branches.iter().map(|b| {
            let o = Outcome { layouts: &self.layouts, events: &b.events };
            (m(&self.m_labels[b.initial]), n(&o), b.probability)
        }))
    }

    /// Total probability of the branches satisfying `pred`.
    pub fn probability(&self, pred: impl Fn(&str, &Outcome) -> bool) -> Result<f64> {
        let set = self.branches()?;
        Ok(set
            .branches
            .iter()
            .filter(|b| pred(&self.m_labels[b.initial], &Outcome { layouts: &self.layouts, events: &b.events }))
            .map(|b| b.probability)
            .sum())
    }

    /// Largest deviation of any conditional branch probability from `target`.
    pub fn conditional_deviation(&self, target: f64) -> Result<f64> {
        let set = self.branches()?;
        let priors: Vec<f64> = self.family.initial().iter().map(|(p, _)| *p).collect();
        Ok(set.branches.iter().map(|b| (b.probability / priors[b.initial] - target).abs()).fold(0.0, f64::max))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::dense_coding_circuit;

    #[test]
    fn outcome_decoding_follows_factor_order() {
        let circuit = Arc::new(dense_coding_circuit());
        let inputs = vec![("01".to_string(), Ket::from_bits(&[0, 1, 0, 0]).unwrap())];
        let fw = Framework::build(
            "probe",
            circuit,
            inputs,
            vec![("t2", vec![("a", z()), ("abar", z()), ("bc", IdentityDecomposition::trivial(4))])],
            1e-9,
        )
        .unwrap();
        let p = fw.probability(|_, o| o.get("t2", "a") == 0 && o.get("t2", "abar") == 1).unwrap();
        assert!((p - 1.0).abs() < 1e-12);
    }
}
