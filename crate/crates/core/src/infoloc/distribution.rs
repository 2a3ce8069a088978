use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};

/// Allowed deviation of a pmf's total mass from one.
pub const PMF_TOL: f64 = 1e-12;
/// Conditional probabilities within this of one count as certain recovery.
pub const RECOVERY_TOL: f64 = 1e-9;

/// Finite joint pmf over a preparation variable `M` and a carrier variable `N`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JointDistribution {
    m_labels: Vec<String>,
    n_labels: Vec<String>,
    /// `pmf[m][n]`
    pmf: Vec<Vec<f64>>,
}

fn plogp(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.log2()
    } else {
        0.0
    }
}

impl JointDistribution {
    pub fn new(m_labels: Vec<String>, n_labels: Vec<String>, pmf: Vec<Vec<f64>>) -> Result<Self> {
        if m_labels.is_empty() || n_labels.is_empty() {
            return Err(Error::InvalidDistribution("empty label set".into()));
        }
        if pmf.len() != m_labels.len() || pmf.iter().any(|row| row.len() != n_labels.len()) {
            return Err(Error::InvalidDistribution(format!(
                "table shape does not match {}x{} labels",
                m_labels.len(),
                n_labels.len()
            )));
        }
        let mut total = 0.0;
        for (m, row) in pmf.iter().enumerate() {
            for (n, &p) in row.iter().enumerate() {
                if !(p >= 0.0) {
                    return Err(Error::InvalidDistribution(format!(
                        "entry ({}, {}) is {p}",
                        m_labels[m], n_labels[n]
                    )));
                }
                total += p;
            }
        }
        if (total - 1.0).abs() > PMF_TOL {
            return Err(Error::InvalidDistribution(format!("total probability {total}")));
        }
        Ok(Self { m_labels, n_labels, pmf })
    }

    /// Aggregates `(m, n, probability)` triples; labels are sorted.
    pub fn from_triples<I, S, T>(triples: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, T, f64)>,
        S: Into<String>,
        T: Into<String>,
    {
        let mut table: BTreeMap<String, BTreeMap<String, f64>> = BTreeMap::new();
        let mut n_seen: BTreeMap<String, ()> = BTreeMap::new();
        for (m, n, p) in triples {
            let n: String = n.into();
            n_seen.insert(n.clone(), ());
            *table.entry(m.into()).or_default().entry(n).or_insert(0.0) += p;
        }
        let m_labels: Vec<String> = table.keys().cloned().collect();
        let n_labels: Vec<String> = n_seen.into_keys().collect();
        let pmf = m_labels
            .iter()
            .map(|m| n_labels.iter().map(|n| table[m].get(n).copied().unwrap_or(0.0)).collect())
            .collect();
        Self::new(m_labels, n_labels, pmf)
    }

    pub fn m_labels(&self) -> &[String] {
        &self.m_labels
    }

    pub fn n_labels(&self) -> &[String] {
        &self.n_labels
    }

    pub fn pmf(&self) -> &[Vec<f64>] {
        &self.pmf
    }

    pub fn marginal_m(&self) -> Vec<f64> {
        self.pmf.iter().map(|row| row.iter().sum()).collect()
    }

    pub fn marginal_n(&self) -> Vec<f64> {
        (0..self.n_labels.len()).map(|n| self.pmf.iter().map(|row| row[n]).sum()).collect()
    }

    pub fn entropy_m(&self) -> f64 {
        self.marginal_m().into_iter().map(plogp).sum()
    }

    pub fn entropy_n(&self) -> f64 {
        self.marginal_n().into_iter().map(plogp).sum()
    }

    pub fn joint_entropy(&self) -> f64 {
        self.pmf.iter().flatten().copied().map(plogp).sum()
    }

    /// `I(M:N) = H(M) + H(N) - H(M,N)` in bits.
    pub fn mutual_information(&self) -> f64 {
        let (hm, hn) = (self.entropy_m(), self.entropy_n());
        let mi = hm + hn - self.joint_entropy();
        mi.clamp(0.0, hm.min(hn).max(0.0))
    }

    /// `Pr(M | N = n)`, or `None` when `Pr(N = n)` is zero.
    pub fn conditional_m(&self, n: usize) -> Option<Vec<f64>> {
        let pn: f64 = self.pmf.iter().map(|row| row[n]).sum();
        (pn > 0.0).then(|| self.pmf.iter().map(|row| row[n] / pn).collect())
    }

    /// Whether every carrier outcome of positive probability identifies `M`
    /// with certainty and every `M` of positive probability is identified by
    /// some outcome.
    pub fn contains_information(&self) -> bool {
        let pm = self.marginal_m();
        let pn = self.marginal_n();
        let mut recovered = vec![false; self.m_labels.len()];
        for (n, &p) in pn.iter().enumerate() {
            if p <= RECOVERY_TOL {
                continue;
            }
            let cond = self.conditional_m(n).expect("positive marginal");
            match cond.iter().position(|&q| q >= 1.0 - RECOVERY_TOL) {
                Some(m) => recovered[m] = true,
                None => return false,
            }
        }
        pm.iter().zip(&recovered).all(|(&p, &r)| p <= RECOVERY_TOL || r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn labels(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn spin_z_example() -> JointDistribution {
        JointDistribution::new(labels(&["0", "1"]), labels(&["+", "-"]), vec![vec![0.5, 0.0], vec![0.0, 0.5]])
            .unwrap()
    }

    #[test]
    fn perfectly_correlated_bit() {
        let j = spin_z_example();
        assert_abs_diff_eq!(j.mutual_information(), 1.0, epsilon = 1e-15);
        assert!(j.contains_information());
    }

    #[test]
    fn product_distribution_has_no_information() {
        let j = JointDistribution::new(
            labels(&["0", "1"]),
            labels(&["a", "b", "c"]),
            vec![vec![0.1, 0.2, 0.2], vec![0.1, 0.2, 0.2]],
        )
        .unwrap();
        assert_abs_diff_eq!(j.mutual_information(), 0.0, epsilon = 1e-15);
        assert!(!j.contains_information());
    }

    #[test]
    fn identity_channel_contains_information() {
        let j = JointDistribution::from_triples((0..4).map(|i| (i.to_string(), i.to_string(), 0.25))).unwrap();
        assert!(j.contains_information());
        assert_abs_diff_eq!(j.mutual_information(), 2.0, epsilon = 1e-15);
    }

    #[test]
    fn coarse_but_exact_carrier_still_contains_information() {
        // Several outcomes may point at the same message.
        let j = JointDistribution::from_triples([("0", "a", 0.25), ("0", "b", 0.25), ("1", "c", 0.5)]).unwrap();
        assert!(j.contains_information());
        assert_abs_diff_eq!(j.mutual_information(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn invalid_tables_are_rejected() {
        assert!(JointDistribution::new(labels(&["0"]), labels(&["a"]), vec![vec![0.9]]).is_err());
        assert!(JointDistribution::new(labels(&["0", "1"]), labels(&["a"]), vec![vec![1.2], vec![-0.2]]).is_err());
        assert!(JointDistribution::new(labels(&["0"]), labels(&["a", "b"]), vec![vec![1.0]]).is_err());
    }

    #[test]
    fn partial_correlation_is_not_containment() {
        let j = JointDistribution::from_triples([("0", "a", 0.4), ("0", "b", 0.1), ("1", "b", 0.5)]).unwrap();
        assert!(!j.contains_information());
        let mi = j.mutual_information();
        assert!(mi > 0.0 && mi < 1.0);
    }
}
