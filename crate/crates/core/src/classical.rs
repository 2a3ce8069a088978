//! Classical carriers of a one-bit message, with exact probabilities.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Rational64;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::infoloc::JointDistribution;

/// Exact joint pmf over a message `M` and an observed variable `N`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExactJoint {
    pub m_labels: Vec<String>,
    pub n_labels: Vec<String>,
    #[serde(serialize_with = "ser_table")]
    pub pmf: Vec<Vec<Rational64>>,
}

fn ser_table<S: Serializer>(pmf: &[Vec<Rational64>], s: S) -> std::result::Result<S::Ok, S::Error> {
    let text: Vec<Vec<String>> = pmf.iter().map(|row| row.iter().map(|p| p.to_string()).collect()).collect();
    text.serialize(s)
}

fn zero() -> Rational64 {
    Rational64::from_integer(0)
}

/// `-log2 p` when `p` is an exact negative power of two.
fn neg_log2(p: Rational64) -> Option<i64> {
    let (n, d) = (*p.numer(), *p.denom());
    (n == 1 && d > 0 && (d as u64).is_power_of_two()).then(|| d.trailing_zeros() as i64)
}

/// Shannon entropy in bits when every positive mass is a power of two.
pub fn exact_entropy(pmf: &[Rational64]) -> Option<Rational64> {
    pmf.iter().filter(|p| **p > zero()).try_fold(zero(), |acc, &p| Some(acc + p * neg_log2(p)?))
}

impl ExactJoint {
    pub fn from_triples<I, S, T>(triples: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, T, Rational64)>,
        S: Into<String>,
        T: Into<String>,
    {
        let mut table: BTreeMap<String, BTreeMap<String, Rational64>> = BTreeMap::new();
        let mut n_seen = std::collections::BTreeSet::new();
        for (m, n, p) in triples {
            let n = n.into();
            n_seen.insert(n.clone());
            *table.entry(m.into()).or_default().entry(n).or_insert_with(zero) += p;
        }
        let m_labels: Vec<String> = table.keys().cloned().collect();
        let n_labels: Vec<String> = n_seen.into_iter().collect();
        let pmf: Vec<Vec<Rational64>> = m_labels
            .iter()
            .map(|m| n_labels.iter().map(|n| table[m].get(n).copied().unwrap_or_else(zero)).collect())
            .collect();
        let total: Rational64 = pmf.iter().flatten().copied().sum();
        if total != Rational64::from_integer(1) || pmf.iter().flatten().any(|p| *p < zero()) {
            return Err(Error::InvalidDistribution(format!("exact pmf sums to {total}")));
        }
        Ok(Self { m_labels, n_labels, pmf })
    }

    pub fn marginal_m(&self) -> Vec<Rational64> {
        self.pmf.iter().map(|row| row.iter().copied().sum()).collect()
    }

    pub fn marginal_n(&self) -> Vec<Rational64> {
        (0..self.n_labels.len()).map(|n| self.pmf.iter().map(|row| row[n]).sum()).collect()
    }

    /// `H(N|M)` when every conditional mass is a power of two.
    pub fn exact_conditional_entropy_n(&self) -> Option<Rational64> {
        self.pmf.iter().zip(self.marginal_m()).filter(|(_, pm)| *pm > zero()).try_fold(zero(), |acc, (row, pm)| {
            let cond: Vec<Rational64> = row.iter().map(|p| p / pm).collect();
            Some(acc + pm * exact_entropy(&cond)?)
        })
    }

    /// `H(M|N)` when every conditional mass is a power of two.
    pub fn exact_conditional_entropy_m(&self) -> Option<Rational64> {
        self.transposed().exact_conditional_entropy_n()
    }

    /// Mutual information in bits, exactly, when it can be written with
    /// dyadic entropies on one side or the other.
    pub fn exact_mutual_information(&self) -> Option<Rational64> {
        let via_n = || Some(exact_entropy(&self.marginal_n())? - self.exact_conditional_entropy_n()?);
        let via_m = || Some(exact_entropy(&self.marginal_m())? - self.exact_conditional_entropy_m()?);
        via_n().or_else(via_m)
    }

    pub fn to_float(&self) -> Result<JointDistribution> {
        let pmf = self.pmf.iter().map(|row| row.iter().map(|p| to_f64(*p)).collect()).collect();
        JointDistribution::new(self.m_labels.clone(), self.n_labels.clone(), pmf)
    }

    fn transposed(&self) -> Self {
        Self {
            m_labels: self.n_labels.clone(),
            n_labels: self.m_labels.clone(),
            pmf: (0..self.n_labels.len()).map(|n| self.pmf.iter().map(|row| row[n]).collect()).collect(),
        }
    }
}

pub fn to_f64(p: Rational64) -> f64 {
    *p.numer() as f64 / *p.denom() as f64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SlipKind {
    /// One slip, red for 0 and green for 1.
    Single,
    /// Two slips: equal colors for 0, different colors for 1.
    PairCorrelation,
    /// Alice returns her half of a shared random pair, flipped for 1.
    SharedKey,
    /// Independent random pair plus Charlie's same/opposite slip.
    CharlieFour,
}

impl SlipKind {
    pub const ALL: [SlipKind; 4] = [SlipKind::Single, SlipKind::PairCorrelation, SlipKind::SharedKey, SlipKind::CharlieFour];

    pub fn name(self) -> &'static str {
        match self {
            SlipKind::Single => "single",
            SlipKind::PairCorrelation => "pair_correlation",
            SlipKind::SharedKey => "shared_key",
            SlipKind::CharlieFour => "charlie_four",
        }
    }
}

impl fmt::Display for SlipKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for SlipKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SlipKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownName { what: "slip model", name: s.to_string() })
    }
}

/// A one-bit message carried by colored slips.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SlipModel {
    pub kind: SlipKind,
    pub slips: Vec<String>,
    /// `(M, slip colors, probability)` for every outcome of positive mass.
    #[serde(serialize_with = "ser_outcomes")]
    pub outcomes: Vec<(u8, String, Rational64)>,
}

fn ser_outcomes<S: Serializer>(outcomes: &[(u8, String, Rational64)], s: S) -> std::result::Result<S::Ok, S::Error> {
    let rows: Vec<(u8, &str, String)> = outcomes.iter().map(|(m, c, p)| (*m, c.as_str(), p.to_string())).collect();
    rows.serialize(s)
}

const COLOR: [char; 2] = ['R', 'G'];
const SAME_OR_OPPOSITE: [char; 2] = ['Y', 'B'];

pub fn build_slip_model(kind: SlipKind) -> SlipModel {
    let r = |n, d| Rational64::new(n, d);
    let mut outcomes = Vec::new();
    let slips: &[&str] = match kind {
        SlipKind::Single => {
            for m in 0..2u8 {
                outcomes.push((m, COLOR[m as usize].to_string(), r(1, 2)));
            }
            &["slip"]
        }
        SlipKind::PairCorrelation => {
            for m in 0..2u8 {
                for first in 0..2usize {
                    let second = first ^ m as usize;
                    outcomes.push((m, format!("{}{}", COLOR[first], COLOR[second]), r(1, 4)));
                }
            }
            &["first", "second"]
        }
        SlipKind::SharedKey => {
            for m in 0..2u8 {
                for key in 0..2usize {
                    let sent = key ^ m as usize;
                    outcomes.push((m, format!("{}{}", COLOR[key], COLOR[sent]), r(1, 4)));
                }
            }
            &["bob", "transit"]
        }
        SlipKind::CharlieFour => {
            for m in 0..2u8 {
                for alice in 0..2usize {
                    for bob in 0..2usize {
                        let sent = alice ^ m as usize;
                        let note = SAME_OR_OPPOSITE[alice ^ bob];
                        outcomes.push((m, format!("{}{}{}", COLOR[bob], COLOR[sent], note), r(1, 8)));
                    }
                }
            }
            &["bob", "transit", "charlie"]
        }
    };
    SlipModel { kind, slips: slips.iter().map(|s| s.to_string()).collect(), outcomes }
}

impl SlipModel {
    pub fn slip_index(&self, name: &str) -> Option<usize> {
        self.slips.iter().position(|s| s == name)
    }

    /// Joint distribution of `M` with the colors of the chosen slips.
    pub fn joint(&self, slips: &[usize]) -> Result<ExactJoint> {
        if let Some(&bad) = slips.iter().find(|&&i| i >= self.slips.len()) {
            return Err(Error::UnknownName { what: "slip", name: bad.to_string() });
        }
        ExactJoint::from_triples(self.outcomes.iter().map(|(m, colors, p)| {
            let chars: Vec<char> = colors.chars().collect();
            let seen: String = slips.iter().map(|&i| chars[i]).collect();
            (m.to_string(), seen, *p)
        }))
    }

    /// Every non-empty subset of slips with its exact mutual information.
    pub fn information_table(&self) -> Result<Vec<(Vec<String>, Rational64)>> {
        let n = self.slips.len();
        crate::infoloc::ordered_subsets(n)
            .into_iter()
            .map(|subset| {
                let mi = self.joint(&subset)?.exact_mutual_information().expect("dyadic slip model");
                Ok((subset.iter().map(|&i| self.slips[i].clone()).collect(), mi))
            })
            .collect()
    }
}

pub const SPIN8_SETTINGS: [&str; 6] = ["+x", "-x", "+y", "-y", "+z", "-z"];

/// Label `(±,±,±)` of an eight-state configuration, components ordered x, y, z.
pub fn spin8_config_label(config: usize) -> String {
    let sign = |axis: usize| if config >> (2 - axis) & 1 == 0 { '+' } else { '-' };
    format!("({},{},{})", sign(0), sign(1), sign(2))
}

/// Six polarizer settings with prior 1/6; each yields one of the four
/// configurations agreeing with it along its axis, with probability 1/4.
pub fn spin8_exact() -> ExactJoint {
    let mut triples = Vec::with_capacity(24);
    for (s, name) in SPIN8_SETTINGS.iter().enumerate() {
        let (axis, value) = (s / 2, s % 2);
        for config in 0..8usize {
            if config >> (2 - axis) & 1 == value {
                triples.push((name.to_string(), spin8_config_label(config), Rational64::new(1, 24)));
            }
        }
    }
    let mut joint = ExactJoint::from_triples(triples).expect("valid model");
    // Keep settings in their natural order rather than sorted.
    let order: Vec<usize> =
        SPIN8_SETTINGS.iter().map(|s| joint.m_labels.iter().position(|l| l == s).expect("present")).collect();
    joint.pmf = order.iter().map(|&i| joint.pmf[i].clone()).collect();
    joint.m_labels = SPIN8_SETTINGS.iter().map(|s| s.to_string()).collect();
    joint
}

pub fn spin8_joint() -> JointDistribution {
    spin8_exact().to_float().expect("valid model")
}
