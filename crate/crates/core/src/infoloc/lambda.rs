//! One-parameter labelling of single-qubit orthonormal bases.
//!
//! Every basis of a qubit, up to relabelling and phases, is
//! `p0 ∝ |0> + λ|1>`, `p1 ∝ λ*|0> - |1>` for exactly one λ in the open unit
//! disk or on the half circle `λ = e^{iφ}`, `0 <= φ < π`.

use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qmath::{IdentityDecomposition, Ket, C64};

/// `| |λ| - 1 |` below this counts as lying on the unit circle.
const BOUNDARY_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct LambdaBasis {
    /// The value that was asked for.
    pub input: C64,
    /// Canonical representative of the same decomposition.
    pub lambda: C64,
    /// The input's `m = 0` state is the canonical `m = 1` state and vice versa.
    pub labels_swapped: bool,
    /// `[p0, p1]` for the canonical λ.
    pub kets: [Ket; 2],
}

impl LambdaBasis {
    pub fn decomposition(&self) -> IdentityDecomposition {
        IdentityDecomposition::from_basis(&self.kets).expect("two kets")
    }

    pub fn ket(&self, m: usize) -> &Ket {
        &self.kets[m]
    }
}

/// Maps λ to the canonical domain; returns the representative and whether
/// the two basis labels trade places.
pub fn canonicalize(lambda: C64) -> Result<(C64, bool)> {
    if !lambda.re.is_finite() || !lambda.im.is_finite() {
        return Err(Error::InvalidDistribution(format!("λ = {lambda} is not finite")));
    }
    let r = lambda.norm();
    if (r - 1.0).abs() <= BOUNDARY_TOL {
        let mut phi = lambda.arg();
        if phi < 0.0 {
            phi += 2.0 * PI;
        }
        // e^{iφ} and -e^{iφ} give the same pair of rays with labels exchanged.
        return Ok(if (PI - 1e-15..2.0 * PI - 1e-15).contains(&phi) {
            (C64::from_polar(1.0, phi - PI), true)
        } else {
            (C64::from_polar(1.0, if phi >= 2.0 * PI - 1e-15 { 0.0 } else { phi }), false)
        });
    }
    if r > 1.0 {
        // The rays for λ are the rays for -1/λ* with labels exchanged.
        return Ok((-1.0 / lambda.conj(), true));
    }
    Ok((lambda, false))
}

/// The basis labelled by λ, folded into the canonical domain if necessary.
pub fn lambda_basis(lambda: C64) -> Result<LambdaBasis> {
    let (canonical, swapped) = canonicalize(lambda)?;
    if swapped {
        log::warn!("λ = {lambda} is outside the canonical domain; using {canonical} with labels exchanged");
    }
    let norm = (1.0 + canonical.norm_sqr()).sqrt();
    let p0 = Ket::new(vec![C64::new(1.0 / norm, 0.0), canonical / norm])?;
    let p1 = Ket::new(vec![canonical.conj() / norm, C64::new(-1.0 / norm, 0.0)])?;
    Ok(LambdaBasis { input: lambda, lambda: canonical, labels_swapped: swapped, kets: [p0, p1] })
}

/// The structured λ values: the three Pauli bases, their folded copies, and a
/// few generic interior and boundary points.
pub fn structured_lambdas() -> Vec<C64> {
    vec![
        C64::new(0.0, 0.0),
        C64::new(1.0, 0.0),
        C64::new(-1.0, 0.0),
        C64::new(0.0, 1.0),
        C64::new(0.0, -1.0),
        C64::from_polar(1.0, FRAC_PI_4),
        C64::new(0.3, 0.0),
        C64::new(0.5, 0.5),
        C64::from_polar(0.7, FRAC_PI_3),
    ]
}

/// A deterministic sample of bases used to certify channel location.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LambdaGrid {
    pub seed: u64,
    pub structured: usize,
    pub random: usize,
    #[serde(skip)]
    pub points: Vec<C64>,
}

impl LambdaGrid {
    /// Structured points followed by `random` points drawn uniformly from the
    /// open unit disk.
    pub fn standard(seed: u64, random: usize) -> Self {
        let mut points = structured_lambdas();
        let structured = points.len();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..random {
            let r = rng.random::<f64>().sqrt();
            let phi = rng.random::<f64>() * 2.0 * PI;
            points.push(C64::from_polar(r, phi));
        }
        Self { seed, structured, random, points }
    }

    pub fn from_points(points: Vec<C64>) -> Self {
        Self { seed: 0, structured: points.len(), random: 0, points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::{states, EPS_NORM};

    #[test]
    fn pauli_bases() {
        let z = lambda_basis(C64::new(0.0, 0.0)).unwrap();
        assert!(z.kets[0].ray_eq(&states::zero(), 1e-15));
        assert!(z.kets[1].ray_eq(&states::one(), 1e-15));
        let x = lambda_basis(C64::new(1.0, 0.0)).unwrap();
        assert!(x.kets[0].ray_eq(&states::plus(), 1e-15));
        assert!(x.kets[1].ray_eq(&states::minus(), 1e-15));
        let y = lambda_basis(C64::new(0.0, 1.0)).unwrap();
        let sy = crate::qmath::gates::y();
        for (k, sign) in y.kets.iter().zip([1.0, -1.0]) {
            let ev = sy.expectation(k).unwrap();
            assert!((ev.re - sign).abs() < 1e-12 && ev.im.abs() < 1e-12);
        }
    }

    #[test]
    fn coefficients_follow_the_parameterization() {
        let lambda = C64::new(0.2, -0.6);
        let b = lambda_basis(lambda).unwrap();
        let s = (1.0 + lambda.norm_sqr()).sqrt();
        let a = b.kets[0].amplitudes();
        assert!((a[0] - C64::new(1.0 / s, 0.0)).norm() < 1e-15);
        assert!((a[1] - lambda / s).norm() < 1e-15);
        let a = b.kets[1].amplitudes();
        assert!((a[0] - lambda.conj() / s).norm() < 1e-15);
        assert!((a[1] - C64::new(-1.0 / s, 0.0)).norm() < 1e-15);
        assert!(b.kets[0].inner(&b.kets[1]).unwrap().norm() < 1e-15);
        assert!(crate::qmath::verify_decomposition(&b.decomposition(), EPS_NORM).valid);
    }

    #[test]
    fn boundary_folding() {
        let (c, swapped) = canonicalize(C64::new(-1.0, 0.0)).unwrap();
        assert!((c - C64::new(1.0, 0.0)).norm() < 1e-15 && swapped);
        let (c, swapped) = canonicalize(C64::new(0.0, -1.0)).unwrap();
        assert!((c - C64::new(0.0, 1.0)).norm() < 1e-15 && swapped);
        let (c, swapped) = canonicalize(C64::from_polar(1.0, 0.4)).unwrap();
        assert!((c - C64::from_polar(1.0, 0.4)).norm() < 1e-15 && !swapped);
    }

    #[test]
    fn outside_disk_maps_inside_with_swapped_labels() {
        let lambda = C64::new(1.5, 2.0);
        let b = lambda_basis(lambda).unwrap();
        assert!(b.labels_swapped && b.lambda.norm() < 1.0);
        // The un-normalized input rays are (1, λ) and (λ*, -1).
        let raw0 = Ket::new(vec![C64::new(1.0, 0.0), lambda]).unwrap().normalized();
        let raw1 = Ket::new(vec![lambda.conj(), C64::new(-1.0, 0.0)]).unwrap().normalized();
        assert!(b.kets[1].ray_eq(&raw0, 1e-12));
        assert!(b.kets[0].ray_eq(&raw1, 1e-12));
    }

    #[test]
    fn grid_is_deterministic() {
        let a = LambdaGrid::standard(42, 64);
        let b = LambdaGrid::standard(42, 64);
        assert_eq!(a.points, b.points);
        assert_eq!(a.len(), 73);
        assert!(a.points[9..].iter().all(|l| l.norm() < 1.0));
        assert_ne!(LambdaGrid::standard(7, 64).points, a.points);
    }

    #[test]
    fn non_finite_lambda_is_rejected() {
        assert!(lambda_basis(C64::new(f64::NAN, 0.0)).is_err());
    }
}
