//! Dense complex linear algebra for states and operators on a handful of qubits.
//!
//! Qubit 0 is always the leftmost (most significant) tensor factor, so the
//! computational basis index of `|q0 q1 ... q(n-1)>` is the binary number
//! `q0 q1 ... q(n-1)`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Tolerance for algebraic identities (norms, idempotence, completeness).
pub const EPS_NORM: f64 = 1e-10;
/// Eigenvalue cutoff used when building support projectors.
pub const EPS_SUPPORT: f64 = 1e-9;

pub const MAX_QUBITS: usize = 4;

pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub(crate) fn qubit_count(dim: usize) -> Result<usize> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(Error::NotQubitDimension(dim));
    }
    Ok(dim.trailing_zeros() as usize)
}

#[inline]
fn bit(index: usize, qubit: usize, n: usize) -> usize {
    (index >> (n - 1 - qubit)) & 1
}

/// A vector in the 2^n dimensional Hilbert space of n qubits.
///
/// State kets are normalized; chain kets produced by history families are not.
#[derive(Clone, Debug, PartialEq)]
pub struct Ket {
    amps: DVector<C64>,
}

impl Ket {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        qubit_count(amplitudes.len())?;
        Ok(Self { amps: DVector::from_vec(amplitudes) })
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&x| c(x, 0.0)).collect())
    }

    pub fn zero(dim: usize) -> Result<Self> {
        qubit_count(dim)?;
        Ok(Self { amps: DVector::zeros(dim) })
    }

    /// Computational basis ket `|index>` on `n_qubits` qubits.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::DimensionMismatch { expected: dim, got: index });
        }
        let mut amps = DVector::zeros(dim);
        amps[index] = c(1.0, 0.0);
        Ok(Self { amps })
    }

    /// Computational basis ket from a bit string, qubit 0 first.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::EmptyInput);
        }
        let index = bits.iter().fold(0usize, |acc, &b| (acc << 1) | usize::from(b != 0));
        Self::basis(bits.len(), index)
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn n_qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn amplitudes(&self) -> &[C64] {
        self.amps.as_slice()
    }

    pub fn as_vector(&self) -> &DVector<C64> {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self, eps: f64) -> bool {
        (self.norm_sqr() - 1.0).abs() <= eps
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        if n == 0.0 {
            return self.clone();
        }
        Self { amps: self.amps.unscale(n) }
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Ket) -> Result<C64> {
        self.check_dim(other.dim())?;
        Ok(self.amps.dotc(&other.amps))
    }

    /// Ray equality: `|<u|v>| = |u| |v|` within `eps`, ignoring global phase.
    pub fn ray_eq(&self, other: &Ket, eps: f64) -> bool {
        match self.inner(other) {
            Ok(ip) => (ip.norm() - self.norm() * other.norm()).abs() <= eps,
            Err(_) => false,
        }
    }

    /// Largest componentwise difference.
    pub fn max_abs_diff(&self, other: &Ket) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn distance(&self, other: &Ket) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        (&self.amps - &other.amps).norm()
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Self { amps: &self.amps * factor }
    }

    pub fn add(&self, other: &Ket) -> Result<Self> {
        self.check_dim(other.dim())?;
        Ok(Self { amps: &self.amps + &other.amps })
    }

    pub fn kron(&self, other: &Ket) -> Self {
        Self { amps: self.amps.kronecker(&other.amps) }
    }

    /// `|self><self|`.
    pub fn outer(&self) -> Operator {
        Operator { mat: &self.amps * self.amps.adjoint() }
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if self.dim() != got {
            return Err(Error::DimensionMismatch { expected: self.dim(), got });
        }
        Ok(())
    }
}

/// A square matrix acting on the Hilbert space of n qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    mat: DMatrix<C64>,
}

impl Operator {
    pub fn new(mat: DMatrix<C64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::NotSquare { rows: mat.nrows(), cols: mat.ncols() });
        }
        qubit_count(mat.nrows())?;
        Ok(Self { mat })
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::NotSquare { rows: nrows, cols: ncols });
        }
        Self::new(DMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]))
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<C64>> =
            rows.iter().map(|r| r.iter().map(|&x| c(x, 0.0)).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn identity(dim: usize) -> Self {
        Self { mat: DMatrix::identity(dim, dim) }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { mat: DMatrix::zeros(dim, dim) }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn n_qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.mat[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self { mat: self.mat.adjoint() }
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Self { mat: &self.mat * factor }
    }

    pub fn compose(&self, rhs: &Operator) -> Result<Self> {
        self.check_dim(rhs.dim())?;
        Ok(Self { mat: &self.mat * &rhs.mat })
    }

    pub fn plus(&self, rhs: &Operator) -> Result<Self> {
        self.check_dim(rhs.dim())?;
        Ok(Self { mat: &self.mat + &rhs.mat })
    }

    pub fn minus(&self, rhs: &Operator) -> Result<Self> {
        self.check_dim(rhs.dim())?;
        Ok(Self { mat: &self.mat - &rhs.mat })
    }

    pub fn apply(&self, ket: &Ket) -> Result<Ket> {
        self.check_dim(ket.dim())?;
        Ok(Ket { amps: &self.mat * &ket.amps })
    }

    pub fn kron(&self, rhs: &Operator) -> Self {
        Self { mat: self.mat.kronecker(&rhs.mat) }
    }

    /// `u * self * u^dagger`.
    pub fn conjugated_by(&self, u: &Operator) -> Result<Self> {
        self.check_dim(u.dim())?;
        Ok(Self { mat: &u.mat * &self.mat * u.mat.adjoint() })
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.mat.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max-norm distance; infinite on dimension mismatch.
    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        self.mat
            .iter()
            .zip(other.mat.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn hermiticity_violation(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_hermitian(&self, eps: f64) -> bool {
        self.hermiticity_violation() <= eps
    }

    pub fn unitarity_violation(&self) -> f64 {
        let prod = Self { mat: self.mat.adjoint() * &self.mat };
        prod.max_abs_diff(&Self::identity(self.dim()))
    }

    pub fn is_unitary(&self, eps: f64) -> bool {
        self.unitarity_violation() <= eps
    }

    /// `<ket| self |ket>`.
    pub fn expectation(&self, ket: &Ket) -> Result<C64> {
        let applied = self.apply(ket)?;
        ket.inner(&applied)
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if self.dim() != got {
            return Err(Error::DimensionMismatch { expected: self.dim(), got });
        }
        Ok(())
    }
}

impl std::ops::Mul for &Operator {
    type Output = Operator;

    /// Panics on dimension mismatch, like the underlying matrix product.
    fn mul(self, rhs: &Operator) -> Operator {
        Operator { mat: &self.mat * &rhs.mat }
    }
}

/// Either kind of tensor-product factor.
#[derive(Clone, Debug, PartialEq)]
pub enum Tensor {
    Ket(Ket),
    Op(Operator),
}

/// Kronecker product of the factors, leftmost factor most significant.
pub fn tensor_product(factors: &[Tensor]) -> Result<Tensor> {
    let (first, rest) = factors.split_first().ok_or(Error::EmptyInput)?;
    let mut acc = first.clone();
    for f in rest {
        acc = match (acc, f) {
            (Tensor::Ket(a), Tensor::Ket(b)) => Tensor::Ket(a.kron(b)),
            (Tensor::Op(a), Tensor::Op(b)) => Tensor::Op(a.kron(b)),
            _ => return Err(Error::MixedKinds),
        };
    }
    let dim = match &acc {
        Tensor::Ket(k) => k.dim(),
        Tensor::Op(o) => o.dim(),
    };
    if dim > 1 << MAX_QUBITS {
        log::debug!("tensor product of dimension {dim} exceeds the intended {MAX_QUBITS}-qubit range");
    }
    Ok(acc)
}

pub fn kron_kets(kets: &[Ket]) -> Result<Ket> {
    let (first, rest) = kets.split_first().ok_or(Error::EmptyInput)?;
    Ok(rest.iter().fold(first.clone(), |acc, k| acc.kron(k)))
}

pub fn kron_ops(ops: &[Operator]) -> Result<Operator> {
    let (first, rest) = ops.split_first().ok_or(Error::EmptyInput)?;
    Ok(rest.iter().fold(first.clone(), |acc, o| acc.kron(o)))
}

fn check_qubits(qubits: &[usize], n: usize) -> Result<()> {
    for (i, &q) in qubits.iter().enumerate() {
        if q >= n {
            return Err(Error::QubitOutOfRange { index: q, n_qubits: n });
        }
        if qubits[..i].contains(&q) {
            return Err(Error::InvalidQubitSet(format!("qubit {q} listed twice")));
        }
    }
    Ok(())
}

/// Lift an operator on `targets` (in the listed order, first most significant)
/// to the full `n`-qubit space, acting as identity elsewhere.
pub fn embed(op: &Operator, targets: &[usize], n: usize) -> Result<Operator> {
    check_qubits(targets, n)?;
    if op.dim() != 1 << targets.len() {
        return Err(Error::DimensionMismatch { expected: 1 << targets.len(), got: op.dim() });
    }
    let dim = 1usize << n;
    let k = targets.len();
    let rest_mask = (0..n)
        .filter(|q| !targets.contains(q))
        .fold(0usize, |m, q| m | (1 << (n - 1 - q)));
    let local = |index: usize| targets.iter().fold(0usize, |acc, &q| (acc << 1) | bit(index, q, n));
    let mut mat = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        let li = local(i);
        for j in 0..dim {
            if i & rest_mask == j & rest_mask {
                mat[(i, j)] = op.mat[(li, local(j))];
            }
        }
    }
    debug_assert_eq!(op.dim(), 1 << k);
    Ok(Operator { mat })
}

/// Permutation operator that moves qubit `i` of the input to position `perm[i]`.
pub fn qubit_permutation(perm: &[usize]) -> Result<Operator> {
    let n = perm.len();
    check_qubits(perm, n)?;
    let dim = 1usize << n;
    let mut mat = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        let mut j = 0usize;
        for (q, &target) in perm.iter().enumerate() {
            j |= bit(i, q, n) << (n - 1 - target);
        }
        mat[(j, i)] = c(1.0, 0.0);
    }
    Ok(Operator { mat })
}

pub fn swap_qubits(n: usize, q1: usize, q2: usize) -> Result<Operator> {
    let mut perm: Vec<usize> = (0..n).collect();
    if q1 >= n || q2 >= n {
        return Err(Error::QubitOutOfRange { index: q1.max(q2), n_qubits: n });
    }
    perm.swap(q1, q2);
    qubit_permutation(&perm)
}

/// Reduced operator on the qubits in `keep` (kept in ascending index order).
pub fn partial_trace(rho: &Operator, keep: &[usize]) -> Result<Operator> {
    let n = rho.n_qubits();
    if keep.is_empty() {
        return Err(Error::InvalidQubitSet("keep set is empty".into()));
    }
    check_qubits(keep, n)?;
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    let traced: Vec<usize> = (0..n).filter(|q| !kept.contains(q)).collect();
    let kd = 1usize << kept.len();
    let td = 1usize << traced.len();
    let compose = |x: usize, z: usize| {
        let mut idx = 0usize;
        for (pos, &q) in kept.iter().enumerate() {
            idx |= ((x >> (kept.len() - 1 - pos)) & 1) << (n - 1 - q);
        }
        for (pos, &q) in traced.iter().enumerate() {
            idx |= ((z >> (traced.len() - 1 - pos)) & 1) << (n - 1 - q);
        }
        idx
    };
    let mut out = DMatrix::zeros(kd, kd);
    for x in 0..kd {
        for y in 0..kd {
            let mut acc = c(0.0, 0.0);
            for z in 0..td {
                acc += rho.mat[(compose(x, z), compose(y, z))];
            }
            out[(x, y)] = acc;
        }
    }
    Ok(Operator { mat: out })
}

/// Reduced density operator of a pure state on the qubits in `keep`.
pub fn reduced_state(ket: &Ket, keep: &[usize]) -> Result<Operator> {
    partial_trace(&ket.outer(), keep)
}

/// Orthogonal projector with its rank.
#[derive(Clone, Debug, PartialEq)]
pub struct Projector {
    op: Operator,
    rank: usize,
}

impl Projector {
    /// Validates `P = P^dagger`, `P^2 = P` and integer trace within `eps`.
    pub fn new(op: Operator, eps: f64) -> Result<Self> {
        let herm = op.hermiticity_violation();
        if herm > eps {
            return Err(Error::NotHermitian { violation: herm });
        }
        let idem = (&op * &op).max_abs_diff(&op);
        if idem > eps {
            return Err(Error::NotProjector { violation: idem });
        }
        let tr = op.trace().re;
        let rank = tr.round();
        if (tr - rank).abs() > eps * op.dim() as f64 {
            return Err(Error::NotProjector { violation: (tr - rank).abs() });
        }
        Ok(Self { op, rank: rank as usize })
    }

    /// `[psi] = |psi><psi| / <psi|psi>`.
    pub fn from_ket(ket: &Ket) -> Self {
        Self { op: ket.normalized().outer(), rank: 1 }
    }

    /// Projector onto the span of an orthonormal set.
    pub fn from_orthonormal(kets: &[Ket], eps: f64) -> Result<Self> {
        let first = kets.first().ok_or(Error::EmptyInput)?;
        let mut op = Operator::zeros(first.dim());
        for k in kets {
            op = op.plus(&k.outer())?;
        }
        Self::new(op, eps)
    }

    pub fn identity(dim: usize) -> Self {
        Self { op: Operator::identity(dim), rank: dim }
    }

    pub fn zero(dim: usize) -> Self {
        Self { op: Operator::zeros(dim), rank: 0 }
    }

    pub fn op(&self) -> &Operator {
        &self.op
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn complement(&self) -> Self {
        let op = Operator::identity(self.dim()).minus(&self.op).expect("same dimension");
        Self { op, rank: self.dim() - self.rank }
    }

    /// `self ⊗ I` placed on `targets` of an `n`-qubit space.
    pub fn embed(&self, targets: &[usize], n: usize) -> Result<Self> {
        let op = embed(&self.op, targets, n)?;
        let rank = self.rank << (n - targets.len());
        Ok(Self { op, rank })
    }

    pub fn kron(&self, other: &Projector) -> Self {
        Self { op: self.op.kron(&other.op), rank: self.rank * other.rank }
    }

    /// `u P u^dagger` for unitary `u`.
    pub fn conjugated_by(&self, u: &Operator) -> Result<Self> {
        Ok(Self { op: self.op.conjugated_by(u)?, rank: self.rank })
    }
}

/// Projector onto the eigenvectors of `rho` with eigenvalue above `eps`.
///
/// Near-degenerate eigenvalues are never split: every eigenvector above the
/// cutoff is kept, so the result does not depend on the eigensolver's choice of
/// basis inside a degenerate block.
pub fn support_projector(rho: &Operator, eps: f64) -> Result<Projector> {
    let herm = rho.hermiticity_violation();
    if herm > eps {
        return Err(Error::NotHermitian { violation: herm });
    }
    let eig = rho.mat.clone().symmetric_eigen();
    let dim = rho.dim();
    let mut mat = DMatrix::zeros(dim, dim);
    let mut rank = 0;
    for (k, &value) in eig.eigenvalues.iter().enumerate() {
        if value < -eps {
            return Err(Error::NegativeEigenvalue { value, eps });
        }
        if value > eps {
            let v = eig.eigenvectors.column(k);
            mat += v * v.adjoint();
            rank += 1;
        }
    }
    Ok(Projector { op: Operator { mat }, rank })
}

/// `true` iff `||PQ - QP||_max <= eps`.
pub fn projectors_commute(p: &Projector, q: &Projector, eps: f64) -> Result<bool> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim(), got: q.dim() });
    }
    Ok(commutator_norm(p.op(), q.op()) <= eps)
}

pub(crate) fn commutator_norm(a: &Operator, b: &Operator) -> f64 {
    (a * b).max_abs_diff(&(b * a))
}

/// Mutually orthogonal projectors summing to the identity, with an optional
/// remainder `I - sum P`.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityDecomposition {
    projectors: Vec<Projector>,
    remainder: Option<Projector>,
}

impl IdentityDecomposition {
    /// Requires a non-empty list of equal-dimension projectors. The algebraic
    /// conditions are checked by [`verify_decomposition`], not here.
    pub fn new(projectors: Vec<Projector>, remainder: Option<Projector>) -> Result<Self> {
        let dim = projectors.first().ok_or(Error::EmptyInput)?.dim();
        for p in projectors.iter().chain(remainder.iter()) {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: p.dim() });
            }
        }
        Ok(Self { projectors, remainder })
    }

    /// Builds the decomposition and rejects it unless it verifies at `eps`.
    pub fn checked(projectors: Vec<Projector>, remainder: Option<Projector>, eps: f64) -> Result<Self> {
        let d = Self::new(projectors, remainder)?;
        let report = verify_decomposition(&d, eps);
        if !report.valid {
            return Err(Error::InvalidFamily(format!(
                "not a decomposition of the identity: {report:?}"
            )));
        }
        Ok(d)
    }

    /// Explicit projectors plus `P̄ = I - sum P` when that is non-zero.
    pub fn with_remainder(projectors: Vec<Projector>, eps: f64) -> Result<Self> {
        let dim = projectors.first().ok_or(Error::EmptyInput)?.dim();
        let mut rest = Operator::identity(dim);
        for p in &projectors {
            rest = rest.minus(p.op())?;
        }
        let remainder = if rest.max_abs() <= eps { None } else { Some(Projector::new(rest, eps)?) };
        Self::new(projectors, remainder)
    }

    /// Rank-one projectors onto an orthonormal basis.
    pub fn from_basis(kets: &[Ket]) -> Result<Self> {
        Self::new(kets.iter().map(Projector::from_ket).collect(), None)
    }

    pub fn trivial(dim: usize) -> Self {
        Self { projectors: vec![Projector::identity(dim)], remainder: None }
    }

    pub fn computational(n_qubits: usize) -> Self {
        let kets: Vec<Ket> =
            (0..1usize << n_qubits).map(|i| Ket::basis(n_qubits, i).expect("in range")).collect();
        Self::from_basis(&kets).expect("non-empty")
    }

    /// All products `P_i ⊗ Q_j`, ordered with `self` as the slow index.
    pub fn tensor(&self, other: &IdentityDecomposition) -> Self {
        let projectors = self
            .members()
            .flat_map(|p| other.members().map(move |q| p.kron(q)))
            .collect();
        Self { projectors, remainder: None }
    }

    /// Lift a decomposition on `targets` to the full `n`-qubit space.
    pub fn embed(&self, targets: &[usize], n: usize) -> Result<Self> {
        let projectors = self.projectors.iter().map(|p| p.embed(targets, n)).collect::<Result<_>>()?;
        let remainder = self.remainder.as_ref().map(|p| p.embed(targets, n)).transpose()?;
        Ok(Self { projectors, remainder })
    }

    pub fn conjugated_by(&self, u: &Operator) -> Result<Self> {
        let projectors = self.projectors.iter().map(|p| p.conjugated_by(u)).collect::<Result<_>>()?;
        let remainder = self.remainder.as_ref().map(|p| p.conjugated_by(u)).transpose()?;
        Ok(Self { projectors, remainder })
    }

    pub fn projectors(&self) -> &[Projector] {
        &self.projectors
    }

    pub fn remainder(&self) -> Option<&Projector> {
        self.remainder.as_ref()
    }

    /// Projectors followed by the remainder, if any.
    pub fn members(&self) -> impl Iterator<Item = &Projector> + '_ {
        self.projectors.iter().chain(self.remainder.iter())
    }

    pub fn len(&self) -> usize {
        self.projectors.len() + usize::from(self.remainder.is_some())
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.projectors[0].dim()
    }
}

/// Worst violation of each defining condition of a decomposition of the identity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecompositionReport {
    pub valid: bool,
    pub hermiticity: f64,
    pub idempotence: f64,
    pub orthogonality: f64,
    pub completeness: f64,
}

pub fn verify_decomposition(d: &IdentityDecomposition, eps: f64) -> DecompositionReport {
    let members: Vec<&Projector> = d.members().collect();
    let dim = d.dim();
    let mut hermiticity = 0.0f64;
    let mut idempotence = 0.0f64;
    let mut orthogonality = 0.0f64;
    let mut sum = Operator::zeros(dim);
    for (i, p) in members.iter().enumerate() {
        let op = p.op();
        hermiticity = hermiticity.max(op.hermiticity_violation());
        idempotence = idempotence.max((op * op).max_abs_diff(op));
        for q in &members[i + 1..] {
            orthogonality = orthogonality.max((op * q.op()).max_abs());
            orthogonality = orthogonality.max((q.op() * op).max_abs());
        }
        sum = sum.plus(op).expect("equal dimensions checked at construction");
    }
    let completeness = sum.max_abs_diff(&Operator::identity(dim));
    let valid = hermiticity <= eps && idempotence <= eps && orthogonality <= eps && completeness <= eps;
    DecompositionReport { valid, hermiticity, idempotence, orthogonality, completeness }
}

/// Standard single- and two-qubit kets.
pub mod states {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    pub fn zero() -> Ket {
        Ket::from_real(&[1.0, 0.0]).expect("dim 2")
    }

    pub fn one() -> Ket {
        Ket::from_real(&[0.0, 1.0]).expect("dim 2")
    }

    pub fn plus() -> Ket {
        Ket::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).expect("dim 2")
    }

    pub fn minus() -> Ket {
        Ket::from_real(&[FRAC_1_SQRT_2, -FRAC_1_SQRT_2]).expect("dim 2")
    }

    /// `|B_jk>`: `j` selects the relative sign, `k` the parity.
    ///
    /// `B00 = (|00>+|11>)/√2`, `B01 = (|01>+|10>)/√2`,
    /// `B10 = (|00>-|11>)/√2`, `B11 = (|01>-|10>)/√2`.
    pub fn bell(j: u8, k: u8) -> Ket {
        let s = if j == 0 { 1.0 } else { -1.0 };
        let h = FRAC_1_SQRT_2;
        let amps = if k == 0 { [h, 0.0, 0.0, s * h] } else { [0.0, h, s * h, 0.0] };
        Ket::from_real(&amps).expect("dim 4")
    }

    /// The four Bell kets in the order B00, B01, B10, B11.
    pub fn bell_basis() -> [Ket; 4] {
        [bell(0, 0), bell(0, 1), bell(1, 0), bell(1, 1)]
    }
}

/// Standard gate and Pauli matrices.
pub mod gates {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
    pub enum Pauli {
        X,
        Y,
        Z,
    }

    impl Pauli {
        pub const ALL: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

        pub fn matrix(self) -> Operator {
            match self {
                Pauli::X => x(),
                Pauli::Y => y(),
                Pauli::Z => z(),
            }
        }
    }

    pub fn identity() -> Operator {
        Operator::identity(2)
    }

    pub fn h() -> Operator {
        let s = FRAC_1_SQRT_2;
        Operator::from_real_rows(&[&[s, s], &[s, -s]]).expect("2x2")
    }

    pub fn x() -> Operator {
        Operator::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).expect("2x2")
    }

    pub fn y() -> Operator {
        Operator::from_rows(&[vec![c(0.0, 0.0), c(0.0, -1.0)], vec![c(0.0, 1.0), c(0.0, 0.0)]])
            .expect("2x2")
    }

    pub fn z() -> Operator {
        Operator::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]).expect("2x2")
    }

    /// Control is the first (most significant) qubit.
    pub fn cnot() -> Operator {
        Operator::from_real_rows(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
            &[0.0, 0.0, 1.0, 0.0],
        ])
        .expect("4x4")
    }

    pub fn cz() -> Operator {
        Operator::from_real_rows(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 0.0, 0.0, -1.0],
        ])
        .expect("4x4")
    }

    /// `exp(-i θ Z / 2)`.
    pub fn rz(theta: f64) -> Operator {
        let half = theta / 2.0;
        Operator::from_rows(&[
            vec![C64::from_polar(1.0, -half), c(0.0, 0.0)],
            vec![c(0.0, 0.0), C64::from_polar(1.0, half)],
        ])
        .expect("2x2")
    }

    /// `exp(-i θ Y / 2)`.
    pub fn ry(theta: f64) -> Operator {
        let (s, co) = (theta / 2.0).sin_cos();
        Operator::from_real_rows(&[&[co, -s], &[s, co]]).expect("2x2")
    }
}

#[cfg(test)]
mod tests {
    use super::gates::*;
    use super::states::*;
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn k(ket: Ket) -> Tensor {
        Tensor::Ket(ket)
    }

    #[test]
    fn tensor_of_zero_kets_is_00() {
        let t = tensor_product(&[k(zero()), k(zero())]).unwrap();
        assert_eq!(t, Tensor::Ket(Ket::from_real(&[1.0, 0.0, 0.0, 0.0]).unwrap()));
    }

    #[test]
    fn bell_from_definition_matches_constant() {
        let built = kron_kets(&[zero(), zero()])
            .unwrap()
            .add(&kron_kets(&[one(), one()]).unwrap())
            .unwrap()
            .scaled(c(FRAC_1_SQRT_2, 0.0));
        assert!(built.max_abs_diff(&bell(0, 0)) < 1e-15);
    }

    #[test]
    fn h_on_first_qubit() {
        let op = h().kron(&identity());
        let out = op.apply(&Ket::from_bits(&[0, 0]).unwrap()).unwrap();
        let expected = Ket::from_real(&[FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2, 0.0]).unwrap();
        assert!(out.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn tensor_product_errors() {
        assert!(matches!(tensor_product(&[]), Err(Error::EmptyInput)));
        assert!(matches!(
            tensor_product(&[k(zero()), Tensor::Op(h())]),
            Err(Error::MixedKinds)
        ));
    }

    #[test]
    fn partial_trace_of_bell_is_maximally_mixed() {
        let rho = bell(0, 0).outer();
        let red = partial_trace(&rho, &[0]).unwrap();
        assert!(red.max_abs_diff(&Operator::identity(2).scaled(c(0.5, 0.0))) < 1e-15);
        assert_eq!(partial_trace(&rho, &[0, 1]).unwrap(), rho);
    }

    #[test]
    fn partial_trace_keeps_the_right_factor() {
        let psi = kron_kets(&[zero(), plus(), one()]).unwrap();
        let red = reduced_state(&psi, &[1]).unwrap();
        assert!(red.max_abs_diff(&plus().outer()) < 1e-15);
        let red = reduced_state(&psi, &[2, 0]).unwrap();
        assert!(red.max_abs_diff(&kron_kets(&[zero(), one()]).unwrap().outer()) < 1e-15);
    }

    #[test]
    fn partial_trace_errors() {
        let rho = bell(0, 0).outer();
        assert!(matches!(partial_trace(&rho, &[2]), Err(Error::QubitOutOfRange { .. })));
        assert!(partial_trace(&rho, &[]).is_err());
        assert!(matches!(
            Operator::new(DMatrix::zeros(2, 4)),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn support_projector_basic_cases() {
        let p = support_projector(&zero().outer(), EPS_SUPPORT).unwrap();
        assert_eq!(p.rank(), 1);
        assert!(p.op().max_abs_diff(&zero().outer()) < 1e-12);
        let mixed = Operator::identity(2).scaled(c(0.5, 0.0));
        let p = support_projector(&mixed, EPS_SUPPORT).unwrap();
        assert_eq!(p.rank(), 2);
        assert!(p.op().max_abs_diff(&Operator::identity(2)) < 1e-12);
    }

    #[test]
    fn support_projector_rejects_negative_eigenvalues() {
        let bad = z();
        assert!(matches!(
            support_projector(&bad, EPS_SUPPORT),
            Err(Error::NegativeEigenvalue { .. })
        ));
    }

    #[test]
    fn decomposition_examples() {
        let z_basis = IdentityDecomposition::from_basis(&[zero(), one()]).unwrap();
        assert!(verify_decomposition(&z_basis, EPS_NORM).valid);
        let bells = IdentityDecomposition::from_basis(&bell_basis()).unwrap();
        assert!(verify_decomposition(&bells, EPS_NORM).valid);
        let bad = IdentityDecomposition::from_basis(&[zero(), plus()]).unwrap();
        let report = verify_decomposition(&bad, EPS_NORM);
        assert!(!report.valid);
        assert_abs_diff_eq!(report.orthogonality, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn commutation_examples() {
        let bell_p = Projector::from_ket(&bell(0, 0));
        let z_up_a = Projector::from_ket(&zero()).embed(&[0], 2).unwrap();
        assert!(!projectors_commute(&bell_p, &z_up_a, EPS_NORM).unwrap());
        assert!(projectors_commute(&bell_p, &bell_p, EPS_NORM).unwrap());
        let p00 = Projector::from_ket(&Ket::from_bits(&[0, 0]).unwrap());
        let one_b = Projector::from_ket(&one()).embed(&[1], 2).unwrap();
        assert!(projectors_commute(&p00, &one_b, EPS_NORM).unwrap());
        let single = Projector::from_ket(&zero());
        assert!(projectors_commute(&p00, &single, EPS_NORM).is_err());
    }

    #[test]
    fn embed_places_gate_on_target() {
        // CNOT with control 2, target 0 on three qubits: |001> -> |101>.
        let op = embed(&cnot(), &[2, 0], 3).unwrap();
        let out = op.apply(&Ket::from_bits(&[0, 0, 1]).unwrap()).unwrap();
        assert!(out.max_abs_diff(&Ket::from_bits(&[1, 0, 1]).unwrap()) < 1e-15);
        assert!(op.is_unitary(EPS_NORM));
    }

    #[test]
    fn swap_moves_qubits() {
        let s = swap_qubits(3, 1, 2).unwrap();
        let out = s.apply(&Ket::from_bits(&[1, 1, 0]).unwrap()).unwrap();
        assert!(out.max_abs_diff(&Ket::from_bits(&[1, 0, 1]).unwrap()) < 1e-15);
    }

    #[test]
    fn rotations_are_unitary() {
        for theta in [0.0, 0.3, 1.7, -2.2] {
            assert!(rz(theta).is_unitary(EPS_NORM));
            assert!(ry(theta).is_unitary(EPS_NORM));
        }
        assert!(ry(std::f64::consts::PI).apply(&zero()).unwrap().ray_eq(&one(), 1e-12));
    }

    #[test]
    fn ray_equality_ignores_phase() {
        let a = plus();
        let b = plus().scaled(C64::from_polar(1.0, 0.7));
        assert!(a.ray_eq(&b, 1e-12));
        assert!(!a.ray_eq(&minus(), 1e-12));
    }

    #[test]
    fn projector_validation() {
        assert!(Projector::new(h(), EPS_NORM).is_err());
        let p = Projector::new(plus().outer(), EPS_NORM).unwrap();
        assert_eq!(p.rank(), 1);
        assert_eq!(p.complement().rank(), 1);
    }
}
