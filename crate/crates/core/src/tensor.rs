//! Dense complex linear algebra with explicit tensor-factor structure.
//!
//! States are unit vectors checked at construction, operators carry the
//! dimensions of their tensor factors, and spectral queries go through a
//! tolerance-aware Hermitian eigensolver. The basis convention throughout
//! is row-major with the first tensor factor most significant: the basis
//! vector `|i j>` of C^a (x) C^b sits at flat index `i*b + j`.

use nalgebra::DMatrix;
use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::comb::factorial;
use crate::error::{Error, Result};

/// Largest matrix side the symmetric-subspace builders will allocate by
/// default. Callers that need more pass an explicit cap.
pub const DEFAULT_SIZE_CAP: usize = 4096;

/// Norm slack accepted by [`PureState::new`]. Inputs farther off are
/// rejected rather than silently renormalized.
pub const STATE_NORM_TOL: f64 = 1e-12;

/// Verification and rank thresholds used by spectral queries.
///
/// `verify_eps` bounds Frobenius-norm defects when asserting identities;
/// `rank_rel_eps` is the relative eigenvalue cutoff for numerical rank.
/// The rank cutoff is relative to the largest eigenvalue magnitude so that
/// the answer does not depend on overall normalization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub verify_eps: f64,
    pub rank_rel_eps: f64,
}

impl Tolerance {
    pub fn new(verify_eps: f64, rank_rel_eps: f64) -> Result<Self> {
        for (name, v) in [("verify_eps", verify_eps), ("rank_rel_eps", rank_rel_eps)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::InvalidTolerance(format!(
                    "{name} must lie strictly inside (0, 1), got {v}"
                )));
            }
        }
        Ok(Tolerance {
            verify_eps,
            rank_rel_eps,
        })
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            verify_eps: 1e-10,
            rank_rel_eps: 1e-8,
        }
    }
}

/// A unit vector in a d-dimensional complex space.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Builds a state from amplitudes that must already be normalized to
    /// within [`STATE_NORM_TOL`].
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::DimensionMismatch(
                "pure state needs at least one amplitude".into(),
            ));
        }
        let norm = vec_norm(&amplitudes);
        if (norm - 1.0).abs() > STATE_NORM_TOL {
            return Err(Error::NormViolation {
                norm,
                tol: STATE_NORM_TOL,
            });
        }
        Ok(PureState { amplitudes })
    }

    /// Builds a state by explicitly renormalizing the input. Rejects the
    /// zero vector.
    pub fn normalized_from(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::DimensionMismatch(
                "pure state needs at least one amplitude".into(),
            ));
        }
        let norm = vec_norm(&amplitudes);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NormViolation {
                norm,
                tol: STATE_NORM_TOL,
            });
        }
        let amplitudes = amplitudes.into_iter().map(|a| a / norm).collect();
        Ok(PureState { amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Inner product `<self|other>`, antilinear in `self`.
    pub fn inner(&self, other: &PureState) -> Complex64 {
        assert_eq!(self.dim(), other.dim(), "inner product dimension mismatch");
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Rank-one projector `|psi><psi|` as a single-factor operator.
    pub fn projector(&self) -> Operator {
        let d = self.dim();
        let mut entries = Array2::zeros((d, d));
        for i in 0..d {
            for j in 0..d {
                entries[[i, j]] = self.amplitudes[i] * self.amplitudes[j].conj();
            }
        }
        Operator {
            factors: vec![d],
            entries,
        }
    }

    /// The t-fold tensor power `|psi>^(x t)` as a raw vector of length d^t.
    pub fn tensor_power(&self, t: u32) -> RawVector {
        assert!(t >= 1, "tensor power needs t >= 1");
        let d = self.dim();
        let mut amps = self.amplitudes.clone();
        for _ in 1..t {
            let mut next = Vec::with_capacity(amps.len() * d);
            for a in &amps {
                for b in &self.amplitudes {
                    next.push(a * b);
                }
            }
            amps = next;
        }
        RawVector { amplitudes: amps }
    }

    /// Computational basis state `|k>` of C^d.
    pub fn basis_state(d: usize, k: usize) -> PureState {
        assert!(k < d, "basis index out of range");
        let mut amplitudes = vec![Complex64::ZERO; d];
        amplitudes[k] = Complex64::ONE;
        PureState { amplitudes }
    }
}

/// A complex vector with no norm constraint; used for objects like the
/// unnormalized maximally entangled state whose norm is part of the data.
#[derive(Debug, Clone, PartialEq)]
pub struct RawVector {
    amplitudes: Vec<Complex64>,
}

impl RawVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Self {
        RawVector { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        vec_norm(&self.amplitudes)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }
}

/// The unnormalized maximally entangled vector `sum_i |ii>` of C^d (x) C^d.
///
/// Its squared norm is d, which is why it lives in [`RawVector`] rather
/// than [`PureState`].
pub fn maximally_entangled_unnormalized(d: usize) -> RawVector {
    assert!(d >= 2, "maximally entangled vector needs d >= 2");
    let mut amplitudes = vec![Complex64::ZERO; d * d];
    for i in 0..d {
        amplitudes[i * d + i] = Complex64::ONE;
    }
    RawVector { amplitudes }
}

/// A square complex matrix together with the tensor-factor dimensions of
/// the space it acts on.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    factors: Vec<usize>,
    entries: Array2<Complex64>,
}

/// Which tensor factor of a bipartite operator an operation targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

impl Operator {
    /// Wraps a square matrix whose side equals the product of `factors`.
    pub fn new(factors: Vec<usize>, entries: Array2<Complex64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "operator matrix must be square, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        if factors.is_empty() || factors.iter().any(|&f| f == 0) {
            return Err(Error::DimensionMismatch(
                "factor list must be nonempty with positive entries".into(),
            ));
        }
        let prod: usize = factors.iter().product();
        if prod != entries.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "factors {:?} multiply to {}, but the matrix side is {}",
                factors,
                prod,
                entries.nrows()
            )));
        }
        Ok(Operator { factors, entries })
    }

    /// A matrix acting on a single unstructured factor.
    pub fn from_matrix(entries: Array2<Complex64>) -> Result<Self> {
        let d = entries.nrows();
        Operator::new(vec![d], entries)
    }

    /// Identity on the space with the given factor dimensions.
    pub fn identity(factors: &[usize]) -> Operator {
        let n: usize = factors.iter().product();
        Operator {
            factors: factors.to_vec(),
            entries: Array2::eye(n),
        }
    }

    /// Outer product `|v><v|` of a raw vector, reshaped onto `factors`.
    pub fn from_outer(v: &RawVector, factors: Vec<usize>) -> Result<Self> {
        let n = v.dim();
        if factors.iter().product::<usize>() != n {
            return Err(Error::DimensionMismatch(format!(
                "outer product of a length-{n} vector cannot live on factors {factors:?}"
            )));
        }
        let mut entries = Array2::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                entries[[i, j]] = v.amplitudes[i] * v.amplitudes[j].conj();
            }
        }
        Ok(Operator { factors, entries })
    }

    pub fn dim_total(&self) -> usize {
        self.entries.nrows()
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn entries(&self) -> &Array2<Complex64> {
        &self.entries
    }

    /// Reinterprets the same matrix with a different factor split.
    pub fn with_factors(&self, factors: Vec<usize>) -> Result<Operator> {
        Operator::new(factors, self.entries.clone())
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.diag().sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn adjoint(&self) -> Operator {
        Operator {
            factors: self.factors.clone(),
            entries: self.entries.t().mapv(|z| z.conj()),
        }
    }

    /// Frobenius norm of `M - M^dagger`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim_total();
        let mut sum = 0.0;
        for i in 0..n {
            for j in 0..n {
                let diff = self.entries[[i, j]] - self.entries[[j, i]].conj();
                sum += diff.norm_sqr();
            }
        }
        sum.sqrt()
    }

    pub fn is_hermitian_within(&self, eps: f64) -> bool {
        self.hermiticity_defect() <= eps
    }

    /// Matrix product; both operators must act on the same space.
    pub fn matmul(&self, other: &Operator) -> Operator {
        assert_eq!(
            self.dim_total(),
            other.dim_total(),
            "matmul dimension mismatch"
        );
        Operator {
            factors: self.factors.clone(),
            entries: self.entries.dot(&other.entries),
        }
    }

    /// Eigenvalues of a Hermitian operator, ascending.
    ///
    /// The matrix `H = A + iB` is embedded as the real symmetric matrix
    /// `[[A, -B], [B, A]]`, whose spectrum is that of `H` doubled; adjacent
    /// pairs of the sorted embedding spectrum are averaged back down.
    /// Non-Hermitian input is an error, not silently symmetrized.
    pub fn eigenvalues_hermitian(&self, tol: &Tolerance) -> Result<Vec<f64>> {
        let defect = self.hermiticity_defect();
        if defect > tol.verify_eps {
            return Err(Error::NotHermitian {
                defect,
                tol: tol.verify_eps,
            });
        }
        let n = self.dim_total();
        let mut embed = DMatrix::<f64>::zeros(2 * n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                let z = self.entries[[i, j]];
                embed[(i, j)] = z.re;
                embed[(i + n, j + n)] = z.re;
                embed[(i, j + n)] = -z.im;
                embed[(i + n, j)] = z.im;
            }
        }
        let mut eigs: Vec<f64> = embed.symmetric_eigenvalues().iter().copied().collect();
        eigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let collapsed = (0..n)
            .map(|k| 0.5 * (eigs[2 * k] + eigs[2 * k + 1]))
            .collect();
        Ok(collapsed)
    }
}

impl std::ops::Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        assert_eq!(self.factors, rhs.factors, "operator addition factor mismatch");
        Operator {
            factors: self.factors.clone(),
            entries: &self.entries + &rhs.entries,
        }
    }
}

impl std::ops::Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        assert_eq!(self.factors, rhs.factors, "operator subtraction factor mismatch");
        Operator {
            factors: self.factors.clone(),
            entries: &self.entries - &rhs.entries,
        }
    }
}

impl std::ops::Mul<f64> for &Operator {
    type Output = Operator;
    fn mul(self, rhs: f64) -> Operator {
        Operator {
            factors: self.factors.clone(),
            entries: self.entries.mapv(|z| z * rhs),
        }
    }
}

impl std::ops::Mul<Complex64> for &Operator {
    type Output = Operator;
    fn mul(self, rhs: Complex64) -> Operator {
        Operator {
            factors: self.factors.clone(),
            entries: self.entries.mapv(|z| z * rhs),
        }
    }
}

/// Kronecker product `a (x) b` with concatenated factor lists. The first
/// factor is the most significant index block.
pub fn tensor_product(a: &Operator, b: &Operator) -> Operator {
    let (na, nb) = (a.dim_total(), b.dim_total());
    let mut entries = Array2::zeros((na * nb, na * nb));
    for i in 0..na {
        for j in 0..na {
            let aij = a.entries[[i, j]];
            if aij == Complex64::ZERO {
                continue;
            }
            for k in 0..nb {
                for l in 0..nb {
                    entries[[i * nb + k, j * nb + l]] = aij * b.entries[[k, l]];
                }
            }
        }
    }
    let mut factors = a.factors.clone();
    factors.extend_from_slice(&b.factors);
    Operator { factors, entries }
}

/// Orthogonal projector onto the symmetric subspace of (C^d)^(x t),
/// using [`DEFAULT_SIZE_CAP`].
pub fn symmetrizer(d: usize, t: u32) -> Result<Operator> {
    symmetrizer_with_cap(d, t, DEFAULT_SIZE_CAP)
}

/// Symmetric-subspace projector with an explicit matrix-size cap.
///
/// The projector is the average of all t! permutation operators. It is
/// assembled column by column: the column of `|i_1 .. i_t>` has the value
/// `prod_v m_v! / t!` at every distinct rearrangement of that index tuple
/// (`m_v` are the multiplicities), which is exactly the group average with
/// coinciding permutations collected.
pub fn symmetrizer_with_cap(d: usize, t: u32, cap: usize) -> Result<Operator> {
    assert!(d >= 1 && t >= 1, "symmetrizer needs d >= 1 and t >= 1");
    let n = checked_power(d, t, cap)?;
    let t_fact = factorial(t as u64)? as f64;
    let mut entries = Array2::zeros((n, n));
    let mut digits = vec![0usize; t as usize];
    for col in 0..n {
        decode_index(col, d, &mut digits);
        let mut arrangement = digits.clone();
        arrangement.sort_unstable();
        let weight = Complex64::new(stabilizer_order(&arrangement) as f64 / t_fact, 0.0);
        loop {
            let row = encode_index(&arrangement, d);
            entries[[row, col]] = weight;
            if !next_permutation(&mut arrangement) {
                break;
            }
        }
    }
    Ok(Operator {
        factors: vec![d; t as usize],
        entries,
    })
}

/// Partial transpose of a bipartite operator in the standard basis.
///
/// For subsystem A this is `rho^Gamma = sum_ij |j><i| (x) <i|rho|j>`;
/// entries are moved, never arithmetically changed, so applying it twice
/// returns the input exactly.
pub fn partial_transpose(rho: &Operator, subsystem: Subsystem) -> Result<Operator> {
    if rho.factors.len() != 2 {
        return Err(Error::NotBipartite(rho.factors.clone()));
    }
    let (da, db) = (rho.factors[0], rho.factors[1]);
    let mut entries = Array2::zeros((da * db, da * db));
    for i in 0..da {
        for j in 0..da {
            for k in 0..db {
                for l in 0..db {
                    let v = rho.entries[[i * db + k, j * db + l]];
                    match subsystem {
                        Subsystem::A => entries[[j * db + k, i * db + l]] = v,
                        Subsystem::B => entries[[i * db + l, j * db + k]] = v,
                    }
                }
            }
        }
    }
    Ok(Operator {
        factors: rho.factors.clone(),
        entries,
    })
}

/// Numerical rank of a Hermitian operator: the number of eigenvalues with
/// `|lambda| > rank_rel_eps * max |lambda|`. The zero matrix has rank 0.
pub fn rank_with_tolerance(m: &Operator, tol: &Tolerance) -> Result<usize> {
    let eigs = m.eigenvalues_hermitian(tol)?;
    let max_abs = eigs.iter().fold(0.0f64, |acc, e| acc.max(e.abs()));
    if max_abs == 0.0 {
        return Ok(0);
    }
    let threshold = tol.rank_rel_eps * max_abs;
    Ok(eigs.iter().filter(|e| e.abs() > threshold).count())
}

fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// d^t if it stays within `cap`, else a resource error.
fn checked_power(d: usize, t: u32, cap: usize) -> Result<usize> {
    let mut n: usize = 1;
    for _ in 0..t {
        n = n.checked_mul(d).filter(|&n| n <= cap).ok_or(
            Error::SizeCapExceeded {
                requested: d.checked_pow(t).unwrap_or(usize::MAX),
                cap,
            },
        )?;
    }
    Ok(n)
}

/// Number of permutations fixing a tuple: the product of the factorials of
/// the value multiplicities. The input must be sorted.
fn stabilizer_order(sorted: &[usize]) -> u64 {
    let mut order: u64 = 1;
    let mut run = 1u64;
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            run += 1;
            order *= run;
        } else {
            run = 1;
        }
    }
    order
}

/// Most-significant-first base-d digits of `index` into `out`.
fn decode_index(index: usize, d: usize, out: &mut [usize]) {
    let mut rem = index;
    for slot in out.iter_mut().rev() {
        *slot = rem % d;
        rem /= d;
    }
}

fn encode_index(digits: &[usize], d: usize) -> usize {
    digits.iter().fold(0, |acc, &dig| acc * d + dig)
}

/// Advances to the next lexicographic permutation; false when wrapped.
fn next_permutation(a: &mut [usize]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}
