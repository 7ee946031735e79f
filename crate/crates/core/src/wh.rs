//! Weyl-Heisenberg displacement operators `D_{p,q} = tau^{pq} X^p Z^q`
//! with `omega = exp(2 pi i / d)` and `tau = -exp(i pi / d)`, and orbits of
//! a fiducial state under the full group modulo phases.
//!
//! The phase convention makes `D_{p,q}` traceless for `(p,q) != (0,0)` and
//! gives `D_{p,q}^dagger = D_{-p,-q}` exactly. Applying a displacement is
//! O(d): entry `(j+p mod d, j)` carries `tau^{pq} omega^{qj}` and all
//! others vanish.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::metrics::StateSet;
use crate::tensor::{Operator, PureState};

/// A displacement label `(p, q)` reduced modulo d.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Displacement {
    d: usize,
    p: usize,
    q: usize,
}

/// Builds the displacement with exponents reduced modulo d. Accepts any
/// integer exponents; `displacement(d, -1, 0)` equals `displacement(d, d-1, 0)`
/// as a label (the matrices differ by the phase `tau^{pq} `convention
/// applied after reduction, which is the convention used throughout).
pub fn displacement(d: usize, p: i64, q: i64) -> Displacement {
    assert!(d >= 1, "displacement needs d >= 1");
    let m = d as i64;
    Displacement {
        d,
        p: p.rem_euclid(m) as usize,
        q: q.rem_euclid(m) as usize,
    }
}

impl Displacement {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Phase angle of the nonzero entry in column j:
    /// `pi (d+1) p q / d + 2 pi q j / d`. The first term is `tau^{pq}`
    /// since `tau = exp(i pi (d+1) / d)`.
    fn column_angle(&self, j: usize) -> f64 {
        let d = self.d as f64;
        PI * ((self.d + 1) * self.p * self.q) as f64 / d
            + 2.0 * PI * (self.q * j) as f64 / d
    }

    /// Dense d x d matrix of the displacement.
    pub fn matrix(&self) -> Operator {
        let d = self.d;
        let mut entries = ndarray::Array2::<Complex64>::zeros((d, d));
        for j in 0..d {
            entries[[(j + self.p) % d, j]] = Complex64::from_polar(1.0, self.column_angle(j));
        }
        Operator::new(vec![d], entries).expect("displacement matrix is square")
    }

    /// Per-column phases: entry j multiplies amplitude j and lands on row
    /// `(j + p) mod d`.
    pub(crate) fn column_phases(&self) -> Vec<Complex64> {
        (0..self.d).map(|j| phase(self.column_angle(j))).collect()
    }

    fn apply_raw(&self, amps: &[Complex64]) -> Vec<Complex64> {
        let d = self.d;
        debug_assert_eq!(amps.len(), d);
        let mut out = vec![Complex64::ZERO; d];
        for j in 0..d {
            out[(j + self.p) % d] = phase(self.column_angle(j)) * amps[j];
        }
        out
    }

    #[cfg(test)]
    fn apply_adjoint_raw(&self, amps: &[Complex64]) -> Vec<Complex64> {
        let d = self.d;
        debug_assert_eq!(amps.len(), d);
        let mut out = vec![Complex64::ZERO; d];
        for j in 0..d {
            out[j] = phase(-self.column_angle(j)) * amps[(j + self.p) % d];
        }
        out
    }

    /// `D_{p,q} |psi>` in O(d).
    pub fn apply(&self, state: &PureState) -> PureState {
        assert_eq!(state.dim(), self.d, "state dimension mismatch");
        PureState::new(self.apply_raw(state.amplitudes()))
            .expect("displacements are unitary, norm is preserved")
    }
}

fn phase(angle: f64) -> Complex64 {
    if angle == 0.0 {
        Complex64::ONE // keep D_{0,q} columns exact at j = 0, and D_{0,0} = I
    } else {
        Complex64::from_polar(1.0, angle)
    }
}

/// The d^2 states `D_{p,q} |phi>` in lexicographic `(p, q)` order with
/// uniform weights. The entry at index 0 is the fiducial itself, bit for
/// bit. Requires `phi.dim() >= 2`.
pub fn orbit(fiducial: &PureState) -> StateSet {
    let d = fiducial.dim();
    assert!(d >= 2, "orbit needs dimension >= 2");
    let mut states = Vec::with_capacity(d * d);
    for p in 0..d {
        for q in 0..d {
            states.push(Displacement { d, p, q }.apply(fiducial));
        }
    }
    StateSet::uniform(states).expect("orbit states are nonempty and share one dimension")
}
