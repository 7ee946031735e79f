//! Separable-state structures: the symmetric states rho_t, the closed form
//! of the partial transpose of rho_2, biranks, length bounds, and
//! decomposition certificates tying designs to the length of rho_t.
//!
//! The length L(rho) itself (minimal number of pure product states in a
//! separable decomposition) is never computed: only its lower bound
//! max(birank) and certificate-based upper bounds, which is exactly the
//! logic the certified quantities support. When a t-design of size n
//! reconstructs rho_t, L(rho_t) <= n; at t = 2 the birank gives
//! L(rho_2) >= d^2, so a SIC pins L(rho_2) = d^2.

use crate::comb::binomial;
use crate::error::{Error, Result};
use crate::metrics::{tensor_power_average, StateSet};
use crate::tensor::{
    maximally_entangled_unnormalized, partial_transpose, rank_with_tolerance,
    symmetrizer_with_cap, Operator, Subsystem, Tolerance, DEFAULT_SIZE_CAP,
};

/// The pair (rank of rho, rank of the partial transpose of rho).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Birank {
    pub r: usize,
    pub r_gamma: usize,
}

impl Birank {
    pub fn max(&self) -> usize {
        self.r.max(self.r_gamma)
    }
}

/// Witness that a state set reconstructs a target rho_t. The implied upper
/// bound on the length is meaningful only when the certificate is valid,
/// i.e. the reconstruction error is within tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionCertificate {
    pub target: Operator,
    pub points: StateSet,
    pub weights: Vec<f64>,
    pub reconstruction_error: f64,
    pub implied_length_upper_bound: usize,
}

impl DecompositionCertificate {
    /// A certificate bounds the length only within tolerance; loosening
    /// `verify_eps` never invalidates a valid certificate.
    pub fn is_valid(&self, tol: &Tolerance) -> bool {
        self.reconstruction_error <= tol.verify_eps
    }
}

/// `rho_t = S_{d,t} / binom(d+t-1, t)`: the normalized projector onto the
/// symmetric subspace, a separable state with unit trace whose support is
/// exactly that subspace.
pub fn rho_t(d: usize, t: u32) -> Result<Operator> {
    rho_t_with_cap(d, t, DEFAULT_SIZE_CAP)
}

pub fn rho_t_with_cap(d: usize, t: u32, cap: usize) -> Result<Operator> {
    let s = symmetrizer_with_cap(d, t, cap)?;
    let scale = 1.0 / binomial((d + t as usize - 1) as u64, t as u64)? as f64;
    Ok(&s * scale)
}

/// The closed form `(I + |Psi_d><Psi_d|) / (d^2 + d)` of the partial
/// transpose of rho_2, built directly from the identity and the
/// non-normalized maximally entangled vector — independently of the
/// partial-transpose routine it cross-validates.
pub fn rho2_gamma_closed_form(d: usize) -> Operator {
    assert!(d >= 2, "rho2 closed form needs d >= 2");
    let identity = Operator::identity(&[d, d]);
    let psi = maximally_entangled_unnormalized(d);
    let outer = Operator::from_outer(&psi, vec![d, d]).expect("|Psi><Psi| is d^2 x d^2");
    &(&identity + &outer) * (1.0 / (d * d + d) as f64)
}

/// Rank of rho and of its partial transpose on subsystem A. Requires a
/// bipartite Hermitian operator.
pub fn birank(rho: &Operator, tol: &Tolerance) -> Result<Birank> {
    let gamma = partial_transpose(rho, Subsystem::A)?;
    Ok(Birank {
        r: rank_with_tolerance(rho, tol)?,
        r_gamma: rank_with_tolerance(&gamma, tol)?,
    })
}

/// `L(rho) >= max(r(rho), r(rho^Gamma))` for bipartite separable states.
pub fn length_lower_bound(rho: &Operator, tol: &Tolerance) -> Result<usize> {
    Ok(birank(rho, tol)?.max())
}

/// Reconstructs rho_t from the weighted tensor powers of a state set and
/// records the error. A valid certificate upper-bounds L(rho_t) by the
/// number of points.
pub fn certificate_from_design(s: &StateSet, t: u32) -> Result<DecompositionCertificate> {
    certificate_from_design_with_cap(s, t, DEFAULT_SIZE_CAP)
}

pub fn certificate_from_design_with_cap(
    s: &StateSet,
    t: u32,
    cap: usize,
) -> Result<DecompositionCertificate> {
    if t == 0 {
        return Err(Error::InvalidConfig(
            "decomposition certificates need t >= 1".into(),
        ));
    }
    let d = s.dim();
    let average = tensor_power_average(s, t, cap)?;
    let target = rho_t_with_cap(d, t, cap)?;
    let reconstruction_error = (&average - &target).frobenius_norm();
    let weights: Vec<f64> = (0..s.len()).map(|i| s.weight(i)).collect();
    let implied_length_upper_bound = weights.iter().filter(|&&w| w > 0.0).count();
    Ok(DecompositionCertificate {
        target,
        points: s.clone(),
        weights,
        reconstruction_error,
        implied_length_upper_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{orthonormal_basis, qubit_mub_six, tetrahedron};
    use crate::tensor::{tensor_product, PureState};

    #[test]
    fn rho_2_2_entries() {
        let rho = rho_t(2, 2).unwrap();
        let e = rho.entries();
        let third = 1.0 / 3.0;
        let sixth = 1.0 / 6.0;
        assert!((e[[0, 0]].re - third).abs() < 1e-15);
        assert!((e[[3, 3]].re - third).abs() < 1e-15);
        assert!((e[[1, 1]].re - sixth).abs() < 1e-15);
        assert!((e[[2, 2]].re - sixth).abs() < 1e-15);
        assert!((e[[1, 2]].re - sixth).abs() < 1e-15);
        assert!((e[[2, 1]].re - sixth).abs() < 1e-15);
        assert!((e[[0, 1]].norm()) < 1e-15);
        assert_eq!(rho.factors(), &[2, 2]);
    }

    #[test]
    fn rho_t_has_unit_trace() {
        for (d, t) in [(2usize, 1u32), (2, 2), (2, 5), (3, 2), (3, 3), (4, 2), (6, 2)] {
            let tr = rho_t(d, t).unwrap().trace();
            assert!((tr.re - 1.0).abs() <= 1e-12, "d={d} t={t} trace {tr}");
            assert!(tr.im.abs() <= 1e-14);
        }
    }

    #[test]
    fn rho_t_spectrum_is_flat_on_symmetric_subspace() {
        let tol = Tolerance::default();
        for (d, t) in [(2usize, 2u32), (3, 2), (2, 3)] {
            let rho = rho_t(d, t).unwrap();
            let dim_sym = binomial((d + t as usize - 1) as u64, t as u64).unwrap() as usize;
            let level = 1.0 / dim_sym as f64;
            let eigs = rho.eigenvalues_hermitian(&tol).unwrap();
            let n = eigs.len();
            for (i, &e) in eigs.iter().enumerate() {
                let expected = if i >= n - dim_sym { level } else { 0.0 };
                assert!((e - expected).abs() <= 1e-12, "d={d} t={t} eig {e}");
            }
        }
    }

    #[test]
    fn rho_t_rank_is_symmetric_dimension() {
        let tol = Tolerance::default();
        let rho = rho_t(3, 2).unwrap();
        assert_eq!(rank_with_tolerance(&rho, &tol).unwrap(), 6);
    }

    #[test]
    fn rho_t_respects_size_cap() {
        assert!(matches!(
            rho_t(2, 13),
            Err(Error::SizeCapExceeded { .. })
        ));
        assert!(rho_t_with_cap(2, 5, 32).is_ok());
        assert!(rho_t_with_cap(2, 6, 32).is_err());
    }

    #[test]
    fn closed_form_matches_partial_transpose() {
        for d in 2..=6usize {
            let direct = partial_transpose(&rho_t(d, 2).unwrap(), Subsystem::A).unwrap();
            let closed = rho2_gamma_closed_form(d);
            let diff = (&direct - &closed).frobenius_norm();
            assert!(diff <= 1e-12, "d={d}: {diff}");
        }
    }

    #[test]
    fn closed_form_spectrum_d2() {
        let tol = Tolerance::default();
        let eigs = rho2_gamma_closed_form(2)
            .eigenvalues_hermitian(&tol)
            .unwrap();
        let expected = [1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0, 0.5];
        for (e, x) in eigs.iter().zip(expected) {
            assert!((e - x).abs() <= 1e-13, "{eigs:?}");
        }
        let tr = rho2_gamma_closed_form(2).trace();
        assert!((tr.re - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn birank_of_rho_2() {
        let tol = Tolerance::default();
        for d in 2..=6usize {
            let b = birank(&rho_t(d, 2).unwrap(), &tol).unwrap();
            assert_eq!(b.r, (d * d + d) / 2, "d={d}");
            assert_eq!(b.r_gamma, d * d, "d={d}");
            assert_eq!(
                length_lower_bound(&rho_t(d, 2).unwrap(), &tol).unwrap(),
                d * d
            );
        }
    }

    #[test]
    fn birank_of_pure_product_state() {
        let tol = Tolerance::default();
        let zero = PureState::basis_state(2, 0).projector();
        let prod = tensor_product(&zero, &zero);
        let b = birank(&prod, &tol).unwrap();
        assert_eq!((b.r, b.r_gamma), (1, 1));
        assert_eq!(b.max(), 1);
    }

    #[test]
    fn birank_of_maximally_entangled_state() {
        let tol = Tolerance::default();
        let psi = maximally_entangled_unnormalized(2);
        let rho = &Operator::from_outer(&psi, vec![2, 2]).unwrap() * 0.5;
        let b = birank(&rho, &tol).unwrap();
        assert_eq!((b.r, b.r_gamma), (1, 4));
    }

    #[test]
    fn birank_requires_bipartite() {
        let tol = Tolerance::default();
        let rho = rho_t(2, 2).unwrap().with_factors(vec![4]).unwrap();
        assert!(matches!(
            birank(&rho, &tol),
            Err(Error::NotBipartite(_))
        ));
    }

    #[test]
    fn certificate_from_tetrahedron() {
        let tol = Tolerance::default();
        let cert = certificate_from_design(&tetrahedron(), 2).unwrap();
        assert!(cert.reconstruction_error <= 1e-10, "{}", cert.reconstruction_error);
        assert!(cert.is_valid(&tol));
        assert_eq!(cert.implied_length_upper_bound, 4);
        // Together with the birank lower bound this pins L(rho_2) = 4 at d=2.
        assert_eq!(length_lower_bound(&cert.target, &tol).unwrap(), 4);
    }

    #[test]
    fn certificate_from_mub_six() {
        let tol = Tolerance::default();
        let cert = certificate_from_design(&qubit_mub_six(), 3).unwrap();
        assert!(cert.reconstruction_error <= 1e-10);
        assert!(cert.is_valid(&tol));
        assert_eq!(cert.implied_length_upper_bound, 6);
        assert_eq!(cert.target.factors(), &[2, 2, 2]);
    }

    #[test]
    fn certificate_from_non_design_is_invalid() {
        let tol = Tolerance::default();
        let cert = certificate_from_design(&orthonormal_basis(3), 2).unwrap();
        assert!(cert.reconstruction_error > 0.1, "{}", cert.reconstruction_error);
        assert!(!cert.is_valid(&tol));
    }

    #[test]
    fn certificate_validity_is_monotone_in_tolerance() {
        let strict = Tolerance::new(1e-12, 1e-8).unwrap();
        let loose = Tolerance::new(1e-6, 1e-8).unwrap();
        for cert in [
            certificate_from_design(&tetrahedron(), 2).unwrap(),
            certificate_from_design(&qubit_mub_six(), 3).unwrap(),
            certificate_from_design(&orthonormal_basis(3), 2).unwrap(),
        ] {
            if cert.is_valid(&strict) {
                assert!(cert.is_valid(&loose));
            }
        }
    }

    #[test]
    fn certificate_respects_size_cap() {
        assert!(matches!(
            certificate_from_design_with_cap(&tetrahedron(), 2, 3),
            Err(Error::SizeCapExceeded { .. })
        ));
        assert!(matches!(
            certificate_from_design(&tetrahedron(), 0),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn certificate_weights_echo_the_set() {
        let cert = certificate_from_design(&tetrahedron(), 2).unwrap();
        assert_eq!(cert.weights, vec![0.25; 4]);
        let sum: f64 = cert.weights.iter().sum();
        assert!((sum - 1.0).abs() <= 1e-12);
    }
}
