//! Small exactly-known state sets used by tests and the CLI registry: the
//! qubit tetrahedron SIC and the full set of qubit mutually unbiased bases.

use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;

use crate::metrics::StateSet;
use crate::tensor::PureState;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The qubit tetrahedron SIC: fiducial amplitudes `a = sqrt((3+sqrt 3)/6)`
/// and `b = sqrt((3-sqrt 3)/6)` with a relative phase of `pi/4`. All cross
/// overlaps-squared equal `1/3`.
pub fn tetrahedron() -> StateSet {
    let a = ((3.0 + 3.0f64.sqrt()) / 6.0).sqrt();
    let b = ((3.0 - 3.0f64.sqrt()) / 6.0).sqrt();
    // b * exp(i pi / 4), using only square roots.
    let bp = b * FRAC_1_SQRT_2;
    let states = vec![
        PureState::new(vec![c(a, 0.0), c(bp, bp)]).unwrap(),
        PureState::new(vec![c(a, 0.0), c(-bp, -bp)]).unwrap(),
        PureState::new(vec![c(bp, bp), c(a, 0.0)]).unwrap(),
        PureState::new(vec![c(-bp, -bp), c(a, 0.0)]).unwrap(),
    ];
    StateSet::uniform(states).expect("tetrahedron states are consistent")
}

/// The six states of the three qubit mutually unbiased bases
/// `{|0>, |1>}`, `{|+>, |->}`, `{|+i>, |-i>}` — a tight 3-design.
pub fn qubit_mub_six() -> StateSet {
    let s = FRAC_1_SQRT_2;
    let states = vec![
        PureState::new(vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap(),
        PureState::new(vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap(),
        PureState::new(vec![c(s, 0.0), c(s, 0.0)]).unwrap(),
        PureState::new(vec![c(s, 0.0), c(-s, 0.0)]).unwrap(),
        PureState::new(vec![c(s, 0.0), c(0.0, s)]).unwrap(),
        PureState::new(vec![c(s, 0.0), c(0.0, -s)]).unwrap(),
    ];
    StateSet::uniform(states).expect("MUB states are consistent")
}

/// The computational basis of dimension d as a uniformly weighted set.
pub fn orthonormal_basis(d: usize) -> StateSet {
    let states = (0..d).map(|i| PureState::basis_state(d, i)).collect();
    StateSet::uniform(states).expect("basis states are consistent")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tetrahedron_shape() {
        let s = tetrahedron();
        assert_eq!(s.dim(), 2);
        assert_eq!(s.len(), 4);
        for j in 0..4 {
            for k in 0..4 {
                if j != k {
                    let p = s.overlap(j, k).norm_sqr();
                    assert!((p - 1.0 / 3.0).abs() <= 1e-15, "({j},{k}): {p}");
                }
            }
        }
    }

    #[test]
    fn mub_six_overlaps() {
        let s = qubit_mub_six();
        assert_eq!(s.len(), 6);
        // Within a basis overlaps vanish; across bases they square to 1/2.
        for j in 0..6 {
            for k in 0..6 {
                if j == k {
                    continue;
                }
                let p = s.overlap(j, k).norm_sqr();
                let expected = if j / 2 == k / 2 { 0.0 } else { 0.5 };
                assert!((p - expected).abs() <= 1e-15, "({j},{k}): {p}");
            }
        }
    }

    #[test]
    fn basis_is_orthonormal() {
        let s = orthonormal_basis(4);
        for j in 0..4 {
            for k in 0..4 {
                let expected = if j == k { 1.0 } else { 0.0 };
                assert_eq!(s.overlap(j, k).re, expected);
                assert_eq!(s.overlap(j, k).im, 0.0);
            }
        }
    }
}
