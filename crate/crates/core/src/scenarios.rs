//! Hand-built reference maps that exercise the repair pipeline's edge
//! cases: a point reflection with shift, a translation that leaves the
//! state sphere touching its image at a single point, a repolarizing
//! spin-flip dilation whose repair inverts it exactly, and a mirror-stretch
//! dilation repairable only past a dilation threshold.

use crate::channel::{Channel, DensityMatrix};
use crate::maps::DepolarizerParams;
use crate::matrix::ComplexMatrix;

/// Bloch action (x, y, z) -> (-x - sqrt 2, -y, -z - sqrt 2): a point
/// reflection through the origin followed by a diagonal shift. Trace
/// preserving, not CP (one reshuffle eigenvalue is -sqrt 2). The best
/// uniform shrink is 1/(1 + 2 sqrt 2); the best mean-absolute repair
/// instead depolarizes x and z completely and leaves y alone.
pub fn inverting_shift_map() -> Channel {
    let s = 1.0 / 2.0_f64.sqrt();
    let a = ComplexMatrix::from_real(&[
        &[-s, 0.0, 0.0, 1.0 - s],
        &[-s, -1.0, 0.0, -s],
        &[-s, 0.0, -1.0, -s],
        &[1.0 + s, 0.0, 0.0, s],
    ]);
    Channel::from_a(a, 2, 2).expect("4x4 transfer matrix")
}

/// Bloch translation by (-sqrt 2, 0, -sqrt 2): shifts the sphere just far
/// enough that exactly one input state still lands on a state — the
/// x+z corner, which maps to its own spin flip. Reshuffle eigenvalues
/// {1 + sqrt 2, 1, 1 - sqrt 2, -1}; the best uniform shrink is 1/3.
pub fn corner_touching_shift_map() -> Channel {
    let s = 1.0 / 2.0_f64.sqrt();
    let a = ComplexMatrix::from_real(&[
        &[1.0 - s, 0.0, 0.0, -s],
        &[-s, 1.0, 0.0, -s],
        &[-s, 0.0, 1.0, -s],
        &[s, 0.0, 0.0, 1.0 + s],
    ]);
    Channel::from_a(a, 2, 2).expect("4x4 transfer matrix")
}

/// The single state the corner-touching shift keeps inside the ball:
/// Bloch vector (1, 0, 1)/sqrt 2.
pub fn contact_state() -> DensityMatrix {
    let s = 1.0 / 2.0_f64.sqrt();
    let m = ComplexMatrix::from_real(&[
        &[0.5 + s / 2.0, s / 2.0],
        &[s / 2.0, 0.5 - s / 2.0],
    ]);
    DensityMatrix::new(m).expect("pure state on the x+z diagonal")
}

/// Repolarizing spin-flip dilation with factor x: the depolarizer-shaped
/// transfer matrix of the unphysical parameter triple (x, -x, -1). For
/// x > 1 it is trace preserving but not CP, and composing the depolarizer
/// (1/x, -1/x, -1) on top restores the identity exactly — the repair is a
/// true inverse, leaving initial states untouched.
pub fn repolarizing_flip_map(x: f64) -> Channel {
    let a = ComplexMatrix::from_real(&[
        &[0.0, 0.0, 0.0, 1.0],
        &[0.0, 0.0, x, 0.0],
        &[0.0, x, 0.0, 0.0],
        &[1.0, 0.0, 0.0, 0.0],
    ]);
    Channel::from_a(a, 2, 2).expect("4x4 transfer matrix")
}

/// The exact inverse repair of [`repolarizing_flip_map`]: the depolarizer
/// parameters (1/x, -1/x, -1), built without range validation since the
/// composition — not the repair alone — is what must be CP.
pub fn repolarizing_flip_repair(x: f64) -> DepolarizerParams {
    DepolarizerParams::new_unchecked(vec![[1.0 / x, -1.0 / x, -1.0]])
}

/// Mirror-stretch dilation: scales x and y Bloch components by x and
/// reflects z about 1/2 (z -> 1 - z). Trace preserving, never CP for
/// x outside [-1, 1]; the composition with the depolarizer
/// (1/x^2, 1/x^2, 0) is CP exactly when |x| >= 2.
pub fn mirror_stretch_map(x: f64) -> Channel {
    let a = ComplexMatrix::from_real(&[
        &[0.5, 0.0, 0.0, 1.5],
        &[0.0, x, 0.0, 0.0],
        &[0.0, 0.0, x, 0.0],
        &[0.5, 0.0, 0.0, -0.5],
    ]);
    Channel::from_a(a, 2, 2).expect("4x4 transfer matrix")
}

/// The published repair of [`mirror_stretch_map`]: (1/x^2, 1/x^2, 0).
pub fn mirror_stretch_repair(x: f64) -> DepolarizerParams {
    DepolarizerParams::single(1.0 / (x * x), 1.0 / (x * x), 0.0)
        .expect("1/x^2 lies in [0, 1] for |x| >= 1")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::compose;
    use crate::maps::{adm, translation, TranslationParams};
    use crate::matrix::ComplexMatrix;
    use crate::measures::bloch_of_matrix;
    use num_complex::Complex64;

    const TOL: f64 = 1e-12;

    #[test]
    fn inverting_shift_reflects_and_translates() {
        let map = inverting_shift_map();
        assert!(map.trace_preservation_defect() < TOL);
        let s2 = 2.0_f64.sqrt();
        let spec = map.b_spectrum();
        let want = [2.0, s2, 0.0, -s2];
        for (got, want) in spec.iter().zip(want) {
            assert!((got - want).abs() < TOL, "{got} vs {want}");
        }
        let rho = crate::measures::state_from_bloch(&crate::measures::BlochVector::new(
            0.2, -0.3, 0.4,
        ))
        .unwrap();
        let out = map.apply_matrix(rho.matrix()).unwrap();
        let r = bloch_of_matrix(&out).unwrap().r;
        assert!((r[0] - (-0.2 - s2)).abs() < TOL);
        assert!((r[1] - 0.3).abs() < TOL);
        assert!((r[2] - (-0.4 - s2)).abs() < TOL);
    }

    #[test]
    fn corner_touching_shift_is_the_diagonal_translation() {
        let s2 = 2.0_f64.sqrt();
        let map = corner_touching_shift_map();
        let via_translation = translation(&TranslationParams {
            offset: [-s2, 0.0, -s2],
        });
        assert!(map.a_matrix().max_abs_diff(via_translation.a_matrix()) < 1e-15);
        let spec = map.b_spectrum();
        let want = [1.0 + s2, 1.0, 1.0 - s2, -1.0];
        for (got, want) in spec.iter().zip(want) {
            assert!((got - want).abs() < TOL, "{got} vs {want}");
        }
    }

    #[test]
    fn contact_state_maps_to_its_spin_flip() {
        let map = corner_touching_shift_map();
        let rho = contact_state();
        let out = map.apply_matrix(rho.matrix()).unwrap();
        let r = bloch_of_matrix(&out).unwrap().r;
        let s = 1.0 / 2.0_f64.sqrt();
        assert!((r[0] + s).abs() < TOL);
        assert!(r[1].abs() < TOL);
        assert!((r[2] + s).abs() < TOL);
        // The image is the spin flip sigma_y rho^T sigma_y of the input: a
        // valid state, so this one input survives the shift.
        let sy = ComplexMatrix::from_rows(&[
            vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, -1.0)],
            vec![Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)],
        ]);
        let flip = &(&sy * &rho.matrix().transpose()) * &sy;
        assert!(out.max_abs_diff(&flip) < TOL);
    }

    #[test]
    fn repolarizing_flip_matches_its_depolarizer_form() {
        for x in [1.5, 2.0, 10.0] {
            let map = repolarizing_flip_map(x);
            let params = DepolarizerParams::new_unchecked(vec![[x, -x, -1.0]]);
            assert_eq!(map.a_matrix().max_abs_diff(adm(&params).a_matrix()), 0.0);
            // One reshuffle eigenvalue is 1 - x < 0: not CP.
            let spec = map.b_spectrum();
            assert!((spec[3] - (1.0 - x)).abs() < TOL);
        }
    }

    #[test]
    fn repolarizing_flip_repair_restores_the_identity() {
        for x in [1.5, 2.0, 10.0] {
            let map = repolarizing_flip_map(x);
            let repair = adm(&repolarizing_flip_repair(x));
            let comp = compose(&repair, &map).unwrap();
            let eye = ComplexMatrix::identity(4);
            assert!(
                comp.a_matrix().max_abs_diff(&eye) < TOL,
                "x = {x}: {:.3e}",
                comp.a_matrix().max_abs_diff(&eye)
            );
        }
    }

    #[test]
    fn mirror_stretch_reshuffle_matches_the_closed_form() {
        let x = 3.0;
        let map = mirror_stretch_map(x);
        assert!(map.trace_preservation_defect() < TOL);
        let want = ComplexMatrix::from_real(&[
            &[0.5, 0.0, 0.0, x],
            &[0.0, 1.5, 0.0, 0.0],
            &[0.0, 0.0, 0.5, 0.0],
            &[x, 0.0, 0.0, -0.5],
        ]);
        assert_eq!(map.b_matrix().max_abs_diff(&want), 0.0);
    }

    #[test]
    fn mirror_stretch_repair_threshold_sits_at_two() {
        for x in [2.0, 3.0, 10.0] {
            let comp = compose(&adm(&mirror_stretch_repair(x)), &mirror_stretch_map(x)).unwrap();
            let (cp, min_eig) = comp.is_cp(1e-10);
            assert!(cp, "x = {x}: min eig {min_eig:.3e}");
            // Smallest reshuffle eigenvalue of the composition is (1 - 2/x)/2.
            assert!((min_eig - (1.0 - 2.0 / x) / 2.0).abs() < TOL);
        }
        let comp = compose(
            &adm(&mirror_stretch_repair(1.5)),
            &mirror_stretch_map(1.5),
        )
        .unwrap();
        let (cp, min_eig) = comp.is_cp(1e-10);
        assert!(!cp);
        assert!((min_eig - (1.0 - 2.0 / 1.5) / 2.0).abs() < TOL);
    }

    #[test]
    fn best_uniform_shrinks_match_the_published_values() {
        use crate::optimizer::optimal_symmetric_tau;
        let a = optimal_symmetric_tau(&inverting_shift_map()).unwrap();
        let want_a = 1.0 / (1.0 + 2.0 * 2.0_f64.sqrt());
        assert!((a.tau - want_a).abs() < 1e-9, "tau {} want {want_a}", a.tau);
        let b = optimal_symmetric_tau(&corner_touching_shift_map()).unwrap();
        assert!((b.tau - 1.0 / 3.0).abs() < 1e-9, "tau {}", b.tau);
    }
}
