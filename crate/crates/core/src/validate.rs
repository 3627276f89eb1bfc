//! General-position validation of disk instances.
//!
//! Every construction and query algorithm in this crate relies on the
//! input being non-degenerate: radii pairwise distinct, center
//! y-coordinates pairwise distinct in each of the three rotated frames,
//! finite coordinates, positive radii, unique ids. [`validate`] reports
//! every violation it finds; [`ensure_valid`] turns a non-empty report
//! into an error.

use crate::arcs::Frame;
use crate::error::{Error, Result, Violation};
use crate::geom::{Disk, Tolerance};
use crate::scalar::Float;

/// Check an instance against all general-position requirements and
/// return the full list of violations (empty when the instance is fine).
pub fn validate<F: Float>(disks: &[Disk<F>], tol: &Tolerance<F>) -> Vec<Violation> {
    let mut out = Vec::new();

    let mut seen = std::collections::HashSet::with_capacity(disks.len());
    for d in disks {
        if !(d.center.x.is_finite() && d.center.y.is_finite() && d.radius.is_finite()) {
            out.push(Violation::NonFinite { id: d.id });
        } else if d.radius <= F::zero() {
            out.push(Violation::NonPositiveRadius { id: d.id, r: d.radius.as_f64() });
        }
        if !seen.insert(d.id) {
            out.push(Violation::DuplicateId { id: d.id });
        }
    }

    // Tie checks only make sense over finite values; NaNs would poison
    // the sort orders below.
    let clean: Vec<&Disk<F>> = disks
        .iter()
        .filter(|d| d.center.x.is_finite() && d.center.y.is_finite() && d.radius.is_finite())
        .collect();

    let mut by_radius = clean.clone();
    by_radius.sort_by(|a, b| a.radius.partial_cmp(&b.radius).unwrap());
    for w in by_radius.windows(2) {
        let delta = w[1].radius - w[0].radius;
        if delta <= tol.eps_radius {
            out.push(Violation::RadiusTie {
                a: w[0].id,
                b: w[1].id,
                delta: delta.as_f64(),
            });
        }
    }

    for frame in Frame::ALL {
        let rot = frame.rotation::<F>();
        let mut ys: Vec<(F, u64)> = clean
            .iter()
            .map(|d| (d.center.rotated(rot).y, d.id))
            .collect();
        ys.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        for w in ys.windows(2) {
            let delta = w[1].0 - w[0].0;
            if delta <= tol.eps_coord {
                out.push(Violation::CenterYTie {
                    frame,
                    a: w[0].1,
                    b: w[1].1,
                    delta: delta.as_f64(),
                });
            }
        }
    }

    out
}

/// [`validate`], escalated: `Ok(())` on a clean instance, otherwise the
/// full violation list as an [`Error::Validation`].
pub fn ensure_valid<F: Float>(disks: &[Disk<F>], tol: &Tolerance<F>) -> Result<()> {
    let v = validate(disks, tol);
    if v.is_empty() {
        Ok(())
    } else {
        Err(Error::Validation(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Point;

    fn disk(id: u64, x: f64, y: f64, r: f64) -> Disk<f64> {
        Disk::new(id, Point::new(x, y), r)
    }

    #[test]
    fn clean_instance_passes() {
        let disks = [disk(0, 0.0, 0.0, 1.0), disk(1, 5.0, 2.0, 2.0), disk(2, -3.0, 7.0, 0.5)];
        assert!(validate(&disks, &Tolerance::default()).is_empty());
        assert!(ensure_valid(&disks, &Tolerance::default()).is_ok());
    }

    #[test]
    fn radius_tie_reported() {
        let disks = [disk(0, 0.0, 0.0, 1.0), disk(1, 5.0, 2.0, 1.0)];
        let v = validate(&disks, &Tolerance::default());
        assert!(v.iter().any(|x| matches!(x, Violation::RadiusTie { a: 0, b: 1, .. })));
    }

    #[test]
    fn y_tie_reported_in_base_frame() {
        let disks = [disk(0, 0.0, 3.0, 1.0), disk(1, 5.0, 3.0, 2.0)];
        let v = validate(&disks, &Tolerance::default());
        assert!(v
            .iter()
            .any(|x| matches!(x, Violation::CenterYTie { frame: Frame::Right, .. })));
    }

    #[test]
    fn y_tie_in_a_rotated_frame_only() {
        // Centers separated along direction 2pi/3: equal y after rotating
        // by -2pi/3 (the top frame), distinct in the other two frames.
        let (s, c) = (2.0 * std::f64::consts::FRAC_PI_3).sin_cos();
        let disks = [disk(0, 0.0, 0.0, 1.0), disk(1, 4.0 * c, 4.0 * s, 2.0)];
        let v = validate(&disks, &Tolerance::default());
        assert_eq!(v.len(), 1);
        assert!(matches!(v[0], Violation::CenterYTie { frame: Frame::Top, .. }));
    }

    #[test]
    fn bad_values_reported() {
        let disks = [
            disk(0, f64::NAN, 0.0, 1.0),
            disk(1, 0.0, 1.0, -2.0),
            disk(1, 3.0, 4.0, 2.0),
        ];
        let v = validate(&disks, &Tolerance::default());
        assert!(v.iter().any(|x| matches!(x, Violation::NonFinite { id: 0 })));
        assert!(v.iter().any(|x| matches!(x, Violation::NonPositiveRadius { id: 1, .. })));
        assert!(v.iter().any(|x| matches!(x, Violation::DuplicateId { id: 1 })));
        assert!(ensure_valid(&disks, &Tolerance::default()).is_err());
    }
}
