//! Seeded random instance generation.
//!
//! Instances are guaranteed to pass validation with a safety factor of
//! 10 on every tolerance: radii are drawn stratified (one per slot of
//! the radius range, jittered within the slot's middle half), which
//! bounds the minimum radius gap by construction; center coordinates
//! are re-drawn until all three rotated frames have sufficient
//! y-separation. The box grows with sqrt(count) by default, keeping the
//! expected overlap depth constant as instances scale.

use crate::error::{Error, Result};
use crate::geom::{Disk, Point, Tolerance};
use crate::scalar::Float;
use crate::validate::validate;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Margin multiplier over the validation tolerances.
const MARGIN: f64 = 10.0;

#[derive(Debug, Clone)]
pub struct GenParams<F> {
    pub count: usize,
    pub seed: u64,
    /// Half side length of the centered square the centers are drawn
    /// from; `None` scales it with sqrt(count).
    pub half_extent: Option<F>,
    pub r_min: F,
    pub r_max: F,
}

impl<F: Float> GenParams<F> {
    pub fn new(count: usize, seed: u64) -> Self {
        GenParams {
            count,
            seed,
            half_extent: None,
            r_min: F::from_f64_lossy(0.5),
            r_max: F::from_f64_lossy(8.0),
        }
    }
}

/// Generate a deterministic pseudo-random instance; for a fixed
/// parameter set the output is reproducible bit for bit.
pub fn generate<F: Float>(p: &GenParams<F>, tol: &Tolerance<F>) -> Result<Vec<Disk<F>>> {
    if p.count == 0 {
        return Ok(Vec::new());
    }
    let n = p.count;
    let (r_min, r_max) = (p.r_min.as_f64(), p.r_max.as_f64());
    if !(r_min > 0.0 && r_max > r_min) {
        return Err(Error::DegenerateInput(format!(
            "radius range [{r_min}, {r_max}] is empty or not positive"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);

    // Stratified radii: slot k gets a value in the middle half of
    // [k, k+1)*step, so the minimum pairwise gap is step/2 by
    // construction. Shuffled so ids carry no size information.
    let step = (r_max - r_min) / n as f64;
    if step * 0.5 <= MARGIN * tol.eps_radius.as_f64() {
        return Err(Error::DegenerateInput(format!(
            "cannot separate {n} radii in [{r_min}, {r_max}] by the required margin"
        )));
    }
    let mut radii: Vec<f64> = (0..n)
        .map(|k| r_min + step * (k as f64 + 0.25 + 0.5 * rng.gen::<f64>()))
        .collect();
    radii.shuffle(&mut rng);

    let half = p
        .half_extent
        .map(|h| h.as_f64())
        .unwrap_or_else(|| 3.0 * (n as f64).sqrt() + 10.0);
    let mut centers: Vec<Point<f64>> =
        (0..n).map(|_| random_center(&mut rng, half)).collect();

    // Re-draw centers involved in any frame-y near-tie until all three
    // frames are separated; expected to finish in a couple of rounds.
    let y_margin = MARGIN * tol.eps_coord.as_f64();
    let rotations = [0.0, -2.0 * std::f64::consts::FRAC_PI_3, 2.0 * std::f64::consts::FRAC_PI_3];
    let mut rounds = 0;
    loop {
        let mut redraw = std::collections::BTreeSet::new();
        for rot in rotations {
            let mut ys: Vec<(f64, usize)> = centers
                .iter()
                .enumerate()
                .map(|(i, c)| (c.rotated(rot).y, i))
                .collect();
            ys.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            for w in ys.windows(2) {
                if w[1].0 - w[0].0 <= y_margin {
                    redraw.insert(w[1].1);
                }
            }
        }
        if redraw.is_empty() {
            break;
        }
        rounds += 1;
        if rounds > 200 {
            return Err(Error::DegenerateInput(
                "could not reach general-position margins after 200 rounds".into(),
            ));
        }
        for i in redraw {
            centers[i] = random_center(&mut rng, half);
        }
    }

    let disks: Vec<Disk<F>> = (0..n)
        .map(|i| {
            Disk::new(
                (i + 1) as u64,
                Point::new(F::from_f64_lossy(centers[i].x), F::from_f64_lossy(centers[i].y)),
                F::from_f64_lossy(radii[i]),
            )
        })
        .collect();
    debug_assert!(validate(&disks, tol).is_empty());
    Ok(disks)
}

fn random_center(rng: &mut ChaCha8Rng, half: f64) -> Point<f64> {
    Point::new(rng.gen_range(-half..half), rng.gen_range(-half..half))
}

/// Default-parameter instance for tests; panics only on parameter sets
/// the fixed defaults can never produce.
pub fn random_instance<F: Float>(n: usize, seed: u64, tol: &Tolerance<F>) -> Vec<Disk<F>> {
    generate(&GenParams::new(n, seed), tol).expect("default generator parameters are satisfiable")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance<f64> {
        Tolerance::default()
    }

    #[test]
    fn empty_and_single() {
        assert!(random_instance::<f64>(0, 7, &tol()).is_empty());
        let one = random_instance::<f64>(1, 7, &tol());
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].id, 1);
    }

    #[test]
    fn deterministic_per_seed() {
        let a = random_instance::<f64>(200, 42, &tol());
        let b = random_instance::<f64>(200, 42, &tol());
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.id, y.id);
            assert_eq!(x.center.x.to_bits(), y.center.x.to_bits());
            assert_eq!(x.center.y.to_bits(), y.center.y.to_bits());
            assert_eq!(x.radius.to_bits(), y.radius.to_bits());
        }
        let c = random_instance::<f64>(200, 43, &tol());
        assert!(a.iter().zip(&c).any(|(x, y)| x.center.x != y.center.x));
    }

    #[test]
    fn validates_with_tenfold_margins() {
        let disks = random_instance::<f64>(1000, 5, &tol());
        let strict = Tolerance {
            eps_geom: 1e-9,
            eps_radius: 1e-7 * MARGIN,
            eps_coord: 1e-7 * MARGIN,
        };
        assert!(validate(&disks, &strict).is_empty());
    }

    #[test]
    fn impossible_margins_rejected() {
        let p = GenParams { r_max: 0.500001, ..GenParams::<f64>::new(100, 1) };
        assert!(generate(&p, &tol()).is_err());
    }
}
