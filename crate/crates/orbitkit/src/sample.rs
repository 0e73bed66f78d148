//! Deterministic sampling of rationals, chart points, group elements, and
//! tangents. Every draw is keyed by (seed, index) so independent workers
//! produce identical streams regardless of scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chart::ChartPoint;
use crate::matrix::Matrix;
use crate::parabolic::ParabolicData;
use crate::scalar::GaussianRational;
use crate::symplectic::ChartTangent;
use crate::weyl::WeylCoset;

/// Bounds on the sampled rationals: |numerator| <= num_bound,
/// 1 <= denominator <= den_bound, for both real and imaginary parts.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct SampleBounds {
    pub num_bound: i64,
    pub den_bound: i64,
}

impl Default for SampleBounds {
    fn default() -> Self {
        SampleBounds {
            num_bound: 20,
            den_bound: 10,
        }
    }
}

/// The per-sample generator. Keying by index (rather than advancing one
/// shared stream) keeps reports byte-identical under any parallel split.
pub fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn sample_rational(rng: &mut ChaCha8Rng, bounds: &SampleBounds) -> GaussianRational {
    let num = rng.gen_range(-bounds.num_bound..=bounds.num_bound);
    let den = rng.gen_range(1..=bounds.den_bound);
    GaussianRational::from_frac(num, den)
}

pub fn sample_gaussian(rng: &mut ChaCha8Rng, bounds: &SampleBounds) -> GaussianRational {
    let re = sample_rational(rng, bounds);
    let im = sample_rational(rng, bounds);
    re + GaussianRational::i() * im
}

/// A chart point in a uniformly chosen atlas chart, with dense z and xi.
pub fn sample_chart_point(
    rng: &mut ChaCha8Rng,
    p: &ParabolicData,
    atlas: &[WeylCoset],
    bounds: &SampleBounds,
) -> ChartPoint {
    let sigma = atlas[rng.gen_range(0..atlas.len())].clone();
    let m = p.chart_dim();
    let z = (0..m).map(|_| sample_gaussian(rng, bounds)).collect();
    let xi = (0..m).map(|_| sample_gaussian(rng, bounds)).collect();
    ChartPoint::new(sigma, z, xi)
}

/// An invertible matrix: rejection-sample entries until the determinant is
/// nonzero (almost always the first draw).
pub fn sample_invertible(
    rng: &mut ChaCha8Rng,
    n: usize,
    bounds: &SampleBounds,
) -> Matrix<GaussianRational> {
    loop {
        let g = Matrix::from_fn(n, |_, _| sample_gaussian(rng, bounds));
        if !g.det().is_zero() {
            return g;
        }
    }
}

pub fn sample_tangent(
    rng: &mut ChaCha8Rng,
    p: &ParabolicData,
    bounds: &SampleBounds,
) -> ChartTangent {
    let m = p.chart_dim();
    ChartTangent::new(
        (0..m).map(|_| sample_gaussian(rng, bounds)).collect(),
        (0..m).map(|_| sample_gaussian(rng, bounds)).collect(),
    )
}
