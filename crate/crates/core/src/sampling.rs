//! Seeded random inputs for property checks and the `verify` suite.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cochains::{Cochain, GradedCochain};
use crate::cube_complex::{IndexMap, OrientedCube, Sign};
use crate::forms::{FormField, MultiIndex};
use crate::{binomial, C64};

/// Random direction subset of size `j` in `1..=n`, sorted.
pub fn random_dims<R: Rng + ?Sized>(rng: &mut R, n: usize, j: usize) -> Vec<usize> {
    let mut pool: Vec<usize> = (1..=n).collect();
    for i in 0..j {
        let k = rng.random_range(i..n);
        pool.swap(i, k);
    }
    let mut dims = pool[..j].to_vec();
    dims.sort_unstable();
    dims
}

pub fn random_point<R: Rng + ?Sized>(rng: &mut R, n: usize, radius: i64) -> Vec<i64> {
    (0..n).map(|_| rng.random_range(-radius..=radius)).collect()
}

/// A random oriented `j`-cube with base in `[-radius, radius]^n` and random sign.
pub fn random_cube<R: Rng + ?Sized>(rng: &mut R, n: usize, j: usize, radius: i64) -> OrientedCube {
    let sign = if rng.random_bool(0.5) {
        Sign::Plus
    } else {
        Sign::Minus
    };
    let dims = random_dims(rng, n, j);
    let imap = IndexMap::new(n, dims, sign).expect("valid dims");
    OrientedCube::new(random_point(rng, n, radius), imap).expect("matching dimension")
}

/// Small Gaussian-integer value; exact in double precision under sums.
pub fn random_integer_value<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(
        f64::from(rng.random_range(-9i32..=9)),
        f64::from(rng.random_range(-9i32..=9)),
    )
}

pub fn random_value<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// Cochain supported on up to `support` random cubes.
pub fn random_cochain<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    j: usize,
    h: f64,
    support: usize,
    radius: i64,
    integer: bool,
) -> Cochain {
    let mut f = Cochain::new(n, j, h).expect("valid degree and mesh");
    for _ in 0..support {
        let s = random_cube(rng, n, j, radius);
        let v = if integer {
            random_integer_value(rng)
        } else {
            random_value(rng)
        };
        f.set(&s, v).expect("matching degree");
    }
    f
}

pub fn random_graded<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    h: f64,
    support: usize,
    radius: i64,
) -> GradedCochain {
    let comps = (0..=n)
        .map(|j| random_cochain(rng, n, j, h, support, radius, false))
        .collect();
    GradedCochain::from_components(comps).expect("consistent components")
}

/// Form with up to `support` random points, every coefficient filled.
pub fn random_form<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    j: usize,
    h: f64,
    support: usize,
    radius: i64,
) -> FormField {
    let mut w = FormField::new(n, j, h).expect("valid degree and mesh");
    let width = binomial(n, j);
    for _ in 0..support {
        let mu = random_point(rng, n, radius);
        for rank in 1..=width {
            let idx = MultiIndex::from_rank(n, j, rank).expect("rank in range");
            w.set(&mu, &idx, random_value(rng)).expect("matching index");
        }
    }
    w
}

/// Random frequency with each `hξ_l` in `[-1, 1)`.
pub fn random_frequency<R: Rng + ?Sized>(rng: &mut R, n: usize, h: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..1.0) / h).collect()
}

/// The generator behind every seeded experiment.
pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Real vector with entries uniform in `[-1, 1)`.
pub fn random_real_vector<R: Rng + ?Sized>(rng: &mut R, len: usize) -> DVector<f64> {
    DVector::from_fn(len, |_, _| rng.random_range(-1.0..1.0))
}
