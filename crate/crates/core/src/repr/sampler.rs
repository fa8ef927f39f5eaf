use num_bigint::{BigInt, RandBigInt};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::BuildError;
use crate::graph::Vertex;
use crate::linalg::{primitive, Rat, Subspace};

/// Per-vertex random stream: the run seed picks the key, the vertex picks the
/// stream, so each vertex's draws do not depend on other vertices' retries.
pub fn vertex_rng(seed: u64, v: Vertex) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(v as u64);
    rng
}

/// Draws `Σ cᵢ bᵢ` with integer coefficients uniform in `[-bound, bound]`
/// over a basis `bᵢ` of `l` (each basis vector scaled to primitive integers).
/// The zero vector is never returned.
pub fn sample_in_subspace<R: Rng + ?Sized>(
    l: &Subspace,
    rng: &mut R,
    bound: &BigInt,
) -> Result<Vec<Rat>, BuildError> {
    if l.dim() == 0 {
        return Err(BuildError::EmptySampleSpace(0));
    }
    let basis: Vec<Vec<Rat>> = l.basis().iter().map(|b| primitive(b)).collect();
    let lo = -bound.clone();
    let hi = bound + 1;
    loop {
        let mut v = vec![Rat::zero(); l.ambient_dim()];
        for b in &basis {
            let c = Rat::from_integer(rng.gen_bigint_range(&lo, &hi));
            if c.is_zero() {
                continue;
            }
            for (x, y) in v.iter_mut().zip(b) {
                if !y.is_zero() {
                    *x += &c * y;
                }
            }
        }
        if v.iter().any(|x| !x.is_zero()) {
            return Ok(v);
        }
    }
}
