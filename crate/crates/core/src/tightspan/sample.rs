//! Seeded generation of tight points for tests and exploration.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::diversity::FiniteDiversity;
use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::tightspan::{kuratowski_at, minimize_to_tight, SpanFunction};

fn random_nonneg(rng: &mut ChaCha8Rng) -> Rat {
    Rat::frac(rng.gen_range(0..=8), rng.gen_range(1..=4))
}

/// Deterministically samples `count` members of the tight span.
///
/// Each draw starts from a feasible function (the constant max value plus
/// nonnegative rational noise, or a convex mixture of Kuratowski
/// functions, feasible by convexity, optionally bumped upward) and
/// minimizes it to a tight point. Every output is certified
/// tight by construction.
pub fn sample_tight(delta: &FiniteDiversity, seed: u64, count: usize) -> Result<Vec<SpanFunction>> {
    if count < 1 {
        return Err(Error::Parameter("sample count must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ground = delta.ground().clone();
    let n = ground.len();
    let max = delta.max_value();
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let start = if k % 2 == 0 {
            let values: Vec<Rat> = ground
                .masks()
                .map(|m| {
                    if m.is_empty() {
                        Rat::zero()
                    } else {
                        &max + random_nonneg(&mut rng)
                    }
                })
                .collect();
            SpanFunction::new(ground.clone(), values)?
        } else {
            // Convex mixture of the Kuratowski family.
            let raw: Vec<Rat> = (0..n)
                .map(|_| Rat::from_int(rng.gen_range(1..=4)))
                .collect();
            let total: Rat = raw.iter().sum();
            let mut values = vec![Rat::zero(); ground.subset_count()];
            for (i, w) in raw.iter().enumerate() {
                let lambda = w / &total;
                let h = kuratowski_at(delta, i);
                for m in ground.masks() {
                    values[m.index()] = &values[m.index()] + &(&lambda * h.value(m));
                }
            }
            if rng.gen_range(0..4) == 0 {
                for m in ground.masks() {
                    if !m.is_empty() && rng.gen_range(0..2) == 0 {
                        values[m.index()] = &values[m.index()] + random_nonneg(&mut rng);
                    }
                }
            }
            SpanFunction::new(ground.clone(), values)?
        };
        out.push(minimize_to_tight(delta, &start)?);
    }
    Ok(out)
}
