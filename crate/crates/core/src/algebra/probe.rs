use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{multiply, Algebra, Element};

#[derive(Clone, Debug)]
pub struct AssociativityCounterexample<B> {
    pub triple: (B, B, B),
    pub left: String,
    pub right: String,
}

/// Checks `(xy)z = x(yz)` on every triple of `generators` and on `samples`
/// triples drawn from `pool` with a seeded generator. Returns the first failure.
pub fn associativity_probe<A: Algebra>(
    alg: &A,
    generators: &[A::Basis],
    pool: &[A::Basis],
    samples: usize,
    seed: u64,
) -> Result<usize, AssociativityCounterexample<A::Basis>> {
    let mut triples = Vec::new();
    for a in generators {
        for b in generators {
            for c in generators {
                triples.push((*a, *b, *c));
            }
        }
    }
    if !pool.is_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let pick = |rng: &mut ChaCha8Rng| *pool.choose(rng).expect("nonempty pool");
            triples.push((pick(&mut rng), pick(&mut rng), pick(&mut rng)));
        }
    }
    let one = alg.field().one();
    for (a, b, c) in &triples {
        let (x, y, z) = (
            Element::basis(*a, one.clone()),
            Element::basis(*b, one.clone()),
            Element::basis(*c, one.clone()),
        );
        let left = multiply(alg, &multiply(alg, &x, &y), &z);
        let right = multiply(alg, &x, &multiply(alg, &y, &z));
        if left != right {
            return Err(AssociativityCounterexample {
                triple: (*a, *b, *c),
                left: format!("{left:?}"),
                right: format!("{right:?}"),
            });
        }
    }
    Ok(triples.len())
}
