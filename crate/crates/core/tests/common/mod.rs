#![allow(dead_code)]

use moral_core::scenario::{compile, Scenario};
use moral_oracle::{RandomModel, Shape};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Up to five endogenous variables, the action possibly ternary.
pub fn small_shape(rng: &mut ChaCha8Rng) -> Shape {
    use rand::Rng;
    Shape {
        exo: rng.gen_range(1..=2),
        endo: rng.gen_range(2..=5),
        actions: rng.gen_range(2..=3),
        max_parents: 3,
        settings: rng.gen_range(1..=3),
        utility_terms: rng.gen_range(1..=3),
    }
}

/// Four binary endogenous variables.
pub fn binary4(rng: &mut ChaCha8Rng) -> Shape {
    use rand::Rng;
    Shape {
        exo: rng.gen_range(1..=2),
        endo: 4,
        actions: 2,
        max_parents: 3,
        settings: 1,
        utility_terms: 1,
    }
}

/// A random model compiled through the scenario loader.
pub fn random_case(rng: &mut ChaCha8Rng, shape: &Shape) -> (RandomModel, Scenario) {
    let model = RandomModel::generate(rng, shape);
    let doc = model.to_doc("random");
    let scenario = compile(&doc).unwrap_or_else(|d| panic!("generated model rejected: {d:?}"));
    (model, scenario)
}
