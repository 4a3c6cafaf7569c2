#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vmrt_core::{CVec, Params, C64};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// `p + s·a` blockwise.
pub fn shift(p: &Params, a: &Params, s: f64) -> Params {
    let blocks = p.blocks().iter().zip(a.blocks()).map(|(x, y)| x + y * c(s)).collect();
    Params::from_blocks(p.family(), blocks)
}

pub fn rel_err(a: &CVec, b: &CVec) -> f64 {
    (a - b).norm() / (1.0 + b.norm())
}
