//! Shared fixtures for the criterion benches.

use niho::gfun::{self, GFamily, GFunction};
use niho::{Ext, Ke};

pub fn field(m: u32) -> Ext {
    Ext::with_degree(m).expect("supported degree")
}

/// Deterministic spread of extension-field elements.
pub fn sample(k: &Ext, n: usize) -> Vec<Ke> {
    let size = k.size();
    (0..n).map(|i| Ke::from_index((i * 7919 + 1) % size, k.m())).collect()
}

/// The catalog g-function of a family, moved off its zeros.
pub fn zero_free_g(k: &Ext, fam: GFamily) -> GFunction {
    let g = fam.g(k).expect("family defined at this degree");
    gfun::fix_zeros(k, &g).expect("zero-free shift").0
}
