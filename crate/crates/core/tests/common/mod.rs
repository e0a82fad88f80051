#![allow(dead_code)]

use banditree::envsim::{make_hard, make_rand, HardInstanceSpec};
use banditree::{BanditCollection, SimRng};

pub const LAMBDA: f64 = 0.4;
/// Decoy gap is `10ε = 0.05`.
pub const HARD_EPSILON: f64 = 0.005;
pub const RAND_10_20_SEED: u64 = 1020;
pub const RAND_40_40_SEED: u64 = 4040;

pub fn hard(m: usize, k: usize, epsilon: f64) -> BanditCollection {
    make_hard(&HardInstanceSpec::new(m, k, epsilon, LAMBDA)).unwrap()
}

pub fn hard4() -> BanditCollection {
    hard(4, 6, 0.01)
}

pub fn hard_5_10() -> BanditCollection {
    hard(5, 10, HARD_EPSILON)
}

pub fn rand_10_20() -> BanditCollection {
    make_rand(10, 20, LAMBDA, &mut SimRng::new(RAND_10_20_SEED, 0)).unwrap().0
}

pub fn rand_40_40() -> BanditCollection {
    make_rand(40, 40, LAMBDA, &mut SimRng::new(RAND_40_40_SEED, 0)).unwrap().0
}

/// Every collection shipped under `fixtures/`, by file stem.
pub fn shipped() -> Vec<(&'static str, BanditCollection)> {
    vec![
        ("hard-4", hard4()),
        ("hard-5-10", hard_5_10()),
        ("rand-10-20", rand_10_20()),
        ("rand-40-40", rand_40_40()),
    ]
}

pub fn fixtures_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}
