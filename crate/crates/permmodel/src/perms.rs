use gpsofic_digraphs::StringAssignment;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// A generator keyed by the master seed and a list of tags, so that every
/// (trial, colour, ...) stream is independent of scheduling.
pub fn keyed_rng(seed: u64, tags: &[u64]) -> ChaCha8Rng {
    let mut h = Sha256::new();
    h.update(b"gpsofic");
    h.update(seed.to_le_bytes());
    for t in tags {
        h.update(t.to_le_bytes());
    }
    ChaCha8Rng::from_seed(h.finalize().into())
}

/// Stream tags used by the experiments.
pub mod tag {
    pub const PERMUTATION: u64 = 1;
    pub const GENERATOR: u64 = 2;
    pub const LABEL: u64 = 3;
}

/// One uniformly random permutation of `[N]^{S_c}` per colour.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColourPermutations {
    pub perms: Vec<Vec<usize>>,
    pub seed: u64,
    pub trial: u64,
}

impl ColourPermutations {
    pub fn draw(
        assignment: &StringAssignment,
        n: usize,
        seed: u64,
        trial: u64,
    ) -> ColourPermutations {
        let perms = (0..assignment.n_colours())
            .map(|c| {
                let d = n.pow(assignment.strings_of(c).len() as u32);
                let mut rng = keyed_rng(seed, &[tag::PERMUTATION, trial, c as u64, n as u64]);
                let mut p: Vec<usize> = (0..d).collect();
                p.shuffle(&mut rng);
                p
            })
            .collect();
        ColourPermutations { perms, seed, trial }
    }

    pub fn identity(assignment: &StringAssignment, n: usize) -> ColourPermutations {
        let perms = (0..assignment.n_colours())
            .map(|c| (0..n.pow(assignment.strings_of(c).len() as u32)).collect())
            .collect();
        ColourPermutations {
            perms,
            seed: 0,
            trial: 0,
        }
    }

    pub fn get(&self, c: usize) -> &[usize] {
        &self.perms[c]
    }
}
