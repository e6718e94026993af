//! Reproducible random streams.
//!
//! A stream is a `(seed, stream)` pair driving a ChaCha8 generator. The
//! stream id selects an independent keystream for the same seed, so
//! substreams never need to jump or share state and can be handed to
//! worker threads by value.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngStream {
    pub seed: u64,
    pub stream: u64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self { seed, stream: 0 }
    }

    /// Derives the `k`-th child stream. Children of the same parent with
    /// different `k` are distinct from each other and from the parent.
    pub fn split(&self, k: u64) -> Self {
        let stream = splitmix64(self.stream ^ splitmix64(k).rotate_left(17)) | 1;
        Self { seed: self.seed, stream }
    }

    /// Instantiates the generator positioned at the start of this stream.
    pub fn generator(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

impl Default for RngStream {
    fn default() -> Self {
        Self::new(0)
    }
}

/// Free-function form of [`RngStream::split`].
pub fn split_stream(rng: RngStream, k: u64) -> RngStream {
    rng.split(k)
}
