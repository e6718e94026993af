//! Monte Carlo estimation of expected decrease.
//!
//! Replicates are processed in fixed blocks of [`BLOCK`]; block `b` draws
//! from substream `b` of the caller's stream and the block statistics are
//! merged in block order. Results are therefore bit-identical whether or not
//! blocks run on several threads.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{check_dims, Error, Result};
use crate::formulas::{evaluation_cost, Variant};
use crate::geometry::{fill_unit_vector, sample_stiefel};
use crate::rng::RngStream;

pub const BLOCK: usize = 1024;
pub const DEFAULT_N_SIMS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reduction {
    /// Draw both `g` and a Haar basis `B`; decrease is a norm of `Bᵀg`.
    FullBasis,
    /// Draw only `g̃` and use its first `p` coordinates.
    Reduced,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecreaseEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n_sims: usize,
    pub p: usize,
    pub d: usize,
    pub variant: Variant,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairedDifference {
    pub delta_mean: f64,
    pub delta_std_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioEstimate {
    pub ratio: f64,
    pub std_error: f64,
}

/// Running mean and co-moments of two series (Welford, merged with Chan's rule).
#[derive(Debug, Clone, Copy, Default)]
struct PairStats {
    n: f64,
    mean_a: f64,
    mean_b: f64,
    m2_a: f64,
    m2_b: f64,
    c_ab: f64,
}

impl PairStats {
    fn push(&mut self, a: f64, b: f64) {
        self.n += 1.0;
        let da = a - self.mean_a;
        let db = b - self.mean_b;
        self.mean_a += da / self.n;
        self.mean_b += db / self.n;
        self.m2_a += da * (a - self.mean_a);
        self.m2_b += db * (b - self.mean_b);
        self.c_ab += da * (b - self.mean_b);
    }

    fn merge(self, o: Self) -> Self {
        if self.n == 0.0 {
            return o;
        }
        if o.n == 0.0 {
            return self;
        }
        let n = self.n + o.n;
        let da = o.mean_a - self.mean_a;
        let db = o.mean_b - self.mean_b;
        let w = self.n * o.n / n;
        Self {
            n,
            mean_a: self.mean_a + da * o.n / n,
            mean_b: self.mean_b + db * o.n / n,
            m2_a: self.m2_a + o.m2_a + da * da * w,
            m2_b: self.m2_b + o.m2_b + db * db * w,
            c_ab: self.c_ab + o.c_ab + da * db * w,
        }
    }

    fn var_a(&self) -> f64 {
        if self.n > 1.0 { self.m2_a / (self.n - 1.0) } else { 0.0 }
    }

    fn var_b(&self) -> f64 {
        if self.n > 1.0 { self.m2_b / (self.n - 1.0) } else { 0.0 }
    }

    fn cov(&self) -> f64 {
        if self.n > 1.0 { self.c_ab / (self.n - 1.0) } else { 0.0 }
    }
}

/// Runs `n` replicates of `draw` in blocks and merges the statistics in order.
fn run_blocks<F>(n: usize, rng: RngStream, draw: F) -> PairStats
where
    F: Fn(&mut rand_chacha::ChaCha8Rng, &mut Vec<f64>) -> (f64, f64) + Sync,
{
    let blocks = n.div_ceil(BLOCK);
    let one_block = |b: usize| {
        let mut gen = rng.split(b as u64).generator();
        let mut scratch = Vec::new();
        let len = BLOCK.min(n - b * BLOCK);
        let mut stats = PairStats::default();
        for _ in 0..len {
            let (a, c) = draw(&mut gen, &mut scratch);
            stats.push(a, c);
        }
        stats
    };
    #[cfg(feature = "parallel")]
    let parts: Vec<PairStats> = {
        use rayon::prelude::*;
        (0..blocks).into_par_iter().map(one_block).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let parts: Vec<PairStats> = (0..blocks).map(one_block).collect();
    parts.into_iter().fold(PairStats::default(), PairStats::merge)
}

/// Fills `z` with standard normals and returns `‖z‖`.
fn gaussian<R: Rng + ?Sized>(z: &mut [f64], rng: &mut R) -> f64 {
    let mut sq = 0.0;
    for x in z.iter_mut() {
        *x = rng.sample(StandardNormal);
        sq += *x * *x;
    }
    sq.sqrt()
}

/// Decrease for a direction `g̃ = z/‖z‖` restricted to its first `p` coordinates.
fn reduced_value(variant: Variant, z: &[f64], norm: f64, p: usize) -> f64 {
    let head = &z[..p];
    let v = match variant {
        Variant::Ds => head.iter().fold(0.0f64, |m, x| m.max(x.abs())) / norm,
        Variant::Mb => head.iter().map(|x| x * x).sum::<f64>().sqrt() / norm,
    };
    v.min(1.0)
}

fn check_n(n_sims: usize) -> Result<()> {
    if n_sims == 0 {
        Err(Error::Domain("n_sims must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// Estimates the expected decrease of one iteration on a random unit linear
/// objective with unit step.
pub fn estimate(
    variant: Variant,
    p: usize,
    d: usize,
    n_sims: usize,
    rng: RngStream,
    reduction: Reduction,
) -> Result<DecreaseEstimate> {
    check_dims(p, d)?;
    check_n(n_sims)?;
    let stats = match reduction {
        Reduction::Reduced => run_blocks(n_sims, rng, |gen, z| {
            z.resize(d, 0.0);
            let norm = loop {
                let norm = gaussian(z, gen);
                if norm >= 1e-300 {
                    break norm;
                }
            };
            (reduced_value(variant, z, norm, p), 0.0)
        }),
        Reduction::FullBasis => run_blocks(n_sims, rng, |gen, g| {
            g.resize(d, 0.0);
            fill_unit_vector(g, gen);
            let basis = sample_stiefel(d, p, gen).expect("dimensions checked");
            let proj = basis.project(g);
            let v = match variant {
                Variant::Ds => proj.iter().fold(0.0f64, |m, x| m.max(x.abs())),
                Variant::Mb => proj.iter().map(|x| x * x).sum::<f64>().sqrt(),
            };
            (v.min(1.0), 0.0)
        }),
    };
    Ok(DecreaseEstimate {
        mean: stats.mean_a,
        std_error: (stats.var_a() / stats.n).sqrt(),
        n_sims,
        p,
        d,
        variant,
        seed: rng.seed,
    })
}

/// [`estimate`] in reduced mode divided by the deterministic per-iteration
/// evaluation cost.
pub fn estimate_per_evaluation(variant: Variant, p: usize, d: usize, n_sims: usize, rng: RngStream) -> Result<DecreaseEstimate> {
    let e = estimate(variant, p, d, n_sims, rng, Reduction::Reduced)?;
    let cost = evaluation_cost(variant, p);
    Ok(DecreaseEstimate { mean: e.mean / cost, std_error: e.std_error / cost, ..e })
}

/// Replicates of two subspace dimensions on common draws `g̃`.
fn paired_stats(variant: Variant, pa: usize, pb: usize, d: usize, n_sims: usize, rng: RngStream, scale: (f64, f64)) -> Result<PairStats> {
    check_dims(pa, d)?;
    check_dims(pb, d)?;
    check_n(n_sims)?;
    Ok(run_blocks(n_sims, rng, |gen, z| {
        z.resize(d, 0.0);
        let norm = gaussian(z, gen);
        (reduced_value(variant, z, norm, pa) * scale.0, reduced_value(variant, z, norm, pb) * scale.1)
    }))
}

/// `E^F[p1,d] - E^F[p2,d]` with a paired standard error.
pub fn paired_compare(variant: Variant, p1: usize, p2: usize, d: usize, n_sims: usize, rng: RngStream) -> Result<PairedDifference> {
    let scale = (1.0 / evaluation_cost(variant, p1), 1.0 / evaluation_cost(variant, p2));
    let s = paired_stats(variant, p1, p2, d, n_sims, rng, scale)?;
    let var = (s.var_a() + s.var_b() - 2.0 * s.cov()).max(0.0);
    Ok(PairedDifference { delta_mean: s.mean_a - s.mean_b, delta_std_error: (var / s.n).sqrt() })
}

/// `E[p_num,d] / E[p_den,d]` (or the per-evaluation ratio) on common draws,
/// with a delta-method standard error.
pub fn paired_ratio(
    variant: Variant,
    p_num: usize,
    p_den: usize,
    d: usize,
    n_sims: usize,
    rng: RngStream,
    per_evaluation: bool,
) -> Result<RatioEstimate> {
    let scale = if per_evaluation {
        (1.0 / evaluation_cost(variant, p_num), 1.0 / evaluation_cost(variant, p_den))
    } else {
        (1.0, 1.0)
    };
    let s = paired_stats(variant, p_num, p_den, d, n_sims, rng, scale)?;
    let ratio = s.mean_a / s.mean_b;
    let var = (s.var_a() - 2.0 * ratio * s.cov() + ratio * ratio * s.var_b()).max(0.0);
    Ok(RatioEstimate { ratio, std_error: (var / s.n).sqrt() / s.mean_b })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_space_model_step_is_exactly_one() {
        let e = estimate(Variant::Mb, 12, 12, 3000, RngStream::new(1), Reduction::Reduced).unwrap();
        assert_eq!(e.mean, 1.0);
        assert_eq!(e.std_error, 0.0);
        let f = estimate(Variant::Mb, 12, 12, 500, RngStream::new(1), Reduction::FullBasis).unwrap();
        assert!((f.mean - 1.0).abs() < 1e-12 && f.std_error < 1e-12);
    }

    #[test]
    fn circle_one_dimensional_poll() {
        // E|cos θ| over the circle is 2/π
        let e = estimate(Variant::Ds, 1, 2, 1_000_000, RngStream::new(0), Reduction::Reduced).unwrap();
        let want = 2.0 / std::f64::consts::PI;
        assert!((e.mean - want).abs() < 3.0 * e.std_error, "{} vs {want} ± {}", e.mean, e.std_error);
    }

    #[test]
    fn deterministic_given_seed() {
        let a = estimate(Variant::Ds, 3, 40, 5000, RngStream::new(9), Reduction::Reduced).unwrap();
        let b = estimate(Variant::Ds, 3, 40, 5000, RngStream::new(9), Reduction::Reduced).unwrap();
        assert_eq!(a, b);
        let c = estimate(Variant::Ds, 3, 40, 5000, RngStream::new(10), Reduction::Reduced).unwrap();
        assert_ne!(a.mean, c.mean);
    }

    #[test]
    fn merged_blocks_match_a_single_pass() {
        let mut a = PairStats::default();
        let mut parts = vec![PairStats::default(); 3];
        for i in 0..300 {
            let x = (i as f64 * 0.37).sin();
            let y = (i as f64 * 0.11).cos();
            a.push(x, y);
            parts[i / 100].push(x, y);
        }
        let m = parts.into_iter().fold(PairStats::default(), PairStats::merge);
        assert!((a.mean_a - m.mean_a).abs() < 1e-14);
        assert!((a.var_a() - m.var_a()).abs() < 1e-13);
        assert!((a.cov() - m.cov()).abs() < 1e-13);
    }

    #[test]
    fn per_evaluation_divides_by_cost() {
        let rng = RngStream::new(4);
        for (v, p, cost) in [(Variant::Ds, 1, 2.0), (Variant::Mb, 1, 1.5), (Variant::Mb, 3, 4.0)] {
            let e = estimate(v, p, 8, 2000, rng, Reduction::Reduced).unwrap();
            let f = estimate_per_evaluation(v, p, 8, 2000, rng).unwrap();
            assert_eq!(f.mean, e.mean / cost);
            assert_eq!(f.std_error, e.std_error / cost);
        }
    }

    #[test]
    fn paired_identical_dimensions() {
        let r = paired_compare(Variant::Ds, 3, 3, 50, 4000, RngStream::new(2)).unwrap();
        assert_eq!(r.delta_mean, 0.0);
        assert_eq!(r.delta_std_error, 0.0);
    }

    #[test]
    fn invalid_inputs() {
        assert!(estimate(Variant::Ds, 0, 3, 10, RngStream::new(0), Reduction::Reduced).is_err());
        assert!(estimate(Variant::Ds, 4, 3, 10, RngStream::new(0), Reduction::Reduced).is_err());
        assert!(estimate(Variant::Ds, 1, 3, 0, RngStream::new(0), Reduction::Reduced).is_err());
        assert!(paired_compare(Variant::Mb, 1, 9, 3, 10, RngStream::new(0)).is_err());
    }
}
