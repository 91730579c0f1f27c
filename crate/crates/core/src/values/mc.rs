//! Block-structured Monte Carlo driver.
//!
//! Samples are split into a fixed number of blocks; block `b` draws from the
//! stream `(seed, name, b)` and keeps a running mean and second moment. Blocks
//! are merged in index order, so results do not depend on the thread count.

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::rng::stream_rng;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McParams {
    pub samples: usize,
    pub seed: u64,
    #[serde(default = "default_blocks")]
    pub blocks: usize,
    /// Worker threads; 1 runs inline.
    #[serde(default = "default_threads")]
    pub threads: usize,
}

fn default_blocks() -> usize {
    64
}

fn default_threads() -> usize {
    1
}

impl Default for McParams {
    fn default() -> Self {
        McParams {
            samples: 100_000,
            seed: 1,
            blocks: default_blocks(),
            threads: default_threads(),
        }
    }
}

impl McParams {
    pub fn new(samples: usize, seed: u64) -> Self {
        McParams {
            samples,
            seed,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples < 2 {
            return Err(invalid("need at least two samples"));
        }
        if self.blocks == 0 || self.threads == 0 {
            return Err(invalid("blocks and threads must be positive"));
        }
        Ok(())
    }
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
}

impl McEstimate {
    /// Ratio `a/b` with first-order error propagation (independent estimates).
    pub fn ratio(&self, other: &McEstimate) -> (f64, f64) {
        let r = self.mean / other.mean;
        let rel = ((self.stderr / self.mean).powi(2) + (other.stderr / other.mean).powi(2)).sqrt();
        (r, r.abs() * rel)
    }
}

#[derive(Debug, Clone)]
struct Moments {
    n: usize,
    mean: Vec<f64>,
    m2: Vec<f64>,
}

impl Moments {
    fn new(dim: usize) -> Self {
        Moments {
            n: 0,
            mean: vec![0.0; dim],
            m2: vec![0.0; dim],
        }
    }

    fn push(&mut self, x: &[f64]) {
        self.n += 1;
        let n = self.n as f64;
        for i in 0..x.len() {
            let d = x[i] - self.mean[i];
            self.mean[i] += d / n;
            self.m2[i] += d * (x[i] - self.mean[i]);
        }
    }

    fn merge(&mut self, o: &Moments) {
        if o.n == 0 {
            return;
        }
        let na = self.n as f64;
        let nb = o.n as f64;
        let n = na + nb;
        for i in 0..self.mean.len() {
            let d = o.mean[i] - self.mean[i];
            self.mean[i] += d * nb / n;
            self.m2[i] += o.m2[i] + d * d * na * nb / n;
        }
        self.n += o.n;
    }
}

fn run_blocks<G>(params: &McParams, dim: usize, block: G) -> Result<Vec<McEstimate>>
where
    G: Fn(usize, usize, usize, &mut Moments) -> Result<()> + Sync,
{
    params.validate()?;
    let blocks = params.blocks.min(params.samples);
    let base = params.samples / blocks;
    let extra = params.samples % blocks;
    let run_block = |b: usize| -> Result<Moments> {
        let mut m = Moments::new(dim);
        let start = b * base + b.min(extra);
        block(b, start, base + usize::from(b < extra), &mut m)?;
        Ok(m)
    };
    let parts: Vec<Result<Moments>> = if params.threads == 1 {
        (0..blocks).map(run_block).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(params.threads)
            .build()
            .map_err(|e| invalid(format!("thread pool: {e}")))?;
        pool.install(|| (0..blocks).into_par_iter().map(run_block).collect())
    };
    let mut total = Moments::new(dim);
    for p in parts {
        total.merge(&p?);
    }
    let n = total.n as f64;
    Ok((0..dim)
        .map(|i| McEstimate {
            mean: total.mean[i],
            stderr: (total.m2[i] / (n - 1.0) / n).sqrt(),
            samples: total.n,
        })
        .collect())
}

/// Runs `f` (which fills a `dim`-vector per sample) and returns per-component estimates.
pub fn run_mc_vec<F>(params: &McParams, stream: &str, dim: usize, f: F) -> Result<Vec<McEstimate>>
where
    F: Fn(&mut ChaCha8Rng, &mut [f64]) + Sync,
{
    run_blocks(params, dim, |b, _, count, m| {
        let mut rng = stream_rng(params.seed, stream, b as u64);
        let mut buf = vec![0.0; dim];
        for _ in 0..count {
            f(&mut rng, &mut buf);
            m.push(&buf);
        }
        Ok(())
    })
}

/// Like [`run_mc_vec`], but `f` receives the global sample index and may fail.
pub fn run_mc_indexed<F>(params: &McParams, dim: usize, f: F) -> Result<Vec<McEstimate>>
where
    F: Fn(u64, &mut [f64]) -> Result<()> + Sync,
{
    run_blocks(params, dim, |_, start, count, m| {
        let mut buf = vec![0.0; dim];
        for i in start..start + count {
            f(i as u64, &mut buf)?;
            m.push(&buf);
        }
        Ok(())
    })
}

/// Scalar version of [`run_mc_vec`].
pub fn run_mc<F>(params: &McParams, stream: &str, f: F) -> Result<McEstimate>
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    Ok(run_mc_vec(params, stream, 1, |r, out| out[0] = f(r))?[0])
}
