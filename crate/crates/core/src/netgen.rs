//! Synthetic inter-QNets and request sampling.
//!
//! A uniform spanning tree of the complete multipartite graph is laid first
//! (Wilson's loop-erased random walk), then every other cross-QNet pair is
//! added independently with probability `p`. QNet `i` owns a contiguous id
//! range, in order.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;
use crate::pairs::RequestSet;
use crate::qnet::{InterQNet, QNetPartition};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct GenConfig {
    pub sizes: Vec<usize>,
    pub p: f64,
    pub seed: u64,
}

impl GenConfig {
    /// `n` vertices over `k` QNets, sizes differing by at most one.
    pub fn balanced(n: usize, k: usize, p: f64, seed: u64) -> Self {
        let sizes = (0..k).map(|i| n / k + usize::from(i < n % k)).collect();
        GenConfig { sizes, p, seed }
    }

    pub fn k(&self) -> usize {
        self.sizes.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.sizes.len() < 2 {
            return Err(Error::TooFewQNets {
                min: 2,
                got: self.sizes.len(),
            });
        }
        if let Some(i) = self.sizes.iter().position(|&s| s == 0) {
            return Err(Error::EmptyQNet(i));
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::InvalidProbability(self.p));
        }
        Ok(())
    }
}

/// Independent stream `stream` of the generator seeded by `seed`.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn generate_inter_qnet(cfg: &GenConfig) -> Result<InterQNet> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    generate_with(cfg, &mut rng)
}

pub fn generate_with<R: Rng>(cfg: &GenConfig, rng: &mut R) -> Result<InterQNet> {
    cfg.validate()?;
    let n: usize = cfg.sizes.iter().sum();
    let mut start = Vec::with_capacity(cfg.k() + 1);
    let mut membership = Vec::with_capacity(n);
    start.push(0);
    for (i, &s) in cfg.sizes.iter().enumerate() {
        membership.extend(core::iter::repeat_n(i, s));
        start.push(start[i] + s);
    }

    // uniform neighbour of u in the complete multipartite graph
    let step = |rng: &mut R, u: usize| -> usize {
        let q = membership[u];
        let j = rng.gen_range(0..n - cfg.sizes[q]);
        if j < start[q] {
            j
        } else {
            j + cfg.sizes[q]
        }
    };

    let mut graph = Graph::new(n);
    let mut in_tree = vec![false; n];
    let mut next = vec![usize::MAX; n];
    in_tree[0] = true;
    for v in 1..n {
        let mut u = v;
        while !in_tree[u] {
            next[u] = step(rng, u);
            u = next[u];
        }
        let mut u = v;
        while !in_tree[u] {
            in_tree[u] = true;
            graph.add_edge(u, next[u])?;
            u = next[u];
        }
    }

    for u in 0..n {
        for v in start[membership[u] + 1]..n {
            if !graph.has_edge(u, v) && rng.gen_bool(cfg.p) {
                graph.add_edge(u, v)?;
            }
        }
    }
    let partition = QNetPartition::from_membership(&membership)?;
    InterQNet::new(graph, partition)
}

/// Uniform sample without replacement of non-adjacent cross-QNet pairs,
/// returned in lexicographic order.
pub fn sample_requests(iq: &InterQNet, count: usize, seed: u64) -> Result<RequestSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_requests_with(iq, count, &mut rng)
}

pub fn sample_requests_with<R: Rng>(iq: &InterQNet, count: usize, rng: &mut R) -> Result<RequestSet> {
    let pool = iq.non_adjacent_cross_pairs();
    if count > pool.len() {
        return Err(Error::NotEnoughPairs {
            requested: count,
            available: pool.len(),
        });
    }
    let mut picks = index::sample(rng, pool.len(), count).into_vec();
    picks.sort_unstable();
    RequestSet::new(iq, picks.into_iter().map(|i| pool[i]))
}

/// Cross-QNet pairs of the complete multipartite graph with these sizes.
pub fn cross_pair_count(sizes: &[usize]) -> usize {
    let n: usize = sizes.iter().sum();
    (n * n - sizes.iter().map(|s| s * s).sum::<usize>()) / 2
}
