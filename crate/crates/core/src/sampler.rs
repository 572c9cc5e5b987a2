//! Metropolis sampling of the eigenvalue density
//! Z̃⁻¹ Π_{j≠k}|λ_j − λ_k| e^{−N Σ V(λ_j)}.

use crate::error::{Error, Result};
use crate::potential::Potential;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

/// Name of the random generator, recorded with every run.
pub const RNG_ALGORITHM: &str = "ChaCha20 (rand_chacha 0.9, seed_from_u64)";

/// −H_N(λ) = Σ_{j≠k} ln|λ_j − λ_k| − N Σ V(λ_j).
pub fn log_density(v: &Potential, n: usize, lambdas: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for (j, &x) in lambdas.iter().enumerate() {
        for &y in &lambdas[j + 1..] {
            if x == y {
                return Err(Error::CoincidentPoints(x));
            }
            s += 2.0 * (x - y).abs().ln();
        }
    }
    Ok(s - n as f64 * lambdas.iter().map(|&x| v.eval(x)).sum::<f64>())
}

#[derive(Debug, Clone)]
pub struct LogGasChain {
    pub n: usize,
    pub v: Potential,
    pub state: Vec<f64>,
    pub seed: u64,
    pub step: f64,
    pub proposed: u64,
    pub accepted: u64,
    rng: ChaCha20Rng,
}

impl LogGasChain {
    /// Particles start on an evenly spaced grid in [−1, 1].
    pub fn new(v: Potential, n: usize, seed: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(format!("need at least two particles, got {n}")));
        }
        let state = (0..n).map(|i| -1.0 + 2.0 * i as f64 / (n - 1) as f64).collect();
        Ok(LogGasChain {
            n,
            v,
            state,
            seed,
            step: 1.0 / n as f64,
            proposed: 0,
            accepted: 0,
            rng: ChaCha20Rng::seed_from_u64(seed),
        })
    }

    /// Change in −H when particle `i` moves to `x`, in O(N).
    pub fn delta_log_density(&self, i: usize, x: f64) -> f64 {
        let old = self.state[i];
        let mut d = 0.0;
        for (j, &y) in self.state.iter().enumerate() {
            if j != i {
                d += 2.0 * ((x - y).abs().ln() - (old - y).abs().ln());
            }
        }
        d - self.n as f64 * (self.v.eval(x) - self.v.eval(old))
    }

    pub fn acceptance_rate(&self) -> f64 {
        if self.proposed == 0 {
            0.0
        } else {
            self.accepted as f64 / self.proposed as f64
        }
    }

    /// One sweep of N single-site Gaussian proposals.
    pub fn sweep(&mut self) {
        for i in 0..self.n {
            let z: f64 = self.rng.sample(StandardNormal);
            let x = self.state[i] + self.step * z;
            let d = self.delta_log_density(i, x);
            self.proposed += 1;
            let u: f64 = self.rng.random();
            if d >= 0.0 || u < d.exp() {
                self.state[i] = x;
                self.accepted += 1;
            }
        }
    }
}

/// Samples kept after burn-in.
#[derive(Debug, Clone, Serialize)]
pub struct SampleSet {
    pub chain: usize,
    pub seed: u64,
    pub rng: &'static str,
    pub burn_in: usize,
    pub thin: usize,
    pub step: f64,
    pub acceptance_rate: f64,
    /// (sweep index, configuration) for every kept sweep.
    #[serde(skip)]
    pub samples: Vec<(usize, Vec<f64>)>,
}

impl SampleSet {
    pub fn positions(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().flat_map(|(_, s)| s.iter().copied())
    }
}

/// Burn-in fraction; proposal widths are tuned only during this phase.
pub const BURN_IN_FRACTION: f64 = 0.2;

/// Run `sweeps` sweeps, discarding the first 20 %. During burn-in the step is
/// rescaled every 50 sweeps to keep the acceptance rate in [0.2, 0.5].
pub fn metropolis_run(chain: &mut LogGasChain, sweeps: usize, thin: usize) -> SampleSet {
    let thin = thin.max(1);
    let burn = (sweeps as f64 * BURN_IN_FRACTION).round() as usize;
    let (mut win_p, mut win_a) = (0u64, 0u64);
    for s in 0..burn {
        let (p0, a0) = (chain.proposed, chain.accepted);
        chain.sweep();
        win_p += chain.proposed - p0;
        win_a += chain.accepted - a0;
        if (s + 1) % 50 == 0 {
            let rate = win_a as f64 / win_p as f64;
            if rate < 0.2 {
                chain.step *= 0.8;
            } else if rate > 0.5 {
                chain.step *= 1.25;
            }
            win_p = 0;
            win_a = 0;
        }
    }
    chain.proposed = 0;
    chain.accepted = 0;
    let mut samples = Vec::with_capacity((sweeps - burn) / thin + 1);
    for s in burn..sweeps {
        chain.sweep();
        if (s - burn) % thin == 0 {
            samples.push((s, chain.state.clone()));
        }
    }
    SampleSet {
        chain: 0,
        seed: chain.seed,
        rng: RNG_ALGORITHM,
        burn_in: burn,
        thin,
        step: chain.step,
        acceptance_rate: chain.acceptance_rate(),
        samples,
    }
}

/// Independent chains with seeds seed, seed + 1, …, run in parallel and
/// returned in chain order.
pub fn run_chains(
    v: &Potential,
    n: usize,
    sweeps: usize,
    thin: usize,
    seed: u64,
    chains: usize,
) -> Result<Vec<SampleSet>> {
    (0..chains)
        .into_par_iter()
        .map(|c| {
            let mut chain = LogGasChain::new(v.clone(), n, seed.wrapping_add(c as u64))?;
            let mut set = metropolis_run(&mut chain, sweeps, thin);
            set.chain = c;
            Ok(set)
        })
        .collect()
}

/// Normalised histogram of positions on `bins` equal bins of [lo, hi].
pub fn histogram(positions: impl Iterator<Item = f64>, lo: f64, hi: f64, bins: usize) -> Vec<f64> {
    let mut counts = vec![0u64; bins];
    let mut total = 0u64;
    let w = (hi - lo) / bins as f64;
    for x in positions {
        total += 1;
        if x >= lo && x < hi {
            counts[((x - lo) / w) as usize] += 1;
        }
    }
    counts.iter().map(|&c| c as f64 / (total as f64 * w)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_value() {
        let v = Potential::gaussian();
        assert!((log_density(&v, 2, &[0.0, 1.0]).unwrap() + 2.0).abs() < 1e-15);
        assert!(log_density(&v, 2, &[0.5, 0.5]).is_err());
        let a = log_density(&v, 3, &[0.1, -0.4, 0.9]).unwrap();
        let b = log_density(&v, 3, &[0.9, 0.1, -0.4]).unwrap();
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn incremental_update_matches_full_ratio() {
        let v = Potential::quartic(-1.0, 1.0).unwrap();
        let mut chain = LogGasChain::new(v.clone(), 12, 3).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(99);
        for _ in 0..100 {
            let i = rng.random_range(0..12);
            let x = chain.state[i] + 0.3 * rng.sample::<f64, _>(StandardNormal);
            let before = log_density(&v, 12, &chain.state).unwrap();
            let d = chain.delta_log_density(i, x);
            let mut moved = chain.state.clone();
            moved[i] = x;
            let after = log_density(&v, 12, &moved).unwrap();
            assert!((d - (after - before)).abs() < 1e-12 * (1.0 + d.abs()));
            chain.state = moved;
        }
    }

    #[test]
    fn seeded_runs_repeat() {
        let v = Potential::gaussian();
        let run = || {
            let mut c = LogGasChain::new(v.clone(), 6, 42).unwrap();
            metropolis_run(&mut c, 200, 10).samples
        };
        let (a, b) = (run(), run());
        assert_eq!(a.len(), b.len());
        for ((sa, xa), (sb, xb)) in a.iter().zip(&b) {
            assert_eq!(sa, sb);
            assert!(xa.iter().zip(xb).all(|(p, q)| p.to_bits() == q.to_bits()));
        }
    }
}
