use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::AbsorbingChain;
use crate::error::{Error, Result};
use crate::par::Execution;
use crate::rational::{to_f64, Q};

pub const DEFAULT_MAX_STEPS: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimulationOptions {
    pub trials: u64,
    pub seed: u64,
    pub max_steps: u64,
    pub execution: Execution,
}

impl Default for SimulationOptions {
    fn default() -> Self {
        SimulationOptions {
            trials: 100_000,
            seed: 0,
            max_steps: DEFAULT_MAX_STEPS,
            execution: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationEstimate {
    pub wins: u64,
    pub completed: u64,
    pub censored: u64,
    /// `wins / completed`.
    pub estimate: f64,
    /// Binomial standard error of `estimate`.
    pub std_error: f64,
}

/// Per-row sampler. Rows whose common denominator fits in `u64` are sampled
/// exactly with integer thresholds; wider rows fall back to `f64`.
enum Row {
    Absorbing,
    Exact { total: u64, cumulative: Vec<(u64, usize)> },
    Float { cumulative: Vec<(f64, usize)> },
}

impl Row {
    fn build(entries: &[Q], me: usize) -> Row {
        let support: Vec<(usize, &Q)> = entries
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .collect();
        if support.len() == 1 && support[0].0 == me {
            return Row::Absorbing;
        }
        let lcm = support
            .iter()
            .fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
        if let Some(total) = lcm.to_u64() {
            let mut acc = 0u64;
            let cumulative = support
                .iter()
                .map(|(j, v)| {
                    acc += (v.numer() * (&lcm / v.denom())).to_u64().expect("fits");
                    (acc, *j)
                })
                .collect();
            Row::Exact { total, cumulative }
        } else {
            let mut acc = 0.0;
            let cumulative = support
                .iter()
                .map(|(j, v)| {
                    acc += to_f64(v);
                    (acc, *j)
                })
                .collect();
            Row::Float { cumulative }
        }
    }

    fn step(&self, rng: &mut ChaCha8Rng) -> Option<usize> {
        match self {
            Row::Absorbing => None,
            Row::Exact { total, cumulative } => {
                let u = rng.random_range(0..*total);
                cumulative.iter().find(|(c, _)| u < *c).map(|&(_, j)| j)
            }
            Row::Float { cumulative } => {
                let u: f64 = rng.random();
                let last = cumulative.last().map(|&(_, j)| j);
                cumulative.iter().find(|(c, _)| u < *c).map(|&(_, j)| j).or(last)
            }
        }
    }
}

#[derive(Clone, Copy)]
enum Outcome {
    Win,
    Loss,
    Censored,
}

#[derive(Clone, Copy, Default)]
struct Tally {
    wins: u64,
    losses: u64,
    censored: u64,
}

/// Monte Carlo estimate of the winning probability from `start`.
///
/// Trial `t` draws from the ChaCha stream `t` of the master seed, so results
/// do not depend on scheduling and adding trials never reshuffles earlier ones.
/// Walks that reach any absorbing state other than `win` count as losses.
pub fn simulate(
    chain: &AbsorbingChain,
    start: &str,
    options: &SimulationOptions,
) -> Result<SimulationEstimate> {
    let start = chain.kernel().index_of(start)?;
    if start == chain.coffin_index() {
        return Err(Error::InvalidArgument(
            "simulation cannot start in the coffin state".into(),
        ));
    }
    if options.trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let p = chain.kernel().matrix();
    let rows: Vec<Row> = (0..p.rows()).map(|i| Row::build(p.row(i), i)).collect();
    let win = chain.win_index();

    let run = |trial: u64| -> Outcome {
        let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
        rng.set_stream(trial);
        let mut state = start;
        let mut steps = 0u64;
        loop {
            match rows[state].step(&mut rng) {
                None if state == win => return Outcome::Win,
                None => return Outcome::Loss,
                Some(_) if steps == options.max_steps => return Outcome::Censored,
                Some(next) => {
                    state = next;
                    steps += 1;
                }
            }
        }
    };
    let tally = options.execution.fold(
        options.trials,
        Tally::default(),
        |t| {
            let mut tally = Tally::default();
            match run(t) {
                Outcome::Win => tally.wins = 1,
                Outcome::Loss => tally.losses = 1,
                Outcome::Censored => tally.censored = 1,
            }
            tally
        },
        |a, b| Tally {
            wins: a.wins + b.wins,
            losses: a.losses + b.losses,
            censored: a.censored + b.censored,
        },
    );

    let completed = tally.wins + tally.losses;
    if completed == 0 {
        return Err(Error::NoCompletedTrials {
            censored: tally.censored,
        });
    }
    let estimate = tally.wins as f64 / completed as f64;
    Ok(SimulationEstimate {
        wins: tally.wins,
        completed,
        censored: tally.censored,
        estimate,
        std_error: (estimate * (1.0 - estimate) / completed as f64).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::tests::maze_chain;

    fn opts(trials: u64, seed: u64) -> SimulationOptions {
        SimulationOptions {
            trials,
            seed,
            ..SimulationOptions::default()
        }
    }

    #[test]
    fn start_at_win_is_certain() {
        let est = simulate(&maze_chain(), "5", &opts(50, 1)).unwrap();
        assert_eq!(est.estimate, 1.0);
        assert_eq!(est.std_error, 0.0);
        assert_eq!(est.completed, 50);
    }

    #[test]
    fn maze_estimate_near_two_sevenths() {
        let est = simulate(&maze_chain(), "1", &opts(20_000, 7)).unwrap();
        assert_eq!(est.censored, 0);
        assert!((est.estimate - 2.0 / 7.0).abs() < 4.0 * est.std_error);
    }

    #[test]
    fn seeded_runs_are_reproducible_across_strategies() {
        let chain = maze_chain();
        let seq = SimulationOptions {
            execution: Execution::Sequential,
            ..opts(3_000, 42)
        };
        let a = simulate(&chain, "1", &seq).unwrap();
        let b = simulate(&chain, "1", &opts(3_000, 42)).unwrap();
        assert_eq!(a, b);
        let c = simulate(&chain, "1", &opts(3_000, 43)).unwrap();
        assert_ne!(a.wins, c.wins);
    }

    #[test]
    fn censoring_is_reported() {
        let chain = maze_chain();
        let tight = SimulationOptions {
            max_steps: 0,
            ..opts(100, 3)
        };
        assert_eq!(
            simulate(&chain, "1", &tight).unwrap_err(),
            Error::NoCompletedTrials { censored: 100 }
        );
        let some = SimulationOptions {
            max_steps: 2,
            ..opts(1000, 3)
        };
        let est = simulate(&chain, "1", &some).unwrap();
        assert!(est.censored > 0);
        assert_eq!(est.completed + est.censored, 1000);
    }

    #[test]
    fn bad_arguments() {
        let chain = maze_chain();
        assert!(simulate(&chain, "3", &opts(10, 0)).is_err());
        assert!(simulate(&chain, "9", &opts(10, 0)).is_err());
        assert!(simulate(&chain, "1", &opts(0, 0)).is_err());
    }
}
