//! Seeded trials on a rayon pool. Results match the sequential runner in
//! `qlearn-core` exactly, since each trial owns its derived RNG stream.

use qlearn_core::learners::{trial_setup, LearnResult, TrialOutcome, TrialReport};
use qlearn_core::{Error, Result, SplitMix64};
use rayon::prelude::*;

pub fn par_run_trials<F>(class_size: u64, trials: usize, seed: u64, learner: F) -> Result<TrialReport>
where
    F: Fn(u64, &mut SplitMix64) -> Result<LearnResult> + Sync,
{
    if trials == 0 || class_size == 0 {
        return Err(Error::ParameterOutOfRange("trials and class size must be positive".into()));
    }
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|i| {
            let (target, mut rng) = trial_setup(class_size, trials, seed, i);
            learner(target, &mut rng).map(|r| TrialOutcome::from_result(target, &r))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TrialReport::from_outcomes(seed, outcomes))
}

/// Runs `f(i, rng_i)` for every trial index on the pool, in index order.
pub fn par_map<T, E, F>(trials: usize, seed: u64, f: F) -> core::result::Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(usize, &mut SplitMix64) -> core::result::Result<T, E> + Sync,
{
    (0..trials)
        .into_par_iter()
        .map(|i| f(i, &mut SplitMix64::derive(seed, i as u64)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use qlearn_core::learners::{quantum_exact_learn, run_trials};
    use qlearn_core::zoo;

    #[test]
    fn matches_sequential_runner() {
        let class = zoo::delta_class(3).unwrap();
        let learn = |t: u64, rng: &mut SplitMix64| quantum_exact_learn(&class, class.row(t as usize), rng);
        let par = par_run_trials(8, 40, 5, learn).unwrap();
        let seq = run_trials(8, 40, 5, learn).unwrap();
        assert_eq!(par, seq);
    }
}
