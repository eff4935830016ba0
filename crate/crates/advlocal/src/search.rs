//! Constructive search for assignments of finite-domain variables under
//! binary constraints: Moser–Tardos resampling with an iteration budget,
//! and an exhaustive backtracking fallback for small instances.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const EXHAUSTIVE_LIMIT: usize = 12;

pub trait BinaryCsp {
    fn num_vars(&self) -> usize;
    fn domain_size(&self, var: usize) -> usize;
    /// An assigned variable whose value conflicts with `var`'s value, or
    /// `var` itself when its value is invalid on its own. Unassigned
    /// variables are ignored.
    fn conflict(&self, assign: &[Option<usize>], var: usize) -> Option<usize>;
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub vars: usize,
    pub resamples: usize,
    pub budget: usize,
    /// True when the randomized search ran out and backtracking finished the job.
    pub exhaustive: bool,
}

pub fn first_violation<C: BinaryCsp + ?Sized>(csp: &C, assign: &[usize]) -> Option<(usize, usize)> {
    let full: Vec<Option<usize>> = assign.iter().copied().map(Some).collect();
    (0..csp.num_vars()).find_map(|v| csp.conflict(&full, v).map(|w| (v, w)))
}

pub fn is_satisfied<C: BinaryCsp + ?Sized>(csp: &C, assign: &[usize]) -> bool {
    assign.len() == csp.num_vars() && first_violation(csp, assign).is_none()
}

/// Moser–Tardos: start uniformly at random, then repeatedly resample the
/// variables of the first violated constraint. Returns the assignment and
/// the number of resampling steps, or the last assignment when the budget
/// runs out.
pub fn moser_tardos<C: BinaryCsp + ?Sized>(
    csp: &C,
    rng: &mut ChaCha8Rng,
    budget: usize,
) -> std::result::Result<(Vec<usize>, usize), Vec<usize>> {
    let n = csp.num_vars();
    if (0..n).any(|v| csp.domain_size(v) == 0) {
        return Err(Vec::new());
    }
    let mut assign: Vec<usize> = (0..n).map(|v| rng.gen_range(0..csp.domain_size(v))).collect();
    for step in 0..=budget {
        match first_violation(csp, &assign) {
            None => return Ok((assign, step)),
            Some(_) if step == budget => break,
            Some((a, b)) => {
                assign[a] = rng.gen_range(0..csp.domain_size(a));
                if b != a {
                    assign[b] = rng.gen_range(0..csp.domain_size(b));
                }
            }
        }
    }
    Err(assign)
}

/// Backtracking over variables in index order, values ascending.
pub fn exhaustive<C: BinaryCsp + ?Sized>(csp: &C) -> Option<Vec<usize>> {
    let n = csp.num_vars();
    let mut assign: Vec<Option<usize>> = vec![None; n];
    fn go<C: BinaryCsp + ?Sized>(csp: &C, assign: &mut Vec<Option<usize>>, var: usize) -> bool {
        if var == assign.len() {
            return true;
        }
        for value in 0..csp.domain_size(var) {
            assign[var] = Some(value);
            if csp.conflict(assign, var).is_none() && go(csp, assign, var + 1) {
                return true;
            }
        }
        assign[var] = None;
        false
    }
    if go(csp, &mut assign, 0) {
        Some(assign.into_iter().map(|v| v.expect("assigned")).collect())
    } else {
        None
    }
}

/// Randomized search first; exhaustive search when it fails and the
/// instance has at most [`EXHAUSTIVE_LIMIT`] variables. `describe` names a
/// conflicting pair of variables of the last assignment for the error.
pub fn solve<C: BinaryCsp + ?Sized>(
    csp: &C,
    rng: &mut ChaCha8Rng,
    budget: usize,
    describe: impl Fn(&[usize], usize, usize) -> String,
) -> Result<(Vec<usize>, SearchStats)> {
    let mut stats = SearchStats { vars: csp.num_vars(), budget, ..Default::default() };
    let last = match moser_tardos(csp, rng, budget) {
        Ok((assign, steps)) => {
            stats.resamples = steps;
            return Ok((assign, stats));
        }
        Err(last) => last,
    };
    stats.resamples = budget;
    let conflict = first_violation(csp, &last).map(|(a, b)| format!("; {}", describe(&last, a, b))).unwrap_or_default();
    if csp.num_vars() <= EXHAUSTIVE_LIMIT {
        if let Some(assign) = exhaustive(csp) {
            stats.exhaustive = true;
            return Ok((assign, stats));
        }
        return Err(Error::SearchFailed(format!(
            "no valid assignment exists for {} variables{conflict}",
            csp.num_vars()
        )));
    }
    Err(Error::SearchFailed(format!(
        "resampling exceeded its budget of {budget} steps on {} variables{conflict}",
        csp.num_vars()
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    /// Values on a line; neighbors must differ by at least `gap`.
    struct Spread {
        n: usize,
        dom: usize,
        gap: usize,
    }

    impl BinaryCsp for Spread {
        fn num_vars(&self) -> usize {
            self.n
        }
        fn domain_size(&self, _: usize) -> usize {
            self.dom
        }
        fn conflict(&self, assign: &[Option<usize>], var: usize) -> Option<usize> {
            let x = assign[var]?;
            (0..self.n).find(|&w| w != var && w.abs_diff(var) == 1 && assign[w].is_some_and(|y| x.abs_diff(y) < self.gap))
        }
    }

    #[test]
    fn randomized_and_exhaustive_agree_on_satisfiable() {
        let csp = Spread { n: 8, dom: 6, gap: 3 };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (a, _) = moser_tardos(&csp, &mut rng, 1000).unwrap();
        assert!(is_satisfied(&csp, &a));
        assert!(is_satisfied(&csp, &exhaustive(&csp).unwrap()));
    }

    #[test]
    fn unsatisfiable_small_instance_fails() {
        let csp = Spread { n: 3, dom: 2, gap: 2 };
        assert!(exhaustive(&csp).is_none());
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let err = solve(&csp, &mut rng, 50, |_, a, b| format!("{a} vs {b}")).unwrap_err();
        assert!(matches!(err, Error::SearchFailed(ref m) if m.contains(" vs ")));
    }
}
