//! Unit-increment paths from `λ^m` to `λ^{m+1}` inside `Λ`.

use super::{IncrementRule, Polygon};
use crate::error::{input, Error, Result};

/// Node budget of the backtracking search.
const SEARCH_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathStep {
    /// 1-based position along the path.
    pub step: usize,
    /// Coordinate incremented at this step, 1-based.
    pub index: usize,
    /// Polygon after the step.
    pub polygon: Polygon,
    /// Break that governs the step, read on the polygon before it.
    pub governing_break: i64,
    pub rule: IncrementRule,
}

/// `Σ_{i=1}^r i(r+1−i)`.
pub fn path_length(r: usize) -> usize {
    (1..=r).map(|i| i * (r + 1 - i)).sum()
}

/// Rule used for coordinate `i`: direct when `i ≤ (r+1)/2`, reflected after.
pub fn rule_for(r: usize, i: usize) -> IncrementRule {
    if 2 * i <= r + 1 {
        IncrementRule::Direct
    } else {
        IncrementRule::Reflected
    }
}

fn governing(p: &Polygon, i: usize, rule: IncrementRule) -> i64 {
    match rule {
        IncrementRule::Direct => p.break_at(i + 1),
        IncrementRule::Reflected => p.break_at(i - 1),
    }
}

/// Finds a path of unit increments from `λ^m` to `λ^{m+1}` keeping every
/// break `≥ 2m − 2` and every governing break `≥ max(1, 2m − 2)`.
///
/// Greedy depth-first search: candidates are tried in order of the smallest
/// break they leave behind (largest first), with backtracking on dead ends.
pub fn lambda_m_path(r: usize, m: i64) -> Result<Vec<PathStep>> {
    if r < 3 {
        return input("r must be at least 3");
    }
    if m < 1 {
        return input("m must be positive");
    }
    let start = Polygon::lambda_m(r, m)?;
    let deficits: Vec<usize> = (1..=r).map(|i| i * (r + 1 - i)).collect();
    let floor = 2 * m - 2;
    let mut search = Search {
        r,
        floor,
        gov_floor: floor.max(1),
        nodes: 0,
        steps: Vec::with_capacity(path_length(r)),
    };
    if search.dfs(start, deficits)? {
        Ok(search.steps)
    } else {
        Err(Error::Internal(format!("no admissible increment order for r = {r}, m = {m}")))
    }
}

struct Search {
    r: usize,
    floor: i64,
    gov_floor: i64,
    nodes: usize,
    steps: Vec<PathStep>,
}

impl Search {
    fn dfs(&mut self, current: Polygon, mut deficits: Vec<usize>) -> Result<bool> {
        if deficits.iter().all(|&d| d == 0) {
            return Ok(true);
        }
        self.nodes += 1;
        if self.nodes > SEARCH_BUDGET {
            return Err(Error::Internal("increment search exceeded its node budget".into()));
        }
        let mut candidates: Vec<(i64, usize, Polygon, i64, IncrementRule)> = Vec::new();
        for i in 1..=self.r {
            if deficits[i - 1] == 0 {
                continue;
            }
            let rule = rule_for(self.r, i);
            let gov = governing(&current, i, rule);
            if gov < self.gov_floor {
                continue;
            }
            let next = current.incremented(i);
            let min_break = next.breaks().into_iter().min().expect("r ≥ 1");
            if min_break < self.floor || !next.in_lambda() {
                continue;
            }
            candidates.push((min_break, i, next, gov, rule));
        }
        candidates.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        for (_, i, next, gov, rule) in candidates {
            deficits[i - 1] -= 1;
            self.steps.push(PathStep {
                step: self.steps.len() + 1,
                index: i,
                polygon: next.clone(),
                governing_break: gov,
                rule,
            });
            if self.dfs(next, deficits.clone())? {
                return Ok(true);
            }
            self.steps.pop();
            deficits[i - 1] += 1;
        }
        Ok(false)
    }
}
