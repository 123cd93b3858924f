use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{input, Result};

/// Integer vector `(λ_1, …, λ_r)` with `λ_0 = λ_{r+1} = 0` implied.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Polygon(Vec<i64>);

impl Polygon {
    pub fn new(lambda: Vec<i64>) -> Result<Self> {
        if lambda.is_empty() {
            return input("a polygon needs r ≥ 1 coordinates");
        }
        Ok(Polygon(lambda))
    }

    pub fn zero(r: usize) -> Result<Self> {
        Self::new(vec![0; r])
    }

    /// `λ^m` with `λ_i = m·i(r+1−i)`; every break equals `2m`.
    pub fn lambda_m(r: usize, m: i64) -> Result<Self> {
        Self::new((1..=r as i64).map(|i| m * i * (r as i64 + 1 - i)).collect())
    }

    pub fn r(&self) -> usize {
        self.0.len()
    }

    pub fn lambda(&self) -> &[i64] {
        &self.0
    }

    /// `λ_i` for `i ∈ [0, r+1]`, zero at both ends.
    pub fn at(&self, i: usize) -> i64 {
        if i == 0 || i > self.r() {
            0
        } else {
            self.0[i - 1]
        }
    }

    /// `μ_i = λ_i − λ_{i−1}` for `i = 1..r+1`.
    pub fn slopes(&self) -> Vec<i64> {
        (1..=self.r() + 1).map(|i| self.at(i) - self.at(i - 1)).collect()
    }

    /// `μ_i`, 1-based.
    pub fn slope(&self, i: usize) -> i64 {
        self.at(i) - self.at(i - 1)
    }

    /// `2λ_i − λ_{i−1} − λ_{i+1}` for `i = 1..r`.
    pub fn breaks(&self) -> Vec<i64> {
        (1..=self.r()).map(|i| self.break_at(i)).collect()
    }

    /// Break at vertex `i`, 1-based.
    pub fn break_at(&self, i: usize) -> i64 {
        2 * self.at(i) - self.at(i - 1) - self.at(i + 1)
    }

    pub fn in_lambda(&self) -> bool {
        self.0.iter().all(|&x| x >= 0) && self.breaks().iter().all(|&b| b >= 0)
    }

    /// `λ + e_i`, 1-based.
    pub fn incremented(&self, i: usize) -> Polygon {
        let mut v = self.0.clone();
        v[i - 1] += 1;
        Polygon(v)
    }

    pub fn reversed(&self) -> Polygon {
        Polygon(self.0.iter().rev().copied().collect())
    }
}

impl std::fmt::Display for Polygon {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl std::str::FromStr for Polygon {
    type Err = crate::Error;

    /// Accepts `4,6,6,4`, optionally wrapped in parentheses or brackets.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
        let lambda = inner
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|e| crate::Error::Parse(format!("bad polygon {s:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Polygon::new(lambda)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolygonCheck {
    pub in_lambda: bool,
    /// `μ_1..μ_{r+1}`.
    pub slopes: Vec<i64>,
    /// Breaks at vertices `1..r`.
    pub breaks: Vec<i64>,
}

pub fn polygon_check(lambda: &[i64]) -> PolygonCheck {
    let p = Polygon(lambda.to_vec());
    PolygonCheck {
        in_lambda: p.in_lambda(),
        slopes: p.slopes(),
        breaks: p.breaks(),
    }
}

/// A random element of `Λ`: slopes drawn from `[−spread, spread]`, sorted
/// and shifted to sum to zero while staying non-increasing.
pub fn random_polygon<R: Rng>(rng: &mut R, r: usize, spread: i64) -> Result<Polygon> {
    if r == 0 {
        return input("r must be positive");
    }
    let mut mu: Vec<i64> = (0..=r).map(|_| rng.random_range(-spread..=spread)).collect();
    mu.sort_unstable_by(|a, b| b.cmp(a));
    let mut sum: i64 = mu.iter().sum();
    while sum > 0 {
        // lower the last copy of the maximum
        let top = mu[0];
        let k = mu.iter().rposition(|&x| x == top).expect("nonempty");
        mu[k] -= 1;
        sum -= 1;
    }
    while sum < 0 {
        let bottom = mu[r];
        let k = mu.iter().position(|&x| x == bottom).expect("nonempty");
        mu[k] += 1;
        sum += 1;
    }
    let lambda = mu[..r]
        .iter()
        .scan(0, |acc, &m| {
            *acc += m;
            Some(*acc)
        })
        .collect();
    Polygon::new(lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn lambda_one_for_r_four() {
        let c = polygon_check(&[4, 6, 6, 4]);
        assert!(c.in_lambda);
        assert_eq!(c.slopes, vec![4, 2, 0, -2, -4]);
        assert_eq!(c.breaks, vec![2, 2, 2, 2]);
        assert_eq!(Polygon::lambda_m(4, 1).unwrap().lambda(), &[4, 6, 6, 4]);
    }

    #[test]
    fn increasing_slopes_are_rejected() {
        let c = polygon_check(&[1, 3]);
        assert!(!c.in_lambda);
        assert_eq!(c.slopes, vec![1, 2, -3]);
    }

    #[test]
    fn zero_polygon() {
        let c = polygon_check(&[0, 0, 0]);
        assert!(c.in_lambda);
        assert!(c.slopes.iter().all(|&s| s == 0));
        assert!(c.breaks.iter().all(|&b| b == 0));
    }

    #[test]
    fn negative_coordinate_is_rejected() {
        assert!(!polygon_check(&[-1]).in_lambda);
        assert!(polygon_check(&[1]).in_lambda);
    }

    #[test]
    fn random_polygons_are_in_lambda() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for r in 1..7 {
            for _ in 0..50 {
                let p = random_polygon(&mut rng, r, 4).unwrap();
                assert!(p.in_lambda(), "{p}");
                assert_eq!(p.slopes().iter().sum::<i64>(), 0);
            }
        }
    }

    #[test]
    fn parse_and_display() {
        let p: Polygon = "(4, 6,6,4)".parse().unwrap();
        assert_eq!(p.to_string(), "(4,6,6,4)");
        assert_eq!("[1]".parse::<Polygon>().unwrap().lambda(), &[1]);
        assert!("".parse::<Polygon>().is_err());
        assert_eq!(p.reversed(), p);
        assert_eq!(p.incremented(2).lambda(), &[4, 7, 6, 4]);
    }
}
