//! Points of the torus `T^mu` given by exact rational turns.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Turn = Ratio<i64>;

/// A point `omega = (e^{2 pi i q_1}, ..., e^{2 pi i q_mu})` with every `q_j` in `[0, 1)`.
///
/// A coordinate equals 1 exactly when its turn is zero; this is never decided
/// by a floating-point comparison.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct TorusPoint {
    turns: Vec<Turn>,
}

impl TorusPoint {
    /// Builds a point, reducing every turn modulo 1.
    pub fn new(turns: Vec<Turn>) -> Result<Self> {
        if turns.is_empty() {
            return Err(Error::invalid("a torus point needs at least one coordinate"));
        }
        let turns = turns.into_iter().map(reduce_turn).collect();
        Ok(Self { turns })
    }

    /// Point with turns `k_j / n`.
    pub fn from_ks(ks: &[i64], n: i64) -> Result<Self> {
        if n <= 0 {
            return Err(Error::invalid("denominator must be positive"));
        }
        Self::new(ks.iter().map(|&k| Ratio::new(k, n)).collect())
    }

    /// The base point `(1, ..., 1)`.
    pub fn ones(mu: usize) -> Self {
        Self {
            turns: vec![Turn::zero(); mu],
        }
    }

    pub fn mu(&self) -> usize {
        self.turns.len()
    }

    pub fn turns(&self) -> &[Turn] {
        &self.turns
    }

    pub fn is_one(&self, j: usize) -> bool {
        self.turns[j].is_zero()
    }

    /// Indices of the coordinates equal to 1.
    pub fn one_coordinates(&self) -> Vec<usize> {
        (0..self.mu()).filter(|&j| self.is_one(j)).collect()
    }

    pub fn count_ones(&self) -> usize {
        self.turns.iter().filter(|q| q.is_zero()).count()
    }

    pub fn is_base_point(&self) -> bool {
        self.count_ones() == self.mu()
    }

    pub fn is_interior(&self) -> bool {
        self.count_ones() == 0
    }

    /// Coordinate `omega_j` as a complex number.
    pub fn coord(&self, j: usize) -> Complex64 {
        unit_from_turn(self.turns[j])
    }

    pub fn coords(&self) -> Vec<Complex64> {
        self.turns.iter().map(|&q| unit_from_turn(q)).collect()
    }

    /// Principal square root `e^{i pi q_j}` of `omega_j`.
    pub fn half_coord(&self, j: usize) -> Complex64 {
        unit_from_turn(self.turns[j] / 2)
    }

    /// The complex conjugate point.
    pub fn conj(&self) -> Self {
        Self {
            turns: self.turns.iter().map(|q| reduce_turn(-q)).collect(),
        }
    }

    /// Removes coordinate `j`.
    pub fn drop_coord(&self, j: usize) -> Self {
        let mut turns = self.turns.clone();
        turns.remove(j);
        Self { turns }
    }

    /// True when every turn has a denominator that is a power of `p`.
    pub fn is_prime_power_root(&self, p: i64) -> bool {
        self.turns.iter().all(|q| {
            let mut d = *q.denom();
            while d % p == 0 {
                d /= p;
            }
            d == 1
        })
    }
}

fn reduce_turn(q: Turn) -> Turn {
    let fl = q.floor();
    let r = q - fl;
    debug_assert!(!r.is_negative());
    r
}

/// `e^{2 pi i q}` with exact values at multiples of a quarter turn.
pub fn unit_from_turn(q: Turn) -> Complex64 {
    let q = reduce_turn(q);
    let (num, den) = (*q.numer() as i128, *q.denom() as i128);
    // quarter index and remainder: q = (quad + rem/den) / 4
    let quad = (4 * num) / den;
    let rem = 4 * num - quad * den;
    let base = if rem == 0 {
        Complex64::new(1.0, 0.0)
    } else if 2 * rem == den {
        Complex64::new(std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2)
    } else if 2 * rem < den {
        let a = std::f64::consts::FRAC_PI_2 * (rem as f64) / (den as f64);
        Complex64::new(a.cos(), a.sin())
    } else {
        let a = std::f64::consts::FRAC_PI_2 * ((den - rem) as f64) / (den as f64);
        Complex64::new(a.sin(), a.cos())
    };
    match quad {
        0 => base,
        1 => Complex64::new(-base.im, base.re),
        2 => Complex64::new(-base.re, -base.im),
        _ => Complex64::new(base.im, -base.re),
    }
}

/// Parses a turn written as `k/n`, `k` or a decimal-free integer.
pub fn parse_turn(s: &str) -> Result<Turn> {
    let s = s.trim();
    let err = |reason: &str| Error::Parse {
        input: s.to_string(),
        reason: reason.to_string(),
    };
    let q = match s.split_once('/') {
        Some((a, b)) => {
            let a: i64 = a.trim().parse().map_err(|_| err("bad numerator"))?;
            let b: i64 = b.trim().parse().map_err(|_| err("bad denominator"))?;
            if b == 0 {
                return Err(err("zero denominator"));
            }
            Ratio::new(a, b)
        }
        None => Ratio::from_integer(s.parse().map_err(|_| err("expected k/n"))?),
    };
    Ok(reduce_turn(q))
}

fn format_turn(q: &Turn) -> String {
    if q.is_zero() {
        "0".to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl FromStr for TorusPoint {
    type Err = Error;

    /// Comma-separated turns, e.g. `0,1/4,1/4`, optionally in parentheses.
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        let turns = body
            .split(',')
            .map(parse_turn)
            .collect::<Result<Vec<_>>>()?;
        Self::new(turns)
    }
}

impl fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.turns.iter().map(format_turn).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl TryFrom<Vec<String>> for TorusPoint {
    type Error = Error;

    fn try_from(v: Vec<String>) -> Result<Self> {
        Self::new(v.iter().map(|s| parse_turn(s)).collect::<Result<_>>()?)
    }
}

impl From<TorusPoint> for Vec<String> {
    fn from(p: TorusPoint) -> Self {
        p.turns.iter().map(format_turn).collect()
    }
}

/// Turns of a point as CSV fields.
pub(crate) fn turn_fields(p: &TorusPoint) -> Vec<String> {
    p.turns.iter().map(format_turn).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quarter_turns_are_exact() {
        let p: TorusPoint = "0,1/4,1/2,3/4".parse().unwrap();
        let c = p.coords();
        assert_eq!(c[0], Complex64::new(1.0, 0.0));
        assert_eq!(c[1], Complex64::new(0.0, 1.0));
        assert_eq!(c[2], Complex64::new(-1.0, 0.0));
        assert_eq!(c[3], Complex64::new(0.0, -1.0));
    }

    #[test]
    fn generic_turns_match_cis() {
        for n in 1..60 {
            for k in 0..n {
                let z = unit_from_turn(Ratio::new(k, n));
                let a = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                assert!((z - Complex64::new(a.cos(), a.sin())).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn turns_reduce_and_detect_ones() {
        let p: TorusPoint = "(1, 5/4, -1/4)".parse().unwrap();
        assert!(p.is_one(0));
        assert_eq!(p.to_string(), "(0, 1/4, 3/4)");
        assert_eq!(p.conj().to_string(), "(0, 3/4, 1/4)");
        assert_eq!(p.one_coordinates(), vec![0]);
        assert!(p.is_prime_power_root(2));
        assert!(!"1/6".parse::<TorusPoint>().unwrap().is_prime_power_root(2));
    }

    #[test]
    fn half_coordinate_is_principal_root() {
        let p: TorusPoint = "3/4".parse().unwrap();
        let h = p.half_coord(0);
        assert!((h * h - p.coord(0)).norm() < 1e-15);
        assert!(h.im > 0.0);
    }

    #[test]
    fn rejects_bad_turns() {
        assert!("1/0".parse::<TorusPoint>().is_err());
        assert!("x".parse::<TorusPoint>().is_err());
    }
}
