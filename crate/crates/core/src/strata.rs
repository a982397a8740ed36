//! Elementary ideals of a module presentation over the Laurent ring and the
//! stratification of the pointed torus by their common zeros.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::UNCERTAIN_BAND;
use crate::laurent::LaurentPoly;
use crate::torus::TorusPoint;

/// Relations-by-generators matrix (`n_relations x m_generators`, `n >= m`).
#[derive(Clone, Debug, PartialEq)]
pub struct PresentationMatrix {
    mu: usize,
    entries: Vec<Vec<LaurentPoly>>,
    m_generators: usize,
}

impl PresentationMatrix {
    pub fn new(mu: usize, entries: Vec<Vec<LaurentPoly>>) -> Result<Self> {
        let n = entries.len();
        let m = entries.first().map_or(0, Vec::len);
        if entries.iter().any(|r| r.len() != m) {
            return Err(Error::schema("entries", "ragged presentation matrix"));
        }
        if n < m {
            return Err(Error::schema(
                "n_relations",
                format!("{n} relations for {m} generators; need n >= m"),
            ));
        }
        for (i, row) in entries.iter().enumerate() {
            for (j, p) in row.iter().enumerate() {
                if p.mu() != mu || p.is_half_step() {
                    return Err(Error::schema(
                        format!("entries[{i}][{j}]"),
                        format!("expected a polynomial in {mu} variables"),
                    ));
                }
            }
        }
        Ok(Self {
            mu,
            entries,
            m_generators: m,
        })
    }

    pub fn mu(&self) -> usize {
        self.mu
    }

    pub fn n_relations(&self) -> usize {
        self.entries.len()
    }

    pub fn m_generators(&self) -> usize {
        self.m_generators
    }

    pub fn entry(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i][j]
    }

    /// Determinant of the submatrix on `rows x cols` (same length).
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> LaurentPoly {
        assert_eq!(rows.len(), cols.len());
        let mut memo = HashMap::new();
        self.laplace(rows, cols, 0, &mut memo)
    }

    /// Laplace expansion along `rows` in order; `used` marks consumed columns.
    fn laplace(&self, rows: &[usize], cols: &[usize], used: u64, memo: &mut HashMap<u64, LaurentPoly>) -> LaurentPoly {
        let depth = used.count_ones() as usize;
        if depth == rows.len() {
            return LaurentPoly::one(self.mu);
        }
        if let Some(v) = memo.get(&used) {
            return v.clone();
        }
        let row = rows[depth];
        let mut acc = LaurentPoly::zero(self.mu);
        let mut sign_pos = 0;
        for (k, &c) in cols.iter().enumerate() {
            if used >> k & 1 == 1 {
                continue;
            }
            let entry = &self.entries[row][c];
            if !entry.is_zero() {
                let sub = self.laplace(rows, cols, used | 1 << k, memo);
                let term = entry * &sub;
                acc = if sign_pos % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            sign_pos += 1;
        }
        memo.insert(used, acc.clone());
        acc
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: PresentationFile =
            serde_json::from_str(text).map_err(|e| Error::schema("presentation", e.to_string()))?;
        if file.entries.len() != file.n_relations {
            return Err(Error::schema("n_relations", "does not match the number of rows"));
        }
        let entries = file
            .entries
            .iter()
            .enumerate()
            .map(|(i, row)| {
                if row.len() != file.m_generators {
                    return Err(Error::schema(
                        format!("entries[{i}]"),
                        format!("expected {} columns", file.m_generators),
                    ));
                }
                row.iter()
                    .enumerate()
                    .map(|(j, s)| {
                        LaurentPoly::parse(s, file.mu)
                            .map_err(|e| Error::schema(format!("entries[{i}][{j}]"), e.to_string()))
                    })
                    .collect()
            })
            .collect::<Result<Vec<Vec<_>>>>()?;
        if file.m_generators == 0 {
            return Err(Error::schema("m_generators", "need at least one generator"));
        }
        Self::new(file.mu, entries)
    }

    pub fn to_json(&self) -> String {
        let file = PresentationFile {
            mu: self.mu,
            n_relations: self.n_relations(),
            m_generators: self.m_generators,
            entries: self
                .entries
                .iter()
                .map(|r| r.iter().map(ToString::to_string).collect())
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("presentation serializes")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PresentationFile {
    mu: usize,
    n_relations: usize,
    m_generators: usize,
    entries: Vec<Vec<String>>,
}

/// All `k`-element subsets of `0..n` in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Generators of the `r`-th elementary ideal: the `(m - r + 1)`-minors, with
/// `E_r = 0` for `r <= 0` and `E_r = (1)` for `r > m`. Generators are unit
/// normalized and deduplicated; an ideal with no nonzero minor is `{0}`.
pub fn elementary_ideal(p: &PresentationMatrix, r: i64) -> Vec<LaurentPoly> {
    let m = p.m_generators as i64;
    if r <= 0 {
        return vec![LaurentPoly::zero(p.mu)];
    }
    if r > m {
        return vec![LaurentPoly::one(p.mu)];
    }
    let k = (m - r + 1) as usize;
    if k > p.n_relations().min(p.m_generators) {
        return vec![LaurentPoly::zero(p.mu)];
    }
    let col_sets = subsets(p.m_generators, k);
    let mut seen = BTreeSet::new();
    let mut gens = Vec::new();
    for rows in subsets(p.n_relations(), k) {
        for cols in &col_sets {
            let d = p.minor(&rows, cols);
            if d.is_zero() {
                continue;
            }
            let n = d.unit_normalize().into_poly();
            if seen.insert(n.to_string()) {
                gens.push(n);
            }
        }
    }
    if gens.is_empty() {
        gens.push(LaurentPoly::zero(p.mu));
    }
    gens
}

/// Unit-normalized gcd of the first elementary ideal (0 if the ideal is zero).
pub fn first_ideal_gcd(p: &PresentationMatrix) -> Result<LaurentPoly> {
    let gens = elementary_ideal(p, 1);
    let mut g = LaurentPoly::zero(p.mu);
    for q in &gens {
        g = g.gcd(q)?;
        if g.as_constant().is_some_and(|c| c == 1.into()) {
            break;
        }
    }
    Ok(g.unit_normalize().into_poly())
}

/// Largest ratio `|g(omega)| / (1 + sum|coeff(g)|)` over the generators.
fn max_relative_value(gens: &[LaurentPoly], omega: &TorusPoint) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for g in gens {
        let v = g.eval(omega)?.norm() / (1.0 + g.coeff_mass());
        worst = worst.max(v);
    }
    Ok(worst)
}

/// True iff every generator satisfies `|g(omega)| <= tau_poly (1 + sum|coeff(g)|)`.
pub fn vanishes_at(gens: &[LaurentPoly], omega: &TorusPoint, tau_poly: f64) -> Result<bool> {
    Ok(max_relative_value(gens, omega)? <= tau_poly)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum StratumFlag {
    /// More than two coordinates equal 1; the nullity prediction does not apply.
    MoreThanTwoOnes,
    /// Some vanishing decision fell inside the uncertainty band.
    Uncertain,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StratumReport {
    pub point: TorusPoint,
    pub index: usize,
    /// `Some(index)` when at most two coordinates equal 1.
    pub predicted_nullity: Option<usize>,
    pub flags: Vec<StratumFlag>,
}

/// The elementary ideals `E_0, ..., E_{m+1}` of a presentation, computed once.
#[derive(Clone, Debug)]
pub struct Stratification {
    mu: usize,
    ideals: Vec<Vec<LaurentPoly>>,
}

impl Stratification {
    pub fn new(p: &PresentationMatrix) -> Self {
        let ideals = (0..=p.m_generators as i64 + 1)
            .map(|r| elementary_ideal(p, r))
            .collect();
        Self { mu: p.mu, ideals }
    }

    pub fn ideal(&self, r: usize) -> &[LaurentPoly] {
        let last = self.ideals.len() - 1;
        &self.ideals[r.min(last)]
    }

    /// Largest `r` with `omega` in `Sigma_r`.
    pub fn classify(&self, omega: &TorusPoint, tau_poly: f64) -> Result<StratumReport> {
        if omega.mu() != self.mu {
            return Err(Error::invalid(format!(
                "point has {} coordinates, presentation has {} variables",
                omega.mu(),
                self.mu
            )));
        }
        if omega.is_base_point() {
            return Err(Error::BasePoint);
        }
        let mut index = 0;
        let mut uncertain = false;
        for (r, gens) in self.ideals.iter().enumerate() {
            let v = max_relative_value(gens, omega)?;
            if v > tau_poly / UNCERTAIN_BAND && v < tau_poly * UNCERTAIN_BAND {
                uncertain = true;
            }
            if v <= tau_poly {
                index = r;
            }
        }
        let mut flags = Vec::new();
        let predicted_nullity = if omega.count_ones() <= 2 {
            Some(index)
        } else {
            flags.push(StratumFlag::MoreThanTwoOnes);
            None
        };
        if uncertain {
            flags.push(StratumFlag::Uncertain);
        }
        Ok(StratumReport {
            point: omega.clone(),
            index,
            predicted_nullity,
            flags,
        })
    }
}

pub fn stratum_index(p: &PresentationMatrix, omega: &TorusPoint, tau_poly: f64) -> Result<StratumReport> {
    Stratification::new(p).classify(omega, tau_poly)
}

/// Koszul presentation of the augmentation ideal of `Z[Z^mu]`: one relation
/// `(t_i - 1) e_j - (t_j - 1) e_i` for each pair `i < j`, on `mu` generators.
pub fn augmentation_presentation(mu: usize) -> Result<PresentationMatrix> {
    let mut rows = Vec::new();
    for i in 0..mu {
        for j in (i + 1)..mu {
            let mut row = vec![LaurentPoly::zero(mu); mu];
            row[j] = LaurentPoly::var_minus_one(mu, i);
            row[i] = -LaurentPoly::var_minus_one(mu, j);
            rows.push(row);
        }
    }
    PresentationMatrix::new(mu, rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, mu: usize) -> LaurentPoly {
        LaurentPoly::parse(s, mu).unwrap()
    }

    fn column(mu: usize, polys: &[&str]) -> PresentationMatrix {
        PresentationMatrix::new(mu, polys.iter().map(|s| vec![p(s, mu)]).collect()).unwrap()
    }

    #[test]
    fn elementary_ideal_examples() {
        let pm = column(2, &["t1 - 1", "t2 - 1"]);
        assert_eq!(elementary_ideal(&pm, 1), vec![p("t1-1", 2), p("t2-1", 2)]);
        assert_eq!(elementary_ideal(&pm, 2), vec![LaurentPoly::one(2)]);
        assert_eq!(elementary_ideal(&pm, 0), vec![LaurentPoly::zero(2)]);
        assert_eq!(elementary_ideal(&pm, -3), vec![LaurentPoly::zero(2)]);
    }

    #[test]
    fn minors_are_determinants() {
        let m = PresentationMatrix::new(
            1,
            vec![
                vec![p("t", 1), p("1", 1), p("0", 1)],
                vec![p("2", 1), p("t^-1", 1), p("1", 1)],
                vec![p("0", 1), p("3", 1), p("t", 1)],
            ],
        )
        .unwrap();
        // t(t^-1 t - 3) - 1(2t - 0) = -4t
        assert_eq!(m.minor(&[0, 1, 2], &[0, 1, 2]), p("-4*t", 1));
        assert_eq!(m.minor(&[0, 2], &[1, 2]), p("t", 1));
    }

    #[test]
    fn first_ideal_gcd_examples() {
        assert_eq!(first_ideal_gcd(&column(2, &["t1 - 1", "t2 - 1"])).unwrap(), LaurentPoly::one(2));
        let a = p("t-1", 1) * p("t+1", 1);
        let b = p("t-1", 1) * p("t^3", 1);
        let pm = PresentationMatrix::new(1, vec![vec![a.clone()], vec![b.clone()]]).unwrap();
        let g = first_ideal_gcd(&pm).unwrap();
        assert_eq!(g, p("t - 1", 1));
        assert!(a.exact_div(&g).is_ok() && b.exact_div(&g).is_ok());
        assert!(a.exact_div(&(&g * &p("t+1", 1))).is_ok());
        assert!(b.exact_div(&(&g * &p("t+1", 1))).is_err());
        let single = PresentationMatrix::new(2, vec![vec![p("-t1^-1*t2 + 3", 2)]]).unwrap();
        assert_eq!(
            first_ideal_gcd(&single).unwrap(),
            p("-t1^-1*t2 + 3", 2).unit_normalize().into_poly()
        );
    }

    #[test]
    fn vanishing_examples() {
        let gens = [p("t1-1", 2), p("t2-1", 2)];
        assert!(vanishes_at(&gens, &"0,0".parse().unwrap(), 1e-8).unwrap());
        assert!(!vanishes_at(&gens, &"0,1/2".parse().unwrap(), 1e-8).unwrap());
        assert!(vanishes_at(&[LaurentPoly::zero(2)], &"1/7,3/5".parse().unwrap(), 1e-8).unwrap());
    }

    #[test]
    fn stratum_examples() {
        let pm = column(2, &["t1 - 1", "t2 - 1"]);
        let r = stratum_index(&pm, &"1/2,1/2".parse().unwrap(), 1e-8).unwrap();
        assert_eq!((r.index, r.predicted_nullity), (0, Some(0)));
        assert_eq!(stratum_index(&pm, &"0,0".parse().unwrap(), 1e-8), Err(Error::BasePoint));

        let aug = augmentation_presentation(4).unwrap();
        assert_eq!((aug.n_relations(), aug.m_generators()), (6, 4));
        let s = Stratification::new(&aug);
        assert_eq!(s.ideal(1), &[LaurentPoly::zero(4)]);
        for w in ["1/3,2/5,1/7,5/6", "0,1/2,1/4,0", "0,0,1/3,1/2"] {
            let r = s.classify(&w.parse().unwrap(), 1e-8).unwrap();
            assert_eq!((r.index, r.predicted_nullity), (1, Some(1)), "{w}");
        }
        let r = s.classify(&"0,0,0,1/3".parse().unwrap(), 1e-8).unwrap();
        assert_eq!(r.index, 1);
        assert_eq!(r.predicted_nullity, None);
        assert!(r.flags.contains(&StratumFlag::MoreThanTwoOnes));
    }

    #[test]
    fn presentation_json_round_trip() {
        let aug = augmentation_presentation(4).unwrap();
        assert_eq!(PresentationMatrix::from_json(&aug.to_json()).unwrap(), aug);
        let bad = r#"{"mu":1,"n_relations":1,"m_generators":2,"entries":[["t","1"]]}"#;
        assert!(matches!(PresentationMatrix::from_json(bad), Err(Error::Schema { key, .. }) if key == "n_relations"));
        let bad = r#"{"mu":1,"n_relations":1,"m_generators":1,"entries":[["t2"]]}"#;
        assert!(matches!(PresentationMatrix::from_json(bad), Err(Error::Schema { key, .. }) if key == "entries[0][0]"));
    }
}
