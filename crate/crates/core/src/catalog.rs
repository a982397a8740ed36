//! Built-in example links with their expected invariants.

use num_rational::Ratio;

use crate::clink::{components_with_colors, seifert_from_strings, ColoredLinkData, IntMatrix, SlopeData};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::strata::{augmentation_presentation, PresentationMatrix};
use crate::torus::{unit_from_turn, TorusPoint, Turn};

/// Bumped whenever an entry or expectation changes.
pub const CATALOG_VERSION: u32 = 1;

const KEYS: [&str; 9] = ["hopf1", "hopf2", "t24", "whitehead", "borromean", "l(1)", "l(2)", "l(3)", "aug4"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EntryKind {
    /// Generalized Seifert matrices available.
    Full,
    /// Only polynomials and linking numbers.
    PolynomialOnly,
    /// Only a presentation matrix of the module.
    PresentationOnly,
}

/// Where an expected value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Stated in the literature for this example.
    Literature,
    /// Computed from literature values by a checked substitution.
    Derived,
}

/// Closed-form signature laws.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SignatureLaw {
    Constant(i64),
    /// `-sgn Re((w1 - 1)(w2 - 1))` away from the faces.
    TorusLink24,
    /// `sgn Re((1 - w1)(1 - conj w2))` on the face where the first coordinate is 1,
    /// `w1, w2` being the remaining coordinates.
    BrunnianFace,
}

impl SignatureLaw {
    /// Expected signature at `omega`, if the law covers it. Exact in the turns.
    pub fn at(&self, omega: &TorusPoint) -> Option<i64> {
        let q = omega.turns();
        match self {
            SignatureLaw::Constant(s) => Some(*s),
            SignatureLaw::TorusLink24 => {
                (q.len() == 2 && omega.is_interior()).then(|| sign_cos_pi(q[0] + q[1]))
            }
            SignatureLaw::BrunnianFace => (q.len() == 3
                && omega.one_coordinates() == [0])
                .then(|| sign_cos_pi(q[1] - q[2])),
        }
    }
}

/// Sign of `cos(pi r)`.
fn sign_cos_pi(r: Turn) -> i64 {
    let two = Ratio::from_integer(2);
    let mut r = ((r % two) + two) % two;
    if r > Ratio::from_integer(1) {
        r = two - r;
    }
    let half = Ratio::new(1, 2);
    if r < half {
        1
    } else if r == half {
        0
    } else {
        -1
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expected {
    /// Equal up to units.
    Polynomial(LaurentPoly),
    /// Equal exactly, half-step ring.
    HalfStep(LaurentPoly),
    Signature(SignatureLaw),
    Nullity(usize),
    /// `2n Re((1 - w1)(1 - conj w2))` for the slope data of `l(n)`.
    BrunnianSlope(i64),
    StratumIndex(usize),
    Nu(Vec<i64>),
}

impl Expected {
    pub fn slope_at(&self, omega: &TorusPoint) -> Option<f64> {
        let Expected::BrunnianSlope(n) = self else {
            return None;
        };
        let q = omega.turns();
        if q.len() != 2 {
            return None;
        }
        let (w1, w2) = (unit_from_turn(q[0]), unit_from_turn(q[1]));
        Some(2.0 * *n as f64 * ((1.0 - w1) * (1.0 - w2.conj())).re)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Expectation {
    pub name: &'static str,
    pub value: Expected,
    pub provenance: Provenance,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub key: String,
    pub kind: EntryKind,
    pub link: Option<ColoredLinkData>,
    pub slope: Option<SlopeData>,
    pub presentation: Option<PresentationMatrix>,
    pub expected: Vec<Expectation>,
}

impl CatalogEntry {
    pub fn expectation(&self, name: &str) -> Option<&Expected> {
        self.expected.iter().find(|e| e.name == name).map(|e| &e.value)
    }

    /// Key usable as a file name stem: `l(2)` becomes `l2`.
    pub fn file_stem(&self) -> String {
        self.key.chars().filter(|c| c.is_ascii_alphanumeric() || *c == '_' || *c == '-').collect()
    }
}

pub fn list() -> Vec<&'static str> {
    KEYS.to_vec()
}

/// Entry for `key`; besides the listed keys any `l(n)` with `1 <= n <= 1000` is accepted.
pub fn get(key: &str) -> Result<CatalogEntry> {
    let key = key.trim();
    match key {
        "hopf1" => hopf1(),
        "hopf2" => hopf2(),
        "t24" => t24(),
        "whitehead" => whitehead(),
        "borromean" => borromean(),
        "aug4" => aug4(),
        _ => {
            let n = key
                .strip_prefix("l(")
                .and_then(|s| s.strip_suffix(')'))
                .and_then(|s| s.trim().parse::<i64>().ok())
                .filter(|n| (1..=1000).contains(n))
                .ok_or_else(|| Error::UnknownKey(key.to_string()))?;
            brunnian(n)
        }
    }
}

fn poly(s: &str, mu: usize) -> LaurentPoly {
    LaurentPoly::parse(s, mu).expect("catalog polynomial")
}

fn expect(name: &'static str, value: Expected, provenance: Provenance) -> Expectation {
    Expectation { name, value, provenance }
}

fn full(key: &str, link: ColoredLinkData, expected: Vec<Expectation>) -> CatalogEntry {
    CatalogEntry {
        key: key.to_string(),
        kind: EntryKind::Full,
        link: Some(link),
        slope: None,
        presentation: None,
        expected,
    }
}

fn lk2(l: i64) -> IntMatrix {
    vec![vec![0, l], vec![l, 0]]
}

fn hopf1() -> Result<CatalogEntry> {
    let seifert = seifert_from_strings(1, 1, &[("+", vec![vec![-1]])])?;
    let link = ColoredLinkData::new("hopf1", 1, components_with_colors(&[1, 1]), lk2(1), Some(seifert))?
        .with_alexander(poly("t - 1", 1))?;
    use Provenance::*;
    Ok(full(
        "hopf1",
        link,
        vec![
            expect("signature", Expected::Signature(SignatureLaw::Constant(-1)), Literature),
            expect("alexander", Expected::Polynomial(poly("t - 1", 1)), Literature),
            expect("hosokawa", Expected::Polynomial(LaurentPoly::one(1)), Literature),
        ],
    ))
}

fn hopf2() -> Result<CatalogEntry> {
    let seifert = seifert_from_strings(2, 0, &[("++", vec![]), ("+-", vec![])])?;
    let link = ColoredLinkData::new("hopf2", 2, components_with_colors(&[1, 2]), lk2(1), Some(seifert))?
        .with_alexander(LaurentPoly::one(2))?;
    use Provenance::*;
    Ok(full(
        "hopf2",
        link,
        vec![
            expect("signature", Expected::Signature(SignatureLaw::Constant(0)), Literature),
            expect("nullity", Expected::Nullity(0), Literature),
            expect("hosokawa", Expected::Polynomial(LaurentPoly::one(2)), Literature),
        ],
    ))
}

fn t24() -> Result<CatalogEntry> {
    let seifert = seifert_from_strings(2, 1, &[("++", vec![vec![-1]]), ("+-", vec![vec![0]])])?;
    let link = ColoredLinkData::new("t24", 2, components_with_colors(&[1, 2]), lk2(2), Some(seifert))?
        .with_alexander(poly("t1*t2 + 1", 2))?;
    use Provenance::*;
    Ok(full(
        "t24",
        link,
        vec![
            expect("signature", Expected::Signature(SignatureLaw::TorusLink24), Literature),
            expect("alexander", Expected::Polynomial(poly("t1*t2 + 1", 2)), Literature),
            expect("hosokawa", Expected::Polynomial(poly("(t1 - 1)*(t2 - 1)*(t1*t2 + 1)", 2)), Literature),
            expect("nu", Expected::Nu(vec![1, 1]), Literature),
        ],
    ))
}

fn polynomial_only(key: &str, mu: usize, delta: &str, sigma: i64) -> Result<CatalogEntry> {
    let link = ColoredLinkData::new(key, mu, components_with_colors(&(1..=mu).collect::<Vec<_>>()), vec![vec![0; mu]; mu], None)?
        .with_alexander(poly(delta, mu))?;
    use Provenance::*;
    Ok(CatalogEntry {
        key: key.to_string(),
        kind: EntryKind::PolynomialOnly,
        link: Some(link),
        slope: None,
        presentation: None,
        expected: vec![
            expect("signature", Expected::Signature(SignatureLaw::Constant(sigma)), Literature),
            expect("hosokawa", Expected::Polynomial(LaurentPoly::one(mu)), Literature),
            expect("nu", Expected::Nu(vec![-1; mu]), Literature),
        ],
    })
}

fn whitehead() -> Result<CatalogEntry> {
    polynomial_only("whitehead", 2, "(t1 - 1)*(t2 - 1)", 1)
}

fn borromean() -> Result<CatalogEntry> {
    polynomial_only("borromean", 3, "(t1 - 1)*(t2 - 1)*(t3 - 1)", 0)
}

/// `t_i - t_i^{-1}` read in the half-step ring, i.e. `t_i^{1/2} - t_i^{-1/2}`.
fn half_difference(mu: usize, i: usize) -> LaurentPoly {
    let mut e = vec![0; mu];
    e[i] = 1;
    let up = LaurentPoly::monomial(mu, &e, 1);
    e[i] = -1;
    (up - LaurentPoly::monomial(mu, &e, 1)).into_half_step()
}

/// The three-component Brunnian family with clasp weight `n`.
fn brunnian(n: i64) -> Result<CatalogEntry> {
    let key = format!("l({n})");
    let a = vec![vec![0, n], vec![n, 0]];
    let given: Vec<(&str, IntMatrix)> = ["+++", "++-", "+-+", "+--"].iter().map(|&e| (e, a.clone())).collect();
    let n2 = -(n * n);
    let conway = half_difference(3, 0).pow(3)
        * half_difference(3, 1)
        * half_difference(3, 2)
        * LaurentPoly::constant(3, n2).into_half_step();
    let link = ColoredLinkData::new(&key, 3, components_with_colors(&[1, 2, 3]), vec![vec![0; 3]; 3], Some(seifert_from_strings(3, 2, &given)?))?
        .with_conway(conway)?;

    let app = vec![vec![0, 0, n, 0], vec![1, 0, 0, 0], vec![n, 0, 0, 0], vec![0, 0, 1, 0]];
    let apm = vec![vec![0, 0, n, 0], vec![1, 0, 0, 0], vec![n, 0, 0, 1], vec![0, 0, 0, 0]];
    let base = ColoredLinkData::new(
        format!("{key}'"),
        2,
        components_with_colors(&[1, 2]),
        vec![vec![0; 2]; 2],
        Some(seifert_from_strings(2, 4, &[("++", app), ("+-", apm)])?),
    )?;
    let slope = SlopeData::new(base, vec![0, 1, 0, 1], 1)?;

    let normalized = half_difference(3, 0).pow(2) * LaurentPoly::constant(3, n2).into_half_step();
    use Provenance::*;
    Ok(CatalogEntry {
        key,
        kind: EntryKind::Full,
        link: Some(link),
        slope: Some(slope),
        presentation: None,
        expected: vec![
            expect("signature", Expected::Signature(SignatureLaw::Constant(0)), Literature),
            expect("nullity", Expected::Nullity(0), Literature),
            expect("face_signature", Expected::Signature(SignatureLaw::BrunnianFace), Literature),
            expect("slope", Expected::BrunnianSlope(n), Literature),
            expect("hosokawa_normalized", Expected::HalfStep(normalized), Derived),
            expect("nu", Expected::Nu(vec![-1, -1, -1]), Literature),
        ],
    })
}

fn aug4() -> Result<CatalogEntry> {
    Ok(CatalogEntry {
        key: "aug4".to_string(),
        kind: EntryKind::PresentationOnly,
        link: None,
        slope: None,
        presentation: Some(augmentation_presentation(4)?),
        expected: vec![expect("stratum_index", Expected::StratumIndex(1), Provenance::Literature)],
    })
}

/// `det(A - t A^T)` for a one-variable Seifert matrix, by cofactor expansion.
pub fn alexander_from_seifert(a: &IntMatrix) -> LaurentPoly {
    let g = a.len();
    let t = LaurentPoly::var(1, 0);
    let m: Vec<Vec<LaurentPoly>> = (0..g)
        .map(|i| {
            (0..g)
                .map(|j| LaurentPoly::constant(1, a[i][j]) - &t * &LaurentPoly::constant(1, a[j][i]))
                .collect()
        })
        .collect();
    det(&m)
}

fn det(m: &[Vec<LaurentPoly>]) -> LaurentPoly {
    if m.is_empty() {
        return LaurentPoly::one(1);
    }
    let mut acc = LaurentPoly::zero(1);
    for (j, x) in m[0].iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let minor: Vec<Vec<LaurentPoly>> = m[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, v)| v.clone()).collect())
            .collect();
        let term = x * &det(&minor);
        acc = if j % 2 == 0 { acc + term } else { acc - term };
    }
    acc
}
