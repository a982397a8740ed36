//! Torus point generators, signature maps, piecewise-constancy checks and
//! concordance reports.

use std::fmt::Write as _;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clink::{ColoredLinkData, SlopeData};
use crate::error::{Error, Result};
use crate::hermitian::inertia_scaled;
use crate::invariants::{face_signature, signature_at_full_one};
use crate::laurent::LaurentPoly;
use crate::torus::{turn_fields, TorusPoint};

/// All points with turns `k_j / n`, in lexicographic order of `(k_1, ..., k_mu)`.
/// Points with some `k_j = 0` are included only when `include_faces` is set.
pub fn grid(n: i64, mu: usize, include_faces: bool) -> Result<impl Iterator<Item = TorusPoint>> {
    if n < 2 {
        return Err(Error::invalid("grid size must be at least 2"));
    }
    if mu == 0 {
        return Err(Error::invalid("mu must be positive"));
    }
    let lo = if include_faces { 0 } else { 1 };
    Ok(Odometer::new(mu, lo, n).map(move |ks| TorusPoint::from_ks(&ks, n).expect("positive denominator")))
}

/// Points whose coordinates are all `p^d`-th roots of unity (including the base point).
pub fn tbang_points(p: i64, d: u32, mu: usize) -> Result<impl Iterator<Item = TorusPoint>> {
    if p < 2 || (2..p).take_while(|k| k * k <= p).any(|k| p % k == 0) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    if d == 0 {
        return Err(Error::invalid("depth must be at least 1"));
    }
    let n = p
        .checked_pow(d)
        .filter(|&n| n <= 1 << 20)
        .ok_or_else(|| Error::invalid("p^d is too large"))?;
    grid(n, mu, true)
}

struct Odometer {
    cur: Option<Vec<i64>>,
    lo: i64,
    hi: i64,
}

impl Odometer {
    fn new(len: usize, lo: i64, hi: i64) -> Self {
        Self {
            cur: (lo < hi).then(|| vec![lo; len]),
            lo,
            hi,
        }
    }
}

impl Iterator for Odometer {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        let out = self.cur.clone()?;
        let cur = self.cur.as_mut().unwrap();
        let mut i = cur.len();
        loop {
            if i == 0 {
                self.cur = None;
                break;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < self.hi {
                break;
            }
            cur[i] = self.lo;
        }
        Some(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleSource {
    /// No coordinate equals 1; inertia of `H(omega)`.
    Interior,
    /// One coordinate equals 1; sublink signature plus slope sign.
    Face,
    /// One-colored link at `omega = 1`; signature of the linking matrix.
    Linking,
    Skipped,
}

impl SampleSource {
    pub fn as_str(self) -> &'static str {
        match self {
            SampleSource::Interior => "interior",
            SampleSource::Face => "face",
            SampleSource::Linking => "linking",
            SampleSource::Skipped => "skipped",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub point: TorusPoint,
    pub sigma: Option<i64>,
    /// Only reported at interior points.
    pub eta: Option<usize>,
    pub source: SampleSource,
    pub certified: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl SampleRecord {
    fn skipped(point: &TorusPoint, note: impl Into<String>) -> Self {
        Self {
            point: point.clone(),
            sigma: None,
            eta: None,
            source: SampleSource::Skipped,
            certified: false,
            note: Some(note.into()),
        }
    }

    pub fn is_evaluated(&self) -> bool {
        self.source != SampleSource::Skipped
    }

    /// Evaluated but inside the uncertainty band.
    pub fn is_uncertain(&self) -> bool {
        self.is_evaluated() && !self.certified
    }

    /// Evaluated and certified.
    pub fn is_trusted(&self) -> bool {
        self.is_evaluated() && self.certified
    }
}

/// Signature (and nullity where defined) at a single point.
pub fn evaluate_point(
    link: &ColoredLinkData,
    slope: Option<&SlopeData>,
    omega: &TorusPoint,
    tau: f64,
) -> SampleRecord {
    match try_evaluate(link, slope, omega, tau) {
        Ok(r) => r,
        Err(e) => SampleRecord::skipped(omega, e.to_string()),
    }
}

fn try_evaluate(
    link: &ColoredLinkData,
    slope: Option<&SlopeData>,
    omega: &TorusPoint,
    tau: f64,
) -> Result<SampleRecord> {
    if omega.mu() != link.mu() {
        return Err(Error::invalid("point arity differs from the color count"));
    }
    let ones = omega.one_coordinates();
    match ones.len() {
        0 => {
            let (h, scale) = link.hermitian_with_scale(omega)?;
            let r = inertia_scaled(&h, tau, scale)?;
            Ok(SampleRecord {
                point: omega.clone(),
                sigma: Some(r.signature),
                eta: Some(r.nullity),
                source: SampleSource::Interior,
                certified: r.certified,
                note: None,
            })
        }
        1 if link.mu() == 1 => Ok(SampleRecord {
            point: omega.clone(),
            sigma: Some(signature_at_full_one(link)?),
            eta: None,
            source: SampleSource::Linking,
            certified: true,
            note: None,
        }),
        1 => {
            let data = slope.ok_or_else(|| Error::Precondition("face point without slope data".into()))?;
            if ones[0] + 1 != data.distinguished_color {
                return Err(Error::Precondition(format!(
                    "coordinate {} is not the distinguished color",
                    ones[0] + 1
                )));
            }
            let f = face_signature(link, data, omega, tau)?;
            Ok(SampleRecord {
                point: omega.clone(),
                sigma: Some(f.sigma),
                eta: None,
                source: SampleSource::Face,
                certified: f.certified,
                note: f.infinite_slope.then(|| "infinite slope counted as 0".to_string()),
            })
        }
        _ => Err(Error::Precondition("two or more coordinates equal 1".into())),
    }
}

/// Evaluates every point; the result is in input order regardless of the
/// number of worker threads.
pub fn sample_map(
    link: &ColoredLinkData,
    points: &[TorusPoint],
    slope: Option<&SlopeData>,
    tau: f64,
) -> Vec<SampleRecord> {
    points
        .par_iter()
        .map(|w| evaluate_point(link, slope, w, tau))
        .collect()
}

/// Adjacent grid samples with different signatures although the Hosokawa
/// polynomial is nonzero at both and at the midpoint.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub a: TorusPoint,
    pub b: TorusPoint,
    pub sigma_a: i64,
    pub sigma_b: i64,
}

/// Checks piecewise constancy of the signature away from the zeros of `hosokawa`
/// on the grid of size `n` (faces included where computable). Neighbours are
/// taken along each axis, wrapping around the circle.
pub fn constancy_check(
    link: &ColoredLinkData,
    hosokawa: &LaurentPoly,
    n: i64,
    slope: Option<&SlopeData>,
    tau: f64,
    tau_poly: f64,
) -> Result<Vec<Violation>> {
    let mu = link.mu();
    if hosokawa.mu() != mu {
        return Err(Error::invalid("Hosokawa polynomial arity differs from the color count"));
    }
    let points: Vec<TorusPoint> = grid(n, mu, true)?.collect();
    let records = sample_map(link, &points, slope, tau);
    let threshold = 10.0 * tau_poly * (1.0 + hosokawa.coeff_mass());
    let nonzero = |w: &TorusPoint| -> Result<bool> { Ok(hosokawa.eval(w)?.norm() > threshold) };
    let index = |ks: &[i64]| ks.iter().fold(0usize, |acc, &k| acc * n as usize + k as usize);
    let mut out = Vec::new();
    for (i, rec) in records.iter().enumerate() {
        let Some(sa) = rec.sigma.filter(|_| rec.is_trusted()) else {
            continue;
        };
        let ks: Vec<i64> = rec
            .point
            .turns()
            .iter()
            .map(|q| (q * n).to_integer())
            .collect();
        debug_assert_eq!(index(&ks), i);
        for axis in 0..mu {
            let mut nb = ks.clone();
            nb[axis] = (nb[axis] + 1) % n;
            let other = &records[index(&nb)];
            let Some(sb) = other.sigma.filter(|_| other.is_trusted()) else {
                continue;
            };
            let mut mid: Vec<Ratio<i64>> = rec.point.turns().to_vec();
            mid[axis] = Ratio::new(2 * ks[axis] + 1, 2 * n);
            let mid = TorusPoint::new(mid)?;
            if !(nonzero(&rec.point)? && nonzero(&other.point)? && nonzero(&mid)?) {
                continue;
            }
            if sa != sb {
                out.push(Violation {
                    a: rec.point.clone(),
                    b: other.point.clone(),
                    sigma_a: sa,
                    sigma_b: sb,
                });
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Obstructed,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub point: TorusPoint,
    pub sigma: i64,
    /// For interior witnesses: whether the mirror image gives `-sigma` there.
    pub mirror_consistent: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcordanceReport {
    pub link: String,
    pub prime: i64,
    pub depth: u32,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    pub evaluated: usize,
    pub skipped: usize,
    pub uncertain: usize,
}

/// Looks for a nonzero certified signature at points whose coordinates are
/// `p^d`-th roots of unity. At such points the signature is a concordance
/// invariant and the mirror image has the opposite signature, so any nonzero
/// value shows that the link is not concordant to its mirror image.
pub fn concordance_report(
    link: &ColoredLinkData,
    slope: Option<&SlopeData>,
    p: i64,
    d: u32,
    tau: f64,
) -> Result<ConcordanceReport> {
    let points: Vec<TorusPoint> = tbang_points(p, d, link.mu())?
        .filter(|w| !(w.is_base_point() && link.mu() > 1))
        .collect();
    let records = sample_map(link, &points, slope, tau);
    let mirror = link.has_seifert().then(|| link.mirror());
    let mut witnesses = Vec::new();
    for r in &records {
        let Some(s) = r.sigma.filter(|&s| s != 0 && r.is_trusted()) else {
            continue;
        };
        let mirror_consistent = match (&mirror, r.source) {
            (Some(m), SampleSource::Interior) => {
                let mr = evaluate_point(m, None, &r.point, tau);
                Some(mr.sigma == Some(-s) && mr.eta == r.eta)
            }
            _ => None,
        };
        witnesses.push(Witness {
            point: r.point.clone(),
            sigma: s,
            mirror_consistent,
        });
    }
    Ok(ConcordanceReport {
        link: link.name.clone(),
        prime: p,
        depth: d,
        verdict: if witnesses.is_empty() {
            Verdict::Inconclusive
        } else {
            Verdict::Obstructed
        },
        witnesses,
        evaluated: records.iter().filter(|r| r.is_evaluated()).count(),
        skipped: records.iter().filter(|r| !r.is_evaluated()).count(),
        uncertain: records.iter().filter(|r| r.is_uncertain()).count(),
    })
}

/// CSV with header `q1,...,qmu,sigma,eta,source,certified`; missing values are `NA`.
pub fn records_to_csv(records: &[SampleRecord], mu: usize) -> String {
    let mut out = String::new();
    let header: Vec<String> = (1..=mu).map(|j| format!("q{j}")).collect();
    writeln!(out, "{},sigma,eta,source,certified", header.join(",")).unwrap();
    for r in records {
        let na = || "NA".to_string();
        writeln!(
            out,
            "{},{},{},{},{}",
            turn_fields(&r.point).join(","),
            r.sigma.map_or_else(na, |s| s.to_string()),
            r.eta.map_or_else(na, |e| e.to_string()),
            r.source.as_str(),
            r.certified
        )
        .unwrap();
    }
    out
}

pub fn records_to_json(records: &[SampleRecord]) -> String {
    serde_json::to_string_pretty(records).expect("records serialize")
}

pub fn records_from_json(text: &str) -> Result<Vec<SampleRecord>> {
    serde_json::from_str(text).map_err(|e| Error::schema("records", e.to_string()))
}

pub type Rgb = [u8; 3];

pub const UNCERTAIN_GRAY: Rgb = [128, 128, 128];
pub const SKIPPED_BLACK: Rgb = [0, 0, 0];
pub const ZERO_WHITE: Rgb = [255, 255, 255];

/// Heatmap color of a record: blue scale for negative, red scale for positive
/// signatures, white for zero, gray when uncertain.
pub fn record_color(r: &SampleRecord) -> Rgb {
    if !r.is_evaluated() {
        return SKIPPED_BLACK;
    }
    if !r.certified {
        return UNCERTAIN_GRAY;
    }
    let s = r.sigma.unwrap_or(0);
    let level = s.unsigned_abs().min(4) as u8;
    let v = 255 - 60 * level;
    match s.signum() {
        0 => ZERO_WHITE,
        -1 => [v, v, 255],
        _ => [255, v, v],
    }
}

/// Plain PPM (P3) image of a two-colored grid map, one pixel per grid node.
/// Rows follow `k_1`, columns `k_2`.
pub fn heatmap_ppm(records: &[SampleRecord], n: i64, include_faces: bool) -> Result<String> {
    let lo = if include_faces { 0 } else { 1 };
    let side = (n - lo) as usize;
    if records.len() != side * side || records.iter().any(|r| r.point.mu() != 2) {
        return Err(Error::invalid(format!(
            "heatmap needs the {side}x{side} records of a two-colored grid"
        )));
    }
    let mut pixels = vec![None; side * side];
    for r in records {
        let ks: Vec<Ratio<i64>> = r.point.turns().iter().map(|q| q * n).collect();
        if ks.iter().any(|k| !k.is_integer() || k.to_integer() < lo) {
            return Err(Error::invalid(format!("{} is not a node of the grid", r.point)));
        }
        let (a, b) = ((ks[0].to_integer() - lo) as usize, (ks[1].to_integer() - lo) as usize);
        pixels[a * side + b] = Some(record_color(r));
    }
    let mut out = format!("P3\n{side} {side}\n255\n");
    for row in pixels.chunks(side) {
        let line: Vec<String> = row
            .iter()
            .map(|p| {
                let [r, g, b] = p.unwrap_or(SKIPPED_BLACK);
                format!("{r} {g} {b}")
            })
            .collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    Ok(out)
}

/// Parses a P3 image back into `(width, height, pixels)`.
pub fn parse_ppm(text: &str) -> Result<(usize, usize, Vec<Rgb>)> {
    let mut it = text.split_whitespace();
    if it.next() != Some("P3") {
        return Err(Error::invalid("not a P3 image"));
    }
    let mut num = || -> Result<usize> {
        it.next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::invalid("truncated PPM"))
    };
    let (w, h, _max) = (num()?, num()?, num()?);
    let mut px = Vec::with_capacity(w * h);
    for _ in 0..w * h {
        px.push([num()? as u8, num()? as u8, num()? as u8]);
    }
    Ok((w, h, px))
}
