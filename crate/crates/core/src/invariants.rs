//! Hosokawa polynomials, the slope of a distinguished color, and signatures on
//! faces of the torus and at `omega = 1` for one-colored links.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::clink::{ColoredLinkData, SlopeData};
use crate::error::{Error, Result};
use crate::hermitian::{inertia_scaled, solve, Solution, UNCERTAIN_BAND};
use crate::laurent::LaurentPoly;
use crate::torus::TorusPoint;

/// Relative size of the imaginary part of a slope above which it is rejected.
const SLOPE_IMAG_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value")]
pub enum SlopeValue {
    Finite(f64),
    Infinite,
}

impl SlopeValue {
    pub fn finite(self) -> Option<f64> {
        match self {
            SlopeValue::Finite(v) => Some(v),
            SlopeValue::Infinite => None,
        }
    }
}

impl fmt::Display for SlopeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlopeValue::Finite(v) => write!(f, "{v}"),
            SlopeValue::Infinite => write!(f, "inf"),
        }
    }
}

/// `(t_i - 1)^|e|` for the signed exponent `e`, applied by multiplication or exact division.
fn apply_power(p: &LaurentPoly, factor: &LaurentPoly, e: i64) -> Result<LaurentPoly> {
    let f = factor.pow(e.unsigned_abs() as u32);
    if e >= 0 {
        p.try_mul(&f)
    } else {
        p.exact_div(&f)
    }
}

/// Hosokawa polynomial from the Alexander polynomial and the linking data,
/// unit-normalized. For one color this is `Delta / (t - 1)^{|L| - 1}`; otherwise
/// `prod_i (t_i - 1)^{nu_i} Delta`.
pub fn hosokawa(delta: &LaurentPoly, link: &ColoredLinkData) -> Result<LaurentPoly> {
    if delta.mu() != link.mu() || delta.is_half_step() {
        return Err(Error::invalid(format!(
            "Alexander polynomial must have {} variables",
            link.mu()
        )));
    }
    if delta.is_zero() {
        return Ok(delta.clone());
    }
    let out = if link.mu() == 1 {
        let n = link.components().len() as i64;
        apply_power(delta, &LaurentPoly::var_minus_one(1, 0), 1 - n)?
    } else {
        let nu = link.nu_exponents()?;
        // multiply first so divisions see the largest possible dividend
        let mut order: Vec<usize> = (0..nu.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(nu[i]));
        let mut p = delta.clone();
        for i in order {
            p = apply_power(&p, &LaurentPoly::var_minus_one(link.mu(), i), nu[i])?;
        }
        p
    };
    Ok(out.unit_normalize().into_poly())
}

/// `[(t_1 - 1)(t_2 - 1)]^{|lk| - 1} Delta` for a two-component, two-colored link.
pub fn hosokawa_two_component(delta: &LaurentPoly, lk: i64) -> Result<LaurentPoly> {
    if delta.mu() != 2 || delta.is_half_step() {
        return Err(Error::invalid("expected a polynomial in two variables"));
    }
    if delta.is_zero() {
        return Ok(delta.clone());
    }
    let factor = &LaurentPoly::var_minus_one(2, 0) * &LaurentPoly::var_minus_one(2, 1);
    Ok(apply_power(delta, &factor, lk.abs() - 1)?.unit_normalize().into_poly())
}

/// `t_i^{1/2} - t_i^{-1/2}` in the half-step ring.
fn half_step_difference(mu: usize, i: usize) -> LaurentPoly {
    let mut up = vec![0; mu];
    up[i] = 1;
    let down: Vec<i32> = up.iter().map(|e| -e).collect();
    (&LaurentPoly::monomial(mu, &up, 1) - &LaurentPoly::monomial(mu, &down, 1)).into_half_step()
}

/// Normalized Hosokawa polynomial from the Conway potential: an exact element
/// of `Z[t_i^{±1/2}]` with no unit ambiguity.
pub fn hosokawa_normalized(conway: &LaurentPoly, link: &ColoredLinkData) -> Result<LaurentPoly> {
    if conway.mu() != link.mu() || !conway.is_half_step() {
        return Err(Error::invalid(format!(
            "Conway potential must be a half-step polynomial in {} variables",
            link.mu()
        )));
    }
    if conway.is_zero() {
        return Ok(conway.clone());
    }
    if link.mu() == 1 {
        let n = link.components().len() as i64;
        return apply_power(conway, &half_step_difference(1, 0), 2 - n);
    }
    let nu = link.nu_exponents()?;
    let mut order: Vec<usize> = (0..nu.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(nu[i]));
    let mut p = conway.clone();
    for i in order {
        p = apply_power(&p, &half_step_difference(link.mu(), i), nu[i])?;
    }
    Ok(p)
}

/// A slope together with the magnitude of the terms it was summed from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlopeOutcome {
    pub value: SlopeValue,
    /// `sum_i |k_i alpha_i|`; zero tests on the value are relative to this.
    pub scale: f64,
}

/// Slope `-K(alpha)` where `E(omega) alpha = [K]`.
pub fn slope(data: &SlopeData, omega: &TorusPoint, tau: f64) -> Result<SlopeValue> {
    Ok(slope_with_scale(data, omega, tau)?.value)
}

pub fn slope_with_scale(data: &SlopeData, omega: &TorusPoint, tau: f64) -> Result<SlopeOutcome> {
    let e = data.slope_matrix_at(omega)?;
    let b: Vec<Complex64> = data.k_class.iter().map(|&k| Complex64::new(k as f64, 0.0)).collect();
    let pairing = |alpha: &[Complex64]| -> (Complex64, f64) {
        let mut v = Complex64::new(0.0, 0.0);
        let mut s = 0.0;
        for (&k, a) in data.k_class.iter().zip(alpha) {
            v -= a * k as f64;
            s += (a * k as f64).norm();
        }
        (v, s)
    };
    let (v, scale) = match solve(&e, &b, tau)? {
        Solution::NoSolution => {
            return Ok(SlopeOutcome {
                value: SlopeValue::Infinite,
                scale: 0.0,
            })
        }
        Solution::Unique(alpha) => pairing(&alpha),
        Solution::NonUnique { particular, kernel } => {
            // E(omega) is Hermitian, so a real class in its image is orthogonal to
            // the kernel; this guards against data that breaks the completion rule.
            let k_norm = data.k_class.iter().map(|k| (k * k) as f64).sum::<f64>().sqrt();
            for v in &kernel {
                let dot: Complex64 = data.k_class.iter().zip(v).map(|(&k, z)| z * k as f64).sum();
                let v_norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                if dot.norm() > tau * k_norm * v_norm {
                    return Err(Error::AmbiguousSlope);
                }
            }
            pairing(&particular)
        }
    };
    if v.im.abs() > SLOPE_IMAG_TOL * scale.max(v.norm()).max(f64::MIN_POSITIVE) {
        return Err(Error::NotReal { real: v.re, imag: v.im });
    }
    Ok(SlopeOutcome {
        value: SlopeValue::Finite(v.re),
        scale,
    })
}

/// Signature at a point of the face where the distinguished color's coordinate is 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FaceSignature {
    pub sigma: i64,
    pub sublink_sigma: i64,
    pub slope: SlopeValue,
    pub certified: bool,
    /// Set when the slope is infinite; its sign then counts as 0.
    pub infinite_slope: bool,
}

/// `sigma_{L'}(omega') + sgn(slope(omega'))` at a point `omega` whose only
/// coordinate equal to 1 is the distinguished color. All components of that
/// color must have zero linking with the rest of the link.
pub fn face_signature(
    link: &ColoredLinkData,
    data: &SlopeData,
    omega: &TorusPoint,
    tau: f64,
) -> Result<FaceSignature> {
    let d = data.distinguished_color;
    if d == 0 || d > link.mu() {
        return Err(Error::Precondition(format!(
            "distinguished color {d} outside 1..={}",
            link.mu()
        )));
    }
    if data.base.mu() + 1 != link.mu() {
        return Err(Error::Precondition(format!(
            "slope base has {} colors, expected {}",
            data.base.mu(),
            link.mu() - 1
        )));
    }
    if omega.mu() != link.mu() {
        return Err(Error::invalid("point arity differs from the color count"));
    }
    if omega.one_coordinates() != [d - 1] {
        return Err(Error::Precondition(format!(
            "exactly coordinate {d} must equal 1 at {omega}"
        )));
    }
    let comps = link.components();
    for (i, a) in comps.iter().enumerate() {
        for (j, b) in comps.iter().enumerate() {
            if a.color == d && b.color != d && link.linking()[i][j] != 0 {
                return Err(Error::Precondition(format!(
                    "lk({}, {}) = {} but the distinguished color must be unlinked from the rest",
                    a.id,
                    b.id,
                    link.linking()[i][j]
                )));
            }
        }
    }
    let rest = omega.drop_coord(d - 1);
    let (h, h_scale) = data.base.hermitian_with_scale(&rest)?;
    let sub = inertia_scaled(&h, tau, h_scale)?;
    let s = slope_with_scale(data, &rest, tau)?;
    let (sign, slope_certified, infinite) = match s.value {
        SlopeValue::Infinite => (0, true, true),
        SlopeValue::Finite(v) => {
            let thr = tau * s.scale;
            let sign = if v > thr {
                1
            } else if v < -thr {
                -1
            } else {
                0
            };
            let band = v.abs() > thr / UNCERTAIN_BAND && v.abs() < thr * UNCERTAIN_BAND;
            (sign, !band, false)
        }
    };
    Ok(FaceSignature {
        sigma: sub.signature + sign,
        sublink_sigma: sub.signature,
        slope: s.value,
        certified: sub.certified && slope_certified,
        infinite_slope: infinite,
    })
}

/// `sigma_L(1)` for a one-colored link: signature of the Seifert-framed linking matrix.
pub fn signature_at_full_one(link: &ColoredLinkData) -> Result<i64> {
    Ok(link.linking_matrix_inertia()?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clink::{components_with_colors, seifert_from_strings};

    fn p(s: &str, mu: usize) -> LaurentPoly {
        LaurentPoly::parse(s, mu).unwrap()
    }

    fn link(mu: usize, colors: &[usize], lk: Vec<Vec<i64>>) -> ColoredLinkData {
        ColoredLinkData::new("x", mu, components_with_colors(colors), lk, None).unwrap()
    }

    fn slope_data(n: i64) -> SlopeData {
        let app = vec![vec![0, 0, n, 0], vec![1, 0, 0, 0], vec![n, 0, 0, 0], vec![0, 0, 1, 0]];
        let apm = vec![vec![0, 0, n, 0], vec![1, 0, 0, 0], vec![n, 0, 0, 1], vec![0, 0, 0, 0]];
        let base = ColoredLinkData::new(
            "L'",
            2,
            components_with_colors(&[1, 2]),
            vec![vec![0; 2]; 2],
            Some(seifert_from_strings(2, 4, &[("++", app), ("+-", apm)]).unwrap()),
        )
        .unwrap();
        SlopeData::new(base, vec![0, 1, 0, 1], 1).unwrap()
    }

    fn l_n(n: i64) -> ColoredLinkData {
        let a = vec![vec![0, n], vec![n, 0]];
        let given: Vec<(&str, Vec<Vec<i64>>)> =
            ["+++", "++-", "+-+", "+--"].iter().map(|&k| (k, a.clone())).collect();
        ColoredLinkData::new(
            "L(n)",
            3,
            components_with_colors(&[1, 2, 3]),
            vec![vec![0; 3]; 3],
            Some(seifert_from_strings(3, 2, &given).unwrap()),
        )
        .unwrap()
    }

    #[test]
    fn hosokawa_table() {
        let hopf = link(1, &[1, 1], vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(hosokawa(&p("t-1", 1), &hopf).unwrap(), LaurentPoly::one(1));
        let t24 = link(2, &[1, 2], vec![vec![0, 2], vec![2, 0]]);
        let expect = p("t1-1", 2) * p("t2-1", 2) * p("t1*t2+1", 2);
        assert!(hosokawa(&p("t1*t2+1", 2), &t24).unwrap().eq_up_to_units(&expect));
        let borromean = link(3, &[1, 2, 3], vec![vec![0; 3]; 3]);
        let delta = p("t1-1", 3) * p("t2-1", 3) * p("t3-1", 3);
        assert_eq!(hosokawa(&delta, &borromean).unwrap(), LaurentPoly::one(3));
        let whitehead = link(2, &[1, 2], vec![vec![0; 2]; 2]);
        let delta = p("t1-1", 2) * p("t2-1", 2);
        assert_eq!(hosokawa(&delta, &whitehead).unwrap(), LaurentPoly::one(2));
        assert!(hosokawa(&LaurentPoly::zero(2), &whitehead).unwrap().is_zero());
        assert_eq!(hosokawa(&p("t1 + 1", 2), &whitehead), Err(Error::NotDivisible));
    }

    #[test]
    fn hosokawa_two_component_examples() {
        let expect = p("t1-1", 2) * p("t2-1", 2) * p("t1*t2+1", 2);
        assert!(hosokawa_two_component(&p("t1*t2+1", 2), 2).unwrap().eq_up_to_units(&expect));
        let d = p("t1-1", 2) * p("t2-1", 2);
        assert_eq!(hosokawa_two_component(&d, 0).unwrap(), LaurentPoly::one(2));
        assert_eq!(hosokawa_two_component(&LaurentPoly::one(2), 0), Err(Error::NotDivisible));
    }

    #[test]
    fn hosokawa_normalized_examples() {
        let l = l_n(1);
        for n in 1..=3i64 {
            let s = |i: usize| half_step_difference(3, i);
            let conway = s(0).pow(3).try_mul(&s(1)).unwrap().try_mul(&s(2)).unwrap().scale(&(-n * n).into());
            let got = hosokawa_normalized(&conway, &l).unwrap();
            assert_eq!(got, s(0).pow(2).scale(&(-n * n).into()));
        }
        let zero = LaurentPoly::zero(3).into_half_step();
        assert!(hosokawa_normalized(&zero, &l).unwrap().is_zero());
        let knot = link(1, &[1], vec![vec![0]]);
        let nabla = LaurentPoly::parse_half_step("t^(2/2) - 1 + t^(-2/2)", 1).unwrap();
        let expect = nabla.try_mul(&half_step_difference(1, 0)).unwrap();
        assert_eq!(hosokawa_normalized(&nabla, &knot).unwrap(), expect);
    }

    #[test]
    fn slope_examples() {
        let w: TorusPoint = "1/4,1/4".parse().unwrap();
        let v = slope(&slope_data(1), &w, 1e-9).unwrap().finite().unwrap();
        assert!((v - 4.0).abs() < 1e-12);
        let w: TorusPoint = "1/2,1/2".parse().unwrap();
        let v = slope(&slope_data(2), &w, 1e-9).unwrap().finite().unwrap();
        assert!((v - 16.0).abs() < 1e-12);

        let zero = ColoredLinkData::new(
            "z",
            2,
            components_with_colors(&[1, 2]),
            vec![vec![0; 2]; 2],
            Some(seifert_from_strings(2, 2, &[("++", vec![vec![0; 2]; 2]), ("+-", vec![vec![0; 2]; 2])]).unwrap()),
        )
        .unwrap();
        let s = SlopeData::new(zero, vec![1, 0], 1).unwrap();
        assert_eq!(slope(&s, &"1/3,1/3".parse().unwrap(), 1e-9).unwrap(), SlopeValue::Infinite);
        assert_eq!(slope(&slope_data(1), &"0,1/3".parse().unwrap(), 1e-9), Err(Error::CoordinateOne(0)));
    }

    #[test]
    fn slope_kernel_cases() {
        let a = vec![vec![1, 0], vec![0, 0]];
        let base = ColoredLinkData::new(
            "r",
            1,
            components_with_colors(&[1]),
            vec![vec![0]],
            Some(seifert_from_strings(1, 2, &[("+", a)]).unwrap()),
        )
        .unwrap();
        // E(omega) = ((1-w)^{-1} + (1-conj w)^{-1}) diag(1,0) = diag(1,0)
        let ok = SlopeData::new(base.clone(), vec![1, 0], 1).unwrap();
        let v = slope(&ok, &"1/3".parse().unwrap(), 1e-9).unwrap().finite().unwrap();
        assert!((v + 1.0).abs() < 1e-12);
        // (1, 1) is outside the image of diag(1, 0)
        let outside = SlopeData::new(base, vec![1, 1], 1).unwrap();
        assert_eq!(slope(&outside, &"1/3".parse().unwrap(), 1e-9), Ok(SlopeValue::Infinite));
    }

    #[test]
    fn face_signature_examples() {
        let l = l_n(1);
        let s = slope_data(1);
        let f = face_signature(&l, &s, &"0,1/4,1/4".parse().unwrap(), 1e-9).unwrap();
        assert_eq!((f.sigma, f.sublink_sigma, f.certified), (1, 0, true));
        // (1, w, conj w): closed form 2 Re((1 - w)^2)
        let f = face_signature(&l, &s, &"0,1/6,5/6".parse().unwrap(), 1e-9).unwrap();
        assert_eq!(f.sigma, -1);
        let f = face_signature(&l, &s, &"0,1/3,2/3".parse().unwrap(), 1e-9).unwrap();
        assert_eq!(f.sigma, 1);
        // slope vanishes exactly where |q1 - q2| = 1/2
        let f = face_signature(&l, &s, &"0,1/8,5/8".parse().unwrap(), 1e-9).unwrap();
        assert_eq!(f.sigma, 0);
    }

    #[test]
    fn face_signature_preconditions() {
        let s = slope_data(1);
        let mut lk = vec![vec![0; 3]; 3];
        lk[0][1] = 1;
        lk[1][0] = 1;
        let linked = ColoredLinkData::new("x", 3, components_with_colors(&[1, 2, 3]), lk, l_n(1).seifert().cloned()).unwrap();
        assert!(matches!(
            face_signature(&linked, &s, &"0,1/4,1/4".parse().unwrap(), 1e-9),
            Err(Error::Precondition(_))
        ));
        let l = l_n(1);
        for bad in ["1/4,1/4,1/4", "0,0,1/4", "1/4,0,1/4"] {
            assert!(matches!(
                face_signature(&l, &s, &bad.parse().unwrap(), 1e-9),
                Err(Error::Precondition(_))
            ));
        }
    }

    #[test]
    fn full_one_signature() {
        let hopf = link(1, &[1, 1], vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(signature_at_full_one(&hopf).unwrap(), -1);
        assert_eq!(signature_at_full_one(&link(1, &[1, 1], vec![vec![0; 2]; 2])).unwrap(), 0);
        assert_eq!(signature_at_full_one(&link(1, &[1], vec![vec![0]])).unwrap(), 0);
        assert_eq!(signature_at_full_one(&l_n(1)), Err(Error::Mu1Only));
    }
}
