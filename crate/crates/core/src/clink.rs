//! Colored links given by C-complex data.
//!
//! A [`ColoredLinkData`] carries the component colors, the pairwise linking
//! numbers and (optionally) the generalized Seifert matrices `A^e` for every
//! sign vector `e`. From these it builds the Hermitian matrix
//! `H(omega) = sum_e prod_i (1 - conj(omega_i)^{e_i}) A^e` whose inertia is the
//! multivariable signature and nullity at interior torus points.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::hermitian::{integer_inertia, ComplexMatrix};
use crate::laurent::LaurentPoly;
use crate::torus::TorusPoint;

pub type IntMatrix = Vec<Vec<i64>>;

/// A sign vector `e` in `{+1, -1}^mu`, written as a string like `"++-"`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignVector(Vec<i8>);

impl SignVector {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.is_empty() || signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::invalid("sign vectors must be nonempty with entries in {+1, -1}"));
        }
        Ok(Self(signs))
    }

    pub fn signs(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn negate(&self) -> Self {
        Self(self.0.iter().map(|s| -s).collect())
    }

    /// All `2^mu` sign vectors, `+` before `-`, first coordinate most significant.
    pub fn all(mu: usize) -> Vec<SignVector> {
        (0..1usize << mu)
            .map(|bits| {
                Self(
                    (0..mu)
                        .map(|i| if bits >> (mu - 1 - i) & 1 == 0 { 1 } else { -1 })
                        .collect(),
                )
            })
            .collect()
    }
}

impl FromStr for SignVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let signs = s
            .chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                _ => Err(Error::schema(s, "sign strings use only '+' and '-'")),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(signs).map_err(|_| Error::schema(s, "empty sign string"))
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.0 {
            f.write_str(if s > 0 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub id: String,
    /// Color in `1..=mu`.
    pub color: usize,
}

/// Generalized Seifert matrices for all sign vectors, completed by `A^{-e} = (A^e)^T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeifertData {
    g: usize,
    matrices: BTreeMap<SignVector, IntMatrix>,
}

impl SeifertData {
    /// Completes partial data. Every pair `{e, -e}` needs at least one member; when
    /// both are present they must be exact transposes.
    pub fn complete(mu: usize, g: usize, given: BTreeMap<SignVector, IntMatrix>) -> Result<Self> {
        for (eps, m) in &given {
            let key = eps.to_string();
            if eps.len() != mu {
                return Err(Error::schema(key, format!("sign string must have length {mu}")));
            }
            if m.len() != g || m.iter().any(|r| r.len() != g) {
                return Err(Error::schema(key, format!("matrix must be {g}x{g}")));
            }
        }
        let mut matrices = BTreeMap::new();
        for eps in SignVector::all(mu) {
            let neg = eps.negate();
            let m = match (given.get(&eps), given.get(&neg)) {
                (Some(a), Some(b)) => {
                    if *a != transpose(b) {
                        return Err(Error::schema(
                            eps.to_string(),
                            format!("A^{eps} must equal the transpose of A^{neg}"),
                        ));
                    }
                    a.clone()
                }
                (Some(a), None) => a.clone(),
                (None, Some(b)) => transpose(b),
                (None, None) => {
                    return Err(Error::schema(
                        eps.to_string(),
                        format!("missing Seifert matrix for {eps} and {neg}"),
                    ))
                }
            };
            matrices.insert(eps, m);
        }
        Ok(Self { g, matrices })
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn get(&self, eps: &SignVector) -> &IntMatrix {
        &self.matrices[eps]
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SignVector, &IntMatrix)> {
        self.matrices.iter()
    }

    /// `sum_e coeff(e) A^e` together with the entrywise-absolute sum, which
    /// bounds the round-off in the result.
    fn combine(&self, coeff: impl Fn(&SignVector) -> Complex64) -> (ComplexMatrix, f64) {
        let g = self.g;
        let mut out = ComplexMatrix::zeros(g, g);
        let mut abs = vec![0.0; g * g];
        for (eps, a) in &self.matrices {
            let c = coeff(eps);
            let cn = c.norm();
            for i in 0..g {
                for j in 0..g {
                    if a[i][j] != 0 {
                        out[(i, j)] += c * a[i][j] as f64;
                        abs[i * g + j] += cn * (a[i][j] as f64).abs();
                    }
                }
            }
        }
        let scale = (0..g)
            .map(|i| abs[i * g..(i + 1) * g].iter().sum::<f64>())
            .fold(0.0, f64::max);
        (out, scale)
    }
}

fn transpose(m: &IntMatrix) -> IntMatrix {
    let n = m.len();
    (0..n).map(|i| (0..n).map(|j| m[j][i]).collect()).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ColoredLinkData {
    pub name: String,
    mu: usize,
    components: Vec<Component>,
    linking: IntMatrix,
    seifert: Option<SeifertData>,
    pub alexander: Option<LaurentPoly>,
    pub conway: Option<LaurentPoly>,
}

impl ColoredLinkData {
    /// Validates and builds link data. `linking` is indexed by component position.
    pub fn new(
        name: impl Into<String>,
        mu: usize,
        components: Vec<Component>,
        linking: IntMatrix,
        seifert: Option<SeifertData>,
    ) -> Result<Self> {
        if mu == 0 {
            return Err(Error::schema("mu", "at least one color is required"));
        }
        if components.is_empty() {
            return Err(Error::schema("components", "a link has at least one component"));
        }
        for c in &components {
            if c.color == 0 || c.color > mu {
                return Err(Error::schema(
                    format!("components.{}", c.id),
                    format!("color {} outside 1..={mu}", c.color),
                ));
            }
        }
        for color in 1..=mu {
            if !components.iter().any(|c| c.color == color) {
                return Err(Error::schema("components", format!("color {color} is not used")));
            }
        }
        for (i, c) in components.iter().enumerate() {
            if components[..i].iter().any(|d| d.id == c.id) {
                return Err(Error::schema(format!("components.{}", c.id), "duplicate id"));
            }
            if c.id.contains(',') {
                return Err(Error::schema(format!("components.{}", c.id), "ids may not contain ','"));
            }
        }
        let n = components.len();
        if linking.len() != n || linking.iter().any(|r| r.len() != n) {
            return Err(Error::schema("linking", format!("linking matrix must be {n}x{n}")));
        }
        for i in 0..n {
            if linking[i][i] != 0 {
                return Err(Error::schema(
                    format!("{0},{0}", components[i].id),
                    "self-linking must be zero",
                ));
            }
            for j in 0..i {
                if linking[i][j] != linking[j][i] {
                    return Err(Error::schema(
                        format!("{},{}", components[i].id, components[j].id),
                        "linking numbers must be symmetric",
                    ));
                }
            }
        }
        if let Some(s) = &seifert {
            if s.matrices.keys().next().map(SignVector::len) != Some(mu) {
                return Err(Error::schema("seifert", format!("sign vectors must have length {mu}")));
            }
        }
        Ok(Self {
            name: name.into(),
            mu,
            components,
            linking,
            seifert,
            alexander: None,
            conway: None,
        })
    }

    pub fn with_alexander(mut self, p: LaurentPoly) -> Result<Self> {
        if p.mu() != self.mu || p.is_half_step() {
            return Err(Error::schema("alexander", format!("expected a polynomial in {} variables", self.mu)));
        }
        self.alexander = Some(p);
        Ok(self)
    }

    /// Sets the Conway potential; `p` must be half-step (exponent `k` means `t^{k/2}`).
    pub fn with_conway(mut self, p: LaurentPoly) -> Result<Self> {
        if p.mu() != self.mu || !p.is_half_step() {
            return Err(Error::schema("conway", format!("expected a half-step polynomial in {} variables", self.mu)));
        }
        self.conway = Some(p);
        Ok(self)
    }

    pub fn mu(&self) -> usize {
        self.mu
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn linking(&self) -> &IntMatrix {
        &self.linking
    }

    pub fn seifert(&self) -> Option<&SeifertData> {
        self.seifert.as_ref()
    }

    pub fn has_seifert(&self) -> bool {
        self.seifert.is_some()
    }

    fn seifert_or_err(&self) -> Result<&SeifertData> {
        self.seifert
            .as_ref()
            .ok_or_else(|| Error::NoSeifertData(self.name.clone()))
    }

    /// Seifert rank `g`, if matrices are present.
    pub fn g(&self) -> Option<usize> {
        self.seifert.as_ref().map(|s| s.g)
    }

    /// Number of components of color `color` (1-based).
    pub fn color_size(&self, color: usize) -> usize {
        self.components.iter().filter(|c| c.color == color).count()
    }

    /// `H(omega)`; Hermitian whenever `omega` lies on the torus.
    pub fn hermitian_at(&self, omega: &TorusPoint) -> Result<ComplexMatrix> {
        Ok(self.hermitian_with_scale(omega)?.0)
    }

    /// `H(omega)` and the absolute sum of its contributions (round-off scale).
    pub fn hermitian_with_scale(&self, omega: &TorusPoint) -> Result<(ComplexMatrix, f64)> {
        let s = self.seifert_or_err()?;
        if omega.mu() != self.mu {
            return Err(Error::invalid(format!(
                "point has {} coordinates, link has {} colors",
                omega.mu(),
                self.mu
            )));
        }
        let w = omega.coords();
        let one = Complex64::new(1.0, 0.0);
        Ok(s.combine(|eps| {
            eps.signs()
                .iter()
                .zip(&w)
                .map(|(&e, z)| if e > 0 { one - z.conj() } else { one - z })
                .product()
        }))
    }

    /// Mirror image: `A^e -> -A^{-e}`, linking numbers negated.
    pub fn mirror(&self) -> Self {
        let seifert = self.seifert.as_ref().map(|s| SeifertData {
            g: s.g,
            matrices: s
                .matrices
                .keys()
                .map(|eps| {
                    let m = s.get(&eps.negate());
                    (eps.clone(), m.iter().map(|r| r.iter().map(|x| -x).collect()).collect())
                })
                .collect(),
        });
        Self {
            name: format!("{} (mirror)", self.name),
            mu: self.mu,
            components: self.components.clone(),
            linking: self.linking.iter().map(|r| r.iter().map(|x| -x).collect()).collect(),
            seifert,
            alexander: self.alexander.clone(),
            conway: None,
        }
    }

    /// `nu_i = (sum over K in L_i, K' outside L_i of |lk(K, K')|) - |L_i|`.
    pub fn nu_exponents(&self) -> Result<Vec<i64>> {
        if self.mu == 1 {
            return Err(Error::Mu1NotApplicable);
        }
        Ok((1..=self.mu)
            .map(|color| {
                let mut total = 0i64;
                for (i, a) in self.components.iter().enumerate() {
                    if a.color != color {
                        continue;
                    }
                    for (j, b) in self.components.iter().enumerate() {
                        if b.color != color {
                            total += self.linking[i][j].abs();
                        }
                    }
                }
                total - self.color_size(color) as i64
            })
            .collect())
    }

    /// Linking matrix with the Seifert framing: off-diagonal `lk(K_i, K_j)`,
    /// diagonal `-sum_{j != i} lk(K_i, K_j)`.
    pub fn seifert_framed_linking_matrix(&self) -> Result<IntMatrix> {
        if self.mu != 1 {
            return Err(Error::Mu1Only);
        }
        let mut m = self.linking.clone();
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = -self.linking[i].iter().sum::<i64>();
        }
        Ok(m)
    }

    /// Exact signature and nullity of [`Self::seifert_framed_linking_matrix`].
    pub fn linking_matrix_inertia(&self) -> Result<(i64, usize)> {
        integer_inertia(&self.seifert_framed_linking_matrix()?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: LinkFile = serde_json::from_str(text).map_err(|e| Error::schema("link", e.to_string()))?;
        file.into_link()
    }

    pub fn from_value(value: Value) -> Result<Self> {
        let file: LinkFile = serde_json::from_value(value).map_err(|e| Error::schema("link", e.to_string()))?;
        file.into_link()
    }

    pub fn to_value(&self) -> Value {
        serde_json::to_value(LinkFile::from_link(self)).expect("link file serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("link file serializes")
    }
}

/// Data for the slope of a distinguished color against the remaining sublink.
#[derive(Clone, Debug, PartialEq)]
pub struct SlopeData {
    /// C-complex data of the sublink, disjoint from the distinguished components.
    pub base: ColoredLinkData,
    /// The distinguished class in the dual homology basis.
    pub k_class: Vec<i64>,
    /// Color removed from the full link (1-based).
    pub distinguished_color: usize,
}

impl SlopeData {
    pub fn new(base: ColoredLinkData, k_class: Vec<i64>, distinguished_color: usize) -> Result<Self> {
        let g = base.seifert_or_err().map_err(|_| Error::schema("base.seifert", "slope base needs Seifert matrices"))?.g;
        if k_class.len() != g {
            return Err(Error::schema("k_class", format!("length must equal base g = {g}")));
        }
        if distinguished_color == 0 {
            return Err(Error::schema("distinguished_color", "colors are 1-based"));
        }
        Ok(Self {
            base,
            k_class,
            distinguished_color,
        })
    }

    /// `E(omega) = sum_e prod_i (1 - omega_i^{e_i})^{-1} A^e` over the base colors.
    pub fn slope_matrix_at(&self, omega: &TorusPoint) -> Result<ComplexMatrix> {
        Ok(self.slope_matrix_with_scale(omega)?.0)
    }

    pub fn slope_matrix_with_scale(&self, omega: &TorusPoint) -> Result<(ComplexMatrix, f64)> {
        let s = self.base.seifert_or_err()?;
        if omega.mu() != self.base.mu {
            return Err(Error::invalid(format!(
                "slope point has {} coordinates, base has {} colors",
                omega.mu(),
                self.base.mu
            )));
        }
        if let Some(j) = omega.one_coordinates().first() {
            return Err(Error::CoordinateOne(*j));
        }
        let w = omega.coords();
        let one = Complex64::new(1.0, 0.0);
        Ok(s.combine(|eps| {
            eps.signs()
                .iter()
                .zip(&w)
                .map(|(&e, z)| (if e > 0 { one - z } else { one - z.conj() }).inv())
                .product()
        }))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SlopeFile = serde_json::from_str(text).map_err(|e| Error::schema("slope", e.to_string()))?;
        let base = ColoredLinkData::from_value(file.base).map_err(|e| prefix_key("base", e))?;
        Self::new(base, file.k_class, file.distinguished_color)
    }

    pub fn to_json(&self) -> String {
        let file = SlopeFile {
            base: self.base.to_value(),
            k_class: self.k_class.clone(),
            distinguished_color: self.distinguished_color,
        };
        serde_json::to_string_pretty(&file).expect("slope file serializes")
    }
}

fn prefix_key(prefix: &str, e: Error) -> Error {
    match e {
        Error::Schema { key, reason } => Error::Schema {
            key: format!("{prefix}.{key}"),
            reason,
        },
        other => other,
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SlopeFile {
    base: Value,
    k_class: Vec<i64>,
    distinguished_color: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum IdRepr {
    Text(String),
    Number(i64),
}

impl IdRepr {
    fn into_string(self) -> String {
        match self {
            IdRepr::Text(s) => s,
            IdRepr::Number(n) => n.to_string(),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComponentFile {
    id: IdRepr,
    color: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LinkFile {
    name: String,
    mu: usize,
    components: Vec<ComponentFile>,
    #[serde(default)]
    linking: BTreeMap<String, i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    g: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seifert: Option<BTreeMap<String, Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alexander: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    conway: Option<String>,
}

fn parse_matrix(key: &str, g: usize, v: &Value) -> Result<IntMatrix> {
    let bad = || Error::schema(key, format!("expected a {g}x{g} integer matrix"));
    let arr = v.as_array().ok_or_else(bad)?;
    let ints = |vals: &[Value]| -> Result<Vec<i64>> {
        vals.iter().map(|x| x.as_i64().ok_or_else(bad)).collect()
    };
    if arr.iter().all(Value::is_array) {
        let m: IntMatrix = arr
            .iter()
            .map(|r| ints(r.as_array().unwrap()))
            .collect::<Result<_>>()?;
        if m.len() != g || m.iter().any(|r| r.len() != g) {
            return Err(bad());
        }
        Ok(m)
    } else {
        // flat row-major
        let flat = ints(arr)?;
        if flat.len() != g * g {
            return Err(bad());
        }
        Ok(flat.chunks(g.max(1)).take(g).map(<[i64]>::to_vec).collect())
    }
}

impl LinkFile {
    fn into_link(self) -> Result<ColoredLinkData> {
        let components: Vec<Component> = self
            .components
            .into_iter()
            .map(|c| Component {
                id: c.id.into_string(),
                color: c.color,
            })
            .collect();
        let n = components.len();
        let index = |id: &str, key: &str| {
            components
                .iter()
                .position(|c| c.id == id)
                .ok_or_else(|| Error::schema(key, format!("unknown component id {id:?}")))
        };
        let mut linking = vec![vec![0i64; n]; n];
        let mut seen = vec![vec![false; n]; n];
        for (key, &v) in &self.linking {
            let (a, b) = key
                .split_once(',')
                .ok_or_else(|| Error::schema(key, "linking keys look like \"id1,id2\""))?;
            let (i, j) = (index(a.trim(), key)?, index(b.trim(), key)?);
            if i == j {
                if v != 0 {
                    return Err(Error::schema(key, "self-linking must be zero"));
                }
                continue;
            }
            if seen[i][j] && linking[i][j] != v {
                return Err(Error::schema(key, "conflicts with the reversed pair"));
            }
            linking[i][j] = v;
            linking[j][i] = v;
            seen[i][j] = true;
            seen[j][i] = true;
        }
        let seifert = match (self.seifert, self.g) {
            (None, None) => None,
            (None, Some(0)) => Some(SeifertData::complete(
                self.mu,
                0,
                SignVector::all(self.mu).into_iter().map(|e| (e, vec![])).collect(),
            )?),
            (None, Some(_)) => return Err(Error::schema("seifert", "g > 0 requires Seifert matrices")),
            (Some(_), None) => return Err(Error::schema("g", "Seifert matrices require g")),
            (Some(map), Some(g)) => {
                let mut given = BTreeMap::new();
                for (key, v) in &map {
                    let eps: SignVector = key.parse()?;
                    given.insert(eps, parse_matrix(key, g, v)?);
                }
                if g == 0 && given.is_empty() {
                    given = SignVector::all(self.mu).into_iter().map(|e| (e, vec![])).collect();
                }
                Some(SeifertData::complete(self.mu, g, given)?)
            }
        };
        let mut link = ColoredLinkData::new(self.name, self.mu, components, linking, seifert)?;
        if let Some(s) = self.alexander {
            let p = LaurentPoly::parse(&s, link.mu).map_err(|e| Error::schema("alexander", e.to_string()))?;
            link = link.with_alexander(p)?;
        }
        if let Some(s) = self.conway {
            let p = LaurentPoly::parse_half_step(&s, link.mu)
                .map_err(|e| Error::schema("conway", e.to_string()))?;
            link = link.with_conway(p)?;
        }
        Ok(link)
    }

    fn from_link(l: &ColoredLinkData) -> Self {
        let mut linking = BTreeMap::new();
        for i in 0..l.components.len() {
            for j in (i + 1)..l.components.len() {
                if l.linking[i][j] != 0 {
                    linking.insert(format!("{},{}", l.components[i].id, l.components[j].id), l.linking[i][j]);
                }
            }
        }
        let seifert = l.seifert.as_ref().map(|s| {
            s.matrices
                .iter()
                .filter(|(eps, _)| eps.signs()[0] > 0)
                .map(|(eps, m)| (eps.to_string(), serde_json::to_value(m).unwrap()))
                .collect()
        });
        LinkFile {
            name: l.name.clone(),
            mu: l.mu,
            components: l
                .components
                .iter()
                .map(|c| ComponentFile {
                    id: IdRepr::Text(c.id.clone()),
                    color: c.color,
                })
                .collect(),
            linking,
            g: l.g(),
            seifert,
            alexander: l.alexander.as_ref().map(ToString::to_string),
            conway: l.conway.as_ref().map(ToString::to_string),
        }
    }
}

/// Components `K1, K2, ...` with the given colors.
pub fn components_with_colors(colors: &[usize]) -> Vec<Component> {
    colors
        .iter()
        .enumerate()
        .map(|(i, &color)| Component {
            id: format!("K{}", i + 1),
            color,
        })
        .collect()
}

/// Seifert data from the matrices of sign vectors starting with `+`.
pub fn seifert_from_strings(mu: usize, g: usize, given: &[(&str, IntMatrix)]) -> Result<SeifertData> {
    let map = given
        .iter()
        .map(|(k, m)| Ok((k.parse::<SignVector>()?, m.clone())))
        .collect::<Result<BTreeMap<_, _>>>()?;
    SeifertData::complete(mu, g, map)
}
