//! Association (Gale duality) of ordered point configurations, with the
//! position checks used for eight points in `P²` and `P⁴`.

use itertools::Itertools;
use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::{rational_from_json, rational_json};
use crate::linalg::{q, QMatrix, Q};

/// `n` points of `P^k`, the columns of a `(k+1) × n` matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointConfiguration {
    k: usize,
    m: QMatrix,
}

impl PointConfiguration {
    /// From the columns of homogeneous coordinates.
    pub fn from_columns(k: usize, columns: Vec<Vec<Q>>) -> Result<Self> {
        if columns.iter().any(|c| c.len() != k + 1) {
            return Err(Error::InvalidArgument(format!("every point of P^{k} needs {} coordinates", k + 1)));
        }
        if let Some(i) = columns.iter().position(|c| c.iter().all(Zero::is_zero)) {
            return Err(Error::Degenerate(format!("point {i} has all coordinates zero")));
        }
        let n = columns.len();
        let m = QMatrix::from_fn(k + 1, n, |r, c| columns[c][r].clone());
        Ok(PointConfiguration { k, m })
    }

    pub fn from_matrix(m: QMatrix) -> Result<Self> {
        let k = m.rows().checked_sub(1).ok_or_else(|| Error::InvalidArgument("empty matrix".into()))?;
        Self::from_columns(k, (0..m.cols()).map(|c| m.column(c)).collect())
    }

    pub fn from_i64_columns(k: usize, columns: &[Vec<i64>]) -> Result<Self> {
        Self::from_columns(k, columns.iter().map(|c| c.iter().map(|&x| q(x)).collect()).collect())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.m.cols()
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.m
    }

    pub fn point(&self, i: usize) -> Vec<Q> {
        self.m.column(i)
    }

    /// The configuration with points reordered: point `i` of the result is
    /// point `perm[i]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        PointConfiguration { k: self.k, m: self.m.select_columns(perm) }
    }

    /// Minor on the given columns (`k + 1` of them).
    pub fn minor(&self, cols: &[usize]) -> Q {
        self.m.select_columns(cols).determinant()
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let v: serde_json::Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json_value(&v)
    }

    fn from_json_value(v: &serde_json::Value) -> Result<Self> {
        let pts = v
            .get("points")
            .and_then(|p| p.as_array())
            .ok_or_else(|| Error::Parse("expected an object with a \"points\" array".into()))?;
        let columns = pts
            .iter()
            .map(|p| {
                p.as_array()
                    .ok_or_else(|| Error::Parse(format!("point {p} is not an array")))?
                    .iter()
                    .map(rational_from_json)
                    .collect::<Result<Vec<Q>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let dim = columns.first().map(|c| c.len()).ok_or_else(|| Error::Parse("no points".into()))?;
        let k = match v.get("k") {
            Some(k) => k.as_u64().ok_or_else(|| Error::Parse(format!("bad k {k}")))? as usize,
            None => dim - 1,
        };
        Self::from_columns(k, columns)
    }
}

impl Serialize for PointConfiguration {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let points: Vec<Vec<serde_json::Value>> =
            (0..self.n()).map(|c| self.point(c).iter().map(rational_json).collect()).collect();
        serde_json::json!({ "k": self.k, "n": self.n(), "points": points }).serialize(s)
    }
}

impl<'de> Deserialize<'de> for PointConfiguration {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        Self::from_json_value(&v).map_err(serde::de::Error::custom)
    }
}

/// Random points with coordinates `p/q`, `|p| ≤ bound`, `1 ≤ q ≤ bound`.
pub fn random_configuration<R: Rng>(rng: &mut R, k: usize, n: usize, bound: i64) -> PointConfiguration {
    loop {
        let cols: Vec<Vec<Q>> = (0..n)
            .map(|_| (0..=k).map(|_| Q::new(rng.gen_range(-bound..=bound).into(), rng.gen_range(1..=bound).into())).collect())
            .collect();
        if let Ok(p) = PointConfiguration::from_columns(k, cols) {
            return p;
        }
    }
}

/// The associated configuration: `n` points in `P^{n-k-2}` given by the
/// columns of `B` with `A·Bᵗ = 0`. `B` is the kernel of `A` in reduced
/// echelon form, so the result is canonical.
pub fn associate(a: &PointConfiguration) -> Result<PointConfiguration> {
    let n = a.n();
    let rank = a.m.rank();
    if rank != a.k + 1 {
        return Err(Error::RankDeficient { expected: a.k + 1, found: rank });
    }
    if n < a.k + 3 {
        return Err(Error::InvalidArgument(format!("{n} points in P^{} have no associated configuration", a.k)));
    }
    for [i, j] in (0..n).array_combinations() {
        if a.m.select_columns(&[i, j]).rank() < 2 {
            return Err(Error::Degenerate(format!("points {i} and {j} coincide")));
        }
    }
    PointConfiguration::from_matrix(a.m.kernel())
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MinorIdentityReport {
    pub checked: usize,
    /// Pairs `(I, J)` where `a_I b_J + a_J b_I ≠ 0`.
    pub violations: Vec<(Vec<usize>, Vec<usize>)>,
}

impl MinorIdentityReport {
    pub fn passed(&self) -> bool {
        self.checked > 0 && self.violations.is_empty()
    }
}

/// Checks `a_I b_J + a_J b_I = 0` for all `I = K ∪ {i}`, `J = K ∪ {j}` with
/// `|I ∩ J| = |K| = k_A`. Here `a_I = det[A_K, A_i]`, `a_J = det[A_K, A_j]`,
/// `b_I = det[B_j, B_R]`, `b_J = det[B_i, B_R]` with `R` the complement of
/// `K ∪ {i, j}`, and `K`, `R` in increasing order: `b_I` is the minor of `B`
/// on the columns not in `I`, listed with the one column of `J \ I` first.
pub fn verify_minor_identity(a: &PointConfiguration, b: &PointConfiguration) -> Result<MinorIdentityReport> {
    let n = a.n();
    if b.n() != n || a.k + b.k + 2 != n {
        return Err(Error::InvalidArgument(format!(
            "configurations of {} points in P^{} and {} points in P^{} are not of associated shape",
            n,
            a.k,
            b.n(),
            b.k
        )));
    }
    if !a.m.mul(&b.m.transpose()).is_zero() {
        return Err(Error::InvalidArgument("A·Bᵗ ≠ 0".into()));
    }
    let mut report = MinorIdentityReport::default();
    for kset in (0..n).combinations(a.k) {
        let rest: Vec<usize> = (0..n).filter(|c| !kset.contains(c)).collect();
        for [i, j] in rest.iter().copied().array_combinations() {
            let r: Vec<usize> = rest.iter().copied().filter(|&c| c != i && c != j).collect();
            let with = |x: usize, base: &[usize], first: bool| -> Vec<usize> {
                if first {
                    std::iter::once(x).chain(base.iter().copied()).collect()
                } else {
                    base.iter().copied().chain(std::iter::once(x)).collect()
                }
            };
            let a_i = a.minor(&with(i, &kset, false));
            let a_j = a.minor(&with(j, &kset, false));
            let b_i = b.minor(&with(j, &r, true));
            let b_j = b.minor(&with(i, &r, true));
            report.checked += 1;
            if !(a_i * b_j + a_j * b_i).is_zero() {
                let mut ii = with(i, &kset, false);
                let mut jj = with(j, &kset, false);
                ii.sort_unstable();
                jj.sort_unstable();
                report.violations.push((ii, jj));
            }
        }
    }
    Ok(report)
}

/// Every `(k+1) × (k+1)` minor is nonzero.
pub fn general_linear_position(p: &PointConfiguration) -> bool {
    (0..p.n()).combinations(p.k + 1).all(|c| !p.minor(&c).is_zero())
}

/// The first violated condition of [`del_pezzo_position`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum PositionViolation {
    Collinear { points: [usize; 3] },
    Conic { points: [usize; 6] },
    SingularCubic { point: usize },
}

impl std::fmt::Display for PositionViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PositionViolation::Collinear { points: [i, j, k] } => write!(f, "collinear {{{i},{j},{k}}}"),
            PositionViolation::Conic { points } => write!(f, "conic through {points:?}"),
            PositionViolation::SingularCubic { point } => {
                write!(f, "a cubic through all points is singular at point {point}")
            }
        }
    }
}

fn quadric_row(p: &[Q]) -> Vec<Q> {
    let (x, y, z) = (&p[0], &p[1], &p[2]);
    vec![x * x, x * y, y * y, x * z, y * z, z * z]
}

/// Exponents of the ten cubic monomials in `x, y, z`.
fn cubic_monomials() -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for a in (0..=3u32).rev() {
        for b in (0..=3 - a).rev() {
            out.push([a, b, 3 - a - b]);
        }
    }
    out
}

fn monomial(p: &[Q], e: &[u32; 3]) -> Q {
    (0..3).fold(q(1), |acc, i| acc * num_traits::pow(p[i].clone(), e[i] as usize))
}

fn partial(p: &[Q], e: &[u32; 3], var: usize) -> Q {
    if e[var] == 0 {
        return q(0);
    }
    let mut d = *e;
    d[var] -= 1;
    q(i64::from(e[var])) * monomial(p, &d)
}

/// Whether eight points of `P²` blow up to a del Pezzo surface of degree
/// one: no three on a line, no six on a conic, and no cubic through all
/// eight that is singular at one of them. These conditions are the standard
/// characterization and are checked with exact determinants.
pub fn del_pezzo_position(p: &PointConfiguration) -> Result<Option<PositionViolation>> {
    if p.k != 2 || p.n() != 8 {
        return Err(Error::InvalidArgument("expected eight points in P²".into()));
    }
    for c in (0..8).combinations(3) {
        if p.minor(&c).is_zero() {
            return Ok(Some(PositionViolation::Collinear { points: [c[0], c[1], c[2]] }));
        }
    }
    let pts: Vec<Vec<Q>> = (0..8).map(|i| p.point(i)).collect();
    for c in (0..8).combinations(6) {
        let m = QMatrix::from_rows(c.iter().map(|&i| quadric_row(&pts[i])).collect());
        if m.determinant().is_zero() {
            return Ok(Some(PositionViolation::Conic { points: c.try_into().expect("six points") }));
        }
    }
    let mons = cubic_monomials();
    for i in 0..8 {
        let mut rows: Vec<Vec<Q>> = pts.iter().map(|pt| mons.iter().map(|e| monomial(pt, e)).collect()).collect();
        // by Euler's relation the partial in a nonzero coordinate of the
        // point is implied by the other conditions
        let skip = (0..3).rev().find(|&v| !pts[i][v].is_zero()).expect("nonzero point");
        for var in (0..3).filter(|&v| v != skip) {
            rows.push(mons.iter().map(|e| partial(&pts[i], e, var)).collect());
        }
        if QMatrix::from_rows(rows).determinant().is_zero() {
            return Ok(Some(PositionViolation::SingularCubic { point: i }));
        }
    }
    Ok(None)
}

/// Eight points `q` of `P²` together with the associated points `p` of
/// `P⁴`, as ordered sets: point `i` of one corresponds to point `i` of the
/// other.
#[derive(Clone, Debug, Serialize)]
pub struct Correspondence {
    pub q_points: PointConfiguration,
    pub p_points: PointConfiguration,
    pub ordered: bool,
    pub p_general_linear_position: bool,
}

pub fn build_correspondence(qs: &PointConfiguration) -> Result<Correspondence> {
    if let Some(v) = del_pezzo_position(qs)? {
        return Err(Error::Degenerate(v.to_string()));
    }
    let p_points = associate(qs)?;
    let p_general_linear_position = general_linear_position(&p_points);
    Ok(Correspondence { q_points: qs.clone(), p_points, ordered: true, p_general_linear_position })
}
