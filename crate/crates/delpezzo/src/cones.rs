//! The cones NE(S), Nef(S), E, Π, N and their duals, exact membership, and
//! verification of duality, extremality and inclusions.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classes::{classes, index_of, ClassKind};
use crate::error::{Error, Result};
use crate::farkas::{cone_membership, Membership};
use crate::lattice::{k_s, Basis, ClassProbe, PicClass, RatClass, RANK};
use crate::linalg::{int_rank, q, QMatrix, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ConeName {
    Ne,
    Nef,
    E,
    Pi,
    N,
    EDual,
    NDual,
    PiDual,
}

impl ConeName {
    pub const ALL: [ConeName; 8] =
        [ConeName::Ne, ConeName::Nef, ConeName::E, ConeName::Pi, ConeName::N, ConeName::EDual, ConeName::NDual, ConeName::PiDual];

    pub fn as_str(self) -> &'static str {
        match self {
            ConeName::Ne => "NE",
            ConeName::Nef => "NEF",
            ConeName::E => "E",
            ConeName::Pi => "PI",
            ConeName::N => "N",
            ConeName::EDual => "E_DUAL",
            ConeName::NDual => "N_DUAL",
            ConeName::PiDual => "PI_DUAL",
        }
    }
}

impl fmt::Display for ConeName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ConeName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let u = s.to_ascii_uppercase().replace('-', "_");
        ConeName::ALL
            .into_iter()
            .find(|c| c.as_str() == u)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown cone {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Representation {
    Generators,
    Inequalities,
    Both,
}

/// A polyhedral cone `{x : n·x ≥ 0 for every normal n}` and/or the cone
/// spanned by `generators`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConeSpec {
    pub name: String,
    pub basis: Basis,
    pub generators: Vec<PicClass>,
    pub inequalities: Vec<PicClass>,
    pub authoritative: Representation,
}

/// `2D + K_S`.
pub fn twist_normal(d: &PicClass) -> PicClass {
    2 * *d + k_s()
}

/// `D` with `2D + K_S = n`, if integral.
pub fn untwist(n: &PicClass) -> Option<PicClass> {
    let d = *n - k_s();
    d.coeffs().iter().all(|c| c % 2 == 0).then(|| PicClass::new(d.basis(), d.coeffs().map(|c| c / 2)))
}

static CONES: [OnceLock<ConeSpec>; 8] = [const { OnceLock::new() }; 8];

/// Cached version of [`build_cone`].
pub fn cone(name: ConeName) -> &'static ConeSpec {
    CONES[name as usize].get_or_init(|| build_cone(name))
}

pub fn build_cone(name: ConeName) -> ConeSpec {
    let lines = classes(ClassKind::MinusOne);
    let conics = classes(ClassKind::Conic);
    let cubics = classes(ClassKind::Cubic);
    let v = |it: &mut dyn Iterator<Item = PicClass>| it.collect::<Vec<_>>();
    let nef_gens = || v(&mut conics.iter().chain(cubics).copied());
    let n_gens = || {
        v(&mut conics.iter().map(|c| -2 * k_s() + *c).chain(cubics.iter().map(|h| -3 * k_s() + *h)))
    };
    let e_dual_gens = || v(&mut lines.iter().copied().chain(cubics.iter().map(twist_normal)));
    let pi_normals = || v(&mut lines.iter().copied().chain(conics.iter().map(twist_normal)));
    let n_normals = || v(&mut lines.iter().map(twist_normal));
    let (generators, inequalities, authoritative) = match name {
        ConeName::Ne => (lines.to_vec(), nef_gens(), Representation::Both),
        ConeName::Nef => (nef_gens(), lines.to_vec(), Representation::Both),
        ConeName::E => (conics.to_vec(), e_dual_gens(), Representation::Both),
        ConeName::EDual => (e_dual_gens(), conics.to_vec(), Representation::Both),
        ConeName::Pi => (Vec::new(), pi_normals(), Representation::Inequalities),
        ConeName::PiDual => (pi_normals(), Vec::new(), Representation::Generators),
        ConeName::N => (n_gens(), n_normals(), Representation::Both),
        ConeName::NDual => (n_normals(), n_gens(), Representation::Both),
    };
    ConeSpec { name: name.to_string(), basis: Basis::Surface, generators, inequalities, authoritative }
}

impl ConeSpec {
    fn check_basis(&self, x: &RatClass) -> Result<()> {
        if x.basis() != self.basis {
            return Err(Error::WrongBasis { expected: self.basis, found: x.basis() });
        }
        Ok(())
    }

    /// Exact membership. Uses the inequalities when present, otherwise
    /// exact linear feasibility over the generators.
    pub fn contains(&self, x: &RatClass) -> Result<bool> {
        self.check_basis(x)?;
        if !self.inequalities.is_empty() {
            let p = ClassProbe::new(x);
            for n in &self.inequalities {
                if p.sign(n)? == Ordering::Less {
                    return Ok(false);
                }
            }
            return Ok(true);
        }
        Ok(self.membership(x)?.is_member())
    }

    /// Membership in the cone spanned by the generators, with a witness
    /// either way.
    pub fn membership(&self, x: &RatClass) -> Result<Membership> {
        self.check_basis(x)?;
        let gens: Vec<Vec<i64>> = self.generators.iter().map(|g| g.coeffs().to_vec()).collect();
        Ok(cone_membership(&gens, &x.to_vec()))
    }

    /// Turns a coordinate functional from [`Membership::NotMember`] into the
    /// class `z` with `pair(z, y) = certificate·y`.
    pub fn certificate_class(&self, certificate: &[Q]) -> Result<RatClass> {
        let head = Basis::pairing_head(self.basis, self.basis)?;
        let v: Vec<Q> =
            (0..RANK).map(|i| if i == 0 { &certificate[0] / q(head) } else { -certificate[i].clone() }).collect();
        Ok(RatClass::from_vec(self.basis, v))
    }

    /// Strictly positive on every nonzero inequality normal. For a
    /// full-dimensional cone this is membership in the interior.
    pub fn contains_in_interior(&self, x: &RatClass) -> Result<bool> {
        self.check_basis(x)?;
        let p = ClassProbe::new(x);
        for n in self.inequalities.iter().filter(|n| !n.is_zero()) {
            if p.sign(n)? != Ordering::Greater {
                return Ok(false);
            }
        }
        Ok(!self.inequalities.is_empty())
    }

    /// Inequality normals vanishing at `x`.
    pub fn tight_normals(&self, x: &RatClass) -> Result<Vec<PicClass>> {
        self.check_basis(x)?;
        let p = ClassProbe::new(x);
        let mut out = Vec::new();
        for n in &self.inequalities {
            if p.sign(n)? == Ordering::Equal {
                out.push(*n);
            }
        }
        Ok(out)
    }

    /// Generators on the hyperplane `normal⊥`.
    pub fn facet_generators(&self, normal: &PicClass) -> Vec<PicClass> {
        self.generators.iter().filter(|g| g.dot(normal) == 0).copied().collect()
    }

    /// Whether `x` spans an extremal ray, tested against the inequality
    /// normals: those vanishing at `x` must have rank 8.
    pub fn is_extremal_ray(&self, x: &RatClass) -> Result<bool> {
        let tight: Vec<[i64; RANK]> = self.tight_normals(x)?.iter().map(|n| *n.coeffs()).collect();
        Ok(int_rank(&tight) == RANK - 1)
    }

    /// Every generator satisfies every inequality.
    pub fn is_consistent(&self) -> bool {
        self.generators
            .par_iter()
            .all(|g| self.inequalities.iter().all(|n| g.pair(n).map(|v| v >= 0).unwrap_or(false)))
    }
}

/// Result of [`verify_dual_pair`].
#[derive(Clone, Debug, Serialize)]
pub struct DualPairReport {
    pub cone: String,
    pub dual: String,
    pub pairs_checked: u64,
    pub negative_pairs: u64,
    /// Up to ten offending `(generator, dual generator)` pairs.
    pub negative_examples: Vec<(PicClass, PicClass)>,
    pub cone_generators: usize,
    pub cone_extremal: usize,
    pub cone_non_extremal: Vec<PicClass>,
    pub dual_generators: usize,
    pub dual_extremal: usize,
    pub dual_non_extremal: Vec<PicClass>,
    pub repeated_rays: usize,
}

impl DualPairReport {
    pub fn passed(&self) -> bool {
        self.negative_pairs == 0
            && self.cone_non_extremal.is_empty()
            && self.dual_non_extremal.is_empty()
            && self.repeated_rays == 0
    }
}

/// Checks that every generator of `cone` pairs nonnegatively with every
/// generator of `dual`, and that each generator on either side spans an
/// extremal ray: the generators of the other side vanishing on it have rank
/// 8. Together these certify that the two generator lists are the extremal
/// rays of a pair of dual cones.
pub fn verify_dual_pair(cone: &ConeSpec, dual: &ConeSpec) -> DualPairReport {
    let negatives: Vec<(PicClass, PicClass)> = cone
        .generators
        .par_iter()
        .flat_map_iter(|g| dual.generators.iter().filter(|d| g.dot(d) < 0).map(|d| (*g, *d)).collect::<Vec<_>>())
        .collect();
    let non_extremal = |a: &[PicClass], b: &[PicClass]| -> Vec<PicClass> {
        a.par_iter()
            .filter(|r| {
                let tight: Vec<[i64; RANK]> = b.iter().filter(|x| x.dot(r) == 0).map(|x| *x.coeffs()).collect();
                int_rank(&tight) != RANK - 1
            })
            .copied()
            .collect()
    };
    let cone_non_extremal = non_extremal(&cone.generators, &dual.generators);
    let dual_non_extremal = non_extremal(&dual.generators, &cone.generators);
    let rays = |v: &[PicClass]| v.iter().map(PicClass::primitive).collect::<HashSet<_>>().len();
    let repeated_rays = cone.generators.len() - rays(&cone.generators) + dual.generators.len() - rays(&dual.generators);
    DualPairReport {
        cone: cone.name.clone(),
        dual: dual.name.clone(),
        pairs_checked: (cone.generators.len() * dual.generators.len()) as u64,
        negative_pairs: negatives.len() as u64,
        negative_examples: negatives.into_iter().take(10).collect(),
        cone_generators: cone.generators.len(),
        cone_extremal: cone.generators.len() - cone_non_extremal.len(),
        cone_non_extremal,
        dual_generators: dual.generators.len(),
        dual_extremal: dual.generators.len() - dual_non_extremal.len(),
        dual_non_extremal,
        repeated_rays,
    }
}

/// `L` is ample iff `L·ℓ > 0` for every (-1)-class `ℓ`.
pub fn is_ample(l: &RatClass) -> Result<bool> {
    if l.basis() != Basis::Surface {
        return Err(Error::WrongBasis { expected: Basis::Surface, found: l.basis() });
    }
    let p = ClassProbe::new(l);
    Ok(classes(ClassKind::MinusOne).iter().all(|ell| p.sign_with_head(1, ell.coeffs()) == Ordering::Greater))
}

/// One link of the chain `N ⊂ Π ⊂ E ⊂ Nef(S)`.
#[derive(Clone, Debug, Serialize)]
pub struct InclusionReport {
    pub inner: String,
    pub outer: String,
    pub method: String,
    pub checked: u64,
    pub failures: Vec<String>,
}

impl InclusionReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn generators_against_normals(inner: &ConeSpec, outer: &ConeSpec) -> InclusionReport {
    let failures: Vec<String> = inner
        .generators
        .par_iter()
        .filter_map(|g| outer.inequalities.iter().find(|n| g.dot(n) < 0).map(|n| format!("{g} pairs negatively with {n}")))
        .collect();
    InclusionReport {
        inner: inner.name.clone(),
        outer: outer.name.clone(),
        method: "generators against inequalities".into(),
        checked: (inner.generators.len() * outer.inequalities.len()) as u64,
        failures,
    }
}

/// `Π ⊂ E` is checked dually: every normal of E lies in Π∨. A normal `ℓ` is
/// itself a generator of Π∨; a normal `2h + K` is written as
/// `(2C + K) + 2ℓ` with `h·ℓ = 0` and `C = h - ℓ`. Any normal without such a
/// witness falls back to exact linear feasibility.
fn pi_inside_e() -> InclusionReport {
    let pi = cone(ConeName::Pi);
    let e = cone(ConeName::E);
    let pi_normals: HashSet<PicClass> = pi.inequalities.iter().copied().collect();
    let lines = classes(ClassKind::MinusOne);
    let pi_dual = cone(ConeName::PiDual);
    let failures: Vec<String> = e
        .inequalities
        .par_iter()
        .filter_map(|n| {
            if pi_normals.contains(n) {
                return None;
            }
            let witness = untwist(n).filter(|h| index_of(ClassKind::Cubic, h).is_some()).and_then(|h| {
                lines.iter().find(|l| l.dot(&h) == 0).map(|l| (twist_normal(&(h - *l)), *l))
            });
            match witness {
                Some((a, l)) if pi_normals.contains(&a) && pi_normals.contains(&l) && a + 2 * l == *n => None,
                _ => match pi_dual.membership(&RatClass::from(*n)) {
                    Ok(m) if m.is_member() => None,
                    _ => Some(format!("{n} is not in the dual of Π")),
                },
            }
        })
        .collect();
    InclusionReport {
        inner: pi.name.clone(),
        outer: e.name.clone(),
        method: "normals of E written in the generators of Π∨".into(),
        checked: e.inequalities.len() as u64,
        failures,
    }
}

/// The chain `N ⊂ Π ⊂ E ⊂ Nef(S)`.
pub fn verify_chain() -> Vec<InclusionReport> {
    vec![
        generators_against_normals(cone(ConeName::N), cone(ConeName::Pi)),
        pi_inside_e(),
        generators_against_normals(cone(ConeName::E), cone(ConeName::Nef)),
    ]
}

/// For every cubic `h`, `-K + 3h` spans an extremal ray of Π lying in the
/// interior of E, and the normals of Π vanishing on it are exactly the
/// eight `2Ci + K` with `Ci = h - ei`. Returns the cubics that fail.
pub fn bigray_failures() -> Vec<PicClass> {
    let pi = cone(ConeName::Pi);
    let e = cone(ConeName::E);
    let lines = classes(ClassKind::MinusOne);
    classes(ClassKind::Cubic)
        .par_iter()
        .filter(|h| {
            let p = -k_s() + 3 * **h;
            let tight: Vec<PicClass> = pi.inequalities.iter().filter(|n| n.dot(&p) < 1).copied().collect();
            if tight.iter().any(|n| n.dot(&p) < 0) {
                return true;
            }
            let mut expected: Vec<PicClass> =
                lines.iter().filter(|l| l.dot(h) == 0).map(|l| twist_normal(&(**h - *l))).collect();
            let mut got = tight.clone();
            expected.sort();
            got.sort();
            let rank = int_rank(&got.iter().map(|n| *n.coeffs()).collect::<Vec<_>>());
            let interior = e.inequalities.iter().all(|n| n.dot(&p) > 0);
            !(got == expected && rank == RANK - 1 && interior)
        })
        .copied()
        .collect()
}

/// All nef integral classes `L` with `-K·L = 2`. The Hodge index theorem
/// bounds `L² ≤ (K·L)²/K² = 4`, so the search is complete.
pub fn nef_classes_of_anticanonical_degree_two() -> Vec<PicClass> {
    let lines = classes(ClassKind::MinusOne);
    let mut out: Vec<PicClass> = (0..=4)
        .flat_map(|s| crate::classes::solve_signature(s, -2))
        .filter(|x| lines.iter().all(|l| l.dot(x) >= 0))
        .collect();
    out.sort();
    out
}

/// Extremal rays of the pointed cone `{x : pair(n, x) ≥ 0}` by the double
/// description method with the algebraic adjacency test. Rays are returned
/// as primitive classes in `basis`, sorted.
pub fn extreme_rays(normals: &[PicClass], basis: Basis) -> Result<Vec<PicClass>> {
    let rows: Vec<[i64; RANK]> = normals
        .iter()
        .map(|n| {
            let head = Basis::pairing_head(n.basis(), basis)?;
            let c = n.coeffs();
            Ok(std::array::from_fn(|i| if i == 0 { head * c[0] } else { -c[i] }))
        })
        .collect::<Result<_>>()?;
    let rank = int_rank(&rows);
    if rank < RANK {
        return Err(Error::RankDeficient { expected: RANK, found: rank });
    }
    // initial simplicial cone from independent rows
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..rows.len() {
        let mut t: Vec<[i64; RANK]> = chosen.iter().map(|&j| rows[j]).collect();
        t.push(rows[i]);
        if int_rank(&t) == t.len() {
            chosen.push(i);
            if chosen.len() == RANK {
                break;
            }
        }
    }
    let a0 = QMatrix::from_fn(RANK, RANK, |r, c| q(rows[chosen[r]][c]));
    let inv = a0.inverse().expect("independent rows");
    let mut rays: Vec<[i64; RANK]> = (0..RANK)
        .map(|c| {
            let v = crate::linalg::primitive_integer_vector(&inv.column(c));
            std::array::from_fn(|i| i64::try_from(&v[i]).expect("small ray"))
        })
        .collect();
    let mut processed: Vec<usize> = chosen.clone();
    let dot = |a: &[i64; RANK], b: &[i64; RANK]| -> i128 { a.iter().zip(b).map(|(x, y)| i128::from(*x) * i128::from(*y)).sum() };
    for i in 0..rows.len() {
        if chosen.contains(&i) {
            continue;
        }
        let a = rows[i];
        let vals: Vec<i128> = rays.iter().map(|r| dot(&a, r)).collect();
        let mut next: Vec<[i64; RANK]> =
            rays.iter().zip(&vals).filter(|(_, v)| **v >= 0).map(|(r, _)| *r).collect();
        let zero_set = |r: &[i64; RANK]| -> Vec<usize> { processed.iter().copied().filter(|&j| dot(&rows[j], r) == 0).collect() };
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| vals[k] > 0).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| vals[k] < 0).collect();
        let zsets: Vec<Vec<usize>> = rays.iter().map(zero_set).collect();
        for &p in &pos {
            for &n in &neg {
                let common: Vec<usize> = zsets[p].iter().copied().filter(|j| zsets[n].contains(j)).collect();
                if common.len() < RANK - 2 {
                    continue;
                }
                let cm: Vec<[i64; RANK]> = common.iter().map(|&j| rows[j]).collect();
                if int_rank(&cm) != RANK - 2 {
                    continue;
                }
                let (vp, vn) = (vals[p], -vals[n]);
                let comb: [i128; RANK] =
                    std::array::from_fn(|k| vp * i128::from(rays[n][k]) + vn * i128::from(rays[p][k]));
                let g = comb.iter().fold(0i128, |g, &x| num_integer::gcd(g, x));
                next.push(std::array::from_fn(|k| i64::try_from(comb[k] / g).expect("ray overflow")));
            }
        }
        rays = next;
        processed.push(i);
    }
    let mut out: Vec<PicClass> = rays.into_iter().map(|r| PicClass::new(basis, r)).collect();
    out.sort();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_roundtrip() {
        for n in ConeName::ALL {
            assert_eq!(n.as_str().parse::<ConeName>().unwrap(), n);
        }
        assert_eq!("e-dual".parse::<ConeName>().unwrap(), ConeName::EDual);
        assert!("Q".parse::<ConeName>().is_err());
    }

    #[test]
    fn octant_rays() {
        let normals: Vec<PicClass> = (0..RANK)
            .map(|i| {
                let mut c = [0; RANK];
                c[i] = if i == 0 { 1 } else { -1 };
                PicClass::surface(c)
            })
            .collect();
        let rays = extreme_rays(&normals, Basis::Surface).unwrap();
        assert_eq!(rays.len(), RANK);
        let too_few = &normals[..3];
        assert!(extreme_rays(too_few, Basis::Surface).is_err());
    }
}
