//! Roots, (-1)-classes, conics and cubics on S, the Weyl group W(E8) acting
//! by reflections, and the incidence counts built on them.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{k_s, Basis, LatticeMap, PicClass, RANK};

pub const DEFAULT_ORBIT_CAP: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassKind {
    Root,
    MinusOne,
    Conic,
    Cubic,
}

impl ClassKind {
    pub const ALL: [ClassKind; 4] = [ClassKind::Root, ClassKind::MinusOne, ClassKind::Conic, ClassKind::Cubic];

    /// `x²`.
    pub fn square(self) -> i64 {
        match self {
            ClassKind::Root => -2,
            ClassKind::MinusOne => -1,
            ClassKind::Conic => 0,
            ClassKind::Cubic => 1,
        }
    }

    /// `x·K_S`.
    pub fn canonical_degree(self) -> i64 {
        match self {
            ClassKind::Root => 0,
            ClassKind::MinusOne => -1,
            ClassKind::Conic => -2,
            ClassKind::Cubic => -3,
        }
    }

    /// `e1 - e2`, `e1`, `h - e1`, `h`.
    pub fn seed(self) -> PicClass {
        match self {
            ClassKind::Root => PicClass::surface([0, -1, 1, 0, 0, 0, 0, 0, 0]),
            ClassKind::MinusOne => PicClass::surface([0, -1, 0, 0, 0, 0, 0, 0, 0]),
            ClassKind::Conic => PicClass::surface([1, 1, 0, 0, 0, 0, 0, 0, 0]),
            ClassKind::Cubic => PicClass::surface([1, 0, 0, 0, 0, 0, 0, 0, 0]),
        }
    }

    pub fn expected_count(self) -> usize {
        match self {
            ClassKind::Root | ClassKind::MinusOne => 240,
            ClassKind::Conic => 2160,
            ClassKind::Cubic => 17280,
        }
    }

    pub fn matches(self, x: &PicClass) -> bool {
        x.basis() == Basis::Surface && x.square() == self.square() && x.dot(&k_s()) == self.canonical_degree()
    }

    fn slot(self) -> usize {
        self as usize
    }
}

impl fmt::Display for ClassKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassKind::Root => "root",
            ClassKind::MinusOne => "(-1)-class",
            ClassKind::Conic => "conic",
            ClassKind::Cubic => "cubic",
        })
    }
}

impl FromStr for ClassKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "root" | "roots" => Ok(ClassKind::Root),
            "minus-one" | "minus_one" | "(-1)" | "lines" => Ok(ClassKind::MinusOne),
            "conic" | "conics" => Ok(ClassKind::Conic),
            "cubic" | "cubics" => Ok(ClassKind::Cubic),
            _ => Err(Error::InvalidArgument(format!("unknown class kind {s:?}"))),
        }
    }
}

/// The kind whose signature `x` satisfies, if any.
pub fn classify(x: &PicClass) -> Option<ClassKind> {
    ClassKind::ALL.into_iter().find(|k| k.matches(x))
}

pub(crate) fn require_kind(x: &PicClass, kind: ClassKind) -> Result<()> {
    if kind.matches(x) {
        Ok(())
    } else {
        Err(Error::WrongKind { class: x.to_string(), expected: kind.to_string() })
    }
}

/// Range of `d` for which `d² - Σmi² = square` and `-3d + Σmi = dot_k` can
/// have real solutions. Cauchy–Schwarz gives `(Σmi)² ≤ 8Σmi²`, that is
/// `(d + 3k)² ≤ 8(k² - s)`.
pub fn degree_window(square: i64, dot_k: i64) -> Option<(i64, i64)> {
    let disc = 8 * (dot_k * dot_k - square);
    if disc < 0 {
        return None;
    }
    let r = isqrt(disc);
    Some((-3 * dot_k - r, -3 * dot_k + r))
}

fn isqrt(n: i64) -> i64 {
    if n < 0 {
        return -1;
    }
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// All surface classes with `x² = square` and `x·K_S = dot_k`, sorted.
pub fn solve_signature(square: i64, dot_k: i64) -> Vec<PicClass> {
    let mut out = Vec::new();
    let Some((lo, hi)) = degree_window(square, dot_k) else {
        return out;
    };
    for d in lo..=hi {
        let sum = 3 * d + dot_k;
        let sq = d * d - square;
        if sq < 0 {
            continue;
        }
        let mut m = [0i64; 8];
        fill(&mut m, 0, sum, sq, &mut |m| {
            let mut c = [0i64; RANK];
            c[0] = d;
            c[1..].copy_from_slice(m);
            out.push(PicClass::surface(c));
        });
    }
    out.sort();
    out
}

fn fill(m: &mut [i64; 8], pos: usize, sum: i64, sq: i64, emit: &mut impl FnMut(&[i64; 8])) {
    let left = (8 - pos) as i64;
    if left == 0 {
        if sum == 0 && sq == 0 {
            emit(m);
        }
        return;
    }
    if sq < 0 || sum * sum > left * sq {
        return;
    }
    let b = isqrt(sq);
    for v in -b..=b {
        m[pos] = v;
        fill(m, pos + 1, sum - v, sq - v * v, emit);
    }
}

/// The simple roots `e1 - e2, ..., e7 - e8, h - e1 - e2 - e3`.
pub fn simple_roots() -> [PicClass; 8] {
    std::array::from_fn(|i| {
        if i < 7 {
            PicClass::exceptional(Basis::Surface, i + 1) - PicClass::exceptional(Basis::Surface, i + 2)
        } else {
            PicClass::surface([1, 1, 1, 1, 0, 0, 0, 0, 0])
        }
    })
}

fn reflect_unchecked(alpha: &PicClass, x: &PicClass) -> PicClass {
    *x + x.dot(alpha) * *alpha
}

/// `s_α(x) = x + (x·α)α` for a root `α`.
pub fn reflect(alpha: &PicClass, x: &PicClass) -> Result<PicClass> {
    require_kind(alpha, ClassKind::Root)?;
    if x.basis() != Basis::Surface {
        return Err(Error::WrongBasis { expected: Basis::Surface, found: x.basis() });
    }
    Ok(reflect_unchecked(alpha, x))
}

/// W(E8)-orbit of `seed` by breadth-first closure under the simple
/// reflections, sorted.
pub fn orbit(seed: &PicClass) -> Result<Vec<PicClass>> {
    orbit_with_cap(seed, DEFAULT_ORBIT_CAP)
}

pub fn orbit_with_cap(seed: &PicClass, cap: usize) -> Result<Vec<PicClass>> {
    if seed.basis() != Basis::Surface {
        return Err(Error::WrongBasis { expected: Basis::Surface, found: seed.basis() });
    }
    let roots = simple_roots();
    let mut seen: HashSet<PicClass> = HashSet::from([*seed]);
    let mut frontier = vec![*seed];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for x in &frontier {
            for a in &roots {
                let y = reflect_unchecked(a, x);
                if seen.insert(y) {
                    if seen.len() > cap {
                        return Err(Error::OrbitCap { seed: seed.to_string(), cap });
                    }
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    let mut out: Vec<PicClass> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}

/// Solutions of the defining conditions of a kind. For roots, (-1)-classes
/// and conics this is the signature alone. A cubic is in addition nef (it
/// is pulled back from a line under a birational morphism to P²): the
/// signature `(1, -3)` alone also admits the 240 classes `-K_S + 2ℓ`, which
/// pair to `-1` with `ℓ`. See [`non_nef_cubic_signature_classes`].
pub fn defining_solutions(kind: ClassKind) -> Vec<PicClass> {
    let mut v = solve_signature(kind.square(), kind.canonical_degree());
    if kind == ClassKind::Cubic {
        let lines = enumerate(ClassKind::MinusOne).map(<[PicClass]>::to_vec).unwrap_or_default();
        v.retain(|x| lines.iter().all(|l| l.dot(x) >= 0));
    }
    v
}

/// Classes with the cubic signature `(1, -3)` that are not nef, sorted.
pub fn non_nef_cubic_signature_classes() -> Vec<PicClass> {
    let lines = classes(ClassKind::MinusOne);
    solve_signature(1, -3).into_iter().filter(|x| lines.iter().any(|l| l.dot(x) < 0)).collect()
}

static ENUMERATIONS: [OnceLock<Result<Vec<PicClass>>>; 4] = [const { OnceLock::new() }; 4];
static INDICES: [OnceLock<HashMap<PicClass, usize>>; 4] = [const { OnceLock::new() }; 4];

/// The classes of one kind, sorted. The solution set of the defining
/// conditions is computed and compared element by element with the Weyl
/// orbit of the seed; any difference is returned as an error listing both
/// sides.
pub fn enumerate(kind: ClassKind) -> Result<&'static [PicClass]> {
    let cell = ENUMERATIONS[kind.slot()].get_or_init(|| {
        let (solutions, orb) = rayon::join(|| defining_solutions(kind), || orbit(&kind.seed()));
        let orb = orb?;
        if solutions != orb {
            let a: HashSet<_> = solutions.iter().collect();
            let b: HashSet<_> = orb.iter().collect();
            let mut only_in_orbit: Vec<PicClass> = b.difference(&a).map(|c| **c).collect();
            let mut only_in_solutions: Vec<PicClass> = a.difference(&b).map(|c| **c).collect();
            only_in_orbit.sort();
            only_in_solutions.sort();
            return Err(Error::EnumerationMismatch { kind: kind.to_string(), only_in_orbit, only_in_solutions });
        }
        Ok(orb)
    });
    cell.as_deref().map_err(Clone::clone)
}

/// Like [`enumerate`], panicking with the diagnostic if the two
/// computations disagree.
pub fn classes(kind: ClassKind) -> &'static [PicClass] {
    match enumerate(kind) {
        Ok(v) => v,
        Err(e) => panic!("{e}"),
    }
}

/// Position of `x` in [`classes`]`(kind)`.
pub fn index_of(kind: ClassKind, x: &PicClass) -> Option<usize> {
    INDICES[kind.slot()]
        .get_or_init(|| classes(kind).iter().enumerate().map(|(i, c)| (*c, i)).collect())
        .get(x)
        .copied()
}

/// An element of W(E8) acting on Pic(S).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WeylElement {
    map: LatticeMap,
}

impl WeylElement {
    pub fn identity() -> Self {
        WeylElement { map: LatticeMap::identity(Basis::Surface) }
    }

    /// Simple reflection `i` in `0..8`, indexing [`simple_roots`].
    pub fn simple_reflection(i: usize) -> Self {
        Self::reflection_unchecked(&simple_roots()[i])
    }

    pub fn reflection(alpha: &PicClass) -> Result<Self> {
        require_kind(alpha, ClassKind::Root)?;
        Ok(Self::reflection_unchecked(alpha))
    }

    fn reflection_unchecked(alpha: &PicClass) -> Self {
        let imgs: [PicClass; RANK] = std::array::from_fn(|i| reflect_unchecked(alpha, &basis_class(i)));
        WeylElement { map: LatticeMap::from_images(Basis::Surface, Basis::Surface, &imgs) }
    }

    /// `s_{w[0]} ∘ s_{w[1]} ∘ ...`.
    pub fn from_word(word: &[usize]) -> Self {
        word.iter().fold(Self::identity(), |acc, &i| acc.compose(&Self::simple_reflection(i)))
    }

    pub fn random_word<R: Rng>(rng: &mut R, len: usize) -> Vec<usize> {
        (0..len).map(|_| rng.gen_range(0..8)).collect()
    }

    /// The Bertini involution, which is `-1` on `K⊥` and so lies in W(E8).
    pub fn bertini() -> Self {
        WeylElement { map: crate::lattice::bertini_map() }
    }

    /// Accepts an integral isometry of Pic(S) fixing `K_S`. Since every
    /// automorphism of the E8 lattice is a Weyl group element, this is the
    /// full membership test.
    pub fn try_from_map(map: LatticeMap) -> Result<Self> {
        if map.source() != Basis::Surface || map.target() != Basis::Surface {
            return Err(Error::NotInWeylGroup("not an endomorphism of Pic(S)".into()));
        }
        if !map.preserves_pairing() {
            return Err(Error::NotInWeylGroup("does not preserve the intersection form".into()));
        }
        if map.apply(&k_s())? != k_s() {
            return Err(Error::NotInWeylGroup("does not fix K_S".into()));
        }
        Ok(WeylElement { map })
    }

    pub fn map(&self) -> &LatticeMap {
        &self.map
    }

    pub fn apply(&self, x: &PicClass) -> Result<PicClass> {
        self.map.apply(x)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &WeylElement) -> Self {
        WeylElement { map: self.map.compose(&other.map).expect("both act on Pic(S)") }
    }

    /// For an isometry `w` of `J = diag(1, -1, ..., -1)`, `w⁻¹ = J wᵀ J`.
    pub fn inverse(&self) -> Self {
        let m = self.map.matrix();
        let j = |i: usize| if i == 0 { 1 } else { -1 };
        let mut inv = [[0i64; RANK]; RANK];
        for (r, row) in inv.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                *v = j(r) * m[c][r] * j(c);
            }
        }
        WeylElement { map: LatticeMap::from_matrix(Basis::Surface, Basis::Surface, inv) }
    }

    pub fn preserves_pairing(&self) -> bool {
        self.map.preserves_pairing()
    }

    pub fn fixes_canonical(&self) -> bool {
        self.apply(&k_s()).map(|k| k == k_s()).unwrap_or(false)
    }
}

fn basis_class(i: usize) -> PicClass {
    if i == 0 {
        PicClass::hyperplane(Basis::Surface)
    } else {
        PicClass::exceptional(Basis::Surface, i)
    }
}

/// Moves `x` into the fundamental chamber `{x·α ≥ 0 for all simple α}` by
/// simple reflections. Returns the dominant class and the reflections
/// applied, in order.
pub fn reduce_to_dominant(x: &PicClass) -> Result<(PicClass, Vec<usize>)> {
    if x.basis() != Basis::Surface {
        return Err(Error::WrongBasis { expected: Basis::Surface, found: x.basis() });
    }
    let roots = simple_roots();
    let mut cur = *x;
    let mut word = Vec::new();
    while let Some(i) = (0..8).find(|&i| cur.dot(&roots[i]) < 0) {
        cur = reflect_unchecked(&roots[i], &cur);
        word.push(i);
    }
    Ok((cur, word))
}

/// Coordinates of `x` in the basis adapted to the cubic `hmark`: the image
/// of `x` under a Weyl element sending `hmark` to `h`.
pub fn adapted_coordinates(hmark: &PicClass, x: &PicClass) -> Result<PicClass> {
    require_kind(hmark, ClassKind::Cubic)?;
    let (dom, word) = reduce_to_dominant(hmark)?;
    if dom != PicClass::hyperplane(Basis::Surface) {
        return Err(Error::WrongKind { class: hmark.to_string(), expected: "cubic".into() });
    }
    let roots = simple_roots();
    let mut cur = *x;
    for i in word {
        cur = reflect_unchecked(&roots[i], &cur);
    }
    Ok(cur)
}

/// Conics `C` with `C·ℓ = 0`.
pub fn conics_disjoint_from(ell: &PicClass) -> Result<Vec<PicClass>> {
    require_kind(ell, ClassKind::MinusOne)?;
    Ok(classes(ClassKind::Conic).iter().filter(|c| c.dot(ell) == 0).copied().collect())
}

/// (-1)-classes `ℓ` with `C·ℓ = 0`.
pub fn minus_one_components_of(c: &PicClass) -> Result<Vec<PicClass>> {
    require_kind(c, ClassKind::Conic)?;
    Ok(classes(ClassKind::MinusOne).iter().filter(|l| l.dot(c) == 0).copied().collect())
}

/// Number of points in `P_ℓ1 ∩ P_ℓ2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocusIntersection {
    pub pairing: i64,
    pub points: u8,
    /// Set on the three-point branch, which needs S general.
    pub generality_assumed: bool,
}

pub fn locus_intersection_count(l1: &PicClass, l2: &PicClass) -> Result<LocusIntersection> {
    require_kind(l1, ClassKind::MinusOne)?;
    require_kind(l2, ClassKind::MinusOne)?;
    if l1 == l2 {
        return Err(Error::EqualClasses);
    }
    let p = l1.dot(l2);
    let (points, generality_assumed) = match p {
        0 | 1 => (0, false),
        2 => (1, false),
        3 => (3, true),
        _ => unreachable!("distinct (-1)-classes pair to {p}, outside 0..=3"),
    };
    Ok(LocusIntersection { pairing: p, points, generality_assumed })
}

/// The largest value of `h·h'` over cubics `h' ≠ h`, and the cubics attaining it.
pub fn max_cubic_pairing(h: &PicClass) -> Result<(i64, Vec<PicClass>)> {
    require_kind(h, ClassKind::Cubic)?;
    let mut best = i64::MIN;
    let mut at = Vec::new();
    for c in classes(ClassKind::Cubic).iter().filter(|c| *c != h) {
        let p = c.dot(h);
        if p > best {
            best = p;
            at.clear();
        }
        if p == best {
            at.push(*c);
        }
    }
    Ok((best, at))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(c: [i64; 9]) -> PicClass {
        PicClass::surface(c)
    }

    #[test]
    fn windows() {
        assert_eq!(degree_window(1, -3), Some((1, 17)));
        assert_eq!(degree_window(0, -2), Some((1, 11)));
        assert_eq!(degree_window(-1, -1), Some((-1, 7)));
        assert_eq!(degree_window(-2, 0), Some((-4, 4)));
        assert_eq!(degree_window(5, 0), None);
    }

    #[test]
    fn reflections() {
        let a = s([0, -1, 1, 0, 0, 0, 0, 0, 0]);
        let e1 = PicClass::exceptional(Basis::Surface, 1);
        let e2 = PicClass::exceptional(Basis::Surface, 2);
        assert_eq!(reflect(&a, &e1).unwrap(), e2);
        assert_eq!(reflect(&a, &a).unwrap(), -a);
        let cremona = simple_roots()[7];
        let h = PicClass::hyperplane(Basis::Surface);
        assert_eq!(reflect(&cremona, &h).unwrap(), s([2, 1, 1, 1, 0, 0, 0, 0, 0]));
        assert!(reflect(&h, &h).is_err());
    }

    #[test]
    fn canonical_orbit_is_a_point() {
        assert_eq!(orbit(&k_s()).unwrap(), vec![k_s()]);
    }

    #[test]
    fn orbit_cap() {
        assert!(matches!(orbit_with_cap(&ClassKind::MinusOne.seed(), 100), Err(Error::OrbitCap { .. })));
    }

    #[test]
    fn weyl_inverse() {
        let w = WeylElement::from_word(&[7, 0, 3, 7, 5]);
        assert_eq!(w.compose(&w.inverse()), WeylElement::identity());
        assert!(w.preserves_pairing() && w.fixes_canonical());
    }

    #[test]
    fn try_from_map_rejects_non_isometries() {
        let m = LatticeMap::from_matrix(Basis::Surface, Basis::Surface, {
            let mut m = *LatticeMap::identity(Basis::Surface).matrix();
            m[0][0] = 2;
            m
        });
        assert!(WeylElement::try_from_map(m).is_err());
        let neg = LatticeMap::from_matrix(Basis::Surface, Basis::Surface, {
            let mut m = [[0; 9]; 9];
            for (i, r) in m.iter_mut().enumerate() {
                r[i] = -1;
            }
            m
        });
        assert!(WeylElement::try_from_map(neg).is_err());
        assert!(WeylElement::try_from_map(*WeylElement::bertini().map()).is_ok());
    }

    #[test]
    fn dominant_reduction_of_cubic() {
        let hp = s([17, 6, 6, 6, 6, 6, 6, 6, 6]);
        let (dom, word) = reduce_to_dominant(&hp).unwrap();
        assert_eq!(dom, PicClass::hyperplane(Basis::Surface));
        assert!(!word.is_empty());
    }
}
