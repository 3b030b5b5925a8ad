//! The stability fan: walls `(2D + K_S)⊥` for D a (-1)-class, conic or
//! cubic, chambers as sign vectors over the canonical wall list, chamber
//! labels and wall crossings along segments.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::OnceLock;

use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::classes::{classes, ClassKind};
use crate::cones::{is_ample, twist_normal};
use crate::error::{Error, Result};
use crate::lattice::{k_s, Basis, ClassProbe, PicClass, RatClass};
use crate::linalg::{format_rational, q, Q};
use crate::surgery::SpecialLocus;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum WallKind {
    Curve,
    Conic,
    Cubic,
}

impl WallKind {
    pub fn class_kind(self) -> ClassKind {
        match self {
            WallKind::Curve => ClassKind::MinusOne,
            WallKind::Conic => ClassKind::Conic,
            WallKind::Cubic => ClassKind::Cubic,
        }
    }
}

impl fmt::Display for WallKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WallKind::Curve => "curve",
            WallKind::Conic => "conic",
            WallKind::Cubic => "cubic",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Wall {
    pub kind: WallKind,
    pub center: PicClass,
    pub normal: PicClass,
}

struct WallTable {
    walls: Vec<Wall>,
    by_center: HashMap<PicClass, usize>,
}

fn table() -> &'static WallTable {
    static T: OnceLock<WallTable> = OnceLock::new();
    T.get_or_init(|| {
        let walls: Vec<Wall> = [WallKind::Curve, WallKind::Conic, WallKind::Cubic]
            .into_iter()
            .flat_map(|kind| {
                classes(kind.class_kind()).iter().map(move |c| Wall { kind, center: *c, normal: twist_normal(c) })
            })
            .collect();
        let by_center = walls.iter().enumerate().map(|(i, w)| (w.center, i)).collect();
        WallTable { walls, by_center }
    })
}

/// The 19680 walls: curve walls, then conic walls, then cubic walls, each
/// block in canonical order of the centers.
pub fn all_walls() -> &'static [Wall] {
    &table().walls
}

/// Index in [`all_walls`] of the wall with the given center.
pub fn wall_index(center: &PicClass) -> Option<usize> {
    table().by_center.get(center).copied()
}

fn require_surface(l: &RatClass) -> Result<()> {
    if l.basis() != Basis::Surface {
        return Err(Error::WrongBasis { expected: Basis::Surface, found: l.basis() });
    }
    Ok(())
}

/// Walls whose normal pairs to zero with `l`.
pub fn walls_through(l: &RatClass) -> Result<Vec<Wall>> {
    require_surface(l)?;
    let p = ClassProbe::new(l);
    Ok(all_walls().iter().filter(|w| p.sign_with_head(1, w.normal.coeffs()) == Ordering::Equal).copied().collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
    #[serde(rename = "0")]
    Zero,
}

impl Sign {
    fn of(o: Ordering) -> Sign {
        match o {
            Ordering::Greater => Sign::Plus,
            Ordering::Less => Sign::Minus,
            Ordering::Equal => Sign::Zero,
        }
    }
}

/// Signs over [`all_walls`], one bit per wall (set = negative).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignVector {
    bits: Vec<u64>,
    len: usize,
}

impl SignVector {
    fn from_negatives(len: usize, negative: impl Iterator<Item = usize>) -> Self {
        let mut bits = vec![0u64; len.div_ceil(64)];
        for i in negative {
            bits[i / 64] |= 1 << (i % 64);
        }
        SignVector { bits, len }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_negative(&self, i: usize) -> bool {
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn sign(&self, i: usize) -> Sign {
        if self.is_negative(i) {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn negative_walls(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.is_negative(i)).collect()
    }

    pub fn count_negative(&self) -> usize {
        self.bits.iter().map(|b| b.count_ones() as usize).sum()
    }
}

impl Serialize for SignVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("SignVector", 2)?;
        st.serialize_field("walls", &self.len)?;
        st.serialize_field("negative", &self.negative_walls())?;
        st.end()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ChamberLabelKind {
    #[serde(rename = "C_h")]
    Outer,
    #[serde(rename = "B_h")]
    B,
    #[serde(rename = "F_h")]
    F,
    #[serde(rename = "CENTRAL")]
    Central,
}

/// A named chamber; `witness` is the cubic `h` for `C_h`, `B_h`, `F_h`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ChamberLabel {
    pub kind: ChamberLabelKind,
    pub witness: Option<PicClass>,
}

impl fmt::Display for ChamberLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            ChamberLabelKind::Outer => "C_h",
            ChamberLabelKind::B => "B_h",
            ChamberLabelKind::F => "F_h",
            ChamberLabelKind::Central => "CENTRAL",
        };
        match self.witness {
            Some(h) => write!(f, "{name} (h = {h})"),
            None => f.write_str(name),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Chamber {
    pub signs: SignVector,
    pub representative: RatClass,
    pub label: Option<ChamberLabel>,
}

fn signs_of(p: &ClassProbe) -> (Vec<usize>, Vec<usize>) {
    let mut neg = Vec::new();
    let mut zero = Vec::new();
    for (i, w) in all_walls().iter().enumerate() {
        match p.sign_with_head(1, w.normal.coeffs()) {
            Ordering::Less => neg.push(i),
            Ordering::Equal => zero.push(i),
            Ordering::Greater => {}
        }
    }
    (neg, zero)
}

fn check_ample_in_e(l: &RatClass) -> Result<()> {
    require_surface(l)?;
    if !is_ample(l)? {
        return Err(Error::NotAmple(l.to_string()));
    }
    let p = ClassProbe::new(l);
    if classes(ClassKind::Cubic).iter().any(|h| p.sign_with_head(1, twist_normal(h).coeffs()) == Ordering::Less) {
        return Err(Error::NotInEffectiveCone(l.to_string()));
    }
    Ok(())
}

/// The chamber containing `l`. If `l` lies on walls, every vanishing sign
/// is resolved to `+`: since `(2D + K)·(-K) = 2(-K·D) - 1 > 0` for every
/// center, moving from `l` towards `-K` enters a unique adjacent chamber.
/// The representative is `l + ε(-K)` for `ε` half the smallest distance to
/// a negative wall along `-K`.
pub fn chamber_of(l: &RatClass) -> Result<Chamber> {
    let mut c = chamber_of_unlabeled(l)?;
    c.label = label_chamber(&c);
    Ok(c)
}

fn chamber_of_unlabeled(l: &RatClass) -> Result<Chamber> {
    check_ample_in_e(l)?;
    Ok(chamber_unchecked(l))
}

fn chamber_unchecked(l: &RatClass) -> Chamber {
    let p = ClassProbe::new(l);
    let (neg, zero) = signs_of(&p);
    let signs = SignVector::from_negatives(all_walls().len(), neg.iter().copied());
    let representative = if zero.is_empty() {
        l.clone()
    } else {
        let mk = RatClass::from(-k_s());
        let walls = all_walls();
        let eps = neg
            .iter()
            .map(|&i| {
                let n = RatClass::from(walls[i].normal);
                let a = n.pair(l).expect("surface").abs();
                a / n.pair(&mk).expect("surface")
            })
            .min()
            .map(|m| m / q(2))
            .unwrap_or_else(|| q(1));
        l + &mk.scale(&eps)
    };
    Chamber { signs, representative, label: None }
}

/// For each cubic, the curve walls of the eight (-1)-classes orthogonal to it.
fn orthogonal_lines() -> &'static [[usize; 8]] {
    static T: OnceLock<Vec<[usize; 8]>> = OnceLock::new();
    T.get_or_init(|| {
        let lines = classes(ClassKind::MinusOne);
        classes(ClassKind::Cubic)
            .iter()
            .map(|h| {
                let idx: Vec<usize> = lines
                    .iter()
                    .filter(|l| l.dot(h) == 0)
                    .map(|l| wall_index(l).expect("curve wall"))
                    .collect();
                idx.try_into().expect("eight orthogonal (-1)-classes")
            })
            .collect()
    })
}

/// Representative points `-K + 4h`, `-K + 2h`, `-2K + h` of `C_h`, `B_h`, `F_h`.
pub fn labeled_point(kind: ChamberLabelKind, h: &PicClass) -> RatClass {
    let k = k_s();
    RatClass::from(match kind {
        ChamberLabelKind::Outer => -k + 4 * *h,
        ChamberLabelKind::B => -k + 2 * *h,
        ChamberLabelKind::F => -2 * k + *h,
        ChamberLabelKind::Central => -k,
    })
}

/// Names the chamber if it is the central chamber or one of `C_h`, `B_h`,
/// `F_h`, comparing sign vectors with those of the labeled points. In all
/// three outer types the curve walls of the eight (-1)-classes orthogonal to
/// `h` are negative, which prunes the cubics tried.
pub fn label_chamber(c: &Chamber) -> Option<ChamberLabel> {
    if c.signs.count_negative() == 0 {
        return Some(ChamberLabel { kind: ChamberLabelKind::Central, witness: None });
    }
    let cubics = classes(ClassKind::Cubic);
    for (k, lines) in orthogonal_lines().iter().enumerate() {
        if !lines.iter().all(|&i| c.signs.is_negative(i)) {
            continue;
        }
        for kind in [ChamberLabelKind::Outer, ChamberLabelKind::B, ChamberLabelKind::F] {
            let p = ClassProbe::new(&labeled_point(kind, &cubics[k]));
            let (neg, _) = signs_of(&p);
            if SignVector::from_negatives(c.signs.len(), neg.into_iter()) == c.signs {
                return Some(ChamberLabel { kind, witness: Some(cubics[k]) });
            }
        }
    }
    None
}

/// The birational surgery attached to crossing one wall.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Surgery {
    /// Conic wall from `-` to `+`: a point is blown up to `E_C ≅ P³`.
    BlowUpPoint,
    /// Conic wall from `+` to `-`: `E_C` is contracted to the point `F_C`.
    ContractDivisor,
    /// Curve wall from `-` to `+`: `Z_ℓ ≅ P¹` is replaced by `P_ℓ ≅ P²`.
    FlipLineToPlane,
    /// Curve wall from `+` to `-`: `P_ℓ ≅ P²` is replaced by `Z_ℓ ≅ P¹`.
    FlipPlaneToLine,
    /// Cubic wall from `+` to `-`: the moduli space becomes empty.
    ExitEffectiveCone,
    EnterEffectiveCone,
}

impl Surgery {
    pub fn of(kind: WallKind, from: Sign) -> Surgery {
        let down = from == Sign::Plus;
        match (kind, down) {
            (WallKind::Curve, true) => Surgery::FlipPlaneToLine,
            (WallKind::Curve, false) => Surgery::FlipLineToPlane,
            (WallKind::Conic, true) => Surgery::ContractDivisor,
            (WallKind::Conic, false) => Surgery::BlowUpPoint,
            (WallKind::Cubic, true) => Surgery::ExitEffectiveCone,
            (WallKind::Cubic, false) => Surgery::EnterEffectiveCone,
        }
    }

    pub fn inverse(self) -> Surgery {
        match self {
            Surgery::BlowUpPoint => Surgery::ContractDivisor,
            Surgery::ContractDivisor => Surgery::BlowUpPoint,
            Surgery::FlipLineToPlane => Surgery::FlipPlaneToLine,
            Surgery::FlipPlaneToLine => Surgery::FlipLineToPlane,
            Surgery::ExitEffectiveCone => Surgery::EnterEffectiveCone,
            Surgery::EnterEffectiveCone => Surgery::ExitEffectiveCone,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WallCrossing {
    pub index: usize,
    pub wall: Wall,
    pub from: Sign,
    pub to: Sign,
    pub surgery: Surgery,
}

/// All walls crossed at one parameter value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossingEvent {
    #[serde(serialize_with = "ser_rational")]
    pub t: Q,
    pub crossings: Vec<WallCrossing>,
}

impl CrossingEvent {
    /// The common surgery of all crossings, if they agree.
    pub fn surgery(&self) -> Option<Surgery> {
        let first = self.crossings.first()?.surgery;
        self.crossings.iter().all(|c| c.surgery == first).then_some(first)
    }

    pub fn centers(&self) -> Vec<PicClass> {
        self.crossings.iter().map(|c| c.wall.center).collect()
    }
}

pub(crate) fn ser_rational<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(x))
}

/// Wall crossings along `(1 - t)·l0 + t·l1` for ample `l0`, `l1` in E and
/// on no wall.
pub fn cross_path(l0: &RatClass, l1: &RatClass) -> Result<Vec<CrossingEvent>> {
    if l0 == l1 {
        return Ok(Vec::new());
    }
    for l in [l0, l1] {
        check_ample_in_e(l)?;
        if let Some(w) = walls_through(l)?.first() {
            return Err(Error::OnWall { point: l.to_string(), center: w.center.to_string() });
        }
    }
    segment_crossings(l0, l1)
}

/// Same as [`cross_path`] without the ampleness and effectivity checks, so
/// that segments leaving E (such as the one from `h` to `ι*h`) can be
/// followed. The crossing parameter of wall `w` is
/// `t* = w·l0 / w·(l0 - l1)`.
pub fn segment_crossings(l0: &RatClass, l1: &RatClass) -> Result<Vec<CrossingEvent>> {
    require_surface(l0)?;
    require_surface(l1)?;
    if l0 == l1 {
        return Ok(Vec::new());
    }
    let p0 = ClassProbe::new(l0);
    let p1 = ClassProbe::new(l1);
    let mut events: BTreeMap<Q, Vec<WallCrossing>> = BTreeMap::new();
    for (i, w) in all_walls().iter().enumerate() {
        let a = Sign::of(p0.sign_with_head(1, w.normal.coeffs()));
        let b = Sign::of(p1.sign_with_head(1, w.normal.coeffs()));
        match (a, b) {
            (Sign::Zero, Sign::Zero) => return Err(Error::SegmentInWall { center: w.center.to_string() }),
            (Sign::Zero, _) => return Err(Error::OnWall { point: l0.to_string(), center: w.center.to_string() }),
            (_, Sign::Zero) => return Err(Error::OnWall { point: l1.to_string(), center: w.center.to_string() }),
            _ if a == b => continue,
            _ => {}
        }
        let n = RatClass::from(w.normal);
        let v0 = n.pair(l0)?;
        let v1 = n.pair(l1)?;
        let t = &v0 / (&v0 - &v1);
        events.entry(t).or_default().push(WallCrossing {
            index: i,
            wall: *w,
            from: a,
            to: b,
            surgery: Surgery::of(w.kind, a),
        });
    }
    Ok(events.into_iter().map(|(t, crossings)| CrossingEvent { t, crossings }).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ModelKind {
    Empty,
    P4,
    #[serde(rename = "SMOOTH_4FOLD")]
    Smooth4Fold,
}

#[derive(Clone, Debug, Serialize)]
pub struct ModuliStatus {
    pub kind: ModelKind,
    pub chamber: Option<ChamberLabel>,
    pub loci: Vec<SpecialLocus>,
    pub note: Option<String>,
}

/// What the moduli space looks like at an ample `l`: empty outside E, `P⁴`
/// when the adjacent chamber is some `C_h`, otherwise a smooth fourfold. On
/// `r` curve walls and `s` conic walls inside E the special loci `P_ℓ` and
/// `E_C` are listed.
pub fn moduli_status(l: &RatClass) -> Result<ModuliStatus> {
    require_surface(l)?;
    if !is_ample(l)? {
        return Err(Error::NotAmple(l.to_string()));
    }
    let p = ClassProbe::new(l);
    let mut on_boundary = false;
    for h in classes(ClassKind::Cubic) {
        match p.sign_with_head(1, twist_normal(h).coeffs()) {
            Ordering::Less => return Ok(ModuliStatus { kind: ModelKind::Empty, chamber: None, loci: Vec::new(), note: None }),
            Ordering::Equal => on_boundary = true,
            Ordering::Greater => {}
        }
    }
    let chamber = chamber_of(l)?;
    if matches!(chamber.label, Some(ChamberLabel { kind: ChamberLabelKind::Outer, .. })) {
        return Ok(ModuliStatus { kind: ModelKind::P4, chamber: chamber.label, loci: Vec::new(), note: None });
    }
    let mut loci = Vec::new();
    if !on_boundary {
        for w in walls_through(l)? {
            match w.kind {
                WallKind::Curve => loci.push(SpecialLocus::p_ell(&w.center)),
                WallKind::Conic => loci.push(SpecialLocus::e_c(&w.center)),
                WallKind::Cubic => {}
            }
        }
    }
    let note = (!loci.is_empty())
        .then(|| format!("the exceptional locus maps to {} distinct points of the slope moduli space", loci.len()));
    Ok(ModuliStatus { kind: ModelKind::Smooth4Fold, chamber: chamber.label, loci, note })
}

/// The path `L_t = (1 - t)h + t·ι*h = -6tK + (1 - 2t)h`.
pub fn lt_point(h: &PicClass, t: &Q) -> RatClass {
    let hp = crate::lattice::bertini_pullback(h).expect("surface class");
    let a = RatClass::from(*h).scale(&(q(1) - t));
    let b = RatClass::from(hp).scale(t);
    &a + &b
}

/// Value of `t` at which `L_t` is proportional to `a(-K) + b·h`, for `a, b ≥ 0`.
pub fn lt_parameter(a: &Q, b: &Q) -> Option<Q> {
    // a(-K) + bh ∝ 6t(-K) + (1-2t)h  ⇔  a(1-2t) = 6tb
    let den = q(2) * a + q(6) * b;
    (!den.is_zero()).then(|| a / den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surgery_inverse_is_involutive() {
        for s in [
            Surgery::BlowUpPoint,
            Surgery::ContractDivisor,
            Surgery::FlipLineToPlane,
            Surgery::FlipPlaneToLine,
            Surgery::ExitEffectiveCone,
            Surgery::EnterEffectiveCone,
        ] {
            assert_eq!(s.inverse().inverse(), s);
            assert_ne!(s.inverse(), s);
        }
    }

    #[test]
    fn lt_parameters() {
        assert_eq!(lt_parameter(&q(1), &q(4)), Some(Q::new(1.into(), 26.into())));
        assert_eq!(lt_parameter(&q(1), &q(2)), Some(Q::new(1.into(), 14.into())));
        assert_eq!(lt_parameter(&q(2), &q(1)), Some(Q::new(1.into(), 5.into())));
        assert_eq!(lt_parameter(&q(1), &q(0)), Some(Q::new(1.into(), 2.into())));
    }
}
