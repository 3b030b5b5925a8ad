//! Surgery ledgers: the special loci created at walls, the numerical
//! invariants of the fourfold models carried along a path of polarizations,
//! and the degrees of the special surfaces `V_{h,ℓ} ⊂ P⁴`.

use std::fmt;

use serde::Serialize;

use crate::classes::{adapted_coordinates, classes, locus_intersection_count, require_kind, ClassKind};
use crate::cones::{is_ample, twist_normal};
use crate::determinant::{fixed_divisor_class, zeta_inverse};
use crate::error::{Error, Result};
use crate::fan::{chamber_of, segment_crossings, walls_through, ChamberLabel, ChamberLabelKind, Surgery};
use crate::lattice::{bertini_pullback, k_s, k_x, Basis, PicClass, RatClass};
use crate::linalg::{q, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum LocusKind {
    #[serde(rename = "P_ELL")]
    PEll,
    #[serde(rename = "Z_ELL")]
    ZEll,
    #[serde(rename = "E_C")]
    EC,
    #[serde(rename = "F_C_POINT")]
    FCPoint,
}

/// A locus of strictly semistable sheaves created at a wall.
///
/// `ext_dims` holds `(h¹(K_S + 2D), h¹(-K_S - 2D))`; the locus on the
/// positive side of the wall is `P(Ext¹(O(D), O(-K_S - D)))` of dimension
/// `h¹(-K_S - 2D) - 1`, the one on the negative side has dimension
/// `h¹(K_S + 2D) - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpecialLocus {
    pub kind: LocusKind,
    pub class: PicClass,
    pub dimension: u8,
    pub normal_bundle: Option<&'static str>,
    pub ext_dims: (u8, u8),
}

impl SpecialLocus {
    pub fn p_ell(ell: &PicClass) -> Self {
        SpecialLocus { kind: LocusKind::PEll, class: *ell, dimension: 2, normal_bundle: Some("O(-1)^2"), ext_dims: (2, 3) }
    }

    pub fn z_ell(ell: &PicClass) -> Self {
        SpecialLocus { kind: LocusKind::ZEll, class: *ell, dimension: 1, normal_bundle: Some("O(-1)^3"), ext_dims: (2, 3) }
    }

    pub fn e_c(c: &PicClass) -> Self {
        SpecialLocus { kind: LocusKind::EC, class: *c, dimension: 3, normal_bundle: Some("O(-1)"), ext_dims: (1, 4) }
    }

    pub fn f_c(c: &PicClass) -> Self {
        SpecialLocus { kind: LocusKind::FCPoint, class: *c, dimension: 0, normal_bundle: None, ext_dims: (1, 4) }
    }
}

/// Numerical invariants of a smooth fourfold model. `k4` is `(-K)⁴`,
/// `h0_minus_k` is `h⁰(-K)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FourfoldInvariants {
    pub b2: i64,
    pub b3: i64,
    pub b4: i64,
    pub k4: i64,
    pub h0_minus_k: i64,
    pub h12: i64,
    pub h13: i64,
}

impl FourfoldInvariants {
    pub const P4: Self = Self::new(1, 0, 1, 625, 126);
    /// The blow-up of `P⁴` at eight points.
    pub const X: Self = Self::new(9, 0, 9, -23, 6);
    /// The Fano model.
    pub const Y: Self = Self::new(9, 0, 45, 13, 6);
    pub const ZERO: Self = Self::new(0, 0, 0, 0, 0);

    pub const fn new(b2: i64, b3: i64, b4: i64, k4: i64, h0_minus_k: i64) -> Self {
        FourfoldInvariants { b2, b3, b4, k4, h0_minus_k, h12: 0, h13: 0 }
    }

    /// `(b2, b3, b4, K⁴, h⁰(-K))`.
    pub fn tuple(&self) -> (i64, i64, i64, i64, i64) {
        (self.b2, self.b3, self.b4, self.k4, self.h0_minus_k)
    }

    pub fn apply(&self, d: &InvariantDelta) -> Self {
        FourfoldInvariants {
            b2: self.b2 + d.b2,
            b4: self.b4 + d.b4,
            k4: self.k4 + d.k4,
            h0_minus_k: self.h0_minus_k + d.h0_minus_k,
            ..*self
        }
    }
}

impl fmt::Display for FourfoldInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {}, {})", self.b2, self.b3, self.b4, self.k4, self.h0_minus_k)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct InvariantDelta {
    pub b2: i64,
    pub b4: i64,
    pub k4: i64,
    pub h0_minus_k: i64,
}

impl InvariantDelta {
    fn scaled(self, k: i64) -> Self {
        InvariantDelta { b2: k * self.b2, b4: k * self.b4, k4: k * self.k4, h0_minus_k: k * self.h0_minus_k }
    }

    fn plus(self, o: Self) -> Self {
        InvariantDelta {
            b2: self.b2 + o.b2,
            b4: self.b4 + o.b4,
            k4: self.k4 + o.k4,
            h0_minus_k: self.h0_minus_k + o.h0_minus_k,
        }
    }
}

/// Change of invariants for one surgery. Blowing up a point of a fourfold
/// adds `(1, 1, -81, -15)` to `(b2, b4, K⁴, h⁰)`; the flip replacing a `P¹`
/// by a `P²` adds `(0, 1, 1, 0)`. Leaving E has no model on the other side.
pub fn surgery_delta(s: Surgery) -> Option<InvariantDelta> {
    let blow_up = InvariantDelta { b2: 1, b4: 1, k4: -81, h0_minus_k: -15 };
    let flip = InvariantDelta { b2: 0, b4: 1, k4: 1, h0_minus_k: 0 };
    match s {
        Surgery::BlowUpPoint => Some(blow_up),
        Surgery::ContractDivisor => Some(blow_up.scaled(-1)),
        Surgery::FlipLineToPlane => Some(flip),
        Surgery::FlipPlaneToLine => Some(flip.scaled(-1)),
        Surgery::ExitEffectiveCone | Surgery::EnterEffectiveCone => None,
    }
}

/// Where the starting invariants of a walk come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Seed {
    P4,
    BlowUp,
    Fano,
    /// Unlabeled start: the log carries deltas from zero.
    Relative,
}

impl Seed {
    fn of(label: Option<ChamberLabel>) -> Seed {
        match label.map(|l| l.kind) {
            Some(ChamberLabelKind::Outer) => Seed::P4,
            Some(ChamberLabelKind::B) => Seed::BlowUp,
            Some(ChamberLabelKind::Central) => Seed::Fano,
            _ => Seed::Relative,
        }
    }

    pub fn invariants(self) -> FourfoldInvariants {
        match self {
            Seed::P4 => FourfoldInvariants::P4,
            Seed::BlowUp => FourfoldInvariants::X,
            Seed::Fano => FourfoldInvariants::Y,
            Seed::Relative => FourfoldInvariants::ZERO,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WalkEvent {
    #[serde(serialize_with = "crate::fan::ser_rational")]
    pub t: Q,
    pub walls: Vec<PicClass>,
    /// `None` when walls of different kinds are crossed at once.
    pub kind: Option<Surgery>,
    pub deltas: InvariantDelta,
    pub invariants: FourfoldInvariants,
    pub chamber: Option<ChamberLabel>,
    /// Set when the chamber reached is `C_h`, `B_h` or central, whose
    /// models `P⁴`, `X_h`, `Y` have known invariants; elsewhere the values
    /// are bookkept, not certified.
    pub certified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct WalkLog {
    pub start: Option<ChamberLabel>,
    pub seed: Seed,
    pub initial: FourfoldInvariants,
    pub events: Vec<WalkEvent>,
    pub invariants: FourfoldInvariants,
    /// The path left E; the moduli space is empty from the last event on.
    pub empty: bool,
}

impl WalkLog {
    /// `(kind, number of walls)` per event, for quick comparisons.
    pub fn summary(&self) -> Vec<(Option<Surgery>, usize)> {
        self.events.iter().map(|e| (e.kind, e.walls.len())).collect()
    }

    pub fn count(&self, s: Surgery) -> usize {
        self.events.iter().filter(|e| e.kind == Some(s)).map(|e| e.walls.len()).sum()
    }
}

/// Invariants known independently for a labeled chamber.
pub fn known_invariants(label: Option<ChamberLabel>) -> Option<FourfoldInvariants> {
    match label.map(|l| l.kind) {
        Some(ChamberLabelKind::Outer) => Some(FourfoldInvariants::P4),
        Some(ChamberLabelKind::B) => Some(FourfoldInvariants::X),
        Some(ChamberLabelKind::Central) => Some(FourfoldInvariants::Y),
        _ => None,
    }
}

/// Replays the wall crossings from `l0` to `l1` with running invariants.
/// `l0` must be ample, in E and on no wall; `l1` must be ample and on no
/// wall, and may lie outside E, in which case the log ends at the exit.
pub fn walk(l0: &RatClass, l1: &RatClass) -> Result<WalkLog> {
    let start = chamber_of(l0)?;
    if let Some(w) = walls_through(l0)?.first() {
        return Err(Error::OnWall { point: l0.to_string(), center: w.center.to_string() });
    }
    if !is_ample(l1)? {
        return Err(Error::NotAmple(l1.to_string()));
    }
    if let Some(w) = walls_through(l1)?.first() {
        return Err(Error::OnWall { point: l1.to_string(), center: w.center.to_string() });
    }
    let seed = Seed::of(start.label);
    let initial = seed.invariants();
    let crossings = segment_crossings(l0, l1)?;
    let mut inv = initial;
    let mut events = Vec::new();
    let mut empty = false;
    for (k, ev) in crossings.iter().enumerate() {
        let mut deltas = InvariantDelta::default();
        for c in &ev.crossings {
            match surgery_delta(c.surgery) {
                Some(d) => deltas = deltas.plus(d),
                None => empty = c.surgery == Surgery::ExitEffectiveCone,
            }
        }
        inv = inv.apply(&deltas);
        let chamber = if empty {
            None
        } else {
            let next = crossings.get(k + 1).map(|e| e.t.clone()).unwrap_or_else(|| q(1));
            let mid = (&ev.t + &next) / q(2);
            let p = &l0.scale(&(q(1) - &mid)) + &l1.scale(&mid);
            chamber_of(&p)?.label
        };
        let certified = seed != Seed::Relative && known_invariants(chamber).is_some();
        events.push(WalkEvent {
            t: ev.t.clone(),
            walls: ev.centers(),
            kind: ev.surgery(),
            deltas,
            invariants: inv,
            chamber,
            certified,
        });
        if empty {
            break;
        }
    }
    Ok(WalkLog { start: start.label, seed, initial, events, invariants: inv, empty })
}

/// `χ(T_Z) = 27 - 5h⁰(-K) + K⁴ + 3b2 - h^{1,2} - h^{2,2} + 3h^{1,3}`, with
/// `h^{2,2} = b4`.
pub fn chi_tangent(inv: &FourfoldInvariants) -> i64 {
    27 - 5 * inv.h0_minus_k + inv.k4 + 3 * inv.b2 - inv.h12 - inv.b4 + 3 * inv.h13
}

#[derive(Clone, Debug, Serialize)]
pub struct BertiniFactorization {
    pub log: WalkLog,
    pub contracted_divisors: Vec<PicClass>,
    pub image_of_hyperplane: PicClass,
    pub degree: i64,
    pub multiplicity: i64,
    pub target_dimension: u8,
    pub divisor_degree: i64,
}

/// The route `Y ⇢ X_{ι*h} → P⁴` realizing `ι_X`: the walk from `-K_S`
/// to `-K_S + 4ι*h`.
pub fn bertini_factorization() -> Result<BertiniFactorization> {
    let h = PicClass::hyperplane(Basis::Surface);
    let hp = bertini_pullback(&h)?;
    let log = walk(&RatClass::from(-k_s()), &RatClass::from(-k_s() + 4 * hp))?;
    let contracted_divisors: Vec<PicClass> = log
        .events
        .iter()
        .filter(|e| e.kind == Some(Surgery::ContractDivisor))
        .flat_map(|e| e.walls.iter().map(|c| fixed_divisor_class(c).expect("conic wall")))
        .collect();
    let image_of_hyperplane = crate::determinant::bertini_on_x(&PicClass::hyperplane(Basis::Fourfold))?;
    let divisor_degree = contracted_divisors.first().map(|d| d.degree()).unwrap_or(0);
    Ok(BertiniFactorization {
        degree: image_of_hyperplane.degree(),
        multiplicity: image_of_hyperplane.multiplicities()[0],
        target_dimension: 4,
        divisor_degree,
        contracted_divisors,
        image_of_hyperplane,
        log,
    })
}

/// `-K_X·γ` for a curve class `γ`.
pub fn anticanonical_degree(g: &PicClass) -> Result<i64> {
    (-k_x()).pair(g)
}

/// The curve classes on `X_h` tracked by the negativity census: lines
/// through at most 2 of the points, conics through at most 3, twisted
/// cubics through at most 4, quartics through at most 7, the lines `ei` in
/// the exceptional divisors, and the quintic `R = 5h - Σei`.
pub fn special_curve_classes() -> Vec<PicClass> {
    let mut out = Vec::new();
    for (d, max) in [(1usize, 2usize), (2, 3), (3, 4), (4, 7)] {
        for mask in 0u32..256 {
            if mask.count_ones() as usize > max {
                continue;
            }
            let mut c = [0i64; 9];
            c[0] = d as i64;
            for i in 0..8 {
                if mask >> i & 1 == 1 {
                    c[i + 1] = 1;
                }
            }
            out.push(PicClass::curve(c));
        }
    }
    for i in 1..=8 {
        let mut c = [0i64; 9];
        c[i] = -1;
        out.push(PicClass::curve(c));
    }
    out.push(PicClass::curve([5, 1, 1, 1, 1, 1, 1, 1, 1]));
    out
}

/// Classes of [`special_curve_classes`] with `-K_X·γ ≤ 0`.
pub fn negative_curve_census() -> Vec<PicClass> {
    special_curve_classes().into_iter().filter(|g| anticanonical_degree(g).expect("curve class") <= 0).collect()
}

/// The curve `Z_ℓ ⊂ Y`, or its transform, as a class on `X_h`: `ζ⁻¹(-2ℓ - K_S)`.
pub fn z_ell_curve(ell: &PicClass) -> Result<PicClass> {
    require_kind(ell, ClassKind::MinusOne)?;
    let g = zeta_inverse(&RatClass::from(-twist_normal(ell)))?;
    g.to_integral().ok_or_else(|| Error::NotIntegral(g.to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Singularity {
    /// An isolated point of type `⅓(1,1)` at `p_point`.
    OneThird11 { point: usize },
    /// The vertex `p_point` of a cone.
    ConeVertex { point: usize },
    /// Multiplicity 3 at the general point of a curve.
    TripleCurve { curve: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceProfile {
    pub d: i64,
    pub degree: i64,
    pub description: String,
    pub singularities: Vec<Singularity>,
}

/// Degree and singularities of `V_{h,ℓ}`, the image in `P⁴` of the
/// transform of `P_ℓ`, for `d = h·ℓ ≥ 2`. Points are numbered in the basis
/// adapted to `hmark`.
pub fn special_surface_profile(hmark: &PicClass, ell: &PicClass) -> Result<SurfaceProfile> {
    require_kind(hmark, ClassKind::Cubic)?;
    require_kind(ell, ClassKind::MinusOne)?;
    let a = adapted_coordinates(hmark, ell)?;
    let m = a.multiplicities();
    let with = |v: i64| (1..=8).filter(|&i| m[i - 1] == v).collect::<Vec<usize>>();
    let d = a.degree();
    let profile = match d {
        2 => {
            let on = with(0);
            SurfaceProfile { d, degree: 1, description: format!("plane through p{:?}", on), singularities: vec![] }
        }
        3 => {
            let (i, j) = (with(2)[0], with(0)[0]);
            SurfaceProfile {
                d,
                degree: 3,
                description: format!("cone over the rational normal quartic γ{i} with vertex p{j} on it"),
                singularities: vec![Singularity::ConeVertex { point: j }],
            }
        }
        4 => SurfaceProfile {
            d,
            degree: 6,
            description: "normal surface through p1..p8".into(),
            singularities: with(1).into_iter().map(|point| Singularity::OneThird11 { point }).collect(),
        },
        5 => {
            let ij = with(1);
            let mut singularities: Vec<Singularity> =
                with(2).into_iter().map(|point| Singularity::OneThird11 { point }).collect();
            singularities.push(Singularity::TripleCurve { curve: format!("line p{}p{}", ij[0], ij[1]) });
            SurfaceProfile { d, degree: 10, description: "surface with a triple line".into(), singularities }
        }
        6 => {
            let i = with(3)[0];
            SurfaceProfile {
                d,
                degree: 15,
                description: "surface with a triple quartic curve".into(),
                singularities: vec![
                    Singularity::OneThird11 { point: i },
                    Singularity::TripleCurve { curve: format!("rational normal quartic γ{i}") },
                ],
            }
        }
        _ => {
            return Err(Error::InvalidArgument(format!(
                "h·ℓ = {d}; the special surface is defined for 2 ≤ h·ℓ ≤ 6"
            )))
        }
    };
    Ok(profile)
}

/// `a² - Σbi²`: the self-intersection of `aΓ̃ - Σbi·(exceptional curves)` on
/// a blow-up of `P²` at points.
pub fn surface_degree_ledger(line_coeff: i64, multiplicities: &[i64]) -> i64 {
    line_coeff * line_coeff - multiplicities.iter().map(|b| b * b).sum::<i64>()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeLedger {
    pub line_coeff: i64,
    pub multiplicities: Vec<i64>,
    pub degree: i64,
}

/// Rebuilds the restriction of `H` to the transform of `P_ℓ` in `X_h`.
/// On `P_ℓ ≅ P²` it is `aΓ̃ - Σb·(exceptional curves)`, where `a = H·Γ̃_ℓ`
/// and there is one exceptional curve for each point of `P_ℓ ∩ P_ℓ'`, over
/// the 36 classes `ℓ'` with `h·ℓ' ≤ 1`, with `b = H·Z_ℓ'`.
pub fn degree_ledger(hmark: &PicClass, ell: &PicClass) -> Result<DegreeLedger> {
    let gamma = crate::determinant::gamma_tilde_class(hmark, ell)?;
    let line_coeff = gamma.degree();
    let mut multiplicities = Vec::new();
    for other in classes(ClassKind::MinusOne) {
        if other == ell || other.dot(hmark) > 1 {
            continue;
        }
        let points = locus_intersection_count(ell, other)?.points;
        if points == 0 {
            continue;
        }
        let z = adapted_coordinates(hmark, other)?;
        let b = z_ell_curve(&z)?.degree();
        multiplicities.extend(std::iter::repeat_n(b, points as usize));
    }
    multiplicities.sort_unstable_by(|a, b| b.cmp(a));
    let degree = surface_degree_ledger(line_coeff, &multiplicities);
    Ok(DegreeLedger { line_coeff, multiplicities, degree })
}

/// Formats an invariant tuple change as `"(b2, b4, K⁴, h⁰)"` deltas.
pub fn format_delta(d: &InvariantDelta) -> String {
    format!("(b2 {:+}, b4 {:+}, K4 {:+}, h0 {:+})", d.b2, d.b4, d.k4, d.h0_minus_k)
}
