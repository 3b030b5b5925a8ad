//! The determinant map `ρ: Pic(S) → Pic(X)`, its half `ρ̃ = ½ρ`, the
//! transpose `ζ` on curve classes, and the divisor classes defined through
//! them.

use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::classes::{classes, require_kind, ClassKind, WeylElement};
use crate::cones::{cone, extreme_rays, twist_normal, ConeName, ConeSpec, Representation};
use crate::error::{Error, Result};
use crate::fan::all_walls;
use crate::lattice::{bertini_pullback, k_s, k_x, Basis, ClassProbe, LatticeMap, PicClass, RatClass, RationalMap};
use crate::linalg::Q;

/// `ρ` with its exact inverse, and `ζ` with its exact inverse. Both act
/// by the same coordinate matrix.
#[derive(Clone, Debug)]
pub struct DeterminantMap {
    pub rho: LatticeMap,
    pub rho_inverse: RationalMap,
    pub zeta: LatticeMap,
    pub zeta_inverse: RationalMap,
}

fn images(target: Basis) -> [PicClass; 9] {
    // h ↦ ΣE - H, ei ↦ ΣE - H - 2Ei
    std::array::from_fn(|i| {
        let mut c = [-1i64; 9];
        if i > 0 {
            c[i] = 1;
        }
        PicClass::new(target, c)
    })
}

pub fn determinant_map() -> &'static DeterminantMap {
    static M: OnceLock<DeterminantMap> = OnceLock::new();
    M.get_or_init(|| {
        let rho = LatticeMap::from_images(Basis::Surface, Basis::Fourfold, &images(Basis::Fourfold));
        let zeta = LatticeMap::from_images(Basis::FourfoldCurve, Basis::Surface, &images(Basis::Surface));
        DeterminantMap {
            rho_inverse: rho.to_rational().inverse().expect("ρ is invertible"),
            zeta_inverse: zeta.to_rational().inverse().expect("ζ is invertible"),
            rho,
            zeta,
        }
    })
}

pub fn rho(x: &PicClass) -> Result<PicClass> {
    determinant_map().rho.apply(x)
}

pub fn rho_rational(x: &RatClass) -> Result<RatClass> {
    determinant_map().rho.to_rational().apply(x)
}

/// `ρ̃(x) = ½ρ(x)`; integral exactly when `K_S·x` is even.
pub fn rho_half(x: &PicClass) -> Result<RatClass> {
    Ok(RatClass::from(rho(x)?).scale(&Q::new(1.into(), 2.into())))
}

pub fn rho_half_is_integral(x: &PicClass) -> Result<bool> {
    if x.basis() != Basis::Surface {
        return Err(Error::WrongBasis { expected: Basis::Surface, found: x.basis() });
    }
    Ok(x.dot(&k_s()) % 2 == 0)
}

/// `ρ̃(x)` as an integral class, or [`Error::NotIntegral`].
pub fn rho_half_integral(x: &PicClass) -> Result<PicClass> {
    let r = rho_half(x)?;
    r.to_integral().ok_or_else(|| Error::NotIntegral(r.to_string()))
}

pub fn rho_inverse(y: &RatClass) -> Result<RatClass> {
    determinant_map().rho_inverse.apply(y)
}

/// `ζ` on curve classes of X: `h ↦ 2h + K_S`, `ei ↦ -2ei + Σe - h`.
pub fn zeta(g: &PicClass) -> Result<PicClass> {
    determinant_map().zeta.apply(g)
}

pub fn zeta_inverse(x: &RatClass) -> Result<RatClass> {
    determinant_map().zeta_inverse.apply(x)
}

/// `E_C = ½(Σmi - d)(H - ΣEi) + ΣmiEi` for a conic `C = dh - Σmiei`.
pub fn fixed_divisor_class(c: &PicClass) -> Result<PicClass> {
    require_kind(c, ClassKind::Conic)?;
    let s: i64 = c.multiplicities().iter().sum();
    let a = (s - c.degree()) / 2;
    let mut out = [a; 9];
    for (o, m) in out[1..].iter_mut().zip(c.multiplicities()) {
        *o = a - m;
    }
    Ok(PicClass::fourfold(out))
}

/// `D_ℓ = ½ρ(-K_S + ℓ)`.
pub fn d_ell_class(ell: &PicClass) -> Result<PicClass> {
    require_kind(ell, ClassKind::MinusOne)?;
    rho_half_integral(&(-k_s() + *ell))
}

/// `H_{Y,h} = ½ρ(-K_S + 3h)`.
pub fn h_y_class(h: &PicClass) -> Result<RatClass> {
    require_kind(h, ClassKind::Cubic)?;
    rho_half(&(-k_s() + 3 * *h))
}

/// `φ(w) = ρ̃ ∘ w ∘ ρ̃⁻¹`, an integral isometry of the Dolgachev form
/// fixing `K_X`.
pub fn weyl_transfer(w: &WeylElement) -> Result<LatticeMap> {
    let d = determinant_map();
    let m = d.rho.to_rational().compose(&w.map().to_rational())?.compose(&d.rho_inverse)?;
    m.to_integral().ok_or_else(|| Error::NotIntegral("conjugated Weyl element".into()))
}

/// `ι_X = ρ ∘ ι_S ∘ ρ⁻¹`.
pub fn bertini_x_map() -> &'static LatticeMap {
    static M: OnceLock<LatticeMap> = OnceLock::new();
    M.get_or_init(|| weyl_transfer(&WeylElement::bertini()).expect("Bertini involution is in W(E8)"))
}

pub fn bertini_on_x(x: &PicClass) -> Result<PicClass> {
    bertini_x_map().apply(x)
}

/// Checks `½ρ(ι_S*C) = -2K_Y - ½ρ(C)` with `-K_Y = ρ(-K_S)`.
pub fn bianticanonical_pairing(c: &PicClass) -> Result<bool> {
    require_kind(c, ClassKind::Conic)?;
    let lhs = rho_half(&bertini_pullback(c)?)?;
    let rhs = &RatClass::from(2 * rho(&-k_s())?) - &rho_half(c)?;
    Ok(lhs == rhs)
}

/// `-K_X`, the 2160 classes `E_C` and the 240 classes `D_ℓ`.
pub fn effective_semigroup_generators() -> Vec<PicClass> {
    let mut out = vec![-k_x()];
    out.extend(classes(ClassKind::Conic).iter().map(|c| fixed_divisor_class(c).expect("conic")));
    out.extend(classes(ClassKind::MinusOne).iter().map(|l| d_ell_class(l).expect("(-1)-class")));
    out
}

/// The class of the transform of a general line of `P_ℓ` in `X_h`, with
/// `ℓ = dh - Σmiei` written in coordinates adapted to `hmark`:
/// `(6d - 5 - Σmi)h - Σ(d - mi - 1)ei`.
pub fn gamma_tilde_class(hmark: &PicClass, ell: &PicClass) -> Result<PicClass> {
    require_kind(hmark, ClassKind::Cubic)?;
    require_kind(ell, ClassKind::MinusOne)?;
    let a = crate::classes::adapted_coordinates(hmark, ell)?;
    let d = a.degree();
    if d < 2 {
        return Err(Error::InvalidArgument(format!("h·ℓ = {d}; P_ℓ lies in the indeterminacy locus unless h·ℓ ≥ 2")));
    }
    let s: i64 = a.multiplicities().iter().sum();
    let mut c = [6 * d - 5 - s; 9];
    for (o, m) in c[1..].iter_mut().zip(a.multiplicities()) {
        *o = d - m - 1;
    }
    Ok(PicClass::curve(c))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SpecialCurve {
    /// A line in `P_ℓ ≅ P²`, on the positive side of the wall of `ℓ`.
    LineInPEll(PicClass),
    /// `Z_ℓ ≅ P¹`, on the negative side.
    ZEll(PicClass),
    /// A line in `E_C ≅ P³`.
    LineInEC(PicClass),
}

/// `ζ` of the special curve: `2ℓ + K_S`, `-2ℓ - K_S` or `2C + K_S`.
pub fn zeta_of_special_curves(curve: &SpecialCurve) -> Result<PicClass> {
    match curve {
        SpecialCurve::LineInPEll(l) => {
            require_kind(l, ClassKind::MinusOne)?;
            Ok(twist_normal(l))
        }
        SpecialCurve::ZEll(l) => {
            require_kind(l, ClassKind::MinusOne)?;
            Ok(-twist_normal(l))
        }
        SpecialCurve::LineInEC(c) => {
            require_kind(c, ClassKind::Conic)?;
            Ok(twist_normal(c))
        }
    }
}

/// Transports a surface-side inequality normal `n` to the curve class
/// `ζ⁻¹(n)` (made primitive), so that `n·x ≥ 0 ⇔ ζ⁻¹(n)·ρ(x) ≥ 0`.
pub fn transport_normal(n: &PicClass) -> Result<PicClass> {
    let g = zeta_inverse(&RatClass::from(*n))?;
    g.primitive_integral().ok_or_else(|| Error::NotIntegral(g.to_string()))
}

/// Transports a surface-side generator to the primitive class on its ray
/// `ρ(x)`.
pub fn transport_ray(x: &PicClass) -> Result<PicClass> {
    Ok(rho(x)?.primitive())
}

/// Normals of the closure of `B_h` for `h` the standard cubic: the conic
/// walls `2(h - ei) + K_S ≥ 0` and the curve walls `2ℓij + K_S ≤ 0`.
pub fn closure_b_h_normals() -> Vec<PicClass> {
    let h = PicClass::hyperplane(Basis::Surface);
    let mut out: Vec<PicClass> =
        (1..=8).map(|i| twist_normal(&(h - PicClass::exceptional(Basis::Surface, i)))).collect();
    for i in 1..=8 {
        for j in i + 1..=8 {
            let l = h - PicClass::exceptional(Basis::Surface, i) - PicClass::exceptional(Basis::Surface, j);
            out.push(-twist_normal(&l));
        }
    }
    out
}

/// Whether the 36 normals of [`closure_b_h_normals`] cut out the closure
/// of the chamber of `-K_S + 2h`: the point satisfies them strictly and no
/// wall separates two rays of the cone.
pub fn verify_closure_b_h() -> Result<bool> {
    let normals = closure_b_h_normals();
    let p = ClassProbe::from_class(&(-k_s() + 2 * PicClass::hyperplane(Basis::Surface)));
    if normals.iter().any(|n| p.sign_with_head(1, n.coeffs()) != std::cmp::Ordering::Greater) {
        return Ok(false);
    }
    let rays = extreme_rays(&normals, Basis::Surface)?;
    Ok(all_walls().par_iter().all(|w| {
        let v: Vec<i64> = rays.iter().map(|r| r.dot(&w.normal)).collect();
        !(v.iter().any(|x| *x > 0) && v.iter().any(|x| *x < 0))
    }))
}

/// The cones of X (and of the Fano model Y) as images of surface cones.
#[derive(Clone, Debug, Serialize)]
pub struct ConeDictionary {
    /// `Eff(X) = ρ(E)`.
    pub eff: ConeSpec,
    /// `Mov(X) = ρ(Π)`.
    pub mov: ConeSpec,
    /// `Nef(X) = ρ(closure of B_h)`.
    pub nef: ConeSpec,
    /// `ρ(N)`, the nef cone of the Fano model.
    pub nef_fano: ConeSpec,
}

fn transport(name: &str, spec: &ConeSpec, generators: Option<Vec<PicClass>>) -> Result<ConeSpec> {
    let generators = match generators {
        Some(g) => g,
        None => spec.generators.iter().map(transport_ray).collect::<Result<_>>()?,
    };
    let inequalities = spec.inequalities.iter().map(transport_normal).collect::<Result<_>>()?;
    Ok(ConeSpec { name: name.into(), basis: Basis::Fourfold, generators, inequalities, authoritative: spec.authoritative })
}

pub fn cone_dictionary() -> Result<ConeDictionary> {
    let eff_gens = classes(ClassKind::Conic).iter().map(fixed_divisor_class).collect::<Result<_>>()?;
    let eff = transport("EFF_X", cone(ConeName::E), Some(eff_gens))?;
    let mov = transport("MOV_X", cone(ConeName::Pi), None)?;
    let normals = closure_b_h_normals();
    let rays = extreme_rays(&normals, Basis::Surface)?;
    let b_h = ConeSpec {
        name: "B_H".into(),
        basis: Basis::Surface,
        generators: rays,
        inequalities: normals,
        authoritative: Representation::Both,
    };
    let nef = transport("NEF_X", &b_h, None)?;
    let nef_fano = transport("NEF_FANO", cone(ConeName::N), None)?;
    Ok(ConeDictionary { eff, mov, nef, nef_fano })
}

/// Dolgachev pairing of `ρ̃a` and `ρ̃b`.
pub fn half_pairing(a: &PicClass, b: &PicClass) -> Result<Q> {
    rho_half(a)?.pair(&rho_half(b)?)
}
