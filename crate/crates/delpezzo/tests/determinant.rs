use delpezzo::classes::{classes, ClassKind, WeylElement};
use delpezzo::determinant::*;
use delpezzo::lattice::{bertini_pullback, eigenspace, k_s, k_x, Basis, PicClass, RatClass};
use delpezzo::linalg::Q;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn x(c: [i64; 9]) -> PicClass {
    PicClass::fourfold(c)
}

fn h() -> PicClass {
    PicClass::hyperplane(Basis::Surface)
}

fn e(i: usize) -> PicClass {
    PicClass::exceptional(Basis::Surface, i)
}

fn big_h() -> PicClass {
    PicClass::hyperplane(Basis::Fourfold)
}

fn big_e(i: usize) -> PicClass {
    PicClass::exceptional(Basis::Fourfold, i)
}

fn sum_e() -> PicClass {
    PicClass::exceptional_sum(Basis::Fourfold)
}

fn half() -> Q {
    Q::new(1.into(), 2.into())
}

/// ρ written out by hand on a class dh - Σmiei: d(ΣE - H) - Σmi(ΣE - H - 2Ei).
fn rho_oracle(c: &PicClass) -> PicClass {
    let base = sum_e() - big_h();
    let mut out = c.degree() * base;
    for (i, m) in c.multiplicities().iter().enumerate() {
        out = out - *m * (base - 2 * big_e(i + 1));
    }
    out
}

fn random_class(rng: &mut ChaCha8Rng, basis: Basis) -> PicClass {
    PicClass::new(basis, std::array::from_fn(|_| rng.gen_range(-20..=20)))
}

#[test]
fn rho_examples() {
    assert_eq!(rho(&(h() - e(1))).unwrap(), 2 * big_e(1));
    assert_eq!(rho(&-k_s()).unwrap(), -k_x());
    assert_eq!(rho(&(-k_s() + 3 * h())).unwrap(), 2 * big_h());
    assert_eq!(rho(&h()).unwrap(), sum_e() - big_h());
    for i in 1..=8 {
        assert_eq!(rho(&e(i)).unwrap(), sum_e() - big_h() - 2 * big_e(i));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let c = random_class(&mut rng, Basis::Surface);
        assert_eq!(rho(&c).unwrap(), rho_oracle(&c));
        let back = rho_inverse(&RatClass::from(rho(&c).unwrap())).unwrap();
        assert_eq!(back, RatClass::from(c));
    }
}

#[test]
fn rho_half_integrality() {
    let conic = 2 * h() - e(1) - e(2) - e(3) - e(4);
    assert!(rho_half(&conic).unwrap().is_integral());
    assert!(!rho_half(&e(1)).unwrap().is_integral());
    assert_eq!(rho_half(&k_s()).unwrap(), RatClass::from(k_x()).scale(&half()));
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let c = random_class(&mut rng, Basis::Surface);
        let even = c.dot(&k_s()) % 2 == 0;
        assert_eq!(rho_half(&c).unwrap().is_integral(), even);
        assert_eq!(rho_half_is_integral(&c).unwrap(), even);
    }
}

#[test]
fn zeta_examples_and_adjointness() {
    let ch = PicClass::hyperplane(Basis::FourfoldCurve);
    let ce = |i| PicClass::exceptional(Basis::FourfoldCurve, i);
    let csum = PicClass::exceptional_sum(Basis::FourfoldCurve);
    assert_eq!(zeta(&ch).unwrap(), 2 * h() + k_s());
    assert_eq!(zeta(&(4 * ch - csum + ce(1))).unwrap(), -2 * e(1) - k_s());
    assert_eq!(zeta(&(5 * ch - csum)).unwrap(), -k_s());
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..1000 {
        let l = random_class(&mut rng, Basis::Surface);
        let g = random_class(&mut rng, Basis::FourfoldCurve);
        assert_eq!(rho(&l).unwrap().pair(&g).unwrap(), l.pair(&zeta(&g).unwrap()).unwrap());
    }
}

#[test]
fn isometry_on_roots() {
    let roots = classes(ClassKind::Root);
    let images: Vec<RatClass> = roots.iter().map(|r| rho_half(r).unwrap()).collect();
    for (i, a) in roots.iter().enumerate() {
        for (j, b) in roots.iter().enumerate() {
            assert_eq!(images[i].pair(&images[j]).unwrap(), Q::from_integer(a.dot(b).into()));
        }
    }
}

#[test]
fn fixed_divisors() {
    assert_eq!(fixed_divisor_class(&(h() - e(1))).unwrap(), big_e(1));
    assert_eq!(
        fixed_divisor_class(&(2 * h() - e(1) - e(2) - e(3) - e(4))).unwrap(),
        big_h() - big_e(5) - big_e(6) - big_e(7) - big_e(8)
    );
    let c = 4 * h() - PicClass::exceptional_sum(Basis::Surface) - 2 * e(1);
    assert_eq!(fixed_divisor_class(&c).unwrap(), 3 * big_h() - 2 * (sum_e() - big_e(1)));
    for c in classes(ClassKind::Conic) {
        assert_eq!(RatClass::from(fixed_divisor_class(c).unwrap()), rho_half(c).unwrap());
    }
    assert!(fixed_divisor_class(&e(1)).is_err());
}

#[test]
fn d_ell_and_semigroup() {
    assert_eq!(d_ell_class(&e(1)).unwrap(), 2 * big_h() - sum_e() - big_e(1));
    let gens = effective_semigroup_generators();
    assert_eq!(gens.len(), 2401);
    assert!(gens.iter().all(|g| (-k_x()).dot(g) == 3));
    let mut sorted = gens.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(sorted.len(), 2401);
}

#[test]
fn h_y_classes() {
    assert_eq!(h_y_class(&h()).unwrap(), RatClass::from(big_h()));
    let hp = bertini_pullback(&h()).unwrap();
    // -K + 3ι*h = -19K - 3h, so the class is ½(19(-K_X) - 3ρ(h))
    let want = x([49, 30, 30, 30, 30, 30, 30, 30, 30]);
    assert_eq!(h_y_class(&hp).unwrap(), RatClass::from(want));
    assert_eq!(want, bertini_on_x(&big_h()).unwrap());
}

#[test]
fn bertini_on_fourfold() {
    assert_eq!(bertini_on_x(&big_h()).unwrap(), 49 * big_h() - 30 * sum_e());
    assert_eq!(bertini_on_x(&k_x()).unwrap(), k_x());
    // E1 is E_{h - e1}; its image is E_{ι*(h - e1)} = -2K_X - E1
    let img = bertini_on_x(&big_e(1)).unwrap();
    assert_eq!(img, fixed_divisor_class(&bertini_pullback(&(h() - e(1))).unwrap()).unwrap());
    assert_eq!(img, 10 * big_h() - 6 * sum_e() - big_e(1));
    let m = bertini_x_map();
    assert_eq!(m.compose(m).unwrap(), delpezzo::lattice::LatticeMap::identity(Basis::Fourfold));
    assert!(m.preserves_pairing());
    let fixed = eigenspace(m, 1);
    assert_eq!(fixed.len(), 1);
    assert!(delpezzo::lattice::proportional(&fixed[0], &RatClass::from(k_x())));
}

#[test]
fn bianticanonical() {
    for c in classes(ClassKind::Conic) {
        assert!(bianticanonical_pairing(c).unwrap());
        assert_eq!(bertini_pullback(c).unwrap(), -4 * k_s() - *c);
    }
}

#[test]
fn weyl_transfer_properties() {
    assert_eq!(
        weyl_transfer(&WeylElement::identity()).unwrap(),
        delpezzo::lattice::LatticeMap::identity(Basis::Fourfold)
    );
    let m = weyl_transfer(&WeylElement::bertini()).unwrap();
    assert_eq!(&m, bertini_x_map());
    // the reflection in e1 - e2 becomes the swap of E1 and E2
    let w = WeylElement::reflection(&(e(1) - e(2))).unwrap();
    let phi = weyl_transfer(&w).unwrap();
    assert_eq!(phi.apply(&big_e(1)).unwrap(), big_e(2));
    assert_eq!(phi.apply(&big_h()).unwrap(), big_h());
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for i in 0..8 {
        let w = WeylElement::simple_reflection(i);
        let phi = weyl_transfer(&w).unwrap();
        assert!(phi.preserves_pairing());
        assert_eq!(phi.apply(&k_x()).unwrap(), k_x());
        for _ in 0..50 {
            let l = random_class(&mut rng, Basis::Surface);
            assert_eq!(rho(&w.apply(&l).unwrap()).unwrap(), phi.apply(&rho(&l).unwrap()).unwrap());
        }
    }
}

#[test]
fn gamma_tilde() {
    let sum = PicClass::exceptional_sum(Basis::Surface);
    let c = |v: [i64; 9]| PicClass::curve(v);
    assert_eq!(gamma_tilde_class(&h(), &(2 * h() - e(4) - e(5) - e(6) - e(7) - e(8))).unwrap(), c([2, 1, 1, 1, 0, 0, 0, 0, 0]));
    assert_eq!(gamma_tilde_class(&h(), &(3 * h() - sum - e(1) + e(8))).unwrap(), c([5, 0, 1, 1, 1, 1, 1, 1, 2]));
    assert_eq!(gamma_tilde_class(&h(), &(6 * h() - 2 * sum - e(1))).unwrap(), c([14, 2, 3, 3, 3, 3, 3, 3, 3]));
    assert!(gamma_tilde_class(&h(), &(h() - e(1) - e(2))).is_err());
}

#[test]
fn special_curves() {
    let l = h() - e(1) - e(2);
    assert_eq!(zeta_of_special_curves(&SpecialCurve::LineInPEll(e(1))).unwrap(), 2 * e(1) + k_s());
    assert_eq!(zeta_of_special_curves(&SpecialCurve::ZEll(l)).unwrap(), -2 * l - k_s());
    assert_eq!(zeta_of_special_curves(&SpecialCurve::LineInEC(h() - e(1))).unwrap(), 2 * (h() - e(1)) + k_s());
    // the curves L_ij = h - ei - ej and ei on X map to those classes
    let lij = PicClass::curve([1, 1, 1, 0, 0, 0, 0, 0, 0]);
    assert_eq!(zeta(&lij).unwrap(), -2 * l - k_s());
    assert_eq!(zeta(&PicClass::exceptional(Basis::FourfoldCurve, 1)).unwrap(), 2 * (h() - e(1)) + k_s());
}

#[test]
fn cone_dictionary_images() {
    let d = cone_dictionary().unwrap();
    assert_eq!(d.eff.generators.len(), 2160);
    assert_eq!(d.nef_fano.generators.len(), 19440);
    assert!(d.eff.is_consistent());
    assert!(d.nef.is_consistent());
    assert!(d.nef_fano.is_consistent());
    // Mov(X) normals contain ζ⁻¹(ℓ) and ζ⁻¹(2C + K_S)
    let n = transport_normal(&(2 * (h() - e(1)) + k_s())).unwrap();
    assert_eq!(n, PicClass::exceptional(Basis::FourfoldCurve, 1));
    assert!(d.mov.inequalities.contains(&n));
    // Nef(X): H, H - Ei and 2H - ... all lie in it; the cone is cut out by ei and L_ij
    assert!(verify_closure_b_h().unwrap());
    let mut normals = d.nef.inequalities.clone();
    normals.sort();
    let mut want: Vec<PicClass> = (1..=8).map(|i| PicClass::exceptional(Basis::FourfoldCurve, i)).collect();
    for i in 1..=8 {
        for j in i + 1..=8 {
            let mut c = [0i64; 9];
            c[0] = 1;
            c[i] = 1;
            c[j] = 1;
            want.push(PicClass::curve(c));
        }
    }
    want.sort();
    assert_eq!(normals, want);
    assert!(d.nef.contains(&RatClass::from(big_h())).unwrap());
    assert!(d.nef.contains(&RatClass::from(big_h() - big_e(1))).unwrap());
    assert!(!d.nef.contains(&RatClass::from(big_e(1))).unwrap());
    assert!(d.eff.contains(&RatClass::from(big_e(1))).unwrap());
    assert!(d.eff.contains(&RatClass::from(-k_x())).unwrap());
    // rays: H, H - Ei, and 2H - Σ_{i∈I} Ei for |I| ≥ 3
    let mut rays = d.nef.generators.clone();
    rays.sort();
    let mut want = vec![big_h()];
    want.extend((1..=8).map(|i| big_h() - big_e(i)));
    for mask in 0u32..256 {
        if mask.count_ones() >= 3 {
            let c = (1..=8).filter(|i| mask >> (i - 1) & 1 == 1).fold(2 * big_h(), |acc, i| acc - big_e(i));
            want.push(c);
        }
    }
    want.sort();
    assert_eq!(rays.len(), 228);
    assert_eq!(rays, want);
    assert!(d.eff.is_extremal_ray(&RatClass::from(big_e(1))).unwrap());
}
