use delpezzo::classes::{classes, ClassKind};
use delpezzo::fan::{ChamberLabelKind, Surgery};
use delpezzo::lattice::{bertini_pullback, k_s, Basis, PicClass, RatClass};
use delpezzo::surgery::*;

fn h() -> PicClass {
    PicClass::hyperplane(Basis::Surface)
}

fn e(i: usize) -> PicClass {
    PicClass::exceptional(Basis::Surface, i)
}

fn sum_e() -> PicClass {
    PicClass::exceptional_sum(Basis::Surface)
}

fn rc(c: PicClass) -> RatClass {
    RatClass::from(c)
}

#[test]
fn outer_chamber_to_fano_model() {
    let log = walk(&rc(-k_s() + 4 * h()), &rc(-k_s())).unwrap();
    assert_eq!(log.seed, Seed::P4);
    assert_eq!(log.initial, FourfoldInvariants::P4);
    assert_eq!(
        log.summary(),
        [(Some(Surgery::BlowUpPoint), 8), (Some(Surgery::FlipLineToPlane), 28), (Some(Surgery::FlipLineToPlane), 8)]
    );
    let tuples: Vec<_> = log.events.iter().map(|e| e.invariants.tuple()).collect();
    assert_eq!(tuples, [(9, 0, 9, -23, 6), (9, 0, 37, 5, 6), (9, 0, 45, 13, 6)]);
    assert_eq!(log.invariants, FourfoldInvariants::Y);
    let labels: Vec<_> = log.events.iter().map(|e| e.chamber.map(|c| c.kind)).collect();
    assert_eq!(labels, [Some(ChamberLabelKind::B), Some(ChamberLabelKind::F), Some(ChamberLabelKind::Central)]);
    assert_eq!(log.events.iter().map(|e| e.certified).collect::<Vec<_>>(), [true, false, true]);
    let mut first: Vec<PicClass> = log.events[1].walls.clone();
    first.sort();
    let mut lij = Vec::new();
    for i in 1..=8 {
        for j in i + 1..=8 {
            lij.push(h() - e(i) - e(j));
        }
    }
    lij.sort();
    assert_eq!(first, lij);
    let mut last = log.events[2].walls.clone();
    last.sort();
    let mut ei: Vec<PicClass> = (1..=8).map(e).collect();
    ei.sort();
    assert_eq!(last, ei);
}

#[test]
fn blow_up_to_fano_and_back() {
    let x = rc(-k_s() + 2 * h());
    let y = rc(-k_s());
    let there = walk(&x, &y).unwrap();
    assert_eq!(there.initial, FourfoldInvariants::X);
    assert_eq!(there.count(Surgery::FlipLineToPlane), 36);
    assert_eq!(there.invariants, FourfoldInvariants::Y);
    let back = walk(&y, &x).unwrap();
    assert_eq!(back.initial, FourfoldInvariants::Y);
    assert_eq!(back.invariants, FourfoldInvariants::X);
    assert!(walk(&y, &y).unwrap().events.is_empty());
    assert_eq!(walk(&y, &y).unwrap().invariants, FourfoldInvariants::Y);
}

#[test]
fn walk_leaving_e_ends_empty() {
    let log = walk(&rc(-k_s() + 4 * h()), &rc(-k_s() + 6 * h())).unwrap();
    assert!(log.empty);
    assert_eq!(log.events.last().unwrap().kind, Some(Surgery::ExitEffectiveCone));
}

#[test]
fn chi_tangent_values() {
    assert_eq!(chi_tangent(&FourfoldInvariants::Y), -8);
    assert_eq!(chi_tangent(&FourfoldInvariants::P4), 24);
    assert_eq!(chi_tangent(&FourfoldInvariants::ZERO), 27);
}

#[test]
fn bertini_route() {
    let b = bertini_factorization().unwrap();
    assert_eq!(
        b.log.summary(),
        [
            (Some(Surgery::FlipPlaneToLine), 8),
            (Some(Surgery::FlipPlaneToLine), 28),
            (Some(Surgery::ContractDivisor), 8)
        ]
    );
    let mut first = b.log.events[0].walls.clone();
    first.sort();
    let mut want: Vec<PicClass> = (1..=8).map(|i| 6 * h() - 2 * sum_e() - e(i)).collect();
    want.sort();
    assert_eq!(first, want);
    assert!(b.log.events[1].walls.iter().all(|c| c.degree() == 5));
    let big_h = PicClass::hyperplane(Basis::Fourfold);
    let big_sum = PicClass::exceptional_sum(Basis::Fourfold);
    let mut div = b.contracted_divisors.clone();
    div.sort();
    let mut want: Vec<PicClass> =
        (1..=8).map(|i| 10 * big_h - 6 * big_sum - PicClass::exceptional(Basis::Fourfold, i)).collect();
    want.sort();
    assert_eq!(div, want);
    assert_eq!((b.degree, b.multiplicity, b.target_dimension, b.divisor_degree), (49, 30, 4, 10));
    assert_eq!(b.log.seed, Seed::Fano);
    assert_eq!(b.log.invariants, FourfoldInvariants::P4);
    assert_eq!(b.log.events[2].chamber.unwrap().witness, Some(bertini_pullback(&h()).unwrap()));
}

#[test]
fn negative_curves() {
    let neg = negative_curve_census();
    assert_eq!(neg.len(), 36);
    for g in &neg {
        let m = g.multiplicities();
        let ones = m.iter().filter(|&&x| x == 1).count();
        let ok = (g.degree() == 1 && ones == 2) || (g.degree() == 4 && ones == 7);
        assert!(ok, "{g}");
    }
    let r = PicClass::curve([5, 1, 1, 1, 1, 1, 1, 1, 1]);
    assert_eq!(anticanonical_degree(&r).unwrap(), 1);
    for i in 1..=8 {
        assert_eq!(PicClass::exceptional(Basis::Fourfold, i).pair(&r).unwrap(), 1);
    }
    assert_eq!(delpezzo::determinant::zeta(&r).unwrap(), -k_s());
}

#[test]
fn loci_metadata() {
    let p = SpecialLocus::p_ell(&e(1));
    let z = SpecialLocus::z_ell(&e(1));
    let ec = SpecialLocus::e_c(&(h() - e(1)));
    let fc = SpecialLocus::f_c(&(h() - e(1)));
    assert_eq!((p.dimension, p.ext_dims), (2, (2, 3)));
    assert_eq!((z.dimension, z.ext_dims), (1, (2, 3)));
    assert_eq!((ec.dimension, ec.ext_dims), (3, (1, 4)));
    assert_eq!((fc.dimension, fc.ext_dims), (0, (1, 4)));
    // the locus on each side is a projective space of dimension h¹ - 1
    assert_eq!(p.dimension, p.ext_dims.1 - 1);
    assert_eq!(z.dimension, z.ext_dims.0 - 1);
    assert_eq!(ec.dimension, ec.ext_dims.1 - 1);
    assert_eq!(fc.dimension, fc.ext_dims.0 - 1);
}

fn ell_of_degree(d: i64) -> PicClass {
    *classes(ClassKind::MinusOne).iter().find(|l| l.dot(&h()) == d).unwrap()
}

#[test]
fn surface_profiles() {
    let degrees: Vec<i64> = (2..=6).map(|d| special_surface_profile(&h(), &ell_of_degree(d)).unwrap().degree).collect();
    assert_eq!(degrees, [1, 3, 6, 10, 15]);
    let p4 = special_surface_profile(&h(), &(4 * h() - sum_e() - e(1) - e(2) - e(3))).unwrap();
    assert_eq!(p4.singularities.len(), 5);
    let p5 = special_surface_profile(&h(), &(5 * h() - 2 * sum_e() + e(1) + e(2))).unwrap();
    assert_eq!(p5.singularities.len(), 7);
    assert!(matches!(p5.singularities.last(), Some(Singularity::TripleCurve { .. })));
    let p6 = special_surface_profile(&h(), &(6 * h() - 2 * sum_e() - e(1))).unwrap();
    assert_eq!(p6.singularities[0], Singularity::OneThird11 { point: 1 });
    assert!(special_surface_profile(&h(), &e(1)).is_err());
}

#[test]
fn degree_ledgers() {
    assert_eq!(surface_degree_ledger(8, &[4, 4, 4, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1]), 6);
    let mut b = vec![4; 6];
    b.extend([1; 15]);
    assert_eq!(surface_degree_ledger(11, &b), 10);

    let ledger = |l: PicClass| degree_ledger(&h(), &l).unwrap();
    let d4 = ledger(4 * h() - sum_e() - e(1) - e(2) - e(3));
    assert_eq!((d4.line_coeff, d4.multiplicities.iter().filter(|&&m| m == 4).count(), d4.multiplicities.len()), (8, 3, 13));
    assert_eq!(d4.degree, 6);
    let d5 = ledger(5 * h() - 2 * sum_e() + e(1) + e(2));
    assert_eq!((d5.line_coeff, d5.multiplicities.iter().filter(|&&m| m == 4).count(), d5.multiplicities.len()), (11, 6, 21));
    assert_eq!(d5.degree, 10);
    let d6 = ledger(6 * h() - 2 * sum_e() - e(1));
    assert_eq!((d6.line_coeff, d6.multiplicities.iter().filter(|&&m| m == 4).count(), d6.multiplicities.len()), (14, 10, 31));
    assert_eq!(d6.degree, 15);
    assert_eq!(ledger(ell_of_degree(2)).degree, 1);
    assert_eq!(ledger(ell_of_degree(3)).degree, 3);
    // every (-1)-class of h-degree at least 2 gives its profile degree
    for l in classes(ClassKind::MinusOne).iter().filter(|l| l.dot(&h()) >= 2) {
        assert_eq!(ledger(*l).degree, special_surface_profile(&h(), l).unwrap().degree, "{l}");
    }
}
