//! The acceptance suite: eleven checks, each reduced to a pass/fail line.
//!
//! A check whose statement as given does not hold, but whose corrected
//! statement does, is reported as failed with a [`Deviation`] that records
//! both, so that nothing is silently reinterpreted.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::classes::{
    classes, conics_disjoint_from, enumerate, locus_intersection_count, max_cubic_pairing, minus_one_components_of,
    non_nef_cubic_signature_classes, solve_signature, ClassKind,
};
use crate::cones::{cone, twist_normal, verify_chain, verify_dual_pair, ConeName};
use crate::determinant::{
    bertini_x_map, bianticanonical_pairing, effective_semigroup_generators, fixed_divisor_class, rho, rho_half, zeta,
};
use crate::fan::{all_walls, lt_point, segment_crossings, walls_through};
use crate::gale::{associate, general_linear_position, random_configuration, verify_minor_identity};
use crate::lattice::{bertini_map, bertini_pullback, eigenspace, k_s, k_x, proportional, Basis, PicClass, RatClass};
use crate::linalg::{int_rank, primitive_integer_vector, q, Q};
use crate::surgery::{
    bertini_factorization, chi_tangent, degree_ledger, special_surface_profile, surface_degree_ledger, walk,
    FourfoldInvariants,
};
use crate::fan::Surgery;

/// A statement that fails as given, with the statement that was verified
/// in its place.
#[derive(Clone, Debug, Serialize)]
pub struct Deviation {
    pub stated: String,
    pub found: String,
    pub corrected_claim_holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub deviations: Vec<Deviation>,
}

impl CriterionResult {
    /// Passed, or failed only through recorded deviations whose corrected
    /// statements hold.
    pub fn explained(&self) -> bool {
        self.passed || (!self.deviations.is_empty() && self.deviations.iter().all(|d| d.corrected_claim_holds))
    }
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{:>2}] {status}  {}: {}", self.id, self.title, self.detail)?;
        for d in &self.deviations {
            let verdict = if d.corrected_claim_holds { "verified instead" } else { "NOT verified either" };
            write!(f, "\n       as stated: {}; {verdict}: {}", d.stated, d.found)?;
        }
        Ok(())
    }
}

struct Checks {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Checks {
    fn new() -> Self {
        Checks { failures: Vec::new(), notes: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    fn finish(self, id: u8, title: &'static str, deviations: Vec<Deviation>) -> CriterionResult {
        let passed = self.failures.is_empty() && deviations.is_empty();
        let detail = if self.failures.is_empty() {
            self.notes.join("; ")
        } else {
            format!("failed: {}", self.failures.join("; "))
        };
        let deviations = if self.failures.is_empty() {
            deviations
        } else {
            deviations.into_iter().map(|d| Deviation { corrected_claim_holds: false, ..d }).collect()
        };
        CriterionResult { id, title, passed, detail, deviations }
    }
}

fn h() -> PicClass {
    PicClass::hyperplane(Basis::Surface)
}

fn e(i: usize) -> PicClass {
    PicClass::exceptional(Basis::Surface, i)
}

fn sorted(v: impl IntoIterator<Item = PicClass>) -> Vec<PicClass> {
    let mut v: Vec<PicClass> = v.into_iter().collect();
    v.sort();
    v
}

fn rank_of(v: &[PicClass]) -> usize {
    let rows: Vec<[i64; 9]> = v.iter().map(|c| *c.coeffs()).collect();
    int_rank(&rows)
}

pub fn criterion_1() -> CriterionResult {
    let mut c = Checks::new();
    let mut deviations = Vec::new();
    for kind in ClassKind::ALL {
        match enumerate(kind) {
            Ok(v) => c.check(v.len() == kind.expected_count(), format!("{kind}: {} classes", v.len())),
            Err(err) => c.check(false, err.to_string()),
        }
    }
    c.note("roots 240, (-1)-classes 240, conics 2160, cubics 17280 as Weyl orbits");
    for kind in [ClassKind::Root, ClassKind::MinusOne, ClassKind::Conic] {
        let raw = solve_signature(kind.square(), kind.canonical_degree());
        c.check(raw.as_slice() == classes(kind), format!("{kind}: signature set differs from the orbit"));
    }
    c.note("signature set = orbit for roots, (-1)-classes, conics");
    let raw = solve_signature(1, -3);
    let extra = non_nef_cubic_signature_classes();
    let orbit: HashSet<PicClass> = classes(ClassKind::Cubic).iter().copied().collect();
    let split = raw.len() == orbit.len() + extra.len()
        && raw.iter().all(|x| orbit.contains(x) || extra.contains(x))
        && extra.iter().all(|x| !orbit.contains(x));
    let lines = classes(ClassKind::MinusOne);
    let extras_are_k_plus_2l = sorted(lines.iter().map(|l| -k_s() + 2 * *l)) == sorted(extra.iter().copied());
    let not_nef = extra.iter().all(|x| lines.iter().any(|l| x.dot(l) < 0));
    deviations.push(Deviation {
        stated: "the integral solutions of (x², x·K) = (1, -3) are exactly the 17280 cubics".into(),
        found: format!(
            "there are {} solutions: the 17280 cubics and the {} classes -K + 2ℓ, which pair to -1 with ℓ and so are not nef; \
             the nef solutions equal the orbit exactly",
            raw.len(),
            extra.len()
        ),
        corrected_claim_holds: split && extras_are_k_plus_2l && not_nef && raw.len() == 17520,
    });
    c.finish(1, "enumeration", deviations)
}

pub fn criterion_2() -> CriterionResult {
    let mut c = Checks::new();
    let walls = all_walls();
    let dirs: HashSet<Vec<_>> = walls
        .iter()
        .map(|w| primitive_integer_vector(&w.normal.coeffs().iter().map(|&x| q(x)).collect::<Vec<_>>()))
        .collect();
    c.check(walls.len() == 19680, format!("{} walls", walls.len()));
    c.check(dirs.len() == walls.len(), "proportional wall normals");
    c.note(format!("{} walls, pairwise non-proportional", walls.len()));

    let hh = h();
    let hp = bertini_pullback(&hh).expect("surface class");
    let sum = PicClass::exceptional_sum(Basis::Surface);
    let pairs: Vec<(usize, usize)> = (1..=8).array_combinations().map(|[i, j]| (i, j)).collect();
    let expected: Vec<((i64, i64), Vec<PicClass>)> = vec![
        ((1, 32), vec![hh]),
        ((1, 20), (1..=8).map(|i| hh - e(i)).collect()),
        ((1, 8), pairs.iter().map(|&(i, j)| hh - e(i) - e(j)).collect()),
        ((1, 4), (1..=8).map(e).collect()),
        ((3, 4), (1..=8).map(|i| 6 * hh - 2 * sum - e(i)).collect()),
        ((7, 8), pairs.iter().map(|&(i, j)| 5 * hh - 2 * sum + e(i) + e(j)).collect()),
        ((19, 20), (1..=8).map(|i| 11 * hh - 4 * sum + e(i)).collect()),
        ((31, 32), vec![hp]),
    ];
    for ((a, b), want) in &expected {
        let t = Q::new((*a).into(), (*b).into());
        let got = walls_through(&lt_point(&hh, &t)).map(|w| sorted(w.iter().map(|w| w.center)));
        c.check(got.as_ref().ok() == Some(&sorted(want.iter().copied())), format!("walls through L_{a}/{b}"));
    }
    c.note("walls through the eight special L_t are exactly the listed centers");
    match segment_crossings(&RatClass::from(hh), &RatClass::from(hp)) {
        Ok(ev) => {
            let ts: Vec<Q> = ev.iter().map(|e| e.t.clone()).collect();
            let want: Vec<Q> = expected.iter().map(|((a, b), _)| Q::new((*a).into(), (*b).into())).collect();
            c.check(ts == want, format!("crossing parameters {:?}", ts.iter().map(|t| t.to_string()).collect::<Vec<_>>()));
            c.note(format!(
                "h → ι*h crosses walls at t = {}",
                ts.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(", ")
            ));
        }
        Err(err) => c.check(false, err.to_string()),
    }
    c.finish(2, "wall structure", Vec::new())
}

pub fn criterion_3() -> CriterionResult {
    let mut c = Checks::new();
    for link in verify_chain() {
        c.check(link.passed(), format!("{} ⊄ {}", link.inner, link.outer));
    }
    c.note("N ⊂ Π ⊂ E ⊂ Nef");
    let pairs = [
        (ConeName::Ne, ConeName::Nef, 240, 19440),
        (ConeName::N, ConeName::NDual, 19440, 240),
        (ConeName::E, ConeName::EDual, 2160, 17520),
    ];
    for (a, b, na, nb) in pairs {
        let r = verify_dual_pair(cone(a), cone(b));
        c.check(r.passed(), format!("({a}, {b}) duality"));
        c.check(r.cone_extremal == na && r.dual_extremal == nb, format!("({a}, {b}) ray counts {}/{}", r.cone_extremal, r.dual_extremal));
    }
    c.note("extremal rays NE 240, Nef 19440, N 19440, N∨ 240, E 2160, E∨ 17520");
    let e_cone = cone(ConeName::E);
    let facet = e_cone.facet_generators(&twist_normal(&h()));
    c.check(
        sorted(facet.iter().copied()) == sorted((1..=8).map(|i| h() - e(i))) && rank_of(&facet) == 8,
        "facet of 2h + K",
    );
    let mut bad = 0;
    for l in classes(ClassKind::MinusOne) {
        let f = e_cone.facet_generators(l);
        if f.len() != 126 || rank_of(&f) != 8 {
            bad += 1;
        }
    }
    c.check(bad == 0, format!("{bad} facets ℓ⊥ ∩ E without 126 conics of rank 8"));
    c.note("(2h+K)⊥ ∩ E simplicial on h - ei; each ℓ⊥ ∩ E spanned by 126 conics");
    c.finish(3, "cone chain and duality", Vec::new())
}

pub fn criterion_4() -> CriterionResult {
    let mut c = Checks::new();
    let ok126 = classes(ClassKind::MinusOne).iter().all(|l| conics_disjoint_from(l).map(|v| v.len() == 126).unwrap_or(false));
    c.check(ok126, "126 disjoint conics");
    let ok14 = classes(ClassKind::Conic).iter().all(|k| minus_one_components_of(k).map(|v| v.len() == 14).unwrap_or(false));
    c.check(ok14, "14 orthogonal (-1)-classes");
    let hp = bertini_pullback(&h()).expect("surface class");
    match max_cubic_pairing(&h()) {
        Ok((m, at)) => c.check(m == 17 && at == vec![hp], format!("max h·h' = {m} at {} cubics", at.len())),
        Err(err) => c.check(false, err.to_string()),
    }
    c.note("126 conics per ℓ, 14 (-1)-classes per conic, max h·h' = 17 only at ι*h");
    c.finish(4, "incidence counts", Vec::new())
}

fn random_surface_class(rng: &mut ChaCha8Rng) -> PicClass {
    PicClass::surface(std::array::from_fn(|_| rng.gen_range(-30..=30)))
}

pub fn criterion_5(seed: u64) -> CriterionResult {
    let mut c = Checks::new();
    let big_e = |i| PicClass::exceptional(Basis::Fourfold, i);
    c.check(rho(&-k_s()).ok() == Some(-k_x()), "ρ(-K_S)");
    c.check((1..=8).all(|i| rho(&(h() - e(i))).ok() == Some(2 * big_e(i))), "ρ(h - ei)");
    let roots = classes(ClassKind::Root);
    let imgs: Vec<RatClass> = roots.iter().map(|r| rho_half(r).expect("surface")).collect();
    let mut iso = true;
    for i in 0..roots.len() {
        for j in 0..roots.len() {
            iso &= imgs[i].pair(&imgs[j]).expect("fourfold") == q(roots[i].dot(&roots[j]));
        }
    }
    c.check(iso, "ρ̃ isometry on roots");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut integral = true;
    let mut adjoint = true;
    for _ in 0..1000 {
        let l = random_surface_class(&mut rng);
        integral &= rho_half(&l).expect("surface").is_integral() == (l.dot(&k_s()) % 2 == 0);
        let g = PicClass::curve(std::array::from_fn(|_| rng.gen_range(-30..=30)));
        let m = random_surface_class(&mut rng);
        adjoint &= rho(&m).and_then(|x| x.pair(&g)).ok() == zeta(&g).map(|z| m.dot(&z)).ok();
    }
    c.check(integral, "integrality criterion");
    c.check(adjoint, "ρ/ζ adjointness");
    c.note("ρ(-K_S) = -K_X, ρ(h - ei) = 2Ei, ρ̃ isometric on 240×240 root pairs, integrality and adjointness on 1000 seeded samples");
    c.finish(5, "determinant bridge", Vec::new())
}

pub fn criterion_6() -> CriterionResult {
    let mut c = Checks::new();
    let big_h = PicClass::hyperplane(Basis::Fourfold);
    let sum = PicClass::exceptional_sum(Basis::Fourfold);
    let ix = bertini_x_map();
    c.check(ix.apply(&big_h).ok() == Some(49 * big_h - 30 * sum), "ι_X(H)");
    c.check(ix.compose(ix).ok() == Some(crate::lattice::LatticeMap::identity(Basis::Fourfold)), "ι_X involution");
    c.check(ix.preserves_pairing(), "ι_X isometry");
    let fs = eigenspace(&bertini_map(), 1);
    c.check(fs.len() == 1 && proportional(&fs[0], &RatClass::from(k_s())), "fixed line of ι_S");
    let fx = eigenspace(ix, 1);
    c.check(fx.len() == 1 && proportional(&fx[0], &RatClass::from(k_x())), "fixed line of ι_X");
    let all = classes(ClassKind::Conic).iter().all(|k| bianticanonical_pairing(k).unwrap_or(false));
    c.check(all, "E_C + ι*E_C = -2K");
    c.note("ι_X(H) = 49H - 30ΣE, involutive isometry, fixed lines spanned by K_S and K_X, E_C + ι*E_C = -2K for all 2160 conics");
    c.finish(6, "Bertini involution", Vec::new())
}

pub fn criterion_7() -> CriterionResult {
    let mut c = Checks::new();
    let ok = classes(ClassKind::Conic)
        .iter()
        .all(|k| fixed_divisor_class(k).ok().map(RatClass::from) == rho_half(k).ok());
    c.check(ok, "E_C formula = ½ρ(C)");
    let g = effective_semigroup_generators();
    let distinct: BTreeSet<PicClass> = g.iter().copied().collect();
    c.check(g.len() == 2401 && distinct.len() == 2401, format!("{} generators", g.len()));
    c.check(g.iter().all(|x| (-k_x()).dot(x) == 3), "-K_X·L = 3");
    c.note("E_C = ½ρ(C) for all conics; 2401 distinct generators, each with -K_X·L = 3");
    c.finish(7, "fixed divisors", Vec::new())
}

pub fn criterion_8() -> CriterionResult {
    let mut c = Checks::new();
    let mut deviations = Vec::new();
    match walk(&RatClass::from(-k_s() + 2 * h()), &RatClass::from(-k_s())) {
        Ok(log) => {
            let centers: Vec<Vec<PicClass>> = log.events.iter().map(|e| sorted(e.walls.iter().copied())).collect();
            let pairs: Vec<(usize, usize)> = (1..=8).array_combinations().map(|[i, j]| (i, j)).collect();
            let want = vec![sorted(pairs.iter().map(|&(i, j)| h() - e(i) - e(j))), sorted((1..=8).map(e))];
            c.check(centers == want, "X → Y wall order");
            c.check(log.events.iter().all(|e| e.kind == Some(Surgery::FlipLineToPlane)), "X → Y flips");
            c.check(log.initial == FourfoldInvariants::X && log.invariants == FourfoldInvariants::Y, "invariants X → Y");
            c.note(format!("X → Y: 28 flips at h - ei - ej then 8 at ei, invariants {} → {}", log.initial, log.invariants));
        }
        Err(err) => c.check(false, err.to_string()),
    }
    c.check(chi_tangent(&FourfoldInvariants::Y) == -8, "χ(T_Y)");
    c.note("χ(T_Y) = -8");
    match bertini_factorization() {
        Ok(b) => {
            let kinds: Vec<(Option<Surgery>, usize)> = b.log.summary();
            c.check(
                kinds
                    == [
                        (Some(Surgery::FlipPlaneToLine), 8),
                        (Some(Surgery::FlipPlaneToLine), 28),
                        (Some(Surgery::ContractDivisor), 8),
                    ],
                "Bertini route shape",
            );
            c.check((b.degree, b.multiplicity) == (49, 30), "degree 49, multiplicity 30");
            c.note("Y ⇢ P⁴: 8 + 28 flips then 8 divisorial contractions; system of degree 49 with multiplicity 30");
            let big_h = PicClass::hyperplane(Basis::Fourfold);
            let sum = PicClass::exceptional_sum(Basis::Fourfold);
            let big_e = |i| PicClass::exceptional(Basis::Fourfold, i);
            let got = sorted(b.contracted_divisors.iter().copied());
            let plus = sorted((1..=8).map(|i| 10 * big_h - 6 * sum + big_e(i)));
            let minus = sorted((1..=8).map(|i| 10 * big_h - 6 * sum - big_e(i)));
            if got != plus {
                let consistent = (1..=8).all(|i| {
                    let d = 10 * big_h - 6 * sum - big_e(i);
                    d == -2 * k_x() - big_e(i) && bertini_x_map().apply(&big_e(i)).ok() == Some(d)
                });
                deviations.push(Deviation {
                    stated: "the contracted divisors have classes 10H - 6ΣE + Ei".into(),
                    found: "they are 10H - 6ΣE - Ei = -2K_X - Ei = ι_X(Ei), as the fixed-divisor formula applied to \
                            ι*(h - ei) = 11h - 4Σe + ei gives; with +Ei the multiplicity at pi would be 7 > 6"
                        .into(),
                    corrected_claim_holds: got == minus && consistent,
                });
            }
        }
        Err(err) => c.check(false, err.to_string()),
    }
    c.finish(8, "surgery ledgers", deviations)
}

pub fn criterion_9() -> CriterionResult {
    let mut c = Checks::new();
    let mut deviations = Vec::new();
    let sum = PicClass::exceptional_sum(Basis::Surface);
    let samples = [
        2 * h() - e(4) - e(5) - e(6) - e(7) - e(8),
        3 * h() - sum - e(1) + e(8),
        4 * h() - sum - e(1) - e(2) - e(3),
        5 * h() - 2 * sum + e(1) + e(2),
        6 * h() - 2 * sum - e(1),
    ];
    let degrees: Vec<i64> =
        samples.iter().map(|l| special_surface_profile(&h(), l).map(|p| p.degree).unwrap_or(-1)).collect();
    let mut b4 = vec![4; 3];
    b4.extend([1; 10]);
    let mut b5 = vec![4; 6];
    b5.extend([1; 15]);
    c.check(surface_degree_ledger(8, &b4) == 6, "ledger (8; 4×3, 1×10)");
    c.check(surface_degree_ledger(11, &b5) == 10, "ledger (11; 4×6, 1×15)");
    let ledgers: Vec<i64> = samples.iter().map(|l| degree_ledger(&h(), l).map(|d| d.degree).unwrap_or(-1)).collect();
    let e6 = degree_ledger(&h(), &samples[4]);
    c.check(ledgers[2..] == [6, 10, 15], format!("rebuilt ledgers {:?}", &ledgers[2..]));
    if let Ok(l) = &e6 {
        c.note(format!(
            "ledgers: (8; 4×3, 1×10) = 6, (11; 4×6, 1×15) = 10, reconstructed d = 6: ({}; 4×{}, 1×{}) = {}",
            l.line_coeff,
            l.multiplicities.iter().filter(|&&b| b == 4).count(),
            l.multiplicities.iter().filter(|&&b| b == 1).count(),
            l.degree
        ));
    }
    let stated = [1, 4, 6, 10, 15];
    c.note(format!("profile degrees for d = 2..6: {degrees:?}"));
    if degrees != stated {
        let fixed = [1, 3, 6, 10, 15];
        deviations.push(Deviation {
            stated: "profile degrees (1, 4, 6, 10, 15)".into(),
            found: "(1, 3, 6, 10, 15): for d = 3 the surface is the cone over the quartic γi with vertex pj, and pj lies \
                    on γi, so its degree is 4 - 1 = 3; the degree ledger built the same way as for d = 4, 5, 6 gives 3"
                .into(),
            corrected_claim_holds: degrees == fixed && ledgers == fixed,
        });
    }
    c.finish(9, "special surfaces", deviations)
}

pub fn criterion_10(seed: u64) -> CriterionResult {
    let mut c = Checks::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut orth, mut ident, mut prop, mut double, mut general) = (true, true, true, true, 0);
    for _ in 0..50 {
        let a = random_configuration(&mut rng, 2, 8, 9);
        let b = match associate(&a) {
            Ok(b) => b,
            Err(err) => {
                c.check(false, err.to_string());
                continue;
            }
        };
        orth &= a.matrix().mul(&b.matrix().transpose()).is_zero();
        ident &= verify_minor_identity(&a, &b).map(|r| r.passed() && r.checked == 420).unwrap_or(false);
        if general_linear_position(&a) {
            general += 1;
            prop &= general_linear_position(&b);
        }
        double &= associate(&b).map(|x| x.matrix().same_row_space(a.matrix())).unwrap_or(false);
    }
    c.check(orth, "A·Bᵗ = 0");
    c.check(ident, "minor identity");
    c.check(prop, "general position propagation");
    c.check(double, "double association");
    c.note(format!(
        "50 seeded configurations: A·Bᵗ = 0, 420/420 minor identities each, general position propagated ({general} general inputs), double association recovers the row space"
    ));
    c.finish(10, "Gale duality", Vec::new())
}

pub fn criterion_11() -> CriterionResult {
    let mut c = Checks::new();
    let lines = classes(ClassKind::MinusOne);
    let mut seen = [0u64; 4];
    let mut ok = true;
    for (i, a) in lines.iter().enumerate() {
        for b in &lines[i + 1..] {
            match locus_intersection_count(a, b) {
                Ok(r) => {
                    let want = [0u8, 0, 1, 3];
                    ok &= (0..4).contains(&r.pairing) && r.points == want[r.pairing as usize];
                    if (0..4).contains(&r.pairing) {
                        seen[r.pairing as usize] += 1;
                    }
                }
                Err(_) => ok = false,
            }
        }
    }
    c.check(ok, "intersection counts");
    c.check(seen.iter().all(|&s| s > 0), "every pairing value occurs");
    c.note(format!(
        "(0, 0, 1, 3) points for pairings (0, 1, 2, 3) over all {} pairs (pairing counts {:?})",
        seen.iter().sum::<u64>(),
        seen
    ));
    c.finish(11, "incidence model", Vec::new())
}

/// Seed for the randomized checks (5 and 10) when none is given.
pub const DEFAULT_SEED: u64 = 2024;

pub fn run(id: u8, seed: u64) -> Option<CriterionResult> {
    Some(match id {
        1 => criterion_1(),
        2 => criterion_2(),
        3 => criterion_3(),
        4 => criterion_4(),
        5 => criterion_5(seed),
        6 => criterion_6(),
        7 => criterion_7(),
        8 => criterion_8(),
        9 => criterion_9(),
        10 => criterion_10(seed),
        11 => criterion_11(),
        _ => return None,
    })
}

pub fn run_all() -> Vec<CriterionResult> {
    run_all_seeded(DEFAULT_SEED)
}

pub fn run_all_seeded(seed: u64) -> Vec<CriterionResult> {
    (1..=11).map(|i| run(i, seed).expect("criterion id")).collect()
}
