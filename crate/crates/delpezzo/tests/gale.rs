use delpezzo::gale::*;
use delpezzo::linalg::{q, QMatrix, Q};
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn product_is_zero(a: &PointConfiguration, b: &PointConfiguration) -> bool {
    // explicit triple loop, independent of QMatrix::mul
    let (ma, mb) = (a.matrix(), b.matrix());
    (0..ma.rows()).all(|r| {
        (0..mb.rows()).all(|s| {
            let mut acc = Q::zero();
            for c in 0..ma.cols() {
                acc += ma.get(r, c) * mb.get(s, c);
            }
            acc.is_zero()
        })
    })
}

fn configs() -> Vec<PointConfiguration> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    (0..50).map(|_| random_configuration(&mut rng, 2, 8, 9)).collect()
}

#[test]
fn association_on_seeded_configurations() {
    for a in configs() {
        let b = associate(&a).unwrap();
        assert_eq!((b.k(), b.n()), (4, 8));
        assert!(product_is_zero(&a, &b));
        let rep = verify_minor_identity(&a, &b).unwrap();
        assert_eq!(rep.checked, 420);
        assert!(rep.passed(), "{:?}", rep.violations);
        if general_linear_position(&a) {
            assert!(general_linear_position(&b));
        }
        let back = associate(&b).unwrap();
        assert!(back.matrix().same_row_space(a.matrix()));
    }
}

#[test]
fn association_is_permutation_equivariant() {
    let a = &configs()[0];
    let perm = [3, 0, 7, 1, 6, 2, 5, 4];
    let lhs = associate(&a.permuted(&perm)).unwrap();
    let rhs = associate(a).unwrap().permuted(&perm);
    assert!(lhs.matrix().same_row_space(rhs.matrix()));
}

#[test]
fn perturbed_b_is_caught() {
    let a = &configs()[1];
    let b = associate(a).unwrap();
    let mut m = b.matrix().clone();
    m.set(0, 0, m.get(0, 0) + q(1));
    let bad = PointConfiguration::from_matrix(m).unwrap();
    assert!(verify_minor_identity(a, &bad).is_err());
    // keep A·Bᵗ = 0 by perturbing A the same way is not possible; instead
    // pair B with a different A whose kernel differs
    let other = &configs()[2];
    assert!(verify_minor_identity(other, &b).is_err());
}

#[test]
fn minor_identity_needs_ordered_complement() {
    // the unordered complement minor fails the identity for some pair
    let a = &configs()[3];
    let b = associate(a).unwrap();
    let mut failures = 0;
    for k0 in 0..8 {
        for k1 in k0 + 1..8 {
            let rest: Vec<usize> = (0..8).filter(|c| *c != k0 && *c != k1).collect();
            for x in 0..rest.len() {
                for y in x + 1..rest.len() {
                    let (i, j) = (rest[x], rest[y]);
                    let comp = |drop: usize| -> Vec<usize> { (0..8).filter(|c| ![k0, k1, drop].contains(c)).collect() };
                    let a_i = a.minor(&[k0, k1, i]);
                    let a_j = a.minor(&[k0, k1, j]);
                    let b_i = b.minor(&comp(i));
                    let b_j = b.minor(&comp(j));
                    if !(a_i * b_j + a_j * b_i).is_zero() {
                        failures += 1;
                    }
                }
            }
        }
    }
    assert!(failures > 0);
}

#[test]
fn general_position_examples() {
    let simplex = PointConfiguration::from_i64_columns(2, &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 1]]).unwrap();
    assert!(general_linear_position(&simplex));
    let collinear = PointConfiguration::from_i64_columns(2, &[vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 0]]).unwrap();
    assert!(!general_linear_position(&collinear));
    let hyper: Vec<Vec<i64>> = (1..=5).map(|t| vec![1, t, t * t, t * t * t, 0]).collect();
    let hyper = PointConfiguration::from_i64_columns(4, &hyper).unwrap();
    assert!(!general_linear_position(&hyper));
    assert!(associate(&collinear).is_err());
}

fn eight(cols: Vec<Vec<i64>>) -> PointConfiguration {
    PointConfiguration::from_i64_columns(2, &cols).unwrap()
}

#[test]
fn del_pezzo_checks() {
    let good = &configs()[4];
    assert_eq!(del_pezzo_position(good).unwrap(), None);
    let c = build_correspondence(good).unwrap();
    assert!(c.p_general_linear_position);

    let mut cols: Vec<Vec<i64>> = vec![vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 0]];
    cols.extend([[1, 2, 3], [2, 5, 7], [3, 1, 4], [5, 9, 2], [6, 5, 3]].map(|p| p.to_vec()));
    let v = del_pezzo_position(&eight(cols)).unwrap().unwrap();
    assert_eq!(v, PositionViolation::Collinear { points: [0, 1, 2] });
    assert_eq!(v.to_string(), "collinear {0,1,2}");

    // six points (1, t, t²) on xz = y²
    let mut cols: Vec<Vec<i64>> = (1..=6).map(|t| vec![1, t, t * t]).collect();
    cols.extend([vec![3, -7, 2], vec![-5, 2, 11]]);
    let v = del_pezzo_position(&eight(cols)).unwrap().unwrap();
    assert!(matches!(v, PositionViolation::Conic { .. }), "{v}");

    // the node of y²z = x³ + x²z and seven more points of the cubic
    let mut cols = vec![vec![0, 0, 1]];
    cols.extend([2, 3, 4, 5, 6, 7, 8].map(|t: i64| vec![t * t - 1, t * (t * t - 1), 1]));
    let cfg = eight(cols);
    let v = del_pezzo_position(&cfg).unwrap().unwrap();
    assert_eq!(v, PositionViolation::SingularCubic { point: 0 });
    assert!(build_correspondence(&cfg).is_err());
}

#[test]
fn json_round_trip() {
    let a = &configs()[5];
    let s = serde_json::to_string(a).unwrap();
    assert_eq!(PointConfiguration::from_json(&s).unwrap(), *a);
    let lit = r#"{"k": 2, "points": [[1, "3/7", 0], [0, 1, 1]]}"#;
    let p = PointConfiguration::from_json(lit).unwrap();
    assert_eq!(p.point(0)[1], Q::new(3.into(), 7.into()));
    assert!(PointConfiguration::from_json(r#"{"points": [[1, 0.5, 0]]}"#).is_err());
    assert!(PointConfiguration::from_json(r#"{"points": [[0, 0, 0]]}"#).is_err());
    let m = QMatrix::from_i64_rows(&[vec![1, 0], vec![0, 1]]);
    assert_eq!(PointConfiguration::from_matrix(m).unwrap().k(), 1);
}
