mod common;

use common::*;
use goursat_core::classify::{check_prop31, classify, kinematics, TypeVector, WeberCheck};
use goursat_core::expr::Chart;
use goursat_core::geometry::{DerivedTypeRecord, Distribution, VectorField};

fn rec(l: &[&[usize]]) -> DerivedTypeRecord {
    DerivedTypeRecord::from_lists(&l.iter().map(|x| x.to_vec()).collect::<Vec<_>>()).unwrap()
}

#[test]
fn kinematic_vectors() {
    let r = rec(&[&[6, 0], &[11, 5, 7], &[14, 10, 10], &[17, 13, 14], &[19, 16, 16], &[21, 21]]);
    let k = kinematics(&r, 21);
    assert_eq!(k.velocity, [5, 3, 3, 2, 2]);
    assert_eq!(k.deceleration, [2, 0, 1, 0, 2]);
    assert_eq!(k.big_n, [15, 10, 7, 4, 2, 0]);
    let car = rec(&[&[3, 0], &[5, 2, 3], &[6, 4, 4], &[7, 7]]);
    assert_eq!(kinematics(&car, 7).deceleration, [1, 0, 1]);
}

#[test]
fn identities() {
    let r = rec(&[&[6, 0], &[11, 5, 7], &[14, 10, 10], &[17, 13, 14], &[19, 16, 16], &[21, 21]]);
    let ids = check_prop31(&r, &[2, 0, 1, 0, 2]);
    assert!(ids.iter().all(|c| c.pass()));
    let chi1 = ids.iter().find(|c| c.name.starts_with("chi1 ")).unwrap();
    assert_eq!((chi1.lhs, chi1.rhs), (7, 7));
    let car = rec(&[&[3, 0], &[5, 2, 3], &[6, 4, 4], &[7, 7]]);
    assert!(check_prop31(&car, &[1, 0, 1]).iter().all(|c| c.pass()));
    let bad = rec(&[&[3, 0], &[5, 2, 3], &[6, 4, 4], &[7, 7]]);
    let mut lists = bad.to_lists();
    lists[1][2] = 6;
    let bad = DerivedTypeRecord::from_lists(&lists).unwrap();
    let failed: Vec<_> = check_prop31(&bad, &[1, 0, 1]).into_iter().filter(|c| !c.pass()).collect();
    assert_eq!(failed.len(), 1);
    assert!(failed[0].name.starts_with("chi1 "));
}

#[test]
fn type_vector_arithmetic() {
    let t = TypeVector::new(vec![2, 0, 1, 0, 2]).unwrap();
    assert_eq!((t.p(), t.class(), t.dim(), t.rank()), (5, 3, 21, 6));
    assert_eq!(t.pairs(), [(2, 1), (1, 3), (2, 5)]);
    assert_eq!(TypeVector::from_pairs(&t.pairs()).unwrap(), t);
    assert_eq!(t.to_string(), "<2,0,1,0,2>");
    assert!(TypeVector::new(vec![1, 0]).is_err());
}

#[test]
fn example51_is_goursat() {
    let v = classify(&example51()).unwrap();
    assert!(v.is_goursat, "{:?}", v.diagnostics);
    assert_eq!(v.tau.unwrap().as_slice(), [2, 0, 1, 0, 2]);
    assert!(matches!(v.weber, Some(WeberCheck::Checked { integrable: true, .. })));
}

#[test]
fn car_is_goursat() {
    let v = classify(&car()).unwrap();
    assert!(v.is_goursat);
    assert_eq!(v.tau.unwrap().as_slice(), [1, 0, 1]);
    assert!(matches!(v.weber, Some(WeberCheck::NotApplicable)));
}

#[test]
fn negative_controls() {
    let c = Chart::new(&["x", "y", "z"]).unwrap();
    let inv = Distribution::new(&c, vec![VectorField::basis(&c, 0), VectorField::basis(&c, 1)]);
    let v = classify(&inv).unwrap();
    assert!(!v.is_goursat);
    assert!(v.first_failure.unwrap().contains("derived length is 0"));

    let m = classify(&example51_mutated()).unwrap();
    assert!(!m.is_goursat);
    assert_eq!(m.record().to_lists()[3], [17, 12, 13]);
    assert!(m.first_failure.unwrap().contains("chi3_2"));

    // Hilbert-Cartan (2,3,5): deceleration <-1,2>
    let c = Chart::new(&["x", "y", "p", "q", "z"]).unwrap();
    let d = Distribution::new(&c, vec![field(&c, &["1", "p", "q", "0", "q^2"]), VectorField::basis(&c, 3)]);
    let v = classify(&d).unwrap();
    assert!(!v.is_goursat);
    assert_eq!(v.kinematics.unwrap().deceleration, [-1, 2]);
    let f = v.first_failure.unwrap();
    assert!(f.contains("negative deceleration"), "{f}");
}
