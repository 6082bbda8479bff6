use alloc::vec::Vec;

use super::*;
use crate::expr::{parse, Chart, Expr};

fn field(c: &Chart, comps: &[&str]) -> VectorField {
    VectorField::new(c, comps.iter().map(|s| parse(s, c).unwrap()).collect()).unwrap()
}

fn car() -> Distribution {
    let c = Chart::with_params(&["t", "x", "y", "theta", "phi", "u1", "u2"], &["L"]).unwrap();
    let x = field(&c, &["1", "u1*cos(theta)", "u1*sin(theta)", "u1/L*tan(phi)", "u2", "0", "0"]);
    Distribution::new(&c, alloc::vec![x, VectorField::basis(&c, 5), VectorField::basis(&c, 6)])
}

#[test]
fn bracket_examples() {
    let c = Chart::new(&["x", "y"]).unwrap();
    let dx = VectorField::basis(&c, 0);
    let xdy = field(&c, &["0", "x"]);
    assert_eq!(dx.bracket(&xdy), VectorField::basis(&c, 1));
    assert!(xdy.bracket(&xdy).is_zero());
}

#[test]
fn car_bracket() {
    let d = car();
    let g = d.generators();
    let b = g[0].bracket(&g[1]);
    let c = d.chart();
    let expect = field(c, &["0", "-cos(theta)", "-sin(theta)", "-tan(phi)/L", "0", "0", "0"]);
    assert_eq!(b, expect);
}

#[test]
fn car_refined_type() {
    let f = refined_derived_type(&car()).unwrap();
    assert_eq!(f.record.to_lists(), [alloc::vec![3, 0], alloc::vec![5, 2, 3], alloc::vec![6, 4, 4], alloc::vec![7, 7]]);
    let c = car().chart().clone();
    let idx = |n: &str| c.index_of(n).unwrap();
    assert!(f.chars[1].same_span(&Distribution::coordinate(&c, &[idx("u1"), idx("u2"), idx("t")])));
    assert!(f.chars[2].same_span(&Distribution::coordinate(&c, &[idx("u1"), idx("u2"), idx("t"), idx("phi")])));
    assert!(f.inters[1].as_ref().unwrap().same_span(&Distribution::coordinate(&c, &[idx("u1"), idx("u2")])));
}

#[test]
fn annihilators() {
    let c = Chart::with_params(&["t", "x", "y", "theta", "phi", "u1", "u2"], &["L"]).unwrap();
    let d = Distribution::coordinate(&c, &[5, 6, 0, 4]);
    let a = d.annihilator();
    assert!(a.same_span(&Codistribution::coordinate(&c, &[1, 2, 3])));
    assert_eq!(Distribution::full(&c).annihilator().rank(), 0);
    let c3 = Chart::new(&["x", "y", "z"]).unwrap();
    let d = Distribution::new(&c3, alloc::vec![field(&c3, &["1", "0", "y"])]);
    let a = d.annihilator();
    assert_eq!(a.rank(), 2);
    for w in a.generators() {
        assert!(w.apply(&d.generators()[0]).is_zero());
    }
    assert!(a.annihilator_of().same_span(&d));
}

#[test]
fn intersections() {
    let c = Chart::new(&["x", "y", "z"]).unwrap();
    let a = Distribution::coordinate(&c, &[0, 1]);
    let b = Distribution::coordinate(&c, &[1, 2]);
    assert!(a.intersect(&b).same_span(&Distribution::coordinate(&c, &[1])));
    assert!(a.intersect(&a).same_span(&a));
}

#[test]
fn integrability() {
    let c = Chart::new(&["x1", "x2", "x3", "x4", "x5"]).unwrap();
    assert!(Distribution::coordinate(&c, &[0, 4]).is_integrable());
    // Contact system on J¹(R,R): {∂x + p∂y, ∂p}.
    let c = Chart::new(&["x", "y", "p"]).unwrap();
    let d = Distribution::new(&c, alloc::vec![field(&c, &["1", "p", "0"]), field(&c, &["0", "0", "1"])]);
    assert!(!d.is_integrable());
    assert_eq!(derived_bundle(&d).rank(), 3);
    assert_eq!(cauchy_bundle(&derived_bundle(&d)).unwrap().rank(), 3);
    assert_eq!(cauchy_bundle(&d).unwrap().rank(), 0);
}

#[test]
fn involutive_is_its_own_cauchy_bundle() {
    let c = Chart::new(&["x", "y", "z"]).unwrap();
    let d = Distribution::coordinate(&c, &[0, 1]);
    assert!(cauchy_bundle(&d).unwrap().same_span(&d));
    assert!(derived_bundle(&d).same_span(&d));
    let f = refined_derived_type(&d).unwrap();
    assert_eq!(f.record.k(), 0);
    assert_eq!(f.record.to_lists(), [alloc::vec![2, 2]]);
}

#[test]
fn jacobi_on_car_fields() {
    let d = car();
    let g: Vec<VectorField> = d.generators();
    let (x, y, z) = (&g[0], &g[0].bracket(&g[1]), &g[2]);
    let s = x.bracket(&y.bracket(z)).add(&y.bracket(&z.bracket(x))).add(&z.bracket(&x.bracket(y)));
    assert!(s.is_zero());
    let _ = Expr::zero();
}
