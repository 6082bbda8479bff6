mod common;

use common::*;
use goursat_core::classify::classify;
use goursat_core::contact::{antiderivative, construct, find_first_integrals, Route, Strategy};
use goursat_core::control::{prolong_control, ControlSystem};
use goursat_core::expr::{parse, Chart, Expr, Symbol};
use goursat_core::geometry::{Codistribution, Distribution, OneForm, VectorField};
use goursat_core::verify::{certify, feedback_check, static_feedback_inspect};

fn p(c: &Chart, s: &str) -> Expr {
    parse(s, c).unwrap()
}

#[test]
fn example51_with_exp_hint() {
    let d = example51();
    let c = d.chart().clone();
    let v = classify(&d).unwrap();
    let out = construct(&d, &v, &[p(&c, "exp(x1)")]).unwrap();
    assert_eq!(out.route, Route::A);
    let ch = &out.chart;
    assert_eq!(ch.x, p(&c, "exp(x1)"));
    assert_eq!(ch.x_strategy, Strategy::Hint);
    // Z = X1 here, since X1(exp(x1)) = 1
    assert_eq!(ch.total, d.generators()[0]);
    assert_eq!(ch.z(1, 5, 0), Some(&p(&c, "x10")));
    assert_eq!(ch.z(2, 5, 0), Some(&p(&c, "-x2+x11")));
    assert_eq!(ch.z(1, 3, 1), Some(&p(&c, "-2*x12+x7+2")));
    assert_eq!(ch.z(2, 5, 4), Some(&p(&c, "x19-x8-exp(x1)")));
    assert_eq!(ch.z(2, 5, 5), Some(&p(&c, "2*(-x4+x8+exp(x1))+x20+x21")));
    assert!(ch.side_conditions.is_empty());
    assert_eq!(out.requested(), 6);
    let fb: Vec<usize> = out.fundamentals.iter().map(|f| f.order).collect();
    assert_eq!(fb, [1, 3]);
    // Ω_1 is a complement, unique only modulo Ξ^(1)
    let xi1 = &out.filtration.levels[7].bundle;
    let xi10 = &out.filtration.levels[8].bundle;
    assert!(xi1.sum(&out.fundamentals[0].bundle).same_span(xi10));
    assert!(xi1.sum(&Codistribution::coordinate(&c, &[2, 17])).same_span(xi10));
    assert!(out.fundamentals[1].bundle.same_span(&Codistribution::coordinate(&c, &[5])));
    let up = &out.filtration.levels[0].bundle;
    let expected = Codistribution::new(&c, vec![OneForm::basis(&c, 0), OneForm::d(&c, &p(&c, "x2-x11")), OneForm::basis(&c, 9)]);
    assert!(up.same_span(&expected));
    assert_eq!(out.filtration.levels.last().unwrap().bundle.rank(), 16);
    let cert = certify(&d, ch);
    assert!(cert.pass, "{:?}", cert.failures());
}

#[test]
fn example51_without_hint() {
    let d = example51();
    let c = d.chart().clone();
    let v = classify(&d).unwrap();
    let out = construct(&d, &v, &[]).unwrap();
    assert_eq!(out.chart.x, p(&c, "x1"));
    assert_eq!(out.chart.x_strategy, Strategy::Coordinate);
    assert_eq!(out.chart.side_conditions, [p(&c, "exp(-x1)")]);
    assert_eq!(out.requested(), 6);
    assert!(certify(&d, &out.chart).pass);
}

fn car_system() -> ControlSystem {
    ControlSystem::parse("t", &["x", "y", "theta", "phi"], &["u1", "u2"], &["L"], &["u1*cos(theta)", "u1*sin(theta)", "u1/L*tan(phi)", "u2"]).unwrap()
}

#[test]
fn car_route_b() {
    let s = car_system();
    let d = s.to_distribution();
    let c = d.chart().clone();
    let v = classify(&d).unwrap();
    let out = construct(&d, &v, &[]).unwrap();
    assert_eq!(out.route, Route::B);
    assert_eq!(out.chart.x, p(&c, "x"));
    let pi = out.pi.as_ref().unwrap();
    let want = Distribution::new(&c, ["u1", "u2", "t", "phi", "theta"].iter().map(|n| VectorField::basis(&c, c.index_of(n).unwrap())).collect());
    assert!(pi.same_span(&want));
    assert_eq!(out.chart.z(1, 1, 0), Some(&p(&c, "t")));
    assert_eq!(out.chart.z(1, 3, 0), Some(&p(&c, "y")));
    assert_eq!(out.chart.z(1, 3, 1), Some(&p(&c, "tan(theta)")));
    assert_eq!(out.chart.z(1, 3, 2), Some(&p(&c, "tan(phi)/(L*cos(theta)^3)")));
    assert_eq!(out.requested(), 3);
    assert!(out.fundamentals[0].bundle.same_span(&Codistribution::coordinate(&c, &[0])));
    assert!(certify(&d, &out.chart).pass);
    let fb = feedback_check(&d, s.time(), &v, Some(&out)).unwrap();
    assert!(!fb.met);
    assert!(!static_feedback_inspect(&out.chart, s.states(), s.controls(), s.time(), c.params()));
}

#[test]
fn prolonged_car() {
    let pr = prolong_control(&car_system(), "u1", 2).unwrap();
    let s = &pr.system;
    let d = s.to_distribution();
    let c = d.chart().clone();
    let v = classify(&d).unwrap();
    assert_eq!(v.tau.as_ref().unwrap().as_slice(), [0, 0, 2]);
    let out = construct(&d, &v, &[]).unwrap();
    assert_eq!(out.route, Route::A);
    assert_eq!(out.chart.x, p(&c, "t"));
    assert_eq!(out.chart.total, d.generators()[0]);
    assert_eq!(out.chart.z(1, 3, 1), Some(&p(&c, "u1*cos(theta)")));
    assert_eq!(out.chart.z(2, 3, 2), Some(&p(&c, "u1_1*sin(theta)+u1^2*cos(theta)*tan(phi)/L")));
    assert_eq!(out.requested(), 3);
    assert!(certify(&d, &out.chart).pass);
    let fb = feedback_check(&d, s.time(), &v, Some(&out)).unwrap();
    assert!(fb.met);
    assert!(fb.against.same_span(&Codistribution::coordinate(&c, &[0, 1, 2])));
    assert!(static_feedback_inspect(&out.chart, s.states(), s.controls(), s.time(), c.params()));
}

#[test]
fn goursat_chain_route_b() {
    let c = Chart::new(&["x", "z0", "z1", "z2"]).unwrap();
    let d = Distribution::new(&c, vec![field(&c, &["1", "z1", "z2", "0"]), VectorField::basis(&c, 3)]);
    let v = classify(&d).unwrap();
    assert!(v.is_goursat);
    let out = construct(&d, &v, &[]).unwrap();
    assert_eq!(out.pi.as_ref().unwrap().rank(), 2);
    assert_eq!(out.chart.functions(), [p(&c, "x"), p(&c, "z0"), p(&c, "z1"), p(&c, "z2")]);
    assert!(certify(&d, &out.chart).pass);
}

#[test]
fn contact_three_space() {
    let c = Chart::new(&["x", "y", "p"]).unwrap();
    let d = Distribution::new(&c, vec![field(&c, &["1", "p", "0"]), VectorField::basis(&c, 2)]);
    let v = classify(&d).unwrap();
    assert!(v.k1_path);
    let out = construct(&d, &v, &[]).unwrap();
    assert_eq!(out.chart.functions(), [p(&c, "x"), p(&c, "y"), p(&c, "p")]);
    assert_eq!(out.requested(), 2);
}

#[test]
fn finder_hint_and_failure() {
    let c = Chart::new(&["x", "y", "z"]).unwrap();
    let w = Codistribution::from_rows(&c, vec![vec![p(&c, "y"), p(&c, "x"), Expr::zero()]]);
    let zero = Codistribution::zero(&c);
    let got = find_first_integrals(&w, 1, &zero, &[p(&c, "x*y")]).unwrap();
    assert_eq!(got[0].strategy, Strategy::Hint);
    // without the hint the two-variable quadrature finds ln-free x*y up to a function
    let got = find_first_integrals(&w, 1, &zero, &[]).unwrap();
    assert_eq!(got[0].strategy, Strategy::TwoVariable);
    let df = OneForm::d(&c, &got[0].f);
    assert!(w.contains(&df));
    let bad = find_first_integrals(&w, 2, &zero, &[]);
    assert!(matches!(bad, Err(goursat_core::Error::IntegralsNotFound(_))));
}

#[test]
fn quadrature_dictionary() {
    let c = Chart::new(&["x"]).unwrap();
    let x = Symbol::new("x");
    for (e, f) in [("x^2", "x^3/3"), ("exp(2*x)", "exp(2*x)/2"), ("cos(x)", "sin(x)"), ("1/x", "ln(x)"), ("x*exp(x)", "x*exp(x)-exp(x)")] {
        assert_eq!(antiderivative(&p(&c, e), &x), Some(p(&c, f)), "{e}");
    }
}

#[test]
fn certificate_catches_mutation() {
    let d = example51();
    let c = d.chart().clone();
    let v = classify(&d).unwrap();
    let out = construct(&d, &v, &[p(&c, "exp(x1)")]).unwrap();
    let mut ch = out.chart.clone();
    ch.towers[0].funcs[0] = ch.towers[0].funcs[0].add(&p(&c, "x5^2"));
    let cert = certify(&d, &ch);
    assert!(!cert.pass);
    assert!(!cert.annihilation_pass());
    let mut ch = out.chart.clone();
    ch.towers[1].funcs[1] = Expr::int(3);
    assert!(!certify(&d, &ch).pass);
}
