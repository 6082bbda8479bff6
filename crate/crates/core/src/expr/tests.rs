use alloc::collections::BTreeMap;
use alloc::string::ToString;

use super::*;

fn p(s: &str) -> Expr {
    parse_free(s).unwrap()
}

fn chart21() -> Chart {
    let names: alloc::vec::Vec<alloc::string::String> = (1..=21).map(|i| alloc::format!("x{i}")).collect();
    Chart::new(&names).unwrap()
}

#[test]
fn pythagoras_and_exp_cancel() {
    assert!(p("sin(t)^2 + cos(t)^2").is_one());
    assert!(p("sin(t)^2 + cos(t)^2 - 1").is_zero());
    assert!(p("exp(x)*exp(-x) - 1").is_zero());
    assert!(p("x*y - y*x").is_zero());
    assert_eq!(p("exp(2*x)"), p("exp(x)^2"));
    assert_eq!(p("exp(x)*exp(y)"), p("exp(x+y)"));
}

#[test]
fn tan_is_rewritten() {
    let e = p("tan(phi)");
    assert!(!e.to_string().contains("tan"));
    assert_eq!(e, p("sin(phi)/cos(phi)"));
}

#[test]
fn sign_normalisation() {
    assert_eq!(p("sin(-x)"), p("-sin(x)"));
    assert_eq!(p("cos(-x)"), p("cos(x)"));
    assert_eq!(p("sin(y - x)"), p("-sin(x - y)"));
}

#[test]
fn derivatives() {
    let x1 = Symbol::new("x1");
    assert_eq!(p("exp(-x1)").diff(&x1), p("-exp(-x1)"));
    let th = Symbol::new("theta");
    assert_eq!(p("u1*cos(theta)").diff(&th), p("-u1*sin(theta)"));
    let phi = Symbol::new("phi");
    assert_eq!(p("tan(phi)").diff(&phi), p("1/cos(phi)^2"));
    let x = Symbol::new("x");
    assert_eq!(p("ln(x^2+1)").diff(&x), p("2*x/(x^2+1)"));
}

#[test]
fn inverse_with_sines() {
    let e = p("1 + sin(x)");
    let i = e.inv().unwrap();
    assert!(e.mul(&i).is_one());
    let e = p("sin(x) + x*sin(y) + sin(x)*sin(y)");
    assert!(e.mul(&e.inv().unwrap()).is_one());
}

#[test]
fn rational_function_reduction() {
    assert_eq!(p("(x^2 - y^2)/(x - y)"), p("x + y"));
    assert_eq!(p("(x*y + x)/(x*z + x)"), p("(y+1)/(z+1)"));
    assert_eq!(p("1/(x-1) - 1/(x+1)"), p("2/(x^2-1)"));
    let g = gcd(&p("(x+y)^2*(z-1)").as_ratfunc().unwrap().num().clone(), &p("(x+y)*(z+1)*(z-1)").as_ratfunc().unwrap().num().clone());
    assert_eq!(Expr::from_poly(g), p("x*z + y*z - x - y"));
}

#[test]
fn eval_and_singular() {
    let c = Chart::with_params(&["x1", "u1", "theta", "x"], &["L"]).unwrap();
    let e = parse("exp(-x1)", &c).unwrap();
    assert_eq!(e.eval(&|_| Some(0.0)).unwrap(), 1.0);
    let e = parse("u1*cos(theta)", &c).unwrap();
    let v = e.eval(&|s| Some(if s.name() == "u1" { 2.0 } else { 0.0 })).unwrap();
    assert_eq!(v, 2.0);
    let e = parse("1/(x-1)", &c).unwrap();
    assert!(matches!(e.eval(&|_| Some(1.0)), Err(EvalError::Singular(_))));
}

#[test]
fn parse_errors() {
    let c = chart21();
    assert!(matches!(parse("x1 + 1.5", &c), Err(crate::Error::Parse { .. })));
    assert!(matches!(parse("x1 + y", &c), Err(crate::Error::Parse { pos: 5, .. })));
    assert!(matches!(parse("x1^(1/2)", &c), Err(crate::Error::Parse { .. })));
    assert!(parse("x1 +", &c).is_err());
    assert!(parse("foo(x1)", &c).is_err());
    assert!(parse("x1/0", &c).is_err());
}

#[test]
fn unary_minus_binds_tighter_than_sum() {
    assert_eq!(p("-x1+x2"), p("x2 - x1"));
    assert_eq!(p("-x^2"), p("-(x^2)"));
    assert_eq!(p("2^3^2"), Expr::int(512));
    assert_eq!(p("x^-2"), p("1/x^2"));
}

#[test]
fn print_round_trip() {
    for s in [
        "x19 - x8 - exp(x1)",
        "exp(-x1)",
        "w2*sin(theta) + w1^2*cos(theta)*tan(phi)/L",
        "1/2*(x13 - x14) + 3/7",
        "(x + sin(y))/(1 - sin(y)*cos(x))",
        "exp(x/2) + exp(1/x) + ln(x + 2)",
        "-sin(x) - 2*sin(y)*x",
        "exp(sin(x)) + cos(exp(-y))",
    ] {
        let e = p(s);
        let back = p(&e.to_string());
        assert_eq!(e, back, "{s} -> {e}");
    }
}

#[test]
fn substitution() {
    let mut m = BTreeMap::new();
    m.insert(Symbol::new("x"), p("y + 1"));
    assert_eq!(p("x^2 + exp(x)").subs(&m), p("y^2 + 2*y + 1 + exp(1)*exp(y)"));
    assert_eq!(p("sin(x)").subs(&m), p("sin(y + 1)"));
}

#[test]
fn natural_printing_order() {
    assert_eq!(p("x8 + x19").to_string(), "x8 + x19");
}
