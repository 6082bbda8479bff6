#![allow(dead_code)]

use goursat_core::expr::{parse, Chart};
use goursat_core::geometry::{Distribution, VectorField};

pub fn chart_x(n: usize) -> Chart {
    let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    Chart::new(&names).unwrap()
}

pub fn field(c: &Chart, comps: &[&str]) -> VectorField {
    VectorField::new(c, comps.iter().map(|s| parse(s, c).unwrap()).collect()).unwrap()
}

/// Sparse field from (coordinate name, coefficient) pairs.
pub fn sparse(c: &Chart, terms: &[(&str, &str)]) -> VectorField {
    let mut comps = vec!["0"; c.dim()];
    for (n, e) in terms {
        comps[c.index_of(n).unwrap()] = e;
    }
    field(c, &comps)
}

pub const EX51_X1: [&str; 21] = [
    "exp(-x1)",
    "x4-x8-exp(x1)",
    "x5-x21-x20+x4-x8-exp(x1)",
    "x9+2*x21+2*x20-4*x4+4*x8+3*exp(x1)",
    "0",
    "2-2*x12+x7",
    "x8+exp(x1)",
    "x9+2*x21+2*x20-4*x4+4*x8+3*exp(x1)-1",
    "1",
    "1-x13-x14-x12",
    "1/2*(x13+x14)+x4-x8-exp(x1)",
    "1/2*(x13-x14)",
    "x15-x16",
    "x15+x16",
    "x17",
    "x18-2*x2",
    "x19-x8-exp(x1)",
    "x20",
    "3*x21+3*x20-6*x4+6*x8+5*exp(x1)+x9",
    "0",
    "0",
];

pub fn example51() -> Distribution {
    let c = chart_x(21);
    let gens = vec![
        field(&c, &EX51_X1),
        sparse(&c, &[("x4", "1"), ("x20", "2")]),
        sparse(&c, &[("x5", "1")]),
        sparse(&c, &[("x9", "1")]),
        sparse(&c, &[("x20", "1"), ("x21", "-1")]),
        sparse(&c, &[("x5", "1"), ("x9", "-2"), ("x21", "1")]),
    ];
    Distribution::new(&c, gens)
}

pub fn car() -> Distribution {
    let c = Chart::with_params(&["t", "x", "y", "theta", "phi", "u1", "u2"], &["L"]).unwrap();
    let x = field(&c, &["1", "u1*cos(theta)", "u1*sin(theta)", "u1/L*tan(phi)", "u2", "0", "0"]);
    Distribution::new(&c, vec![x, VectorField::basis(&c, 5), VectorField::basis(&c, 6)])
}

/// Example 5.1 with `x17^2` added to the ∂x12 coefficient of X1; only the
/// level-3 intersection rank changes.
pub fn example51_mutated() -> Distribution {
    let c = chart_x(21);
    let mut comps = EX51_X1;
    comps[11] = "1/2*(x13-x14)+x17^2";
    let mut gens = example51().generators();
    gens[0] = field(&c, &comps);
    Distribution::new(&c, gens)
}
