mod common;

use common::*;
use goursat_core::expr::{parse, Expr};
use goursat_core::geometry::{refined_derived_type, Distribution};
use goursat_core::singular::{degree, polar_matrix, resolvent_bundle, singular_subbundle, structure_tensor, QuotientFrame};

fn ex51_frame(explicit: bool) -> QuotientFrame {
    let d = example51();
    let c = d.chart().clone();
    let flag = refined_derived_type(&d).unwrap();
    let amb = &flag.levels[4];
    let ch = &flag.chars[4];
    if !explicit {
        return QuotientFrame::new(amb, ch).unwrap();
    }
    let comp = vec![field(&c, &EX51_X1), sparse(&c, &[("x12", "1")]), sparse(&c, &[("x13", "1"), ("x14", "1")])];
    let tr = vec![sparse(&c, &[("x6", "2"), ("x10", "1")]), sparse(&c, &[("x10", "2"), ("x11", "-1")])];
    QuotientFrame::with_frame(amb, ch, comp, tr).unwrap()
}

#[test]
fn example51_polar_matrix() {
    let q = ex51_frame(true);
    let t = structure_tensor(&q).unwrap();
    let pm = polar_matrix(&q, &t);
    let a = |i: usize| Expr::sym(&pm.symbols[i]);
    let expect = [[a(1).neg(), a(0), Expr::zero()], [a(2).neg(), Expr::zero(), a(0)]];
    for k in 0..2 {
        for b in 0..3 {
            assert_eq!(pm.matrix.get(k, b), &expect[k][b], "entry {k},{b}");
        }
    }
    assert_eq!(pm.generic_rank, 2);
}

#[test]
fn example51_resolvent() {
    for explicit in [true, false] {
        let q = ex51_frame(explicit);
        let t = structure_tensor(&q).unwrap();
        let b = singular_subbundle(&q, &t, 2).unwrap();
        assert!(b.found, "{:?}", b.diagnostics);
        assert_eq!(b.basis_degrees, vec![1, 1]);
        let r = resolvent_bundle(&q, &b).unwrap();
        let c = r.chart().clone();
        let expect = q.cauchy.sum(&Distribution::new(&c, vec![sparse(&c, &[("x12", "1")]), sparse(&c, &[("x13", "1"), ("x14", "1")])]));
        assert!(r.same_span(&expect));
        assert_eq!(r.rank(), 18);
        assert!(r.is_integrable());
    }
}

#[test]
fn degree_of_lines() {
    let q = ex51_frame(true);
    let t = structure_tensor(&q).unwrap();
    let c = q.ambient.chart().clone();
    let e = |s: &str| parse(s, &c).unwrap();
    assert_eq!(degree(&t, &[e("0"), e("1"), e("x3")]).unwrap(), 1);
    assert_eq!(degree(&t, &[e("1"), e("0"), e("0")]).unwrap(), 2);
    assert_eq!(degree(&t, &[e("x2"), e("5"), e("-1")]).unwrap(), 2);
    assert!(degree(&t, &[e("0"), e("0"), e("0")]).is_err());
}

#[test]
fn frame_validation() {
    let d = example51();
    let c = d.chart().clone();
    let flag = refined_derived_type(&d).unwrap();
    let bad = vec![sparse(&c, &[("x12", "1")])];
    assert!(QuotientFrame::with_frame(&flag.levels[4], &flag.chars[4], bad, vec![]).is_err());
}
