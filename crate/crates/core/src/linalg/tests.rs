use alloc::vec::Vec;

use super::*;
use crate::expr::{parse_free, q_int};

fn mat(cols: usize, rows: &[&[&str]]) -> ExprMatrix {
    let r: Vec<Vec<Expr>> = rows.iter().map(|r| r.iter().map(|s| parse_free(s).unwrap()).collect()).collect();
    ExprMatrix::from_rows(cols, &r)
}

#[test]
fn rank_examples() {
    let mut s = Sampler::new(7);
    assert_eq!(generic_rank(&ExprMatrix::identity(3), &mut s).unwrap().rank, 3);
    let r = generic_rank(&mat(2, &[&["x", "x*y"], &["1", "y"]]), &mut s).unwrap();
    assert_eq!(r.rank, 1);
    let r = generic_rank(&mat(3, &[&["-a2", "a1", "0"], &["-a3", "0", "a1"]]), &mut s).unwrap();
    assert_eq!(r.rank, 2);
    assert!(!r.certificate.is_zero());
    assert!(!r.sample_points.is_empty());
}

#[test]
fn certificate_is_the_minor() {
    let mut s = Sampler::new(1);
    let m = mat(2, &[&["x", "y"], &["1", "x"]]);
    let r = generic_rank(&m, &mut s).unwrap();
    assert_eq!(r.certificate, parse_free("x^2 - y").unwrap());
}

#[test]
fn nullspace_examples() {
    assert!(nullspace(&ExprMatrix::identity(3)).unwrap().is_empty());
    let ns = nullspace(&mat(3, &[&["x", "y", "0"]])).unwrap();
    assert_eq!(ns.len(), 2);
    let z = nullspace(&ExprMatrix::zeros(2, 2)).unwrap();
    assert_eq!(z.len(), 2);
}

#[test]
fn rowspace_membership() {
    let m = mat(3, &[&["1", "x", "0"], &["0", "y", "1"]]);
    assert!(in_rowspace(&m, m.row(0)));
    assert!(in_rowspace(&m, &[parse_free("x").unwrap(), parse_free("x^2 + y").unwrap(), Expr::one()]));
    assert!(!in_rowspace(&m, &[Expr::zero(), Expr::one(), Expr::zero()]));
}

#[test]
fn constant_combinations() {
    // d(x1), d(x2) - d(x11), d(x10) on an 11-dimensional chart, mixed by a function.
    let mut rows = alloc::vec![alloc::vec![Expr::zero(); 11]; 3];
    rows[0][0] = Expr::one();
    rows[1][1] = Expr::one();
    rows[1][10] = Expr::int(-1);
    rows[2][9] = Expr::one();
    let f = parse_free("x3 + exp(x1)").unwrap();
    let mixed: Vec<Vec<Expr>> = alloc::vec![
        rows[0].iter().zip(&rows[1]).map(|(a, b)| a.mul(&f).add(b)).collect(),
        rows[1].clone(),
        rows[2].iter().zip(&rows[0]).map(|(a, b)| a.add(b)).collect(),
    ];
    let basis = constant_combination_in_rowspace(&ExprMatrix::from_rows(11, &mixed)).unwrap();
    assert_eq!(basis.len(), 3);
    let mut expect = alloc::vec![alloc::vec![q_int(0); 11]; 3];
    expect[0][0] = q_int(1);
    expect[1][1] = q_int(-1);
    expect[1][10] = q_int(1);
    expect[2][9] = q_int(1);
    assert_eq!(basis, expect);

    // d(xy) is not constant-coefficient.
    assert!(constant_combination_in_rowspace(&mat(2, &[&["y", "x"]])).unwrap().is_empty());
    assert_eq!(constant_combination_in_rowspace(&ExprMatrix::identity(3)).unwrap().len(), 3);
}

#[test]
fn numeric_rank_matches_exact_for_constant_matrices() {
    let mut s = Sampler::new(99);
    for _ in 0..50 {
        let (r, c) = (1 + s.below(5) as usize, 1 + s.below(5) as usize);
        let q: Vec<Vec<Q>> = (0..r).map(|_| (0..c).map(|_| q_int(s.small_int(2))).collect()).collect();
        let e: Vec<Vec<Expr>> = q.iter().map(|row| row.iter().map(|x| Expr::rational(x.clone())).collect()).collect();
        let g = generic_rank(&ExprMatrix::from_rows(c, &e), &mut s).unwrap();
        assert_eq!(g.rank, qmat::rank(&q));
    }
}
