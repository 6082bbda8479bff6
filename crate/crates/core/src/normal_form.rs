//! The partial prolongation C(τ) in contact coordinates, and disguised copies
//! of it for round-trip testing.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::classify::TypeVector;
use crate::expr::{q_int, Chart, Expr, Symbol};
use crate::geometry::{Distribution, VectorField};
use crate::sampler::Sampler;

/// One tower of jet coordinates `z^{l,j}_0, …, z^{l,j}_j`.
#[derive(Clone, Debug)]
pub struct Tower {
    pub order: usize,
    pub index: usize,
    pub coords: Vec<Symbol>,
}

#[derive(Clone, Debug)]
pub struct NormalForm {
    pub tau: TypeVector,
    pub x: Symbol,
    pub towers: Vec<Tower>,
    pub distribution: Distribution,
}

/// `{∂x + Σ z_{s+1} ∂z_s, ∂z_j}` with coordinates named `x` and `z{l}_{j}_{s}`.
pub fn contact_system(tau: &TypeVector) -> NormalForm {
    let mut names: Vec<String> = alloc::vec!["x".into()];
    let mut towers = Vec::new();
    for j in 1..=tau.k() {
        for l in 1..=tau.rho(j) {
            let coords: Vec<String> = (0..=j).map(|s| format!("z{l}_{j}_{s}")).collect();
            towers.push(Tower { order: j, index: l, coords: coords.iter().map(|c| Symbol::new(c)).collect() });
            names.extend(coords);
        }
    }
    let chart = Chart::new(&names).expect("distinct names");
    let n = chart.dim();
    let mut total = alloc::vec![Expr::zero(); n];
    total[0] = Expr::one();
    let mut gens = Vec::new();
    for t in &towers {
        let base = chart.index_of(t.coords[0].name()).unwrap();
        for s in 0..t.order {
            total[base + s] = Expr::sym(&t.coords[s + 1]);
        }
        gens.push(VectorField::basis(&chart, base + t.order));
    }
    gens.insert(0, VectorField::new(&chart, total).unwrap());
    NormalForm { tau: tau.clone(), x: Symbol::new("x"), towers, distribution: Distribution::new(&chart, gens) }
}

/// A random type with `dim C(τ) ≤ max_dim` (needs `max_dim ≥ 3`).
pub fn random_type(s: &mut Sampler, max_dim: usize) -> TypeVector {
    loop {
        let k = 1 + s.below(4) as usize;
        let mut rho = alloc::vec![0usize; k];
        for r in rho.iter_mut() {
            *r = s.below(3) as usize;
        }
        rho[k - 1] = 1 + s.below(2) as usize;
        let t = TypeVector::new(rho).unwrap();
        if t.dim() <= max_dim {
            return t;
        }
    }
}

/// Integer matrix with determinant one and its inverse.
fn unimodular(s: &mut Sampler, n: usize) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let mut a: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
    let mut inv = a.clone();
    for _ in 0..2 * n {
        let i = s.below(n as u64) as usize;
        let j = s.below(n as u64) as usize;
        if i == j {
            continue;
        }
        let c = s.small_int(1);
        if c == 0 {
            continue;
        }
        // row_i += c row_j on a; column_j -= c column_i on the inverse
        for k in 0..n {
            a[i][k] += c * a[j][k];
        }
        for r in inv.iter_mut() {
            r[j] -= c * r[i];
        }
    }
    (a, inv)
}

#[derive(Clone, Debug)]
pub struct Disguised {
    pub distribution: Distribution,
    /// Old coordinate i equals Σ_j b[i][j] y_j + c[i].
    pub b: Vec<Vec<i64>>,
    pub c: Vec<i64>,
}

/// Random affine change of coordinates to `y1..yn` followed by mixing the
/// generators with a random invertible matrix of functions.
pub fn disguise(d: &Distribution, s: &mut Sampler) -> Disguised {
    let old = d.chart();
    let n = old.dim();
    let names: Vec<String> = (1..=n).map(|i| format!("y{i}")).collect();
    let params: Vec<&str> = old.params().iter().map(|p| p.name()).collect();
    let chart = Chart::with_params(&names, &params).expect("fresh names");
    let (b, binv) = unimodular(s, n);
    let c: Vec<i64> = (0..n).map(|_| s.small_int(3)).collect();
    let ys: Vec<Expr> = chart.coords().iter().map(Expr::sym).collect();
    let map: BTreeMap<Symbol, Expr> = (0..n)
        .map(|i| {
            let mut e = Expr::int(c[i]);
            for j in 0..n {
                if b[i][j] != 0 {
                    e = e.add(&ys[j].scale(&q_int(b[i][j])));
                }
            }
            (old.coord(i).clone(), e)
        })
        .collect();
    let moved: Vec<VectorField> = d
        .generators()
        .iter()
        .map(|g| {
            let v: Vec<Expr> = g.components().iter().map(|e| e.subs(&map)).collect();
            let w = (0..n)
                .map(|a| {
                    let mut e = Expr::zero();
                    for (i, vi) in v.iter().enumerate() {
                        if binv[a][i] != 0 && !vi.is_zero() {
                            e = e.add(&vi.scale(&q_int(binv[a][i])));
                        }
                    }
                    e
                })
                .collect();
            VectorField::new(&chart, w).unwrap()
        })
        .collect();
    // Unit lower-triangular mixing with affine entries, then a reversal.
    let m = moved.len();
    let mut mixed: Vec<VectorField> = Vec::with_capacity(m);
    for i in 0..m {
        let mut g = moved[i].scale(&Expr::int(1 + s.below(2) as i64));
        for h in moved.iter().take(i) {
            let k = s.below(n as u64) as usize;
            let coef = Expr::int(s.small_int(1)).add(&ys[k].scale(&q_int(s.small_int(1))));
            if !coef.is_zero() {
                g = g.add(&h.scale(&coef));
            }
        }
        mixed.push(g);
    }
    mixed.reverse();
    Disguised { distribution: Distribution::new(&chart, mixed), b, c }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::refined_derived_type;

    #[test]
    fn normal_form_shape() {
        let t = TypeVector::new(alloc::vec![1, 0, 1]).unwrap();
        let nf = contact_system(&t);
        assert_eq!(nf.distribution.chart().dim(), t.dim());
        assert_eq!(nf.distribution.rank(), t.rank());
        let r = refined_derived_type(&nf.distribution).unwrap();
        assert_eq!(r.record.to_lists(), [alloc::vec![3, 0], alloc::vec![5, 2, 3], alloc::vec![6, 4, 4], alloc::vec![7, 7]]);
    }

    #[test]
    fn unimodular_inverse() {
        let mut s = Sampler::new(3);
        let (a, b) = unimodular(&mut s, 5);
        for i in 0..5 {
            for j in 0..5 {
                let p: i64 = (0..5).map(|k| a[i][k] * b[k][j]).sum();
                assert_eq!(p, (i == j) as i64);
            }
        }
    }

    #[test]
    fn disguise_keeps_record() {
        let mut s = Sampler::new(11);
        let t = TypeVector::new(alloc::vec![1, 1]).unwrap();
        let nf = contact_system(&t);
        let d = disguise(&nf.distribution, &mut s);
        let a = refined_derived_type(&nf.distribution).unwrap().record;
        let b = refined_derived_type(&d.distribution).unwrap().record;
        assert_eq!(a, b);
    }
}
