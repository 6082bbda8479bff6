//! Linear algebra over the field of expressions.

pub mod qmat;

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::expr::{Expr, Poly, Symbol, Q};
use crate::sampler::{Point, Sampler};
use crate::{Error, Result};

/// Dense row-major matrix of expressions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExprMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Expr>,
}

impl ExprMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExprMatrix { rows, cols, data: alloc::vec![Expr::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Expr::one());
        }
        m
    }

    /// Build from rows; `cols` fixes the width when `rows` is empty.
    pub fn from_rows(cols: usize, rows: &[Vec<Expr>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix");
            data.extend(r.iter().cloned());
        }
        ExprMatrix { rows: rows.len(), cols, data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Expr {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, e: Expr) {
        self.data[i * self.cols + j] = e;
    }

    pub fn row(&self, i: usize) -> &[Expr] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Expr]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn to_rows(&self) -> Vec<Vec<Expr>> {
        self.rows().map(|r| r.to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Expr]) -> Vec<Expr> {
        self.rows().map(|r| dot(r, v)).collect()
    }

    pub fn mul(&self, o: &ExprMatrix) -> ExprMatrix {
        assert_eq!(self.cols, o.rows);
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut s = Expr::zero();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    s = s.add(&a.mul(o.get(k, j)));
                }
                out.set(i, j, s);
            }
        }
        out
    }

    pub fn free_symbols(&self) -> Vec<Symbol> {
        let mut v: Vec<Symbol> = self.data.iter().flat_map(|e| e.free_symbols()).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn map(&self, f: impl Fn(&Expr) -> Expr) -> ExprMatrix {
        ExprMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn eval(&self, point: &BTreeMap<Symbol, f64>) -> Option<Vec<Vec<f64>>> {
        let env = |s: &Symbol| point.get(s).copied();
        let mut out = Vec::with_capacity(self.rows);
        for r in self.rows() {
            let mut row = Vec::with_capacity(self.cols);
            for e in r {
                let v = e.eval(&env).ok()?;
                if !v.is_finite() {
                    return None;
                }
                row.push(v);
            }
            out.push(row);
        }
        Some(out)
    }
}

pub fn dot(a: &[Expr], b: &[Expr]) -> Expr {
    let mut s = Expr::zero();
    for (x, y) in a.iter().zip(b) {
        if x.is_zero() || y.is_zero() {
            continue;
        }
        s = s.add(&x.mul(y));
    }
    s
}

/// Incrementally built row echelon form. Each stored row has a 1 in its
/// pivot column and zeros in the pivot columns of earlier rows.
#[derive(Clone, Debug)]
pub struct RowEchelon {
    ncols: usize,
    rows: Vec<Vec<Expr>>,
    nz: Vec<Vec<usize>>,
    pivots: Vec<usize>,
    raw_pivots: Vec<Expr>,
    sources: Vec<usize>,
}

impl RowEchelon {
    pub fn new(ncols: usize) -> Self {
        RowEchelon { ncols, rows: Vec::new(), nz: Vec::new(), pivots: Vec::new(), raw_pivots: Vec::new(), sources: Vec::new() }
    }

    pub fn from_rows<'a>(ncols: usize, rows: impl IntoIterator<Item = &'a [Expr]>) -> Self {
        let mut e = Self::new(ncols);
        for (i, r) in rows.into_iter().enumerate() {
            e.insert(r, i);
        }
        e
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Caller-supplied source index of each stored row.
    pub fn sources(&self) -> &[usize] {
        &self.sources
    }

    pub fn rows(&self) -> &[Vec<Expr>] {
        &self.rows
    }

    pub fn reduce(&self, v: &[Expr]) -> Vec<Expr> {
        assert_eq!(v.len(), self.ncols, "vector length mismatch");
        let mut v = v.to_vec();
        for (k, r) in self.rows.iter().enumerate() {
            let f = v[self.pivots[k]].clone();
            if f.is_zero() {
                continue;
            }
            for &j in &self.nz[k] {
                v[j] = v[j].sub(&f.mul(&r[j]));
            }
        }
        v
    }

    pub fn contains(&self, v: &[Expr]) -> bool {
        if self.rows.len() == self.ncols {
            return true;
        }
        self.reduce(v).iter().all(|e| e.is_zero())
    }

    /// Insert a row; returns whether it was independent.
    pub fn insert(&mut self, v: &[Expr], source: usize) -> bool {
        let r = self.reduce(v);
        let Some(p) = choose_pivot(&r) else { return false };
        let raw = r[p].clone();
        let inv = raw.inv().expect("nonzero pivot");
        let row: Vec<Expr> = r.iter().map(|e| if e.is_zero() { Expr::zero() } else { e.mul(&inv) }).collect();
        let nz = (0..self.ncols).filter(|&j| !row[j].is_zero()).collect();
        self.rows.push(row);
        self.nz.push(nz);
        self.pivots.push(p);
        self.raw_pivots.push(raw);
        self.sources.push(source);
        true
    }

    /// Fully reduced rows, ordered by pivot column.
    pub fn to_rref(&self) -> Vec<Vec<Expr>> {
        let mut rows = self.rows.clone();
        for j in (0..rows.len()).rev() {
            let c = self.pivots[j];
            let (head, tail) = rows.split_at_mut(j);
            let rj = &tail[0];
            for ri in head.iter_mut() {
                let f = ri[c].clone();
                if f.is_zero() {
                    continue;
                }
                for k in 0..self.ncols {
                    if !rj[k].is_zero() {
                        ri[k] = ri[k].sub(&f.mul(&rj[k]));
                    }
                }
            }
        }
        let mut idx: Vec<usize> = (0..rows.len()).collect();
        idx.sort_by_key(|&i| self.pivots[i]);
        idx.into_iter().map(|i| rows[i].clone()).collect()
    }

    /// Pivot columns in increasing order.
    pub fn sorted_pivots(&self) -> Vec<usize> {
        let mut p = self.pivots.clone();
        p.sort();
        p
    }

    /// Minor on (sources, sorted pivot columns), nonzero by construction.
    pub fn certificate(&self) -> Expr {
        let mut d = Expr::one();
        for p in &self.raw_pivots {
            d = d.mul(p);
        }
        if permutation_sign(&self.pivots) < 0 {
            d.neg()
        } else {
            d
        }
    }

    /// Right kernel basis: vectors `v` with `row · v = 0` for every row.
    pub fn kernel(&self) -> Vec<Vec<Expr>> {
        let rref = self.to_rref();
        let piv = self.sorted_pivots();
        let mut out = Vec::new();
        for f in (0..self.ncols).filter(|c| piv.binary_search(c).is_err()) {
            let mut v = alloc::vec![Expr::zero(); self.ncols];
            v[f] = Expr::one();
            for (k, &c) in piv.iter().enumerate() {
                v[c] = rref[k][f].neg();
            }
            out.push(v);
        }
        out
    }
}

fn choose_pivot(r: &[Expr]) -> Option<usize> {
    let mut best: Option<(usize, (bool, usize))> = None;
    for (j, e) in r.iter().enumerate() {
        if e.is_zero() {
            continue;
        }
        let key = (!e.is_constant(), e.size());
        if best.as_ref().map(|(_, k)| key < *k).unwrap_or(true) {
            best = Some((j, key));
        }
    }
    best.map(|b| b.0)
}

fn permutation_sign(p: &[usize]) -> i32 {
    let mut s = 1;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                s = -s;
            }
        }
    }
    s
}

#[derive(Clone, Debug)]
pub struct GenericRankResult {
    pub rank: usize,
    pub pivot_rows: Vec<usize>,
    pub pivot_cols: Vec<usize>,
    /// The minor on `pivot_rows` x `pivot_cols`; never identically zero.
    pub certificate: Expr,
    pub sample_points: Vec<Point>,
}

/// Numerical rank of a float matrix with row scaling.
pub fn numeric_rank(m: &[Vec<f64>]) -> usize {
    let mut a: Vec<Vec<f64>> = m
        .iter()
        .map(|r| {
            let s = r.iter().fold(0.0f64, |acc, x| acc.max(libm::fabs(*x)));
            if s > 0.0 {
                r.iter().map(|x| x / s).collect()
            } else {
                r.clone()
            }
        })
        .collect();
    let rows = a.len();
    if rows == 0 {
        return 0;
    }
    let cols = a[0].len();
    let tol = 1e-9 * (rows.max(cols) as f64);
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let (p, best) = (rank..rows).map(|i| (i, libm::fabs(a[i][c]))).fold((rank, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best <= tol {
            continue;
        }
        a.swap(rank, p);
        for i in rank + 1..rows {
            let f = a[i][c] / a[rank][c];
            if f != 0.0 {
                for j in c..cols {
                    a[i][j] -= f * a[rank][j];
                }
            }
        }
        rank += 1;
    }
    rank
}

fn point_f64(p: &BTreeMap<Symbol, Q>) -> BTreeMap<Symbol, f64> {
    p.iter().map(|(s, q)| (s.clone(), crate::expr::q_to_f64(q))).collect()
}

/// Generic rank, decided by exact elimination and cross-checked numerically:
/// some sample point must reproduce the symbolic rank.
pub fn generic_rank(m: &ExprMatrix, sampler: &mut Sampler) -> Result<GenericRankResult> {
    let ech = RowEchelon::from_rows(m.ncols(), m.rows());
    let rank = ech.rank();
    let mut pivot_rows = ech.sources().to_vec();
    pivot_rows.sort();
    let result = GenericRankResult {
        rank,
        pivot_rows,
        pivot_cols: ech.sorted_pivots(),
        certificate: ech.certificate(),
        sample_points: Vec::new(),
    };
    confirm_numeric(m, result, sampler)
}

fn confirm_numeric(m: &ExprMatrix, mut result: GenericRankResult, sampler: &mut Sampler) -> Result<GenericRankResult> {
    let syms = m.free_symbols();
    for _ in 0..sampler.max_attempts {
        for _ in 0..3 {
            let pt = sampler.point(&syms);
            let Some(vals) = m.eval(&point_f64(&pt)) else { continue };
            let r = numeric_rank(&vals);
            result.sample_points.push(pt.into_iter().collect());
            if r == result.rank {
                return Ok(result);
            }
        }
    }
    Err(Error::RankConfirmation { attempts: sampler.max_attempts })
}

/// Right kernel of `m`, each vector checked to be annihilated symbolically.
pub fn nullspace(m: &ExprMatrix) -> Result<Vec<Vec<Expr>>> {
    let ech = RowEchelon::from_rows(m.ncols(), m.rows());
    let ker = ech.kernel();
    for v in &ker {
        if m.mul_vec(v).iter().any(|e| !e.is_zero()) {
            return Err(Error::RankConfirmation { attempts: 1 });
        }
    }
    Ok(ker)
}

pub fn in_rowspace(m: &ExprMatrix, v: &[Expr]) -> bool {
    RowEchelon::from_rows(m.ncols(), m.rows()).contains(v)
}

/// Basis of the constant vectors lying in the row space of `m`.
///
/// A constant `c` is in the row space iff it annihilates the right kernel.
/// Clearing denominators and expanding each kernel vector in independent
/// monomials turns that into a linear system over Q.
pub fn constant_combination_in_rowspace(m: &ExprMatrix) -> Result<Vec<Vec<Q>>> {
    let n = m.ncols();
    let ech = RowEchelon::from_rows(n, m.rows());
    let mut eqs: Vec<Vec<Q>> = Vec::new();
    for k in ech.kernel() {
        let mut l = Poly::one();
        for e in &k {
            let d = e.common_denominator();
            if !d.is_one() {
                l = crate::expr::lcm(&l, &d);
            }
        }
        let le = Expr::from_poly(l);
        let mut rows: BTreeMap<_, Vec<Q>> = BTreeMap::new();
        for (i, e) in k.iter().enumerate() {
            let cm = e.mul(&le).coefficient_map().ok_or(Error::RankConfirmation { attempts: 1 })?;
            for (key, q) in cm {
                rows.entry(key).or_insert_with(|| alloc::vec![Q::zero(); n])[i] = q;
            }
        }
        eqs.extend(rows.into_values());
    }
    let mut basis = qmat::nullspace(&eqs, n);
    if !basis.is_empty() {
        qmat::rref(&mut basis);
    }
    let basis: Vec<Vec<Q>> = basis.iter().map(|v| qmat::primitive(v)).collect();
    for c in &basis {
        let v: Vec<Expr> = c.iter().map(|q| Expr::rational(q.clone())).collect();
        if !ech.contains(&v) {
            return Err(Error::RankConfirmation { attempts: 1 });
        }
    }
    Ok(basis)
}

#[cfg(test)]
mod tests;
