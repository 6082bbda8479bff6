//! Structure tensor of a quotient by the Cauchy bundle, polar matrices and
//! the singular sub-bundle of a Weber structure.

use alloc::string::String;
use alloc::vec::Vec;

use crate::expr::{fresh_name, Expr, Symbol};
use crate::geometry::{Distribution, VectorField};
use crate::linalg::{ExprMatrix, RowEchelon};
use crate::{Error, Result};

/// Representatives for `V̂ = V / Char V` and for `TM / V`.
#[derive(Clone, Debug)]
pub struct QuotientFrame {
    pub ambient: Distribution,
    pub cauchy: Distribution,
    pub complement: Vec<VectorField>,
    pub transversal: Vec<VectorField>,
}

impl QuotientFrame {
    /// Greedy choice: complement from the ambient basis modulo Char,
    /// transversals from coordinate fields of lowest index.
    pub fn new(ambient: &Distribution, cauchy: &Distribution) -> Result<Self> {
        let chart = ambient.chart();
        let amb = ambient.simplified();
        let mut ech = cauchy.echelon().clone();
        let mut complement = Vec::new();
        for g in amb.generators() {
            if ech.insert(g.components(), 0) {
                complement.push(g);
            }
        }
        let mut ech = ambient.echelon().clone();
        let mut transversal = Vec::new();
        for i in 0..chart.dim() {
            let v = VectorField::basis(chart, i);
            if ech.insert(v.components(), 0) {
                transversal.push(v);
            }
        }
        Self::with_frame(ambient, cauchy, complement, transversal)
    }

    /// Use caller-supplied representatives (validated).
    pub fn with_frame(
        ambient: &Distribution,
        cauchy: &Distribution,
        complement: Vec<VectorField>,
        transversal: Vec<VectorField>,
    ) -> Result<Self> {
        let chart = ambient.chart();
        if !ambient.contains_all(cauchy) {
            return Err(Error::InvalidInput("Cauchy bundle is not inside the ambient bundle".into()));
        }
        let mut rows: Vec<Vec<Expr>> = cauchy.rows().to_vec();
        rows.extend(complement.iter().map(|v| v.components().to_vec()));
        let span = Distribution::from_rows(chart, rows.clone());
        if span.rank() != ambient.rank() || !ambient.contains_all(&span) || complement.len() + cauchy.rank() != ambient.rank() {
            return Err(Error::InvalidInput("complement does not represent the quotient".into()));
        }
        rows.extend(transversal.iter().map(|v| v.components().to_vec()));
        let full = Distribution::from_rows(chart, rows);
        if full.rank() != chart.dim() || ambient.rank() + transversal.len() != chart.dim() {
            return Err(Error::InvalidInput("transversals do not complete a frame".into()));
        }
        Ok(QuotientFrame { ambient: ambient.clone(), cauchy: cauchy.clone(), complement, transversal })
    }

    pub fn r(&self) -> usize {
        self.complement.len()
    }

    pub fn s(&self) -> usize {
        self.transversal.len()
    }
}

/// `c[k][i][j]`: coefficient of the k-th transversal in `[X_i, X_j]` modulo
/// the ambient bundle. Skew in (i, j).
#[derive(Clone, Debug)]
pub struct StructureTensor {
    pub c: Vec<Vec<Vec<Expr>>>,
}

impl StructureTensor {
    pub fn is_zero(&self) -> bool {
        self.c.iter().flatten().flatten().all(|e| e.is_zero())
    }

    /// `δ̂^k(u, v)` for coefficient vectors in the complement frame.
    pub fn eval(&self, k: usize, u: &[Expr], v: &[Expr]) -> Expr {
        let mut s = Expr::zero();
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if vj.is_zero() || self.c[k][i][j].is_zero() {
                    continue;
                }
                s = s.add(&ui.mul(vj).mul(&self.c[k][i][j]));
            }
        }
        s
    }
}

pub fn structure_tensor(q: &QuotientFrame) -> Result<StructureTensor> {
    let theta = q.ambient.annihilator().generators();
    let s = q.s();
    if theta.len() != s {
        return Err(Error::DimensionMismatch { what: "quotient transversals".into(), expected: theta.len(), found: s });
    }
    // T[a][k] = θ^a(Z_k); solve T c = θ([X_i, X_j]).
    let t: Vec<Vec<Expr>> = theta.iter().map(|w| q.transversal.iter().map(|z| w.apply(z)).collect()).collect();
    let tinv = invert(&t)?;
    let r = q.r();
    let mut c = alloc::vec![alloc::vec![alloc::vec![Expr::zero(); r]; r]; s];
    for i in 0..r {
        for j in i + 1..r {
            let b = q.complement[i].bracket(&q.complement[j]);
            let w: Vec<Expr> = theta.iter().map(|th| th.apply(&b)).collect();
            for k in 0..s {
                let v = crate::linalg::dot(&tinv[k], &w);
                c[k][j][i] = v.neg();
                c[k][i][j] = v;
            }
        }
    }
    Ok(StructureTensor { c })
}

/// Inverse of a square expression matrix by Gauss-Jordan.
pub fn invert(m: &[Vec<Expr>]) -> Result<Vec<Vec<Expr>>> {
    let n = m.len();
    let mut a: Vec<Vec<Expr>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Expr::one() } else { Expr::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n)
            .filter(|&i| !a[i][c].is_zero())
            .min_by_key(|&i| (!a[i][c].is_constant(), a[i][c].size()))
            .ok_or_else(|| Error::InvalidInput("singular matrix".into()))?;
        a.swap(c, p);
        let inv = a[c][c].inv().unwrap();
        a[c] = a[c].iter().map(|e| e.mul(&inv)).collect();
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let pivot_row = a[c].clone();
                for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x = x.sub(&f.mul(y));
                    }
                }
            }
        }
    }
    Ok(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[derive(Clone, Debug)]
pub struct PolarMatrix {
    pub matrix: ExprMatrix,
    /// Projective coordinates a1..ar of a line (renamed on clashes).
    pub symbols: Vec<Symbol>,
    pub generic_rank: usize,
}

pub fn polar_matrix(q: &QuotientFrame, t: &StructureTensor) -> PolarMatrix {
    let taken: Vec<Symbol> = q.ambient.chart().symbols().cloned().collect();
    let symbols: Vec<Symbol> = (1..=q.r()).map(|i| Symbol::new(&fresh_name(&alloc::format!("a{i}"), &taken))).collect();
    let a: Vec<Expr> = symbols.iter().map(Expr::sym).collect();
    let matrix = sigma(t, &a, q.r(), q.s());
    let generic_rank = RowEchelon::from_rows(q.r(), matrix.rows()).rank();
    PolarMatrix { matrix, symbols, generic_rank }
}

/// σ_{kβ} = Σ_α e^α c^k_{αβ}
fn sigma(t: &StructureTensor, e: &[Expr], r: usize, s: usize) -> ExprMatrix {
    let mut m = ExprMatrix::zeros(s, r);
    for k in 0..s {
        for b in 0..r {
            let mut v = Expr::zero();
            for (a, ea) in e.iter().enumerate() {
                if !ea.is_zero() && !t.c[k][a][b].is_zero() {
                    v = v.add(&ea.mul(&t.c[k][a][b]));
                }
            }
            m.set(k, b, v);
        }
    }
    m
}

/// Degree of a line: generic rank of its polar matrix.
pub fn degree(t: &StructureTensor, line: &[Expr]) -> Result<usize> {
    if line.iter().all(|e| e.is_zero()) {
        return Err(Error::InvalidInput("zero line has no degree".into()));
    }
    let s = t.c.len();
    let r = line.len();
    let m = sigma(t, line, r, s);
    Ok(RowEchelon::from_rows(r, m.rows()).rank())
}

#[derive(Clone, Debug)]
pub struct SingularSubbundleResult {
    pub found: bool,
    /// Basis of B̂ in complement-frame coefficients.
    pub basis: Vec<Vec<Expr>>,
    /// The same basis lifted to vector fields.
    pub lifted: Vec<VectorField>,
    /// Degree of each basis direction (all 1 when found).
    pub basis_degrees: Vec<usize>,
    pub delta_vanishes: bool,
    /// Degree of a direction outside B̂; equals the generic degree when found.
    pub outside_degree: Option<usize>,
    pub generic_degree: usize,
    pub diagnostics: Vec<String>,
}

/// Find B̂ with Sing(V̂) = ℙB̂.
///
/// Candidate: B̂ = Σ_k ker δ̂^k. When rank B̂ = q, δ̂ vanishes on B̂ and the
/// q×q matrix M_{kp} = δ̂^k(e0, b_p) is invertible for a direction e0
/// completing B̂ (so r = q + 1), every line off ℙB̂ has full degree q while
/// every line of ℙB̂ has degree 1. That identifies the singular variety.
pub fn singular_subbundle(q: &QuotientFrame, t: &StructureTensor, expected_rank: usize) -> Result<SingularSubbundleResult> {
    if expected_rank < 2 {
        return Err(Error::Precondition("singular sub-bundle needs expected rank at least 2".into()));
    }
    let r = q.r();
    let s = q.s();
    let pm = polar_matrix(q, t);
    let mut res = SingularSubbundleResult {
        found: false,
        basis: Vec::new(),
        lifted: Vec::new(),
        basis_degrees: Vec::new(),
        delta_vanishes: false,
        outside_degree: None,
        generic_degree: pm.generic_rank,
        diagnostics: Vec::new(),
    };
    let mut span = RowEchelon::new(r);
    for k in 0..s {
        let ker = RowEchelon::from_rows(r, t.c[k].iter().map(|v| v.as_slice())).kernel();
        for v in ker {
            span.insert(&v, 0);
        }
    }
    let basis: Vec<Vec<Expr>> = span.to_rref().into_iter().map(crate::geometry::clear_row).collect();
    res.basis = basis.clone();
    if basis.len() != expected_rank {
        res.diagnostics.push(alloc::format!("kernel sum has rank {} but {} was expected", basis.len(), expected_rank));
        return Ok(res);
    }
    res.delta_vanishes = (0..s).all(|k| {
        (0..basis.len()).all(|p| (p + 1..basis.len()).all(|pp| t.eval(k, &basis[p], &basis[pp]).is_zero()))
    });
    for b in &basis {
        res.basis_degrees.push(degree(t, b)?);
    }
    if !res.delta_vanishes {
        res.diagnostics.push("structure tensor does not vanish on the candidate".into());
    }
    if res.basis_degrees.iter().any(|&d| d != 1) {
        res.diagnostics.push("a candidate direction does not have degree one".into());
    }
    if r != expected_rank + 1 || s != expected_rank {
        res.diagnostics.push(alloc::format!("quotient has rank {r} with {s} transversals; expected {} and {}", expected_rank + 1, expected_rank));
    } else {
        let e0 = (0..r)
            .map(|i| {
                let mut v = alloc::vec![Expr::zero(); r];
                v[i] = Expr::one();
                v
            })
            .find(|v| !span.contains(v))
            .expect("complement direction exists");
        let m: Vec<Vec<Expr>> = (0..s).map(|k| basis.iter().map(|b| t.eval(k, &e0, b)).collect()).collect();
        let mrank = RowEchelon::from_rows(expected_rank, m.iter().map(|v| v.as_slice())).rank();
        res.outside_degree = Some(degree(t, &e0)?);
        if mrank != expected_rank {
            res.diagnostics.push("lines off the candidate do not all have generic degree".into());
        }
        res.found = res.diagnostics.is_empty() && res.outside_degree == Some(res.generic_degree);
    }
    let chart = q.ambient.chart();
    res.lifted = basis
        .iter()
        .map(|b| {
            let mut v = VectorField::zero(chart);
            for (a, x) in b.iter().zip(&q.complement) {
                if !a.is_zero() {
                    v = v.add(&x.scale(a));
                }
            }
            v
        })
        .collect();
    Ok(res)
}

/// Char ⊕ lift(B̂).
pub fn resolvent_bundle(q: &QuotientFrame, b: &SingularSubbundleResult) -> Result<Distribution> {
    if !b.found {
        return Err(Error::Precondition("singular sub-bundle was not found".into()));
    }
    let mut gens = q.cauchy.generators();
    gens.extend(b.lifted.iter().cloned());
    Ok(Distribution::new(q.ambient.chart(), gens).simplified())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    #[test]
    fn invert_small() {
        let c = crate::expr::Chart::new(&["x", "y"]).unwrap();
        let m = alloc::vec![
            alloc::vec![parse("x", &c).unwrap(), parse("1", &c).unwrap()],
            alloc::vec![parse("0", &c).unwrap(), parse("y", &c).unwrap()],
        ];
        let i = invert(&m).unwrap();
        assert_eq!(i[0][1], parse("-1/(x*y)", &c).unwrap());
    }
}
