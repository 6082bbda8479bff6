use alloc::vec::Vec;
use core::fmt;

use crate::expr::{gcd, lcm, Chart, Expr, Poly};
use crate::linalg::{ExprMatrix, RowEchelon};
use crate::Result;

use super::field::{OneForm, VectorField};

/// Span of a list of component vectors, reduced to an independent subset.
#[derive(Clone, Debug)]
struct Span {
    chart: Chart,
    rows: Vec<Vec<Expr>>,
    ech: RowEchelon,
}

impl Span {
    fn new(chart: &Chart, rows: Vec<Vec<Expr>>) -> Span {
        let mut ech = RowEchelon::new(chart.dim());
        let mut kept = Vec::new();
        for r in rows {
            if ech.insert(&r, kept.len()) {
                kept.push(r);
            }
        }
        Span { chart: chart.clone(), rows: kept, ech }
    }

    fn matrix(&self) -> ExprMatrix {
        ExprMatrix::from_rows(self.chart.dim(), &self.rows)
    }

    fn contains(&self, v: &[Expr]) -> bool {
        self.ech.contains(v)
    }

    fn simplified(&self) -> Span {
        let rows = self.ech.to_rref().into_iter().map(clear_row).collect();
        Span::new(&self.chart, rows)
    }

    /// Right kernel of the row matrix.
    fn kernel(&self) -> Vec<Vec<Expr>> {
        self.ech.kernel().into_iter().map(clear_row).collect()
    }
}

/// Scale a row to polynomial entries without common factor, with a
/// positive leading coefficient in its first nonzero entry.
pub fn clear_row(row: Vec<Expr>) -> Vec<Expr> {
    let mut l = Poly::one();
    for e in &row {
        let d = e.common_denominator();
        if !d.is_one() {
            l = lcm(&l, &d);
        }
    }
    let mut row: Vec<Expr> = if l.is_one() {
        row
    } else {
        let le = Expr::from_poly(l);
        row.iter().map(|e| e.mul(&le)).collect()
    };
    let mut g: Option<Poly> = None;
    for e in &row {
        if e.is_zero() {
            continue;
        }
        match e.as_ratfunc() {
            Some(r) if r.is_poly() => {
                g = Some(match g {
                    None => r.num().monic(),
                    Some(g) => gcd(&g, r.num()),
                });
            }
            _ => {
                g = None;
                break;
            }
        }
    }
    if let Some(g) = g {
        if !g.is_constant() {
            let ge = Expr::from_poly(g);
            row = row.iter().map(|e| e.checked_div(&ge).unwrap()).collect();
        }
    }
    if row.iter().find(|e| !e.is_zero()).map(|e| e.leading_is_negative()).unwrap_or(false) {
        row = row.iter().map(|e| e.neg()).collect();
    }
    row
}

/// A sub-bundle of TM given by independent generating vector fields.
#[derive(Clone, Debug)]
pub struct Distribution(Span);

/// A sub-bundle of T*M given by independent generating one-forms.
#[derive(Clone, Debug)]
pub struct Codistribution(Span);

macro_rules! bundle_common {
    ($t:ident, $elem:ident) => {
        impl $t {
            /// Span of `gens`; dependent generators are dropped.
            pub fn new(chart: &Chart, gens: Vec<$elem>) -> Self {
                $t(Span::new(chart, gens.into_iter().map(|g| g.into_components()).collect()))
            }

            pub fn from_rows(chart: &Chart, rows: Vec<Vec<Expr>>) -> Self {
                $t(Span::new(chart, rows))
            }

            pub fn zero(chart: &Chart) -> Self {
                $t::from_rows(chart, Vec::new())
            }

            /// All coordinate basis elements.
            pub fn full(chart: &Chart) -> Self {
                $t::new(chart, (0..chart.dim()).map(|i| $elem::basis(chart, i)).collect())
            }

            /// Span of the coordinate basis elements with the given indices.
            pub fn coordinate(chart: &Chart, idx: &[usize]) -> Self {
                $t::new(chart, idx.iter().map(|&i| $elem::basis(chart, i)).collect())
            }

            pub fn chart(&self) -> &Chart {
                &self.0.chart
            }

            pub fn rank(&self) -> usize {
                self.0.rows.len()
            }

            pub fn generators(&self) -> Vec<$elem> {
                self.0.rows.iter().map(|r| $elem::new(&self.0.chart, r.clone()).unwrap()).collect()
            }

            pub fn rows(&self) -> &[Vec<Expr>] {
                &self.0.rows
            }

            pub fn matrix(&self) -> ExprMatrix {
                self.0.matrix()
            }

            pub fn echelon(&self) -> &RowEchelon {
                &self.0.ech
            }

            pub fn contains(&self, v: &$elem) -> bool {
                self.0.contains(v.components())
            }

            pub fn contains_row(&self, v: &[Expr]) -> bool {
                self.0.contains(v)
            }

            pub fn contains_all(&self, o: &$t) -> bool {
                o.0.rows.iter().all(|r| self.0.contains(r))
            }

            pub fn same_span(&self, o: &$t) -> bool {
                self.rank() == o.rank() && self.contains_all(o)
            }

            /// Span of the union of generators.
            pub fn sum(&self, o: &$t) -> $t {
                let mut rows = self.0.rows.clone();
                rows.extend(o.0.rows.iter().cloned());
                $t::from_rows(&self.0.chart, rows)
            }

            /// Generators replaced by reduced row echelon rows with
            /// denominators cleared.
            pub fn simplified(&self) -> $t {
                $t(self.0.simplified())
            }
        }

        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("{")?;
                for (i, g) in self.generators().iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{g}")?;
                }
                f.write_str("}")
            }
        }
    };
}

bundle_common!(Distribution, VectorField);
bundle_common!(Codistribution, OneForm);

impl Distribution {
    /// Forms vanishing on the distribution.
    pub fn annihilator(&self) -> Codistribution {
        Codistribution::from_rows(&self.0.chart, self.0.kernel())
    }

    /// Brackets of all generator pairs lie in the span.
    pub fn is_integrable(&self) -> bool {
        let g = self.generators();
        for i in 0..g.len() {
            for j in i + 1..g.len() {
                if !self.contains(&g[i].bracket(&g[j])) {
                    return false;
                }
            }
        }
        true
    }

    /// Generic intersection, computed through annihilators.
    pub fn intersect(&self, o: &Distribution) -> Distribution {
        self.annihilator().sum(&o.annihilator()).annihilator_of()
    }
}

impl Codistribution {
    /// Vector fields annihilated by every form.
    pub fn annihilator_of(&self) -> Distribution {
        Distribution::from_rows(&self.0.chart, self.0.kernel())
    }
}

/// Free function form of [`Distribution::annihilator`].
pub fn annihilator(d: &Distribution) -> Codistribution {
    d.annihilator()
}

pub fn annihilator_of(c: &Codistribution) -> Distribution {
    c.annihilator_of()
}

pub fn intersect(a: &Distribution, b: &Distribution) -> Result<Distribution> {
    Ok(a.intersect(b))
}
