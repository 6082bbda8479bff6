use alloc::vec::Vec;
use core::fmt;

use crate::expr::{Chart, Expr};
use crate::{Error, Result};

/// A vector field `Σ v_i ∂x_i` on a chart.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VectorField {
    chart: Chart,
    comps: Vec<Expr>,
}

/// A one-form `Σ w_i dx_i` on a chart.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OneForm {
    chart: Chart,
    comps: Vec<Expr>,
}

macro_rules! common {
    ($t:ident) => {
        impl $t {
            pub fn new(chart: &Chart, comps: Vec<Expr>) -> Result<Self> {
                if comps.len() != chart.dim() {
                    return Err(Error::InvalidInput(alloc::format!(
                        "expected {} components, got {}",
                        chart.dim(),
                        comps.len()
                    )));
                }
                Ok($t { chart: chart.clone(), comps })
            }

            pub fn zero(chart: &Chart) -> Self {
                $t { chart: chart.clone(), comps: alloc::vec![Expr::zero(); chart.dim()] }
            }

            /// The coordinate basis element for index `i`.
            pub fn basis(chart: &Chart, i: usize) -> Self {
                let mut v = Self::zero(chart);
                v.comps[i] = Expr::one();
                v
            }

            pub fn chart(&self) -> &Chart {
                &self.chart
            }

            pub fn components(&self) -> &[Expr] {
                &self.comps
            }

            pub fn into_components(self) -> Vec<Expr> {
                self.comps
            }

            pub fn is_zero(&self) -> bool {
                self.comps.iter().all(|e| e.is_zero())
            }

            pub fn scale(&self, f: &Expr) -> Self {
                $t { chart: self.chart.clone(), comps: self.comps.iter().map(|c| c.mul(f)).collect() }
            }

            pub fn add(&self, o: &Self) -> Self {
                $t { chart: self.chart.clone(), comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a.add(b)).collect() }
            }

            pub fn sub(&self, o: &Self) -> Self {
                $t { chart: self.chart.clone(), comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a.sub(b)).collect() }
            }
        }
    };
}

common!(VectorField);
common!(OneForm);

impl VectorField {
    /// Directional derivative `X(f)`.
    pub fn apply(&self, f: &Expr) -> Expr {
        let mut s = Expr::zero();
        for (c, x) in self.comps.iter().zip(self.chart.coords()) {
            if c.is_zero() {
                continue;
            }
            let d = f.diff(x);
            if !d.is_zero() {
                s = s.add(&c.mul(&d));
            }
        }
        s
    }

    /// Lie bracket; component i is `X(Y_i) - Y(X_i)`.
    pub fn bracket(&self, o: &VectorField) -> VectorField {
        let comps = (0..self.comps.len()).map(|i| self.apply(&o.comps[i]).sub(&o.apply(&self.comps[i]))).collect();
        VectorField { chart: self.chart.clone(), comps }
    }
}

impl OneForm {
    /// Exterior derivative of a function.
    pub fn d(chart: &Chart, f: &Expr) -> OneForm {
        OneForm { chart: chart.clone(), comps: chart.coords().iter().map(|x| f.diff(x)).collect() }
    }

    /// Contraction `ω(X)`.
    pub fn apply(&self, x: &VectorField) -> Expr {
        crate::linalg::dot(&self.comps, x.components())
    }
}

fn write_combination(f: &mut fmt::Formatter<'_>, comps: &[Expr], chart: &Chart, prefix: &str) -> fmt::Result {
    let mut first = true;
    for (c, x) in comps.iter().zip(chart.coords()) {
        if c.is_zero() {
            continue;
        }
        let neg = c.leading_is_negative() && c.terms().len() == 1 && c.terms()[0].1.num().len() == 1;
        let c = if neg { c.neg() } else { c.clone() };
        match (first, neg) {
            (true, true) => f.write_str("-")?,
            (true, false) => {}
            (false, true) => f.write_str(" - ")?,
            (false, false) => f.write_str(" + ")?,
        }
        first = false;
        if c.is_one() {
        } else if c.terms().len() == 1 && c.terms()[0].0.is_empty() && c.terms()[0].1.num().len() == 1 {
            write!(f, "{c}*")?;
        } else {
            write!(f, "({c})*")?;
        }
        write!(f, "{prefix}{x}")?;
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_combination(f, &self.comps, &self.chart, "∂")
    }
}

impl fmt::Display for OneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_combination(f, &self.comps, &self.chart, "d")
    }
}
