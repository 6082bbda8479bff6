//! Control systems `dx/dt = f(t, x, u)` and control prolongation.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::expr::{fresh_name, parse, Chart, Expr, Symbol};
use crate::geometry::{Distribution, VectorField};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct ControlSystem {
    chart: Chart,
    time: Symbol,
    states: Vec<Symbol>,
    controls: Vec<Symbol>,
    dynamics: Vec<Expr>,
}

impl ControlSystem {
    /// Chart order is `(time, states…, controls…)`; `params` are constants.
    pub fn new(time: &str, states: &[String], controls: &[String], params: &[String], dynamics: Vec<Expr>) -> Result<Self> {
        let mut coords: Vec<String> = alloc::vec![time.to_string()];
        coords.extend(states.iter().cloned());
        coords.extend(controls.iter().cloned());
        let chart = Chart::with_params(&coords, params)?;
        if dynamics.len() != states.len() {
            return Err(Error::DimensionMismatch { what: "dynamics".into(), expected: states.len(), found: dynamics.len() });
        }
        for f in &dynamics {
            if let Some(s) = f.free_symbols().into_iter().find(|s| chart.lookup(s.name()).is_none()) {
                return Err(Error::InvalidInput(format!("dynamics mention undeclared symbol {s}")));
            }
        }
        Ok(ControlSystem {
            time: Symbol::new(time),
            states: states.iter().map(|s| Symbol::new(s)).collect(),
            controls: controls.iter().map(|s| Symbol::new(s)).collect(),
            chart,
            dynamics,
        })
    }

    /// Parse the dynamics over the system's chart.
    pub fn parse(time: &str, states: &[&str], controls: &[&str], params: &[&str], dynamics: &[&str]) -> Result<Self> {
        let own = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        let (st, ct, pa) = (own(states), own(controls), own(params));
        let mut coords = alloc::vec![time.to_string()];
        coords.extend(st.iter().cloned());
        coords.extend(ct.iter().cloned());
        let chart = Chart::with_params(&coords, &pa)?;
        let dyn_ = dynamics.iter().map(|s| parse(s, &chart)).collect::<Result<Vec<_>>>()?;
        Self::new(time, &st, &ct, &pa, dyn_)
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn time(&self) -> &Symbol {
        &self.time
    }

    pub fn states(&self) -> &[Symbol] {
        &self.states
    }

    pub fn controls(&self) -> &[Symbol] {
        &self.controls
    }

    pub fn dynamics(&self) -> &[Expr] {
        &self.dynamics
    }

    /// `{∂t + Σ f_i ∂x_i, ∂u_a}`
    pub fn to_distribution(&self) -> Distribution {
        let n = self.chart.dim();
        let mut drift = alloc::vec![Expr::zero(); n];
        drift[0] = Expr::one();
        for (i, f) in self.dynamics.iter().enumerate() {
            drift[1 + i] = f.clone();
        }
        let mut gens = alloc::vec![VectorField::new(&self.chart, drift).expect("chart width")];
        let off = 1 + self.states.len();
        gens.extend((0..self.controls.len()).map(|a| VectorField::basis(&self.chart, off + a)));
        Distribution::new(&self.chart, gens)
    }
}

#[derive(Clone, Debug)]
pub struct Prolongation {
    pub system: ControlSystem,
    /// w_0 = u, w_1, …, w_times; the last is the new control.
    pub chain: Vec<Symbol>,
    /// Names that had to be suffixed to avoid clashes: (wanted, used).
    pub renamed: Vec<(String, String)>,
}

/// Turn `control` into a chain of `times` integrators.
pub fn prolong_control(s: &ControlSystem, control: &str, times: usize) -> Result<Prolongation> {
    if times == 0 {
        return Err(Error::Precondition("prolongation needs times >= 1".into()));
    }
    let pos = s
        .controls
        .iter()
        .position(|c| c.name() == control)
        .ok_or_else(|| Error::InvalidInput(format!("{control} is not a control")))?;
    let mut taken: Vec<Symbol> = s.chart.symbols().cloned().collect();
    let mut chain = alloc::vec![s.controls[pos].clone()];
    let mut renamed = Vec::new();
    for i in 1..=times {
        let want = format!("{control}_{i}");
        let got = fresh_name(&want, &taken);
        if got != want {
            renamed.push((want, got.clone()));
        }
        let sym = Symbol::new(&got);
        taken.push(sym.clone());
        chain.push(sym);
    }
    let name = |x: &Symbol| x.name().to_string();
    let mut states: Vec<String> = s.states.iter().map(name).collect();
    states.extend(chain[..times].iter().map(name));
    let mut controls: Vec<String> = s.controls.iter().map(name).collect();
    controls[pos] = name(&chain[times]);
    let mut dynamics = s.dynamics.clone();
    dynamics.extend(chain[1..].iter().map(Expr::sym));
    let params: Vec<String> = s.chart.params().iter().map(name).collect();
    let system = ControlSystem::new(s.time.name(), &states, &controls, &params, dynamics)?;
    Ok(Prolongation { system, chain, renamed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::refined_derived_type;

    fn car() -> ControlSystem {
        ControlSystem::parse(
            "t",
            &["x", "y", "theta", "phi"],
            &["u1", "u2"],
            &["L"],
            &["u1*cos(theta)", "u1*sin(theta)", "u1/L*tan(phi)", "u2"],
        )
        .unwrap()
    }

    #[test]
    fn car_distribution() {
        let d = car().to_distribution();
        assert_eq!(d.rank(), 3);
        assert_eq!(d.chart().dim(), 7);
        let r = refined_derived_type(&d).unwrap();
        assert_eq!(r.record.to_lists(), [alloc::vec![3, 0], alloc::vec![5, 2, 3], alloc::vec![6, 4, 4], alloc::vec![7, 7]]);
    }

    #[test]
    fn prolonged_car() {
        let p = prolong_control(&car(), "u1", 2).unwrap();
        let s = &p.system;
        assert_eq!(s.states().len(), 6);
        assert_eq!(s.controls()[0].name(), "u1_2");
        let r = refined_derived_type(&s.to_distribution()).unwrap();
        assert_eq!(r.record.to_lists(), [alloc::vec![3, 0], alloc::vec![5, 2, 2], alloc::vec![7, 4, 4], alloc::vec![9, 9]]);
        assert!(prolong_control(&car(), "u1", 0).is_err());
    }

    #[test]
    fn single_integrator_and_zero_drift() {
        let s = ControlSystem::parse("t", &["x"], &["u"], &[], &["u"]).unwrap();
        let r = refined_derived_type(&s.to_distribution()).unwrap();
        assert_eq!(r.record.to_lists(), [alloc::vec![2, 0], alloc::vec![3, 3]]);
        let z = ControlSystem::parse("t", &["x"], &["u"], &[], &["0"]).unwrap();
        assert!(z.to_distribution().is_integrable());
    }

    #[test]
    fn clash_suffixing() {
        let s = ControlSystem::parse("t", &["x", "u_1"], &["u"], &[], &["u", "0"]).unwrap();
        let p = prolong_control(&s, "u", 1).unwrap();
        assert_eq!(p.renamed, [("u_1".to_string(), "u_1_".to_string())]);
    }
}
