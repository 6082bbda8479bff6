//! Independent certification of contact charts and the static-feedback
//! necessary condition for control systems.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::classify::GoursatVerdict;
use crate::contact::{ContactChart, Construction, Route};
use num_traits::Zero;

use crate::expr::{Atom, AtomKind, Chart, Expr, Poly, RatFunc, Symbol, Q};
use crate::geometry::{Codistribution, Distribution, OneForm};
use crate::linalg::{qmat, RowEchelon};

/// `X(z_s) − z_{s+1} X(x) ≡ 0` for one generator and one tower level.
#[derive(Clone, Debug)]
pub struct AnnihilationCheck {
    pub generator: usize,
    pub order: usize,
    pub index: usize,
    pub level: usize,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub annihilation: Vec<AnnihilationCheck>,
    pub jacobian_rank: usize,
    pub dim: usize,
    pub count: usize,
    pub distribution_rank: usize,
    pub expected_rank: usize,
    pub side_conditions: Vec<Expr>,
    pub pass: bool,
}

impl Certificate {
    pub fn annihilation_pass(&self) -> bool {
        self.annihilation.iter().all(|c| c.pass)
    }

    /// Human-readable reasons for failure.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        for c in self.annihilation.iter().filter(|c| !c.pass) {
            out.push(format!("generator {} does not annihilate the contact form of z{}_{}_{}", c.generator + 1, c.index, c.order, c.level));
        }
        if self.jacobian_rank != self.dim {
            out.push(format!("Jacobian rank {} below dimension {}", self.jacobian_rank, self.dim));
        }
        if self.count != self.dim {
            out.push(format!("{} functions for dimension {}", self.count, self.dim));
        }
        if self.distribution_rank != self.expected_rank {
            out.push(format!("distribution rank {} differs from 1+P = {}", self.distribution_rank, self.expected_rank));
        }
        out
    }
}

/// Pull back the contact forms of the normal form along the chart and check
/// that they annihilate `d`; with independence and rank counts this pins
/// the image down to the normal form.
pub fn certify(d: &Distribution, chart: &ContactChart) -> Certificate {
    let c = d.chart();
    let gens = d.generators();
    let mut annihilation = Vec::new();
    for (g, x) in gens.iter().enumerate() {
        let xx = x.apply(&chart.x);
        for t in &chart.towers {
            for s in 0..t.order {
                let e = x.apply(&t.funcs[s]).sub(&t.funcs[s + 1].mul(&xx));
                annihilation.push(AnnihilationCheck { generator: g, order: t.order, index: t.index, level: s, pass: e.is_zero() });
            }
        }
    }
    let funcs = chart.functions();
    let rows: Vec<Vec<Expr>> = funcs.iter().map(|f| OneForm::d(c, f).components().to_vec()).collect();
    let jacobian_rank = match rank_at_rational_point(c, &rows) {
        Some(r) if r == rows.len() => r,
        _ => {
            let mut ech = RowEchelon::new(c.dim());
            for r in &rows {
                ech.insert(r, 0);
            }
            ech.rank()
        }
    };
    let mut cert = Certificate {
        annihilation,
        jacobian_rank,
        dim: c.dim(),
        count: funcs.len(),
        distribution_rank: d.rank(),
        expected_rank: chart.tau.rank(),
        side_conditions: chart.side_conditions.clone(),
        pass: false,
    };
    cert.pass = cert.failures().is_empty();
    cert
}

/// Exact rank at a rational point, a lower bound for the generic rank.
/// Only for entries that are rational functions of the coordinates; `None`
/// when no sample point avoids the poles.
fn rank_at_rational_point(c: &Chart, rows: &[Vec<Expr>]) -> Option<usize> {
    let fracs: Vec<Vec<RatFunc>> = rows.iter().map(|r| r.iter().map(|e| e.as_ratfunc()).collect::<Option<_>>()).collect::<Option<_>>()?;
    let only_symbols = |p: &Poly| p.terms().iter().all(|(m, _)| m.factors().iter().all(|(a, _)| matches!(a.kind(), AtomKind::Sym(_))));
    if !fracs.iter().flatten().all(|f| only_symbols(f.num()) && only_symbols(f.den())) {
        return None;
    }
    let syms: Vec<Symbol> = c.symbols().cloned().collect();
    'points: for attempt in 0..4i64 {
        let value = |a: &Atom| -> Q {
            let i = syms.iter().position(|s| matches!(a.kind(), AtomKind::Sym(t) if t == s)).unwrap_or(0) as i64;
            Q::new((7 * i + 3 * attempt + 2).into(), (5 * i + attempt + 3).into())
        };
        let mut m = Vec::with_capacity(fracs.len());
        for r in &fracs {
            let mut row = Vec::with_capacity(r.len());
            for f in r {
                let den = eval_poly(f.den(), &value);
                if den.is_zero() {
                    continue 'points;
                }
                row.push(eval_poly(f.num(), &value) / den);
            }
            m.push(row);
        }
        return Some(qmat::rank(&m));
    }
    None
}

fn eval_poly(p: &Poly, value: &dyn Fn(&Atom) -> Q) -> Q {
    let mut out = Q::zero();
    for (m, q) in p.terms() {
        let mut t = q.clone();
        for (a, k) in m.factors() {
            t *= num_traits::pow(value(a), *k as usize);
        }
        out += t;
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    /// dt ∈ Char V^(k-1)⊥ (ρ_k = 1)
    CharAnnihilator,
    /// dt ∈ Υ (ρ_k > 1)
    Upsilon,
}

#[derive(Clone, Debug)]
pub struct FeedbackReport {
    pub k: usize,
    pub rho_k: usize,
    pub tested: Membership,
    pub is_goursat: bool,
    pub dt_member: bool,
    /// The codistribution dt was tested against.
    pub against: Codistribution,
    pub met: bool,
}

/// The necessary condition for static feedback equivalence to a Brunovsky
/// normal form. Returns `None` if the input is not Goursat.
pub fn feedback_check(d: &Distribution, time: &Symbol, v: &GoursatVerdict, c: Option<&Construction>) -> Option<FeedbackReport> {
    let tau = v.tau.as_ref().filter(|_| v.is_goursat)?;
    let chart = d.chart();
    let k = tau.k();
    let rho_k = tau.rho(k);
    let dt = OneForm::d(chart, &Expr::sym(time));
    let (tested, against) = if rho_k == 1 {
        let a = if k == 1 { Codistribution::full(chart) } else { v.flag.chars[k - 1].annihilator().simplified() };
        (Membership::CharAnnihilator, a)
    } else {
        let a = match c {
            Some(c) if c.route == Route::A => c.filtration.levels[0].bundle.clone(),
            _ => v.resolvent()?.annihilator().simplified(),
        };
        (Membership::Upsilon, a)
    };
    let dt_member = against.contains(&dt);
    Some(FeedbackReport { k, rho_k, tested, is_goursat: v.is_goursat, dt_member, against, met: v.is_goursat && dt_member })
}

/// Whether the chart has the shape of a static feedback transformation:
/// x is time, lower jets depend on time and states, top jets may also use
/// controls.
pub fn static_feedback_inspect(chart: &ContactChart, states: &[Symbol], controls: &[Symbol], time: &Symbol, params: &[Symbol]) -> bool {
    if chart.x != Expr::sym(time) {
        return false;
    }
    let within = |e: &Expr, allow_controls: bool| {
        e.free_symbols().iter().all(|s| s == time || states.contains(s) || params.contains(s) || (allow_controls && controls.contains(s)))
    };
    chart.towers.iter().all(|t| t.funcs.iter().enumerate().all(|(s, f)| within(f, s == t.order)))
}
