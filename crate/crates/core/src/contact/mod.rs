//! Contact coordinates for a recognized Goursat bundle.
//!
//! Two routes, chosen by ρ_k. With ρ_k > 1 the top of the coframe filtration
//! is the annihilator of the resolvent bundle and supplies x together with
//! the top-order fundamental functions. With ρ_k = 1 the top is the
//! annihilator of an auxiliary bundle Π grown from `Char V^(1)_0` by
//! bracketing with the normalized section Z.

mod finder;

pub use finder::{antiderivative, find_first_integrals, FirstIntegral, IntegralFinder, Request, Strategy};

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::classify::{GoursatVerdict, TypeVector};
use crate::expr::Expr;
use crate::geometry::{Codistribution, Distribution, OneForm, VectorField};
use crate::linalg::RowEchelon;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// ρ_k > 1, through the resolvent bundle.
    A,
    /// ρ_k = 1, through Π^k.
    B,
}

/// One level of the coframe filtration.
#[derive(Clone, Debug)]
pub struct FiltrationLevel {
    pub name: String,
    pub bundle: Codistribution,
    pub expected: usize,
}

/// Nested codistributions, smallest first, with one filtered basis.
#[derive(Clone, Debug)]
pub struct CoframeFiltration {
    pub levels: Vec<FiltrationLevel>,
    pub basis: Vec<OneForm>,
    /// `ends[i]`: number of basis forms spanning level i.
    pub ends: Vec<usize>,
}

impl CoframeFiltration {
    /// Basis forms added when passing from level `i-1` to level `i`.
    pub fn added(&self, i: usize) -> &[OneForm] {
        let lo = if i == 0 { 0 } else { self.ends[i - 1] };
        &self.basis[lo..self.ends[i]]
    }
}

#[derive(Clone, Debug)]
pub struct FundamentalBundle {
    pub order: usize,
    pub bundle: Codistribution,
}

#[derive(Clone, Debug)]
pub struct FundamentalFunctions {
    pub order: usize,
    pub functions: Vec<FirstIntegral>,
}

/// z^{l,j}_0, …, z^{l,j}_j
#[derive(Clone, Debug)]
pub struct ChartTower {
    pub order: usize,
    pub index: usize,
    pub strategy: Strategy,
    pub funcs: Vec<Expr>,
}

#[derive(Clone, Debug)]
pub struct ContactChart {
    pub tau: TypeVector,
    pub x: Expr,
    pub x_strategy: Strategy,
    /// Total derivative Z with Zx = 1.
    pub total: VectorField,
    pub towers: Vec<ChartTower>,
    /// Expressions assumed nonvanishing.
    pub side_conditions: Vec<Expr>,
}

impl ContactChart {
    /// x followed by every tower in order.
    pub fn functions(&self) -> Vec<Expr> {
        let mut v = alloc::vec![self.x.clone()];
        for t in &self.towers {
            v.extend(t.funcs.iter().cloned());
        }
        v
    }

    /// `z^{l,j}_s`
    pub fn z(&self, l: usize, j: usize, s: usize) -> Option<&Expr> {
        self.towers.iter().find(|t| t.order == j && t.index == l).and_then(|t| t.funcs.get(s))
    }
}

#[derive(Clone, Debug)]
pub struct Construction {
    pub route: Route,
    pub chart: ContactChart,
    pub filtration: CoframeFiltration,
    pub fundamentals: Vec<FundamentalBundle>,
    pub functions: Vec<FundamentalFunctions>,
    /// Π^k (route B only).
    pub pi: Option<Distribution>,
    pub requests: Vec<Request>,
    /// Candidates for x dropped because Π^k then had no closed-form integral.
    pub abandoned: Vec<Expr>,
}

impl Construction {
    /// Number of first integrals requested from the finder.
    pub fn requested(&self) -> usize {
        self.requests.iter().map(|r| r.count).sum()
    }
}

fn goursat_tau(v: &GoursatVerdict) -> Result<&TypeVector> {
    match (&v.tau, v.is_goursat) {
        (Some(t), true) => Ok(t),
        _ => Err(Error::Precondition("input is not a Goursat bundle".into())),
    }
}

/// `dim M − m_j`
fn big_n(v: &GoursatVerdict, n: usize, j: usize) -> usize {
    n - v.record().m(j)
}

/// Ξ-levels below the top: for j = k−1 down to 1, `Char V^(j)⊥` then
/// `(V^(j-1) ∩ Char V^(j))⊥`.
fn lower_levels(v: &GoursatVerdict, k: usize, n: usize) -> Vec<FiltrationLevel> {
    let mut out = Vec::new();
    for j in (1..k).rev() {
        out.push(FiltrationLevel {
            name: format!("Xi^({j})"),
            bundle: v.flag.chars[j].annihilator().simplified(),
            expected: big_n(v, n, j) + (v.record().m(j + 1) - v.record().m(j)) + 1,
        });
        let x = v.flag.inters[j].as_ref().expect("intersection computed");
        out.push(FiltrationLevel {
            name: format!("Xi^({j})_{}", j - 1),
            bundle: x.annihilator().simplified(),
            expected: big_n(v, n, j - 1) + 1,
        });
    }
    out
}

/// Check dimensions and nesting, then assemble a filtered basis preferring
/// coordinate differentials.
fn assemble(levels: Vec<FiltrationLevel>) -> Result<CoframeFiltration> {
    let chart = levels[0].bundle.chart().clone();
    let n = chart.dim();
    for (i, l) in levels.iter().enumerate() {
        if l.bundle.rank() != l.expected {
            return Err(Error::DimensionMismatch { what: format!("rank of {}", l.name), expected: l.expected, found: l.bundle.rank() });
        }
        if i > 0 && !l.bundle.contains_all(&levels[i - 1].bundle) {
            return Err(Error::NotTotallyRegular { level: i, what: format!("{} does not contain {}", l.name, levels[i - 1].name) });
        }
    }
    let mut ech = RowEchelon::new(n);
    let mut basis = Vec::new();
    let mut ends = Vec::new();
    for l in &levels {
        let coords = (0..n).map(|i| OneForm::basis(&chart, i)).filter(|w| l.bundle.contains(w));
        for w in coords.chain(l.bundle.simplified().generators()) {
            if ech.rank() == l.expected {
                break;
            }
            if ech.insert(w.components(), 0) {
                basis.push(w);
            }
        }
        ends.push(basis.len());
    }
    Ok(CoframeFiltration { levels, basis, ends })
}

/// Filtration for ρ_k > 1: `Υ = R⊥ ⊂ Ξ^(k-1) ⊆ Ξ^(k-1)_{k-2} ⊂ …`.
pub fn build_filtration_a(d: &Distribution, v: &GoursatVerdict) -> Result<CoframeFiltration> {
    let tau = goursat_tau(v)?;
    let k = tau.k();
    if tau.rho(k) < 2 {
        return Err(Error::Precondition("rho_k = 1: use the route through Pi^k".into()));
    }
    let n = d.chart().dim();
    let r = v.resolvent().ok_or_else(|| Error::Precondition("verdict carries no resolvent bundle".into()))?;
    let mut levels = alloc::vec![FiltrationLevel {
        name: "Upsilon".into(),
        bundle: r.annihilator().simplified(),
        expected: big_n(v, n, k - 1) + 1,
    }];
    levels.extend(lower_levels(v, tau.k(), n));
    assemble(levels)
}

/// Filtration for ρ_k = 1, topped by `(Π^k)⊥`.
pub fn build_filtration_b(d: &Distribution, v: &GoursatVerdict, pi: &Distribution) -> Result<CoframeFiltration> {
    let tau = goursat_tau(v)?;
    let n = d.chart().dim();
    let mut levels = alloc::vec![FiltrationLevel { name: "Pi^k annihilator".into(), bundle: pi.annihilator().simplified(), expected: 2 }];
    levels.extend(lower_levels(v, tau.k(), n));
    assemble(levels)
}

/// Ω_j for each j < k with ρ_j > 0: the basis forms completing Ξ^(j) to
/// Ξ^(j)_{j-1}.
pub fn fundamental_bundles(f: &CoframeFiltration, tau: &TypeVector) -> Result<Vec<FundamentalBundle>> {
    let k = tau.k();
    let mut out = Vec::new();
    for j in 1..k {
        // Ξ^(j)_{j-1} sits at index 2(k−j).
        let i = 2 * (k - j);
        let forms = f.added(i);
        if forms.len() != tau.rho(j) {
            return Err(Error::DimensionMismatch { what: format!("fundamental bundle of order {j}"), expected: tau.rho(j), found: forms.len() });
        }
        if !forms.is_empty() {
            out.push(FundamentalBundle { order: j, bundle: Codistribution::new(f.levels[i].bundle.chart(), forms.to_vec()) });
        }
    }
    Ok(out)
}

/// First generator of `d` with `Yx ≢ 0`, normalized to `Z = Y/(Yx)`.
/// Returns Z and the divisor Yx.
pub fn normalized_section(d: &Distribution, x: &Expr) -> Result<(VectorField, Expr)> {
    for y in d.generators() {
        let yx = y.apply(x);
        if let Some(inv) = yx.inv() {
            return Ok((y.scale(&inv), yx));
        }
    }
    Err(Error::NotTotallyRegular { level: 0, what: format!("no generator Y with Y({x}) nonzero") })
}

/// `Π^{l+1} = Π^l + [Z, Π^l]` from `Π^0 = V^(0) ∩ Char V^(1)`; for derived
/// length one, `Π = V ∩ ker dx`.
pub fn build_pi_k(d: &Distribution, v: &GoursatVerdict, x: &Expr, z: &VectorField) -> Result<Distribution> {
    let tau = goursat_tau(v)?;
    let k = tau.k();
    if tau.rho(k) != 1 {
        return Err(Error::Precondition("rho_k > 1: use the route through the resolvent".into()));
    }
    let chart = d.chart();
    let n = chart.dim();
    let dx = OneForm::d(chart, x);
    let mut pi = if k == 1 {
        d.intersect(&Codistribution::new(chart, alloc::vec![dx.clone()]).annihilator_of())
    } else {
        v.flag.inters[1].clone().expect("intersection computed")
    };
    for _ in 1..k {
        let mut rows = pi.rows().to_vec();
        rows.extend(pi.generators().iter().map(|g| z.bracket(g).into_components()));
        pi = Distribution::from_rows(chart, rows).simplified();
    }
    if pi.rank() + 2 != n {
        return Err(Error::DimensionMismatch { what: "rank of Pi^k".into(), expected: n - 2, found: pi.rank() });
    }
    if !pi.is_integrable() {
        return Err(Error::NotTotallyRegular { level: k, what: "Pi^k is not integrable".into() });
    }
    if !pi.annihilator().contains(&dx) {
        return Err(Error::NotTotallyRegular { level: k, what: "dx does not annihilate Pi^k".into() });
    }
    Ok(pi)
}

/// Prolong each fundamental function along Z.
pub fn generate_chart(tau: &TypeVector, x: &FirstIntegral, z: &VectorField, functions: &[FundamentalFunctions], side_conditions: Vec<Expr>) -> ContactChart {
    let mut towers = Vec::new();
    for ff in functions {
        for (l, f) in ff.functions.iter().enumerate() {
            let mut funcs = alloc::vec![f.f.clone()];
            for s in 0..ff.order {
                let next = z.apply(&funcs[s]);
                funcs.push(next);
            }
            towers.push(ChartTower { order: ff.order, index: l + 1, strategy: f.strategy, funcs });
        }
    }
    towers.sort_by_key(|t| (t.order, t.index));
    ContactChart { tau: tau.clone(), x: x.f.clone(), x_strategy: x.strategy, total: z.clone(), towers, side_conditions }
}

/// Π^k, its filtration, and φ^{1,k} for one choice of x.
fn route_b_top(d: &Distribution, v: &GoursatVerdict, x: &FirstIntegral, hints: &[Expr]) -> Result<(Distribution, CoframeFiltration, Vec<FirstIntegral>)> {
    let chart = d.chart();
    let (z, _) = normalized_section(d, &x.f)?;
    let pi = build_pi_k(d, v, &x.f, &z)?;
    let f = build_filtration_b(d, v, &pi)?;
    let dx = Codistribution::new(chart, alloc::vec![OneForm::d(chart, &x.f)]);
    let phi = find_first_integrals(&f.levels[0].bundle, 1, &dx, hints)?;
    Ok((pi, f, phi))
}

/// Run the full construction on a recognized Goursat bundle.
pub fn construct(d: &Distribution, v: &GoursatVerdict, hints: &[Expr]) -> Result<Construction> {
    let tau = goursat_tau(v)?.clone();
    let k = tau.k();
    let chart = d.chart();
    let mut finder = IntegralFinder::new(hints.to_vec());
    let mut functions = Vec::new();
    let mut abandoned = Vec::new();
    let (route, x, pi, filtration) = if tau.rho(k) > 1 {
        let f = build_filtration_a(d, v)?;
        let mut top = finder.find("Upsilon", &f.levels[0].bundle, tau.rho(k) + 1, &Codistribution::zero(chart))?;
        let x = top.remove(0);
        functions.push(FundamentalFunctions { order: k, functions: top });
        (Route::A, x, None, f)
    } else {
        let top = if k == 1 { Codistribution::full(chart) } else { v.flag.chars[k - 1].annihilator().simplified() };
        let xs = finder.find_alternatives("x", &top, &Codistribution::zero(chart))?;
        // A poor choice of x can leave Π^k without a closed-form partner
        // integral; later candidates from the same request are tried then.
        let mut last = None;
        let mut chosen = None;
        for x in xs {
            match route_b_top(d, v, &x, &finder.hints) {
                Ok(r) => {
                    chosen = Some((x, r));
                    break;
                }
                Err(e @ Error::IntegralsNotFound(_)) => {
                    abandoned.push(x.f.clone());
                    last = Some(e);
                }
                Err(e) => return Err(e),
            }
        }
        let (x, (pi, f, phi)) = match chosen {
            Some(c) => c,
            None => return Err(last.expect("at least one candidate")),
        };
        finder.requests.push(Request { label: "Pi^k annihilator".into(), count: 1 });
        functions.push(FundamentalFunctions { order: k, functions: phi });
        (Route::B, x, Some(pi), f)
    };
    let fundamentals = fundamental_bundles(&filtration, &tau)?;
    for j in 1..k {
        if tau.rho(j) == 0 {
            continue;
        }
        let i = 2 * (k - j);
        let found = finder.find(&filtration.levels[i].name, &filtration.levels[i].bundle, tau.rho(j), &filtration.levels[i - 1].bundle)?;
        functions.push(FundamentalFunctions { order: j, functions: found });
    }
    functions.sort_by_key(|f| f.order);
    let (z, yx) = normalized_section(d, &x.f)?;
    let side = if yx.is_constant() { Vec::new() } else { alloc::vec![yx] };
    let chart = generate_chart(&tau, &x, &z, &functions, side);
    Ok(Construction { route, chart, filtration, fundamentals, functions, pi, requests: finder.requests, abandoned })
}
