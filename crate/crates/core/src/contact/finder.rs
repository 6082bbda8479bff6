//! First integrals of integrable Pfaffian systems: a fixed strategy cascade
//! with user hints as an escape hatch.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::expr::{fresh_name, lcm, q_int, Atom, AtomKind, Chart, Expr, Mono, Poly, Symbol, Q};
use crate::geometry::{Codistribution, OneForm};
use crate::linalg::{constant_combination_in_rowspace, qmat, RowEchelon};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Hint,
    Coordinate,
    ConstantCombination,
    TwoVariable,
    Quadrature,
    Reduction,
}

impl Strategy {
    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Hint => "hint",
            Strategy::Coordinate => "coordinate",
            Strategy::ConstantCombination => "constant-combination",
            Strategy::TwoVariable => "two-variable",
            Strategy::Quadrature => "quadrature",
            Strategy::Reduction => "linear-reduction",
        }
    }
}

#[derive(Clone, Debug)]
pub struct FirstIntegral {
    pub f: Expr,
    pub strategy: Strategy,
}

/// One finder invocation, for instrumentation.
#[derive(Clone, Debug)]
pub struct Request {
    pub label: String,
    pub count: usize,
}

/// Stateful finder that counts how many integrals were asked for.
#[derive(Clone, Debug, Default)]
pub struct IntegralFinder {
    pub hints: Vec<Expr>,
    pub requests: Vec<Request>,
}

impl IntegralFinder {
    pub fn new(hints: Vec<Expr>) -> Self {
        IntegralFinder { hints, requests: Vec::new() }
    }

    /// Total number of integrals requested so far.
    pub fn requested(&self) -> usize {
        self.requests.iter().map(|r| r.count).sum()
    }

    pub fn find(&mut self, label: &str, c: &Codistribution, count: usize, modulo: &Codistribution) -> Result<Vec<FirstIntegral>> {
        self.requests.push(Request { label: label.into(), count });
        find_first_integrals(c, count, modulo, &self.hints)
    }

    /// One request for a single integral, returning every independent
    /// candidate the cascade produces, best first. The caller keeps the
    /// first that suits it.
    pub fn find_alternatives(&mut self, label: &str, c: &Codistribution, modulo: &Codistribution) -> Result<Vec<FirstIntegral>> {
        self.requests.push(Request { label: label.into(), count: 1 });
        let found = collect(c, c.rank(), modulo, &self.hints)?;
        if found.is_empty() {
            return Err(not_found(c, 0, 1));
        }
        Ok(found)
    }
}

/// `count` functions f with df ∈ C, independent modulo `modulo`.
///
/// Tried in order: hints, coordinate functions (lowest index first),
/// constant-coefficient combinations, then a two-variable quadrature.
pub fn find_first_integrals(c: &Codistribution, count: usize, modulo: &Codistribution, hints: &[Expr]) -> Result<Vec<FirstIntegral>> {
    let found = collect(c, count, modulo, hints)?;
    if found.len() < count {
        return Err(not_found(c, found.len(), count));
    }
    Ok(found)
}

fn not_found(c: &Codistribution, got: usize, count: usize) -> Error {
    Error::IntegralsNotFound(format!("found {got} of {count} first integrals of {}; supply hints for the rest", c.simplified()))
}

/// Up to `count` integrals; fewer if the cascade runs dry.
fn collect(c: &Codistribution, count: usize, modulo: &Codistribution, hints: &[Expr]) -> Result<Vec<FirstIntegral>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    let chart = c.chart().clone();
    if !c.annihilator_of().is_integrable() {
        return Err(Error::Precondition("Pfaffian system is not integrable".into()));
    }
    let mut st = State { chart: chart.clone(), c, ech: modulo.echelon().clone(), out: Vec::new(), count };
    for h in hints {
        if st.try_add(h, Strategy::Hint) {
            return Ok(st.out);
        }
    }
    for x in chart.coords() {
        if st.try_add(&Expr::sym(x), Strategy::Coordinate) {
            return Ok(st.out);
        }
    }
    for v in constant_combination_in_rowspace(&c.matrix())? {
        let mut f = Expr::zero();
        for (q, x) in v.iter().zip(chart.coords()) {
            if !q.is_zero() {
                f = f.add(&Expr::sym(x).scale(q));
            }
        }
        if st.try_add(&f, Strategy::ConstantCombination) {
            return Ok(st.out);
        }
    }
    for row in c.simplified().rows() {
        if let Some(f) = two_variable(&chart, row) {
            if st.try_add(&f, Strategy::TwoVariable) {
                return Ok(st.out);
            }
        }
    }
    let simple = c.simplified();
    for row in simple.rows() {
        if let Some(f) = quadrature(&chart, c, row) {
            if st.try_add(&f, Strategy::Quadrature) {
                return Ok(st.out);
            }
        }
    }
    let lin = constant_combination_in_rowspace(&c.matrix())?;
    for row in simple.rows() {
        if let Some(f) = linear_reduction(&chart, &lin, row) {
            if st.try_add(&f, Strategy::Reduction) {
                return Ok(st.out);
            }
        }
    }
    Ok(st.out)
}

struct State<'a> {
    chart: Chart,
    c: &'a Codistribution,
    ech: RowEchelon,
    out: Vec<FirstIntegral>,
    count: usize,
}

impl State<'_> {
    /// Returns true once enough integrals are collected.
    fn try_add(&mut self, f: &Expr, strategy: Strategy) -> bool {
        if f.is_constant() || self.out.iter().any(|g| &g.f == f) {
            return false;
        }
        let df = OneForm::d(&self.chart, f);
        if self.c.contains(&df) && self.ech.insert(df.components(), 0) {
            self.out.push(FirstIntegral { f: f.clone(), strategy });
        }
        self.out.len() == self.count
    }
}

/// Closed form for a separable row `a dx_i + b dx_j` whose coefficients
/// involve only x_i and x_j.
fn two_variable(chart: &Chart, row: &[Expr]) -> Option<Expr> {
    let support: Vec<usize> = (0..row.len()).filter(|&i| !row[i].is_zero()).collect();
    if support.len() != 2 {
        return None;
    }
    let (xi, xj) = (chart.coord(support[0]), chart.coord(support[1]));
    let params = chart.params();
    let ok = |e: &Expr| e.free_symbols().iter().all(|s| s == xi || s == xj || params.contains(s));
    if !ok(&row[support[0]]) || !ok(&row[support[1]]) {
        return None;
    }
    solve_2d(&row[support[0]], &row[support[1]], xi, xj)
}

/// An integral of `a dx_i + b dx_j` (other symbols constant): separable
/// ratios, or a linear first-order equation, in either orientation.
fn solve_2d(a: &Expr, b: &Expr, xi: &Symbol, xj: &Symbol) -> Option<Expr> {
    if a.is_zero() {
        return Some(Expr::sym(xj));
    }
    if b.is_zero() {
        return Some(Expr::sym(xi));
    }
    let r = b.checked_div(a)?;
    let s = a.checked_div(b)?;
    separable(&r, xi, xj).or_else(|| linear(&r, xi, xj)).or_else(|| separable(&s, xj, xi)).or_else(|| linear(&s, xj, xi))
}

/// `dx_i + r dx_j` with `r = p(x_j) x_i + q(x_j)`: integrating factor
/// `μ = exp(∫p)`, integral `μ x_i + ∫ μ q dx_j`.
fn linear(r: &Expr, xi: &Symbol, xj: &Symbol) -> Option<Expr> {
    let p = r.diff(xi);
    if p.depends_on(xi) {
        return None;
    }
    let q = r.sub(&p.mul(&Expr::sym(xi)));
    let mu = Expr::exp(&antiderivative(&p, xj)?);
    Some(mu.mul(&Expr::sym(xi)).add(&antiderivative(&mu.mul(&q), xj)?))
}

/// `f` with `df ∝ dx_i + r dx_j`, for `r = g(x_i) h(x_j)`:
/// `f = ∫ dx_i/g + ∫ h dx_j`. Other symbols are constants.
fn separable(r: &Expr, xi: &Symbol, xj: &Symbol) -> Option<Expr> {
    let g = (1..=5).find_map(|c| {
        let m: BTreeMap<Symbol, Expr> = [(xj.clone(), Expr::int(c))].into_iter().collect();
        let g = r.subs(&m);
        (!g.is_zero() && g.inv().is_some()).then_some(g)
    })?;
    let h = r.checked_div(&g)?;
    if h.depends_on(xi) {
        return None;
    }
    Some(antiderivative(&g.inv()?, xi)?.add(&antiderivative(&h, xj)?))
}

/// Rows whose coefficient vector stays, modulo the gradients of the known
/// linear integrals, inside a fixed plane spanned by two linear forms u, v.
/// In coordinates adapted to those forms the row becomes `α du + β dv` and
/// the separable two-variable rule applies.
fn linear_reduction(chart: &Chart, lin: &[Vec<Q>], row: &[Expr]) -> Option<Expr> {
    let n = chart.dim();
    // W = {c : row·c ≡ 0, g·c = 0 for every known gradient g}
    let mut eqs: BTreeMap<_, Vec<Q>> = BTreeMap::new();
    for (i, a) in row.iter().enumerate() {
        for (key, q) in a.coefficient_map()? {
            eqs.entry(key).or_insert_with(|| alloc::vec![Q::zero(); n])[i] = q;
        }
    }
    let mut eqs: Vec<Vec<Q>> = eqs.into_values().collect();
    eqs.extend(lin.iter().cloned());
    let w = qmat::nullspace(&eqs, n);
    let span = if w.is_empty() { (0..n).map(|i| unit(n, i)).collect() } else { qmat::nullspace(&w, n) };
    // Basis rows: known gradients, then u and v, then unit vectors.
    let mut rows: Vec<Vec<Q>> = Vec::new();
    let push = |rows: &mut Vec<Vec<Q>>, v: &Vec<Q>| {
        let mut t = rows.clone();
        t.push(v.clone());
        if qmat::rank(&t) > rows.len() {
            rows.push(v.clone());
            true
        } else {
            false
        }
    };
    for g in lin {
        push(&mut rows, g);
    }
    let m = rows.len();
    // Prefer v along the directions in which the row varies, so that the
    // coefficient of du comes out constant.
    let mut deqs: BTreeMap<_, Vec<Q>> = BTreeMap::new();
    for (i, a) in row.iter().enumerate() {
        for x in chart.coords() {
            for (key, q) in a.diff(x).coefficient_map()? {
                deqs.entry((x.clone(), key)).or_insert_with(|| alloc::vec![Q::zero(); n])[i] = q;
            }
        }
    }
    let mut deqs: Vec<Vec<Q>> = deqs.into_values().collect();
    deqs.extend(lin.iter().cloned());
    let dw = qmat::nullspace(&deqs, n);
    let varying = if dw.is_empty() { Vec::new() } else { qmat::nullspace(&dw, n) };
    let mut first = rows.clone();
    let mut v_dir = None;
    for v in &varying {
        if push(&mut first, v) {
            v_dir = Some(v.clone());
            break;
        }
    }
    for v in &span {
        if rows.len() == m + 1 {
            break;
        }
        let mut t = rows.clone();
        if let Some(d) = &v_dir {
            t.push(d.clone());
        }
        if push(&mut t, v) {
            rows.push(v.clone());
        }
    }
    if let Some(d) = v_dir {
        push(&mut rows, &d);
    }
    for v in &span {
        push(&mut rows, v);
    }
    if rows.len() != m + 2 {
        return None;
    }
    for i in 0..n {
        push(&mut rows, &unit(n, i));
    }
    let inv = q_inverse(&rows)?;
    let taken: Vec<Symbol> = chart.symbols().cloned().collect();
    let w: Vec<Symbol> = (0..n).map(|i| Symbol::new(&fresh_name(&format!("w{}", i + 1), &taken))).collect();
    // y = inv · w and w = rows · y
    let lin_comb = |coefs: &[Q], syms: &[Symbol]| {
        let mut e = Expr::zero();
        for (q, s) in coefs.iter().zip(syms) {
            if !q.is_zero() {
                e = e.add(&Expr::sym(s).scale(q));
            }
        }
        e
    };
    let to_w: BTreeMap<Symbol, Expr> = (0..n).map(|i| (chart.coord(i).clone(), lin_comb(&inv[i], &w))).collect();
    let to_y: BTreeMap<Symbol, Expr> = (0..n).map(|j| (w[j].clone(), lin_comb(&rows[j], chart.coords()))).collect();
    // components of the row in the dual basis: coef_j = Σ_i row_i inv[i][j]
    let coef = |j: usize| {
        let mut e = Expr::zero();
        for i in 0..n {
            if !inv[i][j].is_zero() && !row[i].is_zero() {
                e = e.add(&row[i].scale(&inv[i][j]));
            }
        }
        e.subs(&to_w)
    };
    let (alpha, beta) = (coef(m), coef(m + 1));
    let allowed = |e: &Expr| e.free_symbols().iter().all(|s| w[..m + 2].contains(s) || chart.params().contains(s));
    if !allowed(&alpha) || !allowed(&beta) {
        return None;
    }
    let f = solve_2d(&alpha, &beta, &w[m], &w[m + 1])?;
    Some(f.subs(&to_y))
}

fn unit(n: usize, i: usize) -> Vec<Q> {
    (0..n).map(|j| if i == j { q_int(1) } else { Q::zero() }).collect()
}

fn q_inverse(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m.iter().enumerate().map(|(i, r)| r.iter().cloned().chain(unit(n, i)).collect()).collect();
    let piv = qmat::rref(&mut a);
    if piv.len() != n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Integrate a row of C as a closed form, freezing coordinates whose
/// differentials lie in C (they are first integrals).
fn quadrature(chart: &Chart, c: &Codistribution, row: &[Expr]) -> Option<Expr> {
    let n = chart.dim();
    let frozen: Vec<bool> = (0..n).map(|i| c.contains(&OneForm::basis(chart, i))).collect();
    let active: Vec<usize> = (0..n).filter(|&i| !frozen[i] && !row[i].is_zero()).collect();
    if active.is_empty() {
        return None;
    }
    let mut f = Expr::zero();
    for (pos, &i) in active.iter().enumerate() {
        let xi = chart.coord(i);
        let r = row[i].sub(&f.diff(xi));
        if active[..pos].iter().any(|&j| r.depends_on(chart.coord(j))) {
            return None;
        }
        f = f.add(&antiderivative(&r, xi)?);
    }
    Some(f)
}

/// Antiderivative in `x`, treating every other symbol as a constant.
///
/// The integrand is split into x-free coefficients times pieces in x alone;
/// each piece is matched against a dictionary of candidates built from its
/// atoms and verified by differentiation.
pub fn antiderivative(e: &Expr, x: &Symbol) -> Option<Expr> {
    if let Some(f) = antiderivative_q(e, x) {
        return Some(f);
    }
    let mut groups: BTreeMap<(Vec<Expr>, Mono, Poly), Expr> = BTreeMap::new();
    for (sins, r) in e.terms() {
        let den = r.den();
        if den.atoms().iter().any(|a| a.depends_on(x)) && den.atoms().iter().any(|a| !a.depends_on(x)) {
            return None;
        }
        let (sx, s0): (Vec<Expr>, Vec<Expr>) = sins.iter().cloned().partition(|u| u.depends_on(x));
        let xden = den.atoms().iter().any(|a| a.depends_on(x));
        for (m, q) in r.num().terms() {
            let (mut mx, mut m0) = (Mono::one(), Mono::one());
            for (a, k) in m.factors() {
                if a.depends_on(x) {
                    mx = mx.mul(&Mono::var(a.clone(), *k));
                } else {
                    m0 = m0.mul(&Mono::var(a.clone(), *k));
                }
            }
            let mut piece = Expr::from_poly(Poly::monomial(mx, q.clone()));
            for u in &sx {
                piece = piece.mul(&Expr::sin(u));
            }
            let key_den = if xden {
                piece = piece.checked_div(&Expr::from_poly(den.clone()))?;
                Poly::one()
            } else {
                den.clone()
            };
            let slot = groups.entry((s0.clone(), m0, key_den)).or_insert_with(Expr::zero);
            *slot = slot.add(&piece);
        }
    }
    let mut f = Expr::zero();
    for ((s0, m0, den), g) in groups {
        let mut coef = Expr::from_poly(Poly::monomial(m0, q_int(1))).checked_div(&Expr::from_poly(den))?;
        for u in &s0 {
            coef = coef.mul(&Expr::sin(u));
        }
        f = f.add(&coef.mul(&antiderivative_q(&g, x)?));
    }
    (f.diff(x) == *e).then_some(f)
}

/// Antiderivative in `x` by matching against a dictionary of candidate
/// terms built from the atoms of `e`; verified by differentiation.
fn antiderivative_q(e: &Expr, x: &Symbol) -> Option<Expr> {
    if e.is_zero() {
        return Some(Expr::zero());
    }
    let xe = Expr::sym(x);
    let xa = Atom::sym(x.clone());
    let mut dict: Vec<Expr> = Vec::new();
    let deg = e.terms().iter().map(|(_, r)| r.num().degree_in(&xa) + 1).max().unwrap_or(1) as i64;
    for p in -4..=deg.max(1) {
        if p != 0 {
            dict.push(xe.pow(p)?);
        }
    }
    if let Some(l) = Expr::ln(&xe) {
        dict.push(l);
    }
    let den = e.common_denominator();
    if den.degree_in(&xa) == 1 && den.atoms().len() == 1 {
        dict.extend(Expr::ln(&Expr::from_poly(den)));
    }
    let mut args: Vec<(bool, Expr)> = Vec::new();
    for a in e.atoms() {
        match a.kind() {
            AtomKind::Exp(u) if u.depends_on(x) => args.push((true, u.clone())),
            AtomKind::Cos(u) if u.depends_on(x) => args.push((false, u.clone())),
            _ => {}
        }
    }
    for (s, _) in e.terms() {
        for u in s {
            if u.depends_on(x) {
                args.push((false, u.clone()));
            }
        }
    }
    args.sort_by(|a, b| a.1.to_string_canonical().cmp(&b.1.to_string_canonical()).then(a.0.cmp(&b.0)));
    args.dedup_by(|a, b| a.0 == b.0 && a.1 == b.1);
    for (is_exp, u) in &args {
        let base: Vec<Expr> = if *is_exp {
            (-3..=3).filter(|&p| p != 0).map(|p| Expr::exp(&u.scale(&q_int(p)))).collect()
        } else {
            alloc::vec![Expr::sin(u), Expr::cos(u)]
        };
        for b in base {
            dict.push(xe.mul(&b));
            dict.push(b);
        }
    }
    let derivs: Vec<Expr> = dict.iter().map(|b| b.diff(x)).collect();
    let mut l = e.common_denominator();
    for d in &derivs {
        let c = d.common_denominator();
        if !c.is_one() {
            l = lcm(&l, &c);
        }
    }
    let le = Expr::from_poly(l);
    let target = e.mul(&le).coefficient_map()?;
    let cols: Vec<_> = derivs.iter().map(|d| d.mul(&le).coefficient_map()).collect::<Option<Vec<_>>>()?;
    let mut keys: Vec<_> = target.keys().cloned().collect();
    for c in &cols {
        keys.extend(c.keys().cloned());
    }
    keys.sort();
    keys.dedup();
    let n = dict.len();
    // Rows: one per key, columns: dictionary terms then the target.
    let mut m: Vec<Vec<Q>> = keys
        .iter()
        .map(|k| {
            let mut row: Vec<Q> = cols.iter().map(|c| c.get(k).cloned().unwrap_or_else(Q::zero)).collect();
            row.push(target.get(k).cloned().unwrap_or_else(Q::zero));
            row
        })
        .collect();
    let piv = qmat::rref(&mut m);
    if piv.last() == Some(&n) {
        return None;
    }
    let mut f = Expr::zero();
    for (r, &c) in piv.iter().enumerate() {
        if !m[r][n].is_zero() {
            f = f.add(&dict[c].scale(&m[r][n]));
        }
    }
    (f.diff(x) == *e).then_some(f)
}

