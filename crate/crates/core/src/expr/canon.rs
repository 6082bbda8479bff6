//! Canonical expressions.
//!
//! An expression is `Σ_S A_S · Π_{u ∈ S} sin(u)` where each `A_S` is a reduced
//! rational function in symbols and the kernels exp, cos, ln, and `S` ranges
//! over sets of distinct sine arguments. Squares of sines are rewritten as
//! `1 - cos²`, so the representation is unique.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::ops;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::atom::{Atom, AtomKind};
use super::gcd::gcd;
use super::poly::{q_int, Mono, Poly, Q};
use super::ratfunc::RatFunc;
use super::symbol::Symbol;

pub type SinSet = Vec<Expr>;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Expr(Arc<[(SinSet, RatFunc)]>);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalError {
    Unbound(String),
    Singular(String),
}

impl Expr {
    fn from_terms(t: Vec<(SinSet, RatFunc)>) -> Self {
        Expr(t.into())
    }

    fn from_ratfunc(r: RatFunc) -> Self {
        if r.is_zero() {
            Expr::zero()
        } else {
            Expr::from_terms(alloc::vec![(Vec::new(), r)])
        }
    }

    pub fn zero() -> Self {
        Expr::from_terms(Vec::new())
    }

    pub fn one() -> Self {
        Expr::from_ratfunc(RatFunc::one())
    }

    pub fn int(n: i64) -> Self {
        Expr::rational(q_int(n))
    }

    pub fn rational(q: Q) -> Self {
        Expr::from_ratfunc(RatFunc::constant(q))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Expr::rational(Q::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn sym(s: &Symbol) -> Self {
        Expr::atom(Atom::sym(s.clone()))
    }

    pub fn atom(a: Atom) -> Self {
        Expr::from_ratfunc(RatFunc::from_poly(Poly::atom(a)))
    }

    pub fn terms(&self) -> &[(SinSet, RatFunc)] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0[0].0.is_empty() && self.0[0].1.is_one()
    }

    /// The value, if this is a rational constant.
    pub fn as_rational(&self) -> Option<Q> {
        match self.0.len() {
            0 => Some(Q::zero()),
            1 if self.0[0].0.is_empty() => self.0[0].1.as_constant(),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_rational().is_some()
    }

    /// The underlying rational function when no sine factors occur.
    pub fn as_ratfunc(&self) -> Option<RatFunc> {
        match self.0.len() {
            0 => Some(RatFunc::zero()),
            1 if self.0[0].0.is_empty() => Some(self.0[0].1.clone()),
            _ => None,
        }
    }

    /// Sign of the leading coefficient (used for kernel normalization).
    pub fn leading_is_negative(&self) -> bool {
        self.0.first().map(|(_, r)| r.num.is_negative_lc()).unwrap_or(false)
    }

    pub fn neg(&self) -> Expr {
        Expr::from_terms(self.0.iter().map(|(s, r)| (s.clone(), r.neg())).collect())
    }

    pub fn scale(&self, c: &Q) -> Expr {
        if c.is_zero() {
            return Expr::zero();
        }
        Expr::from_terms(self.0.iter().map(|(s, r)| (s.clone(), r.scale(c))).collect())
    }

    pub fn add(&self, o: &Expr) -> Expr {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.0.len() == 1 && o.0.len() == 1 && self.0[0].0 == o.0[0].0 {
            let r = self.0[0].1.add(&o.0[0].1);
            if r.is_zero() {
                return Expr::zero();
            }
            return Expr::from_terms(alloc::vec![(self.0[0].0.clone(), r)]);
        }
        let mut out = Vec::with_capacity(self.0.len() + o.0.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.0, &o.0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                core::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                core::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                core::cmp::Ordering::Equal => {
                    let r = a[i].1.add(&b[j].1);
                    if !r.is_zero() {
                        out.push((a[i].0.clone(), r));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Expr::from_terms(out)
    }

    pub fn sub(&self, o: &Expr) -> Expr {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Expr) -> Expr {
        if self.is_zero() || o.is_zero() {
            return Expr::zero();
        }
        if self.0.len() == 1 && o.0.len() == 1 && self.0[0].0.is_empty() && o.0[0].0.is_empty() {
            return Expr::from_ratfunc(self.0[0].1.mul(&o.0[0].1));
        }
        let mut acc: BTreeMap<SinSet, RatFunc> = BTreeMap::new();
        for (s, a) in self.0.iter() {
            for (t, b) in o.0.iter() {
                let (set, squares) = sin_product(s, t);
                let mut c = a.mul(b);
                for u in &squares {
                    c = c.mul(&one_minus_cos_sq(u));
                }
                let e = acc.entry(set).or_insert_with(RatFunc::zero);
                *e = e.add(&c);
            }
        }
        Expr::from_terms(acc.into_iter().filter(|(_, r)| !r.is_zero()).collect())
    }

    pub fn inv(&self) -> Option<Expr> {
        if self.is_zero() {
            return None;
        }
        if self.0.len() == 1 {
            let (s, a) = &self.0[0];
            let ai = a.inv()?;
            if s.is_empty() {
                return Some(Expr::from_ratfunc(ai));
            }
            // 1/(A Π sin) = Π sin / (A Π (1 - cos²))
            let mut d = RatFunc::one();
            for u in s {
                d = d.mul(&one_minus_cos_sq(u));
            }
            let c = ai.mul(&d.inv()?);
            return Some(Expr::from_terms(alloc::vec![(s.clone(), c)]));
        }
        // Split on one sine: e = P + Q sin(u); e⁻¹ = (P - Q sin(u)) / (P² - Q²(1 - cos²u)).
        let u = self.0.iter().flat_map(|(s, _)| s.iter()).min()?.clone();
        let (mut p, mut q) = (Vec::new(), Vec::new());
        for (s, a) in self.0.iter() {
            match s.binary_search(&u) {
                Ok(i) => {
                    let mut s2 = s.clone();
                    s2.remove(i);
                    q.push((s2, a.clone()));
                }
                Err(_) => p.push((s.clone(), a.clone())),
            }
        }
        q.sort_by(|x, y| x.0.cmp(&y.0));
        let (p, q) = (Expr::from_terms(p), Expr::from_terms(q));
        let conj = p.sub(&q.mul(&Expr::sin(&u)));
        let norm = p.mul(&p).sub(&q.mul(&q).mul(&Expr::from_ratfunc(one_minus_cos_sq(&u))));
        Some(conj.mul(&norm.inv()?))
    }

    pub fn checked_div(&self, o: &Expr) -> Option<Expr> {
        if let Some(c) = o.as_rational() {
            if c.is_zero() {
                return None;
            }
            return Some(self.scale(&c.recip()));
        }
        Some(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: i64) -> Option<Expr> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        if self.0.len() == 1 && self.0[0].0.is_empty() {
            return Some(Expr::from_ratfunc(self.0[0].1.pow(e as u32)));
        }
        let mut out = Expr::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Some(out)
    }

    pub fn exp(u: &Expr) -> Expr {
        if u.is_zero() {
            return Expr::one();
        }
        if let Some(r) = u.as_ratfunc() {
            if r.is_poly() {
                // One atom per monomial: exp(c·m) = exp(m/den c)^(num c).
                let (mut num, mut den) = (Mono::one(), Mono::one());
                for (m, c) in r.num.terms() {
                    let base_q = Q::new(BigInt::one(), c.denom().clone());
                    let base = Expr::from_ratfunc(RatFunc::from_poly(Poly::monomial(m.clone(), base_q)));
                    let a = Atom::new(AtomKind::Exp(base));
                    let k: BigInt = c.numer().clone();
                    let e = u32::try_from(k.abs()).expect("exponent overflow");
                    if k.is_positive() {
                        num = num.mul(&Mono::var(a, e));
                    } else {
                        den = den.mul(&Mono::var(a, e));
                    }
                }
                return Expr::from_ratfunc(RatFunc {
                    num: Poly::monomial(num, Q::one()),
                    den: Poly::monomial(den, Q::one()),
                });
            }
        }
        if u.leading_is_negative() {
            let a = Expr::atom(Atom::new(AtomKind::Exp(u.neg())));
            a.inv().unwrap()
        } else {
            Expr::atom(Atom::new(AtomKind::Exp(u.clone())))
        }
    }

    pub fn cos(u: &Expr) -> Expr {
        if u.is_zero() {
            return Expr::one();
        }
        let arg = if u.leading_is_negative() { u.neg() } else { u.clone() };
        Expr::atom(Atom::new(AtomKind::Cos(arg)))
    }

    pub fn sin(u: &Expr) -> Expr {
        if u.is_zero() {
            return Expr::zero();
        }
        if u.leading_is_negative() {
            return Expr::sin(&u.neg()).neg();
        }
        Expr::from_terms(alloc::vec![(alloc::vec![u.clone()], RatFunc::one())])
    }

    pub fn tan(u: &Expr) -> Expr {
        Expr::sin(u).checked_div(&Expr::cos(u)).expect("cos is a nonzero kernel")
    }

    pub fn ln(u: &Expr) -> Option<Expr> {
        if u.is_zero() {
            return None;
        }
        if u.is_one() {
            return Some(Expr::zero());
        }
        Some(Expr::atom(Atom::new(AtomKind::Ln(u.clone()))))
    }

    /// All atoms occurring at the top level (not inside kernel arguments).
    pub fn atoms(&self) -> Vec<Atom> {
        let mut v = Vec::new();
        for (_, r) in self.0.iter() {
            v.extend(r.num.atoms());
            v.extend(r.den.atoms());
        }
        v.sort();
        v.dedup();
        v
    }

    /// Sorted list of symbols the expression depends on.
    pub fn free_symbols(&self) -> Vec<Symbol> {
        let mut v: Vec<Symbol> = Vec::new();
        for (s, r) in self.0.iter() {
            for p in [&r.num, &r.den] {
                for (m, _) in p.terms() {
                    for (a, _) in m.factors() {
                        v.extend(a.symbols().iter().cloned());
                    }
                }
            }
            for u in s {
                v.extend(u.free_symbols());
            }
        }
        v.sort();
        v.dedup();
        v
    }

    pub fn depends_on(&self, x: &Symbol) -> bool {
        self.0.iter().any(|(s, r)| {
            poly_depends(&r.num, x) || poly_depends(&r.den, x) || s.iter().any(|u| u.depends_on(x))
        })
    }

    /// Exact partial derivative.
    pub fn diff(&self, x: &Symbol) -> Expr {
        let mut out = Expr::zero();
        for (s, a) in self.0.iter() {
            let da = diff_ratfunc(a, x);
            let sp = sin_prod(s);
            if !da.is_zero() {
                out = out.add(&da.mul(&sp));
            }
            for (i, u) in s.iter().enumerate() {
                if !u.depends_on(x) {
                    continue;
                }
                let mut rest = s.clone();
                rest.remove(i);
                let t = Expr::from_terms(alloc::vec![(rest, a.clone())])
                    .mul(&Expr::cos(u))
                    .mul(&u.diff(x));
                out = out.add(&t);
            }
        }
        out
    }

    /// Floating-point value. `env` supplies symbol values.
    pub fn eval(&self, env: &dyn Fn(&Symbol) -> Option<f64>) -> Result<f64, EvalError> {
        let mut cache: BTreeMap<Atom, f64> = BTreeMap::new();
        self.eval_cached(env, &mut cache)
    }

    fn eval_cached(&self, env: &dyn Fn(&Symbol) -> Option<f64>, cache: &mut BTreeMap<Atom, f64>) -> Result<f64, EvalError> {
        let mut total = 0.0;
        for (s, r) in self.0.iter() {
            let n = eval_poly(&r.num, env, cache)?;
            let d = eval_poly(&r.den, env, cache)?;
            if libm::fabs(d) < 1e-12 {
                return Err(EvalError::Singular(alloc::format!("denominator {} vanishes", r.den)));
            }
            let mut t = n / d;
            for u in s {
                t *= libm::sin(u.eval_cached(env, cache)?);
            }
            total += t;
        }
        Ok(total)
    }

    /// Simultaneous substitution of symbols.
    pub fn subs(&self, map: &BTreeMap<Symbol, Expr>) -> Expr {
        if map.is_empty() || !self.free_symbols().iter().any(|s| map.contains_key(s)) {
            return self.clone();
        }
        let mut cache: BTreeMap<Atom, Expr> = BTreeMap::new();
        let mut out = Expr::zero();
        for (s, r) in self.0.iter() {
            let n = subs_poly(&r.num, map, &mut cache);
            let d = subs_poly(&r.den, map, &mut cache);
            let mut t = n.checked_div(&d).expect("substitution made a denominator vanish");
            for u in s {
                t = t.mul(&Expr::sin(&u.subs(map)));
            }
            out = out.add(&t);
        }
        out
    }

    /// Clear denominators: returns (numerator expression, common denominator)
    /// with `self = numerator / denominator`.
    pub fn common_denominator(&self) -> Poly {
        let mut l = Poly::one();
        for (_, r) in self.0.iter() {
            if !r.den.is_one() {
                l = super::gcd::lcm(&l, &r.den);
            }
        }
        l
    }

    /// For an expression with polynomial coefficients, the map from
    /// (sine set, monomial) to rational coefficient.
    pub fn coefficient_map(&self) -> Option<BTreeMap<(SinSet, Mono), Q>> {
        let mut out = BTreeMap::new();
        for (s, r) in self.0.iter() {
            if !r.den.is_one() {
                return None;
            }
            for (m, q) in r.num.terms() {
                out.insert((s.clone(), m.clone()), q.clone());
            }
        }
        Some(out)
    }

    pub fn from_poly(p: Poly) -> Expr {
        Expr::from_ratfunc(RatFunc::from_poly(p))
    }

    /// Number of stored polynomial terms (a size measure for pivoting).
    pub fn size(&self) -> usize {
        self.0.iter().map(|(s, r)| r.num.len() + r.den.len() + s.len()).sum()
    }

    pub fn to_string_canonical(&self) -> String {
        self.to_string()
    }
}

fn poly_depends(p: &Poly, x: &Symbol) -> bool {
    p.terms().iter().any(|(m, _)| m.factors().iter().any(|(a, _)| a.depends_on(x)))
}

/// Product of two sine sets: (symmetric difference, intersection).
fn sin_product(s: &SinSet, t: &SinSet) -> (SinSet, Vec<Expr>) {
    if s.is_empty() {
        return (t.clone(), Vec::new());
    }
    if t.is_empty() {
        return (s.clone(), Vec::new());
    }
    let (mut set, mut sq) = (Vec::new(), Vec::new());
    let (mut i, mut j) = (0, 0);
    while i < s.len() && j < t.len() {
        match s[i].cmp(&t[j]) {
            core::cmp::Ordering::Less => {
                set.push(s[i].clone());
                i += 1;
            }
            core::cmp::Ordering::Greater => {
                set.push(t[j].clone());
                j += 1;
            }
            core::cmp::Ordering::Equal => {
                sq.push(s[i].clone());
                i += 1;
                j += 1;
            }
        }
    }
    set.extend_from_slice(&s[i..]);
    set.extend_from_slice(&t[j..]);
    (set, sq)
}

fn cos_atom(u: &Expr) -> Atom {
    Atom::new(AtomKind::Cos(u.clone()))
}

fn one_minus_cos_sq(u: &Expr) -> RatFunc {
    let c = Poly::monomial(Mono::var(cos_atom(u), 2), Q::one());
    RatFunc::from_poly(Poly::one().sub(&c))
}

fn sin_prod(s: &SinSet) -> Expr {
    if s.is_empty() {
        Expr::one()
    } else {
        Expr::from_terms(alloc::vec![(s.clone(), RatFunc::one())])
    }
}

fn atom_diff(a: &Atom, x: &Symbol) -> Expr {
    match a.kind() {
        AtomKind::Sym(s) => {
            if s == x {
                Expr::one()
            } else {
                Expr::zero()
            }
        }
        AtomKind::Exp(u) => Expr::atom(a.clone()).mul(&u.diff(x)),
        AtomKind::Cos(u) => Expr::sin(u).neg().mul(&u.diff(x)),
        AtomKind::Ln(u) => u.diff(x).checked_div(u).expect("ln argument is nonzero"),
    }
}

fn diff_ratfunc(r: &RatFunc, x: &Symbol) -> Expr {
    let mut atoms: Vec<Atom> = r.num.atoms();
    atoms.extend(r.den.atoms());
    atoms.sort();
    atoms.dedup();
    atoms.retain(|a| a.depends_on(x));
    if atoms.is_empty() {
        return Expr::zero();
    }
    let mut out = Expr::zero();
    for a in &atoms {
        let dn = r.num.deriv_atom(a);
        let dd = r.den.deriv_atom(a);
        // With g = gcd(den, den'), only factors of g free of `a` can cancel
        // against the numerator, so the reduction never touches den^2.
        let g = gcd(&r.den, &dd);
        let (d1, dd1) = if g.is_one() || g.is_zero() {
            (r.den.clone(), dd)
        } else {
            (r.den.div_exact(&g).unwrap(), dd.div_exact(&g).unwrap())
        };
        let n = dn.mul(&d1).sub(&r.num.mul(&dd1));
        if n.is_zero() {
            continue;
        }
        let den = d1.mul(&r.den);
        let h = if g.is_constant() || g.is_zero() { Poly::one() } else { gcd(&n, &g) };
        let (n, den) = if h.is_one() { (n, den) } else { (n.div_exact(&h).unwrap(), den.div_exact(&h).unwrap()) };
        let c = Expr::from_ratfunc(RatFunc::from_reduced(n, den));
        let da = atom_diff(a, x);
        out = out.add(&c.mul(&da));
    }
    out
}

fn eval_atom(a: &Atom, env: &dyn Fn(&Symbol) -> Option<f64>, cache: &mut BTreeMap<Atom, f64>) -> Result<f64, EvalError> {
    if let Some(v) = cache.get(a) {
        return Ok(*v);
    }
    let v = match a.kind() {
        AtomKind::Sym(s) => env(s).ok_or_else(|| EvalError::Unbound(s.name().to_string()))?,
        AtomKind::Exp(u) => libm::exp(u.eval_cached(env, cache)?),
        AtomKind::Cos(u) => libm::cos(u.eval_cached(env, cache)?),
        AtomKind::Ln(u) => {
            let w = u.eval_cached(env, cache)?;
            if w <= 0.0 {
                return Err(EvalError::Singular(alloc::format!("ln({u}) of non-positive value")));
            }
            libm::log(w)
        }
    };
    cache.insert(a.clone(), v);
    Ok(v)
}

fn eval_poly(p: &Poly, env: &dyn Fn(&Symbol) -> Option<f64>, cache: &mut BTreeMap<Atom, f64>) -> Result<f64, EvalError> {
    let mut s = 0.0;
    for (m, q) in p.terms() {
        let mut t = super::poly::q_to_f64(q);
        for (a, e) in m.factors() {
            t *= super::poly::powi(eval_atom(a, env, cache)?, *e);
        }
        s += t;
    }
    Ok(s)
}

fn subs_atom(a: &Atom, map: &BTreeMap<Symbol, Expr>, cache: &mut BTreeMap<Atom, Expr>) -> Expr {
    if let Some(v) = cache.get(a) {
        return v.clone();
    }
    let v = match a.kind() {
        AtomKind::Sym(s) => map.get(s).cloned().unwrap_or_else(|| Expr::atom(a.clone())),
        AtomKind::Exp(u) => Expr::exp(&u.subs(map)),
        AtomKind::Cos(u) => Expr::cos(&u.subs(map)),
        AtomKind::Ln(u) => Expr::ln(&u.subs(map)).expect("ln argument became zero"),
    };
    cache.insert(a.clone(), v.clone());
    v
}

fn subs_poly(p: &Poly, map: &BTreeMap<Symbol, Expr>, cache: &mut BTreeMap<Atom, Expr>) -> Expr {
    let mut out = Expr::zero();
    for (m, q) in p.terms() {
        let mut t = Expr::rational(q.clone());
        for (a, e) in m.factors() {
            let v = subs_atom(a, map, cache);
            t = t.mul(&v.pow(*e as i64).unwrap());
        }
        out = out.add(&t);
    }
    out
}

macro_rules! binop {
    ($tr:ident, $f:ident, $body:expr) => {
        impl ops::$tr<&Expr> for &Expr {
            type Output = Expr;
            fn $f(self, o: &Expr) -> Expr {
                $body(self, o)
            }
        }
        impl ops::$tr<Expr> for Expr {
            type Output = Expr;
            fn $f(self, o: Expr) -> Expr {
                $body(&self, &o)
            }
        }
        impl ops::$tr<&Expr> for Expr {
            type Output = Expr;
            fn $f(self, o: &Expr) -> Expr {
                $body(&self, o)
            }
        }
        impl ops::$tr<Expr> for &Expr {
            type Output = Expr;
            fn $f(self, o: Expr) -> Expr {
                $body(self, &o)
            }
        }
    };
}

binop!(Add, add, |a: &Expr, b: &Expr| a.add(b));
binop!(Sub, sub, |a: &Expr, b: &Expr| a.sub(b));
binop!(Mul, mul, |a: &Expr, b: &Expr| a.mul(b));
binop!(Div, div, |a: &Expr, b: &Expr| a.checked_div(b).expect("division by zero"));

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(&self)
    }
}

impl ops::Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(self)
    }
}

impl Default for Expr {
    fn default() -> Self {
        Expr::zero()
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::int(n)
    }
}
