//! Sparse multivariate polynomials over Q in lexicographic order.

use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::atom::Atom;

pub type Q = BigRational;

pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// A power product of atoms, sorted by atom.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Mono(pub(crate) Vec<(Atom, u32)>);

impl Mono {
    pub fn one() -> Self {
        Mono(Vec::new())
    }

    pub fn var(a: Atom, e: u32) -> Self {
        if e == 0 {
            Mono::one()
        } else {
            Mono(alloc::vec![(a, e)])
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(Atom, u32)] {
        &self.0
    }

    pub fn degree_in(&self, a: &Atom) -> u32 {
        match self.0.binary_search_by(|(b, _)| b.cmp(a)) {
            Ok(i) => self.0[i].1,
            Err(_) => 0,
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        if o.is_one() {
            return self.clone();
        }
        if self.is_one() {
            return o.clone();
        }
        let mut out = Vec::with_capacity(self.0.len() + o.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < o.0.len() {
            match self.0[i].0.cmp(&o.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(o.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + o.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&o.0[j..]);
        Mono(out)
    }

    /// `self / o` if `o` divides `self`.
    pub fn div(&self, o: &Mono) -> Option<Mono> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for (a, e) in &self.0 {
            if j < o.0.len() && o.0[j].0 == *a {
                let f = o.0[j].1;
                if f > *e {
                    return None;
                }
                if f < *e {
                    out.push((a.clone(), e - f));
                }
                j += 1;
            } else {
                if j < o.0.len() && o.0[j].0 < *a {
                    return None;
                }
                out.push((a.clone(), *e));
            }
        }
        if j < o.0.len() {
            return None;
        }
        Some(Mono(out))
    }

    pub fn gcd(&self, o: &Mono) -> Mono {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < o.0.len() {
            match self.0[i].0.cmp(&o.0[j].0) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1.min(o.0[j].1)));
                    i += 1;
                    j += 1;
                }
            }
        }
        Mono(out)
    }

    pub fn without(&self, a: &Atom) -> Mono {
        Mono(self.0.iter().filter(|(b, _)| b != a).cloned().collect())
    }
}

/// Lexicographic order; smaller atoms are more significant.
pub fn lex_cmp(a: &Mono, b: &Mono) -> Ordering {
    let (mut i, mut j) = (0, 0);
    loop {
        match (a.0.get(i), b.0.get(j)) {
            (None, None) => return Ordering::Equal,
            (Some(_), None) => return Ordering::Greater,
            (None, Some(_)) => return Ordering::Less,
            (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
                Ordering::Equal => {
                    if ea != eb {
                        return ea.cmp(eb);
                    }
                    i += 1;
                    j += 1;
                }
            },
        }
    }
}

/// Terms are kept strictly decreasing in [`lex_cmp`] with nonzero coefficients.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Poly {
    pub(crate) terms: Vec<(Mono, Q)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Q::one())
    }

    pub fn constant(q: Q) -> Self {
        if q.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: alloc::vec![(Mono::one(), q)] }
        }
    }

    pub fn atom(a: Atom) -> Self {
        Poly { terms: alloc::vec![(Mono::var(a, 1), Q::one())] }
    }

    pub fn monomial(m: Mono, q: Q) -> Self {
        if q.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: alloc::vec![(m, q)] }
        }
    }

    /// Build from unsorted terms, combining duplicates.
    pub fn from_terms(mut t: Vec<(Mono, Q)>) -> Self {
        t.sort_by(|a, b| lex_cmp(&b.0, &a.0));
        let mut out: Vec<(Mono, Q)> = Vec::with_capacity(t.len());
        for (m, q) in t {
            if let Some(last) = out.last_mut() {
                if last.0 == m {
                    last.1 += q;
                    continue;
                }
            }
            out.push((m, q));
        }
        out.retain(|(_, q)| !q.is_zero());
        Poly { terms: out }
    }

    pub fn terms(&self) -> &[(Mono, Q)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 if self.terms[0].0.is_one() => Some(self.terms[0].1.clone()),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn leading(&self) -> Option<&(Mono, Q)> {
        self.terms.first()
    }

    pub fn lc(&self) -> Q {
        self.terms.first().map(|t| t.1.clone()).unwrap_or_else(Q::zero)
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, q)| (m.clone(), -q)).collect() }
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        if c.is_one() {
            return self.clone();
        }
        Poly { terms: self.terms.iter().map(|(m, q)| (m.clone(), q * c)).collect() }
    }

    pub fn mul_term(&self, m: &Mono, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(n, q)| (n.mul(m), q * c)).collect() }
    }

    fn merge(&self, o: &Poly, negate: bool) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &o.terms);
        while i < a.len() && j < b.len() {
            match lex_cmp(&a[i].0, &b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let q = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), q));
                    j += 1;
                }
                Ordering::Equal => {
                    let q = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !q.is_zero() {
                        out.push((a[i].0.clone(), q));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        for t in &b[j..] {
            let q = if negate { -&t.1 } else { t.1.clone() };
            out.push((t.0.clone(), q));
        }
        Poly { terms: out }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        self.merge(o, false)
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        if o.is_zero() {
            return self.clone();
        }
        self.merge(o, true)
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = o.as_constant() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_constant() {
            return o.scale(&c);
        }
        let (small, big) = if self.len() <= o.len() { (self, o) } else { (o, self) };
        if small.len() == 1 {
            return big.mul_term(&small.terms[0].0, &small.terms[0].1);
        }
        let mut acc = Vec::with_capacity(self.len() * o.len());
        for (m, q) in &self.terms {
            for (n, r) in &o.terms {
                acc.push((m.mul(n), q * r));
            }
        }
        Poly::from_terms(acc)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one();
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
        out
    }

    /// Exact division; `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        let (dm, dq) = d.leading().unwrap();
        if d.len() == 1 {
            let inv = dq.recip();
            let mut terms = Vec::with_capacity(self.len());
            for (m, q) in &self.terms {
                terms.push((m.div(dm)?, q * &inv));
            }
            return Some(Poly { terms });
        }
        let mut r = self.clone();
        let mut quo: Vec<(Mono, Q)> = Vec::new();
        while let Some((rm, rq)) = r.leading() {
            let m = rm.div(dm)?;
            let c = rq / dq;
            r = r.sub(&d.mul_term(&m, &c));
            quo.push((m, c));
        }
        Some(Poly { terms: quo })
    }

    pub fn degree_in(&self, a: &Atom) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree_in(a)).max().unwrap_or(0)
    }

    /// Distinct atoms occurring, sorted.
    pub fn atoms(&self) -> Vec<Atom> {
        let mut v: Vec<Atom> = Vec::new();
        for (m, _) in &self.terms {
            for (a, _) in &m.0 {
                v.push(a.clone());
            }
        }
        v.sort();
        v.dedup();
        v
    }

    pub fn contains_atom(&self, a: &Atom) -> bool {
        self.terms.iter().any(|(m, _)| m.degree_in(a) > 0)
    }

    /// Coefficients as a polynomial in `a`, indexed by degree.
    pub fn coeffs_in(&self, a: &Atom) -> Vec<Poly> {
        let deg = self.degree_in(a) as usize;
        let mut buckets: Vec<Vec<(Mono, Q)>> = alloc::vec![Vec::new(); deg + 1];
        for (m, q) in &self.terms {
            let e = m.degree_in(a) as usize;
            let rest = if e == 0 { m.clone() } else { m.without(a) };
            buckets[e].push((rest, q.clone()));
        }
        // Within one bucket every monomial carries the same power of `a`,
        // so dropping it keeps the lex order intact.
        buckets.into_iter().map(|terms| Poly { terms }).collect()
    }

    pub fn from_coeffs(a: &Atom, cs: &[Poly]) -> Poly {
        let mut acc = Vec::new();
        for (e, c) in cs.iter().enumerate() {
            let m = Mono::var(a.clone(), e as u32);
            for (n, q) in &c.terms {
                acc.push((n.mul(&m), q.clone()));
            }
        }
        Poly::from_terms(acc)
    }

    /// Partial derivative with respect to an atom treated as an indeterminate.
    pub fn deriv_atom(&self, a: &Atom) -> Poly {
        let mut acc = Vec::new();
        for (m, q) in &self.terms {
            let e = m.degree_in(a);
            if e == 0 {
                continue;
            }
            let mut f = m.0.clone();
            let i = f.iter().position(|(b, _)| b == a).unwrap();
            if e == 1 {
                f.remove(i);
            } else {
                f[i].1 -= 1;
            }
            acc.push((Mono(f), q * q_int(e as i64)));
        }
        Poly::from_terms(acc)
    }

    /// Largest monomial dividing every term.
    pub fn mono_content(&self) -> Mono {
        let mut it = self.terms.iter();
        let mut g = match it.next() {
            Some((m, _)) => m.clone(),
            None => return Mono::one(),
        };
        for (m, _) in it {
            if g.is_one() {
                break;
            }
            g = g.gcd(m);
        }
        g
    }

    pub fn is_negative_lc(&self) -> bool {
        self.terms.first().map(|t| t.1.is_negative()).unwrap_or(false)
    }

    /// Make the leading coefficient 1.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some((_, q)) if q.is_one() => self.clone(),
            Some((_, q)) => self.scale(&q.recip()),
        }
    }

    pub fn eval_f64(&self, val: &mut dyn FnMut(&Atom) -> f64) -> f64 {
        let mut s = 0.0;
        for (m, q) in &self.terms {
            let mut t = q_to_f64(q);
            for (a, e) in &m.0 {
                t *= powi(val(a), *e);
            }
            s += t;
        }
        s
    }

    /// Substitute atoms by polynomials.
    pub fn compose(&self, f: &mut dyn FnMut(&Atom) -> Poly) -> Poly {
        let mut acc = Poly::zero();
        for (m, q) in &self.terms {
            let mut t = Poly::constant(q.clone());
            for (a, e) in &m.0 {
                t = t.mul(&f(a).pow(*e));
            }
            acc = acc.add(&t);
        }
        acc
    }
}

pub fn powi(x: f64, e: u32) -> f64 {
    let mut r = 1.0;
    for _ in 0..e {
        r *= x;
    }
    r
}

pub fn q_to_f64(q: &Q) -> f64 {
    use num_traits::ToPrimitive;
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => q.to_f64().unwrap_or(f64::NAN),
    }
}
