//! Multivariate polynomial gcd over Q.
//!
//! Strategy: strip monomial content, try a modular certificate of
//! coprimality and exact division, recurse on contents when a variable
//! occurs in only one argument, and otherwise run a primitive remainder sequence in one main variable.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::atom::Atom;
use super::poly::{Mono, Poly, Q};

const P: u64 = (1u64 << 61) - 1;

/// Monic gcd. `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a == b {
        return a.monic();
    }
    let (ma, mb) = (a.mono_content(), b.mono_content());
    let gm = ma.gcd(&mb);
    let a1 = strip(a, &ma);
    let b1 = strip(b, &mb);
    let g = gcd_prim(&a1, &b1);
    g.mul_term(&gm, &Q::from_integer(1.into())).monic()
}

fn strip(p: &Poly, m: &Mono) -> Poly {
    if m.is_one() {
        p.clone()
    } else {
        p.div_exact(&Poly::monomial(m.clone(), Q::from_integer(1.into()))).unwrap()
    }
}

/// gcd of polynomials without monomial content.
fn gcd_prim(a: &Poly, b: &Poly) -> Poly {
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    let va = a.atoms();
    let vb = b.atoms();
    let shared: Vec<Atom> = va.iter().filter(|x| vb.binary_search(x).is_ok()).cloned().collect();
    if modular_coprime(a, b, &shared) {
        return Poly::one();
    }
    if a.len() <= b.len() && b.div_exact(a).is_some() {
        return a.clone();
    }
    if b.len() < a.len() && a.div_exact(b).is_some() {
        return b.clone();
    }
    if let Some(g) = gcd_linear_power(a, b, &shared).or_else(|| gcd_linear_power(b, a, &shared)) {
        return g;
    }
    if let Some(x) = va.iter().find(|x| vb.binary_search(x).is_err()) {
        return gcd_with_coeffs(b, a, x);
    }
    if let Some(x) = vb.iter().find(|x| va.binary_search(x).is_err()) {
        return gcd_with_coeffs(a, b, x);
    }
    let x = va
        .iter()
        .min_by_key(|x| a.degree_in(x) + b.degree_in(x))
        .unwrap()
        .clone();
    let (ca, pa) = content_split(a, &x);
    let (cb, pb) = content_split(b, &x);
    let gc = gcd(&ca, &cb);
    let gp = prs(pa, pb, &x);
    gc.mul(&Poly::from_coeffs(&x, &gp))
}

/// Fast path for `s = C * L^m` with `L` linear and primitive in a shared
/// variable, the shape denominators take after repeated differentiation.
fn gcd_linear_power(s: &Poly, t: &Poly, shared: &[Atom]) -> Option<Poly> {
    for x in shared {
        let sx = s.deriv_atom(x);
        if sx.is_zero() || s.degree_in(x) < 2 {
            continue;
        }
        let r = match s.div_exact(&sx) {
            Some(r) if r.degree_in(x) == 1 => r,
            _ => continue,
        };
        let cs = r.coeffs_in(x);
        if !(cs[0].is_constant() || cs[1].is_constant() || modular_coprime(&cs[0], &cs[1], &cs[1].atoms())) {
            continue;
        }
        let l = r.monic();
        let mut rest = s.clone();
        let mut m = 0;
        while let Some(q) = rest.div_exact(&l) {
            rest = q;
            m += 1;
        }
        let mut t = t.clone();
        let mut g = Poly::one();
        let mut v = 0;
        while v < m {
            match t.div_exact(&l) {
                Some(q) => {
                    t = q;
                    g = g.mul(&l);
                    v += 1;
                }
                None => break,
            }
        }
        return Some(g.mul(&gcd(&rest, &t)).monic());
    }
    None
}

/// gcd(p, q) where `x` occurs in `q` but not in `p`: p must divide every
/// coefficient of q in x.
fn gcd_with_coeffs(p: &Poly, q: &Poly, x: &Atom) -> Poly {
    let mut g = p.clone();
    for c in q.coeffs_in(x) {
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, &c);
        if g.is_constant() {
            return Poly::one();
        }
    }
    g
}

/// (content, primitive part as coefficient list) with respect to `x`.
fn content_split(p: &Poly, x: &Atom) -> (Poly, Vec<Poly>) {
    let cs = p.coeffs_in(x);
    let cont = content_of(&cs);
    if cont.is_constant() {
        let c = cont.as_constant().unwrap();
        let cs = if c == Q::from_integer(1.into()) {
            cs
        } else {
            cs.iter().map(|q| q.scale(&c.recip())).collect()
        };
        return (cont, cs);
    }
    let pp = cs.iter().map(|c| c.div_exact(&cont).expect("content divides")).collect();
    (cont, pp)
}

fn content_of(cs: &[Poly]) -> Poly {
    let mut g = Poly::zero();
    // Start from the shortest coefficient: gcds shrink fastest that way.
    let mut idx: Vec<usize> = (0..cs.len()).filter(|&i| !cs[i].is_zero()).collect();
    idx.sort_by_key(|&i| cs[i].len());
    for i in idx {
        g = gcd(&g, &cs[i]);
        if g.is_constant() {
            return Poly::one();
        }
    }
    g
}

fn trim(v: &mut Vec<Poly>) {
    while v.last().map(|p| p.is_zero()).unwrap_or(false) {
        v.pop();
    }
}

/// Pseudo-remainder of `f` by `g` (coefficient lists, `g` nonzero).
fn prem(f: &[Poly], g: &[Poly]) -> Vec<Poly> {
    let mut r: Vec<Poly> = f.to_vec();
    trim(&mut r);
    let dg = g.len() - 1;
    let lcg = &g[dg];
    while !r.is_empty() && r.len() - 1 >= dg {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - dg;
        for c in r.iter_mut() {
            *c = c.mul(lcg);
        }
        for (i, gc) in g.iter().enumerate() {
            let t = gc.mul(&lr);
            r[i + shift] = r[i + shift].sub(&t);
        }
        debug_assert!(r[dr].is_zero());
        trim(&mut r);
    }
    r
}

/// gcd of two primitive polynomials via a primitive remainder sequence.
fn prs(mut f: Vec<Poly>, mut g: Vec<Poly>, _x: &Atom) -> Vec<Poly> {
    trim(&mut f);
    trim(&mut g);
    if f.len() < g.len() {
        core::mem::swap(&mut f, &mut g);
    }
    loop {
        let r = prem(&f, &g);
        if r.is_empty() {
            break;
        }
        if r.len() == 1 {
            return alloc::vec![Poly::one()];
        }
        let cont = content_of(&r);
        let r: Vec<Poly> = if cont.is_constant() {
            r
        } else {
            r.iter().map(|c| c.div_exact(&cont).expect("content divides")).collect()
        };
        f = g;
        g = r;
    }
    g
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn addmod(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= P {
        s - P
    } else {
        s
    }
}

fn submod(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + P - b
    }
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

fn invmod(a: u64) -> u64 {
    powmod(a, P - 2)
}

fn int_mod(n: &BigInt) -> u64 {
    let m = n % BigInt::from(P);
    let v = m.to_i64().unwrap();
    if v < 0 {
        (v + P as i64) as u64
    } else {
        v as u64
    }
}

fn q_mod(q: &Q) -> Option<u64> {
    let d = int_mod(q.denom());
    if d == 0 {
        return None;
    }
    Some(mulmod(int_mod(q.numer()), invmod(d)))
}

fn atom_value(a: &Atom) -> u64 {
    splitmix(a.stable_hash()) % P
}

/// Image of `p` in Z_P[x], evaluating every other atom.
fn image(p: &Poly, x: &Atom) -> Option<Vec<u64>> {
    let deg = p.degree_in(x) as usize;
    let mut out = alloc::vec![0u64; deg + 1];
    for (m, q) in p.terms() {
        let mut t = q_mod(q)?;
        let mut e = 0;
        for (a, k) in m.factors() {
            if a == x {
                e = *k as usize;
            } else {
                t = mulmod(t, powmod(atom_value(a), *k as u64));
            }
        }
        out[e] = addmod(out[e], t);
    }
    Some(out)
}

fn deg_gcd_mod(mut a: Vec<u64>, mut b: Vec<u64>) -> usize {
    let tr = |v: &mut Vec<u64>| {
        while v.last() == Some(&0) {
            v.pop();
        }
    };
    tr(&mut a);
    tr(&mut b);
    loop {
        if b.is_empty() {
            return a.len().saturating_sub(1);
        }
        if a.len() < b.len() {
            core::mem::swap(&mut a, &mut b);
            continue;
        }
        let inv = invmod(*b.last().unwrap());
        while a.len() >= b.len() && !a.is_empty() {
            let c = mulmod(*a.last().unwrap(), inv);
            let s = a.len() - b.len();
            for (i, bc) in b.iter().enumerate() {
                a[i + s] = submod(a[i + s], mulmod(c, *bc));
            }
            tr(&mut a);
        }
        core::mem::swap(&mut a, &mut b);
    }
}

/// True only when coprimality is certified: for every shared variable the
/// images keep their leading coefficient and have a constant gcd.
fn modular_coprime(a: &Poly, b: &Poly, shared: &[Atom]) -> bool {
    for x in shared {
        let (ia, ib) = match (image(a, x), image(b, x)) {
            (Some(ia), Some(ib)) => (ia, ib),
            _ => return false,
        };
        if ia.last().map(|c| c.is_zero()).unwrap_or(true) || ib.last().map(|c| c.is_zero()).unwrap_or(true) {
            return false;
        }
        if deg_gcd_mod(ia, ib) > 0 {
            return false;
        }
    }
    true
}

/// Least common multiple, monic.
pub fn lcm(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() || b.is_zero() {
        return Poly::zero();
    }
    let g = gcd(a, b);
    a.div_exact(&g).unwrap().mul(b).monic()
}
