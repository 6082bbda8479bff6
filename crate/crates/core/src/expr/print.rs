//! Re-parseable text output.

use core::fmt::{self, Write};

use num_traits::{One, Signed};

use super::canon::Expr;
use super::poly::{Mono, Poly, Q};
use super::ratfunc::RatFunc;

fn write_mono(f: &mut dyn Write, m: &Mono) -> fmt::Result {
    for (i, (a, e)) in m.factors().iter().enumerate() {
        if i > 0 {
            f.write_char('*')?;
        }
        if *e == 1 {
            write!(f, "{a}")?;
        } else {
            write!(f, "{a}^{e}")?;
        }
    }
    Ok(())
}

fn write_q(f: &mut dyn Write, q: &Q) -> fmt::Result {
    if q.is_integer() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

/// Writes a term with sign handled by the caller (`q` nonnegative).
fn write_term(f: &mut dyn Write, m: &Mono, q: &Q) -> fmt::Result {
    if m.is_one() {
        return write_q(f, q);
    }
    if !q.is_one() {
        write_q(f, q)?;
        f.write_char('*')?;
    }
    write_mono(f, m)
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, q)) in self.terms().iter().enumerate() {
            let neg = q.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            write_term(f, m, &q.abs())?;
        }
        Ok(())
    }
}

fn is_bare(p: &Poly) -> bool {
    // A single factor that needs no parentheses after '/'.
    match p.terms() {
        [(m, q)] => q.is_one() && m.factors().len() == 1,
        _ => false,
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if self.num.len() == 1 {
            write!(f, "{}", self.num)?;
        } else {
            write!(f, "({})", self.num)?;
        }
        if is_bare(&self.den) {
            write!(f, "/{}", self.den)
        } else {
            write!(f, "/({})", self.den)
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (s, r)) in self.terms().iter().enumerate() {
            let r = if i > 0 && r.num.is_negative_lc() {
                f.write_str(" - ")?;
                r.neg()
            } else {
                if i > 0 {
                    f.write_str(" + ")?;
                }
                r.clone()
            };
            if s.is_empty() {
                write!(f, "{r}")?;
                continue;
            }
            let mut first = true;
            if r.is_one() {
            } else if r.neg().is_one() {
                f.write_str("-")?;
            } else {
                if r.den.is_one() && r.num.len() == 1 {
                    write!(f, "{r}")?;
                } else {
                    write!(f, "({r})")?;
                }
                first = false;
            }
            for u in s {
                if !first {
                    f.write_char('*')?;
                }
                write!(f, "sin({u})")?;
                first = false;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
