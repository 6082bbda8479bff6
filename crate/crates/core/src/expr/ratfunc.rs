use num_traits::{One, Zero};

use super::gcd::gcd;
use super::poly::{Poly, Q};

/// Reduced fraction `num/den` with monic denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct RatFunc {
    pub(crate) num: Poly,
    pub(crate) den: Poly,
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        RatFunc { num: Poly::one(), den: Poly::one() }
    }

    pub fn constant(q: Q) -> Self {
        RatFunc { num: Poly::constant(q), den: Poly::one() }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    /// Normalize an arbitrary fraction. Panics if `den` is zero.
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFunc::zero();
        }
        if den.is_constant() {
            let c = den.lc();
            return RatFunc { num: num.scale(&c.recip()), den: Poly::one() };
        }
        let g = gcd(&num, &den);
        let (n, d) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
        };
        Self::unit_normal(n, d)
    }

    /// Normalize a fraction already known to be in lowest terms.
    pub(crate) fn from_reduced(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFunc::zero();
        }
        if den.is_constant() {
            let c = den.lc();
            return RatFunc { num: num.scale(&c.recip()), den: Poly::one() };
        }
        Self::unit_normal(num, den)
    }

    fn unit_normal(n: Poly, d: Poly) -> Self {
        let c = d.lc();
        if c.is_one() {
            RatFunc { num: n, den: d }
        } else {
            let inv = c.recip();
            RatFunc { num: n.scale(&inv), den: d.scale(&inv) }
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<Q> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn neg(&self) -> Self {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            let n = self.num.add(&o.num);
            return RatFunc::new(n, self.den.clone());
        }
        if self.den.is_one() {
            return RatFunc { num: self.num.mul(&o.den).add(&o.num), den: o.den.clone() };
        }
        if o.den.is_one() {
            return RatFunc { num: o.num.mul(&self.den).add(&self.num), den: self.den.clone() };
        }
        let g = gcd(&self.den, &o.den);
        if g.is_one() {
            let n = self.num.mul(&o.den).add(&o.num.mul(&self.den));
            // gcd(n, b*d) = 1 when gcd(a,b) = gcd(c,d) = gcd(b,d) = 1.
            return Self::unit_normal(n, self.den.mul(&o.den));
        }
        let b1 = self.den.div_exact(&g).unwrap();
        let d1 = o.den.div_exact(&g).unwrap();
        let n = self.num.mul(&d1).add(&o.num.mul(&b1));
        if n.is_zero() {
            return RatFunc::zero();
        }
        let den = self.den.mul(&d1);
        let h = gcd(&n, &g);
        if h.is_one() {
            Self::unit_normal(n, den)
        } else {
            Self::unit_normal(n.div_exact(&h).unwrap(), den.div_exact(&h).unwrap())
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero();
        }
        if let Some(c) = o.as_constant() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_constant() {
            return o.scale(&c);
        }
        let (mut a, mut b) = (self.num.clone(), self.den.clone());
        let (mut c, mut d) = (o.num.clone(), o.den.clone());
        if !d.is_one() {
            let g = gcd(&a, &d);
            if !g.is_one() {
                a = a.div_exact(&g).unwrap();
                d = d.div_exact(&g).unwrap();
            }
        }
        if !b.is_one() {
            let g = gcd(&c, &b);
            if !g.is_one() {
                c = c.div_exact(&g).unwrap();
                b = b.div_exact(&g).unwrap();
            }
        }
        Self::unit_normal(a.mul(&c), b.mul(&d))
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::unit_normal(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        Some(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: u32) -> Self {
        if e == 0 {
            return RatFunc::one();
        }
        RatFunc { num: self.num.pow(e), den: self.den.pow(e) }
    }
}

impl Default for RatFunc {
    fn default() -> Self {
        RatFunc::zero()
    }
}
