//! Type vectors, derived-type identities and the Goursat-bundle decision.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::geometry::{refined_derived_type, DerivedFlag, DerivedTypeRecord, Distribution};
use crate::singular::{singular_subbundle, structure_tensor, QuotientFrame, SingularSubbundleResult};
use crate::{Error, Result};

/// `⟨ρ_1, …, ρ_k⟩`: ρ_j dependent variables of order j.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TypeVector(Vec<usize>);

impl TypeVector {
    pub fn new(rho: Vec<usize>) -> Result<Self> {
        match rho.last() {
            Some(&r) if r >= 1 => Ok(TypeVector(rho)),
            _ => Err(Error::InvalidInput("type vector needs a positive last entry".into())),
        }
    }

    /// Build from `(q_a, k_a)` pairs with increasing orders.
    pub fn from_pairs(pairs: &[(usize, usize)]) -> Result<Self> {
        let k = pairs.iter().map(|p| p.1).max().unwrap_or(0);
        let mut rho = alloc::vec![0; k];
        let mut last = 0;
        for &(q, ka) in pairs {
            if q == 0 || ka <= last {
                return Err(Error::InvalidInput("pairs need positive counts and increasing orders".into()));
            }
            rho[ka - 1] = q;
            last = ka;
        }
        Self::new(rho)
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    /// ρ_j, 1-based.
    pub fn rho(&self, j: usize) -> usize {
        self.0[j - 1]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// P = Σ ρ_j
    pub fn p(&self) -> usize {
        self.0.iter().sum()
    }

    /// Number of nonzero entries.
    pub fn class(&self) -> usize {
        self.0.iter().filter(|&&r| r > 0).count()
    }

    /// `(q_a, k_a)` pairs.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.0.iter().enumerate().filter(|(_, &r)| r > 0).map(|(j, &r)| (r, j + 1)).collect()
    }

    /// dim J^τ = 1 + Σ (j+1) ρ_j
    pub fn dim(&self) -> usize {
        1 + self.0.iter().enumerate().map(|(j, &r)| (j + 2) * r).sum::<usize>()
    }

    /// Rank of C(τ).
    pub fn rank(&self) -> usize {
        1 + self.p()
    }
}

impl fmt::Display for TypeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (i, r) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{r}")?;
        }
        f.write_str(">")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KinematicVectors {
    pub velocity: Vec<i64>,
    pub acceleration: Vec<i64>,
    pub deceleration: Vec<i64>,
    /// ν_j = Δ_j
    pub nu: Vec<i64>,
    /// n_i = ν_{i+1}
    pub n: Vec<i64>,
    /// N_l = dim M − m_l
    pub big_n: Vec<i64>,
}

pub fn kinematics(rec: &DerivedTypeRecord, dim: usize) -> KinematicVectors {
    let k = rec.k();
    let m: Vec<i64> = (0..=k).map(|i| rec.m(i) as i64).collect();
    let velocity: Vec<i64> = (1..=k).map(|j| m[j] - m[j - 1]).collect();
    let mut acceleration: Vec<i64> = (1..k).map(|i| velocity[i] - velocity[i - 1]).collect();
    let mut deceleration: Vec<i64> = acceleration.iter().map(|a| -a).collect();
    if let Some(&d) = velocity.last() {
        acceleration.push(d);
        deceleration.push(d);
    }
    KinematicVectors {
        nu: velocity.clone(),
        n: velocity.clone(),
        big_n: m.iter().map(|mi| dim as i64 - mi).collect(),
        velocity,
        acceleration,
        deceleration,
    }
}

/// One integer identity, both sides recorded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: String,
    pub lhs: i64,
    pub rhs: i64,
}

impl IdentityCheck {
    pub fn pass(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// The derived-type identities of a partial prolongation with the given
/// deceleration, ordered by level: m_i, then χ^i_{i-1}, then χ^i.
pub fn check_prop31(rec: &DerivedTypeRecord, deceleration: &[i64]) -> Vec<IdentityCheck> {
    let k = rec.k();
    let m = |i: usize| rec.m(i) as i64;
    let p: i64 = deceleration.iter().sum();
    let mut out = Vec::new();
    let mut push = |name: String, lhs: i64, rhs: i64| out.push(IdentityCheck { name, lhs, rhs });
    for l in 0..=k {
        match l {
            0 => push("m0 = 1+P".into(), m(0), 1 + p),
            1 => push("m1 = 1+2P".into(), m(1), 1 + 2 * p),
            _ => {
                // Δ²_j = −deceleration[j−2]
                let s: i64 = (2..=l).map(|j| (l as i64 + 1 - j as i64) * -deceleration[j - 2]).sum();
                push(format!("m{l} = 1+({l}+1)P+sum"), m(l), 1 + (1 + l as i64) * p + s);
            }
        }
        if l >= 1 && l < k {
            let lhs = rec.chi_prev(l).map(|x| x as i64).unwrap_or(-1);
            push(format!("chi{l}_{} = m{}-1", l - 1, l - 1), lhs, m(l - 1) - 1);
        }
        if l < k {
            push(format!("chi{l} = 2m{l}-m{}-1", l + 1), rec.chi(l) as i64, 2 * m(l) - m(l + 1) - 1);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionCheck {
    /// i, for V^(i-1) ∩ Char V^(i)
    pub level: usize,
    pub rank: usize,
    pub expected: usize,
    pub integrable: bool,
}

impl IntersectionCheck {
    pub fn pass(&self) -> bool {
        self.integrable && self.rank == self.expected
    }
}

#[derive(Clone, Debug)]
pub enum WeberCheck {
    /// Δ_k = 1
    NotApplicable,
    Checked {
        singular: SingularSubbundleResult,
        resolvent: Option<Distribution>,
        integrable: bool,
        /// Δ_k = 2: integrability of the resolvent is the deciding test.
        q2_caveat: bool,
    },
}

impl WeberCheck {
    pub fn pass(&self) -> bool {
        match self {
            WeberCheck::NotApplicable => true,
            WeberCheck::Checked { singular, integrable, .. } => singular.found && *integrable,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GoursatVerdict {
    pub is_goursat: bool,
    /// deccel(V), present when all entries are non-negative.
    pub tau: Option<TypeVector>,
    pub kinematics: Option<KinematicVectors>,
    pub identities: Vec<IdentityCheck>,
    pub intersections: Vec<IntersectionCheck>,
    pub weber: Option<WeberCheck>,
    /// Derived length one: the construction runs through the top level only.
    pub k1_path: bool,
    pub first_failure: Option<String>,
    pub diagnostics: Vec<String>,
    pub flag: DerivedFlag,
    pub quotient: Option<QuotientFrame>,
}

impl GoursatVerdict {
    pub fn record(&self) -> &DerivedTypeRecord {
        &self.flag.record
    }

    pub fn k(&self) -> usize {
        self.flag.k()
    }

    pub fn resolvent(&self) -> Option<&Distribution> {
        match &self.weber {
            Some(WeberCheck::Checked { resolvent, .. }) => resolvent.as_ref(),
            _ => None,
        }
    }

    fn fail(&mut self, what: String) {
        if self.first_failure.is_none() {
            self.first_failure = Some(what.clone());
        }
        self.diagnostics.push(what);
        self.is_goursat = false;
    }
}

pub fn classify(d: &Distribution) -> Result<GoursatVerdict> {
    let n = d.chart().dim();
    let flag = refined_derived_type(d)?;
    let k = flag.k();
    let mut v = GoursatVerdict {
        is_goursat: true,
        tau: None,
        kinematics: None,
        identities: Vec::new(),
        intersections: Vec::new(),
        weber: None,
        k1_path: false,
        first_failure: None,
        diagnostics: Vec::new(),
        flag,
        quotient: None,
    };
    if k == 0 {
        v.fail("[i] derived length is 0: the distribution is integrable".into());
        return Ok(v);
    }
    let kin = kinematics(v.record(), n);
    let decel = kin.deceleration.clone();
    v.kinematics = Some(kin);
    if let Some(j) = decel.iter().position(|&x| x < 0) {
        v.fail(format!("[i] negative deceleration entry at position {}: {}", j + 1, decel[j]));
        return Ok(v);
    }
    v.tau = Some(TypeVector::new(decel.iter().map(|&x| x as usize).collect())?);
    if v.record().m(k) != n {
        v.fail(format!("[i] derived flag stops at rank {} below dimension {n}", v.record().m(k)));
    }
    v.identities = check_prop31(v.record(), &decel);
    let failed: Vec<String> = v.identities.iter().filter(|c| !c.pass()).map(|c| format!("[i] identity {} fails: {} != {}", c.name, c.lhs, c.rhs)).collect();
    for f in failed {
        v.fail(f);
    }
    for i in 1..k {
        let x = v.flag.inters[i].as_ref().expect("intersection computed");
        let c = IntersectionCheck { level: i, rank: x.rank(), expected: v.record().m(i - 1) - 1, integrable: x.is_integrable() };
        if !c.pass() {
            let why = if c.integrable { format!("rank {} != {}", c.rank, c.expected) } else { "not integrable".into() };
            v.diagnostics.push(format!("intersection at level {i}: {why}"));
            if v.first_failure.is_none() {
                v.first_failure = Some(format!("[ii] intersection V^({}) ∩ Char V^({i}) {why}", i - 1));
            }
            v.is_goursat = false;
        }
        v.intersections.push(c);
    }
    if !v.is_goursat {
        return Ok(v);
    }
    v.k1_path = k == 1;
    let dk = decel[k - 1] as usize;
    if dk > 1 {
        let amb = &v.flag.levels[k - 1];
        let ch = &v.flag.chars[k - 1];
        let q = QuotientFrame::new(amb, ch)?;
        let t = structure_tensor(&q)?;
        let s = singular_subbundle(&q, &t, dk)?;
        let (resolvent, integrable) = if s.found {
            let r = crate::singular::resolvent_bundle(&q, &s)?;
            let i = r.is_integrable();
            (Some(r), i)
        } else {
            (None, false)
        };
        let w = WeberCheck::Checked { singular: s, resolvent, integrable, q2_caveat: dk == 2 };
        if !w.pass() {
            if let WeberCheck::Checked { singular, .. } = &w {
                v.diagnostics.extend(singular.diagnostics.iter().cloned());
            }
            let found = matches!(&w, WeberCheck::Checked { singular, .. } if singular.found);
            let what = if found { "resolvent bundle is not integrable" } else { "no singular sub-bundle of the expected rank" };
            v.fail(format!("[iii] Weber structure on V^({}): {what}", k - 1));
        }
        v.weber = Some(w);
        v.quotient = Some(q);
    } else {
        v.weber = Some(WeberCheck::NotApplicable);
    }
    Ok(v)
}
