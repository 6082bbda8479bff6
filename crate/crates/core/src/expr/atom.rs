use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::hash::{Hash, Hasher};

use super::canon::Expr;
use super::symbol::Symbol;

/// Polynomial indeterminates: symbols and transcendental kernels.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum AtomKind {
    Sym(Symbol),
    Exp(Expr),
    Cos(Expr),
    Ln(Expr),
}

struct AtomData {
    kind: AtomKind,
    hash: u64,
    syms: Vec<Symbol>,
}

#[derive(Clone)]
pub struct Atom(Arc<AtomData>);

impl Atom {
    pub fn new(kind: AtomKind) -> Self {
        let mut h = Fnv::default();
        kind.hash(&mut h);
        let syms = match &kind {
            AtomKind::Sym(s) => alloc::vec![s.clone()],
            AtomKind::Exp(u) | AtomKind::Cos(u) | AtomKind::Ln(u) => u.free_symbols(),
        };
        Atom(Arc::new(AtomData { kind, hash: h.finish(), syms }))
    }

    pub fn sym(s: Symbol) -> Self {
        Atom::new(AtomKind::Sym(s))
    }

    pub fn kind(&self) -> &AtomKind {
        &self.0.kind
    }

    /// Deterministic structural hash (independent of process state).
    pub fn stable_hash(&self) -> u64 {
        self.0.hash
    }

    /// Symbols this atom depends on, sorted.
    pub fn symbols(&self) -> &[Symbol] {
        &self.0.syms
    }

    pub fn depends_on(&self, s: &Symbol) -> bool {
        self.0.syms.binary_search(s).is_ok()
    }

    pub fn as_sym(&self) -> Option<&Symbol> {
        match &self.0.kind {
            AtomKind::Sym(s) => Some(s),
            _ => None,
        }
    }
}

impl PartialEq for Atom {
    fn eq(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.0, &o.0) || (self.0.hash == o.0.hash && self.0.kind == o.0.kind)
    }
}

impl Eq for Atom {}

impl PartialOrd for Atom {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Atom {
    fn cmp(&self, o: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &o.0) {
            return Ordering::Equal;
        }
        self.0.kind.cmp(&o.0.kind)
    }
}

impl Hash for Atom {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash)
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.kind {
            AtomKind::Sym(s) => write!(f, "{s}"),
            AtomKind::Exp(u) => write!(f, "exp({u})"),
            AtomKind::Cos(u) => write!(f, "cos({u})"),
            AtomKind::Ln(u) => write!(f, "ln({u})"),
        }
    }
}

/// FNV-1a, used for reproducible hashing in `no_std`.
pub(crate) struct Fnv(u64);

impl Default for Fnv {
    fn default() -> Self {
        Fnv(0xcbf2_9ce4_8422_2325)
    }
}

impl Hasher for Fnv {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for b in bytes {
            self.0 ^= *b as u64;
            self.0 = self.0.wrapping_mul(0x0100_0000_01b3);
        }
    }
}
