use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

/// A named scalar symbol: a chart coordinate or a constant parameter.
///
/// Symbols order "naturally" so that `x2 < x10`, which keeps printed
/// polynomials in the order a reader expects.
#[derive(Clone)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl PartialEq for Symbol {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Symbol {}

impl core::hash::Hash for Symbol {
    fn hash<H: core::hash::Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        natural_cmp(&self.0, &other.0)
    }
}

/// Compare strings treating maximal digit runs as numbers.
fn natural_cmp(a: &str, b: &str) -> Ordering {
    let (mut ia, mut ib) = (a.as_bytes(), b.as_bytes());
    loop {
        match (ia.first(), ib.first()) {
            (None, None) => return a.cmp(b),
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(ca), Some(cb)) => {
                if ca.is_ascii_digit() && cb.is_ascii_digit() {
                    let la = ia.iter().take_while(|c| c.is_ascii_digit()).count();
                    let lb = ib.iter().take_while(|c| c.is_ascii_digit()).count();
                    let (da, db) = (trim_zeros(&ia[..la]), trim_zeros(&ib[..lb]));
                    let ord = da.len().cmp(&db.len()).then_with(|| da.cmp(db));
                    if ord != Ordering::Equal {
                        return ord;
                    }
                    ia = &ia[la..];
                    ib = &ib[lb..];
                } else {
                    if ca != cb {
                        return ca.cmp(cb);
                    }
                    ia = &ia[1..];
                    ib = &ib[1..];
                }
            }
        }
    }
}

fn trim_zeros(d: &[u8]) -> &[u8] {
    let n = d.iter().take_while(|&&c| c == b'0').count();
    &d[n.min(d.len().saturating_sub(1))..]
}

/// Produce a name not present in `taken`, starting from `base`.
pub fn fresh_name(base: &str, taken: &[Symbol]) -> String {
    let mut name = String::from(base);
    while taken.iter().any(|s| s.name() == name) {
        name.push('_');
    }
    name
}

/// An ordered list of distinct coordinate names plus constant parameters.
#[derive(Clone, PartialEq, Eq)]
pub struct Chart {
    coords: Arc<[Symbol]>,
    params: Arc<[Symbol]>,
}

impl fmt::Debug for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Chart{:?}", &self.coords[..])?;
        if !self.params.is_empty() {
            write!(f, " params{:?}", &self.params[..])?;
        }
        Ok(())
    }
}

impl Chart {
    pub fn new<S: AsRef<str>>(coords: &[S]) -> Result<Self, crate::Error> {
        Self::with_params(coords, &[] as &[&str])
    }

    pub fn with_params<S: AsRef<str>, P: AsRef<str>>(
        coords: &[S],
        params: &[P],
    ) -> Result<Self, crate::Error> {
        if coords.is_empty() {
            return Err(crate::Error::InvalidInput("chart needs at least one coordinate".into()));
        }
        let mut all: Vec<&str> = Vec::new();
        for n in coords.iter().map(|s| s.as_ref()).chain(params.iter().map(|s| s.as_ref())) {
            if all.contains(&n) {
                return Err(crate::Error::InvalidInput(alloc::format!("duplicate name `{n}` in chart")));
            }
            all.push(n);
        }
        Ok(Chart {
            coords: coords.iter().map(|s| Symbol::new(s.as_ref())).collect(),
            params: params.iter().map(|s| Symbol::new(s.as_ref())).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Symbol] {
        &self.coords
    }

    pub fn params(&self) -> &[Symbol] {
        &self.params
    }

    pub fn coord(&self, i: usize) -> &Symbol {
        &self.coords[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.coords.iter().position(|s| s.name() == name)
    }

    pub fn lookup(&self, name: &str) -> Option<&Symbol> {
        self.coords.iter().chain(self.params.iter()).find(|s| s.name() == name)
    }

    /// All symbols (coordinates, then parameters).
    pub fn symbols(&self) -> impl Iterator<Item = &Symbol> {
        self.coords.iter().chain(self.params.iter())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn natural_order() {
        let mut v = alloc::vec![Symbol::new("x10"), Symbol::new("x2"), Symbol::new("theta"), Symbol::new("x1")];
        v.sort();
        let names: Vec<&str> = v.iter().map(|s| s.name()).collect();
        assert_eq!(names, ["theta", "x1", "x2", "x10"]);
    }

    #[test]
    fn chart_rejects_duplicates() {
        assert!(Chart::new(&["x", "y", "x"]).is_err());
        assert!(Chart::with_params(&["x"], &["x"]).is_err());
        assert!(Chart::new::<&str>(&[]).is_err());
    }
}
