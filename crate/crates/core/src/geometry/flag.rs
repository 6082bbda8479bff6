//! Derived flags, Cauchy bundles and the refined derived type.

use alloc::vec::Vec;

use crate::expr::Expr;
use crate::linalg::RowEchelon;
use crate::{Error, Result};

use super::bundle::{clear_row, Distribution};
use super::field::VectorField;

/// Brackets `[X_i, X_j]` (i < j) of a fixed generator list.
pub struct BracketTable {
    gens: Vec<VectorField>,
    table: Vec<Vec<VectorField>>,
}

impl BracketTable {
    pub fn new(d: &Distribution) -> Self {
        let gens = d.generators();
        let table = (0..gens.len())
            .map(|i| (i + 1..gens.len()).map(|j| gens[i].bracket(&gens[j])).collect())
            .collect();
        BracketTable { gens, table }
    }

    pub fn generators(&self) -> &[VectorField] {
        &self.gens
    }

    /// `[X_i, X_j]` for i < j.
    pub fn get(&self, i: usize, j: usize) -> &VectorField {
        &self.table[i][j - i - 1]
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, &VectorField)> {
        self.table.iter().enumerate().flat_map(|(i, row)| row.iter().enumerate().map(move |(k, v)| (i, i + k + 1, v)))
    }
}

/// First derived bundle: generators plus all pairwise brackets.
pub fn derived_bundle(d: &Distribution) -> Distribution {
    derived_with(d, &BracketTable::new(d))
}

fn derived_with(d: &Distribution, t: &BracketTable) -> Distribution {
    let mut rows: Vec<Vec<Expr>> = d.rows().to_vec();
    rows.extend(t.pairs().map(|(_, _, v)| v.components().to_vec()));
    Distribution::from_rows(d.chart(), rows)
}

/// Cauchy characteristic bundle of `d`.
pub fn cauchy_bundle(d: &Distribution) -> Result<Distribution> {
    cauchy_with(d, &BracketTable::new(d), 0)
}

fn cauchy_with(d: &Distribution, t: &BracketTable, level: usize) -> Result<Distribution> {
    let chart = d.chart();
    let theta = d.annihilator();
    if theta.rank() == 0 {
        return Ok(d.clone());
    }
    let m = t.generators().len();
    // Row (k, β), column α: θ^k([X_α, X_β]).
    let forms = theta.generators();
    let mut ech = RowEchelon::new(m);
    let mut c = alloc::vec![alloc::vec![alloc::vec![Expr::zero(); m]; m]; forms.len()];
    for (i, j, v) in t.pairs() {
        for (k, w) in forms.iter().enumerate() {
            let x = w.apply(v);
            c[k][j][i] = x.clone();
            c[k][i][j] = x.neg();
        }
    }
    for ck in &c {
        for row in ck {
            if ech.rank() == m {
                break;
            }
            if row.iter().any(|e| !e.is_zero()) {
                ech.insert(row, 0);
            }
        }
    }
    let gens = t.generators();
    let rows: Vec<Vec<Expr>> = ech
        .kernel()
        .into_iter()
        .map(|f| {
            let f = clear_row(f);
            let mut v = VectorField::zero(chart);
            for (a, g) in f.iter().zip(gens) {
                if !a.is_zero() {
                    v = v.add(&g.scale(a));
                }
            }
            v.into_components()
        })
        .collect();
    let ch = Distribution::from_rows(chart, rows).simplified();
    if !ch.is_integrable() {
        return Err(Error::NotTotallyRegular { level, what: "Cauchy bundle is not integrable".into() });
    }
    Ok(ch)
}

/// Ranks recorded at one level of the derived flag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedLevel {
    /// m_i = rank V^(i)
    pub m: usize,
    /// χ^i_{i-1} = rank (V^(i-1) ∩ Char V^(i)); only for 1 ≤ i ≤ k-1.
    pub chi_prev: Option<usize>,
    /// χ^i = rank Char V^(i)
    pub chi: usize,
    pub char_integrable: bool,
    pub inter_integrable: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedTypeRecord {
    pub levels: Vec<DerivedLevel>,
}

impl DerivedTypeRecord {
    /// Build from the list form `[[m0, χ0], [m1, χ1_0, χ1], ..., [mk, χk]]`.
    pub fn from_lists(lists: &[Vec<usize>]) -> Result<Self> {
        let mut levels = Vec::new();
        for (i, l) in lists.iter().enumerate() {
            let lvl = match l.as_slice() {
                [m, chi] => DerivedLevel { m: *m, chi_prev: None, chi: *chi, char_integrable: true, inter_integrable: None },
                [m, p, chi] if i > 0 => DerivedLevel { m: *m, chi_prev: Some(*p), chi: *chi, char_integrable: true, inter_integrable: Some(true) },
                _ => return Err(Error::InvalidInput(alloc::format!("bad derived type entry {i}"))),
            };
            levels.push(lvl);
        }
        if levels.is_empty() {
            return Err(Error::InvalidInput("empty derived type".into()));
        }
        Ok(DerivedTypeRecord { levels })
    }

    /// Derived length.
    pub fn k(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn m(&self, i: usize) -> usize {
        self.levels[i].m
    }

    pub fn chi(&self, i: usize) -> usize {
        self.levels[i].chi
    }

    pub fn chi_prev(&self, i: usize) -> Option<usize> {
        self.levels[i].chi_prev
    }

    pub fn to_lists(&self) -> Vec<Vec<usize>> {
        self.levels
            .iter()
            .map(|l| match l.chi_prev {
                Some(p) => alloc::vec![l.m, p, l.chi],
                None => alloc::vec![l.m, l.chi],
            })
            .collect()
    }
}

/// The derived flag with its Cauchy bundles and intersections.
#[derive(Clone, Debug)]
pub struct DerivedFlag {
    /// V^(0), ..., V^(k)
    pub levels: Vec<Distribution>,
    /// Char V^(i) for i = 0..=k
    pub chars: Vec<Distribution>,
    /// Entry i is V^(i-1) ∩ Char V^(i) for 1 ≤ i ≤ k-1.
    pub inters: Vec<Option<Distribution>>,
    pub record: DerivedTypeRecord,
}

impl DerivedFlag {
    pub fn k(&self) -> usize {
        self.levels.len() - 1
    }
}

pub fn refined_derived_type(d: &Distribution) -> Result<DerivedFlag> {
    let n = d.chart().dim();
    // Reduced generators keep bracket expressions small.
    let mut levels = alloc::vec![d.simplified()];
    let mut chars = Vec::new();
    loop {
        let cur = levels.last().unwrap().clone();
        let i = levels.len() - 1;
        if cur.rank() == n {
            chars.push(cur.clone());
            break;
        }
        let t = BracketTable::new(&cur);
        let next = derived_with(&cur, &t).simplified();
        if next.rank() == cur.rank() {
            chars.push(cur.clone());
            break;
        }
        chars.push(cauchy_with(&cur, &t, i)?);
        levels.push(next);
        if levels.len() > n + 1 {
            return Err(Error::NotTotallyRegular { level: i, what: "derived flag does not stabilize".into() });
        }
    }
    let k = levels.len() - 1;
    let mut inters = alloc::vec![None; k + 1];
    let mut recs = Vec::new();
    for i in 0..=k {
        let mut lvl = DerivedLevel {
            m: levels[i].rank(),
            chi_prev: None,
            chi: chars[i].rank(),
            char_integrable: true,
            inter_integrable: None,
        };
        if i >= 1 && i + 1 <= k {
            let x = levels[i - 1].intersect(&chars[i]).simplified();
            lvl.chi_prev = Some(x.rank());
            lvl.inter_integrable = Some(x.is_integrable());
            inters[i] = Some(x);
        }
        recs.push(lvl);
    }
    Ok(DerivedFlag { levels, chars, inters, record: DerivedTypeRecord { levels: recs } })
}
