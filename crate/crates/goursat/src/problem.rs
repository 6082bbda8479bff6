//! Problem files: the line-oriented `.gsf` text form and its JSON twin.
//!
//! ```text
//! # comment
//! coordinates: x1, x2, x3
//! parameters: L
//! field:
//!   1, x3, 0
//!   0, 0, 1
//! hint x = exp(x1)
//! seed = 7
//! ```
//!
//! Control systems use `time:`, `states:`, `controls:` and `dynamics:` (one
//! right-hand side per line, in state order). A `type:` line asks for the
//! normal form of that type instead; `time:` then names the independent
//! variable and turns it into a Brunovsky control system, while
//! `disguise: true` hides it behind a random change of frame and
//! coordinates drawn from the seed. A `chart:` section of `x = ...` and
//! `z<l>_<j>_<s> = ...` lines supplies a chart for `verify`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use goursat_core::classify::TypeVector;
use goursat_core::contact::{ChartTower, ContactChart, Strategy};
use goursat_core::control::ControlSystem;
use goursat_core::expr::{parse, Chart, Expr};
use goursat_core::geometry::{Distribution, VectorField};
use goursat_core::normal_form::{contact_system, disguise};
use goursat_core::sampler::Sampler;

use crate::InputError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hint {
    pub name: String,
    pub expr: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum System {
    Distribution {
        coordinates: Vec<String>,
        fields: Vec<Vec<String>>,
    },
    Control {
        time: String,
        states: Vec<String>,
        controls: Vec<String>,
        dynamics: Vec<String>,
    },
    NormalForm {
        #[serde(rename = "type")]
        tau: Vec<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        time: Option<String>,
        #[serde(default)]
        disguise: bool,
    },
}

/// A user-supplied chart, keyed by `x` and `z<l>_<j>_<s>`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartSpec {
    pub x: String,
    pub z: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemFile {
    #[serde(flatten)]
    pub system: System,
    #[serde(default)]
    pub parameters: Vec<String>,
    #[serde(default)]
    pub hints: Vec<Hint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chart: Option<ChartSpec>,
}

/// The system a problem file describes, ready for analysis.
#[derive(Clone, Debug)]
pub enum Loaded {
    Distribution(Distribution),
    Control(ControlSystem),
}

impl Loaded {
    pub fn distribution(&self) -> Distribution {
        match self {
            Loaded::Distribution(d) => d.clone(),
            Loaded::Control(s) => s.to_distribution(),
        }
    }

    pub fn chart(&self) -> &Chart {
        match self {
            Loaded::Distribution(d) => d.chart(),
            Loaded::Control(s) => s.chart(),
        }
    }
}

fn err(line: usize, msg: impl Into<String>) -> InputError {
    InputError::Syntax { line, msg: msg.into() }
}

fn split_names(s: &str) -> Vec<String> {
    s.split([',', ' ', '\t']).map(str::trim).filter(|t| !t.is_empty()).map(String::from).collect()
}

/// Split on top-level commas only; `atan2`-style calls are not in the
/// grammar, but parenthesised sums are.
fn split_exprs(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if ch == ',' && depth == 0 {
            out.push(cur.trim().to_string());
            cur.clear();
        } else {
            cur.push(ch);
        }
    }
    if !cur.trim().is_empty() || !out.is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

const SECTIONS: [&str; 11] =
    ["coordinates", "parameters", "field", "fields", "time", "states", "controls", "dynamics", "type", "disguise", "chart"];

fn parse_hint(rest: &str, line: usize) -> Result<Hint, InputError> {
    let (name, expr) = rest.split_once('=').ok_or_else(|| err(line, "expected `hint <name> = <expr>`"))?;
    let name = name.trim();
    if name.is_empty() || expr.trim().is_empty() {
        return Err(err(line, "expected `hint <name> = <expr>`"));
    }
    Ok(Hint { name: name.to_string(), expr: expr.trim().to_string() })
}

/// Hint lines only, as accepted by `--hints`.
pub fn parse_hints(text: &str) -> Result<Vec<Hint>, InputError> {
    if text.trim_start().starts_with('[') {
        return serde_json::from_str(text).map_err(|e| InputError::Json(e.to_string()));
    }
    if text.trim_start().starts_with('{') {
        let p = ProblemFile::from_str_any(text)?;
        return Ok(p.hints);
    }
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let rest = line.strip_prefix("hint").filter(|r| r.starts_with(char::is_whitespace)).ok_or_else(|| err(i + 1, "expected a hint line"))?;
        out.push(parse_hint(rest, i + 1)?);
    }
    Ok(out)
}

fn strip_comment(s: &str) -> &str {
    s.split_once('#').map_or(s, |(a, _)| a)
}

/// A chart section body: `x = ...` and `z<l>_<j>_<s> = ...` lines.
pub fn parse_chart_lines<'a>(lines: impl Iterator<Item = (usize, &'a str)>) -> Result<ChartSpec, InputError> {
    let mut spec = ChartSpec::default();
    let mut have_x = false;
    for (n, l) in lines {
        let (k, v) = l.split_once('=').ok_or_else(|| err(n, "expected `<name> = <expr>` in chart"))?;
        let (k, v) = (k.trim(), v.trim().to_string());
        if k == "x" {
            spec.x = v;
            have_x = true;
        } else if tower_key(k).is_some() {
            spec.z.insert(k.to_string(), v);
        } else {
            return Err(err(n, format!("unknown chart entry {k}")));
        }
    }
    if !have_x {
        return Err(InputError::Invalid("chart has no `x = ...` entry".into()));
    }
    Ok(spec)
}

/// `z<l>_<j>_<s>` → (l, j, s)
fn tower_key(k: &str) -> Option<(usize, usize, usize)> {
    let mut it = k.strip_prefix('z')?.split('_').map(|p| p.parse::<usize>().ok());
    let (l, j, s) = (it.next()??, it.next()??, it.next()??);
    (it.next().is_none() && l >= 1 && j >= 1 && s <= j).then_some((l, j, s))
}

impl ProblemFile {
    /// Parse the text form.
    pub fn from_gsf(text: &str) -> Result<Self, InputError> {
        let mut sections: BTreeMap<&str, Vec<(usize, &str)>> = BTreeMap::new();
        let mut hints = Vec::new();
        let mut seed = None;
        let mut current: Option<&str> = None;
        for (i, raw) in text.lines().enumerate() {
            let n = i + 1;
            let line = strip_comment(raw).trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("hint").filter(|r| r.starts_with(char::is_whitespace)) {
                hints.push(parse_hint(rest, n)?);
                continue;
            }
            if let Some(rest) = line.strip_prefix("seed") {
                if let Some(v) = rest.trim_start().strip_prefix('=') {
                    seed = Some(v.trim().parse::<u64>().map_err(|_| err(n, "seed must be a non-negative integer"))?);
                    continue;
                }
            }
            if let Some((head, rest)) = line.split_once(':') {
                let head = head.trim();
                if let Some(&name) = SECTIONS.iter().find(|s| **s == head) {
                    let name = if name == "fields" { "field" } else { name };
                    if sections.contains_key(name) && name != "field" {
                        return Err(err(n, format!("duplicate section {name}")));
                    }
                    let body = sections.entry(name).or_default();
                    if !rest.trim().is_empty() {
                        body.push((n, rest.trim()));
                    }
                    current = Some(name);
                    continue;
                }
            }
            match current {
                Some(s) => sections.get_mut(s).unwrap().push((n, line)),
                None => return Err(err(n, format!("unexpected line `{line}` outside any section"))),
            }
        }
        let names = |s: &str| -> Vec<String> { sections.get(s).map(|b| b.iter().flat_map(|(_, l)| split_names(l)).collect()).unwrap_or_default() };
        let single = |s: &str| -> Result<Option<String>, InputError> {
            match sections.get(s).map(|b| b.as_slice()) {
                None => Ok(None),
                Some([(_, v)]) => Ok(Some(v.to_string())),
                Some(b) => Err(err(b.first().map_or(0, |x| x.0), format!("`{s}:` takes a single value"))),
            }
        };
        let has = |s: &str| sections.contains_key(s);
        let system = if has("type") {
            if has("coordinates") || has("field") || has("states") || has("controls") || has("dynamics") {
                return Err(InputError::Invalid("`type:` cannot be combined with an explicit system".into()));
            }
            let t = single("type")?.unwrap();
            let tau = t
                .trim_matches(|c| c == '<' || c == '>' || c == '[' || c == ']')
                .split(',')
                .map(|p| p.trim().parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| InputError::Invalid(format!("bad type {t}")))?;
            let disguise = match single("disguise")?.as_deref() {
                None | Some("false") => false,
                Some("true") => true,
                Some(o) => return Err(InputError::Invalid(format!("disguise must be true or false, not {o}"))),
            };
            System::NormalForm { tau, time: single("time")?, disguise }
        } else if has("dynamics") || has("states") || has("controls") {
            if has("coordinates") || has("field") {
                return Err(InputError::Invalid("control mode cannot also declare `coordinates:` or `field:`".into()));
            }
            let time = single("time")?.ok_or_else(|| InputError::Invalid("control mode needs `time:`".into()))?;
            let dynamics = sections.get("dynamics").map(|b| b.iter().map(|(_, l)| l.to_string()).collect()).unwrap_or_default();
            System::Control { time, states: names("states"), controls: names("controls"), dynamics }
        } else {
            if has("time") || has("disguise") {
                return Err(InputError::Invalid("`time:`/`disguise:` need control or normal-form mode".into()));
            }
            let fields = sections.get("field").map(|b| b.iter().map(|(_, l)| split_exprs(l)).collect()).unwrap_or_default();
            System::Distribution { coordinates: names("coordinates"), fields }
        };
        let chart = match sections.get("chart") {
            Some(b) => Some(parse_chart_lines(b.iter().copied())?),
            None => None,
        };
        Ok(ProblemFile { system, parameters: names("parameters"), hints, seed, chart })
    }

    pub fn from_json(text: &str) -> Result<Self, InputError> {
        serde_json::from_str(text).map_err(|e| InputError::Json(e.to_string()))
    }

    /// JSON if the text starts with `{`, the line format otherwise.
    pub fn from_str_any(text: &str) -> Result<Self, InputError> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_gsf(text)
        }
    }

    /// Canonical text form; parses back to an equal value.
    pub fn to_gsf(&self) -> String {
        let mut s = String::new();
        let list = |v: &[String]| v.join(", ");
        match &self.system {
            System::Distribution { coordinates, fields } => {
                s += &format!("coordinates: {}\n", list(coordinates));
                if !self.parameters.is_empty() {
                    s += &format!("parameters: {}\n", list(&self.parameters));
                }
                s += "field:\n";
                for f in fields {
                    s += &format!("  {}\n", f.join(", "));
                }
            }
            System::Control { time, states, controls, dynamics } => {
                s += &format!("time: {time}\nstates: {}\ncontrols: {}\n", list(states), list(controls));
                if !self.parameters.is_empty() {
                    s += &format!("parameters: {}\n", list(&self.parameters));
                }
                s += "dynamics:\n";
                for f in dynamics {
                    s += &format!("  {f}\n");
                }
            }
            System::NormalForm { tau, time, disguise } => {
                let t: Vec<String> = tau.iter().map(|r| r.to_string()).collect();
                s += &format!("type: <{}>\n", t.join(","));
                if let Some(t) = time {
                    s += &format!("time: {t}\n");
                }
                if *disguise {
                    s += "disguise: true\n";
                }
                if !self.parameters.is_empty() {
                    s += &format!("parameters: {}\n", list(&self.parameters));
                }
            }
        }
        for h in &self.hints {
            s += &format!("hint {} = {}\n", h.name, h.expr);
        }
        if let Some(seed) = self.seed {
            s += &format!("seed = {seed}\n");
        }
        if let Some(c) = &self.chart {
            s += &format!("chart:\n  x = {}\n", c.x);
            for (k, v) in sorted_chart(c) {
                s += &format!("  {k} = {v}\n");
            }
        }
        s
    }

    /// Build the system. Disguised normal forms draw from `seed`.
    pub fn load(&self, seed: u64) -> Result<Loaded, InputError> {
        let params: Vec<&str> = self.parameters.iter().map(String::as_str).collect();
        match &self.system {
            System::Distribution { coordinates, fields } => {
                let chart = Chart::with_params(coordinates, &self.parameters).map_err(InputError::Core)?;
                if fields.is_empty() {
                    return Err(InputError::Invalid("no `field:` lines".into()));
                }
                let mut gens = Vec::new();
                for (i, f) in fields.iter().enumerate() {
                    if f.len() != chart.dim() {
                        return Err(InputError::Invalid(format!("field {} has {} components for {} coordinates", i + 1, f.len(), chart.dim())));
                    }
                    let comps = f.iter().map(|e| parse_expr(e, &chart)).collect::<Result<Vec<_>, _>>()?;
                    gens.push(VectorField::new(&chart, comps).map_err(InputError::Core)?);
                }
                Ok(Loaded::Distribution(Distribution::new(&chart, gens)))
            }
            System::Control { time, states, controls, dynamics } => {
                let st: Vec<&str> = states.iter().map(String::as_str).collect();
                let ct: Vec<&str> = controls.iter().map(String::as_str).collect();
                let dy: Vec<&str> = dynamics.iter().map(String::as_str).collect();
                Ok(Loaded::Control(ControlSystem::parse(time, &st, &ct, &params, &dy).map_err(InputError::Core)?))
            }
            System::NormalForm { tau, time, disguise: hide } => {
                let t = TypeVector::new(tau.clone()).map_err(InputError::Core)?;
                let nf = contact_system(&t);
                match time {
                    Some(time) => {
                        if *hide {
                            return Err(InputError::Invalid("a disguised normal form has no control structure; drop `time:` or `disguise:`".into()));
                        }
                        let mut states = Vec::new();
                        let mut controls = Vec::new();
                        let mut dynamics = Vec::new();
                        for tw in &nf.towers {
                            for s in 0..tw.order {
                                states.push(tw.coords[s].name().to_string());
                                dynamics.push(Expr::sym(&tw.coords[s + 1]));
                            }
                            controls.push(tw.coords[tw.order].name().to_string());
                        }
                        if states.contains(time) || controls.contains(time) {
                            return Err(InputError::Invalid(format!("time name {time} clashes with a jet coordinate")));
                        }
                        Ok(Loaded::Control(ControlSystem::new(time, &states, &controls, &[], dynamics).map_err(InputError::Core)?))
                    }
                    None if *hide => Ok(Loaded::Distribution(disguise(&nf.distribution, &mut Sampler::new(seed)).distribution)),
                    None => Ok(Loaded::Distribution(nf.distribution)),
                }
            }
        }
    }
}

/// Chart entries ordered by order j, then l, then s.
pub fn sorted_chart(c: &ChartSpec) -> Vec<(&String, &String)> {
    let mut v: Vec<_> = c.z.iter().collect();
    v.sort_by_key(|(k, _)| tower_key(k).map(|(l, j, s)| (j, l, s)));
    v
}

pub fn parse_expr(text: &str, chart: &Chart) -> Result<Expr, InputError> {
    parse(text, chart).map_err(|e| InputError::Expr { text: text.to_string(), msg: e.to_string() })
}

impl ChartSpec {
    pub fn from_chart(c: &ContactChart) -> Self {
        let mut z = BTreeMap::new();
        for t in &c.towers {
            for (s, f) in t.funcs.iter().enumerate() {
                z.insert(format!("z{}_{}_{}", t.index, t.order, s), f.to_string());
            }
        }
        ChartSpec { x: c.x.to_string(), z }
    }

    /// Parse over `d`'s chart. The type is read off the tower keys, which
    /// must be complete.
    pub fn to_chart(&self, d: &Distribution) -> Result<ContactChart, InputError> {
        let chart = d.chart();
        let x = parse_expr(&self.x, chart)?;
        let mut towers: BTreeMap<(usize, usize), BTreeMap<usize, Expr>> = BTreeMap::new();
        for (k, v) in &self.z {
            let (l, j, s) = tower_key(k).ok_or_else(|| InputError::Invalid(format!("bad chart key {k}")))?;
            towers.entry((j, l)).or_default().insert(s, parse_expr(v, chart)?);
        }
        let k = towers.keys().map(|(j, _)| *j).max().unwrap_or(0);
        let mut rho = vec![0usize; k];
        for &(j, l) in towers.keys() {
            rho[j - 1] = rho[j - 1].max(l);
        }
        let mut out = Vec::new();
        for (&(j, l), levels) in &towers {
            if levels.len() != j + 1 {
                return Err(InputError::Invalid(format!("tower z{l}_{j} needs entries s = 0..={j}")));
            }
            out.push(ChartTower { order: j, index: l, strategy: Strategy::Hint, funcs: levels.values().cloned().collect() });
        }
        for (j, r) in rho.iter().enumerate() {
            for l in 1..=*r {
                if !towers.contains_key(&(j + 1, l)) {
                    return Err(InputError::Invalid(format!("chart is missing tower z{l}_{}", j + 1)));
                }
            }
        }
        let tau = TypeVector::new(rho).map_err(InputError::Core)?;
        let total = goursat_core::contact::normalized_section(d, &x).map(|(z, _)| z).map_err(InputError::Core)?;
        let yx = d.generators().iter().map(|g| g.apply(&x)).find(|e| !e.is_zero());
        let side = yx.filter(|e| !e.is_constant()).into_iter().collect();
        Ok(ContactChart { tau, x, x_strategy: Strategy::Hint, total, towers: out, side_conditions: side })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CAR: &str = "\
# kinematic car
time: t
states: x, y, theta, phi
controls: u1, u2
parameters: L
dynamics:
  u1*cos(theta)
  u1*sin(theta)
  u1/L*tan(phi)
  u2
hint x = x
seed = 3
";

    #[test]
    fn text_and_json_agree() {
        let p = ProblemFile::from_gsf(CAR).unwrap();
        assert!(matches!(&p.system, System::Control { states, .. } if states.len() == 4));
        assert_eq!(p.seed, Some(3));
        assert_eq!(p.hints, [Hint { name: "x".into(), expr: "x".into() }]);
        let j = serde_json::to_string(&p).unwrap();
        assert_eq!(ProblemFile::from_json(&j).unwrap(), p);
        assert_eq!(ProblemFile::from_gsf(&p.to_gsf()).unwrap(), p);
    }

    #[test]
    fn field_lines_keep_parenthesised_commas() {
        assert_eq!(split_exprs("1, (a+b)*c, 0"), ["1", "(a+b)*c", "0"]);
        let p = ProblemFile::from_gsf("coordinates: x, y, z\nfield:\n 1, 0, y\n 0, 1, 0\n").unwrap();
        let d = p.load(0).unwrap().distribution();
        assert_eq!(d.rank(), 2);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = ProblemFile::from_gsf("# c\nbogus\ncoordinates: x\n").unwrap_err();
        assert!(matches!(e, InputError::Syntax { line: 2, .. }));
        assert!(ProblemFile::from_gsf("coordinates: x, y\nfield:\n 1, q\n").unwrap().load(0).is_err());
        assert!(ProblemFile::from_gsf("coordinates: x, y\nfield:\n 1\n").unwrap().load(0).is_err());
        assert!(parse_hints("hint = 3").is_err());
    }

    #[test]
    fn normal_forms() {
        let p = ProblemFile::from_gsf("type: <0,1>\ntime: t\n").unwrap();
        let Loaded::Control(s) = p.load(0).unwrap() else { panic!() };
        assert_eq!(s.states().len(), 2);
        assert_eq!(s.controls().len(), 1);
        let q = ProblemFile::from_gsf("type: <1>\ndisguise: true\n").unwrap();
        assert_eq!(q.load(5).unwrap().chart().coord(0).name(), "y1");
        assert!(ProblemFile::from_gsf("type: <1>\ntime: t\ndisguise: true\n").unwrap().load(0).is_err());
    }

    #[test]
    fn chart_keys() {
        assert_eq!(tower_key("z2_5_4"), Some((2, 5, 4)));
        assert_eq!(tower_key("z1_1_2"), None);
        assert_eq!(tower_key("w1_1_0"), None);
        let spec = parse_chart_lines([(1, "x = a"), (2, "z1_1_0 = b"), (3, "z1_1_1 = c")].into_iter()).unwrap();
        assert_eq!(spec.z.len(), 2);
    }
}
