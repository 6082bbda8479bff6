//! Machine-readable reports. Every expression is stored in its canonical
//! printed form, which parses back over the report's chart.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use goursat_core::classify::{GoursatVerdict, KinematicVectors, WeberCheck};
use goursat_core::contact::{CoframeFiltration, Construction, ContactChart, Route};
use goursat_core::geometry::{Codistribution, Distribution, OneForm, VectorField};
use goursat_core::linalg::GenericRankResult;
use goursat_core::verify::{Certificate, FeedbackReport, Membership};

use crate::problem::{ChartSpec, ProblemFile};

/// Nonzero components keyed by coordinate name.
pub type Components = BTreeMap<String, String>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bundle {
    pub rank: usize,
    pub generators: Vec<Components>,
}

fn components(chart: &goursat_core::expr::Chart, comps: &[goursat_core::expr::Expr]) -> Components {
    comps.iter().enumerate().filter(|(_, e)| !e.is_zero()).map(|(i, e)| (chart.coord(i).name().to_string(), e.to_string())).collect()
}

pub fn field(v: &VectorField) -> Components {
    components(v.chart(), v.components())
}

pub fn form(w: &OneForm) -> Components {
    components(w.chart(), w.components())
}

impl Bundle {
    pub fn of_distribution(d: &Distribution) -> Self {
        let d = d.simplified();
        Bundle { rank: d.rank(), generators: d.generators().iter().map(field).collect() }
    }

    pub fn of_codistribution(c: &Codistribution) -> Self {
        let c = c.simplified();
        Bundle { rank: c.rank(), generators: c.generators().iter().map(form).collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemEcho {
    pub coordinates: Vec<String>,
    pub parameters: Vec<String>,
    pub generators: Vec<Components>,
}

impl SystemEcho {
    pub fn new(d: &Distribution) -> Self {
        let c = d.chart();
        SystemEcho {
            coordinates: c.coords().iter().map(|s| s.name().to_string()).collect(),
            parameters: c.params().iter().map(|s| s.name().to_string()).collect(),
            generators: d.generators().iter().map(field).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProlongReport {
    pub control: String,
    pub times: usize,
    pub chain: Vec<String>,
    pub renamed: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankCheck {
    pub level: usize,
    pub rank: usize,
    pub pivot_columns: Vec<String>,
    pub sample_points: Vec<BTreeMap<String, String>>,
}

impl RankCheck {
    pub fn new(level: usize, chart: &goursat_core::expr::Chart, r: &GenericRankResult) -> Self {
        RankCheck {
            level,
            rank: r.rank,
            pivot_columns: r.pivot_cols.iter().map(|&c| chart.coord(c).name().to_string()).collect(),
            sample_points: r.sample_points.iter().map(|p| p.iter().map(|(s, q)| (s.name().to_string(), q.to_string())).collect()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Kinematics {
    pub velocity: Vec<i64>,
    pub acceleration: Vec<i64>,
    pub deceleration: Vec<i64>,
    pub big_n: Vec<i64>,
}

impl From<&KinematicVectors> for Kinematics {
    fn from(k: &KinematicVectors) -> Self {
        Kinematics { velocity: k.velocity.clone(), acceleration: k.acceleration.clone(), deceleration: k.deceleration.clone(), big_n: k.big_n.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Identity {
    pub name: String,
    pub lhs: i64,
    pub rhs: i64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Intersection {
    pub level: usize,
    pub rank: usize,
    pub expected: usize,
    pub integrable: bool,
    pub pass: bool,
    pub bundle: Bundle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Weber {
    pub applicable: bool,
    pub singular_found: bool,
    pub singular_rank: usize,
    pub generic_degree: usize,
    pub resolvent: Option<Bundle>,
    pub resolvent_integrable: bool,
    /// Δ_k = 2: the resolvent's integrability is the deciding test.
    pub q2_caveat: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub is_goursat: bool,
    pub tau: Option<Vec<usize>>,
    pub p: Option<usize>,
    pub k: usize,
    pub first_failure: Option<String>,
    pub diagnostics: Vec<String>,
    pub identities: Vec<Identity>,
    pub intersections: Vec<Intersection>,
    pub weber: Option<Weber>,
    pub k1_path: bool,
    /// Char V^(i) for i = 0..=k
    pub char_bundles: Vec<Bundle>,
    pub char_integrable: Vec<bool>,
}

impl Verdict {
    pub fn new(v: &GoursatVerdict) -> Self {
        let rec = v.record();
        let weber = v.weber.as_ref().map(|w| match w {
            WeberCheck::NotApplicable => Weber {
                applicable: false,
                singular_found: false,
                singular_rank: 0,
                generic_degree: 0,
                resolvent: None,
                resolvent_integrable: true,
                q2_caveat: false,
                pass: true,
            },
            WeberCheck::Checked { singular, resolvent, integrable, q2_caveat } => Weber {
                applicable: true,
                singular_found: singular.found,
                singular_rank: singular.basis.len(),
                generic_degree: singular.generic_degree,
                resolvent: resolvent.as_ref().map(Bundle::of_distribution),
                resolvent_integrable: *integrable,
                q2_caveat: *q2_caveat,
                pass: w.pass(),
            },
        });
        Verdict {
            is_goursat: v.is_goursat,
            tau: v.tau.as_ref().map(|t| t.as_slice().to_vec()),
            p: v.tau.as_ref().map(|t| t.p()),
            k: v.k(),
            first_failure: v.first_failure.clone(),
            diagnostics: v.diagnostics.clone(),
            identities: v.identities.iter().map(|c| Identity { name: c.name.clone(), lhs: c.lhs, rhs: c.rhs, pass: c.pass() }).collect(),
            intersections: v
                .intersections
                .iter()
                .map(|c| Intersection {
                    level: c.level,
                    rank: c.rank,
                    expected: c.expected,
                    integrable: c.integrable,
                    pass: c.pass(),
                    bundle: v.flag.inters[c.level].as_ref().map(Bundle::of_distribution).unwrap_or(Bundle { rank: 0, generators: vec![] }),
                })
                .collect(),
            weber,
            k1_path: v.k1_path,
            char_bundles: v.flag.chars.iter().map(Bundle::of_distribution).collect(),
            char_integrable: rec.levels.iter().map(|l| l.char_integrable).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Level {
    pub name: String,
    pub expected: usize,
    pub bundle: Bundle,
    /// Filtered basis forms added at this level.
    pub added: Vec<Components>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fundamental {
    pub order: usize,
    pub bundle: Bundle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Integral {
    pub expr: String,
    pub strategy: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FundamentalFns {
    pub order: usize,
    pub functions: Vec<Integral>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RequestReport {
    pub label: String,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tower {
    pub order: usize,
    pub index: usize,
    pub strategy: String,
    /// z^{l,j}_0, …, z^{l,j}_j
    pub functions: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartReport {
    pub tau: Vec<usize>,
    pub x: String,
    pub x_strategy: String,
    pub total: Components,
    pub towers: Vec<Tower>,
    pub side_conditions: Vec<String>,
}

impl ChartReport {
    pub fn new(c: &ContactChart) -> Self {
        ChartReport {
            tau: c.tau.as_slice().to_vec(),
            x: c.x.to_string(),
            x_strategy: c.x_strategy.as_str().into(),
            total: field(&c.total),
            towers: c
                .towers
                .iter()
                .map(|t| Tower { order: t.order, index: t.index, strategy: t.strategy.as_str().into(), functions: t.funcs.iter().map(|f| f.to_string()).collect() })
                .collect(),
            side_conditions: c.side_conditions.iter().map(|e| e.to_string()).collect(),
        }
    }

    /// Lookup by `z<l>_<j>_<s>` indices.
    pub fn z(&self, l: usize, j: usize, s: usize) -> Option<&str> {
        self.towers.iter().find(|t| t.index == l && t.order == j).and_then(|t| t.functions.get(s)).map(String::as_str)
    }

    pub fn spec(&self) -> ChartSpec {
        let mut z = BTreeMap::new();
        for t in &self.towers {
            for (s, f) in t.functions.iter().enumerate() {
                z.insert(format!("z{}_{}_{}", t.index, t.order, s), f.clone());
            }
        }
        ChartSpec { x: self.x.clone(), z }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionReport {
    pub route: String,
    pub filtration: Vec<Level>,
    pub fundamental_bundles: Vec<Fundamental>,
    pub fundamental_functions: Vec<FundamentalFns>,
    /// Π^k, route B only.
    pub pi: Option<Bundle>,
    pub requests: Vec<RequestReport>,
    pub requested: usize,
    pub abandoned: Vec<String>,
}

fn filtration(f: &CoframeFiltration) -> Vec<Level> {
    f.levels
        .iter()
        .enumerate()
        .map(|(i, l)| Level { name: l.name.clone(), expected: l.expected, bundle: Bundle::of_codistribution(&l.bundle), added: f.added(i).iter().map(form).collect() })
        .collect()
}

impl ConstructionReport {
    pub fn new(c: &Construction) -> Self {
        ConstructionReport {
            route: match c.route {
                Route::A => "A".into(),
                Route::B => "B".into(),
            },
            filtration: filtration(&c.filtration),
            fundamental_bundles: c.fundamentals.iter().map(|f| Fundamental { order: f.order, bundle: Bundle::of_codistribution(&f.bundle) }).collect(),
            fundamental_functions: c
                .functions
                .iter()
                .map(|f| FundamentalFns {
                    order: f.order,
                    functions: f.functions.iter().map(|i| Integral { expr: i.f.to_string(), strategy: i.strategy.as_str().into() }).collect(),
                })
                .collect(),
            pi: c.pi.as_ref().map(Bundle::of_distribution),
            requests: c.requests.iter().map(|r| RequestReport { label: r.label.clone(), count: r.count }).collect(),
            requested: c.requested(),
            abandoned: c.abandoned.iter().map(|e| e.to_string()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub pass: bool,
    pub annihilation_checks: usize,
    pub annihilation_pass: bool,
    pub jacobian_rank: usize,
    pub dim: usize,
    pub count: usize,
    pub distribution_rank: usize,
    pub expected_rank: usize,
    pub side_conditions: Vec<String>,
    pub failures: Vec<String>,
}

impl From<&Certificate> for CertificateReport {
    fn from(c: &Certificate) -> Self {
        CertificateReport {
            pass: c.pass,
            annihilation_checks: c.annihilation.len(),
            annihilation_pass: c.annihilation_pass(),
            jacobian_rank: c.jacobian_rank,
            dim: c.dim,
            count: c.count,
            distribution_rank: c.distribution_rank,
            expected_rank: c.expected_rank,
            side_conditions: c.side_conditions.iter().map(|e| e.to_string()).collect(),
            failures: c.failures(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Feedback {
    pub time: String,
    pub is_goursat: bool,
    pub k: Option<usize>,
    pub rho_k: Option<usize>,
    /// `char-annihilator` or `upsilon`
    pub tested: Option<String>,
    pub against: Option<Bundle>,
    pub dt_member: bool,
    /// The necessary condition for static feedback equivalence to a
    /// Brunovsky normal form.
    pub necessary_condition: String,
    pub static_feedback_inspect: Option<bool>,
}

impl Feedback {
    pub fn new(time: &str, is_goursat: bool, r: Option<&FeedbackReport>, inspect: Option<bool>) -> Self {
        let met = r.is_some_and(|r| r.met);
        Feedback {
            time: time.into(),
            is_goursat,
            k: r.map(|r| r.k),
            rho_k: r.map(|r| r.rho_k),
            tested: r.map(|r| match r.tested {
                Membership::CharAnnihilator => "char-annihilator".into(),
                Membership::Upsilon => "upsilon".into(),
            }),
            against: r.map(|r| Bundle::of_codistribution(&r.against)),
            dt_member: r.is_some_and(|r| r.dt_member),
            necessary_condition: if met { "met" } else { "violated" }.into(),
            static_feedback_inspect: inspect,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub kind: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub input: Option<ProblemFile>,
    pub seed: u64,
    pub prolong: Vec<ProlongReport>,
    pub system: Option<SystemEcho>,
    pub derived_type: Option<Vec<Vec<usize>>>,
    pub rank_checks: Vec<RankCheck>,
    pub kinematics: Option<Kinematics>,
    pub verdict: Option<Verdict>,
    pub construction: Option<ConstructionReport>,
    pub chart: Option<ChartReport>,
    pub certificate: Option<CertificateReport>,
    pub feedback: Option<Feedback>,
    pub error: Option<ErrorReport>,
    pub exit_code: i32,
}

impl Report {
    pub fn new(command: &str, seed: u64) -> Self {
        Report {
            command: command.into(),
            input: None,
            seed,
            prolong: Vec::new(),
            system: None,
            derived_type: None,
            rank_checks: Vec::new(),
            kinematics: None,
            verdict: None,
            construction: None,
            chart: None,
            certificate: None,
            feedback: None,
            error: None,
            exit_code: 0,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    /// Every expression string in the report, for round-trip checks.
    pub fn expressions(&self) -> Vec<String> {
        let mut out = Vec::new();
        let bundle = |b: &Bundle, out: &mut Vec<String>| out.extend(b.generators.iter().flat_map(|g| g.values().cloned()));
        if let Some(s) = &self.system {
            out.extend(s.generators.iter().flat_map(|g| g.values().cloned()));
        }
        if let Some(v) = &self.verdict {
            for b in &v.char_bundles {
                bundle(b, &mut out);
            }
            for i in &v.intersections {
                bundle(&i.bundle, &mut out);
            }
            if let Some(r) = v.weber.as_ref().and_then(|w| w.resolvent.as_ref()) {
                bundle(r, &mut out);
            }
        }
        if let Some(c) = &self.construction {
            for l in &c.filtration {
                bundle(&l.bundle, &mut out);
                out.extend(l.added.iter().flat_map(|g| g.values().cloned()));
            }
            for f in &c.fundamental_bundles {
                bundle(&f.bundle, &mut out);
            }
            out.extend(c.fundamental_functions.iter().flat_map(|f| f.functions.iter().map(|i| i.expr.clone())));
            if let Some(p) = &c.pi {
                bundle(p, &mut out);
            }
            out.extend(c.abandoned.iter().cloned());
        }
        if let Some(c) = &self.chart {
            out.push(c.x.clone());
            out.extend(c.total.values().cloned());
            out.extend(c.towers.iter().flat_map(|t| t.functions.iter().cloned()));
            out.extend(c.side_conditions.iter().cloned());
        }
        if let Some(c) = &self.certificate {
            out.extend(c.side_conditions.iter().cloned());
        }
        if let Some(b) = self.feedback.as_ref().and_then(|f| f.against.as_ref()) {
            bundle(b, &mut out);
        }
        out
    }
}

fn write_bundle(s: &mut String, prefix: &str, b: &Bundle) {
    let gens: Vec<String> = b
        .generators
        .iter()
        .map(|g| {
            let mut t = String::new();
            for (i, (c, e)) in g.iter().enumerate() {
                let (sign, body) = match e.as_str() {
                    "1" => ("+", format!("{prefix}{c}")),
                    "-1" => ("-", format!("{prefix}{c}")),
                    _ => ("+", format!("({e}){prefix}{c}")),
                };
                match (i, sign) {
                    (0, "-") => t.push('-'),
                    (0, _) => {}
                    (_, sg) => {
                        let _ = write!(t, " {sg} ");
                    }
                }
                t += &body;
            }
            t
        })
        .collect();
    let _ = write!(s, "{{{}}}", gens.join(", "));
}

fn angle(v: &[usize]) -> String {
    format!("<{}>", v.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(","))
}

/// The human-readable rendering.
pub fn render_text(r: &Report) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "command: {}   seed: {}", r.command, r.seed);
    for p in &r.prolong {
        let _ = writeln!(s, "prolonged {} {} time(s): chain {}", p.control, p.times, p.chain.join(" -> "));
        for (want, got) in &p.renamed {
            let _ = writeln!(s, "  renamed {want} to {got}");
        }
    }
    if let Some(sys) = &r.system {
        let _ = writeln!(s, "coordinates: {}", sys.coordinates.join(", "));
        if !sys.parameters.is_empty() {
            let _ = writeln!(s, "parameters: {}", sys.parameters.join(", "));
        }
    }
    if let Some(d) = &r.derived_type {
        let lv: Vec<String> = d.iter().map(|l| format!("[{}]", l.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))).collect();
        let _ = writeln!(s, "refined derived type: [{}]", lv.join(","));
    }
    if let Some(k) = &r.kinematics {
        let _ = writeln!(s, "velocity {:?}  acceleration {:?}  deceleration {:?}", k.velocity, k.acceleration, k.deceleration);
    }
    if let Some(v) = &r.verdict {
        match (&v.tau, v.is_goursat) {
            (Some(t), true) => {
                let _ = writeln!(s, "Goursat bundle of type {} (P = {})", angle(t), v.p.unwrap_or(0));
            }
            _ => {
                let _ = writeln!(s, "not a Goursat bundle: {}", v.first_failure.as_deref().unwrap_or("unknown"));
            }
        }
        for i in v.identities.iter().filter(|i| !i.pass) {
            let _ = writeln!(s, "  identity {} fails: {} != {}", i.name, i.lhs, i.rhs);
        }
        for d in v.diagnostics.iter().skip(1) {
            let _ = writeln!(s, "  {d}");
        }
        for (i, b) in v.char_bundles.iter().enumerate() {
            let _ = write!(s, "  Char V^({i}) = ");
            write_bundle(&mut s, "∂", b);
            s.push('\n');
        }
        for i in &v.intersections {
            let _ = write!(s, "  V^({}) ∩ Char V^({}) = ", i.level - 1, i.level);
            write_bundle(&mut s, "∂", &i.bundle);
            s.push('\n');
        }
        if let Some(w) = v.weber.as_ref().filter(|w| w.applicable) {
            let _ = writeln!(s, "  singular sub-bundle: {} (rank {})", if w.singular_found { "found" } else { "not found" }, w.singular_rank);
            if let Some(b) = &w.resolvent {
                let _ = write!(s, "  resolvent = ");
                write_bundle(&mut s, "∂", b);
                let _ = writeln!(s, " ({})", if w.resolvent_integrable { "integrable" } else { "not integrable" });
            }
        }
    }
    if let Some(c) = &r.construction {
        let _ = writeln!(s, "route {}", c.route);
        if let Some(p) = &c.pi {
            let _ = write!(s, "  Pi^k = ");
            write_bundle(&mut s, "∂", p);
            s.push('\n');
        }
        for l in &c.filtration {
            let _ = write!(s, "  {} (rank {}) = ", l.name, l.bundle.rank);
            write_bundle(&mut s, "d", &l.bundle);
            s.push('\n');
        }
        for f in &c.fundamental_bundles {
            let _ = write!(s, "  Omega_{} = ", f.order);
            write_bundle(&mut s, "d", &f.bundle);
            s.push('\n');
        }
        for f in &c.fundamental_functions {
            let fs: Vec<String> = f.functions.iter().map(|i| format!("{} [{}]", i.expr, i.strategy)).collect();
            let _ = writeln!(s, "  F_{} = {{{}}}", f.order, fs.join(", "));
        }
        let _ = writeln!(s, "  first integrals requested: {}", c.requested);
        for a in &c.abandoned {
            let _ = writeln!(s, "  abandoned candidate x = {a}");
        }
    }
    if let Some(c) = &r.chart {
        let _ = writeln!(s, "chart:");
        let _ = writeln!(s, "  x = {}", c.x);
        for t in &c.towers {
            for (i, f) in t.functions.iter().enumerate() {
                let _ = writeln!(s, "  z{}_{}_{} = {}", t.index, t.order, i, f);
            }
        }
        for sc in &c.side_conditions {
            let _ = writeln!(s, "# assumes {sc} != 0");
        }
    }
    if let Some(c) = &r.certificate {
        let _ = writeln!(
            s,
            "certificate: {} ({} annihilation checks, Jacobian rank {} of {}, rank {} = 1+P {})",
            if c.pass { "PASS" } else { "FAIL" },
            c.annihilation_checks,
            c.jacobian_rank,
            c.dim,
            c.distribution_rank,
            c.expected_rank
        );
        for f in &c.failures {
            let _ = writeln!(s, "  {f}");
        }
    }
    if let Some(f) = &r.feedback {
        let _ = writeln!(s, "static feedback necessary condition: {}", f.necessary_condition.to_uppercase());
        if let (Some(t), Some(b)) = (&f.tested, &f.against) {
            let _ = write!(s, "  d{} {} ", f.time, if f.dt_member { "∈" } else { "∉" });
            write_bundle(&mut s, "d", b);
            let _ = writeln!(s, " ({t})");
        }
        if let Some(i) = f.static_feedback_inspect {
            let _ = writeln!(s, "  chart has static feedback shape: {i}");
        }
    }
    if let Some(e) = &r.error {
        let _ = writeln!(s, "error ({}): {}", e.kind, e.message);
    }
    s
}
