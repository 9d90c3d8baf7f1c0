//! Input parsing, orchestration of the pipeline stages and the JSON report.

mod corpus;
mod parse;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

pub use corpus::{named_fields, random_fields, CorpusField};
pub use parse::{parse_input, FieldTag, InputSpec};

use crate::blowup::{
    component_valence, export_dot, real_tangency_excess, reduce_singularities, tangency_excess, ReductionTree,
    TreePoint,
};
use crate::error::{Error, Result};
use crate::foliation::{algebraic_multiplicity, is_invariant_param, milnor_number, milnor_oracle, Invariance};
use crate::polar::{check_polar_identities, PolarReport};
use crate::real::{
    certify_separatrix, involution_fixes_real_points, topological_type_saddle_node, Certificate, RealFoliation,
    SignRule, TopologicalType,
};
use crate::separatrix::{
    balanced_divisor, check_multiplicity_formula, classify_reality, default_order, divisor_multiplicity,
    enumerate_separatrices, real_divisor_multiplicity, MultiplicityReport, Separatrix, Source,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Invariants,
    Reduce,
    Separatrices,
    Balanced,
    PolarCheck,
    Certify,
    All,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::Invariants,
        Command::Reduce,
        Command::Separatrices,
        Command::Balanced,
        Command::PolarCheck,
        Command::Certify,
        Command::All,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Invariants => "invariants",
            Command::Reduce => "reduce",
            Command::Separatrices => "separatrices",
            Command::Balanced => "balanced",
            Command::PolarCheck => "polar-check",
            Command::Certify => "certify",
            Command::All => "all",
        }
    }

    fn runs(self, stage: Command) -> bool {
        self == Command::All || self == stage
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown command '{s}'"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnalyzeOptions {
    /// Seed of the polar sample order and of the random test branches.
    pub seed: u64,
    /// Truncation order for separatrices; `2 mu_0 + 4` when absent.
    pub trunc: Option<usize>,
    pub sign_rule: SignRule,
    /// Polar direction `(a : b)` tried first.
    pub polar_hint: Option<(i64, i64)>,
    /// Random branches for the tangency checks.
    pub branches: usize,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            seed: 0,
            trunc: None,
            sign_rule: SignRule::default(),
            polar_hint: None,
            branches: 5,
        }
    }
}

/// A reported number together with how it was computed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Routed<T> {
    pub value: T,
    pub route: &'static str,
}

fn routed<T>(value: T, route: &'static str) -> Routed<T> {
    Routed { value, route }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InputEcho {
    pub text: String,
    pub p: String,
    pub q: String,
    pub field: FieldTag,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Invariants {
    pub nu0: Routed<usize>,
    pub mu0: Routed<usize>,
    pub mu0_oracle: Routed<usize>,
    pub tau0_complex: Routed<usize>,
    pub tau0_real: Option<Routed<usize>>,
    pub blowups: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentReport {
    pub id: usize,
    pub rho: usize,
    pub valence: usize,
    pub dicritical: bool,
    pub multiplicity: usize,
    pub real_copies: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointReport {
    pub id: usize,
    pub parent: Option<usize>,
    pub position: String,
    pub components: Vec<usize>,
    pub class: &'static str,
    pub weak_index: Option<usize>,
    pub topological_type: Option<TopologicalType>,
    pub blown_up: bool,
    /// Component carrying the weak direction of a tangent saddle-node.
    pub tangent_to: Option<usize>,
    pub multiplicity: usize,
    pub real_copies: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeReport {
    pub blowups: usize,
    pub components: Vec<ComponentReport>,
    pub edges: Vec<(usize, usize)>,
    pub points: Vec<PointReport>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeparatrixReport {
    pub id: usize,
    pub param: String,
    pub kind: crate::separatrix::SeparatrixKind,
    pub convergence: crate::separatrix::Convergence,
    pub reality: crate::separatrix::Reality,
    pub partner: Option<usize>,
    pub multiplicity: usize,
    pub real_copies: usize,
    pub source: String,
    pub nu: usize,
    /// Order to which the pull-back of the form vanishes, `None` when the
    /// branch fails the test.
    pub residual_order: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivisorMember {
    pub coefficient: i64,
    pub separatrix: SeparatrixReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivisorReport {
    pub members: Vec<DivisorMember>,
    pub balanced: bool,
    pub j_symmetric: bool,
    pub nu0: Routed<i64>,
    pub nu0_real: Option<Routed<i64>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Checks {
    pub milnor_oracle_agrees: Option<bool>,
    pub separatrices_invariant: Option<bool>,
    pub involution_fixes_real_points: Option<bool>,
    pub multiplicity_formula: Option<MultiplicityReport>,
    pub polar: Option<PolarReport>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    IdentityFailure,
    ResourceFailure,
    InputError,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::InputError => 1,
            Status::IdentityFailure => 2,
            Status::ResourceFailure => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ErrorEntry {
    pub code: &'static str,
    pub message: String,
}

impl From<&Error> for ErrorEntry {
    fn from(e: &Error) -> Self {
        ErrorEntry {
            code: e.code(),
            message: e.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub command: Command,
    pub input: InputEcho,
    pub options: AnalyzeOptions,
    pub truncation: Option<usize>,
    pub invariants: Option<Invariants>,
    pub tree: Option<TreeReport>,
    pub separatrices: Option<Vec<SeparatrixReport>>,
    pub balanced_divisor: Option<DivisorReport>,
    pub checks: Checks,
    pub certificate: Option<Certificate>,
    pub failed_checks: Vec<String>,
    pub errors: Vec<ErrorEntry>,
    pub notes: Vec<String>,
    pub status: Status,
    pub exit_code: i32,
    /// Dual graph in DOT syntax, written on request.
    #[serde(skip)]
    pub dot: Option<String>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn holds(&self) -> bool {
        self.status == Status::Ok
    }
}

fn leaf_label(tree: &ReductionTree, p: &TreePoint, rule: SignRule) -> String {
    let mut s = crate::blowup::default_leaf_label(p);
    if let Ok(t) = topological_type_saddle_node(tree, p.id, rule) {
        s.push(' ');
        s.push_str(match t {
            TopologicalType::TopologicalSaddleNode => "topological-saddle-node",
            TopologicalType::Saddle => "saddle",
            TopologicalType::Node => "node",
            TopologicalType::SaddleOrNode => "saddle-or-node",
        });
    }
    s
}

fn tree_report(tree: &ReductionTree, rule: SignRule) -> TreeReport {
    let components = tree
        .visible_components()
        .map(|c| ComponentReport {
            id: c.id,
            rho: c.weight,
            valence: component_valence(tree, c.id),
            dicritical: c.dicritical,
            multiplicity: c.multiplicity,
            real_copies: c.real_copies,
        })
        .collect();
    let mut edges = Vec::new();
    for c in tree.visible_components() {
        for &n in &c.neighbors {
            if n > c.id && !tree.component(n).auxiliary {
                edges.push((c.id, n));
            }
        }
    }
    let tangent = tree.tangent_saddle_nodes();
    let points = tree
        .points
        .iter()
        .filter(|p| p.class.is_singular())
        .map(|p| PointReport {
            id: p.id,
            parent: p.parent,
            position: p.label(),
            components: p.components.clone(),
            class: p.class.tag(),
            weak_index: p.class.weak_index(),
            topological_type: topological_type_saddle_node(tree, p.id, rule).ok(),
            blown_up: p.blowup.is_some(),
            tangent_to: tangent.iter().find(|(q, _)| *q == p.id).map(|(_, c)| *c),
            multiplicity: p.multiplicity,
            real_copies: p.real_copies,
        })
        .collect();
    TreeReport {
        blowups: tree.blowup_count(),
        components,
        edges,
        points,
        notes: tree.notes.clone(),
    }
}

fn source_text(s: &Source) -> String {
    match s {
        Source::Trace { point } => format!("trace singularity p{point}"),
        Source::Curvette { component, chart, coord } => {
            format!("curvette on D{component} at {}={coord}", chart.label())
        }
    }
}

fn separatrix_report(tree: &ReductionTree, s: &Separatrix) -> Result<SeparatrixReport> {
    let residual_order = match is_invariant_param(&tree.root, &s.param) {
        Invariance::UpToOrder(k) => Some(k),
        Invariance::Exact(true) => Some(usize::MAX),
        _ => None,
    };
    Ok(SeparatrixReport {
        id: s.id,
        param: s.param.to_string(),
        kind: s.kind,
        convergence: s.convergence,
        reality: s.reality,
        partner: s.partner,
        multiplicity: s.multiplicity,
        real_copies: s.real_copies,
        source: source_text(&s.source),
        nu: s.nu()?,
        residual_order,
    })
}

fn invariants(tree: &ReductionTree) -> Result<Invariants> {
    let mu0 = milnor_number(&tree.root)?;
    let oracle = milnor_oracle(&tree.root, mu0 + 3)?;
    Ok(Invariants {
        nu0: routed(algebraic_multiplicity(&tree.root), "lowest order among P and Q"),
        mu0: routed(mu0, "intersection multiplicity of P and Q by resultants"),
        mu0_oracle: routed(oracle, "dimension of the jet quotient by (P, Q)"),
        tau0_complex: routed(
            tangency_excess(tree, 0),
            "tangent saddle-nodes of the reduction tree weighted by multiplicity",
        ),
        tau0_real: tree.root.is_real().then(|| {
            routed(
                real_tangency_excess(tree),
                "real tangent saddle-nodes of the reduction tree weighted by multiplicity",
            )
        }),
        blowups: tree.blowup_count(),
    })
}

struct Run<'a> {
    report: &'a mut Report,
    command: Command,
    opts: &'a AnalyzeOptions,
}

impl Run<'_> {
    fn fail(&mut self, what: impl Into<String>) {
        self.report.failed_checks.push(what.into());
    }

    fn stages(&mut self, spec: &InputSpec) -> Result<()> {
        let germ = spec.germ()?;
        let tree = reduce_singularities(&germ)?;
        let real = germ.is_real();
        let rule = self.opts.sign_rule;
        self.report.dot = Some(export_dot(&tree, &|p| leaf_label(&tree, p, rule)));
        let cmd = self.command;

        if cmd.runs(Command::Invariants) || cmd == Command::PolarCheck {
            let inv = invariants(&tree)?;
            let agree = inv.mu0.value == inv.mu0_oracle.value;
            if !agree {
                self.fail("Milnor number differs from the jet oracle");
            }
            self.report.checks.milnor_oracle_agrees = Some(agree);
            self.report.invariants = Some(inv);
        }
        if cmd.runs(Command::Reduce) || cmd == Command::Separatrices {
            self.report.tree = Some(tree_report(&tree, rule));
            if real {
                let ok = involution_fixes_real_points(&tree);
                if !ok {
                    self.fail("conjugation involution of the tree");
                }
                self.report.checks.involution_fixes_real_points = Some(ok);
            }
        }
        let n = match self.opts.trunc {
            Some(n) => n,
            None => default_order(&tree)?,
        };
        if cmd.runs(Command::Separatrices) || cmd == Command::Balanced {
            self.report.truncation = Some(n);
            let mut seps = enumerate_separatrices(&tree, n)?;
            if real {
                seps = classify_reality(&tree, &seps)?;
            }
            let reports = seps
                .iter()
                .map(|s| separatrix_report(&tree, s))
                .collect::<Result<Vec<_>>>()?;
            let ok = reports.iter().all(|s| s.residual_order.is_some());
            if !ok {
                self.fail("a separatrix fails the invariance test");
            }
            self.report.checks.separatrices_invariant = Some(ok);
            self.report.separatrices = Some(reports);
        }
        if cmd.runs(Command::Balanced) {
            self.report.truncation = Some(n);
            let b = balanced_divisor(&tree, real, n)?;
            let members = b
                .members
                .iter()
                .map(|(s, a)| {
                    Ok(DivisorMember {
                        coefficient: *a,
                        separatrix: separatrix_report(&tree, s)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let m = check_multiplicity_formula(&tree, &b)?;
            if !m.holds {
                self.fail("multiplicity formula nu_0(F) = nu_0(B) - 1 + tau_0(F)");
            }
            if !m.inequality_holds {
                self.fail("multiplicity inequality nu_0(B) <= nu_0(F) + 1");
            }
            if !b.balanced {
                self.fail("balanced divisor conditions");
            }
            self.report.balanced_divisor = Some(DivisorReport {
                members,
                balanced: b.balanced,
                j_symmetric: b.j_symmetric,
                nu0: routed(divisor_multiplicity(&b)?, "sum of coefficient times branch multiplicity"),
                nu0_real: if real {
                    Some(routed(real_divisor_multiplicity(&b)?, "same sum over the real branches"))
                } else {
                    None
                },
            });
            self.report.checks.multiplicity_formula = Some(m);
        }
        if cmd.runs(Command::PolarCheck) {
            let p = check_polar_identities(&tree, self.opts.seed, self.opts.branches, self.opts.polar_hint)?;
            if let Some(id) = &p.identity {
                if !id.holds {
                    self.fail("polar identity p_0(F, B) = mu_0 + nu_0 - tau_0(F, Gamma)");
                }
            } else {
                self.report.notes.push("radial foliation: no generic polar".into());
            }
            for (k, b) in p.branches.iter().enumerate() {
                if !b.holds() {
                    self.fail(format!("tangency checks along random branch {k}"));
                }
            }
            if p.real.as_ref().is_some_and(|r| !r.holds()) {
                self.fail("real polar parities");
            }
            self.report.checks.polar = Some(p);
        }
        if cmd.runs(Command::Certify) {
            if !real && cmd == Command::All {
                self.report.notes.push("field is not real: no certificate".into());
                return Ok(());
            }
            let rf = RealFoliation::from_tree(tree)?;
            let c = certify_separatrix(&rf, rule)?;
            if !c.parities.divisor_parity_holds {
                self.fail("parity nu_0(B_R) = nu_0(B_C) mod 2");
            }
            if !c.parities.tau_parity_holds {
                self.fail("parity tau_0(F_R) = tau_0(F_C) mod 2");
            }
            if c.parities.topological_rgc_tau_even == Some(false) {
                self.fail("tau_0(F_R) even for a topologically RGC field");
            }
            if !c.center_focus_consistent {
                self.fail("center-focus consistency");
            }
            if !c.second_type_consistent {
                self.fail("real separatrix for topological second type with nu_0 or mu_0 even");
            }
            self.report.certificate = Some(c);
        }
        Ok(())
    }
}

/// Runs the stages of `command` on `spec`. Errors are recorded in the
/// report, which is deterministic given the input and the options.
pub fn analyze(spec: &InputSpec, command: Command, opts: &AnalyzeOptions) -> Report {
    let mut report = Report {
        command,
        input: InputEcho {
            text: spec.to_text(),
            p: spec.p.to_string(),
            q: spec.q.to_string(),
            field: spec.field,
        },
        options: opts.clone(),
        truncation: None,
        invariants: None,
        tree: None,
        separatrices: None,
        balanced_divisor: None,
        checks: Checks::default(),
        certificate: None,
        failed_checks: Vec::new(),
        errors: Vec::new(),
        notes: Vec::new(),
        status: Status::Ok,
        exit_code: 0,
        dot: None,
    };
    let outcome = Run {
        report: &mut report,
        command,
        opts,
    }
    .stages(spec);
    report.status = match &outcome {
        Err(e) => {
            report.errors.push(e.into());
            status_of(e)
        }
        Ok(()) if report.failed_checks.is_empty() => Status::Ok,
        Ok(()) => Status::IdentityFailure,
    };
    report.exit_code = report.status.exit_code();
    report
}

/// Status for a failure that stops the pipeline.
pub fn status_of(e: &Error) -> Status {
    if e.is_resource_failure() {
        Status::ResourceFailure
    } else if matches!(e, Error::InconsistentCertificate(_)) {
        Status::IdentityFailure
    } else {
        Status::InputError
    }
}

/// Parses and analyzes. Only a syntax error is returned as `Err`.
pub fn analyze_text(text: &str, command: Command, opts: &AnalyzeOptions) -> Result<Report> {
    Ok(analyze(&parse_input(text)?, command, opts))
}
