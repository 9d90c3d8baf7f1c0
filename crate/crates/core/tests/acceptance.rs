//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::process::ExitCode;
use std::time::Instant;

use foliasep_core::blowup::reduce_singularities;
use foliasep_core::real::{CenterFocus, Theorem, TopologicalType, Verdict};
use foliasep_core::report::{analyze, named_fields, random_fields, AnalyzeOptions, Command, CorpusField, Report};
use foliasep_core::Error;

const RANDOM_SEED: u64 = 2024;
const RANDOM_WANTED: usize = 50;
const RANDOM_CAP: usize = 120;

struct Entry {
    name: String,
    report: Report,
}

struct Corpus {
    entries: Vec<Entry>,
    random_kept: usize,
    random_excluded: usize,
    shear_failures: usize,
}

fn run(field: &CorpusField) -> Report {
    let start = Instant::now();
    let r = analyze(&field.spec, Command::All, &AnalyzeOptions::default());
    if std::env::var_os("ACCEPTANCE_VERBOSE").is_some() {
        let blowups = r.tree.as_ref().map_or(0, |t| t.blowups);
        println!(
            "  {:<24} {:>7.2}s blow-ups={blowups} status={:?} {}",
            field.name,
            start.elapsed().as_secs_f64(),
            r.status,
            field.spec.to_text()
        );
    }
    r
}

fn build_corpus() -> Corpus {
    let mut entries = Vec::new();
    let mut shear_failures = 0;
    for f in named_fields() {
        entries.push(Entry {
            name: f.name.clone(),
            report: run(&f),
        });
    }
    let (mut kept, mut excluded) = (0, 0);
    for f in random_fields(RANDOM_SEED, RANDOM_CAP) {
        if kept == RANDOM_WANTED {
            break;
        }
        match f.spec.germ().and_then(|g| reduce_singularities(&g)) {
            Err(Error::UnsupportedExtension { .. }) => {
                excluded += 1;
                continue;
            }
            Err(Error::ShearExhausted { .. }) => shear_failures += 1,
            _ => {}
        }
        kept += 1;
        entries.push(Entry {
            name: format!("{} [{}]", f.name, f.spec.to_text()),
            report: run(&f),
        });
    }
    shear_failures += entries
        .iter()
        .filter(|e| e.report.errors.iter().any(|x| x.code == "foliation.ShearExhausted"))
        .count();
    Corpus {
        entries,
        random_kept: kept,
        random_excluded: excluded,
        shear_failures,
    }
}

struct Outcome {
    pass: bool,
    detail: String,
    problems: Vec<String>,
}

fn outcome(problems: Vec<String>, detail: String) -> Outcome {
    Outcome {
        pass: problems.is_empty(),
        detail,
        problems,
    }
}

fn errors_of(e: &Entry) -> Vec<String> {
    e.report
        .errors
        .iter()
        .map(|x| format!("{}: {} {}", e.name, x.code, x.message))
        .collect()
}

fn by_name<'a>(c: &'a Corpus, name: &str) -> &'a Report {
    &c.entries.iter().find(|e| e.name == name).expect("named field").report
}

fn worked_example(c: &Corpus) -> Outcome {
    let r = by_name(c, "example");
    let mut p = Vec::new();
    let inv = r.invariants.as_ref();
    let (nu, mu) = inv.map_or((0, 0), |i| (i.nu0.value, i.mu0.value));
    if (nu, mu) != (2, 6) {
        p.push(format!("nu0, mu0 = {nu}, {mu}"));
    }
    let mut iota = None;
    if let Some(t) = &r.tree {
        if t.blowups != 1 {
            p.push(format!("{} blow-ups", t.blowups));
        }
        let real: Vec<_> = t.points.iter().filter(|q| !q.blown_up && q.real_copies > 0).collect();
        let sn: Vec<_> = real.iter().filter(|q| q.class == "saddle-node").collect();
        if real.len() != 1 || sn.len() != 1 {
            p.push(format!("{} real final points, {} saddle-nodes", real.len(), sn.len()));
        } else {
            iota = sn[0].weak_index;
            if iota != Some(3) {
                p.push(format!("weak index {iota:?}"));
            }
            match sn[0].topological_type {
                Some(TopologicalType::Saddle | TopologicalType::Node | TopologicalType::SaddleOrNode) => {}
                other => p.push(format!("topological type {other:?}")),
            }
            if sn[0].tangent_to.is_some() {
                p.push("strong separatrix not in D1".into());
            }
        }
    } else {
        p.push("no tree".into());
    }
    match &r.certificate {
        Some(cert) => {
            if cert.theorem != Theorem::EvenMultiplicity || !matches!(cert.verdict, Verdict::SeparatrixExists { .. }) {
                p.push(format!("certificate {:?} via {:?}", cert.verdict, cert.theorem));
            }
            if !cert.witness.as_ref().is_some_and(|w| w.formal_only) {
                p.push("witness is not the formal-only separatrix".into());
            }
        }
        None => p.push("no certificate".into()),
    }
    p.extend(r.errors.iter().map(|e| e.code.to_string()));
    outcome(p, format!("nu0={nu} mu0={mu} iota={iota:?} even-multiplicity"))
}

fn multiplicity_formula(c: &Corpus) -> Outcome {
    let mut p = Vec::new();
    for e in &c.entries {
        p.extend(errors_of(e));
        match &e.report.checks.multiplicity_formula {
            Some(m) if m.holds => {}
            Some(m) => p.push(format!("{}: {} != {} - 1 + {}", e.name, m.nu0, m.nu0_divisor, m.tau0)),
            None if e.report.errors.is_empty() => p.push(format!("{}: not checked", e.name)),
            None => {}
        }
    }
    let total = c.random_kept + c.random_excluded;
    let rate = c.random_excluded as f64 / total.max(1) as f64;
    if c.random_kept < RANDOM_WANTED {
        p.push(format!("only {} random fields kept", c.random_kept));
    }
    if rate >= 0.3 {
        p.push(format!("excluded rate {:.0}%", 100.0 * rate));
    }
    outcome(
        p,
        format!(
            "{} fields, {} random kept, {} excluded for nested extensions ({:.0}%)",
            c.entries.len(),
            c.random_kept,
            c.random_excluded,
            100.0 * rate
        ),
    )
}

fn polar_identity(c: &Corpus) -> Outcome {
    let mut p = Vec::new();
    let mut checked = 0;
    for e in &c.entries {
        let Some(pr) = &e.report.checks.polar else {
            if e.report.errors.is_empty() {
                p.push(format!("{}: not checked", e.name));
            }
            continue;
        };
        if let Some(x) = &pr.identity {
            checked += 1;
            if !x.holds {
                p.push(format!("{}: {} != {} + {} - {}", e.name, x.p0, x.mu0, x.nu0, x.tau));
            }
        }
    }
    let values = |name: &str| {
        by_name(c, name)
            .checks
            .polar
            .as_ref()
            .and_then(|pr| pr.identity.as_ref())
            .map(|x| (x.p0, x.mu0, x.nu0, x.tau))
    };
    let cusp = values("cusp");
    let example = values("example");
    if cusp != Some((3, 2, 1, 0)) {
        p.push(format!("cusp {cusp:?}"));
    }
    if example != Some((8, 6, 2, 0)) {
        p.push(format!("example {example:?}"));
    }
    outcome(
        p,
        format!("{checked} certified polars; cusp {cusp:?}, example {example:?} as (p0, mu0, nu0, tau)"),
    )
}

fn tangency_lemma(c: &Corpus) -> Outcome {
    let mut p = Vec::new();
    let mut branches = 0;
    let mut base_cases = 0;
    for e in &c.entries {
        let Some(pr) = &e.report.checks.polar else { continue };
        if pr.branches.len() != 5 {
            p.push(format!("{}: {} branches", e.name, pr.branches.len()));
        }
        for b in &pr.branches {
            branches += 1;
            let last = b.chain.levels.last().expect("chain has a level");
            if last.tg == 0 && last.intersection == 1 {
                base_cases += 1;
            }
            if !b.holds() {
                p.push(format!(
                    "{}: branch {} lemma={} formula={} steps={} base={}",
                    e.name,
                    b.branch,
                    b.lemma_holds,
                    b.chain.blowup_formula_holds,
                    b.chain.kappa_steps_hold,
                    b.chain.base_case_holds
                ));
            }
        }
    }
    if base_cases != branches {
        p.push(format!("{} of {branches} base cases give tg = 0 and intersection 1", base_cases));
    }
    outcome(p, format!("{branches} random branches, {base_cases} base cases"))
}

fn parities(c: &Corpus) -> Outcome {
    let mut p = Vec::new();
    let mut real = 0;
    let mut top_rgc = 0;
    for e in &c.entries {
        let Some(cert) = &e.report.certificate else {
            if e.report.errors.is_empty() {
                p.push(format!("{}: no certificate", e.name));
            }
            continue;
        };
        real += 1;
        let x = &cert.parities;
        if !x.divisor_parity_holds {
            p.push(format!("{}: nu0(B_R)={} nu0(B_C)={}", e.name, x.nu0_divisor_real, x.nu0_divisor_complex));
        }
        if !x.tau_parity_holds {
            p.push(format!("{}: tau_R={} tau_C={}", e.name, x.tau_real, x.tau_complex));
        }
        if let Some(even) = x.topological_rgc_tau_even {
            top_rgc += 1;
            if !even {
                p.push(format!("{}: topologically RGC with tau_R={}", e.name, x.tau_real));
            }
        }
        if let Some(r) = e.report.checks.polar.as_ref().and_then(|pr| pr.real.as_ref()) {
            if !r.polar_parity_holds || !r.congruence_holds || !r.tau_parity_holds {
                p.push(format!(
                    "{}: p0_R={} p0_C={} tau(Gamma_R)={}",
                    e.name, r.p0_real, r.p0_complex, r.tau_real
                ));
            }
        }
    }
    outcome(p, format!("{real} real fields, {top_rgc} topologically RGC"))
}

fn milnor_oracle(c: &Corpus) -> Outcome {
    let mut p = Vec::new();
    let mut agree = 0;
    for e in &c.entries {
        match &e.report.invariants {
            Some(i) if i.mu0.value == i.mu0_oracle.value => agree += 1,
            Some(i) => p.push(format!("{}: {} vs oracle {}", e.name, i.mu0.value, i.mu0_oracle.value)),
            None => p.push(format!("{}: no invariants", e.name)),
        }
    }
    if c.shear_failures > 0 {
        p.push(format!("{} shear failures", c.shear_failures));
    }
    outcome(
        p,
        format!("{agree}/{} agree, {} shear failures", c.entries.len(), c.shear_failures),
    )
}

fn center_focus(c: &Corpus) -> Outcome {
    let mut p = Vec::new();
    for name in ["center", "second-center"] {
        let r = by_name(c, name);
        let Some(cert) = &r.certificate else {
            p.push(format!("{name}: no certificate"));
            continue;
        };
        let (nu, mu) = (cert.parities.nu0, cert.parities.mu0);
        if cert.flags.center_focus != CenterFocus::Yes {
            p.push(format!("{name}: center-focus {:?}", cert.flags.center_focus));
        }
        if nu % 2 == 0 || mu % 2 == 0 {
            p.push(format!("{name}: nu0={nu} mu0={mu}"));
        }
        let real_seps = r
            .separatrices
            .as_ref()
            .map_or(usize::MAX, |s| s.iter().filter(|s| s.real_copies > 0).count());
        if real_seps != 0 || cert.real_separatrices != 0 {
            p.push(format!("{name}: {real_seps} real separatrices"));
        }
    }
    outcome(p, "y dx-form center and the cubic center".into())
}

fn witnesses(c: &Corpus) -> Outcome {
    let mut p = Vec::new();
    let mut certified = 0;
    for e in &c.entries {
        for x in &e.report.errors {
            if x.code == "real.InconsistentCertificate" {
                p.push(format!("{}: {}", e.name, x.message));
            }
        }
        let Some(cert) = &e.report.certificate else { continue };
        if let Verdict::SeparatrixExists { .. } = cert.verdict {
            certified += 1;
            match &cert.witness {
                Some(w) if w.residual_order >= w.required_order => {}
                Some(w) => p.push(format!("{}: residual {} < {}", e.name, w.residual_order, w.required_order)),
                None => p.push(format!("{}: no witness", e.name)),
            }
        }
    }
    outcome(p, format!("{certified} separatrix-exists certificates"))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let corpus = build_corpus();
    let criteria: [(&str, fn(&Corpus) -> Outcome); 8] = [
        ("worked example regression", worked_example),
        ("multiplicity formula on the corpus", multiplicity_formula),
        ("polar identity on the corpus", polar_identity),
        ("tangency lemma and blow-up formula", tangency_lemma),
        ("parity congruences", parities),
        ("Milnor oracle and shear", milnor_oracle),
        ("center-focus consistency", center_focus),
        ("witness validity", witnesses),
    ];
    let mut failed = 0;
    for (k, (title, check)) in criteria.iter().enumerate() {
        let o = check(&corpus);
        println!(
            "criterion {}: {} {title}: {}",
            k + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        for line in o.problems.iter().take(20) {
            println!("    {line}");
        }
        if !o.pass {
            failed += 1;
        }
    }
    println!("corpus analyzed in {:.1}s", start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
