use std::fs;
use std::time::Duration;

use crate::algorithmic::omega_set;
use crate::algorithmic::{algorithm1, subprocess_enumerator, Outcome};
use crate::assumptions::{
    reduction_campaign, refutable_under, residual_prohibition, AssumptionContext, Conclusion,
    Verification,
};
use crate::eio::{any_zero_oracle, odd_input_zero_oracle};
use crate::order::{classify, down_closure, up_closure, Requirement};
use crate::sampling::check_theorems;
use crate::setup::{is_more_permissive, is_refutable, is_verifiable, RefutabilityReport};
use crate::temporal::{decompose, is_liveness, is_safety, nabla, UniverseParams};

use super::file::{eio_document, from_doc, parse_file, temporal_document, WorkbenchDoc};
use super::{
    CampaignArgs, CliError, Command, EioCommand, PropertyArgs, Report, ReqArgs, SetupArgs,
    TemporalCommand, Verdict, Workbench,
};

/// Longest list printed in full.
const LIST_CAP: usize = 256;

pub(super) fn execute(command: Command) -> Result<Report, CliError> {
    match command {
        Command::Classify(a) => classify_cmd(&a),
        Command::Closure(a) => closure_cmd(&a),
        Command::Refutable(a) => decide_cmd(&a, Decide::Refutable),
        Command::Verifiable(a) => decide_cmd(&a, Decide::Verifiable),
        Command::Omega(a) => omega_cmd(&a),
        Command::RefutableUnder { target, assumption } => refutable_under_cmd(&target, &assumption),
        Command::Residual { target, assumption } => residual_cmd(&target, &assumption),
        Command::CampaignReduce {
            target,
            assumption,
            system,
        } => campaign_reduce_cmd(&target, &assumption, &system),
        Command::Campaign(a) => campaign_cmd(&a),
        Command::Temporal(t) => temporal_cmd(t),
        Command::Eio(EioCommand::Gen { bound, out }) => {
            crate::eio::build_universe(bound).map_err(|e| CliError::Usage(e.to_string()))?;
            generated(eio_document(bound), out)
        }
        Command::Permissive {
            file,
            more,
            less,
            cap,
        } => {
            let wb = parse_file(&file)?;
            let p = is_more_permissive(&wb.setup(&more)?, &wb.setup(&less)?, &wb.model, cap)?;
            let mut r = Report::new(Verdict::of(p.holds));
            match &p.separating {
                Some(sep) => {
                    r.line(format!(
                        "{less} refutes {} which {more} cannot refute",
                        braces(sep)
                    ));
                    r.field("universe", wb.universe_label())
                        .field("separating", listing(sep));
                }
                None => {
                    r.line(format!(
                        "every requirement refutable in {less} is refutable in {more}"
                    ));
                    r.field("universe", wb.universe_label());
                }
            }
            Ok(r)
        }
        Command::Check {
            seed,
            trials,
            max_elements,
        } => {
            if max_elements < 2 {
                return Err(CliError::Usage("--max-elements must be at least 2".into()));
            }
            let tallies = check_theorems(seed, trials, max_elements);
            let clean = tallies.iter().all(|t| t.violations == 0);
            let mut r = Report::new(Verdict::of(clean));
            for t in &tallies {
                r.line(t.to_string());
            }
            r.field("seed", seed)
                .field("trials", trials)
                .field("universe", format!("random(max_elements={max_elements})"))
                .field(
                    "violations",
                    tallies.iter().map(|t| t.violations).sum::<usize>(),
                );
            Ok(r)
        }
    }
}

fn braces(ids: &[impl AsRef<str>]) -> String {
    let parts: Vec<&str> = ids.iter().map(AsRef::as_ref).collect();
    format!("{{{}}}", parts.join(", "))
}

/// Space-separated ids, truncated after [`LIST_CAP`] entries.
fn listing(ids: &[impl AsRef<str>]) -> String {
    if ids.is_empty() {
        return "-".to_string();
    }
    let mut parts: Vec<&str> = ids.iter().take(LIST_CAP).map(AsRef::as_ref).collect();
    let more = ids.len().saturating_sub(LIST_CAP);
    let tail = format!("...(+{more})");
    if more > 0 {
        parts.push(&tail);
    }
    parts.join(" ")
}

fn members(wb: &Workbench, r: &Requirement) -> Vec<String> {
    r.member_ids(&wb.model)
        .into_iter()
        .map(String::from)
        .collect()
}

fn classify_cmd(a: &ReqArgs) -> Result<Report, CliError> {
    let wb = parse_file(&a.file)?;
    let r = wb.requirement(&a.req)?;
    let c = classify(&wb.model, r)?;
    let kind = match (
        c.is_trivial,
        c.is_obligation,
        c.is_prohibition,
        c.is_semi_monotone,
    ) {
        (true, ..) => "trivial",
        (_, true, _, _) => "obligation",
        (_, _, true, _) => "prohibition",
        (_, _, _, true) => "semi-monotone",
        _ => "none",
    };
    let mut rep = Report::new(Verdict::Yes);
    rep.line(format!(
        "{}: {} of {} systems, {kind}",
        a.req,
        r.len(),
        wb.model.len()
    ));
    rep.field("universe", wb.universe_label())
        .field("requirement", &a.req)
        .field("members", r.len())
        .field("type", kind)
        .field("obligation", c.is_obligation)
        .field("prohibition", c.is_prohibition)
        .field("trivial", c.is_trivial)
        .field("semi_monotone", c.is_semi_monotone);
    Ok(rep)
}

fn closure_cmd(a: &ReqArgs) -> Result<Report, CliError> {
    let wb = parse_file(&a.file)?;
    let r = wb.requirement(&a.req)?;
    let up = members(&wb, &up_closure(&wb.model, r)?);
    let down = members(&wb, &down_closure(&wb.model, r)?);
    let mut rep = Report::new(Verdict::Yes);
    rep.line(format!("up({}) = {}", a.req, braces(&up)))
        .line(format!("down({}) = {}", a.req, braces(&down)));
    rep.field("universe", wb.universe_label())
        .field("up", listing(&up))
        .field("down", listing(&down));
    Ok(rep)
}

#[derive(Clone, Copy)]
enum Decide {
    Refutable,
    Verifiable,
}

fn render_decision(rep: &mut Report, report: &RefutabilityReport, settled: &str) {
    for (s, t) in report.witnesses.iter().take(20) {
        rep.line(format!("  {s} {settled} by {t}"));
    }
    for s in report.blockers.iter().take(20) {
        rep.line(format!("  {s}: no witness"));
    }
    rep.field("witnesses", report.witnesses.len())
        .field("blockers", report.blockers.len());
    if let Some((s, t)) = report.witnesses.iter().next() {
        rep.field("example", s).field("witness", t);
    }
    if let Some(b) = report.blockers.iter().next() {
        rep.field("blocker", b);
    }
}

fn decide_cmd(a: &SetupArgs, which: Decide) -> Result<Report, CliError> {
    let wb = parse_file(&a.target.file)?;
    let r = wb.requirement(&a.target.req)?;
    let setup = wb.setup(&a.setup)?;
    let (report, word, settled) = match which {
        Decide::Refutable => (is_refutable(&setup, r)?, "refutable", "refuted"),
        Decide::Verifiable => (is_verifiable(&setup, r)?, "verifiable", "verified"),
    };
    let mut rep = Report::new(Verdict::of(report.holds));
    rep.line(format!(
        "{} is {}{word} in {}",
        a.target.req,
        if report.holds { "" } else { "not " },
        a.setup
    ));
    render_decision(&mut rep, &report, settled);
    rep.field("universe", wb.universe_label())
        .field("setup", &a.setup);
    Ok(rep)
}

fn omega_cmd(a: &SetupArgs) -> Result<Report, CliError> {
    let wb = parse_file(&a.target.file)?;
    let r = wb.requirement(&a.target.req)?;
    let setup = wb.setup(&a.setup)?;
    let omega = omega_set(&setup, r)?;
    let mut rep = Report::new(Verdict::Yes);
    rep.line(format!(
        "{} of {} observations in {} are irremediable for {}",
        omega.len(),
        setup.observations().len(),
        a.setup,
        a.target.req
    ));
    rep.field("universe", wb.universe_label())
        .field("count", omega.len())
        .field("omega", listing(&omega));
    Ok(rep)
}

fn refutable_under_cmd(a: &SetupArgs, assumption: &str) -> Result<Report, CliError> {
    let wb = parse_file(&a.target.file)?;
    let r = wb.requirement(&a.target.req)?;
    let asm = wb.assumption(assumption)?;
    let setup = wb.setup(&a.setup)?;
    let report = refutable_under(&AssumptionContext::new(&setup, r, asm)?)?;
    let mut rep = Report::new(Verdict::of(report.holds));
    rep.line(format!(
        "{} is {}refutable in {} under {assumption}",
        a.target.req,
        if report.holds { "" } else { "not " },
        a.setup
    ));
    render_decision(&mut rep, &report, "refuted");
    rep.field("universe", wb.universe_label())
        .field("setup", &a.setup)
        .field("assumption", assumption);
    Ok(rep)
}

fn residual_cmd(a: &ReqArgs, assumption: &str) -> Result<Report, CliError> {
    let wb = parse_file(&a.file)?;
    let r = wb.requirement(&a.req)?;
    let asm = wb.assumption(assumption)?;
    let p = residual_prohibition(&wb.model, r, asm)?;
    let ids = members(&wb, &p);
    let mut rep = Report::new(Verdict::Yes);
    rep.line(format!(
        "residual of {} under {assumption}: {} systems",
        a.req,
        ids.len()
    ));
    for id in ids.iter().take(LIST_CAP) {
        rep.line(format!("  {id}"));
    }
    rep.field("universe", wb.universe_label())
        .field("members", ids.len())
        .field("prohibition", classify(&wb.model, &p)?.is_prohibition)
        .field("residual", listing(&ids));
    Ok(rep)
}

fn campaign_reduce_cmd(a: &SetupArgs, assumption: &str, system: &str) -> Result<Report, CliError> {
    let wb = parse_file(&a.target.file)?;
    let r = wb.requirement(&a.target.req)?;
    let asm = wb.assumption(assumption)?;
    let setup = wb.setup(&a.setup)?;
    let s = wb.element(system)?;
    let c = reduction_campaign(&setup, r, asm, s)?;
    let verdict = match c.conclusion {
        Conclusion::Inconclusive => Verdict::Inconclusive,
        _ => Verdict::Refuted,
    };
    let mut rep = Report::new(verdict);
    match &c.refutation {
        Some(t) => rep.line(format!(
            "step 1: {t} refutes {system} in the residual prohibition"
        )),
        None => rep.line(format!(
            "step 1: no observation of {system} refutes the residual prohibition"
        )),
    };
    let verification = match &c.verification {
        Verification::Witness(t) => {
            rep.line(format!(
                "step 2: {t} verifies {system} satisfies {assumption}"
            ));
            format!("witness:{t}")
        }
        Verification::NoWitness => {
            rep.line(format!(
                "step 2: no observation of {system} verifies {assumption}"
            ));
            "none".to_string()
        }
        Verification::AssumptionNotVerifiable { blocker } => {
            rep.line(format!(
                "step 2: {assumption} is not verifiable in {} ({blocker} has no witness)",
                a.setup
            ));
            format!("not-verifiable:{blocker}")
        }
    };
    rep.line(format!("conclusion: {}", c.conclusion));
    let conclusion = match &c.conclusion {
        Conclusion::Unconditional => "unconditional".to_string(),
        Conclusion::ConditionalOn(name) => format!("conditional:{name}"),
        Conclusion::Inconclusive => "inconclusive".to_string(),
    };
    rep.field("universe", wb.universe_label())
        .field("system", &c.system)
        .field("witness", c.refutation.as_deref().unwrap_or("-"))
        .field("verification", verification)
        .field("conclusion", conclusion);
    Ok(rep)
}

fn campaign_cmd(a: &CampaignArgs) -> Result<Report, CliError> {
    let oracle = match a.omega.as_str() {
        "odd-zero" => odd_input_zero_oracle(a.oracle_cost),
        "zero" => any_zero_oracle(a.oracle_cost),
        other => {
            return Err(CliError::Usage(format!(
                "unknown omega `{other}`; expected `odd-zero` or `zero`"
            )))
        }
    };
    if a.budget == 0 {
        return Err(CliError::Usage("--budget must be at least 1".into()));
    }
    let system = subprocess_enumerator(&a.cmd, &a.inputs, Duration::from_millis(a.quantum_ms))?;
    let verdict = algorithm1(Box::new(system), &oracle, a.budget)?;
    let mut rep = Report::new(match verdict.outcome {
        Outcome::Refuted => Verdict::Refuted,
        Outcome::BudgetExhausted => Verdict::Inconclusive,
    });
    if a.log {
        for record in &verdict.log {
            rep.line(record.to_string());
        }
    }
    match &verdict.witness {
        Some(w) => rep.line(format!(
            "refuted: observed {w}, which no system satisfying the requirement exhibits"
        )),
        None => rep.line(format!(
            "inconclusive: no irremediable observation within {} steps",
            verdict.steps_used
        )),
    };
    rep.field("universe", "black-box")
        .field(
            "witness",
            verdict.witness.map_or("-".to_string(), |w| w.to_string()),
        )
        .field("steps", verdict.steps_used)
        .field("budget", a.budget);
    Ok(rep)
}

fn generated(doc: WorkbenchDoc, out: Option<std::path::PathBuf>) -> Result<Report, CliError> {
    let wb = from_doc(doc.clone())?;
    let text = serde_json::to_string_pretty(&doc).expect("documents serialize");
    let mut rep = Report::new(Verdict::Yes);
    match out {
        Some(path) => {
            fs::write(&path, format!("{text}\n")).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            rep.line(format!("wrote {}", path.display()));
            rep.field("universe", wb.universe_label())
                .field("systems", wb.model.len())
                .field("path", path.display());
        }
        None => rep.raw = Some(text),
    }
    Ok(rep)
}

fn temporal_cmd(t: TemporalCommand) -> Result<Report, CliError> {
    match t {
        TemporalCommand::Gen {
            alphabet,
            stem_bound,
            loop_bound,
            prefix_depth,
            set_cap,
            out,
        } => {
            let symbols: Vec<char> = alphabet.chars().collect();
            let params = UniverseParams::new(&symbols, stem_bound, loop_bound, prefix_depth)
                .with_set_cap(set_cap);
            crate::temporal::build_temporal_universe(&params)?;
            generated(temporal_document(&params), out)
        }
        TemporalCommand::Safety(a) => {
            let (wb, phi) = property(&a)?;
            let u = wb.temporal()?;
            let s = is_safety(u, &phi)?;
            let mut rep = Report::new(Verdict::of(s.holds));
            rep.line(format!(
                "{} is {}a safety property",
                a.property,
                if s.holds { "" } else { "not " }
            ));
            for (b, p) in &s.bad_prefixes {
                rep.line(format!("  {b} has bad prefix {p}"));
            }
            for b in &s.offenders {
                rep.line(format!("  {b} violates without a bad prefix"));
            }
            rep.field("universe", wb.universe_label());
            for (b, p) in &s.bad_prefixes {
                rep.field("bad_prefix", format!("{b}:{p}"));
            }
            for b in &s.offenders {
                rep.field("offender", b);
            }
            Ok(rep)
        }
        TemporalCommand::Liveness(a) => {
            let (wb, phi) = property(&a)?;
            let l = is_liveness(wb.temporal()?, &phi)?;
            let mut rep = Report::new(Verdict::of(l.holds));
            match &l.stuck {
                None => rep.line(format!("{} is a liveness property", a.property)),
                Some(w) => rep.line(format!(
                    "{} is not a liveness property: {w} extends to no member",
                    a.property
                )),
            };
            rep.field("universe", wb.universe_label());
            if let Some(w) = &l.stuck {
                rep.field("stuck", w);
            }
            Ok(rep)
        }
        TemporalCommand::Decompose(a) => {
            let (wb, phi) = property(&a)?;
            let u = wb.temporal()?;
            let (safe, live) = decompose(u, &phi)?;
            let ok = is_safety(u, &safe)?.holds
                && is_liveness(u, &live)?.holds
                && safe.mask() & live.mask() == phi.mask();
            let safe_names = safe.member_names(u);
            let live_names = live.member_names(u);
            let mut rep = Report::new(Verdict::of(ok));
            rep.line(format!("safety part: {}", braces(&safe_names)))
                .line(format!("liveness part: {}", braces(&live_names)));
            rep.field("universe", wb.universe_label())
                .field("safe", listing(&safe_names))
                .field("live", listing(&live_names));
            Ok(rep)
        }
        TemporalCommand::Hypersafety(a) => {
            let wb = parse_file(&a.file)?;
            let u = wb.temporal()?;
            let r = wb.requirement(&a.req)?;
            let report = is_refutable(u.tstar()?, r)?;
            let mut rep = Report::new(Verdict::of(report.holds));
            rep.line(format!(
                "{} is {}hyper-safety",
                a.req,
                if report.holds { "" } else { "not " }
            ));
            render_decision(&mut rep, &report, "refuted");
            rep.field("universe", wb.universe_label());
            Ok(rep)
        }
        TemporalCommand::Nabla(a) => {
            let (wb, phi) = property(&a)?;
            let words = nabla(wb.temporal()?, &phi)?;
            let mut rep = Report::new(Verdict::Yes);
            rep.line(format!(
                "{} irremediable words for {}: {}",
                words.len(),
                a.property,
                braces(&words)
            ));
            rep.field("universe", wb.universe_label())
                .field("count", words.len())
                .field("nabla", listing(&words));
            Ok(rep)
        }
    }
}

fn property(a: &PropertyArgs) -> Result<(Workbench, crate::temporal::TemporalProperty), CliError> {
    let wb = parse_file(&a.file)?;
    let phi = wb.property(&a.property)?;
    Ok((wb, phi))
}
