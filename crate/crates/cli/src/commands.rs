//! One function per subcommand. Each fills in verdicts, witnesses and facts;
//! the exit code is derived from the verdicts afterwards.

use std::collections::BTreeMap;

use lawvere_core::algebras::{bilax_check, convolution_algebra, internal_algebras, internal_bialgebras, internal_coalgebras};
use lawvere_core::cat_model::{terminal_model, validate_cat_model, CatModel};
use lawvere_core::eh::{eckmann_hilton_2d, eh_local_iso_probe};
use lawvere_core::equality::{check_commutative, eh_preconditions_1d, Commutativity, DecideOptions, EqualityVerdict};
use lawvere_core::finset::{enumerate_homs, enumerate_models, eh_uniqueness_probe, semantic_commutativity_check, up_to_iso, validate_model, Bounds, FinSetModel};
use lawvere_core::internal_hom::{closed_check as closed, fox_comonad, internal_hom};
use lawvere_core::lax::hom_category;
use lawvere_core::rewrite::Step;
use lawvere_core::sigma::{
    check_commuting_over, check_sigma_coherence, derived_associativity_check, validate_sigma, validate_theory_map, yang_baxter_check,
    CoherenceReport, Extension, RelativeVerdict, TheoryMap,
};
use lawvere_core::theory::TheoryPresentation;
use lawvere_core::two_cells::Weakness;
use lawvere_core::Error;
use serde::Serialize;
use serde_json::json;

use crate::report::{Report, Status};
use crate::select::Context;
use crate::Mode;

pub enum Failure {
    Input(String),
    Core(Error),
}

impl From<String> for Failure {
    fn from(s: String) -> Failure {
        Failure::Input(s)
    }
}

impl From<&str> for Failure {
    fn from(s: &str) -> Failure {
        Failure::Input(s.to_string())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Core(e)
    }
}

type Outcome = Result<(), Failure>;

/// Bounds become an inconclusive verdict; everything else is an input error.
pub fn record_error(report: &mut Report, failure: Failure) {
    match failure {
        Failure::Core(Error::Bound(msg)) => {
            let check = report.command.clone();
            report.verdict(check, Status::Inconclusive, format!("bound exceeded: {msg}"));
        }
        Failure::Core(e) => report.error = Some(e.to_string()),
        Failure::Input(msg) => report.error = Some(msg),
    }
}

fn weakness(name: &str) -> Result<Weakness, Failure> {
    Weakness::parse(name).ok_or_else(|| Failure::Input(format!("unknown weakness {name}; use strict, pseudo, lax or colax")))
}

fn named_tables(theory: &TheoryPresentation, model: &FinSetModel) -> BTreeMap<String, Vec<usize>> {
    model
        .tables
        .iter()
        .enumerate()
        .map(|(op, t)| (theory.signature.name(op).to_string(), t.clone()))
        .collect()
}

#[derive(Serialize)]
struct StepView {
    component: usize,
    position: Vec<usize>,
    rule: String,
    direction: String,
    result: String,
}

fn trace_view(theory: &TheoryPresentation, trace: &[Step]) -> Vec<StepView> {
    trace
        .iter()
        .map(|s| StepView {
            component: s.component,
            position: s.position.clone(),
            rule: s.rule.clone(),
            direction: serde_json::to_value(s.direction)
                .ok()
                .and_then(|v| v.as_str().map(str::to_string))
                .unwrap_or_default(),
            result: theory.show_term(&s.result),
        })
        .collect()
}

pub fn check_theory(ctx: &Context, report: &mut Report) -> Outcome {
    let lib = &ctx.lib;
    for (name, t) in &lib.theories {
        report.verdict(
            format!("theory {name}"),
            Status::Pass,
            format!(
                "{} operations, {} equations, {} cells, {} cell equations",
                t.base.signature.ops.len(),
                t.base.equations.len(),
                t.cells.len(),
                t.cell_equations.len()
            ),
        );
    }
    for (name, m) in &lib.maps {
        let (source, target) = (&lib.theories[&m.source], &lib.theories[&m.target]);
        let probes: Vec<CatModel> = lib.cat_models_of(&m.target).into_iter().cloned().collect();
        let check = format!("map {name}");
        match validate_theory_map(source, target, &m.map, &probes) {
            Ok(()) => report.verdict(check, Status::Pass, format!("{} -> {}, checked on {} probes", m.source, m.target, probes.len())),
            Err(Error::Violation(v)) => {
                report.verdict(&check, Status::Fail, v.to_string());
                report.witness(check, "equation instance", v);
            }
            Err(e) => return Err(e.into()),
        }
    }
    for (name, s) in &lib.sigmas {
        let (source, target) = (&lib.theories[&s.theory], &lib.theories[&s.target]);
        let rho = match &s.via {
            Some(v) => lib.maps[v].map.clone(),
            None => TheoryMap::identity(source),
        };
        let ext = Extension {
            source,
            target,
            rho: &rho,
            table: &s.table,
        };
        let check = format!("table {name}");
        match validate_sigma(&ext) {
            Ok(()) => report.verdict(
                check,
                Status::Pass,
                format!("{} entries, {}", s.table.entries.len(), s.table.weakness.name()),
            ),
            Err(Error::Violation(v)) => {
                report.verdict(&check, Status::Fail, v.to_string());
                report.witness(check, "equation instance", v);
            }
            Err(e) => return Err(e.into()),
        }
    }
    for (name, (theory, m)) in &lib.finset_models {
        report.verdict(format!("model {name}"), Status::Pass, format!("set model of {theory} on {} elements", m.size));
    }
    for (name, m) in &lib.cat_models {
        report.verdict(
            format!("model {name}"),
            Status::Pass,
            format!(
                "model of {} in a category with {} objects and {} arrows",
                m.theory.name(),
                m.carrier.num_objects(),
                m.carrier.num_arrows()
            ),
        );
    }
    Ok(())
}

pub fn commutative(ctx: &Context, report: &mut Report, mode: Mode, max_size: usize, budget: usize) -> Outcome {
    let (name, t) = ctx.theory(report)?;
    let theory = t.truncation();
    let opts = DecideOptions {
        budget,
        max_model_size: if mode == Mode::Semantic { max_size } else { 0 },
    };
    report.select("mode", if mode == Mode::Semantic { "semantic" } else { "syntactic" });
    let result = check_commutative(&theory, opts)?;
    let sig = &theory.signature;
    for sq in &result.squares {
        let check = format!("square ({}, {})", sig.name(sq.alpha), sig.name(sq.beta));
        match &sq.verdict {
            EqualityVerdict::Equal { trace } => {
                report.verdict(&check, Status::Pass, format!("equal by rewriting, {} steps", trace.len()));
                report.fact(&format!("trace {check}"), trace_view(&theory, trace));
            }
            EqualityVerdict::NotEqual { model, witness, lhs, rhs } => {
                let validated = validate_model(&theory, model.size, model.tables.clone()).is_ok();
                report.verdict(&check, Status::Fail, format!("separated by a model on {} elements", model.size));
                report.witness(
                    check,
                    "counter-model",
                    json!({
                        "size": model.size,
                        "tables": named_tables(&theory, model),
                        "arguments": witness,
                        "lhs": lhs,
                        "rhs": rhs,
                        "validated": validated,
                    }),
                );
            }
            EqualityVerdict::Unknown { report: budget, sizes_searched } => {
                report.verdict(
                    check,
                    Status::Inconclusive,
                    format!("no proof within the budget and no counter-model up to size {sizes_searched}"),
                );
                report.fact("budget", budget);
            }
        }
    }
    report.fact(
        "verdict",
        match result.verdict {
            Commutativity::Commutative => "Commutative",
            Commutativity::NotCommutative => "NotCommutative",
            Commutativity::Inconclusive => "Inconclusive",
        },
    );
    if mode == Mode::Semantic {
        for (model_name, (_, model)) in ctx.lib.finset_models.iter().filter(|(_, (tn, _))| *tn == name) {
            for pair in semantic_commutativity_check(&theory, model)? {
                let check = format!("model {model_name} ({}, {})", pair.alpha, pair.beta);
                if pair.holds {
                    report.verdict(check, Status::Pass, "commute on every matrix");
                } else {
                    report.verdict(&check, Status::Fail, "a matrix tells the two orders apart");
                    report.witness(check, "matrix", &pair.witness);
                }
            }
        }
    }
    Ok(())
}

fn emit_coherence(report: &mut Report, coh: &CoherenceReport) {
    for r in &coh.results {
        let check = format!("{} {}", r.rule, r.instance);
        match &r.verdict {
            RelativeVerdict::SyntacticallyEqual => report.verdict(check, Status::Pass, "equal syntactically"),
            RelativeVerdict::EqualOnProbes { probes: 0 } => {
                report.verdict(check, Status::Inconclusive, "not shown syntactically and no probes to evaluate on")
            }
            RelativeVerdict::EqualOnProbes { probes } => report.verdict(check, Status::Pass, format!("equal on {probes} probes")),
            RelativeVerdict::Distinguished { probe, .. } => {
                report.verdict(&check, Status::Fail, format!("the two sides differ on {probe}"));
                report.witness(check, "probe", &r.verdict);
            }
        }
    }
    report.fact("coherent", coh.coherent);
}

pub fn sigma_check(ctx: &Context, report: &mut Report, unit: Option<&str>) -> Outcome {
    let (_, entry) = ctx.sigma(report)?;
    let lib = &ctx.lib;
    let (source, target) = (&lib.theories[&entry.theory], &lib.theories[&entry.target]);
    let probes = ctx.probes(report, &entry.target)?;
    match &entry.via {
        Some(via) => {
            report.select("via", via);
            let unit = unit.map(|u| source.base.op(u)).transpose()?;
            let r = check_commuting_over(source, target, &lib.maps[via].map, &entry.table, unit, &probes)?;
            emit_coherence(report, &r.coherence);
            for u in &r.unit {
                let check = format!("unit {} at {}", u.op, u.position);
                if u.holds {
                    report.verdict(check, Status::Pass, if u.syntactic { "syntactically" } else { "on every probe" });
                } else {
                    report.verdict(&check, Status::Fail, "no invertible comparison with the identity");
                    report.witness(check, "probe", &u.failing_probes);
                }
            }
        }
        None => {
            if unit.is_some() {
                return Err("--unit applies to tables given through a theory map".into());
            }
            emit_coherence(report, &check_sigma_coherence(target, &entry.table, &probes)?);
        }
    }
    Ok(())
}

pub fn assoc_derived(ctx: &Context, report: &mut Report) -> Outcome {
    let (_, entry) = ctx.sigma(report)?;
    if entry.via.is_some() {
        return Err("assoc-derived needs a table over the theory itself".into());
    }
    let theory = &ctx.lib.theories[&entry.theory];
    let probes = ctx.probes(report, &entry.theory)?;
    emit_coherence(report, &derived_associativity_check(theory, &entry.table, &probes)?);
    Ok(())
}

pub fn yang_baxter(ctx: &Context, report: &mut Report, tensor: &str, braiding: &str, associator: &str) -> Outcome {
    let eligible = |m: &CatModel| m.theory.base.op(tensor).is_ok() && m.theory.cell(braiding).is_ok();
    let models: Vec<&CatModel> = match &ctx.args.model {
        Some(n) => vec![ctx.cat_model(n)?],
        None => ctx.lib.cat_models.values().filter(|m| eligible(m)).collect(),
    };
    if models.is_empty() {
        return Err(format!("no category model with a tensor {tensor} and a braiding {braiding}").into());
    }
    report.select("models", models.iter().map(|m| m.name.as_str()).collect::<Vec<_>>().join(","));
    for m in models {
        let t = &m.theory;
        let op = t.base.op(tensor)?;
        let b = t.cell(braiding)?;
        let a = t.cell(associator).ok();
        let r = yang_baxter_check(m, op, b, a)?;
        let check = format!("braid relation {}", m.name);
        let failing: Vec<_> = r.triples.iter().filter(|t| !t.holds).collect();
        if failing.is_empty() {
            report.verdict(check, Status::Pass, format!("holds on all {} triples", r.triples.len()));
        } else {
            let f = failing[0];
            report.verdict(
                &check,
                Status::Fail,
                format!(
                    "fails on {} of {} triples, first at ({}, {}, {})",
                    failing.len(),
                    r.triples.len(),
                    f.objects[0],
                    f.objects[1],
                    f.objects[2]
                ),
            );
            report.witness(check, "triple", f);
        }
    }
    Ok(())
}

pub fn models(ctx: &Context, report: &mut Report, size: usize) -> Outcome {
    let (_, t) = ctx.theory(report)?;
    let theory = t.truncation();
    report.select("size", size.to_string());
    let bounds = Bounds {
        max_size: size.max(Bounds::default().max_size),
        ..Bounds::default()
    };
    let all = enumerate_models(&theory, size, bounds)?;
    let classes = up_to_iso(&theory, &all);
    let invalid = all
        .iter()
        .filter(|m| validate_model(&theory, m.size, m.tables.clone()).is_err())
        .count();
    report.pass_if(
        "enumeration",
        invalid == 0,
        format!("{} models on {size} elements, {} up to isomorphism", all.len(), classes.len()),
    );
    if invalid > 0 {
        let bad = all
            .iter()
            .find(|m| validate_model(&theory, m.size, m.tables.clone()).is_err())
            .expect("counted above");
        report.witness("enumeration", "counter-model", named_tables(&theory, bad));
    }
    report.fact("labelled", all.len());
    report.fact(
        "classes",
        classes.iter().map(|m| named_tables(&theory, m)).collect::<Vec<_>>(),
    );
    Ok(())
}

pub fn homs(ctx: &Context, report: &mut Report, target: Option<&str>, weak: &str) -> Outcome {
    let lib = &ctx.lib;
    let source = ctx.args.model.as_deref();
    if let (Some(s), Some(t)) = (source, target) {
        if let (Some((ts, x)), Some((tt, y))) = (lib.finset_models.get(s), lib.finset_models.get(t)) {
            if ts != tt {
                return Err(format!("models {s} and {t} are over different theories").into());
            }
            report.select("model", s);
            report.select("target", t);
            let theory = lib.theories[ts].truncation();
            let hs = enumerate_homs(&theory, x, y)?;
            report.verdict("enumeration", Status::Pass, format!("{} homomorphisms {s} -> {t}", hs.len()));
            report.fact("homomorphisms", hs);
            return Ok(());
        }
    }
    let x = ctx.model(report, "model", None)?;
    let y = ctx.model(report, "target", target)?;
    let w = weakness(weak)?;
    report.select("weakness", w.name());
    let hc = hom_category(x, y, w)?;
    report.verdict(
        "enumeration",
        Status::Pass,
        format!("{} homomorphisms, {} modifications", hc.homs.len(), hc.mods.len()),
    );
    report.fact("homomorphisms", hc.homs.iter().map(|h| h.describe(x, y)).collect::<Vec<_>>());
    report.fact("modifications", hc.mods.len());
    Ok(())
}

pub fn intalg(ctx: &Context, report: &mut Report, co: bool) -> Outcome {
    let x = ctx.model(report, "model", None)?;
    let star = terminal_model(x.theory.clone());
    let hc = if co { internal_coalgebras(x)? } else { internal_algebras(x)? };
    let what = if co { "coalgebras" } else { "algebras" };
    report.verdict(
        "enumeration",
        Status::Pass,
        format!("{} internal {what}, {} maps between them", hc.homs.len(), hc.mods.len()),
    );
    report.fact("count", hc.homs.len());
    report.fact(what, hc.homs.iter().map(|h| h.describe(&star, x)).collect::<Vec<_>>());
    report.fact("maps", hc.mods.len());
    Ok(())
}

pub fn intbialg(ctx: &Context, report: &mut Report) -> Outcome {
    let x = ctx.model(report, "model", None)?;
    let (_, entry) = ctx.sigma(report)?;
    let bc = internal_bialgebras(x, &entry.table)?;
    report.verdict(
        "enumeration",
        Status::Pass,
        format!(
            "{} bialgebras among {} algebras and {} coalgebras",
            bc.pairs.len(),
            bc.algebras.homs.len(),
            bc.coalgebras.homs.len()
        ),
    );
    report.fact("count", bc.pairs.len());
    report.fact("bialgebras", &bc.category.objects);
    report.fact("maps", bc.category.num_arrows());
    Ok(())
}

fn pairs(algebras: usize, coalgebras: usize, a: Option<usize>, c: Option<usize>) -> Result<Vec<(usize, usize)>, Failure> {
    for (what, i, n) in [("algebra", a, algebras), ("coalgebra", c, coalgebras)] {
        if let Some(i) = i {
            if i >= n {
                return Err(format!("there are {n} {what}s, index {i} is out of range").into());
            }
        }
    }
    Ok((0..algebras)
        .filter(|i| a.is_none_or(|a| a == *i))
        .flat_map(|i| (0..coalgebras).filter(move |j| c.is_none_or(|c| c == *j)).map(move |j| (i, j)))
        .collect())
}

pub fn convolve(ctx: &Context, report: &mut Report, a: Option<usize>, c: Option<usize>) -> Outcome {
    let x = ctx.model(report, "model", None)?;
    let star = terminal_model(x.theory.clone());
    let algs = internal_algebras(x)?;
    let coalgs = internal_coalgebras(x)?;
    let rho = TheoryMap::identity(&x.theory);
    let theory = x.theory.truncation();
    for (i, j) in pairs(algs.homs.len(), coalgs.homs.len(), a, c)? {
        let (alg, coalg) = (&algs.homs[i], &coalgs.homs[j]);
        let check = format!("convolution algebra {j} -> {i}");
        let label = format!("Hom({}, {})", coalg.describe(&star, x), alg.describe(&star, x));
        match convolution_algebra(x, &x.theory, &rho, alg, coalg) {
            Ok(conv) => {
                report.verdict(&check, Status::Pass, format!("{label}: a model on {} elements", conv.model.size));
                report.fact(
                    &check,
                    json!({
                        "elements": conv.hom.iter().map(|&h| x.carrier.arrows[h].name.clone()).collect::<Vec<_>>(),
                        "tables": named_tables(&theory, &conv.model),
                    }),
                );
            }
            Err(Error::Violation(v)) => {
                report.verdict(&check, Status::Fail, format!("{label}: {v}"));
                report.witness(check, "equation instance", v);
            }
            Err(Error::Precondition(msg)) => report.fact(&check, format!("skipped: {msg}")),
            Err(e) => return Err(e.into()),
        }
    }
    Ok(())
}

pub fn hom_internal(ctx: &Context, report: &mut Report, target: Option<&str>, weak: &str) -> Outcome {
    let y = ctx.model(report, "model", None)?;
    let z = ctx.model(report, "target", target)?;
    let (_, entry) = ctx.sigma(report)?;
    let w = weakness(weak)?;
    report.select("weakness", w.name());
    let ih = internal_hom(y, z, &entry.table, w)?;
    let valid = validate_cat_model(&ih.model);
    report.pass_if(
        "model of homomorphisms",
        valid.is_ok(),
        format!(
            "{} objects, {} arrows",
            ih.model.carrier.num_objects(),
            ih.model.carrier.num_arrows()
        ),
    );
    if let Err(e) = valid {
        report.witness("model of homomorphisms", "equation instance", e.to_string());
    }
    report.fact("objects", &ih.model.carrier.objects);
    report.fact("arrows", ih.model.carrier.num_arrows());
    Ok(())
}

pub fn closed_check(ctx: &Context, report: &mut Report, middle: Option<&str>, target: Option<&str>, weak: &str) -> Outcome {
    let x = ctx.model(report, "model", None)?;
    let y = ctx.model(report, "middle", middle)?;
    let z = ctx.model(report, "target", target)?;
    let (_, entry) = ctx.sigma(report)?;
    let w = weakness(weak)?;
    report.select("weakness", w.name());
    let r = closed(x, y, z, &entry.table, w)?;
    let law = |report: &mut Report, check: &str, ok: bool, summary: String| {
        report.pass_if(check, ok, summary);
        if !ok {
            report.witness(check, "instance", &r.failures);
        }
    };
    law(report, "currying is total", r.curry_total, format!("{} multimaps", r.multimaps));
    law(report, "uncurrying is total", r.uncurry_total, format!("{} homomorphisms", r.homs));
    law(report, "round trips", r.round_trips, "both composites are identities".into());
    law(
        report,
        "bijection",
        r.bijection,
        format!("{} multimaps against {} homomorphisms", r.multimaps, r.homs),
    );
    report.fact("multimaps", r.multimaps);
    report.fact("homomorphisms", r.homs);
    Ok(())
}

pub fn fox(ctx: &Context, report: &mut Report, weak: &str) -> Outcome {
    let x = ctx.model(report, "model", None)?;
    let (_, entry) = ctx.sigma(report)?;
    let w = weakness(weak)?;
    report.select("weakness", w.name());
    let r = fox_comonad(x, &entry.table, w)?;
    let laws = [
        ("comultiplication defined", r.comultiplication_defined),
        ("comultiplication strict", r.comultiplication_strict),
        ("counit left", r.counit_left),
        ("counit right", r.counit_right),
        ("coassociativity", r.coassociative),
    ];
    for (check, ok) in laws {
        report.pass_if(check, ok, if ok { "holds on every object and arrow" } else { "fails" });
        if !ok {
            report.witness(check, "law table", &r);
        }
    }
    report.pass_if(
        "comultiplication essentially surjective",
        r.essentially_surjective,
        if r.essentially_surjective {
            "every algebra of algebras is isomorphic to an image".to_string()
        } else {
            format!("{} algebras of algebras outside the image", r.outside_image.len())
        },
    );
    if !r.essentially_surjective {
        report.witness("comultiplication essentially surjective", "second lift", &r.outside_image);
    }
    report.pass_if(
        "comultiplication iso",
        r.comultiplication_iso,
        format!(
            "{} algebras, {} algebras of algebras",
            r.algebras, r.algebras_of_algebras
        ),
    );
    if !r.comultiplication_iso {
        report.witness("comultiplication iso", "law table", &r);
    }
    report.fact("laws", &r);
    Ok(())
}

fn thin(m: &CatModel) -> bool {
    let c = &m.carrier;
    let n = c.num_objects();
    (0..n).all(|a| (0..n).all(|b| c.hom(a, b).len() <= 1))
}

pub fn eh(ctx: &Context, report: &mut Report, dim: Option<u8>, max_size: usize) -> Outcome {
    let dim = dim.unwrap_or(if ctx.lib.sigmas.is_empty() { 1 } else { 2 });
    report.select("dim", dim.to_string());
    if dim == 1 {
        let (name, t) = ctx.theory(report)?;
        let theory = t.truncation();
        let r = eh_preconditions_1d(
            &theory,
            DecideOptions {
                max_model_size: max_size,
                ..DecideOptions::default()
            },
        )?;
        report.pass_if("no active maps 1 -> 1", r.unary.is_empty(), unary_summary(&r.unary));
        if !r.unary.is_empty() {
            report.witness("no active maps 1 -> 1", "operations", &r.unary);
        }
        report.pass_if("unital", r.non_unital.is_empty(), unit_summary(&r.unit, &r.non_unital));
        if !r.non_unital.is_empty() {
            report.witness("unital", "operations", &r.non_unital);
        }
        report.fact("preconditions", &r);
        for (model_name, (_, model)) in ctx.lib.finset_models.iter().filter(|(_, (tn, _))| *tn == name) {
            let lifts = eh_uniqueness_probe(&theory, model, max_size)?;
            report.fact(&format!("lifts on {model_name}"), &lifts);
        }
        return Ok(());
    }
    let (_, entry) = ctx.sigma(report)?;
    let theory = &ctx.lib.theories[&entry.theory];
    let probes = ctx.probes(report, &entry.theory)?;
    let r = eckmann_hilton_2d(theory, &entry.table, &probes)?;
    report.pass_if("no active maps 1 -> 1", r.unary.is_empty(), unary_summary(&r.unary));
    if !r.unary.is_empty() {
        report.witness("no active maps 1 -> 1", "operations", &r.unary);
    }
    report.pass_if("unital", r.non_unital.is_empty(), unit_summary(&r.unit, &r.non_unital));
    if !r.non_unital.is_empty() {
        report.witness("unital", "operations", &r.non_unital);
    }
    let diag = r.diagonal_not_invertible.is_empty();
    report.pass_if("diagonal entries invertible", diag, "table entries of each operation against itself");
    if !diag {
        report.witness("diagonal entries invertible", "operations", &r.diagonal_not_invertible);
    }
    let units = r.units_not_invertible.is_empty();
    report.pass_if("unit entries invertible", units, "table entries between constants");
    if !units {
        report.witness("unit entries invertible", "operations", &r.units_not_invertible);
    }
    report.fact("preconditions", &r);
    if r.passes {
        let thin: Vec<&CatModel> = probes.iter().filter(|m| thin(m)).collect();
        for x in &thin {
            for y in &thin {
                let li = eh_local_iso_probe(x, y, &entry.table)?;
                let check = format!("lifting bijection {} -> {}", x.name, y.name);
                report.pass_if(&check, li.bijection, format!("{} homomorphisms, {} lifted", li.homs, li.lifted));
                if !li.bijection {
                    report.witness(check, "second lift", &li.extra_lifts);
                }
            }
        }
    }
    Ok(())
}

fn unary_summary(unary: &[String]) -> String {
    if unary.is_empty() {
        "no unary basis operations".into()
    } else {
        format!("unary basis operations: {}", unary.join(", "))
    }
}

fn unit_summary(unit: &Option<String>, non_unital: &[String]) -> String {
    match unit {
        Some(u) => format!("wide operations are unital for {u}"),
        None if non_unital.is_empty() => "no wide operations".into(),
        None => format!("not unital: {}", non_unital.join(", ")),
    }
}

pub fn bilax(ctx: &Context, report: &mut Report, a: Option<usize>, c: Option<usize>) -> Outcome {
    let x = ctx.model(report, "model", None)?;
    let (_, entry) = ctx.sigma(report)?;
    let star = terminal_model(x.theory.clone());
    let algs = internal_algebras(x)?;
    let coalgs = internal_coalgebras(x)?;
    let selected = a.is_some() && c.is_some();
    let mut compatible = 0;
    let mut scanned = 0;
    for (i, j) in pairs(algs.homs.len(), coalgs.homs.len(), a, c)? {
        let (alg, coalg) = (&algs.homs[i], &coalgs.homs[j]);
        if alg.f1 != coalg.f1 {
            if selected {
                return Err(format!("algebra {i} and coalgebra {j} live on different objects").into());
            }
            continue;
        }
        scanned += 1;
        let r = bilax_check(&star, x, alg, coalg, &entry.table)?;
        let check = format!("bilax {i} {j}");
        if r.holds {
            compatible += 1;
        }
        if selected {
            report.pass_if(&check, r.holds, format!("{} with {}", alg.describe(&star, x), coalg.describe(&star, x)));
            if !r.holds {
                report.witness(check, "instance", &r.failures);
            }
        } else {
            report.fact(&check, json!({"algebra": alg.describe(&star, x), "coalgebra": coalg.describe(&star, x), "holds": r.holds}));
        }
    }
    if !selected {
        report.verdict("scan", Status::Pass, format!("{compatible} of {scanned} pairs on a common object are compatible"));
    }
    Ok(())
}
