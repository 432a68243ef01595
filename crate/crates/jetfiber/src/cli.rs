//! Command-line verbs over the engine: jet expansion, the reduction-lemma
//! grid, ideal construction, fiber decomposition, the intersection graph,
//! point counting, and the full verification suite.
//!
//! Exit codes: 0 all checks pass, 1 verification failure, 2 budget
//! exhaustion, 3 usage error. JSON reports are newline-free single
//! documents whose key order is fixed by struct declaration order.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::components::{apply_symmetry, decompose, ComponentLabel, Separation, Symmetry, WitnessRecord};
use crate::error::EngineError;
use crate::graph::{
    build_graph, dynkin_d4_check, maximal_elements, pairwise_intersections,
    radical_certificates, to_dot, verify_poset,
};
use crate::ideal::{build_j, build_l, Budget, Ideal};
use crate::jets::{jet_coeffs, reduce_mod_l, verify_g_lemma, CaseReport, Surface, TruncationSpec};
use crate::oracle::{point_count, run_paper_suite, CheckStatus};
use crate::poly::{Polynomial, VarId};

#[derive(Debug, Copy, Clone, PartialEq, Eq, ValueEnum)]
enum SurfaceArg {
    /// x^2 + y^2 z + y z^2
    D40,
    /// x^2 + y^2 z + y z^2 + x y z
    D41,
}

impl From<SurfaceArg> for Surface {
    fn from(s: SurfaceArg) -> Surface {
        match s {
            SurfaceArg::D40 => Surface::D40,
            SurfaceArg::D41 => Surface::D41,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "jetfiber",
    version,
    about = "Jet-scheme fiber decomposition and verification over GF(2)"
)]
struct Cli {
    /// Surface equation to work over.
    #[arg(long, global = true, value_enum)]
    surface: Option<SurfaceArg>,

    /// Jet truncation order.
    #[arg(short, global = true, value_name = "INT")]
    m: Option<u32>,

    /// Reduction-step budget for basis computations.
    #[arg(long, global = true, value_name = "INT")]
    budget: Option<u64>,

    /// Emit JSON even for verbs that default to plain text.
    #[arg(long, global = true)]
    json: bool,

    /// Write the incidence graph in DOT format to this file.
    #[arg(long, global = true, value_name = "FILE")]
    dot: Option<PathBuf>,

    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Print the jet equations of degrees 0..m, one per line.
    Expand {
        /// Reduce each equation modulo the coordinate ideal L_{P,Q,R}.
        #[arg(long = "mod", value_name = "P,Q,R")]
        modulus: Option<String>,
    },
    /// Check the closed-form reduction lemma over the (p,q,r) x l grid.
    LemmaG {
        /// Upper bound for each of p, q, r (all start at 1).
        #[arg(long, default_value_t = 5)]
        pmax: u32,
        /// Upper bound for the coefficient degree l (starts at 0).
        #[arg(long, default_value_t = 12)]
        lmax: u32,
    },
    /// Build a named ideal, optionally saturate it, and report on it.
    Ideal {
        /// Ideal selector: a jet chart J1|J2|J3 or a coordinate block L:P,Q,R.
        #[arg(long, value_name = "J1|J2|J3|L:P,Q,R")]
        build: String,
        /// Saturate at this variable before reporting.
        #[arg(long, value_name = "VAR")]
        saturate: Option<String>,
        /// Include the reduced Groebner basis.
        #[arg(long)]
        gb: bool,
        /// Include the Krull dimension.
        #[arg(long)]
        dim: bool,
    },
    /// Decompose the singular fiber into its four certified components.
    Decompose,
    /// Intersection poset, incidence graph, Dynkin check, radical certificates.
    Graph,
    /// Count the GF(2^k) points of a named ideal exhaustively.
    Count {
        /// Field exponent: points are counted over GF(2^k).
        #[arg(short, default_value_t = 1)]
        k: u32,
        /// Ideal selector, as for the ideal verb.
        #[arg(long, value_name = "J1|J2|J3|L:P,Q,R")]
        build: String,
        /// Append the jet equations of the selected surface.
        #[arg(long)]
        jets: bool,
    },
    /// Run every verification check and print the full report.
    Suite,
}

/// Parse arguments, dispatch, and translate failures to exit codes.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: &Cli) -> Result<i32, EngineError> {
    match &cli.verb {
        Verb::Expand { modulus } => cmd_expand(cli, modulus.as_deref()),
        Verb::LemmaG { pmax, lmax } => cmd_lemma_g(*pmax, *lmax),
        Verb::Ideal { build, saturate, gb, dim } => {
            cmd_ideal(cli, build, saturate.as_deref(), *gb, *dim)
        }
        Verb::Decompose => cmd_decompose(cli),
        Verb::Graph => cmd_graph(cli),
        Verb::Count { k, build, jets } => cmd_count(cli, *k, build, *jets),
        Verb::Suite => cmd_suite(cli),
    }
}

fn required_surface(cli: &Cli) -> Result<Surface, EngineError> {
    cli.surface
        .map(Surface::from)
        .ok_or_else(|| EngineError::Precondition("this verb needs --surface d40|d41".into()))
}

fn required_m(cli: &Cli) -> Result<u32, EngineError> {
    cli.m.ok_or_else(|| EngineError::Precondition("this verb needs -m".into()))
}

fn budget_of(cli: &Cli) -> Budget {
    cli.budget.map(Budget::new).unwrap_or_else(Budget::standard)
}

/// Print one line, treating a closed pipe as a normal end of output.
fn print_line(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if writeln!(out, "{text}").is_err() {
        std::process::exit(0);
    }
}

fn emit<T: Serialize>(value: &T) {
    print_line(&serde_json::to_string(value).expect("reports are serializable"));
}

/// Parse "P,Q,R" into a truncation spec.
fn parse_spec(text: &str) -> Result<TruncationSpec, EngineError> {
    let parts: Vec<u32> = text
        .split(',')
        .map(|t| t.trim().parse::<u32>())
        .collect::<Result<_, _>>()
        .map_err(|_| EngineError::Precondition(format!("expected P,Q,R integers, got {text:?}")))?;
    match parts.as_slice() {
        [p, q, r] => Ok(TruncationSpec::new(*p, *q, *r)),
        _ => Err(EngineError::Precondition(format!("expected three integers P,Q,R, got {text:?}"))),
    }
}

enum BuildSel {
    Chart(u8),
    Block(TruncationSpec),
}

fn parse_build(text: &str) -> Result<BuildSel, EngineError> {
    let upper = text.to_ascii_uppercase();
    match upper.as_str() {
        "J1" => Ok(BuildSel::Chart(1)),
        "J2" => Ok(BuildSel::Chart(2)),
        "J3" => Ok(BuildSel::Chart(3)),
        _ => match upper.strip_prefix("L:") {
            Some(spec) => Ok(BuildSel::Block(parse_spec(spec)?)),
            None => Err(EngineError::Precondition(format!(
                "expected J1, J2, J3, or L:P,Q,R, got {text:?}"
            ))),
        },
    }
}

/// Parse a single jet variable like "y2".
fn parse_var(text: &str) -> Result<VarId, EngineError> {
    let p = Polynomial::parse(text)?;
    let mut terms = p.terms();
    let var = terms.next().and_then(|mo| mo.as_single_var());
    match (var, terms.next()) {
        (Some(v), None) => Ok(v),
        _ => Err(EngineError::Precondition(format!("expected a single variable, got {text:?}"))),
    }
}

fn build_ideal(cli: &Cli, build: &str, m: u32) -> Result<Ideal, EngineError> {
    match parse_build(build)? {
        BuildSel::Chart(i) => build_j(required_surface(cli)?, i, m),
        BuildSel::Block(spec) => build_l(spec, m),
    }
}

#[derive(Serialize)]
struct ExpandReport {
    surface: Surface,
    m: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    modulus: Option<String>,
    polynomials: Vec<String>,
}

/// The jet equations as display strings, optionally reduced modulo a
/// coordinate ideal. Shared by the CLI and the C interface.
pub fn expand_lines(surface: Surface, m: u32, modulus: Option<TruncationSpec>) -> Vec<String> {
    jet_coeffs(surface, m)
        .coeffs
        .iter()
        .map(|c| match modulus {
            Some(s) => reduce_mod_l(c, s).to_string(),
            None => c.to_string(),
        })
        .collect()
}

fn cmd_expand(cli: &Cli, modulus: Option<&str>) -> Result<i32, EngineError> {
    let surface = required_surface(cli)?;
    let m = required_m(cli)?;
    let spec = modulus.map(parse_spec).transpose()?;
    let polys = expand_lines(surface, m, spec);
    if cli.json {
        emit(&ExpandReport { surface, m, modulus: modulus.map(str::to_string), polynomials: polys });
    } else {
        for line in &polys {
            print_line(line);
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct LemmaRow {
    p: u32,
    q: u32,
    r: u32,
    l: u32,
    cases: Vec<u8>,
    matched: bool,
}

#[derive(Serialize)]
struct LemmaGrid {
    pmax: u32,
    lmax: u32,
    rows: usize,
    all_matched: bool,
    table: Vec<LemmaRow>,
    mismatches: Vec<CaseReport>,
}

fn cmd_lemma_g(pmax: u32, lmax: u32) -> Result<i32, EngineError> {
    if pmax == 0 {
        return Err(EngineError::Precondition("--pmax must be at least 1".into()));
    }
    let mut table = Vec::new();
    let mut mismatches = Vec::new();
    for p in 1..=pmax {
        for q in 1..=pmax {
            for r in 1..=pmax {
                for l in 0..=lmax {
                    let report = verify_g_lemma(TruncationSpec::new(p, q, r), l);
                    if !report.all_matched {
                        mismatches.push(report.clone());
                    }
                    table.push(LemmaRow {
                        p,
                        q,
                        r,
                        l,
                        cases: report.checks.iter().map(|c| c.case_id).collect(),
                        matched: report.all_matched,
                    });
                }
            }
        }
    }
    let all_matched = mismatches.is_empty();
    emit(&LemmaGrid { pmax, lmax, rows: table.len(), all_matched, table, mismatches });
    Ok(if all_matched { 0 } else { 1 })
}

#[derive(Serialize)]
struct IdealReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    surface: Option<Surface>,
    m: u32,
    build: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    saturate: Option<String>,
    generators: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gb: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dimension: Option<i64>,
}

fn cmd_ideal(
    cli: &Cli,
    build: &str,
    saturate: Option<&str>,
    gb: bool,
    dim: bool,
) -> Result<i32, EngineError> {
    let m = required_m(cli)?;
    let built = build_ideal(cli, build, m)?;
    let mut budget = budget_of(cli);
    let worked = match saturate {
        Some(v) => built.saturate(parse_var(v)?, &mut budget)?,
        None => built,
    };
    let gb_strings = if gb {
        let reduced = worked.groebner(&mut budget)?;
        Some(reduced.gb.unwrap().iter().map(|p| p.to_string()).collect())
    } else {
        None
    };
    let dimension = if dim { Some(worked.dimension(&mut budget)?) } else { None };
    emit(&IdealReport {
        surface: cli.surface.map(Surface::from),
        m,
        build: build.to_string(),
        saturate: saturate.map(str::to_string),
        generators: worked.gens.iter().map(|p| p.to_string()).collect(),
        gb: gb_strings,
        dimension,
    });
    Ok(0)
}

/// One component of the fiber, flattened for reporting.
#[derive(Serialize)]
pub struct ComponentReport {
    pub label: ComponentLabel,
    pub generators: Vec<String>,
    pub dimension: u32,
    /// Witness jets computed to lie on this component.
    pub witnesses: Vec<String>,
    pub symmetry_images: BTreeMap<String, String>,
}

/// The full decomposition document shared by the CLI and the C interface.
#[derive(Serialize)]
pub struct DecomposeReport {
    pub surface: Surface,
    pub m: u32,
    pub components: Vec<ComponentReport>,
    pub separations: Vec<Separation>,
    pub witnesses: Vec<WitnessRecord>,
}

/// Decompose the fiber and flatten the result into its report form.
pub fn decompose_report(
    surface: Surface,
    m: u32,
    budget: &mut Budget,
) -> Result<DecomposeReport, EngineError> {
    let d = decompose(surface, m, budget)?;
    let mut components = Vec::new();
    for c in &d.components {
        let mut symmetry_images = BTreeMap::new();
        for which in [Symmetry::Psi1, Symmetry::Psi2] {
            let image = apply_symmetry(which, c, &d.components, budget)?;
            symmetry_images.insert(which.to_string(), image.label.to_string());
        }
        components.push(ComponentReport {
            label: c.label,
            generators: c.generators(),
            dimension: c.dim,
            witnesses: d
                .witnesses
                .iter()
                .filter(|w| w.member[c.label.index()])
                .map(|w| w.jet.clone())
                .collect(),
            symmetry_images,
        });
    }
    Ok(DecomposeReport {
        surface,
        m,
        components,
        separations: d.separations.clone(),
        witnesses: d.witnesses.clone(),
    })
}

fn cmd_decompose(cli: &Cli) -> Result<i32, EngineError> {
    let surface = required_surface(cli)?;
    let m = required_m(cli)?;
    let mut budget = budget_of(cli);
    emit(&decompose_report(surface, m, &mut budget)?);
    Ok(0)
}

/// One pairwise intersection, flattened for reporting.
#[derive(Serialize)]
pub struct IntersectionReport {
    pub pair: (ComponentLabel, ComponentLabel),
    pub generators: Vec<String>,
    pub dimension: i64,
    pub maximal: bool,
    pub strict_subset_of: Vec<(ComponentLabel, ComponentLabel)>,
    pub equal_to: Vec<(ComponentLabel, ComponentLabel)>,
}

#[derive(Serialize)]
pub struct CertificateReport {
    pub claim: String,
    pub holds: bool,
}

/// The poset-and-graph document shared by the CLI and the C interface.
#[derive(Serialize)]
pub struct GraphReport {
    pub surface: Surface,
    pub m: u32,
    pub intersections: Vec<IntersectionReport>,
    pub maximal: Vec<(ComponentLabel, ComponentLabel)>,
    pub radical_certificates: Vec<CertificateReport>,
    pub dynkin_d4: bool,
    pub dot: String,
}

impl GraphReport {
    /// True iff the graph has the expected shape and every radical
    /// membership certificate holds.
    pub fn verified(&self) -> bool {
        self.dynkin_d4 && self.radical_certificates.iter().all(|c| c.holds)
    }
}

/// Compute the intersection poset, audit it, and flatten the result.
pub fn graph_report(
    surface: Surface,
    m: u32,
    budget: &mut Budget,
) -> Result<GraphReport, EngineError> {
    let d = decompose(surface, m, budget)?;
    let records = pairwise_intersections(&d.components, budget)?;
    verify_poset(&records, d.component(ComponentLabel::Z0), budget)?;
    let maximals = maximal_elements(&records);
    let graph = build_graph(&d.components, &maximals);
    let certificates = radical_certificates(&d, budget)?
        .into_iter()
        .map(|(claim, holds)| CertificateReport { claim, holds })
        .collect();
    Ok(GraphReport {
        surface,
        m,
        intersections: records
            .iter()
            .map(|r| IntersectionReport {
                pair: r.pair,
                generators: r
                    .ideal
                    .gb
                    .as_deref()
                    .unwrap_or(&r.ideal.gens)
                    .iter()
                    .map(|p| p.to_string())
                    .collect(),
                dimension: r.dim,
                maximal: r.maximal,
                strict_subset_of: r.strict_subset_of.clone(),
                equal_to: r.equal_to.clone(),
            })
            .collect(),
        maximal: maximals.iter().map(|r| r.pair).collect(),
        radical_certificates: certificates,
        dynkin_d4: dynkin_d4_check(&graph),
        dot: to_dot(&graph),
    })
}

fn cmd_graph(cli: &Cli) -> Result<i32, EngineError> {
    let surface = required_surface(cli)?;
    let m = required_m(cli)?;
    let mut budget = budget_of(cli);
    let report = graph_report(surface, m, &mut budget)?;
    if let Some(path) = &cli.dot {
        fs::write(path, format!("{}\n", report.dot)).map_err(|e| {
            EngineError::Precondition(format!("cannot write {}: {e}", path.display()))
        })?;
    }
    let verified = report.verified();
    emit(&report);
    Ok(if verified { 0 } else { 1 })
}

fn cmd_count(cli: &Cli, k: u32, build: &str, jets: bool) -> Result<i32, EngineError> {
    let m = required_m(cli)?;
    let mut ideal = build_ideal(cli, build, m)?;
    if jets {
        let surface = required_surface(cli)?;
        let mut gens = ideal.gens;
        gens.extend(jet_coeffs(surface, m).coeffs);
        ideal = Ideal::new(gens, m);
    }
    let report = point_count(&ideal, k)?;
    emit(&report);
    Ok(0)
}

fn cmd_suite(cli: &Cli) -> Result<i32, EngineError> {
    let surface = required_surface(cli)?;
    let m = required_m(cli)?;
    let mut budget = budget_of(cli);
    let report = run_paper_suite(surface, m, &mut budget)?;
    emit(&report);
    Ok(if report.checks.iter().any(|c| c.status == CheckStatus::Fail) {
        1
    } else if report.any_budget_skip() {
        2
    } else {
        0
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_selectors_parse() {
        assert!(matches!(parse_build("J1"), Ok(BuildSel::Chart(1))));
        assert!(matches!(parse_build("j3"), Ok(BuildSel::Chart(3))));
        let BuildSel::Block(spec) = parse_build("L:3,2,2").unwrap() else {
            panic!("expected a coordinate block");
        };
        assert_eq!((spec.p, spec.q, spec.r), (3, 2, 2));
        assert!(parse_build("K9").is_err());
        assert!(parse_build("L:1,2").is_err());
    }

    #[test]
    fn variables_parse() {
        assert_eq!(parse_var("y2").unwrap(), VarId::y(2));
        assert!(parse_var("y2+z1").is_err());
        assert!(parse_var("y2^2").is_err());
        assert!(parse_var("").is_err());
    }

    #[test]
    fn usage_errors_exit_with_code_three() {
        let cli = Cli::try_parse_from(["jetfiber", "decompose"]).unwrap();
        let err = dispatch(&cli).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn expand_is_quiet_about_missing_optionals() {
        let cli =
            Cli::try_parse_from(["jetfiber", "expand", "--surface", "d40", "-m", "2"]).unwrap();
        assert_eq!(dispatch(&cli).unwrap(), 0);
    }
}
