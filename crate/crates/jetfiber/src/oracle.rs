//! Independent finite-field oracles: point enumeration, dimension probes,
//! an exhaustive factor scan, and the scripted verification suite.
//!
//! Everything here deliberately avoids the Groebner engine, so that its
//! verdicts can cross-check the symbolic results. Point counts over GF(2^k)
//! are evidence, not proof — suite records carry an evidence tier so oracle
//! conclusions are never presented as certified ones.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::components::{decompose, ComponentLabel, Symmetry};
use crate::error::EngineError;
use crate::graph::{
    build_graph, dynkin_d4_check, identity_certificates, maximal_elements,
    pairwise_intersections, radical_certificates, to_dot, verify_poset,
};
use crate::field::{FieldElem, GfField};
use crate::ideal::{build_j, build_l, chart_domain_certify, Budget, Ideal};
use crate::jets::{closed_form_g, jet_coeffs, reduce_mod_l, verify_g_lemma, Surface, TruncationSpec};
use crate::poly::{Family, Polynomial, VarId};

/// Hard cap on enumeration work: 2^24 point evaluations.
pub const ENUMERATION_BITS: u32 = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Pass,
    Fail,
    SkippedBudget,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvidenceTier {
    /// Groebner-level certificate (normal forms, radical membership,
    /// dimension, ideal equality).
    Symbolic,
    /// Exact polynomial identity (reduction/congruence checks, no basis
    /// computation needed).
    Identity,
    /// Finite-field point enumeration; evidence over GF(2^k) only.
    Oracle,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub claim: String,
    pub status: CheckStatus,
    pub tier: EvidenceTier,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub surface: Surface,
    pub m: u32,
    pub checks: Vec<CheckRecord>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == CheckStatus::Pass)
    }

    pub fn any_budget_skip(&self) -> bool {
        self.checks.iter().any(|c| c.status == CheckStatus::SkippedBudget)
    }

    fn failing_ids(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| c.status != CheckStatus::Pass)
            .map(|c| c.id.as_str())
            .collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PointCountReport {
    pub ideal: String,
    pub k: u32,
    pub m: u32,
    pub count: u64,
    pub sample: Vec<String>,
}

fn canonical_vars(m: u32) -> Vec<VarId> {
    let mut vars = Vec::with_capacity(3 * (m + 1) as usize);
    for family in [Family::X, Family::Y, Family::Z] {
        for i in 0..=m {
            vars.push(VarId { family, index: i });
        }
    }
    vars
}

/// A generator consisting of a single pure power v^e pins v to zero over a
/// field; splitting those off first shrinks the enumeration space exactly.
fn forced_zero_var(p: &Polynomial) -> Option<VarId> {
    if p.num_terms() != 1 {
        return None;
    }
    let mono = p.terms().next()?;
    let mut it = mono.iter();
    match (it.next(), it.next()) {
        (Some((v, _)), None) => Some(v),
        _ => None,
    }
}

/// Propagate forced zeros to a fixpoint: a pinned variable kills every
/// monomial containing it, which can expose new pure powers (for instance
/// x3^2 + y2^2 z2 + y2 z2^2 collapses to x3^2 once y2 and z2 are pinned).
/// Exact on points: a generator and its truncation agree wherever the
/// pinned variables vanish.
fn forced_fixpoint(
    gens: &[Polynomial],
    m: u32,
) -> Result<(BTreeSet<VarId>, Vec<Polynomial>), EngineError> {
    for g in gens {
        for v in g.vars() {
            if v.family == Family::Aux {
                return Err(EngineError::Precondition(
                    "enumeration is defined over the jet variables only".into(),
                ));
            }
            if v.index > m {
                return Err(EngineError::IndexOutOfRange { index: v.index, m });
            }
        }
    }
    let mut forced: BTreeSet<VarId> = BTreeSet::new();
    let mut rest: Vec<Polynomial> = gens.to_vec();
    loop {
        let mut changed = false;
        let mut next = Vec::new();
        for g in rest {
            let r = g.drop_monomials_containing(|v| forced.contains(&v));
            if r.is_zero() {
                continue;
            }
            match forced_zero_var(&r) {
                Some(v) => {
                    forced.insert(v);
                    changed = true;
                }
                None => next.push(r),
            }
        }
        rest = next;
        if !changed {
            return Ok((forced, rest));
        }
    }
}

/// Number of coordinates enumeration would have to scan for these
/// generators after forced-zero propagation.
pub fn enumeration_free_vars(gens: &[Polynomial], m: u32) -> Result<u32, EngineError> {
    let (forced, _) = forced_fixpoint(gens, m)?;
    Ok(3 * (m + 1) - forced.len() as u32)
}

/// Exhaustively enumerate the GF(2^k)-points of V(gens) in affine
/// 3(m+1)-space. Points come back sorted as coordinate vectors in the
/// canonical x0..xm, y0..ym, z0..zm order.
pub fn enumerate_points(
    gens: &[Polynomial],
    m: u32,
    field: &GfField,
) -> Result<BTreeSet<Vec<FieldElem>>, EngineError> {
    let (forced, rest) = forced_fixpoint(gens, m)?;
    let all_vars = canonical_vars(m);
    let free: Vec<VarId> = all_vars.iter().copied().filter(|v| !forced.contains(v)).collect();
    if field.k() * free.len() as u32 > ENUMERATION_BITS {
        return Err(EngineError::EnumerationBudget(format!(
            "{} free variables over GF(2^{}) exceed 2^{ENUMERATION_BITS} points",
            free.len(),
            field.k()
        )));
    }
    // Slot table: position of each variable in the assignment vector,
    // indexed by family and coordinate for O(1) lookups in the hot loop.
    let width = (m + 1) as usize;
    let mut slot = vec![usize::MAX; 3 * width];
    let flat = |v: VarId| -> usize {
        let f = match v.family {
            Family::X => 0,
            Family::Y => 1,
            Family::Z => 2,
            Family::Aux => unreachable!(),
        };
        f * width + v.index as usize
    };
    for (i, &v) in free.iter().enumerate() {
        slot[flat(v)] = i;
    }
    let elems: Vec<FieldElem> = field.elements().collect();
    let q = elems.len() as u64;
    let total = q.pow(free.len() as u32);

    let mut points = BTreeSet::new();
    let mut assign = vec![0 as FieldElem; free.len()];
    for counter in 0..total {
        let mut idx = counter;
        for a in assign.iter_mut() {
            *a = elems[(idx % q) as usize];
            idx /= q;
        }
        let value = |v: VarId| {
            let s = slot[flat(v)];
            if s == usize::MAX {
                0
            } else {
                assign[s]
            }
        };
        if rest.iter().all(|g| g.evaluate(field, value) == 0) {
            points.insert(all_vars.iter().map(|&v| value(v)).collect());
        }
    }
    Ok(points)
}

fn point_display(vars: &[VarId], point: &[FieldElem]) -> String {
    let parts: Vec<String> = vars
        .iter()
        .zip(point)
        .filter(|(_, &c)| c != 0)
        .map(|(v, c)| format!("{v}={c}"))
        .collect();
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" ")
    }
}

/// Exact number of GF(2^k)-points of V(I), by exhaustive evaluation.
/// The ambient space itself must fit the enumeration budget.
pub fn point_count(ideal: &Ideal, k: u32) -> Result<PointCountReport, EngineError> {
    let field = GfField::new(k)?;
    if 3 * k * (ideal.m + 1) > ENUMERATION_BITS {
        return Err(EngineError::EnumerationBudget(format!(
            "ambient space has 2^{} points, budget is 2^{ENUMERATION_BITS}",
            3 * k * (ideal.m + 1)
        )));
    }
    let points = enumerate_points(&ideal.gens, ideal.m, &field)?;
    let vars = canonical_vars(ideal.m);
    let sample = points.iter().take(4).map(|p| point_display(&vars, p)).collect();
    Ok(PointCountReport {
        ideal: ideal.gens.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(", "),
        k,
        m: ideal.m,
        count: points.len() as u64,
        sample,
    })
}

/// Heuristic dimension estimate: the slope of log2 |V(GF(2^k))| against k
/// for k = 1, 2, rounded to the nearest integer. Point counts of varieties
/// over tiny fields are noisy; this never overrides the Groebner dimension,
/// it only flags disagreement.
pub fn dimension_probe(ideal: &Ideal) -> Result<i64, EngineError> {
    let n1 = enumerate_points(&ideal.gens, ideal.m, &GfField::new(1)?)?.len() as f64;
    let n2 = enumerate_points(&ideal.gens, ideal.m, &GfField::new(2)?)?.len() as f64;
    if n2 == 0.0 {
        return Ok(-1);
    }
    if n1 == 0.0 {
        // No rational points; fall back to the k = 2 count alone.
        return Ok((n2.log2() / 2.0).round() as i64);
    }
    Ok((n2.log2() - n1.log2()).round() as i64)
}

type HomoPoly = BTreeMap<(u8, u8, u8), FieldElem>;

fn homo_mul(field: &GfField, a: &HomoPoly, b: &HomoPoly) -> HomoPoly {
    let mut out = HomoPoly::new();
    for (&(ax, ay, az), &ca) in a {
        for (&(bx, by, bz), &cb) in b {
            let key = (ax + bx, ay + by, az + bz);
            let prev = out.get(&key).copied().unwrap_or(0);
            let next = field.add(prev, field.mul(ca, cb));
            if next == 0 {
                out.remove(&key);
            } else {
                out.insert(key, next);
            }
        }
    }
    out
}

fn monomials_of_degree(d: u8) -> Vec<(u8, u8, u8)> {
    let mut out = Vec::new();
    for i in 0..=d {
        for j in 0..=(d - i) {
            out.push((i, j, d - i - j));
        }
    }
    out
}

/// Scan all factorizations target = A * B with homogeneous A, B of the
/// given degrees over the field. Exhaustive over coefficient vectors.
fn has_homogeneous_split(field: &GfField, target: &HomoPoly, da: u8, db: u8) -> bool {
    let monos_a = monomials_of_degree(da);
    let monos_b = monomials_of_degree(db);
    let elems: Vec<FieldElem> = field.elements().collect();
    let q = elems.len() as u64;
    let build = |monos: &[(u8, u8, u8)], mut idx: u64| -> HomoPoly {
        let mut p = HomoPoly::new();
        for &mk in monos {
            let c = elems[(idx % q) as usize];
            idx /= q;
            if c != 0 {
                p.insert(mk, c);
            }
        }
        p
    };
    for ia in 1..q.pow(monos_a.len() as u32) {
        let a = build(&monos_a, ia);
        if a.is_empty() {
            continue;
        }
        for ib in 1..q.pow(monos_b.len() as u32) {
            let b = build(&monos_b, ib);
            if !b.is_empty() && homo_mul(field, &a, &b) == *target {
                return true;
            }
        }
    }
    false
}

/// The cubic form x^2 + y^2 z + y z^2 (the seed of every chart certificate)
/// has no nonunit factorization over GF(2) or GF(4): any split of a cubic
/// has a linear factor, and the scan over degree-(1,2) pairs is exhaustive.
/// Absolute irreducibility is a background fact this evidence supports.
pub fn irreducible_check_d40_form() -> bool {
    let target: HomoPoly =
        [((2, 0, 0), 1), ((0, 2, 1), 1), ((0, 1, 2), 1)].into_iter().collect();
    for k in [1, 2] {
        let field = GfField::new(k).unwrap();
        if has_homogeneous_split(&field, &target, 1, 2) {
            return false;
        }
    }
    true
}

/// Control for the factor scan: in characteristic 2 the form x^2 + y^2 is
/// the square of x + y, and the scan must find that split.
pub fn reducible_control_detected() -> bool {
    let target: HomoPoly = [((2, 0, 0), 1), ((0, 2, 0), 1)].into_iter().collect();
    let field = GfField::new(1).unwrap();
    has_homogeneous_split(&field, &target, 1, 1)
}

struct CheckSink {
    checks: Vec<CheckRecord>,
}

impl CheckSink {
    fn new() -> Self {
        CheckSink { checks: Vec::new() }
    }

    /// Run one check; budget exhaustion becomes a skipped record, any other
    /// engine error a failed one. No outcome is dropped.
    fn run(
        &mut self,
        id: &str,
        claim: &str,
        tier: EvidenceTier,
        body: impl FnOnce() -> Result<(bool, String), EngineError>,
    ) {
        let (status, tier, detail) = match body() {
            Ok((true, detail)) => (CheckStatus::Pass, tier, detail),
            Ok((false, detail)) => (CheckStatus::Fail, tier, detail),
            Err(EngineError::BudgetExceeded { steps }) => (
                CheckStatus::SkippedBudget,
                tier,
                format!("step budget of {steps} exhausted"),
            ),
            Err(EngineError::EnumerationBudget(detail)) => {
                (CheckStatus::SkippedBudget, tier, detail)
            }
            Err(e) => (CheckStatus::Fail, tier, e.to_string()),
        };
        self.checks.push(CheckRecord {
            id: id.to_string(),
            claim: claim.to_string(),
            status,
            tier,
            detail,
        });
    }
}

fn ok(pass: bool) -> Result<(bool, String), EngineError> {
    Ok((pass, String::new()))
}

/// Rebuild and verify the center-component cases at scale u: p = 3u,
/// q = 2u, for one jet level 2p <= m < 2p+6. The argument never needs a
/// basis of the full defining ideal: the chart certificates pin the
/// codimension on the two seed charts, the reduction identities collapse
/// the off-chart locus W case by case to coordinate sets whose codimensions
/// are checked directly, and the generator count caps the codimension from
/// above. Rational-point comparisons corroborate the collapses at u = 1,
/// where the coordinate counts stay enumerable.
pub fn verify_center_cases(u: u32, m: u32, budget: &mut Budget) -> Result<SuiteReport, EngineError> {
    if !(1..=2).contains(&u) {
        return Err(EngineError::Precondition(format!("supported scales are u = 1, 2; got {u}")));
    }
    let (p, q) = (3 * u, 2 * u);
    if !(2 * p..2 * p + 6).contains(&m) {
        return Err(EngineError::Precondition(format!(
            "scale u = {u} covers {} <= m < {}, got m = {m}",
            2 * p,
            2 * p + 6
        )));
    }
    let surface = Surface::D41;
    let coeffs = &jet_coeffs(surface, m).coeffs;
    let base_spec = TruncationSpec::new(p, q, q);
    // Reduced generators G^(2p)..G^(m); entries below 2p vanish.
    let g_red: Vec<Polynomial> =
        (2 * p..=m).map(|l| reduce_mod_l(&coeffs[l as usize], base_spec)).collect();
    let with_g = |l_ideal: Ideal| -> Ideal {
        let mut gens = l_ideal.gens;
        gens.extend(g_red.iter().filter(|g| !g.is_zero()).cloned());
        Ideal::new(gens, m)
    };
    let l = |a: u32, b: u32, c: u32| build_l(TruncationSpec::new(a, b, c), m).unwrap();
    let xvar = |i: u32| Polynomial::var(VarId::x(i));
    let mut sink = CheckSink::new();

    sink.run(
        "center-krull-bound",
        "the defining ideal has m+u+1 generators, so every component has codimension at most m+u+1",
        EvidenceTier::Identity,
        || {
            let count = (p + q + q) as usize + g_red.iter().filter(|g| !g.is_zero()).count();
            Ok((count as u32 == m + u + 1, format!("{count} generators")))
        },
    );

    sink.run(
        "center-main",
        "on each seed chart the center set is an irreducible triangular graph of codimension m+u+1",
        EvidenceTier::Symbolic,
        || {
            let closed = with_g(l(p, q, q));
            let cy = chart_domain_certify(&closed, VarId::y(q));
            let cz = chart_domain_certify(&closed, VarId::z(q));
            match (cy, cz) {
                (Ok(cy), Ok(cz)) => Ok((
                    cy.height() == m + u + 1 && cz.height() == m + u + 1,
                    format!("chart heights {} and {}", cy.height(), cz.height()),
                )),
                (Err(e), _) | (_, Err(e)) => Ok((false, e.reason)),
            }
        },
    );
    // The chart-closure equality on enumerated points, where the free
    // coordinates fit the budget; the saturations stay cheap at these sizes.
    if u == 1 && 3 * (m + 1) - (p + q + q) <= 20 {
        sink.run(
            "center-chart-points",
            "the y_q- and z_q-chart closures contain the same GF(2) points",
            EvidenceTier::Oracle,
            || {
                let field = GfField::new(1)?;
                let closed = with_g(l(p, q, q));
                let sat_y = closed.saturate(VarId::y(q), budget)?;
                let sat_z = closed.saturate(VarId::z(q), budget)?;
                let py = enumerate_points(sat_y.gb.as_deref().unwrap(), m, &field)?;
                let pz = enumerate_points(sat_z.gb.as_deref().unwrap(), m, &field)?;
                Ok((py == pz, format!("{} points each", py.len())))
            },
        );
    }

    match m - 2 * p {
        0 => {
            // Case m = 2p: the seed equation alone cuts the center set.
            sink.run(
                "center-seed-identity",
                "the degree-2p reduction is x_p^2 + y_q^2 z_q + y_q z_q^2",
                EvidenceTier::Identity,
                || {
                    let seed = closed_form_g(base_spec, 2 * p, true);
                    Ok((g_red[0] == seed && !seed.is_zero(), seed.to_string()))
                },
            );
            sink.run(
                "center-seed-scan",
                "the seed cubic admits no factorization over GF(2) or GF(4)",
                EvidenceTier::Oracle,
                || ok(irreducible_check_d40_form()),
            );
            sink.run(
                "center-chart-open",
                "y_q and z_q are nonzerodivisors on the center set: neither lies in the defining ideal",
                EvidenceTier::Symbolic,
                || {
                    let gb = with_g(l(p, q, q)).groebner(budget)?;
                    let y_in = gb.contains_poly(&Polynomial::var(VarId::y(q)), budget)?;
                    let z_in = gb.contains_poly(&Polynomial::var(VarId::z(q)), budget)?;
                    ok(!y_in && !z_in)
                },
            );
        }
        1 => {
            // Case m = 2p+1: W = V(L_{p,q+1,q+1} + G) collapses to the
            // coordinate set V(L_{p+1,q+1,q+1}) of codimension 7u+3. The
            // reduction chain is the whole proof: the seed reduction forces
            // x_p to vanish and the next one then dies, so no basis of W is
            // ever needed.
            sink.run(
                "center-w-reduction",
                "the degree-2p reduction is x_p^2 modulo L_{p,q+1,q+1} and the degree-(2p+1) reduction vanishes modulo L_{p+1,q+1,q+1}, so W = V(L_{p+1,q+1,q+1}) as a set",
                EvidenceTier::Identity,
                || {
                    let r0 = reduce_mod_l(&g_red[0], TruncationSpec::new(p, q + 1, q + 1));
                    let r1 = reduce_mod_l(&g_red[1], TruncationSpec::new(p + 1, q + 1, q + 1));
                    ok(r0 == xvar(p).mul(&xvar(p)) && r1.is_zero())
                },
            );
            coordinate_case_checks(
                &mut sink,
                &with_g(l(p, q + 1, q + 1)),
                &l(p + 1, q + 1, q + 1),
                7 * u + 3,
                m,
                u,
                budget,
            );
        }
        2 => {
            // Case m = 2p+2: W collapses to V(L_{p+2,q+1,q+1}), codim 7u+4.
            sink.run(
                "center-w-reduction",
                "modulo L_{p,q+1,q+1} the degree-2p reduction is x_p^2, then modulo L_{p+1,q+1,q+1} the degree-(2p+1) reduction vanishes and the degree-(2p+2) one is x_{p+1}^2, so W = V(L_{p+2,q+1,q+1}) as a set",
                EvidenceTier::Identity,
                || {
                    let r0 = reduce_mod_l(&g_red[0], TruncationSpec::new(p, q + 1, q + 1));
                    let mid = TruncationSpec::new(p + 1, q + 1, q + 1);
                    let r1 = reduce_mod_l(&g_red[1], mid);
                    let r2 = reduce_mod_l(&g_red[2], mid);
                    ok(r0 == xvar(p).mul(&xvar(p))
                        && r1.is_zero()
                        && r2 == xvar(p + 1).mul(&xvar(p + 1)))
                },
            );
            coordinate_case_checks(
                &mut sink,
                &with_g(l(p, q + 1, q + 1)),
                &l(p + 2, q + 1, q + 1),
                7 * u + 4,
                m,
                u,
                budget,
            );
        }
        3 => {
            // Case m = 2p+3: after the x_p, x_{p+1} collapses the
            // degree-(2p+3) reduction factors as y_{q+1} z_{q+1} (y_{q+1} +
            // z_{q+1}), splitting W three ways.
            let y = Polynomial::var(VarId::y(q + 1));
            let z = Polynomial::var(VarId::z(q + 1));
            let product = y.mul(&z).mul(&y.add(&z));
            let pieces = || -> [Ideal; 3] {
                let mut third = l(p + 2, q + 1, q + 1);
                third.gens.push(y.add(&z));
                [
                    l(p + 2, q + 2, q + 1),
                    l(p + 2, q + 1, q + 2),
                    Ideal::new(third.gens, m),
                ]
            };
            sink.run(
                "center-w-reduction",
                "the reductions collapse W to V(L_{p+2,q+1,q+1}) plus the degree-(2p+3) equation, which factors as y_{q+1} z_{q+1} (y_{q+1} + z_{q+1})",
                EvidenceTier::Identity,
                || {
                    let r0 = reduce_mod_l(&g_red[0], TruncationSpec::new(p, q + 1, q + 1));
                    let mid = TruncationSpec::new(p + 1, q + 1, q + 1);
                    let r1 = reduce_mod_l(&g_red[1], mid);
                    let r2 = reduce_mod_l(&g_red[2], mid);
                    let r3 = reduce_mod_l(&g_red[3], TruncationSpec::new(p + 2, q + 1, q + 1));
                    ok(r0 == xvar(p).mul(&xvar(p))
                        && r1.is_zero()
                        && r2 == xvar(p + 1).mul(&xvar(p + 1))
                        && r3 == product)
                },
            );
            let raw = with_g(l(p, q + 1, q + 1));
            sink.run(
                "center-w-contains",
                "each of the three split pieces lies inside W",
                EvidenceTier::Symbolic,
                || {
                    for piece in pieces() {
                        let piece = piece.groebner(budget)?;
                        if !crate::components::variety_subset(&piece, &raw, budget)? {
                            return ok(false);
                        }
                    }
                    ok(true)
                },
            );
            sink.run(
                "center-w-codim",
                "each split piece has codimension p+2q+5 = m+u+2, which exceeds m+u+1",
                EvidenceTier::Symbolic,
                || {
                    let want = (p + 2 * q + 5) as i64;
                    for piece in pieces() {
                        let codim = 3 * (m + 1) as i64 - piece.dimension(budget)?;
                        if codim != want || codim <= (m + u + 1) as i64 {
                            return Ok((false, format!("codimension {codim}")));
                        }
                    }
                    Ok((true, format!("codimension {want}")))
                },
            );
            if u == 1 {
                sink.run(
                    "center-w-points",
                    "the GF(2) points of W are exactly the union of the three split pieces",
                    EvidenceTier::Oracle,
                    || {
                        let field = GfField::new(1)?;
                        let w_pts = enumerate_points(&raw.gens, m, &field)?;
                        let mut union = BTreeSet::new();
                        for piece in pieces() {
                            union.extend(enumerate_points(&piece.gens, m, &field)?);
                        }
                        Ok((w_pts == union, format!("{} points", w_pts.len())))
                    },
                );
            }
        }
        4 => {
            // Case m = 2p+4: W' collapses to V(L_{p+3,q+2,q+2}), codim 7u+7.
            sink.run(
                "center-w-reduction",
                "modulo L_{p+2,q+2,q+2} the reductions of degrees 2p..2p+3 vanish and degree 2p+4 is x_{p+2}^2",
                EvidenceTier::Identity,
                || {
                    let spec = TruncationSpec::new(p + 2, q + 2, q + 2);
                    let low = (0..4).all(|i| reduce_mod_l(&g_red[i], spec).is_zero());
                    let top = reduce_mod_l(&g_red[4], spec) == xvar(p + 2).mul(&xvar(p + 2));
                    ok(low && top)
                },
            );
            coordinate_case_checks(
                &mut sink,
                &with_g(l(p + 2, q + 2, q + 2)),
                &l(p + 3, q + 2, q + 2),
                7 * u + 7,
                m,
                u,
                budget,
            );
        }
        _ => {
            // Case m = 2p+5: every reduction vanishes modulo L_{p+3,q+2,q+2}.
            sink.run(
                "center-w-reduction",
                "modulo L_{p+3,q+2,q+2} the reductions of degrees 2p..2p+5 all vanish",
                EvidenceTier::Identity,
                || {
                    let spec = TruncationSpec::new(p + 3, q + 2, q + 2);
                    ok(g_red.iter().all(|g| reduce_mod_l(g, spec).is_zero()))
                },
            );
            coordinate_case_checks(
                &mut sink,
                &with_g(l(p + 3, q + 2, q + 2)),
                &l(p + 3, q + 2, q + 2),
                7 * u + 7,
                m,
                u,
                budget,
            );
        }
    }

    Ok(SuiteReport { surface, m, checks: sink.checks })
}

/// The three checks shared by every case whose W collapses to a single
/// coordinate set: a one-directional radical inclusion (the reduction
/// identity supplies the other direction), the stated codimension, and a
/// rational-point comparison. When forced-zero propagation consumes every
/// generator on both sides, the point sets are compared as pinned
/// coordinate sets instead of being materialized.
fn coordinate_case_checks(
    sink: &mut CheckSink,
    raw: &Ideal,
    stated: &Ideal,
    codim_want: u32,
    m: u32,
    u: u32,
    budget: &mut Budget,
) {
    sink.run(
        "center-w-contains",
        "the stated coordinate set lies inside W",
        EvidenceTier::Symbolic,
        || {
            let target = stated.groebner(budget)?;
            ok(crate::components::variety_subset(&target, raw, budget)?)
        },
    );
    sink.run(
        "center-w-codim",
        "W has the stated codimension, which exceeds m+u+1",
        EvidenceTier::Symbolic,
        || {
            let dim = stated.dimension(budget)?;
            let codim = 3 * (m + 1) as i64 - dim;
            Ok((
                codim == codim_want as i64 && codim > (m + u + 1) as i64,
                format!("codimension {codim}"),
            ))
        },
    );
    if u == 1 {
        sink.run(
            "center-w-points",
            "W and the stated coordinate set contain the same GF(2) points",
            EvidenceTier::Oracle,
            || {
                let (raw_forced, raw_rest) = forced_fixpoint(&raw.gens, m)?;
                let (stated_forced, stated_rest) = forced_fixpoint(&stated.gens, m)?;
                if raw_rest.is_empty() && stated_rest.is_empty() {
                    return Ok((
                        raw_forced == stated_forced,
                        format!("{} pinned coordinates each", raw_forced.len()),
                    ));
                }
                let field = GfField::new(1)?;
                let a = enumerate_points(&raw.gens, m, &field)?;
                let b = enumerate_points(&stated.gens, m, &field)?;
                Ok((a == b, format!("{} points", a.len())))
            },
        );
    }
}

/// Check ids run_paper_suite must produce for a given surface and level;
/// the suite audits its own output against this manifest so nothing is
/// skipped silently.
pub fn expected_check_ids(surface: Surface, m: u32) -> Vec<&'static str> {
    let mut ids = vec![
        "jet-shape",
        "lemma-g-grid",
        "components",
        "separations",
        "witnesses",
        "symmetry",
    ];
    match surface {
        Surface::D40 => {
            if m >= 6 {
                ids.push("stable-shift");
            }
        }
        Surface::D41 => ids.push("z0-chart-equality"),
    }
    ids.extend(["poset", "radical-certs", "graph-dynkin"]);
    if surface == Surface::D41 && (6..=11).contains(&m) {
        ids.push("center-cases");
    }
    ids.extend([
        "small-m-display",
        "cover-oracle",
        "probe-agreement",
        "irreducible-form",
        "point-count-sanity",
    ]);
    ids
}

/// Run every verification this library can express, in dependency order,
/// and return one record per check. Failures are data, not errors; only a
/// nonsensical configuration is an error.
pub fn run_paper_suite(
    surface: Surface,
    m: u32,
    budget: &mut Budget,
) -> Result<SuiteReport, EngineError> {
    if m < 5 {
        return Err(EngineError::Precondition(format!(
            "the decomposition needs m >= 5, got m = {m}"
        )));
    }
    let mut sink = CheckSink::new();

    sink.run(
        "jet-shape",
        "the degree-l jet equation involves only coordinates of index at most l, for all l <= m",
        EvidenceTier::Identity,
        || {
            let sys = jet_coeffs(surface, m);
            let shaped = sys.coeffs.len() == (m + 1) as usize
                && sys.coeffs.iter().enumerate().all(|(l, c)| {
                    [Family::X, Family::Y, Family::Z]
                        .iter()
                        .all(|&f| c.max_index(f).map_or(true, |i| i <= l as u32))
                });
            ok(shaped)
        },
    );

    sink.run(
        "lemma-g-grid",
        "for every truncation 1 <= p,q,r <= 5 and degree l <= 12, the reduced jet equation matches its closed form, including the case predictions",
        EvidenceTier::Identity,
        || {
            let sys = jet_coeffs(surface, 12);
            for p in 1..=5 {
                for q in 1..=5 {
                    for r in 1..=5 {
                        let spec = TruncationSpec::new(p, q, r);
                        for l in 0..=12u32 {
                            let reduced = reduce_mod_l(&sys.coeffs[l as usize], spec);
                            let closed =
                                closed_form_g(spec, l, surface == Surface::D41);
                            if reduced != closed {
                                return Ok((false, format!("mismatch at p={p} q={q} r={r} l={l}")));
                            }
                            if surface == Surface::D41 && !verify_g_lemma(spec, l).all_matched {
                                return Ok((false, format!("case prediction failed at p={p} q={q} r={r} l={l}")));
                            }
                        }
                    }
                }
            }
            ok(true)
        },
    );

    // The decomposition underlies most of the remaining checks; compute it
    // once. A budget failure here cascades as skipped records, never as
    // silence.
    let decomposition = decompose(surface, m, budget);
    let dec_detail = match &decomposition {
        Ok(_) => String::new(),
        Err(e) => e.to_string(),
    };
    let dec = decomposition.as_ref().ok();

    sink.run(
        "components",
        "the singular fiber has exactly four components, each of certified dimension 2m+1",
        EvidenceTier::Symbolic,
        || match &decomposition {
            Ok(d) => ok(d.components.len() == 4 && d.components.iter().all(|c| c.dim == 2 * m + 1)),
            Err(EngineError::BudgetExceeded { steps }) => {
                Err(EngineError::BudgetExceeded { steps: *steps })
            }
            Err(_) => Ok((false, dec_detail.clone())),
        },
    );

    sink.run(
        "separations",
        "no component's variety is contained in another's, in either direction, at the radical level",
        EvidenceTier::Symbolic,
        || match dec {
            Some(d) => {
                ok(d.separations.len() == 6 && d.separations.iter().all(|s| !s.a_in_b && !s.b_in_a))
            }
            None => Ok((false, dec_detail.clone())),
        },
    );

    sink.run(
        "witnesses",
        "the five standard jets reproduce the proved membership patterns across Z0..Z3",
        EvidenceTier::Symbolic,
        || match dec {
            Some(d) => {
                let by_name: BTreeMap<&str, [bool; 4]> =
                    d.witnesses.iter().map(|w| (w.jet.as_str(), w.member)).collect();
                ok(by_name["(0,0,t)"] == [false, true, false, false]
                    && by_name["(0,t,0)"] == [false, false, true, false]
                    && by_name["(0,t,t)"] == [false, false, false, true]
                    && by_name["(0,0,t^2)"] == [true, true, false, false]
                    && by_name["(0,t^2,t^2)"] == [true, false, false, true])
            }
            None => Ok((false, dec_detail.clone())),
        },
    );

    sink.run(
        "symmetry",
        "swapping y and z exchanges Z1 and Z2; the shear on z exchanges Z2 and Z3; both fix the rest",
        EvidenceTier::Symbolic,
        || match dec {
            Some(d) => {
                use ComponentLabel::*;
                let want =
                    [(Symmetry::Psi1, [Z0, Z2, Z1, Z3]), (Symmetry::Psi2, [Z0, Z1, Z3, Z2])];
                for (which, expected) in want {
                    for c in &d.components {
                        let image =
                            crate::components::apply_symmetry(which, c, &d.components, budget)?;
                        if image.label != expected[c.label.index()] {
                            return ok(false);
                        }
                    }
                }
                ok(true)
            }
            None => Ok((false, dec_detail.clone())),
        },
    );

    match surface {
        Surface::D40 => {
            if m >= 6 {
                sink.run(
                    "stable-shift",
                    "for 6 <= l <= m the degree-l equation reduces to the degree-(l-6) equation with indices shifted by (3,2,2)",
                    EvidenceTier::Identity,
                    || ok(crate::components::stable_iso_check(m)?),
                );
            }
        }
        Surface::D41 => {
            sink.run(
                "z0-chart-equality",
                "the closures of the y2 and z2 charts of the center set define the same ideal",
                EvidenceTier::Symbolic,
                || match dec {
                    Some(d) => {
                        let closed = &d.component(ComponentLabel::Z0).closed_ideal;
                        let sat_y = closed.saturate(VarId::y(2), budget)?;
                        let sat_z = closed.saturate(VarId::z(2), budget)?;
                        ok(sat_y.same_ideal(&sat_z, budget)?)
                    }
                    None => Ok((false, dec_detail.clone())),
                },
            );
        }
    }

    let records = match dec {
        Some(d) => pairwise_intersections(&d.components, budget).map(Some),
        None => Ok(None),
    };

    sink.run(
        "poset",
        "the maximal pairwise intersections are exactly those through Z0, pairwise distinct, and the others land inside Z0",
        EvidenceTier::Symbolic,
        || match (&records, dec) {
            (Ok(Some(r)), Some(d)) => {
                verify_poset(r, d.component(ComponentLabel::Z0), budget)?;
                ok(true)
            }
            (Ok(None), _) | (_, None) => Ok((false, dec_detail.clone())),
            (Err(e), _) => Err(e.clone()),
        },
    );

    // The radical certificates carry the fallback ladder: symbolic first,
    // then the congruence identities, then rational points.
    let rad = match dec {
        Some(d) => Some(radical_certificates(d, budget)),
        None => None,
    };
    match rad {
        Some(Ok(certs)) =>ingest_pass_fail(
            &mut sink,
            "radical-certs",
            "x2 vanishes on Z1 meet Z2; the degree-5 chart relations vanish on the stated intersections with Z0",
            EvidenceTier::Symbolic,
            certs.iter().all(|(_, ok)| *ok),
            certs
                .iter()
                .map(|(claim, ok)| format!("{claim}: {}", if *ok { "holds" } else { "FAILS" }))
                .collect::<Vec<_>>()
                .join("; "),
        ),
        Some(Err(EngineError::BudgetExceeded { .. })) => {
            let idents = identity_certificates(surface);
            ingest_pass_fail(
                &mut sink,
                "radical-certs",
                "budget fallback: the congruence identities behind the radical certificates hold",
                EvidenceTier::Identity,
                idents.iter().all(|(_, ok)| *ok),
                idents
                    .iter()
                    .map(|(claim, ok)| format!("{claim}: {}", if *ok { "holds" } else { "FAILS" }))
                    .collect::<Vec<_>>()
                    .join("; "),
            );
        }
        Some(Err(e)) => ingest_pass_fail(
            &mut sink,
            "radical-certs",
            "x2 vanishes on Z1 meet Z2; the degree-5 chart relations vanish on the stated intersections with Z0",
            EvidenceTier::Symbolic,
            false,
            e.to_string(),
        ),
        None => ingest_pass_fail(
            &mut sink,
            "radical-certs",
            "x2 vanishes on Z1 meet Z2; the degree-5 chart relations vanish on the stated intersections with Z0",
            EvidenceTier::Symbolic,
            false,
            dec_detail.clone(),
        ),
    }

    sink.run(
        "graph-dynkin",
        "the incidence graph is the star with center Z0 — the Dynkin diagram of type D4",
        EvidenceTier::Symbolic,
        || match (&records, dec) {
            (Ok(Some(r)), Some(d)) => {
                let g = build_graph(&d.components, &maximal_elements(r));
                ok(dynkin_d4_check(&g)
                    && to_dot(&g) == "graph Gamma { Z0 -- Z1; Z0 -- Z2; Z0 -- Z3; }")
            }
            (Ok(None), _) | (_, None) => Ok((false, dec_detail.clone())),
            (Err(e), _) => Err(e.clone()),
        },
    );

    if surface == Surface::D41 && (6..=11).contains(&m) {
        sink.run(
            "center-cases",
            "the center-component case analysis at scale u=1 passes every reduction, form, and codimension check",
            EvidenceTier::Symbolic,
            || {
                let report = verify_center_cases(1, m, budget)?;
                let failing = report.failing_ids().join(", ");
                Ok((report.all_passed(), failing))
            },
        );
    }

    sink.run(
        "small-m-display",
        "at levels 1 and 2 the singular fiber is the coordinate set V(L_111), resp. V(L_211), on GF(2) and GF(4) points",
        EvidenceTier::Oracle,
        || {
            for k in [1, 2] {
                let field = GfField::new(k)?;
                for (small_m, a, b, c) in [(1u32, 1u32, 1u32, 1u32), (2, 2, 1, 1)] {
                    let mut gens = build_l(TruncationSpec::new(1, 1, 1), small_m)?.gens;
                    gens.extend(jet_coeffs(surface, small_m).coeffs.iter().cloned());
                    let fiber = enumerate_points(&gens, small_m, &field)?;
                    let target =
                        enumerate_points(&build_l(TruncationSpec::new(a, b, c), small_m)?.gens, small_m, &field)?;
                    if fiber != target {
                        return Ok((false, format!("level {small_m}, k={k}")));
                    }
                }
            }
            ok(true)
        },
    );

    sink.run(
        "cover-oracle",
        "at level 3 the singular fiber equals the union of the three chart sets on GF(2) points",
        EvidenceTier::Oracle,
        || ok(cover_check(surface, 3, 1)?),
    );

    sink.run(
        "probe-agreement",
        "the point-count dimension estimate agrees with the Groebner dimension on the level-3 chart ideal",
        EvidenceTier::Oracle,
        || {
            let j1 = build_j(surface, 1, 3)?;
            let probe = dimension_probe(&j1)?;
            let exact = j1.dimension(budget)?;
            Ok((probe == exact, format!("probe {probe}, dimension {exact}")))
        },
    );

    sink.run(
        "irreducible-form",
        "the seed cubic admits no factorization over GF(2) or GF(4), and the scan catches the char-2 square control",
        EvidenceTier::Oracle,
        || ok(irreducible_check_d40_form() && reducible_control_detected()),
    );

    sink.run(
        "point-count-sanity",
        "V(L_111) at level 1 has exactly 8 rational points; V(1) has none",
        EvidenceTier::Oracle,
        || {
            let l111 = build_l(TruncationSpec::new(1, 1, 1), 1)?;
            let eight = point_count(&l111, 1)?.count == 8;
            let unit = Ideal::new(vec![Polynomial::one()], 1);
            let zero = point_count(&unit, 1)?.count == 0;
            ok(eight && zero)
        },
    );

    let report = SuiteReport { surface, m, checks: sink.checks };
    let produced: Vec<&str> = report.checks.iter().map(|c| c.id.as_str()).collect();
    let expected = expected_check_ids(surface, m);
    if produced != expected {
        return Err(EngineError::Verification(format!(
            "suite manifest mismatch: produced {produced:?}, expected {expected:?}"
        )));
    }
    Ok(report)
}

fn ingest_pass_fail(
    sink: &mut CheckSink,
    id: &str,
    claim: &str,
    tier: EvidenceTier,
    pass: bool,
    detail: String,
) {
    sink.checks.push(CheckRecord {
        id: id.to_string(),
        claim: claim.to_string(),
        status: if pass { CheckStatus::Pass } else { CheckStatus::Fail },
        tier,
        detail,
    });
}

/// The cover identity on points: V(L_111 + all jet equations) equals
/// V(J^1) ∪ V(J^2) ∪ V(J^3) over GF(2^k), by exhaustive enumeration of
/// all four sets.
pub fn cover_check(surface: Surface, m: u32, k: u32) -> Result<bool, EngineError> {
    let field = GfField::new(k)?;
    let mut fiber_gens = build_l(TruncationSpec::new(1, 1, 1), m)?.gens;
    fiber_gens.extend(jet_coeffs(surface, m).coeffs.iter().cloned());
    let fiber = enumerate_points(&fiber_gens, m, &field)?;

    let mut union = BTreeSet::new();
    for i in 1..=3 {
        union.extend(enumerate_points(&build_j(surface, i, m)?.gens, m, &field)?);
    }
    Ok(fiber == union)
}
