//! Groebner machinery over GF(2): monomial orders, Buchberger completion
//! with the Gebauer-Moeller pair update, saturation by a variable, radical
//! membership, the combinatorial dimension of a variety, and triangular
//! certificates for localized ideals.
//!
//! Coefficients are always GF(2), so polynomials are plain term sets and
//! every basis element is monic for free. All computations run under an
//! explicit step budget; exhausting it is an error, never a wrong answer.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::EngineError;
use crate::jets::{jet_coeffs, Surface, TruncationSpec};
use crate::poly::{Family, Polynomial, VarId, MAX_EXP};

/// Default step allowance for one basis-level operation.
pub const DEFAULT_STEP_BUDGET: u64 = 1_000_000;

/// Counted resource for basis computations: one unit per reduction step or
/// processed S-pair. Exhaustion is an explicit error so callers can fall
/// back to structural certificates instead of waiting forever.
#[derive(Debug, Clone)]
pub struct Budget {
    initial: u64,
    remaining: u64,
}

impl Budget {
    pub fn new(steps: u64) -> Self {
        Budget { initial: steps, remaining: steps }
    }

    pub fn standard() -> Self {
        Self::new(DEFAULT_STEP_BUDGET)
    }

    pub fn charge(&mut self, n: u64) -> Result<(), EngineError> {
        if self.remaining < n {
            self.remaining = 0;
            return Err(EngineError::BudgetExceeded { steps: self.initial });
        }
        self.remaining -= n;
        Ok(())
    }

    pub fn spent(&self) -> u64 {
        self.initial - self.remaining
    }
}

/// Term order used by the engine.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum MonomialOrder {
    /// Graded reverse lex with precedence y_m > .. > y_2 > z_m > .. > z_2 >
    /// x_m > .. > x_2 > y_1 > z_1 > x_1 > y_0 > z_0 > x_0 > aux. High-index
    /// y/z variables lead, so the triangular structure of the jet ideals
    /// shows up directly in leading terms and Buchberger stays cheap.
    Grevlex,
    /// Lexicographic with the same variable precedence.
    Lex,
    /// Elimination order: monomials are compared grevlex on the `elim`
    /// block first, ties broken grevlex on the remaining variables.
    Block { elim: Vec<VarId> },
}

/// Precedence key; lower sorts earlier = higher precedence.
fn precedence_rank(v: VarId) -> (u8, u8, i64) {
    let fam = match v.family {
        Family::Y => 0u8,
        Family::Z => 1,
        Family::X => 2,
        Family::Aux => return (4, 0, v.index as i64),
    };
    if v.index >= 2 {
        (fam, 0, -(v.index as i64))
    } else {
        (3, (1 - v.index as u8) * 3 + fam, 0)
    }
}

/// Dense exponent vector aligned to a `Ctx`.
type DMono = Vec<u16>;
/// Terms sorted descending in the active order; leading term first.
type DPoly = Vec<DMono>;

fn mono_mul(a: &[u16], b: &[u16]) -> Result<DMono, EngineError> {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| {
            x.checked_add(y)
                .ok_or_else(|| EngineError::Limit("exponent overflow during reduction".into()))
        })
        .collect()
}

fn mono_div(a: &[u16], b: &[u16]) -> DMono {
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

fn mono_divides(a: &[u16], b: &[u16]) -> bool {
    a.iter().zip(b).all(|(&x, &y)| x <= y)
}

fn mono_lcm(a: &[u16], b: &[u16]) -> DMono {
    a.iter().zip(b).map(|(&x, &y)| x.max(y)).collect()
}

fn grevlex_cmp(a: &[u16], b: &[u16]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    if da != db {
        return da.cmp(&db);
    }
    // Same degree: the smaller exponent on the lowest-precedence variable
    // wins, i.e. the last nonzero entry of a-b decides, negative = greater.
    for i in (0..a.len()).rev() {
        if a[i] != b[i] {
            return b[i].cmp(&a[i]);
        }
    }
    Ordering::Equal
}

/// Variable context: the finitely many variables in play, sorted by
/// precedence, plus the active order. Dense vectors index into `vars`.
struct Ctx {
    vars: Vec<VarId>,
    order: MonomialOrder,
    elim_mask: Vec<bool>,
}

impl Ctx {
    fn new(vars: BTreeSet<VarId>, order: MonomialOrder) -> Ctx {
        let mut vs: Vec<VarId> = vars.into_iter().collect();
        vs.sort_by_key(|v| precedence_rank(*v));
        let elim_mask = match &order {
            MonomialOrder::Block { elim } => vs.iter().map(|v| elim.contains(v)).collect(),
            _ => vec![false; vs.len()],
        };
        Ctx { vars: vs, order, elim_mask }
    }

    fn pos(&self, v: VarId) -> usize {
        self.vars
            .iter()
            .position(|&u| u == v)
            .expect("variable missing from context")
    }

    fn embed(&self, p: &Polynomial) -> DPoly {
        let mut terms: Vec<DMono> = p
            .terms()
            .map(|m| {
                let mut e = vec![0u16; self.vars.len()];
                for (v, k) in m.iter() {
                    e[self.pos(v)] = k;
                }
                e
            })
            .collect();
        terms.sort_by(|a, b| self.cmp(b, a));
        terms
    }

    fn extract(&self, p: &DPoly) -> Result<Polynomial, EngineError> {
        if p.iter().any(|e| e.iter().any(|&k| k > MAX_EXP)) {
            return Err(EngineError::Limit("exponent overflow in basis element".into()));
        }
        Ok(Polynomial::from_terms(p.iter().map(|e| {
            crate::poly::Monomial::from_pairs(
                e.iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| (self.vars[i], k)),
            )
        })))
    }

    fn cmp(&self, a: &[u16], b: &[u16]) -> Ordering {
        match &self.order {
            MonomialOrder::Grevlex => grevlex_cmp(a, b),
            MonomialOrder::Lex => {
                for i in 0..a.len() {
                    if a[i] != b[i] {
                        return a[i].cmp(&b[i]);
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::Block { .. } => self
                .masked_grevlex(a, b, true)
                .then_with(|| self.masked_grevlex(a, b, false)),
        }
    }

    fn masked_grevlex(&self, a: &[u16], b: &[u16], block: bool) -> Ordering {
        let deg = |m: &[u16]| -> u64 {
            m.iter()
                .enumerate()
                .filter(|(i, _)| self.elim_mask[*i] == block)
                .map(|(_, &e)| e as u64)
                .sum()
        };
        let (da, db) = (deg(a), deg(b));
        if da != db {
            return da.cmp(&db);
        }
        for i in (0..a.len()).rev() {
            if self.elim_mask[i] == block && a[i] != b[i] {
                return b[i].cmp(&a[i]);
            }
        }
        Ordering::Equal
    }

    /// GF(2) addition: symmetric difference of two descending term lists.
    fn merge_xor(&self, a: &DPoly, b: &DPoly) -> DPoly {
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match self.cmp(&a[i], &b[j]) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        out
    }

    /// Normal form of `f` against `basis` (not necessarily a GB); one budget
    /// unit per division step.
    fn nf(&self, f: &DPoly, basis: &[DPoly], budget: &mut Budget) -> Result<DPoly, EngineError> {
        let mut work = f.clone();
        let mut rem: DPoly = Vec::new();
        'outer: while !work.is_empty() {
            for g in basis {
                if !g.is_empty() && mono_divides(&g[0], &work[0]) {
                    budget.charge(1)?;
                    let q = mono_div(&work[0], &g[0]);
                    let shifted: DPoly =
                        g.iter().map(|m| mono_mul(m, &q)).collect::<Result<_, _>>()?;
                    work = self.merge_xor(&work, &shifted);
                    continue 'outer;
                }
            }
            rem.push(work.remove(0));
        }
        Ok(rem)
    }

    fn spoly(&self, f: &DPoly, g: &DPoly, lcm: &DMono) -> Result<DPoly, EngineError> {
        let qf = mono_div(lcm, &f[0]);
        let qg = mono_div(lcm, &g[0]);
        let sf: DPoly = f.iter().map(|m| mono_mul(m, &qf)).collect::<Result<_, _>>()?;
        let sg: DPoly = g.iter().map(|m| mono_mul(m, &qg)).collect::<Result<_, _>>()?;
        Ok(self.merge_xor(&sf, &sg))
    }

    /// Gebauer-Moeller update: extend the basis with `h`, pruning the pair
    /// set by the coprimality, divisibility and chain criteria.
    fn gm_update(&self, g: &mut Vec<DPoly>, pairs: &mut Vec<(usize, usize, DMono)>, h: DPoly) {
        let t = g.len();
        let hlm = h[0].clone();
        // (index, lcm with h, LMs coprime) for every prospective pair.
        let cand: Vec<(usize, DMono, bool)> = (0..t)
            .map(|i| {
                let l = mono_lcm(&g[i][0], &hlm);
                let cop = l
                    .iter()
                    .zip(g[i][0].iter().zip(&hlm))
                    .all(|(&lc, (&a, &b))| lc as u32 == a as u32 + b as u32);
                (i, l, cop)
            })
            .collect();
        // Divisibility sieve over the new pairs; the processing order makes
        // the survivor of an equal-lcm group deterministic. Coprime pairs
        // survive the sieve (so they can dominate others) and drop at the
        // end by Buchberger's first criterion.
        let mut kept: Vec<(usize, DMono, bool)> = Vec::new();
        for (k, (i, l, cop)) in cand.iter().enumerate() {
            let dominated = cand
                .iter()
                .enumerate()
                .any(|(k2, (_, l2, _))| k2 > k && mono_divides(l2, l))
                || kept.iter().any(|(_, l2, _)| mono_divides(l2, l));
            if *cop || !dominated {
                kept.push((*i, l.clone(), *cop));
            }
        }
        kept.retain(|(_, _, cop)| !cop);
        // Chain criterion on the old pairs.
        pairs.retain(|(i, j, l)| {
            !mono_divides(&hlm, l)
                || mono_lcm(&g[*i][0], &hlm) == *l
                || mono_lcm(&g[*j][0], &hlm) == *l
        });
        pairs.extend(kept.into_iter().map(|(i, l, _)| (i, t, l)));
        g.push(h);
    }

    fn buchberger(&self, gens: &[DPoly], budget: &mut Budget) -> Result<Vec<DPoly>, EngineError> {
        let mut g: Vec<DPoly> = Vec::new();
        let mut pairs: Vec<(usize, usize, DMono)> = Vec::new();
        for f in gens {
            if f.is_empty() {
                continue;
            }
            let r = self.nf(f, &g, budget)?;
            if !r.is_empty() {
                self.gm_update(&mut g, &mut pairs, r);
            }
        }
        while !pairs.is_empty() {
            budget.charge(1)?;
            // Normal strategy: smallest lcm first, ties by pair indices.
            let mut best = 0;
            for k in 1..pairs.len() {
                let ord = self
                    .cmp(&pairs[k].2, &pairs[best].2)
                    .then_with(|| (pairs[k].0, pairs[k].1).cmp(&(pairs[best].0, pairs[best].1)));
                if ord == Ordering::Less {
                    best = k;
                }
            }
            let (i, j, lcm) = pairs.swap_remove(best);
            let s = self.spoly(&g[i], &g[j], &lcm)?;
            let r = self.nf(&s, &g, budget)?;
            if !r.is_empty() {
                self.gm_update(&mut g, &mut pairs, r);
            }
        }
        self.reduce_basis(g, budget)
    }

    /// Minimalize, then tail-reduce: the result is the reduced GB, sorted
    /// ascending by leading monomial.
    fn reduce_basis(&self, g: Vec<DPoly>, budget: &mut Budget) -> Result<Vec<DPoly>, EngineError> {
        let mut sorted = g;
        sorted.sort_by(|a, b| self.cmp(&a[0], &b[0]));
        let mut kept: Vec<DPoly> = Vec::new();
        'outer: for f in sorted {
            for k in &kept {
                if mono_divides(&k[0], &f[0]) {
                    continue 'outer;
                }
            }
            kept.push(f);
        }
        for i in 0..kept.len() {
            let me = kept[i].clone();
            let others: Vec<DPoly> = kept
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, p)| p.clone())
                .collect();
            // Leading term survives (no other LM divides it), tail reduces.
            kept[i] = self.nf(&me, &others, budget)?;
        }
        kept.sort_by(|a, b| self.cmp(&a[0], &b[0]));
        Ok(kept)
    }
}

/// Finitely generated ideal in the jet coordinate ring, with an optional
/// cached reduced Groebner basis.
#[derive(Debug, Clone, Serialize)]
pub struct Ideal {
    pub gens: Vec<Polynomial>,
    pub order: MonomialOrder,
    /// Jet order; the ambient space is 3(m+1)-dimensional.
    pub m: u32,
    pub gb: Option<Vec<Polynomial>>,
}

impl Ideal {
    pub fn new(gens: impl IntoIterator<Item = Polynomial>, m: u32) -> Ideal {
        Ideal {
            gens: gens.into_iter().filter(|p| !p.is_zero()).collect(),
            order: MonomialOrder::Grevlex,
            m,
            gb: None,
        }
    }

    pub fn with_order(mut self, order: MonomialOrder) -> Ideal {
        self.order = order;
        self.gb = None;
        self
    }

    pub fn ambient_dim(&self) -> u32 {
        3 * (self.m + 1)
    }

    /// The ideal sum I + J (generator concatenation).
    pub fn sum(&self, other: &Ideal) -> Ideal {
        Ideal::new(
            self.gens.iter().chain(&other.gens).cloned().collect::<Vec<_>>(),
            self.m.max(other.m),
        )
    }

    fn ctx(&self, extra: impl IntoIterator<Item = VarId>) -> Ctx {
        let mut vars: BTreeSet<VarId> = self.gens.iter().flat_map(|p| p.vars()).collect();
        if let Some(gb) = &self.gb {
            vars.extend(gb.iter().flat_map(|p| p.vars()));
        }
        vars.extend(extra);
        Ctx::new(vars, self.order.clone())
    }

    /// Compute (or return the cached) reduced Groebner basis. Every original
    /// generator is re-checked to reduce to zero against the result.
    pub fn groebner(&self, budget: &mut Budget) -> Result<Ideal, EngineError> {
        if self.gb.is_some() {
            return Ok(self.clone());
        }
        let ctx = self.ctx([]);
        let dense: Vec<DPoly> = self.gens.iter().map(|p| ctx.embed(p)).collect();
        let basis = ctx.buchberger(&dense, budget)?;
        for (g, d) in self.gens.iter().zip(&dense) {
            if !ctx.nf(d, &basis, budget)?.is_empty() {
                return Err(EngineError::Verification(format!(
                    "generator {g} does not reduce to zero against its own basis"
                )));
            }
        }
        let gb = basis
            .iter()
            .map(|p| ctx.extract(p))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Ideal { gens: self.gens.clone(), order: self.order.clone(), m: self.m, gb: Some(gb) })
    }

    /// Normal form against the cached basis; requires `groebner` first.
    pub fn normal_form(&self, p: &Polynomial, budget: &mut Budget) -> Result<Polynomial, EngineError> {
        let gb = self.gb.as_ref().ok_or_else(|| {
            EngineError::Precondition("normal_form requires a computed basis".into())
        })?;
        let mut vars: BTreeSet<VarId> = gb.iter().flat_map(|q| q.vars()).collect();
        vars.extend(p.vars());
        let ctx = Ctx::new(vars, self.order.clone());
        let basis: Vec<DPoly> = gb.iter().map(|q| ctx.embed(q)).collect();
        let r = ctx.nf(&ctx.embed(p), &basis, budget)?;
        ctx.extract(&r)
    }

    /// Ideal membership.
    pub fn contains_poly(&self, p: &Polynomial, budget: &mut Budget) -> Result<bool, EngineError> {
        let me = self.groebner(budget)?;
        Ok(me.normal_form(p, budget)?.is_zero())
    }

    /// Two ideals are equal iff each contains the other's generators.
    pub fn same_ideal(&self, other: &Ideal, budget: &mut Budget) -> Result<bool, EngineError> {
        Ok(ideal_contains(self, other, budget)? && ideal_contains(other, self, budget)?)
    }

    /// Krull dimension of V(I) inside the ambient 3(m+1)-space: the largest
    /// variable set S such that no leading monomial of the reduced basis is
    /// supported inside S. Variables absent from the ideal are free. Returns
    /// -1 for the empty variety.
    pub fn dimension(&self, budget: &mut Budget) -> Result<i64, EngineError> {
        for v in self.gens.iter().flat_map(|p| p.vars()) {
            if v.family == Family::Aux {
                return Err(EngineError::Precondition(
                    "dimension is defined over the jet variables only".into(),
                ));
            }
            if v.index > self.m {
                return Err(EngineError::IndexOutOfRange { index: v.index, m: self.m });
            }
        }
        let me = self.groebner(budget)?;
        let gb = me.gb.as_ref().unwrap();
        if gb.iter().any(|p| p.is_one()) {
            return Ok(-1);
        }
        let ctx = me.ctx([]);
        if ctx.vars.len() > 128 {
            return Err(EngineError::Limit("more than 128 active variables".into()));
        }
        let supports: Vec<u128> = gb
            .iter()
            .map(|p| {
                let dense = ctx.embed(p);
                dense[0]
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .fold(0u128, |acc, (i, _)| acc | (1u128 << i))
            })
            .collect();
        let hit = min_hitting_set(&supports);
        Ok(self.ambient_dim() as i64 - hit as i64)
    }

    /// Saturation (I : v^infinity), computed by adjoining a fresh auxiliary
    /// variable w with the relation w*v + 1 and eliminating w with a block
    /// order. The w-free part of the reduced block basis is the reduced
    /// grevlex basis of the saturation, which is returned cached.
    pub fn saturate(&self, v: VarId, budget: &mut Budget) -> Result<Ideal, EngineError> {
        if v.family == Family::Aux {
            return Err(EngineError::Precondition("cannot saturate at an auxiliary variable".into()));
        }
        let w = self.fresh_aux();
        let mut gens = self.gens.clone();
        gens.push(Polynomial::var(w).mul(&Polynomial::var(v)).add(&Polynomial::one()));
        let elim = Ideal {
            gens,
            order: MonomialOrder::Block { elim: vec![w] },
            m: self.m,
            gb: None,
        }
        .groebner(budget)?;
        let keep: Vec<Polynomial> = elim
            .gb
            .unwrap()
            .into_iter()
            .filter(|p| !p.contains_var(w))
            .collect();
        Ok(Ideal {
            gens: keep.clone(),
            order: MonomialOrder::Grevlex,
            m: self.m,
            gb: Some(keep),
        })
    }

    /// Radical membership h in sqrt(I), decided by Frobenius-power normal
    /// forms (cheap, characteristic 2) with the Rabinowitsch trick as the
    /// complete fallback: h in sqrt(I) iff 1 in I + <w*h + 1>.
    pub fn radical_member(&self, h: &Polynomial, budget: &mut Budget) -> Result<bool, EngineError> {
        let me = self.groebner(budget)?;
        let mut r = me.normal_form(h, budget)?;
        for _ in 0..6 {
            if r.is_zero() {
                return Ok(true);
            }
            if r.terms().any(|mo| mo.iter().any(|(_, e)| e > MAX_EXP / 2)) {
                break;
            }
            r = me.normal_form(&r.square(), budget)?;
        }
        if r.is_zero() {
            return Ok(true);
        }
        let w = self.fresh_aux();
        let mut gens = me.gb.clone().unwrap();
        gens.push(Polynomial::var(w).mul(h).add(&Polynomial::one()));
        let j = Ideal::new(gens, self.m).groebner(budget)?;
        Ok(j.gb.unwrap().iter().any(|p| p.is_one()))
    }

    fn fresh_aux(&self) -> VarId {
        let next = self
            .gens
            .iter()
            .flat_map(|p| p.vars())
            .filter(|v| v.family == Family::Aux)
            .map(|v| v.index + 1)
            .max()
            .unwrap_or(0);
        VarId::aux(next)
    }
}

/// True iff `i` contains `j` as ideals (every generator of `j` reduces to
/// zero against `i`).
pub fn ideal_contains(i: &Ideal, j: &Ideal, budget: &mut Budget) -> Result<bool, EngineError> {
    let gi = i.groebner(budget)?;
    for g in &j.gens {
        if !gi.normal_form(g, budget)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exact minimum hitting set over the leading-monomial supports; small
/// instances only (branch and bound with forced singletons and a disjoint
/// lower bound). An empty support means 1 is in the ideal; callers filter
/// that out beforehand.
fn min_hitting_set(supports: &[u128]) -> u32 {
    let mut sets: Vec<u128> = supports.to_vec();
    sets.sort();
    sets.dedup();
    // A superset of another support is hit whenever the subset is.
    let mut minimal: Vec<u128> = Vec::new();
    for s in &sets {
        if !sets.iter().any(|t| t != s && t & s == *t) {
            minimal.push(*s);
        }
    }
    let all_vars = minimal.iter().fold(0u128, |a, s| a | s).count_ones();
    let mut best = all_vars;
    bb(&minimal, 0, &mut best);
    best
}

fn bb(sets: &[u128], current: u32, best: &mut u32) {
    if sets.is_empty() {
        *best = (*best).min(current);
        return;
    }
    // Lower bound: pairwise-disjoint supports need one pick each.
    let mut taken = 0u128;
    let mut lb = 0;
    for s in sets {
        if s & taken == 0 {
            taken |= s;
            lb += 1;
        }
    }
    if current + lb >= *best {
        return;
    }
    // Forced choice for singleton supports.
    if let Some(s) = sets.iter().find(|s| s.count_ones() == 1) {
        let v = *s;
        let rest: Vec<u128> = sets.iter().filter(|t| *t & v == 0).copied().collect();
        bb(&rest, current + 1, best);
        return;
    }
    let pick = sets
        .iter()
        .min_by_key(|s| s.count_ones())
        .copied()
        .unwrap();
    let mut mask = pick;
    while mask != 0 {
        let v = mask & mask.wrapping_neg();
        mask ^= v;
        let rest: Vec<u128> = sets.iter().filter(|t| *t & v == 0).copied().collect();
        bb(&rest, current + 1, best);
    }
}

/// Build the coordinate ideal L_pqr = <x_0..x_{p-1}, y_0..y_{q-1},
/// z_0..z_{r-1}> with its (trivial) reduced basis cached.
pub fn build_l(spec: TruncationSpec, m: u32) -> Result<Ideal, EngineError> {
    if spec.p > m + 1 || spec.q > m + 1 || spec.r > m + 1 {
        return Err(EngineError::Precondition(format!(
            "truncation ({},{},{}) out of range for jet order {m}",
            spec.p, spec.q, spec.r
        )));
    }
    let gens: Vec<Polynomial> = (0..spec.p)
        .map(VarId::x)
        .chain((0..spec.q).map(VarId::y))
        .chain((0..spec.r).map(VarId::z))
        .map(Polynomial::var)
        .collect();
    let mut sorted = gens.clone();
    sorted.sort_by_key(|p| precedence_rank(p.leading().unwrap().as_single_var().unwrap()));
    sorted.reverse(); // ascending in the order = lowest precedence first
    Ok(Ideal {
        gens,
        order: MonomialOrder::Grevlex,
        m,
        gb: Some(sorted),
    })
}

/// Build J_m^i: the coordinate part (L_221, L_212, or L_211 plus y1+z1)
/// together with all jet coefficients of the surface.
pub fn build_j(surface: Surface, i: u8, m: u32) -> Result<Ideal, EngineError> {
    if m < 3 {
        return Err(EngineError::Precondition(format!("jet order {m} too small; need m >= 3")));
    }
    let (spec, linear) = match i {
        1 => (TruncationSpec::new(2, 2, 1), None),
        2 => (TruncationSpec::new(2, 1, 2), None),
        3 => (
            TruncationSpec::new(2, 1, 1),
            Some(Polynomial::var(VarId::y(1)).add(&Polynomial::var(VarId::z(1)))),
        ),
        other => {
            return Err(EngineError::Precondition(format!(
                "component index {other} out of range (1..=3)"
            )))
        }
    };
    let mut gens: Vec<Polynomial> = (0..spec.p)
        .map(VarId::x)
        .chain((0..spec.q).map(VarId::y))
        .chain((0..spec.r).map(VarId::z))
        .map(Polynomial::var)
        .collect();
    gens.extend(linear);
    gens.extend(jet_coeffs(surface, m).coeffs);
    Ok(Ideal::new(gens, m))
}

/// Certificate that, after inverting `unit`, the ideal is generated by the
/// coordinate variables `coords` together with a triangular chain: the k-th
/// solved entry is a generator unit^e * v_k + h_k whose tail h_k involves no
/// later-solved variable. Such an ideal is prime in the localization, of
/// height |coords| + |solved|.
#[derive(Debug, Clone, Serialize)]
pub struct TriangularCertificate {
    pub unit: VarId,
    pub coords: Vec<VarId>,
    pub solved: Vec<(VarId, Polynomial)>,
}

impl TriangularCertificate {
    pub fn height(&self) -> u32 {
        (self.coords.len() + self.solved.len()) as u32
    }

    pub fn solved_vars(&self) -> Vec<VarId> {
        self.solved.iter().map(|(v, _)| *v).collect()
    }
}

/// Failed certification: a plain data outcome, not an engine error.
#[derive(Debug, Clone, Serialize)]
pub struct CertFailure {
    pub reason: String,
    pub remaining: Vec<Polynomial>,
}

/// Shared coordinate pass: extract single-variable generators, setting them
/// to zero in the rest, until a fixpoint. Fails if `unit` itself is forced.
fn coordinate_pass(
    pool: &mut Vec<Polynomial>,
    coords: &mut BTreeSet<VarId>,
    unit: VarId,
) -> Result<bool, CertFailure> {
    let mut changed = false;
    loop {
        let pos = pool.iter().position(|p| {
            p.num_terms() == 1 && p.terms().next().unwrap().as_single_var().is_some()
        });
        let Some(k) = pos else { return Ok(changed) };
        let v = pool[k].terms().next().unwrap().as_single_var().unwrap();
        if v == unit {
            return Err(CertFailure {
                reason: format!("inverted variable {v} is forced to zero"),
                remaining: pool.clone(),
            });
        }
        pool.remove(k);
        coords.insert(v);
        *pool = pool
            .iter()
            .map(|p| p.drop_monomials_containing(|u| u == v))
            .filter(|p| !p.is_zero())
            .collect();
        changed = true;
    }
}

/// Find a peelable variable: v != unit occurring in exactly one remaining
/// generator, inside exactly one monomial of the pure shape v * unit^e.
/// Among eligible variables the highest-precedence one wins.
fn find_peel_candidate(
    pool: &[Polynomial],
    unit: VarId,
    excluded: &BTreeSet<VarId>,
) -> Option<(VarId, usize)> {
    let mut occurrences: BTreeMap<VarId, Vec<usize>> = BTreeMap::new();
    for (gi, p) in pool.iter().enumerate() {
        for v in p.vars() {
            occurrences.entry(v).or_default().push(gi);
        }
    }
    let mut best: Option<(VarId, usize)> = None;
    for (v, where_) in &occurrences {
        if *v == unit || excluded.contains(v) || where_.len() != 1 {
            continue;
        }
        let gi = where_[0];
        let mons: Vec<_> = pool[gi].terms().filter(|mo| mo.contains(*v)).collect();
        if mons.len() != 1 {
            continue;
        }
        let mo = mons[0];
        if mo.exponent(*v) != 1 || !mo.iter().all(|(u, _)| u == *v || u == unit) {
            continue;
        }
        let better = match best {
            None => true,
            Some((b, _)) => precedence_rank(*v) < precedence_rank(b),
        };
        if better {
            best = Some((*v, gi));
        }
    }
    best
}

/// Order solved entries so every tail only references earlier-solved
/// variables (and free ones). Deterministic: among ready entries the
/// highest-precedence variable is placed first.
fn dependency_order(
    mut entries: Vec<(VarId, Polynomial)>,
) -> Result<Vec<(VarId, Polynomial)>, CertFailure> {
    let mut placed: Vec<(VarId, Polynomial)> = Vec::new();
    while !entries.is_empty() {
        let unplaced: BTreeSet<VarId> = entries.iter().map(|(v, _)| *v).collect();
        let mut best: Option<usize> = None;
        for (k, (v, gen)) in entries.iter().enumerate() {
            let tail = gen.drop_monomials_containing(|u| u == *v);
            if tail.vars().iter().any(|u| unplaced.contains(u)) {
                continue;
            }
            let better = match best {
                None => true,
                Some(b) => precedence_rank(*v) < precedence_rank(entries[b].0),
            };
            if better {
                best = Some(k);
            }
        }
        let Some(k) = best else {
            return Err(CertFailure {
                reason: "solved chain has cyclic dependencies".into(),
                remaining: entries.iter().map(|(_, g)| g.clone()).collect(),
            });
        };
        placed.push(entries.remove(k));
    }
    Ok(placed)
}

/// Audit the dependency invariant of a solved chain: the tail of the k-th
/// entry must not involve the k-th or any later solved variable.
fn audit_chain(solved: &[(VarId, Polynomial)]) -> Result<(), CertFailure> {
    for k in 0..solved.len() {
        let (v, gen) = &solved[k];
        let tail = gen.drop_monomials_containing(|u| u == *v);
        for (later, _) in &solved[k..] {
            if tail.contains_var(*later) {
                return Err(CertFailure {
                    reason: format!("solved chain is not triangular at {v}"),
                    remaining: solved.iter().map(|(_, g)| g.clone()).collect(),
                });
            }
        }
    }
    Ok(())
}

/// Try to certify that the localization of the ideal at `inverted` is prime
/// by exhibiting coordinates plus a triangular solved chain. Failure is a
/// data outcome carrying the generators that could not be processed.
pub fn triangular_certify(
    ideal: &Ideal,
    inverted: VarId,
) -> Result<TriangularCertificate, CertFailure> {
    let mut pool: Vec<Polynomial> = ideal.gens.iter().filter(|p| !p.is_zero()).cloned().collect();
    pool.dedup();
    let mut coords: BTreeSet<VarId> = BTreeSet::new();
    let mut entries: Vec<(VarId, Polynomial)> = Vec::new();
    let no_excluded = BTreeSet::new();
    loop {
        coordinate_pass(&mut pool, &mut coords, inverted)?;
        if pool.is_empty() {
            break;
        }
        if let Some((v, gi)) = find_peel_candidate(&pool, inverted, &no_excluded) {
            entries.push((v, pool.remove(gi)));
            continue;
        }
        // Substitution pass breaks peel deadlocks: a generator v + h with v
        // occurring once as a bare variable lets us eliminate v from all
        // remaining generators (a change of coordinates over the chart);
        // the generator itself joins the chain.
        let mut subst: Option<(usize, VarId)> = None;
        'scan: for (k, p) in pool.iter().enumerate() {
            let mut cands: Vec<VarId> = p
                .terms()
                .filter_map(|mo| mo.as_single_var())
                .filter(|&v| v != inverted)
                .filter(|&v| p.terms().filter(|mo| mo.contains(v)).count() == 1)
                .collect();
            if !cands.is_empty() {
                cands.sort_by_key(|&v| precedence_rank(v));
                subst = Some((k, cands[0]));
                break 'scan;
            }
        }
        let Some((k, v)) = subst else {
            return Err(CertFailure {
                reason: "no peelable variable in the remaining generators".into(),
                remaining: pool,
            });
        };
        let gen = pool.remove(k);
        let h = gen.add(&Polynomial::var(v));
        pool = pool
            .iter()
            .map(|p| p.substitute(|u| if u == v { Some(h.clone()) } else { None }))
            .filter(|p| !p.is_zero())
            .collect();
        entries.push((v, gen));
    }
    let solved = dependency_order(entries)?;
    audit_chain(&solved)?;
    Ok(TriangularCertificate { unit: inverted, coords: coords.into_iter().collect(), solved })
}

/// Certificate for a chart of the special component: coordinates, one seed
/// hypersurface of the fixed shape x_a^2 + y_b^2 z_b + y_b z_b^2 (whose
/// quotient is a domain; irreducibility of the shape is validated by the
/// exhaustive scan in the oracle module), and a triangular chain over it
/// with `unit` inverted. Height is |coords| + 1 + |solved|.
#[derive(Debug, Clone, Serialize)]
pub struct ChartCertificate {
    pub unit: VarId,
    pub coords: Vec<VarId>,
    pub seed: Polynomial,
    pub seed_vars: (VarId, VarId, VarId),
    pub solved: Vec<(VarId, Polynomial)>,
}

impl ChartCertificate {
    pub fn height(&self) -> u32 {
        (self.coords.len() + 1 + self.solved.len()) as u32
    }
}

/// Recognize p == x_a^2 + y_b^2 z_b + y_b z_b^2 and return (x_a, y_b, z_b).
pub fn match_seed_form(p: &Polynomial) -> Option<(VarId, VarId, VarId)> {
    if p.num_terms() != 3 {
        return None;
    }
    let mut xa = None;
    let mut yb = None;
    for mo in p.terms() {
        let pairs: Vec<(VarId, u16)> = mo.iter().collect();
        match pairs.as_slice() {
            [(v, 2)] if v.family == Family::X => xa = Some(*v),
            [(v, ev), (w, ew)]
                if v.family == Family::Y
                    && w.family == Family::Z
                    && v.index == w.index
                    && ((*ev, *ew) == (2, 1) || (*ev, *ew) == (1, 2)) =>
            {
                yb = Some((*v, *w))
            }
            _ => return None,
        }
    }
    match (xa, yb) {
        (Some(x), Some((y, z))) => {
            // Both mixed monomials must be present with the same (y_b, z_b).
            let y2z = Polynomial::parse(&format!("{y}^2*{z}")).unwrap();
            let yz2 = Polynomial::parse(&format!("{y}*{z}^2")).unwrap();
            let x2 = Polynomial::parse(&format!("{x}^2")).unwrap();
            if *p == x2.add(&y2z).add(&yz2) {
                Some((x, y, z))
            } else {
                None
            }
        }
        _ => None,
    }
}

/// Certify a chart of an ideal of the form coordinates + seed + chain: the
/// variety is irreducible on the chart D(unit), where `unit` is one of the
/// two seed variables y_b, z_b.
pub fn chart_domain_certify(ideal: &Ideal, unit: VarId) -> Result<ChartCertificate, CertFailure> {
    let mut pool: Vec<Polynomial> = ideal.gens.iter().filter(|p| !p.is_zero()).cloned().collect();
    pool.dedup();
    let mut coords: BTreeSet<VarId> = BTreeSet::new();
    coordinate_pass(&mut pool, &mut coords, unit)?;
    let seed_pos = pool.iter().position(|p| match_seed_form(p).is_some());
    let Some(k) = seed_pos else {
        return Err(CertFailure { reason: "no seed hypersurface of the expected shape".into(), remaining: pool });
    };
    let seed = pool.remove(k);
    let (xa, yb, zb) = match_seed_form(&seed).unwrap();
    if unit != yb && unit != zb {
        return Err(CertFailure {
            reason: format!("chart variable {unit} is not one of the seed variables"),
            remaining: pool,
        });
    }
    let excluded: BTreeSet<VarId> = [xa, yb, zb].into_iter().collect();
    let mut entries: Vec<(VarId, Polynomial)> = Vec::new();
    while !pool.is_empty() {
        let Some((v, gi)) = find_peel_candidate(&pool, unit, &excluded) else {
            return Err(CertFailure {
                reason: "no peelable variable in the remaining generators".into(),
                remaining: pool,
            });
        };
        entries.push((v, pool.remove(gi)));
    }
    let solved = dependency_order(entries)?;
    audit_chain(&solved)?;
    Ok(ChartCertificate {
        unit,
        coords: coords.into_iter().collect(),
        seed,
        seed_vars: (xa, yb, zb),
        solved,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Polynomial {
        Polynomial::parse(s).unwrap()
    }

    fn gb_strings(i: &Ideal) -> Vec<String> {
        i.gb.as_ref().unwrap().iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn build_l_examples() {
        let l = build_l(TruncationSpec::new(3, 2, 2), 5).unwrap();
        assert_eq!(l.gens.len(), 7);
        let mut b = Budget::standard();
        assert_eq!(l.dimension(&mut b).unwrap(), 11);

        let point = build_l(TruncationSpec::new(1, 1, 1), 0).unwrap();
        let names: BTreeSet<String> = point.gens.iter().map(|p| p.to_string()).collect();
        assert_eq!(names, ["x0", "y0", "z0"].iter().map(|s| s.to_string()).collect());

        assert!(build_l(TruncationSpec::new(4, 1, 1), 2).is_err());
    }

    #[test]
    fn build_j_examples() {
        let j1 = build_j(Surface::D40, 1, 5).unwrap();
        // 5 coordinate generators plus the 6 jet coefficients.
        assert_eq!(j1.gens.len(), 5 + 6);
        for v in ["x0", "x1", "y0", "y1", "z0"] {
            assert!(j1.gens.iter().any(|g| g.to_string() == v));
        }

        let j3 = build_j(Surface::D41, 3, 5).unwrap();
        assert!(j3.gens.iter().any(|g| *g == p("y1 + z1")));

        // The y/z swap carries J^1 to J^2 generator by generator.
        let j2 = build_j(Surface::D40, 2, 5).unwrap();
        let swapped: BTreeSet<String> = j1
            .gens
            .iter()
            .map(|g| {
                g.rename_vars(|v| match v.family {
                    Family::Y => VarId::z(v.index),
                    Family::Z => VarId::y(v.index),
                    _ => v,
                })
                .to_string()
            })
            .collect();
        let j2set: BTreeSet<String> = j2.gens.iter().map(|g| g.to_string()).collect();
        assert_eq!(swapped, j2set);

        assert!(build_j(Surface::D40, 1, 2).is_err());
        assert!(build_j(Surface::D40, 4, 5).is_err());
    }

    #[test]
    fn groebner_keeps_an_existing_basis() {
        let i = Ideal::new([p("x1^2"), p("x1*y1")], 3);
        let mut b = Budget::standard();
        let g = i.groebner(&mut b).unwrap();
        // Ascending in the engine order, where y1 outranks x1.
        assert_eq!(gb_strings(&g), vec!["x1^2", "x1*y1"]);
        // Idempotence: recomputing from the cached value changes nothing.
        let g2 = g.groebner(&mut b).unwrap();
        assert_eq!(g.gb, g2.gb);
        let fresh = Ideal::new(g.gb.clone().unwrap(), 3).groebner(&mut b).unwrap();
        assert_eq!(g.gb, fresh.gb);
    }

    #[test]
    fn groebner_drops_redundant_multiples() {
        // y1*z1*(y1 + z1) is a multiple of y1 + z1, so the linear form alone
        // is the reduced basis.
        let cubic = p("y1*z1").mul(&p("y1 + z1"));
        let i = Ideal::new([cubic, p("y1 + z1")], 3);
        let mut b = Budget::standard();
        let g = i.groebner(&mut b).unwrap();
        assert_eq!(gb_strings(&g), vec!["y1 + z1"]);
    }

    #[test]
    fn groebner_j51_reduces_its_jets() {
        let mut b = Budget::standard();
        let j = build_j(Surface::D40, 1, 5).unwrap().groebner(&mut b).unwrap();
        let f4 = jet_coeffs(Surface::D40, 5).coeffs[4].clone();
        assert!(j.normal_form(&f4, &mut b).unwrap().is_zero());
        assert!(j.normal_form(&p("y2*z1^2 + x2^2"), &mut b).unwrap().is_zero());
        assert!(!j.normal_form(&p("x2"), &mut b).unwrap().is_zero());
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let i = build_j(Surface::D40, 1, 5).unwrap();
        let mut tiny = Budget::new(3);
        match i.groebner(&mut tiny) {
            Err(EngineError::BudgetExceeded { steps: 3 }) => {}
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn dimension_examples() {
        let mut b = Budget::standard();
        assert_eq!(Ideal::new([p("1")], 5).dimension(&mut b).unwrap(), -1);
        assert_eq!(build_l(TruncationSpec::new(3, 2, 2), 5).unwrap().dimension(&mut b).unwrap(), 11);
        // Anti-monotone under inclusion.
        let small = build_l(TruncationSpec::new(1, 1, 1), 5).unwrap();
        let large = build_l(TruncationSpec::new(2, 1, 1), 5).unwrap();
        assert!(small.dimension(&mut b).unwrap() >= large.dimension(&mut b).unwrap());
    }

    #[test]
    fn saturate_examples() {
        let mut b = Budget::standard();
        let s = Ideal::new([p("y1*z1")], 3).saturate(VarId::y(1), &mut b).unwrap();
        assert_eq!(gb_strings(&s), vec!["z1"]);

        let already = Ideal::new([p("y2*z1^2 + x2^2")], 3);
        let s2 = already.saturate(VarId::z(1), &mut b).unwrap();
        assert!(already.same_ideal(&s2, &mut b).unwrap());

        // Planted instance: y1^2*x1 and y1*z1 saturate at y1 to <x1, z1>.
        let s3 = Ideal::new([p("y1^2*x1"), p("y1*z1")], 3)
            .saturate(VarId::y(1), &mut b)
            .unwrap();
        assert_eq!(gb_strings(&s3), vec!["x1", "z1"]);
    }

    #[test]
    fn saturated_j1_has_dimension_eleven_and_contains_y1() {
        let mut b = Budget::new(10_000_000);
        let i1 = build_j(Surface::D40, 1, 5)
            .unwrap()
            .saturate(VarId::z(1), &mut b)
            .unwrap();
        assert!(i1.normal_form(&p("y1"), &mut b).unwrap().is_zero());
        assert_eq!(i1.dimension(&mut b).unwrap(), 11);
    }

    #[test]
    fn radical_membership() {
        let mut b = Budget::standard();
        assert!(Ideal::new([p("x1^2")], 3).radical_member(&p("x1"), &mut b).unwrap());
        assert!(!Ideal::new([p("x1")], 3).radical_member(&p("y1"), &mut b).unwrap());
        // Rabinowitsch path: x1 + y1 is in the radical of <x1^2 + y1^2>
        // (it is its square root), but no small Frobenius power reduces.
        assert!(Ideal::new([p("x1^2 + y1^2")], 3)
            .radical_member(&p("x1 + y1"), &mut b)
            .unwrap());
        assert!(!Ideal::new([p("x1^2 + y1^2")], 3)
            .radical_member(&p("x1"), &mut b)
            .unwrap());
    }

    #[test]
    fn radical_membership_across_component_sums() {
        let mut b = Budget::new(20_000_000);
        let j1 = build_j(Surface::D40, 1, 5).unwrap();
        let j2 = build_j(Surface::D40, 2, 5).unwrap();
        assert!(j1.sum(&j2).radical_member(&p("x2"), &mut b).unwrap());
    }

    #[test]
    fn containment_examples() {
        let mut b = Budget::standard();
        let l211 = build_l(TruncationSpec::new(2, 1, 1), 5).unwrap();
        let l111 = build_l(TruncationSpec::new(1, 1, 1), 5).unwrap();
        assert!(ideal_contains(&l211, &l111, &mut b).unwrap());
        assert!(!ideal_contains(&l111, &l211, &mut b).unwrap());
    }

    #[test]
    fn triangular_certificate_for_j1() {
        let j = build_j(Surface::D40, 1, 5).unwrap();
        let cert = triangular_certify(&j, VarId::z(1)).unwrap();
        assert_eq!(cert.solved_vars(), vec![VarId::y(2), VarId::y(3)]);
        let coords: BTreeSet<&str> = ["x0", "x1", "y0", "y1", "z0"].into_iter().collect();
        let got: BTreeSet<String> = cert.coords.iter().map(|v| v.to_string()).collect();
        assert_eq!(got, coords.into_iter().map(String::from).collect());
        assert_eq!(cert.height(), 7);
    }

    #[test]
    fn triangular_certificate_single_generator() {
        let i = Ideal::new([p("z1*y2 + x2")], 3);
        let cert = triangular_certify(&i, VarId::z(1)).unwrap();
        assert_eq!(cert.solved_vars(), vec![VarId::y(2)]);
        assert_eq!(cert.height(), 1);
    }

    #[test]
    fn triangular_certificate_with_linear_substitution() {
        // J_6^3 deadlocks the peel on {y1 + z1, y1^2*z1 + y1*z1^2}: the
        // degree-3 jet is a multiple of y1 + z1 and only vanishes once the
        // substitution z1 -> y1 fires. The chain then solves z_(l-2) from
        // each degree-l jet.
        let j = build_j(Surface::D41, 3, 6).unwrap();
        let cert = triangular_certify(&j, VarId::y(1)).unwrap();
        assert_eq!(cert.height(), 8);
        let solved: Vec<String> = cert.solved_vars().iter().map(|v| v.to_string()).collect();
        assert_eq!(solved, ["z1", "z2", "z3", "z4"]);
        assert_eq!(cert.coords.len(), 4);
    }

    #[test]
    fn triangular_failure_is_data() {
        let i = Ideal::new([p("x1*y1")], 3);
        let err = triangular_certify(&i, VarId::z(1)).unwrap_err();
        assert_eq!(err.remaining, vec![p("x1*y1")]);

        // The inverted variable must not be forced to zero.
        let forced = Ideal::new([p("z1"), p("z1*y2 + x2")], 3);
        assert!(triangular_certify(&forced, VarId::z(1)).is_err());
    }

    #[test]
    fn triangular_heights_match_groebner_dimensions() {
        let mut b = Budget::new(20_000_000);
        for (i, unit) in [(1u8, VarId::z(1)), (2, VarId::y(1)), (3, VarId::y(1))] {
            for m in 5..=6 {
                let j = build_j(Surface::D40, i, m).unwrap();
                let cert = triangular_certify(&j, unit).unwrap();
                assert_eq!(cert.height(), m + 2, "J_{m}^{i}");
                let sat = j.saturate(unit, &mut b).unwrap();
                assert_eq!(
                    sat.dimension(&mut b).unwrap(),
                    (3 * (m as i64 + 1)) - cert.height() as i64,
                    "saturated J_{m}^{i}"
                );
            }
        }
    }

    #[test]
    fn seed_form_recognition() {
        assert_eq!(
            match_seed_form(&p("x3^2 + y2^2*z2 + y2*z2^2")),
            Some((VarId::x(3), VarId::y(2), VarId::z(2)))
        );
        assert_eq!(match_seed_form(&p("x3^2 + y2^2*z2")), None);
        assert_eq!(match_seed_form(&p("x3^2 + y2^2*z2 + y3*z2^2")), None);
        assert_eq!(match_seed_form(&p("x3^2 + y2^2*z3 + y2*z3^2")), None);
    }

    #[test]
    fn chart_certificate_for_the_special_component() {
        use crate::jets::closed_form_g;
        // Coordinates L_322 plus the closed forms of degrees 6..=m.
        let m = 7;
        let spec = TruncationSpec::new(3, 2, 2);
        let mut gens: Vec<Polynomial> = (0..3)
            .map(VarId::x)
            .chain((0..2).map(VarId::y))
            .chain((0..2).map(VarId::z))
            .map(Polynomial::var)
            .collect();
        for l in 6..=m {
            gens.push(closed_form_g(spec, l, true));
        }
        let i = Ideal::new(gens, m);
        let cert = chart_domain_certify(&i, VarId::y(2)).unwrap();
        assert_eq!(cert.height(), m + 2);
        assert_eq!(cert.seed_vars, (VarId::x(3), VarId::y(2), VarId::z(2)));
        assert_eq!(cert.solved.len(), 1);
        assert_eq!(cert.solved[0].0, VarId::z(3));

        let mirror = chart_domain_certify(&i, VarId::z(2)).unwrap();
        assert_eq!(mirror.height(), m + 2);
        assert_eq!(mirror.solved[0].0, VarId::y(3));
    }
}
