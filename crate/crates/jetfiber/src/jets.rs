//! Jet expansion of the two characteristic-2 surfaces and the closed-form
//! truncation coefficients G_pqr^(l).
//!
//! Substituting x = Σ x_i t^i (same for y, z) into a base equation and
//! expanding modulo t^(m+1) yields one coefficient polynomial per power of
//! t. In characteristic 2 the square of a series has no cross terms, so the
//! coefficients of the two surfaces here are sums over very explicit index
//! sets; `closed_form_g` builds those sums directly, independently of the
//! series expansion, and `verify_g_lemma` cross-checks the case analysis.

use serde::Serialize;

use crate::error::EngineError;
use crate::poly::{Family, Monomial, Polynomial, VarId};

/// The two surface singularities under study: x^2 + y^2 z + y z^2, without
/// (D40) or with (D41) the additional x y z term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Surface {
    #[serde(rename = "d40")]
    D40,
    #[serde(rename = "d41")]
    D41,
}

impl Surface {
    /// Base equation written in the order-0 jet variables.
    pub fn base_equation(&self) -> Polynomial {
        let f = Polynomial::parse("x0^2 + y0^2*z0 + y0*z0^2").unwrap();
        match self {
            Surface::D40 => f,
            Surface::D41 => f.add(&Polynomial::parse("x0*y0*z0").unwrap()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Surface::D40 => "d40",
            Surface::D41 => "d41",
        }
    }
}

impl std::str::FromStr for Surface {
    type Err = EngineError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "d40" | "D40" => Ok(Surface::D40),
            "d41" | "D41" => Ok(Surface::D41),
            other => Err(EngineError::Precondition(format!(
                "unknown surface {other:?}; expected d40 or d41"
            ))),
        }
    }
}

/// Index bounds (p, q, r) of the coordinate ideal
/// L_pqr = <x_0..x_{p-1}, y_0..y_{q-1}, z_0..z_{r-1}>.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TruncationSpec {
    pub p: u32,
    pub q: u32,
    pub r: u32,
}

impl TruncationSpec {
    pub fn new(p: u32, q: u32, r: u32) -> Self {
        TruncationSpec { p, q, r }
    }

    /// True when the monomial contains a variable killed by L_pqr.
    pub fn kills(&self, v: VarId) -> bool {
        match v.family {
            Family::X => v.index < self.p,
            Family::Y => v.index < self.q,
            Family::Z => v.index < self.r,
            Family::Aux => false,
        }
    }
}

/// The jet coefficients f^(0..m) (or g^(0..m)) of one surface.
#[derive(Debug, Clone)]
pub struct JetSystem {
    pub surface: Surface,
    pub m: u32,
    /// `coeffs[l]` is the coefficient of t^l; it only involves variables of
    /// index <= l.
    pub coeffs: Vec<Polynomial>,
}

/// Truncated power series with polynomial coefficients, the workhorse of
/// the expansion. Length is always m+1.
#[derive(Clone)]
struct Series(Vec<Polynomial>);

impl Series {
    fn variable(family: Family, m: u32) -> Series {
        Series(
            (0..=m)
                .map(|i| Polynomial::var(VarId { family, index: i }))
                .collect(),
        )
    }

    fn mul(&self, other: &Series) -> Series {
        let n = self.0.len();
        let mut out = vec![Polynomial::zero(); n];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                if i + j >= n {
                    break;
                }
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Series(out)
    }

    /// Characteristic-2 square: (Σ a_i t^i)^2 = Σ a_i^2 t^(2i).
    fn square(&self) -> Series {
        let n = self.0.len();
        let mut out = vec![Polynomial::zero(); n];
        for (i, a) in self.0.iter().enumerate() {
            if 2 * i < n {
                out[2 * i] = a.square();
            }
        }
        Series(out)
    }

    fn pow(&self, e: u16) -> Series {
        let n = self.0.len();
        let mut acc = Series({
            let mut v = vec![Polynomial::zero(); n];
            v[0] = Polynomial::one();
            v
        });
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    fn add(&self, other: &Series) -> Series {
        Series(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.add(b))
                .collect(),
        )
    }
}

/// Expand an arbitrary trivariate base polynomial (written in the order-0
/// variables x0, y0, z0) along the generic jet, modulo t^(m+1).
pub fn expand_base(base: &Polynomial, m: u32) -> Vec<Polynomial> {
    let n = (m + 1) as usize;
    let sx = Series::variable(Family::X, m);
    let sy = Series::variable(Family::Y, m);
    let sz = Series::variable(Family::Z, m);
    let mut acc = Series(vec![Polynomial::zero(); n]);
    for mono in base.terms() {
        let mut term = Series({
            let mut v = vec![Polynomial::zero(); n];
            v[0] = Polynomial::one();
            v
        });
        for (v, e) in mono.iter() {
            let s = match v.family {
                Family::X => &sx,
                Family::Y => &sy,
                Family::Z => &sz,
                Family::Aux => panic!("base equation must use x0/y0/z0 only"),
            };
            term = term.mul(&s.pow(e));
        }
        acc = acc.add(&term);
    }
    acc.0
}

/// The jet coefficients of a surface up to order m.
pub fn jet_coeffs(surface: Surface, m: u32) -> JetSystem {
    JetSystem {
        surface,
        m,
        coeffs: expand_base(&surface.base_equation(), m),
    }
}

/// Reduce modulo the coordinate ideal L_pqr: every monomial containing a
/// killed variable is dropped (the variable is set to zero).
pub fn reduce_mod_l(p: &Polynomial, spec: TruncationSpec) -> Polynomial {
    p.drop_monomials_containing(|v| spec.kills(v))
}

/// Closed form of the degree-l coefficient of the D41 equation reduced mod
/// L_pqr, built combinatorially (no series expansion):
///
///   Σ_{u>=p, 2u=l} x_u^2  +  Σ_{v>=q, w>=r, 2v+w=l} y_v^2 z_w
///   +  Σ_{v>=q, w>=r, v+2w=l} y_v z_w^2
///   +  Σ_{u>=p, v>=q, w>=r, u+v+w=l} x_u y_v z_w   (D41 only).
///
/// `include_triple` toggles the last sum; without it this is the D40 form.
pub fn closed_form_g(spec: TruncationSpec, l: u32, include_triple: bool) -> Polynomial {
    let TruncationSpec { p, q, r } = spec;
    let mut terms: Vec<Monomial> = Vec::new();
    if l % 2 == 0 && l / 2 >= p {
        terms.push(Monomial::from_pairs([(VarId::x(l / 2), 2)]));
    }
    // y_v^2 z_w with 2v + w = l.
    let mut v = q;
    while 2 * v + r <= l {
        let w = l - 2 * v;
        terms.push(Monomial::from_pairs([(VarId::y(v), 2), (VarId::z(w), 1)]));
        v += 1;
    }
    // y_v z_w^2 with v + 2w = l.
    let mut w = r;
    while q + 2 * w <= l {
        let v = l - 2 * w;
        terms.push(Monomial::from_pairs([(VarId::y(v), 1), (VarId::z(w), 2)]));
        w += 1;
    }
    if include_triple {
        for u in p..=l.saturating_sub(q + r) {
            for v in q..=(l - u).saturating_sub(r) {
                let w = l - u - v;
                terms.push(Monomial::from_pairs([
                    (VarId::x(u), 1),
                    (VarId::y(v), 1),
                    (VarId::z(w), 1),
                ]));
            }
        }
    }
    Polynomial::from_terms(terms)
}

/// The terms of `p` containing the highest-index variable of `family`,
/// together with that index. `None` when the family is absent.
pub fn top_term(p: &Polynomial, family: Family) -> Option<(u32, Polynomial)> {
    let idx = p.max_index(family)?;
    let v = VarId { family, index: idx };
    let top = Polynomial::from_terms(p.terms().filter(|m| m.contains(v)).cloned());
    Some((idx, top))
}

/// What a case prediction constrains: the whole reduced coefficient, or just
/// its top-index y- or z-part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CaseScope {
    #[serde(rename = "full")]
    Full,
    #[serde(rename = "top_y")]
    TopY,
    #[serde(rename = "top_z")]
    TopZ,
}

#[derive(Debug, Clone, Serialize)]
pub struct CaseCheck {
    pub case_id: u8,
    pub scope: CaseScope,
    pub predicted: Polynomial,
    pub actual: Polynomial,
    pub matched: bool,
}

/// Report of the case analysis of G_pqr^(l) at one (p, q, r, l).
#[derive(Debug, Clone, Serialize)]
pub struct CaseReport {
    pub p: u32,
    pub q: u32,
    pub r: u32,
    pub l: u32,
    /// The full closed form (D41 convention, triple-product sum included).
    pub actual: Polynomial,
    pub checks: Vec<CaseCheck>,
    pub all_matched: bool,
}

/// Evaluate every applicable case of the reduction lemma for G_pqr^(l):
///
/// 1. l < 2p, l < 2q+r, l < q+2r            => G = 0
/// 2. l = 2p, l < 2q+r, l < q+2r            => G = x_p^2
/// 3. p > q = r, l = 2p = 3q                => G = x_p^2 + y_q^2 z_q + y_q z_q^2
/// 4. p >= q > r, l >= 2p = q+2r            => top-y part is y_{l-2r} z_r^2
/// 5. p >= r > q, l >= 2p = 2q+r            => top-z part is y_q^2 z_{l-2q}
/// 6. p > q = r, l > 3q                     => top-y part is y_{l-2q} z_q^2
/// 7. p > q = r, l > 3q                     => top-z part is y_q^2 z_{l-2q}
///
/// Predictions are compared against the independently built closed form.
pub fn verify_g_lemma(spec: TruncationSpec, l: u32) -> CaseReport {
    let TruncationSpec { p, q, r } = spec;
    let g = closed_form_g(spec, l, true);
    let mut checks = Vec::new();

    let full_check = |case_id: u8, predicted: Polynomial, checks: &mut Vec<CaseCheck>| {
        let matched = predicted == g;
        checks.push(CaseCheck { case_id, scope: CaseScope::Full, predicted, actual: g.clone(), matched });
    };
    let top_check = |case_id: u8, scope: CaseScope, predicted: Polynomial, g: &Polynomial| {
        let family = if scope == CaseScope::TopY { Family::Y } else { Family::Z };
        let actual = top_term(g, family).map_or_else(Polynomial::zero, |(_, t)| t);
        let matched = predicted == actual;
        CaseCheck { case_id, scope, predicted, actual, matched }
    };

    if l < 2 * p && l < 2 * q + r && l < q + 2 * r {
        full_check(1, Polynomial::zero(), &mut checks);
    }
    if l == 2 * p && l < 2 * q + r && l < q + 2 * r {
        full_check(2, Polynomial::from_monomial(Monomial::from_pairs([(VarId::x(p), 2)])), &mut checks);
    }
    if p > q && q == r && l == 2 * p && 2 * p == 3 * q {
        let predicted = Polynomial::from_terms([
            Monomial::from_pairs([(VarId::x(p), 2)]),
            Monomial::from_pairs([(VarId::y(q), 2), (VarId::z(q), 1)]),
            Monomial::from_pairs([(VarId::y(q), 1), (VarId::z(q), 2)]),
        ]);
        full_check(3, predicted, &mut checks);
    }
    if p >= q && q > r && l >= 2 * p && 2 * p == q + 2 * r {
        let predicted = Polynomial::from_monomial(Monomial::from_pairs([
            (VarId::y(l - 2 * r), 1),
            (VarId::z(r), 2),
        ]));
        checks.push(top_check(4, CaseScope::TopY, predicted, &g));
    }
    if p >= r && r > q && l >= 2 * p && 2 * p == 2 * q + r {
        let predicted = Polynomial::from_monomial(Monomial::from_pairs([
            (VarId::y(q), 2),
            (VarId::z(l - 2 * q), 1),
        ]));
        checks.push(top_check(5, CaseScope::TopZ, predicted, &g));
    }
    if p > q && q == r && l > 3 * q {
        let pred_y = Polynomial::from_monomial(Monomial::from_pairs([
            (VarId::y(l - 2 * q), 1),
            (VarId::z(q), 2),
        ]));
        checks.push(top_check(6, CaseScope::TopY, pred_y, &g));
        let pred_z = Polynomial::from_monomial(Monomial::from_pairs([
            (VarId::y(q), 2),
            (VarId::z(l - 2 * q), 1),
        ]));
        checks.push(top_check(7, CaseScope::TopZ, pred_z, &g));
    }

    let all_matched = checks.iter().all(|c| c.matched);
    CaseReport { p, q, r, l, actual: g, checks, all_matched }
}
