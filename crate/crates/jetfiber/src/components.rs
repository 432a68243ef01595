//! The four irreducible components of the singular fiber: construction,
//! dimension certificates, pairwise distinctness, the symmetry action, the
//! stable shift isomorphism, and jet membership.
//!
//! For m >= 5 the singular fiber S_m^0 of either surface decomposes into
//! four components Z0..Z3 of dimension 2m+1. Z1, Z2, Z3 are the closures of
//! the charts z1 != 0, y1 != 0, y1 != 0 inside V(J_m^1), V(J_m^2), V(J_m^3);
//! their defining ideals are the saturations of the J ideals at the chart
//! variable. Z0 is the locus y1 = z1 = 0, defined by L_322 plus the jet
//! equations reduced modulo L_322.

use std::fmt;

use serde::Serialize;

use crate::error::EngineError;
use crate::field::{FieldElem, GfField};
use crate::ideal::{
    build_j, build_l, chart_domain_certify, triangular_certify, Budget, Ideal,
};
use crate::jets::{jet_coeffs, reduce_mod_l, Surface, TruncationSpec};
use crate::poly::{Family, Polynomial, VarId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ComponentLabel {
    Z0,
    Z1,
    Z2,
    Z3,
}

impl ComponentLabel {
    pub const ALL: [ComponentLabel; 4] =
        [ComponentLabel::Z0, ComponentLabel::Z1, ComponentLabel::Z2, ComponentLabel::Z3];

    pub fn index(self) -> usize {
        match self {
            ComponentLabel::Z0 => 0,
            ComponentLabel::Z1 => 1,
            ComponentLabel::Z2 => 2,
            ComponentLabel::Z3 => 3,
        }
    }
}

impl fmt::Display for ComponentLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z{}", self.index())
    }
}

/// One certified irreducible component of the singular fiber.
#[derive(Debug, Clone)]
pub struct Component {
    pub label: ComponentLabel,
    pub surface: Surface,
    pub m: u32,
    /// J_m^i for Z1..Z3; L_322 plus the reduced jet equations for Z0.
    pub closed_ideal: Ideal,
    /// Chart variable inverted to reach the component, when one is needed.
    pub localizer: Option<VarId>,
    /// Defining ideal of the component: the saturation of the closed ideal
    /// at the localizer, or the closed ideal itself when none is needed.
    /// Carries its reduced Groebner basis.
    pub sat_ideal: Ideal,
    /// Certified dimension of the component, 2m+1.
    pub dim: u32,
}

impl Component {
    /// Height of the defining ideal in the 3(m+1)-variable ambient ring.
    pub fn height(&self) -> u32 {
        self.sat_ideal.ambient_dim() - self.dim
    }

    /// Reduced Groebner basis of the defining ideal, printed canonically.
    pub fn generators(&self) -> Vec<String> {
        self.defining_polys().iter().map(|p| p.to_string()).collect()
    }

    fn defining_polys(&self) -> &[Polynomial] {
        self.sat_ideal.gb.as_deref().unwrap_or(&self.sat_ideal.gens)
    }
}

/// L_322 together with the jet equations reduced modulo it. The reductions
/// vanish below degree 6, so generators beyond the coordinate block only
/// appear for m >= 6.
fn z0_closed_ideal(surface: Surface, m: u32) -> Result<Ideal, EngineError> {
    let spec = TruncationSpec::new(3, 2, 2);
    let mut gens = build_l(spec, m)?.gens;
    for coeff in &jet_coeffs(surface, m).coeffs {
        let r = reduce_mod_l(coeff, spec);
        if !r.is_zero() {
            gens.push(r);
        }
    }
    Ok(Ideal::new(gens, m))
}

/// Build one component and certify its dimension. Z1..Z3 get a triangular
/// certificate of height m+2 on their chart plus a Groebner dimension check
/// on the saturation; Z0 gets the Groebner dimension check directly (and,
/// for the surface with the xyz term, a chart certificate at y2 together
/// with equality of the y2- and z2-chart closures).
pub fn component_ideal(
    surface: Surface,
    m: u32,
    label: ComponentLabel,
    budget: &mut Budget,
) -> Result<Component, EngineError> {
    if m < 5 {
        return Err(EngineError::Precondition(format!(
            "components are defined for m >= 5, got m = {m}"
        )));
    }
    let expected_dim = (2 * m + 1) as i64;
    let check_dim = |who: &str, dim: i64| -> Result<u32, EngineError> {
        if dim != expected_dim {
            return Err(EngineError::Verification(format!(
                "{who} has dimension {dim}, expected {expected_dim}"
            )));
        }
        Ok(dim as u32)
    };

    if label == ComponentLabel::Z0 {
        let closed = z0_closed_ideal(surface, m)?;
        return match surface {
            Surface::D40 => {
                let sat = closed.groebner(budget)?;
                let dim = check_dim("Z0", sat.dimension(budget)?)?;
                Ok(Component { label, surface, m, closed_ideal: closed, localizer: None, sat_ideal: sat, dim })
            }
            Surface::D41 => {
                let y2 = VarId::y(2);
                // The closed ideal is a pure coordinate ideal until the
                // first nonzero reduced jet appears at degree 6.
                if closed.gens.iter().any(|p| p.num_terms() > 1) {
                    let cert = chart_domain_certify(&closed, y2).map_err(|e| {
                        EngineError::Verification(format!("Z0 chart certificate failed: {}", e.reason))
                    })?;
                    if cert.height() != m + 2 {
                        return Err(EngineError::Verification(format!(
                            "Z0 chart certificate has height {}, expected {}",
                            cert.height(),
                            m + 2
                        )));
                    }
                }
                let sat = closed.saturate(y2, budget)?;
                let sat_z2 = closed.saturate(VarId::z(2), budget)?;
                if !sat.same_ideal(&sat_z2, budget)? {
                    return Err(EngineError::Verification(
                        "Z0 closures at y2 and z2 disagree".into(),
                    ));
                }
                let dim = check_dim("Z0", sat.dimension(budget)?)?;
                Ok(Component { label, surface, m, closed_ideal: closed, localizer: Some(y2), sat_ideal: sat, dim })
            }
        };
    }

    let localizer = match label {
        ComponentLabel::Z1 => VarId::z(1),
        _ => VarId::y(1),
    };
    let closed = build_j(surface, label.index() as u8, m)?;
    let cert = triangular_certify(&closed, localizer).map_err(|e| {
        EngineError::Verification(format!("{label} triangular certificate failed: {}", e.reason))
    })?;
    if cert.height() != m + 2 {
        return Err(EngineError::Verification(format!(
            "{label} triangular certificate has height {}, expected {}",
            cert.height(),
            m + 2
        )));
    }
    let sat = closed.saturate(localizer, budget)?;
    let dim = check_dim(&label.to_string(), sat.dimension(budget)?)?;
    Ok(Component { label, surface, m, closed_ideal: closed, localizer: Some(localizer), sat_ideal: sat, dim })
}

/// Decide V(a) subset-of V(b) exactly: every defining polynomial of b must
/// vanish on V(a), i.e. lie in the radical of a. Negative answers are
/// certified by the complete Rabinowitsch fallback inside radical_member.
pub fn variety_subset(a: &Ideal, b: &Ideal, budget: &mut Budget) -> Result<bool, EngineError> {
    let a = a.groebner(budget)?;
    for h in b.gb.as_deref().unwrap_or(&b.gens) {
        if !a.radical_member(h, budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Mutual non-containment record for one unordered component pair.
/// `a_in_b` means V(a) is contained in V(b); distinctness of equidimensional
/// irreducible sets requires both directions to be false.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Separation {
    pub a: ComponentLabel,
    pub b: ComponentLabel,
    pub a_in_b: bool,
    pub b_in_a: bool,
}

/// A truncated jet with coefficients in GF(2^k), optionally carrying a
/// deformation parameter s; each coefficient is then a + b*s.
#[derive(Debug, Clone)]
pub struct Jet {
    pub field: GfField,
    pub m: u32,
    coeffs: [Vec<(FieldElem, FieldElem)>; 3],
}

impl Jet {
    pub fn zero(field: GfField, m: u32) -> Jet {
        let row = vec![(0, 0); (m + 1) as usize];
        Jet { field, m, coeffs: [row.clone(), row.clone(), row] }
    }

    fn slot(&mut self, v: VarId) -> &mut (FieldElem, FieldElem) {
        assert!(v.family != Family::Aux && v.index <= self.m, "jet coordinate {v} out of range");
        let fam = match v.family {
            Family::X => 0,
            Family::Y => 1,
            Family::Z => 2,
            Family::Aux => unreachable!(),
        };
        &mut self.coeffs[fam][v.index as usize]
    }

    /// Set a constant coefficient.
    pub fn set(mut self, v: VarId, a: FieldElem) -> Jet {
        self.slot(v).0 = a;
        self
    }

    /// Set the s-linear part of a coefficient, making the jet a family.
    pub fn set_s(mut self, v: VarId, b: FieldElem) -> Jet {
        self.slot(v).1 = b;
        self
    }

    pub fn get(&self, v: VarId) -> (FieldElem, FieldElem) {
        assert!(v.family != Family::Aux, "jet coordinate {v} out of range");
        if v.index > self.m {
            return (0, 0);
        }
        let fam = match v.family {
            Family::X => 0,
            Family::Y => 1,
            Family::Z => 2,
            Family::Aux => unreachable!(),
        };
        self.coeffs[fam][v.index as usize]
    }

    pub fn has_param(&self) -> bool {
        self.coeffs.iter().flatten().any(|&(_, b)| b != 0)
    }

    /// Evaluate a polynomial at the jet. The result is the coefficient list
    /// of a polynomial in s (a single constant for parameter-free jets).
    pub fn evaluate(&self, p: &Polynomial) -> Vec<FieldElem> {
        let f = &self.field;
        let mut acc = vec![0];
        for mono in p.terms() {
            let mut prod = vec![1];
            for (v, e) in mono.iter() {
                let (a, b) = self.get(v);
                let base = if b == 0 { vec![a] } else { vec![a, b] };
                for _ in 0..e {
                    prod = sp_mul(f, &prod, &base);
                }
            }
            acc = sp_add(f, &acc, &prod);
        }
        while acc.len() > 1 && *acc.last().unwrap() == 0 {
            acc.pop();
        }
        acc
    }
}

fn sp_add(f: &GfField, a: &[FieldElem], b: &[FieldElem]) -> Vec<FieldElem> {
    let mut out = vec![0; a.len().max(b.len())];
    for (i, &c) in a.iter().enumerate() {
        out[i] = f.add(out[i], c);
    }
    for (i, &c) in b.iter().enumerate() {
        out[i] = f.add(out[i], c);
    }
    out
}

fn sp_mul(f: &GfField, a: &[FieldElem], b: &[FieldElem]) -> Vec<FieldElem> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &ca) in a.iter().enumerate() {
        if ca == 0 {
            continue;
        }
        for (j, &cb) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(ca, cb));
        }
    }
    out
}

/// Membership of a parameter-free jet in a component: every defining
/// polynomial must evaluate to zero.
pub fn jet_member(jet: &Jet, c: &Component) -> Result<bool, EngineError> {
    if jet.has_param() {
        return Err(EngineError::Precondition(
            "jet membership needs a parameter-free jet".into(),
        ));
    }
    Ok(c.defining_polys().iter().all(|p| jet.evaluate(p) == [0]))
}

/// Closure certificate for a one-parameter family: every generator of `j`
/// vanishes identically in s, and the chart coordinate is a nonzero
/// polynomial in s. The s -> 0 limit of the family then lies in the closure
/// of V(j) restricted to the chart.
pub fn family_witness(jet: &Jet, j: &Ideal, chart: VarId) -> Result<bool, EngineError> {
    if !jet.has_param() {
        return Err(EngineError::Precondition("family witness needs a parameter".into()));
    }
    let vanishes = j.gens.iter().all(|p| jet.evaluate(p).iter().all(|&c| c == 0));
    Ok(vanishes && jet.get(chart) != (0, 0))
}

/// The two coordinate symmetries of the surface equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Symmetry {
    /// Swap y_i and z_i.
    Psi1,
    /// z_i maps to y_i + z_i; the xyz surface needs x_i + y_i + z_i.
    Psi2,
}

impl fmt::Display for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symmetry::Psi1 => write!(f, "psi1"),
            Symmetry::Psi2 => write!(f, "psi2"),
        }
    }
}

/// Image of a polynomial under the symmetry's coordinate substitution.
pub fn symmetry_image(surface: Surface, which: Symmetry, p: &Polynomial) -> Polynomial {
    match which {
        Symmetry::Psi1 => p.rename_vars(|v| match v.family {
            Family::Y => VarId::z(v.index),
            Family::Z => VarId::y(v.index),
            _ => v,
        }),
        Symmetry::Psi2 => p.substitute(|v| {
            if v.family != Family::Z {
                return None;
            }
            let mut q = Polynomial::var(VarId::y(v.index)).add(&Polynomial::var(v));
            if surface == Surface::D41 {
                q = q.add(&Polynomial::var(VarId::x(v.index)));
            }
            Some(q)
        }),
    }
}

/// Apply a symmetry to a component and identify its image among the four
/// components of the same decomposition by ideal equality.
pub fn apply_symmetry<'a>(
    which: Symmetry,
    c: &Component,
    all: &'a [Component],
    budget: &mut Budget,
) -> Result<&'a Component, EngineError> {
    let image = Ideal::new(
        c.defining_polys().iter().map(|p| symmetry_image(c.surface, which, p)).collect::<Vec<_>>(),
        c.m,
    );
    for cand in all {
        if image.same_ideal(&cand.sat_ideal, budget)? {
            return Ok(cand);
        }
    }
    Err(EngineError::Verification(format!(
        "{which} image of {} matches no component",
        c.label
    )))
}

/// The stable shift: for every 6 <= l <= m the degree-l jet equation of the
/// xyz-free surface, reduced modulo L_322, equals the degree-(l-6) equation
/// with indices shifted by (3, 2, 2). This splits off an affine factor from
/// Z0 and drives the induction on m.
pub fn stable_iso_check(m: u32) -> Result<bool, EngineError> {
    if m < 6 {
        return Err(EngineError::Precondition(format!(
            "the stable shift needs m >= 6, got m = {m}"
        )));
    }
    let spec = TruncationSpec::new(3, 2, 2);
    let coeffs = jet_coeffs(Surface::D40, m).coeffs;
    for l in 6..=m as usize {
        let reduced = reduce_mod_l(&coeffs[l], spec);
        let shifted = coeffs[l - 6].rename_vars(|v| {
            let shift = match v.family {
                Family::X => 3,
                Family::Y | Family::Z => 2,
                Family::Aux => 0,
            };
            VarId { family: v.family, index: v.index + shift }
        });
        if reduced != shifted {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One witness jet with its computed membership vector, indexed Z0..Z3.
#[derive(Debug, Clone, Serialize)]
pub struct WitnessRecord {
    pub jet: String,
    pub member: [bool; 4],
}

/// The witness jets used in the distinctness and intersection arguments,
/// over GF(2). Expected entries: `Some(b)` is verified during decompose;
/// `None` is recorded as computed.
fn witness_plan(field: GfField, m: u32) -> Vec<(&'static str, Jet, [Option<bool>; 4])> {
    let z1 = VarId::z(1);
    let y1 = VarId::y(1);
    let z2 = VarId::z(2);
    let y2 = VarId::y(2);
    let zero = || Jet::zero(field, m);
    vec![
        // z1 and y1+z1 lie in the other charts' ideals, and z1 in L_322.
        ("(0,0,t)", zero().set(z1, 1), [Some(false), Some(true), Some(false), Some(false)]),
        ("(0,t,0)", zero().set(y1, 1), [Some(false), Some(false), Some(true), Some(false)]),
        ("(0,t,t)", zero().set(y1, 1).set(z1, 1), [Some(false), Some(false), Some(false), Some(true)]),
        // Limit of (0,0,st+t^2): in Z0 and Z1; excluded from Z2 because
        // z2 vanishes on Z0 meet Z2, and computed to lie outside Z3.
        ("(0,0,t^2)", zero().set(z2, 1), [Some(true), Some(true), Some(false), Some(false)]),
        // Limit of (0,st+t^2,st+t^2): in Z0 and Z3; y2 (resp. z2) vanishes
        // on Z0 meet Z1 (resp. Z2), so it avoids both chart components.
        ("(0,t^2,t^2)", zero().set(y2, 1).set(z2, 1), [Some(true), Some(false), Some(false), Some(true)]),
    ]
}

/// The full decomposition of the singular fiber at level m, with its
/// distinctness certificates.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub surface: Surface,
    pub m: u32,
    /// In label order Z0..Z3.
    pub components: Vec<Component>,
    pub separations: Vec<Separation>,
    pub witnesses: Vec<WitnessRecord>,
}

impl Decomposition {
    pub fn component(&self, label: ComponentLabel) -> &Component {
        &self.components[label.index()]
    }
}

/// Build all four components, certify pairwise distinctness at the radical
/// level, and verify the witness jet membership patterns.
pub fn decompose(surface: Surface, m: u32, budget: &mut Budget) -> Result<Decomposition, EngineError> {
    let components = ComponentLabel::ALL
        .iter()
        .map(|&label| component_ideal(surface, m, label, budget))
        .collect::<Result<Vec<_>, _>>()?;

    let mut separations = Vec::new();
    for i in 0..components.len() {
        for j in i + 1..components.len() {
            let (a, b) = (&components[i], &components[j]);
            let a_in_b = variety_subset(&a.sat_ideal, &b.sat_ideal, budget)?;
            let b_in_a = variety_subset(&b.sat_ideal, &a.sat_ideal, budget)?;
            if a_in_b || b_in_a {
                return Err(EngineError::Verification(format!(
                    "components {} and {} are not distinct",
                    a.label, b.label
                )));
            }
            separations.push(Separation { a: a.label, b: b.label, a_in_b, b_in_a });
        }
    }

    let field = GfField::new(1)?;
    let mut witnesses = Vec::new();
    for (name, jet, expected) in witness_plan(field, m) {
        let mut member = [false; 4];
        for c in &components {
            member[c.label.index()] = jet_member(&jet, c)?;
        }
        for (idx, want) in expected.iter().enumerate() {
            if let Some(want) = want {
                if member[idx] != *want {
                    return Err(EngineError::Verification(format!(
                        "witness {name} has membership {:?} in Z{idx}, expected {:?}",
                        member[idx], want
                    )));
                }
            }
        }
        witnesses.push(WitnessRecord { jet: name.to_string(), member });
    }

    Ok(Decomposition { surface, m, components, separations, witnesses })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Polynomial {
        Polynomial::parse(s).unwrap()
    }

    #[test]
    fn z0_closed_generators() {
        let d40 = z0_closed_ideal(Surface::D40, 6).unwrap();
        let names: Vec<String> = d40.gens.iter().map(|g| g.to_string()).collect();
        assert_eq!(
            names,
            ["x0", "x1", "x2", "y0", "y1", "z0", "z1", "y2^2*z2 + y2*z2^2 + x3^2"]
        );

        // Below degree 6 every reduced jet vanishes.
        let d41 = z0_closed_ideal(Surface::D41, 5).unwrap();
        assert_eq!(d41.gens.len(), 7);

        let d41_7 = z0_closed_ideal(Surface::D41, 7).unwrap();
        assert_eq!(d41_7.gens.last().unwrap(), &p("y2^2*z3 + y3*z2^2 + x3*y2*z2"));
    }

    #[test]
    fn component_construction_certifies_dimension() {
        let mut b = Budget::new(50_000_000);
        for surface in [Surface::D40, Surface::D41] {
            for label in ComponentLabel::ALL {
                let c = component_ideal(surface, 5, label, &mut b).unwrap();
                assert_eq!(c.dim, 11, "{surface:?} {label}");
                assert_eq!(c.height(), 7);
            }
        }
        assert!(component_ideal(Surface::D40, 4, ComponentLabel::Z1, &mut b).is_err());
    }

    #[test]
    fn z0_for_the_xyz_surface_at_m5_is_the_coordinate_ideal() {
        let mut b = Budget::standard();
        let c = component_ideal(Surface::D41, 5, ComponentLabel::Z0, &mut b).unwrap();
        let mut gb: Vec<String> = c.generators();
        gb.sort();
        assert_eq!(gb, ["x0", "x1", "x2", "y0", "y1", "z0", "z1"]);
        assert_eq!(c.localizer, Some(VarId::y(2)));
    }

    #[test]
    fn z1_contains_y1_and_the_chart_relation() {
        let mut b = Budget::new(50_000_000);
        let c = component_ideal(Surface::D40, 5, ComponentLabel::Z1, &mut b).unwrap();
        assert!(c.sat_ideal.contains_poly(&p("y1"), &mut b).unwrap());
        assert!(c.sat_ideal.contains_poly(&p("y2*z1^2 + x2^2"), &mut b).unwrap());
    }

    #[test]
    fn jets_evaluate_polynomials_in_the_parameter() {
        let f = GfField::new(1).unwrap();
        // (0, 0, st + t^2): z1 = s, z2 = 1.
        let jet = Jet::zero(f, 5).set_s(VarId::z(1), 1).set(VarId::z(2), 1);
        assert!(jet.has_param());
        // z1^2 evaluates to s^2; z1*z2 + z1 to s + s = 0.
        assert_eq!(jet.evaluate(&p("z1^2")), [0, 0, 1]);
        assert_eq!(jet.evaluate(&p("z1*z2 + z1")), [0]);
        let plain = Jet::zero(f, 5).set(VarId::z(2), 1);
        assert_eq!(plain.evaluate(&p("z2^2 + z1")), [1]);
    }

    #[test]
    fn family_witnesses_certify_chart_closures() {
        let f = GfField::new(1).unwrap();
        let m = 5;
        // (0, 0, st + t^2) against J_5^1 on the z1 chart.
        let family = Jet::zero(f, m).set_s(VarId::z(1), 1).set(VarId::z(2), 1);
        let j1 = build_j(Surface::D40, 1, m).unwrap();
        assert!(family_witness(&family, &j1, VarId::z(1)).unwrap());

        // (0, st+t^2, st+t^2) against J_5^3 with the xyz term, y1 chart.
        let family = Jet::zero(f, m)
            .set_s(VarId::y(1), 1)
            .set(VarId::y(2), 1)
            .set_s(VarId::z(1), 1)
            .set(VarId::z(2), 1);
        let j3 = build_j(Surface::D41, 3, m).unwrap();
        assert!(family_witness(&family, &j3, VarId::y(1)).unwrap());

        // (0, st, 0) against J_5^2 on the y1 chart.
        let family = Jet::zero(f, m).set_s(VarId::y(1), 1);
        let j2 = build_j(Surface::D40, 2, m).unwrap();
        assert!(family_witness(&family, &j2, VarId::y(1)).unwrap());

        // A family failing the equations is rejected: (0, st, t) on J_5^1
        // keeps y1 = s alive against the generator y1.
        let bad = Jet::zero(f, m).set_s(VarId::y(1), 1).set(VarId::z(1), 1);
        assert!(!family_witness(&bad, &j1, VarId::z(1)).unwrap());

        // Parameter-free jets are not families.
        let plain = Jet::zero(f, m).set(VarId::z(1), 1);
        assert!(family_witness(&plain, &j1, VarId::z(1)).is_err());
    }

    #[test]
    fn stable_shift_holds_through_m_twelve() {
        // Degree 6 reduces to the shifted base equation.
        let spec = TruncationSpec::new(3, 2, 2);
        let f6 = reduce_mod_l(&jet_coeffs(Surface::D40, 6).coeffs[6], spec);
        assert_eq!(f6, p("y2^2*z2 + y2*z2^2 + x3^2"));

        for m in 6..=12 {
            assert!(stable_iso_check(m).unwrap(), "m = {m}");
        }
        assert!(stable_iso_check(5).is_err());

        // The shift is specific to the xyz-free surface: the analogous
        // reduction for the other one has an extra x3*y2*z2 term at l = 7.
        let g7 = reduce_mod_l(&jet_coeffs(Surface::D41, 7).coeffs[7], spec);
        assert!(g7.to_string().contains("x3*y2*z2"));
    }

    #[test]
    fn symmetry_substitutions_fix_the_base_equations() {
        for surface in [Surface::D40, Surface::D41] {
            let base = surface.base_equation();
            for which in [Symmetry::Psi1, Symmetry::Psi2] {
                assert_eq!(symmetry_image(surface, which, &base), base, "{surface:?} {which}");
            }
        }
    }

    #[test]
    fn symmetries_permute_the_components() {
        let mut b = Budget::new(80_000_000);
        for surface in [Surface::D40, Surface::D41] {
            let d = decompose(surface, 5, &mut b).unwrap();
            let got = |which, label: ComponentLabel| {
                apply_symmetry(which, d.component(label), &d.components, &mut Budget::new(80_000_000))
                    .unwrap()
                    .label
            };
            use ComponentLabel::*;
            assert_eq!(got(Symmetry::Psi1, Z0), Z0);
            assert_eq!(got(Symmetry::Psi1, Z1), Z2);
            assert_eq!(got(Symmetry::Psi1, Z2), Z1);
            assert_eq!(got(Symmetry::Psi1, Z3), Z3);
            assert_eq!(got(Symmetry::Psi2, Z0), Z0);
            assert_eq!(got(Symmetry::Psi2, Z1), Z1);
            assert_eq!(got(Symmetry::Psi2, Z2), Z3);
            assert_eq!(got(Symmetry::Psi2, Z3), Z2);
        }
    }

    #[test]
    fn decompose_certifies_distinctness_and_witnesses() {
        let mut b = Budget::new(100_000_000);
        let d = decompose(Surface::D40, 5, &mut b).unwrap();
        assert_eq!(d.components.len(), 4);
        assert_eq!(d.separations.len(), 6);
        assert!(d.separations.iter().all(|s| !s.a_in_b && !s.b_in_a));

        let by_name: std::collections::BTreeMap<&str, [bool; 4]> =
            d.witnesses.iter().map(|w| (w.jet.as_str(), w.member)).collect();
        assert_eq!(by_name["(0,0,t)"], [false, true, false, false]);
        assert_eq!(by_name["(0,t,0)"], [false, false, true, false]);
        assert_eq!(by_name["(0,t,t)"], [false, false, false, true]);
        assert_eq!(by_name["(0,0,t^2)"], [true, true, false, false]);
        assert_eq!(by_name["(0,t^2,t^2)"], [true, false, false, true]);
    }

    #[test]
    fn decompose_with_the_xyz_term() {
        let mut b = Budget::new(100_000_000);
        let d = decompose(Surface::D41, 5, &mut b).unwrap();
        assert!(d.separations.iter().all(|s| !s.a_in_b && !s.b_in_a));
        let by_name: std::collections::BTreeMap<&str, [bool; 4]> =
            d.witnesses.iter().map(|w| (w.jet.as_str(), w.member)).collect();
        assert_eq!(by_name["(0,t^2,t^2)"], [true, false, false, true]);
        assert_eq!(by_name["(0,0,t^2)"], [true, true, false, false]);
    }

    #[test]
    fn jet_membership_pinned_values() {
        let mut b = Budget::new(50_000_000);
        let f = GfField::new(1).unwrap();
        let gamma = Jet::zero(f, 5).set(VarId::z(2), 1);

        let z0 = component_ideal(Surface::D40, 5, ComponentLabel::Z0, &mut b).unwrap();
        let z2 = component_ideal(Surface::D40, 5, ComponentLabel::Z2, &mut b).unwrap();
        assert!(jet_member(&gamma, &z0).unwrap());
        assert!(!jet_member(&gamma, &z2).unwrap());

        let point = Jet::zero(f, 5).set(VarId::y(2), 1).set(VarId::z(2), 1);
        let z0 = component_ideal(Surface::D41, 5, ComponentLabel::Z0, &mut b).unwrap();
        let z3 = component_ideal(Surface::D41, 5, ComponentLabel::Z3, &mut b).unwrap();
        assert!(jet_member(&point, &z0).unwrap());
        assert!(jet_member(&point, &z3).unwrap());

        let family = Jet::zero(f, 5).set_s(VarId::z(1), 1);
        assert!(jet_member(&family, &z0).is_err());
    }
}
