//! Intersection poset of the components and the incidence graph.
//!
//! The six pairwise intersections Z_i meet Z_j are ordered by inclusion at
//! the radical (point-set) level; the maximal elements become the edges of
//! the graph Gamma on the four component labels. For both surfaces the
//! result is the star with center Z0 — the Dynkin diagram of type D4.

use serde::Serialize;

use crate::components::{
    apply_symmetry, symmetry_image, variety_subset, Component, ComponentLabel, Decomposition,
    Symmetry,
};
use crate::error::EngineError;
use crate::ideal::{Budget, Ideal};
use crate::jets::{jet_coeffs, reduce_mod_l, Surface, TruncationSpec};
use crate::poly::Polynomial;

type Pair = (ComponentLabel, ComponentLabel);

/// One pairwise intersection with its position in the inclusion order.
/// Inclusions are decided on varieties, not on the (possibly non-radical)
/// ideal sums: V(A) is inside V(B) iff every generator of B lies in the
/// radical of A.
#[derive(Debug, Clone)]
pub struct IntersectionRecord {
    pub pair: Pair,
    /// Sum of the two defining ideals, with its Groebner basis attached.
    pub ideal: Ideal,
    pub dim: i64,
    pub maximal: bool,
    /// Pairs whose intersection strictly contains this one.
    pub strict_subset_of: Vec<Pair>,
    /// Pairs whose intersection equals this one as a set (expected empty).
    pub equal_to: Vec<Pair>,
}

/// Compute all six intersection records and their inclusion order.
/// Containments are pre-filtered by dimension (a variety never fits inside
/// a smaller-dimensional one) and the resulting relation is audited for
/// transitivity.
pub fn pairwise_intersections(
    comps: &[Component],
    budget: &mut Budget,
) -> Result<Vec<IntersectionRecord>, EngineError> {
    if comps.len() != 4 {
        return Err(EngineError::Precondition(format!(
            "expected four certified components, got {}",
            comps.len()
        )));
    }
    let mut pairs: Vec<(Pair, Ideal, i64)> = Vec::new();
    for i in 0..comps.len() {
        for j in i + 1..comps.len() {
            let sum = comps[i].sat_ideal.sum(&comps[j].sat_ideal).groebner(budget)?;
            let dim = sum.dimension(budget)?;
            pairs.push(((comps[i].label, comps[j].label), sum, dim));
        }
    }

    let n = pairs.len();
    let mut incl = vec![vec![false; n]; n];
    for a in 0..n {
        for b in 0..n {
            if a == b {
                incl[a][b] = true;
                continue;
            }
            if pairs[a].2 > pairs[b].2 {
                continue;
            }
            incl[a][b] = variety_subset(&pairs[a].1, &pairs[b].1, budget)?;
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if incl[a][b] && incl[b][c] && !incl[a][c] {
                    return Err(EngineError::Verification(format!(
                        "inclusion relation is not transitive at {:?} <= {:?} <= {:?}",
                        pairs[a].0, pairs[b].0, pairs[c].0
                    )));
                }
            }
        }
    }

    Ok((0..n)
        .map(|a| {
            let strict_subset_of: Vec<Pair> =
                (0..n).filter(|&b| b != a && incl[a][b] && !incl[b][a]).map(|b| pairs[b].0).collect();
            let equal_to: Vec<Pair> =
                (0..n).filter(|&b| b != a && incl[a][b] && incl[b][a]).map(|b| pairs[b].0).collect();
            let (pair, ideal, dim) = pairs[a].clone();
            IntersectionRecord {
                pair,
                ideal,
                dim,
                maximal: strict_subset_of.is_empty(),
                strict_subset_of,
                equal_to,
            }
        })
        .collect())
}

/// The records not strictly below any other record.
pub fn maximal_elements(records: &[IntersectionRecord]) -> Vec<IntersectionRecord> {
    records.iter().filter(|r| r.maximal).cloned().collect()
}

/// Verify the expected shape of the poset: the maximal elements are exactly
/// the three intersections with Z0 and pairwise distinct as sets, and every
/// intersection among Z1, Z2, Z3 lands inside Z0 itself. (The three lower
/// intersections may and do coincide: each forces y1 = z1 = 0.)
pub fn verify_poset(
    records: &[IntersectionRecord],
    z0: &Component,
    budget: &mut Budget,
) -> Result<(), EngineError> {
    use ComponentLabel::*;
    let mut maximal: Vec<Pair> = records.iter().filter(|r| r.maximal).map(|r| r.pair).collect();
    maximal.sort();
    if maximal != [(Z0, Z1), (Z0, Z2), (Z0, Z3)] {
        return Err(EngineError::Verification(format!(
            "maximal intersections are {maximal:?}, expected the three pairs through Z0"
        )));
    }
    for r in records {
        if r.maximal && !r.equal_to.is_empty() {
            return Err(EngineError::Verification(format!(
                "maximal intersection {:?} coincides with {:?}",
                r.pair, r.equal_to
            )));
        }
        if r.pair.0 != Z0 {
            if !variety_subset(&r.ideal, &z0.sat_ideal, budget)? {
                return Err(EngineError::Verification(format!(
                    "intersection {:?} is not contained in Z0",
                    r.pair
                )));
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct Graph {
    pub vertices: Vec<ComponentLabel>,
    pub edges: Vec<Pair>,
}

/// Vertices are the component labels; edges are the maximal intersections.
pub fn build_graph(comps: &[Component], maximals: &[IntersectionRecord]) -> Graph {
    let mut edges: Vec<Pair> = maximals.iter().map(|r| r.pair).collect();
    edges.sort();
    edges.dedup();
    Graph { vertices: comps.iter().map(|c| c.label).collect(), edges }
}

/// True iff the graph is the 4-vertex star K_{1,3}: degree sequence
/// [3,1,1,1] on a simple graph.
pub fn dynkin_d4_check(g: &Graph) -> bool {
    if g.vertices.len() != 4 || g.edges.len() != 3 {
        return false;
    }
    let mut degrees = vec![0usize; g.vertices.len()];
    let mut seen = std::collections::BTreeSet::new();
    for &(a, b) in &g.edges {
        if a == b || !seen.insert((a.min(b), a.max(b))) {
            return false;
        }
        let ia = g.vertices.iter().position(|&v| v == a);
        let ib = g.vertices.iter().position(|&v| v == b);
        match (ia, ib) {
            (Some(ia), Some(ib)) => {
                degrees[ia] += 1;
                degrees[ib] += 1;
            }
            _ => return false,
        }
    }
    degrees.sort_unstable();
    degrees == [1, 1, 1, 3]
}

/// Exact DOT rendering: `graph Gamma { Z0 -- Z1; Z0 -- Z2; Z0 -- Z3; }`.
pub fn to_dot(g: &Graph) -> String {
    let mut out = String::from("graph Gamma {");
    for &(a, b) in &g.edges {
        out.push_str(&format!(" {a} -- {b};"));
    }
    out.push_str(" }");
    out
}

/// The three radical membership certificates behind the poset shape, run
/// symbolically on the component ideals: x2 vanishes on Z1 meet Z2 for both
/// surfaces; z2 on Z0 meet Z2 (xyz-free surface); y2 on Z0 meet Z1 (xyz
/// surface).
pub fn radical_certificates(
    d: &Decomposition,
    budget: &mut Budget,
) -> Result<Vec<(String, bool)>, EngineError> {
    use ComponentLabel::*;
    let sum = |a: ComponentLabel, b: ComponentLabel, budget: &mut Budget| {
        d.component(a).sat_ideal.sum(&d.component(b).sat_ideal).groebner(budget)
    };
    let mut out = Vec::new();
    let i12 = sum(Z1, Z2, budget)?;
    out.push(("x2 in rad(I1 + I2)".to_string(), i12.radical_member(&Polynomial::var(crate::poly::VarId::x(2)), budget)?));
    match d.surface {
        Surface::D40 => {
            let i02 = sum(Z0, Z2, budget)?;
            out.push(("z2 in rad(I0 + I2)".to_string(), i02.radical_member(&Polynomial::var(crate::poly::VarId::z(2)), budget)?));
        }
        Surface::D41 => {
            let i01 = sum(Z0, Z1, budget)?;
            out.push(("y2 in rad(I0 + I1)".to_string(), i01.radical_member(&Polynomial::var(crate::poly::VarId::y(2)), budget)?));
        }
    }
    Ok(out)
}

/// Budget-free fallback certificates: the congruences behind the radical
/// memberships, checked as polynomial identities on the reduced jet
/// equations. Degree 4 gives x2^2 modulo L_222; degree 5 factors through
/// the chart variable modulo L_212 (xyz-free) or L_221 (xyz).
pub fn identity_certificates(surface: Surface) -> Vec<(String, bool)> {
    let coeffs = &jet_coeffs(surface, 5).coeffs;
    let reduced4 = reduce_mod_l(&coeffs[4], TruncationSpec::new(2, 2, 2));
    let reduced5 = match surface {
        Surface::D40 => reduce_mod_l(&coeffs[5], TruncationSpec::new(2, 1, 2)),
        Surface::D41 => reduce_mod_l(&coeffs[5], TruncationSpec::new(2, 2, 1)),
    };
    let p = |s: &str| Polynomial::parse(s).unwrap();
    let (claim5, rhs5) = match surface {
        Surface::D40 => (
            "f5 = y1*(y1*z3 + z2^2) mod L_212",
            p("y1^2*z3 + y1*z2^2"),
        ),
        Surface::D41 => (
            "g5 = z1*(y2^2 + y3*z1 + x2*y2) mod L_221",
            p("y2^2*z1 + y3*z1^2 + x2*y2*z1"),
        ),
    };
    vec![
        ("jet4 = x2^2 mod L_222".to_string(), reduced4 == p("x2^2")),
        (claim5.to_string(), reduced5 == rhs5),
    ]
}

/// Check that a symmetry permutes the intersection records the same way it
/// permutes the components: the substituted ideal of each record equals the
/// record at the permuted pair, and maximality is preserved.
pub fn symmetry_coherent(
    which: Symmetry,
    d: &Decomposition,
    records: &[IntersectionRecord],
    budget: &mut Budget,
) -> Result<bool, EngineError> {
    let mut perm = [ComponentLabel::Z0; 4];
    for c in &d.components {
        perm[c.label.index()] = apply_symmetry(which, c, &d.components, budget)?.label;
    }
    for r in records {
        let (a, b) = (perm[r.pair.0.index()], perm[r.pair.1.index()]);
        let image_pair = (a.min(b), a.max(b));
        let Some(target) = records.iter().find(|t| t.pair == image_pair) else {
            return Ok(false);
        };
        if target.maximal != r.maximal {
            return Ok(false);
        }
        let gens = r.ideal.gb.as_deref().unwrap_or(&r.ideal.gens);
        let image = Ideal::new(
            gens.iter().map(|p| symmetry_image(d.surface, which, p)).collect::<Vec<_>>(),
            r.ideal.m,
        );
        if !image.same_ideal(&target.ideal, budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::components::decompose;
    use ComponentLabel::*;

    #[test]
    fn poset_at_m5_is_the_star_through_z0() {
        let mut b = Budget::new(200_000_000);
        for surface in [Surface::D40, Surface::D41] {
            let d = decompose(surface, 5, &mut b).unwrap();
            let records = pairwise_intersections(&d.components, &mut b).unwrap();
            assert_eq!(records.len(), 6);
            verify_poset(&records, d.component(Z0), &mut b).unwrap();

            let r12 = records.iter().find(|r| r.pair == (Z1, Z2)).unwrap();
            assert!(!r12.maximal, "{surface:?}");
            assert!(r12.strict_subset_of.contains(&(Z0, Z1)));
            assert!(r12.strict_subset_of.contains(&(Z0, Z2)));

            let maximals = maximal_elements(&records);
            let g = build_graph(&d.components, &maximals);
            assert_eq!(to_dot(&g), "graph Gamma { Z0 -- Z1; Z0 -- Z2; Z0 -- Z3; }");
            assert!(dynkin_d4_check(&g));
        }
    }

    #[test]
    fn incomparable_maximals_and_radical_certificates() {
        let mut b = Budget::new(200_000_000);
        let d = decompose(Surface::D40, 5, &mut b).unwrap();
        let records = pairwise_intersections(&d.components, &mut b).unwrap();
        // {Z0,Z1} and {Z0,Z2} are incomparable: both maximal, neither listed
        // under the other.
        let r01 = records.iter().find(|r| r.pair == (Z0, Z1)).unwrap();
        let r02 = records.iter().find(|r| r.pair == (Z0, Z2)).unwrap();
        assert!(r01.maximal && r02.maximal);
        assert!(r01.equal_to.is_empty() && r02.equal_to.is_empty());

        for (claim, ok) in radical_certificates(&d, &mut b).unwrap() {
            assert!(ok, "{claim}");
        }
        let d41 = decompose(Surface::D41, 5, &mut b).unwrap();
        for (claim, ok) in radical_certificates(&d41, &mut b).unwrap() {
            assert!(ok, "{claim}");
        }
    }

    #[test]
    fn identity_certificates_hold_for_both_surfaces() {
        for surface in [Surface::D40, Surface::D41] {
            for (claim, ok) in identity_certificates(surface) {
                assert!(ok, "{surface:?}: {claim}");
            }
        }
    }

    #[test]
    fn symmetries_act_on_the_poset() {
        let mut b = Budget::new(200_000_000);
        let d = decompose(Surface::D41, 5, &mut b).unwrap();
        let records = pairwise_intersections(&d.components, &mut b).unwrap();
        assert!(symmetry_coherent(Symmetry::Psi1, &d, &records, &mut b).unwrap());
        assert!(symmetry_coherent(Symmetry::Psi2, &d, &records, &mut b).unwrap());
    }

    #[test]
    fn dynkin_check_rejects_other_shapes() {
        let star = Graph { vertices: vec![Z0, Z1, Z2, Z3], edges: vec![(Z0, Z1), (Z0, Z2), (Z0, Z3)] };
        assert!(dynkin_d4_check(&star));
        // Path Z0-Z1-Z2-Z3 is the A4 shape.
        let path = Graph { vertices: vec![Z0, Z1, Z2, Z3], edges: vec![(Z0, Z1), (Z1, Z2), (Z2, Z3)] };
        assert!(!dynkin_d4_check(&path));
        let cycle = Graph {
            vertices: vec![Z0, Z1, Z2, Z3],
            edges: vec![(Z0, Z1), (Z1, Z2), (Z2, Z3), (Z0, Z3)],
        };
        assert!(!dynkin_d4_check(&cycle));
        let doubled = Graph {
            vertices: vec![Z0, Z1, Z2, Z3],
            edges: vec![(Z0, Z1), (Z0, Z1), (Z0, Z2)],
        };
        assert!(!dynkin_d4_check(&doubled));
    }

    #[test]
    fn degenerate_inputs() {
        assert!(maximal_elements(&[]).is_empty());
        let mut b = Budget::standard();
        let d = decompose(Surface::D40, 5, &mut b).unwrap();
        let g = build_graph(&d.components, &[]);
        assert_eq!(g.vertices.len(), 4);
        assert!(g.edges.is_empty());
        assert_eq!(to_dot(&g), "graph Gamma { }");
        assert!(!dynkin_d4_check(&g));
        assert!(pairwise_intersections(&d.components[..2], &mut b).is_err());
    }
}
