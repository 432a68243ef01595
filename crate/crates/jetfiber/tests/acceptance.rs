//! Acceptance gate: nine headline checks, one test per criterion, each
//! printing a single pass/fail line (use `--nocapture` to see them) and
//! enforcing its wall-clock limit.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use jetfiber::cli::graph_report;
use jetfiber::{
    closed_form_g, cover_check, decompose, jet_coeffs, maximal_elements, pairwise_intersections,
    radical_certificates, reduce_mod_l, stable_iso_check, verify_center_cases, verify_g_lemma,
    verify_poset, Budget, ComponentLabel, Ideal, Monomial, Polynomial, Surface, TruncationSpec,
    VarId,
};

/// Run one criterion body, collect its faults, print the verdict line,
/// and fail the test on any fault (including a blown time limit).
fn gate(n: u32, what: &str, limit: Option<Duration>, body: impl FnOnce(&mut Vec<String>)) {
    let mut faults = Vec::new();
    let start = Instant::now();
    body(&mut faults);
    let elapsed = start.elapsed();
    if let Some(limit) = limit {
        if elapsed > limit {
            faults.push(format!("took {elapsed:.2?}, limit {limit:?}"));
        }
    }
    let status = if faults.is_empty() { "PASS" } else { "FAIL" };
    println!("criterion {n} {status} ({elapsed:.2?}): {what}");
    assert!(faults.is_empty(), "criterion {n}: {faults:#?}");
}

fn fresh() -> Budget {
    Budget::standard()
}

#[test]
fn criterion_1_decomposition() {
    gate(1, "four distinct components of dimension 2m+1, both surfaces, m = 5..7", None, |faults| {
        for surface in [Surface::D40, Surface::D41] {
            for m in 5..=7 {
                let t = Instant::now();
                let d = match decompose(surface, m, &mut fresh()) {
                    Ok(d) => d,
                    Err(e) => {
                        faults.push(format!("{surface:?} m={m}: {e}"));
                        continue;
                    }
                };
                let elapsed = t.elapsed();
                if elapsed > Duration::from_secs(60) {
                    faults.push(format!("{surface:?} m={m}: took {elapsed:.2?}, limit 60s"));
                }
                let labels: Vec<ComponentLabel> = d.components.iter().map(|c| c.label).collect();
                if labels != ComponentLabel::ALL {
                    faults.push(format!("{surface:?} m={m}: labels {labels:?}"));
                }
                for c in &d.components {
                    if c.dim != 2 * m + 1 {
                        faults.push(format!(
                            "{surface:?} m={m} {}: dimension {} != {}",
                            c.label,
                            c.dim,
                            2 * m + 1
                        ));
                    }
                }
                if d.separations.len() != 6
                    || d.separations.iter().any(|s| s.a_in_b || s.b_in_a)
                {
                    faults.push(format!("{surface:?} m={m}: components not pairwise distinct"));
                }
            }
        }
    });
}

#[test]
fn criterion_2_reduction_lemma_grid() {
    gate(
        2,
        "closed form matches the reduced jet equation on the full 125 x 13 grid",
        Some(Duration::from_secs(10)),
        |faults| {
            let coeffs = jet_coeffs(Surface::D41, 12).coeffs;
            for p in 1..=5 {
                for q in 1..=5 {
                    for r in 1..=5 {
                        let spec = TruncationSpec::new(p, q, r);
                        for l in 0..=12u32 {
                            let reduced = reduce_mod_l(&coeffs[l as usize], spec);
                            let closed = closed_form_g(spec, l, true);
                            if reduced != closed {
                                faults.push(format!("G_{p}{q}{r}^({l}): closed form mismatch"));
                            }
                            let report = verify_g_lemma(spec, l);
                            if !report.all_matched {
                                faults.push(format!("G_{p}{q}{r}^({l}): case prediction failed"));
                            }
                        }
                    }
                }
            }
        },
    );
}

#[test]
fn criterion_3_intersection_poset() {
    gate(3, "maximal intersections are the three through Z0, certified symbolically", None, |faults| {
        use ComponentLabel::*;
        for surface in [Surface::D40, Surface::D41] {
            for m in 5..=6 {
                let t = Instant::now();
                let mut budget = fresh();
                let mut run = || -> Result<Vec<String>, jetfiber::EngineError> {
                    let mut local = Vec::new();
                    let d = decompose(surface, m, &mut budget)?;
                    let records = pairwise_intersections(&d.components, &mut budget)?;
                    verify_poset(&records, d.component(Z0), &mut budget)?;
                    let mut maximal: Vec<_> =
                        maximal_elements(&records).iter().map(|r| r.pair).collect();
                    maximal.sort();
                    if maximal != [(Z0, Z1), (Z0, Z2), (Z0, Z3)] {
                        local.push(format!("{surface:?} m={m}: maximal = {maximal:?}"));
                    }
                    let z0_dim = i64::from(d.component(Z0).dim);
                    for r in records.iter().filter(|r| r.pair.0 != Z0) {
                        if r.dim >= z0_dim {
                            local.push(format!(
                                "{surface:?} m={m}: {:?} not strictly below Z0",
                                r.pair
                            ));
                        }
                    }
                    for (claim, holds) in radical_certificates(&d, &mut budget)? {
                        if !holds {
                            local.push(format!("{surface:?} m={m}: certificate failed: {claim}"));
                        }
                    }
                    Ok(local)
                };
                match run() {
                    Ok(local) => faults.extend(local),
                    Err(e) => faults.push(format!("{surface:?} m={m}: {e}")),
                }
                let elapsed = t.elapsed();
                if elapsed > Duration::from_secs(120) {
                    faults.push(format!("{surface:?} m={m}: took {elapsed:.2?}, limit 120s"));
                }
            }
        }
    });
}

#[test]
fn criterion_4_graph_is_the_d4_star() {
    gate(4, "incidence graph is the D4 star with exact DOT output, m = 5..7", None, |faults| {
        for surface in [Surface::D40, Surface::D41] {
            for m in 5..=7 {
                match graph_report(surface, m, &mut fresh()) {
                    Ok(report) => {
                        if !report.dynkin_d4 {
                            faults.push(format!("{surface:?} m={m}: not the D4 star"));
                        }
                        if report.dot != "graph Gamma { Z0 -- Z1; Z0 -- Z2; Z0 -- Z3; }" {
                            faults.push(format!("{surface:?} m={m}: DOT = {}", report.dot));
                        }
                    }
                    Err(e) => faults.push(format!("{surface:?} m={m}: {e}")),
                }
            }
        }
    });
}

#[test]
fn criterion_5_stable_factor() {
    gate(
        5,
        "degree shift by 6 matches exactly for m = 6..12",
        Some(Duration::from_secs(5)),
        |faults| {
            for m in 6..=12 {
                match stable_iso_check(m) {
                    Ok(true) => {}
                    Ok(false) => faults.push(format!("m={m}: shifted equations differ")),
                    Err(e) => faults.push(format!("m={m}: {e}")),
                }
            }
        },
    );
}

#[test]
fn criterion_6_cover_oracle() {
    gate(
        6,
        "enumerated fiber equals the union of the three chart varieties at m = 3, k = 1, 2",
        Some(Duration::from_secs(120)),
        |faults| {
            for surface in [Surface::D40, Surface::D41] {
                for k in 1..=2 {
                    match cover_check(surface, 3, k) {
                        Ok(true) => {}
                        Ok(false) => faults.push(format!("{surface:?} k={k}: cover mismatch")),
                        Err(e) => faults.push(format!("{surface:?} k={k}: {e}")),
                    }
                }
            }
        },
    );
}

#[test]
fn criterion_7_center_cases() {
    gate(
        7,
        "center-component codimension cases all verified for m = 6..11",
        Some(Duration::from_secs(300)),
        |faults| {
            for m in 6..=11 {
                match verify_center_cases(1, m, &mut fresh()) {
                    Ok(report) => {
                        for c in report.checks.iter().filter(|c| !matches!(c.status, jetfiber::CheckStatus::Pass)) {
                            faults.push(format!("m={m} {}: {:?} ({})", c.id, c.status, c.detail));
                        }
                    }
                    Err(e) => faults.push(format!("m={m}: {e}")),
                }
            }
        },
    );
}

#[test]
fn criterion_8_witness_patterns() {
    gate(8, "the four named jets reproduce the exact membership pattern", None, |faults| {
        let expected: [(&str, [bool; 4]); 4] = [
            ("(0,0,t)", [false, true, false, false]),
            ("(0,t,0)", [false, false, true, false]),
            ("(0,0,t^2)", [true, true, false, false]),
            ("(0,t^2,t^2)", [true, false, false, true]),
        ];
        for surface in [Surface::D40, Surface::D41] {
            let d = match decompose(surface, 5, &mut fresh()) {
                Ok(d) => d,
                Err(e) => {
                    faults.push(format!("{surface:?}: {e}"));
                    continue;
                }
            };
            for (jet, member) in expected {
                match d.witnesses.iter().find(|w| w.jet == jet) {
                    Some(w) if w.member == member => {}
                    Some(w) => faults.push(format!(
                        "{surface:?} {jet}: membership {:?}, expected {member:?}",
                        w.member
                    )),
                    None => faults.push(format!("{surface:?}: witness {jet} missing")),
                }
            }
        }
    });
}

/// A deterministic random polynomial: each variable of a small pool joins
/// each monomial independently, so products and sums stay small enough to
/// multiply thousands of times.
fn random_poly(rng: &mut ChaCha8Rng, max_terms: usize) -> Polynomial {
    let pool: Vec<VarId> = (0..3)
        .flat_map(|i| [VarId::x(i), VarId::y(i), VarId::z(i)])
        .collect();
    let n = rng.random_range(0..=max_terms);
    Polynomial::from_terms((0..n).map(|_| {
        Monomial::from_pairs(pool.iter().filter_map(|&v| {
            rng.random_bool(0.25).then(|| (v, rng.random_range(1..=2u16)))
        }))
    }))
}

#[test]
fn criterion_9_property_suites() {
    gate(9, "randomized algebra suites pass with zero failures", None, |faults| {
        // Ring laws, char-2 Frobenius, print/parse round trip: 1000 cases.
        let mut rng = ChaCha8Rng::seed_from_u64(0x4a45_5446);
        for case in 0..1000 {
            let a = random_poly(&mut rng, 5);
            let b = random_poly(&mut rng, 5);
            let c = random_poly(&mut rng, 3);
            if a.add(&b) != b.add(&a) || a.add(&a) != Polynomial::zero() {
                faults.push(format!("case {case}: addition laws"));
            }
            if a.mul(&b) != b.mul(&a) || a.mul(&b.add(&c)) != a.mul(&b).add(&a.mul(&c)) {
                faults.push(format!("case {case}: multiplication laws"));
            }
            if a.add(&b).square() != a.square().add(&b.square())
                || a.square() != a.mul(&a)
                || a.pow(2) != a.square()
            {
                faults.push(format!("case {case}: Frobenius"));
            }
            match Polynomial::parse(&a.to_string()) {
                Ok(back) if back == a => {}
                Ok(_) => faults.push(format!("case {case}: round trip changed the polynomial")),
                Err(e) => faults.push(format!("case {case}: reparse failed: {e}")),
            }
            // Substitution by z_i -> y_i + z_i is a ring map.
            let phi = |p: &Polynomial| {
                p.substitute(|v| {
                    (v.family == jetfiber::Family::Z)
                        .then(|| Polynomial::var(VarId::y(v.index)).add(&Polynomial::var(v)))
                })
            };
            if phi(&a.mul(&b)) != phi(&a).mul(&phi(&b))
                || phi(&a.add(&b)) != phi(&a).add(&phi(&b))
            {
                faults.push(format!("case {case}: substitution is not a ring map"));
            }
            if faults.len() > 8 {
                faults.push("....".into());
                break;
            }
        }

        // Reduced bases are canonical: recomputing from the basis is a
        // fixed point. 200 cases.
        let mut rng = ChaCha8Rng::seed_from_u64(0x4742_4944);
        for case in 0..200 {
            let gens: Vec<Polynomial> = (0..rng.random_range(1..=3))
                .map(|_| random_poly(&mut rng, 3))
                .collect();
            let mut budget = fresh();
            let once = match Ideal::new(gens, 2).groebner(&mut budget) {
                Ok(i) => i,
                Err(e) => {
                    faults.push(format!("gb case {case}: {e}"));
                    continue;
                }
            };
            let basis = once.gb.clone().unwrap();
            match Ideal::new(basis.clone(), 2).groebner(&mut budget) {
                Ok(again) if again.gb.as_deref() == Some(&basis[..]) => {}
                Ok(_) => faults.push(format!("gb case {case}: basis not a fixed point")),
                Err(e) => faults.push(format!("gb case {case}: {e}")),
            }
        }

        // Saturation soundness on planted instances: g is recovered from
        // <v * g> when saturating at v. 200 cases.
        let mut rng = ChaCha8Rng::seed_from_u64(0x5341_5455);
        for case in 0..200 {
            let planted: Vec<Polynomial> = (1..=rng.random_range(1..=2))
                .map(|_| random_poly(&mut rng, 3))
                .filter(|p| !p.is_zero())
                .collect();
            if planted.is_empty() {
                continue;
            }
            let v = [VarId::x(1), VarId::y(1), VarId::z(1)][rng.random_range(0..3)];
            let hidden: Vec<Polynomial> =
                planted.iter().map(|g| g.mul(&Polynomial::var(v))).collect();
            let mut budget = fresh();
            match Ideal::new(hidden, 2).saturate(v, &mut budget) {
                Ok(sat) => {
                    for g in &planted {
                        match sat.contains_poly(g, &mut budget) {
                            Ok(true) => {}
                            Ok(false) => {
                                faults.push(format!("sat case {case}: planted {g} lost"))
                            }
                            Err(e) => faults.push(format!("sat case {case}: {e}")),
                        }
                    }
                }
                Err(e) => faults.push(format!("sat case {case}: {e}")),
            }
        }
    });
}
