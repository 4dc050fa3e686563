//! Acceptance suite. Runs every criterion at its stated parameters and time
//! limit, prints one line per criterion and exits nonzero if any fails.

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use qdouble_core::algebra::{associativity_probe, StraighteningRule};
use qdouble_core::borel::{build_aq, gamma_presentation_check, standard_rewrite_system};
use qdouble_core::cocycle::{coboundary, is_coboundary, is_cocycle, restrict_phi, AdditiveCochain};
use qdouble_core::double::{
    build_double, check_generators, check_twist, identify_generators, r_matrix_check, Bicharacter, IdentityOutcome,
};
use qdouble_core::twist::{
    build_twist_j, closed_form_phi, coboundary_dj, coboundary_matches_phi, delta_j, pentagon_check, Associator,
    TwistedAq,
};
use qdouble_core::verify::{run_verification, VerifyOptions};
use qdouble_core::{build_uqb, Algebra, CartanType, IdempotentAlgebra, Monomial, Uqb};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

const A1: CartanType = CartanType::A1;
const A2: CartanType = CartanType::A2;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn uqb(t: CartanType, n: i64) -> Arc<Uqb> {
    build_uqb(t, n).expect("valid parameters")
}

fn all_hold(list: &[IdentityOutcome]) -> Result<(), String> {
    match list.iter().find(|o| !o.holds) {
        None => Ok(()),
        Some(o) => Err(format!("{} failed: {:?}", o.identity, o.detail)),
    }
}

fn c1_dimension_aq() -> Outcome {
    let mut out = Vec::new();
    for (t, n, expected, limit) in [(A1, 3, 27u128, 1.0), (A2, 5, 390_625u128, 30.0)] {
        let start = Instant::now();
        let u = uqb(t, n);
        let (aq, _) = build_aq(&u, 200, 0).map_err(|f| format!("{f:?}"))?;
        let enumerated = aq.enumerate_count();
        let secs = start.elapsed().as_secs_f64();
        ensure(aq.count() == expected && enumerated == expected, || {
            format!("({t},{n}): count {} enumerated {enumerated}, expected {expected}", aq.count())
        })?;
        ensure(secs < limit, || format!("({t},{n}) took {secs:.1}s > {limit}s"))?;
        out.push(format!("({t},{n}) {expected}"));
    }
    Ok(out.join(", "))
}

fn c2_dimension_uqb() -> Outcome {
    let a1 = uqb(A1, 3);
    let listed = a1.basis().count();
    ensure(listed == 81 && a1.dimension() == 81, || format!("A1: {listed} listed"))?;
    let a2 = uqb(A2, 5);
    ensure(a2.dimension() == 5u128.pow(10), || format!("A2: {}", a2.dimension()))?;
    // Spot checks: products of random monomials are combinations of valid
    // normal words of the right degree, and the unit acts trivially.
    let m = a2.m() as u16;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let one = a2.unit();
    let one_b = *one.terms().next().unwrap().0;
    for _ in 0..300 {
        let a = a2.random_low_degree_monomial(&mut rng, 8);
        let b = a2.random_low_degree_monomial(&mut rng, 8);
        ensure(a2.mul_basis(&one_b, &a).coefficient(&a).is_some_and(|c| c.is_one()), || format!("1·{a:?}"))?;
        let wa = a2.rewrite().weight(&a.pbw_word());
        let wb = a2.rewrite().weight(&b.pbw_word());
        for (x, _) in a2.mul_basis(&a, &b).terms() {
            ensure(x.pbw_exp().iter().all(|&e| e < m) && x.group_exp().iter().all(|&e| e < m), || {
                format!("{x:?} is not a normal word")
            })?;
            let wx = a2.rewrite().weight(&x.pbw_word());
            ensure((0..2).all(|i| wx[i] == wa[i] + wb[i]), || format!("weight of {x:?}"))?;
            ensure(
                (0..2).all(|i| x.group_exp()[i] as u32 == (a.group_exp()[i] as u32 + b.group_exp()[i] as u32) % a2.m()),
                || format!("group part of {x:?}"),
            )?;
        }
    }
    Ok("(A1,3) 81 enumerated, (A2,5) 5^10 with 300 normal-form spot checks".into())
}

fn c3_twisted_coproduct() -> Outcome {
    let mut out = Vec::new();
    for (t, n) in [(A1, 3), (A1, 5), (A2, 5)] {
        let u = uqb(t, n);
        let j = build_twist_j(&u);
        let fine = IdempotentAlgebra::new(u.clone(), u.m());
        let bold = IdempotentAlgebra::new(u.clone(), u.n());
        for i in 0..u.rank() {
            let dj = delta_j(&u, &j, &fine, &u.e(i)).map_err(|e| e.to_string())?;
            let r = fine.restrict_to_bold(&bold, &dj).map_err(|e| format!("({t},{n}) e{}: {e}", i + 1))?;
            out.push(format!("({t},{n}) e{}: {} terms", i + 1, r.len()));
        }
    }
    Ok(out.join(", "))
}

fn c4_associator_coboundary() -> Outcome {
    let mut out = Vec::new();
    for (t, n) in [(A1, 3), (A1, 5), (A2, 5)] {
        let u = uqb(t, n);
        let j = build_twist_j(&u);
        let bold = IdempotentAlgebra::new(u.clone(), u.n());
        let phi = closed_form_phi(&u, &bold);
        if t == A1 {
            let fine = IdempotentAlgebra::new(u.clone(), u.m());
            let dj = coboundary_dj(&fine, &j).map_err(|e| e.to_string())?;
            ensure(dj == fine.expand_from_bold(&phi.value), || format!("({t},{n}) tensor route differs"))?;
        }
        let count = coboundary_matches_phi(&u, &j, &phi).map_err(|m| format!("({t},{n}) {m:?}"))?;
        out.push(format!("({t},{n}) {count} triples"));
    }
    Ok(out.join(", "))
}

fn quasi_bialgebra(t: CartanType, n: i64) -> Result<(), String> {
    let u = uqb(t, n);
    let j = build_twist_j(&u);
    let tw = TwistedAq::new(&u, &j).map_err(|e| e.to_string())?;
    let phi = closed_form_phi(&u, &tw.bold);
    let pent = pentagon_check(&tw.bold, &phi.value, |b| tw.delta_basis(b)).map_err(|e| e.to_string())?;
    ensure(pent.is_ok(), || format!("({t},{n}) pentagon residual"))?;
    for (name, x) in tw.generators() {
        let qc = tw.quasi_coassoc_check(&x, &phi.value).map_err(|e| e.to_string())?;
        ensure(qc.is_ok(), || format!("({t},{n}) quasi-coassociativity fails on {name}"))?;
    }
    Ok(())
}

fn c5_quasi_bialgebra() -> Outcome {
    quasi_bialgebra(A1, 3)?;
    quasi_bialgebra(A2, 5)?;
    Ok("pentagon and quasi-coassociativity on generators at (A1,3), (A2,5)".into())
}

fn c6_presentation() -> Outcome {
    let mut out = Vec::new();
    for (t, n) in [(A1, 3), (A2, 5)] {
        let u = uqb(t, n);
        let r = gamma_presentation_check(&u).map_err(|f| format!("{f:?}"))?;
        let expected = (n as u128).pow(u.rank() as u32) * (n as u128).pow(u.datum().dim_g as u32);
        ensure(r.spanning_count == expected && expected == u.dimension(), || {
            format!("({t},{n}) spanning {} vs {expected}", r.spanning_count)
        })?;
        out.push(format!(
            "({t},{n}) {} identities, span {}",
            r.conjugation_identities + r.composition_identities + r.coherence_identities,
            r.spanning_count
        ));
    }
    Ok(out.join(", "))
}

/// Every 2-cochain at n=3, mapped through d.
fn all_coboundaries_n3() -> HashSet<Vec<u32>> {
    let mut set = HashSet::new();
    for code in 0..3u32.pow(9) {
        let mut c = code;
        let values: Vec<u32> = (0..9)
            .map(|_| {
                let v = c % 3;
                c /= 3;
                v
            })
            .collect();
        set.insert(coboundary(&AdditiveCochain { n: 3, degree: 2, values }).values);
    }
    set
}

fn c7_cocycle() -> Outcome {
    let mut out = Vec::new();
    let mut omega3 = None;
    for (t, n) in [(A1, 3), (A1, 5), (A2, 5)] {
        let u = uqb(t, n);
        let bold = IdempotentAlgebra::new(u.clone(), u.n());
        let phi = closed_form_phi(&u, &bold);
        for i in 0..u.rank() {
            let w = restrict_phi(&bold, &phi.value, i).map_err(|e| e.to_string())?;
            ensure(is_cocycle(&w), || format!("({t},{n}) coordinate {i} is not a cocycle"))?;
            let v = is_coboundary(&w).map_err(|e| e.to_string())?;
            ensure(!v.is_trivial(), || format!("({t},{n}) coordinate {i} is a coboundary"))?;
            if n == 3 {
                omega3 = Some(w.clone());
            }
            out.push(format!("({t},{n},{i})"));
        }
    }
    let omega = omega3.expect("n=3 instance");
    let image = all_coboundaries_n3();
    ensure(!image.contains(&omega.values), || "brute force finds a primitive".into())?;
    // agreement on shifted classes k·ω + dμ
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for trial in 0..30 {
        use rand::Rng;
        let k = trial % 3;
        let mu = AdditiveCochain {
            n: 3,
            degree: 2,
            values: (0..9).map(|_| rng.gen_range(0..3)).collect(),
        };
        let dm = coboundary(&mu);
        let w = AdditiveCochain::from_fn(3, 3, |x| {
            let idx = ((x[0] * 3 + x[1]) * 3 + x[2]) as usize;
            (k * omega.values[idx] + dm.values[idx]) as i64
        });
        let snf = is_coboundary(&w).map_err(|e| e.to_string())?.is_trivial();
        let brute = image.contains(&w.values);
        ensure(snf == brute && brute == (k == 0), || format!("trial {trial}: snf {snf}, brute {brute}"))?;
    }
    Ok(format!("nontrivial at {}; brute force over 3^9 cochains agrees", out.join(" ")))
}

fn c8_double() -> Outcome {
    let d = build_double(&uqb(A1, 3)).map_err(|e| e.to_string())?;
    let g = identify_generators(&d);
    ensure(d.dimension() == 6561, || format!("dimension {}", d.dimension()))?;
    all_hold(&check_generators(&d, &g))?;
    let beta = Bicharacter::for_double(&d);
    ensure(beta.cocycle_identity().is_ok(), || "bicharacter cocycle identity".into())?;
    all_hold(&check_twist(&d, &g, &beta).map_err(|e| e.to_string())?)?;
    Ok("Δ_* formulas, K' central, twisted coproducts match".into())
}

fn c9_r_matrix() -> Outcome {
    let d = build_double(&uqb(A1, 3)).map_err(|e| e.to_string())?;
    let g = identify_generators(&d);
    all_hold(&r_matrix_check(&d, &g).map_err(|e| e.to_string())?)?;
    Ok("RΔ(x) = Δ^op(x)R for e, f, K, K'".into())
}

fn corrupted_phi(phi: &Associator, bold: &IdempotentAlgebra, index: usize) -> Associator {
    let mut diag = phi.diag.clone();
    diag.exps[index] = (diag.exps[index] + diag.order / 3) % diag.order;
    Associator {
        value: diag.to_tensor(bold),
        diag,
    }
}

fn c10_negative_controls() -> Outcome {
    // corrupted straightening rule (A2): E12·e1 with the wrong coefficient
    let a2 = uqb(A2, 5);
    let gens: Vec<Monomial> = a2.generator_monomials();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let pool: Vec<Monomial> = (0..200).map(|_| a2.random_low_degree_monomial(&mut rng, 6)).collect();
    ensure(associativity_probe(&*a2, &gens, &pool, 100, 3).is_ok(), || "clean A2 probe".into())?;
    let mut rw = standard_rewrite_system(A2, 5).map_err(|e| e.to_string())?;
    let f = rw.field();
    rw.set_rule(StraighteningRule {
        later: 1,
        earlier: 0,
        rhs: vec![([1, 1, 0], f.zeta_pow(-2))],
    });
    let bad = Uqb::with_rewrite(A2, 5, rw);
    ensure(associativity_probe(&bad, &gens, &pool, 100, 3).is_err(), || "corrupted rule not caught".into())?;

    // corrupted associator coefficient (A1, n=3): both the coboundary
    // comparison and the quasi-bialgebra identities reject it
    let u = uqb(A1, 3);
    let j = build_twist_j(&u);
    let tw = TwistedAq::new(&u, &j).map_err(|e| e.to_string())?;
    let phi = closed_form_phi(&u, &tw.bold);
    let s = phi.diag.space.size();
    let index = 1 + s + 2 * s * s; // labels (1, 1, 2)
    let bad_phi = corrupted_phi(&phi, &tw.bold, index);
    ensure(coboundary_matches_phi(&u, &j, &bad_phi).is_err(), || "dJ comparison missed corruption".into())?;
    let pent = pentagon_check(&tw.bold, &bad_phi.value, |b| tw.delta_basis(b)).map_err(|e| e.to_string())?;
    let mut qc_caught = false;
    for (_, x) in tw.generators() {
        qc_caught |= tw.quasi_coassoc_check(&x, &bad_phi.value).map_err(|e| e.to_string())?.is_err();
    }
    ensure(pent.is_err() || qc_caught, || "pentagon and quasi-coassociativity missed corruption".into())?;

    // determinism of structured reports
    let opts = VerifyOptions {
        seed: 42,
        ..Default::default()
    };
    let r1 = run_verification(A1, 3, &opts).map_err(|e| e.to_string())?.to_json();
    let r2 = run_verification(A1, 3, &opts).map_err(|e| e.to_string())?.to_json();
    ensure(r1 == r2, || "reports differ between runs".into())?;
    Ok(format!(
        "rule and Φ corruptions caught (pentagon {}, quasi-coassoc {}); reports byte-identical",
        if pent.is_err() { "fails" } else { "holds" },
        if qc_caught { "fails" } else { "holds" }
    ))
}

fn main() {
    let criteria: Vec<(&str, fn() -> Outcome, u64)> = vec![
        ("dimension of A_q", c1_dimension_aq, 31),
        ("dimension of u_q(b)", c2_dimension_uqb, 10),
        ("twisted coproduct in A_q⊗A_q", c3_twisted_coproduct, 60),
        ("coboundary of J equals Φ", c4_associator_coboundary, 300),
        ("pentagon and quasi-coassociativity", c5_quasi_bialgebra, 300),
        ("presentation of u_q(b) over A_q", c6_presentation, 60),
        ("restricted 3-cocycle non-trivial", c7_cocycle, 60),
        ("double: Δ_*, centrality, bicharacter twist", c8_double, 300),
        ("double: R-matrix intertwiner", c9_r_matrix, 600),
        ("negative controls and determinism", c10_negative_controls, 600),
    ];
    let mut failures = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(*limit);
        let (tag, msg) = match (&result, in_time) {
            (Ok(m), true) => ("PASS", m.clone()),
            (Ok(m), false) => ("FAIL", format!("over time limit: {m}")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if tag == "FAIL" {
            failures += 1;
        }
        println!(
            "criterion {:>2} {tag} {name} [{:.2}s / {limit}s] {msg}",
            i + 1,
            elapsed.as_secs_f64()
        );
    }
    if failures > 0 {
        println!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 10 acceptance criteria passed");
}
