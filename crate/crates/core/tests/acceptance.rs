//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Every comparison is exact (integer or field arithmetic), so the pinned
//! tolerance is zero throughout. Runtime budgets are reported beside each
//! line but not enforced, since debug builds run several times slower.

mod common;

use std::io::Write;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use segre::arith::{PrimeField, RationalField};
use segre::frobenius::{
    fedder_cech_agreement, fedder_general, fedder_principal, frobenius_closure_member,
    frobenius_injective_window, random_hypersurface, CechContext,
};
use segre::graded::{a_invariant_ci, hadamard, segre_presentation, HilbertSeries, RingSpec};
use segre::local_cohomology::{a_invariant_segre, is_cm_segre, lc_dim_oracle, lc_table_ci};
use segre::poly::Ideal;
use segre::qdivisor::{floor_identity_check, riemann_roch_space, IntDivisorP1, P1Point, QDivisorP1};

/// Exact comparisons only.
const TOLERANCE: i64 = 0;
const SEED: u64 = 0x5e97e;

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn weighted_hypersurface(p: u32) -> RingSpec {
    let (x, y) = (3 * p, 2 * p);
    RingSpec::with_relations(p, &[("x", x), ("y", y), ("z", 6)], &[&format!("x^2+y^3-z^{p}")]).unwrap()
}

fn plane(p: u32) -> RingSpec {
    RingSpec::polynomial(p, &[("u", 1), ("v", 1)]).unwrap()
}

fn a_invariants() -> Check {
    let r = common::ring("x2y3z7_w21_14_6.ring");
    let s = common::ring("u4v5w5_w5_4_4.ring");
    let (ar, as_) = (a_invariant_ci(&r).map_err(err)?, a_invariant_ci(&s).map_err(err)?);
    ensure(ar == 1 && as_ == 7, || format!("a(R)={ar}, a(S)={as_}"))?;
    for p in [7u32, 11, 13] {
        let a = a_invariant_ci(&weighted_hypersurface(p)).map_err(err)?;
        ensure(a == p as i64 - 6, || format!("p={p}: a={a}, expected {}", p as i64 - 6))?;
    }
    Ok("a(R)=1, a(S)=7, a=p-6 for p in {7,11,13}".into())
}

fn kunneth_cm() -> Check {
    let r = common::ring("x2y3z7_w21_14_6.ring");
    let s = common::ring("u4v5w5_w5_4_4.ring");
    let v = is_cm_segre(&r, &s).map_err(err)?;
    let a = a_invariant_segre(&r, &s).map_err(err)?;
    ensure(v.cohen_macaulay && a == -5, || format!("cm={}, a={a}", v.cohen_macaulay))?;
    let bad = is_cm_segre(&common::ring("x2y3_minus_z7_w21_14_6.ring"), &plane(7)).map_err(err)?;
    ensure(!bad.cohen_macaulay, || "non-CM pair reported CM".into())?;
    let w = bad.witness.ok_or("no witness")?;
    ensure(w.k == 2 && w.dimension > 0, || format!("witness k={} dim={}", w.k, w.dimension))?;
    Ok(format!("CM with a=-5; non-CM witness k=2 at degree {} via {}", w.degree, w.term))
}

fn supports() -> Check {
    let cases = [
        ("x2y3z7_w21_14_6.ring", vec![1], [0, 1, 2, 5, 6, 8]),
        ("u4v5w5_w5_4_4.ring", vec![2, 3, 7], [1, 2, 3, 4, 6, 7]),
    ];
    let mut lines = Vec::new();
    for (name, expected, samples) in cases {
        let ring = common::ring(name);
        let top = lc_table_ci(&ring).map_err(err)?;
        let support = top.entry(2).support_in(0, 60);
        ensure(support == expected, || format!("{name}: dual support {support:?}"))?;
        let ctx = CechContext::with_default_sop(ring.clone()).map_err(err)?;
        for n in samples {
            let oracle = lc_dim_oracle(&ring, ctx.sop(), n, 40).map_err(err)?;
            let dual = top.entry(2).value_at(n);
            ensure(oracle.dimension == dual, || {
                format!("{name}: degree {n} oracle {} vs dual {dual}", oracle.dimension)
            })?;
        }
        lines.push(format!("{expected:?}"));
    }
    Ok(format!("supports {} confirmed by the Čech oracle at 6 degrees each", lines.join(" and ")))
}

fn frobenius_tests() -> Check {
    let cusp = common::ring("x2y3z3_char2.ring");
    let f = &cusp.relations()[0];
    ensure(!fedder_principal(f).map_err(err)?, || "cusp reported F-pure".into())?;
    let ideal = Ideal::parse(cusp.ring(), "y, z").map_err(err)?;
    let x = cusp.ring().parse("x").map_err(err)?;
    let verdict = frobenius_closure_member(&cusp, &ideal, &x, 3).map_err(err)?;
    ensure(matches!(verdict, segre::frobenius::FrobeniusVerdict::Confirmed { e: 1 }), || {
        format!("closure verdict {verdict}")
    })?;
    let pres = segre_presentation(&cusp, &common::ring("uv_w2_char2.ring"), 8).map_err(err)?;
    let pure = fedder_general(&pres.relation_ideal().map_err(err)?).map_err(err)?;
    ensure(pure, || "Segre presentation not F-pure".into())?;
    Ok("cusp not F-pure, x in (y,z)^F at e=1, Segre presentation F-pure".into())
}

fn segre_hadamard() -> Check {
    let cusp = common::ring("x2y3z3_char2.ring");
    let even = common::ring("uv_w2_char2.ring");
    let pres = segre_presentation(&cusp, &even, 8).map_err(err)?;
    let degrees = pres.generator_degrees();
    ensure(degrees == vec![2; 4] && pres.relations.len() == 1, || {
        format!("generators {degrees:?}, {} relations", pres.relations.len())
    })?;
    let oracle = HilbertSeries::complete_intersection(&[2, 2, 2, 2], &[4]).map_err(err)?.coefficients(40);
    let product = hadamard(&cusp.hilbert_series().map_err(err)?, &even.hilbert_series().map_err(err)?, 40);
    let presented = pres.presentation_ring().map_err(err)?.hilbert_series().map_err(err)?.coefficients(40);
    let worst = (0..=40)
        .map(|n| (product[n] - oracle[n]).abs().max((presented[n] - oracle[n]).abs()))
        .max()
        .unwrap_or(0);
    ensure(worst <= TOLERANCE, || format!("coefficient deviation {worst}"))?;
    Ok("4 generators of degree 2, 1 relation; Hadamard = (1-t^4)/(1-t^2)^4 on [0,40]".into())
}

fn section_rings() -> Check {
    let mut parts = Vec::new();
    for (p, degrees, relation) in [(7u32, [6, 14, 21], "z^7-y^3-x^2"), (5, [6, 10, 15], "z^5-y^3-x^2")] {
        let run = common::run_in_process(&["verify-remark", "--p", &p.to_string(), "--k", "1"]);
        ensure(run.code == 0, || format!("p={p}: exit {} {}", run.code, run.stderr))?;
        let v = common::json(&run);
        ensure(v["generator_degrees"] == serde_json::json!(degrees), || {
            format!("p={p}: degrees {}", v["generator_degrees"])
        })?;
        ensure(v["relations"] == serde_json::json!([relation]), || format!("p={p}: relations {}", v["relations"]))?;
        ensure(v["generators_match"] == true, || format!("p={p}: generators differ from closed forms"))?;
        parts.push(format!("p={p}: {degrees:?}, {relation}"));
    }
    Ok(parts.join("; "))
}

fn injectivity() -> Check {
    for name in ["x2y3z7_w21_14_6.ring", "u4v5w5_w5_4_4.ring"] {
        let ctx = CechContext::with_default_sop(common::ring(name)).map_err(err)?;
        let report = frobenius_injective_window(&ctx, -25..=-5, 1).map_err(err)?;
        ensure(report.injective, || format!("{name}: F not injective on [-25,-5]"))?;
    }
    let cusp = common::ring("x2y3z3_char2.ring");
    let a = a_invariant_ci(&cusp).map_err(err)?;
    let ctx = CechContext::with_default_sop(cusp).map_err(err)?;
    let report = frobenius_injective_window(&ctx, a..=a, 1).map_err(err)?;
    ensure(!report.injective, || "cusp socle degree reported injective".into())?;
    Ok(format!("injective on [-25,-5] for R and S; cusp kernel at socle degree {a}"))
}

fn random_q_divisor(rng: &mut ChaCha8Rng) -> QDivisorP1<RationalField> {
    let mut points: Vec<P1Point<BigRational>> = Vec::new();
    let count = rng.gen_range(1..=4);
    while points.len() < count {
        let point = if rng.gen_bool(0.2) {
            P1Point::Infinity
        } else {
            P1Point::Finite(BigRational::new(rng.gen_range(-20i64..=20).into(), rng.gen_range(1i64..=5).into()))
        };
        if !points.contains(&point) {
            points.push(point);
        }
    }
    let terms = points
        .into_iter()
        .map(|pt| {
            let c = BigRational::new(rng.gen_range(-30i64..=30).into(), rng.gen_range(1i64..=12).into());
            (pt, c)
        })
        .collect();
    QDivisorP1::new(RationalField, terms).unwrap()
}

fn random_int_divisor(rng: &mut ChaCha8Rng, field: &PrimeField) -> IntDivisorP1<PrimeField> {
    let count = rng.gen_range(1..=4u32);
    let mut terms = vec![(P1Point::Infinity, rng.gen_range(-3i64..=8))];
    for i in 1..count {
        terms.push((P1Point::Finite(i * 11 % 97), rng.gen_range(-3i64..=8)));
    }
    IntDivisorP1::new(*field, terms).unwrap()
}

fn properties() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for i in 0..500 {
        let d = random_q_divisor(&mut rng);
        if let Some(n) = (-100..=100).find(|&n| !floor_identity_check(&d, n)) {
            return Err(format!("floor identity fails for divisor #{i} {d} at n={n}"));
        }
    }
    let field = PrimeField::new(97).map_err(err)?;
    for i in 0..300 {
        let e = random_int_divisor(&mut rng, &field);
        let basis = riemann_roch_space(&e);
        let expected = (e.degree() + 1).max(0);
        ensure(basis.len() as i64 == expected && basis.iter().all(|g| g.in_space(&e)), || {
            format!("divisor #{i} {e}: {} sections, expected {expected}", basis.len())
        })?;
    }
    let corpus = common::ring_corpus();
    for name in &corpus {
        let ring = common::ring(name);
        let hs = ring.hilbert_series().map_err(err)?;
        if let Some(n) = (0..=30).find(|&n| hs.coefficient(n) != ring.dimension_by_enumeration(n) as i64) {
            return Err(format!("{name}: series and enumeration differ at degree {n}"));
        }
    }
    let primes = [2u32, 3, 5];
    for i in 0..10 {
        let p = primes[i % primes.len()];
        let ring = random_hypersurface(&mut rng, p).map_err(err)?;
        let (fedder, cech) = fedder_cech_agreement(&ring).map_err(err)?;
        ensure(fedder == cech, || {
            format!("p={p} f={}: Fedder {fedder}, Čech {cech}", ring.relations()[0])
        })?;
    }
    Ok(format!(
        "500 floor identities x 201 n, 300 Riemann-Roch spaces, {} corpus rings on [0,30], 10 Fedder/Čech agreements",
        corpus.len()
    ))
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 8] = [
        ("a-invariants", 1, a_invariants),
        ("Künneth / Cohen-Macaulay", 1, kunneth_cm),
        ("local cohomology supports", 10, supports),
        ("Frobenius tests", 5, frobenius_tests),
        ("Segre presentation", 5, segre_hadamard),
        ("section ring reproduction", 20, section_rings),
        ("windowed Frobenius injectivity", 30, injectivity),
        ("property suites", 60, properties),
    ];
    let mut failed = Vec::new();
    for (i, (title, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let over = if elapsed > Duration::from_secs(*budget) { " (over budget)" } else { "" };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d.clone()),
            Err(d) => ("FAIL", d.clone()),
        };
        // Written to the stderr handle directly so the lines survive libtest's capture.
        let _ = writeln!(
            std::io::stderr(),
            "criterion {}: {tag} [{title}] tol={TOLERANCE} {:.2}s/{budget}s{over} — {detail}",
            i + 1,
            elapsed.as_secs_f64()
        );
        if outcome.is_err() {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
