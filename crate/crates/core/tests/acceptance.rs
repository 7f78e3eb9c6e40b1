//! Acceptance suite. Each criterion prints one line and the process exits
//! nonzero if any criterion fails or overruns its time budget.

mod common;

use std::time::{Duration, Instant};

use bilin_core::bilin::{
    bilin_dims, bilin_tangent, degenerate_point, factor_membership, main_component_point, validate_bilin, BilinPoint,
};
use bilin_core::cases222::{enumerate_222, named_tensor, points_over_pair, quot_points_122, CaseLabel, Named};
use bilin_core::exactalg::{charpoly, evaluate_param, gaussian_binomial, Field, Matrix};
use bilin_core::modcore::FramedModule;
use bilin_core::quot::{degenerate_grassmannian_check, hom_km_univariate, quot2_limit_family, quot_tangent, LimitBranch};
use bilin_core::tensorlab::{classify_2x2x2, secant_dimension, OrbitLabel, Tensor3};
use rand::Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e<E: std::fmt::Debug>(err: E) -> String {
    format!("{err:?}")
}

fn criterion_1() -> Outcome {
    let mut rows = 0;
    for n in 1..=2usize {
        for d in 2..=3usize {
            for r1 in (2..=4usize).filter(|&r| r >= d) {
                for r2 in (2..=4usize).filter(|&r| r >= d) {
                    let rep = bilin_dims(n, d, r1, r2).map_err(e)?;
                    let main = n * d + (r1 - 1) * d + (r2 - 1) * d;
                    let deg = (r1 - d) * d + (r2 - d) * d + (d * d - d) * d;
                    let count = (n as i64) < (d * d) as i64 - 3 * d as i64 + 2;
                    ensure(rep.main_dim == main, format!("main_dim at {:?}", (n, d, r1, r2)))?;
                    ensure(rep.degenerate_dim == Some(deg), format!("degenerate_dim at {:?}", (n, d, r1, r2)))?;
                    ensure(rep.reducible_by_count == count, format!("reducible_by_count at {:?}", (n, d, r1, r2)))?;
                    rows += 1;
                }
            }
        }
    }
    Ok(format!("{rows} grid rows exact"))
}

fn criterion_2() -> Outcome {
    let mut rng = common::rng(2024);
    let mut count = 0;
    for field in common::fields() {
        for _ in 0..30 {
            let d = rng.gen_range(1..=3);
            let r = rng.gen_range(1..=3);
            let p = common::module_n1(field, d, r, &mut rng);
            let t = quot_tangent(&p).map_err(e)?.dim;
            let h = hom_km_univariate(&p).map_err(e)?.dim;
            ensure(t == d * r && h == d * r, format!("{field} d={d} r={r}: tangent {t}, hom {h}"))?;
            count += 1;
        }
    }
    ensure(count >= 50, "too few instances")?;
    Ok(format!("{count} instances over Q and F5"))
}

fn canonical_main(field: Field) -> BilinPoint {
    let pts = vec![vec![field.zero()], vec![field.one()]];
    main_component_point(&pts, Matrix::identity(field, 2), Matrix::identity(field, 2)).unwrap()
}

fn canonical_degenerate(field: Field) -> BilinPoint {
    let pi = Matrix::from_i64(field, &[&[1, 0, 0, 0], &[0, 1, 0, 0]]);
    degenerate_point(1, Matrix::identity(field, 2), Matrix::identity(field, 2), pi).unwrap()
}

fn criterion_3() -> Outcome {
    let q = Field::Rational;
    let mut rng = common::rng(3);
    let main = canonical_main(q);
    let dim = bilin_tangent(&main).map_err(e)?.dim;
    ensure(dim == 6, format!("main point tangent {dim}"))?;
    let deg = canonical_degenerate(q);
    let ddim = bilin_tangent(&deg).map_err(e)?.dim;
    ensure(ddim >= 4, format!("degenerate point tangent {ddim}"))?;
    for _ in 0..20 {
        let g: Vec<Matrix> = (0..3).map(|_| common::invertible(q, 2, &mut rng)).collect();
        let m = bilin_tangent(&main.transformed(&g[0], &g[1], &g[2]).map_err(e)?).map_err(e)?.dim;
        ensure(m == dim, format!("main point gauge transform gave {m}"))?;
        let t = bilin_tangent(&deg.transformed(&g[0], &g[1], &g[2]).map_err(e)?).map_err(e)?.dim;
        ensure(t == ddim, format!("degenerate point gauge transform gave {t}"))?;
    }
    Ok(format!("main 6, degenerate {ddim}, stable under 20 gauge transforms"))
}

fn criterion_4() -> Outcome {
    let rep = bilin_dims(1, 3, 3, 3).map_err(e)?;
    ensure(rep.main_dim == 15 && rep.degenerate_dim == Some(18), "dimension pair at (1,3,3,3)")?;
    ensure(rep.reducible_by_count, "reducible_by_count at (1,3,3,3)")?;
    let s = secant_dimension(Field::Rational, 3, 3, 5, 0).map_err(e)?;
    ensure(s.bound == 20 && s.ambient == 26 && !s.fills_ambient, format!("secant report {s:?}"))?;
    Ok(format!("18 > 15; bound 20 < 26, terracini {}", s.terracini_dim))
}

fn criterion_5() -> Outcome {
    let s = secant_dimension(Field::Rational, 2, 2, 5, 0).map_err(e)?;
    ensure(s.per_trial.len() == 5 && s.per_trial.iter().all(|&x| x == 7), format!("per trial {:?}", s.per_trial))?;
    ensure(s.terracini_dim == 7 && s.ambient == 7 && s.fills_ambient, "report does not fill")?;
    Ok("7 in all 5 trials".into())
}

fn fixed(field: Field, name: &str) -> Tensor3 {
    match named_tensor(field, name).unwrap() {
        Named::Fixed(t) => t,
        Named::Family(_) => panic!("{name} is a family"),
    }
}

fn criterion_6() -> Outcome {
    let f5 = Field::prime(5).unwrap();
    let expect = [
        ("mu1", 2, OrbitLabel::Generic),
        ("mu2", 3, OrbitLabel::WType),
        ("mu3", 2, OrbitLabel::NonConcise(0)),
        ("mu4", 2, OrbitLabel::NonConcise(1)),
    ];
    for field in [Field::Rational, f5] {
        for (name, rank, label) in expect {
            let c = classify_2x2x2(&fixed(field, name)).map_err(e)?;
            ensure(c.rank == rank && c.border_rank == 2 && c.label == label, format!("{name} over {field}: {c:?}"))?;
            let concise = matches!(label, OrbitLabel::Generic | OrbitLabel::WType);
            ensure(c.concise.iter().all(|&x| x) == concise, format!("{name} conciseness"))?;
        }
    }
    let mut rng = common::rng(6);
    for s in 0..1000 {
        let (name, _, label) = expect[s % 4];
        let g: Vec<Matrix> = (0..3).map(|_| common::invertible(f5, 2, &mut rng)).collect();
        let c = classify_2x2x2(&fixed(f5, name).change_basis(&g[0], &g[1], &g[2])).map_err(e)?;
        ensure(c.label == label && c.border_rank == 2, format!("orbit sample {s} of {name}"))?;
    }
    let f2 = Field::prime(2).unwrap();
    for code in 0..256u32 {
        let t = Tensor3::from_fn(f2, [2, 2, 2], |i, j, k| f2.from_i64(((code >> ((i * 2 + j) * 2 + k)) & 1) as i64));
        ensure(classify_2x2x2(&t).map_err(e)?.border_rank <= 2, format!("F2 tensor {code}"))?;
    }
    Ok("named classes exact, 1000 orbit samples, 256 F2 tensors".into())
}

fn two_point_support(m: &FramedModule) -> bool {
    let mut distinct = false;
    for x in m.actions() {
        let (roots, split) = charpoly(x).roots();
        if !split {
            return false;
        }
        distinct |= roots.len() == 2;
    }
    distinct
}

fn criterion_7() -> Outcome {
    let f5 = Field::prime(5).unwrap();
    for field in [Field::Rational, f5] {
        for (fam, base) in [("mu2_t", "mu2"), ("mu3_t", "mu3"), ("mu4_t", "mu4")] {
            let Named::Family(f) = named_tensor(field, fam).map_err(e)? else {
                return Err(format!("{fam} is not a family"));
            };
            ensure(evaluate_param(&f, &field.zero()) == fixed(field, base), format!("{fam} at 0 over {field}"))?;
            if field == f5 {
                for t in 1..=3 {
                    let c = classify_2x2x2(&f.evaluate(&f5.from_i64(t))).map_err(e)?;
                    ensure(c.rank == 2, format!("{fam} at t={t} has rank {}", c.rank))?;
                }
            }
        }
    }
    let m = |rows: &[&[i64]]| Matrix::from_i64(f5, rows);
    let bases = [
        (LimitBranch::DistinctSupport, FramedModule::new(vec![m(&[&[1, 0], &[0, 3]])], m(&[&[1, 0], &[1, 1]])).unwrap()),
        (LimitBranch::Reduced, FramedModule::new(vec![m(&[&[2, 0], &[0, 2]])], m(&[&[1, 0, 1], &[0, 1, 1]])).unwrap()),
        (LimitBranch::Curvilinear, FramedModule::new(vec![m(&[&[4, 0], &[1, 4]])], m(&[&[1, 0], &[0, 0]])).unwrap()),
        (
            LimitBranch::Curvilinear,
            FramedModule::new(vec![m(&[&[0, 0], &[1, 0]]), m(&[&[2, 0], &[3, 2]])], m(&[&[1], &[0]])).unwrap(),
        ),
    ];
    for (branch, p) in &bases {
        let fam = quot2_limit_family(p).map_err(e)?;
        ensure(fam.branch == *branch, format!("expected {branch:?}, got {:?}", fam.branch))?;
        ensure(fam.at(&f5.zero()).map_err(e)? == *p, format!("{branch:?}: family misses its base point"))?;
        for t in 1..5 {
            let q = fam.at(&f5.from_i64(t)).map_err(e)?;
            ensure(bilin_core::modcore::validate_framed(&q).is_valid(), format!("{branch:?}: invalid at t={t}"))?;
            ensure(two_point_support(&q), format!("{branch:?}: support at t={t} is not two points"))?;
        }
    }
    Ok("families degenerate to mu2, mu3, mu4; three Quot_2 branches split".into())
}

fn criterion_8() -> Outcome {
    let mut parts = Vec::new();
    for q in [2u64, 3] {
        for (d, r) in [(1, 2), (2, 3), (2, 4)] {
            let rep = degenerate_grassmannian_check(d, r, q, 1 << 24).map_err(e)?;
            let gb = gaussian_binomial(d as u32, r as u32, q).map_err(e)?;
            ensure(rep.matches && rep.gaussian_binomial == gb, format!("Gr({d},{r}) over F{q}: {} vs {gb}", rep.points))?;
            parts.push(format!("F{q} Gr({d},{r})={gb}"));
        }
    }
    Ok(parts.join(", "))
}

fn criterion_9() -> Outcome {
    let f3 = Field::prime(3).unwrap();
    let mut rng = common::rng(9);
    // constructed points
    let mut constructed = vec![canonical_main(Field::Rational), canonical_degenerate(Field::Rational), canonical_main(f3)];
    for _ in 0..10 {
        let a1 = common::invertible(f3, 2, &mut rng);
        let a2 = common::invertible(f3, 2, &mut rng);
        let pi = loop {
            let pi = common::matrix(f3, 2, 4, &mut rng);
            if pi.rank() == 2 {
                break pi;
            }
        };
        constructed.push(degenerate_point(1, a1, a2, pi).map_err(e)?);
    }
    let pts3 = vec![vec![Field::Rational.from_i64(0)], vec![Field::Rational.from_i64(1)], vec![Field::Rational.from_i64(2)]];
    constructed.push(
        main_component_point(&pts3, Matrix::identity(Field::Rational, 3), Matrix::identity(Field::Rational, 3))
            .map_err(e)?,
    );
    for (i, b) in constructed.iter().enumerate() {
        let m = factor_membership(b.m1(), b.m2(), &b.m3().map_err(e)?).map_err(e)?;
        ensure(m.solution_dim == 0, format!("constructed point {i}: Pihat not unique"))?;
        let point = m.point.ok_or(format!("constructed point {i} rejected"))?;
        ensure(point.pihat() == b.pihat(), format!("constructed point {i}: different Pihat"))?;
    }
    // annihilator mismatch
    let q = Field::Rational;
    let zero = Matrix::zeros(q, 2, 2);
    let split = FramedModule::new(vec![zero.clone()], Matrix::identity(q, 2)).unwrap();
    let nil = FramedModule::new(vec![Matrix::from_i64(q, &[&[0, 0], &[1, 0]])], Matrix::from_i64(q, &[&[1, 0, 0, 0], &[0, 0, 0, 0]]))
        .unwrap();
    ensure(!factor_membership(&split, &split, &nil).map_err(e)?.is_member(), "annihilator mismatch accepted")?;
    // dimension obstruction
    let col = Matrix::from_i64(q, &[&[1], &[1]]);
    let m1 = FramedModule::new(vec![Matrix::from_i64(q, &[&[0, 0], &[0, 1]])], col.clone()).unwrap();
    let m2 = FramedModule::new(vec![Matrix::from_i64(q, &[&[0, 0], &[0, 2]])], col.clone()).unwrap();
    ensure(!factor_membership(&m1, &m2, &m1).map_err(e)?.is_member(), "dimension obstruction accepted")?;

    // random instances: half taken from genuine points, half with random Z and Pihat
    let quot = quot_points_122(f3).map_err(e)?;
    let (mut valid, mut invalid) = (0, 0);
    let mut done = 0;
    while done < 200 {
        let m1 = quot[rng.gen_range(0..quot.len())].clone();
        let m2 = quot[rng.gen_range(0..quot.len())].clone();
        let candidate = if done % 2 == 0 {
            let pts = points_over_pair(&m1, &m2).map_err(e)?;
            if pts.is_empty() {
                continue;
            }
            pts[rng.gen_range(0..pts.len())].clone()
        } else {
            let pi = common::matrix(f3, 2, 4, &mut rng);
            if pi.rank() < 2 {
                continue;
            }
            BilinPoint::new(m1, m2, vec![common::matrix(f3, 2, 2, &mut rng)], pi).map_err(e)?
        };
        let m3 = candidate.m3().map_err(e)?;
        let member = factor_membership(candidate.m1(), candidate.m2(), &m3).map_err(e)?;
        let accepted = member.point.as_ref().is_some_and(|p| p.pihat() == candidate.pihat() && p.z() == candidate.z());
        let ok = validate_bilin(&candidate).is_valid();
        ensure(accepted == ok, format!("instance {done}: membership {accepted}, validation {ok}"))?;
        if let Some(p) = &member.point {
            ensure(validate_bilin(p).is_valid(), format!("instance {done}: assembled point invalid"))?;
        }
        if ok {
            valid += 1;
        } else {
            invalid += 1;
        }
        done += 1;
    }
    Ok(format!("{} constructed points, 2 fixtures rejected, 200 F3 instances ({valid} valid, {invalid} invalid)", constructed.len()))
}

fn criterion_10() -> Outcome {
    let c = enumerate_222(2, 1 << 24).map_err(e)?;
    let base = [
        CaseLabel::MainSplit,
        CaseLabel::CyclicNilpotent,
        CaseLabel::Mixed12,
        CaseLabel::Mixed21,
        CaseLabel::TotallyDegenerate,
    ];
    for l in base {
        ensure(c.by_label[l.name()] > 0, format!("no {} points", l.name()))?;
    }
    ensure(c.border_rank_3 == 0, format!("{} border rank 3 points", c.border_rank_3))?;
    ensure(c.violations.is_empty(), format!("violations: {:?}", c.violations))?;
    let counts: Vec<String> = c.by_label.iter().map(|(k, v)| format!("{k}={v}")).collect();
    Ok(format!("{} points: {}", c.total_points, counts.join(" ")))
}

fn main() {
    let criteria: [(fn() -> Outcome, u64); 10] = [
        (criterion_1, 1),
        (criterion_2, 60),
        (criterion_3, 30),
        (criterion_4, 30),
        (criterion_5, 5),
        (criterion_6, 60),
        (criterion_7, 30),
        (criterion_8, 60),
        (criterion_9, 60),
        (criterion_10, 300),
    ];
    let mut failed = 0;
    for (k, (run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let over = elapsed > Duration::from_secs(*budget);
        match (&result, over) {
            (Ok(detail), false) => println!("ACCEPTANCE {}: PASS {detail} ({:.2}s)", k + 1, elapsed.as_secs_f64()),
            (Ok(detail), true) => {
                failed += 1;
                println!("ACCEPTANCE {}: FAIL over budget {budget}s: {detail} ({:.2}s)", k + 1, elapsed.as_secs_f64())
            }
            (Err(why), _) => {
                failed += 1;
                println!("ACCEPTANCE {}: FAIL {why} ({:.2}s)", k + 1, elapsed.as_secs_f64())
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
