//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run alone with `cargo test -p pencils --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use pencils::bounds;
use pencils::constructions;
use pencils::gf::{is_prime, prime_power};
use pencils::incidence;
use pencils::linsys::{self, random_form, seeded_smooth_forms, trial_rng, Strategy, VerifyMode};
use pencils::mpoly::monomial_count;
use pencils::projspace::point_coords_at;
use pencils::smoothness::{brute_is_smooth, quadric_is_smooth, validate_witness, BruteConfig, Oracle, Status};
use pencils::{FieldCtx, HomForm};

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Check);

fn field(q: u64) -> std::result::Result<FieldCtx, String> {
    FieldCtx::with_order(q).map_err(|e| e.to_string())
}

fn ensure(ok: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err(e: pencils::Error) -> String {
    e.to_string()
}

fn c1_conic_net() -> Check {
    let net = constructions::example_f2_conic_net();
    let rep = linsys::verify_all_smooth(&net, Oracle::Auto, VerifyMode::Exhaustive).map_err(err)?;
    ensure(rep.total_members == 7 && rep.smooth_count == 7, format!("{}/{} smooth", rep.smooth_count, rep.total_members))?;
    Ok("7/7 members smooth".into())
}

fn c2_no_smooth_web() -> Check {
    let out = linsys::search_all_smooth(&field(2)?, 2, 2, 3, Strategy::Exhaustive {
        cap: linsys::DEFAULT_SEARCH_CAP,
    })
    .map_err(err)?;
    let smooth = out.smooth_forms.unwrap_or(0);
    ensure(smooth == 28, format!("{smooth} smooth conics"))?;
    ensure(out.candidates_examined == 20475, format!("{} subsets", out.candidates_examined))?;
    ensure(out.valid_candidates == 0 && out.systems.is_empty(), format!("{} valid", out.valid_candidates))?;
    Ok("28 smooth conics, 20475 subsets, 0 all-smooth".into())
}

fn pencil_check(q: u64) -> std::result::Result<(), String> {
    let recipe = constructions::build_pencil(&field(q)?).map_err(err)?;
    let rep = linsys::verify_all_smooth(&recipe.pencil(), Oracle::Auto, VerifyMode::Exhaustive).map_err(err)?;
    ensure(rep.smooth_count == q + 1, format!("q={q}: {}/{} smooth", rep.smooth_count, q + 1))?;
    ensure(
        constructions::verify_determinant_factorization(&recipe).map_err(err)?,
        format!("q={q}: determinant mismatch"),
    )
}

fn c3_odd_pencils() -> Check {
    let orders: Vec<u64> = (3..=199).filter(|&q| q % 2 == 1 && prime_power(q).is_some()).collect();
    for &q in &orders {
        pencil_check(q)?;
    }
    Ok(format!("{} odd prime powers up to 199, all members smooth, determinants match", orders.len()))
}

fn c4_even_pencils() -> Check {
    for q in [2u64, 4, 8, 16, 32, 64, 128, 256] {
        pencil_check(q)?;
    }
    Ok("q = 2..256, all members smooth, det = (t^2+st+cs^2)^2".into())
}

fn c5_threshold() -> Check {
    let t = bounds::theorem_threshold(3, 2);
    ensure(t.threshold_display == "839.3", format!("display {}", t.threshold_display))?;
    ensure(!t.q_passes(839), "839 passes")?;
    ensure(t.q_passes(841), "841 fails")?;
    Ok(format!("threshold ~{}, 839 fails, 841 passes", t.threshold_display))
}

fn c6_identities() -> Check {
    let orders = [2u64, 3, 4, 5, 7];
    let mut done = 0;
    let mut trial = 0u64;
    while done < 200 {
        let q = orders[(trial % 5) as usize];
        let d = 1 + (trial / 5 % 5) as u32;
        let ctx = field(q)?;
        let c = random_form(&ctx, 3, d, &mut trial_rng(6, trial));
        trial += 1;
        if c.is_zero() {
            continue;
        }
        let p = incidence::profile(&c).map_err(err)?;
        p.check_identities().map_err(err)?;
        done += 1;
    }
    Ok("200 random curves, all three identities exact".into())
}

fn c7_cubics() -> Check {
    let mut lines = Vec::new();
    for q in [53u64, 59, 61] {
        let ctx = field(q)?;
        let cubics = seeded_smooth_forms(&ctx, 3, 3, q, 5, 1000).map_err(err)?;
        for c in &cubics {
            let p = incidence::profile(c).map_err(err)?;
            let b = incidence::bound_check(&p);
            ensure(b.t0_bound_ok, format!("q={q} {c}: t0={} below {}", p.t0(), b.lower_t0))?;
            ensure(p.t0() > 0, format!("q={q} {c}: t0=0"))?;
            ensure(b.hasse_weil_ok, format!("q={q} {c}: N={} outside Hasse-Weil", p.n_points))?;
            let line = incidence::find_avoiding_line(c).map_err(err)?;
            let line = line.ok_or_else(|| format!("q={q} {c}: no avoiding line"))?;
            ensure(incidence::line_multiplicity(c, &line) == 0, "avoiding line meets the curve")?;
        }
        lines.push(format!("q={q}"));
    }
    Ok(format!("5 smooth cubics each for {}", lines.join(", ")))
}

fn c8_quartic() -> Check {
    let q = 853;
    ensure(is_prime(q) && bounds::theorem_threshold(3, 2).q_passes(q), "853 does not pass")?;
    let ctx = field(q)?;
    let quartic = seeded_smooth_forms(&ctx, 3, 4, q, 1, 100).map_err(err)?.remove(0);
    let p = incidence::profile(&quartic).map_err(err)?;
    ensure(p.t0() > 0, "t0 = 0")?;
    let line = incidence::find_avoiding_line(&quartic)
        .map_err(err)?
        .ok_or("no avoiding line")?;
    ensure(incidence::line_multiplicity(&quartic, &line) == 0, "avoiding line meets the curve")?;
    Ok(format!("N={}, t0={}, first avoiding line {line}", p.n_points, p.t0()))
}

fn c9_bound_algebra() -> Check {
    ensure((4..=100).all(bounds::curve_threshold_dominates_kaltofen), "slicing comparison fails")?;
    ensure((3..=200).all(bounds::quadratic_step_holds), "quadratic step fails")?;
    ensure((3..=200).all(bounds::side_condition_below_threshold), "side condition fails")?;
    let t2 = bounds::curve_prop_threshold(2);
    ensure(t2.k == 0 && t2.threshold_approx == 0.0 && t2.q_passes(2), "delta=2 threshold is not 0")?;
    Ok("comparison for delta 4..100, auxiliary inequalities for 3..200, delta=2 gives 0".into())
}

fn agree(f: &HomForm) -> std::result::Result<(), String> {
    let a = quadric_is_smooth(f).map_err(err)?;
    let b = brute_is_smooth(
        f,
        BruteConfig {
            bound: Some(2),
            work_cap: pencils::smoothness::DEFAULT_WORK_CAP,
        },
    )
    .map_err(err)?;
    ensure(a.status == b.status, format!("{f}: quadric {:?} vs brute {:?}", a.status, b.status))?;
    for v in [&a, &b] {
        if v.status == Status::Singular {
            let w = v.witness.as_ref().ok_or_else(|| format!("{f}: singular without witness"))?;
            ensure(validate_witness(f, w).map_err(err)?, format!("{f}: witness fails"))?;
        }
    }
    Ok(())
}

fn c10_oracles() -> Check {
    let g2 = field(2)?;
    for i in 0..63 {
        let coeffs = point_coords_at(&g2, 5, i).map_err(err)?;
        agree(&HomForm::from_coeff_vector(&g2, 3, 2, &coeffs).map_err(err)?)?;
    }
    let mut n = 0;
    for q in [3u64, 4, 5] {
        let ctx = field(q)?;
        let mut trial = 0;
        let mut count = 0;
        while count < 500 {
            let nvars = 2 + (trial % 3) as usize;
            let f = random_form(&ctx, nvars, 2, &mut trial_rng(10 + q, trial));
            trial += 1;
            if f.is_zero() {
                continue;
            }
            agree(&f)?;
            count += 1;
        }
        n += count;
    }
    debug_assert_eq!(monomial_count(3, 2), 6);
    Ok(format!("63 conics over GF(2) and {n} random quadrics agree"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("conic net over GF(2)", Duration::from_secs(1), c1_conic_net),
        ("no all-smooth web of conics over GF(2)", Duration::from_secs(10), c2_no_smooth_web),
        ("odd-q quadric pencils", Duration::from_secs(30), c3_odd_pencils),
        ("even-q quadric pencils", Duration::from_secs(10), c4_even_pencils),
        ("threshold boundary", Duration::from_secs(1), c5_threshold),
        ("incidence identities", Duration::from_secs(60), c6_identities),
        ("avoiding lines for cubics", Duration::from_secs(300), c7_cubics),
        ("avoiding line for a quartic over GF(853)", Duration::from_secs(1800), c8_quartic),
        ("bound algebra", Duration::from_secs(1), c9_bound_algebra),
        ("oracle cross-validation", Duration::from_secs(60), c10_oracles),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = run();
        let took = start.elapsed();
        let res = match res {
            Ok(msg) if took > *budget => Err(format!("{msg}; over budget ({budget:?})")),
            other => other,
        };
        match res {
            Ok(msg) => println!("criterion {:>2} PASS  {name}: {msg} [{took:.2?}]", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {msg} [{took:.2?}]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
