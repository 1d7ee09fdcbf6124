//! One line per acceptance criterion. Every criterion is exact; the runtime
//! bounds are the only tolerances and are pinned below.

mod common;

use std::time::{Duration, Instant};

use common::{random_dense, random_log_m, random_times, random_tuple};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use seqent::checks::{
    check_distance_uniqueness, check_part_structure, check_shiftability, default_r2_jset, verify_r1, verify_r2,
};
use seqent::construct::{build_log_infty, build_log_m, minimal_dense_schedule, minimal_schedule};
use seqent::entropy::{h_star_lower_bound, HStarConfig};
use seqent::flower::{compose, cross_petal_check, declared_value, value_calculus, DeclaredFamily, PetalSystem, Value};
use seqent::independence::{
    is_independence_set, shift_property_check, ExhaustionCertificate, Prepared, SearchConfig, Strategy, Verdict,
};
use seqent::{BigInt, NeighborhoodSpec, Symbol, Trajectory};

const CAP: u128 = 1 << 24;
const R1_LIMIT: Duration = Duration::from_secs(10);
const R2_LIMIT: Duration = Duration::from_secs(300);
const SHIFT_LIMIT: Duration = Duration::from_secs(300);

fn log_m(m: u32, kmax: u32) -> Trajectory<BigInt> {
    build_log_m(m, kmax, &minimal_schedule(m, kmax).unwrap()).unwrap()
}

fn end_of(traj: &Trajectory<BigInt>, k: u32) -> BigInt {
    traj.log_m_manifest().unwrap().block(k).unwrap().end.clone()
}

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn r1() -> Outcome {
    for m in [2, 3] {
        let traj = log_m(m, 3);
        for k in 1..=3 {
            let start = Instant::now();
            let r = verify_r1(k, &traj, CAP).map_err(|e| e.to_string())?;
            let took = start.elapsed();
            if !r.passed() {
                return Err(format!("m={m} k={k}: {}", r.verdict));
            }
            if took > R1_LIMIT {
                return Err(format!("m={m} k={k} took {took:?}"));
            }
        }
    }
    Ok("N(k) independent for m=2,3 and k=1..3".into())
}

fn r2() -> Outcome {
    let traj = log_m(2, 3);
    let cut = traj.truncated(&end_of(&traj, 3));
    let start = Instant::now();
    let jset = default_r2_jset::<BigInt>(2);
    let reports = verify_r2(&jset, 5, &cut, &SearchConfig::default()).map_err(|e| e.to_string())?;
    let mut worst = 0;
    for (j, r) in jset.iter().zip(&reports) {
        if !r.passed() {
            return Err(format!("j={j}: {}", r.verdict));
        }
        let cert = ExhaustionCertificate::<BigInt>::parse(&r.attachments[0]).map_err(|e| e.to_string())?;
        let prep = Prepared::new(&[NeighborhoodSpec::head(0, 1), NeighborhoodSpec::new(j.clone(), 1)], &cut)
            .map_err(|e| e.to_string())?;
        if cert.died_at > 4 || !cert.replay(&prep, &SearchConfig::default()).map_err(|e| e.to_string())? {
            return Err(format!("j={j}: certificate dies at {} or does not replay", cert.died_at));
        }
        worst = worst.max(cert.died_at);
    }
    let took = start.elapsed();
    if took > R2_LIMIT {
        return Err(format!("took {took:?}"));
    }
    Ok(format!("{} centres exhausted, latest death at level {worst}, {took:.1?}", jset.len()))
}

fn lemma_parts() -> Outcome {
    let mut n = 0;
    for (m, kmax) in [(2, 3), (3, 2)] {
        let traj = log_m(m, kmax);
        for k in 1..=kmax {
            for l in 1..=(m as usize).pow(k + 1) {
                for r in [check_part_structure(k, l, &traj), check_distance_uniqueness(k, l, &traj)] {
                    let r = r.map_err(|e| e.to_string())?;
                    if !r.passed() {
                        return Err(format!("m={m} k={k} l={l}: {}", r.name));
                    }
                    n += 1;
                }
            }
        }
    }
    Ok(format!("{n} part and distance checks"))
}

fn shiftability() -> Outcome {
    for m in [2, 3] {
        let traj = log_m(m, 2);
        let start = Instant::now();
        let r = check_shiftability(&end_of(&traj, 2), &traj).map_err(|e| e.to_string())?;
        if !r.passed() || start.elapsed() > SHIFT_LIMIT {
            return Err(format!("m={m}: {} in {:?}", r.verdict, start.elapsed()));
        }
    }
    Ok("no counterexample through B(2) for m=2,3".into())
}

fn section3() -> Outcome {
    let traj = build_log_infty::<i64>(4, &minimal_dense_schedule(4)).unwrap();
    let centers: Vec<Symbol<i64>> = (1..=5).map(Symbol::Dense).collect();
    let cfg = HStarConfig {
        search: SearchConfig {
            strategy: Strategy::DepthFirst,
            max_span: Some(64),
            ..SearchConfig::default()
        },
        ..HStarConfig::default()
    };
    let bound = h_star_lower_bound::<i64, f64>(&traj, &centers, 4, &cfg).map_err(|e| e.to_string())?;
    if bound.p != 5 || (bound.value - 5f64.ln()).abs() > 1e-12 {
        return Err(format!("p = {}", bound.p));
    }
    for n in 1..=4 {
        let r = seqent::checks::verify_section3(n, &traj, CAP).map_err(|e| e.to_string())?;
        if !r.passed() {
            return Err(format!("block {n} not independent"));
        }
    }
    Ok("blocks 1..4 independent, bound log 5".into())
}

fn instance(rng: &mut ChaCha8Rng) -> (common::Naive, Vec<NeighborhoodSpec<i64>>, Vec<i64>) {
    let len = rng.gen_range(8..=200);
    let naive = if rng.gen_bool(0.35) { random_dense(rng, len) } else { random_log_m(rng, len) };
    let tuple = random_tuple(rng, naive.family);
    let times = random_times(rng, naive.horizon());
    (naive, tuple, times)
}

fn soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for i in 0..1000 {
        let (naive, tuple, times) = instance(&mut rng);
        let engine = is_independence_set(&times, &tuple, &naive.trajectory(), CAP).map_err(|e| e.to_string())?;
        if engine.is_independent() != naive.independent(&times, &tuple) {
            return Err(format!("instance {i} disagrees"));
        }
    }
    Ok("1000 of 1000 instances agree".into())
}

fn monotonicity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut witnesses = 0;
    let mut checks = 0;
    let mut tries = 0;
    while witnesses < 500 {
        tries += 1;
        if tries > 100_000 {
            return Err(format!("only {witnesses} witnesses found"));
        }
        let (naive, tuple, times) = instance(&mut rng);
        let traj = naive.trajectory();
        let indep = |t: &[i64], tu: &[NeighborhoodSpec<i64>]| -> Result<bool, String> {
            Ok(is_independence_set(t, tu, &traj, CAP).map_err(|e| e.to_string())?.is_independent())
        };
        if times.len() < 2 || !matches!(is_independence_set(&times, &tuple, &traj, CAP), Ok(Verdict::Independent(_))) {
            continue;
        }
        witnesses += 1;
        for mask in 0..(1u32 << times.len()) - 1 {
            let sub: Vec<i64> = times.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, t)| *t).collect();
            checks += 1;
            if !indep(&sub, &tuple)? {
                return Err(format!("subset {sub:?} of {times:?} fails"));
            }
        }
        for mask in 1..(1u32 << tuple.len()) - 1 {
            let sub: Vec<_> = tuple.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, n)| n.clone()).collect();
            checks += 1;
            if !indep(&times, &sub)? {
                return Err(format!("sub-tuple of {tuple:?} fails at {times:?}"));
            }
        }
        checks += 1;
        if !shift_property_check(&times, &tuple, &traj, CAP).map_err(|e| e.to_string())? {
            return Err(format!("shifted set of {times:?} fails"));
        }
    }
    Ok(format!("{witnesses} witnesses, {checks} re-verifications"))
}

fn flower() -> Outcome {
    let petal = |m| {
        let traj = log_m(m, 2);
        let end = end_of(&traj, 2);
        PetalSystem::new(format!("log{m}"), traj.truncated(&end))
    };
    let f = compose(vec![petal(2), petal(3)]).map_err(|e| e.to_string())?;
    let v = value_calculus(&f);
    if v != Value::log(3) {
        return Err(format!("value {v}"));
    }
    let r = cross_petal_check(&f, 2, None, &SearchConfig::default()).map_err(|e| e.to_string())?;
    if !r.passed() {
        return Err(format!("cross-petal {}", r.verdict));
    }
    let d = declared_value(&DeclaredFamily::StrictlyIncreasing(vec![2, 3, 5, 7]));
    if d != Value::Infinity {
        return Err(format!("declared family {d}"));
    }
    Ok("value log 3, no cross-petal pair, declared family inf".into())
}

fn determinism() -> Outcome {
    for (m, k) in [(2, 3), (3, 3)] {
        let (a, b) = (log_m(m, k), log_m(m, k));
        if a.runs() != b.runs() || format!("{:?}", a.log_m_manifest()) != format!("{:?}", b.log_m_manifest()) {
            return Err(format!("m={m} builds differ"));
        }
    }
    let d = |n| build_log_infty::<i64>(n, &minimal_dense_schedule(n)).unwrap();
    if format!("{:?}", d(4).dense_manifest()) != format!("{:?}", d(4).dense_manifest()) {
        return Err("dense builds differ".into());
    }
    let traj = log_m(2, 3);
    let cut = traj.truncated(&end_of(&traj, 3));
    let cfg = SearchConfig::default();
    let tuple = [NeighborhoodSpec::head(0, 1), NeighborhoodSpec::infinity(1)];
    let first = verify_r2(&[Symbol::Infinity], 5, &cut, &cfg).map_err(|e| e.to_string())?;
    let cert = ExhaustionCertificate::<BigInt>::parse(&first[0].attachments[0]).map_err(|e| e.to_string())?;
    let prep = Prepared::new(&tuple, &cut).map_err(|e| e.to_string())?;
    if !cert.replay(&prep, &cfg).map_err(|e| e.to_string())? {
        return Err("certificate replay differs".into());
    }
    Ok(format!("identical builds, frontier {:?} replays", cert.frontier))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("adjacent centres (R1)", r1),
        ("far pairs exhausted (R2)", r2),
        ("part structure and distances", lemma_parts),
        ("shiftability", shiftability),
        ("dense blocks and log 5", section3),
        ("engine soundness", soundness),
        ("monotonicity and shifts", monotonicity),
        ("flower calculus", flower),
        ("determinism", determinism),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        match &outcome {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail} [{took:.2?}]", i + 1),
            Err(why) => {
                println!("criterion {}: FAIL {name}: {why} [{took:.2?}]", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if !failed.is_empty() {
        println!("failing criteria: {failed:?}");
        std::process::exit(1);
    }
}
