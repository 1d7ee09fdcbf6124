mod common;

use std::path::PathBuf;

use common::Naive;
use seqent::checks::{
    check_distance_uniqueness, check_part_structure, check_shiftability, default_r2_jset, verify_r1, verify_r2,
    verify_section3, PartGeometry,
};
use seqent::construct::{build_log_infty, build_log_m, minimal_dense_schedule, minimal_schedule};
use seqent::entropy::{word_count, PartitionSpec};
use seqent::independence::{
    is_independence_set, max_independence, occupancy, satisfiable, shift_property_check, ExhaustionCertificate,
    Prepared, SearchConfig, Strategy,
};
use seqent::{BigInt, Family, ModelPoint, NeighborhoodSpec, Symbol, Trajectory};

const CAP: u128 = 1 << 24;

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

fn log_m(m: u32, kmax: u32) -> Trajectory<BigInt> {
    build_log_m(m, kmax, &minimal_schedule(m, kmax).unwrap()).unwrap()
}

fn block_end(traj: &Trajectory<BigInt>, k: u32) -> BigInt {
    traj.log_m_manifest().unwrap().block(k).unwrap().end.clone()
}

/// The first `len` symbols as a plain list, one block.
fn prefix(traj: &Trajectory<BigInt>, len: i64) -> Naive {
    let syms = (0..len)
        .map(|t| match traj.symbol_at(&big(t)).unwrap() {
            Symbol::Head(i) => Symbol::Head(i.to_string().parse().unwrap()),
            s => panic!("unexpected {s}"),
        })
        .collect();
    Naive::new(traj.family(), syms, vec![0])
}

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

/// Compares with the stored file; `SEQENT_BLESS=1` rewrites it instead.
fn check_golden(name: &str, text: &str) {
    let path = golden(name);
    if std::env::var_os("SEQENT_BLESS").is_some() {
        std::fs::write(&path, text).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(text, want, "{name} changed");
}

#[test]
fn adjacent_centres_meet_at_the_block_times() {
    for (m, kmax) in [(2, 3), (3, 3)] {
        let traj = log_m(m, kmax);
        for k in 1..=kmax {
            let r = verify_r1(k, &traj, CAP).unwrap();
            assert!(r.passed(), "m={m} k={k}: {}", r.to_text());
        }
    }
}

#[test]
fn first_block_r1_against_brute_force() {
    let traj = log_m(2, 1);
    let len: i64 = block_end(&traj, 1).to_string().parse().unwrap();
    let naive = prefix(&traj, len + 1);
    let tuple = vec![NeighborhoodSpec::head(0, 1), NeighborhoodSpec::head(1, 1)];
    assert!(naive.independent(&[0, 7], &tuple));
    assert!(!naive.independent(&[0, 6], &tuple));
}

#[test]
fn independence_examples() {
    let traj = log_m(2, 3);
    let man = traj.log_m_manifest().unwrap();
    let a01 = |k| vec![NeighborhoodSpec::head(0, k), NeighborhoodSpec::head(1, k)];
    assert!(is_independence_set(&[big(0), big(7)], &a01(1), &traj, CAP).unwrap().is_independent());
    assert!(is_independence_set(&[], &a01(1), &traj, CAP).unwrap().is_independent());
    let n2 = man.block(2).unwrap().times.clone();
    assert!(is_independence_set(&n2, &a01(2), &traj, CAP).unwrap().is_independent());

    // the first point realising (a0 at 0, a1 at 7) is the start of P(1,2)
    let p = satisfiable(&[big(0), big(7)], &[0, 1], &a01(1), &traj).unwrap();
    assert_eq!(p, Some(ModelPoint::Orbit(man.piece(1, 2).unwrap().start.clone())));

    // a0 then a5 seven steps later happens nowhere; brute force agrees on a prefix
    let far = vec![NeighborhoodSpec::head(0, 1), NeighborhoodSpec::head(5, 1)];
    assert_eq!(satisfiable(&[big(0), big(7)], &[0, 1], &far, &traj).unwrap(), None);
    let naive = prefix(&traj, 3000);
    let small: Vec<NeighborhoodSpec<i64>> = vec![NeighborhoodSpec::head(0, 1), NeighborhoodSpec::head(5, 1)];
    assert!(naive.points(600).iter().all(|p| {
        !naive.contains(&small[0], p) || naive.step(p, 7).is_none_or(|q| !naive.contains(&small[1], &q))
    }));

    // the fixed point a_inf is always in its own neighbourhoods
    let inf = vec![NeighborhoodSpec::infinity(1)];
    let w = satisfiable(&[big(0)], &[0], &inf, &traj).unwrap().unwrap();
    assert!(seqent::model::resolve(&inf[0], &traj).unwrap().contains(&w));

    let shifted = shift_property_check(&[big(0), big(7)], &a01(1), &traj, CAP).unwrap();
    assert!(shifted);
    assert!(shift_property_check(&n2, &a01(2), &traj, CAP).unwrap());
    assert!(shift_property_check(&[big(5)], &a01(1), &traj, CAP).unwrap());
}

#[test]
fn searches() {
    let traj = log_m(2, 3);
    let cut = traj.truncated(&block_end(&traj, 3));
    let cfg = SearchConfig::default();

    let best = max_independence(&[NeighborhoodSpec::head(0, 1), NeighborhoodSpec::head(1, 1)], 4, &cut, &cfg).unwrap();
    assert_eq!(best.best, 4);
    assert!(best.certificate.is_none());

    let level = SearchConfig {
        strategy: Strategy::LevelWise,
        ..cfg.clone()
    };
    let far = [NeighborhoodSpec::head(0, 1), NeighborhoodSpec::head(3, 1)];
    let out = max_independence(&far, 5, &cut, &level).unwrap();
    assert!(out.best <= 4);
    let cert = out.certificate.expect("exhausted");
    assert!(cert.replay(&Prepared::new(&far, &cut).unwrap(), &level).unwrap());

    let single = max_independence(&[NeighborhoodSpec::infinity(1)], 6, &cut, &cfg).unwrap();
    assert_eq!(single.best, 6);
}

#[test]
fn far_pairs_have_no_long_independence_sets() {
    let traj = log_m(2, 3);
    let cut = traj.truncated(&block_end(&traj, 3));
    let jset = default_r2_jset::<BigInt>(2);
    assert_eq!(jset.len(), 11);
    let reports = verify_r2(&jset, 5, &cut, &SearchConfig::default()).unwrap();
    for (j, r) in jset.iter().zip(&reports) {
        assert!(r.passed(), "{}", r.to_text());
        let text = &r.attachments[0];
        let cert = ExhaustionCertificate::<BigInt>::parse(text).unwrap();
        assert!(cert.died_at <= 4, "j={j} died at {}", cert.died_at);
        let name = format!("r2_m2_{}.cert", j.to_string().replace('-', "m"));
        check_golden(&name, text);

        let tuple = [NeighborhoodSpec::head(0, 1), NeighborhoodSpec::new(j.clone(), 1)];
        let prep = Prepared::new(&tuple, &cut).unwrap();
        assert!(cert.replay(&prep, &SearchConfig::default()).unwrap(), "j={j}");
    }
}

#[test]
fn part_structure() {
    for (m, kmax) in [(2, 3), (3, 2)] {
        let traj = log_m(m, kmax);
        for k in 1..=kmax {
            for l in 1..=(m as usize).pow(k + 1) {
                let r = check_part_structure(k, l, &traj).unwrap();
                assert!(r.passed(), "{}", r.to_text());
                let r = check_distance_uniqueness(k, l, &traj).unwrap();
                assert!(r.passed(), "{}", r.to_text());
            }
        }
    }
}

#[test]
fn part_examples() {
    let traj = log_m(2, 2);
    let geo = PartGeometry::new(&traj).unwrap();
    let man = traj.log_m_manifest().unwrap();
    assert_eq!(geo.expected_points(1, 1).unwrap(), vec![big(0), big(7)]);

    // s_4 = (1, 1): both visits sit one step before the piece's times
    let j = man.piece(1, 4).unwrap().start.clone();
    assert_eq!(man.piece(1, 4).unwrap().s, vec![1, 1]);
    let want = vec![&j - big(1), &j + big(6)];
    assert_eq!(geo.expected_points(1, 4).unwrap(), want);
    let (lo, hi) = geo.part_range(1, 4).unwrap();
    let occ = occupancy(&NeighborhoodSpec::head(0, 1), &traj).unwrap().clip(&lo, &hi);
    assert_eq!(occ.points().collect::<Vec<_>>(), want);

    // three visits per part of B(2), three distinct distances
    for l in 1..=8 {
        let pts = geo.expected_points(2, l).unwrap();
        assert_eq!(pts.len(), 3);
        let d = [&pts[1] - &pts[0], &pts[2] - &pts[0], &pts[2] - &pts[1]];
        assert!(d[0] != d[1] && d[0] != d[2] && d[1] != d[2], "l={l}");
    }

    let three = log_m(3, 1);
    let geo = PartGeometry::new(&three).unwrap();
    assert_eq!(geo.expected_points(1, 1).unwrap(), vec![big(0), big(10)]);
}

#[test]
fn shiftability_through_the_second_block() {
    for m in [2, 3] {
        let traj = log_m(m, 2);
        let r = check_shiftability(&block_end(&traj, 2), &traj).unwrap();
        assert!(r.passed(), "m={m}: {}", r.to_text());
    }
}

#[test]
fn dense_blocks_are_independent() {
    let traj = build_log_infty::<i64>(4, &minimal_dense_schedule(4)).unwrap();
    for n in 1..=4 {
        let r = verify_section3(n, &traj, CAP).unwrap();
        assert!(r.passed(), "{}", r.to_text());
    }
}

#[test]
fn word_counts() {
    let traj = log_m(2, 3);
    let man = traj.log_m_manifest().unwrap();
    let part = PartitionSpec::new(vec![vec![Symbol::head(0)], vec![Symbol::head(1)]], true).unwrap();
    let n3 = man.block(3).unwrap().times.clone();
    assert!(word_count(&n3, &part, &traj).unwrap() >= 16);

    let short = traj.truncated(&big(2999));
    let naive = prefix(&traj, 3000);
    let seq = [0, 1, 2];
    let part = PartitionSpec::new(vec![vec![Symbol::head(0)]], true).unwrap();
    let count = word_count(&seq.map(big), &part, &short).unwrap();
    assert_eq!(count as usize, naive.word_count(&seq, &[vec![Symbol::Head(0)]], true));
    assert_eq!(count, 4);
    assert_eq!(naive.family, Family::LogM { m: 2 });
}
