use seqent::construct::{build_log_m, minimal_schedule};
use seqent::entropy::HStarConfig;
use seqent::flower::{
    compose, cross_petal_check, declared_value, h_star_evidence, value_calculus, CompositeSystem, DeclaredFamily,
    Mode, PetalSystem, Value,
};
use seqent::independence::SearchConfig;
use seqent::{BigInt, ModelPoint, NeighborhoodSpec, Symbol, Trajectory};

fn petal(m: u32, kmax: u32) -> PetalSystem<BigInt> {
    let traj: Trajectory<BigInt> = build_log_m(m, kmax, &minimal_schedule(m, kmax).unwrap()).unwrap();
    let end = traj.log_m_manifest().unwrap().block(kmax).unwrap().end.clone();
    PetalSystem::new(format!("log{m}"), traj.truncated(&end))
}

fn flower() -> CompositeSystem<BigInt> {
    compose(vec![petal(2, 2), petal(3, 2)]).unwrap()
}

fn evidence_cfg() -> HStarConfig {
    HStarConfig::default()
}

fn centers(petal: usize, m: i64) -> Vec<(usize, Symbol<BigInt>)> {
    (0..m).map(|i| (petal, Symbol::head(i))).collect()
}

#[test]
fn value_is_the_largest_active_petal() {
    let f = flower();
    assert_eq!(value_calculus(&f), Value::log(3));
    let one = f.clone().with_modes(vec![Mode::Active, Mode::Frozen]).unwrap();
    assert_eq!(value_calculus(&one), Value::log(2));
    let none = f.with_modes(vec![Mode::Frozen, Mode::Frozen]).unwrap();
    assert_eq!(value_calculus(&none), Value::Zero);
}

#[test]
fn petals_do_not_mix() {
    let r = cross_petal_check(&flower(), 2, None, &SearchConfig::default()).unwrap();
    assert!(r.passed(), "{}", r.to_text());
    assert!(r.notes.iter().any(|n| n.starts_with("6 cross-petal pairs")), "{:?}", r.notes);
}

#[test]
fn unbounded_declared_family_is_infinite() {
    assert_eq!(declared_value(&DeclaredFamily::StrictlyIncreasing(vec![2, 3, 5])), Value::Infinity);
    assert_eq!(
        declared_value(&DeclaredFamily::Finite(vec![Value::log(2), Value::log(3)])),
        Value::log(3)
    );
}

#[test]
fn evidence_stays_below_the_calculus() {
    let f = flower();
    let mut all = centers(0, 2);
    all.extend(centers(1, 3));
    let (v, tuple) = h_star_evidence(&f, &all, 3, &evidence_cfg()).unwrap();
    assert_eq!(v, Value::log(3));
    assert!(tuple.unwrap().iter().all(|(p, _)| *p == 1));
    assert!(v <= value_calculus(&f));

    // freezing the larger petal leaves only the smaller one's evidence
    let frozen = f.clone().with_modes(vec![Mode::Active, Mode::Frozen]).unwrap();
    let (v, _) = h_star_evidence(&frozen, &all, 3, &evidence_cfg()).unwrap();
    assert_eq!(v, Value::log(2));
    assert!(v <= value_calculus(&frozen));
}

#[test]
fn collapsing_never_adds_evidence() {
    let f = flower();
    let (before, _) = h_star_evidence(&f, &centers(1, 3), 3, &evidence_cfg()).unwrap();
    assert_eq!(before, Value::log(3));
    let collapsed = f
        .with_modes(vec![
            Mode::Active,
            Mode::Collapsed {
                into: 0,
                point: ModelPoint::Orbit(BigInt::from(0)),
            },
        ])
        .unwrap();
    let (after, _) = h_star_evidence(&collapsed, &centers(1, 3), 3, &evidence_cfg()).unwrap();
    assert!(after <= before, "{after} > {before}");
    assert!(after <= Value::log(2));
}

#[test]
fn bad_composites_are_rejected() {
    assert!(compose::<BigInt>(vec![]).is_err());
    let f = flower();
    assert!(f
        .clone()
        .with_modes(vec![Mode::Frozen, Mode::Collapsed { into: 0, point: ModelPoint::Head(Symbol::Infinity) }])
        .is_err());
    assert!(f.clone().with_modes(vec![Mode::Active]).is_err());
    // the shared point belongs to no single petal
    assert!(f.prepare(&[(0, NeighborhoodSpec::infinity(1)), (1, NeighborhoodSpec::head(0, 1))]).is_err());
    assert!(PetalSystem::declared("p", petal(2, 1).traj, Value::log(5)).is_err());
}
