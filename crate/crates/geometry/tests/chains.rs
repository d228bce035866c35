use irvzone_geometry::{
    builtin_chain, verify_chain, ChainName, ChainReport, ChainSpec, GeoError, StepTag,
};

const SAMPLES: usize = 1_000_000;

fn run(name: &str) -> ChainReport {
    let chain = builtin_chain(name.parse().unwrap()).unwrap();
    verify_chain(&chain, SAMPLES, 2024, 3.0).unwrap()
}

fn assert_passes(name: &str, report: &ChainReport) {
    for s in report.failed_steps() {
        eprintln!("{name} step {}: {s:?}", s.step);
    }
    assert!(report.starts_at_center && report.ends_at_corner, "{name}: endpoints");
    assert!(report.passed, "{name}");
}

#[test]
fn square_chain_passes() {
    let r = run("square_l2");
    assert_eq!(r.steps.len(), 4);
    let tags: Vec<StepTag> = r.steps.iter().map(|s| s.tag).collect();
    assert_eq!(
        tags,
        [StepTag::Cross, StepTag::BottomVsSides, StepTag::EdgeTriple, StepTag::CornerSqueeze]
    );
    assert_passes("square_l2", &r);
}

#[test]
fn rect_l1_chain_passes() {
    assert_passes("rect_l1(2)", &run("rect_l1(2)"));
}

#[test]
fn rect_l2_chain_passes() {
    assert_passes("rect_l2(2)", &run("rect_l2(2)"));
}

#[test]
fn unit_width_chains() {
    assert_eq!(
        builtin_chain(ChainName::RectL2 { w: 1.0 }).unwrap(),
        builtin_chain(ChainName::SquareL2).unwrap()
    );
    assert_passes("rect_l1(1)", &run("rect_l1(1)"));
}

#[test]
fn l1_chain_length_is_linear_in_width() {
    let len = |w: f64| builtin_chain(ChainName::RectL1 { w }).unwrap().steps.len() as f64;
    for w in [1.0, 2.0, 3.0, 5.0, 8.0, 13.0] {
        let per_width = len(w) / w;
        assert!((10.0..=25.0).contains(&per_width), "w = {w}: {} steps", len(w));
    }
}

#[test]
fn broken_linkage_is_rejected() {
    let mut chain = builtin_chain(ChainName::SquareL2).unwrap();
    chain.steps[1].candidates[1] = vec![0.0, 0.4];
    let err = verify_chain(&chain, 1000, 1, 3.0).unwrap_err();
    assert!(matches!(err, GeoError::Precondition(ref m) if m.contains("linkage")), "{err}");
}

#[test]
fn wrong_designations_fail() {
    let mut chain = builtin_chain(ChainName::SquareL2).unwrap();
    // An arm is not the first to go.
    chain.steps[0].eliminated = Some(1);
    let r = verify_chain(&chain, 200_000, 1, 3.0).unwrap();
    assert!(!r.passed);
    assert!(!r.steps[0].elimination_confirmed);

    let mut chain = builtin_chain(ChainName::SquareL2).unwrap();
    chain.steps.pop();
    let r = verify_chain(&chain, 200_000, 1, 3.0).unwrap();
    assert!(!r.ends_at_corner && !r.passed);
}

#[test]
fn reports_are_reproducible() {
    let chain = builtin_chain(ChainName::SquareL2).unwrap();
    let a = verify_chain(&chain, 100_000, 5, 3.0).unwrap();
    let b = verify_chain(&chain, 100_000, 5, 3.0).unwrap();
    assert_eq!(a, b);
}

#[test]
fn text_chain_verifies() {
    let text = "\
region rect 1 1
metric l2
step cross 0 4 : 0.5 0.5 ; 0.1 0.5 ; 0.5 0.9 ; 0.9 0.5 ; 0.5 0.1
step bottom-vs-sides 0 1 : 0.5 0.1 ; 0 0.5 ; 1 0.5
step edge-triple 1 2 : 0 0.18 ; 0 0.5 ; 0 0.82
step corner-squeeze 0 1 : 0 0.82 ; 0 0 ; 1 1
";
    let chain = ChainSpec::parse(text).unwrap();
    assert_eq!(chain.steps.len(), 4);
    assert_eq!(chain.steps[2].eliminated, Some(1));
    assert!(verify_chain(&chain, 200_000, 3, 3.0).unwrap().passed);
}
