use odelin::detgen::{determining_system, Unknown};
use odelin::janet::{complete, Ranking};
use odelin::jetcore::{int, Rat};
use odelin::liealg::CaseTag;
use odelin::linalg::is_scalar;
use odelin::pipeline::{analyze, analyze_text, recover, Options, RecoveryOutcome};
use odelin::recover::{adjoint_on_derived, affine_class, charpoly_for, factor_space, CharPoly};
use odelin::xoracle::{corpus, push_linear, OracleInstance, PointTransformation};

fn instances() -> Vec<OracleInstance> {
    corpus().into_iter().filter_map(|e| e.instance.ok()).collect()
}

fn combine(a: i64, e1: &[Rat], b: i64, e2: &[Rat]) -> Vec<Rat> {
    e1.iter().zip(e2).map(|(x, y)| int(a) * x + int(b) * y).collect()
}

#[test]
fn class_does_not_depend_on_the_acting_vector() {
    let mut checked = 0;
    for inst in instances() {
        if inst.expected != CaseTag::ConstantCoefficients || inst.ode.order() > 3 {
            continue;
        }
        let a = analyze(&inst.ode, &Options::default()).unwrap();
        let (e1, e2) = factor_space(&a.table, &a.derived).unwrap();
        let target = affine_class(&inst.source);
        let mut nonscalar = 0;
        for (p, q) in [(1, 0), (0, 1), (1, 1), (1, -1), (1, 2)] {
            let e = combine(p, &e1, q, &e2);
            if is_scalar(&adjoint_on_derived(&a.table, &a.derived, &e).unwrap()) {
                continue;
            }
            nonscalar += 1;
            let cp = charpoly_for(&a.table, &a.derived, &e).unwrap();
            assert_eq!(affine_class(&cp), target, "{} with ({p}, {q})", inst.ode);
        }
        assert!(nonscalar >= 3, "{}", inst.ode);
        checked += 1;
    }
    assert!(checked >= 5);
}

#[test]
fn exponential_substitution_gives_the_trivial_class() {
    let t = PointTransformation::parse("exp(x + y)", "exp(x)").unwrap();
    let inst = push_linear(&CharPoly::monomial(3), &t).unwrap();
    let a = analyze(&inst.ode, &Options::default()).unwrap();
    assert_eq!(a.m(), 7);
    assert_eq!(a.certificate.case, CaseTag::Trivial);
    let from_text = analyze_text("y''' + 3*y'*y'' + (y')^3 - y' = 0", &Options::default()).unwrap();
    assert_eq!(from_text.ode, inst.ode);
    let rep = recover(&from_text).unwrap().unwrap().representative_ode();
    assert_eq!(rep.as_deref(), Some("u''' = 0"));
}

#[test]
fn recovered_ode_matches_its_class() {
    let a = analyze_text("y''' + 3*y'*y'' + (y')^3 - y'' - (y')^2 = 0", &Options::default()).unwrap();
    let Some(RecoveryOutcome::Recovered { recovery, class }) = recover(&a).unwrap() else {
        panic!("expected the constant-coefficient case");
    };
    assert_eq!(class, affine_class(&recovery.char_poly));
    let source = CharPoly::from_roots(&[int(0), int(0), int(1)]);
    assert_eq!(class, affine_class(&source));
}

#[test]
fn dimension_is_ranking_independent_on_the_corpus() {
    let rankings = [
        Ranking::Orderly { x_first: false, top: Unknown::Xi },
        Ranking::Elimination { x_first: true, top: Unknown::Eta },
    ];
    for inst in instances().into_iter().filter(|i| i.ode.order() <= 3) {
        let sys = determining_system(&inst.ode).unwrap();
        let reference = complete(&sys, Ranking::default()).unwrap().parametric.len();
        for r in rankings {
            let m = complete(&sys, r).unwrap().parametric.len();
            assert_eq!(m, reference, "{} under {r:?}", inst.ode);
        }
    }
}
