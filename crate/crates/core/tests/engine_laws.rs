mod common;

use std::collections::BTreeSet;

use metacalc::engine::{
    apply_rule, enumerate_body, make_rule, staged_run, BodyStatus, Bounds, Calculus, RuleSpec, RuleSystem, StageSpec,
    StagedAxioms, Validator,
};
use metacalc::formula::Formula;
use metacalc::library::{kleene, lv};
use metacalc::Execution;
use proptest::prelude::*;

use common::*;

fn random_calculus(seed: u64) -> Calculus {
    let a = small_alphabet();
    let mut rng = rng(seed);
    let axioms = sample_between(&mut rng, &wffs(&a, 3), 1, 4);
    calculus(&a, axioms, &random_rules(&mut rng, &rule_choices()))
}

fn stage_prefix(body: &metacalc::BoundedBody, n: usize) -> BTreeSet<Formula> {
    body.entries().iter().filter(|e| e.stage <= n).map(|e| e.formula.clone()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn every_stage_matches_the_naive_closure(seed in any::<u64>()) {
        let c = random_calculus(seed);
        let bounds = Bounds::new(4, 7, 200_000, 1);
        let body = enumerate_body(&c, &bounds);
        prop_assume!(body.status() != BodyStatus::BudgetExceeded);
        for n in 1..=body.stage_count() {
            let (naive, _) = naive_body(&c, &Bounds { max_stage: n, ..bounds });
            prop_assert_eq!(stage_prefix(&body, n), naive);
        }
        let (_, saturated) = naive_body(&c, &bounds);
        prop_assert_eq!(body.is_saturated(), saturated);
    }

    #[test]
    fn stages_are_cumulative_and_contain_the_axioms(seed in any::<u64>()) {
        let c = random_calculus(seed);
        let bounds = Bounds::new(4, 7, 200_000, 1);
        let body = enumerate_body(&c, &bounds);
        for n in 1..body.stage_count() {
            prop_assert!(stage_prefix(&body, n).is_subset(&stage_prefix(&body, n + 1)));
        }
        let axioms = c.realized_axiom_set(&bounds).unwrap();
        prop_assert!(axioms.iter().all(|f| body.contains(f)));
    }

    #[test]
    fn execution_modes_agree(seed in any::<u64>()) {
        let c = random_calculus(seed);
        let seq = enumerate_body(&c, &Bounds::new(4, 8, 200_000, 1).with_execution(Execution::Sequential));
        let par = enumerate_body(&c, &Bounds::new(4, 8, 200_000, 1).with_execution(Execution::Parallel));
        prop_assert_eq!(seq.entries(), par.entries());
        prop_assert_eq!(seq.status(), par.status());
    }

    #[test]
    fn every_theorem_has_a_valid_derivation(seed in any::<u64>()) {
        let c = random_calculus(seed);
        let bounds = Bounds::new(4, 7, 200_000, 1);
        let body = enumerate_body(&c, &bounds);
        let ctx = c.rule_context(c.pool(&bounds).unwrap());
        for f in body.formulas() {
            let d = body.derivation(f).unwrap();
            prop_assert_eq!(d.conclusion(), f);
            prop_assert!(d.validate(&c, &ctx, &[]).is_ok());
        }
    }

    #[test]
    fn validated_bodies_stay_inside(seed in any::<u64>(), pick in 0usize..3) {
        let c = random_calculus(seed).with_rules(RuleSystem::from_specs([RuleSpec::ModusPonens]).unwrap()).unwrap();
        let v = [Validator::Tautology, Validator::AxiomMembership, Validator::AlwaysTrue][pick].clone();
        let bounds = Bounds::new(4, 7, 200_000, 1);
        let plain = enumerate_body(&c, &bounds).formula_set();
        prop_assert!(enumerate_body(&lv(&c, v), &bounds).formula_set().is_subset(&plain));
    }

    #[test]
    fn composition_is_pointwise(seed in any::<u64>()) {
        let a = small_alphabet();
        let mut rng = rng(seed);
        let premises = sample(&mut rng, &wffs(&a, 4), 1);
        let c = calculus(&a, Vec::new(), &[RuleSpec::Identity]);
        let ctx = c.rule_context(c.pool(&Bounds::new(2, 9, 1000, 1)).unwrap());
        let r = make_rule(RuleSpec::Substitution).unwrap();
        let q = make_rule(RuleSpec::Substitution).unwrap();
        let composed = make_rule(RuleSpec::Compose(Box::new(RuleSpec::Substitution), Box::new(RuleSpec::Substitution))).unwrap();
        let direct: BTreeSet<Formula> = apply_rule(&composed, &premises, &ctx).unwrap().into_iter().collect();
        let mut expected = BTreeSet::new();
        for mid in apply_rule(&r, &premises, &ctx).unwrap() {
            expected.extend(apply_rule(&q, &[mid], &ctx).unwrap());
        }
        prop_assert_eq!(direct, expected);
    }
}

#[test]
fn budget_is_reported() {
    let body = enumerate_body(&kleene(), &Bounds::new(3, 21, 1000, 5));
    assert_eq!(body.status(), BodyStatus::BudgetExceeded);
    assert!(body.len() <= 1000);
}

#[test]
fn stage_cap_is_reported() {
    let body = enumerate_body(&kleene(), &Bounds::new(2, 15, 200_000, 2));
    assert_eq!(body.status(), BodyStatus::StageCapHit);
    assert_eq!(body.stage_count(), 2);
}

#[test]
fn staged_bodies_can_shrink() {
    let a = small_alphabet();
    let p = f("P", &a);
    let imp = f("P -> Q", &a);
    let stages = StagedAxioms::new(
        a.clone(),
        vec![StageSpec::new(vec![p.clone(), imp.clone()]), StageSpec::new(vec![imp.clone()])],
    )
    .unwrap();
    let rules = RuleSystem::from_specs([RuleSpec::ModusPonens]).unwrap();
    let bodies = staged_run(&stages, &rules, &Bounds::new(4, 7, 1000, 1)).unwrap();
    assert!(bodies[0].contains(&f("Q", &a)));
    assert!(!bodies[1].contains(&f("Q", &a)));
    assert!(!bodies[1].contains(&p));
}
