//! The matcher's ground-truth suite: the compiled engine must agree with
//! the naive reference interpreter on presence, span, and every capture
//! span, across a large randomized population, with zero disagreements.
//!
//! Disagreement output includes the pattern source, the subject, and both
//! results, so a failure here reproduces immediately from the seed.

use rex_core::matcher::{find, match_at, MatchBudget, MatchResult};
use rex_core::nfa::compile;
use rex_core::oracle::oracle_find;
use rex_core::syntax::Pattern;
use rex_core::testkit;

const CASES: usize = 12_000;
const MAX_SUBJECT_LEN: usize = 12;

fn describe(result: &Option<MatchResult>) -> String {
    match result {
        None => "no match".to_string(),
        Some(hit) => {
            let groups: Vec<String> = (1..=hit.group_count())
                .map(|i| match hit.group(i) {
                    Some(span) => format!("{i}:{span}"),
                    None => format!("{i}:-"),
                })
                .collect();
            format!("{} [{}]", hit.span, groups.join(" "))
        }
    }
}

#[test]
fn engine_matches_oracle_on_twelve_thousand_cases() {
    let mut rng = testkit::rng(0xfeed_0001);
    let budget = MatchBudget::UNLIMITED;
    for case in 0..CASES {
        let depth = 1 + (case % 4) as u32;
        let pattern: Pattern = testkit::random_pattern(&mut rng, depth);
        let machine = compile(&pattern);
        let subject = testkit::random_subject(&mut rng, MAX_SUBJECT_LEN);

        let by_engine = find(&machine, &subject, &budget).expect("budget is unlimited");
        let by_oracle = oracle_find(&pattern, &subject);

        assert_eq!(
            by_engine,
            by_oracle,
            "case {case}: pattern {:?} on subject {:?}\n  engine: {}\n  oracle: {}",
            pattern.source,
            subject,
            describe(&by_engine),
            describe(&by_oracle),
        );

        if let Some(hit) = &by_engine {
            // Capture containment and group-list arity, on every match.
            assert_eq!(hit.group_count() as u32, pattern.group_count);
            for index in 1..=hit.group_count() {
                if let Some(group) = hit.group(index) {
                    assert!(
                        hit.span.start <= group.start && group.end <= hit.span.end,
                        "case {case}: group {index} {group} outside span {} for {:?} on {:?}",
                        hit.span,
                        pattern.source,
                        subject
                    );
                }
            }
        }
    }
}

#[test]
fn find_start_is_the_leftmost_viable_start() {
    let mut rng = testkit::rng(0xfeed_0002);
    let budget = MatchBudget::UNLIMITED;
    for case in 0..2_000 {
        let pattern = testkit::random_pattern(&mut rng, 1 + (case % 4) as u32);
        let machine = compile(&pattern);
        let subject = testkit::random_subject(&mut rng, 8);
        let subject_len = subject.chars().count();

        match find(&machine, &subject, &budget).expect("budget is unlimited") {
            Some(hit) => {
                for start in 0..hit.span.start {
                    assert_eq!(
                        match_at(&machine, &subject, start, &budget).unwrap(),
                        None,
                        "case {case}: {:?} on {subject:?} matched before reported start {}",
                        pattern.source,
                        hit.span.start
                    );
                }
            }
            None => {
                // Unanchored absence must mean anchored absence everywhere.
                for start in 0..=subject_len {
                    assert_eq!(
                        match_at(&machine, &subject, start, &budget).unwrap(),
                        None,
                        "case {case}: {:?} on {subject:?} has a hidden match at {start}",
                        pattern.source
                    );
                }
            }
        }
    }
}

#[test]
fn greedy_variant_never_ends_before_lazy_variant() {
    let mut rng = testkit::rng(0xfeed_0003);
    let budget = MatchBudget::UNLIMITED;
    let mut compared = 0;
    for case in 0..6_000 {
        let pattern = testkit::random_pattern(&mut rng, 1 + (case % 4) as u32);
        let Some((flipped, made_lazy)) = testkit::flip_one_laziness(&pattern, &mut rng) else {
            continue;
        };
        let (greedy, lazy) = if made_lazy {
            (&pattern, &flipped)
        } else {
            (&flipped, &pattern)
        };
        let subject = testkit::random_subject(&mut rng, MAX_SUBJECT_LEN);
        let greedy_hit = find(&compile(greedy), &subject, &budget).unwrap();
        let lazy_hit = find(&compile(lazy), &subject, &budget).unwrap();
        if let (Some(g), Some(l)) = (greedy_hit, lazy_hit) {
            if g.span.start == l.span.start {
                compared += 1;
                assert!(
                    g.span.end >= l.span.end,
                    "case {case}: greedy {:?} ended at {} before lazy {:?} at {} on {subject:?}",
                    greedy.source,
                    g.span.end,
                    lazy.source,
                    l.span.end
                );
            }
        }
    }
    // The property must actually have been exercised, not vacuously true.
    assert!(compared > 1_000, "only {compared} comparable pairs");
}

#[test]
fn oracle_presence_is_monotone_under_extension() {
    let mut rng = testkit::rng(0xfeed_0004);
    let mut extended = 0;
    for case in 0..1_500 {
        let pattern = testkit::random_pattern(&mut rng, 1 + (case % 4) as u32);
        let subject = testkit::random_subject(&mut rng, 8);
        if oracle_find(&pattern, &subject).is_none() {
            continue;
        }
        extended += 1;
        let longer = format!("{subject}{}", testkit::random_subject(&mut rng, 3));
        assert!(
            oracle_find(&pattern, &longer).is_some(),
            "case {case}: {:?} matched {subject:?} but not its extension {longer:?}",
            pattern.source
        );
    }
    assert!(extended > 500, "only {extended} matching cases");
}

#[test]
fn empty_body_repeats_terminate_within_the_default_cli_budget() {
    let budget = MatchBudget::limited(10_000_000);
    let subject: String = "XY".repeat(16);
    assert_eq!(subject.chars().count(), 32);
    for source in ["(X?)*", "()*", "(X*)*"] {
        let pattern = rex_core::parse(source).unwrap();
        let machine = compile(&pattern);
        let result = find(&machine, &subject, &budget)
            .unwrap_or_else(|e| panic!("{source} exceeded the budget: {e}"));
        assert!(result.is_some(), "{source} should match (possibly empty)");
    }
}
