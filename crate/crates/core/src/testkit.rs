//! Deterministic generators for the property suites: random
//! parser-shaped patterns and random subjects, reproducible from a seed.
//!
//! Only compiled with the `testkit` feature; production builds never see
//! this module. The distributions here are shared by the in-crate
//! property tests and the end-to-end acceptance suite so that both draw
//! from the same case population: pattern ASTs of bounded depth over the
//! alphabet {a, b, X, Y} with repeat bounds at most 4, and subjects over
//! that alphabet plus an outsider symbol and the occasional newline.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::nfa::CodePointSet;
use crate::syntax::{parse, render, Ast, ClassItem, Pattern, Shorthand};

/// Characters pattern literals are drawn from.
pub const PATTERN_ALPHABET: [char; 4] = ['a', 'b', 'X', 'Y'];

/// A symbol subjects contain but patterns never name directly; it can
/// still be hit through negated classes, `.`, and shorthand complements.
pub const OUTSIDER: char = '%';

/// A seeded RNG; the same seed always yields the same case sequence.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random pattern of AST depth at most `max_depth`, repeat bounds at
/// most 4.
///
/// The tree is generated in parser shape (alternation loosest, pieces
/// inside concatenations, quantifiers only on atoms), rendered to pattern
/// text, and reparsed. The reparse assigns the canonical capture
/// numbering and guarantees the returned `Pattern` is exactly what the
/// production parser builds for its `source` text.
pub fn random_pattern(rng: &mut ChaCha8Rng, max_depth: u32) -> Pattern {
    random_pattern_sized(rng, max_depth, 4)
}

/// [`random_pattern`] with a caller-chosen repeat-bound ceiling.
pub fn random_pattern_sized(rng: &mut ChaCha8Rng, max_depth: u32, max_bound: u32) -> Pattern {
    let raw = random_raw_ast_sized(rng, max_depth, max_bound);
    let source = render(&raw);
    parse(&source).unwrap_or_else(|e| panic!("rendered pattern {source:?} should reparse: {e}"))
}

/// A random parser-shaped AST, before canonicalization. Group indexes are
/// assigned in opening order, matching what the parser would do.
pub fn random_raw_ast(rng: &mut ChaCha8Rng, max_depth: u32) -> Ast {
    random_raw_ast_sized(rng, max_depth, 4)
}

pub fn random_raw_ast_sized(rng: &mut ChaCha8Rng, max_depth: u32, max_bound: u32) -> Ast {
    let mut groups = 0;
    alternation_level(rng, max_depth, max_bound, &mut groups)
}

fn alternation_level(rng: &mut ChaCha8Rng, depth: u32, max_bound: u32, groups: &mut u32) -> Ast {
    if depth > 0 && rng.gen_ratio(1, 5) {
        let count = rng.gen_range(2..=3);
        let branches = (0..count)
            .map(|_| concat_level(rng, depth - 1, max_bound, groups))
            .collect();
        Ast::Alternation(branches)
    } else {
        concat_level(rng, depth, max_bound, groups)
    }
}

fn concat_level(rng: &mut ChaCha8Rng, depth: u32, max_bound: u32, groups: &mut u32) -> Ast {
    if depth > 0 && rng.gen_ratio(3, 10) {
        let count = rng.gen_range(2..=3);
        let pieces = (0..count)
            .map(|_| piece(rng, depth - 1, max_bound, groups))
            .collect();
        Ast::Concat(pieces)
    } else {
        piece(rng, depth, max_bound, groups)
    }
}

fn piece(rng: &mut ChaCha8Rng, depth: u32, max_bound: u32, groups: &mut u32) -> Ast {
    if depth > 0 && rng.gen_ratio(3, 10) {
        let child = atom(rng, depth - 1, max_bound, groups);
        let (min, max) = random_bounds(rng, max_bound);
        Ast::Repeat {
            child: Box::new(child),
            min,
            max,
            lazy: rng.gen_bool(0.5),
        }
    } else {
        atom(rng, depth, max_bound, groups)
    }
}

fn atom(rng: &mut ChaCha8Rng, depth: u32, max_bound: u32, groups: &mut u32) -> Ast {
    if depth > 0 && rng.gen_ratio(3, 10) {
        *groups += 1;
        let index = *groups;
        Ast::Group {
            index,
            child: Box::new(alternation_level(rng, depth - 1, max_bound, groups)),
        }
    } else {
        leaf(rng)
    }
}

fn leaf(rng: &mut ChaCha8Rng) -> Ast {
    match rng.gen_range(0..100) {
        0..=44 => Ast::Literal(*PATTERN_ALPHABET.choose(rng).expect("non-empty")),
        // Metacharacter literals keep the escaping paths honest.
        45..=54 => Ast::Literal(*['.', '+', '(', '{', '-'].choose(rng).expect("non-empty")),
        55..=64 => Ast::AnyChar,
        65..=79 => Ast::Shorthand(random_shorthand(rng)),
        _ => loop {
            let count = rng.gen_range(1..=3);
            let items: Vec<ClassItem> = (0..count).map(|_| random_class_item(rng)).collect();
            let negated = rng.gen_ratio(1, 4);
            // A negated class can come out semantically empty (for
            // example [^\d\D]); such a class can never match and would
            // break the non-empty-consume-set invariant the compiler
            // suite asserts, so redraw.
            if !CodePointSet::from_class(&items, negated).is_empty() {
                break Ast::CharClass { items, negated };
            }
        },
    }
}

fn random_shorthand(rng: &mut ChaCha8Rng) -> Shorthand {
    *[
        Shorthand::Digit,
        Shorthand::NotDigit,
        Shorthand::Word,
        Shorthand::NotWord,
        Shorthand::Whitespace,
        Shorthand::NotWhitespace,
    ]
    .choose(rng)
    .expect("non-empty")
}

fn random_class_item(rng: &mut ChaCha8Rng) -> ClassItem {
    match rng.gen_range(0..100) {
        0..=44 => ClassItem::Single(*PATTERN_ALPHABET.choose(rng).expect("non-empty")),
        45..=54 => ClassItem::Single(OUTSIDER),
        55..=59 => ClassItem::Single('-'),
        60..=79 => *[ClassItem::Range('a', 'b'), ClassItem::Range('X', 'Y')]
            .choose(rng)
            .expect("non-empty"),
        _ => ClassItem::Shorthand(random_shorthand(rng)),
    }
}

fn random_bounds(rng: &mut ChaCha8Rng, max_bound: u32) -> (u32, Option<u32>) {
    match rng.gen_range(0..6) {
        0 => (0, None),
        1 => (1, None),
        2 => (0, Some(1)),
        3 => {
            let n = rng.gen_range(0..=max_bound);
            (n, Some(n))
        }
        4 => (rng.gen_range(0..=max_bound), None),
        _ => {
            let min = rng.gen_range(0..max_bound);
            let max = rng.gen_range(min..=max_bound);
            (min, Some(max))
        }
    }
}

/// A random subject of length at most `max_len`: mostly the pattern
/// alphabet, with outsider symbols and occasional newlines mixed in.
pub fn random_subject(rng: &mut ChaCha8Rng, max_len: usize) -> String {
    let len = rng.gen_range(0..=max_len);
    (0..len)
        .map(|_| match rng.gen_range(0..100) {
            0..=83 => *PATTERN_ALPHABET.choose(rng).expect("non-empty"),
            84..=93 => OUTSIDER,
            _ => '\n',
        })
        .collect()
}

/// A variant of `pattern` with exactly one quantifier's laziness flipped,
/// plus whether the flip went greedy-to-lazy. `None` when the pattern has
/// no quantifiers.
pub fn flip_one_laziness(pattern: &Pattern, rng: &mut ChaCha8Rng) -> Option<(Pattern, bool)> {
    let total = count_repeats(&pattern.ast);
    if total == 0 {
        return None;
    }
    let target = rng.gen_range(0..total);
    let mut ast = pattern.ast.clone();
    let mut seen = 0;
    let made_lazy =
        flip_repeat(&mut ast, target, &mut seen).expect("target index is within repeat count");
    let source = render(&ast);
    let flipped =
        parse(&source).unwrap_or_else(|e| panic!("flipped pattern {source:?} should reparse: {e}"));
    Some((flipped, made_lazy))
}

fn count_repeats(ast: &Ast) -> usize {
    match ast {
        Ast::Literal(_) | Ast::AnyChar | Ast::Shorthand(_) | Ast::CharClass { .. } => 0,
        Ast::Concat(children) | Ast::Alternation(children) => {
            children.iter().map(count_repeats).sum()
        }
        Ast::Group { child, .. } => count_repeats(child),
        Ast::Repeat { child, .. } => 1 + count_repeats(child),
    }
}

fn flip_repeat(ast: &mut Ast, target: usize, seen: &mut usize) -> Option<bool> {
    match ast {
        Ast::Literal(_) | Ast::AnyChar | Ast::Shorthand(_) | Ast::CharClass { .. } => None,
        Ast::Concat(children) | Ast::Alternation(children) => children
            .iter_mut()
            .find_map(|child| flip_repeat(child, target, seen)),
        Ast::Group { child, .. } => flip_repeat(child, target, seen),
        Ast::Repeat { child, lazy, .. } => {
            if *seen == target {
                *seen += 1;
                *lazy = !*lazy;
                Some(*lazy)
            } else {
                *seen += 1;
                flip_repeat(child, target, seen)
            }
        }
    }
}
