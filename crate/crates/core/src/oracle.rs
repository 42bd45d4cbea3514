//! Reference interpreter: a deliberately naive matcher used as ground
//! truth for the compiled engine.
//!
//! It walks the AST directly with continuation passing and exhaustive
//! backtracking, cloning capture state instead of undoing it, and
//! evaluating character classes item by item instead of through the
//! compiler's normalized code-point sets. Nothing here is shared with the
//! machine path beyond the AST itself and the shorthand membership tables,
//! which keeps the two implementations honest against each other.
//!
//! Worst-case cost is exponential in the subject length. That is the
//! point: correctness over speed. Keep inputs small.

use crate::matcher::{MatchResult, Span};
use crate::syntax::{Ast, ClassItem, Pattern};

type Caps = Vec<Option<(usize, usize)>>;

/// True when the pattern derives the entire subject, anchored at both ends.
pub fn accepts(pattern: &Pattern, subject: &str) -> bool {
    let chars: Vec<char> = subject.chars().collect();
    let oracle = Oracle { chars: &chars };
    let caps = vec![None; pattern.group_count as usize];
    oracle
        .walk(&pattern.ast, 0, caps, &Cont::Done { anchored: true })
        .is_some()
}

/// Leftmost-first search with the same preference order the machine uses:
/// earliest start wins, then greedy-longer / lazy-shorter / left-branch
/// order within that start. Group captures reflect the last completed
/// iteration of any quantified group.
pub fn oracle_find(pattern: &Pattern, subject: &str) -> Option<MatchResult> {
    let chars: Vec<char> = subject.chars().collect();
    let oracle = Oracle { chars: &chars };
    for start in 0..=chars.len() {
        let caps = vec![None; pattern.group_count as usize];
        if let Some((end, caps)) =
            oracle.walk(&pattern.ast, start, caps, &Cont::Done { anchored: false })
        {
            let groups = caps
                .into_iter()
                .map(|pair| pair.map(|(s, e)| Span::new(s, e)))
                .collect();
            return Some(MatchResult::from_parts(Span::new(start, end), groups));
        }
    }
    None
}

/// What remains to be matched once the current node succeeds.
enum Cont<'c> {
    /// End of the pattern. Anchored continuations also require the end of
    /// the subject.
    Done { anchored: bool },
    /// The rest of a concatenation, then `tail`.
    Seq { rest: &'c [Ast], tail: &'c Cont<'c> },
    /// Record a finished capture group, then `tail`.
    CloseGroup {
        index: u32,
        start: usize,
        tail: &'c Cont<'c>,
    },
    /// A repeat iteration just finished; decide whether to go around again.
    /// `entry_pos`/`entry_caps` are the state when the iteration began, for
    /// the empty-progress guard.
    Loop {
        child: &'c Ast,
        min_left: u32,
        max_left: Option<u32>,
        lazy: bool,
        entry_pos: usize,
        entry_caps: Caps,
        tail: &'c Cont<'c>,
    },
}

struct Oracle<'s> {
    chars: &'s [char],
}

impl Oracle<'_> {
    fn walk<'c>(
        &self,
        node: &'c Ast,
        pos: usize,
        caps: Caps,
        k: &'c Cont<'c>,
    ) -> Option<(usize, Caps)> {
        match node {
            Ast::Literal(c) => {
                if self.chars.get(pos) == Some(c) {
                    self.apply(k, pos + 1, caps)
                } else {
                    None
                }
            }
            Ast::AnyChar => match self.chars.get(pos) {
                Some(&c) if c != '\n' => self.apply(k, pos + 1, caps),
                _ => None,
            },
            Ast::Shorthand(shorthand) => match self.chars.get(pos) {
                Some(&c) if shorthand.matches(c) => self.apply(k, pos + 1, caps),
                _ => None,
            },
            Ast::CharClass { items, negated } => match self.chars.get(pos) {
                Some(&c) if class_matches(items, *negated, c) => self.apply(k, pos + 1, caps),
                _ => None,
            },
            Ast::Concat(children) => {
                if children.is_empty() {
                    self.apply(k, pos, caps)
                } else {
                    let rest = Cont::Seq {
                        rest: &children[1..],
                        tail: k,
                    };
                    self.walk(&children[0], pos, caps, &rest)
                }
            }
            Ast::Alternation(branches) => {
                for branch in branches {
                    if let Some(hit) = self.walk(branch, pos, caps.clone(), k) {
                        return Some(hit);
                    }
                }
                None
            }
            Ast::Group { index, child } => {
                let close = Cont::CloseGroup {
                    index: *index,
                    start: pos,
                    tail: k,
                };
                self.walk(child, pos, caps, &close)
            }
            Ast::Repeat {
                child,
                min,
                max,
                lazy,
            } => {
                if *max == Some(0) {
                    return self.apply(k, pos, caps);
                }
                let looped = Cont::Loop {
                    child,
                    min_left: min.saturating_sub(1),
                    max_left: max.map(|m| m - 1),
                    lazy: *lazy,
                    entry_pos: pos,
                    entry_caps: caps.clone(),
                    tail: k,
                };
                if *min > 0 {
                    self.walk(child, pos, caps, &looped)
                } else if *lazy {
                    self.apply(k, pos, caps.clone())
                        .or_else(|| self.walk(child, pos, caps, &looped))
                } else {
                    self.walk(child, pos, caps.clone(), &looped)
                        .or_else(|| self.apply(k, pos, caps))
                }
            }
        }
    }

    fn apply<'c>(&self, k: &'c Cont<'c>, pos: usize, mut caps: Caps) -> Option<(usize, Caps)> {
        match k {
            Cont::Done { anchored } => {
                if !*anchored || pos == self.chars.len() {
                    Some((pos, caps))
                } else {
                    None
                }
            }
            Cont::Seq { rest, tail } => {
                if rest.is_empty() {
                    self.apply(tail, pos, caps)
                } else {
                    let next = Cont::Seq {
                        rest: &rest[1..],
                        tail,
                    };
                    self.walk(&rest[0], pos, caps, &next)
                }
            }
            Cont::CloseGroup { index, start, tail } => {
                caps[*index as usize - 1] = Some((*start, pos));
                self.apply(tail, pos, caps)
            }
            Cont::Loop {
                child,
                min_left,
                max_left,
                lazy,
                entry_pos,
                entry_caps,
                tail,
            } => {
                // Empty-progress guard: an iteration that consumed nothing
                // and moved no capture must not re-enter. Any remaining
                // mandatory iterations would be identical no-ops, so the
                // minimum counts as satisfied.
                let progressed = pos != *entry_pos || caps != *entry_caps;
                if !progressed || *max_left == Some(0) {
                    return self.apply(tail, pos, caps);
                }
                let next = Cont::Loop {
                    child,
                    min_left: min_left.saturating_sub(1),
                    max_left: max_left.map(|m| m - 1),
                    lazy: *lazy,
                    entry_pos: pos,
                    entry_caps: caps.clone(),
                    tail,
                };
                if *min_left > 0 {
                    self.walk(child, pos, caps, &next)
                } else if *lazy {
                    self.apply(tail, pos, caps.clone())
                        .or_else(|| self.walk(child, pos, caps, &next))
                } else {
                    self.walk(child, pos, caps.clone(), &next)
                        .or_else(|| self.apply(tail, pos, caps))
                }
            }
        }
    }
}

fn class_matches(items: &[ClassItem], negated: bool, c: char) -> bool {
    let hit = items.iter().any(|item| match item {
        ClassItem::Single(s) => *s == c,
        ClassItem::Range(lo, hi) => *lo <= c && c <= *hi,
        ClassItem::Shorthand(shorthand) => shorthand.matches(c),
    });
    hit != negated
}
