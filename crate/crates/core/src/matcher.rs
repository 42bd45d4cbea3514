//! Backtracking execution of a compiled state machine.
//!
//! The matcher explores transitions in list order (depth first), which is
//! exactly what makes the semantics leftmost-first rather than
//! leftmost-longest: the first accepting path wins, greedy loops iterate
//! before leaving, lazy loops leave before iterating, and alternation tries
//! its left branch first.
//!
//! Two mechanisms keep exploration finite and affordable:
//!
//! * A visited set over (state, position, capture generation). Re-entering
//!   a configuration the search has already been in can change nothing, so
//!   it is pruned. With no capture groups the generation is constant and
//!   the set collapses to a bitmap, which doubles as failure memoization
//!   and makes scans over long subjects effectively linear. This is also
//!   the empty-progress guard: a repeat iteration that consumes no input
//!   and advances no capture state lands in a visited configuration and
//!   cannot re-enter, so `(X?)*` and friends terminate. At a greedy loop
//!   hub the guard exits the loop rather than failing the path, keeping
//!   an empty iteration ranked ahead of the body's untried alternatives
//!   (see [`Search::enter`]).
//! * An optional step budget. Patterns with overlapping alternatives can
//!   still go exponential; callers that feed untrusted patterns set
//!   `MatchBudget::limited` and treat [`BudgetExceeded`] as its own
//!   outcome, distinct from "no match".
//!
//! All positions are code-point offsets, never byte offsets.

use crate::nfa::{Label, StateMachine};

/// Half-open interval of code-point offsets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Span {
        Span { start, end }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }
}

impl std::fmt::Display for Span {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{},{})", self.start, self.end)
    }
}

/// A successful match: the overall span plus one optional span per capture
/// group. Group 0 is the overall span; groups that took no part in the
/// match (a skipped optional group, an untaken alternation branch) are
/// `None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchResult {
    pub span: Span,
    groups: Vec<Option<Span>>,
}

impl MatchResult {
    pub(crate) fn from_parts(span: Span, groups: Vec<Option<Span>>) -> MatchResult {
        MatchResult { span, groups }
    }

    /// The span of capture group `index`; `0` is the whole match.
    pub fn group(&self, index: usize) -> Option<Span> {
        if index == 0 {
            Some(self.span)
        } else {
            self.groups.get(index - 1).copied().flatten()
        }
    }

    /// Number of capture groups the pattern declares (not counting group 0).
    pub fn group_count(&self) -> usize {
        self.groups.len()
    }
}

/// Extracts the text of a code-point span.
pub fn span_text(subject: &str, span: Span) -> String {
    subject
        .chars()
        .skip(span.start)
        .take(span.end - span.start)
        .collect()
}

/// Cap on machine-transition attempts for a single `find` (or `match_at`)
/// call. The default is unlimited; the CLI installs a limit so hostile
/// patterns fail cleanly instead of spinning.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatchBudget {
    pub max_steps: Option<u64>,
}

impl MatchBudget {
    pub const UNLIMITED: MatchBudget = MatchBudget { max_steps: None };

    pub fn limited(max_steps: u64) -> MatchBudget {
        MatchBudget {
            max_steps: Some(max_steps),
        }
    }
}

impl Default for MatchBudget {
    fn default() -> Self {
        MatchBudget::UNLIMITED
    }
}

/// The step budget ran out before the search resolved either way.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("match budget exceeded after {steps} steps")]
pub struct BudgetExceeded {
    pub steps: u64,
}

/// Attempts a match anchored at code-point offset `start` (the match must
/// begin there; it may end anywhere). Returns the preferred match or `None`.
///
/// Panics if `start` is beyond the end of the subject.
pub fn match_at(
    machine: &StateMachine,
    subject: &str,
    start: usize,
    budget: &MatchBudget,
) -> Result<Option<MatchResult>, BudgetExceeded> {
    let chars: Vec<char> = subject.chars().collect();
    assert!(
        start <= chars.len(),
        "start offset {start} beyond subject length {}",
        chars.len()
    );
    let mut search = Search::new(machine, &chars, budget);
    search.run(start)
}

/// Finds the leftmost match at or after offset 0.
pub fn find(
    machine: &StateMachine,
    subject: &str,
    budget: &MatchBudget,
) -> Result<Option<MatchResult>, BudgetExceeded> {
    let chars: Vec<char> = subject.chars().collect();
    find_in(machine, &chars, 0, budget)
}

/// Finds every non-overlapping match, scanning left to right.
///
/// Each match resumes at the previous match's end; an empty match resumes
/// one code point past its own start so the scan always advances. The step
/// budget applies to each constituent find, not to the whole call.
pub fn find_all(
    machine: &StateMachine,
    subject: &str,
    budget: &MatchBudget,
) -> Result<Vec<MatchResult>, BudgetExceeded> {
    let chars: Vec<char> = subject.chars().collect();
    let mut results = Vec::new();
    let mut from = 0usize;
    while from <= chars.len() {
        match find_in(machine, &chars, from, budget)? {
            None => break,
            Some(result) => {
                from = if result.span.is_empty() {
                    result.span.start + 1
                } else {
                    result.span.end
                };
                results.push(result);
            }
        }
    }
    Ok(results)
}

impl StateMachine {
    /// Method-style [`find`] with the default (unlimited) budget.
    pub fn find(&self, subject: &str) -> Result<Option<MatchResult>, BudgetExceeded> {
        find(self, subject, &MatchBudget::UNLIMITED)
    }

    /// Method-style [`find_all`] with the default (unlimited) budget.
    pub fn find_all(&self, subject: &str) -> Result<Vec<MatchResult>, BudgetExceeded> {
        find_all(self, subject, &MatchBudget::UNLIMITED)
    }

    /// Method-style [`match_at`] with the default (unlimited) budget.
    pub fn match_at(
        &self,
        subject: &str,
        start: usize,
    ) -> Result<Option<MatchResult>, BudgetExceeded> {
        match_at(self, subject, start, &MatchBudget::UNLIMITED)
    }
}

/// Leftmost search from `from`: tries each start offset in order and
/// returns the first anchored match. The visited set persists across start
/// offsets within one call; a configuration that failed once fails always,
/// whatever offset the attempt began from.
fn find_in(
    machine: &StateMachine,
    chars: &[char],
    from: usize,
    budget: &MatchBudget,
) -> Result<Option<MatchResult>, BudgetExceeded> {
    let mut search = Search::new(machine, chars, budget);
    for start in from..=chars.len() {
        if let Some(result) = search.run(start)? {
            return Ok(Some(result));
        }
    }
    Ok(None)
}

/// Which capture slots changed, for backtracking.
struct UndoEntry {
    slot: usize,
    previous: Option<usize>,
}

struct Frame {
    state: usize,
    pos: usize,
    next_transition: usize,
    /// Undo-log length and generation from just before the transition that
    /// entered this frame; popping the frame rolls both back.
    undo_mark: usize,
    gen_mark: u64,
}

/// Visited-configuration store. Group-free machines never change capture
/// state, so (state, pos) fits in a bitmap; everything else keys on the
/// capture generation as well.
enum Visited {
    Bitmap { words: Vec<u64>, width: usize },
    Keyed(std::collections::HashSet<(usize, usize, u64)>),
}

impl Visited {
    fn insert(&mut self, state: usize, pos: usize, gen: u64) -> bool {
        match self {
            Visited::Bitmap { words, width } => {
                debug_assert_eq!(gen, 0);
                let bit = state * *width + pos;
                let (word, mask) = (bit / 64, 1u64 << (bit % 64));
                let fresh = words[word] & mask == 0;
                words[word] |= mask;
                fresh
            }
            Visited::Keyed(set) => set.insert((state, pos, gen)),
        }
    }
}

struct Search<'m, 'c> {
    machine: &'m StateMachine,
    chars: &'c [char],
    visited: Visited,
    slots: Vec<Option<usize>>,
    undo: Vec<UndoEntry>,
    stack: Vec<Frame>,
    gen: u64,
    next_gen: u64,
    steps: u64,
    max_steps: Option<u64>,
}

impl<'m, 'c> Search<'m, 'c> {
    fn new(machine: &'m StateMachine, chars: &'c [char], budget: &MatchBudget) -> Self {
        let width = chars.len() + 1;
        let visited = if machine.group_count == 0 {
            let bits = machine.states.len() * width;
            Visited::Bitmap {
                words: vec![0u64; bits / 64 + 1],
                width,
            }
        } else {
            Visited::Keyed(std::collections::HashSet::new())
        };
        Search {
            machine,
            chars,
            visited,
            slots: vec![None; machine.group_count as usize * 2],
            undo: Vec::new(),
            stack: Vec::new(),
            gen: 0,
            next_gen: 1,
            steps: 0,
            max_steps: budget.max_steps,
        }
    }

    /// One anchored attempt from `start`. Capture slots, the undo log, and
    /// the stack are fully unwound between calls; the visited set and step
    /// count carry over.
    fn run(&mut self, start: usize) -> Result<Option<MatchResult>, BudgetExceeded> {
        debug_assert!(self.stack.is_empty());
        debug_assert!(self.undo.is_empty());
        self.gen = 0;

        if !self.visited.insert(self.machine.start, start, 0) {
            return Ok(None); // A previous attempt already explored this.
        }
        if self.machine.start == self.machine.accept {
            return Ok(Some(self.build_result(start, start)));
        }
        self.stack.push(Frame {
            state: self.machine.start,
            pos: start,
            next_transition: 0,
            undo_mark: 0,
            gen_mark: 0,
        });

        while let Some(frame) = self.stack.last_mut() {
            let state = &self.machine.states[frame.state];
            let Some(transition) = state.transitions.get(frame.next_transition) else {
                let (undo_mark, gen_mark) = (frame.undo_mark, frame.gen_mark);
                self.stack.pop();
                self.rollback(undo_mark, gen_mark);
                continue;
            };
            frame.next_transition += 1;
            let pos = frame.pos;

            self.steps += 1;
            if self.max_steps.is_some_and(|limit| self.steps > limit) {
                self.unwind();
                return Err(BudgetExceeded { steps: self.steps });
            }

            match &transition.label {
                Label::Epsilon => {
                    if let Some(end) = self.enter(transition.target, pos, self.undo.len(), self.gen)
                    {
                        return Ok(Some(self.build_result(start, end)));
                    }
                }
                Label::Consume { set, .. } => {
                    if pos < self.chars.len() && set.contains(self.chars[pos]) {
                        if let Some(end) =
                            self.enter(transition.target, pos + 1, self.undo.len(), self.gen)
                        {
                            return Ok(Some(self.build_result(start, end)));
                        }
                    }
                }
                Label::CaptureStart(group) => {
                    let slot = (*group as usize - 1) * 2;
                    let (undo_mark, gen_mark) = (self.undo.len(), self.gen);
                    self.write_slot(slot, pos);
                    if let Some(end) = self.enter(transition.target, pos, undo_mark, gen_mark) {
                        return Ok(Some(self.build_result(start, end)));
                    }
                }
                Label::CaptureEnd(group) => {
                    let slot = (*group as usize - 1) * 2 + 1;
                    let (undo_mark, gen_mark) = (self.undo.len(), self.gen);
                    self.write_slot(slot, pos);
                    if let Some(end) = self.enter(transition.target, pos, undo_mark, gen_mark) {
                        return Ok(Some(self.build_result(start, end)));
                    }
                }
            }
        }
        Ok(None)
    }

    /// Tries to move into `state` at `pos`. Returns `Some(end)` when that
    /// state is the accept state; otherwise pushes a frame (or rolls back
    /// to the marks if the configuration was already visited).
    ///
    /// Re-reaching a greedy loop hub in an already-visited configuration
    /// means an iteration just finished without consuming input or moving
    /// a capture boundary. Matching that empty iteration again would spin,
    /// but failing outright would hand control to the iteration's other
    /// alternatives, and those must rank below the loop exit: an empty
    /// iteration ends the loop first and the body is only retried if the
    /// rest of the pattern fails. So instead of pruning, the hub is
    /// re-entered at its exit transition alone.
    fn enter(
        &mut self,
        state: usize,
        pos: usize,
        undo_mark: usize,
        gen_mark: u64,
    ) -> Option<usize> {
        if !self.visited.insert(state, pos, self.gen) {
            if let Some(exit) = self.machine.states[state].loop_exit {
                self.stack.push(Frame {
                    state,
                    pos,
                    next_transition: exit,
                    undo_mark,
                    gen_mark,
                });
                return None;
            }
            self.rollback(undo_mark, gen_mark);
            return None;
        }
        if state == self.machine.accept {
            return Some(pos);
        }
        self.stack.push(Frame {
            state,
            pos,
            next_transition: 0,
            undo_mark,
            gen_mark,
        });
        None
    }

    /// Records `slot = pos`, bumping the capture generation only on a real
    /// change. Writing the value a slot already holds is a no-op, which is
    /// what lets the visited set cut off capture-stable empty loops.
    fn write_slot(&mut self, slot: usize, pos: usize) {
        if self.slots[slot] == Some(pos) {
            return;
        }
        self.undo.push(UndoEntry {
            slot,
            previous: self.slots[slot],
        });
        self.slots[slot] = Some(pos);
        self.gen = self.next_gen;
        self.next_gen += 1;
    }

    fn rollback(&mut self, undo_mark: usize, gen_mark: u64) {
        while self.undo.len() > undo_mark {
            let entry = self.undo.pop().expect("length checked");
            self.slots[entry.slot] = entry.previous;
        }
        self.gen = gen_mark;
    }

    /// Clears per-attempt state (used on early exits such as a blown
    /// budget) so the next `run` starts clean.
    fn unwind(&mut self) {
        self.stack.clear();
        self.rollback(0, 0);
    }

    fn build_result(&mut self, start: usize, end: usize) -> MatchResult {
        let groups = self
            .slots
            .chunks(2)
            .map(|pair| match (pair[0], pair[1]) {
                (Some(s), Some(e)) => Some(Span::new(s, e)),
                _ => None,
            })
            .collect();
        self.unwind();
        MatchResult {
            span: Span::new(start, end),
            groups,
        }
    }
}
