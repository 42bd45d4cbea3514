//! Compilation of a parsed pattern into a nondeterministic finite state
//! machine with epsilon transitions.
//!
//! The construction is Thompson-style composition with one extra rule:
//! counted repeats are expanded by copying their sub-machine, so `X{3,12}`
//! becomes three mandatory copies followed by nine optional ones and no
//! runtime counters are needed. Capture boundaries ride along as
//! epsilon-like `CaptureStart`/`CaptureEnd` transitions.
//!
//! Transition order is load-bearing. The matcher tries a state's
//! transitions in the order they appear, so greedy loops list "iterate"
//! before "leave", lazy loops the reverse, and alternation branches appear
//! in source order. No separate priority field exists; the list order is
//! the whole story.

use crate::syntax::{Ast, ClassItem, Pattern, Shorthand};

/// A set of Unicode scalar values, stored as sorted, disjoint, inclusive
/// ranges of code points.
///
/// Compilation normalizes every atom (literal, class, shorthand, dot) into
/// one of these, so the matcher does a binary search per character instead
/// of re-interpreting class syntax.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodePointSet {
    ranges: Vec<(u32, u32)>,
}

const MAX_SCALAR: u32 = 0x10FFFF;

impl CodePointSet {
    fn from_sorted_candidates(mut raw: Vec<(u32, u32)>) -> CodePointSet {
        raw.sort_unstable();
        let mut ranges: Vec<(u32, u32)> = Vec::with_capacity(raw.len());
        for (lo, hi) in raw {
            match ranges.last_mut() {
                // Merge adjacent and overlapping ranges.
                Some((_, prev_hi)) if lo <= prev_hi.saturating_add(1) => {
                    *prev_hi = (*prev_hi).max(hi);
                }
                _ => ranges.push((lo, hi)),
            }
        }
        CodePointSet { ranges }
    }

    fn single(c: char) -> CodePointSet {
        CodePointSet {
            ranges: vec![(c as u32, c as u32)],
        }
    }

    fn from_shorthand(shorthand: Shorthand) -> CodePointSet {
        let positive = |ranges: &[(u32, u32)]| CodePointSet {
            ranges: ranges.to_vec(),
        };
        match shorthand {
            Shorthand::Digit => positive(&[('0' as u32, '9' as u32)]),
            Shorthand::NotDigit => positive(&[('0' as u32, '9' as u32)]).complement(),
            Shorthand::Word => positive(&[
                ('0' as u32, '9' as u32),
                ('A' as u32, 'Z' as u32),
                ('_' as u32, '_' as u32),
                ('a' as u32, 'z' as u32),
            ]),
            Shorthand::NotWord => Self::from_shorthand(Shorthand::Word).complement(),
            Shorthand::Whitespace => Self::from_sorted_candidates(vec![
                ('\t' as u32, '\n' as u32),
                ('\u{c}' as u32, '\r' as u32),
                (' ' as u32, ' ' as u32),
            ]),
            Shorthand::NotWhitespace => Self::from_shorthand(Shorthand::Whitespace).complement(),
        }
    }

    pub(crate) fn from_class(items: &[ClassItem], negated: bool) -> CodePointSet {
        let mut raw = Vec::new();
        for item in items {
            match item {
                ClassItem::Single(c) => raw.push((*c as u32, *c as u32)),
                ClassItem::Range(lo, hi) => raw.push((*lo as u32, *hi as u32)),
                ClassItem::Shorthand(shorthand) => {
                    raw.extend(Self::from_shorthand(*shorthand).ranges)
                }
            }
        }
        let set = Self::from_sorted_candidates(raw);
        if negated {
            set.complement()
        } else {
            set
        }
    }

    fn any_but_newline() -> CodePointSet {
        CodePointSet::single('\n').complement()
    }

    /// Complement over the full scalar-value space. Surrogate code points
    /// end up included in the ranges but can never be observed: `char`
    /// cannot hold them.
    fn complement(&self) -> CodePointSet {
        let mut ranges = Vec::with_capacity(self.ranges.len() + 1);
        let mut next = 0u32;
        for &(lo, hi) in &self.ranges {
            if lo > next {
                ranges.push((next, lo - 1));
            }
            next = hi.saturating_add(1);
        }
        if next <= MAX_SCALAR {
            ranges.push((next, MAX_SCALAR));
        }
        CodePointSet { ranges }
    }

    /// Membership test.
    pub fn contains(&self, c: char) -> bool {
        let v = c as u32;
        self.ranges
            .binary_search_by(|&(lo, hi)| {
                if v < lo {
                    std::cmp::Ordering::Greater
                } else if v > hi {
                    std::cmp::Ordering::Less
                } else {
                    std::cmp::Ordering::Equal
                }
            })
            .is_ok()
    }

    /// True when no code point is a member (e.g. `[^\d\D]`).
    pub fn is_empty(&self) -> bool {
        self.ranges.is_empty()
    }
}

/// Transition label. `Epsilon`, `CaptureStart`, and `CaptureEnd` consume no
/// input; `Consume` consumes exactly one code point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Label {
    Epsilon,
    /// Consume one code point in `set`. `display` is the source-level
    /// spelling used for diagrams, e.g. `X`, `.`, `\d`, or `[A-Z]`.
    Consume {
        set: CodePointSet,
        display: String,
    },
    /// Record the start of capture group `.0` at the current position.
    CaptureStart(u32),
    /// Record the end of capture group `.0` at the current position.
    CaptureEnd(u32),
}

/// A directed edge of the machine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub target: usize,
    pub label: Label,
}

/// One machine state; `transitions` are ordered by preference.
///
/// `loop_exit` is set only on the hub state of a greedy unbounded repeat
/// and holds the index of the hub's exit transition, which is always the
/// last one. The matcher uses it to leave the loop directly when an
/// iteration finishes without consuming input or moving a capture
/// boundary, rather than retrying the body.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct State {
    pub transitions: Vec<Transition>,
    pub loop_exit: Option<usize>,
}

/// The compiled machine.
///
/// There is exactly one accepting state and it has no outgoing transitions.
/// Every state is reachable from `start`. The machine is anchored at its
/// start only; the matcher layers unanchored search on top.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateMachine {
    pub states: Vec<State>,
    pub start: usize,
    pub accept: usize,
    pub group_count: u32,
    pub source_pattern: String,
}

/// Number of atoms the pattern occupies once counted repeats are expanded.
///
/// `Repeat(child, n, m)` counts as `n` mandatory plus `m - n` optional
/// copies of the child; an unbounded repeat counts as `n` copies plus one
/// star node wrapping a final copy. Groups count as one atom around their
/// contents. This is the yardstick for the compiled machine's size: the
/// state count never exceeds `4 * expanded_size + 4`.
pub fn expanded_size(ast: &Ast) -> u64 {
    match ast {
        Ast::Literal(_) | Ast::AnyChar | Ast::CharClass { .. } | Ast::Shorthand(_) => 1,
        Ast::Concat(children) => children
            .iter()
            .map(expanded_size)
            .fold(0, u64::saturating_add),
        Ast::Alternation(branches) => branches
            .iter()
            .map(expanded_size)
            .fold(0, u64::saturating_add),
        Ast::Group { child, .. } => 1u64.saturating_add(expanded_size(child)),
        Ast::Repeat {
            child, min, max, ..
        } => {
            let child_size = expanded_size(child);
            match max {
                Some(max) => child_size.saturating_mul(u64::from(*max)),
                // n copies plus a star node holding one more copy.
                None => child_size
                    .saturating_mul(u64::from(*min))
                    .saturating_add(1)
                    .saturating_add(child_size),
            }
        }
    }
}

/// Compiles a parsed pattern into a state machine.
///
/// The machine accepts, via some path from `start` to `accept`, exactly
/// the strings the pattern derives when anchored at both ends.
pub fn compile(pattern: &Pattern) -> StateMachine {
    let mut builder = Builder { states: Vec::new() };
    let start = builder.fresh();
    let accept = builder.fresh();
    builder.emit(&pattern.ast, start, accept);
    builder.into_machine(start, accept, pattern)
}

struct Builder {
    states: Vec<State>,
}

impl Builder {
    fn fresh(&mut self) -> usize {
        self.states.push(State::default());
        self.states.len() - 1
    }

    fn add(&mut self, from: usize, to: usize, label: Label) {
        self.states[from]
            .transitions
            .push(Transition { target: to, label });
    }

    fn consume(&mut self, from: usize, to: usize, set: CodePointSet, display: String) {
        self.add(from, to, Label::Consume { set, display });
    }

    /// Wires `node` between the existing states `from` and `to`. All fresh
    /// transitions leaving `from` are appended in preference order, so a
    /// caller that emits two children against the same `from` (alternation)
    /// gets source-order preference for free.
    fn emit(&mut self, node: &Ast, from: usize, to: usize) {
        match node {
            Ast::Literal(c) => {
                self.consume(from, to, CodePointSet::single(*c), display_literal(*c))
            }
            Ast::AnyChar => self.consume(from, to, CodePointSet::any_but_newline(), ".".into()),
            Ast::Shorthand(shorthand) => self.consume(
                from,
                to,
                CodePointSet::from_shorthand(*shorthand),
                format!("\\{}", shorthand.letter()),
            ),
            Ast::CharClass { items, negated } => {
                let display = crate::syntax::render(node);
                self.consume(from, to, CodePointSet::from_class(items, *negated), display)
            }
            Ast::Concat(children) => match children.len() {
                0 => self.add(from, to, Label::Epsilon),
                1 => self.emit(&children[0], from, to),
                _ => {
                    let mut current = from;
                    for child in &children[..children.len() - 1] {
                        let next = self.fresh();
                        self.emit(child, current, next);
                        current = next;
                    }
                    self.emit(children.last().expect("non-empty"), current, to);
                }
            },
            Ast::Alternation(branches) => {
                for branch in branches {
                    self.emit(branch, from, to);
                }
            }
            Ast::Group { index, child } => {
                let inner_start = self.fresh();
                let inner_end = self.fresh();
                self.add(from, inner_start, Label::CaptureStart(*index));
                self.emit(child, inner_start, inner_end);
                self.add(inner_end, to, Label::CaptureEnd(*index));
            }
            Ast::Repeat {
                child,
                min,
                max,
                lazy,
            } => self.emit_repeat(child, *min, *max, *lazy, from, to),
        }
    }

    fn emit_repeat(
        &mut self,
        child: &Ast,
        min: u32,
        max: Option<u32>,
        lazy: bool,
        from: usize,
        to: usize,
    ) {
        // Mandatory copies first, chained through fresh states.
        let mut current = from;
        for i in 0..min {
            let is_last_piece = max == Some(min) && i == min - 1;
            if is_last_piece {
                self.emit(child, current, to);
                return;
            }
            let next = self.fresh();
            self.emit(child, current, next);
            current = next;
        }

        match max {
            None => {
                // A dedicated hub keeps the loop-back edge away from `from`,
                // which other branches may share.
                let hub = self.fresh();
                self.add(current, hub, Label::Epsilon);
                if lazy {
                    self.add(hub, to, Label::Epsilon);
                    self.emit(child, hub, hub);
                } else {
                    self.emit(child, hub, hub);
                    self.add(hub, to, Label::Epsilon);
                    let exit = self.states[hub].transitions.len() - 1;
                    self.states[hub].loop_exit = Some(exit);
                }
            }
            Some(max) => {
                if max == min {
                    // Only reachable for `{0}`: the loop above handled
                    // min > 0, so the repeat matches nothing but epsilon.
                    debug_assert_eq!(min, 0);
                    self.add(current, to, Label::Epsilon);
                    return;
                }
                // Optional copies nest: each may be entered or skipped, and
                // skipping jumps straight to `to`.
                let optional = max - min;
                for i in 0..optional {
                    let next = if i + 1 == optional { to } else { self.fresh() };
                    if lazy {
                        self.add(current, to, Label::Epsilon);
                        self.emit(child, current, next);
                    } else {
                        self.emit(child, current, next);
                        self.add(current, to, Label::Epsilon);
                    }
                    current = next;
                }
            }
        }
    }

    /// Finalizes state numbering: creation order, except the accept state
    /// is moved to the highest id so diagrams read start-to-accept.
    fn into_machine(self, start: usize, accept: usize, pattern: &Pattern) -> StateMachine {
        let n = self.states.len();
        let renumber = |old: usize| -> usize {
            if old == accept {
                n - 1
            } else if old > accept {
                old - 1
            } else {
                old
            }
        };
        let mut states = vec![State::default(); n];
        for (old, state) in self.states.into_iter().enumerate() {
            let transitions = state
                .transitions
                .into_iter()
                .map(|t| Transition {
                    target: renumber(t.target),
                    label: t.label,
                })
                .collect();
            states[renumber(old)] = State {
                transitions,
                loop_exit: state.loop_exit,
            };
        }
        StateMachine {
            states,
            start: renumber(start),
            accept: n - 1,
            group_count: pattern.group_count,
            source_pattern: pattern.source.clone(),
        }
    }
}

fn display_literal(c: char) -> String {
    let mut out = String::new();
    match c {
        '\n' => out.push_str("\\n"),
        '\r' => out.push_str("\\r"),
        '\t' => out.push_str("\\t"),
        '\u{c}' => out.push_str("\\f"),
        _ => out.push(c),
    }
    out
}

impl StateMachine {
    /// Renders the machine in Graphviz DOT form.
    ///
    /// The output is deterministic: nodes `s0..sN` in state-id order, a
    /// headless entry arrow into the start state, a double circle on the
    /// accept state, and edges listed by source id then preference.
    /// Identical machines render byte-identically.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        out.push_str("digraph statemachine {\n");
        out.push_str("  rankdir=LR;\n");
        out.push_str("  __entry [shape=none, label=\"\", width=0, height=0];\n");
        for id in 0..self.states.len() {
            let shape = if id == self.accept {
                "doublecircle"
            } else {
                "circle"
            };
            out.push_str(&format!("  s{id} [shape={shape}];\n"));
        }
        out.push_str(&format!("  __entry -> s{};\n", self.start));
        for (id, state) in self.states.iter().enumerate() {
            for transition in &state.transitions {
                let label = match &transition.label {
                    Label::Epsilon => "ε".to_string(),
                    Label::Consume { display, .. } => display.clone(),
                    Label::CaptureStart(k) => format!("start${k}"),
                    Label::CaptureEnd(k) => format!("end${k}"),
                };
                out.push_str(&format!(
                    "  s{id} -> s{} [label=\"{}\"];\n",
                    transition.target,
                    escape_dot(&label)
                ));
            }
        }
        out.push_str("}\n");
        out
    }
}

fn escape_dot(label: &str) -> String {
    let mut out = String::with_capacity(label.len());
    for c in label.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            _ => out.push(c),
        }
    }
    out
}
