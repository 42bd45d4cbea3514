//! A small regular-expression engine with Perl-style leftmost-first
//! semantics, plus the tooling that grew around it: a reference
//! interpreter for cross-checking, a JSONL corpus loader, a refinement
//! pipeline for measuring how well a pattern narrows a corpus, and a
//! search provider that fetches corpora from files or an HTTP service.
//!
//! The supported pattern language is a compact subset of Perl 5 syntax:
//! literals, `.`, character classes, `\d \w \s` and their complements,
//! alternation, capturing groups, and the quantifiers `* + ? {n} {n,}
//! {n,m}` with lazy variants. Patterns compile to a nondeterministic
//! state machine that a backtracking matcher executes; transition order
//! in the machine encodes all preference (greedy, lazy, branch order),
//! so the matcher itself has no special cases.
//!
//! Quick tour:
//!
//! ```
//! use rex_core::{compile, parse};
//!
//! let pattern = parse("X[A-Z]*?X").unwrap();
//! let machine = compile(&pattern);
//! let hit = machine.find("XABCXABCX").unwrap().unwrap();
//! assert_eq!((hit.span.start, hit.span.end), (0, 5));
//! ```

pub mod corpus;
pub mod matcher;
pub mod nfa;
pub mod oracle;
pub mod pipeline;
pub mod provider;
pub mod syntax;
#[cfg(feature = "testkit")]
pub mod testkit;

pub use matcher::{BudgetExceeded, MatchBudget, MatchResult, Span};
pub use nfa::{compile, StateMachine};
pub use syntax::{parse, Pattern, SyntaxError, SyntaxErrorKind};
