//! Pattern syntax: tokenizer, parser, and renderer for the supported
//! regular-expression subset.
//!
//! The subset covers literals, `.`, bracketed character classes (with
//! ranges, negation, and a literal dash at the start or end), the shorthand
//! classes `\d \D \w \W \s \S`, capturing groups, alternation, and the
//! quantifiers `* + ? {n} {n,} {n,m}` with an optional `?` suffix for lazy
//! matching. Anchors, flags, non-capturing groups, backreferences, and
//! lookaround are rejected with an `unsupported-construct` error rather than
//! silently misparsed.
//!
//! All offsets reported in errors are code-point offsets into the pattern,
//! not byte offsets.

use std::fmt;

/// Largest value accepted for either bound of a `{n,m}` quantifier.
///
/// Counted repeats are compiled by copying their sub-machine, so the bound
/// directly limits machine growth.
pub const MAX_REPEAT_BOUND: u32 = 1000;

/// Maximum group/alternation nesting depth accepted by the parser.
///
/// The parser is recursive descent; the cap keeps pathological inputs such
/// as ten thousand open parentheses from overflowing the stack.
pub const MAX_NESTING_DEPTH: usize = 250;

/// Maximum total atom count after expanding counted repeats.
///
/// Bounds on individual repeats do not bound their product under nesting
/// (`((X{1000}){1000}){1000}` would expand to a billion atoms), so the
/// parser rejects patterns whose expansion exceeds this limit.
pub const MAX_EXPANDED_ATOMS: u64 = 1_000_000;

/// What went wrong while tokenizing or parsing a pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SyntaxErrorKind {
    /// Pattern ends in a bare backslash.
    UnterminatedEscape,
    /// Backslash followed by a character outside the known escape set.
    UnknownEscape,
    /// `{` that does not introduce a well-formed numeric quantifier.
    MalformedBrace,
    /// `(` without `)` or a stray `)`.
    UnbalancedParenthesis,
    /// Quantifier with no preceding atom, or stacked onto another quantifier.
    DanglingQuantifier,
    /// `{n,m}` with `n > m`.
    InvalidBounds,
    /// Repeat bound above [`MAX_REPEAT_BOUND`].
    BoundTooLarge,
    /// Recognised but unsupported syntax: anchors, `(?...)` forms,
    /// backreferences.
    UnsupportedConstruct,
    /// `[` without a closing `]`.
    UnterminatedClass,
    /// `[]` or `[^]`: a class must contain at least one item.
    EmptyClass,
    /// Class range whose endpoints are inverted, e.g. `[z-a]`.
    InvalidClassRange,
    /// Group nesting beyond [`MAX_NESTING_DEPTH`].
    NestingTooDeep,
    /// Expansion of counted repeats exceeds [`MAX_EXPANDED_ATOMS`].
    PatternTooLarge,
}

impl SyntaxErrorKind {
    /// Stable kebab-case name used in diagnostics.
    pub fn as_str(self) -> &'static str {
        match self {
            SyntaxErrorKind::UnterminatedEscape => "unterminated-escape",
            SyntaxErrorKind::UnknownEscape => "unknown-escape",
            SyntaxErrorKind::MalformedBrace => "malformed-brace",
            SyntaxErrorKind::UnbalancedParenthesis => "unbalanced-parenthesis",
            SyntaxErrorKind::DanglingQuantifier => "dangling-quantifier",
            SyntaxErrorKind::InvalidBounds => "invalid-bounds",
            SyntaxErrorKind::BoundTooLarge => "bound-too-large",
            SyntaxErrorKind::UnsupportedConstruct => "unsupported-construct",
            SyntaxErrorKind::UnterminatedClass => "unterminated-class",
            SyntaxErrorKind::EmptyClass => "empty-class",
            SyntaxErrorKind::InvalidClassRange => "invalid-class-range",
            SyntaxErrorKind::NestingTooDeep => "nesting-too-deep",
            SyntaxErrorKind::PatternTooLarge => "pattern-too-large",
        }
    }
}

impl fmt::Display for SyntaxErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Syntax error with the code-point offset where it was detected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("{kind} at offset {offset}")]
pub struct SyntaxError {
    pub kind: SyntaxErrorKind,
    pub offset: usize,
}

impl SyntaxError {
    fn new(kind: SyntaxErrorKind, offset: usize) -> Self {
        SyntaxError { kind, offset }
    }
}

/// The six shorthand character classes.
///
/// These are ASCII-scoped: `\d` is `[0-9]`, `\w` is `[A-Za-z0-9_]`, and
/// `\s` is space, tab, newline, carriage return, and form feed. The
/// uppercase variants match exactly the complement of their lowercase
/// counterpart over all Unicode scalar values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Shorthand {
    Digit,
    NotDigit,
    Word,
    NotWord,
    Whitespace,
    NotWhitespace,
}

impl Shorthand {
    fn from_letter(c: char) -> Option<Shorthand> {
        Some(match c {
            'd' => Shorthand::Digit,
            'D' => Shorthand::NotDigit,
            'w' => Shorthand::Word,
            'W' => Shorthand::NotWord,
            's' => Shorthand::Whitespace,
            'S' => Shorthand::NotWhitespace,
            _ => return None,
        })
    }

    /// The letter written after the backslash.
    pub fn letter(self) -> char {
        match self {
            Shorthand::Digit => 'd',
            Shorthand::NotDigit => 'D',
            Shorthand::Word => 'w',
            Shorthand::NotWord => 'W',
            Shorthand::Whitespace => 's',
            Shorthand::NotWhitespace => 'S',
        }
    }

    /// Membership test for a single code point.
    pub fn matches(self, c: char) -> bool {
        match self {
            Shorthand::Digit => c.is_ascii_digit(),
            Shorthand::NotDigit => !c.is_ascii_digit(),
            Shorthand::Word => c.is_ascii_alphanumeric() || c == '_',
            Shorthand::NotWord => !(c.is_ascii_alphanumeric() || c == '_'),
            Shorthand::Whitespace => matches!(c, ' ' | '\t' | '\n' | '\r' | '\u{c}'),
            Shorthand::NotWhitespace => !matches!(c, ' ' | '\t' | '\n' | '\r' | '\u{c}'),
        }
    }
}

/// Token classification produced by [`tokenize`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    /// A plain character, taken verbatim from the pattern.
    Literal(char),
    /// `.`
    Dot,
    /// `*`
    Star,
    /// `+`
    Plus,
    /// `?`
    Question,
    /// `{n}`, `{n,}`, or `{n,m}`. Bounds are validated by the parser, not
    /// the tokenizer, so `min <= max` only holds for patterns that parse.
    BraceQuantifier { min: u64, max: Option<u64> },
    /// `|`
    AlternationBar,
    /// `(`
    GroupOpen,
    /// `)`
    GroupClose,
    /// `[`
    ClassOpen,
    /// `]` inside a class.
    ClassClose,
    /// `^` immediately after `[`.
    ClassNegate,
    /// `-` inside a class; the parser decides range versus literal dash.
    RangeDash,
    /// The six shorthand classes.
    ShorthandClass(Shorthand),
    /// `\x` for a known escape; the carried char is the resolved value
    /// (`\n` carries a newline, `\.` carries a dot).
    EscapedLiteral(char),
}

/// One lexeme of the pattern.
///
/// `position` is the code-point offset of the first character of the
/// lexeme; concatenating the lexemes of a token stream reproduces the
/// pattern exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    pub position: usize,
}

/// One item of a bracketed character class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassItem {
    /// A single code point.
    Single(char),
    /// An inclusive code-point range; `lo <= hi` always holds.
    Range(char, char),
    /// An embedded shorthand class like the `\s` in `[-\s.]`.
    Shorthand(Shorthand),
}

/// Abstract syntax tree of a pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ast {
    /// Matches exactly one code point.
    Literal(char),
    /// `.`: any code point except newline.
    AnyChar,
    /// Bracketed class; `negated` flips membership.
    CharClass {
        items: Vec<ClassItem>,
        negated: bool,
    },
    /// `\d`, `\w`, ... outside a class.
    Shorthand(Shorthand),
    /// Sequence; an empty sequence matches the empty string.
    Concat(Vec<Ast>),
    /// Ordered alternatives (two or more as produced by the parser).
    Alternation(Vec<Ast>),
    /// Capturing group. Indices are assigned left to right by opening
    /// parenthesis, starting at 1.
    Group { index: u32, child: Box<Ast> },
    /// Quantified node; `max == None` means unbounded. `lazy` flips the
    /// preference from longest-first to shortest-first.
    Repeat {
        child: Box<Ast>,
        min: u32,
        max: Option<u32>,
        lazy: bool,
    },
}

/// A parsed pattern: the AST root plus the number of capturing groups and
/// the original source text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    pub ast: Ast,
    pub group_count: u32,
    pub source: String,
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

/// Characters that may follow a backslash and stand for themselves.
const ESCAPABLE_PUNCT: &[char] = &[
    '\\', '.', '?', '*', '+', '(', ')', '[', ']', '{', '}', '|', '/', '-', '^',
];

/// Splits a pattern into tokens.
///
/// Tokenization is context sensitive: inside `[...]` most metacharacters
/// lose their meaning and `-` becomes [`TokenKind::RangeDash`]. The
/// tokenizer rejects bare `^`/`$` (anchors are not supported) and
/// backslash-digit (backreferences); a stray `}` or `]` outside a class is
/// an ordinary literal, matching Perl, while `{` must always introduce a
/// well-formed quantifier.
pub fn tokenize(pattern: &str) -> Result<Vec<Token>, SyntaxError> {
    let chars: Vec<char> = pattern.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0usize;
    let mut in_class = false;
    // True only immediately after `[`, where `^` means negation.
    let mut at_class_start = false;

    while i < chars.len() {
        let c = chars[i];
        let position = i;

        if c == '\\' {
            let kind = lex_escape(&chars, i)?;
            tokens.push(Token {
                kind,
                lexeme: chars[i..i + 2].iter().collect(),
                position,
            });
            i += 2;
            at_class_start = false;
            continue;
        }

        if !in_class && c == '{' {
            let (kind, len) = lex_brace(&chars, i)?;
            tokens.push(Token {
                kind,
                lexeme: chars[i..i + len].iter().collect(),
                position,
            });
            i += len;
            continue;
        }

        let kind = if in_class {
            match c {
                ']' => {
                    in_class = false;
                    TokenKind::ClassClose
                }
                '^' if at_class_start => TokenKind::ClassNegate,
                '-' => TokenKind::RangeDash,
                other => TokenKind::Literal(other),
            }
        } else {
            match c {
                '.' => TokenKind::Dot,
                '*' => TokenKind::Star,
                '+' => TokenKind::Plus,
                '?' => TokenKind::Question,
                '|' => TokenKind::AlternationBar,
                '(' => TokenKind::GroupOpen,
                ')' => TokenKind::GroupClose,
                '[' => {
                    in_class = true;
                    TokenKind::ClassOpen
                }
                '^' | '$' => {
                    return Err(SyntaxError::new(
                        SyntaxErrorKind::UnsupportedConstruct,
                        position,
                    ))
                }
                other => TokenKind::Literal(other),
            }
        };

        at_class_start = kind == TokenKind::ClassOpen;
        tokens.push(Token {
            kind,
            lexeme: c.to_string(),
            position,
        });
        i += 1;
    }

    Ok(tokens)
}

fn lex_escape(chars: &[char], at: usize) -> Result<TokenKind, SyntaxError> {
    let Some(&next) = chars.get(at + 1) else {
        return Err(SyntaxError::new(SyntaxErrorKind::UnterminatedEscape, at));
    };
    if ESCAPABLE_PUNCT.contains(&next) {
        return Ok(TokenKind::EscapedLiteral(next));
    }
    if let Some(shorthand) = Shorthand::from_letter(next) {
        return Ok(TokenKind::ShorthandClass(shorthand));
    }
    match next {
        'n' => Ok(TokenKind::EscapedLiteral('\n')),
        'r' => Ok(TokenKind::EscapedLiteral('\r')),
        't' => Ok(TokenKind::EscapedLiteral('\t')),
        'f' => Ok(TokenKind::EscapedLiteral('\u{c}')),
        // Backreferences are recognised so they fail loudly instead of as a
        // generic unknown escape.
        '0'..='9' => Err(SyntaxError::new(SyntaxErrorKind::UnsupportedConstruct, at)),
        _ => Err(SyntaxError::new(SyntaxErrorKind::UnknownEscape, at)),
    }
}

fn lex_brace(chars: &[char], at: usize) -> Result<(TokenKind, usize), SyntaxError> {
    let malformed = || SyntaxError::new(SyntaxErrorKind::MalformedBrace, at);
    let mut j = at + 1;

    let min = lex_number(chars, &mut j).ok_or_else(malformed)?;
    match chars.get(j) {
        Some('}') => Ok((
            TokenKind::BraceQuantifier {
                min,
                max: Some(min),
            },
            j - at + 1,
        )),
        Some(',') => {
            j += 1;
            if chars.get(j) == Some(&'}') {
                return Ok((TokenKind::BraceQuantifier { min, max: None }, j - at + 1));
            }
            let max = lex_number(chars, &mut j).ok_or_else(malformed)?;
            if chars.get(j) == Some(&'}') {
                Ok((
                    TokenKind::BraceQuantifier {
                        min,
                        max: Some(max),
                    },
                    j - at + 1,
                ))
            } else {
                Err(malformed())
            }
        }
        _ => Err(malformed()),
    }
}

fn lex_number(chars: &[char], j: &mut usize) -> Option<u64> {
    let start = *j;
    let mut value: u64 = 0;
    while let Some(d) = chars.get(*j).and_then(|c| c.to_digit(10)) {
        value = value.saturating_mul(10).saturating_add(u64::from(d));
        *j += 1;
    }
    if *j == start {
        None
    } else {
        Some(value)
    }
}

/// Parses a pattern into its AST.
///
/// Total over all inputs: every string up to the documented limits either
/// parses or yields a [`SyntaxError`]; the parser never panics. Capture
/// indices are assigned in order of opening parentheses, starting at 1.
pub fn parse(pattern: &str) -> Result<Pattern, SyntaxError> {
    let tokens = tokenize(pattern)?;
    let mut parser = Parser {
        tokens: &tokens,
        index: 0,
        group_count: 0,
    };
    let ast = parser.alternation(0)?;
    if let Some(extra) = parser.peek() {
        // The only token that can stop `alternation` at top level.
        debug_assert_eq!(extra.kind, TokenKind::GroupClose);
        return Err(SyntaxError::new(
            SyntaxErrorKind::UnbalancedParenthesis,
            extra.position,
        ));
    }
    if crate::nfa::expanded_size(&ast) > MAX_EXPANDED_ATOMS {
        return Err(SyntaxError::new(SyntaxErrorKind::PatternTooLarge, 0));
    }
    Ok(Pattern {
        ast,
        group_count: parser.group_count,
        source: pattern.to_string(),
    })
}

struct Parser<'t> {
    tokens: &'t [Token],
    index: usize,
    group_count: u32,
}

impl<'t> Parser<'t> {
    fn peek(&self) -> Option<&'t Token> {
        self.tokens.get(self.index)
    }

    fn next(&mut self) -> Option<&'t Token> {
        let tok = self.tokens.get(self.index);
        if tok.is_some() {
            self.index += 1;
        }
        tok
    }

    fn eat(&mut self, kind: TokenKind) -> bool {
        if self.peek().map(|t| t.kind) == Some(kind) {
            self.index += 1;
            true
        } else {
            false
        }
    }

    fn alternation(&mut self, depth: usize) -> Result<Ast, SyntaxError> {
        let first = self.concat(depth)?;
        if self.peek().map(|t| t.kind) != Some(TokenKind::AlternationBar) {
            return Ok(first);
        }
        let mut branches = vec![first];
        while self.eat(TokenKind::AlternationBar) {
            branches.push(self.concat(depth)?);
        }
        Ok(Ast::Alternation(branches))
    }

    fn concat(&mut self, depth: usize) -> Result<Ast, SyntaxError> {
        let mut pieces = Vec::new();
        while let Some(tok) = self.peek() {
            match tok.kind {
                TokenKind::AlternationBar | TokenKind::GroupClose => break,
                _ => pieces.push(self.piece(depth)?),
            }
        }
        if pieces.len() == 1 {
            Ok(pieces.pop().expect("length checked"))
        } else {
            Ok(Ast::Concat(pieces))
        }
    }

    /// One atom plus an optional quantifier suffix. Quantifiers bind to the
    /// immediately preceding atom only: `AB*` quantifies just `B`.
    fn piece(&mut self, depth: usize) -> Result<Ast, SyntaxError> {
        let atom = self.atom(depth)?;
        let Some(tok) = self.peek() else {
            return Ok(atom);
        };
        let (min, max) = match tok.kind {
            TokenKind::Star => (0, None),
            TokenKind::Plus => (1, None),
            TokenKind::Question => (0, Some(1)),
            TokenKind::BraceQuantifier { min, max } => {
                let position = tok.position;
                let too_large = u64::from(MAX_REPEAT_BOUND);
                if min > too_large || max.is_some_and(|m| m > too_large) {
                    return Err(SyntaxError::new(SyntaxErrorKind::BoundTooLarge, position));
                }
                if max.is_some_and(|m| m < min) {
                    return Err(SyntaxError::new(SyntaxErrorKind::InvalidBounds, position));
                }
                (min as u32, max.map(|m| m as u32))
            }
            _ => return Ok(atom),
        };
        self.index += 1;
        let lazy = self.eat(TokenKind::Question);
        // A further quantifier has nothing to bind to; `a**` is rejected
        // just like Perl's "nested quantifiers" error.
        if let Some(extra) = self.peek() {
            if is_quantifier(extra.kind) {
                return Err(SyntaxError::new(
                    SyntaxErrorKind::DanglingQuantifier,
                    extra.position,
                ));
            }
        }
        Ok(Ast::Repeat {
            child: Box::new(atom),
            min,
            max,
            lazy,
        })
    }

    fn atom(&mut self, depth: usize) -> Result<Ast, SyntaxError> {
        let tok = self
            .next()
            .expect("concat only calls atom when a token remains");
        match tok.kind {
            TokenKind::Literal(c) | TokenKind::EscapedLiteral(c) => Ok(Ast::Literal(c)),
            TokenKind::Dot => Ok(Ast::AnyChar),
            TokenKind::ShorthandClass(shorthand) => Ok(Ast::Shorthand(shorthand)),
            TokenKind::ClassOpen => self.class_body(tok.position),
            TokenKind::GroupOpen => {
                if depth + 1 > MAX_NESTING_DEPTH {
                    return Err(SyntaxError::new(
                        SyntaxErrorKind::NestingTooDeep,
                        tok.position,
                    ));
                }
                self.group_count += 1;
                let index = self.group_count;
                let child = self.alternation(depth + 1)?;
                match self.next() {
                    Some(close) if close.kind == TokenKind::GroupClose => Ok(Ast::Group {
                        index,
                        child: Box::new(child),
                    }),
                    _ => Err(SyntaxError::new(
                        SyntaxErrorKind::UnbalancedParenthesis,
                        tok.position,
                    )),
                }
            }
            kind if is_quantifier(kind) => {
                // `(?...)` is how flags, non-capturing groups, and
                // lookaround all start; report those as unsupported rather
                // than as a dangling quantifier.
                let after_group_open =
                    self.index >= 2 && self.tokens[self.index - 2].kind == TokenKind::GroupOpen;
                if kind == TokenKind::Question && after_group_open {
                    Err(SyntaxError::new(
                        SyntaxErrorKind::UnsupportedConstruct,
                        tok.position,
                    ))
                } else {
                    Err(SyntaxError::new(
                        SyntaxErrorKind::DanglingQuantifier,
                        tok.position,
                    ))
                }
            }
            // `]`, `^`, `-` outside a class never reach here: the tokenizer
            // emits them as literals or rejects them outright.
            _ => unreachable!("unexpected token {:?} in atom position", tok.kind),
        }
    }

    fn class_body(&mut self, open_position: usize) -> Result<Ast, SyntaxError> {
        let negated = self.eat(TokenKind::ClassNegate);

        // First pass: flatten the token run into primitives, keeping dash
        // positions so range errors point at the dash.
        enum Prim {
            Single(char),
            Shorthand(Shorthand),
            Dash(usize),
        }
        let mut prims = Vec::new();
        loop {
            let Some(tok) = self.next() else {
                return Err(SyntaxError::new(
                    SyntaxErrorKind::UnterminatedClass,
                    open_position,
                ));
            };
            match tok.kind {
                TokenKind::ClassClose => break,
                TokenKind::Literal(c) | TokenKind::EscapedLiteral(c) => prims.push(Prim::Single(c)),
                TokenKind::ShorthandClass(shorthand) => prims.push(Prim::Shorthand(shorthand)),
                TokenKind::RangeDash => prims.push(Prim::Dash(tok.position)),
                other => unreachable!("unexpected token {other:?} inside class"),
            }
        }

        // Second pass: fold `x-y` runs into ranges. A dash is literal when
        // it has no single character on both sides, so `[-\s.]` and `[a-]`
        // behave as written. The one extra wrinkle is a dash opening the
        // class: it is a literal, and like any literal it may start a
        // range, so `[--0]` spans `-` through `0`.
        let mut items = Vec::new();
        let mut i = 0;
        while i < prims.len() {
            let lo = match &prims[i] {
                Prim::Single(c) => Some(*c),
                Prim::Dash(_) if i == 0 => Some('-'),
                _ => None,
            };
            if let (Some(lo), Some(Prim::Dash(dash_pos)), Some(Prim::Single(hi))) =
                (lo, prims.get(i + 1), prims.get(i + 2))
            {
                if lo > *hi {
                    return Err(SyntaxError::new(
                        SyntaxErrorKind::InvalidClassRange,
                        *dash_pos,
                    ));
                }
                items.push(ClassItem::Range(lo, *hi));
                i += 3;
                continue;
            }
            match prims[i] {
                Prim::Single(c) => items.push(ClassItem::Single(c)),
                Prim::Shorthand(shorthand) => items.push(ClassItem::Shorthand(shorthand)),
                Prim::Dash(_) => items.push(ClassItem::Single('-')),
            }
            i += 1;
        }

        if items.is_empty() {
            return Err(SyntaxError::new(SyntaxErrorKind::EmptyClass, open_position));
        }
        Ok(Ast::CharClass { items, negated })
    }
}

fn is_quantifier(kind: TokenKind) -> bool {
    matches!(
        kind,
        TokenKind::Star | TokenKind::Plus | TokenKind::Question | TokenKind::BraceQuantifier { .. }
    )
}

/// Renders an AST back to pattern text.
///
/// The output is canonical rather than byte-identical to the original
/// source (`X{0,1}` comes back as `X?`), but reparsing it yields a
/// structurally identical AST, capture indices included. The renderer
/// assumes a parser-shaped tree; in particular a `Repeat` child must be a
/// single atom, which is the only thing the parser ever produces there.
pub fn render(ast: &Ast) -> String {
    let mut out = String::new();
    render_into(ast, &mut out);
    out
}

fn render_into(ast: &Ast, out: &mut String) {
    match ast {
        Ast::Literal(c) => push_literal(*c, out),
        Ast::AnyChar => out.push('.'),
        Ast::Shorthand(shorthand) => {
            out.push('\\');
            out.push(shorthand.letter());
        }
        Ast::CharClass { items, negated } => {
            out.push('[');
            if *negated {
                out.push('^');
            }
            for item in items {
                match item {
                    ClassItem::Single(c) => push_class_char(*c, out),
                    ClassItem::Range(lo, hi) => {
                        push_class_char(*lo, out);
                        out.push('-');
                        push_class_char(*hi, out);
                    }
                    ClassItem::Shorthand(shorthand) => {
                        out.push('\\');
                        out.push(shorthand.letter());
                    }
                }
            }
            out.push(']');
        }
        Ast::Concat(children) => {
            for child in children {
                render_into(child, out);
            }
        }
        Ast::Alternation(branches) => {
            for (i, branch) in branches.iter().enumerate() {
                if i > 0 {
                    out.push('|');
                }
                render_into(branch, out);
            }
        }
        Ast::Group { child, .. } => {
            out.push('(');
            render_into(child, out);
            out.push(')');
        }
        Ast::Repeat {
            child,
            min,
            max,
            lazy,
        } => {
            render_into(child, out);
            match (min, max) {
                (0, None) => out.push('*'),
                (1, None) => out.push('+'),
                (0, Some(1)) => out.push('?'),
                (n, Some(m)) if n == m => {
                    out.push_str(&format!("{{{n}}}"));
                }
                (n, None) => out.push_str(&format!("{{{n},}}")),
                (n, Some(m)) => out.push_str(&format!("{{{n},{m}}}")),
            }
            if *lazy {
                out.push('?');
            }
        }
    }
}

fn push_named_control(c: char, out: &mut String) -> bool {
    let name = match c {
        '\n' => 'n',
        '\r' => 'r',
        '\t' => 't',
        '\u{c}' => 'f',
        _ => return false,
    };
    out.push('\\');
    out.push(name);
    true
}

fn push_literal(c: char, out: &mut String) {
    if push_named_control(c, out) {
        return;
    }
    // `-` and `/` are escapable but carry no meaning outside a class, so
    // they render bare.
    if ESCAPABLE_PUNCT.contains(&c) && c != '-' && c != '/' {
        out.push('\\');
    }
    out.push(c);
}

fn push_class_char(c: char, out: &mut String) {
    if push_named_control(c, out) {
        return;
    }
    // Inside a class only `\`, `]`, `^`, and `-` are ever special; escaping
    // them unconditionally avoids any position sensitivity.
    if matches!(c, '\\' | ']' | '^' | '-') {
        out.push('\\');
    }
    out.push(c);
}
