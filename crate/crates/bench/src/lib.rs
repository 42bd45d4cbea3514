//! Input builders shared by the engine benchmarks.
//!
//! The builders live in the library rather than the bench target so a
//! suspicious number can be reproduced from a test or a scratch binary
//! with the exact same inputs.

use rex_core::{compile, parse, StateMachine};

/// Parses and compiles, panicking on bad input; benchmark patterns are
/// fixed strings that must always be valid.
pub fn machine(pattern: &str) -> StateMachine {
    compile(&parse(pattern).expect("benchmark pattern must parse"))
}

/// `X`, then `run` uppercase letters, then `X`, twice over. The shape on
/// which greedy and lazy repetition pick maximally different spans:
/// `X[A-Z]*X` claims everything, `X[A-Z]*?X` stops at the middle `X`.
pub fn bracketed_run(run: usize) -> String {
    let letters = ['A', 'B', 'C', 'D', 'E', 'F', 'G', 'H'];
    let mut subject = String::with_capacity(2 * run + 3);
    for half in 0..2 {
        subject.push('X');
        for index in 0..run {
            subject.push(letters[(index + half) % letters.len()]);
        }
    }
    subject.push('X');
    subject
}

/// Lowercase prose with a `DFN<letter><digits>` token seeded into every
/// `stride`-th sentence, mirroring the corpus-scan workload: long
/// stretches where the scan fails fast, punctuated by real matches.
pub fn prose_with_tokens(sentences: usize, stride: usize) -> String {
    let fragments = [
        "hereditary hearing impairment maps to a novel locus",
        "linkage analysis in one consanguineous family",
        "the affected members share the haplotype",
        "audiometry shows progressive loss in this branch",
    ];
    let mut text = String::new();
    for index in 0..sentences {
        text.push_str(fragments[index % fragments.len()]);
        if index % stride == 0 {
            let letter = (b'A' + (index % 26) as u8) as char;
            text.push_str(&format!(" DFN{letter}{index}"));
        }
        text.push_str(". ");
    }
    text
}
