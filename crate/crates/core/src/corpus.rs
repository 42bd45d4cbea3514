//! Document corpora and how they load from disk.
//!
//! A corpus is an ordered list of documents with pairwise-distinct,
//! non-empty ids. Two on-disk layouts are supported:
//!
//! * a record file: one JSON object per line with fields `id` (required),
//!   `text` (required), and `meta` (optional flat string map). Blank lines
//!   are skipped; anything else that fails to parse is a hard error naming
//!   its 1-based line number. Unknown fields are rejected.
//! * a directory: every regular file becomes one document whose id is the
//!   file name and whose text is the file contents, in lexicographic
//!   file-name order.
//!
//! Document order is ingestion order and everything downstream preserves
//! it.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};

/// One searchable document. `meta` carries free-form source annotations
/// (title, date, origin) that the engine never interprets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub id: String,
    pub text: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub meta: BTreeMap<String, String>,
}

/// An ordered collection of documents from one source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    pub documents: Vec<Document>,
    pub source_description: String,
}

impl Corpus {
    /// Builds a corpus after checking the id invariants (non-empty,
    /// pairwise distinct).
    pub fn from_documents(
        documents: Vec<Document>,
        source_description: String,
    ) -> Result<Corpus, CorpusError> {
        let mut seen = HashSet::new();
        for document in &documents {
            if document.id.is_empty() {
                return Err(CorpusError::EmptyId);
            }
            if !seen.insert(document.id.as_str()) {
                return Err(CorpusError::DuplicateId {
                    id: document.id.clone(),
                });
            }
        }
        Ok(Corpus {
            documents,
            source_description,
        })
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("io-error: {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    /// A record line that is not a valid record. `line` is 1-based.
    #[error("format-error: line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("duplicate-id: \"{id}\"")]
    DuplicateId { id: String },
    #[error("format-error: record has an empty id")]
    EmptyId,
}

impl CorpusError {
    fn io(path: &Path, source: io::Error) -> CorpusError {
        CorpusError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

/// Loads a corpus from a record file or a directory of plain-text files,
/// depending on what `source` points at.
pub fn load_corpus(source: &Path) -> Result<Corpus, CorpusError> {
    let metadata = fs::metadata(source).map_err(|e| CorpusError::io(source, e))?;
    if metadata.is_dir() {
        load_directory(source)
    } else {
        load_record_file(source)
    }
}

fn load_record_file(path: &Path) -> Result<Corpus, CorpusError> {
    let contents = fs::read_to_string(path).map_err(|e| CorpusError::io(path, e))?;
    let mut documents = Vec::new();
    for (index, line) in contents.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let document: Document = serde_json::from_str(line).map_err(|e| CorpusError::Format {
            line: index + 1,
            message: e.to_string(),
        })?;
        if document.id.is_empty() {
            return Err(CorpusError::Format {
                line: index + 1,
                message: "record has an empty id".to_string(),
            });
        }
        documents.push(document);
    }
    Corpus::from_documents(documents, format!("file {}", path.display()))
}

fn load_directory(path: &Path) -> Result<Corpus, CorpusError> {
    let mut names = Vec::new();
    for entry in fs::read_dir(path).map_err(|e| CorpusError::io(path, e))? {
        let entry = entry.map_err(|e| CorpusError::io(path, e))?;
        let file_type = entry.file_type().map_err(|e| CorpusError::io(path, e))?;
        if file_type.is_file() {
            names.push(entry.file_name().to_string_lossy().into_owned());
        }
    }
    names.sort();

    let mut documents = Vec::new();
    for name in names {
        let file_path = path.join(&name);
        let text = fs::read_to_string(&file_path).map_err(|e| CorpusError::io(&file_path, e))?;
        documents.push(Document {
            id: name,
            text,
            meta: BTreeMap::new(),
        });
    }
    Corpus::from_documents(documents, format!("directory {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn record(id: &str, text: &str) -> String {
        serde_json::json!({ "id": id, "text": text }).to_string()
    }

    fn write_file(dir: &Path, name: &str, contents: &str) {
        let mut f = fs::File::create(dir.join(name)).unwrap();
        f.write_all(contents.as_bytes()).unwrap();
    }

    #[test]
    fn record_file_loads_in_line_order() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("corpus.jsonl");
        let lines = [
            record("d1", "one"),
            record("d2", "two"),
            record("d3", "three"),
        ];
        fs::write(&path, lines.join("\n")).unwrap();
        let corpus = load_corpus(&path).unwrap();
        let ids: Vec<&str> = corpus.documents.iter().map(|d| d.id.as_str()).collect();
        assert_eq!(ids, ["d1", "d2", "d3"]);
        assert_eq!(corpus.documents[1].text, "two");
    }

    #[test]
    fn meta_is_optional_and_preserved() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("corpus.jsonl");
        let line = serde_json::json!({
            "id": "d1",
            "text": "hello",
            "meta": { "source": "unit", "title": "t" }
        })
        .to_string();
        fs::write(&path, line).unwrap();
        let corpus = load_corpus(&path).unwrap();
        assert_eq!(corpus.documents[0].meta["source"], "unit");
        assert_eq!(corpus.documents[0].meta.len(), 2);
    }

    #[test]
    fn blank_lines_are_skipped() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("corpus.jsonl");
        fs::write(
            &path,
            format!("{}\n\n{}\n", record("a", "x"), record("b", "y")),
        )
        .unwrap();
        let corpus = load_corpus(&path).unwrap();
        assert_eq!(corpus.len(), 2);
    }

    #[test]
    fn malformed_line_reports_its_line_number() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("corpus.jsonl");
        fs::write(&path, format!("{}\nnot json\n", record("a", "x"))).unwrap();
        let err = load_corpus(&path).unwrap_err();
        match err {
            CorpusError::Format { line, .. } => assert_eq!(line, 2),
            other => panic!("expected format error, got {other}"),
        }
    }

    #[test]
    fn unknown_fields_are_malformed() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("corpus.jsonl");
        fs::write(&path, r#"{"id":"a","text":"x","extra":1}"#).unwrap();
        assert!(matches!(
            load_corpus(&path).unwrap_err(),
            CorpusError::Format { line: 1, .. }
        ));
    }

    #[test]
    fn duplicate_id_is_rejected_by_name() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("corpus.jsonl");
        fs::write(
            &path,
            format!("{}\n{}\n", record("d1", "x"), record("d1", "y")),
        )
        .unwrap();
        let err = load_corpus(&path).unwrap_err();
        assert!(matches!(&err, CorpusError::DuplicateId { id } if id == "d1"));
        assert!(err.to_string().contains("d1"));
    }

    #[test]
    fn empty_id_is_rejected_with_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("corpus.jsonl");
        fs::write(&path, record("", "x")).unwrap();
        assert!(matches!(
            load_corpus(&path).unwrap_err(),
            CorpusError::Format { line: 1, .. }
        ));
    }

    #[test]
    fn directory_loads_in_file_name_order() {
        let dir = tempfile::tempdir().unwrap();
        write_file(dir.path(), "b.txt", "second");
        write_file(dir.path(), "a.txt", "first");
        let corpus = load_corpus(dir.path()).unwrap();
        let ids: Vec<&str> = corpus.documents.iter().map(|d| d.id.as_str()).collect();
        assert_eq!(ids, ["a.txt", "b.txt"]);
        assert_eq!(corpus.documents[0].text, "first");
        assert!(corpus.documents[0].meta.is_empty());
    }

    #[test]
    fn missing_source_is_an_io_error() {
        let err = load_corpus(Path::new("/nonexistent/corpus.jsonl")).unwrap_err();
        assert!(matches!(err, CorpusError::Io { .. }));
        assert!(err.to_string().starts_with("io-error"));
    }
}
