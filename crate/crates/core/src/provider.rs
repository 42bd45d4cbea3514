//! Pluggable corpus providers: saved result sets on disk, or a two-phase
//! search/fetch HTTP service.
//!
//! The file provider loads a saved result set in the corpus record format
//! and simulates a keyword engine with a deliberately simple rule: a
//! document qualifies when its text contains every whitespace-separated
//! keyword, case-insensitively, as a substring. Real engines rank and
//! stem; this stand-in exists so refinement runs are reproducible from a
//! checked-in fixture.
//!
//! The HTTP provider generalizes the search-then-fetch shape of
//! literature APIs without binding to any specific one:
//!
//! * `GET {baseUrl}/search?term=<keywords>&retmax=<n>` returns matching
//!   document ids, one per line.
//! * `GET {baseUrl}/fetch?id=<id>` returns one corpus record (the same
//!   JSON line format the corpus file uses).
//!
//! When the configured credential variable is set, its value rides along
//! as the `X-Api-Key` header. The credential never appears in errors or
//! any other output. Timeouts and 5xx responses are retried with
//! exponential backoff starting at 250 ms; 4xx responses are not.

use std::path::PathBuf;
use std::thread;
use std::time::Duration;

use reqwest::blocking::Client;
use reqwest::Url;

use crate::corpus::{load_corpus, Corpus, CorpusError, Document};

/// Where a corpus comes from, with the fields that source needs.
#[derive(Debug, Clone)]
pub enum ProviderKind {
    /// A saved result set in the corpus record format.
    File { path: PathBuf },
    /// A search/fetch service rooted at this URL.
    Http { base_url: String },
}

#[derive(Debug, Clone)]
pub struct ProviderConfig {
    pub kind: ProviderKind,
    /// Name of the environment variable holding the API credential. Only
    /// the name is stored; the value is read per request.
    pub api_key_env_var: Option<String>,
    /// Maximum fetches in flight at once.
    pub page_size: usize,
    pub request_timeout_ms: u64,
    /// Extra attempts after the first, for timeouts and 5xx only.
    pub max_retries: u32,
}

impl ProviderConfig {
    pub fn file(path: impl Into<PathBuf>) -> ProviderConfig {
        ProviderConfig {
            kind: ProviderKind::File { path: path.into() },
            api_key_env_var: None,
            page_size: 100,
            request_timeout_ms: 10_000,
            max_retries: 2,
        }
    }

    pub fn http(base_url: impl Into<String>) -> ProviderConfig {
        ProviderConfig {
            kind: ProviderKind::Http {
                base_url: base_url.into(),
            },
            api_key_env_var: None,
            page_size: 100,
            request_timeout_ms: 10_000,
            max_retries: 2,
        }
    }
}

/// A keyword search request.
#[derive(Debug, Clone)]
pub struct Query {
    pub keywords: String,
    pub max_results: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum ProviderError {
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error("invalid-query: {message}")]
    InvalidQuery { message: String },
    #[error("invalid-config: {message}")]
    InvalidConfig { message: String },
    #[error("http-error: status {status} for {url}")]
    Http { status: u16, url: String },
    #[error("timeout: {url}")]
    Timeout { url: String },
    #[error("io-error: {url}: {message}")]
    Transport { url: String, message: String },
    #[error("protocol-error: {message}")]
    Protocol { message: String },
}

/// Runs the query against the configured source and assembles a corpus.
pub fn query(config: &ProviderConfig, q: &Query) -> Result<Corpus, ProviderError> {
    if q.keywords.trim().is_empty() {
        return Err(ProviderError::InvalidQuery {
            message: "keywords must not be blank".to_string(),
        });
    }
    if q.max_results == 0 {
        return Err(ProviderError::InvalidQuery {
            message: "maxResults must be at least 1".to_string(),
        });
    }
    if config.page_size == 0 {
        return Err(ProviderError::InvalidConfig {
            message: "pageSize must be at least 1".to_string(),
        });
    }
    match &config.kind {
        ProviderKind::File { path } => {
            let stored = load_corpus(path)?;
            let needles: Vec<String> = q
                .keywords
                .split_whitespace()
                .map(|w| w.to_lowercase())
                .collect();
            let mut documents: Vec<Document> = stored
                .documents
                .into_iter()
                .filter(|doc| {
                    let text = doc.text.to_lowercase();
                    needles.iter().all(|needle| text.contains(needle.as_str()))
                })
                .collect();
            documents.truncate(q.max_results);
            Corpus::from_documents(
                documents,
                format!("file search {:?} over {}", q.keywords, path.display()),
            )
            .map_err(ProviderError::from)
        }
        ProviderKind::Http { base_url } => http_query(config, base_url, q),
    }
}

fn http_query(config: &ProviderConfig, base_url: &str, q: &Query) -> Result<Corpus, ProviderError> {
    let base = base_url.trim_end_matches('/');
    let client = Client::builder()
        .timeout(Duration::from_millis(config.request_timeout_ms))
        .build()
        .map_err(|e| ProviderError::Transport {
            url: base.to_string(),
            message: e.to_string(),
        })?;
    let api_key = config
        .api_key_env_var
        .as_deref()
        .and_then(|name| std::env::var(name).ok());

    // Phase 1: the id list.
    let mut search_url = parse_url(&format!("{base}/search"))?;
    search_url
        .query_pairs_mut()
        .append_pair("term", &q.keywords)
        .append_pair("retmax", &q.max_results.to_string());
    let body = get_with_retry(&client, &search_url, api_key.as_deref(), config.max_retries)?;
    let mut ids: Vec<&str> = body
        .lines()
        .map(str::trim)
        .filter(|line| !line.is_empty())
        .collect();
    ids.truncate(q.max_results);

    // Phase 2: fetch each document, at most page_size in flight, keeping
    // id-list order.
    let mut documents = Vec::with_capacity(ids.len());
    for chunk in ids.chunks(config.page_size) {
        let mut slots: Vec<Option<Result<Document, ProviderError>>> =
            (0..chunk.len()).map(|_| None).collect();
        thread::scope(|scope| {
            for (slot, id) in slots.iter_mut().zip(chunk) {
                let client = &client;
                let api_key = api_key.as_deref();
                scope.spawn(move || {
                    *slot = Some(fetch_document(
                        client,
                        base,
                        id,
                        api_key,
                        config.max_retries,
                    ));
                });
            }
        });
        for slot in slots {
            documents.push(slot.expect("every fetch slot is filled")?);
        }
    }

    Corpus::from_documents(
        documents,
        format!("http search {:?} via {}", q.keywords, base),
    )
    .map_err(|e| ProviderError::Protocol {
        message: format!("service returned an invalid document set: {e}"),
    })
}

fn fetch_document(
    client: &Client,
    base: &str,
    id: &str,
    api_key: Option<&str>,
    max_retries: u32,
) -> Result<Document, ProviderError> {
    let mut url = parse_url(&format!("{base}/fetch"))?;
    url.query_pairs_mut().append_pair("id", id);
    let body = get_with_retry(client, &url, api_key, max_retries)?;
    let record = body
        .lines()
        .map(str::trim)
        .find(|line| !line.is_empty())
        .ok_or_else(|| ProviderError::Protocol {
            message: format!("empty fetch response for id {id:?}"),
        })?;
    let document: Document = serde_json::from_str(record).map_err(|e| ProviderError::Protocol {
        message: format!("malformed record for id {id:?}: {e}"),
    })?;
    if document.id != id {
        return Err(ProviderError::Protocol {
            message: format!(
                "fetch for id {id:?} returned record with id {:?}",
                document.id
            ),
        });
    }
    Ok(document)
}

fn parse_url(raw: &str) -> Result<Url, ProviderError> {
    Url::parse(raw).map_err(|e| ProviderError::Protocol {
        message: format!("invalid url {raw:?}: {e}"),
    })
}

/// One GET with up to `max_retries` extra attempts. Timeouts and 5xx
/// responses retry after 250 ms, 500 ms, ...; anything else is final.
fn get_with_retry(
    client: &Client,
    url: &Url,
    api_key: Option<&str>,
    max_retries: u32,
) -> Result<String, ProviderError> {
    let mut last_error = None;
    for attempt in 0..=max_retries {
        if attempt > 0 {
            thread::sleep(Duration::from_millis(250u64 << (attempt - 1)));
        }
        let mut request = client.get(url.clone());
        if let Some(key) = api_key {
            request = request.header("X-Api-Key", key);
        }
        let retryable = match request.send() {
            Err(e) if e.is_timeout() => ProviderError::Timeout {
                url: url.to_string(),
            },
            Err(e) => {
                return Err(ProviderError::Transport {
                    url: url.to_string(),
                    message: e.to_string(),
                })
            }
            Ok(response) => {
                let status = response.status();
                if status.is_server_error() {
                    ProviderError::Http {
                        status: status.as_u16(),
                        url: url.to_string(),
                    }
                } else if status.is_client_error() {
                    return Err(ProviderError::Http {
                        status: status.as_u16(),
                        url: url.to_string(),
                    });
                } else {
                    return response.text().map_err(|e| ProviderError::Transport {
                        url: url.to_string(),
                        message: e.to_string(),
                    });
                }
            }
        };
        last_error = Some(retryable);
    }
    Err(last_error.expect("at least one attempt always runs"))
}
