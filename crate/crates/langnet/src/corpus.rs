//! Corpus ingestion: plain text and CoNLL-style dependency treebanks,
//! sentence-internal shuffling, and syllable annotation.
//!
//! Tokens are normalized at load time: lowercased and stripped of
//! punctuation-only tokens by default, both switchable. Dependency heads
//! survive punctuation stripping by re-attaching dependents to the nearest
//! retained ancestor.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::seed;

pub mod syllable;

pub use syllable::{load_syllable_lexicon, syllabify_maximal_onset, SyllabifierConfig};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("corpus `{0}` contains no sentences")]
    EmptyCorpus(String),
    #[error("{path}:{line}: malformed treebank entry: {msg}")]
    MalformedTreebank { path: String, line: usize, msg: String },
    #[error("{path}:{line}: malformed lexicon line: {msg}")]
    LexiconParseError { path: String, line: usize, msg: String },
    #[error("syllabifier config: {0}")]
    BadSyllabifierConfig(String),
    #[error("word `{0}` cannot be syllabified")]
    Unsyllabifiable(String),
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn io_err(path: &Path, source: std::io::Error) -> CorpusError {
    CorpusError::Io { path: path.display().to_string(), source }
}

/// One token of a sentence. `head` is the 1-based index of the governing
/// token within the same sentence, 0 for the root, `None` when the corpus
/// carries no dependency annotation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub head: Option<u32>,
    pub syllables: Option<Vec<String>>,
}

impl Token {
    pub fn plain(surface: impl Into<String>) -> Self {
        Token { surface: surface.into(), head: None, syllables: None }
    }

    pub fn with_head(surface: impl Into<String>, head: u32) -> Self {
        Token { surface: surface.into(), head: Some(head), syllables: None }
    }
}

/// An ordered list of sentences; immutable after load.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    pub id: String,
    pub language: String,
    pub sentences: Vec<Vec<Token>>,
}

impl Corpus {
    pub fn token_count(&self) -> usize {
        self.sentences.iter().map(Vec::len).sum()
    }

    /// Multiset of surfaces over the whole corpus, sorted by word.
    pub fn word_frequencies(&self) -> Vec<(String, u64)> {
        let mut map = std::collections::BTreeMap::new();
        for t in self.sentences.iter().flatten() {
            *map.entry(t.surface.clone()).or_insert(0u64) += 1;
        }
        map.into_iter().collect()
    }

    pub fn vocabulary(&self) -> BTreeSet<String> {
        self.sentences
            .iter()
            .flatten()
            .map(|t| t.surface.clone())
            .collect()
    }

    pub fn has_heads(&self) -> bool {
        self.sentences
            .iter()
            .flatten()
            .all(|t| t.head.is_some())
    }
}

/// Token normalization policy. Defaults: lowercase, drop punctuation-only
/// tokens (tokens with no alphanumeric character).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TokenizeOptions {
    pub keep_case: bool,
    pub keep_punctuation: bool,
}

impl Default for TokenizeOptions {
    fn default() -> Self {
        TokenizeOptions { keep_case: false, keep_punctuation: false }
    }
}

impl TokenizeOptions {
    /// Normalized surface, or `None` when the token is dropped.
    pub fn normalize(&self, raw: &str) -> Option<String> {
        if raw.is_empty() {
            return None;
        }
        if !self.keep_punctuation && !raw.chars().any(char::is_alphanumeric) {
            return None;
        }
        Some(if self.keep_case { raw.to_string() } else { raw.to_lowercase() })
    }
}

fn file_id(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// Loads a plain-text corpus: UTF-8, one sentence per line, tokens split on
/// whitespace. Lines that end up empty after normalization are skipped.
pub fn load_plaintext(
    path: impl AsRef<Path>,
    language: &str,
    opts: TokenizeOptions,
) -> Result<Corpus, CorpusError> {
    let path = path.as_ref();
    let mut text = String::new();
    File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|e| io_err(path, e))?;
    let corpus = parse_plaintext(&text, file_id(path), language, opts);
    if corpus.sentences.is_empty() {
        return Err(CorpusError::EmptyCorpus(corpus.id));
    }
    Ok(corpus)
}

pub fn parse_plaintext(text: &str, id: String, language: &str, opts: TokenizeOptions) -> Corpus {
    let sentences = text
        .lines()
        .filter_map(|line| {
            let toks: Vec<Token> = line
                .split_whitespace()
                .filter_map(|w| opts.normalize(w))
                .map(Token::plain)
                .collect();
            (!toks.is_empty()).then_some(toks)
        })
        .collect();
    Corpus { id, language: language.to_string(), sentences }
}

/// Column layout for CoNLL-style input. Zero-based indices into the
/// tab-separated row; defaults follow CoNLL-X (ID FORM ... HEAD at the
/// seventh column).
#[derive(Debug, Clone, Copy)]
pub struct ConllColumns {
    pub id: usize,
    pub form: usize,
    pub head: usize,
}

impl Default for ConllColumns {
    fn default() -> Self {
        ConllColumns { id: 0, form: 1, head: 6 }
    }
}

/// Loads a CoNLL-style treebank: blank-line-separated sentences, one token
/// per row. `#` comment rows are ignored. Head indices are validated per
/// sentence; punctuation stripping re-attaches orphaned dependents to the
/// nearest retained ancestor (or the root).
pub fn load_conll(
    path: impl AsRef<Path>,
    language: &str,
    opts: TokenizeOptions,
    cols: ConllColumns,
) -> Result<Corpus, CorpusError> {
    let path = path.as_ref();
    let reader = BufReader::new(File::open(path).map_err(|e| io_err(path, e))?);
    parse_conll(reader, file_id(path), language, opts, cols)
}

pub fn parse_conll<R: BufRead>(
    reader: R,
    id: String,
    language: &str,
    opts: TokenizeOptions,
    cols: ConllColumns,
) -> Result<Corpus, CorpusError> {
    let path = id.clone();
    let malformed = |line: usize, msg: String| CorpusError::MalformedTreebank {
        path: path.clone(),
        line,
        msg,
    };

    // (surface before filtering, head, source line) per sentence
    let mut raw: Vec<(String, u32, usize)> = Vec::new();
    let mut sentences: Vec<Vec<Token>> = Vec::new();
    let mut flush = |raw: &mut Vec<(String, u32, usize)>| -> Result<(), CorpusError> {
        if raw.is_empty() {
            return Ok(());
        }
        let n = raw.len() as u32;
        for (_, head, line) in raw.iter() {
            if *head > n {
                return Err(malformed(*line, format!("HEAD {head} out of range 0..={n}")));
            }
        }
        if let Some(sent) = filter_sentence(std::mem::take(raw), opts) {
            sentences.push(sent);
        }
        Ok(())
    };

    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| CorpusError::Io { path: path.clone(), source: e })?;
        let trimmed = line.trim_end_matches(['\r', '\n']);
        if trimmed.is_empty() {
            flush(&mut raw)?;
            continue;
        }
        if trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split('\t').collect();
        let need = cols.id.max(cols.form).max(cols.head) + 1;
        if fields.len() < need {
            return Err(malformed(
                lineno,
                format!("expected at least {need} tab-separated columns, got {}", fields.len()),
            ));
        }
        let id_val: u32 = fields[cols.id]
            .parse()
            .map_err(|_| malformed(lineno, format!("non-integer ID `{}`", fields[cols.id])))?;
        if id_val as usize != raw.len() + 1 {
            return Err(malformed(
                lineno,
                format!("ID {id_val} out of sequence (expected {})", raw.len() + 1),
            ));
        }
        let head: u32 = fields[cols.head]
            .parse()
            .map_err(|_| malformed(lineno, format!("non-integer HEAD `{}`", fields[cols.head])))?;
        if head == id_val {
            return Err(malformed(lineno, format!("token {id_val} is its own head")));
        }
        raw.push((fields[cols.form].to_string(), head, lineno));
    }
    flush(&mut raw)?;

    if sentences.is_empty() {
        return Err(CorpusError::EmptyCorpus(path));
    }
    Ok(Corpus { id, language: language.to_string(), sentences })
}

/// Applies normalization to a raw annotated sentence, dropping filtered
/// tokens and lifting heads across them. Returns `None` when nothing
/// survives.
fn filter_sentence(raw: Vec<(String, u32, usize)>, opts: TokenizeOptions) -> Option<Vec<Token>> {
    let n = raw.len();
    let surfaces: Vec<Option<String>> =
        raw.iter().map(|(form, _, _)| opts.normalize(form)).collect();
    let heads: Vec<u32> = raw.iter().map(|(_, h, _)| *h).collect();

    // new 1-based index for every kept token
    let mut new_index = vec![0u32; n];
    let mut next = 0u32;
    for (i, s) in surfaces.iter().enumerate() {
        if s.is_some() {
            next += 1;
            new_index[i] = next;
        }
    }
    if next == 0 {
        return None;
    }

    // follow the head chain past dropped tokens; bounded by sentence length
    // to survive head cycles hiding among dropped tokens
    let lift = |start: u32, own: usize| -> u32 {
        let mut h = start;
        for _ in 0..=n {
            if h == 0 {
                return 0;
            }
            let idx = (h - 1) as usize;
            if idx == own {
                return 0;
            }
            if surfaces[idx].is_some() {
                return new_index[idx];
            }
            h = heads[idx];
        }
        0
    };

    let mut out = Vec::with_capacity(next as usize);
    for (i, s) in surfaces.into_iter().enumerate() {
        if let Some(surface) = s {
            out.push(Token { surface, head: Some(lift(heads[i], i)), syllables: None });
        }
    }
    Some(out)
}

/// Permutes the tokens of each sentence uniformly at random. Vocabulary,
/// word frequencies, sentence count, lengths and order are preserved; head
/// and syllable annotations are dropped because the permutation invalidates
/// them. Each sentence draws from its own generator seeded by
/// (master seed, sentence ordinal), so the result is reproducible.
pub fn shuffle_corpus(c: &Corpus, master_seed: u64) -> Corpus {
    let sentences = c
        .sentences
        .iter()
        .enumerate()
        .map(|(ordinal, sent)| {
            let mut toks: Vec<Token> = sent
                .iter()
                .map(|t| Token::plain(t.surface.clone()))
                .collect();
            let mut rng = ChaCha8Rng::seed_from_u64(seed::derive(master_seed, ordinal as u64));
            // Fisher-Yates
            for i in (1..toks.len()).rev() {
                let j = rng.gen_range(0..=i);
                toks.swap(i, j);
            }
            toks
        })
        .collect();
    Corpus { id: c.id.clone(), language: c.language.clone(), sentences }
}

/// Where syllable annotations come from.
pub enum SyllableSource {
    Lexicon(std::collections::BTreeMap<String, Vec<String>>),
    Rules(SyllabifierConfig),
}

/// Annotates every resolvable token with its syllables. Unresolvable words
/// (absent from the lexicon, or failing the rules) are collected in the
/// returned set and left unannotated; omission is data, not failure.
pub fn annotate_syllables(c: &Corpus, source: &SyllableSource) -> (Corpus, BTreeSet<String>) {
    let mut omitted = BTreeSet::new();
    let mut out = c.clone();
    for sent in &mut out.sentences {
        for tok in sent {
            let syls = match source {
                SyllableSource::Lexicon(map) => match map.get(&tok.surface) {
                    Some(s) if s.concat() == tok.surface => Some(s.clone()),
                    Some(_) => {
                        log::warn!(
                            "lexicon syllables do not concatenate to `{}`; omitting",
                            tok.surface
                        );
                        None
                    }
                    None => None,
                },
                SyllableSource::Rules(cfg) => syllabify_maximal_onset(&tok.surface, cfg).ok(),
            };
            match syls {
                Some(s) => tok.syllables = Some(s),
                None => {
                    omitted.insert(tok.surface.clone());
                }
            }
        }
    }
    (out, omitted)
}

/// Writes one sentence per line, tokens joined by single spaces.
pub fn write_plaintext<W: Write>(c: &Corpus, mut w: W) -> std::io::Result<()> {
    for sent in &c.sentences {
        let mut line = String::new();
        for (i, t) in sent.iter().enumerate() {
            if i > 0 {
                line.push(' ');
            }
            line.push_str(&t.surface);
        }
        writeln!(w, "{line}")?;
    }
    Ok(())
}

/// Writes ten-column CoNLL-X rows (ID, FORM and HEAD populated, the rest
/// `_`), blank line after each sentence.
pub fn write_conll<W: Write>(c: &Corpus, mut w: W) -> std::io::Result<()> {
    for sent in &c.sentences {
        for (i, t) in sent.iter().enumerate() {
            let head = t.head.unwrap_or(0);
            let mut row = String::new();
            let _ = write!(row, "{}\t{}\t_\t_\t_\t_\t{}\t_\t_\t_", i + 1, t.surface, head);
            writeln!(w, "{row}")?;
        }
        writeln!(w)?;
    }
    Ok(())
}
