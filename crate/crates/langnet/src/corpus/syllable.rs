//! Maximal-onset syllabification and syllable lexicon loading.
//!
//! A word is split so that every syllable holds exactly one maximal vowel
//! group. Each intervocalic consonant cluster donates its longest permitted
//! suffix to the onset of the following syllable; the rest stays as coda of
//! the preceding one. Word-initial consonants join the first syllable,
//! word-final consonants the last.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use super::CorpusError;

/// Vowel inventory plus the permitted onset clusters. The empty onset is
/// always implicitly permitted (vowel-initial syllables); clusters are
/// consonant strings. Vowel graphemes may span several characters.
#[derive(Debug, Clone)]
pub struct SyllabifierConfig {
    pub vowels: BTreeSet<String>,
    pub permitted_onsets: BTreeSet<String>,
}

impl SyllabifierConfig {
    pub fn new<I, J, S, T>(vowels: I, onsets: J) -> Result<Self, CorpusError>
    where
        I: IntoIterator<Item = S>,
        J: IntoIterator<Item = T>,
        S: Into<String>,
        T: Into<String>,
    {
        let cfg = SyllabifierConfig {
            vowels: vowels.into_iter().map(Into::into).collect(),
            permitted_onsets: onsets.into_iter().map(Into::into).collect(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CorpusError> {
        if self.vowels.is_empty() {
            return Err(CorpusError::BadSyllabifierConfig("no vowels declared".into()));
        }
        if self.vowels.contains("") || self.permitted_onsets.contains("") {
            return Err(CorpusError::BadSyllabifierConfig(
                "empty string in inventory".into(),
            ));
        }
        if let Some(both) = self.permitted_onsets.intersection(&self.vowels).next() {
            return Err(CorpusError::BadSyllabifierConfig(format!(
                "`{both}` declared both vowel and onset"
            )));
        }
        Ok(())
    }

    /// Parses the plain-text config form: a `vowels:` line with
    /// space-separated graphemes, then one onset cluster per line.
    /// `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, CorpusError> {
        let mut vowels = BTreeSet::new();
        let mut onsets = BTreeSet::new();
        let mut saw_vowels = false;
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("vowels:") {
                if saw_vowels {
                    return Err(CorpusError::BadSyllabifierConfig(
                        "duplicate vowels line".into(),
                    ));
                }
                saw_vowels = true;
                vowels.extend(rest.split_whitespace().map(String::from));
            } else {
                onsets.insert(line.to_string());
            }
        }
        if !saw_vowels {
            return Err(CorpusError::BadSyllabifierConfig(
                "missing `vowels:` line".into(),
            ));
        }
        let cfg = SyllabifierConfig { vowels, permitted_onsets: onsets };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, CorpusError> {
        let path = path.as_ref();
        let mut text = String::new();
        File::open(path)
            .and_then(|mut f| f.read_to_string(&mut text))
            .map_err(|e| super::io_err(path, e))?;
        Self::parse(&text)
    }

    fn max_vowel_len(&self) -> usize {
        self.vowels.iter().map(|v| v.chars().count()).max().unwrap_or(1)
    }
}

/// One scanned unit: a vowel grapheme or a single consonant character.
#[derive(Debug)]
struct Unit {
    text: String,
    vowel: bool,
}

/// Greedy longest-match scan into vowel graphemes and consonant characters.
fn scan_units(word: &str, cfg: &SyllabifierConfig) -> Vec<Unit> {
    let chars: Vec<char> = word.chars().collect();
    let max_v = cfg.max_vowel_len();
    let mut units = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let mut matched = 0;
        for len in (1..=max_v.min(chars.len() - i)).rev() {
            let cand: String = chars[i..i + len].iter().collect();
            if cfg.vowels.contains(&cand) {
                units.push(Unit { text: cand, vowel: true });
                matched = len;
                break;
            }
        }
        if matched == 0 {
            units.push(Unit { text: chars[i].to_string(), vowel: false });
            matched = 1;
        }
        i += matched;
    }
    units
}

/// Splits `word` into syllables under the maximal-onset rule. Fails when the
/// word has no vowel, or when an intervocalic cluster has no permitted
/// nonempty suffix (an onset inventory gap must fail loudly rather than
/// produce a silent mis-split).
pub fn syllabify_maximal_onset(
    word: &str,
    cfg: &SyllabifierConfig,
) -> Result<Vec<String>, CorpusError> {
    if word.is_empty() {
        return Err(CorpusError::Unsyllabifiable(word.to_string()));
    }
    let units = scan_units(word, cfg);

    // nuclei: maximal runs of vowel units
    let mut nuclei: Vec<(usize, usize)> = Vec::new(); // [start, end)
    let mut i = 0;
    while i < units.len() {
        if units[i].vowel {
            let start = i;
            while i < units.len() && units[i].vowel {
                i += 1;
            }
            nuclei.push((start, i));
        } else {
            i += 1;
        }
    }
    if nuclei.is_empty() {
        return Err(CorpusError::Unsyllabifiable(word.to_string()));
    }

    let join = |a: usize, b: usize| -> String {
        units[a..b].iter().map(|u| u.text.as_str()).collect()
    };

    let mut syllables: Vec<String> = Vec::with_capacity(nuclei.len());
    // leading consonants + first nucleus
    let mut current = join(0, nuclei[0].1);

    for w in nuclei.windows(2) {
        let (prev_end, next_start) = (w[0].1, w[1].0);
        // longest permitted suffix of the intervocalic cluster
        let mut split = None;
        for s in prev_end..next_start {
            if cfg.permitted_onsets.contains(&join(s, next_start)) {
                split = Some(s);
                break;
            }
        }
        let Some(split) = split else {
            return Err(CorpusError::Unsyllabifiable(word.to_string()));
        };
        current.push_str(&join(prev_end, split));
        syllables.push(std::mem::take(&mut current));
        current = join(split, w[1].1);
    }

    // trailing consonants
    current.push_str(&join(nuclei.last().unwrap().1, units.len()));
    syllables.push(current);
    Ok(syllables)
}

/// Loads a `word<TAB>syl-syl-syl` lexicon. Entries are lowercased;
/// duplicate words keep the last entry with a warning.
pub fn load_syllable_lexicon(
    path: impl AsRef<Path>,
) -> Result<BTreeMap<String, Vec<String>>, CorpusError> {
    let path = path.as_ref();
    let reader = BufReader::new(File::open(path).map_err(|e| super::io_err(path, e))?);
    parse_syllable_lexicon(reader, &path.display().to_string())
}

pub fn parse_syllable_lexicon<R: BufRead>(
    reader: R,
    source: &str,
) -> Result<BTreeMap<String, Vec<String>>, CorpusError> {
    let mut map = BTreeMap::new();
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let err = |msg: String| CorpusError::LexiconParseError {
            path: source.to_string(),
            line: lineno,
            msg,
        };
        let line = line.map_err(|e| CorpusError::Io { path: source.to_string(), source: e })?;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split('\t');
        let (word, syls) = match (parts.next(), parts.next(), parts.next()) {
            (Some(w), Some(s), None) => (w, s),
            _ => return Err(err("expected `word<TAB>syl-syl-syl`".into())),
        };
        if word.is_empty() {
            return Err(err("empty word".into()));
        }
        let word = word.to_lowercase();
        let syls: Vec<String> = syls.split('-').map(|s| s.to_lowercase()).collect();
        if syls.iter().any(String::is_empty) {
            return Err(err(format!("empty syllable in `{line}`")));
        }
        if map.insert(word.clone(), syls).is_some() {
            log::warn!("{source}:{lineno}: duplicate lexicon entry `{word}`, keeping the last");
        }
    }
    Ok(map)
}
