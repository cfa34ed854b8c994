//! Layer construction and the multilayer container.
//!
//! A layer is one weighted digraph tagged with its aspect coordinates:
//! construction principle (co-occurrence, syntax, shuffle), linguistic
//! subsystem (word, syllable, grapheme) and language. Word-level layers of
//! one language share a vertex universe and form multiplex pairs; word vs
//! subword pairs are uncoupled.
//!
//! Only co-occurrence subword layers are materialized: linking adjacent
//! syllables (or characters) inside words gives the same graph under every
//! construction principle, so the other coordinates would duplicate it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use thiserror::Error;

use crate::corpus::{shuffle_corpus, Corpus};
use crate::graph::{GraphError, WeightedDigraph};

#[derive(Debug, Error)]
pub enum LayerError {
    #[error("corpus `{0}` has tokens without dependency heads; not a treebank")]
    NotATreebank(String),
    #[error("duplicate layer for coordinate {0}")]
    DuplicateLayer(AspectCoord),
    #[error("multiplex violation between {a} and {b}: {only_a} vertices only in the former, {only_b} only in the latter")]
    MultiplexViolation {
        a: AspectCoord,
        b: AspectCoord,
        only_a: usize,
        only_b: usize,
    },
    #[error("layer file line {line}: {msg}")]
    MalformedLayerFile { line: usize, msg: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Construction {
    Cooccurrence,
    Syntax,
    Shuffle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Subsystem {
    Word,
    Syllable,
    Grapheme,
}

impl Construction {
    pub fn name(self) -> &'static str {
        match self {
            Construction::Cooccurrence => "co-occurrence",
            Construction::Syntax => "syntax",
            Construction::Shuffle => "shuffle",
        }
    }
}

impl Subsystem {
    pub fn name(self) -> &'static str {
        match self {
            Subsystem::Word => "word",
            Subsystem::Syllable => "syllable",
            Subsystem::Grapheme => "grapheme",
        }
    }
}

/// Coordinates of a layer in the three declared aspects.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AspectCoord {
    pub construction: Construction,
    pub subsystem: Subsystem,
    pub language: String,
}

impl AspectCoord {
    pub fn new(construction: Construction, subsystem: Subsystem, language: &str) -> Self {
        AspectCoord { construction, subsystem, language: language.to_string() }
    }

    /// Short conventional code: CO, SIN, SHU for the word level, SYL and GR
    /// for the subword levels.
    pub fn code(&self) -> &'static str {
        match self.subsystem {
            Subsystem::Syllable => "SYL",
            Subsystem::Grapheme => "GR",
            Subsystem::Word => match self.construction {
                Construction::Cooccurrence => "CO",
                Construction::Syntax => "SIN",
                Construction::Shuffle => "SHU",
            },
        }
    }

    /// `<language>-<code>` tag used in report tables and file names.
    pub fn tag(&self) -> String {
        format!("{}-{}", self.language, self.code().to_lowercase())
    }
}

impl fmt::Display for AspectCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}/{}/{}",
            self.construction.name(),
            self.subsystem.name(),
            self.language
        )
    }
}

impl FromStr for AspectCoord {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let mut parts = s.split('/');
        let (c, sub, lang) = match (parts.next(), parts.next(), parts.next(), parts.next()) {
            (Some(c), Some(s), Some(l), None) => (c, s, l),
            _ => return Err(format!("bad coordinate `{s}`")),
        };
        let construction = match c {
            "co-occurrence" => Construction::Cooccurrence,
            "syntax" => Construction::Syntax,
            "shuffle" => Construction::Shuffle,
            _ => return Err(format!("unknown construction `{c}`")),
        };
        let subsystem = match sub {
            "word" => Subsystem::Word,
            "syllable" => Subsystem::Syllable,
            "grapheme" => Subsystem::Grapheme,
            _ => return Err(format!("unknown subsystem `{sub}`")),
        };
        if lang.is_empty() {
            return Err("empty language tag".into());
        }
        Ok(AspectCoord::new(construction, subsystem, lang))
    }
}

/// Construction metadata carried alongside a layer.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Provenance {
    pub source: String,
    pub seed: Option<u64>,
    pub omitted_words: Option<u64>,
    pub self_pair_skips: u64,
}

#[derive(Debug, Clone)]
pub struct Layer {
    pub coord: AspectCoord,
    pub graph: WeightedDigraph,
    pub provenance: Provenance,
}

/// Which direction a dependency edge takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SyntaxDirection {
    /// Governor to modifier (the conventional reading).
    #[default]
    HeadToDependent,
    DependentToHead,
}

/// Links every pair of adjacent words within a sentence, in reading order.
/// Sentence boundaries delimit linkage. Every token becomes a vertex.
pub fn build_cooccurrence(c: &Corpus) -> Layer {
    let mut g = WeightedDigraph::new();
    for sent in &c.sentences {
        for t in sent {
            g.add_vertex(&t.surface);
        }
        for pair in sent.windows(2) {
            g.add_occurrence(&pair[0].surface, &pair[1].surface);
        }
    }
    finish(Construction::Cooccurrence, Subsystem::Word, c, g, None, None)
}

/// Links dependency heads to their dependents, aggregated over the corpus.
/// Root attachments add no edge. Requires head annotations on every token.
pub fn build_syntax(c: &Corpus) -> Result<Layer, LayerError> {
    build_syntax_with(c, SyntaxDirection::default())
}

pub fn build_syntax_with(c: &Corpus, direction: SyntaxDirection) -> Result<Layer, LayerError> {
    if !c.has_heads() {
        return Err(LayerError::NotATreebank(c.id.clone()));
    }
    let mut g = WeightedDigraph::new();
    for sent in &c.sentences {
        for t in sent {
            g.add_vertex(&t.surface);
        }
        for t in sent {
            let head = t.head.unwrap();
            if head == 0 {
                continue;
            }
            let head_surface = &sent[(head - 1) as usize].surface;
            match direction {
                SyntaxDirection::HeadToDependent => g.add_occurrence(head_surface, &t.surface),
                SyntaxDirection::DependentToHead => g.add_occurrence(&t.surface, head_surface),
            };
        }
    }
    Ok(finish(Construction::Syntax, Subsystem::Word, c, g, None, None))
}

/// Co-occurrence over the sentence-internally shuffled corpus.
pub fn build_shuffled(c: &Corpus, seed: u64) -> Layer {
    let shuffled = shuffle_corpus(c, seed);
    let base = build_cooccurrence(&shuffled);
    Layer {
        coord: AspectCoord::new(Construction::Shuffle, Subsystem::Word, &c.language),
        provenance: Provenance { seed: Some(seed), ..base.provenance },
        graph: base.graph,
    }
}

/// Links adjacent syllables within annotated words. Monosyllables become
/// isolated vertices; unannotated (omitted) words contribute nothing.
pub fn build_syllable_layer(c: &Corpus) -> Layer {
    let mut g = WeightedDigraph::new();
    let mut omitted: BTreeSet<&str> = BTreeSet::new();
    for t in c.sentences.iter().flatten() {
        match &t.syllables {
            Some(syls) => {
                for s in syls {
                    g.add_vertex(s);
                }
                for pair in syls.windows(2) {
                    g.add_occurrence(&pair[0], &pair[1]);
                }
            }
            None => {
                omitted.insert(&t.surface);
            }
        }
    }
    finish(
        Construction::Cooccurrence,
        Subsystem::Syllable,
        c,
        g,
        None,
        Some(omitted.len() as u64),
    )
}

/// Links adjacent characters within words. Doubled letters are self-pairs
/// and follow the skip-and-count policy.
pub fn build_grapheme_layer(c: &Corpus) -> Layer {
    let mut g = WeightedDigraph::new();
    let mut buf = [0u8; 4];
    for t in c.sentences.iter().flatten() {
        let chars: Vec<char> = t.surface.chars().collect();
        for &ch in &chars {
            g.add_vertex(ch.encode_utf8(&mut buf));
        }
        for pair in chars.windows(2) {
            let mut b2 = [0u8; 4];
            let a: &str = pair[0].encode_utf8(&mut buf);
            let b: &str = pair[1].encode_utf8(&mut b2);
            g.add_occurrence(a, b);
        }
    }
    finish(Construction::Cooccurrence, Subsystem::Grapheme, c, g, None, None)
}

fn finish(
    construction: Construction,
    subsystem: Subsystem,
    c: &Corpus,
    g: WeightedDigraph,
    seed: Option<u64>,
    omitted: Option<u64>,
) -> Layer {
    Layer {
        coord: AspectCoord::new(construction, subsystem, &c.language),
        provenance: Provenance {
            source: c.id.clone(),
            seed,
            omitted_words: omitted,
            self_pair_skips: g.self_loop_skips(),
        },
        graph: g,
    }
}

/// Declared inter-layer relation for a pair of layers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coupling {
    /// Shared vertex set, 1:1 inter-layer correspondence.
    Multiplex,
    /// N:M; no vertex correspondence is declared.
    Uncoupled,
}

/// The assembled container: layers keyed by coordinate, vertex presence per
/// layer, and the declared coupling per unordered pair.
#[derive(Debug)]
pub struct MultilayerNetwork {
    pub layers: BTreeMap<AspectCoord, Layer>,
    pub coupling: BTreeMap<(AspectCoord, AspectCoord), Coupling>,
    /// Vertices added to each layer during multiplex alignment.
    pub aligned: BTreeMap<AspectCoord, usize>,
}

/// Two layers are multiplex when they are word-level layers of the same
/// language. Everything else (word vs subword, cross-language) is uncoupled.
pub fn coupling_kind(a: &AspectCoord, b: &AspectCoord) -> Coupling {
    if a.language == b.language
        && a.subsystem == Subsystem::Word
        && b.subsystem == Subsystem::Word
    {
        Coupling::Multiplex
    } else {
        Coupling::Uncoupled
    }
}

impl MultilayerNetwork {
    /// Map from vertex to the coordinates of the layers containing it.
    pub fn vertex_presence(&self) -> BTreeMap<String, BTreeSet<AspectCoord>> {
        let mut map: BTreeMap<String, BTreeSet<AspectCoord>> = BTreeMap::new();
        for (coord, layer) in &self.layers {
            for label in layer.graph.labels() {
                map.entry(label.to_string()).or_default().insert(coord.clone());
            }
        }
        map
    }

    pub fn get(&self, coord: &AspectCoord) -> Option<&Layer> {
        self.layers.get(coord)
    }

    pub fn coupling_of(&self, a: &AspectCoord, b: &AspectCoord) -> Option<Coupling> {
        let key = if a <= b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
        self.coupling.get(&key).copied()
    }
}

/// Assembles layers into the multilayer container. Word-level layers of one
/// language are aligned to their union vocabulary by adding isolated
/// vertices where needed (a warning reports the counts); use
/// [`assemble_strict`] to reject unequal vertex sets instead.
pub fn assemble(layers: Vec<Layer>) -> Result<MultilayerNetwork, LayerError> {
    assemble_inner(layers, true)
}

/// Like [`assemble`], but a multiplex pair with unequal vertex sets is an
/// error reporting the symmetric difference sizes.
pub fn assemble_strict(layers: Vec<Layer>) -> Result<MultilayerNetwork, LayerError> {
    assemble_inner(layers, false)
}

fn assemble_inner(layers: Vec<Layer>, align: bool) -> Result<MultilayerNetwork, LayerError> {
    let mut map: BTreeMap<AspectCoord, Layer> = BTreeMap::new();
    for layer in layers {
        if map.contains_key(&layer.coord) {
            return Err(LayerError::DuplicateLayer(layer.coord));
        }
        map.insert(layer.coord.clone(), layer);
    }

    let coords: Vec<AspectCoord> = map.keys().cloned().collect();
    let mut coupling = BTreeMap::new();
    let mut aligned: BTreeMap<AspectCoord, usize> = BTreeMap::new();

    for (i, a) in coords.iter().enumerate() {
        for b in &coords[i + 1..] {
            let kind = coupling_kind(a, b);
            coupling.insert((a.clone(), b.clone()), kind);
            if kind != Coupling::Multiplex {
                continue;
            }
            let va: BTreeSet<String> = map[a].graph.labels().map(String::from).collect();
            let vb: BTreeSet<String> = map[b].graph.labels().map(String::from).collect();
            if va == vb {
                continue;
            }
            let only_a: Vec<&String> = va.difference(&vb).collect();
            let only_b: Vec<&String> = vb.difference(&va).collect();
            if !align {
                return Err(LayerError::MultiplexViolation {
                    a: a.clone(),
                    b: b.clone(),
                    only_a: only_a.len(),
                    only_b: only_b.len(),
                });
            }
            log::warn!(
                "aligning multiplex pair {a} / {b}: adding {} isolated vertices to the former, {} to the latter",
                only_b.len(),
                only_a.len()
            );
            *aligned.entry(a.clone()).or_default() += only_b.len();
            *aligned.entry(b.clone()).or_default() += only_a.len();
            let add_a: Vec<String> = only_b.into_iter().cloned().collect();
            let add_b: Vec<String> = only_a.into_iter().cloned().collect();
            for v in add_a {
                map.get_mut(a).unwrap().graph.add_vertex(&v);
            }
            for v in add_b {
                map.get_mut(b).unwrap().graph.add_vertex(&v);
            }
        }
    }

    Ok(MultilayerNetwork { layers: map, coupling, aligned })
}

/// Writes the layer file form: provenance header lines, isolated vertices,
/// then the edge list.
pub fn write_layer<W: Write>(layer: &Layer, mut w: W) -> Result<(), LayerError> {
    writeln!(w, "# coord: {}", layer.coord)?;
    writeln!(w, "# source: {}", layer.provenance.source)?;
    if let Some(seed) = layer.provenance.seed {
        writeln!(w, "# seed: {seed}")?;
    }
    if let Some(omitted) = layer.provenance.omitted_words {
        writeln!(w, "# omitted: {omitted}")?;
    }
    writeln!(w, "# skips: {}", layer.provenance.self_pair_skips)?;
    let mut isolated: Vec<&str> = (0..layer.graph.n() as u32)
        .filter(|&v| layer.graph.undirected_neighbors(v).is_empty())
        .map(|v| layer.graph.label(v))
        .collect();
    isolated.sort_unstable();
    for v in isolated {
        writeln!(w, "# isolated: {v}")?;
    }
    layer.graph.write_edge_list(w)?;
    Ok(())
}

/// Parses the layer file form.
pub fn read_layer<R: BufRead>(r: R) -> Result<Layer, LayerError> {
    let mut coord: Option<AspectCoord> = None;
    let mut prov = Provenance::default();
    let mut graph = WeightedDigraph::new();
    let mut isolated: Vec<String> = Vec::new();

    for (i, line) in r.lines().enumerate() {
        let lineno = i + 1;
        let line = line?;
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("# ") {
            let (key, value) = rest
                .split_once(':')
                .ok_or_else(|| LayerError::MalformedLayerFile {
                    line: lineno,
                    msg: format!("bad header `{line}`"),
                })?;
            let value = value.trim();
            let bad = |msg: String| LayerError::MalformedLayerFile { line: lineno, msg };
            match key {
                "coord" => coord = Some(value.parse().map_err(bad)?),
                "source" => prov.source = value.to_string(),
                "seed" => {
                    prov.seed = Some(value.parse().map_err(|_| bad(format!("bad seed `{value}`")))?)
                }
                "omitted" => {
                    prov.omitted_words =
                        Some(value.parse().map_err(|_| bad(format!("bad count `{value}`")))?)
                }
                "skips" => {
                    prov.self_pair_skips =
                        value.parse().map_err(|_| bad(format!("bad count `{value}`")))?
                }
                "isolated" => isolated.push(value.to_string()),
                _ => {} // unknown provenance keys are tolerated
            }
            continue;
        }
        let (src, dst, wt) = crate::graph::parse_edge_line(&line, lineno)?;
        if graph.weight(src, dst).is_some() {
            return Err(LayerError::MalformedLayerFile {
                line: lineno,
                msg: format!("duplicate edge {src} -> {dst}"),
            });
        }
        graph.add_weighted(src, dst, wt)?;
    }

    let coord = coord.ok_or(LayerError::MalformedLayerFile {
        line: 0,
        msg: "missing `# coord:` header".into(),
    })?;
    for v in isolated {
        graph.add_vertex(&v);
    }
    Ok(Layer { coord, graph, provenance: prov })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{
        annotate_syllables, parse_conll, parse_plaintext, ConllColumns, SyllableSource,
        TokenizeOptions,
    };

    fn plain(text: &str) -> Corpus {
        parse_plaintext(text, "test".into(), "en", TokenizeOptions::default())
    }

    #[test]
    fn cooccurrence_chains_each_sentence() {
        let c = plain("Cray Computer has applied to trade on NASDAQ .\n");
        let layer = build_cooccurrence(&c);
        let g = &layer.graph;
        assert_eq!(g.n(), 8);
        assert_eq!(g.k(), 7);
        for (s, d) in [
            ("cray", "computer"),
            ("computer", "has"),
            ("has", "applied"),
            ("applied", "to"),
            ("to", "trade"),
            ("trade", "on"),
            ("on", "nasdaq"),
        ] {
            assert_eq!(g.weight(s, d), Some(1), "{s}->{d}");
        }
    }

    #[test]
    fn cooccurrence_respects_direction_and_boundaries() {
        let c = plain("a b\nb a\n");
        let g = build_cooccurrence(&c).graph;
        assert_eq!(g.weight("a", "b"), Some(1));
        assert_eq!(g.weight("b", "a"), Some(1));
    }

    #[test]
    fn cooccurrence_accumulates_repeats() {
        let c = plain("a b\na b\na b\n");
        let g = build_cooccurrence(&c).graph;
        assert_eq!(g.weight("a", "b"), Some(3));
    }

    #[test]
    fn syntax_links_head_to_dependent() {
        let text = "1\ttrade\t_\t_\t_\t_\t0\t_\t_\t_\n2\ton\t_\t_\t_\t_\t1\t_\t_\t_\n\n";
        let c = parse_conll(
            text.as_bytes(),
            "t".into(),
            "en",
            TokenizeOptions::default(),
            ConllColumns::default(),
        )
        .unwrap();
        let layer = build_syntax(&c).unwrap();
        assert_eq!(layer.graph.weight("trade", "on"), Some(1));
        assert_eq!(layer.graph.k(), 1);

        let flipped = build_syntax_with(&c, SyntaxDirection::DependentToHead).unwrap();
        assert_eq!(flipped.graph.weight("on", "trade"), Some(1));
    }

    #[test]
    fn syntax_requires_heads() {
        let c = plain("a b\n");
        assert!(matches!(build_syntax(&c), Err(LayerError::NotATreebank(_))));
    }

    #[test]
    fn syntax_weight_totals_count_non_root_tokens() {
        let text = "1\ta\t_\t_\t_\t_\t2\t_\t_\t_\n2\tb\t_\t_\t_\t_\t0\t_\t_\t_\n3\tc\t_\t_\t_\t_\t2\t_\t_\t_\n\n1\ta\t_\t_\t_\t_\t2\t_\t_\t_\n2\tb\t_\t_\t_\t_\t0\t_\t_\t_\n\n";
        let c = parse_conll(
            text.as_bytes(),
            "t".into(),
            "en",
            TokenizeOptions::default(),
            ConllColumns::default(),
        )
        .unwrap();
        let layer = build_syntax(&c).unwrap();
        let non_root = 3;
        assert_eq!(
            layer.graph.total_weight() + layer.provenance.self_pair_skips,
            non_root
        );
        assert_eq!(layer.graph.weight("b", "a"), Some(2));
    }

    #[test]
    fn shuffled_layer_matches_vocabulary_and_weight_total() {
        let c = plain("a b c d\ne f\ng\n");
        let co = build_cooccurrence(&c);
        let shu = build_shuffled(&c, 99);
        assert_eq!(shu.provenance.seed, Some(99));
        let mut v1: Vec<&str> = co.graph.labels().collect();
        let mut v2: Vec<&str> = shu.graph.labels().collect();
        v1.sort_unstable();
        v2.sort_unstable();
        assert_eq!(v1, v2);
        assert_eq!(
            co.graph.total_weight() + co.provenance.self_pair_skips,
            shu.graph.total_weight() + shu.provenance.self_pair_skips
        );
    }

    #[test]
    fn shuffled_single_word_sentences_have_no_edges() {
        let c = plain("a\nb\nc\n");
        let shu = build_shuffled(&c, 5);
        assert_eq!(shu.graph.k(), 0);
        assert_eq!(shu.graph.n(), 3);
    }

    fn lexicon() -> SyllableSource {
        let mut lex = std::collections::BTreeMap::new();
        for (w, s) in [
            ("computer", vec!["com", "pu", "ter"]),
            ("trade", vec!["trade"]),
        ] {
            lex.insert(w.to_string(), s.into_iter().map(String::from).collect());
        }
        SyllableSource::Lexicon(lex)
    }

    #[test]
    fn syllable_layer_chains_within_words() {
        let c = plain("computer trade\ncomputer\n");
        let (annotated, omitted) = annotate_syllables(&c, &lexicon());
        assert!(omitted.is_empty());
        let layer = build_syllable_layer(&annotated);
        assert_eq!(layer.graph.weight("com", "pu"), Some(2));
        assert_eq!(layer.graph.weight("pu", "ter"), Some(2));
        assert!(layer.graph.vertex_id("trade").is_some());
        assert_eq!(layer.graph.k(), 2);
        assert_eq!(layer.provenance.omitted_words, Some(0));
    }

    #[test]
    fn omitted_words_contribute_nothing() {
        let c = plain("computer nasdaq\n");
        let (annotated, _) = annotate_syllables(&c, &lexicon());
        let layer = build_syllable_layer(&annotated);
        assert!(layer.graph.vertex_id("nas").is_none());
        assert_eq!(layer.provenance.omitted_words, Some(1));
    }

    #[test]
    fn grapheme_layer_counts_character_chains() {
        let c = plain("trade\n");
        let g = build_grapheme_layer(&c).graph;
        for (s, d) in [("t", "r"), ("r", "a"), ("a", "d"), ("d", "e")] {
            assert_eq!(g.weight(s, d), Some(1));
        }
        assert_eq!(g.n(), 5);
    }

    #[test]
    fn doubled_letter_is_skipped_and_counted() {
        let c = plain("aa\n");
        let layer = build_grapheme_layer(&c);
        assert_eq!(layer.graph.k(), 0);
        assert_eq!(layer.provenance.self_pair_skips, 1);
        assert_eq!(layer.graph.n(), 1);
    }

    #[test]
    fn single_character_token_is_isolated_vertex() {
        let c = plain("x\n");
        let g = build_grapheme_layer(&c).graph;
        assert_eq!((g.n(), g.k()), (1, 0));
    }

    #[test]
    fn grapheme_layer_ignores_shuffling() {
        let c = plain("alpha beta gamma\ndelta epsilon\n");
        let a = build_grapheme_layer(&c);
        let b = build_grapheme_layer(&shuffle_corpus(&c, 31));
        assert!(a.graph.content_eq(&b.graph));
    }

    #[test]
    fn assemble_declares_couplings() {
        let c = plain("computer trade\n");
        let (annotated, _) = annotate_syllables(&c, &lexicon());
        let co = build_cooccurrence(&annotated);
        let shu = build_shuffled(&annotated, 3);
        let syl = build_syllable_layer(&annotated);
        let net = assemble(vec![co, shu, syl]).unwrap();
        let word = |c: Construction| AspectCoord::new(c, Subsystem::Word, "en");
        assert_eq!(
            net.coupling_of(&word(Construction::Cooccurrence), &word(Construction::Shuffle)),
            Some(Coupling::Multiplex)
        );
        assert_eq!(
            net.coupling_of(
                &word(Construction::Cooccurrence),
                &AspectCoord::new(Construction::Cooccurrence, Subsystem::Syllable, "en")
            ),
            Some(Coupling::Uncoupled)
        );
        let presence = net.vertex_presence();
        assert!(presence["computer"].len() == 2);
    }

    #[test]
    fn assemble_rejects_duplicate_coord() {
        let c = plain("a b\n");
        let l1 = build_cooccurrence(&c);
        let l2 = build_cooccurrence(&c);
        assert!(matches!(
            assemble(vec![l1, l2]),
            Err(LayerError::DuplicateLayer(_))
        ));
    }

    #[test]
    fn assemble_aligns_word_layers_and_strict_rejects() {
        let c = plain("a b c\n");
        let co = build_cooccurrence(&c);
        let mut sin = build_cooccurrence(&plain("a b\n"));
        sin.coord = AspectCoord::new(Construction::Syntax, Subsystem::Word, "en");
        assert!(matches!(
            assemble_strict(vec![co.clone(), sin.clone()]),
            Err(LayerError::MultiplexViolation { only_a: 1, only_b: 0, .. })
        ));
        let net = assemble(vec![co, sin]).unwrap();
        let sin_coord = AspectCoord::new(Construction::Syntax, Subsystem::Word, "en");
        assert_eq!(net.layers[&sin_coord].graph.n(), 3);
        assert_eq!(net.aligned[&sin_coord], 1);
    }

    #[test]
    fn assemble_is_permutation_invariant() {
        let c = plain("a b c\nc a\n");
        let mk = || {
            vec![
                build_cooccurrence(&c),
                build_shuffled(&c, 1),
                build_grapheme_layer(&c),
            ]
        };
        let mut fwd = mk();
        let net1 = assemble(fwd.drain(..).collect()).unwrap();
        let mut rev = mk();
        rev.reverse();
        let net2 = assemble(rev).unwrap();
        assert_eq!(
            net1.layers.keys().collect::<Vec<_>>(),
            net2.layers.keys().collect::<Vec<_>>()
        );
        for (coord, layer) in &net1.layers {
            assert!(layer.graph.content_eq(&net2.layers[coord].graph));
        }
    }

    #[test]
    fn layer_file_round_trip() {
        let c = plain("computer nasdaq trade\n");
        let (annotated, _) = annotate_syllables(&c, &lexicon());
        let layer = build_syllable_layer(&annotated);
        let mut buf = Vec::new();
        write_layer(&layer, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# coord: co-occurrence/syllable/en\n"));
        assert!(text.contains("# isolated: trade\n"));
        let back = read_layer(&buf[..]).unwrap();
        assert_eq!(back.coord, layer.coord);
        assert_eq!(back.provenance, layer.provenance);
        assert!(back.graph.content_eq(&layer.graph));
    }

    #[test]
    fn shuffled_layer_file_records_seed() {
        let c = plain("a b c\n");
        let layer = build_shuffled(&c, 42);
        let mut buf = Vec::new();
        write_layer(&layer, &mut buf).unwrap();
        let back = read_layer(&buf[..]).unwrap();
        assert_eq!(back.provenance.seed, Some(42));
    }
}
