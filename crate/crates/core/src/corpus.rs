//! Article metadata ingestion and the in-corpus citation index.
//!
//! Input is JSON Lines, one article per line:
//!
//! ```text
//! {"doi": "10.1103/X.1", "title": "...", "authors": ["A. Name"], "date": "1990-05-01",
//!  "pacs": ["04.25.dg"], "refs": ["10.1103/X.0"]}
//! ```
//!
//! Unknown fields are ignored. Only references whose target is also in the
//! file become citations; everything else is counted as dangling.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::diversity::weitzman_diversity;
use crate::error::{Error, Result};
use crate::pacs::{parse_pacs, KnownCodes, PacsCode};
use crate::period::YearRange;

/// Author identity: the name case-folded with whitespace runs collapsed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AuthorId(String);

impl AuthorId {
    pub fn new(raw: &str) -> Self {
        AuthorId(normalize_name(raw))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for AuthorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub fn normalize_name(raw: &str) -> String {
    raw.split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PaperRecord {
    pub doi: String,
    pub title: String,
    pub authors: Vec<AuthorId>,
    pub pub_date: NaiveDate,
    pub pacs: BTreeSet<PacsCode>,
    pub refs: Vec<String>,
}

impl PaperRecord {
    pub fn pub_year(&self) -> i32 {
        self.pub_date.year()
    }

    pub fn has_pacs(&self) -> bool {
        !self.pacs.is_empty()
    }
}

/// How papers without any PACS code enter diversity-keyed analyses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZeroPacsPolicy {
    /// Leave them out of every diversity-keyed table.
    #[default]
    Exclude,
    /// Treat them as papers of diversity 0.
    IncludeAsZero,
}

impl ZeroPacsPolicy {
    pub fn admits(self, paper: &PaperRecord) -> bool {
        self == ZeroPacsPolicy::IncludeAsZero || paper.has_pacs()
    }
}

#[derive(Debug, Clone, Default)]
pub struct IngestConfig {
    /// Drop unparseable lines and duplicate DOIs instead of failing the load.
    pub skip_invalid_lines: bool,
    /// When set, codes outside this list are counted in the ingest stats.
    pub known_codes: Option<KnownCodes>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct IngestStats {
    pub lines_read: usize,
    pub records_accepted: usize,
    pub lines_dropped: usize,
    pub malformed_codes: usize,
    pub unknown_codes: usize,
    pub empty_author_names: usize,
    pub reference_entries: usize,
    pub in_corpus_citations: usize,
    pub dangling_references: usize,
    pub negative_age_citations: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DroppedLine {
    pub line: usize,
    pub reason: String,
}

/// A reference from another corpus paper.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Citation {
    /// Index of the citing paper in [`Corpus::papers`].
    pub citing: usize,
    pub citing_year: i32,
}

#[derive(Deserialize)]
struct RawRecord {
    doi: String,
    #[serde(default)]
    title: String,
    #[serde(default)]
    authors: Vec<String>,
    date: String,
    #[serde(default)]
    pacs: Vec<String>,
    #[serde(default)]
    refs: Vec<String>,
}

/// An immutable set of papers with its derived citation and author indexes.
#[derive(Debug, Clone)]
pub struct Corpus {
    papers: Vec<PaperRecord>,
    by_doi: HashMap<String, usize>,
    citations_in: Vec<Vec<Citation>>,
    by_author: BTreeMap<AuthorId, Vec<usize>>,
    stats: IngestStats,
    dropped: Vec<DroppedLine>,
}

/// Loads a JSON Lines file.
pub fn load_corpus(path: &Path, config: &IngestConfig) -> Result<Corpus> {
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::open(path).map_err(io_err)?;
    Corpus::from_reader(BufReader::new(file), config).map_err(|e| match e {
        Error::Io { source, .. } => io_err(source),
        other => other,
    })
}

impl Corpus {
    pub fn from_reader<R: Read>(reader: R, config: &IngestConfig) -> Result<Corpus> {
        let mut stats = IngestStats::default();
        let mut dropped = Vec::new();
        let mut papers = Vec::new();
        let mut by_doi = HashMap::new();

        for (i, line) in BufReader::new(reader).lines().enumerate() {
            let lineno = i + 1;
            let line = line.map_err(|source| Error::Io {
                path: Default::default(),
                source,
            })?;
            if line.trim().is_empty() {
                continue;
            }
            stats.lines_read += 1;
            let parsed = parse_record(&line, lineno, config, &mut stats).and_then(|paper| {
                if by_doi.contains_key(&paper.doi) {
                    Err(Error::DuplicateDoi {
                        line: lineno,
                        doi: paper.doi,
                    })
                } else {
                    Ok(paper)
                }
            });
            match parsed {
                Ok(paper) => {
                    by_doi.insert(paper.doi.clone(), papers.len());
                    papers.push(paper);
                }
                Err(e) if config.skip_invalid_lines => {
                    stats.lines_dropped += 1;
                    dropped.push(DroppedLine {
                        line: lineno,
                        reason: e.to_string(),
                    });
                }
                Err(e) => return Err(e),
            }
        }
        stats.records_accepted = papers.len();
        Ok(Corpus::index(papers, by_doi, stats, dropped))
    }

    pub fn from_jsonl(text: &str, config: &IngestConfig) -> Result<Corpus> {
        Corpus::from_reader(text.as_bytes(), config)
    }

    /// Builds a corpus from already-parsed records.
    pub fn from_records(papers: Vec<PaperRecord>) -> Result<Corpus> {
        let mut by_doi = HashMap::with_capacity(papers.len());
        for (i, p) in papers.iter().enumerate() {
            if p.doi.is_empty() {
                return Err(Error::Format {
                    line: i + 1,
                    message: "empty doi".into(),
                });
            }
            if by_doi.insert(p.doi.clone(), i).is_some() {
                return Err(Error::DuplicateDoi {
                    line: i + 1,
                    doi: p.doi.clone(),
                });
            }
        }
        let stats = IngestStats {
            lines_read: papers.len(),
            records_accepted: papers.len(),
            ..Default::default()
        };
        Ok(Corpus::index(papers, by_doi, stats, Vec::new()))
    }

    fn index(
        papers: Vec<PaperRecord>,
        by_doi: HashMap<String, usize>,
        mut stats: IngestStats,
        dropped: Vec<DroppedLine>,
    ) -> Corpus {
        let mut citations_in = vec![Vec::new(); papers.len()];
        let mut by_author: BTreeMap<AuthorId, Vec<usize>> = BTreeMap::new();
        for (i, paper) in papers.iter().enumerate() {
            for author in &paper.authors {
                by_author.entry(author.clone()).or_default().push(i);
            }
            for r in &paper.refs {
                stats.reference_entries += 1;
                match by_doi.get(r) {
                    Some(&target) => {
                        stats.in_corpus_citations += 1;
                        if paper.pub_year() < papers[target].pub_year() {
                            stats.negative_age_citations += 1;
                        }
                        citations_in[target].push(Citation {
                            citing: i,
                            citing_year: paper.pub_year(),
                        });
                    }
                    None => stats.dangling_references += 1,
                }
            }
        }
        Corpus {
            papers,
            by_doi,
            citations_in,
            by_author,
            stats,
            dropped,
        }
    }

    pub fn papers(&self) -> &[PaperRecord] {
        &self.papers
    }

    pub fn len(&self) -> usize {
        self.papers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.papers.is_empty()
    }

    pub fn paper(&self, doi: &str) -> Option<&PaperRecord> {
        self.by_doi.get(doi).map(|&i| &self.papers[i])
    }

    pub fn index_of(&self, doi: &str) -> Option<usize> {
        self.by_doi.get(doi).copied()
    }

    /// In-corpus citations received by the paper at `index`, in file order of
    /// the citing papers.
    pub fn citations_in(&self, index: usize) -> &[Citation] {
        &self.citations_in[index]
    }

    /// `(citing doi, citing year)` pairs for the paper with this DOI.
    pub fn citations_to(&self, doi: &str) -> Option<Vec<(&str, i32)>> {
        let i = self.index_of(doi)?;
        Some(
            self.citations_in[i]
                .iter()
                .map(|c| (self.papers[c.citing].doi.as_str(), c.citing_year))
                .collect(),
        )
    }

    /// Ages of the citations received by the paper at `index`, skipping
    /// negative ages.
    pub fn citation_ages(&self, index: usize) -> impl Iterator<Item = u32> + '_ {
        let year = self.papers[index].pub_year();
        self.citations_in[index]
            .iter()
            .filter_map(move |c| u32::try_from(c.citing_year - year).ok())
    }

    /// Authors in sorted order with the indexes of their papers.
    pub fn authors(&self) -> impl Iterator<Item = (&AuthorId, &[usize])> {
        self.by_author.iter().map(|(a, v)| (a, v.as_slice()))
    }

    pub fn author_count(&self) -> usize {
        self.by_author.len()
    }

    pub fn papers_of(&self, author: &AuthorId) -> Option<&[usize]> {
        self.by_author.get(author).map(Vec::as_slice)
    }

    pub fn ingest_stats(&self) -> &IngestStats {
        &self.stats
    }

    pub fn dropped_lines(&self) -> &[DroppedLine] {
        &self.dropped
    }

    /// Total in-corpus citations with non-negative age.
    pub fn non_negative_citation_count(&self) -> usize {
        self.stats.in_corpus_citations - self.stats.negative_age_citations
    }

    /// Union of the codes of the listed papers that pass `admit`, or `None`
    /// when no paper passes.
    pub(crate) fn author_codes(
        &self,
        papers: &[usize],
        mut admit: impl FnMut(&PaperRecord) -> bool,
    ) -> Option<BTreeSet<PacsCode>> {
        let mut union: Option<BTreeSet<PacsCode>> = None;
        for &i in papers {
            let p = &self.papers[i];
            if admit(p) {
                union
                    .get_or_insert_with(BTreeSet::new)
                    .extend(p.pacs.iter().copied());
            }
        }
        union
    }
}

fn parse_record(
    line: &str,
    lineno: usize,
    config: &IngestConfig,
    stats: &mut IngestStats,
) -> Result<PaperRecord> {
    let format_err = |message: String| Error::Format {
        line: lineno,
        message,
    };
    let raw: RawRecord = serde_json::from_str(line).map_err(|e| format_err(e.to_string()))?;
    let doi = raw.doi.trim().to_string();
    if doi.is_empty() {
        return Err(format_err("empty doi".into()));
    }
    let pub_date = NaiveDate::parse_from_str(raw.date.trim(), "%Y-%m-%d")
        .map_err(|e| format_err(format!("bad date {:?}: {e}", raw.date)))?;

    let mut pacs = BTreeSet::new();
    let mut malformed = 0;
    let mut unknown = 0;
    for s in &raw.pacs {
        match parse_pacs(s) {
            Ok(code) => {
                if let Some(known) = &config.known_codes {
                    if !known.contains(&code) {
                        unknown += 1;
                    }
                }
                pacs.insert(code);
            }
            Err(_) => malformed += 1,
        }
    }

    let mut authors: Vec<AuthorId> = Vec::with_capacity(raw.authors.len());
    let mut empty_names = 0;
    for name in &raw.authors {
        let id = AuthorId::new(name);
        if id.as_str().is_empty() {
            empty_names += 1;
        } else if !authors.contains(&id) {
            authors.push(id);
        }
    }

    stats.malformed_codes += malformed;
    stats.unknown_codes += unknown;
    stats.empty_author_names += empty_names;
    Ok(PaperRecord {
        doi,
        title: raw.title,
        authors,
        pub_date,
        pacs,
        refs: raw.refs.into_iter().map(|r| r.trim().to_string()).collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct YearCoverage {
    pub year: i32,
    pub papers: usize,
    pub with_pacs: usize,
    pub fraction: f64,
}

/// Per publication year, the share of papers carrying at least one code.
pub fn papers_with_pacs_fraction_by_year(corpus: &Corpus) -> Vec<YearCoverage> {
    let mut by_year: BTreeMap<i32, (usize, usize)> = BTreeMap::new();
    for p in corpus.papers() {
        let e = by_year.entry(p.pub_year()).or_default();
        e.0 += 1;
        if p.has_pacs() {
            e.1 += 1;
        }
    }
    by_year
        .into_iter()
        .map(|(year, (papers, with_pacs))| YearCoverage {
            year,
            papers,
            with_pacs,
            fraction: with_pacs as f64 / papers as f64,
        })
        .collect()
}

/// Descriptive statistics over the papers published in a period.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryStats {
    pub period: YearRange,
    pub authors: usize,
    pub papers: usize,
    pub avg_papers_per_author: f64,
    pub avg_authors_per_paper: f64,
    pub avg_pacs_per_author: f64,
    pub avg_pacs_per_paper: f64,
    pub avg_author_diversity: f64,
    pub avg_paper_diversity: f64,
    pub avg_citations_per_paper: f64,
}

/// Computes the period summary.
///
/// Paper and author counts, authorship averages and citations per paper use
/// every paper in the period. Code-count and diversity averages use the
/// papers admitted by `policy`; an author enters them when at least one of
/// their admitted papers falls in the period, and their code union and
/// diversity are taken over the whole period.
pub fn corpus_summary(
    corpus: &Corpus,
    period: YearRange,
    policy: ZeroPacsPolicy,
) -> Result<SummaryStats> {
    let in_period: Vec<usize> = (0..corpus.len())
        .filter(|&i| period.contains(corpus.papers[i].pub_year()))
        .collect();
    if in_period.is_empty() {
        return Err(Error::EmptyPeriod(period.to_string()));
    }

    let mut authorships = 0usize;
    let mut citations = 0usize;
    let mut coded_papers = 0usize;
    let mut paper_codes = 0usize;
    let mut paper_div = 0u64;
    let mut unions: BTreeMap<&AuthorId, (bool, BTreeSet<PacsCode>)> = BTreeMap::new();
    for &i in &in_period {
        let p = &corpus.papers[i];
        let admitted = policy.admits(p);
        authorships += p.authors.len();
        citations += corpus.citation_ages(i).count();
        if admitted {
            coded_papers += 1;
            paper_codes += p.pacs.len();
            paper_div += u64::from(weitzman_diversity(&p.pacs));
        }
        for a in &p.authors {
            let e = unions.entry(a).or_default();
            e.0 |= admitted;
            e.1.extend(p.pacs.iter().copied());
        }
    }

    let n_authors = unions.len();
    let mut coded_authors = 0usize;
    let mut author_codes = 0usize;
    let mut author_div = 0u64;
    for (admitted, union) in unions.values() {
        if *admitted {
            coded_authors += 1;
            author_codes += union.len();
            author_div += u64::from(weitzman_diversity(union));
        }
    }

    let n_papers = in_period.len();
    Ok(SummaryStats {
        period,
        authors: n_authors,
        papers: n_papers,
        avg_papers_per_author: ratio(authorships as f64, n_authors),
        avg_authors_per_paper: ratio(authorships as f64, n_papers),
        avg_pacs_per_author: ratio(author_codes as f64, coded_authors),
        avg_pacs_per_paper: ratio(paper_codes as f64, coded_papers),
        avg_author_diversity: ratio(author_div as f64, coded_authors),
        avg_paper_diversity: ratio(paper_div as f64, coded_papers),
        avg_citations_per_paper: ratio(citations as f64, n_papers),
    })
}

fn ratio(num: f64, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num / den as f64
    }
}
