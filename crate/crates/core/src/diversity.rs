//! Weitzman diversity of PACS code sets.
//!
//! Diversity is built by inserting codes one at a time and adding the
//! distance from each new code to its nearest already-inserted neighbour.
//! For the level-three tree distance this sum does not depend on the
//! insertion order, so [`weitzman_diversity`] inserts in sorted order.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::{AuthorId, Corpus, PaperRecord, ZeroPacsPolicy};
use crate::error::{Error, Result};
use crate::pacs::{set_distance, PacsCode, MAX_DISTANCE};
use crate::period::YearRange;

/// Largest set accepted by [`weitzman_recursive`].
pub const RECURSIVE_MAX_CODES: usize = 10;

/// A deduplicated code set together with its diversity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiversitySet {
    codes: BTreeSet<PacsCode>,
    diversity: u32,
}

impl DiversitySet {
    pub fn new<I: IntoIterator<Item = PacsCode>>(codes: I) -> Self {
        let codes: BTreeSet<PacsCode> = codes.into_iter().collect();
        let diversity = weitzman_diversity(&codes);
        DiversitySet { codes, diversity }
    }

    pub fn codes(&self) -> &BTreeSet<PacsCode> {
        &self.codes
    }

    pub fn diversity(&self) -> u32 {
        self.diversity
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }
}

/// Runs the greedy insertion in exactly the given order. Repeated codes
/// contribute nothing.
pub fn diversity_in_order(order: &[PacsCode]) -> u32 {
    let mut total = 0;
    for (i, u) in order.iter().enumerate().skip(1) {
        total += set_distance(u, &order[..i]).expect("prefix is non-empty");
    }
    total
}

/// Diversity of a code set. Empty and singleton sets have diversity 0.
pub fn weitzman_diversity<'a, I>(codes: I) -> u32
where
    I: IntoIterator<Item = &'a PacsCode>,
{
    let mut sorted: Vec<PacsCode> = codes.into_iter().copied().collect();
    sorted.sort_unstable();
    sorted.dedup();
    diversity_in_order(&sorted)
}

/// Exhaustive max-form recursion
/// `D(Q) = max_{s in Q} D(Q \ {s}) + d(s, Q \ {s})`, memoized over subsets.
///
/// Exponential in the set size; meant for cross-checking.
pub fn weitzman_recursive<'a, I>(codes: I) -> Result<u32>
where
    I: IntoIterator<Item = &'a PacsCode>,
{
    let set: Vec<PacsCode> = codes
        .into_iter()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if set.len() > RECURSIVE_MAX_CODES {
        return Err(Error::SetTooLarge {
            len: set.len(),
            max: RECURSIVE_MAX_CODES,
        });
    }
    if set.is_empty() {
        return Ok(0);
    }
    let mut memo = HashMap::new();
    Ok(recurse(&set, (1u32 << set.len()) - 1, &mut memo))
}

fn recurse(set: &[PacsCode], mask: u32, memo: &mut HashMap<u32, u32>) -> u32 {
    if mask.count_ones() <= 1 {
        return 0;
    }
    if let Some(&v) = memo.get(&mask) {
        return v;
    }
    let mut best = 0;
    for (i, s) in set.iter().enumerate() {
        let bit = 1u32 << i;
        if mask & bit == 0 {
            continue;
        }
        let rest = mask & !bit;
        let others = set
            .iter()
            .enumerate()
            .filter(|(j, _)| rest & (1 << j) != 0)
            .map(|(_, c)| c);
        let d = set_distance(s, others).expect("rest is non-empty");
        best = best.max(recurse(set, rest, memo) + d);
    }
    memo.insert(mask, best);
    best
}

/// Upper bound `3 (n - 1)` on the diversity of `n` distinct codes.
pub fn max_diversity(n: usize) -> u32 {
    MAX_DISTANCE * n.saturating_sub(1) as u32
}

pub fn paper_diversity(paper: &PaperRecord) -> u32 {
    weitzman_diversity(&paper.pacs)
}

/// Diversity of every paper, in corpus order.
pub fn paper_diversities(corpus: &Corpus) -> Vec<u32> {
    corpus.papers().par_iter().map(paper_diversity).collect()
}

/// Diversity of the union of an author's codes over papers published in
/// `window` (half-open).
pub fn author_diversity(author: &AuthorId, corpus: &Corpus, window: YearRange) -> Result<u32> {
    let papers = corpus
        .papers_of(author)
        .ok_or_else(|| Error::UnknownAuthor(author.to_string()))?;
    let union = corpus
        .author_codes(papers, |p| window.contains(p.pub_year()))
        .unwrap_or_default();
    Ok(weitzman_diversity(&union))
}

/// Per-author code union within a window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuthorProfile<'a> {
    pub author: &'a AuthorId,
    pub codes: usize,
    pub diversity: u32,
}

/// Code-union size and diversity of every author with at least one paper in
/// `window` admitted by `policy`, in author order.
pub fn author_profiles(
    corpus: &Corpus,
    window: YearRange,
    policy: ZeroPacsPolicy,
) -> Vec<AuthorProfile<'_>> {
    let authors: Vec<(&AuthorId, &[usize])> = corpus.authors().collect();
    authors
        .par_iter()
        .filter_map(|&(author, papers)| {
            let codes = corpus.author_codes(papers, |p| {
                window.contains(p.pub_year()) && policy.admits(p)
            })?;
            Some(AuthorProfile {
                author,
                codes: codes.len(),
                diversity: weitzman_diversity(&codes),
            })
        })
        .collect()
}

/// Integer-keyed histogram.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Histogram {
    counts: BTreeMap<u64, u64>,
    total: u64,
}

impl Histogram {
    pub fn from_values<I: IntoIterator<Item = u64>>(values: I) -> Self {
        let mut h = Histogram::default();
        for v in values {
            h.add(v);
        }
        h
    }

    pub fn add(&mut self, value: u64) {
        *self.counts.entry(value).or_default() += 1;
        self.total += 1;
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn max_value(&self) -> Option<u64> {
        self.counts.keys().next_back().copied()
    }

    pub fn count(&self, value: u64) -> u64 {
        self.counts.get(&value).copied().unwrap_or(0)
    }

    /// `(value, count)` in ascending value order.
    pub fn counts(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.counts.iter().map(|(&v, &c)| (v, c))
    }

    /// `(value, fraction)` in ascending value order.
    pub fn fractions(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        let total = self.total as f64;
        self.counts().map(move |(v, c)| (v, c as f64 / total))
    }
}

/// Histogram of diversity values, as counts or as fractions of the total.
pub fn diversity_histogram(values: &[u32], normalize: bool) -> Vec<(u32, f64)> {
    let h = Histogram::from_values(values.iter().map(|&v| u64::from(v)));
    if normalize {
        h.fractions().map(|(v, f)| (v as u32, f)).collect()
    } else {
        h.counts().map(|(v, c)| (v as u32, c as f64)).collect()
    }
}

/// Diversity histograms for papers and for authors over a period.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiversityDistributions {
    pub papers: Histogram,
    pub authors: Histogram,
}

pub fn diversity_distributions(
    corpus: &Corpus,
    period: YearRange,
    policy: ZeroPacsPolicy,
) -> DiversityDistributions {
    let papers = Histogram::from_values(
        corpus
            .papers()
            .iter()
            .filter(|p| period.contains(p.pub_year()) && policy.admits(p))
            .map(|p| u64::from(paper_diversity(p))),
    );
    let authors = Histogram::from_values(
        author_profiles(corpus, period, policy)
            .iter()
            .map(|a| u64::from(a.diversity)),
    );
    DiversityDistributions { papers, authors }
}

/// Code-count histograms: per author (size of the period union) and per paper.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PacsCountDistributions {
    pub authors: Histogram,
    pub papers: Histogram,
}

pub fn pacs_count_distributions(
    corpus: &Corpus,
    period: YearRange,
    policy: ZeroPacsPolicy,
) -> PacsCountDistributions {
    let papers = Histogram::from_values(
        corpus
            .papers()
            .iter()
            .filter(|p| period.contains(p.pub_year()) && policy.admits(p))
            .map(|p| p.pacs.len() as u64),
    );
    let authors = Histogram::from_values(
        author_profiles(corpus, period, policy)
            .iter()
            .map(|a| a.codes as u64),
    );
    PacsCountDistributions { authors, papers }
}
