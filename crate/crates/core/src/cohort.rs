//! Cohort analyses: author diversity groups and their flows between time
//! windows, citation-age curves, and citation tables keyed by paper
//! diversity.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{AuthorId, Corpus, ZeroPacsPolicy};
use crate::diversity::{paper_diversity, weitzman_diversity};
use crate::error::{Error, Result};
use crate::pacs::PacsCode;
use crate::period::YearRange;

/// Default citation horizon in years.
pub const DEFAULT_HORIZON: u32 = 10;

/// One interval `[lo, hi]` of a group scheme; `hi = None` is open-ended.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiversityGroup {
    pub label: String,
    pub lo: u32,
    pub hi: Option<u32>,
}

/// Contiguous integer intervals covering `[0, inf)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiversityGroupScheme {
    groups: Vec<DiversityGroup>,
}

impl DiversityGroupScheme {
    pub fn new(groups: Vec<DiversityGroup>) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidScheme(m));
        if groups.is_empty() {
            return bad("no groups".into());
        }
        let mut next = 0u32;
        for (i, g) in groups.iter().enumerate() {
            if g.lo != next {
                return bad(format!(
                    "group {:?} starts at {}, expected {next}",
                    g.label, g.lo
                ));
            }
            let last = i + 1 == groups.len();
            match (g.hi, last) {
                (None, true) => {}
                (None, false) => return bad("only the last group may be open-ended".into()),
                (Some(_), true) => return bad("the last group must be open-ended".into()),
                (Some(hi), false) if hi < g.lo => {
                    return bad(format!("group {:?} is empty", g.label))
                }
                (Some(hi), false) => next = hi + 1,
            }
        }
        let labels: BTreeSet<&str> = groups.iter().map(|g| g.label.as_str()).collect();
        if labels.len() != groups.len() {
            return bad("duplicate labels".into());
        }
        Ok(DiversityGroupScheme { groups })
    }

    /// Parses `0-3,4-9,10-27,28+`, optionally with labels as in
    /// `low=0-2,medium=3-5,high=6+`. Unlabelled groups are named
    /// `{prefix}1`, `{prefix}2`, ...
    pub fn parse(spec: &str, prefix: &str) -> Result<Self> {
        let bad = || Error::InvalidScheme(spec.to_string());
        let mut groups = Vec::new();
        for (i, part) in spec.split(',').map(str::trim).enumerate() {
            let (label, range) = match part.split_once('=') {
                Some((l, r)) => (l.trim().to_string(), r.trim()),
                None => (format!("{prefix}{}", i + 1), part),
            };
            let (lo, hi) = if let Some(lo) = range.strip_suffix('+') {
                (lo.trim().parse().map_err(|_| bad())?, None)
            } else {
                let (lo, hi) = range.split_once('-').ok_or_else(bad)?;
                (
                    lo.trim().parse().map_err(|_| bad())?,
                    Some(hi.trim().parse().map_err(|_| bad())?),
                )
            };
            if label.is_empty() {
                return Err(bad());
            }
            groups.push(DiversityGroup { label, lo, hi });
        }
        DiversityGroupScheme::new(groups)
    }

    /// `G1=[0,3]`, `G2=[4,9]`, `G3=[10,27]`, `G4=[28+)`.
    pub fn author_groups() -> Self {
        DiversityGroupScheme::parse("0-3,4-9,10-27,28+", "G").unwrap()
    }

    /// `low={0,1,2}`, `medium={3,4,5}`, `high={6,...}`.
    pub fn paper_bands() -> Self {
        DiversityGroupScheme::parse("low=0-2,medium=3-5,high=6+", "").unwrap()
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn groups(&self) -> &[DiversityGroup] {
        &self.groups
    }

    pub fn labels(&self) -> Vec<String> {
        self.groups.iter().map(|g| g.label.clone()).collect()
    }

    /// Index of the group containing `diversity`.
    pub fn index_of(&self, diversity: u32) -> usize {
        // groups start at 0 and are contiguous, so the last group with
        // lo <= diversity is the one
        self.groups
            .iter()
            .rposition(|g| g.lo <= diversity)
            .expect("scheme covers 0")
    }

    pub fn assign(&self, diversity: u32) -> &str {
        &self.groups[self.index_of(diversity)].label
    }
}

impl fmt::Display for DiversityGroupScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.groups.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            match g.hi {
                Some(hi) => write!(f, "{}={}-{}", g.label, g.lo, hi)?,
                None => write!(f, "{}={}+", g.label, g.lo)?,
            }
        }
        Ok(())
    }
}

pub fn assign_group(diversity: u32, scheme: &DiversityGroupScheme) -> &str {
    scheme.assign(diversity)
}

/// Which of an author's papers define their diversity in a window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AuthorMode {
    /// Only papers published inside the window.
    #[default]
    Windowed,
    /// Every paper published before the window ends.
    Cumulative,
}

impl FromStr for AuthorMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "windowed" => Ok(AuthorMode::Windowed),
            "cumulative" => Ok(AuthorMode::Cumulative),
            _ => Err(Error::InvalidArgument(format!("unknown author mode {s:?}"))),
        }
    }
}

impl fmt::Display for AuthorMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AuthorMode::Windowed => "windowed",
            AuthorMode::Cumulative => "cumulative",
        })
    }
}

/// Group index of every author active in `window`, i.e. with at least one
/// paper admitted by `policy` published there.
pub fn author_groups_in_window<'a>(
    corpus: &'a Corpus,
    window: YearRange,
    scheme: &DiversityGroupScheme,
    mode: AuthorMode,
    policy: ZeroPacsPolicy,
) -> BTreeMap<&'a AuthorId, usize> {
    let authors: Vec<(&AuthorId, &[usize])> = corpus.authors().collect();
    authors
        .par_iter()
        .filter_map(|&(author, papers)| {
            let mut active = false;
            let mut union: BTreeSet<PacsCode> = BTreeSet::new();
            for &i in papers {
                let p = &corpus.papers()[i];
                if !policy.admits(p) {
                    continue;
                }
                let year = p.pub_year();
                let counted = match mode {
                    AuthorMode::Windowed => window.contains(year),
                    AuthorMode::Cumulative => year < window.end(),
                };
                if counted {
                    union.extend(p.pacs.iter().copied());
                }
                active |= window.contains(year);
            }
            active.then(|| (author, scheme.index_of(weitzman_diversity(&union))))
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupFractionRow {
    pub window: YearRange,
    pub authors: usize,
    pub counts: Vec<usize>,
    pub fractions: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupFractionTable {
    pub labels: Vec<String>,
    pub mode: AuthorMode,
    pub rows: Vec<GroupFractionRow>,
}

/// Fraction of active authors in each group, per window. A window without
/// active authors yields a row of zeros.
pub fn group_fraction_table(
    corpus: &Corpus,
    windows: &[YearRange],
    scheme: &DiversityGroupScheme,
    mode: AuthorMode,
    policy: ZeroPacsPolicy,
) -> Result<GroupFractionTable> {
    if windows.is_empty() {
        return Err(Error::InvalidArgument("no windows given".into()));
    }
    let rows = windows
        .iter()
        .map(|&window| {
            let groups = author_groups_in_window(corpus, window, scheme, mode, policy);
            let mut counts = vec![0usize; scheme.len()];
            for &g in groups.values() {
                counts[g] += 1;
            }
            let authors = groups.len();
            let fractions = counts
                .iter()
                .map(|&c| {
                    if authors == 0 {
                        0.0
                    } else {
                        c as f64 / authors as f64
                    }
                })
                .collect();
            GroupFractionRow {
                window,
                authors,
                counts,
                fractions,
            }
        })
        .collect();
    Ok(GroupFractionTable {
        labels: scheme.labels(),
        mode,
        rows,
    })
}

/// Author movements between the groups of two consecutive windows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlowMatrix {
    pub from_window: YearRange,
    pub to_window: YearRange,
    pub labels: Vec<String>,
    /// `flow[from][to]`: authors active in both windows.
    pub flow: Vec<Vec<u64>>,
    /// Authors active only in the later window, by their group there.
    pub entrants: Vec<u64>,
    /// Authors active only in the earlier window, by their group there.
    pub leavers: Vec<u64>,
    pub from_totals: Vec<u64>,
    pub to_totals: Vec<u64>,
}

impl FlowMatrix {
    /// Whether every row and column adds up to its window total.
    pub fn is_conserved(&self) -> bool {
        let n = self.labels.len();
        (0..n).all(|g| {
            let row: u64 = self.flow[g].iter().sum();
            let col: u64 = self.flow.iter().map(|r| r[g]).sum();
            row + self.leavers[g] == self.from_totals[g]
                && col + self.entrants[g] == self.to_totals[g]
        })
    }
}

pub fn transition_flows(
    corpus: &Corpus,
    windows: &[YearRange],
    scheme: &DiversityGroupScheme,
    mode: AuthorMode,
    policy: ZeroPacsPolicy,
) -> Result<Vec<FlowMatrix>> {
    if windows.len() < 2 {
        return Err(Error::InvalidArgument(
            "flows need at least two windows".into(),
        ));
    }
    for pair in windows.windows(2) {
        if pair[0].end() > pair[1].start() {
            return Err(Error::OverlappingWindows(
                pair[0].to_string(),
                pair[1].to_string(),
            ));
        }
    }
    let n = scheme.len();
    let per_window: Vec<_> = windows
        .iter()
        .map(|&w| author_groups_in_window(corpus, w, scheme, mode, policy))
        .collect();

    let mut out = Vec::with_capacity(windows.len() - 1);
    for (i, pair) in per_window.windows(2).enumerate() {
        let (before, after) = (&pair[0], &pair[1]);
        let mut m = FlowMatrix {
            from_window: windows[i],
            to_window: windows[i + 1],
            labels: scheme.labels(),
            flow: vec![vec![0; n]; n],
            entrants: vec![0; n],
            leavers: vec![0; n],
            from_totals: vec![0; n],
            to_totals: vec![0; n],
        };
        for (author, &g) in before {
            m.from_totals[g] += 1;
            match after.get(author) {
                Some(&h) => m.flow[g][h] += 1,
                None => m.leavers[g] += 1,
            }
        }
        for (author, &h) in after {
            m.to_totals[h] += 1;
            if !before.contains_key(author) {
                m.entrants[h] += 1;
            }
        }
        out.push(m);
    }
    Ok(out)
}

/// How cohort papers are grouped by diversity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CitationKeying {
    /// One key per diversity value below `top`, then a pooled `top+` key.
    PerDiversity { top: u32 },
    /// Keys are the groups of a band scheme.
    Bands(DiversityGroupScheme),
}

impl CitationKeying {
    /// Per-diversity keys `0` through `7` and a pooled `8+`.
    pub fn per_diversity() -> Self {
        CitationKeying::PerDiversity { top: 8 }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CitationKeying::PerDiversity { .. } => "diversity",
            CitationKeying::Bands(_) => "band",
        }
    }

    /// `(rank, label)`; ranks order the keys.
    pub fn key(&self, diversity: u32) -> (usize, String) {
        match self {
            CitationKeying::PerDiversity { top } if diversity >= *top => {
                (*top as usize, format!("{top}+"))
            }
            CitationKeying::PerDiversity { .. } => (diversity as usize, diversity.to_string()),
            CitationKeying::Bands(scheme) => {
                let i = scheme.index_of(diversity);
                (i, scheme.groups()[i].label.clone())
            }
        }
    }
}

/// Citation counts by age for one group of papers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesEntry {
    pub key: String,
    pub papers: usize,
    /// Citations received at each age `0..=horizon`, summed over papers.
    pub totals: Vec<u64>,
    pub average: Vec<f64>,
    pub cumulative: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CitationSeries {
    pub cohort: YearRange,
    pub horizon: u32,
    pub entries: Vec<SeriesEntry>,
}

impl CitationSeries {
    pub fn entry(&self, key: &str) -> Option<&SeriesEntry> {
        self.entries.iter().find(|e| e.key == key)
    }
}

/// Citation horizon: a fixed number of years, or every observed age.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Horizon {
    Years(u32),
    Unbounded,
}

impl Horizon {
    fn resolve(self, corpus: &Corpus, papers: &[usize]) -> Result<u32> {
        match self {
            Horizon::Years(0) => Err(Error::InvalidArgument("horizon must be at least 1".into())),
            Horizon::Years(h) => Ok(h),
            Horizon::Unbounded => Ok(papers
                .iter()
                .flat_map(|&i| corpus.citation_ages(i))
                .max()
                .unwrap_or(0)),
        }
    }
}

fn cohort_papers(corpus: &Corpus, cohort: YearRange) -> Vec<usize> {
    (0..corpus.len())
        .filter(|&i| cohort.contains(corpus.papers()[i].pub_year()))
        .collect()
}

fn admitted_with_diversity(
    corpus: &Corpus,
    cohort: YearRange,
    policy: ZeroPacsPolicy,
) -> Result<Vec<(usize, u32)>> {
    let papers: Vec<(usize, u32)> = cohort_papers(corpus, cohort)
        .into_par_iter()
        .filter(|&i| policy.admits(&corpus.papers()[i]))
        .map(|i| (i, paper_diversity(&corpus.papers()[i])))
        .collect();
    if papers.is_empty() {
        Err(Error::EmptyCohort(cohort.to_string()))
    } else {
        Ok(papers)
    }
}

fn series_entry(corpus: &Corpus, key: String, papers: &[usize], horizon: u32) -> SeriesEntry {
    let mut totals = vec![0u64; horizon as usize + 1];
    for &i in papers {
        for age in corpus.citation_ages(i) {
            if age <= horizon {
                totals[age as usize] += 1;
            }
        }
    }
    let n = papers.len() as f64;
    let average: Vec<f64> = totals.iter().map(|&t| t as f64 / n).collect();
    let cumulative = average
        .iter()
        .scan(0.0, |acc, &a| {
            *acc += a;
            Some(*acc)
        })
        .collect();
    SeriesEntry {
        key,
        papers: papers.len(),
        totals,
        average,
        cumulative,
    }
}

/// Average citations received at each age by papers of the cohort, under a
/// single key `all`.
pub fn citations_by_age(
    corpus: &Corpus,
    cohort: YearRange,
    horizon: Horizon,
) -> Result<CitationSeries> {
    let papers = cohort_papers(corpus, cohort);
    if papers.is_empty() {
        return Err(Error::EmptyCohort(cohort.to_string()));
    }
    let horizon = horizon.resolve(corpus, &papers)?;
    Ok(CitationSeries {
        cohort,
        horizon,
        entries: vec![series_entry(corpus, "all".into(), &papers, horizon)],
    })
}

fn group_by_key(
    keying: &CitationKeying,
    papers: &[(usize, u32)],
) -> BTreeMap<(usize, String), Vec<usize>> {
    let mut groups: BTreeMap<(usize, String), Vec<usize>> = BTreeMap::new();
    for &(i, d) in papers {
        groups.entry(keying.key(d)).or_default().push(i);
    }
    groups
}

/// Per-age and cumulative average citations, grouped by paper diversity.
/// Keys without papers are omitted.
pub fn citations_by_diversity(
    corpus: &Corpus,
    cohort: YearRange,
    horizon: Horizon,
    keying: &CitationKeying,
    policy: ZeroPacsPolicy,
) -> Result<CitationSeries> {
    let papers = admitted_with_diversity(corpus, cohort, policy)?;
    let indexes: Vec<usize> = papers.iter().map(|p| p.0).collect();
    let horizon = horizon.resolve(corpus, &indexes)?;
    let entries = group_by_key(keying, &papers)
        .into_iter()
        .map(|((_, key), members)| series_entry(corpus, key, &members, horizon))
        .collect();
    Ok(CitationSeries {
        cohort,
        horizon,
        entries,
    })
}

/// Labels of the share table rows: `0` to `8`, then `9+`.
pub const SHARE_TOP: u32 = 9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShareColumn {
    pub cohort: YearRange,
    pub papers: u64,
    pub counts: Vec<u64>,
    pub percentages: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShareTable {
    pub labels: Vec<String>,
    pub columns: Vec<ShareColumn>,
}

/// Percentage of each cohort's papers at every diversity value, with the
/// values from 9 up pooled. A cohort without papers yields zeros.
pub fn diversity_share_table(
    corpus: &Corpus,
    cohorts: &[YearRange],
    policy: ZeroPacsPolicy,
) -> Result<ShareTable> {
    if cohorts.is_empty() {
        return Err(Error::InvalidArgument("no cohorts given".into()));
    }
    let keying = CitationKeying::PerDiversity { top: SHARE_TOP };
    let labels: Vec<String> = (0..=SHARE_TOP).map(|d| keying.key(d).1).collect();
    let columns = cohorts
        .iter()
        .map(|&cohort| {
            let mut counts = vec![0u64; labels.len()];
            let papers = admitted_with_diversity(corpus, cohort, policy).unwrap_or_default();
            for &(_, d) in &papers {
                counts[keying.key(d).0] += 1;
            }
            let n = papers.len() as u64;
            let percentages = counts
                .iter()
                .map(|&c| {
                    if n == 0 {
                        0.0
                    } else {
                        100.0 * c as f64 / n as f64
                    }
                })
                .collect();
            ShareColumn {
                cohort,
                papers: n,
                counts,
                percentages,
            }
        })
        .collect();
    Ok(ShareTable { labels, columns })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistributionEntry {
    pub key: String,
    pub papers: usize,
    /// `counts[c]`: papers with exactly `c` citations within the horizon.
    pub counts: Vec<u64>,
    pub fractions: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CitationDistribution {
    pub cohort: YearRange,
    pub horizon: u32,
    pub entries: Vec<DistributionEntry>,
}

/// For every diversity key, the fraction of papers receiving exactly `c`
/// citations at ages `0..=horizon`, for `c` from 0 to the key's maximum.
pub fn citation_distribution_by_diversity(
    corpus: &Corpus,
    cohort: YearRange,
    horizon: u32,
    keying: &CitationKeying,
    policy: ZeroPacsPolicy,
) -> Result<CitationDistribution> {
    if horizon == 0 {
        return Err(Error::InvalidArgument("horizon must be at least 1".into()));
    }
    let papers = admitted_with_diversity(corpus, cohort, policy)?;
    let entries = group_by_key(keying, &papers)
        .into_iter()
        .map(|((_, key), members)| {
            let cites: Vec<usize> = members
                .iter()
                .map(|&i| corpus.citation_ages(i).filter(|&a| a <= horizon).count())
                .collect();
            let max = cites.iter().copied().max().unwrap_or(0);
            let mut counts = vec![0u64; max + 1];
            for c in cites {
                counts[c] += 1;
            }
            let n = members.len() as f64;
            let fractions = counts.iter().map(|&c| c as f64 / n).collect();
            DistributionEntry {
                key,
                papers: members.len(),
                counts,
                fractions,
            }
        })
        .collect();
    Ok(CitationDistribution {
        cohort,
        horizon,
        entries,
    })
}
