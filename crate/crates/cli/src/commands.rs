use clap::Subcommand;
use pacsdiv_core::cohort::SHARE_TOP;
use pacsdiv_core::diversity::{diversity_distributions, Histogram};
use pacsdiv_core::{
    citation_distribution_by_diversity, citations_by_age, citations_by_diversity, corpus_summary,
    diversity_share_table, group_fraction_table, pacs_count_distributions,
    papers_with_pacs_fraction_by_year, transition_flows, CitationKeying, CitationSeries, Corpus,
    Horizon, ZeroPacsPolicy,
};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::table::{Cell, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Descriptive statistics of the period
    Summary,
    /// Fraction of papers with PACS codes, per year
    PacsCoverage,
    /// Distribution of code counts per author and per paper
    PacsCounts,
    /// Distribution of diversity per paper and per author
    DiversityDist,
    /// Fraction of active authors in each diversity group, per window
    Groups,
    /// Author flows between diversity groups of consecutive windows
    Flows,
    /// Average citations by age since publication
    CitationAge,
    /// Per-age and cumulative citations by paper diversity and band
    DiversityCitations,
    /// Citation-count distribution by paper diversity
    CitationDist,
    /// Percentage of cohort papers at each diversity
    Share,
    /// Ingest report only
    Validate,
}

impl Command {
    pub const ALL: [Command; 11] = [
        Command::Summary,
        Command::PacsCoverage,
        Command::PacsCounts,
        Command::DiversityDist,
        Command::Groups,
        Command::Flows,
        Command::CitationAge,
        Command::DiversityCitations,
        Command::CitationDist,
        Command::Share,
        Command::Validate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Summary => "summary",
            Command::PacsCoverage => "pacs-coverage",
            Command::PacsCounts => "pacs-counts",
            Command::DiversityDist => "diversity-dist",
            Command::Groups => "groups",
            Command::Flows => "flows",
            Command::CitationAge => "citation-age",
            Command::DiversityCitations => "diversity-citations",
            Command::CitationDist => "citation-dist",
            Command::Share => "share",
            Command::Validate => "validate",
        }
    }
}

/// A rendered analysis and the assumptions it rests on.
pub struct Report {
    pub table: Table,
    pub notes: Vec<String>,
}

pub fn build(command: Command, corpus: &Corpus, config: &RunConfig) -> Result<Report, CliError> {
    let mut notes = Vec::new();
    let zero_note = match config.zero_pacs {
        ZeroPacsPolicy::Exclude => {
            "papers without PACS codes are excluded from diversity-keyed results"
        }
        ZeroPacsPolicy::IncludeAsZero => "papers without PACS codes count as diversity 0",
    };
    let table = match command {
        Command::Summary => {
            notes.push(zero_note.into());
            notes.push(
                "author code counts and diversity use each author's union over the whole period"
                    .into(),
            );
            notes.push("papers per author and authors per paper count whole authorships".into());
            summary(corpus, config)?
        }
        Command::PacsCoverage => pacs_coverage(corpus),
        Command::PacsCounts => {
            notes.push(zero_note.into());
            pacs_counts(corpus, config)
        }
        Command::DiversityDist => {
            notes.push(zero_note.into());
            notes.push("author diversity uses each author's union over the whole period".into());
            diversity_dist(corpus, config)
        }
        Command::Groups => {
            notes.push(zero_note.into());
            notes.push(format!("author diversity mode: {}", config.author_mode));
            groups(corpus, config)?
        }
        Command::Flows => {
            notes.push(zero_note.into());
            notes.push(format!("author diversity mode: {}", config.author_mode));
            flows(corpus, config)?
        }
        Command::CitationAge => {
            notes.push(age_note(config));
            citation_age(corpus, config)?
        }
        Command::DiversityCitations => {
            notes.push(zero_note.into());
            notes.push(age_note(config));
            diversity_citations(corpus, config)?
        }
        Command::CitationDist => {
            notes.push(zero_note.into());
            notes.push(age_note(config));
            citation_dist(corpus, config)?
        }
        Command::Share => {
            notes.push(zero_note.into());
            share(corpus, config)?
        }
        Command::Validate => validate(corpus),
    };
    Ok(Report { table, notes })
}

fn age_note(config: &RunConfig) -> String {
    format!(
        "citation age is the citing year minus the cited year; ages 0..={} are counted, negative ages skipped",
        config.horizon
    )
}

fn summary(corpus: &Corpus, config: &RunConfig) -> Result<Table, CliError> {
    let s = corpus_summary(corpus, config.period, config.zero_pacs)?;
    let mut t = Table::new(["metric", "value"]);
    let rows: [(&str, Cell); 10] = [
        ("period", s.period.to_string().into()),
        ("authors", s.authors.into()),
        ("papers", s.papers.into()),
        ("avg_papers_per_author", s.avg_papers_per_author.into()),
        ("avg_authors_per_paper", s.avg_authors_per_paper.into()),
        ("avg_pacs_per_author", s.avg_pacs_per_author.into()),
        ("avg_pacs_per_paper", s.avg_pacs_per_paper.into()),
        ("avg_author_diversity", s.avg_author_diversity.into()),
        ("avg_paper_diversity", s.avg_paper_diversity.into()),
        ("avg_citations_per_paper", s.avg_citations_per_paper.into()),
    ];
    for (k, v) in rows {
        t.push(vec![k.into(), v]);
    }
    Ok(t)
}

fn pacs_coverage(corpus: &Corpus) -> Table {
    let mut t = Table::new(["year", "papers", "with_pacs", "fraction"]);
    for y in papers_with_pacs_fraction_by_year(corpus) {
        t.push(vec![
            y.year.into(),
            y.papers.into(),
            y.with_pacs.into(),
            y.fraction.into(),
        ]);
    }
    t
}

fn push_histogram(t: &mut Table, population: &str, h: &Histogram) {
    for ((value, count), (_, fraction)) in h.counts().zip(h.fractions()) {
        t.push(vec![
            population.into(),
            value.into(),
            count.into(),
            fraction.into(),
        ]);
    }
}

fn pacs_counts(corpus: &Corpus, config: &RunConfig) -> Table {
    let d = pacs_count_distributions(corpus, config.period, config.zero_pacs);
    let mut t = Table::new(["population", "codes", "count", "fraction"]);
    push_histogram(&mut t, "author", &d.authors);
    push_histogram(&mut t, "paper", &d.papers);
    t
}

fn diversity_dist(corpus: &Corpus, config: &RunConfig) -> Table {
    let d = diversity_distributions(corpus, config.period, config.zero_pacs);
    let mut t = Table::new(["population", "diversity", "count", "fraction"]);
    push_histogram(&mut t, "author", &d.authors);
    push_histogram(&mut t, "paper", &d.papers);
    t
}

fn groups(corpus: &Corpus, config: &RunConfig) -> Result<Table, CliError> {
    let g = group_fraction_table(
        corpus,
        &config.windows,
        &config.groups,
        config.author_mode,
        config.zero_pacs,
    )?;
    let mut t = Table::new(
        ["window".to_string(), "active_authors".to_string()]
            .into_iter()
            .chain(g.labels.iter().cloned()),
    );
    for row in &g.rows {
        let mut cells: Vec<Cell> = vec![row.window.to_string().into(), row.authors.into()];
        cells.extend(row.fractions.iter().map(|&f| Cell::from(f)));
        t.push(cells);
    }
    Ok(t)
}

pub const ENTRANT: &str = "(entrant)";
pub const LEAVER: &str = "(leaver)";

fn flows(corpus: &Corpus, config: &RunConfig) -> Result<Table, CliError> {
    let flows = transition_flows(
        corpus,
        &config.windows,
        &config.groups,
        config.author_mode,
        config.zero_pacs,
    )?;
    let mut t = Table::new([
        "from_window",
        "to_window",
        "from_group",
        "to_group",
        "authors",
    ]);
    for f in &flows {
        let (from, to) = (f.from_window.to_string(), f.to_window.to_string());
        let row = |a: &str, b: &str, n: u64| {
            vec![
                from.clone().into(),
                to.clone().into(),
                a.into(),
                b.into(),
                n.into(),
            ]
        };
        for (i, a) in f.labels.iter().enumerate() {
            for (j, b) in f.labels.iter().enumerate() {
                t.push(row(a, b, f.flow[i][j]));
            }
        }
        for (j, b) in f.labels.iter().enumerate() {
            t.push(row(ENTRANT, b, f.entrants[j]));
        }
        for (i, a) in f.labels.iter().enumerate() {
            t.push(row(a, LEAVER, f.leavers[i]));
        }
    }
    Ok(t)
}

fn push_series(t: &mut Table, keying: Option<&str>, s: &CitationSeries) {
    for e in &s.entries {
        for age in 0..e.totals.len() {
            let mut row: Vec<Cell> = vec![s.cohort.to_string().into()];
            if let Some(k) = keying {
                row.push(k.into());
                row.push(e.key.clone().into());
            }
            row.extend([
                Cell::from(age),
                e.papers.into(),
                e.totals[age].into(),
                e.average[age].into(),
                e.cumulative[age].into(),
            ]);
            t.push(row);
        }
    }
}

fn citation_age(corpus: &Corpus, config: &RunConfig) -> Result<Table, CliError> {
    let mut t = Table::new([
        "cohort",
        "age",
        "papers",
        "citations",
        "average",
        "cumulative",
    ]);
    for &cohort in &config.cohorts {
        let s = citations_by_age(corpus, cohort, Horizon::Years(config.horizon))?;
        push_series(&mut t, None, &s);
    }
    Ok(t)
}

fn diversity_citations(corpus: &Corpus, config: &RunConfig) -> Result<Table, CliError> {
    let mut t = Table::new([
        "cohort",
        "keying",
        "key",
        "age",
        "papers",
        "citations",
        "average",
        "cumulative",
    ]);
    let keyings = [
        CitationKeying::per_diversity(),
        CitationKeying::Bands(config.bands.clone()),
    ];
    for &cohort in &config.cohorts {
        for keying in &keyings {
            let s = citations_by_diversity(
                corpus,
                cohort,
                Horizon::Years(config.horizon),
                keying,
                config.zero_pacs,
            )?;
            push_series(&mut t, Some(keying.name()), &s);
        }
    }
    Ok(t)
}

fn citation_dist(corpus: &Corpus, config: &RunConfig) -> Result<Table, CliError> {
    let mut t = Table::new(["cohort", "key", "citations", "papers", "fraction"]);
    for &cohort in &config.cohorts {
        let d = citation_distribution_by_diversity(
            corpus,
            cohort,
            config.horizon,
            &CitationKeying::per_diversity(),
            config.zero_pacs,
        )?;
        for e in &d.entries {
            for (c, (&n, &f)) in e.counts.iter().zip(&e.fractions).enumerate() {
                t.push(vec![
                    cohort.to_string().into(),
                    e.key.clone().into(),
                    c.into(),
                    n.into(),
                    f.into(),
                ]);
            }
        }
    }
    Ok(t)
}

fn share(corpus: &Corpus, config: &RunConfig) -> Result<Table, CliError> {
    let s = diversity_share_table(corpus, &config.cohorts, config.zero_pacs)?;
    let mut t = Table::new(
        std::iter::once("diversity".to_string())
            .chain(s.columns.iter().map(|c| c.cohort.to_string())),
    );
    for (i, label) in s.labels.iter().enumerate() {
        let mut row: Vec<Cell> = vec![label.clone().into()];
        row.extend(s.columns.iter().map(|c| Cell::from(c.percentages[i])));
        t.push(row);
    }
    debug_assert_eq!(s.labels.len(), SHARE_TOP as usize + 1);
    Ok(t)
}

fn validate(corpus: &Corpus) -> Table {
    let s = corpus.ingest_stats();
    let mut t = Table::new(["metric", "value"]);
    let rows: [(&str, usize); 11] = [
        ("lines_read", s.lines_read),
        ("records_accepted", s.records_accepted),
        ("lines_dropped", s.lines_dropped),
        ("malformed_codes", s.malformed_codes),
        ("unknown_codes", s.unknown_codes),
        ("empty_author_names", s.empty_author_names),
        ("authors", corpus.author_count()),
        ("reference_entries", s.reference_entries),
        ("in_corpus_citations", s.in_corpus_citations),
        ("dangling_references", s.dangling_references),
        ("negative_age_citations", s.negative_age_citations),
    ];
    for (k, v) in rows {
        t.push(vec![k.into(), v.into()]);
    }
    t
}
