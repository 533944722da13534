//! Weitzman diversity of PACS-coded papers and authors, and the citation
//! analyses built on it.
//!
//! - [`pacs`]: code parsing and the level-three tree distance.
//! - [`corpus`]: JSON Lines ingestion and the in-corpus citation index.
//! - [`diversity`]: greedy and recursive diversity, per-paper and per-author.
//! - [`cohort`]: group fractions, flows, and diversity-keyed citation tables.

pub mod cohort;
pub mod corpus;
pub mod diversity;
pub mod error;
pub mod pacs;
pub mod period;

pub use cohort::{
    assign_group, citation_distribution_by_diversity, citations_by_age, citations_by_diversity,
    diversity_share_table, group_fraction_table, transition_flows, AuthorMode, CitationKeying,
    CitationSeries, DiversityGroupScheme, FlowMatrix, Horizon,
};
pub use corpus::{
    corpus_summary, load_corpus, papers_with_pacs_fraction_by_year, AuthorId, Corpus, IngestConfig,
    PaperRecord, SummaryStats, ZeroPacsPolicy,
};
pub use diversity::{
    author_diversity, diversity_histogram, pacs_count_distributions, paper_diversity,
    weitzman_diversity, weitzman_recursive, DiversitySet,
};
pub use error::{Error, Result};
pub use pacs::{distance, lca_level, parse_pacs, set_distance, PacsCode};
pub use period::YearRange;
