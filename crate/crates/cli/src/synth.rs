//! Seeded synthetic corpora in the input format, for benchmarks and
//! determinism checks.

use std::io::{self, Write};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const FIRST_YEAR: usize = 1985;
const YEARS: usize = 28;

/// Relative frequency of papers carrying 0 to 8 codes; papers with codes
/// carry about 2.9 on average.
const CODE_COUNT_WEIGHTS: [u32; 9] = [4, 17, 27, 24, 14, 8, 3, 2, 1];

fn weighted(rng: &mut StdRng, weights: &[u32]) -> usize {
    let total: u32 = weights.iter().sum();
    let mut pick = rng.gen_range(0..total);
    for (i, &w) in weights.iter().enumerate() {
        if pick < w {
            return i;
        }
        pick -= w;
    }
    weights.len() - 1
}

/// Writes `n` records, published in non-decreasing year order from 1985 to
/// 2012. References point at earlier records, with a few dangling ones.
pub fn write_jsonl<W: Write>(mut out: W, n: usize, seed: u64) -> io::Result<()> {
    let mut rng = StdRng::seed_from_u64(seed);
    let author_pool = (n * 6 / 7).max(1);
    for i in 0..n {
        let year = FIRST_YEAR + i * YEARS / n.max(1);
        let date = format!(
            "{year}-{:02}-{:02}",
            rng.gen_range(1..=12),
            rng.gen_range(1..=28)
        );

        let home = (rng.gen_range(0..10u8), rng.gen_range(0..10u8));
        let n_codes = weighted(&mut rng, &CODE_COUNT_WEIGHTS);
        let pacs: Vec<String> = (0..n_codes)
            .map(|_| {
                let a = if rng.gen_bool(0.7) {
                    home.0
                } else {
                    rng.gen_range(0..10)
                };
                let b = if rng.gen_bool(0.5) {
                    home.1
                } else {
                    rng.gen_range(0..10)
                };
                format!(
                    "{a}{b}.{:02}.{}",
                    rng.gen_range(0..20) * 5,
                    rng.gen_range('a'..='z')
                )
            })
            .collect();

        let n_authors = rng.gen_range(1..=6);
        let authors: Vec<String> = (0..n_authors)
            .map(|_| {
                // skewed towards low ids so some authors are prolific
                let u: f64 = rng.gen();
                format!("Author {}", (u * u * author_pool as f64) as usize)
            })
            .collect();

        let n_refs = if i == 0 { 0 } else { rng.gen_range(0..=12) };
        let refs: Vec<String> = (0..n_refs)
            .map(|_| {
                if rng.gen_bool(0.1) {
                    format!("10.9999/ext.{}", rng.gen_range(0..1_000_000))
                } else {
                    format!("10.1103/syn.{}", rng.gen_range(0..i))
                }
            })
            .collect();

        let record = serde_json::json!({
            "doi": format!("10.1103/syn.{i}"),
            "title": format!("Synthetic paper {i}"),
            "authors": authors,
            "date": date,
            "pacs": pacs,
            "refs": refs,
        });
        serde_json::to_writer(&mut out, &record)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

pub fn jsonl(n: usize, seed: u64) -> String {
    let mut buf = Vec::new();
    write_jsonl(&mut buf, n, seed).expect("writing to memory");
    String::from_utf8(buf).expect("json is utf-8")
}
