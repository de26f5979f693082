//! Seeded generators for pairwise-distinct element streams, plus JSON-lines
//! stream IO.
//!
//! Profiles:
//! - `star-free`: elements drawn from a finite pool of non-limit points;
//! - `star-rich`: every element carries a star point never seen before,
//!   plus a little filler from the pool;
//! - `mixed`: a coin flip between the two per element;
//! - `bucketed`: a few fixed star traces with a configurable dominant share,
//!   exercising the finite-trace path.
//!
//! The same (kind, size, seed) always produces the same stream.

use std::collections::BTreeSet;
use std::io::{BufRead, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::group::{GeneratorId, GroupElement, Point, UltrafilterId};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StreamKind {
    StarFree,
    StarRich,
    Mixed,
    Bucketed,
}

/// Generation parameters. `pool_size` bounds the non-star point pool;
/// `buckets` and `dominant_percent` apply to the bucketed profile.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct StreamProfile {
    pub kind: StreamKind,
    pub size: usize,
    pub seed: u64,
    pub pool_size: usize,
    pub buckets: usize,
    pub dominant_percent: u8,
}

impl StreamProfile {
    pub fn new(kind: StreamKind, size: usize, seed: u64) -> StreamProfile {
        StreamProfile { kind, size, seed, pool_size: 1000, buckets: 3, dominant_percent: 70 }
    }
}

/// Id offset separating fresh star points from the non-star pool.
const STAR_ID_BASE: u32 = 1_000_000;
/// Id offset for the fixed bucket traces of the bucketed profile.
const BUCKET_ID_BASE: u32 = 2_000_000;

fn non_star_pool(pool_size: usize) -> Vec<Point> {
    // A cubic lattice of roughly pool_size points over small id ranges.
    let side = (pool_size as f64).cbrt().round().max(1.0) as u64;
    let depth = pool_size as u64 / (side * side) + 1;
    let mut pool = Vec::with_capacity(pool_size);
    'fill: for p in 0..side {
        for k in 0..side {
            for n in 0..depth {
                if pool.len() == pool_size {
                    break 'fill;
                }
                pool.push(Point::finite(
                    UltrafilterId(p as u32),
                    GeneratorId(k as u32),
                    n,
                ));
            }
        }
    }
    pool
}

fn filler(rng: &mut ChaCha8Rng, pool: &[Point], len: usize) -> Vec<Point> {
    let mut points = BTreeSet::new();
    while points.len() < len {
        points.insert(pool[rng.gen_range(0..pool.len())]);
    }
    points.into_iter().collect()
}

/// Generates a pairwise-distinct stream following the profile.
pub fn generate(profile: &StreamProfile) -> Vec<GroupElement> {
    assert!(profile.size >= 1, "stream size must be at least 1");
    let mut rng = ChaCha8Rng::seed_from_u64(profile.seed);
    let pool = non_star_pool(profile.pool_size.max(8));
    let mut seen: BTreeSet<GroupElement> = BTreeSet::new();
    let mut out = Vec::with_capacity(profile.size);
    let mut fresh_star = 0u32;

    let push_distinct = |elem: GroupElement,
                             seen: &mut BTreeSet<GroupElement>,
                             out: &mut Vec<GroupElement>| {
        if seen.insert(elem.clone()) {
            out.push(elem);
            true
        } else {
            false
        }
    };

    match profile.kind {
        StreamKind::StarFree => {
            while out.len() < profile.size {
                let len = rng.gen_range(1..=4);
                let elem = GroupElement::from_points(filler(&mut rng, &pool, len));
                push_distinct(elem, &mut seen, &mut out);
            }
        }
        StreamKind::StarRich => {
            while out.len() < profile.size {
                let star = Point::star(
                    UltrafilterId(STAR_ID_BASE + fresh_star),
                    GeneratorId(STAR_ID_BASE + fresh_star),
                );
                fresh_star += 1;
                let len = rng.gen_range(0..=3);
                let mut points = filler(&mut rng, &pool, len);
                points.push(star);
                push_distinct(GroupElement::from_points(points), &mut seen, &mut out);
            }
        }
        StreamKind::Mixed => {
            while out.len() < profile.size {
                if rng.gen_bool(0.5) {
                    let star = Point::star(
                        UltrafilterId(STAR_ID_BASE + fresh_star),
                        GeneratorId(STAR_ID_BASE + fresh_star),
                    );
                    fresh_star += 1;
                    let len = rng.gen_range(0..=3);
                    let mut points = filler(&mut rng, &pool, len);
                    points.push(star);
                    push_distinct(GroupElement::from_points(points), &mut seen, &mut out);
                } else {
                    let len = rng.gen_range(1..=4);
                    let elem = GroupElement::from_points(filler(&mut rng, &pool, len));
                    push_distinct(elem, &mut seen, &mut out);
                }
            }
        }
        StreamKind::Bucketed => {
            let buckets = profile.buckets.max(1);
            let dominant = if buckets == 1 {
                profile.size
            } else {
                (profile.size * profile.dominant_percent as usize / 100).max(1)
            };
            let mut assignment: Vec<usize> = (0..profile.size)
                .map(|i| if i < dominant { 0 } else { 1 + (i - dominant) % (buckets - 1) })
                .collect();
            assignment.shuffle(&mut rng);
            for bucket in assignment {
                let trace = Point::star(
                    UltrafilterId(BUCKET_ID_BASE + bucket as u32),
                    GeneratorId(BUCKET_ID_BASE + bucket as u32),
                );
                loop {
                    let len = rng.gen_range(1..=3);
                    let mut points = filler(&mut rng, &pool, len);
                    points.push(trace);
                    if push_distinct(GroupElement::from_points(points), &mut seen, &mut out) {
                        break;
                    }
                }
            }
        }
    }
    out
}

/// Writes one JSON value per line.
pub fn write_jsonl<T: Serialize>(
    path: impl AsRef<Path>,
    items: &[T],
) -> Result<(), std::io::Error> {
    let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
    for item in items {
        serde_json::to_writer(&mut file, item)?;
        file.write_all(b"\n")?;
    }
    file.flush()
}

/// Reads one JSON value per non-empty line.
pub fn read_jsonl<T: DeserializeOwned>(
    path: impl AsRef<Path>,
) -> Result<Vec<T>, std::io::Error> {
    let file = std::io::BufReader::new(std::fs::File::open(path)?);
    let mut items = Vec::new();
    for (i, line) in file.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let item = serde_json::from_str(&line).map_err(|e| {
            std::io::Error::new(
                std::io::ErrorKind::InvalidData,
                format!("line {}: {e}", i + 1),
            )
        })?;
        items.push(item);
    }
    Ok(items)
}
