//! Acceptance suite: one test per criterion, each printing a PASS line.
//!
//! Run with `cargo test -p boolsplit --test acceptance -- --nocapture` to see
//! the per-criterion lines.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use boolsplit::{
    coherent_split, extend_coherently, generate, split_finite_trace, Bit, CoherentMap, CoordId,
    GeneratorId, GroupElement, OpenBox, OracleBank, OracleState, PartialColumn,
    PeriodicSet, Point, Sim, SimConfig, SimPoint, SplitDetail, SplitOptions, SplitterState,
    StarMode, StreamKind, StreamProfile, TwoValuedMap, UltrafilterId,
};

/// Random eventually periodic set with small moduli (divisors of 24), so
/// long query sequences keep the oracle meet cheap.
fn random_set(rng: &mut ChaCha8Rng) -> PeriodicSet {
    const MODULI: [u64; 8] = [1, 2, 3, 4, 6, 8, 12, 24];
    let modulus = MODULI[rng.gen_range(0..MODULI.len())];
    let threshold = rng.gen_range(0..24u64);
    let density = rng.gen_range(0.0..1.0f64);
    let residues: Vec<u64> = (0..modulus).filter(|_| rng.gen_bool(density)).collect();
    let prefix: Vec<u64> = (0..threshold).filter(|_| rng.gen_bool(0.5)).collect();
    PeriodicSet::new(threshold, modulus, residues, prefix).unwrap()
}

#[test]
fn acceptance_1_oracle_laws() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut oracle = OracleState::fresh(UltrafilterId(0));
    let mut decided_one: Vec<PeriodicSet> = Vec::new();

    for i in 0..10_000 {
        // Cycle plain random, finite and cofinite shapes.
        let set = match i % 4 {
            0 => PeriodicSet::finite((0..rng.gen_range(0..12)).map(|_| rng.gen_range(0..48))),
            1 => PeriodicSet::finite((0..rng.gen_range(0..12)).map(|_| rng.gen_range(0..48)))
                .complement(),
            _ => random_set(&mut rng),
        };
        let answer = oracle.query(&set);
        assert!(oracle.meet().is_infinite(), "meet died after query {i}");
        if set.is_finite() {
            assert_eq!(answer, Bit::ZERO, "finite set answered 1 at query {i}");
        }
        if set.is_cofinite() {
            assert_eq!(answer, Bit::ONE, "cofinite set answered 0 at query {i}");
        }
        if answer.is_one() {
            decided_one.push(set);
        }
    }

    // Monotonicity and finite additivity on decided sets.
    assert!(decided_one.len() >= 1000, "need material for the spot checks");
    for _ in 0..1000 {
        let s = &decided_one[rng.gen_range(0..decided_one.len())];
        let t = &decided_one[rng.gen_range(0..decided_one.len())];
        assert_eq!(oracle.query(&s.intersect(t)), Bit::ONE, "finite additivity failed");
        let superset = s.union(&random_set(&mut rng));
        assert_eq!(oracle.query(&superset), Bit::ONE, "monotonicity failed");
        assert!(oracle.meet().is_infinite());
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "criterion 1 too slow: {elapsed:?}");
    println!("criterion 1 (oracle laws, 10000 queries + 1000 pair checks): PASS in {elapsed:?}");
}

fn random_element(rng: &mut ChaCha8Rng, pool: &[Point]) -> GroupElement {
    let len = rng.gen_range(0..=6);
    GroupElement::from_points((0..len).map(|_| pool[rng.gen_range(0..pool.len())]))
}

#[test]
fn acceptance_2_group_laws() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let pool: Vec<Point> = (0..4)
        .flat_map(|p| (0..4).map(move |k| (p, k)))
        .flat_map(|(p, k)| {
            (0..5)
                .map(move |n| Point::finite(UltrafilterId(p), GeneratorId(k), n))
                .chain([Point::star(UltrafilterId(p), GeneratorId(k))])
        })
        .collect();

    for _ in 0..10_000 {
        let a = random_element(&mut rng, &pool);
        let b = random_element(&mut rng, &pool);
        let c = random_element(&mut rng, &pool);
        assert_eq!(a.sym_diff(&b), b.sym_diff(&a));
        assert_eq!(a.sym_diff(&b).sym_diff(&c), a.sym_diff(&b.sym_diff(&c)));
        assert_eq!(a.sym_diff(&a), GroupElement::zero());
        assert_eq!(a.sym_diff(&GroupElement::zero()), a);

        let mut f = TwoValuedMap::constant(Bit::ZERO);
        for pt in &pool {
            if rng.gen_bool(0.5) {
                f.assign(*pt, Bit::ONE);
            }
        }
        let lhs = f.hom_eval(&a.sym_diff(&b)).unwrap();
        let rhs = f.hom_eval(&a).unwrap() ^ f.hom_eval(&b).unwrap();
        assert_eq!(lhs, rhs, "hom_eval is not a homomorphism");
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "criterion 2 too slow: {elapsed:?}");
    println!("criterion 2 (group laws, 10000 cases): PASS in {elapsed:?}");
}

#[test]
fn acceptance_3_splitting_balance() {
    let kinds = [StreamKind::StarFree, StreamKind::StarRich, StreamKind::Mixed];
    let mut streams = 0;
    let total = Instant::now();
    for kind in kinds {
        for seed in 0..20 {
            let start = Instant::now();
            let stream = generate(&StreamProfile::new(kind, 10_000, seed));
            let mut splitter = SplitterState::new();
            for elem in &stream {
                splitter.feed(elem).unwrap();
                assert!(
                    splitter.min_class() >= splitter.steered() / 2,
                    "balance bound violated ({kind:?}, seed {seed})"
                );
            }
            let f = splitter.finalize();
            for report in splitter.log() {
                assert_eq!(
                    f.hom_eval(&report.element),
                    Ok(report.value),
                    "replay mismatch ({kind:?}, seed {seed})"
                );
            }
            let elapsed = start.elapsed();
            assert!(elapsed.as_secs_f64() < 10.0, "stream too slow: {elapsed:?}");
            streams += 1;
        }
    }
    println!(
        "criterion 3 (splitting balance, {streams} streams of 10000): PASS in {:?}",
        total.elapsed()
    );
}

#[test]
fn acceptance_4_brute_force_equivalence() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    for instance in 0..200 {
        let n_points = rng.gen_range(2..=8usize);
        let pool: Vec<Point> = (0..n_points)
            .map(|i| Point::finite(UltrafilterId(0), GeneratorId(0), i as u64))
            .collect();

        // Up to 12 distinct nonempty elements, as point masks.
        let n_elements = rng.gen_range(1..=12usize);
        let mut masks: BTreeSet<u32> = BTreeSet::new();
        while masks.len() < n_elements.min((1 << n_points) - 1) {
            masks.insert(rng.gen_range(1..1u32 << n_points));
        }
        let elements: Vec<GroupElement> = masks
            .iter()
            .map(|mask| {
                GroupElement::from_points(
                    (0..n_points).filter(|i| mask >> i & 1 == 1).map(|i| pool[i]),
                )
            })
            .collect();

        let mut splitter = SplitterState::new();
        for elem in &elements {
            splitter.feed(elem).unwrap();
        }
        let greedy_min = splitter.min_class();
        assert!(greedy_min >= splitter.steered() / 2, "greedy bound failed");

        // Exact agreement: replaying the finalized map reproduces the counts.
        let f = splitter.finalize();
        let replayed_ones = elements
            .iter()
            .filter(|e| f.hom_eval(e).unwrap().is_one())
            .count() as u64;
        let (count0, count1) = splitter.counts();
        assert_eq!(replayed_ones, count1, "instance {instance}");
        assert_eq!(elements.len() as u64 - replayed_ones, count0);

        // Exhaustive search over all 2^|X| total maps.
        let mut best_min = 0u64;
        for map_mask in 0..1u32 << n_points {
            let mut ones = 0u64;
            for mask in &masks {
                if (mask & map_mask).count_ones() % 2 == 1 {
                    ones += 1;
                }
            }
            let zeros = masks.len() as u64 - ones;
            best_min = best_min.max(ones.min(zeros));
        }
        assert!(
            best_min >= greedy_min,
            "exhaustive search found no map at least as balanced (instance {instance})"
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "criterion 4 too slow: {elapsed:?}");
    println!("criterion 4 (brute-force equivalence, 200 instances): PASS in {elapsed:?}");
}

#[test]
fn acceptance_5_coherent_extension() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let mut bank = OracleBank::new();
    let columns: Vec<PartialColumn> = (0..1000)
        .map(|i| {
            PartialColumn::new(
                UltrafilterId(i / 10), // 100 oracles, 10 columns each
                GeneratorId(i),
                random_set(&mut rng),
            )
        })
        .collect();

    let extended = extend_coherently(columns.clone(), &mut bank);
    for col in &extended {
        let answer = bank.state_mut(col.p).query(&col.agreement_set());
        assert_eq!(answer, Bit::ONE, "agreement set of {:?} not in p", col.k);
    }
    // Uniqueness: re-extension against the same oracle states is a fixed point.
    let again = extend_coherently(columns, &mut bank);
    assert_eq!(again, extended, "re-extension moved an ω-value");

    let elapsed = start.elapsed();
    println!("criterion 5 (coherent extension, 1000 columns): PASS in {elapsed:?}");
}

#[test]
fn acceptance_6_forcing_run() {
    let start = Instant::now();
    let stream = generate(&StreamProfile::new(StreamKind::StarRich, 2000, 606));

    // The non-star filler pool uses 10 ultrafilter and 10 generator ids, so
    // the id prelude has exactly 20 goals and the 200-goal schedule leaves
    // 180 alternating hits with cumulative excludes.
    let mut bank = OracleBank::new();
    let opts = SplitOptions { cutoff: 2000, mode: StarMode::Infinite, schedule_len: Some(200) };
    let cert = coherent_split(&stream, opts, &mut bank).expect("schedule must complete");

    match &cert.detail {
        SplitDetail::Forcing { chain, witnesses } => {
            assert_eq!(chain.len(), 200, "expected a 200-goal schedule");
            assert_eq!(witnesses.len(), 180, "expected 180 hit witnesses");
        }
        SplitDetail::FiniteTrace { .. } => panic!("expected the forcing path"),
    }
    assert!(cert.stats.count0 >= 90, "class 0 too small: {}", cert.stats.count0);
    assert!(cert.stats.count1 >= 90, "class 1 too small: {}", cert.stats.count1);
    // Chain order, goal satisfaction, coherence and class evaluations all
    // replay inside verify().
    cert.verify().expect("forcing certificate must replay");

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "criterion 6 too slow: {elapsed:?}");
    println!("criterion 6 (forcing run, 2000 elements, 200 goals): PASS in {elapsed:?}");
}

#[test]
fn acceptance_7_finite_trace_path() {
    let start = Instant::now();
    let mut profile = StreamProfile::new(StreamKind::Bucketed, 3000, 707);
    profile.buckets = 3;
    profile.dominant_percent = 70;
    let stream = generate(&profile);

    let mut bank = OracleBank::new();
    let cert = split_finite_trace(&stream, 3000, &mut bank).unwrap();
    let (trace, j) = match &cert.detail {
        SplitDetail::FiniteTrace { selected_trace, j, buckets, .. } => {
            assert_eq!(buckets.len(), 3);
            assert_eq!(buckets.iter().map(|b| b.size).max(), Some(2100));
            (selected_trace.clone(), *j)
        }
        SplitDetail::Forcing { .. } => panic!("expected the finite-trace path"),
    };

    // The classification identity holds for every dominant-bucket element.
    let mut dominant = (0u64, 0u64);
    for (elem, class) in cert
        .class0
        .iter()
        .map(|e| (e, Bit::ZERO))
        .chain(cert.class1.iter().map(|e| (e, Bit::ONE)))
    {
        assert_eq!(cert.map.eval(elem), class);
        if elem.star_trace() == trace {
            assert_eq!(
                cert.map.eval(&elem.minus(&trace)) ^ j,
                class,
                "classification identity failed on {elem:?}"
            );
            if class.is_zero() {
                dominant.0 += 1;
            } else {
                dominant.1 += 1;
            }
        }
    }
    assert!(
        dominant.0.min(dominant.1) >= cert.stats.steered / 2,
        "dominant bucket below the balance bound"
    );
    cert.verify().unwrap();

    let elapsed = start.elapsed();
    println!("criterion 7 (finite-trace path, 3000 elements): PASS in {elapsed:?}");
}

/// Simulator configuration for criterion 8a: 200 coordinates, a block
/// covering the first 150, and coordinate maps with real columns behind the
/// remaining 50.
fn sim_config_200() -> SimConfig {
    let p = UltrafilterId(0);
    let alpha = GeneratorId(0);
    let mut cfg = SimConfig {
        generators: (0..8).map(GeneratorId).collect(),
        coords: (0..200).map(CoordId).collect(),
        ..SimConfig::default()
    };
    cfg.index_sets.insert(alpha, (0..150).map(CoordId).collect());
    let mut bank = OracleBank::new();
    for beta in 150..200u32 {
        let ones = match beta % 3 {
            0 => PeriodicSet::residue_class(0, 2),
            1 => PeriodicSet::finite([1, 2, 3]),
            _ => PeriodicSet::empty(),
        };
        let cols = extend_coherently(vec![PartialColumn::new(p, alpha, ones)], &mut bank);
        cfg.coord_maps.insert(CoordId(beta), CoherentMap::from_columns(cols));
    }
    cfg
}

#[test]
fn acceptance_8a_selective_witness() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let mut sim = Sim::new(sim_config_200()).unwrap();

    let boxes: Vec<OpenBox> = (0..50)
        .map(|_| {
            let mut bx = OpenBox::default();
            for _ in 0..rng.gen_range(1..=4) {
                bx = bx.pin(CoordId(rng.gen_range(0..150)), Bit::from(rng.gen_bool(0.5)));
            }
            bx
        })
        .collect();

    let p = UltrafilterId(0);
    let cert = sim.witness_selective(p, &boxes).unwrap();
    assert_eq!(cert.block, GeneratorId(0), "the prepared block covers all supports");
    assert_eq!(cert.choices.len(), 50);
    for (n, choice) in cert.choices.iter().enumerate() {
        assert!(boxes[n].satisfied_by(choice), "choice {n} escaped its box");
    }
    // Outside the block the limit point carries exactly the ω-values of the
    // prepared coordinate maps (exact check per coordinate).
    for beta in 150..200u32 {
        let want = match beta % 3 {
            0 => Bit::ONE,  // evens column, ω decided 1
            _ => Bit::ZERO, // finite or empty ones, ω = 0 by freeness
        };
        assert_eq!(cert.limit.get(CoordId(beta)), want, "ω-value at c{beta}");
    }
    // Case 1 (oracle p-limit) and Case 2 (column coherence) certificates
    // replay; this also re-runs every per-coordinate limit query.
    cert.verify().unwrap();

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "criterion 8a too slow: {elapsed:?}");
    println!("criterion 8a (selective witness, 50 boxes / 200 coords): PASS in {elapsed:?}");
}

#[test]
fn acceptance_8b_refutation() {
    let start = Instant::now();
    let mut sim = Sim::new(sim_config_200()).unwrap();
    let p = UltrafilterId(0);

    // A faithfully indexed 100-element family of group values. Block 1 has
    // an empty index set, so values are sums of coordinate-map columns.
    let mut family: Vec<(SimPoint, GroupElement)> = Vec::new();
    for m in 0..100u64 {
        let element = GroupElement::from_points([
            Point::finite(p, GeneratorId(1), m),
            Point::finite(p, GeneratorId(2), m / 2),
        ]);
        let mut g = SimPoint::default();
        for pt in element.points() {
            g = g.xor(&sim.build_point(pt.p, pt.k, pt.n).unwrap());
        }
        family.push((g, element));
    }

    let cert = sim.witness_no_convergence(&family).unwrap();
    assert_eq!(cert.family.len(), 100);
    assert!(!cert.excluded_coords.contains(&cert.beta));
    for (m, elem) in cert.family.iter().enumerate() {
        assert_eq!(cert.split.map.eval(elem), cert.g_beta[m], "g_{m}(β) mismatch");
    }
    assert!(
        cert.stats.count0.min(cert.stats.count1) >= cert.stats.steered / 2,
        "refutation classes below ⌊s/2⌋: {:?}",
        cert.stats
    );
    cert.verify().unwrap();

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "criterion 8b too slow: {elapsed:?}");
    println!("criterion 8b (refutation, 100-element family): PASS in {elapsed:?}");
}

/// Criterion 9 drives the command line binary end to end: it re-emits
/// certificates of every kind produced in criteria 3-8 at the same scales,
/// verifies each in a fresh process, and checks single-bit tamper detection.
mod replay_integrity {
    use super::*;
    use std::path::{Path, PathBuf};
    use std::process::Command;

    fn bin() -> Command {
        Command::new(env!("CARGO_BIN_EXE_boolsplit"))
    }

    fn run_ok(args: &[&str]) {
        let out = bin().args(args).output().expect("binary runs");
        assert!(
            out.status.success(),
            "command {args:?} failed: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }

    fn verify_status(path: &Path) -> i32 {
        bin()
            .arg("verify")
            .arg(path)
            .output()
            .expect("binary runs")
            .status
            .code()
            .unwrap_or(-1)
    }

    /// Flips the low bit of a decimal digit inside the recorded digest. The
    /// JSON stays parseable, so the failure surfaces as the named sha256
    /// check with exit status 4.
    fn tamper_digest_digit(path: &Path, out: &Path) {
        let data = std::fs::read(path).unwrap();
        let marker = b"\"sha256\": \"";
        let start = data
            .windows(marker.len())
            .position(|w| w == marker)
            .expect("digest field")
            + marker.len();
        let idx = (start..start + 64)
            .find(|&i| data[i].is_ascii_digit())
            .expect("a decimal digit in the digest");
        let mut tampered = data.clone();
        tampered[idx] ^= 1;
        assert_ne!(tampered, data);
        std::fs::write(out, tampered).unwrap();
    }

    fn random_bit_tamper(path: &Path, out: &Path, seed: u64) {
        let data = std::fs::read(path).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let idx = rng.gen_range(0..data.len());
        let bit = 1u8 << rng.gen_range(0..7);
        let mut tampered = data.clone();
        tampered[idx] ^= bit;
        std::fs::write(out, tampered).unwrap();
    }

    #[test]
    fn acceptance_9_replay_integrity() {
        let start = Instant::now();
        let dir = tempfile::tempdir().unwrap();
        let path = |name: &str| -> PathBuf { dir.path().join(name) };
        let arg = |p: &PathBuf| p.to_str().unwrap().to_string();

        // Criterion 3 shape: a feed-log certificate from `split`.
        let elems = path("stream.jsonl");
        run_ok(&[
            "generate", "--kind", "star-free", "--size", "10000", "--seed", "3",
            "--out", &arg(&elems),
        ]);
        let split_cert = path("split.json");
        run_ok(&[
            "split", "--input", &arg(&elems), "--reports", &arg(&path("reports.jsonl")),
            "--cert", &arg(&split_cert),
        ]);

        // Criterion 6 shape: a forcing certificate over a star-rich stream.
        let rich = path("rich.jsonl");
        run_ok(&[
            "generate", "--kind", "star-rich", "--size", "2000", "--seed", "6",
            "--out", &arg(&rich),
        ]);
        let forcing_cert = path("forcing.json");
        run_ok(&[
            "coherent-split", "--input", &arg(&rich), "--cutoff", "2000",
            "--mode", "infinite", "--schedule-length", "200", "--out", &arg(&forcing_cert),
        ]);

        // Criterion 7 shape: a finite-trace certificate over a bucketed stream.
        let bucketed = path("bucketed.jsonl");
        run_ok(&[
            "generate", "--kind", "bucketed", "--size", "3000", "--seed", "7",
            "--out", &arg(&bucketed),
        ]);
        let finite_cert = path("finite.json");
        run_ok(&[
            "coherent-split", "--input", &arg(&bucketed), "--cutoff", "3000",
            "--mode", "finite", "--out", &arg(&finite_cert),
        ]);

        // Criterion 8 shapes: simulator certificates.
        let cfg_path = path("cfg.json");
        std::fs::write(&cfg_path, serde_json::to_string(&sim_config_200()).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(909);
        let boxes: Vec<OpenBox> = (0..50)
            .map(|_| {
                let mut bx = OpenBox::default();
                for _ in 0..rng.gen_range(1..=4) {
                    bx = bx.pin(CoordId(rng.gen_range(0..150)), Bit::from(rng.gen_bool(0.5)));
                }
                bx
            })
            .collect();
        let boxes_path = path("boxes.json");
        std::fs::write(&boxes_path, serde_json::to_string(&boxes).unwrap()).unwrap();
        let selective_cert = path("selective.json");
        run_ok(&[
            "simulate", "selective", "--config", &arg(&cfg_path), "--boxes", &arg(&boxes_path),
            "--p", "0", "--out", &arg(&selective_cert),
        ]);

        let mut sim = Sim::new(sim_config_200()).unwrap();
        let family_path = path("family.jsonl");
        let mut lines = Vec::new();
        for m in 0..100u64 {
            let element = GroupElement::from_points([
                Point::finite(UltrafilterId(0), GeneratorId(1), m),
                Point::finite(UltrafilterId(0), GeneratorId(2), m / 2),
            ]);
            let mut g = SimPoint::default();
            for pt in element.points() {
                g = g.xor(&sim.build_point(pt.p, pt.k, pt.n).unwrap());
            }
            lines.push(serde_json::json!({ "g": g, "element": element }));
        }
        std::fs::write(
            &family_path,
            lines.iter().map(|l| l.to_string() + "\n").collect::<String>(),
        )
        .unwrap();
        let refutation_cert = path("refutation.json");
        run_ok(&[
            "simulate", "refute", "--config", &arg(&cfg_path), "--family", &arg(&family_path),
            "--out", &arg(&refutation_cert),
        ]);

        // Every certificate passes `verify` in a fresh process.
        let certs =
            [&split_cert, &forcing_cert, &finite_cert, &selective_cert, &refutation_cert];
        for cert in certs {
            assert_eq!(verify_status(cert), 0, "{} failed fresh verify", cert.display());
        }

        // A parse-preserving digest flip is caught as a named check, exit 4;
        // arbitrary single-bit flips are always detected (exit 2 or 4).
        for (i, cert) in certs.iter().enumerate() {
            let tampered = path(&format!("tampered-{i}.json"));
            tamper_digest_digit(cert, &tampered);
            assert_eq!(verify_status(&tampered), 4, "digest tamper undetected in {i}");
            for round in 0..4 {
                random_bit_tamper(cert, &tampered, i as u64 * 10 + round);
                let status = verify_status(&tampered);
                assert!(
                    status == 2 || status == 4,
                    "random bit tamper undetected in {i} (status {status})"
                );
            }
        }

        println!(
            "criterion 9 (replay integrity, 5 certificates fresh-process + tamper): PASS in {:?}",
            start.elapsed()
        );
    }
}
