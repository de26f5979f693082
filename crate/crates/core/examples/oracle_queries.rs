//! A lazy free-ultrafilter oracle: consistent on-demand membership answers
//! and p-limits of finitely-valued sequences.
//!
//! ```bash
//! cargo run -p boolsplit --example oracle_queries
//! ```

use boolsplit::{Bit, FiniteValuedSequence, OracleState, PeriodicSet, UltrafilterId};

fn main() {
    let mut p = OracleState::fresh(UltrafilterId(0));

    // Freeness is built in: finite sets are never members, cofinite always are.
    let finite = PeriodicSet::finite([3, 5, 8]);
    assert_eq!(p.query(&finite), Bit::ZERO);
    assert_eq!(p.query(&finite.complement()), Bit::ONE);

    // In the genuinely undecided case the oracle keeps the queried set
    // (yes-bias) and shrinks its meet.
    let evens = PeriodicSet::residue_class(0, 2);
    assert_eq!(p.query(&evens), Bit::ONE);
    println!("meet after committing the evens: {:?}", p.meet());

    // Everything already forced stays answer-stable with no new commitments.
    let odds = evens.complement();
    assert_eq!(p.query(&odds), Bit::ZERO);
    assert_eq!(p.query(&PeriodicSet::residue_class(0, 4)), Bit::ONE);
    println!("commitments so far: {}", p.commitments().len());

    // p-limit of a 3-valued sequence: the label of the unique cell in p.
    let seq = FiniteValuedSequence::new(vec![
        ("a", PeriodicSet::residue_class(1, 4)),
        ("b", PeriodicSet::residue_class(0, 2)),
        ("c", PeriodicSet::residue_class(3, 4)),
    ]);
    let limit = p.p_limit(&seq).unwrap();
    println!("p-limit of the 3-celled sequence: {limit}");
    assert_eq!(limit, "b"); // the committed evens decide cell b

    // Every answer is recorded; replaying the transcript on a fresh state
    // reproduces answers and commitments bit for bit.
    let mut replay = OracleState::fresh(UltrafilterId(0));
    for entry in p.transcript().to_vec() {
        assert_eq!(replay.query(&entry.query), entry.answer);
    }
    println!("transcript of {} queries replays exactly", p.transcript().len());
}
