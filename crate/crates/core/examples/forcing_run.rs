//! The forcing path: a descending chain of finite conditions meeting
//! scheduled dense goals, ending in a certified splitting map.
//!
//! ```bash
//! cargo run -p boolsplit --example forcing_run
//! ```

use boolsplit::{
    coherent_split, generate, OracleBank, SplitDetail, SplitOptions, StarMode, StreamKind,
    StreamProfile,
};

fn main() {
    // A star-rich stream: every element carries a never-seen limit point,
    // so hit goals always find fresh steering columns.
    let stream = generate(&StreamProfile::new(StreamKind::StarRich, 300, 7));
    let mut bank = OracleBank::new();
    let opts = SplitOptions { cutoff: 300, mode: StarMode::Infinite, schedule_len: None };
    let cert = coherent_split(&stream, opts, &mut bank).unwrap();

    match &cert.detail {
        SplitDetail::Forcing { chain, witnesses } => {
            println!(
                "chain of {} conditions, {} hit witnesses, map of {} columns",
                chain.len(),
                witnesses.len(),
                cert.map.len()
            );
            for (i, w) in witnesses.iter().take(4).enumerate() {
                println!("  witness {i}: steered at {:?} to class {}", w.steering, w.target);
            }
        }
        SplitDetail::FiniteTrace { .. } => unreachable!("infinite mode requested"),
    }
    println!(
        "classes: ({}, {}) out of {} scheduled hits",
        cert.stats.count0, cert.stats.count1, cert.stats.steered
    );
    assert!(cert.stats.count0 >= cert.stats.steered / 2);
    assert!(cert.stats.count1 >= cert.stats.steered / 2);

    // Every recorded witness evaluates under the final map to its target,
    // and the whole certificate replays.
    cert.verify().unwrap();
    println!("certificate replays: chain order, goals, transcripts, classes");
}
