//! The online splitter: feed a stream of distinct group elements, keep both
//! classes balanced against the steerable ones.
//!
//! ```bash
//! cargo run -p boolsplit --example splitting_stream
//! ```

use boolsplit::{generate, FeedKind, SplitterState, StreamKind, StreamProfile};

fn main() {
    let stream = generate(&StreamProfile::new(StreamKind::StarFree, 200, 42));
    let mut splitter = SplitterState::new();

    for elem in &stream {
        let report = splitter.feed(elem).unwrap();
        // The balance bound holds after every feed.
        assert!(splitter.min_class() >= splitter.steered() / 2);
        if splitter.log().len() <= 5 {
            let kind = match &report.kind {
                FeedKind::Steered { point } => format!("steered via {point:?}"),
                FeedKind::Forced => "forced".to_string(),
            };
            println!("feed {:?} -> class {} ({kind})", report.element, report.value);
        }
    }

    let (count0, count1) = splitter.counts();
    println!(
        "... {} elements: classes ({count0}, {count1}), {} steered, bound ⌊s/2⌋ = {}",
        stream.len(),
        splitter.steered(),
        splitter.steered() / 2
    );

    // The finalized map (default 0 off the support) reproduces every report.
    let f = splitter.finalize();
    for report in splitter.log() {
        assert_eq!(f.hom_eval(&report.element), Ok(report.value));
    }
    println!("finalized map replays all {} reports", splitter.log().len());
}
