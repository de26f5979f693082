//! The finite-star-trace path: bucket by star trace, split the dominant
//! bucket online, extend coherently.
//!
//! ```bash
//! cargo run -p boolsplit --example finite_trace
//! ```

use boolsplit::{
    generate, split_finite_trace, OracleBank, SplitDetail, StreamKind, StreamProfile,
};

fn main() {
    let mut profile = StreamProfile::new(StreamKind::Bucketed, 400, 11);
    profile.buckets = 3;
    profile.dominant_percent = 70;
    let stream = generate(&profile);

    let mut bank = OracleBank::new();
    let cert = split_finite_trace(&stream, 400, &mut bank).unwrap();

    let (trace, j) = match &cert.detail {
        SplitDetail::FiniteTrace { selected_trace, j, buckets, .. } => {
            for b in buckets {
                println!("bucket {:?}: {} elements", b.trace, b.size);
            }
            (selected_trace.clone(), *j)
        }
        SplitDetail::Forcing { .. } => unreachable!(),
    };
    println!("selected trace {trace:?}, correction j = {j}");

    // The classification identity on the dominant bucket: class of a equals
    // class of (a minus its trace) XOR j.
    for (elem, class) in cert
        .class0
        .iter()
        .map(|e| (e, boolsplit::Bit::ZERO))
        .chain(cert.class1.iter().map(|e| (e, boolsplit::Bit::ONE)))
    {
        if elem.star_trace() == trace {
            assert_eq!(cert.map.eval(&elem.minus(&trace)) ^ j, class);
        }
    }
    println!(
        "classes ({}, {}), steered {}, dominant-bucket bound ⌊s/2⌋ = {}",
        cert.stats.count0,
        cert.stats.count1,
        cert.stats.steered,
        cert.stats.steered / 2
    );
    cert.verify().unwrap();
    println!("certificate replays");
}
