//! Clopen classification: a coherent map partitions the whole group into two
//! clopen classes, and a split family meets both — so it cannot converge.
//!
//! ```bash
//! cargo run -p boolsplit --example clopen_partition
//! ```

use boolsplit::{
    clopen_certificate, coherent_split, generate, CoherentMap, OracleBank, SplitOptions,
    StarMode, StreamKind, StreamProfile,
};

fn main() {
    // Under the all-zero map everything lands in class 0: a degenerate but
    // perfectly clopen partition.
    let stream = generate(&StreamProfile::new(StreamKind::StarRich, 120, 3));
    let trivial = clopen_certificate(&CoherentMap::new(), &stream);
    println!("all-zero map: classes {:?}", trivial.sizes());
    assert_eq!(trivial.sizes(), (120, 0));

    // A splitting map from the dispatcher sends the same family to both
    // classes; neither class can absorb a tail of the family.
    let mut bank = OracleBank::new();
    let cert = coherent_split(&stream, SplitOptions::new(120, StarMode::Auto), &mut bank).unwrap();
    let report = clopen_certificate(&cert.map, &stream);
    let (u0, u1) = report.sizes();
    println!("splitting map: classes ({u0}, {u1}) — both nonempty refutes convergence");
    assert!(u0 > 0 && u1 > 0);

    // Singletons are classified by the map's value at their point.
    let first = stream[0].clone();
    let single = clopen_certificate(&cert.map, std::slice::from_ref(&first));
    let class = if single.class0.is_empty() { 1 } else { 0 };
    assert_eq!(cert.map.eval(&first).as_u8(), class);
    println!("singleton {first:?} lies in class {class}");
}
