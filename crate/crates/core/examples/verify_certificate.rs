//! Sealing, verifying and tamper-proofing certificates.
//!
//! ```bash
//! cargo run -p boolsplit --example verify_certificate
//! ```

use boolsplit::{
    coherent_split, generate, Certificate, CertificatePayload, OracleBank, SplitOptions,
    StarMode, StreamKind, StreamProfile,
};

fn main() {
    let stream = generate(&StreamProfile::new(StreamKind::StarRich, 100, 9));
    let mut bank = OracleBank::new();
    let payload = coherent_split(&stream, SplitOptions::new(100, StarMode::Auto), &mut bank)
        .map(CertificatePayload::CoherentSplit)
        .unwrap();

    // Seal: the envelope carries a digest of the canonical payload bytes.
    let cert = Certificate::seal(payload);
    println!("sealed certificate, sha256 = {}...", &cert.sha256[..16]);
    cert.verify().unwrap();
    println!("verification: digest plus full semantic replay");

    // Any change to the payload breaks the digest.
    let mut tampered = cert.clone();
    if let CertificatePayload::CoherentSplit(c) = &mut tampered.payload {
        c.stats.count0 += 1;
    }
    let err = tampered.verify().unwrap_err();
    println!("bit-level tamper: check '{}' fails", err.check);
    assert_eq!(err.check, "sha256");

    // Re-sealing a semantically broken payload moves the failure into the
    // replay: classes, transcripts, chain order and stats are all replayed.
    let resealed = Certificate::seal(tampered.payload);
    let err = resealed.verify().unwrap_err();
    println!("re-sealed tamper: check '{}' fails", err.check);
    assert_ne!(err.check, "sha256");

    // Certificates round-trip through disk byte-exactly.
    let dir = std::env::temp_dir().join("boolsplit-example");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cert.json");
    cert.write_to(&path).unwrap();
    let back = Certificate::read_from(&path).unwrap();
    assert_eq!(back, cert);
    back.verify().unwrap();
    println!("disk round-trip verified at {}", path.display());
}
