//! Exact arithmetic on eventually periodic subsets of ℕ.
//!
//! ```bash
//! cargo run -p boolsplit --example periodic_sets
//! ```

use boolsplit::PeriodicSet;

fn show(name: &str, s: &PeriodicSet) {
    let members: Vec<u64> = s.members_below(20).collect();
    println!(
        "{name:<18} threshold={} modulus={} residues={:?} prefix={:?}  ∩[0,20)={members:?}",
        s.threshold(),
        s.modulus(),
        s.residues(),
        s.prefix()
    );
}

fn main() {
    let evens = PeriodicSet::residue_class(0, 2);
    let ones_mod_3 = PeriodicSet::residue_class(1, 3);
    show("evens", &evens);
    show("n ≡ 1 (mod 3)", &ones_mod_3);

    // Boolean operations stay inside the class and canonicalize.
    let inter = evens.intersect(&ones_mod_3);
    show("intersection", &inter);
    assert_eq!(inter, PeriodicSet::residue_class(4, 6));

    let finite = PeriodicSet::finite([0, 1, 2, 10]);
    show("finite set", &finite);
    show("its complement", &finite.complement());
    assert!(finite.complement().is_cofinite());

    // Canonical form makes structural equality set equality: the same set
    // written with a redundant period and threshold collapses.
    let redundant = PeriodicSet::new(4, 4, [0, 2], [0, 2]).unwrap();
    assert_eq!(redundant, evens);
    println!("redundant description canonicalizes to the evens: {redundant:?}");

    // Infinitude and cofiniteness are decidable.
    assert!(evens.is_infinite() && !evens.is_cofinite());
    assert!(finite.is_finite());
    println!("evens infinite: {}, finite set infinite: {}", evens.is_infinite(), finite.is_infinite());
}
