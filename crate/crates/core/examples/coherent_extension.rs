//! The unique coherent extension: ω-values computed as oracle p-limits of
//! the column values.
//!
//! ```bash
//! cargo run -p boolsplit --example coherent_extension
//! ```

use boolsplit::{
    extend_coherently, CoherentMap, GeneratorId, OracleBank, PartialColumn, PeriodicSet,
    UltrafilterId,
};

fn main() {
    let p = UltrafilterId(0);
    let mut bank = OracleBank::new();

    let columns = extend_coherently(
        vec![
            PartialColumn::new(p, GeneratorId(0), PeriodicSet::empty()),
            PartialColumn::new(p, GeneratorId(1), PeriodicSet::finite([2, 4, 6])),
            PartialColumn::new(p, GeneratorId(2), PeriodicSet::residue_class(0, 2)),
            PartialColumn::new(p, GeneratorId(3), PeriodicSet::residue_class(1, 2)),
        ],
        &mut bank,
    );
    for col in &columns {
        println!("column {:?}: ones = {:?}, ω = {}", col.k, col.ones, col.omega);
    }
    // Constant-0 and finitely-supported columns go to 0 (freeness); the evens
    // column goes to 1 (the oracle committed the evens first); the odds
    // column must then go to 0 on the same oracle.
    assert_eq!(columns[0].omega.as_u8(), 0);
    assert_eq!(columns[1].omega.as_u8(), 0);
    assert_eq!(columns[2].omega.as_u8(), 1);
    assert_eq!(columns[3].omega.as_u8(), 0);

    // The extension is coherent against the same oracle states, and
    // re-extension changes nothing.
    let map = CoherentMap::from_columns(columns.clone());
    map.certify(&mut bank).unwrap();
    let again = extend_coherently(
        columns.iter().map(|c| PartialColumn::new(c.p, c.k, c.ones.clone())).collect(),
        &mut bank,
    );
    assert_eq!(again, columns);
    println!("extension certified coherent and idempotent");
}
