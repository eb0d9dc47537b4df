//! Checks every structure layer of the subsets doctrine, then corrupts one
//! meet table and shows the counterexample the checker reports.

use doctrines::doctrine::{check_structure, single_table_mutations, Layer, MutationSite};
use doctrines::io::subsets_fixture;

fn main() {
    let d = subsets_fixture();
    let layers: Vec<Layer> = d.layers.iter().copied().collect();
    let report = check_structure(&d, &layers).expect("witness tables present");
    for (layer, r) in &report.layers {
        println!("{:<14} {:>8} instances, {} failures", layer.to_string(), r.checked, r.failures);
    }

    let meet = single_table_mutations(&d, 0)
        .into_iter()
        .find(|m| matches!(m.site, MutationSite::Meet(_)))
        .expect("a meet table to corrupt");
    let broken = meet.apply(&d).expect("site exists");
    let report = check_structure(&broken, &layers).expect("witness tables present");
    println!("\nafter {meet}: {} failures", report.failures());
    let first = report.counterexamples().next().map(|c| c.describe(&broken));
    if let Some(text) = first {
        println!("first counterexample: {text}");
    }
}
