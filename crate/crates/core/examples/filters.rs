//! Filters on the chain `0 < ½ < 1` and on `𝒫({x,y})`: every filter with its
//! classification, and the greedy ultrafilter extending `{⊤}`.

use doctrines::io::{gen_chain_fixture, powerset_fiber};
use doctrines::order::{classify_filter, enumerate_filters, extend_to_ultrafilter, generated_filter, Fiber};

fn show(label: &str, fiber: &Fiber) {
    println!("{label}");
    for f in enumerate_filters(fiber).expect("meets and top") {
        let c = classify_filter(fiber, &f).expect("negation");
        println!(
            "  {:<24} proper {:<5} ultra {:<5} maximal {}",
            format!("{:?}", f.names(fiber)),
            c.proper,
            c.ultra,
            c.maximal
        );
    }
    let top = generated_filter(fiber, &[]).expect("top");
    match extend_to_ultrafilter(fiber, &top) {
        Ok(u) => println!("  greedy ultrafilter {:?}", u.names(fiber)),
        Err(e) => println!("  no ultrafilter: {e}"),
    }
}

fn main() {
    show("chain", gen_chain_fixture().terminal_fiber());
    show("powerset", &powerset_fiber(&["x".to_string(), "y".to_string()]).expect("small"));
}
