//! The double-negation fragment of the chain `0 < ½ < 1` is the two-element
//! Boolean algebra.

use std::sync::Arc;

use doctrines::constructions::double_negation_fragment;
use doctrines::doctrine::{check_structure, Layer};
use doctrines::io::gen_chain_fixture;

fn main() {
    let p = Arc::new(gen_chain_fixture());
    let t = p.terminal_fiber();
    for x in 0..t.len() {
        let nn = t.neg(t.neg(x).expect("negation")).expect("negation");
        println!("¬¬{} = {}", t.name(x), t.name(nn));
    }
    let frag = double_negation_fragment(&p).expect("bounded implicational");
    println!("fragment {:?}", frag.doctrine.terminal_fiber().poset.names());
    let report = check_structure(&frag.doctrine, &[Layer::Boolean]).expect("witnesses");
    println!("Boolean: {}", report.passes());
}
