//! Adds each element of the terminal fiber of the cube as an axiom and
//! reports the size of the resulting fibers and their consistency.

use std::sync::Arc;

use doctrines::constructions::add_axiom;
use doctrines::doctrine::{consistency_status, is_isomorphism};
use doctrines::io::boolean_cube_fixture;

fn main() {
    let p = Arc::new(boolean_cube_fixture());
    let t = p.terminal_fiber();
    for phi in 0..t.len() {
        let ext = add_axiom(&p, phi).expect("element of the terminal fiber");
        let sizes: Vec<usize> = ext.doctrine.fibers.iter().map(|f| f.len()).collect();
        println!(
            "axiom {:<8} fibers {:?}  {}  iso: {}",
            t.name(phi),
            sizes,
            consistency_status(&ext.doctrine).status,
            is_isomorphism(&ext.morphism)
        );
    }
}
