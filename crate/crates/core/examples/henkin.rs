//! One Henkin step on the subsets doctrine: a fresh constant `c` of sort
//! `{0,1}` together with the axiom `∃x.φ(x) → φ(c)`.

use std::sync::Arc;

use doctrines::constructions::henkin_step;
use doctrines::doctrine::consistency_status;
use doctrines::io::subsets_fixture;

fn main() {
    let p = Arc::new(subsets_fixture());
    let bit = p.object("{0,1}").expect("object");
    for phi in 0..p.fiber(bit).len() {
        let step = henkin_step(&p, bit, phi).expect("implicational existential doctrine");
        let t = step.doctrine.terminal_fiber();
        println!(
            "φ = {:<6} ∃φ ↦ {:<6} φ(c) ↦ {:<6} inequality {} equality {} ({})",
            p.fiber(bit).name(phi),
            t.name(step.exists_image),
            t.name(step.instance),
            step.inequality,
            step.equality,
            consistency_status(&step.doctrine).status
        );
    }
}
