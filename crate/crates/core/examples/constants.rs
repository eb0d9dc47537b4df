//! Adds a generic constant of sort `{0,1}` to the subsets doctrine and
//! evaluates it at both global elements through the mediating morphism.

use std::sync::Arc;

use doctrines::constructions::{add_constant, mediate_constant};
use doctrines::doctrine::DoctrineMorphism;
use doctrines::io::subsets_fixture;

fn main() {
    let p = Arc::new(subsets_fixture());
    let bit = p.object("{0,1}").expect("object");
    let ext = add_constant(&p, bit).expect("admissible sort");
    println!(
        "base of P_X: {} objects, {} arrows",
        ext.doctrine.base.object_count(),
        ext.doctrine.base.morphism_count()
    );
    for a in ext.doctrine.base.objects() {
        println!("  fiber over {:<4} has {} elements", ext.doctrine.base.object_name(a), ext.doctrine.fiber(a).len());
    }

    let kt = ext.kleisli.kleisli_object(p.base.terminal()).expect("terminal is admissible");
    let id = DoctrineMorphism::identity(p.clone());
    for &c in p.base.hom(p.base.terminal(), bit) {
        let m = mediate_constant(&ext, &id, c).expect("mediator");
        let row: Vec<String> = (0..ext.doctrine.fiber(kt).len())
            .map(|x| format!("{} ↦ {}", ext.doctrine.fiber(kt).name(x), p.terminal_fiber().name(m.apply(kt, x))))
            .collect();
        println!("c = {}: {}", p.base.morphism_name(c), row.join(", "));
    }
}
