//! Saturates a doctrine that lacks a constant of one sort and confirms
//! that the result is rich.

use std::sync::Arc;

use doctrines::constructions::{henkin_saturate, SaturationOptions};
use doctrines::doctrine::check_rich;
use doctrines::io::subterminal_fixture;

fn main() {
    let p = Arc::new(subterminal_fixture());
    println!("input rich: {}", check_rich(&p).is_rich());
    let sat = henkin_saturate(&p, &SaturationOptions::default()).expect("saturation");
    for s in &sat.trace.steps {
        let sort = p.base.object_name(s.sort);
        println!(
            "step: sort {sort}, formula {}, ψ = {}, witnessed {}",
            p.fiber(s.sort).name(s.element),
            s.psi,
            s.inequality
        );
    }
    println!("blocked {:?}, truncated {}", sat.trace.blocked, sat.trace.truncated);
    println!("output rich: {}", check_rich(&sat.doctrine).is_rich());
}
