//! Quotients of the cube by each of its filters: the classes of the terminal
//! fiber and whether the quotient map is an isomorphism.

use std::sync::Arc;

use doctrines::doctrine::{consistency_status, is_isomorphism};
use doctrines::io::boolean_cube_fixture;
use doctrines::model::quotient_by_filter;
use doctrines::order::enumerate_filters;

fn main() {
    let p = Arc::new(boolean_cube_fixture());
    let t = p.base.terminal();
    let fiber = p.terminal_fiber();
    for filter in enumerate_filters(fiber).expect("filters") {
        let q = quotient_by_filter(&p, &filter).expect("quotient");
        let classes: Vec<Vec<&str>> = q.classes(t).iter().map(|c| c.iter().map(|x| fiber.name(*x)).collect()).collect();
        println!(
            "∇ = {:?}\n  classes {:?}\n  {} iso {}",
            filter.names(fiber),
            classes,
            consistency_status(&q.result).status,
            is_isomorphism(&q.q)
        );
    }
}
