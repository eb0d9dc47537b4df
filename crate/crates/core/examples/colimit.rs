//! The colimit of a two-step chain of axioms on the cube: a finite directed
//! diagram has a maximum node, and the colimit is isomorphic to it.

use std::sync::Arc;

use doctrines::constructions::{add_axiom, directed_colimit, FiniteDirectedDiagram};
use doctrines::doctrine::is_isomorphism;
use doctrines::io::boolean_cube_fixture;

fn main() {
    let p = Arc::new(boolean_cube_fixture());
    let t = p.base.terminal();
    let ab = p.element(t, "{a,b}").expect("element");
    let bc = p.element(t, "{b,c}").expect("element");
    let first = add_axiom(&p, ab).expect("axiom");
    let second = add_axiom(&first.doctrine, first.morphism.apply(t, bc)).expect("axiom");
    let diagram = FiniteDirectedDiagram::chain(vec![first.morphism, second.morphism]).expect("chain");
    let colimit = directed_colimit(&diagram).expect("directed");
    for (i, node) in diagram.nodes().iter().enumerate() {
        println!("node {i}: terminal fiber {:?}", node.terminal_fiber().poset.names());
    }
    println!("colimit terminal fiber {:?}", colimit.doctrine.terminal_fiber().poset.names());
    println!("leg at the maximum is an iso: {}", is_isomorphism(&colimit.cocone[diagram.maximum()]));
}
