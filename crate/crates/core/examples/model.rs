//! The full model pipeline on the subterminal doctrine: saturate, pick an
//! ultrafilter, quotient and read off a model in sets.

use std::sync::Arc;

use doctrines::io::subterminal_fixture;
use doctrines::model::{henkin_model_pipeline, PipelineOptions};

fn main() {
    let p = Arc::new(subterminal_fixture());
    let run = henkin_model_pipeline(&p, &PipelineOptions::default()).expect("consistent input");
    println!("saturated with {} steps into {}", run.trace.saturation.steps.len(), run.trace.saturated);
    println!("ultrafilter {:?}", run.trace.filter);
    let m = &run.model;
    for a in m.doctrine.base.objects() {
        println!("carrier of {}: {:?}", m.doctrine.base.object_name(a), m.carrier(a));
        let fiber = m.doctrine.fiber(a);
        for x in 0..fiber.len() {
            println!("  ⟦{}⟧ = {:?}", fiber.name(x), m.interp(a, x));
        }
    }
    let report = m.verify();
    println!("model laws hold: {}", report.passes());
}
