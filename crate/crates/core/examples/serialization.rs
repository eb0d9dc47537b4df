//! Writes a doctrine as a canonical JSON document, reads it back and shows
//! that the round trip is exact. Pass a path to read a document instead.

use doctrines::io::{gen_chain_fixture, parse_doctrine, serialize_doctrine};
use serde_json::Value;

fn main() {
    let d = match std::env::args().nth(1) {
        Some(path) => {
            let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
            parse_doctrine(&text).unwrap_or_else(|e| panic!("{path}: {e}"))
        }
        None => gen_chain_fixture(),
    };
    let text = serialize_doctrine(&d);
    let back = parse_doctrine(&text).expect("own output parses");
    println!("{} bytes, {} objects, {} fiber elements", text.len(), d.base.object_count(), d.element_count());
    println!("round trip exact: {}", back == d && serialize_doctrine(&back) == text);
    let doc: Value = serde_json::from_str(&text).expect("JSON");
    for (section, body) in doc.as_object().expect("object") {
        let summary = match body {
            Value::Array(items) => format!("{} entries", items.len()),
            Value::Object(fields) => format!("fields {:?}", fields.keys().collect::<Vec<_>>()),
            other => other.to_string(),
        };
        println!("  {section}: {summary}");
    }
}
