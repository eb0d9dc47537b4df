use doctrines::doctrine::{check_rich, check_structure, consistency_status, Consistency, Layer};
use doctrines::io::{
    gen_subset_doctrine, gen_subset_doctrine_with, named_fixtures, parse_doctrine, serialize_doctrine, SubsetOptions,
};

fn s(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|x| x.to_string()).collect()
}

#[test]
fn every_fixture_passes_its_declared_layers() {
    for (name, d) in named_fixtures() {
        let layers: Vec<Layer> = d.layers.iter().copied().collect();
        let report = check_structure(&d, &layers).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(report.passes(), "{name}: {:?}", report.counterexamples().next().map(|c| c.describe(&d)));
    }
}

#[test]
fn fixtures_round_trip() {
    for (name, d) in named_fixtures() {
        let text = serialize_doctrine(&d);
        let back = parse_doctrine(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(back, d, "{name}");
        assert_eq!(serialize_doctrine(&back), text, "{name}");
    }
}

#[test]
fn subsets_fixture_shape() {
    let d = gen_subset_doctrine(&[s(&["*"]), s(&["0", "1"])]).unwrap();
    assert_eq!(d.base.object_count(), 3);
    let sizes: Vec<usize> = d.fibers.iter().map(|f| f.len()).collect();
    assert_eq!(sizes, vec![2, 4, 16]);
    assert!(check_rich(&d).is_rich());
    assert_eq!(consistency_status(&d).status, Consistency::TwoValued);
}

#[test]
fn empty_carrier_breaks_richness() {
    assert!(gen_subset_doctrine(&[s(&[])]).is_err());
    let opts = SubsetOptions { allow_empty: true, ..SubsetOptions::default() };
    let d = gen_subset_doctrine_with(&[s(&["0", "1"]), s(&[])], opts).unwrap();
    let report = check_rich(&d);
    assert!(!report.is_rich());
    let empty = d.base.find_object("{}").unwrap();
    assert!(report.failures().all(|e| e.object == empty));
    assert_eq!(report.empty_hom, vec![empty]);
}
