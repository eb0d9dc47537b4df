use doctrines::doctrine::{check_structure, single_table_mutations, Layer};
use doctrines::io::{named_fixtures, subsets_fixture};

#[test]
fn every_shipped_mutation_of_subsets_is_killed() {
    let d = subsets_fixture();
    let layers: Vec<Layer> = d.layers.iter().copied().collect();
    let mutations = single_table_mutations(&d, 24);
    assert!(mutations.len() >= 40, "{}", mutations.len());
    let survivors: Vec<String> = mutations
        .iter()
        .filter(|m| check_structure(&m.apply(&d).unwrap(), &layers).unwrap().passes())
        .map(|m| m.to_string())
        .collect();
    assert!(survivors.is_empty(), "{survivors:?}");
}

#[test]
fn mutations_of_every_fixture_are_killed() {
    for (name, d) in named_fixtures() {
        let layers: Vec<Layer> = d.layers.iter().copied().collect();
        let survivors: Vec<String> = single_table_mutations(&d, 8)
            .iter()
            .filter(|m| check_structure(&m.apply(&d).unwrap(), &layers).unwrap().passes())
            .map(|m| m.to_string())
            .collect();
        assert!(survivors.is_empty(), "{name}: {survivors:?}");
    }
}
