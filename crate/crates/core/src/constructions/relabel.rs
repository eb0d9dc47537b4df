use std::sync::Arc;

use crate::doctrine::{Doctrine, DoctrineMorphism};
use crate::order::Fiber;

use super::ConstructionError;

/// A copy of a doctrine with renamed fiber elements, and the two inverse isomorphisms.
#[derive(Clone, Debug)]
pub struct Relabeling {
    pub doctrine: Arc<Doctrine>,
    /// Original → copy.
    pub forward: DoctrineMorphism,
    /// Copy → original.
    pub backward: DoctrineMorphism,
}

/// Appends `suffix` to every element name; all tables are unchanged.
pub fn relabel_elements(p: &Arc<Doctrine>, suffix: &str) -> Result<Relabeling, ConstructionError> {
    let fibers = p
        .fibers
        .iter()
        .map(|f| {
            let names = f.poset.names().iter().map(|n| format!("{n}{suffix}")).collect();
            Ok(Fiber::new(f.poset.renamed(names)?, f.ops.clone()))
        })
        .collect::<Result<Vec<_>, ConstructionError>>()?;
    let doctrine = Arc::new(Doctrine::new(
        format!("{}{suffix}", p.name),
        p.base.clone(),
        fibers,
        p.reindex.clone(),
        p.delta.clone(),
        p.exists.clone(),
        p.forall.clone(),
        p.layers.clone(),
    )?);
    let id = DoctrineMorphism::identity(p.clone());
    let forward = DoctrineMorphism { dst: doctrine.clone(), ..id.clone() };
    let backward = DoctrineMorphism { src: doctrine.clone(), ..id };
    Ok(Relabeling { doctrine, forward, backward })
}
