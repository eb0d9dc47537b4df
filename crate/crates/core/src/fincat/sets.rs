//! Concrete categories of finite sets and functions.

use std::collections::HashMap;

use super::category::{CategoryBuilder, CategoryError, FinCategory, MorId, ObjId, Product};

/// A finite category whose objects are finite sets and whose morphisms are functions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetCategory {
    pub category: FinCategory,
    /// Element labels per object.
    pub carriers: Vec<Vec<String>>,
    /// Function table per morphism: `table[i]` is the image of element `i`.
    pub tables: Vec<Vec<usize>>,
}

/// Which functions become morphisms.
#[derive(Clone, Debug)]
pub enum Functions {
    /// Every function between every pair of objects, up to a total count.
    All { max_morphisms: usize },
    /// An explicit list `(dom, cod, table)`; it must contain identities and
    /// unique maps to the terminal and be closed under composition.
    Listed(Vec<(usize, usize, Vec<usize>)>),
}

/// A chosen product `left × right = object` given by projection tables.
#[derive(Clone, Debug)]
pub struct SetProduct {
    pub left: usize,
    pub right: usize,
    pub object: usize,
    pub pr1: Vec<usize>,
    pub pr2: Vec<usize>,
}

fn function_name(dom: &str, cod: &str, table: &[usize]) -> String {
    let images: Vec<String> = table.iter().map(|i| i.to_string()).collect();
    format!("{dom}>{cod}:{}", images.join("."))
}

fn all_tables(dom: usize, cod: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if cod == 0 {
        if dom == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    let mut table = vec![0usize; dom];
    loop {
        out.push(table.clone());
        let mut i = dom;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            table[i] += 1;
            if table[i] < cod {
                break;
            }
            table[i] = 0;
        }
    }
}

/// Builds the category of the given finite sets with the requested functions.
pub fn build_set_category(
    objects: &[(String, Vec<String>)],
    terminal: usize,
    functions: Functions,
    products: &[SetProduct],
) -> Result<SetCategory, CategoryError> {
    let sizes: Vec<usize> = objects.iter().map(|(_, c)| c.len()).collect();
    if terminal >= objects.len() {
        return Err(CategoryError::MissingTerminal);
    }
    let listed: Vec<(usize, usize, Vec<usize>)> = match functions {
        Functions::All { max_morphisms } => {
            let mut total = 0usize;
            for &d in &sizes {
                for &c in &sizes {
                    total = total.saturating_add(c.checked_pow(d as u32).unwrap_or(usize::MAX));
                }
            }
            if total > max_morphisms {
                return Err(CategoryError::TooLarge(format!("{total} functions exceed the limit {max_morphisms}")));
            }
            let mut out = Vec::with_capacity(total);
            for d in 0..objects.len() {
                for c in 0..objects.len() {
                    for t in all_tables(sizes[d], sizes[c]) {
                        out.push((d, c, t));
                    }
                }
            }
            out
        }
        Functions::Listed(list) => list,
    };

    let mut b = CategoryBuilder::default();
    for (name, _) in objects {
        b.object(name.clone());
    }
    let mut index: HashMap<(usize, usize, Vec<usize>), MorId> = HashMap::new();
    let mut tables = Vec::new();
    let mut by_dom: Vec<Vec<MorId>> = vec![Vec::new(); objects.len()];
    for (d, c, t) in listed {
        if d >= objects.len() || c >= objects.len() {
            return Err(CategoryError::UnknownObject(d.max(c) as u32));
        }
        if t.len() != sizes[d] || t.iter().any(|i| *i >= sizes[c]) {
            return Err(CategoryError::BadTable(format!("{} -> {}", objects[d].0, objects[c].0)));
        }
        if index.contains_key(&(d, c, t.clone())) {
            continue;
        }
        let id = b.morphism(function_name(&objects[d].0, &objects[c].0, &t), ObjId::new(d), ObjId::new(c));
        index.insert((d, c, t.clone()), id);
        by_dom[d].push(id);
        tables.push((d, c, t));
    }
    for (o, &size) in sizes.iter().enumerate() {
        let id: Vec<usize> = (0..size).collect();
        let idm = *index.get(&(o, o, id)).ok_or_else(|| CategoryError::MissingIdentity(objects[o].0.clone()))?;
        b.identity(ObjId::new(o), idm);
        let bang = *index
            .get(&(o, terminal, vec![0; size]))
            .ok_or_else(|| CategoryError::MissingBang(objects[o].0.clone()))?;
        b.bang(ObjId::new(o), bang);
    }
    b.terminal(ObjId::new(terminal));
    for (fi, (a, bo, ft)) in tables.iter().enumerate() {
        for &g in &by_dom[*bo] {
            let (_, c, gt) = &tables[g.index()];
            let h: Vec<usize> = ft.iter().map(|i| gt[*i]).collect();
            let hid = *index.get(&(*a, *c, h)).ok_or_else(|| {
                CategoryError::NotClosed(format!(
                    "{} after {}",
                    function_name(&objects[*bo].0, &objects[*c].0, gt),
                    function_name(&objects[*a].0, &objects[*bo].0, ft)
                ))
            })?;
            b.composite(g, MorId::new(fi), hid);
        }
    }
    for p in products {
        let lookup = |cod: usize, t: &Vec<usize>| {
            index.get(&(p.object, cod, t.clone())).copied().ok_or_else(|| CategoryError::BadProduct {
                left: objects[p.left].0.clone(),
                right: objects[p.right].0.clone(),
            })
        };
        let pr1 = lookup(p.left, &p.pr1)?;
        let pr2 = lookup(p.right, &p.pr2)?;
        b.product(ObjId::new(p.left), ObjId::new(p.right), Product { object: ObjId::new(p.object), pr1, pr2 });
    }
    let category = b.build()?;
    Ok(SetCategory {
        category,
        carriers: objects.iter().map(|(_, c)| c.clone()).collect(),
        tables: tables.into_iter().map(|(_, _, t)| t).collect(),
    })
}

impl SetCategory {
    pub fn table(&self, f: MorId) -> &[usize] {
        &self.tables[f.index()]
    }

    pub fn size(&self, a: ObjId) -> usize {
        self.carriers[a.index()].len()
    }
}
