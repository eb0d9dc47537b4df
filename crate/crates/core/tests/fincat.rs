use doctrines::fincat::sets::{build_set_category, Functions, SetCategory, SetProduct};
use doctrines::fincat::{
    hom_set, kleisli_reader, tuple, validate_category, CategoryBuilder, CategoryViolation, MorId, ObjId, Product,
};

const ONE: usize = 0;
const BIT: usize = 1;
const PAIR: usize = 2;

fn labels(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

/// `{∗}`, `{0,1}` and `{0,1}²` with every function; `(i,j)` is element `2i+j`.
fn bits(pair_pr2: Vec<usize>) -> SetCategory {
    let objects = vec![
        ("1".to_string(), labels(&["∗"])),
        ("B".to_string(), labels(&["0", "1"])),
        ("B×B".to_string(), labels(&["00", "01", "10", "11"])),
    ];
    let products = [
        SetProduct { left: ONE, right: ONE, object: ONE, pr1: vec![0], pr2: vec![0] },
        SetProduct { left: ONE, right: BIT, object: BIT, pr1: vec![0, 0], pr2: vec![0, 1] },
        SetProduct { left: BIT, right: ONE, object: BIT, pr1: vec![0, 1], pr2: vec![0, 0] },
        SetProduct { left: BIT, right: BIT, object: PAIR, pr1: vec![0, 0, 1, 1], pr2: pair_pr2 },
    ];
    build_set_category(&objects, ONE, Functions::All { max_morphisms: 1000 }, &products).unwrap()
}

fn standard() -> SetCategory {
    bits(vec![0, 1, 0, 1])
}

fn obj(i: usize) -> ObjId {
    ObjId::new(i)
}

fn find_fn(s: &SetCategory, dom: usize, cod: usize, table: &[usize]) -> MorId {
    *s.category.hom(obj(dom), obj(cod)).iter().find(|f| s.table(**f) == table).expect("function present")
}

#[test]
fn one_object_category_is_valid() {
    let mut b = CategoryBuilder::new();
    let t = b.object("1");
    let id = b.morphism("id", t, t);
    b.identity(t, id).bang(t, id).terminal(t).composite(id, id, id);
    b.product(t, t, Product { object: t, pr1: id, pr2: id });
    let cat = b.build().unwrap();
    assert!(validate_category(&cat).is_valid());
    assert_eq!(cat.diagonal(t).unwrap(), id);
}

#[test]
fn all_functions_on_bits_form_a_valid_category() {
    let s = standard();
    // 1+2+4, 1+4+16 and 1+16+256 functions out of each object.
    assert_eq!(s.category.morphism_count(), 7 + 21 + 273);
    assert!(validate_category(&s.category).is_valid());

    // Oracle: every pair of functions into B tuples to exactly one function into B×B.
    for c in 0..3 {
        for &f in s.category.hom(obj(c), obj(BIT)) {
            for &g in s.category.hom(obj(c), obj(BIT)) {
                let matches: Vec<MorId> = s
                    .category
                    .hom(obj(c), obj(PAIR))
                    .iter()
                    .copied()
                    .filter(|&h| {
                        s.table(h).iter().zip(s.table(f).iter().zip(s.table(g))).all(|(&p, (&x, &y))| p == 2 * x + y)
                    })
                    .collect();
                assert_eq!(matches.len(), 1);
                assert_eq!(tuple(&s.category, f, g).unwrap(), matches[0]);
            }
        }
    }
}

#[test]
fn degenerate_projections_break_tupling() {
    let s = bits(vec![0, 0, 1, 1]);
    let report = validate_category(&s.category);
    assert!(!report.is_valid());
    assert!(report.violations.iter().any(
        |v| matches!(v, CategoryViolation::Tupling { left, right, .. } if *left == obj(BIT) && *right == obj(BIT))
    ));
}

#[test]
fn tuples_of_identities_and_constants() {
    let s = standard();
    let cat = &s.category;
    let id = cat.identity(obj(BIT));
    assert_eq!(s.table(tuple(cat, id, id).unwrap()), &[0, 3]);
    assert_eq!(cat.diagonal(obj(BIT)).unwrap(), tuple(cat, id, id).unwrap());
    for a in 0..2 {
        for b in 0..2 {
            let (ca, cb) = (find_fn(&s, ONE, BIT, &[a]), find_fn(&s, ONE, BIT, &[b]));
            assert_eq!(s.table(tuple(cat, ca, cb).unwrap()), &[2 * a + b]);
        }
    }
    let p = *cat.product(obj(BIT), obj(BIT)).unwrap();
    assert_eq!(tuple(cat, p.pr1, p.pr2).unwrap(), cat.identity(obj(PAIR)));
}

#[test]
fn tupling_the_projections_of_any_map_recovers_it() {
    let s = standard();
    let cat = &s.category;
    let p = *cat.product(obj(BIT), obj(BIT)).unwrap();
    for c in 0..3 {
        for &h in cat.hom(obj(c), obj(PAIR)) {
            let (l, r) = (cat.compose(p.pr1, h).unwrap(), cat.compose(p.pr2, h).unwrap());
            assert_eq!(tuple(cat, l, r).unwrap(), h);
        }
    }
}

#[test]
fn hom_set_sizes() {
    let s = standard();
    let cat = &s.category;
    assert_eq!(hom_set(cat, obj(ONE), obj(ONE)), vec![cat.identity(obj(ONE))]);
    assert_eq!(hom_set(cat, obj(ONE), obj(BIT)).len(), 2);
    assert_eq!(hom_set(cat, obj(BIT), obj(ONE)), vec![cat.bang(obj(BIT))]);
    assert_eq!(hom_set(cat, obj(PAIR), obj(BIT)).len(), 16);
    for a in 0..3 {
        for b in 0..3 {
            let expected = s.size(obj(b)).pow(s.size(obj(a)) as u32);
            assert_eq!(hom_set(cat, obj(a), obj(b)).len(), expected);
        }
    }
}

#[test]
fn kleisli_at_the_terminal_is_the_admissible_base() {
    let s = standard();
    let k = kleisli_reader(&s.category, obj(ONE)).unwrap();
    // `1×B×B` is not chosen, so only `1` and `B` survive.
    assert_eq!(k.objects, vec![obj(ONE), obj(BIT)]);
    let base_arrows: usize = [ONE, BIT]
        .iter()
        .flat_map(|&a| [ONE, BIT].map(move |b| (a, b)))
        .map(|(a, b)| s.category.hom(obj(a), obj(b)).len())
        .sum();
    assert_eq!(k.category.morphism_count(), base_arrows);
    assert!(validate_category(&k.category).is_valid());
}

#[test]
fn kleisli_at_bits() {
    let s = standard();
    let k = kleisli_reader(&s.category, obj(BIT)).unwrap();
    let (kt, kb) = (k.kleisli_object(obj(ONE)).unwrap(), k.kleisli_object(obj(BIT)).unwrap());
    assert!(k.kleisli_object(obj(PAIR)).is_none());
    // Arrows 1 ⇝ B are functions B×1 ≅ B → B.
    assert_eq!(k.category.hom(kt, kb).len(), 4);
    assert!(validate_category(&k.category).is_valid());

    let constant = k.constant.unwrap();
    assert_eq!(k.category.dom(constant), kt);
    assert_eq!(k.category.cod(constant), kb);
    assert_eq!(k.backing[constant.index()], k.contexts[kt.index()].pr1);

    // Composition oracle on tables: (g∘f)(x,a) = ĝ(x, f̂(x,a)).
    let decode = |ctx: ObjId, e: usize| {
        let p = k.contexts[ctx.index()];
        (s.table(p.pr1)[e], s.table(p.pr2)[e])
    };
    let encode = |ctx: ObjId, x: usize, a: usize| {
        (0..s.size(k.contexts[ctx.index()].object)).find(|&e| decode(ctx, e) == (x, a)).unwrap()
    };
    for f in k.category.morphisms() {
        for g in k.category.morphisms().filter(|&g| k.category.dom(g) == k.category.cod(f)) {
            let (a, b) = (k.category.dom(f), k.category.cod(f));
            let h = k.category.compose(g, f).unwrap();
            let (fh, gh, hh) =
                (s.table(k.backing[f.index()]), s.table(k.backing[g.index()]), s.table(k.backing[h.index()]));
            for e in 0..s.size(k.contexts[a.index()].object) {
                let (x, _) = decode(a, e);
                assert_eq!(hh[e], gh[encode(b, x, fh[e])]);
            }
        }
    }
}
