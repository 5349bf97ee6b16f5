use std::path::{Path, PathBuf};

use lawvere_core::cat_model::{validate_cat_model, CatModel, NatTable};
use lawvere_core::dsl::{self, Library};
use lawvere_core::sigma::{check_sigma_coherence, derived_associativity_check};
use lawvere_core::two_cells::Pasting;

fn load(name: &str) -> Library {
    let path: PathBuf = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    dsl::load_library(&path).unwrap()
}

fn all() -> Vec<Library> {
    ["t_comm_flat.law", "t_pointed_flat.law", "t_inv.law", "t_braid.law", "graded_lines.law"]
        .into_iter()
        .map(load)
        .collect()
}

fn then(m: &CatModel, p: &NatTable, q: &NatTable) -> NatTable {
    NatTable {
        source: p.source,
        width: p.width,
        comps: p.comps.iter().zip(&q.comps).map(|(&a, &b)| m.carrier.compose(b, a).unwrap()).collect(),
    }
}

#[test]
fn every_shipped_model_validates() {
    for lib in all() {
        for m in lib.cat_models.values() {
            validate_cat_model(m).unwrap_or_else(|e| panic!("{}: {e}", m.name));
        }
    }
}

#[test]
fn vertical_composites_evaluate_componentwise() {
    for lib in all() {
        for m in lib.cat_models.values() {
            let t = &m.theory;
            for (c, cell) in t.cells.iter().enumerate() {
                let p = Pasting::Gen(c);
                let (src, tgt) = t.boundary(&p).unwrap();
                let ids = [Pasting::Id(src.clone()), Pasting::Id(tgt)];
                let ep = m.evaluate_pasting(&p).unwrap();
                assert_eq!(m.evaluate_pasting(&Pasting::vert(ids[0].clone(), p.clone())).unwrap(), ep);
                assert_eq!(m.evaluate_pasting(&Pasting::vert(p.clone(), ids[1].clone())).unwrap(), ep);
                if cell.invertible {
                    let back = Pasting::inverse(p.clone());
                    let round = m.evaluate_pasting(&Pasting::vert(p.clone(), back.clone())).unwrap();
                    assert_eq!(round, then(m, &ep, &m.evaluate_pasting(&back).unwrap()));
                    assert_eq!(round, m.identity_table(&src), "{}: {}", m.name, cell.name);
                }
            }
        }
    }
}

#[test]
fn powers_interchange_with_vertical_composition() {
    for lib in all() {
        for m in lib.cat_models.values() {
            let t = &m.theory;
            for (c, cell) in t.cells.iter().enumerate().filter(|(_, c)| c.invertible) {
                let p = Pasting::Gen(c);
                let q = Pasting::inverse(p.clone());
                for k in 1..=2 {
                    let a = Pasting::vert(Pasting::PowerL(k, Box::new(p.clone())), Pasting::PowerL(k, Box::new(q.clone())));
                    let b = Pasting::PowerL(k, Box::new(Pasting::vert(p.clone(), q.clone())));
                    assert_eq!(m.evaluate_pasting(&a).unwrap(), m.evaluate_pasting(&b).unwrap(), "{}: {}", m.name, cell.name);
                    let a = Pasting::vert(Pasting::PowerR(Box::new(p.clone()), k), Pasting::PowerR(Box::new(q.clone()), k));
                    let b = Pasting::PowerR(Box::new(Pasting::vert(p.clone(), q.clone())), k);
                    assert_eq!(m.evaluate_pasting(&a).unwrap(), m.evaluate_pasting(&b).unwrap(), "{}: {}", m.name, cell.name);
                }
            }
        }
    }
}

#[test]
fn coherent_tables_give_associative_structures() {
    let mut coherent = 0;
    for lib in all() {
        for entry in lib.sigmas.values() {
            if entry.via.is_some() {
                continue;
            }
            let theory = &lib.theories[&entry.theory];
            let probes: Vec<CatModel> = lib.cat_models_of(&entry.theory).into_iter().cloned().collect();
            let report = check_sigma_coherence(theory, &entry.table, &probes).unwrap();
            if report.coherent {
                coherent += 1;
                let assoc = derived_associativity_check(theory, &entry.table, &probes).unwrap();
                assert!(assoc.coherent, "{}", entry.table.name);
            }
            if entry.table.symmetric {
                let sym: Vec<_> = report.results.iter().filter(|r| r.rule == "symmetric").collect();
                assert!(!sym.is_empty());
                assert_eq!(sym.iter().all(|r| r.verdict.holds()), report.coherent);
            }
        }
    }
    assert!(coherent >= 3);
}
