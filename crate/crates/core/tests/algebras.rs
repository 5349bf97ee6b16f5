use std::path::Path;

use lawvere_core::algebras::{convolution_algebra, internal_algebras, internal_coalgebras};
use lawvere_core::cat_model::{terminal_model, validate_cat_model};
use lawvere_core::dsl::{self, Library};
use lawvere_core::finset::find_violation;
use lawvere_core::internal_hom::{fox_comonad, internal_hom};
use lawvere_core::sigma::TheoryMap;
use lawvere_core::two_cells::Weakness;

fn load(name: &str) -> Library {
    dsl::load_library(&Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)).unwrap()
}

#[test]
fn algebras_are_the_objects_of_the_hom_from_the_point() {
    for file in ["t_comm_flat.law", "t_pointed_flat.law", "t_inv.law"] {
        let lib = load(file);
        let table = &lib.sigmas.values().next().unwrap().table;
        for x in lib.cat_models.values() {
            let algs = internal_algebras(x).unwrap();
            let star = terminal_model(x.theory.clone());
            let ih = internal_hom(&star, x, table, Weakness::Lax).unwrap();
            validate_cat_model(&ih.model).unwrap();
            assert_eq!(ih.model.carrier.num_objects(), algs.homs.len(), "{}", x.name);
            assert_eq!(ih.model.carrier.num_arrows(), algs.mods.len(), "{}", x.name);
        }
    }
}

#[test]
fn convolution_algebras_are_models() {
    let lib = load("t_comm_flat.law");
    for x in lib.cat_models.values() {
        let algs = internal_algebras(x).unwrap();
        let coalgs = internal_coalgebras(x).unwrap();
        let rho = TheoryMap::identity(&x.theory);
        let theory = x.theory.truncation();
        for a in &algs.homs {
            for c in &coalgs.homs {
                let conv = convolution_algebra(x, &x.theory, &rho, a, c).unwrap();
                assert!(find_violation(&theory, &conv.model).is_none(), "{}", x.name);
                assert_eq!(conv.model.size, conv.hom.len());
            }
        }
    }
}

#[test]
fn the_counit_splits_comultiplication_wherever_the_laws_are_checked() {
    for file in ["t_comm_flat.law", "t_pointed_flat.law", "t_inv.law"] {
        let lib = load(file);
        let table = &lib.sigmas.values().next().unwrap().table;
        for x in lib.cat_models.values() {
            let fox = fox_comonad(x, table, Weakness::Lax).unwrap();
            assert!(fox.comultiplication_defined, "{}", x.name);
            assert!(fox.counit_left && fox.counit_right, "{}", x.name);
        }
    }
}
