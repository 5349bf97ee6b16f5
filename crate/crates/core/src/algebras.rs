//! Internal algebras, coalgebras and bialgebras of a model, the bilax
//! compatibility condition, and the convolution algebra on a hom-set.

use serde::Serialize;

use crate::cat_model::{terminal_model, CatModel, NatTable};
use crate::error::{Error, Result};
use crate::fincat::{validate_category, ArrId, Arrow, FinCategory, ObjId};
use crate::finset::{validate_model, FinSetModel};
use crate::lax::{hom_category, is_modification, HomCategory, LaxHom};
use crate::sigma::{validate_theory_map, Extension, SigmaTable, TheoryMap};
use crate::term::{Morphism, OpId};
use crate::two_cells::{Pasting, TwoTheory, Weakness};

/// Lax homomorphisms from the terminal model.
pub fn internal_algebras(x: &CatModel) -> Result<HomCategory> {
    hom_category(&terminal_model(x.theory.clone()), x, Weakness::Lax)
}

/// Colax homomorphisms from the terminal model.
pub fn internal_coalgebras(x: &CatModel) -> Result<HomCategory> {
    hom_category(&terminal_model(x.theory.clone()), x, Weakness::Colax)
}

#[derive(Clone, Debug, Serialize)]
pub struct BilaxFailure {
    pub condition: u8,
    pub pair: (String, String),
    pub objects: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct BilaxReport {
    pub holds: bool,
    /// The condition phrased with the table entries themselves.
    pub condition2: bool,
    /// The condition phrased with inverted entries; `None` when an entry is
    /// not invertible in one of the models.
    pub condition1: Option<bool>,
    pub failures: Vec<BilaxFailure>,
}

/// Whether a lax structure `lax` and a colax structure `colax` on the same
/// functor `x -> y` are compatible through the commutativity table.
pub fn bilax_check(x: &CatModel, y: &CatModel, lax: &LaxHom, colax: &LaxHom, table: &SigmaTable) -> Result<BilaxReport> {
    if lax.f1 != colax.f1 {
        return Err(Error::Precondition("the two structures have different underlying functors".into()));
    }
    if lax.weakness.is_colax() || !colax.weakness.is_colax() {
        return Err(Error::Precondition("expected a lax and a colax structure".into()));
    }
    if table.weakness.is_colax() {
        return Err(Error::Precondition("bilax structures need a lax or pseudo table".into()));
    }
    let theory = &*x.theory;
    let base = &theory.base;
    let rho = TheoryMap::identity(theory);
    let ext = Extension {
        source: theory,
        target: theory,
        rho: &rho,
        table,
    };
    let mut condition1 = Some(true);
    let mut condition2 = true;
    let mut failures = Vec::new();
    for &a in &base.basis() {
        for &b in &base.basis() {
            let (am, bm) = (base.generator(a), base.generator(b));
            let (m, k) = (am.source, bm.source);
            let direct = ext.sigma_map(&bm, &am)?;
            let inverted = Pasting::whisker_l(Morphism::transpose(k, m), Pasting::inverse(ext.sigma_map(&am, &bm)?));
            for (condition, p) in [(2u8, direct), (1u8, inverted)] {
                let tables = x.evaluate_pasting(&p).and_then(|tx| Ok((tx, y.evaluate_pasting(&p)?)));
                let (tx, ty) = match tables {
                    Ok(t) => t,
                    Err(Error::Precondition(_)) if condition == 1 => {
                        condition1 = None;
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                if let Some(xs) = bilax_square(x, y, lax, colax, a, b, &tx, &ty)? {
                    if condition == 2 {
                        condition2 = false;
                    } else if let Some(c) = condition1.as_mut() {
                        *c = false;
                    }
                    failures.push(BilaxFailure {
                        condition,
                        pair: (base.signature.name(a).into(), base.signature.name(b).into()),
                        objects: x.show_objects(&xs),
                    });
                }
            }
        }
    }
    Ok(BilaxReport {
        holds: condition2 && condition1.unwrap_or(true),
        condition1,
        condition2,
        failures,
    })
}

/// First object matrix (`k` rows of `m`) where the two composites differ.
#[allow(clippy::too_many_arguments)]
fn bilax_square(
    x: &CatModel,
    y: &CatModel,
    lax: &LaxHom,
    colax: &LaxHom,
    a: OpId,
    b: OpId,
    tx: &NatTable,
    ty: &NatTable,
) -> Result<Option<Vec<ObjId>>> {
    let base = &x.theory.base;
    let (m, k) = (base.arity(a), base.arity(b));
    let c = &y.carrier;
    let f = &lax.f1;
    for i in 0..x.obj_count(k * m) {
        let xs = x.obj_tuple(i, k * m);
        let rows: Vec<&[ObjId]> = (0..k).map(|j| &xs[j * m..(j + 1) * m]).collect();
        let cols: Vec<Vec<ObjId>> = (0..m).map(|r| (0..k).map(|j| xs[j * m + r]).collect()).collect();
        let fxs: Vec<ObjId> = xs.iter().map(|&o| f.obj[o]).collect();
        let under_rows: Vec<ArrId> = rows.iter().map(|r| colax.cell(a, x.obj_index(r))).collect();
        let over_cols: Vec<ArrId> = cols.iter().map(|col| lax.cell(b, x.obj_index(col))).collect();
        let lhs = c.compose_path(&[y.op_arr(b, &under_rows), ty.at(y.obj_index(&fxs))[0], y.op_arr(a, &over_cols)]);
        let row_vals: Vec<ObjId> = rows.iter().map(|r| x.op_obj(a, r)).collect();
        let col_vals: Vec<ObjId> = cols.iter().map(|col| x.op_obj(b, col)).collect();
        let rhs = c.compose_path(&[
            lax.cell(b, x.obj_index(&row_vals)),
            f.arr[tx.at(i)[0]],
            colax.cell(a, x.obj_index(&col_vals)),
        ]);
        if lhs.is_none() || rhs.is_none() {
            return Err(Error::Arity("bilax composites do not compose".into()));
        }
        if lhs != rhs {
            return Ok(Some(xs));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug)]
pub struct BialgebraCategory {
    pub category: FinCategory,
    /// Indices into the algebra and coalgebra categories.
    pub pairs: Vec<(usize, usize)>,
    /// Underlying arrow of every arrow.
    pub arrows: Vec<ArrId>,
    pub algebras: HomCategory,
    pub coalgebras: HomCategory,
}

/// Compatible algebra and coalgebra structures on one object, with arrows
/// that preserve both.
pub fn internal_bialgebras(x: &CatModel, table: &SigmaTable) -> Result<BialgebraCategory> {
    let star = terminal_model(x.theory.clone());
    let algebras = internal_algebras(x)?;
    let coalgebras = internal_coalgebras(x)?;
    let mut pairs = Vec::new();
    for (i, a) in algebras.homs.iter().enumerate() {
        for (j, c) in coalgebras.homs.iter().enumerate() {
            if a.f1 == c.f1 && bilax_check(&star, x, a, c, table)?.holds {
                pairs.push((i, j));
            }
        }
    }
    let carrier = &x.carrier;
    let mut arrows = Vec::new();
    let mut arrow_ends = Vec::new();
    for (s, &(ai, ci)) in pairs.iter().enumerate() {
        for (t, &(aj, cj)) in pairs.iter().enumerate() {
            let (from, to) = (algebras.homs[ai].f1.obj[0], algebras.homs[aj].f1.obj[0]);
            for &h in carrier.hom(from, to) {
                if is_modification(&star, x, &algebras.homs[ai], &algebras.homs[aj], &[h])
                    && is_modification(&star, x, &coalgebras.homs[ci], &coalgebras.homs[cj], &[h])
                {
                    arrows.push(h);
                    arrow_ends.push((s, t));
                }
            }
        }
    }
    let mut composition = Vec::new();
    for (f, &(fs, ft)) in arrow_ends.iter().enumerate() {
        for (g, &(gs, gt)) in arrow_ends.iter().enumerate() {
            if ft != gs {
                continue;
            }
            let under = carrier.compose(arrows[g], arrows[f]).expect("composable");
            let h = (0..arrows.len())
                .find(|&h| arrow_ends[h] == (fs, gt) && arrows[h] == under)
                .ok_or_else(|| Error::Precondition("bialgebra maps are not closed under composition".into()))?;
            composition.push((g, f, h));
        }
    }
    let identities = pairs
        .iter()
        .enumerate()
        .map(|(s, &(ai, _))| {
            let id = carrier.id(algebras.homs[ai].f1.obj[0]);
            (0..arrows.len())
                .find(|&h| arrow_ends[h] == (s, s) && arrows[h] == id)
                .ok_or_else(|| Error::Precondition("identity is not a bialgebra map".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let objects = pairs
        .iter()
        .map(|&(ai, ci)| format!("{} | {}", algebras.category.objects[ai], coalgebras.category.objects[ci]))
        .collect();
    let named = arrows
        .iter()
        .zip(&arrow_ends)
        .map(|(&h, &(s, t))| Arrow {
            name: carrier.arrows[h].name.clone(),
            src: s,
            tgt: t,
        })
        .collect();
    let category = validate_category(objects, named, identities, &composition)?;
    Ok(BialgebraCategory {
        category,
        pairs,
        arrows,
        algebras,
        coalgebras,
    })
}

#[derive(Clone, Debug)]
pub struct Convolution {
    /// The hom-set, as arrows of the carrier; element `i` of the model is
    /// `hom[i]`.
    pub hom: Vec<ArrId>,
    pub model: FinSetModel,
}

/// The algebra on `Hom(c, a)` for a coalgebra on `c` and an algebra on `a`:
/// an operation acts by the coalgebra structure, then the model's operation
/// on arrows, then the algebra structure. Operations of `source` act through
/// their images under `rho`, and the result is checked against the equations
/// of `source` with every cell read as an equation.
pub fn convolution_algebra(
    x: &CatModel,
    source: &TwoTheory,
    rho: &TheoryMap,
    algebra: &LaxHom,
    coalgebra: &LaxHom,
) -> Result<Convolution> {
    validate_theory_map(source, &x.theory, rho, std::slice::from_ref(x))?;
    if algebra.weakness.is_colax() || !coalgebra.weakness.is_colax() {
        return Err(Error::Precondition("expected an algebra and a coalgebra".into()));
    }
    let star = terminal_model(x.theory.clone());
    let c = &x.carrier;
    let (a_obj, c_obj) = (algebra.f1.obj[0], coalgebra.f1.obj[0]);
    let hom: Vec<ArrId> = c.hom(c_obj, a_obj).to_vec();
    if hom.is_empty() {
        return Err(Error::Precondition(format!(
            "Hom({}, {}) is empty, the convolution algebra has no elements",
            c.objects[c_obj], c.objects[a_obj]
        )));
    }
    let size = hom.len();
    let position = |f: ArrId| hom.iter().position(|&g| g == f);
    let mut tables = Vec::new();
    for img in &rho.ops {
        let t = &img.components[0];
        let n = img.source;
        let points = vec![0; n];
        let (o_a, o_c) = (algebra.induced(&star, x, t, &points)?, coalgebra.induced(&star, x, t, &points)?);
        let mut table = Vec::with_capacity(crate::term::tuple_count(size, n));
        for args in crate::term::all_tuples(size, n) {
            let fs: Vec<ArrId> = args.iter().map(|&i| hom[i]).collect();
            let v = c
                .compose_path(&[o_c, x.term_arr(t, &fs), o_a])
                .ok_or_else(|| Error::Arity("convolution composite does not compose".into()))?;
            table.push(position(v).expect("composite lies in the hom-set"));
        }
        tables.push(table);
    }
    let model = validate_model(&source.truncation(), size, tables)?;
    Ok(Convolution { hom, model })
}
