//! Randomized and exhaustive laws over the shipped fixtures.

use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use lawvere_core::cat_model::CatModel;
use lawvere_core::dsl::{self, Library};
use lawvere_core::equality::{decide_equal, DecideOptions, EqualityVerdict};
use lawvere_core::fincat::{self, FinCategory, FinFunctor, FinNat};
use lawvere_core::finset::{self, Bounds, FinSetModel};
use lawvere_core::rewrite::RewriteSystem;
use lawvere_core::term::{all_tuples, tensor_ops, tensor_ops_rev, Morphism, Signature, Term};
use lawvere_core::theory::TheoryPresentation;
use proptest::prelude::*;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

/// Every fixture, loaded once.
fn libraries() -> &'static [Library] {
    static LIBS: OnceLock<Vec<Library>> = OnceLock::new();
    LIBS.get_or_init(|| {
        let mut files: Vec<PathBuf> = std::fs::read_dir(root().join("fixtures"))
            .unwrap()
            .map(|e| e.unwrap().path())
            .filter(|p| p.extension().is_some_and(|e| e == "law"))
            .collect();
        files.sort();
        files.iter().map(|p| dsl::load_library(p).unwrap()).collect()
    })
}

/// A theory with every model we can evaluate in: the set models of its
/// truncation up to size 2, the declared ones, and its category models.
struct Subject {
    theory: TheoryPresentation,
    sets: Vec<FinSetModel>,
    cats: Vec<CatModel>,
}

fn subjects() -> &'static [Subject] {
    static SUBJECTS: OnceLock<Vec<Subject>> = OnceLock::new();
    SUBJECTS.get_or_init(|| {
        let mut out: Vec<Subject> = Vec::new();
        for lib in libraries() {
            for (name, t) in &lib.theories {
                if out.iter().any(|s| s.theory.name == *name) {
                    continue;
                }
                let theory = t.truncation();
                let mut sets: Vec<FinSetModel> = lib
                    .finset_models
                    .values()
                    .filter(|(n, _)| n == name)
                    .map(|(_, m)| m.clone())
                    .collect();
                for size in 1..=2 {
                    sets.extend(finset::enumerate_models(&theory, size, Bounds::default()).unwrap());
                }
                let cats = lib.cat_models_of(name).into_iter().cloned().collect();
                out.push(Subject { theory, sets, cats });
            }
        }
        out
    })
}

/// Decodes a stream of numbers into terms; the same stream always gives the
/// same term.
struct Decoder<'a> {
    sig: &'a Signature,
    words: std::iter::Cycle<std::slice::Iter<'a, u32>>,
}

impl Decoder<'_> {
    fn next(&mut self, n: usize) -> usize {
        *self.words.next().unwrap() as usize % n.max(1)
    }

    fn term(&mut self, context: usize, depth: usize) -> Term {
        let ops = self.sig.ops.len();
        let usable: Vec<usize> = (0..ops).filter(|&o| context > 0 || self.sig.arity(o) == 0).collect();
        let leaf = depth == 0 || usable.is_empty() || (context > 0 && self.next(3) == 0);
        if leaf && context > 0 {
            return Term::Proj(self.next(context));
        }
        if usable.is_empty() {
            unreachable!("callers only ask for closed terms when a constant exists");
        }
        let op = usable[self.next(usable.len())];
        let args = (0..self.sig.arity(op)).map(|_| self.term(context, depth.saturating_sub(1))).collect();
        Term::Apply(op, args)
    }

    fn morphism(&mut self, source: usize, target: usize) -> Morphism {
        Morphism::new(source, (0..target).map(|_| self.term(source, 3)).collect()).unwrap()
    }
}

fn has_constant(sig: &Signature) -> bool {
    (0..sig.ops.len()).any(|o| sig.arity(o) == 0)
}

/// Three composable maps `a -> b -> c -> d` with small shapes.
fn three_maps(sig: &Signature, words: &[u32]) -> [Morphism; 3] {
    let mut d = Decoder {
        sig,
        words: words.iter().cycle(),
    };
    let low = if has_constant(sig) { 0 } else { 1 };
    let mut dim = || low + d.next(3 - low + 1).min(3 - low);
    let dims = [dim(), dim(), dim(), dim()];
    let mut d = Decoder {
        sig,
        words: words[4..].iter().cycle(),
    };
    [
        d.morphism(dims[0], dims[1]),
        d.morphism(dims[1], dims[2]),
        d.morphism(dims[2], dims[3]),
    ]
}

fn eval_matches_in(s: &Subject, f: &Morphism, g: &Morphism) {
    let fg = f.compose(g).unwrap();
    for m in &s.sets {
        for xs in all_tuples(m.size, f.source) {
            assert_eq!(m.eval(&fg, &xs), m.eval(g, &m.eval(f, &xs)), "{}", s.theory.name);
        }
    }
    for m in &s.cats {
        for i in 0..m.obj_count(f.source) {
            let xs = m.obj_tuple(i, f.source);
            assert_eq!(m.map_obj(&fg, &xs), m.map_obj(g, &m.map_obj(f, &xs)), "{}", m.name);
        }
        // arrow tuples grow fast; the identities and a diagonal sweep suffice
        for a in 0..m.carrier.num_arrows() {
            let fs = vec![a; f.source];
            assert_eq!(m.map_arr(&fg, &fs), m.map_arr(g, &m.map_arr(f, &fs)), "{}", m.name);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn composition_is_evaluated_as_a_homomorphism(words in prop::collection::vec(any::<u32>(), 8..64)) {
        for s in subjects() {
            let [f, g, h] = three_maps(&s.theory.signature, &words);
            eval_matches_in(s, &f, &g);
            // substitution algebra: associative and unital on the nose
            prop_assert_eq!(f.compose(&g).unwrap().compose(&h).unwrap(), f.compose(&g.compose(&h).unwrap()).unwrap());
            prop_assert_eq!(Morphism::identity(f.source).compose(&f).unwrap(), f.clone());
            prop_assert_eq!(f.compose(&Morphism::identity(f.target())).unwrap(), f.clone());
        }
    }

    #[test]
    fn substitution_evaluates_argumentwise(words in prop::collection::vec(any::<u32>(), 8..64)) {
        for s in subjects() {
            let [f, g, _] = three_maps(&s.theory.signature, &words);
            for t in &g.components {
                let substituted = t.subst(&f.components);
                for m in &s.sets {
                    for xs in all_tuples(m.size, f.source) {
                        prop_assert_eq!(m.eval_term(&substituted, &xs), m.eval_term(t, &m.eval(&f, &xs)));
                    }
                }
            }
        }
    }

    #[test]
    fn squares_with_an_inert_side_commute_without_rewriting(words in prop::collection::vec(any::<u32>(), 8..64)) {
        for s in subjects() {
            let sig = &s.theory.signature;
            let mut d = Decoder { sig, words: words.iter().cycle() };
            let (m, n) = (d.next(3) + 1, d.next(3));
            let inert = Morphism::new(m, (0..n).map(|_| Term::Proj(d.next(m))).collect()).unwrap();
            let (k, l) = (d.next(3) + 1, d.next(2) + 1);
            let other = d.morphism(k, l);
            for (a, b) in [(&inert, &other), (&other, &inert)] {
                let lhs = tensor_ops(a, b);
                let rhs = tensor_ops_rev(a, b);
                match decide_equal(&s.theory, &lhs, &rhs, DecideOptions::default()).unwrap() {
                    EqualityVerdict::Equal { trace } => prop_assert!(trace.is_empty()),
                    v => prop_assert!(false, "{v:?}"),
                }
            }
        }
    }

    #[test]
    fn equality_verdicts_replay(words in prop::collection::vec(any::<u32>(), 8..64)) {
        for s in subjects().iter().filter(|s| !s.sets.is_empty()) {
            let sig = &s.theory.signature;
            let mut d = Decoder { sig, words: words.iter().cycle() };
            let source = d.next(3) + 1;
            let f = d.morphism(source, 1);
            let g = d.morphism(source, 1);
            let opts = DecideOptions { budget: 2_000, max_model_size: 2 };
            match decide_equal(&s.theory, &f, &g, opts).unwrap() {
                EqualityVerdict::Equal { trace } => {
                    let rs = RewriteSystem::from_theory(&s.theory);
                    let mut cur = f.clone();
                    for step in &trace {
                        let before = cur.components[step.component].clone();
                        let after = rs.replay(&cur, std::slice::from_ref(step)).unwrap();
                        // every step keeps the value in every model
                        let old = Morphism::new(source, vec![before]).unwrap();
                        let new = Morphism::new(source, vec![after.components[step.component].clone()]).unwrap();
                        for m in &s.sets {
                            for xs in all_tuples(m.size, source) {
                                prop_assert_eq!(m.eval(&old, &xs), m.eval(&new, &xs));
                            }
                        }
                        cur = after;
                    }
                    prop_assert_eq!(&rs.replay(&f, &trace).unwrap(), &g);
                }
                EqualityVerdict::NotEqual { model, witness, lhs, rhs } => {
                    prop_assert!(finset::find_violation(&s.theory, &model).is_none());
                    prop_assert_eq!(&model.eval(&f, &witness), &lhs);
                    prop_assert_eq!(&model.eval(&g, &witness), &rhs);
                    prop_assert_ne!(lhs, rhs);
                }
                EqualityVerdict::Unknown { .. } => {}
            }
        }
    }
}

/// The identity, the constant functors the category has, every unary
/// operation of every model on it, and each binary operation with one side
/// held at an object.
fn endofunctors(c: &FinCategory, models: &[&CatModel]) -> Vec<FinFunctor> {
    let mut out = vec![FinFunctor::identity(c)];
    for x in 0..c.num_objects() {
        out.push(FinFunctor {
            obj: vec![x; c.num_objects()],
            arr: vec![c.id(x); c.num_arrows()],
        });
    }
    for m in models {
        for (op, table) in m.ops.iter().enumerate() {
            match table.arity {
                1 => out.push(m.op_functor(op)),
                2 => {
                    for x in 0..c.num_objects() {
                        let left = FinFunctor {
                            obj: (0..c.num_objects()).map(|y| m.op_obj(op, &[x, y])).collect(),
                            arr: (0..c.num_arrows()).map(|f| m.op_arr(op, &[c.id(x), f])).collect(),
                        };
                        let right = FinFunctor {
                            obj: (0..c.num_objects()).map(|y| m.op_obj(op, &[y, x])).collect(),
                            arr: (0..c.num_arrows()).map(|f| m.op_arr(op, &[f, c.id(x)])).collect(),
                        };
                        out.extend([left, right]);
                    }
                }
                _ => {}
            }
        }
    }
    if c.num_arrows() <= 8 {
        out.extend(fincat::enumerate_functors(c, c, fincat::DEFAULT_MAX_ARROWS).unwrap());
    }
    out.sort();
    out.dedup();
    for f in &out {
        fincat::validate_functor(c, c, f).unwrap();
    }
    out
}

fn categories() -> Vec<(String, FinCategory, Vec<&'static CatModel>)> {
    let mut out: Vec<(String, FinCategory, Vec<&'static CatModel>)> = Vec::new();
    for lib in libraries() {
        for (name, c) in &lib.categories {
            if out.iter().any(|(n, _, _)| n == name) {
                continue;
            }
            let models = lib.cat_models.values().filter(|m| m.carrier == *c).collect();
            out.push((name.clone(), c.clone(), models));
        }
    }
    out
}

#[test]
fn interchange_holds_on_every_shipped_category() {
    let cats = categories();
    assert!(cats.len() >= 7);
    for (name, c, models) in &cats {
        let fs = endofunctors(c, models);
        // functor composition is associative
        for a in fs.iter().take(12) {
            for b in fs.iter().take(12) {
                for d in fs.iter().take(12) {
                    assert_eq!(a.then(b).then(d), a.then(&b.then(d)), "{name}");
                }
            }
        }
        let nats: Vec<Vec<Vec<FinNat>>> = fs
            .iter()
            .map(|f| fs.iter().map(|g| fincat::enumerate_naturals(c, c, f, g)).collect())
            .collect();
        // chains F => G => H with both transformations present
        let mut chains = Vec::new();
        for f in 0..fs.len() {
            for g in 0..fs.len() {
                for h in 0..fs.len() {
                    if !nats[f][g].is_empty() && !nats[g][h].is_empty() {
                        chains.push((f, g, h));
                    }
                }
            }
        }
        let mut checked = 0usize;
        'outer: for (i, &(f, g, h)) in chains.iter().enumerate() {
            // pair each chain with a spread of others, not only its neighbours
            for &(k, l, m) in chains.iter().skip(i % 7).step_by(7) {
                for alpha in nats[f][g].iter().take(3) {
                    for beta in nats[g][h].iter().take(3) {
                        for gamma in nats[k][l].iter().take(3) {
                            for delta in nats[l][m].iter().take(3) {
                                let (ff, gg) = (&fs[f], &fs[g]);
                                let (ll, mm) = (&fs[l], &fs[m]);
                                let lhs = fincat::horizontal(
                                    c,
                                    ff,
                                    &fincat::vertical(c, alpha, beta),
                                    &fincat::vertical(c, gamma, delta),
                                    mm,
                                );
                                let rhs = fincat::vertical(
                                    c,
                                    &fincat::horizontal(c, ff, alpha, gamma, ll),
                                    &fincat::horizontal(c, gg, beta, delta, mm),
                                );
                                assert_eq!(lhs, rhs, "{name}");
                                let kf = ff.then(&fs[k]);
                                let mh = fs[h].then(mm);
                                fincat::validate_nat(c, c, &kf, &mh, &lhs).unwrap();
                                checked += 1;
                                if checked >= 20_000 {
                                    break 'outer;
                                }
                            }
                        }
                    }
                }
            }
        }
        assert!(checked > 0, "{name}: nothing to compare");
    }
}

#[test]
fn whiskering_distributes_over_vertical_composition() {
    for (name, c, models) in categories() {
        let fs = endofunctors(&c, &models);
        for f in fs.iter().take(6) {
            for g in fs.iter().take(6) {
                let fg = fincat::enumerate_naturals(&c, &c, f, g);
                for h in fs.iter().take(6) {
                    let gh = fincat::enumerate_naturals(&c, &c, g, h);
                    for a in fg.iter().take(4) {
                        for b in gh.iter().take(4) {
                            let ab = fincat::vertical(&c, a, b);
                            for k in fs.iter().take(6) {
                                let id_k = FinNat {
                                    comps: (0..c.num_objects()).map(|x| c.id(k.obj[x])).collect(),
                                };
                                let whisk = |n: &FinNat| fincat::horizontal(&c, f, n, &id_k, k);
                                let whisk_g = |n: &FinNat| fincat::horizontal(&c, g, n, &id_k, k);
                                assert_eq!(whisk(&ab), fincat::vertical(&c, &whisk(a), &whisk_g(b)), "{name}");
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn semantic_failures_are_never_syntactic_successes() {
    for s in subjects() {
        let report = lawvere_core::equality::check_commutative(&s.theory, DecideOptions::default()).unwrap();
        for m in &s.sets {
            for pair in finset::semantic_commutativity_check(&s.theory, m).unwrap() {
                if !pair.holds {
                    let sq = report
                        .squares
                        .iter()
                        .find(|q| s.theory.signature.name(q.alpha) == pair.alpha && s.theory.signature.name(q.beta) == pair.beta)
                        .unwrap();
                    assert!(!sq.verdict.is_equal(), "{}", s.theory.name);
                }
            }
        }
    }
}

#[test]
fn homs_compose_within_the_enumeration() {
    for s in subjects() {
        let small: Vec<&FinSetModel> = s.sets.iter().filter(|m| m.size <= 2).take(5).collect();
        for a in &small {
            for b in &small {
                let ab = finset::enumerate_homs(&s.theory, a, b).unwrap();
                for c in &small {
                    let bc = finset::enumerate_homs(&s.theory, b, c).unwrap();
                    let ac = finset::enumerate_homs(&s.theory, a, c).unwrap();
                    for f in &ab {
                        for g in &bc {
                            let comp: Vec<usize> = f.map.iter().map(|&x| g.map[x]).collect();
                            assert!(ac.iter().any(|h| h.map == comp), "{}", s.theory.name);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn loading_is_deterministic() {
    for path in ["t_comm_flat.law", "graded_lines.law"] {
        let a = dsl::load_library(&root().join("fixtures").join(path)).unwrap();
        let b = dsl::load_library(&root().join("fixtures").join(path)).unwrap();
        assert_eq!(a.cat_models.keys().collect::<Vec<_>>(), b.cat_models.keys().collect::<Vec<_>>());
        for (x, y) in a.cat_models.values().zip(b.cat_models.values()) {
            assert_eq!(x.ops, y.ops);
            assert_eq!(x.cells, y.cells);
        }
    }
}
