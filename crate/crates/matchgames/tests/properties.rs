//! Cross-module invariants checked exhaustively over small graphs and on
//! randomized instances.

use proptest::prelude::*;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use matchgames::corr::{classical_value, DeterministicStrategy};
use matchgames::enumerate::{canonical_graphs, connected_canonical_graphs};
use matchgames::fpm::fractional_pm;
use matchgames::game::{bpm_game, pm_game, Game};
use matchgames::graph::{
    double_cover, l_perfect_matching, line_graph, maximum_matching, parse_graph_text,
    sharp_reduction_with_order, BipartiteGraph, Graph, GraphInput, Hypergraph, LMatchingOutcome,
};
use matchgames::lp::{dual, solve_lp, LinearProgram, LpOutcome, Rel};
use matchgames::nc::{k32_bound_identity, sync_bound_identity, NcPolynomial};
use matchgames::nsvalue::ns_value;
use matchgames::packing::classical_pm_alpha_check;
use matchgames::quantum::{quantum_win_prob, trivial_strategy};
use matchgames::rational::{rat, rat_int, to_f64, Rational};

fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges).expect("random edges are valid")
}

fn random_bipartite(rng: &mut ChaCha8Rng, nl: usize, nr: usize, p: f64) -> BipartiteGraph {
    let mut edges = Vec::new();
    for l in 0..nl {
        for r in 0..nr {
            if rng.random::<f64>() < p {
                edges.push((l, r));
            }
        }
    }
    BipartiteGraph::new(nl, nr, edges).expect("random edges are valid")
}

#[test]
fn line_graph_counts_exhaustive_to_7() {
    for n in 0..=7 {
        for g in canonical_graphs(n) {
            let l = line_graph(&g);
            assert_eq!(l.n(), g.edge_count());
            let expect: usize = (0..g.n())
                .map(|v| g.degree(v) * g.degree(v).saturating_sub(1) / 2)
                .sum();
            assert_eq!(l.edge_count(), expect);
        }
    }
}

#[test]
fn line_graph_counts_random_larger() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..200 {
        let n = rng.random_range(8..=12);
        let p = rng.random::<f64>();
        let g = random_graph(&mut rng, n, p);
        let l = line_graph(&g);
        assert_eq!(l.n(), g.edge_count());
        let expect: usize = (0..g.n())
            .map(|v| g.degree(v) * g.degree(v).saturating_sub(1) / 2)
            .sum();
        assert_eq!(l.edge_count(), expect);
    }
}

#[test]
fn double_cover_doubles_edges() {
    for n in 0..=6 {
        for g in canonical_graphs(n) {
            assert_eq!(double_cover(&g).edge_count(), 2 * g.edge_count());
        }
    }
}

#[test]
fn double_cover_of_bipartite_graph_splits_into_two_copies() {
    // C4 and K_{2,3} as graphs; the double cover must consist of two
    // components, each with the original's size and degree multiset.
    let cases = [
        Graph::cycle(4).unwrap(),
        Graph::new(5, [(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)]).unwrap(),
    ];
    for g in cases {
        let dc = double_cover(&g);
        let n = g.n();
        let dg = Graph::new(2 * n, dc.edges().iter().map(|&(l, r)| (l, n + r))).unwrap();
        // component split by BFS
        let mut comp = vec![usize::MAX; 2 * n];
        let mut ncomp = 0;
        for s in 0..2 * n {
            if comp[s] != usize::MAX {
                continue;
            }
            let mut stack = vec![s];
            comp[s] = ncomp;
            while let Some(v) = stack.pop() {
                for &u in dg.neighbors(v) {
                    if comp[u] == usize::MAX {
                        comp[u] = ncomp;
                        stack.push(u);
                    }
                }
            }
            ncomp += 1;
        }
        assert_eq!(ncomp, 2);
        for c in 0..2 {
            let verts: Vec<usize> = (0..2 * n).filter(|&v| comp[v] == c).collect();
            assert_eq!(verts.len(), n);
            let mut degs: Vec<usize> = verts.iter().map(|&v| dg.degree(v)).collect();
            degs.sort_unstable();
            let mut gdegs: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
            gdegs.sort_unstable();
            assert_eq!(degs, gdegs);
        }
    }
}

#[test]
fn sharp_reduction_is_order_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..300 {
        let nl = rng.random_range(1..=6);
        let nr = rng.random_range(1..=6);
        let p = rng.random::<f64>();
        let g = random_bipartite(&mut rng, nl, nr, p);
        let fwd = sharp_reduction_with_order(&g, false);
        let rev = sharp_reduction_with_order(&g, true);
        assert_eq!(fwd.lonely_left.is_empty(), rev.lonely_left.is_empty());
        assert_eq!(fwd.forced.len(), rev.forced.len());
        assert_eq!(fwd.reduced.n_left(), rev.reduced.n_left());
        assert_eq!(fwd.reduced.n_right(), rev.reduced.n_right());
        assert_eq!(fwd.reduced.edge_count(), rev.reduced.edge_count());
        let degrees = |b: &BipartiteGraph| -> (Vec<usize>, Vec<usize>) {
            let mut l: Vec<usize> = (0..b.n_left()).map(|v| b.left_degree(v)).collect();
            let mut r: Vec<usize> = (0..b.n_right()).map(|v| b.right_neighbors(v).len()).collect();
            l.sort_unstable();
            r.sort_unstable();
            (l, r)
        };
        assert_eq!(degrees(&fwd.reduced), degrees(&rev.reduced));
    }
}

#[test]
fn hall_outcomes_are_literal() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..300 {
        let nl = rng.random_range(1..=7);
        let nr = rng.random_range(1..=7);
        let p = rng.random::<f64>();
        let g = random_bipartite(&mut rng, nl, nr, p);
        match l_perfect_matching(&g) {
            LMatchingOutcome::Matching(m) => {
                assert_eq!(m.size(), nl);
                let mut lefts: Vec<usize> = m.edges.iter().map(|&(l, _)| l).collect();
                lefts.sort_unstable();
                lefts.dedup();
                assert_eq!(lefts.len(), nl, "covers L exactly once");
                let mut rights: Vec<usize> = m.edges.iter().map(|&(_, r)| r).collect();
                rights.sort_unstable();
                rights.dedup();
                assert_eq!(rights.len(), nl, "rights are pairwise distinct");
                assert!(m.edges.iter().all(|&(l, r)| g.has_edge(l, r)));
            }
            LMatchingOutcome::HallViolator(s) => {
                let mut nbhd: Vec<usize> = s
                    .iter()
                    .flat_map(|&l| g.left_neighbors(l).iter().copied())
                    .collect();
                nbhd.sort_unstable();
                nbhd.dedup();
                assert!(nbhd.len() < s.len(), "violator is literal");
            }
        }
    }
}

#[test]
fn maximum_matching_agrees_with_subset_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut tested = 0;
    while tested < 60 {
        let n = rng.random_range(2..=8);
        let p = rng.random::<f64>() * 0.8;
        let g = random_graph(&mut rng, n, p);
        if g.edge_count() > 14 {
            continue;
        }
        tested += 1;
        let best = maximum_matching(&g).unwrap().size();
        let m = g.edge_count();
        let mut brute = 0usize;
        'subset: for mask in 0u32..(1 << m) {
            let mut used = 0u64;
            for i in 0..m {
                if mask & (1 << i) != 0 {
                    let (u, v) = g.edges()[i];
                    let bits = (1u64 << u) | (1 << v);
                    if used & bits != 0 {
                        continue 'subset;
                    }
                    used |= bits;
                }
            }
            brute = brute.max(mask.count_ones() as usize);
        }
        assert_eq!(best, brute);
    }
}

#[test]
fn perfect_matching_iff_line_graph_alpha_exhaustive_to_8() {
    for n in 0..=8 {
        for g in canonical_graphs(n) {
            assert!(classical_pm_alpha_check(&g).unwrap());
        }
    }
}

#[test]
fn fractional_matching_iff_double_cover_matchable_exhaustive_to_8() {
    use rayon::prelude::*;
    for n in 1..=8 {
        let bad = canonical_graphs(n)
            .par_iter()
            .filter(|g| {
                let fpm = fractional_pm(g).is_some();
                let dc = matches!(
                    l_perfect_matching(&double_cover(g)),
                    LMatchingOutcome::Matching(_)
                );
                fpm != dc
            })
            .count();
        assert_eq!(bad, 0, "n = {n}");
    }
}

#[test]
fn classical_value_agrees_with_unpruned_brute_force() {
    // Independent oracle: maximize over every deterministic pair with no
    // pruning and no per-question decomposition.
    fn brute_force(game: &Game) -> Rational {
        let q = game.num_questions();
        let a = game.num_answers();
        let total = (a as u64).pow(q as u32);
        let decode = |mut i: u64| -> Vec<usize> {
            let mut f = vec![0usize; q];
            for x in (0..q).rev() {
                f[x] = (i % a as u64) as usize;
                i /= a as u64;
            }
            f
        };
        let mut best = 0usize;
        for ia in 0..total {
            let fa = decode(ia);
            for ib in 0..total {
                let fb = decode(ib);
                let wins = (0..q)
                    .flat_map(|x| (0..q).map(move |y| (x, y)))
                    .filter(|&(x, y)| game.wins(x, y, fa[x], fb[y]))
                    .count();
                best = best.max(wins);
            }
        }
        rat(best as i64, (q * q) as i64)
    }

    for g in connected_canonical_graphs(3)
        .into_iter()
        .chain(connected_canonical_graphs(4))
    {
        let game = pm_game(&g);
        if game.num_answers() == 0 || game.num_answers() > 4 {
            continue;
        }
        let (v, strat) = classical_value(&game, false).unwrap();
        assert_eq!(v, brute_force(&game), "graph {:?}", g.edges());
        // the returned strategy attains the value
        let corr = DeterministicStrategy {
            alice: strat.alice.clone(),
            bob: strat.bob.clone(),
        }
        .correlation(game.num_answers());
        assert_eq!(
            matchgames::corr::winning_probability(&game, &corr).unwrap(),
            v
        );
    }
    // bipartite spot checks
    for g in [
        BipartiteGraph::complete(2, 2),
        BipartiteGraph::new(3, 2, [(0, 0), (0, 1), (1, 0), (2, 1)]).unwrap(),
    ] {
        let game = bpm_game(&g);
        let (v, _) = classical_value(&game, false).unwrap();
        assert_eq!(v, brute_force(&game));
    }
}

#[test]
fn quantum_values_never_exceed_nonsignaling() {
    let game = bpm_game(&BipartiteGraph::complete(3, 2));
    let (nsv, _) = ns_value(&game, false).unwrap();
    let qv = quantum_win_prob(&game, &matchgames::quantum::k32_optimal_strategy()).unwrap();
    assert_eq!(nsv, rat_int(1));
    assert!(qv <= to_f64(&nsv) + 1e-9);
    for n in [4, 5] {
        let game = bpm_game(&BipartiteGraph::complete(n, 2));
        let (nsv, _) = ns_value(&game, false).unwrap();
        let qv = quantum_win_prob(&game, &trivial_strategy(n).unwrap()).unwrap();
        assert!(qv <= to_f64(&nsv) + 1e-9);
    }
}

/// Matrix evaluation of noncommutative polynomials: a_i -> M_i (x) I,
/// b_j -> I (x) N_j with random Hermitian involutions M, N. A verified
/// sum-of-squares identity must evaluate to zero in every such
/// representation.
#[test]
fn verified_sos_vanishes_numerically() {
    use nalgebra::DMatrix;
    use num_complex::Complex64;
    type CM = DMatrix<Complex64>;

    fn rand_involution(rng: &mut ChaCha8Rng, d: usize) -> CM {
        let h = CM::from_fn(d, d, |_, _| {
            Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        let h = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = h.symmetric_eigen();
        let mut m = CM::zeros(d, d);
        for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
            let sign = if lambda >= 0.0 { 1.0 } else { -1.0 };
            let v = eig.eigenvectors.column(k);
            m += v * v.adjoint() * Complex64::new(sign, 0.0);
        }
        m
    }

    fn evaluate(p: &NcPolynomial, alice: &[CM], bob: &[CM], dim: usize) -> CM {
        let eye = CM::identity(dim * dim, dim * dim);
        let mut acc = CM::zeros(dim * dim, dim * dim);
        for (word, coeff) in p.terms() {
            let mut m = eye.clone();
            for g in word.generators() {
                let factor = match g {
                    matchgames::nc::Gen::A(i) => {
                        alice[i as usize].kronecker(&CM::identity(dim, dim))
                    }
                    matchgames::nc::Gen::B(j) => {
                        CM::identity(dim, dim).kronecker(&bob[j as usize])
                    }
                };
                m *= factor;
            }
            acc += m * Complex64::new(to_f64(coeff), 0.0);
        }
        acc
    }

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let d = 3;
    let identities: Vec<(NcPolynomial, Vec<(Rational, NcPolynomial)>)> = vec![
        k32_bound_identity(),
        sync_bound_identity(4).unwrap(),
    ];
    for (lhs, terms) in identities {
        assert!(matchgames::nc::verify_sos(&lhs, &terms).unwrap());
        let n = lhs.arity();
        for _ in 0..3 {
            let alice: Vec<CM> = (0..n).map(|_| rand_involution(&mut rng, d)).collect();
            let bob: Vec<CM> = (0..n).map(|_| rand_involution(&mut rng, d)).collect();
            let mut acc = evaluate(&lhs, &alice, &bob, d);
            for (c, s) in &terms {
                let sm = evaluate(s, &alice, &bob, d);
                acc -= (&sm * &sm) * Complex64::new(to_f64(c), 0.0);
            }
            assert!(acc.norm() < 1e-9, "residual {}", acc.norm());
        }
    }
}

#[test]
fn duality_on_random_bounded_lps() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..60 {
        let nv = rng.random_range(1..=4);
        let mut lp = LinearProgram::with_objective(
            nv,
            (0..nv).map(|_| rat_int(rng.random_range(-3..=3))).collect(),
        )
        .unwrap();
        // box constraints keep it bounded and feasible
        for j in 0..nv {
            lp.add_constraint(
                vec![(j, rat_int(1))],
                Rel::Le,
                rat_int(rng.random_range(0..=4)),
            )
            .unwrap();
        }
        for _ in 0..rng.random_range(0..=3) {
            let terms: Vec<(usize, Rational)> = (0..nv)
                .filter_map(|j| {
                    let c = rng.random_range(-2..=2);
                    (c != 0).then(|| (j, rat_int(c)))
                })
                .collect();
            if terms.is_empty() {
                continue;
            }
            lp.add_constraint(terms, Rel::Le, rat_int(rng.random_range(0..=5)))
                .unwrap();
        }
        let LpOutcome::Optimal { value, .. } = solve_lp(&lp) else {
            panic!("boxed LP must be optimal");
        };
        let LpOutcome::Optimal { value: dv, .. } = solve_lp(&dual(&lp)) else {
            panic!("dual of optimal LP must be optimal");
        };
        assert_eq!(dv, -value);
    }
}

#[test]
fn ns_value_is_monotone_under_relaxing_the_predicate() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        let q = 2;
        let a = rng.random_range(2..=3);
        let table: Vec<bool> = (0..q * q * a * a).map(|_| rng.random::<f64>() < 0.4).collect();
        let game = Game::new(q, a, table.clone()).unwrap();
        let (v, _) = ns_value(&game, false).unwrap();
        // flip one losing entry to winning
        let zeros: Vec<usize> = (0..table.len()).filter(|&i| !table[i]).collect();
        if zeros.is_empty() {
            continue;
        }
        let flip = zeros[rng.random_range(0..zeros.len())];
        let mut relaxed = table.clone();
        relaxed[flip] = true;
        let game2 = Game::new(q, a, relaxed).unwrap();
        let (v2, _) = ns_value(&game2, false).unwrap();
        assert!(v2 >= v);
    }
}

#[test]
fn returned_fpm_witnesses_are_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..80 {
        let n = rng.random_range(1..=7);
        let p = rng.random::<f64>();
        let g = random_graph(&mut rng, n, p);
        if let Some(f) = fractional_pm(&g) {
            f.check(&g).unwrap();
            let total: Rational = f.weights().iter().sum();
            // handshake: per-vertex sums 1 means total weight n/2
            assert_eq!(total * rat_int(2), rat_int(n as i64));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graph_text_round_trip(n in 0usize..8, seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = rng.random::<f64>();
        let g = random_graph(&mut rng, n, p);
        let text = g.to_text();
        let parsed = parse_graph_text(&text).unwrap();
        prop_assert_eq!(parsed, GraphInput::Graph(g));
    }

    #[test]
    fn bipartite_text_round_trip(nl in 0usize..6, nr in 0usize..6, seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = rng.random::<f64>();
        let g = random_bipartite(&mut rng, nl, nr, p);
        let text = g.to_text();
        let parsed = parse_graph_text(&text).unwrap();
        prop_assert_eq!(parsed, GraphInput::Bipartite(g));
    }

    #[test]
    fn hypergraph_text_round_trip(n in 1usize..7, seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut seen = std::collections::BTreeSet::new();
        for _ in 0..rng.random_range(0..5) {
            let h: Vec<usize> = (0..n).filter(|_| rng.random::<f64>() < 0.5).collect();
            if !h.is_empty() {
                seen.insert(h);
            }
        }
        let h = Hypergraph::new(n, seen.into_iter().collect::<Vec<_>>()).unwrap();
        let text = h.to_text();
        let parsed = parse_graph_text(&text).unwrap();
        prop_assert_eq!(parsed, GraphInput::Hypergraph(h));
    }

    #[test]
    fn adjoint_is_an_involution(seed in 0u64..500) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // random polynomial with words of length <= 3
        let n = 3usize;
        let mut p = NcPolynomial::zero(n);
        for _ in 0..rng.random_range(1..6) {
            let mut term = NcPolynomial::constant(n, rat_int(rng.random_range(-4..=4)));
            for _ in 0..rng.random_range(0..4) {
                let g = if rng.random::<bool>() {
                    matchgames::nc::Gen::A(rng.random_range(0..n as u32))
                } else {
                    matchgames::nc::Gen::B(rng.random_range(0..n as u32))
                };
                term = term.mul(&NcPolynomial::generator(n, g).unwrap()).unwrap();
            }
            p = p.add(&term).unwrap();
        }
        prop_assert_eq!(p.adjoint().adjoint(), p.clone());
        // squares of self-adjoint elements are fixed by the adjoint
        let s = p.add(&p.adjoint()).unwrap();
        prop_assert!(s.is_self_adjoint());
        prop_assert!(s.mul(&s).unwrap().is_self_adjoint());
    }
}
