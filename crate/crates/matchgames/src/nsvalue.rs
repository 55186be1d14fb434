//! Exact nonsignaling values of games, as linear programs over the
//! correlation polytope.
//!
//! `ns_perfect` decides whether the value is exactly 1 by restricting the
//! variables to winning tuples (the value-1 polytope) and testing
//! feasibility; `ns_value` computes the full optimum, taking the perfect
//! fast path first since it is both exact and far smaller.

use num_traits::{One, Zero};

use crate::corr::Correlation;
use crate::error::{Error, Result};
use crate::game::Game;
use crate::lp::{solve_lp, LinearProgram, LpOutcome, Rel};
use crate::rational::{rat, Rational};

pub const DEFAULT_MAX_LP_VARS: usize = 40_000;

/// LP variable cap; `MATCHGAMES_MAX_LP_VARS` overrides the default.
pub fn max_lp_vars() -> usize {
    std::env::var("MATCHGAMES_MAX_LP_VARS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_LP_VARS)
}

/// Support of the value-1 polytope: per question pair, the winning answer
/// pairs (restricted to the diagonal a = b when `synchronous` is set).
fn winning_support(game: &Game, synchronous: bool) -> Vec<Vec<(usize, usize)>> {
    let q = game.num_questions();
    let n = game.num_answers();
    let mut support = Vec::with_capacity(q * q);
    for x in 0..q {
        for y in 0..q {
            let mut cell = Vec::new();
            for a in 0..n {
                for b in 0..n {
                    if synchronous && x == y && a != b {
                        continue;
                    }
                    if game.wins(x, y, a, b) {
                        cell.push((a, b));
                    }
                }
            }
            support.push(cell);
        }
    }
    support
}

/// A perfect nonsignaling correlation for the game, or `None` when the
/// nonsignaling value is below 1. Exact: a returned witness wins with
/// probability exactly 1.
pub fn ns_perfect(game: &Game, synchronous: bool) -> Result<Option<Correlation>> {
    let q = game.num_questions();
    let n = game.num_answers();
    if q == 0 {
        return Ok(Some(Correlation::new(0, n, Vec::new())?));
    }
    if n == 0 {
        return Ok(None);
    }
    let support = winning_support(game, synchronous);
    if support.iter().any(|cell| cell.is_empty()) {
        return Ok(None); // some question pair cannot be won at all
    }

    // variable per supported tuple, ordered by (x, y) then (a, b)
    let mut var_of = std::collections::HashMap::new();
    let mut tuples = Vec::new();
    for x in 0..q {
        for y in 0..q {
            for &(a, b) in &support[x * q + y] {
                var_of.insert((x, y, a, b), tuples.len());
                tuples.push((x, y, a, b));
            }
        }
    }
    let cap = max_lp_vars();
    if tuples.len() > cap {
        return Err(Error::SizeLimit {
            what: "ns_perfect LP variables",
            got: tuples.len(),
            cap,
        });
    }

    let mut lp = LinearProgram::new(tuples.len());
    // normalization per question pair
    for x in 0..q {
        for y in 0..q {
            let terms = support[x * q + y]
                .iter()
                .map(|&(a, b)| (var_of[&(x, y, a, b)], Rational::one()))
                .collect();
            lp.add_constraint(terms, Rel::Eq, Rational::one())?;
        }
    }
    // Alice-side marginals against the x = 0 reference
    for y in 0..q {
        for b in 0..n {
            let col = |x: usize| -> Vec<usize> {
                support[x * q + y]
                    .iter()
                    .filter(|&&(_, bb)| bb == b)
                    .map(|&(a, _)| var_of[&(x, y, a, b)])
                    .collect()
            };
            let reference = col(0);
            for x in 1..q {
                let here = col(x);
                if here.is_empty() && reference.is_empty() {
                    continue;
                }
                let mut terms: Vec<(usize, Rational)> =
                    here.iter().map(|&v| (v, Rational::one())).collect();
                terms.extend(reference.iter().map(|&v| (v, -Rational::one())));
                lp.add_constraint(terms, Rel::Eq, Rational::zero())?;
            }
        }
    }
    // Bob-side marginals against the y = 0 reference
    for x in 0..q {
        for a in 0..n {
            let row = |y: usize| -> Vec<usize> {
                support[x * q + y]
                    .iter()
                    .filter(|&&(aa, _)| aa == a)
                    .map(|&(_, b)| var_of[&(x, y, a, b)])
                    .collect()
            };
            let reference = row(0);
            for y in 1..q {
                let here = row(y);
                if here.is_empty() && reference.is_empty() {
                    continue;
                }
                let mut terms: Vec<(usize, Rational)> =
                    here.iter().map(|&v| (v, Rational::one())).collect();
                terms.extend(reference.iter().map(|&v| (v, -Rational::one())));
                lp.add_constraint(terms, Rel::Eq, Rational::zero())?;
            }
        }
    }

    match solve_lp(&lp) {
        LpOutcome::Optimal { point, .. } => {
            let mut table = vec![Rational::zero(); q * q * n * n];
            for (i, &(x, y, a, b)) in tuples.iter().enumerate() {
                table[((x * q + y) * n + a) * n + b] = point[i].clone();
            }
            Ok(Some(Correlation::new(q, n, table)?))
        }
        LpOutcome::Infeasible => Ok(None),
        LpOutcome::Unbounded => unreachable!("feasibility program has zero objective"),
    }
}

/// The full nonsignaling LP: variables p(a,b|x,y) >= 0 indexed by
/// ((x*|X|+y)*|A|+a)*|A|+b, per-pair normalization, marginal equalities
/// against the x=0 / y=0 reference, objective (1/|X|^2) sum V p. The
/// synchronous flag pins p(a,b|x,x) = 0 for a != b.
pub fn ns_value_lp(game: &Game, synchronous: bool) -> Result<LinearProgram> {
    let q = game.num_questions();
    let n = game.num_answers();
    let nvars = q * q * n * n;
    let cap = max_lp_vars();
    if nvars > cap {
        return Err(Error::SizeLimit {
            what: "ns_value LP variables",
            got: nvars,
            cap,
        });
    }
    let idx = |x: usize, y: usize, a: usize, b: usize| ((x * q + y) * n + a) * n + b;
    let mut objective = vec![Rational::zero(); nvars];
    let scale = rat(1, (q * q) as i64);
    for x in 0..q {
        for y in 0..q {
            for a in 0..n {
                for b in 0..n {
                    if game.wins(x, y, a, b) {
                        objective[idx(x, y, a, b)] = scale.clone();
                    }
                }
            }
        }
    }
    let mut lp = LinearProgram::with_objective(nvars, objective)?;
    for x in 0..q {
        for y in 0..q {
            let mut terms = Vec::with_capacity(n * n);
            for a in 0..n {
                for b in 0..n {
                    terms.push((idx(x, y, a, b), Rational::one()));
                }
            }
            lp.add_constraint(terms, Rel::Eq, Rational::one())?;
        }
    }
    for y in 0..q {
        for b in 0..n {
            for x in 1..q {
                let mut terms = Vec::with_capacity(2 * n);
                for a in 0..n {
                    terms.push((idx(x, y, a, b), Rational::one()));
                    terms.push((idx(0, y, a, b), -Rational::one()));
                }
                lp.add_constraint(terms, Rel::Eq, Rational::zero())?;
            }
        }
    }
    for x in 0..q {
        for a in 0..n {
            for y in 1..q {
                let mut terms = Vec::with_capacity(2 * n);
                for b in 0..n {
                    terms.push((idx(x, y, a, b), Rational::one()));
                    terms.push((idx(x, 0, a, b), -Rational::one()));
                }
                lp.add_constraint(terms, Rel::Eq, Rational::zero())?;
            }
        }
    }
    if synchronous {
        for x in 0..q {
            for a in 0..n {
                for b in 0..n {
                    if a != b {
                        lp.add_constraint(
                            vec![(idx(x, x, a, b), Rational::one())],
                            Rel::Eq,
                            Rational::zero(),
                        )?;
                    }
                }
            }
        }
    }
    Ok(lp)
}

/// Exact nonsignaling value and an optimal correlation witness.
pub fn ns_value(game: &Game, synchronous: bool) -> Result<(Rational, Correlation)> {
    let q = game.num_questions();
    let n = game.num_answers();
    if q == 0 {
        return Ok((Rational::one(), Correlation::new(0, n, Vec::new())?));
    }
    if n == 0 {
        return Err(Error::InvalidInput("game has no answers".into()));
    }
    // Value 1 iff the winning-support polytope is nonempty; that program is
    // much smaller than the full LP, so decide it first.
    if let Some(witness) = ns_perfect(game, synchronous)? {
        return Ok((Rational::one(), witness));
    }
    let lp = ns_value_lp(game, synchronous)?;
    match solve_lp(&lp) {
        LpOutcome::Optimal { value, point } => {
            let corr = Correlation::new(q, n, point)?;
            Ok((value, corr))
        }
        LpOutcome::Infeasible => unreachable!("uniform correlation is always feasible"),
        LpOutcome::Unbounded => unreachable!("normalized probabilities are bounded"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corr::winning_probability;
    use crate::game::{bpm_game, pm_game};
    use crate::graph::{BipartiteGraph, Graph};
    use crate::lp::dual;
    use crate::rational::rat_int;

    #[test]
    fn bpm_k32_has_perfect_ns() {
        let game = bpm_game(&BipartiteGraph::complete(3, 2));
        let (v, w) = ns_value(&game, false).unwrap();
        assert_eq!(v, rat_int(1));
        assert!(w.is_nonsignaling());
        assert_eq!(winning_probability(&game, &w).unwrap(), rat_int(1));
    }

    #[test]
    fn pm_c5_has_perfect_ns() {
        let game = pm_game(&Graph::cycle(5).unwrap());
        let (v, w) = ns_value(&game, false).unwrap();
        assert_eq!(v, rat_int(1));
        assert!(w.is_nonsignaling());
        assert_eq!(winning_probability(&game, &w).unwrap(), rat_int(1));
    }

    #[test]
    fn pm_k3_value_is_two_thirds() {
        // Frozen oracle value: diagonal wins contribute 3 and each of the 6
        // off-diagonal pairs at most min of the marginals, bounded by 1/2.
        let game = pm_game(&Graph::complete(3));
        assert!(ns_perfect(&game, false).unwrap().is_none());
        let (v, w) = ns_value(&game, false).unwrap();
        assert_eq!(v, rat(2, 3));
        assert!(w.is_nonsignaling());
        assert_eq!(winning_probability(&game, &w).unwrap(), rat(2, 3));
        // strong duality spot-check on the full LP
        let lp = ns_value_lp(&game, false).unwrap();
        match solve_lp(&dual(&lp)) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, -rat(2, 3)),
            other => panic!("dual not optimal: {other:?}"),
        }
    }

    #[test]
    fn sync_flag_agrees_on_perfection() {
        // Perfect strategies of synchronous games survive the synchronous
        // restriction.
        for game in [
            bpm_game(&BipartiteGraph::complete(3, 2)),
            pm_game(&Graph::cycle(5).unwrap()),
            pm_game(&Graph::complete(3)),
        ] {
            let plain = ns_perfect(&game, false).unwrap().is_some();
            let sync = ns_perfect(&game, true).unwrap().is_some();
            assert_eq!(plain, sync);
        }
    }

    #[test]
    fn lonely_vertex_kills_value() {
        let g = BipartiteGraph::new(2, 1, [(0, 0), (1, 0)]).unwrap();
        let game = bpm_game(&g);
        assert!(ns_perfect(&game, false).unwrap().is_none());
        let (v, _) = ns_value(&game, false).unwrap();
        assert!(v < rat_int(1));
    }

    #[test]
    fn cap_is_enforced() {
        let game = bpm_game(&BipartiteGraph::complete(3, 2));
        std::env::set_var("MATCHGAMES_MAX_LP_VARS", "10");
        let res = ns_perfect(&game, false);
        std::env::remove_var("MATCHGAMES_MAX_LP_VARS");
        assert!(matches!(res, Err(Error::SizeLimit { .. })));
    }
}
