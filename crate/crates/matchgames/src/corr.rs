//! Correlations p(a,b|x,y) over exact rationals: validity and nonsignaling
//! predicates, exact classical values, and the explicit perfect
//! nonsignaling constructions for matching games.

use num_traits::{One, Zero};
use rayon::prelude::*;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::fpm::FractionalMatching;
use crate::game::{pm_game, Game};
use crate::graph::{
    degree2_decomposition, l_perfect_matching, BipartiteGraph, Graph, LMatchingOutcome,
};
use crate::rational::{format_ratio, parse_ratio, rat, Rational};

pub const DEFAULT_CLASSICAL_CAP: u128 = 2_000_000;

/// A joint conditional distribution table with |X| questions and |A|
/// answers per player. Entries are exact; every (x,y) block sums to 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Correlation {
    questions: usize,
    answers: usize,
    table: Vec<Rational>,
}

impl Correlation {
    pub fn new(questions: usize, answers: usize, table: Vec<Rational>) -> Result<Self> {
        if table.len() != questions * questions * answers * answers {
            return Err(Error::ShapeMismatch(format!(
                "table has {} entries, want {}",
                table.len(),
                questions * questions * answers * answers
            )));
        }
        let c = Correlation {
            questions,
            answers,
            table,
        };
        for x in 0..questions {
            for y in 0..questions {
                let mut sum = Rational::zero();
                for a in 0..answers {
                    for b in 0..answers {
                        let p = c.get(x, y, a, b);
                        if p < &Rational::zero() {
                            return Err(Error::Precondition(format!(
                                "negative entry p({a},{b}|{x},{y}) = {p}"
                            )));
                        }
                        sum += p;
                    }
                }
                if !sum.is_one() {
                    return Err(Error::Precondition(format!(
                        "block ({x},{y}) sums to {sum}, want 1"
                    )));
                }
            }
        }
        Ok(c)
    }

    pub fn questions(&self) -> usize {
        self.questions
    }

    pub fn answers(&self) -> usize {
        self.answers
    }

    #[inline]
    fn idx(&self, x: usize, y: usize, a: usize, b: usize) -> usize {
        ((x * self.questions + y) * self.answers + a) * self.answers + b
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, a: usize, b: usize) -> &Rational {
        &self.table[self.idx(x, y, a, b)]
    }

    /// Sum_a p(a,b|x,y) must not depend on x; sum_b must not depend on y.
    pub fn is_nonsignaling(&self) -> bool {
        let q = self.questions;
        let n = self.answers;
        for y in 0..q {
            for b in 0..n {
                let reference: Rational = (0..n).map(|a| self.get(0, y, a, b)).sum();
                for x in 1..q {
                    let s: Rational = (0..n).map(|a| self.get(x, y, a, b)).sum();
                    if s != reference {
                        return false;
                    }
                }
            }
        }
        for x in 0..q {
            for a in 0..n {
                let reference: Rational = (0..n).map(|b| self.get(x, 0, a, b)).sum();
                for y in 1..q {
                    let s: Rational = (0..n).map(|b| self.get(x, y, a, b)).sum();
                    if s != reference {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// p(a,b|x,x) = 0 whenever a != b.
    pub fn is_synchronous(&self) -> bool {
        (0..self.questions).all(|x| {
            (0..self.answers).all(|a| {
                (0..self.answers).all(|b| a == b || self.get(x, x, a, b).is_zero())
            })
        })
    }

    /// Synchronous, and p(a,a|x,y) = 0 whenever x != y.
    pub fn is_bisynchronous(&self) -> bool {
        self.is_synchronous()
            && (0..self.questions).all(|x| {
                (0..self.questions).all(|y| {
                    x == y || (0..self.answers).all(|a| self.get(x, y, a, a).is_zero())
                })
            })
    }

    /// Alice's marginal p(a|x), read off the y = 0 block. Meaningful when
    /// the correlation is nonsignaling.
    pub fn alice_marginal(&self, x: usize, a: usize) -> Rational {
        (0..self.answers).map(|b| self.get(x, 0, a, b)).sum()
    }

    pub fn bob_marginal(&self, y: usize, b: usize) -> Rational {
        (0..self.answers).map(|a| self.get(0, y, a, b)).sum()
    }

    /// `corr <X> <A>` header, then `x y a b num/den` per nonzero entry in
    /// lexicographic order.
    pub fn to_text(&self) -> String {
        let mut s = format!("corr {} {}\n", self.questions, self.answers);
        for x in 0..self.questions {
            for y in 0..self.questions {
                for a in 0..self.answers {
                    for b in 0..self.answers {
                        let p = self.get(x, y, a, b);
                        if !p.is_zero() {
                            let _ = writeln!(s, "{x} {y} {a} {b} {}", format_ratio(p));
                        }
                    }
                }
            }
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty correlation file".into()))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        let (questions, answers) = match parts.as_slice() {
            ["corr", q, a] => (
                q.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad question count {q:?}")))?,
                a.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad answer count {a:?}")))?,
            ),
            _ => return Err(Error::Parse(format!("bad corr header {header:?}"))),
        };
        let mut table = vec![Rational::zero(); questions * questions * answers * answers];
        for line in lines {
            let words: Vec<&str> = line.split_whitespace().collect();
            let [x, y, a, b, v] = words.as_slice() else {
                return Err(Error::Parse(format!("expected `x y a b p`, got {line:?}")));
            };
            let parse_idx = |w: &str, lim: usize, what: &str| -> Result<usize> {
                let i: usize = w
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad {what} {w:?}")))?;
                if i >= lim {
                    return Err(Error::Parse(format!("{what} {i} out of range")));
                }
                Ok(i)
            };
            let x = parse_idx(x, questions, "question")?;
            let y = parse_idx(y, questions, "question")?;
            let a = parse_idx(a, answers, "answer")?;
            let b = parse_idx(b, answers, "answer")?;
            table[((x * questions + y) * answers + a) * answers + b] = parse_ratio(v)?;
        }
        Correlation::new(questions, answers, table)
    }
}

/// A pair of deterministic answer functions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeterministicStrategy {
    pub alice: Vec<usize>,
    pub bob: Vec<usize>,
}

impl DeterministicStrategy {
    /// The induced 0/1 correlation.
    pub fn correlation(&self, answers: usize) -> Correlation {
        let q = self.alice.len();
        let mut table = vec![Rational::zero(); q * q * answers * answers];
        for x in 0..q {
            for y in 0..q {
                let a = self.alice[x];
                let b = self.bob[y];
                table[((x * q + y) * answers + a) * answers + b] = Rational::one();
            }
        }
        Correlation::new(q, answers, table).expect("point masses normalize")
    }
}

/// Exact winning probability (1/|X|^2) sum V(x,y,a,b) p(a,b|x,y).
pub fn winning_probability(game: &Game, corr: &Correlation) -> Result<Rational> {
    if game.num_questions() != corr.questions() || game.num_answers() != corr.answers() {
        return Err(Error::ShapeMismatch(format!(
            "game is {}x{}, correlation is {}x{}",
            game.num_questions(),
            game.num_answers(),
            corr.questions(),
            corr.answers()
        )));
    }
    let q = game.num_questions();
    if q == 0 {
        return Ok(Rational::one());
    }
    let mut total = Rational::zero();
    for x in 0..q {
        for y in 0..q {
            for a in 0..game.num_answers() {
                for b in 0..game.num_answers() {
                    if game.wins(x, y, a, b) {
                        let p = corr.get(x, y, a, b);
                        if !p.is_zero() {
                            total += p;
                        }
                    }
                }
            }
        }
    }
    Ok(total / rat((q * q) as i64, 1))
}

/// Answers with at least one winning row for each question, one fallback if
/// everything is pruned. Pruning is value-preserving: a never-winning answer
/// contributes nothing no matter the opponent.
fn alice_candidates(game: &Game) -> Vec<Vec<usize>> {
    let q = game.num_questions();
    let n = game.num_answers();
    (0..q)
        .map(|x| {
            let c: Vec<usize> = (0..n)
                .filter(|&a| {
                    (0..q).any(|y| (0..n).any(|b| game.wins(x, y, a, b)))
                })
                .collect();
            if c.is_empty() {
                vec![0]
            } else {
                c
            }
        })
        .collect()
}

fn bob_candidates(game: &Game) -> Vec<Vec<usize>> {
    let q = game.num_questions();
    let n = game.num_answers();
    (0..q)
        .map(|y| {
            let c: Vec<usize> = (0..n)
                .filter(|&b| {
                    (0..q).any(|x| (0..n).any(|a| game.wins(x, y, a, b)))
                })
                .collect();
            if c.is_empty() {
                vec![0]
            } else {
                c
            }
        })
        .collect()
}

/// Lexicographically first f with V(x,y,f(x),f(y)) = 1 for all x,y, found
/// by backtracking over pruned candidates. For a synchronous game a perfect
/// strategy pair forces f_A = f_B on the diagonal, so searching symmetric
/// strategies decides whether the classical value is 1.
pub fn perfect_symmetric_strategy(game: &Game) -> Option<Vec<usize>> {
    let q = game.num_questions();
    if q == 0 {
        return Some(Vec::new());
    }
    if game.num_answers() == 0 {
        return None;
    }
    let cands = alice_candidates(game);
    let mut f: Vec<usize> = Vec::with_capacity(q);
    fn rec(game: &Game, cands: &[Vec<usize>], f: &mut Vec<usize>) -> bool {
        let x = f.len();
        if x == game.num_questions() {
            return true;
        }
        'cand: for &a in &cands[x] {
            if !game.wins(x, x, a, a) {
                continue;
            }
            for (x2, &a2) in f.iter().enumerate() {
                if !game.wins(x, x2, a, a2) || !game.wins(x2, x, a2, a) {
                    continue 'cand;
                }
            }
            f.push(a);
            if rec(game, cands, f) {
                return true;
            }
            f.pop();
        }
        false
    }
    if rec(game, &cands, &mut f) {
        Some(f)
    } else {
        None
    }
}

/// Exact classical value by enumeration over pruned deterministic pairs.
///
/// A perfect synchronous strategy is searched first; when one exists it is
/// the lexicographically first maximizer and the enumeration is skipped.
/// Otherwise Alice's functions are enumerated (parallel over a partition of
/// the odometer space) and Bob's best reply is chosen per question, which
/// realizes the inner maximum exactly.
pub fn classical_value(game: &Game, synchronous: bool) -> Result<(Rational, DeterministicStrategy)> {
    classical_value_with_cap(game, synchronous, DEFAULT_CLASSICAL_CAP)
}

pub fn classical_value_with_cap(
    game: &Game,
    synchronous: bool,
    cap: u128,
) -> Result<(Rational, DeterministicStrategy)> {
    let q = game.num_questions();
    if q == 0 {
        return Ok((
            Rational::one(),
            DeterministicStrategy {
                alice: Vec::new(),
                bob: Vec::new(),
            },
        ));
    }
    if game.num_answers() == 0 {
        return Err(Error::InvalidInput("game has no answers".into()));
    }

    if game.is_synchronous() {
        if let Some(f) = perfect_symmetric_strategy(game) {
            return Ok((
                Rational::one(),
                DeterministicStrategy {
                    alice: f.clone(),
                    bob: f,
                },
            ));
        }
    }

    let a_cands = alice_candidates(game);
    let b_cands = bob_candidates(game);
    let space: u128 = a_cands
        .iter()
        .map(|c| c.len() as u128)
        .product();
    if space > cap {
        return Err(Error::SizeLimit {
            what: "classical_value strategy space",
            got: space.min(usize::MAX as u128) as usize,
            cap: cap.min(usize::MAX as u128) as usize,
        });
    }

    let decode = |mut idx: u128| -> Vec<usize> {
        let mut f = vec![0usize; q];
        for x in (0..q).rev() {
            let len = a_cands[x].len() as u128;
            f[x] = a_cands[x][(idx % len) as usize];
            idx /= len;
        }
        f
    };

    let evaluate = |f_a: &[usize]| -> (usize, Vec<usize>) {
        if synchronous {
            let mut wins = 0usize;
            for x in 0..q {
                for y in 0..q {
                    if game.wins(x, y, f_a[x], f_a[y]) {
                        wins += 1;
                    }
                }
            }
            (wins, f_a.to_vec())
        } else {
            // Bob's reply decouples per question: wins(f_A, f_B) splits as a
            // sum over y of W(y, f_B(y)).
            let mut wins = 0usize;
            let mut f_b = vec![0usize; q];
            for y in 0..q {
                let mut best = 0usize;
                let mut best_b = b_cands[y][0];
                for &b in &b_cands[y] {
                    let w = (0..q).filter(|&x| game.wins(x, y, f_a[x], b)).count();
                    if w > best {
                        best = w;
                        best_b = b;
                    }
                }
                wins += best;
                f_b[y] = best_b;
            }
            (wins, f_b)
        }
    };

    let total = space as u64;
    let best = (0..total)
        .into_par_iter()
        .map(|i| {
            let f_a = decode(i as u128);
            let (wins, f_b) = evaluate(&f_a);
            (wins, std::cmp::Reverse(i), f_a, f_b)
        })
        .reduce(
            || (0, std::cmp::Reverse(u64::MAX), Vec::new(), Vec::new()),
            |acc, item| {
                // max wins; ties resolved toward the smallest enumeration index
                if (item.0, item.1) > (acc.0, acc.1) {
                    item
                } else {
                    acc
                }
            },
        );
    let (wins, _, f_a, f_b) = best;
    Ok((
        rat(wins as i64, (q * q) as i64),
        DeterministicStrategy {
            alice: f_a,
            bob: f_b,
        },
    ))
}

/// The perfect nonsignaling correlation of a bipartite graph whose left
/// vertices all have degree exactly 2.
///
/// Mass sits on winning pairs only: 1/2 on the diagonal, 1/2 on the two
/// disjoint pairs that cover the shared neighbourhood when there is one,
/// and 1/4 uniformly when the neighbourhoods are disjoint.
pub fn ns_left_degree2_corr(g: &BipartiteGraph) -> Result<Correlation> {
    for l in 0..g.n_left() {
        if g.left_degree(l) != 2 {
            return Err(Error::Precondition(format!(
                "left vertex {l} has degree {}, want 2",
                g.left_degree(l)
            )));
        }
    }
    let q = g.n_left();
    let n = g.edges().len();
    let mut table = vec![Rational::zero(); q * q * n * n];
    let mut set = |x: usize, y: usize, a: usize, b: usize, v: Rational| {
        table[((x * q + y) * n + a) * n + b] = v;
    };
    for v1 in 0..q {
        let e1s = g.incident_edges(v1);
        for v2 in 0..q {
            let e2s = g.incident_edges(v2);
            if v1 == v2 {
                for &e in &e1s {
                    set(v1, v2, e, e, rat(1, 2));
                }
                continue;
            }
            let shared: Vec<usize> = g
                .left_neighbors(v1)
                .iter()
                .filter(|r| g.left_neighbors(v2).contains(r))
                .copied()
                .collect();
            for &a in &e1s {
                for &b in &e2s {
                    let (_, r1) = g.edges()[a];
                    let (_, r2) = g.edges()[b];
                    if shared.is_empty() {
                        set(v1, v2, a, b, rat(1, 4));
                    } else if r1 != r2 && shared.iter().all(|&s| s == r1 || s == r2) {
                        set(v1, v2, a, b, rat(1, 2));
                    }
                }
            }
        }
    }
    Correlation::new(q, n, table)
}

/// Perfect nonsignaling correlation from the forced-matching/degree-2 split
/// of the sharp reduction: forced left vertices answer deterministically,
/// the rest follow the degree-2 rule on the trimmed subgraph.
pub fn ns_from_sharp(g: &BipartiteGraph) -> Option<Correlation> {
    let (p, s) = degree2_decomposition(g)?;
    let q = g.n_left();
    let n = g.edges().len();
    let mut forced_edge: Vec<Option<usize>> = vec![None; q];
    for &(l, r) in &p.edges {
        forced_edge[l] = Some(g.edge_index(l, r).expect("forced edge exists in g"));
    }
    // distribution of each left vertex: [(edge index in g, mass)]
    let dist: Vec<Vec<(usize, Rational)>> = (0..q)
        .map(|l| match forced_edge[l] {
            Some(e) => vec![(e, Rational::one())],
            None => s
                .left_neighbors(l)
                .iter()
                .map(|&r| (g.edge_index(l, r).expect("S is a subgraph"), rat(1, 2)))
                .collect(),
        })
        .collect();

    let mut table = vec![Rational::zero(); q * q * n * n];
    let mut set = |x: usize, y: usize, a: usize, b: usize, v: Rational| {
        table[((x * q + y) * n + a) * n + b] = v;
    };
    for v1 in 0..q {
        for v2 in 0..q {
            match (forced_edge[v1], forced_edge[v2]) {
                (Some(e1), Some(e2)) => {
                    let e2 = if v1 == v2 { e1 } else { e2 };
                    set(v1, v2, e1, e2, Rational::one());
                }
                (Some(e1), None) => {
                    for (e2, m) in &dist[v2] {
                        set(v1, v2, e1, *e2, m.clone());
                    }
                }
                (None, Some(e2)) => {
                    for (e1, m) in &dist[v1] {
                        set(v1, v2, *e1, e2, m.clone());
                    }
                }
                (None, None) => {
                    if v1 == v2 {
                        for (e, _) in &dist[v1] {
                            set(v1, v2, *e, *e, rat(1, 2));
                        }
                        continue;
                    }
                    let n1 = s.left_neighbors(v1);
                    let n2 = s.left_neighbors(v2);
                    let shared: Vec<usize> =
                        n1.iter().filter(|r| n2.contains(r)).copied().collect();
                    for (e1, _) in &dist[v1] {
                        for (e2, _) in &dist[v2] {
                            let (_, r1) = g.edges()[*e1];
                            let (_, r2) = g.edges()[*e2];
                            if shared.is_empty() {
                                set(v1, v2, *e1, *e2, rat(1, 4));
                            } else if r1 != r2 && shared.iter().all(|&sv| sv == r1 || sv == r2) {
                                set(v1, v2, *e1, *e2, rat(1, 2));
                            }
                        }
                    }
                }
            }
        }
    }
    Some(Correlation::new(q, n, table).expect("construction normalizes"))
}

/// Perfect nonsignaling correlation for the perfect matching game on an odd
/// cycle, n >= 5. Each player answers with the forward or backward edge at
/// their vertex under a fixed orientation.
///
/// At cyclic distance 1 the winning orientation pairs are head-to-head; at
/// distance 2 the forward edge at x and the backward edge at y collide in
/// the middle vertex, and the unique nonsignaling completion with uniform
/// marginals puts 1/2 on the two aligned pairs; from distance 3 on all four
/// pairs are disjoint and carry 1/4 each.
pub fn ns_odd_cycle_corr(n: usize) -> Result<Correlation> {
    if n < 5 || n % 2 == 0 {
        return Err(Error::Precondition(format!(
            "odd cycle correlation needs odd n >= 5, got {n}"
        )));
    }
    let g = Graph::cycle(n)?;
    let fwd: Vec<usize> = (0..n)
        .map(|x| g.edge_index(x, (x + 1) % n).expect("cycle edge"))
        .collect();
    let back: Vec<usize> = (0..n)
        .map(|x| g.edge_index((x + n - 1) % n, x).expect("cycle edge"))
        .collect();
    let m = g.edge_count();
    let mut table = vec![Rational::zero(); n * n * m * m];
    let mut add = |x: usize, y: usize, a: usize, b: usize, v: Rational| {
        table[((x * n + y) * m + a) * m + b] += v;
    };
    for x in 0..n {
        for y in 0..n {
            let d = {
                let fwd_d = (y + n - x) % n;
                fwd_d.min(n - fwd_d)
            };
            match d {
                0 => {
                    add(x, y, fwd[x], fwd[y], rat(1, 2));
                    add(x, y, back[x], back[y], rat(1, 2));
                }
                1 => {
                    add(x, y, fwd[x], back[y], rat(1, 2));
                    add(x, y, back[x], fwd[y], rat(1, 2));
                }
                2 => {
                    add(x, y, fwd[x], fwd[y], rat(1, 2));
                    add(x, y, back[x], back[y], rat(1, 2));
                }
                _ => {
                    add(x, y, fwd[x], fwd[y], rat(1, 4));
                    add(x, y, fwd[x], back[y], rat(1, 4));
                    add(x, y, back[x], fwd[y], rat(1, 4));
                    add(x, y, back[x], back[y], rat(1, 4));
                }
            }
        }
    }
    Correlation::new(n, m, table)
}

/// Builds a perfect nonsignaling correlation for PM_G out of a rational
/// triangle-avoiding fractional perfect matching.
///
/// Scale f by the lcm r of its denominators to integer multiplicities h;
/// on the diagonal play f itself. For x != x', expand each neighbour y of x
/// into h(xy) copies, match the copy sets of x and x' across distinct
/// vertices (Hall's condition holds because triangle sums are bounded), and
/// emit the matched-copy counts divided by r, with the shared edge xx'
/// answered by both players with mass f(xx').
pub fn fpm_to_ns_correlation(g: &Graph, f: &FractionalMatching) -> Result<Correlation> {
    f.check(g)?;
    f.check_triangle_bound(g)?;
    let n = g.n();
    let m = g.edge_count();
    if n == 0 {
        return Correlation::new(0, m, Vec::new());
    }
    let r: num_bigint::BigInt = f
        .weights()
        .iter()
        .fold(num_bigint::BigInt::from(1), |acc, w| {
            num_integer::lcm(acc, w.denom().clone())
        });
    let r_rat = Rational::from_integer(r.clone());
    let h: Vec<num_bigint::BigInt> = f
        .weights()
        .iter()
        .map(|w| (w * &r_rat).to_integer())
        .collect();
    let h_usize = |e: usize| -> usize {
        use num_traits::ToPrimitive;
        h[e].to_usize().expect("desk-scale multiplicity")
    };

    let mut table = vec![Rational::zero(); n * n * m * m];
    let mut set = |x: usize, y: usize, a: usize, b: usize, v: Rational| {
        table[((x * n + y) * m + a) * m + b] = v;
    };

    for x in 0..n {
        for &e in &g.incident_edges(x) {
            let w = f.weight(e).clone();
            if !w.is_zero() {
                set(x, x, e, e, w);
            }
        }
    }

    for x in 0..n {
        for xp in x + 1..n {
            let k_edge = g.edge_index(x, xp);
            let k = k_edge.map_or(0, h_usize);
            // copy lists ordered by (vertex, copy index)
            let a_part: Vec<usize> = g
                .neighbors(x)
                .iter()
                .filter(|&&y| y != xp)
                .flat_map(|&y| {
                    let e = g.edge_index(x, y).expect("neighbour edge");
                    std::iter::repeat(y).take(h_usize(e))
                })
                .collect();
            let b_part: Vec<usize> = g
                .neighbors(xp)
                .iter()
                .filter(|&&y| y != x)
                .flat_map(|&y| {
                    let e = g.edge_index(xp, y).expect("neighbour edge");
                    std::iter::repeat(y).take(h_usize(e))
                })
                .collect();
            debug_assert_eq!(a_part.len(), b_part.len());
            let hgraph = BipartiteGraph::new(
                a_part.len(),
                b_part.len(),
                a_part.iter().enumerate().flat_map(|(i, &y)| {
                    b_part
                        .iter()
                        .enumerate()
                        .filter(move |&(_, &yp)| yp != y)
                        .map(move |(j, _)| (i, j))
                }),
            )
            .expect("copy graph is valid");
            let matching = match l_perfect_matching(&hgraph) {
                LMatchingOutcome::Matching(mm) => mm,
                LMatchingOutcome::HallViolator(_) => {
                    unreachable!("Hall's condition holds for triangle-avoiding matchings")
                }
            };
            // count matched copies per (y, y') pair
            let mut counts: std::collections::BTreeMap<(usize, usize), usize> =
                std::collections::BTreeMap::new();
            for &(i, j) in &matching.edges {
                *counts.entry((a_part[i], b_part[j])).or_insert(0) += 1;
            }
            if let Some(e) = k_edge {
                if k > 0 {
                    // both answer the shared edge
                    set(x, xp, e, e, f.weight(e).clone());
                    set(xp, x, e, e, f.weight(e).clone());
                }
            }
            for (&(y, yp), &c) in &counts {
                let e1 = g.edge_index(x, y).expect("edge");
                let e2 = g.edge_index(xp, yp).expect("edge");
                let mass = rat(c as i64, 1) / &r_rat;
                set(x, xp, e1, e2, mass.clone());
                set(xp, x, e2, e1, mass);
            }
        }
    }
    Correlation::new(n, m, table)
}

/// Extracts edge weights from the diagonal marginals of a nonsignaling
/// synchronous perfect correlation for PM_G, and checks they form a
/// triangle-avoiding fractional perfect matching.
///
/// Synchronicity pins the marginals to the diagonal (p(e|x) = p(e,e|x,x));
/// the two-endpoint consistency p(e,e|u,u) = p(e,e|v,v) is checked
/// explicitly and reported when violated.
pub fn marginals_to_fpm(corr: &Correlation, g: &Graph) -> Result<FractionalMatching> {
    let game = pm_game(g);
    if corr.questions() != game.num_questions() || corr.answers() != game.num_answers() {
        return Err(Error::ShapeMismatch(
            "correlation does not match PM game shape".into(),
        ));
    }
    if !corr.is_nonsignaling() {
        return Err(Error::Precondition(
            "marginal extraction needs a nonsignaling correlation".into(),
        ));
    }
    if !corr.is_synchronous() {
        return Err(Error::Precondition(
            "marginal extraction needs a synchronous correlation".into(),
        ));
    }
    let value = winning_probability(&game, corr)?;
    if !value.is_one() {
        return Err(Error::Precondition(format!(
            "correlation wins with probability {value}, want exactly 1"
        )));
    }
    let mut weights = Vec::with_capacity(g.edge_count());
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let from_u = corr.get(u, u, e, e).clone();
        let from_v = corr.get(v, v, e, e).clone();
        if from_u != from_v {
            return Err(Error::Precondition(format!(
                "marginal identity p({e},{e}|{u},{u}) = p({e},{e}|{v},{v}) fails: {from_u} vs {from_v}"
            )));
        }
        weights.push(from_u);
    }
    let fm = FractionalMatching::new(g, weights)?;
    fm.check_triangle_bound(g)?;
    Ok(fm)
}
