//! Nonlocal games with uniform question pairs and a dense 0/1 verification
//! table, plus the five matching-game constructors.
//!
//! Answers are indexed by the owning structure's lexicographic edge order
//! (or hyperedge order / right-vertex order), so tables are reproducible
//! across runs and modules.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{double_cover, BipartiteGraph, Graph, Hypergraph};

/// A synchronous-or-not nonlocal game (X, A, V) with the uniform
/// distribution on X x X.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Game {
    questions: usize,
    answers: usize,
    table: Vec<bool>,
    /// Optional human labels: per answer, the vertex list of the edge or
    /// hyperedge it stands for.
    answer_labels: Vec<Vec<usize>>,
}

impl Game {
    pub fn new(questions: usize, answers: usize, table: Vec<bool>) -> Result<Self> {
        if table.len() != questions * questions * answers * answers {
            return Err(Error::ShapeMismatch(format!(
                "table has {} entries, want {}",
                table.len(),
                questions * questions * answers * answers
            )));
        }
        Ok(Game {
            questions,
            answers,
            table,
            answer_labels: Vec::new(),
        })
    }

    pub fn with_labels(mut self, labels: Vec<Vec<usize>>) -> Result<Self> {
        if labels.len() != self.answers {
            return Err(Error::ShapeMismatch(format!(
                "{} labels for {} answers",
                labels.len(),
                self.answers
            )));
        }
        self.answer_labels = labels;
        Ok(self)
    }

    pub fn num_questions(&self) -> usize {
        self.questions
    }

    pub fn num_answers(&self) -> usize {
        self.answers
    }

    pub fn answer_labels(&self) -> &[Vec<usize>] {
        &self.answer_labels
    }

    #[inline]
    fn idx(&self, x: usize, y: usize, a: usize, b: usize) -> usize {
        ((x * self.questions + y) * self.answers + a) * self.answers + b
    }

    /// V(x, y, a, b)
    #[inline]
    pub fn wins(&self, x: usize, y: usize, a: usize, b: usize) -> bool {
        self.table[self.idx(x, y, a, b)]
    }

    /// V(x,x,a,b) = 0 whenever a != b.
    pub fn is_synchronous(&self) -> bool {
        (0..self.questions).all(|x| {
            (0..self.answers)
                .all(|a| (0..self.answers).all(|b| a == b || !self.wins(x, x, a, b)))
        })
    }

    /// Synchronous and V(x,y,a,a) = 0 whenever x != y.
    pub fn is_bisynchronous(&self) -> bool {
        self.is_synchronous()
            && (0..self.questions).all(|x| {
                (0..self.questions)
                    .all(|y| x == y || (0..self.answers).all(|a| !self.wins(x, y, a, a)))
            })
    }

    /// Serialization: `game <X> <A>` header, the bit table as one 0/1 line
    /// per question pair, then optional `answer <i> <vertices...>` labels.
    pub fn to_text(&self) -> String {
        let mut s = format!("game {} {}\n", self.questions, self.answers);
        for x in 0..self.questions {
            for y in 0..self.questions {
                let mut line = String::with_capacity(self.answers * self.answers);
                for a in 0..self.answers {
                    for b in 0..self.answers {
                        line.push(if self.wins(x, y, a, b) { '1' } else { '0' });
                    }
                }
                s.push_str(&line);
                s.push('\n');
            }
        }
        for (i, lab) in self.answer_labels.iter().enumerate() {
            let words: Vec<String> = lab.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(s, "answer {i} {}", words.join(" "));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty game file".into()))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        let (questions, answers) = match parts.as_slice() {
            ["game", q, a] => (
                q.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad question count {q:?}")))?,
                a.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad answer count {a:?}")))?,
            ),
            _ => return Err(Error::Parse(format!("bad game header {header:?}"))),
        };
        let mut table = Vec::with_capacity(questions * questions * answers * answers);
        let mut labels = vec![Vec::new(); answers];
        let mut have_labels = false;
        for _ in 0..questions * questions {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse("truncated game table".into()))?;
            let line = line.trim();
            if line.len() != answers * answers {
                return Err(Error::Parse(format!(
                    "table row has {} bits, want {}",
                    line.len(),
                    answers * answers
                )));
            }
            for ch in line.chars() {
                match ch {
                    '0' => table.push(false),
                    '1' => table.push(true),
                    _ => return Err(Error::Parse(format!("bad table character {ch:?}"))),
                }
            }
        }
        for line in lines {
            let words: Vec<&str> = line.split_whitespace().collect();
            match words.as_slice() {
                ["answer", i, rest @ ..] => {
                    let i: usize = i
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad answer index {i:?}")))?;
                    if i >= answers {
                        return Err(Error::Parse(format!("answer index {i} out of range")));
                    }
                    labels[i] = rest
                        .iter()
                        .map(|w| {
                            w.parse()
                                .map_err(|_| Error::Parse(format!("bad label vertex {w:?}")))
                        })
                        .collect::<Result<_>>()?;
                    have_labels = true;
                }
                _ => return Err(Error::Parse(format!("unexpected line {line:?}"))),
            }
        }
        let g = Game::new(questions, answers, table)?;
        if have_labels {
            g.with_labels(labels)
        } else {
            Ok(g)
        }
    }
}

fn build_table(
    questions: usize,
    answers: usize,
    pred: impl Fn(usize, usize, usize, usize) -> bool,
) -> Vec<bool> {
    let mut table = Vec::with_capacity(questions * questions * answers * answers);
    for x in 0..questions {
        for y in 0..questions {
            for a in 0..answers {
                for b in 0..answers {
                    table.push(pred(x, y, a, b));
                }
            }
        }
    }
    table
}

/// Bipartite L-perfect matching game: questions are left vertices, answers
/// are edges. Win iff both answers cover their questions and the answers are
/// equal or disjoint.
pub fn bpm_game(g: &BipartiteGraph) -> Game {
    let edges = g.edges();
    let pred = |x: usize, y: usize, a: usize, b: usize| {
        let (l1, r1) = edges[a];
        let (l2, r2) = edges[b];
        if l1 != x || l2 != y {
            return false;
        }
        let meet = l1 == l2 || r1 == r2;
        !meet || (l1 == l2 && r1 == r2)
    };
    let labels = edges.iter().map(|&(l, r)| vec![l, r]).collect();
    Game::new(g.n_left(), edges.len(), build_table(g.n_left(), edges.len(), pred))
        .expect("table is rectangular")
        .with_labels(labels)
        .expect("one label per answer")
}

/// Perfect matching game on a graph: questions are vertices, answers edges;
/// same intersection predicate.
pub fn pm_game(g: &Graph) -> Game {
    let edges = g.edges().to_vec();
    let pred = |x: usize, y: usize, a: usize, b: usize| {
        let (u1, v1) = edges[a];
        let (u2, v2) = edges[b];
        if u1 != x && v1 != x {
            return false;
        }
        if u2 != y && v2 != y {
            return false;
        }
        let meet = u1 == u2 || u1 == v2 || v1 == u2 || v1 == v2;
        !meet || (u1 == u2 && v1 == v2)
    };
    let labels = edges.iter().map(|&(u, v)| vec![u, v]).collect();
    Game::new(g.n(), edges.len(), build_table(g.n(), edges.len(), pred))
        .expect("table is rectangular")
        .with_labels(labels)
        .expect("one label per answer")
}

/// Fractional perfect matching game: by definition the bipartite matching
/// game of the double cover G x K2.
pub fn fpm_game(g: &Graph) -> Game {
    bpm_game(&double_cover(g))
}

/// Perfect matching game on a hypergraph.
pub fn hyper_pm_game(h: &Hypergraph) -> Game {
    let hs = h.hyperedges().to_vec();
    let contains = |e: &[usize], v: usize| e.binary_search(&v).is_ok();
    let intersects = |a: &[usize], b: &[usize]| {
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    };
    let pred = |x: usize, y: usize, a: usize, b: usize| {
        if !contains(&hs[a], x) || !contains(&hs[b], y) {
            return false;
        }
        !intersects(&hs[a], &hs[b]) || hs[a] == hs[b]
    };
    let labels = hs.clone();
    Game::new(h.n(), hs.len(), build_table(h.n(), hs.len(), pred))
        .expect("table is rectangular")
        .with_labels(labels)
        .expect("one label per answer")
}

/// Constrained isomorphism game ISO_C(G, H): questions are vertices of G,
/// answers vertices of H; wins require consistency, adjacency preservation
/// both ways, and both question-answer pairs inside the constraint graph C.
pub fn iso_constrained_game(g: &Graph, h: &Graph, c: &BipartiteGraph) -> Result<Game> {
    if c.n_left() != g.n() || c.n_right() != h.n() {
        return Err(Error::ShapeMismatch(format!(
            "constraint graph is {}x{}, want {}x{}",
            c.n_left(),
            c.n_right(),
            g.n(),
            h.n()
        )));
    }
    let pred = |x1: usize, x2: usize, y1: usize, y2: usize| {
        if !c.has_edge(x1, y1) || !c.has_edge(x2, y2) {
            return false;
        }
        if x1 == x2 {
            return y1 == y2;
        }
        if g.has_edge(x1, x2) {
            h.has_edge(y1, y2)
        } else {
            y1 != y2 && !h.has_edge(y1, y2)
        }
    };
    let labels = (0..h.n()).map(|v| vec![v]).collect();
    Game::new(g.n(), h.n(), build_table(g.n(), h.n(), pred))?.with_labels(labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bpm_small_cases() {
        let g = bpm_game(&BipartiteGraph::complete(1, 1));
        assert_eq!(g.num_questions(), 1);
        assert_eq!(g.num_answers(), 1);
        assert!(g.wins(0, 0, 0, 0));

        let g = bpm_game(&BipartiteGraph::complete(3, 2));
        assert_eq!(g.num_questions(), 3);
        assert_eq!(g.num_answers(), 6);
        // diagonal requires equal answers
        for x in 0..3 {
            for a in 0..6 {
                for b in 0..6 {
                    if g.wins(x, x, a, b) {
                        assert_eq!(a, b);
                    }
                }
            }
        }
        assert!(g.is_synchronous());

        // isolated left vertex: its diagonal row is all zero
        let iso = BipartiteGraph::new(2, 1, [(0, 0)]).unwrap();
        let g = bpm_game(&iso);
        assert!((0..g.num_answers()).all(|a| (0..g.num_answers()).all(|b| !g.wins(1, 1, a, b))));
    }

    #[test]
    fn pm_cases() {
        let g = pm_game(&Graph::complete(2));
        assert!(g.wins(0, 0, 0, 0));
        assert!(g.wins(0, 1, 0, 0));
        let c5 = pm_game(&Graph::cycle(5).unwrap());
        assert_eq!(c5.num_questions(), 5);
        assert_eq!(c5.num_answers(), 5);
        assert!(c5.is_synchronous());
        // K3: distinct answers always lose (all edges pairwise intersect)
        let k3 = pm_game(&Graph::complete(3));
        for x in 0..3 {
            for y in 0..3 {
                for a in 0..3 {
                    for b in 0..3 {
                        if a != b {
                            assert!(!k3.wins(x, y, a, b));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn fpm_matches_paper_relaxation() {
        // Independent predicate: answers to x are oriented edges (x, w); win
        // iff (x1 = x2 -> w1 = w2) and (x1 != x2 -> w1 != w2).
        for g in [Graph::complete(2), Graph::cycle(5).unwrap(), Graph::complete(4)] {
            let game = fpm_game(&g);
            let dc = double_cover(&g);
            assert_eq!(game.num_answers(), dc.edge_count());
            for x1 in 0..game.num_questions() {
                for x2 in 0..game.num_questions() {
                    for a in 0..game.num_answers() {
                        for b in 0..game.num_answers() {
                            let (v1, w1) = dc.edges()[a];
                            let (v2, w2) = dc.edges()[b];
                            let expect = v1 == x1
                                && v2 == x2
                                && if x1 == x2 { w1 == w2 } else { w1 != w2 };
                            assert_eq!(game.wins(x1, x2, a, b), expect);
                        }
                    }
                }
            }
        }
        // definitional identity, bit for bit
        let g = Graph::cycle(5).unwrap();
        assert_eq!(fpm_game(&g), bpm_game(&double_cover(&g)));
        assert_eq!(fpm_game(&g).num_answers(), 10);
        // edgeless graph has no answers at all
        let e = Graph::new(2, []).unwrap();
        assert_eq!(fpm_game(&e).num_answers(), 0);
    }

    #[test]
    fn hyper_cases() {
        // single hyperedge covering everything: always winnable
        let h = Hypergraph::new(3, vec![vec![0, 1, 2]]).unwrap();
        let g = hyper_pm_game(&h);
        assert!((0..3).all(|x| (0..3).all(|y| g.wins(x, y, 0, 0))));
        // two disjoint pairs
        let h = Hypergraph::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        let g = hyper_pm_game(&h);
        assert!(g.wins(0, 2, 0, 1));
        assert!(!g.wins(0, 2, 0, 0)); // answer 0 does not cover question 2
        // a 2-uniform hypergraph read as a graph gives the same table
        let pair_graph = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(hyper_pm_game(&h).to_text(), pm_game(&pair_graph).to_text());
    }

    #[test]
    fn iso_constrained_cases() {
        let k2 = Graph::complete(2);
        let full = BipartiteGraph::complete(2, 2);
        let g = iso_constrained_game(&k2, &k2, &full).unwrap();
        // identity assignment wins on all question pairs
        for x1 in 0..2 {
            for x2 in 0..2 {
                assert!(g.wins(x1, x2, x1, x2));
            }
        }
        // constraint forcing a collision
        let edgeless = Graph::new(2, []).unwrap();
        let c = BipartiteGraph::new(2, 2, [(0, 0), (1, 0)]).unwrap();
        let g = iso_constrained_game(&edgeless, &edgeless, &c).unwrap();
        assert!(!g.wins(0, 1, 0, 0)); // distinct non-adjacent must answer distinct
        assert!(g.wins(0, 0, 0, 0));
        // dimension mismatch
        assert!(iso_constrained_game(&k2, &k2, &BipartiteGraph::complete(3, 2)).is_err());
    }

    #[test]
    fn synchronicity_checks() {
        assert!(bpm_game(&BipartiteGraph::complete(3, 2)).is_synchronous());
        assert!(pm_game(&Graph::complete(4)).is_synchronous());
        // PM_K4 is not bisynchronous: adjacent questions may both answer the
        // edge between them.
        assert!(!pm_game(&Graph::complete(4)).is_bisynchronous());
        // all-ones table is not synchronous once there are two answers
        let g = Game::new(1, 2, vec![true; 4]).unwrap();
        assert!(!g.is_synchronous());
        // every constructor output is synchronous
        assert!(fpm_game(&Graph::cycle(5).unwrap()).is_synchronous());
        assert!(hyper_pm_game(&Hypergraph::fano()).is_synchronous());
        let full = BipartiteGraph::complete(2, 2);
        assert!(
            iso_constrained_game(&Graph::complete(2), &Graph::complete(2), &full)
                .unwrap()
                .is_synchronous()
        );
    }

    #[test]
    fn game_text_round_trip() {
        let g = bpm_game(&BipartiteGraph::complete(3, 2));
        let t = g.to_text();
        let g2 = Game::from_text(&t).unwrap();
        assert_eq!(g, g2);
        assert_eq!(g2.to_text(), t);
        assert!(Game::from_text("game 2 2\n01\n").is_err()); // truncated
    }
}
