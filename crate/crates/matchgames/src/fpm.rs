//! Fractional perfect matchings as exact feasibility programs: plain, and
//! with the per-triangle weight bound.

use num_traits::One;

use crate::error::{Error, Result};
use crate::graph::{triangles, Graph};
use crate::lp::{solve_lp, LinearProgram, LpOutcome, Rel};
use crate::rational::{in_unit_interval, Rational};

/// Edge weights f: E -> [0,1] with weight sum exactly 1 around each vertex,
/// indexed by the graph's edge order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractionalMatching {
    weights: Vec<Rational>,
}

impl FractionalMatching {
    pub fn new(g: &Graph, weights: Vec<Rational>) -> Result<Self> {
        if weights.len() != g.edge_count() {
            return Err(Error::ShapeMismatch(format!(
                "{} weights for {} edges",
                weights.len(),
                g.edge_count()
            )));
        }
        let fm = FractionalMatching { weights };
        fm.check(g)?;
        Ok(fm)
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn weight(&self, edge: usize) -> &Rational {
        &self.weights[edge]
    }

    /// Exact validity: all weights in [0,1] and unit sums at every vertex.
    pub fn check(&self, g: &Graph) -> Result<()> {
        for (i, w) in self.weights.iter().enumerate() {
            if !in_unit_interval(w) {
                return Err(Error::Precondition(format!(
                    "weight {w} of edge {i} outside [0,1]"
                )));
            }
        }
        for v in 0..g.n() {
            let sum: Rational = g.incident_edges(v).iter().map(|&e| &self.weights[e]).sum();
            if !sum.is_one() {
                return Err(Error::Precondition(format!(
                    "vertex {v} has incident weight {sum}, want 1"
                )));
            }
        }
        Ok(())
    }

    /// Exact triangle sums; `Ok` iff every triangle carries weight <= 1.
    pub fn check_triangle_bound(&self, g: &Graph) -> Result<()> {
        for t in triangles(g) {
            let [u, v, w] = t;
            let sum: Rational = [(u, v), (u, w), (v, w)]
                .into_iter()
                .map(|(a, b)| &self.weights[g.edge_index(a, b).expect("triangle edge")])
                .sum();
            if sum > Rational::one() {
                return Err(Error::Precondition(format!(
                    "triangle {t:?} carries weight {sum} > 1"
                )));
            }
        }
        Ok(())
    }
}

fn fpm_program(g: &Graph, avoid_triangles: bool) -> LinearProgram {
    let m = g.edge_count();
    let mut lp = LinearProgram::new(m);
    for v in 0..g.n() {
        let terms = g
            .incident_edges(v)
            .into_iter()
            .map(|e| (e, Rational::one()))
            .collect();
        lp.add_constraint(terms, Rel::Eq, Rational::one())
            .expect("edge indices are in range");
    }
    if avoid_triangles {
        for [u, v, w] in triangles(g) {
            let terms = [(u, v), (u, w), (v, w)]
                .into_iter()
                .map(|(a, b)| {
                    (
                        g.edge_index(a, b).expect("triangle edge"),
                        Rational::one(),
                    )
                })
                .collect();
            lp.add_constraint(terms, Rel::Le, Rational::one())
                .expect("edge indices are in range");
        }
    }
    lp
}

fn solve_fpm(g: &Graph, avoid_triangles: bool) -> Option<FractionalMatching> {
    // An isolated vertex makes the per-vertex row an empty sum = 1.
    if (0..g.n()).any(|v| g.degree(v) == 0) {
        return None;
    }
    let lp = fpm_program(g, avoid_triangles);
    match solve_lp(&lp) {
        LpOutcome::Optimal { point, .. } => {
            let fm = FractionalMatching { weights: point };
            fm.check(g).expect("LP solution satisfies vertex equalities");
            if avoid_triangles {
                fm.check_triangle_bound(g)
                    .expect("LP solution satisfies triangle rows");
            }
            Some(fm)
        }
        LpOutcome::Infeasible => None,
        LpOutcome::Unbounded => unreachable!("feasibility program has zero objective"),
    }
}

/// Exact fractional perfect matching witness, if one exists.
pub fn fractional_pm(g: &Graph) -> Option<FractionalMatching> {
    solve_fpm(g, false)
}

/// Fractional perfect matching with every triangle's weight sum at most 1.
pub fn triangle_avoiding_fpm(g: &Graph) -> Option<FractionalMatching> {
    solve_fpm(g, true)
}

/// The feasibility program itself, exposed for duality spot-checks.
pub fn fpm_lp(g: &Graph, avoid_triangles: bool) -> LinearProgram {
    fpm_program(g, avoid_triangles)
}
