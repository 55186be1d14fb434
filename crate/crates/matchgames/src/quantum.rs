//! Numeric quantum tensor strategies: explicit optimal strategies for the
//! small bipartite matching games, strategy evaluation, and seesaw
//! optimization sweeps used as a numeric probe of the value bounds.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::Game;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

/// Tolerance for operator identities (projector, completeness).
pub const OP_TOL: f64 = 1e-9;
/// Tolerance for state normalization.
pub const STATE_TOL: f64 = 1e-12;

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub fn pauli_x() -> CMat {
    CMat::from_row_slice(2, 2, &[re(0.0), re(1.0), re(1.0), re(0.0)])
}

pub fn pauli_z() -> CMat {
    CMat::from_row_slice(2, 2, &[re(1.0), re(0.0), re(0.0), re(-1.0)])
}

/// A tensor strategy: local dimensions, shared state, and one PVM per
/// question per player (projectors indexed by answer; zero matrices are
/// legal PVM elements).
#[derive(Clone, Debug)]
pub struct QuantumStrategy {
    pub dim_a: usize,
    pub dim_b: usize,
    pub state: CVec,
    pub alice: Vec<Vec<CMat>>,
    pub bob: Vec<Vec<CMat>>,
}

fn frobenius(m: &CMat) -> f64 {
    m.norm()
}

impl QuantumStrategy {
    /// Checks projector identities and completeness to `OP_TOL` and the
    /// state norm to `STATE_TOL`.
    pub fn validate(&self) -> Result<()> {
        if self.state.len() != self.dim_a * self.dim_b {
            return Err(Error::ShapeMismatch(format!(
                "state has {} amplitudes for {}x{}",
                self.state.len(),
                self.dim_a,
                self.dim_b
            )));
        }
        if (self.state.norm() - 1.0).abs() > STATE_TOL {
            return Err(Error::Precondition(format!(
                "state norm {} is not 1",
                self.state.norm()
            )));
        }
        for (party, pvms, d) in [
            ("alice", &self.alice, self.dim_a),
            ("bob", &self.bob, self.dim_b),
        ] {
            for (x, pvm) in pvms.iter().enumerate() {
                let mut sum = CMat::zeros(d, d);
                for (a, p) in pvm.iter().enumerate() {
                    if p.nrows() != d || p.ncols() != d {
                        return Err(Error::ShapeMismatch(format!(
                            "{party} projector ({x},{a}) is {}x{}, want {d}x{d}",
                            p.nrows(),
                            p.ncols()
                        )));
                    }
                    if frobenius(&(p - p.adjoint())) > OP_TOL {
                        return Err(Error::Precondition(format!(
                            "{party} projector ({x},{a}) is not Hermitian"
                        )));
                    }
                    if frobenius(&(p * p - p)) > OP_TOL {
                        return Err(Error::Precondition(format!(
                            "{party} projector ({x},{a}) is not idempotent"
                        )));
                    }
                    sum += p;
                }
                let eye = CMat::identity(d, d);
                if frobenius(&(sum - eye)) > OP_TOL {
                    return Err(Error::Precondition(format!(
                        "{party} PVM for question {x} does not sum to identity"
                    )));
                }
            }
        }
        Ok(())
    }

    /// The state reshaped as a dim_a x dim_b matrix of amplitudes.
    fn state_matrix(&self) -> CMat {
        CMat::from_fn(self.dim_a, self.dim_b, |i, j| self.state[i * self.dim_b + j])
    }

    /// <psi| A (x) B |psi> = tr(Psi^dag A Psi B^T).
    pub fn pair_expectation(&self, a: &CMat, b: &CMat) -> Complex64 {
        let psi = self.state_matrix();
        (psi.adjoint() * a * &psi * b.transpose()).trace()
    }
}

/// Winning probability (1/|X|^2) sum V(x,y,a,b) <psi| A_xa (x) B_yb |psi>.
pub fn quantum_win_prob(game: &Game, strat: &QuantumStrategy) -> Result<f64> {
    strat.validate()?;
    let q = game.num_questions();
    let n = game.num_answers();
    if strat.alice.len() != q || strat.bob.len() != q {
        return Err(Error::ShapeMismatch(format!(
            "strategy answers {} questions, game asks {q}",
            strat.alice.len()
        )));
    }
    if q == 0 {
        return Ok(1.0);
    }
    if strat.alice.iter().chain(&strat.bob).any(|p| p.len() != n) {
        return Err(Error::ShapeMismatch("PVM arity != answer count".into()));
    }
    let mut total = Complex64::new(0.0, 0.0);
    for x in 0..q {
        for y in 0..q {
            for a in 0..n {
                if strat.alice[x][a].iter().all(|c| c.norm_sqr() == 0.0) {
                    continue;
                }
                for b in 0..n {
                    if game.wins(x, y, a, b) {
                        total += strat.pair_expectation(&strat.alice[x][a], &strat.bob[y][b]);
                    }
                }
            }
        }
    }
    let total = total / re((q * q) as f64);
    debug_assert!(total.im.abs() < OP_TOL, "imaginary residue {}", total.im);
    Ok(total.re)
}

/// A correlation table evaluated in floating point, with its worst
/// nonsignaling and normalization defects.
#[derive(Clone, Debug)]
pub struct FloatCorrelation {
    pub questions: usize,
    pub answers: usize,
    pub table: Vec<f64>,
}

impl FloatCorrelation {
    pub fn get(&self, x: usize, y: usize, a: usize, b: usize) -> f64 {
        self.table[((x * self.questions + y) * self.answers + a) * self.answers + b]
    }

    /// Worst marginal discrepancy over both parties.
    pub fn ns_residual(&self) -> f64 {
        let q = self.questions;
        let n = self.answers;
        let mut worst: f64 = 0.0;
        for y in 0..q {
            for b in 0..n {
                let sums: Vec<f64> = (0..q)
                    .map(|x| (0..n).map(|a| self.get(x, y, a, b)).sum())
                    .collect();
                for s in &sums {
                    worst = worst.max((s - sums[0]).abs());
                }
            }
        }
        for x in 0..q {
            for a in 0..n {
                let sums: Vec<f64> = (0..q)
                    .map(|y| (0..n).map(|b| self.get(x, y, a, b)).sum())
                    .collect();
                for s in &sums {
                    worst = worst.max((s - sums[0]).abs());
                }
            }
        }
        worst
    }

    pub fn normalization_residual(&self) -> f64 {
        let q = self.questions;
        let n = self.answers;
        let mut worst: f64 = 0.0;
        for x in 0..q {
            for y in 0..q {
                let s: f64 = (0..n)
                    .flat_map(|a| (0..n).map(move |b| (a, b)))
                    .map(|(a, b)| self.get(x, y, a, b))
                    .sum();
                worst = worst.max((s - 1.0).abs());
            }
        }
        worst
    }
}

/// The full p(a,b|x,y) table of a strategy.
pub fn correlation_of(strat: &QuantumStrategy) -> Result<FloatCorrelation> {
    strat.validate()?;
    let q = strat.alice.len();
    if strat.bob.len() != q {
        return Err(Error::ShapeMismatch("player question counts differ".into()));
    }
    let n = strat.alice.first().map_or(0, |p| p.len());
    let mut table = vec![0.0; q * q * n * n];
    for x in 0..q {
        for y in 0..q {
            for a in 0..n {
                for b in 0..n {
                    let v = strat.pair_expectation(&strat.alice[x][a], &strat.bob[y][b]);
                    table[((x * q + y) * n + a) * n + b] = v.re;
                }
            }
        }
    }
    Ok(FloatCorrelation {
        questions: q,
        answers: n,
        table,
    })
}

/// n two-dimensional involutions summing to zero:
/// A_v = cos(2 pi v / n) X + sin(2 pi v / n) Z. For n = 2 this degenerates
/// to {X, -X}.
pub fn sum_zero_observables(n: usize) -> Result<Vec<CMat>> {
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "need at least two observables, got {n}"
        )));
    }
    let x = pauli_x();
    let z = pauli_z();
    Ok((0..n)
        .map(|v| {
            let theta = 2.0 * std::f64::consts::PI * v as f64 / n as f64;
            &x * re(theta.cos()) + &z * re(theta.sin())
        })
        .collect())
}

/// PVM for a +-1 observable: (I + M)/2 for the first answer, (I - M)/2 for
/// the second.
fn observable_pvm(m: &CMat) -> (CMat, CMat) {
    let eye = CMat::identity(m.nrows(), m.ncols());
    ((&eye + m) * re(0.5), (&eye - m) * re(0.5))
}

/// The maximally entangled state on d (x) d.
fn maximally_entangled(d: usize) -> CVec {
    let mut v = CVec::zeros(d * d);
    for i in 0..d {
        v[i * d + i] = re(1.0 / (d as f64).sqrt());
    }
    v
}

/// The synchronous strategy on BPM_{K_{n,2}} built from observables with
/// zero sum: maximally entangled 2x2 state, Alice measuring the spectral
/// projectors of A_v, Bob the entrywise conjugates. Answer 2v + r stands
/// for the edge (v, r).
pub fn sum_zero_strategy(n: usize) -> Result<QuantumStrategy> {
    let obs = sum_zero_observables(n)?;
    let mut alice = Vec::with_capacity(n);
    for v in 0..n {
        let (p0, p1) = observable_pvm(&obs[v]);
        let mut pvm = vec![CMat::zeros(2, 2); 2 * n];
        pvm[2 * v] = p0;
        pvm[2 * v + 1] = p1;
        alice.push(pvm);
    }
    // real observables: Bob's conjugated projectors coincide with Alice's
    let bob = alice
        .iter()
        .map(|pvm| pvm.iter().map(|p| p.map(|c| c.conj())).collect())
        .collect();
    Ok(QuantumStrategy {
        dim_a: 2,
        dim_b: 2,
        state: maximally_entangled(2),
        alice,
        bob,
    })
}

/// The optimal strategy for BPM_{K_{3,2}}: three sum-zero observables at
/// 120 degrees; achieves 5/6.
pub fn k32_optimal_strategy() -> QuantumStrategy {
    sum_zero_strategy(3).expect("n = 3")
}

/// The dimension-1 classical embedding where Alice always answers the first
/// right vertex and Bob the second; achieves 1 - 1/n on BPM_{K_{n,2}}.
pub fn trivial_strategy(n: usize) -> Result<QuantumStrategy> {
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "K_{{n,2}} strategies need n >= 2, got {n}"
        )));
    }
    let one = CMat::identity(1, 1);
    let zero = CMat::zeros(1, 1);
    let mut alice = Vec::with_capacity(n);
    let mut bob = Vec::with_capacity(n);
    for v in 0..n {
        let mut pa = vec![zero.clone(); 2 * n];
        pa[2 * v] = one.clone();
        alice.push(pa);
        let mut pb = vec![zero.clone(); 2 * n];
        pb[2 * v + 1] = one.clone();
        bob.push(pb);
    }
    Ok(QuantumStrategy {
        dim_a: 1,
        dim_b: 1,
        state: CVec::from_element(1, re(1.0)),
        alice,
        bob,
    })
}

/// Embeds a deterministic strategy pair as a dimension-1 quantum strategy.
pub fn deterministic_embedding(
    questions: usize,
    answers: usize,
    f_alice: &[usize],
    f_bob: &[usize],
) -> Result<QuantumStrategy> {
    if f_alice.len() != questions || f_bob.len() != questions {
        return Err(Error::ShapeMismatch("strategy length != questions".into()));
    }
    let one = CMat::identity(1, 1);
    let zero = CMat::zeros(1, 1);
    let build = |f: &[usize]| -> Result<Vec<Vec<CMat>>> {
        f.iter()
            .map(|&a| {
                if a >= answers {
                    return Err(Error::ShapeMismatch(format!("answer {a} out of range")));
                }
                let mut pvm = vec![zero.clone(); answers];
                pvm[a] = one.clone();
                Ok(pvm)
            })
            .collect()
    };
    Ok(QuantumStrategy {
        dim_a: 1,
        dim_b: 1,
        state: CVec::from_element(1, re(1.0)),
        alice: build(f_alice)?,
        bob: build(f_bob)?,
    })
}

/// Projector onto the strictly positive eigenspace of a Hermitian matrix.
fn positive_eigenspace(h: &CMat) -> CMat {
    let d = h.nrows();
    let eig = h.clone().symmetric_eigen();
    let mut p = CMat::zeros(d, d);
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda > 0.0 {
            let v = eig.eigenvectors.column(k);
            p += v * v.adjoint();
        }
    }
    p
}

/// Outcome of a sweep: the best value over all restarts and the strategy
/// that attained it.
#[derive(Clone, Debug)]
pub struct SweepOutcome {
    pub best_value: f64,
    pub best_strategy: QuantumStrategy,
    pub restarts: usize,
    pub seed: u64,
}

/// Random-restart alternating optimization over dim_a x dim_b strategies.
///
/// Each question must have exactly two answers that ever win (true for the
/// K_{n,2} matching games, where a question's edges are its two incident
/// right vertices); the PVM improvement step is then an exact spectral
/// split. This is a numeric probe, not a certified optimum.
pub fn seesaw_sweep(
    game: &Game,
    dim: usize,
    restarts: usize,
    iterations: usize,
    seed: u64,
) -> Result<SweepOutcome> {
    let q = game.num_questions();
    let n = game.num_answers();
    if q == 0 || n == 0 {
        return Err(Error::InvalidInput("degenerate game".into()));
    }
    // effective answers per question, for either party
    let effective: Vec<Vec<usize>> = (0..q)
        .map(|x| {
            (0..n)
                .filter(|&a| {
                    (0..q).any(|y| (0..n).any(|b| game.wins(x, y, a, b) || game.wins(y, x, b, a)))
                })
                .collect()
        })
        .collect();
    if effective.iter().any(|e| e.len() != 2) {
        return Err(Error::InvalidInput(
            "seesaw sweep supports games with exactly two live answers per question".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(f64, QuantumStrategy)> = None;

    for _ in 0..restarts {
        let random_pvms = |rng: &mut ChaCha8Rng| -> Vec<Vec<CMat>> {
            (0..q)
                .map(|x| {
                    let v = CVec::from_fn(dim, |_, _| {
                        Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
                    });
                    let v = v.normalize();
                    let p0 = &v * v.adjoint();
                    let p1 = CMat::identity(dim, dim) - &p0;
                    let mut pvm = vec![CMat::zeros(dim, dim); n];
                    pvm[effective[x][0]] = p0;
                    pvm[effective[x][1]] = p1;
                    pvm
                })
                .collect()
        };
        let mut alice = random_pvms(&mut rng);
        let mut bob = random_pvms(&mut rng);
        let mut state = CVec::from_fn(dim * dim, |_, _| {
            Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        })
        .normalize();

        let mut last = f64::NEG_INFINITY;
        for _ in 0..iterations {
            // state step: top eigenvector of the game operator
            let mut gop = CMat::zeros(dim * dim, dim * dim);
            for x in 0..q {
                for y in 0..q {
                    for &a in &effective[x] {
                        for &b in &effective[y] {
                            if game.wins(x, y, a, b) {
                                gop += alice[x][a].kronecker(&bob[y][b]);
                            }
                        }
                    }
                }
            }
            let eig = gop.clone().symmetric_eigen();
            let top = eig
                .eigenvalues
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.partial_cmp(b.1).expect("real eigenvalues"))
                .map(|(k, _)| k)
                .expect("nonempty spectrum");
            state = eig.eigenvectors.column(top).into_owned();

            let psi = CMat::from_fn(dim, dim, |i, j| state[i * dim + j]);
            // Alice step
            for x in 0..q {
                let w = |a: usize| -> CMat {
                    let mut nm = CMat::zeros(dim, dim);
                    for y in 0..q {
                        for &b in &effective[y] {
                            if game.wins(x, y, a, b) {
                                nm += &bob[y][b];
                            }
                        }
                    }
                    &psi * nm.transpose() * psi.adjoint()
                };
                let (a0, a1) = (effective[x][0], effective[x][1]);
                let h = w(a0) - w(a1);
                let p = positive_eigenspace(&h);
                alice[x][a0] = p.clone();
                alice[x][a1] = CMat::identity(dim, dim) - p;
            }
            // Bob step
            for y in 0..q {
                let w = |b: usize| -> CMat {
                    let mut mm = CMat::zeros(dim, dim);
                    for x in 0..q {
                        for &a in &effective[x] {
                            if game.wins(x, y, a, b) {
                                mm += &alice[x][a];
                            }
                        }
                    }
                    (psi.adjoint() * mm * &psi).transpose()
                };
                let (b0, b1) = (effective[y][0], effective[y][1]);
                let h = w(b0) - w(b1);
                let p = positive_eigenspace(&h);
                bob[y][b0] = p.clone();
                bob[y][b1] = CMat::identity(dim, dim) - p;
            }

            let strat = QuantumStrategy {
                dim_a: dim,
                dim_b: dim,
                state: state.clone(),
                alice: alice.clone(),
                bob: bob.clone(),
            };
            let value = quantum_win_prob(game, &strat)?;
            if (value - last).abs() < 1e-12 {
                break;
            }
            last = value;
        }

        let strat = QuantumStrategy {
            dim_a: dim,
            dim_b: dim,
            state,
            alice,
            bob,
        };
        let value = quantum_win_prob(game, &strat)?;
        if best.as_ref().is_none_or(|(bv, _)| value > *bv) {
            best = Some((value, strat));
        }
    }
    let (best_value, best_strategy) = best.expect("at least one restart");
    Ok(SweepOutcome {
        best_value,
        best_strategy,
        restarts,
        seed,
    })
}

/// Norm of (sum_v A_v (x) I)|psi>, the optimality witness for the K_{3,2}
/// strategies: near-optimal strategies must annihilate the state with the
/// summed observables.
pub fn observable_sum_residual(strat: &QuantumStrategy) -> f64 {
    let q = strat.alice.len();
    let da = strat.dim_a;
    let db = strat.dim_b;
    let mut sum_a = CMat::zeros(da, da);
    let mut sum_b = CMat::zeros(db, db);
    for x in 0..q {
        // observable = P_first - P_second over the two live projectors
        let mut oa = CMat::zeros(da, da);
        let mut first = true;
        for p in &strat.alice[x] {
            if p.iter().any(|c| c.norm_sqr() > 0.0) {
                if first {
                    oa += p;
                    first = false;
                } else {
                    oa -= p;
                }
            }
        }
        sum_a += oa;
        let mut ob = CMat::zeros(db, db);
        let mut first = true;
        for p in &strat.bob[x] {
            if p.iter().any(|c| c.norm_sqr() > 0.0) {
                if first {
                    ob += p;
                    first = false;
                } else {
                    ob -= p;
                }
            }
        }
        sum_b += ob;
    }
    let psi = CMat::from_fn(da, db, |i, j| strat.state[i * db + j]);
    let ra = frobenius(&(&sum_a * &psi));
    let rb = frobenius(&(&psi * sum_b.transpose()));
    ra.max(rb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corr::classical_value;
    use crate::game::{bpm_game, pm_game};
    use crate::graph::{maximum_matching, BipartiteGraph, Graph};

    #[test]
    fn sum_zero_observables_check() {
        for n in [2, 3, 5] {
            let obs = sum_zero_observables(n).unwrap();
            let mut sum = CMat::zeros(2, 2);
            let eye = CMat::identity(2, 2);
            for m in &obs {
                assert!(frobenius(&(m * m - &eye)) < 1e-12, "squares to identity");
                sum += m;
            }
            assert!(frobenius(&sum) < 1e-12, "n={n} observables sum to zero");
        }
        assert!(sum_zero_observables(1).is_err());
        // n = 2 is {X, -X}
        let obs = sum_zero_observables(2).unwrap();
        assert!(frobenius(&(&obs[0] + &obs[1])) < 1e-15);
    }

    #[test]
    fn k32_strategy_hits_5_6() {
        let strat = k32_optimal_strategy();
        strat.validate().unwrap();
        let game = bpm_game(&BipartiteGraph::complete(3, 2));
        let v = quantum_win_prob(&game, &strat).unwrap();
        assert!((v - 5.0 / 6.0).abs() < 1e-9, "got {v}");
        // the observable sums vanish on the state
        assert!(observable_sum_residual(&strat) < 1e-12);
        // synchronous: off-diagonal same-question entries vanish
        let corr = correlation_of(&strat).unwrap();
        for x in 0..3 {
            for a in 0..6 {
                for b in 0..6 {
                    if a != b {
                        assert!(corr.get(x, x, a, b).abs() < 1e-9);
                    }
                }
            }
        }
        assert!(corr.ns_residual() < 1e-9);
        assert!(corr.normalization_residual() < 1e-9);
    }

    #[test]
    fn trivial_strategy_values() {
        for n in [2, 4, 5] {
            let strat = trivial_strategy(n).unwrap();
            strat.validate().unwrap();
            let game = bpm_game(&BipartiteGraph::complete(n, 2));
            let v = quantum_win_prob(&game, &strat).unwrap();
            let expect = 1.0 - 1.0 / n as f64;
            assert!((v - expect).abs() < 1e-12, "n={n}: got {v}");
        }
        assert!(trivial_strategy(1).is_err());
    }

    #[test]
    fn sum_zero_strategy_hits_half_plus_1_over_n() {
        for n in 2..=6 {
            let strat = sum_zero_strategy(n).unwrap();
            let game = bpm_game(&BipartiteGraph::complete(n, 2));
            let v = quantum_win_prob(&game, &strat).unwrap();
            let expect = 0.5 + 1.0 / n as f64;
            assert!((v - expect).abs() < 1e-9, "n={n}: got {v}");
        }
    }

    #[test]
    fn deterministic_embedding_wins_pm_k4() {
        let k4 = Graph::complete(4);
        let game = pm_game(&k4);
        let m = maximum_matching(&k4).unwrap();
        let f: Vec<usize> = (0..4)
            .map(|v| {
                let &(a, b) = m.edges.iter().find(|&&(a, b)| a == v || b == v).unwrap();
                k4.edge_index(a, b).unwrap()
            })
            .collect();
        let strat = deterministic_embedding(4, 6, &f, &f).unwrap();
        let v = quantum_win_prob(&game, &strat).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        let corr = correlation_of(&strat).unwrap();
        assert!(corr.table.iter().all(|p| *p == 0.0 || (*p - 1.0).abs() < 1e-15));
    }

    #[test]
    fn quantum_beats_classical_only_for_n3() {
        // quantum 5/6 > classical 7/9 at n = 3
        let game = bpm_game(&BipartiteGraph::complete(3, 2));
        let (cv, _) = classical_value(&game, false).unwrap();
        let qv = quantum_win_prob(&game, &k32_optimal_strategy()).unwrap();
        assert!(qv > crate::rational::to_f64(&cv) + 0.05);
    }

    #[test]
    fn small_sweep_stays_under_bound() {
        // shortened version of the acceptance sweep
        let game = bpm_game(&BipartiteGraph::complete(3, 2));
        let out = seesaw_sweep(&game, 2, 12, 60, 7).unwrap();
        assert!(out.best_value <= 5.0 / 6.0 + 1e-6, "got {}", out.best_value);
        // seesaw should get close to the optimum with a few restarts
        assert!(out.best_value > 0.80, "got {}", out.best_value);
    }
}
