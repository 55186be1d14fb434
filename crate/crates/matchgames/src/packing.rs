//! Projective packings and quantum perfect-matching certificates:
//! verification of the projector conditions, packing values, certificate
//! files, and a best-effort seesaw search for new certificates.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{
    independence_number_with_cap, line_graph, maximum_matching, Graph, Matching,
};
use crate::quantum::CMat;

/// Verification tolerance for projector identities.
pub const VERIFY_TOL: f64 = 1e-9;
/// Convergence tolerance for the search heuristic.
pub const SEARCH_TOL: f64 = 1e-7;

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn frobenius(m: &CMat) -> f64 {
    m.norm()
}

/// A family of d x d matrices indexed by the vertices or edges of a graph.
#[derive(Clone, Debug)]
pub struct ProjectorFamily {
    pub dim: usize,
    pub mats: Vec<CMat>,
}

impl ProjectorFamily {
    pub fn new(dim: usize, mats: Vec<CMat>) -> Result<Self> {
        for (i, m) in mats.iter().enumerate() {
            if m.nrows() != dim || m.ncols() != dim {
                return Err(Error::ShapeMismatch(format!(
                    "matrix {i} is {}x{}, want {dim}x{dim}",
                    m.nrows(),
                    m.ncols()
                )));
            }
        }
        Ok(ProjectorFamily { dim, mats })
    }

    /// Worst deviation from being a family of projectors (Hermitian and
    /// idempotent), in Frobenius norm.
    pub fn projector_residual(&self) -> f64 {
        self.mats
            .iter()
            .map(|m| {
                let herm = frobenius(&(m - m.adjoint()));
                let idem = frobenius(&(m * m - m));
                herm.max(idem)
            })
            .fold(0.0, f64::max)
    }

    /// (1/d) sum of traces, real part.
    pub fn value(&self) -> f64 {
        let t: Complex64 = self.mats.iter().map(|m| m.trace()).sum();
        t.re / self.dim as f64
    }
}

/// d = 1 indicator certificate of a classical matching: the identity on
/// matched edges, zero elsewhere.
pub fn matching_certificate(g: &Graph, m: &Matching) -> ProjectorFamily {
    let mats = g
        .edges()
        .iter()
        .map(|&(u, v)| {
            if m.edges.contains(&(u, v)) {
                CMat::identity(1, 1)
            } else {
                CMat::zeros(1, 1)
            }
        })
        .collect();
    ProjectorFamily { dim: 1, mats }
}

/// True iff `fam` (indexed by the vertices of `g`) is a projective packing:
/// all matrices are projectors and adjacent pairs multiply to zero.
pub fn verify_packing(g: &Graph, fam: &ProjectorFamily) -> Result<bool> {
    if fam.mats.len() != g.n() {
        return Err(Error::ShapeMismatch(format!(
            "{} projectors for {} vertices",
            fam.mats.len(),
            g.n()
        )));
    }
    if fam.projector_residual() > VERIFY_TOL {
        return Ok(false);
    }
    for &(u, v) in g.edges() {
        if frobenius(&(&fam.mats[u] * &fam.mats[v])) > VERIFY_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Packing value (1/d) sum_x tr(Pi_x).
pub fn packing_value(fam: &ProjectorFamily) -> f64 {
    fam.value()
}

/// Detailed verdict on a quantum perfect-matching certificate: a projector
/// per edge with per-vertex completeness and incident orthogonality.
#[derive(Clone, Debug)]
pub struct QpmReport {
    pub projector_residual: f64,
    pub completeness_residual: f64,
    pub orthogonality_residual: f64,
    pub violations: Vec<String>,
}

impl QpmReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the quantum perfect-matching conditions for a family indexed by
/// E(g): each matrix a projector, sum over E(x) equal to the identity at
/// every vertex, and incident distinct edges orthogonal. Absence from E(g)
/// is structural (no projector is stored for a non-edge).
pub fn verify_qpm_certificate(g: &Graph, fam: &ProjectorFamily) -> QpmReport {
    let mut violations = Vec::new();
    if fam.mats.len() != g.edge_count() {
        violations.push(format!(
            "family has {} projectors for {} edges",
            fam.mats.len(),
            g.edge_count()
        ));
        return QpmReport {
            projector_residual: f64::INFINITY,
            completeness_residual: f64::INFINITY,
            orthogonality_residual: f64::INFINITY,
            violations,
        };
    }
    let d = fam.dim;
    let projector_residual = fam.projector_residual();
    if projector_residual > VERIFY_TOL {
        violations.push(format!(
            "projector identities violated by {projector_residual:.3e}"
        ));
    }
    let eye = CMat::identity(d, d);
    let mut completeness_residual: f64 = 0.0;
    for x in 0..g.n() {
        let mut sum = CMat::zeros(d, d);
        for e in g.incident_edges(x) {
            sum += &fam.mats[e];
        }
        let defect = frobenius(&(sum - &eye));
        if defect > VERIFY_TOL {
            violations.push(format!(
                "vertex {x}: incident projectors sum to identity defect {defect:.3e}"
            ));
        }
        completeness_residual = completeness_residual.max(defect);
    }
    let mut orthogonality_residual: f64 = 0.0;
    for (i, &(u1, v1)) in g.edges().iter().enumerate() {
        for (j, &(u2, v2)) in g.edges().iter().enumerate().skip(i + 1) {
            let incident = u1 == u2 || u1 == v2 || v1 == u2 || v1 == v2;
            if incident {
                let defect = frobenius(&(&fam.mats[i] * &fam.mats[j]));
                if defect > VERIFY_TOL {
                    violations.push(format!(
                        "edges ({u1},{v1}) and ({u2},{v2}): orthogonality defect {defect:.3e}"
                    ));
                }
                orthogonality_residual = orthogonality_residual.max(defect);
            }
        }
    }
    QpmReport {
        projector_residual,
        completeness_residual,
        orthogonality_residual,
        violations,
    }
}

/// The two directions of the packing equivalence, executed on a passing
/// certificate: read on the line graph the family is a projective packing
/// whose value is |V|/2, and the per-vertex trace chain shows the value is
/// maximal exactly when completeness holds.
#[derive(Clone, Debug)]
pub struct EquivReport {
    pub is_line_graph_packing: bool,
    pub packing_value: f64,
    pub expected_value: f64,
    pub max_vertex_trace_defect: f64,
}

impl EquivReport {
    pub fn pass(&self) -> bool {
        self.is_line_graph_packing
            && (self.packing_value - self.expected_value).abs() <= VERIFY_TOL
            && self.max_vertex_trace_defect <= VERIFY_TOL
    }
}

pub fn qpm_equiv_checks(g: &Graph, fam: &ProjectorFamily) -> Result<EquivReport> {
    let report = verify_qpm_certificate(g, fam);
    if !report.pass() {
        return Err(Error::Precondition(format!(
            "family is not a quantum perfect-matching certificate: {:?}",
            report.violations
        )));
    }
    let lg = line_graph(g);
    let is_line_graph_packing = verify_packing(&lg, fam)?;
    let value = packing_value(fam);
    // tr(sum_{e in E(x)} Pi_e) <= tr(I) = d, equality iff the sum is I;
    // summing over x double counts every edge, so value == |V|/2 exactly at
    // completeness.
    let mut max_defect: f64 = 0.0;
    for x in 0..g.n() {
        let t: Complex64 = g
            .incident_edges(x)
            .into_iter()
            .map(|e| fam.mats[e].trace())
            .sum();
        max_defect = max_defect.max((t.re - fam.dim as f64).abs());
    }
    Ok(EquivReport {
        is_line_graph_packing,
        packing_value: value,
        expected_value: g.n() as f64 / 2.0,
        max_vertex_trace_defect: max_defect,
    })
}

/// Agreement check between the two classical sides: a maximum matching is
/// perfect exactly when the line graph's independence number reaches
/// |V|/2. Returns whether the two computations agree.
pub fn classical_pm_alpha_check(g: &Graph) -> Result<bool> {
    let m = maximum_matching(g)?;
    let perfect = m.is_perfect(g.n());
    let lg = line_graph(g);
    let alpha = independence_number_with_cap(&lg, lg.n().max(1))?;
    Ok(perfect == (2 * alpha == g.n()))
}

/// Certificate file: `qpm <n> <d>` header, then for each edge (in the
/// graph's edge order) a line `edge <u> <v>` followed by d rows of d
/// complex entries written as `re im` pairs.
pub fn write_certificate(g: &Graph, fam: &ProjectorFamily) -> Result<String> {
    use std::fmt::Write as _;
    if fam.mats.len() != g.edge_count() {
        return Err(Error::ShapeMismatch(format!(
            "{} projectors for {} edges",
            fam.mats.len(),
            g.edge_count()
        )));
    }
    let mut s = format!("qpm {} {}\n", g.n(), fam.dim);
    for (i, &(u, v)) in g.edges().iter().enumerate() {
        let _ = writeln!(s, "edge {u} {v}");
        for r in 0..fam.dim {
            let row: Vec<String> = (0..fam.dim)
                .map(|c| {
                    let z = fam.mats[i][(r, c)];
                    format!("{} {}", z.re, z.im)
                })
                .collect();
            let _ = writeln!(s, "{}", row.join(" "));
        }
    }
    Ok(s)
}

/// Parses a certificate file into the declared edge list and the family.
pub fn parse_certificate(text: &str) -> Result<(usize, Vec<(usize, usize)>, ProjectorFamily)> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty certificate".into()))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    let (n, d) = match parts.as_slice() {
        ["qpm", n, d] => (
            n.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad vertex count {n:?}")))?,
            d.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad dimension {d:?}")))?,
        ),
        _ => return Err(Error::Parse(format!("bad qpm header {header:?}"))),
    };
    let mut edges = Vec::new();
    let mut mats = Vec::new();
    loop {
        let Some(line) = lines.next() else { break };
        let words: Vec<&str> = line.split_whitespace().collect();
        let [kw, u, v] = words.as_slice() else {
            return Err(Error::Parse(format!("expected `edge u v`, got {line:?}")));
        };
        if *kw != "edge" {
            return Err(Error::Parse(format!("expected `edge`, got {kw:?}")));
        }
        let u: usize = u
            .parse()
            .map_err(|_| Error::Parse(format!("bad vertex {u:?}")))?;
        let v: usize = v
            .parse()
            .map_err(|_| Error::Parse(format!("bad vertex {v:?}")))?;
        edges.push((u, v));
        let mut m = CMat::zeros(d, d);
        for r in 0..d {
            let row = lines
                .next()
                .ok_or_else(|| Error::Parse("truncated certificate matrix".into()))?;
            let nums: Vec<f64> = row
                .split_whitespace()
                .map(|w| {
                    w.parse()
                        .map_err(|_| Error::Parse(format!("bad number {w:?}")))
                })
                .collect::<Result<_>>()?;
            if nums.len() != 2 * d {
                return Err(Error::Parse(format!(
                    "matrix row has {} numbers, want {}",
                    nums.len(),
                    2 * d
                )));
            }
            for c in 0..d {
                m[(r, c)] = Complex64::new(nums[2 * c], nums[2 * c + 1]);
            }
        }
        mats.push(m);
    }
    Ok((n, edges, ProjectorFamily::new(d, mats)?))
}

/// Rounds a Hermitian matrix to the projector onto its eigenvalue >= 1/2
/// eigenspace.
fn round_to_projector(m: &CMat) -> CMat {
    let d = m.nrows();
    let herm = (m + m.adjoint()) * re(0.5);
    let eig = herm.symmetric_eigen();
    let mut p = CMat::zeros(d, d);
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda >= 0.5 {
            let v = eig.eigenvectors.column(k);
            p += v * v.adjoint();
        }
    }
    p
}

/// Best-effort search for a quantum perfect-matching certificate at
/// dimension d: random restarts of an alternating rounding heuristic, each
/// vertex repeatedly replacing its incident matrices with the nearest
/// sub-PVM and edges averaging their two endpoint proposals. A returned
/// family always passes `verify_qpm_certificate`; `None` proves nothing.
pub fn seesaw_search(
    g: &Graph,
    dim: usize,
    iterations: usize,
    seed: u64,
) -> Option<ProjectorFamily> {
    if dim < 1 || g.edge_count() == 0 || g.n() == 0 {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = g.edge_count();
    let sweeps_per_restart = 60usize;
    let restarts = iterations.div_ceil(sweeps_per_restart).max(1);

    for _ in 0..restarts {
        // random Hermitian start
        let mut mats: Vec<CMat> = (0..m)
            .map(|_| {
                let r = CMat::from_fn(dim, dim, |_, _| {
                    Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
                });
                (&r + r.adjoint()) * re(0.5)
            })
            .collect();

        for _ in 0..sweeps_per_restart {
            // per-vertex nearest sub-PVM proposals
            let mut proposals: Vec<Vec<(usize, CMat)>> = vec![Vec::new(); m];
            for x in 0..g.n() {
                let incident = g.incident_edges(x);
                // generic weighting separates eigenvectors before assignment
                let mut combo = CMat::zeros(dim, dim);
                for &e in &incident {
                    combo += &mats[e] * re(1.0 + rng.random::<f64>());
                }
                let eig = combo.symmetric_eigen();
                let mut assigned: Vec<CMat> = vec![CMat::zeros(dim, dim); incident.len()];
                for k in 0..dim {
                    let v = eig.eigenvectors.column(k);
                    let mut best = 0usize;
                    let mut best_score = f64::NEG_INFINITY;
                    for (idx, &e) in incident.iter().enumerate() {
                        let score = (v.adjoint() * &mats[e] * v)[(0, 0)].re;
                        if score > best_score {
                            best_score = score;
                            best = idx;
                        }
                    }
                    assigned[best] += v * v.adjoint();
                }
                for (idx, &e) in incident.iter().enumerate() {
                    proposals[e].push((x, assigned[idx].clone()));
                }
            }
            for (e, props) in proposals.iter().enumerate() {
                if !props.is_empty() {
                    let mut avg = CMat::zeros(dim, dim);
                    for (_, p) in props {
                        avg += p;
                    }
                    mats[e] = avg * re(1.0 / props.len() as f64);
                }
            }

            let candidate = ProjectorFamily {
                dim,
                mats: mats.iter().map(round_to_projector).collect(),
            };
            let report = verify_qpm_certificate(g, &candidate);
            let residual = report
                .projector_residual
                .max(report.completeness_residual)
                .max(report.orthogonality_residual);
            if residual < SEARCH_TOL || report.pass() {
                if report.pass() {
                    return Some(candidate);
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    #[test]
    fn indicator_packing_on_independent_set() {
        // d=1 indicators of an independent set in C5
        let c5 = Graph::cycle(5).unwrap();
        let mats = (0..5)
            .map(|v| {
                if v == 0 || v == 2 {
                    CMat::identity(1, 1)
                } else {
                    CMat::zeros(1, 1)
                }
            })
            .collect();
        let fam = ProjectorFamily::new(1, mats).unwrap();
        assert!(verify_packing(&c5, &fam).unwrap());
        assert!((packing_value(&fam) - 2.0).abs() < 1e-15);
        // overlapping projectors on adjacent vertices fail
        let mats = (0..5).map(|_| CMat::identity(1, 1)).collect();
        let fam = ProjectorFamily::new(1, mats).unwrap();
        assert!(!verify_packing(&c5, &fam).unwrap());
        // all-zero family packs with value 0
        let mats = (0..5).map(|_| CMat::zeros(1, 1)).collect();
        let fam = ProjectorFamily::new(1, mats).unwrap();
        assert!(verify_packing(&c5, &fam).unwrap());
        assert_eq!(packing_value(&fam), 0.0);
    }

    #[test]
    fn k2_identity_certificate() {
        let k2 = Graph::complete(2);
        let fam = ProjectorFamily::new(1, vec![CMat::identity(1, 1)]).unwrap();
        let report = verify_qpm_certificate(&k2, &fam);
        assert!(report.pass(), "{:?}", report.violations);
        let equiv = qpm_equiv_checks(&k2, &fam).unwrap();
        assert!(equiv.pass());
        assert!((equiv.packing_value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn k4_matching_certificate() {
        let k4 = Graph::complete(4);
        let m = maximum_matching(&k4).unwrap();
        let fam = matching_certificate(&k4, &m);
        let report = verify_qpm_certificate(&k4, &fam);
        assert!(report.pass(), "{:?}", report.violations);
        let equiv = qpm_equiv_checks(&k4, &fam).unwrap();
        assert!(equiv.pass());
        assert!((equiv.packing_value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn k3_certificates_fail() {
        let k3 = Graph::complete(3);
        // structured attempt: d=1 indicator of one edge
        let m = Matching {
            edges: vec![(0, 1)],
        };
        let fam = matching_certificate(&k3, &m);
        let report = verify_qpm_certificate(&k3, &fam);
        assert!(!report.pass());
        assert!(report.completeness_residual > 0.5);
        // random attempts at d = 2..4 rounded to projectors also fail
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for d in 2..=4 {
            for _ in 0..20 {
                let mats: Vec<CMat> = (0..3)
                    .map(|_| {
                        let r = CMat::from_fn(d, d, |_, _| {
                            Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
                        });
                        round_to_projector(&r)
                    })
                    .collect();
                let fam = ProjectorFamily::new(d, mats).unwrap();
                assert!(!verify_qpm_certificate(&k3, &fam).pass());
            }
        }
    }

    #[test]
    fn search_finds_k4_certificate() {
        let k4 = Graph::complete(4);
        let fam = seesaw_search(&k4, 1, 600, 0).expect("K4 has a classical certificate");
        assert!(verify_qpm_certificate(&k4, &fam).pass());
        let equiv = qpm_equiv_checks(&k4, &fam).unwrap();
        assert!(equiv.pass());
    }

    #[test]
    fn search_reports_absence_for_c5() {
        // odd vertex count: the trace identity rules out any dimension
        let c5 = Graph::cycle(5).unwrap();
        assert!(seesaw_search(&c5, 2, 120, 1).is_none());
    }

    #[test]
    fn alpha_check_cases() {
        assert!(classical_pm_alpha_check(&Graph::complete(4)).unwrap());
        assert!(classical_pm_alpha_check(&Graph::cycle(5).unwrap()).unwrap());
        assert!(classical_pm_alpha_check(&Graph::petersen()).unwrap());
    }

    #[test]
    fn certificate_round_trip() {
        let k4 = Graph::complete(4);
        let m = maximum_matching(&k4).unwrap();
        let fam = matching_certificate(&k4, &m);
        let text = write_certificate(&k4, &fam).unwrap();
        let (n, edges, fam2) = parse_certificate(&text).unwrap();
        assert_eq!(n, 4);
        assert_eq!(edges, k4.edges());
        assert_eq!(write_certificate(&k4, &fam2).unwrap(), text);
        // bit-exact float preservation through the shortest round-trip format
        for (a, b) in fam.mats.iter().zip(&fam2.mats) {
            assert_eq!(a, b);
        }
    }
}
