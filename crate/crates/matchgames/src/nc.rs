//! Polynomials in noncommuting involutive generators a_1..a_n, b_1..b_n
//! over exact rationals, with mechanical sum-of-squares verification.
//!
//! Relations: every generator squares to 1, and each a commutes with each
//! b (the two parties act on different factors). Words are kept in normal
//! form: the a-block first, then the b-block, neither containing an
//! adjacent repeated generator. Rewriting with `ba -> ab`, `xx -> 1` is
//! confluent, so equal polynomials have identical coefficient maps.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_ratio, parse_ratio, rat, Rational};

/// Which party's generator, with a 0-based index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Gen {
    A(u32),
    B(u32),
}

/// A normal-form word: reduced a-block followed by reduced b-block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word {
    a_part: Vec<u32>,
    b_part: Vec<u32>,
}

impl Word {
    pub fn empty() -> Self {
        Word {
            a_part: Vec::new(),
            b_part: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.a_part.len() + self.b_part.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn generators(&self) -> impl Iterator<Item = Gen> + '_ {
        self.a_part
            .iter()
            .map(|&i| Gen::A(i))
            .chain(self.b_part.iter().map(|&i| Gen::B(i)))
    }
}

/// (length, a-block, b-block): deterministic term order for coefficient maps.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.a_part.cmp(&other.a_part))
            .then_with(|| self.b_part.cmp(&other.b_part))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Concatenates two reduced blocks, cancelling the xx = 1 pairs that form
/// at the seam (stack reduction).
fn reduce_concat(left: &[u32], right: &[u32]) -> Vec<u32> {
    let mut out: Vec<u32> = left.to_vec();
    for &g in right {
        if out.last() == Some(&g) {
            out.pop();
        } else {
            out.push(g);
        }
    }
    out
}

/// Rational-coefficient polynomial over the two-party involution algebra
/// with n generators per party.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NcPolynomial {
    arity: usize,
    terms: BTreeMap<Word, Rational>,
}

impl NcPolynomial {
    pub fn zero(arity: usize) -> Self {
        NcPolynomial {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(arity: usize, c: Rational) -> Self {
        let mut p = NcPolynomial::zero(arity);
        if !c.is_zero() {
            p.terms.insert(Word::empty(), c);
        }
        p
    }

    pub fn one(arity: usize) -> Self {
        Self::constant(arity, Rational::one())
    }

    /// The generator as a degree-1 polynomial.
    pub fn generator(arity: usize, g: Gen) -> Result<Self> {
        let idx = match g {
            Gen::A(i) | Gen::B(i) => i as usize,
        };
        if idx >= arity {
            return Err(Error::InvalidInput(format!(
                "generator index {idx} out of range for arity {arity}"
            )));
        }
        let word = match g {
            Gen::A(i) => Word {
                a_part: vec![i],
                b_part: Vec::new(),
            },
            Gen::B(i) => Word {
                a_part: Vec::new(),
                b_part: vec![i],
            },
        };
        let mut p = NcPolynomial::zero(arity);
        p.terms.insert(word, Rational::one());
        Ok(p)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, w: &Word) -> Rational {
        self.terms.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    fn insert(&mut self, w: Word, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_arity(&self, other: &Self) -> Result<()> {
        if self.arity != other.arity {
            return Err(Error::ShapeMismatch(format!(
                "polynomial arities {} and {} differ",
                self.arity, other.arity
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.insert(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.insert(w.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = NcPolynomial::zero(self.arity);
        if c.is_zero() {
            return out;
        }
        for (w, k) in &self.terms {
            out.terms.insert(w.clone(), k * c);
        }
        out
    }

    /// Product under the involution and cross-party commutation relations.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        let mut out = NcPolynomial::zero(self.arity);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let word = Word {
                    a_part: reduce_concat(&w1.a_part, &w2.a_part),
                    b_part: reduce_concat(&w1.b_part, &w2.b_part),
                };
                out.insert(word, c1 * c2);
            }
        }
        Ok(out)
    }

    /// Adjoint: reverse every word; generators are self-adjoint and
    /// coefficients real.
    pub fn adjoint(&self) -> Self {
        let mut out = NcPolynomial::zero(self.arity);
        for (w, c) in &self.terms {
            let word = Word {
                a_part: w.a_part.iter().rev().copied().collect(),
                b_part: w.b_part.iter().rev().copied().collect(),
            };
            out.terms.insert(word, c.clone());
        }
        out
    }

    pub fn is_self_adjoint(&self) -> bool {
        *self == self.adjoint()
    }

    /// Text form: one `num/den * a1 a3 b2` line per term (1-based generator
    /// indices, empty generator list for the constant term).
    pub fn to_text(&self) -> String {
        use std::fmt::Write as _;
        let mut s = String::new();
        for (w, c) in &self.terms {
            let gens: Vec<String> = w
                .generators()
                .map(|g| match g {
                    Gen::A(i) => format!("a{}", i + 1),
                    Gen::B(i) => format!("b{}", i + 1),
                })
                .collect();
            let _ = writeln!(s, "{} * {}", format_ratio(c), gens.join(" "));
        }
        s
    }

    pub fn from_text(arity: usize, text: &str) -> Result<Self> {
        let mut out = NcPolynomial::zero(arity);
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (coeff, gens) = line
                .split_once('*')
                .ok_or_else(|| Error::Parse(format!("expected `coeff * gens`, got {line:?}")))?;
            let c = parse_ratio(coeff)?;
            let mut p = NcPolynomial::constant(arity, c);
            for gen in gens.split_whitespace() {
                if gen.len() < 2 {
                    return Err(Error::Parse(format!("bad generator {gen:?}")));
                }
                let (party, idx) = gen.split_at(1);
                let i: u32 = idx
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad generator {gen:?}")))?;
                if i == 0 {
                    return Err(Error::Parse(format!("generator {gen:?} is 1-based")));
                }
                let g = match party {
                    "a" => Gen::A(i - 1),
                    "b" => Gen::B(i - 1),
                    _ => return Err(Error::Parse(format!("bad generator {gen:?}"))),
                };
                p = p.mul(&NcPolynomial::generator(arity, g)?)?;
            }
            out = out.add(&p)?;
        }
        Ok(out)
    }
}

impl fmt::Display for NcPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

/// Checks `lhs == sum coeff_k s_k^2` exactly. Every `s_k` must be
/// self-adjoint with a positive coefficient, so a pass certifies that lhs
/// is positive semidefinite in every representation of the relations.
pub fn verify_sos(lhs: &NcPolynomial, terms: &[(Rational, NcPolynomial)]) -> Result<bool> {
    let mut acc = NcPolynomial::zero(lhs.arity());
    for (coeff, s) in terms {
        if !coeff.is_positive() {
            return Err(Error::Precondition(format!(
                "sum-of-squares coefficient {coeff} must be positive"
            )));
        }
        if !s.is_self_adjoint() {
            return Err(Error::Precondition(
                "sum-of-squares term is not self-adjoint".into(),
            ));
        }
        acc = acc.add(&s.mul(s)?.scale(coeff))?;
    }
    Ok(lhs.sub(&acc)?.is_zero())
}

/// Sum over v of the a_v generators.
fn a_sum(arity: usize) -> NcPolynomial {
    let mut p = NcPolynomial::zero(arity);
    for v in 0..arity as u32 {
        p = p
            .add(&NcPolynomial::generator(arity, Gen::A(v)).expect("index in range"))
            .expect("same arity");
    }
    p
}

/// The bias polynomial of the K_{n,2} matching game,
/// n^2 - sum_{v1} a_{v1} (sum_{v2} (-1)^{[v1=v2]} b_{v2}),
/// whose normalized expectation (1/(2n^2)) Tr(. rho) is the winning
/// probability of the strategy with observables a_v, b_v.
pub fn kn2_bias_polynomial(n: usize) -> Result<NcPolynomial> {
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "K_{{n,2}} games need n >= 2, got {n}"
        )));
    }
    let mut p = NcPolynomial::constant(n, rat((n * n) as i64, 1));
    for v1 in 0..n as u32 {
        for v2 in 0..n as u32 {
            let sign = if v1 == v2 { rat(1, 1) } else { rat(-1, 1) };
            let term = NcPolynomial::generator(n, Gen::A(v1))?
                .mul(&NcPolynomial::generator(n, Gen::B(v2))?)?
                .scale(&sign);
            p = p.add(&term)?;
        }
    }
    Ok(p)
}

/// Closed-form values of the K_{n,2} bipartite matching games.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kn2Values {
    pub classical: Rational,
    pub quantum: Rational,
    pub quantum_synchronous: Rational,
}

pub fn kn2_value_table(n: usize) -> Result<Kn2Values> {
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "K_{{n,2}} games need n >= 2, got {n}"
        )));
    }
    let quantum_synchronous = rat(1, 2) + rat(1, n as i64);
    let (classical, quantum) = match n {
        2 => (rat(1, 1), rat(1, 1)), // K_{2,2} has an L-perfect matching
        3 => (rat(7, 9), rat(5, 6)),
        _ => {
            let v = rat(1, 1) - rat(1, n as i64);
            (v.clone(), v)
        }
    };
    Ok(Kn2Values {
        classical,
        quantum,
        quantum_synchronous,
    })
}

/// Linear combination sum_v a_coeffs[v] a_v + b_coeffs[v] b_v.
fn observable_combo(n: usize, a_coeffs: &[i64], b_coeffs: &[i64]) -> NcPolynomial {
    let mut p = NcPolynomial::zero(n);
    for (v, &c) in a_coeffs.iter().enumerate() {
        if c != 0 {
            let g = NcPolynomial::generator(n, Gen::A(v as u32)).expect("in range");
            p = p.add(&g.scale(&rat(c, 1))).expect("same arity");
        }
    }
    for (v, &c) in b_coeffs.iter().enumerate() {
        if c != 0 {
            let g = NcPolynomial::generator(n, Gen::B(v as u32)).expect("in range");
            p = p.add(&g.scale(&rat(c, 1))).expect("same arity");
        }
    }
    p
}

/// The K_{3,2} optimality identity: the left side
/// 6 - (a1(b1-b2-b3) + a2(-b1+b2-b3) + a3(-b1-b2+b3))
/// equals the returned sum of squares, so it is nonnegative in every
/// representation, which bounds the quantum value of the K_{3,2} matching
/// game by 5/6.
///
/// The decomposition comes from the Gram matrix [[I, R], [R, I]] with
/// R = (J - 2I)/2: the all-ones +/- directions carry weights 1/4 and 1/12,
/// and the three pairwise-difference directions carry weight 1/3 each.
pub fn k32_bound_identity() -> (NcPolynomial, Vec<(Rational, NcPolynomial)>) {
    let n = 3;
    // 6 - sum_v a_v b_v + sum_{v1 != v2} a_{v1} b_{v2}  =  15 - bias(3)
    let lhs = NcPolynomial::constant(n, rat(15, 1))
        .sub(&kn2_bias_polynomial(3).expect("n = 3"))
        .expect("same arity");
    let terms = vec![
        (rat(1, 4), observable_combo(n, &[1, 1, 1], &[1, 1, 1])),
        (rat(1, 12), observable_combo(n, &[1, 1, 1], &[-1, -1, -1])),
        (rat(1, 3), observable_combo(n, &[1, -1, 0], &[-1, 1, 0])),
        (rat(1, 3), observable_combo(n, &[1, 0, -1], &[-1, 0, 1])),
        (rat(1, 3), observable_combo(n, &[0, 1, -1], &[0, -1, 1])),
    ];
    (lhs, terms)
}

/// A rank-4 variant of the same identity (the three pairwise squares
/// replaced by two orthogonal directions).
pub fn k32_bound_identity_rank4() -> (NcPolynomial, Vec<(Rational, NcPolynomial)>) {
    let n = 3;
    let lhs = NcPolynomial::constant(n, rat(15, 1))
        .sub(&kn2_bias_polynomial(3).expect("n = 3"))
        .expect("same arity");
    let terms = vec![
        (rat(1, 4), observable_combo(n, &[1, 1, 1], &[1, 1, 1])),
        (rat(1, 12), observable_combo(n, &[1, 1, 1], &[-1, -1, -1])),
        (rat(1, 2), observable_combo(n, &[1, -1, 0], &[-1, 1, 0])),
        (rat(1, 6), observable_combo(n, &[1, 1, -2], &[-1, -1, 2])),
    ];
    (lhs, terms)
}

/// The synchronous-strategy identity for K_{n,2}: with a single set of
/// observables the winning probability polynomial is
/// (1/(2n^2)) (n^2 + n - sum_{v1 != v2} a_{v1} a_{v2}), and
/// (1/2 + 1/n) - that = (1/(2n^2)) (sum_v a_v)^2,
/// which pins the synchronous quantum value to 1/2 + 1/n.
pub fn sync_bound_identity(n: usize) -> Result<(NcPolynomial, Vec<(Rational, NcPolynomial)>)> {
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "synchronous identity needs n >= 2, got {n}"
        )));
    }
    // win polynomial scaled by 2n^2: n^2 + n - sum_{v1 != v2} a_v1 a_v2
    let mut win = NcPolynomial::constant(n, rat((n * n + n) as i64, 1));
    for v1 in 0..n as u32 {
        for v2 in 0..n as u32 {
            if v1 != v2 {
                let t = NcPolynomial::generator(n, Gen::A(v1))?
                    .mul(&NcPolynomial::generator(n, Gen::A(v2))?)?;
                win = win.sub(&t)?;
            }
        }
    }
    let scale = rat(1, (2 * n * n) as i64);
    let bound = rat(1, 2) + rat(1, n as i64);
    let lhs = NcPolynomial::constant(n, bound).sub(&win.scale(&scale))?;
    let terms = vec![(scale, a_sum(n))];
    Ok((lhs, terms))
}
