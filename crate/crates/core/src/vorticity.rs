//! Vorticity expressions and real feasibility of constraint ledgers.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactpoly::{
    groebner_basis, normal_form, rat, Budget, GroebnerError, MonomialOrder, Polynomial, Rational, VarId, MAX_VERTICES,
    NVARS,
};

/// A polynomial in the vorticities alone.
pub type VorticityExpr = Polynomial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VorticityError {
    #[error("empty vertex subset")]
    EmptySubset,
    #[error("angular momentum needs at least two vertices, got {0}")]
    TooFewVertices(usize),
    #[error("vertex {0} has no vorticity variable")]
    VertexRange(usize),
}

fn check_range(j: &[usize]) -> Result<(), VorticityError> {
    match j.iter().find(|&&v| !(1..=MAX_VERTICES).contains(&v)) {
        Some(&v) => Err(VorticityError::VertexRange(v)),
        None => Ok(()),
    }
}

/// `Γ_J`, the sum of the vorticities in `J`.
pub fn gamma_sum(j: &[usize]) -> Result<VorticityExpr, VorticityError> {
    if j.is_empty() {
        return Err(VorticityError::EmptySubset);
    }
    check_range(j)?;
    Ok(j.iter().map(|&v| Polynomial::gamma(v)).sum())
}

/// `L_J`, the sum of `Γ_j Γ_k` over unordered pairs in `J`.
pub fn angular_momentum(j: &[usize]) -> Result<VorticityExpr, VorticityError> {
    if j.len() < 2 {
        return Err(VorticityError::TooFewVertices(j.len()));
    }
    check_range(j)?;
    let mut acc = Polynomial::zero();
    for (a, &x) in j.iter().enumerate() {
        for &y in &j[a + 1..] {
            acc = acc + Polynomial::gamma(x) * Polynomial::gamma(y);
        }
    }
    Ok(acc)
}

/// Equalities (each `= 0`) and disequalities (each `≠ 0`) on `Γ1..Γn`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintLedger {
    pub n: usize,
    pub equalities: Vec<Polynomial>,
    pub nonzeros: Vec<Polynomial>,
}

impl ConstraintLedger {
    pub fn new(n: usize) -> Self {
        assert!((1..=MAX_VERTICES).contains(&n), "ledger size {n} out of range");
        ConstraintLedger { n, equalities: Vec::new(), nonzeros: (1..=n).map(Polynomial::gamma).collect() }
    }

    pub fn with(n: usize, equalities: Vec<Polynomial>, nonzeros: Vec<Polynomial>) -> Self {
        let mut l = ConstraintLedger::new(n);
        equalities.into_iter().for_each(|p| l.require_zero(p));
        nonzeros.into_iter().for_each(|p| l.require_nonzero(p));
        l
    }

    pub fn require_zero(&mut self, p: Polynomial) {
        if !p.is_zero() && !self.equalities.contains(&p) {
            self.equalities.push(p);
        }
    }

    pub fn require_nonzero(&mut self, p: Polynomial) {
        if !self.nonzeros.contains(&p) {
            self.nonzeros.push(p);
        }
    }

    pub fn merged(&self, other: &ConstraintLedger) -> ConstraintLedger {
        let mut out = self.clone();
        out.n = out.n.max(other.n);
        for i in 1..=out.n {
            out.require_nonzero(Polynomial::gamma(i));
        }
        other.equalities.iter().for_each(|p| out.require_zero(p.clone()));
        other.nonzeros.iter().for_each(|p| out.require_nonzero(p.clone()));
        out
    }

    /// Restore the always-present vorticity disequalities after deserialization.
    pub fn normalized(mut self) -> Self {
        for i in (1..=self.n).rev() {
            let g = Polynomial::gamma(i);
            if !self.nonzeros.contains(&g) {
                self.nonzeros.insert(0, g);
            }
        }
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictKind {
    Feasible,
    Infeasible,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    DirectDisequality,
    VanishingMonomial,
    SumOfSquares,
    /// Only produced when disequalities are folded into the ideal.
    Rabinowitsch,
}

impl fmt::Display for CertificateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CertificateKind::DirectDisequality => "direct-disequality",
            CertificateKind::VanishingMonomial => "vanishing-monomial",
            CertificateKind::SumOfSquares => "sum-of-squares",
            CertificateKind::Rabinowitsch => "rabinowitsch",
        })
    }
}

/// `multiplier * base` lies in the equality ideal. The multiplier is a product
/// of distinct vorticities, so over nonzero reals `base` itself must vanish.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub base: Polynomial,
    pub multiplier: Vec<usize>,
    /// Vertex subset for monomial and sum-of-squares certificates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subset: Option<Vec<usize>>,
}

impl Certificate {
    pub fn multiplier_poly(&self) -> Polynomial {
        self.multiplier.iter().map(|&i| Polynomial::gamma(i)).fold(Polynomial::one(), |a, g| a * g)
    }

    /// The polynomial exhibited in the ideal.
    pub fn polynomial(&self) -> Polynomial {
        self.multiplier_poly() * &self.base
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub verdict: VerdictKind,
    #[serde(with = "rational_vec", default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Rational>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
}

impl Verdict {
    pub fn kind(&self) -> VerdictKind {
        self.verdict
    }

    pub fn is_infeasible(&self) -> bool {
        self.verdict == VerdictKind::Infeasible
    }
}

mod rational_vec {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serializer};
    use std::str::FromStr;

    pub fn serialize<S: Serializer>(v: &Option<Vec<Rational>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.collect_seq(v.iter().map(|r| r.to_string())),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<Rational>>, D::Error> {
        let raw: Option<Vec<String>> = Option::deserialize(d)?;
        raw.map(|v| v.iter().map(|s| Rational::from_str(s).map_err(serde::de::Error::custom)).collect()).transpose()
    }
}

#[derive(Debug, Clone)]
pub struct DecideOptions {
    pub budget: Budget,
    pub attempts: usize,
    pub seed: u64,
    /// Fold all disequalities into the ideal through an auxiliary inverse.
    pub rabinowitsch: bool,
    /// Largest squarefree vorticity multiplier tried on certificate candidates.
    pub max_multiplier: usize,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions { budget: Budget::default(), attempts: 200, seed: 0x5eed, rabinowitsch: false, max_multiplier: 2 }
    }
}

fn subsets(n: usize, min: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0u32..1 << n)
        .map(|mask| (1..=n).filter(|i| mask >> (i - 1) & 1 == 1).collect::<Vec<_>>())
        .filter(|s| (min..=max).contains(&s.len()))
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    out
}

fn product(s: &[usize]) -> Polynomial {
    s.iter().fold(Polynomial::one(), |acc, &i| acc * Polynomial::gamma(i))
}

fn squares(s: &[usize]) -> Polynomial {
    s.iter().map(|&i| Polynomial::gamma(i).pow(2)).sum()
}

fn candidates(ledger: &ConstraintLedger) -> Vec<Certificate> {
    let mut out: Vec<Certificate> = ledger
        .nonzeros
        .iter()
        .map(|p| Certificate {
            kind: CertificateKind::DirectDisequality,
            base: p.clone(),
            multiplier: vec![],
            subset: None,
        })
        .collect();
    for s in subsets(ledger.n, 2, 3) {
        out.push(Certificate {
            kind: CertificateKind::VanishingMonomial,
            base: product(&s),
            multiplier: vec![],
            subset: Some(s),
        });
    }
    for s in subsets(ledger.n, 2, ledger.n) {
        out.push(Certificate {
            kind: CertificateKind::SumOfSquares,
            base: squares(&s),
            multiplier: vec![],
            subset: Some(s),
        });
    }
    out
}

/// Decide real feasibility with nonzero vorticities.
pub fn decide(ledger: &ConstraintLedger) -> Result<Verdict, GroebnerError> {
    decide_with(ledger, &DecideOptions::default())
}

pub fn decide_with(ledger: &ConstraintLedger, opts: &DecideOptions) -> Result<Verdict, GroebnerError> {
    let order = MonomialOrder::grevlex();
    let eqs: Vec<Polynomial> = ledger.equalities.iter().filter(|p| !p.is_zero()).cloned().collect();
    let basis = if eqs.is_empty() { Vec::new() } else { groebner_basis(&eqs, &order, opts.budget)? };

    let cands = candidates(ledger);
    for mult in subsets(ledger.n, 0, opts.max_multiplier) {
        let m = product(&mult);
        for c in &cands {
            if !mult.is_empty() && c.kind == CertificateKind::DirectDisequality && c.base.len() == 1 {
                continue;
            }
            if normal_form(&(&m * &c.base), &basis, &order).is_zero() {
                let mut cert = c.clone();
                cert.multiplier = mult;
                return Ok(Verdict { verdict: VerdictKind::Infeasible, witness: None, certificate: Some(cert) });
            }
        }
    }

    if opts.rabinowitsch {
        let t = Polynomial::var(VarId::C);
        let prod = ledger.nonzeros.iter().fold(Polynomial::one(), |a, p| a * p);
        let mut gens = eqs.clone();
        gens.push(Polynomial::one() - t * prod);
        let rb = groebner_basis(&gens, &order, opts.budget)?;
        if normal_form(&Polynomial::one(), &rb, &order).is_zero() {
            let cert = Certificate {
                kind: CertificateKind::Rabinowitsch,
                base: Polynomial::one(),
                multiplier: vec![],
                subset: None,
            };
            return Ok(Verdict { verdict: VerdictKind::Infeasible, witness: None, certificate: Some(cert) });
        }
    }

    if let Some(w) = search_witness(ledger, opts) {
        return Ok(Verdict { verdict: VerdictKind::Feasible, witness: Some(w), certificate: None });
    }
    Ok(Verdict { verdict: VerdictKind::Unknown, witness: None, certificate: None })
}

/// Check a certificate against a freshly computed basis.
pub fn verify_certificate(
    ledger: &ConstraintLedger,
    cert: &Certificate,
    budget: Budget,
) -> Result<bool, GroebnerError> {
    let order = MonomialOrder::grevlex();
    let shape_ok = match cert.kind {
        CertificateKind::DirectDisequality => ledger.nonzeros.contains(&cert.base),
        CertificateKind::VanishingMonomial => cert.subset.as_ref().is_some_and(|s| product(s) == cert.base),
        CertificateKind::SumOfSquares => cert.subset.as_ref().is_some_and(|s| squares(s) == cert.base),
        CertificateKind::Rabinowitsch => return Ok(false),
    };
    let mult_ok = cert.multiplier.iter().all(|i| (1..=ledger.n).contains(i));
    if !shape_ok || !mult_ok {
        return Ok(false);
    }
    let eqs: Vec<Polynomial> = ledger.equalities.iter().filter(|p| !p.is_zero()).cloned().collect();
    if eqs.is_empty() {
        return Ok(cert.polynomial().is_zero());
    }
    let mut rev = eqs;
    rev.reverse();
    let basis = groebner_basis(&rev, &order, budget)?;
    Ok(normal_form(&cert.polynomial(), &basis, &order).is_zero())
}

fn point_of(values: &[Rational]) -> [Rational; NVARS] {
    let mut pt: [Rational; NVARS] = Default::default();
    for (i, v) in values.iter().enumerate() {
        pt[VarId::gamma(i + 1).index()] = v.clone();
    }
    pt
}

/// Exact check that `values` (Γ1..Γn) satisfies the ledger.
pub fn check_witness(ledger: &ConstraintLedger, values: &[Rational]) -> bool {
    if values.len() != ledger.n {
        return false;
    }
    let pt = point_of(values);
    ledger.equalities.iter().all(|p| p.eval(&pt).is_zero()) && ledger.nonzeros.iter().all(|p| !p.eval(&pt).is_zero())
}

const SAMPLES: [(i64, i64); 12] =
    [(1, 1), (-1, 1), (2, 1), (-2, 1), (3, 1), (-3, 1), (1, 2), (-1, 2), (1, 3), (-1, 3), (5, 2), (-5, 2)];

fn sample(rng: &mut ChaCha8Rng, perturb: bool) -> Rational {
    let (p, q) = SAMPLES[rng.gen_range(0..SAMPLES.len())];
    let base = rat(p, q);
    if perturb {
        base + rat(rng.gen_range(-3..=3), 7)
    } else {
        base
    }
}

fn rational_sqrt(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let (n, d) = (x.numer(), x.denom());
    let (rn, rd) = (n.sqrt(), d.sqrt());
    (&rn * &rn == *n && &rd * &rd == *d).then(|| Rational::new(rn, rd))
}

/// Rational roots of `p` when it is linear or quadratic in `v` alone.
fn solve_univariate(p: &Polynomial, v: VarId) -> Vec<Rational> {
    let mut coeffs = [Rational::zero(), Rational::zero(), Rational::zero()];
    for (m, c) in p.terms() {
        let e = m.exponent(v) as usize;
        if e > 2 {
            return Vec::new();
        }
        coeffs[e] += c;
    }
    let [c0, c1, c2] = coeffs;
    if c2.is_zero() {
        if c1.is_zero() {
            return Vec::new();
        }
        return vec![-c0 / c1];
    }
    let disc = &c1 * &c1 - Rational::from_integer(BigInt::from(4)) * &c2 * &c0;
    match rational_sqrt(&disc) {
        Some(r) => {
            let two = Rational::from_integer(BigInt::from(2)) * &c2;
            vec![(-&c1 + &r) / &two, (-&c1 - r) / two]
        }
        None => Vec::new(),
    }
}

/// Randomized triangular solve: sample free vorticities, solve equalities that
/// become univariate, verify exactly.
fn search_witness(ledger: &ConstraintLedger, opts: &DecideOptions) -> Option<Vec<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let vars: Vec<VarId> = (1..=ledger.n).map(VarId::gamma).collect();
    for attempt in 0..opts.attempts {
        let perturb = attempt >= opts.attempts / 2;
        let mut order = vars.clone();
        order.shuffle(&mut rng);
        let mut assigned: [Option<Rational>; NVARS] = Default::default();
        let mut ok = true;
        loop {
            let reduced: Vec<Polynomial> =
                ledger.equalities.iter().map(|p| p.substitute(&assigned)).filter(|p| !p.is_zero()).collect();
            if reduced.iter().any(|p| p.variables().is_empty()) {
                ok = false;
                break;
            }
            let forced = reduced.iter().find_map(|p| match p.variables().as_slice() {
                [v] => Some((p.clone(), *v)),
                _ => None,
            });
            if let Some((p, v)) = forced {
                let roots: Vec<Rational> = solve_univariate(&p, v).into_iter().filter(|r| !r.is_zero()).collect();
                if roots.is_empty() {
                    ok = false;
                    break;
                }
                assigned[v.index()] = Some(roots[rng.gen_range(0..roots.len())].clone());
                continue;
            }
            match order.iter().find(|v| assigned[v.index()].is_none()) {
                Some(v) => assigned[v.index()] = Some(sample(&mut rng, perturb)),
                None => break,
            }
        }
        if !ok {
            continue;
        }
        let values: Vec<Rational> = vars.iter().map(|v| assigned[v.index()].clone().unwrap()).collect();
        if check_witness(ledger, &values) {
            return Some(values);
        }
    }
    None
}

/// `Σ_{j∈J} Γ_j^2`, exposed for tests of the key identity.
pub fn sum_of_squares(j: &[usize]) -> VorticityExpr {
    squares(j)
}
