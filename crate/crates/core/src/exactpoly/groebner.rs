//! Buchberger's algorithm with the Gebauer–Möller pair update.

use std::cmp::Ordering;

use num_traits::{One, Zero};
use thiserror::Error;

use super::{Monomial, MonomialOrder, Polynomial, Rational, SortKey};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroebnerError {
    #[error("basis grew past {limit} terms")]
    TermBudget { limit: usize },
    #[error("more than {limit} pair reductions")]
    PairBudget { limit: usize },
    #[error("generator list is empty or entirely zero")]
    NoGenerators,
}

/// Resource limits for a basis computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_basis_terms: usize,
    pub max_pair_reductions: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_basis_terms: 50_000, max_pair_reductions: 200_000 }
    }
}

#[derive(Clone, Debug)]
struct Term {
    key: SortKey,
    mono: Monomial,
    coeff: Rational,
}

/// Polynomial with terms stored in ascending order, so the leading term is last.
#[derive(Clone, Debug, Default)]
struct OrdPoly {
    terms: Vec<Term>,
}

impl OrdPoly {
    fn from_poly(p: &Polynomial, order: &MonomialOrder) -> OrdPoly {
        let mut terms: Vec<Term> =
            p.terms().map(|(m, c)| Term { key: order.key(m), mono: *m, coeff: c.clone() }).collect();
        terms.sort_by_key(|x| x.key);
        OrdPoly { terms }
    }

    fn to_poly(&self) -> Polynomial {
        Polynomial::from_terms(self.terms.iter().map(|t| (t.mono, t.coeff.clone())))
    }

    fn lead(&self) -> Option<&Term> {
        self.terms.last()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn make_monic(&mut self) {
        if let Some(lc) = self.lead().map(|t| t.coeff.clone()) {
            if !lc.is_one() {
                let inv = lc.recip();
                for t in &mut self.terms {
                    t.coeff *= &inv;
                }
            }
        }
    }

    /// `self - c * m * g`; terms that cancel are dropped.
    fn sub_scaled(&self, c: &Rational, m: &Monomial, g: &OrdPoly, order: &MonomialOrder) -> OrdPoly {
        let mkey = order.key(m);
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &g.terms;
        while i < a.len() || j < b.len() {
            let bkey = (j < b.len()).then(|| add_keys(&b[j].key, &mkey));
            let ord = match (i < a.len(), bkey) {
                (true, Some(k)) => a[i].key.cmp(&k),
                (true, None) => Ordering::Less,
                (false, Some(_)) => Ordering::Greater,
                (false, None) => unreachable!(),
            };
            match ord {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(Term { key: bkey.unwrap(), mono: b[j].mono.mul(m), coeff: -(c * &b[j].coeff) });
                    j += 1;
                }
                Ordering::Equal => {
                    let v = &a[i].coeff - c * &b[j].coeff;
                    if !v.is_zero() {
                        out.push(Term { key: a[i].key, mono: a[i].mono, coeff: v });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        OrdPoly { terms: out }
    }
}

fn add_keys(x: &SortKey, y: &SortKey) -> SortKey {
    let mut k = x.0;
    for (a, b) in k.iter_mut().zip(y.0.iter()) {
        *a += *b;
    }
    SortKey(k)
}

/// Fully reduce `p` modulo `basis` (all basis elements monic, nonzero).
fn reduce(p: OrdPoly, basis: &[&OrdPoly], order: &MonomialOrder) -> OrdPoly {
    let mut work = p;
    let mut rem: Vec<Term> = Vec::new();
    while let Some(lt) = work.terms.last().cloned() {
        let divisor = basis.iter().find(|g| g.lead().map(|l| l.mono.divides(&lt.mono)).unwrap_or(false));
        match divisor {
            Some(g) => {
                let glead = g.lead().unwrap();
                let q = glead.mono.quotient_of(&lt.mono).unwrap();
                let c = &lt.coeff / &glead.coeff;
                work = work.sub_scaled(&c, &q, g, order);
            }
            None => {
                work.terms.pop();
                rem.push(lt);
            }
        }
    }
    rem.reverse();
    OrdPoly { terms: rem }
}

fn s_poly_ord(f: &OrdPoly, g: &OrdPoly, order: &MonomialOrder) -> OrdPoly {
    let (fl, gl) = (f.lead().unwrap(), g.lead().unwrap());
    let l = fl.mono.lcm(&gl.mono);
    let uf = fl.mono.quotient_of(&l).unwrap();
    let ug = gl.mono.quotient_of(&l).unwrap();
    let zero = OrdPoly::default();
    let a = zero.sub_scaled(&(-fl.coeff.recip()), &uf, f, order);
    a.sub_scaled(&gl.coeff.recip(), &ug, g, order)
}

/// S-polynomial `lcm/LT(f) * f - lcm/LT(g) * g`.
pub fn s_polynomial(f: &Polynomial, g: &Polynomial, order: &MonomialOrder) -> Polynomial {
    if f.is_zero() || g.is_zero() {
        return Polynomial::zero();
    }
    let fo = OrdPoly::from_poly(f, order);
    let go = OrdPoly::from_poly(g, order);
    s_poly_ord(&fo, &go, order).to_poly()
}

/// Remainder of multivariate division of `p` by `basis`.
pub fn normal_form(p: &Polynomial, basis: &[Polynomial], order: &MonomialOrder) -> Polynomial {
    let mut ords: Vec<OrdPoly> = basis.iter().filter(|g| !g.is_zero()).map(|g| OrdPoly::from_poly(g, order)).collect();
    for g in &mut ords {
        g.make_monic();
    }
    let refs: Vec<&OrdPoly> = ords.iter().collect();
    reduce(OrdPoly::from_poly(p, order), &refs, order).to_poly()
}

#[derive(Clone, Copy)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

/// Reduced Gröbner basis: monic generators sorted by ascending leading monomial.
pub fn groebner_basis(
    gens: &[Polynomial],
    order: &MonomialOrder,
    budget: Budget,
) -> Result<Vec<Polynomial>, GroebnerError> {
    let mut polys: Vec<OrdPoly> = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    let mut reductions = 0usize;

    let mut inputs: Vec<OrdPoly> = gens.iter().filter(|g| !g.is_zero()).map(|g| OrdPoly::from_poly(g, order)).collect();
    if inputs.is_empty() {
        return Err(GroebnerError::NoGenerators);
    }
    inputs.sort_by_key(|a| a.lead().unwrap().key);

    for mut g in inputs {
        let refs: Vec<&OrdPoly> = active.iter().map(|&k| &polys[k]).collect();
        g = reduce(g, &refs, order);
        if g.is_zero() {
            continue;
        }
        g.make_monic();
        insert(&mut polys, &mut active, &mut pairs, g, budget)?;
    }

    while !pairs.is_empty() {
        // normal strategy: smallest lcm first, ties by age
        let (pos, _) = pairs
            .iter()
            .enumerate()
            .min_by(|(_, x), (_, y)| order.cmp(&x.lcm, &y.lcm).then((x.j, x.i).cmp(&(y.j, y.i))))
            .unwrap();
        let pair = pairs.swap_remove(pos);
        reductions += 1;
        if reductions > budget.max_pair_reductions {
            return Err(GroebnerError::PairBudget { limit: budget.max_pair_reductions });
        }
        let s = s_poly_ord(&polys[pair.i], &polys[pair.j], order);
        let refs: Vec<&OrdPoly> = active.iter().map(|&k| &polys[k]).collect();
        let mut h = reduce(s, &refs, order);
        if h.is_zero() {
            continue;
        }
        h.make_monic();
        insert(&mut polys, &mut active, &mut pairs, h, budget)?;
    }

    // interreduce the minimal basis
    let mut minimal: Vec<OrdPoly> = active.iter().map(|&k| polys[k].clone()).collect();
    for idx in 0..minimal.len() {
        let current = std::mem::take(&mut minimal[idx]);
        let lead = current.lead().unwrap().clone();
        let tail = OrdPoly { terms: current.terms[..current.terms.len() - 1].to_vec() };
        let others: Vec<&OrdPoly> =
            minimal.iter().enumerate().filter(|(k, p)| *k != idx && !p.is_zero()).map(|(_, p)| p).collect();
        let mut reduced = reduce(tail, &others, order);
        reduced.terms.push(lead);
        reduced.make_monic();
        minimal[idx] = reduced;
    }
    minimal.sort_by_key(|a| a.lead().unwrap().key);
    Ok(minimal.iter().map(OrdPoly::to_poly).collect())
}

fn insert(
    polys: &mut Vec<OrdPoly>,
    active: &mut Vec<usize>,
    pairs: &mut Vec<Pair>,
    h: OrdPoly,
    budget: Budget,
) -> Result<(), GroebnerError> {
    let t = polys.len();
    let hl = h.lead().unwrap().mono;
    polys.push(h);
    let lt = |k: usize| polys[k].lead().unwrap().mono;

    // candidate pairs with the new element
    let mut cands: Vec<Pair> = active.iter().map(|&g| Pair { i: g, j: t, lcm: lt(g).lcm(&hl) }).collect();
    let mut kept: Vec<Pair> = Vec::new();
    while let Some(p) = cands.pop() {
        let coprime = lt(p.i).is_coprime(&hl);
        let dominated = cands.iter().chain(kept.iter()).any(|q| q.lcm.divides(&p.lcm));
        if coprime || !dominated {
            kept.push(p);
        }
    }
    let new_pairs: Vec<Pair> = kept.into_iter().filter(|p| !lt(p.i).is_coprime(&hl)).collect();

    pairs.retain(|p| !hl.divides(&p.lcm) || lt(p.i).lcm(&hl) == p.lcm || lt(p.j).lcm(&hl) == p.lcm);
    pairs.extend(new_pairs);

    active.retain(|&g| !hl.divides(&lt(g)));
    active.push(t);

    let terms: usize = active.iter().map(|&k| polys[k].terms.len()).sum();
    if terms > budget.max_basis_terms {
        return Err(GroebnerError::TermBudget { limit: budget.max_basis_terms });
    }
    Ok(())
}

/// Membership test under the default order.
pub fn ideal_member(p: &Polynomial, gens: &[Polynomial], budget: Budget) -> Result<bool, GroebnerError> {
    let order = MonomialOrder::grevlex();
    let gb = groebner_basis(gens, &order, budget)?;
    Ok(normal_form(p, &gb, &order).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::rat;

    fn g(i: usize) -> Polynomial {
        Polynomial::gamma(i)
    }

    #[test]
    fn linear_elimination() {
        let o = MonomialOrder::grevlex();
        let gb = groebner_basis(&[&g(1) + &g(2), &g(1) - &g(2)], &o, Budget::default()).unwrap();
        assert_eq!(gb, vec![g(2), g(1)]);
    }

    #[test]
    fn monomial_ideal_is_its_own_basis() {
        let o = MonomialOrder::grevlex();
        let gens = vec![g(1).pow(2), &g(1) * &g(2)];
        let gb = groebner_basis(&gens, &o, Budget::default()).unwrap();
        assert_eq!(gb.len(), 2);
        assert!(gb.contains(&gens[0]) && gb.contains(&gens[1]));
        assert!(normal_form(&s_polynomial(&gens[0], &gens[1], &o), &gb, &o).is_zero());
    }

    #[test]
    fn self_reduction() {
        let o = MonomialOrder::grevlex();
        let p = &g(1) + &g(2);
        assert!(normal_form(&p, std::slice::from_ref(&p), &o).is_zero());
    }

    #[test]
    fn empty_generators_rejected() {
        let o = MonomialOrder::grevlex();
        assert_eq!(groebner_basis(&[Polynomial::zero()], &o, Budget::default()), Err(GroebnerError::NoGenerators));
    }

    #[test]
    fn disjoint_variable_not_member() {
        assert!(!ideal_member(&g(1), &[g(2)], Budget::default()).unwrap());
    }

    #[test]
    fn pair_budget_is_reported() {
        let o = MonomialOrder::grevlex();
        let gens =
            vec![g(1).pow(3) - g(2).scale(&rat(2, 1)), &(&g(1) * &g(2)) * &g(3) - g(4), g(2).pow(2) - &g(3) * &g(5)];
        let tight = Budget { max_basis_terms: 50_000, max_pair_reductions: 1 };
        assert_eq!(groebner_basis(&gens, &o, tight), Err(GroebnerError::PairBudget { limit: 1 }));
    }
}
