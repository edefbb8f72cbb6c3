//! Pattern matchers that turn diagram shapes into exclusions, vorticity
//! constraints, or Λ-branches.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::diagram::{members, Color, Diagram, VertexSet};
use crate::exactpoly::{Polynomial, VarId, NVARS};
use crate::vorticity::ConstraintLedger;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LemmaId {
    #[serde(rename = "RuleIV-vorticity")]
    RuleIv,
    SumT12,
    CorSumT12,
    LIdentity,
    #[serde(rename = "IsolatedStroke-Lambda")]
    IsolatedStrokeLambda,
    #[serde(rename = "IsolatedTriangle-Lambda")]
    IsolatedTriangleLambda,
    Triangle,
    Triangle2,
    Dumbbell,
    Quadrilateral,
}

impl LemmaId {
    pub fn name(self) -> &'static str {
        match self {
            LemmaId::RuleIv => "RuleIV-vorticity",
            LemmaId::SumT12 => "SumT12",
            LemmaId::CorSumT12 => "CorSumT12",
            LemmaId::LIdentity => "LIdentity",
            LemmaId::IsolatedStrokeLambda => "IsolatedStroke-Lambda",
            LemmaId::IsolatedTriangleLambda => "IsolatedTriangle-Lambda",
            LemmaId::Triangle => "Triangle",
            LemmaId::Triangle2 => "Triangle2",
            LemmaId::Dumbbell => "Dumbbell",
            LemmaId::Quadrilateral => "Quadrilateral",
        }
    }
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LambdaClass {
    #[serde(rename = "±1")]
    PlusMinusOne,
    #[serde(rename = "±i")]
    PlusMinusI,
    #[serde(rename = "unconstrained")]
    Unconstrained,
}

impl fmt::Display for LambdaClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LambdaClass::PlusMinusOne => "±1",
            LambdaClass::PlusMinusI => "±i",
            LambdaClass::Unconstrained => "unconstrained",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BranchTag {
    pub lambda_class: LambdaClass,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branch {
    pub tag: BranchTag,
    pub equalities: Vec<Polynomial>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Effect {
    Exclude(String),
    Emit { equalities: Vec<Polynomial>, nonzeros: Vec<Polynomial> },
    Branch(Vec<Branch>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaFinding {
    pub lemma: LemmaId,
    pub color: Color,
    pub binding: Vec<usize>,
    pub effect: Effect,
    #[serde(default)]
    pub annotations: Vec<String>,
}

impl LemmaFinding {
    fn new(lemma: LemmaId, color: Color, binding: Vec<usize>, effect: Effect) -> Self {
        let binding = normalize_binding(lemma, binding);
        LemmaFinding { lemma, color, binding, effect, annotations: Vec::new() }
    }

    fn note(mut self, s: String) -> Self {
        self.annotations.push(s);
        self
    }

    pub fn is_exclusion(&self) -> bool {
        matches!(self.effect, Effect::Exclude(_))
    }

    /// Image under a vertex relabeling (`perm[k-1]` is the new label of `k`).
    pub fn relabel(&self, perm: &[usize]) -> LemmaFinding {
        let mut map: [VarId; NVARS] = std::array::from_fn(|i| VarId::new(i).expect("index in range"));
        for (k, &img) in perm.iter().enumerate() {
            map[VarId::gamma(k + 1).index()] = VarId::gamma(img);
        }
        let ren = |ps: &[Polynomial]| ps.iter().map(|p| p.rename(&map)).collect::<Vec<_>>();
        let effect = match &self.effect {
            Effect::Exclude(s) => Effect::Exclude(s.clone()),
            Effect::Emit { equalities, nonzeros } => {
                Effect::Emit { equalities: ren(equalities), nonzeros: ren(nonzeros) }
            }
            Effect::Branch(bs) => {
                Effect::Branch(bs.iter().map(|b| Branch { tag: b.tag, equalities: ren(&b.equalities) }).collect())
            }
        };
        LemmaFinding {
            lemma: self.lemma,
            color: self.color,
            binding: normalize_binding(self.lemma, self.binding.iter().map(|&v| perm[v - 1]).collect()),
            effect,
            annotations: Vec::new(),
        }
    }

    /// Image under the color swap; annotations are dropped.
    pub fn swap_colors(&self) -> LemmaFinding {
        LemmaFinding { color: self.color.other(), annotations: Vec::new(), ..self.clone() }
    }

    /// Comparable form: annotations dropped, polynomial lists sorted.
    pub fn comparable(&self) -> String {
        let sorted = |ps: &[Polynomial]| {
            let mut v: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
            v.sort();
            v.join(";")
        };
        let eff = match &self.effect {
            Effect::Exclude(_) => "exclude".to_string(),
            Effect::Emit { equalities, nonzeros } => format!("emit[{}|{}]", sorted(equalities), sorted(nonzeros)),
            Effect::Branch(bs) => {
                let mut v: Vec<String> =
                    bs.iter().map(|b| format!("{}:{}", b.tag.lambda_class, sorted(&b.equalities))).collect();
                v.sort();
                format!("branch[{}]", v.join(","))
            }
        };
        format!("{}/{}/{:?}/{}", self.lemma, self.color, self.binding, eff)
    }
}

fn normalize_binding(lemma: LemmaId, mut b: Vec<usize>) -> Vec<usize> {
    match lemma {
        LemmaId::IsolatedTriangleLambda => {
            // circled pair first, then the uncircled apex
            b[..2].sort_unstable();
        }
        LemmaId::Dumbbell => {
            let (mut p, mut q) = ([b[0], b[1]], [b[2], b[3]]);
            p.sort_unstable();
            q.sort_unstable();
            if q < p {
                std::mem::swap(&mut p, &mut q);
            }
            b = vec![p[0], p[1], q[0], q[1]];
        }
        _ => b.sort_unstable(),
    }
    b
}

fn g(i: usize) -> Polynomial {
    Polynomial::gamma(i)
}

fn gamma_of(s: VertexSet) -> Polynomial {
    members(s).into_iter().map(g).sum()
}

fn l_of(s: VertexSet) -> Polynomial {
    let v = members(s);
    let mut acc = Polynomial::zero();
    for (i, &a) in v.iter().enumerate() {
        for &b in &v[i + 1..] {
            acc = acc + g(a) * g(b);
        }
    }
    acc
}

fn pairwise_close(d: &Diagram, c: Color, s: VertexSet) -> bool {
    let cl = d.closeness();
    let v = members(s);
    v.iter().all(|&a| v.iter().all(|&b| cl.close(c, a, b)))
}

/// Stroke components with at least two vertices.
fn stroke_components(d: &Diagram, c: Color) -> Vec<VertexSet> {
    d.components(c).into_iter().filter(|k| k.count_ones() >= 2).collect()
}

fn fully_zw(d: &Diagram, s: VertexSet) -> bool {
    d.is_clique(Color::Z, s) && d.is_clique(Color::W, s)
}

/// Every vertex outside `s` is `c`-uncircled while `s` is fully `c`-circled,
/// so each outside vertex is `c`-far from all of `s`.
fn outside_far(d: &Diagram, c: Color, s: VertexSet) -> bool {
    d.circle_set(c) & s == s && d.circle_set(c) & !s & d.all() == 0
}

pub fn apply_rule_iv(d: &Diagram) -> Vec<LemmaFinding> {
    let mut out = Vec::new();
    for c in Color::BOTH {
        for k in stroke_components(d, c) {
            let s = k & d.circle_set(c);
            if s.count_ones() >= 2 && pairwise_close(d, c, s) {
                let f = LemmaFinding::new(
                    LemmaId::RuleIv,
                    c,
                    members(s),
                    Effect::Emit { equalities: vec![gamma_of(s)], nonzeros: vec![] },
                );
                out.push(f);
            }
        }
    }
    out
}

/// The `c`-circled set when it is exactly two vertices.
fn circled_pair(d: &Diagram, c: Color) -> Option<(usize, usize)> {
    match d.circle_list(c).as_slice() {
        [k, l] => Some((*k, *l)),
        _ => None,
    }
}

pub fn apply_sum_t12(d: &Diagram) -> Vec<LemmaFinding> {
    let mut out = Vec::new();
    for c in Color::BOTH {
        if let Some((k, l)) = circled_pair(d, c) {
            if d.closeness().close(c, k, l) {
                let f = LemmaFinding::new(
                    LemmaId::SumT12,
                    c,
                    vec![k, l],
                    Effect::Emit { equalities: vec![], nonzeros: vec![g(k) + g(l)] },
                );
                let lam = if c == Color::Z { "Λ̄" } else { "Λ" };
                out.push(f.note(format!("{lam} z_{{{k}{l}}} w_{{{k}{l}}} ~ 1/(Γ{k}+Γ{l})")));
            }
        }
    }
    out
}

pub fn apply_cor_sum_t12(d: &Diagram) -> Vec<LemmaFinding> {
    let mut out = Vec::new();
    for c in Color::BOTH {
        if let Some((k, l)) = circled_pair(d, c) {
            if d.has_stroke(c, k, l) {
                let f = LemmaFinding::new(
                    LemmaId::CorSumT12,
                    c,
                    vec![k, l],
                    Effect::Emit { equalities: vec![], nonzeros: vec![g(k) + g(l)] },
                );
                let o = c.other();
                out.push(f.note(format!("{c}_{{{k}{l}}} maximal")).note(format!("{o}_{k}, {o}_{l} ⪯ ε²")));
            }
        }
    }
    out
}

pub fn apply_l_identity(d: &Diagram) -> Vec<LemmaFinding> {
    let mut out = Vec::new();
    for c in Color::BOTH {
        for k in stroke_components(d, c) {
            if k.count_ones() >= 3 && d.is_clique(c, k) && k & d.circle_set(c) == 0 {
                out.push(LemmaFinding::new(
                    LemmaId::LIdentity,
                    c,
                    members(k),
                    Effect::Emit { equalities: vec![l_of(k)], nonzeros: vec![] },
                ));
            }
        }
    }
    out
}

fn tag(lambda_class: LambdaClass) -> BranchTag {
    BranchTag { lambda_class }
}

pub fn apply_lambda_lemmas(d: &Diagram) -> Vec<LemmaFinding> {
    let mut out = Vec::new();
    let all = d.all();
    for c in Color::BOTH {
        let circ = d.circle_set(c);
        for k in stroke_components(d, c) {
            let rest = all & !k;
            let rest_sum = if rest == 0 { Polynomial::zero() } else { gamma_of(rest) };
            if k.count_ones() == 2 && circ == k {
                let v = members(k);
                let branches = vec![
                    Branch { tag: tag(LambdaClass::PlusMinusOne), equalities: vec![rest_sum.clone()] },
                    Branch {
                        tag: tag(LambdaClass::PlusMinusI),
                        equalities: vec![l_of(all), g(v[0]) * g(v[1]) - l_of(rest)],
                    },
                ];
                out.push(LemmaFinding::new(LemmaId::IsolatedStrokeLambda, c, v, Effect::Branch(branches)));
            }
            if k.count_ones() == 3 && d.is_clique(c, k) && circ & k == circ && circ.count_ones() == 2 {
                let apex = members(k & !circ)[0];
                let pair = members(circ);
                let branches = vec![
                    Branch { tag: tag(LambdaClass::PlusMinusOne), equalities: vec![rest_sum.clone()] },
                    Branch {
                        tag: tag(LambdaClass::PlusMinusI),
                        equalities: vec![l_of(all), l_of(k) - l_of(rest) - g(apex) * &rest_sum],
                    },
                ];
                out.push(LemmaFinding::new(
                    LemmaId::IsolatedTriangleLambda,
                    c,
                    vec![pair[0], pair[1], apex],
                    Effect::Branch(branches),
                ));
            }
        }
    }
    out
}

fn both_circled(d: &Diagram) -> VertexSet {
    d.circle_set(Color::Z) & d.circle_set(Color::W)
}

/// Structural exclusions in the fixed order Triangle, Triangle2, Dumbbell,
/// Quadrilateral; within each lemma `z` before `w`.
pub fn apply_structural_exclusions(d: &Diagram) -> Vec<LemmaFinding> {
    let mut out = Vec::new();
    let bi = both_circled(d);
    for c in Color::BOTH {
        for k in stroke_components(d, c) {
            if k.count_ones() == 3 && fully_zw(d, k) && bi & k == k && outside_far(d, c, k) {
                out.push(LemmaFinding::new(
                    LemmaId::Triangle,
                    c,
                    members(k),
                    Effect::Exclude(format!("isolated fully circled zw-triangle with every other vertex {c}-far")),
                ));
            }
        }
    }
    for c in Color::BOTH {
        for k in stroke_components(d, c) {
            if k.count_ones() == 3 && d.is_clique(c, k) && outside_far(d, c, k) && pairwise_close(d, c, k) {
                out.push(LemmaFinding::new(
                    LemmaId::Triangle2,
                    c,
                    members(k),
                    Effect::Exclude(format!("{c}-circled {c}-triangle, pairwise {c}-close, others {c}-far")),
                ));
            }
        }
    }
    for c in Color::BOTH {
        let pairs: Vec<VertexSet> = stroke_components(d, c)
            .into_iter()
            .filter(|&p| p.count_ones() == 2 && fully_zw(d, p) && bi & p == p)
            .collect();
        for (i, &p) in pairs.iter().enumerate() {
            for &q in &pairs[i + 1..] {
                let rest = d.all() & !(p | q);
                let rest_bare = (d.circle_set(Color::Z) | d.circle_set(Color::W)) & rest == 0;
                if rest_bare {
                    let mut b = members(p);
                    b.extend(members(q));
                    out.push(LemmaFinding::new(
                        LemmaId::Dumbbell,
                        c,
                        b,
                        Effect::Exclude("two isolated circled zw-pairs with no bounded difference to the rest".into()),
                    ));
                }
            }
        }
    }
    for c in Color::BOTH {
        for k in stroke_components(d, c) {
            if k.count_ones() == 4 && fully_zw(d, k) && outside_far(d, c, k) {
                out.push(LemmaFinding::new(
                    LemmaId::Quadrilateral,
                    c,
                    members(k),
                    Effect::Exclude(format!("{c}-circled zw-quadrilateral isolated with every other vertex {c}-far")),
                ));
            }
        }
    }
    out
}

/// All findings in a fixed order.
pub fn apply_all(d: &Diagram) -> Vec<LemmaFinding> {
    let mut out = apply_structural_exclusions(d);
    out.extend(apply_rule_iv(d));
    out.extend(apply_sum_t12(d));
    out.extend(apply_cor_sum_t12(d));
    out.extend(apply_l_identity(d));
    out.extend(apply_lambda_lemmas(d));
    out
}

/// The ledger assembled from every Emit finding.
pub fn base_ledger(n: usize, findings: &[LemmaFinding]) -> ConstraintLedger {
    let mut l = ConstraintLedger::new(n);
    for f in findings {
        if let Effect::Emit { equalities, nonzeros } = &f.effect {
            equalities.iter().for_each(|p| l.require_zero(p.clone()));
            nonzeros.iter().for_each(|p| l.require_nonzero(p.clone()));
        }
    }
    l
}

/// Λ-branches merged across findings by class; empty when no finding branches.
pub fn merged_branches(findings: &[LemmaFinding]) -> Vec<Branch> {
    let mut out: Vec<Branch> = Vec::new();
    for f in findings {
        if let Effect::Branch(bs) = &f.effect {
            for b in bs {
                match out.iter_mut().find(|x| x.tag == b.tag) {
                    Some(x) => {
                        for p in &b.equalities {
                            if !x.equalities.contains(p) {
                                x.equalities.push(p.clone());
                            }
                        }
                    }
                    None => out.push(b.clone()),
                }
            }
        }
    }
    out.sort_by_key(|b| b.tag);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri() -> Vec<(usize, usize)> {
        vec![(1, 2), (1, 3), (2, 3)]
    }

    fn emitted(fs: &[LemmaFinding]) -> Vec<String> {
        let mut v = Vec::new();
        for f in fs {
            if let Effect::Emit { equalities, nonzeros } = &f.effect {
                v.extend(equalities.iter().map(|p| format!("{p} = 0")));
                v.extend(nonzeros.iter().map(|p| format!("{p} != 0")));
            }
        }
        v
    }

    #[test]
    fn rule_iv_examples() {
        let d = Diagram::new(5, &tri(), &tri(), &[1, 2, 3], &[]).unwrap();
        assert_eq!(emitted(&apply_rule_iv(&d)), vec!["G1 + G2 + G3 = 0"]);
        let d = Diagram::new(5, &[(1, 2)], &[(1, 2)], &[1, 2], &[]).unwrap();
        assert_eq!(emitted(&apply_rule_iv(&d)), vec!["G1 + G2 = 0"]);
        // z-triangle with two z-circled vertices and no w-strokes: not z-close
        let d = Diagram::new(5, &tri(), &[(4, 5)], &[2, 3], &[4, 5]).unwrap();
        assert!(apply_rule_iv(&d).iter().all(|f| f.color == Color::W));
    }

    #[test]
    fn sum_t12_and_corollary() {
        // zw-triangle uncircled, circled zw-pair 45
        let d = Diagram::new(5, &[(1, 2), (1, 3), (2, 3), (4, 5)], &[(1, 2), (1, 3), (2, 3), (4, 5)], &[4, 5], &[4, 5])
            .unwrap();
        let s = apply_sum_t12(&d);
        assert_eq!(s.len(), 2);
        assert_eq!(emitted(&s[..1]), vec!["G4 + G5 != 0"]);
        let c = apply_cor_sum_t12(&d);
        assert_eq!(c[0].annotations[0], "z_{45} maximal");
        let d = Diagram::new(5, &[(1, 2)], &[(3, 4)], &[1, 2], &[3, 4]).unwrap();
        assert_eq!(emitted(&apply_cor_sum_t12(&d)), vec!["G1 + G2 != 0", "G3 + G4 != 0"]);
        let d = Diagram::new(5, &tri(), &[(4, 5)], &[2, 3], &[4, 5]).unwrap();
        let c = apply_cor_sum_t12(&d);
        assert_eq!(c[0].binding, vec![2, 3]);
    }

    #[test]
    fn l_identity_examples() {
        let d = Diagram::new(5, &tri(), &[(4, 5)], &[], &[4, 5]).unwrap();
        assert_eq!(emitted(&apply_l_identity(&d)), vec!["G1 * G2 + G1 * G3 + G2 * G3 = 0"]);
        let d = Diagram::new(5, &tri(), &[(4, 5)], &[1, 2, 3], &[4, 5]).unwrap();
        assert!(apply_l_identity(&d).is_empty());
    }

    #[test]
    fn lambda_branches() {
        let d = Diagram::new(5, &[(1, 2)], &[(3, 4)], &[1, 2], &[3, 4]).unwrap();
        let fs = apply_lambda_lemmas(&d);
        assert_eq!(fs.len(), 2);
        let Effect::Branch(bs) = &fs[0].effect else { panic!() };
        assert_eq!(bs[0].equalities[0].to_string(), "G3 + G4 + G5");
        assert_eq!(bs[1].equalities[1], g(1) * g(2) - l_of(0b11100));
        let merged = merged_branches(&fs);
        assert_eq!(merged.len(), 2);
        let d = Diagram::new(5, &[(1, 2)], &[(3, 4), (3, 5), (4, 5)], &[1, 2], &[4, 5]).unwrap();
        let fs = apply_lambda_lemmas(&d);
        assert_eq!(fs[1].lemma, LemmaId::IsolatedTriangleLambda);
        assert_eq!(fs[1].binding, vec![4, 5, 3]);
    }

    #[test]
    fn structural() {
        let d = Diagram::new(5, &[(1, 2), (3, 4)], &[(1, 2), (3, 4)], &[1, 2, 3, 4], &[1, 2, 3, 4]).unwrap();
        let fs = apply_structural_exclusions(&d);
        assert_eq!(fs[0].lemma, LemmaId::Dumbbell);
        let t = tri();
        let d = Diagram::new(5, &t, &t, &[1, 2, 3], &[1, 2, 3]).unwrap();
        assert_eq!(apply_structural_exclusions(&d)[0].lemma, LemmaId::Triangle);
        let mut q = Vec::new();
        for a in 1..=4 {
            for b in a + 1..=4 {
                q.push((a, b));
            }
        }
        let d = Diagram::new(5, &q, &q, &[1, 2, 3, 4], &[1, 2, 3, 4]).unwrap();
        assert!(apply_structural_exclusions(&d).iter().any(|f| f.lemma == LemmaId::Quadrilateral));
    }

    #[test]
    fn finding_json() {
        let d = Diagram::new(5, &[(1, 2), (3, 4)], &[(1, 2), (3, 4)], &[1, 2, 3, 4], &[1, 2, 3, 4]).unwrap();
        let f = &apply_structural_exclusions(&d)[0];
        let s = serde_json::to_string(f).unwrap();
        assert!(s.starts_with(r#"{"lemma":"Dumbbell","color":"z","binding":[1,2,3,4],"effect":{"exclude":"#));
        let back: LemmaFinding = serde_json::from_str(&s).unwrap();
        assert_eq!(&back, f);
    }
}
