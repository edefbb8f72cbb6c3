//! Helpers shared by the integration test targets.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use vortex_core::diagram::{CanonicalKey, Diagram};
use vortex_core::exactpoly::{rat, Polynomial};
use vortex_core::lemmas::{apply_all, LemmaFinding};
use vortex_core::vorticity::{angular_momentum, gamma_sum};

type Pair = (usize, usize);
const PAIRS3: [Pair; 3] = [(0, 1), (0, 2), (1, 2)];

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Raw {
    pub z: Vec<Pair>,
    pub w: Vec<Pair>,
    pub zc: Vec<usize>,
    pub wc: Vec<usize>,
}

fn adjacent(edges: &[Pair], a: usize, b: usize) -> bool {
    edges.contains(&(a.min(b), a.max(b)))
}

// reachability through `edges`, reflexive
fn reach(edges: &[Pair], n: usize) -> Vec<Vec<bool>> {
    let mut r = vec![vec![false; n]; n];
    for i in 0..n {
        r[i][i] = true;
    }
    for &(a, b) in edges {
        r[a][b] = true;
        r[b][a] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if r[i][k] && r[k][j] {
                    r[i][j] = true;
                }
            }
        }
    }
    r
}

fn rules_hold(x: &Raw, n: usize) -> bool {
    for (edges, circ, other) in [(&x.z, &x.zc, &x.w), (&x.w, &x.wc, &x.z)] {
        let deg = |v: usize| edges.iter().filter(|&&(a, b)| a == v || b == v).count();
        let comp = reach(edges, n);
        // components are complete
        for i in 0..n {
            for j in 0..n {
                if i != j && comp[i][j] && !adjacent(edges, i, j) {
                    return false;
                }
            }
        }
        for v in 0..n {
            if deg(v) == 1 && !circ.contains(&v) {
                return false;
            }
            if circ.contains(&v) && deg(v) == 0 {
                return false;
            }
        }
        if edges.is_empty() {
            return false;
        }
        // closeness in this color comes from the other color's strokes
        let close = reach(other, n);
        for i in 0..n {
            for j in 0..n {
                if close[i][j] && circ.contains(&i) != circ.contains(&j) {
                    return false;
                }
            }
        }
        for i in 0..n {
            let count = (0..n).filter(|&j| comp[i][j] && circ.contains(&j)).count();
            if count == 1 {
                return false;
            }
        }
    }
    true
}

fn image(x: &Raw, p: &[usize], swap: bool) -> Raw {
    let map_e = |e: &Vec<Pair>| {
        let mut v: Vec<Pair> = e.iter().map(|&(a, b)| (p[a].min(p[b]), p[a].max(p[b]))).collect();
        v.sort();
        v
    };
    let map_c = |c: &Vec<usize>| {
        let mut v: Vec<usize> = c.iter().map(|&a| p[a]).collect();
        v.sort();
        v
    };
    let r = Raw { z: map_e(&x.z), w: map_e(&x.w), zc: map_c(&x.zc), wc: map_c(&x.wc) };
    if swap {
        Raw { z: r.w, w: r.z, zc: r.wc, wc: r.zc }
    } else {
        r
    }
}

/// Independent n = 3 oracle: every raw candidate is checked against a
/// directly coded rule checker and reduced to its orbit under relabeling and
/// color swap. Returns the number of valid raw candidates and the orbit keys.
pub fn brute_force_three() -> (u64, usize, BTreeSet<CanonicalKey>) {
    let n = 3;
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let subsets = |m: usize| -> Vec<Vec<usize>> {
        (0..1 << m).map(|s: usize| (0..m).filter(|i| s >> i & 1 == 1).collect()).collect()
    };
    let mut orbits: BTreeSet<Raw> = BTreeSet::new();
    let mut valid_raw = 0;
    for ze in subsets(3) {
        for we in subsets(3) {
            for zc in subsets(n) {
                for wc in subsets(n) {
                    let x = Raw {
                        z: ze.iter().map(|&i| PAIRS3[i]).collect(),
                        w: we.iter().map(|&i| PAIRS3[i]).collect(),
                        zc: zc.clone(),
                        wc: wc.clone(),
                    };
                    if rules_hold(&x, n) {
                        valid_raw += 1;
                        let rep = perms.iter().flat_map(|p| [image(&x, p, false), image(&x, p, true)]).min().unwrap();
                        orbits.insert(rep);
                    }
                }
            }
        }
    }
    let keys: BTreeSet<_> = orbits
        .iter()
        .map(|x| {
            let e = |v: &Vec<Pair>| v.iter().map(|&(a, b)| (a + 1, b + 1)).collect::<Vec<_>>();
            let c = |v: &Vec<usize>| v.iter().map(|a| a + 1).collect::<Vec<_>>();
            Diagram::new(n, &e(&x.z), &e(&x.w), &c(&x.zc), &c(&x.wc)).unwrap().canonical_key()
        })
        .collect();
    (valid_raw, orbits.len(), keys)
}

fn sorted(fs: impl IntoIterator<Item = LemmaFinding>) -> Vec<String> {
    let mut v: Vec<String> = fs.into_iter().map(|f| f.comparable()).collect();
    v.sort();
    v
}

/// Number of symmetry violations of `d` under `perm` and under the color swap.
pub fn violations(d: &Diagram, perm: &[usize]) -> Vec<String> {
    let mut out = Vec::new();
    let base = apply_all(d);
    for (name, img, expected) in [
        ("relabel", d.relabel(perm), sorted(base.iter().map(|f| f.relabel(perm)))),
        ("swap", d.swap_colors(), sorted(base.iter().map(|f| f.swap_colors()))),
    ] {
        if img.validate() != d.validate() {
            out.push(format!("{name}: validate differs on {d}"));
        }
        if img.stroke_count_c() != d.stroke_count_c() {
            out.push(format!("{name}: C differs on {d}"));
        }
        if sorted(apply_all(&img)) != expected {
            out.push(format!("{name}: findings differ on {d}"));
        }
        if img.canonical_key() != d.canonical_key() {
            out.push(format!("{name}: key differs on {d}"));
        }
    }
    out
}

pub fn random_subset(rng: &mut ChaCha8Rng, min: usize) -> Vec<usize> {
    let size = rng.gen_range(min..=5);
    let mut all: Vec<usize> = (1..=5).collect();
    all.shuffle(rng);
    let mut s = all[..size].to_vec();
    s.sort();
    s
}

pub fn random_constraint(rng: &mut ChaCha8Rng) -> Polynomial {
    match rng.gen_range(0..4) {
        0 => gamma_sum(&random_subset(rng, 2)).unwrap(),
        1 => angular_momentum(&random_subset(rng, 2)).unwrap(),
        2 => {
            let s = random_subset(rng, 2);
            Polynomial::gamma(s[0]) - Polynomial::gamma(s[1]) * Polynomial::constant(rat(rng.gen_range(1..=3), 1))
        }
        _ => {
            let s = random_subset(rng, 3);
            Polynomial::gamma(s[0]) * Polynomial::gamma(s[1]) - Polynomial::gamma(s[2]).pow(2)
        }
    }
}
