//! Two-colored diagrams: strokes and circles on labeled vertices.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MAX_N: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Z,
    W,
}

impl Color {
    pub const BOTH: [Color; 2] = [Color::Z, Color::W];

    pub fn other(self) -> Color {
        match self {
            Color::Z => Color::W,
            Color::W => Color::Z,
        }
    }

    fn idx(self) -> usize {
        self as usize
    }

    pub fn letter(self) -> char {
        match self {
            Color::Z => 'z',
            Color::W => 'w',
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("vertex count {0} outside 1..=8")]
    VertexCount(usize),
    #[error("vertex {0} outside 1..=n")]
    VertexRange(usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
}

/// Bitmask of vertices; bit `k-1` is vertex `k`.
pub type VertexSet = u8;

pub fn set_of(vs: &[usize]) -> VertexSet {
    vs.iter().fold(0, |m, &v| m | 1 << (v - 1))
}

pub fn members(s: VertexSet) -> Vec<usize> {
    (1..=MAX_N).filter(|v| s >> (v - 1) & 1 == 1).collect()
}

/// A diagram on vertices `1..=n`. Stored as per-color adjacency bitmasks.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "DiagramJson", try_from = "DiagramJson")]
pub struct Diagram {
    n: usize,
    adj: [[VertexSet; MAX_N]; 2],
    circles: [VertexSet; 2],
}

#[derive(Serialize, Deserialize)]
struct DiagramJson {
    n: usize,
    z_strokes: Vec<[usize; 2]>,
    w_strokes: Vec<[usize; 2]>,
    z_circles: Vec<usize>,
    w_circles: Vec<usize>,
}

impl From<Diagram> for DiagramJson {
    fn from(d: Diagram) -> Self {
        let pairs = |c| d.strokes(c).into_iter().map(|(a, b)| [a, b]).collect();
        DiagramJson {
            n: d.n,
            z_strokes: pairs(Color::Z),
            w_strokes: pairs(Color::W),
            z_circles: d.circle_list(Color::Z),
            w_circles: d.circle_list(Color::W),
        }
    }
}

impl TryFrom<DiagramJson> for Diagram {
    type Error = DiagramError;
    fn try_from(j: DiagramJson) -> Result<Self, Self::Error> {
        let z: Vec<(usize, usize)> = j.z_strokes.iter().map(|p| (p[0], p[1])).collect();
        let w: Vec<(usize, usize)> = j.w_strokes.iter().map(|p| (p[0], p[1])).collect();
        Diagram::new(j.n, &z, &w, &j.z_circles, &j.w_circles)
    }
}

impl Diagram {
    pub fn empty(n: usize) -> Result<Diagram, DiagramError> {
        if !(1..=MAX_N).contains(&n) {
            return Err(DiagramError::VertexCount(n));
        }
        Ok(Diagram { n, adj: [[0; MAX_N]; 2], circles: [0; 2] })
    }

    pub fn new(
        n: usize,
        z_strokes: &[(usize, usize)],
        w_strokes: &[(usize, usize)],
        z_circles: &[usize],
        w_circles: &[usize],
    ) -> Result<Diagram, DiagramError> {
        let mut d = Diagram::empty(n)?;
        for (c, strokes) in [(Color::Z, z_strokes), (Color::W, w_strokes)] {
            for &(a, b) in strokes {
                d.add_stroke(c, a, b)?;
            }
        }
        for (c, circ) in [(Color::Z, z_circles), (Color::W, w_circles)] {
            for &v in circ {
                d.add_circle(c, v)?;
            }
        }
        Ok(d)
    }

    /// From raw masks: `adj[c][v-1]` and `circles[c]`. Caller guarantees symmetry.
    pub(crate) fn from_masks(n: usize, adj: [[VertexSet; MAX_N]; 2], circles: [VertexSet; 2]) -> Diagram {
        Diagram { n, adj, circles }
    }

    fn check(&self, v: usize) -> Result<(), DiagramError> {
        if (1..=self.n).contains(&v) {
            Ok(())
        } else {
            Err(DiagramError::VertexRange(v))
        }
    }

    pub fn add_stroke(&mut self, c: Color, a: usize, b: usize) -> Result<(), DiagramError> {
        self.check(a)?;
        self.check(b)?;
        if a == b {
            return Err(DiagramError::SelfLoop(a));
        }
        self.adj[c.idx()][a - 1] |= 1 << (b - 1);
        self.adj[c.idx()][b - 1] |= 1 << (a - 1);
        Ok(())
    }

    pub fn add_circle(&mut self, c: Color, v: usize) -> Result<(), DiagramError> {
        self.check(v)?;
        self.circles[c.idx()] |= 1 << (v - 1);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn all(&self) -> VertexSet {
        ((1u16 << self.n) - 1) as VertexSet
    }

    pub fn neighbors(&self, c: Color, v: usize) -> VertexSet {
        self.adj[c.idx()][v - 1]
    }

    pub fn has_stroke(&self, c: Color, a: usize, b: usize) -> bool {
        self.adj[c.idx()][a - 1] >> (b - 1) & 1 == 1
    }

    pub fn degree(&self, c: Color, v: usize) -> u32 {
        self.neighbors(c, v).count_ones()
    }

    pub fn circled(&self, c: Color, v: usize) -> bool {
        self.circles[c.idx()] >> (v - 1) & 1 == 1
    }

    pub fn circle_set(&self, c: Color) -> VertexSet {
        self.circles[c.idx()]
    }

    pub fn circle_list(&self, c: Color) -> Vec<usize> {
        members(self.circles[c.idx()])
    }

    /// Sorted `(a, b)` pairs with `a < b`.
    pub fn strokes(&self, c: Color) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 1..=self.n {
            for b in a + 1..=self.n {
                if self.has_stroke(c, a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn stroke_total(&self, c: Color) -> u32 {
        (1..=self.n).map(|v| self.degree(c, v)).sum::<u32>() / 2
    }

    /// Connected components of the `c`-stroke graph, singletons included,
    /// ordered by smallest vertex.
    pub fn components(&self, c: Color) -> Vec<VertexSet> {
        let mut seen: VertexSet = 0;
        let mut out = Vec::new();
        for v in 1..=self.n {
            if seen >> (v - 1) & 1 == 1 {
                continue;
            }
            let comp = self.component_of(c, v);
            seen |= comp;
            out.push(comp);
        }
        out
    }

    pub fn component_of(&self, c: Color, v: usize) -> VertexSet {
        let mut comp: VertexSet = 1 << (v - 1);
        loop {
            let mut next = comp;
            for u in members(comp) {
                next |= self.neighbors(c, u);
            }
            if next == comp {
                return comp;
            }
            comp = next;
        }
    }

    /// True if every pair inside `s` carries a `c`-stroke.
    pub fn is_clique(&self, c: Color, s: VertexSet) -> bool {
        members(s).into_iter().all(|v| (self.neighbors(c, v) | 1 << (v - 1)) & s == s)
    }

    /// Image under a relabeling; `perm[k-1]` is the new label of vertex `k`.
    pub fn relabel(&self, perm: &[usize]) -> Diagram {
        assert_eq!(perm.len(), self.n);
        let map = |s: VertexSet| members(s).into_iter().fold(0, |m, v| m | 1 << (perm[v - 1] - 1));
        let mut out = Diagram { n: self.n, adj: [[0; MAX_N]; 2], circles: [0; 2] };
        for c in 0..2 {
            for v in 1..=self.n {
                out.adj[c][perm[v - 1] - 1] = map(self.adj[c][v - 1]);
            }
            out.circles[c] = map(self.circles[c]);
        }
        out
    }

    /// Exchange the roles of `z` and `w`.
    pub fn swap_colors(&self) -> Diagram {
        Diagram { n: self.n, adj: [self.adj[1], self.adj[0]], circles: [self.circles[1], self.circles[0]] }
    }

    pub fn classify_edges(&self) -> BTreeMap<(usize, usize), EdgeKind> {
        let mut out = BTreeMap::new();
        for a in 1..=self.n {
            for b in a + 1..=self.n {
                let kind = match (self.has_stroke(Color::Z, a, b), self.has_stroke(Color::W, a, b)) {
                    (true, true) => EdgeKind::ZW,
                    (true, false) => EdgeKind::Z,
                    (false, true) => EdgeKind::W,
                    (false, false) => continue,
                };
                out.insert((a, b), kind);
            }
        }
        out
    }

    /// Largest `z`-degree plus `w`-degree over vertices carrying both colors; 0 if none.
    pub fn stroke_count_c(&self) -> u32 {
        (1..=self.n)
            .filter(|&v| self.degree(Color::Z, v) > 0 && self.degree(Color::W, v) > 0)
            .map(|v| self.degree(Color::Z, v) + self.degree(Color::W, v))
            .max()
            .unwrap_or(0)
    }

    pub fn closeness(&self) -> ClosenessRelation {
        let mut close = [[0; MAX_N]; 2];
        for c in Color::BOTH {
            for v in 1..=self.n {
                // c-closeness comes from strokes of the other color
                close[c.idx()][v - 1] = self.component_of(c.other(), v);
            }
        }
        let mut conflicts = Vec::new();
        for c in Color::BOTH {
            for a in 1..=self.n {
                for b in a + 1..=self.n {
                    let is_close = close[c.idx()][a - 1] >> (b - 1) & 1 == 1;
                    if is_close && self.circled(c, a) != self.circled(c, b) {
                        conflicts.push((c, a, b));
                    }
                }
            }
        }
        ClosenessRelation { n: self.n, close, circles: self.circles, conflicts }
    }

    pub fn validate(&self) -> RuleReport {
        let mut r = RuleReport { r1a: true, r1b: true, r1c: true, r2: true, r4: true, r6: true };
        for c in Color::BOTH {
            if self.stroke_total(c) == 0 {
                r.r1c = false;
            }
            for v in 1..=self.n {
                let deg = self.degree(c, v);
                if deg == 1 && !self.circled(c, v) {
                    r.r1a = false;
                }
                if deg == 0 && self.circled(c, v) {
                    r.r1b = false;
                }
            }
            for comp in self.components(c) {
                if (comp & self.circles[c.idx()]).count_ones() == 1 {
                    r.r4 = false;
                }
                if !self.is_clique(c, comp) {
                    r.r6 = false;
                }
            }
        }
        r.r2 = self.closeness().conflicts.is_empty();
        r
    }

    pub fn canonical_key(&self) -> CanonicalKey {
        let mut best = u128::MAX;
        for perm in permutations(self.n) {
            let d = self.relabel(&perm);
            best = best.min(d.encode()).min(d.swap_colors().encode());
        }
        CanonicalKey::from_code(self.n, best)
    }

    /// A representative of the orbit whose encoding is the canonical key.
    pub fn canonical_form(&self) -> Diagram {
        let mut best = (u128::MAX, self.clone());
        for perm in permutations(self.n) {
            let d = self.relabel(&perm);
            for e in [d.swap_colors(), d] {
                let code = e.encode();
                if code < best.0 {
                    best = (code, e);
                }
            }
        }
        best.1
    }

    /// Bit-string image: `z` pairs, `w` pairs (lexicographic pair order), then
    /// `z` circles and `w` circles, most significant first.
    fn encode(&self) -> u128 {
        let mut code: u128 = 0;
        for c in 0..2 {
            for a in 1..=self.n {
                for b in a + 1..=self.n {
                    code = code << 1 | (self.adj[c][a - 1] >> (b - 1) & 1) as u128;
                }
            }
        }
        for c in 0..2 {
            for v in 1..=self.n {
                code = code << 1 | (self.circles[c] >> (v - 1) & 1) as u128;
            }
        }
        code
    }

    pub fn from_key(key: &CanonicalKey) -> Diagram {
        let n = key.0[0] as usize;
        let mut code = u128::from_be_bytes(key.0[1..17].try_into().expect("key length"));
        let mut d = Diagram { n, adj: [[0; MAX_N]; 2], circles: [0; 2] };
        for c in (0..2).rev() {
            for v in (1..=n).rev() {
                if code & 1 == 1 {
                    d.circles[c] |= 1 << (v - 1);
                }
                code >>= 1;
            }
        }
        for c in (0..2).rev() {
            for a in (1..=n).rev() {
                for b in (a + 1..=n).rev() {
                    if code & 1 == 1 {
                        d.adj[c][a - 1] |= 1 << (b - 1);
                        d.adj[c][b - 1] |= 1 << (a - 1);
                    }
                    code >>= 1;
                }
            }
        }
        d
    }

    /// Random diagram whose stroke graphs are disjoint cliques.
    pub fn random_cliques<R: Rng>(n: usize, rng: &mut R) -> Diagram {
        let mut d = Diagram::empty(n).expect("n in range");
        for c in Color::BOTH {
            let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
            for a in 1..=n {
                for b in a + 1..=n {
                    if labels[a - 1] == labels[b - 1] {
                        d.add_stroke(c, a, b).expect("in range");
                    }
                }
            }
            d.circles[c.idx()] = rng.gen_range(0..=d.all() as u16) as VertexSet;
        }
        d
    }
}

impl fmt::Debug for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs = |c| self.strokes(c).iter().map(|(a, b)| format!("{a}{b}")).collect::<Vec<_>>().join(",");
        let circ = |c| self.circle_list(c).iter().map(|v| v.to_string()).collect::<String>();
        write!(
            f,
            "n={} z:[{}] w:[{}] zc:[{}] wc:[{}]",
            self.n,
            pairs(Color::Z),
            pairs(Color::W),
            circ(Color::Z),
            circ(Color::W)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EdgeKind {
    Z,
    W,
    ZW,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Close,
    Far,
    Unknown,
}

/// Per-color closeness facts derived from strokes and circle status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosenessRelation {
    n: usize,
    close: [[VertexSet; MAX_N]; 2],
    circles: [VertexSet; 2],
    /// Pairs that are both Close and Far.
    pub conflicts: Vec<(Color, usize, usize)>,
}

impl ClosenessRelation {
    pub fn close(&self, c: Color, a: usize, b: usize) -> bool {
        self.close[c.idx()][a - 1] >> (b - 1) & 1 == 1
    }

    /// Mixed circle status in color `c` forces the pair apart.
    pub fn far(&self, c: Color, a: usize, b: usize) -> bool {
        (self.circles[c.idx()] >> (a - 1) & 1) != (self.circles[c.idx()] >> (b - 1) & 1)
    }

    pub fn status(&self, c: Color, a: usize, b: usize) -> Status {
        match (self.close(c, a, b), self.far(c, a, b)) {
            (true, false) => Status::Close,
            (false, true) => Status::Far,
            (false, false) => Status::Unknown,
            // conflicting pairs report Close; `conflicts` records them
            (true, true) => Status::Close,
        }
    }

    /// Vertices `c`-close to `v` (including `v`).
    pub fn close_class(&self, c: Color, v: usize) -> VertexSet {
        self.close[c.idx()][v - 1]
    }

    pub fn is_consistent(&self) -> bool {
        self.conflicts.is_empty()
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleReport {
    pub r1a: bool,
    pub r1b: bool,
    pub r1c: bool,
    pub r2: bool,
    pub r4: bool,
    pub r6: bool,
}

impl RuleReport {
    pub fn valid(&self) -> bool {
        self.r1a && self.r1b && self.r1c && self.r2 && self.r4 && self.r6
    }

    /// Names of the failing checks, in fixed order.
    pub fn failures(&self) -> Vec<&'static str> {
        [("R1a", self.r1a), ("R1b", self.r1b), ("R1c", self.r1c), ("R2", self.r2), ("R4", self.r4), ("R6", self.r6)]
            .into_iter()
            .filter(|(_, ok)| !ok)
            .map(|(name, _)| name)
            .collect()
    }
}

/// Byte encoding of the minimal image over relabelings and the color swap.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey(pub Vec<u8>);

impl CanonicalKey {
    fn from_code(n: usize, code: u128) -> CanonicalKey {
        let mut bytes = vec![n as u8];
        bytes.extend_from_slice(&code.to_be_bytes());
        CanonicalKey(bytes)
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn from_hex(s: &str) -> Option<CanonicalKey> {
        if s.len() != 34 || !s.is_ascii() {
            return None;
        }
        let bytes: Option<Vec<u8>> =
            (0..s.len()).step_by(2).map(|i| u8::from_str_radix(&s[i..i + 2], 16).ok()).collect();
        bytes.map(CanonicalKey)
    }
}

impl fmt::Debug for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl Serialize for CanonicalKey {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for CanonicalKey {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        CanonicalKey::from_hex(&s).ok_or_else(|| serde::de::Error::custom("bad canonical key"))
    }
}

/// All permutations of `1..=n` as image lists, in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for v in 1..=n {
            if !used[v - 1] {
                used[v - 1] = true;
                prefix.push(v);
                rec(prefix, used, n, out);
                prefix.pop();
                used[v - 1] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], n, &mut out);
    out
}

/// Set partitions of `{1..n}` as lists of blocks, via restricted growth strings.
pub fn set_partitions(n: usize) -> Vec<Vec<VertexSet>> {
    fn rec(i: usize, n: usize, rgs: &mut Vec<usize>, out: &mut Vec<Vec<VertexSet>>) {
        if i == n {
            let blocks = rgs.iter().max().map_or(0, |m| m + 1);
            let mut parts = vec![0 as VertexSet; blocks];
            for (v, &b) in rgs.iter().enumerate() {
                parts[b] |= 1 << v;
            }
            out.push(parts);
            return;
        }
        let limit = rgs.iter().max().map_or(0, |m| m + 1);
        for b in 0..=limit {
            rgs.push(b);
            rec(i + 1, n, rgs, out);
            rgs.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, &mut Vec::new(), &mut out);
    out
}

/// Adjacency masks of the disjoint union of cliques on the given blocks.
pub fn clique_adjacency(blocks: &[VertexSet]) -> [VertexSet; MAX_N] {
    let mut adj = [0; MAX_N];
    for &b in blocks {
        for v in members(b) {
            adj[v - 1] = b & !(1 << (v - 1));
        }
    }
    adj
}
