//! Canonical labelling of layered cover structures.
//!
//! Elements of a layered structure are refined to an equitable ordered
//! partition (levels first, then neighbour counts), and the search tree of
//! individualise-and-refine steps is explored for the lexicographically
//! smallest cover encoding. Automorphisms found at equal leaves prune
//! children that lie in a common orbit of the pointwise stabiliser of the
//! current individualisation sequence.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};
use crate::poset::{Level, RankedPoset};

/// Byte string identifying a layered structure up to level-preserving
/// isomorphism. It decodes back to the canonically labelled structure.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalCert(Vec<u8>);

impl CanonicalCert {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.0
    }

    pub fn from_bytes(bytes: Vec<u8>) -> Self {
        CanonicalCert(bytes)
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Decodes the canonically labelled down-cover lists.
    pub fn decode_levels(&self) -> Result<Vec<Level>> {
        let mut rd = VarintReader {
            bytes: &self.0,
            at: 0,
        };
        let nlevels = rd.next()? as usize;
        let sizes = (0..nlevels)
            .map(|_| rd.next().map(|v| v as usize))
            .collect::<Result<Vec<_>>>()?;
        let mut levels: Vec<Level> = Vec::with_capacity(nlevels);
        if nlevels > 0 {
            levels.push(vec![Vec::new(); sizes[0]]);
        }
        for &size in sizes.iter().skip(1) {
            let mut level = Vec::with_capacity(size);
            for _ in 0..size {
                let deg = rd.next()? as usize;
                level.push((0..deg).map(|_| rd.next()).collect::<Result<Vec<_>>>()?);
            }
            levels.push(level);
        }
        if rd.at != self.0.len() {
            return Err(Error::Malformed("trailing bytes in certificate".into()));
        }
        Ok(levels)
    }

    /// Decodes into the canonically labelled poset.
    pub fn to_poset(&self, r: u32) -> Result<RankedPoset> {
        RankedPoset::new(r, self.decode_levels()?)
    }
}

impl fmt::Debug for CanonicalCert {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalCert({})", self.to_hex())
    }
}

struct VarintReader<'a> {
    bytes: &'a [u8],
    at: usize,
}

impl VarintReader<'_> {
    fn next(&mut self) -> Result<u32> {
        let mut value: u64 = 0;
        let mut shift = 0;
        loop {
            let b = *self
                .bytes
                .get(self.at)
                .ok_or_else(|| Error::Malformed("truncated certificate".into()))?;
            self.at += 1;
            value |= u64::from(b & 0x7f) << shift;
            if b & 0x80 == 0 {
                break;
            }
            shift += 7;
            if shift > 35 {
                return Err(Error::Malformed("varint overflow in certificate".into()));
            }
        }
        u32::try_from(value).map_err(|_| Error::Malformed("varint overflow in certificate".into()))
    }
}

fn push_varint(out: &mut Vec<u8>, mut v: u32) {
    while v >= 0x80 {
        out.push((v as u8) | 0x80);
        v >>= 7;
    }
    out.push(v as u8);
}

/// Result of canonical labelling.
#[derive(Clone, Debug)]
pub struct CanonicalForm {
    /// `perms[j][old] = new` within level `j`.
    pub perms: Vec<Vec<u32>>,
    pub cert: CanonicalCert,
    /// Generators of the automorphism group found during the search, as
    /// permutations of the flattened element list.
    pub automorphisms: Vec<Vec<u32>>,
}

pub fn canonical_cert(p: &RankedPoset) -> CanonicalCert {
    canonical_form_levels(p.down_levels()).cert
}

pub fn canonical_form(p: &RankedPoset) -> CanonicalForm {
    canonical_form_levels(p.down_levels())
}

/// True iff a rank-preserving isomorphism exists.
pub fn is_isomorphic(p: &RankedPoset, q: &RankedPoset) -> bool {
    p.levels() == q.levels() && canonical_cert(p) == canonical_cert(q)
}

/// The canonically relabelled poset; equal for isomorphic inputs.
pub fn canonical_poset(p: &RankedPoset) -> RankedPoset {
    let form = canonical_form(p);
    p.relabel(&form.perms)
        .expect("canonical labelling is a permutation per rank")
}

/// Canonical labelling of any layered structure. Level 0 entries must be
/// empty; entries of level `j` index level `j - 1`.
pub fn canonical_form_levels(levels: &[Level]) -> CanonicalForm {
    let graph = Graph::new(levels);
    let mut search = Search::new(&graph);
    let mut root = graph.initial_partition();
    let mut queue: VecDeque<u32> = graph.offsets[..graph.offsets.len() - 1]
        .iter()
        .zip(&graph.offsets[1..])
        .filter(|(a, b)| a < b)
        .map(|(&a, _)| a)
        .collect();
    search.refine(&mut root, &mut queue);
    search.explore(&root, &mut Vec::new());

    let best = search.best.expect("search reaches at least one leaf");
    let mut perms: Vec<Vec<u32>> = levels.iter().map(|l| vec![0; l.len()]).collect();
    for (position, &v) in best.lab.iter().enumerate() {
        let lvl = graph.level_of[v as usize] as usize;
        let old = v - graph.offsets[lvl];
        perms[lvl][old as usize] = position as u32 - graph.offsets[lvl];
    }

    let mut bytes = Vec::with_capacity(best.code.len() + levels.len() + 1);
    push_varint(&mut bytes, levels.len() as u32);
    for l in levels {
        push_varint(&mut bytes, l.len() as u32);
    }
    for &w in &best.code {
        push_varint(&mut bytes, w);
    }
    CanonicalForm {
        perms,
        cert: CanonicalCert(bytes),
        automorphisms: search.generators,
    }
}

struct Graph {
    n: usize,
    offsets: Vec<u32>,
    level_of: Vec<u32>,
    adj_start: Vec<u32>,
    adj: Vec<u32>,
    /// Down-covers per flattened vertex, as flattened vertex ids.
    down_start: Vec<u32>,
    down: Vec<u32>,
}

impl Graph {
    fn new(levels: &[Level]) -> Self {
        let mut offsets = Vec::with_capacity(levels.len() + 1);
        let mut acc = 0u32;
        for l in levels {
            offsets.push(acc);
            acc += l.len() as u32;
        }
        offsets.push(acc);
        let n = acc as usize;
        let mut level_of = vec![0u32; n];
        let mut degree = vec![0u32; n];
        let mut down_start = Vec::with_capacity(n + 1);
        let mut down = Vec::new();
        for (j, l) in levels.iter().enumerate() {
            for (i, covers) in l.iter().enumerate() {
                let v = offsets[j] as usize + i;
                level_of[v] = j as u32;
                down_start.push(down.len() as u32);
                for &c in covers {
                    let u = offsets[j - 1] + c;
                    down.push(u);
                    degree[v] += 1;
                    degree[u as usize] += 1;
                }
            }
        }
        down_start.push(down.len() as u32);
        let mut adj_start = Vec::with_capacity(n + 1);
        let mut s = 0u32;
        for d in &degree {
            adj_start.push(s);
            s += d;
        }
        adj_start.push(s);
        let mut fill = adj_start.clone();
        let mut adj = vec![0u32; s as usize];
        for v in 0..n {
            for k in down_start[v]..down_start[v + 1] {
                let u = down[k as usize] as usize;
                adj[fill[v] as usize] = u as u32;
                fill[v] += 1;
                adj[fill[u] as usize] = v as u32;
                fill[u] += 1;
            }
        }
        Graph {
            n,
            offsets,
            level_of,
            adj_start,
            adj,
            down_start,
            down,
        }
    }

    fn neighbours(&self, v: u32) -> &[u32] {
        &self.adj[self.adj_start[v as usize] as usize..self.adj_start[v as usize + 1] as usize]
    }

    fn initial_partition(&self) -> Partition {
        let lab: Vec<u32> = (0..self.n as u32).collect();
        let pos = lab.clone();
        let mut start = vec![0u32; self.n];
        let mut end = vec![0u32; self.n];
        for w in self.offsets.windows(2) {
            for v in w[0]..w[1] {
                start[v as usize] = w[0];
            }
            if w[0] < w[1] {
                end[w[0] as usize] = w[1];
            }
        }
        Partition {
            lab,
            pos,
            start,
            end,
        }
    }
}

#[derive(Clone)]
struct Partition {
    lab: Vec<u32>,
    pos: Vec<u32>,
    /// Cell start position for each vertex.
    start: Vec<u32>,
    /// Cell end (exclusive), indexed by cell start position.
    end: Vec<u32>,
}

impl Partition {
    fn first_nontrivial_cell(&self) -> Option<(u32, u32)> {
        let mut i = 0usize;
        while i < self.lab.len() {
            let e = self.end[i];
            if e as usize - i > 1 {
                return Some((i as u32, e));
            }
            i = e as usize;
        }
        None
    }

    /// Splits `v` off the front of its cell; returns the new singleton start.
    fn individualise(&mut self, v: u32) -> u32 {
        let s = self.start[v as usize];
        let e = self.end[s as usize];
        let pv = self.pos[v as usize];
        let other = self.lab[s as usize];
        self.lab.swap(s as usize, pv as usize);
        self.pos[other as usize] = pv;
        self.pos[v as usize] = s;
        self.end[s as usize] = s + 1;
        self.end[s as usize + 1] = e;
        for p in s + 1..e {
            self.start[self.lab[p as usize] as usize] = s + 1;
        }
        s
    }
}

struct Leaf {
    lab: Vec<u32>,
    code: Vec<u32>,
}

struct Search<'g> {
    g: &'g Graph,
    count: Vec<u32>,
    in_queue: Vec<bool>,
    touched: Vec<u32>,
    touched_cells: Vec<u32>,
    cell_mark: Vec<bool>,
    best: Option<Leaf>,
    first: Option<Leaf>,
    generators: Vec<Vec<u32>>,
}

impl<'g> Search<'g> {
    fn new(g: &'g Graph) -> Self {
        Search {
            g,
            count: vec![0; g.n],
            in_queue: vec![false; g.n],
            touched: Vec::new(),
            touched_cells: Vec::new(),
            cell_mark: vec![false; g.n],
            best: None,
            first: None,
            generators: Vec::new(),
        }
    }

    /// Equitable refinement driven by a queue of splitter cells.
    fn refine(&mut self, part: &mut Partition, queue: &mut VecDeque<u32>) {
        for &c in queue.iter() {
            self.in_queue[c as usize] = true;
        }
        while let Some(w) = queue.pop_front() {
            self.in_queue[w as usize] = false;
            let we = part.end[w as usize];
            for p in w..we {
                let v = part.lab[p as usize];
                for &u in self.g.neighbours(v) {
                    if self.count[u as usize] == 0 {
                        self.touched.push(u);
                    }
                    self.count[u as usize] += 1;
                }
            }
            for &u in &self.touched {
                let c = part.start[u as usize];
                if part.end[c as usize] - c > 1 && !self.cell_mark[c as usize] {
                    self.cell_mark[c as usize] = true;
                    self.touched_cells.push(c);
                }
            }
            self.touched_cells.sort_unstable();
            for idx in 0..self.touched_cells.len() {
                let c = self.touched_cells[idx];
                self.cell_mark[c as usize] = false;
                self.split_cell(part, c, queue);
            }
            self.touched_cells.clear();
            for &u in &self.touched {
                self.count[u as usize] = 0;
            }
            self.touched.clear();
        }
    }

    fn split_cell(&mut self, part: &mut Partition, c: u32, queue: &mut VecDeque<u32>) {
        let e = part.end[c as usize];
        let cell = &mut part.lab[c as usize..e as usize];
        let count = &self.count;
        let key = count[cell[0] as usize];
        if cell.iter().all(|&v| count[v as usize] == key) {
            return;
        }
        cell.sort_unstable_by_key(|&v| (count[v as usize], v));
        let mut frag_start = c;
        for p in c..e {
            let v = part.lab[p as usize];
            part.pos[v as usize] = p;
            if p > c && count[v as usize] != count[part.lab[p as usize - 1] as usize] {
                part.end[frag_start as usize] = p;
                frag_start = p;
            }
            part.start[v as usize] = frag_start;
        }
        part.end[frag_start as usize] = e;
        let mut f = c;
        while f < e {
            if !self.in_queue[f as usize] {
                self.in_queue[f as usize] = true;
                queue.push_back(f);
            }
            f = part.end[f as usize];
        }
    }

    fn leaf_code(&self, part: &Partition) -> Vec<u32> {
        let g = self.g;
        let mut code = Vec::with_capacity(g.n + g.down.len());
        let mut buf: Vec<u32> = Vec::new();
        let levels = g.offsets.len() - 1;
        for j in 1..levels {
            let lo = g.offsets[j - 1];
            for p in g.offsets[j]..g.offsets[j + 1] {
                let v = part.lab[p as usize] as usize;
                buf.clear();
                for k in g.down_start[v]..g.down_start[v + 1] {
                    buf.push(part.pos[g.down[k as usize] as usize] - lo);
                }
                buf.sort_unstable();
                code.push(buf.len() as u32);
                code.extend_from_slice(&buf);
            }
        }
        code
    }

    fn record_automorphism(&mut self, from: &[u32], to: &[u32]) {
        let mut perm = vec![0u32; self.g.n];
        let mut identity = true;
        for (&a, &b) in from.iter().zip(to) {
            perm[a as usize] = b;
            identity &= a == b;
        }
        if !identity && !self.generators.contains(&perm) {
            self.generators.push(perm);
        }
    }

    fn visit_leaf(&mut self, part: &Partition) {
        let code = self.leaf_code(part);
        if let Some(first) = &self.first {
            if first.code == code {
                let first_lab = first.lab.clone();
                self.record_automorphism(&part.lab, &first_lab);
            }
        }
        match &self.best {
            None => {
                self.first = Some(Leaf {
                    lab: part.lab.clone(),
                    code: code.clone(),
                });
                self.best = Some(Leaf {
                    lab: part.lab.clone(),
                    code,
                });
            }
            Some(best) => match code.cmp(&best.code) {
                std::cmp::Ordering::Less => {
                    self.best = Some(Leaf {
                        lab: part.lab.clone(),
                        code,
                    });
                }
                std::cmp::Ordering::Equal => {
                    let best_lab = best.lab.clone();
                    self.record_automorphism(&part.lab, &best_lab);
                }
                std::cmp::Ordering::Greater => {}
            },
        }
    }

    fn explore(&mut self, part: &Partition, prefix: &mut Vec<u32>) {
        let Some((s, e)) = part.first_nontrivial_cell() else {
            self.visit_leaf(part);
            return;
        };
        let mut members: Vec<u32> = part.lab[s as usize..e as usize].to_vec();
        members.sort_unstable();
        let mut explored: Vec<u32> = Vec::new();
        let mut orbits: Option<(usize, Vec<u32>)> = None;
        for &v in &members {
            if !explored.is_empty() {
                let stale = orbits
                    .as_ref()
                    .is_none_or(|(ngen, _)| *ngen != self.generators.len());
                if stale {
                    orbits = Some((self.generators.len(), self.stabiliser_orbits(prefix)));
                }
                let uf = &orbits.as_ref().unwrap().1;
                let root = find(uf, v);
                if explored.iter().any(|&u| find(uf, u) == root) {
                    continue;
                }
            }
            let mut child = part.clone();
            let cell = child.individualise(v);
            let mut queue = VecDeque::from([cell]);
            self.refine(&mut child, &mut queue);
            prefix.push(v);
            self.explore(&child, prefix);
            prefix.pop();
            explored.push(v);
        }
    }

    /// Orbits of the group generated by the known automorphisms that fix
    /// every vertex of `prefix`, as a union-find parent array.
    fn stabiliser_orbits(&self, prefix: &[u32]) -> Vec<u32> {
        let mut uf: Vec<u32> = (0..self.g.n as u32).collect();
        for gen in &self.generators {
            if prefix.iter().all(|&v| gen[v as usize] == v) {
                for (a, &b) in gen.iter().enumerate() {
                    union(&mut uf, a as u32, b);
                }
            }
        }
        uf
    }
}

fn find(uf: &[u32], mut v: u32) -> u32 {
    while uf[v as usize] != v {
        v = uf[v as usize];
    }
    v
}

fn union(uf: &mut [u32], a: u32, b: u32) {
    let (ra, rb) = (find(uf, a), find(uf, b));
    if ra != rb {
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        uf[hi as usize] = lo;
    }
}
