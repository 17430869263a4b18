//! Exhaustive enumeration of differential posets rank by rank.
//!
//! Extending a poset that is `r`-differential up to its top rank `j` by a
//! new rank amounts to choosing an edge-clique partition of the sharing
//! graph on rank `j` (two elements are adjacent when they cover a common
//! element) in which every vertex lies in at most `downdeg + r` cliques.
//! Each clique becomes a new element covering exactly its members; every
//! vertex then receives singleton covers up to `downdeg + r` upper covers.

use std::collections::{BTreeSet, HashSet};
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Read, Write};
use std::ops::ControlFlow;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::canon::{canonical_cert, CanonicalCert};
use crate::error::{Error, Result};
use crate::poset::{Level, RankFunction, RankedPoset};
use crate::wagner::ensure_differential;

/// Graph on the top rank joining elements with a common lower cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SharingGraph {
    n: usize,
    adjacency: Vec<Vec<u32>>,
    /// `(a, b, w)` with `a < b` sharing lower cover `w`.
    witnesses: Vec<(u32, u32, u32)>,
}

impl SharingGraph {
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn neighbours(&self, v: usize) -> &[u32] {
        &self.adjacency[v]
    }

    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.witnesses.iter().map(|&(a, b, _)| (a, b))
    }

    pub fn edge_count(&self) -> usize {
        self.witnesses.len()
    }

    /// The common lower cover of an edge.
    pub fn witness(&self, a: u32, b: u32) -> Option<u32> {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        self.witnesses
            .binary_search_by(|&(x, y, _)| (x, y).cmp(&(a, b)))
            .ok()
            .map(|i| self.witnesses[i].2)
    }

    pub fn is_edge(&self, a: u32, b: u32) -> bool {
        self.adjacency[a as usize].binary_search(&b).is_ok()
    }
}

pub fn sharing_graph(p: &RankedPoset) -> SharingGraph {
    let j = p.top_rank();
    let n = p.level_size(j);
    let mut witnesses = Vec::new();
    if j > 0 {
        for (w, above) in p.up_level(j - 1).iter().enumerate() {
            for (k, &a) in above.iter().enumerate() {
                for &b in &above[k + 1..] {
                    witnesses.push((a, b, w as u32));
                }
            }
        }
    }
    witnesses.sort_unstable();
    let mut adjacency = vec![Vec::new(); n];
    for &(a, b, _) in &witnesses {
        adjacency[a as usize].push(b);
        adjacency[b as usize].push(a);
    }
    for l in &mut adjacency {
        l.sort_unstable();
    }
    SharingGraph {
        n,
        adjacency,
        witnesses,
    }
}

/// One legal way to add a rank: an edge-clique partition of the sharing
/// graph plus the number of singleton covers each vertex receives.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtensionChoice {
    pub cliques: Vec<Vec<u32>>,
    pub singleton_counts: Vec<u32>,
}

impl ExtensionChoice {
    /// Down-cover lists of the new rank: cliques first, then singletons by
    /// vertex.
    pub fn new_level(&self) -> Level {
        let mut level: Level = self.cliques.clone();
        for (x, &s) in self.singleton_counts.iter().enumerate() {
            for _ in 0..s {
                level.push(vec![x as u32]);
            }
        }
        level
    }

    pub fn new_rank_size(&self) -> u64 {
        self.cliques.len() as u64
            + self
                .singleton_counts
                .iter()
                .map(|&s| u64::from(s))
                .sum::<u64>()
    }

    /// Sum of `|F| - 1` over the hyperedges of the new rank.
    pub fn dimension_sum(&self) -> u64 {
        self.cliques.iter().map(|c| c.len() as u64 - 1).sum()
    }
}

/// Cover capacity `downdeg + r` of every top-rank element.
fn capacities(p: &RankedPoset, r: u32) -> Vec<u32> {
    let j = p.top_rank();
    (0..p.level_size(j))
        .map(|x| p.down(j, x).len() as u32 + r)
        .collect()
}

struct CliqueSearch<'a> {
    n: usize,
    words: usize,
    unc: Vec<u64>,
    uncovered: usize,
    used: Vec<u32>,
    cap: &'a [u32],
    cliques: Vec<Vec<u32>>,
    dim: u64,
    target_dim: Option<u64>,
}

impl CliqueSearch<'_> {
    fn row(&self, v: usize) -> &[u64] {
        &self.unc[v * self.words..(v + 1) * self.words]
    }

    fn has(&self, a: usize, b: usize) -> bool {
        self.unc[a * self.words + b / 64] >> (b % 64) & 1 == 1
    }

    fn clear(&mut self, a: usize, b: usize) {
        self.unc[a * self.words + b / 64] &= !(1u64 << (b % 64));
        self.unc[b * self.words + a / 64] &= !(1u64 << (a % 64));
    }

    fn set(&mut self, a: usize, b: usize) {
        self.unc[a * self.words + b / 64] |= 1u64 << (b % 64);
        self.unc[b * self.words + a / 64] |= 1u64 << (a % 64);
    }

    fn degree(&self, v: usize) -> u32 {
        self.row(v).iter().map(|w| w.count_ones()).sum()
    }

    fn first_uncovered_edge(&self) -> Option<(usize, usize)> {
        for u in 0..self.n {
            for (k, &w) in self.row(u).iter().enumerate() {
                if w != 0 {
                    return Some((u, k * 64 + w.trailing_zeros() as usize));
                }
            }
        }
        None
    }

    fn dimension_bounds_ok(&self) -> bool {
        let Some(t) = self.target_dim else {
            return true;
        };
        if self.dim > t || self.dim + (self.uncovered as u64) < t {
            return false;
        }
        if self.uncovered > 0 {
            // each remaining clique K spends |K|-1 on C(|K|,2) edges
            let omega = 1 + (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0) as u64;
            let lower = (2 * self.uncovered as u64).div_ceil(omega);
            if self.dim + lower > t {
                return false;
            }
        }
        true
    }

    fn run(
        &mut self,
        visit: &mut dyn FnMut(&ExtensionChoice) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if !self.dimension_bounds_ok() {
            return ControlFlow::Continue(());
        }
        let Some((u, v)) = self.first_uncovered_edge() else {
            let choice = ExtensionChoice {
                cliques: self.cliques.clone(),
                singleton_counts: self
                    .cap
                    .iter()
                    .zip(&self.used)
                    .map(|(c, u)| c - u)
                    .collect(),
            };
            return visit(&choice);
        };
        if self.used[u] >= self.cap[u] || self.used[v] >= self.cap[v] {
            return ControlFlow::Continue(());
        }
        let candidates: Vec<usize> = (0..self.n)
            .filter(|&w| self.has(u, w) && self.has(v, w) && self.used[w] < self.cap[w])
            .collect();
        let mut extras: Vec<Vec<usize>> = Vec::new();
        collect_cliques(self, &candidates, 0, &mut Vec::new(), &mut extras);
        extras.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));

        for extra in extras {
            let mut members: Vec<usize> = Vec::with_capacity(extra.len() + 2);
            members.push(u);
            members.push(v);
            members.extend(extra);
            members.sort_unstable();
            for (k, &a) in members.iter().enumerate() {
                for &b in &members[k + 1..] {
                    self.clear(a, b);
                }
                self.used[a] += 1;
            }
            let m = members.len();
            self.uncovered -= m * (m - 1) / 2;
            self.dim += m as u64 - 1;
            let dead = members
                .iter()
                .any(|&x| self.used[x] == self.cap[x] && self.row(x).iter().any(|&w| w != 0));
            let flow = if dead {
                ControlFlow::Continue(())
            } else {
                self.cliques
                    .push(members.iter().map(|&x| x as u32).collect());
                let f = self.run(visit);
                self.cliques.pop();
                f
            };
            self.dim -= m as u64 - 1;
            self.uncovered += m * (m - 1) / 2;
            for (k, &a) in members.iter().enumerate() {
                for &b in &members[k + 1..] {
                    self.set(a, b);
                }
                self.used[a] -= 1;
            }
            flow?;
        }
        ControlFlow::Continue(())
    }
}

/// All subsets of `cand[from..]` that together with `cur` form cliques in
/// the uncovered-edge graph.
fn collect_cliques(
    s: &CliqueSearch<'_>,
    cand: &[usize],
    from: usize,
    cur: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    out.push(cur.clone());
    for i in from..cand.len() {
        let w = cand[i];
        if cur.iter().all(|&x| s.has(x, w)) {
            cur.push(w);
            collect_cliques(s, cand, i + 1, cur, out);
            cur.pop();
        }
    }
}

/// Streams every [`ExtensionChoice`] of `p` exactly once. With
/// `target_size`, only choices whose new rank has that many elements are
/// produced (equivalently, a fixed dimension sum).
///
/// Assumes `p` is `r`-differential up to its top rank.
pub fn for_each_extension_choice(
    p: &RankedPoset,
    r: u32,
    target_size: Option<u64>,
    visit: &mut dyn FnMut(&ExtensionChoice) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let cap = capacities(p, r);
    let total: u64 = cap.iter().map(|&c| u64::from(c)).sum();
    let target_dim = match target_size {
        Some(t) if t > total => return ControlFlow::Continue(()),
        Some(t) => Some(total - t),
        None => None,
    };
    let g = sharing_graph(p);
    let n = g.n;
    let words = n.div_ceil(64).max(1);
    let mut search = CliqueSearch {
        n,
        words,
        unc: vec![0; n * words],
        uncovered: g.edge_count(),
        used: vec![0; n],
        cap: &cap,
        cliques: Vec::new(),
        dim: 0,
        target_dim,
    };
    for (a, b) in g.edges() {
        search.set(a as usize, b as usize);
    }
    search.run(visit)
}

/// Every legal extension choice of a validated poset.
pub fn extension_choices(p: &RankedPoset, r: u32) -> Result<Vec<ExtensionChoice>> {
    ensure_differential(p, r)?;
    let mut out = Vec::new();
    let _ = for_each_extension_choice(p, r, None, &mut |c| {
        out.push(c.clone());
        ControlFlow::Continue(())
    });
    Ok(out)
}

pub fn apply_choice(p: &RankedPoset, choice: &ExtensionChoice) -> RankedPoset {
    let mut down = p.down_levels().to_vec();
    down.push(choice.new_level());
    RankedPoset::from_down_unchecked(p.r(), down)
}

/// Streams every extension of `p` by one rank that is `r`-differential up
/// to the new top rank, once per extension choice.
pub fn for_each_extension(
    p: &RankedPoset,
    r: u32,
    visit: &mut dyn FnMut(RankedPoset) -> ControlFlow<()>,
) -> Result<ControlFlow<()>> {
    ensure_differential(p, r)?;
    Ok(for_each_extension_choice(p, r, None, &mut |c| {
        visit(apply_choice(p, c))
    }))
}

/// Collected form of [`for_each_extension`].
pub fn enumerate_extensions(p: &RankedPoset, r: u32) -> Result<Vec<RankedPoset>> {
    let mut out = Vec::new();
    let _ = for_each_extension(p, r, &mut |q| {
        out.push(q);
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

#[derive(Clone, Debug, Default)]
pub struct EnumerationOptions {
    /// Keep the sorted certificate set of every rank.
    pub keep_certs: bool,
    /// Stop expanding once this much wall time has passed.
    pub budget: Option<Duration>,
    /// Write each rank's sorted certificates to this directory and stream
    /// parents back from disk.
    pub spill_dir: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationResult {
    /// Isomorphism classes of posets `r`-differential up to rank `j`, for
    /// each computed `j`.
    pub counts: Vec<u64>,
    /// Sorted certificates per rank, when requested.
    pub certs: Option<Vec<Vec<CanonicalCert>>>,
    /// False when the budget ran out; `counts` then stops at the last
    /// completed rank.
    pub complete: bool,
}

/// Sorted, deduplicated certificates of all children of one parent.
/// Children of non-isomorphic parents are never isomorphic, since the
/// truncation below the new rank is an invariant.
fn child_certs(parent: &RankedPoset, r: u32) -> Vec<CanonicalCert> {
    let mut seen: BTreeSet<CanonicalCert> = BTreeSet::new();
    let _ = for_each_extension_choice(parent, r, None, &mut |c| {
        seen.insert(canonical_cert(&apply_choice(parent, c)));
        ControlFlow::Continue(())
    });
    seen.into_iter().collect()
}

const SPILL_CHUNK: usize = 4096;

/// Counts `r`-differential posets up to each rank `0..=n` modulo
/// isomorphism, expanding the deduplicated frontier one rank at a time.
///
/// Runs on the current rayon pool; results do not depend on its size.
pub fn enumerate_posets(r: u32, n: usize, opts: &EnumerationOptions) -> Result<EnumerationResult> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be positive".into()));
    }
    let start = Instant::now();
    let out_of_time = || opts.budget.is_some_and(|b| start.elapsed() > b);
    let root = canonical_cert(&RankedPoset::point(r));
    let mut counts = vec![1u64];
    let mut all_certs = opts.keep_certs.then(|| vec![vec![root.clone()]]);
    let mut frontier = Frontier::new(opts.spill_dir.as_deref(), 0, vec![root])?;

    for j in 0..n {
        let last = j + 1 == n;
        let need_children = !last || opts.keep_certs || opts.spill_dir.is_some();
        let mut next: Vec<CanonicalCert> = Vec::new();
        let mut runs: Vec<PathBuf> = Vec::new();
        let mut count = 0u64;
        let mut reader = frontier.reader()?;
        loop {
            let chunk = reader.next_chunk(SPILL_CHUNK)?;
            if chunk.is_empty() {
                break;
            }
            if out_of_time() {
                return Ok(EnumerationResult {
                    counts,
                    certs: all_certs,
                    complete: false,
                });
            }
            let per_parent: Vec<Vec<CanonicalCert>> = chunk
                .par_iter()
                .map(|cert| {
                    let parent = cert.to_poset(r).expect("frontier certificates decode");
                    child_certs(&parent, r)
                })
                .collect();
            count += per_parent.iter().map(|c| c.len() as u64).sum::<u64>();
            if need_children {
                let mut batch: Vec<CanonicalCert> = per_parent.into_iter().flatten().collect();
                if let Some(dir) = &opts.spill_dir {
                    batch.sort_unstable();
                    let path = dir.join(format!("rank-{}.run{}", j + 1, runs.len()));
                    write_certs(&path, &batch)?;
                    runs.push(path);
                } else {
                    next.extend(batch);
                }
            }
        }
        counts.push(count);
        if let Some(dir) = &opts.spill_dir {
            let path = dir.join(format!("rank-{}.certs", j + 1));
            merge_runs(&runs, &path)?;
            if let Some(all) = &mut all_certs {
                all.push(read_certs(&path)?);
            }
            frontier = Frontier::OnDisk(path);
        } else {
            next.sort_unstable();
            if let Some(all) = &mut all_certs {
                all.push(next.clone());
            }
            frontier = Frontier::InMemory(next);
        }
    }
    Ok(EnumerationResult {
        counts,
        certs: all_certs,
        complete: true,
    })
}

enum Frontier {
    InMemory(Vec<CanonicalCert>),
    OnDisk(PathBuf),
}

impl Frontier {
    fn new(spill: Option<&Path>, rank: usize, certs: Vec<CanonicalCert>) -> Result<Self> {
        match spill {
            None => Ok(Frontier::InMemory(certs)),
            Some(dir) => {
                fs::create_dir_all(dir)?;
                let path = dir.join(format!("rank-{rank}.certs"));
                write_certs(&path, &certs)?;
                Ok(Frontier::OnDisk(path))
            }
        }
    }

    fn reader(&self) -> Result<FrontierReader<'_>> {
        Ok(match self {
            Frontier::InMemory(v) => FrontierReader::Memory(v, 0),
            Frontier::OnDisk(p) => FrontierReader::Disk(BufReader::new(File::open(p)?)),
        })
    }
}

enum FrontierReader<'a> {
    Memory(&'a [CanonicalCert], usize),
    Disk(BufReader<File>),
}

impl FrontierReader<'_> {
    fn next_chunk(&mut self, max: usize) -> Result<Vec<CanonicalCert>> {
        match self {
            FrontierReader::Memory(v, at) => {
                let end = (*at + max).min(v.len());
                let chunk = v[*at..end].to_vec();
                *at = end;
                Ok(chunk)
            }
            FrontierReader::Disk(rd) => {
                let mut out = Vec::new();
                while out.len() < max {
                    match read_one(rd)? {
                        Some(c) => out.push(c),
                        None => break,
                    }
                }
                Ok(out)
            }
        }
    }
}

/// Spill files hold length-prefixed (u32 LE) certificate bytes.
fn write_certs(path: &Path, certs: &[CanonicalCert]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for c in certs {
        w.write_all(&(c.as_bytes().len() as u32).to_le_bytes())?;
        w.write_all(c.as_bytes())?;
    }
    w.flush()?;
    Ok(())
}

fn read_one(rd: &mut impl Read) -> Result<Option<CanonicalCert>> {
    let mut len = [0u8; 4];
    match rd.read_exact(&mut len) {
        Ok(()) => {}
        Err(e) if e.kind() == std::io::ErrorKind::UnexpectedEof => return Ok(None),
        Err(e) => return Err(e.into()),
    }
    let mut buf = vec![0u8; u32::from_le_bytes(len) as usize];
    rd.read_exact(&mut buf)?;
    Ok(Some(CanonicalCert::from_bytes(buf)))
}

pub fn read_certs(path: &Path) -> Result<Vec<CanonicalCert>> {
    let mut rd = BufReader::new(File::open(path)?);
    let mut out = Vec::new();
    while let Some(c) = read_one(&mut rd)? {
        out.push(c);
    }
    Ok(out)
}

/// K-way merge of sorted runs into one sorted file; runs are removed.
fn merge_runs(runs: &[PathBuf], out: &Path) -> Result<()> {
    let mut readers = runs
        .iter()
        .map(|p| Ok(BufReader::new(File::open(p)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut heads: Vec<Option<CanonicalCert>> =
        readers.iter_mut().map(read_one).collect::<Result<_>>()?;
    let mut w = BufWriter::new(File::create(out)?);
    let mut last: Option<CanonicalCert> = None;
    while let Some(i) = (0..heads.len())
        .filter(|&i| heads[i].is_some())
        .min_by(|&a, &b| heads[a].cmp(&heads[b]))
    {
        let c = heads[i].take().unwrap();
        if last.as_ref() != Some(&c) {
            w.write_all(&(c.as_bytes().len() as u32).to_le_bytes())?;
            w.write_all(c.as_bytes())?;
            last = Some(c);
        }
        heads[i] = read_one(&mut readers[i])?;
    }
    w.flush()?;
    for p in runs {
        fs::remove_file(p)?;
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Found(RankedPoset),
    /// The whole search space was exhausted without a witness.
    DefinitelyNone,
    BudgetExceeded,
}

impl SearchOutcome {
    pub fn label(&self) -> &'static str {
        match self {
            SearchOutcome::Found(_) => "found",
            SearchOutcome::DefinitelyNone => "definitive-none",
            SearchOutcome::BudgetExceeded => "budget-exceeded",
        }
    }
}

/// Depth-first search for an `r`-differential poset (up to the last rank
/// of `target`) with rank function `target`. Each rank is restricted to
/// extension choices of the prescribed size; isomorphic intermediate
/// posets are explored once.
pub fn search_rank_function(
    r: u32,
    target: &RankFunction,
    budget: Option<Duration>,
) -> Result<SearchOutcome> {
    let t = target.values();
    if t.first() != Some(&1) {
        return Err(Error::InvalidArgument("target must start with 1".into()));
    }
    if t.len() > 1 && t[1] != u64::from(r) {
        return Err(Error::InvalidArgument(format!(
            "target rank 1 must equal r = {r}"
        )));
    }
    let mut st = SearchState {
        r,
        target: t,
        deadline: budget.map(|b| Instant::now() + b),
        seen: vec![HashSet::new(); t.len()],
        timed_out: false,
        found: None,
    };
    let _ = st.dfs(RankedPoset::point(r));
    Ok(match (st.found, st.timed_out) {
        (Some(p), _) => SearchOutcome::Found(p),
        (None, true) => SearchOutcome::BudgetExceeded,
        (None, false) => SearchOutcome::DefinitelyNone,
    })
}

struct SearchState<'a> {
    r: u32,
    target: &'a [u64],
    deadline: Option<Instant>,
    seen: Vec<HashSet<CanonicalCert>>,
    timed_out: bool,
    found: Option<RankedPoset>,
}

impl SearchState<'_> {
    fn dfs(&mut self, p: RankedPoset) -> ControlFlow<()> {
        let j = p.top_rank();
        if j + 1 == self.target.len() {
            self.found = Some(p);
            return ControlFlow::Break(());
        }
        if self.deadline.is_some_and(|d| Instant::now() > d) {
            self.timed_out = true;
            return ControlFlow::Break(());
        }
        if j > 0 && j + 1 < self.target.len() && !self.seen[j].insert(canonical_cert(&p)) {
            return ControlFlow::Continue(());
        }
        let want = self.target[j + 1];
        let r = self.r;
        for_each_extension_choice(&p, r, Some(want), &mut |c| self.dfs(apply_choice(&p, c)))
    }
}
