//! Layered Hasse diagrams of graded posets with a unique minimum.
//!
//! Elements are addressed as `(rank, index)`. Each rank stores, for every
//! element, the sorted list of indices it covers in the rank below; upper
//! covers are derived once at construction.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};

/// Down-cover lists of one rank: `level[i]` holds the indices covered by
/// element `i` in the rank below.
pub type Level = Vec<Vec<u32>>;

/// A graded poset truncated at its top rank.
#[derive(Clone, PartialEq, Eq)]
pub struct RankedPoset {
    r: u32,
    down: Vec<Level>,
    up: Vec<Level>,
}

/// Number of elements per rank.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RankFunction(pub Vec<u64>);

impl RankFunction {
    pub fn values(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_weakly_increasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }

    /// Parses a comma separated list such as `1,4,17,60`.
    pub fn parse(s: &str) -> Result<Self> {
        let values = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u64>()
                    .map_err(|e| Error::InvalidArgument(format!("bad rank value {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RankFunction(values))
    }
}

impl fmt::Display for RankFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in &self.0 {
            if !first {
                f.write_str(",")?;
            }
            first = false;
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

fn check_level(
    lower_size: usize,
    level: &Level,
    rank: usize,
    require_nonempty: bool,
) -> Result<()> {
    for (i, covers) in level.iter().enumerate() {
        if require_nonempty && covers.is_empty() {
            return Err(Error::Malformed(format!(
                "element {i} of rank {rank} covers nothing"
            )));
        }
        if covers.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Malformed(format!(
                "covers of element {i} of rank {rank} are not strictly increasing"
            )));
        }
        if let Some(&c) = covers.last() {
            if c as usize >= lower_size {
                return Err(Error::Malformed(format!(
                    "element {i} of rank {rank} covers index {c}, but rank {} has {lower_size} elements",
                    rank - 1
                )));
            }
        }
    }
    Ok(())
}

pub(crate) fn derive_up(down: &[Level]) -> Vec<Level> {
    let mut up: Vec<Level> = down.iter().map(|l| vec![Vec::new(); l.len()]).collect();
    for j in 1..down.len() {
        for (i, covers) in down[j].iter().enumerate() {
            for &c in covers {
                up[j - 1][c as usize].push(i as u32);
            }
        }
    }
    up
}

impl RankedPoset {
    /// Builds a poset from its down-cover lists, checking the structural
    /// invariants: one element of rank zero, every higher element covers
    /// something, and cover lists are strictly increasing and in range.
    pub fn new(r: u32, down: Vec<Level>) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidArgument("r must be positive".into()));
        }
        match down.first() {
            Some(l0) if l0.len() == 1 && l0[0].is_empty() => {}
            Some(l0) if l0.len() != 1 => {
                return Err(Error::Malformed(format!(
                    "rank 0 must have exactly one element, found {}",
                    l0.len()
                )))
            }
            Some(_) => {
                return Err(Error::Malformed(
                    "rank 0 element cannot cover anything".into(),
                ))
            }
            None => return Err(Error::Malformed("poset has no ranks".into())),
        }
        for j in 1..down.len() {
            check_level(down[j - 1].len(), &down[j], j, true)?;
        }
        Ok(Self::from_down_unchecked(r, down))
    }

    pub(crate) fn from_down_unchecked(r: u32, down: Vec<Level>) -> Self {
        let up = derive_up(&down);
        RankedPoset { r, down, up }
    }

    /// The one-element poset.
    pub fn point(r: u32) -> Self {
        Self::from_down_unchecked(r.max(1), vec![vec![Vec::new()]])
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// Same structure, different advisory parameter.
    pub fn with_r(mut self, r: u32) -> Self {
        self.r = r.max(1);
        self
    }

    pub fn top_rank(&self) -> usize {
        self.down.len() - 1
    }

    pub fn num_ranks(&self) -> usize {
        self.down.len()
    }

    pub fn level_size(&self, rank: usize) -> usize {
        self.down[rank].len()
    }

    pub fn levels(&self) -> Vec<usize> {
        self.down.iter().map(Vec::len).collect()
    }

    pub fn num_elements(&self) -> usize {
        self.down.iter().map(Vec::len).sum()
    }

    /// Indices in rank `rank - 1` covered by element `(rank, i)`.
    pub fn down(&self, rank: usize, i: usize) -> &[u32] {
        &self.down[rank][i]
    }

    /// Indices in rank `rank + 1` covering element `(rank, i)`.
    pub fn up(&self, rank: usize, i: usize) -> &[u32] {
        &self.up[rank][i]
    }

    pub fn down_level(&self, rank: usize) -> &Level {
        &self.down[rank]
    }

    pub fn up_level(&self, rank: usize) -> &Level {
        &self.up[rank]
    }

    pub fn down_levels(&self) -> &[Level] {
        &self.down
    }

    pub fn into_down_levels(self) -> Vec<Level> {
        self.down
    }

    /// Number of cover pairs between `rank` and `rank + 1`.
    pub fn cover_count(&self, rank: usize) -> usize {
        self.down[rank + 1].iter().map(Vec::len).sum()
    }

    pub fn rank_function(&self) -> RankFunction {
        RankFunction(self.down.iter().map(|l| l.len() as u64).collect())
    }

    /// Appends a new top rank given its down-cover lists.
    pub fn with_new_rank(&self, level: Level) -> Result<Self> {
        check_level(
            self.level_size(self.top_rank()),
            &level,
            self.num_ranks(),
            true,
        )?;
        let mut down = self.down.clone();
        down.push(level);
        Ok(Self::from_down_unchecked(self.r, down))
    }

    /// Drops every rank above `rank`.
    pub fn truncate(&self, rank: usize) -> Result<Self> {
        if rank > self.top_rank() {
            return Err(Error::RankOutOfRange {
                rank,
                top: self.top_rank(),
            });
        }
        Ok(Self::from_down_unchecked(
            self.r,
            self.down[..=rank].to_vec(),
        ))
    }

    /// Relabels elements within each rank: `perms[j][old] = new`.
    pub fn relabel(&self, perms: &[Vec<u32>]) -> Result<Self> {
        if perms.len() != self.num_ranks() {
            return Err(Error::InvalidArgument(
                "one permutation per rank required".into(),
            ));
        }
        for (j, p) in perms.iter().enumerate() {
            let mut seen = vec![false; p.len()];
            if p.len() != self.level_size(j)
                || p.iter().any(|&v| {
                    (v as usize) >= seen.len() || std::mem::replace(&mut seen[v as usize], true)
                })
            {
                return Err(Error::InvalidArgument(format!(
                    "rank {j}: not a permutation"
                )));
            }
        }
        let mut down: Vec<Level> = self
            .down
            .iter()
            .map(|l| vec![Vec::new(); l.len()])
            .collect();
        for j in 1..self.num_ranks() {
            for (old, covers) in self.down[j].iter().enumerate() {
                let mut mapped: Vec<u32> =
                    covers.iter().map(|&c| perms[j - 1][c as usize]).collect();
                mapped.sort_unstable();
                down[j][perms[j][old] as usize] = mapped;
            }
        }
        Ok(Self::from_down_unchecked(self.r, down))
    }
}

impl fmt::Debug for RankedPoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RankedPoset")
            .field("r", &self.r)
            .field("levels", &self.levels())
            .finish()
    }
}

/// A window `P_[a,b]` of consecutive ranks. Its lowest level may hold many
/// elements, so it is deliberately not a [`RankedPoset`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosetFragment {
    base_rank: usize,
    down: Vec<Level>,
}

impl PosetFragment {
    pub fn base_rank(&self) -> usize {
        self.base_rank
    }

    pub fn levels(&self) -> Vec<usize> {
        self.down.iter().map(Vec::len).collect()
    }

    /// Down-cover lists with level 0 being rank `base_rank` (its lists are empty).
    pub fn down_levels(&self) -> &[Level] {
        &self.down
    }
}

/// The rank-selected subposet on ranks `a..=b`.
pub fn rank_selected(p: &RankedPoset, a: usize, b: usize) -> Result<PosetFragment> {
    if a > b {
        return Err(Error::InvalidArgument(format!(
            "empty rank window [{a},{b}]"
        )));
    }
    if b > p.top_rank() {
        return Err(Error::RankOutOfRange {
            rank: b,
            top: p.top_rank(),
        });
    }
    let mut down = Vec::with_capacity(b - a + 1);
    down.push(vec![Vec::new(); p.level_size(a)]);
    down.extend(p.down[a + 1..=b].iter().cloned());
    Ok(PosetFragment { base_rank: a, down })
}

pub fn rank_function(p: &RankedPoset) -> RankFunction {
    p.rank_function()
}

/// Which defining condition a violation breaks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axiom {
    /// Two elements cover a different number of common elements than they
    /// are covered by.
    CommonCovers,
    /// Two elements share more than one common cover.
    CommonCoverMultiplicity,
    /// Up-degree differs from down-degree plus r.
    Degree,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::CommonCovers => "common-covers",
            Axiom::CommonCoverMultiplicity => "common-cover-multiplicity",
            Axiom::Degree => "degree",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub rank: usize,
    pub elements: Vec<usize>,
    pub axiom: Axiom,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    fn from_violations(violations: Vec<Violation>) -> Self {
        ValidationReport {
            ok: violations.is_empty(),
            violations,
        }
    }
}

/// Checks that `p` is `r`-differential up to its top rank: every rank
/// strictly below the top satisfies the common-cover and degree axioms.
pub fn validate_differential(p: &RankedPoset, r: u32) -> ValidationReport {
    let mut violations = Vec::new();
    for n in 0..p.top_rank() {
        check_rank(p, r, n, &mut violations);
    }
    ValidationReport::from_violations(violations)
}

fn check_rank(p: &RankedPoset, r: u32, n: usize, out: &mut Vec<Violation>) {
    for x in 0..p.level_size(n) {
        let updeg = p.up(n, x).len();
        let downdeg = p.down(n, x).len();
        if updeg != downdeg + r as usize {
            out.push(Violation {
                rank: n,
                elements: vec![x],
                axiom: Axiom::Degree,
                message: format!(
                    "covers {downdeg} but is covered by {updeg}, expected {}",
                    downdeg + r as usize
                ),
            });
        }
    }

    // (common upper, common lower) counts for pairs that have any.
    let mut counts: HashMap<(u32, u32), (u32, u32)> = HashMap::new();
    for covers in &p.down[n + 1] {
        for (k, &a) in covers.iter().enumerate() {
            for &b in &covers[k + 1..] {
                counts.entry((a, b)).or_default().0 += 1;
            }
        }
    }
    if n > 0 {
        for coveredby in &p.up[n - 1] {
            for (k, &a) in coveredby.iter().enumerate() {
                for &b in &coveredby[k + 1..] {
                    counts.entry((a, b)).or_default().1 += 1;
                }
            }
        }
    }
    let sorted: BTreeMap<_, _> = counts.into_iter().collect();
    for ((a, b), (upper, lower)) in sorted {
        let elements = vec![a as usize, b as usize];
        if upper != lower {
            out.push(Violation {
                rank: n,
                elements: elements.clone(),
                axiom: Axiom::CommonCovers,
                message: format!("{upper} common upper covers but {lower} common lower covers"),
            });
        }
        if upper > 1 || lower > 1 {
            out.push(Violation {
                rank: n,
                elements,
                axiom: Axiom::CommonCoverMultiplicity,
                message: format!(
                    "{upper} common upper / {lower} common lower covers, at most one allowed"
                ),
            });
        }
    }
}

/// Partitions of `n` in decreasing lexicographic order.
pub fn partitions_of(n: u32) -> Vec<Vec<u32>> {
    fn rec(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=rem.min(max)).rev() {
            cur.push(part);
            rec(rem - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Young's lattice of integer partitions, ranks `0..=n`.
pub fn young_lattice(n: usize) -> RankedPoset {
    let mut down: Vec<Level> = vec![vec![Vec::new()]];
    let mut prev_index: HashMap<Vec<u32>, u32> = HashMap::from([(Vec::new(), 0)]);
    for j in 1..=n as u32 {
        let parts = partitions_of(j);
        let mut level = Vec::with_capacity(parts.len());
        for lambda in &parts {
            let mut covers = Vec::new();
            for k in 0..lambda.len() {
                // only the last occurrence of a value is a removable corner
                if k + 1 < lambda.len() && lambda[k + 1] == lambda[k] {
                    continue;
                }
                let mut mu = lambda.clone();
                mu[k] -= 1;
                if mu[k] == 0 {
                    mu.pop();
                }
                covers.push(prev_index[&mu]);
            }
            covers.sort_unstable();
            level.push(covers);
        }
        prev_index = parts
            .into_iter()
            .enumerate()
            .map(|(i, p)| (p, i as u32))
            .collect();
        down.push(level);
    }
    RankedPoset::from_down_unchecked(1, down)
}

/// The Fibonacci `r`-differential poset `Z(r)` through rank `n`.
pub fn fibonacci_poset(r: u32, n: usize) -> RankedPoset {
    crate::wagner::wagner_complete_unchecked(&RankedPoset::point(r), r, n)
}

/// Cartesian product truncated at rank `n`. Each factor must reach rank
/// `n`, except that a one-point factor acts as the identity.
pub fn cartesian_product(p: &RankedPoset, q: &RankedPoset, n: usize) -> Result<RankedPoset> {
    for (name, f) in [("left", p), ("right", q)] {
        if f.top_rank() < n && f.top_rank() > 0 {
            return Err(Error::InvalidArgument(format!(
                "{name} factor reaches rank {} but the product needs rank {n}",
                f.top_rank()
            )));
        }
    }
    // index[(a, x, y)] within the level a + b, where b is q's rank.
    let mut index: Vec<HashMap<(usize, usize, usize), u32>> = Vec::with_capacity(n + 1);
    let mut down: Vec<Level> = Vec::with_capacity(n + 1);
    for rank in 0..=n {
        let mut map = HashMap::new();
        let mut level = Vec::new();
        for a in 0..=rank.min(p.top_rank()) {
            let b = rank - a;
            if b > q.top_rank() {
                continue;
            }
            for x in 0..p.level_size(a) {
                for y in 0..q.level_size(b) {
                    let mut covers = Vec::new();
                    if a > 0 {
                        for &xc in p.down(a, x) {
                            covers.push(index[rank - 1][&(a - 1, xc as usize, y)]);
                        }
                    }
                    if b > 0 {
                        for &yc in q.down(b, y) {
                            covers.push(index[rank - 1][&(a, x, yc as usize)]);
                        }
                    }
                    covers.sort_unstable();
                    map.insert((a, x, y), level.len() as u32);
                    level.push(covers);
                }
            }
        }
        index.push(map);
        down.push(level);
    }
    Ok(RankedPoset::from_down_unchecked(p.r() + q.r(), down))
}

/// `Y^r` through rank `n`.
pub fn young_power(r: u32, n: usize) -> RankedPoset {
    let y = young_lattice(n);
    let mut acc = y.clone();
    for _ in 1..r.max(1) {
        acc = cartesian_product(&acc, &y, n).expect("factors reach rank n");
    }
    acc
}
