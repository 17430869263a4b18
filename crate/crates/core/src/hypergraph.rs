//! Hypergraphs attached to consecutive ranks, linear spaces and projective
//! planes.
//!
//! The rank window `[1, 2]` of an `r`-differential poset is determined by
//! the hypergraph on the `r` atoms whose hyperedges are the down-sets of
//! rank-two elements covering at least two atoms. Such hypergraphs are
//! exactly the linear spaces: every pair of vertices lies in exactly one
//! hyperedge.

use std::collections::BTreeSet;
use std::fmt;

use crate::canon::{canonical_form_levels, CanonicalCert};
use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::poset::{Level, RankedPoset};

/// Default largest vertex count for [`enumerate_linear_spaces`].
pub const DEFAULT_LINEAR_SPACE_LIMIT: u32 = 9;

/// A hypergraph on vertices `1..=r` with hyperedges of size at least two.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hypergraph {
    r: u32,
    edges: Vec<Vec<u32>>,
}

impl Hypergraph {
    /// Sorts every hyperedge and the hyperedge list; rejects hyperedges of
    /// size below two, out-of-range vertices and duplicates.
    pub fn new(r: u32, edges: Vec<Vec<u32>>) -> Result<Self> {
        let mut sorted = Vec::with_capacity(edges.len());
        for mut e in edges {
            e.sort_unstable();
            if e.len() < 2 {
                return Err(Error::InvalidArgument(format!(
                    "hyperedge {e:?} has fewer than two vertices"
                )));
            }
            if e.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidArgument(format!(
                    "hyperedge {e:?} repeats a vertex"
                )));
            }
            if e[0] == 0 || *e.last().unwrap() > r {
                return Err(Error::InvalidArgument(format!(
                    "hyperedge {e:?} leaves the vertex range 1..={r}"
                )));
            }
            sorted.push(e);
        }
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument("duplicate hyperedge".into()));
        }
        Ok(Hypergraph { r, edges: sorted })
    }

    pub fn empty(r: u32) -> Self {
        Hypergraph {
            r,
            edges: Vec::new(),
        }
    }

    /// The `(r-1)`-simplex: one hyperedge holding every vertex.
    pub fn simplex(r: u32) -> Self {
        if r < 2 {
            return Self::empty(r);
        }
        Hypergraph {
            r,
            edges: vec![(1..=r).collect()],
        }
    }

    /// `K_r` as a 2-uniform hypergraph.
    pub fn complete_graph(r: u32) -> Self {
        let mut edges = Vec::new();
        for a in 1..=r {
            for b in a + 1..=r {
                edges.push(vec![a, b]);
            }
        }
        Hypergraph { r, edges }
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn edges(&self) -> &[Vec<u32>] {
        &self.edges
    }

    /// Vertex/hyperedge incidence as two levels for canonical labelling.
    fn incidence_levels(&self) -> Vec<Level> {
        vec![
            vec![Vec::new(); self.r as usize],
            self.edges
                .iter()
                .map(|e| e.iter().map(|&v| v - 1).collect())
                .collect(),
        ]
    }

    pub fn canonical_cert(&self) -> CanonicalCert {
        canonical_form_levels(&self.incidence_levels()).cert
    }

    /// The canonically relabelled copy.
    pub fn canonical(&self) -> Hypergraph {
        let form = canonical_form_levels(&self.incidence_levels());
        let edges = self
            .edges
            .iter()
            .map(|e| {
                e.iter()
                    .map(|&v| form.perms[0][(v - 1) as usize] + 1)
                    .collect()
            })
            .collect();
        Hypergraph::new(self.r, edges).expect("relabelling preserves validity")
    }

    pub fn is_isomorphic(&self, other: &Hypergraph) -> bool {
        self.r == other.r
            && self.edges.len() == other.edges.len()
            && self.canonical_cert() == other.canonical_cert()
    }

    fn pair_counts(&self) -> Vec<u32> {
        let n = self.r as usize;
        let mut counts = vec![0u32; n * n];
        for e in &self.edges {
            for (k, &a) in e.iter().enumerate() {
                for &b in &e[k + 1..] {
                    counts[(a as usize - 1) * n + (b as usize - 1)] += 1;
                }
            }
        }
        counts
    }
}

impl fmt::Debug for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hypergraph(r={}, {:?})", self.r, self.edges)
    }
}

/// Every unordered pair of distinct vertices lies in exactly one hyperedge.
pub fn is_admissible(h: &Hypergraph) -> bool {
    let n = h.r as usize;
    let counts = h.pair_counts();
    (0..n).all(|a| (a + 1..n).all(|b| counts[a * n + b] == 1))
}

/// Sum of `|F| - 1` over all hyperedges.
pub fn dimension_sum(h: &Hypergraph) -> u64 {
    h.edges.iter().map(|e| e.len() as u64 - 1).sum()
}

/// Ranks 0..=2 of an `r`-differential poset whose rank-two window is
/// described by the admissible hypergraph `h`.
///
/// Rank two lists one element per hyperedge, then for each atom the
/// singleton covers needed to give it `r + 1` upper covers.
pub fn poset_from_hypergraph(h: &Hypergraph, r: u32) -> Result<RankedPoset> {
    if h.r != r {
        return Err(Error::InvalidArgument(format!(
            "hypergraph has {} vertices but r = {r}",
            h.r
        )));
    }
    if !is_admissible(h) {
        return Err(Error::Inadmissible(
            "some vertex pair is not in exactly one hyperedge".into(),
        ));
    }
    let mut in_edges = vec![0u32; r as usize];
    let mut rank2: Level = Vec::new();
    for e in &h.edges {
        for &v in e {
            in_edges[v as usize - 1] += 1;
        }
        rank2.push(e.iter().map(|&v| v - 1).collect());
    }
    for (x, &k) in in_edges.iter().enumerate() {
        for _ in k..r + 1 {
            rank2.push(vec![x as u32]);
        }
    }
    RankedPoset::new(r, vec![vec![Vec::new()], vec![vec![0]; r as usize], rank2])
}

/// The hypergraph on rank `n` whose hyperedges are the down-sets of the
/// rank-`(n+1)` elements covering at least two elements.
pub fn hypergraph_from_ranks(p: &RankedPoset, n: usize) -> Result<Hypergraph> {
    if n + 1 > p.top_rank() {
        return Err(Error::RankOutOfRange {
            rank: n + 1,
            top: p.top_rank(),
        });
    }
    let edges = p
        .down_level(n + 1)
        .iter()
        .filter(|c| c.len() >= 2)
        .map(|c| c.iter().map(|&v| v + 1).collect())
        .collect();
    Hypergraph::new(p.level_size(n) as u32, edges)
}

/// One representative per isomorphism class of linear spaces on `r`
/// points, canonically labelled and sorted by certificate.
///
/// Classes on `k + 1` points are grown from classes on `k` points: the new
/// point joins a set of pairwise disjoint lines and forms a two-point line
/// with every point left over. Deleting a point from any linear space gives
/// a linear space, so every class is reached.
pub fn enumerate_linear_spaces(r: u32) -> Result<Vec<Hypergraph>> {
    enumerate_linear_spaces_with_limit(r, DEFAULT_LINEAR_SPACE_LIMIT)
}

pub fn enumerate_linear_spaces_with_limit(r: u32, limit: u32) -> Result<Vec<Hypergraph>> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be positive".into()));
    }
    if r > limit {
        return Err(Error::LimitExceeded { r, limit });
    }
    let mut classes = vec![Hypergraph::empty(1)];
    for k in 1..r {
        let mut seen: BTreeSet<CanonicalCert> = BTreeSet::new();
        let mut next = Vec::new();
        for h in &classes {
            for_each_disjoint_line_set(h, &mut |chosen| {
                let child = add_point(h, k + 1, chosen);
                let cert = child.canonical_cert();
                if seen.insert(cert.clone()) {
                    next.push((cert, child));
                }
            });
        }
        next.sort_by(|a, b| a.0.cmp(&b.0));
        classes = next.into_iter().map(|(_, h)| h.canonical()).collect();
    }
    Ok(classes)
}

fn for_each_disjoint_line_set(h: &Hypergraph, f: &mut dyn FnMut(&[usize])) {
    fn rec(
        h: &Hypergraph,
        from: usize,
        used: &mut Vec<bool>,
        chosen: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]),
    ) {
        f(chosen);
        for i in from..h.edges.len() {
            if h.edges[i].iter().any(|&v| used[v as usize]) {
                continue;
            }
            for &v in &h.edges[i] {
                used[v as usize] = true;
            }
            chosen.push(i);
            rec(h, i + 1, used, chosen, f);
            chosen.pop();
            for &v in &h.edges[i] {
                used[v as usize] = false;
            }
        }
    }
    let mut used = vec![false; h.r as usize + 1];
    rec(h, 0, &mut used, &mut Vec::new(), f);
}

fn add_point(h: &Hypergraph, p: u32, chosen: &[usize]) -> Hypergraph {
    let mut covered = vec![false; p as usize];
    let mut edges: Vec<Vec<u32>> = Vec::with_capacity(h.edges.len() + p as usize);
    for (i, e) in h.edges.iter().enumerate() {
        let mut e = e.clone();
        if chosen.contains(&i) {
            for &v in &e {
                covered[v as usize] = true;
            }
            e.push(p);
        }
        edges.push(e);
    }
    for v in 1..p {
        if !covered[v as usize] {
            edges.push(vec![v, p]);
        }
    }
    Hypergraph::new(p, edges).expect("point extension keeps hyperedges valid")
}

/// `p2 = r(r+1) - T` for each linear space class on `r` points, ascending.
pub fn p2_spectrum(r: u32) -> Result<Vec<u64>> {
    let mut values: Vec<u64> = enumerate_linear_spaces(r)?.iter().map(p2_of).collect();
    values.sort_unstable();
    Ok(values)
}

pub fn p2_of(h: &Hypergraph) -> u64 {
    let r = u64::from(h.r);
    r * (r + 1) - dimension_sum(h)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExtremalP2 {
    pub min: u64,
    pub second_max: Option<u64>,
    pub max: u64,
}

/// Smallest, second largest and largest possible rank-two sizes of an
/// `r`-differential poset: `C(r+2,2) - 1`, `r^2 - r + 3` (only for `r > 1`)
/// and `r^2 + 1`.
pub fn extremal_p2(r: u32) -> ExtremalP2 {
    let r = u64::from(r);
    ExtremalP2 {
        min: (r + 2) * (r + 1) / 2 - 1,
        second_max: (r > 1).then(|| r * r - r + 3),
        max: r * r + 1,
    }
}

/// A hyperedge of `c` vertices in a non-simplex linear space on `r` points
/// must satisfy `(c - (r-1))(c - 2) <= 0`.
pub fn edge_size_feasible(c: u32, r: u32) -> bool {
    let (c, r) = (i64::from(c), i64::from(r));
    (c - (r - 1)) * (c - 2) <= 0
}

/// Steiner system check: all blocks have `m` points and every `l`-subset
/// of the vertices lies in exactly one block.
pub fn is_steiner(h: &Hypergraph, l: u32, m: u32) -> bool {
    if h.edges.iter().any(|e| e.len() != m as usize) {
        return false;
    }
    if l == 2 {
        return is_admissible(h);
    }
    if l == 0 {
        return h.edges.len() == 1;
    }
    if l > h.r {
        return true;
    }
    let mut subset: Vec<u32> = (1..=l).collect();
    loop {
        let hits = h
            .edges
            .iter()
            .filter(|e| subset.iter().all(|v| e.binary_search(v).is_ok()))
            .count();
        if hits != 1 {
            return false;
        }
        // next combination in lexicographic order
        let mut i = l as usize;
        while i > 0 && subset[i - 1] == h.r - (l - i as u32) {
            i -= 1;
        }
        if i == 0 {
            return true;
        }
        subset[i - 1] += 1;
        for k in i..l as usize {
            subset[k] = subset[k - 1] + 1;
        }
    }
}

/// The order `q` if `h` is a projective plane `S(2, q+1, q^2+q+1)`, `q >= 2`.
pub fn is_projective_plane(h: &Hypergraph) -> Option<u32> {
    let r = h.r;
    let q = (2..)
        .take_while(|q| q * q + q < r)
        .find(|q| q * q + q + 1 == r)?;
    is_steiner(h, 2, q + 1).then_some(q)
}

/// PG(2, q): points and lines are the 1- and 2-dimensional subspaces of
/// GF(q)^3, each written as a normalised vector (first nonzero entry 1).
pub fn desarguesian_plane(q: u32) -> Result<Hypergraph> {
    let field = FiniteField::new(q)?;
    let mut points: Vec<[u32; 3]> = Vec::new();
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                let v = [a, b, c];
                if v.iter().find(|&&x| x != 0) == Some(&1) {
                    points.push(v);
                }
            }
        }
    }
    let edges = points
        .iter()
        .map(|line| {
            points
                .iter()
                .enumerate()
                .filter(|(_, pt)| field.dot3(*line, **pt) == 0)
                .map(|(i, _)| i as u32 + 1)
                .collect()
        })
        .collect();
    Hypergraph::new(points.len() as u32, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::validate_differential;

    fn fano() -> Hypergraph {
        Hypergraph::new(
            7,
            vec![
                vec![1, 2, 3],
                vec![1, 4, 5],
                vec![1, 6, 7],
                vec![2, 4, 6],
                vec![2, 5, 7],
                vec![3, 4, 7],
                vec![3, 5, 6],
            ],
        )
        .unwrap()
    }

    #[test]
    fn admissibility() {
        assert!(is_admissible(
            &Hypergraph::new(2, vec![vec![1, 2]]).unwrap()
        ));
        let h =
            Hypergraph::new(4, vec![vec![1, 2, 3], vec![1, 4], vec![2, 4], vec![3, 4]]).unwrap();
        assert!(is_admissible(&h));
        let bad = Hypergraph::new(3, vec![vec![1, 2], vec![1, 2, 3]]).unwrap();
        assert!(!is_admissible(&bad));
        assert!(is_admissible(&Hypergraph::empty(1)));
        assert!(is_admissible(&fano()));
    }

    #[test]
    fn dimensions() {
        assert_eq!(dimension_sum(&Hypergraph::simplex(4)), 3);
        assert_eq!(dimension_sum(&Hypergraph::complete_graph(4)), 6);
        assert_eq!(dimension_sum(&Hypergraph::empty(3)), 0);
    }

    #[test]
    fn posets_from_hypergraphs() {
        let p = poset_from_hypergraph(&fano(), 7).unwrap();
        assert_eq!(p.level_size(2), 42);
        assert!(validate_differential(&p, 7).ok);
        let k4 = poset_from_hypergraph(&Hypergraph::complete_graph(4), 4).unwrap();
        assert_eq!(k4.level_size(2), 14);
        let one = poset_from_hypergraph(&Hypergraph::empty(1), 1).unwrap();
        assert_eq!(one.level_size(2), 2);
        assert!(poset_from_hypergraph(&Hypergraph::new(3, vec![vec![1, 2]]).unwrap(), 3).is_err());
        assert!(poset_from_hypergraph(&fano(), 6).is_err());
    }

    #[test]
    fn hypergraphs_from_ranks() {
        let y = crate::poset::young_lattice(3);
        let h = hypergraph_from_ranks(&y, 2).unwrap();
        assert_eq!(h.r(), 2);
        assert_eq!(h.edges(), &[vec![1, 2]]);
        let z = crate::poset::fibonacci_poset(1, 2);
        assert_eq!(hypergraph_from_ranks(&z, 1).unwrap(), Hypergraph::empty(1));
        assert!(hypergraph_from_ranks(&z, 2).is_err());
        let h = fano();
        assert_eq!(
            hypergraph_from_ranks(&poset_from_hypergraph(&h, 7).unwrap(), 1).unwrap(),
            h
        );
    }

    #[test]
    fn linear_space_counts() {
        let counts: Vec<usize> = (1..=6)
            .map(|r| enumerate_linear_spaces(r).unwrap().len())
            .collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 10]);
        assert!(matches!(
            enumerate_linear_spaces(10),
            Err(Error::LimitExceeded { .. })
        ));
    }

    #[test]
    fn spectra() {
        assert_eq!(p2_spectrum(4).unwrap(), vec![14, 15, 17]);
        assert_eq!(p2_spectrum(5).unwrap(), vec![20, 21, 22, 23, 26]);
        assert_eq!(
            p2_spectrum(6).unwrap(),
            vec![27, 28, 29, 29, 30, 30, 31, 31, 33, 37]
        );
    }

    #[test]
    fn extremal_values() {
        assert_eq!(
            extremal_p2(4),
            ExtremalP2 {
                min: 14,
                second_max: Some(15),
                max: 17
            }
        );
        assert_eq!(
            extremal_p2(2),
            ExtremalP2 {
                min: 5,
                second_max: Some(5),
                max: 5
            }
        );
        assert_eq!(
            extremal_p2(1),
            ExtremalP2 {
                min: 2,
                second_max: None,
                max: 2
            }
        );
        assert!(edge_size_feasible(3, 4));
        assert!(edge_size_feasible(2, 4));
        assert!(!edge_size_feasible(4, 4));
    }

    #[test]
    fn steiner_and_planes() {
        assert!(is_steiner(&fano(), 2, 3));
        assert!(is_steiner(&Hypergraph::complete_graph(5), 2, 2));
        assert!(!is_steiner(&Hypergraph::simplex(4), 2, 3));
        assert_eq!(is_projective_plane(&fano()), Some(2));
        assert_eq!(is_projective_plane(&Hypergraph::complete_graph(4)), None);
        assert_eq!(
            is_projective_plane(&desarguesian_plane(3).unwrap()),
            Some(3)
        );
        // S(3,4,8): the extended binary Hamming code's weight-4 words
        let aff = Hypergraph::new(
            8,
            vec![
                vec![1, 2, 3, 4],
                vec![1, 2, 5, 6],
                vec![1, 2, 7, 8],
                vec![1, 3, 5, 7],
                vec![1, 3, 6, 8],
                vec![1, 4, 5, 8],
                vec![1, 4, 6, 7],
                vec![2, 3, 5, 8],
                vec![2, 3, 6, 7],
                vec![2, 4, 5, 7],
                vec![2, 4, 6, 8],
                vec![3, 4, 5, 6],
                vec![3, 4, 7, 8],
                vec![5, 6, 7, 8],
            ],
        )
        .unwrap();
        assert!(is_steiner(&aff, 3, 4));
        assert!(!is_steiner(&aff, 2, 4));
    }

    #[test]
    fn planes_of_small_order() {
        let f = desarguesian_plane(2).unwrap();
        assert_eq!((f.r(), f.edges().len()), (7, 7));
        assert!(f.is_isomorphic(&fano()));
        let p3 = desarguesian_plane(3).unwrap();
        assert_eq!((p3.r(), p3.edges().len()), (13, 13));
        assert!(p3.edges().iter().all(|e| e.len() == 4));
        assert!(desarguesian_plane(6).is_err());
    }
}
