//! Slow reference implementations kept independent of the library.

#![allow(dead_code)]

use std::collections::HashMap;

/// Down-cover lists per rank; rank 0 holds a single empty list.
pub type Layers = Vec<Vec<Vec<u32>>>;

fn up_lists(layers: &Layers) -> Vec<Vec<Vec<u32>>> {
    let mut up: Vec<Vec<Vec<u32>>> = layers.iter().map(|l| vec![Vec::new(); l.len()]).collect();
    for j in 1..layers.len() {
        for (i, d) in layers[j].iter().enumerate() {
            for &c in d {
                up[j - 1][c as usize].push(i as u32);
            }
        }
    }
    up
}

/// Checks both axioms pair by pair below the top rank.
pub fn is_differential(layers: &Layers, r: u32) -> bool {
    let top = layers.len() - 1;
    let up = up_lists(layers);
    for j in 0..top {
        let n = layers[j].len();
        for x in 0..n {
            if up[j][x].len() != layers[j][x].len() + r as usize {
                return false;
            }
            for y in x + 1..n {
                let cu = up[j][x].iter().filter(|a| up[j][y].contains(a)).count();
                let cl = layers[j][x]
                    .iter()
                    .filter(|a| layers[j][y].contains(a))
                    .count();
                if cu != cl || cu > 1 {
                    return false;
                }
            }
        }
    }
    // two top elements may share at most one lower cover
    let t = &layers[top];
    for x in 0..t.len() {
        for y in x + 1..t.len() {
            if t[x].iter().filter(|a| t[y].contains(a)).count() > 1 {
                return false;
            }
        }
    }
    true
}

/// All one-rank extensions as multisets of nonempty subsets of the top
/// rank, each generated once, filtered by full validation.
pub fn naive_extensions(layers: &Layers, r: u32) -> Vec<Layers> {
    let top = layers.len() - 1;
    let m = layers[top].len();
    let cap: Vec<usize> = layers[top].iter().map(|d| d.len() + r as usize).collect();
    let share = |a: usize, b: usize| layers[top][a].iter().any(|c| layers[top][b].contains(c));
    let mut out = Vec::new();
    let mut left = cap.clone();
    let mut covered = vec![vec![false; m]; m];
    let mut chosen: Vec<Vec<u32>> = Vec::new();

    #[allow(clippy::too_many_arguments)]
    fn go(
        m: usize,
        share: &dyn Fn(usize, usize) -> bool,
        left: &mut Vec<usize>,
        covered: &mut Vec<Vec<bool>>,
        chosen: &mut Vec<Vec<u32>>,
        layers: &Layers,
        r: u32,
        out: &mut Vec<Layers>,
    ) {
        let Some(u) = (0..m).find(|&x| left[x] > 0) else {
            let mut l = layers.clone();
            l.push(chosen.clone());
            if is_differential(&l, r) {
                out.push(l);
            }
            return;
        };
        let pool: Vec<usize> = (u + 1..m)
            .filter(|&x| left[x] > 0 && share(u, x) && !covered[u][x])
            .collect();
        for mask in 0u64..(1u64 << pool.len()) {
            let mut s = vec![u as u32];
            let mut ok = true;
            for (b, &x) in pool.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    if s.iter()
                        .any(|&y| !share(y as usize, x) || covered[y as usize][x])
                    {
                        ok = false;
                        break;
                    }
                    s.push(x as u32);
                }
            }
            if !ok {
                continue;
            }
            if let Some(prev) = chosen.last() {
                if s < *prev {
                    continue;
                }
            }
            for &x in &s {
                left[x as usize] -= 1;
            }
            for (i, &a) in s.iter().enumerate() {
                for &b in &s[i + 1..] {
                    covered[a as usize][b as usize] = true;
                }
            }
            chosen.push(s.clone());
            go(m, share, left, covered, chosen, layers, r, out);
            chosen.pop();
            for (i, &a) in s.iter().enumerate() {
                for &b in &s[i + 1..] {
                    covered[a as usize][b as usize] = false;
                }
            }
            for &x in &s {
                left[x as usize] += 1;
            }
        }
    }
    go(
        m,
        &share,
        &mut left,
        &mut covered,
        &mut chosen,
        layers,
        r,
        &mut out,
    );
    out
}

/// Rank-preserving isomorphism by backtracking over bijections, rank by
/// rank, matching down-cover sets.
pub fn naive_isomorphic(a: &Layers, b: &Layers) -> bool {
    if a.len() != b.len() || a.iter().zip(b).any(|(x, y)| x.len() != y.len()) {
        return false;
    }
    fn rank_map(a: &Layers, b: &Layers, j: usize, maps: &mut Vec<Vec<u32>>) -> bool {
        if j == a.len() {
            return true;
        }
        let n = a[j].len();
        let mut map = vec![u32::MAX; n];
        let mut used = vec![false; n];
        fn assign(
            a: &Layers,
            b: &Layers,
            j: usize,
            i: usize,
            map: &mut Vec<u32>,
            used: &mut Vec<bool>,
            maps: &mut Vec<Vec<u32>>,
        ) -> bool {
            if i == a[j].len() {
                maps.push(map.clone());
                let ok = rank_map(a, b, j + 1, maps);
                maps.pop();
                return ok;
            }
            let mut img: Vec<u32> = a[j][i].iter().map(|&c| maps[j - 1][c as usize]).collect();
            img.sort_unstable();
            for k in 0..b[j].len() {
                if used[k] {
                    continue;
                }
                let mut target = b[j][k].clone();
                target.sort_unstable();
                if target == img {
                    used[k] = true;
                    map[i] = k as u32;
                    if assign(a, b, j, i + 1, map, used, maps) {
                        return true;
                    }
                    used[k] = false;
                }
            }
            false
        }
        if j == 0 {
            maps.push(vec![0]);
            let ok = rank_map(a, b, 1, maps);
            maps.pop();
            return ok;
        }
        assign(a, b, j, 0, &mut map, &mut used, maps)
    }
    rank_map(a, b, 0, &mut Vec::new())
}

fn invariant(l: &Layers) -> Vec<Vec<(usize, usize)>> {
    let up = up_lists(l);
    l.iter()
        .zip(&up)
        .map(|(d, u)| {
            let mut v: Vec<(usize, usize)> =
                d.iter().zip(u).map(|(a, b)| (a.len(), b.len())).collect();
            v.sort_unstable();
            v
        })
        .collect()
}

/// Isomorphism classes of posets `r`-differential up to rank `j`, for
/// `j = 0..=n`, by extending every class and filtering isomorphs.
pub fn naive_counts(r: u32, n: usize) -> Vec<usize> {
    let mut classes: Vec<Layers> = vec![vec![vec![vec![]]]];
    let mut counts = vec![1];
    for _ in 0..n {
        let mut buckets: HashMap<Vec<Vec<(usize, usize)>>, Vec<Layers>> = HashMap::new();
        let mut next = Vec::new();
        for c in &classes {
            for e in naive_extensions(c, r) {
                let bucket = buckets.entry(invariant(&e)).or_default();
                if !bucket.iter().any(|x| naive_isomorphic(x, &e)) {
                    bucket.push(e.clone());
                    next.push(e);
                }
            }
        }
        counts.push(next.len());
        classes = next;
    }
    counts
}
