//! Wagner's one-rank extension and its iteration.

use crate::error::{Error, Result};
use crate::poset::{validate_differential, Level, RankedPoset};

/// Adds one rank with Wagner's construction after checking that `p` is
/// `r`-differential up to its top rank.
pub fn wagner_extend(p: &RankedPoset, r: u32) -> Result<RankedPoset> {
    ensure_differential(p, r)?;
    Ok(wagner_extend_unchecked(p, r))
}

/// Wagner's extension without revalidating the input.
///
/// The new rank lists one reflection element per element of rank `j - 1`
/// (covering exactly that element's upper covers), followed by `r`
/// singleton covers for each element of rank `j`.
pub fn wagner_extend_unchecked(p: &RankedPoset, r: u32) -> RankedPoset {
    let j = p.top_rank();
    let mut level: Level = Vec::with_capacity(
        p.level_size(j) * r as usize + if j > 0 { p.level_size(j - 1) } else { 0 },
    );
    if j > 0 {
        level.extend(p.up_level(j - 1).iter().cloned());
    }
    for x in 0..p.level_size(j) as u32 {
        for _ in 0..r {
            level.push(vec![x]);
        }
    }
    let mut down = p.down_levels().to_vec();
    down.push(level);
    RankedPoset::from_down_unchecked(p.r(), down)
}

/// Iterates [`wagner_extend`] until the top rank is `n`.
pub fn wagner_complete(p: &RankedPoset, r: u32, n: usize) -> Result<RankedPoset> {
    if n < p.top_rank() {
        return Err(Error::InvalidArgument(format!(
            "target rank {n} is below the current top rank {}",
            p.top_rank()
        )));
    }
    ensure_differential(p, r)?;
    Ok(wagner_complete_unchecked(p, r, n))
}

pub(crate) fn wagner_complete_unchecked(p: &RankedPoset, r: u32, n: usize) -> RankedPoset {
    let mut cur = p.clone();
    while cur.top_rank() < n {
        cur = wagner_extend_unchecked(&cur, r);
    }
    cur
}

pub(crate) fn ensure_differential(p: &RankedPoset, r: u32) -> Result<()> {
    let report = validate_differential(p, r);
    match report.violations.first() {
        None => Ok(()),
        Some(v) => Err(Error::NotDifferential {
            r,
            detail: format!(
                "{} violation at rank {} elements {:?}: {}",
                v.axiom, v.rank, v.elements, v.message
            ),
        }),
    }
}
