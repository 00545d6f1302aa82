//! Exhaustive search for low-order separations.

use crate::config::{Configuration, Label};
use crate::error::{cap, Result};
use crate::tu::for_each_subset;

/// Largest configuration searched for separations.
pub const SEPARATION_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Separation {
    pub side1: Vec<Label>,
    pub side2: Vec<Label>,
    pub order: usize,
}

/// `rank(A1) + rank(A2) - rank(A) + 1`.
pub fn separation_order(a: &Configuration, side1: &[usize], side2: &[usize]) -> usize {
    a.rank_of(side1) + a.rank_of(side2) + 1 - a.rank()
}

/// A `q`-separation of minimum order, if any. Both sides have at least `q`
/// columns; smaller first sides are tried first.
pub fn find_separation(a: &Configuration, q: usize) -> Result<Option<Separation>> {
    for order in 1..=q {
        if let Some(s) = find_with_order(a, q, order)? {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

/// A separation of exactly `order` with both sides of size at least `min_side`.
pub(crate) fn find_with_order(a: &Configuration, min_side: usize, order: usize) -> Result<Option<Separation>> {
    let n = a.n();
    if n > SEPARATION_CAP {
        return Err(cap("columns for separation search", n, SEPARATION_CAP));
    }
    let r = a.rank();
    let min_side = min_side.max(1);
    let mut found = None;
    for size in min_side..=n / 2 {
        if n - size < min_side {
            break;
        }
        for_each_subset(n, size, &mut |s1| {
            if size * 2 == n && !s1.contains(&0) {
                return true;
            }
            let s2: Vec<usize> = (0..n).filter(|j| !s1.contains(j)).collect();
            if a.rank_of(s1) + a.rank_of(&s2) + 1 - r == order {
                found = Some(Separation {
                    side1: s1.iter().map(|&j| a.label(j)).collect(),
                    side2: s2.iter().map(|&j| a.label(j)).collect(),
                    order,
                });
                return false;
            }
            true
        });
        if found.is_some() {
            break;
        }
    }
    Ok(found)
}
