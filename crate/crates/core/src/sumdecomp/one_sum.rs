//! Knapsack over the components of a 1-sum.

use super::{offer, TableEntry, WeightTable};

/// Combines per-component tables `d -> best` into the best total with
/// weight exactly `d`. Partial sums leave the box `[-bound, bound]^k` only
/// at the cost of being dropped.
pub fn solve_1sum(tables: &[WeightTable], d: &[i64], bound: i64) -> Option<TableEntry> {
    let mut acc = WeightTable::new();
    acc.insert(vec![0; d.len()], TableEntry { value: 0, witness: Default::default() });
    for t in tables {
        let mut next = WeightTable::new();
        for (da, ea) in &acc {
            for (dt, et) in t {
                let s: Vec<i64> = da.iter().zip(dt).map(|(x, y)| x + y).collect();
                if s.iter().any(|v| v.abs() > bound) {
                    continue;
                }
                let mut witness = ea.witness.clone();
                witness.extend(et.witness.iter().map(|(k, v)| (*k, *v)));
                offer(&mut next, s, TableEntry { value: ea.value + et.value, witness });
            }
        }
        acc = next;
    }
    acc.remove(d)
}
