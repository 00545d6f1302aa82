//! Exhaustive search for rooted `K_{2,t}` models.

use crate::error::{cap, Error, Result};

use super::{connected_in, docset_masks, DirectedGraph};

/// Largest vertex count searched for models.
pub const MODEL_CAP: usize = 10;

/// Two hub branch sets joined to every central branch set by an edge; each
/// central set contains a root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedModel {
    pub hubs: [Vec<usize>; 2],
    pub centrals: Vec<Vec<usize>>,
    /// `(central vertex, hub vertex)` pairs, two per central set.
    pub witness_edges: Vec<(usize, usize)>,
}

fn mask_of(vs: &[usize]) -> u64 {
    vs.iter().fold(0, |m, &v| m | 1 << v)
}

impl RootedModel {
    pub fn t(&self) -> usize {
        self.centrals.len()
    }

    /// Disjointness, connectivity, roots and witness edges.
    pub fn verify(&self, g: &DirectedGraph, roots: &[usize]) -> bool {
        let nb = g.neighbour_masks();
        let sets: Vec<u64> = self.hubs.iter().chain(&self.centrals).map(|s| mask_of(s)).collect();
        let mut union = 0u64;
        for &s in &sets {
            if s & union != 0 || !connected_in(&nb, s) || s & !g.full_mask() != 0 {
                return false;
            }
            union |= s;
        }
        let root_mask = mask_of(roots);
        if self.centrals.iter().any(|c| mask_of(c) & root_mask == 0) {
            return false;
        }
        if self.witness_edges.len() != 2 * self.t() {
            return false;
        }
        let has_edge = |a: usize, b: usize| g.edges().iter().any(|&(x, y)| (x, y) == (a, b) || (x, y) == (b, a));
        self.centrals.iter().enumerate().all(|(i, c)| {
            (0..2).all(|h| {
                let (a, b) = self.witness_edges[2 * i + h];
                c.contains(&a) && self.hubs[h].contains(&b) && has_edge(a, b)
            })
        })
    }
}

fn neighbourhood(nb: &[u64], mask: u64) -> u64 {
    let mut out = 0;
    let mut bits = mask;
    while bits != 0 {
        let v = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        out |= nb[v];
    }
    out & !mask
}

fn pack(cands: &[u64], from: usize, used: u64, need: usize, chosen: &mut Vec<u64>) -> bool {
    if need == 0 {
        return true;
    }
    for i in from..cands.len() {
        if cands[i] & used == 0 {
            chosen.push(cands[i]);
            if pack(cands, i + 1, used | cands[i], need - 1, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

/// A rooted `K_{2,t}` model of `g` with central sets hitting `roots`, if
/// one exists. Hub pairs are tried in increasing mask order; central sets
/// are packed from inclusion-minimal candidates.
pub fn find_rooted_k2t_model(g: &DirectedGraph, roots: &[usize], t: usize) -> Result<Option<RootedModel>> {
    let n = g.n();
    if n > MODEL_CAP {
        return Err(cap("vertices for model search", n, MODEL_CAP));
    }
    if roots.iter().any(|&r| r >= n) {
        return Err(Error::Dimension("root out of range".into()));
    }
    let nb = g.neighbour_masks();
    let full = g.full_mask();
    let root_mask = mask_of(roots);
    if (root_mask.count_ones() as usize) < t {
        return Ok(None);
    }
    let connected: Vec<u64> = (1..=full).filter(|&s| connected_in(&nb, s)).collect();
    for (i, &h1) in connected.iter().enumerate() {
        let n1 = neighbourhood(&nb, h1);
        for &h2 in &connected[i + 1..] {
            if h1 & h2 != 0 {
                continue;
            }
            let rest = full & !(h1 | h2);
            if ((rest & root_mask).count_ones() as usize) < t {
                continue;
            }
            let n2 = neighbourhood(&nb, h2);
            let mut cands: Vec<u64> = connected
                .iter()
                .copied()
                .filter(|&c| c & !rest == 0 && c & root_mask != 0 && c & n1 != 0 && c & n2 != 0)
                .collect();
            cands.sort_by_key(|c| (c.count_ones(), *c));
            let mut minimal: Vec<u64> = Vec::new();
            for c in cands {
                if minimal.iter().all(|&m| m & c != m) {
                    minimal.push(c);
                }
            }
            if minimal.len() < t {
                continue;
            }
            let mut chosen = Vec::new();
            if pack(&minimal, 0, 0, t, &mut chosen) {
                let hubs = [g.mask_to_vertices(h1), g.mask_to_vertices(h2)];
                let mut witness_edges = Vec::new();
                for &c in &chosen {
                    for h in [h1, h2] {
                        let e = g
                            .edges()
                            .iter()
                            .find_map(|&(a, b)| {
                                if c >> a & 1 == 1 && h >> b & 1 == 1 {
                                    Some((a, b))
                                } else if c >> b & 1 == 1 && h >> a & 1 == 1 {
                                    Some((b, a))
                                } else {
                                    None
                                }
                            })
                            .expect("candidate touches the hub");
                        witness_edges.push(e);
                    }
                }
                let model = RootedModel { hubs, centrals: chosen.iter().map(|&c| g.mask_to_vertices(c)).collect(), witness_edges };
                if !model.verify(g, roots) {
                    return Err(Error::Invariant("constructed model fails verification".into()));
                }
                return Ok(Some(model));
            }
        }
    }
    Ok(None)
}

/// True iff no rooted `K_{2,4kΔ+1}` model exists, where the roots are the
/// vertices with a nonzero weight. Requires a 2-connected graph with all
/// docset weights bounded by `Δ`.
pub fn verify_no_rooted_model_bound(g: &DirectedGraph, w: &[Vec<i64>], k: usize, delta: i64) -> Result<bool> {
    if !g.is_two_connected() {
        return Err(Error::Precondition("graph is not 2-connected".into()));
    }
    if w.len() != k || w.iter().any(|r| r.len() != g.n()) {
        return Err(Error::Dimension("weight rows".into()));
    }
    for s in docset_masks(g, false)? {
        for row in w {
            let v: i64 = (0..g.n()).filter(|v| s >> v & 1 == 1).map(|v| row[v]).sum();
            if v.abs() > delta {
                return Err(Error::Precondition(format!("a docset has weight {v} > {delta}")));
            }
        }
    }
    let roots: Vec<usize> = (0..g.n()).filter(|&v| w.iter().any(|r| r[v] != 0)).collect();
    let t = 4 * k * delta as usize + 1;
    Ok(find_rooted_k2t_model(g, &roots, t)?.is_none())
}
