//! Torus ground-state degeneracy by direct enumeration.
//!
//! Flat configurations (every plaquette word trivial) are generated from
//! spanning-tree data: a breadth-first tree is fixed once, its edges range
//! freely over G, and each leftover edge is solved from the requirement that
//! its fundamental cycle carry the holonomy a^wx b^wy, where (wx, wy) is the
//! cycle's winding around the torus and (a, b) runs over all commuting
//! pairs. This parameterization hits every flat configuration exactly once,
//! so the total count is (number of commuting pairs) x |G|^(V-1).
//!
//! The degeneracy is the number of orbits under the vertex gauge moves,
//! merged by union-find over single-vertex updates. No conjugacy or orbit
//! bookkeeping from the group layer enters here, which keeps this count an
//! independent check on the character-theoretic one.

use std::collections::HashMap;

use crate::error::{QdError, Result};
use crate::group::FiniteGroup;
use crate::lattice::TorusLattice;
use crate::operators::ConfigCodec;

/// Fallback cap on enumerated configurations when `QDOUBLE_MAX_CONFIGS` is
/// not set.
pub const DEFAULT_MAX_CONFIGS: u64 = 10_000_000;

/// Degeneracy count with the enumeration totals behind it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GsdCount {
    /// Number of gauge orbits: the ground-state degeneracy.
    pub orbits: usize,
    /// Flat configurations enumerated.
    pub flat_configs: usize,
    /// Commuting pairs (a, b), one holonomy sector each.
    pub commuting_pairs: usize,
}

/// Enumeration cap: `QDOUBLE_MAX_CONFIGS` if set and parseable, else the
/// default.
pub fn enumeration_limit() -> u64 {
    std::env::var("QDOUBLE_MAX_CONFIGS")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_MAX_CONFIGS)
}

/// Counts ground states by brute force under the environment-configured
/// enumeration cap.
pub fn brute_force_gsd(group: &FiniteGroup, lat: &TorusLattice) -> Result<GsdCount> {
    brute_force_gsd_with_limit(group, lat, enumeration_limit())
}

/// One tree edge, oriented from the parent side toward the child vertex.
/// `forward` records whether the lattice arrow agrees with that direction.
struct TreeEdge {
    edge: usize,
    parent: usize,
    child: usize,
    forward: bool,
}

/// One non-tree edge with the winding numbers of its fundamental cycle.
struct CycleEdge {
    edge: usize,
    tail: usize,
    head: usize,
    wx: i64,
    wy: i64,
}

struct TreeData {
    /// In breadth-first discovery order, so transports can be filled in one
    /// pass.
    tree: Vec<TreeEdge>,
    cycles: Vec<CycleEdge>,
}

/// Breadth-first spanning tree from vertex 0, plus the winding of every
/// leftover edge's fundamental cycle, computed by lifting tree paths to the
/// plane and measuring how far the lift of each endpoint pair separates.
fn tree_data(lat: &TorusLattice) -> TreeData {
    let nv = lat.num_vertices();
    let mut seen = vec![false; nv];
    let mut lift = vec![(0i64, 0i64); nv];
    let mut tree = Vec::with_capacity(nv - 1);
    let mut in_tree = vec![false; lat.num_edges()];
    let mut queue = std::collections::VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(v) = queue.pop_front() {
        for (edge, tail_here) in lat.vertex_star(v) {
            let info = lat.edge_info(edge);
            let other = if tail_here { info.head } else { info.tail };
            if seen[other] {
                continue;
            }
            seen[other] = true;
            in_tree[edge] = true;
            let step = if info.horizontal { (1, 0) } else { (0, 1) };
            let sign = if tail_here { 1 } else { -1 };
            lift[other] = (lift[v].0 + sign * step.0, lift[v].1 + sign * step.1);
            tree.push(TreeEdge { edge, parent: v, child: other, forward: tail_here });
            queue.push_back(other);
        }
    }
    debug_assert_eq!(tree.len(), nv - 1);

    let mut cycles = Vec::new();
    for edge in 0..lat.num_edges() {
        if in_tree[edge] {
            continue;
        }
        let info = lat.edge_info(edge);
        let step = if info.horizontal { (1, 0) } else { (0, 1) };
        let dx = lift[info.tail].0 + step.0 - lift[info.head].0;
        let dy = lift[info.tail].1 + step.1 - lift[info.head].1;
        debug_assert_eq!(dx % lat.lx() as i64, 0);
        debug_assert_eq!(dy % lat.ly() as i64, 0);
        cycles.push(CycleEdge {
            edge,
            tail: info.tail,
            head: info.head,
            wx: dx / lat.lx() as i64,
            wy: dy / lat.ly() as i64,
        });
    }
    TreeData { tree, cycles }
}

fn gpow(group: &FiniteGroup, g: usize, k: i64) -> usize {
    let base = if k < 0 { group.inv(g) } else { g };
    let mut acc = group.identity();
    for _ in 0..k.unsigned_abs() {
        acc = group.mul(acc, base);
    }
    acc
}

/// Every flat configuration, keyed by its enumeration index.
fn enumerate_flat(
    group: &FiniteGroup,
    lat: &TorusLattice,
    codec: &ConfigCodec,
    limit: u64,
) -> Result<HashMap<u128, u32>> {
    let n = group.order();
    let nv = lat.num_vertices();
    let pairs = group.commuting_pairs();
    let per_pair = (n as u128).checked_pow(nv as u32 - 1);
    let needed = per_pair.and_then(|p| p.checked_mul(pairs.len() as u128));
    match needed {
        Some(total) if total <= u128::from(limit) => {}
        _ => {
            return Err(QdError::Budget {
                needed: needed.unwrap_or(u128::MAX),
                limit,
            })
        }
    }

    let data = tree_data(lat);
    let mut map = HashMap::with_capacity(needed.unwrap() as usize);
    let mut tree_vals = vec![0usize; data.tree.len()];
    let mut transport = vec![0usize; nv];
    for &(a, b) in &pairs {
        let holonomy: Vec<usize> =
            data.cycles.iter().map(|c| group.mul(gpow(group, a, c.wx), gpow(group, b, c.wy))).collect();
        tree_vals.iter_mut().for_each(|v| *v = 0);
        loop {
            // parallel transport from vertex 0 through the tree, in
            // discovery order so parents are always filled first
            transport[0] = group.identity();
            let mut cfg = codec.identity_config();
            for (t, &val) in data.tree.iter().zip(&tree_vals) {
                let along = if t.forward { val } else { group.inv(val) };
                transport[t.child] = group.mul(transport[t.parent], along);
                cfg = codec.set(cfg, t.edge, val);
            }
            for (c, &h) in data.cycles.iter().zip(&holonomy) {
                let forced =
                    group.mul(group.inv(transport[c.tail]), group.mul(h, transport[c.head]));
                cfg = codec.set(cfg, c.edge, forced);
            }
            let id = map.len() as u32;
            let stale = map.insert(cfg, id);
            debug_assert!(stale.is_none(), "sector data must determine the configuration");

            let mut i = 0;
            while i < tree_vals.len() {
                tree_vals[i] += 1;
                if tree_vals[i] < n {
                    break;
                }
                tree_vals[i] = 0;
                i += 1;
            }
            if i == tree_vals.len() {
                break;
            }
        }
    }
    debug_assert_eq!(map.len() as u128, needed.unwrap());
    Ok(map)
}

struct Dsu {
    parent: Vec<u32>,
}

impl Dsu {
    fn new(n: usize) -> Dsu {
        Dsu { parent: (0..n as u32).collect() }
    }

    fn find(&mut self, mut i: u32) -> u32 {
        while self.parent[i as usize] != i {
            self.parent[i as usize] = self.parent[self.parent[i as usize] as usize];
            i = self.parent[i as usize];
        }
        i
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra as usize] = rb;
        }
    }
}

/// As `brute_force_gsd` with an explicit enumeration cap.
pub fn brute_force_gsd_with_limit(
    group: &FiniteGroup,
    lat: &TorusLattice,
    limit: u64,
) -> Result<GsdCount> {
    let codec = ConfigCodec::new(group, lat)?;
    let map = enumerate_flat(group, lat, &codec, limit)?;
    let n = group.order();
    let mut dsu = Dsu::new(map.len());
    for (&cfg, &id) in &map {
        for v in 0..lat.num_vertices() {
            let star = lat.vertex_star(v);
            for h in 1..n {
                let mut img = cfg;
                for &(edge, tail_here) in &star {
                    let x = codec.get(cfg, edge);
                    let moved = if tail_here {
                        group.mul(h, x)
                    } else {
                        group.mul(x, group.inv(h))
                    };
                    img = codec.set(img, edge, moved);
                }
                let other = *map.get(&img).expect("gauge moves preserve flatness");
                dsu.union(id, other);
            }
        }
    }
    let orbits = (0..map.len() as u32).filter(|&i| dsu.find(i) == i).count();
    Ok(GsdCount {
        orbits,
        flat_configs: map.len(),
        commuting_pairs: group.commuting_pairs().len(),
    })
}
