//! Square-lattice torus geometry.
//!
//! Vertices sit at coordinates (x, y) with x increasing rightward and y
//! increasing downward, both periodic. Every vertex owns two outgoing edges:
//! an east edge to (x+1, y) and a south edge to (x, y+1), so group elements
//! on edges are read "along the arrow" east or south. Plaquette (x, y) is
//! the square with corners (x, y), (x+1, y), (x+1, y+1), (x, y+1).
//!
//! Edge ids interleave the two orientations: edge 2·(y·lx + x) is the east
//! edge at (x, y) and 2·(y·lx + x) + 1 the south edge.

mod region;
mod ribbon;

pub use region::{
    annular_tripartition, planar_tripartition, plaquette_block, row_band, Region,
};
pub use ribbon::{
    compose_ribbons, open_ribbon, path_ribbon, plaquette_loop, rect_loop, standard_ribbons,
    vertex_loop, Ribbon, RibbonStep, StandardRibbons, StepKind,
};

use crate::error::{QdError, Result};
use serde::{Deserialize, Serialize};

/// A site of the quantum double model: a vertex together with one of its
/// four adjacent plaquettes. Ribbons are walks on sites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Site {
    pub vertex: usize,
    pub plaquette: usize,
}

/// Tail, head, and placement data for one edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeInfo {
    pub tail: usize,
    pub head: usize,
    pub horizontal: bool,
    pub x: usize,
    pub y: usize,
}

/// An lx × ly torus, lx, ly ≥ 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusLattice {
    lx: usize,
    ly: usize,
}

impl TorusLattice {
    pub fn new(lx: usize, ly: usize) -> Result<TorusLattice> {
        if lx < 2 || ly < 2 {
            return Err(QdError::LatticeTooSmall { lx, ly });
        }
        Ok(TorusLattice { lx, ly })
    }

    #[inline]
    pub fn lx(&self) -> usize {
        self.lx
    }

    #[inline]
    pub fn ly(&self) -> usize {
        self.ly
    }

    #[inline]
    pub fn num_vertices(&self) -> usize {
        self.lx * self.ly
    }

    #[inline]
    pub fn num_plaquettes(&self) -> usize {
        self.lx * self.ly
    }

    #[inline]
    pub fn num_edges(&self) -> usize {
        2 * self.lx * self.ly
    }

    #[inline]
    pub fn wrap_x(&self, x: isize) -> usize {
        x.rem_euclid(self.lx as isize) as usize
    }

    #[inline]
    pub fn wrap_y(&self, y: isize) -> usize {
        y.rem_euclid(self.ly as isize) as usize
    }

    #[inline]
    pub fn vertex_index(&self, x: usize, y: usize) -> usize {
        (y % self.ly) * self.lx + (x % self.lx)
    }

    #[inline]
    pub fn vertex_xy(&self, v: usize) -> (usize, usize) {
        (v % self.lx, v / self.lx)
    }

    /// East edge leaving (x, y).
    #[inline]
    pub fn h_edge(&self, x: usize, y: usize) -> usize {
        2 * self.vertex_index(x, y)
    }

    /// South edge leaving (x, y).
    #[inline]
    pub fn v_edge(&self, x: usize, y: usize) -> usize {
        2 * self.vertex_index(x, y) + 1
    }

    #[inline]
    pub fn plaquette_index(&self, x: usize, y: usize) -> usize {
        (y % self.ly) * self.lx + (x % self.lx)
    }

    #[inline]
    pub fn plaquette_xy(&self, p: usize) -> (usize, usize) {
        (p % self.lx, p / self.lx)
    }

    pub fn edge_info(&self, e: usize) -> EdgeInfo {
        let v = e / 2;
        let (x, y) = self.vertex_xy(v);
        if e % 2 == 0 {
            EdgeInfo { tail: v, head: self.vertex_index(x + 1, y), horizontal: true, x, y }
        } else {
            EdgeInfo { tail: v, head: self.vertex_index(x, y + 1), horizontal: false, x, y }
        }
    }

    /// Boundary of plaquette (x, y) in word order: each entry is an edge id
    /// and whether the word traverses it along its arrow. The word runs
    /// east along the top, south down the right side, then back against the
    /// bottom and left edges.
    pub fn plaquette_edges(&self, p: usize) -> [(usize, bool); 4] {
        let (x, y) = self.plaquette_xy(p);
        [
            (self.h_edge(x, y), true),
            (self.v_edge(x + 1, y), true),
            (self.h_edge(x, y + 1), false),
            (self.v_edge(x, y), false),
        ]
    }

    /// The four edges meeting vertex v, each tagged with whether its tail
    /// sits at v: east and south edges leave v, west and north edges end
    /// there.
    pub fn vertex_star(&self, v: usize) -> [(usize, bool); 4] {
        let (x, y) = self.vertex_xy(v);
        let xm = self.wrap_x(x as isize - 1);
        let ym = self.wrap_y(y as isize - 1);
        [
            (self.h_edge(x, y), true),
            (self.v_edge(x, y), true),
            (self.h_edge(xm, y), false),
            (self.v_edge(x, ym), false),
        ]
    }

    /// The four plaquettes touching vertex v, in the order SE, SW, NW, NE.
    pub fn vertex_plaquettes(&self, v: usize) -> [usize; 4] {
        let (x, y) = self.vertex_xy(v);
        let xm = self.wrap_x(x as isize - 1);
        let ym = self.wrap_y(y as isize - 1);
        [
            self.plaquette_index(x, y),
            self.plaquette_index(xm, y),
            self.plaquette_index(xm, ym),
            self.plaquette_index(x, ym),
        ]
    }

    /// Canonical site at vertex (x, y): the vertex paired with its south-east
    /// plaquette. Ribbon constructors start and end on canonical sites.
    pub fn site(&self, x: usize, y: usize) -> Site {
        Site { vertex: self.vertex_index(x, y), plaquette: self.plaquette_index(x, y) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degenerate_tori() {
        assert!(matches!(TorusLattice::new(1, 4), Err(QdError::LatticeTooSmall { .. })));
        assert!(matches!(TorusLattice::new(2, 1), Err(QdError::LatticeTooSmall { .. })));
        assert!(TorusLattice::new(2, 2).is_ok());
    }

    #[test]
    fn edge_indexing_round_trips() {
        let lat = TorusLattice::new(3, 4).unwrap();
        assert_eq!(lat.num_edges(), 24);
        let mut seen = vec![false; lat.num_edges()];
        for y in 0..4 {
            for x in 0..3 {
                for e in [lat.h_edge(x, y), lat.v_edge(x, y)] {
                    assert!(!seen[e]);
                    seen[e] = true;
                    let info = lat.edge_info(e);
                    assert_eq!((info.x, info.y), (x, y));
                    assert_eq!(info.tail, lat.vertex_index(x, y));
                }
            }
        }
        assert!(seen.iter().all(|&s| s));
        assert_eq!(lat.edge_info(lat.h_edge(2, 0)).head, lat.vertex_index(0, 0));
        assert_eq!(lat.edge_info(lat.v_edge(0, 3)).head, lat.vertex_index(0, 0));
    }

    #[test]
    fn every_edge_on_two_plaquettes_with_opposite_senses() {
        let lat = TorusLattice::new(2, 3).unwrap();
        let mut along = vec![0usize; lat.num_edges()];
        let mut against = vec![0usize; lat.num_edges()];
        for p in 0..lat.num_plaquettes() {
            for (e, a) in lat.plaquette_edges(p) {
                if a {
                    along[e] += 1;
                } else {
                    against[e] += 1;
                }
            }
        }
        assert!(along.iter().all(|&c| c == 1));
        assert!(against.iter().all(|&c| c == 1));
    }

    #[test]
    fn every_edge_in_two_stars_once_per_end() {
        let lat = TorusLattice::new(3, 3).unwrap();
        let mut tails = vec![0usize; lat.num_edges()];
        let mut heads = vec![0usize; lat.num_edges()];
        for v in 0..lat.num_vertices() {
            for (e, tail_here) in lat.vertex_star(v) {
                let info = lat.edge_info(e);
                if tail_here {
                    assert_eq!(info.tail, v);
                    tails[e] += 1;
                } else {
                    assert_eq!(info.head, v);
                    heads[e] += 1;
                }
            }
        }
        assert!(tails.iter().all(|&c| c == 1));
        assert!(heads.iter().all(|&c| c == 1));
    }

    #[test]
    fn vertex_plaquettes_surround_the_vertex() {
        let lat = TorusLattice::new(4, 4).unwrap();
        let v = lat.vertex_index(2, 1);
        let ps = lat.vertex_plaquettes(v);
        assert_eq!(
            ps,
            [
                lat.plaquette_index(2, 1),
                lat.plaquette_index(1, 1),
                lat.plaquette_index(1, 0),
                lat.plaquette_index(2, 0),
            ]
        );
        // each surrounding plaquette's boundary touches v via exactly 2 edges
        for p in ps {
            let count = lat
                .plaquette_edges(p)
                .iter()
                .filter(|(e, _)| {
                    let i = lat.edge_info(*e);
                    i.tail == v || i.head == v
                })
                .count();
            assert_eq!(count, 2);
        }
    }
}
