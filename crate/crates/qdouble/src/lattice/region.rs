//! Edge regions and the canonical partitions used by the entropy and
//! Markov-property diagnostics.

use super::TorusLattice;
use crate::error::{QdError, Result};
use serde::{Deserialize, Serialize};

/// A subset of edges, kept sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    edges: Vec<usize>,
}

impl Region {
    pub fn from_edges(mut edges: Vec<usize>) -> Region {
        edges.sort_unstable();
        edges.dedup();
        Region { edges }
    }

    pub fn empty() -> Region {
        Region { edges: Vec::new() }
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn is_disjoint(&self, other: &Region) -> bool {
        self.edges.iter().all(|&e| !other.contains(e))
    }

    pub fn union(&self, other: &Region) -> Region {
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        Region::from_edges(edges)
    }

    pub fn intersection(&self, other: &Region) -> Region {
        Region::from_edges(self.edges.iter().copied().filter(|&e| other.contains(e)).collect())
    }

    pub fn complement(&self, lat: &TorusLattice) -> Region {
        Region::from_edges((0..lat.num_edges()).filter(|&e| !self.contains(e)).collect())
    }
}

/// All edges whose coordinates fall in the given rows: for row y this is
/// every east edge at height y and every south edge hanging from height y.
/// Distinct rows are disjoint and all rows together cover the lattice.
pub fn row_band(lat: &TorusLattice, rows: &[usize]) -> Region {
    let mut edges = Vec::new();
    for &y in rows {
        for x in 0..lat.lx() {
            edges.push(lat.h_edge(x, y % lat.ly()));
            edges.push(lat.v_edge(x, y % lat.ly()));
        }
    }
    Region::from_edges(edges)
}

/// Union of the boundary edges of the w × h block of plaquettes whose
/// top-left plaquette is (x0, y0).
pub fn plaquette_block(lat: &TorusLattice, x0: usize, y0: usize, w: usize, h: usize) -> Region {
    let mut edges = Vec::new();
    for dy in 0..h {
        for dx in 0..w {
            let p = lat.plaquette_index(x0 + dx, y0 + dy);
            for (e, _) in lat.plaquette_edges(p) {
                edges.push(e);
            }
        }
    }
    Region::from_edges(edges)
}

/// Row-band tripartition with an annular buffer: A is row 0, B is the pair
/// of rows on either side of A (rows 1 and ly−1), C is everything else.
/// Both A∪B and B∪C are non-contractible annuli and B shields A from C.
/// On ly = 3 the buffer is the whole complement of A and C comes out empty;
/// smaller circumferences leave no room for a two-sided buffer at all.
pub fn annular_tripartition(lat: &TorusLattice) -> Result<(Region, Region, Region)> {
    if lat.ly() < 3 {
        return Err(QdError::BadPartition {
            reason: format!("annular tripartition needs ly >= 3, got {}", lat.ly()),
        });
    }
    let a = row_band(lat, &[0]);
    let b = row_band(lat, &[1, lat.ly() - 1]);
    let c_rows: Vec<usize> = (2..lat.ly() - 1).collect();
    let c = row_band(lat, &c_rows);
    Ok((a, b, c))
}

/// Planar tripartition: A is the single plaquette (1, 1), B the ring of
/// eight plaquettes around it, C the rest of the torus. Needs lx, ly ≥ 4 so
/// the ring does not wrap onto itself and C is nonempty.
pub fn planar_tripartition(lat: &TorusLattice) -> Result<(Region, Region, Region)> {
    if lat.lx() < 4 || lat.ly() < 4 {
        return Err(QdError::BadPartition {
            reason: format!(
                "planar tripartition needs lx, ly >= 4, got {}x{}",
                lat.lx(),
                lat.ly()
            ),
        });
    }
    let a = plaquette_block(lat, 1, 1, 1, 1);
    let ring = plaquette_block(lat, 0, 0, 3, 3);
    let b = Region::from_edges(
        ring.edges().iter().copied().filter(|&e| !a.contains(e)).collect(),
    );
    let c = a.union(&b).complement(lat);
    Ok((a, b, c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_partition_the_lattice() {
        let lat = TorusLattice::new(3, 4).unwrap();
        let all: Vec<Region> = (0..4).map(|y| row_band(&lat, &[y])).collect();
        for (i, a) in all.iter().enumerate() {
            assert_eq!(a.len(), 2 * lat.lx());
            for b in &all[i + 1..] {
                assert!(a.is_disjoint(b));
            }
        }
        let union = all.iter().fold(Region::empty(), |acc, r| acc.union(r));
        assert_eq!(union.len(), lat.num_edges());
    }

    #[test]
    fn annular_tripartition_shields_a_from_c() {
        let lat = TorusLattice::new(4, 4).unwrap();
        let (a, b, c) = annular_tripartition(&lat).unwrap();
        assert_eq!(a.len() + b.len() + c.len(), lat.num_edges());
        assert!(a.is_disjoint(&b) && a.is_disjoint(&c) && b.is_disjoint(&c));
        // no plaquette straddles A and C directly
        for p in 0..lat.num_plaquettes() {
            let edges: Vec<usize> = lat.plaquette_edges(p).iter().map(|&(e, _)| e).collect();
            let touches_a = edges.iter().any(|&e| a.contains(e));
            let touches_c = edges.iter().any(|&e| c.contains(e));
            assert!(!(touches_a && touches_c), "plaquette {p} bridges A and C");
        }
        // On circumference three the buffer swallows everything outside A.
        let (a3, b3, c3) = annular_tripartition(&TorusLattice::new(4, 3).unwrap()).unwrap();
        assert_eq!(c3.len(), 0);
        assert_eq!(a3.len() + b3.len(), 24);
        assert!(matches!(
            annular_tripartition(&TorusLattice::new(4, 2).unwrap()),
            Err(QdError::BadPartition { .. })
        ));
    }

    #[test]
    fn planar_tripartition_shields_a_from_c() {
        let lat = TorusLattice::new(4, 4).unwrap();
        let (a, b, c) = planar_tripartition(&lat).unwrap();
        assert_eq!(a.len(), 4);
        assert_eq!(a.len() + b.len() + c.len(), lat.num_edges());
        assert!(a.is_disjoint(&b) && b.is_disjoint(&c) && a.is_disjoint(&c));
        for p in 0..lat.num_plaquettes() {
            let edges: Vec<usize> = lat.plaquette_edges(p).iter().map(|&(e, _)| e).collect();
            let touches_a = edges.iter().any(|&e| a.contains(e));
            let touches_c = edges.iter().any(|&e| c.contains(e));
            assert!(!(touches_a && touches_c), "plaquette {p} bridges A and C");
        }
    }

    #[test]
    fn block_boundaries_count_edges() {
        let lat = TorusLattice::new(4, 4).unwrap();
        // single plaquette
        assert_eq!(plaquette_block(&lat, 0, 0, 1, 1).len(), 4);
        // 1x2 strip: 7 distinct edges
        assert_eq!(plaquette_block(&lat, 0, 0, 2, 1).len(), 7);
        // 2x2 block: 12 distinct edges
        assert_eq!(plaquette_block(&lat, 1, 1, 2, 2).len(), 12);
    }

    #[test]
    fn set_operations() {
        let lat = TorusLattice::new(2, 2).unwrap();
        let a = Region::from_edges(vec![0, 1, 2]);
        let b = Region::from_edges(vec![2, 3]);
        assert_eq!(a.union(&b).edges(), &[0, 1, 2, 3]);
        assert_eq!(a.intersection(&b).edges(), &[2]);
        assert!(!a.is_disjoint(&b));
        assert_eq!(a.complement(&lat).edges(), &[3, 4, 5, 6, 7]);
    }
}
