//! Ribbons: site-to-site walks built from direct steps (along an edge of
//! the lattice) and dual steps (across an edge, pivoting at a vertex).
//!
//! A ribbon remembers every intermediate site, so consecutive steps can be
//! checked for adjacency and two ribbons can only be concatenated when the
//! first ends exactly where the second begins.

use super::{Site, TorusLattice};
use crate::error::{QdError, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StepKind {
    /// Travel along `edge` from one end vertex to the other, keeping the
    /// site's plaquette fixed.
    Direct,
    /// Cross `edge` between its two neighbouring plaquettes, keeping the
    /// site's vertex fixed.
    Dual,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RibbonStep {
    pub kind: StepKind,
    pub edge: usize,
    pub from: Site,
    pub to: Site,
}

impl RibbonStep {
    /// For a direct step: whether travel goes tail → head of the edge arrow.
    pub fn along_arrow(&self, lat: &TorusLattice) -> bool {
        debug_assert_eq!(self.kind, StepKind::Direct);
        lat.edge_info(self.edge).tail == self.from.vertex
    }

    /// For a dual step: whether the pivot vertex is the crossed edge's tail.
    pub fn base_is_tail(&self, lat: &TorusLattice) -> bool {
        debug_assert_eq!(self.kind, StepKind::Dual);
        lat.edge_info(self.edge).tail == self.from.vertex
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ribbon {
    start: Site,
    steps: Vec<RibbonStep>,
}

impl Ribbon {
    pub fn new(start: Site, steps: Vec<RibbonStep>) -> Ribbon {
        Ribbon { start, steps }
    }

    pub fn start(&self) -> Site {
        self.start
    }

    pub fn end(&self) -> Site {
        self.steps.last().map_or(self.start, |s| s.to)
    }

    pub fn steps(&self) -> &[RibbonStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        !self.is_empty() && self.end() == self.start
    }

    /// Every edge id the ribbon touches, deduplicated, in first-touch order.
    pub fn edges_touched(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for s in &self.steps {
            if !out.contains(&s.edge) {
                out.push(s.edge);
            }
        }
        out
    }

    /// Net vertex displacement (Δx, Δy) accumulated by direct steps, without
    /// wrapping. Dual steps never move the vertex.
    pub fn displacement(&self, lat: &TorusLattice) -> (isize, isize) {
        let mut dx = 0isize;
        let mut dy = 0isize;
        for s in &self.steps {
            if s.kind == StepKind::Direct {
                let info = lat.edge_info(s.edge);
                let sign = if s.from.vertex == info.tail { 1 } else { -1 };
                if info.horizontal {
                    dx += sign;
                } else {
                    dy += sign;
                }
            }
        }
        (dx, dy)
    }

    /// Homological winding numbers of a closed ribbon; `None` when open.
    pub fn winding(&self, lat: &TorusLattice) -> Option<(isize, isize)> {
        if !self.is_closed() {
            return None;
        }
        let (dx, dy) = self.displacement(lat);
        debug_assert_eq!(dx.rem_euclid(lat.lx() as isize), 0);
        debug_assert_eq!(dy.rem_euclid(lat.ly() as isize), 0);
        Some((dx / lat.lx() as isize, dy / lat.ly() as isize))
    }

    /// Structural check: site chain is connected and every step joins sites
    /// that are genuinely adjacent through its edge.
    pub fn validate(&self, lat: &TorusLattice) -> Result<()> {
        let mut at = self.start;
        let on_boundary = |e: usize, p: usize| lat.plaquette_edges(p).iter().any(|&(b, _)| b == e);
        for (i, s) in self.steps.iter().enumerate() {
            if s.from != at {
                return Err(QdError::RibbonMismatch {
                    end: (at.vertex, at.plaquette),
                    start: (s.from.vertex, s.from.plaquette),
                });
            }
            if s.edge >= lat.num_edges() {
                return Err(QdError::Config(format!("step {i}: edge {} out of range", s.edge)));
            }
            let info = lat.edge_info(s.edge);
            let ok = match s.kind {
                StepKind::Direct => {
                    s.from.plaquette == s.to.plaquette
                        && on_boundary(s.edge, s.from.plaquette)
                        && ((s.from.vertex == info.tail && s.to.vertex == info.head)
                            || (s.from.vertex == info.head && s.to.vertex == info.tail))
                }
                StepKind::Dual => {
                    s.from.vertex == s.to.vertex
                        && (info.tail == s.from.vertex || info.head == s.from.vertex)
                        && s.from.plaquette != s.to.plaquette
                        && on_boundary(s.edge, s.from.plaquette)
                        && on_boundary(s.edge, s.to.plaquette)
                }
            };
            if !ok {
                return Err(QdError::Config(format!(
                    "step {i} ({:?} edge {}) does not join its sites",
                    s.kind, s.edge
                )));
            }
            at = s.to;
        }
        Ok(())
    }
}

/// Concatenate two ribbons; the first must end on the second's start site.
pub fn compose_ribbons(a: &Ribbon, b: &Ribbon) -> Result<Ribbon> {
    let end = a.end();
    if end != b.start() {
        return Err(QdError::RibbonMismatch {
            end: (end.vertex, end.plaquette),
            start: (b.start().vertex, b.start().plaquette),
        });
    }
    let mut steps = a.steps.clone();
    steps.extend_from_slice(&b.steps);
    Ok(Ribbon::new(a.start, steps))
}

/// The two standard non-contractible cycles, both based at site (0, 0).
#[derive(Debug, Clone)]
pub struct StandardRibbons {
    /// Winds once in +x along row 0.
    pub xi_x: Ribbon,
    /// Winds once in +y along column 0.
    pub xi_y: Ribbon,
}

/// One elementary move between canonical sites, appended to `steps`.
fn push_move(lat: &TorusLattice, steps: &mut Vec<RibbonStep>, x: usize, y: usize, dir: (isize, isize)) -> (usize, usize) {
    let s = |x, y| lat.site(x, y);
    match dir {
        (1, 0) => {
            let xe = lat.wrap_x(x as isize + 1);
            let mid = Site { vertex: lat.vertex_index(xe, y), plaquette: lat.plaquette_index(x, y) };
            steps.push(RibbonStep { kind: StepKind::Direct, edge: lat.h_edge(x, y), from: s(x, y), to: mid });
            steps.push(RibbonStep { kind: StepKind::Dual, edge: lat.v_edge(xe, y), from: mid, to: s(xe, y) });
            (xe, y)
        }
        (0, 1) => {
            let ys = lat.wrap_y(y as isize + 1);
            let mid = Site { vertex: lat.vertex_index(x, ys), plaquette: lat.plaquette_index(x, y) };
            steps.push(RibbonStep { kind: StepKind::Direct, edge: lat.v_edge(x, y), from: s(x, y), to: mid });
            steps.push(RibbonStep { kind: StepKind::Dual, edge: lat.h_edge(x, ys), from: mid, to: s(x, ys) });
            (x, ys)
        }
        (-1, 0) => {
            let xw = lat.wrap_x(x as isize - 1);
            let mid = Site { vertex: lat.vertex_index(x, y), plaquette: lat.plaquette_index(xw, y) };
            steps.push(RibbonStep { kind: StepKind::Dual, edge: lat.v_edge(x, y), from: s(x, y), to: mid });
            steps.push(RibbonStep { kind: StepKind::Direct, edge: lat.h_edge(xw, y), from: mid, to: s(xw, y) });
            (xw, y)
        }
        (0, -1) => {
            let yn = lat.wrap_y(y as isize - 1);
            let mid = Site { vertex: lat.vertex_index(x, y), plaquette: lat.plaquette_index(x, yn) };
            steps.push(RibbonStep { kind: StepKind::Dual, edge: lat.h_edge(x, y), from: s(x, y), to: mid });
            steps.push(RibbonStep { kind: StepKind::Direct, edge: lat.v_edge(x, yn), from: mid, to: s(x, yn) });
            (x, yn)
        }
        _ => unreachable!("unit moves only"),
    }
}

pub fn standard_ribbons(lat: &TorusLattice) -> StandardRibbons {
    let mut xs = Vec::new();
    let mut pos = (0, 0);
    for _ in 0..lat.lx() {
        pos = push_move(lat, &mut xs, pos.0, pos.1, (1, 0));
    }
    let mut ys = Vec::new();
    pos = (0, 0);
    for _ in 0..lat.ly() {
        pos = push_move(lat, &mut ys, pos.0, pos.1, (0, 1));
    }
    StandardRibbons {
        xi_x: Ribbon::new(lat.site(0, 0), xs),
        xi_y: Ribbon::new(lat.site(0, 0), ys),
    }
}

/// Closed dual loop around vertex v: four dual steps visiting the SE, SW,
/// NW, NE plaquettes in turn. Ribbon operators with trivial direct part
/// reduce on this loop to the vertex gauge action.
pub fn vertex_loop(lat: &TorusLattice, v: usize) -> Ribbon {
    let (x, y) = lat.vertex_xy(v);
    let [se, sw, nw, ne] = lat.vertex_plaquettes(v);
    let xm = lat.wrap_x(x as isize - 1);
    let ym = lat.wrap_y(y as isize - 1);
    let at = |p| Site { vertex: v, plaquette: p };
    let steps = vec![
        RibbonStep { kind: StepKind::Dual, edge: lat.v_edge(x, y), from: at(se), to: at(sw) },
        RibbonStep { kind: StepKind::Dual, edge: lat.h_edge(xm, y), from: at(sw), to: at(nw) },
        RibbonStep { kind: StepKind::Dual, edge: lat.v_edge(x, ym), from: at(nw), to: at(ne) },
        RibbonStep { kind: StepKind::Dual, edge: lat.h_edge(x, y), from: at(ne), to: at(se) },
    ];
    Ribbon::new(at(se), steps)
}

/// Closed direct loop around plaquette p: four direct steps tracing the
/// plaquette word. Ribbon operators with trivial dual part reduce on this
/// loop to functions of the plaquette holonomy.
pub fn plaquette_loop(lat: &TorusLattice, p: usize) -> Ribbon {
    let (x, y) = lat.plaquette_xy(p);
    let at = |vx, vy| Site { vertex: lat.vertex_index(vx, vy), plaquette: p };
    let xe = lat.wrap_x(x as isize + 1);
    let ys = lat.wrap_y(y as isize + 1);
    let steps = vec![
        RibbonStep { kind: StepKind::Direct, edge: lat.h_edge(x, y), from: at(x, y), to: at(xe, y) },
        RibbonStep { kind: StepKind::Direct, edge: lat.v_edge(xe, y), from: at(xe, y), to: at(xe, ys) },
        RibbonStep { kind: StepKind::Direct, edge: lat.h_edge(x, ys), from: at(xe, ys), to: at(x, ys) },
        RibbonStep { kind: StepKind::Direct, edge: lat.v_edge(x, y), from: at(x, ys), to: at(x, y) },
    ];
    Ribbon::new(at(x, y), steps)
}

/// Open ribbon between canonical sites: shortest wrap-aware path, x moves
/// first, ties broken toward +x and +y.
pub fn open_ribbon(lat: &TorusLattice, from: (usize, usize), to: (usize, usize)) -> Ribbon {
    let (x0, y0) = (from.0 % lat.lx(), from.1 % lat.ly());
    let (x1, y1) = (to.0 % lat.lx(), to.1 % lat.ly());
    let mut steps = Vec::new();
    let mut pos = (x0, y0);
    let east = (x1 + lat.lx() - x0) % lat.lx();
    let (nx, dir_x) = if east <= lat.lx() - east { (east, (1, 0)) } else { (lat.lx() - east, (-1, 0)) };
    for _ in 0..nx {
        pos = push_move(lat, &mut steps, pos.0, pos.1, dir_x);
    }
    let south = (y1 + lat.ly() - y0) % lat.ly();
    let (ny, dir_y) = if south <= lat.ly() - south { (south, (0, 1)) } else { (lat.ly() - south, (0, -1)) };
    for _ in 0..ny {
        pos = push_move(lat, &mut steps, pos.0, pos.1, dir_y);
    }
    debug_assert_eq!(pos, (x1, y1));
    Ribbon::new(lat.site(x0, y0), steps)
}

/// Ribbon following an explicit sequence of unit moves from vertex (x0, y0).
/// Each move is one of (±1, 0) or (0, ±1).
pub fn path_ribbon(lat: &TorusLattice, x0: usize, y0: usize, moves: &[(isize, isize)]) -> Ribbon {
    let mut steps = Vec::new();
    let mut pos = (x0 % lat.lx(), y0 % lat.ly());
    for &m in moves {
        pos = push_move(lat, &mut steps, pos.0, pos.1, m);
    }
    Ribbon::new(lat.site(x0 % lat.lx(), y0 % lat.ly()), steps)
}

/// Closed ribbon around the w × h rectangle of plaquettes whose top-left
/// plaquette is (x0, y0); the walk starts at vertex (x0, y0) and runs east,
/// south, west, north. Its direct holonomy is the boundary word of the
/// enclosed disk, so electric operators on it read the total enclosed flux.
/// Contractible whenever w < lx and h < ly.
pub fn rect_loop(lat: &TorusLattice, x0: usize, y0: usize, w: usize, h: usize) -> Ribbon {
    let mut moves = Vec::with_capacity(2 * (w + h));
    moves.extend(std::iter::repeat((1, 0)).take(w));
    moves.extend(std::iter::repeat((0, 1)).take(h));
    moves.extend(std::iter::repeat((-1, 0)).take(w));
    moves.extend(std::iter::repeat((0, -1)).take(h));
    path_ribbon(lat, x0, y0, &moves)
}
