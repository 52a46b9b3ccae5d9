//! Vertex gauge operators, plaquette projectors, and single-edge operators.
//!
//! Conventions on an edge with value x:
//!   L⁺_h : x ↦ h·x (left multiplication),
//!   L⁻_h : x ↦ x·h̄ (right multiplication),
//!   Z_Γ(α,α') : diagonal with weight Γ(x)_{αα'}.
//!
//! The gauge operator at vertex v multiplies outgoing edges on the left by g
//! and incoming edges on the right by ḡ. The plaquette projector keeps
//! configurations whose boundary word is the identity.

use super::config::ConfigCodec;
use super::state::QuantumState;
use crate::group::{FiniteGroup, Irrep};
use crate::lattice::TorusLattice;
use num_complex::Complex64;

/// Boundary word of plaquette p in configuration `cfg`: edges along the
/// word orientation contribute their value, opposed edges their inverse.
pub fn plaquette_word(
    group: &FiniteGroup,
    lat: &TorusLattice,
    codec: &ConfigCodec,
    cfg: u128,
    p: usize,
) -> usize {
    let mut w = group.identity();
    for (e, along) in lat.plaquette_edges(p) {
        let g = codec.get(cfg, e);
        w = group.mul(w, if along { g } else { group.inv(g) });
    }
    w
}

/// Ordered product of east-edge values along row y (left to right).
pub fn x_holonomy(
    group: &FiniteGroup,
    lat: &TorusLattice,
    codec: &ConfigCodec,
    cfg: u128,
    row: usize,
) -> usize {
    (0..lat.lx()).fold(group.identity(), |h, x| group.mul(h, codec.get(cfg, lat.h_edge(x, row))))
}

/// Ordered product of south-edge values down column x (top to bottom).
pub fn y_holonomy(
    group: &FiniteGroup,
    lat: &TorusLattice,
    codec: &ConfigCodec,
    cfg: u128,
    col: usize,
) -> usize {
    (0..lat.ly()).fold(group.identity(), |h, y| group.mul(h, codec.get(cfg, lat.v_edge(col, y))))
}

/// Gauge transformation A_v^g.
pub fn apply_gauge(
    group: &FiniteGroup,
    lat: &TorusLattice,
    state: &QuantumState,
    v: usize,
    g: usize,
) -> QuantumState {
    let star = lat.vertex_star(v);
    let gi = group.inv(g);
    let codec = *state.codec();
    state.map_terms(|cfg, amp| {
        let mut c = cfg;
        for (e, tail_here) in star {
            let x = codec.get(c, e);
            let y = if tail_here { group.mul(g, x) } else { group.mul(x, gi) };
            c = codec.set(c, e, y);
        }
        (c, amp)
    })
}

/// Averaged gauge projector A_v = (1/|G|) Σ_g A_v^g.
pub fn apply_gauge_average(
    group: &FiniteGroup,
    lat: &TorusLattice,
    state: &QuantumState,
    v: usize,
) -> QuantumState {
    let mut out = QuantumState::zero(*state.codec());
    let w = Complex64::new(1.0 / group.order() as f64, 0.0);
    for g in 0..group.order() {
        out.add_scaled(&apply_gauge(group, lat, state, v, g), w);
    }
    out.prune();
    out
}

/// Flatness projector B_p: keeps terms whose plaquette word is e.
pub fn apply_plaquette(
    group: &FiniteGroup,
    lat: &TorusLattice,
    state: &QuantumState,
    p: usize,
) -> QuantumState {
    let codec = *state.codec();
    state.map_terms(|cfg, amp| {
        if plaquette_word(group, lat, &codec, cfg, p) == group.identity() {
            (cfg, amp)
        } else {
            (cfg, Complex64::default())
        }
    })
}

/// The same projector assembled from characters,
/// B_p = (1/|G|) Σ_Γ d_Γ χ_Γ(w(p)), which must agree with the word test
/// entry for entry.
pub fn apply_plaquette_mpo(
    group: &FiniteGroup,
    irreps: &[Irrep],
    lat: &TorusLattice,
    state: &QuantumState,
    p: usize,
) -> QuantumState {
    let codec = *state.codec();
    let n = group.order() as f64;
    state.map_terms(|cfg, amp| {
        let w = plaquette_word(group, lat, &codec, cfg, p);
        let weight: Complex64 = irreps
            .iter()
            .map(|r| Complex64::new(r.dim as f64, 0.0) * r.character(w))
            .sum::<Complex64>()
            / Complex64::new(n, 0.0);
        (cfg, amp * weight)
    })
}

/// Left multiplication L⁺_h on one edge.
pub fn apply_left(
    group: &FiniteGroup,
    state: &QuantumState,
    edge: usize,
    h: usize,
) -> QuantumState {
    let codec = *state.codec();
    state.map_terms(|cfg, amp| (codec.set(cfg, edge, group.mul(h, codec.get(cfg, edge))), amp))
}

/// Right multiplication L⁻_h : x ↦ x·h̄ on one edge.
pub fn apply_right(
    group: &FiniteGroup,
    state: &QuantumState,
    edge: usize,
    h: usize,
) -> QuantumState {
    let codec = *state.codec();
    let hi = group.inv(h);
    state.map_terms(|cfg, amp| (codec.set(cfg, edge, group.mul(codec.get(cfg, edge), hi)), amp))
}

/// Matrix-element operator Z_Γ(α,α') = Σ_g Γ(g)_{αα'} |g⟩⟨g| on one edge.
/// Unnormalized: channel weights are supplied where channels are built.
pub fn apply_z_component(
    irrep: &Irrep,
    state: &QuantumState,
    edge: usize,
    alpha: usize,
    alpha_p: usize,
) -> QuantumState {
    let codec = *state.codec();
    state.map_terms(|cfg, amp| {
        let g = codec.get(cfg, edge);
        (cfg, amp * irrep.matrix(g)[(alpha, alpha_p)])
    })
}
