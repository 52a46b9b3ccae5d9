//! Exact torus ground states, built two independent ways.
//!
//! Route one follows the operator recipe: gauge-average the all-identity
//! configuration at every vertex, thread the two standard cycles with ribbon
//! operators to select the sector of a commuting pair (a, b), then
//! re-average at the base vertex and normalize.
//!
//! Route two enumerates the sector directly: starting from a base
//! configuration whose row and column holonomies are (a, b), apply every
//! vertex dressing that fixes the base vertex, for every pair in the
//! conjugation orbit of (a, b). The ground state is the uniform
//! superposition over that set. Tests require both routes to coincide.

use super::config::ConfigCodec;
use super::local::apply_gauge_average;
use super::ribbon_ops::apply_ribbon;
use super::state::QuantumState;
use crate::error::{QdError, Result};
use crate::group::FiniteGroup;
use crate::lattice::{standard_ribbons, TorusLattice};

/// Enumeration guard: sector sizes beyond this are refused.
const MAX_SECTOR_CONFIGS: f64 = 5e7;

/// Base flat configuration with x-holonomy `a` on every row and y-holonomy
/// `b` on every column: identity everywhere except the last column of east
/// edges (set to a) and the last row of south edges (set to b).
fn sector_base(
    group: &FiniteGroup,
    lat: &TorusLattice,
    codec: &ConfigCodec,
    a: usize,
    b: usize,
) -> u128 {
    let mut cfg = codec.identity_config();
    for y in 0..lat.ly() {
        cfg = codec.set(cfg, lat.h_edge(lat.lx() - 1, y), a);
    }
    for x in 0..lat.lx() {
        cfg = codec.set(cfg, lat.v_edge(x, lat.ly() - 1), b);
    }
    let _ = group;
    cfg
}

/// Apply the vertex dressing f: every edge value x becomes f(tail)·x·f(head)̄.
fn dress(
    group: &FiniteGroup,
    lat: &TorusLattice,
    codec: &ConfigCodec,
    cfg: u128,
    f: &[usize],
) -> u128 {
    let mut out = cfg;
    for e in 0..lat.num_edges() {
        let info = lat.edge_info(e);
        let x = codec.get(cfg, e);
        out = codec.set(out, e, group.mul(f[info.tail], group.mul(x, group.inv(f[info.head]))));
    }
    out
}

/// One slice of a sector enumeration: every dressing of `base` whose first
/// free vertex carries the value `f1`. Shards of one sector are disjoint and
/// independent, so they can run on separate threads.
#[derive(Debug, Clone, Copy)]
pub(crate) struct DressingShard {
    pub base: u128,
    pub f1: usize,
}

/// Budget-checked shard list covering the flat sector of (a, b): one shard
/// per (orbit pair, first free vertex value). The pair must commute.
pub(crate) fn dressing_shards(
    group: &FiniteGroup,
    lat: &TorusLattice,
    a: usize,
    b: usize,
) -> Result<Vec<DressingShard>> {
    if !group.commute(a, b) {
        return Err(QdError::NonCommutingPair { a, b });
    }
    let codec = ConfigCodec::new(group, lat)?;
    let orbit = group.pair_orbit(a, b);
    let n = group.order();
    let nv = lat.num_vertices();
    let dressings = (n as f64).powi(nv as i32 - 1);
    let total = dressings * orbit.len() as f64;
    if total > MAX_SECTOR_CONFIGS {
        return Err(QdError::Budget { needed: total as u128, limit: MAX_SECTOR_CONFIGS as u64 });
    }
    let mut shards = Vec::with_capacity(orbit.len() * n);
    for &(aa, bb) in &orbit {
        let base = sector_base(group, lat, &codec, aa, bb);
        for f1 in 0..n {
            shards.push(DressingShard { base, f1 });
        }
    }
    Ok(shards)
}

/// Stream one shard's dressed configurations: odometer over the vertices
/// after the first, with f[0] pinned to the identity and f[1] to the shard
/// value.
pub(crate) fn stream_shard(
    group: &FiniteGroup,
    lat: &TorusLattice,
    codec: &ConfigCodec,
    shard: DressingShard,
    visit: &mut dyn FnMut(u128),
) {
    let n = group.order();
    let nv = lat.num_vertices();
    let mut f = vec![0usize; nv];
    f[1] = shard.f1;
    loop {
        visit(dress(group, lat, codec, shard.base, &f));
        let mut i = 2;
        while i < nv {
            f[i] += 1;
            if f[i] < n {
                break;
            }
            f[i] = 0;
            i += 1;
        }
        if i == nv {
            break;
        }
    }
}

/// Visit every configuration in the flat sector of (a, b) without
/// materializing the list. Same budget rule and configuration set as
/// `flat_sector_configs`.
pub fn for_each_sector_config<F: FnMut(u128)>(
    group: &FiniteGroup,
    lat: &TorusLattice,
    a: usize,
    b: usize,
    mut visit: F,
) -> Result<()> {
    let codec = ConfigCodec::new(group, lat)?;
    for shard in dressing_shards(group, lat, a, b)? {
        stream_shard(group, lat, &codec, shard, &mut visit);
    }
    Ok(())
}

/// All flat configurations whose holonomy pair lies in the conjugation orbit
/// of (a, b): the gauge orbit of the sector base. The pair must commute.
pub fn flat_sector_configs(
    group: &FiniteGroup,
    lat: &TorusLattice,
    a: usize,
    b: usize,
) -> Result<Vec<u128>> {
    let mut out = Vec::new();
    for_each_sector_config(group, lat, a, b, |cfg| out.push(cfg))?;
    Ok(out)
}

/// Union of the flat sectors over every commuting-pair orbit: all
/// configurations with every plaquette word trivial.
pub fn flat_configs(group: &FiniteGroup, lat: &TorusLattice) -> Result<Vec<u128>> {
    let mut out = Vec::new();
    for (a, b) in group.pair_orbit_representatives() {
        out.extend(flat_sector_configs(group, lat, a, b)?);
    }
    Ok(out)
}

/// Ground state by direct enumeration: uniform superposition over the flat
/// sector of (a, b).
pub fn ground_state_enumerated(
    group: &FiniteGroup,
    lat: &TorusLattice,
    a: usize,
    b: usize,
) -> Result<QuantumState> {
    let codec = ConfigCodec::new(group, lat)?;
    let configs = flat_sector_configs(group, lat, a, b)?;
    Ok(QuantumState::uniform(codec, &configs))
}

/// Ground state by the operator recipe: project the all-identity state onto
/// the gauge-invariant subspace, thread the y cycle with flux a and the x
/// cycle with flux b (matching direct label a), then re-project at the base
/// vertex and normalize.
pub fn ground_state(
    group: &FiniteGroup,
    lat: &TorusLattice,
    a: usize,
    b: usize,
) -> Result<QuantumState> {
    if !group.commute(a, b) {
        return Err(QdError::NonCommutingPair { a, b });
    }
    let codec = ConfigCodec::new(group, lat)?;
    let mut psi = QuantumState::basis(codec, codec.identity_config());
    for v in 0..lat.num_vertices() {
        psi = apply_gauge_average(group, lat, &psi, v);
    }
    let cycles = standard_ribbons(lat);
    psi = apply_ribbon(group, lat, &psi, &cycles.xi_y, a, group.identity());
    psi = apply_ribbon(group, lat, &psi, &cycles.xi_x, b, a);
    psi = apply_gauge_average(group, lat, &psi, lat.vertex_index(0, 0));
    psi.normalize()?;
    Ok(psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::local::{
        apply_gauge_average, apply_plaquette, plaquette_word, x_holonomy, y_holonomy,
    };
    use crate::operators::ribbon_ops::ribbon_electric;

    #[test]
    fn rejects_non_commuting_pairs() {
        let g = FiniteGroup::s3();
        let lat = TorusLattice::new(2, 2).unwrap();
        assert!(matches!(
            ground_state(&g, &lat, 1, 3),
            Err(QdError::NonCommutingPair { a: 1, b: 3 })
        ));
        assert!(flat_sector_configs(&g, &lat, 3, 4).is_err());
    }

    #[test]
    fn sector_sizes_follow_orbit_counting() {
        let g = FiniteGroup::s3();
        let lat = TorusLattice::new(2, 2).unwrap();
        let mut total = 0;
        for (a, b) in g.pair_orbit_representatives() {
            let configs = flat_sector_configs(&g, &lat, a, b).unwrap();
            let expect = 6usize.pow(3) * g.pair_orbit(a, b).len();
            assert_eq!(configs.len(), expect);
            total += configs.len();
        }
        assert_eq!(total, 3888);
        assert_eq!(flat_configs(&g, &lat).unwrap().len(), 3888);
    }

    #[test]
    fn enumerated_sectors_are_flat_and_disjoint() {
        let g = FiniteGroup::s3();
        let lat = TorusLattice::new(2, 2).unwrap();
        let codec = ConfigCodec::new(&g, &lat).unwrap();
        let mut all = Vec::new();
        for (a, b) in g.pair_orbit_representatives() {
            let configs = flat_sector_configs(&g, &lat, a, b).unwrap();
            for &cfg in &configs {
                for p in 0..lat.num_plaquettes() {
                    assert_eq!(plaquette_word(&g, &lat, &codec, cfg, p), 0);
                }
            }
            all.extend(configs);
        }
        let before = all.len();
        all.sort_unstable();
        all.dedup();
        assert_eq!(all.len(), before, "sectors overlap");
    }

    #[test]
    fn both_routes_agree_on_every_s3_sector() {
        let g = FiniteGroup::s3();
        let lat = TorusLattice::new(2, 2).unwrap();
        for (a, b) in g.pair_orbit_representatives() {
            let ribbon_route = ground_state(&g, &lat, a, b).unwrap();
            let enumerated = ground_state_enumerated(&g, &lat, a, b).unwrap();
            let overlap = ribbon_route.overlap_normalized(&enumerated);
            assert!(
                (overlap - 1.0).abs() < 1e-10,
                "sector ({a},{b}): overlap {overlap}"
            );
        }
    }

    #[test]
    fn ground_states_are_stabilized_everywhere() {
        let g = FiniteGroup::d4();
        let lat = TorusLattice::new(2, 2).unwrap();
        for (a, b) in [(0, 0), (1, 1), (2, 4), (4, 2)] {
            let psi = ground_state(&g, &lat, a, b).unwrap();
            assert!((psi.norm() - 1.0).abs() < 1e-12);
            for v in 0..lat.num_vertices() {
                let av = apply_gauge_average(&g, &lat, &psi, v);
                assert!(av.max_amp_diff(&psi) < 1e-12, "A_{v} on ({a},{b})");
            }
            for p in 0..lat.num_plaquettes() {
                let bp = apply_plaquette(&g, &lat, &psi, p);
                assert!(bp.max_amp_diff(&psi) < 1e-12, "B_{p} on ({a},{b})");
            }
        }
    }

    #[test]
    fn ground_state_holonomies_lie_in_the_sector_orbit() {
        let g = FiniteGroup::s3();
        let lat = TorusLattice::new(2, 2).unwrap();
        let codec = ConfigCodec::new(&g, &lat).unwrap();
        for (a, b) in [(0, 1), (1, 1), (3, 3), (1, 2)] {
            let psi = ground_state(&g, &lat, a, b).unwrap();
            let orbit = g.pair_orbit(a, b);
            for (&cfg, _) in psi.iter() {
                let pair = (
                    x_holonomy(&g, &lat, &codec, cfg, 0),
                    y_holonomy(&g, &lat, &codec, cfg, 0),
                );
                assert!(orbit.contains(&pair), "({a},{b}): stray holonomy {pair:?}");
            }
        }
    }

    #[test]
    fn sectors_are_orthonormal() {
        let g = FiniteGroup::s3();
        let lat = TorusLattice::new(2, 2).unwrap();
        let reps = g.pair_orbit_representatives();
        let states: Vec<QuantumState> =
            reps.iter().map(|&(a, b)| ground_state(&g, &lat, a, b).unwrap()).collect();
        for (i, si) in states.iter().enumerate() {
            for (j, sj) in states.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (si.inner(sj).norm() - want).abs() < 1e-12,
                    "sectors {:?} vs {:?}",
                    reps[i],
                    reps[j]
                );
            }
        }
    }

    #[test]
    fn electric_cycle_operators_act_by_character_eigenvalues() {
        let g = FiniteGroup::s3();
        let lat = TorusLattice::new(2, 2).unwrap();
        let cycles = standard_ribbons(&lat);
        let irreps = g.irreps().unwrap();
        for (a, b) in g.pair_orbit_representatives() {
            let psi = ground_state(&g, &lat, a, b).unwrap();
            for r in &irreps {
                // along x the direct holonomy is a conjugate of a
                let fx = ribbon_electric(&g, r, &lat, &psi, &cycles.xi_x);
                let lambda = r.character(g.inv(a)) * (r.dim as f64) / (g.order() as f64);
                let mut expected = psi.clone();
                expected.scale(lambda);
                assert!(
                    fx.max_amp_diff(&expected) < 1e-12,
                    "sector ({a},{b}), irrep {}",
                    r.label
                );
                // and along y it is a conjugate of b
                let fy = ribbon_electric(&g, r, &lat, &psi, &cycles.xi_y);
                let lambda = r.character(g.inv(b)) * (r.dim as f64) / (g.order() as f64);
                let mut expected = psi.clone();
                expected.scale(lambda);
                assert!(fy.max_amp_diff(&expected) < 1e-12);
            }
        }
    }

    #[test]
    fn trivial_sector_on_z2_4x4_has_the_expected_size() {
        let g = FiniteGroup::cyclic(2);
        let lat = TorusLattice::new(4, 4).unwrap();
        let psi = ground_state(&g, &lat, 0, 0).unwrap();
        assert_eq!(psi.num_terms(), 1 << 15);
        let all = flat_configs(&g, &lat).unwrap();
        assert_eq!(all.len(), 4 << 15);
    }
}
