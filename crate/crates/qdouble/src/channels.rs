//! Decoherence channels acting on density states.
//!
//! Two channel families appear throughout: the Z channel dephases chosen
//! edges in the group basis (its Kraus operators are the diagonal matrix
//! units of every irrep, weighted by dimension), and the X channel mixes
//! each chosen edge by uniform left multiplication. Every channel here is
//! exactly CPTP; there is no Trotterization or sampling anywhere.
//!
//! The Z channel ships with two independent implementations. The fast path
//! kills off-diagonal matrix elements between configurations that differ on
//! a dephased edge. The literal path sums the Kraus conjugations term by
//! term. They agree because of the completeness relation
//! Σ_Γ (d_Γ/|G|) χ_Γ(g h⁻¹) = δ_{g,h}, and the test suite holds them to
//! that on every basis pair.

use crate::error::{QdError, Result};
use crate::group::{FiniteGroup, Irrep};
use crate::lattice::Region;
use crate::operators::{apply_left, apply_z_component, ConfigCodec, QuantumState};
use crate::states::{DenseState, DensityState, DENSE_CAP};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::collections::HashMap;

/// Most members a channel may leave in a pure-state ensemble.
pub const BRANCH_CAP: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelKind {
    Z,
    X,
}

/// One noise stage: a kind and the edges it hits.
#[derive(Debug, Clone)]
pub struct Stage {
    pub kind: ChannelKind,
    pub edges: Vec<usize>,
}

/// A sequence of noise stages applied left to right.
#[derive(Debug, Clone)]
pub struct Channel {
    stages: Vec<Stage>,
}

impl Channel {
    pub fn z(edges: Vec<usize>) -> Channel {
        Channel { stages: vec![Stage { kind: ChannelKind::Z, edges }] }
    }

    pub fn x(edges: Vec<usize>) -> Channel {
        Channel { stages: vec![Stage { kind: ChannelKind::X, edges }] }
    }

    pub fn identity() -> Channel {
        Channel { stages: Vec::new() }
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn apply(&self, group: &FiniteGroup, rho: &DensityState) -> Result<DensityState> {
        let mut out = rho.clone();
        for stage in &self.stages {
            out = match stage.kind {
                ChannelKind::Z => apply_z_channel(group, &out, &stage.edges)?,
                ChannelKind::X => apply_x_channel(group, &out, &stage.edges)?,
            };
        }
        Ok(out)
    }
}

/// Sequential composition: `first`, then `second`.
pub fn compose(first: &Channel, second: &Channel) -> Channel {
    let mut stages = first.stages.clone();
    stages.extend(second.stages.iter().cloned());
    Channel { stages }
}

fn check_edges(codec: &ConfigCodec, edges: &[usize]) -> Result<()> {
    for &e in edges {
        if e >= codec.num_edges() {
            return Err(QdError::Config(format!(
                "channel edge {e} outside the {}-edge system",
                codec.num_edges()
            )));
        }
    }
    Ok(())
}

/// Values of `cfg` on `edges`, packed into a comparison key.
fn edge_key(codec: &ConfigCodec, edges: &[usize], cfg: u128) -> u128 {
    let region = Region::from_edges(edges.to_vec());
    crate::states::project_config(codec, &region, cfg)
}

/// Group-basis dephasing on `edges`.
///
/// For `ClassicalDiagonal` input this is the identity. A pure ensemble
/// splits each member into its edge-value branches; when every edge is hit
/// the result is returned as `ClassicalDiagonal`. Dense input keeps its
/// basis and loses the off-diagonal entries between branches.
pub fn apply_z_channel(
    group: &FiniteGroup,
    rho: &DensityState,
    edges: &[usize],
) -> Result<DensityState> {
    let codec = *rho.codec();
    check_edges(&codec, edges)?;
    if edges.is_empty() {
        return Ok(rho.clone());
    }
    let full = edges.len() == codec.num_edges() && {
        let mut sorted = edges.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        sorted.len() == codec.num_edges()
    };
    let _ = group;
    match rho {
        DensityState::ClassicalDiagonal(_) => Ok(rho.clone()),
        DensityState::PureEnsemble(e) => {
            if full {
                let mut probs: HashMap<u128, f64> = HashMap::new();
                for (w, psi) in e.members() {
                    for (&cfg, &a) in psi.iter() {
                        *probs.entry(cfg).or_insert(0.0) += w * a.norm_sqr();
                    }
                }
                return DensityState::classical(codec, probs);
            }
            let mut members: Vec<(f64, QuantumState)> = Vec::new();
            for (w, psi) in e.members() {
                let mut branches: HashMap<u128, QuantumState> = HashMap::new();
                for (&cfg, &a) in psi.iter() {
                    branches
                        .entry(edge_key(&codec, edges, cfg))
                        .or_insert_with(|| QuantumState::zero(codec))
                        .accumulate(cfg, a);
                }
                for (_, branch) in branches {
                    let nsq = branch.norm_sqr();
                    if nsq > 1e-28 {
                        members.push((w * nsq, branch));
                    }
                }
            }
            if members.len() > BRANCH_CAP {
                return Err(QdError::Capacity {
                    dim: members.len(),
                    cap: BRANCH_CAP,
                    advice: "dephase every edge so the state becomes ClassicalDiagonal".into(),
                });
            }
            DensityState::from_ensemble(codec, members)
        }
        DensityState::Dense(d) => {
            let keys: Vec<u128> = d.basis().iter().map(|&c| edge_key(&codec, edges, c)).collect();
            let n = d.dim();
            let mut m = d.matrix().clone();
            for i in 0..n {
                for j in 0..n {
                    if keys[i] != keys[j] {
                        m[(i, j)] = Complex64::new(0.0, 0.0);
                    }
                }
            }
            if full {
                let probs: HashMap<u128, f64> = d
                    .basis()
                    .iter()
                    .enumerate()
                    .map(|(i, &c)| (c, m[(i, i)].re))
                    .collect();
                return DensityState::classical(codec, probs);
            }
            DensityState::dense(codec, d.basis().to_vec(), m)
        }
    }
}

/// The same dephasing channel as [`apply_z_channel`], evaluated by summing
/// the irrep-indexed Kraus conjugations K = √(d_Γ/|G|) Γ(g)_{αα'} literally,
/// edge by edge in the fixed order (irrep, row, column). Exponentially more
/// work than the fast path; exists so the two can be compared.
pub fn apply_z_channel_kraus(
    group: &FiniteGroup,
    irreps: &[Irrep],
    rho: &DensityState,
    edges: &[usize],
) -> Result<DensityState> {
    let codec = *rho.codec();
    check_edges(&codec, edges)?;
    match rho {
        DensityState::ClassicalDiagonal(_) => {
            let dense = rho.to_dense()?;
            apply_z_channel_kraus(group, irreps, &DensityState::Dense(dense), edges)
        }
        DensityState::PureEnsemble(e) => {
            let mut members: Vec<(f64, QuantumState)> = e.members().to_vec();
            for &edge in edges {
                let mut next: Vec<(f64, QuantumState)> = Vec::new();
                for (w, psi) in &members {
                    for ir in irreps {
                        let scale = (ir.dim as f64 / group.order() as f64).sqrt();
                        for alpha in 0..ir.dim {
                            for alpha_p in 0..ir.dim {
                                let mut branch = apply_z_component(ir, psi, edge, alpha, alpha_p);
                                branch.scale(Complex64::new(scale, 0.0));
                                let nsq = branch.norm_sqr();
                                if nsq > 1e-28 {
                                    // Keep members normalized so the next
                                    // edge's branch weights stay w·‖Kψ‖².
                                    branch.normalize().unwrap();
                                    next.push((w * nsq, branch));
                                }
                            }
                        }
                    }
                }
                if next.len() > BRANCH_CAP {
                    return Err(QdError::Capacity {
                        dim: next.len(),
                        cap: BRANCH_CAP,
                        advice: "use apply_z_channel; the literal Kraus sum branches per edge".into(),
                    });
                }
                members = next;
            }
            DensityState::from_ensemble(codec, members)
        }
        DensityState::Dense(d) => {
            let n = d.dim();
            let mut m = d.matrix().clone();
            for &edge in edges {
                let gi: Vec<usize> = d.basis().iter().map(|&c| codec.get(c, edge)).collect();
                // Diagonal Kraus: entry (i,j) picks up Σ_Γαα' (d/|G|)
                // Γ(g_i)_{αα'} Γ(g_j)*_{αα'}, accumulated in Kraus order.
                let mut weight = DMatrix::<Complex64>::zeros(n, n);
                for ir in irreps {
                    let scale = ir.dim as f64 / group.order() as f64;
                    for alpha in 0..ir.dim {
                        for alpha_p in 0..ir.dim {
                            for i in 0..n {
                                let ki = ir.matrices[gi[i]][(alpha, alpha_p)];
                                for j in 0..n {
                                    let kj = ir.matrices[gi[j]][(alpha, alpha_p)];
                                    weight[(i, j)] += ki * kj.conj() * scale;
                                }
                            }
                        }
                    }
                }
                for i in 0..n {
                    for j in 0..n {
                        m[(i, j)] *= weight[(i, j)];
                    }
                }
            }
            DensityState::dense(codec, d.basis().to_vec(), m)
        }
    }
}

/// Uniform left-multiplication mixing on `edges`: each hit edge averages
/// ρ ↦ (1/|G|) Σ_g L_g ρ L_g†. Left multiplication permutes the basis, so
/// diagonal input stays diagonal for any group; pure ensembles branch
/// |G|-fold per edge.
pub fn apply_x_channel(
    group: &FiniteGroup,
    rho: &DensityState,
    edges: &[usize],
) -> Result<DensityState> {
    let codec = *rho.codec();
    check_edges(&codec, edges)?;
    if edges.is_empty() {
        return Ok(rho.clone());
    }
    let n_g = group.order();
    match rho {
        DensityState::ClassicalDiagonal(c) => {
            let mut probs: HashMap<u128, f64> = c.probs().clone();
            for &edge in edges {
                let mut next: HashMap<u128, f64> = HashMap::with_capacity(probs.len());
                for (&cfg, &p) in &probs {
                    let x = codec.get(cfg, edge);
                    let share = p / n_g as f64;
                    for g in 0..n_g {
                        let moved = codec.set(cfg, edge, group.mul(g, x));
                        *next.entry(moved).or_insert(0.0) += share;
                    }
                }
                probs = next;
            }
            DensityState::classical(codec, probs)
        }
        DensityState::PureEnsemble(e) => {
            let mut members: Vec<(f64, QuantumState)> = e.members().to_vec();
            for &edge in edges {
                if members.len() * n_g > BRANCH_CAP {
                    return Err(QdError::Capacity {
                        dim: members.len() * n_g,
                        cap: BRANCH_CAP,
                        advice: "dephase first or restrict the X channel to fewer edges".into(),
                    });
                }
                let mut next = Vec::with_capacity(members.len() * n_g);
                for (w, psi) in &members {
                    for g in 0..n_g {
                        next.push((w / n_g as f64, apply_left(group, psi, edge, g)));
                    }
                }
                members = next;
            }
            DensityState::from_ensemble(codec, members)
        }
        DensityState::Dense(d) => {
            // Close the basis under left multiplication on the hit edges.
            let mut basis: Vec<u128> = d.basis().to_vec();
            let mut frontier = basis.clone();
            while !frontier.is_empty() {
                let mut fresh = Vec::new();
                for &cfg in &frontier {
                    for &edge in edges {
                        let x = codec.get(cfg, edge);
                        for g in 0..n_g {
                            let moved = codec.set(cfg, edge, group.mul(g, x));
                            if basis.binary_search(&moved).is_err() && !fresh.contains(&moved) {
                                fresh.push(moved);
                            }
                        }
                    }
                }
                if fresh.is_empty() {
                    break;
                }
                basis.extend(fresh.iter().copied());
                basis.sort_unstable();
                basis.dedup();
                if basis.len() > DENSE_CAP {
                    return Err(QdError::Capacity {
                        dim: basis.len(),
                        cap: DENSE_CAP,
                        advice: "the left-multiplication orbit exceeds the dense basis cap".into(),
                    });
                }
                frontier = fresh;
            }
            let embedded = DenseState::new(codec, basis.clone(), {
                let pos: HashMap<u128, usize> =
                    basis.iter().enumerate().map(|(i, &c)| (c, i)).collect();
                let mut m = DMatrix::zeros(basis.len(), basis.len());
                for (i, &ci) in d.basis().iter().enumerate() {
                    for (j, &cj) in d.basis().iter().enumerate() {
                        m[(pos[&ci], pos[&cj])] = d.matrix()[(i, j)];
                    }
                }
                m
            })?;
            let n = basis.len();
            let mut m = embedded.matrix().clone();
            for &edge in edges {
                let mut perms: Vec<Vec<usize>> = Vec::with_capacity(n_g);
                for g in 0..n_g {
                    let mut perm = vec![0usize; n];
                    for (i, &cfg) in basis.iter().enumerate() {
                        let moved = codec.set(cfg, edge, group.mul(g, codec.get(cfg, edge)));
                        perm[i] = basis.binary_search(&moved).expect("basis is closed");
                    }
                    perms.push(perm);
                }
                let mut next = DMatrix::<Complex64>::zeros(n, n);
                let share = Complex64::new(1.0 / n_g as f64, 0.0);
                for perm in &perms {
                    for i in 0..n {
                        for j in 0..n {
                            next[(perm[i], perm[j])] += m[(i, j)] * share;
                        }
                    }
                }
                m = next;
            }
            DensityState::dense(codec, basis, m)
        }
    }
}

/// Completeness of the dephasing Kraus family on one edge:
/// Σ_Γ d_Γ tr(Γ(g)†Γ(g)) / |G| must be one for every g.
pub fn kraus_completeness_defect(group: &FiniteGroup, irreps: &[Irrep]) -> f64 {
    let mut worst: f64 = 0.0;
    for g in 0..group.order() {
        let mut total = 0.0;
        for ir in irreps {
            let m = &ir.matrices[g];
            let frob: f64 = m.iter().map(|v| v.norm_sqr()).sum();
            total += ir.dim as f64 * frob / group.order() as f64;
        }
        worst = worst.max((total - 1.0).abs());
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_group, GroupSpec};
    use crate::lattice::TorusLattice;
    use crate::operators::{flat_sector_configs, ground_state, ribbon_electric};
    use crate::states::overlap;

    fn group_named(name: &str) -> FiniteGroup {
        build_group(&GroupSpec::Builtin { builtin: name.into() }).unwrap()
    }

    fn dense_diff(a: &DensityState, b: &DensityState) -> f64 {
        let da = a.to_dense().unwrap();
        let db = b.to_dense().unwrap();
        if da.basis() != db.basis() {
            let mut basis: Vec<u128> = da.basis().iter().chain(db.basis().iter()).copied().collect();
            basis.sort_unstable();
            basis.dedup();
            let ma = da.embed(&basis).unwrap();
            let mb = db.embed(&basis).unwrap();
            return (ma - mb).norm();
        }
        (da.matrix() - db.matrix()).norm()
    }

    #[test]
    fn kraus_sum_equals_dephasing_on_every_basis_pair() {
        // One S3 edge, all 36 matrix units |g⟩⟨g'|: the literal Kraus sum
        // must multiply each by δ_{g,g'} exactly.
        let g = group_named("S3");
        let irs = g.irreps().unwrap();
        let codec = ConfigCodec::with_edges(1, g.order()).unwrap();
        let basis: Vec<u128> = (0..6u128).collect();
        let mut worst: f64 = 0.0;
        for a in 0..6usize {
            for b in 0..6usize {
                let mut m = DMatrix::<Complex64>::zeros(6, 6);
                m[(a, b)] = Complex64::new(1.0, 0.0);
                let rho = DensityState::dense(codec, basis.clone(), m.clone()).unwrap();
                let fast = apply_z_channel(&g, &rho, &[0]).unwrap();
                let lit = apply_z_channel_kraus(&g, &irs, &rho, &[0]).unwrap();
                worst = worst.max(dense_diff(&fast, &lit));
                // And both implement the delta: the unit survives iff a = b.
                let expect = if a == b {
                    rho.clone()
                } else {
                    DensityState::dense(codec, basis.clone(), DMatrix::zeros(6, 6)).unwrap()
                };
                worst = worst.max(dense_diff(&lit, &expect));
            }
        }
        assert!(worst < 1e-12, "worst deviation {worst}");
        assert!(kraus_completeness_defect(&g, &irs) < 1e-12);
    }

    #[test]
    fn kraus_and_fast_routes_agree_on_entangled_ensembles() {
        let g = group_named("S3");
        let irs = g.irreps().unwrap();
        let lat = TorusLattice::new(2, 2).unwrap();
        let codec = ConfigCodec::new(&g, &lat).unwrap();
        let psi = crate::operators::testutil::random_state(codec, 7, 24);
        let rho = DensityState::from_pure(&psi).unwrap();
        let edges = [0usize, 3];
        let fast = apply_z_channel(&g, &rho, &edges).unwrap();
        let lit = apply_z_channel_kraus(&g, &irs, &rho, &edges).unwrap();
        let d = dense_diff(&fast, &lit);
        assert!(d < 1e-12, "route disagreement {d}");
        assert!((fast.trace() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn full_dephasing_yields_uniform_classical_flat_mixture() {
        let g = group_named("Z2");
        let lat = TorusLattice::new(2, 2).unwrap();
        let psi = ground_state(&g, &lat, 0, 0).unwrap();
        let rho = DensityState::from_pure(&psi).unwrap();
        let every: Vec<usize> = (0..lat.num_edges()).collect();
        let out = apply_z_channel(&g, &rho, &every).unwrap();
        let DensityState::ClassicalDiagonal(c) = &out else {
            panic!("full dephasing should return ClassicalDiagonal");
        };
        let flats = flat_sector_configs(&g, &lat, 0, 0).unwrap();
        assert_eq!(c.probs().len(), flats.len());
        let p = 1.0 / flats.len() as f64;
        for cfg in flats {
            assert!((c.probs()[&cfg] - p).abs() < 1e-12);
        }
    }

    #[test]
    fn dephasing_kills_cross_terms_between_sectors() {
        let g = group_named("Z2");
        let lat = TorusLattice::new(2, 2).unwrap();
        let codec = ConfigCodec::new(&g, &lat).unwrap();
        let a = ground_state(&g, &lat, 0, 0).unwrap();
        let b = ground_state(&g, &lat, 1, 0).unwrap();
        let mut cat = a.clone();
        cat.add_scaled(&b, Complex64::new(1.0, 0.0));
        cat.normalize().unwrap();
        let rho = DensityState::from_pure(&cat).unwrap();
        assert!((rho.purity() - 1.0).abs() < 1e-12);
        let every: Vec<usize> = (0..lat.num_edges()).collect();
        let out = apply_z_channel(&g, &rho, &every).unwrap();
        // The two sectors have disjoint 8-configuration flat supports, so the
        // decohered cat is uniform over 16 configurations.
        assert!((out.purity() - 1.0 / 16.0).abs() < 1e-12);
        let sector = {
            let flats = flat_sector_configs(&g, &lat, 0, 0).unwrap();
            let p = 1.0 / flats.len() as f64;
            DensityState::classical(codec, flats.into_iter().map(|k| (k, p)).collect()).unwrap()
        };
        let o = overlap(&out, &sector).unwrap();
        assert!((o.raw - 0.5 / 8.0).abs() < 1e-12);
    }

    #[test]
    fn disjoint_z_stages_commute_and_each_is_idempotent() {
        let g = group_named("S3");
        let lat = TorusLattice::new(2, 2).unwrap();
        let codec = ConfigCodec::new(&g, &lat).unwrap();
        let psi = crate::operators::testutil::random_state(codec, 11, 30);
        let rho = DensityState::from_pure(&psi).unwrap();
        let za = Channel::z(vec![0, 1, 2]);
        let zb = Channel::z(vec![5, 6]);
        let ab = compose(&za, &zb).apply(&g, &rho).unwrap();
        let ba = compose(&zb, &za).apply(&g, &rho).unwrap();
        assert!(dense_diff(&ab, &ba) < 1e-12);
        let twice = compose(&za, &za).apply(&g, &rho).unwrap();
        let once = za.apply(&g, &rho).unwrap();
        assert!(dense_diff(&twice, &once) < 1e-12);
        let id = Channel::identity().apply(&g, &rho).unwrap();
        assert!(dense_diff(&id, &rho) < 1e-12);
    }

    #[test]
    fn x_channel_routes_agree_and_preserve_trace() {
        let g = group_named("S3");
        let lat = TorusLattice::new(2, 2).unwrap();
        let codec = ConfigCodec::new(&g, &lat).unwrap();
        let psi = crate::operators::testutil::random_state(codec, 3, 12);
        let rho = DensityState::from_pure(&psi).unwrap();
        let edges = [2usize, 7];
        let via_ensemble = apply_x_channel(&g, &rho, &edges).unwrap();
        let via_dense =
            apply_x_channel(&g, &DensityState::Dense(rho.to_dense().unwrap()), &edges).unwrap();
        assert!(dense_diff(&via_ensemble, &via_dense) < 1e-12);
        assert!((via_ensemble.trace() - 1.0).abs() < 1e-12);

        // Diagonal input: the classical route must match the dense route.
        let probs: HashMap<u128, f64> = psi.iter().map(|(&c, &a)| (c, a.norm_sqr())).collect();
        let total: f64 = probs.values().sum();
        let probs = probs.into_iter().map(|(c, p)| (c, p / total)).collect();
        let diag = DensityState::classical(codec, probs).unwrap();
        let c_out = apply_x_channel(&g, &diag, &edges).unwrap();
        let d_out =
            apply_x_channel(&g, &DensityState::Dense(diag.to_dense().unwrap()), &edges).unwrap();
        assert!(dense_diff(&c_out, &d_out) < 1e-12);
        assert!(matches!(c_out, DensityState::ClassicalDiagonal(_)));
    }

    #[test]
    fn x_after_z_everywhere_is_maximal_mixing() {
        let g = group_named("Z2");
        let lat = TorusLattice::new(2, 2).unwrap();
        let psi = ground_state(&g, &lat, 0, 0).unwrap();
        let rho = DensityState::from_pure(&psi).unwrap();
        let every: Vec<usize> = (0..lat.num_edges()).collect();
        let chan = compose(&Channel::z(every.clone()), &Channel::x(every));
        let out = chan.apply(&g, &rho).unwrap();
        let DensityState::ClassicalDiagonal(c) = &out else {
            panic!("expected classical output");
        };
        let dim = 1usize << 8;
        assert_eq!(c.probs().len(), dim);
        let p = 1.0 / dim as f64;
        for &v in c.probs().values() {
            assert!((v - p).abs() < 1e-12);
        }
    }

    #[test]
    fn z_kraus_operators_commute_with_closed_electric_ribbons() {
        let g = group_named("S3");
        let irs = g.irreps().unwrap();
        let lat = TorusLattice::new(2, 2).unwrap();
        let codec = ConfigCodec::new(&g, &lat).unwrap();
        let ribbons = crate::lattice::standard_ribbons(&lat);
        for seed in 0..5 {
            let psi = crate::operators::testutil::random_state(codec, seed, 15);
            for ir in &irs {
                for z_ir in &irs {
                    let fz = {
                        let t = apply_z_component(z_ir, &psi, 0, 0, z_ir.dim - 1);
                        ribbon_electric(&g, ir, &lat, &t, &ribbons.xi_x)
                    };
                    let zf = {
                        let t = ribbon_electric(&g, ir, &lat, &psi, &ribbons.xi_x);
                        apply_z_component(z_ir, &t, 0, 0, z_ir.dim - 1)
                    };
                    assert!(fz.max_amp_diff(&zf) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn oversized_x_branching_reports_capacity() {
        let g = group_named("S3");
        let lat = TorusLattice::new(2, 2).unwrap();
        let psi = ground_state(&g, &lat, 0, 0).unwrap();
        let rho = DensityState::from_pure(&psi).unwrap();
        let every: Vec<usize> = (0..lat.num_edges()).collect();
        match apply_x_channel(&g, &rho, &every) {
            Err(QdError::Capacity { .. }) => {}
            other => panic!("expected capacity error, got {other:?}"),
        }
    }
}
