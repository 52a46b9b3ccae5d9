//! Density matrices over edge configurations.
//!
//! Three representations trade generality for scale. `Dense` keeps an
//! explicit matrix over a listed configuration basis and supports every
//! measure exactly, but is capped at 4096 basis states. `PureEnsemble`
//! holds a statistical mixture of sparse pure states, which is how channel
//! branches come out. `ClassicalDiagonal` stores only a probability per
//! configuration; after full dephasing this is lossless and scales to
//! millions of support points.
//!
//! Reduction to a sub-region repacks the retained edges (in ascending edge
//! order) into a fresh codec, so reduced states from different sources are
//! directly comparable.

use crate::error::{QdError, Result};
use crate::lattice::Region;
use crate::operators::{ConfigCodec, QuantumState};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::collections::HashMap;

/// Largest basis a `Dense` state may hold.
pub const DENSE_CAP: usize = 4096;

/// Spectral weights below this are treated as exact zeros in entropies.
pub const EIGEN_FLOOR: f64 = 1e-12;

/// Entropy refuses inputs whose trace strays further than this from one.
pub const TRACE_TOL: f64 = 1e-8;

/// Explicit matrix over a sorted list of configurations.
#[derive(Debug, Clone)]
pub struct DenseState {
    codec: ConfigCodec,
    basis: Vec<u128>,
    matrix: DMatrix<Complex64>,
}

/// Weighted mixture of sparse pure states. Weights are probabilities;
/// members are kept normalized.
#[derive(Debug, Clone)]
pub struct EnsembleState {
    codec: ConfigCodec,
    members: Vec<(f64, QuantumState)>,
}

/// Diagonal density matrix in the configuration basis.
#[derive(Debug, Clone)]
pub struct ClassicalState {
    codec: ConfigCodec,
    probs: HashMap<u128, f64>,
}

#[derive(Debug, Clone)]
pub enum DensityState {
    Dense(DenseState),
    PureEnsemble(EnsembleState),
    ClassicalDiagonal(ClassicalState),
}

/// `tr(ρσ)` both as-is and normalized by the purities, so orthogonality
/// statements do not depend on how mixed the inputs are.
#[derive(Debug, Clone, Copy)]
pub struct Overlap {
    pub raw: f64,
    pub normalized: f64,
}

impl DenseState {
    pub fn new(codec: ConfigCodec, basis: Vec<u128>, matrix: DMatrix<Complex64>) -> Result<DenseState> {
        if basis.len() > DENSE_CAP {
            return Err(QdError::Capacity {
                dim: basis.len(),
                cap: DENSE_CAP,
                advice: "use a ClassicalDiagonal or PureEnsemble representation".into(),
            });
        }
        if matrix.nrows() != basis.len() || matrix.ncols() != basis.len() {
            return Err(QdError::Incompatible(format!(
                "matrix is {}x{} but the basis lists {} configurations",
                matrix.nrows(),
                matrix.ncols(),
                basis.len()
            )));
        }
        let mut sorted = basis.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != basis.len() || sorted != basis {
            return Err(QdError::Incompatible(
                "dense basis must be sorted and free of duplicates".into(),
            ));
        }
        Ok(DenseState { codec, basis, matrix })
    }

    pub fn basis(&self) -> &[u128] {
        &self.basis
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn index_of(&self, cfg: u128) -> Option<usize> {
        self.basis.binary_search(&cfg).ok()
    }

    /// The same operator re-expressed on a larger sorted basis.
    pub(crate) fn embed(&self, basis: &[u128]) -> Result<DMatrix<Complex64>> {
        let pos: HashMap<u128, usize> =
            basis.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut m = DMatrix::zeros(basis.len(), basis.len());
        for (i, &ci) in self.basis.iter().enumerate() {
            let bi = *pos.get(&ci).ok_or_else(|| {
                QdError::Incompatible("target basis does not contain the source basis".into())
            })?;
            for (j, &cj) in self.basis.iter().enumerate() {
                let bj = pos[&cj];
                m[(bi, bj)] = self.matrix[(i, j)];
            }
        }
        Ok(m)
    }

    /// Eigenvalues ascending, tiny negatives clamped to zero.
    fn spectrum(&self) -> Vec<f64> {
        let eig = self.matrix.clone().symmetric_eigen();
        let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        vals
    }

    fn positive_sqrt(&self) -> DMatrix<Complex64> {
        let eig = self.matrix.clone().symmetric_eigen();
        let n = self.dim();
        // Null-space eigenvalues come back as ±1e-17 noise; square roots
        // would inflate them by eight orders of magnitude, so anything far
        // below the top eigenvalue is treated as an exact zero.
        let floor = eig.eigenvalues.iter().fold(0.0f64, |a, &v| a.max(v)) * 1e-12;
        let mut d = DMatrix::zeros(n, n);
        for i in 0..n {
            let v = eig.eigenvalues[i];
            d[(i, i)] = Complex64::new(if v > floor { v.sqrt() } else { 0.0 }, 0.0);
        }
        &eig.eigenvectors * d * eig.eigenvectors.adjoint()
    }
}

impl EnsembleState {
    /// Gram matrix G[b,b'] = √(w_b w_b') ⟨ψ_b|ψ_b'⟩ whose nonzero spectrum
    /// equals the nonzero spectrum of the mixture itself.
    fn gram(&self) -> DMatrix<Complex64> {
        let k = self.members.len();
        let mut g = DMatrix::zeros(k, k);
        for i in 0..k {
            for j in i..k {
                let v = self.members[i].1.inner(&self.members[j].1)
                    * (self.members[i].0 * self.members[j].0).sqrt();
                g[(i, j)] = v;
                g[(j, i)] = v.conj();
            }
        }
        g
    }

    pub fn members(&self) -> &[(f64, QuantumState)] {
        &self.members
    }
}

impl ClassicalState {
    pub fn probs(&self) -> &HashMap<u128, f64> {
        &self.probs
    }
}

/// Values of `cfg` on the region's edges, packed in ascending edge order.
pub fn project_config(codec: &ConfigCodec, region: &Region, cfg: u128) -> u128 {
    let bits = (usize::BITS - (codec.group_order() - 1).max(1).leading_zeros()).max(1);
    let mut out = 0u128;
    for (slot, &e) in region.edges().iter().enumerate() {
        out |= (codec.get(cfg, e) as u128) << (slot as u32 * bits);
    }
    out
}

impl DensityState {
    pub fn from_pure(psi: &QuantumState) -> Result<DensityState> {
        let mut p = psi.clone();
        p.normalize()?;
        Ok(DensityState::PureEnsemble(EnsembleState {
            codec: *p.codec(),
            members: vec![(1.0, p)],
        }))
    }

    pub fn from_ensemble(codec: ConfigCodec, members: Vec<(f64, QuantumState)>) -> Result<DensityState> {
        if members.is_empty() {
            return Err(QdError::Degenerate("ensemble with no members".into()));
        }
        let mut kept = Vec::with_capacity(members.len());
        for (w, psi) in members {
            if w < 0.0 {
                return Err(QdError::Degenerate(format!("negative ensemble weight {w}")));
            }
            if w == 0.0 {
                continue;
            }
            let mut p = psi;
            p.normalize()?;
            kept.push((w, p));
        }
        if kept.is_empty() {
            return Err(QdError::Degenerate("ensemble with no weight".into()));
        }
        Ok(DensityState::PureEnsemble(EnsembleState { codec, members: kept }))
    }

    pub fn classical(codec: ConfigCodec, probs: HashMap<u128, f64>) -> Result<DensityState> {
        for (&cfg, &p) in &probs {
            if p < -1e-15 {
                return Err(QdError::Degenerate(format!(
                    "negative probability {p} on configuration {cfg}"
                )));
            }
        }
        let probs = probs.into_iter().filter(|&(_, p)| p > 0.0).collect();
        Ok(DensityState::ClassicalDiagonal(ClassicalState { codec, probs }))
    }

    pub fn dense(codec: ConfigCodec, basis: Vec<u128>, matrix: DMatrix<Complex64>) -> Result<DensityState> {
        Ok(DensityState::Dense(DenseState::new(codec, basis, matrix)?))
    }

    pub fn codec(&self) -> &ConfigCodec {
        match self {
            DensityState::Dense(d) => &d.codec,
            DensityState::PureEnsemble(e) => &e.codec,
            DensityState::ClassicalDiagonal(c) => &c.codec,
        }
    }

    pub fn trace(&self) -> f64 {
        match self {
            DensityState::Dense(d) => d.matrix.trace().re,
            DensityState::PureEnsemble(e) => e.members.iter().map(|(w, _)| w).sum(),
            DensityState::ClassicalDiagonal(c) => c.probs.values().sum(),
        }
    }

    /// tr ρ².
    pub fn purity(&self) -> f64 {
        match self {
            DensityState::Dense(d) => d.matrix.iter().map(|v| v.norm_sqr()).sum(),
            DensityState::PureEnsemble(e) => {
                let mut s = 0.0;
                for (i, (wi, pi)) in e.members.iter().enumerate() {
                    s += wi * wi;
                    for (wj, pj) in e.members.iter().skip(i + 1) {
                        s += 2.0 * wi * wj * pi.inner(pj).norm_sqr();
                    }
                }
                s
            }
            DensityState::ClassicalDiagonal(c) => c.probs.values().map(|p| p * p).sum(),
        }
    }

    /// Number of configurations carrying any weight.
    pub fn support_size(&self) -> usize {
        match self {
            DensityState::Dense(d) => d.dim(),
            DensityState::PureEnsemble(e) => {
                let mut seen = std::collections::HashSet::new();
                for (_, psi) in &e.members {
                    for (&cfg, _) in psi.iter() {
                        seen.insert(cfg);
                    }
                }
                seen.len()
            }
            DensityState::ClassicalDiagonal(c) => c.probs.len(),
        }
    }

    /// Rescale so the trace is one.
    pub fn normalize(&mut self) -> Result<()> {
        let t = self.trace();
        if t < 1e-12 {
            return Err(QdError::Degenerate(format!("cannot normalize trace {t}")));
        }
        match self {
            DensityState::Dense(d) => d.matrix.scale_mut(1.0 / t),
            DensityState::PureEnsemble(e) => {
                for (w, _) in &mut e.members {
                    *w /= t;
                }
            }
            DensityState::ClassicalDiagonal(c) => {
                for p in c.probs.values_mut() {
                    *p /= t;
                }
            }
        }
        Ok(())
    }

    /// Exact conversion to the dense representation. Fails when the support
    /// exceeds the dense cap.
    pub fn to_dense(&self) -> Result<DenseState> {
        match self {
            DensityState::Dense(d) => Ok(d.clone()),
            DensityState::PureEnsemble(e) => {
                let mut basis: Vec<u128> = Vec::new();
                for (_, psi) in &e.members {
                    basis.extend(psi.support());
                }
                basis.sort_unstable();
                basis.dedup();
                if basis.len() > DENSE_CAP {
                    return Err(QdError::Capacity {
                        dim: basis.len(),
                        cap: DENSE_CAP,
                        advice: "keep the ensemble form or dephase to ClassicalDiagonal".into(),
                    });
                }
                let pos: HashMap<u128, usize> =
                    basis.iter().enumerate().map(|(i, &c)| (c, i)).collect();
                let n = basis.len();
                let mut m = DMatrix::zeros(n, n);
                for (w, psi) in &e.members {
                    let terms: Vec<(usize, Complex64)> =
                        psi.iter().map(|(&c, &a)| (pos[&c], a)).collect();
                    for &(i, ai) in &terms {
                        for &(j, aj) in &terms {
                            m[(i, j)] += ai * aj.conj() * *w;
                        }
                    }
                }
                DenseState::new(e.codec, basis, m)
            }
            DensityState::ClassicalDiagonal(c) => {
                let mut basis: Vec<u128> = c.probs.keys().copied().collect();
                basis.sort_unstable();
                if basis.len() > DENSE_CAP {
                    return Err(QdError::Capacity {
                        dim: basis.len(),
                        cap: DENSE_CAP,
                        advice: "keep the ClassicalDiagonal representation".into(),
                    });
                }
                let n = basis.len();
                let mut m = DMatrix::zeros(n, n);
                for (i, cfg) in basis.iter().enumerate() {
                    m[(i, i)] = Complex64::new(c.probs[cfg], 0.0);
                }
                DenseState::new(c.codec, basis, m)
            }
        }
    }

    /// Hermiticity, positivity and trace checks; a debugging aid for tests,
    /// not called on hot paths.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let t = self.trace();
        if (t - 1.0).abs() > tol.max(TRACE_TOL) {
            return Err(QdError::NotNormalized { trace: t });
        }
        if let DensityState::Dense(d) = self {
            let herm = (&d.matrix - d.matrix.adjoint()).norm();
            if herm > tol {
                return Err(QdError::Incompatible(format!(
                    "matrix is not Hermitian, deviation {herm:.3e}"
                )));
            }
            let min = d.spectrum().first().copied().unwrap_or(0.0);
            if min < -1e-9 {
                return Err(QdError::Incompatible(format!(
                    "matrix has negative eigenvalue {min:.3e}"
                )));
            }
        }
        Ok(())
    }

    /// Partial trace onto `region`. The reduced state lives on a codec with
    /// one slot per retained edge, ascending edge order.
    pub fn reduce(&self, region: &Region) -> Result<DensityState> {
        let codec = self.codec();
        for &e in region.edges() {
            if e >= codec.num_edges() {
                return Err(QdError::BadPartition {
                    reason: format!("region edge {e} outside the {}-edge system", codec.num_edges()),
                });
            }
        }
        let reduced_codec = ConfigCodec::with_edges(region.len(), codec.group_order())?;
        let all: Vec<usize> = (0..codec.num_edges()).collect();
        let kept: std::collections::HashSet<usize> = region.edges().iter().copied().collect();
        let dropped = Region::from_edges(all.into_iter().filter(|e| !kept.contains(e)).collect());

        match self {
            DensityState::ClassicalDiagonal(c) => {
                let mut out: HashMap<u128, f64> = HashMap::new();
                for (&cfg, &p) in &c.probs {
                    *out.entry(project_config(codec, region, cfg)).or_insert(0.0) += p;
                }
                DensityState::classical(reduced_codec, out)
            }
            DensityState::PureEnsemble(e) => {
                // Group each member's terms by the traced-out edge values;
                // every group contributes one rank-one block.
                let mut basis: Vec<u128> = Vec::new();
                for (_, psi) in &e.members {
                    for (&cfg, _) in psi.iter() {
                        basis.push(project_config(codec, region, cfg));
                    }
                }
                basis.sort_unstable();
                basis.dedup();
                if basis.len() > DENSE_CAP {
                    return Err(QdError::Capacity {
                        dim: basis.len(),
                        cap: DENSE_CAP,
                        advice: "dephase to ClassicalDiagonal before reducing".into(),
                    });
                }
                let pos: HashMap<u128, usize> =
                    basis.iter().enumerate().map(|(i, &c)| (c, i)).collect();
                let n = basis.len();
                let mut m = DMatrix::zeros(n, n);
                for (w, psi) in &e.members {
                    let mut by_env: HashMap<u128, Vec<(usize, Complex64)>> = HashMap::new();
                    for (&cfg, &a) in psi.iter() {
                        let env = project_config(codec, &dropped, cfg);
                        let idx = pos[&project_config(codec, region, cfg)];
                        by_env.entry(env).or_default().push((idx, a));
                    }
                    for (_, terms) in by_env {
                        for &(i, ai) in &terms {
                            for &(j, aj) in &terms {
                                m[(i, j)] += ai * aj.conj() * *w;
                            }
                        }
                    }
                }
                Ok(DensityState::Dense(DenseState::new(reduced_codec, basis, m)?))
            }
            DensityState::Dense(d) => {
                let mut basis: Vec<u128> = d
                    .basis
                    .iter()
                    .map(|&c| project_config(codec, region, c))
                    .collect();
                basis.sort_unstable();
                basis.dedup();
                let pos: HashMap<u128, usize> =
                    basis.iter().enumerate().map(|(i, &c)| (c, i)).collect();
                let n = basis.len();
                let mut m = DMatrix::zeros(n, n);
                let envs: Vec<u128> = d
                    .basis
                    .iter()
                    .map(|&c| project_config(codec, &dropped, c))
                    .collect();
                let keys: Vec<usize> = d
                    .basis
                    .iter()
                    .map(|&c| pos[&project_config(codec, region, c)])
                    .collect();
                for i in 0..d.dim() {
                    for j in 0..d.dim() {
                        if envs[i] == envs[j] {
                            m[(keys[i], keys[j])] += d.matrix[(i, j)];
                        }
                    }
                }
                Ok(DensityState::Dense(DenseState::new(reduced_codec, basis, m)?))
            }
        }
    }

    /// Von Neumann entropy in nats.
    pub fn entropy(&self) -> Result<f64> {
        let t = self.trace();
        if (t - 1.0).abs() > TRACE_TOL {
            return Err(QdError::NotNormalized { trace: t });
        }
        let spectrum: Vec<f64> = match self {
            DensityState::ClassicalDiagonal(c) => c.probs.values().copied().collect(),
            DensityState::Dense(d) => d.spectrum(),
            DensityState::PureEnsemble(e) => {
                let g = e.gram();
                let eig = g.symmetric_eigen();
                eig.eigenvalues.iter().copied().collect()
            }
        };
        let mut s = 0.0;
        for p in spectrum {
            if p > EIGEN_FLOOR {
                s -= p * p.ln();
            }
        }
        Ok(s)
    }
}

/// Conditional mutual information I(A:C|B) = S(AB) + S(BC) − S(B) − S(ABC).
/// The three regions must partition the system's edges.
pub fn cmi(rho: &DensityState, a: &Region, b: &Region, c: &Region) -> Result<f64> {
    let n = rho.codec().num_edges();
    if !a.is_disjoint(b) || !a.is_disjoint(c) || !b.is_disjoint(c) {
        return Err(QdError::BadPartition {
            reason: "regions A, B, C overlap".into(),
        });
    }
    if a.len() + b.len() + c.len() != n {
        return Err(QdError::BadPartition {
            reason: format!(
                "regions cover {} of {} edges",
                a.len() + b.len() + c.len(),
                n
            ),
        });
    }
    let s_ab = rho.reduce(&a.union(b))?.entropy()?;
    let s_bc = rho.reduce(&b.union(c))?.entropy()?;
    let s_b = rho.reduce(b)?.entropy()?;
    let s_abc = rho.entropy()?;
    Ok(s_ab + s_bc - s_b - s_abc)
}

fn expectation_in(psi: &QuantumState, sigma: &DensityState) -> f64 {
    match sigma {
        DensityState::ClassicalDiagonal(c) => {
            let mut s = 0.0;
            for (&cfg, &a) in psi.iter() {
                if let Some(&p) = c.probs.get(&cfg) {
                    s += p * a.norm_sqr();
                }
            }
            s
        }
        DensityState::PureEnsemble(e) => e
            .members
            .iter()
            .map(|(w, phi)| w * psi.inner(phi).norm_sqr())
            .sum(),
        DensityState::Dense(d) => {
            let mut s = Complex64::new(0.0, 0.0);
            for (&ci, &ai) in psi.iter() {
                if let Some(i) = d.index_of(ci) {
                    for (&cj, &aj) in psi.iter() {
                        if let Some(j) = d.index_of(cj) {
                            s += ai.conj() * d.matrix[(i, j)] * aj;
                        }
                    }
                }
            }
            s.re
        }
    }
}

/// Uhlmann fidelity F(ρ,σ) = (tr √(√ρ σ √ρ))².
pub fn fidelity(rho: &DensityState, sigma: &DensityState) -> Result<f64> {
    if rho.codec() != sigma.codec() {
        return Err(QdError::Incompatible(
            "fidelity between states on different edge systems".into(),
        ));
    }
    // Commuting-diagonal pair: Bhattacharyya form.
    if let (DensityState::ClassicalDiagonal(p), DensityState::ClassicalDiagonal(q)) = (rho, sigma) {
        let mut s = 0.0;
        for (&cfg, &pc) in &p.probs {
            if let Some(&qc) = q.probs.get(&cfg) {
                s += (pc * qc).sqrt();
            }
        }
        return Ok(s * s);
    }
    // A pure side collapses fidelity to an expectation value.
    if let DensityState::PureEnsemble(e) = rho {
        if e.members.len() == 1 {
            return Ok(e.members[0].0 * expectation_in(&e.members[0].1, sigma));
        }
    }
    if let DensityState::PureEnsemble(e) = sigma {
        if e.members.len() == 1 {
            return Ok(e.members[0].0 * expectation_in(&e.members[0].1, rho));
        }
    }
    let dr = rho.to_dense()?;
    let ds = sigma.to_dense()?;
    let mut basis: Vec<u128> = dr.basis.iter().chain(ds.basis.iter()).copied().collect();
    basis.sort_unstable();
    basis.dedup();
    if basis.len() > DENSE_CAP {
        return Err(QdError::Capacity {
            dim: basis.len(),
            cap: DENSE_CAP,
            advice: "fidelity of states this large needs a common diagonal basis".into(),
        });
    }
    let a = DenseState::new(dr.codec, basis.clone(), dr.embed(&basis)?)?;
    let b = ds.embed(&basis)?;
    let root = a.positive_sqrt();
    let middle = &root * b * &root;
    let eig = middle.symmetric_eigen();
    let floor = eig.eigenvalues.iter().fold(0.0f64, |acc, &v| acc.max(v)) * 1e-12;
    let mut t = 0.0;
    for &v in eig.eigenvalues.iter() {
        if v > floor {
            t += v.sqrt();
        }
    }
    Ok(t * t)
}

/// tr(ρσ), raw and normalized by √(tr ρ² · tr σ²).
pub fn overlap(rho: &DensityState, sigma: &DensityState) -> Result<Overlap> {
    if rho.codec() != sigma.codec() {
        return Err(QdError::Incompatible(
            "overlap between states on different edge systems".into(),
        ));
    }
    let raw = match (rho, sigma) {
        (DensityState::ClassicalDiagonal(p), DensityState::ClassicalDiagonal(q)) => {
            let (small, big) = if p.probs.len() <= q.probs.len() { (p, q) } else { (q, p) };
            small
                .probs
                .iter()
                .filter_map(|(cfg, &pc)| big.probs.get(cfg).map(|&qc| pc * qc))
                .sum()
        }
        (DensityState::ClassicalDiagonal(c), other) | (other, DensityState::ClassicalDiagonal(c)) => {
            match other {
                DensityState::PureEnsemble(e) => e
                    .members
                    .iter()
                    .map(|(w, psi)| {
                        let mut s = 0.0;
                        for (&cfg, &a) in psi.iter() {
                            if let Some(&p) = c.probs.get(&cfg) {
                                s += p * a.norm_sqr();
                            }
                        }
                        w * s
                    })
                    .sum(),
                DensityState::Dense(d) => d
                    .basis
                    .iter()
                    .enumerate()
                    .filter_map(|(i, cfg)| c.probs.get(cfg).map(|&p| p * d.matrix[(i, i)].re))
                    .sum(),
                DensityState::ClassicalDiagonal(_) => unreachable!(),
            }
        }
        (DensityState::PureEnsemble(e1), DensityState::PureEnsemble(e2)) => {
            let mut s = 0.0;
            for (w1, p1) in &e1.members {
                for (w2, p2) in &e2.members {
                    s += w1 * w2 * p1.inner(p2).norm_sqr();
                }
            }
            s
        }
        (DensityState::PureEnsemble(e), DensityState::Dense(_))
        | (DensityState::Dense(_), DensityState::PureEnsemble(e)) => {
            let dense = if matches!(rho, DensityState::Dense(_)) { rho } else { sigma };
            e.members
                .iter()
                .map(|(w, psi)| w * expectation_in(psi, dense))
                .sum()
        }
        (DensityState::Dense(d1), DensityState::Dense(d2)) => {
            let mut s = Complex64::new(0.0, 0.0);
            for (i, &ci) in d1.basis.iter().enumerate() {
                if let Some(k) = d2.index_of(ci) {
                    for (j, &cj) in d1.basis.iter().enumerate() {
                        if let Some(l) = d2.index_of(cj) {
                            s += d1.matrix[(i, j)] * d2.matrix[(l, k)];
                        }
                    }
                }
            }
            s.re
        }
    };
    let denom = (rho.purity() * sigma.purity()).sqrt();
    let normalized = if denom > 1e-300 { raw / denom } else { 0.0 };
    Ok(Overlap { raw, normalized })
}
