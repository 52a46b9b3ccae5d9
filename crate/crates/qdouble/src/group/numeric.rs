//! Numeric irrep extraction for groups given only as multiplication tables.
//!
//! Strategy: average a random Hermitian matrix over the regular
//! representation to land in its commutant. In the isotypic block of an
//! irrep Γ the averaged matrix acts as I ⊗ K_Γ with K_Γ a random Hermitian
//! d_Γ×d_Γ block, so generically every eigenvalue cluster has size exactly
//! d_Γ and its eigenvector span carries Γ exactly once. Sandwiching the
//! regular matrices with the cluster basis recovers unitary irrep matrices.
//!
//! The random draw uses a fixed seed, so results are reproducible bit for
//! bit; if a draw produces accidental eigenvalue collisions the procedure
//! advances the seed and retries.

use super::irreps::{verify_orthogonality, Irrep};
use super::FiniteGroup;
use crate::error::{QdError, Result};
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type C64 = Complex64;

const BASE_SEED: u64 = 0x5EED_0451;
const MAX_ATTEMPTS: u64 = 16;
const CLUSTER_GAP: f64 = 1e-6;
const CHECK_TOL: f64 = 1e-8;

/// Decompose the regular representation into unitary irreps. Deterministic
/// for a given multiplication table.
pub fn regular_decomposition(group: &FiniteGroup) -> Result<Vec<Irrep>> {
    let mut last_residual = f64::INFINITY;
    for attempt in 0..MAX_ATTEMPTS {
        match attempt_decomposition(group, BASE_SEED.wrapping_add(attempt)) {
            Ok(irreps) => return Ok(irreps),
            Err(residual) => last_residual = last_residual.min(residual),
        }
    }
    Err(QdError::IrrepDecomposition { residual: last_residual })
}

/// One decomposition attempt; the error carries the worst residual seen so
/// callers can report how close the attempt came.
fn attempt_decomposition(group: &FiniteGroup, seed: u64) -> std::result::Result<Vec<Irrep>, f64> {
    let n = group.order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut h = DMatrix::<C64>::zeros(n, n);
    for a in 0..n {
        for b in a..n {
            let z = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            if a == b {
                h[(a, a)] = C64::new(z.re, 0.0);
            } else {
                h[(a, b)] = z;
                h[(b, a)] = z.conj();
            }
        }
    }

    // Commutant projection: C[x,y] = (1/|G|) Σ_g H[ḡx, ḡy].
    let mut c = DMatrix::<C64>::zeros(n, n);
    for g in 0..n {
        let gi = group.inv(g);
        for x in 0..n {
            let gx = group.mul(gi, x);
            for y in 0..n {
                c[(x, y)] += h[(gx, group.mul(gi, y))];
            }
        }
    }
    c /= C64::new(n as f64, 0.0);

    let eig = SymmetricEigen::new(c);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    // Regular representation matrices R(g)|h> = |gh>.
    let regular: Vec<DMatrix<C64>> = (0..n)
        .map(|g| {
            let mut m = DMatrix::<C64>::zeros(n, n);
            for h in 0..n {
                m[(group.mul(g, h), h)] = C64::new(1.0, 0.0);
            }
            m
        })
        .collect();

    let scale = eig.eigenvalues.iter().fold(1.0f64, |m, &x| m.max(x.abs()));
    let mut candidates: Vec<Irrep> = Vec::new();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n
            && (eig.eigenvalues[order[end]] - eig.eigenvalues[order[end - 1]]).abs()
                < CLUSTER_GAP * scale
        {
            end += 1;
        }
        let d = end - start;
        let mut basis = DMatrix::<C64>::zeros(n, d);
        for (col, &idx) in order[start..end].iter().enumerate() {
            basis.set_column(col, &eig.eigenvectors.column(idx));
        }
        let matrices: Vec<DMatrix<C64>> =
            regular.iter().map(|r| basis.adjoint() * r * &basis).collect();
        let candidate = Irrep::new(format!("r{}", candidates.len()), matrices);
        let defect = candidate.homomorphism_defect(group);
        if defect > CHECK_TOL {
            return Err(defect);
        }
        let norm_sq: f64 = candidate
            .characters
            .iter()
            .map(|x| x.norm_sqr())
            .sum::<f64>()
            / n as f64;
        if (norm_sq - 1.0).abs() > CHECK_TOL {
            return Err((norm_sq - 1.0).abs());
        }
        candidates.push(candidate);
        start = end;
    }

    // Each irrep Γ appears d_Γ times in the regular representation; keep one
    // copy per distinct character vector.
    let mut unique: Vec<Irrep> = Vec::new();
    for cand in candidates {
        let dup = unique.iter().any(|u| {
            u.dim == cand.dim
                && u.characters
                    .iter()
                    .zip(&cand.characters)
                    .all(|(a, b)| (a - b).norm() < 1e-6)
        });
        if !dup {
            unique.push(cand);
        }
    }

    // Canonical order: dimension ascending, then character vectors compared
    // entrywise descending, so the trivial irrep always sorts first.
    let key = |r: &Irrep| -> (usize, Vec<(i64, i64)>) {
        let chars = r
            .characters
            .iter()
            .map(|x| (-(x.re * 1e6).round() as i64, -(x.im * 1e6).round() as i64))
            .collect();
        (r.dim, chars)
    };
    unique.sort_by(|a, b| key(a).cmp(&key(b)));
    for (i, r) in unique.iter_mut().enumerate() {
        r.label = format!("r{i}");
    }

    let report = verify_orthogonality(group, &unique);
    if !report.is_complete(n, CHECK_TOL) {
        return Err(report.max_violation().max(1.0));
    }
    Ok(unique)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;

    fn as_custom(g: &FiniteGroup) -> FiniteGroup {
        let n = g.order();
        let table: Vec<Vec<usize>> =
            (0..n).map(|a| (0..n).map(|b| g.mul(a, b)).collect()).collect();
        FiniteGroup::from_table(format!("{}table", g.name()), &table).unwrap()
    }

    fn char_multiset(irreps: &[Irrep]) -> Vec<Vec<(i64, i64)>> {
        let mut rows: Vec<Vec<(i64, i64)>> = irreps
            .iter()
            .map(|r| {
                r.characters
                    .iter()
                    .map(|x| ((x.re * 1e6).round() as i64, (x.im * 1e6).round() as i64))
                    .collect()
            })
            .collect();
        rows.sort();
        rows
    }

    #[test]
    fn recovers_closed_form_characters() {
        for name in ["Z4", "S3", "D4", "Q8"] {
            let g = FiniteGroup::builtin(name).unwrap();
            let exact = g.irreps().unwrap();
            let numeric = regular_decomposition(&as_custom(&g)).unwrap();
            assert_eq!(char_multiset(&exact), char_multiset(&numeric), "{name}");
        }
    }

    #[test]
    fn numeric_irreps_are_unitary_homomorphisms() {
        let g = as_custom(&FiniteGroup::s3());
        for r in regular_decomposition(&g).unwrap() {
            assert!(r.homomorphism_defect(&g) < 1e-8, "{}", r.label);
        }
    }

    #[test]
    fn deterministic_across_calls() {
        let g = as_custom(&FiniteGroup::d4());
        let a = regular_decomposition(&g).unwrap();
        let b = regular_decomposition(&g).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.label, y.label);
            for (ma, mb) in x.matrices.iter().zip(&y.matrices) {
                assert!((ma - mb).norm() == 0.0);
            }
        }
    }

    #[test]
    fn trivial_irrep_sorts_first() {
        let spec = GroupSpec::Builtin { builtin: "Z6".into() };
        let g = as_custom(&crate::group::build_group(&spec).unwrap());
        let irs = regular_decomposition(&g).unwrap();
        assert_eq!(irs[0].label, "r0");
        for x in &irs[0].characters {
            assert!((x - C64::new(1.0, 0.0)).norm() < 1e-8);
        }
    }
}
