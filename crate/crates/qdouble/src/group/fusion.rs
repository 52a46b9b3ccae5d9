//! Fusion coefficients, torus ground-state counting, and the anyon spectrum
//! of D(G).

use super::conjugacy::ConjugacyClass;
use super::irreps::Irrep;
use super::FiniteGroup;
use crate::error::{QdError, Result};
use num_complex::Complex64;

/// Integer fusion multiplicities N_ab^c for a complete irrep set.
#[derive(Debug, Clone)]
pub struct FusionTable {
    pub labels: Vec<String>,
    /// `n[a][b][c]` is the multiplicity of c in a ⊗ b.
    pub n: Vec<Vec<Vec<usize>>>,
    /// Worst distance of any raw coefficient from its rounded integer.
    pub max_residual: f64,
}

impl FusionTable {
    pub fn multiplicity(&self, a: usize, b: usize, c: usize) -> usize {
        self.n[a][b][c]
    }

    /// The decomposition of a ⊗ b as (c, multiplicity) pairs.
    pub fn decompose(&self, a: usize, b: usize) -> Vec<(usize, usize)> {
        self.n[a][b]
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(|(c, &m)| (c, m))
            .collect()
    }
}

/// Character-orthogonality fusion coefficients
/// N_ab^c = (1/|G|) Σ_g χ_a(g) χ_b(g) χ̄_c(g), rounded to integers.
/// Fails if any coefficient is farther than 1e-8 from an integer or rounds
/// negative, which signals an incomplete or inconsistent irrep list.
pub fn fusion_table(group: &FiniteGroup, irreps: &[Irrep]) -> Result<FusionTable> {
    let order = group.order() as f64;
    let k = irreps.len();
    let mut n = vec![vec![vec![0usize; k]; k]; k];
    let mut max_residual: f64 = 0.0;
    for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                let raw: Complex64 = (0..group.order())
                    .map(|g| {
                        irreps[a].character(g) * irreps[b].character(g)
                            * irreps[c].character(g).conj()
                    })
                    .sum::<Complex64>()
                    / order;
                let rounded = raw.re.round();
                let residual = (raw - Complex64::new(rounded, 0.0)).norm();
                max_residual = max_residual.max(residual);
                if residual > 1e-8 || rounded < 0.0 {
                    return Err(QdError::IncompleteIrreps { residual });
                }
                n[a][b][c] = rounded as usize;
            }
        }
    }
    let labels = irreps.iter().map(|r| r.label.clone()).collect();
    Ok(FusionTable { labels, n, max_residual })
}

/// Ground-state degeneracy of D(G) on the torus: commuting pairs (a, b)
/// counted up to simultaneous conjugation.
pub fn count_torus_gsd(group: &FiniteGroup) -> usize {
    group.pair_orbit_representatives().len()
}

/// One anyon type (C, Γ): a conjugacy class C and an irrep Γ of the
/// centralizer of its representative.
#[derive(Debug, Clone)]
pub struct AnyonLabel {
    /// Index into `conjugacy_data` ordering.
    pub class_index: usize,
    /// Flux part, e.g. "[c]".
    pub flux_label: String,
    /// Index into the centralizer irrep list.
    pub charge_index: usize,
    pub charge_label: String,
    /// Combined display label "([c],s)".
    pub label: String,
    /// Quantum dimension d = |C| · dim Γ.
    pub quantum_dim: usize,
    /// Topological spin θ = χ_Γ(r) / dim Γ for class representative r.
    pub spin: Complex64,
}

/// The centralizer of a class representative as a standalone group, with the
/// subgroup-to-parent index map and its irreps. A full centralizer reuses the
/// parent group and its (possibly closed-form) irreps; proper centralizers go
/// through the numeric decomposition.
pub fn centralizer_charges(
    group: &FiniteGroup,
    class: &ConjugacyClass,
) -> Result<(FiniteGroup, Vec<usize>, Vec<Irrep>)> {
    if class.centralizer.len() == group.order() {
        let map = (0..group.order()).collect();
        return Ok((group.clone(), map, group.irreps()?));
    }
    let (sub, map) = group.subgroup(&class.centralizer);
    let irreps = sub.irreps()?;
    Ok((sub, map, irreps))
}

/// The full anyon spectrum in flux-major order: classes in `conjugacy_data`
/// order, charges in centralizer irrep order. The list length equals the
/// torus ground-state degeneracy.
pub fn anyon_labels(group: &FiniteGroup) -> Result<Vec<AnyonLabel>> {
    let classes = group.conjugacy_data();
    let mut out = Vec::new();
    for (class_index, class) in classes.iter().enumerate() {
        let (sub, map, charges) = centralizer_charges(group, class)?;
        let rep_in_sub = map
            .iter()
            .position(|&g| g == class.representative)
            .expect("representative centralizes itself");
        debug_assert_eq!(map[rep_in_sub], class.representative);
        let _ = &sub;
        let flux_label = format!("[{}]", group.label(class.representative));
        for (charge_index, charge) in charges.iter().enumerate() {
            let spin = charge.character(rep_in_sub) / Complex64::new(charge.dim as f64, 0.0);
            out.push(AnyonLabel {
                class_index,
                flux_label: flux_label.clone(),
                charge_index,
                charge_label: charge.label.clone(),
                label: format!("({},{})", flux_label, charge.label),
                quantum_dim: class.size() * charge.dim,
                spin,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_gsd_known_values() {
        for (name, want) in [("Z2", 4), ("Z3", 9), ("Z4", 16), ("S3", 8), ("D4", 22), ("Q8", 22)] {
            let g = FiniteGroup::builtin(name).unwrap();
            assert_eq!(count_torus_gsd(&g), want, "{name}");
        }
    }

    #[test]
    fn anyon_count_matches_gsd_and_dims_square_to_order_squared() {
        for name in ["Z2", "Z3", "S3", "D4", "Q8"] {
            let g = FiniteGroup::builtin(name).unwrap();
            let anyons = anyon_labels(&g).unwrap();
            assert_eq!(anyons.len(), count_torus_gsd(&g), "{name}");
            let total: usize = anyons.iter().map(|a| a.quantum_dim * a.quantum_dim).sum();
            assert_eq!(total, g.order() * g.order(), "{name}");
        }
    }

    #[test]
    fn s3_fusion_rules() {
        let g = FiniteGroup::s3();
        let table = fusion_table(&g, &g.irreps().unwrap()).unwrap();
        assert!(table.max_residual < 1e-12);
        assert_eq!(table.labels, vec!["1", "s", "pi"]);
        // s ⊗ s = 1
        assert_eq!(table.n[1][1], vec![1, 0, 0]);
        // s ⊗ pi = pi
        assert_eq!(table.n[1][2], vec![0, 0, 1]);
        // pi ⊗ pi = 1 ⊕ s ⊕ pi
        assert_eq!(table.n[2][2], vec![1, 1, 1]);
        // identity column: a ⊗ b ⊇ 1 iff b = ā (all S3 irreps self-dual)
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(table.n[a][b][0], usize::from(a == b));
            }
        }
    }

    #[test]
    fn d4_fusion_sign_sector_is_klein() {
        let g = FiniteGroup::d4();
        let table = fusion_table(&g, &g.irreps().unwrap()).unwrap();
        // s1 s2 s3 sit at indices 1 2 3; each squares to the trivial irrep
        for s in 1..=3 {
            let mut want = vec![0; 5];
            want[0] = 1;
            assert_eq!(table.n[s][s], want, "s{s} ⊗ s{s}");
        }
        // product of two distinct signs is the third
        assert_eq!(table.n[1][2], vec![0, 0, 0, 1, 0]);
        assert_eq!(table.n[1][3], vec![0, 0, 1, 0, 0]);
        assert_eq!(table.n[2][3], vec![0, 1, 0, 0, 0]);
        // pi ⊗ pi = 1 ⊕ s1 ⊕ s2 ⊕ s3
        assert_eq!(table.n[4][4], vec![1, 1, 1, 1, 0]);
        // sign ⊗ pi = pi
        for s in 1..=3 {
            assert_eq!(table.n[s][4], vec![0, 0, 0, 0, 1]);
        }
    }

    #[test]
    fn fusion_is_symmetric_and_unital() {
        for name in ["S3", "D4", "Q8", "Z6"] {
            let g = FiniteGroup::builtin(name).unwrap();
            let t = fusion_table(&g, &g.irreps().unwrap()).unwrap();
            let k = t.labels.len();
            for a in 0..k {
                assert_eq!(t.n[0][a][a], 1);
                for b in 0..k {
                    for c in 0..k {
                        assert_eq!(t.n[a][b][c], t.n[b][a][c]);
                    }
                }
            }
        }
    }

    #[test]
    fn corrupted_characters_rejected() {
        // Genuine irrep subsets still give integer coefficients, so the
        // residual guard is aimed at inputs whose characters are not actual
        // characters. Doctor one entry and check it trips.
        let g = FiniteGroup::s3();
        let mut irs = g.irreps().unwrap();
        irs[1].characters[1] = Complex64::new(0.7, 0.0);
        assert!(matches!(
            fusion_table(&g, &irs),
            Err(QdError::IncompleteIrreps { .. })
        ));
    }

    #[test]
    fn z2_anyons_in_toric_code_order() {
        let g = FiniteGroup::cyclic(2);
        let anyons = anyon_labels(&g).unwrap();
        let labels: Vec<&str> = anyons.iter().map(|a| a.label.as_str()).collect();
        assert_eq!(labels, vec!["([e],1)", "([e],chi1)", "([g],1)", "([g],chi1)"]);
        for a in &anyons {
            assert_eq!(a.quantum_dim, 1);
            assert!((a.spin.im).abs() < 1e-12);
        }
        // spins 1, 1, 1, -1: the dyon is the fermion
        let spins: Vec<f64> = anyons.iter().map(|a| a.spin.re).collect();
        assert_eq!(spins, vec![1.0, 1.0, 1.0, -1.0]);
    }

    #[test]
    fn s3_anyon_spectrum() {
        let g = FiniteGroup::s3();
        let anyons = anyon_labels(&g).unwrap();
        assert_eq!(anyons.len(), 8);
        // flux-major: 3 charges over [e], 3 over [c] (Z3 centralizer),
        // 2 over [t] (Z2 centralizer)
        let dims: Vec<usize> = anyons.iter().map(|a| a.quantum_dim).collect();
        assert_eq!(dims, vec![1, 1, 2, 2, 2, 2, 3, 3]);
        assert_eq!(anyons[0].label, "([e],1)");
        assert_eq!(anyons[2].label, "([e],pi)");
        assert!(anyons[3].label.starts_with("([c],"));
        assert!(anyons[6].label.starts_with("([t],"));
    }
}
