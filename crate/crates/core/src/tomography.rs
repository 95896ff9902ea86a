//! Simulated two-qubit polarization tomography.
//!
//! The measurement set is the 16 product projectors {H,V,D,R}⊗{H,V,D,R} with
//! D = (H+V)/√2 and R = (H+iV)/√2 — minimal and informationally complete.
//! Counts are Poisson around N₀·Tr[ρΠ], reconstruction is linear inversion of
//! the per-setting frequencies followed by projection to the nearest physical
//! state, and the bounds are evaluated on the physical estimate.

use crate::concurrence::{lower_bound, upper_bound, wootters_concurrence, BoundEstimate, Observable};
use crate::error::{Error, Result};
use crate::qlinalg::{
    fidelity, kron, project_to_density, C64, C_ONE, C_ZERO, ComplexMatrix, DensityMatrix,
    SystemShape,
};
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

/// Single-qubit analysis states used on each arm.
const BASIS_LABELS: [char; 4] = ['H', 'V', 'D', 'R'];

/// One tomography setting: a rank-1 product projector.
#[derive(Debug, Clone)]
pub struct TomoSetting {
    pub id: usize,
    pub label: String,
    pub projector: Observable,
}

/// Raw per-setting counts plus acquisition metadata.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TomoCounts {
    /// Setting labels in canonical order; fixed by [`settings_16`].
    pub settings: Vec<String>,
    /// Shots per setting N₀.
    #[serde(rename = "N0")]
    pub shots_per_setting: u64,
    pub counts: Vec<u64>,
    pub seed: u64,
}

impl TomoCounts {
    pub fn validate(&self) -> Result<()> {
        if self.counts.len() != 16 || self.settings.len() != 16 {
            return Err(Error::arg(format!(
                "tomography record needs 16 settings/counts, got {}/{}",
                self.settings.len(),
                self.counts.len()
            )));
        }
        let canonical = settings_16();
        for (given, expected) in self.settings.iter().zip(canonical) {
            if given != &expected.label {
                return Err(Error::arg(format!(
                    "setting order mismatch: expected {}, got {given}",
                    expected.label
                )));
            }
        }
        if self.shots_per_setting == 0 {
            return Err(Error::arg("shots_per_setting must be ≥ 1"));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Serialization(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let record: TomoCounts =
            serde_json::from_str(text).map_err(|e| Error::Serialization(e.to_string()))?;
        record.validate()?;
        Ok(record)
    }
}

/// Reconstruction output: the physical estimate and everything evaluated on it.
#[derive(Debug, Clone)]
pub struct TomoResult {
    pub rho_hat: DensityMatrix,
    pub concurrence: f64,
    pub lower: BoundEstimate,
    pub upper: BoundEstimate,
    pub fidelity_vs_truth: Option<f64>,
}

fn basis_vector(which: char) -> [C64; 2] {
    let inv = std::f64::consts::FRAC_1_SQRT_2;
    match which {
        'H' => [C_ONE, C_ZERO],
        'V' => [C_ZERO, C_ONE],
        'D' => [C64::new(inv, 0.0), C64::new(inv, 0.0)],
        'R' => [C64::new(inv, 0.0), C64::new(0.0, inv)],
        _ => unreachable!("unknown basis label"),
    }
}

/// The canonical 16 product-projector settings, cached after first use.
pub fn settings_16() -> &'static [TomoSetting; 16] {
    static CELL: OnceLock<[TomoSetting; 16]> = OnceLock::new();
    CELL.get_or_init(|| {
        let shape = SystemShape::qubits(2);
        let mut out = Vec::with_capacity(16);
        for (ai, &a) in BASIS_LABELS.iter().enumerate() {
            for (bi, &b) in BASIS_LABELS.iter().enumerate() {
                let va = basis_vector(a);
                let vb = basis_vector(b);
                let proj = kron(
                    &ComplexMatrix::outer(&va, &va),
                    &ComplexMatrix::outer(&vb, &vb),
                );
                let label = format!("{a}{b}");
                let projector = Observable::projector(label.clone(), proj, shape.clone())
                    .expect("product projector");
                out.push(TomoSetting {
                    id: ai * 4 + bi,
                    label,
                    projector,
                });
            }
        }
        out.try_into().expect("exactly 16 settings")
    })
}

/// Exact outcome probabilities Tr[ρΠ_k] in canonical setting order.
pub fn probabilities(rho: &DensityMatrix) -> Result<[f64; 16]> {
    if rho.shape().dims() != [2, 2] {
        return Err(Error::arg("tomography expects a [2,2] state"));
    }
    let mut p = [0.0; 16];
    for (slot, setting) in p.iter_mut().zip(settings_16()) {
        *slot = rho.expectation(setting.projector.matrix()).clamp(0.0, 1.0);
    }
    Ok(p)
}

/// Poisson counts with mean N₀·Tr[ρΠ_k]; deterministic per seed.
pub fn simulate_counts(rho: &DensityMatrix, shots_per_setting: u64, seed: u64) -> Result<TomoCounts> {
    if shots_per_setting == 0 {
        return Err(Error::arg("shots_per_setting must be ≥ 1"));
    }
    let p = probabilities(rho)?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let counts = p
        .iter()
        .map(|&prob| sample_poisson(&mut rng, shots_per_setting as f64 * prob))
        .collect();
    Ok(TomoCounts {
        settings: settings_16().iter().map(|s| s.label.clone()).collect(),
        shots_per_setting,
        counts,
        seed,
    })
}

pub(crate) fn sample_poisson(rng: &mut ChaCha12Rng, mean: f64) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    let dist = Poisson::new(mean).expect("positive mean");
    dist.sample(rng) as u64
}

/// Inverse of the 16×16 design matrix whose rows are vectorized projectors.
fn design_inverse() -> &'static ComplexMatrix {
    static CELL: OnceLock<ComplexMatrix> = OnceLock::new();
    CELL.get_or_init(|| {
        // p_k = Tr[ρ Π_k] = Σ_{ij} Π_k[j,i] ρ[i,j]  →  A[k, 4i+j] = Π_k[j,i]
        let design = DMatrix::from_fn(16, 16, |k, col| {
            let (i, j) = (col / 4, col % 4);
            settings_16()[k].projector.matrix().get(j, i)
        });
        let inverse = design
            .try_inverse()
            .expect("the product-projector design matrix is invertible");
        ComplexMatrix::from_fn(16, 16, |i, j| inverse[(i, j)])
    })
}

/// Linear inversion from per-setting frequencies, then projection to the
/// nearest physical state. With exact probabilities the recovery is exact.
pub fn reconstruct_from_frequencies(
    frequencies: &[f64; 16],
    truth: Option<&DensityMatrix>,
) -> Result<TomoResult> {
    let inv = design_inverse();
    let mut vec_rho = [C_ZERO; 16];
    for (row, slot) in vec_rho.iter_mut().enumerate() {
        let mut acc = C_ZERO;
        for (k, &f) in frequencies.iter().enumerate() {
            acc += inv.get(row, k) * C64::new(f, 0.0);
        }
        *slot = acc;
    }
    let raw = ComplexMatrix::new(4, 4, vec_rho.to_vec())?;
    let hermitized = raw.add(&raw.adjoint()).scale(C64::new(0.5, 0.0));
    let rho_hat = project_to_density(&hermitized, &SystemShape::qubits(2))?;

    let concurrence = wootters_concurrence(&rho_hat)?;
    let lower = lower_bound(&rho_hat)?;
    let upper = upper_bound(&rho_hat)?;
    let fidelity_vs_truth = match truth {
        Some(t) => Some(fidelity(&rho_hat, t)?),
        None => None,
    };
    Ok(TomoResult {
        rho_hat,
        concurrence,
        lower,
        upper,
        fidelity_vs_truth,
    })
}

/// Reconstruct from counts: frequencies are counts normalized by the known
/// shot count per setting.
pub fn reconstruct(counts: &TomoCounts, truth: Option<&DensityMatrix>) -> Result<TomoResult> {
    counts.validate()?;
    let n0 = counts.shots_per_setting as f64;
    let mut frequencies = [0.0; 16];
    for (slot, &c) in frequencies.iter_mut().zip(&counts.counts) {
        *slot = c as f64 / n0;
    }
    reconstruct_from_frequencies(&frequencies, truth)
}
