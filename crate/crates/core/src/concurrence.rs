//! Concurrence and its measurable bounds.
//!
//! Two independent evaluation routes are kept side by side on purpose:
//!
//! - the *operator path* builds the 16×16 observables V₁, V₂, K₁, K₂ and
//!   4P₋⊗P₋ in copy-pair order and traces them against ρ⊗ρ;
//! - the *purity path* ([`purity_oracle`]) uses swap-operator algebra to get
//!   the same numbers from Tr ρ² and the marginal purities alone.
//!
//! The copy-pair convention is fixed here once: the twofold state is laid out
//! as (A₁,A₂,B₁,B₂), so an operator written `O_A ⊗ O_B` acts with `O_A` on the
//! two copies of subsystem A and `O_B` on the two copies of subsystem B. This
//! matches an optical layout where one beamsplitter compares the two A photons
//! and another the two B photons.

use crate::error::{Error, Result};
use crate::qlinalg::{
    herm_eig, herm_sqrt, kron, permute_systems, C64, C_ONE, C_ZERO, ComplexMatrix, DensityMatrix,
    SystemShape,
};
use crate::tol;
use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

/// Hermitian observable bundled with its subsystem shape and a display label.
#[derive(Debug, Clone)]
pub struct Observable {
    matrix: ComplexMatrix,
    shape: SystemShape,
    label: String,
}

impl Observable {
    /// Wrap a Hermitian matrix; fails if it is not Hermitian.
    pub fn new(label: impl Into<String>, matrix: ComplexMatrix, shape: SystemShape) -> Result<Self> {
        shape.check_matrix(&matrix)?;
        let dev = matrix.hermiticity_deviation();
        if dev > tol::HERMITICITY {
            return Err(Error::NotHermitian { deviation: dev });
        }
        Ok(Self {
            matrix,
            shape,
            label: label.into(),
        })
    }

    /// Wrap a projector; additionally checks M² = M.
    pub fn projector(
        label: impl Into<String>,
        matrix: ComplexMatrix,
        shape: SystemShape,
    ) -> Result<Self> {
        let obs = Self::new(label, matrix, shape)?;
        let sq = obs.matrix.matmul(&obs.matrix);
        if !sq.approx_eq(&obs.matrix, tol::PROJECTOR) {
            return Err(Error::arg(format!(
                "observable {} is not idempotent",
                obs.label
            )));
        }
        Ok(obs)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn shape(&self) -> &SystemShape {
        &self.shape
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

/// Which side of the concurrence a [`BoundEstimate`] brackets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundSide {
    Lower,
    Upper,
}

/// A concurrence bound: clamped value, the raw squared quantity behind it,
/// and a standard error (zero for exact analytic evaluation).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BoundEstimate {
    pub kind: BoundSide,
    /// sqrt(max(0, raw_square)).
    pub value: f64,
    /// The measured/evaluated squared bound; may be negative for lower bounds.
    pub raw_square: f64,
    pub std_error: f64,
}

impl BoundEstimate {
    pub fn exact(kind: BoundSide, raw_square: f64) -> Self {
        Self::with_error(kind, raw_square, 0.0)
    }

    pub fn with_error(kind: BoundSide, raw_square: f64, std_error: f64) -> Self {
        BoundEstimate {
            kind,
            value: raw_square.max(0.0).sqrt(),
            raw_square,
            std_error,
        }
    }
}

/// The five bound observables of the twofold-copy scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundObservableKind {
    /// 4(P₋−P₊)⊗P₋ — lower bound, copies of A interfered against P₋ on B.
    V1,
    /// 4P₋⊗(P₋−P₊) — lower bound, mirror of V₁.
    V2,
    /// 4(P₋+P₊)⊗P₋ = 4·I⊗P₋ — upper bound.
    K1,
    /// 4P₋⊗(P₋+P₊) = 4·P₋⊗I — upper bound.
    K2,
    /// 4P₋⊗P₋ — the tighter two-qubit upper bound.
    Tight,
}

/// Squared-bound components from all five observables.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BoundComponents {
    pub v1_sq: f64,
    pub v2_sq: f64,
    pub k1_sq: f64,
    pub k2_sq: f64,
    pub tight_sq: f64,
}

impl BoundComponents {
    /// Best (largest) lower-bound square.
    pub fn lower_sq(&self) -> f64 {
        self.v1_sq.max(self.v2_sq)
    }

    /// Best (smallest) upper-bound square.
    pub fn upper_sq(&self) -> f64 {
        self.k1_sq.min(self.k2_sq).min(self.tight_sq)
    }
}

/// Wootters concurrence of a two-qubit state.
///
/// C = max(0, λ₁−λ₂−λ₃−λ₄) with λᵢ the descending square roots of the
/// eigenvalues of √ρ·ρ̃·√ρ, ρ̃ = (σy⊗σy)·ρ*·(σy⊗σy). The Hermitian
/// √ρ·ρ̃·√ρ route is used so the standard symmetric eigensolver applies.
pub fn wootters_concurrence(rho: &DensityMatrix) -> Result<f64> {
    ensure_two_qubits(rho)?;
    let yy = sigma_y_tensor_y();
    let spin_flipped = yy.matmul(&rho.matrix().conj()).matmul(&yy);
    let sqrt_rho = herm_sqrt(rho.matrix())?;
    let core = sqrt_rho.matmul(&spin_flipped).matmul(&sqrt_rho);
    let (eigenvalues, _) = herm_eig(&core)?;
    // Truncate numerical zeros before the square root; rank-deficient states
    // otherwise pick up ~1e-8 phantom λ's.
    let lambdas: Vec<f64> = eigenvalues
        .iter()
        .map(|&l| if l < tol::SPECTRAL_NOISE_FLOOR { 0.0 } else { l.sqrt() })
        .collect();
    let c = lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3];
    Ok(c.clamp(0.0, 1.0))
}

/// The swap operator S|i,j⟩ = |j,i⟩ on C_d ⊗ C_d.
pub fn swap_operator(d: usize) -> ComplexMatrix {
    let side = d * d;
    ComplexMatrix::from_fn(side, side, |r, c| {
        let (i, j) = (r / d, r % d);
        let (k, l) = (c / d, c % d);
        if i == l && j == k {
            C_ONE
        } else {
            C_ZERO
        }
    })
}

/// Projectors onto the antisymmetric (P₋) and symmetric (P₊) subspaces of two
/// copies of a d-dimensional system: P∓ = (I ∓ S)/2.
pub fn parity_projectors(d: usize) -> Result<(Observable, Observable)> {
    if d < 2 {
        return Err(Error::arg("parity projectors need dimension ≥ 2"));
    }
    let swap = swap_operator(d);
    let identity = ComplexMatrix::identity(d * d);
    let half = C64::new(0.5, 0.0);
    let p_minus = identity.sub(&swap).scale(half);
    let p_plus = identity.add(&swap).scale(half);
    let shape = SystemShape::new(vec![d, d])?;
    Ok((
        Observable::projector("P_minus", p_minus, shape.clone())?,
        Observable::projector("P_plus", p_plus, shape)?,
    ))
}

/// Two independent copies of `rho`, permuted into copy-pair order.
///
/// ρ⊗ρ is built on subsystem order (A₁,B₁,A₂,B₂) and then relabeled to
/// (A₁,A₂,B₁,B₂) so that copy-pair operators `O_A ⊗ O_B` trace against it
/// directly.
pub fn twofold_state(rho: &DensityMatrix) -> Result<DensityMatrix> {
    ensure_two_qubits(rho)?;
    let product = kron(rho.matrix(), rho.matrix());
    let shape4 = SystemShape::qubits(4);
    let reordered = permute_systems(&product, &shape4, &[0, 2, 1, 3])?;
    DensityMatrix::new(reordered, shape4)
}

fn qubit_parity() -> &'static (ComplexMatrix, ComplexMatrix) {
    static CELL: OnceLock<(ComplexMatrix, ComplexMatrix)> = OnceLock::new();
    CELL.get_or_init(|| {
        let (pm, pp) = parity_projectors(2).expect("qubit parity projectors");
        (pm.matrix().clone(), pp.matrix().clone())
    })
}

/// One of the 16×16 bound observables, built in copy-pair order
/// (A-copies)⊗(B-copies) and cached after first construction.
pub fn bound_observable(kind: BoundObservableKind) -> &'static Observable {
    static V1: OnceLock<Observable> = OnceLock::new();
    static V2: OnceLock<Observable> = OnceLock::new();
    static K1: OnceLock<Observable> = OnceLock::new();
    static K2: OnceLock<Observable> = OnceLock::new();
    static TIGHT: OnceLock<Observable> = OnceLock::new();

    let build = move || {
        let (p_minus, p_plus) = qubit_parity();
        let four = C64::new(4.0, 0.0);
        let minus_minus_plus = p_minus.sub(p_plus);
        let sum = p_minus.add(p_plus); // = I within fp noise, kept explicit
        let (label, matrix) = match kind {
            BoundObservableKind::V1 => ("V1", kron(&minus_minus_plus, p_minus).scale(four)),
            BoundObservableKind::V2 => ("V2", kron(p_minus, &minus_minus_plus).scale(four)),
            BoundObservableKind::K1 => ("K1", kron(&sum, p_minus).scale(four)),
            BoundObservableKind::K2 => ("K2", kron(p_minus, &sum).scale(four)),
            BoundObservableKind::Tight => ("TIGHT", kron(p_minus, p_minus).scale(four)),
        };
        Observable::new(label, matrix, SystemShape::qubits(4)).expect("bound observable")
    };

    match kind {
        BoundObservableKind::V1 => V1.get_or_init(build),
        BoundObservableKind::V2 => V2.get_or_init(build),
        BoundObservableKind::K1 => K1.get_or_init(build),
        BoundObservableKind::K2 => K2.get_or_init(build),
        BoundObservableKind::Tight => TIGHT.get_or_init(build),
    }
}

/// All five squared-bound traces via the 16×16 operator path.
pub fn bound_components(rho: &DensityMatrix) -> Result<BoundComponents> {
    let twofold = twofold_state(rho)?;
    let trace = |kind| twofold.expectation(bound_observable(kind).matrix());
    Ok(BoundComponents {
        v1_sq: trace(BoundObservableKind::V1),
        v2_sq: trace(BoundObservableKind::V2),
        k1_sq: trace(BoundObservableKind::K1),
        k2_sq: trace(BoundObservableKind::K2),
        tight_sq: trace(BoundObservableKind::Tight),
    })
}

/// Measurable lower bound on the concurrence: the better of the two V
/// observables, clamped at zero.
pub fn lower_bound(rho: &DensityMatrix) -> Result<BoundEstimate> {
    let components = bound_components(rho)?;
    Ok(BoundEstimate::exact(BoundSide::Lower, components.lower_sq()))
}

/// Measurable upper bound on the concurrence: the smallest of K₁, K₂ and the
/// tighter two-qubit observable.
pub fn upper_bound(rho: &DensityMatrix) -> Result<BoundEstimate> {
    let components = bound_components(rho)?;
    Ok(BoundEstimate::exact(BoundSide::Upper, components.upper_sq()))
}

/// Purity-only closed forms for everything the operator path measures.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PurityOracle {
    /// Tr ρ².
    pub purity: f64,
    /// Tr ρ_A².
    pub purity_a: f64,
    /// Tr ρ_B².
    pub purity_b: f64,
    pub lower_sq_v1: f64,
    pub lower_sq_v2: f64,
    pub upper_sq_k1: f64,
    pub upper_sq_k2: f64,
    pub upper_sq_tight: f64,
}

impl PurityOracle {
    pub fn components(&self) -> BoundComponents {
        BoundComponents {
            v1_sq: self.lower_sq_v1,
            v2_sq: self.lower_sq_v2,
            k1_sq: self.upper_sq_k1,
            k2_sq: self.upper_sq_k2,
            tight_sq: self.upper_sq_tight,
        }
    }
}

/// Evaluate every bound from partial traces only — no 16×16 matrices.
///
/// Swap-operator algebra gives
/// Tr[(ρ⊗ρ)(S_A⊗I)] = Tr ρ_A², Tr[(ρ⊗ρ)(S_A⊗S_B)] = Tr ρ², from which:
/// lower²(V₁) = 2(Tr ρ² − Tr ρ_A²), lower²(V₂) = 2(Tr ρ² − Tr ρ_B²),
/// upper²(K₁) = 2(1 − Tr ρ_B²), upper²(K₂) = 2(1 − Tr ρ_A²),
/// upper²(tight) = 1 − Tr ρ_A² − Tr ρ_B² + Tr ρ².
pub fn purity_oracle(rho: &DensityMatrix) -> Result<PurityOracle> {
    ensure_two_qubits(rho)?;
    let purity = rho.purity();
    let purity_a = rho.reduce(&[0])?.purity();
    let purity_b = rho.reduce(&[1])?.purity();
    Ok(PurityOracle {
        purity,
        purity_a,
        purity_b,
        lower_sq_v1: 2.0 * (purity - purity_a),
        lower_sq_v2: 2.0 * (purity - purity_b),
        upper_sq_k1: 2.0 * (1.0 - purity_b),
        upper_sq_k2: 2.0 * (1.0 - purity_a),
        upper_sq_tight: 1.0 - purity_a - purity_b + purity,
    })
}

fn ensure_two_qubits(rho: &DensityMatrix) -> Result<()> {
    if rho.shape().dims() != [2, 2] {
        return Err(Error::arg(format!(
            "operation needs a [2,2] state, got {:?}",
            rho.shape().dims()
        )));
    }
    Ok(())
}

fn sigma_y_tensor_y() -> ComplexMatrix {
    let y = ComplexMatrix::new(
        2,
        2,
        vec![C_ZERO, C64::new(0.0, -1.0), C64::new(0.0, 1.0), C_ZERO],
    )
    .unwrap();
    kron(&y, &y)
}
