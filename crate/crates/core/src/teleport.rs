//! Teleportation of one qubit through the resource `N(|00⟩ + n|11⟩)` with
//! Alice measuring in the entangled basis `(ℓ, p)`.
//!
//! For outcome `k` Bob's qubit is left in `M_k (α, β)ᵀ` (unnormalized):
//!
//! ```text
//! M(φ⁺) = NL·diag(1, nℓ*)        M(ψ⁺) = NP·[[0, p*], [n, 0]]
//! M(φ⁻) = NL·diag(ℓ, −n)         M(ψ⁻) = NP·[[0, −1], [np, 0]]
//! ```
//!
//! An outcome is faithful when `M_k†M_k ∝ I`: Bob can then undo `M_k` with a
//! fixed unitary and its probability does not depend on the input.
//! Probabilities and regimes are always computed from the simulated state
//! vector; the closed forms above and the analytic success probabilities
//! are kept as independent cross-checks.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::ebasis::{general_basis, norm_factor, resource_state, BasisLabel, BasisParams};
use crate::error::{Error, Result};
use crate::linalg::{is_finite, Complex, Mat2, ONE, ZERO};
use crate::measure::{count_labels, draw_index, probabilities, project_all, project_amplitudes};
use crate::qcore::{apply_unitary, fidelity, haar_qubit, tensor, PureState};
use crate::tol::{TOL_PROB, TOL_REL};

pub const INPUT: &str = "a";
pub const ALICE: &str = "1";
pub const BOB: &str = "2";

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProtocolParams {
    pub n: Complex,
    pub ell: Complex,
    pub p: Complex,
}

impl ProtocolParams {
    pub fn new(n: Complex, ell: Complex, p: Complex) -> Self {
        ProtocolParams { n, ell, p }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("n", self.n), ("ell", self.ell), ("p", self.p)] {
            if !is_finite(v) {
                return Err(Error::NonFinite(name));
            }
        }
        Ok(())
    }

    pub fn basis(&self) -> BasisParams {
        BasisParams::new(self.ell, self.p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TransferMatrix {
    pub label: BasisLabel,
    pub entries: Mat2,
}

impl TransferMatrix {
    /// `‖M ψ‖²`, the outcome probability for input `ψ = (α, β)`.
    pub fn probability(&self, alpha: Complex, beta: Complex) -> f64 {
        let [x, y] = self.entries.apply([alpha, beta]);
        x.norm_sqr() + y.norm_sqr()
    }
}

/// Closed-form transfer matrices.
pub fn transfer_matrices(params: ProtocolParams) -> Result<[TransferMatrix; 4]> {
    params.validate()?;
    let ProtocolParams { n, ell, p } = params;
    let nl = ONE * (norm_factor(n) * norm_factor(ell));
    let np = ONE * (norm_factor(n) * norm_factor(p));
    let entries = [
        Mat2::diag(ONE, n * ell.conj()).scale(nl),
        Mat2::diag(ell, -n).scale(nl),
        Mat2::new(ZERO, p.conj(), n, ZERO).scale(np),
        Mat2::new(ZERO, -ONE, n * p, ZERO).scale(np),
    ];
    Ok(BasisLabel::ALL.map(|label| TransferMatrix {
        label,
        entries: entries[label.index()],
    }))
}

/// Transfer matrices read off the simulated three-qubit state: column `j`
/// is Bob's unnormalized conditional state for input `|j⟩`.
pub fn derive_transfer_matrices(params: ProtocolParams) -> Result<[TransferMatrix; 4]> {
    params.validate()?;
    let basis = general_basis(params.basis())?;
    let resource = resource_state(params.n)?;
    let mut by_input = Vec::with_capacity(2);
    for j in 0..2 {
        let joint = tensor(&PureState::basis(&[INPUT], j)?, &resource)?;
        by_input.push(project_amplitudes(&joint, [INPUT, ALICE], &basis)?.1);
    }
    Ok(BasisLabel::ALL.map(|label| {
        let k = label.index();
        let column = |j: usize| [by_input[j][k][0], by_input[j][k][1]];
        TransferMatrix {
            label,
            entries: Mat2::from_columns(column(0), column(1)),
        }
    }))
}

/// Scale `c` with `M†M = c·I`, if there is one.
pub fn faithful_weight(m: &Mat2) -> Option<f64> {
    let g = m.gram();
    let scale = 0.5 * g.trace().re;
    if scale <= TOL_PROB {
        return None;
    }
    let dev = g.max_abs_diff(&Mat2::identity().scale(ONE * scale));
    (dev <= TOL_REL * scale).then_some(scale)
}

pub fn is_faithful(m: &TransferMatrix) -> bool {
    faithful_weight(&m.entries).is_some()
}

/// Adjoint of the unitary polar factor of `M`; for faithful `M`, `U·M ∝ I`.
pub fn correction_unitary(m: &TransferMatrix) -> Result<Mat2> {
    let svd = m.entries.svd();
    if svd.singular[0] < TOL_PROB {
        return Err(Error::SingularMatrix);
    }
    Ok((svd.u * svd.v.adjoint()).adjoint())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    Deterministic,
    Probabilistic(u8),
    NoFaithful,
}

impl Regime {
    pub fn from_count(k: usize) -> Self {
        match k {
            4 => Regime::Deterministic,
            0 => Regime::NoFaithful,
            k => Regime::Probabilistic(k as u8),
        }
    }

    pub fn faithful_count(self) -> usize {
        match self {
            Regime::Deterministic => 4,
            Regime::Probabilistic(k) => k as usize,
            Regime::NoFaithful => 0,
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Regime::Deterministic => f.write_str("Deterministic"),
            Regime::Probabilistic(k) => write!(f, "Probabilistic({k})"),
            Regime::NoFaithful => f.write_str("NoFaithful"),
        }
    }
}

impl Serialize for Regime {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Expected number of attempts; `Infinite` when success is impossible.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Repetitions {
    Finite(f64),
    Infinite,
}

impl Repetitions {
    pub fn reciprocal(p: f64) -> Self {
        if p > 0.0 {
            Repetitions::Finite(1.0 / p)
        } else {
            Repetitions::Infinite
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Repetitions::Finite(r) => r,
            Repetitions::Infinite => f64::INFINITY,
        }
    }
}

impl Serialize for Repetitions {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Repetitions::Finite(r) => s.serialize_f64(*r),
            Repetitions::Infinite => s.serialize_str("Infinite"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegimeReport {
    pub regime: Regime,
    pub faithful_outcomes: Vec<BasisLabel>,
    /// Input-independent probability of each faithful outcome.
    pub faithful_probabilities: Vec<f64>,
    pub success_probability: f64,
    pub expected_repetitions: Repetitions,
}

pub fn classify(params: ProtocolParams) -> Result<RegimeReport> {
    let matrices = derive_transfer_matrices(params)?;
    let (faithful_outcomes, faithful_probabilities): (Vec<_>, Vec<_>) = matrices
        .iter()
        .filter_map(|m| faithful_weight(&m.entries).map(|w| (m.label, w)))
        .unzip();
    let success_probability: f64 = faithful_probabilities.iter().sum();
    Ok(RegimeReport {
        regime: Regime::from_count(faithful_outcomes.len()),
        faithful_outcomes,
        faithful_probabilities,
        success_probability,
        expected_repetitions: Repetitions::reciprocal(success_probability),
    })
}

/// `k·|n|²/(1+|n|²)²`, the success probability when `k` outcomes are
/// faithful and the basis matches the resource.
pub fn success_probability_analytic(n: Complex, k: u32) -> f64 {
    let a = n.norm_sqr();
    k as f64 * a / ((1.0 + a) * (1.0 + a))
}

/// `(1+|n|²)²/|n|²`.
pub fn expected_repetitions(n: Complex) -> Repetitions {
    let a = n.norm_sqr();
    if a == 0.0 {
        Repetitions::Infinite
    } else {
        Repetitions::Finite((1.0 + a) * (1.0 + a) / a)
    }
}

/// Both readings of the repetition count: the closed form
/// `(1+|n|²)²/|n|²` and the reciprocal of the two-outcome success
/// probability. They differ by a factor of two (4 vs 2 at `n = 1`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RepetitionSummary {
    pub formula: Repetitions,
    pub inverse_success: Repetitions,
}

pub fn repetition_summary(n: Complex) -> RepetitionSummary {
    RepetitionSummary {
        formula: expected_repetitions(n),
        inverse_success: Repetitions::reciprocal(success_probability_analytic(n, 2)),
    }
}

/// Measurement bases that make two outcomes faithful for resource `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwoOutcomeChoice {
    /// `ℓ = n, p = n*`
    EllNPConj,
    /// `ℓ = n, p = 1/n`
    EllNPInv,
    /// `ℓ = 1/n*, p = 1/n`
    EllInvConjPInv,
    /// `ℓ = 1/n*, p = n*`
    EllInvConjPConj,
}

impl TwoOutcomeChoice {
    pub const ALL: [TwoOutcomeChoice; 4] = [
        TwoOutcomeChoice::EllNPConj,
        TwoOutcomeChoice::EllNPInv,
        TwoOutcomeChoice::EllInvConjPInv,
        TwoOutcomeChoice::EllInvConjPConj,
    ];

    /// Needs `n ≠ 0` except for [`TwoOutcomeChoice::EllNPConj`].
    pub fn params(self, n: Complex) -> ProtocolParams {
        use TwoOutcomeChoice::*;
        let (ell, p) = match self {
            EllNPConj => (n, n.conj()),
            EllNPInv => (n, n.inv()),
            EllInvConjPInv => (n.conj().inv(), n.inv()),
            EllInvConjPConj => (n.conj().inv(), n.conj()),
        };
        ProtocolParams::new(n, ell, p)
    }

    pub fn faithful(self) -> [BasisLabel; 2] {
        use BasisLabel::*;
        use TwoOutcomeChoice::*;
        match self {
            EllNPConj => [PhiMinus, PsiPlus],
            EllNPInv => [PhiMinus, PsiMinus],
            EllInvConjPInv => [PhiPlus, PsiMinus],
            EllInvConjPConj => [PhiPlus, PsiPlus],
        }
    }
}

/// Single parameter relations that make exactly one outcome faithful; the
/// other basis parameter is left to the caller.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OneOutcomeChoice {
    /// `ℓ = 1/n*`
    EllInvConj,
    /// `ℓ = n`
    EllN,
    /// `p = n*`
    PConj,
    /// `p = 1/n`
    PInv,
}

impl OneOutcomeChoice {
    pub const ALL: [OneOutcomeChoice; 4] = [
        OneOutcomeChoice::EllInvConj,
        OneOutcomeChoice::EllN,
        OneOutcomeChoice::PConj,
        OneOutcomeChoice::PInv,
    ];

    pub fn params(self, n: Complex, other: Complex) -> ProtocolParams {
        use OneOutcomeChoice::*;
        match self {
            EllInvConj => ProtocolParams::new(n, n.conj().inv(), other),
            EllN => ProtocolParams::new(n, n, other),
            PConj => ProtocolParams::new(n, other, n.conj()),
            PInv => ProtocolParams::new(n, other, n.inv()),
        }
    }

    pub fn faithful(self) -> BasisLabel {
        match self {
            OneOutcomeChoice::EllInvConj => BasisLabel::PhiPlus,
            OneOutcomeChoice::EllN => BasisLabel::PhiMinus,
            OneOutcomeChoice::PConj => BasisLabel::PsiPlus,
            OneOutcomeChoice::PInv => BasisLabel::PsiMinus,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeRecord {
    pub label: BasisLabel,
    pub probability: f64,
    pub faithful: bool,
    pub correction: Mat2,
    /// Bob's qubit after the correction; `None` for impossible outcomes.
    pub bob_state: Option<PureState>,
    pub fidelity: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Sampled { shots: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampledSummary {
    pub shots: usize,
    pub seed: u64,
    pub outcomes: Vec<BasisLabel>,
    pub counts: [usize; 4],
    pub frequencies: [f64; 4],
    /// Fraction of shots landing on a faithful outcome.
    pub faithful_frequency: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub input: (Complex, Complex),
    pub records: Vec<OutcomeRecord>,
    pub regime: RegimeReport,
    pub sampled: Option<SampledSummary>,
}

/// Runs the protocol on input `α|0⟩ + β|1⟩`.
pub fn run(input: (Complex, Complex), params: ProtocolParams, mode: Mode) -> Result<RunReport> {
    let (alpha, beta) = input;
    let norm = alpha.norm_sqr() + beta.norm_sqr();
    if !is_finite(alpha) || !is_finite(beta) || (norm - 1.0).abs() > 1e-9 {
        return Err(Error::BadInput(format!("|α|²+|β|² = {norm}")));
    }
    if let Mode::Sampled { shots: 0, .. } = mode {
        return Err(Error::BadInput("shots must be at least 1".into()));
    }
    let regime = classify(params)?;
    let matrices = derive_transfer_matrices(params)?;
    let psi = PureState::qubit(INPUT, alpha, beta)?;
    let target = psi.relabel(&[BOB])?;
    let joint = tensor(&psi, &resource_state(params.n)?)?;
    let basis = general_basis(params.basis())?;
    let outcomes = project_all(&joint, [INPUT, ALICE], &basis)?;

    let mut records = Vec::with_capacity(4);
    for (o, m) in outcomes.iter().zip(&matrices) {
        let correction = correction_unitary(m).unwrap_or_else(|_| Mat2::identity());
        let bob_state = o
            .residual
            .as_ref()
            .map(|r| apply_unitary(r, BOB, &correction))
            .transpose()?;
        let fidelity = bob_state
            .as_ref()
            .map(|b| fidelity(&target, b))
            .transpose()?;
        records.push(OutcomeRecord {
            label: o.label,
            probability: o.probability,
            faithful: regime.faithful_outcomes.contains(&o.label),
            correction,
            bob_state,
            fidelity,
        });
    }

    let sampled = match mode {
        Mode::Exhaustive => None,
        Mode::Sampled { shots, seed } => {
            let probs = probabilities(&outcomes);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let drawn: Vec<BasisLabel> = (0..shots)
                .map(|_| BasisLabel::ALL[draw_index(&probs, &mut rng)])
                .collect();
            Some(summarize(&drawn, seed, &regime.faithful_outcomes))
        }
    };

    Ok(RunReport {
        input,
        records,
        regime,
        sampled,
    })
}

pub fn summarize(drawn: &[BasisLabel], seed: u64, faithful: &[BasisLabel]) -> SampledSummary {
    let shots = drawn.len();
    let counts = count_labels(drawn);
    let frequencies = counts.map(|c| c as f64 / shots as f64);
    let faithful_frequency = faithful.iter().map(|l| frequencies[l.index()]).sum();
    SampledSummary {
        shots,
        seed,
        outcomes: drawn.to_vec(),
        counts,
        frequencies,
        faithful_frequency,
    }
}

/// Standard error of a binomial frequency with success probability `p`.
pub fn binomial_standard_error(p: f64, shots: usize) -> f64 {
    (p * (1.0 - p) / shots as f64).sqrt()
}

/// Mean post-correction fidelity of each outcome over `count` Haar-random
/// inputs, weighting each input's branch by its probability.
pub fn average_fidelity(params: ProtocolParams, count: usize, seed: u64) -> Result<[f64; 4]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut num = [0.0; 4];
    let mut den = [0.0; 4];
    for _ in 0..count {
        let report = run(haar_qubit(&mut rng), params, Mode::Exhaustive)?;
        for r in &report.records {
            if let Some(f) = r.fidelity {
                num[r.label.index()] += r.probability * f;
                den[r.label.index()] += r.probability;
            }
        }
    }
    Ok(std::array::from_fn(|k| {
        if den[k] > 0.0 {
            num[k] / den[k]
        } else {
            0.0
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ebasis::basis_entropy;
    use crate::linalg::{c, real};
    use crate::tol::TOL_EQ;
    use BasisLabel::*;

    fn params(n: f64, ell: f64, p: f64) -> ProtocolParams {
        ProtocolParams::new(real(n), real(ell), real(p))
    }

    fn random_c(rng: &mut ChaCha8Rng) -> Complex {
        use rand::Rng;
        c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0))
    }

    #[test]
    fn classic_transfer_matrices_are_halved_paulis() {
        let ms = transfer_matrices(params(1.0, 1.0, 1.0)).unwrap();
        let expect = [
            Mat2::identity(),
            Mat2::pauli_z(),
            Mat2::pauli_x(),
            Mat2::new(ZERO, -ONE, ONE, ZERO),
        ];
        for (m, e) in ms.iter().zip(expect) {
            assert!(m.entries.max_abs_diff(&e.scale(real(0.5))) < 1e-15);
        }
    }

    #[test]
    fn untangled_resource_has_no_faithful_outcome() {
        let ms = transfer_matrices(params(0.0, 0.7, 0.3)).unwrap();
        assert!(ms[1].entries.det().norm() < 1e-15);
        assert!(ms.iter().all(|m| !is_faithful(m)));
    }

    #[test]
    fn mixed_choice_matrices() {
        let ms = transfer_matrices(params(0.5, 0.5, 2.0)).unwrap();
        let nl = 1.0 / 1.25;
        assert!(
            ms[1]
                .entries
                .max_abs_diff(&Mat2::diag(real(0.5 * nl), real(-0.5 * nl)))
                < 1e-15
        );
        assert!(is_faithful(&ms[1]));
        let np = 1.0 / (1.25f64 * 5.0).sqrt();
        let want = Mat2::new(ZERO, real(2.0 * np), real(0.5 * np), ZERO);
        assert!(ms[2].entries.max_abs_diff(&want) < 1e-15);
        assert!(!is_faithful(&ms[2]));
    }

    #[test]
    fn closed_form_matches_simulation() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let p = ProtocolParams::new(random_c(&mut rng), random_c(&mut rng), random_c(&mut rng));
            let a = transfer_matrices(p).unwrap();
            let b = derive_transfer_matrices(p).unwrap();
            for (x, y) in a.iter().zip(&b) {
                assert!(x.entries.max_abs_diff(&y.entries) < 1e-14);
            }
        }
    }

    #[test]
    fn faithfulness_checks() {
        let half_x = TransferMatrix {
            label: PsiPlus,
            entries: Mat2::pauli_x().scale(real(0.5)),
        };
        assert!(is_faithful(&half_x));
        let ms = transfer_matrices(params(1.0, 0.25, 1.0)).unwrap();
        assert!(!is_faithful(&ms[0]));
        let zero = TransferMatrix {
            label: PhiPlus,
            entries: Mat2::zero(),
        };
        assert!(!is_faithful(&zero));
        assert_eq!(correction_unitary(&zero), Err(Error::SingularMatrix));
    }

    #[test]
    fn classic_corrections_are_paulis() {
        let ms = transfer_matrices(params(1.0, 1.0, 1.0)).unwrap();
        let i_sigma_y = Mat2::pauli_y().scale(c(0.0, 1.0));
        let paulis = [
            Mat2::identity(),
            Mat2::pauli_z(),
            Mat2::pauli_x(),
            i_sigma_y,
        ];
        for (m, want) in ms.iter().zip(paulis) {
            let u = correction_unitary(m).unwrap();
            assert!(u.equals_up_to_phase(&want, 1e-12), "{}: {u}", m.label);
        }
    }

    #[test]
    fn probabilistic_corrections() {
        let ms = transfer_matrices(TwoOutcomeChoice::EllNPConj.params(real(0.5))).unwrap();
        let u = correction_unitary(&ms[PsiPlus.index()]).unwrap();
        assert!(u.equals_up_to_phase(&Mat2::pauli_x(), 1e-12));
        let u = correction_unitary(&ms[PhiMinus.index()]).unwrap();
        assert!(u.equals_up_to_phase(&Mat2::pauli_z(), 1e-12));
        let m = TransferMatrix {
            label: PhiPlus,
            entries: Mat2::identity().scale(c(0.3, 0.1)),
        };
        assert!(correction_unitary(&m)
            .unwrap()
            .equals_up_to_phase(&Mat2::identity(), 1e-12));
    }

    #[test]
    fn correction_is_unitary_even_when_rank_deficient() {
        let ms = transfer_matrices(params(0.0, 0.7, 0.3)).unwrap();
        for m in &ms {
            if let Ok(u) = correction_unitary(m) {
                assert!(u.is_unitary(1e-12));
            }
        }
    }

    #[test]
    fn classify_examples() {
        let r = classify(params(1.0, 1.0, 1.0)).unwrap();
        assert_eq!(r.regime, Regime::Deterministic);
        assert!((r.success_probability - 1.0).abs() < 1e-12);
        assert!((r.expected_repetitions.value() - 1.0).abs() < 1e-12);

        let r = classify(params(0.5, 0.5, 0.5)).unwrap();
        assert_eq!(r.regime, Regime::Probabilistic(2));
        assert_eq!(r.faithful_outcomes, vec![PhiMinus, PsiPlus]);
        assert!((r.success_probability - 0.32).abs() < 1e-12);

        let r = classify(params(0.5, 0.5, 3.0)).unwrap();
        assert_eq!(r.regime, Regime::Probabilistic(1));
        assert!((r.success_probability - 0.16).abs() < 1e-12);

        let r = classify(params(1.0, 0.0, 0.0)).unwrap();
        assert_eq!(r.regime, Regime::NoFaithful);
        assert_eq!(r.success_probability, 0.0);
        assert_eq!(r.expected_repetitions, Repetitions::Infinite);

        let r = classify(params(0.0, 0.0, 0.0)).unwrap();
        assert_eq!(r.regime, Regime::NoFaithful);

        assert_eq!(
            classify(ProtocolParams::new(c(f64::NAN, 0.0), ONE, ONE)),
            Err(Error::NonFinite("n"))
        );
    }

    #[test]
    fn unit_modulus_resource() {
        // |n| = 1 with ℓ = n and p generic: both φ outcomes are faithful
        let r = classify(ProtocolParams::new(c(0.6, 0.8), c(0.6, 0.8), real(0.3))).unwrap();
        assert_eq!(r.regime, Regime::Probabilistic(2));
        let r = classify(ProtocolParams::new(c(0.6, 0.8), c(0.6, 0.8), c(0.0, 1.0))).unwrap();
        assert_eq!(r.regime, Regime::Deterministic);
        assert_eq!(Regime::from_count(3), Regime::Probabilistic(3));
    }

    #[test]
    fn analytic_probabilities_and_repetitions() {
        assert_eq!(success_probability_analytic(ONE, 2), 0.5);
        assert_eq!(success_probability_analytic(ZERO, 1), 0.0);
        assert_eq!(success_probability_analytic(ZERO, 2), 0.0);
        assert!((success_probability_analytic(real(0.5), 2) - 0.32).abs() < 1e-15);

        assert_eq!(expected_repetitions(ONE), Repetitions::Finite(4.0));
        assert_eq!(expected_repetitions(ZERO), Repetitions::Infinite);
        assert!((expected_repetitions(real(0.5)).value() - 6.25).abs() < 1e-12);

        let s = repetition_summary(ONE);
        assert_eq!(s.formula, Repetitions::Finite(4.0));
        assert_eq!(s.inverse_success, Repetitions::Finite(2.0));
        assert_eq!(
            repetition_summary(ZERO).inverse_success,
            Repetitions::Infinite
        );
    }

    #[test]
    fn run_classic() {
        let r = run(
            (real(0.6), real(0.8)),
            params(1.0, 1.0, 1.0),
            Mode::Exhaustive,
        )
        .unwrap();
        assert_eq!(r.records.len(), 4);
        for rec in &r.records {
            assert!((rec.probability - 0.25).abs() < 1e-15);
            assert!(rec.faithful);
            assert!((rec.fidelity.unwrap() - 1.0).abs() < 1e-12);
        }
        assert!(r.sampled.is_none());
    }

    #[test]
    fn run_probabilistic_inputs() {
        let p = params(0.5, 0.5, 0.5);
        let r = run((ONE, ZERO), p, Mode::Exhaustive).unwrap();
        let phi_minus = &r.records[PhiMinus.index()];
        assert!((phi_minus.probability - 0.16).abs() < 1e-15);
        assert!((phi_minus.fidelity.unwrap() - 1.0).abs() < TOL_EQ);
        let phi_plus = &r.records[PhiPlus.index()];
        assert!(!phi_plus.faithful);
        assert!((phi_plus.fidelity.unwrap() - 1.0).abs() < TOL_EQ);

        let r = run((ZERO, ONE), p, Mode::Exhaustive).unwrap();
        let phi_plus = &r.records[PhiPlus.index()];
        assert!(!phi_plus.faithful);
        assert!((phi_plus.fidelity.unwrap() - 1.0).abs() < TOL_EQ);

        let avg = average_fidelity(p, 10_000, 5).unwrap();
        assert!(avg[PhiPlus.index()] < 1.0 - 1e-3);
        assert!(avg[PsiMinus.index()] < 1.0 - 1e-3);
        assert!((avg[PhiMinus.index()] - 1.0).abs() < 1e-9);
        assert!((avg[PsiPlus.index()] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn run_rejects_bad_input() {
        let p = params(1.0, 1.0, 1.0);
        assert!(matches!(
            run((ONE, ONE), p, Mode::Exhaustive),
            Err(Error::BadInput(_))
        ));
        assert!(matches!(
            run((ONE, ZERO), p, Mode::Sampled { shots: 0, seed: 1 }),
            Err(Error::BadInput(_))
        ));
    }

    #[test]
    fn sampled_run_is_deterministic() {
        let p = params(0.5, 0.5, 0.5);
        let mode = Mode::Sampled {
            shots: 2000,
            seed: 77,
        };
        let a = run((real(0.6), real(0.8)), p, mode).unwrap();
        let b = run((real(0.6), real(0.8)), p, mode).unwrap();
        assert_eq!(a.sampled, b.sampled);
        let s = a.sampled.unwrap();
        assert_eq!(s.counts.iter().sum::<usize>(), 2000);
    }

    #[test]
    fn completeness_and_state_independence() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let p = ProtocolParams::new(random_c(&mut rng), random_c(&mut rng), random_c(&mut rng));
            let ms = transfer_matrices(p).unwrap();
            let sum = ms
                .iter()
                .fold(Mat2::zero(), |acc, m| acc + m.entries.gram());
            assert!(sum.max_abs_diff(&Mat2::identity()) < 1e-10);
        }
        let ms = transfer_matrices(TwoOutcomeChoice::EllNPInv.params(c(0.3, 0.2))).unwrap();
        let faithful: Vec<_> = ms.iter().filter(|m| is_faithful(m)).collect();
        assert_eq!(faithful.len(), 2);
        for m in faithful {
            let p0 = m.probability(ONE, ZERO);
            for _ in 0..100 {
                let (a, b) = haar_qubit(&mut rng);
                assert!((m.probability(a, b) - p0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn faithful_outcomes_match_resource_entanglement() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..300 {
            let n = random_c(&mut rng);
            let p = ProtocolParams::new(n, random_c(&mut rng), n.conj().inv());
            let r = classify(p).unwrap();
            assert!(r.faithful_outcomes.contains(&PsiMinus));
            let e = basis_entropy(n);
            for l in &r.faithful_outcomes {
                let c = if matches!(l, PhiPlus | PhiMinus) {
                    p.ell
                } else {
                    p.p
                };
                assert!((basis_entropy(c) - e).abs() < 1e-9);
            }
        }
    }
}
