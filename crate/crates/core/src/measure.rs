//! Projective measurement of a qubit pair in an entangled basis.
//!
//! Sampling uses ChaCha8 seeded with `seed_from_u64`. A parallel batch
//! derives the seed of shot `k` as `seed + k` (wrapping); a serial batch
//! draws every shot from one stream seeded with `seed`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ebasis::{BasisLabel, EntangledBasis};
use crate::error::{Error, Result};
use crate::linalg::{Complex, ZERO};
use crate::qcore::{make_state, PureState};
use crate::tol::TOL_PROB;

#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementOutcome {
    pub label: BasisLabel,
    pub probability: f64,
    /// Normalized state of the unmeasured qubits; `None` below `TOL_PROB`.
    pub residual: Option<PureState>,
}

/// Unnormalized conditional amplitudes `⟨b_k|_pair |s⟩` of the remaining
/// qubits for each outcome, with the remaining labels in register order.
pub fn project_amplitudes(
    s: &PureState,
    pair: [&str; 2],
    basis: &EntangledBasis,
) -> Result<(Vec<String>, [Vec<Complex>; 4])> {
    let labels = s.labels();
    if pair[0] == pair[1] || !pair.iter().all(|p| labels.iter().any(|l| l == p)) {
        return Err(Error::BadPair(pair.iter().map(|p| p.to_string()).collect()));
    }
    let rest: Vec<String> = labels
        .iter()
        .filter(|l| !pair.contains(&l.as_str()))
        .cloned()
        .collect();
    let mut order: Vec<&str> = pair.to_vec();
    order.extend(rest.iter().map(String::as_str));
    let ordered = s.permuted(&order)?;
    let amps = ordered.amps();
    let width = 1 << rest.len();

    let branches = BasisLabel::ALL.map(|label| {
        let b = basis.amps(label);
        (0..width)
            .map(|r| (0..4).map(|x| b[x].conj() * amps[x * width + r]).sum())
            .collect::<Vec<Complex>>()
    });
    Ok((rest, branches))
}

/// All four outcomes of measuring `pair` in `basis`.
pub fn project_all(
    s: &PureState,
    pair: [&str; 2],
    basis: &EntangledBasis,
) -> Result<[MeasurementOutcome; 4]> {
    let (rest, branches) = project_amplitudes(s, pair, basis)?;
    let mut out = Vec::with_capacity(4);
    for (label, amps) in BasisLabel::ALL.into_iter().zip(branches) {
        let probability: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        let residual = if probability >= TOL_PROB {
            Some(make_state(&rest, amps)?)
        } else {
            None
        };
        out.push(MeasurementOutcome {
            label,
            probability,
            residual,
        });
    }
    Ok(out.try_into().expect("four outcomes"))
}

pub fn probabilities(outcomes: &[MeasurementOutcome; 4]) -> [f64; 4] {
    outcomes.each_ref().map(|o| o.probability)
}

/// Inverse-CDF draw from a four-point distribution.
pub fn draw_index<R: Rng + ?Sized>(probs: &[f64; 4], rng: &mut R) -> usize {
    let total: f64 = probs.iter().sum();
    let u = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut last = 0;
    for (k, &p) in probs.iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        acc += p;
        last = k;
        if u < acc {
            return k;
        }
    }
    last
}

/// One seeded measurement; the same seed always yields the same outcome.
pub fn sample(
    s: &PureState,
    pair: [&str; 2],
    basis: &EntangledBasis,
    seed: u64,
) -> Result<MeasurementOutcome> {
    let outcomes = project_all(s, pair, basis)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = draw_index(&probabilities(&outcomes), &mut rng);
    Ok(outcomes[k].clone())
}

/// Outcome labels of `shots` measurements drawn from one stream seeded
/// with `seed`.
pub fn sample_shots(
    s: &PureState,
    pair: [&str; 2],
    basis: &EntangledBasis,
    shots: usize,
    seed: u64,
) -> Result<Vec<BasisLabel>> {
    let probs = probabilities(&project_all(s, pair, basis)?);
    Ok(draw_labels(&probs, shots, seed))
}

pub fn draw_labels(probs: &[f64; 4], shots: usize, seed: u64) -> Vec<BasisLabel> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..shots)
        .map(|_| BasisLabel::ALL[draw_index(probs, &mut rng)])
        .collect()
}

pub fn count_labels(labels: &[BasisLabel]) -> [usize; 4] {
    let mut counts = [0; 4];
    for l in labels {
        counts[l.index()] += 1;
    }
    counts
}

/// Seed of shot `index` in a parallel batch.
pub fn shot_seed(seed: u64, index: u64) -> u64 {
    seed.wrapping_add(index)
}

/// Density matrix `Σ_k p_k |r_k⟩⟨r_k|` of the residuals, row-major.
pub fn residual_mixture(outcomes: &[MeasurementOutcome; 4]) -> Vec<Complex> {
    let dim = outcomes
        .iter()
        .find_map(|o| o.residual.as_ref())
        .map_or(1, |r| r.amps().len());
    let mut rho = vec![ZERO; dim * dim];
    for o in outcomes {
        if let Some(r) = &o.residual {
            let a = r.amps();
            for i in 0..dim {
                for j in 0..dim {
                    rho[i * dim + j] += a[i] * a[j].conj() * o.probability;
                }
            }
        }
    }
    rho
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ebasis::{general_basis, resource_state, BasisParams};
    use crate::linalg::{c, real, Mat2};
    use crate::qcore::{fidelity, tensor};

    fn input(alpha: Complex, beta: Complex) -> PureState {
        PureState::qubit("a", alpha, beta).unwrap()
    }

    #[test]
    fn classic_bell_measurement() {
        let (alpha, beta) = (c(0.6, 0.0), c(0.0, 0.8));
        let s = tensor(&input(alpha, beta), &resource_state(real(1.0)).unwrap()).unwrap();
        let basis = general_basis(BasisParams::bell()).unwrap();
        let outcomes = project_all(&s, ["a", "1"], &basis).unwrap();
        let expected = [(alpha, beta), (alpha, -beta), (beta, alpha), (-beta, alpha)];
        for (o, (x, y)) in outcomes.iter().zip(expected) {
            assert!((o.probability - 0.25).abs() < 1e-15);
            let r = o.residual.as_ref().unwrap();
            assert_eq!(r.labels(), &["2"]);
            let want = PureState::qubit("2", x, y).unwrap();
            assert!((fidelity(r, &want).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn computational_measurement_is_certain() {
        let s = tensor(
            &PureState::basis(&["x", "y"], 0).unwrap(),
            &input(real(0.6), real(0.8)),
        )
        .unwrap();
        let basis = general_basis(BasisParams::computational()).unwrap();
        let outcomes = project_all(&s, ["x", "y"], &basis).unwrap();
        assert!((outcomes[0].probability - 1.0).abs() < 1e-15);
        for o in &outcomes[1..] {
            assert_eq!(o.probability, 0.0);
            assert!(o.residual.is_none());
        }
    }

    #[test]
    fn phi_minus_probability_is_input_independent() {
        let basis = general_basis(BasisParams::new(real(0.5), real(0.5))).unwrap();
        for (alpha, beta) in [
            (real(1.0), real(0.0)),
            (real(0.0), real(1.0)),
            (c(0.6, 0.0), c(0.0, 0.8)),
        ] {
            let s = tensor(&input(alpha, beta), &resource_state(real(0.5)).unwrap()).unwrap();
            let outcomes = project_all(&s, ["a", "1"], &basis).unwrap();
            assert!((outcomes[1].probability - 0.16).abs() < 1e-15);
        }
    }

    #[test]
    fn bad_pair() {
        let s = tensor(
            &input(real(1.0), real(0.0)),
            &resource_state(real(1.0)).unwrap(),
        )
        .unwrap();
        let basis = general_basis(BasisParams::bell()).unwrap();
        assert!(matches!(
            project_all(&s, ["a", "a"], &basis),
            Err(Error::BadPair(_))
        ));
        assert!(matches!(
            project_all(&s, ["a", "q"], &basis),
            Err(Error::BadPair(_))
        ));
    }

    #[test]
    fn pair_order_matters_only_through_the_basis() {
        // measuring (1, a) instead of (a, 1) swaps the roles of |01⟩ and |10⟩
        let s = tensor(
            &input(c(0.6, 0.0), c(0.0, 0.8)),
            &resource_state(real(1.0)).unwrap(),
        )
        .unwrap();
        let basis = general_basis(BasisParams::bell()).unwrap();
        let fwd = project_all(&s, ["a", "1"], &basis).unwrap();
        let rev = project_all(&s, ["1", "a"], &basis).unwrap();
        assert!((fwd[2].probability - rev[2].probability).abs() < 1e-15);
        let r = rev[3].residual.as_ref().unwrap();
        let fixed = crate::qcore::apply_unitary(r, "2", &Mat2::pauli_y()).unwrap();
        let want = input(c(0.6, 0.0), c(0.0, 0.8)).relabel(&["2"]).unwrap();
        assert!((fidelity(&fixed, &want).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_distribution_always_samples_the_certain_outcome() {
        let s = tensor(
            &PureState::basis(&["x", "y"], 0).unwrap(),
            &input(real(0.6), real(0.8)),
        )
        .unwrap();
        let basis = general_basis(BasisParams::computational()).unwrap();
        for seed in 0..50 {
            assert_eq!(
                sample(&s, ["x", "y"], &basis, seed).unwrap().label,
                BasisLabel::PhiPlus
            );
        }
    }

    #[test]
    fn same_seed_same_sequence() {
        let probs = [0.1, 0.2, 0.3, 0.4];
        assert_eq!(draw_labels(&probs, 500, 9), draw_labels(&probs, 500, 9));
        assert_ne!(draw_labels(&probs, 500, 9), draw_labels(&probs, 500, 10));
    }

    #[test]
    fn zero_probability_outcomes_are_never_drawn() {
        let probs = [0.0, 0.5, 0.0, 0.5];
        let counts = count_labels(&draw_labels(&probs, 10_000, 1));
        assert_eq!(counts[0] + counts[2], 0);
    }

    #[test]
    fn classic_frequencies_within_three_sigma() {
        let s = tensor(
            &input(c(0.6, 0.0), c(0.0, 0.8)),
            &resource_state(real(1.0)).unwrap(),
        )
        .unwrap();
        let basis = general_basis(BasisParams::bell()).unwrap();
        let shots = 100_000;
        let counts = count_labels(&sample_shots(&s, ["a", "1"], &basis, shots, 2024).unwrap());
        let bound = 3.0 * (0.25f64 * 0.75 / shots as f64).sqrt();
        for c in counts {
            assert!((c as f64 / shots as f64 - 0.25).abs() < bound);
        }
    }
}
