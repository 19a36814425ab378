//! Entanglement swapping between `M(|00⟩ + m|11⟩)_ab` and
//! `N(|01⟩ + n|10⟩)_12`.
//!
//! Alice measures `(a, 1)` in the basis `(ℓ, p)`. The conditional state of
//! `(b, 2)` is then expanded in an analysis basis `(ℓ′, p′)`; an outcome is
//! reliable when that state is exactly one analysis-basis vector (up to
//! phase). No operation is applied to `(b, 2)`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::ebasis::{general_basis, resource_state_on, BasisLabel, BasisParams};
use crate::error::{Error, Result};
use crate::linalg::{is_finite, Complex, ONE, ZERO};
use crate::measure::project_all;
use crate::qcore::{entropy, make_state, reduced_density, tensor, PureState};
use crate::tol::TOL_REL;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SwapParams {
    pub m: Complex,
    pub n: Complex,
    pub ell: Complex,
    pub p: Complex,
    pub ell_prime: Complex,
    pub p_prime: Complex,
}

impl SwapParams {
    pub fn validate(&self) -> Result<()> {
        let named = [
            ("m", self.m),
            ("n", self.n),
            ("ell", self.ell),
            ("p", self.p),
            ("ell_prime", self.ell_prime),
            ("p_prime", self.p_prime),
        ];
        for (name, v) in named {
            if !is_finite(v) {
                return Err(Error::NonFinite(name));
            }
        }
        Ok(())
    }

    /// `ℓ = 1/n*, p′ = m, p = 1/m*, ℓ′ = 1/n`: two reliable outcomes in
    /// general, three when `|m| = |n|` or `|m| = 1/|n|`. Needs `m, n ≠ 0`.
    pub fn two_outcome_choice(m: Complex, n: Complex) -> Self {
        SwapParams {
            m,
            n,
            ell: n.conj().inv(),
            p: m.conj().inv(),
            ell_prime: n.inv(),
            p_prime: m,
        }
    }

    /// `ℓ = 1/n*, p′ = m` with `p, ℓ′` free.
    pub fn one_outcome_choice(m: Complex, n: Complex, p: Complex, ell_prime: Complex) -> Self {
        SwapParams {
            m,
            n,
            ell: n.conj().inv(),
            p,
            ell_prime,
            p_prime: m,
        }
    }

    /// Every parameter equal to the same unit phase.
    pub fn standard(phase: Complex) -> Self {
        SwapParams {
            m: phase,
            n: phase,
            ell: phase,
            p: phase,
            ell_prime: phase,
            p_prime: phase,
        }
    }
}

/// `M(|00⟩ + m|11⟩)_ab ⊗ N(|01⟩ + n|10⟩)_12`.
pub fn swap_inputs(m: Complex, n: Complex) -> Result<PureState> {
    if !is_finite(m) {
        return Err(Error::NonFinite("m"));
    }
    if !is_finite(n) {
        return Err(Error::NonFinite("n"));
    }
    let ab = resource_state_on(m, ["a", "b"])?;
    let pair12 = make_state(&["1", "2"], vec![ZERO, ONE, n, ZERO])?;
    tensor(&ab, &pair12)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SwapOutcome {
    pub label: BasisLabel,
    pub probability: f64,
    /// Normalized conditional state of `(b, 2)`; `None` for impossible outcomes.
    pub b2_state: Option<PureState>,
    /// Coefficients of `b2_state` in the analysis basis.
    pub coefficients: [Complex; 4],
    pub reliable: bool,
    pub target: Option<BasisLabel>,
    pub b2_entropy: Option<f64>,
}

pub fn swap_run(params: SwapParams) -> Result<[SwapOutcome; 4]> {
    params.validate()?;
    let joint = swap_inputs(params.m, params.n)?;
    let measured = general_basis(BasisParams::new(params.ell, params.p))?;
    let analysis = general_basis(BasisParams::new(params.ell_prime, params.p_prime))?;
    let outcomes = project_all(&joint, ["a", "1"], &measured)?;

    let mut out = Vec::with_capacity(4);
    for o in outcomes {
        let (coefficients, target, b2_entropy) = match &o.residual {
            Some(state) => {
                let coeffs = analysis.coefficients(state.amps());
                let e = entropy(&reduced_density(state, &["b"])?);
                (coeffs, single_component(&coeffs), Some(e))
            }
            None => ([ZERO; 4], None, None),
        };
        out.push(SwapOutcome {
            label: o.label,
            probability: o.probability,
            b2_state: o.residual,
            coefficients,
            reliable: target.is_some(),
            target,
            b2_entropy,
        });
    }
    Ok(out.try_into().expect("four outcomes"))
}

/// The only coefficient that is non-negligible relative to the largest.
fn single_component(coeffs: &[Complex; 4]) -> Option<BasisLabel> {
    let max = coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return None;
    }
    let mut live = BasisLabel::ALL
        .into_iter()
        .filter(|l| coeffs[l.index()].norm() > TOL_REL * max);
    match (live.next(), live.next()) {
        (Some(l), None) => Some(l),
        _ => None,
    }
}

/// `M⁴N⁴[|n|²(1+|m|²)² + |m|²(1+|n|²)²]`
pub fn swap_probability_two_outcomes(m: Complex, n: Complex) -> f64 {
    let (a, b) = (m.norm_sqr(), n.norm_sqr());
    let m2 = 1.0 / (1.0 + a);
    let n2 = 1.0 / (1.0 + b);
    m2 * m2 * n2 * n2 * (b * (1.0 + a) * (1.0 + a) + a * (1.0 + b) * (1.0 + b))
}

/// `3|n|²N⁸(1+|n|²)²`, unreduced.
pub fn swap_probability_three_outcomes_expanded(n: Complex) -> f64 {
    let b = n.norm_sqr();
    let n2 = 1.0 / (1.0 + b);
    3.0 * b * n2.powi(4) * (1.0 + b) * (1.0 + b)
}

/// `3|n|²/(1+|n|²)²`, the reduced form of [`swap_probability_three_outcomes_expanded`].
pub fn swap_probability_three_outcomes(n: Complex) -> f64 {
    let b = n.norm_sqr();
    3.0 * b / ((1.0 + b) * (1.0 + b))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SwapRegime {
    Deterministic,
    Probabilistic(u8),
    None,
}

impl fmt::Display for SwapRegime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SwapRegime::Deterministic => f.write_str("Deterministic"),
            SwapRegime::Probabilistic(k) => write!(f, "Probabilistic({k})"),
            SwapRegime::None => f.write_str("None"),
        }
    }
}

impl Serialize for SwapRegime {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SwapReport {
    pub regime: SwapRegime,
    pub reliable_outcomes: Vec<BasisLabel>,
    pub success_probability: f64,
    /// `p′ = mnℓ*` and `ℓ = mnp′*`
    pub condition_1: bool,
    /// `nℓ′ = mp*` and `np = mℓ′*`
    pub condition_2: bool,
}

pub fn classify_swap(params: SwapParams) -> Result<SwapReport> {
    let outcomes = swap_run(params)?;
    Ok(report_from(&params, &outcomes))
}

pub fn report_from(params: &SwapParams, outcomes: &[SwapOutcome; 4]) -> SwapReport {
    let reliable: Vec<&SwapOutcome> = outcomes.iter().filter(|o| o.reliable).collect();
    let regime = match reliable.len() {
        4 => SwapRegime::Deterministic,
        0 => SwapRegime::None,
        k => SwapRegime::Probabilistic(k as u8),
    };
    let SwapParams {
        m,
        n,
        ell,
        p,
        ell_prime,
        p_prime,
    } = *params;
    let mn = m * n;
    SwapReport {
        regime,
        reliable_outcomes: reliable.iter().map(|o| o.label).collect(),
        success_probability: reliable.iter().map(|o| o.probability).sum(),
        condition_1: close(p_prime, mn * ell.conj()) && close(ell, mn * p_prime.conj()),
        condition_2: close(n * ell_prime, m * p.conj()) && close(n * p, m * ell_prime.conj()),
    }
}

fn close(a: Complex, b: Complex) -> bool {
    (a - b).norm() <= TOL_REL * a.norm().max(b.norm()).max(1.0)
}
