//! The two-parameter family of entangled two-qubit bases and the resource
//! states built from it.
//!
//! ```text
//! |φ⁺_ℓ⟩ = L (|00⟩ + ℓ|11⟩)      |ψ⁺_p⟩ = P (|01⟩ + p|10⟩)
//! |φ⁻_ℓ⟩ = L (ℓ*|00⟩ − |11⟩)     |ψ⁻_p⟩ = P (p*|01⟩ − |10⟩)
//! ```
//!
//! with `L = 1/√(1+|ℓ|²)` and `P = 1/√(1+|p|²)`. `ℓ = p = 0` is the
//! computational basis and `ℓ = p = 1` the Bell basis.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{is_finite, Complex, ONE, ZERO};
use crate::qcore::{make_state, PureState};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BasisLabel {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BasisLabel {
    pub const ALL: [BasisLabel; 4] = [
        BasisLabel::PhiPlus,
        BasisLabel::PhiMinus,
        BasisLabel::PsiPlus,
        BasisLabel::PsiMinus,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BasisLabel::PhiPlus => "PhiPlus",
            BasisLabel::PhiMinus => "PhiMinus",
            BasisLabel::PsiPlus => "PsiPlus",
            BasisLabel::PsiMinus => "PsiMinus",
        }
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisParams {
    pub ell: Complex,
    pub p: Complex,
}

impl BasisParams {
    pub fn new(ell: Complex, p: Complex) -> Self {
        BasisParams { ell, p }
    }

    pub fn bell() -> Self {
        BasisParams::new(ONE, ONE)
    }

    pub fn computational() -> Self {
        BasisParams::new(ZERO, ZERO)
    }
}

/// `1/√(1+|c|²)`
pub fn norm_factor(c: Complex) -> f64 {
    1.0 / (1.0 + c.norm_sqr()).sqrt()
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntangledBasis {
    params: BasisParams,
    vectors: [[Complex; 4]; 4],
}

impl EntangledBasis {
    pub fn params(&self) -> BasisParams {
        self.params
    }

    /// Amplitudes over `|00⟩, |01⟩, |10⟩, |11⟩`.
    pub fn amps(&self, label: BasisLabel) -> &[Complex; 4] {
        &self.vectors[label.index()]
    }

    /// The basis vector as a state on the given pair of qubits.
    pub fn state(&self, label: BasisLabel, pair: [&str; 2]) -> Result<PureState> {
        make_state(&pair, self.amps(label).to_vec())
    }

    /// Coefficients `⟨b_k|x⟩` of a two-qubit amplitude vector in this basis.
    pub fn coefficients(&self, amps: &[Complex]) -> [Complex; 4] {
        let mut out = [ZERO; 4];
        for (o, v) in out.iter_mut().zip(&self.vectors) {
            *o = v.iter().zip(amps).map(|(b, x)| b.conj() * x).sum();
        }
        out
    }
}

pub fn general_basis(params: BasisParams) -> Result<EntangledBasis> {
    if !is_finite(params.ell) {
        return Err(Error::NonFinite("ell"));
    }
    if !is_finite(params.p) {
        return Err(Error::NonFinite("p"));
    }
    let BasisParams { ell, p } = params;
    let l = norm_factor(ell);
    let pp = norm_factor(p);
    let vectors = [
        [ONE * l, ZERO, ZERO, ell * l],
        [ell.conj() * l, ZERO, ZERO, -ONE * l],
        [ZERO, ONE * pp, p * pp, ZERO],
        [ZERO, p.conj() * pp, -ONE * pp, ZERO],
    ];
    Ok(EntangledBasis { params, vectors })
}

/// `N(|00⟩ + n|11⟩)` on qubits `1, 2`.
pub fn resource_state(n: Complex) -> Result<PureState> {
    resource_state_on(n, ["1", "2"])
}

pub fn resource_state_on(n: Complex, pair: [&str; 2]) -> Result<PureState> {
    if !is_finite(n) {
        return Err(Error::NonFinite("n"));
    }
    make_state(&pair, vec![ONE, ZERO, ZERO, n])
}

/// Entanglement in ebits of `|φ^±_c⟩` (equivalently `|ψ^±_c⟩`, or the
/// resource state with parameter `c`).
pub fn basis_entropy(c: Complex) -> f64 {
    let w0 = 1.0 / (1.0 + c.norm_sqr());
    let w1 = w0 * c.norm_sqr();
    [w0, w1]
        .into_iter()
        .filter(|&w| w > 0.0)
        .map(|w| -w * w.log2())
        .sum()
}

/// A computational basis state of two qubits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Computational {
    C00,
    C01,
    C10,
    C11,
}

impl Computational {
    pub const ALL: [Computational; 4] = [
        Computational::C00,
        Computational::C01,
        Computational::C10,
        Computational::C11,
    ];

    pub fn index(self) -> usize {
        self as usize
    }
}

/// A computational basis vector written as `a|first⟩ + b|second⟩` in the
/// entangled basis.
pub fn expand_computational(x: Computational, params: BasisParams) -> [(BasisLabel, Complex); 2] {
    use BasisLabel::*;
    let BasisParams { ell, p } = params;
    let l = norm_factor(ell);
    let pp = norm_factor(p);
    match x {
        Computational::C00 => [(PhiPlus, ONE * l), (PhiMinus, ell * l)],
        Computational::C11 => [(PhiPlus, ell.conj() * l), (PhiMinus, -ONE * l)],
        Computational::C01 => [(PsiPlus, ONE * pp), (PsiMinus, p * pp)],
        Computational::C10 => [(PsiPlus, p.conj() * pp), (PsiMinus, -ONE * pp)],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, real};
    use crate::qcore::{entropy, reduced_density};

    const R2: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn assert_vec(got: &[Complex; 4], want: [Complex; 4]) {
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).norm() < 1e-15, "{got:?} vs {want:?}");
        }
    }

    #[test]
    fn computational_and_bell_limits() {
        let b = general_basis(BasisParams::computational()).unwrap();
        assert_vec(b.amps(BasisLabel::PhiPlus), [ONE, ZERO, ZERO, ZERO]);
        assert_vec(b.amps(BasisLabel::PhiMinus), [ZERO, ZERO, ZERO, -ONE]);
        assert_vec(b.amps(BasisLabel::PsiPlus), [ZERO, ONE, ZERO, ZERO]);
        assert_vec(b.amps(BasisLabel::PsiMinus), [ZERO, ZERO, -ONE, ZERO]);

        let h = real(R2);
        let b = general_basis(BasisParams::bell()).unwrap();
        assert_vec(b.amps(BasisLabel::PhiPlus), [h, ZERO, ZERO, h]);
        assert_vec(b.amps(BasisLabel::PhiMinus), [h, ZERO, ZERO, -h]);
        assert_vec(b.amps(BasisLabel::PsiPlus), [ZERO, h, h, ZERO]);
        assert_vec(b.amps(BasisLabel::PsiMinus), [ZERO, h, -h, ZERO]);
    }

    #[test]
    fn gram_matrix_is_identity() {
        let b = general_basis(BasisParams::new(real(2.0), c(0.0, 1.0))).unwrap();
        let l = 1.0 / 5f64.sqrt();
        assert!((b.amps(BasisLabel::PhiPlus)[0].re - l).abs() < 1e-15);
        assert!((b.amps(BasisLabel::PsiPlus)[1].re - R2).abs() < 1e-15);
        for i in BasisLabel::ALL {
            let g = b.coefficients(b.amps(i));
            for j in BasisLabel::ALL {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((g[j.index()] - real(want)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn non_finite_rejected() {
        let bad = BasisParams::new(c(f64::NAN, 0.0), ONE);
        assert_eq!(general_basis(bad), Err(Error::NonFinite("ell")));
        assert_eq!(
            resource_state(c(f64::INFINITY, 0.0)),
            Err(Error::NonFinite("n"))
        );
    }

    #[test]
    fn resource_states() {
        let s = resource_state(ONE).unwrap();
        assert_vec(
            &s.amps().try_into().unwrap(),
            [real(R2), ZERO, ZERO, real(R2)],
        );
        let s = resource_state(ZERO).unwrap();
        assert_vec(&s.amps().try_into().unwrap(), [ONE, ZERO, ZERO, ZERO]);
        let s = resource_state(real(0.5)).unwrap();
        let n = 1.0 / 1.25f64.sqrt();
        assert_vec(
            &s.amps().try_into().unwrap(),
            [real(n), ZERO, ZERO, real(0.5 * n)],
        );
        assert!((s.amps()[0].re - 0.894_427_191).abs() < 1e-9);
        assert!((s.amps()[3].re - 0.447_213_595).abs() < 1e-9);
    }

    #[test]
    fn entropy_formula() {
        assert!((basis_entropy(ONE) - 1.0).abs() < 1e-15);
        assert_eq!(basis_entropy(ZERO), 0.0);
        let e = basis_entropy(real(0.5));
        assert!((e - 0.721_928_094_887_362_3).abs() < 1e-12);
        let b = general_basis(BasisParams::new(real(0.5), ZERO)).unwrap();
        let v = b.state(BasisLabel::PhiMinus, ["x", "y"]).unwrap();
        let direct = entropy(&reduced_density(&v, &["x"]).unwrap());
        assert!((direct - e).abs() < 1e-9);
    }

    #[test]
    fn inversion_relations() {
        use BasisLabel::*;
        let ell = c(0.3, -1.2);
        let p = c(2.0, 0.5);
        let params = BasisParams::new(ell, p);
        let l = norm_factor(ell);
        let pp = norm_factor(p);
        assert_eq!(
            expand_computational(Computational::C00, params),
            [(PhiPlus, ONE * l), (PhiMinus, ell * l)]
        );
        assert_eq!(
            expand_computational(Computational::C10, params),
            [(PsiPlus, p.conj() * pp), (PsiMinus, -ONE * pp)]
        );
        assert_eq!(
            expand_computational(Computational::C00, BasisParams::computational()),
            [(PhiPlus, ONE), (PhiMinus, ZERO)]
        );
    }
}
