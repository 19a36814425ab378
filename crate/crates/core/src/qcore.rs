//! Pure states over small labelled qubit registers.
//!
//! Amplitudes are indexed so that the first label is the most significant
//! bit: for labels `[a, 1, 2]` the amplitude of `|x_a x_1 x_2⟩` sits at index
//! `4·x_a + 2·x_1 + x_2`.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{inner, is_finite, Complex, Mat2, ZERO};
use crate::tol::{TOL_NORM, TOL_UNITARY, TOL_ZERO_NORM};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PureState {
    labels: Vec<String>,
    amps: Vec<Complex>,
}

/// Normalizes `amps` and attaches `labels`.
pub fn make_state<S: AsRef<str>>(labels: &[S], amps: Vec<Complex>) -> Result<PureState> {
    let labels: Vec<String> = labels.iter().map(|s| s.as_ref().to_owned()).collect();
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            return Err(Error::LabelCollision(l.clone()));
        }
    }
    let expected = 1usize << labels.len();
    if amps.len() != expected {
        return Err(Error::Shape {
            expected,
            got: amps.len(),
        });
    }
    if !amps.iter().all(|&z| is_finite(z)) {
        return Err(Error::NonFinite("amplitude"));
    }
    let norm_sqr: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
    if norm_sqr < TOL_ZERO_NORM {
        return Err(Error::Normalization(norm_sqr));
    }
    let inv = 1.0 / norm_sqr.sqrt();
    Ok(PureState {
        labels,
        amps: amps.into_iter().map(|z| z * inv).collect(),
    })
}

impl PureState {
    /// Computational basis state `|index⟩`.
    pub fn basis<S: AsRef<str>>(labels: &[S], index: usize) -> Result<Self> {
        let mut amps = vec![ZERO; 1 << labels.len()];
        if index >= amps.len() {
            return Err(Error::Shape {
                expected: amps.len(),
                got: index,
            });
        }
        amps[index] = Complex::new(1.0, 0.0);
        make_state(labels, amps)
    }

    /// Single qubit `α|0⟩ + β|1⟩`, normalized.
    pub fn qubit(label: &str, alpha: Complex, beta: Complex) -> Result<Self> {
        make_state(&[label], vec![alpha, beta])
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn amps(&self) -> &[Complex] {
        &self.amps
    }

    pub fn num_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    fn position(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_owned()))
    }

    /// Same state with the labels renamed positionally.
    pub fn relabel<S: AsRef<str>>(&self, labels: &[S]) -> Result<Self> {
        if labels.len() != self.labels.len() {
            return Err(Error::Shape {
                expected: self.labels.len(),
                got: labels.len(),
            });
        }
        make_state(labels, self.amps.clone())
    }

    /// Same state with the register reordered to `order` (a permutation of
    /// the current labels).
    pub fn permuted<S: AsRef<str>>(&self, order: &[S]) -> Result<Self> {
        let k = self.labels.len();
        let names: Vec<&str> = order.iter().map(|s| s.as_ref()).collect();
        if names.len() != k || !same_label_set(&self.labels, &names) {
            return Err(Error::LabelMismatch(
                self.labels.clone(),
                names.iter().map(|s| s.to_string()).collect(),
            ));
        }
        // shift of each old qubit's bit within the new index
        let shifts: Vec<usize> = self
            .labels
            .iter()
            .map(|l| k - 1 - names.iter().position(|n| n == l).unwrap())
            .collect();
        let mut amps = vec![ZERO; self.amps.len()];
        for (old, &a) in self.amps.iter().enumerate() {
            let mut new = 0;
            for (pos, shift) in shifts.iter().enumerate() {
                let bit = (old >> (k - 1 - pos)) & 1;
                new |= bit << shift;
            }
            amps[new] = a;
        }
        Ok(PureState {
            labels: names.iter().map(|s| s.to_string()).collect(),
            amps,
        })
    }
}

fn same_label_set<A: AsRef<str>, B: AsRef<str>>(a: &[A], b: &[B]) -> bool {
    a.len() == b.len() && a.iter().all(|x| b.iter().any(|y| y.as_ref() == x.as_ref()))
}

/// Kronecker product, register order `s1` then `s2`.
pub fn tensor(s1: &PureState, s2: &PureState) -> Result<PureState> {
    if let Some(l) = s1.labels.iter().find(|l| s2.labels.contains(l)) {
        return Err(Error::LabelCollision(l.clone()));
    }
    let mut labels = s1.labels.clone();
    labels.extend(s2.labels.iter().cloned());
    let amps = s1
        .amps
        .iter()
        .flat_map(|&x| s2.amps.iter().map(move |&y| x * y))
        .collect();
    Ok(PureState { labels, amps })
}

/// Applies a single-qubit unitary to `target`.
pub fn apply_unitary(s: &PureState, target: &str, u: &Mat2) -> Result<PureState> {
    let dev = u.gram().max_abs_diff(&Mat2::identity());
    if dev > TOL_UNITARY || !u.is_finite() {
        return Err(Error::NotUnitary(dev));
    }
    let pos = s.position(target)?;
    let bit = 1 << (s.num_qubits() - 1 - pos);
    let mut amps = s.amps.clone();
    for i in 0..amps.len() {
        if i & bit == 0 {
            let (a0, a1) = (s.amps[i], s.amps[i | bit]);
            let [b0, b1] = u.apply([a0, a1]);
            amps[i] = b0;
            amps[i | bit] = b1;
        }
    }
    Ok(PureState {
        labels: s.labels.clone(),
        amps,
    })
}

/// `|⟨a|b⟩|²`; `b` is reordered to `a`'s register first.
pub fn fidelity(a: &PureState, b: &PureState) -> Result<f64> {
    if !same_label_set(&a.labels, &b.labels) {
        return Err(Error::LabelMismatch(a.labels.clone(), b.labels.clone()));
    }
    let b = b.permuted(&a.labels)?;
    Ok(inner(&a.amps, &b.amps).norm_sqr().min(1.0))
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    entries: Vec<Complex>,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity within `1e-10`.
    pub fn new(dim: usize, entries: Vec<Complex>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::Shape {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        let rho = DensityMatrix { dim, entries };
        let herm = (0..dim)
            .flat_map(|i| (0..dim).map(move |j| (i, j)))
            .map(|(i, j)| (rho.get(i, j) - rho.get(j, i).conj()).norm())
            .fold(0.0, f64::max);
        let trace: f64 = (0..dim).map(|i| rho.get(i, i).re).sum();
        if herm > TOL_NORM || (trace - 1.0).abs() > TOL_NORM {
            return Err(Error::BadInput(format!(
                "not a density matrix (hermiticity {herm:e}, trace {trace})"
            )));
        }
        if rho.eigenvalues().iter().any(|&l| l < -TOL_NORM) {
            return Err(Error::BadInput("density matrix is not positive".into()));
        }
        Ok(rho)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Complex] {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i).re).sum()
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut eig = if self.dim == 2 {
            let a = self.get(0, 0).re;
            let d = self.get(1, 1).re;
            let b = self.get(0, 1);
            let mean = 0.5 * (a + d);
            let half_gap = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
            vec![mean + half_gap, mean - half_gap]
        } else {
            let m = DMatrix::from_row_slice(self.dim, self.dim, &self.entries);
            m.symmetric_eigenvalues().iter().copied().collect()
        };
        eig.sort_by(|x, y| y.total_cmp(x));
        eig
    }
}

/// Reduced density matrix of the qubits in `keep`, in the order given.
pub fn reduced_density<S: AsRef<str>>(s: &PureState, keep: &[S]) -> Result<DensityMatrix> {
    let keep: Vec<&str> = keep.iter().map(|k| k.as_ref()).collect();
    let bad = || Error::BadSubset(keep.iter().map(|k| k.to_string()).collect());
    if keep.is_empty() || keep.len() >= s.num_qubits() {
        return Err(bad());
    }
    for (i, k) in keep.iter().enumerate() {
        if keep[..i].contains(k) || !s.labels.iter().any(|l| l == k) {
            return Err(bad());
        }
    }
    let mut order: Vec<&str> = keep.clone();
    order.extend(
        s.labels
            .iter()
            .map(String::as_str)
            .filter(|l| !keep.contains(l)),
    );
    let p = s.permuted(&order)?;
    let dim = 1 << keep.len();
    let rest = p.amps.len() / dim;
    let mut entries = vec![ZERO; dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            entries[i * dim + j] = (0..rest)
                .map(|r| p.amps[i * rest + r] * p.amps[j * rest + r].conj())
                .sum();
        }
    }
    Ok(DensityMatrix { dim, entries })
}

/// Von Neumann entropy in ebits, with `0·log 0 = 0`.
pub fn entropy(d: &DensityMatrix) -> f64 {
    let h: f64 = d
        .eigenvalues()
        .into_iter()
        .filter(|&l| l > 0.0)
        .map(|l| -l * l.log2())
        .sum();
    h.clamp(0.0, (d.dim as f64).log2())
}

/// Schmidt decomposition `Σ_k c_k |u_k⟩|v_k⟩` of a two-qubit state.
///
/// `local[0]` holds the `u_k` of the first qubit as columns, `local[1]` the
/// `v_k` of the second.
#[derive(Clone, Debug)]
pub struct SchmidtForm {
    pub coeffs: [f64; 2],
    pub local: [Mat2; 2],
}

impl SchmidtForm {
    /// Amplitudes of `Σ_k c_k |u_k⟩|v_k⟩`.
    pub fn reconstruct(&self) -> [Complex; 4] {
        let mut out = [ZERO; 4];
        for k in 0..2 {
            let u = self.local[0].column(k);
            let v = self.local[1].column(k);
            for i in 0..2 {
                for j in 0..2 {
                    out[2 * i + j] += u[i] * v[j] * self.coeffs[k];
                }
            }
        }
        out
    }
}

pub fn schmidt(s: &PureState) -> Result<SchmidtForm> {
    if s.num_qubits() != 2 {
        return Err(Error::Shape {
            expected: 4,
            got: s.amps.len(),
        });
    }
    let a = &s.amps;
    let svd = Mat2::new(a[0], a[1], a[2], a[3]).svd();
    // A = U Σ V†  ⇒  v_k = conj(V[:, k])
    let v = svd.v.0;
    let v_conj = Mat2::new(
        v[0][0].conj(),
        v[0][1].conj(),
        v[1][0].conj(),
        v[1][1].conj(),
    );
    Ok(SchmidtForm {
        coeffs: svd.singular,
        local: [svd.u, v_conj],
    })
}

/// Haar-random single-qubit amplitudes `(α, β)`.
pub fn haar_qubit<R: Rng + ?Sized>(rng: &mut R) -> (Complex, Complex) {
    let v = random_amps(2, rng);
    (v[0], v[1])
}

/// Haar-random normalized amplitude vector of length `len`.
pub fn random_amps<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<Complex> {
    loop {
        let v: Vec<Complex> = (0..len)
            .map(|_| Complex::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}
