//! Dense statevector simulation kernel.
//!
//! Qubit `q` corresponds to bit `q` of the amplitude index, so qubit 0 is
//! the least-significant bit. States are kept explicitly normalized; the
//! measurement primitive projects *and removes* the measured qubit so that
//! pattern execution shrinks the state as sites are consumed.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

/// Default cap on simulated qubits (~16 MB of amplitudes).
pub const QUBIT_LIMIT: usize = 20;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Single-qubit measurement basis.
///
/// `X` and `Y` are shorthands for XY-plane angles 0 and π/2; `Xy(φ)`
/// measures in the basis (|0⟩ ± e^{iφ}|1⟩)/√2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Basis {
    X,
    Y,
    Z,
    Xy(f64),
}

impl Basis {
    /// Eigenvectors as columns: `[v0, v1]`, outcome 0 ↔ `v0`.
    pub fn eigenvectors(self) -> [[Complex64; 2]; 2] {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            Basis::Z => [[ONE, ZERO], [ZERO, ONE]],
            Basis::X | Basis::Y | Basis::Xy(_) => {
                let phi = match self {
                    Basis::X => 0.0,
                    Basis::Y => std::f64::consts::FRAC_PI_2,
                    Basis::Xy(phi) => phi,
                    Basis::Z => unreachable!(),
                };
                let e = Complex64::from_polar(s, phi);
                [
                    [Complex64::new(s, 0.0), Complex64::new(s, 0.0)],
                    [e, -e],
                ]
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn check_limit(qubits: usize, limit: usize) -> Result<()> {
        if qubits > limit {
            return Err(Error::Capacity { qubits, limit });
        }
        Ok(())
    }

    /// Computational basis state; `bits[q]` is the value of qubit `q`.
    pub fn basis_state(bits: &[bool]) -> Self {
        let n = bits.len();
        let mut idx = 0usize;
        for (q, &b) in bits.iter().enumerate() {
            if b {
                idx |= 1 << q;
            }
        }
        let mut amps = vec![ZERO; 1 << n];
        amps[idx] = ONE;
        StateVector { num_qubits: n, amps }
    }

    pub fn zero_state(n: usize) -> Self {
        Self::basis_state(&vec![false; n])
    }

    /// |+⟩^{⊗n}.
    pub fn plus_state(n: usize) -> Self {
        let amp = Complex64::new(1.0 / ((1usize << n) as f64).sqrt(), 0.0);
        StateVector {
            num_qubits: n,
            amps: vec![amp; 1 << n],
        }
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let n = amps.len();
        if n == 0 || n & (n - 1) != 0 {
            return Err(Error::InvalidParameter(format!(
                "amplitude vector length {n} is not a power of two"
            )));
        }
        Ok(StateVector {
            num_qubits: n.trailing_zeros() as usize,
            amps,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    /// Appends `extra` qubits in |+⟩ at the high positions.
    pub fn tensor_plus(&mut self, extra: usize) {
        if extra == 0 {
            return;
        }
        let scale = 1.0 / ((1usize << extra) as f64).sqrt();
        let old = std::mem::take(&mut self.amps);
        let mut amps = Vec::with_capacity(old.len() << extra);
        for _ in 0..1usize << extra {
            amps.extend(old.iter().map(|a| a * scale));
        }
        self.amps = amps;
        self.num_qubits += extra;
    }

    /// Reorders qubits: new qubit `j` is old qubit `perm[j]`.
    pub fn permute(&mut self, perm: &[usize]) {
        assert_eq!(perm.len(), self.num_qubits);
        let mut amps = vec![ZERO; self.amps.len()];
        for (new_idx, slot) in amps.iter_mut().enumerate() {
            let mut old_idx = 0usize;
            for (j, &p) in perm.iter().enumerate() {
                if new_idx >> j & 1 == 1 {
                    old_idx |= 1 << p;
                }
            }
            *slot = self.amps[old_idx];
        }
        self.amps = amps;
    }

    pub fn apply_x(&mut self, q: usize) {
        let bit = 1usize << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                self.amps.swap(i, i | bit);
            }
        }
    }

    pub fn apply_z(&mut self, q: usize) {
        let bit = 1usize << q;
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & bit != 0 {
                *a = -*a;
            }
        }
    }

    pub fn apply_h(&mut self, q: usize) {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bit = 1usize << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let a0 = self.amps[i];
                let a1 = self.amps[i | bit];
                self.amps[i] = (a0 + a1) * s;
                self.amps[i | bit] = (a0 - a1) * s;
            }
        }
    }

    pub fn apply_cz(&mut self, a: usize, b: usize) {
        let mask = 1usize << a | 1usize << b;
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if i & mask == mask {
                *amp = -*amp;
            }
        }
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) {
        let cbit = 1usize << control;
        let tbit = 1usize << target;
        for i in 0..self.amps.len() {
            if i & cbit != 0 && i & tbit == 0 {
                self.amps.swap(i, i | tbit);
            }
        }
    }

    pub fn apply_toffoli(&mut self, c1: usize, c2: usize, target: usize) {
        let cmask = 1usize << c1 | 1usize << c2;
        let tbit = 1usize << target;
        for i in 0..self.amps.len() {
            if i & cmask == cmask && i & tbit == 0 {
                self.amps.swap(i, i | tbit);
            }
        }
    }

    pub fn apply_ccz(&mut self, a: usize, b: usize, c: usize) {
        let mask = 1usize << a | 1usize << b | 1usize << c;
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if i & mask == mask {
                *amp = -*amp;
            }
        }
    }

    /// Applies a 2x2 matrix `m` (row-major) to qubit `q`.
    pub fn apply_single(&mut self, q: usize, m: [[Complex64; 2]; 2]) {
        let bit = 1usize << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let a0 = self.amps[i];
                let a1 = self.amps[i | bit];
                self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[i | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            for a in &mut self.amps {
                *a /= n;
            }
        }
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        assert_eq!(self.num_qubits, other.num_qubits);
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// |⟨self|other⟩|² — global-phase-insensitive overlap.
    pub fn fidelity(&self, other: &StateVector) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// Probability of outcome 0 when measuring qubit `q` in `basis`.
    pub fn outcome_probability(&self, q: usize, basis: Basis) -> f64 {
        let v = basis.eigenvectors();
        let bit = 1usize << q;
        let mut p0 = 0.0;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let proj = v[0][0].conj() * self.amps[i] + v[1][0].conj() * self.amps[i | bit];
                p0 += proj.norm_sqr();
            }
        }
        p0
    }

    /// Measures qubit `q` in `basis`, removes it from the state, and
    /// renormalizes. The outcome is forced when given, otherwise sampled
    /// from the Born rule. Returns `(outcome, probability_of_outcome)`.
    pub fn measure_remove<R: Rng + ?Sized>(
        &mut self,
        q: usize,
        basis: Basis,
        forced: Option<u8>,
        rng: &mut R,
    ) -> Result<(u8, f64)> {
        let v = basis.eigenvectors();
        let bit = 1usize << q;
        let low_mask = bit - 1;
        let project = |outcome: usize, amps: &[Complex64]| -> Vec<Complex64> {
            let mut out = vec![ZERO; amps.len() >> 1];
            for (j, slot) in out.iter_mut().enumerate() {
                let base = (j & low_mask) | ((j & !low_mask) << 1);
                *slot = v[0][outcome].conj() * amps[base]
                    + v[1][outcome].conj() * amps[base | bit];
            }
            out
        };
        let p0: f64 = project(0, &self.amps).iter().map(|a| a.norm_sqr()).sum();
        let outcome = match forced {
            Some(o) => o & 1,
            None => {
                if rng.gen::<f64>() < p0 {
                    0
                } else {
                    1
                }
            }
        };
        let prob = if outcome == 0 { p0 } else { 1.0 - p0 };
        if prob < 1e-12 {
            return Err(Error::ImpossibleBranch {
                site: q,
                outcome,
            });
        }
        let mut new = project(outcome as usize, &self.amps);
        let scale = 1.0 / prob.sqrt();
        for a in &mut new {
            *a *= scale;
        }
        self.amps = new;
        self.num_qubits -= 1;
        Ok((outcome, prob))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn plus_state_measured_in_x_is_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut s = StateVector::plus_state(1);
        let (outcome, prob) = s.measure_remove(0, Basis::X, None, &mut rng).unwrap();
        assert_eq!(outcome, 0);
        assert!((prob - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_state_in_x_is_unbiased() {
        let s = StateVector::zero_state(1);
        let p0 = s.outcome_probability(0, Basis::X);
        assert!((p0 - 0.5).abs() < 1e-12);
    }

    #[test]
    fn forced_impossible_outcome_errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut s = StateVector::plus_state(1);
        let err = s.measure_remove(0, Basis::X, Some(1), &mut rng);
        assert!(matches!(err, Err(Error::ImpossibleBranch { .. })));
    }

    #[test]
    fn permute_swaps_qubits() {
        // |01⟩ (qubit 0 = 1, qubit 1 = 0), swap → |10⟩.
        let mut s = StateVector::basis_state(&[true, false]);
        s.permute(&[1, 0]);
        assert!((s.amplitude(2).re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn measure_remove_preserves_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut s = StateVector::plus_state(3);
        s.apply_cz(0, 1);
        s.apply_cz(1, 2);
        let (_, prob) = s.measure_remove(1, Basis::Xy(0.3), None, &mut rng).unwrap();
        assert!(prob > 0.0);
        assert!((s.norm() - 1.0).abs() < 1e-12);
        assert_eq!(s.num_qubits(), 2);
    }
}
