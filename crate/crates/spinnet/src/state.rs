//! Pure states and single-qubit inputs.

use ndarray::Array1;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::tol;

/// A normalized complex vector in the computational basis.
///
/// Basis ordering convention (shared by the whole crate): site 1 is the
/// leftmost (most significant) tensor factor, and |0⟩ on a site is the
/// m = +1/2 eigenstate of S^z. The basis index of a bit string is its value
/// read as a binary number, e.g. |011⟩ has index 3 on three spins.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amps: Array1<C64>,
}

impl PureState {
    /// Wrap an amplitude vector, requiring unit 2-norm within
    /// [`tol::STATE_NORM`].
    pub fn new(amps: Array1<C64>) -> Result<Self> {
        let n = norm(&amps);
        if (n - 1.0).abs() > tol::STATE_NORM {
            return Err(Error::NotNormalized(n));
        }
        Ok(Self { amps })
    }

    /// Wrap and normalize an amplitude vector.
    pub fn normalized(amps: Array1<C64>) -> Result<Self> {
        let n = norm(&amps);
        if n == 0.0 {
            return Err(Error::NotNormalized(0.0));
        }
        Ok(Self { amps: amps.mapv(|a| a / n) })
    }

    /// Used internally where the producing operation preserves norm.
    pub(crate) fn from_amplitudes_unchecked(amps: Array1<C64>) -> Result<Self> {
        Ok(Self { amps })
    }

    /// Computational basis state with the given index.
    pub fn basis_state(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::InvalidParameter(format!(
                "basis index {index} out of range for dim {dim}"
            )));
        }
        let mut amps = Array1::zeros(dim);
        amps[index] = C64::new(1.0, 0.0);
        Ok(Self { amps })
    }

    /// Basis state from a bit string like "010", site 1 leftmost.
    pub fn from_bits(bits: &str) -> Result<Self> {
        let n = bits.len();
        let mut index = 0usize;
        for c in bits.chars() {
            index <<= 1;
            match c {
                '0' => {}
                '1' => index |= 1,
                _ => {
                    return Err(Error::InvalidParameter(format!(
                        "bit string must contain only 0/1, got {bits:?}"
                    )))
                }
            }
        }
        Self::basis_state(1 << n, index)
    }

    /// Product state on `n` spins: the given qubit at `site` (1-based), every
    /// other spin in |0⟩.
    pub fn qubit_at_site(n: usize, site: usize, q: &Qubit) -> Result<Self> {
        if site == 0 || site > n {
            return Err(Error::SiteOutOfRange { site, n });
        }
        let dim = 1usize << n;
        let flip = 1usize << (n - site);
        let mut amps = Array1::zeros(dim);
        amps[0] = q.zero;
        amps[flip] = q.one;
        Self::new(amps)
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &Array1<C64> {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amps)
    }

    /// Inner product ⟨self|other⟩.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}

fn norm(amps: &Array1<C64>) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// Pure-state fidelity |⟨a|b⟩|, the trace-distance measure specialized to
/// pure states; invariant under a global phase on either argument.
pub fn state_fidelity(a: &PureState, b: &PureState) -> Result<f64> {
    Ok(a.inner(b)?.norm())
}

/// A single-qubit state α|0⟩ + β|1⟩ used as transport input.
#[derive(Clone, Copy, Debug)]
pub struct Qubit {
    pub zero: C64,
    pub one: C64,
}

impl Qubit {
    pub fn new(zero: C64, one: C64) -> Result<Self> {
        let n = (zero.norm_sqr() + one.norm_sqr()).sqrt();
        if (n - 1.0).abs() > tol::STATE_NORM {
            return Err(Error::NotNormalized(n));
        }
        Ok(Self { zero, one })
    }

    pub fn ket0() -> Self {
        Self { zero: C64::new(1.0, 0.0), one: C64::new(0.0, 0.0) }
    }

    pub fn ket1() -> Self {
        Self { zero: C64::new(0.0, 0.0), one: C64::new(1.0, 0.0) }
    }

    /// (|0⟩ + |1⟩)/√2
    pub fn plus() -> Self {
        let r = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self { zero: r, one: r }
    }

    /// (|0⟩ - |1⟩)/√2
    pub fn minus() -> Self {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        Self { zero: C64::new(r, 0.0), one: C64::new(-r, 0.0) }
    }

    /// cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩
    pub fn bloch(theta: f64, phi: f64) -> Self {
        Self {
            zero: C64::new((theta / 2.0).cos(), 0.0),
            one: C64::from_polar((theta / 2.0).sin(), phi),
        }
    }
}
