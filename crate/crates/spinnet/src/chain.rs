//! Resonant end-to-end transport in a uniformly coupled chain with end fields.

use crate::error::{Error, Result};
use crate::evolution::evolve_state;
use crate::hamiltonian::{build_total, HamiltonianKind};
use crate::network::SpinNetwork;
use crate::operator::Operator;
use crate::state::{state_fidelity, PureState, Qubit};

/// Uniformly coupled open chain with a Zeeman field on sites 1 and n only.
#[derive(Clone, Copy, Debug)]
pub struct ChainSpec {
    pub n: usize,
    /// Uniform coupling J, rad/s.
    pub coupling: f64,
    /// End field h on sites 1 and n, rad/s.
    pub end_field: f64,
}

impl ChainSpec {
    pub fn new(n: usize, coupling: f64, end_field: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParameter(format!("chain length {n} < 3")));
        }
        if coupling == 0.0 || !coupling.is_finite() {
            return Err(Error::InvalidParameter(format!("coupling J = {coupling}")));
        }
        if !end_field.is_finite() {
            return Err(Error::InvalidParameter(format!("end field h = {end_field}")));
        }
        Ok(Self { n, coupling, end_field })
    }

    pub fn network(&self) -> SpinNetwork {
        SpinNetwork::chain(self.n, self.coupling, self.end_field)
            .expect("validated chain parameters")
    }

    pub fn hamiltonian(&self) -> Operator {
        build_total(&self.network(), HamiltonianKind::xy()).expect("chain fits dense cap")
    }
}

/// Closed-form eigensystem of the 3-spin chain restricted to the
/// single-excitation basis (|001⟩, |010⟩, |100⟩), plus the expansion
/// coefficients of the initial state |100⟩ over the eigenvectors.
#[derive(Clone, Debug)]
pub struct Chain3Eigensystem {
    /// λ1 = 0, λ2 = (h - √(h²+2J²))/2, λ3 = (h + √(h²+2J²))/2.
    pub eigenvalues: [f64; 3],
    /// Unnormalized eigenvectors as rows of the basis above.
    pub eigenvectors: [[f64; 3]; 3],
    /// c1, c2, c3 with c1 v1 + c2 v2 + c3 v3 = (0, 0, 1)ᵀ.
    pub coefficients: [f64; 3],
}

pub fn chain3_eigensystem(end_field: f64, coupling: f64) -> Result<Chain3Eigensystem> {
    if coupling == 0.0 {
        return Err(Error::InvalidParameter("J must be nonzero".into()));
    }
    let h = end_field;
    let j = coupling;
    let s = (h * h + 2.0 * j * j).sqrt();
    let l2 = 0.5 * (h - s);
    let l3 = 0.5 * (h + s);
    Ok(Chain3Eigensystem {
        eigenvalues: [0.0, l2, l3],
        eigenvectors: [
            [-1.0, 0.0, 1.0],
            [1.0, (h - s) / j, 1.0],
            [1.0, (h + s) / j, 1.0],
        ],
        coefficients: [0.5, (h + s) / (4.0 * s), (-h + s) / (4.0 * s)],
    })
}

/// A time at which both transport phases sit at -1 within ε.
#[derive(Clone, Copy, Debug)]
pub struct ResonanceCandidate {
    pub t: f64,
    /// max(cos λ2 t, cos λ3 t) at the candidate; -1 is perfect.
    pub worst_cosine: f64,
}

/// Scan cos(λ2 t) and cos(λ3 t) over a uniform grid and report the times
/// where both are within `epsilon` of -1 (runs of passing grid points are
/// merged into one candidate at their best point).
pub fn resonance_time_scan(
    end_field: f64,
    coupling: f64,
    t_max: f64,
    dt: f64,
    epsilon: f64,
) -> Result<Vec<ResonanceCandidate>> {
    // λ2, λ3 straight from the closed form; at J = 0 one of them is 0 and
    // its cosine pins at +1, so the scan correctly reports no candidates.
    let s = (end_field * end_field + 2.0 * coupling * coupling).sqrt();
    let l2 = 0.5 * (end_field - s);
    let l3 = 0.5 * (end_field + s);
    let fast = l3.abs().max(l2.abs());
    let max_dt = if fast > 0.0 { std::f64::consts::PI / (10.0 * fast) } else { f64::INFINITY };
    if dt > max_dt {
        return Err(Error::ScanStepTooCoarse { dt, max_dt });
    }
    if !(t_max > 0.0) || !(dt > 0.0) || !(epsilon > 0.0) {
        return Err(Error::InvalidParameter("t_max, dt, epsilon must be positive".into()));
    }
    let steps = (t_max / dt).round() as usize;
    let mut candidates = Vec::new();
    let mut current: Option<ResonanceCandidate> = None;
    for k in 0..=steps {
        let t = k as f64 * dt;
        let worst = (l2 * t).cos().max((l3 * t).cos());
        if worst < -1.0 + epsilon {
            current = match current {
                Some(best) if best.worst_cosine <= worst => Some(best),
                _ => Some(ResonanceCandidate { t, worst_cosine: worst }),
            };
        } else if let Some(best) = current.take() {
            candidates.push(best);
        }
    }
    if let Some(best) = current {
        candidates.push(best);
    }
    Ok(candidates)
}

/// Transport fidelity from `src` to `dst`: prepare `input` at `src` with all
/// other spins in |0⟩, evolve for `t` under the chain Hamiltonian, and take
/// the full-state overlap with the target product state (`input` at `dst`).
/// No phase correction is applied, so the superposition inputs retain the
/// relative phase picked up between the excitation sectors.
pub fn transport_fidelity_sites(
    spec: &ChainSpec,
    input: &Qubit,
    src: usize,
    dst: usize,
    t: f64,
) -> Result<f64> {
    let h = spec.hamiltonian();
    let psi0 = PureState::qubit_at_site(spec.n, src, input)?;
    let target = PureState::qubit_at_site(spec.n, dst, input)?;
    let psi = evolve_state(&h, &psi0, t)?;
    state_fidelity(&target, &psi)
}

/// End-to-end transport fidelity (site 1 to site n).
pub fn transport_fidelity(spec: &ChainSpec, input: &Qubit, t: f64) -> Result<f64> {
    transport_fidelity_sites(spec, input, 1, spec.n, t)
}

/// End-to-end transport fidelity over a time grid, reusing one
/// eigendecomposition.
pub fn transport_series(spec: &ChainSpec, input: &Qubit, times: &[f64]) -> Result<Vec<f64>> {
    let h = spec.hamiltonian();
    let (evals, evecs) = h.eigh()?;
    let psi0 = PureState::qubit_at_site(spec.n, 1, input)?;
    let target = PureState::qubit_at_site(spec.n, spec.n, input)?;
    let modal0 = evecs.t().mapv(|v| v.conj()).dot(psi0.amplitudes());
    let modal_t = evecs.t().mapv(|v| v.conj()).dot(target.amplitudes());
    Ok(times
        .iter()
        .map(|&t| {
            let ov: num_complex::Complex64 = modal_t
                .iter()
                .zip(modal0.iter())
                .zip(evals.iter())
                .map(|((mt, m0), w)| {
                    mt.conj() * m0 * num_complex::Complex64::from_polar(1.0, -w * t)
                })
                .sum();
            ov.norm()
        })
        .collect())
}

/// Fidelity statistics over a uniform Bloch-sphere grid.
#[derive(Clone, Copy, Debug)]
pub struct BlochStats {
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

/// End-to-end transport fidelity statistics over an n_theta × n_phi grid of
/// input states, θ ∈ [0, π] inclusive and φ ∈ [0, 2π) exclusive (shifted by
/// `phi_offset`).
pub fn bloch_sweep(
    spec: &ChainSpec,
    t: f64,
    n_theta: usize,
    n_phi: usize,
    phi_offset: f64,
) -> Result<BlochStats> {
    if n_theta < 2 || n_phi < 2 {
        return Err(Error::InvalidParameter("Bloch grid needs at least 2x2 points".into()));
    }
    let h = spec.hamiltonian();
    let (evals, evecs) = h.eigh()?;
    // basis amplitudes of the evolved |0...0⟩ and |1 at site 1⟩ states are
    // reused for every grid point
    let dim = 1usize << spec.n;
    let zero = PureState::basis_state(dim, 0)?;
    let one = PureState::basis_state(dim, 1 << (spec.n - 1))?;
    let prop = |psi: &PureState| -> Result<PureState> {
        let modal = evecs.t().mapv(|v| v.conj()).dot(psi.amplitudes());
        let phased: ndarray::Array1<num_complex::Complex64> = modal
            .iter()
            .zip(evals.iter())
            .map(|(a, w)| a * num_complex::Complex64::from_polar(1.0, -w * t))
            .collect();
        PureState::from_amplitudes_unchecked(evecs.dot(&phased))
    };
    let ev_zero = prop(&zero)?;
    let ev_one = prop(&one)?;
    let tgt_zero = zero;
    let tgt_one = PureState::basis_state(dim, 1)?;

    let mut fids = Vec::with_capacity(n_theta * n_phi);
    for it in 0..n_theta {
        let theta = std::f64::consts::PI * it as f64 / (n_theta - 1) as f64;
        for ip in 0..n_phi {
            let phi = phi_offset + 2.0 * std::f64::consts::PI * ip as f64 / n_phi as f64;
            let q = Qubit::bloch(theta, phi);
            // overlap of (a tgt0 + b tgt1) with (a ev0 + b ev1)
            let mut ov = num_complex::Complex64::new(0.0, 0.0);
            ov += q.zero.conj() * q.zero * tgt_zero.inner(&ev_zero)?;
            ov += q.zero.conj() * q.one * tgt_zero.inner(&ev_one)?;
            ov += q.one.conj() * q.zero * tgt_one.inner(&ev_zero)?;
            ov += q.one.conj() * q.one * tgt_one.inner(&ev_one)?;
            fids.push(ov.norm());
        }
    }
    let count = fids.len() as f64;
    let mean = fids.iter().sum::<f64>() / count;
    let var = fids.iter().map(|f| (f - mean) * (f - mean)).sum::<f64>() / count;
    Ok(BlochStats {
        mean,
        std: var.sqrt(),
        min: fids.iter().cloned().fold(f64::INFINITY, f64::min),
        max: fids.iter().cloned().fold(0.0, f64::max),
    })
}

/// Which chain parameter a robustness sweep perturbs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PerturbedParameter {
    /// Field on site 1 (nominal h).
    H1,
    /// Field on site 2 (nominal 0).
    H2,
    /// Coupling on edge (1,2) (nominal J).
    J12,
}

impl std::str::FromStr for PerturbedParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "h1" => Ok(Self::H1),
            "h2" => Ok(Self::H2),
            "J12" | "j12" => Ok(Self::J12),
            other => Err(Error::InvalidParameter(format!("unknown parameter {other:?}"))),
        }
    }
}

/// End-to-end transport fidelity vs the perturbed value, all other
/// parameters held at nominal.
pub fn robustness_sweep(
    spec: &ChainSpec,
    parameter: PerturbedParameter,
    values: &[f64],
    input: &Qubit,
    t: f64,
) -> Result<Vec<(f64, f64)>> {
    let nominal = spec.network();
    let mut out = Vec::with_capacity(values.len());
    for &v in values {
        let network = match parameter {
            PerturbedParameter::H1 => nominal.with_field(1, v)?,
            PerturbedParameter::H2 => nominal.with_field(2, v)?,
            PerturbedParameter::J12 => nominal.with_coupling(1, 2, v)?,
        };
        let h = build_total(&network, HamiltonianKind::xy())?;
        let psi0 = PureState::qubit_at_site(spec.n, 1, input)?;
        let target = PureState::qubit_at_site(spec.n, spec.n, input)?;
        let psi = evolve_state(&h, &psi0, t)?;
        out.push((v, state_fidelity(&target, &psi)?));
    }
    Ok(out)
}

/// Leakage out of the ≤1-excitation sector for a transport run; the XY chain
/// conserves excitation number, so this stays at numerical zero.
pub fn transport_leakage(spec: &ChainSpec, input: &Qubit, t: f64) -> Result<f64> {
    let h = spec.hamiltonian();
    let psi0 = PureState::qubit_at_site(spec.n, 1, input)?;
    let psi = evolve_state(&h, &psi0, t)?;
    Ok(psi
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(b, _)| b.count_ones() >= 2)
        .map(|(_, a)| a.norm_sqr())
        .sum())
}
