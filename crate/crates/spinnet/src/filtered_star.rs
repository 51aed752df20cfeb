//! Filtered Hamiltonian engineering of a star topology.
//!
//! The scheme alternates evolution under the double-quantum Hamiltonian and a
//! stage-dependent Zeeman Hamiltonian. One Zeeman+DQ pair is a stage, L stages
//! form a sequence (cycle), and the whole scheme runs N cycles with DQ
//! durations t_i/N. With the stage frequencies tuned so that the filter
//! function kills the peripheral-peripheral couplings, the net effect is the
//! DQ Hamiltonian with only radial (central-peripheral) interactions.

use ndarray::Array2;
use num_complex::Complex64 as C64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hamiltonian::{build_coupling, HamiltonianKind};
use crate::network::SpinNetwork;
use crate::operator::{gate_fidelity, Operator};
use crate::state::{state_fidelity, PureState};
use crate::tol;

/// Stage frequencies and timing for one filtered sequence.
///
/// Stage i evolves under the Zeeman Hamiltonian
/// ω_i Σ_{j≥2} S_j^z + Ω_i S_1^z for time τ, then under the DQ Hamiltonian
/// for time t_i / N.
#[derive(Clone, Debug)]
pub struct FilteredSequenceSpec {
    /// Stage count L.
    pub stages: usize,
    /// Cycle count N.
    pub cycles: usize,
    /// Zeeman period τ in seconds.
    pub tau: f64,
    /// Peripheral frequency ω_i per stage, rad/s.
    pub peripheral_freqs: Vec<f64>,
    /// Central frequency Ω_i per stage, rad/s.
    pub central_freqs: Vec<f64>,
    /// DQ time array [t_1..t_L] in seconds (each cycle uses t_i/N).
    pub dq_times: Vec<f64>,
}

impl FilteredSequenceSpec {
    pub fn new(
        cycles: usize,
        tau: f64,
        peripheral_freqs: Vec<f64>,
        central_freqs: Vec<f64>,
        dq_times: Vec<f64>,
    ) -> Result<Self> {
        let stages = peripheral_freqs.len();
        if stages == 0 {
            return Err(Error::InvalidParameter("need at least one stage".into()));
        }
        if central_freqs.len() != stages || dq_times.len() != stages {
            return Err(Error::InvalidParameter(format!(
                "stage arrays disagree: {} peripheral, {} central, {} times",
                stages,
                central_freqs.len(),
                dq_times.len()
            )));
        }
        if cycles == 0 {
            return Err(Error::InvalidParameter("need at least one cycle".into()));
        }
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::InvalidParameter(format!("tau = {tau}")));
        }
        if dq_times.iter().any(|t| *t < 0.0 || !t.is_finite()) {
            return Err(Error::InvalidParameter("negative DQ time".into()));
        }
        Ok(Self { stages, cycles, tau, peripheral_freqs, central_freqs, dq_times })
    }

    /// Spec with the standard solution set ω = ((2L+1)/2L)π, Ω = -ω.
    pub fn with_default_parameters(
        stages: usize,
        cycles: usize,
        tau: f64,
        dq_times: Vec<f64>,
    ) -> Result<Self> {
        let (omega, big_omega) = default_parameters(stages)?;
        Self::new(cycles, tau, omega, big_omega, dq_times)
    }

    /// Total DQ time elapsed after `cycles` cycles: cycles · Σt_i / N.
    pub fn elapsed_dq_time(&self, cycles: usize) -> f64 {
        cycles as f64 * self.dq_times.iter().sum::<f64>() / self.cycles as f64
    }
}

/// A network with designated central site 1; peripheral sites are 2..n.
/// Radial and peripheral-peripheral couplings are both permitted.
#[derive(Clone, Debug)]
pub struct StarNetwork {
    network: SpinNetwork,
}

impl StarNetwork {
    pub fn new(network: SpinNetwork) -> Result<Self> {
        if network.n() < 3 {
            return Err(Error::InvalidNetwork("star needs at least 3 spins".into()));
        }
        Ok(Self { network })
    }

    /// All-to-all star: radial couplings exactly `b_radial`,
    /// peripheral-peripheral couplings uniform in [0.5, 1.5]·b_radial.
    pub fn random_all_to_all(n: usize, b_radial: f64, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut edges = Vec::new();
        for j in 2..=n {
            edges.push((1, j, b_radial));
        }
        for j in 2..=n {
            for k in (j + 1)..=n {
                edges.push((j, k, rng.gen_range(0.5..1.5) * b_radial));
            }
        }
        Self::new(SpinNetwork::new(n, edges, vec![0.0; n])?)
    }

    pub fn network(&self) -> &SpinNetwork {
        &self.network
    }

    pub fn n(&self) -> usize {
        self.network.n()
    }

    /// The star with only radial edges kept.
    pub fn radial_subnetwork(&self) -> SpinNetwork {
        let edges = self
            .network
            .edges()
            .iter()
            .filter(|e| e.i == 1)
            .map(|e| (e.i, e.j, e.coupling))
            .collect();
        SpinNetwork::new(self.n(), edges, vec![0.0; self.n()])
            .expect("radial subgraph of a valid network is valid")
    }

    /// Per-site Zeeman frequencies at stage `i` (0-based).
    fn stage_fields(&self, spec: &FilteredSequenceSpec, stage: usize) -> Vec<f64> {
        let mut fields = vec![spec.peripheral_freqs[stage]; self.n()];
        fields[0] = spec.central_freqs[stage];
        fields
    }
}

/// The geometric-series kernel F_N(x) = (1 - e^{iNx})/(1 - e^{ix}), with the
/// removable singularity at x ≡ 0 (mod 2π) taking the value N.
pub fn filter_function(cycles: usize, x: f64) -> C64 {
    let den = C64::new(1.0, 0.0) - C64::from_polar(1.0, x);
    if den.norm() < 1e-12 {
        return C64::new(cycles as f64, 0.0);
    }
    (C64::new(1.0, 0.0) - C64::from_polar(1.0, cycles as f64 * x)) / den
}

/// Toggling-frame Hamiltonian U_Z(τ)† H_DQ U_Z(τ) in closed form:
/// Σ (b_lm/2)(S_l^+S_m^+ e^{+iδτ} + S_l^-S_m^- e^{-iδτ}) with
/// δ = field_l + field_m, satisfying
/// U_Z(τ)† U_DQ(t) U_Z(τ) = exp(-i t H_m(τ)).
pub fn toggling_frame_hamiltonian(
    network: &SpinNetwork,
    stage_fields: &[f64],
    tau: f64,
) -> Result<Operator> {
    let n = network.n();
    if stage_fields.len() != n {
        return Err(Error::InvalidParameter(format!(
            "{} stage fields for {} sites",
            stage_fields.len(),
            n
        )));
    }
    let dim = 1usize << n;
    let mut m = Array2::<C64>::zeros((dim, dim));
    for e in network.edges() {
        let mi = 1usize << (n - e.i);
        let mj = 1usize << (n - e.j);
        let delta = stage_fields[e.i - 1] + stage_fields[e.j - 1];
        let raise = C64::from_polar(e.coupling * 0.5, delta * tau);
        for b in 0..dim {
            let bi = b & mi != 0;
            let bj = b & mj != 0;
            if bi && bj {
                // S^+S^+ : |..1..1..⟩ -> |..0..0..⟩
                m[[b ^ mi ^ mj, b]] += raise;
            } else if !bi && !bj {
                // S^-S^- : |..0..0..⟩ -> |..1..1..⟩
                m[[b ^ mi ^ mj, b]] += raise.conj();
            }
        }
    }
    Operator::from_matrix(m)
}

/// Zeeman propagator for one stage, built directly from the diagonal.
fn zeeman_propagator(star: &StarNetwork, fields: &[f64], tau: f64) -> Operator {
    let n = star.n();
    let dim = 1usize << n;
    let mut m = Array2::<C64>::zeros((dim, dim));
    for b in 0..dim {
        let mut energy = 0.0;
        for (site, f) in fields.iter().enumerate() {
            let mask = 1usize << (n - 1 - site);
            energy += f * if b & mask == 0 { 0.5 } else { -0.5 };
        }
        m[[b, b]] = C64::from_polar(1.0, -energy * tau);
    }
    Operator::from_matrix(m).expect("square by construction")
}

/// Propagator of the filtered sequence after `cycles` repetitions, built by
/// direct schedule evolution (stage i applies U_Z^{(i)}(τ) then U_DQ(t_i/N)).
pub fn sequence_propagator(
    spec: &FilteredSequenceSpec,
    star: &StarNetwork,
    cycles: usize,
) -> Result<Operator> {
    if cycles > spec.cycles {
        return Err(Error::InvalidParameter(format!(
            "cycles {} > N = {}",
            cycles, spec.cycles
        )));
    }
    let u_cycle = cycle_propagator(spec, star)?;
    let mut u = Operator::identity(u_cycle.dim());
    for _ in 0..cycles {
        u = u_cycle.mul(&u)?;
    }
    let uerr = u.unitarity_error();
    if uerr > tol::UNITARITY {
        return Err(Error::NotUnitary(uerr));
    }
    Ok(u)
}

fn cycle_propagator(spec: &FilteredSequenceSpec, star: &StarNetwork) -> Result<Operator> {
    let h_dq = build_coupling(star.network(), HamiltonianKind::double_quantum())?;
    let mut u = Operator::identity(h_dq.dim());
    for stage in 0..spec.stages {
        let uz = zeeman_propagator(star, &star.stage_fields(spec, stage), spec.tau);
        let udq = crate::evolution::propagator(&h_dq, spec.dq_times[stage] / spec.cycles as f64)?;
        u = udq.mul(&uz.mul(&u)?)?;
    }
    Ok(u)
}

/// The engineered target exp(-i H_0 T): the DQ Hamiltonian with only the
/// radial interactions present, evolved for the elapsed DQ time T.
pub fn star_target(star: &StarNetwork, elapsed_dq_time: f64) -> Result<Operator> {
    let h0 = build_coupling(&star.radial_subnetwork(), HamiltonianKind::double_quantum())?;
    crate::evolution::propagator(&h0, elapsed_dq_time)
}

/// The standard solution set ω_i = ((2L+1)/2L)π, Ω_i = -ω_i.
pub fn default_parameters(stages: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if stages == 0 {
        return Err(Error::InvalidParameter("need at least one stage".into()));
    }
    let omega = (2.0 * stages as f64 + 1.0) / (2.0 * stages as f64) * std::f64::consts::PI;
    Ok((vec![omega; stages], vec![-omega; stages]))
}

/// Residuals of the L+1 decoupling conditions, in rad.
#[derive(Clone, Debug)]
pub struct ConditionReport {
    /// Distance of 2 Σω_i τ from the nearest odd multiple of π.
    pub peripheral_residual: f64,
    /// Distance of (Ω_i + ω_i) τ from the nearest multiple of 2π, per stage.
    pub central_residuals: Vec<f64>,
}

impl ConditionReport {
    pub fn passes(&self) -> bool {
        self.peripheral_residual < tol::CONDITION_RESIDUAL
            && self.central_residuals.iter().all(|r| *r < tol::CONDITION_RESIDUAL)
    }
}

/// Check the decoupling conditions 2Σω_iτ = (2l+1)π and (Ω_i+ω_i)τ = 2m_iπ.
pub fn check_conditions(spec: &FilteredSequenceSpec) -> ConditionReport {
    let pi = std::f64::consts::PI;
    let x = 2.0 * spec.peripheral_freqs.iter().sum::<f64>() * spec.tau;
    // distance to the nearest odd multiple of pi
    let d = (x - pi) / (2.0 * pi);
    let peripheral_residual = (2.0 * pi * (d - d.round())).abs();
    let central_residuals = spec
        .peripheral_freqs
        .iter()
        .zip(spec.central_freqs.iter())
        .map(|(w, bw)| {
            let y = (w + bw) * spec.tau;
            let m = y / (2.0 * pi);
            (2.0 * pi * (m - m.round())).abs()
        })
        .collect();
    ConditionReport { peripheral_residual, central_residuals }
}

/// Which fidelity the profile reports.
#[derive(Clone, Debug)]
pub enum ProfileMetric {
    /// |Tr(U_target† U_c)| / 2^n.
    Gate,
    /// Overlap of the evolved and target states for the given initial state.
    State(PureState),
}

impl ProfileMetric {
    /// The state-metric default: central spin flipped, peripherals in |0⟩.
    pub fn central_flip(n: usize) -> Result<Self> {
        Ok(ProfileMetric::State(PureState::basis_state(1 << n, 1 << (n - 1))?))
    }
}

/// Fidelity of the sequence propagator against the engineered target at
/// matching elapsed DQ time, for cycle = 1..N.
pub fn fidelity_profile(
    spec: &FilteredSequenceSpec,
    star: &StarNetwork,
    metric: &ProfileMetric,
) -> Result<Vec<(usize, f64)>> {
    let u_cycle = cycle_propagator(spec, star)?;
    let mut u = Operator::identity(u_cycle.dim());
    let mut out = Vec::with_capacity(spec.cycles);
    for c in 1..=spec.cycles {
        u = u_cycle.mul(&u)?;
        let target = star_target(star, spec.elapsed_dq_time(c))?;
        let fid = match metric {
            ProfileMetric::Gate => gate_fidelity(&target, &u)?,
            ProfileMetric::State(psi0) => {
                state_fidelity(&target.apply(psi0)?, &u.apply(psi0)?)?
            }
        };
        out.push((c, fid));
    }
    Ok(out)
}

/// Gate fidelity at `eval_cycle` as a function of the uniform stage time t,
/// rebuilding the sequence with time array [t, t, .., t] for each value.
pub fn time_robustness(
    template: &FilteredSequenceSpec,
    star: &StarNetwork,
    t_values: &[f64],
    eval_cycle: usize,
) -> Result<Vec<(f64, f64)>> {
    if eval_cycle == 0 || eval_cycle > template.cycles {
        return Err(Error::InvalidParameter(format!(
            "eval cycle {} outside 1..={}",
            eval_cycle, template.cycles
        )));
    }
    let mut out = Vec::with_capacity(t_values.len());
    for &t in t_values {
        let spec = FilteredSequenceSpec::new(
            template.cycles,
            template.tau,
            template.peripheral_freqs.clone(),
            template.central_freqs.clone(),
            vec![t; template.stages],
        )?;
        let u = sequence_propagator(&spec, star, eval_cycle)?;
        let target = star_target(star, spec.elapsed_dq_time(eval_cycle))?;
        out.push((t, gate_fidelity(&target, &u)?));
    }
    Ok(out)
}

/// A DQ time array drawn uniformly from (0, bound], seeded.
pub fn random_time_array(stages: usize, bound: f64, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..stages)
        .map(|_| {
            let t: f64 = rng.gen_range(0.0..bound);
            if t == 0.0 { bound } else { t }
        })
        .collect()
}

/// Interaction class for the averaged series sums.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InteractionClass {
    CentralPeripheral,
    PeripheralPeripheral,
}

/// Zeeman application counts per stage, in bracket order: walking the
/// sequence, the k-th DQ block of cycle c has seen stages 1..k applied c+1
/// times and the rest c times. Returned cycle-major, stage-minor.
pub fn bracket_coefficients(stages: usize, cycles: usize) -> Vec<Vec<u64>> {
    let mut counts = vec![0u64; stages];
    let mut out = Vec::with_capacity(stages * cycles);
    for _ in 0..cycles {
        for s in 0..stages {
            counts[s] += 1;
            out.push(counts.clone());
        }
    }
    out
}

fn class_weights(spec: &FilteredSequenceSpec, class: InteractionClass) -> Vec<f64> {
    match class {
        InteractionClass::CentralPeripheral => spec
            .peripheral_freqs
            .iter()
            .zip(spec.central_freqs.iter())
            .map(|(w, bw)| w + bw)
            .collect(),
        InteractionClass::PeripheralPeripheral => {
            spec.peripheral_freqs.iter().map(|w| 2.0 * w).collect()
        }
    }
}

/// The t_k series summed term by term across cycles.
pub fn series_sum_direct(
    spec: &FilteredSequenceSpec,
    stage: usize,
    class: InteractionClass,
) -> Result<C64> {
    if stage == 0 || stage > spec.stages {
        return Err(Error::InvalidParameter(format!(
            "stage {} outside 1..={}",
            stage, spec.stages
        )));
    }
    let weights = class_weights(spec, class);
    let brackets = bracket_coefficients(spec.stages, spec.cycles);
    let mut sum = C64::new(0.0, 0.0);
    for cycle in 0..spec.cycles {
        let counts = &brackets[cycle * spec.stages + (stage - 1)];
        let delta: f64 = counts
            .iter()
            .zip(weights.iter())
            .map(|(&c, &w)| c as f64 * w)
            .sum();
        sum += C64::from_polar(1.0, delta * spec.tau);
    }
    Ok(sum)
}

/// The same series in closed form: e^{iτ x_k} F_N(y τ) with x_k the stage-k
/// prefactor and y the full-sequence weight sum.
pub fn series_sum_closed(
    spec: &FilteredSequenceSpec,
    stage: usize,
    class: InteractionClass,
) -> Result<C64> {
    if stage == 0 || stage > spec.stages {
        return Err(Error::InvalidParameter(format!(
            "stage {} outside 1..={}",
            stage, spec.stages
        )));
    }
    let weights = class_weights(spec, class);
    let x: f64 = weights[..stage].iter().sum();
    let y: f64 = weights.iter().sum();
    Ok(C64::from_polar(1.0, x * spec.tau) * filter_function(spec.cycles, y * spec.tau))
}
