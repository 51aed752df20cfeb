//! 4-spin and 5-spin information routers with a field-switch control.
//!
//! The 5-spin router is the chain 1-2-3 with two output branches 3-4 and 3-5;
//! spins 2,3 form the gate. Its Hamiltonian carries a minus sign on the
//! coupling sum: H = Σ h_i S_i^z - Σ J_lm (S^xS^x + S^yS^y).
//!
//! The paper analyzes the one-hole sector spanned by |01111⟩, |10111⟩, ….
//! Simulations here use the single-flip sector (qubit |1⟩ = one flipped spin
//! on the |0…0⟩ background); the bijection maps the hole at site k to the
//! flip at site k, with identical transfer magnitudes. The flip encoding is
//! the one that reproduces the switched-case orthogonal output state.

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::evolution::evolve_state;
use crate::hamiltonian::{build_total, HamiltonianKind};
use crate::network::SpinNetwork;
use crate::operator::Operator;
use crate::state::{state_fidelity, PureState, Qubit};

/// Which router is simulated.
#[derive(Clone, Copy, Debug)]
pub enum RouterVariant {
    /// Star of 4 spins: input 1, center 2, outputs 3 (+h) and 4 (-h);
    /// positive XY coupling sum.
    Four {
        /// Output-field magnitude h, rad/s.
        field: f64,
    },
    /// Chain 1-2-3 with branches 3-4, 3-5 and gate coupling G on (2,3);
    /// negative XY coupling sum.
    Five {
        /// Gate coupling G, rad/s.
        gate: f64,
    },
}

/// Full router configuration.
#[derive(Clone, Copy, Debug)]
pub struct RouterSpec {
    pub variant: RouterVariant,
    /// Non-gate coupling J, rad/s.
    pub coupling: f64,
    /// Switch the input-port field, selecting the other output port.
    pub switched: bool,
}

impl RouterSpec {
    pub fn new(variant: RouterVariant, coupling: f64, switched: bool) -> Result<Self> {
        if coupling == 0.0 || !coupling.is_finite() {
            return Err(Error::InvalidParameter(format!("coupling J = {coupling}")));
        }
        match variant {
            RouterVariant::Four { field } if field == 0.0 || !field.is_finite() => {
                return Err(Error::InvalidParameter(format!("field h = {field}")));
            }
            RouterVariant::Five { gate } if gate == 0.0 || !gate.is_finite() => {
                return Err(Error::InvalidParameter(format!("gate G = {gate}")));
            }
            _ => {}
        }
        Ok(Self { variant, coupling, switched })
    }

    pub fn n(&self) -> usize {
        match self.variant {
            RouterVariant::Four { .. } => 4,
            RouterVariant::Five { .. } => 5,
        }
    }

    /// The output port sites: (primary, secondary) for the unswitched case.
    pub fn ports(&self) -> (usize, usize) {
        match self.variant {
            RouterVariant::Four { .. } => (3, 4),
            RouterVariant::Five { .. } => (4, 5),
        }
    }

    pub fn network(&self) -> SpinNetwork {
        match self.variant {
            RouterVariant::Four { field } => {
                let h1 = if self.switched { -field } else { field };
                SpinNetwork::new(
                    4,
                    vec![(1, 2, self.coupling), (2, 3, self.coupling), (2, 4, self.coupling)],
                    vec![h1, 0.0, field, -field],
                )
                .expect("validated router parameters")
            }
            RouterVariant::Five { gate } => {
                let params = router5_parameters(
                    gate,
                    self.coupling,
                    if self.switched { RoutingTarget::O2 } else { RoutingTarget::O1 },
                );
                SpinNetwork::new(5, params.couplings.to_vec(), params.fields.to_vec())
                    .expect("validated router parameters")
            }
        }
    }

    pub fn hamiltonian(&self) -> Operator {
        let kind = match self.variant {
            RouterVariant::Four { .. } => HamiltonianKind::xy(),
            RouterVariant::Five { .. } => HamiltonianKind::xy().negated(),
        };
        build_total(&self.network(), kind).expect("router fits dense cap")
    }
}

/// Which output port the 5-spin router is tuned to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RoutingTarget {
    /// Port spin 4.
    O1,
    /// Port spin 5.
    O2,
}

/// One row of the transport-parameter table for the 5-spin router.
#[derive(Clone, Copy, Debug)]
pub struct Router5Params {
    /// (h_1 .. h_5), rad/s.
    pub fields: [f64; 5],
    /// Edges (1,2), (2,3), (3,4), (3,5) with their couplings.
    pub couplings: [(usize, usize, f64); 4],
}

/// The transport parameters: O1 → h = (-G/2, 0, 0, -G/2, G/2), O2 flips only
/// h_1 to +G/2; couplings (J, G, J, J).
pub fn router5_parameters(gate: f64, coupling: f64, target: RoutingTarget) -> Router5Params {
    let h1 = match target {
        RoutingTarget::O1 => -gate / 2.0,
        RoutingTarget::O2 => gate / 2.0,
    };
    Router5Params {
        fields: [h1, 0.0, 0.0, -gate / 2.0, gate / 2.0],
        couplings: [
            (1, 2, coupling),
            (2, 3, gate),
            (3, 4, coupling),
            (3, 5, coupling),
        ],
    }
}

impl Router5Params {
    pub fn gate_coupling(&self) -> f64 {
        self.couplings[1].2
    }

    fn coupling_value(&self, i: usize, j: usize) -> f64 {
        self.couplings
            .iter()
            .find(|(a, b, _)| (*a, *b) == (i, j))
            .map(|(_, _, c)| *c)
            .unwrap_or(0.0)
    }
}

/// The five effective eigenvalues of the transformed one-hole Hamiltonian
/// under h_2 = h_3: (E_I, E_+, E_-, E_O1, E_O2).
#[derive(Clone, Copy, Debug)]
pub struct EffectiveEigenvalues {
    pub e_input: f64,
    pub e_plus: f64,
    pub e_minus: f64,
    pub e_o1: f64,
    pub e_o2: f64,
}

pub fn effective_eigenvalues(params: &Router5Params) -> Result<EffectiveEigenvalues> {
    let [h1, h2, h3, h4, h5] = params.fields;
    if h2 != h3 {
        return Err(Error::InvalidParameter(format!(
            "effective eigenvalues need h2 = h3, got {h2} and {h3}"
        )));
    }
    let g = params.gate_coupling();
    Ok(EffectiveEigenvalues {
        e_input: 0.5 * (h1 - h2 - h3 - h4 - h5),
        e_plus: 0.5 * (-h1 - h4 - h5 - g),
        e_minus: 0.5 * (-h1 - h4 - h5 + g),
        e_o1: 0.5 * (-h1 - h2 - h3 + h4 - h5),
        e_o2: 0.5 * (-h1 - h2 - h3 - h4 + h5),
    })
}

/// One-hole-sector Hamiltonian of the 5-spin router in the basis
/// (|01111⟩, |10111⟩, |11011⟩, |11101⟩, |11110⟩): ½(diag λ_i) with
/// off-diagonal -J_lm/2 on the coupled pairs.
pub fn one_hole_hamiltonian(params: &Router5Params) -> Operator {
    let [h1, h2, h3, h4, h5] = params.fields;
    let total = h1 + h2 + h3 + h4 + h5;
    let mut m = Array2::<C64>::zeros((5, 5));
    for (k, h) in [h1, h2, h3, h4, h5].into_iter().enumerate() {
        m[[k, k]] = C64::new(0.5 * (2.0 * h - total), 0.0);
    }
    for (i, j, c) in params.couplings {
        m[[i - 1, j - 1]] = C64::new(-0.5 * c, 0.0);
        m[[j - 1, i - 1]] = C64::new(-0.5 * c, 0.0);
    }
    Operator::from_matrix(m).expect("square by construction")
}

/// The ± rotation on the gate pair: basis vectors 2,3 map to
/// (|10111⟩ ± |11011⟩)/√2, everything else fixed.
pub fn basis_change_matrix() -> Operator {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut m = Array2::<C64>::zeros((5, 5));
    m[[0, 0]] = C64::new(1.0, 0.0);
    m[[3, 3]] = C64::new(1.0, 0.0);
    m[[4, 4]] = C64::new(1.0, 0.0);
    // columns: |+⟩ = (e2 + e3)/√2, |-⟩ = (e2 - e3)/√2
    m[[1, 1]] = C64::new(r, 0.0);
    m[[2, 1]] = C64::new(r, 0.0);
    m[[1, 2]] = C64::new(r, 0.0);
    m[[2, 2]] = C64::new(-r, 0.0);
    Operator::from_matrix(m).expect("square by construction")
}

/// Numeric conjugation V† H V of the one-hole Hamiltonian by the ± rotation,
/// in the basis (I, +, -, O1, O2).
pub fn basis_change_check(params: &Router5Params) -> Operator {
    let h = one_hole_hamiltonian(params);
    let v = basis_change_matrix();
    v.dagger().mul(&h).expect("5x5").mul(&v).expect("5x5")
}

/// The transformed Hamiltonian assembled entrywise from its closed form.
pub fn transformed_closed_form(params: &Router5Params) -> Operator {
    let [h1, h2, h3, h4, h5] = params.fields;
    let j12 = params.coupling_value(1, 2);
    let g = params.gate_coupling();
    let j34 = params.coupling_value(3, 4);
    let j35 = params.coupling_value(3, 5);
    let r2 = std::f64::consts::SQRT_2;
    let l1 = h1 - h2 - h3 - h4 - h5;
    let l4 = -h1 - h2 - h3 + h4 - h5;
    let l5 = -h1 - h2 - h3 - h4 + h5;
    let rows: [[f64; 5]; 5] = [
        [l1, -j12 / r2, -j12 / r2, 0.0, 0.0],
        [-j12 / r2, -h1 - h4 - h5 - g, h2 - h3, -j34 / r2, -j35 / r2],
        [-j12 / r2, h2 - h3, -h1 - h4 - h5 + g, j34 / r2, j35 / r2],
        [0.0, -j34 / r2, j34 / r2, l4, 0.0],
        [0.0, -j35 / r2, j35 / r2, 0.0, l5],
    ];
    let mut m = Array2::<C64>::zeros((5, 5));
    for (i, row) in rows.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            m[[i, j]] = C64::new(0.5 * v, 0.0);
        }
    }
    Operator::from_matrix(m).expect("square by construction")
}

/// The reduced (I, +, O1) Hamiltonian for the O1 parameter row, with
/// x = G/4 and y = J/(2√2).
pub fn reduced_routing_hamiltonian(gate: f64, coupling: f64) -> Operator {
    let x = gate / 4.0;
    let y = coupling / (2.0 * std::f64::consts::SQRT_2);
    let mut m = Array2::<C64>::zeros((3, 3));
    for k in 0..3 {
        m[[k, k]] = C64::new(-x, 0.0);
    }
    m[[0, 1]] = C64::new(-y, 0.0);
    m[[1, 0]] = C64::new(-y, 0.0);
    m[[1, 2]] = C64::new(-y, 0.0);
    m[[2, 1]] = C64::new(-y, 0.0);
    Operator::from_matrix(m).expect("square by construction")
}

/// Admissible routing times τ = 8 m_1 π / (G + 2J).
#[derive(Clone, Debug)]
pub struct RoutingTime {
    /// Smallest admissible m_1.
    pub m1_min: u64,
    /// τ at m_1 = m1_min, seconds.
    pub tau_min: f64,
    /// The admissible progression m1_min, 2·m1_min, 3·m1_min, … up to the bound.
    pub m1_values: Vec<u64>,
}

/// Find the smallest m_1 ≤ `m1_bound` making m_2 = ((G-2J)/(G+2J)) m_1 an
/// integer; the admissible set is the multiples of that m_1.
pub fn routing_time(gate: f64, coupling: f64, m1_bound: u64) -> Result<RoutingTime> {
    let denom = gate + 2.0 * coupling;
    if denom == 0.0 {
        return Err(Error::InvalidParameter("G + 2J must be nonzero".into()));
    }
    let ratio = (gate - 2.0 * coupling) / denom;
    let m1_min = (1..=m1_bound)
        .find(|&m1| {
            let m2 = ratio * m1 as f64;
            (m2 - m2.round()).abs() < 1e-9
        })
        .ok_or(Error::NoAdmissibleRoutingTime(m1_bound))?;
    let tau_min = 8.0 * m1_min as f64 * std::f64::consts::PI / denom;
    let m1_values = (1..).map(|k| k * m1_min).take_while(|&m| m <= m1_bound).collect();
    Ok(RoutingTime { m1_min, tau_min, m1_values })
}

/// Fidelity time series of every output port against the input state.
#[derive(Clone, Debug)]
pub struct RouterSeries {
    pub times: Vec<f64>,
    /// (port site, fidelity series) in port order.
    pub ports: Vec<(usize, Vec<f64>)>,
}

/// Evolve `input` placed on the input port (site 1) and record each output
/// port's fidelity against `input` over a uniform time grid.
pub fn simulate_router(
    spec: &RouterSpec,
    input: &Qubit,
    t_max: f64,
    dt: f64,
) -> Result<RouterSeries> {
    if !(t_max > 0.0) || !(dt > 0.0) {
        return Err(Error::InvalidParameter("t_max and dt must be positive".into()));
    }
    let n = spec.n();
    let h = spec.hamiltonian();
    let (evals, evecs) = h.eigh()?;
    let psi0 = PureState::qubit_at_site(n, 1, input)?;
    let modal0 = evecs.t().mapv(|v| v.conj()).dot(psi0.amplitudes());
    let (p1, p2) = spec.ports();
    let targets: Vec<(usize, ndarray::Array1<C64>)> = [p1, p2]
        .into_iter()
        .map(|port| {
            let tgt = PureState::qubit_at_site(n, port, input)?;
            Ok((port, evecs.t().mapv(|v| v.conj()).dot(tgt.amplitudes())))
        })
        .collect::<Result<_>>()?;
    let steps = (t_max / dt).round() as usize;
    let mut times = Vec::with_capacity(steps);
    let mut series: Vec<(usize, Vec<f64>)> =
        targets.iter().map(|(p, _)| (*p, Vec::with_capacity(steps))).collect();
    for k in 1..=steps {
        let t = k as f64 * dt;
        times.push(t);
        for ((_, tgt_modal), (_, fids)) in targets.iter().zip(series.iter_mut()) {
            let ov: C64 = tgt_modal
                .iter()
                .zip(modal0.iter())
                .zip(evals.iter())
                .map(|((tm, m0), w)| tm.conj() * m0 * C64::from_polar(1.0, -w * t))
                .sum();
            fids.push(ov.norm());
        }
    }
    Ok(RouterSeries { times, ports: series })
}

/// Fidelity of the state delivered to `port` at time `t` against an
/// arbitrary reference qubit (used for the switched-case orthogonal check).
pub fn port_fidelity_at(
    spec: &RouterSpec,
    input: &Qubit,
    reference: &Qubit,
    port: usize,
    t: f64,
) -> Result<f64> {
    let h = spec.hamiltonian();
    let psi0 = PureState::qubit_at_site(spec.n(), 1, input)?;
    let target = PureState::qubit_at_site(spec.n(), port, reference)?;
    let psi = evolve_state(&h, &psi0, t)?;
    state_fidelity(&target, &psi)
}
