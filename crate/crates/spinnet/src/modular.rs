//! Composite experiments: chain+router blocks joined at a shared node with
//! time-dependent barrier fields, and transport in wheel/arbitrary networks.

use num_complex::Complex64 as C64;

use crate::chain;
use crate::error::{Error, Result};
use crate::evolution::{evolve_state, restrict, SubspaceBasis};
use crate::hamiltonian::{build_total, HamiltonianKind};
use crate::network::SpinNetwork;
use crate::state::{PureState, Qubit};

/// One phase of a barrier protocol: run for `duration` with a strong field on
/// `barrier_site` (or none), all other fields static.
#[derive(Clone, Copy, Debug)]
pub struct BarrierPhase {
    pub duration: f64,
    pub barrier_site: Option<usize>,
    /// Barrier Zeeman frequency, rad/s.
    pub barrier_field: f64,
}

/// Ordered barrier phases covering the whole run.
#[derive(Clone, Debug)]
pub struct BarrierSchedule {
    pub phases: Vec<BarrierPhase>,
}

impl BarrierSchedule {
    pub fn new(phases: Vec<BarrierPhase>) -> Result<Self> {
        if phases.is_empty() {
            return Err(Error::InvalidParameter("schedule needs at least one phase".into()));
        }
        for p in &phases {
            if !(p.duration > 0.0) || !p.duration.is_finite() {
                return Err(Error::InvalidParameter(format!("phase duration {}", p.duration)));
            }
        }
        Ok(Self { phases })
    }

    pub fn total_duration(&self) -> f64 {
        self.phases.iter().map(|p| p.duration).sum()
    }
}

/// The fused 6-spin network: a 3-spin chain (1-2-3) sharing node 3 with a
/// 4-spin router (3-4-5,6). Static fields: chain ends 1 and 3 at +h, the
/// delivery port 6 at +h (resonant with the input field on 3), the other
/// port 5 at -h, router center 4 and chain middle 2 at 0.
pub fn composite_network(end_field: f64, coupling: f64) -> Result<SpinNetwork> {
    SpinNetwork::new(
        6,
        vec![
            (1, 2, coupling),
            (2, 3, coupling),
            (3, 4, coupling),
            (4, 5, coupling),
            (4, 6, coupling),
        ],
        vec![end_field, 0.0, end_field, 0.0, -end_field, end_field],
    )
}

/// Per-site fidelity series of a composite run.
#[derive(Clone, Debug)]
pub struct CompositeSeries {
    pub times: Vec<f64>,
    /// site_fids[s][k] = fidelity of the input qubit read out at site s+1 at
    /// times[k].
    pub site_fids: Vec<Vec<f64>>,
    /// Max leakage out of the ≤1-excitation sector over the run.
    pub max_leakage: f64,
}

impl CompositeSeries {
    /// Max fidelity at a site (1-based) over the whole run.
    pub fn peak_at_site(&self, site: usize) -> f64 {
        self.site_fids[site - 1].iter().cloned().fold(0.0, f64::max)
    }

}

/// Composite run with per-site excitation populations alongside fidelities.
#[derive(Clone, Debug)]
pub struct CompositeRun {
    pub series: CompositeSeries,
    /// populations[s][k] = |amplitude of the single flip at site s+1|².
    pub populations: Vec<Vec<f64>>,
}

impl CompositeRun {
    /// Max over times `t <= until` of the summed flip populations at `sites`.
    pub fn max_population(&self, sites: &[usize], until: f64) -> f64 {
        let mut worst: f64 = 0.0;
        for (k, &t) in self.series.times.iter().enumerate() {
            if t > until {
                break;
            }
            let p: f64 = sites.iter().map(|&s| self.populations[s - 1][k]).sum();
            worst = worst.max(p);
        }
        worst
    }
}

fn simulate_piecewise(
    base: &SpinNetwork,
    segments: &[(Option<(usize, f64)>, f64)],
    input: &Qubit,
    t_max: f64,
    dt: f64,
) -> Result<CompositeRun> {
    let n = base.n();
    let mut psi = PureState::qubit_at_site(n, 1, input)?;
    let mut times = Vec::new();
    let mut site_fids = vec![Vec::new(); n];
    let mut populations = vec![Vec::new(); n];
    let mut max_leakage = 0.0f64;
    let mut t0 = 0.0;
    let mut remaining = t_max;
    let targets: Vec<PureState> = (1..=n)
        .map(|s| PureState::qubit_at_site(n, s, input))
        .collect::<Result<_>>()?;
    for &(barrier, duration) in segments {
        if remaining <= 0.0 {
            break;
        }
        let network = match barrier {
            Some((site, field)) => base.with_field(site, field)?,
            None => base.clone(),
        };
        let h = build_total(&network, HamiltonianKind::xy())?;
        let (evals, evecs) = h.eigh()?;
        let modal0 = evecs.t().mapv(|v| v.conj()).dot(psi.amplitudes());
        let span = duration.min(remaining);
        let steps = (span / dt).round().max(1.0) as usize;
        for k in 1..=steps {
            let t = span * k as f64 / steps as f64;
            let phased: ndarray::Array1<C64> = modal0
                .iter()
                .zip(evals.iter())
                .map(|(a, w)| a * C64::from_polar(1.0, -w * t))
                .collect();
            let state = PureState::from_amplitudes_unchecked(evecs.dot(&phased))?;
            times.push(t0 + t);
            for (s, tgt) in targets.iter().enumerate() {
                site_fids[s].push(tgt.inner(&state)?.norm());
                let flip = 1usize << (n - 1 - s);
                populations[s].push(state.amplitudes()[flip].norm_sqr());
            }
            let outside: f64 = state
                .amplitudes()
                .iter()
                .enumerate()
                .filter(|(b, _)| b.count_ones() >= 2)
                .map(|(_, a)| a.norm_sqr())
                .sum();
            max_leakage = max_leakage.max(outside);
            if k == steps {
                psi = state;
            }
        }
        t0 += span;
        remaining -= span;
    }
    Ok(CompositeRun { series: CompositeSeries { times, site_fids, max_leakage }, populations })
}

/// The naive combination: the fused network evolves with its static fields
/// and no barrier control.
pub fn simulate_naive_composite(
    end_field: f64,
    coupling: f64,
    input: &Qubit,
    t_max: f64,
    dt: f64,
) -> Result<CompositeRun> {
    let base = composite_network(end_field, coupling)?;
    simulate_piecewise(&base, &[(None, t_max)], input, t_max, dt)
}

/// Evolve `input` placed on site 1 of an arbitrary static network, recording
/// the per-site fidelity and population series.
pub fn simulate_static_network(
    network: &SpinNetwork,
    input: &Qubit,
    t_max: f64,
    dt: f64,
) -> Result<CompositeRun> {
    simulate_piecewise(network, &[(None, t_max)], input, t_max, dt)
}

/// The barrier protocol: piecewise evolution with the scheduled barrier field
/// applied per phase. The phase durations must cover `t_max`.
pub fn simulate_barrier_composite(
    end_field: f64,
    coupling: f64,
    schedule: &BarrierSchedule,
    input: &Qubit,
    t_max: f64,
    dt: f64,
) -> Result<CompositeRun> {
    if schedule.total_duration() + 1e-12 < t_max {
        return Err(Error::InvalidParameter(format!(
            "schedule covers {:.6} s but t_max = {:.6} s",
            schedule.total_duration(),
            t_max
        )));
    }
    let base = composite_network(end_field, coupling)?;
    let segments: Vec<(Option<(usize, f64)>, f64)> = schedule
        .phases
        .iter()
        .map(|p| (p.barrier_site.map(|s| (s, p.barrier_field)), p.duration))
        .collect();
    simulate_piecewise(&base, &segments, input, t_max, dt)
}

/// The default two-phase protocol: barrier on the router-side spin 4 while
/// the chain transports (its resonance time), then barrier on the chain-side
/// spin 2 while the router delivers (its scanned peak time).
pub fn default_barrier_schedule(
    end_field: f64,
    coupling: f64,
    barrier_field: f64,
) -> Result<BarrierSchedule> {
    let chain_time = {
        let candidates =
            chain::resonance_time_scan(end_field, coupling, 2.0, 1e-4, 1e-3)?;
        candidates
            .first()
            .ok_or_else(|| Error::InvalidParameter("no chain resonance below 2 s".into()))?
            .t
    };
    let router_time = router4_block_peak_time(end_field, coupling)?;
    BarrierSchedule::new(vec![
        BarrierPhase { duration: chain_time, barrier_site: Some(4), barrier_field },
        BarrierPhase { duration: router_time, barrier_site: Some(2), barrier_field },
    ])
}

/// Peak |1⟩-transfer time of the isolated 4-spin router block, located by a
/// single-excitation scan over [0, 2] s.
pub fn router4_block_peak_time(end_field: f64, coupling: f64) -> Result<f64> {
    let network = SpinNetwork::new(
        4,
        vec![(1, 2, coupling), (2, 3, coupling), (2, 4, coupling)],
        vec![end_field, 0.0, end_field, -end_field],
    )?;
    let scan = network_transport_scan(&network, 1, 3, end_field, coupling, 2.0, 1e-4)?;
    Ok(scan.best_t)
}

/// Hub-and-ring wheel: site 1 is the hub, sites 2..=n+1 form the ring.
/// All couplings are unit weights (scaled by the transport scan's J).
pub fn wheel_network(n_peripheral: usize) -> Result<SpinNetwork> {
    if n_peripheral < 3 {
        return Err(Error::InvalidParameter(format!(
            "wheel needs at least 3 peripheral spins, got {n_peripheral}"
        )));
    }
    let n = n_peripheral + 1;
    let mut edges = Vec::with_capacity(2 * n_peripheral);
    for k in 2..=n {
        edges.push((1, k, 1.0));
    }
    for k in 2..=n {
        let next = if k == n { 2 } else { k + 1 };
        edges.push((k, next, 1.0));
    }
    SpinNetwork::new(n, edges, vec![0.0; n])
}

/// The 9-spin arbitrary topology: edges (1,2), (2,3), (2,4), (4,5), (4,6),
/// (4,7), (7,8), (7,9), unit weights.
pub fn arbitrary9_network() -> SpinNetwork {
    SpinNetwork::new(
        9,
        vec![
            (1, 2, 1.0),
            (2, 3, 1.0),
            (2, 4, 1.0),
            (4, 5, 1.0),
            (4, 6, 1.0),
            (4, 7, 1.0),
            (7, 8, 1.0),
            (7, 9, 1.0),
        ],
        vec![0.0; 9],
    )
    .expect("static topology is valid")
}

/// Result of a network transport scan.
#[derive(Clone, Debug)]
pub struct NetworkScan {
    pub times: Vec<f64>,
    pub fidelities: Vec<f64>,
    pub best_t: f64,
    pub best_fidelity: f64,
}

/// Place a field h on the input and output sites only, scale the network's
/// edge weights by J, and scan the |1⟩-transport fidelity input → output.
///
/// The XY dynamics conserve excitation number, so the scan runs in the
/// single-excitation subspace after verifying (via [`restrict`]) that the
/// sector is invariant.
pub fn network_transport_scan(
    network: &SpinNetwork,
    input_site: usize,
    output_site: usize,
    end_field: f64,
    coupling: f64,
    t_max: f64,
    dt: f64,
) -> Result<NetworkScan> {
    let n = network.n();
    if input_site == output_site {
        return Err(Error::InvalidParameter(format!(
            "input and output sites must differ, both are {input_site}"
        )));
    }
    if input_site == 0 || input_site > n {
        return Err(Error::SiteOutOfRange { site: input_site, n });
    }
    if output_site == 0 || output_site > n {
        return Err(Error::SiteOutOfRange { site: output_site, n });
    }
    if !(t_max > 0.0) || !(dt > 0.0) {
        return Err(Error::InvalidParameter("t_max and dt must be positive".into()));
    }
    let mut fields = vec![0.0; n];
    fields[input_site - 1] = end_field;
    fields[output_site - 1] = end_field;
    let scaled = network.with_scaled_couplings(coupling).with_fields(fields)?;
    let h_full = build_total(&scaled, HamiltonianKind::xy())?;
    let basis = SubspaceBasis::excitation_sector(n, 1)?;
    let h_sub = restrict(&h_full, &basis)?;
    let (evals, evecs) = h_sub.eigh()?;

    // flip at site s has full-space index 2^(n-s); the sector basis is in
    // ascending index order, so locate both ports there
    let pos = |site: usize| -> usize {
        let ix = 1usize << (n - site);
        basis.indices().iter().position(|&b| b == ix).expect("flip state is in the sector")
    };
    let src = pos(input_site);
    let dst = pos(output_site);
    // ⟨dst|ψ(t)⟩ = Σ_k V[dst,k] e^{-iλ_k t} conj(V[src,k])
    let modal0: ndarray::Array1<C64> = evecs.row(src).mapv(|v| v.conj());
    let modal_dst = evecs.row(dst).to_owned();

    let steps = (t_max / dt).round() as usize;
    let mut times = Vec::with_capacity(steps);
    let mut fids = Vec::with_capacity(steps);
    let (mut best_t, mut best_fid) = (0.0, 0.0);
    for k in 1..=steps {
        let t = k as f64 * dt;
        let ov: C64 = modal_dst
            .iter()
            .zip(modal0.iter())
            .zip(evals.iter())
            .map(|((d, s0), w)| d * s0 * C64::from_polar(1.0, -w * t))
            .sum();
        let f = ov.norm();
        if f > best_fid {
            best_fid = f;
            best_t = t;
        }
        times.push(t);
        fids.push(f);
    }
    Ok(NetworkScan { times, fidelities: fids, best_t, best_fidelity: best_fid })
}

/// Parse the edge-list network format: one `i j coupling` line per edge,
/// optional `field i value` lines, `#` comments, whitespace-separated.
/// Site count is the largest index mentioned.
pub fn parse_network_file(text: &str) -> Result<SpinNetwork> {
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    let mut fields: Vec<(usize, f64)> = Vec::new();
    let mut max_site = 0usize;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let bad = |msg: &str| Error::InvalidNetwork(format!("line {}: {}", lineno + 1, msg));
        if toks[0] == "field" {
            if toks.len() != 3 {
                return Err(bad("expected `field i value`"));
            }
            let site: usize = toks[1].parse().map_err(|_| bad("bad site index"))?;
            let value: f64 = toks[2].parse().map_err(|_| bad("bad field value"))?;
            max_site = max_site.max(site);
            fields.push((site, value));
        } else {
            if toks.len() != 3 {
                return Err(bad("expected `i j coupling`"));
            }
            let i: usize = toks[0].parse().map_err(|_| bad("bad site index"))?;
            let j: usize = toks[1].parse().map_err(|_| bad("bad site index"))?;
            let c: f64 = toks[2].parse().map_err(|_| bad("bad coupling"))?;
            max_site = max_site.max(i).max(j);
            edges.push((i, j, c));
        }
    }
    if max_site == 0 {
        return Err(Error::InvalidNetwork("no edges or fields found".into()));
    }
    let mut field_vec = vec![0.0; max_site];
    for (site, value) in fields {
        if site == 0 {
            return Err(Error::InvalidNetwork("site indices are 1-based".into()));
        }
        field_vec[site - 1] = value;
    }
    SpinNetwork::new(max_site, edges, field_vec)
}

/// Serialize a network in the edge-list format (fields written only when
/// nonzero).
pub fn write_network_file(network: &SpinNetwork) -> String {
    let mut out = String::new();
    for e in network.edges() {
        out.push_str(&format!("{} {} {}\n", e.i, e.j, e.coupling));
    }
    for (k, f) in network.fields().iter().enumerate() {
        if *f != 0.0 {
            out.push_str(&format!("field {} {}\n", k + 1, f));
        }
    }
    out
}

/// Convenience: evolve a product input on an arbitrary network in the full
/// space (used by tests to cross-check the restricted scan).
pub fn full_space_transport_fidelity(
    network: &SpinNetwork,
    input_site: usize,
    output_site: usize,
    end_field: f64,
    coupling: f64,
    t: f64,
) -> Result<f64> {
    let n = network.n();
    let mut fields = vec![0.0; n];
    fields[input_site - 1] = end_field;
    fields[output_site - 1] = end_field;
    let scaled = network.with_scaled_couplings(coupling).with_fields(fields)?;
    let h = build_total(&scaled, HamiltonianKind::xy())?;
    let psi0 = PureState::qubit_at_site(n, input_site, &Qubit::ket1())?;
    let tgt = PureState::qubit_at_site(n, output_site, &Qubit::ket1())?;
    let psi = evolve_state(&h, &psi0, t)?;
    crate::state::state_fidelity(&tgt, &psi)
}
