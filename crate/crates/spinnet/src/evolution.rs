//! Exact piecewise-constant time evolution and subspace reduction.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::operator::Operator;
use crate::state::PureState;
use crate::tol;

/// exp(-i h t) by Hermitian eigendecomposition. Inputs are always Hermitian
/// here, so unitarity holds to machine precision (checked against
/// [`tol::UNITARITY`]).
pub fn propagator(h: &Operator, t: f64) -> Result<Operator> {
    let (evals, evecs) = h.eigh()?;
    let phases: Array1<C64> = evals.mapv(|w| C64::from_polar(1.0, -w * t));
    // V e^{-iΛt} V†
    let mut scaled = evecs.clone();
    for (mut col, ph) in scaled.columns_mut().into_iter().zip(phases.iter()) {
        col.mapv_inplace(|v| v * ph);
    }
    let u = Operator::from_matrix(scaled.dot(&dagger(&evecs)))?;
    let uerr = u.unitarity_error();
    if uerr > tol::UNITARITY {
        return Err(Error::NotUnitary(uerr));
    }
    Ok(u)
}

fn dagger(m: &Array2<C64>) -> Array2<C64> {
    let mut out = Array2::zeros((m.ncols(), m.nrows()));
    for ((i, j), v) in m.indexed_iter() {
        out[[j, i]] = v.conj();
    }
    out
}

/// An ordered list of (Hamiltonian, duration) segments for piecewise-constant
/// evolution; segments are applied left-to-right in time order.
#[derive(Clone, Debug)]
pub struct Schedule {
    segments: Vec<(Operator, f64)>,
}

impl Schedule {
    pub fn new(segments: Vec<(Operator, f64)>) -> Result<Self> {
        let mut dim = None;
        for (h, dt) in &segments {
            if !dt.is_finite() || *dt < 0.0 {
                return Err(Error::InvalidParameter(format!("segment duration {dt}")));
            }
            match dim {
                None => dim = Some(h.dim()),
                Some(d) if d != h.dim() => {
                    return Err(Error::DimensionMismatch(d, h.dim()));
                }
                _ => {}
            }
        }
        Ok(Self { segments })
    }

    pub fn empty() -> Self {
        Self { segments: Vec::new() }
    }

    pub fn segments(&self) -> &[(Operator, f64)] {
        &self.segments
    }

    pub fn total_duration(&self) -> f64 {
        self.segments.iter().map(|(_, dt)| dt).sum()
    }
}

/// Apply the schedule's segment propagators to `start` in time order.
/// The result keeps unit norm within [`tol::UNITARITY`].
pub fn evolve(schedule: &Schedule, start: &PureState) -> Result<PureState> {
    let mut psi = start.clone();
    for (h, dt) in schedule.segments() {
        if h.dim() != psi.dim() {
            return Err(Error::DimensionMismatch(h.dim(), psi.dim()));
        }
        psi = evolve_state(h, &psi, *dt)?;
    }
    let n = psi.norm();
    if (n - 1.0).abs() > tol::UNITARITY {
        return Err(Error::NumericFailure(format!("evolved norm {n}")));
    }
    Ok(psi)
}

/// exp(-i h t)|psi⟩ without forming the full propagator.
pub fn evolve_state(h: &Operator, psi: &PureState, t: f64) -> Result<PureState> {
    let (evals, evecs) = h.eigh()?;
    let modal = dagger(&evecs).dot(psi.amplitudes());
    let phased: Array1<C64> = modal
        .iter()
        .zip(evals.iter())
        .map(|(a, w)| a * C64::from_polar(1.0, -w * t))
        .collect();
    PureState::from_amplitudes_unchecked(evecs.dot(&phased))
}

/// An ordered selection of computational basis indices spanning a subspace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceBasis {
    parent_dim: usize,
    indices: Vec<usize>,
}

impl SubspaceBasis {
    pub fn new(parent_dim: usize, indices: Vec<usize>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for &ix in &indices {
            if ix >= parent_dim {
                return Err(Error::InvalidParameter(format!(
                    "basis index {ix} out of range for dim {parent_dim}"
                )));
            }
            if !seen.insert(ix) {
                return Err(Error::InvalidParameter(format!("duplicate basis index {ix}")));
            }
        }
        Ok(Self { parent_dim, indices })
    }

    /// All basis states of `n` spins with exactly `k` flipped spins, in
    /// ascending index order.
    pub fn excitation_sector(n: usize, k: usize) -> Result<Self> {
        let dim = 1usize << n;
        let indices = (0..dim).filter(|b| b.count_ones() as usize == k).collect();
        Self::new(dim, indices)
    }

    pub fn parent_dim(&self) -> usize {
        self.parent_dim
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn dim(&self) -> usize {
        self.indices.len()
    }

    /// Restriction of a full-space state to this basis (no renormalization).
    pub fn project(&self, psi: &PureState) -> Result<Array1<C64>> {
        if psi.dim() != self.parent_dim {
            return Err(Error::DimensionMismatch(psi.dim(), self.parent_dim));
        }
        Ok(self.indices.iter().map(|&ix| psi.amplitudes()[ix]).collect())
    }

    /// Embed subspace amplitudes back into the full space.
    pub fn embed(&self, amps: &Array1<C64>) -> Result<PureState> {
        if amps.len() != self.indices.len() {
            return Err(Error::DimensionMismatch(amps.len(), self.indices.len()));
        }
        let mut full = Array1::zeros(self.parent_dim);
        for (&ix, &a) in self.indices.iter().zip(amps.iter()) {
            full[ix] = a;
        }
        PureState::from_amplitudes_unchecked(full)
    }
}

/// The sub-block of `h` on the given basis, in the basis's order. Fails if
/// the subspace couples to its complement beyond [`tol::SUBSPACE_LEAKAGE`].
pub fn restrict(h: &Operator, basis: &SubspaceBasis) -> Result<Operator> {
    if h.dim() != basis.parent_dim() {
        return Err(Error::DimensionMismatch(h.dim(), basis.parent_dim()));
    }
    let inside: std::collections::HashSet<usize> = basis.indices().iter().copied().collect();
    let m = h.matrix();
    let mut worst = 0.0f64;
    for &col in basis.indices() {
        for row in 0..h.dim() {
            if !inside.contains(&row) {
                worst = worst.max(m[[row, col]].norm());
            }
        }
    }
    if worst > tol::SUBSPACE_LEAKAGE {
        return Err(Error::SubspaceNotInvariant(worst, tol::SUBSPACE_LEAKAGE));
    }
    let k = basis.dim();
    let mut out = Array2::zeros((k, k));
    for (a, &ia) in basis.indices().iter().enumerate() {
        for (b, &ib) in basis.indices().iter().enumerate() {
            out[[a, b]] = m[[ia, ib]];
        }
    }
    Operator::from_matrix(out)
}

/// Total weight of `psi` on basis states whose flipped-spin count differs
/// from `k` — the leakage out of the k-excitation sector.
pub fn excitation_leakage(psi: &PureState, k: usize) -> f64 {
    psi.amplitudes()
        .iter()
        .enumerate()
        .filter(|(b, _)| b.count_ones() as usize != k)
        .map(|(_, a)| a.norm_sqr())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{build_total, build_zeeman, HamiltonianKind};
    use crate::network::SpinNetwork;
    use crate::testutil::{c, expm_series_oracle, random_network, random_state};

    #[test]
    fn zero_time_propagator_is_identity() {
        let h = build_total(&random_network(3, 1), HamiltonianKind::xy()).unwrap();
        let u = propagator(&h, 0.0).unwrap();
        assert!(u.max_abs_diff(&Operator::identity(8)) < 1e-14);
    }

    #[test]
    fn diagonal_hamiltonian_exponentiates_entrywise() {
        let net = SpinNetwork::new(2, vec![], vec![1.3, -0.4]).unwrap();
        let hz = build_zeeman(&net).unwrap();
        let t = 0.9;
        let u = propagator(&hz, t).unwrap();
        for k in 0..4 {
            let expect = num_complex::Complex64::from_polar(1.0, -hz.matrix()[[k, k]].re * t);
            assert!((u.matrix()[[k, k]] - expect).norm() < 1e-14);
        }
    }

    #[test]
    fn propagator_matches_series_oracle() {
        for seed in [3, 4, 5] {
            let h = build_total(&random_network(3, seed), HamiltonianKind::double_quantum())
                .unwrap();
            let t = 0.37 + seed as f64 * 0.11;
            let eig_route = propagator(&h, t).unwrap();
            let series_route = expm_series_oracle(&h, t);
            assert!(eig_route.max_abs_diff(&series_route) < 1e-9);
        }
    }

    #[test]
    fn propagator_rejects_non_hermitian_input() {
        let mut m = ndarray::Array2::zeros((2, 2));
        m[[0, 1]] = c(1.0, 0.0);
        let h = Operator::from_matrix(m).unwrap();
        assert!(matches!(propagator(&h, 1.0), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn empty_schedule_is_identity_evolution() {
        let psi = random_state(8, 9);
        let out = evolve(&Schedule::empty(), &psi).unwrap();
        assert_eq!(psi, out);
    }

    #[test]
    fn all_zeros_state_is_stationary_under_the_chain() {
        let net = SpinNetwork::chain(3, 62.83, 628.3).unwrap();
        let h = build_total(&net, HamiltonianKind::xy()).unwrap();
        let vacuum = PureState::from_bits("000").unwrap();
        for t in [0.1, 0.7, 2.3] {
            let out = evolve_state(&h, &vacuum, t).unwrap();
            assert!((crate::state::state_fidelity(&vacuum, &out).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn two_segments_compose_like_one() {
        let h = build_total(&random_network(3, 12), HamiltonianKind::xy()).unwrap();
        let psi = random_state(8, 13);
        let split = Schedule::new(vec![(h.clone(), 0.4), (h.clone(), 0.35)]).unwrap();
        let joined = Schedule::new(vec![(h, 0.75)]).unwrap();
        let a = evolve(&split, &psi).unwrap();
        let b = evolve(&joined, &psi).unwrap();
        assert!(crate::state::state_fidelity(&a, &b).unwrap() > 1.0 - 1e-10);
        let diff: f64 = a
            .amplitudes()
            .iter()
            .zip(b.amplitudes().iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        assert!(diff < 1e-10);
    }

    #[test]
    fn norm_and_energy_are_preserved() {
        for seed in 20..23 {
            let h = build_total(&random_network(3, seed), HamiltonianKind::dipolar()).unwrap();
            let psi = random_state(8, seed + 100);
            let energy = |s: &PureState| {
                let hs = h.apply(s).unwrap();
                s.inner(&hs).unwrap().re
            };
            let e0 = energy(&psi);
            let sched = Schedule::new(vec![(h.clone(), 0.21), (h.clone(), 1.3)]).unwrap();
            let out = evolve(&sched, &psi).unwrap();
            assert!((out.norm() - 1.0).abs() < 1e-10);
            assert!((energy(&out) - e0).abs() < 1e-9 * e0.abs().max(1.0));
        }
    }

    #[test]
    fn restricted_and_full_evolution_agree() {
        // 1-excitation subspace of an XY chain is invariant; evolving inside
        // it and embedding back must match the full-space evolution
        let net = SpinNetwork::chain(3, 62.83, 628.3).unwrap();
        let h = build_total(&net, HamiltonianKind::xy()).unwrap();
        let basis = SubspaceBasis::excitation_sector(3, 1).unwrap();
        let h_sub = restrict(&h, &basis).unwrap();
        let psi0 = PureState::from_bits("100").unwrap();
        let t = 1.0;
        let full = evolve_state(&h, &psi0, t).unwrap();
        let sub0 = basis.project(&psi0).unwrap();
        let sub_state = PureState::new(sub0).unwrap();
        let sub_evolved = evolve_state(&h_sub, &sub_state, t).unwrap();
        let embedded = basis.embed(sub_evolved.amplitudes()).unwrap();
        assert!(
            crate::state::state_fidelity(&full, &embedded).unwrap() > 1.0 - 1e-10
        );
    }

    #[test]
    fn chain_restriction_reproduces_the_closed_form_matrix() {
        // ½ [[0, J, 0], [J, 2h, J], [0, J, 0]] in the (|001⟩,|010⟩,|100⟩) basis
        let (h_end, j) = (628.3185307, 62.83185307);
        let net = SpinNetwork::chain(3, j, h_end).unwrap();
        let h = build_total(&net, HamiltonianKind::xy()).unwrap();
        let basis = SubspaceBasis::new(8, vec![1, 2, 4]).unwrap();
        let sub = restrict(&h, &basis).unwrap();
        let expect = [
            [0.0, j / 2.0, 0.0],
            [j / 2.0, h_end, j / 2.0],
            [0.0, j / 2.0, 0.0],
        ];
        for r in 0..3 {
            for cidx in 0..3 {
                assert!(
                    (sub.matrix()[[r, cidx]] - c(expect[r][cidx], 0.0)).norm() < 1e-10,
                    "({r},{cidx})"
                );
            }
        }
    }

    #[test]
    fn restriction_of_zero_matrix_is_zero() {
        let z = Operator::zeros(8);
        let basis = SubspaceBasis::new(8, vec![1, 2, 4]).unwrap();
        assert_eq!(restrict(&z, &basis).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn non_invariant_subspace_is_rejected() {
        let net = SpinNetwork::chain(3, 62.83, 628.3).unwrap();
        let h = build_total(&net, HamiltonianKind::xy()).unwrap();
        // |010⟩ couples to |100⟩ which this basis omits
        let basis = SubspaceBasis::new(8, vec![1, 2]).unwrap();
        assert!(matches!(
            restrict(&h, &basis),
            Err(Error::SubspaceNotInvariant(_, _))
        ));
    }

    #[test]
    fn xy_evolution_conserves_excitation_number() {
        let net = random_network(4, 31);
        let no_fields = net.with_fields(vec![0.4, -0.2, 0.9, 0.0]).unwrap();
        let h = build_total(&no_fields, HamiltonianKind::xy()).unwrap();
        let psi0 = PureState::from_bits("1010").unwrap();
        let out = evolve_state(&h, &psi0, 2.7).unwrap();
        assert!(excitation_leakage(&out, 2) < 1e-10);
    }

    #[test]
    fn basis_validation_rejects_duplicates_and_range() {
        assert!(SubspaceBasis::new(4, vec![0, 0]).is_err());
        assert!(SubspaceBasis::new(4, vec![5]).is_err());
    }
}
