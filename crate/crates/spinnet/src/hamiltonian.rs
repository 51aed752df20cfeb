//! Spin operators and the four named Hamiltonians.
//!
//! Conventions (ħ = 1): s^z = diag(+1/2, -1/2) in the basis (|0⟩, |1⟩), so
//! |0⟩ is the m = +1/2 eigenstate; site 1 is the leftmost (most significant)
//! tensor factor. S^± = S^x ± iS^y.

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::network::SpinNetwork;
use crate::operator::Operator;

/// Dense-storage cap: 2^14 is the largest Hilbert space we allocate.
pub const MAX_SPINS: usize = 14;

/// Single-spin operator axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
    Plus,
    Minus,
}

fn single_spin(axis: Axis) -> Array2<C64> {
    let z = C64::new(0.0, 0.0);
    let half = C64::new(0.5, 0.0);
    let ihalf = C64::new(0.0, 0.5);
    let one = C64::new(1.0, 0.0);
    match axis {
        Axis::X => ndarray::array![[z, half], [half, z]],
        Axis::Y => ndarray::array![[z, -ihalf], [ihalf, z]],
        Axis::Z => ndarray::array![[half, z], [z, -half]],
        Axis::Plus => ndarray::array![[z, one], [z, z]],
        Axis::Minus => ndarray::array![[z, z], [one, z]],
    }
}

fn kron(a: &Array2<C64>, b: &Array2<C64>) -> Array2<C64> {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    let mut out = Array2::zeros((ar * br, ac * bc));
    for ((i, j), &av) in a.indexed_iter() {
        for ((k, l), &bv) in b.indexed_iter() {
            out[[i * br + k, j * bc + l]] = av * bv;
        }
    }
    out
}

/// The operator I ⊗ … ⊗ s ⊗ … ⊗ I with the single-spin operator `axis` at
/// position `site` (1-based, site 1 leftmost).
pub fn spin_operator(n: usize, site: usize, axis: Axis) -> Result<Operator> {
    if n > MAX_SPINS {
        return Err(Error::TooManySpins { n, max: MAX_SPINS });
    }
    if site == 0 || site > n {
        return Err(Error::SiteOutOfRange { site, n });
    }
    let mut m = Array2::from_elem((1, 1), C64::new(1.0, 0.0));
    let eye = Array2::eye(2);
    for k in 1..=n {
        let factor = if k == site { single_spin(axis) } else { eye.clone() };
        m = kron(&m, &factor);
    }
    Operator::from_matrix(m)
}

/// Σ_i S_i^z.
pub fn total_spin_z(n: usize) -> Result<Operator> {
    if n > MAX_SPINS {
        return Err(Error::TooManySpins { n, max: MAX_SPINS });
    }
    let dim = 1usize << n;
    let mut m = Array2::zeros((dim, dim));
    for b in 0..dim {
        let downs = b.count_ones() as f64;
        let ups = n as f64 - downs;
        m[[b, b]] = C64::new(0.5 * (ups - downs), 0.0);
    }
    Operator::from_matrix(m)
}

/// Which pairwise interaction a coupling Hamiltonian carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CouplingTag {
    /// b (3 S^zS^z - S·S)
    Dipolar,
    /// b (S^xS^x - S^yS^y)
    DoubleQuantum,
    /// b (S^xS^x + S^yS^y)
    Xy,
    /// Σ h_i S_i^z
    Zeeman,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// A named Hamiltonian family with an overall sign on the coupling sum
/// (the 5-spin router uses H = Σ h_i S_i^z - Σ J_lm (S^xS^x + S^yS^y)).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HamiltonianKind {
    pub tag: CouplingTag,
    pub sign: Sign,
}

impl HamiltonianKind {
    pub fn dipolar() -> Self {
        Self { tag: CouplingTag::Dipolar, sign: Sign::Plus }
    }

    pub fn double_quantum() -> Self {
        Self { tag: CouplingTag::DoubleQuantum, sign: Sign::Plus }
    }

    pub fn xy() -> Self {
        Self { tag: CouplingTag::Xy, sign: Sign::Plus }
    }

    pub fn zeeman() -> Self {
        Self { tag: CouplingTag::Zeeman, sign: Sign::Plus }
    }

    pub fn negated(self) -> Self {
        let sign = match self.sign {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        };
        Self { tag: self.tag, sign }
    }
}

fn check_size(n: usize) -> Result<usize> {
    if n > MAX_SPINS {
        return Err(Error::TooManySpins { n, max: MAX_SPINS });
    }
    Ok(1usize << n)
}

/// Σ_i h_i S_i^z — diagonal in the computational basis.
pub fn build_zeeman(network: &SpinNetwork) -> Result<Operator> {
    let n = network.n();
    let dim = check_size(n)?;
    let mut m = Array2::zeros((dim, dim));
    for b in 0..dim {
        let mut e = 0.0;
        for (site, h) in network.fields().iter().enumerate() {
            let mask = 1usize << (n - 1 - site);
            e += h * if b & mask == 0 { 0.5 } else { -0.5 };
        }
        m[[b, b]] = C64::new(e, 0.0);
    }
    Operator::from_matrix(m)
}

/// sign · Σ_{i<j} b_ij (pairwise term per `kind.tag`), summed once per
/// unordered edge. Matrix elements are placed directly:
/// XY couples |…0…1…⟩ ↔ |…1…0…⟩ with b/2, DQ couples |…0…0…⟩ ↔ |…1…1…⟩
/// with b/2, dipolar is 2 S^zS^z - S^xS^x - S^yS^y.
pub fn build_coupling(network: &SpinNetwork, kind: HamiltonianKind) -> Result<Operator> {
    if kind.tag == CouplingTag::Zeeman {
        return Err(Error::InvalidParameter(
            "build_coupling takes a pairwise kind; use build_zeeman".into(),
        ));
    }
    let n = network.n();
    let dim = check_size(n)?;
    let sign = kind.sign.value();
    let mut m = Array2::<C64>::zeros((dim, dim));
    for e in network.edges() {
        let mi = 1usize << (n - e.i);
        let mj = 1usize << (n - e.j);
        let half = C64::new(sign * e.coupling * 0.5, 0.0);
        for b in 0..dim {
            let bi = b & mi != 0;
            let bj = b & mj != 0;
            match kind.tag {
                CouplingTag::Xy => {
                    if bi != bj {
                        m[[b ^ mi ^ mj, b]] += half;
                    }
                }
                CouplingTag::DoubleQuantum => {
                    if bi == bj {
                        m[[b ^ mi ^ mj, b]] += half;
                    }
                }
                CouplingTag::Dipolar => {
                    // 2 S^zS^z: diagonal ±1/2; -(S^xS^x + S^yS^y): flip-flop -b/2
                    if bi == bj {
                        m[[b, b]] += half;
                    } else {
                        m[[b, b]] -= half;
                        m[[b ^ mi ^ mj, b]] -= half;
                    }
                }
                CouplingTag::Zeeman => unreachable!(),
            }
        }
    }
    Operator::from_matrix(m)
}

/// build_zeeman + build_coupling.
pub fn build_total(network: &SpinNetwork, kind: HamiltonianKind) -> Result<Operator> {
    build_zeeman(network)?.add(&build_coupling(network, kind)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::{restrict, SubspaceBasis};
    use crate::operator::commutator;
    use crate::testutil::{c, random_network};

    #[test]
    fn single_spin_z_is_half_diag() {
        let sz = spin_operator(1, 1, Axis::Z).unwrap();
        assert_eq!(sz.matrix()[[0, 0]], c(0.5, 0.0));
        assert_eq!(sz.matrix()[[1, 1]], c(-0.5, 0.0));
        assert_eq!(sz.matrix()[[0, 1]], c(0.0, 0.0));
    }

    #[test]
    fn same_site_commutators_close_the_algebra() {
        // [S^p, S^q] = i ε_pqr S^r, checked on every site of a 3-spin space
        let cases = [
            (Axis::X, Axis::Y, Axis::Z),
            (Axis::Y, Axis::Z, Axis::X),
            (Axis::Z, Axis::X, Axis::Y),
        ];
        for site in 1..=3 {
            for (p, q, r) in cases {
                let sp = spin_operator(3, site, p).unwrap();
                let sq = spin_operator(3, site, q).unwrap();
                let sr = spin_operator(3, site, r).unwrap();
                let lhs = commutator(&sp, &sq).unwrap();
                let rhs = sr.scale(c(0.0, 1.0));
                assert!(lhs.max_abs_diff(&rhs) < 1e-12, "site {site}");
            }
        }
    }

    #[test]
    fn cross_site_operators_commute() {
        let axes = [Axis::X, Axis::Y, Axis::Z, Axis::Plus, Axis::Minus];
        for (p, q) in [(1usize, 2usize), (1, 3), (2, 3)] {
            for a in axes {
                for b in axes {
                    let sa = spin_operator(3, p, a).unwrap();
                    let sb = spin_operator(3, q, b).unwrap();
                    let comm = commutator(&sa, &sb).unwrap();
                    assert!(comm.max_abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn plus_is_x_plus_iy_exactly() {
        for site in 1..=3 {
            let plus = spin_operator(3, site, Axis::Plus).unwrap();
            let composed = spin_operator(3, site, Axis::X)
                .unwrap()
                .add(&spin_operator(3, site, Axis::Y).unwrap().scale(c(0.0, 1.0)))
                .unwrap();
            assert_eq!(plus, composed);
        }
    }

    #[test]
    fn kronecker_oracle_for_middle_site() {
        // independent oracle: index arithmetic on I ⊗ σx/2 ⊗ I
        let op = spin_operator(3, 2, Axis::X).unwrap();
        let sx = [[0.0, 0.5], [0.5, 0.0]];
        for row in 0..8 {
            for col in 0..8 {
                let (r1, r2, r3) = (row >> 2 & 1, row >> 1 & 1, row & 1);
                let (c1, c2, c3) = (col >> 2 & 1, col >> 1 & 1, col & 1);
                let expect = if r1 == c1 && r3 == c3 { sx[r2][c2] } else { 0.0 };
                assert!(
                    (op.matrix()[[row, col]] - c(expect, 0.0)).norm() < 1e-15,
                    "({row},{col})"
                );
            }
        }
    }

    #[test]
    fn guards_reject_bad_sites_and_large_spaces() {
        assert!(matches!(
            spin_operator(3, 0, Axis::X),
            Err(crate::Error::SiteOutOfRange { .. })
        ));
        assert!(matches!(
            spin_operator(3, 4, Axis::X),
            Err(crate::Error::SiteOutOfRange { .. })
        ));
        assert!(matches!(
            spin_operator(15, 1, Axis::X),
            Err(crate::Error::TooManySpins { .. })
        ));
    }

    #[test]
    fn zeeman_single_spin_and_zero_fields() {
        let net = SpinNetwork::new(1, vec![], vec![2.5]).unwrap();
        let h = build_zeeman(&net).unwrap();
        assert_eq!(h.matrix()[[0, 0]], c(1.25, 0.0));
        assert_eq!(h.matrix()[[1, 1]], c(-1.25, 0.0));

        let flat = SpinNetwork::new(3, vec![(1, 2, 1.0)], vec![0.0; 3]).unwrap();
        assert!(build_zeeman(&flat).unwrap().max_abs() == 0.0);
    }

    #[test]
    fn zeeman_end_fields_restrict_to_chain_diagonal() {
        // fields [h, 0, h] on the basis |001⟩,|010⟩,|100⟩ give ½·diag(0,2h,0)
        let h = 7.0;
        let net = SpinNetwork::new(3, vec![], vec![h, 0.0, h]).unwrap();
        let hz = build_zeeman(&net).unwrap();
        let basis = SubspaceBasis::new(8, vec![1, 2, 4]).unwrap();
        let sub = restrict(&hz, &basis).unwrap();
        for (k, expect) in [0.0, h, 0.0].into_iter().enumerate() {
            assert!((sub.matrix()[[k, k]] - c(expect, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn coupling_with_no_edges_is_zero() {
        let net = SpinNetwork::new(3, vec![], vec![1.0, 2.0, 3.0]).unwrap();
        for kind in [
            HamiltonianKind::xy(),
            HamiltonianKind::double_quantum(),
            HamiltonianKind::dipolar(),
        ] {
            assert_eq!(build_coupling(&net, kind).unwrap().max_abs(), 0.0);
        }
    }

    #[test]
    fn two_spin_xy_block_derived_by_hand() {
        // J(SxSx + SySy) = (J/2)(S+S- + S-S+) couples |01⟩ ↔ |10⟩ with J/2
        let j = 3.2;
        let net = SpinNetwork::new(2, vec![(1, 2, j)], vec![0.0, 0.0]).unwrap();
        let h = build_coupling(&net, HamiltonianKind::xy()).unwrap();
        assert!((h.matrix()[[1, 2]] - c(j / 2.0, 0.0)).norm() < 1e-15);
        assert!((h.matrix()[[2, 1]] - c(j / 2.0, 0.0)).norm() < 1e-15);
        assert_eq!(h.matrix()[[0, 0]], c(0.0, 0.0));
        assert_eq!(h.matrix()[[0, 3]], c(0.0, 0.0));
    }

    #[test]
    fn builders_match_spin_operator_products() {
        // dual route: bit-arithmetic assembly vs explicit operator algebra
        let net = random_network(4, 11);
        let n = 4;
        let kinds = [
            HamiltonianKind::xy(),
            HamiltonianKind::double_quantum(),
            HamiltonianKind::dipolar(),
            HamiltonianKind::xy().negated(),
        ];
        for kind in kinds {
            let fast = build_coupling(&net, kind).unwrap();
            let mut slow = Operator::zeros(1 << n);
            for e in net.edges() {
                let sx =
                    |s| spin_operator(n, s, Axis::X).unwrap();
                let sy =
                    |s| spin_operator(n, s, Axis::Y).unwrap();
                let sz =
                    |s| spin_operator(n, s, Axis::Z).unwrap();
                let xx = sx(e.i).mul(&sx(e.j)).unwrap();
                let yy = sy(e.i).mul(&sy(e.j)).unwrap();
                let zz = sz(e.i).mul(&sz(e.j)).unwrap();
                let term = match kind.tag {
                    CouplingTag::Xy => xx.add(&yy).unwrap(),
                    CouplingTag::DoubleQuantum => xx.sub(&yy).unwrap(),
                    CouplingTag::Dipolar => zz
                        .scale(c(3.0, 0.0))
                        .sub(&xx.add(&yy).unwrap().add(&zz).unwrap())
                        .unwrap(),
                    CouplingTag::Zeeman => unreachable!(),
                };
                slow = slow
                    .add(&term.scale(c(kind.sign.value() * e.coupling, 0.0)))
                    .unwrap();
            }
            assert!(fast.max_abs_diff(&slow) < 1e-12, "{kind:?}");
        }
        let hz_fast = build_zeeman(&net).unwrap();
        let mut hz_slow = Operator::zeros(1 << n);
        for (s, f) in net.fields().iter().enumerate() {
            hz_slow = hz_slow
                .add(&spin_operator(n, s + 1, Axis::Z).unwrap().scale(c(*f, 0.0)))
                .unwrap();
        }
        assert!(hz_fast.max_abs_diff(&hz_slow) < 1e-12);
    }

    #[test]
    fn dipolar_identity_expansion() {
        // 3 S^zS^z - S·S = 2 S^zS^z - S^xS^x - S^yS^y, elementwise
        let net = random_network(3, 5);
        let dip = build_coupling(&net, HamiltonianKind::dipolar()).unwrap();
        let mut expanded = Operator::zeros(8);
        for e in net.edges() {
            let sx = |s| spin_operator(3, s, Axis::X).unwrap();
            let sy = |s| spin_operator(3, s, Axis::Y).unwrap();
            let sz = |s| spin_operator(3, s, Axis::Z).unwrap();
            let term = sz(e.i)
                .mul(&sz(e.j))
                .unwrap()
                .scale(c(2.0, 0.0))
                .sub(&sx(e.i).mul(&sx(e.j)).unwrap())
                .unwrap()
                .sub(&sy(e.i).mul(&sy(e.j)).unwrap())
                .unwrap();
            expanded = expanded.add(&term.scale(c(e.coupling, 0.0))).unwrap();
        }
        assert!(dip.max_abs_diff(&expanded) < 1e-12);
    }

    #[test]
    fn built_hamiltonians_are_hermitian() {
        for seed in 0..5 {
            let net = random_network(4, seed);
            for kind in [
                HamiltonianKind::xy(),
                HamiltonianKind::double_quantum(),
                HamiltonianKind::dipolar(),
            ] {
                assert!(build_total(&net, kind).unwrap().hermiticity_error() < 1e-12);
            }
        }
    }

    #[test]
    fn total_is_sum_of_builders() {
        let net = random_network(4, 23);
        let total = build_total(&net, HamiltonianKind::double_quantum()).unwrap();
        let parts = build_zeeman(&net)
            .unwrap()
            .add(&build_coupling(&net, HamiltonianKind::double_quantum()).unwrap())
            .unwrap();
        assert!(total.max_abs_diff(&parts) < 1e-15);
    }

    #[test]
    fn xy_conserves_total_spin_but_dq_does_not() {
        let net = SpinNetwork::new(
            3,
            vec![(1, 2, 62.83), (2, 3, 62.83)],
            vec![628.3, 0.0, 628.3],
        )
        .unwrap();
        let sz = total_spin_z(3).unwrap();
        let xy = build_total(&net, HamiltonianKind::xy()).unwrap();
        assert!(commutator(&xy, &sz).unwrap().max_abs() < 1e-10);
        let dq = build_coupling(&net, HamiltonianKind::double_quantum()).unwrap();
        assert!(commutator(&dq, &sz).unwrap().max_abs() > 1.0);
    }

    #[test]
    fn dq_zeeman_commutator_closed_form() {
        // [H_DQ, H_Z] = -i Σ b_lm (ω_l + ω_m)(S^xS^y + S^yS^x), pinned by the
        // direct matrix evaluation
        let net = random_network(3, 77);
        let dq = build_coupling(&net, HamiltonianKind::double_quantum()).unwrap();
        let hz = build_zeeman(&net).unwrap();
        let lhs = commutator(&dq, &hz).unwrap();
        let mut rhs = Operator::zeros(8);
        for e in net.edges() {
            let w = net.fields()[e.i - 1] + net.fields()[e.j - 1];
            let sx = |s| spin_operator(3, s, Axis::X).unwrap();
            let sy = |s| spin_operator(3, s, Axis::Y).unwrap();
            let xy = sx(e.i).mul(&sy(e.j)).unwrap();
            let yx = sy(e.i).mul(&sx(e.j)).unwrap();
            rhs = rhs
                .add(&xy.add(&yx).unwrap().scale(c(0.0, -e.coupling * w)))
                .unwrap();
        }
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn build_coupling_rejects_zeeman_tag() {
        let net = random_network(2, 1);
        let bad = HamiltonianKind::zeeman();
        assert!(build_coupling(&net, bad).is_err());
    }
}
