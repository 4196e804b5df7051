//! Exact diagonalization: lowest eigenpairs, ground state, gap and
//! degeneracy detection.
//!
//! Operators on up to 12 sites (dimension 4096) go through a dense
//! symmetric eigensolve; larger problems fall back to Lanczos with full
//! reorthogonalization behind the same contract.

use crate::error::{Error, Result};
use crate::hilbert::{apply_operator, OperatorSum, StateVector};
use crate::linalg;
use nalgebra::DVector;
use num_complex::Complex64;

/// Ground states with a gap below this are flagged degenerate.
pub const DEGENERACY_TOL: f64 = 1e-10;

/// Largest dimension handled by the dense path (12 sites).
pub const DENSE_DIM_LIMIT: usize = 4096;

/// Ground-state solve output.
#[derive(Debug, Clone)]
pub struct GroundResult {
    /// Ground energy E₀.
    pub e0: f64,
    /// Phase-fixed ground eigenvector.
    pub state: StateVector,
    /// E₁ − E₀ ≥ 0.
    pub gap: f64,
    /// True when the gap is below [`DEGENERACY_TOL`].
    pub degenerate: bool,
}

/// The `k` lowest eigenpairs of a Hermitian operator on `n_sites` sites,
/// in nondecreasing energy order.
///
/// Eigenvectors are orthonormal and phase-fixed: the first amplitude of
/// significant magnitude (in basis order) is real positive.
pub fn lowest_eigenpairs(
    h: &OperatorSum,
    n_sites: usize,
    k: usize,
) -> Result<Vec<(f64, StateVector)>> {
    let dim = 1usize
        .checked_shl(n_sites as u32)
        .ok_or_else(|| Error::Capability(format!("{n_sites} sites overflow the index space")))?;
    if k == 0 || k > dim {
        return Err(Error::Structural(format!(
            "requested {k} eigenpairs from a dimension-{dim} space"
        )));
    }
    if h.max_site() > n_sites {
        return Err(Error::SiteOutOfRange {
            site: h.max_site(),
            n_sites,
        });
    }
    if dim <= DENSE_DIM_LIMIT {
        lowest_eigenpairs_dense(h, n_sites, k)
    } else {
        lanczos_lowest(h, n_sites, k, 4 * dim.min(600), 1e-10)
    }
}

fn lowest_eigenpairs_dense(
    h: &OperatorSum,
    n_sites: usize,
    k: usize,
) -> Result<Vec<(f64, StateVector)>> {
    let (values, vectors) = match h.to_dense_real(n_sites)? {
        Some(real) => linalg::symmetric_eigen_real(&real),
        None => linalg::hermitian_eigen(&h.to_dense(n_sites)?),
    };
    let mut out = Vec::with_capacity(k);
    for i in 0..k {
        let amps: Vec<Complex64> = vectors.column(i).iter().copied().collect();
        let state = StateVector::from_amplitudes_raw(n_sites, amps)?;
        out.push((values[i], phase_fix(&state)));
    }
    Ok(out)
}

/// Ground state, gap and degeneracy flag for a Hermitian operator.
pub fn ground_state(h: &OperatorSum, n_sites: usize) -> Result<GroundResult> {
    let pairs = lowest_eigenpairs(h, n_sites, 2)?;
    let e0 = pairs[0].0;
    let gap = (pairs[1].0 - e0).max(0.0);
    Ok(GroundResult {
        e0,
        state: pairs[0].1.clone(),
        gap,
        degenerate: gap < DEGENERACY_TOL,
    })
}

/// Multiply the state by a unit phase so its first significant amplitude
/// (basis order) is real positive.
fn phase_fix(state: &StateVector) -> StateVector {
    let max_abs = state
        .amplitudes()
        .iter()
        .map(|a| a.norm())
        .max_by(f64::total_cmp)
        .unwrap_or(0.0);
    if max_abs == 0.0 {
        return state.clone();
    }
    let lead = state
        .amplitudes()
        .iter()
        .find(|a| a.norm() > 1e-12 * max_abs)
        .copied()
        .unwrap_or(Complex64::new(1.0, 0.0));
    state.scaled(lead.conj() / lead.norm())
}

/// Lanczos with full reorthogonalization for the `k` lowest eigenpairs.
///
/// Deterministic: the start vector is derived from a fixed splitmix64
/// stream. Fails with the iteration count when the Ritz residuals do not
/// reach `tol` within `max_iter` steps.
pub fn lanczos_lowest(
    h: &OperatorSum,
    n_sites: usize,
    k: usize,
    max_iter: usize,
    tol: f64,
) -> Result<Vec<(f64, StateVector)>> {
    let dim = 1usize << n_sites;
    let m_max = max_iter.min(dim);
    if m_max < k {
        return Err(Error::SolverFailure { iterations: m_max });
    }

    let mut basis: Vec<DVector<Complex64>> = Vec::with_capacity(m_max);
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();

    let mut seed = 0x9e3779b97f4a7c15u64;
    let mut v = deterministic_unit_vector(dim, &mut seed);
    basis.push(v.clone());

    let matvec = |x: &DVector<Complex64>| -> Result<DVector<Complex64>> {
        let st = StateVector::from_amplitudes_raw(n_sites, x.iter().copied().collect())?;
        let out = apply_operator(h, &st)?;
        Ok(DVector::from_vec(out.amplitudes().to_vec()))
    };

    for j in 0..m_max {
        let mut w = matvec(&v)?;
        let alpha = re_dot(&basis[j], &w);
        alphas.push(alpha);
        // two-pass full reorthogonalization keeps the basis orthonormal
        for _ in 0..2 {
            for b in &basis {
                let c = dot(b, &w);
                w.axpy(-c, b, Complex64::new(1.0, 0.0));
            }
        }
        let beta = w.norm();

        // check convergence of the k lowest Ritz pairs
        if basis.len() >= k {
            let (ritz_vals, ritz_vecs) = tridiag_eigen(&alphas, &betas);
            let m = basis.len();
            let converged = (0..k).all(|i| {
                let last = ritz_vecs[(m - 1, i)];
                (beta * last).abs() < tol * ritz_vals[i].abs().max(1.0)
            });
            if converged || beta < 1e-13 || m == dim {
                if !converged && basis.len() < k {
                    return Err(Error::SolverFailure { iterations: m });
                }
                return assemble_ritz(n_sites, &basis, &ritz_vals, &ritz_vecs, k);
            }
        } else if beta < 1e-13 {
            // invariant subspace smaller than k: extend with a fresh
            // direction orthogonal to everything found so far
            let mut fresh = deterministic_unit_vector(dim, &mut seed);
            for b in &basis {
                let c = dot(b, &fresh);
                fresh.axpy(-c, b, Complex64::new(1.0, 0.0));
            }
            let n = fresh.norm();
            if n < 1e-13 {
                return Err(Error::SolverFailure { iterations: basis.len() });
            }
            betas.push(0.0);
            v = fresh.unscale(n);
            basis.push(v.clone());
            continue;
        }

        betas.push(beta);
        v = w.unscale(beta);
        basis.push(v.clone());
    }
    Err(Error::SolverFailure { iterations: m_max })
}

fn assemble_ritz(
    n_sites: usize,
    basis: &[DVector<Complex64>],
    vals: &[f64],
    vecs: &nalgebra::DMatrix<f64>,
    k: usize,
) -> Result<Vec<(f64, StateVector)>> {
    let dim = basis[0].len();
    let m = basis.len();
    let mut out = Vec::with_capacity(k);
    for i in 0..k {
        let mut x = DVector::<Complex64>::zeros(dim);
        for (j, b) in basis.iter().enumerate().take(m) {
            x.axpy(Complex64::new(vecs[(j, i)], 0.0), b, Complex64::new(1.0, 0.0));
        }
        let n = x.norm();
        let st = StateVector::from_amplitudes_raw(
            n_sites,
            x.unscale(n).iter().copied().collect(),
        )?;
        out.push((vals[i], phase_fix(&st)));
    }
    Ok(out)
}

/// Eigendecomposition of the real symmetric tridiagonal Lanczos matrix.
fn tridiag_eigen(alphas: &[f64], betas: &[f64]) -> (Vec<f64>, nalgebra::DMatrix<f64>) {
    let m = alphas.len();
    let mut t = nalgebra::DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alphas[i];
        if i + 1 < m {
            t[(i, i + 1)] = betas[i];
            t[(i + 1, i)] = betas[i];
        }
    }
    let eig = t.symmetric_eigen();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = nalgebra::DMatrix::from_columns(
        &order.iter().map(|&i| eig.eigenvectors.column(i)).collect::<Vec<_>>(),
    );
    (vals, vecs)
}

fn dot(a: &DVector<Complex64>, b: &DVector<Complex64>) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

fn re_dot(a: &DVector<Complex64>, b: &DVector<Complex64>) -> f64 {
    dot(a, b).re
}

fn deterministic_unit_vector(dim: usize, seed: &mut u64) -> DVector<Complex64> {
    let mut v = DVector::<Complex64>::zeros(dim);
    for i in 0..dim {
        v[i] = Complex64::new(splitmix64(seed) as f64 / u64::MAX as f64 - 0.5, 0.0);
    }
    let n = v.norm();
    v.unscale(n)
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{Axis, PauliString};
    use approx::assert_abs_diff_eq;

    /// (1/4)(X₁X₂ + Y₁Y₂ + Z₁Z₂): singlet at -3/4, triplet at +1/4.
    fn heisenberg_pair() -> OperatorSum {
        OperatorSum::from_terms(
            [
                PauliString::two_site(0.25, (1, Axis::X), (2, Axis::X)).unwrap(),
                PauliString::two_site(0.25, (1, Axis::Y), (2, Axis::Y)).unwrap(),
                PauliString::two_site(0.25, (1, Axis::Z), (2, Axis::Z)).unwrap(),
            ],
            0.0,
        )
    }

    #[test]
    fn heisenberg_pair_spectrum() {
        let pairs = lowest_eigenpairs(&heisenberg_pair(), 2, 4).unwrap();
        let energies: Vec<f64> = pairs.iter().map(|(e, _)| *e).collect();
        let expected = [-0.75, 0.25, 0.25, 0.25];
        for (got, want) in energies.iter().zip(expected) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-12);
        }
    }

    #[test]
    fn heisenberg_pair_ground() {
        let g = ground_state(&heisenberg_pair(), 2).unwrap();
        assert_abs_diff_eq!(g.e0, -0.75, epsilon = 1e-12);
        assert_abs_diff_eq!(g.gap, 1.0, epsilon = 1e-12);
        assert!(!g.degenerate);
        // residual ‖Hψ − E₀ψ‖
        let hpsi = apply_operator(&heisenberg_pair(), &g.state).unwrap();
        let res = hpsi.add(&g.state.scaled(Complex64::new(-g.e0, 0.0)));
        assert!(res.norm() < 1e-9);
    }

    #[test]
    fn single_site_field() {
        let h = OperatorSum::from_terms([PauliString::single(0.2, 1, Axis::Z)], 0.0);
        let g = ground_state(&h, 1).unwrap();
        assert_abs_diff_eq!(g.e0, -0.2, epsilon = 1e-14);
        // ground is |1⟩ (spin down)
        assert_abs_diff_eq!(g.state.amplitudes()[1].re, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn constant_shift_moves_energies_only() {
        let h = heisenberg_pair();
        let shifted = h.with_offset_shifted(2.5);
        let a = lowest_eigenpairs(&h, 2, 4).unwrap();
        let b = lowest_eigenpairs(&shifted, 2, 4).unwrap();
        for ((ea, va), (eb, vb)) in a.iter().zip(&b) {
            assert_abs_diff_eq!(eb - ea, 2.5, epsilon = 1e-12);
            let overlap = va.inner(vb).norm();
            assert_abs_diff_eq!(overlap, 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn zero_hamiltonian_is_degenerate() {
        let g = ground_state(&OperatorSum::zero(), 2).unwrap();
        assert!(g.degenerate);
        assert_abs_diff_eq!(g.gap, 0.0);
    }

    #[test]
    fn eigenvectors_orthonormal_and_phase_fixed() {
        let h = OperatorSum::from_terms(
            [
                PauliString::two_site(0.3, (1, Axis::X), (2, Axis::Y)).unwrap(),
                PauliString::two_site(0.7, (2, Axis::Z), (3, Axis::Z)).unwrap(),
                PauliString::single(0.1, 1, Axis::Z),
            ],
            0.0,
        );
        let pairs = lowest_eigenpairs(&h, 3, 8).unwrap();
        for (i, (_, vi)) in pairs.iter().enumerate() {
            for (j, (_, vj)) in pairs.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(vi.inner(vj).norm(), want, epsilon = 1e-10);
            }
            let max_abs = vi.amplitudes().iter().map(|a| a.norm()).fold(0.0, f64::max);
            let lead = vi
                .amplitudes()
                .iter()
                .find(|a| a.norm() > 1e-12 * max_abs)
                .unwrap();
            assert!(lead.re > 0.0 && lead.im.abs() < 1e-10);
        }
    }

    #[test]
    fn lanczos_agrees_with_dense() {
        let h = OperatorSum::from_terms(
            [
                PauliString::two_site(0.25, (1, Axis::X), (2, Axis::X)).unwrap(),
                PauliString::two_site(0.25, (2, Axis::Y), (3, Axis::Y)).unwrap(),
                PauliString::two_site(0.25, (3, Axis::Z), (4, Axis::Z)).unwrap(),
                PauliString::two_site(0.25, (4, Axis::X), (5, Axis::X)).unwrap(),
                PauliString::two_site(0.25, (5, Axis::Y), (6, Axis::Y)).unwrap(),
                PauliString::single(0.15, 3, Axis::Z),
            ],
            0.0,
        );
        let dense = lowest_eigenpairs(&h, 6, 3).unwrap();
        let iterative = lanczos_lowest(&h, 6, 3, 200, 1e-11).unwrap();
        for ((ed, vd), (ei, vi)) in dense.iter().zip(&iterative) {
            assert_abs_diff_eq!(ed, ei, epsilon = 1e-9);
            assert_abs_diff_eq!(vd.inner(vi).norm(), 1.0, epsilon = 1e-7);
        }
    }

    #[test]
    fn lanczos_reports_iterations_on_failure() {
        let h = heisenberg_pair();
        match lanczos_lowest(&h, 2, 3, 1, 1e-12) {
            Err(Error::SolverFailure { iterations }) => assert!(iterations <= 1),
            other => panic!("expected solver failure, got {other:?}"),
        }
    }

    #[test]
    fn bad_k_rejected() {
        assert!(lowest_eigenpairs(&heisenberg_pair(), 2, 0).is_err());
        assert!(lowest_eigenpairs(&heisenberg_pair(), 2, 5).is_err());
    }
}
