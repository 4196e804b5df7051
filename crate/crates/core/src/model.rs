//! The Kondo-impurity XXZ chain and its decomposition into local blocks.
//!
//! The chain has an impurity spin at site 1 coupled to one host site
//! through an exchange bond of strength `jk`; the host sites 2..N carry
//! the bulk XXZ bonds. With spin operators S = σ/2 every bond enters with
//! coefficient J/4 (Δ·J/4 on ZZ) and the field with B/2 per site.

use crate::eigen;
use crate::error::{Error, Result};
use crate::hilbert::{expectation, i_commutator, Axis, OperatorSum, PauliString, StateVector};
use crate::linalg;
use serde::{Deserialize, Serialize};

/// The impurity always sits at site 1.
pub const IMPURITY_SITE: usize = 1;

/// Zero-point constants must cancel ground expectations to this tolerance.
pub const ZERO_POINT_TOL: f64 = 1e-10;

/// Chain geometry and couplings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Number of spins (the impurity plus N−1 host sites).
    pub n_sites: usize,
    /// Bulk exchange coupling J.
    pub j: f64,
    /// ZZ anisotropy Δ (dimensionless).
    pub delta: f64,
    /// Kondo coupling J_K between the impurity and `coupled_site`.
    pub jk: f64,
    /// Uniform field B.
    pub b: f64,
    /// Host site the impurity bonds to (≥ 2).
    pub coupled_site: usize,
    /// Alice's measurement site.
    pub n_a: usize,
    /// Bob's extraction site.
    pub n_b: usize,
    /// Alice's measured Pauli axis.
    pub sigma_a_axis: Axis,
    /// The axis generating Bob's conditional rotation.
    pub sigma_b_axis: Axis,
    /// Also include a direct (1,2) bulk bond. Off by default: the impurity
    /// talks to the host only through the Kondo bond.
    pub include_impurity_bulk_bond: bool,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            n_sites: 8,
            j: 0.5,
            delta: 1.0,
            jk: 0.2,
            b: 0.4,
            coupled_site: 2,
            n_a: 4,
            n_b: 7,
            sigma_a_axis: Axis::X,
            sigma_b_axis: Axis::Y,
            include_impurity_bulk_bond: false,
        }
    }
}

impl ModelParams {
    /// Checks that apply to any spectral use of the model (no protocol
    /// geometry involved).
    pub fn validate_spectral(&self) -> Result<()> {
        if !(2..=12).contains(&self.n_sites) {
            return Err(Error::Structural(format!(
                "n_sites must be in 2..=12, got {}",
                self.n_sites
            )));
        }
        if !(2..=self.n_sites).contains(&self.coupled_site) {
            return Err(Error::Structural(format!(
                "coupled_site must be in 2..={}, got {}",
                self.n_sites, self.coupled_site
            )));
        }
        for (name, v) in [("J", self.j), ("Delta", self.delta), ("Jk", self.jk), ("B", self.b)] {
            if !v.is_finite() {
                return Err(Error::Structural(format!("{name} must be finite, got {v}")));
            }
        }
        Ok(())
    }

    /// Full validation for protocol runs, including the Alice/Bob geometry.
    ///
    /// Alice and Bob must avoid the impurity and keep |n_A − n_B| ≥ 2 so
    /// that Alice's Pauli commutes with every term of Bob's local block.
    pub fn validate(&self) -> Result<()> {
        self.validate_spectral()?;
        if self.n_sites < 4 {
            return Err(Error::Structural(format!(
                "protocol runs need n_sites in 4..=12, got {}",
                self.n_sites
            )));
        }
        for (name, site) in [("n_A", self.n_a), ("n_B", self.n_b)] {
            if !(1..=self.n_sites).contains(&site) {
                return Err(Error::Structural(format!(
                    "{name} must be in 1..={}, got {site}",
                    self.n_sites
                )));
            }
            if site == IMPURITY_SITE {
                return Err(Error::Structural(format!(
                    "{name} must not sit on the impurity site"
                )));
            }
        }
        if self.n_a == self.n_b {
            return Err(Error::Structural("n_A and n_B must differ".into()));
        }
        if self.n_a.abs_diff(self.n_b) < 2 {
            return Err(Error::Structural(
                "|n_A - n_B| must be at least 2 so Alice's Pauli commutes with Bob's block".into(),
            ));
        }
        Ok(())
    }

    /// Distance of the exchange-coupled host site from the impurity.
    pub fn impurity_distance(&self) -> usize {
        self.coupled_site - IMPURITY_SITE
    }

    /// Alice's measured Pauli (unit coefficient).
    pub fn sigma_a(&self) -> PauliString {
        PauliString::single(1.0, self.n_a, self.sigma_a_axis)
    }

    /// Bob's rotation generator (unit coefficient).
    pub fn sigma_b(&self) -> PauliString {
        PauliString::single(1.0, self.n_b, self.sigma_b_axis)
    }
}

/// One site's share of the Hamiltonian, constant included, with
/// ⟨g|op|g⟩ = 0 by construction.
#[derive(Debug, Clone)]
pub struct LocalBlock {
    pub site: usize,
    pub op: OperatorSum,
}

fn xxz_bond(coupling: f64, delta: f64, a: usize, b: usize) -> Vec<PauliString> {
    let mut terms = Vec::with_capacity(3);
    let quarter = coupling / 4.0;
    if quarter != 0.0 {
        terms.push(PauliString::two_site(quarter, (a, Axis::X), (b, Axis::X)).unwrap());
        terms.push(PauliString::two_site(quarter, (a, Axis::Y), (b, Axis::Y)).unwrap());
        if delta != 0.0 {
            terms.push(
                PauliString::two_site(quarter * delta, (a, Axis::Z), (b, Axis::Z)).unwrap(),
            );
        }
    }
    terms
}

/// First site owning a bulk bond. Site 1 joins the bulk chain only when
/// explicitly asked for, or in the two-site case where the pair itself is
/// the whole host.
fn first_bulk_site(params: &ModelParams) -> usize {
    if params.include_impurity_bulk_bond || params.n_sites == 2 {
        1
    } else {
        2
    }
}

/// Assemble the chain Hamiltonian with zero offset:
/// bulk XXZ bonds over the host sites, the Kondo bond from the impurity to
/// `coupled_site`, and a uniform Z field on every site.
pub fn build_hamiltonian(params: &ModelParams) -> Result<OperatorSum> {
    params.validate_spectral()?;
    let n = params.n_sites;
    let mut terms = Vec::new();
    for i in first_bulk_site(params)..n {
        terms.extend(xxz_bond(params.j, params.delta, i, i + 1));
    }
    terms.extend(xxz_bond(params.jk, params.delta, IMPURITY_SITE, params.coupled_site));
    if params.b != 0.0 {
        for i in 1..=n {
            terms.push(PauliString::single(params.b / 2.0, i, Axis::Z));
        }
    }
    Ok(OperatorSum::from_terms(terms, 0.0))
}

/// Move the offset so the ground energy becomes zero: `h − e0·I`.
pub fn shift_ground(h: &OperatorSum, e0: f64) -> OperatorSum {
    h.with_offset_shifted(-e0)
}

/// Every term of `h` incident to `site`, plus a constant cancelling the
/// ground expectation. All omitted terms commute with any Pauli at `site`,
/// so [h, σ_site] = [block, σ_site] holds term by term.
fn incident_block(h: &OperatorSum, site: usize, g: &StateVector) -> Result<OperatorSum> {
    let touched = OperatorSum::from_terms(h.terms_on_site(site).cloned(), 0.0);
    let eps = -expectation(&touched, g)?;
    Ok(touched.with_offset_shifted(eps))
}

/// Bob's extraction block: the field at `n_B` plus every bond of `h`
/// incident to `n_B`, with the zero-point constant folded in.
pub fn bob_local_hamiltonian(params: &ModelParams, g: &StateVector) -> Result<LocalBlock> {
    let h = build_hamiltonian(params)?;
    if h.terms_on_site(params.n_b).next().is_none() {
        return Err(Error::DegenerateModel(format!(
            "no Hamiltonian term touches n_B = {}",
            params.n_b
        )));
    }
    let op = incident_block(&h, params.n_b, g)?;
    Ok(LocalBlock {
        site: params.n_b,
        op,
    })
}

/// Split the shifted Hamiltonian into per-site blocks h_n with
/// ⟨g|h_n|g⟩ = 0: each bond goes to its lower-indexed site, each field to
/// its own site, and per-block constants absorb the ground expectations.
/// The blocks sum to `H − E₀·I` term for term.
pub fn zero_point_partition(params: &ModelParams, g: &StateVector) -> Result<Vec<LocalBlock>> {
    let n = params.n_sites;
    let mut blocks = Vec::with_capacity(n);
    for site in 1..=n {
        let mut terms = Vec::new();
        if site >= first_bulk_site(params) && site < n {
            terms.extend(xxz_bond(params.j, params.delta, site, site + 1));
        }
        if site == IMPURITY_SITE {
            terms.extend(xxz_bond(params.jk, params.delta, IMPURITY_SITE, params.coupled_site));
        }
        if params.b != 0.0 {
            terms.push(PauliString::single(params.b / 2.0, site, Axis::Z));
        }
        let bare = OperatorSum::from_terms(terms, 0.0);
        let eps = -expectation(&bare, g)?;
        blocks.push(LocalBlock {
            site,
            op: bare.with_offset_shifted(eps),
        });
    }
    Ok(blocks)
}

/// Residual spectral norm of i[h,s] − i[block,s], evaluated densely on the
/// joint support. Zero exactly when the block reproduces the commutator.
pub fn check_commutator_condition(
    h: &OperatorSum,
    block: &OperatorSum,
    s: &PauliString,
) -> Result<f64> {
    let diff = i_commutator(h, s)?.sub(&i_commutator(block, s)?);
    linalg::spectral_norm(&diff)
}

/// Convenience: ground-solve the chain Hamiltonian.
pub fn solve_ground(params: &ModelParams) -> Result<(OperatorSum, eigen::GroundResult)> {
    let h = build_hamiltonian(params)?;
    let ground = eigen::ground_state(&h, params.n_sites)?;
    Ok((h, ground))
}
