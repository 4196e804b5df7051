//! Operator algebra kernel: Pauli strings, Hermitian operator sums, and
//! their action on state vectors.
//!
//! Conventions used throughout the crate:
//! - sites are 1-based,
//! - site 1 occupies the most significant bit of a basis index,
//! - basis bit 0 means spin up (Z eigenvalue +1).

use crate::error::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Tolerance below which the imaginary part of an expectation value is
/// treated as numerical noise.
pub const IM_TOL: f64 = 1e-10;

/// A single-site Pauli axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl std::fmt::Display for Axis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Axis::X => write!(f, "X"),
            Axis::Y => write!(f, "Y"),
            Axis::Z => write!(f, "Z"),
        }
    }
}

impl std::str::FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "X" | "x" => Ok(Axis::X),
            "Y" | "y" => Ok(Axis::Y),
            "Z" | "z" => Ok(Axis::Z),
            other => Err(Error::Structural(format!("unknown Pauli axis '{other}'"))),
        }
    }
}

/// A weighted tensor product of single-site Pauli operators.
///
/// `factors` is sorted by site and holds at most one axis per site; an
/// empty factor list with coefficient `c` denotes `c · Identity`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PauliString {
    coeff: f64,
    factors: Vec<(usize, Axis)>,
}

impl PauliString {
    /// `coeff · Identity`.
    pub fn identity(coeff: f64) -> Self {
        Self {
            coeff,
            factors: Vec::new(),
        }
    }

    /// A single-site Pauli, e.g. `0.5 · X_3`.
    pub fn single(coeff: f64, site: usize, axis: Axis) -> Self {
        Self::new(coeff, [(site, axis)]).expect("single-site factor is always valid")
    }

    /// A two-site product, e.g. `0.25 · X_2 X_3`.
    pub fn two_site(coeff: f64, a: (usize, Axis), b: (usize, Axis)) -> Result<Self> {
        Self::new(coeff, [a, b])
    }

    /// General constructor. Rejects non-finite coefficients, site index 0
    /// and duplicate sites.
    pub fn new(coeff: f64, factors: impl IntoIterator<Item = (usize, Axis)>) -> Result<Self> {
        if !coeff.is_finite() {
            return Err(Error::Structural(format!(
                "non-finite Pauli coefficient {coeff}"
            )));
        }
        let mut v: Vec<(usize, Axis)> = factors.into_iter().collect();
        v.sort_by_key(|(s, _)| *s);
        for w in v.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::Structural(format!(
                    "duplicate Pauli factor on site {}",
                    w[0].0
                )));
            }
        }
        if v.first().is_some_and(|(s, _)| *s == 0) {
            return Err(Error::Structural("site indices are 1-based".into()));
        }
        Ok(Self { coeff, factors: v })
    }

    pub fn coeff(&self) -> f64 {
        self.coeff
    }

    /// Non-identity factors, sorted by site.
    pub fn factors(&self) -> &[(usize, Axis)] {
        &self.factors
    }

    /// Same factors, different weight.
    pub fn with_coeff(&self, coeff: f64) -> Self {
        Self {
            coeff,
            factors: self.factors.clone(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.factors.is_empty()
    }

    /// Largest site index referenced, or 0 for the identity.
    pub fn max_site(&self) -> usize {
        self.factors.last().map_or(0, |(s, _)| *s)
    }

    /// Whether the string has a factor on `site`.
    pub fn acts_on(&self, site: usize) -> bool {
        self.factors.binary_search_by_key(&site, |(s, _)| *s).is_ok()
    }

    /// Number of Y factors; the string's dense matrix is real iff this is even.
    fn y_count(&self) -> usize {
        self.factors.iter().filter(|(_, a)| *a == Axis::Y).count()
    }
}

/// Single-site Pauli product table: `left · right = (phase, axis)`.
/// The phase is one of ±1, ±i; `None` axis means the product is identity.
fn pauli_mul(left: Axis, right: Axis) -> (Complex64, Option<Axis>) {
    use Axis::*;
    let i = Complex64::i();
    match (left, right) {
        (X, X) | (Y, Y) | (Z, Z) => (Complex64::new(1.0, 0.0), None),
        (X, Y) => (i, Some(Z)),
        (Y, X) => (-i, Some(Z)),
        (Y, Z) => (i, Some(X)),
        (Z, Y) => (-i, Some(X)),
        (Z, X) => (i, Some(Y)),
        (X, Z) => (-i, Some(Y)),
    }
}

/// Product of two Pauli strings as `phase × result`.
///
/// The returned string carries the product of the input coefficients; the
/// phase is a unit in {±1, ±i}.
pub fn multiply_strings(p: &PauliString, q: &PauliString) -> (Complex64, PauliString) {
    let mut phase = Complex64::new(1.0, 0.0);
    let mut factors = Vec::with_capacity(p.factors.len() + q.factors.len());
    let (mut ip, mut iq) = (0, 0);
    while ip < p.factors.len() && iq < q.factors.len() {
        let (sp, ap) = p.factors[ip];
        let (sq, aq) = q.factors[iq];
        match sp.cmp(&sq) {
            std::cmp::Ordering::Less => {
                factors.push((sp, ap));
                ip += 1;
            }
            std::cmp::Ordering::Greater => {
                factors.push((sq, aq));
                iq += 1;
            }
            std::cmp::Ordering::Equal => {
                let (ph, axis) = pauli_mul(ap, aq);
                phase *= ph;
                if let Some(axis) = axis {
                    factors.push((sp, axis));
                }
                ip += 1;
                iq += 1;
            }
        }
    }
    factors.extend_from_slice(&p.factors[ip..]);
    factors.extend_from_slice(&q.factors[iq..]);
    (
        phase,
        PauliString {
            coeff: p.coeff * q.coeff,
            factors,
        },
    )
}

/// A Hermitian operator: a merged sum of real-weighted Pauli strings plus a
/// real additive constant.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct OperatorSum {
    terms: Vec<PauliString>,
    offset: f64,
}

impl OperatorSum {
    /// The zero operator.
    pub fn zero() -> Self {
        Self::default()
    }

    /// Build from terms, merging duplicates and dropping exact zeros.
    pub fn from_terms(terms: impl IntoIterator<Item = PauliString>, offset: f64) -> Self {
        let mut sum = Self {
            terms: Vec::new(),
            offset,
        };
        let mut merged: BTreeMap<Vec<(usize, Axis)>, f64> = BTreeMap::new();
        for t in terms {
            *merged.entry(t.factors).or_insert(0.0) += t.coeff;
        }
        for (factors, coeff) in merged {
            if factors.is_empty() {
                sum.offset += coeff;
            } else if coeff != 0.0 {
                sum.terms.push(PauliString { coeff, factors });
            }
        }
        sum
    }

    pub fn terms(&self) -> &[PauliString] {
        &self.terms
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty() && self.offset == 0.0
    }

    /// Largest site index referenced by any term (0 if none).
    pub fn max_site(&self) -> usize {
        self.terms.iter().map(PauliString::max_site).max().unwrap_or(0)
    }

    /// Sorted list of sites any term acts on.
    pub fn support(&self) -> Vec<usize> {
        let mut sites: Vec<usize> = self
            .terms
            .iter()
            .flat_map(|t| t.factors.iter().map(|(s, _)| *s))
            .collect();
        sites.sort_unstable();
        sites.dedup();
        sites
    }

    /// Terms acting on `site` (without the offset).
    pub fn terms_on_site(&self, site: usize) -> impl Iterator<Item = &PauliString> {
        self.terms.iter().filter(move |t| t.acts_on(site))
    }

    /// Same terms with the offset moved by `delta`.
    pub fn with_offset_shifted(&self, delta: f64) -> Self {
        Self {
            terms: self.terms.clone(),
            offset: self.offset + delta,
        }
    }

    /// Term-wise sum.
    pub fn add(&self, other: &Self) -> Self {
        Self::from_terms(
            self.terms.iter().chain(other.terms.iter()).cloned(),
            self.offset + other.offset,
        )
    }

    /// Term-wise difference; exact cancellation yields an empty sum.
    pub fn sub(&self, other: &Self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .cloned()
                .chain(other.terms.iter().map(|t| t.with_coeff(-t.coeff))),
            self.offset - other.offset,
        )
    }

    /// True when every term has an even number of Y factors, i.e. the dense
    /// matrix in the computational basis is real symmetric.
    pub fn is_real_in_z_basis(&self) -> bool {
        self.terms.iter().all(|t| t.y_count() % 2 == 0)
    }

    /// Dense matrix on the full `2^n_sites` space.
    pub fn to_dense(&self, n_sites: usize) -> Result<DMatrix<Complex64>> {
        if n_sites > 12 {
            return Err(Error::Capability(format!(
                "dense materialization limited to 12 sites, got {n_sites}"
            )));
        }
        if self.max_site() > n_sites {
            return Err(Error::SiteOutOfRange {
                site: self.max_site(),
                n_sites,
            });
        }
        let dim = 1usize << n_sites;
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        for t in &self.terms {
            for col in 0..dim {
                let (row, amp) = apply_string_to_basis(t, n_sites, col);
                m[(row, col)] += amp;
            }
        }
        let off = Complex64::new(self.offset, 0.0);
        for d in 0..dim {
            m[(d, d)] += off;
        }
        Ok(m)
    }

    /// Dense matrix restricted to the operator's support sites (offset
    /// included). Returns the sorted support alongside the matrix; the
    /// identity action on all other sites is implicit.
    pub fn to_dense_on_support(&self) -> Result<(Vec<usize>, DMatrix<Complex64>)> {
        let support = self.support();
        if support.len() > 12 {
            return Err(Error::Capability(format!(
                "support of {} sites is too large for dense materialization",
                support.len()
            )));
        }
        let relabel: BTreeMap<usize, usize> =
            support.iter().enumerate().map(|(i, s)| (*s, i + 1)).collect();
        let compact = Self {
            terms: self
                .terms
                .iter()
                .map(|t| PauliString {
                    coeff: t.coeff,
                    factors: t.factors.iter().map(|(s, a)| (relabel[s], *a)).collect(),
                })
                .collect(),
            offset: self.offset,
        };
        let m = compact.to_dense(support.len())?;
        Ok((support, m))
    }

    /// Real dense matrix, available when `is_real_in_z_basis` holds.
    pub fn to_dense_real(&self, n_sites: usize) -> Result<Option<DMatrix<f64>>> {
        if !self.is_real_in_z_basis() {
            return Ok(None);
        }
        let m = self.to_dense(n_sites)?;
        Ok(Some(m.map(|c| c.re)))
    }
}

/// A complex amplitude vector over the `2^n_sites` computational basis.
///
/// Results of operator application are generally unnormalized ("raw");
/// [`StateVector::is_normalized`] distinguishes the two flavors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    n_sites: usize,
    amplitudes: Vec<Complex64>,
}

/// Norm tolerance for the normalized flavor.
pub const NORM_TOL: f64 = 1e-12;

impl StateVector {
    /// The computational basis state with the given index.
    pub fn basis_state(n_sites: usize, index: usize) -> Self {
        let dim = 1usize << n_sites;
        assert!(index < dim, "basis index {index} out of range for {n_sites} sites");
        let mut amplitudes = vec![Complex64::default(); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Self { n_sites, amplitudes }
    }

    /// Wrap raw amplitudes without normalization.
    pub fn from_amplitudes_raw(n_sites: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != 1usize << n_sites {
            return Err(Error::Structural(format!(
                "expected 2^{n_sites} amplitudes, got {}",
                amplitudes.len()
            )));
        }
        Ok(Self { n_sites, amplitudes })
    }

    /// Wrap amplitudes that must already be normalized to within `NORM_TOL`.
    pub fn from_amplitudes(n_sites: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        let v = Self::from_amplitudes_raw(n_sites, amplitudes)?;
        let norm = v.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Structural(format!(
                "state norm {norm} deviates from 1 beyond {NORM_TOL:e}"
            )));
        }
        Ok(v)
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() <= NORM_TOL
    }

    /// Rescale to unit norm. Fails on the zero vector.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::Structural("cannot normalize the zero vector".into()));
        }
        Ok(self.scaled(Complex64::new(1.0 / n, 0.0)))
    }

    /// ⟨self|other⟩ with the conjugate on `self`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        assert_eq!(self.n_sites, other.n_sites, "site-count mismatch");
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self {
            n_sites: self.n_sites,
            amplitudes: self.amplitudes.iter().map(|a| a * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n_sites, other.n_sites, "site-count mismatch");
        Self {
            n_sites: self.n_sites,
            amplitudes: self
                .amplitudes
                .iter()
                .zip(&other.amplitudes)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// ⟨Z_site⟩ for a single site, straight from the amplitudes.
    pub fn z_expectation(&self, site: usize) -> f64 {
        let shift = self.n_sites - site;
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(idx, a)| {
                let sign = if (idx >> shift) & 1 == 0 { 1.0 } else { -1.0 };
                sign * a.norm_sqr()
            })
            .sum()
    }
}

/// Action of a Pauli string on one basis state: `p |col⟩ = amp |row⟩`.
#[inline]
fn apply_string_to_basis(p: &PauliString, n_sites: usize, col: usize) -> (usize, Complex64) {
    let mut row = col;
    let mut amp = Complex64::new(p.coeff, 0.0);
    for &(site, axis) in &p.factors {
        let shift = n_sites - site;
        let bit = (col >> shift) & 1;
        match axis {
            Axis::Z => {
                if bit == 1 {
                    amp = -amp;
                }
            }
            Axis::X => {
                row ^= 1 << shift;
            }
            Axis::Y => {
                row ^= 1 << shift;
                // Y|0⟩ = i|1⟩, Y|1⟩ = -i|0⟩
                amp *= if bit == 0 { Complex64::i() } else { -Complex64::i() };
            }
        }
    }
    (row, amp)
}

/// Apply a Pauli string to a state. The result is raw (unnormalized).
pub fn apply_pauli_string(p: &PauliString, psi: &StateVector) -> Result<StateVector> {
    if p.max_site() > psi.n_sites() {
        return Err(Error::SiteOutOfRange {
            site: p.max_site(),
            n_sites: psi.n_sites(),
        });
    }
    let dim = psi.dim();
    let mut out = vec![Complex64::default(); dim];
    for col in 0..dim {
        let a = psi.amplitudes[col];
        if a == Complex64::default() {
            continue;
        }
        let (row, amp) = apply_string_to_basis(p, psi.n_sites, col);
        out[row] += amp * a;
    }
    StateVector::from_amplitudes_raw(psi.n_sites, out)
}

/// Apply an operator sum (terms plus offset) to a state. Raw result.
pub fn apply_operator(h: &OperatorSum, psi: &StateVector) -> Result<StateVector> {
    if h.max_site() > psi.n_sites() {
        return Err(Error::SiteOutOfRange {
            site: h.max_site(),
            n_sites: psi.n_sites(),
        });
    }
    let dim = psi.dim();
    let mut out = vec![Complex64::default(); dim];
    for t in &h.terms {
        for col in 0..dim {
            let a = psi.amplitudes[col];
            if a == Complex64::default() {
                continue;
            }
            let (row, amp) = apply_string_to_basis(t, psi.n_sites, col);
            out[row] += amp * a;
        }
    }
    if h.offset != 0.0 {
        let off = Complex64::new(h.offset, 0.0);
        for (o, a) in out.iter_mut().zip(&psi.amplitudes) {
            *o += off * a;
        }
    }
    StateVector::from_amplitudes_raw(psi.n_sites, out)
}

/// ⟨psi|h|psi⟩ for a normalized state. The imaginary residue must stay
/// below [`IM_TOL`]; it is checked and discarded.
pub fn expectation(h: &OperatorSum, psi: &StateVector) -> Result<f64> {
    let hpsi = apply_operator(h, psi)?;
    let val = psi.inner(&hpsi);
    if val.im.abs() >= IM_TOL {
        return Err(Error::NumericalConsistency {
            context: "expectation value".into(),
            residual: val.im.abs(),
        });
    }
    Ok(val.re)
}

/// i[h, s] as an operator sum with real coefficients.
///
/// Terms of `h` commuting with `s` drop out, as does the offset. For Pauli
/// strings the phases work out so every surviving coefficient is exactly
/// real; a residue above 1e-12 signals a consistency bug.
pub fn i_commutator(h: &OperatorSum, s: &PauliString) -> Result<OperatorSum> {
    let mut terms = Vec::new();
    for t in &h.terms {
        let (ph_ts, prod) = multiply_strings(t, s);
        let (ph_st, _) = multiply_strings(s, t);
        let coeff_c = Complex64::i() * (ph_ts - ph_st) * prod.coeff;
        if coeff_c == Complex64::default() {
            continue;
        }
        if coeff_c.im.abs() >= 1e-12 {
            return Err(Error::NumericalConsistency {
                context: "commutator coefficient".into(),
                residual: coeff_c.im.abs(),
            });
        }
        terms.push(prod.with_coeff(coeff_c.re));
    }
    Ok(OperatorSum::from_terms(terms, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn pauli_action_on_single_qubit() {
        let zero = StateVector::basis_state(1, 0);

        let z = apply_pauli_string(&PauliString::single(1.0, 1, Axis::Z), &zero).unwrap();
        assert_eq!(z.amplitudes(), &[c(1.0, 0.0), c(0.0, 0.0)]);

        let x = apply_pauli_string(&PauliString::single(1.0, 1, Axis::X), &zero).unwrap();
        assert_eq!(x.amplitudes(), &[c(0.0, 0.0), c(1.0, 0.0)]);

        let y = apply_pauli_string(&PauliString::single(1.0, 1, Axis::Y), &zero).unwrap();
        assert_eq!(y.amplitudes(), &[c(0.0, 0.0), c(0.0, 1.0)]);
    }

    #[test]
    fn site_one_is_most_significant_bit() {
        // |01⟩ on two sites: site 1 up, site 2 down.
        let psi = StateVector::basis_state(2, 0b01);
        assert_abs_diff_eq!(psi.z_expectation(1), 1.0);
        assert_abs_diff_eq!(psi.z_expectation(2), -1.0);

        let x1 = apply_pauli_string(&PauliString::single(1.0, 1, Axis::X), &psi).unwrap();
        assert_eq!(x1.amplitudes()[0b11], c(1.0, 0.0));
    }

    #[test]
    fn apply_operator_with_offset() {
        let zero = StateVector::basis_state(1, 0);
        let h = OperatorSum::from_terms([PauliString::single(1.0, 1, Axis::Z)], 1.0);
        let out = apply_operator(&h, &zero).unwrap();
        assert_eq!(out.amplitudes()[0], c(2.0, 0.0));

        let empty = OperatorSum::zero();
        let out = apply_operator(&empty, &zero).unwrap();
        assert_eq!(out.norm(), 0.0);

        let one = StateVector::basis_state(1, 1);
        let h = OperatorSum::from_terms([PauliString::single(0.2, 1, Axis::Z)], 0.0);
        let out = apply_operator(&h, &one).unwrap();
        assert_abs_diff_eq!(out.amplitudes()[1].re, -0.2, epsilon = 1e-15);
    }

    #[test]
    fn expectation_unit_cases() {
        let zero = StateVector::basis_state(1, 0);
        let z = OperatorSum::from_terms([PauliString::single(1.0, 1, Axis::Z)], 0.0);
        assert_abs_diff_eq!(expectation(&z, &zero).unwrap(), 1.0);

        let inv = 1.0 / 2f64.sqrt();
        let plus = StateVector::from_amplitudes(1, vec![c(inv, 0.0), c(inv, 0.0)]).unwrap();
        let x = OperatorSum::from_terms([PauliString::single(1.0, 1, Axis::X)], 0.0);
        assert_abs_diff_eq!(expectation(&x, &plus).unwrap(), 1.0, epsilon = 1e-15);

        let bell = StateVector::from_amplitudes(
            2,
            vec![c(inv, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(inv, 0.0)],
        )
        .unwrap();
        let xx = OperatorSum::from_terms(
            [PauliString::two_site(1.0, (1, Axis::X), (2, Axis::X)).unwrap()],
            0.0,
        );
        assert_abs_diff_eq!(expectation(&xx, &bell).unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn string_products() {
        let x = PauliString::single(1.0, 1, Axis::X);
        let y = PauliString::single(1.0, 1, Axis::Y);
        let (phase, r) = multiply_strings(&x, &y);
        assert_eq!(phase, Complex64::i());
        assert_eq!(r.factors(), &[(1, Axis::Z)]);

        let (phase, r) = multiply_strings(&x, &x);
        assert_eq!(phase, c(1.0, 0.0));
        assert!(r.is_identity());

        let y2 = PauliString::single(1.0, 2, Axis::Y);
        let (phase, r) = multiply_strings(&x, &y2);
        assert_eq!(phase, c(1.0, 0.0));
        assert_eq!(r.factors(), &[(1, Axis::X), (2, Axis::Y)]);
    }

    #[test]
    fn commutator_unit_cases() {
        let z = OperatorSum::from_terms([PauliString::single(1.0, 1, Axis::Z)], 0.0);
        let x = PauliString::single(1.0, 1, Axis::X);
        let comm = i_commutator(&z, &x).unwrap();
        assert_eq!(comm.terms().len(), 1);
        assert_eq!(comm.terms()[0].factors(), &[(1, Axis::Y)]);
        assert_abs_diff_eq!(comm.terms()[0].coeff(), -2.0);

        let xx = OperatorSum::from_terms([PauliString::single(1.0, 1, Axis::X)], 0.0);
        assert!(i_commutator(&xx, &x).unwrap().is_empty());

        let z1 = OperatorSum::from_terms([PauliString::single(1.0, 1, Axis::Z)], 0.0);
        let x2 = PauliString::single(1.0, 2, Axis::X);
        assert!(i_commutator(&z1, &x2).unwrap().is_empty());
    }

    #[test]
    fn duplicate_terms_merge() {
        let h = OperatorSum::from_terms(
            [
                PauliString::single(0.5, 1, Axis::Z),
                PauliString::single(0.25, 1, Axis::Z),
                PauliString::identity(1.5),
            ],
            0.5,
        );
        assert_eq!(h.terms().len(), 1);
        assert_abs_diff_eq!(h.terms()[0].coeff(), 0.75);
        assert_abs_diff_eq!(h.offset(), 2.0);
    }

    #[test]
    fn exact_cancellation_gives_empty_sum() {
        let h = OperatorSum::from_terms([PauliString::single(0.3, 2, Axis::X)], 1.0);
        let d = h.sub(&h);
        assert!(d.is_empty());
    }

    #[test]
    fn out_of_range_site_rejected() {
        let psi = StateVector::basis_state(2, 0);
        let p = PauliString::single(1.0, 3, Axis::X);
        assert!(matches!(
            apply_pauli_string(&p, &psi),
            Err(Error::SiteOutOfRange { site: 3, n_sites: 2 })
        ));
    }

    #[test]
    fn duplicate_factor_rejected() {
        assert!(PauliString::new(1.0, [(1, Axis::X), (1, Axis::Z)]).is_err());
        assert!(PauliString::new(1.0, [(0, Axis::X)]).is_err());
        assert!(PauliString::new(f64::NAN, [(1, Axis::X)]).is_err());
    }

    #[test]
    fn dense_matches_apply_on_small_operator() {
        let h = OperatorSum::from_terms(
            [
                PauliString::two_site(0.7, (1, Axis::X), (2, Axis::Y)).unwrap(),
                PauliString::single(-0.3, 2, Axis::Z),
            ],
            0.2,
        );
        let m = h.to_dense(2).unwrap();
        for col in 0..4 {
            let e = StateVector::basis_state(2, col);
            let via_apply = apply_operator(&h, &e).unwrap();
            for row in 0..4 {
                let d = (m[(row, col)] - via_apply.amplitudes()[row]).norm();
                assert!(d < 1e-15, "mismatch at ({row},{col})");
            }
        }
    }

    #[test]
    fn support_restriction_relabels_sites() {
        let h = OperatorSum::from_terms(
            [PauliString::two_site(1.0, (3, Axis::X), (7, Axis::X)).unwrap()],
            0.5,
        );
        let (support, m) = h.to_dense_on_support().unwrap();
        assert_eq!(support, vec![3, 7]);
        assert_eq!(m.nrows(), 4);
        // X⊗X + 0.5·I has top-right corner 1.
        assert_abs_diff_eq!(m[(0, 3)].re, 1.0);
        assert_abs_diff_eq!(m[(0, 0)].re, 0.5);
    }
}
