//! Finite-dimensional Hilbert and `l_q` sequence spaces.
//!
//! Provides norms, the Hilbert inner product, norming (peak) functionals
//! `F_f` with `||F_f|| = 1` and `F_f(f) = ||f||`, dual pairings, and
//! power-type majorants `gamma * u^power` of the modulus of smoothness
//! `rho(u) = sup_{||x||=||y||=1} ((||x+uy|| + ||x-uy||)/2 - 1)`.
//!
//! Spaces are finite-dimensional truncations; every construction used by
//! the experiment suite lives in finitely many coordinates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which norm family the space carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpaceKind {
    /// Real Hilbert space (Euclidean coordinates).
    Hilbert,
    /// `l_q` sequence space, `1 < q < inf`.
    LqSequence,
}

/// Ambient space descriptor: kind, exponent, and smoothness majorant.
///
/// The majorant defaults follow the power-type bounds for `L_p`:
/// `u^q/q` for `1 < q <= 2` and `(q-1) u^2 / 2` for `q > 2`; a Hilbert
/// space uses `u^2/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceSpec {
    kind: SpaceKind,
    q: f64,
    majorant_gamma: f64,
    majorant_power: f64,
}

impl SpaceSpec {
    /// Hilbert space; behaves as `q = 2` with majorant `u^2/2`.
    pub fn hilbert() -> Self {
        SpaceSpec {
            kind: SpaceKind::Hilbert,
            q: 2.0,
            majorant_gamma: 0.5,
            majorant_power: 2.0,
        }
    }

    /// `l_q` space with the default majorant for its exponent.
    ///
    /// `q = 1` and `q = inf` are rejected: those spaces are not uniformly
    /// smooth and nothing here applies to them.
    pub fn lq(q: f64) -> Result<Self> {
        if !q.is_finite() || q <= 1.0 {
            return Err(Error::InvalidExponent(q));
        }
        let (gamma, power) = if q <= 2.0 {
            (1.0 / q, q)
        } else {
            ((q - 1.0) / 2.0, 2.0)
        };
        Ok(SpaceSpec {
            kind: SpaceKind::LqSequence,
            q,
            majorant_gamma: gamma,
            majorant_power: power,
        })
    }

    /// Replace the majorant parameters, keeping the norm.
    pub fn with_majorant(mut self, gamma: f64, power: f64) -> Result<Self> {
        if !(gamma > 0.0) || !gamma.is_finite() || !(power > 1.0 && power <= 2.0) {
            return Err(Error::InvalidMajorant { gamma, power });
        }
        self.majorant_gamma = gamma;
        self.majorant_power = power;
        Ok(self)
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn is_hilbert(&self) -> bool {
        self.kind == SpaceKind::Hilbert
    }

    /// Norm exponent (2 for Hilbert).
    pub fn q(&self) -> f64 {
        self.q
    }

    /// Dual exponent `p = q / (q - 1)`.
    pub fn dual_exponent(&self) -> f64 {
        self.q / (self.q - 1.0)
    }

    /// Majorant parameters `(gamma, power)`.
    pub fn majorant(&self) -> (f64, f64) {
        (self.majorant_gamma, self.majorant_power)
    }

    /// Same norm structure (kind and exponent)?
    pub fn compatible(&self, other: &SpaceSpec) -> bool {
        self.kind == other.kind && self.q == other.q
    }
}

/// A point of the working space: dense real coordinates plus the space tag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Element {
    coeffs: Vec<f64>,
    space: SpaceSpec,
}

impl Element {
    pub fn new(coeffs: Vec<f64>, space: SpaceSpec) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptyElement);
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("element coefficients"));
        }
        Ok(Element { coeffs, space })
    }

    pub fn zeros(dim: usize, space: SpaceSpec) -> Result<Self> {
        Element::new(vec![0.0; dim], space)
    }

    /// Standard coordinate vector `e_index`.
    pub fn unit(dim: usize, index: usize, space: SpaceSpec) -> Result<Self> {
        if index >= dim {
            return Err(Error::DimensionMismatch(index, dim));
        }
        let mut coeffs = vec![0.0; dim];
        coeffs[index] = 1.0;
        Element::new(coeffs, space)
    }

    /// `count` leading ones, zero-padded to `dim`.
    pub fn ones(count: usize, dim: usize, space: SpaceSpec) -> Result<Self> {
        if count > dim {
            return Err(Error::DimensionMismatch(count, dim));
        }
        let mut coeffs = vec![0.0; dim];
        coeffs[..count].fill(1.0);
        Element::new(coeffs, space)
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn space(&self) -> &SpaceSpec {
        &self.space
    }

    /// `(sum |f_i|^q)^(1/q)`; Euclidean for Hilbert. Zero iff `f = 0`.
    pub fn norm(&self) -> f64 {
        let q = self.space.q;
        if self.space.is_hilbert() || q == 2.0 {
            self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
        } else {
            self.coeffs
                .iter()
                .map(|c| c.abs().powf(q))
                .sum::<f64>()
                .powf(1.0 / q)
        }
    }

    /// `l_1` norm of the coordinates.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    pub fn scaled(&self, a: f64) -> Element {
        Element {
            coeffs: self.coeffs.iter().map(|c| a * c).collect(),
            space: self.space,
        }
    }

    /// `self + a * other` (same space and dimension).
    pub fn add_scaled(&self, a: f64, other: &Element) -> Result<Element> {
        check_same_shape(self, other)?;
        Ok(Element {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(x, y)| x + a * y)
                .collect(),
            space: self.space,
        })
    }

    pub(crate) fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub(crate) fn axpy(&mut self, a: f64, other: &Element) {
        for (x, y) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *x += a * y;
        }
    }
}

fn check_same_shape(f: &Element, g: &Element) -> Result<()> {
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch(f.dim(), g.dim()));
    }
    if !f.space.compatible(&g.space) {
        return Err(Error::SpaceMismatch("elements live in different spaces"));
    }
    Ok(())
}

/// Hilbert inner product. Errors on non-Hilbert spaces or dimension mismatch.
pub fn inner(f: &Element, g: &Element) -> Result<f64> {
    if !f.space.is_hilbert() || !g.space.is_hilbert() {
        return Err(Error::SpaceMismatch("inner product requires Hilbert space"));
    }
    check_same_shape(f, g)?;
    Ok(f.coeffs.iter().zip(&g.coeffs).map(|(x, y)| x * y).sum())
}

/// A functional in the dual pairing, stored by coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualFunctional {
    coeffs: Vec<f64>,
    space: SpaceSpec,
}

impl DualFunctional {
    pub fn from_coeffs(coeffs: Vec<f64>, space: SpaceSpec) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptyElement);
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("functional coefficients"));
        }
        Ok(DualFunctional { coeffs, space })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    /// Norm in the dual space, exponent `p = q/(q-1)`.
    pub fn dual_norm(&self) -> f64 {
        let p = self.space.dual_exponent();
        if p == 2.0 {
            self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
        } else {
            self.coeffs
                .iter()
                .map(|c| c.abs().powf(p))
                .sum::<f64>()
                .powf(1.0 / p)
        }
    }

    /// Evaluate the functional: coordinate dot product.
    pub fn pair(&self, g: &Element) -> Result<f64> {
        if self.dim() != g.dim() {
            return Err(Error::DimensionMismatch(self.dim(), g.dim()));
        }
        if !self.space.compatible(&g.space) {
            return Err(Error::SpaceMismatch("functional and element spaces differ"));
        }
        Ok(self.coeffs.iter().zip(g.coeffs()).map(|(a, b)| a * b).sum())
    }
}

/// Norming (peak) functional of a nonzero element: `||F_f|| = 1` and
/// `F_f(f) = ||f||`.
///
/// Coordinates are `sign(f_i) |f_i|^(q-1) / ||f||^(q-1)`; in a Hilbert
/// space this is `f / ||f||`.
pub fn norming_functional(f: &Element) -> Result<DualFunctional> {
    let n = f.norm();
    if n == 0.0 {
        return Err(Error::ZeroElement);
    }
    let coeffs = if f.space.is_hilbert() || f.space.q == 2.0 {
        f.coeffs.iter().map(|c| c / n).collect()
    } else {
        let e = f.space.q - 1.0;
        let scale = n.powf(e);
        f.coeffs
            .iter()
            .map(|c| c.signum() * c.abs().powf(e) / scale)
            .collect()
    };
    DualFunctional::from_coeffs(coeffs, f.space)
}

/// Convenience wrapper; see [`DualFunctional::pair`].
pub fn pair(functional: &DualFunctional, g: &Element) -> Result<f64> {
    functional.pair(g)
}

/// Power-type majorant `gamma * u^power` of the modulus of smoothness.
pub fn smoothness_majorant(u: f64, space: &SpaceSpec) -> Result<f64> {
    if !(u >= 0.0) {
        return Err(Error::ParamRange {
            name: "u",
            value: u,
            range: "[0, inf)",
        });
    }
    let (gamma, power) = space.majorant();
    Ok(gamma * u.powf(power))
}

/// One sample of the modulus of smoothness:
/// `(||x + u y|| + ||x - u y||) / 2 - 1` for unit `x`, `y`.
pub fn empirical_modulus(x: &Element, y: &Element, u: f64) -> Result<f64> {
    check_same_shape(x, y)?;
    if !(u >= 0.0) {
        return Err(Error::ParamRange {
            name: "u",
            value: u,
            range: "[0, inf)",
        });
    }
    const UNIT_TOL: f64 = 1e-9;
    if (x.norm() - 1.0).abs() > UNIT_TOL || (y.norm() - 1.0).abs() > UNIT_TOL {
        return Err(Error::InvalidInput(
            "empirical modulus requires unit-norm inputs".into(),
        ));
    }
    let plus = x.add_scaled(u, y)?.norm();
    let minus = x.add_scaled(-u, y)?.norm();
    Ok(0.5 * (plus + minus) - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn hilbert_el(coeffs: &[f64]) -> Element {
        Element::new(coeffs.to_vec(), SpaceSpec::hilbert()).unwrap()
    }

    fn lq_el(coeffs: &[f64], q: f64) -> Element {
        Element::new(coeffs.to_vec(), SpaceSpec::lq(q).unwrap()).unwrap()
    }

    #[test]
    fn spec_defaults() {
        let h = SpaceSpec::hilbert();
        assert_eq!(h.majorant(), (0.5, 2.0));
        let l15 = SpaceSpec::lq(1.5).unwrap();
        assert_eq!(l15.majorant(), (1.0 / 1.5, 1.5));
        let l3 = SpaceSpec::lq(3.0).unwrap();
        assert_eq!(l3.majorant(), (1.0, 2.0));
    }

    #[test]
    fn spec_rejects_degenerate_exponents() {
        assert!(SpaceSpec::lq(1.0).is_err());
        assert!(SpaceSpec::lq(f64::INFINITY).is_err());
        assert!(SpaceSpec::lq(0.5).is_err());
        assert!(SpaceSpec::hilbert().with_majorant(0.5, 1.0).is_err());
        assert!(SpaceSpec::hilbert().with_majorant(0.5, 2.5).is_err());
        assert!(SpaceSpec::hilbert().with_majorant(-1.0, 2.0).is_err());
    }

    #[test]
    fn norm_pythagorean() {
        assert_eq!(hilbert_el(&[3.0, 4.0]).norm(), 5.0);
    }

    #[test]
    fn norm_ones_l2() {
        assert_eq!(lq_el(&[1.0, 1.0, 1.0, 1.0], 2.0).norm(), 2.0);
    }

    #[test]
    fn norm_ones_lq() {
        // 2m ones with m = 3 in l_1.5: (2m)^(1/q) = 6^(2/3)
        let f = lq_el(&[1.0; 6], 1.5);
        assert!((f.norm() - 3.3019272488946263).abs() < 1e-12);
    }

    #[test]
    fn inner_examples() {
        assert_eq!(
            inner(&hilbert_el(&[1.0, 0.0]), &hilbert_el(&[0.0, 1.0])).unwrap(),
            0.0
        );
        assert_eq!(
            inner(&hilbert_el(&[1.0, 2.0]), &hilbert_el(&[3.0, 4.0])).unwrap(),
            11.0
        );
        let f = hilbert_el(&[3.0, 4.0]);
        assert_eq!(inner(&f, &f).unwrap(), 25.0);
    }

    #[test]
    fn inner_rejects_mismatch() {
        assert!(inner(&hilbert_el(&[1.0]), &hilbert_el(&[1.0, 2.0])).is_err());
        let f = lq_el(&[1.0, 2.0], 1.5);
        assert!(inner(&f, &f).is_err());
    }

    #[test]
    fn norming_hilbert() {
        let ff = norming_functional(&hilbert_el(&[3.0, 4.0])).unwrap();
        assert!((ff.coeffs()[0] - 0.6).abs() < 1e-15);
        assert!((ff.coeffs()[1] - 0.8).abs() < 1e-15);
    }

    #[test]
    fn norming_lq_flat() {
        let f = lq_el(&[1.0, 1.0], 1.5);
        let ff = norming_functional(&f).unwrap();
        let expected = 2f64.powf(-1.0 / 3.0);
        assert!((ff.coeffs()[0] - expected).abs() < 1e-12);
        assert!((ff.coeffs()[1] - expected).abs() < 1e-12);
        // F_f(f) = ||f|| and ||F_f||_p = 1
        assert!((ff.pair(&f).unwrap() - f.norm()).abs() < 1e-9 * f.norm());
        assert!((ff.dual_norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn norming_single_coordinate() {
        let f = lq_el(&[0.0, -2.0, 0.0], 1.7);
        let ff = norming_functional(&f).unwrap();
        assert!((ff.coeffs()[0]).abs() < 1e-15);
        assert!((ff.coeffs()[1] + 1.0).abs() < 1e-12);
        assert!((ff.coeffs()[2]).abs() < 1e-15);
        assert!((ff.pair(&f).unwrap() - f.norm()).abs() < 1e-9 * f.norm());
        assert!((ff.dual_norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn norming_zero_rejected() {
        assert!(matches!(
            norming_functional(&hilbert_el(&[0.0, 0.0])),
            Err(Error::ZeroElement)
        ));
    }

    #[test]
    fn pair_examples() {
        let space = SpaceSpec::hilbert();
        let ff = DualFunctional::from_coeffs(vec![0.6, 0.8], space).unwrap();
        assert!((ff.pair(&hilbert_el(&[1.0, 0.0])).unwrap() - 0.6).abs() < 1e-15);

        let f = hilbert_el(&[3.0, 4.0]);
        let unit = f.scaled(1.0 / f.norm());
        let nf = norming_functional(&f).unwrap();
        assert!((nf.pair(&unit).unwrap() - 1.0).abs() < 1e-12);

        let c = 2f64.powf(-1.0 / 3.0);
        let lq = SpaceSpec::lq(1.5).unwrap();
        let g = DualFunctional::from_coeffs(vec![c, c], lq).unwrap();
        assert_eq!(g.pair(&lq_el(&[1.0, -1.0], 1.5)).unwrap(), 0.0);
    }

    #[test]
    fn majorant_examples() {
        let l15 = SpaceSpec::lq(1.5).unwrap();
        assert!((smoothness_majorant(1.0, &l15).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        let l3 = SpaceSpec::lq(3.0).unwrap();
        assert!((smoothness_majorant(2.0, &l3).unwrap() - 4.0).abs() < 1e-15);
        assert_eq!(smoothness_majorant(0.0, &l3).unwrap(), 0.0);
        assert!(smoothness_majorant(-0.1, &l3).is_err());
    }

    #[test]
    fn modulus_examples() {
        let e1 = hilbert_el(&[1.0, 0.0]);
        let e2 = hilbert_el(&[0.0, 1.0]);
        assert!(empirical_modulus(&e1, &e1, 0.7).unwrap().abs() < 1e-15);
        let rho = empirical_modulus(&e1, &e2, 1.0).unwrap();
        assert!((rho - (2f64.sqrt() - 1.0)).abs() < 1e-12);
        assert!(rho <= 0.5 + 1e-9);
        assert_eq!(empirical_modulus(&e1, &e2, 0.0).unwrap(), 0.0);
        assert!(empirical_modulus(&hilbert_el(&[2.0, 0.0]), &e2, 0.5).is_err());
    }

    fn random_nonzero(rng: &mut ChaCha8Rng, dim: usize, space: SpaceSpec) -> Element {
        loop {
            let coeffs: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
            let el = Element::new(coeffs, space).unwrap();
            if el.norm() > 1e-3 {
                return el;
            }
        }
    }

    #[test]
    fn norming_identities_randomized() {
        let spaces = [
            SpaceSpec::hilbert(),
            SpaceSpec::lq(1.25).unwrap(),
            SpaceSpec::lq(1.5).unwrap(),
            SpaceSpec::lq(2.0).unwrap(),
            SpaceSpec::lq(3.0).unwrap(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for space in spaces {
            for _ in 0..1000 {
                let dim = rng.random_range(1..=16);
                let f = random_nonzero(&mut rng, dim, space);
                let ff = norming_functional(&f).unwrap();
                let n = f.norm();
                assert!(
                    (ff.pair(&f).unwrap() - n).abs() <= 1e-9 * n,
                    "peak identity failed in {:?}",
                    space
                );
                assert!(
                    (ff.dual_norm() - 1.0).abs() <= 1e-9,
                    "unit dual norm failed in {:?}",
                    space
                );
            }
        }
    }

    #[test]
    fn holder_sanity_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for q in [1.5, 2.0, 4.0] {
            let space = SpaceSpec::lq(q).unwrap();
            for _ in 0..500 {
                let dim = rng.random_range(1..=12);
                let f = random_nonzero(&mut rng, dim, space);
                let g = random_nonzero(&mut rng, dim, space);
                let ff = norming_functional(&f).unwrap();
                assert!(ff.pair(&g).unwrap().abs() <= g.norm() + 1e-9);
            }
        }
    }

    #[test]
    fn norming_homogeneity() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for q in [1.5, 3.0] {
            let space = SpaceSpec::lq(q).unwrap();
            for _ in 0..200 {
                let f = random_nonzero(&mut rng, 6, space);
                let a = rng.random_range(0.1..10.0);
                let ff = norming_functional(&f).unwrap();
                let fa = norming_functional(&f.scaled(a)).unwrap();
                for (u, v) in ff.coeffs().iter().zip(fa.coeffs()) {
                    assert!((u - v).abs() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn majorant_dominates_modulus() {
        let spaces = [
            SpaceSpec::hilbert(),
            SpaceSpec::lq(1.5).unwrap(),
            SpaceSpec::lq(3.0).unwrap(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for space in spaces {
            for _ in 0..10_000 {
                let dim = rng.random_range(2..=8);
                let x = random_nonzero(&mut rng, dim, space);
                let y = random_nonzero(&mut rng, dim, space);
                let x = x.scaled(1.0 / x.norm());
                let y = y.scaled(1.0 / y.norm());
                for u in [0.01, 0.1, 0.5, 1.0] {
                    let rho = empirical_modulus(&x, &y, u).unwrap();
                    let mu = smoothness_majorant(u, &space).unwrap();
                    assert!(
                        rho <= mu + 1e-9,
                        "modulus sample {rho} exceeds majorant {mu} in {:?}",
                        space
                    );
                }
            }
        }
    }
}
