//! Scenes, logarithmic one-forms, tangential basepoints, and functoriality.
//!
//! A *scene* is the projective line punctured at a finite set of exact points
//! (infinity is implicitly allowed as a puncture of the geometry but carries
//! no dlog generator of its own: residues at infinity are determined by the
//! residue theorem).  Logarithmic one-forms are exact linear combinations of
//! `dz/(z - a_i)`.  Tangential basepoints anchor either at a puncture, where a
//! nonzero exact tangent vector is required, or at an ordinary point, where
//! the tangent is inert metadata.
//!
//! Functoriality appears twice: monomial maps between SNC local models push
//! tangential data forward exactly, and finite self-maps of the line (powers
//! and Möbius transformations) pull logarithmic forms back, with an error if a
//! pole of the pullback is not a puncture of the source scene.

use crate::exact::ExactComplex;
use num_complex::Complex64;
use std::collections::BTreeMap;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum GeomError {
    #[error("punctures {0} and {1} coincide")]
    DuplicatePunctures(usize, usize),
    #[error("puncture index {0} out of range for scene with {1} punctures")]
    PunctureOutOfRange(usize, usize),
    #[error("tangential basepoint at puncture {0} has zero tangent vector")]
    ZeroTangent(usize),
    #[error("ordinary basepoint sits exactly on puncture {0}")]
    OrdinaryAtPuncture(usize),
    #[error("evaluation point within {tol} of puncture {puncture}")]
    PoleProximity { puncture: usize, tol: f64 },
    #[error("pullback has a pole at {0} which is not a puncture of the source scene")]
    PoleOutsideScene(ExactComplex),
    #[error("power map exponent must be a positive integer, got {0}")]
    BadPower(i64),
    #[error("Möbius map is degenerate (zero determinant)")]
    DegenerateMap,
    #[error("monomial map shape mismatch: {0} exponent rows, {1} units")]
    MonomialShape(usize, usize),
    #[error("monomial map applied to model of dimension {model} but has {cols} columns")]
    MonomialDim { model: usize, cols: usize },
    #[error("SNC local model coordinate {0} has zero tangent scale")]
    ZeroModelScale(usize),
    #[error("negative exponent {0} applied; inverses only exist for nonzero scales")]
    NegativeExponent(i64),
}

/// A punctured projective line: the affine coordinate with a finite set of
/// distinct exact punctures.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Scene {
    pub punctures: Vec<ExactComplex>,
}

impl Scene {
    pub fn new(punctures: Vec<ExactComplex>) -> Result<Scene, GeomError> {
        let s = Scene { punctures };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), GeomError> {
        for i in 0..self.punctures.len() {
            for j in (i + 1)..self.punctures.len() {
                if self.punctures[i] == self.punctures[j] {
                    return Err(GeomError::DuplicatePunctures(i, j));
                }
            }
        }
        Ok(())
    }

    pub fn puncture_index(&self, p: &ExactComplex) -> Option<usize> {
        self.punctures.iter().position(|q| q == p)
    }

    /// Standard scene {0, 1}.
    pub fn zero_one() -> Scene {
        Scene {
            punctures: vec![ExactComplex::from_int(0, 0), ExactComplex::from_int(1, 0)],
        }
    }
}

/// An exact linear combination of the generators dlog(z - a_i) of a scene.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LogOneForm {
    /// Puncture index -> coefficient; zero coefficients are not stored.
    pub coeffs: BTreeMap<usize, ExactComplex>,
}

impl LogOneForm {
    pub fn dlog(puncture: usize) -> LogOneForm {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(puncture, ExactComplex::one());
        LogOneForm { coeffs }
    }

    pub fn zero() -> LogOneForm {
        LogOneForm::default()
    }

    pub fn add_term(&mut self, puncture: usize, c: ExactComplex) {
        let cur = self
            .coeffs
            .remove(&puncture)
            .unwrap_or_else(ExactComplex::zero);
        let s = &cur + &c;
        if !s.is_zero() {
            self.coeffs.insert(puncture, s);
        }
    }

    pub fn check_on(&self, scene: &Scene) -> Result<(), GeomError> {
        for &i in self.coeffs.keys() {
            if i >= scene.punctures.len() {
                return Err(GeomError::PunctureOutOfRange(i, scene.punctures.len()));
            }
        }
        Ok(())
    }
}

/// Residue of a logarithmic form at a finite puncture.
pub fn residue(form: &LogOneForm, puncture: usize) -> ExactComplex {
    form.coeffs
        .get(&puncture)
        .cloned()
        .unwrap_or_else(ExactComplex::zero)
}

/// Residue at infinity: minus the sum of the finite residues.
pub fn residue_at_infinity(form: &LogOneForm) -> ExactComplex {
    let mut s = ExactComplex::zero();
    for c in form.coeffs.values() {
        s = &s - c;
    }
    s
}

/// Evaluate the coefficient function of `form` (the value f(z) with
/// ω = f(z) dz) at a point, rejecting points within `tol_pole` of a puncture
/// appearing in the form.
pub fn eval_form(
    form: &LogOneForm,
    scene: &Scene,
    z: Complex64,
    tol_pole: f64,
) -> Result<Complex64, GeomError> {
    form.check_on(scene)?;
    let mut s = Complex64::new(0.0, 0.0);
    for (&i, c) in &form.coeffs {
        let d = z - scene.punctures[i].to_c64();
        if d.norm() < tol_pole {
            return Err(GeomError::PoleProximity {
                puncture: i,
                tol: tol_pole,
            });
        }
        s += c.to_c64() / d;
    }
    Ok(s)
}

/// Where a basepoint sits.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Anchor {
    /// Anchored at a puncture of the scene (by index); the tangent vector is
    /// part of the data and must be nonzero.
    Puncture(usize),
    /// Anchored at an ordinary point; the tangent is inert metadata.
    Point(ExactComplex),
}

/// A basepoint of a scene, possibly tangential.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct TangentialBasepoint {
    pub anchor: Anchor,
    pub tangent: ExactComplex,
}

impl TangentialBasepoint {
    pub fn at_puncture(index: usize, tangent: ExactComplex) -> TangentialBasepoint {
        TangentialBasepoint {
            anchor: Anchor::Puncture(index),
            tangent,
        }
    }

    pub fn ordinary(point: ExactComplex) -> TangentialBasepoint {
        TangentialBasepoint {
            anchor: Anchor::Point(point),
            tangent: ExactComplex::zero(),
        }
    }

    pub fn validate(&self, scene: &Scene) -> Result<(), GeomError> {
        match &self.anchor {
            Anchor::Puncture(i) => {
                if *i >= scene.punctures.len() {
                    return Err(GeomError::PunctureOutOfRange(*i, scene.punctures.len()));
                }
                if self.tangent.is_zero() {
                    return Err(GeomError::ZeroTangent(*i));
                }
            }
            Anchor::Point(p) => {
                if let Some(i) = scene.puncture_index(p) {
                    return Err(GeomError::OrdinaryAtPuncture(i));
                }
            }
        }
        Ok(())
    }

    /// The anchor as an exact point of the line.
    pub fn location<'a>(&'a self, scene: &'a Scene) -> &'a ExactComplex {
        match &self.anchor {
            Anchor::Puncture(i) => &scene.punctures[*i],
            Anchor::Point(p) => p,
        }
    }

    pub fn is_tangential(&self) -> bool {
        matches!(self.anchor, Anchor::Puncture(_))
    }
}

/// A normal-crossings local model: coordinates z_1..z_j with an exact nonzero
/// tangent scale on each.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct SncLocalModel {
    pub scales: Vec<ExactComplex>,
}

impl SncLocalModel {
    pub fn new(scales: Vec<ExactComplex>) -> Result<SncLocalModel, GeomError> {
        for (i, s) in scales.iter().enumerate() {
            if s.is_zero() {
                return Err(GeomError::ZeroModelScale(i));
            }
        }
        Ok(SncLocalModel { scales })
    }

    pub fn dim(&self) -> usize {
        self.scales.len()
    }
}

/// A monomial map between SNC local models: w_i = c_i * prod_l z_l^{E_il}.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct MonomialMap {
    /// One row per target coordinate.
    pub exponents: Vec<Vec<i64>>,
    /// One unit (nonzero constant) per target coordinate.
    pub units: Vec<ExactComplex>,
}

impl MonomialMap {
    pub fn validate(&self) -> Result<(), GeomError> {
        if self.exponents.len() != self.units.len() {
            return Err(GeomError::MonomialShape(
                self.exponents.len(),
                self.units.len(),
            ));
        }
        if let Some(first) = self.exponents.first() {
            for row in &self.exponents {
                if row.len() != first.len() {
                    return Err(GeomError::MonomialShape(row.len(), first.len()));
                }
            }
        }
        for u in &self.units {
            if u.is_zero() {
                return Err(GeomError::DegenerateMap);
            }
        }
        Ok(())
    }
}

/// Push tangential data forward along a monomial map: the pushed scale on the
/// i-th target coordinate is c_i * prod_l lambda_l^{E_il}, computed exactly.
pub fn push_tangential(
    map: &MonomialMap,
    model: &SncLocalModel,
) -> Result<SncLocalModel, GeomError> {
    map.validate()?;
    for (i, s) in model.scales.iter().enumerate() {
        if s.is_zero() {
            return Err(GeomError::ZeroModelScale(i));
        }
    }
    let cols = map.exponents.first().map_or(0, |r| r.len());
    if cols != model.dim() && !map.exponents.is_empty() {
        return Err(GeomError::MonomialDim {
            model: model.dim(),
            cols,
        });
    }
    let mut out = Vec::with_capacity(map.units.len());
    for (row, unit) in map.exponents.iter().zip(&map.units) {
        let mut v = unit.clone();
        for (&e, lam) in row.iter().zip(&model.scales) {
            v = &v * &lam.powi(e);
        }
        out.push(v);
    }
    SncLocalModel::new(out)
}

/// A finite self-map of the projective line.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LineMap {
    /// z -> z^n, n >= 1.
    Power { n: i64 },
    /// z -> (a z + b) / (c z + d), with nonzero determinant.
    Mobius {
        a: ExactComplex,
        b: ExactComplex,
        c: ExactComplex,
        d: ExactComplex,
    },
}

impl LineMap {
    pub fn validate(&self) -> Result<(), GeomError> {
        match self {
            LineMap::Power { n } => {
                if *n < 1 {
                    return Err(GeomError::BadPower(*n));
                }
            }
            LineMap::Mobius { a, b, c, d } => {
                let det = &(a * d) - &(b * c);
                if det.is_zero() {
                    return Err(GeomError::DegenerateMap);
                }
            }
        }
        Ok(())
    }

    /// Evaluate the map at an exact point (must not be a pole).
    pub fn apply(&self, z: &ExactComplex) -> Result<ExactComplex, GeomError> {
        self.validate()?;
        match self {
            LineMap::Power { n } => Ok(z.powi(*n)),
            LineMap::Mobius { a, b, c, d } => {
                let den = &(c * z) + d;
                if den.is_zero() {
                    return Err(GeomError::DegenerateMap);
                }
                Ok(&(&(a * z) + b) / &den)
            }
        }
    }

    pub fn apply_f64(&self, z: Complex64) -> Complex64 {
        match self {
            LineMap::Power { n } => z.powi(*n as i32),
            LineMap::Mobius { a, b, c, d } => {
                (a.to_c64() * z + b.to_c64()) / (c.to_c64() * z + d.to_c64())
            }
        }
    }
}

/// Pull a logarithmic one-form on the target scene back along a line map.
///
/// The pullback of a combination of dlogs is again a combination of dlogs;
/// its poles must all be punctures of the source scene (poles whose combined
/// coefficient cancels to zero are fine).
pub fn pullback_form(
    map: &LineMap,
    source: &Scene,
    target: &Scene,
    form: &LogOneForm,
) -> Result<LogOneForm, GeomError> {
    map.validate()?;
    source.validate()?;
    target.validate()?;
    form.check_on(target)?;
    // Accumulate pole location -> coefficient, exactly.
    let mut poles: BTreeMap<ExactComplex, ExactComplex> = BTreeMap::new();
    let mut add = |loc: ExactComplex, c: ExactComplex| {
        let cur = poles.remove(&loc).unwrap_or_else(ExactComplex::zero);
        let s = &cur + &c;
        if !s.is_zero() {
            poles.insert(loc, s);
        }
    };
    match map {
        LineMap::Power { n } => {
            for (&i, c) in &form.coeffs {
                let a = &target.punctures[i];
                if a.is_zero() {
                    // f^*(dlog z) = n dlog z.
                    let mut nc = ExactComplex::from_int(*n, 0);
                    nc = &nc * c;
                    add(ExactComplex::zero(), nc);
                } else {
                    // f^*(dlog(z - a)) = sum over n-th roots rho of a of
                    // dlog(z - rho).  The roots must live among the source
                    // punctures; we find them there by exact search.
                    let roots: Vec<&ExactComplex> = source
                        .punctures
                        .iter()
                        .filter(|p| p.powi(*n) == *a)
                        .collect();
                    if roots.len() != *n as usize {
                        return Err(GeomError::PoleOutsideScene(a.clone()));
                    }
                    for rho in roots {
                        add(rho.clone(), c.clone());
                    }
                }
            }
        }
        LineMap::Mobius { a, b, c, d } => {
            for (&i, coef) in &form.coeffs {
                let p = &target.punctures[i];
                // f(z) - p = ((a - pc) z + (b - pd)) / (cz + d).
                let top1 = a - &(p * c);
                let top0 = b - &(p * d);
                if !top1.is_zero() {
                    let rho = &(-&top0) / &top1;
                    add(rho, coef.clone());
                }
                if !c.is_zero() {
                    let rho = &(-d) / c;
                    add(rho, -coef);
                }
            }
        }
    }
    let mut out = LogOneForm::zero();
    for (loc, coef) in poles {
        match source.puncture_index(&loc) {
            Some(i) => out.add_term(i, coef),
            None => return Err(GeomError::PoleOutsideScene(loc)),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ExactScalar;

    fn c(re: i64, im: i64) -> ExactComplex {
        ExactComplex::from_int(re, im)
    }

    #[test]
    fn scene_rejects_duplicates() {
        assert!(Scene::new(vec![c(0, 0), c(1, 0), c(0, 0)]).is_err());
        assert!(Scene::new(vec![c(0, 0), c(1, 0)]).is_ok());
    }

    #[test]
    fn residues_and_infinity() {
        let mut form = LogOneForm::dlog(0);
        form.add_term(1, c(2, 0));
        assert_eq!(residue(&form, 0), c(1, 0));
        assert_eq!(residue(&form, 1), c(2, 0));
        assert_eq!(residue(&form, 5), c(0, 0));
        assert_eq!(residue_at_infinity(&form), c(-3, 0));
    }

    #[test]
    fn eval_form_values_and_pole_guard() {
        let scene = Scene::zero_one();
        let mut form = LogOneForm::dlog(0);
        form.add_term(1, c(-1, 0));
        // f(z) = 1/z - 1/(z-1) at z = 2: 1/2 - 1 = -1/2.
        let v = eval_form(&form, &scene, Complex64::new(2.0, 0.0), 1e-12).unwrap();
        assert!((v - Complex64::new(-0.5, 0.0)).norm() < 1e-15);
        let err = eval_form(&form, &scene, Complex64::new(1e-13, 0.0), 1e-12);
        assert!(matches!(err, Err(GeomError::PoleProximity { puncture: 0, .. })));
    }

    #[test]
    fn basepoint_validation() {
        let scene = Scene::zero_one();
        assert!(TangentialBasepoint::at_puncture(0, c(1, 0))
            .validate(&scene)
            .is_ok());
        assert!(matches!(
            TangentialBasepoint::at_puncture(0, c(0, 0)).validate(&scene),
            Err(GeomError::ZeroTangent(0))
        ));
        assert!(matches!(
            TangentialBasepoint::at_puncture(7, c(1, 0)).validate(&scene),
            Err(GeomError::PunctureOutOfRange(7, 2))
        ));
        assert!(matches!(
            TangentialBasepoint::ordinary(c(1, 0)).validate(&scene),
            Err(GeomError::OrdinaryAtPuncture(1))
        ));
        assert!(TangentialBasepoint::ordinary(ExactComplex::new(
            ExactScalar::from_frac(1, 2),
            ExactScalar::zero()
        ))
        .validate(&scene)
        .is_ok());
    }

    #[test]
    fn push_tangential_power_square() {
        // z -> z^2 at a fixed point with tangent scale 3 pushes to 9.
        let map = MonomialMap {
            exponents: vec![vec![2]],
            units: vec![c(1, 0)],
        };
        let model = SncLocalModel::new(vec![c(3, 0)]).unwrap();
        let pushed = push_tangential(&map, &model).unwrap();
        assert_eq!(pushed.scales, vec![c(9, 0)]);
    }

    #[test]
    fn push_tangential_general_monomial() {
        // w1 = 2 z1^2 z2^{-1}, w2 = z2^3 on scales (2, 1/2).
        let map = MonomialMap {
            exponents: vec![vec![2, -1], vec![0, 3]],
            units: vec![c(2, 0), c(1, 0)],
        };
        let half = ExactComplex::new(ExactScalar::from_frac(1, 2), ExactScalar::zero());
        let model = SncLocalModel::new(vec![c(2, 0), half.clone()]).unwrap();
        let pushed = push_tangential(&map, &model).unwrap();
        assert_eq!(pushed.scales[0], c(16, 0));
        assert_eq!(pushed.scales[1], half.powi(3));
        // Zero scales are rejected.
        assert!(SncLocalModel::new(vec![c(0, 0)]).is_err());
    }

    #[test]
    fn pullback_power_map() {
        // f(z) = z^2 from scene {0, 1, -1} to scene {0, 1}.
        let source = Scene::new(vec![c(0, 0), c(1, 0), c(-1, 0)]).unwrap();
        let target = Scene::zero_one();
        let map = LineMap::Power { n: 2 };
        // f^*(dlog z) = 2 dlog z.
        let pb = pullback_form(&map, &source, &target, &LogOneForm::dlog(0)).unwrap();
        assert_eq!(pb.coeffs.get(&0), Some(&c(2, 0)));
        assert_eq!(pb.coeffs.len(), 1);
        // f^*(dlog(z-1)) = dlog(z-1) + dlog(z+1).
        let pb = pullback_form(&map, &source, &target, &LogOneForm::dlog(1)).unwrap();
        assert_eq!(pb.coeffs.get(&1), Some(&c(1, 0)));
        assert_eq!(pb.coeffs.get(&2), Some(&c(1, 0)));
        // Missing root -> error.
        let small = Scene::new(vec![c(0, 0), c(1, 0)]).unwrap();
        assert!(matches!(
            pullback_form(&map, &small, &target, &LogOneForm::dlog(1)),
            Err(GeomError::PoleOutsideScene(_))
        ));
    }

    #[test]
    fn pullback_mobius_involution() {
        // f(z) = 1 - z swaps the punctures of {0, 1}.
        let scene = Scene::zero_one();
        let map = LineMap::Mobius {
            a: c(-1, 0),
            b: c(1, 0),
            c: c(0, 0),
            d: c(1, 0),
        };
        let pb = pullback_form(&map, &scene, &scene, &LogOneForm::dlog(0)).unwrap();
        assert_eq!(pb, LogOneForm::dlog(1));
        let pb = pullback_form(&map, &scene, &scene, &LogOneForm::dlog(1)).unwrap();
        assert_eq!(pb, LogOneForm::dlog(0));
    }

    #[test]
    fn pullback_mobius_inversion_cancellation() {
        // f(z) = 1/z on scene {0}: f^*(dlog z) = -dlog z; the pole of the
        // denominator at 0 combines with the numerator root.
        let scene = Scene::new(vec![c(0, 0)]).unwrap();
        let map = LineMap::Mobius {
            a: c(0, 0),
            b: c(1, 0),
            c: c(1, 0),
            d: c(0, 0),
        };
        let pb = pullback_form(&map, &scene, &scene, &LogOneForm::dlog(0)).unwrap();
        assert_eq!(pb.coeffs.get(&0), Some(&c(-1, 0)));
        assert_eq!(pb.coeffs.len(), 1);
    }

    #[test]
    fn pullback_numeric_consistency() {
        // (f^* omega)(z) = omega(f(z)) f'(z) spot-checked numerically.
        let source = Scene::new(vec![c(0, 0), c(1, 0), c(-1, 0)]).unwrap();
        let target = Scene::zero_one();
        let map = LineMap::Power { n: 2 };
        let form = LogOneForm::dlog(1);
        let pb = pullback_form(&map, &source, &target, &form).unwrap();
        for z in [Complex64::new(0.3, 0.2), Complex64::new(-2.0, 0.7)] {
            let lhs = eval_form(&pb, &source, z, 1e-12).unwrap();
            let rhs = eval_form(&form, &target, z * z, 1e-12).unwrap() * 2.0 * z;
            assert!((lhs - rhs).norm() < 1e-13, "{lhs} vs {rhs}");
        }
    }
}
