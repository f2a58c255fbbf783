//! Truncated and regularized iterated integrals, and the period pairing.
//!
//! The truncated integral of a word of logarithmic one-forms along a path is
//! advanced panel by panel: on each Gauss–Legendre panel the whole triangular
//! tower `J_0 = 1, J_j(t) = int (gamma^* w_{k-j+1}) J_{j-1}` is updated with
//! the spectral cumulative-integration matrix, so the innermost integral
//! takes the *last* letter of the word and the first letter is attached to
//! the largest time.  Panels are graded geometrically toward both ends
//! (doubling from the truncation parameter up to 1/4) and respect segment
//! boundaries, which is what resolves the logarithmic behavior near
//! tangential basepoints at spectral accuracy.
//!
//! Regularization peels the divergence instead of fitting it.  When the front
//! (resp. back) of the word is a run of scalar multiples of the dlog at the
//! end (resp. start) anchor puncture, the combination
//!
//! ```text
//! G(eps) = sum_{i<=fr, j<=br, i+j<=k}
//!          (prod of the first i coefficients) (-log eps)^i / i!
//!        * (prod of the last j coefficients)  ( log eps)^j / j!
//!        * J_{word[i .. k-j]}(eps)
//! ```
//!
//! converges to the regularized value as `eps -> 0`: the log-divergent terms
//! cancel identity by identity, leaving only `O(eps log^j eps)` corrections.
//! Those are removed by a least-squares fit of `G` against
//! `{1} ∪ {eps^p (log eps)^j : p = 1, 2; j = 0..k}` over a geometric grid of
//! truncation parameters.  The constant coefficient is the value.  A direct
//! fit of the raw truncated integral against `{log^j} ∪ {eps, eps log}`
//! supplies the reported logarithmic expansion coefficients; its constant
//! term is *not* used as the value, because in double precision that fit
//! cannot separate the constant from the log tower accurately enough.
//!
//! Anchors that are ordinary points need no peeling and no truncation
//! subtlety; their declared tangents are inert metadata and never enter the
//! computation.

use crate::exact::ExactScalar;
use crate::geom::{Anchor, GeomError, LogOneForm, Scene};
use crate::path::{eval_path, validate_path, Path, PathError};
use crate::quad::PanelRule;
use crate::words::{BarElement, BarWord, Letter};
use num_complex::Complex64;
use rayon::prelude::*;

#[derive(Debug, thiserror::Error)]
pub enum RegintError {
    #[error("geometry error: {0}")]
    Geom(#[from] GeomError),
    #[error("path error: {0}")]
    Path(#[from] PathError),
    #[error("path is invalid: {0:?}")]
    InvalidPath(Vec<String>),
    #[error(
        "word of length {len} needs at least {need} grid points (grid_count = {have}); \
         raise grid_count"
    )]
    WordTooLong {
        len: usize,
        need: usize,
        have: usize,
    },
    #[error("bad quadrature config: {0}")]
    BadConfig(String),
    #[error("abstract letter {0} has no attached one-form; use dlog letters")]
    AbstractLetter(String),
    #[error("truncation parameter {0} out of range (0, 1/2)")]
    BadEps(f64),
}

/// Quadrature and regularization parameters.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default)]
pub struct QuadratureConfig {
    /// Gauss–Legendre nodes per panel.
    pub nodes: usize,
    /// Every panel is additionally split 2^depth times.
    pub depth: u32,
    /// Largest truncation parameter of the regularization grid.
    pub eps0: f64,
    /// Geometric ratio of the grid (0 < ratio < 1).
    pub ratio: f64,
    /// Number of grid points.
    pub grid_count: usize,
    /// Points closer than this to a puncture abort evaluation.
    pub tol_pole: f64,
    /// Certified clearance required of paths.
    pub tol_clearance: f64,
    /// Convergence target for the reported error estimate.
    pub target_tol: f64,
    /// Evaluate the truncation grid on the rayon thread pool.
    pub parallel: bool,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            nodes: 32,
            depth: 0,
            eps0: 0.015625, // 2^-6
            ratio: 0.5,
            grid_count: 14,
            tol_pole: 1e-12,
            tol_clearance: 1e-6,
            target_tol: 1e-6,
            parallel: false,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<(), RegintError> {
        if self.nodes < 4 || self.nodes > 128 {
            return Err(RegintError::BadConfig(format!(
                "nodes = {} outside [4, 128]",
                self.nodes
            )));
        }
        if !(self.ratio > 0.0 && self.ratio < 1.0) {
            return Err(RegintError::BadConfig(format!(
                "ratio = {} outside (0, 1)",
                self.ratio
            )));
        }
        if !(self.eps0 > 0.0 && self.eps0 < 0.25) {
            return Err(RegintError::BadConfig(format!(
                "eps0 = {} outside (0, 1/4)",
                self.eps0
            )));
        }
        if self.grid_count < 4 {
            return Err(RegintError::BadConfig(
                "grid_count must be at least 4".into(),
            ));
        }
        // The smallest truncation parameter must stay well above the noise
        // floor of double-precision quadrature.
        let eps_min = self.eps0 * self.ratio.powi(self.grid_count as i32 - 1);
        if eps_min <= f64::EPSILON.sqrt() {
            return Err(RegintError::BadConfig(format!(
                "smallest grid point {eps_min:.3e} at or below sqrt(machine epsilon); \
                 reduce grid_count or raise eps0"
            )));
        }
        Ok(())
    }

    fn grid(&self) -> Vec<f64> {
        (0..self.grid_count)
            .map(|m| self.eps0 * self.ratio.powi(m as i32))
            .collect()
    }
}

/// A regularized iterated integral with diagnostics.
#[derive(Clone, Debug, serde::Serialize)]
pub struct RegularizedValue {
    /// Real and imaginary part of the regularized value.
    pub value: (f64, f64),
    /// Coefficients c_1..c_k of log^j(eps) in the raw truncated expansion
    /// (diagnostic; c_0 of that naive fit is not the regularized value).
    pub log_coeffs: Vec<(f64, f64)>,
    /// Max of the peeled-fit residual and the grid-stability difference.
    pub error_estimate: f64,
    pub converged: bool,
}

/// Truncated iterated integral of a word of forms along a path, over the
/// parameter range `[eps, 1 - eps]`.
pub fn truncated_iterated_integral(
    scene: &Scene,
    path: &Path,
    word: &[LogOneForm],
    eps: f64,
    cfg: &QuadratureConfig,
) -> Result<Complex64, RegintError> {
    cfg.validate()?;
    if !(eps > 0.0 && eps < 0.5) {
        return Err(RegintError::BadEps(eps));
    }
    let rule = PanelRule::new(cfg.nodes);
    transport(scene, path, word, eps, cfg, &rule)
}

fn breakpoints(path: &Path, eps: f64, depth: u32) -> Vec<f64> {
    let mut pts = vec![eps, 1.0 - eps];
    let mut t = eps;
    while t * 2.0 < 0.25 {
        t *= 2.0;
        pts.push(t);
    }
    let mut t = eps;
    while t * 2.0 < 0.25 {
        t *= 2.0;
        pts.push(1.0 - t);
    }
    for q in [0.25, 0.5, 0.75] {
        pts.push(q);
    }
    let n = path.segments.len();
    for i in 1..n {
        let b = i as f64 / n as f64;
        if b > eps && b < 1.0 - eps {
            pts.push(b);
        }
    }
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    // Uniform refinement by 2^depth.
    for _ in 0..depth {
        let mut refined = Vec::with_capacity(pts.len() * 2);
        for w in pts.windows(2) {
            refined.push(w[0]);
            refined.push(0.5 * (w[0] + w[1]));
        }
        refined.push(*pts.last().unwrap());
        pts = refined;
    }
    pts
}

/// Panel transport of the full tower; returns J_k.
fn transport(
    scene: &Scene,
    path: &Path,
    word: &[LogOneForm],
    eps: f64,
    cfg: &QuadratureConfig,
    rule: &PanelRule,
) -> Result<Complex64, RegintError> {
    let k = word.len();
    if k == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    for w in word {
        w.check_on(scene)?;
    }
    let pts = breakpoints(path, eps, cfg.depth);
    let ng = rule.n;
    let mut j_acc = vec![Complex64::new(0.0, 0.0); k + 1];
    j_acc[0] = Complex64::new(1.0, 0.0);
    let mut vals = vec![vec![Complex64::new(0.0, 0.0); ng]; k + 1];
    let mut f = vec![vec![Complex64::new(0.0, 0.0); ng]; k];
    for win in pts.windows(2) {
        let (a, b) = (win[0], win[1]);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        for (i, &x) in rule.nodes.iter().enumerate() {
            let t = mid + half * x;
            let (z, dz) = eval_path(path, t);
            for (j, form) in word.iter().rev().enumerate() {
                // level j+1 integrates word[k-1-j] (innermost = last letter)
                let fv = crate::geom::eval_form(form, scene, z, cfg.tol_pole)?;
                f[j][i] = fv * dz;
            }
        }
        for v in vals[0].iter_mut() {
            *v = j_acc[0];
        }
        let mut new_j = j_acc.clone();
        for j in 1..=k {
            for i in 0..ng {
                let mut s = Complex64::new(0.0, 0.0);
                for m in 0..ng {
                    s += rule.cum[i][m] * f[j - 1][m] * vals[j - 1][m];
                }
                vals[j][i] = j_acc[j] + half * s;
            }
            let mut s = Complex64::new(0.0, 0.0);
            for m in 0..ng {
                s += rule.weights[m] * f[j - 1][m] * vals[j - 1][m];
            }
            new_j[j] = j_acc[j] + half * s;
        }
        j_acc = new_j;
    }
    Ok(j_acc[k])
}

/// If a form is a scalar multiple of the dlog at the given puncture, return
/// the coefficient.
fn pure_dlog_coeff(form: &LogOneForm, puncture: usize) -> Option<Complex64> {
    if form.coeffs.len() == 1 {
        form.coeffs.get(&puncture).map(|c| c.to_c64())
    } else {
        None
    }
}

fn anchor_puncture(anchor: &Anchor) -> Option<usize> {
    match anchor {
        Anchor::Puncture(i) => Some(*i),
        Anchor::Point(_) => None,
    }
}

/// Solve the least-squares problem `A x = b` for real columns and complex
/// right-hand side, by Householder QR on the column-normalized matrix.
/// Returns the solution (in original column scaling) and the residual norm.
fn least_squares(cols: &[Vec<f64>], b: &[Complex64]) -> (Vec<Complex64>, f64) {
    let m = b.len();
    let n = cols.len();
    assert!(m >= n, "least squares needs at least as many rows as columns");
    let norms: Vec<f64> = cols
        .iter()
        .map(|c| c.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-300))
        .collect();
    // Column-major working copy of the normalized matrix.
    let mut a: Vec<Vec<f64>> = cols
        .iter()
        .zip(&norms)
        .map(|(c, &nr)| c.iter().map(|v| v / nr).collect())
        .collect();
    let mut rhs_re: Vec<f64> = b.iter().map(|z| z.re).collect();
    let mut rhs_im: Vec<f64> = b.iter().map(|z| z.im).collect();
    // Householder QR, applying reflectors to the right-hand sides too.
    for j in 0..n {
        let mut alpha = 0.0;
        for i in j..m {
            alpha += a[j][i] * a[j][i];
        }
        let alpha = alpha.sqrt() * if a[j][j] >= 0.0 { -1.0 } else { 1.0 };
        if alpha == 0.0 {
            continue;
        }
        let mut v = vec![0.0; m];
        v[j] = a[j][j] - alpha;
        for i in (j + 1)..m {
            v[i] = a[j][i];
        }
        let vtv: f64 = v[j..].iter().map(|x| x * x).sum();
        if vtv == 0.0 {
            continue;
        }
        let apply = |col: &mut Vec<f64>| {
            let dot: f64 = (j..m).map(|i| v[i] * col[i]).sum();
            let s = 2.0 * dot / vtv;
            for i in j..m {
                col[i] -= s * v[i];
            }
        };
        for c in a.iter_mut().skip(j) {
            apply(c);
        }
        apply(&mut rhs_re);
        apply(&mut rhs_im);
        a[j][j] = alpha;
    }
    // Back substitution on the triangular system.
    let solve = |rhs: &[f64]| -> Vec<f64> {
        let mut x = vec![0.0; n];
        for j in (0..n).rev() {
            let mut s = rhs[j];
            for l in (j + 1)..n {
                s -= a[l][j] * x[l];
            }
            let d = a[j][j];
            x[j] = if d.abs() < 1e-13 { 0.0 } else { s / d };
        }
        x
    };
    let xre = solve(&rhs_re);
    let xim = solve(&rhs_im);
    let resid: f64 = (n..m)
        .map(|i| rhs_re[i] * rhs_re[i] + rhs_im[i] * rhs_im[i])
        .sum::<f64>()
        .sqrt();
    let x = (0..n)
        .map(|j| Complex64::new(xre[j] / norms[j], xim[j] / norms[j]))
        .collect();
    (x, resid)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// Peel-and-fit extraction of the constant from the grid of G values.
/// Returns (c0, residual).
fn fit_constant(grid: &[f64], g: &[Complex64], k: usize) -> (Complex64, f64) {
    let lmax = grid
        .iter()
        .map(|e| e.ln().abs())
        .fold(0.0f64, f64::max);
    let mut cols = vec![vec![1.0; grid.len()]];
    for p in [1, 2] {
        for j in 0..=k {
            cols.push(
                grid.iter()
                    .map(|&e| e.powi(p) * (e.ln() / lmax).powi(j as i32))
                    .collect(),
            );
        }
    }
    let (x, resid) = least_squares(&cols, g);
    (x[0], resid)
}

/// Regularized iterated integral of a word of forms along a validated path.
pub fn regularize(
    scene: &Scene,
    path: &Path,
    word: &[LogOneForm],
    cfg: &QuadratureConfig,
) -> Result<RegularizedValue, RegintError> {
    cfg.validate()?;
    let report = validate_path(path, scene, cfg.tol_clearance)?;
    if !report.passed() {
        return Err(RegintError::InvalidPath(report.violations));
    }
    let k = word.len();
    // Fit columns: 1 + 2(k+1); need at least two extra rows.
    let need = 2 * (k + 1) + 3;
    if cfg.grid_count < need {
        return Err(RegintError::WordTooLong {
            len: k,
            need,
            have: cfg.grid_count,
        });
    }

    // Front run: multiples of the dlog at the END anchor (the first letter is
    // integrated at the largest time).  Back run: multiples of the dlog at
    // the start anchor.
    let end_pole = anchor_puncture(&path.end.anchor);
    let start_pole = anchor_puncture(&path.start.anchor);
    let mut front: Vec<Complex64> = Vec::new();
    if let Some(p) = end_pole {
        for w in word {
            match pure_dlog_coeff(w, p) {
                Some(c) => front.push(c),
                None => break,
            }
        }
    }
    let mut back: Vec<Complex64> = Vec::new();
    if let Some(p) = start_pole {
        for w in word.iter().rev() {
            match pure_dlog_coeff(w, p) {
                Some(c) => back.push(c),
                None => break,
            }
        }
    }

    let rule = PanelRule::new(cfg.nodes);
    let grid = cfg.grid();
    let eval_g = |&e: &f64| -> Result<(Complex64, Complex64), RegintError> {
        let l = e.ln();
        let mut tot = Complex64::new(0.0, 0.0);
        let mut full = Complex64::new(0.0, 0.0);
        for i in 0..=front.len() {
            for j in 0..=back.len() {
                if i + j > k {
                    continue;
                }
                let sub = &word[i..k - j];
                let jv = transport(scene, path, sub, e, cfg, &rule)?;
                if i == 0 && j == 0 {
                    full = jv;
                }
                let mut w = Complex64::new(1.0, 0.0);
                for c in &front[..i] {
                    w *= c;
                }
                for c in &back[back.len() - j..] {
                    w *= c;
                }
                let scale = (-l).powi(i as i32) / factorial(i) * l.powi(j as i32)
                    / factorial(j);
                tot += w * scale * jv;
            }
        }
        Ok((tot, full))
    };
    let pairs: Result<Vec<(Complex64, Complex64)>, RegintError> = if cfg.parallel {
        grid.par_iter().map(eval_g).collect()
    } else {
        grid.iter().map(eval_g).collect()
    };
    let pairs = pairs?;
    let g: Vec<Complex64> = pairs.iter().map(|p| p.0).collect();
    let raw: Vec<Complex64> = pairs.iter().map(|p| p.1).collect();

    let (c0, resid) = fit_constant(&grid, &g, k);
    // Stability: refit without the coarsest grid point.
    let (c0_drop, _) = fit_constant(&grid[1..], &g[1..], k);
    let error_estimate = resid.max((c0 - c0_drop).norm());

    // Diagnostic logarithmic expansion of the raw truncated integral.
    let lmax = grid.iter().map(|e| e.ln().abs()).fold(0.0f64, f64::max);
    let mut cols: Vec<Vec<f64>> = (0..=k)
        .map(|j| grid.iter().map(|&e| (e.ln() / lmax).powi(j as i32)).collect())
        .collect();
    cols.push(grid.to_vec());
    cols.push(grid.iter().map(|&e| e * e.ln() / lmax).collect());
    let (lx, _) = least_squares(&cols, &raw);
    let log_coeffs: Vec<(f64, f64)> = (1..=k)
        .map(|j| {
            let c = lx[j] / lmax.powi(j as i32);
            (c.re, c.im)
        })
        .collect();

    Ok(RegularizedValue {
        value: (c0.re, c0.im),
        log_coeffs,
        error_estimate,
        converged: error_estimate <= cfg.target_tol,
    })
}

/// Turn a bar word over dlog letters into a word of one-forms.
pub fn word_forms(word: &BarWord) -> Result<Vec<LogOneForm>, RegintError> {
    word.0
        .iter()
        .map(|l| match l {
            Letter::Dlog(i) => Ok(LogOneForm::dlog(*i)),
            Letter::Symbol(_) => Err(RegintError::AbstractLetter(l.to_string())),
        })
        .collect()
}

/// Period pairing of a bar element (a combination of dlog words) against a
/// path: the coefficient-weighted sum of regularized iterated integrals.
pub fn period_pairing(
    scene: &Scene,
    path: &Path,
    element: &BarElement,
    cfg: &QuadratureConfig,
) -> Result<RegularizedValue, RegintError> {
    let mut value = Complex64::new(0.0, 0.0);
    let mut error = 0.0f64;
    let mut converged = true;
    let mut log_coeffs: Vec<Complex64> = Vec::new();
    for (w, c) in &element.terms {
        let forms = word_forms(w)?;
        let r = regularize(scene, path, &forms, cfg)?;
        let cf = Complex64::new(c.to_f64(), 0.0);
        value += cf * Complex64::new(r.value.0, r.value.1);
        error += c.to_f64().abs() * r.error_estimate;
        converged &= r.converged;
        for (j, &(re, im)) in r.log_coeffs.iter().enumerate() {
            if log_coeffs.len() <= j {
                log_coeffs.push(Complex64::new(0.0, 0.0));
            }
            log_coeffs[j] += cf * Complex64::new(re, im);
        }
    }
    Ok(RegularizedValue {
        value: (value.re, value.im),
        log_coeffs: log_coeffs.iter().map(|z| (z.re, z.im)).collect(),
        error_estimate: error,
        converged,
    })
}

/// A zeta value by partial sums with a rigorous integral tail bound.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct MzvValue {
    pub value: f64,
    /// Rigorous width: the true value lies within `width` of `value`.
    pub width: f64,
}

/// `zeta(s)` for integer `s >= 2` by direct summation to `N`, with the tail
/// enclosed by `int_N^inf x^-s dx = N^{1-s}/(s-1)`; `N` is chosen so the
/// enclosure is narrower than 1e-9 and the midpoint is returned.
pub fn mzv_series(s: u32) -> MzvValue {
    assert!(s >= 2, "zeta series diverges for s < 2");
    let sm1 = (s - 1) as f64;
    let n = (1.0 / (sm1 * 1e-9)).powf(1.0 / sm1).ceil() as u64 + 1;
    let mut sum = 0.0f64;
    // Small terms first so the summation itself stays accurate.
    for i in (1..=n).rev() {
        sum += (i as f64).powi(-(s as i32));
    }
    let tail = (n as f64).powf(-sm1) / sm1;
    MzvValue {
        value: sum + tail / 2.0,
        width: tail / 2.0,
    }
}

/// The scalar `c` such that `ExactScalar::to_f64` agrees with the pairing
/// coefficient; convenience for building elements in tests and the CLI.
pub fn scalar(n: i64, d: i64) -> ExactScalar {
    ExactScalar::from_frac(n, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::path::standard_dch;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn truncated_single_log() {
        // int_eps^{1-eps} dt/t = -log(eps) + log(1-eps).
        let scene = Scene::zero_one();
        let dch = standard_dch(&scene).unwrap();
        let w = [LogOneForm::dlog(0)];
        for eps in [1e-2, 1e-4] {
            let v = truncated_iterated_integral(&scene, &dch, &w, eps, &cfg()).unwrap();
            let expect = (1.0 - eps).ln() - eps.ln();
            assert!(
                (v - Complex64::new(expect, 0.0)).norm() < 1e-12,
                "eps={eps}: {v} vs {expect}"
            );
        }
    }

    #[test]
    fn truncated_chen_identity() {
        // Pointwise Chen: J_{[a]} J_{[b]} = J_{[a|b]} + J_{[b|a]} at fixed eps.
        let scene = Scene::zero_one();
        let dch = standard_dch(&scene).unwrap();
        let a = LogOneForm::dlog(0);
        let b = LogOneForm::dlog(1);
        let eps = 1e-3;
        let ja = truncated_iterated_integral(&scene, &dch, &[a.clone()], eps, &cfg()).unwrap();
        let jb = truncated_iterated_integral(&scene, &dch, &[b.clone()], eps, &cfg()).unwrap();
        let jab =
            truncated_iterated_integral(&scene, &dch, &[a.clone(), b.clone()], eps, &cfg())
                .unwrap();
        let jba = truncated_iterated_integral(&scene, &dch, &[b, a], eps, &cfg()).unwrap();
        assert!((ja * jb - (jab + jba)).norm() < 1e-12 * ja.norm() * jb.norm());
    }

    #[test]
    fn regularize_dlog_on_dch_vanishes() {
        let scene = Scene::zero_one();
        let dch = standard_dch(&scene).unwrap();
        let r = regularize(&scene, &dch, &[LogOneForm::dlog(0)], &cfg()).unwrap();
        assert!(r.value.0.abs() < 1e-8 && r.value.1.abs() < 1e-8, "{:?}", r);
        assert!(r.converged);
        // The raw expansion has log coefficient -1 (from -log eps ... with
        // our orientation the divergence at the start contributes +log eps).
        assert!((r.log_coeffs[0].0.abs() - 1.0).abs() < 1e-3, "{:?}", r);
    }

    #[test]
    fn zeta_values() {
        let scene = Scene::zero_one();
        let dch = standard_dch(&scene).unwrap();
        // [dlog0 | dlog1] pairs to -zeta(2).
        let r = regularize(
            &scene,
            &dch,
            &[LogOneForm::dlog(0), LogOneForm::dlog(1)],
            &cfg(),
        )
        .unwrap();
        let z2 = std::f64::consts::PI * std::f64::consts::PI / 6.0;
        assert!((r.value.0 + z2).abs() < 1e-7, "{:?}", r);
        assert!(r.value.1.abs() < 1e-9);
        assert!(r.converged);
    }

    #[test]
    fn parallel_matches_serial() {
        let scene = Scene::zero_one();
        let dch = standard_dch(&scene).unwrap();
        let w = [LogOneForm::dlog(0), LogOneForm::dlog(1)];
        let serial = regularize(&scene, &dch, &w, &cfg()).unwrap();
        let mut pc = cfg();
        pc.parallel = true;
        let par = regularize(&scene, &dch, &w, &pc).unwrap();
        assert!(
            (serial.value.0 - par.value.0).abs() < 1e-12
                && (serial.value.1 - par.value.1).abs() < 1e-12
        );
    }

    #[test]
    fn word_too_long_is_reported() {
        let scene = Scene::zero_one();
        let dch = standard_dch(&scene).unwrap();
        let w: Vec<LogOneForm> = (0..6).map(|_| LogOneForm::dlog(0)).collect();
        assert!(matches!(
            regularize(&scene, &dch, &w, &cfg()),
            Err(RegintError::WordTooLong { .. })
        ));
    }

    #[test]
    fn mzv_series_values() {
        let z2 = mzv_series(2);
        assert!((z2.value - std::f64::consts::PI.powi(2) / 6.0).abs() < 2e-9);
        assert!(z2.width < 1e-9);
        let z3 = mzv_series(3);
        assert!((z3.value - 1.2020569031595942).abs() < 2e-9);
    }

    #[test]
    fn bad_configs_are_rejected() {
        let mut c = cfg();
        c.grid_count = 40; // smallest eps below sqrt(machine epsilon)
        assert!(c.validate().is_err());
        let mut c = cfg();
        c.ratio = 1.5;
        assert!(c.validate().is_err());
        let mut c = cfg();
        c.eps0 = 0.4;
        assert!(c.validate().is_err());
    }

    #[test]
    fn ordinary_anchor_tangent_is_inert() {
        // Changing the stored tangent metadata at an ordinary anchor does not
        // change any pairing.
        let scene = Scene::zero_one();
        let mut lp = crate::path::standard_loop(&scene, 0, ExactScalar::from_frac(1, 2)).unwrap();
        let w = [LogOneForm::dlog(0)];
        let r1 = regularize(&scene, &lp, &w, &cfg()).unwrap();
        lp.start.tangent = crate::exact::ExactComplex::from_int(5, 7);
        lp.end.tangent = crate::exact::ExactComplex::from_int(-2, 3);
        let r2 = regularize(&scene, &lp, &w, &cfg()).unwrap();
        assert_eq!(r1.value, r2.value);
        // And the loop integral is 2 pi i.
        assert!((r1.value.1 - std::f64::consts::TAU).abs() < 1e-10, "{:?}", r1);
        assert!(r1.value.0.abs() < 1e-10);
    }
}
