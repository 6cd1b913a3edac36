//! Periodic equispaced grid, trigonometric differentiation, Fourier-multiplier
//! inverses and Sobolev-type norms. All other modules do their calculus here.
//!
//! Conventions are fixed so norms are bit-reproducible:
//! grid points `x_j = -L/2 + j*dx`, wavenumbers `k_m = 2*pi*m/L` for
//! `m = -n/2+1 .. n/2`, and normalized Fourier coefficients
//! `c_m = (1/n) sum_j f_j exp(-i k_m x_j)`.

use crate::error::{Error, Result};
use ndarray::Array1;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::f64::consts::PI;
use std::sync::Arc;

/// Default grid spacing; fine enough that spectral tails of the smooth data
/// used throughout sit at roundoff.
pub const DEFAULT_DX: f64 = 0.2;

/// Periodic equispaced grid on `[-L/2, L/2)`.
pub struct Grid {
    n: usize,
    length: f64,
    dx: f64,
    x: Array1<f64>,
    /// Wavenumbers in FFT storage order (`0, 1, .., n/2, -n/2+1, .., -1`
    /// times `2*pi/L`).
    k: Vec<f64>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Grid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Grid")
            .field("n", &self.n)
            .field("length", &self.length)
            .field("dx", &self.dx)
            .finish()
    }
}

impl Grid {
    pub fn new(n: usize, length: f64) -> Result<Arc<Self>> {
        if n < 16 || n % 2 != 0 {
            return Err(Error::InvalidParameter(format!(
                "grid needs an even point count >= 16, got {n}"
            )));
        }
        if !(length > 0.0) {
            return Err(Error::InvalidParameter(format!("grid length {length} must be > 0")));
        }
        let dx = length / n as f64;
        let x = Array1::from_iter((0..n).map(|j| -0.5 * length + j as f64 * dx));
        let base = 2.0 * PI / length;
        let k = (0..n)
            .map(|m| {
                let m = if m <= n / 2 { m as isize } else { m as isize - n as isize };
                base * m as f64
            })
            .collect();
        let mut planner = FftPlanner::new();
        Ok(Arc::new(Grid {
            n,
            length,
            dx,
            x,
            k,
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
        }))
    }

    /// Grid with spacing `dx` covering at least `min_length`, the point count
    /// rounded up to an even 5-smooth integer for transform efficiency.
    pub fn with_spacing(dx: f64, min_length: f64) -> Result<Arc<Self>> {
        if !(dx > 0.0) {
            return Err(Error::InvalidParameter(format!("dx = {dx} must be > 0")));
        }
        let n = fft_friendly((min_length / dx).ceil() as usize);
        Grid::new(n, n as f64 * dx)
    }

    pub fn n_points(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn x(&self) -> &Array1<f64> {
        &self.x
    }

    pub fn wavenumbers(&self) -> &[f64] {
        &self.k
    }

    /// Largest resolved wavenumber (Nyquist).
    pub fn k_max(&self) -> f64 {
        PI / self.dx
    }

    fn index_of_nyquist(&self) -> usize {
        self.n / 2
    }

    /// Sample a closed-form function on the grid.
    pub fn sample(self: &Arc<Self>, f: impl Fn(f64) -> f64) -> Field {
        Field { grid: self.clone(), values: self.x.mapv(&f) }
    }

    pub fn zeros(self: &Arc<Self>) -> Field {
        Field { grid: self.clone(), values: Array1::zeros(self.n) }
    }

    /// Normalized spectrum of a sample vector.
    fn spectrum(&self, values: &Array1<f64>) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> =
            values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.fwd.process(&mut buf);
        let scale = 1.0 / self.n as f64;
        for c in &mut buf {
            *c *= scale;
        }
        // The FFT indexes samples by j while our coefficients refer to the
        // physical coordinate x_j = -L/2 + j*dx; the shift by L/2 is exactly
        // a factor (-1)^m per mode.
        for (m, c) in buf.iter_mut().enumerate() {
            if m % 2 == 1 {
                *c = -*c;
            }
        }
        buf
    }

    fn synthesize(&self, mut spec: Vec<Complex64>) -> Array1<f64> {
        for (m, c) in spec.iter_mut().enumerate() {
            if m % 2 == 1 {
                *c = -*c;
            }
        }
        self.inv.process(&mut spec);
        Array1::from_iter(spec.iter().map(|c| c.re))
    }
}

/// Smallest even integer `>= m` with no prime factor above 5.
pub fn fft_friendly(m: usize) -> usize {
    let mut n = m.max(16);
    if n % 2 == 1 {
        n += 1;
    }
    loop {
        let mut r = n;
        for p in [2usize, 3, 5] {
            while r % p == 0 {
                r /= p;
            }
        }
        if r == 1 {
            return n;
        }
        n += 2;
    }
}

/// Real-valued function sampled on a [`Grid`].
#[derive(Debug, Clone)]
pub struct Field {
    grid: Arc<Grid>,
    values: Array1<f64>,
}

impl Field {
    pub fn from_values(grid: &Arc<Grid>, values: Array1<f64>) -> Result<Self> {
        if values.len() != grid.n {
            return Err(Error::GridMismatch(grid.n, values.len()));
        }
        Ok(Field { grid: grid.clone(), values })
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &Array1<f64> {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut Array1<f64> {
        &mut self.values
    }

    pub fn into_values(self) -> Array1<f64> {
        self.values
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn ensure_finite(&self, context: &'static str) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::NonFinite(context))
        }
    }

    pub fn same_grid(&self, other: &Field) -> Result<()> {
        if Arc::ptr_eq(&self.grid, &other.grid)
            || (self.grid.n == other.grid.n && self.grid.length == other.grid.length)
        {
            Ok(())
        } else {
            Err(Error::GridMismatch(self.grid.n, other.grid.n))
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |a, &v| a.max(v.abs()))
    }

    /// Mean value; `integral = mean * L`.
    pub fn mean(&self) -> f64 {
        self.values.sum() / self.grid.n as f64
    }

    pub fn integral(&self) -> f64 {
        self.mean() * self.grid.length
    }

    /// Apply a real Fourier multiplier `sigma(k)`.
    pub fn multiplier(&self, sigma: impl Fn(f64) -> f64) -> Field {
        let mut spec = self.grid.spectrum(&self.values);
        for (m, c) in spec.iter_mut().enumerate() {
            *c *= sigma(self.grid.k[m]);
        }
        Field { grid: self.grid.clone(), values: self.grid.synthesize(spec) }
    }

    /// Spectral derivative of the given order. The Nyquist mode of odd
    /// derivatives is zeroed so the result stays real.
    pub fn derivative(&self, order: u32) -> Result<Field> {
        self.ensure_finite("derivative input")?;
        assert!(order >= 1, "derivative order must be >= 1");
        let mut spec = self.grid.spectrum(&self.values);
        let nyq = self.grid.index_of_nyquist();
        for (m, c) in spec.iter_mut().enumerate() {
            if m == nyq && order % 2 == 1 {
                *c = Complex64::new(0.0, 0.0);
                continue;
            }
            let ik = Complex64::new(0.0, self.grid.k[m]);
            *c *= ik.powu(order);
        }
        Ok(Field { grid: self.grid.clone(), values: self.grid.synthesize(spec) })
    }

    /// Zero-mean antiderivative (spectral division by `i k`; the zero mode of
    /// the input is dropped).
    pub fn antiderivative(&self) -> Result<Field> {
        self.ensure_finite("antiderivative input")?;
        let mut spec = self.grid.spectrum(&self.values);
        let nyq = self.grid.index_of_nyquist();
        for (m, c) in spec.iter_mut().enumerate() {
            if m == 0 || m == nyq {
                *c = Complex64::new(0.0, 0.0);
            } else {
                *c /= Complex64::new(0.0, self.grid.k[m]);
            }
        }
        Ok(Field { grid: self.grid.clone(), values: self.grid.synthesize(spec) })
    }

    /// Solve `(1 - a dxx) u = f`, i.e. divide mode `m` by `1 + a k_m^2`.
    /// Fails when some multiplier is (near) singular, which only happens for
    /// invalid negative `a`.
    pub fn helmholtz_inverse(&self, a: f64) -> Result<Field> {
        self.ensure_finite("helmholtz input")?;
        let mut spec = self.grid.spectrum(&self.values);
        for (m, c) in spec.iter_mut().enumerate() {
            let k = self.grid.k[m];
            let denom = 1.0 + a * k * k;
            if denom <= 1e-12 {
                return Err(Error::SingularMultiplier { k, value: denom });
            }
            *c /= denom;
        }
        Ok(Field { grid: self.grid.clone(), values: self.grid.synthesize(spec) })
    }

    /// 2/3-rule dealiasing: zero every mode with `|k| > (2/3) k_max`.
    pub fn dealias(&self) -> Field {
        let cut = self.grid.k_max() * 2.0 / 3.0;
        self.multiplier(|k| if k.abs() > cut { 0.0 } else { 1.0 })
    }

    /// `|f|_{H^s}` with `|f|^2 = L * sum_m (1 + k_m^2)^s |c_m|^2`.
    pub fn sobolev_norm(&self, s: f64) -> f64 {
        let spec = self.grid.spectrum(&self.values);
        let mut acc = 0.0;
        for (m, c) in spec.iter().enumerate() {
            let k = self.grid.k[m];
            acc += (1.0 + k * k).powf(s) * c.norm_sqr();
        }
        (self.grid.length * acc).sqrt()
    }

    /// `( |f|_{H^s}^2 + mu_beta |f|_{H^{s+1}}^2 )^{1/2}`.
    pub fn scaled_energy(&self, s: f64, mu_beta: f64) -> f64 {
        assert!(mu_beta >= 0.0, "mu_beta must be >= 0");
        let spec = self.grid.spectrum(&self.values);
        let mut acc = 0.0;
        for (m, c) in spec.iter().enumerate() {
            let k = self.grid.k[m];
            let w = 1.0 + k * k;
            acc += (w.powf(s) + mu_beta * w.powf(s + 1.0)) * c.norm_sqr();
        }
        (self.grid.length * acc).sqrt()
    }

    /// Weighted norm `sum_{j=0..n} |w^j f|_{H^{s+2(n-j)}_mu}` with `w` the
    /// coordinate centered on the domain midpoint. Only meaningful while the
    /// field stays away from the periodic seam.
    pub fn weighted_norm(&self, n: u32, s: f64, mu: f64) -> f64 {
        let mid = 0.5 * (self.grid.x[0] + self.grid.x[self.grid.n - 1]);
        let mut acc = 0.0;
        for j in 0..=n {
            let mut weighted = self.clone();
            if j > 0 {
                for (v, &x) in weighted.values.iter_mut().zip(self.grid.x.iter()) {
                    *v *= (x - mid).powi(j as i32);
                }
            }
            acc += weighted.scaled_energy(s + 2.0 * (n - j) as f64, mu);
        }
        acc
    }

    /// Pointwise combination helper: `self * a + other * b`.
    pub fn axpy(&self, a: f64, other: &Field, b: f64) -> Field {
        Field { grid: self.grid.clone(), values: &self.values * a + &other.values * b }
    }

    pub fn scale(&self, a: f64) -> Field {
        Field { grid: self.grid.clone(), values: &self.values * a }
    }

    /// Pointwise product (pseudospectral nonlinearity).
    pub fn mul(&self, other: &Field) -> Field {
        Field { grid: self.grid.clone(), values: &self.values * &other.values }
    }

    pub fn add(&self, other: &Field) -> Field {
        Field { grid: self.grid.clone(), values: &self.values + &other.values }
    }

    pub fn sub(&self, other: &Field) -> Field {
        Field { grid: self.grid.clone(), values: &self.values - &other.values }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Field {
        Field { grid: self.grid.clone(), values: self.values.mapv(f) }
    }

    /// Pointwise quotient.
    pub fn div(&self, other: &Field) -> Field {
        Field { grid: self.grid.clone(), values: &self.values / &other.values }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit_grid(n: usize) -> Arc<Grid> {
        Grid::new(n, 2.0 * PI).unwrap()
    }

    fn rel_l2(a: &Field, b: &Field) -> f64 {
        let diff = a.sub(b);
        let denom = b.sobolev_norm(0.0).max(1e-300);
        diff.sobolev_norm(0.0) / denom
    }

    #[test]
    fn grid_geometry() {
        let g = unit_grid(64);
        assert_eq!(g.n_points(), 64);
        assert_relative_eq!(g.dx() * 64.0, g.length(), max_relative = 1e-15);
        // wavenumbers symmetric about zero except the Nyquist mode
        let k = g.wavenumbers();
        assert_eq!(k[0], 0.0);
        assert_relative_eq!(k[1], 1.0, max_relative = 1e-14);
        assert_relative_eq!(k[63], -1.0, max_relative = 1e-14);
        assert_relative_eq!(k[32], 32.0, max_relative = 1e-14);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(Grid::new(15, 1.0).is_err());
        assert!(Grid::new(14, 1.0).is_err());
        assert!(Grid::new(16, 0.0).is_err());
    }

    #[test]
    fn fft_friendly_rounds_up() {
        assert_eq!(fft_friendly(17), 18);
        assert_eq!(fft_friendly(1205), 1250); // 2 * 5^4
        assert_eq!(fft_friendly(1024), 1024);
    }

    #[test]
    fn derivative_of_sine() {
        let g = unit_grid(64);
        let f = g.sample(|x| (3.0 * x).sin());
        let expect = g.sample(|x| 3.0 * (3.0 * x).cos());
        assert!(rel_l2(&f.derivative(1).unwrap(), &expect) < 1e-12);
    }

    #[test]
    fn derivative_of_constant_is_zero() {
        let g = unit_grid(32);
        let f = g.sample(|_| 4.2);
        for order in 1..=3 {
            assert!(f.derivative(order).unwrap().max_abs() < 1e-13);
        }
    }

    #[test]
    fn third_derivative_of_cosine() {
        let g = unit_grid(64);
        let f = g.sample(|x| (2.0 * x).cos());
        let expect = g.sample(|x| 8.0 * (2.0 * x).sin());
        assert!(rel_l2(&f.derivative(3).unwrap(), &expect) < 1e-12);
    }

    #[test]
    fn helmholtz_identity_at_zero() {
        let g = unit_grid(32);
        let f = g.sample(|x| x.sin() + 0.3 * (4.0 * x).cos());
        assert!(rel_l2(&f.helmholtz_inverse(0.0).unwrap(), &f) < 1e-14);
    }

    #[test]
    fn helmholtz_single_mode() {
        let g = unit_grid(32);
        let f = g.sample(|x| x.cos());
        let expect = g.sample(|x| x.cos() * 2.0 / 3.0);
        assert!(rel_l2(&f.helmholtz_inverse(0.5).unwrap(), &expect) < 1e-13);
    }

    #[test]
    fn helmholtz_keeps_constants() {
        let g = unit_grid(32);
        let f = g.sample(|_| 1.7);
        assert!(rel_l2(&f.helmholtz_inverse(2.0).unwrap(), &f) < 1e-14);
    }

    #[test]
    fn helmholtz_rejects_singular_multiplier() {
        let g = unit_grid(32);
        let f = g.sample(|x| x.sin());
        // 1 + a k^2 = 0 at k = 1 for a = -1
        assert!(matches!(
            f.helmholtz_inverse(-1.0),
            Err(Error::SingularMultiplier { .. })
        ));
    }

    #[test]
    fn helmholtz_round_trip() {
        let g = unit_grid(128);
        let f = g.sample(|x| (-(x * x)).exp() * (1.0 + 0.2 * (3.0 * x).sin()));
        let a = 0.37;
        let u = f.helmholtz_inverse(a).unwrap();
        let back = u.sub(&u.derivative(2).unwrap().scale(a));
        assert!(rel_l2(&back, &f) < 1e-10);
    }

    #[test]
    fn derivative_antiderivative_round_trip() {
        let g = unit_grid(128);
        // zero-mean band-limited field
        let f = g.sample(|x| x.sin() + 0.4 * (5.0 * x).cos() - 0.1 * (11.0 * x).sin());
        let round = f.derivative(1).unwrap().antiderivative().unwrap();
        assert!(rel_l2(&round, &f) < 1e-10);
    }

    #[test]
    fn sobolev_norm_values() {
        let g = unit_grid(64);
        assert_eq!(g.zeros().sobolev_norm(1.5), 0.0);
        let f = g.sample(|x| (3.0 * x).sin());
        assert_relative_eq!(f.sobolev_norm(0.0), PI.sqrt(), max_relative = 1e-12);
        assert_relative_eq!(f.sobolev_norm(1.0), (10.0 * PI).sqrt(), max_relative = 1e-12);
        assert_relative_eq!(f.sobolev_norm(1.0), 5.604991, max_relative = 1e-6);
    }

    #[test]
    fn scaled_energy_values() {
        let g = unit_grid(64);
        let f = g.sample(|x| (3.0 * x).sin());
        assert_relative_eq!(f.scaled_energy(0.0, 0.0), f.sobolev_norm(0.0), max_relative = 1e-14);
        assert_relative_eq!(f.scaled_energy(0.0, 1.0), (11.0 * PI).sqrt(), max_relative = 1e-12);
        assert_eq!(g.zeros().scaled_energy(0.0, 1.0), 0.0);
    }

    #[test]
    fn parseval_against_trapezoid() {
        let g = unit_grid(128);
        let f = g.sample(|x| 0.7 * (2.0 * x).sin() + 0.1 * (9.0 * x).cos() + 0.05);
        let quad: f64 = f.values().iter().map(|v| v * v).sum::<f64>() * g.dx();
        let norm2 = f.sobolev_norm(0.0).powi(2);
        assert_relative_eq!(norm2, quad, max_relative = 1e-10);
    }

    #[test]
    fn weighted_norm_n0_is_scaled_energy() {
        let g = Grid::new(256, 80.0).unwrap();
        let f = g.sample(|x| (-(x / 2.0) * (x / 2.0)).exp());
        assert_relative_eq!(
            f.weighted_norm(0, 0.5, 0.3),
            f.scaled_energy(0.5, 0.3),
            max_relative = 1e-14
        );
        assert_eq!(g.zeros().weighted_norm(2, 0.0, 0.1), 0.0);
    }

    #[test]
    fn weighted_norm_matches_quadrature_oracle() {
        // n = 1, s = 0, mu = 0: |x f|_L2 + |f|_{H^2}, checked against a
        // trapezoid + finite-difference oracle that never touches the
        // spectral machinery.
        let n = 4096;
        let length = 120.0;
        let g = Grid::new(n, length).unwrap();
        let f = g.sample(|x| (-(x / 2.0) * (x / 2.0)).exp());

        let dx = g.dx();
        let vals: Vec<f64> = f.values().to_vec();
        let xs: Vec<f64> = g.x().to_vec();
        let mid = 0.5 * (xs[0] + xs[n - 1]);
        let xf2: f64 = vals
            .iter()
            .zip(&xs)
            .map(|(&v, &x)| (x - mid) * (x - mid) * v * v)
            .sum::<f64>()
            * dx;
        // |f|_{H^2}^2 = int f^2 + 2 f'^2 + f''^2 via fourth-order centered
        // differences
        let mut d1 = vec![0.0; n];
        let mut d2 = vec![0.0; n];
        for i in 0..n {
            let (m2, m1, p1, p2) = (
                vals[(i + n - 2) % n],
                vals[(i + n - 1) % n],
                vals[(i + 1) % n],
                vals[(i + 2) % n],
            );
            d1[i] = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * dx);
            d2[i] = (-m2 + 16.0 * m1 - 30.0 * vals[i] + 16.0 * p1 - p2) / (12.0 * dx * dx);
        }
        let int = |v: &Vec<f64>| v.iter().map(|y| y * y).sum::<f64>() * dx;
        let h2 = (int(&vals) + 2.0 * int(&d1) + int(&d2)).sqrt();
        let oracle = xf2.sqrt() + h2;

        let ours = f.weighted_norm(1, 0.0, 0.0);
        assert_relative_eq!(ours, oracle, max_relative = 1e-6);
    }

    #[test]
    fn operations_commute_with_grid_translation() {
        let g = unit_grid(64);
        let f = g.sample(|x| (2.0 * x).sin() + 0.3 * (5.0 * x).cos());
        let shift = 7usize;
        let translate = |f: &Field| {
            let v = f.values();
            let rotated =
                Array1::from_iter((0..64).map(|i| v[(i + 64 - shift) % 64]));
            Field::from_values(f.grid(), rotated).unwrap()
        };
        let a = translate(&f.derivative(1).unwrap());
        let b = translate(&f).derivative(1).unwrap();
        assert!(rel_l2(&a, &b) < 1e-12);
        let a = translate(&f.helmholtz_inverse(0.3).unwrap());
        let b = translate(&f).helmholtz_inverse(0.3).unwrap();
        assert!(rel_l2(&a, &b) < 1e-12);
        assert_relative_eq!(
            translate(&f).sobolev_norm(1.0),
            f.sobolev_norm(1.0),
            max_relative = 1e-12
        );
    }

    #[test]
    fn dealias_zeros_top_third() {
        let g = unit_grid(32); // k_max = 16, cutoff at 32/3
        let f = g.sample(|x| (4.0 * x).sin() + (13.0 * x).cos());
        let d = f.dealias();
        let kept = g.sample(|x| (4.0 * x).sin());
        assert!(rel_l2(&d, &kept) < 1e-12);
    }

    #[test]
    fn rejects_non_finite_input() {
        let g = unit_grid(16);
        let mut f = g.zeros();
        f.values_mut()[3] = f64::NAN;
        assert!(matches!(f.derivative(1), Err(Error::NonFinite(_))));
    }
}
