//! Independent finite-difference oracle used to cross-check every nonlinear
//! right-hand side. Everything here works on plain `Vec<f64>` with periodic
//! fourth-order centered stencils and conjugate gradients; none of the
//! crate's spectral machinery is involved.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub struct FdGrid {
    pub n: usize,
    pub length: f64,
    pub dx: f64,
    pub x: Vec<f64>,
}

impl FdGrid {
    pub fn new(n: usize, length: f64) -> Self {
        let dx = length / n as f64;
        let x = (0..n).map(|j| -0.5 * length + j as f64 * dx).collect();
        FdGrid { n, length, dx, x }
    }

    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.x.iter().map(|&x| f(x)).collect()
    }

    /// Fourth-order centered first derivative.
    pub fn d1(&self, f: &[f64]) -> Vec<f64> {
        let n = self.n;
        let c = 1.0 / (12.0 * self.dx);
        (0..n)
            .map(|i| {
                let (m2, m1, p1, p2) =
                    (f[(i + n - 2) % n], f[(i + n - 1) % n], f[(i + 1) % n], f[(i + 2) % n]);
                c * (m2 - 8.0 * m1 + 8.0 * p1 - p2)
            })
            .collect()
    }

    /// Fourth-order centered second derivative.
    pub fn d2(&self, f: &[f64]) -> Vec<f64> {
        let n = self.n;
        let c = 1.0 / (12.0 * self.dx * self.dx);
        (0..n)
            .map(|i| {
                let (m2, m1, p1, p2) =
                    (f[(i + n - 2) % n], f[(i + n - 1) % n], f[(i + 1) % n], f[(i + 2) % n]);
                c * (-m2 + 16.0 * m1 - 30.0 * f[i] + 16.0 * p1 - p2)
            })
            .collect()
    }

    pub fn d3(&self, f: &[f64]) -> Vec<f64> {
        self.d1(&self.d2(f))
    }
}

pub fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x * y).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

pub fn axpy(a: &[f64], b: &[f64], s: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

pub fn l2(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn rel_err(test: &[f64], oracle: &[f64]) -> f64 {
    l2(&sub(test, oracle)) / l2(oracle).max(1e-300)
}

/// Plain conjugate gradients for SPD `apply`.
pub fn cg(apply: impl Fn(&[f64]) -> Vec<f64>, b: &[f64], tol: f64, maxit: usize) -> Vec<f64> {
    let mut x = vec![0.0; b.len()];
    let mut r = b.to_vec();
    let mut p = r.clone();
    let mut rr: f64 = r.iter().map(|v| v * v).sum();
    let b_norm = l2(b).max(1e-300);
    for _ in 0..maxit {
        if rr.sqrt() / b_norm < tol {
            break;
        }
        let ap = apply(&p);
        let alpha = rr / p.iter().zip(&ap).map(|(u, v)| u * v).sum::<f64>();
        for i in 0..x.len() {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let rr_new: f64 = r.iter().map(|v| v * v).sum();
        let beta = rr_new / rr;
        for i in 0..p.len() {
            p[i] = r[i] + beta * p[i];
        }
        rr = rr_new;
    }
    x
}

/// Random band-limited trigonometric polynomial with `1/m^2`-decaying
/// coefficients; returned as a closure so it can be sampled exactly on any
/// grid.
pub fn band_limited(seed: u64, length: f64, max_mode: usize, amplitude: f64) -> impl Fn(f64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs: Vec<(f64, f64, f64)> = (1..=max_mode)
        .map(|m| {
            let k = 2.0 * std::f64::consts::PI * m as f64 / length;
            let decay = amplitude / (m * m) as f64;
            let a: f64 = rng.gen_range(-1.0..1.0);
            let b: f64 = rng.gen_range(-1.0..1.0);
            (k, a * decay, b * decay)
        })
        .collect();
    move |x: f64| coeffs.iter().map(|(k, a, b)| a * (k * x).cos() + b * (k * x).sin()).sum()
}

// ---------------------------------------------------------------------------
// Green-Naghdi oracle (velocity known, no elliptic solve needed)
// ---------------------------------------------------------------------------

pub fn depths_fd(zeta: &[f64], eps: f64, delta: f64) -> (Vec<f64>, Vec<f64>) {
    let h1 = zeta.iter().map(|z| 1.0 - eps * z).collect();
    let h2 = zeta.iter().map(|z| 1.0 / delta + eps * z).collect();
    (h1, h2)
}

pub fn qbar_fd(g: &FdGrid, h1: &[f64], h2: &[f64], v: &[f64], gamma: f64) -> Vec<f64> {
    let s: Vec<f64> = h1.iter().zip(h2).map(|(a, b)| a + gamma * b).collect();
    let t1: Vec<f64> = (0..g.n).map(|i| h1[i] * v[i] / s[i]).collect();
    let t2: Vec<f64> = (0..g.n).map(|i| h2[i] * v[i] / s[i]).collect();
    let a = g.d1(&mul(&h2.iter().map(|h| h.powi(3)).collect::<Vec<_>>(), &g.d1(&t1)));
    let b = g.d1(&mul(&h1.iter().map(|h| h.powi(3)).collect::<Vec<_>>(), &g.d1(&t2)));
    (0..g.n).map(|i| -(h1[i] * a[i] + gamma * h2[i] * b[i]) / (3.0 * h1[i] * h2[i])).collect()
}

pub fn rbar_fd(g: &FdGrid, h1: &[f64], h2: &[f64], v: &[f64], gamma: f64) -> Vec<f64> {
    let s: Vec<f64> = h1.iter().zip(h2).map(|(a, b)| a + gamma * b).collect();
    let t1: Vec<f64> = (0..g.n).map(|i| h1[i] * v[i] / s[i]).collect();
    let t2: Vec<f64> = (0..g.n).map(|i| h2[i] * v[i] / s[i]).collect();
    let u1 = mul(h2, &g.d1(&t1));
    let u2 = mul(h1, &g.d1(&t2));
    let a = g.d1(&mul(&h2.iter().map(|h| h.powi(3)).collect::<Vec<_>>(), &g.d1(&t1)));
    let b = g.d1(&mul(&h1.iter().map(|h| h.powi(3)).collect::<Vec<_>>(), &g.d1(&t2)));
    (0..g.n)
        .map(|i| {
            0.5 * (u1[i] * u1[i] - gamma * u2[i] * u2[i])
                + v[i] / (3.0 * s[i]) * (h1[i] / h2[i] * a[i] - gamma * h2[i] / h1[i] * b[i])
        })
        .collect()
}

/// `(dt zeta, dt q)` of the reference system, with the velocity supplied
/// directly.
pub fn gn_rhs_fd(
    g: &FdGrid,
    zeta: &[f64],
    vbar: &[f64],
    eps: f64,
    mu: f64,
    gamma: f64,
    delta: f64,
) -> (Vec<f64>, Vec<f64>) {
    let (h1, h2) = depths_fd(zeta, eps, delta);
    let s: Vec<f64> = h1.iter().zip(&h2).map(|(a, b)| a + gamma * b).collect();
    let flux: Vec<f64> = (0..g.n).map(|i| h1[i] * h2[i] * vbar[i] / s[i]).collect();
    let dzeta = scale(&g.d1(&flux), -1.0);

    let w: Vec<f64> = (0..g.n)
        .map(|i| (h1[i] * h1[i] - gamma * h2[i] * h2[i]) / (s[i] * s[i]) * vbar[i] * vbar[i])
        .collect();
    let rb = rbar_fd(g, &h1, &h2, vbar, gamma);
    let dq: Vec<f64> = {
        let a = g.d1(zeta);
        let b = g.d1(&w);
        let c = g.d1(&rb);
        (0..g.n)
            .map(|i| -(gamma + delta) * a[i] - 0.5 * eps * b[i] + mu * eps * c[i])
            .collect()
    };
    (dzeta, dq)
}

// ---------------------------------------------------------------------------
// Scalar-equation oracle
// ---------------------------------------------------------------------------

pub struct ScalarCoeffsFd {
    pub beta: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    pub nu: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub direction: f64,
}

pub fn scalar_rhs_fd(
    g: &FdGrid,
    u: &[f64],
    c: &ScalarCoeffsFd,
    eps: f64,
    mu: f64,
    lab_frame: bool,
) -> Vec<f64> {
    let ux = g.d1(u);
    let uxx = g.d2(u);
    let uxxx = g.d3(u);
    let mut rhs: Vec<f64> = (0..g.n)
        .map(|i| {
            let adv = if lab_frame { ux[i] } else { 0.0 };
            let poly = eps * c.alpha1 * u[i]
                + eps * eps * c.alpha2 * u[i] * u[i]
                + eps.powi(3) * c.alpha3 * u[i].powi(3);
            adv + poly * ux[i] + mu * c.nu * uxxx[i]
        })
        .collect();
    if c.kappa1 != 0.0 || c.kappa2 != 0.0 {
        let inner: Vec<f64> =
            (0..g.n).map(|i| c.kappa1 * u[i] * uxx[i] + c.kappa2 * ux[i] * ux[i]).collect();
        let di = g.d1(&inner);
        for i in 0..g.n {
            rhs[i] += mu * eps * di[i];
        }
    }
    let rhs = scale(&rhs, -c.direction);
    if c.beta == 0.0 {
        return rhs;
    }
    // solve (I - mu*beta D2) out = rhs by conjugate gradients
    let a = mu * c.beta;
    cg(|v| sub(v, &scale(&g.d2(v), a)), &rhs, 1e-13, 4000)
}

// ---------------------------------------------------------------------------
// Coupled-flux oracle: the time brackets are expanded mechanically with the
// product rule and the transport substitutions dt u_l = -dx u_l,
// dt u_r = +dx u_r (no hand-simplification).
// ---------------------------------------------------------------------------

pub struct BaseCoeffsFd {
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    pub nu: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub kappa3: f64,
}

pub fn flux_l_fd(
    g: &FdGrid,
    ul: &[f64],
    ur: &[f64],
    eps: f64,
    mu: f64,
    b: &BaseCoeffsFd,
) -> Vec<f64> {
    let n = g.n;
    let dt_ul = scale(&g.d1(ul), -1.0);
    let dt_ur = g.d1(ur);

    let qa: Vec<f64> = (0..n).map(|i| (ul[i] + ur[i] / 3.0) * (ul[i] - ur[i])).collect();
    let mut out = scale(&g.d1(&qa), eps * b.alpha1 / 2.0);

    let qb: Vec<f64> = (0..n).map(|i| (ul[i] - ur[i]) * ul[i] * (ul[i] + ur[i])).collect();
    out = axpy(&out, &g.d1(&qb), eps * eps * b.alpha2 / 3.0);

    let qc: Vec<f64> = (0..n)
        .map(|i| (ul[i] - ur[i] / 5.0) * (ul[i] - ur[i]) * (ul[i] + ur[i]).powi(2))
        .collect();
    out = axpy(&out, &g.d1(&qc), eps.powi(3) * b.alpha3 / 4.0);

    // -mu*nu dxx dt(u_l - u_r)
    let dt_diff = sub(&dt_ul, &dt_ur);
    out = axpy(&out, &g.d2(&dt_diff), -mu * b.nu);

    // mu*eps*kappa3 dx[(1/3)(u_l-u_r)(d2 u_l - d2 u_r) + (1/2)(d1 u_l - d1 u_r)^2]
    let d2l = g.d2(ul);
    let d2r = g.d2(ur);
    let d1l = g.d1(ul);
    let d1r = g.d1(ur);
    let e_inner: Vec<f64> = (0..n)
        .map(|i| {
            (ul[i] - ur[i]) * (d2l[i] - d2r[i]) / 3.0 + 0.5 * (d1l[i] - d1r[i]).powi(2)
        })
        .collect();
    out = axpy(&out, &g.d1(&e_inner), mu * eps * b.kappa3);

    // -mu*eps dt[k1(u_l d2 u_l - u_r d2 u_r) + k2(u_r d2 u_l - u_l d2 u_r)
    //            + (k1 + k2/2)((d1 u_l)^2 - (d1 u_r)^2)]
    let d2_dt_ul = g.d2(&dt_ul);
    let d2_dt_ur = g.d2(&dt_ur);
    let d1_dt_ul = g.d1(&dt_ul);
    let d1_dt_ur = g.d1(&dt_ur);
    let dt_bracket: Vec<f64> = (0..n)
        .map(|i| {
            b.kappa1
                * (dt_ul[i] * d2l[i] + ul[i] * d2_dt_ul[i] - dt_ur[i] * d2r[i]
                    - ur[i] * d2_dt_ur[i])
                + b.kappa2
                    * (dt_ur[i] * d2l[i] + ur[i] * d2_dt_ul[i] - dt_ul[i] * d2r[i]
                        - ul[i] * d2_dt_ur[i])
                + (b.kappa1 + b.kappa2 / 2.0)
                    * (2.0 * d1l[i] * d1_dt_ul[i] - 2.0 * d1r[i] * d1_dt_ur[i])
        })
        .collect();
    axpy(&out, &dt_bracket, -mu * eps)
}

pub fn flux_r_fd(
    g: &FdGrid,
    ul: &[f64],
    ur: &[f64],
    eps: f64,
    mu: f64,
    b: &BaseCoeffsFd,
) -> Vec<f64> {
    let n = g.n;
    let dt_ul = scale(&g.d1(ul), -1.0);
    let dt_ur = g.d1(ur);

    let qa: Vec<f64> = (0..n).map(|i| (ul[i] / 3.0 + ur[i]) * (ur[i] - ul[i])).collect();
    let mut out = scale(&g.d1(&qa), -eps * b.alpha1 / 2.0);

    let qb: Vec<f64> = (0..n).map(|i| (ur[i] - ul[i]) * ur[i] * (ul[i] + ur[i])).collect();
    out = axpy(&out, &g.d1(&qb), -eps * eps * b.alpha2 / 3.0);

    let qc: Vec<f64> = (0..n)
        .map(|i| (ur[i] - ul[i] / 5.0) * (ur[i] - ul[i]) * (ul[i] + ur[i]).powi(2))
        .collect();
    out = axpy(&out, &g.d1(&qc), -eps.powi(3) * b.alpha3 / 4.0);

    let dt_diff = sub(&dt_ur, &dt_ul);
    out = axpy(&out, &g.d2(&dt_diff), -mu * b.nu);

    let d2l = g.d2(ul);
    let d2r = g.d2(ur);
    let d1l = g.d1(ul);
    let d1r = g.d1(ur);
    let e_inner: Vec<f64> = (0..n)
        .map(|i| {
            (ur[i] - ul[i]) * (d2r[i] - d2l[i]) / 3.0 + 0.5 * (d1r[i] - d1l[i]).powi(2)
        })
        .collect();
    out = axpy(&out, &g.d1(&e_inner), -mu * eps * b.kappa3);

    let d2_dt_ul = g.d2(&dt_ul);
    let d2_dt_ur = g.d2(&dt_ur);
    let d1_dt_ul = g.d1(&dt_ul);
    let d1_dt_ur = g.d1(&dt_ur);
    let dt_bracket: Vec<f64> = (0..n)
        .map(|i| {
            b.kappa1
                * (dt_ur[i] * d2r[i] + ur[i] * d2_dt_ur[i] - dt_ul[i] * d2l[i]
                    - ul[i] * d2_dt_ul[i])
                + b.kappa2
                    * (dt_ul[i] * d2r[i] + ul[i] * d2_dt_ur[i] - dt_ur[i] * d2l[i]
                        - ur[i] * d2_dt_ul[i])
                + (b.kappa1 + b.kappa2 / 2.0)
                    * (2.0 * d1r[i] * d1_dt_ur[i] - 2.0 * d1l[i] * d1_dt_ul[i])
        })
        .collect();
    axpy(&out, &dt_bracket, -mu * eps)
}

pub fn coupling_forcing_fd(
    g: &FdGrid,
    v_plus: &[f64],
    v_minus: &[f64],
    eps: f64,
    mu: f64,
    b: &BaseCoeffsFd,
) -> (Vec<f64>, Vec<f64>) {
    let zero = vec![0.0; g.n];
    let f_plus = scale(
        &sub(&flux_l_fd(g, v_plus, v_minus, eps, mu, b), &flux_l_fd(g, v_plus, &zero, eps, mu, b)),
        -1.0,
    );
    let f_minus = scale(
        &sub(&flux_r_fd(g, v_plus, v_minus, eps, mu, b), &flux_r_fd(g, &zero, v_minus, eps, mu, b)),
        -1.0,
    );
    (f_plus, f_minus)
}

// ---------------------------------------------------------------------------
// Deformation-to-velocity reconstruction oracle
// ---------------------------------------------------------------------------

pub fn reconstruct_vbar_fd(
    g: &FdGrid,
    zeta: &[f64],
    c: &ScalarCoeffsFd,
    eps: f64,
    mu: f64,
    gamma: f64,
    delta: f64,
) -> Vec<f64> {
    let (h1, h2) = depths_fd(zeta, eps, delta);
    let zx = g.d1(zeta);
    let zxx = g.d2(zeta);
    (0..g.n)
        .map(|i| {
            let z = zeta[i];
            let vlow = z
                + eps * c.alpha1 / 2.0 * z * z
                + eps * eps * c.alpha2 / 3.0 * z.powi(3)
                + eps.powi(3) * c.alpha3 / 4.0 * z.powi(4)
                + mu * c.nu * zxx[i]
                + mu * eps * (c.kappa1 * z * zxx[i] + c.kappa2 * zx[i] * zx[i]);
            (h1[i] + gamma * h2[i]) / (h1[i] * h2[i]) * vlow
        })
        .collect()
}
