use super::{check_finite, check_square, Matrix};
use std::cell::RefCell;
use crate::{Error, Result};

/// Degrees and scaling threshold for the `(p, q)` Padé approximant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PadeConfig {
    pub p: usize,
    pub q: usize,
    /// The argument is halved until its 1-norm is at most this value.
    pub scaling_threshold: f64,
}

impl Default for PadeConfig {
    fn default() -> Self {
        Self::new(6, 6)
    }
}

impl PadeConfig {
    pub fn new(p: usize, q: usize) -> Self {
        Self {
            p,
            q,
            scaling_threshold: 0.5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.p + self.q == 0 {
            return Err(Error::InvalidConfig("Padé degrees need p + q >= 1".into()));
        }
        if !(self.scaling_threshold > 0.0 && self.scaling_threshold.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "scaling threshold must be positive, got {}",
                self.scaling_threshold
            )));
        }
        Ok(())
    }

    /// Number of squarings used for a matrix of the given 1-norm.
    pub fn squarings(&self, norm: f64) -> u32 {
        let mut k = 0u32;
        let mut scaled = norm;
        while scaled > self.scaling_threshold {
            scaled *= 0.5;
            k += 1;
        }
        k
    }
}

/// Coefficients of `sum_j c_j X^j` for the numerator of the `(p, q)` approximant.
///
/// `c_j = (p+q-j)! p! / ((p+q)! j! (p-j)!)`; the denominator uses the same
/// formula with `p` and `q` swapped, evaluated at `-X`.
#[cfg(test)]
fn coefficients(p: usize, q: usize) -> Vec<f64> {
    let mut c = Vec::new();
    fill_coefficients(&mut c, p, q);
    c
}

/// `e^A` by `(p, q)` Padé approximation with scaling and squaring.
///
/// The scaling exponent `k` is the smallest non-negative integer with
/// `||2^-k A||_1 <= cfg.scaling_threshold`. The 1-norm bounds the spectral
/// norm from above for the matrices used here up to a dimension factor, which
/// keeps the truncation analysis intact.
pub fn pade_expm(a: &Matrix, cfg: &PadeConfig) -> Result<Matrix> {
    let n = check_square(a)?;
    check_finite(a, "matrix exponential argument")?;
    cfg.validate()?;
    let mut out = Matrix::zeros(n, n);
    if n == 0 {
        return Ok(out);
    }
    WORKSPACE.with(|ws| expm_into(a.as_slice(), n, cfg, out.as_mut_slice(), &mut ws.borrow_mut()))?;
    check_finite(&out, "matrix exponential result")?;
    Ok(out)
}

thread_local! {
    static WORKSPACE: RefCell<Workspace> = RefCell::new(Workspace::default());
}

#[derive(Default)]
struct Workspace {
    x: Vec<f64>,
    pows: Vec<f64>,
    even: Vec<f64>,
    odd: Vec<f64>,
    num: Vec<f64>,
    den: Vec<f64>,
    tmp: Vec<f64>,
    coef_num: Vec<f64>,
    coef_den: Vec<f64>,
    coef_degrees: Option<(usize, usize)>,
    perm: Vec<usize>,
}

fn resize(v: &mut Vec<f64>, len: usize) {
    v.clear();
    v.resize(len, 0.0);
}

fn matmul_fixed<const N: usize>(a: &[f64], b: &[f64], out: &mut [f64]) {
    let a = &a[..N * N];
    let b = &b[..N * N];
    for (j, oc) in out[..N * N].chunks_exact_mut(N).enumerate() {
        let mut col = [0.0f64; N];
        for k in 0..N {
            let bkj = b[j * N + k];
            for i in 0..N {
                col[i] += a[k * N + i] * bkj;
            }
        }
        oc.copy_from_slice(&col);
    }
}

/// Column-major `out = a * b` for `n x n` matrices.
pub(crate) fn matmul(a: &[f64], b: &[f64], out: &mut [f64], n: usize) {
    match n {
        1 => out[0] = a[0] * b[0],
        2 => matmul_fixed::<2>(a, b, out),
        3 => matmul_fixed::<3>(a, b, out),
        4 => matmul_fixed::<4>(a, b, out),
        5 => matmul_fixed::<5>(a, b, out),
        6 => matmul_fixed::<6>(a, b, out),
        7 => matmul_fixed::<7>(a, b, out),
        8 => matmul_fixed::<8>(a, b, out),
        9 => matmul_fixed::<9>(a, b, out),
        10 => matmul_fixed::<10>(a, b, out),
        11 => matmul_fixed::<11>(a, b, out),
        12 => matmul_fixed::<12>(a, b, out),
        _ => {
            let a = nalgebra::DMatrixView::from_slice(a, n, n);
            let b = nalgebra::DMatrixView::from_slice(b, n, n);
            let mut o = nalgebra::DMatrixViewMut::from_slice(out, n, n);
            o.gemm(1.0, &a, &b, 0.0);
        }
    }
}

/// Overwrites `rhs` (n x n, column-major) with `m^-1 rhs`; `m` is destroyed.
/// Returns false when a pivot vanishes.
fn lu_solve(m: &mut [f64], rhs: &mut [f64], n: usize, perm: &mut Vec<usize>) -> bool {
    perm.clear();
    perm.extend(0..n);
    for k in 0..n {
        let mut piv = k;
        let mut best = m[k * n + k].abs();
        for i in k + 1..n {
            let v = m[k * n + i].abs();
            if v > best {
                best = v;
                piv = i;
            }
        }
        if best == 0.0 || !best.is_finite() {
            return false;
        }
        if piv != k {
            for c in 0..n {
                m.swap(c * n + k, c * n + piv);
                rhs.swap(c * n + k, c * n + piv);
            }
            perm.swap(k, piv);
        }
        let inv = 1.0 / m[k * n + k];
        for i in k + 1..n {
            let l = m[k * n + i] * inv;
            m[k * n + i] = l;
            if l != 0.0 {
                for c in k + 1..n {
                    m[c * n + i] -= l * m[c * n + k];
                }
                for c in 0..n {
                    rhs[c * n + i] -= l * rhs[c * n + k];
                }
            }
        }
    }
    for c in 0..n {
        let col = &mut rhs[c * n..(c + 1) * n];
        for k in (0..n).rev() {
            let v = col[k] / m[k * n + k];
            col[k] = v;
            for i in 0..k {
                col[i] -= m[k * n + i] * v;
            }
        }
    }
    true
}

fn fill_coefficients(c: &mut Vec<f64>, p: usize, q: usize) {
    c.clear();
    c.push(1.0);
    for j in 1..=p {
        let prev = c[j - 1];
        c.push(prev * (p + 1 - j) as f64 / (j as f64 * (p + q + 1 - j) as f64));
    }
}

/// Core of [`pade_expm`] on column-major slices; writes `e^A` into `out`.
///
/// Each polynomial is split into even and odd parts, `P(X) = E(X^2) + X O(X^2)`,
/// so only even powers of `X` are formed.
fn expm_into(a: &[f64], n: usize, cfg: &PadeConfig, out: &mut [f64], ws: &mut Workspace) -> Result<()> {
    let nn = n * n;
    let norm = a
        .chunks_exact(n)
        .map(|c| c.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let k = cfg.squarings(norm);
    let scale = 0.5f64.powi(k as i32);

    let Workspace { x, pows, even, odd, num, den, tmp, coef_num, coef_den, coef_degrees, perm } = ws;
    x.clear();
    x.extend(a.iter().map(|v| v * scale));
    if *coef_degrees != Some((cfg.p, cfg.q)) {
        fill_coefficients(coef_num, cfg.p, cfg.q);
        fill_coefficients(coef_den, cfg.q, cfg.p);
        *coef_degrees = Some((cfg.p, cfg.q));
    }

    // pows holds I, X^2, X^4, ... back to back.
    let top = cfg.p.max(cfg.q);
    let count = top / 2 + 1;
    resize(pows, count * nn);
    for i in 0..n {
        pows[i * n + i] = 1.0;
    }
    if count > 1 {
        matmul(x, x, &mut pows[nn..2 * nn], n);
        for j in 2..count {
            let (done, next) = pows.split_at_mut(j * nn);
            matmul(&done[(j - 1) * nn..], &done[nn..2 * nn], &mut next[..nn], n);
        }
    }

    let combine = |c: &[f64], even: &mut Vec<f64>, odd: &mut Vec<f64>| {
        resize(even, nn);
        resize(odd, nn);
        for (j, &cj) in c.iter().enumerate() {
            let target = if j % 2 == 0 { &mut *even } else { &mut *odd };
            let src = &pows[(j / 2) * nn..(j / 2 + 1) * nn];
            for (t, s) in target.iter_mut().zip(src) {
                *t += cj * s;
            }
        }
    };

    resize(tmp, nn);
    resize(num, nn);
    resize(den, nn);
    combine(coef_num, even, odd);
    matmul(x, odd, tmp, n);
    if cfg.p == cfg.q {
        for i in 0..nn {
            num[i] = even[i] + tmp[i];
            den[i] = even[i] - tmp[i];
        }
    } else {
        for i in 0..nn {
            num[i] = even[i] + tmp[i];
        }
        combine(coef_den, even, odd);
        matmul(x, odd, tmp, n);
        for i in 0..nn {
            den[i] = even[i] - tmp[i];
        }
    }

    if !lu_solve(den, num, n, perm) || !num.iter().all(|v| v.is_finite()) {
        return Err(Error::PadeDenominatorSingular { p: cfg.p, q: cfg.q });
    }
    for _ in 0..k {
        matmul(num, num, tmp, n);
        std::mem::swap(num, tmp);
    }
    out.copy_from_slice(num);
    Ok(())
}
