//! Quadrature for complex-valued integrands on finite intervals.

use num_complex::Complex64 as C64;
use std::collections::BinaryHeap;
use std::cmp::Ordering;

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Nodes and weights of the n-point Gauss–Legendre rule on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// One G7K15 panel: (Kronrod value, error estimate).
///
/// The estimate is the QUADPACK scaling of |K − G| against the mean absolute
/// deviation of the integrand.
pub fn gk15<F: FnMut(f64) -> C64>(f: &mut F, a: f64, b: f64) -> (C64, f64) {
    let c = 0.5 * (a + b);
    let hl = 0.5 * (b - a);
    let mut fv = [C64::new(0.0, 0.0); 15];
    fv[7] = f(c);
    for j in 0..7 {
        let d = hl * XGK[j];
        fv[j] = f(c - d);
        fv[14 - j] = f(c + d);
    }
    let mut k = fv[7] * WGK[7];
    let mut g = fv[7] * WG[3];
    for j in 0..7 {
        let s = fv[j] + fv[14 - j];
        k += s * WGK[j];
        if j % 2 == 1 {
            g += s * WG[j / 2];
        }
    }
    let mean = k * 0.5;
    let mut asc = (fv[7] - mean).norm() * WGK[7];
    for j in 0..7 {
        asc += ((fv[j] - mean).norm() + (fv[14 - j] - mean).norm()) * WGK[j];
    }
    let asc = asc * hl.abs();
    let mut err = ((k - g) * hl).norm();
    if asc != 0.0 && err != 0.0 {
        err = asc * (200.0 * err / asc).powf(1.5).min(1.0);
    }
    (k * hl, err)
}

#[derive(Debug, Clone, Copy)]
pub struct Tol {
    pub abs: f64,
    pub rel: f64,
    pub max_panels: usize,
}

impl Tol {
    pub fn new(abs: f64, rel: f64) -> Self {
        Self { abs, rel, max_panels: 4000 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: C64,
    pub err: f64,
    pub converged: bool,
}

struct Panel {
    a: f64,
    b: f64,
    val: C64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.total_cmp(&o.err)
    }
}

/// Globally adaptive G7K15 on [a, b], optionally pre-split at `breaks`.
pub fn integrate_with_breaks<F: FnMut(f64) -> C64>(
    mut f: F,
    breaks: &[f64],
    tol: Tol,
) -> QuadResult {
    let mut heap = BinaryHeap::new();
    let mut total = C64::new(0.0, 0.0);
    let mut err = 0.0;
    for w in breaks.windows(2) {
        let (v, e) = gk15(&mut f, w[0], w[1]);
        total += v;
        err += e;
        heap.push(Panel { a: w[0], b: w[1], val: v, err: e });
    }
    while err > tol.abs.max(tol.rel * total.norm()) && heap.len() < tol.max_panels {
        let Some(p) = heap.pop() else { break };
        let m = 0.5 * (p.a + p.b);
        if !(m > p.a && m < p.b) {
            heap.push(p);
            break;
        }
        let (v1, e1) = gk15(&mut f, p.a, m);
        let (v2, e2) = gk15(&mut f, m, p.b);
        total += v1 + v2 - p.val;
        err += e1 + e2 - p.err;
        heap.push(Panel { a: p.a, b: m, val: v1, err: e1 });
        heap.push(Panel { a: m, b: p.b, val: v2, err: e2 });
    }
    // Re-sum to shed accumulated update rounding.
    let (value, err) = heap
        .iter()
        .fold((C64::new(0.0, 0.0), 0.0), |(v, e), p| (v + p.val, e + p.err));
    QuadResult { value, err, converged: err <= tol.abs.max(tol.rel * value.norm()) }
}

pub fn integrate<F: FnMut(f64) -> C64>(f: F, a: f64, b: f64, tol: Tol) -> QuadResult {
    integrate_with_breaks(f, &[a, b], tol)
}

/// Fixed composite Gauss–Legendre with `panels` equal panels.
pub fn composite_gl<F: FnMut(f64) -> C64>(
    mut f: F,
    a: f64,
    b: f64,
    panels: usize,
    rule: &(Vec<f64>, Vec<f64>),
) -> C64 {
    let h = (b - a) / panels as f64;
    let mut s = C64::new(0.0, 0.0);
    for p in 0..panels {
        let c = a + (p as f64 + 0.5) * h;
        for (x, w) in rule.0.iter().zip(&rule.1) {
            s += f(c + 0.5 * h * x) * *w;
        }
    }
    s * (0.5 * h)
}
