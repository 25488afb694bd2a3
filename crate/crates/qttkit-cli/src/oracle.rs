//! Adaptive Gauss–Kronrod reference quadrature for the benchmark
//! integrands; generates the oracle file shipped in `data/`.

/// 7-point Gauss / 15-point Kronrod nodes and weights on [-1, 1].
const KRONROD_NODES: [f64; 8] = [
    0.0,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329,
];
const KRONROD_WEIGHTS: [f64; 8] = [
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970,
];
const GAUSS_WEIGHTS: [f64; 4] = [
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082,
];

fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let f0 = f(c);
    let mut kron = KRONROD_WEIGHTS[0] * f0;
    let mut gauss = GAUSS_WEIGHTS[0] * f0;
    for i in 1..8 {
        let x = h * KRONROD_NODES[i];
        let s = f(c - x) + f(c + x);
        kron += KRONROD_WEIGHTS[i] * s;
        if i % 2 == 0 {
            gauss += GAUSS_WEIGHTS[i / 2] * s;
        }
    }
    (kron * h, (kron - gauss).abs() * h)
}

/// Adaptive bisection to an absolute tolerance.
pub fn integrate_adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let mut total = 0.0;
    let mut stack = vec![(a, b, tol, 0usize)];
    while let Some((lo, hi, budget, depth)) = stack.pop() {
        let (value, err) = gk15(f, lo, hi);
        if err <= budget || depth > 50 {
            total += value;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, budget / 2.0, depth + 1));
            stack.push((mid, hi, budget / 2.0, depth + 1));
        }
    }
    total
}

/// The two benchmark reference values at tolerance 1e-12.
pub fn benchmark_oracles() -> Vec<(&'static str, f64, f64, f64)> {
    let f3 = qttkit::quadrature::f3;
    let f4 = qttkit::quadrature::f4;
    // Integrate each smooth piece of the windowed oscillation separately.
    let mut v3 = 0.0;
    for k in 0..32 {
        let lo = 10.0 * k as f64 / 32.0;
        let hi = 10.0 * (k + 1) as f64 / 32.0;
        v3 += integrate_adaptive(&f3, lo, hi, 1e-13 / 32.0);
    }
    let v4 = integrate_adaptive(&f4, 0.0, 1.0, 1e-13);
    vec![("f3", 0.0, 10.0, v3), ("f4", 0.0, 1.0, v4)]
}
