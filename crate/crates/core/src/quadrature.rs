//! Fixed and adaptive Gauss rules.

const GL5_X: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683_1,
    0.0,
    0.538_469_310_105_683_1,
    0.906_179_845_938_664,
];
const GL5_W: [f64; 5] = [
    0.236_926_885_056_189_1,
    0.478_628_670_499_366_5,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
];

/// Nodes of the 5-point Gauss-Legendre rule mapped to `[a, b]`.
pub fn gl5_nodes(a: f64, b: f64) -> [f64; 5] {
    let c = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    let mut out = [0.0; 5];
    for (o, x) in out.iter_mut().zip(GL5_X) {
        *o = c + r * x;
    }
    out
}

/// Weights of the 5-point rule on `[a, b]`.
pub fn gl5_weights(a: f64, b: f64) -> [f64; 5] {
    let r = 0.5 * (b - a);
    let mut out = [0.0; 5];
    for (o, w) in out.iter_mut().zip(GL5_W) {
        *o = r * w;
    }
    out
}

pub fn gl5<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64) -> f64 {
    let xs = gl5_nodes(a, b);
    let ws = gl5_weights(a, b);
    xs.iter().zip(ws).map(|(&x, w)| w * f(x)).sum()
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let dx = r * XGK[i];
        let s = f(c - dx) + f(c + dx);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * r, (k - g).abs() * r)
}

/// Adaptive Gauss-Kronrod 7/15 with bisection.
pub fn adaptive<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let mut total = 0.0;
    let mut stack = vec![(a, b, 0u32)];
    while let Some((lo, hi, depth)) = stack.pop() {
        let (val, err) = gk15(&mut f, lo, hi);
        let tol = abs_tol.max(rel_tol * val.abs()) * ((hi - lo) / (b - a)).abs().sqrt().max(1e-3);
        if err <= tol || depth >= 40 {
            total += val;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, depth + 1));
            stack.push((mid, hi, depth + 1));
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl5_is_exact_for_degree_nine() {
        let v = gl5(|x| x.powi(9) + 3.0 * x.powi(8), 0.0, 2.0);
        let exact = 2f64.powi(10) / 10.0 + 3.0 * 2f64.powi(9) / 9.0;
        assert!((v - exact).abs() < 1e-10 * exact);
    }

    #[test]
    fn adaptive_handles_peaked_integrand() {
        let v = adaptive(|x| 1.0 / (1e-4 + x * x), -1.0, 1.0, 1e-12, 1e-12);
        let exact = 2.0 * (1.0 / 1e-2) * (1.0f64 / 1e-2).atan();
        assert!((v - exact).abs() < 1e-8 * exact, "{v} vs {exact}");
    }
}
