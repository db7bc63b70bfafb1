//! The 7-point Gauss / 15-point Kronrod pair with the QUADPACK error heuristic.

use super::value::QuadValue;

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

#[derive(Clone, Copy, Debug)]
pub(crate) struct RuleOutput<V> {
    pub value: V,
    pub error: f64,
    pub finite: bool,
}

pub(crate) fn qk15<V: QuadValue, F: Fn(f64) -> V>(f: &F, a: f64, b: f64) -> RuleOutput<V> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);
    let mut res_g = f_center * WG[3];
    let mut res_k = f_center * WGK[7];
    let mut res_abs = f_center.magnitude() * WGK[7];
    let mut lower = [V::default(); 7];
    let mut upper = [V::default(); 7];

    for j in 0..7 {
        let abscissa = half * XGK[j];
        let f1 = f(center - abscissa);
        let f2 = f(center + abscissa);
        lower[j] = f1;
        upper[j] = f2;
        let sum = f1 + f2;
        res_k = res_k + sum * WGK[j];
        res_abs += WGK[j] * (f1.magnitude() + f2.magnitude());
        if j % 2 == 1 {
            res_g = res_g + sum * WG[j / 2];
        }
    }

    let mean = res_k * 0.5;
    let mut res_asc = WGK[7] * (f_center - mean).magnitude();
    for j in 0..7 {
        res_asc += WGK[j] * ((lower[j] - mean).magnitude() + (upper[j] - mean).magnitude());
    }

    let scale = half.abs();
    let value = res_k * half;
    res_abs *= scale;
    res_asc *= scale;
    let mut error = ((res_k - res_g) * half).magnitude();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }

    RuleOutput {
        value,
        error,
        finite: value.is_finite_value() && res_abs.is_finite(),
    }
}
