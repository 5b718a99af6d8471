//! Globally adaptive Gauss–Kronrod quadrature.
//!
//! A 15-point Gauss–Kronrod rule drives a worst-interval-first bisection
//! scheme. Callers may seed the initial partition with breakpoints so sharp
//! features (Lorentzian ridges, spectral cutoffs) sit on panel boundaries.

use crate::{Error, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

// 15-point Kronrod abscissae on [-1, 1] (positive half) and weights, with the
// embedded 7-point Gauss weights. Standard QUADPACK values.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// One Gauss–Kronrod evaluation of `f` over `[a, b]`.
///
/// Returns the Kronrod estimate and a scaled error estimate following the
/// QUADPACK heuristic.
pub fn qk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);

    let mut res_gauss = f_center * WG[3];
    let mut res_kronrod = f_center * WGK[7];
    let mut res_abs = res_kronrod.abs();
    let mut fv = [0.0f64; 15];
    fv[7] = f_center;

    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv[j] = f1;
        fv[14 - j] = f2;
        let sum = f1 + f2;
        if j % 2 != 0 {
            res_gauss += WG[j / 2] * sum;
        }
        res_kronrod += WGK[j] * sum;
        res_abs += WGK[j] * (f1.abs() + f2.abs());
    }

    let mean = res_kronrod * 0.5;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv[j] - mean).abs() + (fv[14 - j] - mean).abs());
    }

    let value = res_kronrod * half;
    res_abs *= half.abs();
    res_asc *= half.abs();

    let mut err = ((res_kronrod - res_gauss) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (value, err)
}

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_panels: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            rel_tol: 1e-6,
            abs_tol: 0.0,
            max_panels: 4000,
        }
    }
}

impl QuadOptions {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        QuadOptions {
            rel_tol,
            ..Default::default()
        }
    }
}

/// Converged integral with its error estimate and the panel count spent.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub value: f64,
    pub abs_error: f64,
    pub panels: usize,
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .partial_cmp(&other.error)
            .unwrap_or(Ordering::Equal)
    }
}

/// Integrate `f` over `[a, b]` to the requested tolerance.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, opts: QuadOptions) -> Result<Quadrature> {
    integrate_segmented(f, &[a, b], opts)
}

/// Integrate over `[points[0], points[last]]` with the interior points used
/// as the initial panel boundaries. Interior points outside the range or out
/// of order are ignored; duplicates collapse.
pub fn integrate_segmented<F: Fn(f64) -> f64>(
    f: F,
    points: &[f64],
    opts: QuadOptions,
) -> Result<Quadrature> {
    assert!(points.len() >= 2, "need at least the two endpoints");
    let a = points[0];
    let b = *points.last().unwrap();
    if a == b {
        return Ok(Quadrature {
            value: 0.0,
            abs_error: 0.0,
            panels: 0,
        });
    }

    let mut edges: Vec<f64> = points.to_vec();
    edges.sort_by(|x, y| x.partial_cmp(y).unwrap());
    edges.retain(|x| *x >= a.min(b) && *x <= a.max(b));
    edges.dedup();

    let mut heap: BinaryHeap<Panel> = BinaryHeap::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    let mut panels = 0usize;
    for w in edges.windows(2) {
        let (v, e) = qk15(&f, w[0], w[1]);
        total += v;
        total_err += e;
        panels += 1;
        heap.push(Panel {
            a: w[0],
            b: w[1],
            value: v,
            error: e,
        });
    }

    loop {
        let tol = opts.abs_tol.max(opts.rel_tol * total.abs());
        if total_err <= tol || total_err <= opts.abs_tol {
            return Ok(Quadrature {
                value: total,
                abs_error: total_err,
                panels,
            });
        }
        if panels >= opts.max_panels {
            let achieved = if total != 0.0 {
                total_err / total.abs()
            } else {
                total_err
            };
            return Err(Error::QuadratureNonConvergent {
                requested: opts.rel_tol,
                achieved,
                value: total,
            });
        }
        let worst = heap.pop().expect("heap cannot be empty while refining");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval at floating-point resolution; accept its estimate.
            if heap.is_empty() {
                return Ok(Quadrature {
                    value: total,
                    abs_error: total_err,
                    panels,
                });
            }
            continue;
        }
        let (v1, e1) = qk15(&f, worst.a, mid);
        let (v2, e2) = qk15(&f, mid, worst.b);
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        panels += 1;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
    }
}

/// Build a sorted edge list for [`integrate_segmented`]: `[a, b]` plus any of
/// `interior` that fall strictly inside.
pub fn edges_with_breakpoints(a: f64, b: f64, interior: &[f64]) -> Vec<f64> {
    let mut edges = vec![a, b];
    for &x in interior {
        if x.is_finite() && x > a && x < b {
            edges.push(x);
        }
    }
    edges.sort_by(|x, y| x.partial_cmp(y).unwrap());
    edges.dedup();
    edges
}
