//! Globally adaptive Gauss-Kronrod (7/15) quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Maximum number of live subintervals before giving up.
pub const SUBDIVISION_BUDGET: usize = 1 << 20;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
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

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    // Largest error first; ties broken by position for reproducibility.
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn gauss_kronrod<F>(f: &F, a: f64, b: f64) -> Result<Segment>
where
    F: Fn(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let sum = f(center - dx)? + f(center + dx)?;
        kronrod += WGK[j] * sum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * sum;
        }
    }
    let error = ((kronrod - gauss) * half).abs();
    Ok(Segment {
        a,
        b,
        value: kronrod * half,
        error: if error.is_nan() { f64::INFINITY } else { error },
    })
}

/// Integrate `f` over `[a, b]` to an absolute error estimate below `tol`.
///
/// `breakpoints` seeds the initial partition (points outside `(a, b)` are
/// ignored); kinks of piecewise integrands belong there.
pub fn integrate<F>(f: F, a: f64, b: f64, tol: f64, breakpoints: &[f64]) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    if a == b {
        return Ok((0.0, 0.0));
    }
    let mut edges = vec![a];
    edges.extend(breakpoints.iter().copied().filter(|&x| x > a && x < b));
    edges.push(b);

    let mut heap = BinaryHeap::with_capacity(edges.len());
    for w in edges.windows(2) {
        heap.push(gauss_kronrod(&f, w[0], w[1])?);
    }

    let totals = |heap: &BinaryHeap<Segment>| {
        let mut segs: Vec<&Segment> = heap.iter().collect();
        segs.sort_by(|x, y| x.a.total_cmp(&y.a));
        segs.iter().fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error))
    };

    let (mut value, mut error) = totals(&heap);
    while !(error < tol) {
        if heap.len() >= SUBDIVISION_BUDGET {
            return Err(Error::QuadratureNonConvergence {
                estimate: value,
                error_bound: error,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval can no longer be split in floating point.
            let (v, e) = totals(&heap);
            return Err(Error::QuadratureNonConvergence {
                estimate: v + worst.value,
                error_bound: e + worst.error,
            });
        }
        let left = gauss_kronrod(&f, worst.a, mid)?;
        let right = gauss_kronrod(&f, mid, worst.b)?;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        if error < tol || !error.is_finite() {
            // Resum to shed drift accumulated by the incremental updates.
            (value, error) = totals(&heap);
        }
    }
    let (value, error) = totals(&heap);
    if !(value.is_finite() && error.is_finite()) {
        return Err(Error::QuadratureNonConvergence {
            estimate: value,
            error_bound: error,
        });
    }
    Ok((value, error))
}
