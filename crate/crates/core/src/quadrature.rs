//! Globally adaptive Gauss–Kronrod (7/15) integration of vector-valued
//! integrands on a finite interval.

use alloc::collections::BinaryHeap;
use core::cmp::Ordering;

use crate::{Error, Result};

// Nodes and weights as tabulated in QUADPACK.
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

#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Stopping rule: stop once the summed error estimate is below
/// `max(abs_tol, rel_tol * |I|)` or fail after `max_evals` integrand calls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_evals: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<const N: usize> {
    pub value: [f64; N],
    pub error: f64,
    pub evaluations: usize,
}

struct Panel<const N: usize> {
    a: f64,
    b: f64,
    value: [f64; N],
    error: f64,
}

impl<const N: usize> PartialEq for Panel<N> {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}

impl<const N: usize> Eq for Panel<N> {}

impl<const N: usize> PartialOrd for Panel<N> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<const N: usize> Ord for Panel<N> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<const N: usize, F>(f: &mut F, a: f64, b: f64) -> Panel<N>
where
    F: FnMut(f64) -> [f64; N],
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mid = f(center);
    let mut kron = [0.0; N];
    let mut gauss = [0.0; N];
    for i in 0..N {
        kron[i] = WGK[7] * mid[i];
        gauss[i] = WG[3] * mid[i];
    }
    for (j, &node) in XGK[..7].iter().enumerate() {
        let dx = half * node;
        let lo = f(center - dx);
        let hi = f(center + dx);
        for i in 0..N {
            let pair = lo[i] + hi[i];
            kron[i] += WGK[j] * pair;
            if j % 2 == 1 {
                gauss[i] += WG[j / 2] * pair;
            }
        }
    }
    let mut err2 = 0.0;
    for i in 0..N {
        kron[i] *= half;
        gauss[i] *= half;
        let d = kron[i] - gauss[i];
        err2 += d * d;
    }
    Panel {
        a,
        b,
        value: kron,
        error: libm::sqrt(err2),
    }
}

fn norm<const N: usize>(v: &[f64; N]) -> f64 {
    libm::sqrt(v.iter().map(|x| x * x).sum::<f64>())
}

/// Integrate `f` over `[a, b]`, starting from `initial_panels` equal panels.
pub fn integrate<const N: usize, F>(
    mut f: F,
    a: f64,
    b: f64,
    initial_panels: usize,
    tol: Tolerance,
) -> Result<Estimate<N>>
where
    F: FnMut(f64) -> [f64; N],
{
    let panels = initial_panels.max(1);
    let width = (b - a) / panels as f64;
    let mut heap: BinaryHeap<Panel<N>> = BinaryHeap::with_capacity(panels * 4);
    let mut evaluations = 0;
    for k in 0..panels {
        let lo = a + width * k as f64;
        let hi = if k + 1 == panels { b } else { lo + width };
        heap.push(kronrod(&mut f, lo, hi));
        evaluations += 15;
    }
    loop {
        let mut total = [0.0; N];
        let mut error = 0.0;
        for p in heap.iter() {
            for (t, v) in total.iter_mut().zip(p.value.iter()) {
                *t += v;
            }
            error += p.error;
        }
        let target = tol.abs_tol.max(tol.rel_tol * norm(&total));
        if error <= target {
            return Ok(Estimate {
                value: total,
                error,
                evaluations,
            });
        }
        if evaluations + 30 > tol.max_evals {
            return Err(Error::QuadratureBudget {
                achieved: error,
                requested: target,
                evaluations,
            });
        }
        let worst = heap.pop().expect("at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval exhausted at double precision; keep it and report failure.
            return Err(Error::QuadratureBudget {
                achieved: error,
                requested: target,
                evaluations,
            });
        }
        heap.push(kronrod(&mut f, worst.a, mid));
        heap.push(kronrod(&mut f, mid, worst.b));
        evaluations += 30;
    }
}
