//! Adaptive quadrature and root finding.
//!
//! Finite integrals use globally adaptive 21-point Gauss-Kronrod with the
//! QUADPACK error heuristic. Semi-infinite integrals are summed over panels
//! of doubling width until the panel contributions become negligible.

use alloc::collections::BinaryHeap;
use core::cmp::Ordering;

/// Tolerances shared by every integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Semi-infinite sums stop once a panel adds less than this fraction of
    /// the running estimate.
    pub tail_cutoff_probability: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-8,
            abs_tol: 1e-12,
            max_subdivisions: 2000,
            tail_cutoff_probability: 1e-10,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<(), NumericsError> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0 && self.tail_cutoff_probability > 0.0)
            || self.max_subdivisions == 0
        {
            return Err(NumericsError::InvalidSpec);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub abs_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum NumericsError {
    #[error("quadrature did not converge after {subdivisions} subdivisions (estimate {estimate}, error {abs_error})")]
    NonConvergence {
        subdivisions: usize,
        estimate: f64,
        abs_error: f64,
    },
    #[error("integrand is not finite at x = {at}")]
    NotFinite { at: f64 },
    #[error("invalid interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },
    #[error("semi-infinite integral is not settling (last panel ends at {reached})")]
    Divergent { reached: f64 },
    #[error("no sign change up to r = {reached}")]
    RootBeyondHorizon { reached: f64 },
    #[error("invalid quadrature tolerances")]
    InvalidSpec,
}

// Nodes and weights at their published precision.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the odd-indexed Kronrod nodes.
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn check(x: f64, v: f64) -> Result<f64, NumericsError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(NumericsError::NotFinite { at: x })
    }
}

fn gauss_kronrod<F: FnMut(f64) -> f64>(
    f: &mut F,
    a: f64,
    b: f64,
) -> Result<Segment, NumericsError> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = check(center, f(center))?;
    let mut kronrod = fc * WGK[10];
    let mut gauss = 0.0;
    let mut abs_k = kronrod.abs();
    let mut fv = [(0.0, 0.0); 10];
    for (j, &x) in XGK[..10].iter().enumerate() {
        let dx = half * x;
        let f1 = check(center - dx, f(center - dx))?;
        let f2 = check(center + dx, f(center + dx))?;
        fv[j] = (f1, f2);
        kronrod += WGK[j] * (f1 + f2);
        abs_k += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[10] * (fc - mean).abs();
    for (j, (f1, f2)) in fv.iter().enumerate() {
        asc += WGK[j] * ((f1 - mean).abs() + (f2 - mean).abs());
    }
    let value = kronrod * half;
    let asc = asc * half.abs();
    let abs_k = abs_k * half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    if asc != 0.0 && error != 0.0 {
        error = asc * (200.0 * error / asc).powf_compat(1.5).min(1.0);
    }
    let eps = 50.0 * f64::EPSILON;
    if abs_k > f64::MIN_POSITIVE / eps {
        error = error.max(eps * abs_k);
    }
    Ok(Segment { a, b, value, error })
}

trait PowCompat {
    fn powf_compat(self, e: f64) -> f64;
}

impl PowCompat for f64 {
    #[inline]
    fn powf_compat(self, e: f64) -> f64 {
        libm::pow(self, e)
    }
}

/// `∫_a^b f(x) dx` to `max(rel_tol |I|, abs_tol)`.
pub fn integrate_finite<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<Integral, NumericsError> {
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(NumericsError::InvalidInterval { a, b });
    }
    if a == b {
        return Ok(Integral {
            value: 0.0,
            abs_error: 0.0,
        });
    }
    let first = gauss_kronrod(&mut f, a, b)?;
    let mut value = first.value;
    let mut error = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let mut subdivisions = 1;
    while error > spec.abs_tol.max(spec.rel_tol * value.abs()) {
        if subdivisions >= spec.max_subdivisions {
            return Err(NumericsError::NonConvergence {
                subdivisions,
                estimate: value,
                abs_error: error,
            });
        }
        let worst = heap.pop().expect("heap holds every segment");
        let mid = 0.5 * (worst.a + worst.b);
        if !(worst.a < mid && mid < worst.b) {
            // interval exhausted at machine precision: accept what we have
            heap.push(worst);
            break;
        }
        let left = gauss_kronrod(&mut f, worst.a, mid)?;
        let right = gauss_kronrod(&mut f, mid, worst.b)?;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;
        if subdivisions % 64 == 0 {
            // resum to shed accumulated cancellation error
            value = heap.iter().map(|s| s.value).sum();
            error = heap.iter().map(|s| s.error).sum();
        }
    }
    let value = heap.iter().map(|s| s.value).sum();
    let abs_error = heap.iter().map(|s| s.error).sum();
    Ok(Integral { value, abs_error })
}

const MAX_PANELS: usize = 96;

/// `∫_a^∞ f(x) dx` with a unit initial panel width.
pub fn integrate_semi_infinite<F: FnMut(f64) -> f64>(
    f: F,
    a: f64,
    spec: &QuadratureSpec,
) -> Result<Integral, NumericsError> {
    integrate_semi_infinite_with_scale(f, a, 1.0, spec)
}

/// `∫_a^∞ f(x) dx` summing panels `[a + s(2^k - 1), a + s(2^{k+1} - 1)]`.
///
/// `scale` should be the length over which `f` changes appreciably. The sum
/// stops once two consecutive panels each add less than
/// `tail_cutoff_probability` of the running total (or `abs_tol`).
pub fn integrate_semi_infinite_with_scale<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    scale: f64,
    spec: &QuadratureSpec,
) -> Result<Integral, NumericsError> {
    if !a.is_finite() || !(scale > 0.0 && scale.is_finite()) {
        return Err(NumericsError::InvalidInterval {
            a,
            b: f64::INFINITY,
        });
    }
    spec.validate()?;
    let mut value = 0.0;
    let mut abs_error = 0.0;
    let mut lo = a;
    let mut width = scale;
    let mut quiet = 0;
    for k in 0..MAX_PANELS {
        let hi = lo + width;
        let panel = integrate_finite(&mut f, lo, hi, spec)?;
        value += panel.value;
        abs_error += panel.abs_error;
        let negligible = panel.value.abs() <= spec.tail_cutoff_probability * value.abs()
            || panel.value.abs() <= spec.abs_tol;
        quiet = if negligible { quiet + 1 } else { 0 };
        if quiet >= 2 && k >= 3 {
            return Ok(Integral { value, abs_error });
        }
        lo = hi;
        width *= 2.0;
        if !hi.is_finite() {
            break;
        }
    }
    Err(NumericsError::Divergent { reached: lo })
}

/// `∫_a^b f(x) dx` over panels of doubling width starting at `scale`.
///
/// For long intervals whose integrand is concentrated near `a`, where a
/// single adaptive pass could step over the mass entirely.
pub fn integrate_panels<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    scale: f64,
    spec: &QuadratureSpec,
) -> Result<Integral, NumericsError> {
    if !(a.is_finite() && b.is_finite()) || a > b || !(scale > 0.0 && scale.is_finite()) {
        return Err(NumericsError::InvalidInterval { a, b });
    }
    let mut total = Integral {
        value: 0.0,
        abs_error: 0.0,
    };
    let mut lo = a;
    let mut width = scale;
    while lo < b {
        let hi = (lo + width).min(b);
        let panel = integrate_finite(&mut f, lo, hi, spec)?;
        total.value += panel.value;
        total.abs_error += panel.abs_error;
        lo = hi;
        width *= 2.0;
    }
    Ok(total)
}

/// Smallest `r >= lo` with `g(r) >= 0` for `g` increasing through zero.
///
/// Returns `lo` when `g(lo) >= 0`. Otherwise expands `[lo, hi]` by doubling
/// the distance from `lo` until the sign changes, then bisects to a bracket
/// narrower than `1e-10 max(1, r)`.
pub fn find_root_decreasing<G: FnMut(f64) -> f64>(
    mut g: G,
    lo: f64,
    hi_hint: f64,
) -> Result<f64, NumericsError> {
    let g_lo = g(lo);
    if g_lo.is_nan() {
        return Err(NumericsError::NotFinite { at: lo });
    }
    if g_lo >= 0.0 {
        return Ok(lo);
    }
    let mut a = lo;
    let mut span = if hi_hint > lo {
        hi_hint - lo
    } else {
        lo.abs().max(1.0)
    };
    let mut b = lo + span;
    let mut expansions = 0;
    loop {
        let gb = g(b);
        if gb.is_nan() {
            return Err(NumericsError::NotFinite { at: b });
        }
        if gb >= 0.0 {
            break;
        }
        a = b;
        span *= 2.0;
        b = lo + span;
        expansions += 1;
        if expansions > 200 || !b.is_finite() {
            return Err(NumericsError::RootBeyondHorizon { reached: a });
        }
    }
    while b - a > 1e-10 * b.abs().max(1.0) {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let gm = g(m);
        if gm.is_nan() {
            return Err(NumericsError::NotFinite { at: m });
        }
        if gm >= 0.0 {
            b = m;
        } else {
            a = m;
        }
    }
    Ok(0.5 * (a + b))
}
