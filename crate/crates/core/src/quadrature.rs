//! Adaptive Gauss–Kronrod (10/21) and Gauss–Legendre rules.

use crate::error::{Error, Result};
use crate::linalg::tridiagonal_eigen;

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_060,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_208_814_876,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];

/// Gauss weights for the odd-indexed Kronrod nodes `XGK[1], XGK[3], …, XGK[9]`.
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

const MAX_INTERVALS: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

fn kronrod21<E>(f: &mut impl FnMut(f64) -> std::result::Result<f64, E>, lo: f64, hi: f64) -> std::result::Result<Segment, E> {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center)?;
    let mut kronrod = WGK[10] * fc;
    let mut gauss = 0.0;
    for j in 0..10 {
        let dx = half * XGK[j];
        let pair = f(center - dx)? + f(center + dx)?;
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Ok(Segment { lo, hi, value: kronrod * half, error: ((kronrod - gauss) * half).abs() })
}

/// Oriented integral `∫_lo^hi f` (negated when `hi < lo`), bisecting the
/// segment with the largest error estimate until the summed estimate is at
/// most `max(abs_tol, rel_tol·|I|)`.
pub fn integrate<E>(
    mut f: impl FnMut(f64) -> std::result::Result<f64, E>,
    lo: f64,
    hi: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> std::result::Result<Integral, E>
where
    E: From<Error>,
{
    if lo == hi {
        return Ok(Integral { value: 0.0, error: 0.0, evaluations: 0 });
    }
    let (a, b, sign) = if lo < hi { (lo, hi, 1.0) } else { (hi, lo, -1.0) };
    let mut segments = vec![kronrod21(&mut f, a, b)?];
    let mut evaluations = 21;
    loop {
        let value: f64 = segments.iter().map(|s| s.value).sum();
        let error: f64 = segments.iter().map(|s| s.error).sum();
        if error <= abs_tol.max(rel_tol * value.abs()) {
            return Ok(Integral { value: sign * value, error, evaluations });
        }
        if segments.len() >= MAX_INTERVALS {
            return Err(Error::QuadratureNotConverged { error, evaluations }.into());
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .expect("at least one segment");
        let seg = segments.swap_remove(worst);
        let mid = 0.5 * (seg.lo + seg.hi);
        if !(mid > seg.lo && mid < seg.hi) {
            return Err(Error::QuadratureNotConverged { error, evaluations }.into());
        }
        segments.push(kronrod21(&mut f, seg.lo, mid)?);
        segments.push(kronrod21(&mut f, mid, seg.hi)?);
        evaluations += 42;
    }
}

/// `order`-point Gauss–Legendre nodes and weights on `[lo, hi]`, from the
/// eigen-decomposition of the Legendre Jacobi matrix.
pub fn gauss_legendre(order: usize, lo: f64, hi: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if order == 0 {
        return Err(Error::InvalidArgument("Gauss-Legendre order must be positive".into()));
    }
    let diag = vec![0.0; order];
    let offdiag: Vec<f64> = (1..order)
        .map(|k| {
            let k = k as f64;
            k / (4.0 * k * k - 1.0).sqrt()
        })
        .collect();
    let (nodes, first) = tridiagonal_eigen(&diag, &offdiag)?;
    let half = 0.5 * (hi - lo);
    let center = 0.5 * (hi + lo);
    Ok((
        nodes.iter().map(|t| center + half * t).collect(),
        first.iter().map(|z| 2.0 * z * z * half).collect(),
    ))
}
