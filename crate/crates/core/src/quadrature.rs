//! Globally adaptive Gauss-Kronrod (7, 15) quadrature.

use crate::error::{Error, Result};

/// Intervals deeper than this many bisections count as a failure to converge.
pub const MAX_DEPTH: usize = 48;
/// Cap on the number of live subintervals.
pub const MAX_INTERVALS: usize = 4000;

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
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5 and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Clone, Copy, Debug)]
struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    depth: usize,
}

fn rule<F>(f: &mut F, a: f64, b: f64, depth: usize) -> Result<Piece>
where
    F: FnMut(f64) -> Result<f64>,
{
    let c = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(c)?;
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for k in 0..7 {
        let x = half * XGK[k];
        let s = f(c - x)? + f(c + x)?;
        kronrod += WGK[k] * s;
        if k % 2 == 1 {
            gauss += WG[k / 2] * s;
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).abs();
    if !value.is_finite() {
        return Err(Error::NonFinite("quadrature integrand"));
    }
    Ok(Piece { a, b, value, error, depth })
}

/// Integral of a fallible integrand over [a, b] to absolute tolerance `tol`.
/// Nested integrals pass their inner failures straight through.
pub fn integrate<F>(mut f: F, a: f64, b: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if a == b {
        return Ok(0.0);
    }
    let mut pieces = vec![rule(&mut f, a, b, 0)?];
    loop {
        let value: f64 = pieces.iter().map(|p| p.value).sum();
        let error: f64 = pieces.iter().map(|p| p.error).sum();
        // round-off floor so that tiny tolerances on large integrals terminate
        if error <= tol.max(1e-14 * value.abs()) {
            return Ok(value);
        }
        let (worst, _) = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("non-empty");
        let p = pieces.swap_remove(worst);
        if p.depth >= MAX_DEPTH || pieces.len() + 2 > MAX_INTERVALS {
            return Err(Error::Quadrature { depth: p.depth, estimate: error });
        }
        let mid = 0.5 * (p.a + p.b);
        pieces.push(rule(&mut f, p.a, mid, p.depth + 1)?);
        pieces.push(rule(&mut f, mid, p.b, p.depth + 1)?);
    }
}
