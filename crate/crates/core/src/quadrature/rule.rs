//! 21-point Gauss–Kronrod rule with embedded 10-point Gauss rule.

pub(crate) const XGK: [f64; 11] = [
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

pub(crate) const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_626_368_565,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Gauss weights for XGK[1], XGK[3], ..., XGK[9].
pub(crate) const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Abscissae on [-1, 1] in a fixed order: the 10 negative nodes, the centre, the 10 positive nodes.
pub(crate) fn nodes() -> [f64; 21] {
    let mut x = [0.0; 21];
    for i in 0..10 {
        x[i] = -XGK[i];
        x[20 - i] = XGK[i];
    }
    x
}

/// Kronrod and Gauss weights aligned with [`nodes`].
pub(crate) fn weights() -> ([f64; 21], [f64; 21]) {
    let mut k = [0.0; 21];
    let mut g = [0.0; 21];
    for i in 0..11 {
        k[i] = WGK[i];
        k[20 - i] = WGK[i];
    }
    for j in 0..5 {
        let i = 2 * j + 1;
        g[i] = WG[j];
        g[20 - i] = WG[j];
    }
    (k, g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exactness() {
        let x = nodes();
        let (wk, wg) = weights();
        for deg in 0..=31 {
            let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            let k: f64 = (0..21).map(|i| wk[i] * x[i].powi(deg)).sum();
            assert!((k - exact).abs() < 1e-15, "kronrod deg {deg}");
            if deg <= 19 {
                let g: f64 = (0..21).map(|i| wg[i] * x[i].powi(deg)).sum();
                assert!((g - exact).abs() < 1e-15, "gauss deg {deg}");
            }
        }
    }
}
