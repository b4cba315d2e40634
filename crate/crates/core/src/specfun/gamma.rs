//! Gamma and digamma functions on the real line.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn is_pole(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// Lanczos sum for `x >= 1/2`.
fn lanczos(x: f64) -> f64 {
    let x = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (k, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (x + k as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
}

/// Gamma function, with reflection below 1/2.
pub fn gamma(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::InvalidArgument(format!("gamma of {x}")));
    }
    if is_pole(x) {
        return Err(Error::Pole(x));
    }
    if x < 0.5 {
        Ok(PI / ((PI * x).sin() * lanczos(1.0 - x)))
    } else {
        Ok(lanczos(x))
    }
}

/// `1/Gamma(x)`, which is entire: zero at the poles of Gamma.
pub fn rgamma(x: f64) -> f64 {
    if is_pole(x) {
        return 0.0;
    }
    if x < 0.5 {
        (PI * x).sin() * lanczos(1.0 - x) / PI
    } else {
        1.0 / lanczos(x)
    }
}

/// Digamma function `psi = Gamma'/Gamma`.
pub fn digamma(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::InvalidArgument(format!("digamma of {x}")));
    }
    if is_pole(x) {
        return Err(Error::Pole(x));
    }
    if x < 0.5 {
        return Ok(digamma(1.0 - x)? - PI / (PI * x).tan());
    }
    let mut x = x;
    let mut acc = 0.0;
    while x < 15.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    let tail = inv2
        * (1.0 / 12.0
            - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 / 132.0))));
    Ok(acc + x.ln() - 0.5 / x - tail)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integers_and_half_integers() {
        assert!((gamma(5.0).unwrap() - 24.0).abs() < 1e-12);
        assert!((gamma(0.5).unwrap() - PI.sqrt()).abs() < 1e-14);
        assert!((gamma(-0.5).unwrap() + 2.0 * PI.sqrt()).abs() < 1e-13);
        assert!((gamma(1.5).unwrap() - PI.sqrt() / 2.0).abs() < 1e-14);
    }

    #[test]
    fn poles() {
        assert!(matches!(gamma(0.0), Err(Error::Pole(_))));
        assert!(matches!(gamma(-3.0), Err(Error::Pole(_))));
        assert_eq!(rgamma(-2.0), 0.0);
        assert!(matches!(digamma(-1.0), Err(Error::Pole(_))));
    }

    #[test]
    fn digamma_values() {
        let euler = 0.577_215_664_901_532_9;
        assert!((digamma(1.0).unwrap() + euler).abs() < 1e-14);
        assert!((digamma(0.5).unwrap() + euler + 2.0 * 2f64.ln()).abs() < 1e-14);
        // psi(x + 1) = psi(x) + 1/x, also across the reflection branch
        for &x in &[-2.7, -0.25, 0.3, 1.7, 9.2] {
            let lhs = digamma(x + 1.0).unwrap();
            let rhs = digamma(x).unwrap() + 1.0 / x;
            assert!((lhs - rhs).abs() < 1e-12 * lhs.abs().max(1.0), "x = {x}");
        }
    }
}
