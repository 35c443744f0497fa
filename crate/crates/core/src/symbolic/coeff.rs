//! Exact Gaussian-rational coefficients.

use alloc::format;
use alloc::string::String;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Coeff = Complex<BigRational>;

pub fn rational(numer: i64, denom: i64) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn real(numer: i64, denom: i64) -> Coeff {
    Complex::new(rational(numer, denom), BigRational::zero())
}

pub fn one() -> Coeff {
    Complex::one()
}

pub fn imag_unit() -> Coeff {
    Complex::new(BigRational::zero(), BigRational::one())
}

pub fn to_f64(c: &Coeff) -> num_complex::Complex64 {
    num_complex::Complex64::new(
        c.re.to_f64().unwrap_or(f64::NAN),
        c.im.to_f64().unwrap_or(f64::NAN),
    )
}

fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        format!("{}", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Renders a coefficient in the term grammar: `3/4`, `-2i`, `(1/2+3i)`.
pub fn format_coeff(c: &Coeff) -> String {
    match (c.re.is_zero(), c.im.is_zero()) {
        (_, true) => fmt_rational(&c.re),
        (true, false) => format!("{}i", fmt_rational(&c.im)),
        (false, false) => {
            let sign = if c.im.is_negative() { '-' } else { '+' };
            format!(
                "({}{}{}i)",
                fmt_rational(&c.re),
                sign,
                fmt_rational(&c.im.abs())
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats() {
        assert_eq!(format_coeff(&real(3, 4)), "3/4");
        assert_eq!(format_coeff(&real(-2, 1)), "-2");
        assert_eq!(format_coeff(&(imag_unit() * real(-2, 1))), "-2i");
        assert_eq!(
            format_coeff(&(real(1, 2) + imag_unit() * real(-3, 1))),
            "(1/2-3i)"
        );
    }
}
