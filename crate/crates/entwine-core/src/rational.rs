//! Exact rational scalars.
//!
//! Thin layer over [`num::BigRational`]: arbitrary-precision, always in
//! lowest terms with positive denominator, so equality is structural and
//! arithmetic never rounds.

use crate::{Error, Result};
use num::bigint::BigInt;
use num::traits::{One, Signed, Zero};

/// The scalar field. `num` keeps values reduced with denominator > 0.
pub type Rational = num::BigRational;

/// Rational from an integer pair; panics on zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from an integer.
pub fn rint(num: i64) -> Rational {
    Rational::from_integer(BigInt::from(num))
}

pub fn is_zero(r: &Rational) -> bool {
    r.is_zero()
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn zero() -> Rational {
    Rational::zero()
}

/// Canonical display form: `p` for integers, `p/q` otherwise, `-` up front.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `"p"` or `"p/q"` with optional sign; used by the JSON interchange
/// format, which never carries floats.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num_s, den_s) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num_s
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational numerator {s:?}")))?;
    let den: BigInt = den_s
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational denominator {s:?}")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

/// Element vectors (dense, small) over a fixed basis.
pub type Vector = Vec<Rational>;

pub fn zero_vec(dim: usize) -> Vector {
    vec![zero(); dim]
}

pub fn basis_vec(dim: usize, i: usize) -> Vector {
    let mut v = zero_vec(dim);
    v[i] = one();
    v
}

pub fn vec_is_zero(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn add_assign_scaled(dst: &mut [Rational], src: &[Rational], c: &Rational) {
    if c.is_zero() {
        return;
    }
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d += s * c;
        }
    }
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "5", "-7", "3/4", "-22/7"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(format_rational(&r), s);
        }
        // reduction and sign normalization
        assert_eq!(format_rational(&parse_rational("4/8").unwrap()), "1/2");
        assert_eq!(format_rational(&parse_rational("1/-2").unwrap()), "-1/2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn exactness() {
        let third = rat(1, 3);
        let sum = &third + &third + &third;
        assert_eq!(sum, one());
    }
}
