//! Exact rational scalars. No floating point exists anywhere in this crate.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with positive
/// denominator (enforced by `Ratio::new`).
pub type Rational = BigRational;

/// Integer as a rational.
pub fn rat(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Fraction `n/d`, reduced.
pub fn frac(n: i64, d: i64) -> Rational {
    assert!(d != 0, "zero denominator");
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Serialized form used in every output format: "p/q", or "p" when q = 1.
pub fn format_rat(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse "p" or "p/q".
pub fn parse_rat(s: &str) -> Result<Rational> {
    let parse_int = |t: &str, pos: usize| -> Result<BigInt> {
        t.parse::<BigInt>().map_err(|_| Error::Parse {
            pos,
            msg: format!("invalid integer {t:?}"),
        })
    };
    match s.find('/') {
        None => Ok(BigRational::from_integer(parse_int(s, 0)?)),
        Some(i) => {
            let num = parse_int(&s[..i], 0)?;
            let den = parse_int(&s[i + 1..], i + 1)?;
            if den.is_zero() {
                return Err(Error::Parse {
                    pos: i + 1,
                    msg: "zero denominator".into(),
                });
            }
            Ok(BigRational::new(num, den))
        }
    }
}
