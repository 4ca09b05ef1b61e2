//! JSON number formatting.
//!
//! Integral values below 2^53 print as integers (`1`, not `1.0`); everything
//! else uses the shortest decimal that reads back to the same double, which
//! is the full precision of the value. Non-finite values print as `null`.
//! Result fields print a signed zero as `0`; matrix entries keep the sign.

use num_complex::Complex64;
use serde_json::{Number, Value};

const EXACT_INT: f64 = 9_007_199_254_740_992.0;

pub fn number(x: f64) -> Value {
    exact(if x == 0.0 { 0.0 } else { x })
}

pub fn complex(z: Complex64) -> Value {
    Value::Array(vec![number(z.re), number(z.im)])
}

/// Like [`number`] but keeps the sign of zero.
pub fn exact(x: f64) -> Value {
    if x.is_finite() && x.fract() == 0.0 && x.abs() < EXACT_INT && !(x == 0.0 && x.is_sign_negative()) {
        Value::from(x as i64)
    } else {
        Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
    }
}

pub fn exact_complex(z: Complex64) -> Value {
    Value::Array(vec![exact(z.re), exact(z.im)])
}

pub fn optional(x: Option<f64>) -> Value {
    x.map(number).unwrap_or(Value::Null)
}
