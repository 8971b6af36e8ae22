//! Modified Bessel functions of the first kind, orders 0 and 1.
//!
//! Power series up to `x = 15`, Hankel asymptotic expansion beyond. Both
//! branches carry at least twelve significant digits at the switch point.

use crate::error::{Error, Result};

/// First positive zero of `J_0`.
pub const J0_FIRST_ZERO: f64 = 2.404_825_557_695_773;

/// First positive zero of `J_1`.
pub const J1_FIRST_ZERO: f64 = 3.831_705_970_207_512;

const SERIES_LIMIT: f64 = 15.0;
const MAX_ARGUMENT: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BesselOrder {
    Zero,
    One,
}

impl BesselOrder {
    fn nu(self) -> f64 {
        match self {
            BesselOrder::Zero => 0.0,
            BesselOrder::One => 1.0,
        }
    }
}

impl TryFrom<u32> for BesselOrder {
    type Error = Error;

    fn try_from(order: u32) -> Result<Self> {
        match order {
            0 => Ok(BesselOrder::Zero),
            1 => Ok(BesselOrder::One),
            _ => Err(Error::Domain(format!("bessel order {order} not supported"))),
        }
    }
}

/// `I_ν(x)` for `ν ∈ {0, 1}` and `0 <= x <= 700`.
pub fn bessel_i(order: BesselOrder, x: f64) -> Result<f64> {
    if !(0.0..=MAX_ARGUMENT).contains(&x) {
        return Err(Error::Domain(format!(
            "bessel argument {x} outside [0, {MAX_ARGUMENT}]"
        )));
    }
    Ok(if x <= SERIES_LIMIT {
        series(order, x)
    } else {
        asymptotic(order, x)
    })
}

pub fn bessel_i0(x: f64) -> Result<f64> {
    bessel_i(BesselOrder::Zero, x)
}

pub fn bessel_i1(x: f64) -> Result<f64> {
    bessel_i(BesselOrder::One, x)
}

fn series(order: BesselOrder, x: f64) -> f64 {
    let y = 0.25 * x * x;
    // term_k = (x/2)^{2k+ν} / (k! (k+ν)!)
    let (mut term, offset) = match order {
        BesselOrder::Zero => (1.0, 0.0),
        BesselOrder::One => (0.5 * x, 1.0),
    };
    let mut sum = term;
    for k in 1..200 {
        let k = k as f64;
        term *= y / (k * (k + offset));
        sum += term;
        if term <= sum * 1e-17 {
            break;
        }
    }
    sum
}

fn asymptotic(order: BesselOrder, x: f64) -> f64 {
    let mu = 4.0 * order.nu() * order.nu();
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut previous = f64::INFINITY;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        term *= -(mu - odd * odd) / (k as f64 * 8.0 * x);
        // The series is divergent; stop at its smallest term.
        if term.abs() >= previous {
            break;
        }
        previous = term.abs();
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    // Split the exponential so e^x / sqrt(x) does not overflow near x = 700.
    let half = (0.5 * x).exp();
    half * (half / (2.0 * std::f64::consts::PI * x).sqrt()) * sum
}
