//! Globally adaptive Gauss–Kronrod (G10/K21) quadrature.
//!
//! The interval with the largest error estimate is bisected until the summed
//! error falls below `max(abs_tol, rel_tol * |I|)` or the subdivision budget
//! runs out. Semi-infinite ranges are mapped onto `[0, 1)` with
//! `x = a + u / (1 - u)`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Kronrod abscissae on `[-1, 1]` (non-negative half, descending).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

/// Kronrod weights matching `XGK`.
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077600525452124,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

/// Gauss weights for the odd-indexed Kronrod nodes (the 10-point rule).
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSettings {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum number of bisections before giving up.
    pub max_subdivisions: usize,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-9,
            max_subdivisions: 4000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub subdivisions: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
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

fn kronrod21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center);
    let mut kronrod = WGK[10] * fc;
    let mut gauss = 0.0;
    for (j, (&x, &w)) in XGK[..10].iter().zip(&WGK[..10]).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }

    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).abs();

    Segment {
        a,
        b,
        value,
        error: if error.is_nan() { f64::INFINITY } else { error },
    }
}

/// Integrate `f` over the finite interval `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, settings: &QuadratureSettings) -> Result<Estimate> {
    if a == b {
        return Ok(Estimate {
            value: 0.0,
            error: 0.0,
            subdivisions: 0,
        });
    }

    let mut heap = BinaryHeap::new();
    let first = kronrod21(&f, a, b);
    let mut total = first.value;
    let mut total_error = first.error;
    heap.push(first);

    let mut subdivisions = 0;
    loop {
        let tolerance = settings.abs_tol.max(settings.rel_tol * total.abs());
        if total_error <= tolerance && total.is_finite() {
            return Ok(Estimate {
                value: total,
                error: total_error,
                subdivisions,
            });
        }
        if subdivisions >= settings.max_subdivisions {
            return Err(Error::OracleFailure {
                subdivisions,
                estimate: total,
                error: total_error,
            });
        }

        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval collapsed to adjacent floats; no further progress possible.
            return Err(Error::OracleFailure {
                subdivisions,
                estimate: total,
                error: total_error,
            });
        }
        let left = kronrod21(&f, worst.a, mid);
        let right = kronrod21(&f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;

        // Re-sum periodically so the running error does not drift.
        if subdivisions % 64 == 0 {
            total = heap.iter().map(|s| s.value).sum();
            total_error = heap.iter().map(|s| s.error).sum();
        }
    }
}

/// Integrate `f` over `[a, ∞)`.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(f: F, a: f64, settings: &QuadratureSettings) -> Result<Estimate> {
    let mapped = |u: f64| {
        let w = 1.0 - u;
        let x = a + u / w;
        let v = f(x) / (w * w);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    integrate(mapped, 0.0, 1.0, settings)
}
