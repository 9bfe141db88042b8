//! JSON form of algebraic numbers: exact minimal polynomial, tower description and numerically
//! ordered roots.
//!
//! Roots of a minimal polynomial are ordered by the real part of a numerical approximation,
//! then by the imaginary part; `index` refers to that order, starting at 0.

use germcore::algebra::field::Fe;
use germcore::algebra::rational::{fmt_rational, to_f64, Rational};
use germcore::lab::AlgebraicValue;
use num_complex::Complex64;
use serde_json::{json, Value};

/// Durand-Kerner iteration count; the polynomials met here have small degree.
const ITERATIONS: usize = 500;

/// Approximate complex roots of `c_0 + c_1 t + ... + c_n t^n`, sorted by real then imaginary part.
pub fn approximate_roots(coeffs: &[Rational]) -> Vec<Complex64> {
    let n = coeffs.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = to_f64(&coeffs[n]);
    let a: Vec<Complex64> = coeffs
        .iter()
        .map(|c| Complex64::new(to_f64(c) / lead, 0.0))
        .collect();
    let eval = |z: Complex64| {
        a.iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    };
    let bound = 1.0 + a[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * bound).collect();
    for _ in 0..ITERATIONS {
        let mut moved = 0.0f64;
        for k in 0..n {
            let den = (0..n)
                .filter(|&m| m != k)
                .fold(Complex64::new(1.0, 0.0), |acc, m| acc * (z[k] - z[m]));
            if den.norm() == 0.0 {
                z[k] += Complex64::new(1e-9, 1e-9);
                continue;
            }
            let step = eval(z[k]) / den;
            z[k] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-15 {
            break;
        }
    }
    for r in z.iter_mut() {
        // roots of a real polynomial with negligible imaginary part are real
        if r.im.abs() < 1e-12 * (1.0 + r.re.abs()) {
            r.im = 0.0;
        }
    }
    z.sort_by(|p, q| p.re.total_cmp(&q.re).then(p.im.total_cmp(&q.im)));
    z
}

fn fmt_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{:.10}", z.re)
    } else {
        format!(
            "{:.10}{}{:.10}i",
            z.re,
            if z.im < 0.0 { "-" } else { "+" },
            z.im.abs()
        )
    }
}

fn minpoly_string(coeffs: &[Rational]) -> String {
    let mut terms = Vec::new();
    for (i, c) in coeffs.iter().enumerate().rev() {
        if *c == Rational::from_integer(0.into()) {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => "t".into(),
            _ => format!("t^{i}"),
        };
        let s = fmt_rational(c);
        terms.push(match (mono.is_empty(), s.as_str()) {
            (true, _) => s.clone(),
            (false, "1") => mono,
            (false, "-1") => format!("-{mono}"),
            _ => format!("{s}*{mono}"),
        });
    }
    terms.join(" + ").replace("+ -", "- ")
}

/// A whole conjugacy class: every root is listed with its index.
pub fn class_json(v: &AlgebraicValue) -> Value {
    let roots: Vec<Value> = approximate_roots(&v.minpoly)
        .into_iter()
        .enumerate()
        .map(|(k, z)| json!({"index": k, "approx": fmt_complex(z)}))
        .collect();
    json!({
        "minpoly": minpoly_string(&v.minpoly),
        "minpoly_coefficients": v.minpoly.iter().map(fmt_rational).collect::<Vec<_>>(),
        "exact": v.as_rational().map(|q| fmt_rational(&q)),
        "roots": roots,
    })
}

/// An element of a number-field tower. Rational elements print exactly; others carry their
/// minimal polynomial over `Q`, the tower they were computed in, and the conjugacy class.
pub fn element_json(t: &Fe) -> Value {
    let mut v = class_json(&AlgebraicValue::of(t));
    v["expression"] = json!(t.to_string());
    v["tower"] = json!(t.field().describe());
    v
}
