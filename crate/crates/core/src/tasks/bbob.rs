//! Black-box benchmark functions in raw form: the conditioning, oscillation
//! and asymmetry transforms of the BBOB definitions are kept, the random
//! rotations and optimum shifts are not (the task sampler adds offsets).
//! Every function is 0 at its canonical optimum.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math;

/// Optimum of `-z sin(sqrt|z|)` scaled to the unit box.
pub const SCHWEFEL_OPT: f64 = 4.209687462275036;
const SCHWEFEL_Z: f64 = 100.0 * SCHWEFEL_OPT;
const WEIERSTRASS_TERMS: i32 = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FunctionId {
    Sphere,
    Rosenbrock,
    Discus,
    Rastrigin,
    Schwefel,
    BuecheRastrigin,
    AttractiveSector,
    Weierstrass,
    SchaffersF7,
    GriewankRosenbrock,
}

impl FunctionId {
    pub const ALL: [FunctionId; 10] = [
        FunctionId::Sphere,
        FunctionId::Rosenbrock,
        FunctionId::Discus,
        FunctionId::Rastrigin,
        FunctionId::Schwefel,
        FunctionId::BuecheRastrigin,
        FunctionId::AttractiveSector,
        FunctionId::Weierstrass,
        FunctionId::SchaffersF7,
        FunctionId::GriewankRosenbrock,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FunctionId::Sphere => "sphere",
            FunctionId::Rosenbrock => "rosenbrock",
            FunctionId::Discus => "discus",
            FunctionId::Rastrigin => "rastrigin",
            FunctionId::Schwefel => "schwefel",
            FunctionId::BuecheRastrigin => "bueche_rastrigin",
            FunctionId::AttractiveSector => "attractive_sector",
            FunctionId::Weierstrass => "weierstrass",
            FunctionId::SchaffersF7 => "schaffers_f7",
            FunctionId::GriewankRosenbrock => "griewank_rosenbrock",
        }
    }

    /// Point where the function is exactly 0.
    pub fn optimum(self, dims: usize) -> Vec<f64> {
        let v = match self {
            FunctionId::Rosenbrock => 1.0,
            FunctionId::Schwefel => SCHWEFEL_OPT,
            FunctionId::GriewankRosenbrock => 0.5 / griewank_scale(dims),
            _ => 0.0,
        };
        alloc::vec![v; dims]
    }

    pub fn eval(self, x: &[f64]) -> f64 {
        match self {
            FunctionId::Sphere => sphere(x),
            FunctionId::Rosenbrock => rosenbrock(x),
            FunctionId::Discus => discus(x),
            FunctionId::Rastrigin => rastrigin(x),
            FunctionId::Schwefel => schwefel(x),
            FunctionId::BuecheRastrigin => bueche_rastrigin(x),
            FunctionId::AttractiveSector => attractive_sector(x),
            FunctionId::Weierstrass => weierstrass(x),
            FunctionId::SchaffersF7 => schaffers_f7(x),
            FunctionId::GriewankRosenbrock => griewank_rosenbrock(x),
        }
    }
}

impl fmt::Display for FunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FunctionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: alloc::string::String =
            s.trim().chars().filter(|c| *c != '_' && *c != '-').map(|c| c.to_ascii_lowercase()).collect();
        FunctionId::ALL
            .iter()
            .copied()
            .find(|f| f.name().replace('_', "") == key)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown function `{s}`")))
    }
}

pub fn eval_function(id: FunctionId, x: &[f64]) -> Result<f64> {
    if x.is_empty() {
        return Err(Error::InvalidArgument("empty input".into()));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("non-finite input".into()));
    }
    Ok(id.eval(x))
}

/// `(i / (D - 1))` in [0, 1], defined as 0 for D = 1.
fn frac(i: usize, d: usize) -> f64 {
    if d <= 1 {
        0.0
    } else {
        i as f64 / (d - 1) as f64
    }
}

/// Diagonal entry of the ill-conditioning matrix with condition `alpha`.
fn lambda(alpha: f64, i: usize, d: usize) -> f64 {
    math::powf(alpha, 0.5 * frac(i, d))
}

fn t_osz(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let xh = math::ln(math::abs(x));
    let (c1, c2) = if x > 0.0 { (10.0, 7.9) } else { (5.5, 3.1) };
    let mag = math::exp(xh + 0.049 * (math::sin(c1 * xh) + math::sin(c2 * xh)));
    if x > 0.0 {
        mag
    } else {
        -mag
    }
}

fn t_asy(beta: f64, x: f64, i: usize, d: usize) -> f64 {
    if x > 0.0 {
        math::powf(x, 1.0 + beta * frac(i, d) * math::sqrt(x))
    } else {
        x
    }
}

/// Boundary penalty `sum max(0, |x| - 5)^2`.
fn penalty(x: &[f64]) -> f64 {
    x.iter().map(|v| (math::abs(*v) - 5.0).max(0.0)).map(|v| v * v).sum()
}

fn rastrigin_core(z: &[f64]) -> f64 {
    let d = z.len() as f64;
    let cos_sum: f64 = z.iter().map(|v| math::cos(2.0 * PI * v)).sum();
    let sq: f64 = z.iter().map(|v| v * v).sum();
    10.0 * (d - cos_sum) + sq
}

fn sq(v: f64) -> f64 {
    v * v
}

fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

fn rosenbrock(x: &[f64]) -> f64 {
    x.windows(2).map(|w| 100.0 * sq(w[0] * w[0] - w[1]) + sq(w[0] - 1.0)).sum()
}

fn discus(x: &[f64]) -> f64 {
    1e6 * x[0] * x[0] + x[1..].iter().map(|v| v * v).sum::<f64>()
}

fn rastrigin(x: &[f64]) -> f64 {
    rastrigin_core(x)
}

fn schwefel_term(z: f64) -> f64 {
    -z * math::sin(math::sqrt(math::abs(z)))
}

fn schwefel(x: &[f64]) -> f64 {
    let d = x.len() as f64;
    let base = schwefel_term(SCHWEFEL_Z);
    let core: f64 = x.iter().map(|v| schwefel_term(100.0 * v) - base).sum::<f64>() / (100.0 * d);
    core + 100.0 * penalty(x)
}

fn bueche_rastrigin(x: &[f64]) -> f64 {
    let d = x.len();
    let z: Vec<f64> = x
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let t = t_osz(*v);
            let s = lambda(10.0, i, d);
            // odd coordinates in 1-based numbering are asymmetric
            if t > 0.0 && i % 2 == 0 {
                10.0 * s * t
            } else {
                s * t
            }
        })
        .collect();
    rastrigin_core(&z) + 100.0 * penalty(x)
}

fn attractive_sector(x: &[f64]) -> f64 {
    let d = x.len();
    let total: f64 = x
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let z = lambda(10.0, i, d) * v;
            let s = if z > 0.0 { 100.0 } else { 1.0 };
            (s * z) * (s * z)
        })
        .sum();
    math::powf(t_osz(total), 0.9)
}

fn weierstrass_sum(z: f64) -> f64 {
    (0..WEIERSTRASS_TERMS)
        .map(|k| math::powf(0.5, k as f64) * math::cos(2.0 * PI * math::powf(3.0, k as f64) * (z + 0.5)))
        .sum()
}

fn weierstrass(x: &[f64]) -> f64 {
    let d = x.len();
    let f0 = weierstrass_sum(0.0);
    let inner: f64 = x
        .iter()
        .enumerate()
        .map(|(i, v)| weierstrass_sum(lambda(0.01, i, d) * t_osz(*v)) - f0)
        .sum::<f64>()
        / d as f64;
    10.0 * inner * inner * inner + 10.0 / d as f64 * penalty(x)
}

fn schaffers_f7(x: &[f64]) -> f64 {
    let d = x.len();
    let pen = 10.0 * penalty(x);
    if d < 2 {
        return pen;
    }
    let z: Vec<f64> = x.iter().enumerate().map(|(i, v)| lambda(10.0, i, d) * t_asy(0.5, *v, i, d)).collect();
    let mean: f64 = z
        .windows(2)
        .map(|w| {
            let s = math::sqrt(w[0] * w[0] + w[1] * w[1]);
            let sin = math::sin(50.0 * math::powf(s, 0.2));
            math::sqrt(s) * (1.0 + sin * sin)
        })
        .sum::<f64>()
        / (d - 1) as f64;
    mean * mean + pen
}

fn griewank_scale(d: usize) -> f64 {
    (math::sqrt(d as f64) / 8.0).max(1.0)
}

fn griewank_rosenbrock(x: &[f64]) -> f64 {
    let d = x.len();
    if d < 2 {
        return 0.0;
    }
    let c = griewank_scale(d);
    let z: Vec<f64> = x.iter().map(|v| c * v + 0.5).collect();
    let total: f64 = z
        .windows(2)
        .map(|w| {
            let s = 100.0 * sq(w[0] * w[0] - w[1]) + sq(w[0] - 1.0);
            s / 4000.0 - math::cos(s) + 1.0
        })
        .sum();
    10.0 * total / (d - 1) as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_at_optimum() {
        for f in FunctionId::ALL {
            for d in 1..=10 {
                let v = f.eval(&f.optimum(d));
                assert_eq!(v, 0.0, "{f} d={d}");
            }
        }
    }

    #[test]
    fn nonnegative_and_finite_in_box() {
        let mut r = crate::rng::stream(5);
        for f in FunctionId::ALL {
            for d in 1..=10 {
                for _ in 0..200 {
                    let x: Vec<f64> = (0..d).map(|_| crate::rng::uniform(&mut r, -10.0, 10.0)).collect();
                    let v = f.eval(&x);
                    assert!(v.is_finite(), "{f} {x:?}");
                    assert!(v >= -1e-9, "{f} {x:?} {v}");
                }
            }
        }
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(FunctionId::Sphere.eval(&[1.0, -2.0, 3.0]), 14.0);
        assert!((FunctionId::Rastrigin.eval(&[0.5, 0.5]) - 40.5).abs() < 1e-12);
        assert_eq!(FunctionId::Rosenbrock.eval(&[0.0, 0.0]), 1.0);
        assert_eq!(FunctionId::Discus.eval(&[1.0, 2.0]), 1e6 + 4.0);
    }

    #[test]
    fn attractive_sector_is_asymmetric() {
        let f = FunctionId::AttractiveSector;
        assert!(f.eval(&[0.5, 0.0]) > f.eval(&[-0.5, 0.0]));
    }

    #[test]
    fn parse_names() {
        for f in FunctionId::ALL {
            assert_eq!(f.name().parse::<FunctionId>().unwrap(), f);
        }
        assert_eq!("GriewankRosenbrock".parse::<FunctionId>().unwrap(), FunctionId::GriewankRosenbrock);
        assert!("ackley".parse::<FunctionId>().is_err());
    }

    #[test]
    fn rejects_non_finite() {
        assert!(eval_function(FunctionId::Sphere, &[f64::NAN]).is_err());
        assert!(eval_function(FunctionId::Sphere, &[]).is_err());
    }
}
