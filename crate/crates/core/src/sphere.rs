//! Deterministic direction samplings of `S^{n−1}`.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::system::Direction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplingScheme {
    ExactPair,
    UniformAngle,
    Fibonacci,
    /// seeded Gaussian directions, used for n ≥ 4
    Random,
    Custom,
}

#[derive(Debug, Clone)]
pub struct SphereSampling {
    n: usize,
    points: Vec<Direction>,
    scheme: SamplingScheme,
}

impl SphereSampling {
    /// `count` is ignored for n = 1, where `{+1, −1}` is exact.
    pub fn new(n: usize, count: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("sphere dimension must be positive".into()));
        }
        if n > 1 && count == 0 {
            return Err(Error::InvalidParameter("sample count must be positive".into()));
        }
        let (points, scheme) = match n {
            1 => (vec![Direction::axis(1, 0), Direction::axis(1, 0).neg()], SamplingScheme::ExactPair),
            2 => {
                let pts = (0..count)
                    .map(|k| {
                        let t = 2.0 * PI * k as f64 / count as f64;
                        Direction::normalized(&[t.cos(), t.sin()]).expect("unit circle point")
                    })
                    .collect();
                (pts, SamplingScheme::UniformAngle)
            }
            3 => (fibonacci(count), SamplingScheme::Fibonacci),
            _ => {
                let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
                let pts = (0..count)
                    .map(|_| {
                        let v: Vec<f64> = (0..n).map(|_| gaussian(&mut rng)).collect();
                        Direction::normalized(&v).expect("nonzero gaussian sample")
                    })
                    .collect();
                (pts, SamplingScheme::Random)
            }
        };
        Ok(SphereSampling { n, points, scheme })
    }

    /// 1 → exact pair, 2 → 256 angles, 3 → 512 Fibonacci points.
    pub fn default_for(n: usize) -> Result<Self> {
        let count = match n {
            1 => 2,
            2 => 256,
            _ => 512,
        };
        Self::new(n, count)
    }

    pub fn from_points(n: usize, points: Vec<Direction>) -> Result<Self> {
        if points.is_empty() || points.iter().any(|p| p.dim() != n) {
            return Err(Error::Dimension(format!("all sample points must lie in S^{}", n - 1)));
        }
        Ok(SphereSampling { n, points, scheme: SamplingScheme::Custom })
    }

    /// Union with another sampling of the same dimension.
    pub fn union(&self, other: &SphereSampling) -> Result<Self> {
        let mut pts = self.points.clone();
        pts.extend(other.points.iter().filter(|p| !self.points.contains(p)).cloned());
        Self::from_points(self.n, pts)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Direction] {
        &self.points
    }

    pub fn scheme(&self) -> SamplingScheme {
        self.scheme
    }
}

fn fibonacci(count: usize) -> Vec<Direction> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / count as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * i as f64;
            Direction::normalized(&[r * phi.cos(), r * phi.sin(), z]).expect("unit sphere point")
        })
        .collect()
}

fn gaussian(rng: &mut impl Rng) -> f64 {
    // Box–Muller
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
}
