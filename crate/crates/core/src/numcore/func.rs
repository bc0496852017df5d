use std::fmt;
use std::sync::Arc;

use super::Interval;

/// Known non-smooth points of a function.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum Kinks {
    #[default]
    None,
    /// Finitely many points.
    Points(Vec<f64>),
    /// The lattice `offset + k * spacing`, `k` ranging over all integers.
    Lattice { offset: f64, spacing: f64 },
}

impl Kinks {
    /// Kink abscissas lying strictly inside `(a, b)`, sorted.
    pub fn inside(&self, a: f64, b: f64) -> Vec<f64> {
        let mut out = match self {
            Kinks::None => Vec::new(),
            Kinks::Points(pts) => pts.iter().copied().filter(|&x| x > a && x < b).collect(),
            Kinks::Lattice { offset, spacing } => {
                let k0 = ((a - offset) / spacing).floor() as i64;
                let k1 = ((b - offset) / spacing).ceil() as i64;
                (k0..=k1)
                    .map(|k| offset + k as f64 * spacing)
                    .filter(|&x| x > a && x < b)
                    .collect()
            }
        };
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }
}

/// A real function of one real variable, shareable across threads, together
/// with the locations where it fails to be smooth.
#[derive(Clone)]
pub struct Func {
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    kinks: Kinks,
}

impl Func {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Func {
            f: Arc::new(f),
            kinks: Kinks::None,
        }
    }

    pub fn with_kinks(mut self, kinks: Kinks) -> Self {
        self.kinks = kinks;
        self
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    pub fn kinks(&self) -> &Kinks {
        &self.kinks
    }

    pub fn kinks_in(&self, domain: &Interval) -> Vec<f64> {
        self.kinks.inside(domain.a(), domain.b())
    }

    /// `x ↦ alpha * f(x)`, keeping the kink set.
    pub fn scaled(&self, alpha: f64) -> Func {
        let f = self.f.clone();
        Func {
            f: Arc::new(move |x| alpha * f(x)),
            kinks: self.kinks.clone(),
        }
    }
}

impl fmt::Debug for Func {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Func")
            .field("kinks", &self.kinks)
            .finish_non_exhaustive()
    }
}
