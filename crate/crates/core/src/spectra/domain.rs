use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::math::PI;

/// Verification domain.
#[derive(Debug, Clone, PartialEq)]
pub enum DomainKind {
    Interval { length: f64 },
    Rectangle { a: f64, b: f64 },
    Disk { radius: f64 },
    Torus { lengths: Vec<f64> },
}

/// A domain together with its volume and boundary volume.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainSpec {
    kind: DomainKind,
}

impl DomainSpec {
    pub fn new(kind: DomainKind) -> Result<Self, &'static str> {
        let sizes: Vec<f64> = match &kind {
            DomainKind::Interval { length } => alloc::vec![*length],
            DomainKind::Rectangle { a, b } => alloc::vec![*a, *b],
            DomainKind::Disk { radius } => alloc::vec![*radius],
            DomainKind::Torus { lengths } => lengths.clone(),
        };
        if sizes.is_empty() || sizes.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
            return Err("domain sizes must be positive and finite");
        }
        Ok(Self { kind })
    }

    pub fn interval(length: f64) -> Self {
        Self::new(DomainKind::Interval { length }).expect("positive length")
    }

    pub fn rectangle(a: f64, b: f64) -> Self {
        Self::new(DomainKind::Rectangle { a, b }).expect("positive sides")
    }

    pub fn disk(radius: f64) -> Self {
        Self::new(DomainKind::Disk { radius }).expect("positive radius")
    }

    pub fn torus(lengths: Vec<f64>) -> Self {
        Self::new(DomainKind::Torus { lengths }).expect("positive lengths")
    }

    pub fn kind(&self) -> &DomainKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            DomainKind::Interval { .. } => 1,
            DomainKind::Rectangle { .. } | DomainKind::Disk { .. } => 2,
            DomainKind::Torus { lengths } => lengths.len(),
        }
    }

    pub fn vol(&self) -> f64 {
        match &self.kind {
            DomainKind::Interval { length } => *length,
            DomainKind::Rectangle { a, b } => a * b,
            DomainKind::Disk { radius } => PI * radius * radius,
            DomainKind::Torus { lengths } => lengths.iter().product(),
        }
    }

    /// Boundary volume; an interval has two boundary points.
    pub fn vol_boundary(&self) -> f64 {
        match &self.kind {
            DomainKind::Interval { .. } => 2.0,
            DomainKind::Rectangle { a, b } => 2.0 * (a + b),
            DomainKind::Disk { radius } => 2.0 * PI * radius,
            DomainKind::Torus { .. } => 0.0,
        }
    }

    pub fn has_boundary(&self) -> bool {
        !matches!(self.kind, DomainKind::Torus { .. })
    }
}

impl fmt::Display for DomainSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            DomainKind::Interval { length } => write!(f, "interval:{length}"),
            DomainKind::Rectangle { a, b } => write!(f, "rectangle:{a}x{b}"),
            DomainKind::Disk { radius } => write!(f, "disk:{radius}"),
            DomainKind::Torus { lengths } => {
                f.write_str("torus:")?;
                for (i, l) in lengths.iter().enumerate() {
                    if i > 0 {
                        f.write_str("x")?;
                    }
                    write!(f, "{l}")?;
                }
                Ok(())
            }
        }
    }
}

/// Parses `interval:L`, `rectangle:AxB`, `disk:R`, `torus:L1xL2x…`; sizes may
/// be written as multiples of pi, e.g. `2pi` or `pi`.
impl FromStr for DomainSpec {
    type Err = &'static str;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (kind, rest) = s.split_once(':').ok_or("expected `kind:size`")?;
        let sizes: Vec<f64> = rest.split('x').map(parse_size).collect::<Result<_, _>>()?;
        let kind = match (kind, sizes.as_slice()) {
            ("interval", [l]) => DomainKind::Interval { length: *l },
            ("rectangle", [a, b]) => DomainKind::Rectangle { a: *a, b: *b },
            ("disk", [r]) => DomainKind::Disk { radius: *r },
            ("torus", ls) if !ls.is_empty() => DomainKind::Torus { lengths: ls.to_vec() },
            ("interval" | "rectangle" | "disk", _) => return Err("wrong number of sizes for domain"),
            _ => return Err("unknown domain kind (interval, rectangle, disk, torus)"),
        };
        DomainSpec::new(kind)
    }
}

fn parse_size(s: &str) -> Result<f64, &'static str> {
    let s = s.trim();
    if let Some(prefix) = s.strip_suffix("pi") {
        let factor = if prefix.is_empty() {
            1.0
        } else {
            prefix.trim_end_matches('*').parse::<f64>().map_err(|_| "invalid size")?
        };
        return Ok(factor * PI);
    }
    s.parse::<f64>().map_err(|_| "invalid size")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_volumes() {
        let d = DomainSpec::disk(1.0);
        assert!((d.vol() - PI).abs() < 1e-15);
        assert!((d.vol_boundary() - 2.0 * PI).abs() < 1e-15);
        assert_eq!(DomainSpec::torus(alloc::vec![1.0, 2.0]).vol_boundary(), 0.0);
        assert_eq!(DomainSpec::interval(3.0).vol_boundary(), 2.0);
    }

    #[test]
    fn parsing() {
        let d: DomainSpec = "torus:2pix2pi".parse().unwrap();
        assert!((d.vol() - 4.0 * PI * PI).abs() < 1e-12);
        let r: DomainSpec = "rectangle:1x2".parse().unwrap();
        assert_eq!(r.vol(), 2.0);
        assert_eq!("interval:pi".parse::<DomainSpec>().unwrap().dim(), 1);
        assert!("disk:-1".parse::<DomainSpec>().is_err());
        assert!("sphere:1".parse::<DomainSpec>().is_err());
    }
}
