use crate::error::{Error, Result};
use crate::fueter::zero_set::ZeroSetReport;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Positive,
    Negative,
}

impl Orientation {
    pub fn sign(self) -> i64 {
        match self {
            Orientation::Positive => 1,
            Orientation::Negative => -1,
        }
    }

    pub fn from_sign(sign: i64) -> Option<Self> {
        match sign {
            1 => Some(Orientation::Positive),
            -1 => Some(Orientation::Negative),
            _ => None,
        }
    }
}

/// Multiplicity and orientation of one component, oriented relative to its normalized winding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComponentData {
    pub multiplicity: u32,
    pub orientation: Option<Orientation>,
}

impl ComponentData {
    pub fn new(multiplicity: u32, orientation: Orientation) -> Self {
        Self { multiplicity, orientation: Some(orientation) }
    }
}

/// `k_i = Σ θ·or·(winding)_i`: the signed weighted intersection number of the zero
/// curves with the coordinate torus normal to `x_i`.
pub fn zero_set_class<T: Real>(report: &ZeroSetReport<T>, data: &[ComponentData]) -> Result<[i64; 3]> {
    if data.len() != report.components.len() {
        return Err(Error::InvalidParameter(format!(
            "{} component records for {} components",
            data.len(),
            report.components.len()
        )));
    }
    let mut class = [0i64; 3];
    for (c, (comp, meta)) in report.components.iter().zip(data).enumerate() {
        let orientation = meta.orientation.ok_or(Error::UnorientedComponent(c))?;
        if meta.multiplicity == 0 {
            return Err(Error::InvalidParameter(format!("component {c} has multiplicity 0")));
        }
        if comp.period_rank > 1 {
            return Err(Error::NotACurve { component: c, rank: comp.period_rank });
        }
        let weight = i64::from(meta.multiplicity) * orientation.sign();
        for (k, w) in class.iter_mut().zip(comp.winding) {
            *k += weight * w;
        }
    }
    Ok(class)
}
