//! Binary field snapshots.
//!
//! Layout, all little-endian:
//!
//! | field    | type                                   |
//! |----------|----------------------------------------|
//! | magic    | `b"GSW1"`                              |
//! | version  | `u32` (currently 1)                    |
//! | N        | `u32`                                  |
//! | L        | `f64`                                  |
//! | n        | `u32`                                  |
//! | alpha    | `f64`                                  |
//! | links    | `N³·3` × `f64`, site-major, axis-minor |
//! | spinors  | `N³·n·4` × `f64`, `(w, x, y, z)` per quaternion |
//! | B        | `N³·3·n²` × `(re, im)` `f64` pairs, row-major per link |
//!
//! Values are stored bit for bit, so a write/read cycle is exact.

use std::fs;
use std::path::Path;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::lattice::{BackgroundField, GaugeField, LatticeGeometry, SpinorField};
use crate::quat::Quaternion;

pub const MAGIC: [u8; 4] = *b"GSW1";
pub const VERSION: u32 = 1;
const HEADER_LEN: usize = 4 + 4 + 4 + 8 + 4 + 8;

/// A full configuration `(α, a, B, Ψ)` in double precision.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub alpha: f64,
    pub a: GaugeField<f64>,
    pub b: BackgroundField<f64>,
    pub psi: SpinorField<f64>,
}

impl Snapshot {
    pub fn new(alpha: f64, a: GaugeField<f64>, b: BackgroundField<f64>, psi: SpinorField<f64>) -> Result<Self> {
        a.geometry().ensure_same(psi.geometry())?;
        a.geometry().ensure_same(b.geometry())?;
        if b.n() != psi.n() {
            return Err(Error::GeometryMismatch(format!("background n = {} but spinor n = {}", b.n(), psi.n())));
        }
        Ok(Self { alpha, a, b, psi })
    }

    pub fn geometry(&self) -> &LatticeGeometry<f64> {
        self.a.geometry()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let g = self.geometry();
        let n = self.psi.n();
        let mut out = Vec::with_capacity(
            HEADER_LEN + 8 * (g.link_count() + 4 * n * g.site_count() + 2 * n * n * g.link_count()),
        );
        out.extend_from_slice(&MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&(g.sites_per_axis() as u32).to_le_bytes());
        out.extend_from_slice(&g.length().to_le_bytes());
        out.extend_from_slice(&(n as u32).to_le_bytes());
        out.extend_from_slice(&self.alpha.to_le_bytes());
        for t in self.a.angles() {
            out.extend_from_slice(&t.to_le_bytes());
        }
        for q in self.psi.data() {
            for v in q.to_array() {
                out.extend_from_slice(&v.to_le_bytes());
            }
        }
        for c in self.b.entries() {
            out.extend_from_slice(&c.re.to_le_bytes());
            out.extend_from_slice(&c.im.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader { bytes, pos: 0 };
        if r.take(4)? != MAGIC {
            return Err(Error::Snapshot("bad magic, not a GSW1 snapshot".into()));
        }
        let version = r.u32()?;
        if version != VERSION {
            return Err(Error::Snapshot(format!("unsupported version {version}, expected {VERSION}")));
        }
        let sites = r.u32()? as usize;
        let length = r.f64()?;
        let n = r.u32()? as usize;
        let alpha = r.f64()?;
        let geometry = LatticeGeometry::new(sites, length).map_err(|e| Error::Snapshot(e.to_string()))?;
        if n == 0 {
            return Err(Error::Snapshot("n = 0".into()));
        }
        let links = geometry.link_count();
        let expected = HEADER_LEN
            .checked_add(8 * (links + 4 * n * geometry.site_count() + 2 * n * n * links))
            .ok_or_else(|| Error::Snapshot("header sizes overflow".into()))?;
        if bytes.len() != expected {
            return Err(Error::Snapshot(format!("expected {expected} bytes, found {}", bytes.len())));
        }

        let angles = (0..links).map(|_| r.f64()).collect::<Result<Vec<_>>>()?;
        let mut data = Vec::with_capacity(n * geometry.site_count());
        for _ in 0..n * geometry.site_count() {
            data.push(Quaternion::from_array([r.f64()?, r.f64()?, r.f64()?, r.f64()?]));
        }
        let mut entries = Vec::with_capacity(n * n * links);
        for _ in 0..n * n * links {
            entries.push(Complex::new(r.f64()?, r.f64()?));
        }

        if angles.iter().any(|t| !(t.abs() <= std::f64::consts::PI)) {
            return Err(Error::Snapshot("link angle outside [-pi, pi]".into()));
        }
        let a = GaugeField::from_angles(geometry, angles).map_err(|e| Error::Snapshot(e.to_string()))?;
        let psi = SpinorField::from_data(geometry, n, data).map_err(|e| Error::Snapshot(e.to_string()))?;
        let b = BackgroundField::from_entries(geometry, n, entries).map_err(|e| Error::Snapshot(e.to_string()))?;
        Ok(Self { alpha, a, b, psi })
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_bytes())?;
        Ok(())
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = fs::read(path).map_err(|e| Error::Snapshot(format!("{}: {e}", path.display())))?;
        Self::from_bytes(&bytes)
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, len: usize) -> Result<&'a [u8]> {
        let end = self.pos + len;
        let chunk = self
            .bytes
            .get(self.pos..end)
            .ok_or_else(|| Error::Snapshot(format!("truncated at byte {}", self.pos)))?;
        self.pos = end;
        Ok(chunk)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}
