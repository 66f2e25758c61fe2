//! PCP-Vectors to diameter under the product metric: the l2 norm, over rows,
//! of the per-row l-infinity distance.

use rayon::prelude::*;
use thiserror::Error;

use crate::gadget_ip::BestPair;
use crate::pcp::{AliceVector, PcpVectorsInstance};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiamError {
    #[error("point shapes differ: {0:?} vs {1:?}")]
    ShapeMismatch((usize, usize), (usize, usize)),
    #[error("invalid point {index}: {msg}")]
    Invalid { index: usize, msg: String },
    #[error("point set is empty")]
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointSide {
    X,
    Y,
}

impl PointSide {
    pub fn as_str(self) -> &'static str {
        match self {
            PointSide::X => "x",
            PointSide::Y => "y",
        }
    }
}

/// Row-major `rows x cols` array of entries in `{-1, 0, 1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductPoint {
    pub side: PointSide,
    pub rows: usize,
    pub cols: usize,
    pub coords: Vec<i8>,
}

impl ProductPoint {
    pub fn row(&self, ell: usize) -> &[i8] {
        &self.coords[ell * self.cols..(ell + 1) * self.cols]
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.coords.len() != self.rows * self.cols {
            return Err(format!("{} coordinates for a {}x{} point", self.coords.len(), self.rows, self.cols));
        }
        match self.side {
            PointSide::X => {
                if self.coords.iter().any(|&c| c != 0 && c != 1) {
                    return Err("x-side entry outside {0, 1}".into());
                }
            }
            PointSide::Y => {
                for ell in 0..self.rows {
                    let row = self.row(ell);
                    if row.iter().any(|&c| c != 0 && c != -1) || row.iter().filter(|&&c| c == -1).count() != 1 {
                        return Err(format!("y-side row {ell} is not a negated one-hot row"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Entry `(l, s)` is 1 iff some column of row `l` of `a` holds `s`.
pub fn embed_x(a: &AliceVector, sigma: usize) -> ProductPoint {
    let rows = a.rows();
    let mut coords = vec![0i8; rows * sigma];
    if !a.is_rejecting() {
        for ell in 0..rows {
            for s in a.row_symbols(ell) {
                coords[ell * sigma + s as usize] = 1;
            }
        }
    }
    ProductPoint { side: PointSide::X, rows, cols: sigma, coords }
}

/// Entry `(l, s)` is -1 iff `b_l = s`.
pub fn embed_y(b: &[u32], sigma: usize) -> ProductPoint {
    let mut coords = vec![0i8; b.len() * sigma];
    for (ell, &s) in b.iter().enumerate() {
        coords[ell * sigma + s as usize] = -1;
    }
    ProductPoint { side: PointSide::Y, rows: b.len(), cols: sigma, coords }
}

/// Squared distance, summed exactly in integers.
pub fn delta_2_inf_sq(p: &ProductPoint, r: &ProductPoint) -> Result<u64, DiamError> {
    if (p.rows, p.cols) != (r.rows, r.cols) || p.coords.len() != r.coords.len() {
        return Err(DiamError::ShapeMismatch((p.rows, p.cols), (r.rows, r.cols)));
    }
    Ok((0..p.rows)
        .map(|ell| {
            let m = p.row(ell).iter().zip(r.row(ell)).map(|(&a, &b)| (i16::from(a) - i16::from(b)).unsigned_abs()).max().unwrap_or(0);
            u64::from(m) * u64::from(m)
        })
        .sum())
}

pub fn delta_2_inf(p: &ProductPoint, r: &ProductPoint) -> Result<f64, DiamError> {
    Ok((delta_2_inf_sq(p, r)? as f64).sqrt())
}

/// One point set holding every x-side point followed by every y-side point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiameterInstance {
    pub l: usize,
    pub sigma: usize,
    pub points: Vec<ProductPoint>,
}

impl DiameterInstance {
    pub fn validate(&self) -> Result<(), DiamError> {
        if self.points.is_empty() {
            return Err(DiamError::Empty);
        }
        for (index, p) in self.points.iter().enumerate() {
            if (p.rows, p.cols) != (self.l, self.sigma) {
                return Err(DiamError::Invalid { index, msg: format!("shape {}x{} expected {}x{}", p.rows, p.cols, self.l, self.sigma) });
            }
            p.validate().map_err(|msg| DiamError::Invalid { index, msg })?;
        }
        Ok(())
    }

    pub fn side_count(&self, side: PointSide) -> usize {
        self.points.iter().filter(|p| p.side == side).count()
    }
}

pub fn build_diameter_instance(pv: &PcpVectorsInstance) -> DiameterInstance {
    let sigma = pv.sigma_size();
    let mut points: Vec<ProductPoint> = pv.a.par_iter().map(|a| embed_x(a, sigma)).collect();
    points.extend(pv.b.iter().map(|b| embed_y(b, sigma)));
    DiameterInstance { l: pv.l, sigma, points }
}

/// Farthest pair `i < j` by squared distance, smallest indices on ties.
/// A single point is its own farthest pair at distance 0.
pub fn brute_force_diameter(inst: &DiameterInstance) -> Result<BestPair, DiamError> {
    inst.validate()?;
    let n = inst.points.len();
    if n == 1 {
        return Ok(BestPair { a: 0, b: 0, value: 0 });
    }
    let rows: Vec<Option<BestPair>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut best: Option<BestPair> = None;
            for j in i + 1..n {
                let v = delta_2_inf_sq(&inst.points[i], &inst.points[j]).expect("validated shapes") as i64;
                if best.is_none_or(|b| v > b.value) {
                    best = Some(BestPair { a: i, b: j, value: v });
                }
            }
            best
        })
        .collect();
    let mut best = rows[0].expect("n >= 2");
    for b in rows.into_iter().flatten() {
        if b.value > best.value {
            best = b;
        }
    }
    Ok(best)
}

/// Largest squared distance between two points on the same side.
pub fn max_same_side_sq(inst: &DiameterInstance) -> Result<u64, DiamError> {
    inst.validate()?;
    let n = inst.points.len();
    Ok((0..n)
        .into_par_iter()
        .map(|i| {
            (i + 1..n)
                .filter(|&j| inst.points[i].side == inst.points[j].side)
                .map(|j| delta_2_inf_sq(&inst.points[i], &inst.points[j]).expect("validated"))
                .max()
                .unwrap_or(0)
        })
        .max()
        .unwrap_or(0))
}
