//! Chemical master equation assembly on a finite state box.
//!
//! The generator of a network with `M` channels is
//! `A = Σ_m (J^{z^m} - J^0) diag(w^m)` where `J^z` is the truncated shift
//! by the stoichiometric vector `z` (Kronecker product of per-species
//! shifts) and `w^m` a rank-1 propensity. Each channel contributes two
//! rank-1 TT-operator terms, so the raw assembly has bond ranks at most
//! `2M`; callers round afterwards.

use crate::algebra::add_tt_matrix;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::tensor::{Shape, TtMatCore, TtMatrix};

/// Rank-1 propensity of one channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Propensity {
    /// `w(x) = c`.
    Const(f64),
    /// `w(x) = c · x_s` (0-based species index).
    Linear { species: usize, rate: f64 },
    /// `w(x) = b · x_s / (a + x_s)`.
    Hill { species: usize, a: f64, b: f64 },
}

/// One reaction channel: the shift vector `z` (the generator moves
/// probability from state `x + z` to `x`) and its propensity.
#[derive(Debug, Clone)]
pub struct Channel {
    pub shift_z: Vec<i64>,
    pub propensity: Propensity,
}

/// Handling of propensity mass that would leave the finite box.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryPolicy {
    /// The shift matrices are truncated nilpotent shifts; probability can
    /// leak through the cap and the leak is measured, not redistributed.
    Truncated,
    /// Propensities are clipped to zero on states whose transition would
    /// exit the box; the generator columns sum to zero exactly and mass is
    /// conserved.
    Reflecting,
}

#[derive(Debug, Clone)]
pub struct ReactionNetwork {
    pub caps: Vec<usize>,
    pub channels: Vec<Channel>,
    pub boundary: BoundaryPolicy,
}

impl ReactionNetwork {
    pub fn species(&self) -> usize {
        self.caps.len()
    }

    pub fn state_shape(&self) -> Result<Shape> {
        Shape::new(self.caps.clone())
    }

    pub fn validate(&self) -> Result<()> {
        if self.caps.is_empty() || self.caps.iter().any(|&n| n < 2) {
            return Err(Error::InvalidArgument("state caps must all be at least 2".into()));
        }
        for (m, ch) in self.channels.iter().enumerate() {
            if ch.shift_z.len() != self.species() {
                return Err(Error::InvalidArgument(format!(
                    "channel {m} has a shift of length {}, expected {}",
                    ch.shift_z.len(),
                    self.species()
                )));
            }
            for (i, (&z, &n)) in ch.shift_z.iter().zip(&self.caps).enumerate() {
                if z.unsigned_abs() as usize >= n {
                    return Err(Error::InvalidArgument(format!(
                        "channel {m} shifts species {} beyond its cap",
                        i + 1
                    )));
                }
            }
            let sp = match ch.propensity {
                Propensity::Const(c) => {
                    if !(c >= 0.0) {
                        return Err(Error::InvalidArgument(format!(
                            "channel {m} has a negative rate"
                        )));
                    }
                    None
                }
                Propensity::Linear { species, rate } => {
                    if !(rate >= 0.0) {
                        return Err(Error::InvalidArgument(format!(
                            "channel {m} has a negative rate"
                        )));
                    }
                    Some(species)
                }
                Propensity::Hill { species, a, b } => {
                    if !(a > 0.0) || !(b >= 0.0) {
                        return Err(Error::InvalidArgument(format!(
                            "channel {m} has invalid hill parameters"
                        )));
                    }
                    Some(species)
                }
            };
            if let Some(s) = sp {
                if s >= self.species() {
                    return Err(Error::InvalidArgument(format!(
                        "channel {m} references species {} of {}",
                        s + 1,
                        self.species()
                    )));
                }
            }
        }
        Ok(())
    }

    /// Parse the plain-text network format:
    ///
    /// ```text
    /// # comment
    /// species 3
    /// cap 16 16 16
    /// boundary reflecting          (optional; default truncated)
    /// channel -1 0 0 | const 0.7
    /// channel 0 -1 0 | hill 1 5 1
    /// channel 1 0 0  | linear 1 0.07
    /// ```
    ///
    /// Species indices inside propensity specs are 1-based, as in all
    /// user-facing text.
    pub fn parse(text: &str) -> Result<Self> {
        let mut species: Option<usize> = None;
        let mut caps: Vec<usize> = Vec::new();
        let mut channels = Vec::new();
        let mut boundary = BoundaryPolicy::Truncated;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut words = line.split_whitespace();
            let head = words.next().unwrap();
            let fail = |msg: &str| {
                Error::InvalidArgument(format!("network line {}: {msg}", lineno + 1))
            };
            match head {
                "species" => {
                    let d: usize = words
                        .next()
                        .and_then(|w| w.parse().ok())
                        .ok_or_else(|| fail("expected a species count"))?;
                    species = Some(d);
                }
                "cap" => {
                    caps = words
                        .map(|w| w.parse::<usize>().map_err(|_| fail("bad cap value")))
                        .collect::<Result<Vec<_>>>()?;
                }
                "boundary" => {
                    boundary = match words.next() {
                        Some("truncated") => BoundaryPolicy::Truncated,
                        Some("reflecting") => BoundaryPolicy::Reflecting,
                        _ => return Err(fail("boundary must be truncated or reflecting")),
                    };
                }
                "channel" => {
                    let d = species.ok_or_else(|| fail("species must come first"))?;
                    let rest: Vec<&str> = line["channel".len()..].split('|').collect();
                    if rest.len() != 2 {
                        return Err(fail("expected `channel z… | propensity`"));
                    }
                    let shift_z = rest[0]
                        .split_whitespace()
                        .map(|w| w.parse::<i64>().map_err(|_| fail("bad shift entry")))
                        .collect::<Result<Vec<_>>>()?;
                    if shift_z.len() != d {
                        return Err(fail("shift length differs from the species count"));
                    }
                    let spec: Vec<&str> = rest[1].split_whitespace().collect();
                    let prop = match spec.as_slice() {
                        ["const", c] => Propensity::Const(
                            c.parse().map_err(|_| fail("bad const rate"))?,
                        ),
                        ["linear", i, c] => Propensity::Linear {
                            species: i
                                .parse::<usize>()
                                .ok()
                                .and_then(|v| v.checked_sub(1))
                                .ok_or_else(|| fail("bad species index"))?,
                            rate: c.parse().map_err(|_| fail("bad linear rate"))?,
                        },
                        ["hill", i, a, b] => Propensity::Hill {
                            species: i
                                .parse::<usize>()
                                .ok()
                                .and_then(|v| v.checked_sub(1))
                                .ok_or_else(|| fail("bad species index"))?,
                            a: a.parse().map_err(|_| fail("bad hill offset"))?,
                            b: b.parse().map_err(|_| fail("bad hill scale"))?,
                        },
                        _ => return Err(fail("unknown propensity spec")),
                    };
                    channels.push(Channel { shift_z, propensity: prop });
                }
                other => {
                    return Err(fail(&format!("unknown directive `{other}`")));
                }
            }
        }
        let d = species.ok_or_else(|| Error::InvalidArgument("missing species line".into()))?;
        if caps.len() != d {
            return Err(Error::InvalidArgument(format!(
                "cap line has {} entries for {d} species",
                caps.len()
            )));
        }
        let net = ReactionNetwork { caps, channels, boundary };
        net.validate()?;
        Ok(net)
    }
}

/// Truncated shift matrix `J^z` of size `n`: ones on the `z`-th
/// superdiagonal for `z >= 0`, the transpose for `z < 0`.
pub fn shift_matrix(n: usize, z: i64) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    let k = z.unsigned_abs() as usize;
    if k >= n {
        return m;
    }
    for x in 0..n - k {
        if z >= 0 {
            m.set(x, x + k, 1.0);
        } else {
            m.set(x + k, x, 1.0);
        }
    }
    m
}

/// Per-species diagonal factors of a channel's rank-1 propensity, boundary
/// policy applied.
fn propensity_factors(net: &ReactionNetwork, ch: &Channel) -> Vec<Vec<f64>> {
    let mut factors: Vec<Vec<f64>> = net.caps.iter().map(|&n| vec![1.0; n]).collect();
    match ch.propensity {
        Propensity::Const(c) => {
            for v in factors[0].iter_mut() {
                *v *= c;
            }
        }
        Propensity::Linear { species, rate } => {
            for (x, v) in factors[species].iter_mut().enumerate() {
                *v = rate * x as f64;
            }
        }
        Propensity::Hill { species, a, b } => {
            for (x, v) in factors[species].iter_mut().enumerate() {
                *v = b * x as f64 / (a + x as f64);
            }
        }
    }
    if net.boundary == BoundaryPolicy::Reflecting {
        // Zero the propensity wherever the transition would exit the box:
        // source state y feeds target y - z, so y must satisfy y - z ∈ box.
        for (i, &z) in ch.shift_z.iter().enumerate() {
            let n = net.caps[i] as i64;
            for (y, v) in factors[i].iter_mut().enumerate() {
                let target = y as i64 - z;
                if target < 0 || target >= n {
                    *v = 0.0;
                }
            }
        }
    }
    factors
}

fn rank_one_operator(blocks: Vec<Matrix>) -> Result<TtMatrix> {
    let cores = blocks
        .into_iter()
        .map(|m| TtMatCore {
            left: 1,
            rows: m.rows,
            cols: m.cols,
            right: 1,
            data: m.data,
        })
        .collect();
    TtMatrix::new(cores)
}

/// Assemble the master-equation generator as a TT operator over the
/// species modes (sizes `N_1, …, N_d`). Bond ranks are at most `2M` before
/// rounding; columns of the dense form sum to zero on interior states (and
/// to the leak on capped states under the truncated policy).
pub fn cme_assemble(net: &ReactionNetwork) -> Result<TtMatrix> {
    net.validate()?;
    let shape = net.state_shape()?;
    if net.channels.is_empty() {
        let mut zero = TtMatrix::identity(&shape);
        zero.scale(0.0);
        return Ok(zero);
    }
    let mut total: Option<TtMatrix> = None;
    for ch in &net.channels {
        let w = propensity_factors(net, ch);
        // Gain term: ⊗_i J^{z_i} · diag(w_i).
        let gain_blocks: Vec<Matrix> = (0..net.species())
            .map(|i| {
                let shift = shift_matrix(net.caps[i], ch.shift_z[i]);
                let mut m = shift;
                for col in 0..net.caps[i] {
                    let scale = w[i][col];
                    for row in 0..net.caps[i] {
                        let v = m.get(row, col) * scale;
                        m.set(row, col, v);
                    }
                }
                m
            })
            .collect();
        // Loss term: -⊗_i diag(w_i), sign folded into the first factor.
        let loss_blocks: Vec<Matrix> = (0..net.species())
            .map(|i| {
                let mut m = Matrix::zeros(net.caps[i], net.caps[i]);
                for x in 0..net.caps[i] {
                    m.set(x, x, if i == 0 { -w[i][x] } else { w[i][x] });
                }
                m
            })
            .collect();
        for blocks in [gain_blocks, loss_blocks] {
            let term = rank_one_operator(blocks)?;
            total = Some(match total {
                None => term,
                Some(acc) => add_tt_matrix(&acc, &term)?,
            });
        }
    }
    Ok(total.unwrap())
}
